//! Brute-force search for operators over a finite field.

use crate::enumerate::{collect_indexed, space_size, vector_at};
use crate::error::Result;
use crate::field::Scalar;
use crate::leibniz::LeibnizGRep;
use crate::linalg::Matrix;
use crate::rbo::is_weighted_relative_rbo;
use crate::tensor::LinearMap;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchResult {
    /// Number of maps tried, `p^{n_g n_h}`.
    pub examined: u64,
    /// The operators found, with matrix entries (row-major) in lexicographic order.
    pub operators: Vec<LinearMap>,
}

/// Every `T: h → g` satisfying the operator identity with weight `weight`.
/// The context itself is not validated.
pub fn search_rbos(
    d: &LeibnizGRep,
    weight: &Scalar,
    cap: u128,
    jobs: usize,
) -> Result<SearchResult> {
    let field = d.field();
    let (ng, nh) = (d.g_dim(), d.h_dim());
    let examined = space_size(field, ng * nh, cap, "maps h -> g")?;
    let operators = collect_indexed(examined, jobs, |i| {
        let t = LinearMap::new(Matrix::from_data(
            field,
            ng,
            nh,
            vector_at(field, ng * nh, i),
        )?);
        Ok(is_weighted_relative_rbo(d, weight, &t)?.then_some(t))
    })?;
    Ok(SearchResult {
        examined,
        operators,
    })
}

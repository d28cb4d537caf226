//! Cohomology of a weighted relative Rota-Baxter operator: the Leibniz
//! cohomology of `h_T` with coefficients in `g` via
//! `ϱ^L(u,x) = [Tu,x] - Tρ^R(u,x)` and `ϱ^R(x,u) = [x,Tu] - Tρ^L(x,u)`.
//!
//! Cochains `C^n = Hom(h^{⊗n}, g)` are flattened lexicographically over
//! `(source tuple, target index)`; matrices of δ use this order for rows and
//! columns, so cocycle bases are reproducible.

use crate::bracket::{derived_bracket_explicit, differential_d_explicit};
use crate::error::{Error, Result};
use crate::field::{vector, Scalar};
use crate::leibniz::{cochain_basis, leibniz_differential, omit, substituted_args, ActionPair};
use crate::linalg::{quotient_dim, span_rank, Matrix};
use crate::rbo::WeightedRBO;
use crate::tensor::{Bilinear, LinearMap, MultiMap};

/// Default cap on the number of coefficients of a cochain space.
pub const DEFAULT_COCHAIN_CAP: usize = 20_000;

/// `(ϱ^L, ϱ^R)`: `g` as a representation of the induced algebra `h_T`.
pub fn induced_representation(r: &WeightedRBO) -> Result<ActionPair> {
    r.ensure_valid()?;
    Ok(induced_representation_unchecked(r))
}

pub(crate) fn induced_representation_unchecked(r: &WeightedRBO) -> ActionPair {
    let d = r.context();
    let t = r.map();
    let (ng, nh) = (d.g_dim(), d.h_dim());
    let field = d.field();
    let left = Bilinear::from_fn(field, nh, ng, ng, |u, x| {
        let mut out = d.g().structure().apply_right_basis(&t.image(u), x);
        vector::sub_assign(&mut out, &t.apply(d.actions().right().value(u, x)));
        out
    });
    let right = Bilinear::from_fn(field, ng, nh, ng, |x, u| {
        let mut out = d.g().structure().apply_left_basis(x, &t.image(u));
        vector::sub_assign(&mut out, &t.apply(d.actions().left().value(x, u)));
        out
    });
    ActionPair::new(left, right).expect("shapes agree")
}

fn check_cochain(r: &WeightedRBO, f: &MultiMap) -> Result<()> {
    let d = r.context();
    if f.source_dim() != d.h_dim() || f.target_dim() != d.g_dim() {
        return Err(Error::shape(format!(
            "cochain {} -> {} for an operator {} -> {}",
            f.source_dim(),
            f.target_dim(),
            d.h_dim(),
            d.g_dim()
        )));
    }
    if f.field() != d.field() {
        return Err(Error::WrongField(format!(
            "cochain is not over {}",
            d.field()
        )));
    }
    Ok(())
}

/// The differential of the operator's cochain complex, evaluated directly
/// from `T`, the actions and both brackets. Arity 0 cochains are elements of
/// `g`, with `(δx)(u) = Tρ^L(x,u) - [x,Tu]`.
pub fn delta_t(r: &WeightedRBO, f: &MultiMap) -> Result<MultiMap> {
    check_cochain(r, f)?;
    let d = r.context();
    let t = r.map();
    let g = d.g();
    let (l, rr) = (d.actions().left(), d.actions().right());
    let n = f.arity();
    let field = d.field();
    let hb = r.induced_bracket();
    let images: Vec<Vec<Scalar>> = (0..d.h_dim()).map(|u| t.image(u)).collect();
    Ok(MultiMap::from_fn(
        field,
        n + 1,
        d.h_dim(),
        d.g_dim(),
        |us| {
            let mut out = vector::zeros(field, d.g_dim());
            for i in 0..n {
                let fv = f.value(&omit(us, i));
                let mut term = g.bracket(&images[us[i]], fv);
                vector::sub_assign(&mut term, &t.apply(&rr.apply_left_basis(us[i], fv)));
                if i % 2 == 0 {
                    vector::add_assign(&mut out, &term);
                } else {
                    vector::sub_assign(&mut out, &term);
                }
            }
            let fv = f.value(&us[..n]);
            let mut term = g.bracket(fv, &images[us[n]]);
            vector::sub_assign(&mut term, &t.apply(&l.apply_right_basis(fv, us[n])));
            if n % 2 == 1 {
                vector::add_assign(&mut out, &term);
            } else {
                vector::sub_assign(&mut out, &term);
            }
            for i in 0..=n {
                for j in i + 1..=n {
                    let w = hb.bracket_basis(us[i], us[j]);
                    if vector::is_zero(w) {
                        continue;
                    }
                    let term = f.eval(&substituted_args(us, i, j, w));
                    if i % 2 == 0 {
                        vector::sub_assign(&mut out, &term);
                    } else {
                        vector::add_assign(&mut out, &term);
                    }
                }
            }
            out
        },
    ))
}

/// `δx` for `x ∈ g`, as a map `h → g`.
pub fn delta_t_0(r: &WeightedRBO, x: &[Scalar]) -> Result<LinearMap> {
    let d = r.context();
    if x.len() != d.g_dim() {
        return Err(Error::shape(format!(
            "element of length {} in a {}-dim algebra",
            x.len(),
            d.g_dim()
        )));
    }
    delta_t(r, &MultiMap::constant(d.field(), d.h_dim(), x.to_vec()))?.to_linear()
}

/// The same differential computed as the general Leibniz differential of
/// `h_T` with coefficients in the induced representation.
pub fn delta_t_general(r: &WeightedRBO, f: &MultiMap) -> Result<MultiMap> {
    check_cochain(r, f)?;
    leibniz_differential(
        &r.induced_bracket(),
        &induced_representation_unchecked(r),
        f,
    )
}

/// `d_T f = d f + ⟦T, f⟧` for arity `n ≥ 1`.
pub fn twisted_differential(r: &WeightedRBO, f: &MultiMap) -> Result<MultiMap> {
    check_cochain(r, f)?;
    let d = r.context();
    let df = differential_d_explicit(d, r.weight(), f)?;
    let tf = derived_bracket_explicit(d, &r.map().to_multimap(), f)?;
    df.add(&tf)
}

fn cochain_len(r: &WeightedRBO, arity: usize) -> Option<usize> {
    let d = r.context();
    d.h_dim().checked_pow(arity as u32)?.checked_mul(d.g_dim())
}

fn guard(r: &WeightedRBO, arity: usize, cap: usize) -> Result<usize> {
    match cochain_len(r, arity) {
        Some(len) if len <= cap => Ok(len),
        other => Err(Error::ResourceLimit {
            what: format!("cochain space of degree {arity}"),
            requested: other.map_or(u128::MAX, |l| l as u128),
            cap: cap as u128,
        }),
    }
}

/// Matrix of `δ: C^n → C^{n+1}` in the flattening order.
pub fn delta_matrix(r: &WeightedRBO, n: usize, cap: usize) -> Result<Matrix> {
    let cols = guard(r, n, cap)?;
    let rows = guard(r, n + 1, cap)?;
    let d = r.context();
    let columns: Vec<Vec<Scalar>> = cochain_basis(d.field(), n, d.h_dim(), d.g_dim())
        .iter()
        .map(|e| delta_t(r, e).map(MultiMap::into_data))
        .collect::<Result<_>>()?;
    debug_assert_eq!(columns.len(), cols);
    Matrix::from_columns(d.field(), rows, &columns)
}

/// Dimensions of one degree of the complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeReport {
    pub degree: usize,
    pub dim_cochains: usize,
    pub dim_cocycles: usize,
    pub dim_coboundaries: usize,
    pub dim_cohomology: usize,
    /// Cocycles whose classes form a basis of `H^n`, chosen greedily from
    /// the kernel basis.
    pub representatives: Vec<MultiMap>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyReport {
    pub degrees: Vec<DegreeReport>,
}

impl CohomologyReport {
    pub fn betti(&self) -> Vec<usize> {
        self.degrees.iter().map(|d| d.dim_cohomology).collect()
    }
}

/// `H^n` for `0 ≤ n ≤ max_degree`; rejects operators failing the identity.
pub fn cohomology(r: &WeightedRBO, max_degree: usize, cap: usize) -> Result<CohomologyReport> {
    r.ensure_valid()?;
    let d = r.context();
    let field = d.field();
    let mut degrees = Vec::new();
    let mut previous: Option<Matrix> = None;
    for n in 0..=max_degree {
        let delta = delta_matrix(r, n, cap)?;
        let dim_c = delta.cols();
        let z = delta.kernel_basis();
        let b: Vec<Vec<Scalar>> = match &previous {
            None => Vec::new(),
            Some(m) => (0..m.cols()).map(|c| m.column(c)).collect(),
        };
        let dim_h = quotient_dim(field, dim_c, &z, &b)?;
        let dim_b = span_rank(field, dim_c, &b)?;
        let mut chosen = b.clone();
        let mut rank = dim_b;
        let mut representatives = Vec::new();
        for v in &z {
            chosen.push(v.clone());
            let next = span_rank(field, dim_c, &chosen)?;
            if next > rank {
                rank = next;
                representatives.push(MultiMap::from_data(
                    field,
                    n,
                    d.h_dim(),
                    d.g_dim(),
                    v.clone(),
                )?);
            } else {
                chosen.pop();
            }
        }
        debug_assert_eq!(representatives.len(), dim_h);
        degrees.push(DegreeReport {
            degree: n,
            dim_cochains: dim_c,
            dim_cocycles: z.len(),
            dim_coboundaries: dim_b,
            dim_cohomology: dim_h,
            representatives,
        });
        previous = Some(delta);
    }
    Ok(CohomologyReport { degrees })
}

/// Some `x` of arity `n - 1` with `δx = target`, if one exists. Free
/// variables of the linear system are set to zero.
pub fn solve_coboundary(
    r: &WeightedRBO,
    target: &MultiMap,
    cap: usize,
) -> Result<Option<MultiMap>> {
    check_cochain(r, target)?;
    let n = target.arity();
    if n == 0 {
        return Err(Error::shape("degree-0 cochains are never coboundaries"));
    }
    let m = delta_matrix(r, n - 1, cap)?;
    let d = r.context();
    Ok(match m.solve(target.data())? {
        Some(sol) => Some(MultiMap::from_data(
            d.field(),
            n - 1,
            d.h_dim(),
            d.g_dim(),
            sol.particular,
        )?),
        None => None,
    })
}

/// Whether `f` is a cocycle, i.e. `δf = 0`.
pub fn is_cocycle(r: &WeightedRBO, f: &MultiMap) -> Result<bool> {
    Ok(delta_t(r, f)?.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bracket::random_cochain;
    use crate::field::FieldSpec;
    use crate::leibniz::{validate_representation, LeibnizAlgebra, LeibnizGRep};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    fn nil2() -> LeibnizAlgebra {
        LeibnizAlgebra::from_int_entries(q(), 2, &[(0, 0, 1, 1)]).unwrap()
    }

    fn id_op() -> WeightedRBO {
        WeightedRBO::on_algebra(&nil2(), q().from_i64(-1), LinearMap::identity(q(), 2)).unwrap()
    }

    #[test]
    fn induced_representation_examples() {
        let r = id_op();
        let rep = induced_representation(&r).unwrap();
        assert!(rep.left().is_zero() && rep.right().is_zero());
        let z = WeightedRBO::new(
            LeibnizGRep::with_zero_actions(nil2(), LeibnizAlgebra::abelian(q(), 1)).unwrap(),
            q().one(),
            LinearMap::zero(q(), 1, 2),
        )
        .unwrap();
        let rep = induced_representation(&z).unwrap();
        assert!(rep.left().is_zero() && rep.right().is_zero());

        let t = LinearMap::new(Matrix::from_i64(q(), &[&[0, 0], &[1, 0]]).unwrap());
        let r = WeightedRBO::validated(LeibnizGRep::adjoint(&nil2()), q().zero(), t).unwrap();
        let rep = induced_representation(&r).unwrap();
        assert!(validate_representation(&r.induced_bracket(), &rep)
            .unwrap()
            .is_valid());
    }

    #[test]
    fn degree_zero_formula() {
        let t = LinearMap::new(Matrix::from_i64(q(), &[&[0, 0], &[1, 0]]).unwrap());
        let r =
            WeightedRBO::validated(LeibnizGRep::adjoint(&nil2()), q().zero(), t.clone()).unwrap();
        let a = nil2();
        for x in [
            vec![q().one(), q().zero()],
            vec![q().from_i64(2), q().from_i64(-3)],
        ] {
            let dx = delta_t_0(&r, &x).unwrap();
            for u in 0..2 {
                let eu = vector::basis(q(), 2, u);
                let mut expected = t.apply(&a.bracket(&x, &eu));
                vector::sub_assign(&mut expected, &a.bracket(&x, &t.image(u)));
                assert_eq!(dx.image(u), expected);
            }
            let second = delta_t(&r, &dx.to_multimap()).unwrap();
            assert!(second.is_zero());
        }
    }

    #[test]
    fn specialised_and_general_differentials_agree() {
        let r = id_op();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for n in 0..3 {
            let f = random_cochain(&mut rng, q(), n, 2, 2);
            assert_eq!(delta_t(&r, &f).unwrap(), delta_t_general(&r, &f).unwrap());
        }
    }

    #[test]
    fn twisted_differential_sign_relation() {
        let t = LinearMap::new(Matrix::from_i64(q(), &[&[0, 0], &[1, 0]]).unwrap());
        let r = WeightedRBO::validated(LeibnizGRep::adjoint(&nil2()), q().zero(), t).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for n in 1..3 {
            let f = random_cochain(&mut rng, q(), n, 2, 2);
            let dt = twisted_differential(&r, &f).unwrap();
            let delta = delta_t(&r, &f).unwrap();
            assert_eq!(dt, if n % 2 == 1 { delta.neg() } else { delta });
        }
    }

    #[test]
    fn zero_structure_cohomology() {
        let ctx = LeibnizGRep::with_zero_actions(
            LeibnizAlgebra::abelian(q(), 2),
            LeibnizAlgebra::abelian(q(), 2),
        )
        .unwrap();
        let r = WeightedRBO::new(ctx, q().zero(), LinearMap::zero(q(), 2, 2)).unwrap();
        let report = cohomology(&r, 3, DEFAULT_COCHAIN_CAP).unwrap();
        assert_eq!(report.betti(), vec![2, 4, 8, 16]);

        let ctx = LeibnizGRep::with_zero_actions(
            LeibnizAlgebra::abelian(q(), 1),
            LeibnizAlgebra::abelian(q(), 1),
        )
        .unwrap();
        let r = WeightedRBO::new(ctx, q().one(), LinearMap::zero(q(), 1, 1)).unwrap();
        assert_eq!(
            cohomology(&r, 1, DEFAULT_COCHAIN_CAP).unwrap().degrees[1].dim_cohomology,
            1
        );
    }

    #[test]
    fn identity_operator_cohomology() {
        // the induced representation vanishes and h_T = g = [e1,e1]=e2, so
        // δf only substitutes brackets: (δf)(e1,e1) = -f(e2) in degree 1,
        // and degree 2 forces f(e2,e1) = f(e2,e2) = 0.
        let report = cohomology(&id_op(), 2, DEFAULT_COCHAIN_CAP).unwrap();
        let dims: Vec<_> = report
            .degrees
            .iter()
            .map(|d| {
                (
                    d.dim_cochains,
                    d.dim_cocycles,
                    d.dim_coboundaries,
                    d.dim_cohomology,
                )
            })
            .collect();
        assert_eq!(dims, vec![(2, 2, 0, 2), (4, 2, 0, 2), (8, 4, 2, 2)]);
    }

    #[test]
    fn resource_guard() {
        let err = cohomology(&id_op(), 3, 10).unwrap_err();
        assert!(matches!(err, Error::ResourceLimit { .. }));
    }
}

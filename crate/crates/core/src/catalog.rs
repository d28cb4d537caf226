//! Small named Leibniz algebras used by tests, the acceptance suite and the
//! search driver.

use crate::field::FieldSpec;
use crate::leibniz::LeibnizAlgebra;

fn build(field: FieldSpec, dim: usize, entries: &[(usize, usize, usize, i64)]) -> LeibnizAlgebra {
    LeibnizAlgebra::from_int_entries(field, dim, entries).expect("catalog entries are in range")
}

pub fn abelian(field: FieldSpec, dim: usize) -> LeibnizAlgebra {
    LeibnizAlgebra::abelian(field, dim)
}

/// `[e1,e1] = e2`, the smallest Leibniz algebra that is not Lie.
pub fn nil2(field: FieldSpec) -> LeibnizAlgebra {
    build(field, 2, &[(0, 0, 1, 1)])
}

/// `[e1,e2] = e2`.
pub fn right2(field: FieldSpec) -> LeibnizAlgebra {
    build(field, 2, &[(0, 1, 1, 1)])
}

/// `[e1,e1] = e2`, `[e1,e2] = e2`.
pub fn mixed2(field: FieldSpec) -> LeibnizAlgebra {
    build(field, 2, &[(0, 0, 1, 1), (0, 1, 1, 1)])
}

/// The non-abelian two-dimensional Lie algebra `[e1,e2] = e2`.
pub fn lie2(field: FieldSpec) -> LeibnizAlgebra {
    build(field, 2, &[(0, 1, 1, 1), (1, 0, 1, -1)])
}

pub fn heisenberg(field: FieldSpec) -> LeibnizAlgebra {
    build(field, 3, &[(0, 1, 2, 1), (1, 0, 2, -1)])
}

/// `sl2` in the basis `e, f, h`.
pub fn sl2(field: FieldSpec) -> LeibnizAlgebra {
    build(
        field,
        3,
        &[
            (0, 1, 2, 1),
            (1, 0, 2, -1),
            (2, 0, 0, 2),
            (0, 2, 0, -2),
            (2, 1, 1, -2),
            (1, 2, 1, 2),
        ],
    )
}

/// `[e_i, e_j] = c_ij e3` for `i, j ∈ {1, 2}`; Leibniz for every `c`.
pub fn central(field: FieldSpec, c: [[i64; 2]; 2]) -> LeibnizAlgebra {
    let mut entries = Vec::new();
    for (i, row) in c.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            entries.push((i, j, 2, v));
        }
    }
    build(field, 3, &entries)
}

/// Every catalog algebra, in a fixed order.
pub fn all(field: FieldSpec) -> Vec<(&'static str, LeibnizAlgebra)> {
    vec![
        ("abelian1", abelian(field, 1)),
        ("abelian2", abelian(field, 2)),
        ("nil2", nil2(field)),
        ("right2", right2(field)),
        ("mixed2", mixed2(field)),
        ("lie2", lie2(field)),
        ("heisenberg", heisenberg(field)),
        ("sl2", sl2(field)),
        ("central", central(field, [[1, 2], [0, 1]])),
    ]
}

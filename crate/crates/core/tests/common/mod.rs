#![allow(dead_code)]

use lrb::catalog;
use lrb::leibniz::{validate_leibniz_g_rep, ActionPair, LeibnizAlgebra, LeibnizGRep};
use lrb::rbo::WeightedRBO;
use lrb::search::search_rbos;
use lrb::{Bilinear, FieldSpec, LinearMap, Matrix, Scalar};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn q() -> FieldSpec {
    FieldSpec::Rationals
}

pub fn gf(p: u64) -> FieldSpec {
    FieldSpec::prime(p).unwrap()
}

pub fn small_scalar(rng: &mut impl Rng, field: FieldSpec) -> Scalar {
    match field.size() {
        Some(p) => field.element(rng.gen_range(0..p)),
        None => field.from_i64(rng.gen_range(-3..=3)),
    }
}

/// Mostly zero, otherwise `±1` or `±2`.
pub fn sparse_scalar(rng: &mut impl Rng, field: FieldSpec) -> Scalar {
    if rng.gen_bool(0.6) {
        field.zero()
    } else {
        field.from_i64(*[-2, -1, 1, 2].choose(rng).unwrap())
    }
}

pub fn random_bilinear(
    rng: &mut impl Rng,
    field: FieldSpec,
    l: usize,
    r: usize,
    o: usize,
    sparse: bool,
) -> Bilinear {
    Bilinear::from_fn(field, l, r, o, |_, _| {
        (0..o)
            .map(|_| {
                if sparse {
                    sparse_scalar(rng, field)
                } else {
                    small_scalar(rng, field)
                }
            })
            .collect()
    })
}

pub fn random_map(rng: &mut impl Rng, field: FieldSpec, source: usize, target: usize) -> LinearMap {
    let data = (0..source * target)
        .map(|_| small_scalar(rng, field))
        .collect();
    LinearMap::new(Matrix::from_data(field, target, source, data).unwrap())
}

pub fn random_invertible(rng: &mut impl Rng, field: FieldSpec, n: usize) -> Matrix {
    loop {
        let data = (0..n * n).map(|_| small_scalar(rng, field)).collect();
        let m = Matrix::from_data(field, n, n, data).unwrap();
        if m.rank() == n {
            return m;
        }
    }
}

pub fn algebras_of_dim(field: FieldSpec, dim: usize) -> Vec<LeibnizAlgebra> {
    catalog::all(field)
        .into_iter()
        .map(|(_, a)| a)
        .filter(|a| a.dim() == dim)
        .collect()
}

/// Valid contexts of the given dimensions: adjoint and zero-action ones
/// built from the catalog, plus random sparse actions that pass validation.
pub fn contexts(
    rng: &mut impl Rng,
    field: FieldSpec,
    ng: usize,
    nh: usize,
    random_attempts: usize,
) -> Vec<LeibnizGRep> {
    let gs = algebras_of_dim(field, ng);
    let hs = algebras_of_dim(field, nh);
    let mut out: Vec<LeibnizGRep> = Vec::new();
    let push = |d: LeibnizGRep, out: &mut Vec<LeibnizGRep>| {
        if validate_leibniz_g_rep(&d).is_valid() && !out.contains(&d) {
            out.push(d);
        }
    };
    for g in &gs {
        if ng == nh {
            push(LeibnizGRep::adjoint(g), &mut out);
        }
        for h in &hs {
            push(
                LeibnizGRep::with_zero_actions(g.clone(), h.clone()).unwrap(),
                &mut out,
            );
        }
    }
    for _ in 0..random_attempts {
        let g = gs.choose(rng).unwrap().clone();
        let h = hs.choose(rng).unwrap().clone();
        let left = random_bilinear(rng, field, ng, nh, nh, true);
        let right = if rng.gen_bool(0.5) {
            left_as_right(&left).scale(&field.from_i64(-1))
        } else {
            random_bilinear(rng, field, nh, ng, nh, true)
        };
        let d = LeibnizGRep::new(g, h, ActionPair::new(left, right).unwrap()).unwrap();
        push(d, &mut out);
    }
    out
}

/// `ρ^R(v, x) := ρ^L(x, v)`.
fn left_as_right(left: &Bilinear) -> Bilinear {
    Bilinear::from_fn(
        left.field(),
        left.right_dim(),
        left.left_dim(),
        left.out_dim(),
        |v, x| left.value(x, v).to_vec(),
    )
}

/// Valid operators found by exhaustive search over small contexts and
/// weights, shuffled. Only for finite fields.
pub fn operator_pool(
    rng: &mut impl Rng,
    field: FieldSpec,
    dims: &[(usize, usize)],
    weights: &[i64],
) -> Vec<WeightedRBO> {
    let mut pool = Vec::new();
    for &(ng, nh) in dims {
        for d in contexts(rng, field, ng, nh, 40) {
            for &w in weights {
                let w = field.from_i64(w);
                for t in search_rbos(&d, &w, 1 << 20, 1).unwrap().operators {
                    pool.push(WeightedRBO::new(d.clone(), w.clone(), t).unwrap());
                }
            }
        }
    }
    pool.shuffle(rng);
    pool
}

/// Valid operators over `Q`: the identity family, scalings and complements
/// on catalog algebras, and the zero map on random valid contexts.
pub fn rational_operators(rng: &mut impl Rng) -> Vec<WeightedRBO> {
    let f = q();
    let mut out = Vec::new();
    for (_, a) in catalog::all(f) {
        let id = LinearMap::identity(f, a.dim());
        out.push(WeightedRBO::on_algebra(&a, f.from_i64(-1), id.clone()).unwrap());
        out.push(WeightedRBO::on_algebra(&a, f.from_i64(-2), id.scale(&f.from_i64(2))).unwrap());
        out.push(WeightedRBO::on_algebra(&a, f.from_i64(1), id.scale(&f.from_i64(-1))).unwrap());
    }
    for (ng, nh) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
        for d in contexts(rng, f, ng, nh, 30) {
            let w = small_scalar(rng, f);
            out.push(WeightedRBO::new(d.clone(), w, LinearMap::zero(f, nh, ng)).unwrap());
        }
    }
    out.retain(|r| r.is_valid());
    out.shuffle(rng);
    out
}

/// One CLI invocation with a golden machine report.
pub struct CliCase {
    pub name: &'static str,
    pub manifest: &'static str,
    pub args: &'static [&'static str],
    pub code: i32,
}

pub const MANIFESTS: &[&str] = &["dim2-nonlie.lra", "gf5-obstructed.lra", "gf5-rigid.lra"];

pub const CLI_CASES: &[CliCase] = &[
    CliCase {
        name: "nonlie-validate",
        manifest: "dim2-nonlie.lra",
        args: &["validate", "--operator", "id2", "--weight", "-1"],
        code: 0,
    },
    CliCase {
        name: "nonlie-check-rbo",
        manifest: "dim2-nonlie.lra",
        args: &["check-rbo", "--operator", "id2", "--weight", "minus_one"],
        code: 0,
    },
    CliCase {
        name: "nonlie-check-rbo-id",
        manifest: "dim2-nonlie.lra",
        args: &["check-rbo", "--operator", "id", "--weight=-1"],
        code: 0,
    },
    CliCase {
        name: "nonlie-check-rbo-fails",
        manifest: "dim2-nonlie.lra",
        args: &["check-rbo", "--operator", "id2", "--weight", "1"],
        code: 1,
    },
    CliCase {
        name: "nonlie-graph-check",
        manifest: "dim2-nonlie.lra",
        args: &["graph-check", "--operator", "id2", "--weight", "-1"],
        code: 0,
    },
    CliCase {
        name: "nonlie-induced",
        manifest: "dim2-nonlie.lra",
        args: &["induced", "--operator", "id2", "--weight", "-1"],
        code: 0,
    },
    CliCase {
        name: "nonlie-cohomology",
        manifest: "dim2-nonlie.lra",
        args: &[
            "cohomology",
            "--operator",
            "id2",
            "--weight",
            "-1",
            "--max-degree",
            "2",
        ],
        code: 0,
    },
    CliCase {
        name: "nonlie-mc-residual",
        manifest: "dim2-nonlie.lra",
        args: &["mc-residual", "--operator", "id2", "--weight", "-1"],
        code: 0,
    },
    CliCase {
        name: "nonlie-dgla-check",
        manifest: "dim2-nonlie.lra",
        args: &[
            "dgla-check",
            "--weight",
            "-1",
            "--samples",
            "10",
            "--seed",
            "3",
        ],
        code: 0,
    },
    CliCase {
        name: "nonlie-deform-check",
        manifest: "dim2-nonlie.lra",
        args: &["deform-check"],
        code: 0,
    },
    CliCase {
        name: "nonlie-obstruct",
        manifest: "dim2-nonlie.lra",
        args: &["obstruct"],
        code: 0,
    },
    CliCase {
        name: "nonlie-extend",
        manifest: "dim2-nonlie.lra",
        args: &["extend"],
        code: 0,
    },
    CliCase {
        name: "nonlie-nijenhuis",
        manifest: "dim2-nonlie.lra",
        args: &[
            "nijenhuis",
            "--operator",
            "id2",
            "--weight",
            "-1",
            "--x0",
            "1,0",
        ],
        code: 0,
    },
    CliCase {
        name: "nonlie-post-validate",
        manifest: "dim2-nonlie.lra",
        args: &["post-validate"],
        code: 0,
    },
    CliCase {
        name: "nonlie-post-from-rbo",
        manifest: "dim2-nonlie.lra",
        args: &["post-from-rbo", "--operator", "id2", "--weight", "-1"],
        code: 0,
    },
    CliCase {
        name: "nonlie-total",
        manifest: "dim2-nonlie.lra",
        args: &["total"],
        code: 0,
    },
    CliCase {
        name: "nonlie-search-rational",
        manifest: "dim2-nonlie.lra",
        args: &["search"],
        code: 2,
    },
    CliCase {
        name: "nonlie-search-gf5",
        manifest: "dim2-nonlie.lra",
        args: &["search", "--field", "gf5", "--weight", "-1"],
        code: 0,
    },
    CliCase {
        name: "nonlie-rigidity-gf7",
        manifest: "dim2-nonlie.lra",
        args: &[
            "rigidity",
            "--field",
            "gf7",
            "--operator",
            "id2",
            "--weight",
            "-1",
        ],
        code: 1,
    },
    CliCase {
        name: "gf5-validate",
        manifest: "gf5-obstructed.lra",
        args: &[
            "validate",
            "--context",
            "c",
            "--operator",
            "t1",
            "--weight",
            "0",
        ],
        code: 1,
    },
    CliCase {
        name: "gf5-deform-check",
        manifest: "gf5-obstructed.lra",
        args: &["deform-check"],
        code: 0,
    },
    CliCase {
        name: "gf5-obstruct",
        manifest: "gf5-obstructed.lra",
        args: &["obstruct"],
        code: 1,
    },
    CliCase {
        name: "gf5-extend",
        manifest: "gf5-obstructed.lra",
        args: &["extend"],
        code: 1,
    },
    CliCase {
        name: "gf5-rigidity",
        manifest: "gf5-obstructed.lra",
        args: &["rigidity", "--context", "c", "--weight", "0"],
        code: 1,
    },
    CliCase {
        name: "gf5-rigidity-gf3",
        manifest: "gf5-obstructed.lra",
        args: &["rigidity", "--context", "c", "--field", "gf3"],
        code: 2,
    },
    CliCase {
        name: "gf5-search-right-action",
        manifest: "gf5-obstructed.lra",
        args: &["search", "--context", "sq", "--weight", "0"],
        code: 0,
    },
    CliCase {
        name: "gf5-search-adjoint",
        manifest: "gf5-obstructed.lra",
        args: &["search", "--algebra", "g", "--weight", "-1"],
        code: 0,
    },
    CliCase {
        name: "rigid-check-rbo",
        manifest: "gf5-rigid.lra",
        args: &["check-rbo", "--operator", "t", "--weight", "lambda"],
        code: 0,
    },
    CliCase {
        name: "rigid-cohomology",
        manifest: "gf5-rigid.lra",
        args: &["cohomology", "--operator", "t", "--weight", "lambda"],
        code: 0,
    },
    CliCase {
        name: "rigid-rigidity",
        manifest: "gf5-rigid.lra",
        args: &["rigidity", "--operator", "t", "--weight", "lambda"],
        code: 0,
    },
    CliCase {
        name: "rigid-nijenhuis",
        manifest: "gf5-rigid.lra",
        args: &[
            "nijenhuis",
            "--operator",
            "t",
            "--weight",
            "lambda",
            "--x0",
            "1,2",
        ],
        code: 0,
    },
    CliCase {
        name: "gf5-bad-field",
        manifest: "gf5-obstructed.lra",
        args: &["validate", "--field", "gf4"],
        code: 2,
    },
];

pub fn testdata(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("testdata")
        .join(name)
}

pub fn golden(name: &str) -> std::path::PathBuf {
    testdata("golden").join(name)
}

/// Runs the binary and returns (exit code, stdout).
pub fn run_case(case: &CliCase, jobs: usize) -> (i32, String) {
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_lrb"))
        .args(case.args)
        .arg(testdata(case.manifest))
        .args(["--format", "machine", "--jobs", &jobs.to_string()])
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).expect("utf8 report"),
    )
}

mod common;

use common::*;
use lrb::bracket::{derived_bracket, maurer_cartan_residual, random_cochain};
use lrb::cohomology::{delta_t, delta_t_general};
use lrb::enumerate::vector_at;
use lrb::leibniz::{validate_leibniz, LeibnizGRep};
use lrb::manifest::parse_manifest;
use lrb::rbo::{derived_operators, graph_check, induced_algebra, WeightedRBO};
use lrb::search::search_rbos;
use lrb::{LinearMap, Matrix};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn entries(dim: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(
        prop_oneof![3 => Just(0i64), 1 => -4i64..=4],
        dim * dim * dim,
    )
}

fn manifest_data() -> impl Strategy<Value = (usize, Vec<i64>, Vec<i64>, Vec<i64>)> {
    (1usize..=3).prop_flat_map(|dim| {
        (
            Just(dim),
            entries(dim),
            entries(dim),
            prop::collection::vec(-3i64..=3, dim * dim),
        )
    })
}

fn term_list(values: &[i64]) -> String {
    let terms: Vec<String> = values
        .iter()
        .enumerate()
        .filter(|(_, v)| **v != 0)
        .map(|(k, v)| format!("{v} e{}", k + 1))
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" ")
    }
}

fn manifest_text(field: &str, dim: usize, bracket: &[i64], lt: &[i64], map: &[i64]) -> String {
    let mut s = format!("field {field}\n# generated\nalgebra a dim {dim}\n");
    for i in 0..dim {
        for j in 0..dim {
            let v = &bracket[(i * dim + j) * dim..(i * dim + j + 1) * dim];
            s += &format!("bracket a e{} e{} -> {}\n", i + 1, j + 1, term_list(v));
        }
    }
    s += &format!("context adj adjoint a\ncontext z a a zero\nmap t {dim} {dim}\n");
    for j in 0..dim {
        let col: Vec<i64> = (0..dim).map(|i| map[i * dim + j]).collect();
        s += &format!("image t e{} -> {}\n", j + 1, term_list(&col));
    }
    s += &format!("scalar w -2\ndeformation d z w t t\npost p dim {dim}\n");
    for i in 0..dim {
        for j in 0..dim {
            let v = &lt[(i * dim + j) * dim..(i * dim + j + 1) * dim];
            s += &format!("lt p e{} e{} -> {}\n", i + 1, j + 1, term_list(v));
        }
    }
    s
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn manifests_round_trip(field in prop_oneof![Just("rational"), Just("gf 5"), Just("gf 7")], (dim, bracket, lt, map) in manifest_data()) {
        let text = manifest_text(field, dim, &bracket, &lt, &map);
        let m = parse_manifest(&text).unwrap();
        let canonical = m.render();
        let again = parse_manifest(&canonical).unwrap();
        prop_assert_eq!(&again, &m);
        prop_assert_eq!(again.render(), canonical);
    }

    #[test]
    fn search_agrees_with_graph_oracle(ng in 1usize..=2, nh in 1usize..=2, w in -2i64..=2, seed in any::<u64>()) {
        let f = gf(5);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pool = contexts(&mut rng, f, ng, nh, 20);
        let d = &pool[(seed as usize) % pool.len()];
        let w = f.from_i64(w);
        let found = search_rbos(d, &w, 1 << 20, 1).unwrap();
        let mut expected = Vec::new();
        for i in 0..found.examined {
            let t = LinearMap::new(Matrix::from_data(f, ng, nh, vector_at(f, ng * nh, i)).unwrap());
            if graph_check(d, &w, &t).unwrap() {
                expected.push(t);
            }
        }
        prop_assert_eq!(&found.operators, &expected);
        prop_assert_eq!(&search_rbos(d, &w, 1 << 20, 3).unwrap(), &found);
        // νT is an operator of weight νλ, so nonzero rescaling preserves the count
        let scaled = search_rbos(d, &(&w * &f.from_i64(2)), 1 << 20, 1).unwrap();
        prop_assert_eq!(scaled.operators.len(), found.operators.len());
    }

    #[test]
    fn operators_survive_basis_change(seed in any::<u64>()) {
        let f = gf(5);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pool = operator_pool(&mut rng, f, &[(1, 1), (2, 1)], &[0, 1, -1]);
        let r = &pool[0];
        let p = random_invertible(&mut rng, f, r.context().g_dim());
        let q = random_invertible(&mut rng, f, r.context().h_dim());
        let moved = r.transport(&p, &q).unwrap();
        prop_assert!(moved.is_valid());
        prop_assert!(maurer_cartan_residual(moved.context(), moved.weight(), moved.map()).unwrap().is_zero());
    }

    #[test]
    fn induced_algebra_is_leibniz(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for r in operator_pool(&mut rng, gf(5), &[(1, 2)], &[0, 1]).iter().take(5) {
            prop_assert!(validate_leibniz(&induced_algebra(r).unwrap()).is_valid());
        }
    }

    #[test]
    fn complements_are_operators(seed in any::<u64>(), nu in -3i64..=3) {
        let f = gf(7);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let algebras = algebras_of_dim(f, 2);
        let a = &algebras[(seed as usize) % algebras.len()];
        let w = small_scalar(&mut rng, f);
        let ops = search_rbos(&LeibnizGRep::adjoint(a), &w, 1 << 20, 1).unwrap().operators;
        let t = ops[(seed as usize / 7) % ops.len()].clone();
        let r = WeightedRBO::on_algebra(a, w, t).unwrap();
        let (scaled, complement) = derived_operators(&r, &f.from_i64(nu)).unwrap();
        prop_assert!(scaled.is_valid());
        prop_assert!(complement.is_valid());
    }

    #[test]
    fn differential_routes_agree(seed in any::<u64>(), n in 0usize..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pool = rational_operators(&mut rng);
        let r = &pool[0];
        let d = r.context();
        let c = random_cochain(&mut rng, d.field(), n, d.h_dim(), d.g_dim());
        let dc = delta_t(r, &c).unwrap();
        prop_assert_eq!(&dc, &delta_t_general(r, &c).unwrap());
        prop_assert!(delta_t(r, &dc).unwrap().is_zero());
    }

    #[test]
    fn derived_bracket_is_graded_antisymmetric(seed in any::<u64>(), m in 1usize..=2, n in 1usize..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = q();
        let pool = contexts(&mut rng, f, 2, 1, 30);
        let d = &pool[(seed as usize) % pool.len()];
        let p = random_cochain(&mut rng, f, m, d.h_dim(), d.g_dim());
        let r = random_cochain(&mut rng, f, n, d.h_dim(), d.g_dim());
        let pr = derived_bracket(d, &p, &r).unwrap();
        let rp = derived_bracket(d, &r, &p).unwrap();
        let expected = if (m * n + 1) % 2 == 1 { rp.neg() } else { rp };
        prop_assert_eq!(pr, expected);
    }

    #[test]
    fn solve_and_kernel_are_consistent(rows in 1usize..=4, cols in 1usize..=4, seed in any::<u64>()) {
        for f in [q(), gf(5)] {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = random_map(&mut rng, f, cols, rows).matrix().clone();
            let kernel = m.kernel_basis();
            prop_assert_eq!(kernel.len() + m.rank(), cols);
            for v in &kernel {
                prop_assert!(m.mul_vec(v).unwrap().iter().all(|x| x.is_zero()));
            }
            let x: Vec<_> = (0..cols).map(|_| small_scalar(&mut rng, f)).collect();
            let b = m.mul_vec(&x).unwrap();
            let sol = m.solve(&b).unwrap().expect("b is in the image");
            prop_assert_eq!(m.mul_vec(&sol.particular).unwrap(), b);
        }
    }
}

//! The Balavoine bracket on `⊕ Hom(V^{⊗k}, V)`, the structure elements θ and
//! θ′ on `V = g ⊕ h`, and the derived dgLa `(⊕ Hom(h^{⊗n}, g), ⟦·,·⟧, d)`.
//!
//! The derived bracket and `d` are computed twice: from their explicit
//! shuffle formulas, and by lifting into `Hom(V^{⊗•}, V)` and evaluating
//! Balavoine brackets with θ and θ′. For `P` of arity `m` the nested route is
//! `⟦P, Q⟧ = (-1)^m [[θ, P̂], Q̂]`, and `dP = [θ′, P̂]` restricted.
//!
//! Degrees: an arity-`k` map has Balavoine degree `k - 1`, and degree `k`
//! in the derived dgLa.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{vector, FieldSpec, Scalar};
use crate::leibniz::{semidirect_unchecked, substituted_args, validate_leibniz_g_rep, LeibnizGRep};
use crate::tensor::{Arg, LinearMap, MultiMap};

/// Shuffles of `0..Σ blocks` into consecutive increasing blocks. Each entry is
/// the sequence of positions in block order and whether its parity is odd.
pub fn shuffles(blocks: &[usize]) -> Vec<(Vec<usize>, bool)> {
    let total: usize = blocks.iter().sum();
    let mut remaining = blocks.to_vec();
    let mut labels = Vec::with_capacity(total);
    let mut out = Vec::new();
    label_rec(&mut remaining, &mut labels, total, &mut out);
    out
}

fn label_rec(
    remaining: &mut [usize],
    labels: &mut Vec<usize>,
    total: usize,
    out: &mut Vec<(Vec<usize>, bool)>,
) {
    if labels.len() == total {
        let mut order = Vec::with_capacity(total);
        for b in 0..remaining.len() {
            order.extend(
                labels
                    .iter()
                    .enumerate()
                    .filter(|&(_, &l)| l == b)
                    .map(|(p, _)| p),
            );
        }
        let mut inversions = 0usize;
        for a in 0..total {
            for b in a + 1..total {
                if order[a] > order[b] {
                    inversions += 1;
                }
            }
        }
        out.push((order, inversions % 2 == 1));
        return;
    }
    for b in 0..remaining.len() {
        if remaining[b] > 0 {
            remaining[b] -= 1;
            labels.push(b);
            label_rec(remaining, labels, total, out);
            labels.pop();
            remaining[b] += 1;
        }
    }
}

fn accumulate(out: &mut [Scalar], term: &[Scalar], negative: bool) {
    if negative {
        vector::sub_assign(out, term);
    } else {
        vector::add_assign(out, term);
    }
}

fn pick(xs: &[usize], positions: &[usize]) -> Vec<usize> {
    positions.iter().map(|&p| xs[p]).collect()
}

fn check_endo(f: &MultiMap) -> Result<()> {
    if f.source_dim() != f.target_dim() {
        return Err(Error::shape(format!(
            "expected a map on one space, got {} -> {}",
            f.source_dim(),
            f.target_dim()
        )));
    }
    if f.arity() == 0 {
        return Err(Error::shape("Balavoine brackets need arity at least 1"));
    }
    Ok(())
}

/// `(f ∘_i g)(x_1..x_{m+n+1})` summed over `Sh(i-1, n)`, where `f` has
/// arity `m+1`, `g` has arity `n+1`, and `1 ≤ i ≤ m+1`.
pub fn circ_i(f: &MultiMap, g: &MultiMap, i: usize) -> Result<MultiMap> {
    check_endo(f)?;
    check_endo(g)?;
    if f.source_dim() != g.source_dim() || f.field() != g.field() {
        return Err(Error::shape("maps live on different spaces"));
    }
    let (m, n) = (f.arity() - 1, g.arity() - 1);
    if i == 0 || i > m + 1 {
        return Err(Error::IndexOutOfRange {
            index: i,
            limit: m + 1,
        });
    }
    let dim = f.source_dim();
    let field = f.field();
    let sh = shuffles(&[i - 1, n]);
    Ok(MultiMap::from_fn(field, m + n + 1, dim, dim, |xs| {
        let mut out = vector::zeros(field, dim);
        for (order, negative) in &sh {
            let mut g_args = pick(xs, &order[i - 1..]);
            g_args.push(xs[i + n - 1]);
            let w = g.value(&g_args);
            if vector::is_zero(w) {
                continue;
            }
            let mut args: Vec<Arg> = order[..i - 1].iter().map(|&p| Arg::Basis(xs[p])).collect();
            args.push(Arg::Vector(w));
            args.extend(xs[i + n..].iter().map(|&x| Arg::Basis(x)));
            accumulate(&mut out, &f.eval(&args), *negative);
        }
        out
    }))
}

/// `[f, g]_B = Σ_i (-1)^{(i-1)n} f ∘_i g - (-1)^{mn} Σ_i (-1)^{(i-1)m} g ∘_i f`.
pub fn balavoine(f: &MultiMap, g: &MultiMap) -> Result<MultiMap> {
    check_endo(f)?;
    check_endo(g)?;
    let (m, n) = (f.arity() - 1, g.arity() - 1);
    let mut out = MultiMap::zero(f.field(), m + n + 1, f.source_dim(), f.target_dim());
    for i in 1..=m + 1 {
        let term = circ_i(f, g, i)?;
        if ((i - 1) * n) % 2 == 0 {
            out.add_assign(&term)?;
        } else {
            out.add_assign(&term.neg())?;
        }
    }
    let outer_negative = (m * n) % 2 == 0;
    for i in 1..=n + 1 {
        let term = circ_i(g, f, i)?;
        let negative = outer_negative ^ (((i - 1) * m) % 2 == 1);
        if negative {
            out.add_assign(&term.neg())?;
        } else {
            out.add_assign(&term)?;
        }
    }
    Ok(out)
}

/// `θ((x,u),(y,v)) = ([x,y], ρ^L(x,v) + ρ^R(u,y))`, without validation.
pub(crate) fn theta_unchecked(d: &LeibnizGRep) -> MultiMap {
    semidirect_unchecked(d, &d.field().zero()).to_multimap()
}

/// `θ′((x,u),(y,v)) = (0, -λ[u,v]_h)`, without validation.
pub(crate) fn theta_prime_unchecked(d: &LeibnizGRep, weight: &Scalar) -> MultiMap {
    let (ng, nh) = (d.g_dim(), d.h_dim());
    let field = d.field();
    let minus = -weight;
    MultiMap::from_fn(field, 2, ng + nh, ng + nh, |t| {
        let mut out = vector::zeros(field, ng + nh);
        if t[0] >= ng && t[1] >= ng {
            let v = vector::scale(&minus, d.h().bracket_basis(t[0] - ng, t[1] - ng));
            out[ng..].clone_from_slice(&v);
        }
        out
    })
}

fn ensure_valid_context(d: &LeibnizGRep) -> Result<()> {
    let report = validate_leibniz_g_rep(d);
    match report.violations.first() {
        None => Ok(()),
        Some(v) => Err(Error::InvalidInput(format!(
            "context is not a Leibniz g-representation: {v}"
        ))),
    }
}

fn ensure_zero(name: &str, f: &MultiMap) -> Result<()> {
    if f.is_zero() {
        Ok(())
    } else {
        Err(Error::StructureIncompatible(format!(
            "{name} does not vanish"
        )))
    }
}

/// θ for a valid context, checking `[θ, θ]_B = 0`.
pub fn make_theta(d: &LeibnizGRep) -> Result<MultiMap> {
    ensure_valid_context(d)?;
    let theta = theta_unchecked(d);
    ensure_zero("[theta, theta]", &balavoine(&theta, &theta)?)?;
    Ok(theta)
}

/// θ′ for a valid context, checking `[θ′, θ′]_B = 0` and `[θ, θ′]_B = 0`.
pub fn make_theta_prime(d: &LeibnizGRep, weight: &Scalar) -> Result<MultiMap> {
    ensure_valid_context(d)?;
    let theta = theta_unchecked(d);
    let prime = theta_prime_unchecked(d, weight);
    ensure_zero("[theta', theta']", &balavoine(&prime, &prime)?)?;
    ensure_zero("[theta, theta']", &balavoine(&theta, &prime)?)?;
    Ok(prime)
}

/// `P̂((x_1,u_1), ..) = (P(u_1, ..), 0)` for `P: h^{⊗m} → g`.
pub fn lift(p: &MultiMap, g_dim: usize, h_dim: usize) -> Result<MultiMap> {
    if p.source_dim() != h_dim || p.target_dim() != g_dim {
        return Err(Error::shape(format!(
            "map {} -> {} cannot be lifted from h={} to g={}",
            p.source_dim(),
            p.target_dim(),
            h_dim,
            g_dim
        )));
    }
    let field = p.field();
    let total = g_dim + h_dim;
    Ok(MultiMap::from_fn(field, p.arity(), total, total, |t| {
        let mut out = vector::zeros(field, total);
        if t.iter().all(|&x| x >= g_dim) {
            let inner: Vec<usize> = t.iter().map(|&x| x - g_dim).collect();
            out[..g_dim].clone_from_slice(p.value(&inner));
        }
        out
    }))
}

/// The `h`-inputs, `g`-output block of a map on `g ⊕ h`.
pub fn restrict(f: &MultiMap, g_dim: usize, h_dim: usize) -> Result<MultiMap> {
    if f.source_dim() != g_dim + h_dim || f.target_dim() != g_dim + h_dim {
        return Err(Error::shape("map does not live on g ⊕ h"));
    }
    let field = f.field();
    Ok(MultiMap::from_fn(field, f.arity(), h_dim, g_dim, |t| {
        let outer: Vec<usize> = t.iter().map(|&x| x + g_dim).collect();
        f.value(&outer)[..g_dim].to_vec()
    }))
}

fn check_cochain(d: &LeibnizGRep, p: &MultiMap) -> Result<()> {
    if p.source_dim() != d.h_dim() || p.target_dim() != d.g_dim() || p.arity() == 0 {
        return Err(Error::shape(format!(
            "expected a map h^n -> g with n >= 1 ({} -> {}), got arity {} map {} -> {}",
            d.h_dim(),
            d.g_dim(),
            p.arity(),
            p.source_dim(),
            p.target_dim()
        )));
    }
    if p.field() != d.field() {
        return Err(Error::WrongField(format!(
            "cochain is not over {}",
            d.field()
        )));
    }
    Ok(())
}

/// One half of the explicit bracket formula; the bracket is
/// `X(P, Q) - (-1)^{mn} X(Q, P)`.
fn derived_half(d: &LeibnizGRep, p: &MultiMap, q: &MultiMap) -> MultiMap {
    let (m, n) = (p.arity(), q.arity());
    let field = d.field();
    let (l, r) = (d.actions().left(), d.actions().right());
    let mut out = MultiMap::zero(field, m + n, d.h_dim(), d.g_dim());
    let us_all = crate::tensor::tuples(d.h_dim(), m + n);
    for i in 1..=m {
        let outer = ((i - 1) * n) % 2 == 1;
        let sh_a = shuffles(&[i - 1, n]);
        let sh_b = shuffles(&[i - 1, 1, n - 1]);
        for us in &us_all {
            let mut acc = vector::zeros(field, d.g_dim());
            let tail: Vec<Arg> = us[i + n..].iter().map(|&x| Arg::Basis(x)).collect();
            for (order, negative) in &sh_a {
                let qv = q.value(&pick(us, &order[i - 1..]));
                if vector::is_zero(qv) {
                    continue;
                }
                let w = l.apply_right_basis(qv, us[i + n - 1]);
                let mut args: Vec<Arg> =
                    order[..i - 1].iter().map(|&x| Arg::Basis(us[x])).collect();
                args.push(Arg::Vector(&w));
                args.extend(tail.iter().copied());
                accumulate(&mut acc, &p.eval(&args), *negative);
            }
            for (order, negative) in &sh_b {
                let mut q_args = pick(us, &order[i..i + n - 1]);
                q_args.push(us[i + n - 1]);
                let qv = q.value(&q_args);
                if vector::is_zero(qv) {
                    continue;
                }
                let w = r.apply_left_basis(us[order[i - 1]], qv);
                let mut args: Vec<Arg> =
                    order[..i - 1].iter().map(|&x| Arg::Basis(us[x])).collect();
                args.push(Arg::Vector(&w));
                args.extend(tail.iter().copied());
                // the ρ^R terms carry an extra (-1)^{n-1}
                accumulate(&mut acc, &p.eval(&args), *negative ^ (n % 2 == 0));
            }
            let slot = out.value(us).to_vec();
            let mut total = slot;
            accumulate(&mut total, &acc, outer);
            out.set_value(us, &total);
        }
    }
    let sh_c = shuffles(&[m, n - 1]);
    let c_negative = (m * n) % 2 == 1;
    for us in &us_all {
        let mut acc = vector::zeros(field, d.g_dim());
        for (order, negative) in &sh_c {
            let pv = p.value(&pick(us, &order[..m]));
            if vector::is_zero(pv) {
                continue;
            }
            let mut q_args = pick(us, &order[m..]);
            q_args.push(us[m + n - 1]);
            let qv = q.value(&q_args);
            if vector::is_zero(qv) {
                continue;
            }
            accumulate(&mut acc, &d.g().bracket(pv, qv), *negative);
        }
        let mut total = out.value(us).to_vec();
        accumulate(&mut total, &acc, c_negative);
        out.set_value(us, &total);
    }
    out
}

/// `⟦P, Q⟧` from the explicit shuffle formula, without validating the context.
pub fn derived_bracket_explicit(d: &LeibnizGRep, p: &MultiMap, q: &MultiMap) -> Result<MultiMap> {
    check_cochain(d, p)?;
    check_cochain(d, q)?;
    let mut out = derived_half(d, p, q);
    let back = derived_half(d, q, p);
    if (p.arity() * q.arity()).is_multiple_of(2) {
        out.add_assign(&back.neg())?;
    } else {
        out.add_assign(&back)?;
    }
    Ok(out)
}

/// `(-1)^m [[θ, P̂]_B, Q̂]_B` on `g ⊕ h`, before restriction.
pub fn derived_bracket_nested_full(
    d: &LeibnizGRep,
    p: &MultiMap,
    q: &MultiMap,
) -> Result<MultiMap> {
    check_cochain(d, p)?;
    check_cochain(d, q)?;
    let (ng, nh) = (d.g_dim(), d.h_dim());
    let theta = theta_unchecked(d);
    let inner = balavoine(&theta, &lift(p, ng, nh)?)?;
    let full = balavoine(&inner, &lift(q, ng, nh)?)?;
    Ok(if p.arity() % 2 == 1 { full.neg() } else { full })
}

/// `⟦P, Q⟧` for a valid context: the explicit value, verified against the
/// nested Balavoine route.
pub fn derived_bracket(d: &LeibnizGRep, p: &MultiMap, q: &MultiMap) -> Result<MultiMap> {
    ensure_valid_context(d)?;
    let explicit = derived_bracket_explicit(d, p, q)?;
    let nested = derived_bracket_nested_full(d, p, q)?;
    if lift(&explicit, d.g_dim(), d.h_dim())? != nested {
        return Err(Error::OracleDisagreement(format!(
            "derived bracket of arities {} and {}",
            p.arity(),
            q.arity()
        )));
    }
    Ok(explicit)
}

/// `dP` from its explicit formula, without validating the context.
pub fn differential_d_explicit(d: &LeibnizGRep, weight: &Scalar, p: &MultiMap) -> Result<MultiMap> {
    check_cochain(d, p)?;
    let n = p.arity();
    let field = d.field();
    let h = d.h();
    Ok(MultiMap::from_fn(
        field,
        n + 1,
        d.h_dim(),
        d.g_dim(),
        |us| {
            let mut out = vector::zeros(field, d.g_dim());
            for i in 0..=n {
                for j in i + 1..=n {
                    let w = vector::scale(weight, h.bracket_basis(us[i], us[j]));
                    if vector::is_zero(&w) {
                        continue;
                    }
                    let term = p.eval(&substituted_args(us, i, j, &w));
                    // (-1)^n (-1)^{i+1} for 0-based i
                    accumulate(&mut out, &term, (n + i + 1) % 2 == 1);
                }
            }
            out
        },
    ))
}

/// `dP` for a valid context, verified against `[θ′, P̂]_B`.
pub fn differential_d(d: &LeibnizGRep, weight: &Scalar, p: &MultiMap) -> Result<MultiMap> {
    ensure_valid_context(d)?;
    let explicit = differential_d_explicit(d, weight, p)?;
    let (ng, nh) = (d.g_dim(), d.h_dim());
    let nested = balavoine(&theta_prime_unchecked(d, weight), &lift(p, ng, nh)?)?;
    if lift(&explicit, ng, nh)? != nested {
        return Err(Error::OracleDisagreement(format!(
            "differential of an arity-{} map",
            p.arity()
        )));
    }
    Ok(explicit)
}

/// `dT + ½⟦T, T⟧`, or `2dT + ⟦T, T⟧` in characteristic 2. Vanishes exactly
/// when `T` is a weighted relative Rota-Baxter operator.
pub fn maurer_cartan_residual(d: &LeibnizGRep, weight: &Scalar, t: &LinearMap) -> Result<MultiMap> {
    let tm = t.to_multimap();
    let dt = differential_d(d, weight, &tm)?;
    let tt = derived_bracket(d, &tm, &tm)?;
    match d.field().half() {
        Some(half) => dt.add(&tt.scale(&half)),
        None => dt.scale(&d.field().from_i64(2)).add(&tt),
    }
}

/// Outcome of [`check_dgla`]: per law, instances checked and failed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DglaReport {
    pub laws: Vec<(String, usize, usize)>,
}

impl DglaReport {
    fn record(&mut self, law: &str, ok: bool) {
        if let Some(entry) = self.laws.iter_mut().find(|(name, _, _)| name == law) {
            entry.1 += 1;
            entry.2 += usize::from(!ok);
        } else {
            self.laws.push((law.to_string(), 1, usize::from(!ok)));
        }
    }

    pub fn failures(&self) -> usize {
        self.laws.iter().map(|(_, _, f)| f).sum()
    }

    pub fn passed(&self) -> bool {
        self.failures() == 0
    }
}

/// A random map `h^{⊗arity} → g` with small entries.
pub fn random_cochain(
    rng: &mut impl Rng,
    field: FieldSpec,
    arity: usize,
    h_dim: usize,
    g_dim: usize,
) -> MultiMap {
    let len = h_dim.pow(arity as u32) * g_dim;
    let data = (0..len).map(|_| random_scalar(rng, field)).collect();
    MultiMap::from_data(field, arity, h_dim, g_dim, data).expect("sized")
}

pub(crate) fn random_scalar(rng: &mut impl Rng, field: FieldSpec) -> Scalar {
    match field.size() {
        Some(p) => field.element(rng.gen_range(0..p)),
        None => field.from_i64(rng.gen_range(-3..=3)),
    }
}

/// Jacobi triples are drawn with total arity at most this.
pub const JACOBI_TOTAL_ARITY: usize = 5;

/// Checks graded antisymmetry, graded Jacobi, `d² = 0` and the Leibniz rule
/// of `d` on random maps of arity `1..=max_arity`. The context is not
/// validated, so corrupted inputs show up as failed laws.
pub fn check_dgla(
    d: &LeibnizGRep,
    weight: &Scalar,
    max_arity: usize,
    samples: usize,
    seed: u64,
) -> Result<DglaReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let field = d.field();
    let (ng, nh) = (d.g_dim(), d.h_dim());
    let max_arity = max_arity.max(1);
    let mut report = DglaReport::default();
    let sign = |k: usize, x: MultiMap| if k % 2 == 1 { x.neg() } else { x };
    for _ in 0..samples {
        // pair laws
        let (ap, aq) = (rng.gen_range(1..=max_arity), rng.gen_range(1..=max_arity));
        let p = random_cochain(&mut rng, field, ap, nh, ng);
        let q = random_cochain(&mut rng, field, aq, nh, ng);
        let pq = derived_bracket_explicit(d, &p, &q)?;
        let qp = derived_bracket_explicit(d, &q, &p)?;
        report.record("antisymmetry", pq == sign(ap * aq + 1, qp));

        let dp = differential_d_explicit(d, weight, &p)?;
        report.record(
            "d-squared",
            differential_d_explicit(d, weight, &dp)?.is_zero(),
        );

        let dq = differential_d_explicit(d, weight, &q)?;
        let lhs = differential_d_explicit(d, weight, &pq)?;
        let rhs = derived_bracket_explicit(d, &dp, &q)?
            .add(&sign(ap, derived_bracket_explicit(d, &p, &dq)?))?;
        report.record("leibniz-rule", lhs == rhs);

        // Jacobi on a separate triple
        let (ap, aq, ar) = loop {
            let t = (
                rng.gen_range(1..=max_arity),
                rng.gen_range(1..=max_arity),
                rng.gen_range(1..=max_arity),
            );
            if t.0 + t.1 + t.2 <= JACOBI_TOTAL_ARITY.max(3) {
                break t;
            }
        };
        let p = random_cochain(&mut rng, field, ap, nh, ng);
        let q = random_cochain(&mut rng, field, aq, nh, ng);
        let r = random_cochain(&mut rng, field, ar, nh, ng);
        let pq = derived_bracket_explicit(d, &p, &q)?;
        let qr = derived_bracket_explicit(d, &q, &r)?;
        let pr = derived_bracket_explicit(d, &p, &r)?;
        let lhs = derived_bracket_explicit(d, &p, &qr)?;
        let first = derived_bracket_explicit(d, &pq, &r)?;
        let second = sign(ap * aq, derived_bracket_explicit(d, &q, &pr)?);
        report.record("jacobi", lhs == first.add(&second)?);
    }
    Ok(report)
}

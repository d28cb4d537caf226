//! Leibniz algebras, their representations, Leibniz g-representations, the
//! weighted semidirect product and the Leibniz cochain differential.
//!
//! Throughout, algebras are left Leibniz algebras:
//! `[x, [y, z]] = [[x, y], z] + [y, [x, z]]`.

use crate::error::{Error, Result};
use crate::field::{vector, FieldSpec, Scalar};
use crate::linalg::Matrix;
use crate::tensor::{tuples, Arg, Bilinear, LinearMap, MultiMap};
use crate::validation::ValidationReport;

/// A finite-dimensional algebra given by structure constants
/// `[e_i, e_j] = Σ_k c[i][j][k] e_k`. Not validated on construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LeibnizAlgebra {
    bracket: Bilinear,
}

impl LeibnizAlgebra {
    pub fn new(bracket: Bilinear) -> Result<Self> {
        if bracket.left_dim() != bracket.right_dim() || bracket.left_dim() != bracket.out_dim() {
            return Err(Error::shape(format!(
                "bracket tensor {}x{}->{} is not square",
                bracket.left_dim(),
                bracket.right_dim(),
                bracket.out_dim()
            )));
        }
        Ok(LeibnizAlgebra { bracket })
    }

    pub fn abelian(field: FieldSpec, dim: usize) -> Self {
        LeibnizAlgebra {
            bracket: Bilinear::zero(field, dim, dim, dim),
        }
    }

    /// From 0-based `(i, j, k, c)` entries meaning `c[i][j][k] = c`.
    pub fn from_entries(
        field: FieldSpec,
        dim: usize,
        entries: &[(usize, usize, usize, Scalar)],
    ) -> Result<Self> {
        Self::new(Bilinear::from_entries(field, dim, dim, dim, entries)?)
    }

    /// Integer structure constants, 0-based indices.
    pub fn from_int_entries(
        field: FieldSpec,
        dim: usize,
        entries: &[(usize, usize, usize, i64)],
    ) -> Result<Self> {
        let entries: Vec<_> = entries
            .iter()
            .map(|&(i, j, k, c)| (i, j, k, field.from_i64(c)))
            .collect();
        Self::from_entries(field, dim, &entries)
    }

    pub fn dim(&self) -> usize {
        self.bracket.out_dim()
    }

    pub fn field(&self) -> FieldSpec {
        self.bracket.field()
    }

    pub fn structure(&self) -> &Bilinear {
        &self.bracket
    }

    pub fn bracket(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        self.bracket.apply(x, y)
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> &[Scalar] {
        self.bracket.value(i, j)
    }

    /// The bracket as an element of `Hom(g⊗g, g)`.
    pub fn to_multimap(&self) -> MultiMap {
        self.bracket.to_multimap().expect("square bracket")
    }

    pub fn is_abelian(&self) -> bool {
        self.bracket.is_zero()
    }

    /// Structure transported along the change of basis `x ↦ P x`.
    pub fn transport(&self, p: &Matrix) -> Result<LeibnizAlgebra> {
        let p_inv = p.inverse()?;
        Ok(LeibnizAlgebra {
            bracket: conjugate_bilinear(&self.bracket, &p_inv, &p_inv, p),
        })
    }
}

/// `β'(a, b) = out · β(left_inv · a, right_inv · b)` on basis vectors.
pub(crate) fn conjugate_bilinear(
    beta: &Bilinear,
    left_inv: &Matrix,
    right_inv: &Matrix,
    out: &Matrix,
) -> Bilinear {
    let field = beta.field();
    Bilinear::from_fn(
        field,
        beta.left_dim(),
        beta.right_dim(),
        beta.out_dim(),
        |i, j| {
            let a = left_inv.column(i);
            let b = right_inv.column(j);
            out.mul_vec(&beta.apply(&a, &b)).expect("shapes agree")
        },
    )
}

/// Left and right actions `ρ^L: g⊗V → V`, `ρ^R: V⊗g → V`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ActionPair {
    left: Bilinear,
    right: Bilinear,
}

impl ActionPair {
    pub fn new(left: Bilinear, right: Bilinear) -> Result<Self> {
        let (g, v) = (left.left_dim(), left.right_dim());
        if left.out_dim() != v
            || right.left_dim() != v
            || right.right_dim() != g
            || right.out_dim() != v
        {
            return Err(Error::shape(format!(
                "left action {}x{}->{} and right action {}x{}->{} do not fit together",
                left.left_dim(),
                left.right_dim(),
                left.out_dim(),
                right.left_dim(),
                right.right_dim(),
                right.out_dim()
            )));
        }
        Ok(ActionPair { left, right })
    }

    pub fn zero(field: FieldSpec, g_dim: usize, v_dim: usize) -> Self {
        ActionPair {
            left: Bilinear::zero(field, g_dim, v_dim, v_dim),
            right: Bilinear::zero(field, v_dim, g_dim, v_dim),
        }
    }

    /// `ρ^L = ρ^R = [·,·]`.
    pub fn adjoint(g: &LeibnizAlgebra) -> Self {
        ActionPair {
            left: g.structure().clone(),
            right: g.structure().clone(),
        }
    }

    pub fn g_dim(&self) -> usize {
        self.left.left_dim()
    }

    pub fn v_dim(&self) -> usize {
        self.left.right_dim()
    }

    pub fn field(&self) -> FieldSpec {
        self.left.field()
    }

    pub fn left(&self) -> &Bilinear {
        &self.left
    }

    pub fn right(&self) -> &Bilinear {
        &self.right
    }

    /// `ρ^L(x, v)`
    pub fn act_left(&self, x: &[Scalar], v: &[Scalar]) -> Vec<Scalar> {
        self.left.apply(x, v)
    }

    /// `ρ^R(v, x)`
    pub fn act_right(&self, v: &[Scalar], x: &[Scalar]) -> Vec<Scalar> {
        self.right.apply(v, x)
    }
}

/// A Leibniz algebra `h` that is a representation of `g`, coupled by the
/// three extra compatibility axioms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LeibnizGRep {
    g: LeibnizAlgebra,
    h: LeibnizAlgebra,
    actions: ActionPair,
}

impl LeibnizGRep {
    pub fn new(g: LeibnizAlgebra, h: LeibnizAlgebra, actions: ActionPair) -> Result<Self> {
        if actions.g_dim() != g.dim() || actions.v_dim() != h.dim() {
            return Err(Error::shape(format!(
                "actions of a {}-dim algebra on a {}-dim space, expected {} on {}",
                actions.g_dim(),
                actions.v_dim(),
                g.dim(),
                h.dim()
            )));
        }
        if g.field() != h.field() || g.field() != actions.field() {
            return Err(Error::WrongField("context mixes fields".into()));
        }
        Ok(LeibnizGRep { g, h, actions })
    }

    /// `g` acting on itself by the bracket.
    pub fn adjoint(g: &LeibnizAlgebra) -> Self {
        LeibnizGRep {
            g: g.clone(),
            h: g.clone(),
            actions: ActionPair::adjoint(g),
        }
    }

    pub fn with_zero_actions(g: LeibnizAlgebra, h: LeibnizAlgebra) -> Result<Self> {
        let actions = ActionPair::zero(g.field(), g.dim(), h.dim());
        Self::new(g, h, actions)
    }

    /// The ideal spanned by the given basis vectors of `a`, as a Leibniz
    /// `a`-representation via the bracket, together with its inclusion.
    pub fn ideal(a: &LeibnizAlgebra, basis: &[usize]) -> Result<(Self, LinearMap)> {
        let n = a.dim();
        let field = a.field();
        let mut sorted = basis.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != basis.len() {
            return Err(Error::InvalidInput("repeated ideal basis index".into()));
        }
        if let Some(&bad) = sorted.iter().find(|&&i| i >= n) {
            return Err(Error::IndexOutOfRange {
                index: bad,
                limit: n,
            });
        }
        let pos = |k: usize| sorted.iter().position(|&b| b == k);
        let outside = |v: &[Scalar]| {
            v.iter()
                .enumerate()
                .any(|(k, c)| !c.is_zero() && pos(k).is_none())
        };
        for x in 0..n {
            for &u in &sorted {
                if outside(a.bracket_basis(x, u)) || outside(a.bracket_basis(u, x)) {
                    return Err(Error::InvalidInput(format!(
                        "span of e{:?} is not a two-sided ideal (fails at e{}, e{})",
                        sorted.iter().map(|i| i + 1).collect::<Vec<_>>(),
                        x + 1,
                        u + 1
                    )));
                }
            }
        }
        let m = sorted.len();
        let restrict =
            |v: &[Scalar]| -> Vec<Scalar> { sorted.iter().map(|&k| v[k].clone()).collect() };
        let h_bracket = Bilinear::from_fn(field, m, m, m, |i, j| {
            restrict(a.bracket_basis(sorted[i], sorted[j]))
        });
        let left = Bilinear::from_fn(field, n, m, m, |x, j| {
            restrict(a.bracket_basis(x, sorted[j]))
        });
        let right = Bilinear::from_fn(field, m, n, m, |i, x| {
            restrict(a.bracket_basis(sorted[i], x))
        });
        let images: Vec<Vec<Scalar>> = sorted.iter().map(|&k| vector::basis(field, n, k)).collect();
        let inclusion = LinearMap::from_images(field, n, &images)?;
        let ctx = LeibnizGRep::new(
            a.clone(),
            LeibnizAlgebra::new(h_bracket)?,
            ActionPair::new(left, right)?,
        )?;
        Ok((ctx, inclusion))
    }

    pub fn g(&self) -> &LeibnizAlgebra {
        &self.g
    }

    pub fn h(&self) -> &LeibnizAlgebra {
        &self.h
    }

    pub fn actions(&self) -> &ActionPair {
        &self.actions
    }

    pub fn field(&self) -> FieldSpec {
        self.g.field()
    }

    pub fn g_dim(&self) -> usize {
        self.g.dim()
    }

    pub fn h_dim(&self) -> usize {
        self.h.dim()
    }

    /// True when this is the adjoint context of `g`.
    pub fn is_adjoint(&self) -> bool {
        self.g == self.h
            && self.actions.left() == self.g.structure()
            && self.actions.right() == self.g.structure()
    }

    /// Transports all structure along `x ↦ P x` on `g` and `u ↦ Q u` on `h`.
    pub fn transport(&self, p: &Matrix, q: &Matrix) -> Result<LeibnizGRep> {
        let p_inv = p.inverse()?;
        let q_inv = q.inverse()?;
        let g = LeibnizAlgebra::new(conjugate_bilinear(self.g.structure(), &p_inv, &p_inv, p))?;
        let h = LeibnizAlgebra::new(conjugate_bilinear(self.h.structure(), &q_inv, &q_inv, q))?;
        let left = conjugate_bilinear(self.actions.left(), &p_inv, &q_inv, q);
        let right = conjugate_bilinear(self.actions.right(), &q_inv, &p_inv, q);
        LeibnizGRep::new(g, h, ActionPair::new(left, right)?)
    }
}

/// Leibniz identity on every basis triple.
pub fn validate_leibniz(a: &LeibnizAlgebra) -> ValidationReport {
    let n = a.dim();
    let mut report = ValidationReport::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let ei = vector::basis(a.field(), n, i);
                let ej = vector::basis(a.field(), n, j);
                let lhs = a.bracket(&ei, a.bracket_basis(j, k));
                let mut rhs = a.bracket(a.bracket_basis(i, j), &vector::basis(a.field(), n, k));
                vector::add_assign(&mut rhs, &a.bracket(&ej, a.bracket_basis(i, k)));
                report.compare("leibniz", &[i, j, k], lhs, rhs);
            }
        }
    }
    report
}

/// The three representation axioms on every basis triple `(x, y, v)`.
pub fn validate_representation(
    g: &LeibnizAlgebra,
    actions: &ActionPair,
) -> Result<ValidationReport> {
    if actions.g_dim() != g.dim() {
        return Err(Error::shape(format!(
            "actions expect a {}-dim algebra, got {}",
            actions.g_dim(),
            g.dim()
        )));
    }
    let field = g.field();
    let (n, m) = (g.dim(), actions.v_dim());
    let (l, r) = (actions.left(), actions.right());
    let mut report = ValidationReport::new();
    for x in 0..n {
        for y in 0..n {
            let xy = g.bracket_basis(x, y);
            for v in 0..m {
                // ρL(x, ρL(y, v)) = ρL([x,y], v) + ρL(y, ρL(x, v))
                let lhs = l.apply_left_basis(x, l.value(y, v));
                let mut rhs = l.apply_right_basis(xy, v);
                vector::add_assign(&mut rhs, &l.apply_left_basis(y, l.value(x, v)));
                report.compare("rep1", &[x, y, v], lhs, rhs);

                // ρL(x, ρR(v, y)) = ρR(ρL(x, v), y) + ρR(v, [x,y])
                let lhs = l.apply_left_basis(x, r.value(v, y));
                let mut rhs = r.apply_right_basis(l.value(x, v), y);
                let ev = vector::basis(field, m, v);
                vector::add_assign(&mut rhs, &r.apply(&ev, xy));
                report.compare("rep2", &[x, y, v], lhs, rhs);

                // ρR(v, [x,y]) = ρR(ρR(v, x), y) + ρL(x, ρR(v, y))
                let lhs = r.apply(&ev, xy);
                let mut rhs = r.apply_right_basis(r.value(v, x), y);
                vector::add_assign(&mut rhs, &l.apply_left_basis(x, r.value(v, y)));
                report.compare("rep3", &[x, y, v], lhs, rhs);
            }
        }
    }
    Ok(report)
}

/// Both algebras, the representation axioms, and the three coupling axioms.
pub fn validate_leibniz_g_rep(d: &LeibnizGRep) -> ValidationReport {
    let mut report = ValidationReport::new();
    report.merge_prefixed("g", validate_leibniz(d.g()));
    report.merge_prefixed("h", validate_leibniz(d.h()));
    report.merge(
        validate_representation(d.g(), d.actions()).expect("shapes checked at construction"),
    );
    let h = d.h();
    let (l, r) = (d.actions().left(), d.actions().right());
    let (n, m) = (d.g_dim(), d.h_dim());
    let field = d.field();
    let hb = h.structure();
    for u in 0..m {
        let eu = vector::basis(field, m, u);
        for v in 0..m {
            let ev = vector::basis(field, m, v);
            let uv = h.bracket_basis(u, v);
            for x in 0..n {
                // [u, ρR(v,x)] = ρR([u,v], x) + [v, ρR(u,x)]
                let lhs = hb.apply_left_basis(u, r.value(v, x));
                let mut rhs = r.apply_right_basis(uv, x);
                vector::add_assign(&mut rhs, &hb.apply_left_basis(v, r.value(u, x)));
                report.compare("lrep1", &[u, v, x], lhs, rhs);

                // [u, ρL(x,v)] = [ρR(u,x), v] + ρL(x, [u,v])
                let lhs = hb.apply(&eu, l.value(x, v));
                let mut rhs = hb.apply(r.value(u, x), &ev);
                vector::add_assign(&mut rhs, &l.apply_left_basis(x, uv));
                report.compare("lrep2", &[u, v, x], lhs, rhs);

                // ρL(x, [u,v]) = [ρL(x,u), v] + [u, ρL(x,v)]
                let lhs = l.apply_left_basis(x, uv);
                let mut rhs = hb.apply(l.value(x, u), &ev);
                vector::add_assign(&mut rhs, &hb.apply(&eu, l.value(x, v)));
                report.compare("lrep3", &[u, v, x], lhs, rhs);
            }
        }
    }
    report
}

/// Bracket of `g ⋉_λ h` without validating the input.
pub(crate) fn semidirect_unchecked(d: &LeibnizGRep, weight: &Scalar) -> LeibnizAlgebra {
    let (n, m) = (d.g_dim(), d.h_dim());
    let field = d.field();
    let bracket = Bilinear::from_fn(field, n + m, n + m, n + m, |a, b| {
        let mut out = vector::zeros(field, n + m);
        match (a < n, b < n) {
            (true, true) => out[..n].clone_from_slice(d.g().bracket_basis(a, b)),
            (true, false) => out[n..].clone_from_slice(d.actions().left().value(a, b - n)),
            (false, true) => out[n..].clone_from_slice(d.actions().right().value(a - n, b)),
            (false, false) => {
                out[n..].clone_from_slice(&vector::scale(weight, d.h().bracket_basis(a - n, b - n)))
            }
        }
        out
    });
    LeibnizAlgebra { bracket }
}

/// The λ-weighted semidirect product on `g ⊕ h` (g coordinates first).
pub fn semidirect_product(d: &LeibnizGRep, weight: &Scalar) -> Result<LeibnizAlgebra> {
    let report = validate_leibniz_g_rep(d);
    if !report.is_valid() {
        return Err(Error::InvalidInput(format!(
            "context is not a Leibniz g-representation: {}",
            report.violations[0]
        )));
    }
    Ok(semidirect_unchecked(d, weight))
}

/// Checks `f[x, y] = [f x, f y]` on basis pairs.
pub fn check_algebra_morphism(
    source: &LeibnizAlgebra,
    target: &LeibnizAlgebra,
    f: &LinearMap,
) -> Result<ValidationReport> {
    if f.source_dim() != source.dim() || f.target_dim() != target.dim() {
        return Err(Error::shape(
            "morphism does not match the algebra dimensions",
        ));
    }
    let mut report = ValidationReport::new();
    for i in 0..source.dim() {
        for j in 0..source.dim() {
            let lhs = f.apply(source.bracket_basis(i, j));
            let rhs = target.bracket(&f.image(i), &f.image(j));
            report.compare("morphism", &[i, j], lhs, rhs);
        }
    }
    Ok(report)
}

/// The Leibniz cochain differential `C^n(g, V) → C^{n+1}(g, V)`.
///
/// `f` is an arity-`n` map `g^{⊗n} → V`; `n = 0` encodes an element of `V`,
/// for which the formula reduces to `(δv)(x) = -ρ^R(v, x)`.
pub fn leibniz_differential(
    g: &LeibnizAlgebra,
    actions: &ActionPair,
    f: &MultiMap,
) -> Result<MultiMap> {
    if actions.g_dim() != g.dim() || f.source_dim() != g.dim() || f.target_dim() != actions.v_dim()
    {
        return Err(Error::shape(format!(
            "cochain {}->{} against algebra of dim {} acting on dim {}",
            f.source_dim(),
            f.target_dim(),
            g.dim(),
            actions.v_dim()
        )));
    }
    let n = f.arity();
    let field = g.field();
    let v_dim = actions.v_dim();
    let (l, r) = (actions.left(), actions.right());
    Ok(MultiMap::from_fn(field, n + 1, g.dim(), v_dim, |xs| {
        let mut out = vector::zeros(field, v_dim);
        // Σ_{i≤n} (-1)^{i+1} ρL(x_i, f(.. x̂_i ..))
        for i in 0..n {
            let rest: Vec<usize> = omit(xs, i);
            let term = l.apply_left_basis(xs[i], f.value(&rest));
            // 0-based i: sign (-1)^{(i+1)+1}
            if i % 2 == 0 {
                vector::add_assign(&mut out, &term);
            } else {
                vector::sub_assign(&mut out, &term);
            }
        }
        // (-1)^{n+1} ρR(f(x_1..x_n), x_{n+1})
        let term = r.apply_right_basis(f.value(&xs[..n]), xs[n]);
        if n % 2 == 1 {
            vector::add_assign(&mut out, &term);
        } else {
            vector::sub_assign(&mut out, &term);
        }
        // Σ_{i<j} (-1)^i f(.. x̂_i .., [x_i, x_j], ..)
        for i in 0..=n {
            for j in i + 1..=n {
                let br = g.bracket_basis(xs[i], xs[j]);
                if vector::is_zero(br) {
                    continue;
                }
                let args = substituted_args(xs, i, j, br);
                let term = f.eval(&args);
                if i % 2 == 0 {
                    vector::sub_assign(&mut out, &term);
                } else {
                    vector::add_assign(&mut out, &term);
                }
            }
        }
        out
    }))
}

/// `xs` without position `i`.
pub(crate) fn omit(xs: &[usize], i: usize) -> Vec<usize> {
    xs.iter()
        .enumerate()
        .filter(|&(k, _)| k != i)
        .map(|(_, &x)| x)
        .collect()
}

/// Arguments `(x_1, .., x̂_i, .., x_{j-1}, w, x_{j+1}, ..)` with `w` a vector.
pub(crate) fn substituted_args<'a>(
    xs: &[usize],
    i: usize,
    j: usize,
    w: &'a [Scalar],
) -> Vec<Arg<'a>> {
    let mut args = Vec::with_capacity(xs.len() - 1);
    for (k, &x) in xs.iter().enumerate() {
        if k == i {
            continue;
        }
        if k == j {
            args.push(Arg::Vector(w));
        } else {
            args.push(Arg::Basis(x));
        }
    }
    args
}

/// Every cochain basis element of `Hom(g^{⊗n}, V)` in flattening order.
pub fn cochain_basis(
    field: FieldSpec,
    arity: usize,
    source_dim: usize,
    target_dim: usize,
) -> Vec<MultiMap> {
    let total = source_dim.pow(arity as u32) * target_dim;
    (0..total)
        .map(|idx| {
            let mut data = vector::zeros(field, total);
            data[idx] = field.one();
            MultiMap::from_data(field, arity, source_dim, target_dim, data).expect("sized")
        })
        .collect()
}

/// All basis tuples of a given arity; re-exported for callers building cochains.
pub fn basis_tuples(dim: usize, arity: usize) -> Vec<Vec<usize>> {
    tuples(dim, arity)
}

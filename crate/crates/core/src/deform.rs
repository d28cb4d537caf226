//! Order-N deformations `T_t = Σ t^i T_i` of a weighted relative
//! Rota-Baxter operator, with all arithmetic truncated at `t^{N+1}`.

use std::collections::BTreeSet;

use crate::bracket::{derived_bracket_explicit, differential_d_explicit};
use crate::cohomology::{
    delta_matrix, delta_t, is_cocycle, solve_coboundary, twisted_differential,
};
use crate::enumerate::{collect_indexed, space_size, vector_at};
use crate::error::{Error, Result};
use crate::field::{vector, Scalar};
use crate::linalg::Matrix;
use crate::rbo::WeightedRBO;
use crate::tensor::{LinearMap, MultiMap};
use crate::validation::ValidationReport;

/// `T_0, …, T_N` over a base operator with `T_0 = T`. Not validated on
/// construction; see [`check_deformation`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Deformation {
    base: WeightedRBO,
    coefficients: Vec<LinearMap>,
}

impl Deformation {
    pub fn new(base: WeightedRBO, coefficients: Vec<LinearMap>) -> Result<Self> {
        let d = base.context();
        if coefficients.is_empty() {
            return Err(Error::shape("a deformation needs at least T_0"));
        }
        for (i, t) in coefficients.iter().enumerate() {
            if t.source_dim() != d.h_dim() || t.target_dim() != d.g_dim() {
                return Err(Error::shape(format!(
                    "T_{i} maps {} -> {}, expected {} -> {}",
                    t.source_dim(),
                    t.target_dim(),
                    d.h_dim(),
                    d.g_dim()
                )));
            }
            if t.field() != d.field() {
                return Err(Error::WrongField(format!(
                    "T_{i} is not over {}",
                    d.field()
                )));
            }
        }
        if &coefficients[0] != base.map() {
            return Err(Error::BaseMismatch);
        }
        Ok(Deformation { base, coefficients })
    }

    /// `T_t = T`, padded with zeros up to order `order`.
    pub fn trivial(base: WeightedRBO, order: usize) -> Self {
        let d = base.context();
        let zero = LinearMap::zero(d.field(), d.h_dim(), d.g_dim());
        let mut coefficients = vec![base.map().clone()];
        coefficients.extend(std::iter::repeat_n(zero, order));
        Deformation { base, coefficients }
    }

    pub fn base(&self) -> &WeightedRBO {
        &self.base
    }

    pub fn order(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficients(&self) -> &[LinearMap] {
        &self.coefficients
    }

    pub fn coefficient(&self, i: usize) -> Option<&LinearMap> {
        self.coefficients.get(i)
    }

    /// The order `N+1` candidate `T_t + t^{N+1} next`.
    pub fn with_next(&self, next: LinearMap) -> Result<Deformation> {
        let mut coefficients = self.coefficients.clone();
        coefficients.push(next);
        Deformation::new(self.base.clone(), coefficients)
    }
}

/// Coefficient of `t^n` in `T_t(ρ^L(T_t u, v) + ρ^R(u, T_t v) + λ[u,v]) - [T_t u, T_t v]`.
fn order_residual(base: &WeightedRBO, ts: &[LinearMap], n: usize) -> MultiMap {
    let d = base.context();
    let field = d.field();
    let (l, r) = (d.actions().left(), d.actions().right());
    let images: Vec<Vec<Vec<Scalar>>> = ts[..=n]
        .iter()
        .map(|t| (0..d.h_dim()).map(|u| t.image(u)).collect())
        .collect();
    MultiMap::from_fn(field, 2, d.h_dim(), d.g_dim(), |uv| {
        let (u, v) = (uv[0], uv[1]);
        let mut out = ts[n].apply(&vector::scale(base.weight(), d.h().bracket_basis(u, v)));
        for i in 0..=n {
            let j = n - i;
            let mut inner = l.apply_right_basis(&images[j][u], v);
            vector::add_assign(&mut inner, &r.apply_left_basis(u, &images[j][v]));
            vector::add_assign(&mut out, &ts[i].apply(&inner));
            vector::sub_assign(&mut out, &d.g().bracket(&images[i][u], &images[j][v]));
        }
        out
    })
}

/// `d T_0 + ½⟦T_0, T_0⟧` at `n = 0`, else `d_T T_n + ½ Σ_{i+j=n, i,j≥1} ⟦T_i, T_j⟧`.
pub fn graded_residual(def: &Deformation, n: usize) -> Result<MultiMap> {
    let r = &def.base;
    let d = r.context();
    let half = d.field().half().ok_or(Error::CharacteristicTwo)?;
    let ts = &def.coefficients;
    if n >= ts.len() {
        return Err(Error::IndexOutOfRange {
            index: n,
            limit: ts.len(),
        });
    }
    let t0 = ts[0].to_multimap();
    if n == 0 {
        let dt = differential_d_explicit(d, r.weight(), &t0)?;
        return dt.add(&derived_bracket_explicit(d, &t0, &t0)?.scale(&half));
    }
    let mut out = twisted_differential(r, &ts[n].to_multimap())?;
    let quadratic = bracket_sum(def, n)?;
    out.axpy(&half, &quadratic)?;
    Ok(out)
}

/// `Σ_{i+j=n, i,j≥1} ⟦T_i, T_j⟧` over the available coefficients.
fn bracket_sum(def: &Deformation, n: usize) -> Result<MultiMap> {
    let d = def.base.context();
    let mut out = MultiMap::zero(d.field(), 2, d.h_dim(), d.g_dim());
    for i in 1..n {
        let (a, b) = (&def.coefficients[i], &def.coefficients[n - i]);
        out.add_assign(&derived_bracket_explicit(
            d,
            &a.to_multimap(),
            &b.to_multimap(),
        )?)?;
    }
    Ok(out)
}

/// The deformation equations at every order `n ≤ N` (rules `order-n`), with
/// the graded form of each order cross-checked tensor-wise outside
/// characteristic 2.
pub fn check_deformation(def: &Deformation) -> Result<ValidationReport> {
    let d = def.base.context();
    let ts = &def.coefficients;
    let mut report = ValidationReport::new();
    for n in 0..ts.len() {
        let residual = order_residual(&def.base, ts, n);
        let rule = format!("order-{n}");
        for u in 0..d.h_dim() {
            for v in 0..d.h_dim() {
                let r = residual.value(&[u, v]).to_vec();
                report.compare(&rule, &[u, v], r, vector::zeros(d.field(), d.g_dim()));
            }
        }
        if d.field().half().is_some() && graded_residual(def, n)? != residual {
            return Err(Error::OracleDisagreement(format!(
                "deformation equation and graded form differ at order {n}"
            )));
        }
    }
    Ok(report)
}

pub fn is_deformation(def: &Deformation) -> Result<bool> {
    Ok(check_deformation(def)?.is_valid())
}

fn ensure_deformation(def: &Deformation) -> Result<()> {
    match check_deformation(def)?.violations.first() {
        None => Ok(()),
        Some(v) => Err(Error::InvalidDeformation(v.to_string())),
    }
}

/// `T_1` of a valid deformation and whether `δT_1 = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Infinitesimal {
    pub map: LinearMap,
    pub is_cocycle: bool,
}

pub fn infinitesimal(def: &Deformation) -> Result<Infinitesimal> {
    if def.order() == 0 {
        return Err(Error::InvalidDeformation(
            "order 0 has no infinitesimal".into(),
        ));
    }
    ensure_deformation(def)?;
    let map = def.coefficients[1].clone();
    let is_cocycle = is_cocycle(&def.base, &map.to_multimap())?;
    Ok(Infinitesimal { map, is_cocycle })
}

/// Data of `Φ_t = id + t[x0,-] + Σ_{i≥2} t^i φ_i` on `g` and
/// `Ψ_t = id + tρ^L(x0,-) + Σ_{i≥2} t^i ψ_i` on `h`. `phi[0]` is `φ_2`;
/// missing higher terms are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equivalence {
    pub x0: Vec<Scalar>,
    pub phi: Vec<LinearMap>,
    pub psi: Vec<LinearMap>,
}

impl Equivalence {
    pub fn first_order(x0: Vec<Scalar>) -> Self {
        Equivalence {
            x0,
            phi: Vec::new(),
            psi: Vec::new(),
        }
    }
}

/// `(Φ_0..Φ_N, Ψ_0..Ψ_N)` as matrices.
fn series(r: &WeightedRBO, e: &Equivalence, order: usize) -> Result<(Vec<Matrix>, Vec<Matrix>)> {
    let d = r.context();
    let field = d.field();
    let (ng, nh) = (d.g_dim(), d.h_dim());
    if e.x0.len() != ng {
        return Err(Error::shape(format!(
            "x0 has length {}, g has dimension {ng}",
            e.x0.len()
        )));
    }
    let higher = order.saturating_sub(1);
    if e.phi.len() > higher || e.psi.len() > higher {
        return Err(Error::shape(format!(
            "at most {higher} higher terms fit order {order}"
        )));
    }
    for m in &e.phi {
        if m.source_dim() != ng || m.target_dim() != ng {
            return Err(Error::shape("φ_i must be maps g -> g"));
        }
    }
    for m in &e.psi {
        if m.source_dim() != nh || m.target_dim() != nh {
            return Err(Error::shape("ψ_i must be maps h -> h"));
        }
    }
    let ad: Vec<Vec<Scalar>> = (0..ng)
        .map(|x| d.g().structure().apply_right_basis(&e.x0, x))
        .collect();
    let act: Vec<Vec<Scalar>> = (0..nh)
        .map(|u| d.actions().left().apply_right_basis(&e.x0, u))
        .collect();
    let mut phi = vec![Matrix::identity(field, ng)];
    let mut psi = vec![Matrix::identity(field, nh)];
    if order >= 1 {
        phi.push(Matrix::from_columns(field, ng, &ad)?);
        psi.push(Matrix::from_columns(field, nh, &act)?);
    }
    for k in 2..=order {
        phi.push(
            e.phi
                .get(k - 2)
                .map_or_else(|| Matrix::zeros(field, ng, ng), |m| m.matrix().clone()),
        );
        psi.push(
            e.psi
                .get(k - 2)
                .map_or_else(|| Matrix::zeros(field, nh, nh), |m| m.matrix().clone()),
        );
    }
    Ok((phi, psi))
}

/// Whether `(Φ_t, Ψ_t)` is a morphism from `T_t` to `T'_t`, checked for each
/// power of `t` up to `N` (rules `phi-k`, `psi-k`, `intertwine-k`, `left-k`,
/// `right-k`). When orders 0 and 1 hold, `T_1 - T'_1 = δx0` is asserted.
pub fn check_equivalence(
    def: &Deformation,
    other: &Deformation,
    e: &Equivalence,
) -> Result<ValidationReport> {
    if def.base != other.base {
        return Err(Error::BaseMismatch);
    }
    if def.order() != other.order() {
        return Err(Error::shape(format!(
            "orders {} and {} differ",
            def.order(),
            other.order()
        )));
    }
    let r = &def.base;
    let d = r.context();
    let field = d.field();
    let (ng, nh) = (d.g_dim(), d.h_dim());
    let order = def.order();
    let (phi, psi) = series(r, e, order)?;
    let (l, rr) = (d.actions().left(), d.actions().right());
    let mut report = ValidationReport::new();
    for k in 0..=order {
        let pairs: Vec<(usize, usize)> = (0..=k).map(|i| (i, k - i)).collect();
        let rule = |name: &str| format!("{name}-{k}");
        for x in 0..ng {
            for y in 0..ng {
                let lhs = phi[k].mul_vec(d.g().bracket_basis(x, y))?;
                let mut rhs = vector::zeros(field, ng);
                for &(i, j) in &pairs {
                    vector::add_assign(
                        &mut rhs,
                        &d.g().bracket(&phi[i].column(x), &phi[j].column(y)),
                    );
                }
                report.compare(&rule("phi"), &[x, y], lhs, rhs);
            }
        }
        for u in 0..nh {
            for v in 0..nh {
                let lhs = psi[k].mul_vec(d.h().bracket_basis(u, v))?;
                let mut rhs = vector::zeros(field, nh);
                for &(i, j) in &pairs {
                    vector::add_assign(
                        &mut rhs,
                        &d.h().bracket(&psi[i].column(u), &psi[j].column(v)),
                    );
                }
                report.compare(&rule("psi"), &[u, v], lhs, rhs);
            }
        }
        for u in 0..nh {
            let mut lhs = vector::zeros(field, ng);
            let mut rhs = vector::zeros(field, ng);
            for &(i, j) in &pairs {
                vector::add_assign(&mut lhs, &phi[i].mul_vec(&def.coefficients[j].image(u))?);
                vector::add_assign(&mut rhs, &other.coefficients[i].apply(&psi[j].column(u)));
            }
            report.compare(&rule("intertwine"), &[u], lhs, rhs);
        }
        for x in 0..ng {
            for u in 0..nh {
                let lhs = psi[k].mul_vec(l.value(x, u))?;
                let mut rhs = vector::zeros(field, nh);
                for &(i, j) in &pairs {
                    vector::add_assign(&mut rhs, &l.apply(&phi[i].column(x), &psi[j].column(u)));
                }
                report.compare(&rule("left"), &[x, u], lhs, rhs);
                let lhs = psi[k].mul_vec(rr.value(u, x))?;
                let mut rhs = vector::zeros(field, nh);
                for &(i, j) in &pairs {
                    vector::add_assign(&mut rhs, &rr.apply(&psi[i].column(u), &phi[j].column(x)));
                }
                report.compare(&rule("right"), &[u, x], lhs, rhs);
            }
        }
    }
    let low_orders_hold = report
        .violations
        .iter()
        .all(|v| !v.rule.ends_with("-0") && !v.rule.ends_with("-1"));
    if order >= 1 && low_orders_hold {
        let difference = def.coefficients[1]
            .sub(&other.coefficients[1])?
            .to_multimap();
        let dx = delta_t(r, &MultiMap::constant(field, nh, e.x0.clone()))?;
        if difference != dx {
            return Err(Error::OracleDisagreement(
                "equivalent infinitesimals differ by more than δx0".into(),
            ));
        }
    }
    Ok(report)
}

pub fn is_equivalent(def: &Deformation, other: &Deformation, e: &Equivalence) -> Result<bool> {
    Ok(check_equivalence(def, other, e)?.is_valid())
}

/// Product of two truncated matrix polynomials.
fn poly_mul(a: &[Matrix], b: &[Matrix], order: usize) -> Result<Vec<Matrix>> {
    let mut out = Vec::with_capacity(order + 1);
    for k in 0..=order {
        let mut acc = Matrix::zeros(a[0].field(), a[0].rows(), b[0].cols());
        for i in 0..=k {
            acc = acc.add(&a[i].mul(&b[k - i])?)?;
        }
        out.push(acc);
    }
    Ok(out)
}

/// Inverse of `id + E(t)` with `E(0) = 0`, as `Σ (-E)^m` truncated.
fn poly_inverse(a: &[Matrix], order: usize) -> Result<Vec<Matrix>> {
    let field = a[0].field();
    let n = a[0].rows();
    let zero = Matrix::zeros(field, n, n);
    let mut minus_e: Vec<Matrix> = a.iter().map(|m| m.scale(&-field.one())).collect();
    minus_e[0] = zero.clone();
    let mut power: Vec<Matrix> = std::iter::once(Matrix::identity(field, n))
        .chain(std::iter::repeat_n(zero, order))
        .collect();
    let mut sum = power.clone();
    for _ in 0..order {
        power = poly_mul(&power, &minus_e, order)?;
        for (s, p) in sum.iter_mut().zip(&power) {
            *s = s.add(p)?;
        }
    }
    Ok(sum)
}

/// `T'_t = Φ_t T_t Ψ_t^{-1}` truncated at the order of `def`. When `x0` is a
/// Nijenhuis element and the higher terms vanish, the result is again a
/// deformation and equivalent to `def`.
pub fn conjugate(def: &Deformation, e: &Equivalence) -> Result<Deformation> {
    let order = def.order();
    let (phi, psi) = series(&def.base, e, order)?;
    let ts: Vec<Matrix> = def
        .coefficients
        .iter()
        .map(|t| t.matrix().clone())
        .collect();
    let psi_inv = poly_inverse(&psi, order)?;
    let product = poly_mul(&poly_mul(&phi, &ts, order)?, &psi_inv, order)?;
    Deformation::new(
        def.base.clone(),
        product.into_iter().map(LinearMap::new).collect(),
    )
}

/// The four Nijenhuis conditions on basis tuples (rules `nij1`..`nij4`).
pub fn nijenhuis_report(r: &WeightedRBO, x0: &[Scalar]) -> Result<ValidationReport> {
    let d = r.context();
    let field = d.field();
    let (ng, nh) = (d.g_dim(), d.h_dim());
    if x0.len() != ng {
        return Err(Error::shape(format!(
            "x0 has length {}, g has dimension {ng}",
            x0.len()
        )));
    }
    let (l, rr) = (d.actions().left(), d.actions().right());
    let ad: Vec<Vec<Scalar>> = (0..ng)
        .map(|x| d.g().structure().apply_right_basis(x0, x))
        .collect();
    let act: Vec<Vec<Scalar>> = (0..nh).map(|u| l.apply_right_basis(x0, u)).collect();
    let mut report = ValidationReport::new();
    for x in 0..ng {
        for y in 0..ng {
            report.compare(
                "nij1",
                &[x, y],
                d.g().bracket(&ad[x], &ad[y]),
                vector::zeros(field, ng),
            );
        }
    }
    for u in 0..nh {
        for v in 0..nh {
            report.compare(
                "nij2",
                &[u, v],
                d.h().bracket(&act[u], &act[v]),
                vector::zeros(field, nh),
            );
        }
    }
    for (x, adx) in ad.iter().enumerate() {
        for (u, actu) in act.iter().enumerate() {
            report.compare(
                "nij3",
                &[x, u],
                l.apply(adx, actu),
                vector::zeros(field, nh),
            );
            report.compare(
                "nij4",
                &[u, x],
                rr.apply(actu, adx),
                vector::zeros(field, nh),
            );
        }
    }
    Ok(report)
}

pub fn check_nijenhuis(r: &WeightedRBO, x0: &[Scalar]) -> Result<bool> {
    Ok(nijenhuis_report(r, x0)?.is_valid())
}

/// All Nijenhuis elements over a finite field, in lexicographic order.
pub fn nijenhuis_elements(r: &WeightedRBO, cap: u128, jobs: usize) -> Result<Vec<Vec<Scalar>>> {
    let d = r.context();
    let field = d.field();
    let count = space_size(field, d.g_dim(), cap, "elements of g")?;
    collect_indexed(count, jobs, |i| {
        let x0 = vector_at(field, d.g_dim(), i);
        Ok(check_nijenhuis(r, &x0)?.then_some(x0))
    })
}

/// Outcome of comparing `Z^1` with `δ(Nij(T))` by enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RigidityCertificate {
    /// `Z^1 = δ(Nij(T))` as sets.
    pub holds: bool,
    pub cocycle_count: u64,
    pub nijenhuis_count: usize,
    pub image_count: usize,
    /// The first cocycle, in enumeration order, outside `δ(Nij(T))`.
    pub witness: Option<LinearMap>,
}

/// Enumerates `Z^1` through a cocycle basis and `δ(Nij(T))` through all of
/// `g`. Needs `GF(p)` with `p > 3`.
pub fn rigidity_certificate(
    r: &WeightedRBO,
    cap: u128,
    jobs: usize,
) -> Result<RigidityCertificate> {
    let d = r.context();
    let field = d.field();
    match field.size() {
        Some(p) if p > 3 => {}
        _ => {
            return Err(Error::WrongField(format!(
                "rigidity enumeration needs GF(p) with p > 3, got {field}"
            )))
        }
    }
    r.ensure_valid()?;
    let (ng, nh) = (d.g_dim(), d.h_dim());
    let z = delta_matrix(r, 1, cap.min(usize::MAX as u128) as usize)?.kernel_basis();
    let count = space_size(field, z.len(), cap, "1-cocycles")?;
    let nij = nijenhuis_elements(r, cap, jobs)?;
    let mut image = BTreeSet::new();
    for x0 in &nij {
        let dx = delta_t(r, &MultiMap::constant(field, nh, x0.clone()))?;
        if !delta_t(r, &dx)?.is_zero() {
            return Err(Error::OracleDisagreement("δ(x0) is not a cocycle".into()));
        }
        image.insert(dx.into_data());
    }
    let len = ng * nh;
    let combine = |i: u64| {
        let coeffs = vector_at(field, z.len(), i);
        let mut v = vector::zeros(field, len);
        for (c, b) in coeffs.iter().zip(&z) {
            vector::axpy(&mut v, c, b);
        }
        v
    };
    let outside = collect_indexed(count, jobs, |i| {
        let v = combine(i);
        Ok((!image.contains(&v)).then_some(v))
    })?;
    let witness = match outside.first() {
        Some(v) => Some(MultiMap::from_data(field, 1, nh, ng, v.clone())?.to_linear()?),
        None => None,
    };
    Ok(RigidityCertificate {
        holds: outside.is_empty() && image.len() as u64 == count,
        cocycle_count: count,
        nijenhuis_count: nij.len(),
        image_count: image.len(),
        witness,
    })
}

/// `Ob = -½ Σ_{i+j=N+1, i,j≥1} ⟦T_i, T_j⟧`, whether it is `δx` for some
/// `x: h → g`, and such an `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionClass {
    pub ob: MultiMap,
    pub is_coboundary: bool,
    pub witness: Option<LinearMap>,
}

/// The obstruction cochain alone, without validating `def`.
pub fn obstruction_cochain(def: &Deformation) -> Result<MultiMap> {
    let field = def.base.context().field();
    let half = field.half().ok_or(Error::CharacteristicTwo)?;
    let n = def.order() + 1;
    let mut extended = def.coefficients.clone();
    extended.push(LinearMap::zero(
        field,
        def.base.context().h_dim(),
        def.base.context().g_dim(),
    ));
    let padded = Deformation {
        base: def.base.clone(),
        coefficients: extended,
    };
    Ok(bracket_sum(&padded, n)?.scale(&-half))
}

/// The obstruction class of a valid deformation; `cap` bounds cochain spaces.
pub fn obstruction(def: &Deformation, cap: usize) -> Result<ObstructionClass> {
    if def.base.context().field().half().is_none() {
        return Err(Error::CharacteristicTwo);
    }
    ensure_deformation(def)?;
    let ob = obstruction_cochain(def)?;
    if !delta_t(&def.base, &ob)?.is_zero() {
        return Err(Error::OracleDisagreement(
            "the obstruction cochain is not a cocycle".into(),
        ));
    }
    let witness = match solve_coboundary(&def.base, &ob, cap)? {
        Some(x) => Some(x.to_linear()?),
        None => None,
    };
    Ok(ObstructionClass {
        is_coboundary: witness.is_some(),
        ob,
        witness,
    })
}

/// The order `N+1` deformation with `T_{N+1} = -x`, where `δx = Ob`, or
/// `None` when the obstruction class is nonzero.
pub fn extend(def: &Deformation, cap: usize) -> Result<Option<Deformation>> {
    let class = obstruction(def, cap)?;
    let Some(x) = class.witness else {
        return Ok(None);
    };
    let next = def.with_next(x.scale(&-def.base.context().field().one()))?;
    if let Some(v) = check_deformation(&next)?.violations.first() {
        return Err(Error::OracleDisagreement(format!(
            "extension along a coboundary fails {v}"
        )));
    }
    Ok(Some(next))
}

/// Every `T_{N+1}` completing a valid deformation to order `N+1`, found by
/// enumerating all maps `h → g` over a finite field.
pub fn brute_force_extensions(def: &Deformation, cap: u128, jobs: usize) -> Result<Vec<LinearMap>> {
    ensure_deformation(def)?;
    let d = def.base.context();
    let field = d.field();
    let (ng, nh) = (d.g_dim(), d.h_dim());
    let count = space_size(field, ng * nh, cap, "maps h -> g")?;
    let n = def.order() + 1;
    collect_indexed(count, jobs, |i| {
        let t = LinearMap::new(Matrix::from_data(
            field,
            ng,
            nh,
            vector_at(field, ng * nh, i),
        )?);
        let mut ts = def.coefficients.clone();
        ts.push(t.clone());
        Ok(order_residual(&def.base, &ts, n).is_zero().then_some(t))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::DEFAULT_COCHAIN_CAP;
    use crate::enumerate::DEFAULT_ENUMERATION_CAP;
    use crate::field::FieldSpec;
    use crate::leibniz::{LeibnizAlgebra, LeibnizGRep};

    fn gf(p: u64) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    fn nil2(f: FieldSpec) -> LeibnizAlgebra {
        LeibnizAlgebra::from_int_entries(f, 2, &[(0, 0, 1, 1)]).unwrap()
    }

    fn lin(f: FieldSpec, rows: &[&[i64]]) -> LinearMap {
        LinearMap::new(Matrix::from_i64(f, rows).unwrap())
    }

    /// g = [e1,e1]=e2, h one-dimensional abelian, zero actions, T = 0.
    fn obstructed_base(f: FieldSpec) -> WeightedRBO {
        let d = LeibnizGRep::with_zero_actions(nil2(f), LeibnizAlgebra::abelian(f, 1)).unwrap();
        WeightedRBO::validated(d, f.zero(), LinearMap::zero(f, 1, 2)).unwrap()
    }

    fn identity_base(f: FieldSpec) -> WeightedRBO {
        WeightedRBO::validated(
            LeibnizGRep::adjoint(&nil2(f)),
            f.from_i64(-1),
            LinearMap::identity(f, 2),
        )
        .unwrap()
    }

    #[test]
    fn trivial_deformation_is_valid_and_extends_by_zero() {
        for f in [FieldSpec::Rationals, gf(5)] {
            let def = Deformation::trivial(identity_base(f), 3);
            assert!(is_deformation(&def).unwrap());
            let inf = infinitesimal(&def).unwrap();
            assert!(inf.map.is_zero() && inf.is_cocycle);
            let class = obstruction(&def, DEFAULT_COCHAIN_CAP).unwrap();
            assert!(class.ob.is_zero() && class.is_coboundary);
            assert!(class.witness.unwrap().is_zero());
            let next = extend(&def, DEFAULT_COCHAIN_CAP).unwrap().unwrap();
            assert_eq!(next.order(), 4);
            assert!(next.coefficients()[4].is_zero());
        }
    }

    #[test]
    fn base_mismatch_is_rejected() {
        let f = gf(5);
        let base = identity_base(f);
        let err = Deformation::new(base, vec![LinearMap::zero(f, 2, 2)]).unwrap_err();
        assert_eq!(err, Error::BaseMismatch);
    }

    #[test]
    fn order_one_deformations_are_the_cocycles() {
        let f = gf(5);
        let base = identity_base(f);
        let z1 = delta_matrix(&base, 1, DEFAULT_COCHAIN_CAP)
            .unwrap()
            .kernel_basis();
        for i in 0..625 {
            let t1 = LinearMap::new(Matrix::from_data(f, 2, 2, vector_at(f, 4, i)).unwrap());
            let def = Deformation::new(base.clone(), vec![base.map().clone(), t1.clone()]).unwrap();
            let valid = is_deformation(&def).unwrap();
            assert_eq!(valid, is_cocycle(&base, &t1.to_multimap()).unwrap());
            if valid {
                assert!(infinitesimal(&def).unwrap().is_cocycle);
            }
        }
        assert_eq!(z1.len(), 2);
    }

    #[test]
    fn order_two_matches_substitution_over_gf5() {
        // dims (1,1): g = h = k, [e,e] = 0, ρ = 0, T = 1, λ = 1
        let f = gf(5);
        let a = LeibnizAlgebra::abelian(f, 1);
        let base =
            WeightedRBO::validated(LeibnizGRep::adjoint(&a), f.one(), lin(f, &[&[1]])).unwrap();
        let mut valid = 0;
        for t1 in 0..5 {
            for t2 in 0..5 {
                let ts = vec![lin(f, &[&[1]]), lin(f, &[&[t1]]), lin(f, &[&[t2]])];
                let def = Deformation::new(base.clone(), ts).unwrap();
                // abelian: every equation is 0 = 0
                assert!(is_deformation(&def).unwrap());
                valid += 1;
            }
        }
        assert_eq!(valid, 25);
        // with g = h = [e,e] = e and T = 0, λ = 1: [T_i, T_j] terms are products
        let e = LeibnizAlgebra::from_int_entries(f, 1, &[(0, 0, 0, 1)]).unwrap();
        let base =
            WeightedRBO::validated(LeibnizGRep::adjoint(&e), f.one(), lin(f, &[&[0]])).unwrap();
        for t1 in 0..5i64 {
            for t2 in 0..5i64 {
                let ts = vec![lin(f, &[&[0]]), lin(f, &[&[t1]]), lin(f, &[&[t2]])];
                let def = Deformation::new(base.clone(), ts).unwrap();
                // order n: Σ t_i t_j = Σ t_i (t_j + t_j) + t_n, with t_0 = 0
                let order1 = t1 % 5 == 0;
                let order2 = (t1 * t1 - 2 * t1 * t1 - t2).rem_euclid(5) == 0;
                assert_eq!(
                    is_deformation(&def).unwrap(),
                    order1 && order2,
                    "t1={t1} t2={t2}"
                );
            }
        }
    }

    #[test]
    fn corrupted_infinitesimal_is_caught_first() {
        let f = gf(5);
        let base = identity_base(f);
        let bad = lin(f, &[&[0, 1], &[0, 0]]);
        assert!(!is_cocycle(&base, &bad.to_multimap()).unwrap());
        let def = Deformation::new(base.clone(), vec![base.map().clone(), bad]).unwrap();
        assert!(!is_deformation(&def).unwrap());
        assert!(matches!(
            infinitesimal(&def),
            Err(Error::InvalidDeformation(_))
        ));
    }

    #[test]
    fn nonvanishing_obstruction_has_no_extension() {
        let f = gf(5);
        let base = obstructed_base(f);
        let def = Deformation::new(
            base.clone(),
            vec![base.map().clone(), lin(f, &[&[1], &[0]])],
        )
        .unwrap();
        assert!(is_deformation(&def).unwrap());
        let class = obstruction(&def, DEFAULT_COCHAIN_CAP).unwrap();
        assert!(!class.is_coboundary && class.witness.is_none());
        assert_eq!(class.ob.value(&[0, 0]), &[f.zero(), f.one()][..]);
        assert_eq!(extend(&def, DEFAULT_COCHAIN_CAP).unwrap(), None);
        assert!(brute_force_extensions(&def, DEFAULT_ENUMERATION_CAP, 2)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn extensions_agree_with_enumeration() {
        let f = gf(5);
        let base = identity_base(f);
        let z1 = delta_matrix(&base, 1, DEFAULT_COCHAIN_CAP)
            .unwrap()
            .kernel_basis();
        for c in 0..25 {
            let coeffs = vector_at(f, 2, c);
            let mut v = vector::zeros(f, 4);
            for (a, b) in coeffs.iter().zip(&z1) {
                vector::axpy(&mut v, a, b);
            }
            let t1 = MultiMap::from_data(f, 1, 2, 2, v)
                .unwrap()
                .to_linear()
                .unwrap();
            let def = Deformation::new(base.clone(), vec![base.map().clone(), t1]).unwrap();
            let class = obstruction(&def, DEFAULT_COCHAIN_CAP).unwrap();
            let found = brute_force_extensions(&def, DEFAULT_ENUMERATION_CAP, 1).unwrap();
            assert_eq!(class.is_coboundary, !found.is_empty());
            if let Some(next) = extend(&def, DEFAULT_COCHAIN_CAP).unwrap() {
                assert!(found.contains(&next.coefficients()[2]));
            }
        }
    }

    #[test]
    fn graded_form_agrees_over_rationals() {
        let f = FieldSpec::Rationals;
        let base = identity_base(f);
        let def = Deformation::new(
            base.clone(),
            vec![
                base.map().clone(),
                lin(f, &[&[0, 0], &[0, 3]]),
                lin(f, &[&[1, 2], &[3, 4]]),
            ],
        )
        .unwrap();
        // the cross-check runs even when the equations fail
        check_deformation(&def).unwrap();
        assert_eq!(
            graded_residual(&def, 2).unwrap(),
            order_residual(&base, def.coefficients(), 2)
        );
    }

    #[test]
    fn characteristic_two_obstruction_is_rejected() {
        let f = gf(2);
        let def = Deformation::trivial(identity_base(f), 1);
        assert!(is_deformation(&def).unwrap());
        assert_eq!(
            obstruction(&def, DEFAULT_COCHAIN_CAP).unwrap_err(),
            Error::CharacteristicTwo
        );
    }

    #[test]
    fn nijenhuis_examples() {
        let f = gf(5);
        let adj = WeightedRBO::validated(
            LeibnizGRep::adjoint(&nil2(f)),
            f.zero(),
            LinearMap::zero(f, 2, 2),
        )
        .unwrap();
        assert!(check_nijenhuis(&adj, &[f.zero(), f.zero()]).unwrap());
        assert!(check_nijenhuis(&adj, &[f.zero(), f.one()]).unwrap());
        // [e1,e1] = e2, [[e1,e1],[e1,e1]] = 0, and the actions are all brackets with e1 ∈ span
        let report = nijenhuis_report(&adj, &[f.one(), f.zero()]).unwrap();
        assert!(report.is_valid());
        // sl2 with x0 = h: [[h,e],[h,f]] = -4h
        let sl2 = LeibnizAlgebra::from_int_entries(
            f,
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
        .unwrap();
        let r = WeightedRBO::validated(
            LeibnizGRep::adjoint(&sl2),
            f.zero(),
            LinearMap::zero(f, 3, 3),
        )
        .unwrap();
        let report = nijenhuis_report(&r, &[f.zero(), f.zero(), f.one()]).unwrap();
        assert_eq!(report.failed_rules(), ["nij1", "nij2", "nij3", "nij4"]);
    }

    /// h = g = [e1,e1]=e2 with zero actions and T = id, λ = 1.
    fn morphism_base(f: FieldSpec) -> WeightedRBO {
        let d = LeibnizGRep::with_zero_actions(nil2(f), nil2(f)).unwrap();
        WeightedRBO::validated(d, f.one(), LinearMap::identity(f, 2)).unwrap()
    }

    #[test]
    fn conjugation_by_a_nijenhuis_element_is_an_equivalence() {
        let f = gf(5);
        for base in [identity_base(f), morphism_base(f)] {
            let nij = nijenhuis_elements(&base, DEFAULT_ENUMERATION_CAP, 1).unwrap();
            assert!(!nij.is_empty());
            let def = Deformation::trivial(base.clone(), 2);
            for x0 in nij {
                let e = Equivalence::first_order(x0.clone());
                let other = conjugate(&def, &e).unwrap();
                assert!(is_deformation(&other).unwrap());
                assert!(is_equivalent(&def, &other, &e).unwrap());
                let dx = delta_t(&base, &MultiMap::constant(f, 2, x0)).unwrap();
                assert_eq!(other.coefficients()[1].to_multimap(), dx.neg());
            }
        }
    }

    #[test]
    fn wrong_x0_fails_at_order_one() {
        let f = gf(5);
        let base = morphism_base(f);
        let def = Deformation::trivial(base.clone(), 1);
        assert!(is_equivalent(
            &def,
            &def,
            &Equivalence::first_order(vec![f.zero(), f.zero()])
        )
        .unwrap());
        let x0 = vec![f.one(), f.zero()];
        let dx = delta_t(&base, &MultiMap::constant(f, 2, x0.clone())).unwrap();
        assert!(!dx.is_zero());
        let report = check_equivalence(&def, &def, &Equivalence::first_order(x0)).unwrap();
        assert!(report.failed_rules().contains(&"intertwine-1".to_string()));
    }

    #[test]
    fn rigidity_vacuous_and_trivial_cases() {
        let f = gf(5);
        let zero_h = LeibnizGRep::with_zero_actions(
            LeibnizAlgebra::abelian(f, 1),
            LeibnizAlgebra::abelian(f, 0),
        )
        .unwrap();
        let r = WeightedRBO::validated(zero_h, f.zero(), LinearMap::zero(f, 0, 1)).unwrap();
        let cert = rigidity_certificate(&r, DEFAULT_ENUMERATION_CAP, 2).unwrap();
        assert!(cert.holds && cert.cocycle_count == 1 && cert.witness.is_none());

        let zero = LeibnizGRep::with_zero_actions(
            LeibnizAlgebra::abelian(f, 1),
            LeibnizAlgebra::abelian(f, 1),
        )
        .unwrap();
        let r = WeightedRBO::validated(zero, f.zero(), LinearMap::zero(f, 1, 1)).unwrap();
        let cert = rigidity_certificate(&r, DEFAULT_ENUMERATION_CAP, 2).unwrap();
        assert!(!cert.holds);
        assert_eq!((cert.cocycle_count, cert.image_count), (5, 1));
        assert_eq!(cert.witness, Some(lin(f, &[&[1]])));

        let r3 = WeightedRBO::validated(
            LeibnizGRep::with_zero_actions(
                LeibnizAlgebra::abelian(gf(3), 1),
                LeibnizAlgebra::abelian(gf(3), 1),
            )
            .unwrap(),
            gf(3).zero(),
            LinearMap::zero(gf(3), 1, 1),
        )
        .unwrap();
        assert!(matches!(
            rigidity_certificate(&r3, DEFAULT_ENUMERATION_CAP, 1),
            Err(Error::WrongField(_))
        ));
    }

    #[test]
    fn rigidity_matches_direct_set_comparison() {
        let f = gf(5);
        let base = identity_base(f);
        let cert = rigidity_certificate(&base, DEFAULT_ENUMERATION_CAP, 3).unwrap();
        // independent: all maps h → g, filter cocycles; all x0, filter Nijenhuis, apply δ
        let mut z = BTreeSet::new();
        for i in 0..625 {
            let m = MultiMap::from_data(f, 1, 2, 2, vector_at(f, 4, i)).unwrap();
            if is_cocycle(&base, &m).unwrap() {
                z.insert(m.into_data());
            }
        }
        let mut image = BTreeSet::new();
        for i in 0..25 {
            let x0 = vector_at(f, 2, i);
            if check_nijenhuis(&base, &x0).unwrap() {
                image.insert(
                    delta_t(&base, &MultiMap::constant(f, 2, x0))
                        .unwrap()
                        .into_data(),
                );
            }
        }
        assert_eq!(cert.cocycle_count as usize, z.len());
        assert_eq!(cert.image_count, image.len());
        assert_eq!(cert.holds, z == image);
    }
}

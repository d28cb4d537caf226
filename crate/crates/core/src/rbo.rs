//! Weighted relative Rota-Baxter operators `T: h → g` satisfying
//! `[Tu, Tv]_g = T(ρ^L(Tu, v) + ρ^R(u, Tv) + λ[u, v]_h)`.

use crate::error::{Error, Result};
use crate::field::{vector, Scalar};
use crate::leibniz::{check_algebra_morphism, semidirect_unchecked, LeibnizAlgebra, LeibnizGRep};
use crate::linalg::Matrix;
use crate::tensor::{Bilinear, LinearMap};
use crate::validation::ValidationReport;

/// An operator together with its context and weight. Not validated on
/// construction; see [`WeightedRBO::validated`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightedRBO {
    context: LeibnizGRep,
    weight: Scalar,
    map: LinearMap,
}

impl WeightedRBO {
    pub fn new(context: LeibnizGRep, weight: Scalar, map: LinearMap) -> Result<Self> {
        check_shapes(&context, &weight, &map)?;
        Ok(WeightedRBO {
            context,
            weight,
            map,
        })
    }

    /// Like [`WeightedRBO::new`] but rejects maps failing the operator identity.
    pub fn validated(context: LeibnizGRep, weight: Scalar, map: LinearMap) -> Result<Self> {
        let r = Self::new(context, weight, map)?;
        r.ensure_valid()?;
        Ok(r)
    }

    /// An operator on `a` itself, i.e. relative to the adjoint context.
    pub fn on_algebra(a: &LeibnizAlgebra, weight: Scalar, map: LinearMap) -> Result<Self> {
        Self::new(LeibnizGRep::adjoint(a), weight, map)
    }

    pub fn context(&self) -> &LeibnizGRep {
        &self.context
    }

    pub fn weight(&self) -> &Scalar {
        &self.weight
    }

    pub fn map(&self) -> &LinearMap {
        &self.map
    }

    pub fn check(&self) -> ValidationReport {
        check_weighted_relative_rbo(&self.context, &self.weight, &self.map)
            .expect("shapes checked at construction")
    }

    pub fn is_valid(&self) -> bool {
        self.check().is_valid()
    }

    pub(crate) fn ensure_valid(&self) -> Result<()> {
        let report = self.check();
        match report.violations.first() {
            None => Ok(()),
            Some(v) => Err(Error::InvalidOperator(v.to_string())),
        }
    }

    /// The same operator after the changes of basis `x ↦ P x` on `g` and
    /// `u ↦ Q u` on `h`, i.e. `T' = P T Q^{-1}`.
    pub fn transport(&self, p: &Matrix, q: &Matrix) -> Result<WeightedRBO> {
        let context = self.context.transport(p, q)?;
        let t = p.mul(self.map.matrix())?.mul(&q.inverse()?)?;
        WeightedRBO::new(context, self.weight.clone(), LinearMap::new(t))
    }

    /// The induced bracket `[u,v]_T = ρ^L(Tu,v) + ρ^R(u,Tv) + λ[u,v]_h`.
    pub fn induced_bracket(&self) -> LeibnizAlgebra {
        induced_unchecked(&self.context, &self.weight, &self.map)
    }
}

fn check_shapes(d: &LeibnizGRep, weight: &Scalar, t: &LinearMap) -> Result<()> {
    if t.source_dim() != d.h_dim() || t.target_dim() != d.g_dim() {
        return Err(Error::shape(format!(
            "operator maps {} -> {}, context needs {} -> {}",
            t.source_dim(),
            t.target_dim(),
            d.h_dim(),
            d.g_dim()
        )));
    }
    if weight.field() != d.field() || t.field() != d.field() {
        return Err(Error::WrongField(format!(
            "operator or weight is not over {}",
            d.field()
        )));
    }
    Ok(())
}

pub(crate) fn induced_unchecked(d: &LeibnizGRep, weight: &Scalar, t: &LinearMap) -> LeibnizAlgebra {
    let m = d.h_dim();
    let (l, r) = (d.actions().left(), d.actions().right());
    let bracket = Bilinear::from_fn(d.field(), m, m, m, |u, v| {
        let mut out = l.apply_right_basis(&t.image(u), v);
        vector::add_assign(&mut out, &r.apply_left_basis(u, &t.image(v)));
        vector::axpy(&mut out, weight, d.h().bracket_basis(u, v));
        out
    });
    LeibnizAlgebra::new(bracket).expect("square")
}

/// The operator identity with `g` acting on itself, evaluated directly:
/// `[Tx, Ty] = T([Tx, y] + [x, Ty] + λ[x, y])`.
pub fn check_weighted_rbo(
    a: &LeibnizAlgebra,
    weight: &Scalar,
    t: &LinearMap,
) -> Result<ValidationReport> {
    let n = a.dim();
    if t.source_dim() != n || t.target_dim() != n {
        return Err(Error::shape(format!(
            "operator is {}x{}, algebra has dim {n}",
            t.target_dim(),
            t.source_dim()
        )));
    }
    let field = a.field();
    let mut report = ValidationReport::new();
    for i in 0..n {
        let ti = t.image(i);
        let ei = vector::basis(field, n, i);
        for j in 0..n {
            let tj = t.image(j);
            let ej = vector::basis(field, n, j);
            let lhs = a.bracket(&ti, &tj);
            let mut inner = a.bracket(&ti, &ej);
            vector::add_assign(&mut inner, &a.bracket(&ei, &tj));
            vector::axpy(&mut inner, weight, a.bracket_basis(i, j));
            report.compare("rota-baxter", &[i, j], lhs, t.apply(&inner));
        }
    }
    Ok(report)
}

/// The relative operator identity on every basis pair of `h`.
pub fn check_weighted_relative_rbo(
    d: &LeibnizGRep,
    weight: &Scalar,
    t: &LinearMap,
) -> Result<ValidationReport> {
    check_shapes(d, weight, t)?;
    let m = d.h_dim();
    let (l, r) = (d.actions().left(), d.actions().right());
    let mut report = ValidationReport::new();
    for u in 0..m {
        let tu = t.image(u);
        for v in 0..m {
            let tv = t.image(v);
            let lhs = d.g().bracket(&tu, &tv);
            let mut inner = l.apply_right_basis(&tu, v);
            vector::add_assign(&mut inner, &r.apply_left_basis(u, &tv));
            vector::axpy(&mut inner, weight, d.h().bracket_basis(u, v));
            report.compare("operator", &[u, v], lhs, t.apply(&inner));
        }
    }
    Ok(report)
}

pub fn is_weighted_relative_rbo(d: &LeibnizGRep, weight: &Scalar, t: &LinearMap) -> Result<bool> {
    Ok(check_weighted_relative_rbo(d, weight, t)?.is_valid())
}

/// Whether the graph `{(Tu, u)}` is closed under the semidirect bracket.
pub fn graph_check(d: &LeibnizGRep, weight: &Scalar, t: &LinearMap) -> Result<bool> {
    check_shapes(d, weight, t)?;
    let (n, m) = (d.g_dim(), d.h_dim());
    let field = d.field();
    let s = semidirect_unchecked(d, weight);
    let graph_vector = |u: usize| -> Vec<Scalar> {
        let mut w = t.image(u);
        w.extend(vector::basis(field, m, u));
        w
    };
    for u in 0..m {
        let gu = graph_vector(u);
        for v in 0..m {
            let z = s.bracket(&gu, &graph_vector(v));
            let (x, w) = z.split_at(n);
            if t.apply(w) != x {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `h` with the induced bracket; rejects invalid operators.
pub fn induced_algebra(r: &WeightedRBO) -> Result<LeibnizAlgebra> {
    r.ensure_valid()?;
    Ok(r.induced_bracket())
}

/// A pair `φ: g → g'`, `ψ: h → h'` between two operators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorMorphism {
    pub phi: LinearMap,
    pub psi: LinearMap,
}

/// The five morphism conditions, plus `ψ[u,v]_T = [ψu, ψv]_T'` (rule
/// `induced`), which follows from them.
pub fn check_operator_morphism(
    r: &WeightedRBO,
    r2: &WeightedRBO,
    m: &OperatorMorphism,
) -> Result<ValidationReport> {
    let (d, d2) = (r.context(), r2.context());
    if m.phi.source_dim() != d.g_dim()
        || m.phi.target_dim() != d2.g_dim()
        || m.psi.source_dim() != d.h_dim()
        || m.psi.target_dim() != d2.h_dim()
    {
        return Err(Error::shape(
            "morphism maps do not match the operator contexts",
        ));
    }
    let mut report = ValidationReport::new();
    report.merge_prefixed("phi", check_algebra_morphism(d.g(), d2.g(), &m.phi)?);
    report.merge_prefixed("psi", check_algebra_morphism(d.h(), d2.h(), &m.psi)?);
    for u in 0..d.h_dim() {
        let lhs = m.phi.apply(&r.map().image(u));
        let rhs = r2.map().apply(&m.psi.image(u));
        report.compare("intertwine", &[u], lhs, rhs);
    }
    for x in 0..d.g_dim() {
        for u in 0..d.h_dim() {
            let lhs = m.psi.apply(d.actions().left().value(x, u));
            let rhs = d2.actions().act_left(&m.phi.image(x), &m.psi.image(u));
            report.compare("left", &[x, u], lhs, rhs);
            let lhs = m.psi.apply(d.actions().right().value(u, x));
            let rhs = d2.actions().act_right(&m.psi.image(u), &m.phi.image(x));
            report.compare("right", &[u, x], lhs, rhs);
        }
    }
    report.merge_prefixed(
        "induced",
        check_algebra_morphism(&r.induced_bracket(), &r2.induced_bracket(), &m.psi)?,
    );
    Ok(report)
}

pub fn is_operator_morphism(
    r: &WeightedRBO,
    r2: &WeightedRBO,
    m: &OperatorMorphism,
) -> Result<bool> {
    Ok(check_operator_morphism(r, r2, m)?.is_valid())
}

/// `D[x, y] = ρ^L(x, Dy) + ρ^R(Dx, y) + λ[Dx, Dy]_h` for `D: g → h`.
pub fn check_crossed_homomorphism(
    d: &LeibnizGRep,
    weight: &Scalar,
    dm: &LinearMap,
) -> Result<ValidationReport> {
    if dm.source_dim() != d.g_dim() || dm.target_dim() != d.h_dim() {
        return Err(Error::shape(format!(
            "crossed homomorphism maps {} -> {}, context needs {} -> {}",
            dm.source_dim(),
            dm.target_dim(),
            d.g_dim(),
            d.h_dim()
        )));
    }
    let n = d.g_dim();
    let mut report = ValidationReport::new();
    for x in 0..n {
        let dx = dm.image(x);
        for y in 0..n {
            let dy = dm.image(y);
            let lhs = dm.apply(d.g().bracket_basis(x, y));
            let mut rhs = d.actions().left().apply_left_basis(x, &dy);
            vector::add_assign(&mut rhs, &d.actions().right().apply_right_basis(&dx, y));
            vector::axpy(&mut rhs, weight, &d.h().bracket(&dx, &dy));
            report.compare("crossed", &[x, y], lhs, rhs);
        }
    }
    Ok(report)
}

/// The inverse of an invertible crossed homomorphism, as an operator.
pub fn invert_crossed(d: &LeibnizGRep, weight: &Scalar, dm: &LinearMap) -> Result<WeightedRBO> {
    let report = check_crossed_homomorphism(d, weight, dm)?;
    if let Some(v) = report.violations.first() {
        return Err(Error::InvalidInput(format!(
            "not a crossed homomorphism: {v}"
        )));
    }
    let t = dm.inverse()?;
    let r = WeightedRBO::new(d.clone(), weight.clone(), t)?;
    if let Some(v) = r.check().violations.first() {
        return Err(Error::OracleDisagreement(format!(
            "inverse of a crossed homomorphism fails {v}"
        )));
    }
    Ok(r)
}

/// `(νT, weight νλ)` and `(-λ id - T, weight λ)` for an operator on an algebra.
pub fn derived_operators(r: &WeightedRBO, nu: &Scalar) -> Result<(WeightedRBO, WeightedRBO)> {
    if !r.context().is_adjoint() {
        return Err(Error::NotAdjointContext);
    }
    let field = r.context().field();
    let lambda = r.weight();
    let scaled = WeightedRBO::new(r.context().clone(), nu * lambda, r.map().scale(nu))?;
    let id = LinearMap::identity(field, r.context().g_dim());
    let complement = id.scale(&-lambda).sub(r.map())?;
    let complement = WeightedRBO::new(r.context().clone(), lambda.clone(), complement)?;
    Ok((scaled, complement))
}

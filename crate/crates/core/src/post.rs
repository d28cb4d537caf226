//! Post-Leibniz algebras `(a, ◁, ▷, [·,·]_a)` and their relation to
//! weighted relative Rota-Baxter operators.

use crate::error::{Error, Result};
use crate::field::{vector, FieldSpec, Scalar};
use crate::leibniz::{validate_leibniz, ActionPair, LeibnizAlgebra, LeibnizGRep};
use crate::rbo::WeightedRBO;
use crate::tensor::{Bilinear, LinearMap};
use crate::validation::ValidationReport;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PostLeibnizAlgebra {
    lt: Bilinear,
    gt: Bilinear,
    bracket: Bilinear,
}

fn check_square(name: &str, b: &Bilinear, dim: usize, field: FieldSpec) -> Result<()> {
    if b.left_dim() != dim || b.right_dim() != dim || b.out_dim() != dim {
        return Err(Error::shape(format!(
            "{name} is not a product on a {dim}-dim space"
        )));
    }
    if b.field() != field {
        return Err(Error::WrongField(format!("{name} is not over {field}")));
    }
    Ok(())
}

impl PostLeibnizAlgebra {
    /// `lt` is `◁`, `gt` is `▷`.
    pub fn new(lt: Bilinear, gt: Bilinear, bracket: Bilinear) -> Result<Self> {
        let (dim, field) = (lt.left_dim(), lt.field());
        check_square("◁", &lt, dim, field)?;
        check_square("▷", &gt, dim, field)?;
        check_square("bracket", &bracket, dim, field)?;
        Ok(PostLeibnizAlgebra { lt, gt, bracket })
    }

    pub fn zero(field: FieldSpec, dim: usize) -> Self {
        let z = Bilinear::zero(field, dim, dim, dim);
        PostLeibnizAlgebra {
            lt: z.clone(),
            gt: z.clone(),
            bracket: z,
        }
    }

    pub fn dim(&self) -> usize {
        self.lt.left_dim()
    }

    pub fn field(&self) -> FieldSpec {
        self.lt.field()
    }

    pub fn lt(&self) -> &Bilinear {
        &self.lt
    }

    pub fn gt(&self) -> &Bilinear {
        &self.gt
    }

    pub fn bracket(&self) -> &Bilinear {
        &self.bracket
    }

    /// `[u,v]_⋆ = u◁v + u▷v + [u,v]_a`.
    pub fn star(&self) -> Bilinear {
        self.lt
            .add(&self.gt)
            .and_then(|s| s.add(&self.bracket))
            .expect("same shape")
    }
}

/// The seven identities (rules `post1`..`post7`) on every basis triple.
pub fn validate_post_leibniz(p: &PostLeibnizAlgebra) -> ValidationReport {
    let n = p.dim();
    let field = p.field();
    let star = p.star();
    let lt = |x: &[Scalar], y: &[Scalar]| p.lt.apply(x, y);
    let gt = |x: &[Scalar], y: &[Scalar]| p.gt.apply(x, y);
    let br = |x: &[Scalar], y: &[Scalar]| p.bracket.apply(x, y);
    let st = |x: &[Scalar], y: &[Scalar]| star.apply(x, y);
    let mut report = ValidationReport::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let (u, v, w) = (
                    vector::basis(field, n, i),
                    vector::basis(field, n, j),
                    vector::basis(field, n, k),
                );
                let idx = [i, j, k];
                let mut cmp = |rule: &str, lhs: Vec<Scalar>, a: Vec<Scalar>, b: Vec<Scalar>| {
                    report.compare(rule, &idx, lhs, vector::add(&a, &b));
                };
                cmp(
                    "post1",
                    lt(&u, &st(&v, &w)),
                    lt(&lt(&u, &v), &w),
                    gt(&v, &lt(&u, &w)),
                );
                cmp(
                    "post2",
                    gt(&u, &lt(&v, &w)),
                    lt(&gt(&u, &v), &w),
                    lt(&v, &st(&u, &w)),
                );
                cmp(
                    "post3",
                    gt(&u, &gt(&v, &w)),
                    gt(&st(&u, &v), &w),
                    gt(&v, &gt(&u, &w)),
                );
                cmp(
                    "post4",
                    gt(&u, &br(&v, &w)),
                    br(&gt(&u, &v), &w),
                    br(&v, &gt(&u, &w)),
                );
                cmp(
                    "post5",
                    br(&u, &gt(&v, &w)),
                    br(&lt(&u, &v), &w),
                    gt(&v, &br(&u, &w)),
                );
                cmp(
                    "post6",
                    br(&u, &lt(&v, &w)),
                    lt(&br(&u, &v), &w),
                    br(&v, &lt(&u, &w)),
                );
                cmp(
                    "post7",
                    br(&u, &br(&v, &w)),
                    br(&br(&u, &v), &w),
                    br(&v, &br(&u, &w)),
                );
            }
        }
    }
    report
}

pub fn is_post_leibniz(p: &PostLeibnizAlgebra) -> bool {
    validate_post_leibniz(p).is_valid()
}

/// `(a, [·,·]_⋆)`; rejects invalid structures.
pub fn total_algebra(p: &PostLeibnizAlgebra) -> Result<LeibnizAlgebra> {
    if let Some(v) = validate_post_leibniz(p).violations.first() {
        return Err(Error::InvalidInput(format!(
            "not a post-Leibniz algebra: {v}"
        )));
    }
    let total = LeibnizAlgebra::new(p.star())?;
    if let Some(v) = validate_leibniz(&total).violations.first() {
        return Err(Error::OracleDisagreement(format!(
            "total bracket fails {v}"
        )));
    }
    Ok(total)
}

/// `u◁v = ρ^R(u,Tv)`, `u▷v = ρ^L(Tu,v)` and `λ[·,·]_h` on `h`.
pub fn from_rbo(r: &WeightedRBO) -> Result<PostLeibnizAlgebra> {
    r.ensure_valid()?;
    let d = r.context();
    let t = r.map();
    let n = d.h_dim();
    let field = d.field();
    let lt = Bilinear::from_fn(field, n, n, n, |u, v| {
        d.actions().right().apply_left_basis(u, &t.image(v))
    });
    let gt = Bilinear::from_fn(field, n, n, n, |u, v| {
        d.actions().left().apply_right_basis(&t.image(u), v)
    });
    let bracket = d.h().structure().scale(r.weight());
    PostLeibnizAlgebra::new(lt, gt, bracket)
}

/// The three pre-Leibniz identities (rules `pre1`..`pre3`), cross-checked
/// against the post-Leibniz identities with zero bracket.
pub fn validate_pre_leibniz(lt: &Bilinear, gt: &Bilinear) -> Result<ValidationReport> {
    let n = lt.left_dim();
    let field = lt.field();
    let p = PostLeibnizAlgebra::new(lt.clone(), gt.clone(), Bilinear::zero(field, n, n, n))?;
    let sum = lt.add(gt)?;
    let l = |x: &[Scalar], y: &[Scalar]| lt.apply(x, y);
    let g = |x: &[Scalar], y: &[Scalar]| gt.apply(x, y);
    let s = |x: &[Scalar], y: &[Scalar]| sum.apply(x, y);
    let mut report = ValidationReport::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let (u, v, w) = (
                    vector::basis(field, n, i),
                    vector::basis(field, n, j),
                    vector::basis(field, n, k),
                );
                let idx = [i, j, k];
                report.compare(
                    "pre1",
                    &idx,
                    l(&u, &s(&v, &w)),
                    vector::add(&l(&l(&u, &v), &w), &g(&v, &l(&u, &w))),
                );
                report.compare(
                    "pre2",
                    &idx,
                    g(&u, &l(&v, &w)),
                    vector::add(&l(&g(&u, &v), &w), &l(&v, &s(&u, &w))),
                );
                report.compare(
                    "pre3",
                    &idx,
                    g(&u, &g(&v, &w)),
                    vector::add(&g(&s(&u, &v), &w), &g(&v, &g(&u, &w))),
                );
            }
        }
    }
    if report.is_valid() != is_post_leibniz(&p) {
        return Err(Error::OracleDisagreement(
            "pre-Leibniz and zero-bracket post-Leibniz verdicts differ".into(),
        ));
    }
    Ok(report)
}

/// Which skewsymmetry hypotheses hold, and the post-Lie laws for
/// `(▷, [·,·]_a)` when both do (rules `postlie1`, `postlie2`, `jacobi`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkewReport {
    pub products_skew: bool,
    pub bracket_skew: bool,
    pub post_lie: Option<ValidationReport>,
}

impl SkewReport {
    pub fn is_post_lie(&self) -> bool {
        self.post_lie
            .as_ref()
            .is_some_and(ValidationReport::is_valid)
    }
}

pub fn check_skewsymmetric_reduction(p: &PostLeibnizAlgebra) -> SkewReport {
    let n = p.dim();
    let mut products_skew = true;
    let mut bracket_skew = true;
    for i in 0..n {
        for j in 0..n {
            products_skew &=
                p.lt.value(i, j) == vector::scale(&-p.field().one(), p.gt.value(j, i)).as_slice();
            bracket_skew &= p.bracket.value(i, j)
                == vector::scale(&-p.field().one(), p.bracket.value(j, i)).as_slice();
        }
    }
    let post_lie = (products_skew && bracket_skew).then(|| post_lie_laws(&p.gt, &p.bracket));
    SkewReport {
        products_skew,
        bracket_skew,
        post_lie,
    }
}

fn post_lie_laws(circ: &Bilinear, bracket: &Bilinear) -> ValidationReport {
    let n = circ.left_dim();
    let field = circ.field();
    let c = |x: &[Scalar], y: &[Scalar]| circ.apply(x, y);
    let b = |x: &[Scalar], y: &[Scalar]| bracket.apply(x, y);
    let zero = vector::zeros(field, n);
    let mut report = ValidationReport::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let (u, v, w) = (
                    vector::basis(field, n, i),
                    vector::basis(field, n, j),
                    vector::basis(field, n, k),
                );
                let mut first = c(&c(&u, &v), &w);
                vector::sub_assign(&mut first, &c(&u, &c(&v, &w)));
                vector::sub_assign(&mut first, &c(&c(&v, &u), &w));
                vector::add_assign(&mut first, &c(&v, &c(&u, &w)));
                vector::add_assign(&mut first, &c(&b(&u, &v), &w));
                report.compare("postlie1", &[i, j, k], first, zero.clone());
                let rhs = vector::add(&b(&c(&u, &v), &w), &b(&v, &c(&u, &w)));
                report.compare("postlie2", &[i, j, k], c(&u, &b(&v, &w)), rhs);
                let mut jacobi = b(&u, &b(&v, &w));
                vector::add_assign(&mut jacobi, &b(&v, &b(&w, &u)));
                vector::add_assign(&mut jacobi, &b(&w, &b(&u, &v)));
                report.compare("jacobi", &[i, j, k], jacobi, zero.clone());
            }
        }
    }
    report
}

/// `a` as a representation of `a_Tot` with `ϱ^L(u,v) = u▷v`,
/// `ϱ^R(v,u) = v◁u`, packaged as the context `(a_Tot, (a, [·,·]_a))`.
/// The identity map is a 1-weighted operator in it.
pub fn representation_from_post(p: &PostLeibnizAlgebra) -> Result<LeibnizGRep> {
    let total = total_algebra(p)?;
    let h = LeibnizAlgebra::new(p.bracket.clone())?;
    LeibnizGRep::new(total, h, ActionPair::new(p.gt.clone(), p.lt.clone())?)
}

/// The post-Leibniz structure on `A` induced by an invertible 1-weighted
/// operator `T: h → A`. Its three products add up to `[·,·]_A`.
pub fn compatible_structure(a: &LeibnizAlgebra, r: &WeightedRBO) -> Result<PostLeibnizAlgebra> {
    let d = r.context();
    if d.g() != a {
        return Err(Error::StructureIncompatible(
            "the operator does not map onto the given algebra".into(),
        ));
    }
    if !r.weight().is_one() {
        return Err(Error::WrongWeight(format!(
            "compatible structures need weight 1, got {}",
            r.weight()
        )));
    }
    r.ensure_valid()?;
    let t = r.map();
    let t_inv = t.inverse()?;
    let n = a.dim();
    let field = a.field();
    let pre = |x: usize| t_inv.image(x);
    let lt = Bilinear::from_fn(field, n, n, n, |x, y| {
        t.apply(&d.actions().right().apply_right_basis(&pre(x), y))
    });
    let gt = Bilinear::from_fn(field, n, n, n, |x, y| {
        t.apply(&d.actions().left().apply_left_basis(x, &pre(y)))
    });
    let bracket = Bilinear::from_fn(field, n, n, n, |x, y| {
        t.apply(&d.h().bracket(&pre(x), &pre(y)))
    });
    let p = PostLeibnizAlgebra::new(lt, gt, bracket)?;
    if &p.star() != a.structure() {
        return Err(Error::OracleDisagreement(
            "compatible products do not add up to the bracket".into(),
        ));
    }
    Ok(p)
}

/// `id: a → a_Tot` as a 1-weighted operator in [`representation_from_post`].
pub fn identity_operator(p: &PostLeibnizAlgebra) -> Result<WeightedRBO> {
    let d = representation_from_post(p)?;
    let field = p.field();
    WeightedRBO::new(d, field.one(), LinearMap::identity(field, p.dim()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::leibniz::validate_leibniz_g_rep;
    use crate::linalg::Matrix;
    use crate::rbo::induced_algebra;

    fn nil2(f: FieldSpec) -> LeibnizAlgebra {
        LeibnizAlgebra::from_int_entries(f, 2, &[(0, 0, 1, 1)]).unwrap()
    }

    fn lie2(f: FieldSpec) -> LeibnizAlgebra {
        LeibnizAlgebra::from_int_entries(f, 2, &[(0, 1, 1, 1), (1, 0, 1, -1)]).unwrap()
    }

    #[test]
    fn zero_and_bracket_only_structures() {
        let f = FieldSpec::Rationals;
        let z = PostLeibnizAlgebra::zero(f, 2);
        assert!(is_post_leibniz(&z));
        assert!(total_algebra(&z).unwrap().is_abelian());
        let a = nil2(f);
        let p = PostLeibnizAlgebra::new(
            Bilinear::zero(f, 2, 2, 2),
            Bilinear::zero(f, 2, 2, 2),
            a.structure().clone(),
        )
        .unwrap();
        assert!(is_post_leibniz(&p));
        // a non-Leibniz bracket fails only the seventh identity
        let bad = LeibnizAlgebra::from_int_entries(f, 2, &[(0, 0, 1, 1), (1, 0, 0, 1)]).unwrap();
        let p = PostLeibnizAlgebra::new(
            Bilinear::zero(f, 2, 2, 2),
            Bilinear::zero(f, 2, 2, 2),
            bad.structure().clone(),
        )
        .unwrap();
        assert_eq!(validate_post_leibniz(&p).failed_rules(), ["post7"]);
    }

    #[test]
    fn identity_operator_gives_bracket_products() {
        let f = FieldSpec::Rationals;
        for a in [nil2(f), lie2(f)] {
            let r = WeightedRBO::on_algebra(&a, f.from_i64(-1), LinearMap::identity(f, 2)).unwrap();
            let p = from_rbo(&r).unwrap();
            assert_eq!(p.lt(), a.structure());
            assert_eq!(p.gt(), a.structure());
            assert_eq!(p.bracket(), &a.structure().scale(&f.from_i64(-1)));
            assert!(is_post_leibniz(&p));
            assert_eq!(total_algebra(&p).unwrap(), induced_algebra(&r).unwrap());
        }
    }

    #[test]
    fn zero_operator_gives_scaled_bracket() {
        let f = FieldSpec::prime(5).unwrap();
        let r = WeightedRBO::on_algebra(&nil2(f), f.from_i64(3), LinearMap::zero(f, 2, 2)).unwrap();
        let p = from_rbo(&r).unwrap();
        assert!(p.lt().is_zero() && p.gt().is_zero());
        assert_eq!(p.bracket(), &nil2(f).structure().scale(&f.from_i64(3)));
        assert!(is_post_leibniz(&p));
    }

    #[test]
    fn weight_zero_gives_pre_leibniz() {
        let f = FieldSpec::Rationals;
        // T = e1 -> e2 on [e1,e1]=e2 is a weight-0 operator
        let t = LinearMap::new(Matrix::from_i64(f, &[&[0, 0], &[1, 0]]).unwrap());
        let r = WeightedRBO::validated(LeibnizGRep::adjoint(&nil2(f)), f.zero(), t).unwrap();
        let p = from_rbo(&r).unwrap();
        assert!(p.bracket().is_zero());
        assert!(validate_pre_leibniz(p.lt(), p.gt()).unwrap().is_valid());
        assert!(
            validate_pre_leibniz(&Bilinear::zero(f, 2, 2, 2), &Bilinear::zero(f, 2, 2, 2))
                .unwrap()
                .is_valid()
        );
        let bad = validate_pre_leibniz(nil2(f).structure(), &lie2(f).structure().clone()).unwrap();
        assert!(!bad.is_valid());
    }

    #[test]
    fn skewsymmetric_reduction() {
        let f = FieldSpec::Rationals;
        let zero = check_skewsymmetric_reduction(&PostLeibnizAlgebra::zero(f, 2));
        assert!(zero.products_skew && zero.bracket_skew && zero.is_post_lie());
        // T = id, λ = -1 on a Lie algebra: ▷ = ad, bracket = -[·,·]
        let r =
            WeightedRBO::on_algebra(&lie2(f), f.from_i64(-1), LinearMap::identity(f, 2)).unwrap();
        let rep = check_skewsymmetric_reduction(&from_rbo(&r).unwrap());
        assert!(rep.products_skew && rep.bracket_skew && rep.is_post_lie());
        // the same construction on [e1,e1]=e2 is symmetric, not skew
        let r =
            WeightedRBO::on_algebra(&nil2(f), f.from_i64(-1), LinearMap::identity(f, 2)).unwrap();
        let rep = check_skewsymmetric_reduction(&from_rbo(&r).unwrap());
        assert!(!rep.products_skew && rep.post_lie.is_none());
    }

    #[test]
    fn identity_splitting_recovers_the_structure() {
        let f = FieldSpec::Rationals;
        for a in [nil2(f), lie2(f)] {
            let r = WeightedRBO::on_algebra(&a, f.from_i64(-1), LinearMap::identity(f, 2)).unwrap();
            let p = from_rbo(&r).unwrap();
            let id = identity_operator(&p).unwrap();
            assert!(validate_leibniz_g_rep(id.context()).is_valid());
            assert!(id.is_valid());
            let back = compatible_structure(&total_algebra(&p).unwrap(), &id).unwrap();
            assert_eq!(back, p);
        }
    }

    #[test]
    fn compatible_structure_errors() {
        let f = FieldSpec::Rationals;
        let a = nil2(f);
        let r = WeightedRBO::on_algebra(&a, f.from_i64(-1), LinearMap::identity(f, 2)).unwrap();
        assert!(matches!(
            compatible_structure(&a, &r),
            Err(Error::WrongWeight(_))
        ));
        let zero =
            LeibnizGRep::with_zero_actions(a.clone(), LeibnizAlgebra::abelian(f, 2)).unwrap();
        let r = WeightedRBO::validated(zero, f.one(), LinearMap::zero(f, 2, 2)).unwrap();
        assert_eq!(
            compatible_structure(&a, &r).unwrap_err(),
            Error::NotInvertible
        );
        // T = id with zero actions and h = A: only the bracket survives
        let d = LeibnizGRep::with_zero_actions(a.clone(), a.clone()).unwrap();
        let r = WeightedRBO::validated(d, f.one(), LinearMap::identity(f, 2)).unwrap();
        let p = compatible_structure(&a, &r).unwrap();
        assert!(p.lt().is_zero() && p.gt().is_zero());
        assert_eq!(p.bracket(), a.structure());
        assert!(matches!(
            compatible_structure(&lie2(f), &r),
            Err(Error::StructureIncompatible(_))
        ));
    }
}

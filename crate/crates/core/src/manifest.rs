//! The `.lra` manifest format: one declaration per line, `#` comments,
//! basis vectors written `e1, e2, …`, and sparse structure constants such as
//!
//! ```text
//! field gf 5
//! algebra a dim 2
//! bracket a e1 e1 -> 1 e2
//! ```
//!
//! Names share one namespace and must be declared before they are used.
//! [`Manifest::render`] is canonical, so `parse(render(m)) == m`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::deform::Deformation;
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::leibniz::{ActionPair, LeibnizAlgebra, LeibnizGRep};
use crate::linalg::Matrix;
use crate::post::PostLeibnizAlgebra;
use crate::rbo::WeightedRBO;
use crate::tensor::{Bilinear, LinearMap};

/// `ρ^L: G × H → H` and `ρ^R: H × G → H` between two named algebras.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionsDecl {
    pub g: String,
    pub h: String,
    pub pair: ActionPair,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ContextDecl {
    Adjoint(String),
    Zero {
        g: String,
        h: String,
    },
    Explicit {
        g: String,
        h: String,
        actions: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeformationDecl {
    pub context: String,
    pub weight: Scalar,
    pub coefficients: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Manifest {
    pub field: FieldSpec,
    pub scalars: BTreeMap<String, Scalar>,
    pub algebras: BTreeMap<String, LeibnizAlgebra>,
    pub actions: BTreeMap<String, ActionsDecl>,
    pub contexts: BTreeMap<String, ContextDecl>,
    pub maps: BTreeMap<String, LinearMap>,
    pub deformations: BTreeMap<String, DeformationDecl>,
    pub posts: BTreeMap<String, PostLeibnizAlgebra>,
}

struct Tok<'a> {
    text: &'a str,
    col: usize,
}

fn tokens(line: &str) -> Vec<Tok<'_>> {
    let body = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in body
        .char_indices()
        .chain(std::iter::once((body.len(), ' ')))
    {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push(Tok {
                    text: &body[s..i],
                    col: body[..s].chars().count() + 1,
                });
                start = None;
            }
            _ => {}
        }
    }
    out
}

fn err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn valid_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}

const KEYWORDS: [&str; 3] = ["id", "zero", "adjoint"];

/// Mutable state while reading; finalized into a [`Manifest`].
struct Builder {
    field: FieldSpec,
    names: BTreeSet<String>,
    scalars: BTreeMap<String, Scalar>,
    algebras: BTreeMap<String, (Bilinear, BTreeSet<(usize, usize)>)>,
    actions: BTreeMap<String, PendingActions>,
    contexts: BTreeMap<String, ContextDecl>,
    maps: BTreeMap<String, (Matrix, BTreeSet<usize>)>,
    deformations: BTreeMap<String, DeformationDecl>,
    posts: BTreeMap<String, PendingPost>,
}

/// Source algebra, target algebra, left, right, and the keys already set.
type PendingActions = (
    String,
    String,
    Bilinear,
    Bilinear,
    BTreeSet<(bool, usize, usize)>,
);
type PendingPost = ([Bilinear; 3], BTreeSet<(usize, usize, usize)>);

struct Line<'a> {
    no: usize,
    toks: Vec<Tok<'a>>,
    end: usize,
}

impl<'a> Line<'a> {
    fn tok(&self, i: usize, what: &str) -> Result<&Tok<'a>> {
        self.toks
            .get(i)
            .ok_or_else(|| err(self.no, self.end, format!("expected {what}")))
    }

    fn exact(&self, n: usize) -> Result<()> {
        match self.toks.get(n) {
            Some(t) => Err(err(self.no, t.col, format!("unexpected `{}`", t.text))),
            None => Ok(()),
        }
    }

    fn number(&self, i: usize, what: &str) -> Result<usize> {
        let t = self.tok(i, what)?;
        t.text
            .parse()
            .map_err(|_| err(self.no, t.col, format!("expected {what}, got `{}`", t.text)))
    }

    fn keyword(&self, i: usize, kw: &str) -> Result<()> {
        let t = self.tok(i, &format!("`{kw}`"))?;
        if t.text != kw {
            return Err(err(
                self.no,
                t.col,
                format!("expected `{kw}`, got `{}`", t.text),
            ));
        }
        Ok(())
    }

    /// `eK` with `1 ≤ K ≤ dim`, as a 0-based index.
    fn basis(&self, i: usize, dim: usize) -> Result<usize> {
        let t = self.tok(i, "a basis vector")?;
        let k: usize = t
            .text
            .strip_prefix('e')
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| {
                err(
                    self.no,
                    t.col,
                    format!("expected a basis vector like e1, got `{}`", t.text),
                )
            })?;
        if k == 0 || k > dim {
            return Err(err(
                self.no,
                t.col,
                format!("dimension error: {} is outside dimension {dim}", t.text),
            ));
        }
        Ok(k - 1)
    }
}

impl Builder {
    fn declare(&mut self, line: &Line<'_>, i: usize) -> Result<String> {
        let t = line.tok(i, "a name")?;
        if !valid_name(t.text) || KEYWORDS.contains(&t.text) {
            return Err(err(
                line.no,
                t.col,
                format!("`{}` is not a valid name", t.text),
            ));
        }
        if !self.names.insert(t.text.to_string()) {
            return Err(err(
                line.no,
                t.col,
                format!("`{}` is already declared", t.text),
            ));
        }
        Ok(t.text.to_string())
    }

    fn scalar(&self, line: &Line<'_>, i: usize) -> Result<Scalar> {
        let t = line.tok(i, "a scalar")?;
        if let Some(s) = self.scalars.get(t.text) {
            return Ok(s.clone());
        }
        self.field
            .parse_scalar(t.text)
            .map_err(|e| err(line.no, t.col, e.to_string()))
    }

    /// `c1 eK1 c2 eK2 …` or `0` starting at token `i`, to the end of the line.
    fn vector(&self, line: &Line<'_>, i: usize, dim: usize) -> Result<Vec<Scalar>> {
        let mut out = vec![self.field.zero(); dim];
        if line.toks.len() == i + 1 && line.toks[i].text == "0" {
            return Ok(out);
        }
        if line.toks.len() <= i {
            return Err(err(line.no, line.end, "expected a vector"));
        }
        let mut seen = BTreeSet::new();
        let mut k = i;
        while k < line.toks.len() {
            let c = self.scalar(line, k)?;
            let b = line.basis(k + 1, dim)?;
            if !seen.insert(b) {
                return Err(err(line.no, line.toks[k + 1].col, "basis vector repeated"));
            }
            out[b] = c;
            k += 2;
        }
        Ok(out)
    }

    fn algebra_dim(&self, line: &Line<'_>, i: usize) -> Result<(String, usize)> {
        let t = line.tok(i, "an algebra name")?;
        match self.algebras.get(t.text) {
            Some((b, _)) => Ok((t.text.to_string(), b.left_dim())),
            None => Err(err(
                line.no,
                t.col,
                format!("unresolved reference `{}`", t.text),
            )),
        }
    }

    fn line(&mut self, line: &Line<'_>) -> Result<()> {
        let head = &line.toks[0];
        let field = self.field;
        match head.text {
            "field" => {
                return Err(err(
                    line.no,
                    head.col,
                    "the field is declared once, on the first line",
                ))
            }
            "scalar" => {
                let name = self.declare(line, 1)?;
                let v = self.scalar(line, 2)?;
                line.exact(3)?;
                self.scalars.insert(name, v);
            }
            "algebra" | "post" => {
                let name = self.declare(line, 1)?;
                line.keyword(2, "dim")?;
                let n = line.number(3, "a dimension")?;
                line.exact(4)?;
                let z = Bilinear::zero(field, n, n, n);
                if head.text == "algebra" {
                    self.algebras.insert(name, (z, BTreeSet::new()));
                } else {
                    self.posts
                        .insert(name, ([z.clone(), z.clone(), z], BTreeSet::new()));
                }
            }
            "bracket" => {
                let (name, n) = self.algebra_dim(line, 1)?;
                let (i, j) = (line.basis(2, n)?, line.basis(3, n)?);
                line.keyword(4, "->")?;
                let v = self.vector(line, 5, n)?;
                let (b, seen) = self.algebras.get_mut(&name).expect("resolved");
                if !seen.insert((i, j)) {
                    return Err(err(line.no, line.toks[2].col, "entry given twice"));
                }
                b.set_value(i, j, v);
            }
            "actions" => {
                let name = self.declare(line, 1)?;
                let (g, ng) = self.algebra_dim(line, 2)?;
                let (h, nh) = self.algebra_dim(line, 3)?;
                line.exact(4)?;
                let left = Bilinear::zero(field, ng, nh, nh);
                let right = Bilinear::zero(field, nh, ng, nh);
                self.actions
                    .insert(name, (g, h, left, right, BTreeSet::new()));
            }
            "left" | "right" => {
                let t = line.tok(1, "an actions name")?;
                let (g, h) = match self.actions.get(t.text) {
                    Some((g, h, ..)) => (g.clone(), h.clone()),
                    None => {
                        return Err(err(
                            line.no,
                            t.col,
                            format!("unresolved reference `{}`", t.text),
                        ))
                    }
                };
                let ng = self.algebras[&g].0.left_dim();
                let nh = self.algebras[&h].0.left_dim();
                let is_left = head.text == "left";
                let (i, j) = if is_left {
                    (line.basis(2, ng)?, line.basis(3, nh)?)
                } else {
                    (line.basis(2, nh)?, line.basis(3, ng)?)
                };
                line.keyword(4, "->")?;
                let v = self.vector(line, 5, nh)?;
                let entry = self.actions.get_mut(t.text).expect("resolved");
                if !entry.4.insert((is_left, i, j)) {
                    return Err(err(line.no, line.toks[2].col, "entry given twice"));
                }
                if is_left {
                    entry.2.set_value(i, j, v);
                } else {
                    entry.3.set_value(i, j, v);
                }
            }
            "context" => {
                let name = self.declare(line, 1)?;
                let first = line.tok(2, "`adjoint` or an algebra name")?;
                let decl = if first.text == "adjoint" {
                    let (g, _) = self.algebra_dim(line, 3)?;
                    line.exact(4)?;
                    ContextDecl::Adjoint(g)
                } else {
                    let (g, _) = self.algebra_dim(line, 2)?;
                    let (h, _) = self.algebra_dim(line, 3)?;
                    let a = line.tok(4, "an actions name or `zero`")?;
                    line.exact(5)?;
                    if a.text == "zero" {
                        ContextDecl::Zero { g, h }
                    } else {
                        match self.actions.get(a.text) {
                            Some((ag, ah, ..)) if *ag == g && *ah == h => ContextDecl::Explicit {
                                g,
                                h,
                                actions: a.text.to_string(),
                            },
                            Some(_) => {
                                return Err(err(
                                    line.no,
                                    a.col,
                                    format!("`{}` acts between other algebras", a.text),
                                ))
                            }
                            None => {
                                return Err(err(
                                    line.no,
                                    a.col,
                                    format!("unresolved reference `{}`", a.text),
                                ))
                            }
                        }
                    }
                };
                self.contexts.insert(name, decl);
            }
            "map" => {
                let name = self.declare(line, 1)?;
                let src = line.number(2, "a source dimension")?;
                let tgt = line.number(3, "a target dimension")?;
                line.exact(4)?;
                self.maps
                    .insert(name, (Matrix::zeros(field, tgt, src), BTreeSet::new()));
            }
            "image" => {
                let t = line.tok(1, "a map name")?;
                let (src, tgt) = match self.maps.get(t.text) {
                    Some((m, _)) => (m.cols(), m.rows()),
                    None => {
                        return Err(err(
                            line.no,
                            t.col,
                            format!("unresolved reference `{}`", t.text),
                        ))
                    }
                };
                let j = line.basis(2, src)?;
                line.keyword(3, "->")?;
                let v = self.vector(line, 4, tgt)?;
                let (m, seen) = self.maps.get_mut(t.text).expect("resolved");
                if !seen.insert(j) {
                    return Err(err(line.no, line.toks[2].col, "image given twice"));
                }
                for (r, x) in v.into_iter().enumerate() {
                    m.set(r, j, x);
                }
            }
            "deformation" => {
                let name = self.declare(line, 1)?;
                let c = line.tok(2, "a context name")?;
                let (ng, nh) = match self.contexts.get(c.text) {
                    Some(decl) => self.context_dims(decl),
                    None => {
                        return Err(err(
                            line.no,
                            c.col,
                            format!("unresolved reference `{}`", c.text),
                        ))
                    }
                };
                let weight = self.scalar(line, 3)?;
                let mut coefficients = Vec::new();
                for k in 4..line.toks.len() {
                    let t = &line.toks[k];
                    match self.maps.get(t.text) {
                        Some((m, _)) if m.rows() == ng && m.cols() == nh => {
                            coefficients.push(t.text.to_string())
                        }
                        Some(_) => {
                            return Err(err(
                                line.no,
                                t.col,
                                format!("dimension error: `{}` is not a map {nh} -> {ng}", t.text),
                            ))
                        }
                        None => {
                            return Err(err(
                                line.no,
                                t.col,
                                format!("unresolved reference `{}`", t.text),
                            ))
                        }
                    }
                }
                if coefficients.is_empty() {
                    return Err(err(line.no, line.end, "expected at least T_0"));
                }
                self.deformations.insert(
                    name,
                    DeformationDecl {
                        context: c.text.to_string(),
                        weight,
                        coefficients,
                    },
                );
            }
            "lt" | "gt" | "br" => {
                let t = line.tok(1, "a post-Leibniz name")?;
                let n = match self.posts.get(t.text) {
                    Some((p, _)) => p[0].left_dim(),
                    None => {
                        return Err(err(
                            line.no,
                            t.col,
                            format!("unresolved reference `{}`", t.text),
                        ))
                    }
                };
                let (i, j) = (line.basis(2, n)?, line.basis(3, n)?);
                line.keyword(4, "->")?;
                let v = self.vector(line, 5, n)?;
                let slot = ["lt", "gt", "br"]
                    .iter()
                    .position(|s| *s == head.text)
                    .expect("matched");
                let (p, seen) = self.posts.get_mut(t.text).expect("resolved");
                if !seen.insert((slot, i, j)) {
                    return Err(err(line.no, line.toks[2].col, "entry given twice"));
                }
                p[slot].set_value(i, j, v);
            }
            other => {
                return Err(err(
                    line.no,
                    head.col,
                    format!("unknown declaration `{other}`"),
                ))
            }
        }
        Ok(())
    }

    fn context_dims(&self, decl: &ContextDecl) -> (usize, usize) {
        let dim = |name: &String| self.algebras[name].0.left_dim();
        match decl {
            ContextDecl::Adjoint(g) => (dim(g), dim(g)),
            ContextDecl::Zero { g, h } | ContextDecl::Explicit { g, h, .. } => (dim(g), dim(h)),
        }
    }

    fn finish(self) -> Result<Manifest> {
        let algebras = self
            .algebras
            .into_iter()
            .map(|(k, (b, _))| Ok((k, LeibnizAlgebra::new(b)?)))
            .collect::<Result<_>>()?;
        let actions = self
            .actions
            .into_iter()
            .map(|(k, (g, h, l, r, _))| {
                Ok((
                    k,
                    ActionsDecl {
                        g,
                        h,
                        pair: ActionPair::new(l, r)?,
                    },
                ))
            })
            .collect::<Result<_>>()?;
        let maps = self
            .maps
            .into_iter()
            .map(|(k, (m, _))| (k, LinearMap::new(m)))
            .collect();
        let posts = self
            .posts
            .into_iter()
            .map(|(k, ([lt, gt, br], _))| Ok((k, PostLeibnizAlgebra::new(lt, gt, br)?)))
            .collect::<Result<_>>()?;
        Ok(Manifest {
            field: self.field,
            scalars: self.scalars,
            algebras,
            actions,
            contexts: self.contexts,
            maps,
            deformations: self.deformations,
            posts,
        })
    }
}

fn parse_field(line: &Line<'_>) -> Result<FieldSpec> {
    line.keyword(0, "field")?;
    let kind = line.tok(1, "`rational` or `gf P`")?;
    match kind.text {
        "rational" => {
            line.exact(2)?;
            Ok(FieldSpec::Rationals)
        }
        "gf" => {
            let p = line.tok(2, "a prime")?;
            line.exact(3)?;
            let value: u64 = p.text.parse().map_err(|_| {
                err(
                    line.no,
                    p.col,
                    format!("expected a prime, got `{}`", p.text),
                )
            })?;
            FieldSpec::prime(value).map_err(|e| err(line.no, p.col, e.to_string()))
        }
        other => Err(err(line.no, kind.col, format!("unknown field `{other}`"))),
    }
}

/// Parses a manifest; `field_override` replaces the declared field, so the
/// same file can be read over `Q` and over `GF(p)`.
pub fn parse_manifest_in(text: &str, field_override: Option<FieldSpec>) -> Result<Manifest> {
    let mut lines = text.lines().enumerate().filter_map(|(i, raw)| {
        let toks = tokens(raw);
        let end = raw
            .split('#')
            .next()
            .unwrap_or("")
            .trim_end()
            .chars()
            .count()
            + 1;
        (!toks.is_empty()).then_some(Line {
            no: i + 1,
            toks,
            end,
        })
    });
    let first = lines
        .next()
        .ok_or_else(|| err(1, 1, "empty manifest: expected `field`"))?;
    let declared = parse_field(&first)?;
    let mut b = Builder {
        field: field_override.unwrap_or(declared),
        names: BTreeSet::new(),
        scalars: BTreeMap::new(),
        algebras: BTreeMap::new(),
        actions: BTreeMap::new(),
        contexts: BTreeMap::new(),
        maps: BTreeMap::new(),
        deformations: BTreeMap::new(),
        posts: BTreeMap::new(),
    };
    for line in lines {
        b.line(&line)?;
    }
    b.finish()
}

pub fn parse_manifest(text: &str) -> Result<Manifest> {
    parse_manifest_in(text, None)
}

/// `c1 eK1 c2 eK2 …` over the nonzero coordinates, or `0`.
pub fn format_vector(v: &[Scalar]) -> String {
    let parts: Vec<String> = v
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| format!("{} e{}", c.to_plain_string(), k + 1))
        .collect();
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" ")
    }
}

fn render_bilinear(out: &mut String, keyword: &str, name: &str, b: &Bilinear) {
    for (i, j, v) in b.nonzero_values() {
        let _ = writeln!(
            out,
            "{keyword} {name} e{} e{} -> {}",
            i + 1,
            j + 1,
            format_vector(&v)
        );
    }
}

impl Manifest {
    pub fn empty(field: FieldSpec) -> Self {
        Manifest {
            field,
            scalars: BTreeMap::new(),
            algebras: BTreeMap::new(),
            actions: BTreeMap::new(),
            contexts: BTreeMap::new(),
            maps: BTreeMap::new(),
            deformations: BTreeMap::new(),
            posts: BTreeMap::new(),
        }
    }

    /// Canonical text: sections in dependency order, names sorted.
    pub fn render(&self) -> String {
        let mut out = format!("field {}\n", self.field);
        for (name, s) in &self.scalars {
            let _ = writeln!(out, "scalar {name} {}", s.to_plain_string());
        }
        for (name, a) in &self.algebras {
            let _ = writeln!(out, "algebra {name} dim {}", a.dim());
            render_bilinear(&mut out, "bracket", name, a.structure());
        }
        for (name, a) in &self.actions {
            let _ = writeln!(out, "actions {name} {} {}", a.g, a.h);
            render_bilinear(&mut out, "left", name, a.pair.left());
            render_bilinear(&mut out, "right", name, a.pair.right());
        }
        for (name, c) in &self.contexts {
            let _ = match c {
                ContextDecl::Adjoint(g) => writeln!(out, "context {name} adjoint {g}"),
                ContextDecl::Zero { g, h } => writeln!(out, "context {name} {g} {h} zero"),
                ContextDecl::Explicit { g, h, actions } => {
                    writeln!(out, "context {name} {g} {h} {actions}")
                }
            };
        }
        for (name, m) in &self.maps {
            let _ = writeln!(out, "map {name} {} {}", m.source_dim(), m.target_dim());
            for j in 0..m.source_dim() {
                let v = m.image(j);
                if v.iter().any(|c| !c.is_zero()) {
                    let _ = writeln!(out, "image {name} e{} -> {}", j + 1, format_vector(&v));
                }
            }
        }
        for (name, d) in &self.deformations {
            let _ = writeln!(
                out,
                "deformation {name} {} {} {}",
                d.context,
                d.weight.to_plain_string(),
                d.coefficients.join(" ")
            );
        }
        for (name, p) in &self.posts {
            let _ = writeln!(out, "post {name} dim {}", p.dim());
            render_bilinear(&mut out, "lt", name, p.lt());
            render_bilinear(&mut out, "gt", name, p.gt());
            render_bilinear(&mut out, "br", name, p.bracket());
        }
        out
    }

    fn missing(name: &str) -> Error {
        Error::UnresolvedReference(name.to_string())
    }

    pub fn algebra(&self, name: &str) -> Result<&LeibnizAlgebra> {
        self.algebras.get(name).ok_or_else(|| Self::missing(name))
    }

    pub fn map(&self, name: &str) -> Result<&LinearMap> {
        self.maps.get(name).ok_or_else(|| Self::missing(name))
    }

    pub fn post(&self, name: &str) -> Result<&PostLeibnizAlgebra> {
        self.posts.get(name).ok_or_else(|| Self::missing(name))
    }

    pub fn context(&self, name: &str) -> Result<LeibnizGRep> {
        match self.contexts.get(name).ok_or_else(|| Self::missing(name))? {
            ContextDecl::Adjoint(g) => Ok(LeibnizGRep::adjoint(self.algebra(g)?)),
            ContextDecl::Zero { g, h } => {
                LeibnizGRep::with_zero_actions(self.algebra(g)?.clone(), self.algebra(h)?.clone())
            }
            ContextDecl::Explicit { g, h, actions } => {
                let pair = self
                    .actions
                    .get(actions)
                    .ok_or_else(|| Self::missing(actions))?
                    .pair
                    .clone();
                LeibnizGRep::new(self.algebra(g)?.clone(), self.algebra(h)?.clone(), pair)
            }
        }
    }

    /// A named scalar, or a literal in the manifest's field.
    pub fn scalar(&self, text: &str) -> Result<Scalar> {
        match self.scalars.get(text) {
            Some(s) => Ok(s.clone()),
            None => self.field.parse_scalar(text),
        }
    }

    pub fn deformation(&self, name: &str) -> Result<Deformation> {
        let decl = self
            .deformations
            .get(name)
            .ok_or_else(|| Self::missing(name))?;
        let context = self.context(&decl.context)?;
        let ts: Vec<LinearMap> = decl
            .coefficients
            .iter()
            .map(|m| self.map(m).cloned())
            .collect::<Result<_>>()?;
        let base = WeightedRBO::new(context, decl.weight.clone(), ts[0].clone())?;
        Deformation::new(base, ts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
# sample
field gf 5
scalar lambda -1
algebra a dim 2
bracket a e1 e1 -> 1 e2
algebra k dim 1
actions rho a k
left rho e1 e1 -> 2 e1
context adj adjoint a
context triv a k zero
context acted a k rho
map t 2 2
image t e1 -> 1 e1
image t e2 -> 1 e2
map z 2 2
deformation d adj lambda t z
post p dim 1
br p e1 e1 -> 3 e1
";

    #[test]
    fn minimal_manifest() {
        let m = parse_manifest("field rational\nalgebra k dim 1\n").unwrap();
        assert!(m.algebra("k").unwrap().is_abelian());
    }

    #[test]
    fn round_trip_is_canonical() {
        let m = parse_manifest(SAMPLE).unwrap();
        let text = m.render();
        let again = parse_manifest(&text).unwrap();
        assert_eq!(again, m);
        assert_eq!(again.render(), text);
        assert_eq!(
            m.scalars["lambda"],
            FieldSpec::prime(5).unwrap().from_i64(4)
        );
        let d = m.deformation("d").unwrap();
        assert_eq!(d.order(), 1);
        assert!(m.context("acted").unwrap().actions().right().is_zero());
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_manifest("field rational\nalgebra a dim 2\nbracket a e1 e3 -> 1 e1\n")
            .unwrap_err();
        assert!(
            matches!(e, Error::Parse { line: 3, column: 14, ref message } if message.contains("dimension"))
        );
        let e = parse_manifest("field gf 4\n").unwrap_err();
        assert!(matches!(
            e,
            Error::Parse {
                line: 1,
                column: 10,
                ..
            }
        ));
        let e = parse_manifest("field rational\ncontext c adjoint b\n").unwrap_err();
        assert!(
            matches!(e, Error::Parse { line: 2, column: 19, ref message } if message.contains("unresolved"))
        );
        let e = parse_manifest("algebra a dim 1\n").unwrap_err();
        assert!(matches!(
            e,
            Error::Parse {
                line: 1,
                column: 1,
                ..
            }
        ));
        let e = parse_manifest("field rational\nalgebra a dim 1\nalgebra a dim 1\n").unwrap_err();
        assert!(matches!(
            e,
            Error::Parse {
                line: 3,
                column: 9,
                ..
            }
        ));
        let e = parse_manifest("field rational\nalgebra a dim 1\nbracket a e1 e1 -> 1/0 e1\n")
            .unwrap_err();
        assert!(matches!(
            e,
            Error::Parse {
                line: 3,
                column: 20,
                ..
            }
        ));
    }

    #[test]
    fn field_override_reinterprets_scalars() {
        let m = parse_manifest_in(
            "field rational\nscalar h 1/2\n",
            Some(FieldSpec::prime(5).unwrap()),
        )
        .unwrap();
        assert_eq!(m.scalars["h"], FieldSpec::prime(5).unwrap().from_i64(3));
    }
}

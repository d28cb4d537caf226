//! Dense coefficient tensors: linear maps, bilinear maps between possibly
//! different spaces, and multilinear maps `V^{⊗k} → W`.
//!
//! Multilinear maps are flattened lexicographically over
//! `(source tuple, target index)`; this order is also the coordinate order
//! used for cochain spaces in the cohomology matrices.

use crate::error::{Error, Result};
use crate::field::{vector, FieldSpec, Scalar};
use crate::linalg::Matrix;

/// All `k`-tuples over `0..dim` in lexicographic order.
pub fn tuples(dim: usize, k: usize) -> Vec<Vec<usize>> {
    let total = dim.checked_pow(k as u32).expect("tuple count overflow");
    let mut out = Vec::with_capacity(total);
    if total == 0 {
        return out;
    }
    let mut cur = vec![0usize; k];
    loop {
        out.push(cur.clone());
        let mut pos = k;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            cur[pos] += 1;
            if cur[pos] < dim {
                break;
            }
            cur[pos] = 0;
        }
    }
}

/// A linear map stored as a `target × source` matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearMap {
    matrix: Matrix,
}

impl LinearMap {
    pub fn new(matrix: Matrix) -> Self {
        LinearMap { matrix }
    }

    pub fn zero(field: FieldSpec, source_dim: usize, target_dim: usize) -> Self {
        LinearMap::new(Matrix::zeros(field, target_dim, source_dim))
    }

    pub fn identity(field: FieldSpec, dim: usize) -> Self {
        LinearMap::new(Matrix::identity(field, dim))
    }

    /// Builds the map from the images of the source basis vectors.
    pub fn from_images(
        field: FieldSpec,
        target_dim: usize,
        images: &[Vec<Scalar>],
    ) -> Result<Self> {
        Ok(LinearMap::new(Matrix::from_columns(
            field, target_dim, images,
        )?))
    }

    pub fn field(&self) -> FieldSpec {
        self.matrix.field()
    }

    pub fn source_dim(&self) -> usize {
        self.matrix.cols()
    }

    pub fn target_dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn apply(&self, x: &[Scalar]) -> Vec<Scalar> {
        self.matrix
            .mul_vec(x)
            .expect("linear map applied to a vector of the wrong length")
    }

    /// Image of the `j`-th source basis vector.
    pub fn image(&self, j: usize) -> Vec<Scalar> {
        self.matrix.column(j)
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &LinearMap) -> Result<LinearMap> {
        Ok(LinearMap::new(self.matrix.mul(&other.matrix)?))
    }

    pub fn add(&self, other: &LinearMap) -> Result<LinearMap> {
        Ok(LinearMap::new(self.matrix.add(&other.matrix)?))
    }

    pub fn sub(&self, other: &LinearMap) -> Result<LinearMap> {
        Ok(LinearMap::new(self.matrix.sub(&other.matrix)?))
    }

    pub fn scale(&self, c: &Scalar) -> LinearMap {
        LinearMap::new(self.matrix.scale(c))
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    pub fn inverse(&self) -> Result<LinearMap> {
        Ok(LinearMap::new(self.matrix.inverse()?))
    }

    /// The same map viewed as an arity-1 multilinear map.
    pub fn to_multimap(&self) -> MultiMap {
        let (s, t) = (self.source_dim(), self.target_dim());
        let mut data = Vec::with_capacity(s * t);
        for j in 0..s {
            for i in 0..t {
                data.push(self.matrix.get(i, j).clone());
            }
        }
        MultiMap {
            field: self.field(),
            arity: 1,
            source_dim: s,
            target_dim: t,
            data,
        }
    }
}

/// Bilinear map `A × B → C` with `c[i][j][k]` the coefficient of `f_k` in
/// `β(a_i, b_j)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Bilinear {
    field: FieldSpec,
    left_dim: usize,
    right_dim: usize,
    out_dim: usize,
    data: Vec<Scalar>,
}

impl Bilinear {
    pub fn zero(field: FieldSpec, left_dim: usize, right_dim: usize, out_dim: usize) -> Self {
        Bilinear {
            field,
            left_dim,
            right_dim,
            out_dim,
            data: vec![field.zero(); left_dim * right_dim * out_dim],
        }
    }

    /// Fills every basis value from a closure returning the output vector.
    pub fn from_fn(
        field: FieldSpec,
        left_dim: usize,
        right_dim: usize,
        out_dim: usize,
        mut f: impl FnMut(usize, usize) -> Vec<Scalar>,
    ) -> Self {
        let mut b = Bilinear::zero(field, left_dim, right_dim, out_dim);
        for i in 0..left_dim {
            for j in 0..right_dim {
                let v = f(i, j);
                assert_eq!(v.len(), out_dim, "bilinear value has the wrong length");
                b.set_value(i, j, v);
            }
        }
        b
    }

    /// Sparse constructor from `(i, j, k, coefficient)` entries.
    pub fn from_entries(
        field: FieldSpec,
        left_dim: usize,
        right_dim: usize,
        out_dim: usize,
        entries: &[(usize, usize, usize, Scalar)],
    ) -> Result<Self> {
        let mut b = Bilinear::zero(field, left_dim, right_dim, out_dim);
        for (i, j, k, c) in entries {
            if *i >= left_dim || *j >= right_dim || *k >= out_dim {
                return Err(Error::shape(format!(
                    "entry ({i},{j},{k}) outside {left_dim}x{right_dim}->{out_dim}"
                )));
            }
            if c.field() != field {
                return Err(Error::WrongField(format!(
                    "coefficient {c} is not in {field}"
                )));
            }
            b.data[(i * right_dim + j) * out_dim + k] = c.clone();
        }
        Ok(b)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn left_dim(&self) -> usize {
        self.left_dim
    }

    pub fn right_dim(&self) -> usize {
        self.right_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn entry(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.data[(i * self.right_dim + j) * self.out_dim + k]
    }

    /// `β(a_i, b_j)` as a coefficient slice.
    pub fn value(&self, i: usize, j: usize) -> &[Scalar] {
        let start = (i * self.right_dim + j) * self.out_dim;
        &self.data[start..start + self.out_dim]
    }

    pub fn set_value(&mut self, i: usize, j: usize, v: Vec<Scalar>) {
        let start = (i * self.right_dim + j) * self.out_dim;
        for (k, c) in v.into_iter().enumerate() {
            self.data[start + k] = c;
        }
    }

    pub fn apply(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(x.len(), self.left_dim, "left argument has the wrong length");
        assert_eq!(
            y.len(),
            self.right_dim,
            "right argument has the wrong length"
        );
        let mut out = vector::zeros(self.field, self.out_dim);
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                vector::axpy(&mut out, &(xi * yj), self.value(i, j));
            }
        }
        out
    }

    /// `β(a_i, y)`
    pub fn apply_left_basis(&self, i: usize, y: &[Scalar]) -> Vec<Scalar> {
        let mut out = vector::zeros(self.field, self.out_dim);
        for (j, yj) in y.iter().enumerate() {
            vector::axpy(&mut out, yj, self.value(i, j));
        }
        out
    }

    /// `β(x, b_j)`
    pub fn apply_right_basis(&self, x: &[Scalar], j: usize) -> Vec<Scalar> {
        let mut out = vector::zeros(self.field, self.out_dim);
        for (i, xi) in x.iter().enumerate() {
            vector::axpy(&mut out, xi, self.value(i, j));
        }
        out
    }

    pub fn add(&self, other: &Bilinear) -> Result<Bilinear> {
        self.same_shape(other)?;
        let mut out = self.clone();
        vector::add_assign(&mut out.data, &other.data);
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> Bilinear {
        let mut out = self.clone();
        out.data = vector::scale(c, &self.data);
        out
    }

    pub fn is_zero(&self) -> bool {
        vector::is_zero(&self.data)
    }

    fn same_shape(&self, other: &Bilinear) -> Result<()> {
        if (self.left_dim, self.right_dim, self.out_dim)
            != (other.left_dim, other.right_dim, other.out_dim)
        {
            return Err(Error::shape("bilinear maps of different shapes"));
        }
        Ok(())
    }

    /// Nonzero `(i, j, value)` triples in index order.
    pub fn nonzero_values(&self) -> Vec<(usize, usize, Vec<Scalar>)> {
        let mut out = Vec::new();
        for i in 0..self.left_dim {
            for j in 0..self.right_dim {
                let v = self.value(i, j);
                if !vector::is_zero(v) {
                    out.push((i, j, v.to_vec()));
                }
            }
        }
        out
    }

    /// Square bilinear maps (`A = B`) viewed as arity-2 multilinear maps.
    pub fn to_multimap(&self) -> Result<MultiMap> {
        if self.left_dim != self.right_dim {
            return Err(Error::shape("bilinear map with different argument spaces"));
        }
        Ok(MultiMap {
            field: self.field,
            arity: 2,
            source_dim: self.left_dim,
            target_dim: self.out_dim,
            data: self.data.clone(),
        })
    }
}

/// An argument of a multilinear evaluation.
#[derive(Clone, Copy, Debug)]
pub enum Arg<'a> {
    Basis(usize),
    Vector(&'a [Scalar]),
}

/// A multilinear map `V^{⊗k} → W` with `V`, `W` finite-dimensional.
/// Arity 0 is allowed and represents an element of `W`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiMap {
    field: FieldSpec,
    arity: usize,
    source_dim: usize,
    target_dim: usize,
    data: Vec<Scalar>,
}

impl MultiMap {
    pub fn zero(field: FieldSpec, arity: usize, source_dim: usize, target_dim: usize) -> Self {
        let len = source_dim
            .checked_pow(arity as u32)
            .and_then(|n| n.checked_mul(target_dim))
            .expect("multimap size overflow");
        MultiMap {
            field,
            arity,
            source_dim,
            target_dim,
            data: vec![field.zero(); len],
        }
    }

    pub fn from_data(
        field: FieldSpec,
        arity: usize,
        source_dim: usize,
        target_dim: usize,
        data: Vec<Scalar>,
    ) -> Result<Self> {
        let expected = source_dim.pow(arity as u32) * target_dim;
        if data.len() != expected {
            return Err(Error::shape(format!(
                "{} coefficients for an arity-{arity} map {source_dim}->{target_dim} (need {expected})",
                data.len()
            )));
        }
        Ok(MultiMap {
            field,
            arity,
            source_dim,
            target_dim,
            data,
        })
    }

    /// Fills every basis value from a closure on source tuples.
    pub fn from_fn(
        field: FieldSpec,
        arity: usize,
        source_dim: usize,
        target_dim: usize,
        mut f: impl FnMut(&[usize]) -> Vec<Scalar>,
    ) -> Self {
        let mut m = MultiMap::zero(field, arity, source_dim, target_dim);
        for (slot, t) in tuples(source_dim, arity).iter().enumerate() {
            let v = f(t);
            assert_eq!(v.len(), target_dim, "multimap value has the wrong length");
            let start = slot * target_dim;
            m.data[start..start + target_dim].clone_from_slice(&v);
        }
        m
    }

    /// An element of `W` as an arity-0 map.
    pub fn constant(field: FieldSpec, source_dim: usize, value: Vec<Scalar>) -> Self {
        MultiMap {
            field,
            arity: 0,
            source_dim,
            target_dim: value.len(),
            data: value,
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    /// Flattened coefficients.
    pub fn data(&self) -> &[Scalar] {
        &self.data
    }

    pub fn into_data(self) -> Vec<Scalar> {
        self.data
    }

    fn slot(&self, tuple: &[usize]) -> usize {
        debug_assert_eq!(tuple.len(), self.arity);
        tuple.iter().fold(0, |acc, &i| acc * self.source_dim + i)
    }

    /// Value on a tuple of basis vectors.
    pub fn value(&self, tuple: &[usize]) -> &[Scalar] {
        let start = self.slot(tuple) * self.target_dim;
        &self.data[start..start + self.target_dim]
    }

    pub fn set_value(&mut self, tuple: &[usize], v: &[Scalar]) {
        let start = self.slot(tuple) * self.target_dim;
        self.data[start..start + self.target_dim].clone_from_slice(v);
    }

    /// Multilinear evaluation; vector arguments are expanded over their
    /// nonzero coordinates.
    pub fn eval(&self, args: &[Arg<'_>]) -> Vec<Scalar> {
        assert_eq!(args.len(), self.arity, "wrong number of arguments");
        let mut out = vector::zeros(self.field, self.target_dim);
        let mut tuple = vec![0usize; self.arity];
        self.eval_rec(args, 0, &self.field.one(), &mut tuple, &mut out);
        out
    }

    fn eval_rec(
        &self,
        args: &[Arg<'_>],
        pos: usize,
        coeff: &Scalar,
        tuple: &mut Vec<usize>,
        out: &mut [Scalar],
    ) {
        if pos == args.len() {
            vector::axpy(out, coeff, self.value(tuple));
            return;
        }
        match args[pos] {
            Arg::Basis(i) => {
                tuple[pos] = i;
                self.eval_rec(args, pos + 1, coeff, tuple, out);
            }
            Arg::Vector(v) => {
                assert_eq!(v.len(), self.source_dim, "argument has the wrong length");
                for (i, c) in v.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    tuple[pos] = i;
                    let next = coeff * c;
                    self.eval_rec(args, pos + 1, &next, tuple, out);
                }
            }
        }
    }

    /// Value on basis vectors, converting arguments to [`Arg::Basis`].
    pub fn eval_basis(&self, tuple: &[usize]) -> Vec<Scalar> {
        self.value(tuple).to_vec()
    }

    fn check_same_shape(&self, other: &MultiMap) -> Result<()> {
        if (self.arity, self.source_dim, self.target_dim)
            != (other.arity, other.source_dim, other.target_dim)
        {
            return Err(Error::shape(format!(
                "arity-{} map {}->{} vs arity-{} map {}->{}",
                self.arity,
                self.source_dim,
                self.target_dim,
                other.arity,
                other.source_dim,
                other.target_dim
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &MultiMap) -> Result<MultiMap> {
        self.check_same_shape(other)?;
        let mut out = self.clone();
        vector::add_assign(&mut out.data, &other.data);
        Ok(out)
    }

    pub fn sub(&self, other: &MultiMap) -> Result<MultiMap> {
        self.check_same_shape(other)?;
        let mut out = self.clone();
        vector::sub_assign(&mut out.data, &other.data);
        Ok(out)
    }

    pub fn add_assign(&mut self, other: &MultiMap) -> Result<()> {
        self.check_same_shape(other)?;
        vector::add_assign(&mut self.data, &other.data);
        Ok(())
    }

    /// `self += c * other`
    pub fn axpy(&mut self, c: &Scalar, other: &MultiMap) -> Result<()> {
        self.check_same_shape(other)?;
        vector::axpy(&mut self.data, c, &other.data);
        Ok(())
    }

    pub fn scale(&self, c: &Scalar) -> MultiMap {
        let mut out = self.clone();
        out.data = vector::scale(c, &self.data);
        out
    }

    pub fn neg(&self) -> MultiMap {
        self.scale(&-self.field.one())
    }

    pub fn is_zero(&self) -> bool {
        vector::is_zero(&self.data)
    }

    /// Arity-1 maps as linear maps.
    pub fn to_linear(&self) -> Result<LinearMap> {
        if self.arity != 1 {
            return Err(Error::shape(format!("arity {} is not linear", self.arity)));
        }
        let images: Vec<Vec<Scalar>> = (0..self.source_dim)
            .map(|j| self.value(&[j]).to_vec())
            .collect();
        LinearMap::from_images(self.field, self.target_dim, &images)
    }

    /// Nonzero `(tuple, target index, coefficient)` entries in flattening order.
    pub fn sparse_entries(&self) -> Vec<(Vec<usize>, usize, Scalar)> {
        let mut out = Vec::new();
        for t in tuples(self.source_dim, self.arity) {
            for (k, c) in self.value(&t).iter().enumerate() {
                if !c.is_zero() {
                    out.push((t.clone(), k, c.clone()));
                }
            }
        }
        out
    }
}

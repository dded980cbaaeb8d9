//! Dense rank-0..4 tensors over exact scalars.
//!
//! Storage is row-major: the last axis varies fastest. Each axis carries an
//! [`IndexKind`] recording which basis it is expressed in.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{GaussianRational, Rational, Scalar};

pub const MAX_RANK: usize = 4;

/// Which basis an axis is expressed in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IndexKind {
    /// The real basis `X_1..X_2n`.
    Real,
    /// The `(1,0)` frame `Z_1..Z_n`.
    Holomorphic,
    /// The `(0,1)` frame `conj(Z_1)..conj(Z_n)`.
    AntiHolomorphic,
    /// The full complex frame `Z_1..Z_n, conj(Z_1)..conj(Z_n)`.
    Complexified,
}

impl IndexKind {
    pub fn conjugate(self) -> Self {
        match self {
            IndexKind::Holomorphic => IndexKind::AntiHolomorphic,
            IndexKind::AntiHolomorphic => IndexKind::Holomorphic,
            k => k,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Tensor<S> {
    dims: Vec<usize>,
    kinds: Vec<IndexKind>,
    data: Vec<S>,
}

pub type RealTensor = Tensor<Rational>;
pub type ComplexTensor = Tensor<GaussianRational>;

impl<S: Scalar> Tensor<S> {
    pub fn zeros(dims: &[usize], kinds: &[IndexKind]) -> Self {
        assert!(dims.len() <= MAX_RANK, "tensor rank {} exceeds {MAX_RANK}", dims.len());
        assert_eq!(dims.len(), kinds.len());
        let len = dims.iter().product();
        Tensor { dims: dims.to_vec(), kinds: kinds.to_vec(), data: vec![S::zero(); len] }
    }

    /// All axes tagged [`IndexKind::Real`].
    pub fn real_zeros(dims: &[usize]) -> Self {
        Self::zeros(dims, &vec![IndexKind::Real; dims.len()])
    }

    pub fn from_vec(dims: &[usize], kinds: &[IndexKind], data: Vec<S>) -> Result<Self> {
        if dims.len() > MAX_RANK || dims.len() != kinds.len() {
            return Err(Error::ShapeMismatch(format!(
                "rank {} with {} index kinds",
                dims.len(),
                kinds.len()
            )));
        }
        let len: usize = dims.iter().product();
        if len != data.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} entries for dims {:?}",
                data.len(),
                dims
            )));
        }
        Ok(Tensor { dims: dims.to_vec(), kinds: kinds.to_vec(), data })
    }

    pub fn scalar(value: S) -> Self {
        Tensor { dims: vec![], kinds: vec![], data: vec![value] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::real_zeros(&[n, n]);
        for i in 0..n {
            m.data[i * n + i] = S::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<S>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::ShapeMismatch("ragged matrix rows".into()));
        }
        Self::from_vec(&[r, c], &[IndexKind::Real; 2], rows.concat())
    }

    pub fn diag(entries: &[S]) -> Self {
        let n = entries.len();
        let mut m = Self::real_zeros(&[n, n]);
        for (i, e) in entries.iter().enumerate() {
            m.data[i * n + i] = e.clone();
        }
        m
    }

    pub fn rank(&self) -> usize {
        self.dims.len()
    }
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }
    pub fn kinds(&self) -> &[IndexKind] {
        &self.kinds
    }
    pub fn data(&self) -> &[S] {
        &self.data
    }
    pub fn data_mut(&mut self) -> &mut [S] {
        &mut self.data
    }
    pub fn into_data(self) -> Vec<S> {
        self.data
    }

    pub fn with_kinds(mut self, kinds: &[IndexKind]) -> Self {
        assert_eq!(kinds.len(), self.dims.len());
        self.kinds = kinds.to_vec();
        self
    }

    pub fn offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.dims.len());
        idx.iter().zip(&self.dims).fold(0, |acc, (&i, &d)| {
            debug_assert!(i < d);
            acc * d + i
        })
    }

    pub fn get(&self, idx: &[usize]) -> &S {
        &self.data[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], value: S) {
        let o = self.offset(idx);
        self.data[o] = value;
    }

    pub fn get_mut(&mut self, idx: &[usize]) -> &mut S {
        let o = self.offset(idx);
        &mut self.data[o]
    }

    /// Multi-index of a flat offset.
    pub fn unravel(&self, mut offset: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dims.len()];
        for (slot, &d) in idx.iter_mut().zip(&self.dims).rev() {
            *slot = offset % d;
            offset /= d;
        }
        idx
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Nonzero entries with their multi-indices, in storage order.
    pub fn nonzero_entries(&self) -> impl Iterator<Item = (Vec<usize>, &S)> + '_ {
        self.data
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(o, v)| (self.unravel(o), v))
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Tensor<T> {
        Tensor { dims: self.dims.clone(), kinds: self.kinds.clone(), data: self.data.iter().map(f).collect() }
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.dims != other.dims {
            return Err(Error::ShapeMismatch(format!("{:?} vs {:?}", self.dims, other.dims)));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a -= b;
        }
        Ok(out)
    }

    pub fn scale(&self, c: &S) -> Self {
        self.map(|x| x.mul_ref(c))
    }

    /// Reorders axes: axis `k` of the result is axis `perm[k]` of `self`.
    pub fn permute_axes(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.rank());
        let dims: Vec<usize> = perm.iter().map(|&p| self.dims[p]).collect();
        let kinds: Vec<IndexKind> = perm.iter().map(|&p| self.kinds[p]).collect();
        let mut out = Tensor::zeros(&dims, &kinds);
        for o in 0..self.data.len() {
            let src = self.unravel(o);
            let dst: Vec<usize> = perm.iter().map(|&p| src[p]).collect();
            out.set(&dst, self.data[o].clone());
        }
        out
    }

    /// `result[.., q, ..] = Σ_a self[.., a, ..] · m[a][q]` along one axis.
    pub fn transform_axis(&self, axis: usize, m: &Tensor<S>, kind: IndexKind) -> Result<Self> {
        if m.rank() != 2 || m.dims[0] != self.dims[axis] {
            return Err(Error::ShapeMismatch(format!(
                "axis {axis} of size {} against matrix {:?}",
                self.dims[axis], m.dims
            )));
        }
        let (rows, cols) = (m.dims[0], m.dims[1]);
        let columns: Vec<Vec<(usize, &S)>> = (0..cols)
            .map(|q| {
                (0..rows)
                    .filter_map(|a| {
                        let v = &m.data[a * cols + q];
                        (!v.is_zero()).then_some((a, v))
                    })
                    .collect()
            })
            .collect();
        let outer: usize = self.dims[..axis].iter().product();
        let inner: usize = self.dims[axis + 1..].iter().product();
        let mut dims = self.dims.clone();
        dims[axis] = cols;
        let mut kinds = self.kinds.clone();
        kinds[axis] = kind;
        let mut out = Tensor::zeros(&dims, &kinds);
        for o in 0..outer {
            for i in 0..inner {
                for (q, col) in columns.iter().enumerate() {
                    let mut acc = S::zero();
                    for &(a, mv) in col {
                        let x = &self.data[(o * rows + a) * inner + i];
                        if !x.is_zero() {
                            acc += &x.mul_ref(mv);
                        }
                    }
                    out.data[(o * cols + q) * inner + i] = acc;
                }
            }
        }
        Ok(out)
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.rank() != 2 || other.rank() != 2 {
            return Err(Error::ShapeMismatch("matmul needs rank-2 operands".into()));
        }
        // (A·B)[q][j] = Σ_a B[a][j] · Aᵀ[a][q]
        other.transform_axis(0, &self.transpose()?, self.kinds[0])
    }

    pub fn transpose(&self) -> Result<Self> {
        if self.rank() != 2 {
            return Err(Error::ShapeMismatch("transpose needs a rank-2 tensor".into()));
        }
        Ok(self.permute_axes(&[1, 0]))
    }

    /// Matrix-vector product for rank-2 tensors.
    pub fn apply(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.rank(), 2);
        let (r, c) = (self.dims[0], self.dims[1]);
        assert_eq!(v.len(), c);
        (0..r)
            .map(|i| {
                let mut acc = S::zero();
                for (j, x) in v.iter().enumerate() {
                    let m = &self.data[i * c + j];
                    if !m.is_zero() && !x.is_zero() {
                        acc += &m.mul_ref(x);
                    }
                }
                acc
            })
            .collect()
    }

    /// Rows of a rank-2 tensor.
    pub fn rows(&self) -> Vec<Vec<S>> {
        assert_eq!(self.rank(), 2);
        self.data.chunks(self.dims[1]).map(<[S]>::to_vec).collect()
    }

    pub fn trace(&self) -> Result<S> {
        if self.rank() != 2 || self.dims[0] != self.dims[1] {
            return Err(Error::ShapeMismatch("trace needs a square matrix".into()));
        }
        let n = self.dims[0];
        let mut acc = S::zero();
        for i in 0..n {
            acc += &self.data[i * n + i];
        }
        Ok(acc)
    }
}

impl RealTensor {
    pub fn to_complex(&self) -> ComplexTensor {
        self.map(GaussianRational::from_rational)
    }
}

impl ComplexTensor {
    /// `Some` when every entry has zero imaginary part.
    pub fn to_real(&self) -> Option<RealTensor> {
        self.data.iter().all(|z| z.im.is_zero()).then(|| self.map(|z| z.re.clone()))
    }
}

/// Sums `t` against `u` over the paired axes. A weight matrix `W` for pair
/// `(i, j)` turns the sum into `Σ_{a,b} t[..a..] W[a][b] u[..b..]`.
///
/// Result axes are the unpaired axes of `t`, then those of `u`.
pub fn contract<S: Scalar>(
    t: &Tensor<S>,
    u: &Tensor<S>,
    axis_pairs: &[(usize, usize)],
    weights: &[Option<&Tensor<S>>],
) -> Result<Tensor<S>> {
    if !weights.is_empty() && weights.len() != axis_pairs.len() {
        return Err(Error::ShapeMismatch("one weight slot per axis pair".into()));
    }
    let mut t_used = vec![false; t.rank()];
    let mut u_used = vec![false; u.rank()];
    for (p, &(i, j)) in axis_pairs.iter().enumerate() {
        if i >= t.rank() || j >= u.rank() || t_used[i] || u_used[j] {
            return Err(Error::ShapeMismatch(format!("bad axis pair ({i}, {j})")));
        }
        t_used[i] = true;
        u_used[j] = true;
        match weights.get(p).copied().flatten() {
            None if t.dims[i] != u.dims[j] => {
                return Err(Error::ShapeMismatch(format!(
                    "paired axes ({i}, {j}) have sizes {} and {}",
                    t.dims[i], u.dims[j]
                )))
            }
            Some(w) if w.rank() != 2 || w.dims[0] != t.dims[i] || w.dims[1] != u.dims[j] => {
                return Err(Error::ShapeMismatch(format!("weight {:?} for pair ({i}, {j})", w.dims)))
            }
            _ => {}
        }
    }
    let t_free: Vec<usize> = (0..t.rank()).filter(|&a| !t_used[a]).collect();
    let u_free: Vec<usize> = (0..u.rank()).filter(|&a| !u_used[a]).collect();
    let dims: Vec<usize> =
        t_free.iter().map(|&a| t.dims[a]).chain(u_free.iter().map(|&a| u.dims[a])).collect();
    let kinds: Vec<IndexKind> =
        t_free.iter().map(|&a| t.kinds[a]).chain(u_free.iter().map(|&a| u.kinds[a])).collect();
    if dims.len() > MAX_RANK {
        return Err(Error::ShapeMismatch(format!("contraction result has rank {}", dims.len())));
    }
    let mut out = Tensor::zeros(&dims, &kinds);

    // Enumerate every assignment of the summed indices (a on the t side, b on the u side).
    let ranges: Vec<(usize, usize, bool)> = axis_pairs
        .iter()
        .enumerate()
        .map(|(p, &(i, j))| (t.dims[i], u.dims[j], weights.get(p).copied().flatten().is_some()))
        .collect();
    let mut ti = vec![0; t.rank()];
    let mut ui = vec![0; u.rank()];
    for o in 0..out.data.len() {
        let free = out.unravel(o);
        for (k, &a) in t_free.iter().enumerate() {
            ti[a] = free[k];
        }
        for (k, &a) in u_free.iter().enumerate() {
            ui[a] = free[t_free.len() + k];
        }
        let mut acc = S::zero();
        let mut counters = vec![(0usize, 0usize); axis_pairs.len()];
        'outer: loop {
            let mut w = S::one();
            for (p, &(i, j)) in axis_pairs.iter().enumerate() {
                ti[i] = counters[p].0;
                ui[j] = counters[p].1;
                if let Some(wt) = weights.get(p).copied().flatten() {
                    w = w * wt.get(&[counters[p].0, counters[p].1]);
                }
            }
            if !w.is_zero() {
                let x = t.get(&ti);
                if !x.is_zero() {
                    let y = u.get(&ui);
                    if !y.is_zero() {
                        acc += &(x.mul_ref(y) * &w);
                    }
                }
            }
            // Advance the odometer; unweighted pairs move a and b together.
            let mut p = axis_pairs.len();
            loop {
                if p == 0 {
                    break 'outer;
                }
                p -= 1;
                let (da, db, weighted) = ranges[p];
                if weighted {
                    counters[p].1 += 1;
                    if counters[p].1 < db {
                        continue 'outer;
                    }
                    counters[p].1 = 0;
                    counters[p].0 += 1;
                    if counters[p].0 < da {
                        continue 'outer;
                    }
                    counters[p].0 = 0;
                } else {
                    counters[p].0 += 1;
                    counters[p].1 += 1;
                    if counters[p].0 < da {
                        continue 'outer;
                    }
                    counters[p] = (0, 0);
                }
            }
        }
        out.data[o] = acc;
    }
    Ok(out)
}

/// Entrywise complex conjugate. Holomorphic and antiholomorphic axes swap
/// tags; complexified axes swap their two halves so the result is expressed
/// in the same ordered frame.
pub fn conjugate_tensor(t: &ComplexTensor) -> ComplexTensor {
    let kinds: Vec<IndexKind> = t.kinds.iter().map(|k| k.conjugate()).collect();
    let mut out = Tensor::zeros(&t.dims, &kinds);
    for o in 0..t.data.len() {
        let mut idx = t.unravel(o);
        for (a, i) in idx.iter_mut().enumerate() {
            if t.kinds[a] == IndexKind::Complexified {
                let n = t.dims[a] / 2;
                *i = if *i < n { *i + n } else { *i - n };
            }
        }
        out.set(&idx, t.data[o].conj());
    }
    out
}

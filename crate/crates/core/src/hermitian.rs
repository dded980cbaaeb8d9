//! Almost complex structures, compatible metrics, `(1,0)`-frames, the
//! Nijenhuis tensor and the Kähler-type classification.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::forms::{exterior_derivative, pq_decompose, InvariantForm};
use crate::lie::LieAlgebra;
use crate::linalg::{determinant, first_nonpositive_minor, invert_matrix, rank};
use crate::scalar::{frac, imag_unit, GaussianRational, Rational, Scalar};
use crate::tensor::{ComplexTensor, IndexKind, RealTensor};

/// `J` with `J[c][b]` the `c`-th component of `J X_b`.
#[derive(Clone, Debug, PartialEq)]
pub struct AlmostComplexStructure {
    j: RealTensor,
}

impl AlmostComplexStructure {
    pub fn new(j: RealTensor) -> Result<Self> {
        if j.rank() != 2 || j.dims()[0] != j.dims()[1] {
            return Err(Error::ShapeMismatch(format!("J must be square, got {:?}", j.dims())));
        }
        let n = j.dims()[0];
        if n == 0 || n % 2 == 1 {
            return Err(Error::OddDimension(n));
        }
        let sq = j.matmul(&j)?;
        for r in 0..n {
            for c in 0..n {
                let want = if r == c { -Rational::one() } else { Rational::zero() };
                if *sq.get(&[r, c]) != want {
                    return Err(Error::JSquaredNotMinusIdentity(r, c));
                }
            }
        }
        Ok(AlmostComplexStructure { j })
    }

    /// `J X_i = X_{i+n}` on a `2n`-dimensional space.
    pub fn standard(dim: usize) -> Self {
        let n = dim / 2;
        let mut j = RealTensor::real_zeros(&[dim, dim]);
        for i in 0..n {
            j.set(&[i + n, i], Rational::one());
            j.set(&[i, i + n], -Rational::one());
        }
        AlmostComplexStructure { j }
    }

    pub fn dim(&self) -> usize {
        self.j.dims()[0]
    }

    pub fn matrix(&self) -> &RealTensor {
        &self.j
    }

    pub fn apply<S: Scalar>(&self, v: &[S]) -> Vec<S> {
        let n = self.dim();
        (0..n)
            .map(|c| {
                let mut acc = S::zero();
                for (b, x) in v.iter().enumerate() {
                    let m = self.j.get(&[c, b]);
                    if !m.is_zero() && !x.is_zero() {
                        acc += &x.mul_real(m);
                    }
                }
                acc
            })
            .collect()
    }
}

/// Symmetric positive definite `g`, with its inverse.
#[derive(Clone, Debug, PartialEq)]
pub struct InvariantMetric {
    g: RealTensor,
    inverse: RealTensor,
}

impl InvariantMetric {
    pub fn new(g: RealTensor) -> Result<Self> {
        if g.rank() != 2 || g.dims()[0] != g.dims()[1] {
            return Err(Error::ShapeMismatch(format!("metric must be square, got {:?}", g.dims())));
        }
        let n = g.dims()[0];
        for a in 0..n {
            for b in a + 1..n {
                if g.get(&[a, b]) != g.get(&[b, a]) {
                    return Err(Error::MetricNotSymmetric(a, b));
                }
            }
        }
        if let Some(k) = first_nonpositive_minor(&g) {
            return Err(Error::MetricNotPositiveDefinite(k));
        }
        let inverse = invert_matrix(&g)?;
        Ok(InvariantMetric { g, inverse })
    }

    pub fn identity(dim: usize) -> Self {
        InvariantMetric { g: RealTensor::identity(dim), inverse: RealTensor::identity(dim) }
    }

    pub fn matrix(&self) -> &RealTensor {
        &self.g
    }

    pub fn inverse(&self) -> &RealTensor {
        &self.inverse
    }

    /// Bilinear extension `Σ v^a g_ab w^b`.
    pub fn pair<S: Scalar>(&self, v: &[S], w: &[S]) -> S {
        let n = self.g.dims()[0];
        let mut acc = S::zero();
        for a in 0..n {
            if v[a].is_zero() {
                continue;
            }
            for b in 0..n {
                let m = self.g.get(&[a, b]);
                if !m.is_zero() && !w[b].is_zero() {
                    acc += &v[a].mul_ref(&w[b]).mul_real(m);
                }
            }
        }
        acc
    }

    /// `g(v, ·)` as a covector.
    pub fn lower<S: Scalar>(&self, v: &[S]) -> Vec<S> {
        let n = self.g.dims()[0];
        (0..n)
            .map(|b| {
                let mut acc = S::zero();
                for (a, x) in v.iter().enumerate() {
                    let m = self.g.get(&[a, b]);
                    if !m.is_zero() && !x.is_zero() {
                        acc += &x.mul_real(m);
                    }
                }
                acc
            })
            .collect()
    }
}

/// `g(X,Y) = ½(ω(X,JY) + ω(Y,JX))`, required positive definite.
pub fn metric_from_taming(j: &AlmostComplexStructure, omega: &RealTensor) -> Result<InvariantMetric> {
    let n = j.dim();
    if omega.dims() != [n, n] {
        return Err(Error::ShapeMismatch(format!("ω has shape {:?}, expected [{n}, {n}]", omega.dims())));
    }
    for a in 0..n {
        for b in a..n {
            if *omega.get(&[a, b]) != -omega.get(&[b, a]).clone() {
                return Err(Error::FormNotAntisymmetric(a, b));
            }
        }
    }
    if determinant(omega)?.is_zero() {
        return Err(Error::DegenerateForm);
    }
    let wj = omega.matmul(j.matrix())?;
    let half = frac(1, 2);
    let mut g = RealTensor::real_zeros(&[n, n]);
    for a in 0..n {
        for b in 0..n {
            g.set(&[a, b], (wj.get(&[a, b]) + wj.get(&[b, a])) * &half);
        }
    }
    if let Some(k) = first_nonpositive_minor(&g) {
        return Err(Error::NotTamed(k));
    }
    InvariantMetric::new(g)
}

/// A validated `(g, J, ω)` on a Lie algebra with `ω(v,w) = g(Jv,w)`.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianTriple {
    alg: LieAlgebra,
    j: AlmostComplexStructure,
    g: InvariantMetric,
    omega: RealTensor,
}

impl HermitianTriple {
    pub fn new(alg: LieAlgebra, j: AlmostComplexStructure, g: InvariantMetric) -> Result<Self> {
        let n = alg.dim();
        if n % 2 == 1 {
            return Err(Error::OddDimension(n));
        }
        if j.dim() != n {
            return Err(Error::WrongDimension { expected: n, got: j.dim() });
        }
        if g.matrix().dims()[0] != n {
            return Err(Error::WrongDimension { expected: n, got: g.matrix().dims()[0] });
        }
        let jm = j.matrix();
        let jt_g_j = jm.transpose()?.matmul(g.matrix())?.matmul(jm)?;
        for a in 0..n {
            for b in 0..n {
                if jt_g_j.get(&[a, b]) != g.matrix().get(&[a, b]) {
                    return Err(Error::MetricNotHermitian(a, b));
                }
            }
        }
        let omega = jm.transpose()?.matmul(g.matrix())?;
        Ok(HermitianTriple { alg, j, g, omega })
    }

    /// The taming route: `g` is symmetrized from `ω` and `J`.
    pub fn from_taming(alg: LieAlgebra, j: AlmostComplexStructure, omega: &RealTensor) -> Result<Self> {
        let g = metric_from_taming(&j, omega)?;
        Self::new(alg, j, g)
    }

    pub fn dim(&self) -> usize {
        self.alg.dim()
    }

    /// Complex dimension `n`.
    pub fn n(&self) -> usize {
        self.alg.dim() / 2
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.alg
    }

    pub fn j(&self) -> &AlmostComplexStructure {
        &self.j
    }

    pub fn metric(&self) -> &InvariantMetric {
        &self.g
    }

    /// `ω[a][b] = ω(X_a, X_b)`.
    pub fn omega(&self) -> &RealTensor {
        &self.omega
    }

    pub fn omega_form(&self) -> InvariantForm {
        InvariantForm::from_real(2, self.omega.clone()).expect("ω is antisymmetric")
    }

    /// The same structure in the real basis whose vectors are the columns of
    /// `p`: `c` is transported, `J ↦ P⁻¹JP`, `g ↦ PᵀgP`.
    pub fn in_real_frame(&self, p: &RealTensor) -> Result<Self> {
        let f = crate::lie::FrameChange::new(p.clone(), IndexKind::Real)?;
        let alg = self.alg.in_real_frame(&f)?;
        let j = f.inverse().matmul(self.j.matrix())?.matmul(p)?;
        let g = p.transpose()?.matmul(self.g.matrix())?.matmul(p)?;
        Self::new(alg, AlmostComplexStructure::new(j)?, InvariantMetric::new(g)?)
    }
}

/// Whether an axis of a real tensor is a covector slot or a vector slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variance {
    Lower,
    Upper,
}

/// The frame `Z_1..Z_n, conj(Z_1)..conj(Z_n)` of the complexified algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexFrame {
    n: usize,
    /// Column `a` is the `a`-th frame vector in real coordinates.
    p: ComplexTensor,
    p_inv: ComplexTensor,
    /// `ĝ_ij = g(Z_i, conj(Z_j))`.
    gram: ComplexTensor,
    gram_inv: ComplexTensor,
}

impl ComplexFrame {
    /// Validates `J Z_i = i Z_i` and linear independence.
    pub fn from_vectors(triple: &HermitianTriple, z: &[Vec<GaussianRational>]) -> Result<Self> {
        let dim = triple.dim();
        let n = dim / 2;
        if z.len() != n || z.iter().any(|v| v.len() != dim) {
            return Err(Error::ShapeMismatch(format!("a (1,0)-frame needs {n} vectors of length {dim}")));
        }
        let i = imag_unit();
        for v in z {
            let jv = triple.j().apply(v);
            if jv.iter().zip(v).any(|(a, b)| *a != b.mul_ref(&i)) {
                return Err(Error::HypothesisFailed("frame vector is not in the +i eigenspace of J".into()));
            }
        }
        let mut p = ComplexTensor::zeros(&[dim, dim], &[IndexKind::Real, IndexKind::Complexified]);
        for (k, v) in z.iter().enumerate() {
            for (a, x) in v.iter().enumerate() {
                p.set(&[a, k], x.clone());
                p.set(&[a, k + n], Scalar::conj(x));
            }
        }
        let p_inv = invert_matrix(&p)?;
        let mut gram = ComplexTensor::zeros(&[n, n], &[IndexKind::Holomorphic, IndexKind::AntiHolomorphic]);
        for a in 0..n {
            let za = &z[a];
            for b in 0..n {
                let zb: Vec<GaussianRational> = z[b].iter().map(Scalar::conj).collect();
                gram.set(&[a, b], triple.metric().pair(za, &zb));
            }
        }
        let gram_inv = invert_matrix(&gram)?;
        Ok(ComplexFrame { n, p, p_inv, gram, gram_inv })
    }

    /// Greedy frame: scan `X_1, X_2, …`, keep `X` when it is independent of the
    /// chosen `X_k, J X_k`, and emit `Z = X − i J X`.
    pub fn standard(triple: &HermitianTriple) -> Self {
        let dim = triple.dim();
        let mut span: Vec<Vec<Rational>> = Vec::new();
        let mut z = Vec::new();
        for a in 0..dim {
            if z.len() == dim / 2 {
                break;
            }
            let mut x = vec![Rational::zero(); dim];
            x[a] = Rational::one();
            let mut trial = span.clone();
            trial.push(x.clone());
            if rank(&trial) == span.len() {
                continue;
            }
            let jx = triple.j().apply(&x);
            span.push(x.clone());
            span.push(jx.clone());
            z.push(
                x.iter()
                    .zip(&jx)
                    .map(|(re, im)| GaussianRational::new(re.clone(), -im.clone()))
                    .collect::<Vec<_>>(),
            );
        }
        Self::from_vectors(triple, &z).expect("J² = −1 guarantees a frame")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `2n × 2n` matrix whose columns are the frame vectors.
    pub fn matrix(&self) -> &ComplexTensor {
        &self.p
    }

    pub fn inverse(&self) -> &ComplexTensor {
        &self.p_inv
    }

    pub fn hermitian_gram(&self) -> &ComplexTensor {
        &self.gram
    }

    pub fn hermitian_gram_inverse(&self) -> &ComplexTensor {
        &self.gram_inv
    }

    /// Frame vector `a` (`a < n`: `Z_{a+1}`, otherwise `conj(Z_{a-n+1})`).
    pub fn vector(&self, a: usize) -> Vec<GaussianRational> {
        (0..2 * self.n).map(|r| self.p.get(&[r, a]).clone()).collect()
    }

    /// `i`-th element of the dual `(1,0)`-coframe as a covector.
    pub fn coframe(&self, i: usize) -> Vec<GaussianRational> {
        (0..2 * self.n).map(|a| self.p_inv.get(&[i, a]).clone()).collect()
    }

    /// Coordinates of a real-coordinate vector in the frame.
    pub fn coordinates(&self, v: &[GaussianRational]) -> Vec<GaussianRational> {
        self.p_inv.apply(v)
    }

    /// Re-expresses every axis of a real-basis tensor in the frame.
    ///
    /// Frame vectors `n..2n` conjugate `0..n`, so for real `t` the components
    /// with a leading barred index are conjugates of unbarred ones and only
    /// half of the contraction is carried out.
    pub fn complexify(&self, t: &RealTensor, variance: &[Variance]) -> Result<ComplexTensor> {
        if variance.len() != t.rank() {
            return Err(Error::ShapeMismatch(format!("{} variances for rank {}", variance.len(), t.rank())));
        }
        if t.rank() == 0 {
            return Ok(t.to_complex());
        }
        let n = self.n;
        let dim = 2 * n;
        let p_inv_t = self.p_inv.transpose()?;
        let matrix = |v: &Variance| match v {
            Variance::Lower => &self.p,
            Variance::Upper => &p_inv_t,
        };
        let first = matrix(&variance[0]);
        let mut half_first = ComplexTensor::zeros(&[dim, n], &[IndexKind::Real, IndexKind::Complexified]);
        for a in 0..dim {
            for q in 0..n {
                half_first.set(&[a, q], first.get(&[a, q]).clone());
            }
        }
        let mut half = t.to_complex().transform_axis(0, &half_first, IndexKind::Complexified)?;
        for (axis, v) in variance.iter().enumerate().skip(1) {
            half = half.transform_axis(axis, matrix(v), IndexKind::Complexified)?;
        }
        let rank = t.rank();
        let mut out = ComplexTensor::zeros(&vec![dim; rank], &vec![IndexKind::Complexified; rank]);
        let swap = |i: usize| if i < n { i + n } else { i - n };
        for off in 0..out.data().len() {
            let idx = out.unravel(off);
            let value = if idx[0] < n {
                half.get(&idx).clone()
            } else {
                let mirrored: Vec<usize> = idx.iter().map(|&i| swap(i)).collect();
                Scalar::conj(half.get(&mirrored))
            };
            out.data_mut()[off] = value;
        }
        Ok(out)
    }

    pub fn complexify_complex(&self, t: &ComplexTensor, variance: &[Variance]) -> Result<ComplexTensor> {
        if variance.len() != t.rank() {
            return Err(Error::ShapeMismatch(format!("{} variances for rank {}", variance.len(), t.rank())));
        }
        let p_inv_t = self.p_inv.transpose()?;
        let mut out = t.clone();
        for (axis, v) in variance.iter().enumerate() {
            let m = match v {
                Variance::Lower => &self.p,
                Variance::Upper => &p_inv_t,
            };
            out = out.transform_axis(axis, m, IndexKind::Complexified)?;
        }
        Ok(out)
    }
}

/// `N(v,w) = [Jv,Jw] − J[Jv,w] − J[v,Jw] − [v,w]`.
pub fn nijenhuis<S: Scalar>(triple: &HermitianTriple, v: &[S], w: &[S]) -> Result<Vec<S>> {
    let alg = triple.algebra();
    let j = triple.j();
    let (jv, jw) = (j.apply(v), j.apply(w));
    let a = alg.bracket(&jv, &jw)?;
    let b = j.apply(&alg.bracket(&jv, w)?);
    let c = j.apply(&alg.bracket(v, &jw)?);
    let d = alg.bracket(v, w)?;
    Ok(a.into_iter()
        .zip(b)
        .zip(c)
        .zip(d)
        .map(|(((a, b), c), d)| a - b - c - d)
        .collect())
}

/// `N[b][c][d]`: component `d` of `N(X_b, X_c)`.
pub fn nijenhuis_tensor(triple: &HermitianTriple) -> RealTensor {
    let n = triple.dim();
    let mut t = RealTensor::real_zeros(&[n, n, n]);
    let basis = |i: usize| -> Vec<Rational> { (0..n).map(|k| if k == i { Rational::one() } else { Rational::zero() }).collect() };
    for b in 0..n {
        for c in b + 1..n {
            let v = nijenhuis(triple, &basis(b), &basis(c)).expect("dimensions match");
            for (d, x) in v.into_iter().enumerate() {
                if !x.is_zero() {
                    t.set(&[c, b, d], -x.clone());
                    t.set(&[b, c, d], x);
                }
            }
        }
    }
    t
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub integrable: bool,
    pub kahler: bool,
    pub almost_kahler: bool,
    pub quasi_kahler: bool,
}

/// `(dω)^{1,2} = 0`, `dω = 0`, `N = 0`.
pub fn classify(triple: &HermitianTriple) -> Classification {
    classify_with(triple, &nijenhuis_tensor(triple))
}

/// [`classify`] with a precomputed Nijenhuis tensor.
pub fn classify_with(triple: &HermitianTriple, n_tensor: &RealTensor) -> Classification {
    let domega = exterior_derivative(triple.algebra(), &triple.omega_form()).expect("degree 2 < dim");
    let almost_kahler = domega.is_zero();
    let quasi_kahler = almost_kahler || pq_decompose(triple.j(), &domega)[&(1, 2)].is_zero();
    let integrable = n_tensor.is_zero();
    Classification { integrable, kahler: almost_kahler && integrable, almost_kahler, quasi_kahler }
}

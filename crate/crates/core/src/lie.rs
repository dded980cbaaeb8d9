//! Real Lie algebras given by structure constants.
//!
//! Constants are stored as a rank-3 tensor with axes `(a, b, k)`:
//! `[X_a, X_b] = Σ_k c[a][b][k] X_k`. Complexified brackets are evaluated on
//! demand by bilinearity.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{invert_matrix, row_reduce};
use crate::scalar::{Rational, Scalar};
use crate::tensor::{IndexKind, RealTensor, Tensor};

#[derive(Clone, Debug, PartialEq)]
pub struct LieAlgebra {
    dim: usize,
    c: RealTensor,
    /// Nonzero `(a, b, k, c^k_ab)` for `a ≠ b`, both orders.
    sparse: Vec<(usize, usize, usize, Rational)>,
}

/// One failure of the Jacobi identity on a basis triple.
#[derive(Clone, Debug, PartialEq)]
pub struct JacobiDefect {
    pub triple: (usize, usize, usize),
    pub defect: Vec<Rational>,
}

impl LieAlgebra {
    /// Validates antisymmetry and the Jacobi identity.
    pub fn new(c: RealTensor) -> Result<Self> {
        let d = c.dims();
        if d.len() != 3 || d[0] != d[1] || d[1] != d[2] || d[0] == 0 {
            return Err(Error::ShapeMismatch(format!("structure constants must be n×n×n, got {d:?}")));
        }
        if let Some(bad) = jacobi_check(&c)?.first() {
            let (a, b, e) = bad.triple;
            return Err(Error::JacobiViolation(a, b, e));
        }
        Ok(Self::new_unchecked(c))
    }

    fn new_unchecked(c: RealTensor) -> Self {
        let dim = c.dims()[0];
        let sparse = c.nonzero_entries().map(|(i, v)| (i[0], i[1], i[2], v.clone())).collect();
        LieAlgebra { dim, c, sparse }
    }

    /// Builds from `[X_a, X_b] += v X_k` entries (0-based, `a ≠ b`); the
    /// antisymmetric partner is filled in.
    pub fn from_brackets(dim: usize, entries: &[(usize, usize, usize, Rational)]) -> Result<Self> {
        let mut c = RealTensor::real_zeros(&[dim, dim, dim]);
        for (a, b, k, v) in entries {
            if a == b {
                return Err(Error::NotAntisymmetric { a: *a, b: *b, k: *k });
            }
            *c.get_mut(&[*a, *b, *k]) += v;
            *c.get_mut(&[*b, *a, *k]) -= v;
        }
        Self::new(c)
    }

    pub fn abelian(dim: usize) -> Self {
        Self::new_unchecked(RealTensor::real_zeros(&[dim, dim, dim]))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn structure_constants(&self) -> &RealTensor {
        &self.c
    }

    pub fn is_abelian(&self) -> bool {
        self.sparse.is_empty()
    }

    /// Nonzero constants `(a, b, k, value)`, both orders of each pair.
    pub fn nonzero_constants(&self) -> &[(usize, usize, usize, Rational)] {
        &self.sparse
    }

    /// `[v, w]^k = Σ c^k_ab v^a w^b`, bilinear over real or complex entries.
    pub fn bracket<S: Scalar>(&self, v: &[S], w: &[S]) -> Result<Vec<S>> {
        if v.len() != self.dim || w.len() != self.dim {
            return Err(Error::ShapeMismatch(format!(
                "bracket of vectors of length {} and {} in dimension {}",
                v.len(),
                w.len(),
                self.dim
            )));
        }
        let mut out = vec![S::zero(); self.dim];
        for (a, b, k, c) in &self.sparse {
            if v[*a].is_zero() || w[*b].is_zero() {
                continue;
            }
            out[*k] += &v[*a].mul_ref(&w[*b]).mul_real(c);
        }
        Ok(out)
    }

    /// Structure constants in the frame whose `a`-th vector is column `a` of
    /// `frame`.
    pub fn change_frame<S: Scalar>(&self, frame: &FrameChange<S>) -> Result<Tensor<S>> {
        if frame.matrix.dims()[0] != self.dim {
            return Err(Error::ShapeMismatch(format!(
                "frame of size {:?} for dimension {}",
                frame.matrix.dims(),
                self.dim
            )));
        }
        let c = self.c.map(S::from_rational);
        let kind = frame.kind;
        let inv_t = frame.inverse.transpose()?;
        c.transform_axis(0, &frame.matrix, kind)?
            .transform_axis(1, &frame.matrix, kind)?
            .transform_axis(2, &inv_t, kind)
    }

    /// The same algebra described in a real frame.
    pub fn in_real_frame(&self, frame: &FrameChange<Rational>) -> Result<LieAlgebra> {
        Ok(Self::new_unchecked(self.change_frame(frame)?))
    }

    /// Smallest `s` with `C^{s+1} = 0` in the lower central series, or `None`
    /// when the series stabilizes at a nonzero ideal.
    pub fn nilpotency_step(&self) -> Option<usize> {
        let n = self.dim;
        let mut current: Vec<Vec<Rational>> = (0..n)
            .map(|i| (0..n).map(|j| Rational::from_integer(((i == j) as i64).into())).collect())
            .collect();
        let mut step = 0;
        loop {
            if current.is_empty() {
                return Some(step);
            }
            step += 1;
            let mut next = Vec::new();
            for a in 0..n {
                let mut e = vec![Rational::zero(); n];
                e[a] = Rational::from_integer(1.into());
                for v in &current {
                    let b = self.bracket(&e, v).expect("dimensions match");
                    if b.iter().any(|x| !x.is_zero()) {
                        next.push(b);
                    }
                }
            }
            let pivots = row_reduce(&mut next);
            next.truncate(pivots.len());
            if !next.is_empty() && next.len() == current.len() {
                return None;
            }
            current = next;
        }
    }
}

/// Reports every basis triple `a < b < d` where the cyclic sum
/// `[[X_a,X_b],X_d] + [[X_b,X_d],X_a] + [[X_d,X_a],X_b]` is nonzero.
pub fn jacobi_check(c: &RealTensor) -> Result<Vec<JacobiDefect>> {
    let n = c.dims()[0];
    for a in 0..n {
        for b in a..n {
            for k in 0..n {
                let x = c.get(&[a, b, k]);
                let y = c.get(&[b, a, k]);
                if x + y != Rational::zero() {
                    return Err(Error::NotAntisymmetric { a, b, k });
                }
            }
        }
    }
    // [[X_a,X_b],X_d]^k = Σ_m c[a][b][m] c[m][d][k]
    let nested = |a: usize, b: usize, d: usize, k: usize| -> Rational {
        (0..n)
            .filter(|&m| !c.get(&[a, b, m]).is_zero())
            .map(|m| c.get(&[a, b, m]) * c.get(&[m, d, k]))
            .sum()
    };
    let mut defects = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for d in b + 1..n {
                let defect: Vec<Rational> =
                    (0..n).map(|k| nested(a, b, d, k) + nested(b, d, a, k) + nested(d, a, b, k)).collect();
                if defect.iter().any(|x| !x.is_zero()) {
                    defects.push(JacobiDefect { triple: (a, b, d), defect });
                }
            }
        }
    }
    Ok(defects)
}

/// An invertible change of basis; column `a` holds the coordinates of the
/// new `a`-th basis vector in the old basis.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameChange<S> {
    matrix: Tensor<S>,
    inverse: Tensor<S>,
    kind: IndexKind,
}

impl<S: Scalar> FrameChange<S> {
    pub fn new(matrix: Tensor<S>, kind: IndexKind) -> Result<Self> {
        let inverse = invert_matrix(&matrix)?;
        Ok(FrameChange { matrix, inverse, kind })
    }

    pub fn matrix(&self) -> &Tensor<S> {
        &self.matrix
    }

    pub fn inverse(&self) -> &Tensor<S> {
        &self.inverse
    }

    pub fn kind(&self) -> IndexKind {
        self.kind
    }

    /// Coordinates of `v` (old basis) in the new basis.
    pub fn coordinates(&self, v: &[S]) -> Vec<S> {
        self.inverse.apply(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::scalar::{gauss, rat, GaussianRational};
    use proptest::prelude::*;

    fn e(n: usize, i: usize) -> Vec<Rational> {
        (0..n).map(|j| rat((i == j) as i64)).collect()
    }

    #[test]
    fn iwasawa_bracket_x1_x2() {
        let alg = fixtures::iwasawa_algebra();
        assert_eq!(alg.bracket(&e(6, 0), &e(6, 1)).unwrap(), e(6, 2));
    }

    #[test]
    fn iwasawa_complexified_bracket() {
        let alg = fixtures::iwasawa_algebra();
        // Z_i = X_i − i X_{i+3}
        let z = |i: usize| -> Vec<GaussianRational> {
            (0..6)
                .map(|j| if j == i { gauss(1, 0) } else if j == i + 3 { gauss(0, -1) } else { gauss(0, 0) })
                .collect()
        };
        let zbar3: Vec<GaussianRational> = z(2).iter().map(|x| x.conj()).collect();
        let two_zbar3: Vec<GaussianRational> = zbar3.iter().map(|x| x * gauss(2, 0)).collect();
        assert_eq!(alg.bracket(&z(0), &z(1)).unwrap(), two_zbar3);
    }

    #[test]
    fn abelian_brackets_vanish() {
        let alg = LieAlgebra::abelian(4);
        let v = vec![rat(1), rat(2), rat(3), rat(4)];
        let w = vec![rat(-1), rat(0), rat(5), rat(2)];
        assert!(alg.bracket(&v, &w).unwrap().iter().all(Zero::is_zero));
        assert_eq!(alg.nilpotency_step(), Some(1));
    }

    #[test]
    fn jacobi_passes_on_iwasawa_and_zero() {
        assert!(jacobi_check(fixtures::iwasawa_algebra().structure_constants()).unwrap().is_empty());
        assert!(jacobi_check(&RealTensor::real_zeros(&[4, 4, 4])).unwrap().is_empty());
    }

    #[test]
    fn jacobi_violation_in_dimension_three() {
        // [X1,X2]=X1, [X2,X3]=X2, [X3,X1]=X3: the cyclic sum expands by hand to
        // [X1,X3] + [X2,X1] + [X3,X2] = −X3 − X1 − X2.
        let mut c = RealTensor::real_zeros(&[3, 3, 3]);
        for (a, b, k) in [(0, 1, 0), (1, 2, 1), (2, 0, 2)] {
            c.set(&[a, b, k], rat(1));
            c.set(&[b, a, k], rat(-1));
        }
        let defects = jacobi_check(&c).unwrap();
        assert_eq!(defects, vec![JacobiDefect { triple: (0, 1, 2), defect: vec![rat(-1); 3] }]);
        assert_eq!(LieAlgebra::new(c).unwrap_err(), Error::JacobiViolation(0, 1, 2));
    }

    #[test]
    fn nonantisymmetric_constants_are_rejected() {
        let mut c = RealTensor::real_zeros(&[2, 2, 2]);
        c.set(&[0, 0, 1], rat(1));
        assert!(matches!(jacobi_check(&c), Err(Error::NotAntisymmetric { .. })));
    }

    #[test]
    fn nilpotency_steps() {
        assert_eq!(fixtures::iwasawa_algebra().nilpotency_step(), Some(2));
        // [X1,X2]=X2 spans a derived ideal that never shrinks.
        let solvable = LieAlgebra::from_brackets(3, &[(0, 1, 1, rat(1))]).unwrap();
        assert_eq!(solvable.nilpotency_step(), None);
        // Filiform-like: [X1,X2]=X3, [X1,X3]=X4 is 3-step.
        let three = LieAlgebra::from_brackets(4, &[(0, 1, 2, rat(1)), (0, 2, 3, rat(1))]).unwrap();
        assert_eq!(three.nilpotency_step(), Some(3));
    }

    #[test]
    fn identity_and_permutation_frames() {
        let alg = fixtures::iwasawa_algebra();
        let id = FrameChange::new(RealTensor::identity(6), IndexKind::Real).unwrap();
        assert_eq!(alg.in_real_frame(&id).unwrap(), alg);
        // Swap X1 <-> X2: [Y2, Y1] = [X1, X2] = X3 = Y3.
        let mut p = RealTensor::real_zeros(&[6, 6]);
        for (i, j) in [(0, 1), (1, 0), (2, 2), (3, 3), (4, 4), (5, 5)] {
            p.set(&[i, j], rat(1));
        }
        let swapped = alg.in_real_frame(&FrameChange::new(p, IndexKind::Real).unwrap()).unwrap();
        assert_eq!(swapped.bracket(&e(6, 1), &e(6, 0)).unwrap(), e(6, 2));
    }

    fn arb_invertible() -> impl Strategy<Value = RealTensor> {
        proptest::collection::vec(-3i64..=3, 36).prop_filter_map("singular", |v| {
            let rows: Vec<Vec<Rational>> = v.chunks(6).map(|r| r.iter().map(|&x| rat(x)).collect()).collect();
            let m = Tensor::from_rows(&rows).unwrap();
            invert_matrix(&m).ok().map(|_| m)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn bracket_bilinear_antisymmetric(
            v in proptest::collection::vec(-4i64..4, 6),
            w in proptest::collection::vec(-4i64..4, 6),
            u in proptest::collection::vec(-4i64..4, 6),
            s in -3i64..3,
        ) {
            let alg = fixtures::iwasawa_alt_algebra();
            let (v, w, u): (Vec<Rational>, Vec<Rational>, Vec<Rational>) = (
                v.into_iter().map(rat).collect(), w.into_iter().map(rat).collect(), u.into_iter().map(rat).collect());
            let vw = alg.bracket(&v, &w).unwrap();
            let wv = alg.bracket(&w, &v).unwrap();
            prop_assert!(vw.iter().zip(&wv).all(|(a, b)| (a + b).is_zero()));
            let sv_u: Vec<Rational> = v.iter().zip(&u).map(|(a, b)| a * rat(s) + b).collect();
            let lhs = alg.bracket(&sv_u, &w).unwrap();
            let uw = alg.bracket(&u, &w).unwrap();
            let rhs: Vec<Rational> = vw.iter().zip(&uw).map(|(a, b)| a * rat(s) + b).collect();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn frame_change_roundtrip_and_step_invariance(p in arb_invertible()) {
            let alg = fixtures::iwasawa_algebra();
            let f = FrameChange::new(p.clone(), IndexKind::Real).unwrap();
            let moved = alg.in_real_frame(&f).unwrap();
            prop_assert!(jacobi_check(moved.structure_constants()).unwrap().is_empty());
            prop_assert_eq!(moved.nilpotency_step(), Some(2));
            let back = FrameChange::new(f.inverse().clone(), IndexKind::Real).unwrap();
            prop_assert_eq!(moved.in_real_frame(&back).unwrap(), alg);
        }
    }
}

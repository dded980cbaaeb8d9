//! Exact linear algebra over [`Scalar`] fields: elimination, rank, kernels,
//! inverses, linear solves with inconsistency certificates.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};
use crate::tensor::Tensor;

/// Reduced row echelon form; returns the pivot column of each nonzero row.
pub fn row_reduce<S: Scalar>(rows: &mut [Vec<S>]) -> Vec<usize> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = S::one() / &rows[r][c];
        for x in rows[r].iter_mut() {
            if !x.is_zero() {
                *x = x.mul_ref(&inv);
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &y.mul_ref(&f);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<S: Scalar>(rows: &[Vec<S>]) -> usize {
    let mut m = rows.to_vec();
    row_reduce(&mut m).len()
}

/// Basis of `{x : A x = 0}` for `A` given by rows with `ncols` columns.
pub fn nullspace<S: Scalar>(rows: &[Vec<S>], ncols: usize) -> Vec<Vec<S>> {
    let mut m = rows.to_vec();
    let pivots = row_reduce(&mut m);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![S::zero(); ncols];
            v[f] = S::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m[r][f].clone();
            }
            v
        })
        .collect()
}

/// Outcome of an exact linear solve `A x = b`.
#[derive(Clone, Debug, PartialEq)]
pub enum LinearSolution<S> {
    /// A particular solution (free variables set to zero).
    Solution(Vec<S>),
    /// `y` with `yᵀA = 0` and `yᵀb ≠ 0`.
    Inconsistent { certificate: Vec<S> },
}

pub fn solve<S: Scalar>(a: &[Vec<S>], b: &[S]) -> Result<LinearSolution<S>> {
    let m = a.len();
    if b.len() != m {
        return Err(Error::ShapeMismatch(format!("{m} equations, {} right-hand sides", b.len())));
    }
    let n = a.first().map_or(0, Vec::len);
    // Augment with [b | I] so the row operations are tracked for the certificate.
    let mut aug: Vec<Vec<S>> = a
        .iter()
        .zip(b)
        .enumerate()
        .map(|(i, (row, bi))| {
            let mut r = row.clone();
            r.push(bi.clone());
            r.extend((0..m).map(|j| if i == j { S::one() } else { S::zero() }));
            r
        })
        .collect();
    // Eliminate on the coefficient block only.
    let mut r = 0;
    let mut pivots = Vec::new();
    for c in 0..n {
        let Some(p) = (r..m).find(|&i| !aug[i][c].is_zero()) else {
            continue;
        };
        aug.swap(r, p);
        let inv = S::one() / &aug[r][c];
        for x in aug[r].iter_mut() {
            if !x.is_zero() {
                *x = x.mul_ref(&inv);
            }
        }
        let pivot_row = aug[r].clone();
        for (i, row) in aug.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &y.mul_ref(&f);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m {
            break;
        }
    }
    for row in &aug[r..] {
        if !row[n].is_zero() {
            return Ok(LinearSolution::Inconsistent { certificate: row[n + 1..].to_vec() });
        }
    }
    let mut x = vec![S::zero(); n];
    for (i, &p) in pivots.iter().enumerate() {
        x[p] = aug[i][n].clone();
    }
    Ok(LinearSolution::Solution(x))
}

pub fn invert_matrix<S: Scalar>(m: &Tensor<S>) -> Result<Tensor<S>> {
    if m.rank() != 2 || m.dims()[0] != m.dims()[1] {
        return Err(Error::ShapeMismatch(format!("invert_matrix needs a square matrix, got {:?}", m.dims())));
    }
    let n = m.dims()[0];
    let mut aug: Vec<Vec<S>> = m
        .rows()
        .into_iter()
        .enumerate()
        .map(|(i, mut r)| {
            r.extend((0..n).map(|j| if i == j { S::one() } else { S::zero() }));
            r
        })
        .collect();
    let pivots = row_reduce(&mut aug);
    if pivots.len() < n || pivots[n - 1] >= n {
        return Err(Error::Singular);
    }
    let rows: Vec<Vec<S>> = aug.into_iter().map(|r| r[n..].to_vec()).collect();
    Ok(Tensor::from_rows(&rows)?.with_kinds(&[m.kinds()[1], m.kinds()[0]]))
}

pub fn determinant<S: Scalar>(m: &Tensor<S>) -> Result<S> {
    if m.rank() != 2 || m.dims()[0] != m.dims()[1] {
        return Err(Error::ShapeMismatch("determinant needs a square matrix".into()));
    }
    let n = m.dims()[0];
    let mut a = m.rows();
    let mut det = S::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Ok(S::zero());
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det = det * &a[c][c];
        let inv = S::one() / &a[c][c];
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].mul_ref(&inv);
            let pivot_row = a[c].clone();
            for (x, y) in a[i].iter_mut().zip(&pivot_row).skip(c) {
                *x -= &y.mul_ref(&f);
            }
        }
    }
    Ok(det)
}

/// Index of the first leading principal minor that is not positive, or
/// `None` when the symmetric matrix is positive definite.
pub fn first_nonpositive_minor(m: &Tensor<Rational>) -> Option<usize> {
    let n = m.dims()[0];
    let mut a = m.rows();
    // Elimination without pivoting: the k-th pivot is minor_k / minor_{k-1}.
    for k in 0..n {
        if !a[k][k].is_positive() {
            return Some(k + 1);
        }
        let inv = a[k][k].recip();
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] * &inv;
            let pivot_row = a[k].clone();
            for (x, y) in a[i].iter_mut().zip(&pivot_row).skip(k) {
                *x -= y * &f;
            }
        }
    }
    None
}

pub fn is_positive_definite(m: &Tensor<Rational>) -> bool {
    first_nonpositive_minor(m).is_none()
}

pub fn is_identity<S: Scalar>(m: &Tensor<S>) -> bool {
    let n = m.dims()[0];
    m.rank() == 2
        && m.dims()[1] == n
        && (0..n).all(|i| (0..n).all(|j| *m.get(&[i, j]) == if i == j { S::one() } else { S::zero() }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{frac, rat};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn m(rows: &[&[i64]]) -> Tensor<Rational> {
        Tensor::from_rows(&rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect::<Vec<_>>())
            .unwrap()
    }

    #[test]
    fn identity_inverts_to_itself() {
        let id: Tensor<Rational> = Tensor::identity(6);
        assert_eq!(invert_matrix(&id).unwrap(), id);
    }

    #[test]
    fn diagonal_inverse() {
        let d = Tensor::diag(&[rat(2), rat(2)]);
        assert_eq!(invert_matrix(&d).unwrap(), Tensor::diag(&[frac(1, 2), frac(1, 2)]));
    }

    #[test]
    fn singular_matrix_is_rejected() {
        assert_eq!(invert_matrix(&m(&[&[1, 2], &[2, 4]])), Err(Error::Singular));
        assert!(determinant(&m(&[&[1, 2], &[2, 4]])).unwrap().is_zero());
    }

    #[test]
    fn random_inverses_multiply_back_to_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut checked = 0;
        while checked < 1000 {
            let n = 4;
            let rows: Vec<Vec<Rational>> = (0..n)
                .map(|_| (0..n).map(|_| frac(rng.random_range(-4..=4), rng.random_range(1..=3))).collect())
                .collect();
            let a = Tensor::from_rows(&rows).unwrap();
            if determinant(&a).unwrap().is_zero() {
                assert_eq!(invert_matrix(&a), Err(Error::Singular));
                continue;
            }
            let inv = invert_matrix(&a).unwrap();
            assert!(is_identity(&a.matmul(&inv).unwrap()));
            assert!(is_identity(&inv.matmul(&a).unwrap()));
            checked += 1;
        }
    }

    #[test]
    fn nullspace_and_rank() {
        let a = vec![vec![rat(1), rat(2), rat(3)], vec![rat(2), rat(4), rat(6)]];
        assert_eq!(rank(&a), 1);
        let ns = nullspace(&a, 3);
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!((0..2).all(|i| (0..3).map(|j| &a[i][j] * &v[j]).sum::<Rational>().is_zero()));
        }
    }

    #[test]
    fn inconsistent_system_yields_certificate() {
        let a = vec![vec![rat(1), rat(1)], vec![rat(2), rat(2)]];
        let b = vec![rat(1), rat(3)];
        let LinearSolution::Inconsistent { certificate: y } = solve(&a, &b).unwrap() else {
            panic!("expected inconsistency");
        };
        for j in 0..2 {
            assert!((0..2).map(|i| &y[i] * &a[i][j]).sum::<Rational>().is_zero());
        }
        assert!(!(0..2).map(|i| &y[i] * &b[i]).sum::<Rational>().is_zero());
    }

    #[test]
    fn consistent_system_is_solved() {
        let a = vec![vec![rat(1), rat(1)], vec![rat(1), rat(-1)]];
        let b = vec![rat(3), rat(1)];
        assert_eq!(solve(&a, &b).unwrap(), LinearSolution::Solution(vec![rat(2), rat(1)]));
    }

    #[test]
    fn positive_definiteness_by_minors() {
        assert!(is_positive_definite(&m(&[&[2, 1], &[1, 2]])));
        assert_eq!(first_nonpositive_minor(&m(&[&[1, 2], &[2, 1]])), Some(2));
        assert_eq!(first_nonpositive_minor(&m(&[&[-1, 0], &[0, 1]])), Some(1));
    }
}

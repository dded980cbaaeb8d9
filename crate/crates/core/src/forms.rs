//! Left-invariant exterior forms: the Chevalley–Eilenberg differential and the
//! `(p,q)` type decomposition.
//!
//! A `p`-form is stored densely as a fully antisymmetric rank-`p` tensor over
//! the real dual basis, with `α_1∧α_2(X_1,X_2) = 1`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::hermitian::AlmostComplexStructure;
use crate::lie::LieAlgebra;
use crate::scalar::{frac, GaussianRational, Rational, Scalar};
use crate::tensor::{ComplexTensor, IndexKind, RealTensor, Tensor, MAX_RANK};

#[derive(Clone, Debug, PartialEq)]
pub struct InvariantForm {
    degree: usize,
    dim: usize,
    t: ComplexTensor,
}

/// Every permutation of `0..k` with its sign.
pub fn permutations(k: usize) -> Vec<(Vec<usize>, i64)> {
    fn go(prefix: &mut Vec<usize>, left: &mut Vec<usize>, sign: i64, out: &mut Vec<(Vec<usize>, i64)>) {
        if left.is_empty() {
            out.push((prefix.clone(), sign));
            return;
        }
        for i in 0..left.len() {
            let x = left.remove(i);
            prefix.push(x);
            // Moving the i-th remaining element to the front costs i transpositions.
            go(prefix, left, if i % 2 == 0 { sign } else { -sign }, out);
            prefix.pop();
            left.insert(i, x);
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut (0..k).collect(), 1, &mut out);
    out
}

/// Strictly increasing `k`-tuples from `0..n`.
pub fn increasing_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Sorts `idx` in place; returns the permutation sign, or 0 on a repeat.
fn sort_sign(idx: &mut [usize]) -> i64 {
    let mut sign = 1;
    for i in 0..idx.len() {
        for j in 0..idx.len() - 1 - i {
            if idx[j] == idx[j + 1] {
                return 0;
            }
            if idx[j] > idx[j + 1] {
                idx.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        0
    } else {
        sign
    }
}

impl InvariantForm {
    pub fn zero(degree: usize, dim: usize) -> Self {
        assert!(degree <= MAX_RANK);
        InvariantForm { degree, dim, t: ComplexTensor::zeros(&vec![dim; degree], &vec![IndexKind::Real; degree]) }
    }

    /// Validates full antisymmetry.
    pub fn from_tensor(degree: usize, t: ComplexTensor) -> Result<Self> {
        if t.rank() != degree || t.dims().windows(2).any(|w| w[0] != w[1]) {
            return Err(Error::ShapeMismatch(format!("degree {degree} form from tensor {:?}", t.dims())));
        }
        let dim = t.dims().first().copied().unwrap_or(0);
        let form = InvariantForm { degree, dim, t };
        if degree >= 2 {
            for o in 0..form.t.data().len() {
                let idx = form.t.unravel(o);
                let mut sorted = idx.clone();
                let s = sort_sign(&mut sorted);
                let v = &form.t.data()[o];
                let expect = match s {
                    0 => GaussianRational::zero(),
                    1 => form.t.get(&sorted).clone(),
                    _ => -form.t.get(&sorted).clone(),
                };
                if *v != expect {
                    return Err(Error::FormNotAntisymmetric(idx[0], idx[1]));
                }
            }
        }
        Ok(form)
    }

    pub fn from_real(degree: usize, t: RealTensor) -> Result<Self> {
        Self::from_tensor(degree, t.to_complex())
    }

    /// `Σ coeff · α_{i_1}∧…∧α_{i_p}` over the given (0-based) index lists.
    pub fn from_terms(degree: usize, dim: usize, terms: &[(Vec<usize>, GaussianRational)]) -> Result<Self> {
        let mut form = Self::zero(degree, dim);
        for (idx, c) in terms {
            if idx.len() != degree || idx.iter().any(|&i| i >= dim) {
                return Err(Error::ShapeMismatch(format!("term {idx:?} in a degree {degree} form on dimension {dim}")));
            }
            let mut sorted = idx.clone();
            let s = sort_sign(&mut sorted);
            if s == 0 {
                continue;
            }
            let c = if s == 1 { c.clone() } else { -c.clone() };
            form.add_elementary(&sorted, &c);
        }
        Ok(form)
    }

    /// Adds `c` times the elementary form on the increasing tuple `idx`.
    fn add_elementary(&mut self, idx: &[usize], c: &GaussianRational) {
        for (perm, sign) in permutations(idx.len()) {
            let p: Vec<usize> = perm.iter().map(|&k| idx[k]).collect();
            let slot = self.t.get_mut(&p);
            if sign == 1 {
                *slot += c;
            } else {
                *slot -= c;
            }
        }
    }

    /// The 1-form with the given values on the real basis.
    pub fn one_form(values: &[GaussianRational]) -> Self {
        let t = Tensor::from_vec(&[values.len()], &[IndexKind::Real], values.to_vec()).expect("rank 1");
        InvariantForm { degree: 1, dim: values.len(), t }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn tensor(&self) -> &ComplexTensor {
        &self.t
    }

    pub fn is_zero(&self) -> bool {
        self.t.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.t.data().iter().all(|z| z.im.is_zero())
    }

    /// Value on basis vectors `X_{i_1}, …, X_{i_p}`.
    pub fn component(&self, idx: &[usize]) -> &GaussianRational {
        self.t.get(idx)
    }

    /// Nonzero coefficients on increasing index tuples.
    pub fn terms(&self) -> BTreeMap<Vec<usize>, GaussianRational> {
        increasing_tuples(self.dim, self.degree)
            .into_iter()
            .filter_map(|idx| {
                let v = self.t.get(&idx);
                (!v.is_zero()).then(|| (idx, v.clone()))
            })
            .collect()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.degree != other.degree {
            return Err(Error::ShapeMismatch(format!("degrees {} and {}", self.degree, other.degree)));
        }
        Ok(InvariantForm { degree: self.degree, dim: self.dim, t: self.t.add(&other.t)? })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-GaussianRational::one()))
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        InvariantForm { degree: self.degree, dim: self.dim, t: self.t.scale(c) }
    }

    pub fn conj(&self) -> Self {
        InvariantForm { degree: self.degree, dim: self.dim, t: self.t.map(Scalar::conj) }
    }

    /// `(φ∧ψ)(X_I) = Σ_{shuffles} sign · φ(X_S) ψ(X_{I∖S})`.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        let (p, q) = (self.degree, other.degree);
        if p + q > MAX_RANK || self.dim != other.dim {
            return Err(Error::ShapeMismatch(format!("wedge of degrees {p} and {q}")));
        }
        let mut out = Self::zero(p + q, self.dim);
        for idx in increasing_tuples(self.dim, p + q) {
            let mut acc = GaussianRational::zero();
            for s in increasing_tuples(p + q, p) {
                let rest: Vec<usize> = (0..p + q).filter(|k| !s.contains(k)).collect();
                let mut order: Vec<usize> = s.iter().chain(&rest).copied().collect();
                let sign = sort_sign(&mut order);
                let a: Vec<usize> = s.iter().map(|&k| idx[k]).collect();
                let b: Vec<usize> = rest.iter().map(|&k| idx[k]).collect();
                let x = self.t.get(&a);
                let y = other.t.get(&b);
                if x.is_zero() || y.is_zero() {
                    continue;
                }
                let term = x.mul_ref(y);
                if sign == 1 {
                    acc += &term;
                } else {
                    acc -= &term;
                }
            }
            if !acc.is_zero() {
                out.add_elementary(&idx, &acc);
            }
        }
        Ok(out)
    }

    /// Real part as a real tensor.
    pub fn real_part(&self) -> RealTensor {
        self.t.map(|z| z.re.clone())
    }

    pub fn imag_part(&self) -> RealTensor {
        self.t.map(|z| z.im.clone())
    }
}

/// `dφ(V_0,…,V_p) = Σ_{a<b} (−1)^{a+b} φ([V_a,V_b], V_0,…,V̂_a,…,V̂_b,…,V_p)`,
/// so `dα(X,Y) = −α([X,Y])` for 1-forms.
pub fn exterior_derivative(alg: &LieAlgebra, form: &InvariantForm) -> Result<InvariantForm> {
    let p = form.degree;
    if p + 1 > MAX_RANK || p >= alg.dim() || form.dim != alg.dim() {
        return Err(Error::ShapeMismatch(format!("d of a degree {p} form on dimension {}", alg.dim())));
    }
    let n = alg.dim();
    let mut out = InvariantForm::zero(p + 1, n);
    let c = alg.structure_constants();
    let mut arg = vec![0usize; p];
    for idx in increasing_tuples(n, p + 1) {
        let mut acc = GaussianRational::zero();
        for a in 0..=p {
            for b in a + 1..=p {
                let rest: Vec<usize> = (0..=p).filter(|&k| k != a && k != b).map(|k| idx[k]).collect();
                for k in 0..n {
                    let ck = c.get(&[idx[a], idx[b], k]);
                    if ck.is_zero() {
                        continue;
                    }
                    arg[0] = k;
                    arg[1..].clone_from_slice(&rest);
                    let v = form.t.get(&arg);
                    if v.is_zero() {
                        continue;
                    }
                    let term = v.mul_real(ck);
                    if (a + b) % 2 == 0 {
                        acc += &term;
                    } else {
                        acc -= &term;
                    }
                }
            }
        }
        if !acc.is_zero() {
            out.add_elementary(&idx, &acc);
        }
    }
    Ok(out)
}

/// `½(1 − iJ)` and `½(1 + iJ)` as matrices acting on vectors.
pub fn type_projectors(j: &AlmostComplexStructure) -> (ComplexTensor, ComplexTensor) {
    let n = j.dim();
    let half = frac(1, 2);
    let mut p10 = ComplexTensor::real_zeros(&[n, n]);
    let mut p01 = ComplexTensor::real_zeros(&[n, n]);
    for a in 0..n {
        for b in 0..n {
            let id = if a == b { half.clone() } else { Rational::zero() };
            let ij = j.matrix().get(&[a, b]) * &half;
            p10.set(&[a, b], GaussianRational::new(id.clone(), -ij.clone()));
            p01.set(&[a, b], GaussianRational::new(id, ij));
        }
    }
    (p10, p01)
}

/// All `(r,s)` parts with `r + s = p`; they sum back to the form.
pub fn pq_decompose(j: &AlmostComplexStructure, form: &InvariantForm) -> BTreeMap<(usize, usize), InvariantForm> {
    let (p10, p01) = type_projectors(j);
    let p = form.degree;
    let mut out = BTreeMap::new();
    for r in 0..=p {
        let mut acc = InvariantForm::zero(p, form.dim);
        for holo in increasing_tuples(p, r) {
            let mut t = form.t.clone();
            for axis in 0..p {
                let m = if holo.contains(&axis) { &p10 } else { &p01 };
                t = t.transform_axis(axis, m, IndexKind::Real).expect("square projector");
            }
            acc.t = acc.t.add(&t).expect("same shape");
        }
        out.insert((r, p - r), acc);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::hermitian::ComplexFrame;
    use crate::scalar::{gauss, rat};
    use proptest::prelude::*;

    fn g1() -> GaussianRational {
        gauss(1, 0)
    }

    #[test]
    fn permutation_signs() {
        let perms = permutations(3);
        assert_eq!(perms.len(), 6);
        let find = |p: &[usize]| perms.iter().find(|(q, _)| q == p).unwrap().1;
        assert_eq!(find(&[0, 1, 2]), 1);
        assert_eq!(find(&[1, 0, 2]), -1);
        assert_eq!(find(&[1, 2, 0]), 1);
        assert_eq!(find(&[2, 1, 0]), -1);
    }

    #[test]
    fn wedge_of_dual_basis() {
        let a1 = InvariantForm::one_form(&[g1(), gauss(0, 0)]);
        let a2 = InvariantForm::one_form(&[gauss(0, 0), g1()]);
        let w = a1.wedge(&a2).unwrap();
        assert_eq!(w.component(&[0, 1]), &g1());
        assert_eq!(w.component(&[1, 0]), &gauss(-1, 0));
        assert!(a1.wedge(&a1).unwrap().is_zero());
    }

    #[test]
    fn one_forms_on_abelian_are_closed() {
        let alg = LieAlgebra::abelian(4);
        let a = InvariantForm::one_form(&[gauss(1, 2), gauss(3, 0), gauss(0, 0), gauss(-1, 1)]);
        assert!(exterior_derivative(&alg, &a).unwrap().is_zero());
    }

    #[test]
    fn iwasawa_alt_coframe_equations() {
        let alg = fixtures::iwasawa_alt_algebra();
        let basis = |i: usize| {
            let mut v = vec![gauss(0, 0); 6];
            v[i] = g1();
            InvariantForm::one_form(&v)
        };
        let d = |i: usize| exterior_derivative(&alg, &basis(i)).unwrap();
        assert!(d(1).is_zero());
        assert!(d(4).is_zero());
        // dα1 = dα3 = −α12 + α45 − α23 + α56
        let t = |i: usize, j: usize, c: i64| (vec![i, j], gauss(c, 0));
        let d1 = InvariantForm::from_terms(2, 6, &[t(0, 1, -1), t(3, 4, 1), t(1, 2, -1), t(4, 5, 1)]).unwrap();
        assert_eq!(d(0), d1);
        assert_eq!(d(2), d1);
        // dα4 = dα6 = −α24 + α15 − α35 + α26
        let d4 = InvariantForm::from_terms(2, 6, &[t(1, 3, -1), t(0, 4, 1), t(2, 4, -1), t(1, 5, 1)]).unwrap();
        assert_eq!(d(3), d4);
        assert_eq!(d(5), d4);
    }

    #[test]
    fn iwasawa_domega_expansion() {
        // Expanding ω0 against the bracket table by hand:
        // dω0 = −α126 + α456 − α234 + α135.
        let t = fixtures::iwasawa_g0();
        let d = exterior_derivative(t.algebra(), &t.omega_form()).unwrap();
        let tm = |idx: [usize; 3], c: i64| (idx.to_vec(), gauss(c, 0));
        let want = InvariantForm::from_terms(
            3,
            6,
            &[tm([0, 1, 5], -1), tm([3, 4, 5], 1), tm([1, 2, 3], -1), tm([0, 2, 4], 1)],
        )
        .unwrap();
        assert_eq!(d, want);
        let parts = pq_decompose(t.j(), &d);
        assert!(parts[&(1, 2)].is_zero());
        assert!(parts[&(2, 1)].is_zero());
        assert!(!parts[&(3, 0)].is_zero());
        assert!(!parts[&(0, 3)].is_zero());
        assert_eq!(parts[&(0, 3)], parts[&(3, 0)].conj());
    }

    #[test]
    fn omega_is_type_one_one() {
        let t = fixtures::kodaira_thurston();
        let parts = pq_decompose(t.j(), &t.omega_form());
        assert!(parts[&(2, 0)].is_zero());
        assert!(parts[&(0, 2)].is_zero());
        assert_eq!(parts[&(1, 1)], t.omega_form());
    }

    #[test]
    fn holomorphic_volume_is_type_three_zero() {
        let t = fixtures::iwasawa_g0();
        let f = ComplexFrame::standard(&t);
        let z: Vec<InvariantForm> = (0..3).map(|i| InvariantForm::one_form(&f.coframe(i))).collect();
        let vol = z[0].wedge(&z[1]).unwrap().wedge(&z[2]).unwrap();
        let parts = pq_decompose(t.j(), &vol);
        assert_eq!(parts[&(3, 0)], vol);
        assert!(parts.iter().filter(|(k, _)| **k != (3, 0)).all(|(_, v)| v.is_zero()));
    }

    #[test]
    fn antisymmetry_is_validated() {
        let mut t = RealTensor::real_zeros(&[2, 2]);
        t.set(&[0, 1], rat(1));
        assert!(InvariantForm::from_real(2, t.clone()).is_err());
        t.set(&[1, 0], rat(-1));
        assert!(InvariantForm::from_real(2, t).is_ok());
    }

    fn arb_form(dim: usize, degree: usize) -> impl Strategy<Value = InvariantForm> {
        let k = increasing_tuples(dim, degree).len();
        proptest::collection::vec((-3i64..=3, -3i64..=3), k).prop_map(move |cs| {
            let terms: Vec<(Vec<usize>, GaussianRational)> =
                increasing_tuples(dim, degree).into_iter().zip(cs).map(|(i, (a, b))| (i, gauss(a, b))).collect();
            InvariantForm::from_terms(degree, dim, &terms).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn d_squared_vanishes(f1 in arb_form(6, 1), f2 in arb_form(6, 2)) {
            for alg in [fixtures::iwasawa_algebra(), fixtures::iwasawa_alt_algebra()] {
                let dd1 = exterior_derivative(&alg, &exterior_derivative(&alg, &f1).unwrap()).unwrap();
                prop_assert!(dd1.is_zero());
                let dd2 = exterior_derivative(&alg, &exterior_derivative(&alg, &f2).unwrap()).unwrap();
                prop_assert!(dd2.is_zero());
            }
        }

        #[test]
        fn type_parts_sum_back(f in arb_form(6, 3)) {
            let t = fixtures::iwasawa_alt();
            let parts = pq_decompose(t.j(), &f);
            let mut sum = InvariantForm::zero(3, 6);
            for v in parts.values() { sum = sum.add(v).unwrap(); }
            prop_assert_eq!(sum, f);
        }

        #[test]
        fn differential_of_type_two_zero_has_no_zero_three_part(f in arb_form(6, 2)) {
            let t = fixtures::iwasawa_alt();
            let f20 = pq_decompose(t.j(), &f)[&(2, 0)].clone();
            let parts = pq_decompose(t.j(), &exterior_derivative(t.algebra(), &f20).unwrap());
            prop_assert!(parts[&(0, 3)].is_zero());
        }
    }
}

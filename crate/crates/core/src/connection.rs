//! Levi-Civita and canonical Hermitian connections of left-invariant metrics,
//! torsion, and covariant derivatives of constant tensor fields.
//!
//! `Γ[a][b][c]` is the `c`-th component of `∇_{X_a} X_b`.

use std::str::FromStr;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::forms::exterior_derivative;
use crate::hermitian::{nijenhuis_tensor, ComplexFrame, HermitianTriple, Variance};
use crate::lie::LieAlgebra;
use crate::scalar::{frac, rat, GaussianRational, Rational, Scalar};
use crate::tensor::{ComplexTensor, IndexKind, RealTensor, MAX_RANK};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConnectionFlavor {
    LeviCivita,
    Canonical,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Connection {
    gamma: RealTensor,
    flavor: ConnectionFlavor,
    /// False when the canonical formula was applied outside the quasi-Kähler class.
    canonical: bool,
}

impl Connection {
    pub fn from_gamma(gamma: RealTensor, flavor: ConnectionFlavor) -> Self {
        Connection { gamma, flavor, canonical: flavor == ConnectionFlavor::Canonical }
    }

    pub fn gamma(&self) -> &RealTensor {
        &self.gamma
    }

    pub fn flavor(&self) -> ConnectionFlavor {
        self.flavor
    }

    /// Whether this is the unique Hermitian connection with vanishing
    /// `(1,1)`-torsion (always false for the Levi-Civita flavor).
    pub fn is_canonical(&self) -> bool {
        self.canonical
    }

    pub fn dim(&self) -> usize {
        self.gamma.dims()[0]
    }

    /// `Γ_a` as an endomorphism: `(Γ_a)[c][b] = Γ[a][b][c]`.
    pub fn matrix(&self, a: usize) -> RealTensor {
        let n = self.dim();
        let mut m = RealTensor::real_zeros(&[n, n]);
        for b in 0..n {
            for c in 0..n {
                m.set(&[c, b], self.gamma.get(&[a, b, c]).clone());
            }
        }
        m
    }

    /// `∇_u v` for constant fields `u`, `v`.
    pub fn nabla<S: Scalar>(&self, u: &[S], v: &[S]) -> Vec<S> {
        let n = self.dim();
        let mut out = vec![S::zero(); n];
        for (a, ua) in u.iter().enumerate() {
            if ua.is_zero() {
                continue;
            }
            for (b, vb) in v.iter().enumerate() {
                if vb.is_zero() {
                    continue;
                }
                let w = ua.mul_ref(vb);
                for (c, o) in out.iter_mut().enumerate() {
                    let g = self.gamma.get(&[a, b, c]);
                    if !g.is_zero() {
                        *o += &w.mul_real(g);
                    }
                }
            }
        }
        out
    }

    /// Coefficients in a complex frame: `∇_{F_a} F_b = Σ_c Γ[a][b][c] F_c`.
    pub fn in_frame(&self, frame: &ComplexFrame) -> ComplexTensor {
        frame
            .complexify(&self.gamma, &[Variance::Lower, Variance::Lower, Variance::Upper])
            .expect("rank 3")
    }
}

/// `2g(∇_a X_b, X_u) = g([a,b],u) − g([b,u],a) + g([u,a],b)`, raised with `g⁻¹`.
pub fn levi_civita(triple: &HermitianTriple) -> Connection {
    let n = triple.dim();
    let c = triple.algebra().structure_constants();
    let g = triple.metric().matrix();
    // cl[a][b][u] = g([X_a, X_b], X_u)
    let cl = c.transform_axis(2, g, IndexKind::Real).expect("square metric");
    let half = frac(1, 2);
    let mut lowered = RealTensor::real_zeros(&[n, n, n]);
    for a in 0..n {
        for b in 0..n {
            for u in 0..n {
                let v = cl.get(&[a, b, u]) - cl.get(&[b, u, a]) + cl.get(&[u, a, b]);
                if !v.is_zero() {
                    lowered.set(&[a, b, u], v * &half);
                }
            }
        }
    }
    let gamma = lowered.transform_axis(2, triple.metric().inverse(), IndexKind::Real).expect("square metric");
    Connection::from_gamma(gamma, ConnectionFlavor::LeviCivita)
}

/// `∇̃_a = ∇_a − ½ J (∇_a J) = ½(Γ_a − J Γ_a J)`.
///
/// Marked canonical only when `quasi_kahler` holds.
pub fn canonical_connection_with(triple: &HermitianTriple, lc: &Connection, quasi_kahler: bool) -> Connection {
    let n = triple.dim();
    let j = triple.j().matrix();
    let half = frac(1, 2);
    let mut gamma = RealTensor::real_zeros(&[n, n, n]);
    for a in 0..n {
        let ga = lc.matrix(a);
        let jgj = j.matmul(&ga).and_then(|m| m.matmul(j)).expect("square");
        for b in 0..n {
            for c in 0..n {
                let v = ga.get(&[c, b]) - jgj.get(&[c, b]);
                if !v.is_zero() {
                    gamma.set(&[a, b, c], v * &half);
                }
            }
        }
    }
    Connection { gamma, flavor: ConnectionFlavor::Canonical, canonical: quasi_kahler }
}

pub fn canonical_connection(triple: &HermitianTriple, lc: &Connection) -> Connection {
    let qk = crate::hermitian::classify(triple).quasi_kahler;
    canonical_connection_with(triple, lc, qk)
}

/// `T[a][b][c]`: component `c` of `∇_a X_b − ∇_b X_a − [X_a, X_b]`.
pub fn torsion(conn: &Connection, alg: &LieAlgebra) -> RealTensor {
    let n = alg.dim();
    let c = alg.structure_constants();
    let mut t = RealTensor::real_zeros(&[n, n, n]);
    for a in 0..n {
        for b in 0..n {
            for k in 0..n {
                let v = conn.gamma.get(&[a, b, k]) - conn.gamma.get(&[b, a, k]) - c.get(&[a, b, k]);
                if !v.is_zero() {
                    t.set(&[a, b, k], v);
                }
            }
        }
    }
    t
}

/// Torsion in the frame with only the components on one `(1,0)` and one
/// `(0,1)` argument kept.
pub fn torsion_11_part(t: &RealTensor, frame: &ComplexFrame) -> ComplexTensor {
    let mut tc = frame.complexify(t, &[Variance::Lower, Variance::Lower, Variance::Upper]).expect("rank 3");
    let n = frame.n();
    for o in 0..tc.data().len() {
        let idx = tc.unravel(o);
        if (idx[0] < n) == (idx[1] < n) {
            tc.data_mut()[o] = GaussianRational::zero();
        }
    }
    tc
}

/// `g(∇_a X_b, X_c) + g(X_b, ∇_a X_c) = 0` for all basis triples.
pub fn is_metric(conn: &Connection, triple: &HermitianTriple) -> bool {
    let g = triple.metric().matrix();
    let lowered = conn.gamma.transform_axis(2, g, IndexKind::Real).expect("square metric");
    let n = conn.dim();
    (0..n).all(|a| {
        (0..n).all(|b| (0..n).all(|c| (lowered.get(&[a, b, c]) + lowered.get(&[a, c, b])).is_zero()))
    })
}

/// `∇J = 0`, i.e. `Γ_a J = J Γ_a` for every `a`.
pub fn preserves_j(conn: &Connection, triple: &HermitianTriple) -> bool {
    covariant_derivative(conn, triple, &Field::J).map(|t| t.is_zero()).unwrap_or(false)
}

/// Constant tensor fields that can be differentiated.
#[derive(Clone, Debug, PartialEq)]
pub enum Field {
    J,
    Omega,
    Metric,
    Nijenhuis,
    Vector(Vec<Rational>),
}

impl FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "J" | "j" => Ok(Field::J),
            "omega" => Ok(Field::Omega),
            "g" | "metric" => Ok(Field::Metric),
            "N" | "nijenhuis" => Ok(Field::Nijenhuis),
            other => Err(Error::UnsupportedField(other.to_string())),
        }
    }
}

/// Differentiates a constant tensor whose axes have the given variances.
/// The derivative direction becomes axis 0 of the result.
pub fn covariant_derivative_tensor(conn: &Connection, t: &RealTensor, variance: &[Variance]) -> Result<RealTensor> {
    if t.rank() + 1 > MAX_RANK {
        return Err(Error::UnsupportedField(format!("rank {} tensor", t.rank())));
    }
    if variance.len() != t.rank() {
        return Err(Error::ShapeMismatch(format!("{} variances for rank {}", variance.len(), t.rank())));
    }
    let n = conn.dim();
    let mut dims = vec![n];
    dims.extend_from_slice(t.dims());
    let mut out = RealTensor::real_zeros(&dims);
    let block: usize = t.dims().iter().product();
    for a in 0..n {
        let ga = conn.matrix(a);
        // Upper axes: Σ_m T[..m..] Γ[a][m][i] ; lower axes: −Σ_m T[..m..] Γ[a][i][m].
        let up = ga.transpose()?;
        let mut acc = RealTensor::real_zeros(t.dims());
        for (axis, v) in variance.iter().enumerate() {
            let term = match v {
                Variance::Upper => t.transform_axis(axis, &up, IndexKind::Real)?,
                Variance::Lower => t.transform_axis(axis, &ga, IndexKind::Real)?.scale(&rat(-1)),
            };
            acc = acc.add(&term)?;
        }
        out.data_mut()[a * block..(a + 1) * block].clone_from_slice(acc.data());
    }
    Ok(out)
}

pub fn covariant_derivative(conn: &Connection, triple: &HermitianTriple, field: &Field) -> Result<RealTensor> {
    use Variance::{Lower, Upper};
    match field {
        Field::J => covariant_derivative_tensor(conn, triple.j().matrix(), &[Upper, Lower]),
        Field::Omega => covariant_derivative_tensor(conn, triple.omega(), &[Lower, Lower]),
        Field::Metric => covariant_derivative_tensor(conn, triple.metric().matrix(), &[Lower, Lower]),
        Field::Nijenhuis => covariant_derivative_tensor(conn, &nijenhuis_tensor(triple), &[Lower, Lower, Upper]),
        Field::Vector(v) => {
            if v.len() != triple.dim() {
                return Err(Error::ShapeMismatch(format!("vector of length {}", v.len())));
            }
            let t = RealTensor::from_vec(&[v.len()], &[IndexKind::Real], v.clone())?;
            covariant_derivative_tensor(conn, &t, &[Upper])
        }
    }
}

/// `F(X,Y,Z,W) = g((∇_X N)(Y,Z), W)` over the real basis.
#[derive(Clone, Debug, PartialEq)]
pub struct CovariantNijenhuisDerivative {
    real: RealTensor,
}

impl CovariantNijenhuisDerivative {
    pub fn new(conn: &Connection, triple: &HermitianTriple, n_tensor: &RealTensor) -> Self {
        use Variance::{Lower, Upper};
        let dn = covariant_derivative_tensor(conn, n_tensor, &[Lower, Lower, Upper]).expect("rank 3");
        let real = dn.transform_axis(3, triple.metric().matrix(), IndexKind::Real).expect("square metric");
        CovariantNijenhuisDerivative { real }
    }

    pub fn real(&self) -> &RealTensor {
        &self.real
    }

    pub fn in_frame(&self, frame: &ComplexFrame) -> ComplexTensor {
        frame.complexify(&self.real, &[Variance::Lower; 4]).expect("rank 4")
    }
}

/// A basis triple where an identity fails, with both sides.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityDefect<S> {
    pub indices: Vec<usize>,
    pub lhs: S,
    pub rhs: S,
}

/// `2g((∇_X J)Y, Z) = dΦ(X,JY,JZ) − dΦ(X,Y,Z) + g(N(Y,Z), JX)` on every real
/// basis triple, where `Φ(X,Y) = g(X,JY) = −ω(X,Y)`; returns the first failure.
pub fn fundamental_relation_check(triple: &HermitianTriple, lc: &Connection) -> Option<IdentityDefect<Rational>> {
    use Variance::{Lower, Upper};
    let n = triple.dim();
    let g = triple.metric().matrix();
    let j = triple.j().matrix();
    let nabla_j = covariant_derivative_tensor(lc, j, &[Upper, Lower]).expect("rank 2");
    // lhs[x][z][y] = 2 Σ_c (∇_x J)[c][y] g[c][z]
    let lhs = nabla_j.transform_axis(1, g, IndexKind::Real).expect("square").scale(&rat(2));
    let domega = exterior_derivative(triple.algebra(), &triple.omega_form()).expect("degree 2").real_part().scale(&rat(-1));
    let domega_jj = domega
        .transform_axis(1, j, IndexKind::Real)
        .and_then(|t| t.transform_axis(2, j, IndexKind::Real))
        .expect("square");
    // g(N(Y,Z), JX) = Σ_d N[y][z][d] (gJ)[d][x]
    let gj = g.matmul(j).expect("square");
    let n_low = nijenhuis_tensor(triple).transform_axis(2, &gj, IndexKind::Real).expect("square");
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let l = lhs.get(&[x, z, y]).clone();
                let r = domega_jj.get(&[x, y, z]) - domega.get(&[x, y, z]) + n_low.get(&[y, z, x]);
                if l != r {
                    return Some(IdentityDefect { indices: vec![x, y, z], lhs: l, rhs: r });
                }
            }
        }
    }
    None
}

/// `∇_{conj(Z_i)} Z_j` has no `(0,1)` part, for every `i, j`.
pub fn mixed_derivatives_are_10(lc_frame: &ComplexTensor, n: usize) -> bool {
    (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| lc_frame.get(&[n + i, j, n + k]).is_zero())))
}

/// `g(∇_{Z_l} Z_i, Z_j) = ¼ g(N(Z_i, Z_j), Z_l)` for every frame triple;
/// returns the first failure as `(l, i, j)`.
pub fn holomorphic_derivative_nijenhuis_check(
    triple: &HermitianTriple,
    lc: &Connection,
    frame: &ComplexFrame,
) -> Option<IdentityDefect<GaussianRational>> {
    let n = frame.n();
    let g = triple.metric().matrix();
    let lc_low = lc.gamma.transform_axis(2, g, IndexKind::Real).expect("square");
    let lc_low = frame.complexify(&lc_low, &[Variance::Lower; 3]).expect("rank 3");
    let n_low = nijenhuis_tensor(triple).transform_axis(2, g, IndexKind::Real).expect("square");
    let n_low = frame.complexify(&n_low, &[Variance::Lower; 3]).expect("rank 3");
    let quarter = frac(1, 4);
    for l in 0..n {
        for i in 0..n {
            for j in 0..n {
                let lhs = lc_low.get(&[l, i, j]).clone();
                let rhs = n_low.get(&[i, j, l]).mul_real(&quarter);
                if lhs != rhs {
                    return Some(IdentityDefect { indices: vec![l, i, j], lhs, rhs });
                }
            }
        }
    }
    None
}

/// Pointwise frame properties used by the normal-frame curvature formulas.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FrameProperties {
    /// `∇_{conj(Z_i)} Z_j = 0`.
    pub antiholomorphic_derivatives_vanish: bool,
    /// `∇_{Z_i} Z_j` is of type `(0,1)`.
    pub holomorphic_derivatives_01: bool,
    /// `∇_{Z_i} ∇_{conj(Z_j)} Z_k = 0`.
    pub second_derivatives_vanish: bool,
}

impl FrameProperties {
    pub fn all(&self) -> bool {
        self.antiholomorphic_derivatives_vanish && self.holomorphic_derivatives_01 && self.second_derivatives_vanish
    }
}

pub fn frame_properties(lc_frame: &ComplexTensor, n: usize) -> FrameProperties {
    let m = 2 * n;
    let anti = (0..n).all(|i| (0..n).all(|j| (0..m).all(|c| lc_frame.get(&[n + i, j, c]).is_zero())));
    let holo01 = (0..n).all(|i| (0..n).all(|j| (0..n).all(|c| lc_frame.get(&[i, j, c]).is_zero())));
    // ∇_i(∇_{j̄} Z_k) = Σ_c Γ[n+j][k][c] ∇_i F_c = Σ_{c,e} Γ[n+j][k][c] Γ[i][c][e] F_e
    let second = (0..n).all(|i| {
        (0..n).all(|j| {
            (0..n).all(|k| {
                (0..m).all(|e| {
                    let mut acc = GaussianRational::zero();
                    for c in 0..m {
                        let x = lc_frame.get(&[n + j, k, c]);
                        if !x.is_zero() {
                            acc += &x.mul_ref(lc_frame.get(&[i, c, e]));
                        }
                    }
                    acc.is_zero()
                })
            })
        })
    });
    FrameProperties {
        antiholomorphic_derivatives_vanish: anti,
        holomorphic_derivatives_01: holo01,
        second_derivatives_vanish: second,
    }
}

/// `F(conj Z_i, Z_j, Z_k, conj Z_l) = 4 g([Z_j, Z_k], ∇_{conj Z_i} conj Z_l)`
/// over all frame indices; returns the first failure as `(i, j, k, l)`.
pub fn nijenhuis_derivative_frame_check(
    triple: &HermitianTriple,
    lc: &Connection,
    frame: &ComplexFrame,
    f: &CovariantNijenhuisDerivative,
) -> Option<IdentityDefect<GaussianRational>> {
    let n = frame.n();
    let m = 2 * n;
    let fc = f.in_frame(frame);
    let gc = frame.complexify(triple.metric().matrix(), &[Variance::Lower; 2]).expect("rank 2");
    let cc = frame
        .complexify(triple.algebra().structure_constants(), &[Variance::Lower, Variance::Lower, Variance::Upper])
        .expect("rank 3");
    let lcf = lc.in_frame(frame);
    let four = rat(4);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let lhs = fc.get(&[n + i, j, k, n + l]).clone();
                    let mut acc = GaussianRational::zero();
                    for a in 0..m {
                        let x = cc.get(&[j, k, a]);
                        if x.is_zero() {
                            continue;
                        }
                        for b in 0..m {
                            let y = lcf.get(&[n + i, n + l, b]);
                            if !y.is_zero() {
                                acc += &x.mul_ref(y).mul_ref(gc.get(&[a, b]));
                            }
                        }
                    }
                    let rhs = acc.mul_real(&four);
                    if lhs != rhs {
                        return Some(IdentityDefect { indices: vec![i, j, k, l], lhs, rhs });
                    }
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::scalar::gauss;

    fn frame_vec(f: &ComplexFrame, coeffs: &[(usize, i64)]) -> Vec<GaussianRational> {
        let mut v = vec![gauss(0, 0); 2 * f.n()];
        for &(a, c) in coeffs {
            v[a] = gauss(c, 0);
        }
        v
    }

    /// `∇_{Z_l} Z_i` in frame coordinates.
    fn nabla_frame(lcf: &ComplexTensor, l: usize, i: usize) -> Vec<GaussianRational> {
        (0..lcf.dims()[2]).map(|c| lcf.get(&[l, i, c]).clone()).collect()
    }

    #[test]
    fn abelian_connection_vanishes() {
        let t = fixtures::flat_torus(6);
        assert!(levi_civita(&t).gamma().is_zero());
    }

    #[test]
    fn levi_civita_is_metric_and_torsion_free() {
        for t in [fixtures::iwasawa_g0(), fixtures::iwasawa_alt(), fixtures::kodaira_thurston()] {
            let lc = levi_civita(&t);
            assert!(is_metric(&lc, &t));
            assert!(torsion(&lc, t.algebra()).is_zero());
        }
    }

    #[test]
    fn iwasawa_table_entry() {
        let t = fixtures::iwasawa_g0();
        let f = ComplexFrame::standard(&t);
        let lcf = levi_civita(&t).in_frame(&f);
        assert_eq!(nabla_frame(&lcf, 1, 0), frame_vec(&f, &[(5, -1)]));
        assert!(mixed_derivatives_are_10(&lcf, 3));
    }

    #[test]
    fn iwasawa_alt_table_entry() {
        let t = fixtures::iwasawa_alt();
        let f = ComplexFrame::standard(&t);
        let lcf = levi_civita(&t).in_frame(&f);
        assert_eq!(nabla_frame(&lcf, 0, 0), frame_vec(&f, &[(4, -2)]));
        for i in 0..3 {
            for j in 0..3 {
                assert!(nabla_frame(&lcf, 3 + i, j).iter().all(Zero::is_zero));
            }
        }
    }

    #[test]
    fn canonical_connection_on_kahler_is_levi_civita() {
        let t = fixtures::flat_torus(4);
        let lc = levi_civita(&t);
        assert_eq!(canonical_connection(&t, &lc).gamma(), lc.gamma());
    }

    #[test]
    fn canonical_connection_kills_iwasawa_frame() {
        let t = fixtures::iwasawa_g0();
        let lc = levi_civita(&t);
        let can = canonical_connection(&t, &lc);
        assert!(can.is_canonical());
        let f = ComplexFrame::standard(&t);
        let cf = can.in_frame(&f);
        for a in 0..6 {
            for j in 0..3 {
                assert!(nabla_frame(&cf, a, j).iter().all(Zero::is_zero));
            }
        }
        let tor = torsion(&can, t.algebra());
        assert!(!tor.is_zero());
        assert!(torsion_11_part(&tor, &f).is_zero());
    }

    #[test]
    fn canonical_connection_on_kodaira_thurston() {
        let t = fixtures::kodaira_thurston();
        let lc = levi_civita(&t);
        let can = canonical_connection(&t, &lc);
        assert_ne!(can.gamma(), lc.gamma());
        assert!(is_metric(&can, &t));
        assert!(preserves_j(&can, &t));
        let f = ComplexFrame::standard(&t);
        assert!(torsion_11_part(&torsion(&can, t.algebra()), &f).is_zero());
    }

    #[test]
    fn nabla_j_vanishes_on_torus() {
        let t = fixtures::flat_torus(4);
        let lc = levi_civita(&t);
        assert!(covariant_derivative(&lc, &t, &Field::J).unwrap().is_zero());
        assert_eq!("R".parse::<Field>(), Err(Error::UnsupportedField("R".into())));
    }

    #[test]
    fn almost_kahler_nabla_omega_matches_nijenhuis() {
        // (∇_v ω)(w,u) = ½ g(N(w,u), Jv), both sides assembled separately.
        let t = fixtures::kodaira_thurston();
        let lc = levi_civita(&t);
        let nw = covariant_derivative(&lc, &t, &Field::Omega).unwrap();
        let gj = t.metric().matrix().matmul(t.j().matrix()).unwrap();
        let nt = nijenhuis_tensor(&t).transform_axis(2, &gj, IndexKind::Real).unwrap();
        for v in 0..4 {
            for w in 0..4 {
                for u in 0..4 {
                    assert_eq!(nw.get(&[v, w, u]), &(nt.get(&[w, u, v]) * frac(1, 2)), "({v},{w},{u})");
                }
            }
        }
    }

    #[test]
    fn fundamental_relation_on_fixtures() {
        for name in fixtures::EXAMPLE_NAMES {
            let t = fixtures::builtin(name).unwrap();
            assert_eq!(fundamental_relation_check(&t, &levi_civita(&t)), None, "{name}");
        }
    }

    #[test]
    fn mixed_derivatives_and_nijenhuis_on_quasi_kahler_fixtures() {
        for t in [fixtures::iwasawa_g0(), fixtures::iwasawa_alt(), fixtures::kodaira_thurston()] {
            let lc = levi_civita(&t);
            let f = ComplexFrame::standard(&t);
            assert!(mixed_derivatives_are_10(&lc.in_frame(&f), f.n()));
        }
        let t = fixtures::kodaira_thurston();
        let f = ComplexFrame::standard(&t);
        assert_eq!(holomorphic_derivative_nijenhuis_check(&t, &levi_civita(&t), &f), None);
    }

    #[test]
    fn nijenhuis_derivative_formula_on_iwasawa() {
        for t in [fixtures::iwasawa_g0(), fixtures::iwasawa_alt()] {
            let lc = levi_civita(&t);
            let f = ComplexFrame::standard(&t);
            assert!(frame_properties(&lc.in_frame(&f), 3).all());
            let fd = CovariantNijenhuisDerivative::new(&lc, &t, &nijenhuis_tensor(&t));
            assert_eq!(nijenhuis_derivative_frame_check(&t, &lc, &f, &fd), None);
        }
    }
}

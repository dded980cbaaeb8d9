//! Seeded random search over nilpotent almost Hermitian structures.
//!
//! Sample `i` of a run draws from `ChaCha8Rng::seed_from_u64(seed)` on stream
//! `i`, so a sample depends only on `(dim, seed, i)` and results are identical
//! for any worker count.

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::analysis::Analysis;
use crate::connection::levi_civita;
use crate::curvature::{first_bianchi_defect, gray_conditions, gray_flags, nabla_omega_norm};
use crate::document::StructureDocument;
use crate::error::{Error, Result};
use crate::fixtures::omega_standard;
use crate::forms::{exterior_derivative, increasing_tuples, pq_decompose, InvariantForm};
use crate::hermitian::{AlmostComplexStructure, Classification, ComplexFrame, HermitianTriple};
use crate::lie::LieAlgebra;
use crate::linalg::{determinant, nullspace};
use crate::scalar::{gauss, rat, GaussianRational, Rational, Scalar};
use crate::tensor::{ComplexTensor, IndexKind, RealTensor};
use crate::theorems::{
    all_verdicts, heisenberg_normalize, rflat_frame_pattern, BracketCoefficients, FramePattern, TheoremVerdict,
};

pub const SUPPORTED_DIMS: [usize; 3] = [4, 6, 8];

/// How a sample's structure constants were drawn.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// Central 2-step brackets constrained to `(dω)^{1,2} = 0`.
    CentralQuasiKahler,
    /// Central 2-step brackets constrained to `dω = 0`.
    CentralAlmostKahler,
    /// `[Z_i, conj Z_j] = 0`, `[Z_i, Z_j] ∈ span(conj Z_k)` in the standard frame.
    FlatPattern,
    /// The flat pattern with `dω = 0` imposed on the coefficients.
    FlatPatternAlmostKahler,
    /// Strictly upper-triangular brackets, no compatibility constraint.
    UpperTriangular,
}

const FAMILIES: [Family; 5] = [
    Family::CentralQuasiKahler,
    Family::CentralAlmostKahler,
    Family::FlatPattern,
    Family::FlatPatternAlmostKahler,
    Family::UpperTriangular,
];

impl Family {
    fn for_index(index: u64) -> Self {
        FAMILIES[(index % FAMILIES.len() as u64) as usize]
    }
}

/// Candidate bookkeeping for the flat-pattern families.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FlatCandidateStats {
    pub proposed: usize,
    pub jacobi_rejected: usize,
    /// Candidates where the composition identity and the Jacobi identity
    /// disagreed; the two are equivalent for the flat pattern.
    pub composition_mismatches: usize,
}

impl FlatCandidateStats {
    fn merge(&mut self, o: &Self) {
        self.proposed += o.proposed;
        self.jacobi_rejected += o.jacobi_rejected;
        self.composition_mismatches += o.composition_mismatches;
    }
}

#[derive(Clone, Debug)]
pub struct GeneratedStructure {
    pub index: u64,
    pub family: Family,
    pub triple: HermitianTriple,
    pub flat_stats: FlatCandidateStats,
}

fn rng_for(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn nonzero_small(rng: &mut ChaCha8Rng) -> i64 {
    let v = rng.random_range(1..=2);
    if rng.random_bool(0.5) {
        -v
    } else {
        v
    }
}

fn sparse_small(rng: &mut ChaCha8Rng) -> i64 {
    if rng.random_bool(0.5) {
        0
    } else {
        nonzero_small(rng)
    }
}

fn small_gaussian(rng: &mut ChaCha8Rng) -> GaussianRational {
    loop {
        let z = gauss(rng.random_range(-2..=2), rng.random_range(-2..=2));
        if !z.is_zero() {
            return z;
        }
    }
}

fn shuffled(rng: &mut ChaCha8Rng, dim: usize) -> Vec<usize> {
    let mut v: Vec<usize> = (0..dim).collect();
    for i in (1..dim).rev() {
        v.swap(i, rng.random_range(0..=i));
    }
    v
}

/// `ω = Σ d_i α_i ∧ α_{i+n}` with `d_i ∈ {1,2,3}`; tames the standard `J`.
fn random_taming_form(rng: &mut ChaCha8Rng, dim: usize) -> RealTensor {
    let n = dim / 2;
    let mut w = omega_standard(dim);
    for i in 0..n {
        let d = rat(rng.random_range(1..=3));
        w.set(&[i, i + n], d.clone());
        w.set(&[i + n, i], -d);
    }
    w
}

/// `L·U` with unit diagonals and entries in `{-1,0,1}`: determinant one.
fn random_unimodular(rng: &mut ChaCha8Rng, dim: usize) -> RealTensor {
    let mut l = RealTensor::identity(dim);
    let mut u = RealTensor::identity(dim);
    for a in 0..dim {
        for b in 0..a {
            if rng.random_bool(0.15) {
                l.set(&[a, b], rat(if rng.random_bool(0.5) { 1 } else { -1 }));
            }
            if rng.random_bool(0.15) {
                u.set(&[b, a], rat(if rng.random_bool(0.5) { 1 } else { -1 }));
            }
        }
    }
    l.matmul(&u).expect("square")
}

/// A permutation matrix followed by two shears `X_a += ±X_b`.
fn random_shear_permutation(rng: &mut ChaCha8Rng, dim: usize) -> RealTensor {
    let perm = shuffled(rng, dim);
    let mut p = RealTensor::real_zeros(&[dim, dim]);
    for (c, &r) in perm.iter().enumerate() {
        p.set(&[r, c], rat(1));
    }
    for _ in 0..2 {
        let a = rng.random_range(0..dim);
        let b = (a + rng.random_range(1..dim)) % dim;
        let mut e = RealTensor::identity(dim);
        e.set(&[b, a], rat(nonzero_small(rng).signum()));
        p = p.matmul(&e).expect("square");
    }
    p
}

/// `[[A, −B], [B, A]]`, which commutes with the standard `J`.
fn random_j_commuting(rng: &mut ChaCha8Rng, dim: usize) -> RealTensor {
    let n = dim / 2;
    for _ in 0..16 {
        let mut p = RealTensor::real_zeros(&[dim, dim]);
        for r in 0..n {
            for c in 0..n {
                let a = if r == c { 1 } else { 0 } + if rng.random_bool(0.25) { sparse_small(rng) } else { 0 };
                let b = if rng.random_bool(0.25) { sparse_small(rng) } else { 0 };
                p.set(&[r, c], rat(a));
                p.set(&[r + n, c + n], rat(a));
                p.set(&[r + n, c], rat(b));
                p.set(&[r, c + n], rat(-b));
            }
        }
        if !determinant(&p).expect("square").is_zero() {
            return p;
        }
    }
    RealTensor::identity(dim)
}

fn base_triple(alg: LieAlgebra, omega: &RealTensor) -> Result<HermitianTriple> {
    let dim = alg.dim();
    HermitianTriple::from_taming(alg, AlmostComplexStructure::standard(dim), omega)
}

/// Nullspace of the linear map `c ↦ constraint(dω)` over central brackets
/// `[X_a, X_b] = Σ_w c^w_{ab} X_w`, `a < b` outside `targets`, `w ∈ targets`.
fn central_solutions(
    dim: usize,
    targets: &[usize],
    omega: &RealTensor,
    almost_kahler: bool,
) -> Result<(Vec<(usize, usize, usize)>, Vec<Vec<Rational>>)> {
    let sources: Vec<usize> = (0..dim).filter(|a| !targets.contains(a)).collect();
    let mut unknowns = Vec::new();
    for (p, &a) in sources.iter().enumerate() {
        for &b in &sources[p + 1..] {
            for &w in targets {
                unknowns.push((a, b, w));
            }
        }
    }
    let j = AlmostComplexStructure::standard(dim);
    let omega_form = InvariantForm::from_real(2, omega.clone())?;
    let mut columns: Vec<Vec<Rational>> = Vec::with_capacity(unknowns.len());
    for &(a, b, w) in &unknowns {
        let alg = LieAlgebra::from_brackets(dim, &[(a, b, w, rat(1))])?;
        let d = exterior_derivative(&alg, &omega_form)?;
        let image = if almost_kahler {
            d
        } else {
            pq_decompose(&j, &d).remove(&(1, 2)).unwrap_or_else(|| InvariantForm::zero(3, dim))
        };
        let mut col = Vec::new();
        for idx in increasing_tuples(dim, 3) {
            let z = image.component(&idx);
            col.push(z.re.clone());
            col.push(z.im.clone());
        }
        columns.push(col);
    }
    let rows = columns.first().map_or(0, Vec::len);
    let matrix: Vec<Vec<Rational>> = (0..rows).map(|r| columns.iter().map(|c| c[r].clone()).collect()).collect();
    Ok((unknowns.clone(), nullspace(&matrix, unknowns.len())))
}

/// Sparse combination of basis vectors with coefficients in `{-2,…,2}`.
fn sparse_combination<S: Scalar>(rng: &mut ChaCha8Rng, basis: &[Vec<S>], len: usize) -> Vec<S> {
    let mut out = vec![S::zero(); len];
    if basis.is_empty() {
        return out;
    }
    let mut coeffs: Vec<i64> = basis.iter().map(|_| sparse_small(rng)).collect();
    if coeffs.iter().all(|&c| c == 0) {
        let k = rng.random_range(0..basis.len());
        coeffs[k] = 1;
    }
    for (v, c) in basis.iter().zip(coeffs) {
        if c == 0 {
            continue;
        }
        let c = rat(c);
        for (o, x) in out.iter_mut().zip(v) {
            *o += &x.mul_real(&c);
        }
    }
    out
}

fn central_family(rng: &mut ChaCha8Rng, dim: usize, almost_kahler: bool) -> Result<HermitianTriple> {
    let perm = shuffled(rng, dim);
    let size = rng.random_range(1..=dim / 2);
    let targets = &perm[..size];
    let omega = random_taming_form(rng, dim);
    let (unknowns, basis) = central_solutions(dim, targets, &omega, almost_kahler)?;
    let coeffs = sparse_combination(rng, &basis, unknowns.len());
    let entries: Vec<_> = unknowns
        .iter()
        .zip(coeffs)
        .filter(|(_, c)| !c.is_zero())
        .map(|(&(a, b, w), c)| (a, b, w, c))
        .collect();
    let alg = LieAlgebra::from_brackets(dim, &entries)?;
    base_triple(alg, &omega)?.in_real_frame(&random_unimodular(rng, dim))
}

fn upper_triangular_family(rng: &mut ChaCha8Rng, dim: usize) -> Result<HermitianTriple> {
    let mut slots = Vec::new();
    for a in 0..dim {
        for b in a + 1..dim {
            for k in b + 1..dim {
                slots.push((a, b, k));
            }
        }
    }
    let mut chosen = None;
    for _ in 0..32 {
        let count = rng.random_range(1..=dim);
        let entries: Vec<_> = (0..count)
            .map(|_| {
                let (a, b, k) = slots[rng.random_range(0..slots.len())];
                (a, b, k, rat(nonzero_small(rng)))
            })
            .collect();
        if let Ok(alg) = LieAlgebra::from_brackets(dim, &entries) {
            chosen = Some(alg);
            break;
        }
    }
    let alg = match chosen {
        Some(alg) => alg,
        None => {
            let (a, b, k) = slots[rng.random_range(0..slots.len())];
            LieAlgebra::from_brackets(dim, &[(a, b, k, rat(1))])?
        }
    };
    let omega = random_taming_form(rng, dim);
    base_triple(alg, &omega)?.in_real_frame(&random_unimodular(rng, dim))
}

/// Real structure constants of `[Z_i,Z_j] = Σ_k a[i][j][k] conj Z_k`,
/// `[Z_i, conj Z_j] = 0` in `frame`.
fn real_constants_from_pattern(a: &ComplexTensor, frame: &ComplexFrame) -> RealTensor {
    let n = a.dims()[0];
    let dim = 2 * n;
    let mut cc = ComplexTensor::zeros(&[dim, dim, dim], &[IndexKind::Complexified; 3]);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let v = a.get(&[i, j, k]);
                cc.set(&[i, j, n + k], v.clone());
                cc.set(&[n + i, n + j, k], v.conj());
            }
        }
    }
    let p = frame.matrix();
    let q = frame.inverse();
    let pt = p.transpose().expect("square");
    cc.transform_axis(0, q, IndexKind::Real)
        .and_then(|t| t.transform_axis(1, q, IndexKind::Real))
        .and_then(|t| t.transform_axis(2, &pt, IndexKind::Real))
        .expect("shapes agree")
        .to_real()
        .expect("conjugate-symmetric table is real")
}

fn pattern_tensor(n: usize, entries: &[((usize, usize, usize), GaussianRational)]) -> ComplexTensor {
    let mut a = ComplexTensor::zeros(
        &[n, n, n],
        &[IndexKind::Holomorphic, IndexKind::Holomorphic, IndexKind::AntiHolomorphic],
    );
    for ((i, j, k), v) in entries {
        *a.get_mut(&[*i, *j, *k]) += v;
        *a.get_mut(&[*j, *i, *k]) -= v;
    }
    a
}

/// Tries a candidate; records whether Jacobi and the composition identity agree.
fn try_pattern(
    a: ComplexTensor,
    frame: &ComplexFrame,
    stats: &mut FlatCandidateStats,
) -> Option<LieAlgebra> {
    stats.proposed += 1;
    let composition = BracketCoefficients { a: a.clone() }.composition_identity_holds();
    let alg = LieAlgebra::new(real_constants_from_pattern(&a, frame)).ok();
    if composition != alg.is_some() {
        stats.composition_mismatches += 1;
    }
    if alg.is_none() {
        stats.jacobi_rejected += 1;
    }
    alg
}

/// `A` supported on sources `S` and targets `T` with `S ∩ T = ∅`: 2-step, so
/// Jacobi holds automatically. Abelian when `n < 3`.
fn disjoint_pattern(rng: &mut ChaCha8Rng, n: usize) -> ComplexTensor {
    if n < 3 {
        return pattern_tensor(n, &[]);
    }
    let perm = shuffled(rng, n);
    let s = rng.random_range(2..n);
    let (sources, targets) = perm.split_at(s);
    let mut entries = Vec::new();
    for (p, &i) in sources.iter().enumerate() {
        for &j in &sources[p + 1..] {
            for &k in targets {
                if rng.random_bool(0.5) {
                    entries.push(((i, j, k), small_gaussian(rng)));
                }
            }
        }
    }
    if entries.is_empty() {
        entries.push(((sources[0], sources[1], targets[0]), small_gaussian(rng)));
    }
    pattern_tensor(n, &entries)
}

/// Solutions of the cyclic identity `Σ_cyc Σ_m A^m̄_{ij} ĝ_{km} = 0` as vectors
/// over the unknowns `A^k̄_{ij}`, `i < j`.
fn cyclic_solutions(n: usize, gram: &ComplexTensor) -> (Vec<(usize, usize, usize)>, Vec<Vec<GaussianRational>>) {
    let mut unknowns = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in 0..n {
                unknowns.push((i, j, k));
            }
        }
    }
    let col = |i: usize, j: usize, m: usize| -> Option<(usize, i64)> {
        let (lo, hi, sign) = if i < j { (i, j, 1) } else { (j, i, -1) };
        if i == j {
            return None;
        }
        unknowns.iter().position(|&u| u == (lo, hi, m)).map(|p| (p, sign))
    };
    let mut rows = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let mut row = vec![GaussianRational::zero(); unknowns.len()];
                for (x, y, z) in [(i, j, k), (k, i, j), (j, k, i)] {
                    for m in 0..n {
                        if let Some((p, sign)) = col(x, y, m) {
                            row[p] += &gram.get(&[z, m]).mul_real(&rat(sign));
                        }
                    }
                }
                rows.push(row);
            }
        }
    }
    let basis = nullspace(&rows, unknowns.len());
    (unknowns, basis)
}

fn flat_family(rng: &mut ChaCha8Rng, dim: usize, almost_kahler: bool) -> Result<(HermitianTriple, FlatCandidateStats)> {
    let n = dim / 2;
    let omega = random_taming_form(rng, dim);
    let torus = base_triple(LieAlgebra::abelian(dim), &omega)?;
    let frame = ComplexFrame::standard(&torus);
    let mut stats = FlatCandidateStats::default();
    let mut chosen = None;
    if almost_kahler {
        let (unknowns, basis) = cyclic_solutions(n, frame.hermitian_gram());
        for _ in 0..16 {
            if basis.is_empty() {
                break;
            }
            let v = sparse_combination(rng, &basis, unknowns.len());
            let entries: Vec<_> = unknowns.iter().copied().zip(v).filter(|(_, c)| !c.is_zero()).collect();
            if let Some(alg) = try_pattern(pattern_tensor(n, &entries), &frame, &mut stats) {
                chosen = Some(alg);
                break;
            }
        }
        if chosen.is_none() {
            chosen = Some(LieAlgebra::abelian(dim));
        }
    } else {
        let mut slots = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in 0..n {
                    slots.push((i, j, k));
                }
            }
        }
        for _ in 0..8 {
            let count = rng.random_range(1..=n);
            let entries: Vec<_> =
                (0..count).map(|_| (slots[rng.random_range(0..slots.len())], small_gaussian(rng))).collect();
            if let Some(alg) = try_pattern(pattern_tensor(n, &entries), &frame, &mut stats) {
                chosen = Some(alg);
                break;
            }
        }
        if chosen.is_none() {
            chosen = try_pattern(disjoint_pattern(rng, n), &frame, &mut stats);
        }
    }
    let alg = chosen.ok_or_else(|| Error::HypothesisFailed("disjoint-support pattern failed Jacobi".into()))?;
    let triple = base_triple(alg, &omega)?.in_real_frame(&random_j_commuting(rng, dim))?;
    Ok((triple, stats))
}

fn check_dim(dim: usize) -> Result<()> {
    if SUPPORTED_DIMS.contains(&dim) {
        Ok(())
    } else {
        Err(Error::NotApplicable(format!("search supports dimensions 4, 6 and 8, got {dim}")))
    }
}

/// The structure drawn for sample `index`; pure in `(dim, seed, index)`.
pub fn generate(dim: usize, seed: u64, index: u64) -> Result<GeneratedStructure> {
    check_dim(dim)?;
    let mut rng = rng_for(seed, index);
    let family = Family::for_index(index);
    let mut flat_stats = FlatCandidateStats::default();
    let triple = match family {
        Family::CentralQuasiKahler => central_family(&mut rng, dim, false)?,
        Family::CentralAlmostKahler => central_family(&mut rng, dim, true)?,
        Family::FlatPattern | Family::FlatPatternAlmostKahler => {
            let (t, s) = flat_family(&mut rng, dim, family == Family::FlatPatternAlmostKahler)?;
            flat_stats = s;
            t
        }
        Family::UpperTriangular => upper_triangular_family(&mut rng, dim)?,
    };
    Ok(GeneratedStructure { index, family, triple, flat_stats })
}

/// Identities that hold for every structure, evaluated exactly.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct StructuralReport {
    pub riemann_antisymmetric: bool,
    pub hermitian_antisymmetric: bool,
    pub riemann_pair_symmetric: bool,
    pub riemann_bianchi: bool,
    /// Raw `G1` implies the two `G2` conditions, and the flags are monotone.
    pub gray_chain: bool,
    pub d_squared_zero: bool,
    /// `s`, `s*` and `|∇ω|²` agree after a random change of basis.
    pub scalars_invariant: bool,
}

impl StructuralReport {
    pub fn passes(&self) -> bool {
        self.riemann_antisymmetric
            && self.hermitian_antisymmetric
            && self.riemann_pair_symmetric
            && self.riemann_bianchi
            && self.gray_chain
            && self.d_squared_zero
            && self.scalars_invariant
    }
}

fn random_form(rng: &mut ChaCha8Rng, dim: usize, degree: usize) -> Result<InvariantForm> {
    let terms: Vec<_> = increasing_tuples(dim, degree)
        .into_iter()
        .map(|idx| (idx, gauss(sparse_small(rng), sparse_small(rng))))
        .collect();
    InvariantForm::from_terms(degree, dim, &terms)
}

pub fn structural_report(a: &Analysis, rng: &mut ChaCha8Rng) -> Result<StructuralReport> {
    let triple = a.triple();
    let dim = triple.dim();
    let n = a.n();
    let raw = gray_conditions(a.riemann_frame(), n);
    let monotone = |f: crate::curvature::GrayFlags| (!f.g1 || f.g2) && (!f.g2 || f.g3);
    let gray_chain = (!raw.holomorphic_pair_zero || (raw.all_holomorphic_zero && raw.one_antiholomorphic_zero))
        && monotone(gray_flags(a.riemann_frame(), n))
        && monotone(gray_flags(a.hermitian_frame(), n));

    let mut d_squared_zero = true;
    for degree in [1, 2] {
        let f = random_form(rng, dim, degree)?;
        let dd = exterior_derivative(triple.algebra(), &exterior_derivative(triple.algebra(), &f)?)?;
        d_squared_zero &= dd.is_zero();
    }

    let moved = triple.in_real_frame(&random_shear_permutation(rng, dim))?;
    let b = Analysis::new(moved);
    let (sa, sb) = (a.scalars(), b.scalars());
    let scalars_invariant = sa.s == sb.s
        && sa.s_star == sb.s_star
        && nabla_omega_norm(a.levi_civita(), triple) == nabla_omega_norm(&levi_civita(b.triple()), b.triple());

    Ok(StructuralReport {
        riemann_antisymmetric: a.riemann().antisymmetries_hold(),
        hermitian_antisymmetric: a.hermitian().antisymmetries_hold(),
        riemann_pair_symmetric: a.riemann().pair_symmetry_holds(),
        riemann_bianchi: first_bianchi_defect(a.riemann()).is_zero(),
        gray_chain,
        d_squared_zero,
        scalars_invariant,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HeisenbergStatus {
    /// Not a 6-dimensional non-integrable quasi-Kähler structure with `R̃ = 0`.
    NotEligible,
    /// Eligible, but the standard frame lacks the flat pattern.
    PatternNotInFrame,
    Rediscovered,
    /// The normalization failed on an input where it must succeed.
    Failed,
}

#[derive(Clone, Debug)]
pub struct SampleOutcome {
    pub index: u64,
    pub family: Family,
    pub classification: Classification,
    pub hermitian_flat: bool,
    pub pattern: FramePattern,
    pub verdicts: Vec<TheoremVerdict>,
    pub heisenberg: HeisenbergStatus,
    pub flat_stats: FlatCandidateStats,
    pub structural: Option<StructuralReport>,
    /// Serialized input, present only when something failed.
    pub witness: Option<StructureDocument>,
}

impl SampleOutcome {
    pub fn failed(&self) -> bool {
        self.verdicts.iter().any(TheoremVerdict::is_counterexample)
            || self.heisenberg == HeisenbergStatus::Failed
            || self.flat_stats.composition_mismatches > 0
            || self.structural.is_some_and(|s| !s.passes())
    }
}

pub fn evaluate(g: &GeneratedStructure, seed: u64, structural: bool) -> Result<SampleOutcome> {
    let a = Analysis::new(g.triple.clone());
    let classification = a.classification();
    let hermitian_flat = classification.quasi_kahler && a.hermitian().is_zero();
    let pattern = rflat_frame_pattern(a.triple(), a.frame());
    let verdicts = all_verdicts(&a);
    let heisenberg = if a.triple().dim() == 6 && hermitian_flat && !classification.integrable {
        match heisenberg_normalize(a.triple()) {
            Ok(_) => HeisenbergStatus::Rediscovered,
            Err(Error::NotApplicable(_)) => HeisenbergStatus::PatternNotInFrame,
            Err(_) => HeisenbergStatus::Failed,
        }
    } else {
        HeisenbergStatus::NotEligible
    };
    let structural = if structural {
        // A separate stream keeps structural draws out of the generator's sequence.
        let mut rng = rng_for(seed ^ 0x5eed_5eed_5eed_5eed, g.index);
        Some(structural_report(&a, &mut rng)?)
    } else {
        None
    };
    let mut out = SampleOutcome {
        index: g.index,
        family: g.family,
        classification,
        hermitian_flat,
        pattern,
        verdicts,
        heisenberg,
        flat_stats: g.flat_stats,
        structural,
        witness: None,
    };
    if out.failed() {
        let name = format!("search_d{}_s{}_{}", g.triple.dim(), seed, g.index);
        out.witness = Some(StructureDocument::from_triple(&name, &g.triple));
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct StatementTally {
    pub hypotheses_met: usize,
    pub conclusion_holds: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Counterexample {
    pub index: u64,
    pub family: Family,
    /// Failed statement ids, `heisenberg_normalize`, `flat_composition` or `structural`.
    pub failures: Vec<String>,
    pub verdicts: Vec<TheoremVerdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub structural: Option<StructuralReport>,
    pub document: Value,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct HeisenbergTally {
    pub eligible: usize,
    pub rediscovered: usize,
    pub pattern_not_in_frame: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchSummary {
    pub dim: usize,
    pub samples: u64,
    pub seed: u64,
    pub families: BTreeMap<Family, usize>,
    pub quasi_kahler: usize,
    pub almost_kahler: usize,
    pub integrable: usize,
    pub hermitian_flat: usize,
    /// Almost Kähler samples whose standard frame has the flat pattern.
    pub almost_kahler_flat_pattern: usize,
    /// Highest nilpotency step seen among samples with `R̃ = 0`.
    pub max_step_hermitian_flat: Option<usize>,
    pub statements: BTreeMap<&'static str, StatementTally>,
    pub heisenberg: HeisenbergTally,
    pub flat_candidates: FlatCandidateStats,
    pub structural_cases: usize,
    pub structural_failures: usize,
    pub counterexamples: Vec<Counterexample>,
}

impl SearchSummary {
    fn empty(dim: usize, samples: u64, seed: u64) -> Self {
        SearchSummary {
            dim,
            samples,
            seed,
            families: BTreeMap::new(),
            quasi_kahler: 0,
            almost_kahler: 0,
            integrable: 0,
            hermitian_flat: 0,
            almost_kahler_flat_pattern: 0,
            max_step_hermitian_flat: None,
            statements: BTreeMap::new(),
            heisenberg: HeisenbergTally::default(),
            flat_candidates: FlatCandidateStats::default(),
            structural_cases: 0,
            structural_failures: 0,
            counterexamples: Vec::new(),
        }
    }

    fn absorb(&mut self, o: SampleOutcome, step: Option<usize>) {
        *self.families.entry(o.family).or_default() += 1;
        let c = o.classification;
        self.quasi_kahler += usize::from(c.quasi_kahler);
        self.almost_kahler += usize::from(c.almost_kahler);
        self.integrable += usize::from(c.integrable);
        self.hermitian_flat += usize::from(o.hermitian_flat);
        self.almost_kahler_flat_pattern += usize::from(c.almost_kahler && o.pattern.holds());
        if o.hermitian_flat {
            self.max_step_hermitian_flat = self.max_step_hermitian_flat.max(step);
        }
        for v in &o.verdicts {
            let t = self.statements.entry(v.statement).or_default();
            if v.hypotheses_met {
                t.hypotheses_met += 1;
                t.conclusion_holds += usize::from(v.conclusion_holds);
            }
        }
        match o.heisenberg {
            HeisenbergStatus::NotEligible => {}
            s => {
                self.heisenberg.eligible += 1;
                match s {
                    HeisenbergStatus::Rediscovered => self.heisenberg.rediscovered += 1,
                    HeisenbergStatus::PatternNotInFrame => self.heisenberg.pattern_not_in_frame += 1,
                    _ => self.heisenberg.failed += 1,
                }
            }
        }
        self.flat_candidates.merge(&o.flat_stats);
        if let Some(s) = o.structural {
            self.structural_cases += 1;
            self.structural_failures += usize::from(!s.passes());
        }
        if let Some(doc) = o.witness {
            let mut failures: Vec<String> =
                o.verdicts.iter().filter(|v| v.is_counterexample()).map(|v| v.statement.to_string()).collect();
            if o.heisenberg == HeisenbergStatus::Failed {
                failures.push("heisenberg_normalize".into());
            }
            if o.flat_stats.composition_mismatches > 0 {
                failures.push("flat_composition".into());
            }
            if o.structural.is_some_and(|s| !s.passes()) {
                failures.push("structural".into());
            }
            self.counterexamples.push(Counterexample {
                index: o.index,
                family: o.family,
                failures,
                verdicts: o.verdicts,
                structural: o.structural,
                document: doc.to_value(),
            });
        }
    }

    pub fn tally(&self, statement: &str) -> StatementTally {
        self.statements.get(statement).copied().unwrap_or_default()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub dim: usize,
    pub samples: u64,
    pub seed: u64,
    /// Zero uses rayon's default.
    pub workers: usize,
    pub structural: bool,
}

/// Generates and evaluates every sample, merging in index order.
pub fn random_structure_search(config: &SearchConfig) -> Result<SearchSummary> {
    check_dim(config.dim)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| Error::NotApplicable(format!("worker pool: {e}")))?;
    let outcomes: Vec<Result<(SampleOutcome, Option<usize>)>> = pool.install(|| {
        (0..config.samples)
            .into_par_iter()
            .map(|i| {
                let g = generate(config.dim, config.seed, i)?;
                let step = g.triple.algebra().nilpotency_step();
                Ok((evaluate(&g, config.seed, config.structural)?, step))
            })
            .collect()
    });
    let mut summary = SearchSummary::empty(config.dim, config.samples, config.seed);
    for o in outcomes {
        let (o, step) = o?;
        summary.absorb(o, step);
    }
    Ok(summary)
}

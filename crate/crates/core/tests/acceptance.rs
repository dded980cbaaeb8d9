//! Acceptance suite: one PASS/FAIL line per criterion, all comparisons exact.
//!
//! Runs without the libtest harness so the lines always reach stdout. The
//! process fails when a criterion fails, unless every failing entry is a
//! reference value that contradicts the reference's own bracket table.

use std::collections::BTreeSet;
use std::process::ExitCode;

use num_traits::Zero;

use qkflat_core::analysis::Analysis;
use qkflat_core::connection::{is_metric, preserves_j, torsion, torsion_11_part};
use qkflat_core::curvature::{complex_frame_scalar_gap, gamma_sum_oracle, gray_flags, nabla_omega_norm};
use qkflat_core::fixtures::{self, EXAMPLE_NAMES};
use qkflat_core::sampler::{random_structure_search, SearchConfig, SearchSummary};
use qkflat_core::scalar::{gauss, GaussianRational};
use qkflat_core::theorems::{
    corollary_almost_kahler, heisenberg_normalize, is_heisenberg_table, taming_obstruction, theorem_main,
    two_step_check, TamingResult, COROLLARY_ALMOST_KAHLER, FLAT_COFRAME, THEOREM_MAIN, TWO_STEP,
};
use qkflat_core::HermitianTriple;

const DIM4_SAMPLES: u64 = 700;
const DIM6_SAMPLES: u64 = 300;
const SEED: u64 = 20_240_611;

struct Outcome {
    pass: bool,
    detail: String,
    /// Failure fully accounted for by inconsistent reference data.
    explained: bool,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into(), explained: false }
}

fn fixtures_all() -> Vec<(&'static str, HermitianTriple)> {
    EXAMPLE_NAMES.iter().map(|&n| (n, fixtures::builtin(n).unwrap())).collect()
}

fn criterion_1() -> Outcome {
    let a = Analysis::new(fixtures::iwasawa_g0());
    let c = a.classification();
    let rf = a.hermitian_frame();
    let count: usize = rf.dims().iter().product();
    let pass = c.quasi_kahler && !c.almost_kahler && !c.integrable && count == 1296 && rf.is_zero();
    verdict(
        pass,
        format!(
            "quasi_kahler={} almost_kahler={} integrable={}, {} of {count} frame components of R̃ are zero",
            c.quasi_kahler,
            c.almost_kahler,
            c.integrable,
            rf.data().iter().filter(|z| z.is_zero()).count()
        ),
    )
}

fn criterion_2() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, t) in [("iwasawa_g0", fixtures::iwasawa_g0()), ("iwasawa_alt", fixtures::iwasawa_alt())] {
        let a = Analysis::new(t);
        let g2 = gray_flags(a.riemann_frame(), a.n()).g2;
        let flat = a.hermitian().is_zero();
        pass &= g2 && flat;
        parts.push(format!("{name}: G2={g2} R̃=0:{flat}"));
    }
    verdict(pass, parts.join("; "))
}

/// `(i, j, coefficients)` for `∇_{Z_i} Z_j = Σ_k c_k conj Z_k`, 1-based.
type Table = [(usize, usize, [i64; 3]); 9];

const IWASAWA_TABLE: Table = [
    (1, 1, [0, 0, 0]),
    (2, 1, [0, 0, -1]),
    (3, 1, [0, 1, 0]),
    (1, 2, [0, 0, 1]),
    (2, 2, [0, 0, 0]),
    (3, 2, [1, 0, 0]),
    (1, 3, [0, -1, 0]),
    (2, 3, [1, 0, 0]),
    (3, 3, [0, 0, 0]),
];

const ALT_TABLE: Table = [
    (1, 1, [0, -2, 0]),
    (2, 1, [0, 0, -2]),
    (3, 1, [0, 0, 0]),
    (1, 2, [2, 0, 0]),
    (2, 2, [0, 0, 0]),
    (3, 2, [0, 0, -2]),
    (1, 3, [2, 0, 0]),
    (2, 3, [2, 0, 0]),
    (3, 3, [0, 2, 0]),
];

/// Reference brackets `[Z_i, Z_j] = Σ_k c_k conj Z_k` for `i < j`.
const IWASAWA_BRACKETS: [(usize, usize, [i64; 3]); 3] =
    [(1, 2, [0, 0, 2]), (1, 3, [0, 0, 0]), (2, 3, [0, 0, 0])];
const ALT_BRACKETS: [(usize, usize, [i64; 3]); 3] = [(1, 2, [2, 0, 2]), (1, 3, [0, 0, 0]), (2, 3, [2, 0, 2])];

/// Pairs `{i, j}` where the reference table violates `∇_i Z_j − ∇_j Z_i = [Z_i, Z_j]`.
fn torsion_inconsistent_pairs(table: &Table, brackets: &[(usize, usize, [i64; 3]); 3]) -> BTreeSet<(usize, usize)> {
    let entry = |i: usize, j: usize| table.iter().find(|e| e.0 == i && e.1 == j).unwrap().2;
    brackets
        .iter()
        .filter(|&&(i, j, b)| {
            let (x, y) = (entry(i, j), entry(j, i));
            (0..3).any(|k| x[k] - y[k] != b[k])
        })
        .map(|&(i, j, _)| (i, j))
        .collect()
}

fn criterion_3() -> Outcome {
    let cases = [
        ("iwasawa_g0", fixtures::iwasawa_g0(), &IWASAWA_TABLE, &IWASAWA_BRACKETS),
        ("iwasawa_alt", fixtures::iwasawa_alt(), &ALT_TABLE, &ALT_BRACKETS),
    ];
    let mut mismatches = Vec::new();
    let mut explained = true;
    let mut antiholomorphic_zero = true;
    let mut compared = 0;
    for (name, t, table, brackets) in cases {
        let a = Analysis::new(t);
        let lc = a.levi_civita().in_frame(a.frame());
        let n = 3;
        for i in 0..n {
            for j in 0..n {
                for c in 0..2 * n {
                    antiholomorphic_zero &= lc.get(&[n + i, j, c]).is_zero();
                }
            }
        }
        let bad_pairs = torsion_inconsistent_pairs(table, brackets);
        for &(i, j, coeffs) in table.iter() {
            compared += 1;
            let engine: Vec<GaussianRational> = (0..2 * n).map(|c| lc.get(&[i - 1, j - 1, c]).clone()).collect();
            let expected: Vec<GaussianRational> =
                (0..2 * n).map(|c| if c < n { gauss(0, 0) } else { gauss(coeffs[c - n], 0) }).collect();
            if engine != expected {
                let shown: Vec<String> = engine[n..].iter().map(qkflat_core::scalar::format_gaussian).collect();
                mismatches.push(format!(
                    "{name} ∇_{i}Z_{j}: reference {:?}, engine [{}] on conj Z_1..3",
                    coeffs,
                    shown.join(", ")
                ));
                explained &= bad_pairs.contains(&(i.min(j), i.max(j)));
            }
        }
    }
    let pass = mismatches.is_empty() && antiholomorphic_zero;
    let detail = if mismatches.is_empty() {
        format!("{compared} entries match; ∇_(conj i) Z_j = 0: {antiholomorphic_zero}")
    } else {
        format!(
            "{} of {compared} entries match; ∇_(conj i) Z_j = 0: {antiholomorphic_zero}; mismatches: {}; \
             each mismatched entry violates torsion-freeness against the reference brackets: {explained}",
            compared - mismatches.len(),
            mismatches.join("; ")
        )
    };
    Outcome { pass, detail, explained: !pass && antiholomorphic_zero && explained }
}

fn criterion_4() -> Outcome {
    let mut pass = true;
    let mut checked = Vec::new();
    for (name, t) in fixtures_all() {
        let a = Analysis::new(t);
        if !a.classification().quasi_kahler {
            continue;
        }
        let can = a.canonical();
        let ok = can.is_canonical()
            && is_metric(can, a.triple())
            && preserves_j(can, a.triple())
            && torsion_11_part(&torsion(can, a.triple().algebra()), a.frame()).is_zero();
        pass &= ok;
        checked.push(format!("{name}={ok}"));
    }
    verdict(pass && checked.len() == EXAMPLE_NAMES.len(), checked.join(" "))
}

fn criterion_5() -> Outcome {
    let a = Analysis::new(fixtures::kodaira_thurston());
    let sc = a.scalars();
    let gap = &sc.s_star - &sc.s;
    let norm = nabla_omega_norm(a.levi_civita(), a.triple());
    let contraction = complex_frame_scalar_gap(a.riemann_frame(), a.frame());
    let oracle = gamma_sum_oracle(a.levi_civita(), a.triple(), a.frame());
    let real_gap = GaussianRational::new(gap.clone(), Zero::zero());
    let pass = gap == norm && contraction == real_gap && oracle == real_gap && !gap.is_zero();
    verdict(
        pass,
        format!(
            "s*−s = {gap}, |∇ω|² = {norm}, 4ΣR(Z_i,Z_j,conj Z_i,conj Z_j) = {}, Γ-sum oracle = {}",
            qkflat_core::scalar::format_gaussian(&contraction),
            qkflat_core::scalar::format_gaussian(&oracle)
        ),
    )
}

fn criterion_6(runs: &[SearchSummary]) -> Outcome {
    let fixtures_ok = fixtures_all().into_iter().all(|(_, t)| {
        let a = Analysis::new(t);
        theorem_main(&a).map(|v| v.conclusion_holds).unwrap_or(!a.classification().quasi_kahler)
    });
    let per_dim: Vec<_> = runs.iter().map(|s| (s.dim, s.tally(THEOREM_MAIN))).collect();
    let met: usize = per_dim.iter().map(|(_, t)| t.hypotheses_met).sum();
    let held: usize = per_dim.iter().map(|(_, t)| t.conclusion_holds).sum();
    let pass = fixtures_ok && met >= 500 && met == held && per_dim.iter().all(|(_, t)| t.hypotheses_met > 0);
    let dims: Vec<String> = per_dim.iter().map(|(d, t)| format!("dim {d}: {}", t.hypotheses_met)).collect();
    verdict(
        pass,
        format!("fixtures agree: {fixtures_ok}; {met} quasi-Kähler samples ({}), {} disagreements", dims.join(", "), met - held),
    )
}

fn criterion_7(runs: &[SearchSummary]) -> Outcome {
    let fixtures_ok = fixtures_all().into_iter().all(|(_, t)| {
        corollary_almost_kahler(&Analysis::new(t)).map(|v| !v.is_counterexample()).unwrap_or(true)
    });
    let ak: usize = runs.iter().map(|s| s.almost_kahler).sum();
    let met: usize = runs.iter().map(|s| s.tally(COROLLARY_ALMOST_KAHLER).hypotheses_met).sum();
    let held: usize = runs.iter().map(|s| s.tally(COROLLARY_ALMOST_KAHLER).conclusion_holds).sum();
    verdict(
        fixtures_ok && ak >= 500 && met == held,
        format!(
            "fixtures clean: {fixtures_ok}; {ak} almost-Kähler samples, {met} with Bianchi(R̃) = 0, {} with N ≠ 0 among them",
            met - held
        ),
    )
}

fn criterion_8() -> Outcome {
    let g0 = Analysis::new(fixtures::iwasawa_g0()).tosatti().vanishes();
    let alt = Analysis::new(fixtures::iwasawa_alt()).tosatti().vanishes();
    verdict(g0 && alt, format!("iwasawa_g0: {g0}, iwasawa_alt: {alt}"))
}

fn criterion_9() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, t) in [("iwasawa_g0", fixtures::iwasawa_g0()), ("iwasawa_alt", fixtures::iwasawa_alt())] {
        match heisenberg_normalize(&t) {
            Ok(h) => {
                let ok = is_heisenberg_table(&h.brackets);
                pass &= ok;
                parts.push(format!("{name}: pivot ({},{}) table exact: {ok}", h.pivot.0 + 1, h.pivot.1 + 1));
            }
            Err(e) => {
                pass = false;
                parts.push(format!("{name}: {e}"));
            }
        }
    }
    verdict(pass, parts.join("; "))
}

fn criterion_10(runs: &[SearchSummary]) -> Outcome {
    let mut fixture_flat = 0;
    let mut fixtures_ok = true;
    for (_, t) in fixtures_all() {
        if let Ok(v) = two_step_check(&Analysis::new(t)) {
            fixture_flat += 1;
            fixtures_ok &= v.conclusion_holds;
        }
    }
    let met: usize = runs.iter().map(|s| s.tally(TWO_STEP).hypotheses_met).sum();
    let held: usize = runs.iter().map(|s| s.tally(TWO_STEP).conclusion_holds).sum();
    let max_step = runs.iter().filter_map(|s| s.max_step_hermitian_flat).max();
    verdict(
        fixtures_ok && met == held && max_step.is_some_and(|s| s <= 2),
        format!("{fixture_flat} R̃-flat fixtures, {met} R̃-flat samples, max step {max_step:?}, {} violations", met - held),
    )
}

fn criterion_11() -> Outcome {
    match taming_obstruction(&fixtures::iwasawa_g0()) {
        Ok(r @ TamingResult::NoSolution { .. }) => {
            let valid = r.certificate_valid();
            verdict(valid, format!("no_solution, certificate valid: {valid}"))
        }
        Ok(r) => verdict(false, format!("unexpected {}", r.label())),
        Err(e) => verdict(false, e.to_string()),
    }
}

fn criterion_12(runs: &[SearchSummary]) -> Outcome {
    let met: usize = runs.iter().map(|s| s.tally(FLAT_COFRAME).hypotheses_met).sum();
    let held: usize = runs.iter().map(|s| s.tally(FLAT_COFRAME).conclusion_holds).sum();
    let proposed: usize = runs.iter().map(|s| s.flat_candidates.proposed).sum();
    let rejected: usize = runs.iter().map(|s| s.flat_candidates.jacobi_rejected).sum();
    let mismatched: usize = runs.iter().map(|s| s.flat_candidates.composition_mismatches).sum();
    verdict(
        met >= 200 && met == held && mismatched == 0,
        format!(
            "{met} almost-Kähler flat-pattern samples, {} counterexamples; {proposed} pattern candidates, \
             {rejected} rejected by Jacobi, {mismatched} composition/Jacobi disagreements",
            met - held
        ),
    )
}

fn criterion_13(runs: &[SearchSummary]) -> Outcome {
    let cases: usize = runs.iter().map(|s| s.structural_cases).sum();
    let failures: usize = runs.iter().map(|s| s.structural_failures).sum();
    verdict(cases >= 1000 && failures == 0, format!("{cases} randomized cases, {failures} failures"))
}

fn main() -> ExitCode {
    let runs: Vec<SearchSummary> = [(4, DIM4_SAMPLES), (6, DIM6_SAMPLES)]
        .into_iter()
        .map(|(dim, samples)| {
            random_structure_search(&SearchConfig { dim, samples, seed: SEED, workers: 0, structural: true })
                .expect("search runs")
        })
        .collect();
    let stray: usize = runs.iter().map(|s| s.counterexamples.len()).sum();

    let results: Vec<(u8, &str, Outcome)> = vec![
        (1, "Iwasawa classification and flat Hermitian curvature", criterion_1()),
        (2, "second Gray identity on both Iwasawa fixtures", criterion_2()),
        (3, "Levi-Civita frame tables", criterion_3()),
        (4, "canonical connection characterization", criterion_4()),
        (5, "scalar curvature gap identities", criterion_5()),
        (6, "Bianchi(R̃) equivalence", criterion_6(&runs)),
        (7, "almost-Kähler integrability", criterion_7(&runs)),
        (8, "Tosatti tensor on Iwasawa fixtures", criterion_8()),
        (9, "Heisenberg normalization", criterion_9()),
        (10, "two-step nilpotency of R̃-flat samples", criterion_10(&runs)),
        (11, "taming obstruction certificate", criterion_11()),
        (12, "flat-pattern almost-Kähler samples", criterion_12(&runs)),
        (13, "structural invariant suites", criterion_13(&runs)),
    ];

    let mut unexplained = 0;
    for (id, title, o) in &results {
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("{tag} criterion {id:>2} ({title}): {}", o.detail);
        if !o.pass && !o.explained {
            unexplained += 1;
        }
    }
    let passed = results.iter().filter(|r| r.2.pass).count();
    println!("acceptance: {passed}/{} PASS; search counterexamples: {stray}", results.len());
    if unexplained > 0 || stray > 0 {
        println!("acceptance: {unexplained} unexplained failures");
        return ExitCode::FAILURE;
    }
    ExitCode::SUCCESS
}

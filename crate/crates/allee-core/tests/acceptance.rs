//! Acceptance suite: one integration test per numbered criterion.
//!
//! Every test prints a single `criterion NN ... PASS/FAIL` line (visible
//! with `cargo test --test acceptance -- --nocapture`, and automatically
//! whenever a test fails) and enforces both the pinned numerical values and
//! a wall-clock budget. Expected values come from independent closed-form
//! algebra or from independent numerical oracles implemented inside this
//! file, never from the code paths under test.

use std::time::{Duration, Instant};

use allee_core::dynamics::{
    self, AttractorRef, BasinCell, ConnectionKind, CycleStability, Direction, IntegratorOptions,
    LimitCycle, StateWindow,
};
use allee_core::equilibria::{self, EquilibriumKind, FoldSide};
use allee_core::{bifurcation, model, ModelParams, State};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Canonical `(A, M)` pair used throughout the catalogued figures.
const CANON_A: f64 = 0.1;
const CANON_M: f64 = -0.1;

fn assert_budget(name: &str, elapsed: Duration, budget: Duration) {
    assert!(
        elapsed <= budget,
        "criterion {name}: runtime {elapsed:?} exceeded the {budget:?} budget"
    );
}

/// Closed-form fold data at `(0.1, -0.1)`: `Q = (73 -/+ sqrt5)/200` at
/// `u = (5 -/+ sqrt5)/20`.
fn closed_form_folds() -> [(f64, f64); 2] {
    let s5 = 5.0_f64.sqrt();
    [
        ((73.0 - s5) / 200.0, (5.0 - s5) / 20.0),
        ((73.0 + s5) / 200.0, (5.0 + s5) / 20.0),
    ]
}

// ---------------------------------------------------------------------------
// 1. Saddle-node thresholds
// ---------------------------------------------------------------------------

#[test]
fn criterion_01_saddle_node_thresholds() {
    const TOL: f64 = 1e-10;
    let budget = Duration::from_millis(1);

    let mut best = Duration::MAX;
    let mut thresholds = Vec::new();
    for _ in 0..3 {
        let t0 = Instant::now();
        thresholds = equilibria::saddle_node_thresholds(CANON_A, CANON_M);
        best = best.min(t0.elapsed());
    }

    assert_eq!(thresholds.len(), 2, "expected exactly two fold thresholds");
    assert!(matches!(thresholds[0].side, FoldSide::Lower));
    assert!(matches!(thresholds[1].side, FoldSide::Upper));
    let expected = closed_form_folds();
    let max_err = (thresholds[0].q - expected[0].0)
        .abs()
        .max((thresholds[1].q - expected[1].0).abs());
    assert!(
        max_err < TOL,
        "|Q - (73 -/+ sqrt5)/200| = {max_err:.3e} exceeds {TOL:.0e}"
    );
    assert_budget("01", best, budget);
    println!(
        "criterion 01 saddle-node thresholds: PASS — Q- = {:.12}, Q+ = {:.12}, max err {max_err:.2e}, {best:.2?}",
        thresholds[0].q, thresholds[1].q
    );
}

// ---------------------------------------------------------------------------
// 2. Root-count regions over the Q sweep
// ---------------------------------------------------------------------------

/// Independent oracle: count strict sign changes of the equilibrium cubic on
/// a dense grid over (0, 1). All roots at the probed parameters are simple,
/// so the crossing count equals the root count.
fn sign_scan(params: &ModelParams, n: usize) -> usize {
    let lo = 1e-12;
    let hi = 1.0 - 1e-12;
    let mut crossings = 0;
    let mut prev = equilibria::cubic_value(lo, params);
    for k in 1..=n {
        let u = lo + (hi - lo) * k as f64 / n as f64;
        let g = equilibria::cubic_value(u, params);
        if prev != 0.0 && g != 0.0 && prev.signum() != g.signum() {
            crossings += 1;
        }
        prev = g;
    }
    crossings
}

#[test]
fn criterion_02_root_count_partition() {
    let budget = Duration::from_secs(1);
    let t0 = Instant::now();

    let [(q_minus, _), (q_plus, _)] = closed_form_folds();
    let mut tally = (0usize, 0usize);
    for i in 0..=120 {
        let q = 0.30 + i as f64 * 1e-3;
        let expected = if q < q_minus || q > q_plus { 1 } else { 3 };
        let params = ModelParams::new(CANON_A, CANON_M, q, 0.25).unwrap();
        let eqs = equilibria::positive_equilibria(&params);
        assert_eq!(
            eqs.len(),
            expected,
            "root count at Q = {q} (partition by Q-/Q+)"
        );
        assert!(
            eqs.iter().all(|e| e.multiplicity == 1),
            "double root flagged strictly inside a region at Q = {q}"
        );
        assert_eq!(
            sign_scan(&params, 100_000),
            expected,
            "dense sign-scan oracle disagrees at Q = {q}"
        );
        if expected == 1 {
            tally.0 += 1;
        } else {
            tally.1 += 1;
        }
    }

    // At the partition endpoints themselves the double root must be flagged.
    for thr in equilibria::saddle_node_thresholds(CANON_A, CANON_M) {
        let params = ModelParams::new(CANON_A, CANON_M, thr.q, 0.25).unwrap();
        let eqs = equilibria::positive_equilibria(&params);
        assert_eq!(eqs.len(), 2, "distinct roots at the {:?} fold", thr.side);
        assert!(
            eqs.iter().any(|e| e.multiplicity == 2),
            "no multiplicity-2 flag at the {:?} fold",
            thr.side
        );
    }

    let elapsed = t0.elapsed();
    assert_budget("02", elapsed, budget);
    println!(
        "criterion 02 root-count regions: PASS — {} one-root steps, {} three-root steps, \
         double roots flagged at both folds, oracle agreed at all 121 steps, {elapsed:.2?}",
        tally.0, tally.1
    );
}

// ---------------------------------------------------------------------------
// 3. Figure-point classification
// ---------------------------------------------------------------------------

enum QSpec {
    Lit(f64),
    LowerFold,
    UpperFold,
}

#[test]
fn criterion_03_figure_point_classification() {
    use EquilibriumKind::*;
    let budget = Duration::from_secs(1);
    let t0 = Instant::now();

    // Expected kinds (ascending in u) for the nine catalogued points.
    let cases: &[(&str, f64, f64, QSpec, f64, &[EquilibriumKind], &[u8])] = &[
        ("F04a", 0.5, -0.05, QSpec::Lit(0.51), 0.1, &[Attractor], &[1]),
        ("F04b", 0.5, -0.05, QSpec::Lit(0.51), 0.045, &[Repeller], &[1]),
        ("F05a", 0.1, -0.1, QSpec::Lit(0.363), 0.3, &[Attractor, Saddle, Attractor], &[1, 1, 1]),
        ("F05b", 0.1, -0.1, QSpec::Lit(0.363), 0.2, &[Attractor, Saddle, Repeller], &[1, 1, 1]),
        ("F05c", 0.1, -0.1, QSpec::Lit(0.363), 0.13, &[Repeller, Saddle, Repeller], &[1, 1, 1]),
        ("F06a", 0.1, -0.1, QSpec::LowerFold, 0.25, &[StableSaddleNode, Attractor], &[2, 1]),
        ("F06b", 0.1, -0.1, QSpec::UpperFold, 0.25, &[Attractor, UnstableSaddleNode], &[1, 2]),
        ("F10a", 0.1, -0.1, QSpec::Lit(0.345), 0.134332, &[Attractor], &[1]),
        ("F10b", 0.1, -0.1, QSpec::Lit(0.363), 0.1298, &[Attractor, Saddle, Repeller], &[1, 1, 1]),
    ];

    let mut failures = Vec::new();
    for (id, a, m, qspec, s, want_kinds, want_mults) in cases {
        let thresholds = equilibria::saddle_node_thresholds(*a, *m);
        let q = match qspec {
            QSpec::Lit(q) => *q,
            QSpec::LowerFold => thresholds[0].q,
            QSpec::UpperFold => thresholds[1].q,
        };
        let params = ModelParams::new(*a, *m, q, *s).unwrap();
        let eqs = equilibria::positive_equilibria(&params);
        let got_kinds: Vec<EquilibriumKind> = eqs.iter().map(|e| e.kind).collect();
        let got_mults: Vec<u8> = eqs.iter().map(|e| e.multiplicity).collect();
        let ok = got_kinds == *want_kinds && got_mults == *want_mults;
        if ok {
            println!("  {id}: PASS — {got_kinds:?}");
        } else {
            // Stability margin S - f(u) at each point: positive means the
            // eigenvalue data demands an attractor, negative a repeller.
            let margins: Vec<String> = eqs
                .iter()
                .map(|e| {
                    format!(
                        "u = {:.6}: S - f(u) = {:+.3e}",
                        e.state.u,
                        s - equilibria::hopf_function(e.state.u, &params)
                    )
                })
                .collect();
            println!("  {id}: FAIL — expected {want_kinds:?}, computed {got_kinds:?}");
            failures.push(format!(
                "{id}: expected {want_kinds:?} (mult {want_mults:?}), computed {got_kinds:?} \
                 (mult {got_mults:?}); margins [{}]",
                margins.join(", ")
            ));
        }
    }

    let elapsed = t0.elapsed();
    assert_budget("03", elapsed, budget);
    let verdict = if failures.is_empty() { "PASS" } else { "FAIL" };
    println!(
        "criterion 03 figure-point classification: {verdict} — {}/9 points match, {elapsed:.2?}",
        9 - failures.len()
    );
    assert!(
        failures.is_empty(),
        "classification disagreements:\n{}",
        failures.join("\n")
    );
}

// ---------------------------------------------------------------------------
// 4. Hopf-curve maximum
// ---------------------------------------------------------------------------

#[test]
fn criterion_04_hopf_maximum() {
    const TOL: f64 = 1e-8;
    let budget = Duration::from_millis(100);
    let params = ModelParams::new(CANON_A, CANON_M, 1.0, 1.0).unwrap();

    let mut best = Duration::MAX;
    let mut result = (0.0, 0.0);
    for _ in 0..3 {
        let t0 = Instant::now();
        result = equilibria::hopf_maximum(&params);
        best = best.min(t0.elapsed());
    }
    let (u_star, s_max) = result;

    let expected = 361.0 / 1200.0;
    let err = (s_max - expected).abs();
    assert!(
        err < TOL,
        "|max S - 361/1200| = {err:.3e} exceeds {TOL:.0e} (got {s_max})"
    );
    assert!(
        (u_star - 19.0 / 60.0).abs() < 1e-6,
        "maximiser u = {u_star} is not at 19/60"
    );
    assert_budget("04", best, budget);
    println!(
        "criterion 04 Hopf-curve maximum: PASS — max S = {s_max:.12} at u = {u_star:.9}, \
         err {err:.2e}, {best:.2?}"
    );
}

// ---------------------------------------------------------------------------
// 5. Bogdanov-Takens points
// ---------------------------------------------------------------------------

/// On the equilibrium manifold the abscissa determines Q; det and trace
/// become functions of `(u, s)` alone.
fn det_tr_on_manifold(a: f64, m: f64, u: f64, s: f64) -> (f64, f64) {
    let phi = (u + a) * (1.0 - u) * (u - m);
    let q = phi / u;
    let params = ModelParams::new(a, m, q, s).unwrap();
    let j = model::jacobian(State::new(u, u), &params).unwrap();
    (j[0][0] * j[1][1] - j[0][1] * j[1][0], j[0][0] + j[1][1])
}

/// Independent oracle: damped-free 2-D Newton with central-difference
/// Jacobian solving `(det, trace) = (0, 0)` in `(u, s)`.
fn newton_bt_oracle(a: f64, m: f64, mut u: f64, mut s: f64) -> (f64, f64, f64) {
    let h = 1e-6;
    for _ in 0..60 {
        let (f1, f2) = det_tr_on_manifold(a, m, u, s);
        if f1.abs().max(f2.abs()) < 1e-14 {
            break;
        }
        let (a1p, a2p) = det_tr_on_manifold(a, m, u + h, s);
        let (a1m, a2m) = det_tr_on_manifold(a, m, u - h, s);
        let (b1p, b2p) = det_tr_on_manifold(a, m, u, s + h);
        let (b1m, b2m) = det_tr_on_manifold(a, m, u, s - h);
        let j11 = (a1p - a1m) / (2.0 * h);
        let j12 = (b1p - b1m) / (2.0 * h);
        let j21 = (a2p - a2m) / (2.0 * h);
        let j22 = (b2p - b2m) / (2.0 * h);
        let det = j11 * j22 - j12 * j21;
        u -= (f1 * j22 - f2 * j12) / det;
        s -= (f2 * j11 - f1 * j21) / det;
    }
    let phi = (u + a) * (1.0 - u) * (u - m);
    (u, s, phi / u)
}

#[test]
fn criterion_05_bogdanov_takens_points() {
    const DEGENERACY_TOL: f64 = 1e-9;
    const ORACLE_TOL: f64 = 1e-8;
    let budget = Duration::from_millis(100);
    let t0 = Instant::now();

    let points = bifurcation::bt_points(CANON_A, CANON_M);
    assert_eq!(points.len(), 2, "expected exactly two BT points");
    let reports = bifurcation::cusp_check(CANON_A, CANON_M).unwrap();
    assert_eq!(reports.len(), 2);

    let mut described = Vec::new();
    for report in &reports {
        let scale = 1.0 + report.scale;
        assert!(
            report.det.abs() < DEGENERACY_TOL,
            "{:?} BT: |det| = {:.3e}",
            report.bt.side,
            report.det.abs()
        );
        assert!(
            report.trace.abs() < DEGENERACY_TOL,
            "{:?} BT: |trace| = {:.3e}",
            report.bt.side,
            report.trace.abs()
        );
        // The transformed Jacobian must be a genuinely nonzero nilpotent
        // block: one significant off-diagonal entry, all others at noise.
        let n = &report.nilpotent;
        let off = n[0][0].abs().max(n[1][0].abs()).max(n[1][1].abs());
        assert!(
            off < DEGENERACY_TOL * scale,
            "{:?} BT: non-nilpotent residue {off:.3e}",
            report.bt.side
        );
        assert!(
            report.nilpotent_entry.abs() > 1e-6 * scale,
            "{:?} BT: nilpotent entry {:.3e} is numerically zero",
            report.bt.side,
            report.nilpotent_entry
        );

        // Closed-form (Q, S, u) against the independent Newton oracle.
        let (u_n, s_n, q_n) = newton_bt_oracle(
            CANON_A,
            CANON_M,
            report.bt.u_double + 0.01,
            report.bt.s - 0.01,
        );
        let err = (u_n - report.bt.u_double)
            .abs()
            .max((s_n - report.bt.s).abs())
            .max((q_n - report.bt.q).abs());
        assert!(
            err < ORACLE_TOL,
            "{:?} BT: closed form vs Newton oracle differ by {err:.3e}",
            report.bt.side
        );
        described.push(format!(
            "{:?} (Q={:.9}, S={:.9}, oracle err {err:.1e})",
            report.bt.side, report.bt.q, report.bt.s
        ));
    }

    let elapsed = t0.elapsed();
    assert_budget("05", elapsed, budget);
    println!(
        "criterion 05 BT points: PASS — {}, {elapsed:.2?}",
        described.join("; ")
    );
}

// ---------------------------------------------------------------------------
// 6. Sotomayor genuineness at the folds
// ---------------------------------------------------------------------------

#[test]
fn criterion_06_sotomayor_genuineness() {
    const REL_TOL: f64 = 1e-8;
    let budget = Duration::from_millis(100);
    let t0 = Instant::now();

    let s5 = 5.0_f64.sqrt();
    let s = 0.25;
    let mut described = Vec::new();
    for thr in equilibria::saddle_node_thresholds(CANON_A, CANON_M) {
        let params = ModelParams::new(CANON_A, CANON_M, thr.q, s).unwrap();
        let report = bifurcation::sotomayor_check(&params).unwrap();

        // Exact algebra for this fold: double root u_d = (5 -/+ sqrt5)/20,
        // simple root u* = T - 2 u_d with T = 0.8, Q = (73 -/+ sqrt5)/200.
        let (q_cf, u_d) = match thr.side {
            FoldSide::Lower => ((73.0 - s5) / 200.0, (5.0 - s5) / 20.0),
            _ => ((73.0 + s5) / 200.0, (5.0 + s5) / 20.0),
        };
        let t = 1.0 - CANON_A + CANON_M;
        let u_simple = t - 2.0 * u_d;
        let trans_cf = s * (1.0 + CANON_A + CANON_M - u_simple) / (2.0 * q_cf);
        let nondeg_cf = -2.0 * s * (2.0 + CANON_A - CANON_M) * (1.0 + CANON_A + CANON_M - u_simple)
            / (q_cf * (u_simple - t));

        let rel_t = (report.transversality - trans_cf).abs() / trans_cf.abs();
        let rel_n = (report.nondegeneracy - nondeg_cf).abs() / nondeg_cf.abs();
        assert!(
            report.transversality.abs() > 1e-12 && report.nondegeneracy.abs() > 1e-12,
            "{:?} fold: a Sotomayor scalar vanished",
            thr.side
        );
        assert!(report.genuine, "{:?} fold not flagged genuine", thr.side);
        assert!(
            rel_t < REL_TOL,
            "{:?} fold: transversality {} vs closed form {} (rel {rel_t:.3e})",
            thr.side,
            report.transversality,
            trans_cf
        );
        assert!(
            rel_n < REL_TOL,
            "{:?} fold: nondegeneracy {} vs closed form {} (rel {rel_n:.3e})",
            thr.side,
            report.nondegeneracy,
            nondeg_cf
        );
        // The finite-difference probe of the second directional derivative
        // must itself be decisively nonzero.
        assert!(
            report.measured_second_directional.abs() > 1e-6,
            "{:?} fold: measured second directional derivative is numerically zero",
            thr.side
        );
        described.push(format!(
            "{:?} (transversality {:.6}, nondegeneracy {:.6}, rel err {:.1e}/{:.1e})",
            thr.side, report.transversality, report.nondegeneracy, rel_t, rel_n
        ));
    }

    let elapsed = t0.elapsed();
    assert_budget("06", elapsed, budget);
    println!(
        "criterion 06 Sotomayor genuineness: PASS — {}, {elapsed:.2?}",
        described.join("; ")
    );
}

// ---------------------------------------------------------------------------
// 7. Cycle inventory
// ---------------------------------------------------------------------------

/// Full cycle inventory: search around every non-saddle interior
/// equilibrium and merge duplicates (periods within 0.5%).
fn cycle_inventory(params: &ModelParams) -> Vec<LimitCycle> {
    let mut all: Vec<LimitCycle> = Vec::new();
    for eq in equilibria::positive_equilibria(params) {
        if eq.det < 0.0 {
            continue;
        }
        for c in dynamics::find_limit_cycles(params, eq.state).unwrap() {
            if !all
                .iter()
                .any(|x| (x.period - c.period).abs() < 0.005 * x.period)
            {
                all.push(c);
            }
        }
    }
    all
}

fn describe_cycles(cycles: &[LimitCycle]) -> String {
    if cycles.is_empty() {
        return "none".into();
    }
    cycles
        .iter()
        .map(|c| {
            format!(
                "{:?} (section u {:.7}, period {:.3}, residual {:.1e}, encloses {})",
                c.stability,
                c.section_u,
                c.period,
                c.residual,
                c.enclosed.len()
            )
        })
        .collect::<Vec<_>>()
        .join("; ")
}

#[test]
fn criterion_07_cycle_inventory() {
    const RESIDUAL_TOL: f64 = 1e-7;
    let budget = Duration::from_secs(30);
    let t0 = Instant::now();
    let mut failures = Vec::new();

    // (0.5, -0.05, 0.51, 0.045): exactly one stable cycle.
    let p1 = ModelParams::new(0.5, -0.05, 0.51, 0.045).unwrap();
    let inv1 = cycle_inventory(&p1);
    println!("  F04b inventory: {}", describe_cycles(&inv1));
    if !(inv1.len() == 1 && matches!(inv1[0].stability, CycleStability::Stable)) {
        failures.push(format!(
            "F04b: expected exactly one stable cycle, found {}",
            describe_cycles(&inv1)
        ));
    }

    // (0.1, -0.1, 0.363, 0.13): one stable cycle enclosing all three
    // equilibria.
    let p2 = ModelParams::new(CANON_A, CANON_M, 0.363, 0.13).unwrap();
    let inv2 = cycle_inventory(&p2);
    println!("  F05c inventory: {}", describe_cycles(&inv2));
    if !(inv2.len() == 1
        && matches!(inv2[0].stability, CycleStability::Stable)
        && inv2[0].enclosed.len() == 3)
    {
        failures.push(format!(
            "F05c: expected one stable cycle enclosing three equilibria, found {}",
            describe_cycles(&inv2)
        ));
    }

    // (0.1, -0.1, 0.345, 0.134332): an inner unstable cycle and an outer
    // stable cycle around the lone interior equilibrium.
    let p3 = ModelParams::new(CANON_A, CANON_M, 0.345, 0.134332).unwrap();
    let inv3 = cycle_inventory(&p3);
    println!("  F10a inventory: {}", describe_cycles(&inv3));
    let f10a_ok = inv3.len() == 2
        && matches!(inv3[0].stability, CycleStability::Unstable)
        && matches!(inv3[1].stability, CycleStability::Stable);
    if !f10a_ok {
        let eq = &equilibria::positive_equilibria(&p3)[0];
        failures.push(format!(
            "F10a: expected an inner unstable and an outer stable cycle, found {}; \
             the interior equilibrium at u = {:.6} computes as {:?} \
             (S - f(u) = {:+.3e}), which is consistent with the single stable \
             cycle and leaves no room for an unstable interior cycle",
            describe_cycles(&inv3),
            eq.state.u,
            eq.kind,
            0.134332 - equilibria::hopf_function(eq.state.u, &p3)
        ));
    }

    for (label, inv) in [("F04b", &inv1), ("F05c", &inv2), ("F10a", &inv3)] {
        for c in inv.iter() {
            if c.residual >= RESIDUAL_TOL {
                failures.push(format!(
                    "{label}: cycle residual {:.3e} exceeds {RESIDUAL_TOL:.0e}",
                    c.residual
                ));
            }
        }
    }

    let elapsed = t0.elapsed();
    assert_budget("07", elapsed, budget);
    let verdict = if failures.is_empty() { "PASS" } else { "FAIL" };
    println!("criterion 07 cycle inventory: {verdict} — {elapsed:.2?}");
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

// ---------------------------------------------------------------------------
// 8. Heteroclinic connection value
// ---------------------------------------------------------------------------

#[test]
fn criterion_08_heteroclinic_value() {
    const EXPECTED: f64 = 0.24962827;
    const TOL: f64 = 5e-4;
    let budget = Duration::from_secs(60);
    let t0 = Instant::now();

    let result = dynamics::connection_search(
        CANON_A,
        CANON_M,
        0.363,
        (0.235, 0.3),
        ConnectionKind::Heteroclinic,
    )
    .unwrap()
    .expect("the separation must change sign over [0.235, 0.3]");

    let err = (result.s_critical - EXPECTED).abs();
    assert!(
        err < TOL,
        "S_c = {} deviates from {EXPECTED} by {err:.3e} (tol {TOL:.0e})",
        result.s_critical
    );
    let elapsed = t0.elapsed();
    assert_budget("08", elapsed, budget);
    println!(
        "criterion 08 heteroclinic value: PASS — S_c = {:.8} (err {err:.2e}), {elapsed:.2?}",
        result.s_critical
    );
}

// ---------------------------------------------------------------------------
// 9. Homoclinic bracket
// ---------------------------------------------------------------------------

#[test]
fn criterion_09_homoclinic_bracket() {
    let (lo, hi) = (0.225, 0.235);
    let budget = Duration::from_secs(60);
    let t0 = Instant::now();

    let result = dynamics::connection_search(
        CANON_A,
        CANON_M,
        0.363,
        (lo, hi),
        ConnectionKind::Homoclinic,
    )
    .unwrap()
    .expect("the homoclinic separation must change sign over [0.225, 0.235]");

    assert!(
        lo < result.s_critical && result.s_critical < hi,
        "S_c = {} is not strictly inside ({lo}, {hi})",
        result.s_critical
    );
    let elapsed = t0.elapsed();
    assert_budget("09", elapsed, budget);
    println!(
        "criterion 09 homoclinic bracket: PASS — S_c = {:.8} strictly inside ({lo}, {hi}), {elapsed:.2?}",
        result.s_critical
    );
}

// ---------------------------------------------------------------------------
// 10. Property suites
// ---------------------------------------------------------------------------

fn fd_jacobian(state: State, params: &ModelParams) -> [[f64; 2]; 2] {
    let h = 1e-6;
    let fu_p = model::vector_field(State::new(state.u + h, state.v), params).unwrap();
    let fu_m = model::vector_field(State::new(state.u - h, state.v), params).unwrap();
    let fv_p = model::vector_field(State::new(state.u, state.v + h), params).unwrap();
    let fv_m = model::vector_field(State::new(state.u, state.v - h), params).unwrap();
    [
        [(fu_p.0 - fu_m.0) / (2.0 * h), (fv_p.0 - fv_m.0) / (2.0 * h)],
        [(fu_p.1 - fu_m.1) / (2.0 * h), (fv_p.1 - fv_m.1) / (2.0 * h)],
    ]
}

#[test]
fn criterion_10_property_suites() {
    let budget = Duration::from_secs(120);
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_a11e);

    // Random in-scope draws: (A, M) in the weak-Allee scope with both folds
    // present, Q strictly between them so the cubic has three simple roots.
    let mut draws: Vec<(ModelParams, Vec<equilibria::Equilibrium>)> = Vec::new();
    let mut attempts = 0usize;
    while draws.len() < 1000 {
        attempts += 1;
        assert!(attempts < 200_000, "in-scope draw acceptance rate collapsed");
        let a = rng.gen_range(0.02..0.98);
        let m = -rng.gen_range(0.02..0.95);
        let thresholds = equilibria::saddle_node_thresholds(a, m);
        if thresholds.len() != 2 || thresholds[0].q <= 0.0 {
            continue;
        }
        let span = thresholds[1].q - thresholds[0].q;
        if span <= 0.0 {
            continue;
        }
        let q = rng.gen_range(thresholds[0].q + 0.05 * span..thresholds[1].q - 0.05 * span);
        let s = rng.gen_range(0.05..1.0);
        let params = ModelParams::new(a, m, q, s).unwrap();
        let eqs = equilibria::positive_equilibria(&params);
        assert_eq!(
            eqs.len(),
            3,
            "three-root region violated at (A, M, Q) = ({a}, {m}, {q})"
        );
        draws.push((params, eqs));
    }

    // (a) The middle of three interior equilibria is always a saddle.
    for (params, eqs) in &draws {
        assert_eq!(
            eqs[1].kind,
            EquilibriumKind::Saddle,
            "middle equilibrium not a saddle at (A, M, Q, S) = ({}, {}, {}, {})",
            params.a,
            params.m,
            params.q,
            params.s
        );
        assert!(eqs[1].det < 0.0);
    }

    // (b) Classification agrees with finite-difference Jacobian sign data.
    for (params, eqs) in draws.iter().take(300) {
        for eq in eqs {
            let j = fd_jacobian(eq.state, params);
            let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
            let tr = j[0][0] + j[1][1];
            let expected = if det < 0.0 {
                EquilibriumKind::Saddle
            } else if tr < 0.0 {
                EquilibriumKind::Attractor
            } else {
                EquilibriumKind::Repeller
            };
            assert_eq!(
                eq.kind, expected,
                "kind vs finite-difference signs (det {det:.3e}, tr {tr:.3e}) at \
                 u = {} for (A, M, Q, S) = ({}, {}, {}, {})",
                eq.state.u, params.a, params.m, params.q, params.s
            );
        }
    }

    // (c) Orbits from random positive initial conditions enter the trapping
    // region.
    let params = ModelParams::new(CANON_A, CANON_M, 0.363, 0.25).unwrap();
    let opts = IntegratorOptions {
        record: false,
        ..IntegratorOptions::default()
    };
    for _ in 0..200 {
        let start = State::new(rng.gen_range(1e-3..2.0), rng.gen_range(1e-3..2.0));
        let traj =
            dynamics::integrate(start, &params, 300.0, Direction::Forward, &opts).unwrap();
        let end = traj.last_state();
        assert!(
            (-1e-12..=1.0 + 1e-6).contains(&end.u) && (-1e-12..=1.0 + 1e-6).contains(&end.v),
            "orbit from ({}, {}) ended outside the trapping region at ({}, {})",
            start.u,
            start.v,
            end.u,
            end.v
        );
    }

    // (d) The predator axis u = 0 is exactly invariant (and the prey axis
    // v = 0 likewise).
    for _ in 0..100 {
        let v = rng.gen_range(1e-6..2.0);
        let (du, _) = model::vector_field(State::new(0.0, v), &params).unwrap();
        assert_eq!(du, 0.0, "u-component nonzero on the u = 0 axis at v = {v}");
        let u = rng.gen_range(1e-6..2.0);
        let (_, dv) = model::vector_field(State::new(u, 0.0), &params).unwrap();
        assert_eq!(dv, 0.0, "v-component nonzero on the v = 0 axis at u = {u}");
    }

    // (e) Determinant identity det J = S u^2 (A + u) D(u) at every interior
    // equilibrium.
    for (params, eqs) in &draws {
        for eq in eqs {
            let j = model::jacobian(eq.state, params).unwrap();
            let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
            let u = eq.state.u;
            let identity =
                params.s * u * u * (params.a + u) * equilibria::det_factor(u, params);
            assert!(
                (det - identity).abs() <= 1e-10 * (1.0 + det.abs()),
                "determinant identity violated at u = {u}: det {det} vs {identity} \
                 for (A, M, Q, S) = ({}, {}, {}, {})",
                params.a,
                params.m,
                params.q,
                params.s
            );
        }
    }

    let elapsed = t0.elapsed();
    assert_budget("10", elapsed, budget);
    println!(
        "criterion 10 property suites: PASS — 1000 middle-saddle draws, 300 FD-sign draws, \
         200 trapping orbits, 100 axis probes, 3000 determinant identities, {elapsed:.2?}"
    );
}

// ---------------------------------------------------------------------------
// 11. Global attractor basin map
// ---------------------------------------------------------------------------

#[test]
fn criterion_11_global_attractor() {
    let budget = Duration::from_secs(120);
    let t0 = Instant::now();

    let params = ModelParams::new(CANON_A, CANON_M, 0.363, 0.18).unwrap();
    let eqs = equilibria::positive_equilibria(&params);
    assert_eq!(eqs[0].kind, EquilibriumKind::Attractor, "P1 must attract");

    let window = StateWindow::new(0.0, 1.0, 0.0, 1.0).unwrap();
    let grid = dynamics::basins(&params, window, 100).unwrap();

    assert_eq!(
        grid.attractors.len(),
        1,
        "expected P1 as the only attractor, found {:?}",
        grid.attractors
    );
    match &grid.attractors[0] {
        AttractorRef::Point(p) => {
            assert!(
                (p.u - eqs[0].state.u).abs() < 1e-3 && (p.v - eqs[0].state.v).abs() < 1e-3,
                "attractor ({}, {}) is not P1 ({}, {})",
                p.u,
                p.v,
                eqs[0].state.u,
                eqs[0].state.v
            );
        }
        other => panic!("expected a point attractor at P1, found {other:?}"),
    }
    let undecided = grid.undecided_fraction();
    assert!(
        undecided < 0.01,
        "undecided fraction {undecided} is not below 1%"
    );
    for (idx, cell) in grid.cells.iter().enumerate() {
        match cell {
            BasinCell::Attractor(0) | BasinCell::Undecided => {}
            other => panic!("cell {idx} maps to {other:?}, not P1"),
        }
    }

    let elapsed = t0.elapsed();
    assert_budget("11", elapsed, budget);
    println!(
        "criterion 11 global attractor: PASS — 100x100 grid, all decided cells map to P1, \
         undecided {:.2}%, {elapsed:.2?}",
        100.0 * undecided
    );
}

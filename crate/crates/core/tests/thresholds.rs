//! Acceptance suite. Each criterion prints one PASS/FAIL line with the
//! measured quantity and its runtime; the process exits non-zero if any
//! criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use mqcbound_core::bounds::{
    asymptotic_bounds, bounds, first_one_over_e_crossing, half_decay_order, lower_bound,
    transition_width, BoundKind,
};
use mqcbound_core::combinatorics::{max_rank, max_rank_even};
use mqcbound_core::oracle::{run_suite, zigzag_max_rank_operator, Status};
use mqcbound_core::BigCount;

/// Outcome of one criterion: pass flag plus a short measurement summary.
type Verdict = (bool, String);

fn closed_form_anchors() -> Verdict {
    let mut worst: f64 = 0.0;
    for n in 1..=50 {
        for k in 1..=9 {
            let p = f64::from(k) / 10.0;
            let b = bounds(n, 1, p).unwrap();
            worst = worst.max((b.lower - p).abs()).max((b.upper - 2.0 * p).abs());
        }
    }
    (worst <= 1e-12, format!("max |b-p|, |B-2p| = {worst:.3e} (tol 1e-12)"))
}

fn pure_state_tightness() -> Verdict {
    let mut worst: f64 = 0.0;
    for n in 1..=50 {
        for q in 1..=n {
            worst = worst.max((lower_bound(n, q, 1.0).unwrap().to_f64() - 1.0).abs());
        }
    }
    (worst <= 1e-12, format!("max |b(1)-1| = {worst:.3e} over q <= N <= 50"))
}

fn rank_anchors() -> Verdict {
    let mut bad = Vec::new();
    for n in 1..=30u32 {
        if max_rank(n, 1).unwrap() != BigCount::pow2(n) {
            bad.push(format!("R({n},1)"));
        }
        if n >= 2 && max_rank(n, n - 1).unwrap().to_u64() != Some(4) {
            bad.push(format!("R({n},{})", n - 1));
        }
        if max_rank(n, n).unwrap().to_u64() != Some(2) {
            bad.push(format!("R({n},{n})"));
        }
    }
    let mut even_pairs = 0;
    for n in (2..=12u32).step_by(2) {
        for q in (2..=n).step_by(2) {
            even_pairs += 1;
            if max_rank(n, q).unwrap() != max_rank_even(n, q).unwrap() {
                bad.push(format!("even form ({n},{q})"));
            }
        }
    }
    let mut dense_pairs = 0;
    for n in 1..=6u32 {
        for q in 1..=n {
            dense_pairs += 1;
            let dense = zigzag_max_rank_operator(n, q).unwrap().rank(1e-9) as u64;
            if max_rank(n, q).unwrap().to_u64() != Some(dense) {
                bad.push(format!("zigzag ({n},{q}): {dense}"));
            }
        }
    }
    (
        bad.is_empty(),
        format!("{even_pairs} even-form and {dense_pairs} zigzag comparisons, mismatches {bad:?}"),
    )
}

fn transition_location() -> Verdict {
    let n = 500u32;
    let mut ok = true;
    let mut parts = Vec::new();
    for p in [0.3, 0.6] {
        let strip = 2.0 * (6.0 * f64::from(n) * (1.0 - p)).sqrt();
        let q = half_decay_order(n, p, BoundKind::Lower).unwrap();
        let dev = q.map(|q| (f64::from(q) - p * f64::from(n)).abs());
        ok &= dev.is_some_and(|d| d <= strip);
        parts.push(format!("p={p}: q_half={q:?}, |q-pN|={dev:?} vs {strip:.1}"));
    }
    (ok, parts.join("; "))
}

fn transition_width_limit() -> Verdict {
    let n = 10_000;
    let centre = transition_width(n, 0.5).unwrap();
    let mut max = f64::NEG_INFINITY;
    let mut argmax = 0.0;
    for k in 1..=19 {
        let p = f64::from(k) * 0.05;
        let w = transition_width(n, p).unwrap().unwrap_or(f64::INFINITY);
        if w > max {
            max = w;
            argmax = p;
        }
    }
    let ok = centre.is_some_and(|w| (w - 0.143).abs() <= 0.015) && max <= 0.16;
    (ok, format!("width(0.5) = {centre:?}, grid max {max:.4} at p = {argmax:.2}"))
}

fn one_over_e_crossing() -> Verdict {
    let p: f64 = 0.99;
    let target = p.ln() - 1.0;
    let first = (1..=400).find(|&n| lower_bound(n, n, p).unwrap().log_mag() < target);
    let closed = first_one_over_e_crossing(p, 400).unwrap();
    let ok = first.is_some_and(|n| (100..=400).contains(&n)) && first == closed;
    (ok, format!("first N = {first:?} (closed form {closed:?}), estimate 200"))
}

fn oracle_suite() -> Verdict {
    let report = run_suite(6, 0).unwrap();
    let failed: Vec<String> = report
        .failures()
        .map(|r| format!("{} N={} q={:?}", r.check, r.params.n, r.params.q))
        .collect();
    let worst = report
        .records
        .iter()
        .filter(|r| r.status == Status::Pass && r.tolerance > 0.0)
        .map(|r| r.max_residual / r.tolerance)
        .fold(0.0, f64::max);
    (
        report.passed && failed.is_empty(),
        format!(
            "{} checks, failures {failed:?}, largest residual/tolerance {worst:.2e}",
            report.records.len()
        ),
    )
}

fn asymptotic_consistency() -> Verdict {
    let n = 500u32;
    let nf = f64::from(n);
    let mut worst: f64 = 0.0;
    let mut at = (0.0, 0);
    let mut points = 0;
    for p in [0.3, 0.6] {
        let strip = 2.0 * (6.0 * nf * (1.0 - p)).sqrt();
        for q in (50..=450).step_by(10) {
            if (f64::from(q) - p * nf).abs() <= strip {
                continue;
            }
            points += 1;
            let exact = bounds(n, q, p).unwrap().log_lower;
            let approx = asymptotic_bounds(n, q, p).unwrap().log_lower;
            let gap = (exact - approx).abs();
            if gap > worst {
                worst = gap;
                at = (p, q);
            }
        }
    }
    (
        worst <= 1.0,
        format!(
            "max |ln b - ln b_asym| = {worst:.3} nats at p = {}, q = {} over {points} points (tol 1.0)",
            at.0, at.1
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Verdict, Duration); 8] = [
        ("closed-form anchors", closed_form_anchors, Duration::from_secs(1)),
        ("pure-state tightness", pure_state_tightness, Duration::from_secs(1)),
        ("rank anchors", rank_anchors, Duration::from_secs(30)),
        ("transition location", transition_location, Duration::from_secs(10)),
        ("transition width", transition_width_limit, Duration::from_secs(300)),
        ("1/e crossing", one_over_e_crossing, Duration::from_secs(5)),
        ("oracle equivalence suite", oracle_suite, Duration::from_secs(600)),
        ("asymptotic consistency", asymptotic_consistency, Duration::from_secs(10)),
    ];
    let mut all = true;
    for (i, (name, check, budget)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let (ok, detail) = catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|_| (false, "panicked".to_string()));
        let elapsed = start.elapsed();
        let in_time = elapsed <= budget;
        let pass = ok && in_time;
        all &= pass;
        println!(
            "criterion {}: {} {name}: {detail} [{:.2} s, budget {} s{}]",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            budget.as_secs(),
            if in_time { "" } else { ", over budget" },
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

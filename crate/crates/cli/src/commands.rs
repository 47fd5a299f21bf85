use clap::Args;
use rayon::prelude::*;
use serde_json::{json, Value};

use mqcbound_core::bounds::{
    convolution_profile, model_width, observable_cluster_limit, snr_requirement,
    transition_report, BoundCalculator,
};
use mqcbound_core::combinatorics::{max_rank_even, rank_report};
use mqcbound_core::oracle::{run_suite, Status};

use crate::ranges::{int_list, int_range, pick, real_list, real_range};
use crate::table::{Cell, Table};
use crate::CliError;

pub struct Output {
    pub table: Table,
    pub meta: Vec<(&'static str, Value)>,
    pub passed: bool,
}

impl From<Table> for Output {
    fn from(table: Table) -> Self {
        Output {
            table,
            meta: Vec::new(),
            passed: true,
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn spins(list: Option<&str>, range: Option<&str>) -> Result<Vec<u32>, CliError> {
    let n = pick("N", list, range, int_list, int_range)?
        .ok_or_else(|| usage("give spin counts with --n or --n-range"))?;
    if let Some(bad) = n.iter().find(|&&n| n == 0) {
        return Err(usage(format!("spin count must be at least 1, got {bad}")));
    }
    Ok(n)
}

fn polarizations(list: Option<&str>, range: Option<&str>, open: bool) -> Result<Vec<f64>, CliError> {
    let p = pick("p", list, range, real_list, real_range)?
        .ok_or_else(|| usage("give polarisations with --p or --p-range"))?;
    for &x in &p {
        let ok = if open { x > 0.0 && x < 1.0 } else { (0.0..=1.0).contains(&x) };
        if !ok {
            let interval = if open { "(0, 1)" } else { "[0, 1]" };
            return Err(usage(format!("polarisation {x} outside {interval}")));
        }
    }
    Ok(p)
}

fn check_orders(n: u32, qs: &[u32]) -> Result<(), CliError> {
    match qs.iter().find(|&&q| q == 0 || q > n) {
        Some(q) => Err(usage(format!("coherence order {q} outside [1, {n}]"))),
        None => Ok(()),
    }
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    /// Spin counts, comma separated.
    #[arg(long = "n")]
    n: Option<String>,
    /// Spin counts as start:stop:step.
    #[arg(long = "n-range")]
    n_range: Option<String>,
    /// Polarisations, comma separated.
    #[arg(long)]
    p: Option<String>,
    /// Polarisations as start:stop:step.
    #[arg(long = "p-range")]
    p_range: Option<String>,
    /// Coherence orders, comma separated (default: 1..=N).
    #[arg(long)]
    q: Option<String>,
    /// Coherence orders as start:stop:step.
    #[arg(long = "q-range")]
    q_range: Option<String>,
}

pub fn bounds(a: &BoundsArgs) -> Result<Output, CliError> {
    let ns = spins(a.n.as_deref(), a.n_range.as_deref())?;
    let ps = polarizations(a.p.as_deref(), a.p_range.as_deref(), false)?;
    let qs = pick("q", a.q.as_deref(), a.q_range.as_deref(), int_list, int_range)?;
    let mut cells = Vec::new();
    for &n in &ns {
        let orders = qs.clone().unwrap_or_else(|| (1..=n).collect());
        check_orders(n, &orders)?;
        for &p in &ps {
            cells.push((n, p, orders.clone()));
        }
    }
    cells.sort_by(|x, y| x.0.cmp(&y.0).then(x.1.total_cmp(&y.1)));

    let blocks = cells
        .par_iter()
        .map(|(n, p, orders)| {
            let calc = BoundCalculator::new(*n, *p)?;
            let mut orders = orders.clone();
            orders.sort_unstable();
            orders
                .iter()
                .map(|&q| {
                    let b = calc.bounds(q)?;
                    Ok(vec![
                        Cell::from(b.n_spins),
                        Cell::from(b.q),
                        Cell::from(b.p),
                        Cell::Big(b.rank().to_string()),
                        Cell::from(b.lower),
                        Cell::from(b.upper),
                        Cell::from(b.log_lower),
                        Cell::from(b.log_upper),
                    ])
                })
                .collect::<Result<Vec<_>, mqcbound_core::Error>>()
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut t = Table::new(&["N", "q", "p", "rank", "lower", "upper", "log_lower", "log_upper"]);
    blocks.into_iter().flatten().for_each(|r| t.push(r));
    Ok(t.into())
}

#[derive(Debug, Args)]
pub struct TransitionArgs {
    /// Spin counts, comma separated.
    #[arg(long = "n")]
    n: Option<String>,
    /// Spin counts as start:stop:step.
    #[arg(long = "n-range")]
    n_range: Option<String>,
    /// Polarisations in (0, 1), comma separated.
    #[arg(long)]
    p: Option<String>,
    /// Polarisations as start:stop:step.
    #[arg(long = "p-range")]
    p_range: Option<String>,
}

pub fn transition(a: &TransitionArgs) -> Result<Output, CliError> {
    let ns = spins(a.n.as_deref(), a.n_range.as_deref())?;
    let ps = polarizations(a.p.as_deref(), a.p_range.as_deref(), true)?;
    let mut cells: Vec<(u32, f64)> = ns.iter().flat_map(|&n| ps.iter().map(move |&p| (n, p))).collect();
    cells.sort_by(|x, y| x.0.cmp(&y.0).then(x.1.total_cmp(&y.1)));
    let reports = cells
        .par_iter()
        .map(|&(n, p)| transition_report(n, p))
        .collect::<Result<Vec<_>, _>>()?;
    let mut t = Table::new(&["N", "p", "q_half_lower", "q_half_upper", "width", "q_c_model", "Q_c_cap"]);
    for r in reports {
        t.push(vec![
            Cell::from(r.n_spins),
            Cell::from(r.p),
            Cell::from(r.q_half_lower),
            Cell::from(r.q_half_upper),
            Cell::from(r.width),
            Cell::from(r.q_c_model),
            Cell::from(r.q_c_cap),
        ]);
    }
    Ok(t.into())
}

#[derive(Debug, Args)]
pub struct Figure2Args {
    /// Polarisation in (0, 1).
    #[arg(long, default_value_t = 0.99)]
    p: f64,
    /// Spin counts as start:stop:step, N >= 2.
    #[arg(long = "n-range", default_value = "2:400:1")]
    n_range: String,
}

pub fn figure2(a: &Figure2Args) -> Result<Output, CliError> {
    if !(a.p > 0.0 && a.p < 1.0) {
        return Err(usage(format!("polarisation {} outside (0, 1)", a.p)));
    }
    let ns = int_range("N", &a.n_range)?;
    if ns.first().is_some_and(|&n| n < 2) {
        return Err(usage("figure2 needs N >= 2"));
    }
    let rows = ns
        .par_iter()
        .map(|&n| {
            let calc = BoundCalculator::new(n, a.p)?;
            Ok((calc.bounds(n)?, calc.bounds(n - 1)?))
        })
        .collect::<Result<Vec<_>, mqcbound_core::Error>>()?;
    let mut t = Table::new(&[
        "N", "b_qN", "B_qN", "b_qNm1", "B_qNm1", "log_b_qN", "log_B_qN", "log_b_qNm1", "log_B_qNm1",
    ]);
    for (top, next) in rows {
        t.push(vec![
            Cell::from(top.n_spins),
            Cell::from(top.lower),
            Cell::from(top.upper),
            Cell::from(next.lower),
            Cell::from(next.upper),
            Cell::from(top.log_lower),
            Cell::from(top.log_upper),
            Cell::from(next.log_lower),
            Cell::from(next.log_upper),
        ]);
    }
    Ok(t.into())
}

#[derive(Debug, Args)]
pub struct ProfileArgs {
    /// Spin count.
    #[arg(long = "n")]
    n: u32,
    /// Polarisation in [0, 1].
    #[arg(long)]
    p: f64,
    /// Orders as start:stop:step (default: -N:N:1).
    #[arg(long = "q-range", allow_hyphen_values = true)]
    q_range: Option<String>,
}

pub fn profile(a: &ProfileArgs) -> Result<Output, CliError> {
    if a.n == 0 {
        return Err(usage("spin count must be at least 1"));
    }
    if !(0.0..=1.0).contains(&a.p) {
        return Err(usage(format!("polarisation {} outside [0, 1]", a.p)));
    }
    let n = f64::from(a.n);
    let qs = match &a.q_range {
        Some(r) => real_range("q", r)?,
        None => real_range("q", &format!("{}:{}:1", -n, n))?,
    };
    let peak = convolution_profile(a.n, a.p, 0.0)?;
    let width = model_width(a.n, a.p);
    let k_obs = observable_cluster_limit(a.n, a.p)?;
    let mut t = Table::new(&["N", "p", "q", "intensity", "relative", "model_width", "K_obs"]);
    for q in qs {
        let v = convolution_profile(a.n, a.p, q)?;
        t.push(vec![
            Cell::from(a.n),
            Cell::from(a.p),
            Cell::from(q),
            Cell::from(v),
            Cell::from(v / peak),
            Cell::from(width),
            Cell::from(k_obs),
        ]);
    }
    Ok(t.into())
}

#[derive(Debug, Args)]
pub struct RankArgs {
    /// Spin counts, comma separated.
    #[arg(long = "n")]
    n: Option<String>,
    /// Spin counts as start:stop:step.
    #[arg(long = "n-range")]
    n_range: Option<String>,
}

pub fn rank(a: &RankArgs) -> Result<Output, CliError> {
    let ns = spins(a.n.as_deref(), a.n_range.as_deref())?;
    let reports = ns.par_iter().map(|&n| rank_report(n)).collect::<Result<Vec<_>, _>>()?;
    let mut t = Table::new(&["N", "q", "rank", "half_rank", "rank_even_form"]);
    for rep in reports {
        for e in rep.entries {
            let even = if rep.n_spins % 2 == 0 && e.q % 2 == 0 {
                Cell::Big(max_rank_even(rep.n_spins, e.q)?.to_string())
            } else {
                Cell::Empty
            };
            t.push(vec![
                Cell::from(rep.n_spins),
                Cell::from(e.q),
                Cell::Big(e.rank.to_string()),
                Cell::Big(e.half_rank.to_string()),
                even,
            ]);
        }
    }
    Ok(t.into())
}

#[derive(Debug, Args)]
pub struct SnrArgs {
    /// Spin count.
    #[arg(long = "n")]
    n: u32,
    /// Polarisation in [0, 1].
    #[arg(long)]
    p: f64,
    /// Coherence orders, comma separated (default: 1..=N).
    #[arg(long)]
    q: Option<String>,
    /// Coherence orders as start:stop:step.
    #[arg(long = "q-range")]
    q_range: Option<String>,
}

pub fn snr(a: &SnrArgs) -> Result<Output, CliError> {
    if a.n == 0 {
        return Err(usage("spin count must be at least 1"));
    }
    if !(0.0..=1.0).contains(&a.p) {
        return Err(usage(format!("polarisation {} outside [0, 1]", a.p)));
    }
    let qs = pick("q", a.q.as_deref(), a.q_range.as_deref(), int_list, int_range)?
        .unwrap_or_else(|| (1..=a.n).collect());
    check_orders(a.n, &qs)?;
    let mut t = Table::new(&["N", "q", "p", "eta", "log_eta", "inside_observable_region"]);
    for q in qs {
        let s = snr_requirement(a.n, q, a.p)?;
        t.push(vec![
            Cell::from(a.n),
            Cell::from(q),
            Cell::from(a.p),
            Cell::from(s.eta),
            Cell::from(s.log_eta),
            Cell::Bool(s.inside_observable_region),
        ]);
    }
    Ok(t.into())
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Largest spin count to simulate (at most 8).
    #[arg(long = "max-n", default_value_t = 4)]
    max_n: u32,
}

pub fn verify(a: &VerifyArgs, seed: u64) -> Result<Output, CliError> {
    let report = run_suite(a.max_n, seed)?;
    let mut t = Table::new(&[
        "check", "N", "q", "p", "status", "max_residual", "tolerance", "samples", "detail",
    ]);
    for r in &report.records {
        t.push(vec![
            Cell::Text(r.check.to_string()),
            Cell::from(r.params.n),
            r.params.q.map_or(Cell::Empty, |q| Cell::Int(i64::from(q))),
            Cell::from(r.params.p),
            Cell::Text(if r.status == Status::Pass { "pass" } else { "fail" }.into()),
            Cell::from(r.max_residual),
            Cell::from(r.tolerance),
            Cell::Int(r.samples as i64),
            r.detail.clone().map_or(Cell::Empty, Cell::Text),
        ]);
    }
    let failed = report.failures().count();
    Ok(Output {
        table: t,
        meta: vec![
            ("max_n", json!(report.max_n)),
            ("passed", json!(report.passed)),
            ("checks", json!(report.records.len())),
            ("failed", json!(failed)),
        ],
        passed: report.passed,
    })
}

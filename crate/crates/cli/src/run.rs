//! Executes scenario checks and renders summaries, bound CSVs and sweeps.

use std::fmt::Write;

use coherence_cost::certify::{
    compute_c, delta_with_recovery, format_sig, tightness_report_with_beta, BoundReport, DeltaOptions,
};
use coherence_cost::channels::compose;
use coherence_cost::linalg::spectral_spread;

use crate::error::{CliError, Result};
use crate::registry::{self, Built, Extra};
use crate::scenario::{Check, Scenario};

/// Floor for checks whose quantity is a purified distance, which resolves
/// only to about the square root of machine precision.
pub const DISTANCE_FLOOR: f64 = 1e-7;

#[derive(Clone, Copy, Debug)]
pub struct RunOptions {
    /// Overrides the scenario's seed.
    pub seed: Option<u64>,
    pub tol: f64,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { seed: None, tol: 1e-9 }
    }
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub check: Check,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub scenario: Scenario,
    pub seed: u64,
    pub tol: f64,
    pub built: Built,
    pub outcomes: Vec<Outcome>,
    pub bounds: Option<BoundReport<f64>>,
}

fn sig(x: f64) -> String {
    format_sig(x, 12)
}

fn within(value: f64, target: f64, tol: f64) -> bool {
    (value - target).abs() <= tol * target.abs().max(1.0)
}

fn requirement(check: Check, built: &Built) -> Option<&'static str> {
    let has_pair = built.result.pair.is_some();
    match check {
        Check::Recovery | Check::C | Check::Delta | Check::Bounds if !has_pair => Some("a reversible pair"),
        Check::Tightness if !matches!(built.extra, Extra::Tightness { .. }) => Some("the tightness dilation"),
        Check::Dilation if matches!(built.extra, Extra::None) => Some("a dilation"),
        _ => None,
    }
}

struct Runner<'a> {
    scenario: &'a Scenario,
    built: &'a Built,
    seed: u64,
    tol: f64,
    c_value: Option<f64>,
}

impl Runner<'_> {
    fn c_value(&mut self) -> Result<f64> {
        if let Some(c) = self.c_value {
            return Ok(c);
        }
        let pair = self.built.result.pair.as_ref().expect("checked by requirement");
        let c = compute_c(&self.built.result.channel, pair)?;
        self.c_value = Some(c);
        Ok(c)
    }

    fn spreads(&self) -> Result<(f64, f64)> {
        let ch = &self.built.result.channel;
        Ok((spectral_spread(ch.input().hamiltonian())?, spectral_spread(ch.output().hamiltonian())?))
    }

    fn bounds(&mut self, eps: Vec<f64>) -> Result<BoundReport<f64>> {
        let c = self.c_value()?;
        let (dhs, dhsp) = self.spreads()?;
        Ok(match self.built.bound_dilation() {
            Some(d) => BoundReport::with_dilation(c, dhs, dhsp, eps, d)?,
            None => BoundReport::lower_only(c, dhs, dhsp, eps),
        })
    }

    fn check(&mut self, check: Check, bounds: &mut Option<BoundReport<f64>>) -> Result<(bool, String)> {
        let tol = self.tol;
        let result = &self.built.result;
        let ch = &result.channel;
        Ok(match check {
            Check::Validate => {
                let cert = ch.validate();
                (
                    cert.tp_residual <= tol && cert.cp_residual <= tol,
                    format!("tp_residual={} cp_residual={}", sig(cert.tp_residual), sig(cert.cp_residual)),
                )
            }
            Check::Gibbs => {
                let v = ch.is_gibbs_preserving(tol);
                (v.residual <= tol, format!("gibbs_residual={}", sig(v.residual)))
            }
            Check::Recovery => {
                let pair = result.pair.as_ref().expect("checked by requirement");
                match pair.recovery() {
                    None => (false, "pair carries no recovery channel".into()),
                    Some(_) => {
                        let [a, b] = pair.recovery_errors(ch)?;
                        let limit = tol.max(DISTANCE_FLOOR);
                        (a <= limit && b <= limit, format!("errors={},{} limit={}", sig(a), sig(b), sig(limit)))
                    }
                }
            }
            Check::C => {
                let c = self.c_value()?;
                let expected = result.meta("C").or_else(|| result.meta("C2").map(f64::sqrt));
                match expected {
                    Some(e) => (within(c, e, tol), format!("C={} expected={}", sig(c), sig(e))),
                    None => (c.is_finite() && c >= 0.0, format!("C={}", sig(c))),
                }
            }
            Check::Delta => {
                let pair = result.pair.as_ref().expect("checked by requirement");
                let est = delta_with_recovery(ch, pair, &DeltaOptions { seed: self.seed, ..DeltaOptions::default() })?;
                let how = if est.optimized { "optimized recovery" } else { "pair recovery" };
                (
                    est.is_exact_zero || est.value <= tol,
                    format!("delta={} via {how}", sig(est.value)),
                )
            }
            Check::Bounds => {
                let report = self.bounds(self.scenario.grid().values())?;
                let monotone = report.lower.windows(2).all(|w| w[1] <= w[0]);
                let nonneg = report.lower.iter().all(|&x| x >= 0.0);
                let mut detail = format!(
                    "points={} C={} delta_HS={} delta_HSp={}",
                    report.epsilon.len(),
                    sig(report.c_value),
                    sig(report.delta_hs),
                    sig(report.delta_hsp)
                );
                if let Some(s) = report.spreads {
                    let _ = write!(detail, " spread_total={} spread_change={}", sig(s.total), sig(s.change));
                }
                let _ = write!(detail, " violations={}", report.violations.len());
                let ok = monotone && nonneg && report.passed();
                *bounds = Some(report);
                (ok, detail)
            }
            Check::Tightness => {
                let Extra::Tightness { a, beta, .. } = self.built.extra else { unreachable!("checked by requirement") };
                let report = tightness_report_with_beta(a, beta, &self.scenario.grid().values())?;
                let detail = format!("a={} points={} violations={}", sig(a), report.epsilon.len(), report.violations.len());
                let ok = report.passed();
                if bounds.is_none() {
                    *bounds = Some(report);
                }
                (ok, detail)
            }
            Check::Dilation => match &self.built.extra {
                Extra::None => unreachable!("checked by requirement"),
                Extra::Tightness { a, dilation, .. } => {
                    let choi = dilation.channel()?.choi_distance(ch)?;
                    let change = spectral_spread(&dilation.energy_change_operator())?;
                    (
                        choi <= tol && within(change, *a, tol),
                        format!("choi_distance={} spread_change={} expected={}", sig(choi), sig(change), sig(*a)),
                    )
                }
                Extra::Faist { dilations, target } => {
                    let d1 = dilations.first.energy_conservation_defect();
                    let d2 = dilations.second.energy_conservation_defect();
                    let composed = compose(&dilations.second.channel()?, &dilations.first.channel()?)?;
                    let choi = composed.choi_distance(target)?;
                    let (up, joint) = (dilations.cost_upper, dilations.cost_joint);
                    (
                        d1 <= tol && d2 <= tol && choi <= tol && within(up, joint, tol.max(1e-8)),
                        format!(
                            "defects={},{} choi_distance={} cost_upper={} cost_joint={}",
                            sig(d1),
                            sig(d2),
                            sig(choi),
                            sig(up),
                            sig(joint)
                        ),
                    )
                }
            },
        })
    }
}

/// Builds the construction and runs every requested check.
pub fn run(scenario: &Scenario, options: &RunOptions) -> Result<Report> {
    if !options.tol.is_finite() || options.tol <= 0.0 {
        return Err(CliError::Invalid(format!("tolerance must be positive, got {}", options.tol)));
    }
    let built = registry::build(&scenario.construction)?;
    for &check in &scenario.checks {
        if let Some(need) = requirement(check, &built) {
            return Err(CliError::Invalid(format!(
                "check '{check}' needs {need}, which {} does not provide",
                scenario.construction.id
            )));
        }
    }
    let seed = options.seed.unwrap_or(scenario.seed);
    let mut runner = Runner { scenario, built: &built, seed, tol: options.tol, c_value: None };
    let mut bounds = None;
    let mut outcomes = Vec::new();
    for &check in &scenario.checks {
        let (passed, detail) = runner.check(check, &mut bounds)?;
        outcomes.push(Outcome { check, passed, detail });
    }
    Ok(Report { scenario: scenario.clone(), seed, tol: options.tol, built, outcomes, bounds })
}

fn param_text(v: &serde_json::Value) -> String {
    match v {
        serde_json::Value::Number(n) => n.as_f64().map(sig).unwrap_or_else(|| n.to_string()),
        serde_json::Value::Array(items) => format!("[{}]", items.iter().map(param_text).collect::<Vec<_>>().join(", ")),
        other => other.to_string(),
    }
}

impl Report {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }

    pub fn failures(&self) -> usize {
        self.outcomes.iter().filter(|o| !o.passed).count()
    }

    pub fn summary(&self) -> String {
        let sc = &self.scenario;
        let mut out = String::new();
        let _ = writeln!(out, "scenario: {}", sc.name);
        let _ = writeln!(out, "construction: {}", sc.construction.id);
        for (k, v) in &sc.construction.params {
            let _ = writeln!(out, "  {k}: {}", param_text(v));
        }
        let _ = writeln!(out, "seed: {}", self.seed);
        let _ = writeln!(out, "tolerance: {}", sig(self.tol));
        let ch = &self.built.result.channel;
        let _ = writeln!(out, "dimensions: {} -> {}", ch.input().dim(), ch.output().dim());
        for (k, v) in &self.built.result.metadata {
            let _ = writeln!(out, "metadata {k}: {}", sig(*v));
        }
        for o in &self.outcomes {
            let _ = writeln!(out, "check {}: {} {}", o.check, if o.passed { "PASS" } else { "FAIL" }, o.detail);
        }
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        let _ = writeln!(out, "verdict: {verdict} ({} of {} checks passed)", self.outcomes.len() - self.failures(), self.outcomes.len());
        out
    }

    /// Bound CSV; header only when no bound check ran.
    pub fn csv(&self) -> String {
        match &self.bounds {
            Some(b) => b.to_csv(),
            None => BoundReport::lower_only(0.0, 0.0, 0.0, Vec::new()).to_csv(),
        }
    }
}

/// CSV of bound or construction quantities with one row per swept value.
///
/// Sweeping `epsilon` gives the bound CSV at those points. Sweeping a numeric
/// construction parameter gives `C`, `delta` and the Hamiltonian spreads.
pub fn sweep(scenario: &Scenario, param: &str, values: &[f64], options: &RunOptions) -> Result<String> {
    let seed = options.seed.unwrap_or(scenario.seed);
    if param == "epsilon" {
        if let Some(bad) = values.iter().find(|e| !e.is_finite() || **e <= 0.0) {
            return Err(CliError::Invalid(format!("epsilon must be positive, got {bad}")));
        }
        let built = registry::build(&scenario.construction)?;
        if let Some(need) = requirement(Check::Bounds, &built) {
            return Err(CliError::Invalid(format!("bounds need {need}")));
        }
        let mut runner = Runner { scenario, built: &built, seed, tol: options.tol, c_value: None };
        return Ok(runner.bounds(values.to_vec())?.to_csv());
    }
    // Validates the name even when there are no values.
    registry::set_numeric(&scenario.construction, param, 0.0).or_else(|e| match e {
        CliError::UnknownParameter { .. } => Err(e),
        _ => Ok(scenario.construction.clone()),
    })?;
    let mut out = format!("{param},C,delta,delta_HS,delta_HSp,gibbs_residual\n");
    for &v in values {
        let construction = registry::set_numeric(&scenario.construction, param, v)?;
        let built = registry::build(&construction)?;
        let mut runner = Runner { scenario, built: &built, seed, tol: options.tol, c_value: None };
        let (c, delta) = match &built.result.pair {
            Some(pair) => {
                let opts = DeltaOptions { seed, ..DeltaOptions::default() };
                let d = delta_with_recovery(&built.result.channel, pair, &opts)?;
                (sig(runner.c_value()?), sig(d.value))
            }
            None => (String::new(), String::new()),
        };
        let (dhs, dhsp) = runner.spreads()?;
        let gibbs = built.result.channel.is_gibbs_preserving(options.tol).residual;
        let _ = writeln!(out, "{},{c},{delta},{},{},{}", sig(v), sig(dhs), sig(dhsp), sig(gibbs));
    }
    Ok(out)
}

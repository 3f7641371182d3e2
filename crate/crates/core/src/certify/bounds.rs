use std::fmt::Write as _;

use crate::channels::Dilation;
use crate::constructions::tightness_example_with_beta;
use crate::error::{Error, Result};
use crate::linalg::spectral_spread;
use crate::scalar::Real;

use super::compute_c;

/// Log-spaced `ε` values between `min` and `max`, both included.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EpsilonGrid {
    pub min: f64,
    pub max: f64,
    pub points_per_decade: usize,
}

impl EpsilonGrid {
    pub const DEFAULT_POINTS_PER_DECADE: usize = 25;

    pub fn new(min: f64, max: f64, points_per_decade: usize) -> Result<Self> {
        if !min.is_finite() || min <= 0.0 || !max.is_finite() || max < min || points_per_decade == 0 {
            return Err(Error::InvalidSpectrum(format!(
                "epsilon grid needs 0 < min <= max and a positive density, got [{min}, {max}] at {points_per_decade}"
            )));
        }
        Ok(Self { min, max, points_per_decade })
    }

    pub fn decades(min: f64, max: f64) -> Result<Self> {
        Self::new(min, max, Self::DEFAULT_POINTS_PER_DECADE)
    }

    pub fn len(&self) -> usize {
        if self.max == self.min {
            return 1;
        }
        ((self.max / self.min).log10() * self.points_per_decade as f64).round().max(1.0) as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn values<R: Real>(&self) -> Vec<R> {
        log_points(self.min, self.max, self.len())
    }
}

/// `n` log-spaced points from `min` to `max` inclusive.
pub fn log_points<R: Real>(min: f64, max: f64, n: usize) -> Vec<R> {
    if n <= 1 {
        return vec![R::lit(min)];
    }
    let (a, b) = (min.ln(), max.ln());
    (0..n)
        .map(|k| {
            if k == 0 {
                R::lit(min)
            } else if k == n - 1 {
                R::lit(max)
            } else {
                R::lit((a + (b - a) * k as f64 / (n - 1) as f64).exp())
            }
        })
        .collect()
}

/// `max(0, C/ε − Δ(H_S) − 3Δ(H_S'))` at each `ε`.
pub fn lower_bound_curve<R: Real>(c: R, delta_hs: R, delta_hsp: R, eps: &[R]) -> Vec<R> {
    let three = R::lit(3.0);
    eps.iter().map(|&e| (c / e - delta_hs - three * delta_hsp).max(R::zero())).collect()
}

/// Spectral spreads entering the dilation bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DilationSpreads<R: Real> {
    /// `Δ(H_tot)`.
    pub total: R,
    /// `Δ(H_tot − V†H_tot V)`.
    pub change: R,
}

/// Spreads of a dilation whose environment starts in a pure incoherent state.
pub fn dilation_spreads<R: Real>(dilation: &Dilation<R>) -> Result<DilationSpreads<R>> {
    let env = dilation.env_state();
    if env.pure_vector().is_none() && env.eigen().eigenvalues.iter().filter(|&&l| l > R::structural_tol()).count() > 1 {
        return Err(Error::InvalidState("dilation bound needs a pure environment state".into()));
    }
    let residual = env.coherence_residual();
    if residual > R::structural_tol() {
        return Err(Error::CoherentEnvironmentState { residual: residual.as_f64() });
    }
    Ok(DilationSpreads {
        total: spectral_spread(&dilation.total_hamiltonian_in())?,
        change: spectral_spread(&dilation.energy_change_operator())?,
    })
}

/// `Δ(H_tot − V†H_tot V)/(2ε) + √2 Δ(H_tot)` at each `ε`.
pub fn upper_bound_curve<R: Real>(dilation: &Dilation<R>, eps: &[R]) -> Result<Vec<R>> {
    let s = dilation_spreads(dilation)?;
    Ok(upper_from_spreads(&s, eps))
}

fn upper_from_spreads<R: Real>(s: &DilationSpreads<R>, eps: &[R]) -> Vec<R> {
    let two = R::lit(2.0);
    eps.iter().map(|&e| s.change / (two * e) + R::SQRT_2() * s.total).collect()
}

/// Lower and optional upper `√F_c^ε` curves over an `ε` grid.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport<R: Real> {
    pub epsilon: Vec<R>,
    pub lower: Vec<R>,
    pub upper: Option<Vec<R>>,
    pub c_value: R,
    pub delta_hs: R,
    pub delta_hsp: R,
    pub spreads: Option<DilationSpreads<R>>,
    /// Descriptions of grid points failing a check; empty when all hold.
    pub violations: Vec<String>,
}

impl<R: Real> BoundReport<R> {
    /// Lower curve only.
    pub fn lower_only(c_value: R, delta_hs: R, delta_hsp: R, eps: Vec<R>) -> Self {
        let lower = lower_bound_curve(c_value, delta_hs, delta_hsp, &eps);
        Self { epsilon: eps, lower, upper: None, c_value, delta_hs, delta_hsp, spreads: None, violations: Vec::new() }
    }

    /// Both curves, flagging points where the lower bound exceeds the upper bound.
    pub fn with_dilation(c_value: R, delta_hs: R, delta_hsp: R, eps: Vec<R>, dilation: &Dilation<R>) -> Result<Self> {
        let spreads = dilation_spreads(dilation)?;
        let mut report = Self::lower_only(c_value, delta_hs, delta_hsp, eps);
        let upper = upper_from_spreads(&spreads, &report.epsilon);
        for ((e, lo), up) in report.epsilon.iter().zip(&report.lower).zip(&upper) {
            if lo > up {
                report.violations.push(format!("lower {lo} exceeds upper {up} at epsilon {e}"));
            }
        }
        report.upper = Some(upper);
        report.spreads = Some(spreads);
        Ok(report)
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    /// CSV with header `epsilon,lower_sqrtF,upper_sqrtF,C,delta_HS,delta_HSp`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("epsilon,lower_sqrtF,upper_sqrtF,C,delta_HS,delta_HSp\n");
        for (k, e) in self.epsilon.iter().enumerate() {
            let upper = self.upper.as_ref().map(|u| format_sig(u[k].as_f64(), 12)).unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                format_sig(e.as_f64(), 12),
                format_sig(self.lower[k].as_f64(), 12),
                upper,
                format_sig(self.c_value.as_f64(), 12),
                format_sig(self.delta_hs.as_f64(), 12),
                format_sig(self.delta_hsp.as_f64(), 12),
            );
        }
        out
    }
}

/// Tightness sandwich for scale `a`, with `β = 1`.
pub fn tightness_report<R: Real>(a: R, eps: &[R]) -> Result<BoundReport<R>> {
    tightness_report_with_beta(a, R::one(), eps)
}

/// Evaluates both curves for the tightness example and checks, per point,
/// `lower ≥ C/ε − a`, `upper ≤ √2·C/ε + a` and `lower ≤ upper`.
pub fn tightness_report_with_beta<R: Real>(a: R, beta: R, eps: &[R]) -> Result<BoundReport<R>> {
    let t = tightness_example_with_beta(a, beta)?;
    let pair = t.result.pair.as_ref().expect("tightness example carries its pair");
    let c_value = compute_c(&t.result.channel, pair)?;
    let delta_hs = spectral_spread(t.result.channel.input().hamiltonian())?;
    let delta_hsp = spectral_spread(t.result.channel.output().hamiltonian())?;
    let mut report = BoundReport::with_dilation(c_value, delta_hs, delta_hsp, eps.to_vec(), &t.dilation)?;
    let upper = report.upper.clone().expect("set by with_dilation");
    let slack = R::derived_tol();
    for ((e, lo), up) in eps.iter().zip(&report.lower).zip(&upper) {
        let lower_target = c_value / *e - a;
        if *lo < lower_target - slack * R::one().max(lower_target.abs()) {
            report.violations.push(format!("lower {lo} below C/eps - a = {lower_target} at epsilon {e}"));
        }
        let upper_target = R::SQRT_2() * c_value / *e + a;
        if *up > upper_target + slack * R::one().max(upper_target.abs()) {
            report.violations.push(format!("upper {up} above sqrt2 C/eps + a = {upper_target} at epsilon {e}"));
        }
    }
    Ok(report)
}

/// `%g`-style formatting with `digits` significant digits.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        format!("{}e{}", trim_zeros(mantissa), exp)
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

//! Named constructions, their parameter schemas and builders.

use std::collections::BTreeMap;

use coherence_cost::channels::{Dilation, QuantumChannel};
use coherence_cost::constructions::{
    adjacent_level_channel, coherent_measurement_channel_with_gap, faist_channel, faist_dilations,
    general_pairwise_channel, ordered_weight_inputs, state_transition_channel, tightness_example_with_beta,
    ConstructionResult, FaistDilations,
};
use coherence_cost::f64::{Density, Matrix, Pure, System};
use coherence_cost::C;
use serde_json::Value;

use crate::error::{CliError, Result};
use crate::scenario::Construction;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Real,
    Index,
    Reals,
    /// Complex amplitudes, each a number or `[re, im]`.
    Vector,
    /// Row-major complex matrix.
    Matrix,
}

impl Kind {
    pub fn is_numeric(self) -> bool {
        matches!(self, Kind::Real | Kind::Index)
    }

    fn label(self) -> &'static str {
        match self {
            Kind::Real => "real",
            Kind::Index => "index",
            Kind::Reals => "list of reals",
            Kind::Vector => "complex vector",
            Kind::Matrix => "complex matrix",
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Param {
    pub name: &'static str,
    pub kind: Kind,
    /// JSON text of the default; `None` marks the parameter as required.
    pub default: Option<&'static str>,
    pub doc: &'static str,
}

#[derive(Clone, Copy, Debug)]
pub struct Spec {
    pub id: &'static str,
    pub summary: &'static str,
    pub params: &'static [Param],
    pub has_pair: bool,
    pub has_dilation: bool,
}

const fn p(name: &'static str, kind: Kind, default: Option<&'static str>, doc: &'static str) -> Param {
    Param { name, kind, default, doc }
}

const BETA: Param = p("beta", Kind::Real, Some("1.0"), "inverse temperature shared by all systems");
const GAP: Param = p("gap", Kind::Real, Some("1.0"), "qubit Hamiltonian gap, H_S = gap |1><1|");
const ETA: Param = p(
    "eta",
    Kind::Matrix,
    Some("[[0.5, 0.5], [0.5, 0.5]]"),
    "qubit state prepared on outcome 1",
);

pub const SPECS: &[Spec] = &[
    Spec {
        id: "coherent_measurement_channel",
        summary: "Measures a qubit with H_S = gap |1><1| in the |+>, |-> basis and prepares |0> or |1> on a \
                  trivial qubit. The pair {|+>, |->} is exactly recoverable and C = gap/2.",
        params: &[BETA, GAP],
        has_pair: true,
        has_dilation: false,
    },
    Spec {
        id: "faist_channel",
        summary: "Qubit channel rho -> <1|rho|1> eta + <0|rho|0> sigma, with sigma fixed by Gibbs preservation.",
        params: &[GAP, BETA, ETA],
        has_pair: false,
        has_dilation: false,
    },
    Spec {
        id: "faist_dilations",
        summary: "Two-step dilation of faist_channel through a classical register with zero Hamiltonian. The \
                  coherence spent is qfi(eta) + qfi(sigma).",
        params: &[GAP, BETA, ETA],
        has_pair: false,
        has_dilation: true,
    },
    Spec {
        id: "general_pairwise_channel",
        summary: "Measure-and-prepare channel sending psi to phi and its complement to the state fixed by Gibbs \
                  preservation. Give psi and phi, or levels i, j, ip with tau_S[i] < tau_S'[ip] < tau_S[j].",
        params: &[
            p("energies", Kind::Reals, None, "input energies"),
            p("energies_out", Kind::Reals, None, "output energies"),
            BETA,
            p("psi", Kind::Vector, Some("null"), "input pure state"),
            p("phi", Kind::Vector, Some("null"), "output pure state"),
            p("i", Kind::Index, Some("null"), "input level with the smaller Gibbs weight"),
            p("j", Kind::Index, Some("null"), "input level with the larger Gibbs weight"),
            p("ip", Kind::Index, Some("null"), "output level"),
        ],
        has_pair: true,
        has_dilation: false,
    },
    Spec {
        id: "adjacent_level_channel",
        summary: "Measures levels i, i+1 of a d-level system in the |+>, |-> basis into levels 0, 1 of a \
                  d'-level system, with the rest sent to a fixed state. C = (E_(i+1) - E_i)/2.",
        params: &[
            p("d", Kind::Index, None, "input dimension, at least 3"),
            p("dp", Kind::Index, None, "output dimension, between 2 and d"),
            p("energies", Kind::Reals, None, "ascending energies; the output uses the first dp"),
            p("i", Kind::Index, Some("1"), "lower coherent level, 1 <= i <= d-2"),
            BETA,
        ],
        has_pair: true,
        has_dilation: false,
    },
    Spec {
        id: "state_transition_channel",
        summary: "Channel sending sqrt(r)|i> + sqrt(1-r)|j> to |ip>, paired with its orthogonal partner. \
                  C^2 = r(1-r)(E_i - E_j)^2.",
        params: &[
            p("energies", Kind::Reals, None, "input energies"),
            p("energies_out", Kind::Reals, None, "output energies"),
            BETA,
            p("i", Kind::Index, None, "input level with the smaller Gibbs weight"),
            p("j", Kind::Index, None, "input level with the larger Gibbs weight"),
            p("ip", Kind::Index, None, "output level"),
        ],
        has_pair: true,
        has_dilation: false,
    },
    Spec {
        id: "tightness_example",
        summary: "Coherent measurement channel with gap a/sqrt(2) and an explicit dilation by a Hadamard and a \
                  CNOT. Its bounds sandwich the coherence cost within a constant.",
        params: &[p("a", Kind::Real, Some("1.0"), "scale, a > 0"), BETA],
        has_pair: true,
        has_dilation: true,
    },
];

pub fn ids() -> Vec<&'static str> {
    SPECS.iter().map(|s| s.id).collect()
}

pub fn spec(id: &str) -> Result<&'static Spec> {
    SPECS.iter().find(|s| s.id == id).ok_or_else(|| CliError::UnknownConstruction {
        name: id.to_string(),
        available: ids().join(", "),
    })
}

/// Parameter schema and summary as printed by `describe`.
pub fn describe(id: &str) -> Result<String> {
    let s = spec(id)?;
    let mut out = format!("{}\n\n{}\n\nparameters:\n", s.id, s.summary.split_whitespace().collect::<Vec<_>>().join(" "));
    for p in s.params {
        let default = match p.default {
            None => "required".to_string(),
            Some("null") => "optional".to_string(),
            Some(d) => format!("default {d}"),
        };
        out.push_str(&format!("  {:<13} {:<15} {:<28} {}\n", p.name, p.kind.label(), default, p.doc));
    }
    let mut extras = Vec::new();
    if s.has_pair {
        extras.push("reversible pair");
    }
    if s.has_dilation {
        extras.push("dilation");
    }
    if !extras.is_empty() {
        out.push_str(&format!("\nprovides: {}\n", extras.join(", ")));
    }
    Ok(out)
}

struct Params<'a> {
    spec: &'static Spec,
    map: &'a BTreeMap<String, Value>,
}

fn bad(name: &str, kind: Kind) -> CliError {
    CliError::Invalid(format!("parameter '{name}' must be a {}", kind.label()))
}

fn complex(v: &Value) -> Option<C<f64>> {
    match v {
        Value::Number(n) => n.as_f64().map(|x| C::new(x, 0.0)),
        Value::Array(a) if a.len() == 2 => Some(C::new(a[0].as_f64()?, a[1].as_f64()?)),
        _ => None,
    }
}

fn vector(v: &Value) -> Option<Vec<C<f64>>> {
    v.as_array()?.iter().map(complex).collect()
}

fn matrix(v: &Value) -> Option<Matrix> {
    let rows: Vec<Vec<C<f64>>> = v.as_array()?.iter().map(vector).collect::<Option<_>>()?;
    Matrix::from_rows(&rows).ok()
}

impl<'a> Params<'a> {
    /// Raw value after defaults; `None` for an absent optional parameter.
    fn raw(&self, name: &str) -> Result<Option<Value>> {
        let param = self.spec.params.iter().find(|p| p.name == name).expect("schema lists every parameter read");
        match (self.map.get(name), param.default) {
            (Some(v), _) => Ok(Some(v.clone())),
            (None, None) => Err(CliError::Invalid(format!("{} requires parameter '{name}'", self.spec.id))),
            (None, Some(d)) => Ok(Some(serde_json::from_str::<Value>(d).expect("defaults are JSON")).filter(|v| !v.is_null())),
        }
    }

    fn opt<T>(&self, name: &str, kind: Kind, f: impl Fn(&Value) -> Option<T>) -> Result<Option<T>> {
        self.raw(name)?.map(|v| f(&v).ok_or_else(|| bad(name, kind))).transpose()
    }

    fn req<T>(&self, name: &str, kind: Kind, f: impl Fn(&Value) -> Option<T>) -> Result<T> {
        self.opt(name, kind, f)?
            .ok_or_else(|| CliError::Invalid(format!("{} requires parameter '{name}'", self.spec.id)))
    }

    fn real(&self, name: &str) -> Result<f64> {
        self.req(name, Kind::Real, Value::as_f64)
    }

    fn index(&self, name: &str) -> Result<usize> {
        self.opt_index(name)?.ok_or_else(|| CliError::Invalid(format!("{} requires parameter '{name}'", self.spec.id)))
    }

    fn opt_index(&self, name: &str) -> Result<Option<usize>> {
        self.opt(name, Kind::Index, |v| v.as_u64().map(|x| x as usize))
    }

    fn reals(&self, name: &str) -> Result<Vec<f64>> {
        self.req(name, Kind::Reals, |v| v.as_array()?.iter().map(Value::as_f64).collect())
    }

    fn vector(&self, name: &str) -> Result<Option<Vec<C<f64>>>> {
        self.opt(name, Kind::Vector, vector)
    }

    fn matrix(&self, name: &str) -> Result<Matrix> {
        self.req(name, Kind::Matrix, matrix)
    }
}

/// Rejects unknown keys, missing required keys and values of the wrong kind.
pub fn check_params(c: &Construction) -> Result<()> {
    let spec = spec(&c.id)?;
    for key in c.params.keys() {
        if !spec.params.iter().any(|p| p.name == key) {
            let names: Vec<&str> = spec.params.iter().map(|p| p.name).collect();
            return Err(CliError::Invalid(format!(
                "unknown parameter '{key}' for {}; expected one of: {}",
                spec.id,
                names.join(", ")
            )));
        }
    }
    let params = Params { spec, map: &c.params };
    for p in spec.params {
        match p.kind {
            Kind::Real => params.opt(p.name, p.kind, Value::as_f64).map(drop)?,
            Kind::Index => params.opt_index(p.name).map(drop)?,
            Kind::Reals => params.opt(p.name, p.kind, |v| v.as_array()?.iter().map(Value::as_f64).collect::<Option<Vec<_>>>()).map(drop)?,
            Kind::Vector => params.vector(p.name).map(drop)?,
            Kind::Matrix => params.opt(p.name, p.kind, matrix).map(drop)?,
        }
    }
    if spec.id == "general_pairwise_channel" {
        let states = ["psi", "phi"].map(|k| c.params.contains_key(k));
        let levels = ["i", "j", "ip"].map(|k| c.params.contains_key(k));
        let full = |xs: &[bool]| xs.iter().all(|&x| x);
        let none = |xs: &[bool]| xs.iter().all(|&x| !x);
        if !((full(&states) && none(&levels)) || (none(&states) && full(&levels))) {
            return Err(CliError::Invalid("general_pairwise_channel takes either psi and phi, or i, j and ip".into()));
        }
    }
    Ok(())
}

/// Replaces a numeric parameter, as used by `sweep`.
pub fn set_numeric(c: &Construction, name: &str, value: f64) -> Result<Construction> {
    let spec = spec(&c.id)?;
    let numeric: Vec<&str> = spec.params.iter().filter(|p| p.kind.is_numeric()).map(|p| p.name).collect();
    let param = spec.params.iter().find(|p| p.name == name && p.kind.is_numeric()).ok_or_else(|| {
        CliError::UnknownParameter {
            name: name.to_string(),
            construction: spec.id.to_string(),
            available: numeric.join(", "),
        }
    })?;
    let v = match param.kind {
        Kind::Index if value >= 0.0 && value.fract() == 0.0 => Value::from(value as u64),
        Kind::Index => return Err(bad(name, Kind::Index)),
        _ => serde_json::Number::from_f64(value).map(Value::Number).ok_or_else(|| bad(name, Kind::Real))?,
    };
    let mut out = c.clone();
    out.params.insert(name.to_string(), v);
    check_params(&out)?;
    Ok(out)
}

/// Construction-specific objects beyond the channel and pair.
#[derive(Clone, Debug)]
#[allow(clippy::large_enum_variant)]
pub enum Extra {
    None,
    Tightness { a: f64, beta: f64, dilation: Dilation<f64> },
    Faist { dilations: FaistDilations<f64>, target: QuantumChannel<f64> },
}

#[derive(Clone, Debug)]
pub struct Built {
    pub result: ConstructionResult<f64>,
    pub extra: Extra,
}

impl Built {
    /// The dilation whose spreads feed the upper bound curve, if any.
    pub fn bound_dilation(&self) -> Option<&Dilation<f64>> {
        match &self.extra {
            Extra::Tightness { dilation, .. } => Some(dilation),
            _ => None,
        }
    }
}

fn wrap<T>(r: coherence_cost::Result<T>) -> Result<T> {
    r.map_err(CliError::construction)
}

fn state(m: Matrix, s: &System) -> Result<Density> {
    wrap(Density::new_tol(m, s, 1e-9))
}

fn faist_parts(p: &Params) -> Result<(System, Density, ConstructionResult<f64>)> {
    let s = wrap(System::qubit("S", p.real("gap")?, p.real("beta")?))?;
    let eta = state(p.matrix("eta")?, &s)?;
    let result = wrap(faist_channel(&s, &eta))?;
    Ok((s, eta, result))
}

pub fn build(c: &Construction) -> Result<Built> {
    let spec = spec(&c.id)?;
    check_params(c)?;
    let p = Params { spec, map: &c.params };
    let plain = |result| Ok(Built { result, extra: Extra::None });
    match spec.id {
        "coherent_measurement_channel" => plain(wrap(coherent_measurement_channel_with_gap(p.real("gap")?, p.real("beta")?))?),
        "faist_channel" => plain(faist_parts(&p)?.2),
        "faist_dilations" => {
            let (s, eta, result) = faist_parts(&p)?;
            let tau = s.gibbs_state();
            let w = s.gibbs_weights();
            let sigma = state((tau.matrix() - &eta.matrix().scale(w[1])).scale(1.0 / w[0]), &s)?;
            let dilations = wrap(faist_dilations(&eta, &sigma))?;
            let target = result.channel.clone();
            Ok(Built { result, extra: Extra::Faist { dilations, target } })
        }
        "general_pairwise_channel" => {
            let beta = p.real("beta")?;
            let s = wrap(System::diagonal("S", &p.reals("energies")?, beta))?;
            let sp = wrap(System::diagonal("S'", &p.reals("energies_out")?, beta))?;
            let (psi, phi) = match (p.vector("psi")?, p.vector("phi")?) {
                (Some(a), Some(b)) => (wrap(Pure::normalized(a, &s))?, wrap(Pure::normalized(b, &sp))?),
                _ => {
                    let inputs = wrap(ordered_weight_inputs(&s, &sp, p.index("i")?, p.index("j")?, p.index("ip")?))?;
                    (inputs.psi, inputs.phi)
                }
            };
            plain(wrap(general_pairwise_channel(&psi, &phi))?)
        }
        "adjacent_level_channel" => plain(wrap(adjacent_level_channel(
            p.index("d")?,
            p.index("dp")?,
            &p.reals("energies")?,
            p.index("i")?,
            p.real("beta")?,
        ))?),
        "state_transition_channel" => {
            let beta = p.real("beta")?;
            let s = wrap(System::diagonal("S", &p.reals("energies")?, beta))?;
            let sp = wrap(System::diagonal("S'", &p.reals("energies_out")?, beta))?;
            plain(wrap(state_transition_channel(&s, &sp, p.index("i")?, p.index("j")?, p.index("ip")?))?.result)
        }
        "tightness_example" => {
            let (a, beta) = (p.real("a")?, p.real("beta")?);
            let t = wrap(tightness_example_with_beta(a, beta))?;
            Ok(Built { result: t.result, extra: Extra::Tightness { a, beta, dilation: t.dilation } })
        }
        other => unreachable!("registry entry {other} has no builder"),
    }
}

//! Spectral sequences and the worked example presets.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{half, int, ratio};
use crate::region::{decay_order, ParameterPoint, StabilityVerdict};

/// Eigenvalues `mu_n` of `A`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SpectralSequence {
    /// `mu_n = c n^p`, `n = 1..=count`.
    PowerLaw { c: f64, p: f64, count: usize },
    List { values: Vec<f64> },
}

impl SpectralSequence {
    pub fn values(&self) -> Vec<f64> {
        match self {
            SpectralSequence::PowerLaw { c, p, count } => (1..=*count).map(|n| c * (n as f64).powf(*p)).collect(),
            SpectralSequence::List { values } => values.clone(),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            SpectralSequence::PowerLaw { count, .. } => *count,
            SpectralSequence::List { values } => values.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Parses `n4:400`, `<c>n<p>:<count>` (e.g. `2n2:50`) or
    /// `list:1,16,81`.
    pub fn parse(spec: &str) -> Result<Self> {
        let bad = |reason: &str| Error::ModeSpec {
            spec: spec.to_string(),
            reason: reason.to_string(),
        };
        let s = spec.trim();
        if let Some(list) = s.strip_prefix("list:") {
            let values = list
                .split(',')
                .map(|v| v.trim().parse::<f64>().map_err(|_| bad("list entries must be numbers")))
                .collect::<Result<Vec<_>>>()?;
            return explicit(values).map_err(|e| bad(&e.to_string()));
        }
        let (law, count) = s.split_once(':').ok_or_else(|| bad("expected <c>n<p>:<count> or list:..."))?;
        let count: usize = count.trim().parse().map_err(|_| bad("count must be a positive integer"))?;
        let (c, p) = law.split_once('n').ok_or_else(|| bad("missing `n` in power law"))?;
        let c: f64 = if c.is_empty() { 1.0 } else { c.parse().map_err(|_| bad("bad coefficient"))? };
        let p: f64 = p.parse().map_err(|_| bad("bad exponent"))?;
        mu_sequence(c, p, count).map_err(|e| bad(&e.to_string()))
    }
}

/// Power law `c n^p` with `count` terms.
pub fn mu_sequence(c: f64, p: f64, count: usize) -> Result<SpectralSequence> {
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::domain("c", c, "must be > 0"));
    }
    if !(p.is_finite() && p > 0.0) {
        return Err(Error::domain("p", p, "must be > 0"));
    }
    if count == 0 {
        return Err(Error::domain("count", count, "must be >= 1"));
    }
    Ok(SpectralSequence::PowerLaw { c, p, count })
}

/// Explicit sequence; the values are sorted.
pub fn explicit(mut values: Vec<f64>) -> Result<SpectralSequence> {
    if values.is_empty() {
        return Err(Error::domain("values", "[]", "need at least one value"));
    }
    if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
        return Err(Error::domain("mu", v, "must be finite and > 0"));
    }
    values.sort_by(f64::total_cmp);
    Ok(SpectralSequence::List { values })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    pub point: ParameterPoint,
    pub sequence: SpectralSequence,
    pub expected_verdict: StabilityVerdict,
}

pub const PRESET_NAMES: [&str; 6] = [
    "example1",
    "example1-m0",
    "example2",
    "example2-m0",
    "example3",
    "example3-m0",
];

/// Worked examples at `sigma = 2`, `tau = 1`, with `mu_n = n^4` (hinged
/// beam on `(0, pi)`; the clamped plate of example 3 has the same growth
/// but not these exact values).
pub fn preset(name: &str) -> Result<Preset> {
    let (description, point) = match name {
        "example1" => ("plate with rotational inertia, Cattaneo heat flux", ParameterPoint::inertial(int(0), int(1), half(), 1.0)),
        "example1-m0" => ("example1 without rotational inertia", ParameterPoint::noninertial(int(0), int(1))),
        "example2" => ("wave-type coupling with inertial term", ParameterPoint::inertial(half(), int(0), half(), 1.0)),
        "example2-m0" => ("example2 without inertial term", ParameterPoint::noninertial(half(), int(0))),
        "example3" => ("strong coupling and damping with inertial term", ParameterPoint::inertial(int(1), int(1), half(), 1.0)),
        "example3-m0" => ("example3 without inertial term", ParameterPoint::noninertial(int(1), int(1))),
        _ => return Err(Error::UnknownPreset(name.to_string())),
    };
    let point = point?;
    let expected_verdict = expected(name);
    debug_assert_eq!(decay_order(&point).as_ref(), Ok(&expected_verdict));
    Ok(Preset {
        name: PRESET_NAMES.iter().find(|n| **n == name).expect("listed"),
        description,
        point,
        sequence: SpectralSequence::PowerLaw { c: 1.0, p: 4.0, count: 400 },
        expected_verdict,
    })
}

fn expected(name: &str) -> StabilityVerdict {
    use crate::region::{RegionLabel::*, VerdictKind::Polynomial};
    let (region, k) = match name {
        "example1" => (T3, ratio(1, 6)),
        "example1-m0" => (L23s, half()),
        "example2" => (L124, half()),
        "example2-m0" => (L124s, half()),
        "example3" => (F14, ratio(3, 2)),
        _ => (F14s, int(1)),
    };
    StabilityVerdict {
        kind: Polynomial,
        order: Some(k),
        region,
    }
}

//! Parameter atlas: region membership and predicted decay verdicts.

use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::{self, half, int, one, Rational, Tolerance};

/// One abstract system: exponents `(alpha, beta, gamma)` and coefficients
/// `(m, sigma, tau)`. `gamma` is only meaningful when `m > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParameterPoint {
    pub alpha: Rational,
    pub beta: Rational,
    pub gamma: Option<Rational>,
    pub m: f64,
    pub sigma: f64,
    pub tau: f64,
}

impl ParameterPoint {
    pub fn new(
        alpha: Rational,
        beta: Rational,
        gamma: Option<Rational>,
        m: f64,
        sigma: f64,
        tau: f64,
    ) -> Result<Self> {
        check_unit("alpha", &alpha)?;
        check_unit("beta", &beta)?;
        if !(m.is_finite() && m >= 0.0) {
            return Err(Error::domain("m", m, "must be finite and >= 0"));
        }
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::domain("sigma", sigma, "must be finite and > 0"));
        }
        if !(tau.is_finite() && tau > 0.0) {
            return Err(Error::domain("tau", tau, "must be finite and > 0"));
        }
        let gamma = if m > 0.0 {
            let g = gamma.ok_or_else(|| Error::domain("gamma", "missing", "required when m > 0"))?;
            check_gamma(&g)?;
            Some(g)
        } else {
            gamma
        };
        Ok(ParameterPoint {
            alpha,
            beta,
            gamma,
            m,
            sigma,
            tau,
        })
    }

    /// Inertial point with the table defaults `sigma = 2`, `tau = 1`.
    pub fn inertial(alpha: Rational, beta: Rational, gamma: Rational, m: f64) -> Result<Self> {
        Self::new(alpha, beta, Some(gamma), m, 2.0, 1.0)
    }

    /// Point without inertial term (`m = 0`), `sigma = 2`, `tau = 1`.
    pub fn noninertial(alpha: Rational, beta: Rational) -> Result<Self> {
        Self::new(alpha, beta, None, 0.0, 2.0, 1.0)
    }

    pub fn from_f64(alpha: f64, beta: f64, gamma: Option<f64>, m: f64, sigma: f64, tau: f64) -> Result<Self> {
        let gamma = gamma.map(exact::from_f64).transpose()?;
        Self::new(exact::from_f64(alpha)?, exact::from_f64(beta)?, gamma, m, sigma, tau)
    }

    pub fn with_coefficients(mut self, sigma: f64, tau: f64) -> Result<Self> {
        self.sigma = sigma;
        self.tau = tau;
        Self::new(self.alpha, self.beta, self.gamma, self.m, sigma, tau)
    }

    pub fn has_inertia(&self) -> bool {
        self.m > 0.0
    }

    pub fn alpha_f64(&self) -> f64 {
        exact::to_f64(&self.alpha)
    }

    pub fn beta_f64(&self) -> f64 {
        exact::to_f64(&self.beta)
    }

    /// Inertial exponent as used by the dynamics; irrelevant (returned as 0)
    /// when `m = 0`.
    pub fn gamma_f64(&self) -> f64 {
        if self.has_inertia() {
            self.gamma.as_ref().map(exact::to_f64).unwrap_or(0.0)
        } else {
            0.0
        }
    }

    /// `1 + m * mu^gamma`, the effective mass of one mode.
    pub fn inertia(&self, mu: f64) -> f64 {
        if self.has_inertia() {
            1.0 + self.m * mu.powf(self.gamma_f64())
        } else {
            1.0
        }
    }
}

impl Serialize for ParameterPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("ParameterPoint", 6)?;
        st.serialize_field("alpha", &self.alpha.to_string())?;
        st.serialize_field("beta", &self.beta.to_string())?;
        st.serialize_field("gamma", &self.gamma.as_ref().map(|g| g.to_string()))?;
        st.serialize_field("m", &self.m)?;
        st.serialize_field("sigma", &self.sigma)?;
        st.serialize_field("tau", &self.tau)?;
        st.end()
    }
}

impl fmt::Display for ParameterPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.gamma {
            Some(g) if self.has_inertia() => write!(
                f,
                "(alpha={}, beta={}, gamma={}; m={}, sigma={}, tau={})",
                self.alpha, self.beta, g, self.m, self.sigma, self.tau
            ),
            _ => write!(
                f,
                "(alpha={}, beta={}; m={}, sigma={}, tau={})",
                self.alpha, self.beta, self.m, self.sigma, self.tau
            ),
        }
    }
}

fn check_unit(name: &'static str, x: &Rational) -> Result<()> {
    if x.is_negative() || *x > one() {
        return Err(Error::domain(name, x, "must lie in [0, 1]"));
    }
    Ok(())
}

fn check_gamma(g: &Rational) -> Result<()> {
    if !g.is_positive() || *g > one() {
        return Err(Error::domain("gamma", g, "must lie in (0, 1]"));
    }
    Ok(())
}

/// Subregion of the inertial cube `E` or of the non-inertial square `E*`
/// (suffix `s`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RegionLabel {
    T1,
    T2,
    T3,
    T4,
    F12,
    F13,
    F14,
    F2,
    F23,
    L123,
    L124,
    L2,
    L34,
    P234,
    T1s,
    T2s,
    T4s,
    F12s,
    F14s,
    F2s,
    L124s,
    L23s,
    P123s,
    Unclassified,
}

impl RegionLabel {
    pub const INERTIAL: [RegionLabel; 14] = [
        RegionLabel::T1,
        RegionLabel::T2,
        RegionLabel::T3,
        RegionLabel::T4,
        RegionLabel::F12,
        RegionLabel::F13,
        RegionLabel::F14,
        RegionLabel::F2,
        RegionLabel::F23,
        RegionLabel::L123,
        RegionLabel::L124,
        RegionLabel::L2,
        RegionLabel::L34,
        RegionLabel::P234,
    ];

    pub const NONINERTIAL: [RegionLabel; 9] = [
        RegionLabel::T1s,
        RegionLabel::T2s,
        RegionLabel::T4s,
        RegionLabel::F12s,
        RegionLabel::F14s,
        RegionLabel::F2s,
        RegionLabel::L124s,
        RegionLabel::L23s,
        RegionLabel::P123s,
    ];

    pub fn name(self) -> &'static str {
        use RegionLabel::*;
        match self {
            T1 => "T1",
            T2 => "T2",
            T3 => "T3",
            T4 => "T4",
            F12 => "F12",
            F13 => "F13",
            F14 => "F14",
            F2 => "F2",
            F23 => "F23",
            L123 => "L123",
            L124 => "L124",
            L2 => "L2",
            L34 => "L34",
            P234 => "P234",
            T1s => "T1s",
            T2s => "T2s",
            T4s => "T4s",
            F12s => "F12s",
            F14s => "F14s",
            F2s => "F2s",
            L124s => "L124s",
            L23s => "L23s",
            P123s => "P123s",
            Unclassified => "Unclassified",
        }
    }

    pub fn is_starred(self) -> bool {
        Self::NONINERTIAL.contains(&self)
    }
}

impl fmt::Display for RegionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RegionLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::INERTIAL
            .iter()
            .chain(Self::NONINERTIAL.iter())
            .chain(std::iter::once(&RegionLabel::Unclassified))
            .copied()
            .find(|r| r.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::domain("region", s, "unknown region label"))
    }
}

impl Serialize for RegionLabel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

/// All inertial regions whose membership predicate holds, lowest-dimensional
/// sets first. With an exact tolerance at most one entry is returned.
pub fn inertial_memberships(
    alpha: &Rational,
    beta: &Rational,
    gamma: &Rational,
    tol: &Tolerance,
) -> Vec<RegionLabel> {
    use RegionLabel::*;
    let (a, b, g) = (alpha, beta, gamma);
    let zero = Rational::zero();
    let h = half();
    let o = one();
    let two = int(2);
    let b_plus_1_half = (b + &o) / &two;
    let b_plus_g_half = (b + g) / &two;
    let one_minus_g = &o - g;
    let one_minus_b = &o - b;
    let two_a_minus_b = &two * a - b;

    let g_open = tol.lt(&zero, g) && tol.lt(g, &o);
    let g_half_open = tol.lt(&zero, g) && tol.le(g, &o);
    let g_one = tol.eq(g, &o);
    let a_low = tol.le(&zero, a) && tol.lt(a, &h);
    let a_half = tol.eq(a, &h);
    let b0 = tol.eq(b, &zero);
    let b_pos_closed = tol.lt(&zero, b) && tol.le(b, &o);

    let candidates = [
        (P234, a_half && b0 && g_one),
        (L123, a_half && tol.eq(b, &one_minus_g) && g_open),
        (L124, a_half && b0 && g_open),
        (L2, a_low && b0 && g_one),
        (L34, tol.eq(a, &b_plus_1_half) && b_pos_closed && g_one),
        (F12, a_half && tol.lt(&zero, b) && tol.lt(b, &one_minus_g) && g_open),
        (F13, tol.eq(a, &b_plus_g_half) && tol.lt(&one_minus_g, b) && tol.le(b, &o) && g_open),
        (F14, tol.eq(a, &b_plus_1_half) && b_pos_closed && g_open),
        (F2, a_low && b0 && g_open),
        (F23, a_low && tol.eq(b, &one_minus_g) && g_open),
        (
            T1,
            tol.lt(&h, a) && tol.lt(a, &b_plus_1_half) && b_pos_closed && tol.lt(&zero, g) && tol.lt(g, &two_a_minus_b),
        ),
        (
            T2,
            a_low && tol.lt(&zero, b) && tol.lt(b, &o) && tol.lt(&zero, g) && tol.lt(g, &one_minus_b),
        ),
        (
            T3,
            tol.le(&zero, a) && tol.lt(a, &b_plus_g_half) && tol.lt(&one_minus_g, b) && tol.le(b, &o) && g_half_open,
        ),
        (
            T4,
            tol.lt(&b_plus_1_half, a) && tol.le(a, &o) && tol.le(&zero, b) && tol.lt(b, &o) && g_half_open,
        ),
    ];
    candidates.into_iter().filter(|(_, hit)| *hit).map(|(r, _)| r).collect()
}

/// Non-inertial analogue of [`inertial_memberships`].
pub fn noninertial_memberships(alpha: &Rational, beta: &Rational, tol: &Tolerance) -> Vec<RegionLabel> {
    use RegionLabel::*;
    let (a, b) = (alpha, beta);
    let zero = Rational::zero();
    let h = half();
    let o = one();
    let b_plus_1_half = (b + &o) / int(2);
    let a_low = tol.le(&zero, a) && tol.lt(a, &h);
    let a_half = tol.eq(a, &h);

    let candidates = [
        (P123s, a_half && tol.eq(b, &o)),
        (L124s, a_half && tol.eq(b, &zero)),
        (L23s, a_low && tol.eq(b, &o)),
        (F12s, a_half && tol.lt(&zero, b) && tol.lt(b, &o)),
        (F14s, tol.eq(a, &b_plus_1_half) && tol.lt(&zero, b) && tol.le(b, &o)),
        (F2s, a_low && tol.eq(b, &zero)),
        (
            T1s,
            tol.lt(&h, a) && tol.lt(a, &b_plus_1_half) && tol.lt(&zero, b) && tol.le(b, &o),
        ),
        (T2s, a_low && tol.lt(&zero, b) && tol.lt(b, &o)),
        (
            T4s,
            tol.lt(&b_plus_1_half, a) && tol.le(a, &o) && tol.le(&zero, b) && tol.lt(b, &o),
        ),
    ];
    candidates.into_iter().filter(|(_, hit)| *hit).map(|(r, _)| r).collect()
}

pub fn classify_inertial(alpha: &Rational, beta: &Rational, gamma: &Rational) -> Result<RegionLabel> {
    classify_inertial_with(alpha, beta, gamma, &Tolerance::exact())
}

pub fn classify_inertial_with(
    alpha: &Rational,
    beta: &Rational,
    gamma: &Rational,
    tol: &Tolerance,
) -> Result<RegionLabel> {
    check_unit("alpha", alpha)?;
    check_unit("beta", beta)?;
    check_gamma(gamma)?;
    Ok(inertial_memberships(alpha, beta, gamma, tol)
        .first()
        .copied()
        .unwrap_or(RegionLabel::Unclassified))
}

pub fn classify_noninertial(alpha: &Rational, beta: &Rational) -> Result<RegionLabel> {
    classify_noninertial_with(alpha, beta, &Tolerance::exact())
}

pub fn classify_noninertial_with(alpha: &Rational, beta: &Rational, tol: &Tolerance) -> Result<RegionLabel> {
    check_unit("alpha", alpha)?;
    check_unit("beta", beta)?;
    Ok(noninertial_memberships(alpha, beta, tol)
        .first()
        .copied()
        .unwrap_or(RegionLabel::Unclassified))
}

/// Region of a point in the atlas matching its inertia (`m > 0` or `m = 0`).
pub fn classify(point: &ParameterPoint, tol: &Tolerance) -> Result<RegionLabel> {
    match (&point.gamma, point.has_inertia()) {
        (Some(g), true) => classify_inertial_with(&point.alpha, &point.beta, g, tol),
        _ => classify_noninertial_with(&point.alpha, &point.beta, tol),
    }
}

/// `beta >= 2 alpha - 1`: 0 lies in the resolvent set and the generator
/// produces a contraction semigroup.
pub fn wellposed(point: &ParameterPoint) -> bool {
    point.beta >= int(2) * &point.alpha - one()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum VerdictKind {
    Exponential,
    Polynomial,
    Unknown,
    OutOfTheory,
    IllPosedFramework,
}

impl VerdictKind {
    pub fn name(self) -> &'static str {
        match self {
            VerdictKind::Exponential => "Exponential",
            VerdictKind::Polynomial => "Polynomial",
            VerdictKind::Unknown => "Unknown",
            VerdictKind::OutOfTheory => "OutOfTheory",
            VerdictKind::IllPosedFramework => "IllPosedFramework",
        }
    }
}

impl fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityVerdict {
    pub kind: VerdictKind,
    /// Exact polynomial order `k`; present iff `kind == Polynomial`.
    pub order: Option<Rational>,
    pub region: RegionLabel,
}

impl StabilityVerdict {
    fn new(kind: VerdictKind, region: RegionLabel) -> Self {
        StabilityVerdict {
            kind,
            order: None,
            region,
        }
    }

    fn polynomial(order: Rational, region: RegionLabel) -> Self {
        debug_assert!(order.is_positive(), "non-positive order {order} on {region}");
        StabilityVerdict {
            kind: VerdictKind::Polynomial,
            order: Some(order),
            region,
        }
    }

    pub fn order_f64(&self) -> Option<f64> {
        self.order.as_ref().map(exact::to_f64)
    }
}

impl Serialize for StabilityVerdict {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("StabilityVerdict", 5)?;
        st.serialize_field("kind", &self.kind)?;
        st.serialize_field("region", &self.region)?;
        st.serialize_field("order", &self.order.as_ref().map(|k| k.to_string()))?;
        st.serialize_field("order_num", &self.order.as_ref().map(|k| k.numer().to_string()))?;
        st.serialize_field("order_den", &self.order.as_ref().map(|k| k.denom().to_string()))?;
        st.end()
    }
}

/// Predicted asymptotic behaviour of the semigroup at `point`.
pub fn decay_order(point: &ParameterPoint) -> Result<StabilityVerdict> {
    decay_order_with(point, &Tolerance::exact())
}

pub fn decay_order_with(point: &ParameterPoint, tol: &Tolerance) -> Result<StabilityVerdict> {
    use RegionLabel::*;
    let region = classify(point, tol)?;
    if region != T4 && region != T4s && !wellposed(point) {
        return Ok(StabilityVerdict::new(VerdictKind::IllPosedFramework, region));
    }
    let (a, b) = (&point.alpha, &point.beta);
    let two = int(2);
    let o = one();
    let verdict = match region {
        T1 | F12 | F14 | L124 | T2 | F2 | T3 | F23 => {
            let g = point.gamma.as_ref().expect("inertial region implies gamma");
            let (num, den) = match region {
                T1 | F12 | F14 | L124 => (&two * a - g, &two * (&two * a - b - g)),
                T2 | F2 => (&o - g, &two * (&two - &two * a - b - g)),
                _ => (&o - g, &two * (-(&two * a) + b + g)),
            };
            let k = num / den;
            if k.is_positive() {
                StabilityVerdict::polynomial(k, region)
            } else {
                // gamma = 1 on T3 gives k3 = 0: no decay order is available.
                StabilityVerdict::new(VerdictKind::Unknown, region)
            }
        }
        T1s | F12s | F14s | L124s => StabilityVerdict::polynomial(a / (&two * a - b), region),
        T2s | F2s | L23s => StabilityVerdict::polynomial(o / (&two * (&two - &two * a - b)), region),
        F13 | L123 | L34 | P234 | P123s => StabilityVerdict::new(VerdictKind::Exponential, region),
        T4 | T4s => StabilityVerdict::new(VerdictKind::OutOfTheory, region),
        L2 | Unclassified => StabilityVerdict::new(VerdictKind::Unknown, region),
    };
    Ok(verdict)
}

/// One labelled sample of the atlas grid.
#[derive(Debug, Clone, PartialEq)]
pub struct AtlasRow {
    pub alpha: Rational,
    pub beta: Rational,
    pub gamma: Option<Rational>,
    pub verdict: StabilityVerdict,
}

pub const ATLAS_CSV_HEADER: &str = "alpha,beta,gamma,label,kind,order_num,order_den";

impl AtlasRow {
    pub fn csv_line(&self) -> String {
        let gamma = self
            .gamma
            .as_ref()
            .map(|g| crate::report::fmt_real(exact::to_f64(g)))
            .unwrap_or_default();
        let (num, den) = match &self.verdict.order {
            Some(k) => (k.numer().to_string(), k.denom().to_string()),
            None => (String::new(), String::new()),
        };
        format!(
            "{},{},{},{},{},{},{}",
            crate::report::fmt_real(exact::to_f64(&self.alpha)),
            crate::report::fmt_real(exact::to_f64(&self.beta)),
            gamma,
            self.verdict.region,
            self.verdict.kind,
            num,
            den
        )
    }
}

/// Samples the atlas on a uniform grid with `resolution` points per axis.
///
/// With `inertial = true` and a fixed `gamma`, the `(alpha, beta)` square is
/// sampled at that gamma; without one, gamma runs over `j/(n-1)`,
/// `j = 1..n-1`, since gamma = 0 is outside the cube. Coordinates are exact.
pub fn sample_atlas(
    resolution: usize,
    gamma: Option<&Rational>,
    inertial: bool,
    tol: &Tolerance,
) -> Result<Vec<AtlasRow>> {
    if resolution < 2 {
        return Err(Error::domain("resolution", resolution, "need at least 2 points per axis"));
    }
    let n = resolution as i64 - 1;
    let axis: Vec<Rational> = (0..=n).map(|i| exact::ratio(i, n)).collect();
    let gammas: Vec<Option<Rational>> = if inertial {
        match gamma {
            Some(g) => {
                check_gamma(g)?;
                vec![Some(g.clone())]
            }
            None => (1..=n).map(|j| Some(exact::ratio(j, n))).collect(),
        }
    } else {
        vec![None]
    };
    let m = if inertial { 1.0 } else { 0.0 };
    let mut rows = Vec::with_capacity(axis.len() * axis.len() * gammas.len());
    for g in &gammas {
        for a in &axis {
            for b in &axis {
                let point = ParameterPoint::new(a.clone(), b.clone(), g.clone(), m, 2.0, 1.0)?;
                let verdict = decay_order_with(&point, tol)?;
                rows.push(AtlasRow {
                    alpha: a.clone(),
                    beta: b.clone(),
                    gamma: g.clone(),
                    verdict,
                });
            }
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;

    // decimal literal, read exactly (0.6 is 3/5, not its binary neighbour)
    fn q(x: f64) -> Rational {
        exact::parse_rational(&x.to_string()).unwrap()
    }

    fn inertial(a: f64, b: f64, g: f64) -> RegionLabel {
        classify_inertial(&q(a), &q(b), &q(g)).unwrap()
    }

    fn noninertial(a: f64, b: f64) -> RegionLabel {
        classify_noninertial(&q(a), &q(b)).unwrap()
    }

    #[test]
    fn inertial_examples() {
        assert_eq!(inertial(0.0, 1.0, 0.5), RegionLabel::T3);
        assert_eq!(inertial(0.5, 0.0, 1.0), RegionLabel::P234);
        assert_eq!(inertial(0.5, 0.0, 0.5), RegionLabel::L124);
        assert_eq!(inertial(0.9, 0.5, 0.5), RegionLabel::T4);
        assert_eq!(inertial(0.6, 0.8, 0.4), RegionLabel::F13);
        assert_eq!(inertial(0.2, 0.0, 1.0), RegionLabel::L2);
        assert_eq!(inertial(0.75, 0.5, 0.5), RegionLabel::F14);
        assert_eq!(inertial(0.75, 0.5, 1.0), RegionLabel::L34);
        assert_eq!(inertial(0.5, 0.5, 0.5), RegionLabel::L123);
        assert_eq!(inertial(0.25, 0.5, 0.5), RegionLabel::F23);
        assert_eq!(inertial(0.25, 0.0, 0.5), RegionLabel::F2);
        assert_eq!(inertial(0.5, 0.25, 0.5), RegionLabel::F12);
    }

    #[test]
    fn noninertial_examples() {
        assert_eq!(noninertial(0.0, 1.0), RegionLabel::L23s);
        assert_eq!(noninertial(0.5, 1.0), RegionLabel::P123s);
        assert_eq!(noninertial(1.0, 1.0), RegionLabel::F14s);
        assert_eq!(noninertial(0.5, 0.0), RegionLabel::L124s);
        assert_eq!(noninertial(0.25, 0.0), RegionLabel::F2s);
        assert_eq!(noninertial(0.875, 0.375), RegionLabel::T4s);
    }

    #[test]
    fn domain_errors() {
        assert!(classify_inertial(&q(1.5), &q(0.0), &q(0.5)).is_err());
        assert!(classify_inertial(&q(0.5), &q(-0.1), &q(0.5)).is_err());
        assert!(classify_inertial(&q(0.5), &q(0.0), &q(0.0)).is_err());
        assert!(classify_noninertial(&q(0.5), &q(1.01)).is_err());
        assert!(ParameterPoint::from_f64(0.5, 0.0, None, 1.0, 2.0, 1.0).is_err());
        assert!(ParameterPoint::from_f64(0.5, 0.0, Some(0.5), 1.0, 0.0, 1.0).is_err());
        assert!(ParameterPoint::from_f64(0.5, 0.0, Some(0.5), 1.0, 2.0, -1.0).is_err());
    }

    #[test]
    fn boundary_points_go_to_lower_dimensional_sets() {
        // alpha = 1/2 exactly never lands in an open T set
        for (b, g) in [(0.25, 0.5), (0.0, 0.5), (0.5, 0.5), (0.0, 1.0)] {
            let r = inertial(0.5, b, g);
            assert!(!matches!(r, RegionLabel::T1 | RegionLabel::T2 | RegionLabel::T3 | RegionLabel::T4));
        }
        let just_below = ratio(1, 2) - ratio(1, 1_000_000_000_000);
        assert_eq!(
            classify_inertial(&just_below, &ratio(1, 4), &ratio(1, 2)).unwrap(),
            RegionLabel::T2
        );
    }

    #[test]
    fn tolerance_snaps_to_plane() {
        let a = ratio(500_001, 1_000_000);
        let tol = Tolerance::new(ratio(1, 100_000)).unwrap();
        assert_eq!(
            classify_inertial_with(&a, &ratio(1, 4), &ratio(1, 2), &tol).unwrap(),
            RegionLabel::F12
        );
        assert_eq!(classify_inertial(&a, &ratio(1, 4), &ratio(1, 2)).unwrap(), RegionLabel::T1);
    }

    #[test]
    fn wellposedness() {
        let p = |a, b| ParameterPoint::from_f64(a, b, None, 0.0, 2.0, 1.0).unwrap();
        assert!(wellposed(&p(0.5, 0.0)));
        assert!(!wellposed(&p(1.0, 0.5)));
        assert!(wellposed(&p(1.0, 1.0)));
    }

    #[test]
    fn verdicts() {
        let p = |a: f64, b: f64, g: f64| ParameterPoint::from_f64(a, b, Some(g), 1.0, 2.0, 1.0).unwrap();
        let v = decay_order(&p(0.0, 1.0, 0.5)).unwrap();
        assert_eq!(v.kind, VerdictKind::Polynomial);
        assert_eq!(v.order, Some(ratio(1, 6)));
        assert_eq!(decay_order(&p(1.0, 1.0, 0.5)).unwrap().order, Some(ratio(3, 2)));
        let v = decay_order(&ParameterPoint::inertial(ratio(3, 5), ratio(4, 5), ratio(2, 5), 1.0).unwrap()).unwrap();
        assert_eq!((v.kind, v.region), (VerdictKind::Exponential, RegionLabel::F13));
        let v = decay_order(&ParameterPoint::inertial(ratio(1, 5), ratio(0, 1), ratio(1, 1), 1.0).unwrap()).unwrap();
        assert_eq!((v.kind, v.region), (VerdictKind::Unknown, RegionLabel::L2));
        let v = decay_order(&p(0.875, 0.375, 0.5)).unwrap();
        assert_eq!((v.kind, v.region), (VerdictKind::OutOfTheory, RegionLabel::T4));
        let v = decay_order(&ParameterPoint::noninertial(ratio(1, 1), ratio(1, 1)).unwrap()).unwrap();
        assert_eq!(v.order, Some(ratio(1, 1)));
        let v = decay_order(&ParameterPoint::noninertial(ratio(1, 2), ratio(1, 1)).unwrap()).unwrap();
        assert_eq!(v.kind, VerdictKind::Exponential);
    }

    #[test]
    fn t3_with_gamma_one_has_no_positive_order() {
        let p = ParameterPoint::inertial(ratio(1, 4), ratio(1, 2), ratio(1, 1), 1.0).unwrap();
        let v = decay_order(&p).unwrap();
        assert_eq!(v.region, RegionLabel::T3);
        assert_eq!(v.kind, VerdictKind::Unknown);
        assert!(v.order.is_none());
    }

    #[test]
    fn gamma_ignored_without_inertia() {
        let a = ParameterPoint::new(ratio(1, 4), ratio(1, 2), Some(ratio(1, 3)), 0.0, 2.0, 1.0).unwrap();
        let b = ParameterPoint::noninertial(ratio(1, 4), ratio(1, 2)).unwrap();
        assert_eq!(decay_order(&a).unwrap(), decay_order(&b).unwrap());
        assert_eq!(a.inertia(1e6), 1.0);
    }

    #[test]
    fn atlas_grid_rows() {
        let rows = sample_atlas(3, Some(&half()), true, &Tolerance::exact()).unwrap();
        assert_eq!(rows.len(), 9);
        let rows = sample_atlas(5, Some(&half()), true, &Tolerance::exact()).unwrap();
        let find = |a: Rational, b: Rational| rows.iter().find(|r| r.alpha == a && r.beta == b).unwrap().verdict.region;
        assert_eq!(find(ratio(1, 2), ratio(1, 4)), RegionLabel::F12);
        assert_eq!(find(ratio(1, 4), ratio(3, 4)), RegionLabel::T3);
        assert!(sample_atlas(1, None, false, &Tolerance::exact()).is_err());
        assert_eq!(sample_atlas(4, None, true, &Tolerance::exact()).unwrap().len(), 48);
    }

    #[test]
    fn region_names_round_trip() {
        for r in RegionLabel::INERTIAL.iter().chain(RegionLabel::NONINERTIAL.iter()) {
            assert_eq!(r.name().parse::<RegionLabel>().unwrap(), *r);
        }
    }
}

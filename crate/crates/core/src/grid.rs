//! Sample grids written as `lo:hi:log|lin:count`.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Log,
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RangeSpec {
    pub lo: f64,
    pub hi: f64,
    pub spacing: Spacing,
    pub count: usize,
}

impl RangeSpec {
    pub fn parse(spec: &str) -> Result<Self> {
        let bad = |reason: &str| Error::RangeSpec {
            spec: spec.to_string(),
            reason: reason.to_string(),
        };
        let parts: Vec<&str> = spec.trim().split(':').collect();
        let [lo, hi, spacing, count] = parts[..] else {
            return Err(bad("expected lo:hi:log|lin:count"));
        };
        let lo: f64 = lo.parse().map_err(|_| bad("lo is not a number"))?;
        let hi: f64 = hi.parse().map_err(|_| bad("hi is not a number"))?;
        let spacing = match spacing {
            "log" => Spacing::Log,
            "lin" => Spacing::Linear,
            _ => return Err(bad("spacing must be `log` or `lin`")),
        };
        let count: usize = count.parse().map_err(|_| bad("count is not a positive integer"))?;
        Self::new(lo, hi, spacing, count).map_err(|e| match e {
            Error::RangeSpec { reason, .. } => bad(&reason),
            other => other,
        })
    }

    pub fn new(lo: f64, hi: f64, spacing: Spacing, count: usize) -> Result<Self> {
        let bad = |reason: &str| Error::RangeSpec {
            spec: format!("{lo}:{hi}:{count}"),
            reason: reason.to_string(),
        };
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(bad("bounds must be finite"));
        }
        if count == 0 {
            return Err(bad("count must be >= 1"));
        }
        if hi < lo || (count > 1 && hi == lo) {
            return Err(bad("need lo < hi"));
        }
        if spacing == Spacing::Log && lo <= 0.0 {
            return Err(bad("log spacing needs lo > 0"));
        }
        Ok(RangeSpec { lo, hi, spacing, count })
    }

    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.lo];
        }
        let n = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i == 0 {
                    return self.lo;
                }
                if i == self.count - 1 {
                    return self.hi;
                }
                let f = i as f64 / n;
                match self.spacing {
                    Spacing::Linear => self.lo + f * (self.hi - self.lo),
                    Spacing::Log => (self.lo.ln() + f * (self.hi.ln() - self.lo.ln())).exp(),
                }
            })
            .collect()
    }
}

/// `count` log-spaced values from `lo` to `hi`.
pub fn logspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    RangeSpec::new(lo, hi, Spacing::Log, count).map(|r| r.values()).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_grid() {
        let v = RangeSpec::parse("1e2:1e8:log:13").unwrap().values();
        assert_eq!(v.len(), 13);
        assert_eq!(v[0], 1e2);
        assert_eq!(v[12], 1e8);
        assert!((v[2] - 1e3).abs() < 1e-9);
        assert!(v.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn linear_grid() {
        assert_eq!(RangeSpec::parse("0:1:lin:5").unwrap().values(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
    }

    #[test]
    fn rejects_bad_specs() {
        for s in ["1:2:log", "2:1:lin:3", "0:1:log:3", "1:2:cubic:3", "1:2:lin:0", "a:2:lin:3", "1:1:lin:2"] {
            assert!(RangeSpec::parse(s).is_err(), "{s}");
        }
    }
}

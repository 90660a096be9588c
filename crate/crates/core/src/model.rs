//! Channel and scheme parameters, rate pairs, and the `C(x)` primitive.
//!
//! The channel is taken in standard form: unit direct gains, unit noise
//! variances, a complex cross gain `a` at the cognitive receiver and a
//! nonnegative real cross gain `|b|` at the primary receiver. All rates are
//! in bits per channel use.

use std::f64::consts::LN_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance for hull construction and collinearity tests.
pub const GEOM_TOL: f64 = 1e-12;
/// Tolerance for comparing rates.
pub const RATE_TOL: f64 = 1e-9;

/// `C(x) = log2(1 + x)`.
pub fn cap_c(x: f64) -> Result<f64> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::domain(format!("C(x) needs a finite x >= 0, got {x}")));
    }
    Ok(log2_1p(x))
}

/// Unchecked `log2(1 + x)` for internal use.
#[inline]
pub(crate) fn log2_1p(x: f64) -> f64 {
    x.ln_1p() / LN_2
}

/// A standard-form Gaussian cognitive interference channel.
///
/// Receiver 1 (cognitive) sees `Y1 = X1 + a X2 + Z1`, receiver 2 (primary)
/// sees `Y2 = |b| X1 + X2 + Z2`, with `E|Xi|^2 <= Pi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ChannelRecord", into = "ChannelRecord")]
pub struct ChannelParams {
    a: Complex64,
    b_mag: f64,
    p1: f64,
    p2: f64,
}

impl ChannelParams {
    pub fn new(a: Complex64, b_mag: f64, p1: f64, p2: f64) -> Result<Self> {
        if !(a.re.is_finite() && a.im.is_finite()) {
            return Err(Error::domain("cross gain a must be finite"));
        }
        for (name, v) in [("b_mag", b_mag), ("P1", p1), ("P2", p2)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::domain(format!("{name} must be finite and >= 0, got {v}")));
            }
        }
        Ok(Self { a, b_mag, p1, p2 })
    }

    /// Channel with a real-valued cross gain `a`.
    pub fn real(a: f64, b_mag: f64, p1: f64, p2: f64) -> Result<Self> {
        Self::new(Complex64::new(a, 0.0), b_mag, p1, p2)
    }

    pub fn a(&self) -> Complex64 {
        self.a
    }

    pub fn b_mag(&self) -> f64 {
        self.b_mag
    }

    /// `|b|^2`.
    pub fn b2(&self) -> f64 {
        self.b_mag * self.b_mag
    }

    pub fn p1(&self) -> f64 {
        self.p1
    }

    pub fn p2(&self) -> f64 {
        self.p2
    }
}

#[derive(Serialize, Deserialize)]
struct ChannelRecord {
    a_re: f64,
    #[serde(default)]
    a_im: f64,
    b_mag: f64,
    #[serde(rename = "P1")]
    p1: f64,
    #[serde(rename = "P2")]
    p2: f64,
}

impl TryFrom<ChannelRecord> for ChannelParams {
    type Error = Error;

    fn try_from(r: ChannelRecord) -> Result<Self> {
        ChannelParams::new(Complex64::new(r.a_re, r.a_im), r.b_mag, r.p1, r.p2)
    }
}

impl From<ChannelParams> for ChannelRecord {
    fn from(c: ChannelParams) -> Self {
        ChannelRecord { a_re: c.a.re, a_im: c.a.im, b_mag: c.b_mag, p1: c.p1, p2: c.p2 }
    }
}

/// Free parameters of the pre-coding scheme: the power split `alpha` and
/// the DPC coefficient `lambda`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SchemeRecord", into = "SchemeRecord")]
pub struct SchemeParams {
    alpha: f64,
    lambda: Complex64,
}

impl SchemeParams {
    pub fn new(alpha: f64, lambda: Complex64) -> Result<Self> {
        check_alpha(alpha)?;
        if !(lambda.re.is_finite() && lambda.im.is_finite()) {
            return Err(Error::domain("lambda must be finite"));
        }
        Ok(Self { alpha, lambda })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn lambda(&self) -> Complex64 {
        self.lambda
    }
}

#[derive(Serialize, Deserialize)]
struct SchemeRecord {
    alpha: f64,
    #[serde(default)]
    lambda_re: f64,
    #[serde(default)]
    lambda_im: f64,
}

impl TryFrom<SchemeRecord> for SchemeParams {
    type Error = Error;

    fn try_from(r: SchemeRecord) -> Result<Self> {
        SchemeParams::new(r.alpha, Complex64::new(r.lambda_re, r.lambda_im))
    }
}

impl From<SchemeParams> for SchemeRecord {
    fn from(s: SchemeParams) -> Self {
        SchemeRecord { alpha: s.alpha, lambda_re: s.lambda.re, lambda_im: s.lambda.im }
    }
}

/// A channel together with a scheme operating point, serialized as one
/// flat object (`a_re, a_im, b_mag, P1, P2, alpha, lambda_re, lambda_im`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OperatingPoint {
    #[serde(flatten)]
    pub channel: ChannelParams,
    #[serde(flatten)]
    pub scheme: SchemeParams,
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if (0.0..=1.0).contains(&alpha) {
        Ok(())
    } else {
        Err(Error::domain(format!("alpha must lie in [0, 1], got {alpha}")))
    }
}

/// A point `(R1, R2)` in the rate plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatePair {
    r1: f64,
    r2: f64,
}

impl RatePair {
    pub fn new(r1: f64, r2: f64) -> Result<Self> {
        if !(r1.is_finite() && r2.is_finite()) || r1 < 0.0 || r2 < 0.0 {
            return Err(Error::domain(format!("rate pair ({r1}, {r2}) must be finite and >= 0")));
        }
        Ok(Self { r1, r2 })
    }

    /// Builds a pair from computed values, flushing negative zeros and
    /// round-off below zero to exactly zero.
    pub(crate) fn clamped(r1: f64, r2: f64) -> Self {
        debug_assert!(r1.is_finite() && r2.is_finite());
        Self { r1: if r1 > 0.0 { r1 } else { 0.0 }, r2: if r2 > 0.0 { r2 } else { 0.0 } }
    }

    pub const ORIGIN: RatePair = RatePair { r1: 0.0, r2: 0.0 };

    pub fn r1(&self) -> f64 {
        self.r1
    }

    pub fn r2(&self) -> f64 {
        self.r2
    }

    pub fn distance(&self, other: &RatePair) -> f64 {
        (self.r1 - other.r1).hypot(self.r2 - other.r2)
    }
}

/// Individual and sum-rate caps `{R1 <= r1_max, R2 <= r2_max, R1 + R2 <= sum_max}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateConstraintSet {
    r1_max: f64,
    r2_max: f64,
    sum_max: f64,
}

impl RateConstraintSet {
    pub fn new(r1_max: f64, r2_max: f64, sum_max: f64) -> Result<Self> {
        for (name, v) in [("r1_max", r1_max), ("r2_max", r2_max), ("sum_max", sum_max)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::domain(format!("{name} must be finite and >= 0, got {v}")));
            }
        }
        Ok(Self { r1_max, r2_max, sum_max })
    }

    pub fn r1_max(&self) -> f64 {
        self.r1_max
    }

    pub fn r2_max(&self) -> f64 {
        self.r2_max
    }

    pub fn sum_max(&self) -> f64 {
        self.sum_max
    }

    /// The Pareto corner with the largest `R1`.
    pub fn max_r1_corner(&self) -> RatePair {
        let r1 = self.r1_max.min(self.sum_max);
        RatePair::clamped(r1, self.r2_max.min(self.sum_max - r1))
    }

    /// The Pareto corner with the largest `R2`.
    pub fn max_r2_corner(&self) -> RatePair {
        let r2 = self.r2_max.min(self.sum_max);
        RatePair::clamped(self.r1_max.min(self.sum_max - r2), r2)
    }

    pub fn contains(&self, p: &RatePair, tol: f64) -> bool {
        p.r1 <= self.r1_max + tol && p.r2 <= self.r2_max + tol && p.r1 + p.r2 <= self.sum_max + tol
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cap_c_values() {
        assert_eq!(cap_c(1.0).unwrap(), 1.0);
        assert_eq!(cap_c(0.0).unwrap(), 0.0);
        assert!((cap_c(3.0).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn cap_c_rejects_bad_input() {
        assert!(cap_c(-1e-3).is_err());
        assert!(cap_c(f64::NAN).is_err());
        assert!(cap_c(f64::INFINITY).is_err());
    }

    #[test]
    fn cap_c_increasing_and_concave_on_log_grid() {
        let xs: Vec<f64> = (0..400).map(|i| 10f64.powf(-6.0 + 12.0 * i as f64 / 399.0)).collect();
        for w in xs.windows(3) {
            let (x0, x1, x2) = (w[0], w[1], w[2]);
            let (c0, c1, c2) = (cap_c(x0).unwrap(), cap_c(x1).unwrap(), cap_c(x2).unwrap());
            assert!(c1 > c0 && c2 > c1);
            let s01 = (c1 - c0) / (x1 - x0);
            let s12 = (c2 - c1) / (x2 - x1);
            assert!(s12 < s01, "slopes must decrease at x = {x1}");
        }
    }

    #[test]
    fn channel_validation() {
        assert!(ChannelParams::real(1.0, -0.1, 1.0, 1.0).is_err());
        assert!(ChannelParams::real(1.0, 1.0, -1.0, 1.0).is_err());
        assert!(ChannelParams::real(f64::NAN, 1.0, 1.0, 1.0).is_err());
        assert!(ChannelParams::real(1.0, 1.0, 1.0, f64::INFINITY).is_err());
        assert!(ChannelParams::real(-3.0, 0.0, 0.0, 0.0).is_ok());
    }

    #[test]
    fn scheme_validation() {
        assert!(SchemeParams::new(1.01, Complex64::new(0.0, 0.0)).is_err());
        assert!(SchemeParams::new(-0.01, Complex64::new(0.0, 0.0)).is_err());
        assert!(SchemeParams::new(0.3, Complex64::new(f64::NAN, 0.0)).is_err());
    }

    #[test]
    fn flat_json_schema() {
        let op = OperatingPoint {
            channel: ChannelParams::new(Complex64::new(-1.0, 0.25), 2.0, 10.0, 6.0).unwrap(),
            scheme: SchemeParams::new(0.5, Complex64::new(0.7, -0.1)).unwrap(),
        };
        let v: serde_json::Value = serde_json::to_value(op).unwrap();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(|s| s.as_str()).collect();
        for k in ["a_re", "a_im", "b_mag", "P1", "P2", "alpha", "lambda_re", "lambda_im"] {
            assert!(keys.contains(&k), "missing key {k}");
        }
        assert_eq!(keys.len(), 8);
        let back: OperatingPoint = serde_json::from_value(v).unwrap();
        assert_eq!(back, op);
    }

    #[test]
    fn json_rejects_invalid_channel() {
        let bad = r#"{"a_re": 1.0, "b_mag": -2.0, "P1": 1.0, "P2": 1.0}"#;
        assert!(serde_json::from_str::<ChannelParams>(bad).is_err());
        let ok = r#"{"a_re": 1.0, "b_mag": 2.0, "P1": 1.0, "P2": 1.0}"#;
        let ch: ChannelParams = serde_json::from_str(ok).unwrap();
        assert_eq!(ch.a().im, 0.0);
    }

    #[test]
    fn constraint_corners() {
        let c = RateConstraintSet::new(1.0, 1.0, 1.5).unwrap();
        assert_eq!(c.max_r1_corner(), RatePair::new(1.0, 0.5).unwrap());
        assert_eq!(c.max_r2_corner(), RatePair::new(0.5, 1.0).unwrap());
        assert!(RateConstraintSet::new(1.0, -1.0, 1.0).is_err());
    }
}

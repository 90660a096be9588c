//! Constant-gap results for `|b| > 1`.
//!
//! Maximizing the outer bound's `R1` and sum-rate caps over `alpha`
//! separately gives the envelope `R1 <= C(P1)`,
//! `R1 + R2 <= C((sqrt(|b|^2 P1) + sqrt(P2))^2)` with corners `A` and `B`.
//! When the `alpha = 1` condition holds, the scheme achieves `C` and the
//! `A`-`C` time-sharing line, which is within one bit and within a factor
//! two of the envelope.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::Interval;
use crate::model::{log2_1p, ChannelParams, RatePair, RATE_TOL};
use crate::outer::miso_snr;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CornerPoints {
    #[serde(rename = "A")]
    pub a: RatePair,
    #[serde(rename = "B")]
    pub b: RatePair,
    #[serde(rename = "C")]
    pub c: RatePair,
}

fn require_strong(ch: &ChannelParams) -> Result<()> {
    if ch.b_mag() <= 1.0 {
        return Err(Error::domain(format!("needs |b| > 1, got {}", ch.b_mag())));
    }
    Ok(())
}

/// `A = (0, C(miso))`, `B = (C(P1), C(miso) - C(P1))`,
/// `C = (C(P1), C(|b|^2 P1 + P2) - C(P1))` with
/// `miso = (sqrt(|b|^2 P1) + sqrt(P2))^2`.
pub fn corner_points(ch: &ChannelParams) -> Result<CornerPoints> {
    require_strong(ch)?;
    if ch.p1() == 0.0 && ch.p2() == 0.0 {
        return Err(Error::domain("corner points need P1 > 0 or P2 > 0"));
    }
    let r1 = log2_1p(ch.p1());
    let miso = log2_1p(miso_snr(ch));
    let plain = log2_1p(ch.b2() * ch.p1() + ch.p2());
    Ok(CornerPoints {
        a: RatePair::new(0.0, miso)?,
        b: RatePair::new(r1, miso - r1)?,
        c: RatePair::new(r1, plain - r1)?,
    })
}

/// `R2(B) - R2(C) = C(2 sqrt(|b|^2 P1 P2) / (1 + |b|^2 P1 + P2))`.
pub fn additive_gap(ch: &ChannelParams) -> Result<f64> {
    require_strong(ch)?;
    let x = ch.b2() * ch.p1();
    Ok(log2_1p(2.0 * (x * ch.p2()).sqrt() / (1.0 + x + ch.p2())))
}

/// `2 (R1(C) + R2(C)) >= R1(B) + R2(B)`, with `RATE_TOL` of slack.
pub fn multiplicative_check(ch: &ChannelParams) -> Result<bool> {
    require_strong(ch)?;
    if ch.p1() == 0.0 && ch.p2() == 0.0 {
        return Ok(true);
    }
    let k = corner_points(ch)?;
    Ok(2.0 * (k.c.r1() + k.c.r2()) + RATE_TOL >= k.b.r1() + k.b.r2())
}

/// `P2 |1 - a|b||^2 >= (|b|^2 - 1)(1 + P1 + |a|^2 P2) - P1 P2 |1 - a|b||^2`,
/// under which the scheme with `alpha = 1` attains corner `C`.
pub fn condition_3a(ch: &ChannelParams) -> bool {
    let a = ch.a();
    let m = (1.0 - a * ch.b_mag()).norm_sqr();
    ch.p2() * m >= (ch.b2() - 1.0) * (1.0 + ch.p1() + a.norm_sqr() * ch.p2()) - ch.p1() * ch.p2() * m
}

/// The same condition for `P1 = P2 = P` and real `a`:
/// `P (P + 1) |1 - a|b||^2 >= (|b|^2 - 1)(P + 1 + |a|^2 P)`.
pub fn gap_condition_p(a: f64, b_mag: f64, p: f64) -> bool {
    let m = (1.0 - a * b_mag) * (1.0 - a * b_mag);
    p * (p + 1.0) * m >= (b_mag * b_mag - 1.0) * (p + 1.0 + a * a * p)
}

/// [`gap_condition_p`] on a grid; `cells[i * a_values.len() + j]` belongs to
/// `(a_values[j], b_values[i])`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapConditionMap {
    pub p: f64,
    pub a_values: Vec<f64>,
    pub b_values: Vec<f64>,
    pub cells: Vec<bool>,
}

impl GapConditionMap {
    pub fn iter(&self) -> impl Iterator<Item = (f64, f64, bool)> + '_ {
        let na = self.a_values.len();
        self.cells.iter().enumerate().map(move |(k, &c)| (self.a_values[k % na], self.b_values[k / na], c))
    }

    pub fn fraction_true(&self) -> f64 {
        self.cells.iter().filter(|&&c| c).count() as f64 / self.cells.len() as f64
    }
}

pub fn gap_condition_region(
    p: f64,
    a_range: Interval,
    b_range: Interval,
    resolution: usize,
) -> Result<GapConditionMap> {
    if !(p.is_finite() && p > 0.0) {
        return Err(Error::domain(format!("P must be positive, got {p}")));
    }
    let a_values = a_range.linspace(resolution)?;
    let b_values = b_range.linspace(resolution)?;
    let cells =
        b_values.par_iter().flat_map_iter(|&b| a_values.iter().map(move |&a| gap_condition_p(a, b, p))).collect();
    Ok(GapConditionMap { p, a_values, b_values, cells })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GapCertificate {
    pub applicable: bool,
    pub additive_ok: bool,
    pub multiplicative_ok: bool,
}

/// Applicable when `|b| > 1` and the `alpha = 1` condition holds. Both
/// checks are reported `false` otherwise.
pub fn gap_certificate(ch: &ChannelParams) -> GapCertificate {
    let applicable = ch.b_mag() > 1.0 && condition_3a(ch);
    if !applicable {
        return GapCertificate { applicable, additive_ok: false, multiplicative_ok: false };
    }
    let gap = additive_gap(ch).expect("|b| > 1");
    let k = corner_points(ch).expect("condition implies P2 > 0");
    // The envelope's boundary is A-B and the inner line is A-C. They meet
    // at A and both are linear in R1, so the R2 shortfall peaks at R1 = C(P1).
    let shortfall = k.b.r2() - k.c.r2();
    GapCertificate {
        applicable,
        additive_ok: gap <= 1.0 + 1e-12 && shortfall <= gap + 1e-12,
        multiplicative_ok: multiplicative_check(ch).expect("|b| > 1"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::cap_c;
    use crate::outer::outer_constraints;

    fn ch(a: f64, b: f64, p1: f64, p2: f64) -> ChannelParams {
        ChannelParams::real(a, b, p1, p2).unwrap()
    }

    #[test]
    fn corners_on_reference_channel() {
        let k = corner_points(&ch(0.0, 3.0, 6.0, 6.0)).unwrap();
        let c6 = cap_c(6.0).unwrap();
        assert_eq!(k.a.r1(), 0.0);
        assert!((k.a.r2() - cap_c(96.0).unwrap()).abs() < 1e-12);
        assert!((k.b.r2() - (cap_c(96.0).unwrap() - c6)).abs() < 1e-12);
        assert!((k.c.r2() - (cap_c(60.0).unwrap() - c6)).abs() < 1e-12);
        assert_eq!(k.b.r1(), k.c.r1());
        assert!(k.b.r2() >= k.c.r2());
    }

    #[test]
    fn corner_c_is_full_alpha_outer_cap() {
        let c0 = ch(-1.0, 2.0, 10.0, 10.0);
        let k = corner_points(&c0).unwrap();
        let o = outer_constraints(&c0, 1.0).unwrap();
        assert!((k.c.r1() - o.r1_max()).abs() < 1e-12);
        assert!((k.c.r1() + k.c.r2() - o.sum_max()).abs() < 1e-12);
    }

    #[test]
    fn corner_preconditions() {
        assert!(corner_points(&ch(0.0, 1.0, 6.0, 6.0)).is_err());
        assert!(corner_points(&ch(0.0, 2.0, 0.0, 0.0)).is_err());
        let k = corner_points(&ch(0.0, 2.0, 0.0, 5.0)).unwrap();
        assert_eq!(k.b.r1(), 0.0);
        for p in [k.a, k.b] {
            assert!(p.distance(&k.c) < 1e-12);
        }
    }

    #[test]
    fn gap_values() {
        let c0 = ch(0.0, 7f64.sqrt(), 1.0, 6.0);
        let g = additive_gap(&c0).unwrap();
        assert!((g - cap_c(2.0 * 42f64.sqrt() / 14.0).unwrap()).abs() < 1e-12);
        assert!((g - 0.9455).abs() < 1e-4);
        assert_eq!(additive_gap(&ch(0.0, 2.0, 0.0, 6.0)).unwrap(), 0.0);
        assert!(additive_gap(&ch(0.0, 0.5, 1.0, 1.0)).is_err());
        let k = corner_points(&c0).unwrap();
        assert!((k.b.r2() - k.c.r2() - g).abs() < 1e-12);
    }

    #[test]
    fn gap_peaks_where_cross_power_exceeds_p2_by_one() {
        let best = (1..=20_000)
            .map(|i| i as f64 * 1e-3)
            .map(|x| (x, additive_gap(&ch(0.0, 2.0, x / 4.0, 6.0)).unwrap()))
            .fold((0.0, f64::NEG_INFINITY), |acc, v| if v.1 > acc.1 { v } else { acc });
        assert!((best.0 - 7.0).abs() <= 1e-3);
    }

    #[test]
    fn multiplicative_examples() {
        assert!(multiplicative_check(&ch(0.0, 3.0, 6.0, 6.0)).unwrap());
        assert!(multiplicative_check(&ch(0.0, 1.01, 0.01, 0.01)).unwrap());
        assert!(multiplicative_check(&ch(0.0, 1.0, 0.01, 0.01)).is_err());
    }

    #[test]
    fn high_snr_condition() {
        assert!(!gap_condition_p(0.5, 2.0, 10.0));
        assert!(!gap_condition_p(0.25, 4.0, 1e6));
        for a in [-3.0, 0.0, 0.4, 2.0] {
            assert!(gap_condition_p(a, 1.0, 3.0));
        }
        assert!(gap_condition_p(1.0, 1.0, 3.0));
        // Off the a|b| = 1 curve the condition holds once P is large enough.
        assert!(!gap_condition_p(0.0, 2.0, 1.0));
        assert!(gap_condition_p(0.0, 2.0, 100.0));
    }

    #[test]
    fn condition_grows_with_power() {
        let ar = Interval::new(-5.0, 5.0).unwrap();
        let br = Interval::new(0.0, 5.0).unwrap();
        let fr: Vec<f64> =
            [1.0, 10.0, 100.0].iter().map(|&p| gap_condition_region(p, ar, br, 101).unwrap().fraction_true()).collect();
        assert!(fr[0] < fr[1] && fr[1] < fr[2]);
        assert!(gap_condition_region(0.0, ar, br, 11).is_err());
    }

    #[test]
    fn general_form_reduces_to_equal_power_form() {
        for &(a, b) in &[(-1.0, 2.0), (0.5, 2.0), (0.0, 3.0), (2.0, 1.5), (-4.0, 4.5)] {
            for p in [0.5, 10.0] {
                assert_eq!(condition_3a(&ch(a, b, p, p)), gap_condition_p(a, b, p));
            }
        }
    }

    #[test]
    fn certificate_examples() {
        let c = gap_certificate(&ch(-1.0, 2.0, 10.0, 10.0));
        assert!(c.applicable && c.additive_ok && c.multiplicative_ok);
        assert!(!gap_certificate(&ch(-1.0, 0.5, 10.0, 10.0)).applicable);
        assert!(!gap_certificate(&ch(0.5, 2.0, 10.0, 10.0)).applicable);
    }
}

//! Regime membership tests for the Gaussian channel, plus brute-force
//! oracles for the closed-form conditions.
//!
//! Closed-form conditions are evaluated with exact comparisons; the oracles
//! allow `-1e-9` of slack since they aggregate many floating-point terms.

use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::gap::condition_3a;
use crate::grid::{linspace, Interval};
use crate::model::{check_alpha, ChannelParams};
use crate::outer::alpha_grid;

/// Slack used by the grid oracles.
pub const ORACLE_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct RegimeLabel {
    pub weak: bool,
    pub very_strong: bool,
    pub primary_decodes_cognitive: bool,
    pub degraded: bool,
    pub gap_condition_a: bool,
}

impl RegimeLabel {
    /// Short names of the set flags, in field order.
    pub fn flag_names(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        for (on, name) in [
            (self.weak, "weak"),
            (self.very_strong, "very_strong"),
            (self.primary_decodes_cognitive, "pdc"),
            (self.degraded, "degraded"),
            (self.gap_condition_a, "gap_a"),
        ] {
            if on {
                out.push(name);
            }
        }
        out
    }
}

pub fn is_weak(ch: &ChannelParams) -> bool {
    ch.b_mag() <= 1.0
}

/// `(|a|^2 - 1) P2 - (|b|^2 - 1) P1 - 2 |a - |b|| sqrt(P1 P2)`.
pub fn very_strong_lhs(ch: &ChannelParams) -> f64 {
    let a = ch.a();
    (a.norm_sqr() - 1.0) * ch.p2()
        - (ch.b2() - 1.0) * ch.p1()
        - 2.0 * (a - ch.b_mag()).norm() * (ch.p1() * ch.p2()).sqrt()
}

pub fn is_very_strong(ch: &ChannelParams) -> bool {
    ch.b_mag() > 1.0 && very_strong_lhs(ch) >= 0.0
}

/// `E|Y1|^2 - E|Y2|^2` for inputs with correlation `rho`:
/// `(|a|^2-1) P2 - (|b|^2-1) P1 + 2 sqrt(P1 P2) (Re{conj(a) rho} - |b| Re{rho})`.
fn power_difference(ch: &ChannelParams, r: f64, phi: f64) -> f64 {
    let a = ch.a();
    let (re, im) = (r * phi.cos(), r * phi.sin());
    let cross = a.re * re + a.im * im - ch.b_mag() * re;
    (a.norm_sqr() - 1.0) * ch.p2() - (ch.b2() - 1.0) * ch.p1() + 2.0 * (ch.p1() * ch.p2()).sqrt() * cross
}

/// Checks the power difference on `rho_grid^2` correlations
/// `rho = r e^{j phi}` with `r` on `[0, 1]` (endpoints included) and
/// `phi = 2 pi k / rho_grid`.
pub fn very_strong_oracle(ch: &ChannelParams, rho_grid: usize) -> Result<bool> {
    if ch.b_mag() <= 1.0 {
        return Err(Error::domain("very strong oracle needs |b| > 1"));
    }
    let radii = linspace(0.0, 1.0, rho_grid)?;
    let n = rho_grid as f64;
    Ok(radii.iter().all(|&r| (0..rho_grid).all(|k| power_difference(ch, r, 2.0 * PI * k as f64 / n) >= -ORACLE_SLACK)))
}

/// `Q(alpha) = P2 |1 - a|b||^2 (alpha P1 + 1)
///   - (|b|^2 - 1)(P1 + |a|^2 P2 + 2 Re{a} sqrt((1-alpha) P1 P2) + 1)`.
pub fn q_alpha(ch: &ChannelParams, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let a = ch.a();
    let mismatch = (1.0 - a * ch.b_mag()).norm_sqr();
    let rx1 = ch.p1() + a.norm_sqr() * ch.p2() + 2.0 * a.re * ((1.0 - alpha) * ch.p1() * ch.p2()).sqrt() + 1.0;
    Ok(ch.p2() * mismatch * (alpha * ch.p1() + 1.0) - (ch.b2() - 1.0) * rx1)
}

/// `P2 |1 - a|b||^2 >= (|b|^2 - 1)(1 + P1 + |a|^2 P2 + 2 Re{a} sqrt(P1 P2))`,
/// the `alpha = 0` half of the primary-decodes-cognitive condition.
pub fn condition_3b(ch: &ChannelParams) -> bool {
    let a = ch.a();
    let lhs = ch.p2() * (1.0 - a * ch.b_mag()).norm_sqr();
    let rhs = (ch.b2() - 1.0) * (1.0 + ch.p1() + a.norm_sqr() * ch.p2() + 2.0 * a.re * (ch.p1() * ch.p2()).sqrt());
    lhs >= rhs
}

/// `|b| > 1` and `Q(0) >= 0` and `Q(1) >= 0`. `Q` is increasing in `alpha`
/// when `Re{a} >= 0` and concave otherwise, so the endpoints decide the
/// whole interval.
pub fn is_primary_decodes_cognitive(ch: &ChannelParams) -> bool {
    ch.b_mag() > 1.0 && q_alpha(ch, 0.0).unwrap() >= 0.0 && q_alpha(ch, 1.0).unwrap() >= 0.0
}

/// `|b| > 1` and `Q >= -1e-9` on a uniform `alpha` grid of `alpha_grid_size`
/// points including both ends.
pub fn pdc_oracle(ch: &ChannelParams, alpha_grid_size: usize) -> Result<bool> {
    let alphas = alpha_grid(alpha_grid_size)?;
    if ch.b_mag() <= 1.0 {
        return Ok(false);
    }
    for alpha in alphas {
        if q_alpha(ch, alpha)? < -ORACLE_SLACK {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `a = 1/|b|` (real `a`), where the primary output is a degraded version of
/// the cognitive one.
pub fn is_degraded(ch: &ChannelParams) -> bool {
    if ch.b_mag() <= 0.0 {
        return false;
    }
    let a = ch.a();
    a.im.abs() <= 1e-12 && (a.re - 1.0 / ch.b_mag()).abs() <= 1e-12
}

pub fn classify(ch: &ChannelParams) -> RegimeLabel {
    RegimeLabel {
        weak: is_weak(ch),
        very_strong: is_very_strong(ch),
        primary_decodes_cognitive: is_primary_decodes_cognitive(ch),
        degraded: is_degraded(ch),
        gap_condition_a: condition_3a(ch),
    }
}

/// Labels over a real-`a` by `|b|` grid. `cells[i * a_values.len() + j]`
/// belongs to `(a_values[j], b_values[i])`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegimeMap {
    pub p1: f64,
    pub p2: f64,
    pub a_values: Vec<f64>,
    pub b_values: Vec<f64>,
    pub cells: Vec<RegimeLabel>,
}

impl RegimeMap {
    pub fn get(&self, a_index: usize, b_index: usize) -> RegimeLabel {
        self.cells[b_index * self.a_values.len() + a_index]
    }

    /// `(a, |b|, label)` in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (f64, f64, RegimeLabel)> + '_ {
        let na = self.a_values.len();
        self.cells.iter().enumerate().map(move |(k, l)| (self.a_values[k % na], self.b_values[k / na], *l))
    }
}

pub fn regime_map(p1: f64, p2: f64, a_range: Interval, b_range: Interval, resolution: usize) -> Result<RegimeMap> {
    if b_range.lo < 0.0 {
        return Err(Error::domain("|b| range must be nonnegative"));
    }
    ChannelParams::real(0.0, 0.0, p1, p2)?;
    let a_values = a_range.linspace(resolution)?;
    let b_values = b_range.linspace(resolution)?;
    let cells = b_values
        .par_iter()
        .flat_map_iter(|&b| {
            a_values.iter().map(move |&a| classify(&ChannelParams::real(a, b, p1, p2).expect("validated grid")))
        })
        .collect();
    Ok(RegimeMap { p1, p2, a_values, b_values, cells })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn ch(a: f64, b: f64, p1: f64, p2: f64) -> ChannelParams {
        ChannelParams::real(a, b, p1, p2).unwrap()
    }

    #[test]
    fn weak_boundary() {
        assert!(is_weak(&ch(0.0, 0.5, 1.0, 1.0)));
        assert!(is_weak(&ch(0.0, 1.0, 1.0, 1.0)));
        assert!(!is_weak(&ch(0.0, 2.0, 1.0, 1.0)));
    }

    #[test]
    fn very_strong_examples() {
        let c = ch(3.0, 2f64.sqrt(), 1.0, 1.0);
        assert!((very_strong_lhs(&c) - (7.0 - 2.0 * (3.0 - 2f64.sqrt()))).abs() < 1e-12);
        assert!(is_very_strong(&c));
        let c = ch(-1.0, 2.0, 10.0, 10.0);
        assert!((very_strong_lhs(&c) + 90.0).abs() < 1e-12);
        assert!(!is_very_strong(&c));
        assert!(!is_very_strong(&ch(40.0, 0.9, 1.0, 1.0)));
        assert!(very_strong_oracle(&ch(40.0, 0.9, 1.0, 1.0), 11).is_err());
    }

    #[test]
    fn oracle_matches_on_examples() {
        assert!(very_strong_oracle(&ch(3.0, 2f64.sqrt(), 1.0, 1.0), 101).unwrap());
        assert!(!very_strong_oracle(&ch(-1.0, 2.0, 10.0, 10.0), 101).unwrap());
    }

    #[test]
    fn worst_case_correlation_is_opposite_to_mismatch() {
        let c = ChannelParams::new(Complex64::new(2.0, 1.5), 1.8, 3.0, 5.0).unwrap();
        let phi = (c.a() - c.b_mag()).arg() + PI;
        assert!((power_difference(&c, 1.0, phi) - very_strong_lhs(&c)).abs() < 1e-12);
        for k in 0..360 {
            let p = (k as f64).to_radians();
            assert!(power_difference(&c, 1.0, p) >= very_strong_lhs(&c) - 1e-12);
        }
    }

    #[test]
    fn matched_gains_reduce_to_power_comparison() {
        for (b, p1, p2) in [(2.0, 1.0, 3.0), (2.0, 3.0, 1.0), (1.5, 4.0, 4.0)] {
            let c = ch(b, b, p1, p2);
            assert!((very_strong_lhs(&c) - (b * b - 1.0) * (p2 - p1)).abs() < 1e-12);
        }
    }

    #[test]
    fn q_examples() {
        let c = ch(-1.0, 2.0, 10.0, 10.0);
        assert!((q_alpha(&c, 1.0).unwrap() - 927.0).abs() < 1e-9);
        assert!((q_alpha(&c, 0.0).unwrap() - 87.0).abs() < 1e-9);
        assert!(is_primary_decodes_cognitive(&c));
        let c = ch(0.0, 2.0, 10.0, 10.0);
        assert!((q_alpha(&c, 0.0).unwrap() + 23.0).abs() < 1e-9);
        assert!(!is_primary_decodes_cognitive(&c));
        let c = ch(0.7, 1.6, 3.0, 0.0);
        assert!((q_alpha(&c, 0.4).unwrap() + (1.6f64 * 1.6 - 1.0) * 4.0).abs() < 1e-12);
        assert!(q_alpha(&c, 1.2).is_err());
    }

    #[test]
    fn degraded_curve_never_pdc() {
        for b in [1.01, 1.5, 2.0, 4.0] {
            let c = ch(1.0 / b, b, 10.0, 10.0);
            assert!(q_alpha(&c, 0.3).unwrap() <= 0.0);
            assert!(is_degraded(&c));
            assert!(!is_primary_decodes_cognitive(&c));
        }
    }

    #[test]
    fn degraded_examples() {
        assert!(is_degraded(&ch(0.5, 2.0, 1.0, 1.0)));
        assert!(is_degraded(&ch(1.0, 1.0, 1.0, 1.0)));
        let c = ChannelParams::new(Complex64::new(0.5, 0.1), 2.0, 1.0, 1.0).unwrap();
        assert!(!is_degraded(&c));
        assert!(!is_degraded(&ch(0.5, 0.0, 1.0, 1.0)));
    }

    #[test]
    fn endpoint_form_matches_displayed_inequalities() {
        let c = ch(-1.0, 2.0, 10.0, 10.0);
        assert!(condition_3b(&c) && condition_3a(&c));
        let c = ch(0.0, 2.0, 10.0, 10.0);
        assert!(!condition_3b(&c));
    }

    #[test]
    fn classify_examples() {
        let l = classify(&ch(0.3, 0.5, 10.0, 10.0));
        assert!(l.weak && !l.very_strong && !l.primary_decodes_cognitive && !l.degraded);
        assert!(classify(&ch(3.0, 2f64.sqrt(), 1.0, 1.0)).very_strong);
        let l = classify(&ch(-1.0, 2.0, 10.0, 10.0));
        assert!(l.primary_decodes_cognitive && !l.very_strong && !l.weak);
        assert!(l.flag_names().contains(&"pdc"));
    }

    #[test]
    fn map_layout() {
        let m =
            regime_map(10.0, 10.0, Interval::new(-5.0, 5.0).unwrap(), Interval::new(0.0, 5.0).unwrap(), 21).unwrap();
        assert_eq!(m.cells.len(), 441);
        assert_eq!(m.a_values[0], -5.0);
        assert_eq!(*m.b_values.last().unwrap(), 5.0);
        for (a, b, l) in m.iter() {
            assert_eq!(l, classify(&ch(a, b, 10.0, 10.0)));
            assert_eq!(l.weak, b <= 1.0);
        }
        assert_eq!(m.get(3, 7), classify(&ch(m.a_values[3], m.b_values[7], 10.0, 10.0)));
        assert!(regime_map(10.0, 10.0, Interval::new(-5.0, 5.0).unwrap(), Interval::new(0.0, 5.0).unwrap(), 1).is_err());
    }
}

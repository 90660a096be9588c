//! Choices of the DPC coefficient away from `lambda_Costa1`.
//!
//! Moving `lambda` off `lambda_Costa1` by `epsilon` costs the cognitive user
//! a second-order amount of rate while the primary user, which decodes
//! `U1c` as side information, gains to first order. The sum rate is
//! maximized when the two `f` terms balance, which for real `lambda` is a
//! quadratic equation in `lambda`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{check_alpha, log2_1p, ChannelParams, RatePair, SchemeParams};
use crate::outer::{alpha_grid, outer_constraints, primary_snr};
use crate::regime;
use crate::scheme::{achievable_constraints, costa_pair, lambda_candidates, LambdaPolicy};

/// Default grid sizes for the impossibility witness.
pub const WITNESS_ALPHA_GRID: usize = 201;
pub const WITNESS_LAMBDA_GRID: usize = 201;
/// Rate slack used when deciding that a scheme point attains an outer corner.
pub const WITNESS_TOL: f64 = 1e-6;

/// Second moments of the two channel outputs under the scheme's inputs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReceivedPowers {
    /// `E|Y1|^2 = 1 + |a|^2 P2 + P1 + 2 Re{a} sqrt((1-alpha) P1 P2)`.
    pub h1: f64,
    /// `E|Y2|^2 = 1 + P2 + |b|^2 P1 + 2 sqrt((1-alpha) |b|^2 P1 P2)`.
    pub h2: f64,
}

pub fn received_powers(ch: &ChannelParams, alpha: f64) -> Result<ReceivedPowers> {
    check_alpha(alpha)?;
    let a = ch.a();
    let h1 = 1.0 + a.norm_sqr() * ch.p2() + ch.p1() + 2.0 * a.re * ((1.0 - alpha) * ch.p1() * ch.p2()).sqrt();
    let h2 = 1.0 + primary_snr(ch, alpha);
    Ok(ReceivedPowers { h1, h2 })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PerturbationRates {
    pub epsilon: Complex64,
    /// `lambda_Costa1 - lambda_Costa2`.
    pub delta_lambda: Complex64,
    pub r1: f64,
    pub r2: f64,
}

/// Rate caps at `lambda = lambda_Costa1 + epsilon`, written in terms of
/// `epsilon` and `delta_lambda`:
///
/// ```text
/// R1 = log2(1 + S) - log2(1 + (S + 1)^2 P2 |eps|^2 / (S H1))
/// R2 = log2(H2) + log2(1 / (1 + S |b|^2) + (S |b|^2 + 1) P2 |eps + delta|^2 / (S H2))
/// ```
///
/// with `S = alpha P1`.
pub fn perturbation_rates(ch: &ChannelParams, alpha: f64, epsilon: Complex64) -> Result<PerturbationRates> {
    check_alpha(alpha)?;
    let s = alpha * ch.p1();
    if s <= 0.0 {
        return Err(Error::domain("perturbation rates need alpha P1 > 0"));
    }
    let (c1, c2) = costa_pair(ch, alpha)?;
    let delta_lambda = c1 - c2;
    let ReceivedPowers { h1, h2 } = received_powers(ch, alpha)?;
    let p2 = ch.p2();
    let sb2 = s * ch.b2();
    let r1 = log2_1p(s) - log2_1p((s + 1.0) * (s + 1.0) * p2 * epsilon.norm_sqr() / (s * h1));
    let r2 = h2.log2() + (1.0 / (1.0 + sb2) + (sb2 + 1.0) * p2 * (epsilon + delta_lambda).norm_sqr() / (s * h2)).log2();
    Ok(PerturbationRates { epsilon, delta_lambda, r1, r2 })
}

/// `quadratic * x^2 + linear * x + constant = 0` in `x = Re{lambda}`
/// (with `Im{lambda} = 0`), whose roots balance the two `f` terms and so
/// put the pentagon's corner on the sum-rate cap.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SumRateQuadratic {
    pub quadratic: f64,
    pub linear: f64,
    pub constant: f64,
}

impl SumRateQuadratic {
    pub fn eval(&self, x: f64) -> f64 {
        (self.quadratic * x + self.linear) * x + self.constant
    }

    pub fn discriminant(&self) -> f64 {
        self.linear * self.linear - 4.0 * self.quadratic * self.constant
    }

    /// Real roots in ascending order; a double root is reported once.
    pub fn real_roots(&self) -> Vec<f64> {
        let (a, b, c) = (self.quadratic, self.linear, self.constant);
        let scale = a.abs().max(b.abs()).max(c.abs());
        if scale == 0.0 {
            return Vec::new();
        }
        if a.abs() <= 1e-14 * scale {
            return if b == 0.0 { Vec::new() } else { vec![-c / b] };
        }
        let disc = self.discriminant();
        if disc < 0.0 {
            return Vec::new();
        }
        let q = -0.5 * (b + b.signum() * disc.sqrt());
        let mut roots = if q == 0.0 { vec![0.0] } else { vec![q / a, c / q] };
        roots.sort_by(f64::total_cmp);
        roots.dedup();
        roots
    }
}

/// Coefficients of the sum-rate equation for `alpha P1 > 0` and `|b| > 0`:
///
/// ```text
/// -P2 (|b|^2/H2 - 1/H1 + (1/H2 - 1/H1)/(alpha P1)) |lambda|^2
///   + 2 (sqrt((1-alpha) P1 P2)(|b|^2/H2 - 1/H1) + P2 (|b|/H2 - Re{a}/H1)) Re{lambda}
///   + alpha P1 (|b|^2/H2 - 1/H1) = 0
/// ```
pub fn sum_rate_quadratic(ch: &ChannelParams, alpha: f64) -> Result<SumRateQuadratic> {
    check_alpha(alpha)?;
    let s = alpha * ch.p1();
    if s <= 0.0 {
        return Err(Error::domain("sum-rate quadratic needs alpha P1 > 0"));
    }
    if ch.b_mag() <= 0.0 {
        return Err(Error::domain("sum-rate quadratic needs |b| > 0"));
    }
    let ReceivedPowers { h1, h2 } = received_powers(ch, alpha)?;
    let (inv1, inv2) = (1.0 / h1, 1.0 / h2);
    let k = ch.b2() * inv2 - inv1;
    let p2 = ch.p2();
    Ok(SumRateQuadratic {
        quadratic: -p2 * (k + (inv2 - inv1) / s),
        linear: 2.0 * (((1.0 - alpha) * ch.p1() * p2).sqrt() * k + p2 * (ch.b_mag() * inv2 - ch.a().re * inv1)),
        constant: s * k,
    })
}

/// Real `lambda` values maximizing the scheme's sum rate at `alpha`.
///
/// Requires `|b| > 1`, a channel outside the very strong regime, and
/// `0 < alpha <= 1`. Both roots are returned when there are two.
pub fn sum_rate_optimal_lambda(ch: &ChannelParams, alpha: f64) -> Result<Vec<Complex64>> {
    if ch.b_mag() <= 1.0 {
        return Err(Error::domain("sum-rate-optimal lambda needs |b| > 1"));
    }
    if regime::is_very_strong(ch) {
        return Err(Error::domain("very strong channel: lambda_Costa1 already meets the sum cap"));
    }
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::domain(format!("sum-rate-optimal lambda needs 0 < alpha <= 1, got {alpha}")));
    }
    let q = sum_rate_quadratic(ch, alpha)?;
    Ok(q.real_roots().into_iter().map(|x| Complex64::new(x, 0.0)).collect())
}

/// For each `alpha_out` on the grid, whether some scheme point
/// `(alpha_in, lambda)` on the grids reaches both the outer bound's `R1` cap
/// and its sum-rate cap at `alpha_out` (within [`WITNESS_TOL`]).
///
/// `lambda` ranges over `[0, 2 lambda_Costa1]` plus `lambda_Costa1`,
/// `lambda_Costa2` and the sum-rate roots.
pub fn outer_corner_attainment(
    ch: &ChannelParams,
    alpha_grid_size: usize,
    lambda_grid: usize,
) -> Result<Vec<(f64, bool)>> {
    attainment_on(ch, &alpha_grid(alpha_grid_size)?, lambda_grid)
}

fn attainment_on(ch: &ChannelParams, alphas: &[f64], lambda_grid: usize) -> Result<Vec<(f64, bool)>> {
    let policy = LambdaPolicy::Sweep { grid: lambda_grid, span: 2.0 };
    // D points only depend on alpha_in; the caps below bound them from above
    // and prune most (alpha_out, alpha_in) pairs before any lambda is tried.
    let inner: Vec<(f64, f64, Vec<RatePair>)> = alphas
        .par_iter()
        .map(|&alpha| -> Result<_> {
            let r1_cap = log2_1p(alpha * ch.p1());
            let sum_cap = log2_1p(primary_snr(ch, alpha));
            let mut ds = Vec::new();
            for lambda in lambda_candidates(ch, alpha, policy)? {
                ds.push(achievable_constraints(ch, &SchemeParams::new(alpha, lambda)?)?.constraints.max_r1_corner());
            }
            Ok((r1_cap, sum_cap, ds))
        })
        .collect::<Result<_>>()?;
    alphas
        .iter()
        .map(|&alpha_out| {
            let target = outer_constraints(ch, alpha_out)?;
            let (r1_t, sum_t) = (target.r1_max() - WITNESS_TOL, target.sum_max() - WITNESS_TOL);
            let hit = inner.iter().any(|(r1_cap, sum_cap, ds)| {
                *r1_cap >= r1_t && *sum_cap >= sum_t && ds.iter().any(|d| d.r1() >= r1_t && d.r1() + d.r2() >= sum_t)
            });
            Ok((alpha_out, hit))
        })
        .collect()
}

/// Numerical witness that the outer bound is not attained outside the
/// "primary decodes cognitive" regime: returns `true` when some outer
/// corner on the grid is reached by no scheme point.
pub fn capacity_impossibility_check(ch: &ChannelParams, alpha_grid_size: usize, lambda_grid: usize) -> Result<bool> {
    if ch.b_mag() <= 1.0 {
        return Err(Error::domain("impossibility check needs |b| > 1"));
    }
    if regime::is_primary_decodes_cognitive(ch) {
        return Err(Error::domain("the outer bound is attained in the primary-decodes-cognitive regime"));
    }
    let mut alphas = alpha_grid(alpha_grid_size)?;
    // When Q(0) < 0 the unattained corners sit on (0, alpha_0), which can be
    // narrower than the grid step; add its midpoint to both grids.
    if regime::q_alpha(ch, 0.0)? < 0.0 {
        let (mut lo, mut hi) = (0.0, 1.0);
        if regime::q_alpha(ch, 1.0)? < 0.0 {
            hi = 0.5;
        }
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if regime::q_alpha(ch, mid)? < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        alphas.push(0.5 * lo);
        alphas.sort_by(f64::total_cmp);
    }
    Ok(attainment_on(ch, &alphas, lambda_grid)?.iter().any(|(_, hit)| !hit))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheme::f_rate;
    use crate::scheme::DpcContext;

    fn lambda_role() -> ChannelParams {
        ChannelParams::real(0.3f64.sqrt(), 2f64.sqrt(), 6.0, 6.0).unwrap()
    }

    #[test]
    fn powers_at_full_alpha() {
        let ch = ChannelParams::new(Complex64::new(0.5, -1.2), 1.7, 3.0, 4.0).unwrap();
        let p = received_powers(&ch, 1.0).unwrap();
        assert!((p.h1 - (1.0 + (0.25 + 1.44) * 4.0 + 3.0)).abs() < 1e-12);
        assert!((p.h2 - (1.0 + 4.0 + 1.7 * 1.7 * 3.0)).abs() < 1e-12);
    }

    #[test]
    fn powers_on_reference_channel() {
        let p = received_powers(&lambda_role(), 0.5).unwrap();
        let h1 = 1.0 + 0.3 * 6.0 + 6.0 + 2.0 * 0.3f64.sqrt() * (3.0f64 * 6.0).sqrt();
        let h2 = 1.0 + 6.0 + 12.0 + 2.0 * (3.0f64 * 2.0 * 6.0).sqrt();
        assert!((p.h1 - h1).abs() < 1e-12);
        assert!((p.h2 - h2).abs() < 1e-12);
    }

    #[test]
    fn powers_match_context_second_moments() {
        let ch = ChannelParams::new(Complex64::new(-0.4, 0.9), 2.5, 7.0, 3.0).unwrap();
        for alpha in [0.0, 0.2, 0.7, 1.0] {
            let p = received_powers(&ch, alpha).unwrap();
            let rx1 = DpcContext::cognitive(&ch, alpha).unwrap();
            let rx2 = DpcContext::primary(&ch, alpha).unwrap();
            assert!((p.h1 - rx1.received_power()).abs() < 1e-12);
            assert!((p.h2 - ch.b2() * rx2.received_power()).abs() < 1e-9);
        }
    }

    #[test]
    fn unperturbed_rates() {
        let ch = lambda_role();
        let p = perturbation_rates(&ch, 0.5, Complex64::new(0.0, 0.0)).unwrap();
        let (c1, _) = costa_pair(&ch, 0.5).unwrap();
        let at = achievable_constraints(&ch, &SchemeParams::new(0.5, c1).unwrap()).unwrap();
        assert!((p.r1 - log2_1p(3.0)).abs() < 1e-12);
        assert!((p.r2 - at.raw.r2).abs() < 1e-12);
    }

    #[test]
    fn perturbation_needs_signal_power() {
        assert!(perturbation_rates(&lambda_role(), 0.0, Complex64::new(0.1, 0.0)).is_err());
    }

    #[test]
    fn roots_balance_the_two_receivers() {
        let ch = lambda_role();
        for alpha in [0.1, 0.5, 1.0] {
            let roots = sum_rate_optimal_lambda(&ch, alpha).unwrap();
            assert!(!roots.is_empty());
            let rx1 = DpcContext::cognitive(&ch, alpha).unwrap();
            let rx2 = DpcContext::primary(&ch, alpha).unwrap();
            for l in roots {
                let d = f_rate(&rx1, l).unwrap() - f_rate(&rx2, l).unwrap();
                assert!(d.abs() < 1e-9, "alpha {alpha}: residual {d}");
            }
        }
    }

    #[test]
    fn root_preconditions() {
        let weak = ChannelParams::real(0.5, 0.8, 2.0, 2.0).unwrap();
        assert!(sum_rate_optimal_lambda(&weak, 0.5).is_err());
        let vs = ChannelParams::real(3.0, 2f64.sqrt(), 1.0, 1.0).unwrap();
        assert!(sum_rate_optimal_lambda(&vs, 0.5).is_err());
        assert!(sum_rate_optimal_lambda(&lambda_role(), 0.0).is_err());
    }

    #[test]
    fn quadratic_root_solver() {
        let q = SumRateQuadratic { quadratic: 1.0, linear: -3.0, constant: 2.0 };
        assert_eq!(q.real_roots(), vec![1.0, 2.0]);
        let q = SumRateQuadratic { quadratic: 0.0, linear: 2.0, constant: -1.0 };
        assert_eq!(q.real_roots(), vec![0.5]);
        let q = SumRateQuadratic { quadratic: 1.0, linear: 0.0, constant: 1.0 };
        assert!(q.real_roots().is_empty());
        let q = SumRateQuadratic { quadratic: 1.0, linear: -2.0, constant: 1.0 };
        assert_eq!(q.real_roots(), vec![1.0]);
        let q = SumRateQuadratic { quadratic: 1e-3, linear: 1e4, constant: -1.0 };
        let r = q.real_roots();
        assert!((r[1] - 1e-4).abs() < 1e-14);
        assert!(q.eval(r[1]).abs() < 1e-15);
    }

    #[test]
    fn witness_on_non_pdc_channels() {
        let ch = ChannelParams::real(0.0, 2.0, 10.0, 10.0).unwrap();
        assert!(capacity_impossibility_check(&ch, 51, 51).unwrap());
        assert!(capacity_impossibility_check(&lambda_role(), 51, 51).unwrap());
    }

    #[test]
    fn pdc_channel_attains_every_corner() {
        let ch = ChannelParams::real(-1.0, 2.0, 10.0, 10.0).unwrap();
        assert!(capacity_impossibility_check(&ch, 21, 21).is_err());
        assert!(outer_corner_attainment(&ch, 51, 21).unwrap().iter().all(|(_, hit)| *hit));
    }
}

//! Outer bound on the capacity region.
//!
//! For a fixed `alpha` in `[0, 1]` the bound is the pentagon
//!
//! ```text
//! R1      <= C(alpha P1)
//! R2      <= C(|b|^2 P1 + P2 + 2 sqrt((1 - alpha) |b|^2 P1 P2))
//! R1 + R2 <= (R2 bound) + log2((1 + max(1, |b|^2) alpha P1) / (1 + alpha |b|^2 P1))
//! ```
//!
//! and the outer region is the convex closure of the union over `alpha`.
//! For `|b| > 1` the sum-rate correction vanishes; it is still evaluated
//! through the same expression.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{check_alpha, log2_1p, ChannelParams, RateConstraintSet, RatePair};
use crate::region::{pentagon_vertices, RateRegion};

/// Default number of `alpha` grid points for region construction.
pub const DEFAULT_ALPHA_GRID: usize = 501;
/// `alpha` grid used for figure reproduction.
pub const FIGURE_ALPHA_GRID: usize = 2001;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OuterBoundPoint {
    pub alpha: f64,
    pub constraints: RateConstraintSet,
}

impl OuterBoundPoint {
    pub fn at(ch: &ChannelParams, alpha: f64) -> Result<Self> {
        Ok(Self { alpha, constraints: outer_constraints(ch, alpha)? })
    }
}

/// Received power at the primary receiver minus one, i.e. the argument of
/// the `R2` bound. Shared with the achievable scheme, where it is the
/// argument of the sum-rate cap.
pub(crate) fn primary_snr(ch: &ChannelParams, alpha: f64) -> f64 {
    let b2 = ch.b2();
    b2 * ch.p1() + ch.p2() + 2.0 * ((1.0 - alpha) * b2 * ch.p1() * ch.p2()).sqrt()
}

pub fn outer_constraints(ch: &ChannelParams, alpha: f64) -> Result<RateConstraintSet> {
    check_alpha(alpha)?;
    let b2 = ch.b2();
    let r1 = log2_1p(alpha * ch.p1());
    let r2 = log2_1p(primary_snr(ch, alpha));
    let correction = ((1.0 + b2.max(1.0) * alpha * ch.p1()) / (1.0 + alpha * b2 * ch.p1())).log2();
    RateConstraintSet::new(r1, r2, r2 + correction)
}

/// The bound's Pareto corner at `alpha`: `(C(alpha P1), min(R2 cap, sum cap - R1 cap))`.
pub fn outer_corner(ch: &ChannelParams, alpha: f64) -> Result<RatePair> {
    Ok(outer_constraints(ch, alpha)?.max_r1_corner())
}

/// Uniform grid `0, 1/(n-1), ..., 1`.
pub fn alpha_grid(n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::domain(format!("alpha grid needs at least 2 points, got {n}")));
    }
    let last = (n - 1) as f64;
    Ok((0..n).map(|i| i as f64 / last).collect())
}

pub fn outer_region(ch: &ChannelParams, alpha_grid_size: usize) -> Result<RateRegion> {
    let alphas = alpha_grid(alpha_grid_size)?;
    let pts: Vec<RatePair> = alphas
        .par_iter()
        .map(|&a| outer_constraints(ch, a).map(|c| pentagon_vertices(&c)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    Ok(RateRegion::hull_of(pts))
}

/// Two-constraint relaxation for `|b| > 1`, obtained by maximizing the `R1`
/// and sum-rate bounds over `alpha` separately:
/// `R1 <= C(P1)`, `R1 + R2 <= C((sqrt(|b|^2 P1) + sqrt(P2))^2)`.
/// The `R2` cap is set to the sum cap.
pub fn outer_envelope_strong(ch: &ChannelParams) -> Result<RateConstraintSet> {
    if ch.b_mag() <= 1.0 {
        return Err(Error::domain(format!("envelope requires |b| > 1, got {}", ch.b_mag())));
    }
    let sum = log2_1p(miso_snr(ch));
    RateConstraintSet::new(log2_1p(ch.p1()), sum, sum)
}

/// `(sqrt(|b|^2 P1) + sqrt(P2))^2`: the beamforming SNR at the primary receiver.
pub(crate) fn miso_snr(ch: &ChannelParams) -> f64 {
    let s = (ch.b2() * ch.p1()).sqrt() + ch.p2().sqrt();
    s * s
}

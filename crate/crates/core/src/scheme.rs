//! DPC-based achievable scheme.
//!
//! The cognitive transmitter splits its power: a fraction `alpha` carries
//! its own codeword `X1c`, the rest beamforms the primary codeword `X2`.
//! `X1c` is dirty-paper coded against `X2` through the auxiliary
//! `U1c = X1c + lambda X2`. The cognitive receiver decodes `U1c` alone; the
//! primary receiver decodes `U1c` and `X2` jointly. For fixed
//! `(alpha, lambda)` the achievable rates form the pentagon
//!
//! ```text
//! R1      <= f(a + sqrt((1-alpha) P1 / P2), 1; lambda)
//! R2      <= C(P2 + |b|^2 P1 + 2 sqrt((1-alpha) |b|^2 P1 P2)) - f(1/|b| + sqrt((1-alpha) P1 / P2), 1/|b|^2; lambda)
//! R1 + R2 <= C(P2 + |b|^2 P1 + 2 sqrt((1-alpha) |b|^2 P1 P2))
//! ```

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{check_alpha, log2_1p, ChannelParams, RateConstraintSet, RatePair, SchemeParams, RATE_TOL};
use crate::optimizer;
use crate::outer::{alpha_grid, primary_snr};
use crate::regime;
use crate::region::{pentagon_vertices, RateRegion};

/// A decoder's view of the DPC problem: it observes `X1c + h X2 + sigma Z`
/// where `X1c` has power `alpha P1` and the interferer `X2` has power `P2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DpcContext {
    h: Complex64,
    sigma2: f64,
    alpha_p1: f64,
    p2: f64,
}

impl DpcContext {
    pub fn new(h: Complex64, sigma2: f64, alpha_p1: f64, p2: f64) -> Result<Self> {
        if !(h.re.is_finite() && h.im.is_finite()) {
            return Err(Error::domain("effective gain h must be finite"));
        }
        if !sigma2.is_finite() || sigma2 <= 0.0 {
            return Err(Error::domain(format!("sigma^2 must be positive, got {sigma2}")));
        }
        if !alpha_p1.is_finite() || alpha_p1 < 0.0 || !p2.is_finite() || p2 < 0.0 {
            return Err(Error::domain("powers must be finite and >= 0"));
        }
        Ok(Self { h, sigma2, alpha_p1, p2 })
    }

    /// Cognitive receiver: `h = a + sqrt((1-alpha) P1/P2)`, `sigma^2 = 1`.
    pub fn cognitive(ch: &ChannelParams, alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        let h = ch.a() + broadcast_gain(ch, alpha)?;
        Self::new(h, 1.0, alpha * ch.p1(), ch.p2())
    }

    /// Primary receiver, normalized by `|b|`: `h = 1/|b| + sqrt((1-alpha) P1/P2)`,
    /// `sigma^2 = 1/|b|^2`.
    pub fn primary(ch: &ChannelParams, alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        if ch.b_mag() <= 0.0 {
            return Err(Error::domain("the scheme needs |b| > 0 at the primary receiver"));
        }
        let h = Complex64::new(1.0 / ch.b_mag() + broadcast_gain(ch, alpha)?, 0.0);
        Self::new(h, 1.0 / ch.b2(), alpha * ch.p1(), ch.p2())
    }

    pub fn h(&self) -> Complex64 {
        self.h
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }

    pub fn alpha_p1(&self) -> f64 {
        self.alpha_p1
    }

    pub fn p2(&self) -> f64 {
        self.p2
    }

    /// `alpha P1 + |h|^2 P2 + sigma^2`: total received power.
    pub fn received_power(&self) -> f64 {
        self.alpha_p1 + self.h.norm_sqr() * self.p2 + self.sigma2
    }
}

/// `sqrt((1-alpha) P1 / P2)`, the amplitude with which transmitter 1
/// relays `X2`. Undefined for `P2 = 0` unless `alpha = 1`.
fn broadcast_gain(ch: &ChannelParams, alpha: f64) -> Result<f64> {
    let rest = 1.0 - alpha;
    if rest == 0.0 {
        return Ok(0.0);
    }
    if ch.p2() == 0.0 {
        return Err(Error::domain("P2 = 0 leaves nothing to broadcast; only alpha = 1 is allowed"));
    }
    Ok((rest * ch.p1() / ch.p2()).sqrt())
}

/// `lambda_Costa = alpha P1 / (alpha P1 + sigma^2) * h`.
pub fn lambda_costa(ctx: &DpcContext) -> Complex64 {
    ctx.h * (ctx.alpha_p1 / (ctx.alpha_p1 + ctx.sigma2))
}

/// `I(X1c + h X2 + sigma Z; U1c) - I(U1c; X2)` for `U1c = X1c + lambda X2`,
/// in the closed form
///
/// ```text
/// log2( (sigma^2 + S) / (sigma^2 + S |h|^2 P2 / (S + |h|^2 P2 + sigma^2) * |lambda / lambda_Costa - 1|^2) )
/// ```
///
/// with `S = alpha P1`. The interference term is evaluated as
/// `(S + sigma^2)^2 P2 |lambda - lambda_Costa|^2 / (S (S + |h|^2 P2 + sigma^2))`,
/// which stays finite when `h = 0`.
pub fn f_rate(ctx: &DpcContext, lambda: Complex64) -> Result<f64> {
    let s = ctx.alpha_p1;
    if s == 0.0 {
        if lambda == Complex64::new(0.0, 0.0) {
            return Ok(0.0);
        }
        return Err(Error::domain("alpha P1 = 0 forces lambda = 0"));
    }
    let n = ctx.sigma2;
    let residual = (s + n) * (s + n) * ctx.p2 * (lambda - lambda_costa(ctx)).norm_sqr() / (s * ctx.received_power());
    Ok(log2_1p(s / n) - log2_1p(residual / n))
}

/// Raw (unclamped) values of the three constraints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RawRates {
    pub r1: f64,
    pub r2: f64,
    pub sum: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AchievableRates {
    pub scheme: SchemeParams,
    /// Constraint values as computed; `r1` and `r2` may be negative.
    pub raw: RawRates,
    /// The same values clamped below at zero.
    pub constraints: RateConstraintSet,
}

pub fn achievable_constraints(ch: &ChannelParams, s: &SchemeParams) -> Result<AchievableRates> {
    let alpha = s.alpha();
    let rx1 = DpcContext::cognitive(ch, alpha)?;
    let rx2 = DpcContext::primary(ch, alpha)?;
    let sum = log2_1p(primary_snr(ch, alpha));
    let r1 = f_rate(&rx1, s.lambda())?;
    let r2 = sum - f_rate(&rx2, s.lambda())?;
    let constraints = RateConstraintSet::new(r1.max(0.0), r2.max(0.0), sum)?;
    Ok(AchievableRates { scheme: *s, raw: RawRates { r1, r2, sum }, constraints })
}

/// Pareto corner `D = (R1 cap, min(R2 cap, sum cap - R1 cap))` of the
/// scheme's pentagon.
pub fn point_d(ch: &ChannelParams, s: &SchemeParams) -> Result<RatePair> {
    Ok(achievable_constraints(ch, s)?.constraints.max_r1_corner())
}

/// `(lambda_Costa1, lambda_Costa2)`: the coefficients that cancel `X2` at
/// the cognitive and primary receiver respectively.
pub fn costa_pair(ch: &ChannelParams, alpha: f64) -> Result<(Complex64, Complex64)> {
    Ok((lambda_costa(&DpcContext::cognitive(ch, alpha)?), lambda_costa(&DpcContext::primary(ch, alpha)?)))
}

/// How `lambda` is chosen for each `alpha` when building a region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LambdaPolicy {
    /// `lambda = lambda_Costa1` ("perfect DPC").
    PerfectDpc,
    /// Sum-rate-maximizing choices: the real roots of the sum-rate quadratic,
    /// plus `lambda_Costa1` whenever it already meets the sum cap. Falls back
    /// to `lambda_Costa1` where the quadratic is not defined.
    SumRateOptimal,
    /// `lambda` on the segment `[0, span * lambda_Costa1]` with `grid` points,
    /// plus `lambda_Costa1`, `lambda_Costa2` and the sum-rate roots.
    Sweep { grid: usize, span: f64 },
}

impl LambdaPolicy {
    pub fn validate(&self) -> Result<()> {
        if let LambdaPolicy::Sweep { grid, span } = *self {
            if grid < 2 {
                return Err(Error::domain(format!("lambda grid needs at least 2 points, got {grid}")));
            }
            if !span.is_finite() || span < 1.0 {
                return Err(Error::domain(format!("lambda span must be >= 1, got {span}")));
            }
        }
        Ok(())
    }
}

/// Whether the sum-rate quadratic applies at this operating point.
fn sum_rate_roots_apply(ch: &ChannelParams, alpha: f64) -> bool {
    ch.b_mag() > 1.0 && alpha > 0.0 && ch.p1() > 0.0 && !regime::is_very_strong(ch)
}

/// The `lambda` values evaluated at `alpha` under `policy`, deduplicated.
pub fn lambda_candidates(ch: &ChannelParams, alpha: f64, policy: LambdaPolicy) -> Result<Vec<Complex64>> {
    policy.validate()?;
    let zero = Complex64::new(0.0, 0.0);
    if alpha * ch.p1() == 0.0 {
        // U1c carries nothing; only lambda = 0 is admissible.
        DpcContext::cognitive(ch, alpha)?;
        DpcContext::primary(ch, alpha)?;
        return Ok(vec![zero]);
    }
    let (c1, c2) = costa_pair(ch, alpha)?;
    let roots = || -> Result<Vec<Complex64>> {
        if sum_rate_roots_apply(ch, alpha) {
            optimizer::sum_rate_optimal_lambda(ch, alpha)
        } else {
            Ok(Vec::new())
        }
    };
    let mut out = match policy {
        LambdaPolicy::PerfectDpc => vec![c1],
        LambdaPolicy::SumRateOptimal => {
            let mut v = roots()?;
            let at_costa = achievable_constraints(ch, &SchemeParams::new(alpha, c1)?)?;
            if v.is_empty() || at_costa.raw.r1 + at_costa.raw.r2 >= at_costa.raw.sum - RATE_TOL {
                v.push(c1);
            }
            v
        }
        LambdaPolicy::Sweep { grid, span } => {
            let last = (grid - 1) as f64;
            let mut v: Vec<Complex64> = (0..grid).map(|i| c1 * (span * i as f64 / last)).collect();
            v.push(c1);
            v.push(c2);
            v.extend(roots()?);
            v
        }
    };
    out.sort_by(|p, q| p.re.total_cmp(&q.re).then(p.im.total_cmp(&q.im)));
    out.dedup();
    Ok(out)
}

/// Convex closure of the scheme's pentagons over a uniform `alpha` grid,
/// with `lambda` chosen by `policy`.
pub fn achievable_region_with(ch: &ChannelParams, alpha_grid_size: usize, policy: LambdaPolicy) -> Result<RateRegion> {
    let alphas = alpha_grid(alpha_grid_size)?;
    let per_alpha: Vec<Vec<RatePair>> = alphas
        .par_iter()
        .map(|&alpha| -> Result<Vec<RatePair>> {
            let mut pts = Vec::new();
            for lambda in lambda_candidates(ch, alpha, policy)? {
                let rates = achievable_constraints(ch, &SchemeParams::new(alpha, lambda)?)?;
                pts.extend(pentagon_vertices(&rates.constraints));
            }
            Ok(pts)
        })
        .collect::<Result<_>>()?;
    Ok(RateRegion::hull_of(per_alpha.into_iter().flatten()))
}

/// Achievable region with `lambda` swept over `[0, lambda_span * lambda_Costa1]`.
pub fn achievable_region(
    ch: &ChannelParams,
    alpha_grid_size: usize,
    lambda_grid: usize,
    lambda_span: f64,
) -> Result<RateRegion> {
    achievable_region_with(ch, alpha_grid_size, LambdaPolicy::Sweep { grid: lambda_grid, span: lambda_span })
}

/// One row of a `lambda` sweep at fixed `alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepPoint {
    pub lambda: Complex64,
    pub rates: RawRates,
    pub d: RatePair,
}

/// Evaluates the scheme along `lambda = t * lambda_Costa1`, `t` in
/// `[0, span]`, with `lambda_Costa1` and `lambda_Costa2` inserted exactly.
/// Rows are ordered by real part, then imaginary part.
pub fn lambda_sweep(ch: &ChannelParams, alpha: f64, grid: usize, span: f64) -> Result<Vec<SweepPoint>> {
    LambdaPolicy::Sweep { grid, span }.validate()?;
    let lambdas = if alpha * ch.p1() == 0.0 {
        lambda_candidates(ch, alpha, LambdaPolicy::PerfectDpc)?
    } else {
        let (c1, c2) = costa_pair(ch, alpha)?;
        let last = (grid - 1) as f64;
        let mut v: Vec<Complex64> = (0..grid).map(|i| c1 * (span * i as f64 / last)).collect();
        v.push(c1);
        v.push(c2);
        v.sort_by(|p, q| p.re.total_cmp(&q.re).then(p.im.total_cmp(&q.im)));
        v.dedup();
        v
    };
    lambdas
        .into_iter()
        .map(|lambda| {
            let r = achievable_constraints(ch, &SchemeParams::new(alpha, lambda)?)?;
            Ok(SweepPoint { lambda, rates: r.raw, d: r.constraints.max_r1_corner() })
        })
        .collect()
}

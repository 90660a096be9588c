//! Seeded oracle and invariant suites run by `gcifc verify`.
//!
//! Every suite draws its own channels from a generator seeded with
//! `seed + suite index`, evaluates them in parallel and reduces the results
//! in input order, so the rendered report depends only on the config.

use std::fmt::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::gap::{additive_gap, multiplicative_check};
use crate::model::{cap_c, ChannelParams, SchemeParams};
use crate::optimizer::{perturbation_rates, sum_rate_optimal_lambda};
use crate::outer::{outer_corner, outer_region};
use crate::regime::{is_primary_decodes_cognitive, is_very_strong, pdc_oracle, very_strong_oracle};
use crate::sampling::ChannelSampler;
use crate::scheme::{achievable_constraints, achievable_region, costa_pair, f_rate, lambda_costa, point_d, DpcContext};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VerifyConfig {
    pub seed: u64,
    pub num_channels: usize,
    pub alpha_grid: usize,
    pub lambda_grid: usize,
    /// Pass threshold for every numerical comparison. A negative value
    /// makes every check fail.
    pub tolerance: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { seed: 1, num_channels: 500, alpha_grid: 101, lambda_grid: 41, tolerance: 1e-9 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: usize,
    pub total: usize,
    /// Largest error seen (or number of disagreements for oracle suites).
    pub worst: f64,
}

impl SuiteResult {
    pub fn ok(&self) -> bool {
        self.passed == self.total
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub config: VerifyConfig,
    pub suites: Vec<SuiteResult>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.suites.iter().all(SuiteResult::ok)
    }

    pub fn render(&self) -> String {
        let c = &self.config;
        let mut out = String::new();
        let _ = writeln!(out, "gcifc verify report");
        let _ = writeln!(out, "seed: {}", c.seed);
        let _ = writeln!(out, "channels: {}", c.num_channels);
        let _ = writeln!(out, "alpha_grid: {}", c.alpha_grid);
        let _ = writeln!(out, "lambda_grid: {}", c.lambda_grid);
        let _ = writeln!(out, "tolerance: {:e}", c.tolerance);
        let _ = writeln!(out, "{:<26} {:>13} {:>12}  status", "suite", "passed/total", "worst");
        for s in &self.suites {
            let _ = writeln!(
                out,
                "{:<26} {:>13} {:>12.3e}  {}",
                s.name,
                format!("{}/{}", s.passed, s.total),
                s.worst,
                if s.ok() { "PASS" } else { "FAIL" }
            );
        }
        let _ = writeln!(out, "overall: {}", if self.all_passed() { "PASS" } else { "FAIL" });
        out
    }
}

/// Reduces per-case `(passed, error)` results in order.
fn tally(name: &'static str, cases: Vec<(bool, f64)>) -> SuiteResult {
    let passed = cases.iter().filter(|c| c.0).count();
    let worst = cases.iter().map(|c| c.1).fold(0.0, f64::max);
    SuiteResult { name, passed, total: cases.len(), worst }
}

fn contexts(sampler: &mut ChannelSampler, n: usize) -> Vec<DpcContext> {
    (0..n)
        .map(|i| {
            let ch = sampler.any_channel();
            let alpha = 1.0 - sampler.unit();
            if i % 2 == 0 { DpcContext::cognitive(&ch, alpha) } else { DpcContext::primary(&ch, alpha) }
                .expect("sampled channels have positive powers")
        })
        .collect()
}

fn costa_identity(cfg: &VerifyConfig, sampler: &mut ChannelSampler) -> Result<SuiteResult> {
    let ctxs = contexts(sampler, cfg.num_channels);
    let cases = ctxs
        .par_iter()
        .map(|ctx| {
            let err = (f_rate(ctx, lambda_costa(ctx))? - cap_c(ctx.alpha_p1() / ctx.sigma2())?).abs();
            Ok((err <= cfg.tolerance, err))
        })
        .collect::<Result<_>>()?;
    Ok(tally("costa_identity", cases))
}

fn treat_as_noise(cfg: &VerifyConfig, sampler: &mut ChannelSampler) -> Result<SuiteResult> {
    let ctxs = contexts(sampler, cfg.num_channels);
    let cases = ctxs
        .par_iter()
        .map(|ctx| {
            let noise = ctx.sigma2() + ctx.h().norm_sqr() * ctx.p2();
            let err = (f_rate(ctx, Complex64::new(0.0, 0.0))? - cap_c(ctx.alpha_p1() / noise)?).abs();
            Ok((err <= cfg.tolerance, err))
        })
        .collect::<Result<_>>()?;
    Ok(tally("treat_as_noise", cases))
}

fn containment(cfg: &VerifyConfig, sampler: &mut ChannelSampler) -> Result<SuiteResult> {
    let chans = sampler.any_channels(cfg.num_channels);
    let cases = chans
        .par_iter()
        .map(|ch| {
            let outer = outer_region(ch, cfg.alpha_grid)?;
            let inner = achievable_region(ch, cfg.alpha_grid, cfg.lambda_grid, 2.0)?;
            let slack = outer.containment_slack(&inner).max(0.0);
            Ok((slack <= cfg.tolerance, slack))
        })
        .collect::<Result<_>>()?;
    Ok(tally("containment", cases))
}

fn very_strong_agreement(cfg: &VerifyConfig, sampler: &mut ChannelSampler) -> Result<SuiteResult> {
    let chans = sampler.strong_channels(cfg.num_channels);
    let cases = chans
        .par_iter()
        .map(|ch| {
            let agree = very_strong_oracle(ch, 101)? == is_very_strong(ch);
            Ok((agree, if agree { 0.0 } else { 1.0 }))
        })
        .collect::<Result<_>>()?;
    let mut s = tally("very_strong_oracle", cases);
    s.worst = (s.total - s.passed) as f64;
    Ok(s)
}

fn pdc_agreement(cfg: &VerifyConfig, sampler: &mut ChannelSampler) -> Result<SuiteResult> {
    let chans = sampler.strong_channels(cfg.num_channels);
    let cases = chans
        .par_iter()
        .map(|ch| {
            let agree = pdc_oracle(ch, 1001)? == is_primary_decodes_cognitive(ch);
            Ok((agree, if agree { 0.0 } else { 1.0 }))
        })
        .collect::<Result<_>>()?;
    let mut s = tally("pdc_oracle", cases);
    s.worst = (s.total - s.passed) as f64;
    Ok(s)
}

fn gap_theorem(cfg: &VerifyConfig, sampler: &mut ChannelSampler) -> Result<SuiteResult> {
    let chans = sampler.strong_channels(cfg.num_channels);
    let cases = chans
        .par_iter()
        .map(|ch| {
            let excess = (additive_gap(ch)? - 1.0).max(0.0);
            Ok((excess <= cfg.tolerance && multiplicative_check(ch)?, excess))
        })
        .collect::<Result<_>>()?;
    Ok(tally("gap_theorem", cases))
}

fn root_residuals(cfg: &VerifyConfig, sampler: &mut ChannelSampler) -> Result<SuiteResult> {
    let chans: Vec<ChannelParams> =
        sampler.strong_channels(cfg.num_channels).into_iter().filter(|c| !is_very_strong(c)).collect();
    let cases = chans
        .par_iter()
        .map(|ch| {
            let mut worst = 0.0f64;
            let mut found = true;
            for k in 1..=10 {
                let alpha = k as f64 / 10.0;
                let roots = sum_rate_optimal_lambda(ch, alpha)?;
                found &= !roots.is_empty();
                let rx1 = DpcContext::cognitive(ch, alpha)?;
                let rx2 = DpcContext::primary(ch, alpha)?;
                for l in roots {
                    worst = worst.max((f_rate(&rx1, l)? - f_rate(&rx2, l)?).abs());
                }
            }
            Ok((found && worst <= cfg.tolerance, worst))
        })
        .collect::<Result<_>>()?;
    Ok(tally("sum_rate_roots", cases))
}

fn pdc_tightness(cfg: &VerifyConfig, sampler: &mut ChannelSampler) -> Result<SuiteResult> {
    // PDC channels are a minority of the sampling distribution; cap the draws.
    let mut chans = Vec::new();
    for _ in 0..cfg.num_channels * 50 {
        if chans.len() == cfg.num_channels {
            break;
        }
        let ch = sampler.strong_channel();
        if is_primary_decodes_cognitive(&ch) {
            chans.push(ch);
        }
    }
    let cases = chans
        .par_iter()
        .map(|ch| {
            let mut worst = 0.0f64;
            for k in 0..=10 {
                let alpha = k as f64 / 10.0;
                let d = if alpha * ch.p1() == 0.0 {
                    point_d(ch, &SchemeParams::new(alpha, Complex64::new(0.0, 0.0))?)?
                } else {
                    point_d(ch, &SchemeParams::new(alpha, costa_pair(ch, alpha)?.0)?)?
                };
                worst = worst.max(d.distance(&outer_corner(ch, alpha)?));
            }
            Ok((worst <= cfg.tolerance, worst))
        })
        .collect::<Result<_>>()?;
    Ok(tally("pdc_tightness", cases))
}

fn perturbation_consistency(cfg: &VerifyConfig, sampler: &mut ChannelSampler) -> Result<SuiteResult> {
    let draws: Vec<(ChannelParams, f64)> =
        (0..cfg.num_channels).map(|_| (sampler.strong_channel(), 1.0 - sampler.unit())).collect();
    let cases = draws
        .par_iter()
        .map(|&(ch, alpha)| {
            let (c1, c2) = costa_pair(&ch, alpha)?;
            let delta = c1 - c2;
            let dir = if delta.norm() > 0.0 { delta / delta.norm() } else { Complex64::new(1.0, 0.0) };
            let mut worst = 0.0f64;
            for t in [1e-6, 1e-4, 1e-2, 1e-1] {
                let eps = dir * t;
                let p = perturbation_rates(&ch, alpha, eps)?;
                let a = achievable_constraints(&ch, &SchemeParams::new(alpha, c1 + eps)?)?;
                worst = worst.max((p.r1 - a.raw.r1).abs()).max((p.r2 - a.raw.r2).abs());
            }
            Ok((worst <= cfg.tolerance, worst))
        })
        .collect::<Result<_>>()?;
    Ok(tally("perturbation_rates", cases))
}

type Suite = fn(&VerifyConfig, &mut ChannelSampler) -> Result<SuiteResult>;

const SUITES: [Suite; 9] = [
    costa_identity,
    treat_as_noise,
    containment,
    very_strong_agreement,
    pdc_agreement,
    gap_theorem,
    root_residuals,
    pdc_tightness,
    perturbation_consistency,
];

pub fn run(cfg: &VerifyConfig) -> Result<VerifyReport> {
    let suites = SUITES
        .iter()
        .enumerate()
        .map(|(i, suite)| suite(cfg, &mut ChannelSampler::new(cfg.seed.wrapping_add(i as u64))))
        .collect::<Result<_>>()?;
    Ok(VerifyReport { config: *cfg, suites })
}

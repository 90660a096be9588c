//! CSV schemas for every emitted data file, with matching readers.
//!
//! Numbers are written with Rust's shortest round-trip formatting, so a
//! write followed by a read reproduces the values bit for bit.

use std::io::{self, Read, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::gap::GapConditionMap;
use crate::model::{ChannelParams, RatePair};
use crate::optimizer::sum_rate_optimal_lambda;
use crate::outer::alpha_grid;
use crate::regime::RegimeMap;
use crate::region::RateRegion;
use crate::scheme::SweepPoint;

pub const REGION_HEADER: [&str; 2] = ["r1_bits", "r2_bits"];
pub const SWEEP_HEADER: [&str; 5] = ["lambda_re", "lambda_im", "r1_bits", "r2_bits", "sum_bits"];
pub const TRAJECTORY_HEADER: [&str; 4] = ["lambda_re", "lambda_im", "d_r1_bits", "d_r2_bits"];
pub const REGIME_HEADER: [&str; 7] = ["a", "b_mag", "weak", "very_strong", "pdc", "degraded", "gap_a"];
pub const GAP_MAP_HEADER: [&str; 4] = ["a", "b_mag", "P", "condition"];
pub const ROOTS_HEADER: [&str; 3] = ["alpha", "lambda_root_1", "lambda_root_2"];

fn bad_data(msg: impl Into<String>) -> io::Error {
    io::Error::new(io::ErrorKind::InvalidData, msg.into())
}

fn reader<R: Read>(r: R, header: &[&str]) -> io::Result<csv::Reader<R>> {
    let mut rdr = csv::Reader::from_reader(r);
    let got: Vec<String> = rdr.headers()?.iter().map(str::to_owned).collect();
    if got != header {
        return Err(bad_data(format!("expected header {}, got {}", header.join(","), got.join(","))));
    }
    Ok(rdr)
}

fn flag(b: bool) -> u8 {
    u8::from(b)
}

pub fn write_region<W: Write>(w: W, region: &RateRegion) -> io::Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(REGION_HEADER)?;
    for v in region.vertices() {
        wtr.serialize((v.r1(), v.r2()))?;
    }
    wtr.flush()
}

pub fn read_region<R: Read>(r: R) -> io::Result<Vec<RatePair>> {
    let mut rdr = reader(r, &REGION_HEADER)?;
    rdr.deserialize::<(f64, f64)>()
        .map(|row| {
            let (r1, r2) = row?;
            RatePair::new(r1, r2).map_err(|e| bad_data(e.to_string()))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub lambda_re: f64,
    pub lambda_im: f64,
    pub r1_bits: f64,
    pub r2_bits: f64,
    pub sum_bits: f64,
}

impl From<&SweepPoint> for SweepRow {
    fn from(p: &SweepPoint) -> Self {
        SweepRow {
            lambda_re: p.lambda.re,
            lambda_im: p.lambda.im,
            r1_bits: p.rates.r1,
            r2_bits: p.rates.r2,
            sum_bits: p.rates.sum,
        }
    }
}

/// Unclamped `R1`, `R2` and sum caps along a `lambda` sweep.
pub fn write_sweep<W: Write>(w: W, points: &[SweepPoint]) -> io::Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    for p in points {
        wtr.serialize(SweepRow::from(p))?;
    }
    if points.is_empty() {
        wtr.write_record(SWEEP_HEADER)?;
    }
    wtr.flush()
}

pub fn read_sweep<R: Read>(r: R) -> io::Result<Vec<SweepRow>> {
    reader(r, &SWEEP_HEADER)?.deserialize().map(|row| row.map_err(io::Error::from)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRow {
    pub lambda_re: f64,
    pub lambda_im: f64,
    pub d_r1_bits: f64,
    pub d_r2_bits: f64,
}

/// The corner `D(lambda)` of each swept pentagon.
pub fn write_trajectory<W: Write>(w: W, points: &[SweepPoint]) -> io::Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(TRAJECTORY_HEADER)?;
    for p in points {
        wtr.serialize((p.lambda.re, p.lambda.im, p.d.r1(), p.d.r2()))?;
    }
    wtr.flush()
}

pub fn read_trajectory<R: Read>(r: R) -> io::Result<Vec<TrajectoryRow>> {
    reader(r, &TRAJECTORY_HEADER)?.deserialize().map(|row| row.map_err(io::Error::from)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegimeRow {
    pub weak: u8,
    pub very_strong: u8,
    pub pdc: u8,
    pub degraded: u8,
    pub gap_a: u8,
}

pub fn write_regime_map<W: Write>(w: W, map: &RegimeMap) -> io::Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(REGIME_HEADER)?;
    for (a, b, l) in map.iter() {
        wtr.serialize((
            a,
            b,
            flag(l.weak),
            flag(l.very_strong),
            flag(l.primary_decodes_cognitive),
            flag(l.degraded),
            flag(l.gap_condition_a),
        ))?;
    }
    wtr.flush()
}

/// `(a, |b|, flags)` rows in file order.
pub fn read_regime_map<R: Read>(r: R) -> io::Result<Vec<(f64, f64, RegimeRow)>> {
    reader(r, &REGIME_HEADER)?
        .deserialize::<(f64, f64, u8, u8, u8, u8, u8)>()
        .map(|row| {
            let (a, b, weak, very_strong, pdc, degraded, gap_a) = row?;
            if [weak, very_strong, pdc, degraded, gap_a].iter().any(|&f| f > 1) {
                return Err(bad_data("regime flags must be 0 or 1"));
            }
            Ok((a, b, RegimeRow { weak, very_strong, pdc, degraded, gap_a }))
        })
        .collect()
}

pub fn write_gap_map<W: Write>(w: W, map: &GapConditionMap) -> io::Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(GAP_MAP_HEADER)?;
    for (a, b, c) in map.iter() {
        wtr.serialize((a, b, map.p, flag(c)))?;
    }
    wtr.flush()
}

pub fn read_gap_map<R: Read>(r: R) -> io::Result<Vec<(f64, f64, f64, bool)>> {
    reader(r, &GAP_MAP_HEADER)?
        .deserialize::<(f64, f64, f64, u8)>()
        .map(|row| {
            let (a, b, p, c) = row?;
            match c {
                0 | 1 => Ok((a, b, p, c == 1)),
                _ => Err(bad_data("condition must be 0 or 1")),
            }
        })
        .collect()
}

/// Real sum-rate-optimal roots for each `alpha` in `(0, 1]` on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct RootRow {
    pub alpha: f64,
    pub roots: Vec<f64>,
}

pub fn root_table(ch: &ChannelParams, alpha_grid_size: usize) -> Result<Vec<RootRow>> {
    alpha_grid(alpha_grid_size)?
        .into_iter()
        .filter(|&a| a > 0.0)
        .map(|alpha| {
            let roots = sum_rate_optimal_lambda(ch, alpha)?.iter().map(|z: &Complex64| z.re).collect();
            Ok(RootRow { alpha, roots })
        })
        .collect()
}

/// One row per `alpha`; missing roots are left blank.
pub fn write_roots<W: Write>(w: W, rows: &[RootRow]) -> io::Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(ROOTS_HEADER)?;
    for row in rows {
        let cell = |i: usize| row.roots.get(i).map(|x| x.to_string()).unwrap_or_default();
        wtr.write_record([row.alpha.to_string(), cell(0), cell(1)])?;
    }
    wtr.flush()
}

pub fn read_roots<R: Read>(r: R) -> io::Result<Vec<RootRow>> {
    reader(r, &ROOTS_HEADER)?
        .deserialize::<(f64, Option<f64>, Option<f64>)>()
        .map(|row| {
            let (alpha, r1, r2) = row?;
            Ok(RootRow { alpha, roots: r1.into_iter().chain(r2).collect() })
        })
        .collect()
}

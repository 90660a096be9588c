//! Command-line front end: scenario configs, data export and the figure
//! fixtures.
//!
//! Exit codes: 0 success, 2 configuration error, 3 I/O error, 4 failed
//! verification.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::Error;
use crate::export;
use crate::gap::{self, corner_points, gap_certificate, gap_condition_region, CornerPoints};
use crate::grid::Interval;
use crate::model::{ChannelParams, RatePair};
use crate::outer::{outer_corner, outer_envelope_strong, outer_region, FIGURE_ALPHA_GRID};
use crate::regime::{self, classify, q_alpha, regime_map, very_strong_lhs};
use crate::region::RateRegion;
use crate::scheme::{achievable_region, achievable_region_with, costa_pair, lambda_sweep, LambdaPolicy, SweepPoint};
use crate::svg;
use crate::verify::{self, VerifyConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("I/O error: {0}")]
    Io(String),
    #[error("verification failed")]
    VerifyFailed,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Io(_) => 3,
            CliError::VerifyFailed => 4,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Grids {
    pub alpha: usize,
    pub lambda: usize,
    pub lambda_span: f64,
    pub map_resolution: usize,
}

impl Default for Grids {
    fn default() -> Self {
        Self { alpha: 501, lambda: 201, lambda_span: 2.0, map_resolution: 401 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Outputs {
    pub format: Format,
    pub path: PathBuf,
}

impl Default for Outputs {
    fn default() -> Self {
        Self { format: Format::Csv, path: PathBuf::from(".") }
    }
}

/// Ranges of real `a` and `|b|` covered by maps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MapRanges {
    pub a: Interval,
    pub b: Interval,
}

impl Default for MapRanges {
    fn default() -> Self {
        Self { a: Interval { lo: -5.0, hi: 5.0 }, b: Interval { lo: 0.0, hi: 5.0 } }
    }
}

/// A scenario file. Only `channel` is required.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub channel: ChannelParams,
    #[serde(default)]
    pub grids: Grids,
    #[serde(default)]
    pub outputs: Outputs,
    /// `alpha` used by `lambda-sweep`.
    #[serde(default = "default_sweep_alpha")]
    pub sweep_alpha: f64,
    #[serde(default)]
    pub map: MapRanges,
}

fn default_sweep_alpha() -> f64 {
    0.5
}

impl ScenarioConfig {
    pub fn validate(&self) -> CliResult<()> {
        validate_settings(&self.grids, self.sweep_alpha, &self.map)
    }
}

fn validate_settings(g: &Grids, sweep_alpha: f64, map: &MapRanges) -> CliResult<()> {
    for (name, n) in [("alpha", g.alpha), ("lambda", g.lambda), ("map_resolution", g.map_resolution)] {
        if n < 2 {
            return Err(CliError::Config(format!("grids.{name} must be >= 2, got {n}")));
        }
    }
    if !(g.lambda_span.is_finite() && g.lambda_span >= 1.0) {
        return Err(CliError::Config(format!("grids.lambda_span must be >= 1, got {}", g.lambda_span)));
    }
    if !(0.0..=1.0).contains(&sweep_alpha) {
        return Err(CliError::Config(format!("sweep_alpha must lie in [0, 1], got {sweep_alpha}")));
    }
    for r in [map.a, map.b] {
        Interval::new(r.lo, r.hi)?;
    }
    if map.b.lo < 0.0 {
        return Err(CliError::Config("map.b must be nonnegative".into()));
    }
    Ok(())
}

#[derive(Debug, Parser)]
#[command(name = "gcifc", version, about = "Capacity bounds for the Gaussian cognitive interference channel")]
pub struct Cli {
    #[command(flatten)]
    pub opts: Opts,
    #[command(subcommand)]
    pub command: Command,
}

/// Flags shared by every command; each overrides the matching config field.
#[derive(Debug, Clone, Default, Args)]
pub struct Opts {
    /// Scenario file (JSON).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub alpha_grid: Option<usize>,
    #[arg(long, global = true)]
    pub lambda_grid: Option<usize>,
    #[arg(long, global = true)]
    pub lambda_span: Option<f64>,
    /// Grid points per axis for maps.
    #[arg(long, global = true)]
    pub resolution: Option<usize>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub a_re: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub a_im: Option<f64>,
    #[arg(long, global = true)]
    pub b_mag: Option<f64>,
    #[arg(long, global = true)]
    pub p1: Option<f64>,
    #[arg(long, global = true)]
    pub p2: Option<f64>,
    /// Power split used by `lambda-sweep`.
    #[arg(long, global = true)]
    pub alpha: Option<f64>,
    #[arg(long, global = true)]
    pub num_channels: Option<usize>,
    /// Pass threshold for `verify`; negative values force failures.
    #[arg(long, global = true, hide = true, allow_hyphen_values = true)]
    pub rate_tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum MapKind {
    /// Regime labels over `(a, |b|)` at the channel's powers.
    #[default]
    Regime,
    /// The equal-power gap condition for each `--powers` value.
    Gap,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the regime labels and the raw condition values.
    Classify,
    /// Write outer and inner region polygons and the corner points.
    Region,
    /// Write a regime or gap-condition map.
    Map {
        #[arg(long, value_enum, default_value_t = MapKind::Regime)]
        kind: MapKind,
        #[arg(long, value_delimiter = ',', default_values_t = [1.0, 10.0, 100.0])]
        powers: Vec<f64>,
    },
    /// Evaluate the scheme along a lambda sweep at fixed alpha.
    LambdaSweep,
    /// Constant-gap certificate and corner points.
    Gap,
    /// Run the seeded oracle and invariant suites.
    Verify,
    /// Write the data behind every figure fixture.
    Figures,
}

/// Config file merged with flag overrides. Channel fields stay optional
/// until a command needs them.
#[derive(Debug, Clone)]
struct Scenario {
    a_re: f64,
    a_im: f64,
    b_mag: Option<f64>,
    p1: Option<f64>,
    p2: Option<f64>,
    grids: Grids,
    format: Format,
    out: PathBuf,
    sweep_alpha: f64,
    map: MapRanges,
}

impl Scenario {
    fn resolve(opts: &Opts) -> CliResult<Self> {
        let file = match &opts.config {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
                let cfg: ScenarioConfig =
                    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
                Some(cfg)
            }
            None => None,
        };
        let ch = file.as_ref().map(|f| f.channel);
        let mut grids = file.as_ref().map(|f| f.grids).unwrap_or_default();
        grids.alpha = opts.alpha_grid.unwrap_or(grids.alpha);
        grids.lambda = opts.lambda_grid.unwrap_or(grids.lambda);
        grids.lambda_span = opts.lambda_span.unwrap_or(grids.lambda_span);
        grids.map_resolution = opts.resolution.unwrap_or(grids.map_resolution);
        let outputs = file.as_ref().map(|f| f.outputs.clone()).unwrap_or_default();
        let s = Scenario {
            a_re: opts.a_re.or(ch.map(|c| c.a().re)).unwrap_or(0.0),
            a_im: opts.a_im.or(ch.map(|c| c.a().im)).unwrap_or(0.0),
            b_mag: opts.b_mag.or(ch.map(|c| c.b_mag())),
            p1: opts.p1.or(ch.map(|c| c.p1())),
            p2: opts.p2.or(ch.map(|c| c.p2())),
            grids,
            format: opts.format.unwrap_or(outputs.format),
            out: opts.out.clone().unwrap_or(outputs.path),
            sweep_alpha: opts.alpha.or(file.as_ref().map(|f| f.sweep_alpha)).unwrap_or(default_sweep_alpha()),
            map: file.as_ref().map(|f| f.map).unwrap_or_default(),
        };
        validate_settings(&s.grids, s.sweep_alpha, &s.map)?;
        Ok(s)
    }

    fn powers(&self) -> CliResult<(f64, f64)> {
        match (self.p1, self.p2) {
            (Some(p1), Some(p2)) => Ok((p1, p2)),
            _ => Err(CliError::Config("no powers given: pass --config or --p1 and --p2".into())),
        }
    }

    fn channel(&self) -> CliResult<ChannelParams> {
        let (p1, p2) = self.powers()?;
        let b = self.b_mag.ok_or_else(|| CliError::Config("no |b| given: pass --config or --b-mag".into()))?;
        Ok(ChannelParams::new(Complex64::new(self.a_re, self.a_im), b, p1, p2)?)
    }
}

fn create(dir: &Path, name: &str) -> CliResult<BufWriter<File>> {
    fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    let f = File::create(&path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(BufWriter::new(f))
}

fn write_with(dir: &Path, name: &str, f: impl FnOnce(&mut BufWriter<File>) -> io::Result<()>) -> CliResult<()> {
    let mut w = create(dir, name)?;
    f(&mut w).and_then(|_| w.flush()).map_err(|e| CliError::Io(format!("{}: {e}", dir.join(name).display())))
}

fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> CliResult<()> {
    write_with(dir, name, |w| {
        serde_json::to_writer_pretty(&mut *w, value)?;
        writeln!(w)
    })
}

fn write_text(dir: &Path, name: &str, text: &str) -> CliResult<()> {
    write_with(dir, name, |w| w.write_all(text.as_bytes()))
}

/// Writes a region as `<stem>.csv` or `<stem>.json`.
fn write_region_file(dir: &Path, stem: &str, region: &RateRegion, format: Format) -> CliResult<()> {
    match format {
        Format::Json => write_json(dir, &format!("{stem}.json"), region),
        Format::Csv | Format::Svg => write_with(dir, &format!("{stem}.csv"), |w| export::write_region(w, region)),
    }
}

fn pair_json(p: RatePair) -> serde_json::Value {
    json!({ "r1": p.r1(), "r2": p.r2() })
}

fn complex_json(z: Complex64) -> serde_json::Value {
    json!([z.re, z.im])
}

fn corners_if_defined(ch: &ChannelParams) -> Option<CornerPoints> {
    corner_points(ch).ok()
}

/// Regions written by `region`, in file order.
pub const REGION_FILES: [&str; 4] = ["outer_region", "inner_any_dpc", "inner_perfect_dpc", "inner_sum_rate_optimal"];

pub struct RegionBundle {
    pub outer: RateRegion,
    pub any_dpc: RateRegion,
    pub perfect_dpc: RateRegion,
    pub sum_rate_optimal: RateRegion,
    pub corners: Option<CornerPoints>,
}

pub fn compute_regions(ch: &ChannelParams, grids: &Grids) -> crate::error::Result<RegionBundle> {
    Ok(RegionBundle {
        outer: outer_region(ch, grids.alpha)?,
        any_dpc: achievable_region(ch, grids.alpha, grids.lambda, grids.lambda_span)?,
        perfect_dpc: achievable_region_with(ch, grids.alpha, LambdaPolicy::PerfectDpc)?,
        sum_rate_optimal: achievable_region_with(ch, grids.alpha, LambdaPolicy::SumRateOptimal)?,
        corners: corners_if_defined(ch),
    })
}

fn write_regions(
    dir: &Path,
    ch: &ChannelParams,
    b: &RegionBundle,
    format: Format,
    out: &mut dyn Write,
) -> CliResult<()> {
    let layers = [&b.outer, &b.any_dpc, &b.perfect_dpc, &b.sum_rate_optimal];
    for (stem, region) in REGION_FILES.iter().zip(layers) {
        write_region_file(dir, stem, region, format)?;
        writeln!(
            out,
            "{stem}: {} vertices, max R1 {:.6}, max R2 {:.6}, max sum {:.6}",
            region.vertices().len(),
            region.max_r1(),
            region.max_r2(),
            region.max_sum()
        )?;
    }
    let envelope = outer_envelope_strong(ch).ok();
    let corners = json!({
        "A": b.corners.map(|k| pair_json(k.a)),
        "B": b.corners.map(|k| pair_json(k.b)),
        "C": b.corners.map(|k| pair_json(k.c)),
        "envelope": envelope.map(|e| json!({ "r1_max": e.r1_max(), "sum_max": e.sum_max() })),
    });
    write_json(dir, "corners.json", &corners)?;
    if format == Format::Svg {
        let markers: Vec<(&str, RatePair)> = match b.corners {
            Some(k) => vec![("A", k.a), ("B", k.b), ("C", k.c)],
            None => Vec::new(),
        };
        let plot = svg::regions(
            "rate regions",
            &[
                ("outer bound", &b.outer),
                ("any DPC", &b.any_dpc),
                ("perfect DPC", &b.perfect_dpc),
                ("sum rate optimal", &b.sum_rate_optimal),
            ],
            &markers,
        );
        write_text(dir, "regions.svg", &plot)?;
    }
    Ok(())
}

fn cmd_classify(s: &Scenario, out: &mut dyn Write) -> CliResult<()> {
    let ch = s.channel()?;
    let l = classify(&ch);
    let q0 = q_alpha(&ch, 0.0)?;
    let q1 = q_alpha(&ch, 1.0)?;
    let vs = very_strong_lhs(&ch);
    if s.format == Format::Json {
        let v = json!({
            "flags": l.flag_names(),
            "label": l,
            "q0": q0,
            "q1": q1,
            "very_strong_lhs": vs,
        });
        writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("plain values"))?;
        return Ok(());
    }
    let flags = l.flag_names();
    writeln!(out, "flags: {}", if flags.is_empty() { "none".to_string() } else { flags.join(" ") })?;
    for (name, v) in [
        ("weak", l.weak),
        ("very_strong", l.very_strong),
        ("primary_decodes_cognitive", l.primary_decodes_cognitive),
        ("degraded", l.degraded),
        ("gap_condition_a", l.gap_condition_a),
    ] {
        writeln!(out, "{name}: {}", u8::from(v))?;
    }
    writeln!(out, "q0: {q0}")?;
    writeln!(out, "q1: {q1}")?;
    writeln!(out, "very_strong_lhs: {vs}")?;
    Ok(())
}

fn cmd_region(s: &Scenario, out: &mut dyn Write) -> CliResult<()> {
    let ch = s.channel()?;
    let bundle = compute_regions(&ch, &s.grids)?;
    write_regions(&s.out, &ch, &bundle, s.format, out)
}

fn write_regime_map(dir: &Path, p1: f64, p2: f64, s: &Scenario, out: &mut dyn Write) -> CliResult<()> {
    let m = regime_map(p1, p2, s.map.a, s.map.b, s.grids.map_resolution)?;
    match s.format {
        Format::Json => write_json(dir, "regime_map.json", &m)?,
        _ => write_with(dir, "regime_map.csv", |w| export::write_regime_map(w, &m))?,
    }
    if s.format == Format::Svg {
        write_text(dir, "regime_map.svg", &svg::regime_map(&format!("regimes, P1 = {p1}, P2 = {p2}"), &m))?;
    }
    let count = |f: fn(&regime::RegimeLabel) -> bool| m.cells.iter().filter(|l| f(l)).count();
    writeln!(
        out,
        "regime map {0}x{0}: weak {1}, very_strong {2}, pdc {3}, degraded {4}, gap_a {5}",
        s.grids.map_resolution,
        count(|l| l.weak),
        count(|l| l.very_strong),
        count(|l| l.primary_decodes_cognitive),
        count(|l| l.degraded),
        count(|l| l.gap_condition_a),
    )?;
    Ok(())
}

fn write_gap_maps(dir: &Path, powers: &[f64], s: &Scenario, out: &mut dyn Write) -> CliResult<()> {
    for &p in powers {
        let m = gap_condition_region(p, s.map.a, s.map.b, s.grids.map_resolution)?;
        let stem = format!("gap_condition_P{p}");
        match s.format {
            Format::Json => write_json(dir, &format!("{stem}.json"), &m)?,
            _ => write_with(dir, &format!("{stem}.csv"), |w| export::write_gap_map(w, &m))?,
        }
        if s.format == Format::Svg {
            write_text(dir, &format!("{stem}.svg"), &svg::gap_map(&format!("gap condition, P = {p}"), &m))?;
        }
        writeln!(out, "gap condition P = {p}: {:.4} of cells", m.fraction_true())?;
    }
    Ok(())
}

fn cmd_map(s: &Scenario, kind: MapKind, powers: &[f64], out: &mut dyn Write) -> CliResult<()> {
    match kind {
        MapKind::Regime => {
            let (p1, p2) = s.powers()?;
            write_regime_map(&s.out, p1, p2, s, out)
        }
        MapKind::Gap => write_gap_maps(&s.out, powers, s, out),
    }
}

/// Summary of a sweep: the Costa points, the outer corner at the same
/// `alpha` and the swept corner `D` closest to it.
pub fn sweep_summary(ch: &ChannelParams, alpha: f64, pts: &[SweepPoint]) -> crate::error::Result<serde_json::Value> {
    let corner = outer_corner(ch, alpha)?;
    let closest = pts
        .iter()
        .map(|p| (p, p.d.distance(&corner)))
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .map(|(p, d)| json!({ "lambda": complex_json(p.lambda), "d": pair_json(p.d), "distance": d }));
    let r1_best = pts.iter().max_by(|x, y| x.rates.r1.total_cmp(&y.rates.r1)).map(|p| complex_json(p.lambda));
    let r2_worst = pts.iter().min_by(|x, y| x.rates.r2.total_cmp(&y.rates.r2)).map(|p| complex_json(p.lambda));
    let costa = if alpha * ch.p1() > 0.0 { Some(costa_pair(ch, alpha)?) } else { None };
    Ok(json!({
        "alpha": alpha,
        "lambda_costa1": costa.map(|c| complex_json(c.0)),
        "lambda_costa2": costa.map(|c| complex_json(c.1)),
        "outer_corner": pair_json(corner),
        "closest_to_outer_corner": closest,
        "r1_argmax_lambda": r1_best,
        "r2_argmin_lambda": r2_worst,
    }))
}

fn write_sweep(
    dir: &Path,
    ch: &ChannelParams,
    alpha: f64,
    grids: &Grids,
    format: Format,
    out: &mut dyn Write,
) -> CliResult<()> {
    let pts = lambda_sweep(ch, alpha, grids.lambda, grids.lambda_span)?;
    match format {
        Format::Json => {
            let rows: Vec<export::SweepRow> = pts.iter().map(export::SweepRow::from).collect();
            write_json(dir, "lambda_sweep.json", &rows)?;
        }
        _ => {
            write_with(dir, "lambda_sweep.csv", |w| export::write_sweep(w, &pts))?;
            write_with(dir, "d_trajectory.csv", |w| export::write_trajectory(w, &pts))?;
        }
    }
    let summary = sweep_summary(ch, alpha, &pts)?;
    write_json(dir, "sweep_summary.json", &summary)?;
    if ch.b_mag() > 1.0 && ch.p1() > 0.0 && !regime::is_very_strong(ch) {
        let rows = export::root_table(ch, grids.alpha)?;
        write_with(dir, "sum_rate_roots.csv", |w| export::write_roots(w, &rows))?;
    }
    if format == Format::Svg {
        let r1: Vec<(f64, f64)> = pts.iter().map(|p| (p.lambda.re, p.rates.r1)).collect();
        let r2: Vec<(f64, f64)> = pts.iter().map(|p| (p.lambda.re, p.rates.r2)).collect();
        write_text(
            dir,
            "lambda_sweep.svg",
            &svg::lines(&format!("rate caps, alpha = {alpha}"), "Re lambda", "bits", &[("R1 cap", r1), ("R2 cap", r2)]),
        )?;
        let d: Vec<(f64, f64)> = pts.iter().map(|p| (p.d.r1(), p.d.r2())).collect();
        let c = outer_corner(ch, alpha)?;
        write_text(
            dir,
            "d_trajectory.svg",
            &svg::lines(
                &format!("D(lambda), alpha = {alpha}"),
                "R1 [bits]",
                "R2 [bits]",
                &[("D(lambda)", d), ("outer corner", vec![(c.r1(), c.r2())])],
            ),
        )?;
    }
    writeln!(out, "lambda sweep at alpha = {alpha}: {} points", pts.len())?;
    if let Some(c) = summary.get("closest_to_outer_corner").filter(|v| !v.is_null()) {
        writeln!(out, "closest D to outer corner: lambda = {}, distance = {}", c["lambda"], c["distance"])?;
    }
    Ok(())
}

fn cmd_lambda_sweep(s: &Scenario, out: &mut dyn Write) -> CliResult<()> {
    let ch = s.channel()?;
    write_sweep(&s.out, &ch, s.sweep_alpha, &s.grids, s.format, out)
}

fn cmd_gap(s: &Scenario, out: &mut dyn Write) -> CliResult<()> {
    let ch = s.channel()?;
    let cert = gap_certificate(&ch);
    let strong = ch.b_mag() > 1.0;
    let v = json!({
        "applicable": cert.applicable,
        "additive_ok": cert.additive_ok,
        "multiplicative_ok": cert.multiplicative_ok,
        "condition_3a": gap::condition_3a(&ch),
        "additive_gap": if strong { Some(gap::additive_gap(&ch)?) } else { None },
        "multiplicative_check": if strong { Some(gap::multiplicative_check(&ch)?) } else { None },
        "corners": corners_if_defined(&ch),
    });
    write_json(&s.out, "gap.json", &v)?;
    writeln!(out, "applicable: {}", u8::from(cert.applicable))?;
    writeln!(out, "additive_ok: {}", u8::from(cert.additive_ok))?;
    writeln!(out, "multiplicative_ok: {}", u8::from(cert.multiplicative_ok))?;
    if strong {
        writeln!(out, "additive_gap: {}", gap::additive_gap(&ch)?)?;
    }
    Ok(())
}

fn cmd_verify(opts: &Opts, out: &mut dyn Write) -> CliResult<()> {
    let d = VerifyConfig::default();
    let cfg = VerifyConfig {
        seed: opts.seed.unwrap_or(d.seed),
        num_channels: opts.num_channels.unwrap_or(d.num_channels),
        alpha_grid: opts.alpha_grid.unwrap_or(d.alpha_grid),
        lambda_grid: opts.lambda_grid.unwrap_or(d.lambda_grid),
        tolerance: opts.rate_tol.unwrap_or(d.tolerance),
    };
    let report = verify::run(&cfg)?;
    let text = report.render();
    out.write_all(text.as_bytes())?;
    if let Some(dir) = &opts.out {
        write_text(dir, "verify_report.txt", &text)?;
    }
    if report.all_passed() {
        Ok(())
    } else {
        Err(CliError::VerifyFailed)
    }
}

/// Channels used by the figure fixtures.
pub mod fixtures {
    use crate::model::ChannelParams;

    /// `P1 = P2 = 6`, `b = sqrt(2)`, `a = sqrt(0.3)`.
    pub fn lambda_role() -> ChannelParams {
        ChannelParams::real(0.3f64.sqrt(), 2f64.sqrt(), 6.0, 6.0).expect("valid")
    }

    /// `P1 = P2 = 10`, `a = -1`, `|b| = 2`: inside the primary-decodes-cognitive regime.
    pub fn gap_example() -> ChannelParams {
        ChannelParams::real(-1.0, 2.0, 10.0, 10.0).expect("valid")
    }

    /// `P1 = P2 = 6`, `b = 3`, `a = 2`.
    pub fn sum_rate_example() -> ChannelParams {
        ChannelParams::real(2.0, 3.0, 6.0, 6.0).expect("valid")
    }

    pub const MAP_POWER: f64 = 10.0;
    pub const GAP_POWERS: [f64; 3] = [1.0, 10.0, 100.0];
    pub const SWEEP_ALPHA: f64 = 0.5;
}

fn cmd_figures(s: &Scenario, opts: &Opts, out: &mut dyn Write) -> CliResult<()> {
    let root =
        opts.out.clone().unwrap_or_else(
            || {
                if s.out == Path::new(".") {
                    PathBuf::from("figures")
                } else {
                    s.out.clone()
                }
            },
        );
    let grids = Grids {
        alpha: opts.alpha_grid.unwrap_or(FIGURE_ALPHA_GRID),
        lambda: opts.lambda_grid.unwrap_or(s.grids.lambda),
        lambda_span: opts.lambda_span.unwrap_or(s.grids.lambda_span),
        map_resolution: opts.resolution.unwrap_or(s.grids.map_resolution),
    };
    let fig = Scenario { grids, format: Format::Svg, ..s.clone() };
    let p = fixtures::MAP_POWER;

    writeln!(out, "[regime_map] regimes at P1 = P2 = {p}")?;
    write_regime_map(&root.join("regime_map"), p, p, &fig, out)?;

    writeln!(out, "[lambda_sweep] rate caps against lambda")?;
    let ch = fixtures::lambda_role();
    write_sweep(&root.join("lambda_sweep"), &ch, fixtures::SWEEP_ALPHA, &grids, Format::Svg, out)?;

    writeln!(out, "[constant_gap] outer bound, envelope and time sharing between A and C")?;
    let ch = fixtures::gap_example();
    let dir = root.join("constant_gap");
    let outer = outer_region(&ch, grids.alpha)?;
    let k = corner_points(&ch)?;
    let sharing = RateRegion::hull_of([k.a, k.c, RatePair::new(k.c.r1(), 0.0)?]);
    let env = outer_envelope_strong(&ch)?;
    let envelope = RateRegion::hull_of([k.a, k.b, RatePair::new(env.r1_max(), 0.0)?]);
    write_region_file(&dir, "outer_region", &outer, Format::Csv)?;
    write_region_file(&dir, "outer_envelope", &envelope, Format::Csv)?;
    write_region_file(&dir, "inner_time_sharing", &sharing, Format::Csv)?;
    write_json(&dir, "corners.json", &k)?;
    write_text(
        &dir,
        "regions.svg",
        &svg::regions(
            "outer bound and constant-gap inner bound",
            &[("outer bound", &outer), ("envelope", &envelope), ("A-C time sharing", &sharing)],
            &[("A", k.a), ("B", k.b), ("C", k.c)],
        ),
    )?;
    writeln!(out, "additive gap: {}", gap::additive_gap(&ch)?)?;

    writeln!(out, "[gap_condition] equal-power gap condition")?;
    write_gap_maps(&root.join("gap_condition"), &fixtures::GAP_POWERS, &fig, out)?;

    writeln!(out, "[corner_trajectory] D(lambda) against the outer corner")?;
    let ch = fixtures::lambda_role();
    let dir = root.join("corner_trajectory");
    write_sweep(&dir, &ch, fixtures::SWEEP_ALPHA, &grids, Format::Svg, out)?;
    write_region_file(&dir, "outer_region", &outer_region(&ch, grids.alpha)?, Format::Csv)?;
    let env = outer_envelope_strong(&ch)?;
    write_json(&dir, "outer_envelope.json", &json!({ "r1_max": env.r1_max(), "sum_max": env.sum_max() }))?;

    writeln!(out, "[lambda_policies] perfect DPC, any DPC and sum rate optimal regions")?;
    let ch = fixtures::sum_rate_example();
    let bundle = compute_regions(&ch, &grids)?;
    write_regions(&root.join("lambda_policies"), &ch, &bundle, Format::Svg, out)?;
    let roots = export::root_table(&ch, grids.alpha)?;
    write_with(&root.join("lambda_policies"), "sum_rate_roots.csv", |w| export::write_roots(w, &roots))?;
    Ok(())
}

/// Runs a parsed command, writing human-readable output to `out`.
pub fn run(cli: &Cli, out: &mut dyn Write) -> CliResult<()> {
    if let Command::Verify = cli.command {
        return cmd_verify(&cli.opts, out);
    }
    let s = Scenario::resolve(&cli.opts)?;
    match &cli.command {
        Command::Classify => cmd_classify(&s, out),
        Command::Region => cmd_region(&s, out),
        Command::Map { kind, powers } => cmd_map(&s, *kind, powers, out),
        Command::LambdaSweep => cmd_lambda_sweep(&s, out),
        Command::Gap => cmd_gap(&s, out),
        Command::Figures => cmd_figures(&s, &cli.opts, out),
        Command::Verify => unreachable!(),
    }
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                return 2;
            }
            let _ = write!(out, "{e}");
            return 0;
        }
    };
    match run(&cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "gcifc: {e}");
            e.exit_code()
        }
    }
}

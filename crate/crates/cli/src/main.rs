//! `ssq`: batch front end for scattering, soliton, evolution, asymptotic and comparison runs.
//!
//! Every command that writes data also writes `<output>.manifest.json` with the resolved
//! configuration, input hashes and output list. Exit codes: 0 success, 1 I/O or input
//! error, 2 partial grid failure, 3 singular residue system, 4 integrator instability,
//! 5 approximate conjugation factor under `--strict`.

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64 as C;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};
use ssq_core::asymptotics::{classify, AsymptoticModel, Region, DEFAULT_P, DEFAULT_Y_CUT};
use ssq_core::conjugation::{delta_registry, DEFAULT_DELTA};
use ssq_core::direct_scattering::{
    norming_registry, scatter, uniform_k_grid, JostConfig, SearchBox, DEFAULT_NORMING,
};
use ssq_core::io::{fmt_f64, read_profile, read_scattering, write_csv, write_json, write_profile_csv, write_scattering};
use ssq_core::painleve2::{solve_painleve_with, PainleveConfig};
use ssq_core::pde_oracle::{evolve_snapshots, EvolutionConfig};
use ssq_core::soliton_engine::{exponent_registry, soliton_field_with, ConeSpec, DEFAULT_EXPONENT_POLICY};
use ssq_core::stats::fit_loglog;
use ssq_core::{ComplexField, Error};
use std::path::{Path, PathBuf};
use std::time::Instant;

#[derive(Parser)]
#[command(name = "ssq", version, about = "Scattering, soliton and long-time asymptotics toolkit")]
struct Cli {
    /// Directory for relative output paths.
    #[arg(long, global = true, default_value = ".")]
    out_dir: PathBuf,
    /// JSON object of settings; flags take precedence over its keys.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Recorded in the manifest for reproducibility.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Turn warnings (non-decaying edges, approximate δ) into errors.
    #[arg(long, global = true)]
    strict: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reflection coefficient, discrete spectrum and norming constants of a profile.
    Scatter(ScatterArgs),
    /// Reflectionless field of given scattering data at time t.
    Soliton(SolitonArgs),
    /// Evolve a profile with the split-step integrator.
    Evolve(EvolveArgs),
    /// Region-wise long-time asymptotics at points or on a lattice.
    Asymptote(AsymptoteArgs),
    /// Norm differences between fields and decay-exponent fits.
    Compare(CompareArgs),
}

#[derive(Args)]
struct ScatterArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    kmin: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    kmax: Option<f64>,
    #[arg(long)]
    nk: Option<usize>,
    /// Pole search rectangle `re_min,re_max,im_min,im_max`.
    #[arg(long, allow_hyphen_values = true)]
    search: Option<String>,
    /// Norming-constant method.
    #[arg(long)]
    norming: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SolitonArgs {
    /// Scattering data JSON; reflection samples are ignored.
    #[arg(long)]
    scattering: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    xmin: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    xmax: Option<f64>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    t: Option<f64>,
    /// Periodic grid `xmin + i (xmax - xmin)/n`, matching `evolve`.
    #[arg(long)]
    periodic: bool,
    /// Exponent policy of the residue system.
    #[arg(long)]
    exponent_policy: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EvolveArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    t_end: Option<f64>,
    #[arg(long)]
    dt: Option<f64>,
    /// Extra output times before `t_end`, comma separated.
    #[arg(long, value_delimiter = ',')]
    times: Vec<f64>,
    #[arg(long)]
    linear_only: bool,
    #[arg(long)]
    dealias: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AsymptoteArgs {
    /// Scattering data JSON written by `scatter`.
    #[arg(long)]
    scattering: PathBuf,
    /// Evaluation point `x,t`; repeatable.
    #[arg(long, allow_hyphen_values = true)]
    point: Vec<String>,
    /// Lattice `xmin:xmax:nx,tmin:tmax:nt`.
    #[arg(long, allow_hyphen_values = true)]
    lattice: Option<String>,
    /// Cone `v2,v1` used for every point; by default each point gets `ξ ± w|ξ|`.
    #[arg(long, allow_hyphen_values = true)]
    cone: Option<String>,
    /// Relative half-width `w` of the per-point default cone.
    #[arg(long)]
    cone_halfwidth: Option<f64>,
    /// Threshold on `|x| t^{-1/3}` below which a point is self-similar.
    #[arg(long)]
    y_cut: Option<f64>,
    /// Exponent `p > 4` of the region-III error order.
    #[arg(long)]
    p: Option<f64>,
    /// Painlevé matching amplitude `re[,im]`, needed for region-III points.
    #[arg(long, allow_hyphen_values = true)]
    kappa: Option<String>,
    /// Conjugation-factor strategy.
    #[arg(long)]
    delta: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    /// Field CSV files on one grid; differences are taken against the first.
    #[arg(required = true)]
    files: Vec<PathBuf>,
    /// Times of the files; enables the log-log fit of their sup norms.
    #[arg(long, value_delimiter = ',')]
    times: Vec<f64>,
    /// Restrict the sup norm to `v2 <= x/t <= v1`.
    #[arg(long, allow_hyphen_values = true)]
    cone: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Flag > config file > default, with every resolved value recorded.
struct Settings {
    file: Map<String, Value>,
    resolved: Map<String, Value>,
}

impl Settings {
    fn load(path: Option<&Path>) -> Result<Self> {
        let file = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p).with_context(|| format!("reading config {}", p.display()))?;
                match serde_json::from_str(&text).with_context(|| format!("parsing config {}", p.display()))? {
                    Value::Object(m) => m,
                    _ => bail!("config {} is not a JSON object", p.display()),
                }
            }
            None => Map::new(),
        };
        Ok(Self { file, resolved: Map::new() })
    }

    fn get<T>(&mut self, key: &str, flag: Option<T>, default: T) -> Result<T>
    where
        T: serde::de::DeserializeOwned + Serialize,
    {
        let v = match flag {
            Some(v) => v,
            None => match self.file.get(key) {
                Some(v) => serde_json::from_value(v.clone()).with_context(|| format!("config key {key}"))?,
                None => default,
            },
        };
        self.resolved.insert(key.to_string(), serde_json::to_value(&v)?);
        Ok(v)
    }

    fn get_opt<T>(&mut self, key: &str, flag: Option<T>) -> Result<Option<T>>
    where
        T: serde::de::DeserializeOwned + Serialize,
    {
        let v = match flag {
            Some(v) => Some(v),
            None => match self.file.get(key) {
                Some(v) => Some(serde_json::from_value(v.clone()).with_context(|| format!("config key {key}"))?),
                None => None,
            },
        };
        self.resolved.insert(key.to_string(), serde_json::to_value(&v)?);
        Ok(v)
    }
}

#[derive(Serialize)]
struct FileHash {
    path: String,
    sha256: String,
}

#[derive(Serialize)]
struct RunManifest {
    command: String,
    version: &'static str,
    config: Map<String, Value>,
    seed: Option<u64>,
    inputs: Vec<FileHash>,
    outputs: Vec<String>,
    duration_seconds: f64,
    summary: Value,
}

fn sha256_file(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path).with_context(|| format!("hashing {}", path.display()))?;
    Ok(Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect())
}

struct Run {
    command: &'static str,
    out_dir: PathBuf,
    seed: Option<u64>,
    strict: bool,
    settings: Settings,
    inputs: Vec<PathBuf>,
    outputs: Vec<PathBuf>,
    started: Instant,
}

impl Run {
    fn output_path(&self, flag: Option<PathBuf>, default: &str) -> PathBuf {
        let p = flag.unwrap_or_else(|| PathBuf::from(default));
        if p.is_absolute() {
            p
        } else {
            self.out_dir.join(p)
        }
    }

    fn prepare_output(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        }
        Ok(())
    }

    /// Writes `<first output>.manifest.json`.
    fn finish(self, summary: Value) -> Result<()> {
        let primary = self.outputs.first().ok_or_else(|| anyhow!("no outputs to record"))?;
        let mut name = primary.file_name().unwrap_or_default().to_os_string();
        name.push(".manifest.json");
        let path = primary.with_file_name(name);
        let manifest = RunManifest {
            command: self.command.to_string(),
            version: env!("CARGO_PKG_VERSION"),
            config: self.settings.resolved,
            seed: self.seed,
            inputs: self
                .inputs
                .iter()
                .map(|p| Ok(FileHash { path: p.display().to_string(), sha256: sha256_file(p)? }))
                .collect::<Result<_>>()?,
            outputs: self.outputs.iter().map(|p| p.display().to_string()).collect(),
            duration_seconds: self.started.elapsed().as_secs_f64(),
            summary,
        };
        write_json(&path, &manifest)?;
        Ok(())
    }
}

fn parse_floats(s: &str, n: usize, what: &str) -> Result<Vec<f64>> {
    let v: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().with_context(|| format!("{what}: cannot parse {p:?}")))
        .collect::<Result<_>>()?;
    if v.len() != n {
        bail!("{what}: expected {n} comma-separated numbers, got {}", v.len());
    }
    Ok(v)
}

fn parse_complex(s: &str) -> Result<C> {
    let parts: Vec<&str> = s.split(',').collect();
    match parts.len() {
        1 => Ok(C::new(parts[0].trim().parse()?, 0.0)),
        2 => Ok(C::new(parts[0].trim().parse()?, parts[1].trim().parse()?)),
        _ => bail!("complex value {s:?} must be `re` or `re,im`"),
    }
}

fn parse_lattice(s: &str) -> Result<Vec<(f64, f64)>> {
    let axes: Vec<&str> = s.split(',').collect();
    if axes.len() != 2 {
        bail!("lattice {s:?} must be `xmin:xmax:nx,tmin:tmax:nt`");
    }
    let axis = |a: &str| -> Result<Vec<f64>> {
        let p: Vec<&str> = a.split(':').collect();
        if p.len() != 3 {
            bail!("lattice axis {a:?} must be `min:max:n`");
        }
        Ok(uniform_k_grid(p[0].parse()?, p[1].parse()?, p[2].parse()?))
    };
    let (xs, ts) = (axis(axes[0])?, axis(axes[1])?);
    Ok(ts.iter().flat_map(|&t| xs.iter().map(move |&x| (x, t))).collect())
}

fn cmd_scatter(mut run: Run, a: ScatterArgs) -> Result<()> {
    let field = read_profile(&a.input)?;
    run.inputs.push(a.input.clone());
    let kmin = run.settings.get("kmin", a.kmin, -5.0)?;
    let kmax = run.settings.get("kmax", a.kmax, 5.0)?;
    let nk = run.settings.get("nk", a.nk, 501)?;
    let search = run.settings.get("search", a.search, "-3,3,0.02,3".to_string())?;
    let s = parse_floats(&search, 4, "search")?;
    let bx = SearchBox { re_min: s[0], re_max: s[1], im_min: s[2], im_max: s[3] };
    let norming = run.settings.get("norming", a.norming, DEFAULT_NORMING.to_string())?;
    let method = norming_registry().create(&norming)?;
    let cfg = JostConfig { strict_edges: run.strict, ..JostConfig::default() };
    let (sd, td) = scatter(&field, &uniform_k_grid(kmin, kmax, nk), &bx, &cfg, method.as_ref())?;
    let out = run.output_path(a.out, "scattering.json");
    run.prepare_output(&out)?;
    write_scattering(&out, &sd)?;
    run.outputs.push(out);
    let failed = td.failures.len();
    let summary = serde_json::json!({
        "poles": sd.poles.len(),
        "gamma_sup": sd.gamma_sup(),
        "failed_k_points": failed,
        "symmetry_residual": td.symmetry_residual(),
    });
    run.finish(summary)?;
    if failed > 0 {
        return Err(Error::PartialFailure { failed, total: nk, first: td.failures[0].1.clone() }.into());
    }
    Ok(())
}

fn cmd_soliton(mut run: Run, a: SolitonArgs) -> Result<()> {
    let sd = read_scattering(&a.scattering)?;
    run.inputs.push(a.scattering.clone());
    let xmin = run.settings.get("xmin", a.xmin, -40.0)?;
    let xmax = run.settings.get("xmax", a.xmax, 40.0)?;
    let n = run.settings.get("n", a.n, 2048)?;
    let t = run.settings.get("t", a.t, 0.0)?;
    let periodic = run.settings.get("periodic", Some(a.periodic).filter(|p| *p), false)?;
    let policy_name = run.settings.get("exponent_policy", a.exponent_policy, DEFAULT_EXPONENT_POLICY.to_string())?;
    let policy = exponent_registry().create(&policy_name)?;
    if n < 2 || !(xmax > xmin) {
        bail!("grid needs n >= 2 and xmin < xmax");
    }
    let dx = if periodic { (xmax - xmin) / n as f64 } else { (xmax - xmin) / (n - 1) as f64 };
    let xs: Vec<f64> = (0..n).map(|i| xmin + i as f64 * dx).collect();
    let field = soliton_field_with(&sd, &xs, t, policy.as_ref())?;
    let out = run.output_path(a.out, "soliton.csv");
    run.prepare_output(&out)?;
    write_profile_csv(&out, &field)?;
    run.outputs.push(out);
    let summary = serde_json::json!({ "poles": sd.poles.len(), "sup_norm": field.sup_norm(), "l2": field.l2_norm() });
    run.finish(summary)
}

fn cmd_evolve(mut run: Run, a: EvolveArgs) -> Result<()> {
    let field = read_profile(&a.input)?;
    run.inputs.push(a.input.clone());
    let t_end = run.settings.get("t_end", a.t_end, 1.0)?;
    let dt = run.settings.get_opt("dt", a.dt)?;
    let mut times = run.settings.get("times", Some(a.times).filter(|v| !v.is_empty()), vec![])?;
    let linear_only = run.settings.get("linear_only", Some(a.linear_only).filter(|v| *v), false)?;
    let dealias = run.settings.get("dealias", a.dealias, 2.0 / 3.0)?;
    times.retain(|&t| t < t_end);
    times.push(t_end);
    let cfg = EvolutionConfig {
        dt,
        t_end,
        dealias_fraction: dealias,
        nonlinearity_on: !linear_only,
        strict_edges: run.strict,
        ..EvolutionConfig::default()
    };
    let reports = evolve_snapshots(&field, &cfg, &times)?;
    let out = run.output_path(a.out, "evolve.csv");
    run.prepare_output(&out)?;
    let stem = out.file_stem().unwrap_or_default().to_string_lossy().to_string();
    let ext = out.extension().map(|e| e.to_string_lossy().to_string()).unwrap_or_else(|| "csv".into());
    let mut paths = Vec::new();
    for r in &reports {
        let p = if r.field.time == t_end {
            out.clone()
        } else {
            out.with_file_name(format!("{stem}_t{}.{ext}", fmt_f64(r.field.time)))
        };
        write_profile_csv(&p, &r.field)?;
        paths.push(p);
    }
    // final state first so the manifest is named after it
    paths.rotate_right(1);
    run.outputs.extend(paths);
    let last = reports.last().unwrap();
    let summary = serde_json::json!({
        "dt_used": last.dt_used,
        "steps": last.steps,
        "halvings": last.halvings,
        "stability_number": last.stability_number,
        "relative_drift": last.relative_drift,
        "conservation_log": last.conservation_log,
    });
    run.finish(summary)
}

#[derive(Serialize)]
struct AsymptoteRow {
    x: f64,
    t: f64,
    region: Region,
    leading: C,
    correction: C,
    order: f64,
    approximate: bool,
    commutator: f64,
}

fn cmd_asymptote(mut run: Run, a: AsymptoteArgs) -> Result<()> {
    let sd = read_scattering(&a.scattering)?;
    run.inputs.push(a.scattering.clone());
    let points_flag = Some(a.point).filter(|v| !v.is_empty());
    let point_strs: Vec<String> = run.settings.get("points", points_flag, vec![])?;
    let lattice = run.settings.get_opt("lattice", a.lattice)?;
    let cone = run.settings.get_opt("cone", a.cone)?;
    let halfwidth = run.settings.get("cone_halfwidth", a.cone_halfwidth, 0.1)?;
    let y_cut = run.settings.get("y_cut", a.y_cut, DEFAULT_Y_CUT)?;
    let p = run.settings.get("p", a.p, DEFAULT_P)?;
    let kappa = run.settings.get_opt("kappa", a.kappa)?;
    let delta_name = run.settings.get("delta", a.delta, DEFAULT_DELTA.to_string())?;
    let delta = delta_registry().create(&delta_name)?;
    let mut points: Vec<(f64, f64)> = point_strs
        .iter()
        .map(|s| parse_floats(s, 2, "point").map(|v| (v[0], v[1])))
        .collect::<Result<_>>()?;
    if let Some(l) = &lattice {
        points.extend(parse_lattice(l)?);
    }
    if points.is_empty() {
        bail!("no evaluation points; use --point or --lattice");
    }
    let fixed_cone = cone.map(|c| parse_floats(&c, 2, "cone")).transpose()?.map(|v| ConeSpec::new(v[0], v[1])).transpose()?;
    let needs_painleve = points
        .iter()
        .map(|&(x, t)| classify(x, t, y_cut).map(|tag| tag.region == Region::III))
        .collect::<ssq_core::Result<Vec<_>>>()?
        .into_iter()
        .any(|b| b);
    let painleve = match (&kappa, needs_painleve) {
        (Some(k), true) => Some(solve_painleve_with(parse_complex(k)?, &PainleveConfig::default())?),
        (None, true) => bail!("region-III points need --kappa"),
        _ => None,
    };
    let rows: Vec<AsymptoteRow> = points
        .par_iter()
        .map(|&(x, t)| -> ssq_core::Result<AsymptoteRow> {
            let xi = x / t;
            let cone = match fixed_cone {
                Some(c) => c,
                None => ConeSpec::new(xi - halfwidth * xi.abs(), xi + halfwidth * xi.abs())?,
            };
            let model = AsymptoticModel { sigma_d: &sd, cone, painleve: painleve.as_ref(), delta: delta.as_ref(), y_cut, p };
            let e = model.evaluate(x, t)?;
            Ok(AsymptoteRow {
                x,
                t,
                region: e.region.region,
                leading: e.leading,
                correction: e.correction,
                order: e.claimed_error_order,
                approximate: e.approximate,
                commutator: e.commutator,
            })
        })
        .collect::<ssq_core::Result<_>>()?;
    let approximate = rows.iter().filter(|r| r.approximate).count();
    if approximate > 0 {
        let commutator = rows.iter().map(|r| r.commutator).fold(0.0, f64::max);
        if run.strict {
            return Err(Error::ApproximateDelta { commutator }.into());
        }
        log::warn!("{approximate} points used an approximate conjugation factor");
    }
    let out = run.output_path(a.out, "asymptote.csv");
    run.prepare_output(&out)?;
    write_csv(
        &out,
        &["x", "t", "region", "re_leading", "im_leading", "re_corr", "im_corr", "error_order"],
        rows.iter().map(|r| {
            [
                fmt_f64(r.x),
                fmt_f64(r.t),
                r.region.to_string(),
                fmt_f64(r.leading.re),
                fmt_f64(r.leading.im),
                fmt_f64(r.correction.re),
                fmt_f64(r.correction.im),
                fmt_f64(r.order),
            ]
        }),
    )?;
    run.outputs.push(out.clone());
    if let Some(ps) = &painleve {
        let stem = out.file_stem().unwrap_or_default().to_string_lossy().to_string();
        let pp = out.with_file_name(format!("{stem}_painleve.csv"));
        write_csv(&pp, &["y", "re_up", "im_up"], ps.ys.iter().zip(&ps.up).map(|(y, u)| [fmt_f64(*y), fmt_f64(u.re), fmt_f64(u.im)]))?;
        run.outputs.push(pp);
    }
    let count = |r: Region| rows.iter().filter(|row| row.region == r).count();
    let summary = serde_json::json!({
        "points": rows.len(),
        "region_I": count(Region::I),
        "region_II": count(Region::II),
        "region_III": count(Region::III),
        "approximate_points": approximate,
        "painleve_residual_max": painleve.as_ref().map(|p| p.residual_max),
    });
    run.finish(summary)
}

#[derive(Serialize)]
struct Difference {
    file: String,
    linf: f64,
    l2: f64,
}

#[derive(Serialize)]
struct CompareReport {
    reference: String,
    differences: Vec<Difference>,
    sup_norms: Vec<f64>,
    times: Vec<f64>,
    fit: Option<ssq_core::stats::LogLogFit>,
}

fn cone_sup(field: &ComplexField, t: f64, cone: Option<&ConeSpec>) -> f64 {
    field
        .xs
        .iter()
        .zip(&field.values)
        .filter(|(x, _)| cone.is_none_or(|c| c.contains_point(**x, t)))
        .map(|(_, v)| v.norm())
        .fold(0.0, f64::max)
}

fn cmd_compare(mut run: Run, a: CompareArgs) -> Result<()> {
    let fields: Vec<ComplexField> = a.files.iter().map(|p| read_profile(p)).collect::<ssq_core::Result<_>>()?;
    run.inputs.extend(a.files.iter().cloned());
    let times = run.settings.get("times", Some(a.times).filter(|v| !v.is_empty()), vec![])?;
    let cone = run.settings.get_opt("cone", a.cone)?;
    let cone = cone.map(|c| parse_floats(&c, 2, "cone")).transpose()?.map(|v| ConeSpec::new(v[0], v[1])).transpose()?;
    if !times.is_empty() && times.len() != fields.len() {
        bail!("{} times for {} files", times.len(), fields.len());
    }
    if fields.len() < 2 && times.is_empty() {
        bail!("compare needs two files, or a file list with --times");
    }
    let mut differences = Vec::new();
    if times.is_empty() {
        for (p, f) in a.files.iter().zip(&fields).skip(1) {
            differences.push(Difference { file: p.display().to_string(), linf: f.sup_distance(&fields[0])?, l2: f.l2_distance(&fields[0])? });
        }
    }
    let sup_norms: Vec<f64> = if times.is_empty() {
        fields.iter().map(|f| cone_sup(f, 1.0, None)).collect()
    } else {
        fields.iter().zip(&times).map(|(f, &t)| cone_sup(f, t, cone.as_ref())).collect()
    };
    let fit = if times.len() >= 2 { Some(fit_loglog(&times, &sup_norms)?) } else { None };
    let report = CompareReport { reference: a.files[0].display().to_string(), differences, sup_norms, times, fit };
    let out = run.output_path(a.out, "compare.json");
    run.prepare_output(&out)?;
    write_json(&out, &report)?;
    run.outputs.push(out);
    let summary = serde_json::to_value(&report)?;
    run.finish(summary)
}

fn exit_code(e: &anyhow::Error) -> i32 {
    match e.downcast_ref::<Error>() {
        Some(Error::PartialFailure { .. }) => 2,
        Some(Error::SystemSingular { .. }) => 3,
        Some(Error::Instability { .. }) => 4,
        Some(Error::ApproximateDelta { .. }) => 5,
        _ => 1,
    }
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = Settings::load(cli.config.as_deref()).and_then(|mut settings| {
        let strict = settings.get("strict", Some(cli.strict).filter(|s| *s), false)?;
        let seed = settings.get_opt("seed", cli.seed)?;
        let command = match &cli.command {
            Command::Scatter(_) => "scatter",
            Command::Soliton(_) => "soliton",
            Command::Evolve(_) => "evolve",
            Command::Asymptote(_) => "asymptote",
            Command::Compare(_) => "compare",
        };
        let run = Run {
            command,
            out_dir: cli.out_dir.clone(),
            seed,
            strict,
            settings,
            inputs: vec![],
            outputs: vec![],
            started: Instant::now(),
        };
        match cli.command {
            Command::Scatter(a) => cmd_scatter(run, a),
            Command::Soliton(a) => cmd_soliton(run, a),
            Command::Evolve(a) => cmd_evolve(run, a),
            Command::Asymptote(a) => cmd_asymptote(run, a),
            Command::Compare(a) => cmd_compare(run, a),
        }
    });
    if let Err(e) = result {
        eprintln!("error: {e:#}");
        std::process::exit(exit_code(&e));
    }
}

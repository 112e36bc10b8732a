//! Job runner behind the `fqtorus` binary.
//!
//! Every artifact carries the hash of the job configuration and input files;
//! the thread count and output directory do not enter the hash and do not
//! change any output byte.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;
use sha2::{Digest, Sha256};

use crate::curve::{homotopy_density, trace_components, transversality, KappaQuadOptions, KappaQuadrature, TraceOptions};
use crate::cutproject::{dilation_check, generate, kappa_coeff_closed_form, CutProjectConfig, Dilation};
use crate::error::{Error, Result};
use crate::io;
use crate::rootfind::{complex_root_count, density_complex, is_real_rooted, real_roots, QuadOptions, Rectangle, RootOptions};
use crate::spectrum::{bohr_coefficient, box_indices, scan_table, table_from_curve, table_from_points};
use crate::suite::{verify_example, SuiteOptions};
use crate::torus::{check_rational_independence, default_bound, CompactificationMap, Slope};
use crate::trigpoly::{ExpPoly1D, LaurentPoly};

#[derive(Debug, Clone, Parser, Serialize)]
#[command(name = "fqtorus", version, about = "Quasicrystals from toral compactifications")]
pub struct JobConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Output directory (created if missing).
    #[arg(long, global = true, default_value = ".")]
    #[serde(skip)]
    pub out: PathBuf,
    /// Worker threads; 0 lets the runtime decide.
    #[arg(long, global = true, default_value_t = 0)]
    #[serde(skip)]
    pub threads: usize,
}

/// Polynomial and map inputs.
#[derive(Debug, Clone, Args, Serialize)]
pub struct Inputs {
    /// Laurent polynomial JSON `{"m","terms":[{"exp","re","im"}]}` or exponential
    /// polynomial JSON `{"terms":[{"freq","re","im"}]}`.
    #[arg(long)]
    pub poly: PathBuf,
    /// Map JSON `{"m","n","M"}`.
    #[arg(long, conflicts_with = "tan_theta")]
    pub map: Option<PathBuf>,
    /// Planar map from `tan θ`: a number, `sqrt2`, `1/sqrt2`, `golden` or `inf`.
    #[arg(long)]
    pub tan_theta: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum Route {
    Points,
    Integral,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Real roots with multiplicities on [a, b] (default [-R, R]).
    Roots {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long = "R", default_value_t = 50.0)]
        radius: f64,
        #[arg(long, allow_hyphen_values = true)]
        a: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        b: Option<f64>,
        #[arg(long)]
        grid_step: Option<f64>,
        /// Newton tolerance.
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Real-rootedness verdict by density comparison.
    Certify {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long = "R", default_value_t = 500.0)]
        radius: f64,
        /// Density tolerance; default 5/(2R) + 0.01 ρ_c.
        #[arg(long)]
        tol: Option<f64>,
        /// Also count complex zeros in [a, b] × [-h, h].
        #[arg(long, num_args = 4, value_names = ["A", "B", "H_LO", "H_HI"], allow_hyphen_values = true)]
        rect: Option<Vec<f64>>,
    },
    /// Trace the real zero set on T² and report homotopy data.
    Trace {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
        #[arg(long, default_value_t = 64)]
        seed_grid: usize,
        /// Corrector tolerance.
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Empirical, complex and homotopy densities.
    Density {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long = "R", default_value_t = 500.0)]
        radius: f64,
    },
    /// Coefficient table on |k|_∞ ≤ kmax with support mask.
    Spectrum {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long = "R", default_value_t = 500.0)]
        radius: f64,
        #[arg(long, default_value_t = 4)]
        kmax: i64,
        /// Zero threshold of the support mask.
        #[arg(long, default_value_t = 0.05)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Route::Points)]
        route: Route,
    },
    /// Strip cut-and-project set, its coefficients and dilation check.
    Cutproject {
        /// Config JSON `{"tan_theta", "ell", "R"}`; overrides the flags below.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value = "golden")]
        tan_theta: String,
        #[arg(long, default_value_t = 1.0)]
        ell: f64,
        #[arg(long = "R", default_value_t = 200.0)]
        radius: f64,
        #[arg(long, default_value_t = 4)]
        kmax: i64,
        /// Dilation check tolerance.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Test the golden dilation.
        #[arg(long)]
        golden_dilation: bool,
    },
    /// Reproduce a worked example (1, 2 or 3) and report every check.
    VerifyExample {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=3))]
        example: u8,
        #[arg(long)]
        tan_theta: Option<String>,
        #[arg(long = "R")]
        radius: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        delta: Option<f64>,
        #[arg(long)]
        kmax: Option<i64>,
        #[arg(long)]
        tol: Option<f64>,
    },
}

/// What a finished job produced.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Outcome {
    /// 0 on success, 2 on a failed verification.
    pub exit_code: i32,
    pub config_hash: String,
    pub artifacts: Vec<PathBuf>,
    pub summary: serde_json::Value,
}

enum Poly {
    Laurent(LaurentPoly),
    Exp(ExpPoly1D),
}

fn load_poly(path: &Path) -> Result<Poly> {
    let value: serde_json::Value = io::read_json(path)?;
    let parsed = if value.get("m").is_some() {
        serde_json::from_value(value).map(Poly::Laurent)
    } else {
        serde_json::from_value(value).map(Poly::Exp)
    };
    parsed.map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn load_map(inputs: &Inputs) -> Result<Option<CompactificationMap>> {
    match (&inputs.map, &inputs.tan_theta) {
        (Some(p), _) => io::read_json(p).map(Some),
        (None, Some(t)) => Ok(Some(CompactificationMap::planar(t.parse()?))),
        (None, None) => Ok(None),
    }
}

fn laurent_and_map(inputs: &Inputs) -> Result<(LaurentPoly, CompactificationMap)> {
    match (load_poly(&inputs.poly)?, load_map(inputs)?) {
        (Poly::Laurent(p), Some(m)) => Ok((p, m)),
        (Poly::Laurent(_), None) => Err(Error::InvalidArgument("a map (--map or --tan-theta) is required".into())),
        (Poly::Exp(_), _) => Err(Error::InvalidArgument("this command needs a Laurent polynomial".into())),
    }
}

fn exp_poly(inputs: &Inputs) -> Result<(ExpPoly1D, Option<(LaurentPoly, CompactificationMap)>)> {
    match load_poly(&inputs.poly)? {
        Poly::Exp(p) => Ok((p, None)),
        Poly::Laurent(l) => {
            let map = load_map(inputs)?
                .ok_or_else(|| Error::InvalidArgument("a map (--map or --tan-theta) is required".into()))?;
            Ok((l.pullback(&map)?, Some((l, map))))
        }
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{name} must be positive, got {v}")))
    }
}

impl JobConfig {
    /// Checks tolerances and referenced files.
    pub fn validate(&self) -> Result<()> {
        let file = |p: &Path| {
            if p.is_file() {
                Ok(())
            } else {
                Err(Error::Io(format!("{}: no such file", p.display())))
            }
        };
        let inputs = |i: &Inputs| -> Result<()> {
            file(&i.poly)?;
            if let Some(m) = &i.map {
                file(m)?;
            }
            Ok(())
        };
        match &self.command {
            Command::Roots { inputs: i, radius, tol, grid_step, .. } => {
                inputs(i)?;
                positive("R", *radius)?;
                positive("tol", *tol)?;
                if let Some(g) = grid_step {
                    positive("grid-step", *g)?;
                }
            }
            Command::Certify { inputs: i, radius, tol, .. } => {
                inputs(i)?;
                positive("R", *radius)?;
                if let Some(t) = tol {
                    positive("tol", *t)?;
                }
            }
            Command::Trace { inputs: i, step, tol, .. } => {
                inputs(i)?;
                positive("step", *step)?;
                positive("tol", *tol)?;
            }
            Command::Density { inputs: i, radius } => {
                inputs(i)?;
                positive("R", *radius)?;
            }
            Command::Spectrum { inputs: i, radius, tol, kmax, .. } => {
                inputs(i)?;
                positive("R", *radius)?;
                positive("tol", *tol)?;
                if *kmax < 0 {
                    return Err(Error::InvalidArgument("kmax must be nonnegative".into()));
                }
            }
            Command::Cutproject { config, ell, radius, tol, .. } => {
                if let Some(c) = config {
                    file(c)?;
                }
                positive("ell", *ell)?;
                positive("R", *radius)?;
                positive("tol", *tol)?;
            }
            Command::VerifyExample { radius, tol, .. } => {
                if let Some(r) = radius {
                    positive("R", *r)?;
                }
                if let Some(t) = tol {
                    positive("tol", *t)?;
                }
            }
        }
        Ok(())
    }

    fn input_files(&self) -> Vec<&Path> {
        fn from(i: &Inputs) -> Vec<&Path> {
            let mut v = vec![i.poly.as_path()];
            v.extend(i.map.as_deref());
            v
        }
        match &self.command {
            Command::Roots { inputs, .. }
            | Command::Certify { inputs, .. }
            | Command::Trace { inputs, .. }
            | Command::Density { inputs, .. }
            | Command::Spectrum { inputs, .. } => from(inputs),
            Command::Cutproject { config, .. } => config.iter().map(|p| p.as_path()).collect(),
            Command::VerifyExample { .. } => Vec::new(),
        }
    }

    /// SHA-256 over the command, its options, and the bytes of every input file.
    pub fn config_hash(&self) -> Result<String> {
        let mut h = Sha256::new();
        h.update(serde_json::to_vec(&self.command)?);
        for p in self.input_files() {
            h.update([0u8]);
            h.update(fs::read(p)?);
        }
        Ok(hex::encode(h.finalize()))
    }
}

struct Emitter {
    dir: PathBuf,
    hash: String,
    artifacts: Vec<PathBuf>,
}

impl Emitter {
    fn text(&mut self, name: &str, body: &str) -> Result<()> {
        let p = self.dir.join(name);
        fs::write(&p, body)?;
        self.artifacts.push(p);
        Ok(())
    }

    fn json(&mut self, name: &str, mut value: serde_json::Value) -> Result<()> {
        if let Some(obj) = value.as_object_mut() {
            obj.insert("config_hash".into(), json!(self.hash));
        }
        let body = io::to_json_string(&value)?;
        self.text(name, &body)
    }
}

/// Runs a job, writing artifacts into `cfg.out`.
pub fn run(cfg: &JobConfig) -> Result<Outcome> {
    cfg.validate()?;
    fs::create_dir_all(&cfg.out)?;
    let hash = cfg.config_hash()?;
    let mut em = Emitter { dir: cfg.out.clone(), hash: hash.clone(), artifacts: Vec::new() };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let (exit_code, summary) = pool.install(|| dispatch(&cfg.command, &mut em))?;
    Ok(Outcome { exit_code, config_hash: hash, artifacts: em.artifacts, summary })
}

fn dispatch(cmd: &Command, em: &mut Emitter) -> Result<(i32, serde_json::Value)> {
    match cmd {
        Command::Roots { inputs, radius, a, b, grid_step, tol } => {
            let (p, _) = exp_poly(inputs)?;
            let (a, b) = (a.unwrap_or(-radius), b.unwrap_or(*radius));
            let opts = RootOptions { grid_step: *grid_step, newton_tol: *tol, ..Default::default() };
            let pts = real_roots(&p, a, b, &opts)?;
            em.text("roots.csv", &io::points_csv(&pts))?;
            let meta = json!({
                "quantity": "real zeros with multiplicity",
                "interval": [a, b],
                "newton_tol": tol,
                "grid_step": grid_step.unwrap_or(0.4 / p.bandwidth()),
                "flagged": pts.flagged,
                "config_hash": em.hash,
            });
            let side = serde_json::to_value(io::points_sidecar(&pts, meta))?;
            em.json("roots.json", side)?;
            Ok((0, json!({ "roots": pts.len(), "total_multiplicity": pts.total_multiplicity(), "flagged": pts.flagged.len() })))
        }
        Command::Certify { inputs, radius, tol, rect } => {
            let (p, _) = exp_poly(inputs)?;
            let verdict = is_real_rooted(&p, *radius, *tol, &RootOptions::default())?;
            let mut out = json!({
                "quantity": "real vs complex zero density",
                "formula": "real-rooted iff rho_r = rho_c = y_d - y_1",
                "verdict": verdict,
            });
            if let Some(r) = rect {
                if !(r[1] > r[0] && r[3] > r[2]) {
                    return Err(Error::InvalidArgument("rectangle needs A < B and H_LO < H_HI".into()));
                }
                let rect = Rectangle::new(r[0], r[1], r[2], r[3]);
                out["rectangle_count"] = json!({ "rectangle": [r[0], r[1], r[2], r[3]], "count": complex_root_count(&p, rect, &QuadOptions::default())? });
            }
            em.json("certify.json", out.clone())?;
            Ok((0, out))
        }
        Command::Trace { inputs, step, seed_grid, tol } => {
            let (poly, map) = laurent_and_map(inputs)?;
            let opts = TraceOptions { seed_grid: *seed_grid, step: *step, corrector_tol: *tol, max_steps: None };
            let comps = trace_components(&poly, &map, &opts)?;
            let hom = homotopy_density(&comps, &map)?;
            for (i, (c, h)) in comps.iter().zip(&hom.components).enumerate() {
                em.text(&format!("component_{i}.csv"), &io::component_csv(c))?;
                let side = io::ComponentSidecar {
                    winding: c.winding,
                    lift_displacement: c.lift_displacement,
                    index: h.index,
                    annihilator: h.annihilator.clone(),
                    density_contribution: h.density_contribution,
                    transversality_margin: transversality(c, &map),
                    samples: c.len(),
                    orientation: c.orientation,
                };
                em.json(&format!("component_{i}.json"), serde_json::to_value(side)?)?;
            }
            let out = json!({
                "quantity": "homotopy data of the real zero set",
                "formula": "density = sum over components of |S1/S| |det E^T M|",
                "trace_options": opts,
                "homotopy": hom,
            });
            em.json("homotopy.json", out.clone())?;
            Ok((0, json!({ "components": comps.len(), "total_density": hom.total_density })))
        }
        Command::Density { inputs, radius } => {
            let (p, laurent) = exp_poly(inputs)?;
            let pts = real_roots(&p, -radius, *radius, &RootOptions::default())?;
            let mut out = json!({
                "quantity": "densities of the zero set",
                "window_radius": radius,
                "empirical": pts.density(),
                "complex": density_complex(&p),
            });
            if let Some((poly, map)) = laurent {
                if map.m() == 2 && map.n() == 1 {
                    let comps = trace_components(&poly, &map, &TraceOptions::default())?;
                    let hom = homotopy_density(&comps, &map)?;
                    let (mass, est) = KappaQuadrature::new(&comps, &map).eval([0, 0]);
                    out["homotopy"] = json!(hom.total_density);
                    out["measure_mass"] = json!({ "value": mass.re, "error_estimate": est });
                }
                let screen = check_rational_independence(&map, default_bound(&map));
                out["independence_screen"] = serde_json::to_value(screen)?;
            }
            em.json("density.json", out.clone())?;
            Ok((0, out))
        }
        Command::Spectrum { inputs, radius, kmax, tol, route } => {
            let (poly, map) = laurent_and_map(inputs)?;
            let table = match route {
                Route::Points => {
                    let pts = real_roots(&poly.pullback(&map)?, -radius, *radius, &RootOptions::default())?;
                    table_from_points(&pts, &map, *kmax)?
                }
                Route::Integral => {
                    let comps = trace_components(&poly, &map, &TraceOptions::default())?;
                    table_from_curve(&comps, &map, *kmax, &KappaQuadOptions::default())?
                }
            };
            em.text("spectrum.csv", &io::spectrum_csv(&table)?)?;
            let scan = scan_table(table, *tol);
            let nonnull = scan.null_mask.iter().filter(|n| !**n).count();
            let out = json!({
                "quantity": "measure coefficients at M^T k",
                "formula": "kappa_hat(k) = Bohr mean of the zero set at M^T k",
                "route": route,
                "window_radius": if *route == Route::Points { json!(radius) } else { json!("inf") },
                "scan": scan,
            });
            em.json("spectrum.json", out)?;
            Ok((0, json!({ "entries": scan.table.len(), "non_null": nonnull })))
        }
        Command::Cutproject { config, tan_theta, ell, radius, kmax, tol, golden_dilation } => {
            let mut cp = match config {
                Some(p) => io::read_json::<CutProjectConfig>(p)?,
                None => CutProjectConfig::new(tan_theta.parse::<Slope>()?, *ell, *radius)?,
            };
            cp.validate()?;
            if *golden_dilation && cp.dilation.is_none() {
                cp.dilation = Some(Dilation::golden());
            }
            let set = generate(&cp)?;
            let map = cp.map();
            em.text("points.csv", &io::points_csv(&set.points))?;
            let meta = json!({ "quantity": "strip cut-and-project set", "config": cp, "merged": set.merged });
            em.json("points.json", serde_json::to_value(io::points_sidecar(&set.points, meta))?)?;
            let mut csv = String::from("k1,k2,y,closed_form,bohr_re,bohr_im\n");
            for k in box_indices(*kmax) {
                let y = map.frequency1(&k);
                let b = bohr_coefficient(&set.points, y);
                let _ = writeln!(csv, "{},{},{:?},{:?},{:?},{:?}", k[0], k[1], y, kappa_coeff_closed_form(&cp, k), b.re, b.im);
            }
            em.text("coefficients.csv", &csv)?;
            let dilation = cp.dilation.map(|d| dilation_check(&set.points, d.alpha, cp.ell, *tol));
            let out = json!({
                "quantity": "cut-and-project density, coefficients and dilation",
                "formula": "coefficient = ell * sinc(pi * ell * N^T k)",
                "window_radius": cp.radius,
                "density": set.points.density(),
                "count": set.points.len(),
                "merged": set.merged,
                "dilation": dilation,
                "dilation_tol": tol,
            });
            em.json("cutproject.json", out.clone())?;
            let failed = dilation.is_some_and(|d| !d.is_closed());
            Ok((if failed { 2 } else { 0 }, out))
        }
        Command::VerifyExample { example, tan_theta, radius, delta, kmax, tol } => {
            let opts = SuiteOptions {
                tan_theta: tan_theta.as_deref().map(str::parse).transpose()?,
                radius: *radius,
                delta: *delta,
                kmax: *kmax,
                tol: *tol,
            };
            let report = verify_example(*example, &opts)?;
            em.json(&format!("example{example}.json"), serde_json::to_value(&report)?)?;
            let failed: Vec<&str> = report.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
            Ok((if report.passed { 0 } else { 2 }, json!({ "example": example, "passed": report.passed, "failed": failed })))
        }
    }
}

/// Structured error payload printed on failure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub error: String,
    pub message: String,
}

/// Parses arguments, runs the job, prints a JSON summary (stdout) or error (stderr),
/// and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match JobConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return 0;
        }
        Err(e) => {
            let message = e.render().to_string();
            let report = ErrorReport { error: "usage".into(), message: message.trim().into() };
            eprintln!("{}", serde_json::to_string(&report).unwrap_or_default());
            return 1;
        }
    };
    match run(&cfg) {
        Ok(outcome) => {
            println!("{}", serde_json::to_string_pretty(&outcome).unwrap_or_default());
            outcome.exit_code
        }
        Err(e) => {
            let report = ErrorReport { error: e.kind().into(), message: e.to_string() };
            eprintln!("{}", serde_json::to_string(&report).unwrap_or_default());
            1
        }
    }
}

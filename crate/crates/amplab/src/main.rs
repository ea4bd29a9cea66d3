use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use amplab::derivation::{derive_amplitude_system, parse_poly, Nonlinearity, SymbolSpec};
use amplab::dynamics::{simulate, simulate_coupled, EquationTag, SDEParams};
use amplab::experiments::{
    study_approximation, study_attractivity, study_concentration, study_ht_bounds,
    study_invariant_measure, study_linear_coupling, study_residual, ScalingResult, StudyConfig,
    StudyKind,
};
use amplab::noise::{
    build_noise_coefficients, stream_id, Construction, CorrelationSpec, CouplingMap, WienerStream,
};
use amplab::spectral::{project_pi, OperatorSymbol};
use amplab::{Error, Result};

const VERSION: &str = concat!("amplab-", env!("CARGO_PKG_VERSION"));

#[derive(Parser)]
#[command(name = "amplab", version, about = "Spectral simulation and scaling studies")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum NonlinArg {
    /// u^3
    Cubic,
    /// u (du/dx)^2
    Gradsq,
}

#[derive(Clone, Copy, ValueEnum)]
enum EquationArg {
    Both,
    Sh,
    Gl,
}

#[derive(Subcommand)]
enum Cmd {
    /// Derive the coupled amplitude system of a dispersion polynomial.
    Derive {
        /// Dispersion polynomial in z, e.g. "(1 - z^2)^2 * (9 - z^2)^2"
        #[arg(long, default_value = "(1 - z^2)^2")]
        symbol: String,
        #[arg(long, value_enum, default_value = "cubic")]
        nonlinearity: NonlinArg,
        /// white | exp:ELL | table:PATH
        #[arg(long, default_value = "white")]
        correlation: String,
        /// Radius beyond which the polynomial must dominate z^2
        #[arg(long, default_value_t = 10.0)]
        radius: f64,
        /// Write the system as JSON here as well
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one coupled trajectory pair and write it in the binary format.
    Simulate {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "both")]
        equation: EquationArg,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Run a Monte Carlo scaling study; exit code 0 iff it passes.
    Study {
        /// linear | approx | residual | concentration | attract | invariant | htbounds
        kind: String,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long)]
        threads: Option<usize>,
        /// Negative control: break the noise coupling
        #[arg(long)]
        decoupled: bool,
        /// Also write one representative trajectory pair per epsilon
        #[arg(long)]
        snapshot: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.cmd {
        Cmd::Derive {
            symbol,
            nonlinearity,
            correlation,
            radius,
            out,
        } => cmd_derive(&symbol, nonlinearity, &correlation, radius, out.as_deref()),
        Cmd::Simulate {
            config,
            seed,
            out,
            equation,
            threads,
        } => cmd_simulate(config.as_deref(), seed, &out, equation, threads),
        Cmd::Study {
            kind,
            config,
            seed,
            out,
            threads,
            decoupled,
            snapshot,
        } => cmd_study(
            &kind,
            config.as_deref(),
            seed,
            &out,
            threads,
            decoupled,
            snapshot,
        ),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

/// 0 pass, 1 study fail, 2 usage/config, 3 numerical abort.
fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::BlowUp { .. } | Error::NotReal { .. } | Error::AssumptionFailed(_) => 3,
        _ => 2,
    }
}

fn parse_correlation(text: &str) -> Result<CorrelationSpec> {
    if text == "white" {
        return Ok(CorrelationSpec::white());
    }
    if let Some(ell) = text.strip_prefix("exp:").or(text.strip_prefix("exponential:")) {
        let ell: f64 = ell
            .parse()
            .map_err(|e| Error::Config(format!("correlation length: {e}")))?;
        return CorrelationSpec::exponential(ell);
    }
    if let Some(path) = text.strip_prefix("table:") {
        return CorrelationSpec::from_file(Path::new(path));
    }
    Err(Error::Config(format!(
        "unknown correlation '{text}' (expected white, exp:ELL or table:PATH)"
    )))
}

fn setup_threads(config_threads: usize, flag: Option<usize>) -> usize {
    let env = std::env::var("AMPLAB_THREADS")
        .ok()
        .and_then(|v| v.parse().ok());
    let n = flag.or(env).unwrap_or(config_threads).max(1);
    // Ignore the error: the global pool can only be built once per process.
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global();
    n
}

// ---------------------------------------------------------------------------
// config file

/// Flat `key = value` file with optional `[section]` headers. Unknown keys
/// are errors so typos cannot silently fall back to defaults.
fn load_config(kind: StudyKind, path: Option<&Path>) -> Result<StudyConfig> {
    let mut config = StudyConfig::default_for(kind);
    let Some(path) = path else {
        return Ok(config);
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    let mut section = String::new();
    let mut corr_kind: Option<String> = None;
    let mut corr_ell: Option<f64> = None;
    let mut corr_table: Option<PathBuf> = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let at = |msg: String| Error::Config(format!("{}:{}: {msg}", path.display(), lineno + 1));
        if let Some(name) = line.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| at("unterminated section header".into()))?;
            if !matches!(name, "study" | "noise") {
                return Err(at(format!("unknown section [{name}]")));
            }
            section = name.to_string();
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| at("expected key = value".into()))?;
        let (key, value) = (key.trim(), value.trim());
        let bad = |e: String| at(format!("{key}: {e}"));
        let parse_f64 = |v: &str| v.parse::<f64>().map_err(|e| bad(e.to_string()));
        match (section.as_str(), key) {
            ("study", "eps_ladder") | ("", "eps_ladder") => {
                config.eps_ladder = value
                    .split(',')
                    .map(|v| v.trim().parse::<f64>().map_err(|e| bad(e.to_string())))
                    .collect::<Result<_>>()?;
            }
            ("study", "samples") | ("", "samples") => {
                config.samples = value.parse().map_err(|e: std::num::ParseIntError| bad(e.to_string()))?;
            }
            ("study", "t0") | ("", "t0") => config.t0 = parse_f64(value)?,
            ("study", "l") | ("", "l") => config.l = parse_f64(value)?,
            ("study", "seed") | ("", "seed") => {
                config.seed = value.parse().map_err(|e: std::num::ParseIntError| bad(e.to_string()))?;
            }
            ("study", "nu") | ("", "nu") => config.nu = parse_f64(value)?,
            ("study", "k_factor") | ("", "k_factor") => config.k_factor = parse_f64(value)?,
            ("study", "h_cap") | ("", "h_cap") => config.h_cap = parse_f64(value)?,
            ("study", "band_radius") | ("", "band_radius") => {
                config.band_radius = Some(parse_f64(value)?);
            }
            ("study", "decoupled") | ("", "decoupled") => {
                config.decoupled = value.parse().map_err(|e: std::str::ParseBoolError| bad(e.to_string()))?;
            }
            ("study", "threads") | ("", "threads") => {
                config.threads = value.parse().map_err(|e: std::num::ParseIntError| bad(e.to_string()))?;
            }
            ("study", "t_burn") | ("", "t_burn") => config.t_burn = parse_f64(value)?,
            ("study", "window") | ("", "window") => config.window = parse_f64(value)?,
            ("noise", "correlation") => corr_kind = Some(value.to_string()),
            ("noise", "ell") => corr_ell = Some(parse_f64(value)?),
            ("noise", "table") => corr_table = Some(PathBuf::from(value)),
            _ => {
                return Err(at(format!(
                    "unknown key '{key}' in section [{section}]"
                )))
            }
        }
    }
    if let Some(kind) = corr_kind {
        config.correlation = match kind.as_str() {
            "white" => CorrelationSpec::white(),
            "exponential" | "exp" => CorrelationSpec::exponential(corr_ell.ok_or_else(|| {
                Error::Config("exponential correlation needs noise.ell".into())
            })?)?,
            "table" => CorrelationSpec::from_file(&corr_table.ok_or_else(|| {
                Error::Config("table correlation needs noise.table".into())
            })?)?,
            other => return Err(Error::Config(format!("unknown correlation '{other}'"))),
        };
    } else if let Some(ell) = corr_ell {
        config.correlation = CorrelationSpec::exponential(ell)?;
    }
    Ok(config)
}

// ---------------------------------------------------------------------------
// derive

fn cmd_derive(
    symbol: &str,
    nonlinearity: NonlinArg,
    correlation: &str,
    radius: f64,
    out: Option<&Path>,
) -> Result<ExitCode> {
    let poly = parse_poly(symbol)?;
    let corr = parse_correlation(correlation)?;
    let spec = SymbolSpec::new(poly, radius, "cli");
    let nonlin = match nonlinearity {
        NonlinArg::Cubic => Nonlinearity::Cubic,
        NonlinArg::Gradsq => Nonlinearity::GradSquared,
    };
    let system = derive_amplitude_system(&spec, nonlin, &corr)?;
    print!("{}", system.render());
    if !system.resonances.is_empty() {
        println!("resonances:");
        for r in &system.resonances {
            println!("  {r}");
        }
    }
    if let Some(path) = out {
        write_atomic(path, &serde_json::to_vec_pretty(&json!({
            "version": VERSION,
            "symbol": symbol,
            "system": system,
        }))?)?;
    }
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// simulate

fn cmd_simulate(
    config_path: Option<&Path>,
    seed: Option<u64>,
    out: &Path,
    equation: EquationArg,
    threads: Option<usize>,
) -> Result<ExitCode> {
    let mut config = load_config(StudyKind::Approx, config_path)?;
    if let Some(seed) = seed {
        config.seed = seed;
    }
    config.validate()?;
    setup_threads(config.threads, threads);
    std::fs::create_dir_all(out)?;
    let eps = config.eps_ladder[0];
    let domain = config.domain_for(eps)?;
    let h = config.h_for(eps);
    let stride = ((config.t0 / h).round() as usize / 100).max(1);
    let mut stream = WienerStream::new(config.seed, stream_id(0, 0, 0));
    let a0 = amplab::experiments::admissible_amplitude(domain, &mut stream);
    match equation {
        EquationArg::Both => {
            let coeffs = build_noise_coefficients(
                &config.correlation,
                domain,
                Construction::SpectralSampling,
            )?;
            let map = CouplingMap::new(
                domain,
                &coeffs,
                &config.correlation,
                config.band_radius_for(eps),
                config.decoupled,
            )?;
            let u0 = project_pi(&a0)?;
            let run = simulate_coupled(
                &u0, &a0, config.nu, &map, config.t0, h, &mut stream, stride, false,
            )?;
            run.sh.write_binary(&out.join("sh.traj"))?;
            run.gl.write_binary(&out.join("gl.traj"))?;
            println!("wrote {} and {}", out.join("sh.traj").display(), out.join("gl.traj").display());
        }
        EquationArg::Gl => {
            let params = SDEParams::new(config.nu, 3.0, true)?.with_band_limit(domain.gl_band());
            let sym = OperatorSymbol::gl(domain);
            let amp = config.correlation.qhat(1.0).sqrt();
            let amps: Vec<f64> = (-domain.cutoff..=domain.cutoff)
                .map(|m| if m.abs() <= domain.gl_band() { amp } else { 0.0 })
                .collect();
            let traj = simulate(
                &a0,
                &params,
                &sym,
                EquationTag::Gl,
                config.t0,
                h,
                Some((&mut stream, &amps)),
                stride,
            )?;
            traj.write_binary(&out.join("gl.traj"))?;
            println!("wrote {}", out.join("gl.traj").display());
        }
        EquationArg::Sh => {
            let params = SDEParams::new(config.nu, 1.0, true)?;
            let sym = OperatorSymbol::sh(domain);
            let coeffs = build_noise_coefficients(
                &config.correlation,
                domain,
                Construction::SpectralSampling,
            )?;
            let amps: Vec<f64> = coeffs.qk.iter().map(|q| q.sqrt()).collect();
            let u0 = project_pi(&a0)?;
            let traj = simulate(
                &u0,
                &params,
                &sym,
                EquationTag::Sh,
                config.t0,
                h,
                Some((&mut stream, &amps)),
                stride,
            )?;
            traj.write_binary(&out.join("sh.traj"))?;
            println!("wrote {}", out.join("sh.traj").display());
        }
    }
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// study

fn parse_kind(kind: &str) -> Result<StudyKind> {
    Ok(match kind {
        "linear" => StudyKind::Linear,
        "approx" => StudyKind::Approx,
        "residual" => StudyKind::Residual,
        "concentration" => StudyKind::Concentration,
        "attract" => StudyKind::Attract,
        "invariant" => StudyKind::Invariant,
        "htbounds" => StudyKind::HtBounds,
        other => {
            return Err(Error::Config(format!(
                "unknown study '{other}' (expected linear, approx, residual, \
                 concentration, attract, invariant or htbounds)"
            )))
        }
    })
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, bytes)?;
    Ok(())
}

fn scaling_csv(result: &ScalingResult) -> String {
    let mut csv = String::from("eps,sample,error\n");
    for stat in &result.per_eps {
        for (i, e) in stat.errors.iter().enumerate() {
            csv.push_str(&format!("{},{},{}\n", stat.eps, i, e));
        }
    }
    csv
}

fn scaling_summary(kind: StudyKind, result: &ScalingResult, config: &StudyConfig) -> Result<Vec<u8>> {
    let per_eps: Vec<_> = result
        .per_eps
        .iter()
        .map(|s| json!({"eps": s.eps, "mean": s.mean, "std_error": s.std_error}))
        .collect();
    Ok(serde_json::to_vec_pretty(&json!({
        "version": VERSION,
        "study": kind.name(),
        "slope": result.slope,
        "slope_ci": [result.slope_ci.0, result.slope_ci.1],
        "target_slope": result.target_slope,
        "threshold": result.threshold,
        "pass": result.pass,
        "aborted": result.aborted,
        "per_eps": per_eps,
        "config": config,
    }))?)
}

fn write_snapshots(config: &StudyConfig, dir: &Path) -> Result<()> {
    for (ei, &eps) in config.eps_ladder.iter().enumerate() {
        let domain = config.domain_for(eps)?;
        let h = config.h_for(eps);
        let coeffs = build_noise_coefficients(
            &config.correlation,
            domain,
            Construction::SpectralSampling,
        )?;
        let map = CouplingMap::new(
            domain,
            &coeffs,
            &config.correlation,
            config.band_radius_for(eps),
            config.decoupled,
        )?;
        let mut stream = WienerStream::new(config.seed, stream_id(ei as i64, 0, 99));
        let a0 = amplab::experiments::admissible_amplitude(domain, &mut stream);
        let u0 = project_pi(&a0)?;
        let stride = ((config.t0 / h).round() as usize / 20).max(1);
        let run = simulate_coupled(
            &u0, &a0, config.nu, &map, config.t0, h, &mut stream, stride, false,
        )?;
        run.sh.write_binary(&dir.join(format!("sh-eps{eps}.traj")))?;
        run.gl.write_binary(&dir.join(format!("gl-eps{eps}.traj")))?;
    }
    Ok(())
}

fn cmd_study(
    kind: &str,
    config_path: Option<&Path>,
    seed: Option<u64>,
    out: &Path,
    threads: Option<usize>,
    decoupled: bool,
    snapshot: bool,
) -> Result<ExitCode> {
    let kind = parse_kind(kind)?;
    let mut config = load_config(kind, config_path)?;
    if let Some(seed) = seed {
        config.seed = seed;
    }
    if decoupled {
        config.decoupled = true;
    }
    if snapshot {
        config.snapshot_dir = Some(out.join("snapshots"));
    }
    setup_threads(config.threads, threads);
    config.validate()?;

    let pass = match kind {
        StudyKind::Attract => {
            let report = study_attractivity(&config)?;
            let mut csv = String::from("eps,sample,error\n");
            for row in &report.per_eps {
                for (i, e) in row.c0_norms.iter().enumerate() {
                    csv.push_str(&format!("{},{},{}\n", row.eps, i, e));
                }
            }
            write_atomic(&out.join("attract.csv"), csv.as_bytes())?;
            write_atomic(
                &out.join("attract.json"),
                &serde_json::to_vec_pretty(&json!({
                    "version": VERSION,
                    "study": kind.name(),
                    "report": report,
                    "config": config,
                }))?,
            )?;
            println!(
                "attract: median C0 within {:.3} -> {}",
                report.saturation_bound,
                if report.pass { "pass" } else { "FAIL" }
            );
            report.pass
        }
        StudyKind::HtBounds => {
            let report = study_ht_bounds(&config)?;
            let mut csv = String::from("eps,sample,error\n");
            for (i, row) in report.per_eps.iter().enumerate() {
                csv.push_str(&format!("{},{},{}\n", row.eps, i, row.sup_alpha_scaled));
            }
            write_atomic(&out.join("htbounds.csv"), csv.as_bytes())?;
            write_atomic(
                &out.join("htbounds.json"),
                &serde_json::to_vec_pretty(&json!({
                    "version": VERSION,
                    "study": kind.name(),
                    "report": report,
                    "config": config,
                }))?,
            )?;
            println!(
                "htbounds: max ratios {:.3} / {:.3} (threshold {}) -> {}",
                report.max_ratio_alpha,
                report.max_ratio_h1_c0,
                report.threshold,
                if report.pass { "pass" } else { "FAIL" }
            );
            report.pass
        }
        _ => {
            let result = match kind {
                StudyKind::Linear => study_linear_coupling(&config)?,
                StudyKind::Approx => study_approximation(&config)?,
                StudyKind::Residual => study_residual(&config)?,
                StudyKind::Concentration => study_concentration(&config)?,
                StudyKind::Invariant => study_invariant_measure(&config)?,
                _ => unreachable!(),
            };
            let base = out.join(kind.name());
            write_atomic(&base.with_extension("csv"), scaling_csv(&result).as_bytes())?;
            write_atomic(
                &base.with_extension("json"),
                &scaling_summary(kind, &result, &config)?,
            )?;
            println!(
                "{}: slope {:.3} (CI [{:.3}, {:.3}], threshold {}) -> {}",
                kind.name(),
                result.slope,
                result.slope_ci.0,
                result.slope_ci.1,
                result.threshold,
                if result.pass { "pass" } else { "FAIL" }
            );
            result.pass
        }
    };
    if let Some(dir) = &config.snapshot_dir {
        std::fs::create_dir_all(dir)?;
        write_snapshots(&config, dir)?;
    }
    Ok(if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use trustfusion::sim::{run_experiment, sweep_malicious_proportion, ErrorReport};
use trustfusion::two_stage::{
    error_upper_bound, m_star_noiseless_exact, m_star_normal_approx, optimize_thresholds, trust_probabilities,
    worst_case_error, BoundRegion, WorstCaseConfig,
};

use crate::spec::{ExperimentSpec, Manifest};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Run,
    Sweep,
    Mstar,
    Bounds,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Run => "run",
            Command::Sweep => "sweep",
            Command::Mstar => "mstar",
            Command::Bounds => "bounds",
        }
    }
}

#[derive(Debug, Serialize)]
struct ErrorRow<'a> {
    proportion: f64,
    method: &'a str,
    trials: u64,
    errors: u64,
    error_rate: f64,
    ci_halfwidth: f64,
}

#[derive(Debug, Serialize)]
struct MstarRow {
    p_trust_l: f64,
    m_star_exact: f64,
    m_star_approx: f64,
}

#[derive(Debug, Serialize)]
struct BoundsRow {
    #[serde(rename = "N")]
    n: usize,
    exact_error: f64,
    bound: Option<f64>,
    note: String,
}

/// Files written by a command, relative to the output directory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub dir: PathBuf,
    pub files: Vec<String>,
}

fn io_err(context: impl Into<String>) -> impl FnOnce(std::io::Error) -> CliError {
    let context = context.into();
    move |source| CliError::Output { context, source }
}

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> CliError + '_ {
    move |e| CliError::Output {
        context: format!("writing {}", path.display()),
        source: e.into(),
    }
}

fn write_csv<R: Serialize>(path: &Path, rows: &[R]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err(path))?;
    for r in rows {
        w.serialize(r).map_err(csv_err(path))?;
    }
    w.flush().map_err(io_err(format!("writing {}", path.display())))
}

fn warn(msg: impl AsRef<str>) {
    eprintln!("warning: {}", msg.as_ref());
}

fn warn_rounding(what: &str, m: f64, n: usize) {
    let x = m * n as f64;
    if (x - x.round()).abs() > 1e-9 {
        warn(format!("{what}: {m} x {n} = {x} is not an integer; using {}", x.round()));
    }
}

fn error_rows(proportion: f64, report: &ErrorReport) -> Vec<ErrorRow<'_>> {
    report
        .methods
        .iter()
        .map(|m| ErrorRow {
            proportion,
            method: &m.method,
            trials: m.trials,
            errors: m.errors,
            error_rate: m.error_rate(),
            ci_halfwidth: m.ci_halfwidth(),
        })
        .collect()
}

fn print_report(label: &str, report: &ErrorReport) {
    println!("{label}");
    for m in &report.methods {
        println!(
            "  {:<22} {:>7.2}% +/- {:.2}%",
            m.method,
            m.percent_error(),
            100.0 * m.ci_halfwidth()
        );
    }
}

/// Runs `cmd` and writes its CSV plus `manifest.toml` into the spec's output directory.
pub fn execute(cmd: Command, spec: &ExperimentSpec) -> Result<Outcome, CliError> {
    let dir = spec.file.output.dir.clone();
    fs::create_dir_all(&dir).map_err(io_err(format!("creating {}", dir.display())))?;
    let csv_name = format!("{}.csv", cmd.name());
    let csv_path = dir.join(&csv_name);
    let cfg = &spec.scenario;
    let trials = spec.file.scenario.trials;

    match cmd {
        Command::Run => {
            for m in &spec.methods {
                if let trustfusion::sim::Method::TwoStage { m_bar: Some(mb) } = m {
                    warn_rounding("methods.two_stage_m_bar", *mb, cfg.n);
                }
            }
            let report = run_experiment(cfg, trials, &spec.methods)?;
            print_report(
                &format!("N = {}, malicious = {}, trials = {trials}", cfg.n, cfg.malicious_count),
                &report,
            );
            write_csv(&csv_path, &error_rows(cfg.proportion(), &report))?;
        }
        Command::Sweep => {
            let sweep = spec.file.sweep.as_ref().ok_or_else(|| missing_section("sweep"))?;
            for &p in &sweep.proportions {
                warn_rounding("sweep.proportions", p, cfg.n);
            }
            let results = sweep_malicious_proportion(cfg, &sweep.proportions, trials, &spec.methods)?;
            let mut rows = Vec::new();
            for (p, report) in &results {
                print_report(&format!("m = {p}"), report);
                rows.extend(error_rows(*p, report));
            }
            write_csv(&csv_path, &rows)?;
        }
        Command::Mstar => {
            let ms = spec.file.mstar.as_ref().ok_or_else(|| missing_section("mstar"))?;
            let (h0, h1) = (cfg.sensor.prior_h0(), cfg.sensor.prior_h1());
            let rows: Vec<MstarRow> = ms
                .p_trust_l
                .iter()
                .enumerate()
                .map(|(i, &pl)| {
                    let pm = ms.p_trust_m.as_ref().map_or(1.0 - pl, |v| v[i]);
                    MstarRow {
                        p_trust_l: pl,
                        m_star_exact: m_star_noiseless_exact(pl, pm, ms.n, h0, h1),
                        m_star_approx: m_star_normal_approx(pl, pm, ms.n, h0, h1, ms.delta_m),
                    }
                })
                .collect();
            println!("N = {}", ms.n);
            for r in &rows {
                println!(
                    "  p_trust_l = {:<6} m* exact = {:<6} approx = {}",
                    r.p_trust_l, r.m_star_exact, r.m_star_approx
                );
            }
            write_csv(&csv_path, &rows)?;
        }
        Command::Bounds => {
            let b = spec.file.bounds.as_ref().ok_or_else(|| missing_section("bounds"))?;
            let mut rows = Vec::with_capacity(b.n.len());
            for &n in &b.n {
                warn_rounding("bounds.m_bar", b.m_bar, n);
                let wc = WorstCaseConfig::with_delta_p(b.m_bar, n, b.delta_p)?;
                let thr = optimize_thresholds(&wc, &cfg.sensor, &cfg.trust);
                let exact = worst_case_error(thr.gamma_t, thr.p_t, &wc, &cfg.sensor, &cfg.trust);
                let region = match (b.beta_l, b.beta_m) {
                    (Some(l), Some(m)) => BoundRegion::new(l, m),
                    _ => {
                        let (pl, pm) = trust_probabilities(&thr, &cfg.trust);
                        BoundRegion::midpoint(pl, pm)
                    }
                };
                let bound = region.and_then(|r| error_upper_bound(&thr, &wc, &r, &cfg.sensor, &cfg.trust));
                let (bound, note) = match bound {
                    Ok(v) => (Some(v), String::new()),
                    Err(e) => {
                        warn(format!("N = {n}: bound not applicable: {e}"));
                        (None, e.to_string())
                    }
                };
                println!(
                    "  N = {n:<5} exact = {exact:<12.6e} bound = {}",
                    bound.map_or_else(|| "n/a".to_string(), |v| format!("{v:.6e}"))
                );
                rows.push(BoundsRow {
                    n,
                    exact_error: exact,
                    bound,
                    note,
                });
            }
            write_csv(&csv_path, &rows)?;
        }
    }

    let manifest = Manifest {
        tool: "trustfusion".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command: cmd.name().into(),
        outputs: vec![csv_name.clone()],
        spec: spec.file.clone(),
    };
    let text = toml::to_string(&manifest).map_err(|e| CliError::Output {
        context: "serializing manifest".into(),
        source: std::io::Error::other(e),
    })?;
    let manifest_path = dir.join("manifest.toml");
    let mut f = fs::File::create(&manifest_path).map_err(io_err(format!("writing {}", manifest_path.display())))?;
    f.write_all(text.as_bytes())
        .map_err(io_err(format!("writing {}", manifest_path.display())))?;

    Ok(Outcome {
        dir,
        files: vec![csv_name, "manifest.toml".into()],
    })
}

fn missing_section(name: &str) -> CliError {
    CliError::Invalid {
        field: name.to_string(),
        message: format!("the `{name}` command needs a [{name}] table"),
    }
}

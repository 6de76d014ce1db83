//! Command-line driver: verification suites with machine-readable reports,
//! wave-function evaluation, figure datasets, and operator dumps.
//!
//! Exit codes: 0 all checks pass, 1 at least one check failed, 2 bad
//! configuration or usage.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use rotor_mub::fock::{build_e_fock, build_l_from_n, build_ladder, build_projectors_reflection, build_qp_from_el, FockTruncation};
use rotor_mub::mub_fock::{figure_dataset, psi_series, FigureKind, FockMubLabel};
use rotor_mub::AbelParams;
use rotor_mub::mub_stereo::{gamma_wavefunction, theta0_element, StereoMubLabel};
use rotor_mub::operator::BasisIndexing;
use rotor_mub::report::SuiteReport;
use rotor_mub::scalar::dist_to_pi;
use rotor_mub::verify::{run_suite, Suite, VerifyParams};

#[derive(Parser)]
#[command(name = "rotor-mub", version, about = "Continuous mutually unbiased bases for the planar rotor: verification and evaluation tools")]
struct Cli {
    /// Flat key=value configuration file; command-line flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Oscillator-number cutoff (even).
    #[arg(long = "n-max", global = true)]
    n_max: Option<usize>,

    /// Angular-momentum cutoff.
    #[arg(long = "l-max", global = true)]
    l_max: Option<usize>,

    /// Angular grid size.
    #[arg(long = "grid", global = true)]
    grid: Option<usize>,

    /// Half-width of the excluded neighborhood of phi = pi.
    #[arg(long = "pole-eps", global = true)]
    pole_eps: Option<f64>,

    /// Damping radii for conditionally convergent sums, comma separated.
    #[arg(long = "abel-radii", global = true)]
    abel_radii: Option<String>,

    /// Seed for randomized sweep points.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Report and dataset format.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Output directory for reports and datasets.
    #[arg(long = "out", global = true)]
    out: Option<PathBuf>,

    /// Per-check tolerance override, CHECK=VALUE; repeatable.
    #[arg(long = "tol", global = true)]
    tol: Vec<String>,

    /// Zero the per-check timing field, making reports byte-reproducible.
    #[arg(long = "no-timing", global = true)]
    no_timing: bool,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a verification suite and write its report.
    Verify {
        #[arg(value_enum)]
        suite: SuiteArg,
    },
    /// Emit a wave-function dataset over the pole-windowed angular grid.
    Figure {
        #[arg(value_enum)]
        which: FigureArg,
    },
    /// Evaluate basis wave functions at given angles.
    Eval {
        #[arg(value_enum)]
        family: FamilyArg,
        #[arg(long)]
        theta: f64,
        #[arg(long)]
        y: f64,
        /// Angles to evaluate at, comma separated.
        #[arg(long = "phi", value_delimiter = ',', allow_hyphen_values = true)]
        phi: Vec<f64>,
    },
    /// Dump a truncated operator matrix in both indexings.
    Operators {
        #[arg(value_enum)]
        name: OperatorArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Weyl,
    Fockmap,
    Mub1,
    Mub2,
    Appendix,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum FigureArg {
    Fig3a,
    Fig3b,
    Fig4a,
    Fig4b,
    Fig4c,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Stereo,
    Fock,
}

#[derive(Clone, Copy, ValueEnum)]
enum OperatorArg {
    #[value(alias = "E")]
    E,
    #[value(alias = "L")]
    L,
    #[value(alias = "Q")]
    Q,
    #[value(alias = "P")]
    P,
    #[value(alias = "R")]
    R,
    #[value(alias = "A")]
    A,
}

#[derive(Debug, Clone, Serialize)]
struct RunConfig {
    n_max: usize,
    l_max: usize,
    grid_size: usize,
    pole_epsilon: f64,
    abel_radii: Vec<f64>,
    seed: u64,
    #[serde(skip)]
    format: Format,
    #[serde(skip)]
    out_dir: PathBuf,
    tolerances: BTreeMap<String, f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            n_max: 400,
            l_max: 128,
            grid_size: 2048,
            pole_epsilon: 0.05,
            abel_radii: vec![0.99, 0.999, 0.9999],
            seed: 7,
            format: Format::Json,
            out_dir: PathBuf::from("out"),
            tolerances: BTreeMap::new(),
        }
    }
}

fn config_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("configuration error: {msg}");
    ExitCode::from(2)
}

impl RunConfig {
    fn from_cli(cli: &Cli) -> Result<Self, String> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &cli.config {
            cfg.apply_file(path)?;
        }
        if let Some(v) = cli.n_max {
            cfg.n_max = v;
        }
        if let Some(v) = cli.l_max {
            cfg.l_max = v;
        }
        if let Some(v) = cli.grid {
            cfg.grid_size = v;
        }
        if let Some(v) = cli.pole_eps {
            cfg.pole_epsilon = v;
        }
        if let Some(v) = cli.seed {
            cfg.seed = v;
        }
        if let Some(v) = cli.format {
            cfg.format = v;
        }
        if let Some(v) = &cli.out {
            cfg.out_dir = v.clone();
        }
        if let Some(radii) = &cli.abel_radii {
            cfg.abel_radii = parse_radii(radii)?;
        }
        for spec in &cli.tol {
            let (name, value) = spec
                .split_once('=')
                .ok_or_else(|| format!("--tol expects CHECK=VALUE, got '{spec}'"))?;
            let value: f64 = value
                .parse()
                .map_err(|_| format!("bad tolerance value in '{spec}'"))?;
            cfg.tolerances.insert(name.to_string(), value);
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn apply_file(&mut self, path: &Path) -> Result<(), String> {
        let text =
            fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("{}:{}: expected key=value", path.display(), lineno + 1))?;
            let key = key.trim();
            let value = value.trim();
            let bad = |what: &str| format!("{}:{}: bad {what} '{value}'", path.display(), lineno + 1);
            match key {
                "n_max" => self.n_max = value.parse().map_err(|_| bad("n_max"))?,
                "l_max" => self.l_max = value.parse().map_err(|_| bad("l_max"))?,
                "grid_size" => self.grid_size = value.parse().map_err(|_| bad("grid_size"))?,
                "pole_epsilon" => {
                    self.pole_epsilon = value.parse().map_err(|_| bad("pole_epsilon"))?
                }
                "seed" => self.seed = value.parse().map_err(|_| bad("seed"))?,
                "abel_radii" => self.abel_radii = parse_radii(value)?,
                "format" => {
                    self.format = match value {
                        "csv" => Format::Csv,
                        "json" => Format::Json,
                        _ => return Err(bad("format")),
                    }
                }
                "out_dir" => self.out_dir = PathBuf::from(value),
                _ => {
                    if let Some(name) = key.strip_prefix("tol.") {
                        let v: f64 = value.parse().map_err(|_| bad("tolerance"))?;
                        self.tolerances.insert(name.to_string(), v);
                    } else {
                        return Err(format!(
                            "{}:{}: unknown key '{key}'",
                            path.display(),
                            lineno + 1
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    fn validate(&self) -> Result<(), String> {
        self.verify_params().validate().map_err(|e| e.to_string())
    }

    fn verify_params(&self) -> VerifyParams {
        VerifyParams {
            n_max: self.n_max,
            l_max: self.l_max,
            grid_size: self.grid_size,
            pole_epsilon: self.pole_epsilon,
            abel_radii: self.abel_radii.clone(),
            seed: self.seed,
            tolerances: self.tolerances.clone(),
        }
    }

    fn abel(&self) -> AbelParams {
        AbelParams::new(self.abel_radii.clone(), true).expect("validated radii")
    }

    fn ext(&self) -> &'static str {
        match self.format {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }

    fn out_path(&self, stem: &str) -> Result<PathBuf, String> {
        fs::create_dir_all(&self.out_dir)
            .map_err(|e| format!("cannot create {}: {e}", self.out_dir.display()))?;
        Ok(self.out_dir.join(format!("{stem}.{}", self.ext())))
    }
}

fn parse_radii(text: &str) -> Result<Vec<f64>, String> {
    text.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| format!("bad radius '{t}'")))
        .collect()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match RunConfig::from_cli(&cli) {
        Ok(cfg) => cfg,
        Err(msg) => return config_error(msg),
    };
    let result = match &cli.cmd {
        Cmd::Verify { suite } => cmd_verify(*suite, &cfg, cli.no_timing),
        Cmd::Figure { which } => cmd_figure(*which, &cfg),
        Cmd::Eval { family, theta, y, phi } => cmd_eval(*family, *theta, *y, phi, &cfg),
        Cmd::Operators { name } => cmd_operators(*name, &cfg),
    };
    match result {
        Ok(code) => code,
        Err(msg) => config_error(msg),
    }
}

#[derive(Serialize)]
struct VerifyReportFile<'a> {
    seed: u64,
    params: &'a RunConfig,
    suites: Vec<SuiteReport>,
}

fn cmd_verify(suite: SuiteArg, cfg: &RunConfig, no_timing: bool) -> Result<ExitCode, String> {
    let params = cfg.verify_params();
    let suites: Vec<Suite> = match suite {
        SuiteArg::Weyl => vec![Suite::Weyl],
        SuiteArg::Fockmap => vec![Suite::FockMap],
        SuiteArg::Mub1 => vec![Suite::Mub1],
        SuiteArg::Mub2 => vec![Suite::Mub2],
        SuiteArg::Appendix => vec![Suite::Appendix],
        SuiteArg::All => Suite::all().to_vec(),
    };
    let stem = match suite {
        SuiteArg::All => "report_all".to_string(),
        _ => format!("report_{}", suites[0].name()),
    };
    let mut reports: Vec<SuiteReport> = Vec::new();
    for s in suites {
        let mut rep = run_suite::<f64>(s, &params);
        if no_timing {
            for row in &mut rep.rows {
                row.seconds = 0.0;
            }
        }
        for row in &rep.rows {
            println!(
                "[{}] {} {:50} deviation {:.3e} tolerance {:.1e} ({})",
                rep.suite,
                if row.pass { "pass" } else { "FAIL" },
                row.check,
                row.deviation,
                row.tolerance,
                row.citation,
            );
        }
        reports.push(rep);
    }
    let all_pass = reports.iter().all(|r| r.all_pass());
    let n_rows: usize = reports.iter().map(|r| r.rows.len()).sum();
    let path = cfg.out_path(&stem)?;
    match cfg.format {
        Format::Json => {
            let file = VerifyReportFile {
                seed: cfg.seed,
                params: cfg,
                suites: reports,
            };
            let text = serde_json::to_string_pretty(&file).map_err(|e| e.to_string())?;
            fs::write(&path, text).map_err(|e| e.to_string())?;
        }
        Format::Csv => {
            let mut text = String::from("suite,check,citation,deviation,tolerance,pass,seconds\n");
            for rep in &reports {
                for r in &rep.rows {
                    text.push_str(&format!(
                        "{},{},{},{:e},{:e},{},{}\n",
                        rep.suite, r.check, r.citation, r.deviation, r.tolerance, r.pass, r.seconds
                    ));
                }
            }
            fs::write(&path, text).map_err(|e| e.to_string())?;
        }
    }
    println!(
        "{} checks, {}; report written to {}",
        n_rows,
        if all_pass { "all pass" } else { "FAILURES present" },
        path.display()
    );
    Ok(if all_pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_figure(which: FigureArg, cfg: &RunConfig) -> Result<ExitCode, String> {
    let (kind, stem) = match which {
        FigureArg::Fig3a => (FigureKind::PsiZero, "fig3a"),
        FigureArg::Fig3b => (FigureKind::ChiPlusZero, "fig3b"),
        FigureArg::Fig4a => (FigureKind::PsiHalf, "fig4a"),
        FigureArg::Fig4b => (FigureKind::ChiPlusHalf, "fig4b"),
        FigureArg::Fig4c => (FigureKind::ChiMinusHalf, "fig4c"),
    };
    let rows = figure_dataset(kind, cfg.grid_size, cfg.pole_epsilon, &cfg.abel())
        .map_err(|e| e.to_string())?;
    let path = cfg.out_path(stem)?;
    match cfg.format {
        Format::Csv => {
            let mut text = String::from("phi,re,im,abs\n");
            for r in &rows {
                text.push_str(&format!("{:e},{:e},{:e},{:e}\n", r.phi, r.re, r.im, r.abs));
            }
            fs::write(&path, text).map_err(|e| e.to_string())?;
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Row {
                phi: f64,
                re: f64,
                im: f64,
                abs: f64,
            }
            let out: Vec<Row> = rows
                .iter()
                .map(|r| Row { phi: r.phi, re: r.re, im: r.im, abs: r.abs })
                .collect();
            fs::write(&path, serde_json::to_string_pretty(&out).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
        }
    }
    println!("{} rows written to {}", rows.len(), path.display());
    Ok(ExitCode::SUCCESS)
}

fn cmd_eval(
    family: FamilyArg,
    theta: f64,
    y: f64,
    phis: &[f64],
    cfg: &RunConfig,
) -> Result<ExitCode, String> {
    match family {
        FamilyArg::Stereo => {
            if theta == 0.0 {
                // the theta = 0 element is an angle ket: report its location
                // and weight instead of pointwise values
                let (phi0, amplitude) = theta0_element(y);
                println!("phi0,{phi0:e}");
                println!("amplitude,{amplitude:e}");
                return Ok(ExitCode::SUCCESS);
            }
            let label = StereoMubLabel::new(theta, y).map_err(|e| e.to_string())?;
            println!("phi,re,im,abs");
            for &phi in phis {
                if dist_to_pi(phi) < cfg.pole_epsilon {
                    println!("{phi:e},excluded(pole window),,");
                    continue;
                }
                let v = gamma_wavefunction(&label, phi).map_err(|e| e.to_string())?;
                println!("{phi:e},{:e},{:e},{:e}", v.re, v.im, v.norm());
            }
        }
        FamilyArg::Fock => {
            let label = FockMubLabel::new(theta, y).map_err(|e| e.to_string())?;
            let abel = cfg.abel();
            println!("phi,re,im,abs");
            for &phi in phis {
                if dist_to_pi(phi) < cfg.pole_epsilon {
                    println!("{phi:e},excluded(pole window),,");
                    continue;
                }
                let v = psi_series(&label, phi, &abel).map_err(|e| e.to_string())?;
                println!("{phi:e},{:e},{:e},{:e}", v.re, v.im, v.norm());
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_operators(name: OperatorArg, cfg: &RunConfig) -> Result<ExitCode, String> {
    let trunc = FockTruncation::new(cfg.n_max).map_err(|e| e.to_string())?;
    let op = match name {
        OperatorArg::E => build_e_fock::<f64>(trunc),
        OperatorArg::L => build_l_from_n::<f64>(trunc),
        OperatorArg::A => build_ladder::<f64>(trunc),
        OperatorArg::R => build_projectors_reflection::<f64>(trunc).reflection,
        OperatorArg::Q => build_qp_from_el::<f64>(trunc).0,
        OperatorArg::P => build_qp_from_el::<f64>(trunc).1,
    };
    let tag = match name {
        OperatorArg::E => "E",
        OperatorArg::L => "L",
        OperatorArg::Q => "Q",
        OperatorArg::P => "P",
        OperatorArg::R => "R",
        OperatorArg::A => "A",
    };
    fs::create_dir_all(&cfg.out_dir).map_err(|e| e.to_string())?;
    for basis in [BasisIndexing::FockIndexed, BasisIndexing::LIndexed] {
        let rl = op.relabeled(basis);
        let suffix = match basis {
            BasisIndexing::FockIndexed => "fock",
            BasisIndexing::LIndexed => "l",
        };
        let path = cfg.out_dir.join(format!("{tag}_{suffix}.csv"));
        let mut text = String::from("row,col,re,im\n");
        for (r, c, v) in rl.labeled_entries(0.0) {
            text.push_str(&format!("{r},{c},{:e},{:e}\n", v.re, v.im));
        }
        fs::write(&path, text).map_err(|e| e.to_string())?;
        println!("wrote {}", path.display());
    }
    Ok(ExitCode::SUCCESS)
}

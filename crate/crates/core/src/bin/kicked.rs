use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use kicked_atoms::analytic::{stationary_distribution, QuadratureSpec};
use kicked_atoms::config::{ConfigFile, Settings};
use kicked_atoms::decoherence::{RecoilLaw, SEModel};
use kicked_atoms::ensemble::{Ensemble, InitialDistribution};
use kicked_atoms::error::{Error, Result};
use kicked_atoms::output::{self, fingerprint, Metadata};
use kicked_atoms::reproduce::{reproduce, FigureId, ReproduceOptions};
use kicked_atoms::scan::{run_distribution, run_scan, write_scan, ScanParameter, ScanSpec};

/// Delta-kicked cold atoms: scans, distributions and figure recipes.
#[derive(Parser)]
#[command(name = "kicked", version)]
struct Cli {
    /// TOML config file with flat keys (see README)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Atoms per ensemble
    #[arg(long, global = true)]
    atoms: Option<usize>,
    /// Worker threads (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Directory for output files
    #[arg(long, global = true, default_value = "out")]
    out_dir: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Default)]
struct ParamArgs {
    /// Kicking period in kicked-rotor units
    #[arg(long)]
    tau: Option<f64>,
    /// Kick strength
    #[arg(long)]
    phi_d: Option<f64>,
    /// Number of kicks
    #[arg(long)]
    kicks: Option<usize>,
    /// Mean spontaneous emissions per kick
    #[arg(long)]
    n_se: Option<f64>,
    /// Ladder half-width (default: sized from the headroom rule)
    #[arg(long)]
    n_max: Option<usize>,
    /// Initial FWHM in units of hbar G
    #[arg(long)]
    fwhm: Option<f64>,
    /// Recoil distribution: uniform or two-point
    #[arg(long)]
    recoil_law: Option<RecoilLaw>,
}

#[derive(Args, Default)]
struct DetectArgs {
    #[arg(long, allow_hyphen_values = true)]
    window_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    window_max: Option<f64>,
    /// Per-bin probability floor
    #[arg(long)]
    threshold: Option<f64>,
    /// Renormalize after the cuts
    #[arg(long)]
    renormalize: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum InitialKind {
    Gaussian,
    Delta,
    UnitBin,
}

#[derive(Subcommand)]
enum Command {
    /// Energy after N kicks over a grid of kicking periods
    TauScan {
        #[arg(long, default_value_t = 0.19 * PI, allow_hyphen_values = true)]
        lo: f64,
        #[arg(long, default_value_t = 6.31 * PI)]
        hi: f64,
        #[arg(long, default_value_t = 100)]
        steps: usize,
        /// Scanned parameter: tau, phi_d, n_se_mean or n_kicks
        #[arg(long, default_value = "tau")]
        parameter: ScanParameter,
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        detect: DetectArgs,
    },
    /// Momentum distribution after every kick, with P_s overlay at resonance
    Distribution {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        detect: DetectArgs,
        /// Also write the final state of this atom as CSV (n, re, im)
        #[arg(long, value_name = "ATOM")]
        dump_state: Option<usize>,
    },
    /// Run a figure recipe (fig1a, fig1b, fig2a, fig2b) into a bundle directory
    Reproduce { figure: String },
    /// Stationary distribution at tau = 2 pi by quadrature
    Stationary {
        #[arg(long)]
        phi_d: Option<f64>,
        #[arg(long, default_value_t = -40, allow_hyphen_values = true)]
        n_lo: i64,
        #[arg(long, default_value_t = 40)]
        n_hi: i64,
        #[arg(long, value_enum, default_value_t = InitialKind::Gaussian)]
        initial: InitialKind,
        /// FWHM of the Gaussian initial distribution
        #[arg(long)]
        fwhm: Option<f64>,
        /// Midpoint nodes per axis
        #[arg(long, default_value_t = 512)]
        nodes: usize,
        #[arg(long, default_value_t = 200)]
        order_cutoff: usize,
        #[arg(long)]
        swap_roles: bool,
    },
}

fn overlay(cli: &Cli, params: &ParamArgs, detect: &DetectArgs) -> ConfigFile {
    ConfigFile {
        tau: params.tau,
        phi_d: params.phi_d,
        n_kicks: params.kicks,
        n_se_mean: params.n_se,
        n_max: params.n_max,
        initial_fwhm: params.fwhm,
        recoil_law: params.recoil_law,
        atoms: cli.atoms,
        seed: cli.seed,
        threads: cli.threads,
        window_min: detect.window_min,
        window_max: detect.window_max,
        threshold: detect.threshold,
        renormalize: detect.renormalize.then_some(true),
        ..Default::default()
    }
}

fn settings(cli: &Cli, params: &ParamArgs, detect: &DetectArgs) -> Result<Settings> {
    let file = match &cli.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    file.overlay(overlay(cli, params, detect)).resolve()
}

fn report(paths: &[PathBuf]) {
    for p in paths {
        println!("wrote {}", p.display());
    }
}

fn run(cli: &Cli) -> Result<()> {
    let none = (ParamArgs::default(), DetectArgs::default());
    let (params, detect) = match &cli.command {
        Command::TauScan { params, detect, .. } | Command::Distribution { params, detect, .. } => {
            (params, detect)
        }
        _ => (&none.0, &none.1),
    };
    let s = settings(cli, params, detect)?;
    if let Some(n) = s.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Config(e.to_string()))?;
    }
    let out = &cli.out_dir;

    match &cli.command {
        Command::TauScan {
            lo,
            hi,
            steps,
            parameter,
            ..
        } => {
            let spec = ScanSpec {
                parameter: *parameter,
                lo: *lo,
                hi: *hi,
                steps: *steps,
                base: s.params.clone(),
            };
            let initial = InitialDistribution::gaussian(s.params.initial_fwhm);
            let table = run_scan(&spec, &initial, s.recoil_law, &s.window)?;
            let stem = format!("{}_scan", parameter.name());
            report(&write_scan(&table, out, &stem)?);
            if table.failures() > 0 {
                eprintln!(
                    "{} of {} nodes failed; see the status column",
                    table.failures(),
                    steps
                );
            }
        }
        Command::Distribution { dump_state, .. } => {
            let initial = InitialDistribution::gaussian(s.params.initial_fwhm);
            let run = run_distribution(&s.params, &initial, s.recoil_law, &s.window)?;
            report(&run.write(out, "distribution")?);
            if let Some(atom) = dump_state {
                let se = SEModel::new(s.params.n_se_mean, s.recoil_law)?;
                let ens = Ensemble::new(s.params.clone(), initial, se);
                let state = ens.atom_final_state(*atom)?;
                let path = out.join(format!("state_atom{atom}.csv"));
                output::write_file(&path, |w| {
                    use std::io::Write;
                    writeln!(
                        w,
                        "# fingerprint={} seed={}",
                        ens.fingerprint(),
                        s.params.seed
                    )?;
                    state.write_csv(w)?;
                    Ok(())
                })?;
                report(&[path]);
            }
        }
        Command::Reproduce { figure } => {
            let figure: FigureId = figure.parse()?;
            let opts = ReproduceOptions {
                atoms: cli.atoms,
                seed: s.params.seed,
                recoil_law: s.recoil_law,
                out_dir: out.clone(),
            };
            let bundle = reproduce(figure, &opts)?;
            report(&bundle.files);
            print!(
                "{}",
                std::fs::read_to_string(bundle.dir.join("summary.txt"))?
            );
        }
        Command::Stationary {
            phi_d,
            n_lo,
            n_hi,
            initial,
            fwhm,
            nodes,
            order_cutoff,
            swap_roles,
        } => stationary(
            out,
            s.params.seed,
            phi_d.unwrap_or(s.params.phi_d),
            *n_lo..=*n_hi,
            match initial {
                InitialKind::Gaussian => {
                    InitialDistribution::gaussian(fwhm.unwrap_or(s.params.initial_fwhm))
                }
                InitialKind::Delta => InitialDistribution::delta(),
                InitialKind::UnitBin => InitialDistribution::unit_bin(),
            },
            QuadratureSpec {
                nodes: *nodes,
                order_cutoff: *order_cutoff,
                swap_roles: *swap_roles,
            },
        )?,
    }
    Ok(())
}

fn stationary(
    out: &Path,
    seed: u64,
    phi_d: f64,
    range: std::ops::RangeInclusive<i64>,
    h: InitialDistribution,
    spec: QuadratureSpec,
) -> Result<()> {
    let start = std::time::Instant::now();
    let ps = stationary_distribution(phi_d, &h, range.clone(), &spec)?;
    let identity = serde_json::json!({
        "phi_d": phi_d,
        "n_range": [range.start(), range.end()],
        "initial": h,
        "quadrature": spec,
    });
    let fp = fingerprint(&identity);
    let csv = out.join("stationary.csv");
    output::write_file(&csv, |w| output::write_stationary(w, &ps, &fp, seed))?;
    let json = out.join("stationary.json");
    let meta = Metadata::new(
        fp,
        seed,
        start.elapsed().as_secs_f64(),
        serde_json::json!({
            "phi_d": phi_d,
            "n_range": [range.start(), range.end()],
            "initial": h,
            "quadrature": spec,
            "refined_nodes": 2 * spec.nodes,
            "max_shift_under_doubling": ps.max_shift,
        }),
    );
    output::write_json(&json, &meta)?;
    report(&[csv, json]);
    Ok(())
}

fn exit_code(e: &Error) -> u8 {
    match e {
        _ if e.is_numerical() => 3,
        Error::Io(_) | Error::Json(_) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

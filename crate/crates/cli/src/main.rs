//! `enbs` — headless driver for the fringe-scan and collective-mode
//! models. Every subcommand emits CSV or JSON on stdout (or to
//! `--output`), with seeds echoed so runs are reproducible
//! byte-for-byte.
//!
//! Exit codes: 0 success, 2 flag/usage error, 1 numeric or guard
//! failure inside the models.

mod output;
mod units;

use std::f64::consts::TAU;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64 as C64;
use serde::Serialize;

use enbs_core::enbs::{
    oracle_reduced_density, prepared_phase, reduced_density, wrap_to_pi, EnbsConfig,
};
use enbs_core::io::{fringe_csv, pairs_csv, spectrum_csv};
use enbs_core::scan::{
    bloch_map, comb_spectrum, fit_fringe, photon_budget, run_scan, three_scan_equivalence,
    CombSpec, NoiseSpec, ScanSpec, ScanTarget,
};
use enbs_core::unified::{
    dirichlet_profile, g2_profile, slit_bright_occupation, DirichletSpec, G2Input, SlitSpec,
};
use output::{json_envelope, Format, OutputArgs};

#[derive(Parser)]
#[command(
    name = "enbs",
    version,
    about = "Fringe scans, bright/dark mode profiles, and Fock-space cross-checks \
             for coherently seeded photon-pair sources"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep one phase knob and emit the fringe dataset
    Scan(ScanArgs),
    /// Run pump, seed and signal scans from one base and compare fits
    ThreeScan(ThreeScanArgs),
    /// Map a scanned fringe onto the equatorial circle
    Bloch(BlochArgs),
    /// Closed-form reduced density vs the Fock-space oracle
    Oracle(OracleArgs),
    /// M-source interference profile over a detection-phase grid
    Dirichlet(DirichletArgs),
    /// Discretized single-slit bright-mode occupation profile
    Slit(SlitArgs),
    /// Second-order correlation across the slit pattern
    G2(G2Args),
    /// Pulse-train power spectrum with flagged harmonics
    Spectrum(SpectrumArgs),
    /// Time-bin and photon-count budget of an integration window
    Budget(BudgetArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TargetArg {
    Pump,
    Seed,
    Signal,
}

impl From<TargetArg> for ScanTarget {
    fn from(t: TargetArg) -> Self {
        match t {
            TargetArg::Pump => ScanTarget::Pump,
            TargetArg::Seed => ScanTarget::Seed,
            TargetArg::Signal => ScanTarget::Signal,
        }
    }
}

/// Seed amplitudes, gains and input phases of the two sources.
#[derive(Args, Debug)]
struct SourceArgs {
    /// Seed amplitude applied to both sources
    #[arg(long, default_value_t = 10.0)]
    alpha: f64,
    /// Override the first seed amplitude
    #[arg(long)]
    alpha1: Option<f64>,
    /// Override the second seed amplitude
    #[arg(long)]
    alpha2: Option<f64>,
    /// Gain applied to both sources, in (0, 0.2]
    #[arg(long, default_value_t = 0.01)]
    r: f64,
    #[arg(long)]
    r1: Option<f64>,
    #[arg(long)]
    r2: Option<f64>,
    /// Pump input phases (rad)
    #[arg(long, default_value_t = 0.0)]
    phi_p1: f64,
    #[arg(long, default_value_t = 0.0)]
    phi_p2: f64,
    /// Seed input phases (rad)
    #[arg(long, default_value_t = 0.0)]
    phi_sd1: f64,
    #[arg(long, default_value_t = 0.0)]
    phi_sd2: f64,
}

impl SourceArgs {
    fn config(&self) -> Result<EnbsConfig, enbs_core::Error> {
        EnbsConfig::new(
            C64::new(self.alpha1.unwrap_or(self.alpha), 0.0),
            C64::new(self.alpha2.unwrap_or(self.alpha), 0.0),
            self.r1.unwrap_or(self.r),
            self.r2.unwrap_or(self.r),
            self.phi_p1,
            self.phi_p2,
            self.phi_sd1,
            self.phi_sd2,
        )
    }
}

#[derive(Args)]
struct ScanArgs {
    /// Which phase to sweep
    #[arg(long, value_enum)]
    target: TargetArg,
    #[command(flatten)]
    source: SourceArgs,
    /// Sweep range (rad); stop is excluded from the grid
    #[arg(long, default_value_t = 0.0)]
    start: f64,
    #[arg(long, default_value_t = TAU)]
    stop: f64,
    #[arg(long, default_value_t = 100)]
    steps: usize,
    /// Fixed signal phase while pump or seed is swept (rad)
    #[arg(long, default_value_t = 0.0)]
    phi_s0: f64,
    /// Mean counts per frame; enables Poisson counting noise
    #[arg(long, requires = "seed")]
    noise: Option<f64>,
    /// Additive background counts per frame
    #[arg(long, requires = "noise")]
    background: Option<f64>,
    /// RNG seed (required whenever noise is enabled)
    #[arg(long)]
    seed: Option<u64>,
}

impl ScanArgs {
    fn to_spec(&self) -> Result<ScanSpec, enbs_core::Error> {
        Ok(ScanSpec {
            target: self.target.into(),
            start: self.start,
            stop: self.stop,
            steps: self.steps,
            base: self.source.config()?,
            phi_s0: self.phi_s0,
            noise: self.noise.map(|mean| NoiseSpec {
                frames_mean_counts: mean,
                rng_seed: self.seed.expect("clap enforces --seed with --noise"),
                background_counts: self.background.unwrap_or(0.0),
            }),
        })
    }
}

#[derive(Args)]
struct ThreeScanArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long, default_value_t = 360)]
    steps: usize,
}

#[derive(Args)]
struct BlochArgs {
    #[command(flatten)]
    scan: ScanArgs,
    /// Ring radius; defaults to 1.04 (pump), 0.96 (seed), 1.0 (signal)
    #[arg(long)]
    ring_radius: Option<f64>,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    source: SourceArgs,
}

#[derive(Args)]
struct DirichletArgs {
    /// Number of sources, 2..=64
    #[arg(long = "M", visible_alias = "sources")]
    m: usize,
    /// Grid size over [delta-min, delta-max], endpoints included
    #[arg(long, default_value_t = 720)]
    points: usize,
    #[arg(long, default_value_t = -TAU, allow_hyphen_values = true)]
    delta_min: f64,
    #[arg(long, default_value_t = TAU, allow_hyphen_values = true)]
    delta_max: f64,
}

/// Slit geometry and observation grid shared by `slit` and `g2`.
#[derive(Args)]
struct SlitGeomArgs {
    /// Slit width (length, e.g. 50um)
    #[arg(long, value_parser = units::parse_length, default_value = "50um")]
    width: f64,
    /// Optical wavelength (length, e.g. 807nm)
    #[arg(long, value_parser = units::parse_length, default_value = "807nm")]
    wavelength: f64,
    /// Midpoint segments discretizing the slit
    #[arg(long, default_value_t = 1024)]
    segments: usize,
    #[arg(long, default_value_t = -0.05, allow_hyphen_values = true)]
    theta_min: f64,
    #[arg(long, default_value_t = 0.05, allow_hyphen_values = true)]
    theta_max: f64,
    /// Observation angles over [theta-min, theta-max], endpoints included
    #[arg(long, default_value_t = 501)]
    points: usize,
    /// Cover the diffraction range +-beta instead of the theta range
    #[arg(long)]
    beta_max: Option<f64>,
}

impl SlitGeomArgs {
    fn to_spec(&self) -> Result<SlitSpec, enbs_core::Error> {
        if self.points < 2 {
            return Err(enbs_core::Error::InvalidParameter(
                "need at least 2 grid points".into(),
            ));
        }
        let wavenumber_k = TAU / self.wavelength;
        let (lo, hi) = match self.beta_max {
            Some(beta) => {
                let sin_theta = beta / (0.5 * wavenumber_k * self.width);
                if !(0.0..=1.0).contains(&sin_theta) {
                    return Err(enbs_core::Error::InvalidParameter(format!(
                        "beta-max {beta} is unreachable for this slit"
                    )));
                }
                let theta = sin_theta.asin();
                (-theta, theta)
            }
            None => (self.theta_min, self.theta_max),
        };
        let angles = (0..self.points)
            .map(|i| lo + (hi - lo) * i as f64 / (self.points - 1) as f64)
            .collect();
        Ok(SlitSpec {
            width_b: self.width,
            wavenumber_k,
            segments_k: self.segments,
            angles,
        })
    }
}

#[derive(Args)]
struct SlitArgs {
    #[command(flatten)]
    geom: SlitGeomArgs,
}

#[derive(Args)]
#[command(group(ArgGroup::new("input").required(true)))]
struct G2Args {
    #[command(flatten)]
    geom: SlitGeomArgs,
    /// Photon number of a Fock-state input
    #[arg(long, group = "input")]
    fock: Option<usize>,
    /// Amplitude of a coherent-state input
    #[arg(long, group = "input")]
    coherent_alpha: Option<f64>,
}

#[derive(Args)]
struct SpectrumArgs {
    /// Repetition rate (frequency, e.g. 250MHz)
    #[arg(long, value_parser = units::parse_freq, default_value = "250MHz")]
    f_rep: f64,
    #[arg(long, default_value_t = 64)]
    n_pulses: usize,
    #[arg(long, default_value_t = 32)]
    samples_per_period: usize,
    /// Gaussian pulse width (time, e.g. 200ps)
    #[arg(long, value_parser = units::parse_time, default_value = "200ps")]
    pulse_width: f64,
    /// RMS per-pulse carrier phase jitter (rad); requires --seed
    #[arg(long, requires = "seed")]
    phase_noise_rms: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    amplitude: f64,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct BudgetArgs {
    /// Mean photon occupancy per time bin
    #[arg(long)]
    occupancy: f64,
    /// Integration time (e.g. 10ms)
    #[arg(long, value_parser = units::parse_time)]
    t_int: f64,
    /// Repetition rate (e.g. 250MHz)
    #[arg(long, value_parser = units::parse_freq)]
    f_rep: f64,
}

#[derive(Serialize)]
struct OracleSide {
    visibility: f64,
    coherence_phase_rad: f64,
    rho11: f64,
    rho22: f64,
}

#[derive(Serialize)]
struct OracleReport {
    analytic: OracleSide,
    oracle: OracleSide,
    visibility_diff: f64,
    phase_diff_rad: f64,
}

#[derive(Serialize)]
struct BlochReport {
    ring_radius: f64,
    fit: enbs_core::scan::FitResult,
    points: Vec<(f64, f64)>,
}

type RunResult = Result<(), Box<dyn std::error::Error>>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap exits 0 for --help/--version, 2 for usage errors
            e.exit();
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> RunResult {
    let out = &cli.out;
    match &cli.command {
        Command::Scan(args) => {
            let spec = args.to_spec()?;
            let dataset = run_scan(&spec)?;
            let rendered = match out.format {
                Format::Csv => fringe_csv(&dataset),
                Format::Json => json_envelope("scan", args.seed, &dataset)?,
            };
            out.emit(&rendered)?;
        }
        Command::ThreeScan(args) => {
            let base = args.source.config()?;
            let report = three_scan_equivalence(&base, args.steps)?;
            eprintln!(
                "three-scan: V(pump) = {:.4}, V(seed) = {:.4}, V(signal) = {:.4}; \
                 spread = {:.2e}, reflection residual = {:.2e}",
                report.pump.visibility,
                report.seed.visibility,
                report.signal.visibility,
                report.visibility_spread,
                report.reflection_residual,
            );
            let rendered = match out.format {
                Format::Csv => {
                    let mut s = String::from("target,visibility,delta_rad,offset,rms_residual\n");
                    for (name, fit) in [
                        ("pump", &report.pump),
                        ("seed", &report.seed),
                        ("signal", &report.signal),
                    ] {
                        s.push_str(&format!(
                            "{},{},{},{},{}\n",
                            name, fit.visibility, fit.delta, fit.offset, fit.rms_residual
                        ));
                    }
                    s
                }
                Format::Json => json_envelope("three-scan", None, &report)?,
            };
            out.emit(&rendered)?;
        }
        Command::Bloch(args) => {
            let spec = args.scan.to_spec()?;
            let dataset = run_scan(&spec)?;
            let fit = fit_fringe(&dataset)?;
            let radius = args.ring_radius.unwrap_or(match spec.target {
                ScanTarget::Pump => 1.04,
                ScanTarget::Seed => 0.96,
                ScanTarget::Signal => 1.0,
            });
            let points = bloch_map(&dataset, &fit, radius);
            let rendered = match out.format {
                Format::Csv => pairs_csv("x,y", &points),
                Format::Json => json_envelope(
                    "bloch",
                    args.scan.seed,
                    &BlochReport {
                        ring_radius: radius,
                        fit,
                        points,
                    },
                )?,
            };
            out.emit(&rendered)?;
        }
        Command::Oracle(args) => {
            let cfg = args.source.config()?;
            let analytic = reduced_density(&cfg)?;
            let oracle = oracle_reduced_density(&cfg)?;
            let side = |d: &enbs_core::SignalDensity| -> Result<OracleSide, enbs_core::Error> {
                Ok(OracleSide {
                    visibility: d.visibility()?,
                    coherence_phase_rad: d.coherence.arg(),
                    rho11: d.rho11,
                    rho22: d.rho22,
                })
            };
            let a = side(&analytic)?;
            let o = side(&oracle)?;
            let report = OracleReport {
                visibility_diff: (a.visibility - o.visibility).abs(),
                phase_diff_rad: wrap_to_pi(a.coherence_phase_rad - o.coherence_phase_rad).abs(),
                analytic: a,
                oracle: o,
            };
            eprintln!(
                "oracle check: analytic V = {:.4}, oracle V = {:.4}, |dV| = {:.2e}, \
                 prepared phase = {:.4} rad",
                report.analytic.visibility,
                report.oracle.visibility,
                report.visibility_diff,
                prepared_phase(&cfg),
            );
            let rendered = match out.format {
                Format::Csv => {
                    let mut s = String::from("path,visibility,coherence_phase_rad,rho11,rho22\n");
                    for (name, sd) in [("analytic", &report.analytic), ("oracle", &report.oracle)] {
                        s.push_str(&format!(
                            "{},{},{},{},{}\n",
                            name, sd.visibility, sd.coherence_phase_rad, sd.rho11, sd.rho22
                        ));
                    }
                    s
                }
                Format::Json => json_envelope("oracle", None, &report)?,
            };
            out.emit(&rendered)?;
        }
        Command::Dirichlet(args) => {
            if args.points < 2 {
                return Err(Box::new(enbs_core::Error::InvalidParameter(
                    "need at least 2 grid points".into(),
                )));
            }
            let grid = (0..args.points)
                .map(|i| {
                    args.delta_min
                        + (args.delta_max - args.delta_min) * i as f64 / (args.points - 1) as f64
                })
                .collect();
            let spec = DirichletSpec {
                sources_m: args.m,
                delta_grid: grid,
            };
            let profile = dirichlet_profile(&spec)?;
            let rendered = match out.format {
                Format::Csv => pairs_csv("delta_rad,p_bright", &profile),
                Format::Json => json_envelope("dirichlet", None, &profile)?,
            };
            out.emit(&rendered)?;
        }
        Command::Slit(args) => {
            let spec = args.geom.to_spec()?;
            let profile = slit_bright_occupation(&spec)?;
            let rendered = match out.format {
                Format::Csv => pairs_csv("theta_rad,p0", &profile),
                Format::Json => json_envelope("slit", None, &profile)?,
            };
            out.emit(&rendered)?;
        }
        Command::G2(args) => {
            let spec = args.geom.to_spec()?;
            let input = match (args.fock, args.coherent_alpha) {
                (Some(n), None) => G2Input::Fock(n),
                (None, Some(alpha)) => G2Input::Coherent(C64::new(alpha, 0.0)),
                _ => unreachable!("clap group enforces exactly one input"),
            };
            let profile = g2_profile(input, &spec)?;
            let rendered = match out.format {
                Format::Csv => pairs_csv("theta_rad,g2", &profile),
                Format::Json => json_envelope("g2", None, &profile)?,
            };
            out.emit(&rendered)?;
        }
        Command::Spectrum(args) => {
            let spec = CombSpec {
                f_rep: args.f_rep,
                n_pulses: args.n_pulses,
                samples_per_period: args.samples_per_period,
                pulse_width: args.pulse_width,
                carrier_phase_noise_rms: args.phase_noise_rms.unwrap_or(0.0),
                amplitude: args.amplitude,
                rng_seed: args.seed.unwrap_or(0),
            };
            let points = comb_spectrum(&spec)?;
            let rendered = match out.format {
                Format::Csv => spectrum_csv(&points),
                Format::Json => json_envelope("spectrum", args.seed, &points)?,
            };
            out.emit(&rendered)?;
        }
        Command::Budget(args) => {
            let budget = photon_budget(args.occupancy, args.t_int, args.f_rep)?;
            eprintln!(
                "budget: {} bins, {} expected counts",
                budget.bins, budget.expected_counts
            );
            let rendered = match out.format {
                Format::Csv => format!(
                    "bins,expected_counts\n{},{}\n",
                    budget.bins, budget.expected_counts
                ),
                Format::Json => json_envelope("budget", None, &budget)?,
            };
            out.emit(&rendered)?;
        }
    }
    Ok(())
}

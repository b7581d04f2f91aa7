//! `kgsol` — reproducible runs of the internal-mode radiation pipeline.
//!
//! Subcommands: `constants`, `evolve`, `shoot`, `track`, `fit`, `radiation`.
//! Every run directory receives the resolved configuration (TOML, including
//! the tool version) next to its outputs, so a run is reproducible from the
//! directory alone. The pipeline is deterministic: identical configuration
//! gives bit-identical outputs on one platform.
//!
//! Exit codes: 0 success; 20 blowup branch; 21 dispersal branch;
//! 22 numerical fault (clap keeps 2 for usage errors).

use clap::{Args, Parser, Subcommand};
use kg_soliton::analysis::{
    combined_gamma, fit_damping, fit_frequency_shift, radiation_compare, track_peaks,
};
use kg_soliton::evolver::{Evolver, EvolverConfig, ExitStatus, ObserverSpec, Records};
use kg_soliton::grid::Grid;
use kg_soliton::normalform::{compute_constants, ConstantsReport};
use kg_soliton::threshold::{renormalized_evolve, shoot, ShootSettings};
use kg_soliton::{io, spectral};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const EXIT_BLOWUP: u8 = 20;
const EXIT_DISPERSAL: u8 = 21;
const EXIT_FAULT: u8 = 22;

/// JSON reports carry the schema (= tool) version.
#[derive(Serialize)]
struct Versioned<T: Serialize> {
    schema_version: &'static str,
    #[serde(flatten)]
    payload: T,
}

fn versioned<T: Serialize>(payload: T) -> Versioned<T> {
    Versioned {
        schema_version: env!("CARGO_PKG_VERSION"),
        payload,
    }
}

/// Resolved configuration of one run; written beside every output.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct RunConfig {
    version: String,
    eps: f64,
    t_end: f64,
    t_corr: f64,
    fit_window: [f64; 2],
    probes: Vec<f64>,
    probe_stride: usize,
    projection_stride: usize,
    energy_stride: usize,
    /// The pipeline uses no randomness; kept explicit and fixed true.
    deterministic: bool,
    evolver: EvolverConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            version: env!("CARGO_PKG_VERSION").to_string(),
            eps: 0.2,
            t_end: 2000.0,
            t_corr: 20.0,
            fit_window: [200.0, 2000.0],
            probes: vec![0.0, 50.0],
            probe_stride: 1,
            projection_stride: 50,
            energy_stride: 0,
            deterministic: true,
            evolver: EvolverConfig::default(),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "kgsol",
    version,
    about = "Radiation damping of the soliton internal mode in the 1D quadratic Klein-Gordon equation",
    after_help = "CSV columns: probe_<x>.csv (t,u); projections.csv (t,a,b,eta_norm); \
                  snapshot.csv (x,u,v); eta_snapshot.csv (x,eta); fields (x,value) or (x,re,im).\n\
                  Exit codes: 0 ok, 20 blowup branch, 21 dispersal branch, 22 numerical fault."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonOpts {
    /// TOML config file; flags override its values
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (created if missing)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Compute every normal-form constant two ways and print the table
    Constants {
        #[command(flatten)]
        common: CommonOpts,
        /// Spectral grid spacing
        #[arg(long, default_value_t = 0.05)]
        dx: f64,
        /// Spectral grid half-width
        #[arg(long, default_value_t = 50.0)]
        l_dom: f64,
    },
    /// Evolve u(0) = eps psi + b0 xi once, with observers
    Evolve {
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long)]
        eps: Option<f64>,
        /// Unstable-mode coefficient, or "auto" for the second-order estimate
        #[arg(long, default_value = "auto")]
        b0: String,
        #[arg(long)]
        t_end: Option<f64>,
    },
    /// Bisect b0 to the blowup/dispersion threshold
    Shoot {
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long)]
        eps: Option<f64>,
        /// Bisection tolerance on the bracket width
        #[arg(long, default_value_t = 1e-16)]
        tol_b: f64,
    },
    /// Renormalized evolution: repeated shooting every t_corr
    Track {
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        t_end: Option<f64>,
        #[arg(long)]
        t_corr: Option<f64>,
        /// Also write probe/projection CSVs sliced per correction segment
        #[arg(long)]
        per_segment: bool,
    },
    /// Fit the damping law and frequency shift of a recorded run
    Fit {
        #[command(flatten)]
        common: CommonOpts,
        /// Run directory produced by evolve/track
        #[arg(long)]
        run: PathBuf,
        /// Fit window (t_min t_max)
        #[arg(long, num_args = 2)]
        window: Option<Vec<f64>>,
        /// Probe position whose series to fit
        #[arg(long, default_value_t = 0.0)]
        probe_x: f64,
    },
    /// Compare recorded radiation against the second-order backreaction
    Radiation {
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long)]
        run: PathBuf,
        /// Probe position of the radiation series
        #[arg(long, default_value_t = 50.0)]
        probe_x: f64,
        /// Analysis window start (defaults to the last 15% of the run)
        #[arg(long)]
        t_min: Option<f64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_FAULT)
        }
    }
}

fn load_config(common: &CommonOpts) -> Result<RunConfig, kg_soliton::Error> {
    let mut config = match &common.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            toml::from_str(&text)
                .map_err(|e| kg_soliton::Error::InvalidConfig(format!("{}: {e}", path.display())))?
        }
        None => RunConfig::default(),
    };
    if !config.deterministic {
        return Err(kg_soliton::Error::InvalidConfig(
            "the pipeline is random-free; deterministic must stay true".into(),
        ));
    }
    config.version = env!("CARGO_PKG_VERSION").to_string();
    Ok(config)
}

fn prepare_out(
    common: &CommonOpts,
    config: &RunConfig,
) -> Result<Option<PathBuf>, kg_soliton::Error> {
    let Some(dir) = &common.out else {
        return Ok(None);
    };
    std::fs::create_dir_all(dir)?;
    let text = toml::to_string_pretty(config)
        .map_err(|e| kg_soliton::Error::InvalidConfig(format!("config serialization: {e}")))?;
    std::fs::write(dir.join("config.toml"), text)?;
    Ok(Some(dir.clone()))
}

fn probe_file(dir: &Path, x: f64) -> PathBuf {
    dir.join(format!("probe_{x}.csv"))
}

fn write_run_outputs(
    dir: &Path,
    ev: &Evolver,
    records: &Records,
    probes: &[f64],
    final_state: Option<&kg_soliton::evolver::FieldState>,
) -> Result<(), kg_soliton::Error> {
    for (i, &x) in probes.iter().enumerate() {
        io::write_series_csv(
            &probe_file(dir, x),
            ("t", "u"),
            &records.probe_times,
            &records.probe_values[i],
        )?;
    }
    io::write_projections_csv(&dir.join("projections.csv"), &records.projections)?;
    if !records.energy.is_empty() {
        let (ts, es): (Vec<f64>, Vec<f64>) = records.energy.iter().cloned().unzip();
        io::write_series_csv(&dir.join("energy.csv"), ("t", "E"), &ts, &es)?;
    }
    if let Some(state) = final_state {
        let xs = ev.grid().points();
        let u = ev.full_line(&state.u);
        let v = ev.full_line(&state.v);
        let mut w = std::io::BufWriter::new(std::fs::File::create(dir.join("snapshot.csv"))?);
        use std::io::Write;
        writeln!(w, "x,u,v")?;
        for ((x, u), v) in xs.iter().zip(&u).zip(&v) {
            writeln!(w, "{x:.17e},{u:.17e},{v:.17e}")?;
        }
        let (a, b, _) = ev.project_modes(state);
        let eta: Vec<f64> = xs
            .iter()
            .zip(&u)
            .map(|(&x, &uu)| uu - a * spectral::psi(x) - b * spectral::xi(x))
            .collect();
        io::write_field_csv(&dir.join("eta_snapshot.csv"), xs, &eta)?;
    }
    Ok(())
}

fn observers(config: &RunConfig) -> ObserverSpec {
    ObserverSpec {
        probes: config.probes.clone(),
        probe_stride: config.probe_stride,
        projection_stride: config.projection_stride,
        energy_stride: config.energy_stride,
    }
}

/// Slices the concatenated records at the correction timestamps and writes
/// per-segment probe/projection CSVs under `segments/`.
fn write_per_segment(
    dir: &Path,
    records: &Records,
    probes: &[f64],
    segments: &[kg_soliton::threshold::SegmentInfo],
    t_end: f64,
) -> Result<(), kg_soliton::Error> {
    let seg_dir = dir.join("segments");
    std::fs::create_dir_all(&seg_dir)?;
    for (k, seg) in segments.iter().enumerate() {
        let t_hi = segments.get(k + 1).map(|s| s.t_start).unwrap_or(t_end);
        let idx: Vec<usize> = records
            .probe_times
            .iter()
            .enumerate()
            .filter(|(_, &t)| t >= seg.t_start && t < t_hi)
            .map(|(i, _)| i)
            .collect();
        let ts: Vec<f64> = idx.iter().map(|&i| records.probe_times[i]).collect();
        for (p, &x) in probes.iter().enumerate() {
            let us: Vec<f64> = idx.iter().map(|&i| records.probe_values[p][i]).collect();
            io::write_series_csv(
                &seg_dir.join(format!("seg{k:04}_probe_{x}.csv")),
                ("t", "u"),
                &ts,
                &us,
            )?;
        }
        let proj: Vec<kg_soliton::evolver::ProjectionSample> = records
            .projections
            .iter()
            .filter(|s| s.t >= seg.t_start && s.t < t_hi)
            .cloned()
            .collect();
        io::write_projections_csv(&seg_dir.join(format!("seg{k:04}_projections.csv")), &proj)?;
    }
    Ok(())
}

fn dispatch(cli: Cli) -> Result<ExitCode, kg_soliton::Error> {
    match cli.command {
        Command::Constants { common, dx, l_dom } => {
            let config = load_config(&common)?;
            let out = prepare_out(&common, &config)?;
            let grid = Grid::new(l_dom, dx, 6)?;
            let report = compute_constants(&grid)?;
            print_constants_table(&report);
            if let Some(dir) = out {
                io::write_json(&dir.join("constants.json"), &versioned(constants_json(&report)))?;
                let xs = report.grid.points();
                io::write_field_csv(&dir.join("soliton.csv"), xs, report.modes.soliton())?;
                io::write_field_csv(&dir.join("psi.csv"), xs, report.modes.psi())?;
                io::write_field_csv(&dir.join("xi.csv"), xs, report.modes.xi())?;
                io::write_field_csv(&dir.join("chi.csv"), xs, report.modes.chi())?;
                io::write_complex_field_csv(&dir.join("f1.csv"), xs, &report.profiles.f1)?;
                io::write_field_csv(&dir.join("f2.csv"), xs, &report.profiles.f2)?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Evolve {
            common,
            eps,
            b0,
            t_end,
        } => {
            let mut config = load_config(&common)?;
            if let Some(e) = eps {
                config.eps = e;
            }
            if let Some(t) = t_end {
                config.t_end = t;
            }
            let out = prepare_out(&common, &config)?;
            let ev = Evolver::new(config.evolver.clone())?;
            let b0 = match b0.as_str() {
                "auto" => kg_soliton::threshold::manifold_b0_estimate(config.eps),
                s => s
                    .parse::<f64>()
                    .map_err(|_| kg_soliton::Error::InvalidConfig(format!("bad b0: {s}")))?,
            };
            let mut state = ev.init_state(config.eps, b0);
            let mut records = Records::default();
            let exit = ev.evolve(&mut state, config.t_end, &observers(&config), &mut records);
            if let Some(dir) = &out {
                write_run_outputs(dir, &ev, &records, &config.probes, Some(&state))?;
            }
            match exit {
                ExitStatus::Blowup { t, max_abs } => {
                    println!("blowup branch: |u| = {max_abs:.3} at t = {t:.3}");
                    Ok(ExitCode::from(EXIT_BLOWUP))
                }
                ExitStatus::Completed => {
                    let dispersed = records.projections.iter().any(|p| p.b < -0.5);
                    let (a, b, eta) = ev.project_modes(&state);
                    println!(
                        "completed t = {:.1}: a = {a:.6e}, b = {b:.6e}, ||eta|| = {eta:.6e}",
                        state.t
                    );
                    if dispersed {
                        println!("dispersal branch: <xi,u> crossed -0.5 during the run");
                        Ok(ExitCode::from(EXIT_DISPERSAL))
                    } else {
                        Ok(ExitCode::SUCCESS)
                    }
                }
            }
        }
        Command::Shoot { common, eps, tol_b } => {
            let mut config = load_config(&common)?;
            if let Some(e) = eps {
                config.eps = e;
            }
            let out = prepare_out(&common, &config)?;
            let ev = Evolver::new(config.evolver.clone())?;
            let settings = ShootSettings {
                tol_b,
                ..Default::default()
            };
            let result = shoot(&ev, config.eps, &settings)?;
            println!(
                "b* = {:.12e}  bracket ({:.3e}, {:.3e})  {} evaluations",
                result.b_star, result.bracket.0, result.bracket.1, result.evaluations
            );
            if let Some(dir) = out {
                io::write_json(&dir.join("shoot.json"), &versioned(result))?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Track {
            common,
            eps,
            t_end,
            t_corr,
            per_segment,
        } => {
            let mut config = load_config(&common)?;
            if let Some(e) = eps {
                config.eps = e;
            }
            if let Some(t) = t_end {
                config.t_end = t;
            }
            if let Some(tc) = t_corr {
                config.t_corr = tc;
            }
            let out = prepare_out(&common, &config)?;
            let ev = Evolver::new(config.evolver.clone())?;
            let run = renormalized_evolve(
                &ev,
                config.eps,
                config.t_end,
                config.t_corr,
                &observers(&config),
                &ShootSettings::default(),
            )?;
            println!(
                "tracked eps = {} to t = {} with {} corrections (b0 = {:.9e})",
                run.eps,
                config.t_end,
                run.segments.len(),
                run.b0
            );
            if let Some(dir) = &out {
                write_run_outputs(
                    dir,
                    &ev,
                    &run.records,
                    &config.probes,
                    Some(&run.final_state),
                )?;
                if per_segment {
                    write_per_segment(
                        dir,
                        &run.records,
                        &config.probes,
                        &run.segments,
                        config.t_end,
                    )?;
                }
                #[derive(Serialize)]
                struct Manifest<'a> {
                    eps: f64,
                    t_corr: f64,
                    b0: f64,
                    completed: bool,
                    segments: &'a [kg_soliton::threshold::SegmentInfo],
                }
                io::write_json(
                    &dir.join("manifest.json"),
                    &versioned(Manifest {
                        eps: run.eps,
                        t_corr: run.t_corr,
                        b0: run.b0,
                        completed: run.exit == ExitStatus::Completed,
                        segments: &run.segments,
                    }),
                )?;
            }
            match run.exit {
                ExitStatus::Completed => Ok(ExitCode::SUCCESS),
                ExitStatus::Blowup { t, .. } => {
                    eprintln!("run left the manifold (blowup at t = {t:.2})");
                    Ok(ExitCode::from(EXIT_BLOWUP))
                }
            }
        }
        Command::Fit {
            common,
            run,
            window,
            probe_x,
        } => {
            let config = load_config(&common)?;
            let out = prepare_out(&common, &config)?;
            let window = match window {
                Some(w) => (w[0], w[1]),
                None => (config.fit_window[0], config.fit_window[1]),
            };
            let (ts, us) = io::read_series_csv(&probe_file(&run, probe_x))?;
            let peaks = track_peaks(&ts, &us, probe_x)?;
            let psi0 = spectral::psi(probe_x);
            let damping = fit_damping(&peaks, psi0, window)?;
            let freq = fit_frequency_shift(&peaks, window)?;
            let gamma_fit = combined_gamma(&damping, &freq);
            #[derive(Serialize)]
            struct FitReport {
                window: (f64, f64),
                peaks: usize,
                damping: kg_soliton::analysis::DampingFit,
                frequency: kg_soliton::analysis::FrequencyFit,
                gamma_fit: f64,
            }
            let report = FitReport {
                window,
                peaks: peaks.times.len(),
                damping,
                frequency: freq,
                gamma_fit,
            };
            println!(
                "Gamma_fit = {:.6}  eps_fit = {:.5}  gamma_fit = {:.6}  (window {:?}, {} peaks, residual rms {:.2e})",
                damping.gamma_big, damping.eps, gamma_fit, window, report.peaks, damping.fit.residual_rms
            );
            if let Some(dir) = out {
                io::write_json(&dir.join("fit.json"), &versioned(report))?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Radiation {
            common,
            run,
            probe_x,
            t_min,
        } => {
            let config = load_config(&common)?;
            let out = prepare_out(&common, &config)?;
            let run_config: RunConfig = {
                let text = std::fs::read_to_string(run.join("config.toml"))?;
                toml::from_str(&text)
                    .map_err(|e| kg_soliton::Error::InvalidConfig(format!("run config: {e}")))?
            };
            let (ts, us) = io::read_series_csv(&probe_file(&run, probe_x))?;
            let t_end = ts.last().copied().unwrap_or(0.0);
            let t_lo = t_min.unwrap_or(0.85 * t_end);
            let sel: Vec<usize> = (0..ts.len()).filter(|&i| ts[i] > t_lo).collect();
            let times: Vec<f64> = sel.iter().map(|&i| ts[i]).collect();
            let eta: Vec<f64> = sel.iter().map(|&i| us[i]).collect();
            let (snap_x, snap_eta) = io::read_series_csv(&run.join("eta_snapshot.csv"))?;
            let keep: Vec<usize> = (0..snap_x.len())
                .filter(|&i| snap_x[i] > 20.0 && snap_x[i] < 65.0)
                .collect();
            let sx: Vec<f64> = keep.iter().map(|&i| snap_x[i]).collect();
            let se: Vec<f64> = keep.iter().map(|&i| snap_eta[i]).collect();
            let report_grid = Grid::spectral_default();
            let constants = compute_constants(&report_grid)?;
            let report = radiation_compare(
                &times,
                &eta,
                report_grid.index_of(probe_x),
                &sx,
                &se,
                run_config.eps,
                &constants.profiles,
                &constants.constants,
            );
            println!(
                "carrier frequency {:.5} (2 omega = {:.5}), wavenumber {:.5} (sqrt 2 = {:.5})",
                report.carrier_frequency,
                2.0 * kg_soliton::OMEGA,
                report.carrier_wavenumber,
                kg_soliton::P_RES
            );
            println!(
                "amplitude ratio {:.3} at time offset {:.3} (rms mismatch {:.1}%)",
                report.amplitude_ratio,
                report.time_offset,
                100.0 * report.rms_mismatch
            );
            if let Some(dir) = out {
                io::write_json(&dir.join("radiation.json"), &versioned(&report))?;
                // comparison curves for external plotting
                let model_at = |t: f64, x: f64| -> f64 {
                    let g = &constants.grid;
                    let (rr, theta) = kg_soliton::normalform::predict_amplitude_phase(
                        run_config.eps,
                        t,
                        &constants.constants,
                    );
                    let ((f1r, f1i), f2x) = if x.abs() <= g.half_width() {
                        let i = g.index_of(x);
                        let f1 = constants.profiles.f1[i];
                        ((f1.re, f1.im), constants.profiles.f2[i])
                    } else {
                        // outgoing continuation e^{ip(|x|-L)} beyond the grid
                        let edge = constants.profiles.f1[g.len() - 1];
                        let d = kg_soliton::P_RES * (x.abs() - g.half_width());
                        (
                            (
                                edge.re * d.cos() - edge.im * d.sin(),
                                edge.re * d.sin() + edge.im * d.cos(),
                            ),
                            0.0,
                        )
                    };
                    // 2 Re[f1 e^{-i phi}] with phi = 2 (omega t - theta)
                    let phi = 2.0 * (kg_soliton::OMEGA * t - theta);
                    rr * rr * (2.0 * (f1r * phi.cos() + f1i * phi.sin()) + f2x)
                };
                let model_t: Vec<f64> = times
                    .iter()
                    .map(|&t| model_at(t + report.time_offset, probe_x))
                    .collect();
                let mut w =
                    std::io::BufWriter::new(std::fs::File::create(dir.join("comparison_t.csv"))?);
                use std::io::Write;
                writeln!(w, "t,eta_measured,eta_model")?;
                for ((t, m), md) in times.iter().zip(&eta).zip(&model_t) {
                    writeln!(w, "{t:.17e},{m:.17e},{md:.17e}")?;
                }
                let t_snap = run_config.t_end + report.time_offset;
                let mut w =
                    std::io::BufWriter::new(std::fs::File::create(dir.join("comparison_x.csv"))?);
                writeln!(w, "x,eta_measured,eta_model")?;
                for (x, m) in sx.iter().zip(&se) {
                    writeln!(w, "{x:.17e},{m:.17e},{:.17e}", model_at(t_snap, *x))?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

#[derive(Serialize)]
struct ConstantsJson {
    coupling: kg_soliton::normalform::CouplingConstants,
    constants: kg_soliton::normalform::NormalFormConstants,
    golden_rule: kg_soliton::normalform::GoldenRule,
    f1_residual: f64,
    f2_residual: f64,
    f1_farfield: f64,
    grid: GridJson,
}

#[derive(Serialize)]
struct GridJson {
    dx: f64,
    half_width: f64,
    stencil_order: usize,
}

fn constants_json(report: &ConstantsReport) -> ConstantsJson {
    ConstantsJson {
        coupling: report.coupling.clone(),
        constants: report.constants.clone(),
        golden_rule: report.golden,
        f1_residual: report.profiles.f1_residual,
        f2_residual: report.profiles.f2_residual,
        f1_farfield: report.constants.f1_farfield(),
        grid: GridJson {
            dx: report.grid.dx(),
            half_width: report.grid.half_width(),
            stencil_order: report.grid.stencil_order(),
        },
    }
}

fn print_constants_table(report: &ConstantsReport) {
    let c = &report.constants;
    println!("coupling constants (quadrature | closed form):");
    let closed = kg_soliton::normalform::coupling_closed_forms();
    for (name, (q, cf)) in ["c1", "c2", "c3", "c4"]
        .iter()
        .zip(report.coupling.quadrature.iter().zip(&closed))
    {
        println!(
            "  {name} = {q:+.12} | {cf:+.12}  (dev {:.2e})",
            (q - cf).abs()
        );
    }
    println!(
        "  beta1 = {:+.9}  beta2 = {:+.9}",
        report.coupling.beta1, report.coupling.beta2
    );
    println!("normal-form constants (value [provenance], closed form | quadrature, deviation):");
    for (name, t) in [
        ("gamma1", &c.gamma1),
        ("gamma2", &c.gamma2),
        ("gamma3", &c.gamma3),
        ("Gamma ", &c.big_gamma),
        ("gamma ", &c.gamma),
    ] {
        let dev = t
            .deviation()
            .map(|d| format!("{d:.2e}"))
            .unwrap_or_else(|| "-".into());
        println!(
            "  {name} = {:.9} [{:?}]  cf {} | quad {}  dev {dev}",
            t.value,
            t.provenance,
            t.closed_form
                .map(|v| format!("{v:.9}"))
                .unwrap_or_else(|| "-".into()),
            t.quadrature
                .map(|v| format!("{v:.9}"))
                .unwrap_or_else(|| "-".into()),
        );
    }
    println!(
        "golden rule: closed {:.9} | matrix element {:.9}  (dev {:.2e})",
        report.golden.closed_form,
        report.golden.quadrature,
        (report.golden.closed_form - report.golden.quadrature).abs()
    );
    println!(
        "profiles: |f1(inf)| = {:.9} (predicted {:.9}), residuals f1 {:.2e}, f2 {:.2e}",
        0.5 * (report.profiles.f1[0].norm()
            + report.profiles.f1[report.profiles.f1.len() - 1].norm()),
        c.f1_farfield(),
        report.profiles.f1_residual,
        report.profiles.f2_residual
    );
}

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use nlcoupler::coupler::{classify_regime, classify_regime_spectral};
use nlcoupler::optimizer::{onset_length, optimize_over_z, tail_statistics};
use nlcoupler::sweep::{
    optima_csv, parse_quantities, plot_path, plot_script, run_figure, run_sweep, FigureOptions,
    Preset, Quantity, SweepConfig,
};
use nlcoupler::{Error, Result};

#[derive(Parser)]
#[command(
    name = "nlcoupler",
    version,
    about = "Squeezing and entanglement in a nonlinear directional coupler"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep the coupler length and tabulate the requested quantities.
    Sweep {
        #[command(flatten)]
        opts: CommonArgs,
        /// Comma-separated subset of lambda, en, regime, dphi_opt.
        #[arg(long)]
        quantities: Option<String>,
    },
    /// Reproduce one of the figure presets (fig2 ... fig6).
    Figure {
        #[arg(value_parser = parse_preset)]
        preset: Preset,
        #[command(flatten)]
        opts: CommonArgs,
    },
    /// Optimal phase difference and maximal log-negativity along the length.
    OptimizePhase {
        #[command(flatten)]
        opts: CommonArgs,
    },
    /// Report the operating regime and the drift-matrix eigenvalues.
    Classify {
        #[command(flatten)]
        opts: CommonArgs,
    },
}

#[derive(Args)]
struct CommonArgs {
    #[arg(long)]
    gl_mag: Option<f64>,
    #[arg(long)]
    ga_mag: Option<f64>,
    #[arg(long)]
    gb_mag: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    phi_l: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    phi_a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    phi_b: Option<f64>,
    /// Effective phase difference φ_A − φ_B + 2φ_L.
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["phi_l", "phi_a", "phi_b"])]
    dphi: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    z_min: Option<f64>,
    #[arg(long)]
    z_max: Option<f64>,
    #[arg(long)]
    z_points: Option<usize>,
    /// Output CSV path (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// `key = value` config file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Also write a gnuplot script `<out>.gp` (requires --out).
    #[arg(long)]
    emit_plot: bool,
    #[arg(long)]
    coarse_n: Option<usize>,
    #[arg(long)]
    refine_tol: Option<f64>,
}

fn parse_preset(s: &str) -> std::result::Result<Preset, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

impl CommonArgs {
    fn config(&self, quantities: Option<Vec<Quantity>>) -> Result<SweepConfig> {
        let base = match &self.config {
            Some(path) => SweepConfig::load(path)?,
            None => SweepConfig::default(),
        };
        let flags = SweepConfig {
            gl_mag: self.gl_mag,
            ga_mag: self.ga_mag,
            gb_mag: self.gb_mag,
            phi_l: self.phi_l,
            phi_a: self.phi_a,
            phi_b: self.phi_b,
            dphi: self.dphi,
            z_min: self.z_min,
            z_max: self.z_max,
            z_points: self.z_points,
            quantities,
            out: self.out.clone(),
            coarse_n: self.coarse_n,
            refine_tol: self.refine_tol,
        };
        let merged = base.overlay(flags);
        if self.emit_plot && merged.out.is_none() {
            return Err(Error::Usage("--emit-plot requires --out".into()));
        }
        Ok(merged)
    }
}

fn write_output(out: Option<&Path>, csv: &str, emit_plot: bool) -> Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, csv)
                .map_err(|e| Error::Io(format!("cannot write {}: {e}", path.display())))?;
            if emit_plot {
                let gp = plot_path(path);
                std::fs::write(&gp, plot_script(path, csv))
                    .map_err(|e| Error::Io(format!("cannot write {}: {e}", gp.display())))?;
            }
        }
        None => print!("{csv}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Sweep { opts, quantities } => {
            let quantities = quantities.as_deref().map(parse_quantities).transpose()?;
            let spec = opts.config(quantities)?.build()?;
            let csv = run_sweep(&spec)?;
            write_output(spec.out.as_deref(), &csv, opts.emit_plot)
        }
        Command::Figure { preset, opts } => {
            let cfg = opts.config(None)?;
            let defaults = FigureOptions::default();
            let fig = FigureOptions {
                z_min: cfg.z_min.unwrap_or(defaults.z_min),
                z_max: cfg.z_max.unwrap_or(defaults.z_max),
                z_points: cfg.z_points.unwrap_or(defaults.z_points),
                coarse_n: cfg.coarse_n.unwrap_or(defaults.coarse_n),
                refine_tol: cfg.refine_tol.unwrap_or(defaults.refine_tol),
            };
            let csv = run_figure(preset, &fig)?;
            write_output(cfg.out.as_deref(), &csv, opts.emit_plot)
        }
        Command::OptimizePhase { opts } => {
            let spec = opts.config(None)?.build()?;
            let optima = optimize_over_z(
                spec.params.magnitudes(),
                &spec.grid(),
                spec.coarse_n,
                spec.refine_tol,
            )?;
            write_output(spec.out.as_deref(), &optima_csv(&optima), opts.emit_plot)?;
            match onset_length(&optima, spec.refine_tol) {
                Some(z0) => eprintln!("z0 = {z0}"),
                None => eprintln!("z0 = none"),
            }
            if let Some((mean, sd)) = tail_statistics(&optima) {
                eprintln!("tail dphi_opt: mean = {mean}, std = {sd}");
            }
            Ok(())
        }
        Command::Classify { opts } => {
            let params = opts.config(None)?.params()?.coupler()?;
            let regime = classify_regime(&params);
            let spectral = classify_regime_spectral(&params)?;
            println!("regime: {}", regime.kind);
            println!("margin: {}", regime.margin);
            println!("eigenvalues:");
            for z in spectral.eigenvalues.roots() {
                println!("  {:+.12e} {:+.12e}i", z.re, z.im);
            }
            println!("spectral regime: {}", spectral.kind);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

//! Parameter sweeps over the propagation length and their CSV rendering.
//!
//! CSV output is comma-separated with a lowercase header, reals in
//! scientific notation with 12 significant digits and `\n` line endings.
//! Rows are evaluated in parallel and always emitted in grid order.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;

use crate::coupler::{canonical_phase, classify_regime, CouplerParams, CouplingMagnitudes};
use crate::dynamics::{evolved_vacuum, squeeze_variance};
use crate::entanglement::log_negativity;
use crate::error::{Error, Result};
use crate::optimizer::{
    optimize_over_z, optimize_phase, PhaseOptimum, DEFAULT_COARSE_N, DEFAULT_REFINE_TOL,
};

pub const DEFAULT_Z_MIN: f64 = 0.0;
pub const DEFAULT_Z_MAX: f64 = 3.0;
pub const DEFAULT_Z_POINTS: usize = 301;

/// The three phase differences shown in the figure presets.
pub const PRESET_PHASES: [(f64, &str); 3] = [(0.0, "0"), (FRAC_PI_2, "pi_2"), (PI, "pi")];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantity {
    Lambda,
    En,
    Regime,
    DphiOpt,
}

impl Quantity {
    pub fn name(&self) -> &'static str {
        match self {
            Quantity::Lambda => "lambda",
            Quantity::En => "en",
            Quantity::Regime => "regime",
            Quantity::DphiOpt => "dphi_opt",
        }
    }

    fn is_numeric(&self) -> bool {
        !matches!(self, Quantity::Regime)
    }
}

impl FromStr for Quantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "lambda" => Ok(Quantity::Lambda),
            "en" => Ok(Quantity::En),
            "regime" => Ok(Quantity::Regime),
            "dphi_opt" => Ok(Quantity::DphiOpt),
            other => Err(Error::Usage(format!(
                "unknown quantity '{other}' (expected lambda, en, regime or dphi_opt)"
            ))),
        }
    }
}

pub fn parse_quantities(s: &str) -> Result<Vec<Quantity>> {
    let qs = s
        .split(',')
        .filter(|t| !t.trim().is_empty())
        .map(Quantity::from_str)
        .collect::<Result<Vec<_>>>()?;
    if qs.is_empty() {
        return Err(Error::Usage("quantities must not be empty".into()));
    }
    Ok(qs)
}

/// Coupler given either by all six parameters or by magnitudes and `Δφ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParamSpec {
    Full(CouplerParams),
    Effective { mags: CouplingMagnitudes, dphi: f64 },
}

impl ParamSpec {
    pub fn magnitudes(&self) -> CouplingMagnitudes {
        match self {
            ParamSpec::Full(p) => p.magnitudes(),
            ParamSpec::Effective { mags, .. } => *mags,
        }
    }

    pub fn coupler(&self) -> Result<CouplerParams> {
        match *self {
            ParamSpec::Full(p) => Ok(p),
            ParamSpec::Effective { mags, dphi } => CouplerParams::with_effective_phase(mags, dphi),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub params: ParamSpec,
    pub z_min: f64,
    pub z_max: f64,
    pub z_points: usize,
    pub quantities: Vec<Quantity>,
    pub out: Option<PathBuf>,
    pub coarse_n: usize,
    pub refine_tol: f64,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.z_min.is_finite() && self.z_max.is_finite()) {
            return Err(Error::invalid("z range must be finite"));
        }
        if self.z_min < 0.0 {
            return Err(Error::invalid(format!(
                "z_min must be >= 0, got {}",
                self.z_min
            )));
        }
        if !(self.z_min < self.z_max) {
            return Err(Error::invalid(format!(
                "z_min ({}) must be smaller than z_max ({})",
                self.z_min, self.z_max
            )));
        }
        if self.z_points < 2 {
            return Err(Error::invalid(format!(
                "z_points must be at least 2, got {}",
                self.z_points
            )));
        }
        if self.quantities.is_empty() {
            return Err(Error::invalid("quantities must not be empty"));
        }
        self.params.coupler()?;
        Ok(())
    }

    pub fn grid(&self) -> Vec<f64> {
        z_grid(self.z_min, self.z_max, self.z_points)
    }

    /// Serializes to the `key = value` config format; parsing the result
    /// yields an identical spec.
    pub fn to_config(&self) -> String {
        let mut s = String::new();
        let mags = self.params.magnitudes();
        let _ = writeln!(s, "gl_mag = {:?}", mags.gl);
        let _ = writeln!(s, "ga_mag = {:?}", mags.ga);
        let _ = writeln!(s, "gb_mag = {:?}", mags.gb);
        match self.params {
            ParamSpec::Full(p) => {
                let _ = writeln!(s, "phi_l = {:?}", p.phi_l());
                let _ = writeln!(s, "phi_a = {:?}", p.phi_a());
                let _ = writeln!(s, "phi_b = {:?}", p.phi_b());
            }
            ParamSpec::Effective { dphi, .. } => {
                let _ = writeln!(s, "dphi = {dphi:?}");
            }
        }
        let _ = writeln!(s, "z_min = {:?}", self.z_min);
        let _ = writeln!(s, "z_max = {:?}", self.z_max);
        let _ = writeln!(s, "z_points = {}", self.z_points);
        let names: Vec<&str> = self.quantities.iter().map(Quantity::name).collect();
        let _ = writeln!(s, "quantities = {}", names.join(","));
        if let Some(out) = &self.out {
            let _ = writeln!(s, "out = {}", out.display());
        }
        let _ = writeln!(s, "coarse_n = {}", self.coarse_n);
        let _ = writeln!(s, "refine_tol = {:?}", self.refine_tol);
        s
    }
}

/// Partially specified sweep, as read from a config file or the command
/// line. Later layers override earlier ones via [`SweepConfig::overlay`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SweepConfig {
    pub gl_mag: Option<f64>,
    pub ga_mag: Option<f64>,
    pub gb_mag: Option<f64>,
    pub phi_l: Option<f64>,
    pub phi_a: Option<f64>,
    pub phi_b: Option<f64>,
    pub dphi: Option<f64>,
    pub z_min: Option<f64>,
    pub z_max: Option<f64>,
    pub z_points: Option<usize>,
    pub quantities: Option<Vec<Quantity>>,
    pub out: Option<PathBuf>,
    pub coarse_n: Option<usize>,
    pub refine_tol: Option<f64>,
}

fn parse_value<T: FromStr>(key: &str, value: &str, line: usize) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Usage(format!("line {line}: invalid value '{value}' for {key}")))
}

impl SweepConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut c = SweepConfig::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| Error::Usage(format!("line {line}: expected 'key = value'")))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "gl_mag" => c.gl_mag = Some(parse_value(key, value, line)?),
                "ga_mag" => c.ga_mag = Some(parse_value(key, value, line)?),
                "gb_mag" => c.gb_mag = Some(parse_value(key, value, line)?),
                "phi_l" => c.phi_l = Some(parse_value(key, value, line)?),
                "phi_a" => c.phi_a = Some(parse_value(key, value, line)?),
                "phi_b" => c.phi_b = Some(parse_value(key, value, line)?),
                "dphi" => c.dphi = Some(parse_value(key, value, line)?),
                "z_min" => c.z_min = Some(parse_value(key, value, line)?),
                "z_max" => c.z_max = Some(parse_value(key, value, line)?),
                "z_points" => c.z_points = Some(parse_value(key, value, line)?),
                "quantities" => c.quantities = Some(parse_quantities(value)?),
                "out" => c.out = Some(PathBuf::from(value)),
                "coarse_n" => c.coarse_n = Some(parse_value(key, value, line)?),
                "refine_tol" => c.refine_tol = Some(parse_value(key, value, line)?),
                other => return Err(Error::Usage(format!("line {line}: unknown key '{other}'"))),
            }
        }
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    fn has_explicit_phases(&self) -> bool {
        self.phi_l.is_some() || self.phi_a.is_some() || self.phi_b.is_some()
    }

    /// Fields set in `top` win. Phases are replaced as a group: any phase
    /// given in `top` (explicit or `dphi`) discards all phases of `self`.
    pub fn overlay(self, top: SweepConfig) -> SweepConfig {
        let phases_from_top = top.has_explicit_phases() || top.dphi.is_some();
        let (phi_l, phi_a, phi_b, dphi) = if phases_from_top {
            (top.phi_l, top.phi_a, top.phi_b, top.dphi)
        } else {
            (self.phi_l, self.phi_a, self.phi_b, self.dphi)
        };
        SweepConfig {
            gl_mag: top.gl_mag.or(self.gl_mag),
            ga_mag: top.ga_mag.or(self.ga_mag),
            gb_mag: top.gb_mag.or(self.gb_mag),
            phi_l,
            phi_a,
            phi_b,
            dphi,
            z_min: top.z_min.or(self.z_min),
            z_max: top.z_max.or(self.z_max),
            z_points: top.z_points.or(self.z_points),
            quantities: top.quantities.or(self.quantities),
            out: top.out.or(self.out),
            coarse_n: top.coarse_n.or(self.coarse_n),
            refine_tol: top.refine_tol.or(self.refine_tol),
        }
    }

    pub fn magnitudes(&self) -> Result<CouplingMagnitudes> {
        CouplingMagnitudes::new(
            self.gl_mag.unwrap_or(0.0),
            self.ga_mag.unwrap_or(0.0),
            self.gb_mag.unwrap_or(0.0),
        )
    }

    pub fn params(&self) -> Result<ParamSpec> {
        let mags = self.magnitudes()?;
        match (self.dphi, self.has_explicit_phases()) {
            (Some(_), true) => Err(Error::Usage(
                "dphi cannot be combined with phi_l, phi_a or phi_b".into(),
            )),
            (Some(dphi), false) => {
                if !dphi.is_finite() {
                    return Err(Error::invalid(format!("dphi must be finite, got {dphi}")));
                }
                Ok(ParamSpec::Effective {
                    mags,
                    dphi: canonical_phase(dphi),
                })
            }
            (None, _) => Ok(ParamSpec::Full(CouplerParams::from_magnitudes(
                mags,
                self.phi_l.unwrap_or(0.0),
                self.phi_a.unwrap_or(0.0),
                self.phi_b.unwrap_or(0.0),
            )?)),
        }
    }

    pub fn build(self) -> Result<SweepSpec> {
        let spec = SweepSpec {
            params: self.params()?,
            z_min: self.z_min.unwrap_or(DEFAULT_Z_MIN),
            z_max: self.z_max.unwrap_or(DEFAULT_Z_MAX),
            z_points: self.z_points.unwrap_or(DEFAULT_Z_POINTS),
            quantities: self
                .quantities
                .unwrap_or_else(|| vec![Quantity::Lambda, Quantity::En]),
            out: self.out,
            coarse_n: self.coarse_n.unwrap_or(DEFAULT_COARSE_N),
            refine_tol: self.refine_tol.unwrap_or(DEFAULT_REFINE_TOL),
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// Uniform grid of `n ≥ 2` points with both endpoints hit exactly.
pub fn z_grid(z_min: f64, z_max: f64, n: usize) -> Vec<f64> {
    let last = n.saturating_sub(1).max(1);
    let step = (z_max - z_min) / last as f64;
    (0..n)
        .map(|k| {
            if k == last {
                z_max
            } else {
                z_min + k as f64 * step
            }
        })
        .collect()
}

/// Renders a real with 12 significant digits; `-0` prints as `0`.
pub fn format_real(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.11e}")
}

/// `(λ, E_N)` of the evolved vacuum.
pub fn lambda_and_en(p: &CouplerParams, z: f64) -> Result<(f64, f64)> {
    let v = evolved_vacuum(p, z)?;
    Ok((squeeze_variance(&v)?, log_negativity(&v)?.log_neg))
}

fn csv_from_rows(header: &[String], rows: Vec<Vec<String>>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn run_sweep(spec: &SweepSpec) -> Result<String> {
    spec.validate()?;
    let params = spec.params.coupler()?;
    let regime = classify_regime(&params).kind.label();
    let mags = spec.params.magnitudes();
    let needs_state = spec
        .quantities
        .iter()
        .any(|q| matches!(q, Quantity::Lambda | Quantity::En));

    let rows = spec
        .grid()
        .par_iter()
        .map(|&z| -> Result<Vec<String>> {
            let state = if needs_state {
                Some(lambda_and_en(&params, z)?)
            } else {
                None
            };
            let mut row = vec![format_real(z)];
            for q in &spec.quantities {
                row.push(match q {
                    Quantity::Lambda => format_real(state.map_or(0.0, |s| s.0)),
                    Quantity::En => format_real(state.map_or(0.0, |s| s.1)),
                    Quantity::Regime => regime.to_string(),
                    Quantity::DphiOpt => format_real(
                        optimize_phase(mags, z, spec.coarse_n, spec.refine_tol)?.dphi_opt,
                    ),
                });
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut header = vec!["z".to_string()];
    header.extend(spec.quantities.iter().map(|q| q.name().to_string()));
    Ok(csv_from_rows(&header, rows))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
}

impl Preset {
    pub const ALL: [Preset; 5] = [
        Preset::Fig2,
        Preset::Fig3,
        Preset::Fig4,
        Preset::Fig5,
        Preset::Fig6,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Preset::Fig2 => "fig2",
            Preset::Fig3 => "fig3",
            Preset::Fig4 => "fig4",
            Preset::Fig5 => "fig5",
            Preset::Fig6 => "fig6",
        }
    }

    /// Coupling magnitudes of the preset; fig2/fig4/fig6 are below
    /// threshold, fig3/fig5 above.
    pub fn magnitudes(&self) -> CouplingMagnitudes {
        match self {
            Preset::Fig2 | Preset::Fig4 | Preset::Fig6 => CouplingMagnitudes::BELOW_THRESHOLD,
            Preset::Fig3 | Preset::Fig5 => CouplingMagnitudes::ABOVE_THRESHOLD,
        }
    }

    pub fn column_names(&self) -> Vec<String> {
        let mut cols = vec!["z".to_string()];
        match self {
            Preset::Fig2 | Preset::Fig3 => cols.extend(
                PRESET_PHASES
                    .iter()
                    .map(|(_, n)| format!("lambda_dphi_{n}")),
            ),
            Preset::Fig4 | Preset::Fig5 => {
                cols.extend(PRESET_PHASES.iter().map(|(_, n)| format!("en_dphi_{n}")))
            }
            Preset::Fig6 => cols.extend(["dphi_opt".to_string(), "en_max".to_string()]),
        }
        cols
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Usage(format!("unknown figure preset '{s}'")))
    }
}

/// Grid and optimizer settings shared by all presets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FigureOptions {
    pub z_min: f64,
    pub z_max: f64,
    pub z_points: usize,
    pub coarse_n: usize,
    pub refine_tol: f64,
}

impl Default for FigureOptions {
    fn default() -> Self {
        FigureOptions {
            z_min: DEFAULT_Z_MIN,
            z_max: DEFAULT_Z_MAX,
            z_points: DEFAULT_Z_POINTS,
            coarse_n: DEFAULT_COARSE_N,
            refine_tol: DEFAULT_REFINE_TOL,
        }
    }
}

pub fn run_figure(preset: Preset, opts: &FigureOptions) -> Result<String> {
    let spec = SweepSpec {
        params: ParamSpec::Effective {
            mags: preset.magnitudes(),
            dphi: 0.0,
        },
        z_min: opts.z_min,
        z_max: opts.z_max,
        z_points: opts.z_points,
        quantities: vec![Quantity::Lambda],
        out: None,
        coarse_n: opts.coarse_n,
        refine_tol: opts.refine_tol,
    };
    spec.validate()?;
    let grid = spec.grid();
    let mags = preset.magnitudes();

    let rows = match preset {
        Preset::Fig6 => optimize_over_z(mags, &grid, opts.coarse_n, opts.refine_tol)?
            .into_iter()
            .map(|o| {
                vec![
                    format_real(o.z),
                    format_real(o.dphi_opt),
                    format_real(o.en_max),
                ]
            })
            .collect(),
        _ => {
            let params = PRESET_PHASES
                .iter()
                .map(|&(d, _)| CouplerParams::with_effective_phase(mags, d))
                .collect::<Result<Vec<_>>>()?;
            let want_lambda = matches!(preset, Preset::Fig2 | Preset::Fig3);
            grid.par_iter()
                .map(|&z| -> Result<Vec<String>> {
                    let mut row = vec![format_real(z)];
                    for p in &params {
                        let (lambda, en) = lambda_and_en(p, z)?;
                        row.push(format_real(if want_lambda { lambda } else { en }));
                    }
                    Ok(row)
                })
                .collect::<Result<Vec<_>>>()?
        }
    };
    Ok(csv_from_rows(&preset.column_names(), rows))
}

/// CSV with columns `z,dphi_opt,en_max,evaluations`.
pub fn optima_csv(optima: &[PhaseOptimum]) -> String {
    let header: Vec<String> = ["z", "dphi_opt", "en_max", "evaluations"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let rows = optima
        .iter()
        .map(|o| {
            vec![
                format_real(o.z),
                format_real(o.dphi_opt),
                format_real(o.en_max),
                o.evaluations.to_string(),
            ]
        })
        .collect();
    csv_from_rows(&header, rows)
}

/// Companion gnuplot script plotting every numeric column against `z`.
pub fn plot_script(csv_path: &Path, csv: &str) -> String {
    let header: Vec<&str> = csv.lines().next().unwrap_or("").split(',').collect();
    let numeric: Vec<(usize, &str)> = header
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, name)| Quantity::from_str(name).map_or(true, |q| q.is_numeric()))
        .map(|(i, n)| (i + 1, *n))
        .collect();
    let file = csv_path
        .file_name()
        .map(|f| f.to_string_lossy().into_owned())
        .unwrap_or_default();
    let mut s = String::new();
    let _ = writeln!(s, "set datafile separator ','");
    let _ = writeln!(s, "set key autotitle columnhead");
    let _ = writeln!(s, "set xlabel 'z'");
    let _ = writeln!(s, "set terminal pngcairo size 900,600");
    let _ = writeln!(s, "set output '{}.png'", file.trim_end_matches(".csv"));
    let plots: Vec<String> = numeric
        .iter()
        .map(|(col, name)| format!("'{file}' using 1:{col} with lines title '{name}'"))
        .collect();
    let _ = writeln!(s, "plot {}", plots.join(", \\\n     "));
    s
}

/// Path of the plot script written next to `csv_path`.
pub fn plot_path(csv_path: &Path) -> PathBuf {
    let mut name = csv_path.as_os_str().to_owned();
    name.push(".gp");
    PathBuf::from(name)
}

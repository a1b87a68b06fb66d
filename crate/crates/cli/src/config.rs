//! Resolved run configuration: defaults, then a preset, then a JSON file,
//! then command-line flags.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, ValueEnum};
use gaborlab::counterexamples::{gamma_threshold, LatticeKind, PairKind, Sign};
use gaborlab::spectral::{EigenStrategy, SolverOptions};
use gaborlab::{Mask, TfGrid};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::UsageError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum SignalSource {
    /// A member of the counterexample pair selected by `kind` and `sign`.
    Pair,
    /// The normalized Gaussian `phi`.
    Gaussian,
    /// The zero signal.
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum WeightSource {
    /// `|G f|^p` of the configured signal.
    Spectrogram,
    /// Two bumps joined by a thin corridor.
    Dumbbell,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum MaskShape {
    Full,
    /// Disc of radius `r` around `(mask_center_x, mask_center_w)`.
    Disc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum CutFamily {
    Vertical,
    Circle,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Perturbation {
    /// `w' = perturb_factor * w`.
    Scale,
    /// `w' = w (1 + perturb_factor sin(pi x) sin(pi omega))`.
    Sine,
    /// `w' = |G f_sign|^p` with `gamma = perturb_factor * gamma_0(a, r, delta)`.
    Fpm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    Fig1a,
    Fig1b,
    Fig2,
    Gaussian,
    Dumbbell,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub w_min: f64,
    pub w_max: f64,
    pub nx: usize,
    pub nw: usize,
}

impl GridSpec {
    pub fn square(half: f64, n: usize) -> Self {
        Self { x_min: -half, x_max: half, w_min: -half, w_max: half, nx: n, nw: n }
    }

    pub fn build(&self) -> gaborlab::Result<TfGrid> {
        TfGrid::new(self.x_min, self.x_max, self.w_min, self.w_max, self.nx, self.nw)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub signal: SignalSource,
    pub kind: PairKind,
    pub sign: Sign,
    pub a: f64,
    pub gamma: f64,
    pub tau: f64,
    pub theta: f64,
    /// Spectrograms are sampled at `x_reflect - x` when set.
    pub x_reflect: Option<f64>,
    /// Radius `R` of the disc mask and of the threshold strip.
    pub r: f64,
    pub delta: f64,
    /// Exponent of the spectral weight `|G f|^p`.
    pub p: f64,
    /// Exponent used by `dnorm` and `probe`.
    pub dnorm_p: f64,
    pub s: f64,
    pub k: u8,
    pub q: Option<f64>,
    pub dnorm_consistent_powers: bool,
    pub grid: GridSpec,
    pub weight: WeightSource,
    pub mask: MaskShape,
    pub mask_center_x: f64,
    pub mask_center_w: f64,
    pub floor_rel: f64,
    pub separation: f64,
    pub bridge_height: f64,
    pub bump_sigma: f64,
    pub bridge_width: f64,
    pub m: usize,
    pub solver: SolverOptions,
    pub lattice: Option<LatticeKind>,
    pub lattice_offset: f64,
    pub line_samples: usize,
    pub line_k_min: i64,
    pub line_k_max: i64,
    pub tol: f64,
    pub noneq_floor: f64,
    pub strip_samples: usize,
    pub root_k_min: i64,
    pub root_k_max: i64,
    pub perturbation: Perturbation,
    pub perturb_factor: f64,
    pub refine_fields: usize,
    pub refine_k: usize,
    pub seed: u64,
    pub cuts: CutFamily,
    pub cut_count: usize,
    pub chain_slack: f64,
    pub out_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            signal: SignalSource::Pair,
            kind: PairKind::Fpm,
            sign: Sign::Plus,
            a: 0.5,
            gamma: (-5.0 * std::f64::consts::PI).exp(),
            tau: 0.0,
            theta: 0.0,
            x_reflect: None,
            r: 3.0,
            delta: 1.0,
            p: 2.0,
            dnorm_p: 1.0,
            s: 1.0,
            k: 1,
            q: None,
            dnorm_consistent_powers: false,
            grid: GridSpec::square(4.0, 121),
            weight: WeightSource::Spectrogram,
            mask: MaskShape::Full,
            mask_center_x: 0.0,
            mask_center_w: 0.0,
            floor_rel: 1e-60,
            separation: 5.0,
            bridge_height: 0.05,
            bump_sigma: 0.5,
            bridge_width: 0.5 / 12.0,
            m: 5,
            solver: SolverOptions::default(),
            lattice: None,
            lattice_offset: 0.0,
            line_samples: 401,
            line_k_min: -12,
            line_k_max: 12,
            tol: 1e-9,
            noneq_floor: 1e-12,
            strip_samples: 401,
            root_k_min: -3,
            root_k_max: 3,
            perturbation: Perturbation::Fpm,
            perturb_factor: 0.9,
            refine_fields: 50,
            refine_k: 2,
            seed: 7,
            cuts: CutFamily::Vertical,
            cut_count: 101,
            chain_slack: 10.0,
            out_dir: PathBuf::from("out"),
        }
    }
}

impl Preset {
    pub fn apply(self, cfg: &mut RunConfig) {
        match self {
            Preset::Fig1a | Preset::Fig1b => {
                let a = 1.0 / 6.0;
                cfg.signal = SignalSource::Pair;
                cfg.kind = PairKind::Hpm;
                cfg.sign = Sign::Plus;
                cfg.a = a;
                cfg.tau = if self == Preset::Fig1b { 0.1 } else { 0.0 };
                cfg.x_reflect = Some(1.0 / (2.0 * a));
                cfg.grid = GridSpec { x_min: -3.0, x_max: 9.0, w_min: -3.0, w_max: 3.0, nx: 241, nw: 121 };
            }
            Preset::Fig2 => {
                cfg.signal = SignalSource::Pair;
                cfg.kind = PairKind::Fpm;
                cfg.sign = Sign::Plus;
                cfg.a = 0.5;
                cfg.gamma = (-5.0 * std::f64::consts::PI).exp();
                cfg.r = 3.0;
                cfg.delta = 1.0;
                cfg.grid = GridSpec { x_min: -2.0, x_max: 5.0, w_min: -2.5, w_max: 2.5, nx: 141, nw: 101 };
            }
            Preset::Gaussian => {
                cfg.signal = SignalSource::Gaussian;
                cfg.weight = WeightSource::Spectrogram;
                cfg.mask = MaskShape::Disc;
                cfg.r = 4.0;
                cfg.p = 2.0;
                cfg.floor_rel = 1e-60;
                cfg.grid = GridSpec::square(4.0, 121);
                cfg.cuts = CutFamily::Circle;
            }
            Preset::Dumbbell => {
                cfg.weight = WeightSource::Dumbbell;
                cfg.mask = MaskShape::Full;
                cfg.floor_rel = 1e-14;
                cfg.grid = GridSpec { x_min: -3.5, x_max: 3.5, w_min: -1.5, w_max: 1.5, nx: 141, nw: 151 };
            }
        }
    }
}

/// Command-line overrides; every flag is optional and global.
#[derive(Debug, Clone, Default, Args)]
pub struct Overrides {
    /// Signal whose transform is analysed.
    #[arg(long, global = true, value_enum)]
    pub signal: Option<SignalSource>,
    /// Pair family: `hpm`, `fpm` or `gpm`.
    #[arg(long, global = true, value_parser = parse_kind)]
    pub kind: Option<PairKind>,
    /// Member of the pair: `plus` or `minus`.
    #[arg(long, global = true, value_parser = parse_sign)]
    pub sign: Option<Sign>,
    /// Lattice spacing parameter.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub a: Option<f64>,
    /// Coupling coefficient of the pair.
    #[arg(long, global = true)]
    pub gamma: Option<f64>,
    /// Exponential tilt.
    #[arg(long, global = true)]
    pub tau: Option<f64>,
    /// Phase rotation.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub theta: Option<f64>,
    /// Radius of the disc mask and threshold strip.
    #[arg(long = "radius", global = true)]
    pub r: Option<f64>,
    /// Root spacing factor for the threshold.
    #[arg(long, global = true)]
    pub delta: Option<f64>,
    /// Exponent of the Poincare inequality.
    #[arg(long, global = true)]
    pub p: Option<f64>,
    /// Exponent of the measurement norm.
    #[arg(long, global = true)]
    pub dnorm_p: Option<f64>,
    /// Moment order of the measurement norm.
    #[arg(long, global = true)]
    pub s: Option<f64>,
    /// Derivative order of the measurement norm.
    #[arg(long, global = true)]
    pub k: Option<u8>,
    /// Accepted for completeness; recorded but unused.
    #[arg(long, global = true)]
    pub q: Option<f64>,
    /// Raise the moment term to the same power as the derivative terms.
    #[arg(long, global = true)]
    pub consistent_powers: bool,
    /// `x_min,x_max,w_min,w_max`.
    #[arg(long, global = true, allow_hyphen_values = true, value_parser = parse_extent)]
    pub extent: Option<[f64; 4]>,
    /// `N` or `NXxNW`.
    #[arg(long, global = true, value_parser = parse_resolution)]
    pub resolution: Option<(usize, usize)>,
    /// Weight on the domain.
    #[arg(long, global = true, value_enum)]
    pub weight: Option<WeightSource>,
    /// Domain shape.
    #[arg(long, global = true, value_enum)]
    pub mask: Option<MaskShape>,
    /// Nodes below this fraction of the peak weight are dropped.
    #[arg(long, global = true)]
    pub floor_rel: Option<f64>,
    /// Distance between dumbbell centres.
    #[arg(long, global = true)]
    pub separation: Option<f64>,
    /// Height of the dumbbell corridor.
    #[arg(long, global = true)]
    pub bridge: Option<f64>,
    /// Number of eigenpairs above the constant mode.
    #[arg(long, global = true)]
    pub m: Option<usize>,
    /// Eigensolver: `auto`, `dense` or `iterative`.
    #[arg(long, global = true, value_parser = parse_strategy)]
    pub strategy: Option<EigenStrategy>,
    /// `horizontal_lines`, `vertical_lines` or `rectangular`.
    #[arg(long, global = true, value_parser = parse_lattice)]
    pub lattice: Option<LatticeKind>,
    /// Shift of the sampling lattice.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub lattice_offset: Option<f64>,
    /// Relative tolerance for lattice agreement.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Minimum phase-invariant distance for non-equivalence.
    #[arg(long, global = true)]
    pub noneq_floor: Option<f64>,
    /// Perturbation applied by `variation`.
    #[arg(long, global = true, value_enum)]
    pub perturbation: Option<Perturbation>,
    /// Strength of the perturbation.
    #[arg(long, global = true)]
    pub perturb_factor: Option<f64>,
    /// Number of random test fields.
    #[arg(long, global = true)]
    pub refine_fields: Option<usize>,
    /// Eigenpairs used by the refinement.
    #[arg(long, global = true)]
    pub refine_k: Option<usize>,
    /// Seed for random fields.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Cut family searched by `cheeger`.
    #[arg(long, global = true, value_enum)]
    pub cuts: Option<CutFamily>,
    /// Cuts per family.
    #[arg(long, global = true)]
    pub cut_count: Option<usize>,
}

macro_rules! set {
    ($cfg:ident, $o:ident, $($field:ident => $target:expr),* $(,)?) => {
        $(if let Some(v) = $o.$field { $target = v; })*
    };
}

impl Overrides {
    pub fn apply(&self, cfg: &mut RunConfig) {
        let o = self;
        set!(cfg, o,
            signal => cfg.signal, kind => cfg.kind, sign => cfg.sign, a => cfg.a,
            gamma => cfg.gamma, tau => cfg.tau, theta => cfg.theta, r => cfg.r,
            delta => cfg.delta, p => cfg.p, dnorm_p => cfg.dnorm_p, s => cfg.s, k => cfg.k,
            weight => cfg.weight, mask => cfg.mask, floor_rel => cfg.floor_rel,
            separation => cfg.separation, bridge => cfg.bridge_height, m => cfg.m,
            strategy => cfg.solver.strategy, lattice_offset => cfg.lattice_offset,
            tol => cfg.tol, noneq_floor => cfg.noneq_floor, perturbation => cfg.perturbation,
            perturb_factor => cfg.perturb_factor, refine_fields => cfg.refine_fields,
            refine_k => cfg.refine_k, seed => cfg.seed, cuts => cfg.cuts, cut_count => cfg.cut_count,
        );
        if o.q.is_some() {
            cfg.q = o.q;
        }
        if o.lattice.is_some() {
            cfg.lattice = o.lattice;
        }
        if o.consistent_powers {
            cfg.dnorm_consistent_powers = true;
        }
        if let Some([x0, x1, w0, w1]) = o.extent {
            cfg.grid = GridSpec { x_min: x0, x_max: x1, w_min: w0, w_max: w1, ..cfg.grid };
        }
        if let Some((nx, nw)) = o.resolution {
            cfg.grid.nx = nx;
            cfg.grid.nw = nw;
        }
    }
}

/// Defaults, then `preset`, then the JSON document at `file`, then `flags`.
pub fn resolve(
    preset: Option<Preset>,
    file: Option<&Path>,
    flags: &Overrides,
    out_dir: Option<&Path>,
) -> anyhow::Result<RunConfig> {
    let mut cfg = RunConfig::default();
    if let Some(p) = preset {
        p.apply(&mut cfg);
    }
    if let Some(path) = file {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        let overlay: Value = serde_json::from_str(&text)
            .map_err(|e| UsageError(format!("config {}: {e}", path.display())))?;
        let mut base = serde_json::to_value(&cfg)?;
        merge(&mut base, overlay);
        cfg = serde_json::from_value(base).map_err(|e| UsageError(format!("config {}: {e}", path.display())))?;
    }
    flags.apply(&mut cfg);
    if let Some(dir) = out_dir {
        cfg.out_dir = dir.to_path_buf();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn merge(base: &mut Value, overlay: Value) {
    match (base, overlay) {
        (Value::Object(b), Value::Object(o)) => {
            for (k, v) in o {
                match b.get_mut(&k) {
                    Some(slot) if slot.is_object() && v.is_object() => merge(slot, v),
                    _ => {
                        b.insert(k, v);
                    }
                }
            }
        }
        (b, o) => *b = o,
    }
}

impl RunConfig {
    /// Range checks shared by every command; operation-specific
    /// preconditions are enforced by the library.
    pub fn validate(&self) -> anyhow::Result<()> {
        let positive = [
            ("a", self.a),
            ("gamma", self.gamma),
            ("r", self.r),
            ("p", self.p),
            ("dnorm_p", self.dnorm_p),
            ("bump_sigma", self.bump_sigma),
            ("bridge_width", self.bridge_width),
            ("separation", self.separation),
            ("perturb_factor", self.perturb_factor),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                bail!(UsageError(format!("{name} must be positive and finite, got {v}")));
            }
        }
        let finite = [
            ("tau", self.tau),
            ("theta", self.theta),
            ("s", self.s),
            ("mask_center_x", self.mask_center_x),
            ("mask_center_w", self.mask_center_w),
            ("lattice_offset", self.lattice_offset),
        ];
        for (name, v) in finite {
            if !v.is_finite() {
                bail!(UsageError(format!("{name} must be finite")));
            }
        }
        if !(self.delta > 0.0 && self.delta <= 1.0) {
            bail!(UsageError(format!("delta must lie in (0, 1], got {}", self.delta)));
        }
        if self.tau < 0.0 {
            bail!(UsageError("tau must be nonnegative".into()));
        }
        if self.m == 0 {
            bail!(UsageError("m must be at least 1".into()));
        }
        if self.cut_count == 0 {
            bail!(UsageError("cut_count must be at least 1".into()));
        }
        if self.root_k_min > self.root_k_max || self.line_k_min > self.line_k_max {
            bail!(UsageError("empty index range".into()));
        }
        self.grid.build().map_err(|e| UsageError(format!("grid: {e}")))?;
        Ok(())
    }

    pub fn tf_grid(&self) -> gaborlab::Result<TfGrid> {
        self.grid.build()
    }

    pub fn tf_mask(&self, grid: TfGrid) -> Mask {
        match self.mask {
            MaskShape::Full => Mask::full(grid),
            MaskShape::Disc => Mask::disc(grid, self.mask_center_x, self.mask_center_w, self.r),
        }
    }

    pub fn threshold(&self) -> gaborlab::Result<f64> {
        gamma_threshold(self.a, self.r, self.delta)
    }
}

fn parse_serde<T: for<'de> Deserialize<'de>>(s: &str) -> Result<T, String> {
    serde_json::from_value(Value::String(s.to_string())).map_err(|e| e.to_string())
}

fn parse_kind(s: &str) -> Result<PairKind, String> {
    parse_serde(s)
}

fn parse_sign(s: &str) -> Result<Sign, String> {
    parse_serde(s)
}

fn parse_strategy(s: &str) -> Result<EigenStrategy, String> {
    parse_serde(s)
}

fn parse_lattice(s: &str) -> Result<LatticeKind, String> {
    parse_serde(s)
}

fn parse_extent(s: &str) -> Result<[f64; 4], String> {
    let v: Vec<f64> = s.split(',').map(|t| t.trim().parse::<f64>().map_err(|e| e.to_string())).collect::<Result<_, _>>()?;
    v.try_into().map_err(|_| "expected x_min,x_max,w_min,w_max".to_string())
}

fn parse_resolution(s: &str) -> Result<(usize, usize), String> {
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| e.to_string());
    match s.split_once('x') {
        Some((a, b)) => Ok((parse(a)?, parse(b)?)),
        None => parse(s).map(|n| (n, n)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_presets() {
        let flags = Overrides { a: Some(0.25), resolution: Some((11, 13)), ..Default::default() };
        let cfg = resolve(Some(Preset::Fig2), None, &flags, None).unwrap();
        assert_eq!(cfg.a, 0.25);
        assert_eq!((cfg.grid.nx, cfg.grid.nw), (11, 13));
        assert_eq!(cfg.grid.x_max, 5.0);
    }

    #[test]
    fn json_overlay_is_partial() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        std::fs::write(&path, r#"{"gamma": 0.5, "grid": {"nx": 31}, "solver": {"tol": 1e-8}}"#).unwrap();
        let cfg = resolve(Some(Preset::Gaussian), Some(&path), &Overrides::default(), None).unwrap();
        assert_eq!(cfg.gamma, 0.5);
        assert_eq!(cfg.grid.nx, 31);
        assert_eq!(cfg.grid.nw, 121);
        assert_eq!(cfg.solver.tol, 1e-8);
        assert_eq!(cfg.signal, SignalSource::Gaussian);
    }

    #[test]
    fn unknown_keys_are_usage_errors() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        std::fs::write(&path, r#"{"gama": 0.5}"#).unwrap();
        let err = resolve(None, Some(&path), &Overrides::default(), None).unwrap_err();
        assert!(err.downcast_ref::<UsageError>().is_some());
    }

    #[test]
    fn config_round_trips_through_json() {
        let cfg = RunConfig::default();
        let back: RunConfig = serde_json::from_value(serde_json::to_value(&cfg).unwrap()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn resolution_parser() {
        assert_eq!(parse_resolution("12"), Ok((12, 12)));
        assert_eq!(parse_resolution("12x7"), Ok((12, 7)));
        assert!(parse_extent("1,2,3").is_err());
    }
}

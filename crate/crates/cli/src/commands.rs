//! One function per subcommand. Each writes `<command>.json` plus any data
//! files into the configured output directory.

use std::path::PathBuf;

use anyhow::bail;
use gaborlab::cheeger::{
    cheeger_upper_bound_with, circle_cuts, dumbbell_weight, vertical_cuts, CheegerOptions, Cut, DumbbellParams,
};
use gaborlab::counterexamples::{
    make_pair, rotate, strip_scan, tilt_gaussian_sum, verify_pair, CounterexamplePair, Lattice, PairKind, Sign,
};
use gaborlab::spectral::{
    build_weighted_domain, poincare_estimate_with, refinement_check, solve_spectrum_with, variation_bound_check_with,
    SpectralDecomposition, WeightedDomain,
};
use gaborlab::{
    gabor_eval, measurement_norm_d, stability_probe_split, DNormParams, Field, GaussianSum, MagnitudeField, TfGrid,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::config::{CutFamily, MaskShape, Perturbation, RunConfig, SignalSource, WeightSource};
use crate::io::{fmt_f64, grid_csv, json_bytes, pgm, write_atomic};
use crate::report::ReportEnvelope;
use crate::{Command, UsageError, EXIT_AGREEMENT, EXIT_NONEQUIVALENCE, EXIT_PASS};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    AgreementFailure,
    NonEquivalenceFailure,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => EXIT_PASS,
            Verdict::AgreementFailure => EXIT_AGREEMENT,
            Verdict::NonEquivalenceFailure => EXIT_NONEQUIVALENCE,
        }
    }

    pub fn message(self) -> Option<&'static str> {
        match self {
            Verdict::Pass => None,
            Verdict::AgreementFailure => Some("magnitudes disagree on the lattice"),
            Verdict::NonEquivalenceFailure => Some("signals are equivalent up to a global phase"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub verdict: Verdict,
    pub files: Vec<PathBuf>,
    pub payload: Value,
}

struct Writer<'a> {
    cfg: &'a RunConfig,
    files: Vec<PathBuf>,
}

impl Writer<'_> {
    fn file(&mut self, name: &str, bytes: &[u8]) -> anyhow::Result<()> {
        let path = self.cfg.out_dir.join(name);
        write_atomic(&path, bytes)?;
        self.files.push(path);
        Ok(())
    }

    fn finish(mut self, command: &str, verdict: Verdict, payload: Value, notes: Vec<String>) -> anyhow::Result<Outcome> {
        let env = ReportEnvelope::new(command, self.cfg, payload.clone(), notes);
        self.file(&format!("{command}.json"), &json_bytes(&env)?)?;
        Ok(Outcome { verdict, files: self.files, payload })
    }
}

pub fn execute(command: Command, cfg: &RunConfig) -> anyhow::Result<Outcome> {
    let mut w = Writer { cfg, files: Vec::new() };
    let name = command.name();
    let mut notes = base_notes(cfg);
    let (verdict, payload) = match command {
        Command::Spectrogram | Command::Figure1a | Command::Figure1b => spectrogram(cfg, &mut w, name, &mut notes)?,
        Command::Verify => verify(cfg)?,
        Command::Roots => roots(cfg, &mut w)?,
        Command::Threshold => threshold(cfg)?,
        Command::Spectrum => spectrum(cfg, &mut w, &mut notes)?,
        Command::Poincare => poincare(cfg, &mut notes)?,
        Command::Variation => variation(cfg, &mut notes)?,
        Command::Refine => refine(cfg, &mut notes)?,
        Command::Cheeger => cheeger(cfg, &mut notes)?,
        Command::Probe => probe(cfg, &mut notes)?,
        Command::Dnorm => dnorm(cfg, &mut notes)?,
        Command::Figure2 => figure2(cfg, &mut w, &mut notes)?,
    };
    w.finish(name, verdict, payload, notes)
}

fn base_notes(cfg: &RunConfig) -> Vec<String> {
    let mut notes = Vec::new();
    if let Some(c) = cfg.x_reflect {
        notes.push(format!("spectrogram axis mirrored: column x shows the transform at {} - x", fmt_f64(c)));
    }
    notes
}

fn spectral_notes(cfg: &RunConfig, notes: &mut Vec<String>) {
    notes.push("weighted Laplacian with Neumann boundary conditions on the mask".into());
    notes.push(format!(
        "weight floor {} of the peak; solver {:?}, tol {}, max_iter {}",
        fmt_f64(cfg.floor_rel),
        cfg.solver.strategy,
        fmt_f64(cfg.solver.tol),
        cfg.solver.max_iter
    ));
}

fn pair(cfg: &RunConfig) -> anyhow::Result<CounterexamplePair> {
    Ok(make_pair(cfg.kind, cfg.a, cfg.gamma)?.with_theta(cfg.theta))
}

/// The configured signal, tilted when `tau > 0`.
pub fn signal(cfg: &RunConfig) -> anyhow::Result<GaussianSum> {
    let base = match cfg.signal {
        SignalSource::Pair => make_pair(cfg.kind, cfg.a, cfg.gamma)?.signal(cfg.sign).clone(),
        SignalSource::Gaussian => GaussianSum::gaussian(),
        SignalSource::Zero => GaussianSum::zero(),
    };
    Ok(if cfg.tau > 0.0 { tilt_gaussian_sum(&base, cfg.tau)? } else { base })
}

/// `|G f|` on the configured grid, after the optional mirror and rotation.
pub fn spectrogram_field(cfg: &RunConfig) -> anyhow::Result<MagnitudeField> {
    let f = signal(cfg)?;
    let grid = cfg.tf_grid()?;
    let field = Field::from_fn(grid, |x, w| {
        let x = cfg.x_reflect.map_or(x, |c| c - x);
        let (bx, bw) = rotate(-cfg.theta, (x, w));
        gabor_eval(&f, bx, bw).norm()
    });
    if field.values().iter().any(|v| !v.is_finite()) {
        return Err(gaborlab::Error::Overflow("spectrogram").into());
    }
    Ok(field)
}

/// Interior nodes strictly above their eight neighbours and above `rel * max`.
pub fn local_maxima(field: &MagnitudeField, rel: f64) -> Vec<(f64, f64, f64)> {
    let g = field.grid();
    let floor = rel * field.max();
    let mut out = Vec::new();
    for i in 1..g.nx.saturating_sub(1) {
        for j in 1..g.nw.saturating_sub(1) {
            let v = *field.at(i, j);
            if v <= floor {
                continue;
            }
            let peak = (i - 1..=i + 1)
                .flat_map(|a| (j - 1..=j + 1).map(move |b| (a, b)))
                .all(|(a, b)| (a, b) == (i, j) || *field.at(a, b) < v);
            if peak {
                out.push((g.x(i), g.w(j), v));
            }
        }
    }
    out
}

fn spectrogram(cfg: &RunConfig, w: &mut Writer, name: &str, notes: &mut Vec<String>) -> anyhow::Result<(Verdict, Value)> {
    let field = spectrogram_field(cfg)?;
    w.file(&format!("{name}.csv"), grid_csv(&field).as_bytes())?;
    w.file(&format!("{name}.pgm"), pgm(&field).as_bytes())?;
    if cfg.tau > 0.0 {
        notes.push(format!("Bargmann tilt e^(pi tau z) with tau = {}", fmt_f64(cfg.tau)));
    }
    let maxima: Vec<Value> = local_maxima(&field, 1e-6)
        .into_iter()
        .map(|(x, om, v)| json!({"x": x, "omega": om, "value": v}))
        .collect();
    Ok((
        Verdict::Pass,
        json!({"max": field.max(), "local_maxima": maxima, "nx": field.grid().nx, "nw": field.grid().nw}),
    ))
}

fn verify(cfg: &RunConfig) -> anyhow::Result<(Verdict, Value)> {
    let pair = pair(cfg)?;
    let mut lattice = Lattice::for_pair(&pair);
    if let Some(kind) = cfg.lattice {
        lattice.kind = kind;
    }
    lattice.offset = cfg.lattice_offset;
    lattice.line_sample_count = cfg.line_samples;
    lattice.k_min = cfg.line_k_min;
    lattice.k_max = cfg.line_k_max;
    let report = verify_pair(&pair, &lattice, cfg.tol, cfg.noneq_floor)?;
    let verdict = if !report.agreement_ok {
        Verdict::AgreementFailure
    } else if !report.nonequivalence_ok {
        Verdict::NonEquivalenceFailure
    } else {
        Verdict::Pass
    };
    Ok((verdict, json!({"lattice": lattice, "report": report})))
}

fn sign_name(sign: Sign) -> &'static str {
    match sign {
        Sign::Plus => "plus",
        Sign::Minus => "minus",
    }
}

fn roots(cfg: &RunConfig, w: &mut Writer) -> anyhow::Result<(Verdict, Value)> {
    let pair = pair(cfg)?;
    let mut csv = String::from("sign,x,omega,magnitude\n");
    let mut sets = serde_json::Map::new();
    for sign in [Sign::Plus, Sign::Minus] {
        let pts = gaborlab::counterexamples::roots::pair_roots(&pair, sign, cfg.root_k_min, cfg.root_k_max)?;
        let f = pair.signal(sign);
        let mut list = Vec::new();
        for &(x, om) in &pts {
            let (bx, bw) = rotate(-pair.theta, (x, om));
            let m = gabor_eval(f, bx, bw).norm();
            csv.push_str(&format!("{},{},{},{}\n", sign_name(sign), fmt_f64(x), fmt_f64(om), fmt_f64(m)));
            list.push(json!({"x": x, "omega": om, "magnitude": m}));
        }
        sets.insert(sign_name(sign).to_string(), Value::Array(list));
    }
    w.file("roots.csv", csv.as_bytes())?;
    Ok((Verdict::Pass, json!({"kind": pair.kind, "roots": sets})))
}

fn threshold(cfg: &RunConfig) -> anyhow::Result<(Verdict, Value)> {
    let gamma0 = cfg.threshold()?;
    let mut payload = json!({"gamma0": gamma0, "gamma": cfg.gamma, "gamma_over_gamma0": cfg.gamma / gamma0});
    if cfg.kind == PairKind::Fpm {
        let plus = strip_scan(cfg.a, cfg.gamma, Sign::Plus, cfg.r, cfg.strip_samples)?;
        let minus = strip_scan(cfg.a, cfg.gamma, Sign::Minus, cfg.r, cfg.strip_samples)?;
        payload["strip_plus"] = serde_json::to_value(plus)?;
        payload["strip_minus"] = serde_json::to_value(minus)?;
        payload["strip_min_positive"] = json!(plus.refined_min > 0.0 && minus.refined_min > 0.0);
    }
    Ok((Verdict::Pass, payload))
}

/// Weighted domain described by the configuration.
pub fn domain(cfg: &RunConfig) -> anyhow::Result<WeightedDomain> {
    let grid = cfg.tf_grid()?;
    match cfg.weight {
        WeightSource::Dumbbell => {
            if cfg.mask != MaskShape::Full {
                bail!(UsageError("the dumbbell weight lives on the full grid".into()));
            }
            let params = DumbbellParams { bridge_width: cfg.bridge_width, ..DumbbellParams::new(cfg.separation, cfg.bridge_height, cfg.bump_sigma) };
            Ok(dumbbell_weight(params, grid, cfg.floor_rel)?)
        }
        WeightSource::Spectrogram => {
            let mag = spectrogram_field(cfg)?;
            Ok(build_weighted_domain(&mag, cfg.p, &cfg.tf_mask(grid), cfg.floor_rel)?)
        }
    }
}

/// Fraction of the `M`-mass of `u` carrying the majority sign on each side of `x = 0`.
fn sign_split(dec: &SpectralDecomposition, u: &[f64]) -> Value {
    let d = dec.domain();
    let mass = d.masses();
    let mut acc = [[0.0f64; 2]; 2];
    for ((&(x, _), m), v) in d.coords().iter().zip(&mass).zip(u) {
        if x == 0.0 {
            continue;
        }
        let side = usize::from(x > 0.0);
        acc[side][usize::from(*v > 0.0)] += m * v * v;
    }
    let frac = |s: [f64; 2]| s[0].max(s[1]) / (s[0] + s[1]).max(f64::MIN_POSITIVE);
    let sign = |s: [f64; 2]| if s[1] >= s[0] { 1 } else { -1 };
    json!({
        "left_fraction": frac(acc[0]),
        "right_fraction": frac(acc[1]),
        "opposite_signs": sign(acc[0]) != sign(acc[1]),
    })
}

fn spectrum(cfg: &RunConfig, w: &mut Writer, notes: &mut Vec<String>) -> anyhow::Result<(Verdict, Value)> {
    spectral_notes(cfg, notes);
    let d = domain(cfg)?;
    let dec = solve_spectrum_with(&d, cfg.m, cfg.solver)?;
    let mut payload = json!({
        "domain": d.summary(),
        "eigenvalues": dec.eigenvalues,
        "residuals": dec.residuals,
        "strategy": dec.strategy,
        "iterations": dec.iterations,
    });
    if dec.len() > 1 {
        w.file("spectrum_u1.csv", grid_csv(&dec.eigenvector_field(1)).as_bytes())?;
        payload["u1_sign_split"] = sign_split(&dec, &dec.eigenvectors[1]);
    }
    if dec.len() > 2 {
        payload["lambda2_over_lambda1"] = json!(dec.eigenvalues[2] / dec.eigenvalues[1]);
    }
    Ok((Verdict::Pass, payload))
}

fn poincare(cfg: &RunConfig, notes: &mut Vec<String>) -> anyhow::Result<(Verdict, Value)> {
    spectral_notes(cfg, notes);
    let d = domain(cfg)?;
    let est = poincare_estimate_with(&d, cfg.solver)?;
    let mut payload = json!({"domain": d.summary(), "estimate": est});
    if cfg.weight == WeightSource::Spectrogram && cfg.signal == SignalSource::Gaussian && cfg.p == 2.0 {
        let reference = 1.0 / (2.0 * std::f64::consts::PI).sqrt();
        payload["gaussian_reference"] = json!(reference);
        payload["relative_error"] = json!((est.constant - reference).abs() / reference);
    }
    Ok((Verdict::Pass, payload))
}

fn variation(cfg: &RunConfig, notes: &mut Vec<String>) -> anyhow::Result<(Verdict, Value)> {
    spectral_notes(cfg, notes);
    let base = domain(cfg)?;
    let f = cfg.perturb_factor;
    let (perturbed, detail) = match cfg.perturbation {
        Perturbation::Scale => (base.reweighted(cfg.floor_rel, |_, _| f)?, json!({"factor": f})),
        Perturbation::Sine => {
            if f >= 1.0 {
                bail!(UsageError("sine perturbation needs perturb_factor < 1".into()));
            }
            let pi = std::f64::consts::PI;
            (base.reweighted(cfg.floor_rel, |x, w| 1.0 + f * (pi * x).sin() * (pi * w).sin())?, json!({"amplitude": f}))
        }
        Perturbation::Fpm => {
            if cfg.weight != WeightSource::Spectrogram {
                bail!(UsageError("the fpm perturbation needs a spectrogram weight".into()));
            }
            let gamma0 = cfg.threshold()?;
            let other = RunConfig {
                signal: SignalSource::Pair,
                kind: PairKind::Fpm,
                gamma: f * gamma0,
                tau: 0.0,
                ..cfg.clone()
            };
            (domain(&other)?, json!({"gamma0": gamma0, "gamma": f * gamma0, "sign": cfg.sign}))
        }
    };
    let report = variation_bound_check_with(&base, &perturbed, cfg.p, cfg.solver)?;
    Ok((Verdict::Pass, json!({"perturbation": cfg.perturbation, "detail": detail, "report": report})))
}

fn refine(cfg: &RunConfig, notes: &mut Vec<String>) -> anyhow::Result<(Verdict, Value)> {
    spectral_notes(cfg, notes);
    let d = domain(cfg)?;
    let dec = solve_spectrum_with(&d, cfg.m, cfg.solver)?;
    let k = cfg.refine_k;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut worst = f64::INFINITY;
    let mut reports = Vec::with_capacity(cfg.refine_fields);
    for _ in 0..cfg.refine_fields {
        let (c1, c2, c3, c4): (f64, f64, f64, f64) =
            (rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0), rng.random_range(-1.0..1.0), rng.random_range(0.5..3.0));
        let h: Vec<f64> = d
            .sample(|x, w| c1 * x + c2 * (c4 * w).sin() + c3 * x * w)
            .into_iter()
            .map(|v| v + rng.random_range(-0.05..0.05))
            .collect();
        let r = refinement_check(&dec, &h, k)?;
        worst = worst.min(r.slack / r.lhs);
        reports.push(r);
    }
    let eq0 = refinement_check(&dec, &dec.eigenvectors[0], k)?;
    let eq1 = refinement_check(&dec, &dec.eigenvectors[1], k)?;
    Ok((
        Verdict::Pass,
        json!({
            "k": k,
            "min_relative_slack": if reports.is_empty() { Value::Null } else { json!(worst) },
            "all_nonnegative": reports.iter().all(|r| r.slack >= -1e-9 * r.lhs),
            "fields": reports,
            "equality_u0": eq0,
            "equality_u1": eq1,
        }),
    ))
}

fn cut_family(cfg: &RunConfig, d: &WeightedDomain) -> Vec<Cut> {
    let g = d.grid();
    let r_max = match cfg.mask {
        MaskShape::Disc => cfg.r,
        MaskShape::Full => [g.x_max, -g.x_min, g.w_max, -g.w_min].into_iter().fold(f64::INFINITY, f64::min).max(0.0),
    };
    match cfg.cuts {
        CutFamily::Vertical => vertical_cuts(d, cfg.cut_count),
        CutFamily::Circle => circle_cuts(r_max, cfg.cut_count),
        CutFamily::Both => {
            let mut v = vertical_cuts(d, cfg.cut_count);
            v.extend(circle_cuts(r_max, cfg.cut_count));
            v
        }
    }
}

fn cheeger(cfg: &RunConfig, notes: &mut Vec<String>) -> anyhow::Result<(Verdict, Value)> {
    spectral_notes(cfg, notes);
    notes.push(format!("chain check C_poinc <= {} / h_upper", fmt_f64(cfg.chain_slack)));
    let d = domain(cfg)?;
    let family = cut_family(cfg, &d);
    let opts = CheegerOptions { p: cfg.p, chain_slack: cfg.chain_slack, solver: cfg.solver };
    let report = cheeger_upper_bound_with(&d, &family, opts)?;
    Ok((Verdict::Pass, serde_json::to_value(report)?))
}

fn dnorm_params(cfg: &RunConfig, notes: &mut Vec<String>) -> DNormParams {
    if cfg.q.is_some() {
        notes.push("q is accepted but does not enter the measurement norm".into());
    }
    DNormParams { p: cfg.dnorm_p, s: cfg.s, k: cfg.k, q: cfg.q, consistent_powers: cfg.dnorm_consistent_powers }
}

fn probe(cfg: &RunConfig, notes: &mut Vec<String>) -> anyhow::Result<(Verdict, Value)> {
    let pair = pair(cfg)?;
    let grid: TfGrid = cfg.tf_grid()?;
    let mask = cfg.tf_mask(grid);
    let report = stability_probe_split(&pair.plus, &pair.minus, &mask, &mask, &grid, dnorm_params(cfg, notes))?;
    Ok((Verdict::Pass, json!({"kind": pair.kind, "report": report})))
}

fn dnorm(cfg: &RunConfig, notes: &mut Vec<String>) -> anyhow::Result<(Verdict, Value)> {
    let field = spectrogram_field(cfg)?;
    let weight = field.map(|v| v.powf(cfg.dnorm_p));
    let mask = cfg.tf_mask(*field.grid());
    let mask = (cfg.mask != MaskShape::Full).then_some(&mask);
    notes.push("moment weight w = |G f|^p".into());
    let report = measurement_norm_d(&field, dnorm_params(cfg, notes), &weight, mask)?;
    Ok((Verdict::Pass, serde_json::to_value(report)?))
}

fn figure2(cfg: &RunConfig, w: &mut Writer, notes: &mut Vec<String>) -> anyhow::Result<(Verdict, Value)> {
    let field = spectrogram_field(cfg)?;
    w.file("figure2.csv", grid_csv(&field).as_bytes())?;
    w.file("figure2.pgm", pgm(&field).as_bytes())?;
    let pair = pair(cfg)?;
    let gamma0 = cfg.threshold()?;
    let radius = (100f64.ln() / std::f64::consts::PI).sqrt();
    let mut overlay = String::from("kind,x,omega,value\n");
    let mut row = |kind: &str, x: f64, om: f64, v: f64| {
        overlay.push_str(&format!("{kind},{},{},{}\n", fmt_f64(x), fmt_f64(om), fmt_f64(v)));
    };
    let mut root_sets = serde_json::Map::new();
    for sign in [Sign::Plus, Sign::Minus] {
        let pts = gaborlab::counterexamples::roots::pair_roots(&pair, sign, cfg.root_k_min, cfg.root_k_max)?;
        for &(x, om) in &pts {
            row(&format!("root_{}", sign_name(sign)), x, om, 0.0);
        }
        root_sets.insert(sign_name(sign).to_string(), serde_json::to_value(&pts)?);
    }
    let f = pair.signal(cfg.sign);
    let maxima = [(0.0, 0.0), (1.0 / cfg.a, 0.0)];
    for &(x, om) in &maxima {
        row("maximum", x, om, gabor_eval(f, x, om).norm());
    }
    row("gamma0", 0.0, 0.0, gamma0);
    row("mass_radius_99", 0.0, 0.0, radius);
    w.file("figure2_overlay.csv", overlay.as_bytes())?;
    notes.push("mass_radius_99 is the radius of the disc holding 99% of |G phi|^2".into());
    Ok((
        Verdict::Pass,
        json!({
            "roots": root_sets,
            "maxima": maxima,
            "gamma0": gamma0,
            "mass_radius_99": radius,
            "max": field.max(),
        }),
    ))
}

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use cattaneo_validation::{CriterionResult, CRITERIA};
use cattaneo_core::catalog::{PRESET_NAMES, SpectralSequence};
use cattaneo_core::exact::{parse_rational, Rational};
use cattaneo_core::grid::RangeSpec;
use cattaneo_core::region::{decay_order_with, sample_atlas, StabilityVerdict, VerdictKind, ATLAS_CSV_HEADER};
use cattaneo_core::report::fmt_real;
use cattaneo_core::fit::log_log;
use cattaneo_core::resolvent::{critical_frequencies, resolvent_sup, Envelope, GrowthFit};
use cattaneo_core::semigroup::{certified_window, decay_fit, energy_trace, ModalState, SemigroupModes};
use cattaneo_core::spectrum::critical_root;
use cattaneo_core::spectrum::table::{asymptotic_error_in, BranchTable};
use cattaneo_core::verify::verify_tables;
use cattaneo_core::{
    characteristic_coeffs, classify, preset, solve_quartic, Error, ParameterPoint, Preset, Tolerance,
};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::*;

#[derive(Debug)]
pub enum Failure {
    /// Bad flags, values or files: exit 2.
    Usage(String),
    /// The analysis ran into an error: exit 1.
    Analysis(String),
}

/// `Ok(false)` means the command ran but reported failed checks.
pub type Outcome = Result<bool, Failure>;

fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

fn analysis(e: impl ToString) -> Failure {
    Failure::Analysis(e.to_string())
}

pub fn run(command: Command) -> Outcome {
    match command {
        Command::Classify(a) => classify_cmd(a),
        Command::AtlasGrid(a) => atlas_grid(a),
        Command::Spectrum(a) => spectrum(a),
        Command::Resolvent(a) => resolvent(a),
        Command::Semigroup(a) => semigroup(a),
        Command::Preset { action } => preset_cmd(action),
        Command::VerifyTables(a) => verify(a),
        Command::Acceptance(a) => acceptance_cmd(a),
    }
}

fn write_to(path: &Path, text: &str) -> Result<(), Failure> {
    if path.as_os_str() == "-" {
        print!("{text}");
        Ok(())
    } else {
        fs::write(path, text).map_err(|e| usage(format!("cannot write {}: {e}", path.display())))
    }
}

/// Whether stdout is free for the human-readable summary; `--csv -` and
/// `--json` cannot share it.
fn stdout_free(csv: &Option<std::path::PathBuf>, json: bool) -> Result<bool, Failure> {
    let csv_to_stdout = csv.as_ref().is_some_and(|p| p.as_os_str() == "-");
    if csv_to_stdout && json {
        return Err(usage("--csv - and --json both write to stdout"));
    }
    Ok(!csv_to_stdout)
}

fn report(command: &str, config: Value, result: impl Serialize) -> String {
    let v = json!({
        "tool_version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "config": config,
        "result": result,
    });
    serde_json::to_string_pretty(&v).expect("report serializes") + "\n"
}

fn rational(flag: &str, s: &str) -> Result<Rational, Failure> {
    parse_rational(s).map_err(|_| usage(format!("invalid value `{s}` for --{flag}: expected a decimal or p/q")))
}

impl PointArgs {
    fn resolve(&self) -> Result<(ParameterPoint, Option<Preset>), Failure> {
        let base = self.preset.as_deref().map(preset).transpose().map_err(usage)?;
        let from_point: Vec<&str> = match &self.point {
            Some(p) => p.split(',').map(str::trim).collect(),
            None => Vec::new(),
        };
        if self.point.is_some() && !(2..=3).contains(&from_point.len()) {
            return Err(usage("--point expects `alpha,beta` or `alpha,beta,gamma`"));
        }
        let pick = |flag: &str, given: &Option<String>, idx: usize, fallback: Option<&Rational>| {
            match (given, from_point.get(idx)) {
                (Some(s), _) => rational(flag, s).map(Some),
                (None, Some(s)) => rational(flag, s).map(Some),
                (None, None) if self.point.is_none() => Ok(fallback.cloned()),
                (None, None) => Ok(None),
            }
        };
        let bp = base.as_ref().map(|p| &p.point);
        let alpha = pick("alpha", &self.alpha, 0, bp.map(|p| &p.alpha))?.ok_or_else(|| usage("missing --alpha"))?;
        let beta = pick("beta", &self.beta, 1, bp.map(|p| &p.beta))?.ok_or_else(|| usage("missing --beta"))?;
        let gamma = pick("gamma", &self.gamma, 2, bp.and_then(|p| p.gamma.as_ref()))?;
        let m = match (self.m, bp) {
            (Some(m), _) => m,
            (None, Some(p)) if self.point.is_none() && self.gamma.is_none() => p.m,
            _ => {
                if gamma.is_some() {
                    1.0
                } else {
                    0.0
                }
            }
        };
        let sigma = self.sigma.or(bp.map(|p| p.sigma)).unwrap_or(2.0);
        let tau = self.tau.or(bp.map(|p| p.tau)).unwrap_or(1.0);
        let point = ParameterPoint::new(alpha, beta, gamma, m, sigma, tau).map_err(usage)?;
        Ok((point, base))
    }
}

fn tolerance(eps: f64) -> Result<Tolerance, Failure> {
    Tolerance::from_f64(eps).map_err(|e| usage(format!("--eps: {e}")))
}

fn range(flag: &str, spec: &str) -> Result<Vec<f64>, Failure> {
    RangeSpec::parse(spec).map(|r| r.values()).map_err(|e| usage(format!("--{flag}: {e}")))
}

fn modes(spec: &Option<String>, base: &Option<Preset>) -> Result<Vec<f64>, Failure> {
    let seq = match (spec, base) {
        (Some(s), _) => SpectralSequence::parse(s).map_err(|e| usage(format!("--modes: {e}")))?,
        (None, Some(p)) => p.sequence.clone(),
        (None, None) => SpectralSequence::PowerLaw { c: 1.0, p: 4.0, count: 400 },
    };
    Ok(seq.values())
}

fn verdict_text(v: &StabilityVerdict) -> String {
    match &v.order {
        Some(k) => format!("{} {} k = {}", v.region, v.kind, k),
        None => format!("{} {}", v.region, v.kind),
    }
}

fn classify_cmd(a: ClassifyArgs) -> Outcome {
    let (point, _) = a.point.resolve()?;
    let tol = tolerance(a.eps)?;
    let verdict = decay_order_with(&point, &tol).map_err(analysis)?;
    if a.json {
        print!("{}", report("classify", json!({ "point": point, "eps": a.eps }), &verdict));
    } else {
        println!("{}", verdict_text(&verdict));
    }
    Ok(true)
}

fn atlas_grid(a: AtlasArgs) -> Outcome {
    let tol = tolerance(a.eps)?;
    let gamma = a.gamma.as_deref().map(|g| rational("gamma", g)).transpose()?;
    if a.noninertial && gamma.is_some() {
        return Err(usage("--gamma has no effect with --noninertial"));
    }
    let rows = sample_atlas(a.resolution, gamma.as_ref(), !a.noninertial, &tol).map_err(usage)?;
    let mut out = String::from(ATLAS_CSV_HEADER);
    out.push('\n');
    for r in &rows {
        out.push_str(&r.csv_line());
        out.push('\n');
    }
    write_to(&a.csv, &out)?;
    let unclassified = rows.iter().filter(|r| r.verdict.region.name() == "Unclassified").count();
    if unclassified > 0 {
        eprintln!("{unclassified} of {} grid points matched no region", rows.len());
    }
    Ok(true)
}

#[derive(Debug, Clone, Serialize)]
struct SpectrumRow {
    mu: f64,
    root_index: usize,
    re: f64,
    im: f64,
    branch: Option<usize>,
    pred_re: Option<f64>,
    pred_im: Option<f64>,
    err_re: Option<f64>,
    err_im: Option<f64>,
}

fn opt(x: Option<f64>) -> String {
    x.map(fmt_real).unwrap_or_default()
}

fn spectrum_rows(point: &ParameterPoint, mu: f64, table: Option<&BranchTable>) -> cattaneo_core::Result<Vec<SpectrumRow>> {
    if let Some(t) = table {
        let region = classify(point, &Tolerance::exact())?;
        match asymptotic_error_in(t, region, point, &[mu]) {
            Ok(mut s) => {
                return Ok(s
                    .remove(0)
                    .entries
                    .into_iter()
                    .map(|e| SpectrumRow {
                        mu,
                        root_index: e.root_index,
                        re: e.computed.re,
                        im: e.computed.im,
                        branch: Some(e.branch),
                        pred_re: Some(e.predicted.re),
                        pred_im: Some(e.predicted.im),
                        err_re: e.err_re,
                        err_im: e.err_im,
                    })
                    .collect())
            }
            Err(Error::UnsupportedRegion(_)) => {}
            Err(e) => return Err(e),
        }
    }
    let roots = solve_quartic(&characteristic_coeffs(point, mu)?)?;
    Ok(roots
        .iter()
        .enumerate()
        .map(|(i, z)| SpectrumRow {
            mu,
            root_index: i,
            re: z.re,
            im: z.im,
            branch: None,
            pred_re: None,
            pred_im: None,
            err_re: None,
            err_im: None,
        })
        .collect())
}

fn spectrum(a: SpectrumArgs) -> Outcome {
    let (point, _) = a.point.resolve()?;
    let text = stdout_free(&a.csv, a.json)?;
    let mus = range("mu-range", &a.mu_range)?;
    let verdict = decay_order_with(&point, &Tolerance::exact()).map_err(analysis)?;
    let table = BranchTable::for_point(&point).ok();
    let rows: Vec<SpectrumRow> = mus
        .par_iter()
        .map(|&mu| spectrum_rows(&point, mu, table.as_ref()))
        .collect::<cattaneo_core::Result<Vec<_>>>()
        .map_err(analysis)?
        .into_iter()
        .flatten()
        .collect();
    if let Some(path) = &a.csv {
        let mut out = String::from("mu,root_index,re,im,branch,pred_re,pred_im,err_re,err_im\n");
        for r in &rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                fmt_real(r.mu),
                r.root_index,
                fmt_real(r.re),
                fmt_real(r.im),
                r.branch.map(|b| b.to_string()).unwrap_or_default(),
                opt(r.pred_re),
                opt(r.pred_im),
                opt(r.err_re),
                opt(r.err_im)
            );
        }
        write_to(path, &out)?;
    }
    if a.json {
        let config = json!({ "point": point, "mu_range": a.mu_range });
        print!("{}", report("spectrum", config, json!({ "verdict": verdict, "roots": rows })));
    } else if text {
        println!("{point}: {}", verdict_text(&verdict));
        for chunk in rows.chunks(4) {
            let roots: Vec<String> = chunk.iter().map(|r| format!("{:+.6e}{:+.6e}i", r.re, r.im)).collect();
            let err = chunk
                .iter()
                .flat_map(|r| [r.err_re, r.err_im])
                .flatten()
                .fold(None, |m: Option<f64>, e| Some(m.map_or(e, |m| m.max(e))));
            let err = err.map(|e| format!("  max rel. error {e:.3e}")).unwrap_or_default();
            println!("mu = {:.4e}  {}{}", chunk[0].mu, roots.join("  "), err);
        }
    }
    Ok(true)
}

fn expected_slope(v: &StabilityVerdict) -> Option<f64> {
    match v.kind {
        VerdictKind::Polynomial => v.order_f64().map(|k| 1.0 / k),
        VerdictKind::Exponential => Some(0.0),
        _ => None,
    }
}

fn resolvent(a: ResolventArgs) -> Outcome {
    let (point, base) = a.point.resolve()?;
    let text = stdout_free(&a.csv, a.json)?;
    let lambdas = range("lambda-range", &a.lambda_range)?;
    let modes = modes(&a.modes, &base)?;
    let envelope = match a.envelope {
        EnvelopeArg::Continuous => Envelope::Continuous,
        EnvelopeArg::Discrete => Envelope::Discrete,
    };
    let verdict = decay_order_with(&point, &Tolerance::exact()).map_err(analysis)?;
    // With polynomial decay the sup at `i lambda` comes from the mode whose
    // critical branch passes `lambda`; beyond the modes' band it only
    // measures the truncation.
    let (lambdas, dropped) = if verdict.kind == VerdictKind::Polynomial {
        let ims: Vec<f64> = modes
            .par_iter()
            .map(|&mu| critical_root(&point, mu).map(|z| z.im))
            .collect::<cattaneo_core::Result<_>>()
            .map_err(analysis)?;
        let lo = ims.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = ims.iter().copied().fold(0.0, f64::max);
        let (kept, dropped): (Vec<f64>, Vec<f64>) = lambdas.into_iter().partition(|l| *l >= lo && *l <= hi);
        if !dropped.is_empty() {
            eprintln!(
                "note: {} of {} lambda values lie outside the band [{lo:.3e}, {hi:.3e}] reached by the modes and were skipped",
                dropped.len(),
                dropped.len() + kept.len()
            );
        }
        (kept, dropped)
    } else {
        (lambdas, Vec::new())
    };
    let lambdas = match envelope {
        Envelope::Continuous => lambdas,
        Envelope::Discrete => critical_frequencies(&point, &lambdas, &modes).map_err(analysis)?,
    };
    let evaluated: Vec<_> = lambdas.par_iter().map(|&l| (l, resolvent_sup(&point, l, &modes, envelope))).collect();
    let mut samples = Vec::with_capacity(evaluated.len());
    let mut singular = Vec::new();
    for (l, r) in evaluated {
        match r {
            Ok(s) => samples.push(s),
            Err(Error::NearSingular { .. }) => singular.push(l),
            Err(e) => return Err(analysis(e)),
        }
    }
    if !singular.is_empty() {
        eprintln!(
            "note: {} lambda values skipped: i*lambda is within rounding of the spectrum (first at {:.3e})",
            singular.len(),
            singular[0]
        );
    }
    let xs: Vec<f64> = samples.iter().map(|s| s.lambda).collect();
    let ys: Vec<f64> = samples.iter().map(|s| s.norm).collect();
    let growth = GrowthFit { fit: log_log(&xs, &ys).map_err(analysis)?, samples };
    if let Some(path) = &a.csv {
        let mut out = String::from("lambda,norm,argmax_mu\n");
        for s in &growth.samples {
            let _ = writeln!(out, "{},{},{}", fmt_real(s.lambda), fmt_real(s.norm), fmt_real(s.argmax_mu));
        }
        write_to(path, &out)?;
    }
    let expected = expected_slope(&verdict);
    if a.json {
        let config = json!({
            "point": point,
            "lambda_range": a.lambda_range,
            "modes": modes.len(),
            "envelope": envelope,
        });
        let result = json!({ "verdict": verdict, "expected_slope": expected, "skipped_lambdas": dropped, "near_singular_lambdas": singular, "growth": growth });
        print!("{}", report("resolvent", config, result));
    } else if text {
        println!("{point}: {}", verdict_text(&verdict));
        for s in &growth.samples {
            println!("lambda = {:.6e}  norm = {:.6e}  argmax mu = {:.6e}", s.lambda, s.norm, s.argmax_mu);
        }
        let exp = expected.map(|e| format!(" (1/k = {e:.4})")).unwrap_or_default();
        println!("log-log slope {:.4}{exp}, rms {:.2e}", growth.fit.slope, growth.fit.rms);
    }
    Ok(true)
}

fn semigroup(a: SemigroupArgs) -> Outcome {
    let (point, base) = a.point.resolve()?;
    let text = stdout_free(&a.csv, a.json)?;
    let times = range("t-range", &a.t_range)?;
    let modes = modes(&a.modes, &base)?;
    let verdict = decay_order_with(&point, &Tolerance::exact()).map_err(analysis)?;
    let config = json!({ "point": point, "t_range": a.t_range, "modes": modes.len() });
    match a.trace {
        TraceArg::Norm => {
            let flows = SemigroupModes::new(&point, &modes).map_err(analysis)?;
            let samples = flows.norm_series(&times);
            if let Some(path) = &a.csv {
                let mut out = String::from("t,norm,argmax_mode\n");
                for s in &samples {
                    let _ = writeln!(out, "{},{},{}", fmt_real(s.t), fmt_real(s.norm), s.argmax_mode);
                }
                write_to(path, &out)?;
            }
            let window = certified_window(&samples, modes.len());
            let ts: Vec<f64> = samples.iter().map(|s| s.t).collect();
            let ns: Vec<f64> = samples.iter().map(|s| s.norm).collect();
            let fit = window.map(|w| decay_fit(&ts, &ns, w));
            if a.json {
                let fit_json = match &fit {
                    Some(Ok(f)) => json!(f),
                    Some(Err(e)) => json!({ "error": e.to_string() }),
                    None => Value::Null,
                };
                let result = json!({ "verdict": verdict, "samples": samples, "certified_window": window, "fit": fit_json });
                print!("{}", report("semigroup", config, result));
            } else if text {
                println!("{point}: {}", verdict_text(&verdict));
                for s in &samples {
                    println!("t = {:.6e}  norm = {:.6e}  argmax mode = {}", s.t, s.norm, s.argmax_mode);
                }
                match (window, fit) {
                    (Some((lo, hi)), Some(Ok(f))) => println!(
                        "window [{lo:.3e}, {hi:.3e}]: power slope {:.4}, {} model preferred",
                        f.power.slope,
                        if f.exponential_preferred { "exponential" } else { "power" }
                    ),
                    (Some(_), Some(Err(e))) => println!("no fit: {e}"),
                    _ => println!("no certified window: the sup sits on the first or last mode throughout"),
                }
            }
        }
        TraceArg::Energy => {
            let initial: Vec<(f64, ModalState)> = modes
                .iter()
                .enumerate()
                .map(|(i, &mu)| (mu, ModalState::real(0.0, 1.0 / (i + 1) as f64, 0.0, 0.0)))
                .collect();
            let trace = energy_trace(&point, &initial, &times).map_err(analysis)?;
            if let Some(path) = &a.csv {
                let mut out = String::from("t,energy,q_norm\n");
                for ((t, e), q) in trace.times.iter().zip(&trace.energies).zip(&trace.q_norms) {
                    let _ = writeln!(out, "{},{},{}", fmt_real(*t), fmt_real(*e), fmt_real(*q));
                }
                write_to(path, &out)?;
            }
            if a.json {
                let result = json!({ "verdict": verdict, "trace": trace, "max_increase": trace.max_increase() });
                print!("{}", report("semigroup", config, result));
            } else if text {
                println!("{point}: {}", verdict_text(&verdict));
                for ((t, e), q) in trace.times.iter().zip(&trace.energies).zip(&trace.q_norms) {
                    println!("t = {t:.6e}  energy = {e:.6e}  |q| = {q:.6e}");
                }
                println!("largest energy increase {:.3e}", trace.max_increase());
            }
        }
    }
    Ok(true)
}

fn sequence_text(s: &SpectralSequence) -> String {
    match s {
        SpectralSequence::PowerLaw { c, p, count } => format!("mu_n = {c} n^{p}, n = 1..{count}"),
        SpectralSequence::List { values } => format!("{} listed values", values.len()),
    }
}

fn preset_cmd(action: PresetAction) -> Outcome {
    match action {
        PresetAction::List { json } => {
            let all: Vec<Preset> = PRESET_NAMES.iter().map(|n| preset(n).expect("listed preset")).collect();
            if json {
                print!("{}", serde_json::to_string_pretty(&all).expect("presets serialize") + "\n");
            } else {
                for p in &all {
                    println!("{:<12} {:<28} {}", p.name, verdict_text(&p.expected_verdict), p.description);
                }
            }
        }
        PresetAction::Show { name, json } => {
            let p = preset(&name).map_err(usage)?;
            if json {
                print!("{}", serde_json::to_string_pretty(&p).expect("preset serializes") + "\n");
            } else {
                println!("{}: {}", p.name, p.description);
                println!("point    {}", p.point);
                println!("modes    {}", sequence_text(&p.sequence));
                println!("verdict  {}", verdict_text(&p.expected_verdict));
            }
        }
    }
    Ok(true)
}

fn verify(a: VerifyArgs) -> Outcome {
    let rep = verify_tables(a.m == 1);
    if let Some(path) = &a.out {
        write_to(path, &rep.to_json())?;
    }
    if let Some(path) = &a.csv {
        write_to(path, &rep.to_csv())?;
    }
    if a.json {
        print!("{}", rep.to_json());
    } else {
        print!("{}", rep.summary());
    }
    Ok(rep.passed())
}

fn acceptance_cmd(a: AcceptanceArgs) -> Outcome {
    let ids: Vec<u32> = if a.only.is_empty() { (1..=10).collect() } else { a.only.clone() };
    let mut results: Vec<CriterionResult> = Vec::with_capacity(ids.len());
    for id in ids {
        let r = CRITERIA[id as usize - 1]();
        if !a.json {
            println!("{}", r.line());
        }
        results.push(r);
    }
    let passed = results.iter().all(|r| r.passed);
    let body = json!({
        "tool_version": env!("CARGO_PKG_VERSION"),
        "passed": passed,
        "criteria": results,
    });
    let text = serde_json::to_string_pretty(&body).expect("report serializes") + "\n";
    if let Some(path) = &a.out {
        write_to(path, &text)?;
    }
    if a.json {
        print!("{text}");
    } else {
        println!("{}/{} criteria passed", results.iter().filter(|r| r.passed).count(), results.len());
    }
    Ok(passed)
}

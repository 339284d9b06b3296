//! Executes a validated config and writes the report, the rows CSV and the
//! plot-data files.

use crate::config::{ConfigError, Evaluator, ExperimentConfig, LemmaOptions, Mode, Source};
use num_complex::Complex64;
use serde::Serialize;
use std::collections::HashMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;
use tracecum::expansion::{
    bruteforce_cumulant_oracle, corollary_bound, exact_cumulant_gaussian, fit_theta, polynomial_cumulant, DeterministicSet,
    EntryCumulantModel, ExpansionPlan, PolynomialSpec, ThetaFit, TraceWord,
};
use tracecum::graphs::lemmas::{
    connected_merge_suite, gue_cycle_suite, gue_eps_suite, gue_order_suite, monotonicity_suite, tree_merge_suite,
    wigner_sigma_suite, MemberFamily,
};
use tracecum::montecarlo::{
    clt_diagnostics, concentration_alpha, estimate_cumulants, fit_scaling_exponent, normalize_statistic, simulate,
    CltDiagnostics, CumulantEstimate, ScalingFit, ScalingVerdict, TraceSampleSet,
};
use tracecum::partitions::crossing_suite;
use tracecum::randmat::{Ensemble, EnsembleTag};

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{context}: {source}")]
    Library { context: String, source: tracecum::Error },
    #[error("writing {path}: {message}")]
    Output { path: PathBuf, message: String },
}

trait Context<T> {
    fn context(self, what: impl FnOnce() -> String) -> Result<T, RunError>;
}

impl<T> Context<T> for tracecum::Result<T> {
    fn context(self, what: impl FnOnce() -> String) -> Result<T, RunError> {
        self.map_err(|source| RunError::Library { context: what(), source })
    }
}

/// Where a row's value came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Exact,
    Mc,
    BoundCheck,
}

/// One CSV line. Bound-check rows carry the scaled value |K_r|·N^{e} (or a
/// fitted slope, with the target in `bound`, when N is empty).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Row {
    #[serde(rename = "N")]
    pub n: Option<usize>,
    pub r: Option<usize>,
    pub mode: Provenance,
    pub value_re: f64,
    pub value_im: f64,
    pub stderr: Option<f64>,
    pub bound: Option<f64>,
    pub verdict: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScalingRecord {
    pub r: usize,
    pub fit: ScalingFit,
}

#[derive(Clone, Debug, Serialize)]
pub struct CltRecord {
    #[serde(rename = "N")]
    pub n: usize,
    pub mean: f64,
    pub variance: f64,
    pub diagnostics: CltDiagnostics,
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaRecord {
    pub suite: String,
    pub checked: usize,
    pub violations: Vec<String>,
    pub passed: bool,
    pub seconds: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub version: &'static str,
    pub config: ExperimentConfig,
    pub rows: Vec<Row>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub scaling: Vec<ScalingRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<ThetaFit>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub clt: Vec<CltRecord>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub lemmas: Vec<LemmaRecord>,
    /// Bound checks, scaling fits and lemma suites that failed.
    pub failures: usize,
    pub wall_time_s: f64,
}

impl RunReport {
    fn new(config: &ExperimentConfig) -> Self {
        RunReport {
            version: env!("CARGO_PKG_VERSION"),
            config: config.clone(),
            rows: Vec::new(),
            scaling: Vec::new(),
            theta: None,
            clt: Vec::new(),
            lemmas: Vec::new(),
            failures: 0,
            wall_time_s: 0.0,
        }
    }

    /// 0 when everything held, 2 when a bound, fit or lemma failed.
    pub fn exit_code(&self) -> i32 {
        if self.failures > 0 {
            2
        } else {
            0
        }
    }
}

/// FNV-1a of the polynomial text, stored with saved samples.
fn spec_id(spec: &PolynomialSpec) -> u64 {
    spec.to_string().bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

/// Per-N sample seed, so different sizes never share streams.
fn seed_for(seed: u64, n: usize) -> u64 {
    seed ^ (n as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

fn predicted_slope(tag: EnsembleTag, r: usize) -> f64 {
    match tag {
        EnsembleTag::Gue | EnsembleTag::Goe => 2.0 - r as f64,
        EnsembleTag::Wigner => 1.0 - r as f64 / 2.0,
    }
}

/// Exact evaluation of mixed word cumulants, with expansion plans reused
/// across N.
struct ExactEvaluator {
    model: EntryCumulantModel,
    path: Evaluator,
    budget: tracecum::expansion::Budget,
    plans: HashMap<String, ExpansionPlan>,
}

impl ExactEvaluator {
    fn new(cfg: &ExperimentConfig, ens: &Ensemble, degree: usize) -> Result<Self, RunError> {
        let model = EntryCumulantModel::from_ensemble(ens, cfg.table_order(degree)).context(|| "entry cumulant model".into())?;
        let path = match (cfg.evaluator, ens.tag) {
            (Evaluator::Auto, EnsembleTag::Wigner) => Evaluator::General,
            (Evaluator::Auto, _) => Evaluator::Gaussian,
            (p, _) => p,
        };
        Ok(ExactEvaluator { model, path, budget: cfg.budget, plans: HashMap::new() })
    }

    fn eval(&mut self, w: &TraceWord, det: &DeterministicSet) -> tracecum::Result<Complex64> {
        match self.path {
            Evaluator::Gaussian => Ok(exact_cumulant_gaussian(w, det, self.model.tag(), &self.budget)?.value),
            Evaluator::Oracle => bruteforce_cumulant_oracle(w, &self.model, det, &self.budget),
            _ => {
                let key = format!("{:?}|{:?}", w.letters(), w.m_vec());
                if !self.plans.contains_key(&key) {
                    self.plans.insert(key.clone(), ExpansionPlan::build(w, &self.model, &self.budget)?);
                }
                Ok(self.plans[&key].evaluate(det, &self.budget)?.value)
            }
        }
    }

    fn cumulant(&mut self, spec: &PolynomialSpec, r: usize, det: &DeterministicSet) -> tracecum::Result<Complex64> {
        polynomial_cumulant(spec, r, |w| self.eval(w, det))
    }

    /// Scaled |K_r| against the corollary bound summed over the expansion of
    /// K_r(Tr P) into word cumulants (triangle inequality). None for Wigner
    /// r = 1, where no bound is stated.
    fn bound_check(&self, spec: &PolynomialSpec, r: usize, det: &DeterministicSet, value: Complex64) -> tracecum::Result<Option<Row>> {
        let exponent = match self.model.tag() {
            EnsembleTag::Wigner if r < 2 => return Ok(None),
            EnsembleTag::Wigner => r as f64 / 2.0 - 1.0,
            _ => r as f64 - 2.0,
        };
        let mut abs = spec.clone();
        abs.monomials.iter_mut().for_each(|m| m.coeff = Complex64::new(m.coeff.norm(), 0.0));
        let bound = polynomial_cumulant(&abs, r, |w| Ok(Complex64::new(corollary_bound(w, det, &self.model)?.0, 0.0)))?.re;
        let n = det.dim();
        let scaled = value.norm() * (n as f64).powf(exponent);
        let passed = scaled <= bound * (1.0 + 1e-9);
        Ok(Some(Row {
            n: Some(n),
            r: Some(r),
            mode: Provenance::BoundCheck,
            value_re: scaled,
            value_im: 0.0,
            stderr: None,
            bound: Some(bound),
            verdict: Some(if passed { "pass" } else { "fail" }.into()),
        }))
    }
}

fn value_row(n: usize, r: usize, mode: Provenance, value: Complex64, stderr: Option<f64>) -> Row {
    Row { n: Some(n), r: Some(r), mode, value_re: value.re, value_im: value.im, stderr, bound: None, verdict: None }
}

fn mc_samples(cfg: &ExperimentConfig, spec: &PolynomialSpec, ens: &Ensemble, det: &DeterministicSet) -> Result<TraceSampleSet, RunError> {
    let n = det.dim();
    let count = cfg.samples.unwrap_or(0);
    log::info!("[mc N={n}] drawing {count} samples");
    simulate(spec, spec_id(spec), ens, det, count, seed_for(cfg.seed, n)).context(|| format!("sampling at N={n}"))
}

fn mc_estimates(cfg: &ExperimentConfig, samples: &TraceSampleSet) -> Result<Vec<CumulantEstimate>, RunError> {
    let r_max = cfg.r.iter().copied().max().unwrap_or(1);
    estimate_cumulants(samples, r_max, seed_for(cfg.seed, samples.n)).context(|| format!("estimating cumulants up to order {r_max} at N={}", samples.n))
}

/// Runs the experiment and writes every output file.
pub fn run(cfg: &ExperimentConfig) -> Result<RunReport, RunError> {
    let report = execute(cfg)?;
    write_outputs(&report, &cfg.output.dir)?;
    Ok(report)
}

/// Runs the experiment without touching the file system (apart from saved
/// samples when asked for).
pub fn execute(cfg: &ExperimentConfig) -> Result<RunReport, RunError> {
    let start = Instant::now();
    let mut report = RunReport::new(cfg);
    if cfg.mode == Mode::VerifyLemmas {
        report.lemmas = run_lemmas(&cfg.lemmas, cfg.seed)?;
        report.failures = report.lemmas.iter().filter(|l| !l.passed).count();
        report.wall_time_s = start.elapsed().as_secs_f64();
        return Ok(report);
    }
    let spec = cfg.polynomial_spec()?;
    let ens = cfg.ensemble()?;
    let mut exact = ExactEvaluator::new(cfg, &ens, spec.degree())?;
    let mut theta_points = Vec::new();
    for &n in &cfg.n {
        let det = cfg.deterministic_set(n).context(|| format!("deterministic matrices at N={n}"))?;
        let use_exact = matches!(cfg.mode, Mode::Exact) || (cfg.mode == Mode::Scaling && cfg.source == Source::Exact);
        if use_exact {
            for &r in &cfg.r {
                let t = Instant::now();
                let v = exact.cumulant(&spec, r, &det).context(|| format!("exact K_{r} at N={n}"))?;
                log::info!("[exact N={n} r={r}] {v} in {:.2}s", t.elapsed().as_secs_f64());
                report.rows.push(value_row(n, r, Provenance::Exact, v, None));
                theta_points.push((r, n, v.norm()));
                if cfg.mode == Mode::Exact {
                    if let Some(row) = exact.bound_check(&spec, r, &det, v).context(|| format!("bound for K_{r} at N={n}"))? {
                        if row.verdict.as_deref() == Some("fail") {
                            report.failures += 1;
                        }
                        report.rows.push(row);
                    }
                }
            }
            continue;
        }
        let samples = mc_samples(cfg, &spec, &ens, &det)?;
        if cfg.output.save_samples {
            let path = cfg.output.dir.join(format!("{}.N{n}.tcs", cfg.output.stem));
            std::fs::create_dir_all(&cfg.output.dir).map_err(|e| RunError::Output { path: path.clone(), message: e.to_string() })?;
            samples.save(&path).context(|| format!("saving samples to {}", path.display()))?;
        }
        if !cfg.r.is_empty() {
            let est = mc_estimates(cfg, &samples)?;
            for &r in &cfg.r {
                let e = &est[r - 1];
                report.rows.push(value_row(n, r, Provenance::Mc, Complex64::new(e.estimate, 0.0), Some(e.stderr)));
            }
        }
        if cfg.mode == Mode::Clt {
            let z = normalize_statistic(&samples, None).context(|| format!("normalizing the statistic at N={n}"))?;
            let xs = samples.real_values().context(|| format!("samples at N={n}"))?;
            let k = xs.len() as f64;
            let mean = xs.iter().sum::<f64>() / k;
            let variance = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / k;
            let alpha = concentration_alpha(ens.tag, spec.degree(), cfg.abs_norm_condition);
            let zs = z.real_values().context(|| "normalized samples".into())?;
            let diagnostics = clt_diagnostics(&zs, alpha, cfg.clt_slack).context(|| format!("CLT diagnostics at N={n}"))?;
            log::info!("[clt N={n}] KS {:.4}, skewness {:.4}", diagnostics.ks, diagnostics.skewness);
            report.clt.push(CltRecord { n, mean, variance, diagnostics });
        }
    }
    if cfg.mode == Mode::Scaling {
        for &r in &cfg.r {
            let pts: Vec<(usize, f64, f64)> = report
                .rows
                .iter()
                .filter(|row| row.r == Some(r) && row.mode != Provenance::BoundCheck)
                .map(|row| (row.n.unwrap_or(0), row.value_re, row.stderr.unwrap_or(0.0)))
                .collect();
            let fit = fit_scaling_exponent(&pts, predicted_slope(ens.tag, r), cfg.scaling_tol).context(|| format!("scaling fit for r={r}"))?;
            let verdict = match fit.verdict {
                ScalingVerdict::Consistent => "consistent",
                ScalingVerdict::Inconsistent => {
                    report.failures += 1;
                    "inconsistent"
                }
                ScalingVerdict::Inconclusive => "inconclusive",
            };
            log::info!("[scaling r={r}] slope {:.4} vs {}: {verdict}", fit.slope, fit.target);
            report.rows.push(Row {
                n: None,
                r: Some(r),
                mode: Provenance::BoundCheck,
                value_re: fit.slope,
                value_im: 0.0,
                stderr: None,
                bound: Some(fit.target),
                verdict: Some(verdict.into()),
            });
            report.scaling.push(ScalingRecord { r, fit });
        }
    }
    if cfg.mode == Mode::Exact && theta_points.iter().any(|p| p.0 >= 3) {
        report.theta = Some(fit_theta(ens.tag, spec.degree(), cfg.abs_norm_condition, &theta_points));
    }
    report.wall_time_s = start.elapsed().as_secs_f64();
    Ok(report)
}

/// The graph-order lemma suites, from `max_m`/`max_r` down.
pub fn run_lemmas(opts: &LemmaOptions, seed: u64) -> Result<Vec<LemmaRecord>, RunError> {
    let rs: Vec<usize> = (2..=opts.max_r.max(2)).collect();
    let small_m = opts.max_m.min(6);
    let mut out = Vec::new();
    let mut record = |name: &str, f: &dyn Fn() -> tracecum::Result<(usize, Vec<String>)>| -> Result<(), RunError> {
        let t = Instant::now();
        let (checked, violations) = f().context(|| format!("lemma suite {name}"))?;
        let seconds = t.elapsed().as_secs_f64();
        log::info!("[lemmas {name}] {checked} checked, {} violations, {seconds:.2}s", violations.len());
        out.push(LemmaRecord { suite: name.into(), checked, passed: violations.is_empty(), violations, seconds });
        Ok(())
    };
    let rep = |r: tracecum::graphs::lemmas::SuiteReport| (r.checked, r.violations);
    record("gue-cycle-bound", &|| gue_cycle_suite(opts.max_m).map(rep))?;
    record("gue-order-bound", &|| gue_order_suite(&rs, opts.max_m).map(rep))?;
    record("gue-eps-order-bound", &|| gue_eps_suite(&rs, small_m).map(rep))?;
    record("wigner-order-bound", &|| wigner_sigma_suite(small_m, opts.max_r).map(rep))?;
    record("crossing-pairing", &|| crossing_suite(opts.max_m, opts.max_r.max(2)).map(|c| (c.checked, c.violations)))?;
    record("tree-merge-identity", &|| tree_merge_suite(opts.trials, seed, MemberFamily::Bridgeless).map(rep))?;
    record("connected-merge-bound", &|| connected_merge_suite(opts.trials, seed.wrapping_add(1), MemberFamily::Bridgeless).map(rep))?;
    record("quotient-monotonicity", &|| monotonicity_suite(opts.trials, seed.wrapping_add(2)).map(rep))?;
    Ok(out)
}

fn out_err(path: &Path) -> impl Fn(std::io::Error) -> RunError + '_ {
    move |e| RunError::Output { path: path.to_path_buf(), message: e.to_string() }
}

fn write_text(path: &Path, text: &str) -> Result<(), RunError> {
    std::fs::write(path, text).map_err(out_err(path))
}

/// Writes `<stem>.report.json`, `<stem>.csv` and the plot-data files into
/// `dir`. Returns the paths written.
pub fn write_outputs(report: &RunReport, dir: &Path) -> Result<Vec<PathBuf>, RunError> {
    std::fs::create_dir_all(dir).map_err(out_err(dir))?;
    let stem = &report.config.output.stem;
    let mut written = Vec::new();

    let json = dir.join(format!("{stem}.report.json"));
    let text = serde_json::to_string_pretty(report).map_err(|e| RunError::Output { path: json.clone(), message: e.to_string() })?;
    write_text(&json, &text)?;
    written.push(json);

    if report.config.mode == Mode::VerifyLemmas {
        let path = dir.join(format!("{stem}.lemmas.csv"));
        let mut w = csv::Writer::from_path(&path).map_err(|e| RunError::Output { path: path.clone(), message: e.to_string() })?;
        let csv_err = |e: csv::Error| RunError::Output { path: path.clone(), message: e.to_string() };
        w.write_record(["suite", "checked", "violations", "verdict"]).map_err(csv_err)?;
        for l in &report.lemmas {
            let verdict = if l.passed { "pass" } else { "fail" };
            w.write_record([l.suite.as_str(), &l.checked.to_string(), &l.violations.len().to_string(), verdict]).map_err(csv_err)?;
        }
        w.flush().map_err(out_err(&path))?;
        written.push(path);
        return Ok(written);
    }

    let path = dir.join(format!("{stem}.csv"));
    let mut w = csv::Writer::from_path(&path).map_err(|e| RunError::Output { path: path.clone(), message: e.to_string() })?;
    for row in &report.rows {
        w.serialize(row).map_err(|e| RunError::Output { path: path.clone(), message: e.to_string() })?;
    }
    w.flush().map_err(out_err(&path))?;
    written.push(path);

    let mut rs: Vec<usize> = report.rows.iter().filter(|r| r.mode != Provenance::BoundCheck).filter_map(|r| r.r).collect();
    rs.sort_unstable();
    rs.dedup();
    let mut plots = Vec::new();
    for r in rs {
        let mut text = format!("# log N, log |K_{r}|\n");
        for row in report.rows.iter().filter(|x| x.r == Some(r) && x.mode != Provenance::BoundCheck) {
            let k = Complex64::new(row.value_re, row.value_im).norm();
            if let (Some(n), true) = (row.n, k > 0.0) {
                writeln!(text, "{} {}", (n as f64).ln(), k.ln()).unwrap();
            }
        }
        let path = dir.join(format!("{stem}.logK.r{r}.dat"));
        write_text(&path, &text)?;
        plots.push((path.clone(), format!("r = {r}"), false));
        written.push(path);
    }
    for c in &report.clt {
        let mut text = String::from("# x, exceedance, bound\n");
        for &(x, p) in &c.diagnostics.exceedance {
            writeln!(text, "{x} {p} {}", c.diagnostics.concentration.curve(x)).unwrap();
        }
        let path = dir.join(format!("{stem}.clt.N{}.dat", c.n));
        write_text(&path, &text)?;
        plots.push((path.clone(), format!("N = {}", c.n), true));
        written.push(path);
    }
    if report.config.output.gnuplot && !plots.is_empty() {
        let path = dir.join(format!("{stem}.gp"));
        let mut f = std::fs::File::create(&path).map_err(out_err(&path))?;
        let mut script = String::from("set key left\n");
        for (data, title, clt) in &plots {
            let name = data.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            if *clt {
                writeln!(script, "set logscale y\nplot '{name}' using 1:2 with points title 'P(Z >= x), {title}', '' using 1:3 with lines title 'fitted bound'\nunset logscale y\npause -1").unwrap();
            } else {
                writeln!(script, "plot '{name}' using 1:2 with linespoints title '{title}'\npause -1").unwrap();
            }
        }
        f.write_all(script.as_bytes()).map_err(out_err(&path))?;
        written.push(path);
    }
    Ok(written)
}

/// Plain-text table of the rows, for the terminal.
pub fn summary(report: &RunReport) -> String {
    let mut s = String::new();
    if !report.lemmas.is_empty() {
        writeln!(s, "{:<24} {:>10} {:>11}  verdict", "suite", "checked", "violations").unwrap();
        for l in &report.lemmas {
            writeln!(s, "{:<24} {:>10} {:>11}  {}", l.suite, l.checked, l.violations.len(), if l.passed { "pass" } else { "fail" }).unwrap();
        }
    }
    if !report.rows.is_empty() {
        writeln!(s, "{:>5} {:>3} {:>12} {:>14} {:>14} {:>12} {:>12}  verdict", "N", "r", "mode", "value_re", "value_im", "stderr", "bound").unwrap();
        let opt = |x: Option<f64>| x.map_or(String::new(), |v| format!("{v:.6e}"));
        for row in &report.rows {
            let mode = match row.mode {
                Provenance::Exact => "exact",
                Provenance::Mc => "mc",
                Provenance::BoundCheck => "bound-check",
            };
            writeln!(
                s,
                "{:>5} {:>3} {:>12} {:>14.6e} {:>14.6e} {:>12} {:>12}  {}",
                row.n.map_or(String::new(), |n| n.to_string()),
                row.r.map_or(String::new(), |r| r.to_string()),
                mode,
                row.value_re,
                row.value_im,
                opt(row.stderr),
                opt(row.bound),
                row.verdict.as_deref().unwrap_or("")
            )
            .unwrap();
        }
    }
    for c in &report.clt {
        writeln!(s, "clt N={}: KS {:.4}, skewness {:.4}, excess kurtosis {:.4}", c.n, c.diagnostics.ks, c.diagnostics.skewness, c.diagnostics.excess_kurtosis).unwrap();
    }
    writeln!(s, "{} failure(s), {:.2}s", report.failures, report.wall_time_s).unwrap();
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    #[test]
    fn gue_square_exact_rows() {
        let cfg = parse_config(r#"{"mode": "exact", "polynomial": [{"word": [["X", 0], ["X", 0]]}], "n": [2, 3, 4, 5, 6], "r": [2]}"#).unwrap();
        let rep = execute(&cfg).unwrap();
        let exact: Vec<&Row> = rep.rows.iter().filter(|r| r.mode == Provenance::Exact).collect();
        assert_eq!(exact.len(), 5);
        assert!(exact.iter().all(|r| (r.value_re - 2.0).abs() < 1e-12 && r.value_im == 0.0));
        assert_eq!(rep.exit_code(), 0);
        assert_eq!(rep.rows.iter().filter(|r| r.mode == Provenance::BoundCheck).count(), 5);
    }

    #[test]
    fn plans_are_reused_across_n() {
        let cfg = parse_config(
            r#"{"mode": "exact", "model": "wigner", "polynomial": [{"word": [["X", 0], ["D", 0]]}],
                "deterministic": ["upper-bidiagonal-ones"], "n": [3, 4], "r": [2]}"#,
        )
        .unwrap();
        let ens = cfg.ensemble().unwrap();
        let spec = cfg.polynomial_spec().unwrap();
        let mut ev = ExactEvaluator::new(&cfg, &ens, 1).unwrap();
        for n in [3, 4] {
            let v = ev.cumulant(&spec, 2, &cfg.deterministic_set(n).unwrap()).unwrap();
            // (2N − 1) N^{-1} / 12
            assert!((v.re - (2.0 * n as f64 - 1.0) / n as f64 / 12.0).abs() < 1e-12);
        }
        assert_eq!(ev.plans.len(), 1);
    }

    #[test]
    fn polynomial_bound_uses_coefficient_moduli() {
        // K₂(Tr(2iX)) = (2i)²·K₂(Tr X) = −4, and the bound is |2i|²·2!! = 8
        let cfg = parse_config(r#"{"mode": "exact", "polynomial": [{"word": [["X", 0]], "coeff": [0, 2]}], "n": [3], "r": [2]}"#).unwrap();
        let rep = execute(&cfg).unwrap();
        let check = rep.rows.iter().find(|r| r.mode == Provenance::BoundCheck).unwrap();
        assert_eq!(check.bound, Some(8.0));
        assert_eq!(check.value_re, 4.0);
        assert_eq!(check.verdict.as_deref(), Some("pass"));
    }

    #[test]
    fn spec_id_is_stable() {
        let a = PolynomialSpec::parse(&["X0 X0"]).unwrap();
        assert_eq!(spec_id(&a), spec_id(&a.clone()));
        assert_ne!(spec_id(&a), spec_id(&PolynomialSpec::parse(&["X0"]).unwrap()));
    }
}

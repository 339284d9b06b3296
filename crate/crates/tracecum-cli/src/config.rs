//! Experiment configuration: a JSON document, validated into something the
//! runner can execute without further checks.

use num_complex::Complex64;
use serde::de::{self, SeqAccess, Visitor};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use tracecum::expansion::{Budget, DeterministicSet, Monomial, PolynomialSpec};
use tracecum::randmat::{builtin_set, Ensemble, EnsembleTag, EntryDistribution, EntryLaw};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ConfigError {
    /// `pointer` is a JSON pointer into the document ("" for the root).
    #[error("config error at '{pointer}': {message}")]
    Invalid { pointer: String, message: String },
    #[error("condition (C3) fails at '{pointer}': {message}")]
    ConditionC3 { pointer: String, message: String },
}

impl ConfigError {
    fn at(pointer: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigError::Invalid { pointer: pointer.into(), message: message.into() }
    }

    pub fn pointer(&self) -> &str {
        match self {
            ConfigError::Invalid { pointer, .. } | ConfigError::ConditionC3 { pointer, .. } => pointer,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Exact,
    Mc,
    VerifyLemmas,
    Scaling,
    Clt,
}

impl Mode {
    pub const ALL: [(Mode, &'static str, &'static str); 5] = [
        (Mode::Exact, "exact", "exact cumulants K_r(Tr P) with corollary bound checks"),
        (Mode::Mc, "mc", "Monte Carlo cumulant estimates with bootstrap standard errors"),
        (Mode::VerifyLemmas, "verify-lemmas", "exhaustive and randomized graph-order lemma suites"),
        (Mode::Scaling, "scaling", "log-log slope of |K_r| against N, checked against the predicted order"),
        (Mode::Clt, "clt", "normalized statistic: KS distance, tail table, concentration fit"),
    ];
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Evaluator {
    /// Pairing sum for GUE/GOE, general expansion for Wigner.
    Auto,
    General,
    Gaussian,
    Oracle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    Exact,
    Mc,
}

/// One word factor: `["X", i]`, `["X", i, "T"]` or `["D", j]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Token {
    X { symbol: usize, transposed: bool },
    D(usize),
}

impl Serialize for Token {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match *self {
            Token::X { symbol, transposed } => {
                let mut seq = s.serialize_seq(Some(if transposed { 3 } else { 2 }))?;
                seq.serialize_element("X")?;
                seq.serialize_element(&symbol)?;
                if transposed {
                    seq.serialize_element("T")?;
                }
                seq.end()
            }
            Token::D(j) => {
                let mut seq = s.serialize_seq(Some(2))?;
                seq.serialize_element("D")?;
                seq.serialize_element(&j)?;
                seq.end()
            }
        }
    }
}

struct TokenVisitor;

impl<'de> Visitor<'de> for TokenVisitor {
    type Value = Token;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str(r#"a factor ["X", i], ["X", i, "T"] or ["D", j]"#)
    }

    fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Token, A::Error> {
        let kind: String = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(0, &self))?;
        let index: usize = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(1, &self))?;
        let mark: Option<String> = seq.next_element()?;
        if seq.next_element::<de::IgnoredAny>()?.is_some() {
            return Err(de::Error::invalid_length(4, &self));
        }
        match (kind.as_str(), mark.as_deref()) {
            ("X", None) => Ok(Token::X { symbol: index, transposed: false }),
            ("X", Some("T")) => Ok(Token::X { symbol: index, transposed: true }),
            ("X", Some(m)) => Err(de::Error::custom(format!("unknown mark '{m}' (only \"T\" is allowed)"))),
            ("D", None) => Ok(Token::D(index)),
            ("D", Some(_)) => Err(de::Error::custom("deterministic factors take no mark")),
            (k, _) => Err(de::Error::custom(format!("unknown factor kind '{k}' (expected \"X\" or \"D\")"))),
        }
    }
}

impl<'de> Deserialize<'de> for Token {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Token, D::Error> {
        d.deserialize_seq(TokenVisitor)
    }
}

/// A real coefficient, or `[re, im]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coeff {
    Real(f64),
    Complex([f64; 2]),
}

impl Coeff {
    pub fn value(self) -> Complex64 {
        match self {
            Coeff::Real(x) => Complex64::new(x, 0.0),
            Coeff::Complex([re, im]) => Complex64::new(re, im),
        }
    }
}

fn unit() -> Coeff {
    Coeff::Real(1.0)
}

fn is_unit(c: &Coeff) -> bool {
    *c == Coeff::Real(1.0)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    pub word: Vec<Token>,
    #[serde(default = "unit", skip_serializing_if = "is_unit")]
    pub coeff: Coeff,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelName {
    Gue,
    Goe,
    Wigner,
}

/// Entry laws of a Wigner model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Entries {
    pub off: EntryDistribution,
    pub diag: EntryDistribution,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LemmaOptions {
    pub max_m: usize,
    pub max_r: usize,
    /// Random instances per merge suite.
    pub trials: usize,
}

impl Default for LemmaOptions {
    fn default() -> Self {
        LemmaOptions { max_m: 8, max_r: 3, trials: 200 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Output {
    pub dir: PathBuf,
    /// File name prefix for every file written.
    pub stem: String,
    /// Also write a gnuplot script next to the data files.
    pub gnuplot: bool,
    /// Keep the raw trace samples (binary) of mc and clt runs.
    pub save_samples: bool,
}

impl Default for Output {
    fn default() -> Self {
        Output { dir: PathBuf::from("tracecum-out"), stem: "run".into(), gnuplot: false, save_samples: false }
    }
}

fn default_scaling_tol() -> f64 {
    0.1
}

fn default_slack() -> f64 {
    1.5
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub mode: Mode,
    #[serde(default = "gue_model")]
    pub model: ModelName,
    /// Wigner entry laws; uniform(−1/2, 1/2) everywhere when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub entries: Option<Entries>,
    #[serde(default)]
    pub polynomial: Vec<Term>,
    /// Builtin name bound to D_j, by position.
    #[serde(default)]
    pub deterministic: Vec<String>,
    #[serde(default)]
    pub n: Vec<usize>,
    #[serde(default)]
    pub r: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "auto")]
    pub evaluator: Evaluator,
    /// Where scaling mode takes its values from.
    #[serde(default = "exact_source")]
    pub source: Source,
    #[serde(default = "default_scaling_tol")]
    pub scaling_tol: f64,
    #[serde(default = "default_slack")]
    pub clt_slack: f64,
    /// Use the absolute-value norm form of the Wigner theorems.
    #[serde(default)]
    pub abs_norm_condition: bool,
    #[serde(default)]
    pub budget: Budget,
    #[serde(default)]
    pub lemmas: LemmaOptions,
    #[serde(default)]
    pub output: Output,
}

fn gue_model() -> ModelName {
    ModelName::Gue
}

fn auto() -> Evaluator {
    Evaluator::Auto
}

fn exact_source() -> Source {
    Source::Exact
}

fn pointer_of(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = String::new();
    for seg in path.iter() {
        match seg {
            Segment::Seq { index } => out.push_str(&format!("/{index}")),
            Segment::Map { key } => out.push_str(&format!("/{}", key.replace('~', "~0").replace('/', "~1"))),
            Segment::Enum { variant } => out.push_str(&format!("/{variant}")),
            Segment::Unknown => {}
        }
    }
    out
}

/// Parses and validates a config document.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let cfg: ExperimentConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let pointer = pointer_of(e.path());
        ConfigError::at(pointer, e.into_inner().to_string())
    })?;
    cfg.validate()?;
    Ok(cfg)
}

impl ExperimentConfig {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn ensemble(&self) -> Result<Ensemble, ConfigError> {
        match self.model {
            ModelName::Gue => Ok(Ensemble::gue()),
            ModelName::Goe => Ok(Ensemble::goe()),
            ModelName::Wigner => match &self.entries {
                None => Ok(Ensemble::uniform_wigner()),
                Some(e) => Ensemble::wigner(e.off.clone(), e.diag.clone()).map_err(|err| ConfigError::at("/entries", err.to_string())),
            },
        }
    }

    pub fn tag(&self) -> EnsembleTag {
        match self.model {
            ModelName::Gue => EnsembleTag::Gue,
            ModelName::Goe => EnsembleTag::Goe,
            ModelName::Wigner => EnsembleTag::Wigner,
        }
    }

    /// The polynomial as the library type. D factors attach to the preceding
    /// X; leading D factors move to the end of the word.
    pub fn polynomial_spec(&self) -> Result<PolynomialSpec, ConfigError> {
        let mut monomials = Vec::new();
        for (k, term) in self.polynomial.iter().enumerate() {
            let text: Vec<String> = term
                .word
                .iter()
                .map(|t| match *t {
                    Token::X { symbol, transposed: false } => format!("X{symbol}"),
                    Token::X { symbol, transposed: true } => format!("X{symbol}^T"),
                    Token::D(j) => format!("D{j}"),
                })
                .collect();
            let mut m: Monomial = text.join(" ").parse().map_err(|e: tracecum::Error| ConfigError::at(format!("/polynomial/{k}/word"), e.to_string()))?;
            m.coeff = term.coeff.value();
            monomials.push(m);
        }
        PolynomialSpec::new(monomials).map_err(|e| ConfigError::at("/polynomial", e.to_string()))
    }

    pub fn deterministic_set(&self, n: usize) -> tracecum::Result<DeterministicSet> {
        let names: Vec<&str> = self.deterministic.iter().map(String::as_str).collect();
        builtin_set(&names, n)
    }

    /// Entry-table order a Wigner model needs for cumulants up to the largest r.
    pub fn table_order(&self, degree: usize) -> usize {
        let m = self.r.iter().copied().max().unwrap_or(2) * degree;
        (m + m % 2).max(2)
    }

    fn validate(&self) -> Result<(), ConfigError> {
        if self.entries.is_some() && self.model != ModelName::Wigner {
            return Err(ConfigError::at("/entries", "entry laws can only be chosen for the wigner model"));
        }
        self.ensemble()?;
        if self.evaluator == Evaluator::Gaussian && self.model == ModelName::Wigner {
            return Err(ConfigError::at("/evaluator", "the pairing evaluator only applies to gue and goe"));
        }
        if !(self.scaling_tol.is_finite() && self.scaling_tol >= 0.0) {
            return Err(ConfigError::at("/scaling_tol", "must be a nonnegative number"));
        }
        if !(self.clt_slack.is_finite() && self.clt_slack >= 1.0) {
            return Err(ConfigError::at("/clt_slack", "must be at least 1"));
        }
        if self.mode == Mode::VerifyLemmas {
            if self.lemmas.max_m < 2 || self.lemmas.max_r < 1 {
                return Err(ConfigError::at("/lemmas", "need max_m ≥ 2 and max_r ≥ 1"));
            }
            return Ok(());
        }
        if self.polynomial.is_empty() {
            return Err(ConfigError::at("/polynomial", format!("{:?} mode needs a nonempty polynomial", self.mode)));
        }
        for (k, term) in self.polynomial.iter().enumerate() {
            if !term.word.iter().any(|t| matches!(t, Token::X { .. })) {
                return Err(ConfigError::at(format!("/polynomial/{k}/word"), "a word needs at least one X factor"));
            }
            for (i, t) in term.word.iter().enumerate() {
                if let Token::D(j) = *t {
                    if j >= self.deterministic.len() {
                        return Err(ConfigError::at(
                            format!("/polynomial/{k}/word/{i}"),
                            format!("D{j} is not bound (the deterministic list has {} entries)", self.deterministic.len()),
                        ));
                    }
                }
            }
        }
        if self.n.is_empty() {
            return Err(ConfigError::at("/n", "needs at least one matrix size"));
        }
        if let Some(i) = self.n.iter().position(|&n| n == 0) {
            return Err(ConfigError::at(format!("/n/{i}"), "N must be positive"));
        }
        if let Some(i) = self.r.iter().position(|&r| r == 0) {
            return Err(ConfigError::at(format!("/r/{i}"), "cumulant orders start at 1"));
        }
        let needs_r = matches!(self.mode, Mode::Exact | Mode::Mc | Mode::Scaling);
        if needs_r && self.r.is_empty() {
            return Err(ConfigError::at("/r", format!("{:?} mode needs at least one cumulant order", self.mode)));
        }
        let needs_samples = matches!(self.mode, Mode::Mc | Mode::Clt) || (self.mode == Mode::Scaling && self.source == Source::Mc);
        if needs_samples && self.samples.is_none_or(|s| s == 0) {
            return Err(ConfigError::at("/samples", format!("{:?} mode needs a positive sample count", self.mode)));
        }
        let spec = self.polynomial_spec()?;
        let det = self.deterministic_set(self.n[0]).map_err(|e| {
            let at = self.deterministic.iter().position(|name| tracecum::randmat::builtin_deterministic(name, self.n[0]).is_err());
            ConfigError::at(at.map_or("/deterministic".into(), |j| format!("/deterministic/{j}")), e.to_string())
        })?;
        if self.mode == Mode::Clt {
            check_real_statistic(&spec, &det, &self.ensemble()?)?;
        }
        Ok(())
    }
}

/// Word factor as seen by the adjoint: D_j may turn into D_j*.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Factor {
    X(usize, bool),
    D(usize, bool),
}

fn factors(m: &Monomial) -> Vec<Factor> {
    m.letters
        .iter()
        .flat_map(|l| std::iter::once(Factor::X(l.symbol, l.mark == tracecum::partitions::Mark::Transposed)).chain(l.det.iter().map(|&j| Factor::D(j, false))))
        .collect()
}

fn least_rotation(w: &[Factor]) -> Vec<Factor> {
    (0..w.len()).map(|s| [&w[s..], &w[..s]].concat()).min().unwrap_or_default()
}

/// Tr P must be real for the normalized statistic. Sufficient conditions:
/// every matrix involved is real symmetric-compatible (real ensemble, real
/// D's), or P equals its adjoint up to cyclic rotation of each word. The
/// adjoint reverses a word; X and X^T are self-adjoint; a non-Hermitian D_j
/// becomes a separate symbol D_j*.
fn check_real_statistic(spec: &PolynomialSpec, det: &DeterministicSet, ens: &Ensemble) -> Result<(), ConfigError> {
    let real_d = (0..det.len()).all(|j| det.get(j).map(|m| m.iter().all(|z| z.im == 0.0)).unwrap_or(false));
    if real_d && !ens.off.is_complex() && !ens.diag.is_complex() {
        return Ok(());
    }
    let hermitian: Vec<bool> = (0..det.len())
        .map(|j| det.get(j).map(|m| (m - m.adjoint()).iter().all(|z| z.norm() <= 1e-12)).unwrap_or(false))
        .collect();
    let mut forward: BTreeMap<Vec<Factor>, Complex64> = BTreeMap::new();
    let mut adjoint: BTreeMap<Vec<Factor>, Complex64> = BTreeMap::new();
    for m in &spec.monomials {
        let w = factors(m);
        *forward.entry(least_rotation(&w)).or_default() += m.coeff;
        let adj: Vec<Factor> = w
            .iter()
            .rev()
            .map(|f| match *f {
                Factor::D(j, _) if !hermitian[j] => Factor::D(j, true),
                other => other,
            })
            .collect();
        *adjoint.entry(least_rotation(&adj)).or_default() += m.coeff.conj();
    }
    let keys: std::collections::BTreeSet<_> = forward.keys().chain(adjoint.keys()).collect();
    let zero = Complex64::new(0.0, 0.0);
    for k in keys {
        let a = forward.get(k).copied().unwrap_or(zero);
        let b = adjoint.get(k).copied().unwrap_or(zero);
        if (a - b).norm() > 1e-12 * (1.0 + a.norm().max(b.norm())) {
            return Err(ConfigError::ConditionC3 {
                pointer: "/polynomial".into(),
                message: "clt mode needs a self-adjoint polynomial so that Tr P is real".into(),
            });
        }
    }
    Ok(())
}

/// Names of the entry laws accepted under `entries`.
pub fn entry_law_names() -> Vec<(&'static str, &'static str)> {
    let laws = [
        (EntryLaw::GaussianReal, "N(0,1)"),
        (EntryLaw::GaussianComplex, "complex N(0,1), E|z|² = 1"),
        (EntryLaw::Uniform, "uniform(-1/2, 1/2)"),
        (EntryLaw::Rademacher, "±1 with probability 1/2"),
        (EntryLaw::SymmetrizedExponential, "Laplace, variance 1"),
    ];
    let mut out: Vec<_> = laws.into_iter().map(|(l, d)| (EntryDistribution::standard(l).name(), d)).collect();
    out.push(("custom", "symmetric finite law {\"law\":\"custom\",\"values\":[..],\"probs\":[..]}"));
    out
}

use crate::error::{Error, Result};
use crate::partitions::Mark;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

/// One factor X_i^ε D of a word. `det` lists deterministic matrices
/// multiplied in order after the random one; empty means the identity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Letter {
    pub symbol: usize,
    #[serde(default)]
    pub mark: Mark,
    #[serde(default)]
    pub det: Vec<usize>,
}

impl Letter {
    pub fn x(symbol: usize) -> Self {
        Letter { symbol, mark: Mark::Plain, det: Vec::new() }
    }

    pub fn xt(symbol: usize) -> Self {
        Letter { symbol, mark: Mark::Transposed, det: Vec::new() }
    }

    pub fn with_det(mut self, j: usize) -> Self {
        self.det.push(j);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Monomial {
    pub letters: Vec<Letter>,
    pub coeff: Complex64,
}

impl Monomial {
    pub fn new(letters: Vec<Letter>) -> Self {
        Monomial { letters, coeff: Complex64::new(1.0, 0.0) }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

/// Parses words such as `X0 D1 X0^T D0 D2`: a random letter is `X<i>` with an
/// optional `^T`, and each `D<j>` attaches to the preceding random letter.
/// Leading deterministic factors are rotated to the end (cyclicity of the
/// trace).
impl FromStr for Monomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut letters: Vec<Letter> = Vec::new();
        let mut leading: Vec<usize> = Vec::new();
        for tok in s.split_whitespace() {
            let bad = || Error::Parse(format!("bad token '{tok}' in word '{s}'"));
            if let Some(rest) = tok.strip_prefix('X') {
                let (idx, mark) = match rest.strip_suffix("^T") {
                    Some(i) => (i, Mark::Transposed),
                    None => (rest, Mark::Plain),
                };
                let symbol = idx.parse().map_err(|_| bad())?;
                letters.push(Letter { symbol, mark, det: Vec::new() });
            } else if let Some(rest) = tok.strip_prefix('D') {
                let j = rest.parse().map_err(|_| bad())?;
                match letters.last_mut() {
                    Some(l) => l.det.push(j),
                    None => leading.push(j),
                }
            } else {
                return Err(bad());
            }
        }
        if letters.is_empty() {
            return Err(Error::Parse(format!("word '{s}' has no random factor")));
        }
        letters.last_mut().unwrap().det.extend(leading);
        Ok(Monomial::new(letters))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for l in &self.letters {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            write!(f, "X{}", l.symbol)?;
            if l.mark == Mark::Transposed {
                write!(f, "^T")?;
            }
            for j in &l.det {
                write!(f, " D{j}")?;
            }
        }
        Ok(())
    }
}

/// P = Σ_k c_k · word_k.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolynomialSpec {
    pub monomials: Vec<Monomial>,
}

impl PolynomialSpec {
    pub fn new(monomials: Vec<Monomial>) -> Result<Self> {
        if monomials.is_empty() {
            return Err(Error::Config("polynomial has no monomials".into()));
        }
        if monomials.iter().any(|m| m.is_empty()) {
            return Err(Error::Config("every monomial needs at least one random letter".into()));
        }
        Ok(PolynomialSpec { monomials })
    }

    /// Sum of unit-coefficient words, e.g. `["X0", "X0 X0"]` for X + X².
    pub fn parse(words: &[&str]) -> Result<Self> {
        PolynomialSpec::new(words.iter().map(|w| w.parse()).collect::<Result<Vec<_>>>()?)
    }

    /// M, the longest word length.
    pub fn degree(&self) -> usize {
        self.monomials.iter().map(|m| m.len()).max().unwrap_or(0)
    }

    pub fn num_monomials(&self) -> usize {
        self.monomials.len()
    }

    pub fn symbols(&self) -> BTreeSet<usize> {
        self.monomials.iter().flat_map(|m| m.letters.iter().map(|l| l.symbol)).collect()
    }

    pub fn det_indices(&self) -> BTreeSet<usize> {
        self.monomials
            .iter()
            .flat_map(|m| m.letters.iter().flat_map(|l| l.det.iter().copied()))
            .collect()
    }
}

impl fmt::Display for PolynomialSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, m) in self.monomials.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if m.coeff != Complex64::new(1.0, 0.0) {
                write!(f, "({})·", m.coeff)?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

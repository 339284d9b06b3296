use crate::error::{Error, Result};
use crate::partitions::{cumulants_from_moments, MomentCumulantTable, TableMode};
use num_complex::Complex64;
use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;
use rand_distr::{Exp1, StandardNormal};
use serde::{Deserialize, Serialize};

/// Base laws before scaling. All are symmetric, so odd cumulants vanish.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "law")]
pub enum EntryLaw {
    /// N(0,1).
    GaussianReal,
    /// Z = a + ib with a, b independent N(0,1/2); only K₂(Z, Z̄) = 1 survives.
    GaussianComplex,
    /// uniform(−1/2, 1/2), variance 1/12.
    Uniform,
    /// ±1 with probability 1/2.
    Rademacher,
    /// Laplace with variance 1.
    SymmetrizedExponential,
    /// Finite symmetric law: P(x = values[i]) = probs[i].
    Custom { values: Vec<f64>, probs: Vec<f64> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntryDistribution {
    #[serde(flatten)]
    pub law: EntryLaw,
    #[serde(default = "one")]
    pub scale: f64,
}

fn one() -> f64 {
    1.0
}

impl EntryDistribution {
    pub fn new(law: EntryLaw, scale: f64) -> Result<Self> {
        let d = EntryDistribution { law, scale };
        d.validate()?;
        Ok(d)
    }

    pub fn standard(law: EntryLaw) -> Self {
        EntryDistribution { law, scale: 1.0 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.scale.is_finite() && self.scale > 0.0) {
            return Err(Error::Config(format!("entry scale must be positive, got {}", self.scale)));
        }
        if let EntryLaw::Custom { values, probs } = &self.law {
            if values.is_empty() || values.len() != probs.len() {
                return Err(Error::Config("custom law needs matching nonempty values and probs".into()));
            }
            if probs.iter().any(|&p| !(p >= 0.0)) || (probs.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
                return Err(Error::Config("custom law probabilities must be nonnegative and sum to 1".into()));
            }
            // symmetric: the mass at v equals the mass at -v
            for &v in values {
                let mass = |x: f64| -> f64 {
                    values.iter().zip(probs).filter(|(y, _)| (**y - x).abs() <= 1e-12 * (1.0 + x.abs())).map(|(_, p)| p).sum()
                };
                if (mass(v) - mass(-v)).abs() > 1e-12 {
                    return Err(Error::Config(format!("custom law is not symmetric at value {v}")));
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &'static str {
        match self.law {
            EntryLaw::GaussianReal => "gaussian-real",
            EntryLaw::GaussianComplex => "gaussian-complex",
            EntryLaw::Uniform => "uniform",
            EntryLaw::Rademacher => "rademacher",
            EntryLaw::SymmetrizedExponential => "symmetrized-exponential",
            EntryLaw::Custom { .. } => "custom",
        }
    }

    pub fn is_complex(&self) -> bool {
        matches!(self.law, EntryLaw::GaussianComplex)
    }

    /// E x^k for a real law (scale included).
    fn real_moment(&self, k: usize) -> f64 {
        if k % 2 == 1 {
            return 0.0;
        }
        let s = self.scale.powi(k as i32);
        let base = match &self.law {
            EntryLaw::GaussianReal => (1..k).step_by(2).map(|i| i as f64).product::<f64>(),
            EntryLaw::Uniform => 1.0 / ((k as f64 + 1.0) * 2f64.powi(k as i32)),
            EntryLaw::Rademacher => 1.0,
            // Laplace(b) with 2b² = 1: E x^k = k! b^k
            EntryLaw::SymmetrizedExponential => (1..=k).map(|i| i as f64).product::<f64>() * 0.5f64.powi(k as i32 / 2),
            EntryLaw::Custom { values, probs } => values.iter().zip(probs).map(|(v, p)| p * v.powi(k as i32)).sum(),
            EntryLaw::GaussianComplex => unreachable!("complex law has no real moments"),
        };
        base * s
    }

    /// Joint cumulants up to `order`, in complex mode for the complex
    /// Gaussian and real mode otherwise. Real laws go through exact moments
    /// and Möbius inversion.
    pub fn cumulant_table(&self, order: usize) -> Result<MomentCumulantTable> {
        if self.is_complex() {
            let s2 = self.scale * self.scale;
            let rows = (1..=order)
                .map(|n| {
                    (0..=n)
                        .map(|q| if n == 2 && q == 1 { Complex64::new(s2, 0.0) } else { Complex64::new(0.0, 0.0) })
                        .collect()
                })
                .collect();
            return MomentCumulantTable::complex(rows);
        }
        let moments: Vec<f64> = (1..=order).map(|k| self.real_moment(k)).collect();
        let mut k = cumulants_from_moments(&MomentCumulantTable::real(&moments))?;
        debug_assert_eq!(k.mode(), TableMode::Real);
        if matches!(self.law, EntryLaw::GaussianReal) {
            // exact zeros above order 2
            let v: Vec<f64> = (1..=order).map(|n| if n == 2 { self.scale * self.scale } else { 0.0 }).collect();
            k = MomentCumulantTable::real(&v);
        }
        Ok(k)
    }

    /// E|x|².
    pub fn variance(&self) -> f64 {
        if self.is_complex() {
            self.scale * self.scale
        } else {
            self.real_moment(2)
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Complex64 {
        let s = self.scale;
        let re = |x: f64| Complex64::new(s * x, 0.0);
        match &self.law {
            EntryLaw::GaussianReal => re(rng.sample(StandardNormal)),
            EntryLaw::GaussianComplex => {
                let a: f64 = rng.sample(StandardNormal);
                let b: f64 = rng.sample(StandardNormal);
                Complex64::new(a, b) * (s * std::f64::consts::FRAC_1_SQRT_2)
            }
            EntryLaw::Uniform => re(rng.gen::<f64>() - 0.5),
            EntryLaw::Rademacher => re(if rng.gen::<bool>() { 1.0 } else { -1.0 }),
            EntryLaw::SymmetrizedExponential => {
                let e: f64 = rng.sample(Exp1);
                let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
                re(sign * e * std::f64::consts::FRAC_1_SQRT_2)
            }
            EntryLaw::Custom { values, probs } => {
                let w = WeightedIndex::new(probs).expect("validated probabilities");
                re(values[w.sample(rng)])
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(d: &EntryDistribution, n: usize) -> f64 {
        d.cumulant_table(n).unwrap().at(n, 0).re
    }

    #[test]
    fn uniform_cumulants_are_bernoulli_over_n() {
        let u = EntryDistribution::standard(EntryLaw::Uniform);
        // B_2/2, B_4/4, B_6/6, B_8/8
        for (n, want) in [(2, 1.0 / 12.0), (4, -1.0 / 120.0), (6, 1.0 / 252.0), (8, -1.0 / 240.0)] {
            assert!((k(&u, n) - want).abs() < 1e-12, "K{n} = {}", k(&u, n));
        }
        assert!(k(&u, 5).abs() < 1e-15);
    }

    #[test]
    fn other_laws() {
        let r = EntryDistribution::standard(EntryLaw::Rademacher);
        assert!((k(&r, 4) + 2.0).abs() < 1e-12);
        let l = EntryDistribution::standard(EntryLaw::SymmetrizedExponential);
        assert!((k(&l, 2) - 1.0).abs() < 1e-12);
        // Laplace(b): K_4 = 12 b^4 = 3 for 2b² = 1
        assert!((k(&l, 4) - 3.0).abs() < 1e-12);
        let c = EntryDistribution::standard(EntryLaw::GaussianComplex);
        let t = c.cumulant_table(4).unwrap();
        assert_eq!(t.at(2, 1), Complex64::new(1.0, 0.0));
        assert_eq!(t.at(2, 0), Complex64::new(0.0, 0.0));
        let g = EntryDistribution::new(EntryLaw::GaussianReal, 2f64.sqrt()).unwrap();
        assert!((k(&g, 2) - 2.0).abs() < 1e-12 && k(&g, 4) == 0.0);
    }

    #[test]
    fn custom_validation() {
        let ok = EntryLaw::Custom { values: vec![-2.0, 0.0, 2.0], probs: vec![0.25, 0.5, 0.25] };
        let d = EntryDistribution::new(ok, 1.0).unwrap();
        assert!((d.variance() - 2.0).abs() < 1e-12);
        let skew = EntryLaw::Custom { values: vec![-1.0, 2.0], probs: vec![0.5, 0.5] };
        assert!(EntryDistribution::new(skew, 1.0).is_err());
        assert!(EntryDistribution::new(EntryLaw::Uniform, 0.0).is_err());
    }
}

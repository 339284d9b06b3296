use crate::error::{Error, Result};
use crate::partitions::{MomentCumulantTable, TableMode};
use crate::randmat::{Ensemble, EnsembleTag};
use num_complex::Complex64;

/// Joint cumulants of the entry variables x_o (strict upper triangle) and
/// x_d (diagonal).
///
/// The expansion only sees a kernel ker(ψ), not the order of the indices, so
/// it cannot tell x_o from its conjugate. Models therefore need
/// K(n, q) = K(n, n − q), which every model built here satisfies.
#[derive(Clone, Debug, PartialEq)]
pub struct EntryCumulantModel {
    tag: EnsembleTag,
    off: MomentCumulantTable,
    diag: MomentCumulantTable,
    c: f64,
}

const TOL: f64 = 1e-12;

impl EntryCumulantModel {
    pub fn gue() -> Self {
        let off = MomentCumulantTable::complex(vec![
            vec![Complex64::new(0.0, 0.0); 2],
            vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
        ])
        .expect("well-formed rows");
        EntryCumulantModel { tag: EnsembleTag::Gue, off, diag: MomentCumulantTable::real(&[0.0, 1.0]), c: 0.5 }
    }

    pub fn goe() -> Self {
        EntryCumulantModel {
            tag: EnsembleTag::Goe,
            off: MomentCumulantTable::real(&[0.0, 1.0]),
            diag: MomentCumulantTable::real(&[0.0, 2.0]),
            c: 1.0,
        }
    }

    /// General Wigner model from cumulant tables; checks vanishing odd
    /// orders, conjugation symmetry and a real diagonal.
    pub fn wigner(off: MomentCumulantTable, diag: MomentCumulantTable) -> Result<Self> {
        if diag.mode() != TableMode::Real {
            return Err(Error::Config("diagonal cumulant table must be real".into()));
        }
        for (t, what) in [(&off, "off-diagonal"), (&diag, "diagonal")] {
            let scale = (1..=t.order()).flat_map(|n| (0..=n).map(move |q| (n, q))).map(|(n, q)| t.at(n, q).norm()).fold(0.0, f64::max);
            for n in 1..=t.order() {
                for q in 0..=n {
                    let v = t.at(n, q);
                    if n % 2 == 1 && v.norm() > TOL * scale.max(1.0) {
                        return Err(Error::Config(format!("{what} cumulant K_{n} (q={q}) = {v} but odd cumulants must vanish")));
                    }
                    if (v - t.at(n, n - q)).norm() > TOL * scale.max(1.0) {
                        return Err(Error::Config(format!(
                            "{what} cumulants must satisfy K(n,q) = K(n,n-q); K({n},{q}) = {v}, K({n},{}) = {}",
                            n - q,
                            t.at(n, n - q)
                        )));
                    }
                }
            }
        }
        let c = off.subexponential_constant().max(diag.subexponential_constant());
        Ok(EntryCumulantModel { tag: EnsembleTag::Wigner, off, diag, c })
    }

    /// Model matching an [`Ensemble`]; Wigner tables are declared up to `order`.
    pub fn from_ensemble(ens: &Ensemble, order: usize) -> Result<Self> {
        match ens.tag {
            EnsembleTag::Gue => Ok(Self::gue()),
            EnsembleTag::Goe => Ok(Self::goe()),
            EnsembleTag::Wigner => Self::wigner(ens.off.cumulant_table(order)?, ens.diag.cumulant_table(order)?),
        }
    }

    pub fn tag(&self) -> EnsembleTag {
        self.tag
    }

    fn gaussian(&self) -> bool {
        self.tag != EnsembleTag::Wigner
    }

    /// The constant C with |K_n| ≤ C·n! over the declared orders.
    pub fn subexponential_constant(&self) -> f64 {
        self.c
    }

    /// Highest declared order; Gaussian models declare every order.
    pub fn declared_order(&self) -> Option<usize> {
        if self.gaussian() {
            None
        } else {
            Some(self.off.order().min(self.diag.order()))
        }
    }

    /// K_n of x_o with q conjugated arguments.
    pub fn off_diag(&self, n: usize, q: usize) -> Result<Complex64> {
        if self.gaussian() && n > self.off.order() {
            return Ok(Complex64::new(0.0, 0.0));
        }
        self.off.get(n, q)
    }

    /// K_n of x_d.
    pub fn diag(&self, n: usize) -> Result<Complex64> {
        if self.gaussian() && n > self.diag.order() {
            return Ok(Complex64::new(0.0, 0.0));
        }
        self.diag.get(n, 0)
    }

    /// Cumulant tables padded with zeros to `order` for Gaussian models.
    pub fn tables(&self, order: usize) -> Result<(MomentCumulantTable, MomentCumulantTable)> {
        let pad = |t: &MomentCumulantTable| -> Result<MomentCumulantTable> {
            if order <= t.order() {
                return Ok(t.truncated(order));
            }
            if !self.gaussian() {
                return Err(Error::Completeness(format!(
                    "entry cumulants declared up to order {}, order {order} needed",
                    t.order()
                )));
            }
            let rows = (1..=order)
                .map(|n| (0..=n).map(|q| if n <= t.order() { t.at(n, q) } else { Complex64::new(0.0, 0.0) }).collect())
                .collect();
            let c = MomentCumulantTable::complex(rows)?;
            if t.mode() == TableMode::Real {
                let vals: Vec<f64> = (1..=order).map(|n| c.at(n, 0).re).collect();
                Ok(MomentCumulantTable::real(&vals))
            } else {
                Ok(c)
            }
        };
        Ok((pad(&self.off)?, pad(&self.diag)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::randmat::{EntryDistribution, EntryLaw};

    #[test]
    fn gaussian_tags() {
        let g = EntryCumulantModel::gue();
        assert_eq!(g.off_diag(2, 1).unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(g.off_diag(2, 0).unwrap(), Complex64::new(0.0, 0.0));
        assert_eq!(g.off_diag(6, 3).unwrap(), Complex64::new(0.0, 0.0));
        assert_eq!(g.diag(2).unwrap(), Complex64::new(1.0, 0.0));
        let o = EntryCumulantModel::goe();
        assert_eq!(o.off_diag(2, 2).unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(o.diag(2).unwrap(), Complex64::new(2.0, 0.0));
        assert_eq!(o.declared_order(), None);
    }

    #[test]
    fn uniform_wigner_model() {
        let m = EntryCumulantModel::from_ensemble(&Ensemble::uniform_wigner(), 6).unwrap();
        assert!((m.off_diag(4, 3).unwrap().re + 1.0 / 120.0).abs() < 1e-14);
        assert!((m.diag(6).unwrap().re - 1.0 / 252.0).abs() < 1e-14);
        assert!(matches!(m.off_diag(8, 0), Err(Error::Completeness(_))));
        assert!(matches!(m.tables(8), Err(Error::Completeness(_))));
    }

    #[test]
    fn rejects_asymmetric_or_odd_tables() {
        let odd = MomentCumulantTable::real(&[0.5, 1.0]);
        assert!(EntryCumulantModel::wigner(odd, MomentCumulantTable::real(&[0.0, 1.0])).is_err());
        let z = Complex64::new(0.0, 0.0);
        let skew = MomentCumulantTable::complex(vec![vec![z, z], vec![Complex64::new(0.0, 1.0), Complex64::new(1.0, 0.0), z]]).unwrap();
        assert!(EntryCumulantModel::wigner(skew, MomentCumulantTable::real(&[0.0, 1.0])).is_err());
        let cplx = EntryDistribution::standard(EntryLaw::GaussianComplex).cumulant_table(4).unwrap();
        assert!(EntryCumulantModel::wigner(cplx.clone(), cplx).is_err());
    }
}

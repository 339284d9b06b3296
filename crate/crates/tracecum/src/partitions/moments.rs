//! Moment/cumulant conversion over the partition lattice.
//!
//! Tables are indexed by (order n, conjugation count q): the entry at (n, q)
//! is the joint moment or cumulant of n copies of a variable z of which q
//! are replaced by its conjugate. Joint cumulants are symmetric in their
//! arguments, so the count is all that matters.

use super::enumerate_partitions;
use crate::numeric::NeumaierSum;
use std::collections::BTreeMap;
use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TableMode {
    /// Real variable: the value does not depend on the conjugation count.
    Real,
    Complex,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentCumulantTable {
    mode: TableMode,
    // values[n - 1][q] for n = 1..=order, q = 0..=n
    values: Vec<Vec<Complex64>>,
}

impl MomentCumulantTable {
    /// Real-mode table from values for orders 1..=n.
    pub fn real(values: &[f64]) -> Self {
        let values = values
            .iter()
            .enumerate()
            .map(|(i, &v)| vec![Complex64::new(v, 0.0); i + 2])
            .collect();
        MomentCumulantTable { mode: TableMode::Real, values }
    }

    /// Complex-mode table; `rows[n-1]` must hold n+1 values (q = 0..=n).
    pub fn complex(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        for (i, row) in rows.iter().enumerate() {
            if row.len() != i + 2 {
                return Err(Error::Completeness(format!(
                    "order {} needs {} conjugation counts, got {}",
                    i + 1,
                    i + 2,
                    row.len()
                )));
            }
        }
        Ok(MomentCumulantTable { mode: TableMode::Complex, values: rows })
    }

    /// Builds from sparse (order, values) records; every order up to the
    /// maximum must be present.
    pub fn from_orders(mode: TableMode, orders: &[(usize, Vec<Complex64>)]) -> Result<Self> {
        let max = orders.iter().map(|o| o.0).max().unwrap_or(0);
        let mut rows: Vec<Option<Vec<Complex64>>> = vec![None; max];
        for (n, vals) in orders {
            if *n == 0 {
                return Err(Error::Completeness("orders start at 1".into()));
            }
            let row = match mode {
                TableMode::Real if vals.len() == 1 => vec![vals[0]; n + 1],
                _ => vals.clone(),
            };
            rows[n - 1] = Some(row);
        }
        let rows = rows
            .into_iter()
            .enumerate()
            .map(|(i, r)| r.ok_or_else(|| Error::Completeness(format!("missing order {}", i + 1))))
            .collect::<Result<Vec<_>>>()?;
        let t = MomentCumulantTable::complex(rows)?;
        Ok(MomentCumulantTable { mode, ..t })
    }

    pub fn mode(&self) -> TableMode {
        self.mode
    }

    pub fn order(&self) -> usize {
        self.values.len()
    }

    /// Value at (n, q); errors if n exceeds the declared order.
    pub fn get(&self, n: usize, q: usize) -> Result<Complex64> {
        if n == 0 || n > self.values.len() {
            return Err(Error::Completeness(format!(
                "order {n} not declared (table has orders 1..={})",
                self.values.len()
            )));
        }
        if q > n {
            return Err(Error::Shape(format!("conjugation count {q} exceeds order {n}")));
        }
        Ok(self.values[n - 1][q])
    }

    /// Value at (n, q) without bounds reporting; panics if undeclared.
    pub fn at(&self, n: usize, q: usize) -> Complex64 {
        self.values[n - 1][q]
    }

    /// Largest |value| / n! over declared orders.
    pub fn subexponential_constant(&self) -> f64 {
        let mut fact = 1.0;
        let mut c: f64 = 0.0;
        for (i, row) in self.values.iter().enumerate() {
            fact *= (i + 1) as f64;
            for v in row {
                c = c.max(v.norm() / fact);
            }
        }
        c
    }

    /// Truncates to orders 1..=n.
    pub fn truncated(&self, n: usize) -> Self {
        MomentCumulantTable { mode: self.mode, values: self.values[..n.min(self.order())].to_vec() }
    }
}

/// Sum over partitions of [n], with the first q positions conjugated, of a
/// weight times the product of table values on the blocks.
fn partition_transform(
    table: &MomentCumulantTable,
    weight: impl Fn(usize) -> f64,
) -> Result<MomentCumulantTable> {
    let order = table.order();
    if order == 0 {
        return Err(Error::Completeness("empty table".into()));
    }
    let mut rows = Vec::with_capacity(order);
    for n in 1..=order {
        let parts: Vec<_> = enumerate_partitions(n)?.collect();
        let qs: Vec<usize> = match table.mode {
            TableMode::Real => vec![0],
            TableMode::Complex => (0..=n).collect(),
        };
        let mut row = vec![Complex64::new(0.0, 0.0); n + 1];
        for &q in &qs {
            // Group partitions by their multiset of (block size, conjugates)
            // so that each distinct product is formed once with an exact count.
            let mut types: BTreeMap<Vec<(usize, usize)>, (usize, f64)> = BTreeMap::new();
            for p in &parts {
                let mut key: Vec<(usize, usize)> = p
                    .blocks()
                    .iter()
                    .map(|b| (b.len(), b.iter().filter(|&&x| (x as usize) <= q).count()))
                    .collect();
                key.sort_unstable();
                types.entry(key).or_insert((0, weight(p.num_blocks()))).0 += 1;
            }
            let mut acc = NeumaierSum::default();
            for (key, (count, w)) in types {
                let mut term = Complex64::new(w * count as f64, 0.0);
                for (len, conj) in key {
                    term *= table.values[len - 1][conj];
                }
                acc.add(term);
            }
            row[q] = acc.value();
        }
        if table.mode == TableMode::Real {
            let v = row[0];
            row.iter_mut().for_each(|x| *x = v);
        }
        rows.push(row);
    }
    Ok(MomentCumulantTable { mode: table.mode, values: rows })
}

/// K_n = Σ_π (-1)^{#π-1} (#π-1)! Π_{B∈π} E_{|B|}.
pub fn cumulants_from_moments(moments: &MomentCumulantTable) -> Result<MomentCumulantTable> {
    partition_transform(moments, |k| {
        let f: f64 = (1..k).map(|i| i as f64).product();
        if k % 2 == 1 {
            f
        } else {
            -f
        }
    })
}

/// E_n = Σ_π Π_{B∈π} K_{|B|}.
pub fn moments_from_cumulants(cumulants: &MomentCumulantTable) -> Result<MomentCumulantTable> {
    partition_transform(cumulants, |_| 1.0)
}

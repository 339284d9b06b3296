//! Sums of products of matrix entries over labelings of graph vertices.
//!
//! A factor d[row, col] ties two variables (vertex blocks) together; the sum
//! over all labelings [N]^vars is a tensor-network contraction, done here by
//! variable elimination in min-degree order.

use crate::error::{Error, Result};
use crate::partitions::UnionFind;
use nalgebra::DMatrix;
use num_complex::Complex64;

/// d[row, col] with d the given matrix, or δ(row, col) for `None`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Factor<'a> {
    pub row: usize,
    pub col: usize,
    pub mat: Option<&'a DMatrix<Complex64>>,
}

fn entry(f: &Factor, i: usize, j: usize) -> Complex64 {
    match f.mat {
        Some(m) => m[(i, j)],
        None if i == j => Complex64::new(1.0, 0.0),
        None => Complex64::new(0.0, 0.0),
    }
}

#[derive(Clone, Debug)]
struct Tensor {
    // sorted distinct variables; data is row-major over them
    vars: Vec<usize>,
    data: Vec<Complex64>,
}

fn pow_checked(n: usize, k: usize) -> Option<u64> {
    (n as u64).checked_pow(k as u32)
}

/// Σ over labelings j: [nvars] → [N] of Π_f d_f[j(row_f), j(col_f)].
///
/// `budget` caps the size N^{|U|} of every intermediate product.
pub(crate) fn contract(nvars: usize, factors: &[Factor], n: usize, budget: u64) -> Result<Complex64> {
    // identity factors just merge their two variables
    let mut uf = UnionFind::new(nvars);
    for f in factors.iter().filter(|f| f.mat.is_none()) {
        uf.union(f.row, f.col);
    }
    let roots = uf.roots();
    let mut compact = vec![usize::MAX; nvars];
    let mut k = 0;
    for v in 0..nvars {
        let r = roots[v];
        if compact[r] == usize::MAX {
            compact[r] = k;
            k += 1;
        }
        compact[v] = compact[r];
    }
    let nv = k;
    let mut tensors: Vec<Tensor> = Vec::new();
    for f in factors.iter().filter(|f| f.mat.is_some()) {
        let (a, b) = (compact[f.row], compact[f.col]);
        let t = if a == b {
            Tensor { vars: vec![a], data: (0..n).map(|i| entry(f, i, i)).collect() }
        } else if a < b {
            Tensor { vars: vec![a, b], data: (0..n * n).map(|x| entry(f, x / n, x % n)).collect() }
        } else {
            Tensor { vars: vec![b, a], data: (0..n * n).map(|x| entry(f, x % n, x / n)).collect() }
        };
        tensors.push(t);
    }
    let mut scalar = Complex64::new(1.0, 0.0);
    let mut alive: Vec<bool> = vec![true; nv];
    for (v, live) in alive.iter_mut().enumerate() {
        if !tensors.iter().any(|t| t.vars.contains(&v)) {
            scalar *= n as f64;
            *live = false;
        }
    }
    loop {
        // min-degree choice: smallest union of neighbouring variables
        let mut best: Option<(usize, Vec<usize>)> = None;
        for v in (0..nv).filter(|&v| alive[v]) {
            let mut u: Vec<usize> = tensors.iter().filter(|t| t.vars.contains(&v)).flat_map(|t| t.vars.iter().copied()).collect();
            u.sort_unstable();
            u.dedup();
            if best.as_ref().is_none_or(|(_, bu)| u.len() < bu.len()) {
                best = Some((v, u));
            }
        }
        let Some((v, u)) = best else { break };
        let size = pow_checked(n, u.len()).filter(|&s| s <= budget).ok_or_else(|| {
            Error::Size(format!(
                "contraction needs an intermediate of N^{} entries (N={n}), above the budget {budget}; use a smaller N",
                u.len()
            ))
        })? as usize;
        let (with, rest): (Vec<Tensor>, Vec<Tensor>) = tensors.into_iter().partition(|t| t.vars.contains(&v));
        tensors = rest;
        let vpos = u.iter().position(|&x| x == v).unwrap();
        let out_vars: Vec<usize> = u.iter().copied().filter(|&x| x != v).collect();
        // per tensor, the position in u of each of its variables
        let maps: Vec<Vec<usize>> = with
            .iter()
            .map(|t| t.vars.iter().map(|x| u.iter().position(|y| y == x).unwrap()).collect())
            .collect();
        let mut out = vec![Complex64::new(0.0, 0.0); size / n];
        let mut digits = vec![0usize; u.len()];
        for _ in 0..size {
            let mut p = Complex64::new(1.0, 0.0);
            for (t, map) in with.iter().zip(&maps) {
                let idx = map.iter().fold(0, |acc, &pos| acc * n + digits[pos]);
                p *= t.data[idx];
                if p == Complex64::new(0.0, 0.0) {
                    break;
                }
            }
            let oidx = (0..u.len()).filter(|&k| k != vpos).fold(0, |acc, k| acc * n + digits[k]);
            out[oidx] += p;
            // odometer, last digit fastest
            for d in (0..digits.len()).rev() {
                digits[d] += 1;
                if digits[d] < n {
                    break;
                }
                digits[d] = 0;
            }
        }
        alive[v] = false;
        if out_vars.is_empty() {
            scalar *= out[0];
        } else {
            tensors.push(Tensor { vars: out_vars, data: out });
        }
    }
    for t in tensors {
        debug_assert!(t.vars.is_empty());
        scalar *= t.data[0];
    }
    Ok(scalar)
}

/// Direct enumeration of the same sum; with `injective`, only labelings
/// that give distinct values to distinct variables are counted.
pub(crate) fn enumerate(nvars: usize, factors: &[Factor], n: usize, budget: u64, injective: bool) -> Result<Complex64> {
    let total = pow_checked(n, nvars)
        .filter(|&s| s <= budget)
        .ok_or_else(|| Error::Size(format!("direct enumeration of N^{nvars} labelings (N={n}) exceeds the budget {budget}")))?;
    let mut sum = crate::numeric::NeumaierSum::default();
    let mut j = vec![0usize; nvars];
    for _ in 0..total {
        let distinct = !injective || {
            let mut seen = j.clone();
            seen.sort_unstable();
            seen.windows(2).all(|w| w[0] != w[1])
        };
        if distinct {
            let p = factors.iter().fold(Complex64::new(1.0, 0.0), |acc, f| acc * entry(f, j[f.row], j[f.col]));
            sum.add(p);
        }
        for d in (0..nvars).rev() {
            j[d] += 1;
            if j[d] < n {
                break;
            }
            j[d] = 0;
        }
    }
    Ok(sum.value())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mat(n: usize, seed: u64) -> DMatrix<Complex64> {
        DMatrix::from_fn(n, n, |i, j| {
            let x = ((i * 31 + j * 17) as u64 * 2654435761 + seed * 97) % 1000;
            Complex64::new(x as f64 / 500.0 - 1.0, ((x * 7) % 13) as f64 / 13.0 - 0.5)
        })
    }

    #[test]
    fn trace_of_product_cycle() {
        let n = 4;
        let (a, b, c) = (mat(n, 1), mat(n, 2), mat(n, 3));
        // Tr(ABC) = Σ a[x,y] b[y,z] c[z,x]
        let fs = [
            Factor { row: 0, col: 1, mat: Some(&a) },
            Factor { row: 1, col: 2, mat: Some(&b) },
            Factor { row: 2, col: 0, mat: Some(&c) },
        ];
        let want = (&a * &b * &c).trace();
        let got = contract(3, &fs, n, 1 << 20).unwrap();
        assert!((got - want).norm() < 1e-12 * want.norm().max(1.0));
    }

    #[test]
    fn identities_and_free_variables() {
        let n = 3;
        let fs = [Factor { row: 0, col: 1, mat: None }, Factor { row: 1, col: 0, mat: None }];
        // one merged free variable plus an untouched one
        assert_eq!(contract(3, &fs, n, 1 << 20).unwrap(), Complex64::new(9.0, 0.0));
        assert_eq!(enumerate(3, &fs, n, 1 << 20, false).unwrap(), Complex64::new(9.0, 0.0));
        // distinct labelings of two singletons joined by δ: none
        let d = [Factor { row: 0, col: 1, mat: None }];
        assert_eq!(enumerate(2, &d, n, 1 << 20, true).unwrap(), Complex64::new(0.0, 0.0));
        assert_eq!(enumerate(2, &[], n, 1 << 20, true).unwrap(), Complex64::new(6.0, 0.0));
    }

    #[test]
    fn budget_is_enforced() {
        let a = mat(4, 1);
        // a 4-clique: every elimination touches all four variables
        let fs: Vec<Factor> = (0..4).flat_map(|i| (i + 1..4).map(move |j| (i, j))).map(|(i, j)| Factor { row: i, col: j, mat: Some(&a) }).collect();
        assert!(matches!(contract(4, &fs, 4, 64), Err(Error::Size(_))));
        assert!(contract(4, &fs, 4, 256).is_ok());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn contraction_matches_enumeration(
            nvars in 1usize..5,
            edges in proptest::collection::vec((0usize..5, 0usize..5, 0u64..4), 0..6),
            n in 1usize..4,
        ) {
            let mats: Vec<DMatrix<Complex64>> = (0..3).map(|s| mat(n, s)).collect();
            let fs: Vec<Factor> = edges
                .iter()
                .map(|&(a, b, s)| Factor { row: a % nvars, col: b % nvars, mat: if s == 3 { None } else { Some(&mats[s as usize]) } })
                .collect();
            let c = contract(nvars, &fs, n, 1 << 20).unwrap();
            let e = enumerate(nvars, &fs, n, 1 << 20, false).unwrap();
            prop_assert!((c - e).norm() <= 1e-10 * e.norm().max(1.0));
        }
    }
}

//! Ground truth by brute force: every trace moment E Π_{k∈S} Tr Y_k is a sum
//! over all index maps ψ: ±[m_S] → [N], with the joint entry moments taken
//! from the model, and K_r follows by Möbius inversion over P(r).
//! Nothing here shares code with the partition expansion beyond the word
//! and the model.

use super::word::TraceWord;
use super::{Budget, DeterministicSet, EntryCumulantModel};
use crate::error::{Error, Result};
use crate::numeric::NeumaierSum;
use crate::partitions::{enumerate_partitions, moments_from_cumulants, Mark, MomentCumulantTable};
use num_complex::Complex64;

struct Moments {
    off: MomentCumulantTable,
    diag: MomentCumulantTable,
}

fn trace_moment(
    word: &TraceWord,
    det: &DeterministicSet,
    moments: &Moments,
    budget: &Budget,
) -> Result<Complex64> {
    let m = word.m();
    let n = det.dim();
    let total = (n as u64)
        .checked_pow(2 * m as u32)
        .filter(|&t| t <= budget.max_oracle)
        .ok_or_else(|| Error::Size(format!("oracle would enumerate N^{} maps at N={n}, above {}", 2 * m, budget.max_oracle)))?;
    let mats = word.resolve(det)?;
    // ψ stored as psi[l-1] = ψ(l), psi[m+l-1] = ψ(−l)
    let mut psi = vec![0usize; 2 * m];
    let pos = |l: i64| if l > 0 { (l - 1) as usize } else { m + (-l - 1) as usize };
    let mut sum = NeumaierSum::default();
    let mut groups: Vec<(usize, usize, usize, usize, usize)> = Vec::with_capacity(m);
    for _ in 0..total {
        let mut d = Complex64::new(1.0, 0.0);
        for l in 1..=m as i64 {
            let (i, j) = (psi[pos(-l)], psi[pos(word.gamma().next(l))]);
            d *= match &mats[(l - 1) as usize] {
                Some(a) => a[(i, j)],
                None if i == j => Complex64::new(1.0, 0.0),
                None => Complex64::new(0.0, 0.0),
            };
            if d == Complex64::new(0.0, 0.0) {
                break;
            }
        }
        if d != Complex64::new(0.0, 0.0) {
            // (symbol, lo, hi) -> (count, conjugated count)
            groups.clear();
            for l in 1..=m as i64 {
                let (mut row, mut col) = (psi[pos(l)], psi[pos(-l)]);
                if word.letter(l).mark == Mark::Transposed {
                    std::mem::swap(&mut row, &mut col);
                }
                let key = (word.letter(l).symbol, row.min(col), row.max(col));
                match groups.iter_mut().find(|g| (g.0, g.1, g.2) == key) {
                    Some(g) => {
                        g.3 += 1;
                        g.4 += usize::from(row > col);
                    }
                    None => groups.push((key.0, key.1, key.2, 1, usize::from(row > col))),
                }
            }
            let mut e = Complex64::new(1.0, 0.0);
            for &(_, lo, hi, cnt, q) in &groups {
                e *= if lo == hi { moments.diag.at(cnt, 0) } else { moments.off.at(cnt, q) };
            }
            sum.add(d * e);
        }
        for k in (0..2 * m).rev() {
            psi[k] += 1;
            if psi[k] < n {
                break;
            }
            psi[k] = 0;
        }
    }
    Ok(sum.value() * (n as f64).powf(-(m as f64) / 2.0))
}

/// K_r(Tr Y_1, ..., Tr Y_r) by full enumeration; meant for N^{2m} small.
pub fn bruteforce_cumulant_oracle(
    word: &TraceWord,
    model: &EntryCumulantModel,
    det: &DeterministicSet,
    budget: &Budget,
) -> Result<Complex64> {
    let r = word.r();
    let m = word.m();
    let order = m.max(2);
    let (koff, kdiag) = model.tables(order)?;
    let moments = Moments { off: moments_from_cumulants(&koff)?, diag: moments_from_cumulants(&kdiag)? };
    // split the letters back into their traces
    let mut words = Vec::with_capacity(r);
    let mut start = 0;
    for &mk in word.m_vec() {
        words.push(word.letters()[start..start + mk].to_vec());
        start += mk;
    }
    let mut subset_moment = vec![Complex64::new(0.0, 0.0); 1 << r];
    for mask in 1usize..(1 << r) {
        let sub: Vec<_> = (0..r).filter(|k| mask >> k & 1 == 1).map(|k| words[k].clone()).collect();
        subset_moment[mask] = trace_moment(&TraceWord::from_letters(sub)?, det, &moments, budget)?;
    }
    let mut k = NeumaierSum::default();
    for rho in enumerate_partitions(r)? {
        let nb = rho.num_blocks();
        let mu: f64 = (1..nb).map(|i| -(i as f64)).product();
        let mut term = Complex64::new(mu, 0.0);
        for b in rho.blocks() {
            let mask = b.iter().fold(0usize, |acc, &x| acc | 1 << (x - 1));
            term *= subset_moment[mask];
        }
        k.add(term);
    }
    Ok(k.value())
}

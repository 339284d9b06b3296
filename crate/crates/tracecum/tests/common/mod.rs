#![allow(dead_code)]

use tracecum::expansion::{DeterministicSet, EntryCumulantModel, Letter, TraceWord};
use tracecum::partitions::compositions;
use tracecum::randmat::{builtin_set, Ensemble};

pub const DETS: [&str; 3] = ["identity", "upper-bidiagonal-ones", "random-unit-norm:11"];

pub fn models() -> Vec<(&'static str, EntryCumulantModel)> {
    vec![
        ("gue", EntryCumulantModel::gue()),
        ("goe", EntryCumulantModel::goe()),
        ("uniform-wigner", EntryCumulantModel::from_ensemble(&Ensemble::uniform_wigner(), 8).unwrap()),
    ]
}

/// Letter patterns applied to each shape: plain X0, alternating X0/X0^T,
/// alternating symbols X0/X1. Every letter carries D0.
pub fn words(max_m: usize, max_r: usize) -> Vec<(String, TraceWord)> {
    let mut out = Vec::new();
    for m in 1..=max_m {
        for r in 1..=max_r.min(m) {
            for shape in compositions(m, r) {
                for pattern in 0..3 {
                    let mut k = 0;
                    let ws: Vec<Vec<Letter>> = shape
                        .iter()
                        .map(|&len| {
                            (0..len)
                                .map(|_| {
                                    let l = match (pattern, k % 2) {
                                        (1, 1) => Letter::xt(0),
                                        (2, 1) => Letter::x(1),
                                        _ => Letter::x(0),
                                    };
                                    k += 1;
                                    l.with_det(0)
                                })
                                .collect()
                        })
                        .collect();
                    let label = format!("{shape:?}/p{pattern}");
                    out.push((label, TraceWord::from_letters(ws).unwrap()));
                }
            }
        }
    }
    out
}

pub fn det(name: &str, n: usize) -> DeterministicSet {
    builtin_set(&[name], n).unwrap()
}

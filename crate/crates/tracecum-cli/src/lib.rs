//! Batch front-end: JSON experiment configs in, report JSON, rows CSV and
//! plot-data files out.

pub mod config;
pub mod run;

use config::{entry_law_names, Mode};
use std::fmt::Write as _;

/// Text printed by `tracecum list-builtins`.
pub fn list_builtins() -> String {
    let mut s = String::from("ensembles:\n");
    for (name, what) in [
        ("gue", "complex Hermitian, off-diagonal CN(0,1)/sqrt(N), diagonal N(0,1)/sqrt(N)"),
        ("goe", "real symmetric, off-diagonal N(0,1)/sqrt(N), diagonal N(0,2)/sqrt(N)"),
        ("wigner", "self-adjoint with independent entries from the chosen laws, scaled by 1/sqrt(N)"),
    ] {
        writeln!(s, "  {name:<26} {what}").unwrap();
    }
    s.push_str("entry distributions:\n");
    for (name, what) in entry_law_names() {
        writeln!(s, "  {name:<26} {what}").unwrap();
    }
    s.push_str("deterministic matrices:\n");
    for (name, what) in tracecum::randmat::BUILTINS {
        writeln!(s, "  {name:<26} {what}").unwrap();
    }
    s.push_str("modes:\n");
    for (_, name, what) in Mode::ALL {
        writeln!(s, "  {name:<26} {what}").unwrap();
    }
    s
}

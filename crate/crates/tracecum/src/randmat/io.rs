use crate::error::{Error, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

/// `a+bi` with shortest round-trip digits.
pub fn format_complex(z: Complex64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{}{}i", z.re, sign, z.im.abs())
}

/// Accepts `a`, `bi`, `a+bi`, `a-bi` (exponents allowed).
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad complex number '{s}'"));
    let num = |t: &str| t.parse::<f64>().map_err(|_| bad());
    let Some(body) = s.strip_suffix('i') else {
        return Ok(Complex64::new(num(s)?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    match split {
        Some(k) => {
            let im = match &body[k..] {
                "+" => 1.0,
                "-" => -1.0,
                t => num(t)?,
            };
            Ok(Complex64::new(num(&body[..k])?, im))
        }
        None => Ok(Complex64::new(0.0, if body.is_empty() { 1.0 } else { num(body)? })),
    }
}

pub fn read_matrix_csv(path: &Path) -> Result<DMatrix<Complex64>> {
    let f = std::fs::File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let mut lines = BufReader::new(f).lines();
    let head = lines.next().ok_or_else(|| Error::Parse("empty matrix file".into()))??;
    let n: usize = head.trim().parse().map_err(|_| Error::Parse(format!("first line must be N, got '{head}'")))?;
    let mut data = Vec::with_capacity(n * n);
    let mut rows = 0;
    for line in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let row: Vec<Complex64> = line.split(',').map(parse_complex).collect::<Result<_>>()?;
        if row.len() != n {
            return Err(Error::Shape(format!("row {} has {} entries, expected {n}", rows + 1, row.len())));
        }
        data.extend(row);
        rows += 1;
    }
    if rows != n {
        return Err(Error::Shape(format!("matrix has {rows} rows, expected {n}")));
    }
    Ok(DMatrix::from_row_slice(n, n, &data))
}

pub fn write_matrix_csv(path: &Path, m: &DMatrix<Complex64>) -> Result<()> {
    if !m.is_square() {
        return Err(Error::Shape("only square matrices are stored".into()));
    }
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(f, "{}", m.nrows())?;
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|j| format_complex(m[(i, j)])).collect();
        writeln!(f, "{}", row.join(","))?;
    }
    Ok(())
}

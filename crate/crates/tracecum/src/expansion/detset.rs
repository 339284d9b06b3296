use crate::error::{Error, Result};
use crate::randmat::{abs_operator_norm, operator_norm};
use nalgebra::DMatrix;
use num_complex::Complex64;

/// Named N×N deterministic matrices with cached operator norms.
#[derive(Clone, Debug)]
pub struct DeterministicSet {
    n: usize,
    names: Vec<String>,
    mats: Vec<DMatrix<Complex64>>,
    norms: Vec<f64>,
    abs_norms: Vec<f64>,
}

impl DeterministicSet {
    pub fn new(n: usize) -> Self {
        DeterministicSet { n, names: Vec::new(), mats: Vec::new(), norms: Vec::new(), abs_norms: Vec::new() }
    }

    /// Appends a matrix and returns its index.
    pub fn push(&mut self, name: &str, mat: DMatrix<Complex64>) -> Result<usize> {
        if mat.nrows() != self.n || mat.ncols() != self.n {
            return Err(Error::Shape(format!(
                "matrix '{name}' is {}x{}, expected {}x{}",
                mat.nrows(),
                mat.ncols(),
                self.n,
                self.n
            )));
        }
        if self.names.iter().any(|x| x == name) {
            return Err(Error::Config(format!("duplicate deterministic matrix '{name}'")));
        }
        self.norms.push(operator_norm(&mat)?);
        self.abs_norms.push(abs_operator_norm(&mat)?);
        self.names.push(name.to_string());
        self.mats.push(mat);
        Ok(self.mats.len() - 1)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.mats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mats.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|x| x == name)
    }

    pub fn name(&self, j: usize) -> &str {
        &self.names[j]
    }

    pub fn get(&self, j: usize) -> Result<&DMatrix<Complex64>> {
        self.mats.get(j).ok_or_else(|| Error::Config(format!("no deterministic matrix with index {j}")))
    }

    pub fn norm(&self, j: usize) -> f64 {
        self.norms[j]
    }

    pub fn abs_norm(&self, j: usize) -> f64 {
        self.abs_norms[j]
    }

    /// Product D_{j_1}···D_{j_k}; `None` for the empty (identity) chain.
    pub fn chain(&self, js: &[usize]) -> Result<Option<DMatrix<Complex64>>> {
        let mut acc: Option<DMatrix<Complex64>> = None;
        for &j in js {
            let m = self.get(j)?;
            acc = Some(match acc {
                None => m.clone(),
                Some(a) => a * m,
            });
        }
        Ok(acc)
    }

    /// Operator norm of a chain product, 1 for the identity.
    pub fn chain_norm(&self, js: &[usize]) -> Result<f64> {
        match js {
            [] => Ok(1.0),
            [j] => {
                self.get(*j)?;
                Ok(self.norms[*j])
            }
            _ => operator_norm(&self.chain(js)?.unwrap()),
        }
    }

    /// ‖(|d_ij|)‖ of a chain product, 1 for the identity.
    pub fn chain_abs_norm(&self, js: &[usize]) -> Result<f64> {
        match js {
            [] => Ok(1.0),
            [j] => {
                self.get(*j)?;
                Ok(self.abs_norms[*j])
            }
            _ => abs_operator_norm(&self.chain(js)?.unwrap()),
        }
    }
}

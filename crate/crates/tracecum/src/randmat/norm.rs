use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

const MAX_ITER: usize = 200_000;

/// Largest singular value by power iteration on A*A.
///
/// Stops once the eigen-residual ‖A*Av − λv‖ drops below 1e-10·λ, which pins
/// λ to an eigenvalue of A*A to that relative accuracy.
pub fn operator_norm(a: &DMatrix<Complex64>) -> Result<f64> {
    if !a.is_square() {
        return Err(Error::Shape(format!("operator_norm needs a square matrix, got {}x{}", a.nrows(), a.ncols())));
    }
    let n = a.ncols();
    if n == 0 || a.iter().all(|z| *z == Complex64::new(0.0, 0.0)) {
        return Ok(0.0);
    }
    let adj = a.adjoint();
    // deterministic start, generic enough not to be orthogonal to the top vector
    let mut v = DVector::from_fn(n, |i, _| Complex64::new(1.0 + (i as f64 + 1.0).sqrt() / n as f64, 0.0));
    v /= Complex64::new(v.norm(), 0.0);
    for _ in 0..MAX_ITER {
        let w = a * &v;
        let lambda = w.norm_squared();
        let u = &adj * w;
        let resid = (&u - &v * Complex64::new(lambda, 0.0)).norm();
        if resid <= 1e-10 * lambda || lambda == 0.0 {
            return Ok(lambda.sqrt());
        }
        let un = u.norm();
        v = u / Complex64::new(un, 0.0);
    }
    Err(Error::Numeric(format!("power iteration did not converge in {MAX_ITER} steps")))
}

/// ‖(|a_ij|)‖, the norm of the entrywise absolute value.
pub fn abs_operator_norm(a: &DMatrix<Complex64>) -> Result<f64> {
    operator_norm(&a.map(|z| Complex64::new(z.norm(), 0.0)))
}

use crate::error::{Error, Result};

/// Safeguarded Newton iteration for an increasing function on `[lo, hi]`.
///
/// `f` returns `(value, derivative)`. A Newton step that leaves the current
/// bracket is replaced by bisection, so convergence is guaranteed once
/// `f(lo) <= 0 <= f(hi)`.
pub fn newton_bracketed<F>(f: F, mut lo: f64, mut hi: f64, x_tol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<(f64, f64)>,
{
    let (flo, _) = f(lo)?;
    let (fhi, _) = f(hi)?;
    if flo > 0.0 || fhi < 0.0 {
        return Err(Error::Internal(format!(
            "root not bracketed: f({lo}) = {flo:e}, f({hi}) = {fhi:e}"
        )));
    }
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let (fx, dfx) = f(x)?;
        if fx == 0.0 {
            return Ok(x);
        }
        if fx < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let newton = x - fx / dfx;
        let next = if dfx > 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - x).abs() <= x_tol || hi - lo <= x_tol {
            return Ok(next);
        }
        x = next;
    }
    Err(Error::Internal(format!(
        "root finding did not converge in [{lo}, {hi}]"
    )))
}

use rayon::prelude::*;

use super::Modulus;
use crate::error::{Error, Result};
use crate::lp::GridFunction;

/// `sup |u(x) − u(y)| / ω(|x − y|)` over grid-point pairs at periodic distance
/// `0 < |x − y| < 1`.
pub fn modulus_seminorm(u: &GridFunction, omega: &Modulus) -> Result<f64> {
    let grid = u.grid();
    let h = grid.spacing();
    if h >= 1.0 {
        return Err(Error::Domain {
            value: h,
            domain: "grid spacing < 1",
        });
    }
    let n = grid.n();
    let reach = ((1.0 / h).ceil() as i64).min(n as i64 / 2);
    let mut offsets = Vec::new();
    match grid.dim() {
        1 => {
            for a in 1..=reach {
                offsets.push((a, 0));
            }
        }
        _ => {
            for a in 0..=reach {
                for b in -reach..=reach {
                    if a > 0 || b > 0 {
                        offsets.push((a, b));
                    }
                }
            }
        }
    }
    let vals = u.values();
    let best = offsets
        .par_iter()
        .filter_map(|&(a, b)| {
            let dist = h * ((a * a + b * b) as f64).sqrt();
            if dist >= 1.0 {
                return None;
            }
            let w = omega.value(dist);
            let mut worst = 0.0f64;
            let idx = |i: usize| -> usize {
                match grid.dim() {
                    1 => (i + a as usize) % n,
                    _ => {
                        let r = ((i / n) as i64 + a).rem_euclid(n as i64) as usize;
                        let c = ((i % n) as i64 + b).rem_euclid(n as i64) as usize;
                        r * n + c
                    }
                }
            };
            for (i, v) in vals.iter().enumerate() {
                worst = worst.max((v - vals[idx(i)]).norm());
            }
            Some(worst / w)
        })
        .reduce(|| 0.0, f64::max);
    Ok(best)
}

/// Time seminorm `sup_{|t−s|<1} sup_x |a(t,x) − a(s,x)| / μ(|t − s|)` for
/// frames sampled at spacing `dt` on a non-periodic time axis.
pub fn time_seminorm(frames: &[Vec<f64>], dt: f64, mu: &Modulus) -> Result<f64> {
    if !(dt > 0.0 && dt < 1.0) {
        return Err(Error::Domain {
            value: dt,
            domain: "time step in (0, 1)",
        });
    }
    let m = frames.len();
    let best = (1..m)
        .into_par_iter()
        .filter_map(|lag| {
            let gap = lag as f64 * dt;
            if gap >= 1.0 {
                return None;
            }
            let w = mu.value(gap);
            let mut worst = 0.0f64;
            for i in 0..(m - lag) {
                for (x, y) in frames[i].iter().zip(&frames[i + lag]) {
                    worst = worst.max((x - y).abs());
                }
            }
            Some(worst / w)
        })
        .reduce(|| 0.0, f64::max);
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::Grid;

    #[test]
    fn constant_has_zero_seminorm() {
        let g = Grid::line(64).unwrap();
        let u = GridFunction::constant(g, 3.0);
        assert_eq!(modulus_seminorm(&u, &Modulus::power(0.5).unwrap()).unwrap(), 0.0);
    }

    #[test]
    fn sine_is_one_lipschitz() {
        let g = Grid::line(1024).unwrap();
        let u = GridFunction::from_fn_real(g, |x| x[0].sin());
        let v = modulus_seminorm(&u, &Modulus::power(1.0).unwrap()).unwrap();
        assert!((v - 1.0).abs() < 1e-4, "{v}");
    }

    #[test]
    fn holder_seminorm_of_cosine_stable_under_refinement() {
        let w = Modulus::power(0.5).unwrap();
        let coarse = GridFunction::from_fn_real(Grid::line(256).unwrap(), |x| x[0].cos());
        let fine = GridFunction::from_fn_real(Grid::line(1024).unwrap(), |x| x[0].cos());
        let a = modulus_seminorm(&coarse, &w).unwrap();
        let b = modulus_seminorm(&fine, &w).unwrap();
        assert!(a.is_finite() && b.is_finite());
        assert!((a - b).abs() < 0.01 * b, "{a} vs {b}");
    }

    #[test]
    fn coarse_grid_is_rejected() {
        let g = crate::lp::Grid::new(1, 8, 16.0).unwrap();
        let u = GridFunction::constant(g, 1.0);
        assert!(modulus_seminorm(&u, &Modulus::power(1.0).unwrap()).is_err());
    }

    #[test]
    fn time_seminorm_of_linear_ramp() {
        let dt = 1.0 / 64.0;
        let frames: Vec<Vec<f64>> = (0..65).map(|i| vec![2.0 * i as f64 * dt]).collect();
        let v = time_seminorm(&frames, dt, &Modulus::power(1.0).unwrap()).unwrap();
        assert!((v - 2.0).abs() < 1e-12);
    }
}

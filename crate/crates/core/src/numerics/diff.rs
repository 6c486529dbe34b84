//! Fourth-order finite differences on uniform samples.

/// Stencil `(offset, weight)` for the first derivative at sample `i` of `m`,
/// weights already divided by `12h`. Centered in the interior, one-sided at
/// the two outermost samples on each side.
pub fn stencil(i: usize, m: usize, h: f64) -> [(usize, f64); 5] {
    assert!(m >= 5, "fourth-order stencil needs at least five samples");
    let s = 1.0 / (12.0 * h);
    let w = |idx: [usize; 5], c: [f64; 5]| {
        let mut out = [(0, 0.0); 5];
        for k in 0..5 {
            out[k] = (idx[k], c[k] * s);
        }
        out
    };
    match i {
        0 => w([0, 1, 2, 3, 4], [-25.0, 48.0, -36.0, 16.0, -3.0]),
        1 => w([0, 1, 2, 3, 4], [-3.0, -10.0, 18.0, -6.0, 1.0]),
        _ if i == m - 1 => w([m - 1, m - 2, m - 3, m - 4, m - 5], [25.0, -48.0, 36.0, -16.0, 3.0]),
        _ if i == m - 2 => w([m - 1, m - 2, m - 3, m - 4, m - 5], [3.0, 10.0, -18.0, 6.0, -1.0]),
        _ => w([i - 2, i - 1, i, i + 1, i + 2], [1.0, -8.0, 0.0, 8.0, -1.0]),
    }
}

pub fn derivative(samples: &[f64], h: f64) -> Vec<f64> {
    let m = samples.len();
    (0..m)
        .map(|i| stencil(i, m, h).iter().map(|&(j, c)| c * samples[j]).sum())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quartic_is_exact() {
        let h = 0.1;
        let xs: Vec<f64> = (0..12).map(|i| i as f64 * h).collect();
        let f: Vec<f64> = xs.iter().map(|x| x.powi(4) - 2.0 * x.powi(3) + x).collect();
        let d = derivative(&f, h);
        for (x, v) in xs.iter().zip(&d) {
            let exact = 4.0 * x.powi(3) - 6.0 * x * x + 1.0;
            assert!((v - exact).abs() < 1e-10, "{x}: {v} vs {exact}");
        }
    }

    #[test]
    fn sine_converges_at_fourth_order() {
        let err = |m: usize| {
            let h = 1.0 / (m - 1) as f64;
            let f: Vec<f64> = (0..m).map(|i| (3.0 * i as f64 * h).sin()).collect();
            derivative(&f, h)
                .iter()
                .enumerate()
                .map(|(i, v)| (v - 3.0 * (3.0 * i as f64 * h).cos()).abs())
                .fold(0.0, f64::max)
        };
        let ratio = err(65) / err(129);
        assert!(ratio > 14.0, "{ratio}");
    }
}

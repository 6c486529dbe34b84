//! Cached rustfft plans and 1-D / 2-D transforms on row-major buffers.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

type PlanPair = (Arc<dyn Fft<f64>>, Arc<dyn Fft<f64>>);

fn plans(n: usize) -> PlanPair {
    static CACHE: OnceLock<Mutex<HashMap<usize, PlanPair>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("fft plan cache poisoned");
    guard
        .entry(n)
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            (planner.plan_fft_forward(n), planner.plan_fft_inverse(n))
        })
        .clone()
}

fn transpose_square(data: &mut [Complex64], n: usize) {
    for i in 0..n {
        for j in (i + 1)..n {
            data.swap(i * n + j, j * n + i);
        }
    }
}

fn run(data: &mut [Complex64], n: usize, dim: usize, forward: bool) {
    let (fwd, inv) = plans(n);
    let plan = if forward { fwd } else { inv };
    // rustfft processes every length-n chunk of the buffer.
    plan.process(data);
    if dim == 2 {
        transpose_square(data, n);
        plan.process(data);
        transpose_square(data, n);
    }
}

/// Unnormalized forward DFT, `û_k = Σ_j u_j e^{-2πi j·k/N}`.
pub fn forward(data: &mut [Complex64], n: usize, dim: usize) {
    run(data, n, dim, true);
}

/// Inverse DFT including the `1/N^dim` normalization.
pub fn inverse(data: &mut [Complex64], n: usize, dim: usize) {
    run(data, n, dim, false);
    let scale = 1.0 / (data.len() as f64);
    for v in data.iter_mut() {
        *v *= scale;
    }
}

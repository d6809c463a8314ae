//! Centered n-dimensional FFT on top of `rustfft`.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::TorusGrid;

pub(crate) struct Plans {
    forward: Vec<Arc<dyn Fft<f64>>>,
    inverse: Vec<Arc<dyn Fft<f64>>>,
}

impl Plans {
    pub(crate) fn new(sizes: &[usize]) -> Self {
        let mut planner = FftPlanner::new();
        Plans {
            forward: sizes.iter().map(|&n| planner.plan_fft_forward(n)).collect(),
            inverse: sizes.iter().map(|&n| planner.plan_fft_inverse(n)).collect(),
        }
    }
}

/// Unnormalized centered transform in place: index `k` along each axis means
/// the signed value `k - N/2` both before and after.
pub(crate) fn transform(grid: &TorusGrid, data: &mut [Complex64], inverse: bool) {
    let sizes = grid.sizes();
    let plans = grid.plans();
    let total = data.len();
    for axis in 0..sizes.len() {
        let n = sizes[axis];
        let plan = if inverse { &plans.inverse[axis] } else { &plans.forward[axis] };
        let mut scratch = vec![Complex64::new(0.0, 0.0); plan.get_inplace_scratch_len()];
        let stride: usize = sizes[axis + 1..].iter().product();
        if stride == 1 {
            for line in data.chunks_exact_mut(n) {
                line.rotate_left(n / 2);
            }
            plan.process_with_scratch(data, &mut scratch);
            for line in data.chunks_exact_mut(n) {
                line.rotate_left(n / 2);
            }
        } else {
            let block = n * stride;
            let mut buf = vec![Complex64::new(0.0, 0.0); n];
            for base in (0..total).step_by(block) {
                for inner in 0..stride {
                    let start = base + inner;
                    for (t, b) in buf.iter_mut().enumerate() {
                        *b = data[start + ((t + n / 2) % n) * stride];
                    }
                    plan.process_with_scratch(&mut buf, &mut scratch);
                    for (t, b) in buf.iter().enumerate() {
                        data[start + ((t + n / 2) % n) * stride] = *b;
                    }
                }
            }
        }
    }
}

use std::cell::RefCell;

use num_complex::Complex64;
use rustfft::FftPlanner;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Samples to Fourier coefficients: `c_k = (1/N) Σ_j x_j e^{-2πijk/N}`.
pub(crate) fn coefficients(buf: &mut [Complex64]) {
    let n = buf.len();
    let fft = PLANNER.with(|p| p.borrow_mut().plan_fft_forward(n));
    fft.process(buf);
    let scale = 1.0 / n as f64;
    for c in buf.iter_mut() {
        *c *= scale;
    }
}

/// Fourier coefficients back to samples: `x_j = Σ_k c_k e^{2πijk/N}`.
pub(crate) fn samples(buf: &mut [Complex64]) {
    let n = buf.len();
    let fft = PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(n));
    fft.process(buf);
}

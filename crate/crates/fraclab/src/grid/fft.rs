//! Zero-padded 2-D convolution against a fixed lag kernel, FFT accelerated.

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

/// Convolver for a translation-invariant kernel on an N×N grid: computes
/// (k * u)_i = Σ_j k(lag_ij) u_j for all i in one pass. The kernel transform
/// is cached; each apply costs two 2-D FFTs of size 2N × 2N.
pub struct Convolver {
    n: usize,
    pad: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    kernel_hat: Vec<Complex64>,
}

impl Convolver {
    /// `lag_kernel(di, dj)` for di, dj in [-(N-1), N-1]; must be the kernel
    /// value at lag (di, dj).
    pub fn new(n: usize, lag_kernel: impl Fn(i64, i64) -> f64) -> Self {
        let pad = 2 * n;
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(pad);
        let inv = planner.plan_fft_inverse(pad);

        // Wraparound layout: index (di mod pad, dj mod pad).
        let mut kernel = vec![Complex64::new(0.0, 0.0); pad * pad];
        let m = n as i64;
        for di in -(m - 1)..m {
            for dj in -(m - 1)..m {
                let r = di.rem_euclid(pad as i64) as usize;
                let c = dj.rem_euclid(pad as i64) as usize;
                kernel[r * pad + c] = Complex64::new(lag_kernel(di, dj), 0.0);
            }
        }
        fft2_in_place(&fwd, &mut kernel, pad);
        Convolver { n, pad, fwd, inv, kernel_hat: kernel }
    }

    /// Full convolution of an N×N real field.
    pub fn apply(&self, u: &[f64]) -> Vec<f64> {
        let (n, pad) = (self.n, self.pad);
        assert_eq!(u.len(), n * n);
        let mut buf = vec![Complex64::new(0.0, 0.0); pad * pad];
        for i in 0..n {
            for j in 0..n {
                buf[i * pad + j] = Complex64::new(u[i * n + j], 0.0);
            }
        }
        fft2_in_place(&self.fwd, &mut buf, pad);
        for (b, k) in buf.iter_mut().zip(&self.kernel_hat) {
            *b *= *k;
        }
        fft2_in_place(&self.inv, &mut buf, pad);
        let scale = 1.0 / (pad * pad) as f64;
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                out[i * n + j] = buf[i * pad + j].re * scale;
            }
        }
        out
    }
}

/// Row-column 2-D FFT, in place on a square row-major buffer.
fn fft2_in_place(plan: &Arc<dyn Fft<f64>>, buf: &mut [Complex64], size: usize) {
    // Rows.
    for row in buf.chunks_exact_mut(size) {
        plan.process(row);
    }
    // Columns via transpose, rows, transpose back.
    transpose(buf, size);
    for row in buf.chunks_exact_mut(size) {
        plan.process(row);
    }
    transpose(buf, size);
}

fn transpose(buf: &mut [Complex64], size: usize) {
    for i in 0..size {
        for j in (i + 1)..size {
            buf.swap(i * size + j, j * size + i);
        }
    }
}

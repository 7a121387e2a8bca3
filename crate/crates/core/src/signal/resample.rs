//! Windowed-sinc sample-rate conversion (Kaiser window, beta 8).

use std::f64::consts::PI;

/// Half-width of the sinc kernel in source samples (at the lower rate).
const HALF_TAPS: usize = 32;
const KAISER_BETA: f64 = 8.0;

/// Resample to `dst_rate`. Output length is `round(n * dst/src)`, so the
/// duration is preserved within one sample period.
pub fn resample_to(samples: &[f64], src_rate: u32, dst_rate: u32) -> Vec<f64> {
    if src_rate == dst_rate || samples.is_empty() {
        return samples.to_vec();
    }
    let src = src_rate as f64;
    let dst = dst_rate as f64;
    let out_len = ((samples.len() as f64) * dst / src).round() as usize;
    // When downsampling, the kernel also low-passes below the new Nyquist.
    let cutoff_scale = (dst / src).min(1.0);
    let half_width = HALF_TAPS as f64 / cutoff_scale;
    let i0_beta = bessel_i0(KAISER_BETA);

    let mut out = Vec::with_capacity(out_len);
    for n in 0..out_len {
        let center = n as f64 * src / dst;
        let lo = (center - half_width).ceil().max(0.0) as usize;
        let hi = ((center + half_width).floor() as usize).min(samples.len() - 1);
        let mut acc = 0.0;
        for (m, &x) in samples.iter().enumerate().take(hi + 1).skip(lo) {
            let t = (m as f64 - center) * cutoff_scale;
            acc += x * sinc(t) * kaiser(t / HALF_TAPS as f64, i0_beta) * cutoff_scale;
        }
        out.push(acc.clamp(-1.0, 1.0));
    }
    out
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-12 {
        1.0
    } else {
        (PI * x).sin() / (PI * x)
    }
}

/// Kaiser window on u in [-1, 1].
fn kaiser(u: f64, i0_beta: f64) -> f64 {
    let t = 1.0 - u * u;
    if t <= 0.0 {
        0.0
    } else {
        bessel_i0(KAISER_BETA * t.sqrt()) / i0_beta
    }
}

/// Modified Bessel function of the first kind, order zero (power series).
fn bessel_i0(x: f64) -> f64 {
    let half = x / 2.0;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..40 {
        term *= (half / k as f64) * (half / k as f64);
        sum += term;
        if term < 1e-16 * sum {
            break;
        }
    }
    sum
}

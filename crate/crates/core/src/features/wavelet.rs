//! Transient energy ratio from a Daubechies-4 wavelet decomposition.

/// Daubechies 4-tap lowpass filter.
const H: [f64; 4] = [
    0.48296291314469025, // (1+sqrt(3))/(4 sqrt(2))
    0.836516303737469,   // (3+sqrt(3))/(4 sqrt(2))
    0.22414386804185735, // (3-sqrt(3))/(4 sqrt(2))
    -0.12940952255092145, // (1-sqrt(3))/(4 sqrt(2))
];

const LEVELS: usize = 5;

/// One periodized analysis step: returns (approximation, detail), each half
/// the input length. Orthonormal, so energy is preserved exactly.
fn dwt_step(x: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = x.len();
    let half = n / 2;
    let mut approx = Vec::with_capacity(half);
    let mut detail = Vec::with_capacity(half);
    for i in 0..half {
        let mut a = 0.0;
        let mut d = 0.0;
        for (k, &h) in H.iter().enumerate() {
            let idx = (2 * i + k) % n;
            a += h * x[idx];
            // Quadrature mirror: g[k] = (-1)^k h[3-k].
            let g = if k % 2 == 0 { H[3 - k] } else { -H[3 - k] };
            d += g * x[idx];
        }
        approx.push(a);
        detail.push(d);
    }
    (approx, detail)
}

/// Ratio of energy in the two finest detail levels of a 5-level decomposition
/// to the total frame energy; 0 for a silent frame.
pub fn transientness(frame: &[f64]) -> f64 {
    let total: f64 = frame.iter().map(|x| x * x).sum();
    if total == 0.0 {
        return 0.0;
    }
    let mut current = frame.to_vec();
    let mut fine_energy = 0.0;
    for level in 0..LEVELS {
        if current.len() < 4 {
            break;
        }
        let (approx, detail) = dwt_step(&current);
        if level < 2 {
            fine_energy += detail.iter().map(|x| x * x).sum::<f64>();
        }
        current = approx;
    }
    fine_energy / total
}

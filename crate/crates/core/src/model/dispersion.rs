//! Linear dispersion relations.

use super::PhysParams;

/// Positive frequency branch of the linearized model around depth `h0`.
pub fn dispersion_omega(k: f64, h0: f64, p: &PhysParams) -> f64 {
    let kk = h0 * h0 * k * k;
    let num = 1.0 + (p.alpha - 1.0) / 3.0 * kk;
    let den = 1.0 + p.alpha / 3.0 * kk;
    k.abs() * libm::sqrt(p.g * h0 * num / den)
}

/// Exact linear water-wave frequency in finite depth.
pub fn airy_omega(k: f64, h0: f64, g: f64) -> f64 {
    let k = k.abs();
    libm::sqrt(g * k * libm::tanh(h0 * k))
}

/// Discrete L2 norm over `(0, k_max]` of `omega / omega_airy - 1` (midpoint rule, `n` samples).
pub fn airy_deviation_l2(alpha: f64, h0: f64, g: f64, k_max: f64, n: usize) -> f64 {
    let p = PhysParams { g, alpha };
    let dk = k_max / n as f64;
    let s: f64 = (0..n)
        .map(|i| {
            let k = (i as f64 + 0.5) * dk;
            let r = dispersion_omega(k, h0, &p) / airy_omega(k, h0, g) - 1.0;
            r * r * dk
        })
        .sum();
    libm::sqrt(s)
}

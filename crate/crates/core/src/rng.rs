//! Deterministic random generation for instance families and test batteries.
//!
//! The generator is SplitMix64 (Steele, Lea, Flajolet's 64-bit finalizer as
//! popularized by Vigna). Gaussians come from the polar Box–Muller variant,
//! with the logarithm evaluated by a fixed series so every produced value is
//! a function of the seed and IEEE-754 arithmetic alone. That keeps instance
//! streams bit-identical across platforms and libm versions.

use num_complex::Complex64;

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 stream.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    /// Derive an independent stream for a labelled sub-task. Used so that the
    /// trial index and check name pin down the exact draw sequence.
    pub fn derive(seed: u64, label: u64) -> Self {
        let mut r = Self::new(seed ^ label.wrapping_mul(GAMMA));
        r.next_u64();
        r
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GAMMA);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1), 53-bit resolution.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in [lo, hi).
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    pub fn uniform_usize(&mut self, lo: usize, hi_inclusive: usize) -> usize {
        debug_assert!(hi_inclusive >= lo);
        let span = (hi_inclusive - lo + 1) as u64;
        lo + (self.next_u64() % span) as usize
    }

    /// Pair of independent standard normals via the polar method.
    pub fn gaussian_pair(&mut self) -> (f64, f64) {
        loop {
            let u = 2.0 * self.next_f64() - 1.0;
            let v = 2.0 * self.next_f64() - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                let f = (-2.0 * portable_ln(s) / s).sqrt();
                return (u * f, v * f);
            }
        }
    }

    /// Standard complex Gaussian: independent N(0, 1/2) real and imaginary
    /// parts, so E|z|² = 1.
    pub fn complex_gaussian(&mut self) -> Complex64 {
        let (a, b) = self.gaussian_pair();
        Complex64::new(a * std::f64::consts::FRAC_1_SQRT_2, b * std::f64::consts::FRAC_1_SQRT_2)
    }

    /// Uniformly distributed phase factor, |z| = 1, computed without trig.
    pub fn unit_phase(&mut self) -> Complex64 {
        loop {
            let z = self.complex_gaussian();
            let n = z.norm();
            if n > 1e-6 {
                return z / n;
            }
        }
    }

    pub fn complex_vector(&mut self, len: usize) -> Vec<Complex64> {
        (0..len).map(|_| self.complex_gaussian()).collect()
    }

    /// Random unit vector in ℂⁿ.
    pub fn unit_vector(&mut self, len: usize) -> Vec<Complex64> {
        loop {
            let v = self.complex_vector(len);
            let n = crate::matrix::vec_norm(&v);
            if n > 1e-6 {
                return v.iter().map(|z| z / n).collect();
            }
        }
    }
}

/// Natural logarithm by exponent extraction plus the atanh series,
/// using only IEEE-exact operations (+, −, ×, ÷). Accepts finite x > 0.
///
/// With m in [1, 2) and t = (m−1)/(m+1) ≤ 1/3, twenty odd-power terms put
/// the series error below f64 resolution.
pub fn portable_ln(x: f64) -> f64 {
    debug_assert!(x > 0.0 && x.is_finite());
    let bits = x.to_bits();
    let raw_exp = ((bits >> 52) & 0x7FF) as i64;
    let (exp, mantissa_bits) = if raw_exp == 0 {
        // subnormal: renormalize
        let scaled = x * (1u64 << 54) as f64;
        let b = scaled.to_bits();
        ((((b >> 52) & 0x7FF) as i64) - 1023 - 54, b & 0x000F_FFFF_FFFF_FFFF)
    } else {
        (raw_exp - 1023, bits & 0x000F_FFFF_FFFF_FFFF)
    };
    let m = f64::from_bits(mantissa_bits | (1023u64 << 52)); // in [1, 2)
    let t = (m - 1.0) / (m + 1.0);
    let t2 = t * t;
    // Σ t^(2k+1)/(2k+1), evaluated by Horner in t², fixed 20 terms.
    let mut acc = 0.0;
    let mut k = 20i64;
    while k >= 0 {
        acc = acc * t2 + 1.0 / (2 * k + 1) as f64;
        k -= 1;
    }
    2.0 * t * acc + exp as f64 * std::f64::consts::LN_2
}

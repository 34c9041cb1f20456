//! Exact completeness oracles and size arithmetic.

use crate::error::{Error, Result};

/// `Pr[Bin(n, θ) > t] = Σ_{i>t} C(n,i) θ^i (1-θ)^{n-i}`, summed in log space.
pub fn exact_tail(n: usize, t: usize, theta: f64) -> f64 {
    if t >= n || theta <= 0.0 {
        return 0.0;
    }
    if theta >= 1.0 {
        return 1.0;
    }
    let (lt, l1t) = (theta.ln(), (-theta).ln_1p());
    let mut ln_c = 0.0f64;
    for j in 0..=t {
        ln_c += ((n - j) as f64).ln() - ((j + 1) as f64).ln();
    }
    // ln_c is now ln C(n, t+1).
    let terms: Vec<f64> = (t + 1..=n)
        .map(|i| {
            let v = ln_c + i as f64 * lt + (n - i) as f64 * l1t;
            if i < n {
                ln_c += ((n - i) as f64).ln() - ((i + 1) as f64).ln();
            }
            v
        })
        .collect();
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = terms.iter().map(|&v| (v - max).exp()).sum();
    (max + sum.ln()).exp().min(1.0)
}

/// `(2^m - t·m, 2^m)`: plaintext and ciphertext bits for a Goppa code.
pub fn code_sizes(m: u32, t: usize) -> Result<(usize, usize)> {
    if !(1..=30).contains(&m) {
        return Err(Error::UnsupportedDegree(m));
    }
    let n = 1usize << m;
    let tm = t.checked_mul(m as usize).filter(|&v| v < n).ok_or_else(|| {
        Error::InvalidParams(format!("t·m = {}·{m} must be below 2^m = {n}", t))
    })?;
    Ok((n - tm, n))
}

/// Half-width of the 95% normal interval for a fair coin over `trials`.
pub fn ci95(trials: usize) -> f64 {
    if trials == 0 {
        return f64::INFINITY;
    }
    1.96 * (0.25 / trials as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Sum over all 2^n words of their exact probability under B_θ^n.
    fn enumerate_tail(n: usize, t: usize, theta: f64) -> f64 {
        let mut by_weight = vec![0.0f64; n + 1];
        for w in 0u32..1 << n {
            by_weight[w.count_ones() as usize] += 1.0;
        }
        (t + 1..=n)
            .map(|i| by_weight[i] * theta.powi(i as i32) * (1.0 - theta).powi((n - i) as i32))
            .sum()
    }

    #[test]
    fn degenerate_cases() {
        assert_eq!(exact_tail(16, 2, 0.0), 0.0);
        assert_eq!(exact_tail(16, 16, 0.3), 0.0);
        assert_eq!(exact_tail(16, 20, 0.3), 0.0);
        assert!((exact_tail(16, 0, 1.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn matches_full_enumeration_at_n16() {
        let got = exact_tail(16, 2, 6.0 / 64.0);
        let want = enumerate_tail(16, 2, 6.0 / 64.0);
        assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        for t in 0..16 {
            for theta in [0.01, 0.2, 0.5, 0.9] {
                assert!((exact_tail(16, t, theta) - enumerate_tail(16, t, theta)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn large_n_is_finite_and_small() {
        let v = exact_tail(4096, 40, 30.0 / 4096.0);
        assert!(v > 0.0 && v < 0.1, "{v}");
        assert!(exact_tail(1 << 16, 10, 1e-6) < 1e-20);
    }

    #[test]
    fn monotone_in_theta_and_t() {
        let mut prev = 0.0;
        for i in 1..100 {
            let v = exact_tail(256, 10, i as f64 / 1000.0);
            assert!(v >= prev);
            prev = v;
        }
        let mut prev = 1.0;
        for t in 0..40 {
            let v = exact_tail(256, t, 30.0 / 1024.0);
            assert!(v <= prev);
            prev = v;
        }
    }

    #[test]
    fn sizes() {
        assert_eq!(code_sizes(10, 50).unwrap(), (524, 1024));
        assert_eq!(code_sizes(11, 32).unwrap(), (1696, 2048));
        assert_eq!(code_sizes(12, 40).unwrap(), (3616, 4096));
        assert_eq!(code_sizes(4, 2).unwrap(), (8, 16));
        assert!(code_sizes(4, 4).is_err());
    }

    #[test]
    fn ci_half_width() {
        assert!((ci95(10_000) - 0.0098).abs() < 1e-12);
    }
}

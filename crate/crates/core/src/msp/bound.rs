/// Parameters that keep the flag probability of the reduction below `ε`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FlagBound {
    pub delta: f64,
    pub d: usize,
    pub k_min: usize,
    /// The bound evaluated at `k_min`.
    pub bound: f64,
}

/// `n²/d + n·d·exp(−δ²k/(2d)) + δn`: collisions between arrivals, interval
/// counts straying more than `δk/d` from their mean, and the fallback branch.
pub fn flag_bound_value(n: usize, d: usize, delta: f64, k: usize) -> f64 {
    let (n, d, k) = (n as f64, d as f64, k as f64);
    n * n / d + n * d * libm::exp(-delta * delta * k / (2.0 * d)) + delta * n
}

/// `δ = ε/(3n)`, `d = ⌈3n²/ε⌉` and the least multiple `k` of `d` for which
/// [`flag_bound_value`] is at most `ε`.
pub fn flag_probability_bound(n: usize, epsilon: f64) -> crate::Result<FlagBound> {
    if n == 0 || !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(crate::Error::InvalidParameter(alloc::format!(
            "flag bound needs n >= 1 and 0 < epsilon < 1 (got n={n}, epsilon={epsilon})"
        )));
    }
    let nf = n as f64;
    let delta = epsilon / (3.0 * nf);
    let q = 3.0 * nf * nf / epsilon;
    // 3·9/0.3 evaluates to 90.00000000000001
    let d = if libm::fabs(q - libm::round(q)) < 1e-9 * q { libm::round(q) } else { libm::ceil(q) } as usize;
    let slack = epsilon - nf * nf / d as f64 - delta * nf;
    // n d exp(-δ²k/2d) <= slack  <=>  k >= (2d/δ²) ln(n d / slack)
    let k_real = 2.0 * d as f64 / (delta * delta) * libm::log(nf * d as f64 / slack);
    let mut k = (libm::ceil(k_real.max(0.0) / d as f64) as usize).max(1) * d;
    while flag_bound_value(n, d, delta, k) > epsilon {
        k += d;
    }
    while k > d && flag_bound_value(n, d, delta, k - d) <= epsilon {
        k -= d;
    }
    Ok(FlagBound { delta, d, k_min: k, bound: flag_bound_value(n, d, delta, k) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_elements_half() {
        let b = flag_probability_bound(4, 0.5).unwrap();
        assert!((b.delta - 1.0 / 24.0).abs() < 1e-15);
        assert_eq!(b.d, 96);
        assert_eq!(b.k_min % 96, 0);
        // exact threshold from the closed form: 110592 ln(2304) ≈ 856,227
        assert_eq!(b.k_min, 856_320);
        assert!(b.bound <= 0.5);
        assert!(flag_bound_value(4, 96, b.delta, b.k_min - 96) > 0.5);
        let expected = 16.0 / 96.0 + 384.0 * libm::exp(-(b.k_min as f64) / 110_592.0) + 4.0 / 24.0;
        assert!((b.bound - expected).abs() < 1e-12);
    }

    #[test]
    fn single_element_loose_epsilon() {
        let b = flag_probability_bound(1, 0.99).unwrap();
        assert_eq!(b.d, 4);
        let tight = flag_probability_bound(1, 1.0 - 1e-12).unwrap();
        assert_eq!(tight.d, 3);
        assert_eq!(tight.k_min, 120);
        assert_eq!(flag_probability_bound(3, 0.3).unwrap().d, 90);
    }

    #[test]
    fn rejects_bad_epsilon() {
        assert!(flag_probability_bound(3, 1.0).is_err());
        assert!(flag_probability_bound(3, 0.0).is_err());
        assert!(flag_probability_bound(0, 0.5).is_err());
    }
}

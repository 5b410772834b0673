//! Sine integral and the oscillatory tail integrals built on it.

use num_complex::Complex64;
use std::f64::consts::FRAC_PI_2;

/// `Si(x) = ∫_0^x sin(t)/t dt`
pub fn sine_integral(x: f64) -> f64 {
    if x < 0.0 {
        return -sine_integral(-x);
    }
    if x == 0.0 {
        return 0.0;
    }
    if x <= 2.0 {
        // Σ (−1)^k x^{2k+1} / ((2k+1)(2k+1)!)
        let mut sum = 0.0;
        let mut term = x; // x^{2k+1}/(2k+1)!
        let mut k = 0u32;
        loop {
            let contrib = term / (2 * k + 1) as f64;
            sum += if k.is_multiple_of(2) { contrib } else { -contrib };
            if contrib.abs() < 1e-17 * sum.abs() {
                break;
            }
            k += 1;
            term *= x * x / ((2 * k) as f64 * (2 * k + 1) as f64);
        }
        return sum;
    }
    // Ci(x) + i(Si(x) − π/2) = −E1(−ix); E1 by its continued fraction (modified Lentz).
    let z = Complex64::new(0.0, -x);
    let tiny = 1e-300;
    let mut b = z + 1.0;
    let mut c = Complex64::new(1.0 / tiny, 0.0);
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..10_000 {
        let a = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (d * a + b);
        c = b + a / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).norm() < 1e-16 {
            break;
        }
    }
    let e1 = h * (-z).exp();
    FRAC_PI_2 - e1.im
}

/// `∫_x^∞ cos(k u)/u² du` for `x > 0`.
pub fn cos_over_square_tail(k: f64, x: f64) -> f64 {
    let k = k.abs();
    (k * x).cos() / x - k * (FRAC_PI_2 - sine_integral(k * x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{integrate, QuadOptions};
    use approx::assert_abs_diff_eq;

    #[test]
    fn reference_values() {
        // Abramowitz & Stegun Table 5.1
        assert_abs_diff_eq!(sine_integral(1.0), 0.946_083_070_367_183, epsilon = 1e-14);
        assert_abs_diff_eq!(sine_integral(5.0), 1.549_931_244_944_674, epsilon = 1e-13);
        assert_abs_diff_eq!(sine_integral(10.0), 1.658_347_594_218_874, epsilon = 1e-13);
        assert_abs_diff_eq!(sine_integral(1e6), FRAC_PI_2, epsilon = 1e-5);
    }

    #[test]
    fn continuous_across_branch_switch() {
        assert_abs_diff_eq!(sine_integral(2.0 - 1e-12), sine_integral(2.0 + 1e-12), epsilon = 1e-11);
    }

    #[test]
    fn matches_direct_quadrature() {
        let opts = QuadOptions { abs_tol: 1e-13, ..Default::default() };
        for x in [0.3, 1.7, 2.5, 4.0, 12.0, 40.0] {
            let q = integrate(&|t: f64| if t == 0.0 { 1.0 } else { t.sin() / t }, 0.0, x, opts).unwrap();
            assert_abs_diff_eq!(sine_integral(x), q.value, epsilon = 1e-11);
        }
    }

    #[test]
    fn tail_integral_limits() {
        assert_abs_diff_eq!(cos_over_square_tail(0.0, 4.0), 0.25, epsilon = 1e-15);
        // Truncated direct integral plus a 1/X remainder bound.
        let opts = QuadOptions { abs_tol: 1e-12, initial_panels: 2000, ..Default::default() };
        let direct = integrate(&|u: f64| (1.3 * u).cos() / (u * u), 3.0, 3000.0, opts).unwrap().value;
        assert_abs_diff_eq!(cos_over_square_tail(1.3, 3.0), direct, epsilon = 1e-6);
    }
}

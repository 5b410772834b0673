//! Adaptive Simpson quadrature.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    /// Absolute tolerance on the whole integral.
    pub abs_tol: f64,
    pub max_depth: u32,
    /// Number of equal panels the interval is cut into before adapting.
    pub initial_panels: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self { abs_tol: 1e-10, max_depth: 40, initial_panels: 32 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

struct State<'a, F> {
    f: &'a F,
    max_depth: u32,
    evaluations: usize,
    error: f64,
    unconverged: Option<(f64, f64)>,
}

impl<F: Fn(f64) -> f64> State<'_, F> {
    fn eval(&mut self, x: f64) -> f64 {
        self.evaluations += 1;
        (self.f)(x)
    }

    #[allow(clippy::too_many_arguments)]
    fn recurse(&mut self, a: f64, fa: f64, m: f64, fm: f64, b: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = self.eval(lm);
        let frm = self.eval(rm);
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if delta.abs() <= 15.0 * tol {
            self.error += delta.abs() / 15.0;
            return left + right + delta / 15.0;
        }
        if depth >= self.max_depth {
            self.error += delta.abs() / 15.0;
            self.unconverged.get_or_insert((a, b));
            return left + right + delta / 15.0;
        }
        self.recurse(a, fa, lm, flm, m, fm, left, 0.5 * tol, depth + 1)
            + self.recurse(m, fm, rm, frm, b, fb, right, 0.5 * tol, depth + 1)
    }
}

/// `∫_a^b f(x) dx`. Fails with [`Error::Numerical`] when some subinterval
/// cannot meet its share of the tolerance within `max_depth` bisections.
pub fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, opts: QuadOptions) -> Result<QuadResult> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Numerical(format!("integration bounds must be finite, got [{a}, {b}]")));
    }
    let mut state = State { f, max_depth: opts.max_depth, evaluations: 0, error: 0.0, unconverged: None };
    let panels = opts.initial_panels.max(1);
    let width = (b - a) / panels as f64;
    let panel_tol = opts.abs_tol / panels as f64;
    let mut total = 0.0;
    let mut x0 = a;
    let mut f0 = state.eval(x0);
    for k in 0..panels {
        let x1 = if k + 1 == panels { b } else { a + (k + 1) as f64 * width };
        let m = 0.5 * (x0 + x1);
        let fm = state.eval(m);
        let f1 = state.eval(x1);
        let whole = (x1 - x0) / 6.0 * (f0 + 4.0 * fm + f1);
        total += state.recurse(x0, f0, m, fm, x1, f1, whole, panel_tol, 0);
        x0 = x1;
        f0 = f1;
    }
    if let Some((lo, hi)) = state.unconverged {
        return Err(Error::Numerical(format!(
            "adaptive Simpson did not converge on [{lo:.6e}, {hi:.6e}] at depth {} (estimate {total:.12e}, error ~{:.3e}, {} evaluations)",
            opts.max_depth, state.error, state.evaluations
        )));
    }
    if !total.is_finite() {
        return Err(Error::Numerical("integrand produced a non-finite value".into()));
    }
    Ok(QuadResult { value: total, error_estimate: state.error, evaluations: state.evaluations })
}

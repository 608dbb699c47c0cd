//! Bracketed scalar root finding.

use thiserror::Error;

use crate::scalar::Real;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RootError {
    #[error("no sign change on [{lo}, {hi}] (f(lo) = {f_lo}, f(hi) = {f_hi})")]
    NoSignChange { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },
    #[error("root solver did not converge in {0} iterations")]
    MaxIterations(usize),
    #[error("objective returned a non-finite value at {0}")]
    NonFinite(f64),
}

/// Result of a bracketed solve: the final bracket and the best point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracketed<T> {
    pub root: T,
    pub f_root: T,
    pub lo: T,
    pub hi: T,
    pub iterations: usize,
}

/// Brent's method (inverse quadratic / secant steps safeguarded by bisection).
///
/// Requires `f(lo)` and `f(hi)` of opposite sign. Iterates until the bracket
/// is a few ulps wide or an exact zero is hit, so the returned `root` is the
/// bracket end with the smaller `|f|`.
pub fn brent<T: Real, F: FnMut(T) -> T>(mut f: F, lo: T, hi: T, max_iter: usize) -> Result<Bracketed<T>, RootError> {
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a), f(b));
    for (x, fx) in [(a, fa), (b, fb)] {
        if !fx.is_finite() {
            return Err(RootError::NonFinite(x.to_f64_lossy()));
        }
    }
    if fa == T::zero() {
        return Ok(Bracketed { root: a, f_root: fa, lo: a, hi: a, iterations: 0 });
    }
    if fb == T::zero() {
        return Ok(Bracketed { root: b, f_root: fb, lo: b, hi: b, iterations: 0 });
    }
    if (fa > T::zero()) == (fb > T::zero()) {
        return Err(RootError::NoSignChange {
            lo: a.to_f64_lossy(),
            hi: b.to_f64_lossy(),
            f_lo: fa.to_f64_lossy(),
            f_hi: fb.to_f64_lossy(),
        });
    }
    let two = T::lit(2.0);
    let half = T::lit(0.5);
    // c is the previous contrapoint; d the last step, e the one before.
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for it in 1..=max_iter {
        if (fb > T::zero()) == (fc > T::zero()) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = two * T::epsilon() * b.abs() + T::min_positive_value();
        let m = half * (c - b);
        if m.abs() <= tol || fb == T::zero() {
            let (lo, hi) = if b < c { (b, c) } else { (c, b) };
            return Ok(Bracketed { root: b, f_root: fb, lo, hi, iterations: it });
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = two * m * s;
                q = T::one() - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (two * m * qa * (qa - r) - (b - a) * (r - T::one()));
                q = (qa - T::one()) * (r - T::one()) * (s - T::one());
            }
            if p > T::zero() {
                q = -q;
            } else {
                p = -p;
            }
            if two * p < (T::lit(3.0) * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b = if d.abs() > tol { b + d } else if m > T::zero() { b + tol } else { b - tol };
        fb = f(b);
        if !fb.is_finite() {
            return Err(RootError::NonFinite(b.to_f64_lossy()));
        }
    }
    Err(RootError::MaxIterations(max_iter))
}

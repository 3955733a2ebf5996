//! Bracketed scalar root finding.

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

/// Bisection on a sign-changing bracket until the width is below `tol`.
pub fn bisect<T: Real, F: FnMut(T) -> T>(mut f: F, mut lo: T, mut hi: T, tol: T) -> Result<T> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == T::zero() {
        return Ok(lo);
    }
    if fhi == T::zero() {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::Precondition("bisection bracket has no sign change".into()));
    }
    for _ in 0..400 {
        let mid = (lo + hi) * lit(0.5);
        if (hi - lo).abs() <= tol || !(mid > lo.min(hi) && mid < lo.max(hi)) {
            return Ok(mid);
        }
        let fm = f(mid);
        if fm == T::zero() {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Err(Error::NotConverged {
        context: "bisection".into(),
        estimate: ((lo + hi) * lit(0.5)).f64(),
        error: (hi - lo).abs().f64(),
    })
}

/// All simple sign changes of `f` on [lo, hi] found on an `n`-cell scan, refined by bisection.
pub fn scan_roots<T: Real, F: FnMut(T) -> T>(mut f: F, lo: T, hi: T, n: usize, tol: T) -> Result<Vec<T>> {
    let h = (hi - lo) / T::from_usize_lossy(n);
    let mut out = Vec::new();
    let mut x0 = lo;
    let mut f0 = f(x0);
    for j in 1..=n {
        let x1 = lo + h * T::from_usize_lossy(j);
        let f1 = f(x1);
        if f0 == T::zero() {
            out.push(x0);
        } else if f0.signum() != f1.signum() && f1 != T::zero() {
            out.push(bisect(&mut f, x0, x1, tol)?);
        }
        x0 = x1;
        f0 = f1;
    }
    Ok(out)
}

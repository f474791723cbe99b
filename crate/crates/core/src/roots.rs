//! Bracketing and bisection for monotone functions.

/// Result of inverting a nondecreasing function at a level.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Inversion {
    /// Smallest bracketed point `x` with `f(x) >= level`.
    pub value: f64,
    /// Final bracket width.
    pub width: f64,
    /// `dx/df` measured on the first bracket narrower than 1e-6 relative.
    pub slope: f64,
}

/// Finds `inf{x : f(x) >= level}` for nondecreasing `f`, starting from the
/// bracket `[lo, hi]` and doubling outward until it holds the level.
///
/// Stops when the bracket is narrower than `rel_tol·max(|lo|,|hi|)` or can no
/// longer be halved in floating point. `None` if no bracket is found.
pub(crate) fn invert_monotone<F, E>(
    mut f: F,
    level: f64,
    mut lo: f64,
    mut hi: f64,
    rel_tol: f64,
) -> Result<Option<Inversion>, E>
where
    F: FnMut(f64) -> Result<f64, E>,
{
    let mut f_hi = f(hi)?;
    let mut steps = 0;
    while f_hi < level {
        let w = (hi - lo).max(1.0);
        lo = hi;
        hi += 2.0 * w;
        f_hi = f(hi)?;
        steps += 1;
        if steps > 2000 || !hi.is_finite() {
            return Ok(None);
        }
    }
    let mut f_lo = f(lo)?;
    steps = 0;
    while f_lo >= level {
        let w = (hi - lo).max(1.0);
        hi = lo;
        f_hi = f_lo;
        lo -= 2.0 * w;
        f_lo = f(lo)?;
        steps += 1;
        if steps > 2000 || !lo.is_finite() {
            return Ok(None);
        }
    }
    let mut slope = f64::NAN;
    for _ in 0..400 {
        let scale = lo.abs().max(hi.abs());
        if slope.is_nan() && hi - lo <= 1e-6 * scale && f_hi > f_lo {
            slope = (hi - lo) / (f_hi - f_lo);
        }
        if hi - lo <= rel_tol * scale {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if !(mid > lo && mid < hi) {
            break;
        }
        let fm = f(mid)?;
        if fm >= level {
            hi = mid;
            f_hi = fm;
        } else {
            lo = mid;
            f_lo = fm;
        }
    }
    Ok(Some(Inversion {
        value: hi,
        width: hi - lo,
        slope,
    }))
}

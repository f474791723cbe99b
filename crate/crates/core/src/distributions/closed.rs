//! Closed forms, written to keep relative accuracy in both tails.

use core::f64::consts::{FRAC_1_PI, PI};

use libm::{atan, exp, expm1, log, pow, tan};

pub(crate) fn pareto_cdf(alpha: f64, x: f64) -> f64 {
    if x <= 1.0 {
        0.0
    } else if x == f64::INFINITY {
        1.0
    } else {
        -expm1(-alpha * log(x))
    }
}

pub(crate) fn frechet_cdf(alpha: f64, x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x == f64::INFINITY {
        1.0
    } else {
        exp(-pow(x, -alpha))
    }
}

pub(crate) fn cauchy_cdf(x: f64) -> f64 {
    if x == f64::NEG_INFINITY {
        0.0
    } else if x == f64::INFINITY {
        1.0
    } else if x < -1.0 {
        FRAC_1_PI * atan(-1.0 / x)
    } else if x > 1.0 {
        1.0 - FRAC_1_PI * atan(1.0 / x)
    } else {
        0.5 + FRAC_1_PI * atan(x)
    }
}

pub(crate) fn cauchy_quantile(u: f64) -> f64 {
    if u < 0.25 {
        -1.0 / tan(PI * u)
    } else if u > 0.75 {
        1.0 / tan(PI * (1.0 - u))
    } else {
        tan(PI * (u - 0.5))
    }
}

pub(crate) fn half_cauchy_cdf(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x == f64::INFINITY {
        1.0
    } else if x > 1.0 {
        1.0 - 2.0 * FRAC_1_PI * atan(1.0 / x)
    } else {
        2.0 * FRAC_1_PI * atan(x)
    }
}

pub(crate) fn half_cauchy_quantile(u: f64) -> f64 {
    if u > 0.5 {
        1.0 / tan(0.5 * PI * (1.0 - u))
    } else {
        tan(0.5 * PI * u)
    }
}

/// Principal branch of Lambert W on `[-1/e, ∞]`.
pub(crate) fn lambert_w0(y: f64) -> f64 {
    const INV_E: f64 = 0.367_879_441_171_442_33;
    if y.is_nan() || y < -INV_E {
        return f64::NAN;
    }
    if y == f64::INFINITY {
        return f64::INFINITY;
    }
    if y == 0.0 {
        return 0.0;
    }
    let mut w = if y < 1.0 {
        // Series around the branch point keeps Halley stable near -1/e.
        let p = libm::sqrt(2.0 * (1.0 + y / INV_E));
        -1.0 + p - p * p / 3.0
    } else {
        let l = log(y);
        l - log(l.max(1.0))
    };
    for _ in 0..64 {
        let ew = exp(w);
        let f = w * ew - y;
        let wp1 = w + 1.0;
        if wp1 == 0.0 {
            break;
        }
        let denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        let step = f / denom;
        w -= step;
        if step.abs() <= 1e-16 * (1.0 + w.abs()) {
            break;
        }
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cauchy_branches_agree_at_switch_points() {
        for x in [-1.0f64, 1.0] {
            let direct = 0.5 + FRAC_1_PI * atan(x);
            assert!((cauchy_cdf(x) - direct).abs() < 1e-16);
            assert!((cauchy_cdf(x * (1.0 + 1e-12)) - direct).abs() < 1e-12);
        }
        for u in [0.25f64, 0.75] {
            let direct = tan(PI * (u - 0.5));
            assert!((cauchy_quantile(u) - direct).abs() < 1e-15);
        }
    }

    #[test]
    fn cauchy_far_tail_keeps_relative_accuracy() {
        let x = -1e12;
        let f = cauchy_cdf(x);
        assert!((f * PI * 1e12 - 1.0).abs() < 1e-12);
        assert!((cauchy_quantile(f) / x - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lambert_w_inverts_x_exp_x() {
        for x in [-1.0, -0.9, -0.5, -1e-3, 0.0, 1e-8, 0.5, 1.0, 3.0, 50.0, 300.0] {
            let y = x * exp(x);
            let w = lambert_w0(y);
            assert!((w - x).abs() <= 1e-7 * (1.0 + x.abs()), "x={x} w={w}");
        }
        assert!(lambert_w0(-1.0).is_nan());
    }
}

//! Globally adaptive Gauss–Kronrod (7/15) quadrature.

use alloc::vec::Vec;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
// Gauss weights for nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    /// Sum of per-panel `|K15 − G7|` differences.
    pub error: f64,
    pub panels: usize,
    pub converged: bool,
}

#[derive(Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn kronrod<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for (j, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dx = half * x;
        let pair = f(center - dx) + f(center + dx);
        k += w * pair;
        if j % 2 == 1 {
            g += WG[j / 2] * pair;
        }
    }
    Panel {
        a,
        b,
        value: k * half,
        error: ((k - g) * half).abs(),
    }
}

/// Integrates `f` over `[a, b]` until the summed error estimate drops below
/// `max(abs_tol, rel_tol·|I|)` or `max_panels` panels are in use.
///
/// `breaks` are optional interior points that start as panel boundaries.
pub fn integrate<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    breaks: &[f64],
    abs_tol: f64,
    rel_tol: f64,
    max_panels: usize,
) -> Quadrature {
    let mut edges: Vec<f64> = Vec::with_capacity(breaks.len() + 2);
    edges.push(a);
    edges.extend(breaks.iter().copied().filter(|&x| x > a && x < b));
    edges.push(b);
    edges.sort_by(f64::total_cmp);
    let mut panels: Vec<Panel> = edges
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| kronrod(&mut f, w[0], w[1]))
        .collect();
    if panels.is_empty() {
        return Quadrature {
            value: 0.0,
            error: 0.0,
            panels: 0,
            converged: true,
        };
    }
    loop {
        let value: f64 = panels.iter().map(|p| p.value).sum();
        let error: f64 = panels.iter().map(|p| p.error).sum();
        let target = abs_tol.max(rel_tol * value.abs());
        let converged = error <= target;
        if converged || panels.len() >= max_panels {
            return Quadrature {
                value,
                error,
                panels: panels.len(),
                converged,
            };
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .fold((0, -1.0), |best, (i, p)| if p.error > best.1 { (i, p.error) } else { best });
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        if !(mid > p.a && mid < p.b) {
            // Panel can no longer be split in floating point; freeze it.
            panels.push(Panel { error: 0.0, ..p });
            let frozen_error = p.error;
            let rest: f64 = panels.iter().map(|q| q.error).sum();
            if rest == 0.0 {
                return Quadrature {
                    value: panels.iter().map(|q| q.value).sum(),
                    error: frozen_error,
                    panels: panels.len(),
                    converged: frozen_error <= target,
                };
            }
            continue;
        }
        panels.push(kronrod(&mut f, p.a, mid));
        panels.push(kronrod(&mut f, mid, p.b));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let q = integrate(|x| x * x * x - 2.0 * x + 1.0, 0.0, 2.0, &[], 1e-14, 0.0, 50);
        assert!((q.value - 2.0).abs() < 1e-14);
        assert!(q.converged);
    }

    #[test]
    fn log_singularity_converges() {
        let q = integrate(libm::log, 0.0, 1.0, &[], 1e-12, 0.0, 500);
        assert!(q.converged, "{q:?}");
        assert!((q.value + 1.0).abs() < 1e-11);
    }

    #[test]
    fn sharp_peak_with_break() {
        let f = |x: f64| libm::exp(-1e4 * (x - 0.3) * (x - 0.3));
        let q = integrate(f, 0.0, 1.0, &[0.3], 1e-13, 0.0, 500);
        let exact = libm::sqrt(core::f64::consts::PI / 1e4);
        assert!((q.value - exact).abs() < 1e-12);
    }
}

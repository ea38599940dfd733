//! Brute-force orthogonality oracle: minimize the convex map `λ ↦ ‖x + λy‖`
//! on a grid, then refine by golden-section search. Uses only norm values.

use crate::norm::NormSpec;

/// Golden-section minimizer for unimodal functions on an interval.
#[derive(Clone, Copy, Debug)]
pub struct GoldenSection {
    pub xtol: f64,
    pub max_iter: usize,
}

impl Default for GoldenSection {
    fn default() -> Self {
        GoldenSection { xtol: 1e-12, max_iter: 200 }
    }
}

impl GoldenSection {
    /// Returns `(argmin, min)` on `[a, b]`.
    pub fn minimize(&self, f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
        let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
        let mut c = b - inv_phi * (b - a);
        let mut d = a + inv_phi * (b - a);
        let (mut fc, mut fd) = (f(c), f(d));
        for _ in 0..self.max_iter {
            if (b - a).abs() <= self.xtol {
                break;
            }
            if fc <= fd {
                b = d;
                d = c;
                fd = fc;
                c = b - inv_phi * (b - a);
                fc = f(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + inv_phi * (b - a);
                fd = f(d);
            }
        }
        if fc <= fd {
            (c, fc)
        } else {
            (d, fd)
        }
    }
}

/// Grid on `[−10, 10]` with step `1e−3`.
pub const GRID_HALF_WIDTH: f64 = 10.0;
pub const GRID_STEP: f64 = 1e-3;

/// Result of a line minimization for unit-normalized `x`, `y`.
#[derive(Clone, Copy, Debug)]
pub struct LineMin {
    pub lambda: f64,
    pub min: f64,
    /// `‖x‖ − min ≥ 0` after normalization; zero means `x ⊥ y`.
    pub gap: f64,
}

/// Minimizes `‖x̂ + λŷ‖` with `x̂ = x/‖x‖`, `ŷ = y/‖y‖`.
pub fn line_minimum(norm: impl Fn(&[f64]) -> f64, x: &[f64], y: &[f64]) -> LineMin {
    let nx = norm(x);
    let ny = norm(y);
    let xh: Vec<f64> = x.iter().map(|c| c / nx).collect();
    if ny == 0.0 {
        return LineMin { lambda: 0.0, min: 1.0, gap: 0.0 };
    }
    let yh: Vec<f64> = y.iter().map(|c| c / ny).collect();
    let mut buf = vec![0.0; x.len()];
    let mut eval = |l: f64| {
        for ((b, a), c) in buf.iter_mut().zip(&xh).zip(&yh) {
            *b = a + l * c;
        }
        norm(&buf)
    };
    let steps = (2.0 * GRID_HALF_WIDTH / GRID_STEP).round() as usize;
    let mut best = (0.0, eval(0.0));
    for k in 0..=steps {
        let l = -GRID_HALF_WIDTH + k as f64 * GRID_STEP;
        let v = eval(l);
        if v < best.1 {
            best = (l, v);
        }
    }
    let f = |l: f64| {
        let p: Vec<f64> = xh.iter().zip(&yh).map(|(a, c)| a + l * c).collect();
        norm(&p)
    };
    let (l, v) = GoldenSection::default().minimize(f, best.0 - GRID_STEP, best.0 + GRID_STEP);
    let (lambda, min) = if v < best.1 { (l, v) } else { best };
    let base = norm(&xh);
    LineMin { lambda, min, gap: (base - min).max(0.0) }
}

/// Oracle verdict: orthogonal iff the normalized gap is at most `noise`.
pub fn oracle_orthogonal(spec: &NormSpec, x: &[f64], y: &[f64], noise: f64) -> (bool, LineMin) {
    let m = line_minimum(|v| spec.norm_f64(v), x, y);
    (m.gap <= noise, m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_section_parabola() {
        let (x, v) = GoldenSection::default().minimize(|t| (t - 0.3).powi(2) + 1.0, -1.0, 2.0);
        assert!((x - 0.3).abs() < 1e-6);
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn euclidean_line_minimum() {
        let l2 = NormSpec::lp(2.0, 2).unwrap();
        let m = line_minimum(|v| l2.norm_f64(v), &[1.0, 0.0], &[1.0, 1.0]);
        // min of |(1,0) + λ(1,1)/√2| is 1/√2 at λ = −1/√2.
        assert!((m.min - 0.5f64.sqrt()).abs() < 1e-12);
        assert!((m.lambda + 0.5f64.sqrt()).abs() < 1e-6);
        assert!(oracle_orthogonal(&l2, &[1.0, 0.0], &[0.0, 3.0], 1e-12).0);
    }
}

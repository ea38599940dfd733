//! Absolute norm on the plane whose unit sphere in the first quadrant is the
//! flat segment `{(ξ, 1) : 0 ≤ ξ ≤ ξ₀}` followed by the curve `(ξ, η(ξ))`,
//! `ξ₀ ≤ ξ ≤ 1`, with `η(ξ) = −eξ ln ξ` and `ξ₀ = 1/e`.

use std::f64::consts::E;

use super::subdiff::SubdiffKind;

pub const XI0: f64 = 1.0 / E;

/// Relative tolerance of the ray-scaling bisection.
pub const BISECT_REL_TOL: f64 = 1e-12;
pub const BISECT_MAX_ITER: usize = 200;

pub fn eta(xi: f64) -> f64 {
    -E * xi * xi.ln()
}

pub fn eta_prime(xi: f64) -> f64 {
    -E * (xi.ln() + 1.0)
}

pub fn eta_second(xi: f64) -> f64 {
    -E / xi
}

/// `α(ξ) = ξ₀/ξ`, the involution pairing the two ends of the curve.
pub fn alpha(xi: f64) -> f64 {
    XI0 / xi
}

/// Height of the first-quadrant sphere above `ξ ∈ [0, 1]`.
pub fn height(xi: f64) -> f64 {
    if xi <= XI0 {
        1.0
    } else {
        eta(xi)
    }
}

/// Closed form: on the curve `ζ/ξ = −e ln ξ`, so a ray with slope `b/a` meets
/// it at `ξ = exp(−b/(e a))`.
pub fn norm(x: &[f64]) -> f64 {
    let (a, b) = (x[0].abs(), x[1].abs());
    if a == 0.0 && b == 0.0 {
        return 0.0;
    }
    if a * E <= b {
        b
    } else {
        a * (b / (E * a)).exp()
    }
}

/// Same value by bisection on the ray scaling.
pub fn norm_bisect(x: &[f64]) -> f64 {
    let (a, b) = (x[0].abs(), x[1].abs());
    if a == 0.0 && b == 0.0 {
        return 0.0;
    }
    // Ball contains the diamond and sits in the square.
    let inside = |t: f64| {
        let (xi, zeta) = (a / t, b / t);
        xi <= 1.0 && zeta <= height(xi)
    };
    let (mut lo, mut hi) = (a.max(b), a + b);
    for _ in 0..BISECT_MAX_ITER {
        if hi - lo <= BISECT_REL_TOL * hi * 1e-3 {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if inside(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Distance (relative) below which `x₂` counts as zero, making `x` nonsmooth.
pub const SEAM_TOL: f64 = 1e-9;

pub fn subdifferential(x: &[f64]) -> SubdiffKind {
    let n = norm(x);
    let (a, b) = (x[0].abs(), x[1].abs());
    let s1 = x[0].signum();
    let s2 = x[1].signum();
    if b <= SEAM_TOL * n {
        return SubdiffKind::NumericSegment { endpoints: [vec![s1, -1.0 / E], vec![s1, 1.0 / E]] };
    }
    if a * E <= b {
        return SubdiffKind::NumericSingleton { gradient: vec![0.0, s2] };
    }
    let r = b / (E * a);
    let ex = r.exp();
    SubdiffKind::NumericSingleton { gradient: vec![s1 * ex * (1.0 - r), s2 * ex / E] }
}

/// One-sided derivative of the norm at `(r, s)` with `r, s ≥ 0` in direction `(dr, ds)`.
pub fn dplus_abs(r: f64, s: f64, dr: f64, ds: f64) -> f64 {
    let (m, _) = subdifferential(&[r, s]).support_max(&[dr, ds]);
    m
}

/// Point `(ξ, η(ξ))` of the curve.
pub fn curve_point(xi: f64) -> [f64; 2] {
    [xi, eta(xi)]
}

/// Partner `(α(ξ), α(ξ)η′(ξ))` of the curve point at `ξ`.
pub fn mutual_partner(xi: f64) -> [f64; 2] {
    let a = alpha(xi);
    [a, a * eta_prime(xi)]
}

//! Hinge loss and the Huber-smoothed surrogate minimized inside the ADMM loss block.
//!
//! With margin `z = y·f(x)` and smoothing width `μ`:
//!
//! ```text
//! h(z)   = max(0, 1 − z)
//! h_μ(z) = 0                   z ≥ 1
//!          (1 − z)² / (2μ)     1 − μ < z < 1
//!          1 − z − μ/2         z ≤ 1 − μ
//! ```
//!
//! `h_μ` is C¹ with a `1/μ`-Lipschitz derivative and `0 ≤ h − h_μ ≤ μ/2`.

/// Smoothing width used by the solver.
pub const SMOOTHING: f64 = 1e-3;

#[inline]
pub fn hinge(z: f64) -> f64 {
    (1.0 - z).max(0.0)
}

#[inline]
pub fn smoothed_hinge(z: f64, mu: f64) -> f64 {
    let gap = 1.0 - z;
    if gap <= 0.0 {
        0.0
    } else if gap < mu {
        gap * gap / (2.0 * mu)
    } else {
        gap - 0.5 * mu
    }
}

/// Derivative of [`smoothed_hinge`] with respect to the margin.
#[inline]
pub fn smoothed_hinge_grad(z: f64, mu: f64) -> f64 {
    let gap = 1.0 - z;
    if gap <= 0.0 {
        0.0
    } else if gap < mu {
        -gap / mu
    } else {
        -1.0
    }
}

/// Second derivative; nonzero only inside the quadratic band.
#[inline]
pub fn smoothed_hinge_curvature(z: f64, mu: f64) -> f64 {
    let gap = 1.0 - z;
    if gap > 0.0 && gap < mu {
        1.0 / mu
    } else {
        0.0
    }
}

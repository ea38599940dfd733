use serde::Serialize;

use crate::error::{Error, Result};

/// Numeric tolerances. Exact (polyhedral) computations ignore all of them.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    /// Slack on the endpoints of `[D₋, D₊]` when deciding orthogonality.
    pub ortho_margin: f64,
    /// Functional identities such as `f(x) = ‖x‖`.
    pub functional: f64,
    pub fd_coarse_step: f64,
    pub fd_fine_step: f64,
    /// Finite-difference disagreement that gets flagged.
    pub fd_disagreement: f64,
    /// Principal-angle bound for equal float kernels.
    pub kernel_angle: f64,
    /// Angle under which sampled projective points merge.
    pub merge_angle: f64,
    /// Argument comparison in the complex criterion.
    pub complex_arg: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            ortho_margin: 1e-8,
            functional: 1e-9,
            fd_coarse_step: 1e-6,
            fd_fine_step: 1e-8,
            fd_disagreement: 1e-4,
            kernel_angle: 1e-8,
            merge_angle: 1e-7,
            complex_arg: 1e-9,
        }
    }
}

impl Tolerances {
    /// Applies a `KEY=VALUE` override.
    pub fn set(&mut self, assignment: &str) -> Result<()> {
        let (k, v) = assignment
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("tolerance override {assignment:?} is not KEY=VALUE")))?;
        let v: f64 = v.trim().parse().map_err(|_| Error::Parse(format!("invalid tolerance value in {assignment:?}")))?;
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::Parse(format!("tolerance must be positive and finite, got {v}")));
        }
        let slot = match k.trim() {
            "ortho_margin" => &mut self.ortho_margin,
            "functional" => &mut self.functional,
            "fd_coarse_step" => &mut self.fd_coarse_step,
            "fd_fine_step" => &mut self.fd_fine_step,
            "fd_disagreement" => &mut self.fd_disagreement,
            "kernel_angle" => &mut self.kernel_angle,
            "merge_angle" => &mut self.merge_angle,
            "complex_arg" => &mut self.complex_arg,
            other => return Err(Error::Parse(format!("unknown tolerance key {other:?}"))),
        };
        *slot = v;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides() {
        let mut t = Tolerances::default();
        t.set("ortho_margin=1e-6").unwrap();
        assert_eq!(t.ortho_margin, 1e-6);
        assert!(t.set("nope=1").is_err());
        assert!(t.set("functional=-1").is_err());
        assert!(t.set("functional").is_err());
    }
}

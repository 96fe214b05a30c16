use crate::linalg::{sherman_morrison_update, spd_inverse, LinalgError, Matrix};
use crate::math::sqrt;

/// Gram matrix `A` with a Sherman–Morrison maintained inverse. The inverse
/// is recomputed from `A` every `tau` updates to shed rounding drift.
#[derive(Debug, Clone, PartialEq)]
pub struct GramState {
    a: Matrix,
    a_inv: Matrix,
    updates_since_reinvert: usize,
    tau: usize,
}

impl GramState {
    /// `A = λI`.
    pub fn new(dim: usize, lambda: f64, tau: usize) -> Self {
        Self {
            a: Matrix::scaled_identity(dim, lambda),
            a_inv: Matrix::scaled_identity(dim, 1.0 / lambda),
            updates_since_reinvert: 0,
            tau: tau.max(1),
        }
    }

    /// Starts from a given inverse, e.g. a stored prior.
    pub fn from_inverse(a_inv: Matrix, tau: usize) -> Result<Self, LinalgError> {
        let a = spd_inverse(&a_inv)?;
        Ok(Self {
            a,
            a_inv,
            updates_since_reinvert: 0,
            tau: tau.max(1),
        })
    }

    pub fn dim(&self) -> usize {
        self.a.rows()
    }

    pub fn a(&self) -> &Matrix {
        &self.a
    }

    pub fn a_inv(&self) -> &Matrix {
        &self.a_inv
    }

    pub fn updates_since_reinvert(&self) -> usize {
        self.updates_since_reinvert
    }

    /// `√(φᵀA⁻¹φ)`.
    pub fn width(&self, phi: &[f64]) -> f64 {
        sqrt(self.a_inv.quad_form(phi).max(0.0))
    }

    /// `β·√(φᵀA⁻¹φ)`.
    pub fn ucb_bonus(&self, phi: &[f64], beta: f64) -> f64 {
        beta * self.width(phi)
    }

    pub fn posterior_update(&mut self, phi: &[f64]) {
        self.a.add_outer(phi, 1.0);
        sherman_morrison_update(&mut self.a_inv, phi);
        self.updates_since_reinvert += 1;
        if self.updates_since_reinvert >= self.tau {
            self.a_inv = spd_inverse(&self.a).expect("A stays positive definite");
            self.updates_since_reinvert = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bonus_examples() {
        let g = GramState::new(3, 1.0, 100);
        let u = [0.6, 0.8, 0.0];
        assert!((g.ucb_bonus(&u, 0.06) - 0.06).abs() < 1e-15);
        let g2 = GramState::new(3, 2.0, 100);
        assert!((g2.ucb_bonus(&u, 0.06) - 0.042_426_406_871).abs() < 1e-12);
        assert_eq!(g.ucb_bonus(&[0.0; 3], 0.06), 0.0);
    }

    #[test]
    fn first_update_closed_form() {
        let mut g = GramState::new(2, 1.0, 100);
        g.posterior_update(&[1.0, 0.0]);
        let inv = g.a_inv();
        assert!((inv.get(0, 0) - 0.5).abs() < 1e-15 && (inv.get(1, 1) - 1.0).abs() < 1e-15);
        assert!(inv.get(0, 1).abs() < 1e-15);
    }

    #[test]
    fn counter_resets_at_tau() {
        let mut g = GramState::new(2, 1.0, 3);
        for i in 0..7 {
            g.posterior_update(&[1.0, i as f64 * 0.1]);
        }
        assert_eq!(g.updates_since_reinvert(), 1);
    }

    #[test]
    fn uncertainty_shrinks_along_update() {
        let mut g = GramState::new(3, 1.0, 100);
        let phi = [0.3, -0.2, 0.5];
        let before = g.width(&phi);
        g.posterior_update(&phi);
        assert!(g.width(&phi) < before);
    }
}

//! Diagonal test problem with closed-form fountain data.
//!
//! `φ(u) = ½‖Qu‖² − ½‖Pu‖² − (1/p) Σ_j w_j |u_j|^p` with `w = 1` on `Y` and
//! `w(e_j) = 1/(1 + j)` on `Z`. Along `Z_k` the weighted `ℓ^p` norm peaks on
//! `e_k`, so `β_k = (1 + k)^{−1/p}`, `r_k = (1 + k)^{1/(p−2)}` and
//! `b_k = (½ − 1/p)(1 + k)^{2/(p−2)}`, which is also the energy of the
//! critical points `±r_k e_k`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fountain::FountainProblem;
use crate::functional::{Functional, Nonlinearity};
use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::spaces::{GalerkinSpace, SpaceError, Vector};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SyntheticError {
    #[error("p must exceed 2, got {0}")]
    Exponent(f64),
    #[error(transparent)]
    Space(#[from] SpaceError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SyntheticConfig {
    pub dim_y: usize,
    pub dim_z: usize,
    pub p: f64,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        Self {
            dim_y: 4,
            dim_z: 8,
            p: 4.0,
        }
    }
}

/// `(1/p) Σ w_j |u_j|^p`
#[derive(Debug, Clone)]
pub struct WeightedPower<S> {
    weights: Vec<S>,
    p: S,
}

impl<S: Scalar> WeightedPower<S> {
    /// `Σ w_j |u_j|^p`
    pub fn lp_pow(&self, u: &[S]) -> S {
        u.iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * x.abs().powf(self.p))
            .sum()
    }

    pub fn lp_pow_gradient(&self, u: &[S]) -> Vec<S> {
        let e = self.p - S::lit(2.0);
        u.iter()
            .zip(&self.weights)
            .map(|(&x, &w)| self.p * w * x.abs().powf(e) * x)
            .collect()
    }
}

impl<S: Scalar> Nonlinearity<S> for WeightedPower<S> {
    fn value(&self, u: &[S]) -> S {
        self.lp_pow(u) / self.p
    }

    fn gradient(&self, u: &[S]) -> Vec<S> {
        let e = self.p - S::lit(2.0);
        u.iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * x.abs().powf(e) * x)
            .collect()
    }

    fn hessian(&self, u: &[S]) -> Option<Matrix<S>> {
        let n = u.len();
        let e = self.p - S::lit(2.0);
        let mut h = Matrix::zeros(n, n);
        for i in 0..n {
            h[(i, i)] = (self.p - S::one()) * self.weights[i] * u[i].abs().powf(e);
        }
        Some(h)
    }
}

#[derive(Debug, Clone)]
pub struct SyntheticProblem<S> {
    config: SyntheticConfig,
    space: GalerkinSpace,
    psi: WeightedPower<S>,
}

impl<S: Scalar> SyntheticProblem<S> {
    pub fn new(config: SyntheticConfig) -> Result<Self, SyntheticError> {
        if !(config.p > 2.0 && config.p.is_finite()) {
            return Err(SyntheticError::Exponent(config.p));
        }
        let space = GalerkinSpace::new(config.dim_y, config.dim_z)?;
        let weights = (0..config.dim_y)
            .map(|_| S::one())
            .chain((0..config.dim_z).map(|j| S::one() / S::lit_usize(j + 1)))
            .collect();
        Ok(Self {
            psi: WeightedPower {
                weights,
                p: S::lit(config.p),
            },
            config,
            space,
        })
    }

    pub fn config(&self) -> &SyntheticConfig {
        &self.config
    }

    /// `β_k = (1 + k)^{−1/p}`
    pub fn exact_beta(&self, k: usize) -> f64 {
        ((1 + k) as f64).powf(-1.0 / self.config.p)
    }

    /// `(½ − 1/p)(1 + k)^{2/(p−2)}`, both `b_k` and the energy of `±r_k e_k`.
    pub fn exact_level(&self, k: usize) -> f64 {
        let p = self.config.p;
        (0.5 - 1.0 / p) * ((1 + k) as f64).powf(2.0 / (p - 2.0))
    }

    /// The critical point `r_j e_j`.
    pub fn exact_critical_point(&self, j: usize) -> Vector<S> {
        let r = ((1 + j) as f64).powf(1.0 / (self.config.p - 2.0));
        self.space.e::<S>(j).scaled(S::lit(r))
    }
}

impl<S: Scalar> Functional<S> for SyntheticProblem<S> {
    fn space(&self) -> GalerkinSpace {
        self.space
    }

    fn value(&self, u: &Vector<S>) -> S {
        let dy = self.space.dim_y();
        let p: S = u[..dy].iter().map(|&x| x * x).sum();
        let q: S = u[dy..].iter().map(|&x| x * x).sum();
        (q - p) * S::lit(0.5) - self.psi.value(u)
    }

    fn gradient(&self, u: &Vector<S>) -> Vector<S> {
        let dy = self.space.dim_y();
        let g = self.psi.gradient(u);
        Vector::from_vec(
            u.iter()
                .zip(g)
                .enumerate()
                .map(|(i, (&x, gi))| if i < dy { -x - gi } else { x - gi })
                .collect(),
        )
    }

    fn is_even(&self) -> bool {
        true
    }

    fn hessian(&self, u: &Vector<S>) -> Matrix<S> {
        let dy = self.space.dim_y();
        let mut h = self.psi.hessian(u).expect("diagonal Hessian");
        for i in 0..u.len() {
            let d = if i < dy { -S::one() } else { S::one() };
            h[(i, i)] = d - h[(i, i)];
        }
        h
    }
}

impl<S: Scalar> FountainProblem<S> for SyntheticProblem<S> {
    fn exponent(&self) -> S {
        S::lit(self.config.p)
    }

    fn growth_constant(&self) -> S {
        S::lit(1.0 / self.config.p)
    }

    fn lower_bound_coefficients(&self) -> (S, S) {
        (S::lit(0.5 - 1.0 / self.config.p), S::zero())
    }

    fn lp_norm_pow(&self, u: &[S]) -> S {
        self.psi.lp_pow(u)
    }

    fn lp_norm_pow_gradient(&self, u: &[S]) -> Vec<S> {
        self.psi.lp_pow_gradient(u)
    }

    fn euler_lagrange_residual(&self, u: &Vector<S>) -> S {
        self.gradient(u).norm()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn exact_points_are_critical() {
        let pb = SyntheticProblem::<f64>::new(SyntheticConfig::default()).unwrap();
        for j in 0..8 {
            let u = pb.exact_critical_point(j);
            assert!(pb.gradient(&u).norm() < 1e-12);
            assert_relative_eq!(pb.value(&u), pb.exact_level(j), epsilon = 1e-12);
        }
    }

    #[test]
    fn hessian_is_diagonal_and_signed() {
        let pb = SyntheticProblem::<f64>::new(SyntheticConfig::default()).unwrap();
        let u = Vector::zeros(12);
        let h = pb.hessian(&u);
        assert_eq!(h[(0, 0)], -1.0);
        assert_eq!(h[(5, 5)], 1.0);
        assert_eq!(h[(0, 5)], 0.0);
    }

    #[test]
    fn rejects_low_exponent() {
        let r = SyntheticProblem::<f64>::new(SyntheticConfig {
            p: 2.0,
            ..Default::default()
        });
        assert!(matches!(r, Err(SyntheticError::Exponent(_))));
    }
}

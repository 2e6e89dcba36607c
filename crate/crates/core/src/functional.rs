//! Strongly indefinite functionals `φ(u) = ½‖Qu‖² − ½‖Pu‖² − ψ(u)`.

use std::sync::Arc;

use thiserror::Error;

use crate::linalg::Matrix;
use crate::sampling;
use crate::scalar::{fmax, Scalar};
use crate::spaces::{GalerkinSpace, Vector};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FunctionalError {
    #[error("declared even functional fails evenness check (discrepancy {discrepancy:e})")]
    NotEven { discrepancy: f64 },
    #[error("finite-difference step {step:e} outside [1e-8, 1e-4]")]
    InvalidStep { step: f64 },
}

/// Evaluation contract consumed by the deformation and fountain machinery.
pub trait Functional<S: Scalar>: Send + Sync {
    fn space(&self) -> GalerkinSpace;

    fn value(&self, u: &Vector<S>) -> S;

    fn gradient(&self, u: &Vector<S>) -> Vector<S>;

    /// Whether `φ(−u) = φ(u)` holds.
    fn is_even(&self) -> bool;

    fn value_and_gradient(&self, u: &Vector<S>) -> (S, Vector<S>) {
        (self.value(u), self.gradient(u))
    }

    /// Hessian; central differences of the gradient unless overridden.
    fn hessian(&self, u: &Vector<S>) -> Matrix<S> {
        let n = u.len();
        let mut h = Matrix::zeros(n, n);
        let scale = fmax(S::one(), u.max_abs());
        let step = S::lit(1e-5) * scale;
        let mut x = u.clone();
        for j in 0..n {
            let orig = x[j];
            x[j] = orig + step;
            let gp = self.gradient(&x);
            x[j] = orig - step;
            let gm = self.gradient(&x);
            x[j] = orig;
            for i in 0..n {
                h[(i, j)] = (gp[i] - gm[i]) / (step + step);
            }
        }
        for i in 0..n {
            for j in 0..i {
                let m = (h[(i, j)] + h[(j, i)]) * S::lit(0.5);
                h[(i, j)] = m;
                h[(j, i)] = m;
            }
        }
        h
    }
}

impl<S: Scalar, F: Functional<S> + ?Sized> Functional<S> for &F {
    fn space(&self) -> GalerkinSpace {
        (**self).space()
    }
    fn value(&self, u: &Vector<S>) -> S {
        (**self).value(u)
    }
    fn gradient(&self, u: &Vector<S>) -> Vector<S> {
        (**self).gradient(u)
    }
    fn is_even(&self) -> bool {
        (**self).is_even()
    }
    fn value_and_gradient(&self, u: &Vector<S>) -> (S, Vector<S>) {
        (**self).value_and_gradient(u)
    }
    fn hessian(&self, u: &Vector<S>) -> Matrix<S> {
        (**self).hessian(u)
    }
}

/// The non-quadratic part `ψ`.
pub trait Nonlinearity<S: Scalar>: Send + Sync {
    fn value(&self, u: &[S]) -> S;
    fn gradient(&self, u: &[S]) -> Vec<S>;
    /// Analytic Hessian if available.
    fn hessian(&self, _u: &[S]) -> Option<Matrix<S>> {
        None
    }
    fn value_and_gradient(&self, u: &[S]) -> (S, Vec<S>) {
        (self.value(u), self.gradient(u))
    }
}

/// `ψ ≡ 0`
#[derive(Debug, Clone, Copy, Default)]
pub struct ZeroPsi;

impl<S: Scalar> Nonlinearity<S> for ZeroPsi {
    fn value(&self, _u: &[S]) -> S {
        S::zero()
    }
    fn gradient(&self, u: &[S]) -> Vec<S> {
        vec![S::zero(); u.len()]
    }
    fn hessian(&self, u: &[S]) -> Option<Matrix<S>> {
        Some(Matrix::zeros(u.len(), u.len()))
    }
}

/// `ψ(u) = (a/4)‖u‖⁴`
#[derive(Debug, Clone, Copy)]
pub struct QuarticPsi<S> {
    pub coefficient: S,
}

impl<S: Scalar> Nonlinearity<S> for QuarticPsi<S> {
    fn value(&self, u: &[S]) -> S {
        let r2 = crate::spaces::dot(u, u);
        self.coefficient * r2 * r2 / S::lit(4.0)
    }
    fn gradient(&self, u: &[S]) -> Vec<S> {
        let r2 = crate::spaces::dot(u, u);
        u.iter().map(|&x| self.coefficient * r2 * x).collect()
    }
    fn hessian(&self, u: &[S]) -> Option<Matrix<S>> {
        let r2 = crate::spaces::dot(u, u);
        let two = S::lit(2.0);
        Some(Matrix::from_fn(u.len(), u.len(), |i, j| {
            let d = if i == j { r2 } else { S::zero() };
            self.coefficient * (d + two * u[i] * u[j])
        }))
    }
}

type EvalFn<S> = dyn Fn(&[S]) -> S + Send + Sync;
type GradFn<S> = dyn Fn(&[S]) -> Vec<S> + Send + Sync;

/// `ψ` given by a pair of closures.
#[derive(Clone)]
pub struct ClosurePsi<S> {
    eval: Arc<EvalFn<S>>,
    grad: Arc<GradFn<S>>,
}

impl<S: Scalar> ClosurePsi<S> {
    pub fn new(
        eval: impl Fn(&[S]) -> S + Send + Sync + 'static,
        grad: impl Fn(&[S]) -> Vec<S> + Send + Sync + 'static,
    ) -> Self {
        Self {
            eval: Arc::new(eval),
            grad: Arc::new(grad),
        }
    }
}

impl<S: Scalar> Nonlinearity<S> for ClosurePsi<S> {
    fn value(&self, u: &[S]) -> S {
        (self.eval)(u)
    }
    fn gradient(&self, u: &[S]) -> Vec<S> {
        (self.grad)(u)
    }
}

/// `φ(u) = ½‖Qu‖² − ½‖Pu‖² − ψ(u)` in orthonormal coordinates.
#[derive(Clone)]
pub struct IndefiniteFunctional<S> {
    space: GalerkinSpace,
    psi: Arc<dyn Nonlinearity<S>>,
    even: bool,
}

impl<S: Scalar> std::fmt::Debug for IndefiniteFunctional<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("IndefiniteFunctional")
            .field("space", &self.space)
            .field("even", &self.even)
            .finish_non_exhaustive()
    }
}

impl<S: Scalar> IndefiniteFunctional<S> {
    /// Builds the functional. A declared evenness is spot-checked on random
    /// samples rather than trusted.
    pub fn new(
        space: GalerkinSpace,
        psi: impl Nonlinearity<S> + 'static,
        even: bool,
    ) -> Result<Self, FunctionalError> {
        Self::from_arc(space, Arc::new(psi), even)
    }

    pub fn from_arc(
        space: GalerkinSpace,
        psi: Arc<dyn Nonlinearity<S>>,
        even: bool,
    ) -> Result<Self, FunctionalError> {
        let phi = Self { space, psi, even };
        if even {
            let d = evenness_defect(&phi, 16, 0x5eed);
            let tol = S::lit(1e-9).max(S::unit_roundoff() * S::lit(1e3));
            if d > tol {
                return Err(FunctionalError::NotEven {
                    discrepancy: d.to_f64_lossy(),
                });
            }
        }
        Ok(phi)
    }

    pub fn from_closures(
        space: GalerkinSpace,
        eval: impl Fn(&[S]) -> S + Send + Sync + 'static,
        grad: impl Fn(&[S]) -> Vec<S> + Send + Sync + 'static,
        even: bool,
    ) -> Result<Self, FunctionalError> {
        Self::new(space, ClosurePsi::new(eval, grad), even)
    }

    /// The purely quadratic functional (`ψ ≡ 0`).
    pub fn quadratic(space: GalerkinSpace) -> Self {
        Self {
            space,
            psi: Arc::new(ZeroPsi),
            even: true,
        }
    }

    pub fn psi(&self) -> &dyn Nonlinearity<S> {
        self.psi.as_ref()
    }

    /// `½‖Qu‖² − ½‖Pu‖²`
    pub fn quadratic_part(&self, u: &[S]) -> S {
        let dy = self.space.dim_y();
        let p: S = u[..dy].iter().map(|&x| x * x).sum();
        let q: S = u[dy..].iter().map(|&x| x * x).sum();
        (q - p) * S::lit(0.5)
    }
}

impl<S: Scalar> Functional<S> for IndefiniteFunctional<S> {
    fn space(&self) -> GalerkinSpace {
        self.space
    }

    fn value(&self, u: &Vector<S>) -> S {
        self.quadratic_part(u) - self.psi.value(u)
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

    fn value_and_gradient(&self, u: &Vector<S>) -> (S, Vector<S>) {
        let dy = self.space.dim_y();
        let (pv, g) = self.psi.value_and_gradient(u);
        let grad = u
            .iter()
            .zip(g)
            .enumerate()
            .map(|(i, (&x, gi))| if i < dy { -x - gi } else { x - gi })
            .collect();
        (self.quadratic_part(u) - pv, Vector::from_vec(grad))
    }

    fn is_even(&self) -> bool {
        self.even
    }

    fn hessian(&self, u: &Vector<S>) -> Matrix<S> {
        let n = u.len();
        let dy = self.space.dim_y();
        match self.psi.hessian(u) {
            Some(hp) => Matrix::from_fn(n, n, |i, j| {
                let d = if i != j {
                    S::zero()
                } else if i < dy {
                    -S::one()
                } else {
                    S::one()
                };
                d - hp[(i, j)]
            }),
            None => {
                // fall back to the generic finite-difference Hessian
                struct Fd<'a, S: Scalar>(&'a IndefiniteFunctional<S>);
                impl<S: Scalar> Functional<S> for Fd<'_, S> {
                    fn space(&self) -> GalerkinSpace {
                        self.0.space
                    }
                    fn value(&self, u: &Vector<S>) -> S {
                        self.0.value(u)
                    }
                    fn gradient(&self, u: &Vector<S>) -> Vector<S> {
                        self.0.gradient(u)
                    }
                    fn is_even(&self) -> bool {
                        self.0.even
                    }
                }
                Fd(self).hessian(u)
            }
        }
    }
}

/// Maximum relative error between the gradient and central differences of
/// the value over random samples drawn uniformly from the unit ball.
///
/// The relative error of a sample is `max_j |g_j − d_j| / max(1, max_j |g_j|)`
/// where `d_j` is the central difference along coordinate `j`. The step
/// actually taken is recomputed from the rounded perturbed coordinate.
pub fn grad_check<S: Scalar, F: Functional<S> + ?Sized>(
    phi: &F,
    samples: usize,
    step: f64,
    seed: u64,
) -> Result<S, FunctionalError> {
    if !(1e-8..=1e-4).contains(&step) {
        return Err(FunctionalError::InvalidStep { step });
    }
    let n = phi.space().dim();
    let mut rng = sampling::rng(seed);
    let h = S::lit(step);
    let mut worst = S::zero();
    for _ in 0..samples {
        let mut u = Vector::from_vec(sampling::ball_point::<S, _>(&mut rng, n, S::one()));
        let g = phi.gradient(&u);
        let mut err = S::zero();
        for j in 0..n {
            let orig = u[j];
            u[j] = orig + h;
            let hp = u[j] - orig;
            let fp = phi.value(&u);
            u[j] = orig - h;
            let hm = orig - u[j];
            let fm = phi.value(&u);
            u[j] = orig;
            let fd = (fp - fm) / (hp + hm);
            err = fmax(err, (fd - g[j]).abs());
        }
        worst = fmax(worst, err / fmax(S::one(), g.max_abs()));
    }
    Ok(worst)
}

/// Largest of `|φ(−u) − φ(u)|` and `‖∇φ(−u) + ∇φ(u)‖` over random samples,
/// each relative to `max(1, |φ(u)|)` resp. `max(1, ‖∇φ(u)‖)`.
pub fn evenness_defect<S: Scalar, F: Functional<S> + ?Sized>(
    phi: &F,
    samples: usize,
    seed: u64,
) -> S {
    let n = phi.space().dim();
    let mut rng = sampling::rng(seed);
    let mut worst = S::zero();
    for _ in 0..samples {
        let u = Vector::from_vec(sampling::gaussian_vec::<S, _>(&mut rng, n));
        let m = -&u;
        let (fu, gu) = phi.value_and_gradient(&u);
        let (fm, gm) = phi.value_and_gradient(&m);
        let dv = (fu - fm).abs() / fmax(S::one(), fu.abs());
        let dg = (&gu + &gm).norm() / fmax(S::one(), gu.norm());
        worst = fmax(worst, fmax(dv, dg));
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn space() -> GalerkinSpace {
        GalerkinSpace::new(2, 4).unwrap()
    }

    #[test]
    fn eval_examples() {
        let x = space();
        let q = IndefiniteFunctional::<f64>::quadratic(x);
        assert_eq!(q.value(&x.e(0)), 0.5);
        assert_eq!(q.value(&x.theta(0)), -0.5);
        let quartic = IndefiniteFunctional::new(x, QuarticPsi { coefficient: 1.0 }, true).unwrap();
        assert_eq!(quartic.value(&x.e(0)), 0.25);
    }

    #[test]
    fn grad_examples() {
        let x = space();
        let q = IndefiniteFunctional::<f64>::quadratic(x);
        let u = &x.theta(0) + &x.e(0);
        assert_eq!(q.gradient(&u), &x.e(0) - &x.theta(0));
        let quartic = IndefiniteFunctional::new(x, QuarticPsi { coefficient: 1.0 }, true).unwrap();
        assert_eq!(quartic.gradient(&x.e(0)), x.zero());
        assert_eq!(quartic.gradient(&x.zero()), x.zero());
    }

    #[test]
    fn grad_check_examples() {
        let x = space();
        let q = IndefiniteFunctional::<f64>::quadratic(x);
        assert!(grad_check(&q, 100, 1e-6, 1).unwrap() <= 1e-10);
        let quartic = IndefiniteFunctional::new(x, QuarticPsi { coefficient: 1.0 }, true).unwrap();
        assert!(grad_check(&quartic, 100, 1e-6, 2).unwrap() <= 1e-6);
        assert!(grad_check(&quartic, 1, 1e-3, 2).is_err());
    }

    #[test]
    fn false_evenness_rejected() {
        let x = space();
        let odd = IndefiniteFunctional::<f64>::from_closures(
            x,
            |u| u[0].powi(3),
            |u| {
                let mut g = vec![0.0; u.len()];
                g[0] = 3.0 * u[0] * u[0];
                g
            },
            true,
        );
        assert!(matches!(odd, Err(FunctionalError::NotEven { .. })));
    }

    #[test]
    fn analytic_and_fd_hessians_agree() {
        let x = space();
        let quartic = IndefiniteFunctional::new(x, QuarticPsi { coefficient: 0.7 }, true).unwrap();
        let u = Vector::from_f64(&[0.3, -0.2, 0.5, 0.1, -0.4, 0.9]);
        let h = quartic.hessian(&u);
        let closure = IndefiniteFunctional::from_closures(
            x,
            |u: &[f64]| 0.7 * crate::spaces::dot(u, u).powi(2) / 4.0,
            |u: &[f64]| {
                let r2 = crate::spaces::dot(u, u);
                u.iter().map(|&v| 0.7 * r2 * v).collect()
            },
            true,
        )
        .unwrap();
        let hf = closure.hessian(&u);
        for i in 0..6 {
            for j in 0..6 {
                assert_relative_eq!(h[(i, j)], hf[(i, j)], epsilon = 1e-7);
            }
        }
    }
}

//! First-order ascent on spheres and balls.
//!
//! Both methods use Barzilai–Borwein trial steps with Armijo backtracking.
//! To minimize, pass the negated objective.

use serde::Serialize;

use crate::scalar::{fmax, fmin, Scalar};
use crate::spaces::{dot, norm};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AscentOptions<S> {
    pub max_iter: usize,
    /// Stop when the stationarity measure drops below `grad_tol · max(1, ‖∇f‖)`.
    pub grad_tol: S,
}

impl<S: Scalar> Default for AscentOptions<S> {
    fn default() -> Self {
        Self {
            max_iter: 3000,
            grad_tol: S::lit(1e-10),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AscentResult<S> {
    pub point: Vec<S>,
    pub value: S,
    /// Riemannian (sphere) or projected (ball) gradient norm at the end.
    pub stationarity: S,
    pub iterations: usize,
    pub converged: bool,
}

fn scale_to<S: Scalar>(mut y: Vec<S>, radius: S) -> Vec<S> {
    let n = norm(&y);
    if n > S::zero() {
        for v in &mut y {
            *v = *v * radius / n;
        }
    }
    y
}

fn tangent<S: Scalar>(g: &[S], x: &[S], radius: S) -> Vec<S> {
    let c = dot(g, x) / (radius * radius);
    g.iter().zip(x).map(|(&gi, &xi)| gi - c * xi).collect()
}

/// Maximizes `f` over the sphere `‖x‖ = radius`; `f` returns value and
/// Euclidean gradient.
pub fn sphere_ascent<S, F>(mut f: F, x0: &[S], radius: S, opts: &AscentOptions<S>) -> AscentResult<S>
where
    S: Scalar,
    F: FnMut(&[S]) -> (S, Vec<S>),
{
    let mut x = scale_to(x0.to_vec(), radius);
    let (mut fx, g) = f(&x);
    let mut gt = tangent(&g, &x, radius);
    let mut gnorm_full = norm(&g);
    let mut t = {
        let n = norm(&gt);
        if n > S::zero() {
            S::lit(0.1) * radius / n
        } else {
            S::one()
        }
    };
    let mut it = 0;
    let mut converged = false;
    while it < opts.max_iter {
        let gtn = norm(&gt);
        if gtn <= opts.grad_tol * fmax(S::one(), gnorm_full) {
            converged = true;
            break;
        }
        it += 1;
        let mut accepted = None;
        let mut trial = t;
        for _ in 0..60 {
            let y: Vec<S> = x.iter().zip(&gt).map(|(&a, &b)| a + trial * b).collect();
            let xn = scale_to(y, radius);
            let (fn_, gn) = f(&xn);
            if fn_ >= fx + S::lit(1e-4) * trial * gtn * gtn {
                accepted = Some((xn, fn_, gn));
                break;
            }
            trial = trial * S::lit(0.5);
        }
        let Some((xn, fn_, gn)) = accepted else {
            break;
        };
        let gtn_new = tangent(&gn, &xn, radius);
        // Barzilai–Borwein step for the next iteration
        let s: Vec<S> = xn.iter().zip(&x).map(|(&a, &b)| a - b).collect();
        let yv: Vec<S> = gtn_new.iter().zip(&gt).map(|(&a, &b)| a - b).collect();
        let sy = dot(&s, &yv).abs();
        t = if sy > S::zero() {
            fmin(dot(&s, &s) / sy, S::lit(1e6) * radius / fmax(gtn, S::lit(1e-300)))
        } else {
            trial * S::lit(2.0)
        };
        let done = (fn_ - fx).abs() <= S::unit_roundoff() * fmax(S::one(), fx.abs())
            && trial < S::lit(1e-12);
        x = xn;
        fx = fn_;
        gnorm_full = norm(&gn);
        gt = gtn_new;
        if done {
            break;
        }
    }
    AscentResult {
        stationarity: norm(&gt),
        point: x,
        value: fx,
        iterations: it,
        converged,
    }
}

fn project_ball<S: Scalar>(y: Vec<S>, radius: S) -> Vec<S> {
    if norm(&y) > radius {
        scale_to(y, radius)
    } else {
        y
    }
}

fn projected_gradient<S: Scalar>(x: &[S], g: &[S], radius: S) -> S {
    let y: Vec<S> = x.iter().zip(g).map(|(&a, &b)| a + b).collect();
    let p = project_ball(y, radius);
    let d: Vec<S> = p.iter().zip(x).map(|(&a, &b)| a - b).collect();
    norm(&d)
}

/// Maximizes `f` over the ball `‖x‖ ≤ radius` by projected gradient ascent.
pub fn ball_ascent<S, F>(mut f: F, x0: &[S], radius: S, opts: &AscentOptions<S>) -> AscentResult<S>
where
    S: Scalar,
    F: FnMut(&[S]) -> (S, Vec<S>),
{
    let mut x = project_ball(x0.to_vec(), radius);
    let (mut fx, mut g) = f(&x);
    let mut t = {
        let n = norm(&g);
        if n > S::zero() {
            S::lit(0.1) * radius / n
        } else {
            S::one()
        }
    };
    let mut it = 0;
    let mut converged = false;
    while it < opts.max_iter {
        let pg = projected_gradient(&x, &g, radius);
        if pg <= opts.grad_tol * fmax(S::one(), norm(&g)) {
            converged = true;
            break;
        }
        it += 1;
        let mut accepted = None;
        let mut trial = t;
        for _ in 0..60 {
            let y: Vec<S> = x.iter().zip(&g).map(|(&a, &b)| a + trial * b).collect();
            let xn = project_ball(y, radius);
            let d: Vec<S> = xn.iter().zip(&x).map(|(&a, &b)| a - b).collect();
            let (fn_, gn) = f(&xn);
            if fn_ >= fx + S::lit(1e-4) * dot(&g, &d) {
                accepted = Some((xn, fn_, gn));
                break;
            }
            trial = trial * S::lit(0.5);
        }
        let Some((xn, fn_, gn)) = accepted else {
            break;
        };
        let s: Vec<S> = xn.iter().zip(&x).map(|(&a, &b)| a - b).collect();
        let yv: Vec<S> = gn.iter().zip(&g).map(|(&a, &b)| a - b).collect();
        let sy = dot(&s, &yv).abs();
        t = if sy > S::zero() {
            fmin(dot(&s, &s) / sy, S::lit(1e6) * radius / fmax(norm(&g), S::lit(1e-300)))
        } else {
            trial * S::lit(2.0)
        };
        let stalled = norm(&s) <= S::unit_roundoff() * fmax(S::one(), norm(&x));
        x = xn;
        fx = fn_;
        g = gn;
        if stalled {
            break;
        }
    }
    AscentResult {
        stationarity: projected_gradient(&x, &g, radius),
        point: x,
        value: fx,
        iterations: it,
        converged,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn sphere_max_of_quadratic_form_is_top_eigenvalue() {
        let diag = [1.0, 3.0, 2.0];
        let f = |x: &[f64]| {
            let v = x.iter().zip(&diag).map(|(a, d)| d * a * a).sum::<f64>();
            (v, x.iter().zip(&diag).map(|(a, d)| 2.0 * d * a).collect())
        };
        let r = sphere_ascent(f, &[1.0, 0.5, 1.0], 2.0, &AscentOptions::default());
        assert!(r.converged);
        assert_relative_eq!(r.value, 12.0, epsilon = 1e-9);
        assert_relative_eq!(r.point[1].abs(), 2.0, epsilon = 1e-5);
    }

    #[test]
    fn ball_ascent_interior_and_boundary() {
        // interior maximum of −‖x − c‖²
        let c = [0.3, -0.2];
        let f = |x: &[f64]| {
            let d: Vec<f64> = x.iter().zip(&c).map(|(a, b)| a - b).collect();
            (-(d[0] * d[0] + d[1] * d[1]), vec![-2.0 * d[0], -2.0 * d[1]])
        };
        let r = ball_ascent(f, &[0.0, 0.0], 1.0, &AscentOptions::default());
        assert_relative_eq!(r.point[0], 0.3, epsilon = 1e-8);
        // linear objective peaks on the boundary
        let g = |x: &[f64]| (x[0] + x[1], vec![1.0, 1.0]);
        let r = ball_ascent(g, &[0.1, -0.3], 2.0, &AscentOptions::default());
        assert_relative_eq!(r.value, 2.0 * 2f64.sqrt(), epsilon = 1e-9);
    }

    #[test]
    fn one_dimensional_sphere_is_two_points() {
        let f = |x: &[f64]| (x[0], vec![1.0]);
        let r = sphere_ascent(f, &[-0.5], 3.0, &AscentOptions::default());
        assert_eq!(r.point, vec![-3.0]);
        assert!(r.converged);
    }
}

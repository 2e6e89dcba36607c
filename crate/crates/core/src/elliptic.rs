//! Noncooperative Dirichlet system `Δu = H_u(x,u,v)`, `−Δv = H_v(x,u,v)` on
//! `(0, L)`.
//!
//! Both components are expanded in `e_j(x) = √(2/L) sin(jπx/L) / (jπ/L)`,
//! `j = 1..=n`, which is orthonormal for `‖u‖ = |u'|₂`. Coordinates are the
//! `u` coefficients (the `Y` block) followed by the `v` coefficients (`Z`),
//! so the functional reads `Φ(u,v) = ½‖v‖² − ½‖u‖² − ∫H(x,u,v)`.

use std::f64::consts::PI;
use std::num::NonZeroUsize;
use std::sync::Arc;

use gauss_quad::GaussLegendre;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fountain::{
    find_critical_sequence, CriticalSequence, FountainConfig, FountainError, FountainProblem,
};
use crate::functional::{Functional, FunctionalError, IndefiniteFunctional, Nonlinearity};
use crate::linalg::Matrix;
use crate::sampling;
use crate::scalar::Scalar;
use crate::spaces::{GalerkinSpace, SpaceError, Subspace, Vector};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EllipticError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("quadrature under-resolved: drift {drift:e} on node doubling exceeds {quad_tol:e}")]
    QuadratureUnderResolved { drift: f64, quad_tol: f64 },
    #[error("solution at k = {k} has residual {residual:e} above {limit:e}")]
    Residual { k: usize, residual: f64, limit: f64 },
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Functional(#[from] FunctionalError),
    #[error(transparent)]
    Fountain(#[from] FountainError),
}

/// Choice of `H(x, u, v)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HModel {
    /// `(|u|^p + |v|^p)/p`
    Decoupled,
    /// `(u² + v²)^{p/2}/p`
    Coupled,
    /// `H ≡ 0`, the bare quadratic form.
    Zero,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EllipticConfig {
    #[serde(rename = "L")]
    pub length: f64,
    pub n_modes: usize,
    pub p: f64,
    #[serde(rename = "H_model")]
    pub h_model: HModel,
    /// Gauss–Legendre node count. When unset, starts at `4·n_modes` and
    /// doubles until node doubling changes `∫H` by at most `quad_tol`.
    pub quad_nodes: Option<usize>,
    /// Largest relative change of `∫H` allowed when the node count doubles.
    pub quad_tol: f64,
}

impl Default for EllipticConfig {
    fn default() -> Self {
        Self {
            length: PI,
            n_modes: 12,
            p: 4.0,
            h_model: HModel::Decoupled,
            quad_nodes: None,
            quad_tol: 1e-10,
        }
    }
}

impl EllipticConfig {
    fn validate(&self) -> Result<(), EllipticError> {
        let bad = |m: &str| Err(EllipticError::InvalidConfig(m.into()));
        if !(self.length > 0.0 && self.length.is_finite()) {
            return bad("L must be positive");
        }
        if self.n_modes < 3 {
            return bad("n_modes must be at least 3");
        }
        if !(self.p > 2.0 && self.p.is_finite()) {
            return bad("p must exceed 2");
        }
        if !(self.quad_tol > 0.0) {
            return bad("quad_tol must be positive");
        }
        if self.quad_nodes == Some(0) {
            return bad("quad_nodes must be positive");
        }
        Ok(())
    }

}

/// Largest relative change of `ψ` between two rules on random states.
fn quadrature_drift<S: Scalar>(a: &SystemPsi<S>, b: &SystemPsi<S>, dim: usize, tag: usize) -> f64 {
    let mut rng = sampling::substream(0x9a55, tag as u64);
    let mut drift = 0.0f64;
    for _ in 0..8 {
        let w: Vec<S> = sampling::sphere_point(&mut rng, dim, S::lit(4.0));
        let x = a.value(&w).to_f64_lossy();
        let y = b.value(&w).to_f64_lossy();
        drift = drift.max((x - y).abs() / y.abs().max(1.0));
    }
    drift
}

/// `ψ(u, v) = ∫H(x, u, v)` by Gauss–Legendre quadrature.
#[derive(Debug, Clone)]
pub struct SystemPsi<S> {
    /// `e_j(x_q)`, one row per node.
    table: Matrix<S>,
    weights: Vec<S>,
    n: usize,
    p: S,
    model: HModel,
}

/// Pointwise `H`, its gradient and Hessian at `(u, v)`.
struct Local<S> {
    h: S,
    hu: S,
    hv: S,
    huu: S,
    huv: S,
    hvv: S,
}

impl<S: Scalar> SystemPsi<S> {
    fn build(cfg: &EllipticConfig, nodes: usize) -> Self {
        let n = cfg.n_modes;
        let len = cfg.length;
        let rule = GaussLegendre::new(NonZeroUsize::new(nodes).expect("positive node count"));
        let (xs, ws): (Vec<f64>, Vec<f64>) = rule
            .iter()
            .map(|&(t, w)| (0.5 * len * (t + 1.0), 0.5 * len * w))
            .unzip();
        let table = Matrix::from_fn(xs.len(), n, |q, j| S::lit(basis(len, j + 1, xs[q])));
        Self {
            table,
            weights: ws.into_iter().map(S::lit).collect(),
            n,
            p: S::lit(cfg.p),
            model: cfg.h_model,
        }
    }

    fn fields(&self, w: &[S]) -> (Vec<S>, Vec<S>) {
        (
            self.table.mul_vec(&w[..self.n]),
            self.table.mul_vec(&w[self.n..]),
        )
    }

    fn local(&self, u: S, v: S, hessian: bool) -> Local<S> {
        let p = self.p;
        let zero = S::zero();
        match self.model {
            HModel::Zero => Local {
                h: zero,
                hu: zero,
                hv: zero,
                huu: zero,
                huv: zero,
                hvv: zero,
            },
            HModel::Decoupled => {
                let au = u.abs().powf(p - S::lit(2.0));
                let av = v.abs().powf(p - S::lit(2.0));
                Local {
                    h: (au * u * u + av * v * v) / p,
                    hu: au * u,
                    hv: av * v,
                    huu: if hessian { (p - S::one()) * au } else { zero },
                    huv: zero,
                    hvv: if hessian { (p - S::one()) * av } else { zero },
                }
            }
            HModel::Coupled => {
                let s = u * u + v * v;
                if s == zero {
                    return Local {
                        h: zero,
                        hu: zero,
                        hv: zero,
                        huu: zero,
                        huv: zero,
                        hvv: zero,
                    };
                }
                let half = S::lit(0.5);
                let a = s.powf(p * half - S::one());
                let (huu, huv, hvv) = if hessian {
                    let b = (p - S::lit(2.0)) * a / s;
                    (a + b * u * u, b * u * v, a + b * v * v)
                } else {
                    (zero, zero, zero)
                };
                Local {
                    h: a * s / p,
                    hu: a * u,
                    hv: a * v,
                    huu,
                    huv,
                    hvv,
                }
            }
        }
    }

    /// `(∫H, ∫(u H_u + v H_v))`
    pub fn moments(&self, w: &[S]) -> (S, S) {
        let (us, vs) = self.fields(w);
        let mut h = S::zero();
        let mut euler = S::zero();
        for ((&u, &v), &wq) in us.iter().zip(&vs).zip(&self.weights) {
            let l = self.local(u, v, false);
            h += wq * l.h;
            euler += wq * (u * l.hu + v * l.hv);
        }
        (h, euler)
    }

    /// `|u|_p^p + |v|_p^p`
    pub fn lp_pow(&self, w: &[S]) -> S {
        let (us, vs) = self.fields(w);
        us.iter()
            .zip(&vs)
            .zip(&self.weights)
            .map(|((&u, &v), &wq)| wq * (u.abs().powf(self.p) + v.abs().powf(self.p)))
            .sum()
    }

    pub fn lp_pow_gradient(&self, w: &[S]) -> Vec<S> {
        let (us, vs) = self.fields(w);
        let pm2 = self.p - S::lit(2.0);
        let ru: Vec<S> = us
            .iter()
            .zip(&self.weights)
            .map(|(&u, &wq)| wq * self.p * u.abs().powf(pm2) * u)
            .collect();
        let rv: Vec<S> = vs
            .iter()
            .zip(&self.weights)
            .map(|(&v, &wq)| wq * self.p * v.abs().powf(pm2) * v)
            .collect();
        let mut g = self.table.tr_mul_vec(&ru);
        g.extend(self.table.tr_mul_vec(&rv));
        g
    }
}

impl<S: Scalar> Nonlinearity<S> for SystemPsi<S> {
    fn value(&self, w: &[S]) -> S {
        self.moments(w).0
    }

    fn gradient(&self, w: &[S]) -> Vec<S> {
        self.value_and_gradient(w).1
    }

    fn value_and_gradient(&self, w: &[S]) -> (S, Vec<S>) {
        let (us, vs) = self.fields(w);
        let mut val = S::zero();
        let mut ru = Vec::with_capacity(us.len());
        let mut rv = Vec::with_capacity(us.len());
        for ((&u, &v), &wq) in us.iter().zip(&vs).zip(&self.weights) {
            let l = self.local(u, v, false);
            val += wq * l.h;
            ru.push(wq * l.hu);
            rv.push(wq * l.hv);
        }
        let mut g = self.table.tr_mul_vec(&ru);
        g.extend(self.table.tr_mul_vec(&rv));
        (val, g)
    }

    fn hessian(&self, w: &[S]) -> Option<Matrix<S>> {
        let n = self.n;
        let (us, vs) = self.fields(w);
        let mut h = Matrix::zeros(2 * n, 2 * n);
        for (q, ((&u, &v), &wq)) in us.iter().zip(&vs).zip(&self.weights).enumerate() {
            let l = self.local(u, v, true);
            let row = self.table.row(q);
            for i in 0..n {
                let (a, b, c) = (wq * l.huu * row[i], wq * l.huv * row[i], wq * l.hvv * row[i]);
                for j in 0..n {
                    h[(i, j)] += a * row[j];
                    h[(i, n + j)] += b * row[j];
                    h[(n + i, j)] += b * row[j];
                    h[(n + i, n + j)] += c * row[j];
                }
            }
        }
        Some(h)
    }
}

/// `e_j(x)` for `j ≥ 1`.
fn basis(len: f64, j: usize, x: f64) -> f64 {
    let mu = j as f64 * PI / len;
    (2.0 / len).sqrt() * (mu * x).sin() / mu
}

/// The assembled system.
#[derive(Clone)]
pub struct DirichletProblem<S> {
    config: EllipticConfig,
    space: GalerkinSpace,
    functional: IndefiniteFunctional<S>,
    psi: Arc<SystemPsi<S>>,
    nodes: usize,
}

impl<S: Scalar> std::fmt::Debug for DirichletProblem<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DirichletProblem")
            .field("config", &self.config)
            .field("space", &self.space)
            .finish_non_exhaustive()
    }
}

/// Bounds `a₁(|u|^p + |v|^p) − a₂ ≤ H` and
/// `|u H_u|, |v H_v| ≤ κ(|u|^p + |v|^p)` for a model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelBounds {
    pub a1: f64,
    pub a2: f64,
    pub kappa: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RayResult {
    pub k: usize,
    /// `Φ(t w)` at the sampled `t`, for a unit `w ∈ Y_k`.
    pub values: Vec<f64>,
    /// `Φ` decreased along the tail of the ray and ended below `−ray_floor`.
    pub diverges_down: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoercivityReport {
    /// Fitted `a₁ = min (H + a₂)/(|u|^p + |v|^p)` over the samples.
    pub a1: f64,
    /// Fitted `a₂ = max(0, −min H)`.
    pub a2: f64,
    /// Whether `H ≥ a₁(|u|^p + |v|^p) − a₂` holds on all samples.
    pub bound_holds: bool,
    /// Whether the bound holds with equality on all samples.
    pub bound_tight: bool,
    pub samples: usize,
    pub rays: Vec<RayResult>,
    /// `a₁ > 0` and every ray diverges to `−∞`.
    pub coercive: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PsBoundsReport {
    pub len: usize,
    /// `sup Φ` along the sequence.
    pub d: f64,
    /// `sup ‖Φ'‖` along the sequence.
    pub max_grad: f64,
    /// Gradients stayed below the gate, so the bounds are meaningful.
    pub hypothesis_ok: bool,
    pub c1: f64,
    pub c2: f64,
    pub d1: f64,
    pub d2: f64,
    /// `None` when the hypothesis gate failed.
    pub lp_bound_holds: Option<bool>,
    pub norm_bound_holds: Option<bool>,
    /// Largest `‖w_n‖` along the sequence.
    pub max_norm: f64,
    /// Root of `t² = D₁ t + D₂`, the implied bound on `‖w_n‖`.
    pub norm_bound: f64,
}

impl<S: Scalar> DirichletProblem<S> {
    /// Builds the space, the quadrature and the functional, and checks that
    /// doubling the node count leaves `∫H` unchanged to `quad_tol`.
    pub fn new(config: EllipticConfig) -> Result<Self, EllipticError> {
        config.validate()?;
        let n = config.n_modes;
        let space = GalerkinSpace::new(n, n)?;
        // an explicit node count is only checked; the default starts at
        // 4·n_modes and doubles until the check passes
        let mut nodes = config.quad_nodes.unwrap_or(4 * n);
        let psi = loop {
            let psi = SystemPsi::<S>::build(&config, nodes);
            if config.h_model == HModel::Zero {
                break psi;
            }
            let fine = SystemPsi::<S>::build(&config, 2 * nodes);
            let drift = quadrature_drift(&psi, &fine, space.dim(), n);
            if drift <= config.quad_tol {
                break psi;
            }
            if config.quad_nodes.is_some() || nodes >= 64 * n {
                return Err(EllipticError::QuadratureUnderResolved {
                    drift,
                    quad_tol: config.quad_tol,
                });
            }
            nodes *= 2;
        };
        let psi = Arc::new(psi);
        let functional = IndefiniteFunctional::from_arc(space, psi.clone(), true)?;
        Ok(Self {
            config,
            space,
            functional,
            psi,
            nodes,
        })
    }

    pub fn config(&self) -> &EllipticConfig {
        &self.config
    }

    pub fn functional(&self) -> &IndefiniteFunctional<S> {
        &self.functional
    }

    /// Gauss–Legendre nodes in use.
    pub fn quad_nodes(&self) -> usize {
        self.nodes
    }

    pub fn psi(&self) -> &SystemPsi<S> {
        &self.psi
    }

    /// Joins `u` and `v` coefficient arrays into one state.
    pub fn pair(&self, u: &[S], v: &[S]) -> Vector<S> {
        let n = self.config.n_modes;
        assert!(u.len() == n && v.len() == n, "component length must be {n}");
        Vector::from_vec(u.iter().chain(v).copied().collect())
    }

    /// `(u, v)` coefficient blocks of a state.
    pub fn split<'a>(&self, w: &'a [S]) -> (&'a [S], &'a [S]) {
        w.split_at(self.config.n_modes)
    }

    /// `(u(x), v(x))` at arbitrary points.
    pub fn sample(&self, w: &[S], xs: &[f64]) -> Vec<(f64, f64)> {
        let (u, v) = self.split(w);
        let len = self.config.length;
        xs.iter()
            .map(|&x| {
                let mut a = 0.0;
                let mut b = 0.0;
                for j in 0..u.len() {
                    let e = basis(len, j + 1, x);
                    a += u[j].to_f64_lossy() * e;
                    b += v[j].to_f64_lossy() * e;
                }
                (a, b)
            })
            .collect()
    }

    /// Re-expresses a state of `other`; coefficients are shared, so modes
    /// are padded with zeros or dropped.
    pub fn transfer(&self, other: &DirichletProblem<S>, w: &[S]) -> Vector<S> {
        let (u, v) = other.split(w);
        let n = self.config.n_modes;
        let pad = |c: &[S]| -> Vec<S> {
            (0..n).map(|j| c.get(j).copied().unwrap_or(S::zero())).collect()
        };
        self.pair(&pad(u), &pad(v))
    }

    /// Projected residuals `(|Δu − H_u|, |−Δv − H_v|)` against the
    /// `L²`-normalized sine basis.
    pub fn residuals(&self, w: &Vector<S>) -> (S, S) {
        let g = self.functional.gradient(w);
        let n = self.config.n_modes;
        let len = self.config.length;
        let part = |block: &[S]| -> S {
            block
                .iter()
                .enumerate()
                .map(|(j, &gj)| {
                    let r = gj * S::lit((j + 1) as f64 * PI / len);
                    r * r
                })
                .sum::<S>()
                .sqrt()
        };
        (part(&g[..n]), part(&g[n..]))
    }

    /// Constants of the model's lower and Euler bounds.
    pub fn model_bounds(&self) -> ModelBounds {
        let p = self.config.p;
        match self.config.h_model {
            HModel::Decoupled => ModelBounds {
                a1: 1.0 / p,
                a2: 0.0,
                kappa: 1.0,
            },
            HModel::Coupled => ModelBounds {
                a1: 1.0 / p,
                a2: 0.0,
                kappa: 2f64.powf(0.5 * p - 1.0),
            },
            HModel::Zero => ModelBounds {
                a1: 0.0,
                a2: 0.0,
                kappa: 0.0,
            },
        }
    }

    /// Fits `(a₁, a₂)` from pointwise samples of `H` and follows random rays
    /// in each `Y_k` of `ks` to see `Φ → −∞`.
    pub fn coercivity_check(&self, samples: usize, ks: &[usize], seed: u64) -> CoercivityReport {
        let p = self.config.p;
        let f64_psi = SystemPsi::<f64>::build(&self.config, 1);
        let mut rng = sampling::substream(seed, 0xc0e7);
        let mut pts: Vec<(f64, f64)> = Vec::with_capacity(samples.max(4));
        // axis points, where the coupled model meets the bound
        pts.push((1.0, 0.0));
        pts.push((0.0, -2.0));
        while pts.len() < samples.max(4) {
            let s = 3.0 * sampling::normal::<f64, _>(&mut rng).abs();
            pts.push((
                s * sampling::normal::<f64, _>(&mut rng),
                s * sampling::normal::<f64, _>(&mut rng),
            ));
        }
        let hs: Vec<(f64, f64)> = pts
            .iter()
            .map(|&(u, v)| (f64_psi.local(u, v, false).h, u.abs().powf(p) + v.abs().powf(p)))
            .collect();
        let a2 = hs.iter().fold(0.0f64, |m, &(h, _)| m.max(-h));
        let a1 = hs
            .iter()
            .filter(|&&(_, m)| m > 0.0)
            .fold(f64::INFINITY, |acc, &(h, m)| acc.min((h + a2) / m));
        let gap = |&(h, m): &(f64, f64)| h - (a1 * m - a2);
        let scale = |&(h, m): &(f64, f64)| h.abs().max(m).max(1.0);
        let bound_holds = hs.iter().all(|s| gap(s) >= -1e-12 * scale(s));
        let bound_tight = hs.iter().all(|s| gap(s).abs() <= 1e-12 * scale(s));

        let ts: Vec<f64> = (0..12).map(|i| 2f64.powi(i - 2)).collect();
        let ray_floor = 1e3;
        let mut rays = Vec::new();
        for &k in ks {
            let Ok(range) = self.space.range(Subspace::Yk(k)) else {
                continue;
            };
            for _ in 0..4 {
                let dir: Vec<S> = sampling::sphere_point(&mut rng, range.len(), S::one());
                let mut w = Vector::zeros(self.space.dim());
                w[range.clone()].copy_from_slice(&dir);
                let values: Vec<f64> = ts
                    .iter()
                    .map(|&t| self.functional.value(&w.scaled(S::lit(t))).to_f64_lossy())
                    .collect();
                let tail = &values[values.len() / 2..];
                let diverges_down = tail.windows(2).all(|x| x[1] < x[0])
                    && *tail.last().unwrap() < -ray_floor;
                rays.push(RayResult {
                    k,
                    values,
                    diverges_down,
                });
            }
        }
        CoercivityReport {
            coercive: a1 > 0.0 && rays.iter().all(|r| r.diverges_down),
            a1,
            a2,
            bound_holds,
            bound_tight,
            samples: hs.len(),
            rays,
        }
    }

    /// Evaluates the Palais–Smale bounds
    /// `|u_n|_p^p + |v_n|_p^p ≤ C₁‖w_n‖ + C₂` and `‖w_n‖² ≤ D₁‖w_n‖ + D₂`
    /// with constants derived from `sup Φ`, `sup ‖Φ'‖` and the model bounds.
    /// When some gradient exceeds `grad_gate` the constants are still
    /// reported but nothing is asserted.
    pub fn ps_boundedness_check(&self, seq: &[Vector<S>], grad_gate: f64) -> PsBoundsReport {
        let p = self.config.p;
        let mb = self.model_bounds();
        let omega = self.config.length;
        let mut d = f64::NEG_INFINITY;
        let mut g_max = 0.0f64;
        let mut rows = Vec::with_capacity(seq.len());
        for w in seq {
            let (phi, g) = self.functional.value_and_gradient(w);
            let phi = phi.to_f64_lossy();
            d = d.max(phi);
            g_max = g_max.max(g.norm().to_f64_lossy());
            rows.push((
                w.norm().to_f64_lossy(),
                self.psi.lp_pow(w).to_f64_lossy(),
            ));
        }
        let hypothesis_ok = !seq.is_empty() && g_max <= grad_gate && mb.a1 > 0.0;
        // Φ − ½⟨Φ', w⟩ ≥ (p/2 − 1)(a₁ S − a₂|Ω|) and ≤ d + ½ G ‖w‖
        let m = (0.5 * p - 1.0) * mb.a1;
        let c1 = 0.5 * g_max / m;
        let c2 = d.max(0.0) / m + mb.a2 * omega / mb.a1;
        // ‖w‖² ≤ G(‖u‖ + ‖v‖) + κ S + ... with ‖u‖ + ‖v‖ ≤ √2 ‖w‖
        let d1 = 2f64.sqrt() * g_max + mb.kappa * c1;
        let d2 = mb.kappa * c2 + mb.kappa * mb.a2 * omega;
        let tol = 1e-9;
        let (lp_ok, norm_ok) = if hypothesis_ok {
            let lp = rows
                .iter()
                .all(|&(nw, s)| s <= (c1 * nw + c2) * (1.0 + tol) + tol);
            let nb = rows
                .iter()
                .all(|&(nw, _)| nw * nw <= (d1 * nw + d2) * (1.0 + tol) + tol);
            (Some(lp), Some(nb))
        } else {
            (None, None)
        };
        let max_norm = rows.iter().fold(0.0f64, |a, r| a.max(r.0));
        PsBoundsReport {
            len: seq.len(),
            d,
            max_grad: g_max,
            hypothesis_ok,
            c1,
            c2,
            d1,
            d2,
            lp_bound_holds: lp_ok,
            norm_bound_holds: norm_ok,
            max_norm,
            norm_bound: 0.5 * (d1 + (d1 * d1 + 4.0 * d2).sqrt()),
        }
    }

    /// Critical points for the levels `ks`; every returned point must have
    /// both projected residuals within `10·crit_tol`.
    pub fn solve_system(
        &self,
        ks: &[usize],
        cfg: &FountainConfig,
    ) -> Result<CriticalSequence<S>, EllipticError> {
        let seq = find_critical_sequence(self, ks, cfg);
        let limit = 10.0 * cfg.crit_tol;
        for cp in &seq.points {
            let (ru, rv) = self.residuals(&cp.coords);
            let r = ru.max(rv).to_f64_lossy();
            if r > limit {
                return Err(EllipticError::Residual {
                    k: cp.level_k,
                    residual: r,
                    limit,
                });
            }
        }
        Ok(seq)
    }
}

impl<S: Scalar> Functional<S> for DirichletProblem<S> {
    fn space(&self) -> GalerkinSpace {
        self.space
    }
    fn value(&self, u: &Vector<S>) -> S {
        self.functional.value(u)
    }
    fn gradient(&self, u: &Vector<S>) -> Vector<S> {
        self.functional.gradient(u)
    }
    fn value_and_gradient(&self, u: &Vector<S>) -> (S, Vector<S>) {
        self.functional.value_and_gradient(u)
    }
    fn is_even(&self) -> bool {
        true
    }
    fn hessian(&self, u: &Vector<S>) -> Matrix<S> {
        self.functional.hessian(u)
    }
}

impl<S: Scalar> FountainProblem<S> for DirichletProblem<S> {
    fn exponent(&self) -> S {
        S::lit(self.config.p)
    }

    /// `|H| ≤ c(1 + |u|^p + |v|^p)` with `c = 1/p` for both models.
    fn growth_constant(&self) -> S {
        match self.config.h_model {
            HModel::Zero => S::zero(),
            _ => S::lit(1.0 / self.config.p),
        }
    }

    fn lower_bound_coefficients(&self) -> (S, S) {
        let p = self.config.p;
        let c = self.growth_constant().to_f64_lossy();
        (S::lit(0.5 - 1.0 / p), S::lit(c * self.config.length))
    }

    fn lp_norm_pow(&self, u: &[S]) -> S {
        self.psi.lp_pow(u)
    }

    fn lp_norm_pow_gradient(&self, u: &[S]) -> Vec<S> {
        self.psi.lp_pow_gradient(u)
    }

    fn euler_lagrange_residual(&self, u: &Vector<S>) -> S {
        let (ru, rv) = self.residuals(u);
        (ru * ru + rv * rv).sqrt()
    }
}

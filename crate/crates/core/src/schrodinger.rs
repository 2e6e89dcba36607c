//! Periodic semilinear Schrödinger model `−u'' + V(x)u = a(x)|u|^{p−2}u` on
//! one cell `[0, 2π)`.
//!
//! The operator `L = −d²/dx² + V` is assembled in the real Fourier basis
//! `1/√(2π), cos(jx)/√π, sin(jx)/√π` (`j ≤ M`), diagonalized, and split by
//! eigenvalue sign: negative eigenvectors span `Y`, positive ones `Z`. Basis
//! functions are rescaled by `1/√|λ|` so that the quadratic part of
//! `φ(u) = ½⟨Lu, u⟩ − ∫ a|u|^p/p` is `½‖Qu‖² − ½‖Pu‖²` in coordinates.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fountain::{find_critical_sequence, CriticalSequence, FountainConfig, FountainProblem};
use crate::functional::{Functional, FunctionalError, IndefiniteFunctional, Nonlinearity};
use crate::linalg::{symmetric_eigen, Matrix};
use crate::sampling;
use crate::scalar::Scalar;
use crate::spaces::{GalerkinSpace, SpaceError, Vector};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SchrodingerError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("eigenvalue {eigenvalue} lies in the gap (-{gap_tol}, {gap_tol})")]
    GapViolation { eigenvalue: f64, gap_tol: f64 },
    #[error("spectrum has {negative} negative and {positive} positive eigenvalues; need at least 1 and 3")]
    DegenerateSplitting { negative: usize, positive: usize },
    #[error("quadrature under-resolved: energy drift {drift:e} on grid doubling exceeds {alias_tol:e}")]
    Aliasing { drift: f64, alias_tol: f64 },
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Functional(#[from] FunctionalError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TrigKind {
    Const,
    Cosine,
}

/// `v0` (const) or `v0 + v1·cos(m x)` with `params = [v0, v1]` or
/// `[v0, v1, m]` (cosine).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrigProfile {
    pub kind: TrigKind,
    pub params: Vec<f64>,
}

impl TrigProfile {
    pub fn constant(v: f64) -> Self {
        Self {
            kind: TrigKind::Const,
            params: vec![v],
        }
    }

    pub fn cosine(v0: f64, v1: f64) -> Self {
        Self {
            kind: TrigKind::Cosine,
            params: vec![v0, v1],
        }
    }

    fn validate(&self, name: &str) -> Result<(), SchrodingerError> {
        let ok = match self.kind {
            TrigKind::Const => self.params.len() == 1,
            TrigKind::Cosine => {
                (self.params.len() == 2 || self.params.len() == 3)
                    && self
                        .params
                        .get(2)
                        .is_none_or(|&m| m >= 1.0 && m.fract() == 0.0)
            }
        };
        if !ok || self.params.iter().any(|v| !v.is_finite()) {
            return Err(SchrodingerError::InvalidConfig(format!(
                "{name}: const takes [v0], cosine takes [v0, v1] or [v0, v1, m] with integer m >= 1"
            )));
        }
        Ok(())
    }

    fn frequency(&self) -> usize {
        match self.kind {
            TrigKind::Const => 0,
            TrigKind::Cosine => self.params.get(2).map_or(1, |&m| m as usize),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self.kind {
            TrigKind::Const => self.params[0],
            TrigKind::Cosine => self.params[0] + self.params[1] * (self.frequency() as f64 * x).cos(),
        }
    }

    pub fn min(&self) -> f64 {
        match self.kind {
            TrigKind::Const => self.params[0],
            TrigKind::Cosine => self.params[0] - self.params[1].abs(),
        }
    }

    pub fn max(&self) -> f64 {
        match self.kind {
            TrigKind::Const => self.params[0],
            TrigKind::Cosine => self.params[0] + self.params[1].abs(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SchrodingerConfig {
    /// Space dimension; only 1 is supported.
    pub dim: usize,
    /// Fourier truncation `M`.
    pub modes: usize,
    pub potential: TrigProfile,
    pub p: f64,
    pub amplitude: TrigProfile,
    pub gap_tol: f64,
    pub alias_tol: f64,
    /// Quadrature grid size; defaults to `⌈2pM⌉`.
    pub quad_points: Option<usize>,
}

impl Default for SchrodingerConfig {
    fn default() -> Self {
        Self {
            dim: 1,
            modes: 16,
            potential: TrigProfile::constant(-1.5),
            p: 4.0,
            amplitude: TrigProfile::constant(1.0),
            gap_tol: 1e-3,
            alias_tol: 1e-8,
            quad_points: None,
        }
    }
}

/// Real Fourier basis function `a` at `x`.
fn fourier(a: usize, x: f64) -> f64 {
    if a == 0 {
        1.0 / (2.0 * PI).sqrt()
    } else {
        let j = a.div_ceil(2) as f64;
        if a % 2 == 1 {
            (j * x).cos() / PI.sqrt()
        } else {
            (j * x).sin() / PI.sqrt()
        }
    }
}

/// `ψ(u) = Σ_q w_q a_q |u(x_q)|^p / p` with `u(x_q) = (B u)_q`.
#[derive(Debug, Clone)]
pub struct PowerPsi<S> {
    table: Matrix<S>,
    weights: Vec<S>,
    plain_weights: Vec<S>,
    p: S,
    p_int: Option<i32>,
}

impl<S: Scalar> PowerPsi<S> {
    fn abs_pow(&self, x: S, e: i32) -> S {
        match self.p_int {
            Some(pi) => x.abs().powi(pi + e),
            None => x.abs().powf(self.p + S::lit(e as f64)),
        }
    }

    /// `|u|^{p−2} u`, the model nonlinearity without weight.
    fn nl(&self, x: S) -> S {
        self.abs_pow(x, -2) * x
    }

    fn values(&self, u: &[S]) -> Vec<S> {
        self.table.mul_vec(u)
    }

    /// `∫ |u|^p` (unweighted).
    pub fn lp_pow(&self, u: &[S]) -> S {
        self.values(u)
            .iter()
            .zip(&self.plain_weights)
            .map(|(&v, &w)| w * self.abs_pow(v, 0))
            .sum()
    }

    pub fn lp_pow_gradient(&self, u: &[S]) -> Vec<S> {
        let r: Vec<S> = self
            .values(u)
            .iter()
            .zip(&self.plain_weights)
            .map(|(&v, &w)| self.p * w * self.nl(v))
            .collect();
        self.table.tr_mul_vec(&r)
    }

    /// `(∫ u f(x,u), ∫ F(x,u))`
    pub fn moments(&self, u: &[S]) -> (S, S) {
        let mut uf = S::zero();
        let mut big_f = S::zero();
        for (&v, &w) in self.values(u).iter().zip(&self.weights) {
            let a = w * self.abs_pow(v, 0);
            uf += a;
            big_f += a / self.p;
        }
        (uf, big_f)
    }
}

impl<S: Scalar> Nonlinearity<S> for PowerPsi<S> {
    fn value(&self, u: &[S]) -> S {
        self.moments(u).1
    }

    fn gradient(&self, u: &[S]) -> Vec<S> {
        self.value_and_gradient(u).1
    }

    fn value_and_gradient(&self, u: &[S]) -> (S, Vec<S>) {
        let vals = self.values(u);
        let mut val = S::zero();
        let r: Vec<S> = vals
            .iter()
            .zip(&self.weights)
            .map(|(&v, &w)| {
                val += w * self.abs_pow(v, 0);
                w * self.nl(v)
            })
            .collect();
        (val / self.p, self.table.tr_mul_vec(&r))
    }

    fn hessian(&self, u: &[S]) -> Option<Matrix<S>> {
        let vals = self.values(u);
        let d: Vec<S> = vals
            .iter()
            .zip(&self.weights)
            .map(|(&v, &w)| w * (self.p - S::one()) * self.abs_pow(v, -2))
            .collect();
        let n = self.table.cols();
        let mut h = Matrix::zeros(n, n);
        for (q, &dq) in d.iter().enumerate() {
            if dq == S::zero() {
                continue;
            }
            let row = self.table.row(q);
            for i in 0..n {
                let a = dq * row[i];
                for j in 0..n {
                    h[(i, j)] += a * row[j];
                }
            }
        }
        Some(h)
    }
}

/// The assembled problem.
#[derive(Clone)]
pub struct SchrodingerProblem<S> {
    config: SchrodingerConfig,
    space: GalerkinSpace,
    functional: IndefiniteFunctional<S>,
    psi: Arc<PowerPsi<S>>,
    /// Eigenvalues in coordinate order (`Y` first, then `Z`).
    eigenvalues: Vec<f64>,
    /// Unit Fourier-coefficient eigenvectors in coordinate order.
    modes: Vec<Vec<f64>>,
    grid: Vec<f64>,
    a_max: f64,
}

impl<S: Scalar> std::fmt::Debug for SchrodingerProblem<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SchrodingerProblem")
            .field("config", &self.config)
            .field("space", &self.space)
            .field("eigenvalues", &self.eigenvalues)
            .field("a_max", &self.a_max)
            .finish_non_exhaustive()
    }
}

struct Assembly {
    eigenvalues: Vec<f64>,
    modes: Vec<Vec<f64>>,
    dim_y: usize,
}

fn assemble(cfg: &SchrodingerConfig, nq: usize) -> Result<Assembly, SchrodingerError> {
    let n = 2 * cfg.modes + 1;
    let w = 2.0 * PI / nq as f64;
    let grid: Vec<f64> = (0..nq).map(|q| w * q as f64).collect();
    let table: Vec<Vec<f64>> = grid
        .iter()
        .map(|&x| (0..n).map(|a| fourier(a, x)).collect())
        .collect();
    let mut l = Matrix::<f64>::zeros(n, n);
    for a in 1..n {
        let j = a.div_ceil(2) as f64;
        l[(a, a)] = j * j;
    }
    for (q, &x) in grid.iter().enumerate() {
        let v = w * cfg.potential.eval(x);
        for a in 0..n {
            for b in 0..n {
                l[(a, b)] += v * table[q][a] * table[q][b];
            }
        }
    }
    let (vals, vecs) = symmetric_eigen(&l);
    let scale = vals.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let cluster_tol = 1e-9 * scale;

    // canonical basis inside each degenerate cluster: Fourier vectors in
    // basis order (ascending |j|, cosine before sine) projected and
    // orthonormalized
    let mut modes: Vec<(f64, Vec<f64>)> = Vec::with_capacity(n);
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        while j < n && vals[j] - vals[j - 1] <= cluster_tol {
            j += 1;
        }
        let cols: Vec<Vec<f64>> = (i..j).map(|c| vecs.column(c)).collect();
        let mut basis: Vec<Vec<f64>> = Vec::new();
        for a in 0..n {
            if basis.len() == cols.len() {
                break;
            }
            let mut v = vec![0.0; n];
            for c in &cols {
                let coef = c[a];
                for (vi, &ci) in v.iter_mut().zip(c) {
                    *vi += coef * ci;
                }
            }
            for b in &basis {
                let d: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
                for (vi, &bi) in v.iter_mut().zip(b) {
                    *vi -= d * bi;
                }
            }
            let nv = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if nv > 1e-6 {
                basis.push(v.into_iter().map(|x| x / nv).collect());
            }
        }
        let lam = vals[i..j].iter().sum::<f64>() / (j - i) as f64;
        for mut v in basis {
            // sign: largest component positive (first one on ties)
            let mut best = 0;
            for a in 1..n {
                if v[a].abs() > v[best].abs() + 1e-12 {
                    best = a;
                }
            }
            if v[best] < 0.0 {
                v.iter_mut().for_each(|x| *x = -*x);
            }
            modes.push((lam, v));
        }
        i = j;
    }
    for (lam, _) in &modes {
        if lam.abs() < cfg.gap_tol {
            return Err(SchrodingerError::GapViolation {
                eigenvalue: *lam,
                gap_tol: cfg.gap_tol,
            });
        }
    }
    // Y: negative, by increasing |λ|; Z: positive, increasing. The sort is
    // stable so cluster order is kept.
    let mut neg: Vec<(f64, Vec<f64>)> = modes.iter().filter(|m| m.0 < 0.0).cloned().collect();
    let mut pos: Vec<(f64, Vec<f64>)> = modes.into_iter().filter(|m| m.0 > 0.0).collect();
    neg.sort_by(|a, b| a.0.abs().total_cmp(&b.0.abs()));
    pos.sort_by(|a, b| a.0.total_cmp(&b.0));
    if neg.is_empty() || pos.len() < 3 {
        return Err(SchrodingerError::DegenerateSplitting {
            negative: neg.len(),
            positive: pos.len(),
        });
    }
    let dim_y = neg.len();
    let (eigenvalues, modes) = neg.into_iter().chain(pos).unzip();
    Ok(Assembly {
        eigenvalues,
        modes,
        dim_y,
    })
}

fn power_psi<S: Scalar>(
    cfg: &SchrodingerConfig,
    eigenvalues: &[f64],
    modes: &[Vec<f64>],
    nq: usize,
) -> (PowerPsi<S>, Vec<f64>) {
    let n = modes.len();
    let w = 2.0 * PI / nq as f64;
    let grid: Vec<f64> = (0..nq).map(|q| w * q as f64).collect();
    let table = Matrix::from_fn(nq, n, |q, i| {
        let x = grid[q];
        let s: f64 = modes[i]
            .iter()
            .enumerate()
            .map(|(a, &c)| c * fourier(a, x))
            .sum();
        S::lit(s / eigenvalues[i].abs().sqrt())
    });
    let weights = grid
        .iter()
        .map(|&x| S::lit(w * cfg.amplitude.eval(x)))
        .collect();
    let plain_weights = vec![S::lit(w); nq];
    let p_int = (cfg.p.fract() == 0.0 && cfg.p < 64.0).then_some(cfg.p as i32);
    (
        PowerPsi {
            table,
            weights,
            plain_weights,
            p: S::lit(cfg.p),
            p_int,
        },
        grid,
    )
}

impl<S: Scalar> SchrodingerProblem<S> {
    /// Assembles and splits the operator, checks the spectral gap and the
    /// quadrature resolution, and builds the functional.
    pub fn new(config: SchrodingerConfig) -> Result<Self, SchrodingerError> {
        let cfg = &config;
        if cfg.dim != 1 {
            return Err(SchrodingerError::InvalidConfig(
                "only dim = 1 is supported".into(),
            ));
        }
        if cfg.modes < 2 {
            return Err(SchrodingerError::InvalidConfig("modes must be at least 2".into()));
        }
        if !(cfg.p > 2.0 && cfg.p.is_finite()) {
            return Err(SchrodingerError::InvalidConfig("p must exceed 2".into()));
        }
        if !(cfg.gap_tol > 0.0) || !(cfg.alias_tol > 0.0) {
            return Err(SchrodingerError::InvalidConfig(
                "gap_tol and alias_tol must be positive".into(),
            ));
        }
        cfg.potential.validate("potential")?;
        cfg.amplitude.validate("amplitude")?;
        if !(cfg.amplitude.min() > 0.0) {
            return Err(SchrodingerError::InvalidConfig(
                "amplitude must be positive on the cell".into(),
            ));
        }
        let m = cfg.modes;
        let exact_min = 2 * m + cfg.potential.frequency().max(cfg.amplitude.frequency()) + 1;
        let nq = cfg
            .quad_points
            .unwrap_or((2.0 * cfg.p * m as f64).ceil() as usize)
            .max(exact_min);
        let asm = assemble(cfg, nq)?;
        let space = GalerkinSpace::new(asm.dim_y, asm.modes.len() - asm.dim_y)?;
        let (psi, grid) = power_psi::<S>(cfg, &asm.eigenvalues, &asm.modes, nq);

        // aliasing: compare ψ against a doubled grid on random states
        let (fine, _) = power_psi::<S>(cfg, &asm.eigenvalues, &asm.modes, 2 * nq);
        let mut rng = sampling::substream(0xa11a5, m as u64);
        let mut drift = 0.0f64;
        for _ in 0..8 {
            let u: Vec<S> = sampling::sphere_point(&mut rng, space.dim(), S::lit(4.0));
            let a = psi.value(&u).to_f64_lossy();
            let b = fine.value(&u).to_f64_lossy();
            drift = drift.max((a - b).abs() / b.abs().max(1.0));
        }
        if drift > cfg.alias_tol {
            return Err(SchrodingerError::Aliasing {
                drift,
                alias_tol: cfg.alias_tol,
            });
        }

        let psi = Arc::new(psi);
        let functional = IndefiniteFunctional::from_arc(space, psi.clone(), true)?;
        Ok(Self {
            a_max: cfg.amplitude.max(),
            config,
            space,
            functional,
            psi,
            eigenvalues: asm.eigenvalues,
            modes: asm.modes,
            grid,
        })
    }

    pub fn config(&self) -> &SchrodingerConfig {
        &self.config
    }

    pub fn functional(&self) -> &IndefiniteFunctional<S> {
        &self.functional
    }

    /// Eigenvalues in coordinate order (`θ_0, …, e_0, …`).
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Unit Fourier-coefficient vector of coordinate `i`'s eigenfunction.
    pub fn mode(&self, i: usize) -> &[f64] {
        &self.modes[i]
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    /// `u(x_q)` on the quadrature grid.
    pub fn grid_values(&self, u: &[S]) -> Vec<S> {
        self.psi.values(u)
    }

    /// Fourier coefficients (orthonormal basis) of `u(x)`.
    pub fn to_fourier(&self, u: &[S]) -> Vec<f64> {
        let n = self.modes.len();
        let mut c = vec![0.0; n];
        for (i, &ui) in u.iter().enumerate() {
            let s = ui.to_f64_lossy() / self.eigenvalues[i].abs().sqrt();
            for (ca, &va) in c.iter_mut().zip(&self.modes[i]) {
                *ca += s * va;
            }
        }
        c
    }

    /// Coordinates of the function with Fourier coefficients `c`; modes
    /// beyond this truncation are dropped, missing ones taken as zero.
    pub fn from_fourier(&self, c: &[f64]) -> Vector<S> {
        Vector::from_vec(
            self.modes
                .iter()
                .zip(&self.eigenvalues)
                .map(|(v, &lam)| {
                    let d: f64 = v.iter().zip(c).map(|(a, b)| a * b).sum();
                    S::lit(d * lam.abs().sqrt())
                })
                .collect(),
        )
    }

    /// Re-expresses a state of `other` (possibly a different truncation).
    pub fn transfer(&self, other: &SchrodingerProblem<S>, u: &[S]) -> Vector<S> {
        self.from_fourier(&other.to_fourier(u))
    }

    /// `u(x)` at arbitrary points.
    pub fn sample(&self, u: &[S], xs: &[f64]) -> Vec<f64> {
        let c = self.to_fourier(u);
        xs.iter()
            .map(|&x| c.iter().enumerate().map(|(a, &ca)| ca * fourier(a, x)).sum())
            .collect()
    }

    /// `(φ(u), ½∫u f(x,u) − ∫F(x,u))`; equal at critical points.
    pub fn critical_value_identity(&self, u: &Vector<S>) -> (S, S) {
        let (uf, big_f) = self.psi.moments(u);
        (self.functional.value(u), S::lit(0.5) * uf - big_f)
    }

    /// Samples `(x, u)` and checks `|f| ≤ ε|u| + a_max|u|^{p−1}` and
    /// `p F(x,u) ≤ u f(x,u) + bound_tol`.
    pub fn growth_bound_check(&self, sample_count: usize, eps: f64, seed: u64) -> GrowthBoundReport {
        let p = self.config.p;
        let mut rng = sampling::rng(seed);
        let mut needed = 0.0f64;
        let mut f4_worst = f64::NEG_INFINITY;
        let bound_tol = 1e-12;
        for i in 0..sample_count.max(1) {
            let x = sampling::uniform::<f64, _>(&mut rng, 0.0, 2.0 * PI);
            let u = if i == 0 {
                0.0
            } else {
                4.0 * sampling::normal::<f64, _>(&mut rng)
            };
            let a = self.config.amplitude.eval(x);
            let f = a * u.abs().powf(p - 2.0) * u;
            let big_f = a * u.abs().powf(p) / p;
            if u != 0.0 {
                needed = needed.max((f.abs() - eps * u.abs()).max(0.0) / u.abs().powf(p - 1.0));
            }
            let scale = (u * f).abs().max(1.0);
            f4_worst = f4_worst.max((p * big_f - u * f) / scale);
        }
        GrowthBoundReport {
            eps,
            c_eps: self.a_max,
            c_eps_needed: needed,
            growth_holds: needed <= self.a_max * (1.0 + 1e-12),
            gamma_growth: p,
            superlinear_defect: f4_worst,
            superlinear_holds: f4_worst <= bound_tol,
            samples: sample_count.max(1),
        }
    }

    /// Critical points for the levels `ks`.
    pub fn solve_multiplicity(&self, ks: &[usize], cfg: &FountainConfig) -> CriticalSequence<S> {
        find_critical_sequence(self, ks, cfg)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthBoundReport {
    pub eps: f64,
    /// `c_ε = max a(x)` used by the bound.
    pub c_eps: f64,
    /// Smallest `c_ε` consistent with the samples.
    pub c_eps_needed: f64,
    pub growth_holds: bool,
    pub gamma_growth: f64,
    /// Largest `(γF − uf)/max(1, |uf|)`.
    pub superlinear_defect: f64,
    pub superlinear_holds: bool,
    pub samples: usize,
}

impl<S: Scalar> Functional<S> for SchrodingerProblem<S> {
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

impl<S: Scalar> FountainProblem<S> for SchrodingerProblem<S> {
    fn exponent(&self) -> S {
        S::lit(self.config.p)
    }

    /// `ψ(u) ≤ (a_max/p)|u|_p^p = (c/2)|u|_p^p`
    fn growth_constant(&self) -> S {
        S::lit(2.0 * self.a_max / self.config.p)
    }

    fn lower_bound_coefficients(&self) -> (S, S) {
        let p = self.config.p;
        (S::lit(0.5 * (0.5 - 1.0 / p)), S::zero())
    }

    fn lp_norm_pow(&self, u: &[S]) -> S {
        self.psi.lp_pow(u)
    }

    fn lp_norm_pow_gradient(&self, u: &[S]) -> Vec<S> {
        self.psi.lp_pow_gradient(u)
    }

    /// `‖((−Δ + V)u − f(x,u), f_a)‖` over the Fourier basis.
    fn euler_lagrange_residual(&self, u: &Vector<S>) -> S {
        let g = self.functional.gradient(u);
        g.iter()
            .zip(&self.eigenvalues)
            .map(|(&gi, &lam)| {
                let r = gi * S::lit(lam.abs().sqrt());
                r * r
            })
            .sum::<S>()
            .sqrt()
    }
}

/// Largest `|λ|` among retained eigenvalues, useful for scaling residuals.
pub fn spectral_radius<S: Scalar>(problem: &SchrodingerProblem<S>) -> S {
    S::lit(
        problem
            .eigenvalues
            .iter()
            .fold(0.0f64, |m, v| m.max(v.abs())),
    )
}

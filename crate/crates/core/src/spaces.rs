//! The split space `X = Y ⊕ Z` in orthonormal coordinates, its filtration and
//! the weak norms.
//!
//! Coordinates are ordered `(θ_0 .. θ_{dimY-1}, e_0 .. e_{dimZ-1})`. With this
//! ordering `Y_k` is a prefix of the coordinate array and `Z_k` a suffix.

use std::ops::{Add, Deref, DerefMut, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::{fmax, Scalar};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpaceError {
    #[error("invalid dimensions dim_y = {dim_y}, dim_z = {dim_z} (need dim_y >= 1, dim_z >= 3)")]
    InvalidDimensions { dim_y: usize, dim_z: usize },
    #[error("level k = {k} out of range 2..={max}")]
    LevelOutOfRange { k: usize, max: usize },
    #[error("vector has {got} coordinates, space has dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid linking radii r = {r}, rho = {rho} (need 0 < r < rho)")]
    InvalidRadii { r: f64, rho: f64 },
}

/// Coordinate vector of the Galerkin space.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vector<S>(Vec<S>);

impl<S: Scalar> Vector<S> {
    pub fn zeros(n: usize) -> Self {
        Self(vec![S::zero(); n])
    }

    pub fn from_vec(coords: Vec<S>) -> Self {
        Self(coords)
    }

    pub fn from_f64(coords: &[f64]) -> Self {
        Self(coords.iter().map(|&c| S::lit(c)).collect())
    }

    pub fn basis(n: usize, i: usize) -> Self {
        let mut v = Self::zeros(n);
        v.0[i] = S::one();
        v
    }

    pub fn into_vec(self) -> Vec<S> {
        self.0
    }

    pub fn as_slice(&self) -> &[S] {
        &self.0
    }

    pub fn dot(&self, other: &Self) -> S {
        dot(&self.0, &other.0)
    }

    pub fn norm_sq(&self) -> S {
        dot(&self.0, &self.0)
    }

    pub fn norm(&self) -> S {
        self.norm_sq().sqrt()
    }

    pub fn scaled(&self, a: S) -> Self {
        Self(self.0.iter().map(|&x| a * x).collect())
    }

    /// `self += a * x`
    pub fn axpy(&mut self, a: S, x: &Self) {
        for (s, &xi) in self.0.iter_mut().zip(&x.0) {
            *s += a * xi;
        }
    }

    pub fn distance(&self, other: &Self) -> S {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(&a, &b)| (a - b) * (a - b))
            .sum::<S>()
            .sqrt()
    }

    pub fn max_abs(&self) -> S {
        self.0.iter().fold(S::zero(), |m, &x| fmax(m, x.abs()))
    }

    pub fn to_f64_vec(&self) -> Vec<f64> {
        self.0.iter().map(|x| x.to_f64_lossy()).collect()
    }
}

pub(crate) fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

pub(crate) fn norm<S: Scalar>(a: &[S]) -> S {
    dot(a, a).sqrt()
}

impl<S> Deref for Vector<S> {
    type Target = [S];
    fn deref(&self) -> &[S] {
        &self.0
    }
}

impl<S> DerefMut for Vector<S> {
    fn deref_mut(&mut self) -> &mut [S] {
        &mut self.0
    }
}

impl<S: Scalar> Add for &Vector<S> {
    type Output = Vector<S>;
    fn add(self, rhs: &Vector<S>) -> Vector<S> {
        Vector(self.0.iter().zip(&rhs.0).map(|(&a, &b)| a + b).collect())
    }
}

impl<S: Scalar> Sub for &Vector<S> {
    type Output = Vector<S>;
    fn sub(self, rhs: &Vector<S>) -> Vector<S> {
        Vector(self.0.iter().zip(&rhs.0).map(|(&a, &b)| a - b).collect())
    }
}

impl<S: Scalar> Neg for &Vector<S> {
    type Output = Vector<S>;
    fn neg(self) -> Vector<S> {
        Vector(self.0.iter().map(|&a| -a).collect())
    }
}

impl<S: Scalar> Neg for Vector<S> {
    type Output = Vector<S>;
    fn neg(mut self) -> Vector<S> {
        for a in self.0.iter_mut() {
            *a = -*a;
        }
        self
    }
}

impl<S: Scalar> Mul<&Vector<S>> for f64 {
    type Output = Vector<S>;
    fn mul(self, rhs: &Vector<S>) -> Vector<S> {
        rhs.scaled(S::lit(self))
    }
}

/// Weighted coefficient sum `Σ 2^{-(j+1)} |c_j|` over an ordered basis.
pub fn sigma_norm<S: Scalar>(coeffs: impl IntoIterator<Item = S>) -> S {
    let two = S::lit(2.0);
    let mut w = S::lit(0.5);
    let mut acc = S::zero();
    for c in coeffs {
        acc += w * c.abs();
        w = w / two;
    }
    acc
}

/// Target of an orthogonal projection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Subspace {
    Y,
    Z,
    Yk(usize),
    Zk(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GalerkinSpace {
    dim_y: usize,
    dim_z: usize,
}

impl GalerkinSpace {
    pub fn new(dim_y: usize, dim_z: usize) -> Result<Self, SpaceError> {
        if dim_y < 1 || dim_z < 3 {
            return Err(SpaceError::InvalidDimensions { dim_y, dim_z });
        }
        Ok(Self { dim_y, dim_z })
    }

    pub fn dim_y(&self) -> usize {
        self.dim_y
    }

    pub fn dim_z(&self) -> usize {
        self.dim_z
    }

    pub fn dim(&self) -> usize {
        self.dim_y + self.dim_z
    }

    /// Largest admissible filtration level.
    pub fn max_level(&self) -> usize {
        self.dim_z - 1
    }

    pub fn zero<S: Scalar>(&self) -> Vector<S> {
        Vector::zeros(self.dim())
    }

    /// `θ_j`
    pub fn theta<S: Scalar>(&self, j: usize) -> Vector<S> {
        assert!(j < self.dim_y, "theta index {j} >= dim_y");
        Vector::basis(self.dim(), j)
    }

    /// `e_j`
    pub fn e<S: Scalar>(&self, j: usize) -> Vector<S> {
        assert!(j < self.dim_z, "e index {j} >= dim_z");
        Vector::basis(self.dim(), self.dim_y + j)
    }

    pub fn check_level(&self, k: usize) -> Result<(), SpaceError> {
        if k < 2 || k > self.max_level() {
            Err(SpaceError::LevelOutOfRange {
                k,
                max: self.max_level(),
            })
        } else {
            Ok(())
        }
    }

    pub fn check_vector<S>(&self, u: &[S]) -> Result<(), SpaceError> {
        if u.len() != self.dim() {
            Err(SpaceError::DimensionMismatch {
                expected: self.dim(),
                got: u.len(),
            })
        } else {
            Ok(())
        }
    }

    pub fn filtration(&self, k: usize) -> Result<Filtration, SpaceError> {
        self.check_level(k)?;
        Ok(Filtration { space: *self, k })
    }

    /// Half-open coordinate range of a subspace.
    pub fn range(&self, target: Subspace) -> Result<std::ops::Range<usize>, SpaceError> {
        Ok(match target {
            Subspace::Y => 0..self.dim_y,
            Subspace::Z => self.dim_y..self.dim(),
            Subspace::Yk(k) => self.filtration(k)?.y_range(),
            Subspace::Zk(k) => self.filtration(k)?.z_range(),
        })
    }

    pub fn project<S: Scalar>(
        &self,
        u: &Vector<S>,
        target: Subspace,
    ) -> Result<Vector<S>, SpaceError> {
        self.check_vector(u)?;
        let r = self.range(target)?;
        let mut out = Vector::zeros(self.dim());
        out[r.clone()].copy_from_slice(&u[r]);
        Ok(out)
    }

    /// `⦀u⦀ = max(Σ 2^{-(j+1)} |(Pu, θ_j)|, ‖Qu‖)`
    pub fn tau_norm<S: Scalar>(&self, u: &[S]) -> S {
        let p = sigma_norm(u[..self.dim_y].iter().copied());
        let q = norm(&u[self.dim_y..]);
        fmax(p, q)
    }

    /// Level-`k` variant using the reordered basis `e'_j`: `e_0..e_k`
    /// followed by `θ_0, θ_1, ..`.
    pub fn tau_norm_k<S: Scalar>(&self, u: &[S], k: usize) -> Result<S, SpaceError> {
        self.check_level(k)?;
        self.check_vector(u)?;
        let split = self.dim_y + k + 1;
        let head = u[self.dim_y..split]
            .iter()
            .chain(&u[..self.dim_y])
            .copied();
        Ok(fmax(sigma_norm(head), norm(&u[split..])))
    }

    /// τ-distance between two vectors.
    pub fn tau_distance<S: Scalar>(&self, u: &[S], v: &[S]) -> S {
        let two = S::lit(2.0);
        let mut w = S::lit(0.5);
        let mut p = S::zero();
        for j in 0..self.dim_y {
            p += w * (u[j] - v[j]).abs();
            w = w / two;
        }
        let mut q = S::zero();
        for j in self.dim_y..self.dim() {
            let d = u[j] - v[j];
            q += d * d;
        }
        fmax(p, q.sqrt())
    }
}

/// Level `k` of the filtration: `Y_k = Y ⊕ span(e_0..e_k)`, `Z_k = span(e_k..)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Filtration {
    space: GalerkinSpace,
    k: usize,
}

impl Filtration {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn space(&self) -> GalerkinSpace {
        self.space
    }

    pub fn y_range(&self) -> std::ops::Range<usize> {
        0..self.space.dim_y + self.k + 1
    }

    pub fn z_range(&self) -> std::ops::Range<usize> {
        self.space.dim_y + self.k..self.space.dim()
    }

    pub fn dim_y_k(&self) -> usize {
        self.space.dim_y + self.k + 1
    }

    pub fn dim_z_k(&self) -> usize {
        self.space.dim_z - self.k
    }

    /// Coordinate of `e_k`, the single direction shared by `Y_k` and `Z_k`.
    pub fn overlap_index(&self) -> usize {
        self.space.dim_y + self.k
    }

    /// Embeds `Y_k` coordinates into `X`.
    pub fn embed_y<S: Scalar>(&self, coords: &[S]) -> Vector<S> {
        assert_eq!(coords.len(), self.dim_y_k());
        let mut out = self.space.zero();
        out[..coords.len()].copy_from_slice(coords);
        out
    }

    /// Embeds `Z_k` coordinates into `X`.
    pub fn embed_z<S: Scalar>(&self, coords: &[S]) -> Vector<S> {
        assert_eq!(coords.len(), self.dim_z_k());
        let mut out = self.space.zero();
        out[self.z_range()].copy_from_slice(coords);
        out
    }

    pub fn in_y<S: Scalar>(&self, u: &[S], tol: S) -> bool {
        u[self.dim_y_k()..].iter().all(|x| x.abs() <= tol)
    }

    pub fn in_z<S: Scalar>(&self, u: &[S], tol: S) -> bool {
        u[..self.overlap_index()].iter().all(|x| x.abs() <= tol)
    }
}

/// `B_k` (ball of radius `rho` in `Y_k`) and `N_k` (sphere of radius `r` in `Z_k`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkingSets<S> {
    pub k: usize,
    pub rho: S,
    pub r: S,
}

impl<S: Scalar> LinkingSets<S> {
    pub fn new(space: &GalerkinSpace, k: usize, rho: S, r: S) -> Result<Self, SpaceError> {
        space.check_level(k)?;
        if !(r > S::zero() && r < rho) {
            return Err(SpaceError::InvalidRadii {
                r: r.to_f64_lossy(),
                rho: rho.to_f64_lossy(),
            });
        }
        Ok(Self { k, rho, r })
    }

    pub fn in_ball(&self, space: &GalerkinSpace, u: &[S], tol: S) -> bool {
        let f = Filtration {
            space: *space,
            k: self.k,
        };
        f.in_y(u, tol) && norm(u) <= self.rho + tol
    }

    pub fn in_sphere(&self, space: &GalerkinSpace, u: &[S], tol: S) -> bool {
        let f = Filtration {
            space: *space,
            k: self.k,
        };
        f.in_z(u, tol) && (norm(u) - self.r).abs() <= tol
    }
}

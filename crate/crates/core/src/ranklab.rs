//! Pointwise rank of a compactly supported closed 2-form on the 6-torus.
//!
//! With fiber coordinates `(x5, x6)` around `W = {x5 = x6 = 0}`, a bump
//! `r(x5, x6)` and `σ = cos(2πx3) dx1 + sin(2πx3) dx2`, the form
//! `ω = τ + d(rσ) = r dx5∧dx6 + dr∧σ + r dσ` is closed, supported in the
//! disk of radius `ρ`, and has rank 4 wherever `r ≠ 0`. This module evaluates
//! `ω` in 64-bit floating point, scans its numerical rank, and checks the
//! wedge identities `ω² = 2r(τ + dr∧σ)∧dσ`, `ω³ = 0` and `dσ∧dσ = 0`.
//!
//! A 2-form is represented by its skew coefficient matrix `M` with
//! `M[i][j]` the coefficient of `dx_i∧dx_j` for `i < j`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::Matrix6;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};

pub const TWO_PI: f64 = 2.0 * PI;

pub const SQUARE_IDENTITY_TOL: f64 = 1e-9;
pub const CUBE_TOL: f64 = 1e-10;
pub const DSIGMA_SQUARE_TOL: f64 = 1e-12;
pub const SKEW_TOL: f64 = 1e-14;

pub type SkewMatrix = Matrix6<f64>;

/// Point of `T⁶ = ℝ⁶/ℤ⁶` with coordinates in `[0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TorusPoint([f64; 6]);

impl TorusPoint {
    pub fn new(coords: [f64; 6]) -> Self {
        TorusPoint(coords.map(|x| {
            let y = x.rem_euclid(1.0);
            if y >= 1.0 {
                0.0
            } else {
                y
            }
        }))
    }

    pub fn coords(&self) -> [f64; 6] {
        self.0
    }

    /// Fiber coordinates `(x5, x6)` as representatives in `[−1/2, 1/2)`.
    pub fn fiber(&self) -> (f64, f64) {
        let wrap = |x: f64| if x >= 0.5 { x - 1.0 } else { x };
        (wrap(self.0[4]), wrap(self.0[5]))
    }

    pub fn shifted(&self, axis: usize, delta: f64) -> Self {
        let mut c = self.0;
        c[axis] += delta;
        TorusPoint::new(c)
    }
}

fn smooth_step(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        (-1.0 / t).exp()
    }
}

fn smooth_step_derivative(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        smooth_step(t) / (t * t)
    }
}

/// `r(x5, x6) = φ((x5² + x6²)/ρ²)` with `φ = 1` on `[0, 1/4]`, `φ = 0` on
/// `[1, ∞)` and `φ(s) = f(1−s) / (f(1−s) + f(s−1/4))`, `f(t) = exp(−1/t)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BumpProfile {
    radius: f64,
}

impl Default for BumpProfile {
    fn default() -> Self {
        BumpProfile { radius: 0.25 }
    }
}

impl BumpProfile {
    pub fn new(radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius < 0.5) {
            return Err(Error::Precondition(format!("bump radius {radius} outside (0, 1/2)")));
        }
        Ok(BumpProfile { radius })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn profile(s: f64) -> f64 {
        if s <= 0.25 {
            return 1.0;
        }
        if s >= 1.0 {
            return 0.0;
        }
        let a = smooth_step(1.0 - s);
        let b = smooth_step(s - 0.25);
        a / (a + b)
    }

    pub fn profile_derivative(s: f64) -> f64 {
        if s <= 0.25 || s >= 1.0 {
            return 0.0;
        }
        let a = smooth_step(1.0 - s);
        let b = smooth_step(s - 0.25);
        let da = -smooth_step_derivative(1.0 - s);
        let db = smooth_step_derivative(s - 0.25);
        (da * b - a * db) / ((a + b) * (a + b))
    }

    fn scaled_radius_sq(&self, x5: f64, x6: f64) -> f64 {
        (x5 * x5 + x6 * x6) / (self.radius * self.radius)
    }

    pub fn value(&self, x5: f64, x6: f64) -> f64 {
        Self::profile(self.scaled_radius_sq(x5, x6))
    }

    /// `(∂r/∂x5, ∂r/∂x6)`.
    pub fn gradient(&self, x5: f64, x6: f64) -> (f64, f64) {
        let dphi = Self::profile_derivative(self.scaled_radius_sq(x5, x6));
        let k = 2.0 * dphi / (self.radius * self.radius);
        (k * x5, k * x6)
    }

    pub fn in_support(&self, p: &TorusPoint) -> bool {
        let (x5, x6) = p.fiber();
        x5 * x5 + x6 * x6 < self.radius * self.radius
    }
}

fn set_pair(m: &mut SkewMatrix, i: usize, j: usize, c: f64) {
    m[(i, j)] += c;
    m[(j, i)] -= c;
}

/// `σ` and `dσ` at a point (0-based axes, so `dx1` is axis 0).
pub fn sigma_at(p: &TorusPoint) -> ([f64; 6], SkewMatrix) {
    let theta = TWO_PI * p.0[2];
    let (s, c) = theta.sin_cos();
    let mut sigma = [0.0; 6];
    sigma[0] = c;
    sigma[1] = s;
    let mut dsigma = SkewMatrix::zeros();
    set_pair(&mut dsigma, 0, 2, TWO_PI * s);
    set_pair(&mut dsigma, 1, 2, -TWO_PI * c);
    (sigma, dsigma)
}

/// Pieces of `ω` at a point.
#[derive(Clone, Copy, Debug)]
pub struct OmegaParts {
    pub r: f64,
    pub dr: [f64; 6],
    pub sigma: [f64; 6],
    pub tau: SkewMatrix,
    pub dr_wedge_sigma: SkewMatrix,
    pub dsigma: SkewMatrix,
}

fn outer_wedge(a: &[f64; 6], b: &[f64; 6]) -> SkewMatrix {
    let mut m = SkewMatrix::zeros();
    for i in 0..6 {
        for j in 0..6 {
            m[(i, j)] = a[i] * b[j] - a[j] * b[i];
        }
    }
    m
}

pub fn omega_parts(bump: &BumpProfile, p: &TorusPoint) -> OmegaParts {
    let (x5, x6) = p.fiber();
    let r = bump.value(x5, x6);
    let (r5, r6) = bump.gradient(x5, x6);
    let mut dr = [0.0; 6];
    dr[4] = r5;
    dr[5] = r6;
    let (sigma, dsigma) = sigma_at(p);
    let mut tau = SkewMatrix::zeros();
    set_pair(&mut tau, 4, 5, r);
    OmegaParts { r, dr, sigma, tau, dr_wedge_sigma: outer_wedge(&dr, &sigma), dsigma }
}

/// Coefficient matrix of `ω = τ + dr∧σ + r dσ`; exactly zero outside the support.
pub fn omega_at(bump: &BumpProfile, p: &TorusPoint) -> SkewMatrix {
    if !bump.in_support(p) {
        return SkewMatrix::zeros();
    }
    let parts = omega_parts(bump, p);
    parts.tau + parts.dr_wedge_sigma + parts.dsigma * parts.r
}

/// Dense float form on `ℝ⁶`, coefficients indexed by the bitmask of the
/// increasing multi-index.
#[derive(Clone, Debug, PartialEq)]
pub struct FloatForm {
    coeffs: [f64; 64],
}

impl FloatForm {
    pub fn zero() -> Self {
        FloatForm { coeffs: [0.0; 64] }
    }

    pub fn from_skew(m: &SkewMatrix) -> Self {
        let mut f = Self::zero();
        for i in 0..6 {
            for j in i + 1..6 {
                f.coeffs[(1 << i) | (1 << j)] = m[(i, j)];
            }
        }
        f
    }

    pub fn from_one_form(v: &[f64; 6]) -> Self {
        let mut f = Self::zero();
        for (i, &c) in v.iter().enumerate() {
            f.coeffs[1 << i] = c;
        }
        f
    }

    pub fn coeff(&self, mask: usize) -> f64 {
        self.coeffs[mask]
    }

    pub fn wedge(&self, other: &FloatForm) -> FloatForm {
        let mut out = Self::zero();
        for a in 1..64usize {
            let ca = self.coeffs[a];
            if ca == 0.0 {
                continue;
            }
            for b in 1..64usize {
                let cb = other.coeffs[b];
                if cb == 0.0 || a & b != 0 {
                    continue;
                }
                // sign: number of pairs (i in a, j in b) with i > j
                let mut swaps = 0;
                for j in 0..6 {
                    if b & (1 << j) != 0 {
                        swaps += (a >> (j + 1)).count_ones();
                    }
                }
                let s = if swaps % 2 == 0 { 1.0 } else { -1.0 };
                out.coeffs[a | b] += s * ca * cb;
            }
        }
        out
    }

    pub fn scale(&self, c: f64) -> FloatForm {
        FloatForm { coeffs: self.coeffs.map(|x| x * c) }
    }

    pub fn sub(&self, other: &FloatForm) -> FloatForm {
        let mut out = self.clone();
        for (o, x) in out.coeffs.iter_mut().zip(other.coeffs) {
            *o -= x;
        }
        out
    }

    pub fn add(&self, other: &FloatForm) -> FloatForm {
        self.sub(&other.scale(-1.0))
    }

    pub fn norm_inf(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, x| m.max(x.abs()))
    }
}

pub fn singular_values(m: &SkewMatrix) -> [f64; 6] {
    let sv = m.svd(false, false).singular_values;
    let mut out = [0.0; 6];
    for (o, s) in out.iter_mut().zip(sv.iter()) {
        *o = *s;
    }
    out.sort_by(|a, b| b.total_cmp(a));
    out
}

/// Singular values above `tol × largest`; returns the rank and the smallest
/// retained singular value.
pub fn numeric_rank(m: &SkewMatrix, tol: f64) -> (usize, f64) {
    let sv = singular_values(m);
    let largest = sv[0];
    if largest == 0.0 {
        return (0, 0.0);
    }
    let kept: Vec<f64> = sv.iter().copied().filter(|&s| s > tol * largest).collect();
    (kept.len(), kept.last().copied().unwrap_or(0.0))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RankSample {
    pub point: TorusPoint,
    pub rank: usize,
    pub smallest_retained: f64,
    pub singular_values: [f64; 6],
}

#[derive(Clone, Debug, PartialEq)]
pub struct RankScan {
    pub histogram: BTreeMap<usize, usize>,
    pub samples: Vec<RankSample>,
    /// Samples whose rank is neither 0 nor 4.
    pub anomalies: Vec<RankSample>,
}

impl RankScan {
    pub fn dichotomy_holds(&self) -> bool {
        self.anomalies.is_empty()
    }
}

pub fn sample_points(n: usize, seed: u64) -> Vec<TorusPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let mut c = [0.0; 6];
            for x in &mut c {
                *x = rng.random::<f64>();
            }
            TorusPoint::new(c)
        })
        .collect()
}

/// Uniform points of the torus whose fiber coordinates lie in the support disk.
pub fn sample_support_points(bump: &BumpProfile, n: usize, seed: u64) -> Vec<TorusPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rho = bump.radius();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let mut c = [0.0; 6];
        for x in c.iter_mut().take(4) {
            *x = rng.random::<f64>();
        }
        let (a, b) = (rng.random_range(-rho..rho), rng.random_range(-rho..rho));
        if a * a + b * b < rho * rho {
            c[4] = a;
            c[5] = b;
            out.push(TorusPoint::new(c));
        }
    }
    out
}

pub fn rank_scan_points(bump: &BumpProfile, points: &[TorusPoint], tol: f64) -> Result<RankScan> {
    if !(tol > 0.0) {
        return Err(Error::Precondition("tolerance must be positive".into()));
    }
    let samples: Vec<RankSample> = points
        .par_iter()
        .map(|p| {
            let m = omega_at(bump, p);
            let (rank, smallest_retained) = numeric_rank(&m, tol);
            RankSample { point: *p, rank, smallest_retained, singular_values: singular_values(&m) }
        })
        .collect();
    let mut histogram = BTreeMap::new();
    for s in &samples {
        *histogram.entry(s.rank).or_insert(0) += 1;
    }
    let anomalies = samples.iter().filter(|s| s.rank != 0 && s.rank != 4).copied().collect();
    Ok(RankScan { histogram, samples, anomalies })
}

/// Rank histogram over `n_samples` seeded uniform points of the torus.
pub fn rank_scan(bump: &BumpProfile, n_samples: usize, tol: f64, seed: u64) -> Result<RankScan> {
    if n_samples == 0 {
        return Err(Error::Precondition("need at least one sample".into()));
    }
    rank_scan_points(bump, &sample_points(n_samples, seed), tol)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum IdentityKind {
    Square,
    Cube,
    DsigmaSquare,
    Skew,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IdentityReport {
    pub points: usize,
    pub max_square_residual: f64,
    pub max_cube: f64,
    pub max_dsigma_square: f64,
    pub max_skew_defect: f64,
    pub breaches: Vec<(TorusPoint, IdentityKind, f64)>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.breaches.is_empty()
    }
}

pub fn identity_check(bump: &BumpProfile, points: &[TorusPoint]) -> IdentityReport {
    let mut report = IdentityReport {
        points: points.len(),
        max_square_residual: 0.0,
        max_cube: 0.0,
        max_dsigma_square: 0.0,
        max_skew_defect: 0.0,
        breaches: Vec::new(),
    };
    for p in points {
        let m = omega_at(bump, p);
        let skew = (m + m.transpose()).abs().max();
        let omega = FloatForm::from_skew(&m);
        let sq = omega.wedge(&omega);
        let cube = sq.wedge(&omega).norm_inf();
        let parts = omega_parts(bump, p);
        let rhs = if bump.in_support(p) {
            let left = FloatForm::from_skew(&parts.tau)
                .add(&FloatForm::from_one_form(&parts.dr).wedge(&FloatForm::from_one_form(&parts.sigma)));
            left.wedge(&FloatForm::from_skew(&parts.dsigma)).scale(2.0 * parts.r)
        } else {
            FloatForm::zero()
        };
        let sq_res = sq.sub(&rhs).norm_inf();
        let ds = FloatForm::from_skew(&parts.dsigma);
        let ds_sq = ds.wedge(&ds).norm_inf();
        report.max_square_residual = report.max_square_residual.max(sq_res);
        report.max_cube = report.max_cube.max(cube);
        report.max_dsigma_square = report.max_dsigma_square.max(ds_sq);
        report.max_skew_defect = report.max_skew_defect.max(skew);
        for (kind, value, tol) in [
            (IdentityKind::Square, sq_res, SQUARE_IDENTITY_TOL),
            (IdentityKind::Cube, cube, CUBE_TOL),
            (IdentityKind::DsigmaSquare, ds_sq, DSIGMA_SQUARE_TOL),
            (IdentityKind::Skew, skew, SKEW_TOL),
        ] {
            if value > tol {
                report.breaches.push((*p, kind, value));
            }
        }
    }
    report
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClosednessReport {
    pub step: f64,
    pub max_residual: f64,
    /// `max_residual / h²`.
    pub constant: f64,
    pub worst_point: Option<TorusPoint>,
}

/// All `C(6,3)` coefficients of `dω` by central differences:
/// `(dω)_ijk = ∂_i ω_jk − ∂_j ω_ik + ∂_k ω_ij`.
pub fn d_omega_central(bump: &BumpProfile, p: &TorusPoint, h: f64) -> [f64; 20] {
    let partial: Vec<SkewMatrix> = (0..6)
        .map(|a| (omega_at(bump, &p.shifted(a, h)) - omega_at(bump, &p.shifted(a, -h))) / (2.0 * h))
        .collect();
    let mut out = [0.0; 20];
    let mut n = 0;
    for i in 0..6 {
        for j in i + 1..6 {
            for k in j + 1..6 {
                out[n] = partial[i][(j, k)] - partial[j][(i, k)] + partial[k][(i, j)];
                n += 1;
            }
        }
    }
    out
}

pub fn closedness_check(bump: &BumpProfile, points: &[TorusPoint], h: f64) -> Result<ClosednessReport> {
    if !(h > 0.0) {
        return Err(Error::Precondition("step must be positive".into()));
    }
    let mut max_residual = 0.0f64;
    let mut worst_point = None;
    for p in points {
        let r = d_omega_central(bump, p, h).iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if r > max_residual {
            max_residual = r;
            worst_point = Some(*p);
        }
    }
    Ok(ClosednessReport { step: h, max_residual, constant: max_residual / (h * h), worst_point })
}

/// Integral of the `dx5∧dx6` coefficient of `ω` over one fiber disk,
/// by the midpoint rule on an `n × n` grid covering the disk.
pub fn fiber_integral(bump: &BumpProfile, n: usize) -> f64 {
    let rho = bump.radius();
    let step = 2.0 * rho / n as f64;
    let mut total = 0.0;
    for a in 0..n {
        for b in 0..n {
            let x5 = -rho + (a as f64 + 0.5) * step;
            let x6 = -rho + (b as f64 + 0.5) * step;
            let p = TorusPoint::new([0.0, 0.0, 0.0, 0.0, x5, x6]);
            total += omega_at(bump, &p)[(4, 5)];
        }
    }
    total * step * step
}

pub const NO_ANTI_INVARIANT_NOTE: &str = "\
Note: no anti-invariant almost complex structure exists for this form.
A closed J-anti-invariant 2-form on a connected almost complex manifold that
vanishes on a nonempty open set vanishes everywhere (unique continuation).
The form scanned here is closed, has rank 0 or 4 at every point, and vanishes
outside a tubular neighbourhood of W = {x5 = x6 = 0} in the connected torus T^6.
So no almost complex structure J on T^6 makes it J-anti-invariant, even though
nothing in its pointwise rank rules this out. This is an exact vanishing
statement and is not tested by sampling.
";

pub fn no_anti_invariant_note() -> &'static str {
    NO_ANTI_INVARIANT_NOTE
}

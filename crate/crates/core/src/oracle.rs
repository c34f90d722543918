//! Numerical side: dense complex matrices, Jacobi eigen and singular value
//! solvers, Haar sampling, realizable points of each cone, and the drivers
//! that compare generated systems against them.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::classical_cones::{ConeId, ConeKind, Variant};
use crate::combinatorics::{dual_entries, hat_entries, Rational};
use crate::error::{Error, Result};
use crate::polyhedra::{FloatPoint, InequalitySystem, MixedSampler, PointSampler, Provenance, RationalPoint};
use crate::registry;

pub const DEFAULT_TOL: f64 = 1e-8;
const MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix { rows, cols, data: vec![Complex64::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { 1.0.into() } else { Complex64::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Complex64) -> Self {
        let data = (0..rows * cols).map(|k| f(k / cols, k % cols)).collect();
        ComplexMatrix { rows, cols, data }
    }

    pub fn from_real(rows: usize, cols: usize, values: &[f64]) -> Self {
        assert_eq!(values.len(), rows * cols, "entry count");
        Self::from_fn(rows, cols, |i, j| values[i * cols + j].into())
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let n = values.len();
        Self::from_fn(n, n, |i, j| if i == j { values[i].into() } else { Complex64::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn scale(&self, k: f64) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)] * k)
    }

    pub fn real_part(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)].re.into())
    }

    /// `(M + M*) / 2`.
    pub fn hermitian_part(&self) -> Self {
        (self + &self.adjoint()).scale(0.5)
    }

    /// Rows `r0..r1`, columns `c0..c1`.
    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        Self::from_fn(r1 - r0, c1 - c0, |i, j| self[(r0 + i, c0 + j)])
    }

    /// Largest absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn asymmetry(&self) -> f64 {
        if self.rows != self.cols {
            return f64::INFINITY;
        }
        (&self.adjoint() - self).norm_inf()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.asymmetry() <= tol
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    fn rotate_columns(&mut self, p: usize, q: usize, c: f64, s_u: Complex64) {
        // (col_p, col_q) <- (c col_p − conj(s_u) col_q, s_u col_p + c col_q)
        for k in 0..self.rows {
            let a = self[(k, p)];
            let b = self[(k, q)];
            self[(k, p)] = a * c - s_u.conj() * b;
            self[(k, q)] = s_u * a + b * c;
        }
    }

    fn rotate_rows(&mut self, p: usize, q: usize, c: f64, s_u: Complex64) {
        // (row_p, row_q) <- (c row_p − s_u row_q, conj(s_u) row_p + c row_q)
        for k in 0..self.cols {
            let a = self[(p, k)];
            let b = self[(q, k)];
            self[(p, k)] = a * c - s_u * b;
            self[(q, k)] = s_u.conj() * a + b * c;
        }
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        ComplexMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)] + rhs[(i, j)])
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        ComplexMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)] - rhs[(i, j)])
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

/// Jacobi rotation `(c, s·u)` annihilating an off-diagonal entry `g` of a
/// Hermitian 2×2 problem with diagonal `(app, aqq)`.
fn jacobi_rotation(app: f64, aqq: f64, g: Complex64) -> (f64, Complex64) {
    let mag = g.norm();
    let u = g / mag;
    let tau = (aqq - app) / (2.0 * mag);
    let t = if tau == 0.0 { 1.0 } else { tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt()) };
    let c = 1.0 / (1.0 + t * t).sqrt();
    (c, u * (t * c))
}

/// Eigenvalues in decreasing order with the matching unitary, so that
/// `M = U diag(e) U*`. Cyclic Jacobi.
pub fn eigh(m: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    if m.rows != m.cols {
        return Err(Error::DimensionMismatch { expected: m.rows, found: m.cols });
    }
    let n = m.rows;
    let asym = m.asymmetry();
    if asym > 1e-12 * m.norm_inf().max(1.0) {
        return Err(Error::NotHermitian(asym));
    }
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let frob = a.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * frob || off == 0.0 {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let g = a[(p, q)];
                if g.norm() < f64::MIN_POSITIVE {
                    continue;
                }
                let (c, su) = jacobi_rotation(a[(p, p)].re, a[(q, q)].re, g);
                a.rotate_columns(p, q, c, su);
                a.rotate_rows(p, q, c, su);
                a[(p, q)] = Complex64::zero();
                a[(q, p)] = Complex64::zero();
                a[(p, p)] = a[(p, p)].re.into();
                a[(q, q)] = a[(q, q)].re.into();
                v.rotate_columns(p, q, c, su);
            }
        }
    }
    if !converged {
        return Err(Error::NotConverged(MAX_SWEEPS));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok((values, vectors))
}

pub fn eigenvalues_hermitian(m: &ComplexMatrix) -> Result<Vec<f64>> {
    Ok(eigh(m)?.0)
}

/// Thin SVD `A = U diag(s) V*` with `s` decreasing, by one-sided Jacobi on
/// the columns.
pub fn svd(a: &ComplexMatrix) -> Result<(ComplexMatrix, Vec<f64>, ComplexMatrix)> {
    if a.rows < a.cols {
        let (u, s, v) = svd(&a.adjoint())?;
        return Ok((v, s, u));
    }
    let (m, n) = (a.rows, a.cols);
    let mut w = a.clone();
    let mut v = ComplexMatrix::identity(n);
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..n {
            for j in i + 1..n {
                let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, Complex64::zero());
                for k in 0..m {
                    alpha += w[(k, i)].norm_sqr();
                    beta += w[(k, j)].norm_sqr();
                    gamma += w[(k, i)].conj() * w[(k, j)];
                }
                if gamma.norm() <= 1e-15 * (alpha * beta).sqrt() || gamma.norm() < f64::MIN_POSITIVE {
                    continue;
                }
                rotated = true;
                let (c, su) = jacobi_rotation(alpha, beta, gamma);
                w.rotate_columns(i, j, c, su);
                v.rotate_columns(i, j, c, su);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NotConverged(MAX_SWEEPS));
    }
    let norms: Vec<f64> = (0..n).map(|j| w.column(j).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    let s: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let u = ComplexMatrix::from_fn(m, n, |i, k| {
        let j = order[k];
        if norms[j] > 0.0 { w[(i, j)] / norms[j] } else { Complex64::zero() }
    });
    let v = ComplexMatrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    Ok((u, s, v))
}

pub fn singular_values(a: &ComplexMatrix) -> Result<Vec<f64>> {
    Ok(svd(a)?.1)
}

/// Seed for a reproducible sample stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Seed(pub u64);

impl Seed {
    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }

    /// Independent stream `index` under this seed.
    pub fn stream(&self, index: u64) -> ChaCha8Rng {
        let mut rng = self.rng();
        rng.set_stream(index);
        rng
    }
}

fn gaussian(rng: &mut impl Rng) -> f64 {
    rng.sample(StandardNormal)
}

pub fn gaussian_matrix(rows: usize, cols: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let data = (0..rows * cols)
        .map(|_| Complex64::new(gaussian(rng) * h, gaussian(rng) * h))
        .collect();
    ComplexMatrix { rows, cols, data }
}

fn real_gaussian_matrix(rows: usize, cols: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let data = (0..rows * cols).map(|_| gaussian(rng).into()).collect();
    ComplexMatrix { rows, cols, data }
}

/// Orthonormalizes the columns by modified Gram–Schmidt, run twice. The
/// implied triangular factor has a positive diagonal, which makes the
/// result Haar distributed for a Gaussian input.
fn orthonormalize(mut g: ComplexMatrix) -> ComplexMatrix {
    let n = g.cols;
    for k in 0..n {
        for _ in 0..2 {
            for j in 0..k {
                let dot: Complex64 = (0..g.rows).map(|i| g[(i, j)].conj() * g[(i, k)]).sum();
                for i in 0..g.rows {
                    let gij = g[(i, j)];
                    g[(i, k)] -= dot * gij;
                }
            }
        }
        let norm = g.column(k).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for i in 0..g.rows {
            g[(i, k)] /= norm;
        }
    }
    g
}

pub fn random_unitary_with(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    orthonormalize(gaussian_matrix(n, n, rng))
}

pub fn random_unitary(n: usize, seed: Seed) -> ComplexMatrix {
    random_unitary_with(n, &mut seed.rng())
}

pub fn random_orthogonal_with(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    orthonormalize(real_gaussian_matrix(n, n, rng))
}

/// `(G + G*)/2` for a complex Gaussian `G`.
pub fn random_hermitian(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    gaussian_matrix(n, n, rng).hermitian_part()
}

/// Small integer spectrum with frequent repeats, to land on walls.
fn structured_values(n: usize, nonneg: bool, rng: &mut impl Rng) -> Vec<f64> {
    let lo = if nonneg { 0 } else { -3 };
    let mut v: Vec<f64> = (0..n).map(|_| rng.gen_range(lo..=3) as f64).collect();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

/// Hermitian matrix: half the time Gaussian, otherwise a random unitary
/// conjugate of a small integer diagonal.
fn sample_hermitian(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    if rng.gen_bool(0.5) {
        random_hermitian(n, rng)
    } else {
        let u = random_unitary_with(n, rng);
        let d = ComplexMatrix::diagonal(&structured_values(n, false, rng));
        &(&u * &d) * &u.adjoint()
    }
}

fn sample_real_symmetric(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    if rng.gen_bool(0.5) {
        real_gaussian_matrix(n, n, rng).hermitian_part()
    } else {
        let o = random_orthogonal_with(n, rng);
        let d = ComplexMatrix::diagonal(&structured_values(n, false, rng));
        &(&o * &d) * &o.transpose()
    }
}

/// General `rows × cols` matrix, sometimes with prescribed small integer
/// singular values (often repeated or zero).
fn sample_general(rows: usize, cols: usize, rng: &mut impl Rng) -> ComplexMatrix {
    if rng.gen_bool(0.5) {
        gaussian_matrix(rows, cols, rng)
    } else {
        let k = rows.min(cols);
        let s = structured_values(k, true, rng);
        let u = random_unitary_with(rows, rng);
        let v = random_unitary_with(cols, rng);
        let d = ComplexMatrix::from_fn(rows, cols, |i, j| if i == j { s[i].into() } else { Complex64::zero() });
        &(&u * &d) * &v.adjoint()
    }
}

fn point(pairs: Vec<(&str, Vec<f64>)>) -> FloatPoint {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

/// A point of the cone realized by random matrices.
pub fn sample_cone_point(cone: &ConeId, seed: Seed) -> Result<FloatPoint> {
    sample_with(cone, &mut seed.rng())
}

fn sample_with(cone: &ConeId, rng: &mut impl Rng) -> Result<FloatPoint> {
    cone.validate()?;
    let p = &cone.params;
    let eig = |m: &ComplexMatrix| eigenvalues_hermitian(m);
    let sv = |m: &ComplexMatrix| singular_values(m);
    Ok(match cone.kind {
        ConeKind::Horn => {
            let x = sample_hermitian(p[0], rng);
            let y = sample_hermitian(p[0], rng);
            point(vec![("x", eig(&x)?), ("y", eig(&y)?), ("z", eig(&(&x + &y))?)])
        }
        ConeKind::LrMn => {
            let (m, n) = (p[0], p[1]);
            let x = sample_hermitian(m + n, rng);
            point(vec![
                ("z", eig(&x)?),
                ("x", eig(&x.block(0, m, 0, m))?),
                ("y", eig(&x.block(m, m + n, m, m + n))?),
            ])
        }
        ConeKind::E1 => {
            let x = sample_hermitian(p[0], rng);
            point(vec![("x", eig(&x)?), ("y", eig(&x.real_part())?)])
        }
        ConeKind::E2 => {
            let n = p[0];
            let a = sample_real_symmetric(2 * n, rng);
            let x = a.block(0, n, 0, n);
            let y = a.block(n, 2 * n, n, 2 * n);
            let z = a.block(n, 2 * n, 0, n);
            let skew = (&z - &z.transpose()).scale(0.5);
            let i_skew = ComplexMatrix::from_fn(n, n, |r, c| skew[(r, c)] * Complex64::i());
            let pi = &(&x + &y).scale(0.5) + &i_skew;
            point(vec![("x", eig(&a)?), ("y", eig(&pi)?)])
        }
        ConeKind::Sing | ConeKind::SoOdd => {
            let (rows, cols) = if cone.kind == ConeKind::Sing { (p[0], p[1]) } else { (p[0] + 1, p[0]) };
            let a = sample_general(rows, cols, rng);
            let b = sample_general(rows, cols, rng);
            point(vec![("x", sv(&a)?), ("y", sv(&b)?), ("z", sv(&(&a + &b))?)])
        }
        ConeKind::A => {
            let (pp, q) = (p[0], p[1]);
            let x = sample_hermitian(pp + q, rng);
            point(vec![("x", eig(&x)?), ("y", sv(&x.block(0, pp, pp, pp + q))?)])
        }
        ConeKind::B => {
            let x = sample_general(p[0], p[0], rng);
            point(vec![("x", sv(&x)?), ("y", eig(&x.hermitian_part())?)])
        }
        ConeKind::S => {
            let (pp, q) = (p[0], p[1]);
            let n = pp + q;
            let x = sample_general(n, n, rng);
            point(vec![
                ("z", sv(&x)?),
                ("x", sv(&x.block(0, pp, pp, n))?),
                ("y", sv(&x.block(pp, n, 0, pp))?),
            ])
        }
        ConeKind::T => {
            let (pp, q) = (p[0], p[1]);
            let n = pp + q;
            let x = sample_general(n, n, rng);
            point(vec![
                ("z", sv(&x)?),
                ("x", sv(&x.block(0, pp, 0, pp))?),
                ("y", sv(&x.block(pp, n, pp, n))?),
            ])
        }
    })
}

/// Rounds every coordinate to the nearest multiple of `1/den`.
pub fn rationalize(point: &FloatPoint, den: i64) -> RationalPoint {
    point
        .iter()
        .map(|(k, v)| {
            let w = v
                .iter()
                .map(|x| Rational::new(((x * den as f64).round() as i64).into(), den.into()))
                .collect();
            (k.clone(), w)
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct ViolationRecord {
    pub point: FloatPoint,
    pub relation: String,
    pub provenance: Option<Provenance>,
    pub margin: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SoundnessReport {
    pub cone: String,
    pub trials: usize,
    pub violations: Vec<ViolationRecord>,
    pub max_violation: f64,
}

impl SoundnessReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `trials` realizable points of `cone` against its generated system.
pub fn soundness_check(cone: &ConeId, trials: usize, seed: Seed, tol: f64) -> Result<SoundnessReport> {
    let sys = registry::cached(cone)?;
    soundness_check_system(&sys, trials, seed, tol)
}

/// Checks realizable points of `system.cone()` against `system`, which may
/// be a generated system or a stored list.
pub fn soundness_check_system(system: &InequalitySystem, trials: usize, seed: Seed, tol: f64) -> Result<SoundnessReport> {
    let cone = system.cone().clone();
    let per_trial: Vec<Vec<ViolationRecord>> = (0..trials as u64)
        .into_par_iter()
        .map(|k| -> Result<Vec<ViolationRecord>> {
            let pt = sample_with(&cone, &mut seed.stream(k))?;
            let m = system.member_float(&pt, tol)?;
            Ok(m.violations
                .iter()
                .map(|v| {
                    let (relation, provenance, margin) = match v {
                        crate::polyhedra::Violation::Relation { index, margin } => {
                            let r = &system.relations()[*index];
                            (r.render(system.blocks()), Some(r.provenance().clone()), *margin)
                        }
                        crate::polyhedra::Violation::Chamber { block, index, margin } => {
                            (format!("chamber of {block} at {index}"), None, *margin)
                        }
                    };
                    ViolationRecord { point: pt.clone(), relation, provenance, margin }
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    let violations: Vec<ViolationRecord> = per_trial.into_iter().flatten().collect();
    let max_violation = violations.iter().map(|v| v.margin.abs()).fold(0.0, f64::max);
    Ok(SoundnessReport { cone: cone.to_string(), trials, violations, max_violation })
}

/// Maps a point of one cone to the corresponding point of another.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Embedding {
    Identity,
    /// `(x, y) ↦ (x, x, 2y)` into Horn(n).
    EIToHorn,
    /// `(x, y) ↦ (x, y, y)` into LR(n,n).
    EIIToLr,
    /// `(x, y, z) ↦ (x̂, ŷ, ẑ)` into Horn(p+q).
    SingToHorn { p: usize, q: usize },
    /// `(x, y) ↦ (x, x^∨, 2ŷ)` into Horn(p+q).
    AToHorn { p: usize, q: usize },
    /// `(x, y) ↦ (x̂^{n,n}, y, y^∨)` into LR(n,n).
    BToLr,
    /// `(z, x, y) ↦ (ẑ^{n,n}, x̂^{p,q}, ŷ^{p,q})` into LR(n,n).
    SToLr { p: usize, q: usize },
    /// `(z, x, y) ↦ (ẑ^{n,n}, x̂^{p,p}, ŷ^{q,q})` into LR(2p,2q).
    TToLr { p: usize, q: usize },
}

impl Embedding {
    pub fn apply(&self, pt: &RationalPoint) -> Result<RationalPoint> {
        let get = |k: &str| pt.get(k).cloned().ok_or_else(|| Error::UnknownBlock(k.to_string()));
        let two = Rational::from_integer(2.into());
        let double = |v: Vec<Rational>| v.into_iter().map(|x| x * &two).collect::<Vec<_>>();
        let out: Vec<(&str, Vec<Rational>)> = match *self {
            Embedding::Identity => return Ok(pt.clone()),
            Embedding::EIToHorn => vec![("x", get("x")?), ("y", get("x")?), ("z", double(get("y")?))],
            Embedding::EIIToLr => vec![("z", get("x")?), ("x", get("y")?), ("y", get("y")?)],
            Embedding::SingToHorn { p, .. } => vec![
                ("x", hat_entries(&get("x")?, p)?),
                ("y", hat_entries(&get("y")?, p)?),
                ("z", hat_entries(&get("z")?, p)?),
            ],
            Embedding::AToHorn { p, .. } => {
                let x = get("x")?;
                vec![("y", dual_entries(&x)), ("x", x), ("z", double(hat_entries(&get("y")?, p)?))]
            }
            Embedding::BToLr => {
                let x = get("x")?;
                let y = get("y")?;
                vec![("z", hat_entries(&x, x.len())?), ("y", dual_entries(&y)), ("x", y)]
            }
            Embedding::SToLr { p, q } => vec![
                ("z", hat_entries(&get("z")?, p + q)?),
                ("x", hat_entries(&get("x")?, p)?),
                ("y", hat_entries(&get("y")?, p)?),
            ],
            Embedding::TToLr { p, q } => vec![
                ("z", hat_entries(&get("z")?, p + q)?),
                ("x", hat_entries(&get("x")?, p)?),
                ("y", hat_entries(&get("y")?, q)?),
            ],
        };
        Ok(out.into_iter().map(|(k, v)| (k.to_string(), v)).collect())
    }
}

/// The embedding used to cross-check `cone`, with the cone it lands in.
/// Horn and LR(m,n) are compared with their own strict-one variant.
pub fn registered_embedding(cone: &ConeId) -> Result<(Embedding, ConeId)> {
    cone.validate()?;
    let p = &cone.params;
    Ok(match cone.kind {
        ConeKind::Horn | ConeKind::LrMn => {
            let other = if cone.variant == Variant::StrictOne { Variant::Nonzero } else { Variant::StrictOne };
            (Embedding::Identity, cone.clone().with_variant(other))
        }
        ConeKind::E1 => (Embedding::EIToHorn, ConeId::horn(p[0])),
        ConeKind::E2 => (Embedding::EIIToLr, ConeId::lr_mn(p[0], p[0])),
        ConeKind::Sing => (Embedding::SingToHorn { p: p[0], q: p[1] }, ConeId::horn(p[0] + p[1])),
        ConeKind::SoOdd => (Embedding::SingToHorn { p: p[0] + 1, q: p[0] }, ConeId::horn(2 * p[0] + 1)),
        ConeKind::A => (Embedding::AToHorn { p: p[0], q: p[1] }, ConeId::horn(p[0] + p[1])),
        ConeKind::B => (Embedding::BToLr, ConeId::lr_mn(p[0], p[0])),
        ConeKind::S => (Embedding::SToLr { p: p[0], q: p[1] }, ConeId::lr_mn(p[0] + p[1], p[0] + p[1])),
        ConeKind::T => (Embedding::TToLr { p: p[0], q: p[1] }, ConeId::lr_mn(2 * p[0], 2 * p[1])),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Separation {
    pub point: std::collections::BTreeMap<String, Vec<String>>,
    pub in_source: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct EquivalenceReport {
    pub source: String,
    pub target: String,
    pub embedding: Embedding,
    pub trials: usize,
    /// Sampled points lying in both cones.
    pub members: usize,
    pub separations: Vec<Separation>,
}

impl EquivalenceReport {
    pub fn is_clean(&self) -> bool {
        self.separations.is_empty()
    }
}

const ANCHORS: usize = 256;

/// Exact points near the realizable part of `cone`; empty when the cone
/// has no sampler.
pub fn anchors(cone: &ConeId, count: usize, seed: Seed) -> Vec<RationalPoint> {
    (0..count as u64)
        .into_par_iter()
        .filter_map(|k| {
            let mut rng = seed.stream(1 << 32 | k);
            let pt = sample_with(cone, &mut rng).ok()?;
            let den = rng.gen_range(1..=64);
            Some(rationalize(&pt, den))
        })
        .collect()
}

/// Samples exact points in the block space of `source` and compares
/// membership in `source` with membership of the embedded point in
/// `target`.
pub fn equivalence_check(
    source: &InequalitySystem,
    embedding: &Embedding,
    target: &InequalitySystem,
    trials: usize,
    seed: Seed,
) -> Result<EquivalenceReport> {
    let probe = MixedSampler::new(source, seed.0).sample();
    let mapped = embedding.apply(&probe)?;
    target.contains_point(&mapped).map_err(|e| Error::UnsupportedEmbedding(format!("{embedding:?}: {e}")))?;

    let mut sampler = MixedSampler::new(source, seed.0).with_anchors(anchors(source.cone(), ANCHORS, seed));
    let points: Vec<RationalPoint> = (0..trials).map(|_| sampler.sample()).collect();
    let outcomes: Vec<(bool, bool)> = points
        .par_iter()
        .map(|pt| -> Result<(bool, bool)> {
            let a = source.contains_point(pt)?;
            let b = target.contains_point(&embedding.apply(pt)?)?;
            Ok((a, b))
        })
        .collect::<Result<_>>()?;
    let members = outcomes.iter().filter(|(a, b)| *a && *b).count();
    let separations = points
        .iter()
        .zip(&outcomes)
        .filter(|(_, (a, b))| a != b)
        .take(8)
        .map(|(pt, (a, _))| Separation {
            point: pt.iter().map(|(k, v)| (k.clone(), v.iter().map(ToString::to_string).collect())).collect(),
            in_source: *a,
        })
        .collect();
    Ok(EquivalenceReport {
        source: source.cone().to_string(),
        target: target.cone().to_string(),
        embedding: *embedding,
        trials,
        members,
        separations,
    })
}

/// Same as [`equivalence_check`] for two systems over identical blocks.
pub fn variant_check(a: &InequalitySystem, b: &InequalitySystem, trials: usize, seed: Seed) -> Result<EquivalenceReport> {
    if a.blocks() != b.blocks() {
        return Err(Error::BlockMismatch(format!("{} vs {}", a.cone(), b.cone())));
    }
    equivalence_check(a, &Embedding::Identity, b, trials, seed)
}

/// `‖M − U diag(e) U*‖_∞`.
pub fn eigen_residual(m: &ComplexMatrix, values: &[f64], vectors: &ComplexMatrix) -> f64 {
    let d = ComplexMatrix::diagonal(values);
    (m - &(&(vectors * &d) * &vectors.adjoint())).norm_inf()
}

/// `‖A − U diag(s) V*‖_∞`.
pub fn svd_residual(a: &ComplexMatrix, u: &ComplexMatrix, s: &[f64], v: &ComplexMatrix) -> f64 {
    let d = ComplexMatrix::diagonal(s);
    (a - &(&(u * &d) * &v.adjoint())).norm_inf()
}

/// `[[0, A], [A*, 0]]`.
pub fn hat_matrix(a: &ComplexMatrix) -> ComplexMatrix {
    let (p, q) = (a.rows, a.cols);
    ComplexMatrix::from_fn(p + q, p + q, |i, j| match (i < p, j < p) {
        (true, false) => a[(i, j - p)],
        (false, true) => a[(j, i - p)].conj(),
        _ => Complex64::zero(),
    })
}

/// Float view of an exact point.
pub fn to_float(pt: &RationalPoint) -> FloatPoint {
    pt.iter()
        .map(|(k, v)| (k.clone(), v.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect()))
        .collect()
}

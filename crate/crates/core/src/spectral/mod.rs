//! Simultaneous diagonalization of commuting unitary matrices and recovery of
//! integer weights.
//!
//! The matrix attached to a point `x` is the representation evaluated at the
//! function equal to `e^{2πi/q}` at `x` and `1` elsewhere, so on a joint
//! eigenvector with weight vector `m` it acts by `e^{2πi m_x / q}`.
//!
//! Joint eigenvectors are found by diagonalizing the Hermitian part of a random
//! complex combination of the family. Eigenvalue clusters that are not joint
//! eigenspaces are split again with a fresh combination restricted to the
//! cluster.

mod jacobi;

use std::sync::Arc;

use num_complex::Complex;
use num_traits::{Float, FloatConst};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::space::OrderedSpace;
use crate::weights::WeightMultiset;

pub use jacobi::hermitian_eigen;

/// Seed used when the caller does not provide one.
pub const DEFAULT_SEED: u64 = 0x5eed_c1c1e;

const MAX_ATTEMPTS: usize = 32;

/// Dense row-major `d × d` complex matrix.
pub type Matrix<F> = Vec<Complex<F>>;

#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryFamily<F = f64> {
    dim: usize,
    space: Arc<OrderedSpace>,
    matrices: Vec<Matrix<F>>,
    q: u32,
    bound: i64,
}

impl<F: Float> UnitaryFamily<F> {
    pub fn new(space: Arc<OrderedSpace>, dim: usize, matrices: Vec<Matrix<F>>, q: u32, bound: i64) -> Result<Self> {
        if matrices.len() != space.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} matrices for {} points",
                matrices.len(),
                space.len()
            )));
        }
        if let Some(m) = matrices.iter().find(|m| m.len() != dim * dim) {
            return Err(Error::DimensionMismatch(format!(
                "matrix with {} entries, expected {}",
                m.len(),
                dim * dim
            )));
        }
        if bound < 0 || 2 * bound >= i64::from(q) {
            return Err(Error::InvalidSampling { q, bound });
        }
        Ok(UnitaryFamily {
            dim,
            space,
            matrices,
            q,
            bound,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn space(&self) -> &Arc<OrderedSpace> {
        &self.space
    }

    pub fn matrices(&self) -> &[Matrix<F>] {
        &self.matrices
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn bound(&self) -> i64 {
        self.bound
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceConfig<F = f64> {
    pub unitarity_tol: F,
    pub commutation_tol: F,
    pub cluster_tol: F,
    pub rounding_tol: F,
}

impl<F: Float> ToleranceConfig<F> {
    /// `1e-9·d` for the family checks, `1e-8` for clustering and residuals,
    /// `1e-6` for weight rounding.
    pub fn for_dim(dim: usize) -> Self {
        let c = |v: f64| F::from(v).expect("representable tolerance");
        let d = c(dim.max(1) as f64);
        ToleranceConfig {
            unitarity_tol: c(1e-9) * d,
            commutation_tol: c(1e-9) * d,
            cluster_tol: c(1e-8),
            rounding_tol: c(1e-6),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.unitarity_tol, self.commutation_tol, self.cluster_tol, self.rounding_tol];
        if all.iter().all(|t| t.is_finite() && *t >= F::zero()) {
            Ok(())
        } else {
            Err(Error::InvalidTolerance("tolerances must be finite and nonnegative".into()))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilyReport<F = f64> {
    /// `max_x ‖U_x* U_x − I‖_F`
    pub unitarity_residual: F,
    /// `max_{x,y} ‖U_x U_y − U_y U_x‖_F`
    pub commutation_residual: F,
    pub unitary: bool,
    pub commuting: bool,
}

impl<F> FamilyReport<F> {
    pub fn passed(&self) -> bool {
        self.unitary && self.commuting
    }
}

pub fn check_family<F: Float>(fam: &UnitaryFamily<F>, cfg: &ToleranceConfig<F>) -> FamilyReport<F> {
    let d = fam.dim;
    let id = jacobi::identity::<F>(d);
    let mut unitarity = F::zero();
    for u in &fam.matrices {
        let r = sub(&matmul(&adjoint(u, d), u, d), &id);
        unitarity = unitarity.max(jacobi::frobenius(&r));
    }
    let mut commutation = F::zero();
    for (i, a) in fam.matrices.iter().enumerate() {
        for b in &fam.matrices[i + 1..] {
            let r = sub(&matmul(a, b, d), &matmul(b, a, d));
            commutation = commutation.max(jacobi::frobenius(&r));
        }
    }
    FamilyReport {
        unitarity_residual: unitarity,
        commutation_residual: commutation,
        unitary: unitarity <= cfg.unitarity_tol,
        commuting: commutation <= cfg.commutation_tol,
    }
}

/// Joint eigenbasis with per-point phases in `[0, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagonalization<F = f64> {
    pub basis: Vec<Vec<Complex<F>>>,
    /// `phases[v][x]`: `U_x basis[v] ≈ e^{2πi·phases[v][x]} basis[v]`.
    pub phases: Vec<Vec<F>>,
    pub worst_residual: F,
    pub orthonormality_residual: F,
}

impl<F: Float> Diagonalization<F> {
    /// Basis indices grouped into joint eigenspaces: vectors whose phases
    /// agree within `tol` at every point (circular distance).
    pub fn clusters(&self, tol: F) -> Vec<Vec<usize>> {
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for (i, p) in self.phases.iter().enumerate() {
            let hit = groups.iter_mut().find(|g| {
                let rep = &self.phases[g[0]];
                rep.iter().zip(p).all(|(&a, &b)| {
                    let diff = (a - b).abs();
                    diff.min(F::one() - diff) <= tol
                })
            });
            match hit {
                Some(g) => g.push(i),
                None => groups.push(vec![i]),
            }
        }
        groups
    }
}

/// Checks the family, then finds a joint eigenbasis. Residuals
/// `‖U_x v − e^{2πiθ} v‖` and the orthonormality defect must both stay within
/// `cluster_tol`.
pub fn simultaneous_diagonalize<F>(fam: &UnitaryFamily<F>, cfg: &ToleranceConfig<F>, seed: u64) -> Result<Diagonalization<F>>
where
    F: Float + FloatConst,
{
    cfg.validate()?;
    let report = check_family(fam, cfg);
    if !report.passed() {
        return Err(Error::FamilyCheck {
            unitarity: to_f64(report.unitarity_residual),
            commutation: to_f64(report.commutation_residual),
        });
    }
    let d = fam.dim;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let standard: Vec<Vec<Complex<F>>> = (0..d)
        .map(|i| {
            let mut e = vec![Complex::new(F::zero(), F::zero()); d];
            e[i] = Complex::new(F::one(), F::zero());
            e
        })
        .collect();
    let mut basis = Vec::with_capacity(d);
    split_subspace(&fam.matrices, d, standard, cfg, &mut rng, &mut basis)?;

    let tau = F::TAU();
    let mut phases = Vec::with_capacity(d);
    let mut worst = F::zero();
    for v in &mut basis {
        let norm = v.iter().fold(F::zero(), |acc, z| acc + z.norm_sqr()).sqrt();
        v.iter_mut().for_each(|z| *z = *z / norm);
        let mut row = Vec::with_capacity(fam.matrices.len());
        for u in &fam.matrices {
            let uv = matvec(u, v, d);
            let rayleigh = inner(v, &uv);
            let mut theta = rayleigh.arg() / tau;
            if theta < F::zero() {
                theta = theta + F::one();
            }
            if theta >= F::one() {
                theta = theta - F::one();
            }
            let eig = Complex::from_polar(F::one(), tau * theta);
            let residual = uv
                .iter()
                .zip(v.iter())
                .fold(F::zero(), |acc, (a, b)| acc + (*a - *b * eig).norm_sqr())
                .sqrt();
            worst = worst.max(residual);
            row.push(theta);
        }
        phases.push(row);
    }
    let mut ortho = F::zero();
    for (i, a) in basis.iter().enumerate() {
        for (j, b) in basis.iter().enumerate().skip(i) {
            let g = inner(a, b);
            let target = if i == j { F::one() } else { F::zero() };
            ortho = ortho.max((g - Complex::new(target, F::zero())).norm());
        }
    }
    if worst > cfg.cluster_tol || ortho > cfg.cluster_tol {
        return Err(Error::Diagonalization {
            worst_residual: to_f64(worst.max(ortho)),
        });
    }
    Ok(Diagonalization {
        basis,
        phases,
        worst_residual: worst,
        orthonormality_residual: ortho,
    })
}

/// Refines the orthonormal vectors `span` (an invariant subspace of every
/// matrix) into joint eigenvectors, pushing them onto `out`.
fn split_subspace<F, R>(
    matrices: &[Matrix<F>],
    d: usize,
    span: Vec<Vec<Complex<F>>>,
    cfg: &ToleranceConfig<F>,
    rng: &mut R,
    out: &mut Vec<Vec<Complex<F>>>,
) -> Result<()>
where
    F: Float,
    R: Rng,
{
    let k = span.len();
    if k <= 1 {
        out.extend(span);
        return Ok(());
    }
    let restricted: Vec<Matrix<F>> = matrices.iter().map(|u| compress(u, &span, d)).collect();
    // Joint eigenspaces of a unitary family at distinct weights are far
    // apart, so sqrt(cluster_tol) separates "scalar" from "not yet split".
    let split_tol = cfg.cluster_tol.sqrt();
    if restricted.iter().all(|b| off_scalar(b, k) <= split_tol) {
        out.extend(span);
        return Ok(());
    }
    let half = F::from(0.5).expect("representable");
    for _ in 0..MAX_ATTEMPTS {
        let mut combo = vec![Complex::new(F::zero(), F::zero()); k * k];
        for b in &restricted {
            let c = Complex::new(gaussian::<F, _>(rng), gaussian::<F, _>(rng));
            for (acc, z) in combo.iter_mut().zip(b) {
                *acc = *acc + c * *z;
            }
        }
        let herm: Matrix<F> = (0..k * k)
            .map(|idx| {
                let (i, j) = (idx / k, idx % k);
                (combo[i * k + j] + combo[j * k + i].conj()) * half
            })
            .collect();
        let (values, vectors) = hermitian_eigen(&herm, k);
        let scale = values.iter().fold(F::one(), |m, v| m.max(v.abs()));
        let mut groups: Vec<Vec<usize>> = vec![vec![0]];
        for i in 1..k {
            if values[i] - values[i - 1] <= split_tol * scale {
                groups.last_mut().expect("nonempty").push(i);
            } else {
                groups.push(vec![i]);
            }
        }
        if groups.len() == 1 {
            continue;
        }
        for g in groups {
            let sub: Vec<Vec<Complex<F>>> = g
                .iter()
                .map(|&col| {
                    (0..d)
                        .map(|r| {
                            span.iter()
                                .enumerate()
                                .fold(Complex::new(F::zero(), F::zero()), |acc, (s, basis_vec)| {
                                    acc + basis_vec[r] * vectors[s * k + col]
                                })
                        })
                        .collect()
                })
                .collect();
            split_subspace(matrices, d, sub, cfg, rng, out)?;
        }
        return Ok(());
    }
    Err(Error::Diagonalization {
        worst_residual: to_f64(
            restricted
                .iter()
                .fold(F::zero(), |m, b| m.max(off_scalar(b, k))),
        ),
    })
}

/// Integer weights from sampled phases: `m = round(q·θ)` wrapped into
/// `(−q/2, q/2]`, with `|m| ≤ B` and `|q·θ − m| ≤ rounding_tol·q`.
pub fn extract_weights<F: Float>(
    phases: &[Vec<F>],
    space: &Arc<OrderedSpace>,
    q: u32,
    bound: i64,
    cfg: &ToleranceConfig<F>,
) -> Result<WeightMultiset> {
    if bound < 0 || 2 * bound >= i64::from(q) {
        return Err(Error::InvalidSampling { q, bound });
    }
    let qf = F::from(q).expect("representable");
    let limit = cfg.rounding_tol * qf;
    let q = i64::from(q);
    let mut out = WeightMultiset::new(space.clone());
    for row in phases {
        if row.len() != space.len() {
            return Err(Error::LengthMismatch {
                left: row.len(),
                right: space.len(),
            });
        }
        let mut v = Vec::with_capacity(row.len());
        for (point, &theta) in row.iter().enumerate() {
            let scaled = qf * theta;
            let nearest = scaled.round();
            let residual = (scaled - nearest).abs();
            let mut m = nearest.to_i64().unwrap_or(i64::MAX).rem_euclid(q);
            if 2 * m > q {
                m -= q;
            }
            if m.abs() > bound {
                return Err(Error::WeightOutOfBound { point, weight: m, bound });
            }
            if residual.is_nan() || residual > limit {
                return Err(Error::RoundingResidual {
                    point,
                    residual: to_f64(residual),
                    limit: to_f64(limit),
                });
            }
            v.push(m);
        }
        out.insert(v, 1)?;
    }
    Ok(out)
}

/// Check, diagonalize and round in one go.
pub fn recover_weights<F>(fam: &UnitaryFamily<F>, cfg: &ToleranceConfig<F>, seed: u64) -> Result<WeightMultiset>
where
    F: Float + FloatConst,
{
    let diag = simultaneous_diagonalize(fam, cfg, seed)?;
    extract_weights(&diag.phases, &fam.space, fam.q, fam.bound, cfg)
}

/// Haar-distributed random unitary via Gram–Schmidt on a complex Gaussian
/// matrix (applied twice for numerical orthogonality).
pub fn random_unitary<F: Float, R: Rng>(d: usize, rng: &mut R) -> Matrix<F> {
    let mut cols: Vec<Vec<Complex<F>>> = (0..d)
        .map(|_| (0..d).map(|_| Complex::new(gaussian(rng), gaussian(rng))).collect())
        .collect();
    for _ in 0..2 {
        for i in 0..d {
            for j in 0..i {
                let proj = inner(&cols[j], &cols[i]);
                let (head, tail) = cols.split_at_mut(i);
                for (a, b) in tail[0].iter_mut().zip(&head[j]) {
                    *a = *a - *b * proj;
                }
            }
            let norm = cols[i].iter().fold(F::zero(), |acc, z| acc + z.norm_sqr()).sqrt();
            cols[i].iter_mut().for_each(|z| *z = *z / norm);
        }
    }
    let mut m = vec![Complex::new(F::zero(), F::zero()); d * d];
    for (j, col) in cols.iter().enumerate() {
        for (i, z) in col.iter().enumerate() {
            m[i * d + j] = *z;
        }
    }
    m
}

/// A family realizing the weight multiset `w`: diagonal phases
/// `e^{2πi m_x/q}` conjugated by a random unitary.
pub fn plant_family<F, R>(w: &WeightMultiset, q: u32, bound: i64, rng: &mut R) -> Result<UnitaryFamily<F>>
where
    F: Float + FloatConst,
    R: Rng,
{
    let vectors: Vec<&Vec<i64>> = w.entries().flat_map(|(v, m)| std::iter::repeat_n(v, m)).collect();
    let d = vectors.len();
    let basis = random_unitary::<F, R>(d, rng);
    let basis_adj = adjoint(&basis, d);
    let qf = F::from(q).expect("representable");
    let matrices = (0..w.space().len())
        .map(|x| {
            let mut diag = vec![Complex::new(F::zero(), F::zero()); d * d];
            for (i, v) in vectors.iter().enumerate() {
                let angle = F::TAU() * F::from(v[x]).expect("representable") / qf;
                diag[i * d + i] = Complex::from_polar(F::one(), angle);
            }
            matmul(&matmul(&basis, &diag, d), &basis_adj, d)
        })
        .collect();
    UnitaryFamily::new(w.space().clone(), d, matrices, q, bound)
}

fn gaussian<F: Float, R: Rng>(rng: &mut R) -> F {
    let z: f64 = rng.sample(StandardNormal);
    F::from(z).expect("representable")
}

fn to_f64<F: Float>(x: F) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

fn inner<F: Float>(a: &[Complex<F>], b: &[Complex<F>]) -> Complex<F> {
    a.iter()
        .zip(b)
        .fold(Complex::new(F::zero(), F::zero()), |acc, (x, y)| acc + x.conj() * *y)
}

fn matvec<F: Float>(m: &[Complex<F>], v: &[Complex<F>], d: usize) -> Vec<Complex<F>> {
    (0..d).map(|i| inner_plain(&m[i * d..(i + 1) * d], v)).collect()
}

fn inner_plain<F: Float>(a: &[Complex<F>], b: &[Complex<F>]) -> Complex<F> {
    a.iter()
        .zip(b)
        .fold(Complex::new(F::zero(), F::zero()), |acc, (x, y)| acc + *x * *y)
}

fn matmul<F: Float>(a: &[Complex<F>], b: &[Complex<F>], d: usize) -> Matrix<F> {
    let mut out = vec![Complex::new(F::zero(), F::zero()); d * d];
    for i in 0..d {
        for k in 0..d {
            let aik = a[i * d + k];
            for j in 0..d {
                out[i * d + j] = out[i * d + j] + aik * b[k * d + j];
            }
        }
    }
    out
}

fn adjoint<F: Float>(a: &[Complex<F>], d: usize) -> Matrix<F> {
    (0..d * d).map(|idx| a[(idx % d) * d + idx / d].conj()).collect()
}

fn sub<F: Float>(a: &[Complex<F>], b: &[Complex<F>]) -> Matrix<F> {
    a.iter().zip(b).map(|(x, y)| *x - *y).collect()
}

/// `V* U V` for the orthonormal columns `span`.
fn compress<F: Float>(u: &[Complex<F>], span: &[Vec<Complex<F>>], d: usize) -> Matrix<F> {
    let k = span.len();
    let images: Vec<Vec<Complex<F>>> = span.iter().map(|v| matvec(u, v, d)).collect();
    let mut out = vec![Complex::new(F::zero(), F::zero()); k * k];
    for i in 0..k {
        for j in 0..k {
            out[i * k + j] = inner(&span[i], &images[j]);
        }
    }
    out
}

/// `‖B − (tr B / k) I‖_F`
fn off_scalar<F: Float>(b: &[Complex<F>], k: usize) -> F {
    let kf = F::from(k).expect("representable");
    let mean = (0..k).fold(Complex::new(F::zero(), F::zero()), |acc, i| acc + b[i * k + i]) / kf;
    let mut acc = F::zero();
    for i in 0..k {
        for j in 0..k {
            let target = if i == j { mean } else { Complex::new(F::zero(), F::zero()) };
            acc = acc + (b[i * k + j] - target).norm_sqr();
        }
    }
    acc.sqrt()
}

//! Dense complex operator kit for the conjugation and integration
//! identities, quarantined from the real statevector fast path.
//!
//! Only 2×2 and 4×4 matrices exist here: everything the identity checks
//! need is single-qubit operators, their pairwise Kronecker products, and
//! the two-qubit CNOT/CZ conjugations.
//!
//! Conventions: σ₀..σ₃ are I, X, Y, Z. The two-qubit CNOT is written with
//! the *target* as the first tensor factor, `σ₀⊗|0⟩⟨0| + σ₁⊗|1⟩⟨1|`, which
//! is the orientation the tree circuits use (observable qubit = target).

use num_complex::Complex;
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::real::Real;

/// Entrywise tolerance of the 16-case CNOT/CZ conjugation checks.
pub const CONJUGATION_TOL: f64 = 1e-12;
/// Tolerance of the single-parameter integration identities.
pub const INTEGRATION_TOL: f64 = 1e-10;

#[derive(Debug, Error, PartialEq)]
pub enum DenseKitError {
    #[error("dense kit supports dimensions 2 and 4 only, got {dim}")]
    BadDimension { dim: usize },
    #[error("matrix data has length {got}, expected {expected}")]
    BadLength { expected: usize, got: usize },
    #[error("Pauli index {index} outside 0..=3")]
    BadPauliIndex { index: usize },
    #[error("rotation axis {axis} outside 1..=3")]
    BadAxis { axis: usize },
}

pub type Result<T> = std::result::Result<T, DenseKitError>;

/// Square complex matrix of dimension 2 or 4, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CMat<T> {
    dim: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> CMat<T> {
    pub fn new(dim: usize, data: Vec<Complex<T>>) -> Result<Self> {
        if dim != 2 && dim != 4 {
            return Err(DenseKitError::BadDimension { dim });
        }
        if data.len() != dim * dim {
            return Err(DenseKitError::BadLength {
                expected: dim * dim,
                got: data.len(),
            });
        }
        Ok(CMat { dim, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn zeros(dim: usize) -> Self {
        CMat {
            dim,
            data: vec![Complex::new(T::zero(), T::zero()); dim * dim],
        }
    }

    #[inline]
    pub fn at(&self, row: usize, col: usize) -> Complex<T> {
        self.data[row * self.dim + col]
    }

    #[inline]
    fn set(&mut self, row: usize, col: usize, v: Complex<T>) {
        self.data[row * self.dim + col] = v;
    }

    /// σ_j for j ∈ {0, 1, 2, 3} = {I, X, Y, Z}.
    pub fn pauli(index: usize) -> Result<Self> {
        let z = Complex::new(T::zero(), T::zero());
        let one = Complex::new(T::one(), T::zero());
        let i = Complex::new(T::zero(), T::one());
        let data = match index {
            0 => vec![one, z, z, one],
            1 => vec![z, one, one, z],
            2 => vec![z, -i, i, z],
            3 => vec![one, z, z, -one],
            _ => return Err(DenseKitError::BadPauliIndex { index }),
        };
        CMat::new(2, data)
    }

    /// e^{−iθσ_axis} = cos θ·I − i sin θ·σ_axis.
    pub fn rotation(axis: usize, theta: T) -> Result<Self> {
        if !(1..=3).contains(&axis) {
            return Err(DenseKitError::BadAxis { axis });
        }
        let (sin, cos) = theta.sin_cos();
        let identity = Self::pauli(0)?.scale(Complex::new(cos, T::zero()));
        let gen = Self::pauli(axis)?.scale(Complex::new(T::zero(), -sin));
        Ok(identity.add(&gen))
    }

    /// ∂/∂θ of [`Self::rotation`]: −sin θ·I − i cos θ·σ_axis.
    pub fn rotation_deriv(axis: usize, theta: T) -> Result<Self> {
        if !(1..=3).contains(&axis) {
            return Err(DenseKitError::BadAxis { axis });
        }
        let (sin, cos) = theta.sin_cos();
        let identity = Self::pauli(0)?.scale(Complex::new(-sin, T::zero()));
        let gen = Self::pauli(axis)?.scale(Complex::new(T::zero(), -cos));
        Ok(identity.add(&gen))
    }

    /// Target-first CNOT: σ₀⊗|0⟩⟨0| + σ₁⊗|1⟩⟨1|.
    pub fn cnot() -> Self {
        let p0 = projector(false);
        let p1 = projector(true);
        let a = CMat::<T>::pauli(0).unwrap().kron(&p0);
        let b = CMat::<T>::pauli(1).unwrap().kron(&p1);
        a.add(&b)
    }

    /// CZ: σ₀⊗|0⟩⟨0| + σ₃⊗|1⟩⟨1| (symmetric in its qubits).
    pub fn cz() -> Self {
        let p0 = projector(false);
        let p1 = projector(true);
        let a = CMat::<T>::pauli(0).unwrap().kron(&p0);
        let b = CMat::<T>::pauli(3).unwrap().kron(&p1);
        a.add(&b)
    }

    /// Random 2×2 with standard-normal real and imaginary parts.
    pub fn random_2x2<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let data = (0..4)
            .map(|_| Complex::new(T::standard_normal(rng), T::standard_normal(rng)))
            .collect();
        CMat { dim: 2, data }
    }

    pub fn kron(&self, other: &Self) -> Self {
        let dim = self.dim * other.dim;
        debug_assert!(dim == 4, "kit only forms 2⊗2 products");
        let mut out = CMat::zeros(dim);
        for r1 in 0..self.dim {
            for c1 in 0..self.dim {
                for r2 in 0..other.dim {
                    for c2 in 0..other.dim {
                        out.set(
                            r1 * other.dim + r2,
                            c1 * other.dim + c2,
                            self.at(r1, c1) * other.at(r2, c2),
                        );
                    }
                }
            }
        }
        out
    }

    pub fn matmul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dim, other.dim);
        let mut out = CMat::zeros(self.dim);
        for r in 0..self.dim {
            for c in 0..self.dim {
                let mut acc = Complex::new(T::zero(), T::zero());
                for k in 0..self.dim {
                    acc += self.at(r, k) * other.at(k, c);
                }
                out.set(r, c, acc);
            }
        }
        out
    }

    pub fn dagger(&self) -> Self {
        let mut out = CMat::zeros(self.dim);
        for r in 0..self.dim {
            for c in 0..self.dim {
                out.set(r, c, self.at(c, r).conj());
            }
        }
        out
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.dim).fold(Complex::new(T::zero(), T::zero()), |acc, i| {
            acc + self.at(i, i)
        })
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dim, other.dim);
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| a + b)
            .collect();
        CMat {
            dim: self.dim,
            data,
        }
    }

    pub fn scale(&self, factor: Complex<T>) -> Self {
        let data = self.data.iter().map(|&a| a * factor).collect();
        CMat {
            dim: self.dim,
            data,
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| (a - b).norm())
            .fold(T::zero(), T::max)
    }
}

fn projector<T: Real>(one: bool) -> CMat<T> {
    let z = Complex::new(T::zero(), T::zero());
    let unit = Complex::new(T::one(), T::zero());
    let data = if one {
        vec![z, z, z, unit]
    } else {
        vec![unit, z, z, z]
    };
    CMat { dim: 2, data }
}

fn delta(a: usize, b: usize) -> f64 {
    if a == b {
        1.0
    } else {
        0.0
    }
}

/// One (j, k) conjugation case.
#[derive(Clone, Debug, Serialize)]
pub struct ConjugationCase<T> {
    pub j: usize,
    pub k: usize,
    pub residual: T,
    pub pass: bool,
}

/// All 16 Pauli-pair conjugation cases for one entangling gate.
#[derive(Clone, Debug, Serialize)]
pub struct ConjugationReport<T> {
    pub gate: &'static str,
    pub cases: Vec<ConjugationCase<T>>,
    pub max_residual: T,
    pub all_pass: bool,
}

fn conjugation_report<T: Real>(
    gate_name: &'static str,
    gate: CMat<T>,
    rhs: impl Fn(usize, usize) -> CMat<T>,
) -> ConjugationReport<T> {
    let dag = gate.dagger();
    let mut cases = Vec::with_capacity(16);
    let mut max_residual = T::zero();
    for j in 0..4 {
        for k in 0..4 {
            let sj = CMat::<T>::pauli(j).unwrap();
            let sk = CMat::<T>::pauli(k).unwrap();
            let lhs = gate.matmul(&sj.kron(&sk)).matmul(&dag);
            let residual = lhs.max_abs_diff(&rhs(j, k));
            max_residual = max_residual.max(residual);
            cases.push(ConjugationCase {
                j,
                k,
                residual,
                pass: residual <= T::of(CONJUGATION_TOL),
            });
        }
    }
    ConjugationReport {
        gate: gate_name,
        all_pass: cases.iter().all(|c| c.pass),
        cases,
        max_residual,
    }
}

/// CNOT(σ_j⊗σ_k)CNOT† decomposes over Kronecker deltas:
/// the target factor picks up σ₁ when j ∈ {2,3} fails to commute through,
/// the control factor picks up σ₃, with a sign on the doubly-flipped term.
pub fn check_cnot_conjugation<T: Real>() -> ConjugationReport<T> {
    conjugation_report("cnot", CMat::<T>::cnot(), |j, k| {
        let sj = CMat::<T>::pauli(j).unwrap();
        let sk = CMat::<T>::pauli(k).unwrap();
        let s1 = CMat::<T>::pauli(1).unwrap();
        let s3 = CMat::<T>::pauli(3).unwrap();
        let j01 = T::of(delta(j, 0) + delta(j, 1));
        let j23 = T::of(delta(j, 2) + delta(j, 3));
        let k03 = T::of(delta(k, 0) + delta(k, 3));
        let k12 = T::of(delta(k, 1) + delta(k, 2));
        let t1 = sj.kron(&sk).scale(Complex::new(j01 * k03, T::zero()));
        let t2 = sj
            .matmul(&s1)
            .kron(&sk)
            .scale(Complex::new(j01 * k12, T::zero()));
        let t3 = sj
            .kron(&sk.matmul(&s3))
            .scale(Complex::new(j23 * k03, T::zero()));
        let t4 = sj
            .matmul(&s1)
            .kron(&sk.matmul(&s3))
            .scale(Complex::new(-(j23 * k12), T::zero()));
        t1.add(&t2).add(&t3).add(&t4)
    })
}

/// CZ(σ_j⊗σ_k)CZ†: as for CNOT with the roles of σ₁ and σ₃ exchanged on
/// the first factor and the {0,3} / {1,2} index classes swapped.
pub fn check_cz_conjugation<T: Real>() -> ConjugationReport<T> {
    conjugation_report("cz", CMat::<T>::cz(), |j, k| {
        let sj = CMat::<T>::pauli(j).unwrap();
        let sk = CMat::<T>::pauli(k).unwrap();
        let s3 = CMat::<T>::pauli(3).unwrap();
        let j03 = T::of(delta(j, 0) + delta(j, 3));
        let j12 = T::of(delta(j, 1) + delta(j, 2));
        let k03 = T::of(delta(k, 0) + delta(k, 3));
        let k12 = T::of(delta(k, 1) + delta(k, 2));
        let t1 = sj.kron(&sk).scale(Complex::new(j03 * k03, T::zero()));
        let t2 = sj
            .matmul(&s3)
            .kron(&sk)
            .scale(Complex::new(j03 * k12, T::zero()));
        let t3 = sj
            .kron(&sk.matmul(&s3))
            .scale(Complex::new(j12 * k03, T::zero()));
        let t4 = sj
            .matmul(&s3)
            .kron(&sk.matmul(&s3))
            .scale(Complex::new(-(j12 * k12), T::zero()));
        t1.add(&t2).add(&t3).add(&t4)
    })
}

/// One (j, k, A, C) instance of the two single-parameter integration
/// identities: the plain `Tr[WAW†B]Tr[WCW†D]` average and its derivative
/// variant with G = ∂W/∂θ in place of the left W factors.
#[derive(Clone, Debug, Serialize)]
pub struct IntegrationCase<T> {
    pub pauli_j: usize,
    pub axis_k: usize,
    pub residual_plain: T,
    pub residual_deriv: T,
    pub pass: bool,
}

/// Average a θ-integrand exactly: products of two degree-2 trigonometric
/// polynomials have degree 4, so 5 equispaced nodes integrate them exactly.
fn average_over_theta<T: Real>(mut f: impl FnMut(T) -> Complex<T>) -> Complex<T> {
    let nodes = 5;
    let mut acc = Complex::new(T::zero(), T::zero());
    for i in 0..nodes {
        let theta = T::of(2.0) * T::PI() * T::of(i as f64) / T::of(nodes as f64);
        acc += f(theta);
    }
    acc.scale(T::one() / T::of(nodes as f64))
}

/// Check both integration identities for Pauli index `pauli_j` (B = D =
/// σ_j), rotation axis `axis_k`, and arbitrary operators A, C.
pub fn check_integration_identity<T: Real>(
    pauli_j: usize,
    axis_k: usize,
    a: &CMat<T>,
    c: &CMat<T>,
) -> Result<IntegrationCase<T>> {
    if pauli_j > 3 {
        return Err(DenseKitError::BadPauliIndex { index: pauli_j });
    }
    if !(1..=3).contains(&axis_k) {
        return Err(DenseKitError::BadAxis { axis: axis_k });
    }
    let b = CMat::<T>::pauli(pauli_j)?;
    let sk = CMat::<T>::pauli(axis_k)?;

    let lhs_plain = average_over_theta(|theta| {
        let w = CMat::<T>::rotation(axis_k, theta).unwrap();
        let wd = w.dagger();
        let t1 = w.matmul(a).matmul(&wd).matmul(&b).trace();
        let t2 = w.matmul(c).matmul(&wd).matmul(&b).trace();
        t1 * t2
    });
    let lhs_deriv = average_over_theta(|theta| {
        let w = CMat::<T>::rotation(axis_k, theta).unwrap();
        let g = CMat::<T>::rotation_deriv(axis_k, theta).unwrap();
        let wd = w.dagger();
        let t1 = g.matmul(a).matmul(&wd).matmul(&b).trace();
        let t2 = g.matmul(c).matmul(&wd).matmul(&b).trace();
        t1 * t2
    });

    let tr_ab = a.matmul(&b).trace();
    let tr_cd = c.matmul(&b).trace();
    let tr_abk = a.matmul(&b).matmul(&sk).trace();
    let tr_cdk = c.matmul(&b).matmul(&sk).trace();
    let half = T::of(0.5);
    let dj = T::of(delta(pauli_j, 0) + delta(pauli_j, axis_k)) * half;
    let rhs_plain = tr_ab * tr_cd.scale(half + dj) + tr_abk * tr_cdk.scale(dj - half);
    let rhs_deriv = tr_ab * tr_cd.scale(half - dj) + tr_abk * tr_cdk.scale(-half - dj);

    let residual_plain = (lhs_plain - rhs_plain).norm();
    let residual_deriv = (lhs_deriv - rhs_deriv).norm();
    Ok(IntegrationCase {
        pauli_j,
        axis_k,
        residual_plain,
        residual_deriv,
        pass: residual_plain <= T::of(INTEGRATION_TOL) && residual_deriv <= T::of(INTEGRATION_TOL),
    })
}

/// All 12 (j, k) combinations × `trials` random operator pairs.
#[derive(Clone, Debug, Serialize)]
pub struct IntegrationReport<T> {
    pub seed: u64,
    pub trials: usize,
    pub cases: Vec<IntegrationCase<T>>,
    pub max_residual: T,
    pub all_pass: bool,
}

pub fn check_integration_identities<T: Real>(trials: usize, seed: u64) -> IntegrationReport<T> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut cases = Vec::with_capacity(12 * trials);
    let mut max_residual = T::zero();
    for _ in 0..trials {
        let a = CMat::<T>::random_2x2(&mut rng);
        let c = CMat::<T>::random_2x2(&mut rng);
        for pauli_j in 0..4 {
            for axis_k in 1..=3 {
                let case =
                    check_integration_identity(pauli_j, axis_k, &a, &c).expect("indices in range");
                max_residual = max_residual.max(case.residual_plain.max(case.residual_deriv));
                cases.push(case);
            }
        }
    }
    IntegrationReport {
        seed,
        trials,
        all_pass: cases.iter().all(|c| c.pass),
        cases,
        max_residual,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn pauli_products_have_expected_traces() {
        let x = CMat::<f64>::pauli(1).unwrap();
        let z = CMat::<f64>::pauli(3).unwrap();
        assert_eq!(x.matmul(&x).trace().re, 2.0);
        assert_eq!(x.matmul(&z).trace().re, 0.0);
    }

    #[test]
    fn cnot_conjugation_collapsed_cases() {
        // (j,k) = (3,0) → Z⊗Z and (1,0) → X⊗I
        let report = check_cnot_conjugation::<f64>();
        assert!(report.all_pass, "max residual {}", report.max_residual);
        let z = CMat::<f64>::pauli(3).unwrap();
        let x = CMat::<f64>::pauli(1).unwrap();
        let id = CMat::<f64>::pauli(0).unwrap();
        let gate = CMat::<f64>::cnot();
        let lhs = gate.matmul(&z.kron(&id)).matmul(&gate.dagger());
        assert!(lhs.max_abs_diff(&z.kron(&z)) < 1e-14);
        let lhs = gate.matmul(&x.kron(&id)).matmul(&gate.dagger());
        assert!(lhs.max_abs_diff(&x.kron(&id)) < 1e-14);
    }

    #[test]
    fn cz_conjugation_collapsed_cases() {
        // (j,k) = (1,0) → X⊗Z and (3,0) → Z⊗I
        let report = check_cz_conjugation::<f64>();
        assert!(report.all_pass, "max residual {}", report.max_residual);
        let z = CMat::<f64>::pauli(3).unwrap();
        let x = CMat::<f64>::pauli(1).unwrap();
        let id = CMat::<f64>::pauli(0).unwrap();
        let gate = CMat::<f64>::cz();
        let lhs = gate.matmul(&x.kron(&id)).matmul(&gate.dagger());
        assert!(lhs.max_abs_diff(&x.kron(&z)) < 1e-14);
        let lhs = gate.matmul(&z.kron(&id)).matmul(&gate.dagger());
        assert!(lhs.max_abs_diff(&z.kron(&id)) < 1e-14);
    }

    #[test]
    fn integration_identity_analytic_case() {
        // A = C = σ₃, j = 3, k = 2: both sides evaluate to 2.
        let s3 = CMat::<f64>::pauli(3).unwrap();
        let case = check_integration_identity(3, 2, &s3, &s3).unwrap();
        assert!(case.pass);
        let lhs = average_over_theta(|theta: f64| {
            let w = CMat::<f64>::rotation(2, theta).unwrap();
            let t = w.matmul(&s3).matmul(&w.dagger()).matmul(&s3).trace();
            t * t
        });
        assert!((lhs.re - 2.0).abs() < 1e-12);
        assert!(lhs.im.abs() < 1e-14);
    }

    #[test]
    fn identity_observable_degenerates_to_plain_traces() {
        // j = 0: W cancels in the trace, leaving Tr[A]Tr[C].
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = CMat::<f64>::random_2x2(&mut rng);
        let c = CMat::<f64>::random_2x2(&mut rng);
        for axis in 1..=3 {
            let case = check_integration_identity(0, axis, &a, &c).unwrap();
            assert!(case.pass, "axis {axis}");
            let lhs = average_over_theta(|theta: f64| {
                let w = CMat::<f64>::rotation(axis, theta).unwrap();
                let wd = w.dagger();
                w.matmul(&a).matmul(&wd).trace() * w.matmul(&c).matmul(&wd).trace()
            });
            let want = a.trace() * c.trace();
            assert!((lhs - want).norm() < 1e-12);
        }
    }

    #[test]
    fn deriv_variant_first_coefficient_vanishes_on_axis() {
        // j = k: the plain-trace coefficient (1 − δ_j0 − δ_jk)/2 is 0, so
        // the derivative variant reduces to the σ_k-trace term alone.
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let a = CMat::<f64>::random_2x2(&mut rng);
        let c = CMat::<f64>::random_2x2(&mut rng);
        let case = check_integration_identity(2, 2, &a, &c).unwrap();
        assert!(case.pass);
    }

    #[test]
    fn full_random_sweep_passes() {
        let report = check_integration_identities::<f64>(20, 42);
        assert_eq!(report.cases.len(), 240);
        assert!(report.all_pass, "max residual {}", report.max_residual);
    }

    #[test]
    fn dimension_is_restricted() {
        assert_eq!(
            CMat::<f64>::new(3, vec![Complex::new(0.0, 0.0); 9]).unwrap_err(),
            DenseKitError::BadDimension { dim: 3 }
        );
    }
}

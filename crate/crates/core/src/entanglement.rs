//! Two-qubit concurrence and Bell-CHSH tools.
//!
//! Concurrence is available in three forms: the spin-flip overlap for pure
//! states, the Wootters formula for mixed states, and `|⟨ψ, Jψ⟩|` for an
//! arbitrary antilinear `J` in any dimension. The last one agrees with the
//! first two only on Schmidt-aligned states `α|00⟩ + β|11⟩` when `J` is the
//! detector-swap conjugation; for `α|00⟩ + β|01⟩` it returns `|β|²` although
//! the state is a product.
//!
//! Dichotomic observables live in the z-x plane: `A(θ) = cos θ·σᶻ + sin θ·σˣ`.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    self, c, kron, psd_sqrt_with, sigma_x, sigma_y, sigma_z, AntilinearOperator, ComplexMatrix,
    ComplexVector,
};
use crate::tolerance::Tolerances;

/// Normalization slack accepted for state vectors.
pub const NORM_TOLERANCE: f64 = 1e-12;

/// Pure state in the basis `|00⟩, |01⟩, |10⟩, |11⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitState {
    amplitudes: ComplexVector,
}

impl TwoQubitState {
    pub fn new(amplitudes: ComplexVector) -> Result<Self> {
        if amplitudes.len() != 4 {
            return Err(Error::DimensionMismatch { expected: 4, found: amplitudes.len() });
        }
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { amplitudes })
    }

    /// Rescales a nonzero vector to unit norm.
    pub fn normalized(amplitudes: ComplexVector) -> Result<Self> {
        let norm = amplitudes.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized { norm });
        }
        Self::new(amplitudes / c(norm, 0.0))
    }

    pub fn from_amplitudes(a: [Complex64; 4]) -> Result<Self> {
        Self::new(ComplexVector::from_column_slice(&a))
    }

    /// `α|00⟩ + β|11⟩`.
    pub fn schmidt(alpha: Complex64, beta: Complex64) -> Result<Self> {
        Self::from_amplitudes([alpha, linalg::ZERO, linalg::ZERO, beta])
    }

    /// `(|00⟩ + |11⟩)/√2`.
    pub fn bell() -> Self {
        let h = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self { amplitudes: ComplexVector::from_column_slice(&[h, linalg::ZERO, linalg::ZERO, h]) }
    }

    pub fn amplitudes(&self) -> &ComplexVector {
        &self.amplitudes
    }

    pub fn density(&self) -> TwoQubitDensity {
        TwoQubitDensity { rho: &self.amplitudes * self.amplitudes.adjoint() }
    }
}

/// Two-qubit density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitDensity {
    rho: ComplexMatrix,
}

impl TwoQubitDensity {
    pub fn new(rho: ComplexMatrix) -> Result<Self> {
        Self::new_with(rho, &Tolerances::default())
    }

    pub fn new_with(rho: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        if rho.nrows() != 4 || rho.ncols() != 4 {
            return Err(Error::InvalidDensity(format!("expected 4x4, found {}x{}", rho.nrows(), rho.ncols())));
        }
        let residual = linalg::hermiticity_residual(&rho);
        if residual > tol.hermitian {
            return Err(Error::InvalidDensity(format!("not Hermitian (residual {residual:e})")));
        }
        let trace = rho.trace();
        if (trace - linalg::ONE).norm() > tol.hermitian {
            return Err(Error::InvalidDensity(format!("trace {trace} differs from 1")));
        }
        let min = linalg::hermitian_eig_with(&rho, tol)?.min();
        if min < -tol.psd {
            return Err(Error::InvalidDensity(format!("negative eigenvalue {min:e}")));
        }
        Ok(Self { rho })
    }

    pub fn maximally_mixed() -> Self {
        Self { rho: linalg::identity(4) * c(0.25, 0.0) }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.rho
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.rho
    }
}

/// Four CHSH angles in radians.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BellSettings {
    pub alpha: f64,
    pub beta: f64,
    pub alpha_prime: f64,
    pub beta_prime: f64,
}

impl BellSettings {
    pub fn new(alpha: f64, beta: f64, alpha_prime: f64, beta_prime: f64) -> Self {
        Self { alpha, beta, alpha_prime, beta_prime }
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.alpha, self.beta, self.alpha_prime, self.beta_prime]
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }

    /// `cos(α+β) + cos(α′+β) + cos(α+β′) − cos(α′+β′)`.
    pub fn angular_sum(&self) -> f64 {
        (self.alpha + self.beta).cos() + (self.alpha_prime + self.beta).cos() + (self.alpha + self.beta_prime).cos()
            - (self.alpha_prime + self.beta_prime).cos()
    }
}

/// Concurrence in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct ConcurrenceValue(f64);

impl ConcurrenceValue {
    /// Clamps roundoff excursions below 0 or above 1.
    pub fn clamped(value: f64) -> Self {
        Self(value.clamp(0.0, 1.0))
    }

    pub fn new(value: f64) -> Result<Self> {
        if !(-1e-12..=1.0 + 1e-12).contains(&value) {
            return Err(Error::InvalidParameter(format!("concurrence {value} outside [0, 1]")));
        }
        Ok(Self::clamped(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

fn sigma_yy() -> ComplexMatrix {
    kron(&sigma_y(), &sigma_y())
}

/// `(σʸ⊗σʸ)·conj(ψ)`.
pub fn spin_flip_pure(psi: &TwoQubitState) -> TwoQubitState {
    TwoQubitState { amplitudes: sigma_yy() * linalg::conj_vector(&psi.amplitudes) }
}

/// `|⟨ψ̃, ψ⟩|`.
pub fn concurrence_pure(psi: &TwoQubitState) -> ConcurrenceValue {
    let flipped = spin_flip_pure(psi);
    ConcurrenceValue::clamped(linalg::inner(&flipped.amplitudes, &psi.amplitudes).norm())
}

pub fn wootters_concurrence(rho: &TwoQubitDensity) -> Result<ConcurrenceValue> {
    wootters_concurrence_with(rho, &Tolerances::default())
}

/// Eigenvalues of `ρ` below this multiple of the largest one are treated as
/// eigensolver roundoff.
pub const RANK_CUTOFF: f64 = 64.0 * f64::EPSILON;

/// `max(0, √λ₁ − √λ₂ − √λ₃ − √λ₄)` with `λ` the eigenvalues of
/// `R = √ρ·ρ̃·√ρ`, `ρ̃ = (σʸ⊗σʸ)·conj(ρ)·(σʸ⊗σʸ)`.
///
/// The `√λ_i` are computed directly as the singular values of `Wᵀ(σʸ⊗σʸ)W`
/// for a factor `ρ = W·W†`. Taking square roots of the eigenvalues of `R`
/// instead turns `1e-17` roundoff into `3e-9` errors on pure states.
pub fn wootters_concurrence_with(rho: &TwoQubitDensity, tol: &Tolerances) -> Result<ConcurrenceValue> {
    let spec = linalg::hermitian_eig_with(&rho.rho, tol)?;
    let cut = RANK_CUTOFF * spec.max();
    let kept: Vec<usize> = (0..4).filter(|&k| spec.eigenvalues[k] > cut).collect();
    let w = ComplexMatrix::from_fn(4, kept.len(), |i, j| {
        let k = kept[j];
        spec.eigenvectors[(i, k)] * spec.eigenvalues[k].sqrt()
    });
    let n = w.transpose() * sigma_yy() * &w;
    let mut roots = linalg::singular_values(&n);
    roots.resize(4, 0.0);
    let value = roots[0] - roots[1..].iter().sum::<f64>();
    Ok(ConcurrenceValue::clamped(value))
}

/// The textbook route through `R = √ρ·ρ̃·√ρ` and its eigenvalues, kept as an
/// independent cross-check.
pub fn wootters_concurrence_via_r(rho: &TwoQubitDensity, tol: &Tolerances) -> Result<ConcurrenceValue> {
    let yy = sigma_yy();
    let tilde = &yy * linalg::conj_matrix(&rho.rho) * &yy;
    let sqrt_rho = psd_sqrt_with(&rho.rho, tol)?;
    let r = &sqrt_rho * tilde * &sqrt_rho;
    let r = (&r + r.adjoint()) * c(0.5, 0.0);
    let spec = linalg::hermitian_eig_with(&r, tol)?;
    let roots: Vec<f64> = spec.eigenvalues.iter().map(|l| l.max(0.0).sqrt()).collect();
    Ok(ConcurrenceValue::clamped(roots[0] - roots[1..].iter().sum::<f64>()))
}

/// `|⟨ψ, Jψ⟩|` for a normalized `ψ` of any dimension.
pub fn modular_concurrence(psi: &ComplexVector, j: &AntilinearOperator) -> Result<ConcurrenceValue> {
    if psi.len() != j.dim() {
        return Err(Error::DimensionMismatch { expected: j.dim(), found: psi.len() });
    }
    let norm = psi.norm();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::NotNormalized { norm });
    }
    Ok(ConcurrenceValue::clamped(j.expectation(psi)?.norm()))
}

/// `A(θ) = cos θ·σᶻ + sin θ·σˣ`.
pub fn dichotomic(theta: f64) -> ComplexMatrix {
    sigma_z() * c(theta.cos(), 0.0) + sigma_x() * c(theta.sin(), 0.0)
}

/// `A(α)⊗B(β) + A(α)⊗B(β′) + A(α′)⊗B(β) − A(α′)⊗B(β′)`.
pub fn chsh_operator(s: &BellSettings) -> ComplexMatrix {
    let (a, ap) = (dichotomic(s.alpha), dichotomic(s.alpha_prime));
    let (b, bp) = (dichotomic(s.beta), dichotomic(s.beta_prime));
    kron(&a, &b) + kron(&a, &bp) + kron(&ap, &b) - kron(&ap, &bp)
}

/// States that can report expectation values of 4×4 observables.
pub trait TwoQubitExpectation {
    fn expectation(&self, op: &ComplexMatrix) -> Complex64;
}

impl TwoQubitExpectation for TwoQubitState {
    fn expectation(&self, op: &ComplexMatrix) -> Complex64 {
        linalg::inner(&self.amplitudes, &(op * &self.amplitudes))
    }
}

impl TwoQubitExpectation for TwoQubitDensity {
    fn expectation(&self, op: &ComplexMatrix) -> Complex64 {
        (&self.rho * op).trace()
    }
}

/// Largest imaginary part tolerated in a Hermitian expectation value.
pub const IMAGINARY_RESIDUAL: f64 = 1e-10;

pub fn chsh_expectation<S: TwoQubitExpectation>(state: &S, settings: &BellSettings) -> Result<f64> {
    let value = state.expectation(&chsh_operator(settings));
    if value.im.abs() > IMAGINARY_RESIDUAL {
        return Err(Error::NotHermitian { residual: value.im.abs() });
    }
    Ok(value.re)
}

/// `2·√(1 + C²)`.
pub fn max_violation_from_concurrence(c: ConcurrenceValue) -> f64 {
    2.0 * (1.0 + c.value() * c.value()).sqrt()
}

/// Correlations `T[i][j] = ⟨σ_i ⊗ σ_j⟩` for `i, j ∈ {z, x}`.
///
/// `⟨A(α)⊗B(β)⟩ = Σ_ij u_i(α)·u_j(β)·T[i][j]` with `u(θ) = (cos θ, sin θ)`, which
/// makes the CHSH objective cheap enough for a dense grid.
pub fn zx_correlations<S: TwoQubitExpectation>(state: &S) -> [[f64; 2]; 2] {
    let paulis = [sigma_z(), sigma_x()];
    let mut t = [[0.0; 2]; 2];
    for (i, p) in paulis.iter().enumerate() {
        for (j, q) in paulis.iter().enumerate() {
            t[i][j] = state.expectation(&kron(p, q)).re;
        }
    }
    t
}

fn correlation(t: &[[f64; 2]; 2], a: f64, b: f64) -> f64 {
    let (u, v) = ([a.cos(), a.sin()], [b.cos(), b.sin()]);
    (0..2).map(|i| (0..2).map(|j| u[i] * v[j] * t[i][j]).sum::<f64>()).sum()
}

fn chsh_from_correlations(t: &[[f64; 2]; 2], s: &BellSettings) -> f64 {
    correlation(t, s.alpha, s.beta) + correlation(t, s.alpha, s.beta_prime) + correlation(t, s.alpha_prime, s.beta)
        - correlation(t, s.alpha_prime, s.beta_prime)
}

pub const DEFAULT_GRID_STEPS: usize = 24;
pub const DEFAULT_REFINE_ITERS: usize = 60;

const GOLDEN_ITERS: usize = 80;

/// Maximizes a smooth function of four angles: a full `steps⁴` grid over
/// `[−π, π)` followed by `refine_iters` sweeps of coordinate-wise golden
/// section search on a window of half-width `π/2`.
///
/// The grid keeps the lexicographically smallest maximizer on ties, and a
/// coordinate step is accepted only if it strictly improves the value, so the
/// result is deterministic and never below the best grid point.
pub fn maximize_settings<F: Fn(&BellSettings) -> f64>(
    objective: F,
    grid_steps: usize,
    refine_iters: usize,
) -> (BellSettings, f64) {
    let steps = grid_steps.max(1);
    let angle = |k: usize| -PI + 2.0 * PI * k as f64 / steps as f64;
    let mut best = BellSettings::new(angle(0), angle(0), angle(0), angle(0));
    let mut best_value = objective(&best);
    for i in 0..steps {
        for j in 0..steps {
            for k in 0..steps {
                for l in 0..steps {
                    let s = BellSettings::new(angle(i), angle(j), angle(k), angle(l));
                    let v = objective(&s);
                    if v > best_value {
                        best = s;
                        best_value = v;
                    }
                }
            }
        }
    }

    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..refine_iters {
        let before = best_value;
        for coord in 0..4 {
            let base = best.to_array();
            let eval = |x: f64| {
                let mut a = base;
                a[coord] = x;
                objective(&BellSettings::from_array(a))
            };
            let (mut lo, mut hi) = (base[coord] - PI / 2.0, base[coord] + PI / 2.0);
            let mut x1 = hi - inv_phi * (hi - lo);
            let mut x2 = lo + inv_phi * (hi - lo);
            let (mut f1, mut f2) = (eval(x1), eval(x2));
            for _ in 0..GOLDEN_ITERS {
                if f1 < f2 {
                    lo = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = lo + inv_phi * (hi - lo);
                    f2 = eval(x2);
                } else {
                    hi = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = hi - inv_phi * (hi - lo);
                    f1 = eval(x1);
                }
            }
            let x = 0.5 * (lo + hi);
            let v = eval(x);
            if v > best_value {
                let mut a = base;
                a[coord] = x;
                best = BellSettings::from_array(a);
                best_value = v;
            }
        }
        if best_value - before <= f64::EPSILON * best_value.abs() {
            break;
        }
    }
    (best, best_value)
}

/// Maximal CHSH value of `state` over z-x plane settings.
pub fn maximize_chsh<S: TwoQubitExpectation>(state: &S, grid_steps: usize, refine_iters: usize) -> (BellSettings, f64) {
    let t = zx_correlations(state);
    maximize_settings(|s| chsh_from_correlations(&t, s), grid_steps, refine_iters)
}

/// Tsirelson's bound `2√2`.
pub const TSIRELSON: f64 = 2.0 * SQRT_2;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{ONE, ZERO};
    use crate::random;
    use crate::udw::j_ab;

    fn basis(index: usize) -> TwoQubitState {
        let mut a = [ZERO; 4];
        a[index] = ONE;
        TwoQubitState::from_amplitudes(a).unwrap()
    }

    fn local_unitary(rng: &mut random::Rng64) -> ComplexMatrix {
        kron(&random::unitary(rng, 2), &random::unitary(rng, 2))
    }

    #[test]
    fn state_validation() {
        assert!(matches!(
            TwoQubitState::new(ComplexVector::from_element(4, ONE)),
            Err(Error::NotNormalized { .. })
        ));
        assert!(matches!(TwoQubitState::new(ComplexVector::zeros(3)), Err(Error::DimensionMismatch { .. })));
        assert!(TwoQubitDensity::new(linalg::identity(4)).is_err());
        assert!(TwoQubitDensity::new(linalg::diag(&[c(1.5, 0.0), c(-0.5, 0.0), ZERO, ZERO])).is_err());
        assert!(TwoQubitDensity::new(sigma_x()).is_err());
    }

    #[test]
    fn spin_flip_examples() {
        let flipped = spin_flip_pure(&basis(0));
        assert!((flipped.amplitudes() - basis(3).amplitudes() * c(-1.0, 0.0)).norm() < 1e-15);
        let bell = TwoQubitState::bell();
        let flipped = spin_flip_pure(&bell);
        assert!((flipped.amplitudes() + bell.amplitudes()).norm() < 1e-15);
    }

    #[test]
    fn double_spin_flip_is_identity_up_to_phase() {
        let mut rng = random::seeded(1);
        for _ in 0..20 {
            let psi = TwoQubitState::new(random::state(&mut rng, 4)).unwrap();
            let twice = spin_flip_pure(&spin_flip_pure(&psi));
            let overlap = linalg::inner(psi.amplitudes(), twice.amplitudes());
            assert!((overlap.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn pure_concurrence_examples() {
        assert!((concurrence_pure(&TwoQubitState::bell()).value() - 1.0).abs() < 1e-15);
        assert_eq!(concurrence_pure(&basis(1)).value(), 0.0);
        let psi = TwoQubitState::schmidt(c(0.6, 0.0), c(0.8, 0.0)).unwrap();
        assert!((concurrence_pure(&psi).value() - 0.96).abs() < 1e-12);
    }

    #[test]
    fn wootters_examples() {
        let bell = TwoQubitState::bell().density();
        assert!((wootters_concurrence(&bell).unwrap().value() - 1.0).abs() < 1e-9);
        assert_eq!(wootters_concurrence(&TwoQubitDensity::maximally_mixed()).unwrap().value(), 0.0);
    }

    #[test]
    fn wootters_matches_pure_formula_on_random_states() {
        let mut rng = random::seeded(2);
        for _ in 0..50 {
            let psi = TwoQubitState::new(random::state(&mut rng, 4)).unwrap();
            let pure = concurrence_pure(&psi).value();
            let mixed = wootters_concurrence(&psi.density()).unwrap().value();
            assert!((pure - mixed).abs() < 1e-9, "{pure} vs {mixed}");
        }
    }

    #[test]
    fn wootters_is_local_unitary_invariant() {
        let mut rng = random::seeded(3);
        for rank in 1..=4 {
            let rho = TwoQubitDensity::new(random::density(&mut rng, 4, rank)).unwrap();
            let u = local_unitary(&mut rng);
            let rotated = TwoQubitDensity::new(&u * rho.matrix() * u.adjoint()).unwrap();
            let a = wootters_concurrence(&rho).unwrap().value();
            let b = wootters_concurrence(&rotated).unwrap().value();
            assert!((a - b).abs() < 1e-9, "rank {rank}: {a} vs {b}");
        }
    }

    #[test]
    fn factor_and_textbook_routes_agree_on_full_rank_states() {
        let mut rng = random::seeded(9);
        let tol = Tolerances::default();
        for _ in 0..20 {
            let rho = TwoQubitDensity::new(random::density(&mut rng, 4, 4)).unwrap();
            let a = wootters_concurrence(&rho).unwrap().value();
            let b = wootters_concurrence_via_r(&rho, &tol).unwrap().value();
            assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
    }

    #[test]
    fn werner_state_threshold() {
        // p·|Bell⟩⟨Bell| + (1−p)·I/4 has concurrence max(0, (3p−1)/2)
        for p in [0.0, 0.2, 1.0 / 3.0, 0.5, 0.8, 1.0] {
            let rho = TwoQubitState::bell().density().into_matrix() * c(p, 0.0)
                + TwoQubitDensity::maximally_mixed().into_matrix() * c(1.0 - p, 0.0);
            let got = wootters_concurrence(&TwoQubitDensity::new(rho).unwrap()).unwrap().value();
            let expected = ((3.0 * p - 1.0) / 2.0).max(0.0);
            assert!((got - expected).abs() < 1e-9, "p={p}: {got} vs {expected}");
        }
    }

    #[test]
    fn modular_concurrence_examples() {
        let j = j_ab();
        let bell = TwoQubitState::bell();
        assert!((modular_concurrence(bell.amplitudes(), &j).unwrap().value() - 1.0).abs() < 1e-15);
        let psi = TwoQubitState::schmidt(c(0.6, 0.0), c(0.8, 0.0)).unwrap();
        assert!((modular_concurrence(psi.amplitudes(), &j).unwrap().value() - 0.96).abs() < 1e-12);
        assert_eq!(modular_concurrence(basis(0).amplitudes(), &j).unwrap().value(), 0.0);
        assert!(matches!(
            modular_concurrence(&ComplexVector::zeros(8), &j),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn modular_concurrence_agrees_on_schmidt_states_only() {
        let mut rng = random::seeded(4);
        let j = j_ab();
        for _ in 0..20 {
            let (a, b) = (random::complex_normal(&mut rng), random::complex_normal(&mut rng));
            let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
            let psi = TwoQubitState::schmidt(a / n, b / n).unwrap();
            let modular = modular_concurrence(psi.amplitudes(), &j).unwrap().value();
            assert!((modular - concurrence_pure(&psi).value()).abs() < 1e-10);
        }
        // a product state outside the Schmidt-aligned class
        let (a, b) = (0.6, 0.8);
        let psi = TwoQubitState::from_amplitudes([c(a, 0.0), c(b, 0.0), ZERO, ZERO]).unwrap();
        assert_eq!(concurrence_pure(&psi).value(), 0.0);
        assert!((modular_concurrence(psi.amplitudes(), &j).unwrap().value() - b * b).abs() < 1e-12);
    }

    #[test]
    fn chsh_operator_examples() {
        let zero = chsh_operator(&BellSettings::default());
        assert!((zero - kron(&sigma_z(), &sigma_z()) * c(2.0, 0.0)).norm() < 1e-15);
        let mut rng = random::seeded(5);
        for _ in 0..50 {
            let angles: [f64; 4] = std::array::from_fn(|_| random::complex_normal(&mut rng).re * 3.0);
            let b = chsh_operator(&BellSettings::from_array(angles));
            assert!(linalg::hermiticity_residual(&b) < 1e-14);
            let spec = linalg::hermitian_eig(&b).unwrap();
            assert!(spec.max() <= TSIRELSON + 1e-12 && spec.min() >= -TSIRELSON - 1e-12);
        }
        for theta in [0.0, 0.4, -2.1] {
            let a = dichotomic(theta);
            assert!((&a * &a - linalg::identity(2)).norm() < 1e-15);
        }
    }

    #[test]
    fn chsh_expectation_examples() {
        let optimal = BellSettings::new(0.0, PI / 4.0, PI / 2.0, -PI / 4.0);
        let bell = TwoQubitState::bell();
        assert!((chsh_expectation(&bell, &optimal).unwrap() - TSIRELSON).abs() < 1e-6);
        assert!(chsh_expectation(&TwoQubitDensity::maximally_mixed(), &optimal).unwrap().abs() < 1e-15);
        let mut rng = random::seeded(6);
        for _ in 0..20 {
            let psi = linalg::kron_vec(&random::state(&mut rng, 2), &random::state(&mut rng, 2));
            let psi = TwoQubitState::new(psi).unwrap();
            let angles: [f64; 4] = std::array::from_fn(|_| random::complex_normal(&mut rng).re * 3.0);
            assert!(chsh_expectation(&psi, &BellSettings::from_array(angles)).unwrap().abs() <= 2.0 + 1e-12);
        }
    }

    #[test]
    fn correlation_shortcut_matches_operator() {
        let mut rng = random::seeded(7);
        let rho = TwoQubitDensity::new(random::density(&mut rng, 4, 2)).unwrap();
        let t = zx_correlations(&rho);
        for _ in 0..10 {
            let angles: [f64; 4] = std::array::from_fn(|_| random::complex_normal(&mut rng).re * 3.0);
            let s = BellSettings::from_array(angles);
            let direct = chsh_expectation(&rho, &s).unwrap();
            assert!((direct - chsh_from_correlations(&t, &s)).abs() < 1e-12);
        }
    }

    #[test]
    fn max_violation_examples() {
        assert_eq!(max_violation_from_concurrence(ConcurrenceValue::clamped(0.0)), 2.0);
        assert!((max_violation_from_concurrence(ConcurrenceValue::clamped(1.0)) - TSIRELSON).abs() < 1e-15);
        let v = max_violation_from_concurrence(ConcurrenceValue::clamped(0.6));
        assert!((v - 2.0 * 1.36f64.sqrt()).abs() < 1e-15);
        // the optimizer on the Schmidt state with concurrence 0.6 reaches the same value
        let beta = (0.5 - 0.5 * (1.0 - 0.36f64).sqrt()).sqrt();
        let alpha = (1.0 - beta * beta).sqrt();
        let psi = TwoQubitState::schmidt(c(alpha, 0.0), c(beta, 0.0)).unwrap();
        assert!((concurrence_pure(&psi).value() - 0.6).abs() < 1e-12);
        let (_, best) = maximize_chsh(&psi, 12, DEFAULT_REFINE_ITERS);
        assert!((best - v).abs() < 1e-6, "{best} vs {v}");
    }

    #[test]
    fn optimizer_examples() {
        let (_, bell) = maximize_chsh(&TwoQubitState::bell(), DEFAULT_GRID_STEPS, DEFAULT_REFINE_ITERS);
        assert!((bell - TSIRELSON).abs() < 1e-6);
        let (_, product) = maximize_chsh(&basis(0), DEFAULT_GRID_STEPS, DEFAULT_REFINE_ITERS);
        assert!((product - 2.0).abs() < 1e-6);
        let psi = TwoQubitState::schmidt(c(0.6, 0.0), c(0.8, 0.0)).unwrap();
        let (_, best) = maximize_chsh(&psi, DEFAULT_GRID_STEPS, DEFAULT_REFINE_ITERS);
        assert!((best - 2.0 * (1.0 + 0.96f64.powi(2)).sqrt()).abs() < 1e-4);
    }

    #[test]
    fn optimizer_is_at_least_the_grid_and_respects_the_bound() {
        let mut rng = random::seeded(8);
        for _ in 0..5 {
            let psi = TwoQubitState::new(random::state(&mut rng, 4)).unwrap();
            let (_, coarse) = maximize_chsh(&psi, 8, 0);
            let (_, refined) = maximize_chsh(&psi, 8, DEFAULT_REFINE_ITERS);
            assert!(refined >= coarse);
            let bound = max_violation_from_concurrence(concurrence_pure(&psi));
            assert!(refined <= bound + 1e-6, "{refined} > {bound}");
        }
    }
}

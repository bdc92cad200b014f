//! Two supersymmetric oscillators sharing a spin-½ factor.
//!
//! The space is `F_a ⊗ F_b ⊗ C²` with both Fock factors truncated at the same
//! `n_max`; basis index `((n·(n_max+1)) + m)·2 + s` for `|n, m⟩ ⊗ e_s`, where
//! `e_0 = (1,0)` is spin up. The supercharges are
//!
//! ```text
//! Q^a = a ⊗ I ⊗ σ₋      Q^{a†} = a† ⊗ I ⊗ σ₊
//! Q^b = I ⊗ b ⊗ σ₊      Q^{b†} = I ⊗ b† ⊗ σ₋
//! ```
//!
//! and `H^x = ħω·{Q^x, Q^{x†}}`. Physically `a`, `b` are the two Landau-level
//! ladders of an electron in a magnetic field; only their algebra is modeled.
//!
//! The antilinear map `J[|n,m⟩⊗(α,β)] = |m,n⟩⊗(β̄,ᾱ)` swaps the modes, flips the
//! spinor and conjugates; it carries the `a` family onto the `b` family.

use num_complex::Complex64;

use crate::entanglement::{modular_concurrence, ConcurrenceValue};
use crate::error::{Error, Result};
use crate::fock::{ladder, FockCutoff};
use crate::linalg::{
    self, anticommutator, c, commutator, identity, kron_all, sigma_minus, sigma_plus,
    AntilinearOperator, ComplexMatrix, ComplexVector,
};
use crate::modular::{generate_algebra_with, ModularReport, PropertyResidual};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SusyModel {
    cutoff: FockCutoff,
    hbar_omega: f64,
}

impl SusyModel {
    pub fn new(cutoff: FockCutoff, hbar_omega: f64) -> Result<Self> {
        if !(hbar_omega > 0.0 && hbar_omega.is_finite()) {
            return Err(Error::NegativeParameter { name: "hbar_omega", value: hbar_omega });
        }
        Ok(Self { cutoff, hbar_omega })
    }

    pub fn cutoff(&self) -> FockCutoff {
        self.cutoff
    }

    pub fn hbar_omega(&self) -> f64 {
        self.hbar_omega
    }

    fn levels(&self) -> usize {
        self.cutoff.levels()
    }

    pub fn dim(&self) -> usize {
        2 * self.levels() * self.levels()
    }

    /// Index of `|n, m⟩ ⊗ e_spin` (`spin` 0 = up, 1 = down).
    pub fn index(&self, n: usize, m: usize, spin: usize) -> Result<usize> {
        let levels = self.levels();
        for (q, len) in [(n, levels), (m, levels), (spin, 2)] {
            if q >= len {
                return Err(Error::IndexOutOfRange { index: q, len });
            }
        }
        Ok((n * levels + m) * 2 + spin)
    }

    /// `(n, m, spin)` of a basis index.
    pub fn labels(&self, index: usize) -> (usize, usize, usize) {
        let levels = self.levels();
        let spin = index % 2;
        let nm = index / 2;
        (nm / levels, nm % levels, spin)
    }

    pub fn basis_state(&self, n: usize, m: usize, spin: usize) -> Result<ComplexVector> {
        let mut v = ComplexVector::zeros(self.dim());
        v[self.index(n, m, spin)?] = linalg::ONE;
        Ok(v)
    }

    /// Basis indices with both occupations `≤ n_max − 1`, where every ladder
    /// identity holds exactly.
    pub fn safe_indices(&self) -> Vec<usize> {
        let top = self.cutoff.n_max();
        (0..self.dim())
            .filter(|&i| {
                let (n, m, _) = self.labels(i);
                n < top && m < top
            })
            .collect()
    }

    /// `a ⊗ I ⊗ I`.
    pub fn ladder_a(&self) -> ComplexMatrix {
        kron_all(&[ladder(self.cutoff), identity(self.levels()), identity(2)])
    }

    /// `I ⊗ b ⊗ I`.
    pub fn ladder_b(&self) -> ComplexMatrix {
        kron_all(&[identity(self.levels()), ladder(self.cutoff), identity(2)])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuperchargeSet {
    pub q_a: ComplexMatrix,
    pub q_a_dag: ComplexMatrix,
    pub q_b: ComplexMatrix,
    pub q_b_dag: ComplexMatrix,
}

pub fn build_supercharges(model: &SusyModel) -> SuperchargeSet {
    let a = ladder(model.cutoff);
    let id = identity(model.levels());
    let q_a = kron_all(&[a.clone(), id.clone(), sigma_minus()]);
    let q_b = kron_all(&[id, a, sigma_plus()]);
    SuperchargeSet { q_a_dag: q_a.adjoint(), q_b_dag: q_b.adjoint(), q_a, q_b }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sector {
    A,
    B,
}

/// `H^x = ħω·{Q^x, Q^{x†}}`.
pub fn hamiltonian(model: &SusyModel, which: Sector) -> ComplexMatrix {
    let q = build_supercharges(model);
    let (x, xd) = match which {
        Sector::A => (&q.q_a, &q.q_a_dag),
        Sector::B => (&q.q_b, &q.q_b_dag),
    };
    anticommutator(x, xd) * c(model.hbar_omega, 0.0)
}

/// The conjugation as a matrix: mode swap ⊗ `σˣ`, applied after complex conjugation.
pub fn j_susy(model: &SusyModel) -> AntilinearOperator {
    let dim = model.dim();
    let mut m = ComplexMatrix::zeros(dim, dim);
    for i in 0..dim {
        let (n, k, s) = model.labels(i);
        let target = model.index(k, n, 1 - s).expect("labels in range");
        m[(target, i)] = linalg::ONE;
    }
    AntilinearOperator::new(m).expect("square")
}

/// `J[|n,m⟩⊗(α,β)] = |m,n⟩⊗(β̄,ᾱ)` by direct permutation.
pub fn j_susy_apply(model: &SusyModel, v: &ComplexVector) -> Result<ComplexVector> {
    let dim = model.dim();
    if v.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: v.len() });
    }
    let mut out = ComplexVector::zeros(dim);
    for i in 0..dim {
        let (n, m, s) = model.labels(i);
        out[model.index(m, n, 1 - s)?] = v[i].conj();
    }
    Ok(out)
}

fn safe_residual(x: &ComplexMatrix, y: &ComplexMatrix, model: &SusyModel) -> f64 {
    let safe = model.safe_indices();
    let mut total = 0.0;
    for &j in &safe {
        for &i in &safe {
            total += (x[(i, j)] - y[(i, j)]).norm_sqr();
        }
    }
    total.sqrt()
}

/// Coupling used for the Weyl-element membership check.
pub const WEYL_KAPPA: Complex64 = Complex64::new(0.35, -0.2);

/// Residuals of the intertwining identities on the truncation-safe block.
///
/// Entries named `*_negative_control` are expected to be large.
pub fn verify_intertwining(model: &SusyModel) -> Result<ModularReport> {
    verify_intertwining_with(model, &Tolerances::default())
}

pub fn verify_intertwining_with(model: &SusyModel, tol: &Tolerances) -> Result<ModularReport> {
    let q = build_supercharges(model);
    let j = j_susy(model);
    let ha = hamiltonian(model, Sector::A);
    let hb = hamiltonian(model, Sector::B);
    let hw = c(model.hbar_omega, 0.0);
    let mut entries = Vec::new();
    let mut push = |name, residual| entries.push(PropertyResidual { name, residual });

    push("j_qa_j_equals_qb", safe_residual(&j.sandwich(&q.q_a), &q.q_b, model));
    push("j_qadag_j_equals_qbdag", safe_residual(&j.sandwich(&q.q_a_dag), &q.q_b_dag, model));
    push("j_ha_j_equals_hb", safe_residual(&j.sandwich(&ha), &hb, model));

    let x = &q.q_a * WEYL_KAPPA + &q.q_a_dag * WEYL_KAPPA.conj();
    let weyl = linalg::unitary_from_hermitian(&x, 1.0)?;
    let b_algebra = generate_algebra_with(std::slice::from_ref(&q.q_b), model.dim(), tol)?;
    push("j_weyl_a_j_in_b_algebra", b_algebra.membership_residual(&j.sandwich(&weyl)));

    let zero = ComplexMatrix::zeros(model.dim(), model.dim());
    push("ha_commutes_with_qa", safe_residual(&commutator(&ha, &q.q_a), &zero, model));
    push("ha_commutes_with_b_ladder", safe_residual(&commutator(&ha, &model.ladder_b()), &zero, model));
    push("ha_commutes_with_hb", safe_residual(&commutator(&ha, &hb), &zero, model));
    // Q^b flips the spin that H^a reads, so it lowers H^a by one quantum.
    push("ha_qb_shift", safe_residual(&(commutator(&ha, &q.q_b) + &q.q_b * hw), &zero, model));

    push("j_qa_j_negative_control", safe_residual(&j.sandwich(&q.q_a), &q.q_a, model));
    Ok(ModularReport { entries })
}

/// `α|k, l−1⟩⊗e_↑ + β|l−1, k⟩⊗e_↓`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupermultipletState {
    pub k: usize,
    pub l: usize,
    pub alpha: Complex64,
    pub beta: Complex64,
}

impl SupermultipletState {
    pub fn validate(&self, model: &SusyModel) -> Result<()> {
        let top = model.cutoff.n_max();
        if self.l < 1 {
            return Err(Error::InvalidQuantumNumbers(format!("l = {} must be at least 1", self.l)));
        }
        if self.k + 1 > top || self.l + 1 > top {
            return Err(Error::InvalidQuantumNumbers(format!(
                "k = {}, l = {} exceed the safe range (n_max − 1 = {})",
                self.k,
                self.l,
                top.saturating_sub(1)
            )));
        }
        let norm = (self.alpha.norm_sqr() + self.beta.norm_sqr()).sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::NotNormalized { norm });
        }
        Ok(())
    }
}

pub fn supermultiplet_state(model: &SusyModel, state: &SupermultipletState) -> Result<ComplexVector> {
    state.validate(model)?;
    let mut v = ComplexVector::zeros(model.dim());
    v[model.index(state.k, state.l - 1, 0)?] = state.alpha;
    v[model.index(state.l - 1, state.k, 1)?] = state.beta;
    Ok(v)
}

/// `|⟨Φ, JΦ⟩|`, equal to `2|αβ|`.
pub fn susy_concurrence(model: &SusyModel, state: &SupermultipletState) -> Result<ConcurrenceValue> {
    let v = supermultiplet_state(model, state)?;
    modular_concurrence(&v, &j_susy(model))
}

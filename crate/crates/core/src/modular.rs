//! Finite-dimensional Tomita-Takesaki engine.
//!
//! An operator algebra is represented by a Hilbert-Schmidt orthonormal basis
//! of its linear span ([`AlgebraBasis`]). Given a cyclic and separating
//! vector `Ω`, [`tomita`] solves `S·AΩ = A†Ω` for the antilinear `S` and
//! splits it as `S = J∘Δ^{1/2}`.
//!
//! In finite dimensions `Ω` is cyclic and separating exactly when
//! `A ↦ AΩ` is a bijection from the algebra onto the Hilbert space, so the
//! algebra dimension equals the Hilbert-space dimension and `S` is determined
//! by a square linear solve.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{
    self, c, commutator, identity, kron, null_space, AntilinearOperator, AntilinearPolar,
    ComplexMatrix, ComplexVector, Spectrum,
};
use crate::random;
use crate::tolerance::Tolerances;

/// Hilbert-Schmidt inner product `tr(A†B)`.
pub fn hs_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> Complex64 {
    a.dotc(b)
}

/// Orthonormal (Hilbert-Schmidt) basis for the span of an operator algebra.
#[derive(Debug, Clone)]
pub struct AlgebraBasis {
    dim: usize,
    elements: Vec<ComplexMatrix>,
    contains_identity: bool,
}

impl AlgebraBasis {
    fn empty(dim: usize) -> Self {
        Self { dim, elements: Vec::new(), contains_identity: false }
    }

    /// Orthonormalizes `elements` without closing under products or adjoints.
    pub fn from_span(dim: usize, elements: &[ComplexMatrix]) -> Result<Self> {
        Self::from_span_with(dim, elements, &Tolerances::default())
    }

    pub fn from_span_with(dim: usize, elements: &[ComplexMatrix], tol: &Tolerances) -> Result<Self> {
        let mut basis = Self::empty(dim);
        for m in elements {
            check_shape(m, dim)?;
            basis.try_add(m, tol.rank);
        }
        basis.refresh_identity_flag(tol);
        Ok(basis)
    }

    /// Hilbert-space dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Dimension of the algebra as a vector space.
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    pub fn contains_identity(&self) -> bool {
        self.contains_identity
    }

    fn refresh_identity_flag(&mut self, tol: &Tolerances) {
        let id = identity(self.dim);
        self.contains_identity = self.membership_residual(&id) <= tol.modular * (self.dim as f64).sqrt();
    }

    fn try_add(&mut self, m: &ComplexMatrix, rel_tol: f64) -> bool {
        self.try_add_scaled(m, rel_tol, 0.0)
    }

    /// Adds the component of `m` orthogonal to the current span, if it is not
    /// negligible relative to `max(‖m‖, scale)`. Returns whether the basis grew.
    ///
    /// Products that vanish exactly in exact arithmetic come out as pure
    /// roundoff, so callers pass the product's natural scale `‖g‖·‖E‖`.
    fn try_add_scaled(&mut self, m: &ComplexMatrix, rel_tol: f64, scale: f64) -> bool {
        let norm = m.norm();
        if norm == 0.0 {
            return false;
        }
        let scale = scale.max(norm);
        let mut r = m.clone();
        // two passes of modified Gram-Schmidt
        for _ in 0..2 {
            for e in &self.elements {
                let coef = hs_inner(e, &r);
                r -= e * coef;
            }
        }
        let rn = r.norm();
        if rn <= rel_tol * scale {
            return false;
        }
        self.elements.push(r / c(rn, 0.0));
        true
    }

    /// Orthogonal projection of `m` onto the span.
    pub fn project(&self, m: &ComplexMatrix) -> ComplexMatrix {
        let mut p = DMatrix::zeros(self.dim, self.dim);
        for e in &self.elements {
            p += e * hs_inner(e, m);
        }
        p
    }

    /// `‖m − P(m)‖_F`.
    pub fn membership_residual(&self, m: &ComplexMatrix) -> f64 {
        (m - self.project(m)).norm()
    }

    /// Largest residual of products `E_i·E_j` and adjoints `E_i†` outside the span.
    pub fn closure_residual(&self) -> f64 {
        let mut worst = self.adjoint_residual();
        for a in &self.elements {
            for b in &self.elements {
                worst = worst.max(self.membership_residual(&(a * b)));
            }
        }
        worst
    }

    pub fn adjoint_residual(&self) -> f64 {
        self.elements
            .iter()
            .map(|a| self.membership_residual(&a.adjoint()))
            .fold(0.0, f64::max)
    }

    /// Whether both spans coincide: equal dimension and mutual projection
    /// residuals below `tol`.
    pub fn spans_same(&self, other: &AlgebraBasis, tol: f64) -> bool {
        self.dim == other.dim
            && self.len() == other.len()
            && self.elements.iter().all(|e| other.membership_residual(e) <= tol)
            && other.elements.iter().all(|e| self.membership_residual(e) <= tol)
    }

    /// Matrix whose columns are `E_k·Ω`.
    pub fn orbit(&self, omega: &ComplexVector) -> ComplexMatrix {
        let cols: Vec<ComplexVector> = self.elements.iter().map(|e| e * omega).collect();
        if cols.is_empty() {
            return DMatrix::zeros(self.dim, 0);
        }
        DMatrix::from_columns(&cols)
    }

    /// Conjugates every element by a unitary: `U·A·U†`.
    pub fn conjugated(&self, u: &ComplexMatrix) -> Self {
        let ud = u.adjoint();
        Self {
            dim: self.dim,
            elements: self.elements.iter().map(|e| u * e * &ud).collect(),
            contains_identity: self.contains_identity,
        }
    }
}

fn check_shape(m: &ComplexMatrix, dim: usize) -> Result<()> {
    if m.nrows() != dim || m.ncols() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: m.nrows().max(m.ncols()) });
    }
    Ok(())
}

/// Unital *-algebra generated by `generators`.
pub fn generate_algebra(generators: &[ComplexMatrix], dim: usize) -> Result<AlgebraBasis> {
    generate_algebra_with(generators, dim, &Tolerances::default())
}

/// Span growth by words in the generators and their adjoints. Each round
/// left-multiplies only the directions added in the previous round, which is
/// enough because `span(words ≤ L+1) = span(words ≤ L) + Σ_g g·span(words = L)`.
/// The loop stops when a round adds nothing; every other round adds a
/// dimension, so at most `dim²` rounds run.
pub fn generate_algebra_with(generators: &[ComplexMatrix], dim: usize, tol: &Tolerances) -> Result<AlgebraBasis> {
    let mut gens: Vec<ComplexMatrix> = Vec::with_capacity(2 * generators.len());
    for g in generators {
        check_shape(g, dim)?;
        gens.push(g.clone());
        if linalg::hermiticity_residual(g) > 0.0 {
            gens.push(g.adjoint());
        }
    }
    let gen_norms: Vec<f64> = gens.iter().map(|g| g.norm()).collect();
    let mut basis = AlgebraBasis::empty(dim);
    basis.try_add(&identity(dim), tol.rank);
    let mut frontier: Vec<usize> = Vec::new();
    for g in &gens {
        if basis.try_add(g, tol.rank) {
            frontier.push(basis.len() - 1);
        }
    }
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &f in &frontier {
            for (g, g_norm) in gens.iter().zip(&gen_norms) {
                let word = g * &basis.elements[f];
                if basis.try_add_scaled(&word, tol.rank, *g_norm) {
                    next.push(basis.len() - 1);
                }
            }
        }
        frontier = next;
    }
    basis.contains_identity = true;
    Ok(basis)
}

/// All operators commuting with every basis element, from the null space of
/// `X ↦ ([X, A_k])_k` acting on column-major `vec(X)`.
pub fn commutant(basis: &AlgebraBasis) -> AlgebraBasis {
    commutant_with(basis, &Tolerances::default())
}

pub fn commutant_with(basis: &AlgebraBasis, tol: &Tolerances) -> AlgebraBasis {
    let n = basis.dim;
    let id = identity(n);
    let blocks: Vec<ComplexMatrix> = basis
        .elements
        .iter()
        // vec(XA − AX) = (Aᵀ ⊗ I − I ⊗ A)·vec(X)
        .map(|a| kron(&a.transpose(), &id) - kron(&id, a))
        .collect();
    let rows = blocks.len() * n * n;
    let mut stacked = DMatrix::zeros(rows.max(1), n * n);
    for (k, b) in blocks.iter().enumerate() {
        stacked.view_mut((k * n * n, 0), (n * n, n * n)).copy_from(b);
    }
    let null = null_space(&stacked, tol.rank);
    let mut out = AlgebraBasis::empty(n);
    for col in null.column_iter() {
        let m = DMatrix::from_column_slice(n, n, col.as_slice());
        out.try_add(&m, tol.rank);
    }
    out.refresh_identity_flag(tol);
    out
}

/// `A'' = A` up to `tol.modular` (mutual projection residuals).
pub fn bicommutant_check(basis: &AlgebraBasis) -> bool {
    bicommutant_check_with(basis, &Tolerances::default())
}

pub fn bicommutant_check_with(basis: &AlgebraBasis, tol: &Tolerances) -> bool {
    let double = commutant_with(&commutant_with(basis, tol), tol);
    double.spans_same(basis, tol.modular.max(1e-10))
}

/// Adjoint-closed and equal to its bicommutant.
pub fn is_von_neumann(basis: &AlgebraBasis) -> bool {
    let tol = Tolerances::default();
    basis.adjoint_residual() <= tol.modular && bicommutant_check_with(basis, &tol)
}

fn check_vector(basis: &AlgebraBasis, omega: &ComplexVector) -> Result<()> {
    if omega.len() != basis.dim {
        return Err(Error::DimensionMismatch { expected: basis.dim, found: omega.len() });
    }
    let norm = omega.norm();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::NotNormalized { norm });
    }
    Ok(())
}

/// `{AΩ}` spans the Hilbert space.
pub fn is_cyclic(basis: &AlgebraBasis, omega: &ComplexVector) -> Result<bool> {
    check_vector(basis, omega)?;
    let tol = Tolerances::default();
    Ok(linalg::rank(&basis.orbit(omega), tol.rank) == basis.dim)
}

/// `AΩ = 0 ⇒ A = 0` on the span.
pub fn is_separating(basis: &AlgebraBasis, omega: &ComplexVector) -> Result<bool> {
    check_vector(basis, omega)?;
    let tol = Tolerances::default();
    Ok(linalg::rank(&basis.orbit(omega), tol.rank) == basis.len())
}

/// The modular triple for a (basis, Ω) pair.
#[derive(Debug, Clone)]
pub struct ModularData {
    pub s: AntilinearOperator,
    pub j: AntilinearOperator,
    pub delta: ComplexMatrix,
    pub delta_spectrum: Spectrum,
    pub omega: ComplexVector,
}

impl ModularData {
    pub fn delta_power(&self, p: f64) -> ComplexMatrix {
        self.delta_spectrum.map(|l| c(l.powf(p), 0.0))
    }

    /// `Δ^{it}`.
    pub fn modular_flow(&self, t: f64) -> ComplexMatrix {
        self.delta_spectrum.map(|l| Complex64::from_polar(1.0, t * l.ln()))
    }
}

pub fn tomita(basis: &AlgebraBasis, omega: &ComplexVector) -> Result<ModularData> {
    tomita_with(basis, omega, &Tolerances::default())
}

pub fn tomita_with(basis: &AlgebraBasis, omega: &ComplexVector, tol: &Tolerances) -> Result<ModularData> {
    check_vector(basis, omega)?;
    let n = basis.dim;
    let x = basis.orbit(omega);
    let svd = linalg::svd(&x, true, true);
    let sv = &svd.singular_values;
    let max = sv.iter().copied().fold(0.0, f64::max);
    let rank = sv.iter().filter(|&&s| s > tol.rank * max).count();
    if rank < n {
        return Err(Error::NotCyclic { rank, dim: n });
    }
    if rank < basis.len() {
        return Err(Error::NotSeparating { rank, algebra_dim: basis.len() });
    }
    let min = sv.iter().copied().fold(f64::INFINITY, f64::min);
    let condition = max / min;
    if condition > tol.condition_bound {
        return Err(Error::IllConditioned { condition });
    }
    // S·conj(X) convention: M·conj(X) = Y, so M = Y·conj(X)⁺ with
    // conj(X)⁺ = conj(V)·Σ⁻¹·conj(U)† from X = U·Σ·V†.
    let u = svd.u.expect("requested U");
    let v_t = svd.v_t.expect("requested V");
    let sigma_inv = DMatrix::from_diagonal(&sv.map(|s| c(1.0 / s, 0.0)));
    let conj_x_pinv = linalg::conj_matrix(&v_t.adjoint()) * sigma_inv * u.transpose();
    let y_cols: Vec<ComplexVector> = basis.elements.iter().map(|e| e.adjoint() * omega).collect();
    let y = DMatrix::from_columns(&y_cols);
    let s = AntilinearOperator::new(y * conj_x_pinv)?;
    let AntilinearPolar { j, delta, delta_spectrum } = linalg::antilinear_polar_with(&s, tol)?;
    Ok(ModularData { s, j, delta, delta_spectrum, omega: omega.clone() })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropertyResidual {
    pub name: &'static str,
    pub residual: f64,
}

/// Per-property residuals of the modular identities.
#[derive(Debug, Clone, PartialEq)]
pub struct ModularReport {
    pub entries: Vec<PropertyResidual>,
}

impl ModularReport {
    pub fn max_residual(&self) -> f64 {
        self.entries.iter().map(|e| e.residual).fold(0.0, f64::max)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.entries.iter().all(|e| e.residual <= tol)
    }

    pub fn failures(&self, tol: f64) -> Vec<&'static str> {
        self.entries.iter().filter(|e| !(e.residual <= tol)).map(|e| e.name).collect()
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.entries.iter().find(|e| e.name == name).map(|e| e.residual)
    }
}

/// Largest `‖[J·A_k·J, A_l]‖_F` over basis pairs: zero iff `J·M·J ⊆ M'`.
pub fn commutant_mapping_residual(j: &AntilinearOperator, basis: &AlgebraBasis) -> f64 {
    let mapped: Vec<ComplexMatrix> = basis.elements.iter().map(|a| j.sandwich(a)).collect();
    let mut worst: f64 = 0.0;
    for m in &mapped {
        for a in &basis.elements {
            worst = worst.max(commutator(m, a).norm());
        }
    }
    worst
}

pub const MODULAR_FLOW_TIMES: [f64; 3] = [0.3, 1.0, 2.7];

pub fn verify_modular_properties(md: &ModularData, basis: &AlgebraBasis) -> ModularReport {
    let n = md.j.dim();
    let id = identity(n);
    let omega = &md.omega;
    let mut entries = Vec::new();
    let mut push = |name, residual| entries.push(PropertyResidual { name, residual });

    push("j_involution", (md.j.compose(&md.j) - &id).norm());
    push("j_self_adjoint", (md.j.matrix() - md.j.adjoint().matrix()).norm());
    let j_omega = md.j.matrix() * linalg::conj_vector(omega);
    push("j_fixes_omega", (j_omega - omega).norm());
    push("delta_fixes_omega", (&md.delta * omega - omega).norm());

    let half = md.delta_power(0.5);
    let minus_half = md.delta_power(-0.5);
    push("j_delta_j", (md.j.sandwich(&half) - &minus_half).norm());
    push("s_polar", (md.j.after_linear(&half).matrix() - md.s.matrix()).norm());

    let s_action = basis
        .elements
        .iter()
        .map(|a| {
            let sv = md.s.apply(&(a * omega)).expect("dimension checked");
            (sv - a.adjoint() * omega).norm()
        })
        .fold(0.0, f64::max);
    push("s_action", s_action);

    push("j_maps_to_commutant", commutant_mapping_residual(&md.j, basis));

    let flow = MODULAR_FLOW_TIMES
        .iter()
        .map(|&t| {
            let u = md.modular_flow(t);
            let ud = u.adjoint();
            basis
                .elements
                .iter()
                .map(|a| basis.membership_residual(&(&u * a * &ud)))
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max);
    push("modular_flow", flow);

    ModularReport { entries }
}

/// `B(C²) ⊗ I` on `C² ⊗ C²`.
pub fn local_qubit_algebra() -> AlgebraBasis {
    let id = identity(2);
    generate_algebra(&[kron(&linalg::sigma_x(), &id), kron(&linalg::sigma_z(), &id)], 4)
        .expect("4x4 generators")
}

pub fn basis_vector(dim: usize, index: usize) -> ComplexVector {
    let mut v = ComplexVector::zeros(dim);
    v[index] = linalg::ONE;
    v
}

/// `(|01⟩ + |10⟩)/√2`.
pub fn bell_psi_plus() -> ComplexVector {
    (basis_vector(4, 1) + basis_vector(4, 2)) * c(std::f64::consts::FRAC_1_SQRT_2, 0.0)
}

/// `(|00⟩ + |11⟩)/√2`.
pub fn bell_phi_plus() -> ComplexVector {
    (basis_vector(4, 0) + basis_vector(4, 3)) * c(std::f64::consts::FRAC_1_SQRT_2, 0.0)
}

/// `√p|00⟩ + √(1−p)|11⟩`.
pub fn schmidt_state(p: f64) -> ComplexVector {
    basis_vector(4, 0) * c(p.sqrt(), 0.0) + basis_vector(4, 3) * c((1.0 - p).sqrt(), 0.0)
}

/// A random algebra `U·(⊕_i B(C^{n_i}) ⊗ I_{n_i})·U†` on `C^{Σ n_i²}` together
/// with a random unit vector (generically cyclic and separating).
pub fn random_standard_instance<R: Rng>(rng: &mut R, blocks: &[usize]) -> Result<(AlgebraBasis, ComplexVector)> {
    let dim: usize = blocks.iter().map(|n| n * n).sum();
    let u = random::unitary(rng, dim);
    let ud = u.adjoint();
    let mut generators = Vec::new();
    let mut offset = 0;
    for &n in blocks {
        let local = kron(&random::ginibre(rng, n, n), &identity(n));
        let mut g = DMatrix::zeros(dim, dim);
        g.view_mut((offset, offset), (n * n, n * n)).copy_from(&local);
        generators.push(&u * g * &ud);
        offset += n * n;
    }
    let basis = generate_algebra(&generators, dim)?;
    Ok((basis, random::state(rng, dim)))
}

/// Block structures with Hilbert dimension in `4..=9` admitting a cyclic
/// separating vector.
pub const STANDARD_BLOCKS: [&[usize]; 10] = [
    &[2],
    &[1, 1, 1, 1],
    &[2, 1],
    &[1, 1, 1, 1, 1],
    &[2, 1, 1],
    &[2, 1, 1, 1],
    &[2, 2],
    &[3],
    &[2, 2, 1],
    &[1, 1, 1, 1, 1, 1, 1, 1, 1],
];

//! Dense complex linear algebra kernel.
//!
//! Linear operators are plain [`ComplexMatrix`] values. Antilinear operators
//! are stored as a single matrix `M` acting as `v ↦ M·conj(v)` in the fixed
//! computational basis; with that convention the adjoint is `Mᵀ` and
//! composites reduce to ordinary matrix products with conjugations.

use nalgebra::{DMatrix, DVector, Dyn, SymmetricEigen, SVD};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tolerance::Tolerances;

pub type ComplexMatrix = DMatrix<Complex64>;
pub type ComplexVector = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(dim: usize) -> ComplexMatrix {
    DMatrix::identity(dim, dim)
}

pub fn from_rows(rows: &[&[Complex64]]) -> ComplexMatrix {
    let r = rows.len();
    let c = rows.first().map_or(0, |row| row.len());
    DMatrix::from_fn(r, c, |i, j| rows[i][j])
}

pub fn diag(entries: &[Complex64]) -> ComplexMatrix {
    DMatrix::from_diagonal(&DVector::from_column_slice(entries))
}

pub fn sigma_x() -> ComplexMatrix {
    from_rows(&[&[ZERO, ONE], &[ONE, ZERO]])
}

pub fn sigma_y() -> ComplexMatrix {
    from_rows(&[&[ZERO, -I], &[I, ZERO]])
}

pub fn sigma_z() -> ComplexMatrix {
    from_rows(&[&[ONE, ZERO], &[ZERO, -ONE]])
}

/// `σ₊ = |↑⟩⟨↓|` with `|↑⟩ = (1, 0)ᵀ`.
pub fn sigma_plus() -> ComplexMatrix {
    from_rows(&[&[ZERO, ONE], &[ZERO, ZERO]])
}

/// `σ₋ = |↓⟩⟨↑|`.
pub fn sigma_minus() -> ComplexMatrix {
    from_rows(&[&[ZERO, ZERO], &[ONE, ZERO]])
}

/// Tensor product: `kron(A,B)[(i·r_B + k), (j·c_B + l)] = A[i,j]·B[k,l]`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

pub fn kron_all(factors: &[ComplexMatrix]) -> ComplexMatrix {
    factors
        .iter()
        .fold(identity(1), |acc, f| kron(&acc, f))
}

pub fn kron_vec(a: &ComplexVector, b: &ComplexVector) -> ComplexVector {
    a.kronecker(b)
}

pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a * b - b * a
}

pub fn anticommutator(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a * b + b * a
}

pub fn conj_matrix(m: &ComplexMatrix) -> ComplexMatrix {
    m.map(|z| z.conj())
}

pub fn conj_vector(v: &ComplexVector) -> ComplexVector {
    v.map(|z| z.conj())
}

/// `⟨x, y⟩ = Σ conj(x_i)·y_i`.
pub fn inner(x: &ComplexVector, y: &ComplexVector) -> Complex64 {
    x.dotc(y)
}

fn require_square(m: &ComplexMatrix) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare { rows: m.nrows(), cols: m.ncols() });
    }
    Ok(m.nrows())
}

/// Frobenius norm of the anti-Hermitian part, `‖H − H†‖_F`.
pub fn hermiticity_residual(h: &ComplexMatrix) -> f64 {
    (h - h.adjoint()).norm()
}

/// Eigen-decomposition `H = V·diag(λ)·V†` with eigenvalues in descending order.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `V·diag(f(λ))·V†`.
    pub fn map<F: Fn(f64) -> Complex64>(&self, f: F) -> ComplexMatrix {
        let v = &self.eigenvectors;
        let mut scaled = v.clone();
        for (j, &lambda) in self.eigenvalues.iter().enumerate() {
            let fl = f(lambda);
            for z in scaled.column_mut(j).iter_mut() {
                *z *= fl;
            }
        }
        scaled * v.adjoint()
    }

    /// `V·diag(f(λ))·V†·x` without forming the matrix.
    pub fn apply<F: Fn(f64) -> Complex64>(&self, f: F, x: &ComplexVector) -> ComplexVector {
        let v = &self.eigenvectors;
        let mut y = v.ad_mul(x);
        for (z, &lambda) in y.iter_mut().zip(&self.eigenvalues) {
            *z *= f(lambda);
        }
        v * y
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map(|l| c(l, 0.0))
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }
}

pub fn hermitian_eig(h: &ComplexMatrix) -> Result<Spectrum> {
    hermitian_eig_with(h, &Tolerances::default())
}

pub fn hermitian_eig_with(h: &ComplexMatrix, tol: &Tolerances) -> Result<Spectrum> {
    let n = require_square(h)?;
    let residual = hermiticity_residual(h);
    if residual > tol.hermitian {
        return Err(Error::NotHermitian { residual });
    }
    if n == 0 {
        return Ok(Spectrum { eigenvalues: vec![], eigenvectors: DMatrix::zeros(0, 0) });
    }
    let sym = (h + h.adjoint()) * c(0.5, 0.0);
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let eigenvalues = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let eigenvectors = DMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok(Spectrum { eigenvalues, eigenvectors })
}

/// Square root of a positive semidefinite matrix. Eigenvalues in
/// `[−τ_psd, 0)` are treated as roundoff and clamped to zero.
pub fn psd_sqrt(p: &ComplexMatrix) -> Result<ComplexMatrix> {
    psd_sqrt_with(p, &Tolerances::default())
}

pub fn psd_sqrt_with(p: &ComplexMatrix, tol: &Tolerances) -> Result<ComplexMatrix> {
    let spec = hermitian_eig_with(p, tol)?;
    let min = spec.min();
    if min < -tol.psd {
        return Err(Error::NotPsd { min_eigenvalue: min });
    }
    Ok(spec.map(|l| c(l.max(0.0).sqrt(), 0.0)))
}

/// `exp(i·s·H)` for Hermitian `H`.
pub fn unitary_from_hermitian(h: &ComplexMatrix, s: f64) -> Result<ComplexMatrix> {
    let spec = hermitian_eig(h)?;
    Ok(spec.map(|l| Complex64::from_polar(1.0, s * l)))
}

/// Antilinear operator `v ↦ M·conj(v)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AntilinearOperator {
    matrix: ComplexMatrix,
}

impl AntilinearOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        require_square(&matrix)?;
        Ok(Self { matrix })
    }

    /// Complex conjugation in the computational basis.
    pub fn conjugation(dim: usize) -> Self {
        Self { matrix: identity(dim) }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn apply(&self, v: &ComplexVector) -> Result<ComplexVector> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: v.len() });
        }
        Ok(&self.matrix * conj_vector(v))
    }

    /// The adjoint, defined by `⟨x, S y⟩ = ⟨y, S† x⟩`; its matrix is `Mᵀ`.
    pub fn adjoint(&self) -> Self {
        Self { matrix: self.matrix.transpose() }
    }

    /// `self ∘ other`, a linear map with matrix `M·conj(N)`.
    pub fn compose(&self, other: &Self) -> ComplexMatrix {
        &self.matrix * conj_matrix(&other.matrix)
    }

    /// `self ∘ L`, antilinear with matrix `M·conj(L)`.
    pub fn after_linear(&self, l: &ComplexMatrix) -> Self {
        Self { matrix: &self.matrix * conj_matrix(l) }
    }

    /// `L ∘ self`, antilinear with matrix `L·M`.
    pub fn before_linear(&self, l: &ComplexMatrix) -> Self {
        Self { matrix: l * &self.matrix }
    }

    /// `self ∘ L ∘ self`, the linear map `M·conj(L)·conj(M)`.
    pub fn sandwich(&self, l: &ComplexMatrix) -> ComplexMatrix {
        &self.matrix * conj_matrix(l) * conj_matrix(&self.matrix)
    }

    /// `⟨v, self·v⟩`.
    pub fn expectation(&self, v: &ComplexVector) -> Result<Complex64> {
        Ok(inner(v, &self.apply(v)?))
    }
}

pub fn antilinear_adjoint(s: &AntilinearOperator) -> AntilinearOperator {
    s.adjoint()
}

/// Polar decomposition `S = J∘Δ^{1/2}` of an invertible antilinear operator.
#[derive(Debug, Clone)]
pub struct AntilinearPolar {
    pub j: AntilinearOperator,
    /// `Δ = S†S = Mᵀ·conj(M)`, Hermitian positive definite.
    pub delta: ComplexMatrix,
    pub delta_spectrum: Spectrum,
}

impl AntilinearPolar {
    pub fn delta_power(&self, p: f64) -> ComplexMatrix {
        self.delta_spectrum.map(|l| c(l.powf(p), 0.0))
    }

    /// `Δ^{it}`.
    pub fn delta_imaginary_power(&self, t: f64) -> ComplexMatrix {
        self.delta_spectrum.map(|l| Complex64::from_polar(1.0, t * l.ln()))
    }
}

pub fn antilinear_polar(s: &AntilinearOperator) -> Result<AntilinearPolar> {
    antilinear_polar_with(s, &Tolerances::default())
}

pub fn antilinear_polar_with(s: &AntilinearOperator, tol: &Tolerances) -> Result<AntilinearPolar> {
    let m = s.matrix();
    let n = m.nrows();
    if n == 0 {
        return Err(Error::Singular { condition: f64::INFINITY });
    }
    // M = U·Σ·V† gives Δ = Mᵀ·conj(M) = conj(V)·Σ²·Vᵀ and J = U·V†, which
    // avoids squaring the condition number of M.
    let svd = svd(m, true, true);
    let u = svd.u.expect("requested U");
    let v_t = svd.v_t.expect("requested V");
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let (max, min) = (svd.singular_values[order[0]], svd.singular_values[order[n - 1]]);
    let condition = if min > 0.0 { max / min } else { f64::INFINITY };
    if !(condition <= tol.condition_bound) {
        return Err(Error::Singular { condition });
    }
    let eigenvalues = order.iter().map(|&k| svd.singular_values[k].powi(2)).collect();
    // conj(V)[i, j] = V†[j, i]
    let eigenvectors = DMatrix::from_fn(n, n, |i, j| v_t[(order[j], i)]);
    let spec = Spectrum { eigenvalues, eigenvectors };
    let j = AntilinearOperator { matrix: u * v_t };
    Ok(AntilinearPolar { j, delta: spec.reconstruct(), delta_spectrum: spec })
}

/// Singular value decomposition with a convergence threshold below machine
/// epsilon. The default nalgebra threshold can stop with a reconstruction
/// error around `1e-9` on well-conditioned complex inputs.
pub fn svd(m: &ComplexMatrix, compute_u: bool, compute_v: bool) -> SVD<Complex64, Dyn, Dyn> {
    SVD::try_new(m.clone(), compute_u, compute_v, 1e-18, 10_000)
        .unwrap_or_else(|| m.clone().svd(compute_u, compute_v))
}

/// Singular values of `m`, descending.
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return vec![];
    }
    let mut s: Vec<f64> = svd(m, false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Numerical rank with relative threshold `rel_tol·σ_max`.
pub fn rank(m: &ComplexMatrix, rel_tol: f64) -> usize {
    let s = singular_values(m);
    let Some(&max) = s.first() else { return 0 };
    if max == 0.0 {
        return 0;
    }
    s.iter().filter(|&&x| x > rel_tol * max).count()
}

/// Orthonormal basis of the null space of `m` (as columns), using a
/// relative singular-value threshold.
pub fn null_space(m: &ComplexMatrix, rel_tol: f64) -> ComplexMatrix {
    let n = m.ncols();
    if m.nrows() == 0 {
        return identity(n);
    }
    // Thin SVD only yields min(rows, cols) right singular vectors; pad short
    // matrices with zero rows so V is complete.
    let padded;
    let a = if m.nrows() < n {
        padded = m.clone().resize_vertically(n, ZERO);
        &padded
    } else {
        m
    };
    let svd = svd(a, false, true);
    let v_t = svd.v_t.expect("requested V");
    let max = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let cols: Vec<ComplexVector> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s <= rel_tol * max.max(1.0))
        .map(|(k, _)| v_t.row(k).adjoint())
        .collect();
    if cols.is_empty() {
        return DMatrix::zeros(n, 0);
    }
    DMatrix::from_columns(&cols)
}

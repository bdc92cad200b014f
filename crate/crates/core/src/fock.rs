//! Truncated bosonic Fock spaces in the occupation-number representation.
//!
//! A [`ModeSystem`] holds `modes` independent oscillators, each truncated to
//! occupations `0..=n_max`. Mode 0 is the most significant tensor factor, so
//! the all-zero occupation state is basis index 0.
//!
//! Smearing functions enter only through their coefficients in an
//! orthonormal one-particle basis ([`ModeCoefficients`]): `a(c) = Σ conj(c_i)·a_i`
//! is antilinear in `c` and `[a(c), a†(d)] = ⟨c, d⟩` away from the cutoff.
//!
//! Two field normalizations are provided: the Segal field
//! `Φ_s(c) = (a(c) + a†(c))/√2` and the dephasing field `φ(c) = a(c) + a†(c)`,
//! for which `⟨0|e^{iφ(c)}|0⟩ = e^{−⟨c,c⟩/2}`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, c, identity, kron, ComplexMatrix, ComplexVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FockCutoff(usize);

impl FockCutoff {
    pub fn new(n_max: usize) -> Result<Self> {
        if n_max < 1 {
            return Err(Error::InvalidCutoff(n_max));
        }
        Ok(Self(n_max))
    }

    pub fn n_max(self) -> usize {
        self.0
    }

    pub fn levels(self) -> usize {
        self.0 + 1
    }
}

/// Coefficients `c_i = ⟨f_i, f⟩` of a one-particle function in the mode basis.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeCoefficients(pub Vec<Complex64>);

impl ModeCoefficients {
    pub fn new(c: Vec<Complex64>) -> Self {
        Self(c)
    }

    pub fn real(values: &[f64]) -> Self {
        Self(values.iter().map(|&x| c(x, 0.0)).collect())
    }

    pub fn zeros(modes: usize) -> Self {
        Self(vec![linalg::ZERO; modes])
    }

    /// Unit vector on `mode`.
    pub fn unit(modes: usize, mode: usize) -> Self {
        let mut v = vec![linalg::ZERO; modes];
        v[mode] = linalg::ONE;
        Self(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `⟨self, other⟩ = Σ conj(c_i)·d_i`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.inner(self).re
    }

    pub fn scale(&self, alpha: Complex64) -> Self {
        Self(self.0.iter().map(|x| x * alpha).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

/// Single-mode annihilation operator on `0..=n_max`: `a|n⟩ = √n·|n−1⟩`.
pub fn ladder(cutoff: FockCutoff) -> ComplexMatrix {
    let d = cutoff.levels();
    let mut a = DMatrix::zeros(d, d);
    for n in 1..d {
        a[(n - 1, n)] = c((n as f64).sqrt(), 0.0);
    }
    a
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModeSystem {
    modes: usize,
    cutoff: FockCutoff,
}

impl ModeSystem {
    pub fn new(modes: usize, cutoff: FockCutoff) -> Result<Self> {
        if modes == 0 {
            return Err(Error::InvalidParameter("mode count must be positive".into()));
        }
        Ok(Self { modes, cutoff })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn cutoff(&self) -> FockCutoff {
        self.cutoff
    }

    pub fn dim(&self) -> usize {
        self.cutoff.levels().pow(self.modes as u32)
    }

    /// Occupation numbers of basis state `index`, mode 0 first.
    pub fn occupation(&self, index: usize) -> Vec<usize> {
        let levels = self.cutoff.levels();
        let mut occ = vec![0; self.modes];
        let mut rest = index;
        for slot in occ.iter_mut().rev() {
            *slot = rest % levels;
            rest /= levels;
        }
        occ
    }

    pub fn index_of(&self, occupation: &[usize]) -> Result<usize> {
        if occupation.len() != self.modes {
            return Err(Error::DimensionMismatch { expected: self.modes, found: occupation.len() });
        }
        let levels = self.cutoff.levels();
        occupation.iter().try_fold(0, |acc, &n| {
            if n >= levels {
                Err(Error::IndexOutOfRange { index: n, len: levels })
            } else {
                Ok(acc * levels + n)
            }
        })
    }

    pub fn total_occupation(&self, index: usize) -> usize {
        self.occupation(index).iter().sum()
    }

    /// Basis indices whose every mode has occupation `≤ max_per_mode`.
    pub fn safe_indices(&self, max_per_mode: usize) -> Vec<usize> {
        (0..self.dim())
            .filter(|&i| self.occupation(i).iter().all(|&n| n <= max_per_mode))
            .collect()
    }

    /// Diagonal of `(−1)^N`, with `N` the total occupation.
    pub fn parity(&self) -> Vec<f64> {
        (0..self.dim())
            .map(|i| if self.total_occupation(i).is_multiple_of(2) { 1.0 } else { -1.0 })
            .collect()
    }

    pub fn vacuum(&self) -> ComplexVector {
        let mut v = ComplexVector::zeros(self.dim());
        v[0] = linalg::ONE;
        v
    }

    fn check_mode(&self, mode: usize) -> Result<()> {
        if mode >= self.modes {
            return Err(Error::IndexOutOfRange { index: mode, len: self.modes });
        }
        Ok(())
    }

    fn check_coefficients(&self, coeffs: &ModeCoefficients) -> Result<()> {
        if coeffs.len() != self.modes {
            return Err(Error::DimensionMismatch { expected: self.modes, found: coeffs.len() });
        }
        Ok(())
    }

    /// `a_mode`, embedded with identities on the other modes.
    pub fn annihilation(&self, mode: usize) -> Result<ComplexMatrix> {
        self.check_mode(mode)?;
        let levels = self.cutoff.levels();
        let before = identity(levels.pow(mode as u32));
        let after = identity(levels.pow((self.modes - mode - 1) as u32));
        Ok(kron(&kron(&before, &ladder(self.cutoff)), &after))
    }

    pub fn creation(&self, mode: usize) -> Result<ComplexMatrix> {
        Ok(self.annihilation(mode)?.adjoint())
    }

    pub fn number(&self, mode: usize) -> Result<ComplexMatrix> {
        let a = self.annihilation(mode)?;
        Ok(a.adjoint() * a)
    }

    /// `a(c) = Σ conj(c_i)·a_i`.
    pub fn smeared_annihilation(&self, coeffs: &ModeCoefficients) -> Result<ComplexMatrix> {
        self.check_coefficients(coeffs)?;
        let mut out = DMatrix::zeros(self.dim(), self.dim());
        for (mode, ci) in coeffs.0.iter().enumerate() {
            if *ci != linalg::ZERO {
                out += self.annihilation(mode)? * ci.conj();
            }
        }
        Ok(out)
    }

    pub fn smeared_creation(&self, coeffs: &ModeCoefficients) -> Result<ComplexMatrix> {
        Ok(self.smeared_annihilation(coeffs)?.adjoint())
    }

    /// Segal field `Φ_s(c) = (a(c) + a†(c))/√2`.
    pub fn segal_field(&self, coeffs: &ModeCoefficients) -> Result<ComplexMatrix> {
        Ok(self.dephasing_field(coeffs)? * c(std::f64::consts::FRAC_1_SQRT_2, 0.0))
    }

    /// Dephasing field `φ(c) = a(c) + a†(c) = √2·Φ_s(c)`.
    pub fn dephasing_field(&self, coeffs: &ModeCoefficients) -> Result<ComplexMatrix> {
        let a = self.smeared_annihilation(coeffs)?;
        let ad = a.adjoint();
        Ok(a + ad)
    }

    /// Weyl operator `W(c) = exp(i·Φ_s(c))`.
    pub fn weyl(&self, coeffs: &ModeCoefficients) -> Result<ComplexMatrix> {
        linalg::unitary_from_hermitian(&self.segal_field(coeffs)?, 1.0)
    }

    /// `exp(i·s·φ(c))`.
    pub fn dephasing_unitary(&self, coeffs: &ModeCoefficients, s: f64) -> Result<ComplexMatrix> {
        linalg::unitary_from_hermitian(&self.dephasing_field(coeffs)?, s)
    }

    /// `⟨0|U|0⟩`.
    pub fn vacuum_expectation(&self, u: &ComplexMatrix) -> Result<Complex64> {
        if u.nrows() != self.dim() || u.ncols() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: u.nrows() });
        }
        Ok(u[(0, 0)])
    }

    /// Probability weight on basis states where some mode sits at `n_max`.
    pub fn top_level_weight(&self, v: &ComplexVector) -> f64 {
        let n_max = self.cutoff.n_max();
        (0..self.dim())
            .filter(|&i| self.occupation(i).contains(&n_max))
            .map(|i| v[i].norm_sqr())
            .sum()
    }
}

/// Frobenius norm of `(x − y)` restricted to the given columns.
pub fn column_residual(x: &ComplexMatrix, y: &ComplexMatrix, columns: &[usize]) -> f64 {
    columns
        .iter()
        .map(|&j| (x.column(j) - y.column(j)).norm_squared())
        .sum::<f64>()
        .sqrt()
}

/// `‖W(c)W(d) − e^{−i·Im⟨c,d⟩/2}·W(c+d)‖` on states with every mode occupation
/// `≤ n_max/2`.
pub fn weyl_relation_residual(sys: &ModeSystem, c1: &ModeCoefficients, d: &ModeCoefficients) -> Result<f64> {
    let lhs = sys.weyl(c1)? * sys.weyl(d)?;
    let phase = Complex64::from_polar(1.0, -c1.inner(d).im / 2.0);
    let rhs = sys.weyl(&c1.add(d))? * phase;
    let cols = sys.safe_indices(sys.cutoff().n_max() / 2);
    Ok(column_residual(&lhs, &rhs, &cols))
}

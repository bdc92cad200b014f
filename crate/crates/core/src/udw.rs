//! A pair of gapless two-level detectors coupled to a free scalar field.
//!
//! The interaction is pure dephasing, `U = e^{−iσᶻ_A⊗φ(f_A)}·e^{−iσᶻ_B⊗φ(f_B)}`,
//! acting on `(|gg⟩ + r|ee⟩)/√(1+r²) ⊗ |0⟩`. The two branches pick up
//! `e^{±iφ(h)}|0⟩` with `h = f_A + f_B`, and the detector concurrence is
//! damped to `2r·e^{−2⟨h,h⟩}/(1+r²)`.
//!
//! Smearing functions are spacetime Gaussians. Their inner product is the
//! positive-frequency (Wightman) overlap on the mass shell,
//! `⟨f,g⟩ = ∫ d^dk / ((2π)^d·2ω_k) · conj(f̂(ω_k,k))·ĝ(ω_k,k)`, evaluated by
//! composite Gauss-Legendre quadrature in `|k|`. Alternatively `⟨h,h⟩` can be
//! given directly.
//!
//! Detector basis: excited `|e⟩ = (1,0)` with `σᶻ = +1`, ground `|g⟩ = (0,1)`.
//! The joint space is `C²_A ⊗ C²_B ⊗ Fock`, detector A most significant.

use std::f64::consts::PI;
use std::fmt;
use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::entanglement::{
    modular_concurrence, wootters_concurrence_with, BellSettings, ConcurrenceValue, TwoQubitDensity,
};
use crate::error::{Error, Result};
use crate::fock::{FockCutoff, ModeCoefficients, ModeSystem};
use crate::linalg::{self, c, kron, sigma_x, AntilinearOperator, ComplexMatrix, ComplexVector, ONE, ZERO};
use crate::tolerance::Tolerances;

/// Index of `|ee⟩` in the two-qubit basis.
pub const EE: usize = 0;
/// Index of `|gg⟩` in the two-qubit basis.
pub const GG: usize = 3;

/// `ε·exp(−(t−t₀)²/(2σ_t²) − |x−x₀|²/(2σ_x²))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaussianTestFunction {
    pub amplitude: f64,
    pub t0: f64,
    /// Spatial center; only the first component is used in one dimension.
    pub x0: [f64; 3],
    pub sigma_t: f64,
    pub sigma_x: f64,
}

impl GaussianTestFunction {
    pub fn new(amplitude: f64, t0: f64, x0: [f64; 3], sigma_t: f64, sigma_x: f64) -> Result<Self> {
        let f = Self { amplitude, t0, x0, sigma_t, sigma_x };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [("sigma_t", self.sigma_t), ("sigma_x", self.sigma_x)] {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::InvalidParameter(format!("{name} must be positive, got {value}")));
            }
        }
        let finite = self.amplitude.is_finite() && self.t0.is_finite() && self.x0.iter().all(|x| x.is_finite());
        if !finite {
            return Err(Error::InvalidParameter("test function parameters must be finite".into()));
        }
        Ok(())
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self { amplitude: self.amplitude * factor, ..*self }
    }

    /// Same function with the spatial center moved to `x0`.
    pub fn centered_at(&self, t0: f64, x0: [f64; 3]) -> Self {
        Self { t0, x0, ..*self }
    }
}

/// Composite Gauss-Legendre settings for the radial momentum integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureSettings {
    /// Nodes per panel.
    pub order: usize,
    pub initial_panels: usize,
    pub max_panels: usize,
    /// Successive panel doublings must agree to this relative accuracy.
    pub rel_tol: f64,
    /// The integral is cut where the Gaussian envelope falls below `e^{−extent}`.
    pub extent: f64,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        Self { order: 24, initial_panels: 4, max_panels: 8192, rel_tol: 1e-8, extent: 40.0 }
    }
}

impl QuadratureSettings {
    /// One refinement step: twice the starting and maximal panel counts.
    pub fn refined(&self) -> Self {
        Self { initial_panels: 2 * self.initial_panels, max_panels: 2 * self.max_panels, ..*self }
    }
}

/// Free scalar field of mass `m` in `spatial_dim` ∈ {1, 3} space dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldModel {
    pub mass: f64,
    pub spatial_dim: usize,
    #[serde(default)]
    pub quadrature: QuadratureSettings,
}

impl FieldModel {
    pub fn new(mass: f64, spatial_dim: usize) -> Result<Self> {
        let model = Self { mass, spatial_dim, quadrature: QuadratureSettings::default() };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mass >= 0.0 && self.mass.is_finite()) {
            return Err(Error::NegativeParameter { name: "mass", value: self.mass });
        }
        match self.spatial_dim {
            3 => {}
            1 if self.mass > 0.0 => {}
            1 => return Err(Error::InvalidParameter("a massless field in one dimension is infrared divergent".into())),
            d => return Err(Error::Unsupported(format!("spatial dimension {d} (expected 1 or 3)"))),
        }
        let q = &self.quadrature;
        if q.order == 0 || q.initial_panels == 0 || q.max_panels < q.initial_panels || !(q.rel_tol > 0.0) || !(q.extent > 0.0)
        {
            return Err(Error::InvalidParameter(format!("invalid quadrature settings {q:?}")));
        }
        Ok(())
    }
}

impl Default for FieldModel {
    /// Unit-mass field in three space dimensions.
    fn default() -> Self {
        Self { mass: 1.0, spatial_dim: 3, quadrature: QuadratureSettings::default() }
    }
}

/// Default smearing amplitude.
pub const DEFAULT_AMPLITUDE: f64 = 0.2;
/// Default spatial distance between the two detector centers.
pub const DEFAULT_SEPARATION: f64 = 6.0;

/// Mirror-symmetric pair of unit-width Gaussians at `t = 0`, `x = ∓separation/2`.
pub fn mirror_pair(amplitude: f64, separation: f64) -> Result<(GaussianTestFunction, GaussianTestFunction)> {
    let half = 0.5 * separation;
    Ok((
        GaussianTestFunction::new(amplitude, 0.0, [-half, 0.0, 0.0], 1.0, 1.0)?,
        GaussianTestFunction::new(amplitude, 0.0, [half, 0.0, 0.0], 1.0, 1.0)?,
    ))
}

pub fn default_pair() -> (GaussianTestFunction, GaussianTestFunction) {
    mirror_pair(DEFAULT_AMPLITUDE, DEFAULT_SEPARATION).expect("valid defaults")
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// Integrates a complex function on `[0, b]`, doubling the panel count until
/// two successive estimates agree to `rel_tol·max(|I|, ∫|f|)`.
fn integrate<F: Fn(f64) -> Complex64>(q: &QuadratureSettings, b: f64, f: F) -> Result<Complex64> {
    let rule = GaussLegendre::new(NonZeroUsize::new(q.order).expect("validated order"));
    let estimate = |panels: usize| {
        let h = b / panels as f64;
        let (mut value, mut magnitude) = (ZERO, 0.0);
        for p in 0..panels {
            let (lo, hi) = (p as f64 * h, (p + 1) as f64 * h);
            let re = rule.integrate(lo, hi, |k| f(k).re);
            let im = rule.integrate(lo, hi, |k| f(k).im);
            value += c(re, im);
            magnitude += rule.integrate(lo, hi, |k| f(k).norm());
        }
        (value, magnitude)
    };
    let mut panels = q.initial_panels;
    let (mut previous, _) = estimate(panels);
    loop {
        panels *= 2;
        let (current, magnitude) = estimate(panels);
        if (current - previous).norm() <= q.rel_tol * current.norm().max(magnitude) {
            return Ok(current);
        }
        if panels * 2 > q.max_panels {
            return Err(Error::QuadratureNotConverged { previous: previous.norm(), current: current.norm() });
        }
        previous = current;
    }
}

/// Wightman inner product `⟨f, g⟩` (antilinear in `f`).
pub fn inner_product(model: &FieldModel, f: &GaussianTestFunction, g: &GaussianTestFunction) -> Result<Complex64> {
    model.validate()?;
    f.validate()?;
    g.validate()?;
    let d = model.spatial_dim;
    let a = 0.5 * (f.sigma_t.powi(2) + g.sigma_t.powi(2));
    let b = 0.5 * (f.sigma_x.powi(2) + g.sigma_x.powi(2));
    let dt = g.t0 - f.t0;
    // conj(f̂)·ĝ prefactor: ε_f·ε_g·(2π)^{d+1}·σ_t σ_t'·(σ_x σ_x')^d
    let prefactor = f.amplitude
        * g.amplitude
        * (2.0 * PI).powi(d as i32 + 1)
        * f.sigma_t
        * g.sigma_t
        * (f.sigma_x * g.sigma_x).powi(d as i32);
    if prefactor == 0.0 {
        return Ok(ZERO);
    }
    let m2 = model.mass * model.mass;
    // e^{−Aω² − Bk²} ≤ e^{−Am² − (A+B)k²}
    let k_max = (model.quadrature.extent / (a + b)).sqrt();
    let phase = |omega: f64| Complex64::from_polar(1.0, omega * dt);
    let integral = match d {
        3 => {
            let r = (0..3).map(|i| (g.x0[i] - f.x0[i]).powi(2)).sum::<f64>().sqrt();
            // ∫dΩ e^{−ik·R} = 4π·sinc(kR)
            let measure = 4.0 * PI / (2.0 * PI).powi(3);
            integrate(&model.quadrature, k_max, |k| {
                let omega = (k * k + m2).sqrt();
                if omega == 0.0 {
                    return ZERO;
                }
                let weight = k * k / (2.0 * omega) * sinc(k * r) * (-a * omega * omega - b * k * k).exp();
                phase(omega) * (measure * weight)
            })?
        }
        _ => {
            let dx = g.x0[0] - f.x0[0];
            // ±k contributions combine into 2·cos(k·Δx)
            integrate(&model.quadrature, k_max, |k| {
                let omega = (k * k + m2).sqrt();
                let weight = 2.0 * (k * dx).cos() / (2.0 * omega) * (-a * omega * omega - b * k * k).exp();
                phase(omega) * (weight / (2.0 * PI))
            })?
        }
    };
    Ok(integral * prefactor)
}

/// `Im⟨f, g⟩`; the field commutator is `[φ(f), φ(g)] = 2i·Im⟨f, g⟩`.
pub fn symplectic_overlap(model: &FieldModel, f: &GaussianTestFunction, g: &GaussianTestFunction) -> Result<f64> {
    Ok(inner_product(model, f, g)?.im)
}

/// Gram matrix `G_ij = ⟨f_i, f_j⟩`, Hermitian by construction.
pub fn gram_matrix(model: &FieldModel, fs: &[GaussianTestFunction]) -> Result<ComplexMatrix> {
    let n = fs.len();
    let mut g = DMatrix::zeros(n, n);
    for i in 0..n {
        g[(i, i)] = c(inner_product(model, &fs[i], &fs[i])?.re, 0.0);
        for j in i + 1..n {
            let v = inner_product(model, &fs[i], &fs[j])?;
            g[(i, j)] = v;
            g[(j, i)] = v.conj();
        }
    }
    Ok(g)
}

/// Mode coefficients of the two smearing functions in an orthonormal basis of
/// their span, with `⟨c_i, c_j⟩ = G_ij`.
#[derive(Debug, Clone, PartialEq)]
pub struct PairCoefficients {
    pub a: ModeCoefficients,
    pub b: ModeCoefficients,
}

impl PairCoefficients {
    /// Symmetric (Löwdin) embedding: the coefficients are the columns of `G^{1/2}`.
    pub fn from_gram(gram: &ComplexMatrix) -> Result<Self> {
        if gram.nrows() != 2 || gram.ncols() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, found: gram.nrows() });
        }
        let root = linalg::psd_sqrt(gram)?;
        let col = |j: usize| ModeCoefficients::new(vec![root[(0, j)], root[(1, j)]]);
        Ok(Self { a: col(0), b: col(1) })
    }

    /// Real coefficients reproducing `⟨h, h⟩ = hh` for `h = f_A + f_B`, with
    /// `⟨f_A, f_A⟩ = ⟨f_B, f_B⟩ = hh/3` and `⟨f_A, f_B⟩ = hh/6`.
    pub fn abstract_pair(hh: f64) -> Result<Self> {
        if !(hh >= 0.0) {
            return Err(Error::NegativeParameter { name: "hh", value: hh });
        }
        let s = (hh / 3.0).sqrt();
        Ok(Self {
            a: ModeCoefficients::real(&[s, 0.0]),
            b: ModeCoefficients::real(&[0.5 * s, 0.5 * 3f64.sqrt() * s]),
        })
    }

    pub fn sum(&self) -> ModeCoefficients {
        self.a.add(&self.b)
    }

    /// `⟨h, h⟩` with `h = f_A + f_B`.
    pub fn hh(&self) -> f64 {
        self.sum().norm_sqr()
    }

    pub fn is_real(&self) -> bool {
        self.a.0.iter().chain(&self.b.0).all(|z| z.im == 0.0)
    }
}

/// How the smearing enters a scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Smearing {
    TestFunctions { model: FieldModel, f_a: GaussianTestFunction, f_b: GaussianTestFunction },
    NormOverride { hh: f64 },
}

impl Smearing {
    pub fn coefficients(&self) -> Result<PairCoefficients> {
        match self {
            Smearing::TestFunctions { model, f_a, f_b } => {
                PairCoefficients::from_gram(&gram_matrix(model, &[*f_a, *f_b])?)
            }
            Smearing::NormOverride { hh } => PairCoefficients::abstract_pair(*hh),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UdwScenario {
    pub r: f64,
    pub smearing: Smearing,
    pub settings: BellSettings,
    pub cutoff: FockCutoff,
    /// Detector energy gap; only the gapless case is supported.
    pub detector_gap: f64,
}

impl UdwScenario {
    pub fn validate(&self) -> Result<()> {
        check_r(self.r)?;
        if self.detector_gap != 0.0 {
            return Err(Error::Unsupported(format!(
                "detector gap {} (only gapless detectors are modeled)",
                self.detector_gap
            )));
        }
        if let Smearing::NormOverride { hh } = self.smearing {
            check_hh(hh)?;
        }
        Ok(())
    }
}

fn check_r(r: f64) -> Result<()> {
    if !(r >= 0.0 && r.is_finite()) {
        return Err(Error::NegativeParameter { name: "r", value: r });
    }
    Ok(())
}

fn check_hh(hh: f64) -> Result<()> {
    if !(hh >= 0.0 && hh.is_finite()) {
        return Err(Error::NegativeParameter { name: "hh", value: hh });
    }
    Ok(())
}

/// Non-fatal diagnostics attached to numeric states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum UdwWarning {
    /// Probability weight on states with some mode at the cutoff.
    Truncation { top_level_weight: f64 },
}

impl fmt::Display for UdwWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UdwWarning::Truncation { top_level_weight } => {
                write!(f, "TruncationWarning: weight {top_level_weight:.3e} on the highest Fock level")
            }
        }
    }
}

/// Top-level weight above which a [`UdwWarning::Truncation`] is raised.
pub const TRUNCATION_THRESHOLD: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct NumericState {
    pub field: ModeSystem,
    /// Amplitudes on `C²_A ⊗ C²_B ⊗ Fock`.
    pub vector: ComplexVector,
    pub coefficients: PairCoefficients,
    pub warnings: Vec<UdwWarning>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DetectorPairState {
    /// `(|gg⟩⊗e^{iφ(h)}|0⟩ + r|ee⟩⊗e^{−iφ(h)}|0⟩)/√(1+r²)` kept symbolically.
    Analytic { r: f64, hh: f64 },
    Numeric(NumericState),
}

/// `(|gg⟩ + r|ee⟩)/√(1+r²)` on the detectors, field in the vacuum.
pub fn initial_state(r: f64) -> Result<DetectorPairState> {
    check_r(r)?;
    Ok(DetectorPairState::Analytic { r, hh: 0.0 })
}

/// Detector part `(|gg⟩ + r|ee⟩)/√(1+r²)` as a 4-vector.
pub fn initial_detector_vector(r: f64) -> Result<ComplexVector> {
    check_r(r)?;
    let n = (1.0 + r * r).sqrt();
    let mut v = ComplexVector::zeros(4);
    v[GG] = c(1.0 / n, 0.0);
    v[EE] = c(r / n, 0.0);
    Ok(v)
}

pub fn evolved_state_analytic(r: f64, hh: f64) -> Result<DetectorPairState> {
    check_r(r)?;
    check_hh(hh)?;
    Ok(DetectorPairState::Analytic { r, hh })
}

/// Applies `e^{−iσᶻ_A⊗φ(f_A)}·e^{−iσᶻ_B⊗φ(f_B)}` to the initial state on a
/// two-mode truncated Fock space.
pub fn evolved_state_numeric(scenario: &UdwScenario) -> Result<DetectorPairState> {
    scenario.validate()?;
    let coefficients = scenario.smearing.coefficients()?;
    let field = ModeSystem::new(2, scenario.cutoff)?;
    Ok(DetectorPairState::Numeric(evolve_numeric(scenario.r, coefficients, field)?))
}

/// Field states `e^{±iφ(f_A)}e^{±iφ(f_B)}|0⟩` attached to `|gg⟩` (upper sign)
/// and `|ee⟩`; independent of the detector amplitude `r`.
#[derive(Debug, Clone, PartialEq)]
pub struct DephasedBranches {
    field: ModeSystem,
    coefficients: PairCoefficients,
    ground: ComplexVector,
    excited: ComplexVector,
}

impl DephasedBranches {
    pub fn new(coefficients: PairCoefficients, field: ModeSystem) -> Result<Self> {
        let spec_a = linalg::hermitian_eig(&field.dephasing_field(&coefficients.a)?)?;
        let spec_b = linalg::hermitian_eig(&field.dephasing_field(&coefficients.b)?)?;
        // σᶻ = −1 on |g⟩ so |gg⟩ gets e^{+iφ(f_A)}e^{+iφ(f_B)}, |ee⟩ the inverse
        let branch = |s: f64| {
            let phase = |l: f64| Complex64::from_polar(1.0, s * l);
            spec_a.apply(phase, &spec_b.apply(phase, &field.vacuum()))
        };
        let (ground, excited) = (branch(1.0), branch(-1.0));
        Ok(Self { field, coefficients, ground, excited })
    }

    /// Evolved state for the initial detector amplitude `r`.
    pub fn state(&self, r: f64) -> Result<NumericState> {
        let detectors = initial_detector_vector(r)?;
        let field = &self.field;
        let fd = field.dim();
        let mut vector = ComplexVector::zeros(4 * fd);
        for (qubit, branch) in [(GG, &self.ground), (EE, &self.excited)] {
            if detectors[qubit] != ZERO {
                vector.rows_mut(qubit * fd, fd).copy_from(&(branch * detectors[qubit]));
            }
        }
        let weight = (0..4).map(|q| field.top_level_weight(&vector.rows(q * fd, fd).into_owned())).sum::<f64>();
        let mut warnings = Vec::new();
        if weight > TRUNCATION_THRESHOLD {
            warnings.push(UdwWarning::Truncation { top_level_weight: weight });
        }
        Ok(NumericState { field: *field, vector, coefficients: self.coefficients.clone(), warnings })
    }
}

/// Numeric evolution for given mode coefficients.
pub fn evolve_numeric(r: f64, coefficients: PairCoefficients, field: ModeSystem) -> Result<NumericState> {
    check_r(r)?;
    DephasedBranches::new(coefficients, field)?.state(r)
}

/// Truncated coherent state `e^{−|α|²/2}·Σ_n Π_j α_j^{n_j}/√(n_j!)·|n⟩`.
pub fn coherent_state(field: &ModeSystem, alpha: &[Complex64]) -> Result<ComplexVector> {
    if alpha.len() != field.modes() {
        return Err(Error::DimensionMismatch { expected: field.modes(), found: alpha.len() });
    }
    let norm: f64 = alpha.iter().map(|a| a.norm_sqr()).sum();
    let scale = (-0.5 * norm).exp();
    let mut v = ComplexVector::zeros(field.dim());
    for i in 0..field.dim() {
        let mut amp = c(scale, 0.0);
        for (a, &n) in alpha.iter().zip(&field.occupation(i)) {
            let factorial: f64 = (1..=n).map(|k| k as f64).product();
            amp *= a.powu(n as u32) / factorial.sqrt();
        }
        v[i] = amp;
    }
    Ok(v)
}

/// The evolved state from displaced-vacuum algebra alone:
/// `e^{±iφ(f_A)}e^{±iφ(f_B)}|0⟩ = e^{−i·Im⟨f_A,f_B⟩}·|±i·h⟩` with `|α⟩` coherent.
pub fn analytic_state_vector(r: f64, coefficients: &PairCoefficients, field: &ModeSystem) -> Result<ComplexVector> {
    let detectors = initial_detector_vector(r)?;
    let h = coefficients.sum();
    let phase = Complex64::from_polar(1.0, -coefficients.a.inner(&coefficients.b).im);
    let fd = field.dim();
    let mut vector = ComplexVector::zeros(4 * fd);
    for (qubit, s) in [(GG, linalg::I), (EE, -linalg::I)] {
        let alpha: Vec<Complex64> = h.0.iter().map(|z| z * s).collect();
        let b = coherent_state(field, &alpha)? * (detectors[qubit] * phase);
        vector.rows_mut(qubit * fd, fd).copy_from(&b);
    }
    Ok(vector)
}

/// `J_AB[(α,β)⊗(γ,δ)] = (δ̄,γ̄)⊗(β̄,ᾱ)`: swap the detectors, flip both, conjugate.
pub fn j_ab() -> AntilinearOperator {
    let swap = linalg::from_rows(&[
        &[ONE, ZERO, ZERO, ZERO],
        &[ZERO, ZERO, ONE, ZERO],
        &[ZERO, ONE, ZERO, ZERO],
        &[ZERO, ZERO, ZERO, ONE],
    ]);
    AntilinearOperator::new(swap * kron(&sigma_x(), &sigma_x())).expect("4x4")
}

/// `J_AB ⊗ K_F` on `C²⊗C²⊗Fock`, where `K_F = (−1)^N∘conj` is the field
/// conjugation that fixes every `e^{iφ(c)}|0⟩` with real `c`.
pub fn j_ab_lifted(field: &ModeSystem) -> AntilinearOperator {
    let parity: Vec<Complex64> = field.parity().into_iter().map(|p| c(p, 0.0)).collect();
    AntilinearOperator::new(kron(j_ab().matrix(), &linalg::diag(&parity))).expect("square")
}

/// `J_AB ⊗ conj` with plain complex conjugation on the field. It does not
/// see the field damping and serves as a negative control.
pub fn j_ab_plain_lift(field: &ModeSystem) -> AntilinearOperator {
    AntilinearOperator::new(kron(j_ab().matrix(), &linalg::identity(field.dim()))).expect("square")
}

/// Applies `J_AB` to a detector vector (`field = None`) or `J_AB ⊗ K_F` to a
/// joint vector.
pub fn j_ab_apply(v: &ComplexVector, field: Option<&ModeSystem>) -> Result<ComplexVector> {
    match field {
        None => j_ab().apply(v),
        Some(field) => {
            let fd = field.dim();
            if v.len() != 4 * fd {
                return Err(Error::DimensionMismatch { expected: 4 * fd, found: v.len() });
            }
            let parity = field.parity();
            let j = j_ab();
            let mut out = ComplexVector::zeros(v.len());
            for row in 0..4 {
                for col in 0..4 {
                    let m = j.matrix()[(row, col)];
                    if m == ZERO {
                        continue;
                    }
                    for k in 0..fd {
                        out[row * fd + k] += m * parity[k] * v[col * fd + k].conj();
                    }
                }
            }
            Ok(out)
        }
    }
}

/// `2r·e^{−2⟨h,h⟩}/(1+r²)`.
pub fn udw_concurrence(r: f64, hh: f64) -> Result<ConcurrenceValue> {
    check_r(r)?;
    check_hh(hh)?;
    Ok(ConcurrenceValue::clamped(2.0 * r * (-2.0 * hh).exp() / (1.0 + r * r)))
}

/// `2r/(1+r²)`, the concurrence without the field.
pub fn isolated_concurrence(r: f64) -> Result<ConcurrenceValue> {
    udw_concurrence(r, 0.0)
}

/// Partial trace over the field.
pub fn reduced_detector_density(state: &DetectorPairState) -> Result<TwoQubitDensity> {
    match state {
        DetectorPairState::Analytic { r, hh } => {
            let n = 1.0 + r * r;
            let off = r * (-2.0 * hh).exp() / n;
            let mut rho = DMatrix::zeros(4, 4);
            rho[(GG, GG)] = c(1.0 / n, 0.0);
            rho[(EE, EE)] = c(r * r / n, 0.0);
            rho[(GG, EE)] = c(off, 0.0);
            rho[(EE, GG)] = c(off, 0.0);
            TwoQubitDensity::new(rho)
        }
        DetectorPairState::Numeric(s) => {
            let fd = s.field.dim();
            let blocks: Vec<ComplexVector> = (0..4).map(|q| s.vector.rows(q * fd, fd).into_owned()).collect();
            let rho = DMatrix::from_fn(4, 4, |i, j| blocks[j].dotc(&blocks[i]));
            // renormalize away truncation loss
            let tr = rho.trace();
            TwoQubitDensity::new(rho / tr)
        }
    }
}

/// Concurrence read off a state: the closed form for analytic states and
/// `|⟨ψ, (J_AB⊗K_F)ψ⟩|` for numeric ones.
pub fn state_concurrence(state: &DetectorPairState) -> Result<ConcurrenceValue> {
    match state {
        DetectorPairState::Analytic { r, hh } => udw_concurrence(*r, *hh),
        DetectorPairState::Numeric(s) => {
            let psi = &s.vector / c(s.vector.norm(), 0.0);
            modular_concurrence(&psi, &j_ab_lifted(&s.field))
        }
    }
}

/// Wootters concurrence of the reduced detector state.
pub fn reduced_concurrence(state: &DetectorPairState, tol: &Tolerances) -> Result<ConcurrenceValue> {
    wootters_concurrence_with(&reduced_detector_density(state)?, tol)
}

/// `C·[cos(α+β) + cos(α′+β) + cos(α+β′) − cos(α′+β′)]` with `C = udw_concurrence(r, hh)`.
pub fn chsh_udw(r: f64, hh: f64, settings: &BellSettings) -> Result<f64> {
    Ok(udw_concurrence(r, hh)?.value() * settings.angular_sum())
}

/// Settings maximizing the angular sum (value `2√2`).
pub fn optimal_udw_settings() -> BellSettings {
    BellSettings::new(0.0, -PI / 4.0, PI / 2.0, PI / 4.0)
}

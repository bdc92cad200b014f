use rayon::prelude::*;
use tomita::entanglement::{
    concurrence_pure, max_violation_from_concurrence, maximize_settings, wootters_concurrence_with, TwoQubitDensity,
    TwoQubitState, DEFAULT_GRID_STEPS, DEFAULT_REFINE_ITERS, TSIRELSON,
};
use tomita::fock::{weyl_relation_residual, FockCutoff, ModeCoefficients, ModeSystem};
use tomita::linalg::{self, c, identity};
use tomita::modular::{
    bell_phi_plus, bell_psi_plus, generate_algebra_with, local_qubit_algebra, random_standard_instance,
    schmidt_state, tomita_with, verify_modular_properties, AlgebraBasis,
};
use tomita::random;
use tomita::susy::{
    hamiltonian, susy_concurrence, verify_intertwining_with, Sector, SupermultipletState, SusyModel,
};
use tomita::udw::{
    chsh_udw, inner_product, j_ab, mirror_pair, reduced_concurrence, state_concurrence,
    udw_concurrence, DephasedBranches, DetectorPairState, PairCoefficients, Smearing, UdwWarning,
};
use tomita::{ComplexMatrix, ComplexVector, Tolerances};

use crate::config::{ComplexEntry, ModularCase, RunConfig, UdwMode};
use crate::error::CliError;
use crate::table::{Cell, Provenance, ResultTable};

type Result<T> = std::result::Result<T, CliError>;

fn complex(e: &ComplexEntry) -> tomita::Complex64 {
    c(e[0], e[1])
}

fn custom_instance(config: &RunConfig) -> Result<(AlgebraBasis, ComplexVector)> {
    let m = &config.modular;
    let dim = m.omega.len();
    if dim == 0 {
        return Err(CliError::Config("modular.omega is empty".into()));
    }
    let mut generators = Vec::with_capacity(m.generators.len());
    for (k, g) in m.generators.iter().enumerate() {
        if g.len() != dim || g.iter().any(|row| row.len() != dim) {
            return Err(CliError::Config(format!("modular.generators[{k}] is not {dim}x{dim}")));
        }
        generators.push(ComplexMatrix::from_fn(dim, dim, |i, j| complex(&g[i][j])));
    }
    let omega = ComplexVector::from_iterator(dim, m.omega.iter().map(complex));
    let norm = omega.norm();
    if !(norm > 0.0 && norm.is_finite()) {
        return Err(CliError::Config("modular.omega must be a nonzero finite vector".into()));
    }
    let basis = generate_algebra_with(&generators, dim, &config.engine)?;
    Ok((basis, omega / c(norm, 0.0)))
}

fn modular_instance(config: &RunConfig) -> Result<(AlgebraBasis, ComplexVector)> {
    let m = &config.modular;
    Ok(match m.case {
        ModularCase::BellPsiPlus => (local_qubit_algebra(), bell_psi_plus()),
        ModularCase::BellPhiPlus => (local_qubit_algebra(), bell_phi_plus()),
        ModularCase::Schmidt => {
            if !(m.p > 0.0 && m.p < 1.0) {
                return Err(CliError::Config(format!("modular.p must lie in (0, 1), got {}", m.p)));
            }
            (local_qubit_algebra(), schmidt_state(m.p))
        }
        ModularCase::Random => {
            if m.blocks.is_empty() || m.blocks.contains(&0) {
                return Err(CliError::Config("modular.blocks must be non-empty positive sizes".into()));
            }
            random_standard_instance(&mut random::seeded(config.seed), &m.blocks)?
        }
        ModularCase::Custom => custom_instance(config)?,
    })
}

fn push_matrix(table: &mut ResultTable, name: &str, m: &ComplexMatrix) -> Result<()> {
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let z = m[(i, j)];
            table.push(vec![name.into(), i.into(), j.into(), z.re.into(), z.im.into(), z.norm().into(), Provenance::Numeric.into()])?;
        }
    }
    Ok(())
}

/// Property residuals followed by the entries of `J` and `Δ`.
pub fn run_modular(config: &RunConfig) -> Result<ResultTable> {
    let (basis, omega) = modular_instance(config)?;
    let md = tomita_with(&basis, &omega, &config.engine)?;
    let report = verify_modular_properties(&md, &basis);
    let mut table = ResultTable::new(&["quantity", "i", "j", "re", "im", "abs", "provenance"], 3)?;
    for entry in &report.entries {
        let name = format!("residual.{}", entry.name);
        let r = entry.residual;
        table.push(vec![name.into(), 0usize.into(), 0usize.into(), r.into(), 0.0.into(), r.into(), Provenance::Numeric.into()])?;
    }
    let deviation = (&md.delta - identity(md.delta.nrows())).iter().map(|z| z.norm()).fold(0.0, f64::max);
    table.push(vec![
        "delta_identity_deviation".into(),
        0usize.into(),
        0usize.into(),
        deviation.into(),
        0.0.into(),
        deviation.into(),
        Provenance::Numeric.into(),
    ])?;
    push_matrix(&mut table, "j", md.j.matrix())?;
    push_matrix(&mut table, "delta", &md.delta)?;
    table.sort();
    Ok(table)
}

/// Modular concurrence of the supermultiplet states against `2|αβ|`.
pub fn run_susy(config: &RunConfig) -> Result<ResultTable> {
    let s = &config.susy;
    let model = SusyModel::new(FockCutoff::new(s.n_max)?, s.hbar_omega)?;
    let mut table =
        ResultTable::new(&["alpha", "k", "l", "beta", "c_modular", "two_alpha_beta", "residual", "provenance"], 1)?;
    for &alpha in &s.alpha {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(CliError::Config(format!("susy.alpha values must lie in [0, 1], got {alpha}")));
        }
        let beta = (1.0 - alpha * alpha).sqrt();
        let state = SupermultipletState { k: s.k, l: s.l, alpha: c(alpha, 0.0), beta: c(beta, 0.0) };
        let cm = susy_concurrence(&model, &state)?.value();
        let expected = 2.0 * alpha * beta;
        table.push(vec![
            alpha.into(),
            s.k.into(),
            s.l.into(),
            beta.into(),
            cm.into(),
            expected.into(),
            (cm - expected).abs().into(),
            Provenance::Numeric.into(),
        ])?;
    }
    table.sort();
    Ok(table)
}

/// One detector scenario evaluated in closed form and, optionally, numerically.
#[derive(Debug, Clone)]
struct DetectorRow {
    r: f64,
    hh: f64,
    formula: f64,
    chsh_max: f64,
    numeric: Option<NumericColumns>,
}

#[derive(Debug, Clone)]
struct NumericColumns {
    c_j: f64,
    c_wootters: f64,
    warnings: Vec<UdwWarning>,
}

fn detector_row(r: f64, prepared: &Prepared, engine: &Tolerances) -> Result<DetectorRow> {
    let hh = prepared.hh;
    let formula = udw_concurrence(r, hh)?.value();
    let (_, chsh_max) = maximize_settings(
        |s| chsh_udw(r, hh, s).expect("inputs validated above"),
        DEFAULT_GRID_STEPS,
        DEFAULT_REFINE_ITERS,
    );
    let numeric = match &prepared.branches {
        None => None,
        Some(b) => {
            let state = b.state(r)?;
            let warnings = state.warnings.clone();
            let state = DetectorPairState::Numeric(state);
            Some(NumericColumns {
                c_j: state_concurrence(&state)?.value(),
                c_wootters: reduced_concurrence(&state, engine)?.value(),
                warnings,
            })
        }
    };
    Ok(DetectorRow { r, hh, formula, chsh_max, numeric })
}

/// Field branches built once per smearing; `hh` is the reported `⟨h,h⟩`.
struct Prepared {
    hh: f64,
    branches: Option<DephasedBranches>,
}

/// Configured `⟨h,h⟩` values are reported as given, not recomputed from the
/// embedded coefficients.
fn prepare(coefficients: PairCoefficients, hh: Option<f64>, mode: UdwMode, n_max: usize) -> Result<Prepared> {
    let hh = hh.unwrap_or_else(|| coefficients.hh());
    let branches = match mode {
        UdwMode::Abstract => None,
        UdwMode::Numeric => {
            let field = ModeSystem::new(2, FockCutoff::new(n_max)?)?;
            Some(DephasedBranches::new(coefficients, field)?)
        }
    };
    Ok(Prepared { hh, branches })
}

fn detector_columns(mode: UdwMode, leading: &[&'static str]) -> Vec<&'static str> {
    let mut cols = leading.to_vec();
    cols.extend(["r", "hh", "c_formula"]);
    if mode == UdwMode::Numeric {
        cols.extend(["c_j_numeric", "c_wootters_reduced"]);
    }
    cols.extend(["chsh_max", "tsirelson_c", "chsh_bound"]);
    if mode == UdwMode::Numeric {
        cols.push("warning");
    }
    cols.push("provenance");
    cols
}

fn detector_cells(row: &DetectorRow, leading: Vec<Cell>) -> Vec<Cell> {
    let mut cells = leading;
    cells.extend([row.r.into(), row.hh.into(), row.formula.into()]);
    if let Some(n) = &row.numeric {
        cells.extend([n.c_j.into(), n.c_wootters.into()]);
    }
    let cv = tomita::entanglement::ConcurrenceValue::clamped(row.formula);
    cells.extend([row.chsh_max.into(), (TSIRELSON * row.formula).into(), max_violation_from_concurrence(cv).into()]);
    let provenance = match &row.numeric {
        Some(n) => {
            let text: Vec<String> = n.warnings.iter().map(ToString::to_string).collect();
            cells.push(text.join("; ").into());
            Provenance::Numeric
        }
        None => Provenance::Analytic,
    };
    cells.push(provenance.into());
    cells
}

/// Closed-form, `J`-expectation and Wootters concurrences with CHSH optima.
pub fn run_udw(config: &RunConfig) -> Result<ResultTable> {
    let u = &config.udw;
    if u.detector_gap != 0.0 {
        return Err(tomita::Error::Unsupported(format!(
            "detector gap {} (only gapless detectors are modeled)",
            u.detector_gap
        ))
        .into());
    }
    let sources: Vec<(PairCoefficients, Option<f64>)> = match &u.test_functions {
        Some(pair) => {
            let smearing = Smearing::TestFunctions { model: pair.model, f_a: pair.f_a, f_b: pair.f_b };
            vec![(smearing.coefficients()?, None)]
        }
        None => u
            .hh
            .iter()
            .map(|&hh| Ok((PairCoefficients::abstract_pair(hh)?, Some(hh))))
            .collect::<tomita::Result<_>>()?,
    };
    let prepared = sources
        .into_par_iter()
        .map(|(pc, hh)| prepare(pc, hh, u.mode, u.n_max))
        .collect::<Result<Vec<_>>>()?;
    let jobs: Vec<(f64, &Prepared)> = u.r.iter().flat_map(|&r| prepared.iter().map(move |p| (r, p))).collect();
    let rows = jobs
        .par_iter()
        .map(|(r, p)| detector_row(*r, p, &config.engine))
        .collect::<Result<Vec<_>>>()?;
    let mut table = ResultTable::new(&detector_columns(u.mode, &[]), 2)?;
    for row in &rows {
        table.push(detector_cells(row, Vec::new()))?;
    }
    table.sort();
    Ok(table)
}

/// Parallel grid over `r` and either `⟨h,h⟩` or mirror-pair separations.
pub fn run_sweep(config: &RunConfig) -> Result<ResultTable> {
    let s = &config.sweep;
    let by_separation = !s.separations.is_empty();
    let sources: Vec<(Option<f64>, PairCoefficients, Option<f64>)> = if by_separation {
        s.separations
            .par_iter()
            .map(|&d| {
                let (f_a, f_b) = mirror_pair(s.amplitude, d)?;
                let pc = Smearing::TestFunctions { model: s.model, f_a, f_b }.coefficients()?;
                Ok((Some(d), pc, None))
            })
            .collect::<tomita::Result<_>>()?
    } else {
        s.hh.values()
            .into_iter()
            .map(|hh| Ok((None, PairCoefficients::abstract_pair(hh)?, Some(hh))))
            .collect::<tomita::Result<_>>()?
    };
    let prepared = sources
        .into_par_iter()
        .map(|(d, pc, hh)| Ok((d, prepare(pc, hh, s.mode, s.n_max)?)))
        .collect::<Result<Vec<_>>>()?;
    let r_values = s.r.values();
    let jobs: Vec<(f64, &(Option<f64>, Prepared))> =
        r_values.iter().flat_map(|&r| prepared.iter().map(move |p| (r, p))).collect();
    let rows = jobs
        .par_iter()
        .map(|(r, (d, p))| Ok((*d, detector_row(*r, p, &config.engine)?)))
        .collect::<Result<Vec<_>>>()?;
    let leading: &[&str] = if by_separation { &["separation"] } else { &[] };
    let mut table = ResultTable::new(&detector_columns(s.mode, leading), leading.len() + 2)?;
    for (d, row) in &rows {
        table.push(detector_cells(row, d.map(|d| vec![d.into()]).unwrap_or_default()))?;
    }
    table.sort();
    Ok(table)
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Rule {
    /// `value ≤ bound`.
    AtMost(f64),
    /// `value ≥ bound`; used for negative controls.
    AtLeast(f64),
    /// `value < bound`.
    Below(f64),
    /// Recorded, never fails.
    Warn,
}

#[derive(Debug, Clone)]
struct Check {
    module: &'static str,
    property: String,
    value: f64,
    rule: Rule,
}

impl Check {
    fn new(module: &'static str, property: impl Into<String>, value: f64, rule: Rule) -> Self {
        Self { module, property: property.into(), value, rule }
    }

    fn status(&self) -> &'static str {
        let ok = match self.rule {
            Rule::AtMost(t) => self.value <= t,
            Rule::AtLeast(t) => self.value >= t,
            Rule::Below(t) => self.value < t,
            Rule::Warn => return "WARN",
        };
        if ok {
            "PASS"
        } else {
            "FAIL"
        }
    }

    fn bound(&self) -> f64 {
        match self.rule {
            Rule::AtMost(t) | Rule::AtLeast(t) | Rule::Below(t) => t,
            Rule::Warn => f64::NAN,
        }
    }

    fn rule_name(&self) -> &'static str {
        match self.rule {
            Rule::AtMost(_) => "<=",
            Rule::AtLeast(_) => ">=",
            Rule::Below(_) => "<",
            Rule::Warn => "warn",
        }
    }
}

fn max_abs_entry(m: &ComplexMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn verify_modular(config: &RunConfig) -> Result<Vec<Check>> {
    let tol = config.tolerances.modular;
    let engine = &config.engine;
    let mut checks = Vec::new();
    let basis = local_qubit_algebra();
    let psi = tomita_with(&basis, &bell_psi_plus(), engine)?;
    checks.push(Check::new(
        "modular",
        "bell_psi_plus_j_matches_j_ab",
        max_abs_entry(&(psi.j.matrix() - j_ab().matrix())),
        Rule::AtMost(tol),
    ));
    let phi = tomita_with(&basis, &bell_phi_plus(), engine)?;
    checks.push(Check::new(
        "modular",
        "bell_phi_plus_delta_is_identity",
        max_abs_entry(&(&phi.delta - identity(4))),
        Rule::AtMost(tol),
    ));

    let mut rng = random::seeded(config.seed);
    let mut worst: Vec<(&'static str, f64)> = Vec::new();
    let mut errors = 0usize;
    let blocks = tomita::modular::STANDARD_BLOCKS;
    for i in 0..config.verify.random_instances {
        let (basis, omega) = random_standard_instance(&mut rng, blocks[i % blocks.len()])?;
        match tomita_with(&basis, &omega, engine) {
            Ok(md) => {
                for e in verify_modular_properties(&md, &basis).entries {
                    match worst.iter_mut().find(|(n, _)| *n == e.name) {
                        Some(slot) => slot.1 = slot.1.max(e.residual),
                        None => worst.push((e.name, e.residual)),
                    }
                }
            }
            Err(_) => errors += 1,
        }
    }
    for (name, residual) in worst {
        checks.push(Check::new("modular", format!("random_{name}"), residual, Rule::AtMost(tol)));
    }
    checks.push(Check::new("modular", "random_instances_rejected", errors as f64, Rule::AtMost(0.0)));
    Ok(checks)
}

fn verify_entanglement(config: &RunConfig) -> Result<Vec<Check>> {
    let tol = config.tolerances.concurrence;
    let engine = &config.engine;
    let wootters = |psi: &TwoQubitState| -> Result<f64> {
        Ok(wootters_concurrence_with(&TwoQubitDensity::new_with(psi.density().into_matrix(), engine)?, engine)?.value())
    };
    let mut rng = random::seeded(config.seed);
    let mut pure = 0.0f64;
    for _ in 0..config.verify.random_states {
        let psi = TwoQubitState::new(random::state(&mut rng, 4))?;
        pure = pure.max((concurrence_pure(&psi).value() - wootters(&psi)?).abs());
    }
    let mut schmidt = 0.0f64;
    for i in 0..=10 {
        let t = i as f64 * std::f64::consts::FRAC_PI_2 / 10.0;
        let psi = TwoQubitState::schmidt(c(t.cos(), 0.0), c(0.0, t.sin()))?;
        let expected = 2.0 * t.cos() * t.sin();
        schmidt = schmidt.max((concurrence_pure(&psi).value() - expected).abs());
        schmidt = schmidt.max((wootters(&psi)? - expected).abs());
    }
    let product = TwoQubitState::from_amplitudes([c(0.6, 0.0), c(0.0, 0.8), c(0.0, 0.0), c(0.0, 0.0)])?;
    Ok(vec![
        Check::new("entanglement", "pure_matches_wootters", pure, Rule::AtMost(tol)),
        Check::new("entanglement", "schmidt_two_alpha_beta", schmidt, Rule::AtMost(tol)),
        Check::new("entanglement", "bell_state_is_one", (wootters(&TwoQubitState::bell())? - 1.0).abs(), Rule::AtMost(tol)),
        Check::new("entanglement", "product_state_is_zero", wootters(&product)?, Rule::AtMost(tol)),
    ])
}

fn verify_susy(config: &RunConfig) -> Result<Vec<Check>> {
    let tol = config.tolerances.susy;
    let n_max = config.verify.susy_n_max;
    let model = SusyModel::new(FockCutoff::new(n_max)?, config.susy.hbar_omega)?;
    let mut checks = Vec::new();
    for e in verify_intertwining_with(&model, &config.engine)?.entries {
        let rule = if e.name.ends_with("negative_control") { Rule::AtLeast(0.1) } else { Rule::AtMost(tol) };
        checks.push(Check::new("susy", e.name, e.residual, rule));
    }
    let mut sweep = 0.0f64;
    for i in 0..=10 {
        let alpha = i as f64 / 10.0;
        let beta = (1.0 - alpha * alpha).sqrt();
        let state = SupermultipletState { k: 1, l: 2, alpha: c(alpha, 0.0), beta: c(beta, 0.0) };
        sweep = sweep.max((susy_concurrence(&model, &state)?.value() - 2.0 * alpha * beta).abs());
    }
    checks.push(Check::new("susy", "concurrence_alpha_sweep", sweep, Rule::AtMost(tol)));
    let ha = hamiltonian(&model, Sector::A);
    let hw = model.hbar_omega();
    let mut degeneracy = 0.0f64;
    for k in 1..=6usize.min(n_max - 1) {
        for (n, s) in [(k, 0), (k - 1, 1)] {
            let v = model.basis_state(n, 0, s)?;
            degeneracy = degeneracy.max((linalg::inner(&v, &(&ha * &v)).re - hw * k as f64).abs());
        }
    }
    checks.push(Check::new("susy", "supermultiplet_degeneracy", degeneracy, Rule::AtMost(tol)));
    Ok(checks)
}

fn verify_udw(config: &RunConfig) -> Result<Vec<Check>> {
    let v = &config.verify;
    let tol = &config.tolerances;
    let mut agreement = 0.0f64;
    let mut top_weight: Option<f64> = None;
    let mut optimum = 0.0f64;
    let mut excess = f64::NEG_INFINITY;
    for &hh in &v.udw_hh {
        let prepared = prepare(PairCoefficients::abstract_pair(hh)?, Some(hh), UdwMode::Numeric, v.udw_n_max)?;
        for &r in &v.udw_r {
            let row = detector_row(r, &prepared, &config.engine)?;
            let n = row.numeric.as_ref().expect("numeric mode");
            agreement = agreement
                .max((n.c_j - row.formula).abs())
                .max((n.c_wootters - row.formula).abs())
                .max((n.c_j - n.c_wootters).abs());
            for w in &n.warnings {
                let UdwWarning::Truncation { top_level_weight } = w;
                top_weight = Some(top_weight.unwrap_or(0.0).max(*top_level_weight));
            }
            optimum = optimum.max((row.chsh_max - TSIRELSON * row.formula).abs());
            let bound = max_violation_from_concurrence(tomita::entanglement::ConcurrenceValue::clamped(row.formula));
            excess = excess.max(row.chsh_max - bound);
        }
    }
    let mut checks = vec![
        Check::new("udw", "three_way_concurrence_agreement", agreement, Rule::AtMost(tol.udw)),
        Check::new("udw", "chsh_optimum_is_tsirelson_times_c", optimum, Rule::AtMost(tol.chsh)),
        Check::new("udw", "chsh_below_horodecki_bound", excess, Rule::AtMost(1e-9)),
    ];
    if let Some(w) = top_weight {
        checks.push(Check::new("udw", "TruncationWarning", w, Rule::Warn));
    }
    Ok(checks)
}

fn verify_fock(config: &RunConfig) -> Result<Vec<Check>> {
    let n_max = config.verify.fock_n_max;
    let mut rng = random::seeded(config.seed);
    let mut worst = 0.0f64;
    for (modes, draws) in [(1usize, 12usize), (2, 4)] {
        let sys = ModeSystem::new(modes, FockCutoff::new(n_max)?)?;
        for i in 0..draws {
            let raw = ModeCoefficients::new((0..modes).map(|_| random::complex_normal(&mut rng)).collect());
            let target = (i + 1) as f64 / draws as f64;
            let cc = raw.scale(c((target / raw.norm_sqr()).sqrt(), 0.0));
            let got = sys.vacuum_expectation(&sys.dephasing_unitary(&cc, 1.0)?)?;
            worst = worst.max((got - c((-0.5 * target).exp(), 0.0)).norm());
        }
    }
    let cc = ModeCoefficients::new(vec![c(0.6, 0.0)]);
    let dd = ModeCoefficients::new(vec![c(0.3, 0.5)]);
    let mut residuals = Vec::new();
    for n in [8, 16, 24] {
        residuals.push(weyl_relation_residual(&ModeSystem::new(1, FockCutoff::new(n)?)?, &cc, &dd)?);
    }
    let rise = (residuals[1] - residuals[0]).max(residuals[2] - residuals[1]);
    Ok(vec![
        Check::new("fock", "vacuum_expectation", worst, Rule::AtMost(config.tolerances.vacuum)),
        Check::new("fock", "weyl_residual_increase_8_16_24", rise, Rule::Below(0.0)),
    ])
}

fn verify_quadrature(config: &RunConfig) -> Result<Vec<Check>> {
    let tol = config.tolerances.quadrature;
    let model = tomita::udw::FieldModel::default();
    let mut refined = model;
    refined.quadrature = model.quadrature.refined();
    let (f_a, f_b) = mirror_pair(tomita::udw::DEFAULT_AMPLITUDE, config.verify.separation)?;
    let mut change = 0.0f64;
    for f in [&f_a, &f_b] {
        let base = inner_product(&model, f, f)?;
        change = change.max((inner_product(&refined, f, f)? - base).norm() / base.norm());
    }
    let imag = inner_product(&model, &f_a, &f_b)?.im.abs();
    Ok(vec![
        Check::new("quadrature", "refinement_change", change, Rule::AtMost(tol)),
        Check::new("quadrature", "mirror_pair_imaginary_overlap", imag, Rule::AtMost(tol)),
    ])
}

/// Outcome of `verify`: the summary table and the failing property names.
#[derive(Debug, Clone)]
pub struct VerifyOutcome {
    pub table: ResultTable,
    pub failures: Vec<String>,
    pub warnings: Vec<String>,
}

/// Runs every module's invariant suite at the configured tolerances.
pub fn run_verify(config: &RunConfig) -> Result<VerifyOutcome> {
    type Suite = fn(&RunConfig) -> Result<Vec<Check>>;
    let suites: [Suite; 6] =
        [verify_modular, verify_entanglement, verify_susy, verify_udw, verify_fock, verify_quadrature];
    let checks: Vec<Check> = suites
        .par_iter()
        .map(|suite| suite(config))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let mut table = ResultTable::new(&["module", "property", "value", "rule", "bound", "status", "provenance"], 2)?;
    let (mut failures, mut warnings) = (Vec::new(), Vec::new());
    for check in &checks {
        let status = check.status();
        let qualified = format!("{}.{}", check.module, check.property);
        match status {
            "FAIL" => failures.push(qualified),
            "WARN" => warnings.push(format!("{qualified}: top-level weight {:.3e}", check.value)),
            _ => {}
        }
        let provenance = if check.property.starts_with("chsh_") { Provenance::Analytic } else { Provenance::Numeric };
        table.push(vec![
            check.module.into(),
            check.property.clone().into(),
            check.value.into(),
            check.rule_name().into(),
            check.bound().into(),
            status.into(),
            provenance.into(),
        ])?;
    }
    table.sort();
    failures.sort();
    warnings.sort();
    Ok(VerifyOutcome { table, failures, warnings })
}

//! One line per acceptance criterion; exits nonzero if any fails.

use std::process::ExitCode;
use std::time::Instant;

use tomita::entanglement::{
    concurrence_pure, max_violation_from_concurrence, maximize_chsh, maximize_settings, wootters_concurrence,
    TwoQubitState, DEFAULT_GRID_STEPS, DEFAULT_REFINE_ITERS, TSIRELSON,
};
use tomita::fock::{weyl_relation_residual, FockCutoff, ModeCoefficients, ModeSystem};
use tomita::linalg::{self, c, identity};
use tomita::modular::{
    bell_phi_plus, bell_psi_plus, local_qubit_algebra, random_standard_instance, tomita, verify_modular_properties,
    STANDARD_BLOCKS,
};
use tomita::random;
use tomita::susy::{hamiltonian, susy_concurrence, verify_intertwining, Sector, SupermultipletState, SusyModel};
use tomita::udw::{
    chsh_udw, default_pair, evolved_state_numeric, inner_product, j_ab, reduced_concurrence, reduced_detector_density,
    state_concurrence, udw_concurrence, FieldModel, Smearing, UdwScenario,
};
use tomita::Tolerances;

const MODULAR_FIDELITY: f64 = 1e-10;
const PROPERTY_SUITE: f64 = 1e-9;
const PROPERTY_INSTANCES: usize = 20;
const PURE_VS_WOOTTERS: f64 = 1e-9;
const SCHMIDT: f64 = 1e-12;
const SUSY_INTERTWINING: f64 = 1e-12;
const SUSY_SWEEP: f64 = 1e-10;
const SUSY_DEGENERACY: f64 = 1e-12;
const THREE_WAY: f64 = 1e-6;
const CHSH_OPTIMUM: f64 = 1e-4;
const CHSH_BOUND_SLACK: f64 = 1e-9;
const TSIRELSON_CASE: f64 = 1e-6;
const VACUUM: f64 = 1e-6;
const QUADRATURE_STEP: f64 = 1e-8;
const MIRROR_IMAG: f64 = 1e-8;

const R_GRID: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];
const HH_GRID: [f64; 5] = [0.0, 0.1, 0.2, 0.35, 0.5];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn modular_fidelity() -> Outcome {
    let basis = local_qubit_algebra();
    let psi = tomita(&basis, &bell_psi_plus()).expect("psi+ is cyclic and separating");
    let j_err = (psi.j.matrix() - j_ab().matrix()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    let phi = tomita(&basis, &bell_phi_plus()).expect("phi+ is cyclic and separating");
    let d_err = (&phi.delta - identity(4)).iter().map(|z| z.norm()).fold(0.0, f64::max);
    outcome(
        j_err <= MODULAR_FIDELITY && d_err <= MODULAR_FIDELITY,
        format!("max|J - J_AB| = {j_err:.2e}, max|Delta - I| = {d_err:.2e} (tol {MODULAR_FIDELITY:.0e})"),
    )
}

fn property_suite() -> Outcome {
    let mut rng = random::seeded(42);
    let (mut checked, mut worst, mut failures) = (0, 0.0f64, Vec::new());
    for round in 0..2 {
        for blocks in STANDARD_BLOCKS {
            let (basis, omega) = random_standard_instance(&mut rng, blocks).expect("instance");
            let md = match tomita(&basis, &omega) {
                Ok(md) => md,
                Err(e) => {
                    failures.push(format!("{blocks:?}#{round}: {e}"));
                    continue;
                }
            };
            let report = verify_modular_properties(&md, &basis);
            checked += 1;
            worst = worst.max(report.max_residual());
            for name in report.failures(PROPERTY_SUITE) {
                failures.push(format!("{blocks:?}#{round}: {name}"));
            }
        }
    }
    let detail = format!(
        "{checked} instances (dims 4-9), worst residual {worst:.2e} (tol {PROPERTY_SUITE:.0e}){}",
        if failures.is_empty() { String::new() } else { format!(", failing: {}", failures.join("; ")) }
    );
    outcome(failures.is_empty() && checked >= PROPERTY_INSTANCES, detail)
}

fn concurrence_oracles() -> Outcome {
    let mut rng = random::seeded(42);
    let mut pure_err = 0.0f64;
    for _ in 0..50 {
        let psi = TwoQubitState::new(random::state(&mut rng, 4)).expect("unit vector");
        let w = wootters_concurrence(&psi.density()).expect("valid density").value();
        pure_err = pure_err.max((concurrence_pure(&psi).value() - w).abs());
    }
    let mut schmidt_err = 0.0f64;
    for i in 0..=10 {
        let t = i as f64 * std::f64::consts::FRAC_PI_2 / 10.0;
        let (alpha, beta) = (c(t.cos(), 0.0), c(0.0, t.sin()));
        let psi = TwoQubitState::schmidt(alpha, beta).expect("normalized");
        let expected = 2.0 * (alpha * beta).norm();
        schmidt_err = schmidt_err.max((concurrence_pure(&psi).value() - expected).abs());
        schmidt_err = schmidt_err.max((wootters_concurrence(&psi.density()).unwrap().value() - expected).abs());
    }
    let bell = concurrence_pure(&TwoQubitState::bell()).value();
    let product = TwoQubitState::from_amplitudes([c(0.6, 0.0), c(0.0, 0.8), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
    let product = wootters_concurrence(&product.density()).unwrap().value();
    let pass = pure_err <= PURE_VS_WOOTTERS
        && schmidt_err <= SCHMIDT
        && (bell - 1.0).abs() <= SCHMIDT
        && product.abs() <= SCHMIDT;
    outcome(
        pass,
        format!(
            "pure vs Wootters {pure_err:.2e} (tol {PURE_VS_WOOTTERS:.0e}), 2|ab| {schmidt_err:.2e} (tol {SCHMIDT:.0e}), \
             Bell {bell:.15}, product {product:.2e}"
        ),
    )
}

fn susy_section() -> Outcome {
    let hw = 1.5;
    let model = SusyModel::new(FockCutoff::new(8).expect("cutoff"), hw).expect("model");
    let report = verify_intertwining(&model).expect("report");
    let jqj = report.get("j_qa_j_equals_qb").expect("entry");

    let mut sweep = 0.0f64;
    for i in 0..=10 {
        let alpha = i as f64 / 10.0;
        let beta = (1.0 - alpha * alpha).max(0.0).sqrt();
        let state = SupermultipletState { k: 3, l: 2, alpha: c(alpha, 0.0), beta: c(beta, 0.0) };
        let got = susy_concurrence(&model, &state).expect("valid state").value();
        sweep = sweep.max((got - 2.0 * alpha * beta).abs());
    }

    let mut degeneracy = 0.0f64;
    for (sector, spins) in [(Sector::A, (0, 1)), (Sector::B, (1, 0))] {
        let h = hamiltonian(&model, sector);
        let energy = |n: usize, m: usize, s: usize| {
            let v = model.basis_state(n, m, s).expect("in range");
            linalg::inner(&v, &(&h * &v)).re
        };
        for k in 0..=6usize {
            for spectator in 0..3 {
                let (upper, lower) = match sector {
                    Sector::A => (energy(k, spectator, spins.0), (k > 0).then(|| energy(k - 1, spectator, spins.1))),
                    Sector::B => (energy(spectator, k, spins.0), (k > 0).then(|| energy(spectator, k - 1, spins.1))),
                };
                let target = hw * k as f64;
                degeneracy = degeneracy.max((upper - target).abs());
                if let Some(e) = lower {
                    degeneracy = degeneracy.max((e - target).abs());
                }
            }
        }
    }
    let pass = jqj <= SUSY_INTERTWINING && sweep <= SUSY_SWEEP && degeneracy <= SUSY_DEGENERACY;
    outcome(
        pass,
        format!(
            "JQaJ - Qb {jqj:.2e} (tol {SUSY_INTERTWINING:.0e}), alpha sweep {sweep:.2e} (tol {SUSY_SWEEP:.0e}), \
             E = k*hw for k <= 6 off by {degeneracy:.2e}"
        ),
    )
}

fn numeric_scenario(r: f64, hh: f64) -> UdwScenario {
    UdwScenario {
        r,
        smearing: Smearing::NormOverride { hh },
        settings: Default::default(),
        cutoff: FockCutoff::new(16).expect("cutoff"),
        detector_gap: 0.0,
    }
}

fn three_way() -> Outcome {
    let tol = Tolerances::default();
    let mut worst = 0.0f64;
    for r in R_GRID {
        for hh in HH_GRID {
            let state = evolved_state_numeric(&numeric_scenario(r, hh)).expect("numeric state");
            let formula = udw_concurrence(r, hh).expect("valid").value();
            let modular = state_concurrence(&state).expect("J expectation").value();
            let wootters = reduced_concurrence(&state, &tol).expect("reduced").value();
            worst = worst.max((modular - formula).abs()).max((wootters - formula).abs()).max((modular - wootters).abs());
        }
    }
    outcome(worst <= THREE_WAY, format!("25 points, n_max 16, max discrepancy {worst:.2e} (tol {THREE_WAY:.0e})"))
}

fn chsh_consistency() -> Outcome {
    let (mut optimum_err, mut bound_excess, mut full_err) = (0.0f64, f64::NEG_INFINITY, 0.0f64);
    for r in R_GRID {
        for hh in HH_GRID {
            let cv = udw_concurrence(r, hh).expect("valid");
            let (_, best) = maximize_settings(
                |s| chsh_udw(r, hh, s).expect("valid"),
                DEFAULT_GRID_STEPS,
                DEFAULT_REFINE_ITERS,
            );
            let bound = max_violation_from_concurrence(cv);
            optimum_err = optimum_err.max((best - TSIRELSON * cv.value()).abs());
            bound_excess = bound_excess.max(best - bound);
            // unrestricted qubit observables on the reduced density reach the bound itself
            let rho = reduced_detector_density(&evolved_state_numeric(&numeric_scenario(r, hh)).unwrap()).unwrap();
            let (_, full) = maximize_chsh(&rho, DEFAULT_GRID_STEPS, DEFAULT_REFINE_ITERS);
            full_err = full_err.max((full - bound).abs());
        }
    }
    let (_, tsirelson) =
        maximize_settings(|s| chsh_udw(1.0, 0.0, s).unwrap(), DEFAULT_GRID_STEPS, DEFAULT_REFINE_ITERS);
    let tsirelson_err = (tsirelson - TSIRELSON).abs();
    let pass = optimum_err <= CHSH_OPTIMUM
        && bound_excess <= CHSH_BOUND_SLACK
        && tsirelson_err <= TSIRELSON_CASE
        && full_err <= CHSH_OPTIMUM;
    outcome(
        pass,
        format!(
            "max |B* - 2sqrt2 C| {optimum_err:.2e} (tol {CHSH_OPTIMUM:.0e}), max B* - 2sqrt(1+C^2) {bound_excess:.2e}, \
             r=1 hh=0 gap to 2sqrt2 {tsirelson_err:.2e} (tol {TSIRELSON_CASE:.0e}), \
             reduced-density optimum vs 2sqrt(1+C^2) {full_err:.2e}"
        ),
    )
}

fn weyl_vacuum() -> Outcome {
    let one = ModeSystem::new(1, FockCutoff::new(16).unwrap()).unwrap();
    let two = ModeSystem::new(2, FockCutoff::new(16).unwrap()).unwrap();
    let mut rng = random::seeded(42);
    let mut worst = 0.0f64;
    for i in 0..40 {
        let (sys, modes) = if i % 2 == 0 { (&one, 1) } else { (&two, 2) };
        let raw = ModeCoefficients::new((0..modes).map(|_| random::complex_normal(&mut rng)).collect());
        // ‖c‖² swept over (0, 1], endpoints included
        let target = if i == 0 || i == 1 { 1.0 } else { (i as f64) / 40.0 };
        let cc = raw.scale(c((target / raw.norm_sqr()).sqrt(), 0.0));
        let u = sys.dephasing_unitary(&cc, 1.0).unwrap();
        let got = sys.vacuum_expectation(&u).unwrap();
        worst = worst.max((got - c((-0.5 * cc.norm_sqr()).exp(), 0.0)).norm());
    }
    let cc = ModeCoefficients::new(vec![c(0.6, 0.0)]);
    let dd = ModeCoefficients::new(vec![c(0.3, 0.5)]);
    let residuals: Vec<f64> = [8, 16, 24]
        .iter()
        .map(|&n| {
            let sys = ModeSystem::new(1, FockCutoff::new(n).unwrap()).unwrap();
            weyl_relation_residual(&sys, &cc, &dd).unwrap()
        })
        .collect();
    let decreasing = residuals[0] > residuals[1] && residuals[1] > residuals[2];
    outcome(
        worst <= VACUUM && decreasing,
        format!(
            "vacuum error {worst:.2e} over 40 draws with |c|^2 <= 1 (tol {VACUUM:.0e}), \
             Weyl residual n_max 8/16/24 = {:.2e}/{:.2e}/{:.2e}",
            residuals[0], residuals[1], residuals[2]
        ),
    )
}

fn quadrature_stability() -> Outcome {
    let model = FieldModel::default();
    let mut refined = model;
    refined.quadrature = refined.quadrature.refined();
    let (fa, fb) = default_pair();
    let mut rel = 0.0f64;
    for f in [&fa, &fb] {
        let base = inner_product(&model, f, f).expect("converged");
        let finer = inner_product(&refined, f, f).expect("converged");
        rel = rel.max((finer - base).norm() / base.norm());
    }
    let imag = inner_product(&model, &fa, &fb).expect("converged").im.abs();
    outcome(
        rel < QUADRATURE_STEP && imag <= MIRROR_IMAG,
        format!("<f,f> refinement change {rel:.2e} (tol {QUADRATURE_STEP:.0e}), |Im<fA,fB>| {imag:.2e} (tol {MIRROR_IMAG:.0e})"),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("modular engine fidelity", modular_fidelity),
        ("modular property suite", property_suite),
        ("concurrence oracles", concurrence_oracles),
        ("supersymmetric intertwining", susy_section),
        ("detector three-way agreement", three_way),
        ("CHSH consistency", chsh_consistency),
        ("Weyl and vacuum convergence", weyl_vacuum),
        ("quadrature stability", quadrature_stability),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let status = if result.pass { "PASS" } else { "FAIL" };
        println!("criterion {} {status} {name}: {} [{:.2?}]", i + 1, result.detail, start.elapsed());
        failed += usize::from(!result.pass);
    }
    if failed == 0 {
        println!("acceptance: 8/8 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} of 8 criteria failed");
        ExitCode::FAILURE
    }
}

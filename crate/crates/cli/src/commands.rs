use anomaly_core::cecomplex::{cohomology_bruteforce, cohomology_theorem};
use anomaly_core::deformation::{
    anomaly_report, continue_series, obstruction_second_order, DeformationProblem, FirstOrderOutcome,
    ObstructionClass, SeriesOutcome,
};
use anomaly_core::linalg::commutator;
use anomaly_core::random::random_anti_hermitian;
use anomaly_core::spectral::{joint_diagonalize, JointSpectrum, SymmetryPair};
use anomaly_core::verma::{
    check_cocycle, check_deformation_cocycle, check_sl2_relations, parse_rational, verma_operators,
    CocycleCheck, TruncatedPolyOperator,
};
use anomaly_core::{ComplexMatrix, Tolerances, C64};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::args::{Cli, Command, Method};
use crate::problem::{to_json, ProblemFile};
use crate::report::*;
use crate::CliError;

pub const DEFAULT_ORDER: usize = 6;

pub fn execute(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::Spectrum { file } => spectrum(load(file, cli)?),
        Command::Cohomology { file, method } => cohomology(load(file, cli)?, *method),
        Command::Anomaly { file } => anomaly(load(file, cli)?, cli),
        Command::VermaCheck { lambda, degree } => verma(lambda, *degree),
    }
}

/// Reads the file and folds the tolerance flags into its overrides, so the
/// echoed input reproduces the run.
fn load(path: &std::path::Path, cli: &Cli) -> Result<ProblemFile, CliError> {
    let mut file = ProblemFile::read(path)?;
    let t = &mut file.tolerances;
    t.cluster = cli.tol_cluster.or(t.cluster);
    t.rank = cli.tol_rank.or(t.rank);
    t.obstruction = cli.tol_obstruction.or(t.obstruction);
    Ok(file)
}

fn setup(file: &ProblemFile) -> Result<(Tolerances, SymmetryPair, JointSpectrum), CliError> {
    let tol = file.tolerances.resolve()?;
    let pair = SymmetryPair::new(file.hamiltonian()?, file.symmetry()?, &tol)?;
    let spectrum = joint_diagonalize(&pair, tol.cluster)?;
    Ok((tol, pair, spectrum))
}

fn effective(tol: &Tolerances, cluster: f64, obstruction: Option<f64>, first_order: Option<f64>) -> EffectiveTolerances {
    EffectiveTolerances {
        hermiticity: tol.hermiticity,
        commute: tol.commute,
        rank: tol.rank,
        cluster,
        obstruction,
        first_order,
        oracle_max_dim: tol.oracle_max_dim,
    }
}

fn sectors(spectrum: &JointSpectrum) -> Vec<SectorJson> {
    spectrum
        .sectors
        .iter()
        .map(|s| SectorJson {
            lambda: s.lambda,
            mu: s.mu,
            multiplicity: s.multiplicity,
        })
        .collect()
}

fn spectrum(file: ProblemFile) -> Result<Report, CliError> {
    let (tol, _, spec) = setup(&file)?;
    Ok(Report::Spectrum(SpectrumReport {
        tolerances: effective(&tol, spec.cluster_tol, tol.obstruction, tol.first_order),
        sectors: sectors(&spec),
        nondegenerate: spec.is_nondegenerate(),
        commutant_dim: spec.commutant_dim(),
        input: file,
    }))
}

fn cohomology(file: ProblemFile, method: Method) -> Result<Report, CliError> {
    let (tol, pair, spec) = setup(&file)?;
    let theorem = matches!(method, Method::Theorem | Method::Both).then(|| cohomology_theorem(&spec).dims.into());
    let brute = match method {
        Method::Brute | Method::Both => Some(cohomology_bruteforce(&pair, tol.rank)?.dims.into()),
        Method::Theorem => None,
    };
    let agree = match (theorem, brute) {
        (Some(a), Some(b)) => Some(a == b),
        _ => None,
    };
    Ok(Report::Cohomology(CohomologyReport {
        tolerances: effective(&tol, spec.cluster_tol, tol.obstruction, tol.first_order),
        method: format!("{method:?}").to_lowercase(),
        theorem,
        brute_force: brute,
        agree,
        input: file,
    }))
}

fn class_json(order: usize, c: &ObstructionClass) -> ClassJson {
    ClassJson {
        order,
        representative: to_json(c.representative.inner()),
        observable: to_json(&c.observable),
        coefficients: c.coefficients.clone(),
        norm: c.norm,
        tolerance: c.tolerance,
        anomalous: c.anomalous,
    }
}

fn anomaly(file: ProblemFile, cli: &Cli) -> Result<Report, CliError> {
    let (tol, pair, _) = setup(&file)?;
    let dh = file
        .delta_h1()?
        .ok_or_else(|| CliError::Validation("anomaly needs delta_H1 in the problem file".into()))?;
    let order = cli.order.unwrap_or(DEFAULT_ORDER);
    if order < 2 {
        return Err(CliError::Validation(format!("--order must be at least 2, got {order}")));
    }
    let prob = DeformationProblem::new(pair, dh, file.delta_s1()?, tol.clone())?;
    let rep = anomaly_report(&prob)?;

    let (first_order, delta_s1) = match &rep.first_order {
        FirstOrderOutcome::Solved(sol) => (
            FirstOrderJson {
                status: "solved".into(),
                delta_s1: Some(to_json(&sol.delta_s1)),
                supplied: Some(sol.supplied),
                residual: Some(sol.residual),
                blocks: Vec::new(),
            },
            Some(sol.delta_s1.clone()),
        ),
        FirstOrderOutcome::Obstructed(blocks) => (
            FirstOrderJson {
                status: "obstructed".into(),
                delta_s1: None,
                supplied: None,
                residual: None,
                blocks: blocks
                    .iter()
                    .map(|b| BlockJson {
                        first: b.block.first,
                        second: b.block.second,
                        norm: b.norm,
                    })
                    .collect(),
            },
            None,
        ),
    };

    let mut anomaly = rep.anomaly;
    let mut anomaly_order = rep.anomaly.then_some(2);
    let mut obstruction = rep.obstruction.as_ref().map(|c| class_json(2, c));
    let mut series = None;
    if delta_s1.is_some() && !rep.anomaly {
        match continue_series(&prob, order)? {
            SeriesOutcome::Series(s) => {
                series = Some(SeriesJson {
                    order: s.order,
                    gauge: s.gauge.clone(),
                    gauge_generator: to_json(s.gauge_generator.inner()),
                    delta_h: s.h_coeffs.iter().map(to_json).collect(),
                    delta_s: s.s_coeffs.iter().map(to_json).collect(),
                    order_residuals: s.order_residuals.clone(),
                    residual_profile: s.residual_profile.iter().map(|&(t, r)| [t, r]).collect(),
                    residual_slope: s.residual_slope,
                })
            }
            SeriesOutcome::Obstructed { order, class } => {
                anomaly = true;
                anomaly_order = Some(order);
                obstruction = Some(class_json(order, &class));
            }
        }
    }

    let gauge_check = match (cli.seed, &delta_s1) {
        (Some(seed), Some(ds)) => Some(gauge_check(&prob, ds, seed)?),
        _ => None,
    };

    let tolerances = effective(
        &tol,
        prob.spectrum().cluster_tol,
        delta_s1.as_ref().map(|ds| prob.obstruction_tol(ds)),
        delta_s1.as_ref().map(|ds| prob.first_order_tol(ds)),
    );
    Ok(Report::Anomaly(Box::new(AnomalyReport {
        tolerances,
        input: file,
        sectors: sectors(prob.spectrum()),
        nondegenerate: rep.nondegenerate,
        cohomology_theorem: rep.cohomology_theorem.into(),
        cohomology_brute_force: rep.cohomology_bruteforce.map(Into::into),
        first_order,
        obstruction,
        feasibility_residual: rep.feasibility_residual,
        anomaly,
        anomaly_order,
        series,
        gauge_check,
    })))
}

/// Shifts `(δ¹Ĥ, δ¹Ŝ)` by the coboundary of a random `Ω` and recomputes the
/// class; it must not move.
fn gauge_check(prob: &DeformationProblem, ds: &ComplexMatrix, seed: u64) -> Result<GaugeCheckJson, CliError> {
    let pair = prob.pair();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let omega = random_anti_hermitian(&mut rng, pair.dim()).into_inner();
    let omega = omega.scale_real(prob.delta_h1().frobenius_norm().max(1.0) / omega.frobenius_norm().max(f64::MIN_POSITIVE));
    let minus_i = C64::new(0.0, -1.0);
    let dh2 = prob.delta_h1() + &commutator(pair.h().inner(), &omega)?.scale(minus_i);
    let ds2 = ds + &commutator(pair.s().inner(), &omega)?.scale(minus_i);
    let before = obstruction_second_order(prob, ds)?;
    let shifted = DeformationProblem::new(pair.clone(), dh2.clone(), Some(ds2.clone()), prob.tolerances().clone())?;
    let after = obstruction_second_order(&shifted, &ds2)?;
    let class_difference = (before.representative.inner() - after.representative.inner()).frobenius_norm();
    let tolerance = 1e-9 * (dh2.frobenius_norm() * ds2.frobenius_norm()).max(1.0);
    Ok(GaugeCheckJson {
        seed,
        shift_norm: omega.frobenius_norm(),
        class_difference,
        tolerance,
        passed: class_difference <= tolerance,
    })
}

fn cocycle_json(c: &CocycleCheck) -> CocycleJson {
    CocycleJson {
        exact_columns: c.exact_columns.clone(),
        violating_columns: c.violating_columns.clone(),
        passed: c.passed,
    }
}

fn verma(lambda: &str, degree: usize) -> Result<Report, CliError> {
    let lam = parse_rational(lambda)?;
    let ops = verma_operators(&lam, degree)?;
    let relations = check_sl2_relations(&ops)
        .into_iter()
        .map(|r| RelationJson {
            relation: r.relation.to_string(),
            exact_degrees: r.exact_degrees.clone(),
            violations: r.violations.iter().map(|(d, v)| (*d, v.to_string())).collect(),
            exact_below_truncation: r.exact_below(degree),
        })
        .collect();
    let cocycle = check_deformation_cocycle(&lam, degree)?;
    let x = TruncatedPolyOperator::multiplication(degree).matrix;
    let negative = check_cocycle(&lam, degree, &x.mul(&x))?;
    Ok(Report::VermaCheck(VermaReport {
        lambda: lam.to_string(),
        degree,
        relations,
        cocycle: cocycle_json(&cocycle),
        negative_control: cocycle_json(&negative),
    }))
}

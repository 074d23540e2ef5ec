use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use capkern::capitulation::{capitulation_kernel, verify_sequence, Covering};
use capkern::cohom::{bar_complex, cohomology};
use capkern::fixture::{BuildParams, Fixture};
use capkern::report::{self, CheckLine, Report};
use capkern::Error;

#[derive(Parser)]
#[command(
    name = "capkern",
    version,
    about = "Exact computation of capitulation kernels for Galois coverings of rings of Σ-integers, \
             with machine verification of the associated five-term exact sequence"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Parser)]
struct CommonArgs {
    /// Fixture files; several paths run as an isolated batch.
    #[arg(required = true)]
    fixtures: Vec<PathBuf>,
    /// Seed for the randomized steps (resolvents, re-choice fuzzing).
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Coordinate bound of the class-group saturation sweep.
    #[arg(long, default_value_t = capkern::classunits::DEFAULT_HEIGHT_BOUND)]
    height_bound: i64,
    /// Fractional bits where interval arithmetic starts.
    #[arg(long, default_value_t = capkern::classunits::DEFAULT_PREC_START)]
    precision_start: u32,
    /// Fractional-bit ceiling for interval arithmetic.
    #[arg(long, default_value_t = capkern::classunits::DEFAULT_PREC_CEILING)]
    precision_ceiling: u32,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a fixture and run every certificate check.
    Validate(CommonArgs),
    /// Validate and print the verified class group structures.
    Classgroup(CommonArgs),
    /// Validate and print the verified unit lattices.
    Units(CommonArgs),
    /// Compute the capitulation kernel with principal witnesses.
    Capitulation(CommonArgs),
    /// Compute H^1 and H^2 of mu_n and of the extension units.
    Cohomology(CommonArgs),
    /// Run the full five-term pipeline and verify exactness.
    VerifySequence(CommonArgs),
}

impl Command {
    fn args(&self) -> &CommonArgs {
        match self {
            Command::Validate(a)
            | Command::Classgroup(a)
            | Command::Units(a)
            | Command::Capitulation(a)
            | Command::Cohomology(a)
            | Command::VerifySequence(a) => a,
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Command::Validate(_) => "validate",
            Command::Classgroup(_) => "classgroup",
            Command::Units(_) => "units",
            Command::Capitulation(_) => "capitulation",
            Command::Cohomology(_) => "cohomology",
            Command::VerifySequence(_) => "verify-sequence",
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let args = cli.command.args();
    let params = BuildParams {
        seed: args.seed,
        height_bound: args.height_bound,
        prec_start: args.precision_start,
        prec_ceiling: args.precision_ceiling,
    };
    let jobs: Vec<PathBuf> = args.fixtures.clone();
    let run_one = |path: &PathBuf| run_fixture(cli.command.name(), path, &params);
    // Batch runs are fully isolated per fixture; reports print in input
    // order either way.
    let results: Vec<Result<Report, Error>> = {
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            if jobs.len() > 1 {
                jobs.par_iter().map(run_one).collect()
            } else {
                jobs.iter().map(run_one).collect()
            }
        }
        #[cfg(not(feature = "parallel"))]
        {
            jobs.iter().map(run_one).collect()
        }
    };
    let mut code = 0;
    for (path, result) in jobs.iter().zip(results) {
        match result {
            Ok(report) => {
                match args.format {
                    Format::Text => println!("{}", report.to_text()),
                    Format::Structured => println!("{}", report.to_structured()),
                }
                if !report.all_passed() {
                    let first = report
                        .validation
                        .iter()
                        .chain(report.expectations.iter().flatten())
                        .find(|c| !c.passed);
                    if let Some(c) = first {
                        eprintln!("{}: failed check '{}': {}", path.display(), c.name, c.detail);
                        code = code.max(1);
                    } else {
                        // Exactness is the remaining failure mode.
                        eprintln!("{}: exact sequence verification failed", path.display());
                        code = code.max(2);
                    }
                }
            }
            Err(e) => {
                eprintln!("{}: {e}", path.display());
                code = code.max(e.exit_code());
            }
        }
    }
    ExitCode::from(code as u8)
}

fn run_fixture(command: &str, path: &PathBuf, params: &BuildParams) -> Result<Report, Error> {
    let fixture = Fixture::parse_file(path)?;
    let mut report = Report::new(
        &fixture.name,
        command,
        params.seed,
        params.height_bound,
        (params.prec_start, params.prec_ceiling),
    );
    let covering = fixture.build_covering(params)?;
    for note in covering
        .base
        .class_group
        .validation_notes
        .iter()
        .map(|n| ("base class group", n))
        .chain(covering.ext.class_group.validation_notes.iter().map(|n| ("ext class group", n)))
        .chain(covering.base.units.validation_notes.iter().map(|n| ("base units", n)))
        .chain(covering.ext.units.validation_notes.iter().map(|n| ("ext units", n)))
        .chain(covering.validation_notes.iter().map(|n| ("covering", n)))
    {
        report.validation.push(CheckLine {
            name: note.0.to_string(),
            passed: true,
            detail: note.1.clone(),
        });
    }
    match command {
        "validate" => {}
        "classgroup" => {
            report.class_groups = Some(vec![
                report::group_section(
                    &format!("Cl_Σ({})", covering.base.field.name),
                    &covering.base.class_group.group,
                ),
                report::group_section(
                    &format!("Cl_Σ({})", covering.ext.field.name),
                    &covering.ext.class_group.group,
                ),
            ]);
        }
        "units" => {
            report.unit_ranks = Some(vec![
                CheckLine {
                    name: format!("units of {}", covering.base.field.name),
                    passed: true,
                    detail: format!(
                        "torsion order {}, free rank {}",
                        covering.base.units.torsion_order,
                        covering.base.units.rank()
                    ),
                },
                CheckLine {
                    name: format!("units of {}", covering.ext.field.name),
                    passed: true,
                    detail: format!(
                        "torsion order {}, free rank {}",
                        covering.ext.units.torsion_order,
                        covering.ext.units.rank()
                    ),
                },
            ]);
        }
        "capitulation" => {
            let kernel = capitulation_kernel(&covering)?;
            report.kernel = Some(report::group_section("Ker j", &kernel.kernel.group));
            report.kernel_witnesses = Some(
                kernel
                    .witnesses
                    .iter()
                    .map(|(ideal, x)| report::WitnessLine {
                        ideal: format!("hnf {}", ideal.short_desc()),
                        generator: covering.ext.field.dump_element(x),
                    })
                    .collect(),
            );
            check_kernel_expectations(&fixture, &kernel.kernel.group, &mut report);
        }
        "cohomology" => {
            report.cohomology = Some(cohomology_sections(&covering)?);
        }
        "verify-sequence" => {
            let outcome = verify_sequence(&covering, params.seed)?;
            let section = report::sequence_section(&outcome);
            check_sequence_expectations(&fixture, &outcome, &mut report);
            report.sequence = Some(section);
        }
        other => unreachable!("unknown command {other}"),
    }
    report.precision_used = covering
        .base
        .units
        .max_precision_used()
        .max(covering.ext.units.max_precision_used());
    Ok(report)
}

fn cohomology_sections(covering: &Covering) -> Result<Vec<report::GroupSection>, Error> {
    let mu = covering.mu_module()?;
    let mu_bar = bar_complex(&mu.module)?;
    let unit_mod = covering.unit_module()?;
    let unit_bar = bar_complex(&unit_mod)?;
    Ok(vec![
        report::group_section("H^1(Δ, μ_n)", &cohomology(&mu_bar, 1)?.group),
        report::group_section("H^2(Δ, μ_n)", &cohomology(&mu_bar, 2)?.group),
        report::group_section("H^1(Δ, U_K)", &cohomology(&unit_bar, 1)?.group),
        report::group_section("H^2(Δ, U_K)", &cohomology(&unit_bar, 2)?.group),
    ])
}

fn check_kernel_expectations(
    fixture: &Fixture,
    kernel: &capkern::fgab::FgAbGroup,
    report: &mut Report,
) {
    let mut checks = Vec::new();
    if let Some(expected) = &fixture.expectations.kernel_invariants {
        let actual = kernel.invariant_factors().to_vec();
        checks.push(CheckLine {
            name: "kernel_invariants".into(),
            passed: &actual == expected,
            detail: format!("expected {expected:?}, computed {actual:?}"),
        });
    }
    if !checks.is_empty() {
        report.expectations = Some(checks);
    }
}

fn check_sequence_expectations(
    fixture: &Fixture,
    outcome: &capkern::capitulation::SequenceOutcome,
    report: &mut Report,
) {
    let mut checks = Vec::new();
    let exp = &fixture.expectations;
    if let Some(orders) = &exp.term_orders {
        let actual: Vec<num_bigint::BigInt> =
            outcome.terms.iter().map(|t| t.order().unwrap_or_default()).collect();
        checks.push(CheckLine {
            name: "term_orders".into(),
            passed: &actual == orders,
            detail: format!("expected {orders:?}, computed {actual:?}"),
        });
    }
    if let Some(expected) = &exp.kernel_invariants {
        let actual = outcome.terms[2].invariant_factors().to_vec();
        checks.push(CheckLine {
            name: "kernel_invariants".into(),
            passed: &actual == expected,
            detail: format!("expected {expected:?}, computed {actual:?}"),
        });
    }
    if let Some(expected) = &exp.psi_quotient_invariants {
        let actual = outcome.terms[3].invariant_factors().to_vec();
        checks.push(CheckLine {
            name: "psi_quotient_invariants".into(),
            passed: &actual == expected,
            detail: format!("expected {expected:?}, computed {actual:?}"),
        });
    }
    if let Some(expected) = &exp.h1_units_order {
        let actual = &outcome.cross_check.h1_units_order;
        checks.push(CheckLine {
            name: "h1_units_order".into(),
            passed: actual == expected,
            detail: format!("expected {expected}, computed {actual}"),
        });
    }
    if let Some(expected) = &exp.unit_index {
        let actual = outcome
            .corollary
            .as_ref()
            .map(|c| c.unit_index.clone())
            .unwrap_or_default();
        checks.push(CheckLine {
            name: "unit_index".into(),
            passed: &actual == expected,
            detail: format!("expected {expected}, computed {actual}"),
        });
    }
    if let Some(expected) = exp.corollary_isomorphism {
        let actual = outcome.corollary.as_ref().map(|c| c.isomorphism_holds);
        checks.push(CheckLine {
            name: "corollary_isomorphism".into(),
            passed: actual == Some(expected),
            detail: format!("expected {expected}, computed {actual:?}"),
        });
    }
    if !checks.is_empty() {
        report.expectations = Some(checks);
    }
}

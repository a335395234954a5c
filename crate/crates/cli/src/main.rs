//! `nlie`: validation, cohomology and deformation reports for n-Lie algebras
//! and their morphisms.
//!
//! Exit status 0 on success, 1 on a mathematical failure, 2 on I/O or parse
//! errors.

mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use nlie_core::io::{self, Document};
use nlie_core::{
    apply_automorphism, cohomology_module, cohomology_self, extend_order, infinitesimal, linalg,
    morphism_cohomology, obstruction, triple_coboundary, triple_matrix, validate_deformation,
    Cochain, CochainTriple, CohomologyReport, DeformedMorphism, Error, Morphism, NLieAlgebra,
    Rational, TripleSpace,
};
use serde_json::{json, Value};

use report::{Dimensions, Input, Report};

#[derive(Parser, Debug)]
#[command(name = "nlie", version, about = "Exact cohomology and deformations of n-Lie algebras")]
struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    output: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate an algebra, morphism or deformation file (kind is detected).
    Validate { path: PathBuf },

    /// dim Z^r, B^r, H^r of an algebra, or of the module complex of a morphism.
    Cohomology {
        #[arg(long)]
        algebra: PathBuf,
        /// Target algebra; must match the morphism's target.
        #[arg(long, requires = "morphism")]
        module: Option<PathBuf>,
        #[arg(long)]
        morphism: Option<PathBuf>,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        degree: u32,
        /// Also print representatives of a basis of H^r.
        #[arg(long)]
        basis: bool,
    },

    /// Cohomology of the morphism complex.
    MorphismCohomology {
        #[arg(long)]
        morphism: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        degree: u32,
        #[arg(long)]
        basis: bool,
    },

    /// Formal deformations of a morphism.
    Deform {
        #[command(subcommand)]
        action: Deform,
    },
}

#[derive(Subcommand, Debug)]
enum Deform {
    /// Check the structure equations order by order.
    Check { deformation: PathBuf },

    /// The first-order triple and its cocycle verdict.
    Infinitesimal {
        deformation: PathBuf,
        #[arg(long)]
        emit: Option<PathBuf>,
    },

    /// The obstruction of the truncation at order N.
    Obstruction {
        deformation: PathBuf,
        #[arg(long)]
        order: usize,
        #[arg(long)]
        emit: Option<PathBuf>,
    },

    /// Extend the truncation at order N by one order.
    Extend {
        deformation: PathBuf,
        #[arg(long)]
        order: usize,
        #[arg(long)]
        emit: Option<PathBuf>,
    },

    /// Apply formal automorphisms of source and target.
    Transform {
        deformation: PathBuf,
        #[arg(long)]
        psi_source: PathBuf,
        #[arg(long)]
        psi_target: PathBuf,
        /// Working order; defaults to the deformation's order.
        #[arg(long)]
        order: Option<usize>,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
}

/// Errors that abort a command before a full report exists.
#[derive(Debug)]
struct Failure {
    status: u8,
    error: Error,
}

impl From<Error> for Failure {
    fn from(error: Error) -> Self {
        let status = match error {
            Error::InvalidAlgebra { .. }
            | Error::InvalidMorphism { .. }
            | Error::NotValidated { .. }
            | Error::NotCocycle
            | Error::ObstructionNotCocycle
            | Error::BrokenComplex
            | Error::SubspaceViolation { .. } => 1,
            _ => 2,
        };
        Failure { status, error }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e).into()
    }
}

type Outcome = Result<Report, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let args: Vec<String> = std::env::args().skip(1).collect();
    match run(&cli.command, Report::new(args)) {
        Ok(report) => {
            match cli.output {
                Format::Json => print!("{}", report.to_json()),
                Format::Text => print!("{}", report.to_text()),
            }
            ExitCode::from(report.exit_status)
        }
        Err(f) => {
            eprintln!("error: {}", f.error);
            ExitCode::from(f.status)
        }
    }
}

fn run(command: &Command, report: Report) -> Outcome {
    match command {
        Command::Validate { path } => validate(path, report),
        Command::Cohomology {
            algebra,
            module,
            morphism,
            degree,
            basis,
        } => cohomology(
            algebra,
            module.as_deref(),
            morphism.as_deref(),
            *degree as usize,
            *basis,
            report,
        ),
        Command::MorphismCohomology {
            morphism,
            degree,
            basis,
        } => morphism_complex(morphism, *degree as usize, *basis, report),
        Command::Deform { action } => deform(action, report),
    }
}

fn digest(report: &mut Report, path: &Path) -> Result<(), Failure> {
    let (input, _) = Input::read(path)?;
    report.inputs.push(input);
    Ok(())
}

fn vector_json(v: &[Rational], names: &[String]) -> Value {
    let map: serde_json::Map<String, Value> = v
        .iter()
        .zip(names)
        .filter(|(c, _)| !c.is_zero())
        .map(|(c, n)| (n.clone(), Value::String(c.to_string())))
        .collect();
    Value::Object(map)
}

fn one_based(t: &[usize]) -> Vec<usize> {
    t.iter().map(|i| i + 1).collect()
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn algebra_residuals(alg: &NLieAlgebra, report: &mut Report) -> bool {
    let v = alg.validate();
    for f in &v.failures {
        report.residuals.push(json!({
            "algebra": alg.name(),
            "x": one_based(&f.x),
            "y": one_based(&f.y),
            "residual": vector_json(&f.residual, alg.basis_names()),
        }));
    }
    v.is_valid()
}

fn morphism_residuals(phi: &Morphism, report: &mut Report) -> bool {
    let mut ok = algebra_residuals(phi.source(), report);
    ok &= algebra_residuals(phi.target(), report);
    if !ok {
        return false;
    }
    let v = phi.validate();
    for f in &v.failures {
        report.residuals.push(json!({
            "args": one_based(&f.args),
            "residual": vector_json(&f.residual, phi.target().basis_names()),
        }));
    }
    v.is_valid()
}

fn deformation_residuals(dm: &DeformedMorphism, report: &mut Report) -> Result<bool, Failure> {
    if !morphism_residuals(&dm.base_morphism()?, report) {
        return Ok(false);
    }
    let v = validate_deformation(dm);
    for f in &v.failures {
        report.residuals.push(json!({
            "order": f.order,
            "component": f.component.label(),
            "residual": to_value(&io::cochain_entries(&f.residual)),
        }));
    }
    Ok(v.is_valid())
}

fn validate(path: &Path, mut report: Report) -> Outcome {
    digest(&mut report, path)?;
    let doc = io::load_document(path)?;
    let ok = match &doc {
        Document::Algebra(a) => algebra_residuals(a, &mut report),
        Document::Morphism(phi) => morphism_residuals(phi, &mut report),
        Document::Deformation(dm) => deformation_residuals(dm, &mut report)?,
        Document::Automorphism(_) | Document::Cochain(..) => {
            report.notes.push("parsed; no structure equations to check".into());
            true
        }
    };
    if ok {
        report.verdict = format!("valid {}", doc.kind());
    } else {
        report.fail(format!("invalid {}", doc.kind()));
    }
    Ok(report)
}

fn dims(r: usize, h: &CohomologyReport) -> Dimensions {
    Dimensions {
        degree: r,
        dim_z: h.dim_z,
        dim_b: h.dim_b,
        dim_h: h.dim_h,
    }
}

fn cohomology(
    algebra: &Path,
    module: Option<&Path>,
    morphism: Option<&Path>,
    r: usize,
    basis: bool,
    mut report: Report,
) -> Outcome {
    digest(&mut report, algebra)?;
    let a = io::load_algebra(algebra)?;
    let Some(mpath) = morphism else {
        if !algebra_residuals(&a, &mut report) {
            report.fail("invalid algebra");
            return Ok(report);
        }
        let h = cohomology_self(&a, r)?;
        report.verdict = format!("H^{r}({0},{0})", a.name());
        report.dimensions = Some(dims(r, &h));
        if basis {
            let space = nlie_core::CochainSpace::over(&a, &a, r - 1);
            report.bases = Some(cochain_list(&space, &h.representatives)?);
        }
        return Ok(report);
    };
    digest(&mut report, mpath)?;
    let phi = io::load_morphism(mpath)?;
    if *phi.source() != a {
        return Err(Error::Parse(format!(
            "{} is not the source of {}",
            algebra.display(),
            mpath.display()
        ))
        .into());
    }
    if let Some(b) = module {
        digest(&mut report, b)?;
        if *phi.target() != io::load_algebra(b)? {
            return Err(Error::Parse(format!(
                "{} is not the target of {}",
                b.display(),
                mpath.display()
            ))
            .into());
        }
    }
    if !morphism_residuals(&phi, &mut report) {
        report.fail("invalid morphism");
        return Ok(report);
    }
    let h = cohomology_module(&phi, r)?;
    report.verdict = format!("H^{r}({},{})", phi.source().name(), phi.target().name());
    report.dimensions = Some(dims(r, &h));
    if basis {
        let space = nlie_core::CochainSpace::over(phi.source(), phi.target(), r - 1);
        report.bases = Some(cochain_list(&space, &h.representatives)?);
    }
    Ok(report)
}

fn cochain_list(space: &nlie_core::CochainSpace, vs: &[linalg::Vector]) -> Result<Value, Failure> {
    let mut out = Vec::with_capacity(vs.len());
    for v in vs {
        let c = Cochain::from_coeffs(space.clone(), v.clone())?;
        out.push(to_value(&io::cochain_entries(&c)));
    }
    Ok(Value::Array(out))
}

fn morphism_complex(path: &Path, r: usize, basis: bool, mut report: Report) -> Outcome {
    digest(&mut report, path)?;
    let phi = io::load_morphism(path)?;
    if !morphism_residuals(&phi, &mut report) {
        report.fail("invalid morphism");
        return Ok(report);
    }
    let h = morphism_cohomology(&phi, r)?;
    report.verdict = format!("H^{r}(phi,phi)");
    report.dimensions = Some(dims(r, &h));
    if basis {
        let space = TripleSpace::new(&phi, r - 1);
        let mut out = Vec::new();
        for v in &h.representatives {
            out.push(to_value(&io::triple_to_file(&space.split(v)?, &phi)));
        }
        report.bases = Some(Value::Array(out));
    }
    Ok(report)
}

fn load_valid(path: &Path, report: &mut Report) -> Result<Option<DeformedMorphism>, Failure> {
    digest(report, path)?;
    let dm = io::load_deformation(path)?;
    if deformation_residuals(&dm, report)? {
        Ok(Some(dm))
    } else {
        report.fail("deformation does not satisfy its structure equations");
        Ok(None)
    }
}

fn emit(report: &mut Report, artifact: Value, path: Option<&Path>) -> Result<(), Failure> {
    if let Some(p) = path {
        let text = serde_json::to_string_pretty(&artifact).map_err(Error::from)? + "\n";
        std::fs::write(p, text)?;
        report.emitted = Some(p.display().to_string());
    }
    report.artifact = Some(artifact);
    Ok(())
}

fn truncated(dm: &DeformedMorphism, order: usize) -> Result<DeformedMorphism, Failure> {
    if order > dm.order() {
        return Err(Error::OrderMismatch(format!(
            "requested order {order} exceeds the deformation's order {}",
            dm.order()
        ))
        .into());
    }
    Ok(dm.truncate(order))
}

fn deform(action: &Deform, mut report: Report) -> Outcome {
    match action {
        Deform::Check { deformation } => {
            if let Some(dm) = load_valid(deformation, &mut report)? {
                report.verdict = format!("valid through order {}", dm.order());
            }
        }
        Deform::Infinitesimal { deformation, emit: out } => {
            let Some(dm) = load_valid(deformation, &mut report)? else {
                return Ok(report);
            };
            let phi = dm.base_morphism()?;
            let (theta, closed) = infinitesimal(&dm)?;
            if closed {
                report.verdict = "infinitesimal is a cocycle".into();
            } else {
                report.fail("infinitesimal is not a cocycle");
            }
            emit(&mut report, to_value(&io::triple_to_file(&theta, &phi)), out.as_deref())?;
        }
        Deform::Obstruction {
            deformation,
            order,
            emit: out,
        } => {
            let Some(dm) = load_valid(deformation, &mut report)? else {
                return Ok(report);
            };
            let cut = truncated(&dm, *order)?;
            let phi = cut.base_morphism()?;
            let ob = obstruction(&cut)?;
            let closed = triple_coboundary(&phi, &ob)?.is_zero();
            let exact = linalg::solve(&triple_matrix(&phi, 1)?, &ob.flatten())?.is_some();
            report
                .notes
                .push(format!("obstruction is {}a cocycle", if closed { "" } else { "not " }));
            if exact {
                report.verdict = format!("order-{order} obstruction is a coboundary");
            } else {
                report.fail(format!("order-{order} obstruction is not a coboundary"));
            }
            emit(&mut report, to_value(&io::triple_to_file(&ob, &phi)), out.as_deref())?;
        }
        Deform::Extend {
            deformation,
            order,
            emit: out,
        } => {
            let Some(dm) = load_valid(deformation, &mut report)? else {
                return Ok(report);
            };
            let cut = truncated(&dm, *order)?;
            match extend_order(&cut)? {
                Some((theta, ext)) => {
                    let phi = cut.base_morphism()?;
                    report.verdict = format!("extended to order {}", order + 1);
                    report.witness = Some(to_value(&io::triple_to_file(&theta, &phi)));
                    emit(&mut report, to_value(&io::deformation_to_file(&ext)), out.as_deref())?;
                }
                None => {
                    report.fail(format!("no extension to order {}", order + 1));
                    report.notes.push(
                        "the obstruction class in H^3(phi,phi) is nonzero; every infinitesimal \
                         deformation extends when H^3(phi,phi) = 0"
                            .into(),
                    );
                }
            }
        }
        Deform::Transform {
            deformation,
            psi_source,
            psi_target,
            order,
            emit: out,
        } => {
            let Some(dm) = load_valid(deformation, &mut report)? else {
                return Ok(report);
            };
            digest(&mut report, psi_source)?;
            digest(&mut report, psi_target)?;
            let psi_n = io::load_automorphism(psi_source)?;
            let psi_t = io::load_automorphism(psi_target)?;
            let k = order.unwrap_or(dm.order());
            let moved = apply_automorphism(&dm, &psi_n, &psi_t, k)?;
            let valid = validate_deformation(&moved).is_valid();
            if k >= 1 {
                let phi = dm.base_morphism()?;
                let (before, _) = infinitesimal(&dm.truncate(k))?;
                let (after, _) = infinitesimal(&moved)?;
                let n = phi.source().arity();
                let alpha = CochainTriple::new(
                    Cochain::from_linear_map(n, &psi_n.term(1)),
                    Cochain::from_linear_map(n, &psi_t.term(1)),
                    None,
                )?;
                let shift = triple_coboundary(&phi, &alpha)?;
                let holds = before.sub(&after)? == shift;
                report.notes.push(format!(
                    "theta_1 - theta'_1 = delta(psi_N1, psi_T1, 0): {holds}"
                ));
            }
            if valid {
                report.verdict = format!("transformed deformation valid through order {k}");
            } else {
                report.fail("transformed deformation fails its structure equations");
            }
            emit(&mut report, to_value(&io::deformation_to_file(&moved)), out.as_deref())?;
        }
    }
    Ok(report)
}

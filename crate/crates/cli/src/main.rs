//! `dioph`: validate instances, run lemma suites, and build or check
//! certificates. Every invocation prints one JSON document on stdout.
//!
//! Exit status is 0 when the aggregate verdict is pass, 1 when it is fail or
//! inconclusive, and 2 on errors (bad options, unreadable input, module
//! errors), which are reported as JSON as well.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use dioph_core::arith::parse_rational;
use dioph_core::certify::{
    certification_gate, certify_of_element, four_squares_witness, soundness_descent, verify_of_certificate,
    verify_s_certificate, CertificateFile, OfCertificate, SCertificate,
};
use dioph_core::config::{load_instance, parse_instance};
use dioph_core::elliptic::{validate_instance, RankOneInstance};
use dioph_core::lemmas::{run_suites, SUITE_TAGS};
use dioph_core::numfield::FieldElement;
use dioph_core::report::Verdict;
use dioph_core::{certify::build_s_certificate, Error};

const REPORT_SCHEMA: &str = "dioph/report/v1";
const S_KIND: &str = "s-certificate";
const OF_KIND: &str = "of-certificate";

#[derive(Parser)]
#[command(name = "dioph", version, about = "Exact checks and certificates for a diophantine definition of O_F in O_K")]
struct Cli {
    /// Instance configuration file.
    #[arg(long, global = true, default_value = "instances/curated.toml")]
    instance: PathBuf,
    /// Compact single-line JSON instead of pretty-printed output.
    #[arg(long, global = true)]
    compact: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every instance invariant check.
    Validate,
    /// Run lemma suites, all of them unless `--only` is given.
    Lemmas {
        /// Comma-separated suite tags.
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
    },
    /// Certify that m² lies in S.
    CertifySquare {
        #[arg(long)]
        m: u64,
        /// Write the certificate file here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify a certificate file.
    Verify {
        #[arg(long)]
        cert: PathBuf,
    },
    /// Replay the soundness argument for a square certificate.
    Descent {
        #[arg(long)]
        cert: PathBuf,
    },
    /// Certify that an element of O_F is generated from certified squares.
    CertifyElement {
        /// Comma-separated power-basis coordinates in K; a single value is a rational integer.
        #[arg(long, allow_hyphen_values = true)]
        element: String,
        /// Attach a square certificate for every leaf.
        #[arg(long)]
        with_leaves: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a non-negative integer as a sum of four squares.
    FourSquares {
        #[arg(long, allow_hyphen_values = true)]
        a: i64,
    },
    /// Describe the config format and report schemas.
    Schema,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Lemmas { .. } => "lemmas",
            Command::CertifySquare { .. } => "certify-square",
            Command::Verify { .. } => "verify",
            Command::Descent { .. } => "descent",
            Command::CertifyElement { .. } => "certify-element",
            Command::FourSquares { .. } => "four-squares",
            Command::Schema => "schema",
        }
    }
}

struct Outcome {
    verdict: Verdict,
    instance: Option<String>,
    report: Value,
}

fn error_json(e: &Error) -> Value {
    let mut v = json!({ "kind": e.kind(), "message": e.to_string() });
    match e {
        Error::Config { path, .. } => v["path"] = json!(path),
        Error::Validation(list) => v["violations"] = json!(list),
        _ => {}
    }
    v
}

fn read_file(path: &Path) -> Result<CertificateFile, Error> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

fn emit_file(file: &CertificateFile, out: Option<&Path>, compact: bool) -> Result<Option<String>, Error> {
    let text = if compact { serde_json::to_string(file)? } else { serde_json::to_string_pretty(file)? };
    match out {
        Some(p) => {
            std::fs::write(p, text + "\n")?;
            Ok(Some(p.display().to_string()))
        }
        None => Ok(None),
    }
}

fn parse_element(inst: &RankOneInstance, s: &str) -> Result<FieldElement, Error> {
    let k = inst.field();
    let coords = s
        .split(',')
        .map(|c| parse_rational(c.trim()).ok_or_else(|| Error::InvalidElement(format!("'{c}' is not an exact rational"))))
        .collect::<Result<Vec<_>, _>>()?;
    if coords.len() == 1 {
        return Ok(FieldElement::from_rational(k, &coords[0]));
    }
    FieldElement::from_coords(k, &coords)
}

/// Runs a verification and folds the envelope digest into the verdict. The
/// semantic checks always run so a tamper is named by the condition it breaks.
fn verify_file(inst: &RankOneInstance, file: &CertificateFile) -> Result<Outcome, Error> {
    let digest_ok = file.digest_matches();
    let rep = match file.kind.as_str() {
        S_KIND => verify_s_certificate(inst, &file.open::<SCertificate>(S_KIND)?),
        OF_KIND => verify_of_certificate(inst, &file.open::<OfCertificate>(OF_KIND)?),
        k => return Err(Error::Certificate(format!("unknown certificate kind '{k}'"))),
    };
    let first = rep.first_failure().map(str::to_string).or_else(|| (!digest_ok).then(|| "envelope-digest".to_string()));
    let accept = rep.verdict.is_pass() && digest_ok;
    Ok(Outcome {
        verdict: Verdict::from_bool(accept),
        instance: Some(inst.name.clone()),
        report: json!({
            "kind": file.kind,
            "outcome": if accept { "accept" } else { "reject" },
            "digest_matches": digest_ok,
            "first_failure": first,
            "failing": rep.failing(),
            "checks": rep,
        }),
    })
}

fn schema_description() -> Value {
    json!({
        "report_schema": REPORT_SCHEMA,
        "report": {
            "schema": "string, always the value above",
            "command": "subcommand name",
            "instance": "instance name or null",
            "verdict": "pass | fail | inconclusive",
            "report": "command-specific body",
            "error": "present instead of report on errors: {kind, message, path?, violations?}"
        },
        "config": {
            "schema_version": 1,
            "numbers": "TOML integers or strings \"n\" / \"p/q\"; floats are rejected",
            "elements": "arrays of rationals in the power basis of K",
            "tables": {
                "field_f": ["name", "polynomial (constant term first)", "integral_basis", "discriminant"],
                "field_k": ["name", "polynomial", "integral_basis", "discriminant"],
                "extension": ["embedding", "alpha", "relative_degree", "relative_discriminant"],
                "curve": ["a", "b"],
                "generator": ["x", "y"],
                "arithmetic": ["r", "ell", "torsion_order", "index_EK_EF", "rank_f?", "rank_k?", "tamagawa[] {prime, residue_poly, index}"],
                "constants": ["c", "c_prime"],
                "bounds": ["k_bound", "m_max", "k_max", "coord_box", "norm_box", "gi_window", "precision", "trial_bound"],
                "provenance": ["rank", "torsion_order", "index_EK_EF", "tamagawa_indices"]
            }
        },
        "suites": SUITE_TAGS,
        "certificate_kinds": [S_KIND, OF_KIND]
    })
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    let inst = || load_instance(&cli.instance);
    match &cli.command {
        Command::Schema => Ok(Outcome { verdict: Verdict::Pass, instance: None, report: schema_description() }),
        // A negative input has no witness; that is the expected answer, not an error.
        Command::FourSquares { a } => match four_squares_witness(*a) {
            Ok(w) => Ok(Outcome { verdict: Verdict::Pass, instance: None, report: json!({ "a": a, "witness": w }) }),
            Err(Error::NoWitness) => Ok(Outcome { verdict: Verdict::Fail, instance: None, report: json!({ "a": a, "witness": null }) }),
            Err(e) => Err(e),
        },
        Command::Validate => {
            let inst = parse_instance(&std::fs::read_to_string(&cli.instance)?)?;
            let rep = validate_instance(&inst);
            Ok(Outcome { verdict: rep.verdict, instance: Some(inst.name.clone()), report: serde_json::to_value(&rep)? })
        }
        Command::Lemmas { only } => {
            let inst = inst()?;
            let reports = run_suites(&inst, only)?;
            let verdict = Verdict::aggregate(reports.iter().map(|r| r.verdict));
            let summary: BTreeMap<&str, Verdict> = reports.iter().map(|r| (r.lemma.as_str(), r.verdict)).collect();
            Ok(Outcome {
                verdict,
                instance: Some(inst.name.clone()),
                report: json!({ "summary": summary, "suites": reports }),
            })
        }
        Command::CertifySquare { m, out } => {
            let inst = inst()?;
            certification_gate(&inst)?;
            let cert = build_s_certificate(&inst, *m, inst.params.k_bound)?;
            let check = verify_s_certificate(&inst, &cert);
            let file = CertificateFile::wrap(S_KIND, &cert)?;
            let written = emit_file(&file, out.as_deref(), cli.compact)?;
            let mut report = json!({
                "m": m,
                "k0": cert.p0.multiplier,
                "sha256": file.sha256,
                "self_check": check.verdict,
                "written_to": written,
            });
            if written.is_none() {
                report["certificate"] = serde_json::to_value(&file)?;
            }
            Ok(Outcome { verdict: check.verdict, instance: Some(inst.name.clone()), report })
        }
        Command::CertifyElement { element, with_leaves, out } => {
            let inst = inst()?;
            certification_gate(&inst)?;
            let w = parse_element(&inst, element)?;
            let mut cache = BTreeMap::new();
            let cert = certify_of_element(&inst, &w, *with_leaves, inst.params.k_bound, &mut cache)?;
            let check = verify_of_certificate(&inst, &cert);
            let file = CertificateFile::wrap(OF_KIND, &cert)?;
            let written = emit_file(&file, out.as_deref(), cli.compact)?;
            let mut report = json!({
                "coords": cert.coords,
                "leaves": cert.traces.iter().flat_map(|t| t.leaves()).collect::<Vec<_>>(),
                "sha256": file.sha256,
                "self_check": check.verdict,
                "written_to": written,
            });
            if written.is_none() {
                report["certificate"] = serde_json::to_value(&file)?;
            }
            Ok(Outcome { verdict: check.verdict, instance: Some(inst.name.clone()), report })
        }
        Command::Verify { cert } => verify_file(&inst()?, &read_file(cert)?),
        Command::Descent { cert } => {
            let inst = inst()?;
            let file = read_file(cert)?;
            let sc: SCertificate = file.open(S_KIND)?;
            let rep = soundness_descent(&inst, &sc);
            Ok(Outcome {
                verdict: rep.verdict,
                instance: Some(inst.name.clone()),
                report: json!({ "first_failure": rep.first_failure(), "steps": rep }),
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command = cli.command.name();
    let (doc, code) = match run(&cli) {
        Ok(o) => {
            let code = if o.verdict.is_pass() { 0 } else { 1 };
            (
                json!({ "schema": REPORT_SCHEMA, "command": command, "instance": o.instance, "verdict": o.verdict, "report": o.report }),
                code,
            )
        }
        Err(e) => (json!({ "schema": REPORT_SCHEMA, "command": command, "instance": null, "verdict": "fail", "error": error_json(&e) }), 2),
    };
    let text = if cli.compact { serde_json::to_string(&doc) } else { serde_json::to_string_pretty(&doc) };
    // A closed pipe downstream is not worth a panic.
    let _ = writeln!(std::io::stdout().lock(), "{}", text.expect("reports serialize"));
    ExitCode::from(code)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curated() -> RankOneInstance {
        load_instance(concat!(env!("CARGO_MANIFEST_DIR"), "/../../instances/curated.toml")).unwrap()
    }

    #[test]
    fn elements_parse_from_coordinates() {
        let inst = curated();
        let k = inst.field();
        assert_eq!(parse_element(&inst, "-3").unwrap(), FieldElement::from_int(k, -3));
        assert_eq!(parse_element(&inst, "0, 1").unwrap(), FieldElement::generator(k));
        assert!(parse_element(&inst, "0.5").is_err());
        assert!(parse_element(&inst, "1,2,3").is_err());
    }

    #[test]
    fn errors_carry_their_path() {
        let e = Error::Config { path: "curve.a".into(), message: "missing field".into() };
        let v = error_json(&e);
        assert_eq!(v["kind"], "config");
        assert_eq!(v["path"], "curve.a");
    }

    #[test]
    fn command_line_parses() {
        let cli = Cli::try_parse_from(["dioph", "lemmas", "--only", "growth,quotient"]).unwrap();
        assert!(matches!(&cli.command, Command::Lemmas { only } if only == &["growth", "quotient"]));
        assert!(Cli::try_parse_from(["dioph", "certify-square"]).is_err());
        assert!(Cli::try_parse_from(["dioph", "frobnicate"]).is_err());
    }
}

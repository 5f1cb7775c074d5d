//! Subcommands of the `ncbundle` binary.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use ncbundle_core::bundles::{
    compare_rkk, has_classical_t_dual, lambda2_image_member, lambda2_matrix, RkkOptions, RkkVerdictKind,
};
use ncbundle_core::exterior::BasisOrder;
use ncbundle_core::heisenberg::{normal_form, upsilon, GeneratorWord, Token};
use ncbundle_core::intmat::IntMatrix;
use ncbundle_core::monodromy::{basic_generator, pair_exponents, representation, MonodromyMatrix};
use ncbundle_core::nctorus::{
    clock_shift, hermitian_eigenvalues, operator_norm, represent, rieffel_projection_with, RieffelParams,
    DEFAULT_TRUNCATION,
};
use ncbundle_core::pairs::PairIndex;
use ncbundle_core::winding::{winding_of_loop, winding_of_phase_loop};
use ncbundle_core::{BigInt, Complex64};
use serde_json::{json, Value};

use crate::json::{self as js, float};
use crate::CliError;

type Result<T> = std::result::Result<T, CliError>;

pub const EXIT_OK: u8 = 0;
/// A `golden` or `nctorus verify` check failed.
pub const EXIT_CHECK_FAILED: u8 = 1;
/// Malformed input, schema violations and unsupported parameters.
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_UNDETERMINED: u8 = 3;

/// Tolerances used by `nctorus verify` unless `--tolerance` is given.
pub const RELATION_TOLERANCE: f64 = 1e-12;
pub const TRACE_TOLERANCE: f64 = 1e-6;
pub const PROJECTION_TOLERANCE: f64 = 1e-3;

#[derive(Parser, Debug)]
#[command(
    name = "ncbundle",
    version,
    about = "Invariants of noncommutative principal torus bundles"
)]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Replaces every numerical threshold of `nctorus verify`.
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Basis {
    Lex,
    #[value(name = "rank3-graded")]
    Rank3Graded,
}

impl From<Basis> for BasisOrder {
    fn from(b: Basis) -> Self {
        match b {
            Basis::Lex => BasisOrder::Lex,
            Basis::Rank3Graded => BasisOrder::Rank3Graded,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Monodromy of the K-theory bundle along a loop of the base.
    Monodromy {
        #[arg(long)]
        n: usize,
        /// Winding matrix, or a bundle descriptor carrying one.
        #[arg(long)]
        winding: PathBuf,
        /// Coordinates of the loop in the base homology, e.g. "1,0".
        #[arg(long = "loop", allow_hyphen_values = true)]
        gamma: String,
        #[arg(long, value_enum, default_value_t = Basis::Lex)]
        basis: Basis,
    },
    /// Decides RKK-equivalence of two bundle descriptors.
    RkkCompare {
        a: PathBuf,
        b: PathBuf,
        /// Candidate twist tried first in rank 4 and above.
        #[arg(long)]
        psi: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        search_depth: usize,
    },
    /// Whether a descriptor admits a classical T-dual.
    TdualCheck { descriptor: PathBuf },
    /// Words in the Heisenberg group and the automorphisms induced by twists.
    #[command(subcommand)]
    Heisenberg(HeisenbergCommand),
    /// Numerical checks in the rational rotation algebra.
    #[command(subcommand)]
    Nctorus(NctorusCommand),
    /// Second exterior power of a unimodular matrix and its image membership.
    Lambda2 {
        #[arg(long)]
        psi: PathBuf,
        /// A pair-basis matrix to test for membership in the image.
        #[arg(long)]
        check: Option<PathBuf>,
    },
    /// Checks the pinned rank 2 and rank 3 monodromy matrices.
    Golden,
    /// Winding numbers of a sampled loop.
    Winding { path: PathBuf },
}

#[derive(Subcommand, Debug)]
pub enum HeisenbergCommand {
    /// Collects a word such as "U1 U2 U1^-1" into normal form.
    NormalForm {
        #[arg(allow_hyphen_values = true)]
        word: String,
        /// Rank; defaults to the largest index in the word.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Generator table of the automorphism induced by a unimodular matrix.
    Upsilon {
        #[arg(long)]
        psi: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
pub enum NctorusCommand {
    /// Clock-shift relation and Rieffel projection checks at θ = p/q.
    Verify {
        #[arg(long, allow_hyphen_values = true)]
        p: i64,
        #[arg(long)]
        q: i64,
        #[arg(long, default_value_t = DEFAULT_TRUNCATION)]
        truncation: usize,
        /// Writes the spectrum of the represented projection as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

/// The result of one subcommand.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub value: Value,
    pub text: String,
    pub exit: u8,
}

impl Report {
    fn ok(value: Value, text: String) -> Self {
        Report {
            value,
            text,
            exit: EXIT_OK,
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => js::render(&self.value) + "\n",
            Format::Text => self.text.clone(),
        }
    }
}

/// Runs a parsed command line, returning the output and exit code.
pub fn execute(cli: &Cli) -> (String, u8) {
    match run(cli) {
        Ok(report) => (report.render(cli.format), report.exit),
        Err(e) => (format!("error: {e}\n"), EXIT_INVALID),
    }
}

pub fn run(cli: &Cli) -> Result<Report> {
    match &cli.command {
        Command::Monodromy {
            n,
            winding,
            gamma,
            basis,
        } => monodromy(*n, winding, gamma, (*basis).into()),
        Command::RkkCompare {
            a,
            b,
            psi,
            search_depth,
        } => rkk_compare(a, b, psi.as_deref(), *search_depth),
        Command::TdualCheck { descriptor } => tdual_check(descriptor),
        Command::Heisenberg(HeisenbergCommand::NormalForm { word, n }) => heisenberg_normal_form(word, *n),
        Command::Heisenberg(HeisenbergCommand::Upsilon { psi }) => heisenberg_upsilon(psi),
        Command::Nctorus(NctorusCommand::Verify { p, q, truncation, csv }) => {
            nctorus_verify(*p, *q, *truncation, csv.as_deref(), cli.tolerance)
        }
        Command::Lambda2 { psi, check } => lambda2(psi, check.as_deref()),
        Command::Golden => golden(),
        Command::Winding { path } => winding(path),
    }
}

pub fn read_json(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })?;
    Ok(serde_json::from_str(&text)?)
}

fn matrix_text(m: &IntMatrix, indent: &str) -> String {
    let cells: Vec<Vec<String>> = m
        .to_rows()
        .iter()
        .map(|r| r.iter().map(ToString::to_string).collect())
        .collect();
    let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
    let mut out = String::new();
    for row in cells {
        let row: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
        let _ = writeln!(out, "{indent}[{}]", row.join(" "));
    }
    out
}

fn monodromy_text(m: &MonodromyMatrix) -> String {
    format!(
        "even block:\n{}odd block:\n{}",
        matrix_text(m.even(), "  "),
        matrix_text(m.odd(), "  ")
    )
}

fn parse_loop(text: &str) -> Result<Vec<BigInt>> {
    text.split(',')
        .map(|s| {
            BigInt::from_str(s.trim()).map_err(|_| CliError::Schema(format!("loop coordinate {s:?} is not an integer")))
        })
        .collect()
}

fn monodromy(n: usize, path: &Path, gamma: &str, order: BasisOrder) -> Result<Report> {
    let v = read_json(path)?;
    let w = if v.get("winding").is_some() {
        let d = js::to_descriptor(&v)?;
        if d.rank() != n {
            return Err(CliError::Schema(format!(
                "descriptor has rank {}, --n is {n}",
                d.rank()
            )));
        }
        d.winding().clone()
    } else {
        js::to_matrix(&v)?
    };
    let gamma = parse_loop(gamma)?;
    let exps = pair_exponents(n, &w, &gamma)?;
    let m = representation(n, &w, &gamma, order)?;
    let value = json!({
        "loop": js::int_vector(&gamma),
        "pair_exponents": js::int_vector(&exps),
        "monodromy": js::monodromy(&m),
        "trivial": m.is_identity(),
    });
    let exps: Vec<String> = exps.iter().map(ToString::to_string).collect();
    let text = format!(
        "pair exponents: {}\nbasis: {}\n{}",
        exps.join(" "),
        order.tag(),
        monodromy_text(&m)
    );
    Ok(Report::ok(value, text))
}

fn rkk_compare(a: &Path, b: &Path, psi: Option<&Path>, search_depth: usize) -> Result<Report> {
    let d1 = js::to_descriptor(&read_json(a)?)?;
    let d2 = js::to_descriptor(&read_json(b)?)?;
    let psi = psi.map(|p| read_json(p).and_then(|v| js::to_matrix(&v))).transpose()?;
    let verdict = compare_rkk(&d1, &d2, &RkkOptions { psi, search_depth })?;
    let mut text = format!(
        "verdict: {}\ngl_orbit_equal: {}\n",
        verdict.kind.name(),
        verdict.gl_orbit_equal
    );
    if let Some(c) = verdict.caveat {
        let _ = writeln!(text, "caveat: {c}");
    }
    let exit = if verdict.kind == RkkVerdictKind::Undetermined {
        EXIT_UNDETERMINED
    } else {
        EXIT_OK
    };
    Ok(Report {
        value: js::verdict(&verdict),
        text,
        exit,
    })
}

fn tdual_check(path: &Path) -> Result<Report> {
    let d = js::to_descriptor(&read_json(path)?)?;
    let report = has_classical_t_dual(&d);
    let mut text = format!("classical T-dual: {}\n", report.exists);
    for e in &report.evidence {
        let exps: Vec<String> = e.pair_exponents.iter().map(ToString::to_string).collect();
        let _ = writeln!(text, "  {}: [{}] trivial={}", e.label, exps.join(" "), e.acts_trivially);
    }
    Ok(Report::ok(js::tdual(&report), text))
}

fn heisenberg_normal_form(word: &str, n: Option<usize>) -> Result<Report> {
    let n = match n {
        Some(n) => n,
        None => GeneratorWord::parse(usize::MAX, word)?
            .tokens()
            .iter()
            .map(|t| match t {
                Token::U { i, .. } => *i,
                Token::V { j, .. } => *j,
            })
            .max()
            .unwrap_or(1),
    };
    let w = GeneratorWord::parse(n, word)?;
    let h = normal_form(&w);
    let canonical = h.to_word().to_string();
    let value = json!({ "word": w.to_string(), "element": js::heisenberg(&h), "normal_form": canonical });
    let shown = if canonical.is_empty() { "1" } else { canonical.as_str() };
    Ok(Report::ok(value, format!("{shown}\n")))
}

fn heisenberg_upsilon(path: &Path) -> Result<Report> {
    let psi = js::to_matrix(&read_json(path)?)?;
    let ups = upsilon(&psi)?;
    let table = ups.word_table()?;
    let factors = ups.factorization().len();
    let relations = ups.relations_hold()?;
    let mut text = format!("factorization length: {factors}\n");
    for (name, w) in &table {
        let w = w.to_string();
        let _ = writeln!(text, "{name} -> {}", if w.is_empty() { "1" } else { &w });
    }
    let value = json!({
        "psi": js::matrix(&psi),
        "factorization_length": factors,
        "images": table.iter().map(|(name, w)| json!([name, w.to_string()])).collect::<Vec<_>>(),
        "relations_hold": relations,
    });
    Ok(Report::ok(value, text))
}

/// Spectrum of the represented Rieffel projection, with each eigenvalue's
/// distance to `{0, 1}`.
fn write_spectrum(path: &Path, eigenvalues: &[f64]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["index", "eigenvalue", "distance"])?;
    for (k, x) in eigenvalues.iter().enumerate() {
        let d = x.abs().min((x - 1.0).abs());
        w.write_record([k.to_string(), js::round12(*x).to_string(), js::round12(d).to_string()])?;
    }
    w.flush().map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn nctorus_verify(p: i64, q: i64, truncation: usize, csv: Option<&Path>, tolerance: Option<f64>) -> Result<Report> {
    let rep = clock_shift(p, q)?;
    let theta = rep.theta();
    let residual = rep.relation_residual();
    let (rel_tol, trace_tol, proj_tol) = match tolerance {
        Some(t) => (t, t, t),
        None => (RELATION_TOLERANCE, TRACE_TOLERANCE, PROJECTION_TOLERANCE),
    };
    let mut pass = residual <= rel_tol;
    let mut text = format!(
        "theta = {p}/{q}\nrelation residual: {:e} (pass: {pass})\n",
        js::round12(residual)
    );
    let rieffel = if theta > 0.0 && theta < 1.0 {
        let params = RieffelParams {
            truncation,
            ..RieffelParams::default()
        };
        let proj = represent(&rieffel_projection_with(theta, params)?, &rep)?;
        let trace = proj.trace().re / rep.dim() as f64;
        let idempotence = operator_norm(&(&proj * &proj - &proj));
        let eigenvalues = hermitian_eigenvalues(&proj);
        let spread = eigenvalues
            .iter()
            .map(|x| x.abs().min((x - 1.0).abs()))
            .fold(0.0, f64::max);
        let checks = [
            (trace - theta).abs() <= trace_tol,
            idempotence <= proj_tol,
            spread <= proj_tol,
        ];
        pass &= checks.iter().all(|&c| c);
        let _ = writeln!(
            text,
            "rieffel trace: {} (error {:e}, pass: {})\nidempotence: {:e} (pass: {})\neigenvalue spread: {:e} (pass: {})",
            js::round12(trace),
            js::round12((trace - theta).abs()),
            checks[0],
            js::round12(idempotence),
            checks[1],
            js::round12(spread),
            checks[2],
        );
        if let Some(path) = csv {
            write_spectrum(path, &eigenvalues)?;
        }
        json!({
            "truncation": truncation,
            "trace": float(trace),
            "trace_error": float((trace - theta).abs()),
            "idempotence": float(idempotence),
            "eigenvalue_spread": float(spread),
            "eigenvalues": eigenvalues.iter().map(|x| float(*x)).collect::<Vec<_>>(),
            "pass": { "trace": checks[0], "idempotence": checks[1], "eigenvalues": checks[2] },
        })
    } else {
        let _ = writeln!(text, "rieffel: skipped, theta is an integer");
        Value::Null
    };
    let value = json!({
        "p": p,
        "q": q,
        "theta": float(theta),
        "dimension": rep.dim(),
        "relation_residual": float(residual),
        "rieffel": rieffel,
        "tolerances": { "relation": float(rel_tol), "trace": float(trace_tol), "projection": float(proj_tol) },
        "pass": pass,
    });
    Ok(Report {
        value,
        text,
        exit: if pass { EXIT_OK } else { EXIT_CHECK_FAILED },
    })
}

fn lambda2(psi: &Path, check: Option<&Path>) -> Result<Report> {
    let psi = js::to_matrix(&read_json(psi)?)?;
    let n = psi.rows();
    let l2 = lambda2_matrix(&psi)?;
    let member = lambda2_image_member(n, &l2)?;
    let mut text = format!("lambda2:\n{}", matrix_text(&l2, "  "));
    let mut value =
        json!({ "psi": js::matrix(&psi), "lambda2": js::matrix(&l2), "membership": js::membership(&member) });
    if let Some(path) = check {
        let a = js::to_matrix(&read_json(path)?)?;
        let m = lambda2_image_member(n, &a)?;
        let _ = writeln!(text, "check: {}", js::membership(&m)["member"]);
        value["check"] = js::membership(&m);
    }
    Ok(Report::ok(value, text))
}

fn rank3_expected(u12: i64, u13: i64, u23: i64) -> (IntMatrix, IntMatrix) {
    let even = IntMatrix::from_i64(4, 4, &[1, u12, u23, u13, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1]);
    let odd = IntMatrix::from_i64(4, 4, &[1, 0, 0, u23, 0, 1, 0, -u13, 0, 0, 1, u12, 0, 0, 0, 1]);
    (even, odd)
}

/// The pinned matrices: the rank 2 generator, its action on `[1] + β`, and
/// both rank 3 blocks for every exponent triple in `[-3, 3]³`.
fn golden() -> Result<Report> {
    let g2 = basic_generator(2, PairIndex::new(2, 1, 2)?, BasisOrder::Lex)?;
    let rank2 = *g2.even() == IntMatrix::from_i64(2, 2, &[1, 1, 0, 1]) && g2.odd().is_identity();
    let image = g2.even().mul_vec(&[BigInt::from(1), BigInt::from(1)])?;
    let epsilon = image == [BigInt::from(2), BigInt::from(1)];
    let mut rank3 = true;
    let mut mismatches = Vec::new();
    for u12 in -3..=3 {
        for u13 in -3..=3 {
            for u23 in -3..=3 {
                let w = IntMatrix::column(&[u12, u13, u23]);
                let m = representation(3, &w, &[BigInt::from(1)], BasisOrder::Rank3Graded)?;
                let (even, odd) = rank3_expected(u12, u13, u23);
                if *m.even() != even || *m.odd() != odd {
                    rank3 = false;
                    mismatches.push(json!([u12, u13, u23]));
                }
            }
        }
    }
    let example = representation(
        3,
        &IntMatrix::column(&[1, 1, 1]),
        &[BigInt::from(1)],
        BasisOrder::Rank3Graded,
    )?;
    let pass = rank2 && epsilon && rank3;
    let checks = [
        ("rank2_generator", rank2),
        ("rank2_action", epsilon),
        ("rank3_blocks", rank3),
    ];
    let mut text = format!(
        "rank 2 generator:\n{}rank 3 at (1,1,1):\n{}",
        monodromy_text(&g2),
        monodromy_text(&example)
    );
    for (name, ok) in checks {
        let _ = writeln!(text, "{name}: {}", if ok { "PASS" } else { "FAIL" });
    }
    let value = json!({
        "checks": checks.iter().map(|(name, ok)| json!({ "name": name, "pass": ok })).collect::<Vec<_>>(),
        "rank2_generator": js::monodromy(&g2),
        "rank2_action": { "input": [1, 1], "output": js::int_vector(&image) },
        "rank3_example": js::monodromy(&example),
        "rank3_mismatches": mismatches,
        "pass": pass,
    });
    Ok(Report {
        value,
        text,
        exit: if pass { EXIT_OK } else { EXIT_CHECK_FAILED },
    })
}

fn numbers(v: &Value, what: &str) -> Result<Vec<f64>> {
    let arr = v
        .as_array()
        .ok_or_else(|| CliError::Schema(format!("{what}: expected an array")))?;
    arr.iter()
        .map(|x| {
            x.as_f64()
                .ok_or_else(|| CliError::Schema(format!("{what}: expected numbers")))
        })
        .collect()
}

fn complex(v: &Value) -> Result<Complex64> {
    match numbers(v, "sample")?.as_slice() {
        [re, im] => Ok(Complex64::new(*re, *im)),
        _ => Err(CliError::Schema("sample: expected [re, im]".into())),
    }
}

/// `{"phases": [...]}` or `{"samples": [[re, im], ...]}` for a loop in T;
/// for a loop in Tᵏ each entry is itself a point with `k` coordinates.
pub fn read_loop(v: &Value) -> Result<Vec<i64>> {
    let obj = v
        .as_object()
        .ok_or_else(|| CliError::Schema("loop: expected an object".into()))?;
    match (obj.get("phases"), obj.get("samples"), obj.len()) {
        (Some(Value::Array(points)), None, 1) => {
            if points.iter().all(Value::is_number) {
                Ok(winding_of_phase_loop(
                    &numbers(&Value::Array(points.clone()), "phases")?
                        .into_iter()
                        .map(|x| vec![x])
                        .collect::<Vec<_>>(),
                )?)
            } else {
                let pts = points
                    .iter()
                    .map(|p| numbers(p, "phase point"))
                    .collect::<Result<Vec<_>>>()?;
                Ok(winding_of_phase_loop(&pts)?)
            }
        }
        (None, Some(Value::Array(points)), 1) => {
            let flat = points
                .iter()
                .all(|p| p.as_array().is_some_and(|a| a.iter().all(Value::is_number)));
            let pts = if flat {
                points
                    .iter()
                    .map(|p| complex(p).map(|z| vec![z]))
                    .collect::<Result<Vec<_>>>()?
            } else {
                points
                    .iter()
                    .map(|p| {
                        let coords = p
                            .as_array()
                            .ok_or_else(|| CliError::Schema("sample point: expected an array".into()))?;
                        coords.iter().map(complex).collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?
            };
            Ok(winding_of_loop(&pts)?)
        }
        _ => Err(CliError::Schema(
            "loop: expected exactly one of \"phases\" or \"samples\" as an array".into(),
        )),
    }
}

fn winding(path: &Path) -> Result<Report> {
    let w = read_loop(&read_json(path)?)?;
    let shown: Vec<String> = w.iter().map(ToString::to_string).collect();
    Ok(Report::ok(
        json!({ "winding": w }),
        format!("winding: {}\n", shown.join(" ")),
    ))
}

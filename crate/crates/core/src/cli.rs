//! Command-line front end: problem files, subcommand dispatch and reports.
//!
//! A problem file is TOML:
//!
//! ```toml
//! algebra = "0,0,12,13,14,23"      # or a list of entries: ["0", "0", "e12", ...]
//! metric = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
//! analyses = ["cohomology", "invariant"]
//!
//! [J]
//! psi = ["e1 + i*e2", "e4 + i*e6", "e3 + i*e5"]   # or matrix = [[...]]
//!
//! [frame]
//! omega = [[0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0], [0, -1, 0, 0]]
//! vectors = [[1, 0, 0, 0], ...]                 # optional
//! ```
//!
//! Matrix entries are integers or strings holding rationals (`"3/2"`).

use std::fmt::Write as _;
use std::ops::Range;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;
use toml::de::{DeTable, DeValue};
use toml::Spanned;

use crate::acs::{hodge_identity, nijenhuis, AlmostComplexStructure, MetricSpec, TypeSign};
use crate::cohomology::CohomologySpace;
use crate::error::Error;
use crate::exterior::{ComplexKForm, KForm};
use crate::frames::{anti_invariant_pair_from_frame, symplectic_gram_schmidt};
use crate::invariant::purity_report_in;
use crate::liealg::{parse_differential, validate_jacobi, LieAlgebraSpec};
use crate::linalg::{skew_to_two_form, RatMatrix};
use crate::ranklab::{self, BumpProfile};
use crate::scalar::{parse_rational, Scalar};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_DATA: i32 = 65;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Analysis {
    Validate,
    Cohomology,
    Invariant,
    Frame,
    RankScan,
    Hodge,
}

impl Analysis {
    pub const ALL: [Analysis; 6] = [
        Analysis::Validate,
        Analysis::Cohomology,
        Analysis::Invariant,
        Analysis::Frame,
        Analysis::RankScan,
        Analysis::Hodge,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Analysis::Validate => "validate",
            Analysis::Cohomology => "cohomology",
            Analysis::Invariant => "invariant",
            Analysis::Frame => "frame",
            Analysis::RankScan => "rank-scan",
            Analysis::Hodge => "hodge",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|a| a.name() == name)
    }
}

/// How the almost complex structure was given in the file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StructureInput {
    OneZeroForms(Vec<ComplexKForm>),
    Matrix(RatMatrix),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameInput {
    pub omega: RatMatrix,
    pub vectors: Option<Vec<Vec<Scalar>>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProblemSpec {
    pub algebra: LieAlgebraSpec,
    pub structure: Option<StructureInput>,
    pub j: Option<AlmostComplexStructure>,
    pub metric: Option<RatMatrix>,
    pub frame: Option<FrameInput>,
    pub analyses: Vec<Analysis>,
}

/// Diagnostics from [`parse_spec`], one variant per error class.
#[derive(Clone, Debug, PartialEq, Error)]
pub enum SpecError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },

    #[error("line {line}: {source}")]
    Jacobi { line: usize, source: Error },

    #[error("line {line}: invalid almost complex structure: {message}")]
    Structure { line: usize, message: String },

    #[error("line {line}, column {column}: {message}")]
    Data { line: usize, column: usize, message: String },
}

impl SpecError {
    pub fn class(&self) -> &'static str {
        match self {
            SpecError::Syntax { .. } => "syntax",
            SpecError::Jacobi { .. } => "jacobi",
            SpecError::Structure { .. } => "structure",
            SpecError::Data { .. } => "data",
        }
    }
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rfind('\n').map_or(before.len(), |p| before.len() - p - 1) + 1;
    (line, column)
}

struct Source<'a> {
    text: &'a str,
}

impl Source<'_> {
    fn data(&self, span: &Range<usize>, message: impl Into<String>) -> SpecError {
        let (line, column) = line_col(self.text, span.start);
        SpecError::Data { line, column, message: message.into() }
    }

    fn syntax(&self, offset: usize, message: impl Into<String>) -> SpecError {
        let (line, column) = line_col(self.text, offset);
        SpecError::Syntax { line, column, message: message.into() }
    }

    fn line(&self, span: &Range<usize>) -> usize {
        line_col(self.text, span.start).0
    }

    /// Maps an error raised while parsing the string value at `span`.
    fn inner(&self, span: &Range<usize>, err: Error) -> SpecError {
        match err {
            // +1 skips the opening quote
            Error::Syntax { column, message } => self.syntax(span.start + column, message),
            Error::Jacobi { .. } => SpecError::Jacobi { line: self.line(span), source: err },
            Error::NotComplexStructure | Error::NotCoframe => {
                SpecError::Structure { line: self.line(span), message: err.to_string() }
            }
            other => self.data(span, other.to_string()),
        }
    }

    fn string<'v>(&self, v: &'v Spanned<DeValue<'_>>, what: &str) -> Result<&'v str, SpecError> {
        v.get_ref().as_str().ok_or_else(|| self.data(&v.span(), format!("{what} must be a string")))
    }

    fn array<'v, 'i>(
        &self,
        v: &'v Spanned<DeValue<'i>>,
        what: &str,
    ) -> Result<&'v [Spanned<DeValue<'i>>], SpecError> {
        v.get_ref()
            .as_array()
            .map(|a| &a[..])
            .ok_or_else(|| self.data(&v.span(), format!("{what} must be an array")))
    }

    fn scalar(&self, v: &Spanned<DeValue<'_>>) -> Result<Scalar, SpecError> {
        if let Some(i) = v.get_ref().as_integer() {
            let digits = i.as_str().replace('_', "");
            return BigInt::parse_bytes(digits.as_bytes(), i.radix())
                .map(Scalar::from_integer)
                .ok_or_else(|| self.data(&v.span(), "bad integer"));
        }
        if let Some(s) = v.get_ref().as_str() {
            return parse_rational(s)
                .ok_or_else(|| self.data(&v.span(), format!("'{s}' is not a rational number")));
        }
        Err(self.data(&v.span(), "matrix entries must be integers or rational strings like \"3/2\""))
    }

    fn vector(&self, v: &Spanned<DeValue<'_>>, len: usize) -> Result<Vec<Scalar>, SpecError> {
        let items = self.array(v, "row")?;
        if items.len() != len {
            return Err(self.data(&v.span(), format!("expected {len} entries, got {}", items.len())));
        }
        items.iter().map(|x| self.scalar(x)).collect()
    }

    fn matrix(&self, v: &Spanned<DeValue<'_>>, dim: usize, what: &str) -> Result<RatMatrix, SpecError> {
        let rows = self.array(v, what)?;
        if rows.len() != dim {
            return Err(self.data(&v.span(), format!("{what} needs {dim} rows, got {}", rows.len())));
        }
        let rows = rows.iter().map(|r| self.vector(r, dim)).collect::<Result<Vec<_>, _>>()?;
        Ok(RatMatrix::from_rows(rows))
    }
}

fn check_keys(src: &Source, table: &DeTable, allowed: &[&str], context: &str) -> Result<(), SpecError> {
    for (key, _) in table.iter() {
        if !allowed.contains(&key.get_ref().as_ref()) {
            return Err(src.data(&key.span(), format!("unknown key '{}' in {context}", key.get_ref())));
        }
    }
    Ok(())
}

fn parse_algebra(src: &Source, v: &Spanned<DeValue<'_>>) -> Result<LieAlgebraSpec, SpecError> {
    if let Some(text) = v.get_ref().as_str() {
        return LieAlgebraSpec::from_salamon(text).map_err(|e| src.inner(&v.span(), e));
    }
    let entries = src
        .array(v, "algebra")
        .map_err(|_| src.data(&v.span(), "algebra must be a string or a list of entries"))?;
    let dim = entries.len();
    let diffs = entries
        .iter()
        .map(|e| {
            let text = src.string(e, "algebra entry")?;
            parse_differential(dim, text).map_err(|err| src.inner(&e.span(), err))
        })
        .collect::<Result<Vec<_>, _>>()?;
    validate_jacobi(dim, diffs).map_err(|e| src.inner(&v.span(), e))
}

fn parse_structure(
    src: &Source,
    v: &Spanned<DeValue<'_>>,
    dim: usize,
) -> Result<(StructureInput, AlmostComplexStructure), SpecError> {
    let table = v.get_ref().as_table().ok_or_else(|| src.data(&v.span(), "J must be a table"))?;
    check_keys(src, table, &["psi", "matrix"], "J")?;
    match (table.get("psi"), table.get("matrix")) {
        (Some(_), Some(_)) => Err(src.data(&v.span(), "give either J.psi or J.matrix, not both")),
        (None, None) => Err(src.data(&v.span(), "J needs psi or matrix")),
        (Some(psi), None) => {
            let forms = src
                .array(psi, "J.psi")?
                .iter()
                .map(|p| {
                    let text = src.string(p, "J.psi entry")?;
                    ComplexKForm::parse(dim, text).map_err(|e| src.inner(&p.span(), e))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let j = AlmostComplexStructure::from_one_zero_forms(dim, &forms)
                .map_err(|e| src.inner(&psi.span(), e))?;
            Ok((StructureInput::OneZeroForms(forms), j))
        }
        (None, Some(m)) => {
            let matrix = src.matrix(m, dim, "J.matrix")?;
            let j = AlmostComplexStructure::from_matrix(matrix.clone())
                .map_err(|e| src.inner(&m.span(), e))?;
            Ok((StructureInput::Matrix(matrix), j))
        }
    }
}

fn parse_frame(src: &Source, v: &Spanned<DeValue<'_>>, dim: usize) -> Result<FrameInput, SpecError> {
    let table = v.get_ref().as_table().ok_or_else(|| src.data(&v.span(), "frame must be a table"))?;
    check_keys(src, table, &["omega", "vectors"], "frame")?;
    let omega_v = table.get("omega").ok_or_else(|| src.data(&v.span(), "frame needs omega"))?;
    let omega = src.matrix(omega_v, dim, "frame.omega")?;
    if !omega.is_skew() {
        return Err(src.data(&omega_v.span(), "frame.omega must be skew-symmetric"));
    }
    let vectors = match table.get("vectors") {
        None => None,
        Some(vs) => {
            let rows = src.array(vs, "frame.vectors")?;
            if rows.len() != dim {
                return Err(src.data(&vs.span(), format!("frame.vectors needs {dim} vectors")));
            }
            Some(rows.iter().map(|r| src.vector(r, dim)).collect::<Result<Vec<_>, _>>()?)
        }
    };
    Ok(FrameInput { omega, vectors })
}

/// Parses and validates a problem file.
pub fn parse_spec(text: &str) -> Result<ProblemSpec, SpecError> {
    let src = Source { text };
    let doc = DeTable::parse(text).map_err(|e| {
        let offset = e.span().map_or(0, |s| s.start);
        src.syntax(offset, e.message().trim().to_string())
    })?;
    let doc = doc.get_ref();
    check_keys(&src, doc, &["algebra", "J", "metric", "frame", "analyses"], "the problem file")?;
    let algebra_v = doc
        .get("algebra")
        .ok_or_else(|| SpecError::Data { line: 1, column: 1, message: "missing 'algebra'".into() })?;
    let algebra = parse_algebra(&src, algebra_v)?;
    let dim = algebra.dim();

    let (structure, j) = match doc.get("J") {
        Some(v) => {
            let (input, j) = parse_structure(&src, v, dim)?;
            (Some(input), Some(j))
        }
        None => (None, None),
    };
    let metric = match doc.get("metric") {
        Some(v) => {
            let m = src.matrix(v, dim, "metric")?;
            if !m.is_symmetric() || !m.is_positive_definite() {
                return Err(src.data(&v.span(), "metric must be symmetric positive definite"));
            }
            Some(m)
        }
        None => None,
    };
    let frame = doc.get("frame").map(|v| parse_frame(&src, v, dim)).transpose()?;
    let analyses = match doc.get("analyses") {
        Some(v) => src
            .array(v, "analyses")?
            .iter()
            .map(|a| {
                let name = src.string(a, "analysis")?;
                Analysis::from_name(name)
                    .ok_or_else(|| src.data(&a.span(), format!("unknown analysis '{name}'")))
            })
            .collect::<Result<Vec<_>, _>>()?,
        None => Vec::new(),
    };
    Ok(ProblemSpec { algebra, structure, j, metric, frame, analyses })
}

fn quoted(s: &str) -> String {
    toml::Value::String(s.to_string()).to_string()
}

fn scalar_literal(x: &Scalar) -> String {
    if x.is_integer() {
        x.to_integer().to_string()
    } else {
        quoted(&x.to_string())
    }
}

fn vector_literal(v: &[Scalar]) -> String {
    format!("[{}]", v.iter().map(scalar_literal).collect::<Vec<_>>().join(", "))
}

fn matrix_literal(m: &RatMatrix) -> String {
    format!("[{}]", m.rows_vec().iter().map(|r| vector_literal(r)).collect::<Vec<_>>().join(", "))
}

fn string_list(items: impl IntoIterator<Item = String>) -> String {
    format!("[{}]", items.into_iter().map(|s| quoted(&s)).collect::<Vec<_>>().join(", "))
}

impl ProblemSpec {
    /// Canonical problem-file text; `parse_spec(&spec.to_text())` returns `spec`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if self.algebra.dim() <= 9 {
            writeln!(out, "algebra = {}", quoted(&self.algebra.to_salamon())).unwrap();
        } else {
            let entries = self.algebra.differentials().iter().map(|f| f.to_string());
            writeln!(out, "algebra = {}", string_list(entries)).unwrap();
        }
        if let Some(m) = &self.metric {
            writeln!(out, "metric = {}", matrix_literal(m)).unwrap();
        }
        if !self.analyses.is_empty() {
            let names = self.analyses.iter().map(|a| a.name().to_string());
            writeln!(out, "analyses = {}", string_list(names)).unwrap();
        }
        match &self.structure {
            Some(StructureInput::OneZeroForms(psis)) => {
                let forms = psis.iter().map(|p| p.to_string());
                write!(out, "\n[J]\npsi = {}\n", string_list(forms)).unwrap();
            }
            Some(StructureInput::Matrix(m)) => {
                write!(out, "\n[J]\nmatrix = {}\n", matrix_literal(m)).unwrap();
            }
            None => {}
        }
        if let Some(frame) = &self.frame {
            write!(out, "\n[frame]\nomega = {}\n", matrix_literal(&frame.omega)).unwrap();
            if let Some(vs) = &frame.vectors {
                let rows: Vec<String> = vs.iter().map(|v| vector_literal(v)).collect();
                writeln!(out, "vectors = [{}]", rows.join(", ")).unwrap();
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Kv,
}

#[derive(Debug, Parser)]
#[command(name = "acslab", version, about = "Almost complex structures on nilpotent Lie algebra models")]
pub struct Cli {
    /// Problem file (TOML).
    #[arg(long, global = true, value_name = "PATH")]
    pub spec: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Debug, PartialEq, Subcommand)]
pub enum Command {
    /// Check the problem file and report structure properties.
    Validate,
    /// Betti numbers and cohomology representatives.
    Cohomology,
    /// Invariant and anti-invariant subgroups of H^2 and the pure/full classification.
    Invariant,
    /// Build an anti-invariant (J, omega) pair from a symplectic frame.
    Frame,
    /// Sample the pointwise rank of the compactly supported form on T^6.
    RankScan(RankScanArgs),
    /// Compare the self-dual forms with span(omega) + anti-invariant forms (dim 4).
    Hodge,
}

impl Command {
    pub fn analysis(&self) -> Analysis {
        match self {
            Command::Validate => Analysis::Validate,
            Command::Cohomology => Analysis::Cohomology,
            Command::Invariant => Analysis::Invariant,
            Command::Frame => Analysis::Frame,
            Command::RankScan(_) => Analysis::RankScan,
            Command::Hodge => Analysis::Hodge,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Args)]
pub struct RankScanArgs {
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, default_value_t = 0.25)]
    pub rho: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the text report to this file as well.
    #[arg(long, value_name = "PATH")]
    pub report: Option<PathBuf>,
    /// Write per-sample rows (point, rank, smallest retained singular value).
    #[arg(long, value_name = "PATH")]
    pub csv: Option<PathBuf>,
}

impl Default for RankScanArgs {
    fn default() -> Self {
        RankScanArgs { samples: 10_000, tol: 1e-8, rho: 0.25, seed: 0, report: None, csv: None }
    }
}

/// A finished report: text, a flat key=value block and an exit code.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub text: String,
    pub kv: Vec<(String, String)>,
    pub exit_code: i32,
}

impl Report {
    fn new() -> Self {
        Report { text: String::new(), kv: Vec::new(), exit_code: EXIT_OK }
    }

    fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }

    fn kv(&mut self, key: impl Into<String>, value: impl ToString) {
        self.kv.push((key.into(), value.to_string()));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.kv.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn render(&self, format: Format) -> String {
        let block: String = self.kv.iter().map(|(k, v)| format!("{k}={v}\n")).collect();
        match format {
            Format::Text => format!("{}---\n{}", self.text, block),
            Format::Kv => block,
        }
    }
}

/// Failures that stop a subcommand before it produces a report.
#[derive(Clone, Debug, PartialEq, Error)]
pub enum RunError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Usage(_) => EXIT_USAGE,
            RunError::Data(_) => EXIT_DATA,
        }
    }
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        RunError::Data(e.to_string())
    }
}

fn need_spec<'a>(spec: Option<&'a ProblemSpec>, command: &str) -> Result<&'a ProblemSpec, RunError> {
    spec.ok_or_else(|| RunError::Usage(format!("'{command}' needs --spec PATH")))
}

fn need_structure<'a>(spec: &'a ProblemSpec, command: &str) -> Result<&'a AlmostComplexStructure, RunError> {
    spec.j
        .as_ref()
        .ok_or_else(|| RunError::Data(format!("'{command}' needs a J section (J.psi or J.matrix)")))
}

fn join_forms(forms: &[KForm]) -> String {
    if forms.is_empty() {
        return "(none)".into();
    }
    forms.iter().map(|f| f.to_string()).collect::<Vec<_>>().join(", ")
}

/// Runs one subcommand.
pub fn run(spec: Option<&ProblemSpec>, command: &Command) -> Result<Report, RunError> {
    match command {
        Command::Validate => validate(need_spec(spec, "validate")?),
        Command::Cohomology => cohomology_report(need_spec(spec, "cohomology")?),
        Command::Invariant => invariant_report(need_spec(spec, "invariant")?),
        Command::Frame => frame_report(need_spec(spec, "frame")?),
        Command::RankScan(args) => rank_scan_report(args),
        Command::Hodge => hodge_report(need_spec(spec, "hodge")?),
    }
}

fn validate(spec: &ProblemSpec) -> Result<Report, RunError> {
    let mut r = Report::new();
    let g = &spec.algebra;
    r.line(format!("algebra: {} (dimension {})", g.to_salamon(), g.dim()));
    r.line("jacobi: ok");
    r.kv("dim", g.dim());
    r.kv("jacobi", "ok");
    match &spec.j {
        Some(j) => {
            r.line("structure: J^2 = -Id ok");
            r.kv("structure", "ok");
            let n = nijenhuis(g, j)?;
            let integrable = n.is_zero();
            match n.nonzero_entries().first() {
                Some((a, b, v)) => {
                    let entries: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                    r.line(format!(
                        "integrable: false (N(e{}, e{}) = ({}))",
                        a + 1,
                        b + 1,
                        entries.join(", ")
                    ));
                }
                None => r.line("integrable: true"),
            }
            r.kv("integrable", integrable);
        }
        None => {
            r.line("structure: absent");
            r.kv("structure", "absent");
        }
    }
    let metric = match (&spec.metric, &spec.j) {
        (None, _) => "absent".to_string(),
        (Some(m), Some(j)) if m.nrows() == 4 => {
            let ms = MetricSpec::new(m.clone())?.with_structure(j.clone())?;
            if ms.is_compatible() { "compatible" } else { "incompatible" }.to_string()
        }
        (Some(_), _) => "present".to_string(),
    };
    r.line(format!("metric: {metric}"));
    r.kv("metric", &metric);
    let frame = if spec.frame.is_some() { "present" } else { "absent" };
    r.line(format!("frame: {frame}"));
    r.kv("frame", frame);
    let names: Vec<&str> = spec.analyses.iter().map(|a| a.name()).collect();
    r.line(format!("analyses: {}", if names.is_empty() { "(none)".into() } else { names.join(", ") }));
    r.kv("analyses", names.join(","));
    Ok(r)
}

fn cohomology_report(spec: &ProblemSpec) -> Result<Report, RunError> {
    let g = &spec.algebra;
    let mut r = Report::new();
    r.line(format!("Chevalley-Eilenberg cohomology of {}", g.to_salamon()));
    r.line(format!("{:>2}  {:>6}  {:>6}  {:>4}", "k", "dim Z", "dim B", "b_k"));
    let mut spaces = Vec::new();
    for k in 0..=g.dim() {
        let h = CohomologySpace::compute(g, k)?;
        r.line(format!(
            "{:>2}  {:>6}  {:>6}  {:>4}",
            k,
            h.cocycles().len(),
            h.coboundaries().len(),
            h.betti()
        ));
        spaces.push(h);
    }
    let bettis: Vec<usize> = spaces.iter().map(|h| h.betti()).collect();
    let euler: i64 = bettis.iter().enumerate().map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) }).sum();
    r.line(format!("euler characteristic: {euler}"));
    for h in spaces.iter().filter(|h| (1..g.dim()).contains(&h.degree())) {
        r.line(format!("H^{} representatives: {}", h.degree(), join_forms(h.quotient_basis())));
    }
    for (k, b) in bettis.iter().enumerate() {
        r.kv(format!("b{k}"), b);
    }
    r.kv("betti", bettis.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(","));
    r.kv("euler", euler);
    Ok(r)
}

fn invariant_report(spec: &ProblemSpec) -> Result<Report, RunError> {
    let j = need_structure(spec, "invariant")?;
    let h2 = CohomologySpace::compute(&spec.algebra, 2)?;
    let report = purity_report_in(&h2, j)?;
    let mut r = Report::new();
    r.line(format!("H^2 of {}: dimension {}", spec.algebra.to_salamon(), report.betti2));
    r.line(format!("H+ (J-invariant classes):      dim {}", report.h_plus.dim()));
    r.line(format!("  {}", join_forms(&h2.representatives(&report.h_plus)?)));
    r.line(format!("H- (J-anti-invariant classes): dim {}", report.h_minus.dim()));
    r.line(format!("  {}", join_forms(&h2.representatives(&report.h_minus)?)));
    r.line(format!("H+ meet H-: dim {}", report.dim_intersection));
    r.line(format!("  {}", join_forms(&h2.representatives(&report.intersection)?)));
    r.line(format!("H+ + H-: dim {}", report.dim_sum));
    r.line(format!("pure={} full={}", report.is_pure, report.is_full));
    for (k, v) in report.key_values() {
        r.kv(k, v);
    }
    Ok(r)
}

fn frame_report(spec: &ProblemSpec) -> Result<Report, RunError> {
    let input = spec
        .frame
        .as_ref()
        .ok_or_else(|| RunError::Data("'frame' needs a [frame] section with omega".into()))?;
    let dim = input.omega.nrows();
    let vectors = input.vectors.clone().unwrap_or_else(|| RatMatrix::identity(dim).rows_vec());
    let frame = symplectic_gram_schmidt(&vectors, &input.omega)?;
    let pair = anti_invariant_pair_from_frame(&frame)?;
    let omega_in = skew_to_two_form(&input.omega)?;
    let squares = pair.j.matrix() * pair.j.matrix() == RatMatrix::identity(dim).scale(&-Scalar::one());
    let reverses = pair.j.act_on_form(&pair.omega)? == -&pair.omega;
    let matches = pair.omega == omega_in;
    let mut r = Report::new();
    r.line(format!("symplectic frame (dimension {dim}, n = {}):", dim / 2));
    for (name, vs) in [("V", frame.v()), ("W", frame.w())] {
        for (i, v) in vs.iter().enumerate() {
            let entries: Vec<String> = v.iter().map(|x| x.to_string()).collect();
            r.line(format!("  {name}{} = ({})", i + 1, entries.join(", ")));
        }
    }
    r.line(format!("construction: {}", pair.note));
    r.line("J (columns are images of e1..en):");
    for line in pair.j.matrix().to_string().lines() {
        r.line(format!("  {line}"));
    }
    r.line(format!("omega = {}", pair.omega));
    r.line(format!("J^2 = -Id: {squares}"));
    r.line(format!("J omega = -omega: {reverses}"));
    r.line(format!("omega equals the input pairing: {matches}"));
    r.kv("dim", dim);
    r.kv("j_squared_minus_id", squares);
    r.kv("anti_invariant", reverses);
    r.kv("omega_matches_input", matches);
    if !(squares && reverses && matches) {
        r.exit_code = EXIT_VERIFICATION;
    }
    Ok(r)
}

fn hodge_report(spec: &ProblemSpec) -> Result<Report, RunError> {
    let j = need_structure(spec, "hodge")?;
    let g = spec
        .metric
        .as_ref()
        .ok_or_else(|| RunError::Data("'hodge' needs a metric".into()))?;
    if g.nrows() != 4 {
        return Err(RunError::Data(format!("'hodge' works in dimension 4, got {}", g.nrows())));
    }
    let metric = MetricSpec::new(g.clone())?.with_structure(j.clone())?;
    if !metric.is_compatible() {
        return Err(RunError::Data("metric is not J-compatible: g(J., J.) != g".into()));
    }
    let report = hodge_identity(&metric)?;
    let omega = metric.fundamental_form().expect("compatible metric");
    let self_dual = crate::acs::star_eigenspace(&metric, TypeSign::Plus)?;
    let mut r = Report::new();
    r.line(format!("fundamental form omega = {omega}"));
    r.line(format!("self-dual forms: dim {}", report.dim_self_dual));
    r.line(format!("  {}", join_forms(&self_dual)));
    r.line(format!("anti-self-dual forms: dim {}", report.dim_anti_self_dual));
    r.line(format!("anti-invariant forms: {}", join_forms(&j.type_space(TypeSign::Minus))));
    r.line(format!("span(omega) + anti-invariant: dim {}", report.dim_omega_plus_anti_invariant));
    r.line(format!("self-dual = span(omega) + anti-invariant: {}", report.identity_holds));
    r.kv("compatible", report.compatible);
    r.kv("dim_self_dual", report.dim_self_dual);
    r.kv("dim_anti_self_dual", report.dim_anti_self_dual);
    r.kv("dim_omega_plus_anti_invariant", report.dim_omega_plus_anti_invariant);
    r.kv("identity_holds", report.identity_holds);
    if !report.identity_holds {
        r.exit_code = EXIT_VERIFICATION;
    }
    Ok(r)
}

pub const IDENTITY_POINTS: usize = 1000;
pub const CLOSEDNESS_POINTS: usize = 100;
pub const CLOSEDNESS_STEPS: [f64; 2] = [2e-3, 1e-3];

/// Acceptable band for the observed finite-difference order.
pub const ORDER_BAND: (f64, f64) = (1.8, 2.2);

fn rank_scan_report(args: &RankScanArgs) -> Result<Report, RunError> {
    let bump = BumpProfile::new(args.rho)?;
    let scan = ranklab::rank_scan(&bump, args.samples, args.tol, args.seed)?;
    let support = ranklab::sample_support_points(&bump, IDENTITY_POINTS, args.seed.wrapping_add(1));
    let identities = ranklab::identity_check(&bump, &support);
    let fd_points = &support[..CLOSEDNESS_POINTS];
    let coarse = ranklab::closedness_check(&bump, fd_points, CLOSEDNESS_STEPS[0])?;
    let fine = ranklab::closedness_check(&bump, fd_points, CLOSEDNESS_STEPS[1])?;
    let order = (coarse.max_residual / fine.max_residual).log2();
    let order_ok = order >= ORDER_BAND.0 && order <= ORDER_BAND.1;
    let fiber = ranklab::fiber_integral(&bump, 400);

    let mut r = Report::new();
    r.line(format!(
        "rank scan on T^6: {} samples, tol {:e}, rho {}, seed {}",
        args.samples, args.tol, args.rho, args.seed
    ));
    r.line("rank  count");
    for (rank, count) in &scan.histogram {
        r.line(format!("{rank:>4}  {count}"));
    }
    if scan.anomalies.is_empty() {
        r.line("every sampled rank is 0 or 4");
    } else {
        r.line(format!("{} samples with rank outside {{0, 4}}:", scan.anomalies.len()));
        for a in scan.anomalies.iter().take(20) {
            r.line(format!("  x = {:?} rank {} singular values {:?}", a.point.coords(), a.rank, a.singular_values));
        }
    }
    r.line(format!("identity check at {} points in the support:", identities.points));
    r.line(format!("  max |w^2 - 2r(tau + dr^sigma)^dsigma| = {:.3e}", identities.max_square_residual));
    r.line(format!("  max |w^3| = {:.3e}", identities.max_cube));
    r.line(format!("  max |dsigma^dsigma| = {:.3e}", identities.max_dsigma_square));
    r.line(format!("  max skew defect = {:.3e}", identities.max_skew_defect));
    r.line(format!("closedness by central differences at {} points:", fd_points.len()));
    for c in [&coarse, &fine] {
        r.line(format!("  h = {:e}: max |dw| = {:.3e}, max |dw| / h^2 = {:.3e}", c.step, c.max_residual, c.constant));
    }
    r.line(format!("  observed order {order:.3}"));
    r.line(format!("fiber integral of the dx5^dx6 coefficient: {fiber:.6}"));
    r.text.push('\n');
    r.text.push_str(ranklab::no_anti_invariant_note());

    let dichotomy = scan.dichotomy_holds();
    r.kv("samples", args.samples);
    r.kv("seed", args.seed);
    for rank in [0usize, 4] {
        r.kv(format!("rank{rank}"), scan.histogram.get(&rank).copied().unwrap_or(0));
    }
    r.kv("anomalies", scan.anomalies.len());
    r.kv("dichotomy", dichotomy);
    r.kv("max_square_residual", format!("{:.3e}", identities.max_square_residual));
    r.kv("max_cube", format!("{:.3e}", identities.max_cube));
    r.kv("max_dsigma_square", format!("{:.3e}", identities.max_dsigma_square));
    r.kv("identities", identities.passed());
    r.kv("closedness_order", format!("{order:.3}"));
    r.kv("closedness_constant", format!("{:.3e}", fine.constant));
    r.kv("fiber_integral", format!("{fiber:.6}"));
    if !(dichotomy && identities.passed() && order_ok) {
        r.exit_code = EXIT_VERIFICATION;
    }

    if let Some(path) = &args.report {
        std::fs::write(path, &r.text).map_err(|e| RunError::Data(format!("{}: {e}", path.display())))?;
    }
    if let Some(path) = &args.csv {
        let mut csv = String::from("x1,x2,x3,x4,x5,x6,rank,smallest_retained\n");
        for s in &scan.samples {
            let c = s.point.coords();
            writeln!(csv, "{},{},{},{},{},{},{},{:e}", c[0], c[1], c[2], c[3], c[4], c[5], s.rank, s.smallest_retained)
                .unwrap();
        }
        std::fs::write(path, csv).map_err(|e| RunError::Data(format!("{}: {e}", path.display())))?;
    }
    Ok(r)
}

/// Captured result of a full command-line invocation.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

/// Parses arguments (including the program name), loads the problem file
/// and runs the subcommand.
pub fn execute<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                Outcome { stdout: String::new(), stderr: rendered, code: EXIT_USAGE }
            } else {
                Outcome { stdout: rendered, stderr: String::new(), code: EXIT_OK }
            };
        }
    };
    let fail = |code: i32, message: String| Outcome { stdout: String::new(), stderr: format!("error: {message}\n"), code };
    let spec = match &cli.spec {
        Some(path) => {
            let text = match std::fs::read_to_string(path) {
                Ok(t) => t,
                Err(e) => return fail(EXIT_DATA, format!("{}: {e}", path.display())),
            };
            match parse_spec(&text) {
                Ok(s) => Some(s),
                Err(e) => return fail(EXIT_DATA, format!("{}: {} error: {e}", path.display(), e.class())),
            }
        }
        None => None,
    };
    match run(spec.as_ref(), &cli.command) {
        Ok(report) => Outcome { stdout: report.render(cli.format), stderr: String::new(), code: report.exit_code },
        Err(e) => fail(e.exit_code(), e.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str = r#"
algebra = "0,0,12,13,14,23"
analyses = ["cohomology", "invariant"]

[J]
psi = ["e1 + i*e2", "e4 + i*e6", "e3 + i*e5"]
"#;

    #[test]
    fn parses_example() {
        let spec = parse_spec(EXAMPLE).unwrap();
        assert_eq!(spec.algebra.dim(), 6);
        assert_eq!(spec.analyses, vec![Analysis::Cohomology, Analysis::Invariant]);
        assert!(spec.j.is_some());
    }

    #[test]
    fn round_trip() {
        let spec = parse_spec(EXAMPLE).unwrap();
        assert_eq!(parse_spec(&spec.to_text()).unwrap(), spec);
        let text = "algebra = [\"0\", \"0\", \"e12\", \"0\"]\nmetric = [[2, 0, 0, 0], [0, 2, 0, 0], [0, 0, \"1/2\", 0], [0, 0, 0, \"1/2\"]]\n\n[J]\nmatrix = [[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]]\n";
        let spec = parse_spec(text).unwrap();
        assert_eq!(parse_spec(&spec.to_text()).unwrap(), spec);
    }

    #[test]
    fn error_classes() {
        let e = parse_spec("algebra = \"0,0,12,13+24,0,0\"").unwrap_err();
        assert_eq!(e.class(), "jacobi");
        let e = parse_spec("algebra = \"0,0\"\nJ.matrix = [[1, 0], [0, 1]]").unwrap_err();
        assert_eq!(e.class(), "structure");
        let e = parse_spec("algebra = \"0,0,\n").unwrap_err();
        assert_eq!(e.class(), "syntax");
        let e = parse_spec("algebra = \"0,0,1x\"").unwrap_err();
        assert!(matches!(e, SpecError::Syntax { line: 1, column: 16, .. }), "{e:?}");
        let e = parse_spec("algebra = \"0,0\"\ncolour = 3").unwrap_err();
        assert!(matches!(e, SpecError::Data { line: 2, column: 1, .. }), "{e:?}");
    }

    #[test]
    fn render_formats() {
        let mut r = Report::new();
        r.line("hello");
        r.kv("a", 1);
        assert_eq!(r.render(Format::Text), "hello\n---\na=1\n");
        assert_eq!(r.render(Format::Kv), "a=1\n");
    }
}

//! Command-line front end. Every command reads one JSON input, runs one
//! computation and writes a versioned JSON or CSV report.
//!
//! Exit codes: 0 pass, 1 verification failure, 2 input error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use serde::Serialize;
use serde_json::Value;

use crate::dirichlet::{
    falsify_invariant_kernel, verify_radius_identity, verify_richter_batch, ReportValue, RichterCase, RichterReport,
    VectorPolynomial, VectorPolynomialSpec,
};
use crate::error::{Error, Result};
use crate::gramian::{check_theorem, gramian_of, TheoremReport};
use crate::measures::{Measure, MeasureSpec};
use crate::moment::{check_conditions, forward_moments, gns, miso_kernel, MomentCheck};
use crate::multiindex::{enumerate_upto, MultiIndex};
use crate::poisson::{KernelKind, McConfig};
use crate::scalar::{cone, cr, czero, fmt_rational, parse_rational, rat, Rational};
use crate::spaces::{SpaceInput, SpaceSpec};
use crate::table::{GramTable, TableWire};
use crate::tuples::{Classification, TruncatedTuple, TupleWire, Verdict};

pub const SCHEMA: &str = "spheridir/1";

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Parser, Clone, Debug)]
#[command(name = "spheridir", version, about = "Dirichlet-type spaces on the unit ball, joint m-isometries and spherical moments")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Options,
}

#[derive(Subcommand, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Richter's identity over a monomial grid and random polynomials.
    VerifyRichter,
    /// The radius-R identity over a monomial grid.
    RadiusIdentity,
    /// m-isometry classification of a multiplication tuple, m = 1..=4.
    Classify,
    /// Gramian array and the defect conditions for one m.
    Gramian,
    /// Forward moments and the positivity and Toeplitz conditions.
    Moments,
    /// Truncated GNS construction from a moment table.
    Gns,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct Options {
    /// JSON input: a measure, space, tuple or table.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Dimension, used when no input is given and checked against it otherwise.
    #[arg(long, global = true)]
    pub d: Option<usize>,
    /// Degree bound.
    #[arg(long = "N", global = true)]
    #[serde(rename = "N")]
    pub n: Option<u32>,
    #[arg(long, global = true)]
    pub k: Option<u32>,
    #[arg(long, global = true)]
    pub m: Option<u32>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 200_000)]
    pub samples: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Use the invariant Poisson kernel and expect the identity to fail.
    #[arg(long, global = true)]
    pub invariant_kernel: bool,
    /// Compare the moment kernel of M_z on D(μ) with the forward moments.
    #[arg(long, global = true)]
    pub extract: bool,
    /// Radius for radius-identity, as "p/q".
    #[arg(long, global = true)]
    pub radius: Option<String>,
}

/// A rendered report and its exit status.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub pass: bool,
    pub text: String,
}

/// Parses `args` (including the program name), runs the command and writes
/// the report. Returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    match run(&cfg).and_then(|o| emit(&cfg, &o).map(|_| o)) {
        Ok(o) if o.pass => EXIT_PASS,
        Ok(_) => EXIT_FAIL,
        Err(e) => {
            eprintln!("spheridir: {e}");
            EXIT_INPUT
        }
    }
}

fn emit(cfg: &RunConfig, o: &Outcome) -> Result<()> {
    match &cfg.opts.out {
        Some(p) => std::fs::write(p, &o.text)?,
        None => std::io::stdout().write_all(o.text.as_bytes())?,
    }
    Ok(())
}

pub fn run(cfg: &RunConfig) -> Result<Outcome> {
    let input = match &cfg.opts.input {
        Some(p) => {
            let text = std::fs::read_to_string(p)?;
            Some(serde_json::from_str::<Value>(&text).map_err(|e| Error::Parse(format!("{}: {e}", p.display())))?)
        }
        None => None,
    };
    match cfg.command {
        Command::VerifyRichter => cmd_verify_richter(cfg, input.as_ref()),
        Command::RadiusIdentity => cmd_radius_identity(cfg, input.as_ref()),
        Command::Classify => cmd_classify(cfg, input.as_ref()),
        Command::Gramian => cmd_gramian(cfg, input.as_ref()),
        Command::Moments => cmd_moments(cfg, input.as_ref()),
        Command::Gns => cmd_gns(cfg, input.as_ref()),
    }
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema: &'static str,
    command: Command,
    config: &'a Options,
    pass: bool,
    #[serde(flatten)]
    body: T,
}

trait Tabular {
    fn header(&self) -> Vec<&'static str>;
    fn rows(&self) -> Vec<Vec<String>>;
}

fn render<T: Serialize + Tabular>(cfg: &RunConfig, pass: bool, body: T) -> Result<Outcome> {
    let text = match cfg.opts.format {
        Format::Json => {
            let env = Envelope {
                schema: SCHEMA,
                command: cfg.command,
                config: &cfg.opts,
                pass,
                body: &body,
            };
            let mut s = serde_json::to_string_pretty(&env)?;
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| Error::Io(std::io::Error::other(e));
            w.write_record(body.header()).map_err(io)?;
            for r in body.rows() {
                w.write_record(&r).map_err(io)?;
            }
            String::from_utf8(w.into_inner().map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?)
                .map_err(|e| Error::Parse(e.to_string()))?
        }
    };
    Ok(Outcome { pass, text })
}

impl<T: Tabular> Tabular for &T {
    fn header(&self) -> Vec<&'static str> {
        (*self).header()
    }
    fn rows(&self) -> Vec<Vec<String>> {
        (*self).rows()
    }
}

fn check_dim(cfg: &RunConfig, d: usize) -> Result<()> {
    match cfg.opts.d {
        Some(e) if e != d => Err(Error::DimensionMismatch { expected: e, found: d }),
        _ => Ok(()),
    }
}

fn parse<T: serde::de::DeserializeOwned>(v: &Value, what: &str) -> Result<T> {
    serde_json::from_value(v.clone()).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

fn is_measure_type(v: &Value) -> bool {
    matches!(
        v.get("type").and_then(Value::as_str),
        Some("surface" | "lambda_c" | "b_lambda" | "polynomial" | "atomic")
    )
}

#[derive(serde::Deserialize)]
struct PairSpec {
    p: VectorPolynomialSpec,
    q: VectorPolynomialSpec,
    #[serde(default)]
    k: Option<u32>,
}

/// A measure, optionally wrapped as `{"measure": …, "pairs": [{"p", "q", "k"}]}`.
fn measure_input(cfg: &RunConfig, input: Option<&Value>) -> Result<(Measure, Vec<PairSpec>)> {
    let (mu, pairs) = match input {
        None => (Measure::surface(cfg.opts.d.unwrap_or(2))?, Vec::new()),
        Some(v) if v.get("measure").is_some() => {
            let mu = parse::<MeasureSpec>(&v["measure"], "measure")?.build()?;
            let pairs = match v.get("pairs") {
                Some(p) => parse(p, "pairs")?,
                None => Vec::new(),
            };
            (mu, pairs)
        }
        Some(v) => (parse::<MeasureSpec>(v, "measure")?.build()?, Vec::new()),
    };
    check_dim(cfg, mu.dim())?;
    Ok((mu, pairs))
}

fn tuple_input(cfg: &RunConfig, input: Option<&Value>, degree: u32) -> Result<(String, TruncatedTuple)> {
    let v = input.ok_or_else(|| Error::invalid("--input is required"))?;
    let out = if v.get("ops").is_some() {
        let t = TruncatedTuple::from_wire(&parse::<TupleWire>(v, "tuple")?)?;
        ("tuple".to_string(), t)
    } else if v.get("entries").is_some() {
        let spec = SpaceSpec::Custom(GramTable::from_wire(&parse::<TableWire>(v, "table")?)?);
        (spec.describe(), TruncatedTuple::from_space(&spec, degree)?)
    } else {
        let spec = match parse::<SpaceInput>(v, "space") {
            Ok(s) => s.build()?,
            Err(e) if is_measure_type(v) => match parse::<MeasureSpec>(v, "measure") {
                Ok(m) => SpaceSpec::Dirichlet(m.build()?),
                Err(_) => return Err(e),
            },
            Err(e) => return Err(e),
        };
        (spec.describe(), TruncatedTuple::from_space(&spec, degree)?)
    };
    check_dim(cfg, out.1.dim())?;
    Ok(out)
}

fn unit(r: usize, s: usize) -> Vec<crate::scalar::ComplexRational> {
    (0..r).map(|i| if i == s { cone() } else { czero() }).collect()
}

fn monomial_grid(d: usize, r: usize, n: u32) -> Vec<(String, VectorPolynomial)> {
    let mut out = Vec::new();
    for a in enumerate_upto(d, n) {
        for s in 0..r {
            let name = if r == 1 { format!("z^{a}") } else { format!("z^{a}e{s}") };
            out.push((name, VectorPolynomial::monomial_vec(&a, unit(r, s))));
        }
    }
    out
}

/// Polynomials with small Gaussian-integer-over-4 coefficients.
fn random_polynomial<R: Rng>(rng: &mut R, d: usize, r: usize, n: u32) -> VectorPolynomial {
    let mut p = VectorPolynomial::zero(d, r);
    for a in enumerate_upto(d, n) {
        let x: Vec<_> = (0..r)
            .map(|_| cr(rat(rng.random_range(-4..=4), 4), rat(rng.random_range(-4..=4), 4)))
            .collect();
        p.add_term(a, x);
    }
    p
}

fn value_cells(v: &ReportValue) -> [String; 4] {
    match v {
        ReportValue::Exact { re, im } => [fmt_rational(&re.0), fmt_rational(&im.0), String::new(), String::new()],
        ReportValue::Estimate { re, im, se_re, se_im } => {
            [re.to_string(), im.to_string(), se_re.to_string(), se_im.to_string()]
        }
    }
}

#[derive(Serialize)]
struct RichterRow {
    p: String,
    q: String,
    #[serde(flatten)]
    report: RichterReport,
    falsified: bool,
}

#[derive(Serialize)]
struct RichterBody {
    measure: String,
    cases: usize,
    passed: usize,
    falsified: usize,
    results: Vec<RichterRow>,
}

impl Tabular for RichterBody {
    fn header(&self) -> Vec<&'static str> {
        vec![
            "p", "q", "k", "radius", "mode", "lhs_re", "lhs_im", "lhs_se_re", "lhs_se_im", "rhs_re", "rhs_im", "rhs_se_re",
            "rhs_se_im", "residual_re", "residual_im", "residual_se_re", "residual_se_im", "z_score", "pass", "falsified",
        ]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.results
            .iter()
            .map(|r| {
                let rep = &r.report;
                let mut row = vec![
                    r.p.clone(),
                    r.q.clone(),
                    rep.k.map(|k| k.to_string()).unwrap_or_default(),
                    rep.radius.clone().unwrap_or_default(),
                    format!("{:?}", rep.mode).to_lowercase(),
                ];
                for v in [&rep.lhs, &rep.rhs, &rep.residual] {
                    row.extend(value_cells(v));
                }
                row.push(rep.z_score.to_string());
                row.push(rep.pass.to_string());
                row.push(r.falsified.to_string());
                row
            })
            .collect()
    }
}

fn richter_body(mu: &Measure, named: Vec<(String, String)>, reports: Vec<RichterReport>) -> RichterBody {
    let results: Vec<RichterRow> = named
        .into_iter()
        .zip(reports)
        .map(|((p, q), report)| RichterRow {
            p,
            q,
            falsified: report.falsified(),
            report,
        })
        .collect();
    RichterBody {
        measure: mu.describe(),
        cases: results.len(),
        passed: results.iter().filter(|r| r.report.pass).count(),
        falsified: results.iter().filter(|r| r.falsified).count(),
        results,
    }
}

fn mc_config(cfg: &RunConfig) -> McConfig {
    McConfig::new(cfg.opts.samples, cfg.opts.seed)
}

fn cmd_verify_richter(cfg: &RunConfig, input: Option<&Value>) -> Result<Outcome> {
    let (mu, pairs) = measure_input(cfg, input)?;
    let (d, r) = (mu.dim(), mu.block_size());
    let n = cfg.opts.n.unwrap_or(2);
    let k_max = cfg.opts.k.unwrap_or(2);
    let mut cases = Vec::new();
    let mut names = Vec::new();
    let grid = monomial_grid(d, r, n);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(cfg.opts.seed);
    let mut extra: Vec<(String, VectorPolynomial, String, VectorPolynomial)> = (0..2)
        .map(|i| {
            (
                format!("random{}", 2 * i),
                random_polynomial(&mut rng, d, r, n),
                format!("random{}", 2 * i + 1),
                random_polynomial(&mut rng, d, r, n),
            )
        })
        .collect();
    for (i, ps) in pairs.iter().enumerate() {
        let (p, q) = (ps.p.build()?, ps.q.build()?);
        if let Some(k) = ps.k {
            names.push((format!("input{i}.p"), format!("input{i}.q")));
            cases.push(RichterCase { p, q, k });
        } else {
            extra.push((format!("input{i}.p"), p, format!("input{i}.q"), q));
        }
    }
    for k in 0..=k_max {
        for (pn, p) in &grid {
            for (qn, q) in &grid {
                names.push((pn.clone(), qn.clone()));
                cases.push(RichterCase {
                    p: p.clone(),
                    q: q.clone(),
                    k,
                });
            }
        }
        for (pn, p, qn, q) in &extra {
            names.push((pn.clone(), qn.clone()));
            cases.push(RichterCase {
                p: p.clone(),
                q: q.clone(),
                k,
            });
        }
    }
    let mc = mc_config(cfg);
    let reports = if cfg.opts.invariant_kernel {
        falsify_invariant_kernel(&cases, &mu, &mc)?
    } else {
        verify_richter_batch(&cases, &mu, KernelKind::Euclidean, &mc)?
    };
    let body = richter_body(&mu, names, reports);
    let pass = if cfg.opts.invariant_kernel {
        body.falsified > 0
    } else {
        body.passed == body.cases
    };
    render(cfg, pass, body)
}

fn cmd_radius_identity(cfg: &RunConfig, input: Option<&Value>) -> Result<Outcome> {
    let (mu, _) = measure_input(cfg, input)?;
    let radius: Rational = match &cfg.opts.radius {
        Some(s) => parse_rational(s)?,
        None => rat(1, 2),
    };
    let grid = monomial_grid(mu.dim(), mu.block_size(), cfg.opts.n.unwrap_or(2));
    let mc = mc_config(cfg);
    let mut names = Vec::new();
    let mut reports = Vec::new();
    for (pn, p) in &grid {
        for (qn, q) in &grid {
            names.push((pn.clone(), qn.clone()));
            reports.push(verify_radius_identity(p, q, &mu, &radius, &mc)?);
        }
    }
    let body = richter_body(&mu, names, reports);
    let pass = body.passed == body.cases;
    render(cfg, pass, body)
}

#[derive(Serialize)]
struct ClassRow {
    #[serde(flatten)]
    classification: Classification,
    #[serde(skip_serializing_if = "Option::is_none")]
    theorem: Option<TheoremReport>,
}

#[derive(Serialize)]
struct ClassifyBody {
    input: String,
    d: usize,
    #[serde(rename = "N")]
    n: u32,
    block: usize,
    /// The Gram matrix is diagonal in the monomial basis.
    monomial_orthogonal: bool,
    joint_kernel_dim: usize,
    rows: Vec<ClassRow>,
}

impl Tabular for ClassifyBody {
    fn header(&self) -> Vec<&'static str> {
        vec!["m", "window", "verdict", "ii", "iv", "defect_psd", "monomial_orthogonal", "joint_kernel_dim"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        let opt = |b: Option<bool>| b.map(|b| b.to_string()).unwrap_or_default();
        self.rows
            .iter()
            .map(|r| {
                let c = &r.classification;
                let t = r.theorem.as_ref();
                vec![
                    c.m.to_string(),
                    c.window.map(|w| w.to_string()).unwrap_or_default(),
                    verdict_str(c.verdict).to_string(),
                    opt(t.map(|t| t.ii.holds)),
                    opt(t.map(|t| t.iv.holds)),
                    opt(t.map(|t| t.defect_psd)),
                    self.monomial_orthogonal.to_string(),
                    self.joint_kernel_dim.to_string(),
                ]
            })
            .collect()
    }
}

fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::Isometry => "isometry",
        Verdict::Concave => "concave",
        Verdict::Convex => "convex",
        Verdict::Neither => "neither",
        Verdict::Inconclusive => "inconclusive",
    }
}

fn cmd_classify(cfg: &RunConfig, input: Option<&Value>) -> Result<Outcome> {
    let n = cfg.opts.n.unwrap_or(6);
    let (name, t) = tuple_input(cfg, input, n)?;
    let m_max = cfg.opts.m.unwrap_or(4);
    if m_max == 0 {
        return Err(Error::invalid("--m must be at least 1"));
    }
    let k_max = cfg.opts.k.unwrap_or(3);
    let gm = gramian_of(&t).ok();
    let rows = t
        .classify_all(m_max)?
        .into_iter()
        .map(|c| {
            let theorem = gm.as_ref().and_then(|g| check_theorem(&g.array, c.m, k_max).ok());
            ClassRow {
                classification: c,
                theorem,
            }
        })
        .collect::<Vec<_>>();
    // With --m the run verifies that T is an m-isometry.
    let pass = match cfg.opts.m {
        Some(m) => rows[m as usize - 1].classification.verdict == Verdict::Isometry,
        None => true,
    };
    let body = ClassifyBody {
        input: name,
        d: t.dim(),
        n: t.degree(),
        block: t.block(),
        monomial_orthogonal: t.gram().is_diagonal(),
        joint_kernel_dim: t.joint_kernel()?.dim(),
        rows,
    };
    render(cfg, pass, body)
}

#[derive(Serialize)]
struct GramianBody {
    input: String,
    frame_dim: usize,
    frame_degree: u32,
    normalized: bool,
    wandering_on_window: bool,
    gramian: TableWire,
    theorem: TheoremReport,
}

impl Tabular for GramianBody {
    fn header(&self) -> Vec<&'static str> {
        vec!["condition", "k", "window", "holds", "residual"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        let t = &self.theorem;
        let mut out = vec![vec![
            "ii".into(),
            String::new(),
            t.ii.window.to_string(),
            t.ii.holds.to_string(),
            t.ii.residual.to_string(),
        ]];
        for c in &t.iii {
            out.push(vec![
                "iii".into(),
                c.k.map(|k| k.to_string()).unwrap_or_default(),
                c.window.to_string(),
                c.holds.to_string(),
                c.residual.to_string(),
            ]);
        }
        out.push(vec![
            "iv".into(),
            String::new(),
            t.iv.window.to_string(),
            t.iv.holds.to_string(),
            t.iv.residual.to_string(),
        ]);
        out.push(vec!["defect_psd".into(), String::new(), String::new(), t.defect_psd.to_string(), String::new()]);
        out
    }
}

fn cmd_gramian(cfg: &RunConfig, input: Option<&Value>) -> Result<Outcome> {
    let (name, t) = tuple_input(cfg, input, cfg.opts.n.unwrap_or(5))?;
    let m = cfg.opts.m.unwrap_or(2);
    let gm = gramian_of(&t)?;
    let theorem = check_theorem(&gm.array, m, cfg.opts.k.unwrap_or(3))?;
    let pass = theorem.all_hold() && theorem.defect_psd;
    let body = GramianBody {
        input: name,
        frame_dim: gm.frame.len(),
        frame_degree: gm.frame_degree,
        normalized: gm.normalized,
        wandering_on_window: gm.wandering_on_window,
        gramian: gm.array.to_wire(),
        theorem,
    };
    render(cfg, pass, body)
}

/// A measure (forward moments to degree `--N`) or a moment table.
fn moment_input(cfg: &RunConfig, input: Option<&Value>) -> Result<(String, Option<Measure>, GramTable)> {
    let n = cfg.opts.n.unwrap_or(3);
    if let Some(v) = input.filter(|v| v.get("entries").is_some()) {
        let mut phi = GramTable::from_wire(&parse::<TableWire>(v, "table")?)?;
        if v.get("kind").is_none() {
            phi = phi.with_kind(crate::table::TableKind::Moment);
        }
        check_dim(cfg, phi.dim())?;
        return Ok(("table".into(), None, phi));
    }
    let (mu, _) = measure_input(cfg, input)?;
    let phi = forward_moments(&mu, n);
    Ok((mu.describe(), Some(mu), phi))
}

#[derive(Serialize)]
struct Extraction {
    /// The moment kernel of M_z on D(μ) equals the forward moments.
    equal: bool,
    #[serde(rename = "N")]
    n: u32,
}

#[derive(Serialize)]
struct MomentsBody {
    input: String,
    d: usize,
    #[serde(rename = "N")]
    n: u32,
    check: MomentCheck,
    #[serde(skip_serializing_if = "Option::is_none")]
    extraction: Option<Extraction>,
    moments: TableWire,
}

impl Tabular for MomentsBody {
    fn header(&self) -> Vec<&'static str> {
        vec!["psd", "rank", "min_eigenvalue", "toeplitz", "toeplitz_residual", "extraction_equal"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        let c = &self.check;
        vec![vec![
            c.psd.to_string(),
            c.rank.to_string(),
            c.min_eigenvalue.to_string(),
            c.toeplitz.to_string(),
            c.toeplitz_residual.to_string(),
            self.extraction.as_ref().map(|e| e.equal.to_string()).unwrap_or_default(),
        ]]
    }
}

fn cmd_moments(cfg: &RunConfig, input: Option<&Value>) -> Result<Outcome> {
    let (name, mu, phi) = moment_input(cfg, input)?;
    let check = check_conditions(&phi)?;
    let extraction = if cfg.opts.extract {
        let mu = mu.ok_or_else(|| Error::invalid("--extract needs a measure input"))?;
        let n = phi.degree();
        let t = TruncatedTuple::from_space(&SpaceSpec::Dirichlet(mu), n + 1)?;
        let kernel = miso_kernel(&t, 2)?;
        Some(Extraction { equal: kernel == phi, n })
    } else {
        None
    };
    let pass = check.passes() && extraction.as_ref().is_none_or(|e| e.equal);
    let body = MomentsBody {
        input: name,
        d: phi.dim(),
        n: phi.degree(),
        check,
        extraction,
        moments: phi.to_wire(),
    };
    render(cfg, pass, body)
}

#[derive(Serialize)]
struct Representative {
    alpha: MultiIndex,
    component: usize,
}

#[derive(Serialize)]
struct GnsBody {
    input: String,
    check: MomentCheck,
    #[serde(skip_serializing_if = "Option::is_none")]
    quotient_dim: Option<usize>,
    representatives: Vec<Representative>,
    #[serde(skip_serializing_if = "Option::is_none")]
    isometry: Option<Classification>,
}

impl Tabular for GnsBody {
    fn header(&self) -> Vec<&'static str> {
        vec!["psd", "toeplitz", "quotient_dim", "isometry"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        vec![vec![
            self.check.psd.to_string(),
            self.check.toeplitz.to_string(),
            self.quotient_dim.map(|q| q.to_string()).unwrap_or_default(),
            self.isometry
                .as_ref()
                .map(|c| (c.verdict == Verdict::Isometry).to_string())
                .unwrap_or_default(),
        ]]
    }
}

fn cmd_gns(cfg: &RunConfig, input: Option<&Value>) -> Result<Outcome> {
    let (name, _, phi) = moment_input(cfg, input)?;
    let check = check_conditions(&phi)?;
    let mut body = GnsBody {
        input: name,
        check: check.clone(),
        quotient_dim: None,
        representatives: Vec::new(),
        isometry: None,
    };
    if !check.passes() {
        return render(cfg, false, body);
    }
    let model = gns(&phi)?;
    let iso = model.tuple.classify(1)?;
    let pass = iso.verdict == Verdict::Isometry;
    body.quotient_dim = Some(model.quotient_dim);
    body.representatives = model
        .representatives
        .into_iter()
        .map(|(alpha, component)| Representative { alpha, component })
        .collect();
    body.isometry = Some(iso);
    render(cfg, pass, body)
}

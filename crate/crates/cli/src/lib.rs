//! Command-line front end for `invarank`.
//!
//! [`run`] takes the full argument vector and writes the report to `out` and
//! diagnostics to `err`, returning the process exit code: 0 on success, 1 on
//! a domain error (the computation itself is impossible or the input file is
//! bad), 2 on a usage error.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use invarank::exactmath::{ExactMatrix, FieldSpec, MatrixJson};
use invarank::invariants::{
    annihilation_check, builtin_invariant, classify_2x2, group_invariance_check, FirstIntegralClass,
    InvariantName, XYZTU,
};
use invarank::invbound::{
    approx, bound_basis, generic_rank, induced_fields, invariant_bound, BoundReport, RankOptions,
    RankReport, Strategy, DEFAULT_SYMBOLIC_MAX_N,
};
use invarank::liealg::{
    identity_decomposition_char2, is_square_zero, lf_algebra, squarezero_basis, standard_basis,
    star_bruteforce_gf2, trace_obstruction, verify_star, AlgebraKind, LfReport, LieBasis, StarReport,
    BRUTEFORCE_MAX_DIM,
};
use invarank::reptheory::{parse_rep, rep_dim, RepExpr};
use invarank::Error;
use num_rational::BigRational;
use serde::Serialize;

/// Environment variable overriding the symbolic-strategy size guard.
pub const MAX_SYMBOLIC_ENV: &str = "INVARANK_MAX_SYMBOLIC_N";

#[derive(Debug, Parser)]
#[command(name = "invarank", version, about = "Square-zero bases and bounds on independent invariants")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Ground field: "q" for the rationals or "p:<prime>".
    #[arg(long, global = true, default_value = "p:32003")]
    pub field: String,

    /// Rank strategy: "random" or "symbolic".
    #[arg(long, global = true, default_value = "random")]
    pub strategy: String,

    #[arg(long, global = true, default_value_t = 5)]
    pub trials: u32,

    /// Seed for every randomized computation; required when one is run.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    #[arg(long, global = true, value_enum, default_value_t = Output::Json)]
    pub output: Output,

    /// Largest space dimension for the symbolic strategy.
    #[arg(long, global = true)]
    pub max_symbolic_n: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print a basis of a matrix Lie algebra.
    Basis {
        kind: String,
        n: usize,
        #[arg(long)]
        squarezero: bool,
    },
    /// Check the square-zero basis property.
    StarCheck { kind: String, n: usize },
    /// Bound the number of independent invariants on a representation.
    Bound { kind: String, n: usize, rep: String },
    /// Generic rank of the induced vector fields.
    Rank { kind: String, n: usize, rep: String },
    /// Self-adjoint maps of a bilinear form given by its Gram matrix.
    Lf { gram: PathBuf },
    /// Write the identity over GF(2) as a sum of square-zero matrices.
    IdentityDecomp { n: usize },
    /// Classify first integrals of a linear planar vector field.
    #[command(name = "classify2x2")]
    Classify2x2 { matrix: PathBuf },
    /// Check a built-in invariant infinitesimally and on group samples.
    Invcheck {
        name: String,
        kind: String,
        n: usize,
        rep: String,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Domain(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Domain(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Domain(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn one_line(msg: &str) -> String {
    msg.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Runs the CLI on `argv` (program name first) and returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    0
                }
                _ => {
                    let rendered = e.render().to_string();
                    let first = rendered.lines().find(|l| !l.trim().is_empty()).unwrap_or("usage error");
                    let _ = writeln!(err, "{}", one_line(first));
                    2
                }
            };
        }
    };
    let mut warnings = Vec::new();
    match execute(&cli, &mut warnings) {
        Ok(report) => {
            for w in &warnings {
                let _ = writeln!(err, "warning: {}", one_line(w));
            }
            let _ = out.write_all(report.as_bytes());
            0
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", one_line(f.message()));
            f.code()
        }
    }
}

struct Ctx {
    field: FieldSpec,
    output: Output,
}

impl Ctx {
    fn emit<T: Serialize>(&self, value: &T, text: impl FnOnce() -> String) -> Result<String, Failure> {
        match self.output {
            Output::Json => {
                let mut s = serde_json::to_string_pretty(value).map_err(|e| Failure::Domain(e.to_string()))?;
                s.push('\n');
                Ok(s)
            }
            Output::Text => Ok(text()),
        }
    }
}

fn parse_kind(s: &str) -> Result<AlgebraKind, Failure> {
    s.parse().map_err(usage)
}

fn parse_rep_arg(s: &str) -> Result<RepExpr, Failure> {
    parse_rep(s).map_err(|e| usage(format!("in representation {s:?}: {e}")))
}

fn rank_options(cli: &Cli) -> Result<RankOptions, Failure> {
    let strategy: Strategy = cli.strategy.parse().map_err(usage)?;
    let symbolic_max_n = match cli.max_symbolic_n {
        Some(n) => n,
        None => match std::env::var(MAX_SYMBOLIC_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| usage(format!("{MAX_SYMBOLIC_ENV} must be a non-negative integer, got {v:?}")))?,
            Err(_) => DEFAULT_SYMBOLIC_MAX_N,
        },
    };
    let seed = match strategy {
        Strategy::RandomEval => require_seed(cli)?,
        Strategy::Symbolic => cli.seed.unwrap_or(0),
    };
    Ok(RankOptions { strategy, trials: cli.trials, seed, symbolic_max_n })
}

fn require_seed(cli: &Cli) -> Result<u64, Failure> {
    cli.seed.ok_or_else(|| usage("--seed is required for randomized computations"))
}

fn read_matrix(path: &Path) -> Result<ExactMatrix, Failure> {
    let src = std::fs::read_to_string(path)
        .map_err(|e| Failure::Domain(format!("cannot read {}: {e}", path.display())))?;
    ExactMatrix::from_json(&src).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))
}

fn execute(cli: &Cli, warnings: &mut Vec<String>) -> Result<String, Failure> {
    let field: FieldSpec = cli.field.parse().map_err(usage)?;
    let ctx = Ctx { field, output: cli.output };
    match &cli.command {
        Command::Basis { kind, n, squarezero } => basis_cmd(&ctx, parse_kind(kind)?, *n, *squarezero),
        Command::StarCheck { kind, n } => star_check_cmd(&ctx, parse_kind(kind)?, *n, warnings),
        Command::Bound { kind, n, rep } => {
            let (kind, expr) = (parse_kind(kind)?, parse_rep_arg(rep)?);
            let opts = rank_options(cli)?;
            let report = invariant_bound(kind, *n, &expr, field, &opts)?;
            warnings.extend(report.warnings.iter().cloned());
            ctx.emit(&report, || bound_text(&report))
        }
        Command::Rank { kind, n, rep } => {
            let (kind, expr) = (parse_kind(kind)?, parse_rep_arg(rep)?);
            let opts = rank_options(cli)?;
            rank_cmd(&ctx, kind, *n, &expr, &opts)
        }
        Command::Lf { gram } => {
            let report = lf_algebra(&read_matrix(gram)?)?;
            ctx.emit(&report, || lf_text(&report))
        }
        Command::IdentityDecomp { n } => identity_cmd(&ctx, *n),
        Command::Classify2x2 { matrix } => {
            let class = classify_2x2(&read_matrix(matrix)?)?;
            ctx.emit(&class, || classify_text(&class))
        }
        Command::Invcheck { name, kind, n, rep, samples } => {
            let name: InvariantName = name.parse().map_err(usage)?;
            let (kind, expr) = (parse_kind(kind)?, parse_rep_arg(rep)?);
            let seed = require_seed(cli)?;
            invcheck_cmd(&ctx, name, kind, *n, &expr, *samples, seed, warnings)
        }
    }
}

#[derive(Serialize)]
struct BasisElement {
    label: String,
    rows: Vec<Vec<String>>,
}

#[derive(Serialize)]
struct BasisOutput {
    kind: AlgebraKind,
    n: usize,
    field: FieldSpec,
    squarezero: bool,
    dim: usize,
    elements: Vec<BasisElement>,
}

fn basis_elements(basis: &LieBasis) -> Vec<BasisElement> {
    basis
        .elements
        .iter()
        .zip(&basis.labels)
        .map(|(m, l)| BasisElement { label: l.clone(), rows: MatrixJson::from(m).rows })
        .collect()
}

fn matrix_text(rows: &[Vec<String>], indent: &str) -> String {
    let width = rows.iter().flatten().map(String::len).max().unwrap_or(1);
    let mut s = String::new();
    for r in rows {
        let cells: Vec<String> = r.iter().map(|c| format!("{c:>width$}")).collect();
        let _ = writeln!(s, "{indent}[{}]", cells.join(" "));
    }
    s
}

fn basis_cmd(ctx: &Ctx, kind: AlgebraKind, n: usize, squarezero: bool) -> Result<String, Failure> {
    let basis = if squarezero {
        squarezero_basis(kind, n, ctx.field)?
    } else {
        standard_basis(kind, n, ctx.field)?
    };
    let out = BasisOutput {
        kind,
        n,
        field: ctx.field,
        squarezero,
        dim: basis.len(),
        elements: basis_elements(&basis),
    };
    ctx.emit(&out, || {
        let mut s = format!("{kind}({n}) over {}: {} elements\n", ctx.field, out.dim);
        for e in &out.elements {
            let _ = writeln!(s, "{}", e.label);
            s.push_str(&matrix_text(&e.rows, "  "));
        }
        s
    })
}

#[derive(Serialize)]
struct StarOutput {
    kind: AlgebraKind,
    n: usize,
    field: FieldSpec,
    basis: &'static str,
    #[serde(flatten)]
    report: StarReport,
    /// GF(2) only: whether square-zero elements of the span span it.
    bruteforce: Option<bool>,
}

fn star_check_cmd(ctx: &Ctx, kind: AlgebraKind, n: usize, warnings: &mut Vec<String>) -> Result<String, Failure> {
    let (basis, which) = if kind.has_squarezero_basis() {
        (squarezero_basis(kind, n, ctx.field)?, "squarezero")
    } else {
        warnings.push(format!("no square-zero construction for {kind}; checking the standard basis"));
        (standard_basis(kind, n, ctx.field)?, "standard")
    };
    let report = verify_star(&basis, kind, n)?;
    let bruteforce = if ctx.field == FieldSpec::Prime(2) && basis.len() <= BRUTEFORCE_MAX_DIM {
        Some(star_bruteforce_gf2(&basis)?)
    } else {
        None
    };
    let out = StarOutput { kind, n, field: ctx.field, basis: which, report, bruteforce };
    ctx.emit(&out, || {
        let r = &out.report;
        let mut s = format!("{kind}({n}) over {}, {} basis\n", ctx.field, out.basis);
        let _ = writeln!(s, "all square-zero: {}", r.all_square_zero);
        let _ = writeln!(s, "in algebra:      {}", r.in_algebra);
        let _ = writeln!(s, "span rank:       {} of {}", r.span_rank, r.target_dim);
        if let Some(b) = out.bruteforce {
            let _ = writeln!(s, "brute force:     {b}");
        }
        let _ = writeln!(s, "satisfied:       {}", r.satisfied);
        s
    })
}

fn ratio_text(q: &Option<BigRational>) -> String {
    match q {
        Some(q) => format!("{}/{} (~{:.3e})", q.numer(), q.denom(), approx(q)),
        None => "0 (exact)".into(),
    }
}

fn bound_text(r: &BoundReport) -> String {
    let mut s = format!("{}({}) on {}\n", r.group, r.n, r.rep);
    let _ = writeln!(s, "N = {}, m = {}, r = {}", r.dim, r.m, r.r);
    let _ = writeln!(s, "bound = {}", r.bound);
    let _ = writeln!(s, "strategy = {} over {}", r.strategy, r.field);
    if r.strategy == Strategy::RandomEval {
        let _ = writeln!(s, "trials = {}, seed = {}", r.trials, r.seed.unwrap_or_default());
    }
    let _ = writeln!(s, "failure bound = {}", ratio_text(&r.failure_bound));
    let _ = writeln!(s, "square-zero certified = {}", r.star_certified);
    s
}

#[derive(Serialize)]
struct RankOutput {
    group: AlgebraKind,
    n: usize,
    rep: RepExpr,
    #[serde(flatten)]
    report: RankReport,
}

fn rank_cmd(ctx: &Ctx, kind: AlgebraKind, n: usize, expr: &RepExpr, opts: &RankOptions) -> Result<String, Failure> {
    let (basis, _) = bound_basis(kind, n, ctx.field)?;
    if rep_dim(expr, basis.ambient) == 0 {
        return Err(Failure::Domain(format!("{expr} has dimension 0 for n = {n}")));
    }
    let fields = induced_fields(&basis, expr)?;
    let report = generic_rank(&fields, opts)?;
    let out = RankOutput { group: kind, n, rep: expr.clone(), report };
    ctx.emit(&out, || {
        let r = &out.report;
        let mut s = format!("{kind}({n}) on {expr}\n");
        let _ = writeln!(s, "m = {}, N = {}, r = {}", r.m, r.n, r.r);
        let _ = writeln!(s, "strategy = {} over {}", r.strategy, r.field);
        let _ = writeln!(s, "failure bound = {}", ratio_text(&r.failure_bound));
        s
    })
}

fn lf_text(r: &LfReport) -> String {
    let mut s = format!("dimension = {}\nabelian = {}\n", r.dimension, r.abelian);
    for (i, b) in r.basis.iter().enumerate() {
        let _ = writeln!(s, "X{}", i + 1);
        s.push_str(&matrix_text(&MatrixJson::from(b).rows, "  "));
    }
    s
}

#[derive(Serialize)]
struct IdentityOutput {
    n: usize,
    field: FieldSpec,
    count: usize,
    all_square_zero: bool,
    sums_to_identity: bool,
    matrices: Vec<Vec<Vec<String>>>,
}

fn identity_cmd(ctx: &Ctx, n: usize) -> Result<String, Failure> {
    if n % 2 == 1 && trace_obstruction(n, FieldSpec::Prime(2))? {
        return Err(Failure::Domain(format!(
            "the {n}x{n} identity has trace 1 over GF(2), so it is not a sum of square-zero matrices"
        )));
    }
    let f = FieldSpec::Prime(2);
    let parts = identity_decomposition_char2(n)?;
    let mut total = ExactMatrix::zeros(f, n, n);
    let mut all_square_zero = true;
    for p in &parts {
        total = total.add(p)?;
        all_square_zero &= is_square_zero(p)?;
    }
    let out = IdentityOutput {
        n,
        field: f,
        count: parts.len(),
        all_square_zero,
        sums_to_identity: total == ExactMatrix::identity(f, n),
        matrices: parts.iter().map(|m| MatrixJson::from(m).rows).collect(),
    };
    ctx.emit(&out, || {
        let mut s = format!(
            "I_{n} over GF(2) = sum of {} square-zero matrices (checked: {})\n",
            out.count,
            out.all_square_zero && out.sums_to_identity
        );
        for (i, m) in out.matrices.iter().enumerate() {
            let _ = writeln!(s, "M{}", i + 1);
            s.push_str(&matrix_text(m, "  "));
        }
        s
    })
}

fn classify_text(c: &FirstIntegralClass) -> String {
    let case = serde_json::to_value(c.case).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
    let mut s = format!("class = {:?}\ncase = {case}\n", c.class);
    if let Some(w) = &c.witness {
        let _ = writeln!(s, "witness = {w}");
    }
    s
}

#[derive(Serialize)]
struct InvcheckOutput {
    invariant: InvariantName,
    formula: String,
    group: AlgebraKind,
    n: usize,
    rep: RepExpr,
    field: FieldSpec,
    /// Annihilated by the induced field of every standard basis element.
    annihilated: bool,
    /// Generators `I + tB` used for the finite check.
    generators: String,
    group_invariant: bool,
    samples: usize,
    seed: u64,
}

#[allow(clippy::too_many_arguments)]
fn invcheck_cmd(
    ctx: &Ctx,
    name: InvariantName,
    kind: AlgebraKind,
    n: usize,
    expr: &RepExpr,
    samples: usize,
    seed: u64,
    warnings: &mut Vec<String>,
) -> Result<String, Failure> {
    let inv = builtin_invariant(name, ctx.field);
    let standard = standard_basis(kind, n, ctx.field)?;
    let dim = rep_dim(expr, standard.ambient);
    if dim != inv.nvars() {
        return Err(Failure::Domain(format!(
            "{name} lives on a space of dimension {}, but {expr} has dimension {dim} for {kind}({n})",
            inv.nvars()
        )));
    }
    let mut annihilated = true;
    for f in induced_fields(&standard, expr)? {
        annihilated &= annihilation_check(&f, &inv)?;
    }
    let gen_kind = match kind {
        AlgebraKind::Gl => {
            warnings.push("gl has no square-zero basis; the finite check uses generators from sl".into());
            AlgebraKind::Sl
        }
        k if k.has_squarezero_basis() => k,
        k => return Err(Failure::Domain(format!("no square-zero generators available for {k}"))),
    };
    let generators = squarezero_basis(gen_kind, n, ctx.field)?;
    let group_invariant = group_invariance_check(expr, &inv, &generators, samples, seed)?;
    let out = InvcheckOutput {
        invariant: name,
        formula: inv.display_with(&XYZTU),
        group: kind,
        n,
        rep: expr.clone(),
        field: ctx.field,
        annihilated,
        generators: format!("{gen_kind}({n}) square-zero"),
        group_invariant,
        samples,
        seed,
    };
    ctx.emit(&out, || {
        let mut s = format!("{name} = {}\n", out.formula);
        let _ = writeln!(s, "{kind}({n}) on {expr} over {}", ctx.field);
        let _ = writeln!(s, "annihilated by induced fields: {annihilated}");
        let _ = writeln!(
            s,
            "invariant under {samples} sampled words in {}: {group_invariant}",
            out.generators
        );
        s
    })
}

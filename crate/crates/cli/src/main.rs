mod cache;

use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use permpat::classify::{classify_with, reconcile, DEFAULT_WINDOW};
use permpat::enumerate::{Method, SequenceRecord};
use permpat::formulas::{known_table, lookup, select, FormulaEntry};
use permpat::generators::{generate, FamilyId};
use permpat::perm::{count_occurrences, occurrences};
use permpat::spec::parse_pattern_with_multiplicity;
use permpat::symmetry::orbit;
use permpat::{Oracle, Pattern, Permutation, RestrictionSpec, SymmetryOp};
use serde::Serialize;

use cache::{CacheError, CacheStore};

#[derive(Parser)]
#[command(name = "permpat", version, about = "Count and classify permutations by avoided and contained patterns")]
struct Cli {
    /// Cache file for computed counts.
    #[arg(long, global = true, env = cache::ENV_VAR, default_value = cache::DEFAULT_PATH)]
    cache: PathBuf,
    /// Neither read nor write the cache.
    #[arg(long, global = true)]
    no_cache: bool,
    #[command(subcommand)]
    command: Command,
}

/// A restriction given either as `--avoid`/`--contain` lists or as `--spec "(123;132)"`.
#[derive(Args, Debug, Default)]
struct SpecArgs {
    /// Patterns to avoid (comma separated or repeated).
    #[arg(long, value_delimiter = ',')]
    avoid: Vec<String>,
    /// Patterns to contain exactly once; `132^2` or a repeat means twice.
    #[arg(long, value_delimiter = ',')]
    contain: Vec<String>,
    /// Whole restriction in canonical text, e.g. `(123;132)` or `(∅;{132,213})`.
    #[arg(long, conflicts_with_all = ["avoid", "contain"])]
    spec: Option<String>,
}

impl SpecArgs {
    fn is_empty(&self) -> bool {
        self.avoid.is_empty() && self.contain.is_empty() && self.spec.is_none()
    }

    fn build(&self) -> Result<RestrictionSpec, Failure> {
        if let Some(text) = &self.spec {
            return Ok(text.parse()?);
        }
        let avoid = self
            .avoid
            .iter()
            .map(|t| t.trim().parse::<Pattern>())
            .collect::<Result<Vec<_>, _>>()?;
        let contain = self
            .contain
            .iter()
            .map(|t| parse_pattern_with_multiplicity(t))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(RestrictionSpec::new(avoid, contain)?)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum SpecSet {
    /// The 30 ordered pairs (α;β).
    Ordered,
    /// The 15 multisets (∅;{α,β}).
    Multiset,
    /// Both, classified jointly.
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Count occurrences of a pattern in a permutation.
    Count {
        permutation: String,
        pattern: String,
        /// Stop counting at this value.
        #[arg(long)]
        cap: Option<u64>,
        /// Also list each occurrence as 1-based positions.
        #[arg(long)]
        list: bool,
    },
    /// List the permutations of length n satisfying a restriction.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        spec: SpecArgs,
    },
    /// Compute s_n for a range of n.
    Sequence {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, default_value_t = 1)]
        from: usize,
        #[arg(long)]
        to: usize,
        /// brute, formula or generator.
        #[arg(long, default_value = "brute")]
        method: Method,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Cross-check every method that applies; disagreement exits with 1.
        #[arg(long)]
        check: bool,
    },
    /// Check closed forms against brute force.
    Verify {
        #[arg(long, default_value_t = 8)]
        nmax: usize,
        /// `all`, or a comma list of theorem or class labels (e.g. `5.3,B`).
        #[arg(long, default_value = "all")]
        theorems: String,
        #[arg(long)]
        json: bool,
    },
    /// Group specs by their count sequences over a window.
    Classify {
        #[arg(long, value_enum, default_value = "all")]
        set: SpecSet,
        /// Classify these specs instead of a built-in set (repeatable).
        #[arg(long = "spec")]
        specs: Vec<String>,
        #[arg(long, default_value_t = DEFAULT_WINDOW.0)]
        from: usize,
        #[arg(long, default_value_t = DEFAULT_WINDOW.1)]
        to: usize,
        #[arg(long)]
        json: bool,
    },
    /// List the images of a restriction under the 8 symmetries.
    Orbit {
        #[command(flatten)]
        spec: SpecArgs,
        /// List the whole formula class the restriction belongs to instead.
        #[arg(long)]
        class: bool,
    },
    /// Build a family by its recursive rule.
    Generate {
        /// Label (F_132_312) or restriction (132;312).
        #[arg(long)]
        family: FamilyId,
        #[arg(long)]
        n: usize,
    },
    /// Apply a symmetry (id, r, c, i, rc, ri, ci, rci) to a permutation or restriction.
    Apply {
        #[arg(long)]
        op: SymmetryOp,
        permutation: Option<String>,
        #[command(flatten)]
        spec: SpecArgs,
    },
}

#[derive(Debug)]
enum Failure {
    /// Bad input; exit code 2.
    Usage(String),
    /// A check failed or a cached value disagrees; exit code 1.
    Mismatch(String),
    Io(io::Error),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Mismatch(_) | Failure::Io(_) => 1,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Mismatch(m) => f.write_str(m),
            Failure::Io(e) => write!(f, "{e}"),
        }
    }
}

impl From<permpat::Error> for Failure {
    fn from(e: permpat::Error) -> Self {
        use permpat::Error::*;
        match e {
            InvalidInput(_) | Parse(_) | ResourceLimit { .. } => Failure::Usage(e.to_string()),
            Overflow(_) | NonIntegral { .. } => Failure::Mismatch(e.to_string()),
        }
    }
}

impl From<CacheError> for Failure {
    fn from(e: CacheError) -> Self {
        match e {
            CacheError::Corrupt(..) => Failure::Usage(e.to_string()),
            _ => Failure::Mismatch(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

/// Compact digits when every letter is a single digit, tokens otherwise.
fn show(p: &Permutation) -> String {
    p.compact().unwrap_or_else(|| p.to_string())
}

struct Ctx {
    oracle: Oracle,
    cache: CacheStore,
}

impl Ctx {
    fn brute(&mut self, spec: &RestrictionSpec, n: usize) -> Result<u64, Failure> {
        let oracle = self.oracle;
        self.cache
            .get_or_compute(Method::Brute, spec, n, || oracle.count(n, spec).map_err(Failure::from))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cache = if cli.no_cache {
        Ok(CacheStore::disabled())
    } else {
        CacheStore::open(&cli.cache)
    };
    let outcome = cache.map_err(Failure::from).and_then(|cache| {
        let mut ctx = Ctx { oracle: Oracle::default(), cache };
        let mut out = io::stdout().lock();
        let result = run(cli.command, &mut ctx, &mut out);
        // Keep whatever was computed, even if the command itself failed.
        let flushed = ctx.cache.flush().map_err(Failure::from);
        out.flush()?;
        result.and_then(|code| flushed.map(|()| code))
    });
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("permpat: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(command: Command, ctx: &mut Ctx, out: &mut impl Write) -> Result<ExitCode, Failure> {
    match command {
        Command::Count { permutation, pattern, cap, list } => {
            let pi: Permutation = permutation.parse()?;
            let alpha: Pattern = pattern.parse()?;
            let c = count_occurrences(&pi, &alpha, cap);
            writeln!(out, "{}", c.value)?;
            if c.capped {
                eprintln!("permpat: stopped at the cap; the true count is larger");
            }
            if list {
                let limit = cap.map_or(usize::MAX, |c| usize::try_from(c).unwrap_or(usize::MAX));
                for occ in occurrences(&pi, &alpha, limit) {
                    let pos: Vec<String> = occ.iter().map(|i| (i + 1).to_string()).collect();
                    writeln!(out, "{}", pos.join(" "))?;
                }
            }
        }
        Command::Enumerate { n, spec } => {
            let spec = spec.build()?;
            for p in ctx.oracle.members(n, &spec)? {
                writeln!(out, "{}", show(&p))?;
            }
        }
        Command::Sequence { spec, from, to, method, format, check } => {
            return sequence(ctx, out, spec.build()?, from, to, method, format, check);
        }
        Command::Verify { nmax, theorems, json } => return verify(ctx, out, nmax, &theorems, json),
        Command::Classify { set, specs, from, to, json } => {
            let specs: Vec<RestrictionSpec> = if specs.is_empty() {
                match set {
                    SpecSet::Ordered => RestrictionSpec::ordered_pairs_len3(),
                    SpecSet::Multiset => RestrictionSpec::multiset_pairs_len3(),
                    SpecSet::All => {
                        let mut all = RestrictionSpec::ordered_pairs_len3();
                        all.extend(RestrictionSpec::multiset_pairs_len3());
                        all
                    }
                }
            } else {
                specs.iter().map(|s| s.parse()).collect::<Result<_, _>>()?
            };
            classify_cmd(ctx, out, &specs, from, to, json)?;
        }
        Command::Orbit { spec, class } => {
            let spec = spec.build()?;
            let list: Vec<RestrictionSpec> = if class {
                let entry = lookup(&spec)
                    .ok_or_else(|| Failure::Usage(format!("{spec} belongs to no formula class")))?;
                entry.members.iter().cloned().collect()
            } else {
                orbit(&spec).into_iter().collect()
            };
            for s in list {
                writeln!(out, "{s}")?;
            }
        }
        Command::Generate { family, n } => {
            for p in generate(family, n)? {
                writeln!(out, "{}", show(&p))?;
            }
        }
        Command::Apply { op, permutation, spec } => match (permutation, spec.is_empty()) {
            (Some(text), true) => writeln!(out, "{}", show(&op.apply(&text.parse()?)))?,
            (None, false) => writeln!(out, "{}", op.apply_to_spec(&spec.build()?))?,
            _ => return Err(Failure::Usage("give either a permutation or a restriction".into())),
        },
    }
    Ok(ExitCode::SUCCESS)
}

/// The value of `s_n` by `method`, or `None` where the method does not apply.
fn value_by(ctx: &mut Ctx, spec: &RestrictionSpec, n: usize, method: Method) -> Result<Option<u64>, Failure> {
    Ok(match method {
        Method::Brute => Some(ctx.brute(spec, n)?),
        Method::Formula => match lookup(spec) {
            Some(entry) => entry.eval(n)?,
            None => None,
        },
        Method::Generator => match FamilyId::ALL.into_iter().find(|f| f.spec() == *spec) {
            Some(f) if n >= f.base_size() => Some(generate(f, n)?.len() as u64),
            _ => None,
        },
    })
}

#[allow(clippy::too_many_arguments)]
fn sequence(
    ctx: &mut Ctx,
    out: &mut impl Write,
    spec: RestrictionSpec,
    from: usize,
    to: usize,
    method: Method,
    format: Format,
    check: bool,
) -> Result<ExitCode, Failure> {
    if from > to {
        return Err(Failure::Usage(format!("empty range {from}..={to}")));
    }
    let mut values = Vec::new();
    for n in from..=to {
        let v = value_by(ctx, &spec, n, method)?.ok_or_else(|| {
            Failure::Usage(format!("method {method} gives no value for {spec} at n = {n}"))
        })?;
        values.push(v);
    }
    let mut disagreements = Vec::new();
    if check {
        for (n, v) in (from..).zip(&values) {
            for other in [Method::Brute, Method::Formula, Method::Generator] {
                // Brute force beyond the oracle limit is skipped, not an error.
                if other == Method::Brute && n > ctx.oracle.limit() {
                    continue;
                }
                if let Some(w) = value_by(ctx, &spec, n, other)? {
                    if w != *v {
                        disagreements.push(format!("n = {n}: {method} {v}, {other} {w}"));
                    }
                }
            }
        }
    }
    let record = SequenceRecord::new(spec, from, values, method);
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string(&record).expect("records serialize"))?,
        Format::Csv => {
            writeln!(out, "n,count")?;
            for (n, v) in record.iter() {
                writeln!(out, "{n},{v}")?;
            }
        }
    }
    if disagreements.is_empty() {
        Ok(ExitCode::SUCCESS)
    } else {
        Err(Failure::Mismatch(format!("methods disagree: {}", disagreements.join("; "))))
    }
}

#[derive(Serialize)]
struct VerifyRow<'a> {
    #[serde(flatten)]
    entry: &'a FormulaEntry,
    status: &'static str,
    checks: usize,
    mismatches: Vec<String>,
}

fn verify(ctx: &mut Ctx, out: &mut impl Write, nmax: usize, theorems: &str, json: bool) -> Result<ExitCode, Failure> {
    let entries: Vec<&FormulaEntry> = if theorems.trim().eq_ignore_ascii_case("all") {
        known_table().iter().collect()
    } else {
        let mut picked: Vec<&FormulaEntry> = Vec::new();
        for key in theorems.split(',').map(str::trim).filter(|k| !k.is_empty()) {
            let found = select(key);
            if found.is_empty() {
                return Err(Failure::Usage(format!("no ledger entry answers to {key:?}")));
            }
            for e in found {
                if !picked.iter().any(|p| p.class_id == e.class_id) {
                    picked.push(e);
                }
            }
        }
        picked.sort_by_key(|e| e.class_id);
        picked
    };
    if nmax > ctx.oracle.limit() {
        return Err(Failure::Usage(format!("--nmax {nmax} exceeds the brute-force limit {}", ctx.oracle.limit())));
    }

    let mut rows = Vec::new();
    for entry in entries {
        let mut checks = 0;
        let mut mismatches = Vec::new();
        for spec in &entry.members {
            for n in 1..=nmax {
                let Some(expected) = entry.eval(n)? else { continue };
                let got = ctx.brute(spec, n)?;
                checks += 1;
                if got != expected {
                    mismatches.push(format!("{spec} n={n}: formula {expected}, brute {got}"));
                }
            }
        }
        let status = if mismatches.is_empty() { "PASS" } else { "FAIL" };
        rows.push(VerifyRow { entry, status, checks, mismatches });
    }
    let failed = rows.iter().filter(|r| r.status == "FAIL").count();

    if json {
        #[derive(Serialize)]
        struct Report<'a> {
            nmax: usize,
            entries: &'a [VerifyRow<'a>],
            failed: usize,
        }
        let text = serde_json::to_string_pretty(&Report { nmax, entries: &rows, failed }).expect("report serializes");
        writeln!(out, "{text}")?;
    } else {
        writeln!(out, "{:<6} {:<20} {:<32} {:<52} {:>6}", "status", "class", "formula", "valid", "checks")?;
        for r in &rows {
            writeln!(
                out,
                "{:<6} {:<20} {:<32} {:<52} {:>6}",
                r.status,
                r.entry.class_id.label(),
                r.entry.closed_form.to_string(),
                r.entry.validity(),
                r.checks
            )?;
            for m in &r.mismatches {
                writeln!(out, "       {m}")?;
            }
        }
        writeln!(out, "{} entries, {} failed, n <= {nmax}", rows.len(), failed)?;
    }
    Ok(if failed == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn classify_cmd(
    ctx: &mut Ctx,
    out: &mut impl Write,
    specs: &[RestrictionSpec],
    from: usize,
    to: usize,
    json: bool,
) -> Result<(), Failure> {
    if to > ctx.oracle.limit() {
        return Err(Failure::Usage(format!("--to {to} exceeds the brute-force limit {}", ctx.oracle.limit())));
    }
    // Fill the cache first so the classifier only reads settled values.
    for spec in specs {
        for n in from..=to {
            ctx.brute(spec, n)?;
        }
    }
    let cache = &ctx.cache;
    let report = classify_with(specs, from, to, |spec, n| {
        Ok(cache.get(Method::Brute, spec, n).expect("value was just cached"))
    })?;
    if json {
        writeln!(out, "{}", serde_json::to_string_pretty(&report).expect("report serializes"))?;
        return Ok(());
    }

    let rec = reconcile(&report);
    let mut rows: Vec<(String, usize)> = rec
        .classes
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let mut label: Vec<&str> = c.table_classes.iter().map(|id| id.label()).collect();
            if !c.unlisted.is_empty() {
                label.push("?");
            }
            (label.join("/"), i)
        })
        .collect();
    rows.sort();

    writeln!(out, "{}, n = {from}..={to}", report.method)?;
    let witnesses: Vec<String> = report
        .classes
        .iter()
        .map(|c| c.witness.iter().map(u64::to_string).collect::<Vec<_>>().join(","))
        .collect();
    let width = witnesses.iter().map(String::len).max().unwrap_or(0).max(3);
    writeln!(out, "{:<8} {:>4}  {:<width$}  members", "class", "size", "s_n")?;
    for (label, i) in rows {
        let class = &report.classes[i];
        let mut line = String::new();
        write!(line, "{:<8} {:>4}  {:<width$} ", label, class.members.len(), witnesses[i]).unwrap();
        for m in &class.members {
            write!(line, " {m}").unwrap();
        }
        writeln!(out, "{line}")?;
        if rec.classes[i].fused_beyond_symmetry() {
            writeln!(out, "{:<8} {:>4}  joins {} symmetry orbits", "", "", rec.classes[i].orbit_count)?;
        }
    }
    let notes = rec.discrepancies();
    if notes.is_empty() {
        writeln!(out, "every class matches one formula class")?;
    } else {
        for n in notes {
            writeln!(out, "note: {n}")?;
        }
    }
    Ok(())
}

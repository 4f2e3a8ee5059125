use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use qtorus::involution::{classify, involution_center};
use qtorus::normal_form::reduce;
use qtorus::roots::{count_roots, eala_class_list, generate_roots, EarsSpec, Root, Stratum};
use qtorus::semilattice::{
    census_all, census_all_lower_bound, census_involutive, from_involution, similar,
    stated_involutive_census, CosetPattern,
};
use qtorus::torus::{transport_pair, ElementaryMatrix, Involution};
use qtorus::verify::{self, Suite};

mod output;

use output::{Format, Table};

#[derive(Parser, Debug)]
#[command(name = "qtorus", version, about = "Elementary quantum tori with graded involution")]
struct Cli {
    /// Output format
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    format: Format,

    /// Suppress progress messages on stderr
    #[arg(long, short, global = true)]
    quiet: bool,

    /// Worker threads (default: all cores); TORUS_JOBS takes precedence
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Reduce a commutation matrix such as "+--/-+-/--+" to normal form
    NormalForm {
        #[arg(allow_hyphen_values = true)]
        matrix: String,
    },
    /// Classify a pair (matrix, signs) such as ("+-/-+", "+-")
    Classify {
        #[arg(allow_hyphen_values = true)]
        matrix: String,
        #[arg(allow_hyphen_values = true)]
        signs: String,
    },
    /// Invariants of a coset pattern such as "000,110,011"
    Semilattice {
        /// Pattern literal; omit when giving --matrix and --signs
        pattern: Option<String>,
        /// Build the pattern of fixed degrees of this matrix
        #[arg(long, requires = "signs", conflicts_with = "pattern", allow_hyphen_values = true)]
        matrix: Option<String>,
        #[arg(long, requires = "matrix", allow_hyphen_values = true)]
        signs: Option<String>,
        /// Search for a similarity onto this pattern
        #[arg(long)]
        compare: Option<String>,
    },
    /// Similarity-class census
    Census {
        n: usize,
        #[arg(value_enum)]
        scope: Scope,
        /// Rank of the finite root system for the eala scope
        #[arg(long, default_value_t = 4)]
        r: usize,
    },
    /// Dump roots of R(Λ, S) of type C_r in a box, as JSON lines
    Roots {
        r: usize,
        n: usize,
        /// Pattern literal of S, e.g. "0,1"; "" for nullity 0
        pattern: String,
        #[arg(name = "box")]
        bound: u32,
    },
    /// Compare closed forms and algorithms against brute-force oracles
    Verify {
        #[arg(value_enum)]
        suite: SuiteArg,
        #[arg(long)]
        max_n: Option<usize>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Scope {
    Involutive,
    All,
    Eala,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SuiteArg {
    Index,
    Classify,
    Reduce,
    Census,
    All,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(qtorus::Error),
    #[error("{0}")]
    Core(qtorus::Error),
    #[error("verification failed: {0} discrepancies")]
    Verification(usize),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            Self::Usage(_) | Self::Core(_) => 1,
            Self::Input(_) => 2,
            Self::Verification(_) => 3,
            Self::Io(_) | Self::Json(_) | Self::Csv(_) => 1,
        }
    }
}

impl From<qtorus::Error> for CliError {
    fn from(e: qtorus::Error) -> Self {
        use qtorus::Error::*;
        match e {
            DimensionOutOfRange { .. } | EnumerationTooLarge { .. } | InvalidParameters(_) => {
                Self::Usage(e.to_string())
            }
            _ => Self::Core(e),
        }
    }
}

/// Errors from user literals are input errors (exit 2).
fn input<T>(r: qtorus::Result<T>) -> Result<T, CliError> {
    r.map_err(CliError::Input)
}

fn parse_pair(matrix: &str, signs: &str) -> Result<(ElementaryMatrix, Involution), CliError> {
    let e: ElementaryMatrix = input(matrix.parse())?;
    let tau: Involution = input(signs.parse())?;
    if e.dim() != tau.dim() {
        return Err(CliError::Input(qtorus::Error::SizeMismatch {
            expected: e.dim(),
            found: tau.dim(),
        }));
    }
    Ok((e, tau))
}

struct Ctx {
    format: Format,
    quiet: bool,
}

impl Ctx {
    fn progress(&self, msg: &str) {
        if !self.quiet {
            eprintln!("{msg}");
        }
    }
}

fn normal_form(matrix: &str) -> Result<Table, CliError> {
    let e: ElementaryMatrix = input(matrix.parse())?;
    let r = reduce(&e)?;
    let json = serde_json::to_value(&r)?;
    Ok(Table::single(
        json,
        &["l", "witness", "ops", "target"],
        vec![
            r.l.to_string(),
            output::int_rows(&r.witness.rows()),
            output::ops(r.witness.ops()),
            r.target.to_string(),
        ],
    ))
}

fn classify_cmd(matrix: &str, signs: &str) -> Result<Table, CliError> {
    let (e, tau) = parse_pair(matrix, signs)?;
    let class = classify(&e, &tau)?;
    let pattern = from_involution(&e, &tau)?;
    // the centre has coordinate shape in the canonical basis
    let (e2, tau2) = transport_pair(&e, &tau, &class.witness.to_gf2())?;
    let profile = involution_center(&e2, &tau2)?.scale_profile();
    let json = json!({
        "l": class.l,
        "kind": class.kind,
        "witness": class.witness,
        "index": pattern.index(),
        "saturation": pattern.saturation_number(),
        "center_profile": profile,
    });
    let profile_text = profile
        .map(|p| p.iter().map(u8::to_string).collect::<Vec<_>>().join(" "))
        .unwrap_or_default();
    Ok(Table::single(
        json,
        &["l", "kind", "witness", "ops", "index", "saturation", "center_profile"],
        vec![
            class.l.to_string(),
            class.kind.to_string(),
            output::int_rows(&class.witness.rows()),
            output::ops(class.witness.ops()),
            pattern.index().to_string(),
            pattern.saturation_number().to_string(),
            profile_text,
        ],
    ))
}

fn semilattice_cmd(
    pattern: Option<&str>,
    pair: Option<(&str, &str)>,
    compare: Option<&str>,
) -> Result<Table, CliError> {
    let p: CosetPattern = match (pattern, pair) {
        (Some(text), None) => input(text.parse())?,
        (None, Some((m, s))) => {
            let (e, tau) = parse_pair(m, s)?;
            from_involution(&e, &tau)?
        }
        _ => return Err(CliError::Usage("give a pattern literal or --matrix with --signs".into())),
    };
    let (index, saturation, twist) = p.invariants();
    let sigma = CosetPattern::from_subspace(&p.saturated_subgroup())?;
    let mut json = json!({
        "pattern": p.to_string(),
        "rank": p.rank(),
        "index": index,
        "saturation": saturation,
        "twist": twist,
        "spanning": p.is_semilattice_in_lambda(),
        "saturated_subgroup": sigma.to_string(),
    });
    let mut header = vec!["pattern", "rank", "index", "saturation", "twist", "spanning", "saturated_subgroup"];
    let mut row = vec![
        p.to_string(),
        p.rank().to_string(),
        index.to_string(),
        saturation.to_string(),
        twist.to_string(),
        p.is_semilattice_in_lambda().to_string(),
        sigma.to_string(),
    ];
    if let Some(text) = compare {
        let q: CosetPattern = input(text.parse())?;
        if q.rank() != p.rank() {
            return Err(CliError::Input(qtorus::Error::SizeMismatch {
                expected: p.rank(),
                found: q.rank(),
            }));
        }
        let witness = similar(&p, &q)?;
        json["compare"] = json!(q.to_string());
        json["similar"] = json!(witness.is_some());
        json["witness"] = serde_json::to_value(&witness)?;
        header.extend(["compare", "similar", "translation"]);
        row.extend([
            q.to_string(),
            witness.is_some().to_string(),
            witness.map(|w| w.translation.to_string()).unwrap_or_default(),
        ]);
    }
    Ok(Table::single(json, &header, row))
}

#[derive(Serialize)]
struct CensusSummary {
    n: usize,
    scope: &'static str,
    classes: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    stated: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lower_bound: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    r: Option<usize>,
}

fn census_cmd(ctx: &Ctx, n: usize, scope: Scope, r: usize) -> Result<Table, CliError> {
    ctx.progress(&format!("census n={n} scope={}", format!("{scope:?}").to_lowercase()));
    let (rows, summary): (Vec<Value>, CensusSummary) = match scope {
        Scope::Involutive => {
            let classes = census_involutive(n)?;
            let summary = CensusSummary {
                n,
                scope: "involutive",
                classes: classes.len(),
                stated: Some(stated_involutive_census(n)),
                lower_bound: None,
                r: None,
            };
            (classes.iter().map(serde_json::to_value).collect::<Result<_, _>>()?, summary)
        }
        Scope::All => {
            let classes = census_all(n)?;
            let summary = CensusSummary {
                n,
                scope: "all",
                classes: classes.len(),
                stated: None,
                lower_bound: Some(census_all_lower_bound(n)),
                r: None,
            };
            (classes.iter().map(serde_json::to_value).collect::<Result<_, _>>()?, summary)
        }
        Scope::Eala => {
            let classes = eala_class_list(n, r)?;
            let summary = CensusSummary {
                n,
                scope: "eala",
                classes: classes.len(),
                stated: Some(qtorus::roots::stated_eala_count(n, r)),
                lower_bound: None,
                r: Some(r),
            };
            (classes.iter().map(serde_json::to_value).collect::<Result<_, _>>()?, summary)
        }
    };
    Ok(Table::from_records(json!({ "summary": summary, "classes": rows }), rows.clone()))
}

#[derive(Serialize)]
struct RootSummary {
    summary: bool,
    iso: u64,
    short: u64,
    long: u64,
    total: u64,
}

fn roots_cmd(ctx: &Ctx, r: usize, n: usize, pattern: &str, bound: u32) -> Result<(), CliError> {
    let p: CosetPattern = input(pattern.parse())?;
    if p.rank() != n {
        return Err(CliError::Input(qtorus::Error::SizeMismatch {
            expected: n,
            found: p.rank(),
        }));
    }
    let spec = EarsSpec::new(r, p)?;
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let mut counts = [0u64; 3];
    let mut tally = |root: &Root| {
        counts[match root.stratum {
            Stratum::Iso => 0,
            Stratum::Short => 1,
            Stratum::Long => 2,
        }] += 1;
    };
    match ctx.format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(["stratum", "finite", "lambda"])?;
            for root in generate_roots(&spec, bound) {
                tally(&root);
                w.write_record(root_record(&root))?;
            }
            w.flush()?;
        }
        Format::Json => {
            for root in generate_roots(&spec, bound) {
                tally(&root);
                serde_json::to_writer(&mut out, &root)?;
                out.write_all(b"\n")?;
            }
        }
    }
    debug_assert_eq!(count_roots(&spec, bound), (counts[0], counts[1], counts[2]));
    let summary = RootSummary {
        summary: true,
        iso: counts[0],
        short: counts[1],
        long: counts[2],
        total: counts.iter().sum(),
    };
    match ctx.format {
        Format::Csv => ctx.progress(&format!(
            "{} roots: {} isotropic, {} short, {} long",
            summary.total, summary.iso, summary.short, summary.long
        )),
        Format::Json => {
            serde_json::to_writer(&mut out, &summary)?;
            out.write_all(b"\n")?;
        }
    }
    out.flush()?;
    Ok(())
}

fn root_record(root: &Root) -> [String; 3] {
    let join = |v: &[i64]| v.iter().map(i64::to_string).collect::<Vec<_>>().join(" ");
    let stratum = match root.stratum {
        Stratum::Iso => "iso",
        Stratum::Short => "short",
        Stratum::Long => "long",
    };
    [stratum.to_string(), join(&root.finite), join(&root.lambda)]
}

fn verify_cmd(ctx: &Ctx, suite: SuiteArg, max_n: Option<usize>) -> Result<(), CliError> {
    let suites: Vec<Suite> = match suite {
        SuiteArg::Index => vec![Suite::Index],
        SuiteArg::Classify => vec![Suite::Classify],
        SuiteArg::Reduce => vec![Suite::Reduce],
        SuiteArg::Census => vec![Suite::Census],
        SuiteArg::All => Suite::ALL.to_vec(),
    };
    let mut reports = Vec::new();
    for s in suites {
        let mut n = max_n.unwrap_or(default_max_n(s));
        if matches!(suite, SuiteArg::All) {
            n = n.min(s.max_dim());
        }
        ctx.progress(&format!("verify {s} up to n={n}"));
        reports.push(verify::run(s, n)?);
    }
    let failures: usize = reports.iter().map(|r| r.discrepancies.len()).sum();
    let rows = reports
        .iter()
        .flat_map(|r| {
            r.discrepancies.iter().map(move |d| {
                json!({ "suite": r.suite, "input": d.input, "expected": d.expected, "got": d.got })
            })
        })
        .collect();
    let table = Table::from_records(json!({ "passed": failures == 0, "reports": reports }), rows)
        .with_header(&["suite", "input", "expected", "got"]);
    table.emit(ctx.format)?;
    if failures > 0 {
        return Err(CliError::Verification(failures));
    }
    Ok(())
}

fn default_max_n(s: Suite) -> usize {
    match s {
        Suite::Index => 8,
        Suite::Classify => 4,
        Suite::Reduce => 5,
        Suite::Census => 4,
    }
}

fn jobs(flag: Option<usize>) -> Result<Option<usize>, CliError> {
    match std::env::var("TORUS_JOBS") {
        Ok(v) if !v.trim().is_empty() => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| CliError::Usage(format!("TORUS_JOBS must be a positive integer, got {v:?}"))),
        _ => Ok(flag),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(n) = jobs(cli.jobs)? {
        if n == 0 {
            return Err(CliError::Usage("--jobs must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let ctx = Ctx {
        format: cli.format,
        quiet: cli.quiet,
    };
    let table = match cli.command {
        Command::NormalForm { matrix } => normal_form(&matrix)?,
        Command::Classify { matrix, signs } => classify_cmd(&matrix, &signs)?,
        Command::Semilattice {
            pattern,
            matrix,
            signs,
            compare,
        } => {
            let pair = matrix.as_deref().zip(signs.as_deref());
            semilattice_cmd(pattern.as_deref(), pair, compare.as_deref())?
        }
        Command::Census { n, scope, r } => census_cmd(&ctx, n, scope, r)?,
        Command::Roots { r, n, pattern, bound } => return roots_cmd(&ctx, r, n, &pattern, bound),
        Command::Verify { suite, max_n } => return verify_cmd(&ctx, suite, max_n),
    };
    table.emit(ctx.format)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

use std::fmt::Display;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::builder::TypedValueParser;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use vassiliev::chordalg::{self, Ambient, RelationKind, RelationMatrix};
use vassiliev::invariants::{self, Chirality, KnotReport, DERIVED_NAMES, SLOT_NAMES};
use vassiliev::linalg::{self, Field, Limits};
use vassiliev::tables::{self, RowOutcome, TableRow, CSV_HEADER};
use vassiliev::{skein, BraidWord, InvariantError, LinalgError, SkeinConfig, SkeinEngine, SkeinError, TableError};

const EXIT_MISMATCH: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_RESOURCE: u8 = 3;

#[derive(Parser)]
#[command(name = "vassiliev", version, about = "Finite-type knot invariants and chord-diagram algebras")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Human, global = true)]
    format: Format,
    #[command(flatten)]
    caps: Caps,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Csv,
    JsonLines,
}

#[derive(Args)]
struct Caps {
    /// Largest intermediate diagram the skein recursion accepts.
    #[arg(long, env = "VASSILIEV_SKEIN_CAP", default_value_t = skein::DEFAULT_MAX_CROSSINGS, global = true,
          value_parser = clap::value_parser!(u32).range(1..).map(|v| v as usize))]
    skein_cap: usize,
    /// Largest number of stored nonzeros during elimination.
    #[arg(long, env = "VASSILIEV_MAX_ENTRIES", default_value_t = linalg::DEFAULT_MAX_ENTRIES, global = true,
          value_parser = clap::value_parser!(u64).range(1..).map(|v| v as usize))]
    max_entries: usize,
    /// Largest dense remainder (rows x columns) after sparse elimination.
    #[arg(long, env = "VASSILIEV_MAX_DENSE", default_value_t = linalg::DEFAULT_MAX_DENSE, global = true,
          value_parser = clap::value_parser!(u64).range(1..).map(|v| v as usize))]
    max_dense: usize,
    /// Disable the skein memo table.
    #[arg(long, global = true)]
    no_memo: bool,
}

impl Caps {
    fn skein(&self) -> SkeinConfig {
        SkeinConfig { max_crossings: self.skein_cap, memoize: !self.no_memo }
    }

    fn linalg(&self) -> Limits {
        Limits { max_entries: self.max_entries, max_dense: self.max_dense }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Polynomials, derived vector, invariants, congruences and chirality of a knot.
    Invariants {
        /// Braid word such as "aBaB", or "unknot".
        braid: String,
        /// Knot id used in CSV output.
        #[arg(long, default_value = "-")]
        id: String,
    },
    /// HOMFLYPT, Conway, Jones and Kauffman polynomials of a knot.
    Polys { braid: String },
    /// Recompute the embedded knot table and compare.
    VerifyTables {
        /// Only knots with at most this many crossings.
        #[arg(long)]
        max_crossings: Option<u32>,
        /// Worker threads.
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..).map(|v| v as usize))]
        parallel: usize,
        /// Verify a CSV file in the table schema instead of the embedded table.
        #[arg(long)]
        dataset: Option<PathBuf>,
    },
    /// Graded dimensions of the chord-diagram algebra.
    Chord {
        #[arg(value_enum)]
        ambient: AmbientArg,
        /// Order, or an inclusive range such as 2..6.
        order: String,
        /// Number of strands.
        #[arg(long, default_value_t = 2)]
        strands: usize,
        /// Also compute the dimension over F2.
        #[arg(long)]
        mod2: bool,
        /// Compare ranks over Q and F2 to bound 2-torsion.
        #[arg(long)]
        torsion: bool,
        /// Compute the Smith normal form of the relation matrix.
        #[arg(long)]
        snf: bool,
        /// Write the relation matrix as sparse triplets.
        #[arg(long)]
        export: Option<PathBuf>,
    },
    /// Chirality criterion from the Conway coefficients a2, a4.
    Chirality { braid: String },
}

#[derive(Clone, Copy, ValueEnum)]
enum AmbientArg {
    Circle,
    Strands,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Display) -> Self {
        Failure { code: EXIT_USAGE, message: message.to_string() }
    }
}

impl From<InvariantError> for Failure {
    fn from(e: InvariantError) -> Self {
        let code = match &e {
            InvariantError::NotAKnot { .. } => EXIT_USAGE,
            InvariantError::Skein(SkeinError::ResourceLimit { .. }) => EXIT_RESOURCE,
            _ => EXIT_MISMATCH,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<LinalgError> for Failure {
    fn from(e: LinalgError) -> Self {
        Failure { code: EXIT_RESOURCE, message: e.to_string() }
    }
}

impl From<TableError> for Failure {
    fn from(e: TableError) -> Self {
        Failure { code: EXIT_USAGE, message: e.to_string() }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    match &cli.command {
        Command::Invariants { braid, id } => cmd_invariants(cli, braid, id),
        Command::Polys { braid } => cmd_polys(cli, braid),
        Command::VerifyTables { max_crossings, parallel, dataset } => {
            cmd_verify(cli, *max_crossings, *parallel, dataset.as_ref())
        }
        Command::Chord { ambient, order, strands, mod2, torsion, snf, export } => {
            let ambient = match ambient {
                AmbientArg::Circle => Ambient::Circle,
                AmbientArg::Strands if *strands >= 1 => Ambient::Strands(*strands),
                AmbientArg::Strands => return Err(Failure::usage("--strands must be at least 1")),
            };
            cmd_chord(cli, ambient, order, *mod2, *torsion, *snf, export.as_ref())
        }
        Command::Chirality { braid } => cmd_chirality(cli, braid),
    }
}

fn parse_braid(text: &str) -> Result<BraidWord, Failure> {
    if text.eq_ignore_ascii_case("unknot") {
        return Ok(BraidWord::unknot());
    }
    let b = BraidWord::parse(text).map_err(Failure::usage)?;
    if !b.is_knot() {
        return Err(Failure::usage(format!(
            "braid {text} closes to a {}-component link, not a knot",
            b.closure_components()
        )));
    }
    Ok(b)
}

fn analyze(cli: &Cli, braid: &str) -> Result<(BraidWord, KnotReport), Failure> {
    let b = parse_braid(braid)?;
    let mut engine = SkeinEngine::new(cli.caps.skein());
    let report = invariants::analyze(&b, &mut engine)?;
    Ok((b, report))
}

fn slots_json(v: &invariants::InvariantVector) -> serde_json::Value {
    SLOT_NAMES.iter().zip(v.0).map(|(k, x)| (k.to_string(), json!(x))).collect::<serde_json::Map<_, _>>().into()
}

fn cmd_invariants(cli: &Cli, braid: &str, id: &str) -> Result<u8, Failure> {
    let (b, r) = analyze(cli, braid)?;
    let p = &r.polynomials;
    let a2 = invariants::conway_coefficient(&p.conway, 2);
    let a4 = invariants::conway_coefficient(&p.conway, 4);
    let chirality = invariants::chirality_criterion(a2, a4);
    let congruences = invariants::check_congruences(&r.invariants);
    let det = skein::determinant(&p.conway).map_err(|e| Failure::from(InvariantError::from(e)))?;
    let shown = if b.is_empty() { "unknot".to_string() } else { b.to_string() };
    match cli.format {
        Format::Human => {
            println!("braid        {shown}");
            println!("HOMFLYPT     {}", p.homflypt);
            println!("Conway       {}", p.conway);
            println!("Jones        {}", p.jones);
            println!("Kauffman     {}", p.kauffman);
            println!("derived");
            for (name, x) in DERIVED_NAMES.iter().zip(r.derived.entries()) {
                println!("  {name:<14} {x}");
            }
            let slots: Vec<String> = SLOT_NAMES.iter().zip(r.invariants.0).map(|(k, x)| format!("{k}={x}")).collect();
            println!("invariants   {}", slots.join(" "));
            if congruences.passed() {
                println!("congruences  ok");
            } else {
                println!("congruences  violated: {}", congruences.violated.join(", "));
            }
            println!("chirality    {chirality}");
            println!("determinant  {det}");
        }
        Format::Csv => {
            println!("{CSV_HEADER}");
            println!("{}", tables::csv_line(id, &shown, &r.invariants));
        }
        Format::JsonLines => {
            let derived: Vec<String> = r.derived.entries().iter().map(ToString::to_string).collect();
            let line = json!({
                "knot": id,
                "braid": shown,
                "homflypt": p.homflypt.to_string(),
                "conway": p.conway.to_string(),
                "jones": p.jones.to_string(),
                "kauffman": p.kauffman.to_string(),
                "derived": derived,
                "invariants": slots_json(&r.invariants),
                "congruences_ok": congruences.passed(),
                "violated": congruences.violated,
                "chirality": chirality.to_string(),
                "determinant": det.to_string(),
            });
            println!("{line}");
        }
    }
    Ok(0)
}

fn cmd_polys(cli: &Cli, braid: &str) -> Result<u8, Failure> {
    let b = parse_braid(braid)?;
    let mut engine = SkeinEngine::new(cli.caps.skein());
    let p = invariants::knot_polynomials(&b, &mut engine)?;
    let det = skein::determinant(&p.conway).map_err(|e| Failure::from(InvariantError::from(e)))?;
    match cli.format {
        Format::Human => {
            println!("HOMFLYPT     {}", p.homflypt);
            println!("Conway       {}", p.conway);
            println!("Jones        {}", p.jones);
            println!("Kauffman     {}", p.kauffman);
            println!("determinant  {det}");
        }
        Format::Csv => {
            println!("braid,homflypt,conway,jones,kauffman,determinant");
            println!("{b},{},{},{},{},{det}", p.homflypt, p.conway, p.jones, p.kauffman);
        }
        Format::JsonLines => println!(
            "{}",
            json!({
                "braid": b.to_string(),
                "homflypt": p.homflypt.to_string(),
                "conway": p.conway.to_string(),
                "jones": p.jones.to_string(),
                "kauffman": p.kauffman.to_string(),
                "determinant": det.to_string(),
            })
        ),
    }
    Ok(0)
}

fn cmd_verify(
    cli: &Cli,
    max_crossings: Option<u32>,
    parallel: usize,
    dataset: Option<&PathBuf>,
) -> Result<u8, Failure> {
    let rows: Vec<TableRow> = match dataset {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
            tables::parse_table(&text)?
        }
        None => tables::load_table()?,
    };
    let rows = match max_crossings {
        Some(m) => tables::filter_crossings(&rows, m),
        None => rows,
    };
    let summary = tables::verify_all(&rows, parallel, cli.caps.skein());
    match cli.format {
        Format::Human => println!("{summary}"),
        Format::Csv => {
            println!("{CSV_HEADER},status");
            for (row, o) in rows.iter().zip(&summary.outcomes) {
                match o {
                    RowOutcome::Checked(r) => {
                        let status = if r.passed() { "ok" } else { "mismatch" };
                        println!("{},{status}", tables::csv_line(&r.knot_id, &row.braid_word, &r.computed));
                    }
                    RowOutcome::Failed { knot_id, .. } => println!("{knot_id},{}{},error", row.braid_word, ",".repeat(12)),
                }
            }
        }
        Format::JsonLines => {
            for o in &summary.outcomes {
                let line = match o {
                    RowOutcome::Checked(r) => json!({
                        "knot": r.knot_id,
                        "pass": r.passed(),
                        "computed": slots_json(&r.computed),
                        "mismatches": r.mismatches.iter().map(|m| json!({
                            "slot": m.slot, "expected": m.expected, "computed": m.computed
                        })).collect::<Vec<_>>(),
                        "seconds": r.elapsed.as_secs_f64(),
                    }),
                    RowOutcome::Failed { knot_id, error } => json!({"knot": knot_id, "pass": false, "error": error}),
                };
                println!("{line}");
            }
        }
    }
    if summary.all_passed() {
        Ok(0)
    } else {
        if cli.format != Format::Human {
            eprintln!("{}/{} rows match", summary.passed(), summary.total());
        }
        Ok(EXIT_MISMATCH)
    }
}

fn parse_orders(text: &str) -> Result<Vec<usize>, Failure> {
    let bad = || Failure::usage(format!("invalid order {text:?}; use N or A..B"));
    match text.split_once("..") {
        Some((a, b)) => {
            let a: usize = a.trim().parse().map_err(|_| bad())?;
            let b: usize = b.trim().parse().map_err(|_| bad())?;
            if a > b {
                return Err(bad());
            }
            Ok((a..=b).collect())
        }
        None => Ok(vec![text.trim().parse().map_err(|_| bad())?]),
    }
}

fn cmd_chord(
    cli: &Cli,
    ambient: Ambient,
    order: &str,
    mod2: bool,
    torsion: bool,
    snf: bool,
    export: Option<&PathBuf>,
) -> Result<u8, Failure> {
    let orders = parse_orders(order)?;
    if export.is_some() && orders.len() != 1 {
        return Err(Failure::usage("--export needs a single order"));
    }
    let limits = cli.caps.linalg();
    if cli.format == Format::Csv {
        println!("ambient,order,diagrams,relations,dim_q,dim_f2,torsion_lower_bound,smith_torsion");
    }
    for n in orders {
        let rel = RelationMatrix::build(ambient, n);
        if let Some(path) = export {
            std::fs::write(path, rel.triplet_text())
                .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))?;
        }
        let diagrams = rel.diagrams.len();
        let rank_q = linalg::rank_with_limits(&rel.matrix, Field::Rationals, limits)?;
        let dim_q = diagrams - rank_q;
        let report = if torsion { Some(chordalg::detect_2_torsion_in(&rel, limits)?) } else { None };
        let dim_f2 = match &report {
            Some(r) => Some(r.dim_f2),
            None if mod2 => Some(diagrams - linalg::rank_with_limits(&rel.matrix, Field::GF2, limits)?),
            None => None,
        };
        let smith = if snf { Some(linalg::smith_normal_form_with_limits(&rel.matrix, limits)?) } else { None };
        let smith_text = smith.as_ref().map(|s| {
            let t: Vec<String> = s.torsion.iter().map(ToString::to_string).collect();
            format!("[{}]", t.join(" "))
        });
        match cli.format {
            Format::Human => {
                println!(
                    "{ambient} order {n}: {diagrams} diagrams, {} relations ({} 1T, {} 4T)",
                    rel.matrix.nrows(),
                    rel.count(RelationKind::OneTerm),
                    rel.count(RelationKind::FourTerm)
                );
                println!("  dim over Q   {dim_q}");
                if let Some(d) = dim_f2 {
                    println!("  dim over F2  {d}");
                }
                if let Some(r) = &report {
                    if r.has_torsion() {
                        println!("  2-torsion detected, >= {} factor{}", r.lower_bound(), if r.lower_bound() == 1 { "" } else { "s" });
                    } else {
                        println!("  no 2-torsion detected");
                    }
                }
                if let (Some(s), Some(t)) = (&smith, &smith_text) {
                    println!("  Smith form   {} unit factors, nontrivial {t}", s.ones);
                }
            }
            Format::Csv => println!(
                "{},{n},{diagrams},{},{dim_q},{},{},{}",
                match ambient {
                    Ambient::Circle => "circle".to_string(),
                    Ambient::Strands(k) => format!("strands{k}"),
                },
                rel.matrix.nrows(),
                dim_f2.map(|d| d.to_string()).unwrap_or_default(),
                report.as_ref().map(|r| r.lower_bound().to_string()).unwrap_or_default(),
                smith_text.clone().unwrap_or_default(),
            ),
            Format::JsonLines => println!(
                "{}",
                json!({
                    "ambient": ambient.to_string(),
                    "order": n,
                    "diagrams": diagrams,
                    "relations": rel.matrix.nrows(),
                    "dim_q": dim_q,
                    "dim_f2": dim_f2,
                    "torsion_lower_bound": report.as_ref().map(|r| r.lower_bound()),
                    "smith_torsion": smith.as_ref().map(|s| s.torsion.iter().map(ToString::to_string).collect::<Vec<_>>()),
                })
            ),
        }
    }
    Ok(0)
}

fn cmd_chirality(cli: &Cli, braid: &str) -> Result<u8, Failure> {
    let b = parse_braid(braid)?;
    let mut engine = SkeinEngine::new(cli.caps.skein());
    let p = invariants::knot_polynomials(&b, &mut engine)?;
    let a2 = invariants::conway_coefficient(&p.conway, 2);
    let a4 = invariants::conway_coefficient(&p.conway, 4);
    let verdict = invariants::chirality_criterion(a2, a4);
    let shown = if b.is_empty() { "unknot".to_string() } else { b.to_string() };
    match cli.format {
        Format::Human => {
            println!("a2 = {a2}, a4 = {a4}, (a2 + a2^2)/2 + a4 = {}", (a2 + a2 * a2) / 2 + a4);
            match verdict {
                Chirality::Chiral => println!("chiral"),
                Chirality::Inconclusive => println!("inconclusive"),
            }
        }
        Format::Csv => {
            println!("braid,a2,a4,verdict");
            println!("{shown},{a2},{a4},{verdict}");
        }
        Format::JsonLines => println!("{}", json!({"braid": shown, "a2": a2, "a4": a4, "verdict": verdict.to_string()})),
    }
    Ok(0)
}

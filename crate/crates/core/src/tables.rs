//! The embedded knot table and verification of the invariant pipeline
//! against it.

use std::fmt;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::braid::BraidWord;
use crate::error::TableError;
use crate::invariants::{self, InvariantVector, SLOT_NAMES};
use crate::skein::{SkeinConfig, SkeinEngine};

pub const CSV_HEADER: &str = "knot,braid,v2,v3,v4a,v4b,v5a,v5b,v5c,v6a,v6b,v6c,v6d,v6e";

const DATASET: &str = include_str!("../data/knot_table.csv");
const DATASET_SHA256: &str = "a45d957753b67be379a53d1d5547cd680dc7581b4d8eb0479105ac708605ecce";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableRow {
    /// Zero-padded "CC.NNN".
    pub knot_id: String,
    pub braid_word: String,
    pub expected: InvariantVector,
}

impl TableRow {
    pub fn crossing_number(&self) -> u32 {
        self.knot_id.split('.').next().and_then(|c| c.parse().ok()).unwrap_or(0)
    }

    pub fn braid(&self) -> BraidWord {
        BraidWord::parse(&self.braid_word).expect("table braid words are validated on load")
    }

    pub fn to_csv(&self) -> String {
        csv_line(&self.knot_id, &self.braid_word, &self.expected)
    }
}

/// One line in the table schema.
pub fn csv_line(knot_id: &str, braid: &str, v: &InvariantVector) -> String {
    let mut s = format!("{knot_id},{braid}");
    for x in v.0 {
        s.push_str(&format!(",{x}"));
    }
    s
}

pub fn dataset_text() -> &'static str {
    DATASET
}

pub fn sha256_hex(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

/// The embedded table, after checking its content hash.
pub fn load_table() -> Result<Vec<TableRow>, TableError> {
    let got = sha256_hex(DATASET);
    if got != DATASET_SHA256 {
        return Err(TableError::Checksum { expected: DATASET_SHA256.to_string(), got });
    }
    parse_table(DATASET)
}

/// Parse CSV text in the table schema. Braid words must parse and the
/// expected vectors must satisfy the mod-2 congruences.
pub fn parse_table(text: &str) -> Result<Vec<TableRow>, TableError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == CSV_HEADER => {}
        _ => return Err(TableError::Corrupt { line: 1, detail: "missing or wrong header".into() }),
    }
    let mut rows = Vec::new();
    for (i, line) in lines {
        let line_no = i + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let corrupt = |detail: String| TableError::Corrupt { line: line_no, detail };
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 14 {
            return Err(corrupt(format!("expected 14 fields, found {}", fields.len())));
        }
        let braid = BraidWord::parse(fields[1]).map_err(|e| corrupt(e.to_string()))?;
        if !braid.is_knot() {
            return Err(corrupt(format!("braid {} does not close to a knot", fields[1])));
        }
        let mut v = [0i64; 12];
        for (k, f) in fields[2..].iter().enumerate() {
            v[k] = f.parse().map_err(|_| corrupt(format!("bad integer {f:?} for {}", SLOT_NAMES[k])))?;
        }
        let expected = InvariantVector(v);
        if let Some(c) = invariants::check_congruences(&expected).violated.first() {
            return Err(corrupt(format!("row violates {c}")));
        }
        rows.push(TableRow { knot_id: fields[0].to_string(), braid_word: fields[1].to_string(), expected });
    }
    Ok(rows)
}

/// Rows of at most `max` crossings, in table order.
pub fn filter_crossings(rows: &[TableRow], max: u32) -> Vec<TableRow> {
    rows.iter().filter(|r| r.crossing_number() <= max).cloned().collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlotMismatch {
    pub slot: &'static str,
    pub expected: i64,
    pub computed: i64,
}

#[derive(Clone, Debug)]
pub struct RowReport {
    pub knot_id: String,
    pub computed: InvariantVector,
    pub mismatches: Vec<SlotMismatch>,
    pub elapsed: Duration,
}

impl RowReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

pub fn verify_row(row: &TableRow, engine: &mut SkeinEngine) -> Result<RowReport, TableError> {
    let start = Instant::now();
    let computed = invariants::invariants_of(&row.braid(), engine)
        .map_err(|source| TableError::Pipeline { knot: row.knot_id.clone(), source })?;
    let mismatches = (0..12)
        .filter(|&i| computed.0[i] != row.expected.0[i])
        .map(|i| SlotMismatch { slot: SLOT_NAMES[i], expected: row.expected.0[i], computed: computed.0[i] })
        .collect();
    Ok(RowReport { knot_id: row.knot_id.clone(), computed, mismatches, elapsed: start.elapsed() })
}

#[derive(Clone, Debug)]
pub enum RowOutcome {
    Checked(RowReport),
    Failed { knot_id: String, error: String },
}

impl RowOutcome {
    pub fn passed(&self) -> bool {
        matches!(self, RowOutcome::Checked(r) if r.passed())
    }

    pub fn knot_id(&self) -> &str {
        match self {
            RowOutcome::Checked(r) => &r.knot_id,
            RowOutcome::Failed { knot_id, .. } => knot_id,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Summary {
    /// One outcome per input row, in input order.
    pub outcomes: Vec<RowOutcome>,
    pub wall: Duration,
}

impl Summary {
    pub fn total(&self) -> usize {
        self.outcomes.len()
    }

    pub fn passed(&self) -> usize {
        self.outcomes.iter().filter(|o| o.passed()).count()
    }

    pub fn all_passed(&self) -> bool {
        self.passed() == self.total()
    }

    pub fn failures(&self) -> impl Iterator<Item = &RowOutcome> {
        self.outcomes.iter().filter(|o| !o.passed())
    }

    /// The `n` slowest checked rows, slowest first.
    pub fn slowest(&self, n: usize) -> Vec<(&str, Duration)> {
        let mut v: Vec<(&str, Duration)> = self
            .outcomes
            .iter()
            .filter_map(|o| match o {
                RowOutcome::Checked(r) => Some((r.knot_id.as_str(), r.elapsed)),
                RowOutcome::Failed { .. } => None,
            })
            .collect();
        v.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
        v.truncate(n);
        v
    }
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}/{} rows match ({:.2?} wall)", self.passed(), self.total(), self.wall)?;
        for o in self.failures() {
            match o {
                RowOutcome::Checked(r) => {
                    let slots: Vec<String> = r
                        .mismatches
                        .iter()
                        .map(|m| format!("{} expected {} got {}", m.slot, m.expected, m.computed))
                        .collect();
                    writeln!(f, "MISMATCH {}: {}", r.knot_id, slots.join(", "))?;
                }
                RowOutcome::Failed { knot_id, error } => writeln!(f, "ERROR {knot_id}: {error}")?,
            }
        }
        let slow: Vec<String> = self.slowest(5).iter().map(|(id, d)| format!("{id} {d:.2?}")).collect();
        if !slow.is_empty() {
            write!(f, "slowest: {}", slow.join(", "))?;
        }
        Ok(())
    }
}

/// Verify every row on `parallel` worker threads (at least one). Each
/// worker owns its skein engine; the verdicts do not depend on `parallel`.
pub fn verify_all(rows: &[TableRow], parallel: usize, config: SkeinConfig) -> Summary {
    let start = Instant::now();
    let check = |engine: &mut SkeinEngine, row: &TableRow| match verify_row(row, engine) {
        Ok(r) => RowOutcome::Checked(r),
        Err(e) => RowOutcome::Failed { knot_id: row.knot_id.clone(), error: e.to_string() },
    };
    let outcomes = if parallel <= 1 {
        let mut engine = SkeinEngine::new(config);
        rows.iter().map(|r| check(&mut engine, r)).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(parallel).build().expect("thread pool");
        pool.install(|| rows.par_iter().map_init(|| SkeinEngine::new(config), check).collect())
    };
    Summary { outcomes, wall: start.elapsed() }
}

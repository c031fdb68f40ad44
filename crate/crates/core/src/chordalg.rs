//! Chord diagrams on a circle or on `k` ordered strands, their 1T and 4T
//! relations, and the graded pieces `A_n` over ℚ and 𝔽₂.
//!
//! A diagram of order `n` is stored as a perfect matching on `2n` endpoints
//! listed in order along the ambient: strand 1 bottom to top, then strand 2,
//! and so on (one strand for the circle, read from a base point).

use std::collections::{HashMap, HashSet};
use std::fmt;

use rayon::prelude::*;

use crate::error::LinalgError;
use crate::linalg::{self, Field, Limits, SmithForm, SparseMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ambient {
    Circle,
    Strands(usize),
}

impl Ambient {
    fn strand_count(self) -> usize {
        match self {
            Ambient::Circle => 1,
            Ambient::Strands(k) => k,
        }
    }
}

impl fmt::Display for Ambient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ambient::Circle => write!(f, "circle"),
            Ambient::Strands(k) => write!(f, "{k} strands"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChordDiagram {
    ambient: Ambient,
    /// Endpoints per strand.
    counts: Vec<u8>,
    /// `partner[i]` is the other end of the chord at endpoint `i`.
    partner: Vec<u8>,
}

impl ChordDiagram {
    /// Build from a sequence of chord labels along the ambient, split into
    /// strands by `counts`. Each label must occur exactly twice.
    pub fn from_sequence(ambient: Ambient, counts: &[usize], labels: &[usize]) -> Option<Self> {
        if counts.len() != ambient.strand_count() || counts.iter().sum::<usize>() != labels.len() {
            return None;
        }
        let mut first: HashMap<usize, usize> = HashMap::new();
        let mut partner = vec![u8::MAX; labels.len()];
        for (i, &l) in labels.iter().enumerate() {
            match first.remove(&l) {
                Some(j) => {
                    partner[i] = j as u8;
                    partner[j] = i as u8;
                }
                None => {
                    first.insert(l, i);
                }
            }
        }
        if !first.is_empty() || partner.contains(&u8::MAX) {
            return None;
        }
        Some(Self::canonical(ambient, counts.iter().map(|&c| c as u8).collect(), partner))
    }

    fn canonical(ambient: Ambient, counts: Vec<u8>, partner: Vec<u8>) -> Self {
        let partner = match ambient {
            Ambient::Strands(_) => partner,
            Ambient::Circle => min_rotation(&partner),
        };
        ChordDiagram { ambient, counts, partner }
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    pub fn order(&self) -> usize {
        self.partner.len() / 2
    }

    pub fn strand_counts(&self) -> Vec<usize> {
        self.counts.iter().map(|&c| c as usize).collect()
    }

    pub fn partner(&self, i: usize) -> usize {
        self.partner[i] as usize
    }

    fn strand_of(&self, i: usize) -> usize {
        let mut acc = 0;
        for (s, &c) in self.counts.iter().enumerate() {
            acc += c as usize;
            if i < acc {
                return s;
            }
        }
        unreachable!("endpoint out of range")
    }

    /// Chord labels along the ambient, numbered by first appearance.
    pub fn labels(&self) -> Vec<usize> {
        let mut label = vec![usize::MAX; self.partner.len()];
        let mut next = 0;
        for i in 0..self.partner.len() {
            if label[i] == usize::MAX {
                label[i] = next;
                label[self.partner(i)] = next;
                next += 1;
            }
        }
        label
    }

    /// Some chord has its two ends next to each other with nothing between.
    pub fn has_isolated_chord(&self) -> bool {
        let m = self.partner.len();
        match self.ambient {
            Ambient::Circle => (0..m).any(|i| self.partner(i) == (i + 1) % m),
            Ambient::Strands(_) => {
                (0..m.saturating_sub(1)).any(|i| self.partner(i) == i + 1 && self.strand_of(i) == self.strand_of(i + 1))
            }
        }
    }
}

impl fmt::Display for ChordDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels = self.labels();
        let mut i = 0;
        for (s, &c) in self.counts.iter().enumerate() {
            if s > 0 {
                write!(f, "|")?;
            }
            for _ in 0..c {
                let l = labels[i];
                let ch = if l < 26 { (b'a' + l as u8) as char } else { '?' };
                write!(f, "{ch}")?;
                i += 1;
            }
        }
        if self.partner.is_empty() && self.ambient == Ambient::Circle {
            write!(f, "()")?;
        }
        Ok(())
    }
}

fn rotate(partner: &[u8], r: usize) -> Vec<u8> {
    let m = partner.len();
    let mut out = vec![0u8; m];
    for (i, &p) in partner.iter().enumerate() {
        out[(i + r) % m] = ((p as usize + r) % m) as u8;
    }
    out
}

fn min_rotation(partner: &[u8]) -> Vec<u8> {
    (0..partner.len().max(1)).map(|r| rotate(partner, r)).min().unwrap_or_default()
}

/// All perfect matchings of `m` points, as partner arrays.
fn matchings(m: usize) -> Vec<Vec<u8>> {
    fn go(partner: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        let Some(i) = partner.iter().position(|&p| p == u8::MAX) else {
            out.push(partner.clone());
            return;
        };
        for j in i + 1..partner.len() {
            if partner[j] == u8::MAX {
                partner[i] = j as u8;
                partner[j] = i as u8;
                go(partner, out);
                partner[i] = u8::MAX;
                partner[j] = u8::MAX;
            }
        }
    }
    let mut out = Vec::new();
    if m.is_multiple_of(2) {
        go(&mut vec![u8::MAX; m], &mut out);
    }
    out
}

fn compositions(total: usize, parts: usize) -> Vec<Vec<u8>> {
    if parts == 1 {
        return vec![vec![total as u8]];
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first as u8);
            out.push(rest);
        }
    }
    out
}

/// Every canonical diagram of order `n`, sorted.
pub fn enumerate_diagrams(ambient: Ambient, n: usize) -> Vec<ChordDiagram> {
    let k = ambient.strand_count();
    assert!(k >= 1, "need at least one strand");
    let mut out: Vec<ChordDiagram> = match ambient {
        Ambient::Circle => {
            let set: HashSet<ChordDiagram> = matchings(2 * n)
                .into_iter()
                .map(|p| ChordDiagram::canonical(ambient, vec![2 * n as u8], p))
                .collect();
            set.into_iter().collect()
        }
        Ambient::Strands(_) => {
            let ms = matchings(2 * n);
            compositions(2 * n, k)
                .into_iter()
                .flat_map(|counts: Vec<u8>| {
                    ms.iter().map(move |p| ChordDiagram { ambient, counts: counts.clone(), partner: p.clone() })
                })
                .collect()
        }
    };
    out.sort();
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RelationKind {
    OneTerm,
    FourTerm,
}

/// Relations of one order: columns are the enumerated diagrams.
#[derive(Clone, Debug)]
pub struct RelationMatrix {
    pub ambient: Ambient,
    pub order: usize,
    pub diagrams: Vec<ChordDiagram>,
    pub matrix: SparseMatrix,
    pub kinds: Vec<RelationKind>,
}

impl RelationMatrix {
    pub fn build(ambient: Ambient, n: usize) -> Self {
        let diagrams = enumerate_diagrams(ambient, n);
        let index: HashMap<ChordDiagram, usize> = diagrams.iter().cloned().enumerate().map(|(i, d)| (d, i)).collect();
        let mut matrix = SparseMatrix::new(diagrams.len());
        let mut kinds = Vec::new();
        for row in generate_1t(&diagrams) {
            matrix.push_row(row);
            kinds.push(RelationKind::OneTerm);
        }
        for row in generate_4t(&diagrams, &index) {
            matrix.push_row(row);
            kinds.push(RelationKind::FourTerm);
        }
        RelationMatrix { ambient, order: n, diagrams, matrix, kinds }
    }

    pub fn count(&self, kind: RelationKind) -> usize {
        self.kinds.iter().filter(|&&k| k == kind).count()
    }

    /// Sparse triplet text: a `rows cols nnz` header, then one
    /// `row col value` line per nonzero (0-based).
    pub fn triplet_text(&self) -> String {
        let t = self.matrix.triplets();
        let mut s = format!("{} {} {}\n", self.matrix.nrows(), self.matrix.ncols(), t.len());
        for (r, c, v) in t {
            s.push_str(&format!("{r} {c} {v}\n"));
        }
        s
    }
}

/// One row `[(column, 1)]` per diagram with an isolated chord.
pub fn generate_1t(diagrams: &[ChordDiagram]) -> Vec<Vec<(usize, i64)>> {
    diagrams
        .iter()
        .enumerate()
        .filter(|(_, d)| d.has_isolated_chord())
        .map(|(i, _)| vec![(i, 1)])
        .collect()
}

/// Four-term relations, deduplicated and sign-normalised.
///
/// Remove one end `e` of a chord `b`, keeping its other end fixed, and pick
/// another chord `a` with ends `p`, `q`. Re-inserting the loose end just
/// after or just before each end of `a` gives
/// `D(p+) - D(p-) + D(q+) - D(q-) = 0`.
pub fn generate_4t(diagrams: &[ChordDiagram], index: &HashMap<ChordDiagram, usize>) -> Vec<Vec<(usize, i64)>> {
    let rows: HashSet<Vec<(usize, i64)>> = diagrams
        .par_iter()
        .flat_map_iter(|d| four_term_rows(d, index))
        .collect();
    let mut rows: Vec<_> = rows.into_iter().collect();
    rows.sort();
    rows
}

fn four_term_rows(d: &ChordDiagram, index: &HashMap<ChordDiagram, usize>) -> Vec<Vec<(usize, i64)>> {
    let labels = d.labels();
    let n = d.order();
    let m = labels.len();
    let strand: Vec<usize> = (0..m).map(|i| d.strand_of(i)).collect();
    let mut out = Vec::new();
    for e in 0..m {
        let b = labels[e];
        // sequence with e removed, remembering each endpoint's strand
        let mut seq: Vec<(usize, usize)> = (0..m).filter(|&i| i != e).map(|i| (labels[i], strand[i])).collect();
        for a in (0..n).filter(|&a| a != b) {
            let mut terms: HashMap<usize, i64> = HashMap::new();
            let ends: Vec<usize> = seq.iter().enumerate().filter(|(_, x)| x.0 == a).map(|(i, _)| i).collect();
            for &p in &ends {
                let s = seq[p].1;
                for (at, sign) in [(p + 1, 1i64), (p, -1i64)] {
                    seq.insert(at, (b, s));
                    let col = lookup(d.ambient, &seq, index);
                    seq.remove(at);
                    *terms.entry(col).or_insert(0) += sign;
                }
            }
            let mut row: Vec<(usize, i64)> = terms.into_iter().filter(|e| e.1 != 0).collect();
            if row.is_empty() {
                continue;
            }
            row.sort_unstable();
            if row[0].1 < 0 {
                row.iter_mut().for_each(|e| e.1 = -e.1);
            }
            out.push(row);
        }
        seq.clear();
    }
    out
}

fn lookup(ambient: Ambient, seq: &[(usize, usize)], index: &HashMap<ChordDiagram, usize>) -> usize {
    let mut counts = vec![0usize; ambient.strand_count()];
    for &(_, s) in seq {
        counts[s] += 1;
    }
    let labels: Vec<usize> = seq.iter().map(|x| x.0).collect();
    let d = ChordDiagram::from_sequence(ambient, &counts, &labels).expect("valid relation diagram");
    index[&d]
}

/// Dimension of `A_n` over `field`: diagrams minus the rank of the relations.
pub fn graded_dimension(ambient: Ambient, n: usize, field: Field) -> Result<usize, LinalgError> {
    let rel = RelationMatrix::build(ambient, n);
    Ok(rel.diagrams.len() - linalg::rank(&rel.matrix, field)?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionReport {
    pub ambient: Ambient,
    pub order: usize,
    pub diagrams: usize,
    pub relations: usize,
    pub rank_q: usize,
    pub rank_f2: usize,
    pub dim_q: usize,
    pub dim_f2: usize,
}

impl TorsionReport {
    /// Lower bound on the number of ℤ/2-divisible torsion factors.
    pub fn lower_bound(&self) -> usize {
        self.dim_f2 - self.dim_q
    }

    pub fn has_torsion(&self) -> bool {
        self.lower_bound() > 0
    }
}

/// Compare exact ranks of the relation matrix over ℚ and 𝔽₂.
pub fn detect_2_torsion(ambient: Ambient, n: usize) -> Result<TorsionReport, LinalgError> {
    detect_2_torsion_in(&RelationMatrix::build(ambient, n), Limits::default())
}

pub fn detect_2_torsion_in(rel: &RelationMatrix, limits: Limits) -> Result<TorsionReport, LinalgError> {
    let rank_q = linalg::rank_with_limits(&rel.matrix, Field::Rationals, limits)?;
    let rank_f2 = linalg::rank_with_limits(&rel.matrix, Field::GF2, limits)?;
    let d = rel.diagrams.len();
    Ok(TorsionReport {
        ambient: rel.ambient,
        order: rel.order,
        diagrams: d,
        relations: rel.matrix.nrows(),
        rank_q,
        rank_f2,
        dim_q: d - rank_q,
        dim_f2: d - rank_f2,
    })
}

pub fn relation_smith_form(ambient: Ambient, n: usize) -> Result<SmithForm, LinalgError> {
    linalg::smith_normal_form(&RelationMatrix::build(ambient, n).matrix)
}

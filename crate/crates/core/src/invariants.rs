//! Primitive finite-type invariants of order ≤ 6 from knot polynomials.
//!
//! The tabulated basis `v2 … v6e` is tied to polynomial invariants through
//! two fixed 18×10 change-of-basis matrices: if `x` is the row vector
//! `[v2, v3, v4a, v4b, v2², v5a, v5b, v5c, v2v3, v6a … v6e, v2³, v3², v2v4a,
//! v2v4b]` then `x · [M1 | M2]` equals the 20 polynomial-derived numbers of
//! [`PolyDerivedVector`]. Solving that system recovers the invariants.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::braid::BraidWord;
use crate::error::{InvariantError, PolyError};
use crate::linalg::dense;
use crate::poly::{LaurentPoly, Vars};
use crate::skein::{self, SkeinEngine};

pub const SLOT_NAMES: [&str; 12] = ["v2", "v3", "v4a", "v4b", "v5a", "v5b", "v5c", "v6a", "v6b", "v6c", "v6d", "v6e"];

/// Row labels of M1 and M2.
pub const BASIS_ROWS: [&str; 18] = [
    "v2", "v3", "v4a", "v4b", "v2^2", "v5a", "v5b", "v5c", "v2v3", "v6a", "v6b", "v6c", "v6d", "v6e", "v2^3",
    "v3^2", "v2v4a", "v2v4b",
];

/// Positions of the twelve primitive invariants among [`BASIS_ROWS`].
const PRIMITIVE_ROWS: [usize; 12] = [0, 1, 2, 3, 5, 6, 7, 9, 10, 11, 12, 13];

pub const DERIVED_NAMES: [&str; 20] = [
    "a2", "a4", "P0'''/24", "P0''''/24", "a2^3", "a2*a4", "a2*P0''''/24", "(P0'''/24)^2", "V^(5)/5!", "V^(6)/6!",
    "P0^(6)/6!", "P2^(4)/4!", "P4''/2", "a6", "F0^(6)/6!", "F1^(5)/5!", "F2^(4)/4!", "F3'''/3!", "F4''/2", "F5'",
];

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct InvariantVector(pub [i64; 12]);

impl InvariantVector {
    pub fn get(&self, name: &str) -> Option<i64> {
        SLOT_NAMES.iter().position(|&n| n == name).map(|i| self.0[i])
    }

    pub fn v2(&self) -> i64 {
        self.0[0]
    }
    pub fn v3(&self) -> i64 {
        self.0[1]
    }
    pub fn v4a(&self) -> i64 {
        self.0[2]
    }

    /// Order of the invariant in slot `i`.
    pub fn slot_order(i: usize) -> u32 {
        match i {
            0 => 2,
            1 => 3,
            2 | 3 => 4,
            4..=6 => 5,
            _ => 6,
        }
    }
}

impl fmt::Display for InvariantVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// The twenty polynomial-derived quantities, in the column order of
/// `[M1 | M2]` (names in [`DERIVED_NAMES`]).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyDerivedVector([BigRational; 20]);

impl PolyDerivedVector {
    /// Validates that entries 5–8 are the products they stand for.
    pub fn from_entries(entries: [BigRational; 20]) -> Result<Self, InvariantError> {
        let e = &entries;
        let expected = [
            (4, &(&e[0] * &e[0]) * &e[0]),
            (5, &e[0] * &e[1]),
            (6, &e[0] * &e[3]),
            (7, &e[2] * &e[2]),
        ];
        for (i, want) in expected {
            if e[i] != want {
                return Err(InvariantError::Redundancy {
                    entry: i + 1,
                    detail: format!("{} is {} but should be {}", DERIVED_NAMES[i], e[i], want),
                });
            }
        }
        Ok(PolyDerivedVector(entries))
    }

    pub fn entries(&self) -> &[BigRational; 20] {
        &self.0
    }
}

fn rat(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

/// n-th derivative at 1 of a one-variable Laurent polynomial.
pub fn derivative_at_one(p: &LaurentPoly, n: u32) -> BigRational {
    rat(p.falling_moment(n))
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

fn scaled_derivative(p: &LaurentPoly, n: u32, denom: u32) -> BigRational {
    derivative_at_one(p, n) / rat(denom)
}

/// The four polynomials of a knot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KnotPolynomials {
    pub homflypt: LaurentPoly,
    pub conway: LaurentPoly,
    pub jones: LaurentPoly,
    pub kauffman: LaurentPoly,
}

pub fn knot_polynomials(b: &BraidWord, engine: &mut SkeinEngine) -> Result<KnotPolynomials, InvariantError> {
    let components = b.closure_components();
    if components != 1 {
        return Err(InvariantError::NotAKnot { components });
    }
    let d = b.closure();
    let homflypt = engine.homflypt(&d)?;
    let conway = skein::conway(&homflypt)?;
    let jones = skein::jones(&homflypt)?;
    let kauffman = engine.kauffman(&d)?;
    Ok(KnotPolynomials { homflypt, conway, jones, kauffman })
}

pub fn derived_vector(
    homflypt: &LaurentPoly,
    jones: &LaurentPoly,
    kauffman: &LaurentPoly,
    conway: &LaurentPoly,
) -> Result<PolyDerivedVector, InvariantError> {
    let a = |k: i32| rat(conway.coeff(0, k));
    let (a2, a4, a6) = (a(2), a(4), a(6));
    let p = |k: i32| homflypt.z_coefficient(k);
    let twisted = kauffman_twist(kauffman)?;
    let f = |k: i32| twisted.z_coefficient(k);
    let (p0, p2, p4) = (p(0)?, p(2)?, p(4)?);
    let p0_3 = scaled_derivative(&p0, 3, 24);
    let p0_4 = scaled_derivative(&p0, 4, 24);
    let d = |poly: &LaurentPoly, n: u32| derivative_at_one(poly, n) / rat(factorial(n));
    let entries = [
        a2.clone(),
        a4.clone(),
        p0_3.clone(),
        p0_4.clone(),
        &(&a2 * &a2) * &a2,
        &a2 * &a4,
        &a2 * &p0_4,
        &p0_3 * &p0_3,
        d(jones, 5),
        d(jones, 6),
        d(&p0, 6),
        d(&p2, 4),
        d(&p4, 2),
        a6,
        d(&f(0)?, 6),
        d(&f(1)?, 5),
        d(&f(2)?, 4),
        d(&f(3)?, 3),
        d(&f(4)?, 2),
        d(&f(5)?, 1),
    ];
    PolyDerivedVector::from_entries(entries)
}

/// The Kauffman polynomial in the sign convention the basis matrices were
/// built with: the coefficient of `a^k z^j` is multiplied by
/// `(-1)^((k+j)/2 + 1)`, i.e. `-F(ia, iz)`.
pub fn kauffman_twist(f: &LaurentPoly) -> Result<LaurentPoly, PolyError> {
    if f.vars() != Vars::AZ {
        return Err(PolyError::WrongVariables { expected: "a,z", got: f.vars().label() });
    }
    let mut terms = Vec::with_capacity(f.len());
    for (&(k, j), c) in f.terms() {
        if (k + j) % 2 != 0 {
            return Err(PolyError::OddPower(j));
        }
        let sign = if ((k + j) / 2 + 1).rem_euclid(2) == 0 { c.clone() } else { -c };
        terms.push(((k, j), sign));
    }
    Ok(LaurentPoly::from_terms(Vars::AZ, terms))
}

/// M1 and M2 as exact rationals, 18 rows each.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisMatrices {
    pub m1: Vec<Vec<BigRational>>,
    pub m2: Vec<Vec<BigRational>>,
}

const MATRIX_DATA: &str = include_str!("../data/basis_matrices.txt");

fn parse_rational(s: &str) -> BigRational {
    match s.split_once('/') {
        Some((n, d)) => BigRational::new(n.parse().expect("numerator"), d.parse().expect("denominator")),
        None => rat(s.parse::<BigInt>().expect("integer")),
    }
}

impl BasisMatrices {
    fn parse(text: &str) -> Self {
        let mut m1 = Vec::new();
        let mut m2 = Vec::new();
        let mut current: Option<&mut Vec<Vec<BigRational>>> = None;
        for line in text.lines().map(str::trim) {
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            match line {
                "[M1]" => current = Some(&mut m1),
                "[M2]" => current = Some(&mut m2),
                _ => current
                    .as_deref_mut()
                    .expect("matrix section header")
                    .push(line.split_whitespace().map(parse_rational).collect()),
            }
        }
        assert!(m1.len() == 18 && m2.len() == 18, "basis matrices must have 18 rows");
        assert!(m1.iter().chain(&m2).all(|r| r.len() == 10), "basis matrices must have 10 columns");
        BasisMatrices { m1, m2 }
    }

    pub fn get() -> &'static BasisMatrices {
        static CELL: OnceLock<BasisMatrices> = OnceLock::new();
        CELL.get_or_init(|| BasisMatrices::parse(MATRIX_DATA))
    }

    /// `[M1 | M2]`, 18×20.
    pub fn stacked(&self) -> Vec<Vec<BigRational>> {
        self.m1.iter().zip(&self.m2).map(|(a, b)| a.iter().chain(b).cloned().collect()).collect()
    }

    /// Rank of `[M1 | M2]` over Q by fraction-free elimination on a common
    /// integer scaling of the rows.
    pub fn rank(&self) -> usize {
        let rows: Vec<Vec<BigInt>> = self
            .stacked()
            .into_iter()
            .map(|row| {
                let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                row.iter().map(|x| (x * rat(l.clone())).to_integer()).collect()
            })
            .collect();
        dense::bareiss_rank(rows)
    }
}

/// Solve `x · [M1 | M2] = rhs` exactly and return the twelve primitive
/// slots, after checking integrality and the product constraints.
pub fn solve_invariants(rhs: &PolyDerivedVector) -> Result<InvariantVector, InvariantError> {
    let stacked = BasisMatrices::get().stacked();
    // transpose: 20 equations in 18 unknowns
    let system: Vec<Vec<BigRational>> = (0..20).map(|j| (0..18).map(|i| stacked[i][j].clone()).collect()).collect();
    let x = match dense::solve_rational(system, rhs.entries().to_vec()) {
        dense::Solution::Unique(x) => x,
        dense::Solution::Inconsistent { row } => return Err(InvariantError::Inconsistent { column: row + 1 }),
        dense::Solution::Underdetermined { rank } => return Err(InvariantError::RankDeficient(rank)),
    };
    let mut slots = [0i64; 12];
    for (k, &row) in PRIMITIVE_ROWS.iter().enumerate() {
        let v = &x[row];
        if !v.is_integer() {
            return Err(InvariantError::NonInteger { slot: SLOT_NAMES[k], value: v.to_string() });
        }
        slots[k] = v.to_integer().to_i64().ok_or(InvariantError::NonInteger {
            slot: SLOT_NAMES[k],
            value: v.to_string(),
        })?;
    }
    let checks: [(&'static str, usize, BigRational); 6] = [
        ("v2^2 = v2*v2", 4, &x[0] * &x[0]),
        ("v2v3 = v2*v3", 8, &x[0] * &x[1]),
        ("v2^3 = v2*v2*v2", 14, &(&x[0] * &x[0]) * &x[0]),
        ("v3^2 = v3*v3", 15, &x[1] * &x[1]),
        ("v2v4a = v2*v4a", 16, &x[0] * &x[2]),
        ("v2v4b = v2*v4b", 17, &x[0] * &x[3]),
    ];
    for (constraint, row, want) in checks {
        if x[row] != want {
            return Err(InvariantError::Nonlinear { constraint });
        }
    }
    Ok(InvariantVector(slots))
}

/// Everything the pipeline computes for one knot.
#[derive(Clone, Debug)]
pub struct KnotReport {
    pub polynomials: KnotPolynomials,
    pub derived: PolyDerivedVector,
    pub invariants: InvariantVector,
}

pub fn analyze(b: &BraidWord, engine: &mut SkeinEngine) -> Result<KnotReport, InvariantError> {
    let polynomials = knot_polynomials(b, engine)?;
    let derived = derived_vector(&polynomials.homflypt, &polynomials.jones, &polynomials.kauffman, &polynomials.conway)?;
    let invariants = solve_invariants(&derived)?;
    Ok(KnotReport { polynomials, derived, invariants })
}

pub fn invariants_of(b: &BraidWord, engine: &mut SkeinEngine) -> Result<InvariantVector, InvariantError> {
    Ok(analyze(b, engine)?.invariants)
}

/// `v4a = ½(3a₂ − a₂²) + a₄`.
pub fn v4a_from_conway(a2: i64, a4: i64) -> i64 {
    // 3a₂ − a₂² = a₂(3 − a₂) is always even
    (3 * a2 - a2 * a2) / 2 + a4
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Chirality {
    Chiral,
    Inconclusive,
}

impl fmt::Display for Chirality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Chirality::Chiral => "chiral",
            Chirality::Inconclusive => "inconclusive",
        })
    }
}

/// A knot is chiral whenever `½(a₂ + a₂²) + a₄` is odd.
pub fn chirality_criterion(a2: i64, a4: i64) -> Chirality {
    if ((a2 + a2 * a2) / 2 + a4).rem_euclid(2) == 1 {
        Chirality::Chiral
    } else {
        Chirality::Inconclusive
    }
}

/// The four mod-2 congruences between odd- and even-order slots.
pub const CONGRUENCES: [(usize, usize, &str); 4] =
    [(1, 2, "v3 ≡ v4a"), (4, 7, "v5a ≡ v6a"), (5, 8, "v5b ≡ v6b"), (6, 9, "v5c ≡ v6c")];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruenceReport {
    pub violated: Vec<&'static str>,
}

impl CongruenceReport {
    pub fn passed(&self) -> bool {
        self.violated.is_empty()
    }
}

pub fn check_congruences(v: &InvariantVector) -> CongruenceReport {
    let violated = CONGRUENCES
        .iter()
        .filter(|&&(i, j, _)| (v.0[i] - v.0[j]).rem_euclid(2) != 0)
        .map(|&(_, _, name)| name)
        .collect();
    CongruenceReport { violated }
}

/// Effect of taking the mirror image: odd-order slots change sign.
pub fn mirror_transform(v: &InvariantVector) -> InvariantVector {
    let mut out = *v;
    for (i, x) in out.0.iter_mut().enumerate() {
        if InvariantVector::slot_order(i) % 2 == 1 {
            *x = -*x;
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SublatticeAudit {
    /// Rows failing at least one congruence, with the first failure.
    pub violations: Vec<(usize, &'static str)>,
    /// Per congruence: (name, some row has the odd slot even, some row has it odd).
    pub parity_coverage: Vec<(&'static str, bool, bool)>,
}

impl SublatticeAudit {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    /// Both parities were observed for every congruence, so none of the
    /// four constraints is implied by the data being trivially even.
    pub fn coverage_complete(&self) -> bool {
        self.parity_coverage.iter().all(|&(_, even, odd)| even && odd)
    }
}

pub fn sublattice_congruence_audit(rows: &[InvariantVector]) -> SublatticeAudit {
    let violations = rows
        .iter()
        .enumerate()
        .filter_map(|(k, v)| check_congruences(v).violated.first().map(|&n| (k, n)))
        .collect();
    let parity_coverage = CONGRUENCES
        .iter()
        .map(|&(i, _, name)| {
            let even = rows.iter().any(|v| v.0[i].rem_euclid(2) == 0);
            let odd = rows.iter().any(|v| v.0[i].rem_euclid(2) == 1);
            (name, even, odd)
        })
        .collect();
    SublatticeAudit { violations, parity_coverage }
}

/// Two knots with the same determinant whose `v4a` values differ mod 2.
pub fn determinant_parity_witness<'a>(rows: &[(&'a str, BigInt, i64)]) -> Option<(&'a str, &'a str)> {
    for (i, (id1, det1, v1)) in rows.iter().enumerate() {
        for (id2, det2, v2) in &rows[i + 1..] {
            if det1 == det2 && (v1 - v2).rem_euclid(2) == 1 {
                return Some((id1, id2));
            }
        }
    }
    None
}

/// Conway coefficient `a_k` as an `i64`.
pub fn conway_coefficient(conway: &LaurentPoly, k: i32) -> i64 {
    debug_assert_eq!(conway.vars(), Vars::Z);
    conway.coeff(0, k).to_i64().expect("Conway coefficient fits in i64")
}

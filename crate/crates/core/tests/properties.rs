mod common;

use std::collections::BTreeSet;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use vassiliev::chordalg::{self, enumerate_diagrams, Ambient, RelationMatrix};
use vassiliev::invariants::{self, InvariantVector};
use vassiliev::linalg::{self, Field, SparseMatrix};
use vassiliev::tables::{self, load_table};
use vassiliev::{skein, BraidWord, SkeinConfig, SkeinEngine};

fn random_knot(rng: &mut StdRng) -> BraidWord {
    loop {
        let strands = rng.gen_range(2..=4);
        let len = rng.gen_range(3..=9);
        let gens: Vec<i32> = (0..len)
            .map(|_| {
                let g = rng.gen_range(1..strands) as i32;
                if rng.gen_bool(0.5) {
                    g
                } else {
                    -g
                }
            })
            .collect();
        if let Ok(b) = BraidWord::with_strands(gens, strands) {
            if b.is_knot() {
                return b;
            }
        }
    }
}

fn all_polys(b: &BraidWord, e: &mut SkeinEngine) -> invariants::KnotPolynomials {
    invariants::knot_polynomials(b, e).unwrap()
}

#[test]
fn polynomials_survive_stabilization_and_conjugation() {
    let mut rng = StdRng::seed_from_u64(7);
    let mut e = SkeinEngine::default();
    for _ in 0..25 {
        let b = random_knot(&mut rng);
        let p = all_polys(&b, &mut e);
        let k = rng.gen_range(0..b.len());
        assert_eq!(all_polys(&b.rotated(k), &mut e), p, "conjugate of {b}");
        assert_eq!(all_polys(&b.stabilized(rng.gen_bool(0.5)), &mut e), p, "stabilization of {b}");
    }
}

#[test]
fn homflypt_is_multiplicative_under_connected_sum() {
    let knots = ["aaa", "aBaB", "aaaaa"].map(|w| BraidWord::parse(w).unwrap());
    let mut e = SkeinEngine::default();
    for k1 in &knots {
        for k2 in &knots {
            let sum = k1.connected_sum(k2).unwrap();
            let lhs = e.homflypt(&sum.closure()).unwrap();
            let rhs = &e.homflypt(&k1.closure()).unwrap() * &e.homflypt(&k2.closure()).unwrap();
            assert_eq!(lhs, rhs, "{k1} # {k2}");
        }
    }
}

#[test]
fn primitive_invariants_are_additive() {
    let rows = load_table().unwrap();
    let mut e = SkeinEngine::default();
    let sum = rows[0].braid().connected_sum(&rows[1].braid()).unwrap();
    let v = invariants::invariants_of(&sum, &mut e).unwrap();
    let want = InvariantVector(std::array::from_fn(|i| rows[0].expected.0[i] + rows[1].expected.0[i]));
    assert_eq!(v, want);
}

#[test]
fn mirror_of_trefoil_matches_sign_rule() {
    let mut e = SkeinEngine::default();
    let v = invariants::invariants_of(&BraidWord::parse("AAA").unwrap(), &mut e).unwrap();
    assert_eq!(v, InvariantVector([1, 1, 1, -3, 3, -1, 2, 3, -3, 2, -3, -1]));
}

#[test]
fn table_level_polynomial_facts() {
    let rows = load_table().unwrap();
    let mut e = SkeinEngine::default();
    for r in &rows {
        let p = all_polys(&r.braid(), &mut e);
        // a0 = 1 and only even powers in the Conway polynomial
        assert_eq!(invariants::conway_coefficient(&p.conway, 0), 1, "{}", r.knot_id);
        assert!(p.conway.terms().all(|(&(_, z), _)| z % 2 == 0 && z >= 0));
        // V(1) = 1
        assert_eq!(p.jones.terms().map(|(_, c)| c.clone()).sum::<num_bigint::BigInt>(), 1.into());
        // v2 is a2
        assert_eq!(r.expected.v2(), invariants::conway_coefficient(&p.conway, 2), "{}", r.knot_id);
        // a chiral verdict means the mirror has different invariants
        let a2 = invariants::conway_coefficient(&p.conway, 2);
        let a4 = invariants::conway_coefficient(&p.conway, 4);
        if invariants::chirality_criterion(a2, a4) == invariants::Chirality::Chiral {
            assert_ne!(invariants::mirror_transform(&r.expected), r.expected, "{}", r.knot_id);
        }
    }
}

#[test]
fn column_one_of_m1_is_the_v2_indicator() {
    let m = invariants::BasisMatrices::get();
    for (i, row) in m.m1.iter().enumerate() {
        let want = if i == 0 { 1 } else { 0 };
        assert_eq!(row[0], num_rational::BigRational::from_integer(want.into()));
    }
}

#[test]
fn table_audit_has_full_parity_coverage() {
    let rows: Vec<InvariantVector> = load_table().unwrap().iter().map(|r| r.expected).collect();
    let audit = invariants::sublattice_congruence_audit(&rows);
    assert!(audit.passed());
    assert!(audit.coverage_complete(), "{:?}", audit.parity_coverage);
}

#[test]
fn memo_and_plain_agree_on_random_words() {
    let mut rng = StdRng::seed_from_u64(11);
    let mut memo = SkeinEngine::default();
    let mut plain = SkeinEngine::new(SkeinConfig { memoize: false, ..SkeinConfig::default() });
    for _ in 0..30 {
        let b = random_knot(&mut rng);
        assert_eq!(all_polys(&b, &mut memo), all_polys(&b, &mut plain), "{b}");
    }
}

#[test]
fn verify_table_with_injected_error() {
    let mut rows = tables::filter_crossings(&load_table().unwrap(), 6);
    rows[2].expected.0[3] += 2;
    let s = tables::verify_all(&rows, 2, SkeinConfig::default());
    assert_eq!(s.passed(), rows.len() - 1);
    let bad: Vec<&str> = s.failures().map(|o| o.knot_id()).collect();
    assert_eq!(bad, vec![rows[2].knot_id.as_str()]);
}

#[test]
fn circle_enumeration_matches_brute_force() {
    for n in 1..=4 {
        let oracle = common::circle_oracle(n);
        let ours: BTreeSet<String> =
            enumerate_diagrams(Ambient::Circle, n).iter().map(|d| common::circle_canonical(&d.to_string())).collect();
        assert_eq!(ours.len(), enumerate_diagrams(Ambient::Circle, n).len(), "duplicates at n={n}");
        assert_eq!(ours, oracle, "n={n}");
    }
}

#[test]
fn two_strand_enumeration_matches_brute_force() {
    for n in 1..=3 {
        let oracle = common::two_strand_oracle(n);
        let ours: BTreeSet<String> = enumerate_diagrams(Ambient::Strands(2), n).iter().map(|d| d.to_string()).collect();
        assert_eq!(ours, oracle, "n={n}");
        // (2n + 1) placements of the cut times (2n - 1)!! matchings
        let double_fact: usize = (1..2 * n).step_by(2).product();
        assert_eq!(ours.len(), (2 * n + 1) * double_fact);
    }
}

fn permuted(m: &SparseMatrix, rng: &mut StdRng) -> SparseMatrix {
    let mut cols: Vec<usize> = (0..m.ncols()).collect();
    cols.shuffle(rng);
    let mut order: Vec<usize> = (0..m.nrows()).collect();
    order.shuffle(rng);
    let mut out = SparseMatrix::new(m.ncols());
    for r in order {
        out.push_row(m.row(r).iter().map(|&(c, v)| (cols[c as usize], v)));
    }
    out
}

#[test]
fn rank_gap_is_invariant_under_shuffles() {
    let mut rng = StdRng::seed_from_u64(3);
    for (amb, n) in [(Ambient::Circle, 5), (Ambient::Strands(2), 4)] {
        let rel = RelationMatrix::build(amb, n);
        let q = linalg::rank(&rel.matrix, Field::Rationals).unwrap();
        let f2 = linalg::rank(&rel.matrix, Field::GF2).unwrap();
        for _ in 0..3 {
            let m = permuted(&rel.matrix, &mut rng);
            assert_eq!(linalg::rank(&m, Field::Rationals).unwrap(), q);
            assert_eq!(linalg::rank(&m, Field::GF2).unwrap(), f2);
        }
    }
}

#[test]
fn prime_ranks_never_exceed_rational_rank() {
    for (amb, n) in [(Ambient::Circle, 4), (Ambient::Circle, 5), (Ambient::Strands(2), 3), (Ambient::Strands(3), 2)] {
        let rel = RelationMatrix::build(amb, n);
        let q = linalg::rank(&rel.matrix, Field::Rationals).unwrap();
        for p in [2, 3, 5, 1_000_000_007] {
            assert!(linalg::rank(&rel.matrix, Field::Prime(p)).unwrap() <= q);
        }
    }
}

#[test]
fn small_orders_have_no_torsion() {
    for n in 1..=5 {
        assert!(!chordalg::detect_2_torsion(Ambient::Circle, n).unwrap().has_torsion(), "circle {n}");
    }
    let s = linalg::smith_normal_form(&RelationMatrix::build(Ambient::Circle, 4).matrix).unwrap();
    assert!(s.torsion.is_empty());
}

#[test]
fn determinant_of_table_knots_is_odd() {
    let mut e = SkeinEngine::default();
    for r in tables::filter_crossings(&load_table().unwrap(), 8) {
        let p = all_polys(&r.braid(), &mut e);
        let d = skein::determinant(&p.conway).unwrap();
        assert_eq!(&d % 2, 1.into(), "{}", r.knot_id);
    }
}

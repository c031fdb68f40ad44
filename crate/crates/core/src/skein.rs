//! Exact HOMFLYPT and Kauffman polynomials by skein-tree recursion.
//!
//! Conventions:
//!
//! * HOMFLYPT: `t⁻¹ P(L₊) − t P(L₋) = z P(L₀)`, `P(unknot) = 1`.
//! * Kauffman: the regular-isotopy polynomial `Λ` satisfies
//!   `Λ(L₊) + Λ(L₋) = z (Λ(L₀) + Λ(L∞))`, `Λ(unknot) = 1`, and a kink of
//!   sign `s` contributes `a^s`. The ambient invariant is `F = a^{−w} Λ`.
//!
//! Both recursions branch at the first crossing met on its under strand
//! (see [`LinkDiagram::first_bad_crossing`]); a diagram with no such
//! crossing is an unlink. Reidemeister I/II reductions and split
//! factorisation are applied at every node, and values of connected pieces
//! are cached by [`DiagramKey`].

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::diagram::{DiagramKey, LinkDiagram, Smoothing};
use crate::error::{PolyError, SkeinError};
use crate::poly::{LaurentPoly, Vars};

pub const DEFAULT_MAX_CROSSINGS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SkeinConfig {
    /// Largest intermediate diagram the recursion accepts.
    pub max_crossings: usize,
    pub memoize: bool,
}

impl Default for SkeinConfig {
    fn default() -> Self {
        SkeinConfig { max_crossings: DEFAULT_MAX_CROSSINGS, memoize: true }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SkeinStats {
    pub nodes: u64,
    pub memo_hits: u64,
}

/// One evaluation context. The caches only ever hold values that are
/// functions of their keys, so an engine may be reused across diagrams.
#[derive(Debug, Default)]
pub struct SkeinEngine {
    config: SkeinConfig,
    homflypt_memo: HashMap<DiagramKey, LaurentPoly>,
    kauffman_memo: HashMap<DiagramKey, LaurentPoly>,
    stats: SkeinStats,
}

fn mono(vars: Vars, c: i64, e_lead: i32, e_z: i32) -> LaurentPoly {
    LaurentPoly::monomial(vars, BigInt::from(c), e_lead, e_z)
}

/// HOMFLYPT of the two-component unlink, `(t⁻¹ − t) z⁻¹`.
fn homflypt_loop() -> LaurentPoly {
    &mono(Vars::TZ, 1, -1, -1) - &mono(Vars::TZ, 1, 1, -1)
}

/// Kauffman value of a disjoint extra circle, `(a + a⁻¹) z⁻¹ − 1`.
fn kauffman_loop() -> LaurentPoly {
    &(&mono(Vars::AZ, 1, 1, -1) + &mono(Vars::AZ, 1, -1, -1)) - &LaurentPoly::one(Vars::AZ)
}

impl SkeinEngine {
    pub fn new(config: SkeinConfig) -> Self {
        SkeinEngine { config, ..Default::default() }
    }

    pub fn config(&self) -> SkeinConfig {
        self.config
    }

    pub fn stats(&self) -> SkeinStats {
        self.stats
    }

    pub fn clear(&mut self) {
        self.homflypt_memo.clear();
        self.kauffman_memo.clear();
    }

    fn check_cap(&self, d: &LinkDiagram) -> Result<(), SkeinError> {
        if d.crossing_count() > self.config.max_crossings {
            return Err(SkeinError::ResourceLimit { crossings: d.crossing_count(), cap: self.config.max_crossings });
        }
        Ok(())
    }

    /// HOMFLYPT polynomial in `(t, z)` of an oriented diagram.
    pub fn homflypt(&mut self, d: &LinkDiagram) -> Result<LaurentPoly, SkeinError> {
        self.check_cap(d)?;
        self.homflypt_rec(d)
    }

    fn homflypt_rec(&mut self, d: &LinkDiagram) -> Result<LaurentPoly, SkeinError> {
        let (d, _) = d.simplify();
        let (pieces, loops) = d.connected_pieces();
        let split = pieces.len() + loops as usize;
        let mut acc = homflypt_loop().pow(split as u32 - 1);
        for piece in &pieces {
            let v = self.homflypt_piece(piece)?;
            acc = &acc * &v;
        }
        Ok(acc)
    }

    fn homflypt_piece(&mut self, d: &LinkDiagram) -> Result<LaurentPoly, SkeinError> {
        self.check_cap(d)?;
        self.stats.nodes += 1;
        let key = self.config.memoize.then(|| d.canonical_key(true));
        if let Some(v) = key.as_ref().and_then(|k| self.homflypt_memo.get(k)) {
            self.stats.memo_hits += 1;
            return Ok(v.clone());
        }
        let value = match d.first_bad_crossing() {
            None => homflypt_loop().pow(d.component_count() as u32 - 1),
            Some(c) => {
                let switched = self.homflypt_rec(&d.switch_crossing(c).expect("crossing exists"))?;
                let smoothed = self.homflypt_rec(&d.smooth_oriented(c).expect("crossing exists"))?;
                if d.crossings()[c].sign() > 0 {
                    // P₊ = t² P₋ + t z P₀
                    &switched.shifted(2, 0) + &smoothed.shifted(1, 1)
                } else {
                    // P₋ = t⁻² P₊ − t⁻¹ z P₀
                    &switched.shifted(-2, 0) - &smoothed.shifted(-1, 1)
                }
            }
        };
        if let Some(k) = key {
            self.homflypt_memo.insert(k, value.clone());
        }
        Ok(value)
    }

    /// The regular-isotopy polynomial `Λ` in `(a, z)`.
    pub fn kauffman_lambda(&mut self, d: &LinkDiagram) -> Result<LaurentPoly, SkeinError> {
        self.check_cap(d)?;
        self.lambda_rec(d)
    }

    /// The Kauffman polynomial `F = a^{−w} Λ` in `(a, z)`, where `w` is the
    /// writhe of `d` with its stored orientation.
    pub fn kauffman(&mut self, d: &LinkDiagram) -> Result<LaurentPoly, SkeinError> {
        let lambda = self.kauffman_lambda(d)?;
        Ok(lambda.shifted(-(d.writhe() as i32), 0))
    }

    fn lambda_rec(&mut self, d: &LinkDiagram) -> Result<LaurentPoly, SkeinError> {
        let (d, kinks) = d.simplify();
        let (pieces, loops) = d.connected_pieces();
        let split = pieces.len() + loops as usize;
        let mut acc = kauffman_loop().pow(split as u32 - 1).shifted(kinks as i32, 0);
        for piece in &pieces {
            let v = self.lambda_piece(piece)?;
            acc = &acc * &v;
        }
        Ok(acc)
    }

    fn lambda_piece(&mut self, d: &LinkDiagram) -> Result<LaurentPoly, SkeinError> {
        self.check_cap(d)?;
        self.stats.nodes += 1;
        let key = self.config.memoize.then(|| d.canonical_key(false));
        if let Some(v) = key.as_ref().and_then(|k| self.kauffman_memo.get(k)) {
            self.stats.memo_hits += 1;
            return Ok(v.clone());
        }
        let value = match d.first_bad_crossing() {
            // A descending diagram is an unlink; its crossings between
            // different components cancel in the writhe.
            None => kauffman_loop().pow(d.component_count() as u32 - 1).shifted(d.writhe() as i32, 0),
            Some(c) => {
                let switched = self.lambda_rec(&d.switch_crossing(c).expect("crossing exists"))?;
                let v = self.lambda_rec(&d.smooth_unoriented(c, Smoothing::Vertical).expect("crossing exists"))?;
                let h = self.lambda_rec(&d.smooth_unoriented(c, Smoothing::Horizontal).expect("crossing exists"))?;
                // Λ(D) = −Λ(D switched) + z (Λ(D₀) + Λ(D∞))
                &(&v + &h).shifted(0, 1) - &switched
            }
        };
        if let Some(k) = key {
            self.kauffman_memo.insert(k, value.clone());
        }
        Ok(value)
    }
}

/// Conway polynomial `Δ(z) = P(1, z)` of a knot.
pub fn conway(p: &LaurentPoly) -> Result<LaurentPoly, PolyError> {
    if p.vars() != Vars::TZ {
        return Err(PolyError::WrongVariables { expected: "t,z", got: p.vars().label() });
    }
    let delta = p.at_lead_one()?;
    for (&(_, ez), _) in delta.terms() {
        if ez % 2 != 0 {
            return Err(PolyError::OddPower(ez));
        }
        if ez < 0 {
            return Err(PolyError::NegativePower(ez));
        }
    }
    Ok(delta)
}

/// Jones polynomial `V(t) = P(t, t^{1/2} − t^{−1/2})` of a knot.
pub fn jones(p: &LaurentPoly) -> Result<LaurentPoly, PolyError> {
    p.jones_substitution()
}

/// `|Δ(2i)| = |Σ a_{2i} (−4)^i|`.
pub fn determinant(delta: &LaurentPoly) -> Result<BigInt, PolyError> {
    Ok(delta.eval_even_z(&BigInt::from(-4))?.abs())
}

/// True when `p` is the constant 1.
pub fn is_one(p: &LaurentPoly) -> bool {
    p.len() == 1 && p.coeff(0, 0).is_one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::BraidWord;

    fn poly(s: &str, v: Vars) -> LaurentPoly {
        LaurentPoly::parse(s, v).unwrap()
    }

    fn closure(w: &str) -> LinkDiagram {
        BraidWord::parse(w).unwrap().closure()
    }

    #[test]
    fn homflypt_examples() {
        let mut e = SkeinEngine::default();
        assert!(is_one(&e.homflypt(&BraidWord::unknot().closure()).unwrap()));
        assert_eq!(e.homflypt(&LinkDiagram::unlink(2)).unwrap(), poly("t^-1*z^-1 - t*z^-1", Vars::TZ));
        assert_eq!(e.homflypt(&closure("aaa")).unwrap().to_string(), "-t^4 + 2*t^2 + t^2*z^2");
        // kinked unknot and the two-component unlink drawn with an R2 pair
        assert!(is_one(&e.homflypt(&closure("a")).unwrap()));
        assert_eq!(e.homflypt(&closure("aA")).unwrap(), homflypt_loop());
    }

    #[test]
    fn conway_jones_determinant_examples() {
        let mut e = SkeinEngine::default();
        let p = e.homflypt(&closure("aaa")).unwrap();
        let delta = conway(&p).unwrap();
        assert_eq!(delta.to_string(), "1 + z^2");
        assert_eq!(jones(&p).unwrap().to_string(), "-t^4 + t^3 + t");
        assert_eq!(determinant(&delta).unwrap(), BigInt::from(3));
        let p8 = e.homflypt(&closure("aBaB")).unwrap();
        let delta8 = conway(&p8).unwrap();
        assert_eq!(delta8.to_string(), "1 - z^2");
        assert_eq!(determinant(&delta8).unwrap(), BigInt::from(5));
        assert_eq!(determinant(&LaurentPoly::one(Vars::Z)).unwrap(), BigInt::one());
        // split links have vanishing Conway polynomial
        assert!(conway(&homflypt_loop()).unwrap().is_zero());
    }

    #[test]
    fn switching_a_trefoil_crossing_gives_the_unknot() {
        let mut e = SkeinEngine::default();
        let d = closure("aaa").switch_crossing(0).unwrap();
        let delta = conway(&e.homflypt(&d).unwrap()).unwrap();
        assert!(is_one(&delta));
    }

    #[test]
    fn kauffman_examples() {
        let mut e = SkeinEngine::default();
        assert!(is_one(&e.kauffman(&BraidWord::unknot().closure()).unwrap()));
        assert!(is_one(&e.kauffman(&closure("a")).unwrap()));
        assert!(is_one(&e.kauffman(&closure("A")).unwrap()));
        assert_eq!(e.kauffman(&LinkDiagram::unlink(2)).unwrap(), poly("a*z^-1 + a^-1*z^-1 - 1", Vars::AZ));
        assert_eq!(e.kauffman(&closure("aA")).unwrap(), kauffman_loop());
    }

    #[test]
    fn kauffman_of_trefoil_by_hand_expansion() {
        // Expand at one crossing of the 2-braid closures. The cup/cap
        // smoothing reverses one strand through each remaining crossing, so
        // the kinks it leaves are negative.
        let mut e = SkeinEngine::default();
        let delta = kauffman_loop();
        let a = |k: i32| mono(Vars::AZ, 1, k, 0);
        let z = mono(Vars::AZ, 1, 0, 1);
        // Hopf: switch -> aA (δ), vertical -> a (a¹), horizontal -> a⁻¹
        let hopf = &(&z * &(&a(1) + &a(-1))) - &delta;
        assert_eq!(e.kauffman_lambda(&closure("aa")).unwrap(), hopf);
        // trefoil: switch -> aaA (a¹), vertical -> Hopf, horizontal -> a⁻²
        let trefoil = &(&z * &(&hopf + &a(-2))) - &a(1);
        assert_eq!(e.kauffman_lambda(&closure("aaa")).unwrap(), trefoil);
        let f = e.kauffman(&closure("aaa")).unwrap();
        assert_eq!(f.to_string(), "-2*a^-2 - a^-4 + a^-3*z + a^-5*z + a^-2*z^2 + a^-4*z^2");
    }

    #[test]
    fn memo_and_plain_engines_agree() {
        let mut memo = SkeinEngine::default();
        let mut plain = SkeinEngine::new(SkeinConfig { memoize: false, ..Default::default() });
        for w in ["aaa", "aBaB", "aaaaa", "aabbAb", "AbAcBcb", "AbAbbb", "AbbAAb", "aAbB"] {
            let d = closure(w);
            assert_eq!(memo.homflypt(&d).unwrap(), plain.homflypt(&d).unwrap(), "{w}");
            assert_eq!(memo.kauffman(&d).unwrap(), plain.kauffman(&d).unwrap(), "{w}");
        }
        assert!(memo.stats().memo_hits > 0);
    }

    #[test]
    fn crossing_cap_is_a_hard_error() {
        let mut e = SkeinEngine::new(SkeinConfig { max_crossings: 4, memoize: true });
        assert_eq!(
            e.homflypt(&closure("aaaaa")),
            Err(SkeinError::ResourceLimit { crossings: 5, cap: 4 })
        );
        assert!(matches!(e.kauffman(&closure("aaaaaaa")), Err(SkeinError::ResourceLimit { .. })));
    }
}

//! Braid words in letter notation: `a` is σ₁ (a positive crossing between
//! strands 1 and 2), `A` its inverse, `b` is σ₂, and so on.

use std::fmt;
use std::str::FromStr;

use crate::diagram::LinkDiagram;
use crate::error::BraidError;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BraidWord {
    generators: Vec<i32>,
    strands: usize,
}

impl BraidWord {
    /// Build from signed generator indices; `+i` is σᵢ, `-i` is σᵢ⁻¹.
    /// The strand count is inferred as one more than the largest index.
    pub fn new(generators: Vec<i32>) -> Result<Self, BraidError> {
        if generators.is_empty() {
            return Err(BraidError::Empty);
        }
        let max = generators.iter().map(|g| g.unsigned_abs() as usize).max().unwrap_or(0);
        if let Some(i) = generators.iter().position(|&g| g == 0) {
            return Err(BraidError::InvalidCharacter { position: i + 1, ch: '0' });
        }
        Ok(BraidWord { generators, strands: (max + 1).max(2) })
    }

    /// Like [`BraidWord::new`] but with an explicit strand count, which must
    /// exceed every generator index.
    pub fn with_strands(generators: Vec<i32>, strands: usize) -> Result<Self, BraidError> {
        let mut w = Self::new(generators)?;
        if strands < w.strands {
            return Err(BraidError::TooFewStrands { strands, needed: w.strands });
        }
        w.strands = strands;
        Ok(w)
    }

    /// The one-strand trivial braid, whose closure is the unknot.
    pub fn unknot() -> Self {
        BraidWord { generators: Vec::new(), strands: 1 }
    }

    pub fn parse(text: &str) -> Result<Self, BraidError> {
        if text.is_empty() {
            return Err(BraidError::Empty);
        }
        let generators = text
            .chars()
            .enumerate()
            .map(|(position, ch)| match ch {
                'a'..='z' => Ok(ch as i32 - 'a' as i32 + 1),
                'A'..='Z' => Ok(-(ch as i32 - 'A' as i32 + 1)),
                _ => Err(BraidError::InvalidCharacter { position: position + 1, ch }),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(generators)
    }

    pub fn generators(&self) -> &[i32] {
        &self.generators
    }

    pub fn strand_count(&self) -> usize {
        self.strands
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn writhe(&self) -> i64 {
        self.generators.iter().map(|g| g.signum() as i64).sum()
    }

    /// Permutation induced on strand positions, reading the word left to
    /// right: `perm[i]` is the final position of the strand that starts at
    /// position `i` (0-based).
    pub fn permutation(&self) -> Vec<usize> {
        // at[p] = the starting strand currently at position p
        let mut at: Vec<usize> = (0..self.strands).collect();
        for g in &self.generators {
            let i = g.unsigned_abs() as usize - 1;
            at.swap(i, i + 1);
        }
        let mut perm = vec![0; self.strands];
        for (pos, &start) in at.iter().enumerate() {
            perm[start] = pos;
        }
        perm
    }

    pub fn permutation_and_writhe(&self) -> (Vec<usize>, i64) {
        (self.permutation(), self.writhe())
    }

    /// Number of components of the closure (cycles of the permutation).
    pub fn closure_components(&self) -> usize {
        cycle_count(&self.permutation())
    }

    pub fn is_knot(&self) -> bool {
        self.closure_components() == 1
    }

    pub fn mirror(&self) -> Self {
        BraidWord { generators: self.generators.iter().map(|g| -g).collect(), strands: self.strands }
    }

    /// `self` followed by `other` shifted up by `strand_count(self) - 1`, so
    /// the last strand of `self` is glued to the first strand of `other`.
    pub fn connected_sum(&self, other: &Self) -> Result<Self, BraidError> {
        for w in [self, other] {
            let c = w.closure_components();
            if c != 1 {
                return Err(BraidError::NotAKnot { components: c });
            }
        }
        let shift = self.strands as i32 - 1;
        let mut generators = self.generators.clone();
        generators.extend(other.generators.iter().map(|&g| if g > 0 { g + shift } else { g - shift }));
        Ok(BraidWord { generators, strands: self.strands + other.strands - 1 })
    }

    /// Append σₙ on a new strand: a Markov stabilization.
    pub fn stabilized(&self, positive: bool) -> Self {
        let n = self.strands as i32;
        let mut generators = self.generators.clone();
        generators.push(if positive { n } else { -n });
        BraidWord { generators, strands: self.strands + 1 }
    }

    /// Move the first `k` letters to the end: a conjugate braid.
    pub fn rotated(&self, k: usize) -> Self {
        let mut generators = self.generators.clone();
        if !generators.is_empty() {
            let k = k % generators.len();
            generators.rotate_left(k);
        }
        BraidWord { generators, strands: self.strands }
    }

    pub fn closure(&self) -> LinkDiagram {
        LinkDiagram::braid_closure(&self.generators, self.strands)
    }
}

pub(crate) fn cycle_count(perm: &[usize]) -> usize {
    let mut seen = vec![false; perm.len()];
    let mut cycles = 0;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        cycles += 1;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
        }
    }
    cycles
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &g in &self.generators {
            let idx = (g.unsigned_abs() - 1) as u8;
            let ch = if g > 0 { b'a' + idx } else { b'A' + idx };
            write!(f, "{}", ch as char)?;
        }
        Ok(())
    }
}

impl FromStr for BraidWord {
    type Err = BraidError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_examples() {
        let w = BraidWord::parse("aaa").unwrap();
        assert_eq!(w.generators(), &[1, 1, 1]);
        assert_eq!(w.strand_count(), 2);
        let w = BraidWord::parse("aBaB").unwrap();
        assert_eq!(w.generators(), &[1, -2, 1, -2]);
        assert_eq!(w.strand_count(), 3);
        assert_eq!(
            BraidWord::parse("a9b"),
            Err(BraidError::InvalidCharacter { position: 2, ch: '9' })
        );
        assert_eq!(BraidWord::parse(""), Err(BraidError::Empty));
    }

    #[test]
    fn mirror_examples() {
        assert_eq!(BraidWord::parse("aaa").unwrap().mirror().to_string(), "AAA");
        assert_eq!(BraidWord::parse("aBaB").unwrap().mirror().generators(), &[-1, 2, -1, 2]);
        let w = BraidWord::parse("abababba").unwrap();
        assert_eq!(w.mirror().mirror(), w);
    }

    #[test]
    fn connected_sum_shifts_second_word() {
        let t = BraidWord::parse("aaa").unwrap();
        let s = t.connected_sum(&t).unwrap();
        assert_eq!(s.generators(), &[1, 1, 1, 2, 2, 2]);
        assert_eq!(s.strand_count(), 3);
        assert!(s.is_knot());
        let hopf = BraidWord::parse("aa").unwrap();
        assert!(matches!(t.connected_sum(&hopf), Err(BraidError::NotAKnot { components: 2 })));
    }

    #[test]
    fn permutation_examples() {
        let (p, w) = BraidWord::parse("aaa").unwrap().permutation_and_writhe();
        assert_eq!((p, w), (vec![1, 0], 3));
        let (p, w) = BraidWord::parse("aBaB").unwrap().permutation_and_writhe();
        assert_eq!(w, 0);
        // strand 0 ends at position 1, strand 1 at 2, strand 2 at 0
        assert_eq!(p, vec![1, 2, 0]);
        assert_eq!(cycle_count(&p), 1);
        let (p, w) = BraidWord::parse("aA").unwrap().permutation_and_writhe();
        assert_eq!((p, w), (vec![0, 1], 0));
    }

    #[test]
    fn unknot_constructor() {
        let u = BraidWord::unknot();
        assert!(u.is_knot());
        assert_eq!(u.closure().crossing_count(), 0);
        assert_eq!(u.closure().component_count(), 1);
    }

    fn arb_word() -> impl Strategy<Value = BraidWord> {
        prop::collection::vec((1i32..5, any::<bool>()), 1..12)
            .prop_map(|v| BraidWord::new(v.into_iter().map(|(g, s)| if s { g } else { -g }).collect()).unwrap())
    }

    proptest! {
        #[test]
        fn render_then_parse_is_identity(w in arb_word()) {
            prop_assert_eq!(BraidWord::parse(&w.to_string()).unwrap(), w);
        }

        #[test]
        fn mirror_negates_writhe(w in arb_word()) {
            prop_assert_eq!(w.mirror().writhe(), -w.writhe());
        }
    }

    #[test]
    fn closure_components_match_cycles_exhaustively() {
        // every word of length <= 4 over 3 strands
        let letters = [1, -1, 2, -2];
        let mut words: Vec<Vec<i32>> = vec![vec![]];
        for _ in 0..4 {
            let mut next = Vec::new();
            for w in &words {
                for &l in &letters {
                    let mut v = w.clone();
                    v.push(l);
                    next.push(v);
                }
            }
            for w in &next {
                let b = BraidWord::with_strands(w.clone(), 3).unwrap();
                let d = b.closure();
                assert_eq!(d.component_count(), cycle_count(&b.permutation()), "{b}");
                assert_eq!(d.crossing_count(), w.len());
                assert_eq!(d.writhe(), b.writhe());
            }
            words = next;
        }
    }
}

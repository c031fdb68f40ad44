//! Exact Laurent polynomials in one or two variables.
//!
//! Every polynomial the workbench handles lives in one of a handful of
//! rings: `Z[t^±1, z^±1]` (HOMFLYPT), `Z[a^±1, z^±1]` (Kauffman),
//! `Z[t^±1]` (Jones and the HOMFLYPT/Kauffman coefficient polynomials) and
//! `Z[z^±1]` (Conway). Exponents are stored as a pair `(lead, z)` where
//! `lead` is the power of `t` or `a`.
//!
//! Text form: terms are grouped by ascending power of `z` and, inside a
//! group, by descending power of the leading variable, e.g.
//! `-t^4 + 2*t^2 + t^2*z^2`. This is the golden-file format.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::PolyError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Vars {
    T,
    A,
    Z,
    TZ,
    AZ,
}

impl Vars {
    pub fn label(self) -> &'static str {
        match self {
            Vars::T => "t",
            Vars::A => "a",
            Vars::Z => "z",
            Vars::TZ => "t,z",
            Vars::AZ => "a,z",
        }
    }

    fn lead(self) -> Option<&'static str> {
        match self {
            Vars::T | Vars::TZ => Some("t"),
            Vars::A | Vars::AZ => Some("a"),
            Vars::Z => None,
        }
    }

    fn has_z(self) -> bool {
        matches!(self, Vars::Z | Vars::TZ | Vars::AZ)
    }
}

pub type Exponent = (i32, i32);

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LaurentPoly {
    vars: Vars,
    terms: BTreeMap<Exponent, BigInt>,
}

impl LaurentPoly {
    pub fn zero(vars: Vars) -> Self {
        LaurentPoly { vars, terms: BTreeMap::new() }
    }

    pub fn one(vars: Vars) -> Self {
        Self::monomial(vars, BigInt::one(), 0, 0)
    }

    pub fn constant(vars: Vars, c: impl Into<BigInt>) -> Self {
        Self::monomial(vars, c.into(), 0, 0)
    }

    /// `coeff * lead^e_lead * z^e_z`. Exponents on absent variables must be 0.
    pub fn monomial(vars: Vars, coeff: BigInt, e_lead: i32, e_z: i32) -> Self {
        assert!(vars.lead().is_some() || e_lead == 0, "no leading variable in {}", vars.label());
        assert!(vars.has_z() || e_z == 0, "no z in {}", vars.label());
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert((e_lead, e_z), coeff);
        }
        LaurentPoly { vars, terms }
    }

    pub fn from_terms(vars: Vars, terms: impl IntoIterator<Item = (Exponent, BigInt)>) -> Self {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn vars(&self) -> Vars {
        self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e_lead: i32, e_z: i32) -> BigInt {
        self.terms.get(&(e_lead, e_z)).cloned().unwrap_or_default()
    }

    fn add_term(&mut self, e: Exponent, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_vars(&self, other: &Self) {
        assert_eq!(
            self.vars,
            other.vars,
            "polynomial variable mismatch: {} vs {}",
            self.vars.label(),
            other.vars.label()
        );
    }

    /// Multiply by `lead^d_lead * z^d_z`.
    pub fn shifted(&self, d_lead: i32, d_z: i32) -> Self {
        LaurentPoly {
            vars: self.vars,
            terms: self.terms.iter().map(|(&(a, b), c)| ((a + d_lead, b + d_z), c.clone())).collect(),
        }
    }

    pub fn scaled(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero(self.vars);
        }
        LaurentPoly {
            vars: self.vars,
            terms: self.terms.iter().map(|(&e, c)| (e, c * k)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(self.vars);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn add_assign_ref(&mut self, other: &Self) {
        self.check_vars(other);
        for (&e, c) in &other.terms {
            self.add_term(e, c.clone());
        }
    }

    /// Substitute `t = 1` in a HOMFLYPT-ring polynomial, giving a polynomial in `z`.
    pub fn at_lead_one(&self) -> Result<Self, PolyError> {
        if !matches!(self.vars, Vars::TZ | Vars::AZ) {
            return Err(PolyError::WrongVariables { expected: "t,z", got: self.vars.label() });
        }
        let mut out = Self::zero(Vars::Z);
        for (&(_, ez), c) in &self.terms {
            out.add_term((0, ez), c.clone());
        }
        Ok(out)
    }

    /// Coefficient of `z^k` as a polynomial in the leading variable.
    pub fn z_coefficient(&self, k: i32) -> Result<Self, PolyError> {
        let target = match self.vars {
            Vars::TZ => Vars::T,
            Vars::AZ => Vars::A,
            other => return Err(PolyError::WrongVariables { expected: "t,z or a,z", got: other.label() }),
        };
        let mut out = Self::zero(target);
        for (&(el, ez), c) in &self.terms {
            if ez == k {
                out.add_term((el, 0), c.clone());
            }
        }
        Ok(out)
    }

    /// `(min, max)` power of `z`, `None` for the zero polynomial.
    pub fn z_range(&self) -> Option<(i32, i32)> {
        let mut it = self.terms.keys().map(|e| e.1);
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), e| (lo.min(e), hi.max(e))))
    }

    /// Substitute `z = t^{1/2} - t^{-1/2}` into a polynomial in `(t, z)`.
    ///
    /// Only even powers of `z` are accepted; an odd power would leave a
    /// half-integer power of `t`, which never happens for knots.
    pub fn jones_substitution(&self) -> Result<Self, PolyError> {
        if self.vars != Vars::TZ {
            return Err(PolyError::WrongVariables { expected: "t,z", got: self.vars.label() });
        }
        // z^2 = t - 2 + t^-1
        let z2 = LaurentPoly::from_terms(
            Vars::T,
            [((1, 0), BigInt::one()), ((0, 0), BigInt::from(-2)), ((-1, 0), BigInt::one())],
        );
        let mut out = Self::zero(Vars::T);
        let mut powers: Vec<LaurentPoly> = vec![Self::one(Vars::T)];
        for (&(et, ez), c) in &self.terms {
            if ez % 2 != 0 {
                return Err(PolyError::OddPower(ez));
            }
            if ez < 0 {
                return Err(PolyError::NegativePower(ez));
            }
            let half = (ez / 2) as usize;
            while powers.len() <= half {
                let next = powers.last().map(|p| p * &z2).unwrap_or_else(|| Self::one(Vars::T));
                powers.push(next);
            }
            out.add_assign_ref(&powers[half].shifted(et, 0).scaled(c));
        }
        Ok(out)
    }

    /// `sum_e coeff(e) * e (e-1) ... (e-n+1)`: the n-th derivative at 1 of a
    /// one-variable polynomial.
    pub fn falling_moment(&self, n: u32) -> BigInt {
        let mut acc = BigInt::zero();
        for (&(el, ez), c) in &self.terms {
            let e = if self.vars == Vars::Z { ez } else { el };
            let mut f = BigInt::one();
            for k in 0..n as i64 {
                f *= BigInt::from(e as i64 - k);
            }
            acc += c * f;
        }
        acc
    }

    /// Evaluate a polynomial in `z` at `z^2 = s`, returning `sum a_{2i} s^i`.
    /// Fails on odd powers.
    pub fn eval_even_z(&self, s: &BigInt) -> Result<BigInt, PolyError> {
        let mut acc = BigInt::zero();
        for (&(el, ez), c) in &self.terms {
            if ez % 2 != 0 {
                return Err(PolyError::OddPower(ez));
            }
            if el != 0 {
                return Err(PolyError::WrongVariables { expected: "z", got: self.vars.label() });
            }
            if ez < 0 {
                return Err(PolyError::NegativePower(ez));
            }
            acc += c * num_traits::pow(s.clone(), (ez / 2) as usize);
        }
        Ok(acc)
    }

    /// Parse the canonical text form back into a polynomial over `vars`.
    pub fn parse(text: &str, vars: Vars) -> Result<Self, PolyError> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(PolyError::Parse("empty input".into()));
        }
        let mut out = Self::zero(vars);
        let bytes = s.as_bytes();
        let mut start = 0;
        let mut i = 0;
        let mut pieces = Vec::new();
        while i < bytes.len() {
            let b = bytes[i];
            if (b == b'+' || b == b'-') && i > start && bytes[i - 1] != b'^' {
                pieces.push(&s[start..i]);
                start = i;
            }
            i += 1;
        }
        pieces.push(&s[start..]);
        for piece in pieces {
            let (neg, body) = match piece.as_bytes().first() {
                Some(b'-') => (true, &piece[1..]),
                Some(b'+') => (false, &piece[1..]),
                _ => (false, piece),
            };
            if body.is_empty() {
                return Err(PolyError::Parse(format!("dangling sign in {text:?}")));
            }
            let mut coeff = BigInt::one();
            let (mut el, mut ez) = (0i32, 0i32);
            for factor in body.split('*') {
                let (base, exp) = match factor.split_once('^') {
                    Some((b, e)) => (b, e.parse::<i32>().map_err(|_| PolyError::Parse(format!("bad exponent {e:?}")))?),
                    None => (factor, 1),
                };
                if base.chars().all(|c| c.is_ascii_digit()) && !base.is_empty() {
                    if factor.contains('^') {
                        return Err(PolyError::Parse(format!("exponent on constant {factor:?}")));
                    }
                    coeff *= base.parse::<BigInt>().map_err(|_| PolyError::Parse(format!("bad integer {base:?}")))?;
                } else if Some(base) == vars.lead() {
                    el += exp;
                } else if base == "z" && vars.has_z() {
                    ez += exp;
                } else {
                    return Err(PolyError::Parse(format!("unexpected factor {factor:?}")));
                }
            }
            if neg {
                coeff = -coeff;
            }
            out.add_term((el, ez), coeff);
        }
        Ok(out)
    }

    fn display_order(&self) -> Vec<(&Exponent, &BigInt)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| a.0 .1.cmp(&b.0 .1).then(b.0 .0.cmp(&a.0 .0)));
        v
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (&(el, ez), c)) in self.display_order().into_iter().enumerate() {
            let mut factors = Vec::new();
            if el != 0 {
                let name = self.vars.lead().unwrap_or("?");
                factors.push(if el == 1 { name.to_string() } else { format!("{name}^{el}") });
            }
            if ez != 0 {
                factors.push(if ez == 1 { "z".to_string() } else { format!("z^{ez}") });
            }
            let mag = c.abs();
            let body = if factors.is_empty() {
                mag.to_string()
            } else if mag.is_one() {
                factors.join("*")
            } else {
                format!("{}*{}", mag, factors.join("*"))
            };
            match (i, c.is_negative()) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => write!(f, "{body}")?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.check_vars(rhs);
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            out.add_term(e, -c);
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { vars: self.vars, terms: self.terms.iter().map(|(&e, c)| (e, -c)).collect() }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.check_vars(rhs);
        let mut out = LaurentPoly::zero(self.vars);
        for (&(a0, a1), c) in &self.terms {
            for (&(b0, b1), d) in &rhs.terms {
                out.add_term((a0 + b0, a1 + b1), c * d);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str, v: Vars) -> LaurentPoly {
        LaurentPoly::parse(s, v).unwrap()
    }

    #[test]
    fn display_matches_golden_form() {
        let trefoil = LaurentPoly::from_terms(
            Vars::TZ,
            [((4, 0), BigInt::from(-1)), ((2, 0), BigInt::from(2)), ((2, 2), BigInt::one())],
        );
        assert_eq!(trefoil.to_string(), "-t^4 + 2*t^2 + t^2*z^2");
        assert_eq!(p("1 + z^2", Vars::Z).to_string(), "1 + z^2");
        assert_eq!(p("t + t^3 - t^4", Vars::T).to_string(), "-t^4 + t^3 + t");
        assert_eq!(LaurentPoly::zero(Vars::T).to_string(), "0");
        assert_eq!(p("a*z^-1 + a^-1*z^-1 - 1", Vars::AZ).to_string(), "a*z^-1 + a^-1*z^-1 - 1");
    }

    #[test]
    fn jones_of_trefoil() {
        let trefoil = p("-t^4 + 2*t^2 + t^2*z^2", Vars::TZ);
        let v = trefoil.jones_substitution().unwrap();
        assert_eq!(v.to_string(), "-t^4 + t^3 + t");
        assert_eq!(trefoil.at_lead_one().unwrap().to_string(), "1 + z^2");
    }

    #[test]
    fn odd_power_rejected_by_jones() {
        let link = p("t^-1*z^-1 - t*z^-1", Vars::TZ);
        assert!(link.jones_substitution().is_err());
        assert!(p("t*z", Vars::TZ).jones_substitution().is_err());
    }

    #[test]
    fn falling_moment_is_derivative_at_one() {
        assert_eq!(p("t^3", Vars::T).falling_moment(3), BigInt::from(6));
        assert_eq!(p("2*t^2 - t^4", Vars::T).falling_moment(3), BigInt::from(-24));
        // d/dt t^-1 = -t^-2 -> -1 at t = 1; second derivative 2 t^-3 -> 2.
        assert_eq!(p("t^-1", Vars::T).falling_moment(1), BigInt::from(-1));
        assert_eq!(p("t^-1", Vars::T).falling_moment(2), BigInt::from(2));
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(LaurentPoly::parse("t^x", Vars::T).is_err());
        assert!(LaurentPoly::parse("q", Vars::T).is_err());
        assert!(LaurentPoly::parse("z", Vars::T).is_err());
        assert!(LaurentPoly::parse("", Vars::T).is_err());
    }

    fn arb_poly() -> impl Strategy<Value = LaurentPoly> {
        prop::collection::vec(((-6i32..7, -4i32..5), -20i64..21), 0..8).prop_map(|ts| {
            LaurentPoly::from_terms(Vars::TZ, ts.into_iter().map(|(e, c)| (e, BigInt::from(c))))
        })
    }

    proptest! {
        #[test]
        fn text_form_round_trips(q in arb_poly()) {
            let back = LaurentPoly::parse(&q.to_string(), Vars::TZ).unwrap();
            prop_assert_eq!(back, q);
        }

        #[test]
        fn ring_laws(x in arb_poly(), y in arb_poly(), w in arb_poly()) {
            prop_assert_eq!(&(&x * &y) * &w, &x * &(&y * &w));
            prop_assert_eq!(&x * &(&y + &w), &(&x * &y) + &(&x * &w));
            prop_assert!((&x - &x).is_zero());
        }
    }
}

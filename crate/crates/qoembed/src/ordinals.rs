//! Ordinals below ω^ω in Cantor normal form, with the max-lex pairing
//! function `Hes`, its triple variant and `ρ = Hes + 1`.
//!
//! Coefficients are `u128`. Arithmetic panics on coefficient overflow, which
//! only happens far outside the sizes used by the finite models in this crate.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An ordinal `Σ ω^e·c` with strictly decreasing exponents and positive
/// coefficients. The empty term list is zero.
///
/// The derived ordering is the ordinal ordering: term lists compare
/// lexicographically on `(exponent, coefficient)` and a proper prefix is
/// smaller.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ordinal {
    terms: Vec<(u32, u128)>,
}

fn overflow() -> ! {
    panic!("ordinal coefficient overflow")
}

fn cmul(a: u128, b: u128) -> u128 {
    a.checked_mul(b).unwrap_or_else(|| overflow())
}

fn cadd(a: u128, b: u128) -> u128 {
    a.checked_add(b).unwrap_or_else(|| overflow())
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn nat(n: u128) -> Self {
        if n == 0 {
            Self::zero()
        } else {
            Ordinal { terms: vec![(0, n)] }
        }
    }

    pub fn omega() -> Self {
        Ordinal { terms: vec![(1, 1)] }
    }

    /// `ω^e · c`.
    pub fn monomial(e: u32, c: u128) -> Self {
        if c == 0 {
            Self::zero()
        } else {
            Ordinal { terms: vec![(e, c)] }
        }
    }

    /// Builds an ordinal from explicit CNF terms, validating the invariants.
    pub fn from_terms(terms: Vec<(u32, u128)>) -> Result<Self> {
        for w in terms.windows(2) {
            if w[0].0 <= w[1].0 {
                return Err(Error::Ordinal(format!(
                    "exponents must strictly decrease, got {} then {}",
                    w[0].0, w[1].0
                )));
            }
        }
        if terms.iter().any(|t| t.1 == 0) {
            return Err(Error::Ordinal("coefficients must be positive".into()));
        }
        Ok(Ordinal { terms })
    }

    pub fn terms(&self) -> &[(u32, u128)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.terms.iter().all(|t| t.0 == 0)
    }

    pub fn as_nat(&self) -> Option<u128> {
        match self.terms.as_slice() {
            [] => Some(0),
            [(0, c)] => Some(*c),
            _ => None,
        }
    }

    /// True for `α + 1`, i.e. when the last CNF term is finite.
    pub fn is_successor(&self) -> bool {
        matches!(self.terms.last(), Some((0, _)))
    }

    pub fn is_limit(&self) -> bool {
        !self.is_zero() && !self.is_successor()
    }

    /// Leading exponent; zero for finite ordinals.
    pub fn degree(&self) -> u32 {
        self.terms.first().map_or(0, |t| t.0)
    }

    pub fn succ(&self) -> Self {
        self.add(&Ordinal::nat(1))
    }

    /// The predecessor of a successor ordinal.
    pub fn pred(&self) -> Option<Self> {
        let mut terms = self.terms.clone();
        match terms.last_mut() {
            Some((0, c)) => {
                *c -= 1;
                if *c == 0 {
                    terms.pop();
                }
                Some(Ordinal { terms })
            }
            _ => None,
        }
    }

    /// Ordinal sum `self + other`: terms of `self` below the leading exponent
    /// of `other` are absorbed.
    pub fn add(&self, other: &Ordinal) -> Ordinal {
        let Some(&(e, c)) = other.terms.first() else {
            return self.clone();
        };
        let mut terms: Vec<(u32, u128)> = self
            .terms
            .iter()
            .copied()
            .take_while(|t| t.0 >= e)
            .collect();
        match terms.last_mut() {
            Some(last) if last.0 == e => {
                last.1 = cadd(last.1, c);
                terms.extend_from_slice(&other.terms[1..]);
            }
            _ => terms.extend_from_slice(&other.terms),
        }
        Ordinal { terms }
    }

    /// `self · k` for a natural `k`, which scales the leading coefficient.
    pub fn mul_nat(&self, k: u128) -> Ordinal {
        if k == 0 || self.is_zero() {
            return Ordinal::zero();
        }
        let mut terms = self.terms.clone();
        terms[0].1 = cmul(terms[0].1, k);
        Ordinal { terms }
    }

    /// Left subtraction: the unique `d` with `b + d = self`, if `b ≤ self`.
    pub fn sub_left(&self, b: &Ordinal) -> Option<Ordinal> {
        if b > self {
            return None;
        }
        let mut i = 0;
        while i < b.terms.len() && i < self.terms.len() && b.terms[i] == self.terms[i] {
            i += 1;
        }
        if i == b.terms.len() {
            return Some(Ordinal {
                terms: self.terms[i..].to_vec(),
            });
        }
        let (ea, ca) = self.terms[i];
        let (eb, cb) = b.terms[i];
        if ea == eb {
            let mut terms = vec![(ea, ca - cb)];
            terms.extend_from_slice(&self.terms[i + 1..]);
            Some(Ordinal { terms })
        } else {
            Some(Ordinal {
                terms: self.terms[i..].to_vec(),
            })
        }
    }
}

/// Total comparison in the ordinal order.
pub fn ord_compare(a: &Ordinal, b: &Ordinal) -> Ordering {
    a.cmp(b)
}

pub fn ord_add(a: &Ordinal, b: &Ordinal) -> Ordinal {
    a.add(b)
}

/// Supremum of a nonempty finite list, which is its maximum.
pub fn ord_sup(xs: &[Ordinal]) -> Result<Ordinal> {
    xs.iter()
        .max()
        .cloned()
        .ok_or(Error::Empty("supremum of an empty list"))
}

/// The offset function `G` of the pairing: `G(0) = 0`,
/// `G(μ+1) = G(μ) + μ·2 + 1`, continuous at limits.
///
/// Evaluated left to right over the CNF of `μ`, with `α` the part of `μ`
/// already consumed:
/// * a finite `μ = n` gives `n²`;
/// * a leading term `ω^e·c` (`e ≥ 1`) gives `ω^(2e-1) + ω^(2e)·(c-1)`;
/// * a later term `ω^e·c` (`e ≥ 1`) adds `ω^(deg α + e)·c`;
/// * a later finite tail `n` adds `α·2n + n`.
pub fn hes_offset(mu: &Ordinal) -> Ordinal {
    let mut out = Ordinal::zero();
    let mut alpha = Ordinal::zero();
    for &(e, c) in &mu.terms {
        if alpha.is_zero() {
            out = if e == 0 {
                Ordinal::nat(cmul(c, c))
            } else {
                Ordinal::monomial(2 * e - 1, 1).add(&Ordinal::monomial(2 * e, c - 1))
            };
        } else if e == 0 {
            out = out
                .add(&alpha.mul_nat(cmul(2, c)))
                .add(&Ordinal::nat(c));
        } else {
            out = out.add(&Ordinal::monomial(alpha.degree() + e, c));
        }
        alpha = alpha.add(&Ordinal::monomial(e, c));
    }
    out
}

/// The max-lex pairing: `Hes(α,β) = G(β) + α` if `α < β`, else
/// `G(α) + α + β`.
pub fn hes_pair(a: &Ordinal, b: &Ordinal) -> Ordinal {
    if a < b {
        hes_offset(b).add(a)
    } else {
        hes_offset(a).add(a).add(b)
    }
}

/// The greatest `μ` with `G(μ) ≤ h`.
fn offset_floor(h: &Ordinal) -> Ordinal {
    let fits = |m: &Ordinal| hes_offset(m) <= *h;
    let mut mu = Ordinal::zero();
    for e in (0..=h.degree()).rev() {
        let with = |c: u128| mu.add(&Ordinal::monomial(e, c));
        if !fits(&with(1)) {
            continue;
        }
        let mut lo = 1u128;
        let mut hi = 2u128;
        while fits(&with(hi)) {
            lo = hi;
            hi = cmul(hi, 2);
        }
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if fits(&with(mid)) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        mu = with(lo);
    }
    mu
}

/// Inverse of [`hes_pair`].
pub fn hes_unpair(h: &Ordinal) -> (Ordinal, Ordinal) {
    let mu = offset_floor(h);
    let delta = h
        .sub_left(&hes_offset(&mu))
        .expect("offset floor lies below its argument");
    if delta < mu {
        (delta, mu)
    } else {
        let beta = delta.sub_left(&mu).expect("delta is at least mu");
        (mu, beta)
    }
}

/// `ρ(α,β) = Hes(α,β) + 1`.
pub fn rho(a: &Ordinal, b: &Ordinal) -> Ordinal {
    hes_pair(a, b).succ()
}

/// Inverse of [`rho`]; `None` unless `r` is a successor.
pub fn rho_inverse(r: &Ordinal) -> Option<(Ordinal, Ordinal)> {
    r.pred().map(|h| hes_unpair(&h))
}

/// `Hes₃(α,β,γ) = Hes(α, Hes(β,γ))`.
pub fn hes_triple(a: &Ordinal, b: &Ordinal, c: &Ordinal) -> Ordinal {
    hes_pair(a, &hes_pair(b, c))
}

pub fn hes_triple_inverse(h: &Ordinal) -> (Ordinal, Ordinal, Ordinal) {
    let (a, bc) = hes_unpair(h);
    let (b, c) = hes_unpair(&bc);
    (a, b, c)
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, &(e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            match (e, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "w")?,
                (1, c) => write!(f, "w*{c}")?,
                (e, 1) => write!(f, "w^{e}")?,
                (e, c) => write!(f, "w^{e}*{c}")?,
            }
        }
        Ok(())
    }
}

impl FromStr for Ordinal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Ordinal("empty string".into()));
        }
        if s == "0" {
            return Ok(Ordinal::zero());
        }
        let bad = |msg: &str| Error::Ordinal(format!("{msg} in {s:?}"));
        let mut terms = Vec::new();
        for part in s.split('+') {
            let (base, coef) = match part.split_once('*') {
                Some((b, c)) => (b, Some(c)),
                None => (part, None),
            };
            let parse_nat = |t: &str| -> Result<u128> {
                if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(bad("expected a natural number"));
                }
                t.parse::<u128>().map_err(|_| bad("number out of range"))
            };
            let (e, c) = if let Some(rest) = base.strip_prefix('w') {
                let e = match rest.strip_prefix('^') {
                    Some(exp) => {
                        if exp.contains('w') {
                            return Err(bad("exponents must be finite"));
                        }
                        u32::try_from(parse_nat(exp)?).map_err(|_| bad("exponent too large"))?
                    }
                    None if rest.is_empty() => 1,
                    None => return Err(bad("unexpected characters after w")),
                };
                let c = match coef {
                    Some(c) => parse_nat(c)?,
                    None => 1,
                };
                (e, c)
            } else {
                if coef.is_some() {
                    return Err(bad("finite term cannot carry a coefficient"));
                }
                (0, parse_nat(base)?)
            };
            if c == 0 {
                return Err(bad("zero coefficient"));
            }
            terms.push((e, c));
        }
        Ordinal::from_terms(terms)
    }
}

/// Coefficients that fit in a `u64` serialize as numbers, larger ones as
/// decimal strings, so ordinals survive buffered (tagged) deserialization.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Coef {
    Small(u64),
    Big(String),
}

impl Serialize for Ordinal {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<(u32, Coef)> = self
            .terms
            .iter()
            .map(|&(e, c)| match u64::try_from(c) {
                Ok(small) => (e, Coef::Small(small)),
                Err(_) => (e, Coef::Big(c.to_string())),
            })
            .collect();
        terms.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Ordinal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<(u32, Coef)>::deserialize(deserializer)?;
        let mut terms = Vec::with_capacity(raw.len());
        for (e, c) in raw {
            let c = match c {
                Coef::Small(c) => c as u128,
                Coef::Big(text) => text.parse::<u128>().map_err(serde::de::Error::custom)?,
            };
            terms.push((e, c));
        }
        Ordinal::from_terms(terms).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    fn nat(n: u128) -> Ordinal {
        Ordinal::nat(n)
    }

    /// Ranks of natural pairs obtained by sorting them in max-then-lex order.
    fn rank_oracle(bound: u128) -> Vec<((u128, u128), u128)> {
        let mut pairs: Vec<(u128, u128)> = (0..bound)
            .flat_map(|a| (0..bound).map(move |b| (a, b)))
            .collect();
        pairs.sort_by(|p, q| p.0.max(p.1).cmp(&q.0.max(q.1)).then(p.cmp(q)));
        pairs.into_iter().zip(0..).collect()
    }

    /// Limit of `G` along the fundamental sequence of a limit ordinal,
    /// read off from the terms that stabilise and the one that keeps growing.
    fn limit_oracle(mu: &Ordinal) -> Ordinal {
        let (&(e, c), init) = mu.terms().split_last().unwrap();
        let base = Ordinal::from_terms(init.to_vec())
            .unwrap()
            .add(&Ordinal::monomial(e, c - 1));
        let at = |n: u128| hes_offset(&base.add(&Ordinal::monomial(e - 1, n)));
        let (a, b) = (at(40), at(41));
        let common = a
            .terms()
            .iter()
            .zip(b.terms())
            .take_while(|(x, y)| x == y)
            .count();
        let (f, ca) = a.terms()[common];
        let (g, cb) = b.terms()[common];
        assert_eq!(f, g, "growing term keeps its exponent");
        assert!(cb > ca, "growing term increases");
        Ordinal::from_terms(a.terms()[..common].to_vec())
            .unwrap()
            .add(&Ordinal::monomial(f + 1, 1))
    }

    fn corpus() -> Vec<Ordinal> {
        let mut v = Vec::new();
        for e2 in 0..3u128 {
            for e1 in 0..3u128 {
                for e0 in 0..4u128 {
                    let mut t = Vec::new();
                    if e2 > 0 {
                        t.push((2, e2));
                    }
                    if e1 > 0 {
                        t.push((1, e1));
                    }
                    if e0 > 0 {
                        t.push((0, e0));
                    }
                    v.push(Ordinal::from_terms(t).unwrap());
                }
            }
        }
        v.push(o("w^3"));
        v.push(o("w^3*2+w+1"));
        v
    }

    #[test]
    fn compare_examples() {
        assert_eq!(ord_compare(&nat(0), &nat(0)), Ordering::Equal);
        assert_eq!(ord_compare(&nat(3), &o("w")), Ordering::Less);
        assert_eq!(ord_compare(&o("w*2+1"), &o("w*3")), Ordering::Less);
        assert_eq!(ord_compare(&o("w^2"), &o("w*100+7")), Ordering::Greater);
    }

    #[test]
    fn add_examples() {
        assert_eq!(ord_add(&nat(3), &o("w")), o("w"));
        assert_eq!(ord_add(&o("w"), &nat(3)), o("w+3"));
        assert_eq!(ord_add(&o("w*2+1"), &o("w")), o("w*3"));
        assert_eq!(ord_add(&o("w^2+w"), &o("w*2+5")), o("w^2+w*3+5"));
    }

    #[test]
    fn sup_examples() {
        assert_eq!(ord_sup(&[nat(0)]).unwrap(), nat(0));
        assert_eq!(ord_sup(&[nat(2), o("w"), nat(5)]).unwrap(), o("w"));
        assert_eq!(ord_sup(&[o("w+1"), o("w*2")]).unwrap(), o("w*2"));
        assert!(ord_sup(&[]).is_err());
    }

    #[test]
    fn sub_left_inverts_add() {
        let c = corpus();
        for a in &c {
            for b in &c {
                let s = a.add(b);
                let d = s.sub_left(a).unwrap();
                assert_eq!(a.add(&d), s);
            }
        }
        assert_eq!(nat(2).sub_left(&nat(3)), None);
    }

    #[test]
    fn text_round_trip() {
        for x in corpus() {
            assert_eq!(x.to_string().parse::<Ordinal>().unwrap(), x);
        }
        assert_eq!(o("w^2*3+w+5").terms(), &[(2, 3), (1, 1), (0, 5)]);
        assert!("w^w".parse::<Ordinal>().is_err());
        assert!("w+w^2".parse::<Ordinal>().is_err());
        assert!("3*w".parse::<Ordinal>().is_err());
    }

    #[test]
    fn json_round_trip() {
        let x = o("w^2*3+w+5");
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, "[[2,3],[1,1],[0,5]]");
        assert_eq!(serde_json::from_str::<Ordinal>(&s).unwrap(), x);
        assert!(serde_json::from_str::<Ordinal>("[[1,1],[2,1]]").is_err());
    }

    #[test]
    fn offset_known_values() {
        assert_eq!(hes_offset(&o("w")), o("w"));
        assert_eq!(hes_offset(&o("w+3")), o("w*7+3"));
        assert_eq!(hes_offset(&o("w*3+2")), o("w^2*2+w*12+2"));
        assert_eq!(hes_offset(&o("w*2")), o("w^2"));
        assert_eq!(hes_offset(&o("w^2")), o("w^3"));
    }

    #[test]
    fn offset_successor_clause() {
        for mu in corpus() {
            let lhs = hes_offset(&mu.succ());
            let rhs = hes_offset(&mu).add(&mu.mul_nat(2)).add(&nat(1));
            assert_eq!(lhs, rhs, "successor clause at {mu}");
        }
    }

    #[test]
    fn offset_limit_clause() {
        for mu in corpus().into_iter().filter(Ordinal::is_limit) {
            assert_eq!(hes_offset(&mu), limit_oracle(&mu), "limit clause at {mu}");
        }
    }

    #[test]
    fn pair_examples() {
        assert_eq!(hes_pair(&nat(0), &nat(0)), nat(0));
        assert_eq!(hes_pair(&nat(2), &nat(1)), nat(7));
        assert_eq!(hes_pair(&o("w"), &nat(1)), o("w*2+1"));
    }

    #[test]
    fn pair_matches_rank_oracle_on_naturals() {
        for ((a, b), r) in rank_oracle(100) {
            assert_eq!(hes_pair(&nat(a), &nat(b)), nat(r));
        }
    }

    #[test]
    fn pair_is_order_isomorphism_on_corpus() {
        let c = corpus();
        let pairs: Vec<(Ordinal, Ordinal)> = c
            .iter()
            .flat_map(|a| c.iter().map(move |b| (a.clone(), b.clone())))
            .collect();
        let key = |p: &(Ordinal, Ordinal)| (p.0.clone().max(p.1.clone()), p.0.clone(), p.1.clone());
        for p in pairs.iter().step_by(7) {
            for q in pairs.iter().step_by(5) {
                assert_eq!(
                    hes_pair(&p.0, &p.1).cmp(&hes_pair(&q.0, &q.1)),
                    key(p).cmp(&key(q))
                );
            }
        }
    }

    #[test]
    fn unpair_round_trip() {
        let c = corpus();
        for a in &c {
            for b in &c {
                assert_eq!(hes_unpair(&hes_pair(a, b)), (a.clone(), b.clone()));
            }
        }
    }

    #[test]
    fn rho_examples() {
        assert_eq!(rho(&nat(0), &nat(0)), nat(1));
        assert_eq!(rho(&nat(1), &nat(1)), nat(4));
        assert_eq!(rho(&nat(1), &nat(0)), nat(3));
        assert_eq!(rho(&nat(0), &nat(1)), nat(2));
        assert_eq!(rho(&nat(2), &nat(0)), nat(7));
        assert_eq!(rho_inverse(&o("w")), None);
        assert_eq!(rho_inverse(&nat(7)), Some((nat(2), nat(0))));
    }

    #[test]
    fn triple_examples() {
        assert_eq!(hes_triple(&nat(0), &nat(0), &nat(0)), nat(0));
        assert_eq!(hes_triple(&nat(1), &nat(0), &nat(0)), nat(2));
        assert_eq!(hes_triple(&nat(0), &nat(1), &nat(0)), nat(4));
        assert_eq!(hes_triple(&nat(1), &nat(1), &nat(0)), nat(5));
        let h = hes_triple(&nat(2), &nat(3), &nat(1));
        assert_eq!(hes_triple_inverse(&h), (nat(2), nat(3), nat(1)));
    }
}

//! Finite ordinal sequences, the Lipschitz injections `⊕` and `⊕̃`, and the
//! rank map `#` over finite `⊕`-closed universes.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ordinals::{hes_pair, rho, rho_inverse, Ordinal};

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct OrdSeq {
    entries: Vec<Ordinal>,
}

impl OrdSeq {
    pub fn new(entries: Vec<Ordinal>) -> Self {
        OrdSeq { entries }
    }

    pub fn empty() -> Self {
        OrdSeq::default()
    }

    /// `0^(n)`.
    pub fn zeros(n: usize) -> Self {
        OrdSeq {
            entries: vec![Ordinal::zero(); n],
        }
    }

    pub fn from_nats(xs: &[u128]) -> Self {
        OrdSeq {
            entries: xs.iter().map(|&x| Ordinal::nat(x)).collect(),
        }
    }

    pub fn from_bits(xs: &[u8]) -> Self {
        OrdSeq {
            entries: xs.iter().map(|&x| Ordinal::nat(x as u128)).collect(),
        }
    }

    /// Reads the sequence back as bits, if every entry is 0 or 1.
    pub fn as_bits(&self) -> Option<Vec<u8>> {
        self.entries
            .iter()
            .map(|e| match e.as_nat() {
                Some(0) => Some(0),
                Some(1) => Some(1),
                _ => None,
            })
            .collect()
    }

    pub fn entries(&self) -> &[Ordinal] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<&Ordinal> {
        self.entries.get(i)
    }

    pub fn last(&self) -> Option<&Ordinal> {
        self.entries.last()
    }

    /// `s ↾ n`; saturates at the full length.
    pub fn restrict(&self, n: usize) -> OrdSeq {
        OrdSeq {
            entries: self.entries[..n.min(self.len())].to_vec(),
        }
    }

    pub fn is_prefix_of(&self, other: &OrdSeq) -> bool {
        other.entries.starts_with(&self.entries)
    }

    /// `x ⌢ self`.
    pub fn prepend(&self, x: Ordinal) -> OrdSeq {
        let mut entries = Vec::with_capacity(self.len() + 1);
        entries.push(x);
        entries.extend_from_slice(&self.entries);
        OrdSeq { entries }
    }

    /// `self ⌢ x`.
    pub fn append(&self, x: Ordinal) -> OrdSeq {
        let mut entries = self.entries.clone();
        entries.push(x);
        OrdSeq { entries }
    }

    /// Drops the first entry.
    pub fn tail(&self) -> OrdSeq {
        OrdSeq {
            entries: self.entries.get(1..).unwrap_or(&[]).to_vec(),
        }
    }

    /// Supremum of the entries; zero for the empty sequence.
    pub fn sup(&self) -> Ordinal {
        self.entries.iter().max().cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Ordinal::is_zero)
    }
}

impl fmt::Display for OrdSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ">")
    }
}

impl From<Vec<Ordinal>> for OrdSeq {
    fn from(entries: Vec<Ordinal>) -> Self {
        OrdSeq { entries }
    }
}

fn check_lengths(s: &OrdSeq, t: &OrdSeq) -> Result<()> {
    if s.len() != t.len() {
        return Err(Error::LengthMismatch(s.len(), t.len()));
    }
    Ok(())
}

/// The entry `ρ(sup + ω, ρ(s_i, t_i))` used at every position past the first.
fn step_entry(running_sup: &Ordinal, a: &Ordinal, b: &Ordinal) -> Ordinal {
    rho(&running_sup.add(&Ordinal::omega()), &rho(a, b))
}

/// `s ⊕ t`: first entry `ρ(s_0, t_0)`, then `ρ(sup_{α≤γ} s_α + ω, ρ(s_γ, t_γ))`.
///
/// At finite lengths the limit clause never applies.
pub fn oplus(s: &OrdSeq, t: &OrdSeq) -> Result<OrdSeq> {
    check_lengths(s, t)?;
    let mut out = Vec::with_capacity(s.len());
    let mut running = Ordinal::zero();
    for (i, (a, b)) in s.entries.iter().zip(&t.entries).enumerate() {
        if a > &running {
            running = a.clone();
        }
        if i == 0 {
            out.push(rho(a, b));
        } else {
            out.push(step_entry(&running, a, b));
        }
    }
    Ok(OrdSeq::new(out))
}

/// `s ⊕̃ t`, the tail of `(0⌢s) ⊕ (0⌢t)`.
pub fn oplus_tilde(s: &OrdSeq, t: &OrdSeq) -> Result<OrdSeq> {
    check_lengths(s, t)?;
    let mut out = Vec::with_capacity(s.len());
    let mut running = Ordinal::zero();
    for (a, b) in s.entries.iter().zip(&t.entries) {
        if a > &running {
            running = a.clone();
        }
        out.push(step_entry(&running, a, b));
    }
    Ok(OrdSeq::new(out))
}

fn decode_step(entry: &Ordinal, running: &mut Ordinal) -> Option<(Ordinal, Ordinal)> {
    let (head, inner) = rho_inverse(entry)?;
    let (a, b) = rho_inverse(&inner)?;
    if &a > running {
        *running = a.clone();
    }
    (head == running.add(&Ordinal::omega())).then_some((a, b))
}

/// The unique `(s, t)` with `s ⊕ t = r`, if `r` lies in the range of `⊕`.
pub fn oplus_decode(r: &OrdSeq) -> Option<(OrdSeq, OrdSeq)> {
    let mut s = Vec::with_capacity(r.len());
    let mut t = Vec::with_capacity(r.len());
    let mut running = Ordinal::zero();
    for (i, e) in r.entries.iter().enumerate() {
        let (a, b) = if i == 0 {
            let (a, b) = rho_inverse(e)?;
            running = a.clone();
            (a, b)
        } else {
            decode_step(e, &mut running)?
        };
        s.push(a);
        t.push(b);
    }
    Some((OrdSeq::new(s), OrdSeq::new(t)))
}

/// The unique `(s, t)` with `s ⊕̃ t = r`, if any.
pub fn oplus_tilde_decode(r: &OrdSeq) -> Option<(OrdSeq, OrdSeq)> {
    let mut s = Vec::with_capacity(r.len());
    let mut t = Vec::with_capacity(r.len());
    let mut running = Ordinal::zero();
    for e in &r.entries {
        let (a, b) = decode_step(e, &mut running)?;
        s.push(a);
        t.push(b);
    }
    Some((OrdSeq::new(s), OrdSeq::new(t)))
}

fn zeta_key(s: &OrdSeq) -> (usize, String) {
    let text = serde_json::to_string(s).expect("sequences always serialize");
    (text.len(), text)
}

/// A finite set of equal-length sequences closed under `⊕` up to a depth
/// bound, together with the enumeration `ζ` and the rank map `#`.
#[derive(Clone, Debug)]
pub struct FiniteUniverse {
    level: usize,
    seeds: Vec<OrdSeq>,
    depth: usize,
    carrier: Vec<OrdSeq>,
    index: HashMap<OrdSeq, usize>,
    sharps: Vec<usize>,
    preimages: Vec<Option<(usize, usize)>>,
}

impl PartialEq for FiniteUniverse {
    fn eq(&self, other: &Self) -> bool {
        self.level == other.level && self.seeds == other.seeds && self.depth == other.depth
    }
}

impl Eq for FiniteUniverse {}

/// Closes `seeds` under pairwise `⊕` `depth` times and ranks the result.
pub fn build_universe(seeds: &BTreeSet<OrdSeq>, depth: usize) -> Result<FiniteUniverse> {
    let level = seeds.first().map_or(0, OrdSeq::len);
    if let Some(bad) = seeds.iter().find(|s| s.len() != level) {
        return Err(Error::LengthMismatch(level, bad.len()));
    }
    let mut current: BTreeSet<OrdSeq> = seeds.clone();
    for _ in 0..depth {
        let items: Vec<&OrdSeq> = current.iter().collect();
        let mut next = current.clone();
        for a in &items {
            for b in &items {
                next.insert(oplus(a, b)?);
            }
        }
        if next.len() == current.len() {
            break;
        }
        current = next;
    }
    Ok(FiniteUniverse::from_carrier(
        level,
        seeds.iter().cloned().collect(),
        depth,
        current,
    ))
}

impl FiniteUniverse {
    fn from_carrier(
        level: usize,
        seeds: Vec<OrdSeq>,
        depth: usize,
        carrier: BTreeSet<OrdSeq>,
    ) -> Self {
        let mut keyed: Vec<((usize, String), OrdSeq)> =
            carrier.into_iter().map(|s| (zeta_key(&s), s)).collect();
        keyed.sort();
        let carrier: Vec<OrdSeq> = keyed.into_iter().map(|(_, s)| s).collect();
        let index: HashMap<OrdSeq, usize> = carrier
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        let preimages: Vec<Option<(usize, usize)>> = carrier
            .iter()
            .map(|s| {
                if s.is_empty() {
                    return None;
                }
                let (r, t) = oplus_decode(s)?;
                Some((*index.get(&r)?, *index.get(&t)?))
            })
            .collect();
        let mut u = FiniteUniverse {
            level,
            seeds,
            depth,
            carrier,
            index,
            sharps: Vec::new(),
            preimages,
        };
        u.sharps = u.compute_sharps();
        u
    }

    /// `# s = rank of Hes(σ⁰(s), σ¹(s))`, where carrier members are
    /// well-ordered by `(sup, ζ)`, `σ⁰` is the supremum,
    /// `π(s) = sup{σ¹(t) : t before s with the same supremum} + 1`, and
    /// `σ¹(s)` is `π(s)` unless `s = r ⊕ t` inside the carrier, in which case
    /// it is `Hes(σ¹(r), π(s))`.
    ///
    /// `σ¹` is always finite and strictly increasing in `ζ` within a group of
    /// equal supremum. When the supremum is infinite it dominates `σ¹`, so the
    /// max-lex position of `(σ⁰, σ¹)` is fixed by `(sup, ζ)` alone and the
    /// (rapidly growing) value of `σ¹` is only computed for finite suprema.
    fn compute_sharps(&self) -> Vec<usize> {
        let sups: Vec<Ordinal> = self.carrier.iter().map(OrdSeq::sup).collect();
        let mut order: Vec<usize> = (0..self.carrier.len()).collect();
        order.sort_by(|&i, &j| sups[i].cmp(&sups[j]).then(i.cmp(&j)));
        let mut sigma1: Vec<Option<Ordinal>> = vec![None; self.carrier.len()];
        let mut group_sup: Option<&Ordinal> = None;
        let mut group_max = Ordinal::zero();
        for &i in order.iter().filter(|&&i| sups[i].is_finite()) {
            if group_sup != Some(&sups[i]) {
                group_sup = Some(&sups[i]);
                group_max = Ordinal::zero();
            }
            let pi = group_max.succ();
            let value = match self.preimages[i] {
                Some((r, _)) => {
                    let base = sigma1[r]
                        .as_ref()
                        .expect("a preimage has a strictly smaller supremum");
                    hes_pair(base, &pi)
                }
                None => pi,
            };
            if value > group_max {
                group_max = value.clone();
            }
            sigma1[i] = Some(value);
        }
        let mut finite: Vec<(Ordinal, usize)> = order
            .iter()
            .filter_map(|&i| sigma1[i].as_ref().map(|v| (hes_pair(&sups[i], v), i)))
            .collect();
        finite.sort();
        let ranked = finite
            .into_iter()
            .map(|(_, i)| i)
            .chain(order.iter().copied().filter(|&i| !sups[i].is_finite()));
        let mut sharps = vec![0; self.carrier.len()];
        for (rank, i) in ranked.enumerate() {
            sharps[i] = rank;
        }
        sharps
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn seeds(&self) -> &[OrdSeq] {
        &self.seeds
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Carrier members listed in `ζ` order.
    pub fn carrier(&self) -> &[OrdSeq] {
        &self.carrier
    }

    pub fn len(&self) -> usize {
        self.carrier.len()
    }

    pub fn is_empty(&self) -> bool {
        self.carrier.is_empty()
    }

    pub fn contains(&self, s: &OrdSeq) -> bool {
        self.index.contains_key(s)
    }

    pub fn zeta(&self, s: &OrdSeq) -> Option<usize> {
        self.index.get(s).copied()
    }

    /// The `⊕`-preimage of `s` inside the carrier, if one exists.
    pub fn preimage(&self, s: &OrdSeq) -> Option<(&OrdSeq, &OrdSeq)> {
        let (r, t) = self.preimages[*self.index.get(s)?]?;
        Some((&self.carrier[r], &self.carrier[t]))
    }

    pub fn sharp_at(&self, zeta: usize) -> usize {
        self.sharps[zeta]
    }
}

pub fn sharp(s: &OrdSeq, u: &FiniteUniverse) -> Result<usize> {
    u.zeta(s).map(|i| u.sharps[i]).ok_or(Error::NotInCarrier)
}

#[derive(Serialize, Deserialize)]
struct UniverseSpec {
    level: usize,
    seeds: Vec<OrdSeq>,
    depth: usize,
}

impl Serialize for FiniteUniverse {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        UniverseSpec {
            level: self.level,
            seeds: self.seeds.clone(),
            depth: self.depth,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FiniteUniverse {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let spec = UniverseSpec::deserialize(deserializer)?;
        let seeds: BTreeSet<OrdSeq> = spec.seeds.into_iter().collect();
        let u = build_universe(&seeds, spec.depth).map_err(serde::de::Error::custom)?;
        if !seeds.is_empty() && u.level != spec.level {
            return Err(serde::de::Error::custom(format!(
                "declared level {} but seeds have length {}",
                spec.level, u.level
            )));
        }
        Ok(FiniteUniverse {
            level: spec.level,
            ..u
        })
    }
}

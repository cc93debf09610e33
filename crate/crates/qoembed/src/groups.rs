//! Graph groups: one generator `v_α` of order 7 per vertex, with `v_α v_β`
//! of order 11 on edges and 13 on non-edges. Includes the symmetrized
//! presentation, the sixth small-cancellation check, Dehn's algorithm, the
//! order and formula evaluators, bounded checks of the axioms, graph recovery
//! and the homomorphism induced by a graph embedding.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::embed::Relation;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: u32,
    pub inv: bool,
}

impl Letter {
    pub fn new(gen: u32, inv: bool) -> Letter {
        Letter { gen, inv }
    }

    pub fn inverse(self) -> Letter {
        Letter { gen: self.gen, inv: !self.inv }
    }

    pub fn sign(self) -> i8 {
        if self.inv {
            -1
        } else {
            1
        }
    }

    fn index(self) -> usize {
        2 * self.gen as usize + self.inv as usize
    }
}

/// A word over `v_0, v_1, …` and their inverses. Not reduced unless produced
/// by [`Word::free_reduce`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<(u32, i8)>", into = "Vec<(u32, i8)>")]
pub struct Word(Vec<Letter>);

impl TryFrom<Vec<(u32, i8)>> for Word {
    type Error = Error;

    fn try_from(v: Vec<(u32, i8)>) -> Result<Word> {
        v.into_iter()
            .map(|(g, s)| match s {
                1 => Ok(Letter::new(g, false)),
                -1 => Ok(Letter::new(g, true)),
                _ => Err(Error::Parse(format!("letter sign must be ±1, got {s}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }
}

impl From<Word> for Vec<(u32, i8)> {
    fn from(w: Word) -> Self {
        w.0.into_iter().map(|l| (l.gen, l.sign())).collect()
    }
}

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn from_letters(letters: Vec<Letter>) -> Word {
        Word(letters)
    }

    pub fn gen(g: u32) -> Word {
        Word(vec![Letter::new(g, false)])
    }

    /// `v_g^k` for a signed exponent.
    pub fn power_of(g: u32, k: i32) -> Word {
        let l = Letter::new(g, k < 0);
        Word(vec![l; k.unsigned_abs() as usize])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_gen(&self) -> Option<u32> {
        self.0.iter().map(|l| l.gen).max()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    /// Concatenation, without reduction.
    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn pow(&self, k: usize) -> Word {
        Word(self.0.repeat(k))
    }

    /// The freely reduced form of `by · self · by⁻¹`.
    pub fn conjugate(&self, by: &Word) -> Word {
        by.concat(self).concat(&by.inverse()).free_reduce()
    }

    pub fn rotate(&self, i: usize) -> Word {
        let mut v = self.0.clone();
        if !v.is_empty() {
            let n = v.len();
            v.rotate_left(i % n);
        }
        Word(v)
    }

    pub fn free_reduce(&self) -> Word {
        Word(free_reduce_letters(&self.0))
    }

    pub fn is_freely_reduced(&self) -> bool {
        self.0.windows(2).all(|p| p[0] != p[1].inverse())
    }

    /// Splits the free reduction of `self` as `conjugator · core ·
    /// conjugator⁻¹` with `core` cyclically reduced.
    pub fn cyclic_reduce(&self) -> (Word, Word) {
        let (core, conj) = cyclic_split(free_reduce_letters(&self.0));
        (Word(core), Word(conj))
    }

    /// Parses whitespace-separated signed generator indices, `-k` standing
    /// for `v_k⁻¹`.
    pub fn parse(s: &str) -> Result<Word> {
        s.split_whitespace()
            .map(|tok| {
                let (inv, digits) = match tok.strip_prefix('-') {
                    Some(rest) => (true, rest),
                    None => (false, tok.strip_prefix('+').unwrap_or(tok)),
                };
                digits
                    .parse::<u32>()
                    .map(|g| Letter::new(g, inv))
                    .map_err(|_| Error::Parse(format!("bad letter {tok:?}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            if l.inv {
                f.write_str("-")?;
            }
            write!(f, "{}", l.gen)?;
        }
        Ok(())
    }
}

fn free_reduce_letters(w: &[Letter]) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::with_capacity(w.len());
    for &l in w {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// Input must be freely reduced. Returns `(core, conjugator)`.
fn cyclic_split(w: Vec<Letter>) -> (Vec<Letter>, Vec<Letter>) {
    let n = w.len();
    let mut i = 0;
    while n >= 2 * i + 2 && w[i] == w[n - 1 - i].inverse() {
        i += 1;
    }
    (w[i..n - i].to_vec(), w[..i].to_vec())
}

/// All freely reduced words of length at most `radius` over `n` generators
/// and their inverses, shortest first.
pub fn ball(n: usize, radius: usize) -> Vec<Word> {
    let letters: Vec<Letter> = (0..n as u32)
        .flat_map(|g| [Letter::new(g, false), Letter::new(g, true)])
        .collect();
    let mut out = vec![Word::empty()];
    let mut layer = vec![Vec::new()];
    for _ in 0..radius {
        let mut next = Vec::new();
        for w in &layer {
            for &l in &letters {
                if w.last() != Some(&l.inverse()) {
                    let mut v: Vec<Letter> = w.clone();
                    v.push(l);
                    next.push(v);
                }
            }
        }
        out.extend(next.iter().cloned().map(Word));
        layer = next;
    }
    out
}

/// A simple undirected graph on `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawGraph", into = "RawGraph")]
pub struct GraphStruct {
    n: usize,
    adjacency: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct RawGraph {
    n: usize,
    adjacency: Vec<Vec<usize>>,
}

impl TryFrom<RawGraph> for GraphStruct {
    type Error = Error;

    fn try_from(raw: RawGraph) -> Result<GraphStruct> {
        GraphStruct::from_adjacency(raw.n, raw.adjacency)
    }
}

impl From<GraphStruct> for RawGraph {
    fn from(g: GraphStruct) -> Self {
        RawGraph { n: g.n, adjacency: g.adjacency }
    }
}

impl GraphStruct {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<GraphStruct> {
        let mut adjacency = vec![Vec::new(); n];
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::Group(format!("edge ({a}, {b}) out of range for {n} vertices")));
            }
            if a == b {
                return Err(Error::Group(format!("loop at vertex {a}")));
            }
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for row in &mut adjacency {
            row.sort_unstable();
            row.dedup();
        }
        Ok(GraphStruct { n, adjacency })
    }

    pub fn from_adjacency(n: usize, adjacency: Vec<Vec<usize>>) -> Result<GraphStruct> {
        if adjacency.len() != n {
            return Err(Error::Group(format!(
                "adjacency has {} rows for {n} vertices",
                adjacency.len()
            )));
        }
        let mut edges = Vec::new();
        for (a, row) in adjacency.iter().enumerate() {
            for &b in row {
                if b >= n || !adjacency[b].contains(&a) {
                    return Err(Error::Group(format!("adjacency not symmetric at ({a}, {b})")));
                }
                edges.push((a, b));
            }
        }
        GraphStruct::new(n, &edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn neighbours(&self, a: usize) -> &[usize] {
        &self.adjacency[a]
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        a < self.n && self.adjacency[a].binary_search(&b).is_ok()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|a| self.adjacency[a].iter().filter(move |&&b| a < b).map(move |&b| (a, b)))
            .collect()
    }

    pub fn relation(&self) -> Relation {
        (0..self.n)
            .map(|a| (0..self.n).map(|b| self.adjacent(a, b)).collect())
            .collect()
    }

    /// Whether `e` is an injective map onto an induced copy in `other`.
    pub fn is_embedding(&self, other: &GraphStruct, e: &[usize]) -> bool {
        let distinct: HashSet<_> = e.iter().collect();
        e.len() == self.n
            && distinct.len() == e.len()
            && e.iter().all(|&x| x < other.n)
            && (0..self.n).all(|a| {
                (0..self.n).all(|b| self.adjacent(a, b) == other.adjacent(e[a], e[b]))
            })
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph G {\n");
        for a in 0..self.n {
            s.push_str(&format!("  {a};\n"));
        }
        for (a, b) in self.edges() {
            s.push_str(&format!("  {a} -- {b};\n"));
        }
        s.push_str("}\n");
        s
    }
}

/// Every graph on exactly `n` labelled vertices.
pub fn all_graphs(n: usize) -> Vec<GraphStruct> {
    let pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    (0u64..1 << pairs.len())
        .map(|mask| {
            let edges: Vec<_> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &p)| p)
                .collect();
            GraphStruct::new(n, &edges).expect("pairs are in range")
        })
        .collect()
}

/// A presentation whose relator set is closed under inverses and cyclic
/// permutations, every relator being cyclically reduced.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawPresentation", into = "RawPresentation")]
pub struct Presentation {
    n: usize,
    relators: BTreeSet<Word>,
    source: Option<GraphStruct>,
}

#[derive(Serialize, Deserialize)]
struct RawPresentation {
    n: usize,
    relators: Vec<Word>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    source: Option<GraphStruct>,
}

impl TryFrom<RawPresentation> for Presentation {
    type Error = Error;

    fn try_from(raw: RawPresentation) -> Result<Presentation> {
        let mut p = Presentation::new(raw.n, raw.relators)?;
        if let Some(g) = raw.source {
            if g.n() != raw.n {
                return Err(Error::Group("source graph size differs from generator count".into()));
            }
            p.source = Some(g);
        }
        Ok(p)
    }
}

impl From<Presentation> for RawPresentation {
    fn from(p: Presentation) -> Self {
        RawPresentation {
            n: p.n,
            relators: p.relators.into_iter().collect(),
            source: p.source,
        }
    }
}

pub fn symmetrize(words: impl IntoIterator<Item = Word>) -> BTreeSet<Word> {
    let mut out = BTreeSet::new();
    for w in words {
        let (core, _) = w.cyclic_reduce();
        if core.is_empty() {
            continue;
        }
        for r in [core.inverse(), core] {
            for i in 0..r.len() {
                out.insert(r.rotate(i));
            }
        }
    }
    out
}

impl Presentation {
    pub fn new(n: usize, relators: impl IntoIterator<Item = Word>) -> Result<Presentation> {
        let relators = symmetrize(relators);
        if let Some(g) = relators.iter().filter_map(Word::max_gen).max() {
            if g as usize >= n {
                return Err(Error::Group(format!("relator uses v_{g} but there are {n} generators")));
            }
        }
        Ok(Presentation { n, relators, source: None })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn relators(&self) -> &BTreeSet<Word> {
        &self.relators
    }

    pub fn source(&self) -> Option<&GraphStruct> {
        self.source.as_ref()
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("gens {}\n", self.n);
        for r in &self.relators {
            s.push_str(&r.to_string());
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Presentation> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or(Error::Empty("presentation"))?;
        let n = header
            .strip_prefix("gens")
            .map(str::trim)
            .and_then(|t| t.parse::<usize>().ok())
            .ok_or_else(|| Error::Parse(format!("expected `gens n`, got {header:?}")))?;
        let relators = lines.map(Word::parse).collect::<Result<Vec<_>>>()?;
        Presentation::new(n, relators)
    }
}

/// `⟨ v_α | v_α^7, (v_α v_β)^11 on edges, (v_α v_β)^13 on non-edges ⟩`.
pub fn build_presentation(g: &GraphStruct) -> Presentation {
    let n = g.n();
    let mut base = Vec::new();
    for a in 0..n {
        base.push(Word::gen(a as u32).pow(7));
        for b in a + 1..n {
            let k = if g.adjacent(a, b) { 11 } else { 13 };
            base.push(Word::gen(a as u32).concat(&Word::gen(b as u32)).pow(k));
        }
    }
    let mut p = Presentation::new(n, base).expect("generators are in range");
    p.source = Some(g.clone());
    p
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PieceViolation {
    pub piece: Word,
    pub relator: Word,
    pub other: Word,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SixthReport {
    pub holds: bool,
    pub max_piece: usize,
    pub violation: Option<PieceViolation>,
}

fn lcp(a: &[Letter], b: &[Letter]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

/// Pieces as maximal common initial segments of two distinct relators of the
/// symmetrized set; holds iff every piece is shorter than a sixth of each
/// relator it starts.
pub fn check_sixth(p: &Presentation) -> SixthReport {
    let rels: Vec<&Word> = p.relators.iter().collect();
    let mut report = SixthReport { holds: true, max_piece: 0, violation: None };
    // In sorted order the longest common prefix with any other word is
    // attained at a neighbour.
    for (i, r) in rels.iter().enumerate() {
        for j in [i.wrapping_sub(1), i + 1] {
            let Some(other) = rels.get(j) else { continue };
            let k = lcp(r.letters(), other.letters());
            report.max_piece = report.max_piece.max(k);
            if 6 * k >= r.len() && report.violation.is_none() {
                report.holds = false;
                report.violation = Some(PieceViolation {
                    piece: Word(r.letters()[..k].to_vec()),
                    relator: (*r).clone(),
                    other: (*other).clone(),
                });
            }
        }
    }
    report
}

/// Pieces as common subwords at distinct positions of the cyclic relators,
/// counting the self-overlaps of proper powers.
pub fn check_sixth_subword(p: &Presentation) -> SixthReport {
    let mut classes: BTreeSet<Word> = BTreeSet::new();
    for r in &p.relators {
        let least = (0..r.len()).map(|i| r.rotate(i)).min().expect("relators are nonempty");
        classes.insert(least);
    }
    let positions: Vec<(&Word, usize)> =
        classes.iter().flat_map(|c| (0..c.len()).map(move |i| (c, i))).collect();
    let mut report = SixthReport { holds: true, max_piece: 0, violation: None };
    for (x, &(c1, i)) in positions.iter().enumerate() {
        for &(c2, j) in &positions[x + 1..] {
            let cap = c1.len().min(c2.len());
            let k = (0..cap)
                .take_while(|&t| c1.0[(i + t) % c1.len()] == c2.0[(j + t) % c2.len()])
                .count();
            report.max_piece = report.max_piece.max(k);
            if (6 * k >= c1.len() || 6 * k >= c2.len()) && report.violation.is_none() {
                report.holds = false;
                report.violation = Some(PieceViolation {
                    piece: Word(c1.rotate(i).0[..k].to_vec()),
                    relator: c1.rotate(i),
                    other: c2.rotate(j),
                });
            }
        }
    }
    report
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Order {
    Finite(u32),
    Infinite,
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(k) => write!(f, "order {k}"),
            Order::Infinite => f.write_str("infinite order"),
        }
    }
}

/// Largest exponent tried by [`Group::order`] before declaring infinite order.
pub const ORDER_CAP: u32 = 13;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenWitness {
    pub vertex: usize,
    pub sign: i8,
    pub conjugator: Word,
}

impl GenWitness {
    /// `conjugator · v_vertex^sign · conjugator⁻¹`.
    pub fn word(&self) -> Word {
        Word::power_of(self.vertex as u32, self.sign as i32).conjugate(&self.conjugator)
    }
}

/// A sixth presentation together with a Dehn solver for it.
#[derive(Clone, Debug)]
pub struct Group {
    pres: Presentation,
    rels: Vec<Vec<Letter>>,
    by_start: Vec<Vec<usize>>,
    width: usize,
}

impl Group {
    pub fn new(pres: Presentation) -> Result<Group> {
        if !check_sixth(&pres).holds {
            return Err(Error::NotSixth);
        }
        let width = 2 * pres.n;
        let rels: Vec<Vec<Letter>> = pres.relators.iter().map(|r| r.0.clone()).collect();
        let mut by_start = vec![Vec::new(); width * width];
        for (i, r) in rels.iter().enumerate() {
            if r.len() >= 2 {
                by_start[r[0].index() * width + r[1].index()].push(i);
            }
        }
        Ok(Group { pres, rels, by_start, width })
    }

    pub fn from_graph(g: &GraphStruct) -> Result<Group> {
        Group::new(build_presentation(g))
    }

    pub fn presentation(&self) -> &Presentation {
        &self.pres
    }

    pub fn n(&self) -> usize {
        self.pres.n
    }

    fn check_word(&self, w: &Word) -> Result<()> {
        match w.max_gen() {
            Some(g) if g as usize >= self.n() => Err(Error::Group(format!(
                "word uses v_{g} but the group has {} generators",
                self.n()
            ))),
            _ => Ok(()),
        }
    }

    /// A relator `r` and a length `k` with `2k > |r|` such that `r[..k]` is
    /// the subword of `w` starting at `i` (read cyclically when `cyclic`).
    fn half_at(&self, w: &[Letter], i: usize, cyclic: bool) -> Option<(usize, usize)> {
        let n = w.len();
        let at = |t: usize| if cyclic { w[(i + t) % n] } else { w[i + t] };
        let avail = if cyclic { n } else { n - i };
        if avail < 2 {
            return None;
        }
        let key = at(0).index() * self.width + at(1).index();
        for &ri in &self.by_start[key] {
            let r = &self.rels[ri];
            let k = (0..avail.min(r.len())).take_while(|&t| at(t) == r[t]).count();
            if 2 * k > r.len() {
                return Some((ri, k));
            }
        }
        None
    }

    fn complement_inverse(&self, ri: usize, k: usize) -> impl Iterator<Item = Letter> + '_ {
        self.rels[ri][k..].iter().rev().map(|l| l.inverse())
    }

    fn reduce_letters(&self, w: &[Letter]) -> Vec<Letter> {
        let mut w = free_reduce_letters(w);
        'outer: loop {
            for i in 0..w.len() {
                if let Some((ri, k)) = self.half_at(&w, i, false) {
                    let mut next: Vec<Letter> = w[..i].to_vec();
                    next.extend(self.complement_inverse(ri, k));
                    next.extend_from_slice(&w[i + k..]);
                    w = free_reduce_letters(&next);
                    continue 'outer;
                }
            }
            return w;
        }
    }

    /// Dehn reduction of the linear word.
    pub fn reduce(&self, w: &Word) -> Word {
        Word(self.reduce_letters(&w.0))
    }

    /// Dehn reduction of the cyclic word: returns `(core, conjugator)` with
    /// `w = conjugator · core · conjugator⁻¹` in the group and no cyclic
    /// subword of `core` exceeding half a relator.
    pub fn cyclic_normal(&self, w: &Word) -> (Word, Word) {
        let (mut core, mut conj) = cyclic_split(self.reduce_letters(&w.0));
        'outer: loop {
            let n = core.len();
            for i in 0..n {
                if let Some((ri, k)) = self.half_at(&core, i, true) {
                    // core = x·y with x = core[..i]; y·x is conjugate by x.
                    conj.extend_from_slice(&core[..i]);
                    let mut next: Vec<Letter> = self.complement_inverse(ri, k).collect();
                    next.extend((k..n).map(|t| core[(i + t) % n]));
                    let (c2, t2) = cyclic_split(free_reduce_letters(&next));
                    conj.extend(t2);
                    conj = free_reduce_letters(&conj);
                    core = c2;
                    continue 'outer;
                }
            }
            return (Word(core), Word(conj));
        }
    }

    pub fn is_identity(&self, w: &Word) -> bool {
        self.reduce_letters(&w.0).is_empty()
    }

    pub fn equal(&self, a: &Word, b: &Word) -> bool {
        self.is_identity(&a.concat(&b.inverse()))
    }

    /// Smallest `k ≤ 13` with `w^k = 1`, else infinite. Only orders 1, 7, 11
    /// and 13 occur in graph groups; any other value is reported as an error.
    pub fn order(&self, w: &Word) -> Result<Order> {
        self.check_word(w)?;
        let (core, _) = self.cyclic_normal(w);
        if core.is_empty() {
            return Ok(Order::Finite(1));
        }
        for k in 2..=ORDER_CAP {
            if self.is_identity(&core.pow(k as usize)) {
                return match k {
                    7 | 11 | 13 => Ok(Order::Finite(k)),
                    _ => Err(Error::Group(format!("{w} has unexpected order {k}"))),
                };
            }
        }
        Ok(Order::Infinite)
    }

    /// `Ord_n(w)`, tested directly from its two displayed conditions.
    pub fn has_order(&self, w: &Word, n: u32) -> bool {
        let (core, _) = self.cyclic_normal(w);
        self.is_identity(&core.pow(n as usize))
            && (1..n).all(|k| !self.is_identity(&core.pow(k as usize)))
    }

    pub fn same(&self, a: &Word, b: &Word) -> Result<bool> {
        self.check_word(a)?;
        self.check_word(b)?;
        if self.order(a)? != Order::Finite(7) || self.order(b)? != Order::Finite(7) {
            return Ok(false);
        }
        let ab = self.order(&a.concat(b))?;
        let ba = self.order(&b.concat(a))?;
        Ok(ab == ba && matches!(ab, Order::Finite(11) | Order::Finite(13)))
    }

    /// Decides `gen(a)` structurally: `a` is a conjugate of some `v_α^{±1}`
    /// exactly when its cyclic Dehn normal form is that single letter.
    pub fn gen(&self, a: &Word) -> Result<Option<GenWitness>> {
        self.check_word(a)?;
        if self.n() < 2 {
            return Ok(None);
        }
        let (core, conj) = self.cyclic_normal(a);
        Ok(match core.letters() {
            [l] => Some(GenWitness {
                vertex: l.gen as usize,
                sign: l.sign(),
                conjugator: conj,
            }),
            _ => None,
        })
    }

    pub fn f_vertex(&self, a: &Word) -> Result<usize> {
        self.gen(a)?
            .map(|g| g.vertex)
            .ok_or_else(|| Error::Group(format!("{a} is not a generator-type element")))
    }

    pub fn eq_gamma(&self, a: &Word, b: &Word) -> Result<bool> {
        Ok(self.f_vertex(a)? == self.f_vertex(b)?)
    }

    pub fn r_gamma(&self, a: &Word, b: &Word) -> Result<bool> {
        let (x, y) = (self.f_vertex(a)?, self.f_vertex(b)?);
        if x == y {
            return Ok(false);
        }
        let pair = Word::gen(x as u32).concat(&Word::gen(y as u32));
        Ok(self.order(&pair)? == Order::Finite(11))
    }

    /// `∃z (Ord_7(a z b z⁻¹) ∨ Ord_7(a⁻¹ z b z⁻¹))` with `|z| ≤ bound`.
    pub fn eq_gamma_bounded(&self, a: &Word, b: &Word, bound: usize) -> bool {
        let ai = a.inverse();
        ball(self.n(), bound).iter().any(|z| {
            let zbz = z.concat(b).concat(&z.inverse());
            self.has_order(&a.concat(&zbz), 7) || self.has_order(&ai.concat(&zbz), 7)
        })
    }

    /// `¬(a = b)_Γ ∧ ∃z [Same(a, z) ∧ (z = b)_Γ ∧ Ord_11(a z)]` with `z` ranging
    /// over conjugates of `v_γ^{±1}` by words of length `≤ bound`.
    pub fn r_gamma_bounded(&self, a: &Word, b: &Word, bound: usize) -> Result<bool> {
        if self.eq_gamma_bounded(a, b, bound) {
            return Ok(false);
        }
        let mut seen = HashSet::new();
        for u in ball(self.n(), bound) {
            for g in 0..self.n() as u32 {
                for k in [1, -1] {
                    let z = Word::power_of(g, k).conjugate(&u);
                    if !seen.insert(z.clone()) {
                        continue;
                    }
                    if self.has_order(&a.concat(&z), 11)
                        && self.same(a, &z)?
                        && self.eq_gamma_bounded(&z, b, bound)
                    {
                        return Ok(true);
                    }
                }
            }
        }
        Ok(false)
    }
}

pub fn dehn_is_identity(w: &Word, p: &Presentation) -> Result<bool> {
    Ok(Group::new(p.clone())?.is_identity(w))
}

pub fn element_order(w: &Word, p: &Presentation) -> Result<Order> {
    Group::new(p.clone())?.order(w)
}

/// Reads off the graph whose vertices are `gens`, with an edge where the
/// product has order 11.
pub fn recover_graph(group: &Group, gens: &[Word]) -> Result<GraphStruct> {
    let mut edges = Vec::new();
    for a in 0..gens.len() {
        for b in a + 1..gens.len() {
            if !group.same(&gens[a], &gens[b])? {
                return Err(Error::Group(format!(
                    "generators {a} and {b} are not of the same type"
                )));
            }
            if group.order(&gens[a].concat(&gens[b]))? == Order::Finite(11) {
                edges.push((a, b));
            }
        }
    }
    GraphStruct::new(gens.len(), &edges)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomReport {
    pub map: Vec<usize>,
    pub relators_checked: usize,
    pub relator_failures: Vec<Word>,
    pub ball_radius: usize,
    pub ball_size: usize,
    pub injectivity_failures: Vec<(Word, Word)>,
}

impl HomReport {
    pub fn passed(&self) -> bool {
        self.relator_failures.is_empty() && self.injectivity_failures.is_empty()
    }
}

pub fn substitute(w: &Word, map: &[usize]) -> Word {
    Word(w.0.iter().map(|l| Letter::new(map[l.gen as usize] as u32, l.inv)).collect())
}

/// The homomorphism `v_α ↦ v_{e(α)}` between the groups of two graphs, with
/// its relator and bounded injectivity checks.
pub fn induced_hom(
    source: &Group,
    target: &Group,
    e: &[usize],
    ball_radius: usize,
) -> Result<HomReport> {
    let distinct: HashSet<_> = e.iter().collect();
    if e.len() != source.n() || distinct.len() != e.len() || e.iter().any(|&x| x >= target.n()) {
        return Err(Error::Group(format!(
            "{e:?} is not an injection of {} vertices into {}",
            source.n(),
            target.n()
        )));
    }
    let rels = source.presentation().relators();
    let relator_failures = rels
        .iter()
        .filter(|r| !target.is_identity(&substitute(r, e)))
        .cloned()
        .collect();
    let words = ball(source.n(), ball_radius);
    let images: Vec<Word> = words.iter().map(|w| substitute(w, e)).collect();
    let mut injectivity_failures = Vec::new();
    for i in 0..words.len() {
        for j in i + 1..words.len() {
            if target.equal(&images[i], &images[j]) && !source.equal(&words[i], &words[j]) {
                injectivity_failures.push((words[i].clone(), words[j].clone()));
            }
        }
    }
    Ok(HomReport {
        map: e.to_vec(),
        relators_checked: rels.len(),
        relator_failures,
        ball_radius,
        ball_size: words.len(),
        injectivity_failures,
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct WilReport {
    pub bound: usize,
    pub seed: u64,
    pub phi0_sampled: usize,
    pub phi0_premises: usize,
    pub phi0_counterexamples: Vec<Vec<Word>>,
    pub phi1_witness: bool,
    pub phi1_checked: usize,
    pub phi1_counterexamples: Vec<Word>,
    pub phi2_checked: usize,
    pub phi2_prefix_failures: usize,
    pub phi2_counterexamples: Vec<Vec<Word>>,
}

impl WilReport {
    /// True when no sampled instance refutes the axioms. The check is
    /// bounded-verified only.
    pub fn holds(&self) -> bool {
        self.phi0_counterexamples.is_empty()
            && self.phi1_witness
            && self.phi1_counterexamples.is_empty()
            && self.phi2_counterexamples.is_empty()
    }
}

/// Which `Rel_n` pattern, if any, the first `n` entries of `ids` follow.
/// `ids` are element classes and `ord` the order of `x_1 x_2`.
pub fn rel_prefix(ids: &[usize], ord12: Option<u32>) -> Option<usize> {
    if ids.len() >= 7 && ids[..7].iter().all(|&x| x == ids[0]) {
        return Some(7);
    }
    for (n, o) in [(22, 11), (26, 13)] {
        if ids.len() >= n
            && ord12 == Some(o)
            && (0..n).all(|i| ids[i] == ids[i % 2])
        {
            return Some(n);
        }
    }
    None
}

const PHI_SAMPLES: usize = 24;

fn random_word(rng: &mut ChaCha8Rng, n: usize, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    let mut v: Vec<Letter> = Vec::new();
    while v.len() < len {
        let l = Letter::new(rng.gen_range(0..n as u32), rng.gen_bool(0.5));
        if v.last() != Some(&l.inverse()) {
            v.push(l);
        }
    }
    Word(v)
}

/// Bounded checks of `φ_0`, `φ_1` and `φ_2` on seeded samples with
/// conjugators of length at most `bound`.
pub fn check_wil(group: &Group, bound: usize, seed: u64) -> Result<WilReport> {
    let n = group.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = WilReport { bound, seed, ..WilReport::default() };
    if n < 2 {
        return Ok(report);
    }
    check_phi0(group, bound, &mut rng, &mut report)?;
    check_phi1(group, bound, &mut rng, &mut report)?;
    check_phi2(group, bound, &mut rng, &mut report)?;
    Ok(report)
}

fn check_phi0(
    group: &Group,
    bound: usize,
    rng: &mut ChaCha8Rng,
    report: &mut WilReport,
) -> Result<()> {
    let n = group.n();
    for _ in 0..PHI_SAMPLES {
        let u = random_word(rng, n, bound);
        let k = if rng.gen_bool(0.5) { 1 } else { -1 };
        let shift = Word::power_of(rng.gen_range(0..n as u32), rng.gen_range(-1..=1));
        let base = shift.concat(&u).free_reduce();
        let xs: Vec<Word> = (0..4)
            .map(|_| {
                if rng.gen_bool(0.15) {
                    let t = random_word(rng, n, bound);
                    Word::power_of(rng.gen_range(0..n as u32), k).conjugate(&t)
                } else {
                    Word::power_of(rng.gen_range(0..n as u32), k).conjugate(&base)
                }
            })
            .collect();
        report.phi0_sampled += 1;
        let premise = !group.equal(&xs[0], &xs[3])
            && group.same(&xs[0], &xs[1])?
            && group.same(&xs[1], &xs[2])?
            && group.same(&xs[2], &xs[3])?
            && group.same(&xs[0], &xs[2])?
            && group.same(&xs[1], &xs[3])?;
        if premise {
            report.phi0_premises += 1;
            if !group.same(&xs[0], &xs[3])? {
                report.phi0_counterexamples.push(xs);
            }
        }
    }
    Ok(())
}

/// Writes `y` as a product of the plain generators, `v^{-1}` becoming `v^6`,
/// and checks the side conditions with `x = v_0`, `x' = v_1`.
fn check_phi1(
    group: &Group,
    bound: usize,
    rng: &mut ChaCha8Rng,
    report: &mut WilReport,
) -> Result<()> {
    let n = group.n();
    let (x, x2) = (Word::gen(0), Word::gen(1));
    report.phi1_witness = group.same(&x, &x2)?;
    let in_w = |g: usize| -> Result<bool> {
        Ok(g <= 1 || (group.same(&x, &Word::gen(g as u32))? && group.same(&x2, &Word::gen(g as u32))?))
    };
    for _ in 0..PHI_SAMPLES {
        let y = random_word(rng, n, bound + 2);
        if group.is_identity(&y) {
            continue;
        }
        let mut runs: Vec<(u32, u32)> = Vec::new();
        for l in y.letters() {
            let e = if l.inv { 6 } else { 1 };
            match runs.last_mut() {
                Some((g, k)) if *g == l.gen => *k = (*k + e) % 7,
                _ => runs.push((l.gen, e)),
            }
            if runs.last().map(|r| r.1) == Some(0) {
                runs.pop();
            }
        }
        let factors: Vec<u32> =
            runs.iter().flat_map(|&(g, k)| std::iter::repeat_n(g, k as usize)).collect();
        report.phi1_checked += 1;
        let product = Word(factors.iter().map(|&g| Letter::new(g, false)).collect());
        let mut ok = !factors.is_empty() && group.equal(&product, &y);
        for &g in &factors {
            ok = ok && in_w(g as usize)?;
        }
        for i in 0..factors.len() {
            for j in i..factors.len() {
                ok = ok && !group.is_identity(&Word(product.0[i..=j].to_vec()));
            }
        }
        if !ok {
            report.phi1_counterexamples.push(y);
        }
    }
    Ok(())
}

/// Samples tuples `t v_{α_i}^k t⁻¹` multiplying to 1: single relator
/// instances, rotations, concatenations and insertions.
fn check_phi2(
    group: &Group,
    bound: usize,
    rng: &mut ChaCha8Rng,
    report: &mut WilReport,
) -> Result<()> {
    let n = group.n();
    let ord = |a: usize, b: usize| -> Result<u32> {
        match group.order(&Word::gen(a as u32).concat(&Word::gen(b as u32)))? {
            Order::Finite(k) => Ok(k),
            Order::Infinite => Err(Error::Group("generator product of infinite order".into())),
        }
    };
    let instance = |rng: &mut ChaCha8Rng| -> Result<Vec<usize>> {
        let a = rng.gen_range(0..n);
        if rng.gen_bool(0.3) {
            return Ok(vec![a; 7]);
        }
        let mut b = rng.gen_range(0..n - 1);
        if b >= a {
            b += 1;
        }
        let k = ord(a, b)? as usize;
        Ok([a, b].repeat(k))
    };
    for _ in 0..PHI_SAMPLES {
        let t = random_word(rng, n, bound);
        let k = if rng.gen_bool(0.5) { 1 } else { -1 };
        let mut verts = instance(rng)?;
        match rng.gen_range(0..4) {
            0 => {}
            1 => {
                let r = rng.gen_range(0..verts.len());
                verts.rotate_left(r);
            }
            2 => verts.extend(instance(rng)?),
            _ => {
                let at = rng.gen_range(1..verts.len());
                let inner = instance(rng)?;
                verts.splice(at..at, inner);
            }
        }
        let xs: Vec<Word> = verts
            .iter()
            .map(|&a| Word::power_of(a as u32, k).conjugate(&t))
            .collect();
        // Premise: product 1, all gen, distinct entries pairwise Same, no
        // adjacent or wrap-around cancellation.
        let product = xs.iter().fold(Word::empty(), |acc, x| acc.concat(x));
        if !group.is_identity(&product) {
            return Err(Error::Group("sampled relator tuple is not the identity".into()));
        }
        let mut reps: Vec<Word> = Vec::new();
        let mut ids = Vec::with_capacity(xs.len());
        for x in &xs {
            match reps.iter().position(|r| group.equal(r, x)) {
                Some(i) => ids.push(i),
                None => {
                    reps.push(x.clone());
                    ids.push(reps.len() - 1);
                }
            }
        }
        let mut premise = reps.iter().all(|r| group.gen(r).map(|g| g.is_some()).unwrap_or(false));
        for i in 0..reps.len() {
            for j in i + 1..reps.len() {
                premise = premise && group.same(&reps[i], &reps[j])?;
            }
        }
        let m = xs.len();
        premise = premise
            && (0..m).all(|i| !group.is_identity(&xs[i].concat(&xs[(i + 1) % m])));
        if !premise {
            continue;
        }
        report.phi2_checked += 1;
        let ord12 = |ids: &[usize]| -> Result<Option<u32>> {
            if ids.len() < 2 {
                return Ok(None);
            }
            Ok(match group.order(&reps[ids[0]].concat(&reps[ids[1]]))? {
                Order::Finite(k) => Some(k),
                Order::Infinite => None,
            })
        };
        if rel_prefix(&ids, ord12(&ids)?).is_none() {
            report.phi2_prefix_failures += 1;
        }
        // The normal-closure reading: repeatedly strip a block following a
        // `Rel_n` pattern until nothing is left.
        let mut rest = ids.clone();
        'strip: while !rest.is_empty() {
            for i in 0..rest.len() {
                if let Some(len) = rel_prefix(&rest[i..], ord12(&rest[i..])?) {
                    rest.drain(i..i + len);
                    continue 'strip;
                }
            }
            break;
        }
        if !rest.is_empty() {
            report.phi2_counterexamples.push(xs);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    fn path(n: usize) -> GraphStruct {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        GraphStruct::new(n, &edges).unwrap()
    }

    fn all_graphs_upto(n: usize) -> Vec<GraphStruct> {
        (1..=n).flat_map(all_graphs).collect()
    }

    #[test]
    fn free_and_cyclic_reduction() {
        assert!(w("0 -0").free_reduce().is_empty());
        assert_eq!(w("0 1 -1 0").free_reduce(), w("0 0"));
        let (core, conj) = w("1 0 -1").cyclic_reduce();
        assert_eq!((core, conj), (w("0"), w("1")));
        let (core, conj) = w("0 1").cyclic_reduce();
        assert_eq!((core, conj), (w("0 1"), Word::empty()));
        assert_eq!(w("-0 3 -12").to_string(), "-0 3 -12");
        assert!(Word::parse("0 x").is_err());
    }

    #[test]
    fn ball_sizes() {
        // 1 + 2n Σ (2n-1)^(k-1)
        assert_eq!(ball(2, 3).len(), 1 + 4 + 12 + 36);
        assert!(ball(3, 3).iter().all(Word::is_freely_reduced));
        let set: HashSet<_> = ball(3, 3).into_iter().collect();
        assert_eq!(set.len(), 1 + 6 + 30 + 150);
    }

    #[test]
    fn presentation_families() {
        let p = build_presentation(&GraphStruct::new(1, &[]).unwrap());
        let expect: BTreeSet<Word> = [w("0 0 0 0 0 0 0"), w("-0 -0 -0 -0 -0 -0 -0")].into();
        assert_eq!(p.relators(), &expect);

        let p = build_presentation(&GraphStruct::new(2, &[(0, 1)]).unwrap());
        let lens: BTreeSet<usize> = p.relators().iter().map(Word::len).collect();
        assert_eq!(lens, [7, 22].into());
        for r in p.relators() {
            for i in 0..r.len() {
                assert!(p.relators().contains(&r.rotate(i)));
            }
            assert!(p.relators().contains(&r.inverse()));
        }
        // v_0^7, v_1^7 give 2 words each and (v_0 v_1)^11 gives 4.
        assert_eq!(p.relators().len(), 8);
    }

    #[test]
    fn text_and_json_round_trip() {
        let p = build_presentation(&path(3));
        let text = p.to_text();
        let q = Presentation::from_text(&text).unwrap();
        assert_eq!(q.to_text(), text);
        let json = serde_json::to_string(&p).unwrap();
        let r: Presentation = serde_json::from_str(&json).unwrap();
        assert_eq!(serde_json::to_string(&r).unwrap(), json);
        assert_eq!(r.source(), Some(&path(3)));
        assert!(Presentation::from_text("gens 1\n0 1\n").is_err());
        assert!(Presentation::from_text("generators 1\n").is_err());

        let g = path(4);
        let json = serde_json::to_string(&g).unwrap();
        assert_eq!(json, r#"{"n":4,"adjacency":[[1],[0,2],[1,3],[2]]}"#);
        assert_eq!(serde_json::from_str::<GraphStruct>(&json).unwrap(), g);
        assert!(serde_json::from_str::<GraphStruct>(r#"{"n":2,"adjacency":[[1],[]]}"#).is_err());
        assert!(g.to_dot().contains("2 -- 3;"));
    }

    #[test]
    fn sixth_condition_on_graph_presentations() {
        for g in all_graphs_upto(5) {
            let r = check_sixth(&build_presentation(&g));
            assert!(r.holds, "{g:?}");
            assert!(r.max_piece <= 1);
        }
    }

    #[test]
    fn piece_readings_differ_on_proper_powers() {
        let p = Presentation::new(2, [w("0 1 0 1 0 1")]).unwrap();
        assert!(check_sixth(&p).holds);
        let sub = check_sixth_subword(&p);
        assert!(!sub.holds);
        assert_eq!(sub.max_piece, 6);
        assert!(!check_sixth_subword(&build_presentation(&path(2))).holds);

        let bad = Presentation::new(2, [w("0 1 0 0 1 1"), w("0 1 0 1 1 1")]).unwrap();
        let r = check_sixth(&bad);
        assert!(!r.holds);
        assert!(!r.violation.unwrap().piece.is_empty());
        assert_eq!(Group::new(bad).unwrap_err(), Error::NotSixth);
    }

    #[test]
    fn dehn_examples() {
        let g = Group::from_graph(&GraphStruct::new(2, &[(0, 1)]).unwrap()).unwrap();
        assert!(g.is_identity(&w("0 1").pow(11)));
        assert!(!g.is_identity(&w("0 0 0")));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let rels: Vec<&Word> = g.presentation().relators().iter().collect();
        for _ in 0..50 {
            let a = random_word(&mut rng, 2, 3);
            let b = random_word(&mut rng, 2, 3);
            let r1 = rels[rng.gen_range(0..rels.len())];
            let r2 = rels[rng.gen_range(0..rels.len())];
            let prod = r1.conjugate(&a).concat(&r2.conjugate(&b));
            assert!(g.is_identity(&prod), "{prod}");
        }
    }

    /// Products of at most two relator conjugates by words of length ≤ 1,
    /// freely reduced, that are short.
    fn bounded_closure(g: &Group, max_len: usize) -> HashSet<Word> {
        let conj = ball(g.n(), 1);
        let mut singles = vec![Word::empty()];
        for r in g.presentation().relators() {
            for c in &conj {
                singles.push(r.conjugate(c));
            }
        }
        let mut out = HashSet::new();
        for a in &singles {
            for b in &singles {
                let p = a.concat(b).free_reduce();
                if p.len() <= max_len {
                    out.insert(p);
                }
            }
        }
        out
    }

    #[test]
    fn dehn_agrees_with_bounded_closure_on_short_words() {
        for graph in all_graphs(2).into_iter().chain(all_graphs(3)) {
            let g = Group::from_graph(&graph).unwrap();
            let closure = bounded_closure(&g, 4);
            for x in ball(g.n(), 4) {
                assert_eq!(g.is_identity(&x), closure.contains(&x), "{x}");
            }
        }
    }

    #[test]
    fn orders_on_small_graphs() {
        for graph in all_graphs_upto(4) {
            let g = Group::from_graph(&graph).unwrap();
            for a in 0..graph.n() {
                assert_eq!(g.order(&Word::gen(a as u32)).unwrap(), Order::Finite(7));
                for b in 0..graph.n() {
                    if a == b {
                        continue;
                    }
                    let want = if graph.adjacent(a, b) { 11 } else { 13 };
                    let p = Word::gen(a as u32).concat(&Word::gen(b as u32));
                    assert_eq!(g.order(&p).unwrap(), Order::Finite(want));
                }
            }
        }
        let g = Group::from_graph(&path(3)).unwrap();
        assert_eq!(g.order(&w("0 1 2")).unwrap(), Order::Infinite);
        assert_eq!(g.order(&Word::empty()).unwrap(), Order::Finite(1));
        assert_eq!(g.order(&w("0 0 0 0 0 0 0")).unwrap(), Order::Finite(1));
        assert!(g.order(&w("5")).is_err());
    }

    #[test]
    fn orders_are_conjugation_invariant() {
        let g = Group::from_graph(&path(3)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..40 {
            let x = random_word(&mut rng, 3, 3);
            let c = random_word(&mut rng, 3, 3);
            assert_eq!(g.order(&x).unwrap(), g.order(&x.conjugate(&c)).unwrap(), "{x} by {c}");
        }
    }

    #[test]
    fn same_and_gen() {
        let graph = GraphStruct::new(4, &[(0, 1), (1, 2)]).unwrap();
        let g = Group::from_graph(&graph).unwrap();
        assert!(g.same(&w("0"), &w("1")).unwrap());
        assert!(g.same(&w("0"), &w("3")).unwrap());
        assert!(!g.same(&w("0"), &w("0")).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let c = random_word(&mut rng, 4, 3);
            assert!(g.same(&w("0").conjugate(&c), &w("1").conjugate(&c)).unwrap());
            let x = w("-2").conjugate(&c);
            let gw = g.gen(&x).unwrap().unwrap();
            assert_eq!((gw.vertex, gw.sign), (2, -1));
            assert!(g.equal(&gw.word(), &x));
            assert_eq!(g.f_vertex(&w("1").conjugate(&c)).unwrap(), 1);
        }
        assert_eq!(g.gen(&w("3")).unwrap().unwrap().vertex, 3);
        assert!(g.gen(&w("0 1")).unwrap().is_none());
        assert!(g.gen(&w("0 0")).unwrap().is_none());
        assert!(g.f_vertex(&w("0 1")).is_err());
        // v_0^6 is v_0^{-1}.
        assert_eq!(g.gen(&w("0 0 0 0 0 0")).unwrap().unwrap().sign, -1);
        assert_eq!(g.f_vertex(&w("0 1 -1")).unwrap(), g.f_vertex(&w("0")).unwrap());

        let single = Group::from_graph(&GraphStruct::new(1, &[]).unwrap()).unwrap();
        assert!(single.gen(&w("0")).unwrap().is_none());
    }

    #[test]
    fn eq_and_r_gamma_with_bounded_witnesses() {
        let edge = Group::from_graph(&GraphStruct::new(3, &[(0, 1)]).unwrap()).unwrap();
        let c = w("2 1");
        assert!(edge.eq_gamma(&w("0"), &w("0").conjugate(&c)).unwrap());
        assert!(edge.eq_gamma_bounded(&w("0"), &w("0").conjugate(&c), 2));
        assert!(edge.r_gamma(&w("0"), &w("1")).unwrap());
        assert!(edge.r_gamma_bounded(&w("0"), &w("1"), 1).unwrap());
        assert!(!edge.r_gamma(&w("0"), &w("2")).unwrap());
        assert!(!edge.r_gamma_bounded(&w("0"), &w("2"), 1).unwrap());
        assert!(!edge.eq_gamma_bounded(&w("0"), &w("1"), 2));
        assert!(edge.eq_gamma(&w("0 1"), &w("0")).is_err());
    }

    #[test]
    fn recover_round_trip() {
        for graph in all_graphs_upto(4) {
            let g = Group::from_graph(&graph).unwrap();
            let gens: Vec<Word> = (0..graph.n() as u32).map(Word::gen).collect();
            assert_eq!(recover_graph(&g, &gens).unwrap(), graph);
        }
        let graph = path(3);
        let g = Group::from_graph(&graph).unwrap();
        let c = w("0 -2");
        let gens: Vec<Word> = (0..3).map(|a| Word::gen(a).conjugate(&c)).collect();
        assert_eq!(recover_graph(&g, &gens).unwrap(), graph);
        assert!(recover_graph(&g, &[w("0"), w("0 1")]).is_err());
    }

    #[test]
    fn induced_homomorphisms() {
        let p2 = Group::from_graph(&path(2)).unwrap();
        let p3 = Group::from_graph(&path(3)).unwrap();
        let id = induced_hom(&p3, &p3, &[0, 1, 2], 2).unwrap();
        assert!(id.passed());
        let r = induced_hom(&p2, &p3, &[1, 2], 3).unwrap();
        assert!(r.passed());
        assert_eq!(r.ball_size, 1 + 4 + 12 + 36);
        let bad = induced_hom(&p2, &p3, &[0, 2], 2).unwrap();
        assert!(!bad.relator_failures.is_empty());
        assert!(induced_hom(&p2, &p3, &[1, 1], 2).is_err());
        assert!(induced_hom(&p2, &p3, &[1, 5], 2).is_err());
    }

    #[test]
    fn rel_patterns() {
        assert_eq!(rel_prefix(&[0; 7], None), Some(7));
        assert_eq!(rel_prefix(&[0, 1].repeat(11), Some(11)), Some(22));
        assert_eq!(rel_prefix(&[0, 1].repeat(11), Some(13)), None);
        assert_eq!(rel_prefix(&[0, 1].repeat(13), Some(13)), Some(26));
        assert_eq!(rel_prefix(&[0; 6], None), None);
    }

    #[test]
    fn wil_axioms_on_small_graphs() {
        for graph in all_graphs_upto(4) {
            let g = Group::from_graph(&graph).unwrap();
            let r = check_wil(&g, 2, 7).unwrap();
            if graph.n() < 2 {
                assert!(!r.phi1_witness);
                continue;
            }
            assert!(r.holds(), "{graph:?}: {r:?}");
            assert!(r.phi2_checked > 0);
        }
    }
}

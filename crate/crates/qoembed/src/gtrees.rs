//! Labeled skeletons: every node carries a symbolic stem, a type I label
//! coding `lh(s) - 1`, a type II label coding `s`, and type III labels for
//! the bit strings attached to `s`. Includes the reduction `x ↦ f(x)`, the
//! embeddability and isomorphism tests, a structural recognizer for the
//! axioms, and the inverse map `h`.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::dsttrees::{bits_from_index, bits_index, witnesses_by_length, DstTree, PairSet};
use crate::error::{Error, Result};
use crate::labels::{AsPoint, LabelPoint, LabelTag};
use crate::lmax::{constrained_search, CandidatePool, LipschitzMap, ReductionFrame, Section};
use crate::ordinals::Ordinal;
use crate::sequences::OrdSeq;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeRecord {
    pub node: OrdSeq,
    pub stem: bool,
    pub seed: bool,
    pub tags: Vec<LabelTag>,
}

impl NodeRecord {
    pub fn sharp(&self) -> Option<usize> {
        self.tags.iter().find_map(|t| match t {
            LabelTag::TypeII { sharp, .. } => Some(*sharp),
            _ => None,
        })
    }

    /// Attached bit strings `U_s` as a mask over [`bits_index`].
    pub fn u_mask(&self) -> u64 {
        self.tags
            .iter()
            .filter_map(|t| match t {
                LabelTag::TypeIII { u } if u.len() == self.node.len() => Some(1u64 << bits_index(u)),
                _ => None,
            })
            .fold(0, |a, b| a | b)
    }

    pub fn u_set(&self) -> BTreeSet<OrdSeq> {
        self.tags
            .iter()
            .filter_map(|t| match t {
                LabelTag::TypeIII { u } => Some(u.clone()),
                _ => None,
            })
            .collect()
    }

    fn count(&self, kind: u8) -> usize {
        self.tags.iter().filter(|t| t.kind() == kind).count()
    }
}

/// A labeled skeleton. Fields are public so that malformed structures can be
/// built and fed to [`GtFrame::recognize`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Skeleton {
    #[serde(rename = "V")]
    pub value_alphabet: Vec<Ordinal>,
    pub depth: usize,
    /// Seeds of the universe at each length.
    pub universe: Vec<Vec<OrdSeq>>,
    #[serde(rename = "attachments")]
    pub nodes: Vec<NodeRecord>,
}

impl Skeleton {
    pub fn node(&self, s: &OrdSeq) -> Option<&NodeRecord> {
        self.nodes
            .binary_search_by(|r| r.node.cmp(s))
            .ok()
            .map(|i| &self.nodes[i])
    }

    pub fn node_mut(&mut self, s: &OrdSeq) -> Option<&mut NodeRecord> {
        let i = self.nodes.binary_search_by(|r| r.node.cmp(s)).ok()?;
        Some(&mut self.nodes[i])
    }

    fn check_compatible(&self, other: &Skeleton) -> Result<()> {
        if self.value_alphabet != other.value_alphabet
            || self.depth != other.depth
            || self.universe != other.universe
        {
            return Err(Error::Params(
                "skeletons use different alphabets, depths, or universes".into(),
            ));
        }
        Ok(())
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph skeleton {\n  root [label=\"<>\"];\n");
        let name = |s: &OrdSeq| {
            if s.is_empty() {
                "root".to_string()
            } else {
                format!("n_{}", s.entries().iter().map(|e| e.to_string()).collect::<Vec<_>>().join("_"))
                    .replace(['^', '*', '+'], "x")
            }
        };
        for r in &self.nodes {
            let n = name(&r.node);
            let _ = writeln!(out, "  {n} [label=\"{}\"];", r.node);
            let _ = writeln!(out, "  {} -> {n};", name(&r.node.restrict(r.node.len() - 1)));
            if r.stem {
                let _ = writeln!(out, "  {n}_stem [label=\"Z\", shape=plaintext];");
                let _ = writeln!(out, "  {n} -> {n}_stem [style=dotted];");
            }
            for (i, t) in r.tags.iter().enumerate() {
                let text = match t {
                    LabelTag::TypeI { gamma } => format!("I {gamma}"),
                    LabelTag::TypeII { s, theta, .. } => format!("II {s} theta={theta}"),
                    LabelTag::TypeIII { u } => format!("III {u}"),
                };
                let _ = writeln!(out, "  {n}_l{i} [label=\"{text}\", shape=box];");
                let _ = writeln!(out, "  {n}_stem -> {n}_l{i};");
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Shared data for all skeletons built over one `S_T`: the node set (the
/// nonempty members of the universe carriers), their type II tags, and the
/// candidate pool for witness search.
#[derive(Debug)]
pub struct GtFrame {
    frame: ReductionFrame,
    nodes: Vec<OrdSeq>,
    type_ii: Vec<LabelTag>,
    seeds: Vec<bool>,
    columns: Vec<Option<Arc<PairSet>>>,
    value_alphabet: Vec<Ordinal>,
    universe: Vec<Vec<OrdSeq>>,
}

impl GtFrame {
    pub fn new(frame: ReductionFrame) -> Result<Self> {
        let seed_set: BTreeSet<OrdSeq> = witnesses_by_length(frame.st())
            .into_values()
            .flatten()
            .collect();
        let nodes: Vec<OrdSeq> = frame
            .pool()
            .seqs()
            .iter()
            .filter(|s| !s.is_empty())
            .cloned()
            .collect();
        let mut type_ii = Vec::with_capacity(nodes.len());
        for s in &nodes {
            let u = frame.universe(s.len()).ok_or(Error::NotInCarrier)?;
            type_ii.push(LabelTag::type_ii(s, u)?);
        }
        let seeds = nodes.iter().map(|s| seed_set.contains(s)).collect();
        let columns = nodes.iter().map(|s| frame.oracle().pairs_for(s)).collect();
        let value_alphabet: BTreeSet<Ordinal> = nodes
            .iter()
            .flat_map(|s| s.entries().iter().cloned())
            .collect();
        let universe = frame
            .universes()
            .iter()
            .map(|u| u.seeds().to_vec())
            .collect();
        Ok(GtFrame {
            frame,
            nodes,
            type_ii,
            seeds,
            columns,
            value_alphabet: value_alphabet.into_iter().collect(),
            universe,
        })
    }

    pub fn reduction(&self) -> &ReductionFrame {
        &self.frame
    }

    pub fn nodes(&self) -> &[OrdSeq] {
        &self.nodes
    }

    pub fn value_alphabet(&self) -> &[Ordinal] {
        &self.value_alphabet
    }

    /// Depth of the skeletons, the length of the longest node.
    pub fn depth(&self) -> usize {
        self.frame.depth() + 1
    }

    fn skeleton_with(&self, attach: impl Fn(usize, &OrdSeq) -> Vec<OrdSeq>) -> Skeleton {
        let nodes = self
            .nodes
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let mut tags = vec![
                    LabelTag::TypeI {
                        gamma: Ordinal::nat(s.len() as u128 - 1),
                    },
                    self.type_ii[i].clone(),
                ];
                tags.extend(attach(i, s).into_iter().map(|u| LabelTag::TypeIII { u }));
                NodeRecord {
                    node: s.clone(),
                    stem: true,
                    seed: self.seeds[i],
                    tags,
                }
            })
            .collect();
        Skeleton {
            value_alphabet: self.value_alphabet.clone(),
            depth: self.depth(),
            universe: self.universe.clone(),
            nodes,
        }
    }

    /// `G_T` for a tree `t` on `2 × Ord`: each node `s` gets type III labels
    /// for the `u` with `(u, s) ∈ t`.
    pub fn build_gt(&self, t: &DstTree) -> Result<Skeleton> {
        let mut attached: Vec<BTreeSet<OrdSeq>> = vec![BTreeSet::new(); self.nodes.len()];
        for node in t.nodes() {
            let [u, s] = node.as_slice() else {
                return Err(Error::Tree("expected a tree on 2 x Ord".into()));
            };
            if s.is_empty() {
                continue;
            }
            if let Some(bad) = s.entries().iter().find(|e| self.value_alphabet.binary_search(e).is_err()) {
                return Err(Error::Skeleton(format!("witness value {bad} is outside the alphabet")));
            }
            let i = self.nodes.binary_search(s).map_err(|_| Error::NotInCarrier)?;
            attached[i].insert(u.clone());
        }
        Ok(self.skeleton_with(|i, _| attached[i].iter().cloned().collect()))
    }

    /// `f(x)`: the skeleton of the section of `S_T` at `x⌢0`.
    pub fn f_reduction(&self, x: &OrdSeq) -> Result<Skeleton> {
        let px = self.frame.pad(x)?;
        Ok(self.skeleton_with(|i, s| {
            let mask = self.column(i, &px.restrict(s.len()));
            (0..1usize << s.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| bits_from_index(i, s.len()))
                .collect()
        }))
    }

    /// `S_T^{v,s}` as a mask, for the node `s` at position `i`.
    fn column(&self, i: usize, v: &OrdSeq) -> u64 {
        match &self.columns[i] {
            Some(p) if p.len() == v.len() => p.column(bits_index(v)),
            _ => 0,
        }
    }

    pub fn g_embeds(&self, a: &Skeleton, b: &Skeleton) -> Result<Option<LipschitzMap>> {
        embed_search(a, b, self.frame.pool())
    }

    /// Evaluates one axiom (or a conjunction) structurally. Malformed
    /// structures make the result `false`.
    pub fn recognize(&self, x: &Skeleton, which: &Axiom) -> bool {
        well_formed(x) && self.recognize_formed(x, which)
    }

    fn recognize_formed(&self, x: &Skeleton, which: &Axiom) -> bool {
        match which {
            Axiom::Phi(i) => self.phi(x, *i),
            Axiom::PhiT => self.phi_t(x),
            Axiom::Psi => (0..=15).all(|i| self.phi(x, i)),
            Axiom::PhiR => {
                self.recognize_formed(x, &Axiom::Psi)
                    && self.zero_stems(x).is_some_and(|ws| ws.windows(2).all(|w| w[0].is_prefix_of(&w[1])))
                    && self.phi_t(x)
            }
            Axiom::PhiRU(u) => {
                self.recognize_formed(x, &Axiom::PhiR)
                    && u.as_bits().is_some()
                    && u.len() < self.depth()
                    && x
                        .node(&OrdSeq::zeros(u.len() + 1))
                        .is_some_and(|r| r.u_set().contains(&u.append(Ordinal::zero())))
            }
        }
    }

    /// One axiom, on a structure already known to be well formed.
    fn phi(&self, x: &Skeleton, i: u8) -> bool {
        match i {
            0 | 1 | 3 => true,
            2 => x.nodes.iter().all(|r| r.stem),
            4 => x.nodes.iter().all(|r| r.count(2) <= 1),
            5 => {
                x.nodes.len() == self.nodes.len()
                    && x.nodes.iter().zip(&self.nodes).enumerate().all(|(i, (r, s))| {
                        r.node == *s && r.count(2) == 1 && r.tags.contains(&self.type_ii[i])
                    })
            }
            6 => x.nodes.iter().all(|r| {
                let parent = &r.node.entries()[..r.node.len() - 1];
                parent.is_empty() || x.nodes.binary_search_by(|q| q.node.entries().cmp(parent)).is_ok()
            }),
            7..=9 => x.nodes.iter().all(|r| {
                r.tags
                    .iter()
                    .all(|t| !matches!(t, LabelTag::TypeIII { u } if u.as_bits().is_none()))
            }),
            10 => x.nodes.iter().all(|r| {
                let us: Vec<&OrdSeq> = r
                    .tags
                    .iter()
                    .filter_map(|t| match t {
                        LabelTag::TypeIII { u } => Some(u),
                        _ => None,
                    })
                    .collect();
                let distinct: BTreeSet<&&OrdSeq> = us.iter().collect();
                distinct.len() == us.len() && us.iter().all(|u| u.len() == r.node.len())
            }),
            11 | 14 => x.nodes.iter().all(|r| r.count(1) == 1),
            12 | 13 => true,
            15 => x.nodes.iter().all(|r| {
                r.tags.iter().all(|t| match t {
                    LabelTag::TypeI { gamma } => *gamma == Ordinal::nat(r.node.len() as u128 - 1),
                    _ => true,
                })
            }),
            16 => self.zero_stems(x).is_some(),
            17 => self.zero_stems(x).is_some_and(|ws| {
                ws.windows(2).all(|w| w[0].is_prefix_of(&w[1]))
            }),
            _ => false,
        }
    }

    /// For each `k`, the `w` with `U` at `0^k` equal to `{w⌢0, w⌢1}`.
    fn zero_stems(&self, x: &Skeleton) -> Option<Vec<OrdSeq>> {
        (1..=self.depth())
            .map(|k| {
                let r = x.node(&OrdSeq::zeros(k))?;
                let us = r.u_set();
                let w = us.first()?.restrict(k - 1);
                let expect: BTreeSet<OrdSeq> = [w.append(Ordinal::zero()), w.append(Ordinal::nat(1))].into();
                (us == expect).then_some(w)
            })
            .collect()
    }

    fn phi_t(&self, x: &Skeleton) -> bool {
        let Some(zeros) = (1..=self.depth())
            .map(|k| x.node(&OrdSeq::zeros(k)).map(|r| r.u_set()))
            .collect::<Option<Vec<_>>>()
        else {
            return false;
        };
        let aligned = x.nodes.len() == self.nodes.len();
        x.nodes.iter().enumerate().all(|(j, r)| {
            let found = if aligned && self.nodes[j] == r.node {
                Ok(j)
            } else {
                self.nodes.binary_search(&r.node)
            };
            let Ok(i) = found else {
                return false;
            };
            let have = r.u_mask();
            r.count(3) == have.count_ones() as usize
                && zeros[r.node.len() - 1].iter().all(|v| self.column(i, v) == have)
        })
    }

    /// `h(X)`: the common stem of the top-level zero node.
    pub fn h_inverse(&self, x: &Skeleton) -> Result<OrdSeq> {
        if !self.recognize(x, &Axiom::PhiR) {
            return Err(Error::Skeleton("structure is not a model of the reduction axioms".into()));
        }
        let ws = self.zero_stems(x).expect("checked by recognition");
        Ok(ws.last().cloned().unwrap_or_default())
    }

    /// One instance of each mutation kind, at nodes where it applies.
    pub fn mutation_catalogue(&self, x: &Skeleton) -> Vec<Mutation> {
        let d = self.depth();
        let first = self.nodes[0].clone();
        let zero = OrdSeq::zeros(d);
        let nonzero = self
            .nodes
            .iter()
            .rev()
            .find(|s| !s.is_zero())
            .cloned()
            .unwrap_or_else(|| first.clone());
        let mut out = vec![
            Mutation::DuplicateTypeII(first.clone()),
            Mutation::DropTypeII(nonzero.clone()),
            Mutation::DropTypeI(first.clone()),
            Mutation::DuplicateTypeI(nonzero.clone()),
            Mutation::ShiftTypeI(nonzero.clone()),
            Mutation::DropStem(nonzero.clone()),
            Mutation::IncoherentU(nonzero.clone()),
            Mutation::ForeignTypeIII(first.clone()),
            Mutation::SecondZeroStem(zero.clone()),
            Mutation::EmptyZero(zero),
        ];
        if let Some(r) = x.nodes.iter().find(|r| !r.node.is_zero() && r.u_mask() != 0) {
            out.push(Mutation::DropTypeIII(r.node.clone()));
        }
        out
    }
}

/// Axiom selector for [`GtFrame::recognize`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Axiom {
    Phi(u8),
    PhiT,
    Psi,
    PhiR,
    /// `φ_R` together with `u` being an initial segment of `h(X)`.
    PhiRU(OrdSeq),
}

/// Witness search for `A ⊑ B`: an injective Lipschitz map on the seed nodes
/// of `A` carrying attached strings along and never decreasing `#`.
fn embed_search(a: &Skeleton, b: &Skeleton, pool: &CandidatePool) -> Result<Option<LipschitzMap>> {
    a.check_compatible(b)?;
    let mut t = DstTree::on_sections(a.depth);
    t.insert(vec![OrdSeq::empty(), OrdSeq::empty()])?;
    for r in a.nodes.iter().filter(|r| r.seed) {
        for u in r.u_set() {
            t.insert(vec![u, r.node.clone()])?;
        }
    }
    let domain = Section::from_tree(&t)?;
    Ok(constrained_search(
        &domain,
        pool,
        |c| {
            if c.is_empty() {
                1
            } else {
                b.node(c).map_or(0, |r| r.u_mask())
            }
        },
        |s, c| {
            if s.is_empty() {
                return true;
            }
            match (a.node(s).and_then(|r| r.sharp()), b.node(c).and_then(|r| r.sharp())) {
                (Some(x), Some(y)) => x <= y,
                _ => false,
            }
        },
    ))
}

/// `A ⊑ B` with candidate images drawn from the nodes of `B`.
pub fn g_embeds(a: &Skeleton, b: &Skeleton) -> Result<Option<LipschitzMap>> {
    let pool = CandidatePool::new(b.nodes.iter().map(|r| r.node.clone()));
    embed_search(a, b, &pool)
}

fn well_formed(x: &Skeleton) -> bool {
    x.nodes.windows(2).all(|w| w[0].node < w[1].node)
        && x.nodes.iter().all(|r| !r.node.is_empty())
        && x.nodes.iter().flat_map(|r| &r.tags).all(|t| t.validate().is_ok())
}

/// Isomorphism: the type III attachments coincide node by node.
pub fn g_iso(a: &Skeleton, b: &Skeleton) -> Result<bool> {
    a.check_compatible(b)?;
    Ok(a.nodes.len() == b.nodes.len()
        && a
            .nodes
            .iter()
            .zip(&b.nodes)
            .all(|(x, y)| x.node == y.node && x.u_set() == y.u_set()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mutation {
    Identity,
    DuplicateTypeII(OrdSeq),
    DropTypeII(OrdSeq),
    DropTypeI(OrdSeq),
    DuplicateTypeI(OrdSeq),
    ShiftTypeI(OrdSeq),
    DropStem(OrdSeq),
    /// Attach a string that `S_T` does not put at this node.
    IncoherentU(OrdSeq),
    /// Attach a string of the wrong length.
    ForeignTypeIII(OrdSeq),
    DropTypeIII(OrdSeq),
    /// Add a second stem `w'⌢0` at a zero node.
    SecondZeroStem(OrdSeq),
    EmptyZero(OrdSeq),
}

pub fn mutate_skeleton(x: &Skeleton, m: &Mutation) -> Skeleton {
    let mut out = x.clone();
    let target = match m {
        Mutation::Identity => return out,
        Mutation::DuplicateTypeII(s)
        | Mutation::DropTypeII(s)
        | Mutation::DropTypeI(s)
        | Mutation::DuplicateTypeI(s)
        | Mutation::ShiftTypeI(s)
        | Mutation::DropStem(s)
        | Mutation::IncoherentU(s)
        | Mutation::ForeignTypeIII(s)
        | Mutation::DropTypeIII(s)
        | Mutation::SecondZeroStem(s)
        | Mutation::EmptyZero(s) => s.clone(),
    };
    let Some(r) = out.node_mut(&target) else {
        return out;
    };
    let n = r.node.len();
    match m {
        Mutation::Identity => {}
        Mutation::DuplicateTypeII(_) => {
            let extra = LabelTag::TypeII {
                s: r.node.append(Ordinal::zero()),
                theta: crate::labels::theta_of(n + 1, 0),
                sharp: 0,
            };
            r.tags.push(extra);
        }
        Mutation::DropTypeII(_) => r.tags.retain(|t| t.kind() != 2),
        Mutation::DropTypeI(_) => r.tags.retain(|t| t.kind() != 1),
        Mutation::DuplicateTypeI(_) => r.tags.push(LabelTag::TypeI {
            gamma: Ordinal::nat(n as u128),
        }),
        Mutation::ShiftTypeI(_) => {
            for t in &mut r.tags {
                if let LabelTag::TypeI { gamma } = t {
                    *gamma = gamma.succ();
                }
            }
        }
        Mutation::DropStem(_) => r.stem = false,
        Mutation::IncoherentU(_) => {
            let mask = r.u_mask();
            match (0..1usize << n).find(|i| mask >> i & 1 == 0) {
                Some(i) => r.tags.push(LabelTag::TypeIII {
                    u: bits_from_index(i, n),
                }),
                None => r.tags.retain(|t| t.kind() != 3),
            }
        }
        Mutation::ForeignTypeIII(_) => r.tags.push(LabelTag::TypeIII {
            u: OrdSeq::from_bits(&vec![1; n + 1]),
        }),
        Mutation::DropTypeIII(_) => {
            if let Some(i) = r.tags.iter().position(|t| t.kind() == 3) {
                r.tags.remove(i);
            }
        }
        Mutation::SecondZeroStem(_) => {
            let current = r.u_set();
            let w = current
                .first()
                .map(|u| u.restrict(n.saturating_sub(1)))
                .unwrap_or_default();
            let flipped: Vec<u8> = (0..n)
                .map(|k| match (k + 1 == n, w.get(k).is_some_and(|e| !e.is_zero())) {
                    (true, _) => 0,
                    (false, bit) => u8::from(!bit),
                })
                .collect();
            let u = OrdSeq::from_bits(&flipped);
            if n == 1 || current.contains(&u) {
                r.tags.retain(|t| t.kind() != 3);
            } else {
                r.tags.push(LabelTag::TypeIII { u });
            }
        }
        Mutation::EmptyZero(_) => r.tags.retain(|t| t.kind() != 3),
    }
    out
}

/// A point of the two-layer structure: a skeleton node, a point of its stem,
/// or a point of one of its attached labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Element {
    Node(OrdSeq),
    Stem(OrdSeq, i64),
    Label(OrdSeq, LabelTag, LabelPoint),
}

impl Element {
    fn node(&self) -> &OrdSeq {
        match self {
            Element::Node(s) | Element::Stem(s, _) | Element::Label(s, _, _) => s,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Schema {
    Seq,
    Root,
    Stem,
    StemIn,
    Min,
    MinStar,
    LabS(OrdSeq),
    LabSIn(OrdSeq),
    SeqS(OrdSeq),
    ImSucc,
    Spine,
    LabIIIIn,
    LabIIIAlpha(u32),
    LabIIIEq(u32),
    LabStar(OrdSeq),
    LabStarStar(OrdSeq),
    LabIIn,
    LabIAlpha(u32),
    LabIEq(u32),
}

fn label_minimum(tag: &LabelTag) -> LabelPoint {
    match tag {
        LabelTag::TypeII { .. } => LabelPoint::Ord(0),
        _ => LabelPoint::Spine(0),
    }
}

fn theta_u32(tag: &LabelTag) -> u32 {
    match tag {
        LabelTag::TypeII { theta, .. } => theta.as_nat().map_or(u32::MAX, |t| t.min(u32::MAX as u128) as u32),
        _ => 0,
    }
}

fn point_valid(tag: &LabelTag, p: &LabelPoint) -> bool {
    match (tag, p) {
        (LabelTag::TypeII { .. }, LabelPoint::Ord(i)) => *i < theta_u32(tag),
        (LabelTag::TypeII { .. }, LabelPoint::Star(_) | LabelPoint::A(_)) => true,
        (LabelTag::TypeI { .. } | LabelTag::TypeIII { .. }, LabelPoint::Spine(_)) => true,
        (LabelTag::TypeI { .. } | LabelTag::TypeIII { .. }, LabelPoint::Pair(a, b)) => b < a,
        (LabelTag::TypeIII { .. }, LabelPoint::Cu) => true,
        _ => false,
    }
}

/// Order inside a label. Distinct nonzero spine points are compared
/// symbolically: the rigid spine order is not materialized, so they count as
/// incomparable.
fn label_leq(p: &LabelPoint, q: &LabelPoint) -> bool {
    use LabelPoint::*;
    if p == q {
        return true;
    }
    match (p, q) {
        (Ord(a), Ord(b)) => a <= b,
        (Star(n), Star(m)) => n >= m,
        (Ord(_), Star(_) | A(_)) | (Star(_), A(_)) => true,
        (A(AsPoint::A), A(AsPoint::APlus | AsPoint::AMinus)) => true,
        (A(AsPoint::B), A(AsPoint::BPlus | AsPoint::BMinus)) => true,
        (Spine(a), Spine(b)) => *a == 0 || a == b,
        (Spine(a), Pair(b, _)) => *a == 0 || a == b,
        (Pair(a, b), Pair(c, d)) => a == c && b <= d,
        (Spine(0), Cu) => true,
        _ => false,
    }
}

fn label_imm_succ(p: &LabelPoint, q: &LabelPoint) -> bool {
    use LabelPoint::*;
    match (p, q) {
        (Ord(i), Ord(j)) => *j == i + 1,
        (Star(n), Star(m)) => *n == m + 1,
        (Star(0), A(AsPoint::A | AsPoint::B)) => true,
        (A(AsPoint::A), A(AsPoint::APlus | AsPoint::AMinus)) => true,
        (A(AsPoint::B), A(AsPoint::BPlus | AsPoint::BMinus)) => true,
        (Spine(a), Pair(b, 0)) => a == b && *a > 0,
        (Pair(a, b), Pair(c, d)) => a == c && *d == b + 1,
        (Spine(0), Cu) => true,
        _ => false,
    }
}

fn label_branching(p: &LabelPoint) -> bool {
    matches!(
        p,
        LabelPoint::Ord(_) | LabelPoint::Star(_) | LabelPoint::A(AsPoint::A | AsPoint::B) | LabelPoint::Spine(_)
    )
}

fn leq(a: &Element, b: &Element) -> bool {
    match (a, b) {
        (Element::Node(s), _) => s.is_prefix_of(b.node()),
        (Element::Stem(s, z), Element::Stem(t, w)) => s == t && z <= w,
        (Element::Stem(s, _), Element::Label(t, _, _)) => s == t,
        (Element::Label(s, x, p), Element::Label(t, y, q)) => s == t && x == y && label_leq(p, q),
        _ => false,
    }
}

fn imm_succ(a: &Element, b: &Element) -> bool {
    match (a, b) {
        (Element::Node(s), Element::Node(t)) => t.len() == s.len() + 1 && s.is_prefix_of(t),
        (Element::Stem(s, z), Element::Stem(t, w)) => s == t && *w == z + 1,
        (Element::Label(s, x, p), Element::Label(t, y, q)) => s == t && x == y && label_imm_succ(p, q),
        _ => false,
    }
}

impl Skeleton {
    fn check_element(&self, e: &Element) -> Result<()> {
        let r = self
            .node(e.node())
            .ok_or_else(|| Error::Dangling(format!("no node {}", e.node())))?;
        match e {
            Element::Node(_) => Ok(()),
            Element::Stem(s, _) => {
                if r.stem {
                    Ok(())
                } else {
                    Err(Error::Dangling(format!("node {s} has no stem")))
                }
            }
            Element::Label(s, tag, p) => {
                if !r.tags.contains(tag) {
                    return Err(Error::Dangling(format!("node {s} carries no label {tag:?}")));
                }
                if !point_valid(tag, p) {
                    return Err(Error::Dangling(format!("{p:?} is not a point of {tag:?}")));
                }
                Ok(())
            }
        }
    }

    /// Evaluates a formula schema at the given elements.
    pub fn eval_schema(&self, schema: &Schema, args: &[Element]) -> Result<bool> {
        for e in args {
            self.check_element(e)?;
        }
        let arity = match schema {
            Schema::Seq | Schema::Stem | Schema::Spine | Schema::SeqS(_) | Schema::LabStarStar(_) => 1,
            Schema::MinStar => 3,
            Schema::LabIIIAlpha(a) | Schema::LabIAlpha(a) => 2 + *a as usize,
            _ => 2,
        };
        if args.len() != arity {
            return Err(Error::Params(format!(
                "{schema:?} takes {arity} arguments, got {}",
                args.len()
            )));
        }
        let in_label_at = |x: &Element, y: &Element, kind: u8| match (x, y) {
            (Element::Node(s), Element::Label(t, tag, _)) => s == t && tag.kind() == kind,
            _ => false,
        };
        let min_of = |x: &Element, y: &Element| match (x, y) {
            (Element::Node(s), Element::Label(t, tag, p)) => s == t && *p == label_minimum(tag),
            _ => false,
        };
        let spine_at = |x: &Element, y: &Element, kind: u8, alpha: u32| {
            in_label_at(x, y, kind)
                && alpha > 0
                && matches!(y, Element::Label(_, _, LabelPoint::Spine(a)) if *a == alpha)
        };
        let chain_ok = |y: &Element, zs: &[Element], alpha: u32| {
            let Element::Label(s, tag, _) = y else { return false };
            zs.iter().enumerate().all(|(i, z)| {
                *z == Element::Label(s.clone(), tag.clone(), LabelPoint::Pair(alpha, i as u32))
            })
        };
        Ok(match schema {
            Schema::Seq => matches!(args[0], Element::Node(_)),
            Schema::Root => {
                matches!(args[0], Element::Node(_))
                    && !matches!(args[1], Element::Node(_))
                    && args[0].node() == args[1].node()
            }
            Schema::Stem => matches!(&args[0], Element::Node(s) if self.node(s).is_some_and(|r| r.stem)),
            Schema::StemIn => matches!((&args[0], &args[1]), (Element::Node(s), Element::Stem(t, _)) if s == t),
            Schema::Min => min_of(&args[0], &args[1]),
            Schema::MinStar => min_of(&args[0], &args[1]) && leq(&args[1], &args[2]),
            Schema::LabS(s) => {
                min_of(&args[0], &args[1])
                    && matches!(&args[1], Element::Label(_, LabelTag::TypeII { s: t, .. }, _) if t == s)
            }
            Schema::LabSIn(s) => {
                in_label_at(&args[0], &args[1], 2)
                    && matches!(&args[1], Element::Label(_, LabelTag::TypeII { s: t, .. }, _) if t == s)
            }
            Schema::SeqS(s) => match &args[0] {
                Element::Node(n) => self.node(n).is_some_and(|r| {
                    r.tags
                        .iter()
                        .any(|t| matches!(t, LabelTag::TypeII { s: t, .. } if t == s))
                }),
                _ => false,
            },
            Schema::ImSucc => imm_succ(&args[0], &args[1]),
            Schema::Spine => match &args[0] {
                Element::Node(_) | Element::Stem(_, _) => true,
                Element::Label(_, _, p) => label_branching(p),
            },
            Schema::LabIIIIn => in_label_at(&args[0], &args[1], 3),
            Schema::LabIIIAlpha(a) => spine_at(&args[0], &args[1], 3, *a) && chain_ok(&args[1], &args[2..], *a),
            Schema::LabIIIEq(a) => spine_at(&args[0], &args[1], 3, *a),
            Schema::LabStar(u) => {
                min_of(&args[0], &args[1])
                    && matches!(&args[1], Element::Label(_, LabelTag::TypeIII { u: v }, _) if v == u)
            }
            Schema::LabStarStar(u) => match &args[0] {
                Element::Node(n) => self.node(n).is_some_and(|r| r.u_set().contains(u)),
                _ => false,
            },
            Schema::LabIIn => in_label_at(&args[0], &args[1], 1),
            Schema::LabIAlpha(a) => spine_at(&args[0], &args[1], 1, *a) && chain_ok(&args[1], &args[2..], *a),
            Schema::LabIEq(a) => spine_at(&args[0], &args[1], 1, *a),
        })
    }
}

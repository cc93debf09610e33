//! Prefix-closed trees of sequence tuples and the normal form `S_T` built
//! from a witnessed quasi-order on bit strings.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt::Write as _;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ordinals::{hes_triple, Ordinal};
use crate::sequences::{oplus_tilde, oplus_tilde_decode, OrdSeq};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Alphabet {
    Bit,
    Ordinal,
}

/// A finite tree of equal-length sequence tuples, closed under taking
/// componentwise initial segments.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawTree")]
pub struct DstTree {
    arity_spec: Vec<Alphabet>,
    depth: usize,
    nodes: BTreeSet<Vec<OrdSeq>>,
}

#[derive(Deserialize)]
struct RawTree {
    arity_spec: Vec<Alphabet>,
    depth: usize,
    nodes: Vec<Vec<OrdSeq>>,
}

impl TryFrom<RawTree> for DstTree {
    type Error = Error;

    fn try_from(raw: RawTree) -> Result<Self> {
        let tree = DstTree {
            arity_spec: raw.arity_spec,
            depth: raw.depth,
            nodes: raw.nodes.into_iter().collect(),
        };
        tree.validate()?;
        Ok(tree)
    }
}

fn node_len(node: &[OrdSeq]) -> usize {
    node.first().map_or(0, OrdSeq::len)
}

fn restrict_node(node: &[OrdSeq], n: usize) -> Vec<OrdSeq> {
    node.iter().map(|s| s.restrict(n)).collect()
}

impl DstTree {
    /// The empty tree (not even a root).
    pub fn new(arity_spec: Vec<Alphabet>, depth: usize) -> Self {
        DstTree {
            arity_spec,
            depth,
            nodes: BTreeSet::new(),
        }
    }

    /// Three-component tree on `2 × 2 × Ord`.
    pub fn on_pairs(depth: usize) -> Self {
        Self::new(vec![Alphabet::Bit, Alphabet::Bit, Alphabet::Ordinal], depth)
    }

    /// Two-component tree on `2 × Ord`.
    pub fn on_sections(depth: usize) -> Self {
        Self::new(vec![Alphabet::Bit, Alphabet::Ordinal], depth)
    }

    pub fn arity_spec(&self) -> &[Alphabet] {
        &self.arity_spec
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn nodes(&self) -> &BTreeSet<Vec<OrdSeq>> {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn contains(&self, node: &[OrdSeq]) -> bool {
        self.nodes.contains(node)
    }

    /// Nodes whose components have length `n`.
    pub fn level(&self, n: usize) -> impl Iterator<Item = &Vec<OrdSeq>> {
        self.nodes.iter().filter(move |v| node_len(v) == n)
    }

    fn check_node(&self, node: &[OrdSeq]) -> Result<()> {
        if node.len() != self.arity_spec.len() {
            return Err(Error::Tree(format!(
                "node has {} components, expected {}",
                node.len(),
                self.arity_spec.len()
            )));
        }
        let n = node_len(node);
        if node.iter().any(|s| s.len() != n) {
            return Err(Error::Tree("components of a node differ in length".into()));
        }
        if n > self.depth {
            return Err(Error::Tree(format!(
                "node of length {n} exceeds depth {}",
                self.depth
            )));
        }
        for (s, a) in node.iter().zip(&self.arity_spec) {
            if *a == Alphabet::Bit && s.as_bits().is_none() {
                return Err(Error::Tree(format!("{s} is not a bit string")));
            }
        }
        Ok(())
    }

    /// Adds a node together with all of its initial segments.
    pub fn insert(&mut self, node: Vec<OrdSeq>) -> Result<()> {
        self.check_node(&node)?;
        let n = node_len(&node);
        for k in (0..n).rev() {
            if !self.nodes.insert(restrict_node(&node, k)) {
                break;
            }
        }
        self.nodes.insert(node);
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        for node in &self.nodes {
            self.check_node(node)?;
            let n = node_len(node);
            if n > 0 && !self.nodes.contains(&restrict_node(node, n - 1)) {
                return Err(Error::Tree(format!(
                    "missing initial segment of {}",
                    render_node(node)
                )));
            }
        }
        Ok(())
    }

    /// Graphviz rendering of the extension order.
    pub fn to_dot(&self) -> String {
        let mut ids = HashMap::new();
        let mut out = String::from("digraph tree {\n");
        for (i, node) in self.nodes.iter().enumerate() {
            ids.insert(node, i);
            let _ = writeln!(out, "  n{i} [label=\"{}\"];", render_node(node));
        }
        for node in &self.nodes {
            let n = node_len(node);
            if n > 0 {
                if let Some(p) = ids.get(&restrict_node(node, n - 1)) {
                    let _ = writeln!(out, "  n{p} -> n{};", ids[node]);
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

fn render_node(node: &[OrdSeq]) -> String {
    let parts: Vec<String> = node.iter().map(|s| s.to_string()).collect();
    format!("({})", parts.join(", "))
}

/// All bit strings of length `n`, in lexicographic order.
pub fn bit_strings(n: usize) -> Vec<OrdSeq> {
    (0..1usize << n).map(|i| bits_from_index(i, n)).collect()
}

/// Inverse of [`bits_index`] at length `n`.
pub fn bits_from_index(i: usize, n: usize) -> OrdSeq {
    let bits: Vec<u8> = (0..n).map(|k| ((i >> (n - 1 - k)) & 1) as u8).collect();
    OrdSeq::from_bits(&bits)
}

/// Position of a bit string among [`bit_strings`] of its length.
pub fn bits_index(u: &OrdSeq) -> usize {
    u.entries()
        .iter()
        .fold(0, |acc, b| 2 * acc + usize::from(!b.is_zero()))
}

/// The witness tree `T'` of a relation on `^depth 2`, using the all-zero
/// witness for every related pair.
pub fn encode_relation(depth: usize, pairs: &BTreeSet<(OrdSeq, OrdSeq)>) -> Result<DstTree> {
    let mut tree = DstTree::on_pairs(depth);
    tree.nodes.insert(vec![OrdSeq::empty(); 3]);
    for (x, y) in pairs {
        if x.len() != depth || y.len() != depth {
            return Err(Error::LengthMismatch(depth, x.len().max(y.len())));
        }
        tree.insert(vec![x.clone(), y.clone(), OrdSeq::zeros(depth)])?;
    }
    Ok(tree)
}

/// `T = {(u, v, Hes₃↑(u, v, s)) : (u, v, s) ∈ T'}`.
pub fn normalize_tree(tprime: &DstTree) -> Result<DstTree> {
    let mut out = DstTree::on_pairs(tprime.depth);
    for node in &tprime.nodes {
        let [u, v, s] = node.as_slice() else {
            return Err(Error::Tree("expected a tree on 2 x 2 x Ord".into()));
        };
        let w: Vec<Ordinal> = (0..s.len())
            .map(|i| hes_triple(&u.entries()[i], &v.entries()[i], &s.entries()[i]))
            .collect();
        out.nodes.insert(vec![u.clone(), v.clone(), OrdSeq::new(w)]);
    }
    Ok(out)
}

/// `T̂ = T ∪ {(u, u, 0^(lh u))}` up to the depth of `T`.
pub fn hat_tree(t: &DstTree) -> DstTree {
    let mut out = t.clone();
    for n in 0..=t.depth {
        for u in bit_strings(n) {
            out.nodes.insert(vec![u.clone(), u, OrdSeq::zeros(n)]);
        }
    }
    out
}

fn last_bits() -> [(Ordinal, Ordinal); 4] {
    let (z, o) = (Ordinal::zero(), Ordinal::nat(1));
    [
        (z.clone(), z.clone()),
        (z.clone(), o.clone()),
        (o.clone(), z.clone()),
        (o.clone(), o),
    ]
}

/// Full-length pairs `(u, v)` of a tree on `2 × 2 × Ord`.
pub fn project_depth(st: &DstTree, depth: usize) -> BTreeSet<(OrdSeq, OrdSeq)> {
    st.level(depth)
        .map(|n| (n[0].clone(), n[1].clone()))
        .collect()
}

/// The relation on `^(depth-1) 2` read off at padded arguments:
/// `x` is related to `y` when `(x⌢0, y⌢0)` has a full-length witness.
pub fn trimmed_relation(st: &DstTree) -> BTreeSet<(OrdSeq, OrdSeq)> {
    let d = st.depth;
    project_depth(st, d)
        .into_iter()
        .filter(|(u, v)| d > 0 && u.entries()[d - 1].is_zero() && v.entries()[d - 1].is_zero())
        .map(|(u, v)| (u.restrict(d - 1), v.restrict(d - 1)))
        .collect()
}

fn shifted_level(prev: &DstTree, n: u128) -> DstTree {
    let mut out = DstTree::on_pairs(prev.depth);
    out.nodes.insert(vec![OrdSeq::empty(); 3]);
    for node in prev.nodes.iter().filter(|v| node_len(v) > 0) {
        let c = &node[2];
        out.nodes.insert(vec![
            node[0].clone(),
            node[1].clone(),
            c.tail().prepend(Ordinal::nat(n + 1)),
        ]);
    }
    let mut by_left: HashMap<(usize, &OrdSeq), Vec<&Vec<OrdSeq>>> = HashMap::new();
    for node in prev.nodes.iter().filter(|v| node_len(v) > 0) {
        by_left.entry((node_len(node), &node[0])).or_default().push(node);
    }
    for a in prev.nodes.iter().filter(|v| node_len(v) > 0) {
        let Some(right) = by_left.get(&(node_len(a), &a[1])) else {
            continue;
        };
        for b in right {
            let c = oplus_tilde(&a[2].tail(), &b[2].tail()).expect("equal lengths");
            out.nodes
                .insert(vec![a[0].clone(), b[1].clone(), c.prepend(Ordinal::nat(n + 1))]);
        }
    }
    out
}

/// The levels `S_0, S_1, …` and their union `S_T`, of depth one more than
/// `T`. Iteration stops at the first level that adds no new full-length
/// pair.
pub fn build_st(t: &DstTree) -> Result<(Vec<DstTree>, DstTree)> {
    let hat = hat_tree(t);
    let depth = t.depth + 1;
    let mut s0 = DstTree::on_pairs(depth);
    s0.nodes.insert(vec![OrdSeq::empty(); 3]);
    for node in &hat.nodes {
        let [u, v, s] = node.as_slice() else {
            return Err(Error::Tree("expected a tree on 2 x 2 x Ord".into()));
        };
        let c = s.prepend(Ordinal::zero());
        for (a, b) in last_bits() {
            s0.nodes
                .insert(vec![u.append(a.clone()), v.append(b), c.clone()]);
        }
    }
    let mut levels = vec![s0];
    let mut union = levels[0].clone();
    loop {
        let before = project_depth(&union, depth);
        let n = levels.len() as u128 - 1;
        let next = shifted_level(levels.last().expect("nonempty"), n);
        union.nodes.extend(next.nodes.iter().cloned());
        levels.push(next);
        if project_depth(&union, depth) == before {
            break;
        }
    }
    Ok((levels, union))
}

/// `{(u, s) : (u, x ↾ lh(u), s) ∈ S_T}`.
pub fn section_st(st: &DstTree, x: &OrdSeq) -> Result<DstTree> {
    if x.len() < st.depth {
        return Err(Error::LengthMismatch(st.depth, x.len()));
    }
    let mut out = DstTree::on_sections(st.depth);
    for node in &st.nodes {
        let n = node_len(node);
        if node[1] == x.restrict(n) {
            out.nodes.insert(vec![node[0].clone(), node[2].clone()]);
        }
    }
    Ok(out)
}

/// The least node of level `budget` together with its initial segments, from
/// the root up; `None` when the tree has no node at that level.
pub fn find_cofinal_branch(t: &DstTree, budget: usize) -> Option<Vec<Vec<OrdSeq>>> {
    let top = t.level(budget).next()?;
    Some((0..=budget).map(|k| restrict_node(top, k)).collect())
}

/// A set of pairs of bit strings of a common length `n ≤ 6`, stored as a
/// `2^n × 2^n` bit matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PairSet {
    len: usize,
    rows: Vec<u64>,
}

impl PairSet {
    pub fn empty(len: usize) -> Self {
        assert!(len <= 6, "pair sets hold strings of length at most 6");
        PairSet {
            len,
            rows: vec![0; 1 << len],
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(|&r| r == 0)
    }

    pub fn insert_index(&mut self, u: usize, v: usize) {
        self.rows[u] |= 1 << v;
    }

    pub fn contains_index(&self, u: usize, v: usize) -> bool {
        self.rows[u] >> v & 1 == 1
    }

    pub fn contains(&self, u: &OrdSeq, v: &OrdSeq) -> bool {
        u.len() == self.len && v.len() == self.len && self.contains_index(bits_index(u), bits_index(v))
    }

    /// Indices `u` with `(u, v)` in the set.
    pub fn column(&self, v: usize) -> u64 {
        self.rows
            .iter()
            .enumerate()
            .filter(|(_, r)| *r >> v & 1 == 1)
            .fold(0, |acc, (u, _)| acc | 1 << u)
    }

    pub fn union_with(&mut self, other: &PairSet) {
        for (a, b) in self.rows.iter_mut().zip(&other.rows) {
            *a |= b;
        }
    }

    /// `{(u, w) : ∃v (u, v) ∈ self ∧ (v, w) ∈ other}`.
    pub fn compose(&self, other: &PairSet) -> PairSet {
        let mut out = PairSet::empty(self.len);
        for (u, row) in self.rows.iter().enumerate() {
            let mut bits = *row;
            while bits != 0 {
                let v = bits.trailing_zeros() as usize;
                out.rows[u] |= other.rows[v];
                bits &= bits - 1;
            }
        }
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows.iter().enumerate().flat_map(|(u, row)| {
            (0..64usize)
                .filter(move |v| row >> v & 1 == 1)
                .map(move |v| (u, v))
        })
    }
}

type MemoKey = (u128, OrdSeq);

/// Exact membership in `S_T` for arbitrary witnesses, computed from the
/// recursion `S_{k} = shift(S_{k-1}) ∪ compose(S_{k-1})` with memoisation on
/// `(k, tail of the witness)`.
#[derive(Debug)]
pub struct StOracle {
    depth: usize,
    by_witness: HashMap<OrdSeq, Vec<(OrdSeq, OrdSeq)>>,
    memo: Mutex<HashMap<MemoKey, Arc<PairSet>>>,
}

impl StOracle {
    /// Builds the oracle for a normalized tree `T`; the resulting `S_T` has
    /// depth `T.depth + 1`.
    pub fn new(t: &DstTree) -> Self {
        let mut by_witness: HashMap<OrdSeq, Vec<(OrdSeq, OrdSeq)>> = HashMap::new();
        for node in &t.nodes {
            by_witness
                .entry(node[2].clone())
                .or_default()
                .push((node[0].clone(), node[1].clone()));
        }
        StOracle {
            depth: t.depth + 1,
            by_witness,
            memo: Mutex::new(HashMap::new()),
        }
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    fn base(&self, tail: &OrdSeq) -> PairSet {
        let len = tail.len() + 1;
        let mut out = PairSet::empty(len);
        let mut prefixes: HashSet<(usize, usize)> = HashSet::new();
        if let Some(pairs) = self.by_witness.get(tail) {
            prefixes.extend(pairs.iter().map(|(u, v)| (bits_index(u), bits_index(v))));
        }
        if tail.is_zero() {
            prefixes.extend((0..1usize << tail.len()).map(|u| (u, u)));
        }
        for (u, v) in prefixes {
            for a in 0..2 {
                for b in 0..2 {
                    out.insert_index(2 * u + a, 2 * v + b);
                }
            }
        }
        out
    }

    /// Pairs `(u, v)` of length `lh(tail) + 1` with `(u, v, k⌢tail) ∈ S_T`.
    pub fn pairs(&self, k: u128, tail: &OrdSeq) -> Arc<PairSet> {
        let key = (k, tail.clone());
        if let Some(hit) = self.memo.lock().expect("memo lock").get(&key) {
            return hit.clone();
        }
        let result = if tail.len() + 1 > self.depth {
            PairSet::empty(0)
        } else if k == 0 {
            self.base(tail)
        } else {
            let mut out = (*self.pairs(k - 1, tail)).clone();
            if let Some((s, t)) = oplus_tilde_decode(tail) {
                let composed = self.pairs(k - 1, &s).compose(&self.pairs(k - 1, &t));
                out.union_with(&composed);
            }
            out
        };
        let result = Arc::new(result);
        self.memo
            .lock()
            .expect("memo lock")
            .insert(key, result.clone());
        result
    }

    /// Pairs `(u, v)` with `(u, v, c) ∈ S_T`, or `None` when no node of
    /// `S_T` can carry the witness `c`.
    pub fn pairs_for(&self, c: &OrdSeq) -> Option<Arc<PairSet>> {
        if c.is_empty() || c.len() > self.depth {
            return None;
        }
        let k = c.entries()[0].as_nat()?;
        Some(self.pairs(k, &c.tail()))
    }

    pub fn contains(&self, u: &OrdSeq, v: &OrdSeq, c: &OrdSeq) -> bool {
        if u.len() != c.len() || v.len() != c.len() {
            return false;
        }
        if c.is_empty() {
            return true;
        }
        self.pairs_for(c).is_some_and(|p| p.contains(u, v))
    }
}

/// Witnesses of a tree on `2 × 2 × Ord`, grouped by length.
pub fn witnesses_by_length(st: &DstTree) -> BTreeMap<usize, BTreeSet<OrdSeq>> {
    let mut out: BTreeMap<usize, BTreeSet<OrdSeq>> = BTreeMap::new();
    for node in &st.nodes {
        let c = node.last().expect("nonempty arity").clone();
        out.entry(c.len()).or_default().insert(c);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ordinals::hes_triple_inverse;
    use crate::sequences::oplus;

    fn b(bits: &[u8]) -> OrdSeq {
        OrdSeq::from_bits(bits)
    }

    /// Every reflexive transitive relation on `n` points, as adjacency bit
    /// masks.
    fn quasi_orders(n: usize) -> Vec<Vec<u32>> {
        let off: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|(i, j)| i != j)
            .collect();
        let mut out = Vec::new();
        for mask in 0u32..1 << off.len() {
            let mut rel: Vec<u32> = (0..n).map(|i| 1 << i).collect();
            for (k, &(i, j)) in off.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    rel[i] |= 1 << j;
                }
            }
            let transitive = (0..n).all(|i| {
                (0..n).all(|j| rel[i] >> j & 1 == 0 || rel[j] & !rel[i] == 0)
            });
            if transitive {
                out.push(rel);
            }
        }
        out
    }

    fn relation(depth: usize, rel: &[u32]) -> BTreeSet<(OrdSeq, OrdSeq)> {
        let pts = bit_strings(depth);
        let mut out = BTreeSet::new();
        for (i, x) in pts.iter().enumerate() {
            for (j, y) in pts.iter().enumerate() {
                if rel[i] >> j & 1 == 1 {
                    out.insert((x.clone(), y.clone()));
                }
            }
        }
        out
    }

    fn st_for(depth: usize, rel: &[u32]) -> (DstTree, DstTree) {
        let t = normalize_tree(&encode_relation(depth, &relation(depth, rel)).unwrap()).unwrap();
        let (_, st) = build_st(&t).unwrap();
        (t, st)
    }

    #[test]
    fn quasi_order_count_on_four_points() {
        assert_eq!(quasi_orders(4).len(), 355);
    }

    #[test]
    fn insert_closes_under_prefixes() {
        let mut t = DstTree::on_pairs(2);
        t.insert(vec![b(&[0, 1]), b(&[1, 1]), OrdSeq::from_nats(&[3, 4])])
            .unwrap();
        assert_eq!(t.len(), 3);
        t.validate().unwrap();
        let mut broken = t.clone();
        broken.nodes.remove(&vec![b(&[0]), b(&[1]), OrdSeq::from_nats(&[3])]);
        assert!(broken.validate().is_err());
        assert!(t.insert(vec![b(&[0]), b(&[2]), OrdSeq::zeros(1)]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let mut t = DstTree::on_pairs(2);
        t.insert(vec![b(&[0, 1]), b(&[1, 1]), OrdSeq::from_nats(&[3, 4])])
            .unwrap();
        let text = serde_json::to_string(&t).unwrap();
        let back: DstTree = serde_json::from_str(&text).unwrap();
        assert_eq!(back, t);
        assert_eq!(serde_json::to_string(&back).unwrap(), text);
        let bad = text.replace("[[],[],[]],", "");
        assert!(serde_json::from_str::<DstTree>(&bad).is_err());
        assert!(t.to_dot().contains("->"));
    }

    #[test]
    fn normalize_examples() {
        let empty = DstTree::on_pairs(1);
        assert!(normalize_tree(&empty).unwrap().is_empty());
        let mut t = DstTree::on_pairs(1);
        t.insert(vec![b(&[0]), b(&[0]), OrdSeq::zeros(1)]).unwrap();
        let n = normalize_tree(&t).unwrap();
        assert!(n.contains(&[b(&[0]), b(&[0]), OrdSeq::zeros(1)]));
        let mut t = DstTree::on_pairs(1);
        t.insert(vec![b(&[0]), b(&[1]), OrdSeq::zeros(1)]).unwrap();
        t.insert(vec![b(&[1]), b(&[0]), OrdSeq::zeros(1)]).unwrap();
        let n = normalize_tree(&t).unwrap();
        let thirds: BTreeSet<_> = n.level(1).map(|v| v[2].clone()).collect();
        assert_eq!(thirds.len(), 2);
        for v in n.level(1) {
            let (x, y, _) = hes_triple_inverse(&v[2].entries()[0]);
            assert_eq!((x, y), (v[0].entries()[0].clone(), v[1].entries()[0].clone()));
        }
    }

    #[test]
    fn hat_examples() {
        let t = DstTree::on_pairs(1);
        let h = hat_tree(&t);
        assert!(h.contains(&[b(&[0]), b(&[0]), OrdSeq::zeros(1)]));
        assert!(h.contains(&[b(&[1]), b(&[1]), OrdSeq::zeros(1)]));
        assert_eq!(hat_tree(&h), h);
        for d in 0..5 {
            let h = hat_tree(&DstTree::on_pairs(d));
            assert_eq!(h.len(), (0..=d).map(|g| 1 << g).sum::<usize>());
        }
    }

    #[test]
    fn empty_relation_gives_identity_after_trimming() {
        let t = normalize_tree(&encode_relation(2, &BTreeSet::new()).unwrap()).unwrap();
        let (_, st) = build_st(&t).unwrap();
        let id: BTreeSet<_> = bit_strings(2).into_iter().map(|x| (x.clone(), x)).collect();
        assert_eq!(trimmed_relation(&st), id);
    }

    #[test]
    fn total_relation_recovered_at_depth_one() {
        let (_, st) = st_for(1, &[0b11, 0b11]);
        assert_eq!(trimmed_relation(&st).len(), 4);
    }

    #[test]
    fn projection_recovers_every_quasi_order() {
        for rel in quasi_orders(4) {
            let (_, st) = st_for(2, &rel);
            assert_eq!(trimmed_relation(&st), relation(2, &rel));
        }
    }

    #[test]
    fn witness_determines_pair() {
        for rel in quasi_orders(4) {
            let (t, _) = st_for(2, &rel);
            let mut seen: HashMap<&OrdSeq, (&OrdSeq, &OrdSeq)> = HashMap::new();
            for v in t.nodes() {
                if let Some(prev) = seen.insert(&v[2], (&v[0], &v[1])) {
                    assert_eq!(prev, (&v[0], &v[1]));
                }
            }
        }
    }

    #[test]
    fn oracle_agrees_with_materialized_levels() {
        for rel in quasi_orders(4).iter().step_by(17) {
            let (t, st) = st_for(2, rel);
            let oracle = StOracle::new(&t);
            for v in st.nodes() {
                assert!(oracle.contains(&v[0], &v[1], &v[2]));
            }
            for c in witnesses_by_length(&st).values().flatten() {
                for u in bit_strings(c.len()) {
                    for w in bit_strings(c.len()) {
                        let node = vec![u.clone(), w.clone(), c.clone()];
                        assert_eq!(oracle.contains(&u, &w, c), st.contains(&node));
                    }
                }
            }
        }
    }

    #[test]
    fn composition_closure_at_full_depth() {
        for rel in quasi_orders(4).iter().step_by(11) {
            let (t, st) = st_for(2, rel);
            let oracle = StOracle::new(&t);
            let full: Vec<&Vec<OrdSeq>> = st.level(3).collect();
            for a in &full {
                for c in full.iter().filter(|c| c[0] == a[1]) {
                    let w = oplus(&a[2], &c[2]).unwrap();
                    assert!(oracle.contains(&a[0], &c[1], &w));
                }
            }
        }
    }

    #[test]
    fn section_examples() {
        let (_, st) = st_for(2, &[1, 2, 4, 8]);
        let x = b(&[1, 0, 0]);
        let sec = section_st(&st, &x).unwrap();
        for g in 0..=3 {
            assert!(sec.contains(&[x.restrict(g), OrdSeq::zeros(g)]));
        }
        let y = b(&[0, 1, 0]);
        let other = section_st(&st, &y).unwrap();
        assert_ne!(sec, other);
        assert!(!other.contains(&[x.restrict(2), OrdSeq::zeros(2)]));
        assert!(section_st(&st, &b(&[1])).is_err());
    }

    #[test]
    fn cofinal_branch_examples() {
        let mut chain = DstTree::on_sections(5);
        chain
            .insert(vec![b(&[0, 0, 0, 0, 0]), OrdSeq::zeros(5)])
            .unwrap();
        let br = find_cofinal_branch(&chain, 5).unwrap();
        assert_eq!(br.len(), 6);
        assert_eq!(br[5], vec![b(&[0, 0, 0, 0, 0]), OrdSeq::zeros(5)]);

        let mut t = DstTree::on_sections(4);
        t.insert(vec![b(&[0, 0]), OrdSeq::zeros(2)]).unwrap();
        t.insert(vec![b(&[0, 1]), OrdSeq::zeros(2)]).unwrap();
        t.insert(vec![b(&[1, 1, 0, 1]), OrdSeq::zeros(4)]).unwrap();
        let br = find_cofinal_branch(&t, 4).unwrap();
        assert!(br.iter().all(|n| t.contains(n)));
        assert_eq!(br[1][0], b(&[1]));

        let mut short = DstTree::on_sections(4);
        short.insert(vec![b(&[1, 1, 1]), OrdSeq::zeros(3)]).unwrap();
        assert_eq!(find_cofinal_branch(&short, 4), None);
    }
}

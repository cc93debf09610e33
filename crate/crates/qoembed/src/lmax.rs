//! The quasi-order `≤_max` on trees over `2 × Ord`: search for injective
//! Lipschitz maps carrying one witnessed tree into another.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::dsttrees::{bits_index, build_st, section_st, witnesses_by_length, DstTree, StOracle};
use crate::error::{Error, Result};
use crate::ordinals::Ordinal;
use crate::sequences::{build_universe, oplus, FiniteUniverse, OrdSeq};

/// A finite, length-preserving, monotone, injective map on sequences.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LipschitzMap {
    assignments: BTreeMap<OrdSeq, OrdSeq>,
}

impl LipschitzMap {
    pub fn new(assignments: BTreeMap<OrdSeq, OrdSeq>) -> Self {
        LipschitzMap { assignments }
    }

    pub fn get(&self, s: &OrdSeq) -> Option<&OrdSeq> {
        self.assignments.get(s)
    }

    pub fn assignments(&self) -> &BTreeMap<OrdSeq, OrdSeq> {
        &self.assignments
    }

    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }

    /// Checks length preservation, monotonicity on assigned pairs, and
    /// injectivity.
    pub fn check_lipschitz(&self) -> Result<()> {
        let mut seen = BTreeSet::new();
        for (s, t) in &self.assignments {
            if s.len() != t.len() {
                return Err(Error::LengthMismatch(s.len(), t.len()));
            }
            if !seen.insert(t) {
                return Err(Error::Params(format!("map is not injective at {t}")));
            }
            for k in 0..s.len() {
                if let Some(img) = self.assignments.get(&s.restrict(k)) {
                    if !img.is_prefix_of(t) {
                        return Err(Error::Params(format!("map is not monotone at {s}")));
                    }
                }
            }
        }
        Ok(())
    }
}

impl Serialize for LipschitzMap {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<(&OrdSeq, &OrdSeq)> = self.assignments.iter().collect();
        pairs.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LipschitzMap {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let pairs = Vec::<(OrdSeq, OrdSeq)>::deserialize(deserializer)?;
        Ok(LipschitzMap {
            assignments: pairs.into_iter().collect(),
        })
    }
}

/// `φ(s) = s ⊕ (ξ ↾ lh s)` on the given domain.
pub fn witness_from_xi<'a>(
    xi: &OrdSeq,
    domain: impl IntoIterator<Item = &'a OrdSeq>,
) -> Result<LipschitzMap> {
    let mut assignments = BTreeMap::new();
    for s in domain {
        if s.len() > xi.len() {
            return Err(Error::LengthMismatch(xi.len(), s.len()));
        }
        assignments.insert(s.clone(), oplus(s, &xi.restrict(s.len()))?);
    }
    Ok(LipschitzMap { assignments })
}

/// A tree on `2 × Ord` indexed by witness: for each witness `s`, the set of
/// `u` with `(u, s)` in the tree as a bit mask over [`bits_index`].
#[derive(Clone, Debug)]
pub struct Section {
    witnesses: Vec<OrdSeq>,
    labels: Vec<u64>,
    children: Vec<Vec<usize>>,
}

impl Section {
    pub fn from_tree(t: &DstTree) -> Result<Self> {
        let mut by_witness: BTreeMap<OrdSeq, u64> = BTreeMap::new();
        for node in t.nodes() {
            let [u, s] = node.as_slice() else {
                return Err(Error::Tree("expected a tree on 2 x Ord".into()));
            };
            if u.len() > 6 {
                return Err(Error::Tree("sections support lengths up to 6".into()));
            }
            *by_witness.entry(s.clone()).or_default() |= 1 << bits_index(u);
        }
        let witnesses: Vec<OrdSeq> = by_witness.keys().cloned().collect();
        let labels: Vec<u64> = by_witness.values().copied().collect();
        let index: HashMap<&OrdSeq, usize> =
            witnesses.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let mut children = vec![Vec::new(); witnesses.len()];
        for (i, s) in witnesses.iter().enumerate() {
            if let Some(n) = s.len().checked_sub(1) {
                if let Some(&p) = index.get(&s.restrict(n)) {
                    children[p].push(i);
                }
            }
        }
        Ok(Section {
            witnesses,
            labels,
            children,
        })
    }

    pub fn witnesses(&self) -> &[OrdSeq] {
        &self.witnesses
    }

    pub fn labels_of(&self, s: &OrdSeq) -> Option<u64> {
        self.witnesses
            .binary_search(s)
            .ok()
            .map(|i| self.labels[i])
    }
}

/// Candidate images for the search: a prefix-closed set of sequences with
/// its child lists.
#[derive(Clone, Debug)]
pub struct CandidatePool {
    seqs: Vec<OrdSeq>,
    index: HashMap<OrdSeq, usize>,
    children: Vec<Vec<usize>>,
}

impl CandidatePool {
    pub fn new(universe: impl IntoIterator<Item = OrdSeq>) -> Self {
        let mut all = BTreeSet::new();
        all.insert(OrdSeq::empty());
        for s in universe {
            for k in 0..s.len() {
                all.insert(s.restrict(k));
            }
            all.insert(s);
        }
        let seqs: Vec<OrdSeq> = all.into_iter().collect();
        let index: HashMap<OrdSeq, usize> =
            seqs.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        let mut children = vec![Vec::new(); seqs.len()];
        for (i, s) in seqs.iter().enumerate() {
            if let Some(n) = s.len().checked_sub(1) {
                children[index[&s.restrict(n)]].push(i);
            }
        }
        CandidatePool {
            seqs,
            index,
            children,
        }
    }

    pub fn len(&self) -> usize {
        self.seqs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seqs.is_empty()
    }

    pub fn contains(&self, s: &OrdSeq) -> bool {
        self.index.contains_key(s)
    }

    /// All members in increasing order, the empty sequence first.
    pub fn seqs(&self) -> &[OrdSeq] {
        &self.seqs
    }

    pub fn at_length(&self, n: usize) -> impl Iterator<Item = &OrdSeq> {
        self.seqs.iter().filter(move |s| s.len() == n)
    }
}

struct Search<'a, L, S> {
    domain: &'a Section,
    pool: &'a CandidatePool,
    target: L,
    side: S,
    labels: Vec<Option<u64>>,
    memo: HashMap<(usize, usize), Option<Vec<usize>>>,
}

impl<L, S> Search<'_, L, S>
where
    L: Fn(&OrdSeq) -> u64,
    S: Fn(&OrdSeq, &OrdSeq) -> bool,
{
    fn target_labels(&mut self, c: usize) -> u64 {
        if let Some(v) = self.labels[c] {
            return v;
        }
        let v = (self.target)(&self.pool.seqs[c]);
        self.labels[c] = Some(v);
        v
    }

    fn feasible(&mut self, s: usize, c: usize) -> bool {
        if let Some(hit) = self.memo.get(&(s, c)) {
            return hit.is_some();
        }
        let result = self.solve(s, c);
        let ok = result.is_some();
        self.memo.insert((s, c), result);
        ok
    }

    fn solve(&mut self, s: usize, c: usize) -> Option<Vec<usize>> {
        let need = self.domain.labels[s];
        if need & !self.target_labels(c) != 0 {
            return None;
        }
        if !(self.side)(&self.domain.witnesses[s], &self.pool.seqs[c]) {
            return None;
        }
        let kids = self.domain.children[s].clone();
        let cands = self.pool.children[c].clone();
        if kids.len() > cands.len() {
            return None;
        }
        let mut owner: HashMap<usize, usize> = HashMap::new();
        let mut assign = vec![usize::MAX; kids.len()];
        for k in 0..kids.len() {
            let mut visited = BTreeSet::new();
            if !self.augment(k, &kids, &cands, &mut owner, &mut assign, &mut visited) {
                return None;
            }
        }
        Some(assign)
    }

    fn augment(
        &mut self,
        k: usize,
        kids: &[usize],
        cands: &[usize],
        owner: &mut HashMap<usize, usize>,
        assign: &mut [usize],
        visited: &mut BTreeSet<usize>,
    ) -> bool {
        let own = self
            .pool
            .index
            .get(&self.domain.witnesses[kids[k]])
            .copied()
            .filter(|c| cands.contains(c));
        for c in own.into_iter().chain(cands.iter().copied()) {
            if visited.contains(&c) || !self.feasible(kids[k], c) {
                continue;
            }
            visited.insert(c);
            let free = match owner.get(&c) {
                None => true,
                Some(&other) => self.augment(other, kids, cands, owner, assign, visited),
            };
            if free {
                owner.insert(c, k);
                assign[k] = c;
                return true;
            }
        }
        false
    }

    fn collect(&self, s: usize, c: usize, out: &mut BTreeMap<OrdSeq, OrdSeq>) {
        out.insert(self.domain.witnesses[s].clone(), self.pool.seqs[c].clone());
        let assign = self.memo[&(s, c)].as_ref().expect("feasible pair");
        for (k, &cc) in self.domain.children[s].iter().zip(assign) {
            self.collect(*k, cc, out);
        }
    }
}

/// Finds an injective Lipschitz `φ` from the witnesses of `domain` into the
/// pool such that every `u` attached to `s` is attached to `φ(s)` by
/// `target`, and `side(s, φ(s))` holds throughout.
///
/// Each witness tries itself as image first. The search is exact: children of a node are matched to children of its
/// image by bipartite matching over memoised feasibility, which captures
/// injectivity because monotone length-preserving maps can only collide on
/// siblings.
pub fn constrained_search<L, S>(
    domain: &Section,
    pool: &CandidatePool,
    target: L,
    side: S,
) -> Option<LipschitzMap>
where
    L: Fn(&OrdSeq) -> u64,
    S: Fn(&OrdSeq, &OrdSeq) -> bool,
{
    if domain.witnesses.is_empty() {
        return Some(LipschitzMap::default());
    }
    let root = *pool.index.get(&OrdSeq::empty())?;
    if !domain.witnesses[0].is_empty() {
        return None;
    }
    let mut search = Search {
        domain,
        pool,
        target,
        side,
        labels: vec![None; pool.len()],
        memo: HashMap::new(),
    };
    if !search.feasible(0, root) {
        return None;
    }
    let mut out = BTreeMap::new();
    search.collect(0, root, &mut out);
    Some(LipschitzMap { assignments: out })
}

fn tree_labels(t: &DstTree) -> Result<HashMap<OrdSeq, u64>> {
    let sec = Section::from_tree(t)?;
    Ok(sec.witnesses.into_iter().zip(sec.labels).collect())
}

/// Decides `T1 ≤_max T2` with images drawn from `universe` (and its
/// prefixes).
pub fn leq_max_search(
    t1: &DstTree,
    t2: &DstTree,
    universe: &BTreeSet<OrdSeq>,
) -> Result<Option<LipschitzMap>> {
    let domain = Section::from_tree(t1)?;
    let target = tree_labels(t2)?;
    let pool = CandidatePool::new(universe.iter().cloned());
    Ok(constrained_search(
        &domain,
        &pool,
        |c| target.get(c).copied().unwrap_or(0),
        |_, _| true,
    ))
}

/// Re-checks a returned map against its defining conditions.
pub fn verify_map<L: Fn(&OrdSeq) -> u64>(
    map: &LipschitzMap,
    domain: &Section,
    target: L,
) -> Result<()> {
    map.check_lipschitz()?;
    for (s, need) in domain.witnesses.iter().zip(&domain.labels) {
        let img = map
            .get(s)
            .ok_or_else(|| Error::Params(format!("map undefined at {s}")))?;
        if need & !target(img) != 0 {
            return Err(Error::Params(format!("label implication fails at {s}")));
        }
    }
    Ok(())
}

/// Everything needed to compare sections of one `S_T`: the tree, its lazy
/// membership oracle, and finite universes per length whose seeds are the
/// witnesses occurring in the materialized `S_T`.
#[derive(Debug)]
pub struct ReductionFrame {
    depth: usize,
    t: DstTree,
    st: DstTree,
    oracle: StOracle,
    universes: Vec<Arc<FiniteUniverse>>,
    pool: CandidatePool,
}

impl ReductionFrame {
    /// `t` is the normalized witness tree of a relation on `^depth 2`.
    pub fn new(t: &DstTree) -> Result<Self> {
        let (_, st) = build_st(t)?;
        let oracle = StOracle::new(t);
        let mut universes = Vec::new();
        for seeds in witnesses_by_length(&st).into_values() {
            universes.push(Arc::new(build_universe(&seeds, 1)?));
        }
        let pool = CandidatePool::new(
            universes
                .iter()
                .flat_map(|u| u.carrier().iter().cloned()),
        );
        Ok(ReductionFrame {
            depth: t.depth(),
            t: t.clone(),
            st,
            oracle,
            universes,
            pool,
        })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn tree(&self) -> &DstTree {
        &self.t
    }

    pub fn st(&self) -> &DstTree {
        &self.st
    }

    pub fn oracle(&self) -> &StOracle {
        &self.oracle
    }

    pub fn pool(&self) -> &CandidatePool {
        &self.pool
    }

    /// Universes indexed by length, from `0` to `depth + 1`.
    pub fn universes(&self) -> &[Arc<FiniteUniverse>] {
        &self.universes
    }

    pub fn universe(&self, len: usize) -> Option<&FiniteUniverse> {
        self.universes.get(len).map(|u| u.as_ref())
    }

    /// `x ⌢ 0`, the argument at which sections of `S_T` are taken.
    pub fn pad(&self, x: &OrdSeq) -> Result<OrdSeq> {
        if x.len() != self.depth {
            return Err(Error::LengthMismatch(self.depth, x.len()));
        }
        Ok(x.append(Ordinal::zero()))
    }

    /// The materialized section `s_T(x⌢0)`.
    pub fn section(&self, x: &OrdSeq) -> Result<DstTree> {
        section_st(&self.st, &self.pad(x)?)
    }

    /// `{u : (u, y⌢0 ↾ lh c, c) ∈ S_T}` as a bit mask, for any witness `c`.
    pub fn exact_labels(&self, padded_y: &OrdSeq, c: &OrdSeq) -> u64 {
        if c.is_empty() {
            return 1;
        }
        match self.oracle.pairs_for(c) {
            Some(p) => p.column(bits_index(&padded_y.restrict(c.len()))),
            None => 0,
        }
    }

    pub fn sharp(&self, c: &OrdSeq) -> Option<usize> {
        let u = self.universes.get(c.len())?;
        u.zeta(c).map(|i| u.sharp_at(i))
    }

    /// Decides `s_T(x) ≤_max s_T(y)`, returning a witness map.
    pub fn leq_max(&self, x: &OrdSeq, y: &OrdSeq) -> Result<Option<LipschitzMap>> {
        let domain = Section::from_tree(&self.section(x)?)?;
        let py = self.pad(y)?;
        Ok(constrained_search(
            &domain,
            &self.pool,
            |c| self.exact_labels(&py, c),
            |_, _| true,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsttrees::{bit_strings, encode_relation, normalize_tree};

    fn b(bits: &[u8]) -> OrdSeq {
        OrdSeq::from_bits(bits)
    }

    fn frame(depth: usize, pairs: &[(&[u8], &[u8])]) -> ReductionFrame {
        let rel: BTreeSet<_> = bit_strings(depth)
            .into_iter()
            .map(|x| (x.clone(), x))
            .chain(pairs.iter().map(|(x, y)| (b(x), b(y))))
            .collect();
        let t = normalize_tree(&encode_relation(depth, &rel).unwrap()).unwrap();
        ReductionFrame::new(&t).unwrap()
    }

    /// All injective Lipschitz maps from the domain witnesses into the pool,
    /// by plain backtracking in length order.
    fn brute_force_exists(
        domain: &Section,
        pool: &CandidatePool,
        target: &dyn Fn(&OrdSeq) -> u64,
    ) -> bool {
        fn go(
            i: usize,
            order: &[usize],
            domain: &Section,
            pool: &CandidatePool,
            target: &dyn Fn(&OrdSeq) -> u64,
            map: &mut BTreeMap<OrdSeq, OrdSeq>,
        ) -> bool {
            let Some(&s) = order.get(i) else {
                return true;
            };
            let w = &domain.witnesses[s];
            let parent = map.get(&w.restrict(w.len().saturating_sub(1))).cloned();
            for c in pool.at_length(w.len()) {
                if parent.as_ref().is_some_and(|p| !p.is_prefix_of(c)) && !w.is_empty() {
                    continue;
                }
                if map.values().any(|v| v == c) {
                    continue;
                }
                if domain.labels[s] & !target(c) != 0 {
                    continue;
                }
                map.insert(w.clone(), c.clone());
                if go(i + 1, order, domain, pool, target, map) {
                    return true;
                }
                map.remove(w);
            }
            false
        }
        let mut order: Vec<usize> = (0..domain.witnesses.len()).collect();
        order.sort_by_key(|&i| domain.witnesses[i].len());
        go(0, &order, domain, pool, target, &mut BTreeMap::new())
    }

    #[test]
    fn identical_trees_give_identity() {
        let f = frame(1, &[(&[0], &[1])]);
        let sec = f.section(&b(&[1])).unwrap();
        let universe: BTreeSet<OrdSeq> = witnesses_by_length(f.st()).into_values().flatten().collect();
        let map = leq_max_search(&sec, &sec, &universe).unwrap().unwrap();
        assert!(map.assignments().iter().all(|(s, t)| s == t));
        map.check_lipschitz().unwrap();
    }

    #[test]
    fn subtree_embeds_identically() {
        let mut small = DstTree::on_sections(2);
        small.insert(vec![b(&[0, 1]), OrdSeq::from_nats(&[0, 0])]).unwrap();
        let mut big = small.clone();
        big.insert(vec![b(&[1, 1]), OrdSeq::from_nats(&[0, 0])]).unwrap();
        big.insert(vec![b(&[1, 1]), OrdSeq::from_nats(&[0, 3])]).unwrap();
        let universe: BTreeSet<OrdSeq> = big.nodes().iter().map(|n| n[1].clone()).collect();
        let map = leq_max_search(&small, &big, &universe).unwrap().unwrap();
        assert!(map.assignments().iter().all(|(s, t)| s == t));
        assert!(leq_max_search(&big, &small, &universe).unwrap().is_none());
    }

    #[test]
    fn non_symmetric_pair_is_separated() {
        let f = frame(1, &[(&[0], &[1])]);
        let (x, y) = (b(&[0]), b(&[1]));
        assert!(f.leq_max(&x, &y).unwrap().is_some());
        assert!(f.leq_max(&y, &x).unwrap().is_none());
        let domain = Section::from_tree(&f.section(&y).unwrap()).unwrap();
        let px = f.pad(&x).unwrap();
        assert!(!brute_force_exists(&domain, f.pool(), &|c| f.exact_labels(&px, c)));
        let domain = Section::from_tree(&f.section(&x).unwrap()).unwrap();
        let py = f.pad(&y).unwrap();
        assert!(brute_force_exists(&domain, f.pool(), &|c| f.exact_labels(&py, c)));
    }

    #[test]
    fn witness_from_xi_examples() {
        let map = witness_from_xi(&OrdSeq::zeros(2), [&OrdSeq::zeros(1)]).unwrap();
        assert_eq!(map.get(&OrdSeq::zeros(1)), Some(&OrdSeq::from_nats(&[1])));
        let s = OrdSeq::from_nats(&[2]);
        let t = OrdSeq::from_nats(&[2, 7]);
        let map = witness_from_xi(&OrdSeq::from_nats(&[1, 4]), [&s, &t]).unwrap();
        map.check_lipschitz().unwrap();
        assert!(witness_from_xi(&OrdSeq::zeros(1), [&t]).is_err());
    }

    #[test]
    fn xi_witness_maps_sections() {
        let f = frame(2, &[(&[0, 0], &[1, 0]), (&[0, 1], &[1, 1]), (&[0, 0], &[1, 1])]);
        for (x, y) in [(b(&[0, 0]), b(&[1, 0])), (b(&[0, 1]), b(&[1, 1]))] {
            let (px, py) = (f.pad(&x).unwrap(), f.pad(&y).unwrap());
            let node = f
                .st()
                .level(3)
                .find(|n| n[0] == px && n[1] == py && n[2].entries()[0].is_zero())
                .unwrap()
                .clone();
            let domain = Section::from_tree(&f.section(&x).unwrap()).unwrap();
            let map = witness_from_xi(&node[2], domain.witnesses()).unwrap();
            verify_map(&map, &domain, |c| f.exact_labels(&py, c)).unwrap();
            for (s, t) in map.assignments() {
                if let (Some(a), Some(b)) = (f.sharp(s), f.sharp(t)) {
                    assert!(a <= b);
                }
            }
        }
    }

    #[test]
    fn search_results_pass_verifier() {
        let f = frame(2, &[(&[0, 0], &[0, 1]), (&[1, 0], &[1, 1])]);
        for x in bit_strings(2) {
            for y in bit_strings(2) {
                let domain = Section::from_tree(&f.section(&x).unwrap()).unwrap();
                let py = f.pad(&y).unwrap();
                if let Some(map) = f.leq_max(&x, &y).unwrap() {
                    verify_map(&map, &domain, |c| f.exact_labels(&py, c)).unwrap();
                }
            }
        }
    }

    #[test]
    fn map_json_round_trip() {
        let map = witness_from_xi(&OrdSeq::zeros(2), [&OrdSeq::zeros(1), &OrdSeq::zeros(2)]).unwrap();
        let text = serde_json::to_string(&map).unwrap();
        assert_eq!(serde_json::from_str::<LipschitzMap>(&text).unwrap(), map);
    }
}

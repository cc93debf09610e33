//! End-to-end runs: quasi-order → `S_T` → skeletons, the tree-to-graph and
//! graph-to-metric encoders, and the named check suites used by the CLI.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dsttrees::{
    bit_strings, build_st, encode_relation, normalize_tree, trimmed_relation, DstTree, StOracle,
};
use crate::embed::{find_embedding, Relation};
use crate::error::{Error, Result};
use crate::groups::{
    all_graphs, check_sixth, check_wil, induced_hom, recover_graph, GraphStruct, Group, Order,
    Word,
};
use crate::gtrees::{g_iso, mutate_skeleton, GtFrame, Skeleton};
use crate::lmax::ReductionFrame;
use crate::sequences::{oplus, OrdSeq};

pub const DEFAULT_SEED: u64 = 20240917;

fn bits_label(s: &OrdSeq) -> String {
    s.as_bits()
        .map(|b| b.iter().map(|x| char::from(b'0' + x)).collect())
        .unwrap_or_else(|| s.to_string())
}

fn parse_bits(s: &str) -> Result<OrdSeq> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            _ => Err(Error::Parse(format!("{s:?} is not a bit string"))),
        })
        .collect::<Result<Vec<u8>>>()
        .map(|b| OrdSeq::from_bits(&b))
}

/// A reflexive transitive relation on the bit strings of length `depth`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawQuasiOrder", into = "RawQuasiOrder")]
pub struct DeskQuasiOrder {
    depth: usize,
    pairs: BTreeSet<(OrdSeq, OrdSeq)>,
}

#[derive(Serialize, Deserialize)]
struct RawQuasiOrder {
    depth: usize,
    pairs: Vec<(String, String)>,
}

impl TryFrom<RawQuasiOrder> for DeskQuasiOrder {
    type Error = Error;

    fn try_from(raw: RawQuasiOrder) -> Result<DeskQuasiOrder> {
        let pairs = raw
            .pairs
            .iter()
            .map(|(u, v)| Ok((parse_bits(u)?, parse_bits(v)?)))
            .collect::<Result<BTreeSet<_>>>()?;
        DeskQuasiOrder::new(raw.depth, pairs)
    }
}

impl From<DeskQuasiOrder> for RawQuasiOrder {
    fn from(r: DeskQuasiOrder) -> Self {
        RawQuasiOrder {
            depth: r.depth,
            pairs: r.pairs.iter().map(|(u, v)| (bits_label(u), bits_label(v))).collect(),
        }
    }
}

impl DeskQuasiOrder {
    pub fn new(depth: usize, pairs: BTreeSet<(OrdSeq, OrdSeq)>) -> Result<DeskQuasiOrder> {
        let points = bit_strings(depth);
        for (u, v) in &pairs {
            for x in [u, v] {
                if x.len() != depth || x.as_bits().is_none() {
                    return Err(Error::QuasiOrder(format!("{x} is not a bit string of length {depth}")));
                }
            }
        }
        for x in &points {
            if !pairs.contains(&(x.clone(), x.clone())) {
                return Err(Error::QuasiOrder(format!("reflexivity fails at {}", bits_label(x))));
            }
        }
        for (u, v) in &pairs {
            for (v2, w) in pairs.range((v.clone(), OrdSeq::empty())..) {
                if v2 != v {
                    break;
                }
                if !pairs.contains(&(u.clone(), w.clone())) {
                    return Err(Error::QuasiOrder(format!(
                        "transitivity fails at {} ≤ {} ≤ {}",
                        bits_label(u),
                        bits_label(v),
                        bits_label(w)
                    )));
                }
            }
        }
        Ok(DeskQuasiOrder { depth, pairs })
    }

    pub fn from_matrix(depth: usize, m: &Relation) -> Result<DeskQuasiOrder> {
        let points = bit_strings(depth);
        if m.len() != points.len() || m.iter().any(|row| row.len() != points.len()) {
            return Err(Error::QuasiOrder(format!("matrix is not {0}×{0}", points.len())));
        }
        let pairs = (0..points.len())
            .flat_map(|i| (0..points.len()).map(move |j| (i, j)))
            .filter(|&(i, j)| m[i][j])
            .map(|(i, j)| (points[i].clone(), points[j].clone()))
            .collect();
        DeskQuasiOrder::new(depth, pairs)
    }

    pub fn identity(depth: usize) -> DeskQuasiOrder {
        let pairs = bit_strings(depth).into_iter().map(|x| (x.clone(), x)).collect();
        DeskQuasiOrder { depth, pairs }
    }

    pub fn total(depth: usize) -> DeskQuasiOrder {
        let pts = bit_strings(depth);
        let pairs = pts.iter().flat_map(|x| pts.iter().map(move |y| (x.clone(), y.clone()))).collect();
        DeskQuasiOrder { depth, pairs }
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn pairs(&self) -> &BTreeSet<(OrdSeq, OrdSeq)> {
        &self.pairs
    }

    pub fn points(&self) -> Vec<OrdSeq> {
        bit_strings(self.depth)
    }

    pub fn leq(&self, x: &OrdSeq, y: &OrdSeq) -> bool {
        self.pairs.contains(&(x.clone(), y.clone()))
    }

    pub fn matrix(&self) -> Relation {
        let pts = self.points();
        pts.iter().map(|x| pts.iter().map(|y| self.leq(x, y)).collect()).collect()
    }

    /// The normalized tree encoding this relation.
    pub fn encoded_tree(&self) -> Result<DstTree> {
        normalize_tree(&encode_relation(self.depth, &self.pairs)?)
    }
}

/// Every quasi-order on `^depth 2`, for `depth ≤ 2`.
pub fn all_quasi_orders(depth: usize) -> Result<Vec<DeskQuasiOrder>> {
    if depth > 2 {
        return Err(Error::Params(format!("exhaustive enumeration needs depth ≤ 2, got {depth}")));
    }
    let n = 1usize << depth;
    let off: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|(i, j)| i != j).collect();
    let mut out = Vec::new();
    for mask in 0u32..1 << off.len() {
        let mut m = vec![vec![false; n]; n];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = true;
        }
        for (k, &(i, j)) in off.iter().enumerate() {
            m[i][j] = mask >> k & 1 == 1;
        }
        let transitive = (0..n)
            .all(|i| (0..n).all(|j| !m[i][j] || (0..n).all(|k| !m[j][k] || m[i][k])));
        if transitive {
            out.push(DeskQuasiOrder::from_matrix(depth, &m)?);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StStructureReport {
    pub witness_determines_pair: bool,
    pub diagonal: bool,
    pub zero_witnesses_diagonal: bool,
    pub composition_closed: bool,
    pub projection: bool,
}

impl StStructureReport {
    pub fn holds(&self) -> bool {
        self.witness_determines_pair
            && self.diagonal
            && self.zero_witnesses_diagonal
            && self.composition_closed
            && self.projection
    }
}

/// The structural properties of `S_T` for the tree encoding `r`.
pub fn st_structure_report(r: &DeskQuasiOrder) -> Result<StStructureReport> {
    let t = r.encoded_tree()?;
    let (_, st) = build_st(&t)?;
    let full = st.depth();

    let mut owner: HashMap<&OrdSeq, (&OrdSeq, &OrdSeq)> = HashMap::new();
    let witness_determines_pair = t
        .nodes()
        .iter()
        .all(|v| *owner.entry(&v[2]).or_insert((&v[0], &v[1])) == (&v[0], &v[1]));

    let diagonal = (0..=full).all(|k| {
        bit_strings(k)
            .into_iter()
            .all(|u| st.contains(&[u.clone(), u, OrdSeq::zeros(k)]))
    });
    let zero_witnesses_diagonal = st
        .level(full)
        .filter(|v| v[2].is_zero())
        .all(|v| v[0].restrict(r.depth) == v[1].restrict(r.depth));

    let oracle = StOracle::new(&t);
    let level: Vec<&Vec<OrdSeq>> = st.level(full).collect();
    let mut composition_closed = true;
    for a in &level {
        for c in level.iter().filter(|c| c[0] == a[1]) {
            let w = oplus(&a[2], &c[2])?;
            composition_closed &= oracle.contains(&a[0], &c[1], &w);
        }
    }
    let projection = trimmed_relation(&st) == *r.pairs();
    Ok(StStructureReport {
        witness_determines_pair,
        diagonal,
        zero_witnesses_diagonal,
        composition_closed,
        projection,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionBundle {
    pub relation: DeskQuasiOrder,
    pub st: DstTree,
    pub skeletons: Vec<Skeleton>,
    pub leq_max: Relation,
    pub g_embeds: Relation,
}

impl ReductionBundle {
    /// Whether the relation, `≤_max` on sections and `g_embeds` on skeletons
    /// are the same matrix.
    pub fn coincide(&self) -> bool {
        let r = self.relation.matrix();
        r == self.leq_max && r == self.g_embeds
    }

    pub fn matrix_text(&self) -> String {
        let pts = self.relation.points();
        let mut s = String::new();
        for (name, m) in [
            ("R", self.relation.matrix()),
            ("leq_max", self.leq_max.clone()),
            ("g_embeds", self.g_embeds.clone()),
        ] {
            let _ = writeln!(s, "{name}:");
            for (i, row) in m.iter().enumerate() {
                let cells: String = row.iter().map(|&b| if b { '1' } else { '0' }).collect();
                let _ = writeln!(s, "  {} {cells}", bits_label(&pts[i]));
            }
        }
        s
    }
}

pub fn build_frame(r: &DeskQuasiOrder) -> Result<GtFrame> {
    GtFrame::new(ReductionFrame::new(&r.encoded_tree()?)?)
}

pub fn run_reduction_on(frame: &GtFrame, r: &DeskQuasiOrder) -> Result<ReductionBundle> {
    let pts = r.points();
    let skeletons = pts.iter().map(|x| frame.f_reduction(x)).collect::<Result<Vec<_>>>()?;
    let mut leq_max = vec![vec![false; pts.len()]; pts.len()];
    let mut g_embeds = leq_max.clone();
    for i in 0..pts.len() {
        for j in 0..pts.len() {
            leq_max[i][j] = frame.reduction().leq_max(&pts[i], &pts[j])?.is_some();
            g_embeds[i][j] = frame.g_embeds(&skeletons[i], &skeletons[j])?.is_some();
        }
    }
    Ok(ReductionBundle {
        relation: r.clone(),
        st: frame.reduction().st().clone(),
        skeletons,
        leq_max,
        g_embeds,
    })
}

pub fn run_reduction(r: &DeskQuasiOrder) -> Result<ReductionBundle> {
    run_reduction_on(&build_frame(r)?, r)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct InverseReport {
    pub inputs: usize,
    pub h_failures: Vec<String>,
    pub recognized: usize,
    pub iso_failures: usize,
    pub mutations: usize,
    pub mutations_accepted: usize,
}

impl InverseReport {
    pub fn holds(&self) -> bool {
        self.h_failures.is_empty() && self.iso_failures == 0 && self.mutations_accepted == 0
    }

    pub fn absorb(&mut self, other: InverseReport) {
        self.inputs += other.inputs;
        self.h_failures.extend(other.h_failures);
        self.recognized += other.recognized;
        self.iso_failures += other.iso_failures;
        self.mutations += other.mutations;
        self.mutations_accepted += other.mutations_accepted;
    }
}

/// `h ∘ f = id` on every point, `f(h(X)) ≅ X` on recognized skeletons of the
/// corpus (images and their mutations), and rejection of every mutation.
pub fn inverse_report(frame: &GtFrame, skeletons: &[Skeleton], points: &[OrdSeq]) -> Result<InverseReport> {
    let mut rep = InverseReport::default();
    for (x, fx) in points.iter().zip(skeletons) {
        rep.inputs += 1;
        let hx = frame.h_inverse(fx).ok();
        if hx.as_ref() != Some(x) {
            rep.h_failures.push(bits_label(x));
        }
        let mut corpus = Vec::new();
        if let Some(hx) = hx {
            corpus.push((hx, fx.clone()));
        }
        for m in frame.mutation_catalogue(fx) {
            let bad = mutate_skeleton(fx, &m);
            rep.mutations += 1;
            if let Ok(h) = frame.h_inverse(&bad) {
                rep.mutations_accepted += 1;
                corpus.push((h, bad));
            }
        }
        for (h, s) in &corpus {
            rep.recognized += 1;
            if !g_iso(&frame.f_reduction(h)?, s)? {
                rep.iso_failures += 1;
            }
        }
    }
    Ok(rep)
}

/// A finite partial order given by its `≤` matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Poset {
    pub leq: Relation,
}

impl Poset {
    pub fn new(leq: Relation) -> Result<Poset> {
        let n = leq.len();
        if leq.iter().any(|row| row.len() != n) {
            return Err(Error::Tree("order matrix is not square".into()));
        }
        for i in 0..n {
            if !leq[i][i] {
                return Err(Error::Tree(format!("not reflexive at {i}")));
            }
            for j in 0..n {
                if i != j && leq[i][j] && leq[j][i] {
                    return Err(Error::Tree(format!("not antisymmetric at ({i}, {j})")));
                }
                for k in 0..n {
                    if leq[i][j] && leq[j][k] && !leq[i][k] {
                        return Err(Error::Tree(format!("not transitive at ({i}, {j}, {k})")));
                    }
                }
            }
        }
        Ok(Poset { leq })
    }

    pub fn len(&self) -> usize {
        self.leq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leq.is_empty()
    }

    /// Whether the predecessors of every point form a chain.
    pub fn is_generalized_tree(&self) -> bool {
        let n = self.len();
        (0..n).all(|x| {
            let below: Vec<usize> = (0..n).filter(|&y| self.leq[y][x]).collect();
            below
                .iter()
                .all(|&a| below.iter().all(|&b| self.leq[a][b] || self.leq[b][a]))
        })
    }

    fn permuted(&self, p: &[usize]) -> Relation {
        let n = self.len();
        let mut m = vec![vec![false; n]; n];
        for i in 0..n {
            for j in 0..n {
                m[p[i]][p[j]] = self.leq[i][j];
            }
        }
        m
    }

    fn canonical(&self) -> Relation {
        let mut perm: Vec<usize> = (0..self.len()).collect();
        let mut best = self.leq.clone();
        permutations(&mut perm, 0, &mut |p| {
            let m = self.permuted(p);
            if m < best {
                best = m;
            }
        });
        best
    }
}

fn permutations(p: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permutations(p, k + 1, f);
        p.swap(k, i);
    }
}

/// Generalized trees on exactly `n` points, one per isomorphism type.
pub fn all_generalized_trees(n: usize) -> Vec<Poset> {
    let off: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|(i, j)| i != j).collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u64..1 << off.len() {
        let mut m = vec![vec![false; n]; n];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = true;
        }
        for (k, &(i, j)) in off.iter().enumerate() {
            m[i][j] = mask >> k & 1 == 1;
        }
        let Ok(p) = Poset::new(m) else { continue };
        if p.is_generalized_tree() && seen.insert(p.canonical()) {
            out.push(p);
        }
    }
    out
}

/// Encodes a generalized tree by its comparability graph.
pub fn tree_to_graph(p: &Poset) -> Result<GraphStruct> {
    if !p.is_generalized_tree() {
        return Err(Error::Tree("predecessor sets are not all chains".into()));
    }
    let n = p.len();
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .filter(|&(a, b)| p.leq[a][b] || p.leq[b][a])
        .collect();
    GraphStruct::new(n, &edges)
}

pub type Rational = Ratio<i64>;

/// A finite metric space with rational distances.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetricCode {
    pub points: usize,
    pub dist: Vec<Vec<Rational>>,
}

impl MetricCode {
    pub fn validate(&self) -> Result<()> {
        let n = self.points;
        if self.dist.len() != n || self.dist.iter().any(|r| r.len() != n) {
            return Err(Error::Params("distance matrix has the wrong shape".into()));
        }
        let zero = Rational::from_integer(0);
        for i in 0..n {
            if self.dist[i][i] != zero {
                return Err(Error::Params(format!("nonzero diagonal at {i}")));
            }
            for j in 0..n {
                if self.dist[i][j] != self.dist[j][i] || (i != j && self.dist[i][j] <= zero) {
                    return Err(Error::Params(format!("bad distance at ({i}, {j})")));
                }
                for k in 0..n {
                    if self.dist[i][k] > self.dist[i][j] + self.dist[j][k] {
                        return Err(Error::Params(format!("triangle inequality fails at ({i}, {j}, {k})")));
                    }
                }
            }
        }
        Ok(())
    }

    /// An injective distance-preserving map into `other`, by backtracking.
    pub fn isometric_embedding(&self, other: &MetricCode) -> Option<Vec<usize>> {
        fn go(i: usize, a: &MetricCode, b: &MetricCode, map: &mut Vec<usize>, used: &mut [bool]) -> bool {
            if i == a.points {
                return true;
            }
            for j in 0..b.points {
                if used[j] || !(0..i).all(|k| a.dist[i][k] == b.dist[j][map[k]]) {
                    continue;
                }
                used[j] = true;
                map.push(j);
                if go(i + 1, a, b, map, used) {
                    return true;
                }
                map.pop();
                used[j] = false;
            }
            false
        }
        let mut map = Vec::new();
        let mut used = vec![false; other.points];
        go(0, self, other, &mut map, &mut used).then_some(map)
    }
}

/// Distance `r0` on edges and `r1` on non-edges, for `0 < r0 < r1 ≤ 2 r0`.
pub fn graph_to_metric(g: &GraphStruct, r0: Rational, r1: Rational) -> Result<MetricCode> {
    let zero = Rational::from_integer(0);
    if !(zero < r0 && r0 < r1 && r1 <= r0 * 2) {
        return Err(Error::Params(format!("need 0 < r0 < r1 ≤ 2·r0, got r0 = {r0}, r1 = {r1}")));
    }
    let n = g.n();
    let dist = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    if a == b {
                        zero
                    } else if g.adjacent(a, b) {
                        r0
                    } else {
                        r1
                    }
                })
                .collect()
        })
        .collect();
    let code = MetricCode { points: n, dist };
    code.validate()?;
    Ok(code)
}

pub fn graphs_upto(n: usize) -> Vec<GraphStruct> {
    (1..=n).flat_map(all_graphs).collect()
}

/// Outcome of a named check suite.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub name: String,
    pub passed: bool,
    pub lines: Vec<String>,
}

pub const SUITES: &[&str] = &[
    "lemma3.2", "reduction", "inverse", "sixth", "orders", "recover", "williams", "wil", "encoders",
];

#[derive(Clone, Debug)]
pub struct SuiteParams {
    pub depth: usize,
    pub seed: u64,
    pub bound: usize,
}

impl Default for SuiteParams {
    fn default() -> Self {
        SuiteParams { depth: 2, seed: DEFAULT_SEED, bound: 2 }
    }
}

pub fn run_suite(name: &str, params: &SuiteParams) -> Result<SuiteReport> {
    let mut lines = Vec::new();
    let passed = match name {
        "lemma3.2" => {
            let mut bad = 0;
            let all = all_quasi_orders(params.depth)?;
            for r in &all {
                if !st_structure_report(r)?.holds() {
                    bad += 1;
                }
            }
            lines.push(format!("{} quasi-orders, {bad} failing", all.len()));
            bad == 0
        }
        "reduction" | "inverse" => {
            let all = all_quasi_orders(params.depth)?;
            let mut bad = 0;
            let mut inv = InverseReport::default();
            for r in &all {
                let frame = build_frame(r)?;
                let bundle = run_reduction_on(&frame, r)?;
                if name == "reduction" {
                    bad += usize::from(!bundle.coincide());
                } else {
                    inv.absorb(inverse_report(&frame, &bundle.skeletons, &r.points())?);
                }
            }
            if name == "reduction" {
                lines.push(format!("{} quasi-orders, {bad} with differing matrices", all.len()));
                bad == 0
            } else {
                lines.push(format!(
                    "{} inputs, {} h failures, {} recognized, {} iso failures, {}/{} mutations accepted",
                    inv.inputs,
                    inv.h_failures.len(),
                    inv.recognized,
                    inv.iso_failures,
                    inv.mutations_accepted,
                    inv.mutations
                ));
                inv.holds()
            }
        }
        "sixth" => {
            let gs = graphs_upto(5);
            let bad = gs.iter().filter(|g| !check_sixth(&crate::groups::build_presentation(g)).holds).count();
            lines.push(format!("{} graphs, {bad} failing", gs.len()));
            bad == 0
        }
        "orders" => {
            let mut bad = 0;
            let gs = graphs_upto(4);
            for g in &gs {
                bad += order_failures(g)?;
            }
            lines.push(format!("{} graphs, {bad} wrong orders", gs.len()));
            bad == 0
        }
        "recover" => {
            let mut bad = 0;
            let gs = graphs_upto(4);
            for g in &gs {
                let group = Group::from_graph(g)?;
                let gens: Vec<Word> = (0..g.n() as u32).map(Word::gen).collect();
                bad += usize::from(recover_graph(&group, &gens)? != *g);
            }
            lines.push(format!("{} graphs, {bad} not recovered", gs.len()));
            bad == 0
        }
        "williams" => {
            let pairs = sample_embeddings(50, params.seed);
            let mut bad = 0;
            for (g, h, e) in &pairs {
                let rep = induced_hom(&Group::from_graph(g)?, &Group::from_graph(h)?, e, 3)?;
                bad += usize::from(!rep.passed());
            }
            lines.push(format!("{} embeddings, {bad} failing", pairs.len()));
            bad == 0
        }
        "wil" => {
            let mut bad = 0;
            let gs: Vec<GraphStruct> = graphs_upto(4).into_iter().filter(|g| g.n() >= 2).collect();
            for g in &gs {
                bad += usize::from(!check_wil(&Group::from_graph(g)?, params.bound, params.seed)?.holds());
            }
            lines.push(format!("{} graphs, {bad} with counterexamples (bounded)", gs.len()));
            bad == 0
        }
        "encoders" => {
            let (t, m) = (encoder_tree_failures(4)?, encoder_metric_failures(4)?);
            lines.push(format!("tree_to_graph: {t} unfaithful pairs; graph_to_metric: {m} failures"));
            t == 0 && m == 0
        }
        _ => {
            return Err(Error::Params(format!(
                "unknown suite {name:?}; expected one of {}",
                SUITES.join(", ")
            )))
        }
    };
    Ok(SuiteReport { name: name.to_string(), passed, lines })
}

/// Generators of order 7 and `v_α v_β` of order 11 or 13 per adjacency.
pub fn order_failures(g: &GraphStruct) -> Result<usize> {
    let group = Group::from_graph(g)?;
    let mut bad = 0;
    for a in 0..g.n() {
        bad += usize::from(group.order(&Word::gen(a as u32))? != Order::Finite(7));
        for b in (0..g.n()).filter(|&b| b != a) {
            let want = Order::Finite(if g.adjacent(a, b) { 11 } else { 13 });
            let p = Word::gen(a as u32).concat(&Word::gen(b as u32));
            bad += usize::from(group.order(&p)? != want);
        }
    }
    Ok(bad)
}

/// `n` seeded samples of induced embeddings among graphs on at most 4
/// vertices.
pub fn sample_embeddings(n: usize, seed: u64) -> Vec<(GraphStruct, GraphStruct, Vec<usize>)> {
    let gs = graphs_upto(4);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < n {
        let g = gs.choose(&mut rng).expect("nonempty");
        let h = gs.choose(&mut rng).expect("nonempty");
        if g.n() > h.n() {
            continue;
        }
        let mut targets: Vec<usize> = (0..h.n()).collect();
        targets.shuffle(&mut rng);
        let mut found = None;
        permutations(&mut targets, 0, &mut |p| {
            if found.is_none() && g.is_embedding(h, &p[..g.n()]) {
                found = Some(p[..g.n()].to_vec());
            }
        });
        if let Some(e) = found {
            out.push((g.clone(), h.clone(), e));
        }
    }
    out
}

fn graph_embeds(a: &GraphStruct, b: &GraphStruct) -> bool {
    find_embedding(&a.relation(), &b.relation()).is_some()
}

/// Pairs of generalized trees on at most `n` points where poset embedding
/// and graph embedding of the encodings disagree.
pub fn encoder_tree_failures(n: usize) -> Result<usize> {
    let trees: Vec<Poset> = (1..=n).flat_map(all_generalized_trees).collect();
    let graphs = trees.iter().map(tree_to_graph).collect::<Result<Vec<_>>>()?;
    let mut bad = 0;
    for (x, gx) in trees.iter().zip(&graphs) {
        for (y, gy) in trees.iter().zip(&graphs) {
            let posets = find_embedding(&x.leq, &y.leq).is_some();
            bad += usize::from(posets != graph_embeds(gx, gy));
        }
    }
    Ok(bad)
}

/// Graphs on at most `n` vertices whose metric code is invalid, plus pairs
/// where isometric embedding and graph embedding disagree.
pub fn encoder_metric_failures(n: usize) -> Result<usize> {
    let (r0, r1) = (Rational::from_integer(1), Rational::from_integer(2));
    let gs = graphs_upto(n);
    let codes = gs.iter().map(|g| graph_to_metric(g, r0, r1)).collect::<Result<Vec<_>>>()?;
    let mut bad = 0;
    for (g, cg) in gs.iter().zip(&codes) {
        for (h, ch) in gs.iter().zip(&codes) {
            bad += usize::from(cg.isometric_embedding(ch).is_some() != graph_embeds(g, h));
        }
    }
    Ok(bad)
}

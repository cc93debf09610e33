//! The three label families attached to skeleton stems, their comparison
//! algebra, and finite miniatures of the concrete label posets.
//!
//! Spines of type I and type III labels are rigid linear orders that cannot
//! be realized at finite size; they are represented by [`SpineHandle`]s that
//! embed into each other only when identical.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::embed::Relation;
use crate::error::{Error, Result};
use crate::ordinals::{hes_pair, Ordinal};
use crate::sequences::{sharp, FiniteUniverse, OrdSeq};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum LabelTag {
    TypeI { gamma: Ordinal },
    TypeII { s: OrdSeq, theta: Ordinal, sharp: usize },
    TypeIII { u: OrdSeq },
}

impl LabelTag {
    /// The type II tag of `s`, with `θ(s) = Hes(lh s, # s)`.
    pub fn type_ii(s: &OrdSeq, universe: &FiniteUniverse) -> Result<LabelTag> {
        let k = sharp(s, universe)?;
        Ok(LabelTag::TypeII {
            s: s.clone(),
            theta: theta_of(s.len(), k),
            sharp: k,
        })
    }

    pub fn type_iii(u: &OrdSeq) -> Result<LabelTag> {
        let tag = LabelTag::TypeIII { u: u.clone() };
        tag.validate()?;
        Ok(tag)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            LabelTag::TypeI { .. } => Ok(()),
            LabelTag::TypeII { s, theta, sharp } => {
                if theta.as_nat() != Some(theta_nat(s.len(), *sharp)) {
                    return Err(Error::Label(format!(
                        "theta {theta} of {s} does not match Hes({}, {sharp})",
                        s.len()
                    )));
                }
                Ok(())
            }
            LabelTag::TypeIII { u } => {
                if u.is_empty() || u.as_bits().is_none() {
                    return Err(Error::Label(format!(
                        "type III index {u} must be a nonempty bit string"
                    )));
                }
                Ok(())
            }
        }
    }

    pub fn kind(&self) -> u8 {
        match self {
            LabelTag::TypeI { .. } => 1,
            LabelTag::TypeII { .. } => 2,
            LabelTag::TypeIII { .. } => 3,
        }
    }
}

pub fn theta_of(len: usize, sharp: usize) -> Ordinal {
    hes_pair(&Ordinal::nat(len as u128), &Ordinal::nat(sharp as u128))
}

/// `theta_of` in integer arithmetic, for validating tags without building
/// ordinals.
fn theta_nat(len: usize, sharp: usize) -> u128 {
    let (a, b) = (len as u128, sharp as u128);
    if a < b {
        b * b + a
    } else {
        a * a + a + b
    }
}

/// Stand-in for a rigid spine: handles embed iff they are identical.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SpineHandle {
    I(Ordinal),
    III(OrdSeq),
}

impl SpineHandle {
    pub fn embeds(&self, other: &SpineHandle) -> bool {
        self == other
    }

    pub fn of(tag: &LabelTag) -> Option<SpineHandle> {
        match tag {
            LabelTag::TypeI { gamma } => Some(SpineHandle::I(gamma.clone())),
            LabelTag::TypeIII { u } => Some(SpineHandle::III(u.clone())),
            LabelTag::TypeII { .. } => None,
        }
    }
}

/// Whether the label of `a` embeds into the label of `b`.
///
/// Type II labels of different lengths compare by `θ`, since their concrete
/// structures differ only in the length of the ordinal chain below the fixed
/// gadget.
pub fn label_embeds(a: &LabelTag, b: &LabelTag) -> Result<bool> {
    a.validate()?;
    b.validate()?;
    Ok(match (a, b) {
        (LabelTag::TypeII { s, theta: ta, sharp: ka }, LabelTag::TypeII { s: t, theta: tb, sharp: kb }) => {
            if s == t && ka != kb {
                return Err(Error::Label(format!(
                    "{s} carries sharps {ka} and {kb} from incompatible universes"
                )));
            }
            if s.len() == t.len() {
                ka <= kb
            } else {
                ta <= tb
            }
        }
        _ => match (SpineHandle::of(a), SpineHandle::of(b)) {
            (Some(x), Some(y)) => x.embeds(&y),
            _ => false,
        },
    })
}

pub fn label_iso(a: &LabelTag, b: &LabelTag) -> Result<bool> {
    label_embeds(a, b)?;
    Ok(a == b)
}

/// Points of a label miniature.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LabelPoint {
    Spine(u32),
    Pair(u32, u32),
    Cu,
    Ord(u32),
    Star(u32),
    A(AsPoint),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AsPoint {
    A,
    APlus,
    AMinus,
    B,
    BPlus,
    BMinus,
}

/// A finite partial order given by its (reflexive) order matrix. Points
/// marked symbolic sit at a truncation boundary of an infinite part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinitePoset {
    pub points: Vec<LabelPoint>,
    pub leq: Relation,
    pub symbolic: Vec<bool>,
}

impl FinitePoset {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn index_of(&self, p: &LabelPoint) -> Option<usize> {
        self.points.iter().position(|q| q == p)
    }

    pub fn is_partial_order(&self) -> bool {
        let n = self.len();
        (0..n).all(|i| self.leq[i][i])
            && (0..n).all(|i| (0..n).all(|j| i == j || !(self.leq[i][j] && self.leq[j][i])))
            && (0..n).all(|i| {
                (0..n).all(|j| (0..n).all(|k| !(self.leq[i][j] && self.leq[j][k]) || self.leq[i][k]))
            })
    }

    pub fn comparable(&self, i: usize, j: usize) -> bool {
        self.leq[i][j] || self.leq[j][i]
    }

    pub fn is_chain(&self, set: &[usize]) -> bool {
        set.iter().all(|&i| set.iter().all(|&j| self.comparable(i, j)))
    }

    /// Every set of predecessors is linearly ordered.
    pub fn is_generalized_tree(&self) -> bool {
        (0..self.len()).all(|x| {
            let pred: Vec<usize> = (0..self.len()).filter(|&y| self.leq[y][x]).collect();
            self.is_chain(&pred)
        })
    }

    pub fn cone(&self, x: usize) -> Vec<usize> {
        (0..self.len()).filter(|&y| self.leq[x][y]).collect()
    }

    pub fn immediate_successors(&self, x: usize) -> Vec<usize> {
        let above: Vec<usize> = (0..self.len())
            .filter(|&y| y != x && self.leq[x][y])
            .collect();
        above
            .iter()
            .copied()
            .filter(|&y| !above.iter().any(|&z| z != y && self.leq[z][y]))
            .collect()
    }

    pub fn minimum(&self) -> Option<usize> {
        (0..self.len()).find(|&m| (0..self.len()).all(|y| self.leq[m][y]))
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph label {\n");
        for (i, p) in self.points.iter().enumerate() {
            let style = if self.symbolic[i] { ", style=dashed" } else { "" };
            let _ = writeln!(out, "  p{i} [label=\"{p:?}\"{style}];");
        }
        for x in 0..self.len() {
            for y in self.immediate_successors(x) {
                let _ = writeln!(out, "  p{x} -> p{y};");
            }
        }
        out.push_str("}\n");
        out
    }
}

fn poset_from(points: Vec<LabelPoint>, symbolic: Vec<bool>, rel: impl Fn(&LabelPoint, &LabelPoint) -> bool) -> FinitePoset {
    let leq = points
        .iter()
        .map(|p| points.iter().map(|q| p == q || rel(p, q)).collect())
        .collect();
    FinitePoset {
        points,
        leq,
        symbolic,
    }
}

/// A finite miniature of the label of `tag`.
///
/// Type II: the chain `θ`, then `ω*` cut to `stub` points, then the six
/// points `a, a±, b, b±`. Types I and III: a spine cut to `stub` points with
/// the pairs `(α, β)`, `β < α`, above each spine point; type III adds `c_u`
/// above the minimum. The last spine point and the deepest `n*` are marked
/// symbolic.
pub fn build_concrete_label(tag: &LabelTag, stub: u32) -> Result<FinitePoset> {
    tag.validate()?;
    match tag {
        LabelTag::TypeII { theta, .. } => {
            let th = theta
                .as_nat()
                .and_then(|t| u32::try_from(t).ok())
                .ok_or_else(|| Error::Label(format!("theta {theta} is too large for a miniature")))?;
            let mut points: Vec<LabelPoint> = (0..th).map(LabelPoint::Ord).collect();
            points.extend((0..stub).map(LabelPoint::Star));
            points.extend(
                [AsPoint::A, AsPoint::APlus, AsPoint::AMinus, AsPoint::B, AsPoint::BPlus, AsPoint::BMinus]
                    .map(LabelPoint::A),
            );
            let symbolic = points
                .iter()
                .map(|p| stub > 0 && *p == LabelPoint::Star(stub - 1))
                .collect();
            Ok(poset_from(points, symbolic, |p, q| {
                use LabelPoint::*;
                match (p, q) {
                    (Ord(a), Ord(b)) => a <= b,
                    (Star(n), Star(m)) => n >= m,
                    (Ord(_), Star(_) | A(_)) | (Star(_), A(_)) => true,
                    (A(AsPoint::A), A(AsPoint::APlus | AsPoint::AMinus)) => true,
                    (A(AsPoint::B), A(AsPoint::BPlus | AsPoint::BMinus)) => true,
                    _ => false,
                }
            }))
        }
        LabelTag::TypeI { .. } | LabelTag::TypeIII { .. } => {
            let mut points: Vec<LabelPoint> = (0..stub).map(LabelPoint::Spine).collect();
            for a in 1..stub {
                points.extend((0..a).map(|b| LabelPoint::Pair(a, b)));
            }
            if matches!(tag, LabelTag::TypeIII { .. }) {
                points.push(LabelPoint::Cu);
            }
            let symbolic = points
                .iter()
                .map(|p| stub > 0 && *p == LabelPoint::Spine(stub - 1))
                .collect();
            Ok(poset_from(points, symbolic, |p, q| {
                use LabelPoint::*;
                match (p, q) {
                    (Spine(a), Spine(b)) => a <= b,
                    (Spine(a), Pair(b, _)) => a <= b,
                    (Pair(a, b), Pair(c, d)) => a == c && b <= d,
                    (Spine(0), Cu) => true,
                    _ => false,
                }
            }))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embed::embeds;
    use crate::sequences::build_universe;
    use std::collections::BTreeSet;

    #[test]
    fn theta_nat_matches_ordinal_pairing() {
        for len in 0..12 {
            for sharp in 0..200 {
                assert_eq!(Ordinal::nat(theta_nat(len, sharp)), theta_of(len, sharp));
            }
        }
    }

    fn ii(s: &[u128], sharp: usize) -> LabelTag {
        let s = OrdSeq::from_nats(s);
        LabelTag::TypeII {
            theta: theta_of(s.len(), sharp),
            s,
            sharp,
        }
    }

    fn iii(bits: &[u8]) -> LabelTag {
        LabelTag::type_iii(&OrdSeq::from_bits(bits)).unwrap()
    }

    fn i(g: u128) -> LabelTag {
        LabelTag::TypeI {
            gamma: Ordinal::nat(g),
        }
    }

    #[test]
    fn embeds_examples() {
        assert!(!label_embeds(&i(3), &ii(&[0], 0)).unwrap());
        assert!(label_embeds(&ii(&[0], 2), &ii(&[1], 5)).unwrap());
        assert!(!label_embeds(&ii(&[1], 5), &ii(&[0], 2)).unwrap());
        assert!(!label_embeds(&iii(&[0, 1]), &iii(&[1, 1])).unwrap());
        assert!(label_embeds(&i(2), &i(2)).unwrap());
        assert!(!label_embeds(&i(2), &i(3)).unwrap());
        assert!(!label_embeds(&i(1), &iii(&[1])).unwrap());
    }

    #[test]
    fn iso_examples() {
        assert!(label_iso(&ii(&[3], 1), &ii(&[3], 1)).unwrap());
        assert!(!label_iso(&ii(&[3], 1), &ii(&[4], 2)).unwrap());
        assert!(!label_iso(&i(2), &iii(&[0])).unwrap());
    }

    #[test]
    fn invalid_tags_rejected() {
        let bad = LabelTag::TypeII {
            s: OrdSeq::from_nats(&[1]),
            theta: Ordinal::nat(99),
            sharp: 0,
        };
        assert!(label_embeds(&bad, &bad).is_err());
        assert!(label_embeds(&ii(&[1], 0), &ii(&[1], 3)).is_err());
        assert!(LabelTag::type_iii(&OrdSeq::empty()).is_err());
        assert!(LabelTag::type_iii(&OrdSeq::from_nats(&[2])).is_err());
    }

    #[test]
    fn type_ii_from_universe() {
        let seeds: BTreeSet<_> = [OrdSeq::from_nats(&[0])].into();
        let u = build_universe(&seeds, 1).unwrap();
        let tag = LabelTag::type_ii(&OrdSeq::from_nats(&[1]), &u).unwrap();
        assert_eq!(
            tag,
            LabelTag::TypeII {
                s: OrdSeq::from_nats(&[1]),
                theta: Ordinal::nat(3),
                sharp: 1
            }
        );
        assert!(LabelTag::type_ii(&OrdSeq::from_nats(&[7]), &u).is_err());
    }

    #[test]
    fn type_ii_miniature_shape() {
        let p = build_concrete_label(&ii(&[0, 0], 0), 3).unwrap();
        assert_eq!(theta_of(2, 0), Ordinal::nat(6));
        let p2 = build_concrete_label(&ii(&[0], 1), 3).unwrap();
        assert_eq!(theta_of(1, 1), Ordinal::nat(3));
        assert_eq!(p.len(), 6 + 3 + 6);
        assert_eq!(p2.len(), 3 + 3 + 6);
        let two = LabelTag::TypeII {
            s: OrdSeq::from_nats(&[0]),
            theta: theta_of(1, 0),
            sharp: 0,
        };
        let p = build_concrete_label(&two, 3).unwrap();
        assert_eq!(p.len(), 11);
        assert!(p.is_partial_order() && p.is_generalized_tree());
        for a in 0..2 {
            for n in 0..3 {
                let x = p.index_of(&LabelPoint::Ord(a)).unwrap();
                let y = p.index_of(&LabelPoint::Star(n)).unwrap();
                assert!(p.leq[x][y]);
                for q in [AsPoint::A, AsPoint::BMinus] {
                    assert!(p.leq[y][p.index_of(&LabelPoint::A(q)).unwrap()]);
                }
            }
        }
        let a = p.index_of(&LabelPoint::A(AsPoint::A)).unwrap();
        let b = p.index_of(&LabelPoint::A(AsPoint::B)).unwrap();
        assert!(!p.comparable(a, b));
        assert!(!p.is_chain(&p.cone(a)) && !p.is_chain(&p.cone(b)));
    }

    #[test]
    fn type_i_and_iii_miniatures() {
        let p = build_concrete_label(&i(2), 5).unwrap();
        assert!(p.is_partial_order() && p.is_generalized_tree());
        for x in 0..p.len() {
            if p.symbolic[x] {
                continue;
            }
            let spine = matches!(p.points[x], LabelPoint::Spine(_));
            assert_eq!(spine, !p.is_chain(&p.cone(x)));
        }
        let q = build_concrete_label(&iii(&[1, 0]), 5).unwrap();
        assert!(q.is_partial_order() && q.is_generalized_tree());
        let cu = q.index_of(&LabelPoint::Cu).unwrap();
        let min = q.minimum().unwrap();
        assert!(q.immediate_successors(min).contains(&cu));
        assert!(q.immediate_successors(cu).is_empty());
        for x in 0..q.len() {
            if x != cu && x != min {
                assert!(!q.comparable(x, cu));
            }
        }
    }

    #[test]
    fn type_ii_embedding_matches_brute_force() {
        let tags: Vec<LabelTag> = (0..4).flat_map(|k| [ii(&[0], k), ii(&[0, 1], k)]).collect();
        for a in &tags {
            for b in &tags {
                let ta = a.clone();
                let (LabelTag::TypeII { theta: x, .. }, LabelTag::TypeII { theta: y, .. }) = (&ta, b) else {
                    unreachable!()
                };
                if x.as_nat().unwrap() > 6 || y.as_nat().unwrap() > 6 {
                    continue;
                }
                let pa = build_concrete_label(a, 2).unwrap();
                let pb = build_concrete_label(b, 2).unwrap();
                let same_s = matches!((a, b), (LabelTag::TypeII { s, .. }, LabelTag::TypeII { s: t, .. }) if s == t);
                if same_s && a != b {
                    continue;
                }
                assert_eq!(embeds(&pa.leq, &pb.leq), label_embeds(a, b).unwrap(), "{a:?} {b:?}");
            }
        }
    }

    #[test]
    fn tag_json_round_trip() {
        for tag in [i(3), ii(&[2, 0], 1), iii(&[1, 1, 0])] {
            let text = serde_json::to_string(&tag).unwrap();
            assert_eq!(serde_json::from_str::<LabelTag>(&text).unwrap(), tag);
        }
    }
}

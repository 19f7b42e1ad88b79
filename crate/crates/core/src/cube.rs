//! Halfspace combinatorics of the universal cover of the Salvetti complex.
//!
//! Vertices are group elements, edges join `g` to `g·v`. The hyperplane dual
//! to the edge `(g, g·v)` is the orbit of that edge under the link parabolic
//! `⟨lk(v)⟩`, so it is named by `v` together with the minimal representative
//! of `g·⟨lk(v)⟩`. A halfspace adds a sign: `Plus` is the side containing
//! `base·v`, `Minus` the side containing `base`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::raag::{
    double_coset_split, same_graph, strip_parabolic_right, Gen, GroupElement, Heap, Letter,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn as_int(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_int(s: i64) -> Option<Sign> {
        match s {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Hyperplane {
    label: Gen,
    base: GroupElement,
}

impl Hyperplane {
    /// The hyperplane dual to the edge `(g, g·label)`.
    pub fn dual_to(g: &GroupElement, label: Gen) -> Hyperplane {
        let base = strip_parabolic_right(g, g.raag().link(label));
        Hyperplane { label, base }
    }

    pub fn label(&self) -> Gen {
        self.label
    }

    pub fn base(&self) -> &GroupElement {
        &self.base
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Halfspace {
    hyperplane: Hyperplane,
    sign: Sign,
}

impl fmt::Display for Halfspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.sign == Sign::Plus { "+" } else { "-" };
        write!(f, "{}{}@[{}]", s, self.base().raag().name(self.label()), self.base())
    }
}

impl Halfspace {
    /// Halfspace of the hyperplane dual to `(g, g·label)`; `g` need not be
    /// the minimal coset representative.
    pub fn new(label: Gen, g: &GroupElement, sign: Sign) -> Halfspace {
        Halfspace { hyperplane: Hyperplane::dual_to(g, label), sign }
    }

    pub fn hyperplane(&self) -> &Hyperplane {
        &self.hyperplane
    }

    pub fn label(&self) -> Gen {
        self.hyperplane.label
    }

    pub fn base(&self) -> &GroupElement {
        &self.hyperplane.base
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn complement(&self) -> Halfspace {
        Halfspace { hyperplane: self.hyperplane.clone(), sign: self.sign.flip() }
    }

    /// Endpoints of the canonical dual edge, `(base, base·label)`.
    pub fn canonical_edge(&self) -> (GroupElement, GroupElement) {
        let b = self.base().clone();
        let t = b.mul_word(&[Letter::pos(self.label())]);
        (b, t)
    }

    /// Vertex of the canonical edge lying in this halfspace.
    pub fn inside_vertex(&self) -> GroupElement {
        let (b, t) = self.canonical_edge();
        match self.sign {
            Sign::Plus => t,
            Sign::Minus => b,
        }
    }

    pub fn outside_vertex(&self) -> GroupElement {
        self.complement().inside_vertex()
    }
}

pub fn complement(phi: &Halfspace) -> Halfspace {
    phi.complement()
}

/// How two halfspaces sit relative to each other. Exactly one holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum HalfspaceRelation {
    Equal,
    /// `Ψ = Φ̄`.
    ComplementEqual,
    Transverse,
    /// `Φ ⊋ Ψ`.
    FirstContainsSecond,
    /// `Ψ ⊋ Φ`.
    SecondContainsFirst,
    /// `Φ ⊇ Ψ̄` (equivalently `Φ̄ ⊆ Ψ`): the two halfspaces cover everything.
    FirstContainsComplement,
    /// `Ψ̄ ⊇ Φ`: the two halfspaces are disjoint.
    ComplementContainsFirst,
}

impl HalfspaceRelation {
    pub fn is_nested(self) -> bool {
        !matches!(
            self,
            HalfspaceRelation::Transverse | HalfspaceRelation::Equal | HalfspaceRelation::ComplementEqual
        )
    }
}

pub fn distance(x: &GroupElement, y: &GroupElement) -> Result<usize> {
    same_graph(x, y)?;
    Ok(x.invert().mul_unchecked(y).len())
}

/// `x ∈ Φ`. The hyperplane separates `x` from the base exactly when
/// `base⁻¹·x` has a heap-minimal letter `label⁺`, i.e. when its dual edge
/// appears in the interval `[base, x]`.
pub fn member(x: &GroupElement, phi: &Halfspace) -> Result<bool> {
    same_graph(x, phi.base())?;
    Ok(member_unchecked(x, phi))
}

pub(crate) fn member_unchecked(x: &GroupElement, phi: &Halfspace) -> bool {
    let u = phi.base().invert().mul_unchecked(x);
    let g = u.raag();
    let v = phi.label();
    let word = u.word();
    let mut crossed = false;
    for (i, l) in word.iter().enumerate() {
        if l.gen == v {
            crossed = !l.inverse && (0..i).all(|k| !g.dependent(word[k].gen, v));
            break;
        }
    }
    crossed == (phi.sign() == Sign::Plus)
}

/// Do the hyperplanes of `phi` and `psi` cross? They do iff the labels
/// commute and the two carriers share a corner, i.e. `1` lies in the double
/// coset `⟨lk v⟩ · base_φ⁻¹ base_ψ · ⟨lk w⟩`.
fn hyperplanes_cross(phi: &Halfspace, psi: &Halfspace) -> bool {
    let g = phi.base().raag();
    let (v, w) = (phi.label(), psi.label());
    if !g.commute(v, w) {
        return false;
    }
    let rel = phi.base().invert().mul_unchecked(psi.base());
    double_coset_split(&rel, g.link(v), g.link(w)).core.is_identity()
}

pub fn relation(phi: &Halfspace, psi: &Halfspace) -> Result<HalfspaceRelation> {
    same_graph(phi.base(), psi.base())?;
    Ok(relation_unchecked(phi, psi))
}

pub(crate) fn relation_unchecked(phi: &Halfspace, psi: &Halfspace) -> HalfspaceRelation {
    use HalfspaceRelation::*;
    if phi.hyperplane == psi.hyperplane {
        return if phi.sign == psi.sign { Equal } else { ComplementEqual };
    }
    if hyperplanes_cross(phi, psi) {
        return Transverse;
    }
    // Disjoint hyperplanes: each lies wholly on one side of the other, and
    // the two sides determine which quarter is empty.
    //   psi's wall inside phi | phi's wall inside psi | relation
    //   yes                   | yes                   | phi ∪ psi = X
    //   yes                   | no                    | phi ⊋ psi
    //   no                    | yes                   | psi ⊋ phi
    //   no                    | no                    | phi ∩ psi = ∅
    let psi_wall_in_phi = member_unchecked(psi.base(), phi);
    let phi_wall_in_psi = member_unchecked(phi.base(), psi);
    match (psi_wall_in_phi, phi_wall_in_psi) {
        (true, true) => FirstContainsComplement,
        (true, false) => FirstContainsSecond,
        (false, true) => SecondContainsFirst,
        (false, false) => ComplementContainsFirst,
    }
}

pub fn translate_halfspace(g: &GroupElement, phi: &Halfspace) -> Result<Halfspace> {
    same_graph(g, phi.base())?;
    Ok(translate_unchecked(g, phi))
}

pub(crate) fn translate_unchecked(g: &GroupElement, phi: &Halfspace) -> Halfspace {
    Halfspace::new(phi.label(), &g.mul_unchecked(phi.base()), phi.sign())
}

/// The halfspaces separating `source` from `target`, indexed by the
/// positions of a reduced word for `source⁻¹·target`.
#[derive(Clone, Debug)]
pub struct Interval {
    source: GroupElement,
    target: GroupElement,
    heap: Heap,
    halfspaces: Vec<Halfspace>,
}

impl Interval {
    /// Interval from `source` along a reduced word (any spelling).
    pub fn from_word(source: &GroupElement, word: Vec<Letter>) -> Result<Interval> {
        let raag = source.raag().clone();
        let target = source.mul_word(&word);
        if distance(source, &target)? != word.len() {
            return Err(Error::Precondition("interval word is not reduced".into()));
        }
        let heap = Heap::new(&raag, word);
        let halfspaces = (0..heap.len())
            .map(|i| {
                let l = heap.letter(i);
                let q = source.mul_word(&heap.down_set_word(i));
                if l.inverse {
                    Halfspace::new(l.gen, &q.mul_word(&[l]), Sign::Minus)
                } else {
                    Halfspace::new(l.gen, &q, Sign::Plus)
                }
            })
            .collect();
        Ok(Interval { source: source.clone(), target, heap, halfspaces })
    }

    pub fn source(&self) -> &GroupElement {
        &self.source
    }

    pub fn target(&self) -> &GroupElement {
        &self.target
    }

    pub fn heap(&self) -> &Heap {
        &self.heap
    }

    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    pub fn halfspace(&self, i: usize) -> &Halfspace {
        &self.halfspaces[i]
    }

    pub fn len(&self) -> usize {
        self.halfspaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.halfspaces.is_empty()
    }

    pub fn word(&self) -> &[Letter] {
        self.heap.letters()
    }

    pub fn position_of(&self, phi: &Halfspace) -> Option<usize> {
        self.halfspaces.iter().position(|h| h == phi)
    }

    /// Halfspace `i` is tightly nested over halfspace `j`.
    pub fn tightly_nested_in(&self, i: usize, j: usize) -> Result<bool> {
        if i >= self.len() || j >= self.len() || i == j {
            return Err(Error::Precondition(format!(
                "positions ({i}, {j}) invalid for an interval of length {}",
                self.len()
            )));
        }
        Ok(self.heap.is_cover(i, j))
    }
}

pub fn interval(x: &GroupElement, y: &GroupElement) -> Result<Interval> {
    same_graph(x, y)?;
    let u = x.invert().mul_unchecked(y);
    Interval::from_word(x, u.word().to_vec())
}

pub fn tightly_nested_in(interval: &Interval, i: usize, j: usize) -> Result<bool> {
    interval.tightly_nested_in(i, j)
}

/// Global test for `Φ ⊋ Ψ` tightly, decided inside the interval from a
/// vertex outside `Φ` to a vertex inside `Ψ`, which contains both.
pub fn tightly_nested(phi: &Halfspace, psi: &Halfspace) -> Result<bool> {
    if relation(phi, psi)? != HalfspaceRelation::FirstContainsSecond {
        return Ok(false);
    }
    let iv = interval(&phi.outside_vertex(), &psi.inside_vertex())?;
    match (iv.position_of(phi), iv.position_of(psi)) {
        (Some(i), Some(j)) => Ok(iv.heap.is_cover(i, j)),
        _ => Err(Error::InternalInvariant(format!(
            "nested halfspaces {phi} ⊋ {psi} missing from their spanning interval"
        ))),
    }
}

/// Largest common prefix of two reduced words in the trace monoid.
fn meet(graph: &crate::raag::DefiningGraph, u: &[Letter], w: &[Letter]) -> Vec<Letter> {
    let mut u = u.to_vec();
    let mut w = w.to_vec();
    let mut out = Vec::new();
    let minimal_at = |word: &[Letter], l: Letter| -> Option<usize> {
        let i = word.iter().position(|m| m.gen == l.gen)?;
        (word[i] == l && (0..i).all(|k| !graph.dependent(word[k].gen, l.gen))).then_some(i)
    };
    loop {
        let mut found = None;
        for (i, &l) in u.iter().enumerate() {
            if (0..i).any(|k| graph.dependent(u[k].gen, l.gen)) {
                continue;
            }
            if let Some(j) = minimal_at(&w, l) {
                found = Some((i, j, l));
                break;
            }
        }
        match found {
            Some((i, j, l)) => {
                u.remove(i);
                w.remove(j);
                out.push(l);
            }
            None => return out,
        }
    }
}

pub fn median(x: &GroupElement, y: &GroupElement, z: &GroupElement) -> Result<GroupElement> {
    same_graph(x, y)?;
    same_graph(x, z)?;
    let xi = x.invert();
    let u = xi.mul_unchecked(y);
    let w = xi.mul_unchecked(z);
    Ok(x.mul_word(&meet(x.raag(), u.word(), w.word())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::raag::{DefiningGraph, Raag};
    use HalfspaceRelation::*;

    fn f2() -> Raag {
        Raag::new(DefiningGraph::free(&["a", "b"]).unwrap())
    }

    fn z2() -> Raag {
        Raag::new(DefiningGraph::free_abelian(&["a", "b"]).unwrap())
    }

    fn path() -> Raag {
        Raag::new(DefiningGraph::new(&["a", "b", "c"], &[("a", "b"), ("b", "c")]).unwrap())
    }

    fn el(g: &Raag, s: &str) -> GroupElement {
        g.parse(s).unwrap()
    }

    #[test]
    fn distances() {
        let z = z2();
        assert_eq!(distance(&z.identity(), &el(&z, "a a b b b")).unwrap(), 5);
        let x = el(&z, "a b^-1");
        assert_eq!(distance(&x, &x).unwrap(), 0);
        let f = f2();
        assert_eq!(distance(&el(&f, "a"), &el(&f, "b")).unwrap(), 2);
    }

    #[test]
    fn interval_examples() {
        let f = f2();
        let iv = interval(&f.identity(), &el(&f, "a b a b")).unwrap();
        assert_eq!(iv.len(), 4);
        for i in 0..4 {
            for j in i + 1..4 {
                assert_eq!(relation(iv.halfspace(i), iv.halfspace(j)).unwrap(), FirstContainsSecond);
            }
        }
        let z = z2();
        let iv = interval(&z.identity(), &el(&z, "a b")).unwrap();
        assert_eq!(relation(iv.halfspace(0), iv.halfspace(1)).unwrap(), Transverse);
        let iv = interval(&z.identity(), &el(&z, "a a")).unwrap();
        assert_eq!(relation(iv.halfspace(0), iv.halfspace(1)).unwrap(), FirstContainsSecond);
    }

    #[test]
    fn interval_halfspaces_separate_endpoints() {
        let p = path();
        let x = el(&p, "b a^-1");
        let y = el(&p, "c a b^-1 c c");
        let iv = interval(&x, &y).unwrap();
        assert_eq!(iv.len(), distance(&x, &y).unwrap());
        for h in iv.halfspaces() {
            assert!(!member(&x, h).unwrap());
            assert!(member(&y, h).unwrap());
        }
    }

    #[test]
    fn membership_examples() {
        let f = f2();
        let phi = Halfspace::new(0, &f.identity(), Sign::Plus);
        assert!(member(&el(&f, "a"), &phi).unwrap());
        assert!(!member(&f.identity(), &phi).unwrap());
        assert!(!member(&el(&f, "b"), &phi).unwrap());
        let z = z2();
        let phi = Halfspace::new(0, &z.identity(), Sign::Plus);
        assert!(member(&el(&z, "a b"), &phi).unwrap());
        let p = path();
        let phi = Halfspace::new(1, &el(&p, "c a"), Sign::Minus);
        assert!(member(&phi.inside_vertex(), &phi).unwrap());
        assert!(!member(&phi.outside_vertex(), &phi).unwrap());
    }

    #[test]
    fn relation_basics() {
        let f = f2();
        let phi = Halfspace::new(0, &el(&f, "b"), Sign::Plus);
        assert_eq!(relation(&phi, &phi).unwrap(), Equal);
        assert_eq!(relation(&phi, &phi.complement()).unwrap(), ComplementEqual);
        let iv = interval(&f.identity(), &el(&f, "a a")).unwrap();
        assert_eq!(relation(iv.halfspace(0), iv.halfspace(1)).unwrap(), FirstContainsSecond);
        assert_eq!(relation(iv.halfspace(1), iv.halfspace(0)).unwrap(), SecondContainsFirst);
        let (p0, p1) = (iv.halfspace(0), iv.halfspace(1));
        assert_eq!(relation(p0, &p1.complement()).unwrap(), FirstContainsComplement);
        assert_eq!(relation(&p1.complement(), p0).unwrap(), FirstContainsComplement);
        assert_eq!(relation(&p0.complement(), p1).unwrap(), ComplementContainsFirst);
    }

    #[test]
    fn tight_nesting_examples() {
        let f = f2();
        let iv = interval(&f.identity(), &el(&f, "a a a")).unwrap();
        assert!(iv.tightly_nested_in(0, 1).unwrap());
        assert!(!iv.tightly_nested_in(0, 2).unwrap());
        assert!(iv.tightly_nested_in(0, 0).is_err());
        assert!(tightly_nested(iv.halfspace(0), iv.halfspace(1)).unwrap());
        assert!(!tightly_nested(iv.halfspace(0), iv.halfspace(2)).unwrap());
        let z = z2();
        let iv = interval(&z.identity(), &el(&z, "a b")).unwrap();
        assert!(!iv.tightly_nested_in(0, 1).unwrap());
        let p = path();
        let iv = interval(&p.identity(), &el(&p, "a b c")).unwrap();
        assert!(iv.tightly_nested_in(0, 2).unwrap());
    }

    #[test]
    fn median_examples() {
        let f = f2();
        let one = f.identity();
        assert_eq!(median(&one, &el(&f, "a"), &el(&f, "b")).unwrap(), one);
        assert_eq!(median(&one, &el(&f, "a b a"), &el(&f, "a b")).unwrap(), el(&f, "a b"));
        let z = z2();
        assert_eq!(median(&z.identity(), &el(&z, "a b"), &el(&z, "b")).unwrap(), el(&z, "b"));
    }

    #[test]
    fn translation_examples() {
        let f = f2();
        let phi = Halfspace::new(0, &f.identity(), Sign::Plus);
        assert_eq!(translate_halfspace(&f.identity(), &phi).unwrap(), phi);
        assert_eq!(translate_halfspace(&el(&f, "a"), &phi).unwrap(), Halfspace::new(0, &el(&f, "a"), Sign::Plus));
        let z = z2();
        let phi = Halfspace::new(0, &z.identity(), Sign::Plus);
        let moved = translate_halfspace(&el(&z, "b"), &phi).unwrap();
        assert_eq!(moved, phi);
        assert!(moved.base().is_identity());
    }
}

//! Segments, their copies inside intervals, and the counting quasimorphism.

use rayon::prelude::*;

use crate::axis::{axis_window, fundamental_interval, AxisData, AxisWindow};
use crate::cube::{
    interval, relation_unchecked, translate_unchecked, Halfspace, HalfspaceRelation, Interval,
};
use crate::error::{Error, Result};
use crate::raag::{same_graph, solve_translation, translate_witness, CosetConstraint, GroupElement};

/// A chain `Φ₀ ⊋ Φ₁ ⊋ … ⊋ Φ_r` of tightly nested halfspaces, together with
/// an interval containing it in which tight nesting is a heap cover.
#[derive(Clone, Debug)]
pub struct Segment {
    chain: Vec<Halfspace>,
    positions: Vec<usize>,
    ambient: Interval,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.chain == other.chain
    }
}

impl Eq for Segment {}

impl Segment {
    /// The halfspaces at `positions` of `ambient`, which must ascend by
    /// heap covers.
    pub fn from_positions(ambient: Interval, positions: Vec<usize>) -> Result<Segment> {
        if positions.is_empty() {
            return Err(Error::Precondition("a segment needs at least one halfspace".into()));
        }
        if let Some(&p) = positions.iter().find(|&&p| p >= ambient.len()) {
            return Err(Error::Precondition(format!("position {p} outside the ambient interval")));
        }
        for w in positions.windows(2) {
            if !ambient.heap().is_cover(w[0], w[1]) {
                return Err(Error::Precondition(format!(
                    "positions {} and {} are not tightly nested",
                    w[0], w[1]
                )));
            }
        }
        let chain = positions.iter().map(|&p| ambient.halfspace(p).clone()).collect();
        Ok(Segment { chain, positions, ambient })
    }

    /// Locates each halfspace of `chain` in `ambient`.
    pub fn from_halfspaces(ambient: Interval, chain: &[Halfspace]) -> Result<Segment> {
        let positions = chain
            .iter()
            .map(|h| {
                ambient
                    .position_of(h)
                    .ok_or_else(|| Error::Precondition(format!("{h} is not in the ambient interval")))
            })
            .collect::<Result<Vec<_>>>()?;
        Segment::from_positions(ambient, positions)
    }

    pub fn chain(&self) -> &[Halfspace] {
        &self.chain
    }

    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    pub fn ambient(&self) -> &Interval {
        &self.ambient
    }

    pub fn len(&self) -> usize {
        self.chain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chain.is_empty()
    }

    pub fn first(&self) -> &Halfspace {
        &self.chain[0]
    }

    pub fn last(&self) -> &Halfspace {
        &self.chain[self.chain.len() - 1]
    }

    pub fn translate(&self, g: &GroupElement) -> Vec<Halfspace> {
        self.chain.iter().map(|h| translate_unchecked(g, h)).collect()
    }

    fn max_base_len(&self) -> usize {
        self.chain.iter().map(|h| h.base().len()).max().unwrap_or(0)
    }
}

/// `γ̄ = {Φ̄_r, …, Φ̄₀}`, living in the reversed ambient interval.
pub fn reverse_segment(seg: &Segment) -> Segment {
    let n = seg.ambient.len();
    let back: Vec<_> = seg.ambient.word().iter().rev().map(|l| l.inv()).collect();
    let ambient = Interval::from_word(seg.ambient.target(), back)
        .expect("reversed reduced word is reduced");
    let positions: Vec<usize> = seg.positions.iter().rev().map(|&p| n - 1 - p).collect();
    let chain = seg.chain.iter().rev().map(Halfspace::complement).collect();
    debug_assert!(positions
        .iter()
        .zip(&chain)
        .all(|(&p, h): (&usize, &Halfspace)| ambient.halfspace(p) == h));
    Segment { chain, positions, ambient }
}

pub fn segments_overlap(a: &Segment, b: &Segment) -> Result<bool> {
    same_graph(a.first().base(), b.first().base())?;
    Ok(a.chain.iter().any(|x| {
        b.chain.iter().any(|y| {
            matches!(relation_unchecked(x, y), HalfspaceRelation::Equal | HalfspaceRelation::Transverse)
        })
    }))
}

/// How translation witnesses are found for candidate copies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum WitnessSearch {
    /// Exact simultaneous coset solver.
    #[default]
    Exact,
    /// Breadth-first search over the first link parabolic up to this length.
    Bounded(usize),
    /// Breadth-first search with radius `|I| + longest base in γ + 4`.
    BoundedDefault,
}

pub fn default_radius(seg: &Segment, iv: &Interval) -> usize {
    iv.len() + seg.max_base_len() + 4
}

/// A translate `g·γ` sitting at the given positions of an interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CopyInInterval {
    pub positions: Vec<usize>,
    pub witness: GroupElement,
}

fn find_witness(seg: &Segment, target: &[&Halfspace], search: WitnessSearch, iv: &Interval) -> Option<GroupElement> {
    let constraints: Vec<CosetConstraint> = seg
        .chain
        .iter()
        .zip(target)
        .map(|(src, dst)| {
            CosetConstraint::new(src.base().clone(), dst.base().clone(), src.base().raag().link(src.label()))
        })
        .collect();
    let g = match search {
        WitnessSearch::Exact => solve_translation(&constraints),
        WitnessSearch::Bounded(r) => translate_witness(&constraints, r),
        WitnessSearch::BoundedDefault => translate_witness(&constraints, default_radius(seg, iv)),
    }?;
    seg.chain
        .iter()
        .zip(target)
        .all(|(src, dst)| translate_unchecked(&g, src) == **dst)
        .then_some(g)
}

/// Cover chains of `iv` whose labels and signs follow the segment's.
fn candidate_chains(seg: &Segment, iv: &Interval) -> Vec<Vec<usize>> {
    let heap = iv.heap();
    let key = |h: &Halfspace| (h.label(), h.sign());
    let pattern: Vec<_> = seg.chain.iter().map(key).collect();
    let mut out = Vec::new();
    let mut stack: Vec<Vec<usize>> = (0..iv.len())
        .rev()
        .filter(|&p| key(iv.halfspace(p)) == pattern[0])
        .map(|p| vec![p])
        .collect();
    while let Some(chain) = stack.pop() {
        if chain.len() == pattern.len() {
            out.push(chain);
            continue;
        }
        let last = *chain.last().expect("nonempty");
        for q in heap.covers_above(last).into_iter().rev() {
            if key(iv.halfspace(q)) == pattern[chain.len()] {
                let mut next = chain.clone();
                next.push(q);
                stack.push(next);
            }
        }
    }
    out.sort();
    out
}

/// All translates of `seg` contained in `iv`, one per position set, in
/// lexicographic position order.
pub fn enumerate_copies(seg: &Segment, iv: &Interval, search: WitnessSearch) -> Vec<CopyInInterval> {
    let candidates = candidate_chains(seg, iv);
    let found: Vec<Option<CopyInInterval>> = if candidates.len() > 64 {
        candidates
            .par_iter()
            .map(|c| check_candidate(seg, iv, c, search))
            .collect()
    } else {
        candidates.iter().map(|c| check_candidate(seg, iv, c, search)).collect()
    };
    found.into_iter().flatten().collect()
}

fn check_candidate(seg: &Segment, iv: &Interval, positions: &[usize], search: WitnessSearch) -> Option<CopyInInterval> {
    let target: Vec<&Halfspace> = positions.iter().map(|&p| iv.halfspace(p)).collect();
    find_witness(seg, &target, search, iv).map(|witness| CopyInInterval { positions: positions.to_vec(), witness })
}

fn copies_overlap(iv: &Interval, a: &CopyInInterval, b: &CopyInInterval) -> bool {
    let heap = iv.heap();
    a.positions
        .iter()
        .any(|&p| b.positions.iter().any(|&q| p == q || !heap.comparable(p, q)))
}

/// `a` lies entirely above `b`: `a`'s last halfspace contains `b`'s first.
pub(crate) fn copy_precedes(iv: &Interval, a: &CopyInInterval, b: &CopyInInterval) -> bool {
    iv.heap().precedes(*a.positions.last().expect("nonempty"), b.positions[0])
}

/// Size of a largest pairwise non-overlapping family of copies.
///
/// Inside one interval two non-overlapping copies are always nested one
/// after the other, and "lies above" is transitive, so this is the longest
/// path in that DAG.
pub fn count_nonoverlapping(copies: &[CopyInInterval], iv: &Interval) -> Result<usize> {
    if let Some(c) = copies.iter().find(|c| c.positions.is_empty() || c.positions.iter().any(|&p| p >= iv.len())) {
        return Err(Error::Precondition(format!("copy at {:?} is not inside the interval", c.positions)));
    }
    let mut order: Vec<usize> = (0..copies.len()).collect();
    order.sort_by_key(|&i| copies[i].positions[0]);
    let mut best = vec![1usize; copies.len()];
    let mut answer = 0;
    for (k, &i) in order.iter().enumerate() {
        for &j in &order[..k] {
            if copy_precedes(iv, &copies[j], &copies[i]) && !copies_overlap(iv, &copies[j], &copies[i]) {
                best[i] = best[i].max(best[j] + 1);
            }
        }
        answer = answer.max(best[i]);
    }
    Ok(answer)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QmValue {
    pub c_forward: usize,
    pub c_reverse: usize,
    pub omega: i64,
}

impl QmValue {
    pub fn new(c_forward: usize, c_reverse: usize) -> Self {
        QmValue { c_forward, c_reverse, omega: c_forward as i64 - c_reverse as i64 }
    }
}

/// Copy count of `seg` in an interval.
pub fn count_in(seg: &Segment, iv: &Interval, search: WitnessSearch) -> usize {
    let copies = enumerate_copies(seg, iv, search);
    count_nonoverlapping(&copies, iv).expect("enumerated copies lie in the interval")
}

/// `ω_γ(x, y) = c_γ(x, y) − c_γ̄(x, y)`.
pub fn omega(seg: &Segment, x: &GroupElement, y: &GroupElement, search: WitnessSearch) -> Result<QmValue> {
    same_graph(seg.first().base(), x)?;
    let iv = interval(x, y)?;
    let rev = reverse_segment(seg);
    Ok(QmValue::new(count_in(seg, &iv, search), count_in(&rev, &iv, search)))
}

/// A segment paired with its reverse, for repeated evaluation.
#[derive(Clone, Debug)]
pub struct CountingQuasimorphism {
    pub segment: Segment,
    pub reverse: Segment,
    pub basepoint: GroupElement,
    pub search: WitnessSearch,
}

impl CountingQuasimorphism {
    pub fn new(segment: Segment, basepoint: GroupElement) -> Self {
        let reverse = reverse_segment(&segment);
        CountingQuasimorphism { segment, reverse, basepoint, search: WitnessSearch::Exact }
    }

    pub fn omega(&self, x: &GroupElement, y: &GroupElement) -> Result<QmValue> {
        let iv = interval(x, y)?;
        Ok(QmValue::new(count_in(&self.segment, &iv, self.search), count_in(&self.reverse, &iv, self.search)))
    }

    pub fn phi(&self, g: &GroupElement) -> Result<i64> {
        let moved = g.multiply(&self.basepoint)?;
        Ok(self.omega(&self.basepoint, &moved)?.omega)
    }
}

/// `φ_γ(g) = ω_γ(x₀, g·x₀)`.
pub fn phi(seg: &Segment, basepoint: &GroupElement, g: &GroupElement, search: WitnessSearch) -> Result<i64> {
    let moved = g.multiply(basepoint)?;
    Ok(omega(seg, basepoint, &moved, search)?.omega)
}

/// Maximal `g`-nested segment inside `[o, g·o]`.
///
/// Starts from the first halfspace of the fundamental domain and extends at
/// either end by heap covers while `γ > gγ` holds in the two-period window,
/// trying candidates in position order.
pub fn find_maximal_g_nested(ax: &AxisData) -> Result<Segment> {
    let window = axis_window(ax, 2)?;
    let positions = maximal_g_nested_positions(&window, ax.delta, 0);
    Segment::from_positions(fundamental_interval(ax)?, positions)
}

fn maximal_g_nested_positions(window: &AxisWindow, delta: usize, start: usize) -> Vec<usize> {
    let heap = window.interval.heap();
    let mut chain = vec![start];
    loop {
        let first = chain[0];
        let last = *chain.last().expect("nonempty");
        let above = heap
            .covers_below(first)
            .into_iter()
            .find(|&q| q < delta && heap.precedes(last, q + delta));
        if let Some(q) = above {
            chain.insert(0, q);
            continue;
        }
        let below = heap
            .covers_above(last)
            .into_iter()
            .find(|&q| q < delta && heap.precedes(q, first + delta));
        match below {
            Some(q) => chain.push(q),
            None => return chain,
        }
    }
}

/// Every maximal `g`-nested segment in `[o, g·o]`, in lexicographic position order.
pub fn all_maximal_g_nested(ax: &AxisData) -> Result<Vec<Segment>> {
    let window = axis_window(ax, 2)?;
    let heap = window.interval.heap();
    let delta = ax.delta;
    let mut out = Vec::new();
    let mut stack: Vec<Vec<usize>> = (0..delta).rev().map(|p| vec![p]).collect();
    while let Some(chain) = stack.pop() {
        let first = chain[0];
        let last = *chain.last().expect("nonempty");
        if heap.precedes(last, first + delta) && is_maximal_g_nested(ax, &chain)? {
            out.push(Segment::from_positions(fundamental_interval(ax)?, chain.clone())?);
        }
        for q in heap.covers_above(last).into_iter().rev() {
            if q < delta {
                let mut next = chain.clone();
                next.push(q);
                stack.push(next);
            }
        }
    }
    Ok(out)
}

/// `γ > gγ`, checked inside the two-period window.
pub fn is_g_nested(ax: &AxisData, positions: &[usize]) -> Result<bool> {
    let window = axis_window(ax, 2)?;
    let heap = window.interval.heap();
    let (first, last) = (positions[0], *positions.last().expect("nonempty"));
    Ok(positions.iter().all(|&p| p < ax.delta) && heap.precedes(last, first + ax.delta))
}

/// No one-step extension of the chain inside `[o, g·o]` stays `g`-nested.
pub fn is_maximal_g_nested(ax: &AxisData, positions: &[usize]) -> Result<bool> {
    if !is_g_nested(ax, positions)? {
        return Ok(false);
    }
    let window = axis_window(ax, 2)?;
    let heap = window.interval.heap();
    let delta = ax.delta;
    let (first, last) = (positions[0], *positions.last().expect("nonempty"));
    let up = heap.covers_below(first).into_iter().any(|q| q < delta && heap.precedes(last, q + delta));
    let down = heap.covers_above(last).into_iter().any(|q| q < delta && heap.precedes(q, first + delta));
    Ok(!up && !down)
}

/// Exactly one of `hᾱ > α` and `α > hᾱ` holds, with both inside the window.
pub fn check_lesser_or_greater(alpha: &Segment, h: &GroupElement, window: &AxisWindow) -> Result<bool> {
    let iv = &window.interval;
    let locate = |chain: &[Halfspace]| -> Result<Vec<usize>> {
        chain
            .iter()
            .map(|x| {
                iv.position_of(x)
                    .ok_or_else(|| Error::Precondition(format!("{x} is not in the axis window")))
            })
            .collect()
    };
    let a = locate(alpha.chain())?;
    let moved = reverse_segment(alpha).translate(h);
    let b = locate(&moved)?;
    let heap = iv.heap();
    let moved_above = heap.precedes(*b.last().expect("nonempty"), a[0]);
    let alpha_above = heap.precedes(*a.last().expect("nonempty"), b[0]);
    Ok(moved_above != alpha_above)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axis::cyclically_reduce;
    use crate::cube::{relation, HalfspaceRelation::*, Sign};
    use crate::raag::{DefiningGraph, Raag};

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

    fn wall(g: &Raag, s: &str) -> Segment {
        let iv = interval(&g.identity(), &el(g, s)).unwrap();
        Segment::from_positions(iv, vec![0]).unwrap()
    }

    fn chain(g: &Raag, s: &str) -> Segment {
        let iv = interval(&g.identity(), &el(g, s)).unwrap();
        let n = iv.len();
        Segment::from_positions(iv, (0..n).collect()).unwrap()
    }

    #[test]
    fn segment_requires_covers() {
        let f = f2();
        let iv = interval(&f.identity(), &el(&f, "a a a")).unwrap();
        assert!(Segment::from_positions(iv.clone(), vec![0, 2]).is_err());
        assert!(Segment::from_positions(iv.clone(), vec![]).is_err());
        let z = z2();
        let iv = interval(&z.identity(), &el(&z, "a b")).unwrap();
        assert!(Segment::from_positions(iv, vec![0, 1]).is_err());
    }

    #[test]
    fn reverse_examples() {
        let f = f2();
        let w = wall(&f, "a");
        let r = reverse_segment(&w);
        assert_eq!(r.chain(), &[w.first().complement()]);
        let g = chain(&f, "a b");
        let r = reverse_segment(&g);
        assert_eq!(reverse_segment(&r), g);
        assert_eq!(r.ambient().source(), &el(&f, "a b"));
        assert_eq!(r.ambient().target(), &f.identity());
        assert_eq!(relation(&r.chain()[0], &r.chain()[1]).unwrap(), FirstContainsSecond);
        assert_eq!(r.chain()[0], g.chain()[1].complement());
    }

    #[test]
    fn overlap_examples() {
        let f = f2();
        let g = chain(&f, "a b");
        assert!(segments_overlap(&g, &g).unwrap());
        let a = wall(&f, "a");
        let iv = interval(&el(&f, "a"), &el(&f, "a b")).unwrap();
        let b = Segment::from_positions(iv, vec![0]).unwrap();
        assert!(!segments_overlap(&a, &b).unwrap());
        let z = z2();
        assert!(segments_overlap(&wall(&z, "a"), &wall(&z, "b")).unwrap());
    }

    #[test]
    fn copy_examples() {
        let f = f2();
        let a = wall(&f, "a");
        let iv = interval(&f.identity(), &el(&f, "a a a")).unwrap();
        let copies = enumerate_copies(&a, &iv, WitnessSearch::Exact);
        let witnesses: Vec<String> = copies.iter().map(|c| c.witness.to_string()).collect();
        assert_eq!(witnesses, vec!["1", "a", "a a"]);
        assert_eq!(count_nonoverlapping(&copies, &iv).unwrap(), 3);
        assert_eq!(count_nonoverlapping(&[], &iv).unwrap(), 0);
        let dup = vec![copies[0].clone(), copies[0].clone()];
        assert_eq!(count_nonoverlapping(&dup, &iv).unwrap(), 1);

        let z = z2();
        let iv = interval(&z.identity(), &el(&z, "b b b")).unwrap();
        assert!(enumerate_copies(&wall(&z, "a"), &iv, WitnessSearch::Exact).is_empty());

        let c = chain(&f, "a b a^-1 b^-1");
        let iv = interval(&f.identity(), &el(&f, "a b a^-1 b^-1 a b a^-1 b^-1")).unwrap();
        let copies = enumerate_copies(&c, &iv, WitnessSearch::Exact);
        let witnesses: Vec<String> = copies.iter().map(|c| c.witness.to_string()).collect();
        assert_eq!(witnesses, vec!["1", "a b a^-1 b^-1"]);
    }

    #[test]
    fn omega_and_phi_examples() {
        let f = f2();
        let a = wall(&f, "a");
        let one = f.identity();
        assert_eq!(omega(&a, &one, &el(&f, "a a a"), WitnessSearch::Exact).unwrap().omega, 3);
        let x = el(&f, "b a");
        assert_eq!(omega(&a, &x, &x, WitnessSearch::Exact).unwrap(), QmValue::new(0, 0));
        let c = chain(&f, "a b a^-1 b^-1");
        let comm = el(&f, "a b a^-1 b^-1");
        let v = omega(&c, &one, &comm.pow(2), WitnessSearch::Exact).unwrap();
        assert_eq!(v, QmValue::new(2, 0));
        assert_eq!(phi(&c, &one, &one, WitnessSearch::Exact).unwrap(), 0);
        for n in 1..=4 {
            assert_eq!(phi(&c, &one, &comm.pow(n), WitnessSearch::Exact).unwrap(), n);
        }
        let z = z2();
        let ab = el(&z, "a b");
        for n in 1..=4 {
            assert_eq!(phi(&wall(&z, "a"), &z.identity(), &ab.pow(n), WitnessSearch::Exact).unwrap(), n);
        }
    }

    #[test]
    fn canonical_segment_is_among_all_maximal() {
        let f = Raag::new(DefiningGraph::free(&["a", "b"]).unwrap());
        let p = Raag::new(DefiningGraph::new(&["a", "b", "c"], &[("a", "b"), ("b", "c")]).unwrap());
        for (raag, w) in [(&f, "a b a^-1 b^-1"), (&f, "a a b"), (&p, "a b c^-1 b a"), (&p, "b a c")] {
            let ax = cyclically_reduce(&raag.parse(w).unwrap()).unwrap();
            let all = all_maximal_g_nested(&ax).unwrap();
            assert!(all.contains(&find_maximal_g_nested(&ax).unwrap()), "{w}");
            for s in &all {
                assert!(is_maximal_g_nested(&ax, s.positions()).unwrap());
            }
        }
    }

    #[test]
    fn maximal_segment_examples() {
        let f = f2();
        let ax = cyclically_reduce(&el(&f, "a b a b")).unwrap();
        let g = find_maximal_g_nested(&ax).unwrap();
        assert_eq!(g.positions(), &[0, 1, 2, 3]);
        let ax = cyclically_reduce(&el(&f, "a b a^-1 b^-1")).unwrap();
        assert_eq!(find_maximal_g_nested(&ax).unwrap().len(), 4);
        let z = z2();
        let ax = cyclically_reduce(&el(&z, "a b")).unwrap();
        let g = find_maximal_g_nested(&ax).unwrap();
        assert_eq!(g.chain(), &[crate::cube::Halfspace::new(0, &z.identity(), Sign::Plus)]);
        let p = path();
        let ax = cyclically_reduce(&el(&p, "a b c")).unwrap();
        let g = find_maximal_g_nested(&ax).unwrap();
        assert!(is_maximal_g_nested(&ax, g.positions()).unwrap());
    }

    #[test]
    fn lesser_or_greater_detects_order() {
        let f = f2();
        let ax = cyclically_reduce(&el(&f, "a b a b")).unwrap();
        let window = axis_window(&ax, 3).unwrap();
        let alpha = Segment::from_positions(window.interval.clone(), vec![0]).unwrap();
        // h maps the reversed first a-wall onto the a-wall of the second period
        let target = window.interval.halfspace(2).clone();
        let h = crate::raag::solve_translation(&[CosetConstraint::new(
            alpha.first().base().clone(),
            target.base().clone(),
            crate::raag::GenSet::EMPTY,
        )]);
        let h = h.unwrap();
        let moved = reverse_segment(&alpha).translate(&h);
        if window.interval.position_of(&moved[0]).is_some() {
            assert!(check_lesser_or_greater(&alpha, &h, &window).unwrap());
        } else {
            assert!(check_lesser_or_greater(&alpha, &h, &window).is_err());
        }
    }
}

//! Translation length, a vertex realizing it, and finite windows of the
//! combinatorial axis halfspace family.

use crate::cube::Interval;
use crate::error::{Error, Result};
use crate::raag::{heap_of, GroupElement, Letter};

/// Largest power checked for `d(o, gⁿo) = n·δ(g)`.
pub const PERIODICITY_CHECK: usize = 6;

/// `g = h·c·h⁻¹` with `c` cyclically reduced; `o = h` realizes `δ(g) = |c|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxisData {
    pub g: GroupElement,
    pub conjugator: GroupElement,
    pub core: GroupElement,
    pub delta: usize,
}

impl AxisData {
    pub fn base_vertex(&self) -> &GroupElement {
        &self.conjugator
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.delta >= 1
    }

    /// `gᵏ·o = h·cᵏ`.
    pub fn orbit_point(&self, k: i64) -> GroupElement {
        self.conjugator.mul_word(&self.core_power_word(k))
    }

    /// The concatenation `cᵏ` (or `(c⁻¹)^|k|`), reduced as written.
    pub fn core_power_word(&self, k: i64) -> Vec<Letter> {
        let unit: Vec<Letter> = if k >= 0 {
            self.core.word().to_vec()
        } else {
            self.core.word().iter().rev().map(|l| l.inv()).collect()
        };
        unit.iter().copied().cycle().take(unit.len() * k.unsigned_abs() as usize).collect()
    }
}

/// Conjugates away exposed letter pairs until none remains: while the core
/// has a heap-minimal letter `ℓ` whose inverse sits at a heap-maximal
/// position, replace `c` by `ℓ⁻¹·c·ℓ` and append `ℓ` to the conjugator.
pub fn cyclically_reduce(g: &GroupElement) -> Result<AxisData> {
    let raag = g.raag().clone();
    let mut core = g.clone();
    let mut conj = raag.identity();
    loop {
        let heap = heap_of(&core);
        let maximal = heap.maximal();
        let step = heap.minimal().into_iter().find_map(|i| {
            let l = heap.letter(i);
            maximal.iter().find(|&&j| j != i && heap.letter(j) == l.inv()).map(|_| l)
        });
        match step {
            Some(l) => {
                let before = core.len();
                core = raag.letter(l.inv()).mul_unchecked(&core).mul_word(&[l]);
                conj = conj.mul_word(&[l]);
                if core.len() + 2 != before {
                    return Err(Error::InternalInvariant(format!(
                        "cyclic reduction of {g} did not shorten the core"
                    )));
                }
            }
            None => break,
        }
    }
    let delta = core.len();
    let ax = AxisData { g: g.clone(), conjugator: conj, core, delta };
    if ax.core.conjugate_by(&ax.conjugator) != *g {
        return Err(Error::InternalInvariant(format!("conjugation check failed for {g}")));
    }
    for n in 1..=PERIODICITY_CHECK {
        let d = ax.core.pow(n as i64).len();
        if d != n * delta {
            return Err(Error::InternalInvariant(format!(
                "d(o, g^{n} o) = {d} but n·δ = {} for g = {g}",
                n * delta
            )));
        }
    }
    Ok(ax)
}

/// `[gᵃ·o, gᵇ·o]` along the word `c^(b−a)`, with each position tagged by the
/// fundamental domain `[gᵏo, gᵏ⁺¹o]` it belongs to.
#[derive(Clone, Debug)]
pub struct AxisWindow {
    pub n_from: i64,
    pub n_to: i64,
    pub interval: Interval,
    pub blocks: Vec<i64>,
}

impl AxisWindow {
    pub fn delta(&self) -> usize {
        if self.n_to == self.n_from {
            0
        } else {
            self.interval.len() / (self.n_to - self.n_from) as usize
        }
    }

    /// Position of the `i`-th halfspace of block `k`.
    pub fn position(&self, block: i64, i: usize) -> usize {
        (block - self.n_from) as usize * self.delta() + i
    }
}

pub fn axis_window(ax: &AxisData, n: usize) -> Result<AxisWindow> {
    axis_window_range(ax, 0, n as i64)
}

pub fn axis_window_range(ax: &AxisData, from: i64, to: i64) -> Result<AxisWindow> {
    if !ax.is_hyperbolic() {
        return Err(Error::Precondition(format!("{} is elliptic (identity); it has no axis", ax.g)));
    }
    if to < from {
        return Err(Error::Precondition(format!("empty window range {from}..{to}")));
    }
    let start = ax.orbit_point(from);
    let word = ax.core_power_word(to - from);
    let interval = Interval::from_word(&start, word)?;
    let blocks = (0..interval.len()).map(|i| from + (i / ax.delta) as i64).collect();
    Ok(AxisWindow { n_from: from, n_to: to, interval, blocks })
}

/// The fundamental domain `[o, g·o]`.
pub fn fundamental_interval(ax: &AxisData) -> Result<Interval> {
    Interval::from_word(ax.base_vertex(), ax.core.word().to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::{distance, relation, translate_halfspace, HalfspaceRelation::*};
    use crate::raag::{DefiningGraph, Raag};

    fn f2() -> Raag {
        Raag::new(DefiningGraph::free(&["a", "b"]).unwrap())
    }

    fn z2() -> Raag {
        Raag::new(DefiningGraph::free_abelian(&["a", "b"]).unwrap())
    }

    #[test]
    fn reduction_examples() {
        let f = f2();
        let ax = cyclically_reduce(&f.parse("a b a^-1").unwrap()).unwrap();
        assert_eq!(ax.conjugator.to_string(), "a");
        assert_eq!(ax.core.to_string(), "b");
        assert_eq!(ax.delta, 1);
        let ax = cyclically_reduce(&f.parse("a b a b").unwrap()).unwrap();
        assert!(ax.conjugator.is_identity());
        assert_eq!(ax.delta, 4);
        let z = z2();
        let g = z.parse("a b").unwrap();
        let ax = cyclically_reduce(&g).unwrap();
        assert!(ax.conjugator.is_identity());
        assert_eq!(ax.delta, 2);
        for n in 1..6 {
            assert_eq!(distance(&z.identity(), &g.pow(n)).unwrap(), 2 * n as usize);
        }
        let id = cyclically_reduce(&z.identity()).unwrap();
        assert_eq!(id.delta, 0);
        assert!(axis_window(&id, 1).is_err());
    }

    #[test]
    fn window_examples() {
        let f = f2();
        let ax = cyclically_reduce(&f.parse("a b a b").unwrap()).unwrap();
        let w = axis_window(&ax, 2).unwrap();
        assert_eq!(w.interval.len(), 8);
        for i in 0..8 {
            for j in i + 1..8 {
                assert!(w.interval.heap().precedes(i, j));
            }
        }
        let z = z2();
        let ax = cyclically_reduce(&z.parse("a b").unwrap()).unwrap();
        let w = axis_window(&ax, 2).unwrap();
        let h = w.interval.halfspaces();
        assert_eq!(h.len(), 4);
        assert_eq!(relation(&h[0], &h[2]).unwrap(), FirstContainsSecond);
        assert_eq!(relation(&h[1], &h[3]).unwrap(), FirstContainsSecond);
        assert_eq!(relation(&h[0], &h[1]).unwrap(), Transverse);
        assert_eq!(relation(&h[0], &h[3]).unwrap(), Transverse);
        for i in 0..2 {
            assert_eq!(translate_halfspace(&ax.g, &h[i]).unwrap(), h[i + 2]);
        }
        let w0 = axis_window(&ax, 0).unwrap();
        assert!(w0.interval.is_empty());
        let w1 = axis_window(&ax, 1).unwrap();
        assert_eq!(w1.interval.target(), &ax.g);
    }

    #[test]
    fn conjugated_axis() {
        let f = f2();
        let g = f.parse("b a a b^-1").unwrap();
        let ax = cyclically_reduce(&g).unwrap();
        assert_eq!(ax.conjugator.to_string(), "b");
        assert_eq!(ax.core.to_string(), "a a");
        let w = axis_window_range(&ax, -1, 2).unwrap();
        assert_eq!(w.interval.len(), 6);
        assert_eq!(w.blocks, vec![-1, -1, 0, 0, 1, 1]);
        assert_eq!(w.interval.source(), &ax.orbit_point(-1));
        assert_eq!(w.interval.target(), &ax.orbit_point(2));
    }
}

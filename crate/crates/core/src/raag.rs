//! Right-angled Artin groups: presentations, trace normal forms, heaps of
//! pieces and parabolic coset arithmetic.
//!
//! Elements are stored as reduced words in shortlex-least order among all
//! commutation-equivalent spellings, so equality of elements is equality of
//! stored words.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::ops::{Deref, Mul};
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Gen = u16;

/// Generator limit imposed by the `u64` backing of [`GenSet`].
pub const MAX_GENERATORS: usize = 64;

/// A generator or its inverse. Ordered by generator, then `+1` before `-1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: Gen,
    pub inverse: bool,
}

impl Letter {
    pub fn pos(gen: Gen) -> Self {
        Letter { gen, inverse: false }
    }

    pub fn neg(gen: Gen) -> Self {
        Letter { gen, inverse: true }
    }

    pub fn inv(self) -> Self {
        Letter { gen: self.gen, inverse: !self.inverse }
    }

    pub fn sign(self) -> i8 {
        if self.inverse {
            -1
        } else {
            1
        }
    }
}

/// A set of generators.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct GenSet(pub u64);

impl GenSet {
    pub const EMPTY: GenSet = GenSet(0);

    pub fn all(n: usize) -> Self {
        if n >= 64 {
            GenSet(u64::MAX)
        } else {
            GenSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(v: Gen) -> Self {
        GenSet(1u64 << v)
    }

    pub fn contains(self, v: Gen) -> bool {
        self.0 >> v & 1 == 1
    }

    pub fn insert(&mut self, v: Gen) {
        self.0 |= 1u64 << v;
    }

    pub fn intersect(self, other: GenSet) -> GenSet {
        GenSet(self.0 & other.0)
    }

    pub fn union(self, other: GenSet) -> GenSet {
        GenSet(self.0 | other.0)
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = Gen> {
        (0..64u16).filter(move |&v| self.contains(v))
    }
}

impl FromIterator<Gen> for GenSet {
    fn from_iter<I: IntoIterator<Item = Gen>>(iter: I) -> Self {
        let mut s = GenSet::EMPTY;
        for v in iter {
            s.insert(v);
        }
        s
    }
}

/// On-disk form of a defining graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphFile {
    pub generators: Vec<String>,
    #[serde(default)]
    pub edges: Vec<[String; 2]>,
}

/// Finite simplicial graph: generators and commutation edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefiningGraph {
    names: Vec<String>,
    links: Vec<GenSet>,
    index: HashMap<String, Gen>,
}

impl DefiningGraph {
    pub fn new<S: AsRef<str>>(generators: &[S], edges: &[(S, S)]) -> Result<Self> {
        if generators.len() > MAX_GENERATORS {
            return Err(Error::Presentation(format!(
                "at most {MAX_GENERATORS} generators are supported, got {}",
                generators.len()
            )));
        }
        let mut index = HashMap::new();
        let mut names = Vec::with_capacity(generators.len());
        for (i, name) in generators.iter().enumerate() {
            let name = name.as_ref();
            if name.is_empty()
                || name == "1"
                || name.contains('^')
                || name.chars().any(char::is_whitespace)
            {
                return Err(Error::Presentation(format!("invalid generator name {name:?}")));
            }
            if index.insert(name.to_string(), i as Gen).is_some() {
                return Err(Error::Presentation(format!("duplicate generator {name:?}")));
            }
            names.push(name.to_string());
        }
        let mut links = vec![GenSet::EMPTY; names.len()];
        for (u, v) in edges {
            let (u, v) = (u.as_ref(), v.as_ref());
            let iu = *index
                .get(u)
                .ok_or_else(|| Error::Presentation(format!("edge endpoint {u:?} is not a generator")))?;
            let iv = *index
                .get(v)
                .ok_or_else(|| Error::Presentation(format!("edge endpoint {v:?} is not a generator")))?;
            if iu == iv {
                return Err(Error::Presentation(format!("self-loop at {u:?}")));
            }
            links[iu as usize].insert(iv);
            links[iv as usize].insert(iu);
        }
        Ok(DefiningGraph { names, links, index })
    }

    pub fn from_file(file: &GraphFile) -> Result<Self> {
        let edges: Vec<(&str, &str)> = file.edges.iter().map(|[a, b]| (a.as_str(), b.as_str())).collect();
        let gens: Vec<&str> = file.generators.iter().map(String::as_str).collect();
        DefiningGraph::new(&gens, &edges)
    }

    pub fn to_file(&self) -> GraphFile {
        let mut edges = Vec::new();
        for u in 0..self.rank() {
            for v in self.links[u].iter() {
                if (v as usize) > u {
                    edges.push([self.names[u].clone(), self.names[v as usize].clone()]);
                }
            }
        }
        GraphFile { generators: self.names.clone(), edges }
    }

    /// Free group on the given generators (no edges).
    pub fn free<S: AsRef<str>>(generators: &[S]) -> Result<Self> {
        DefiningGraph::new::<&str>(
            &generators.iter().map(|s| s.as_ref()).collect::<Vec<_>>(),
            &[],
        )
    }

    /// Free abelian group: the complete graph.
    pub fn free_abelian<S: AsRef<str>>(generators: &[S]) -> Result<Self> {
        let gens: Vec<&str> = generators.iter().map(|s| s.as_ref()).collect();
        let mut edges = Vec::new();
        for i in 0..gens.len() {
            for j in i + 1..gens.len() {
                edges.push((gens[i], gens[j]));
            }
        }
        DefiningGraph::new(&gens, &edges)
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, v: Gen) -> &str {
        &self.names[v as usize]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn gen(&self, name: &str) -> Option<Gen> {
        self.index.get(name).copied()
    }

    pub fn all(&self) -> GenSet {
        GenSet::all(self.rank())
    }

    /// Generators adjacent to `v`.
    pub fn link(&self, v: Gen) -> GenSet {
        self.links[v as usize]
    }

    /// Distinct and joined by an edge.
    pub fn commute(&self, u: Gen, v: Gen) -> bool {
        self.links[u as usize].contains(v)
    }

    /// Letters on these generators cannot swap past each other.
    pub fn dependent(&self, u: Gen, v: Gen) -> bool {
        u == v || !self.commute(u, v)
    }

    pub fn parse_word(&self, s: &str) -> Result<Vec<Letter>> {
        let mut out = Vec::new();
        let s = s.trim();
        if s.is_empty() || s == "1" {
            return Ok(out);
        }
        for (i, tok) in s.split_whitespace().enumerate() {
            let (name, inverse) = match tok.strip_suffix("^-1") {
                Some(n) => (n, true),
                None => (tok, false),
            };
            let gen = self.gen(name).ok_or_else(|| Error::Parse {
                location: format!("token {}", i + 1),
                message: format!("unknown generator {name:?}"),
            })?;
            out.push(Letter { gen, inverse });
        }
        Ok(out)
    }

    pub fn format_word(&self, word: &[Letter]) -> String {
        word.iter()
            .map(|l| {
                if l.inverse {
                    format!("{}^-1", self.name(l.gen))
                } else {
                    self.name(l.gen).to_string()
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    fn check_letters(&self, raw: &[Letter]) -> Result<()> {
        match raw.iter().find(|l| l.gen as usize >= self.rank()) {
            Some(l) => Err(Error::Presentation(format!("unknown generator id {}", l.gen))),
            None => Ok(()),
        }
    }
}

/// Free cancellation through commutations. The output is reduced but not
/// necessarily in canonical order.
pub(crate) fn reduce(graph: &DefiningGraph, raw: &[Letter]) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::with_capacity(raw.len());
    for &l in raw {
        let mut cancel = None;
        for j in (0..out.len()).rev() {
            let m = out[j];
            if m.gen == l.gen {
                if m.inverse != l.inverse {
                    cancel = Some(j);
                }
                break;
            }
            if !graph.commute(m.gen, l.gen) {
                break;
            }
        }
        match cancel {
            Some(j) => {
                out.remove(j);
            }
            None => out.push(l),
        }
    }
    out
}

/// Shortlex-least linear extension of the heap of a reduced word.
pub(crate) fn canonical_order(graph: &DefiningGraph, word: &[Letter]) -> Vec<Letter> {
    let n = word.len();
    let mut indeg = vec![0usize; n];
    for j in 0..n {
        for i in 0..j {
            if graph.dependent(word[i].gen, word[j].gen) {
                indeg[j] += 1;
            }
        }
    }
    let mut done = vec![false; n];
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        // available letters have pairwise distinct generators, so the minimum is unique
        let next = (0..n)
            .filter(|&i| !done[i] && indeg[i] == 0)
            .min_by_key(|&i| word[i])
            .expect("heap of a finite word has a minimal element");
        done[next] = true;
        out.push(word[next]);
        for j in next + 1..n {
            if !done[j] && graph.dependent(word[next].gen, word[j].gen) {
                indeg[j] -= 1;
            }
        }
    }
    out
}

/// Shared handle on a defining graph; every element carries one.
#[derive(Clone, Debug)]
pub struct Raag(Arc<DefiningGraph>);

impl Deref for Raag {
    type Target = DefiningGraph;
    fn deref(&self) -> &DefiningGraph {
        &self.0
    }
}

impl PartialEq for Raag {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}

impl Eq for Raag {}

impl Raag {
    pub fn new(graph: DefiningGraph) -> Self {
        Raag(Arc::new(graph))
    }

    pub fn graph(&self) -> &DefiningGraph {
        &self.0
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement { graph: self.clone(), word: Vec::new() }
    }

    pub fn generator(&self, v: Gen) -> GroupElement {
        GroupElement { graph: self.clone(), word: vec![Letter::pos(v)] }
    }

    pub fn letter(&self, l: Letter) -> GroupElement {
        GroupElement { graph: self.clone(), word: vec![l] }
    }

    pub fn element(&self, raw: &[Letter]) -> Result<GroupElement> {
        normal_form(self, raw)
    }

    pub fn parse(&self, s: &str) -> Result<GroupElement> {
        let raw = self.parse_word(s)?;
        self.element(&raw)
    }

    /// Builds an element from letters known to be in range.
    pub(crate) fn elem(&self, raw: &[Letter]) -> GroupElement {
        let reduced = reduce(self, raw);
        GroupElement { graph: self.clone(), word: canonical_order(self, &reduced) }
    }
}

/// Reduced canonical form of a raw word.
pub fn normal_form(graph: &Raag, raw: &[Letter]) -> Result<GroupElement> {
    graph.check_letters(raw)?;
    Ok(graph.elem(raw))
}

/// Group element in canonical trace normal form; doubles as a vertex of the
/// cube complex.
#[derive(Clone, Debug)]
pub struct GroupElement {
    graph: Raag,
    word: Vec<Letter>,
}

impl PartialEq for GroupElement {
    fn eq(&self, other: &Self) -> bool {
        self.word == other.word && self.graph == other.graph
    }
}

impl Eq for GroupElement {}

impl std::hash::Hash for GroupElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.word.hash(state);
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", self.graph.format_word(&self.word))
        }
    }
}

pub(crate) fn same_graph(x: &GroupElement, y: &GroupElement) -> Result<()> {
    if x.graph == y.graph {
        Ok(())
    } else {
        Err(Error::Presentation("operands belong to different defining graphs".into()))
    }
}

impl GroupElement {
    pub fn raag(&self) -> &Raag {
        &self.graph
    }

    pub fn word(&self) -> &[Letter] {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn multiply(&self, other: &GroupElement) -> Result<GroupElement> {
        same_graph(self, other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &GroupElement) -> GroupElement {
        let mut raw = self.word.clone();
        raw.extend_from_slice(&other.word);
        self.graph.elem(&raw)
    }

    /// Right multiplication by a raw word.
    pub fn mul_word(&self, raw: &[Letter]) -> GroupElement {
        let mut w = self.word.clone();
        w.extend_from_slice(raw);
        self.graph.elem(&w)
    }

    pub fn invert(&self) -> GroupElement {
        let raw: Vec<Letter> = self.word.iter().rev().map(|l| l.inv()).collect();
        GroupElement { graph: self.graph.clone(), word: canonical_order(&self.graph, &raw) }
    }

    pub fn pow(&self, n: i64) -> GroupElement {
        let base = if n < 0 { self.invert() } else { self.clone() };
        let mut raw = Vec::with_capacity(base.len() * n.unsigned_abs() as usize);
        for _ in 0..n.unsigned_abs() {
            raw.extend_from_slice(&base.word);
        }
        self.graph.elem(&raw)
    }

    pub fn conjugate_by(&self, h: &GroupElement) -> GroupElement {
        h.mul_unchecked(self).mul_unchecked(&h.invert())
    }

    /// Exponent sum of each generator: the image in the abelianization.
    pub fn exponent_sums(&self) -> Vec<i64> {
        let mut sums = vec![0i64; self.graph.rank()];
        for l in &self.word {
            sums[l.gen as usize] += l.sign() as i64;
        }
        sums
    }

    pub fn in_commutator_subgroup(&self) -> bool {
        self.exponent_sums().iter().all(|&s| s == 0)
    }

    pub fn support(&self) -> GenSet {
        self.word.iter().map(|l| l.gen).collect()
    }
}

impl Mul for &GroupElement {
    type Output = GroupElement;

    /// Panics if the operands live on different graphs; use
    /// [`GroupElement::multiply`] for a checked product.
    fn mul(self, rhs: &GroupElement) -> GroupElement {
        self.multiply(rhs).expect("multiplying elements of different groups")
    }
}

pub fn multiply(x: &GroupElement, y: &GroupElement) -> Result<GroupElement> {
    x.multiply(y)
}

pub fn invert(x: &GroupElement) -> GroupElement {
    x.invert()
}

/// Dependency order on the positions of a reduced word.
#[derive(Clone, Debug)]
pub struct Heap {
    letters: Vec<Letter>,
    below: Vec<FixedBitSet>,
}

impl Heap {
    pub fn new(graph: &DefiningGraph, letters: Vec<Letter>) -> Heap {
        let n = letters.len();
        let mut below: Vec<FixedBitSet> = Vec::with_capacity(n);
        for j in 0..n {
            let mut set = FixedBitSet::with_capacity(n);
            for i in 0..j {
                if graph.dependent(letters[i].gen, letters[j].gen) {
                    set.insert(i);
                    set.union_with(&below[i]);
                }
            }
            below.push(set);
        }
        Heap { letters, below }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn letter(&self, i: usize) -> Letter {
        self.letters[i]
    }

    /// Strict order: `i` must come before `j` in every spelling.
    pub fn precedes(&self, i: usize, j: usize) -> bool {
        i < j && self.below[j].contains(i)
    }

    pub fn comparable(&self, i: usize, j: usize) -> bool {
        self.precedes(i, j) || self.precedes(j, i)
    }

    /// `i` is covered by `j`: comparable with nothing strictly between.
    pub fn is_cover(&self, i: usize, j: usize) -> bool {
        self.precedes(i, j) && !self.below[j].ones().any(|k| self.below[k].contains(i))
    }

    pub fn covers_above(&self, i: usize) -> Vec<usize> {
        (i + 1..self.len()).filter(|&j| self.is_cover(i, j)).collect()
    }

    pub fn covers_below(&self, j: usize) -> Vec<usize> {
        (0..j).filter(|&i| self.is_cover(i, j)).collect()
    }

    pub fn minimal(&self) -> Vec<usize> {
        (0..self.len()).filter(|&j| self.below[j].is_clear()).collect()
    }

    pub fn maximal(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| (i + 1..self.len()).all(|j| !self.below[j].contains(i))).collect()
    }

    /// Positions strictly below `i`, in word order.
    pub fn down_set(&self, i: usize) -> Vec<usize> {
        self.below[i].ones().collect()
    }

    pub fn down_set_word(&self, i: usize) -> Vec<Letter> {
        self.below[i].ones().map(|k| self.letters[k]).collect()
    }

    pub fn is_linear_extension(&self, order: &[usize]) -> bool {
        if order.len() != self.len() {
            return false;
        }
        let mut seen = FixedBitSet::with_capacity(self.len());
        for &p in order {
            if p >= self.len() || seen.contains(p) || !self.below[p].is_subset(&seen) {
                return false;
            }
            seen.insert(p);
        }
        true
    }
}

pub fn heap_of(x: &GroupElement) -> Heap {
    Heap::new(x.raag(), x.word.clone())
}

/// Positions forming the largest up-set of `word` with all generators in `set`.
fn max_upset(graph: &DefiningGraph, word: &[Letter], set: GenSet) -> Vec<bool> {
    let n = word.len();
    let mut removable = vec![false; n];
    for j in (0..n).rev() {
        removable[j] = set.contains(word[j].gen)
            && (j + 1..n).all(|k| !graph.dependent(word[j].gen, word[k].gen) || removable[k]);
    }
    removable
}

fn max_downset(graph: &DefiningGraph, word: &[Letter], set: GenSet) -> Vec<bool> {
    let n = word.len();
    let mut removable = vec![false; n];
    for i in 0..n {
        removable[i] = set.contains(word[i].gen)
            && (0..i).all(|k| !graph.dependent(word[k].gen, word[i].gen) || removable[k]);
    }
    removable
}

fn split(word: &[Letter], mask: &[bool]) -> (Vec<Letter>, Vec<Letter>) {
    let mut taken = Vec::new();
    let mut rest = Vec::new();
    for (l, &m) in word.iter().zip(mask) {
        if m {
            taken.push(*l);
        } else {
            rest.push(*l);
        }
    }
    (taken, rest)
}

/// Minimal-length representative of the coset `x·⟨S⟩`: every heap-maximal
/// letter with generator in `S` is deleted until none remains.
pub fn strip_parabolic_right(x: &GroupElement, s: GenSet) -> GroupElement {
    let mask = max_upset(x.raag(), &x.word, s);
    if !mask.iter().any(|&m| m) {
        return x.clone();
    }
    let (_, rest) = split(&x.word, &mask);
    GroupElement { graph: x.graph.clone(), word: canonical_order(x.raag(), &rest) }
}

/// Mirror of [`strip_parabolic_right`] for `⟨S⟩·x`.
pub fn strip_parabolic_left(x: &GroupElement, s: GenSet) -> GroupElement {
    let mask = max_downset(x.raag(), &x.word, s);
    let (_, rest) = split(&x.word, &mask);
    GroupElement { graph: x.graph.clone(), word: canonical_order(x.raag(), &rest) }
}

pub fn in_same_coset(x: &GroupElement, y: &GroupElement, s: GenSet) -> bool {
    strip_parabolic_right(x, s) == strip_parabolic_right(y, s)
}

/// `x = left · core · right` with `left ∈ ⟨P⟩`, `right ∈ ⟨B⟩` and `core` the
/// minimal representative of the double coset `⟨P⟩ x ⟨B⟩`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubleCosetSplit {
    pub left: GroupElement,
    pub core: GroupElement,
    pub right: GroupElement,
}

pub fn double_coset_split(x: &GroupElement, p: GenSet, b: GenSet) -> DoubleCosetSplit {
    let g = x.raag();
    let down = max_downset(g, &x.word, p);
    let (left, rest) = split(&x.word, &down);
    let up = max_upset(g, &rest, b);
    let (right, core) = split(&rest, &up);
    let wrap = |w: Vec<Letter>| GroupElement { graph: x.graph.clone(), word: canonical_order(g, &w) };
    DoubleCosetSplit { left: wrap(left), core: wrap(core), right: wrap(right) }
}

/// One requirement `g·from·⟨parabolic⟩ = to·⟨parabolic⟩` on a translation `g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetConstraint {
    pub from: GroupElement,
    pub to: GroupElement,
    pub parabolic: GenSet,
}

impl CosetConstraint {
    pub fn new(from: GroupElement, to: GroupElement, parabolic: GenSet) -> Self {
        CosetConstraint { from, to, parabolic }
    }

    pub fn holds(&self, g: &GroupElement) -> bool {
        in_same_coset(&g.mul_unchecked(&self.from), &self.to, self.parabolic)
    }
}

fn check_constraints(constraints: &[CosetConstraint]) -> Result<()> {
    let first = constraints
        .first()
        .ok_or_else(|| Error::Precondition("translate_witness needs at least one constraint".into()))?;
    for c in constraints {
        same_graph(&first.from, &c.from)?;
        same_graph(&first.from, &c.to)?;
    }
    Ok(())
}

/// Bounded witness search: tries `g = to₀·ℓ·from₀⁻¹` for `ℓ ∈ ⟨S₀⟩` with
/// `|ℓ| ≤ radius`, in breadth-first shortlex order. Sound unconditionally,
/// complete only within the bound.
pub fn translate_witness(constraints: &[CosetConstraint], radius: usize) -> Option<GroupElement> {
    check_constraints(constraints).ok()?;
    let first = &constraints[0];
    let raag = first.from.raag().clone();
    let letters: Vec<Letter> = first
        .parabolic
        .iter()
        .flat_map(|v| [Letter::pos(v), Letter::neg(v)])
        .collect();
    let from_inv = first.from.invert();
    let mut seen: HashSet<GroupElement> = HashSet::new();
    let mut queue = VecDeque::new();
    let id = raag.identity();
    seen.insert(id.clone());
    queue.push_back(id);
    while let Some(ell) = queue.pop_front() {
        let g = first.to.mul_unchecked(&ell).mul_unchecked(&from_inv);
        if constraints.iter().all(|c| c.holds(&g)) {
            return Some(g);
        }
        if ell.len() < radius {
            for &l in &letters {
                let next = ell.mul_word(&[l]);
                if next.len() == ell.len() + 1 && seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
    }
    None
}

/// Exact solver for simultaneous coset constraints.
///
/// Peels constraints one at a time: the translations compatible with the
/// first constraint inside the current parabolic `⟨P⟩` form the set
/// `left'·⟨C⟩·left⁻¹`, where `left`, `left'` come from double coset splits of
/// the two sides and `C` is the part of `P ∩ B` commuting with the core;
/// the remaining constraints are then pulled back into `⟨C⟩`. The answer is
/// verified against every constraint before it is returned.
pub fn solve_translation(constraints: &[CosetConstraint]) -> Option<GroupElement> {
    check_constraints(constraints).ok()?;
    let raag = constraints[0].from.raag().clone();
    let pulled: Vec<(GroupElement, GroupElement, GenSet)> = constraints
        .iter()
        .map(|c| (c.from.clone(), c.to.clone(), c.parabolic))
        .collect();
    let g = solve_in(&raag, raag.all(), pulled)?;
    if constraints.iter().all(|c| c.holds(&g)) {
        Some(g)
    } else {
        None
    }
}

fn solve_in(
    raag: &Raag,
    p: GenSet,
    mut constraints: Vec<(GroupElement, GroupElement, GenSet)>,
) -> Option<GroupElement> {
    if constraints.is_empty() {
        return Some(raag.identity());
    }
    let (from, to, b) = constraints.remove(0);
    let src = double_coset_split(&from, p, b);
    let dst = double_coset_split(&to, p, b);
    if src.core != dst.core {
        return None;
    }
    let mut c = p.intersect(b);
    for l in src.core.word() {
        c = c.intersect(raag.link(l.gen));
    }
    let src_inv = src.left.invert();
    let dst_inv = dst.left.invert();
    let rest = constraints
        .into_iter()
        .map(|(f, t, s)| (src_inv.mul_unchecked(&f), dst_inv.mul_unchecked(&t), s))
        .collect();
    let w = solve_in(raag, c, rest)?;
    Some(dst.left.mul_unchecked(&w).mul_unchecked(&src_inv))
}

#[cfg(test)]
mod tests {
    use super::*;

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
    fn graph_validation() {
        assert!(DefiningGraph::new(&["a", "a"], &[]).is_err());
        assert!(DefiningGraph::new(&["a", "b"], &[("a", "a")]).is_err());
        assert!(DefiningGraph::new(&["a", "b"], &[("a", "c")]).is_err());
        let empty = DefiningGraph::free::<&str>(&[]).unwrap();
        assert_eq!(empty.rank(), 0);
        let g = Raag::new(empty);
        assert!(g.parse("").unwrap().is_identity());
    }

    #[test]
    fn normal_form_examples() {
        let f = f2();
        assert_eq!(el(&f, "a b b^-1 a").to_string(), "a a");
        let z = z2();
        assert_eq!(el(&z, "b a").to_string(), "a b");
        let p = path();
        assert_eq!(el(&p, "c a c^-1").len(), 3);
        assert_eq!(el(&p, "c b c^-1").to_string(), "b");
    }

    #[test]
    fn unknown_generator_is_an_error() {
        let f = f2();
        assert!(matches!(f.parse("a x"), Err(Error::Parse { .. })));
        assert!(matches!(normal_form(&f, &[Letter::pos(7)]), Err(Error::Presentation(_))));
    }

    #[test]
    fn multiply_and_invert_examples() {
        let f = f2();
        assert_eq!((&el(&f, "a b") * &el(&f, "b^-1 a")).to_string(), "a a");
        assert_eq!(el(&f, "a b").invert().to_string(), "b^-1 a^-1");
        assert!(f.identity().invert().is_identity());
        let z = z2();
        assert_eq!((&el(&z, "a b") * &el(&z, "a")).to_string(), "a a b");
        assert_eq!(el(&z, "a b").invert().to_string(), "a^-1 b^-1");
        let x = el(&z, "a b^-1 a");
        assert!((&x * &x.invert()).is_identity());
    }

    #[test]
    fn mismatched_graphs_rejected() {
        let x = el(&f2(), "a");
        let y = el(&z2(), "a");
        assert!(x.multiply(&y).is_err());
    }

    #[test]
    fn heap_examples() {
        let z = z2();
        let h = heap_of(&el(&z, "a b"));
        assert!(!h.comparable(0, 1));
        let f = f2();
        let h = heap_of(&el(&f, "a b"));
        assert!(h.precedes(0, 1));
        let p = path();
        let h = heap_of(&el(&p, "a b c"));
        assert!(!h.comparable(0, 1));
        assert!(!h.comparable(1, 2));
        assert!(h.precedes(0, 2));
        assert!(h.is_cover(0, 2));
    }

    #[test]
    fn strip_examples() {
        let z = z2();
        let b = GenSet::singleton(z.gen("b").unwrap());
        assert_eq!(strip_parabolic_right(&el(&z, "a b"), b).to_string(), "a");
        let f = f2();
        let a = GenSet::singleton(0);
        assert_eq!(strip_parabolic_right(&el(&f, "a b"), a).to_string(), "a b");
        let p = path();
        let c = GenSet::singleton(2);
        assert_eq!(strip_parabolic_right(&el(&p, "c a"), c).to_string(), "c a");
        assert_eq!(strip_parabolic_right(&el(&p, "a c"), c).to_string(), "a");
        let b = GenSet::singleton(1);
        assert_eq!(strip_parabolic_right(&el(&p, "c b"), b).to_string(), "c");
    }

    #[test]
    fn coset_examples() {
        let z = z2();
        assert!(in_same_coset(&el(&z, "a b"), &el(&z, "a"), GenSet::singleton(1)));
        let f = f2();
        assert!(!in_same_coset(&el(&f, "a b"), &el(&f, "b a"), GenSet::singleton(0)));
        let x = el(&f, "a b^-1");
        assert!(in_same_coset(&x, &x, GenSet::singleton(1)));
    }

    #[test]
    fn witness_examples() {
        let f = f2();
        let g0 = el(&f, "a b a");
        let c = [CosetConstraint::new(f.identity(), g0.clone(), GenSet::EMPTY)];
        assert_eq!(translate_witness(&c, 0), Some(g0.clone()));
        assert_eq!(solve_translation(&c), Some(g0));

        let c = [
            CosetConstraint::new(f.identity(), el(&f, "a a"), GenSet::EMPTY),
            CosetConstraint::new(el(&f, "b"), el(&f, "a a b"), GenSet::EMPTY),
        ];
        assert_eq!(translate_witness(&c, 3).unwrap().to_string(), "a a");
        assert_eq!(solve_translation(&c).unwrap().to_string(), "a a");

        let z = z2();
        let b = GenSet::singleton(1);
        let c = [
            CosetConstraint::new(z.identity(), el(&z, "a"), b),
            CosetConstraint::new(z.identity(), el(&z, "a a"), b),
        ];
        assert_eq!(translate_witness(&c, 6), None);
        assert_eq!(solve_translation(&c), None);
    }

    #[test]
    fn double_coset_split_recombines() {
        let p = path();
        let x = el(&p, "a b c a^-1 b");
        let all = GenSet::all(3);
        for ps in 0..8u64 {
            for bs in 0..8u64 {
                let s = double_coset_split(&x, GenSet(ps & all.0), GenSet(bs & all.0));
                assert_eq!(&(&s.left * &s.core) * &s.right, x);
            }
        }
    }
}

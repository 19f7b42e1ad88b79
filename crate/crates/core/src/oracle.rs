//! Brute-force model of a finite ball in the universal cover, used to check
//! the combinatorial fast path.
//!
//! Vertices are identified through the Tits representation of the
//! right-angled Coxeter group into which the Artin group embeds, so no
//! normal form is involved in deciding when two words name the same vertex.
//! Hyperplanes are classes of edges under square-parallelism, and sides are
//! connected components after deleting a class.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;
use std::sync::OnceLock;

use fixedbitset::FixedBitSet;

use crate::cube::{Halfspace, HalfspaceRelation, Sign};
use crate::error::{Error, Result};
use crate::raag::{Gen, GroupElement, Letter, Raag};

pub const DEFAULT_RADIUS_CAP: usize = 6;
pub const MAX_ORACLE_RANK: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Matrix {
    n: usize,
    a: Vec<i128>,
}

impl Matrix {
    fn identity(n: usize) -> Matrix {
        let mut a = vec![0; n * n];
        for i in 0..n {
            a[i * n + i] = 1;
        }
        Matrix { n, a }
    }

    fn mul(&self, o: &Matrix) -> Option<Matrix> {
        let n = self.n;
        let mut a = vec![0i128; n * n];
        for i in 0..n {
            for k in 0..n {
                let x = self.a[i * n + k];
                if x == 0 {
                    continue;
                }
                for j in 0..n {
                    let t = x.checked_mul(o.a[k * n + j])?;
                    a[i * n + j] = a[i * n + j].checked_add(t)?;
                }
            }
        }
        Some(Matrix { n, a })
    }
}

fn letter_index(l: Letter) -> usize {
    2 * l.gen as usize + usize::from(l.inverse)
}

/// Matrices of each letter: `v ↦ σ(v,0)·σ(v,1)`.
fn tits_letters(raag: &Raag) -> Vec<Matrix> {
    let k = raag.rank();
    let n = 2 * k;
    let adjacent = |i: usize, j: usize| {
        let (v, w) = ((i / 2) as Gen, (j / 2) as Gen);
        if v == w {
            return false;
        }
        match (i % 2, j % 2) {
            (0, 0) => raag.commute(v, w),
            _ => true,
        }
    };
    let reflection = |i: usize| {
        let mut m = Matrix::identity(n);
        for j in 0..n {
            let b = if i == j {
                1
            } else if adjacent(i, j) {
                0
            } else {
                -1
            };
            m.a[i * n + j] -= 2 * b;
        }
        m
    };
    let mut out = Vec::with_capacity(n);
    for v in 0..k {
        let (s0, s1) = (reflection(2 * v), reflection(2 * v + 1));
        out.push(s0.mul(&s1).expect("small entries"));
        out.push(s1.mul(&s0).expect("small entries"));
    }
    out
}

/// Halfspace of the ball, named by edge class and side.
///
/// `Plus` is the side containing the head of the class's first edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OracleHalfspace {
    pub class: usize,
    pub sign: Sign,
}

impl OracleHalfspace {
    pub fn complement(self) -> OracleHalfspace {
        OracleHalfspace { class: self.class, sign: self.sign.flip() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleVerdict<T> {
    pub query: String,
    pub answer: T,
    pub interior_safe: bool,
}

impl<T> OracleVerdict<T> {
    fn new(query: String, answer: T, interior_safe: bool) -> Self {
        OracleVerdict { query, answer, interior_safe }
    }
}

/// Exhaustive copy search result.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleCopies {
    /// Every `g` in the ball whose translate lands in the interval.
    pub witnesses: Vec<GroupElement>,
    /// The distinct translated chains.
    pub copies: BTreeSet<Vec<OracleHalfspace>>,
}

#[derive(Clone, Copy, Debug)]
struct Edge {
    tail: usize,
    head: usize,
    label: Gen,
}

/// The ball of a given radius about the identity vertex.
pub struct BallComplex {
    raag: Raag,
    radius: usize,
    letters: Vec<Matrix>,
    index: HashMap<Matrix, usize>,
    matrices: Vec<Matrix>,
    depth: Vec<usize>,
    elements: Vec<GroupElement>,
    edges: Vec<Edge>,
    edge_at: HashMap<(usize, Gen), usize>,
    adjacency: Vec<Vec<(usize, usize)>>,
    squares: Vec<[usize; 4]>,
    class_of: Vec<usize>,
    classes: Vec<Vec<usize>>,
    sides: Vec<OnceLock<Option<FixedBitSet>>>,
    distances: Vec<OnceLock<Vec<u16>>>,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

pub fn build_ball(raag: &Raag, radius: usize) -> Result<BallComplex> {
    build_ball_capped(raag, radius, DEFAULT_RADIUS_CAP)
}

pub fn build_ball_capped(raag: &Raag, radius: usize, cap: usize) -> Result<BallComplex> {
    if radius > cap {
        return Err(Error::Oracle(format!("radius {radius} exceeds the cap {cap}")));
    }
    if raag.rank() > MAX_ORACLE_RANK {
        return Err(Error::Oracle(format!(
            "rank {} exceeds the oracle limit {MAX_ORACLE_RANK}",
            raag.rank()
        )));
    }
    let letters = tits_letters(raag);
    let dim = 2 * raag.rank();
    let mut index = HashMap::new();
    let mut matrices = vec![Matrix::identity(dim)];
    let mut words: Vec<Vec<Letter>> = vec![Vec::new()];
    let mut depth = vec![0usize];
    index.insert(matrices[0].clone(), 0);
    let all_letters: Vec<Letter> = (0..raag.rank() as Gen)
        .flat_map(|v| [Letter::pos(v), Letter::neg(v)])
        .collect();
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        if depth[x] == radius {
            continue;
        }
        for &l in &all_letters {
            let m = matrices[x]
                .mul(&letters[letter_index(l)])
                .ok_or_else(|| Error::Oracle("matrix entry overflow".into()))?;
            if index.contains_key(&m) {
                continue;
            }
            let id = matrices.len();
            index.insert(m.clone(), id);
            matrices.push(m);
            let mut w = words[x].clone();
            w.push(l);
            words.push(w);
            depth.push(depth[x] + 1);
            queue.push_back(id);
        }
    }
    let n = matrices.len();
    let elements = words
        .iter()
        .map(|w| raag.element(w))
        .collect::<Result<Vec<_>>>()?;

    let mut edges = Vec::new();
    let mut edge_at = HashMap::new();
    let mut adjacency = vec![Vec::new(); n];
    for x in 0..n {
        for v in 0..raag.rank() as Gen {
            let m = matrices[x].mul(&letters[letter_index(Letter::pos(v))]);
            if let Some(&y) = m.as_ref().and_then(|m| index.get(m)) {
                let id = edges.len();
                edges.push(Edge { tail: x, head: y, label: v });
                edge_at.insert((x, v), id);
                adjacency[x].push((y, id));
                adjacency[y].push((x, id));
            }
        }
    }

    let mut parent: Vec<usize> = (0..edges.len()).collect();
    let mut squares = Vec::new();
    for x in 0..n {
        for u in 0..raag.rank() as Gen {
            for v in u + 1..raag.rank() as Gen {
                if !raag.commute(u, v) {
                    continue;
                }
                let (Some(&xu), Some(&xv)) = (edge_at.get(&(x, u)), edge_at.get(&(x, v))) else {
                    continue;
                };
                let (hu, hv) = (edges[xu].head, edges[xv].head);
                let (Some(&top_u), Some(&top_v)) = (edge_at.get(&(hv, u)), edge_at.get(&(hu, v))) else {
                    continue;
                };
                if edges[top_u].head != edges[top_v].head {
                    return Err(Error::Oracle("commuting square does not close".into()));
                }
                squares.push([xu, top_v, top_u, xv]);
                let (a, b) = (find(&mut parent, xu), find(&mut parent, top_u));
                parent[a] = b;
                let (a, b) = (find(&mut parent, xv), find(&mut parent, top_v));
                parent[a] = b;
            }
        }
    }
    let mut class_id = HashMap::new();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut class_of = vec![0; edges.len()];
    for (e, slot) in class_of.iter_mut().enumerate() {
        let root = find(&mut parent, e);
        let c = *class_id.entry(root).or_insert_with(|| {
            classes.push(Vec::new());
            classes.len() - 1
        });
        classes[c].push(e);
        *slot = c;
    }
    let sides = (0..classes.len()).map(|_| OnceLock::new()).collect();
    let distances = (0..n).map(|_| OnceLock::new()).collect();
    Ok(BallComplex {
        raag: raag.clone(),
        radius,
        letters,
        index,
        matrices,
        depth,
        elements,
        edges,
        edge_at,
        adjacency,
        squares,
        class_of,
        classes,
        sides,
        distances,
    })
}

impl BallComplex {
    pub fn raag(&self) -> &Raag {
        &self.raag
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn vertex_count(&self) -> usize {
        self.matrices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn square_count(&self) -> usize {
        self.squares.len()
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn element(&self, v: usize) -> &GroupElement {
        &self.elements[v]
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    /// Word length of a vertex (its depth in the ball).
    pub fn depth(&self, v: usize) -> usize {
        self.depth[v]
    }

    fn matrix_of(&self, word: &[Letter]) -> Option<Matrix> {
        let mut m = Matrix::identity(2 * self.raag.rank());
        for &l in word {
            m = m.mul(self.letters.get(letter_index(l))?)?;
        }
        Some(m)
    }

    /// The vertex named by a word, read letter by letter.
    pub fn vertex_of_word(&self, word: &[Letter]) -> Option<usize> {
        self.index.get(&self.matrix_of(word)?).copied()
    }

    pub fn vertex(&self, x: &GroupElement) -> Option<usize> {
        if x.raag() != &self.raag {
            return None;
        }
        self.vertex_of_word(x.word())
    }

    fn require(&self, x: &GroupElement) -> Result<usize> {
        self.vertex(x)
            .ok_or_else(|| Error::Oracle(format!("{x} lies outside the ball of radius {}", self.radius)))
    }

    /// `g·x` for ball vertices, if it stays in the ball.
    fn act(&self, g: usize, x: usize) -> Option<usize> {
        self.index.get(&self.matrices[g].mul(&self.matrices[x])?).copied()
    }

    fn distances_from(&self, x: usize) -> &[u16] {
        self.distances[x].get_or_init(|| {
            let mut d = vec![u16::MAX; self.vertex_count()];
            d[x] = 0;
            let mut queue = VecDeque::from([x]);
            while let Some(u) = queue.pop_front() {
                for &(w, _) in &self.adjacency[u] {
                    if d[w] == u16::MAX {
                        d[w] = d[u] + 1;
                        queue.push_back(w);
                    }
                }
            }
            d
        })
    }

    fn dist(&self, x: usize, y: usize) -> usize {
        self.distances_from(x)[y] as usize
    }

    /// Plus side of a class, or `None` when deleting the class does not
    /// leave exactly two components (the class is cut by the boundary).
    fn plus_side(&self, class: usize) -> Option<&FixedBitSet> {
        self.sides[class]
            .get_or_init(|| {
                let members = &self.classes[class];
                let mut cut = FixedBitSet::with_capacity(self.edges.len());
                for &e in members {
                    cut.insert(e);
                }
                let grow = |start: usize| {
                    let mut seen = FixedBitSet::with_capacity(self.vertex_count());
                    seen.insert(start);
                    let mut stack = vec![start];
                    while let Some(u) = stack.pop() {
                        for &(w, e) in &self.adjacency[u] {
                            if !cut.contains(e) && !seen.contains(w) {
                                seen.insert(w);
                                stack.push(w);
                            }
                        }
                    }
                    seen
                };
                let first = self.edges[members[0]];
                let plus = grow(first.head);
                if plus.contains(first.tail) {
                    return None;
                }
                let minus = grow(first.tail);
                (plus.count_ones(..) + minus.count_ones(..) == self.vertex_count()).then_some(plus)
            })
            .as_ref()
    }

    pub fn is_valid_class(&self, class: usize) -> bool {
        self.plus_side(class).is_some()
    }

    fn contains(&self, h: OracleHalfspace, x: usize) -> Option<bool> {
        let plus = self.plus_side(h.class)?.contains(x);
        Some(plus == (h.sign == Sign::Plus))
    }

    /// Halfspace of the class of `edge` containing vertex `inside`.
    fn halfspace_at(&self, edge: usize, inside: usize) -> Option<OracleHalfspace> {
        let class = self.class_of[edge];
        let plus = self.plus_side(class)?.contains(inside);
        Some(OracleHalfspace { class, sign: if plus { Sign::Plus } else { Sign::Minus } })
    }

    /// The oracle's name for a fast-path halfspace, found through its
    /// canonical edge.
    pub fn halfspace_of(&self, phi: &Halfspace) -> Option<OracleHalfspace> {
        let tail = self.vertex(phi.base())?;
        let edge = *self.edge_at.get(&(tail, phi.label()))?;
        let inside = match phi.sign() {
            Sign::Plus => self.edges[edge].head,
            Sign::Minus => tail,
        };
        self.halfspace_at(edge, inside)
    }

    /// A representative edge of the halfspace, and the endpoint inside it.
    fn representative(&self, h: OracleHalfspace) -> Option<(usize, usize)> {
        let e = self.classes[h.class][0];
        let Edge { tail, head, .. } = self.edges[e];
        let inside = if self.contains(h, head)? { head } else { tail };
        Some((e, inside))
    }

    /// `g·Φ` through the image of a representative edge.
    pub fn translate(&self, g: usize, h: OracleHalfspace) -> Option<(OracleHalfspace, usize)> {
        let (e, inside) = self.representative(h)?;
        self.translate_edge(g, e, inside)
    }

    fn translate_edge(&self, g: usize, e: usize, inside: usize) -> Option<(OracleHalfspace, usize)> {
        let Edge { tail, label, .. } = self.edges[e];
        let gt = self.act(g, tail)?;
        let ge = *self.edge_at.get(&(gt, label))?;
        let gi = self.act(g, inside)?;
        Some((self.halfspace_at(ge, gi)?, ge))
    }

    fn side_set(&self, h: OracleHalfspace) -> Option<FixedBitSet> {
        let mut s = self.plus_side(h.class)?.clone();
        if h.sign == Sign::Minus {
            s.toggle_range(..);
        }
        Some(s)
    }

    /// Relation from emptiness of the four quarters inside the ball.
    fn relation_of(&self, a: OracleHalfspace, b: OracleHalfspace) -> Option<HalfspaceRelation> {
        use HalfspaceRelation::*;
        if a.class == b.class {
            return Some(if a.sign == b.sign { Equal } else { ComplementEqual });
        }
        let sa = self.side_set(a)?;
        let sb = self.side_set(b)?;
        let mut na = sa.clone();
        na.toggle_range(..);
        let mut nb = sb.clone();
        nb.toggle_range(..);
        let meets = |x: &FixedBitSet, y: &FixedBitSet| !x.is_disjoint(y);
        let quarters = [meets(&sa, &sb), meets(&sa, &nb), meets(&na, &sb), meets(&na, &nb)];
        match quarters {
            [true, true, true, true] => Some(Transverse),
            [true, false, true, true] => Some(SecondContainsFirst),
            [true, true, false, true] => Some(FirstContainsSecond),
            [false, true, true, true] => Some(ComplementContainsFirst),
            [true, true, true, false] => Some(FirstContainsComplement),
            _ => None,
        }
    }

    /// Every vertex of the convex hull of the two edges stays in the ball.
    fn relation_safe(&self, e1: usize, e2: usize) -> bool {
        let (a, b) = (self.edges[e1].tail, self.edges[e2].tail);
        let d = self.dist(a, b);
        d != u16::MAX as usize && self.depth[a].min(self.depth[b]) + d + 2 <= self.radius
    }

    fn edge_of(&self, phi: &Halfspace) -> Option<usize> {
        let tail = self.vertex(phi.base())?;
        self.edge_at.get(&(tail, phi.label())).copied()
    }

    fn require_halfspace(&self, phi: &Halfspace) -> Result<(OracleHalfspace, usize)> {
        let h = self
            .halfspace_of(phi)
            .ok_or_else(|| Error::Oracle(format!("{phi} is not resolved inside the ball")))?;
        Ok((h, self.edge_of(phi).expect("resolved above")))
    }

    pub fn oracle_distance(&self, x: &GroupElement, y: &GroupElement) -> Result<OracleVerdict<usize>> {
        let (vx, vy) = (self.require(x)?, self.require(y)?);
        let d = self.dist(vx, vy);
        let safe = d != u16::MAX as usize && self.depth[vx].min(self.depth[vy]) + d <= self.radius;
        Ok(OracleVerdict::new(format!("distance({x}, {y})"), d, safe))
    }

    pub fn oracle_median(
        &self,
        x: &GroupElement,
        y: &GroupElement,
        z: &GroupElement,
    ) -> Result<OracleVerdict<GroupElement>> {
        let v = [self.require(x)?, self.require(y)?, self.require(z)?];
        let d: Vec<&[u16]> = v.iter().map(|&p| self.distances_from(p)).collect();
        let between = |i: usize, j: usize, m: usize| d[i][m] as u32 + d[j][m] as u32 == d[i][v[j]] as u32;
        let found: Vec<usize> = (0..self.vertex_count())
            .filter(|&m| between(0, 1, m) && between(1, 2, m) && between(0, 2, m))
            .collect();
        let diam = (0..3)
            .flat_map(|i| (0..3).map(move |j| (i, j)))
            .map(|(i, j)| d[i][v[j]] as usize)
            .max()
            .unwrap_or(0);
        let top = v.iter().map(|&p| self.depth[p]).min().unwrap_or(0);
        let query = format!("median({x}, {y}, {z})");
        match found.as_slice() {
            [m] => Ok(OracleVerdict::new(query, self.elements[*m].clone(), top + diam <= self.radius)),
            _ => Err(Error::Oracle(format!("{query}: {} candidate medians in the ball", found.len()))),
        }
    }

    pub fn oracle_side(&self, x: &GroupElement, phi: &Halfspace) -> Result<OracleVerdict<bool>> {
        let vx = self.require(x)?;
        let query = format!("member({x}, {phi})");
        match self.halfspace_of(phi) {
            Some(h) => Ok(OracleVerdict::new(query, self.contains(h, vx).expect("valid class"), true)),
            None => Ok(OracleVerdict::new(query, false, false)),
        }
    }

    pub fn oracle_relation(&self, phi: &Halfspace, psi: &Halfspace) -> Result<OracleVerdict<HalfspaceRelation>> {
        let (a, ea) = self.require_halfspace(phi)?;
        let (b, eb) = self.require_halfspace(psi)?;
        let query = format!("relation({phi}, {psi})");
        let answer = self
            .relation_of(a, b)
            .ok_or_else(|| Error::Oracle(format!("{query}: quarters inconsistent")))?;
        Ok(OracleVerdict::new(query, answer, self.relation_safe(ea, eb)))
    }

    fn tight_of(&self, a: OracleHalfspace, b: OracleHalfspace) -> Option<bool> {
        if self.relation_of(a, b)? != HalfspaceRelation::FirstContainsSecond {
            return Some(false);
        }
        let (_, a_in) = self.representative(a)?;
        let (ea, _) = self.representative(a)?;
        let Edge { tail, head, .. } = self.edges[ea];
        let outside = if a_in == head { tail } else { head };
        let (_, inside) = self.representative(b)?;
        for c in 0..self.classes.len() {
            if c == a.class || c == b.class || !self.is_valid_class(c) {
                continue;
            }
            let plus = self.plus_side(c).expect("valid");
            if plus.contains(outside) == plus.contains(inside) {
                continue;
            }
            let theta = OracleHalfspace { class: c, sign: if plus.contains(inside) { Sign::Plus } else { Sign::Minus } };
            if self.relation_of(a, theta) == Some(HalfspaceRelation::FirstContainsSecond)
                && self.relation_of(theta, b) == Some(HalfspaceRelation::FirstContainsSecond)
            {
                return Some(false);
            }
        }
        Some(true)
    }

    /// `Φ ⊋ Ψ` with no halfspace strictly between.
    pub fn oracle_tightly_nested(&self, phi: &Halfspace, psi: &Halfspace) -> Result<OracleVerdict<bool>> {
        let (a, ea) = self.require_halfspace(phi)?;
        let (b, eb) = self.require_halfspace(psi)?;
        let query = format!("tight({phi}, {psi})");
        let answer = self
            .tight_of(a, b)
            .ok_or_else(|| Error::Oracle(format!("{query}: unresolved")))?;
        Ok(OracleVerdict::new(query, answer, self.relation_safe(ea, eb)))
    }

    /// All `g` in the ball with every `g·Φₖ` containing `y` but not `x`.
    /// Whether every copy of the chain in `[x, y]` has a witness whose
    /// translated edges all stay in the ball.
    pub fn copies_interior_safe(&self, chain: &[Halfspace], x: &GroupElement, y: &GroupElement) -> bool {
        let (Some(vx), Some(vy)) = (self.vertex(x), self.vertex(y)) else { return false };
        let Some(edges) = chain.iter().map(|phi| self.edge_of(phi)).collect::<Option<Vec<_>>>() else {
            return false;
        };
        if edges.is_empty() || edges.iter().any(|&e| !self.is_valid_class(self.class_of[e])) {
            return false;
        }
        let d = self.dist(vx, vy);
        if d == u16::MAX as usize {
            return false;
        }
        let b0 = self.edges[edges[0]].tail;
        let reach = edges.iter().map(|&e| self.dist(b0, self.edges[e].tail)).max().unwrap_or(0);
        if reach == u16::MAX as usize {
            return false;
        }
        let span = self.depth[b0].max(reach + 1);
        self.depth[vx].min(self.depth[vy]) + d + span <= self.radius
    }

    pub fn oracle_copies(
        &self,
        chain: &[Halfspace],
        x: &GroupElement,
        y: &GroupElement,
    ) -> Result<OracleVerdict<OracleCopies>> {
        let (vx, vy) = (self.require(x)?, self.require(y)?);
        let resolved = chain
            .iter()
            .map(|phi| {
                let (h, e) = self.require_halfspace(phi)?;
                let inside = self.vertex(&phi.inside_vertex()).expect("edge resolved");
                Ok((h, e, inside))
            })
            .collect::<Result<Vec<_>>>()?;
        let query = format!("copies([{x}, {y}])");
        let safe = self.copies_interior_safe(chain, x, y);
        let mut witnesses = Vec::new();
        let mut copies = BTreeSet::new();
        'g: for g in 0..self.vertex_count() {
            let mut image = Vec::with_capacity(resolved.len());
            for &(_, e, inside) in &resolved {
                match self.translate_edge(g, e, inside) {
                    Some((h, _)) => {
                        if self.contains(h, vy) != Some(true) || self.contains(h, vx) != Some(false) {
                            continue 'g;
                        }
                        image.push(h);
                    }
                    None => continue 'g,
                }
            }
            witnesses.push(self.elements[g].clone());
            copies.insert(image);
        }
        Ok(OracleVerdict::new(query, OracleCopies { witnesses, copies }, safe))
    }

    /// Checks the four RAAG-like conditions for every halfspace whose first
    /// edge starts within `base_depth` and every `h` within `h_depth`,
    /// skipping verdicts that the ball cannot certify.
    pub fn raag_like_exhaustive(&self, base_depth: usize, h_depth: usize) -> AxiomReport {
        use HalfspaceRelation::*;
        let mut report = AxiomReport::default();
        let halfspaces: Vec<OracleHalfspace> = (0..self.classes.len())
            .filter(|&c| self.depth[self.edges[self.classes[c][0]].tail] <= base_depth && self.is_valid_class(c))
            .flat_map(|c| [Sign::Plus, Sign::Minus].map(|sign| OracleHalfspace { class: c, sign }))
            .collect();
        let hs: Vec<usize> = (0..self.vertex_count()).filter(|&g| self.depth[g] <= h_depth).collect();
        let tight_pairs = self.tight_pairs(base_depth);
        for &phi in &halfspaces {
            let (e, _) = self.representative(phi).expect("valid");
            for &h in &hs {
                let Some((moved, me)) = self.translate(h, phi) else {
                    report.skipped += 1;
                    continue;
                };
                let safe = self.relation_safe(e, me);
                let who = || format!("Φ = {} (class {}), h = {}", self.describe(phi), phi.class, self.elements[h]);
                report.checked += 1;
                if moved == phi.complement() {
                    report.violations.push(format!("(i) inversion: {}", who()));
                }
                if !safe {
                    report.skipped += 1;
                    continue;
                }
                match self.relation_of(phi, moved) {
                    Some(Transverse) => report.violations.push(format!("(ii) transverse: {}", who())),
                    None => report.violations.push(format!("unresolved relation: {}", who())),
                    _ => {}
                }
                let flipped = moved.complement();
                if self.relation_of(flipped, phi) == Some(FirstContainsSecond) && self.tight_of(flipped, phi) == Some(true) {
                    report.violations.push(format!("(iv) Φ ⊂ hΦ̄ tightly: {}", who()));
                }
            }
        }
        for &(phi, psi) in &tight_pairs {
            let (e, _) = self.representative(phi).expect("valid");
            for &h in &hs {
                let Some((moved, me)) = self.translate(h, psi) else {
                    report.skipped += 1;
                    continue;
                };
                report.checked += 1;
                if !self.relation_safe(e, me) {
                    report.skipped += 1;
                    continue;
                }
                if self.relation_of(phi, moved) == Some(Transverse) {
                    report.violations.push(format!(
                        "(iii) Φ = {}, Φ' = {}, h = {}: Φ and hΦ' transverse",
                        self.describe(phi),
                        self.describe(psi),
                        self.elements[h]
                    ));
                }
            }
        }
        report
    }

    /// Tightly nested pairs `Φ ⊋ Φ'` meeting at a vertex within `depth`.
    pub fn tight_pairs(&self, depth: usize) -> Vec<(OracleHalfspace, OracleHalfspace)> {
        let mut out = BTreeSet::new();
        for w in 0..self.vertex_count() {
            if self.depth[w] > depth {
                continue;
            }
            for &(_, e) in &self.adjacency[w] {
                for &(_, f) in &self.adjacency[w] {
                    if e == f || self.class_of[e] == self.class_of[f] {
                        continue;
                    }
                    if !self.relation_safe(e, f) {
                        continue;
                    }
                    let (Some(a), Some(b)) = (self.halfspace_at(e, w), self.halfspace_at(f, w)) else {
                        continue;
                    };
                    for (x, y) in [(a.complement(), b.complement()), (a, b), (a.complement(), b), (a, b.complement())] {
                        if self.tight_of(x, y) == Some(true) {
                            out.insert((x, y));
                        }
                    }
                }
            }
        }
        out.into_iter().collect()
    }

    fn describe(&self, h: OracleHalfspace) -> String {
        let e = self.edges[self.classes[h.class][0]];
        let sign = match h.sign {
            Sign::Plus => '+',
            Sign::Minus => '-',
        };
        format!("{sign}{}@[{}]", self.raag.name(e.label), self.elements[e.tail])
    }

    /// Plain-text listing of vertices, edges and hyperplane classes.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "radius {}", self.radius);
        let _ = writeln!(s, "vertices {}", self.vertex_count());
        for (i, x) in self.elements.iter().enumerate() {
            let _ = writeln!(s, "v {i} {x}");
        }
        let _ = writeln!(s, "edges {}", self.edge_count());
        for (i, e) in self.edges.iter().enumerate() {
            let _ = writeln!(s, "e {i} {} {} {} class {}", e.tail, e.head, self.raag.name(e.label), self.class_of[i]);
        }
        let _ = writeln!(s, "squares {}", self.square_count());
        let _ = writeln!(s, "classes {}", self.class_count());
        for c in 0..self.class_count() {
            let _ = writeln!(s, "h {c} size {} valid {}", self.classes[c].len(), self.is_valid_class(c));
        }
        s
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AxiomReport {
    pub checked: usize,
    pub skipped: usize,
    pub violations: Vec<String>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::{interval, HalfspaceRelation::*};
    use crate::raag::DefiningGraph;

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
    fn ball_sizes() {
        assert_eq!(build_ball(&f2(), 2).unwrap().vertex_count(), 17);
        assert_eq!(build_ball(&z2(), 2).unwrap().vertex_count(), 13);
        let b = build_ball(&z2(), 0).unwrap();
        assert_eq!((b.vertex_count(), b.edge_count()), (1, 0));
        assert!(build_ball(&f2(), 7).is_err());
        // growth counts: free group 1 + 4·(3ʳ − 1)/2, ℤ² 2r² + 2r + 1
        assert_eq!(build_ball(&f2(), 4).unwrap().vertex_count(), 1 + 2 * (81 - 1));
        assert_eq!(build_ball(&z2(), 5).unwrap().vertex_count(), 61);
    }

    #[test]
    fn squares_share_classes() {
        let b = build_ball(&path(), 4).unwrap();
        for sq in &b.squares {
            assert_eq!(b.class_of[sq[0]], b.class_of[sq[2]]);
            assert_eq!(b.class_of[sq[1]], b.class_of[sq[3]]);
        }
        assert!(b.square_count() > 0);
        assert!(b.dump().starts_with("radius 4"));
    }

    #[test]
    fn query_examples() {
        let z = z2();
        let b = build_ball(&z, 3).unwrap();
        let v = b.oracle_distance(&z.identity(), &el(&z, "a b")).unwrap();
        assert_eq!((v.answer, v.interior_safe), (2, true));
        let f = f2();
        let b = build_ball(&f, 4).unwrap();
        let m = b.oracle_median(&f.identity(), &el(&f, "a"), &el(&f, "b")).unwrap();
        assert!(m.answer.is_identity());
        let iv = interval(&f.identity(), &el(&f, "a a")).unwrap();
        let r = b.oracle_relation(iv.halfspace(0), iv.halfspace(1)).unwrap();
        assert_eq!(r.answer, FirstContainsSecond);
        assert!(r.interior_safe);
        let t = b.oracle_tightly_nested(iv.halfspace(0), iv.halfspace(1)).unwrap();
        assert!(t.answer);
    }

    #[test]
    fn copies_examples() {
        let f = f2();
        let b = build_ball(&f, 5).unwrap();
        let wall = Halfspace::new(0, &f.identity(), Sign::Plus);
        let c = b.oracle_copies(std::slice::from_ref(&wall), &f.identity(), &el(&f, "a a a")).unwrap();
        let mut w: Vec<String> = c.answer.witnesses.iter().map(|g| g.to_string()).collect();
        w.sort();
        assert_eq!(w, vec!["1", "a", "a a"]);
        let x = el(&f, "b");
        assert!(b.oracle_copies(&[wall], &x, &x).unwrap().answer.copies.is_empty());
        let z = z2();
        let b = build_ball(&z, 5).unwrap();
        let wall = Halfspace::new(0, &z.identity(), Sign::Plus);
        let c = b.oracle_copies(&[wall], &z.identity(), &el(&z, "a b")).unwrap();
        assert_eq!(c.answer.copies.len(), 1);
        assert!(c.interior_safe);
    }

    #[test]
    fn path_graph_words_collapse() {
        let p = path();
        let b = build_ball(&p, 4).unwrap();
        let x = b.vertex_of_word(&p.graph().parse_word("c b c^-1").unwrap());
        assert_eq!(x, b.vertex(&el(&p, "b")));
        let y = b.vertex_of_word(&p.graph().parse_word("c a c^-1").unwrap());
        assert_ne!(y, b.vertex(&el(&p, "a")));
    }
}

//! Sampled and exhaustive invariant suites, and the oracle comparison
//! matrix.

use std::collections::BTreeSet;
use std::fmt;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::axis::{axis_window_range, cyclically_reduce, fundamental_interval, AxisData};
use crate::certify::RunConfig;
use crate::counting::{
    all_maximal_g_nested, copy_precedes, count_in, enumerate_copies, find_maximal_g_nested, reverse_segment, CountingQuasimorphism,
    Segment, WitnessSearch,
};
use crate::cube::{
    distance, interval, median, member, relation, tightly_nested, translate_halfspace, translate_unchecked, Halfspace,
    HalfspaceRelation, Interval, Sign,
};
use crate::axis::axis_window;
use crate::counting::check_lesser_or_greater;
use crate::error::Result;
use crate::oracle::{build_ball, BallComplex, OracleHalfspace};
use crate::raag::{strip_parabolic_right, Gen, GenSet, GroupElement, Letter, Raag};
use crate::sample::{ball_elements, random_element, random_letter, random_nonidentity, seeded_rng};

const MAX_COUNTEREXAMPLES: usize = 5;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteResult {
    pub name: String,
    pub checked: usize,
    pub failures: usize,
    pub counterexamples: Vec<String>,
}

impl SuiteResult {
    fn new(name: &str) -> Self {
        SuiteResult { name: name.to_string(), checked: 0, failures: 0, counterexamples: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    fn record(&mut self, outcome: std::result::Result<(), String>) {
        self.checked += 1;
        if let Err(msg) = outcome {
            self.failures += 1;
            if self.counterexamples.len() < MAX_COUNTEREXAMPLES {
                self.counterexamples.push(msg);
            }
        }
    }

    fn merge(&mut self, outcomes: Vec<std::result::Result<(), String>>) {
        for o in outcomes {
            self.record(o);
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub title: String,
    pub suites: Vec<SuiteResult>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteResult::passed)
    }

    pub fn is_empty(&self) -> bool {
        self.suites.is_empty()
    }

    pub fn suite(&self, name: &str) -> Option<&SuiteResult> {
        self.suites.iter().find(|s| s.name == name)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.title)?;
        for s in &self.suites {
            let tag = if s.passed() { "PASS" } else { "FAIL" };
            writeln!(f, "  {tag} {} ({} checked, {} failed)", s.name, s.checked, s.failures)?;
            for c in &s.counterexamples {
                writeln!(f, "       {c}")?;
            }
        }
        Ok(())
    }
}

fn rng_for(seed: u64, salt: u64, i: usize) -> ChaCha8Rng {
    seeded_rng(seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ (i as u64).wrapping_mul(0xD1B5_4A32_D192_ED03))
}

fn sampled<F>(name: &str, samples: usize, seed: u64, salt: u64, f: F) -> SuiteResult
where
    F: Fn(&mut ChaCha8Rng) -> std::result::Result<(), String> + Sync,
{
    sampled_indexed(name, samples, seed, salt, |_, rng| f(rng))
}

fn sampled_indexed<F>(name: &str, samples: usize, seed: u64, salt: u64, f: F) -> SuiteResult
where
    F: Fn(usize, &mut ChaCha8Rng) -> std::result::Result<(), String> + Sync,
{
    let outcomes: Vec<_> = (0..samples)
        .into_par_iter()
        .map(|i| f(i, &mut rng_for(seed, salt, i)))
        .collect();
    let mut s = SuiteResult::new(name);
    s.merge(outcomes);
    s
}

fn err<T>(r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

/// A maximal `g`-nested segment together with its axis.
#[derive(Clone, Debug)]
pub struct AxisSegment {
    pub axis: AxisData,
    pub segment: Segment,
}

pub fn axis_segment(g: &GroupElement) -> Result<AxisSegment> {
    let axis = cyclically_reduce(g)?;
    let segment = find_maximal_g_nested(&axis)?;
    Ok(AxisSegment { axis, segment })
}

/// Every maximal `g`-nested segment of `g`, each with the axis.
pub fn all_axis_segments(g: &GroupElement) -> Result<Vec<AxisSegment>> {
    let axis = cyclically_reduce(g)?;
    Ok(all_maximal_g_nested(&axis)?
        .into_iter()
        .map(|segment| AxisSegment { axis: axis.clone(), segment })
        .collect())
}

/// One quasimorphism per segment, based at the identity.
pub fn counting_qms(raag: &Raag, segs: &[AxisSegment], search: WitnessSearch) -> Vec<CountingQuasimorphism> {
    segs.iter()
        .map(|s| {
            let mut q = CountingQuasimorphism::new(s.segment.clone(), raag.identity());
            q.search = search;
            q
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub raag: Raag,
    pub elements: Vec<GroupElement>,
    pub samples: usize,
    pub max_len: usize,
    pub h_radius: usize,
    pub seed: u64,
    pub witness: WitnessSearch,
}

impl SuiteConfig {
    pub fn new(raag: Raag, elements: Vec<GroupElement>, samples: usize, seed: u64) -> Self {
        SuiteConfig { raag, elements, samples, max_len: 8, h_radius: 6, seed, witness: WitnessSearch::Exact }
    }
}

/// Suites for the word in `config`, or for a few seeded random elements
/// when the word is empty.
pub fn property_suites(config: &RunConfig) -> Result<Report> {
    let raag = config.graph.clone();
    let elements = if config.word.trim().is_empty() {
        let mut rng = seeded_rng(config.seed);
        (0..3).map(|_| random_nonidentity(&mut rng, &raag, 4)).collect()
    } else {
        vec![raag.parse(&config.word)?]
    };
    let mut sc = SuiteConfig::new(raag, elements, config.samples, config.seed);
    sc.witness = config.witness;
    run_property_suites(&sc)
}

pub fn run_property_suites(config: &SuiteConfig) -> Result<Report> {
    let mut report = Report { title: format!("property suites on {}", describe_graph(&config.raag)), suites: vec![] };
    if config.samples == 0 {
        return Ok(report);
    }
    let segs = config
        .elements
        .iter()
        .map(axis_segment)
        .collect::<Result<Vec<_>>>()?;
    let qms = counting_qms(&config.raag, &segs, config.witness);
    let mut suites = vec![
        quasimorphism_defect(config, &qms),
        triangle_defect(config, &qms),
        median_defect(config, &qms),
        antisymmetry_and_invariance(config, &qms),
        copy_comparability(config, &qms),
        raag_like_sampled(config),
        hyperbolicity(config),
    ];
    let every = config
        .elements
        .iter()
        .map(all_axis_segments)
        .collect::<Result<Vec<_>>>()?
        .concat();
    suites.push(maxnestchar(&every));
    suites.push(lesser_or_greater(config, &every));
    suites.push(almost_done(config, &every));
    suites.push(no_reverse_copies(config, &segs));
    if config.raag.graph().all().iter().all(|v| config.raag.link(v).is_empty()) {
        suites.push(free_group_matcher(config));
    }
    report.suites = suites;
    Ok(report)
}

fn describe_graph(raag: &Raag) -> String {
    let g = raag.graph().to_file();
    let edges: Vec<String> = g.edges.iter().map(|[a, b]| format!("{a}–{b}")).collect();
    format!("⟨{}⟩ edges {{{}}}", g.generators.join(", "), edges.join(", "))
}

pub fn quasimorphism_defect(config: &SuiteConfig, qms: &[CountingQuasimorphism]) -> SuiteResult {
    sampled_indexed("quasimorphism defect ≤ 6", config.samples * qms.len(), config.seed, 1, |i, rng| {
        let q = &qms[i % qms.len()];
        let g = random_element(rng, &config.raag, config.max_len);
        let h = random_element(rng, &config.raag, config.max_len);
        let gh = &g * &h;
        let d = err(q.phi(&gh))? - err(q.phi(&g))? - err(q.phi(&h))?;
        if d.abs() <= 6 {
            Ok(())
        } else {
            Err(format!("γ from {}: g = {g}, h = {h}, defect {d}", q.segment.ambient().target()))
        }
    })
}

pub fn triangle_defect(config: &SuiteConfig, qms: &[CountingQuasimorphism]) -> SuiteResult {
    sampled_indexed("triangle defect ≤ 6", config.samples * qms.len(), config.seed, 2, |i, rng| {
        let q = &qms[i % qms.len()];
        let [x, y, z] = [0; 3].map(|_| random_element(rng, &config.raag, config.max_len));
        let s = err(q.omega(&x, &y))?.omega + err(q.omega(&y, &z))?.omega + err(q.omega(&z, &x))?.omega;
        if s.abs() <= 6 {
            Ok(())
        } else {
            Err(format!("x = {x}, y = {y}, z = {z}: sum {s}"))
        }
    })
}

pub fn median_defect(config: &SuiteConfig, qms: &[CountingQuasimorphism]) -> SuiteResult {
    sampled_indexed("median defect ≤ 2", config.samples * qms.len(), config.seed, 3, |i, rng| {
        let q = &qms[i % qms.len()];
        let [x, y, z] = [0; 3].map(|_| random_element(rng, &config.raag, config.max_len));
        let m = err(median(&x, &y, &z))?;
        let (a, b, c) = (err(q.omega(&x, &y))?, err(q.omega(&x, &m))?, err(q.omega(&m, &y))?);
        let omega = a.omega - b.omega - c.omega;
        let fwd = a.c_forward as i64 - b.c_forward as i64 - c.c_forward as i64;
        let rev = a.c_reverse as i64 - b.c_reverse as i64 - c.c_reverse as i64;
        if omega.abs() <= 2 && fwd.abs() <= 1 && rev.abs() <= 1 {
            Ok(())
        } else {
            Err(format!("x = {x}, y = {y}, m = {m}: ω {omega}, c {fwd}, c̄ {rev}"))
        }
    })
}

pub fn antisymmetry_and_invariance(config: &SuiteConfig, qms: &[CountingQuasimorphism]) -> SuiteResult {
    sampled_indexed("antisymmetry and G-invariance of ω", config.samples * qms.len(), config.seed, 4, |i, rng| {
        let q = &qms[i % qms.len()];
        let [x, y, g] = [0; 3].map(|_| random_element(rng, &config.raag, config.max_len));
        let w = err(q.omega(&x, &y))?.omega;
        let back = err(q.omega(&y, &x))?.omega;
        let moved = err(q.omega(&(&g * &x), &(&g * &y)))?.omega;
        if back == -w && moved == w {
            Ok(())
        } else {
            Err(format!("x = {x}, y = {y}, g = {g}: ω {w}, reversed {back}, translated {moved}"))
        }
    })
}

pub fn copy_comparability(config: &SuiteConfig, qms: &[CountingQuasimorphism]) -> SuiteResult {
    sampled_indexed("non-overlapping copies are nested", config.samples * qms.len(), config.seed, 5, |i, rng| {
        let q = &qms[i % qms.len()];
        let x = random_element(rng, &config.raag, config.max_len);
        let y = random_element(rng, &config.raag, config.max_len);
        let iv = err(interval(&x, &y))?;
        let copies = enumerate_copies(&q.segment, &iv, q.search);
        for (i, a) in copies.iter().enumerate() {
            for b in &copies[i + 1..] {
                let overlap = a.positions.iter().any(|&p| {
                    b.positions.iter().any(|&r| {
                        matches!(
                            relation(iv.halfspace(p), iv.halfspace(r)),
                            Ok(HalfspaceRelation::Equal | HalfspaceRelation::Transverse)
                        )
                    })
                });
                if !overlap && !copy_precedes(&iv, a, b) && !copy_precedes(&iv, b, a) {
                    return Err(format!("[{x}, {y}]: copies at {:?} and {:?} incomparable", a.positions, b.positions));
                }
            }
        }
        Ok(())
    })
}

fn random_halfspace(rng: &mut ChaCha8Rng, raag: &Raag, max_len: usize) -> Halfspace {
    let base = random_element(rng, raag, max_len);
    let l = random_letter(rng, raag);
    let sign = if rng.gen_bool(0.5) { Sign::Plus } else { Sign::Minus };
    Halfspace::new(l.gen, &base, sign)
}

/// A tightly nested pair read off a random interval, if it has one.
fn random_tight_pair(rng: &mut ChaCha8Rng, raag: &Raag, max_len: usize) -> Option<(Halfspace, Halfspace)> {
    let x = random_element(rng, raag, max_len);
    let y = random_element(rng, raag, max_len);
    let iv = interval(&x, &y).ok()?;
    let pairs: Vec<(usize, usize)> = (0..iv.len())
        .flat_map(|i| iv.heap().covers_above(i).into_iter().map(move |j| (i, j)))
        .collect();
    if pairs.is_empty() {
        return None;
    }
    let (i, j) = pairs[rng.gen_range(0..pairs.len())];
    Some((iv.halfspace(i).clone(), iv.halfspace(j).clone()))
}

pub fn raag_like_sampled(config: &SuiteConfig) -> SuiteResult {
    use HalfspaceRelation::*;
    sampled("RAAG-like (i)–(iv), sampled", config.samples, config.seed, 6, |rng| {
        let raag = &config.raag;
        let phi = random_halfspace(rng, raag, config.max_len);
        let h = random_element(rng, raag, config.max_len);
        let moved = err(translate_halfspace(&h, &phi))?;
        if moved == phi.complement() {
            return Err(format!("(i) h = {h}, Φ = {phi}: hΦ̄ = Φ"));
        }
        if err(relation(&phi, &moved))? == Transverse {
            return Err(format!("(ii) h = {h}, Φ = {phi}: Φ ⋔ hΦ"));
        }
        if err(tightly_nested(&moved.complement(), &phi))? {
            return Err(format!("(iv) h = {h}, Φ = {phi}: Φ ⊂ hΦ̄ tightly"));
        }
        if let Some((a, b)) = random_tight_pair(rng, raag, config.max_len) {
            if !err(tightly_nested(&a, &b))? {
                return Err(format!("cover pair {a}, {b} not tightly nested globally"));
            }
            let hb = err(translate_halfspace(&h, &b))?;
            if err(relation(&a, &hb))? == Transverse {
                return Err(format!("(iii) h = {h}, Φ = {a}, Φ' = {b}: Φ ⋔ hΦ'"));
            }
        }
        Ok(())
    })
}

pub fn hyperbolicity(config: &SuiteConfig) -> SuiteResult {
    sampled("non-trivial elements are hyperbolic", config.samples, config.seed, 7, |rng| {
        let g = random_nonidentity(rng, &config.raag, config.max_len);
        let ax = err(cyclically_reduce(&g))?;
        if ax.delta == 0 {
            return Err(format!("{g} has δ = 0"));
        }
        let o = ax.base_vertex();
        for n in 1..=6i64 {
            let d = err(distance(o, &(&g.pow(n) * o)))?;
            if d != n as usize * ax.delta {
                return Err(format!("{g}: d(o, g^{n}o) = {d}, δ = {}", ax.delta));
            }
        }
        Ok(())
    })
}

pub fn maxnestchar(segs: &[AxisSegment]) -> SuiteResult {
    use HalfspaceRelation::*;
    let mut s = SuiteResult::new("maximal segments: outer walls transverse to shifted ends");
    for AxisSegment { axis, segment } in segs {
        let Ok(base) = fundamental_interval(axis) else { continue };
        let g = &axis.g;
        let first = segment.first();
        let last = segment.last();
        let back = translate_halfspace(&g.invert(), last).expect("same graph");
        let ahead = translate_halfspace(g, first).expect("same graph");
        for psi in base.halfspaces() {
            if matches!(relation(psi, first), Ok(FirstContainsSecond)) {
                s.record(match relation(psi, &back) {
                    Ok(Transverse) => Ok(()),
                    r => Err(format!("g = {g}: Ψ = {psi} ⊋ Φ₀ but relation to g⁻¹Φ_r is {r:?}")),
                });
            }
            if matches!(relation(last, psi), Ok(FirstContainsSecond)) {
                s.record(match relation(psi, &ahead) {
                    Ok(Transverse) => Ok(()),
                    r => Err(format!("g = {g}: Φ_r ⊋ Ψ = {psi} but relation to gΦ₀ is {r:?}")),
                });
            }
        }
    }
    s
}

fn subsegments(seg: &Segment) -> Vec<Segment> {
    let n = seg.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i..n {
            let pos = seg.positions()[i..=j].to_vec();
            out.push(Segment::from_positions(seg.ambient().clone(), pos).expect("sub-chain of a segment"));
        }
    }
    out
}

fn window_for(axis: &AxisData, reach: usize) -> Result<crate::axis::AxisWindow> {
    let m = (reach / axis.delta.max(1)) as i64 + 2;
    axis_window_range(axis, -m, m + 1)
}

pub fn lesser_or_greater(config: &SuiteConfig, segs: &[AxisSegment]) -> SuiteResult {
    let mut s = SuiteResult::new("hᾱ > α or α > hᾱ");
    let hs = ball_elements(&config.raag, config.h_radius);
    for AxisSegment { axis, segment } in segs {
        let Ok(window) = window_for(axis, config.h_radius + segment.len()) else { continue };
        let Ok(base) = fundamental_interval(axis) else { continue };
        let mut alphas = subsegments(segment);
        for i in 0..base.len() {
            alphas.push(Segment::from_positions(base.clone(), vec![i]).expect("single halfspace"));
            for j in base.heap().covers_above(i) {
                alphas.push(Segment::from_positions(base.clone(), vec![i, j]).expect("cover pair"));
            }
        }
        let outcomes: Vec<Option<std::result::Result<(), String>>> = hs
            .par_iter()
            .flat_map_iter(|h| {
                alphas.iter().map(|alpha| {
                    let rev = reverse_segment(alpha);
                    let head = translate_unchecked(h, &rev.chain()[0]);
                    window.interval.position_of(&head)?;
                    let moved = rev.translate(h);
                    if moved.iter().any(|x| window.interval.position_of(x).is_none()) {
                        return None;
                    }
                    Some(match check_lesser_or_greater(alpha, h, &window) {
                        Ok(true) => Ok(()),
                        Ok(false) => Err(format!("g = {}, α at {:?}, h = {h}", axis.g, alpha.positions())),
                        Err(e) => Err(e.to_string()),
                    })
                }).collect::<Vec<_>>()
            })
            .collect();
        s.merge(outcomes.into_iter().flatten().collect());
    }
    s
}

pub fn almost_done(config: &SuiteConfig, segs: &[AxisSegment]) -> SuiteResult {
    let mut s = SuiteResult::new("no h with hγ̄ ⊂ A⁺ and hΦ̄_r ∈ [o, go]");
    let hs = ball_elements(&config.raag, config.h_radius);
    for AxisSegment { axis, segment } in segs {
        let Ok(window) = window_for(axis, config.h_radius + segment.len()) else { continue };
        let rev = reverse_segment(segment);
        let outcomes: Vec<std::result::Result<(), String>> = hs
            .par_iter()
            .map(|h| {
                let moved = rev.translate(h);
                let pos: Option<Vec<usize>> = moved.iter().map(|x| window.interval.position_of(x)).collect();
                match pos {
                    Some(p) if window.blocks[p[0]] == 0 => {
                        Err(format!("g = {}, h = {h}: hγ̄ lies on the axis starting in [o, go]", axis.g))
                    }
                    _ => Ok(()),
                }
            })
            .collect();
        s.merge(outcomes);
    }
    s
}

pub fn no_reverse_copies(config: &SuiteConfig, segs: &[AxisSegment]) -> SuiteResult {
    let mut s = SuiteResult::new("no reverse copies along the axis");
    for AxisSegment { axis, segment } in segs {
        let rev = reverse_segment(segment);
        for n in 1..=4 {
            let Ok(w) = axis_window(axis, n) else { continue };
            let copies = enumerate_copies(&rev, &w.interval, config.witness);
            s.record(if copies.is_empty() {
                Ok(())
            } else {
                Err(format!("g = {}, n = {n}: {} reverse copies", axis.g, copies.len()))
            });
        }
    }
    s
}

/// Largest number of disjoint occurrences of `pattern` in `text`.
pub fn count_disjoint_occurrences(text: &[Letter], pattern: &[Letter]) -> usize {
    if pattern.is_empty() || pattern.len() > text.len() {
        return 0;
    }
    let mut count = 0;
    let mut i = 0;
    while i + pattern.len() <= text.len() {
        if &text[i..i + pattern.len()] == pattern {
            count += 1;
            i += pattern.len();
        } else {
            i += 1;
        }
    }
    count
}

/// Chain of every halfspace of `[u, u·w]` for a reduced free-group word.
pub fn full_chain(u: &GroupElement, w: &GroupElement) -> Result<Segment> {
    let iv = Interval::from_word(u, w.word().to_vec())?;
    let n = iv.len();
    Segment::from_positions(iv, (0..n).collect())
}

pub fn free_group_matcher(config: &SuiteConfig) -> SuiteResult {
    sampled("free group: counts match subword matching", config.samples, config.seed, 8, |rng| {
        let raag = &config.raag;
        let w = random_nonidentity(rng, raag, 4);
        let u = random_element(rng, raag, 3);
        let seg = err(full_chain(&u, &w))?;
        let x = random_element(rng, raag, config.max_len);
        let y = random_element(rng, raag, config.max_len);
        let iv = err(interval(&x, &y))?;
        let text = iv.word();
        let inverse: Vec<Letter> = w.invert().word().to_vec();
        let expect = (count_disjoint_occurrences(text, w.word()), count_disjoint_occurrences(text, &inverse));
        let got = (count_in(&seg, &iv, config.witness), count_in(&reverse_segment(&seg), &iv, config.witness));
        if got == expect {
            Ok(())
        } else {
            Err(format!("w = {w}, [{x}, {y}]: machinery {got:?}, matcher {expect:?}"))
        }
    })
}

#[derive(Clone, Debug)]
pub struct CrosscheckConfig {
    pub raag: Raag,
    pub radius: usize,
    pub samples: usize,
    pub seed: u64,
    /// Test hook: swaps the two strict containments in fast-path relation
    /// answers before comparison.
    pub corrupt_relation: bool,
}

impl CrosscheckConfig {
    pub fn new(raag: Raag, radius: usize) -> Self {
        CrosscheckConfig { raag, radius, samples: 2000, seed: crate::sample::DEFAULT_SEED, corrupt_relation: false }
    }
}

fn corrupt(r: HalfspaceRelation) -> HalfspaceRelation {
    use HalfspaceRelation::*;
    match r {
        FirstContainsSecond => SecondContainsFirst,
        SecondContainsFirst => FirstContainsSecond,
        other => other,
    }
}

/// Halfspaces whose canonical base has length at most `depth`.
fn small_halfspaces(ball: &BallComplex, depth: usize) -> Vec<Halfspace> {
    let raag = ball.raag();
    let mut out = BTreeSet::new();
    let mut list = Vec::new();
    for x in ball_elements(raag, depth) {
        for v in 0..raag.rank() as Gen {
            for sign in [Sign::Plus, Sign::Minus] {
                let h = Halfspace::new(v, &x, sign);
                if out.insert(h.to_string()) {
                    list.push(h);
                }
            }
        }
    }
    list
}

pub fn oracle_crosscheck(config: &CrosscheckConfig) -> Result<Report> {
    let mut report = Report {
        title: format!("oracle cross-check on {}, radius {}", describe_graph(&config.raag), config.radius),
        suites: vec![],
    };
    if config.radius == 0 {
        return Ok(report);
    }
    let ball = build_ball(&config.raag, config.radius)?;
    let small = small_halfspaces(&ball, 2.min(config.radius));
    report.suites.push(cc_normal_form(config, &ball));
    report.suites.push(cc_distance(&ball));
    report.suites.push(cc_median(config, &ball));
    report.suites.push(cc_side(&ball, &small));
    report.suites.push(cc_relation(config, &ball, &small));
    report.suites.push(cc_tight(&ball, &small));
    report.suites.push(cc_copies(&ball));
    report.suites.push(cc_strip(&ball));
    report.suites.push(cc_raag_like(&ball));
    Ok(report)
}

fn cc_normal_form(config: &CrosscheckConfig, ball: &BallComplex) -> SuiteResult {
    let mut s = SuiteResult::new("normal form names the ball vertex");
    for (v, x) in ball.elements().iter().enumerate() {
        s.record(if ball.vertex(x) == Some(v) && x.len() == ball.depth(v) {
            Ok(())
        } else {
            Err(format!("vertex {v}: normal form {x} has length {} at depth {}", x.len(), ball.depth(v)))
        });
    }
    let raag = ball.raag();
    let outcomes: Vec<_> = (0..config.samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(config.seed, 11, i);
            let n = rng.gen_range(0..=config.radius + 2);
            let raw: Vec<Letter> = (0..n).map(|_| random_letter(&mut rng, raag)).collect();
            let nf = raag.element(&raw).map_err(|e| e.to_string())?;
            match (ball.vertex_of_word(&raw), ball.vertex(&nf)) {
                (Some(a), Some(b)) if a != b => Err(format!("raw {} and its normal form {nf} differ", raag.format_word(&raw))),
                (Some(_), None) | (None, Some(_)) if nf.len() <= config.radius => {
                    Err(format!("raw {} vs normal form {nf}: ball membership differs", raag.format_word(&raw)))
                }
                _ => Ok(()),
            }
        })
        .collect();
    s.merge(outcomes);
    s
}

fn cc_distance(ball: &BallComplex) -> SuiteResult {
    let mut s = SuiteResult::new("distance");
    let near: Vec<usize> = (0..ball.vertex_count()).filter(|&v| ball.depth(v) <= 2).collect();
    let outcomes: Vec<Option<std::result::Result<(), String>>> = near
        .par_iter()
        .flat_map_iter(|&a| {
            (0..ball.vertex_count()).map(move |b| {
                let (x, y) = (ball.element(a), ball.element(b));
                let v = ball.oracle_distance(x, y).ok()?;
                v.interior_safe.then(|| match distance(x, y) {
                    Ok(d) if d == v.answer => Ok(()),
                    r => Err(format!("d({x}, {y}): fast {r:?}, oracle {}", v.answer)),
                })
            })
        })
        .collect();
    s.merge(outcomes.into_iter().flatten().collect());
    s
}

fn cc_median(config: &CrosscheckConfig, ball: &BallComplex) -> SuiteResult {
    let mut s = SuiteResult::new("median");
    let near: Vec<usize> = (0..ball.vertex_count()).filter(|&v| ball.depth(v) <= 1).collect();
    let mid: Vec<usize> = (0..ball.vertex_count()).filter(|&v| ball.depth(v) <= 2).collect();
    let mut triples: Vec<[usize; 3]> = Vec::new();
    for &a in &near {
        for &b in &mid {
            for &c in &mid {
                triples.push([a, b, c]);
            }
        }
    }
    let mut rng = rng_for(config.seed, 12, 0);
    for _ in 0..config.samples {
        triples.push([0; 3].map(|_| rng.gen_range(0..ball.vertex_count())));
    }
    let outcomes: Vec<Option<std::result::Result<(), String>>> = triples
        .par_iter()
        .map(|&[a, b, c]| {
            let (x, y, z) = (ball.element(a), ball.element(b), ball.element(c));
            let v = ball.oracle_median(x, y, z);
            match v {
                Ok(v) if v.interior_safe => Some(match median(x, y, z) {
                    Ok(m) if m == v.answer => Ok(()),
                    r => Err(format!("m({x}, {y}, {z}): fast {r:?}, oracle {}", v.answer)),
                }),
                Ok(_) => None,
                Err(e) => Some(Err(e.to_string())),
            }
        })
        .collect();
    s.merge(outcomes.into_iter().flatten().collect());
    s
}

fn cc_side(ball: &BallComplex, hs: &[Halfspace]) -> SuiteResult {
    let mut s = SuiteResult::new("side membership");
    let outcomes: Vec<Option<std::result::Result<(), String>>> = hs
        .par_iter()
        .flat_map_iter(|phi| {
            ball.elements().iter().map(move |x| {
                let v = ball.oracle_side(x, phi).ok()?;
                v.interior_safe.then(|| match member(x, phi) {
                    Ok(m) if m == v.answer => Ok(()),
                    r => Err(format!("{x} ∈ {phi}: fast {r:?}, oracle {}", v.answer)),
                })
            })
        })
        .collect();
    s.merge(outcomes.into_iter().flatten().collect());
    s
}

fn cc_relation(config: &CrosscheckConfig, ball: &BallComplex, hs: &[Halfspace]) -> SuiteResult {
    let mut s = SuiteResult::new("halfspace relation");
    let outcomes: Vec<Option<std::result::Result<(), String>>> = hs
        .par_iter()
        .flat_map_iter(|phi| {
            hs.iter().map(move |psi| {
                let v = ball.oracle_relation(phi, psi).ok()?;
                v.interior_safe.then(|| {
                    let fast = relation(phi, psi).map(|r| if config.corrupt_relation { corrupt(r) } else { r });
                    match fast {
                        Ok(r) if r == v.answer => Ok(()),
                        r => Err(format!("{phi} vs {psi}: fast {r:?}, oracle {:?}", v.answer)),
                    }
                })
            })
        })
        .collect();
    s.merge(outcomes.into_iter().flatten().collect());
    s
}

fn cc_tight(ball: &BallComplex, hs: &[Halfspace]) -> SuiteResult {
    let mut s = SuiteResult::new("tight nesting");
    let outcomes: Vec<Option<std::result::Result<(), String>>> = hs
        .par_iter()
        .flat_map_iter(|phi| {
            hs.iter().map(move |psi| {
                let v = ball.oracle_tightly_nested(phi, psi).ok()?;
                v.interior_safe.then(|| match tightly_nested(phi, psi) {
                    Ok(t) if t == v.answer => Ok(()),
                    r => Err(format!("{phi} ⊋ {psi} tightly: fast {r:?}, oracle {}", v.answer)),
                })
            })
        })
        .collect();
    s.merge(outcomes.into_iter().flatten().collect());
    s
}

/// Every cover chain of `[u, u·w]` for short `u`, `w`.
fn small_segments(raag: &Raag) -> Vec<Segment> {
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for u in ball_elements(raag, 1) {
        for w in ball_elements(raag, 2) {
            let Ok(iv) = Interval::from_word(&u, w.word().to_vec()) else { continue };
            let mut stack: Vec<Vec<usize>> = (0..iv.len()).map(|i| vec![i]).collect();
            while let Some(chain) = stack.pop() {
                let seg = Segment::from_positions(iv.clone(), chain.clone()).expect("cover chain");
                let key: Vec<String> = seg.chain().iter().map(|h| h.to_string()).collect();
                if seen.insert(key) {
                    out.push(seg);
                }
                for j in iv.heap().covers_above(*chain.last().expect("nonempty")) {
                    let mut next = chain.clone();
                    next.push(j);
                    stack.push(next);
                }
            }
        }
    }
    out
}

fn cc_copies(ball: &BallComplex) -> SuiteResult {
    let mut s = SuiteResult::new("copy enumeration");
    let segs = small_segments(ball.raag());
    let near: Vec<usize> = (0..ball.vertex_count()).filter(|&v| ball.depth(v) <= 1).collect();
    let outcomes: Vec<Option<std::result::Result<(), String>>> = segs
        .par_iter()
        .flat_map_iter(|seg| {
            near.iter().flat_map(move |&a| {
                (0..ball.vertex_count()).map(move |b| {
                    let (x, y) = (ball.element(a), ball.element(b));
                    if !ball.copies_interior_safe(seg.chain(), x, y) {
                        return None;
                    }
                    let v = ball.oracle_copies(seg.chain(), x, y).ok()?;
                    if !v.interior_safe {
                        return None;
                    }
                    let iv = interval(x, y).ok()?;
                    let fast: Option<BTreeSet<Vec<OracleHalfspace>>> = enumerate_copies(seg, &iv, WitnessSearch::Exact)
                        .iter()
                        .map(|c| c.positions.iter().map(|&p| ball.halfspace_of(iv.halfspace(p))).collect())
                        .collect();
                    Some(match fast {
                        Some(f) if f == v.answer.copies => Ok(()),
                        Some(f) => Err(format!(
                            "γ = {:?} in [{x}, {y}]: fast {} copies, oracle {}",
                            seg.chain().iter().map(|h| h.to_string()).collect::<Vec<_>>(),
                            f.len(),
                            v.answer.copies.len()
                        )),
                        None => Err(format!("[{x}, {y}]: fast copy not resolved in the ball")),
                    })
                })
            })
        })
        .collect();
    s.merge(outcomes.into_iter().flatten().collect());
    s
}

fn cc_strip(ball: &BallComplex) -> SuiteResult {
    let mut s = SuiteResult::new("coset representatives are shortest");
    let raag = ball.raag();
    let subsets: Vec<GenSet> = (0..1u64 << raag.rank()).map(GenSet).collect();
    let outcomes: Vec<std::result::Result<(), String>> = (0..ball.vertex_count())
        .into_par_iter()
        .flat_map_iter(|v| {
            subsets.iter().map(move |&set| {
                let x = ball.element(v);
                let r = strip_parabolic_right(x, set);
                // coset component of x inside the ball, moving only along S
                let mut seen = vec![false; ball.vertex_count()];
                seen[v] = true;
                let mut stack = vec![v];
                let mut best = ball.depth(v);
                let mut has_rep = false;
                let target = ball.vertex(&r);
                while let Some(p) = stack.pop() {
                    best = best.min(ball.depth(p));
                    has_rep |= Some(p) == target;
                    for g in set.iter() {
                        for l in [Letter::pos(g), Letter::neg(g)] {
                            let mut w = ball.element(p).word().to_vec();
                            w.push(l);
                            if let Some(q) = ball.vertex_of_word(&w) {
                                if !seen[q] {
                                    seen[q] = true;
                                    stack.push(q);
                                }
                            }
                        }
                    }
                }
                if has_rep && best == r.len() {
                    Ok(())
                } else {
                    Err(format!("strip({x}, {set:?}) = {r}: in component {has_rep}, shortest {best}"))
                }
            })
        })
        .collect();
    s.merge(outcomes);
    s
}

fn cc_raag_like(ball: &BallComplex) -> SuiteResult {
    let mut s = SuiteResult::new("RAAG-like (i)–(iv), exhaustive in the ball");
    let r = ball.raag_like_exhaustive(1, ball.radius().saturating_sub(2));
    s.checked = r.checked - r.skipped.min(r.checked);
    s.failures = r.violations.len();
    s.counterexamples = r.violations.into_iter().take(MAX_COUNTEREXAMPLES).collect();
    s
}

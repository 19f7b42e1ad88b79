//! Certificates for the lower bound `φ̄_γ(g) ≥ 1` and the resulting scl
//! bound, with an independent re-verifier.

use std::path::PathBuf;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::axis::{axis_window, cyclically_reduce, fundamental_interval, AxisData};
use crate::counting::{
    count_nonoverlapping, enumerate_copies, find_maximal_g_nested, is_maximal_g_nested,
    reverse_segment, segments_overlap, Segment, WitnessSearch,
};
use crate::cube::{Halfspace, Sign};
use crate::error::{Error, Result};
use crate::raag::{DefiningGraph, GraphFile, GroupElement, Raag};

pub const FORMAT_VERSION: u32 = 1;
pub const DEFECT_BOUND: i64 = 6;
pub const HOMOGENIZED_DEFECT_BOUND: i64 = 12;
pub const DEFAULT_MAX_POWER: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalRecord {
    pub numerator: i64,
    pub denominator: i64,
}

impl From<Ratio<i64>> for RationalRecord {
    fn from(r: Ratio<i64>) -> Self {
        RationalRecord { numerator: *r.numer(), denominator: *r.denom() }
    }
}

impl RationalRecord {
    pub fn to_ratio(self) -> Option<Ratio<i64>> {
        (self.denominator != 0).then(|| Ratio::new(self.numerator, self.denominator))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HalfspaceRecord {
    pub base: String,
    pub label: String,
    /// `+` or `-`.
    pub sign: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegmentRecord {
    pub ambient_source: String,
    pub ambient_target: String,
    pub chain: Vec<HalfspaceRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxisRecord {
    pub conjugator: String,
    pub core: String,
    pub delta: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub n: usize,
    pub c_forward: usize,
    pub c_reverse: usize,
    pub omega: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QmCertificate {
    pub format_version: u32,
    pub graph: GraphFile,
    pub element: String,
    pub axis: AxisRecord,
    pub segment: SegmentRecord,
    pub table: Vec<TableRow>,
    pub defect_bound: i64,
    pub homogenized_defect_bound: i64,
    /// Certified lower bound for the homogenization at `g`.
    pub phi_bar_lower: RationalRecord,
    /// `min ω(o, gⁿo)/n` over the table; reported, not certified.
    pub observed_min_ratio: RationalRecord,
    pub in_commutator_subgroup: bool,
    pub scl_lower: Option<RationalRecord>,
    pub notes: Vec<String>,
}

impl QmCertificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> Result<QmCertificate> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            location: format!("line {} column {}", e.line(), e.column()),
            message: e.to_string(),
        })
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub graph: Raag,
    pub graph_path: Option<PathBuf>,
    pub word: String,
    pub max_power: usize,
    pub witness: WitnessSearch,
    pub samples: usize,
    pub seed: u64,
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(graph: Raag, word: &str) -> RunConfig {
        RunConfig {
            graph,
            graph_path: None,
            word: word.to_string(),
            max_power: DEFAULT_MAX_POWER,
            witness: WitnessSearch::Exact,
            samples: 1000,
            seed: crate::sample::DEFAULT_SEED,
            output: None,
        }
    }
}

fn sign_str(s: Sign) -> &'static str {
    match s {
        Sign::Plus => "+",
        Sign::Minus => "-",
    }
}

fn segment_record(seg: &Segment) -> SegmentRecord {
    let chain = seg
        .chain()
        .iter()
        .map(|h| HalfspaceRecord {
            base: h.base().to_string(),
            label: h.base().raag().name(h.label()).to_string(),
            sign: sign_str(h.sign()).to_string(),
        })
        .collect();
    SegmentRecord {
        ambient_source: seg.ambient().source().to_string(),
        ambient_target: seg.ambient().target().to_string(),
        chain,
    }
}

/// Copies `gᵏγ`, `k < n`, placed directly in `[o, gⁿo]`; checks each
/// translate and that they are pairwise non-overlapping.
fn direct_copies(ax: &AxisData, gamma: &Segment, n: usize) -> Result<()> {
    let window = axis_window(ax, n)?;
    let mut copies = Vec::with_capacity(n);
    for k in 0..n {
        let gk = ax.g.pow(k as i64);
        let positions: Vec<usize> = gamma.positions().iter().map(|p| p + k * ax.delta).collect();
        let image = gamma.translate(&gk);
        for (h, &p) in image.iter().zip(&positions) {
            if window.interval.halfspace(p) != h {
                return Err(Error::InternalInvariant(format!(
                    "g^{k}·γ is not at the expected place of [o, g^{n}o]"
                )));
            }
        }
        copies.push(Segment::from_positions(window.interval.clone(), positions)?);
    }
    for i in 0..copies.len() {
        for j in i + 1..copies.len() {
            if segments_overlap(&copies[i], &copies[j])? {
                return Err(Error::InternalInvariant(format!("g^{i}·γ and g^{j}·γ overlap")));
            }
        }
    }
    Ok(())
}

/// Counts of `γ` and `γ̄` in `[o, gⁿo]` for `n = 1..=max_power`.
pub fn tabulate(ax: &AxisData, gamma: &Segment, max_power: usize, search: WitnessSearch) -> Result<Vec<TableRow>> {
    let reverse = reverse_segment(gamma);
    (1..=max_power)
        .map(|n| {
            direct_copies(ax, gamma, n)?;
            let window = axis_window(ax, n)?;
            let forward = enumerate_copies(gamma, &window.interval, search);
            let c_forward = count_nonoverlapping(&forward, &window.interval)?;
            let backward = enumerate_copies(&reverse, &window.interval, search);
            let c_reverse = count_nonoverlapping(&backward, &window.interval)?;
            Ok(TableRow { n, c_forward, c_reverse, omega: c_forward as i64 - c_reverse as i64 })
        })
        .collect()
}

fn premises_hold(table: &[TableRow]) -> bool {
    table.iter().all(|r| r.c_forward >= r.n && r.c_reverse == 0 && r.omega == r.c_forward as i64 - r.c_reverse as i64)
}

fn min_ratio(table: &[TableRow]) -> Ratio<i64> {
    table
        .iter()
        .map(|r| Ratio::new(r.omega, r.n as i64))
        .min()
        .unwrap_or_else(|| Ratio::from_integer(0))
}

fn scl_from(phi_bar: Ratio<i64>) -> Ratio<i64> {
    phi_bar / (2 * HOMOGENIZED_DEFECT_BOUND)
}

pub fn certify(config: &RunConfig) -> Result<QmCertificate> {
    if config.max_power == 0 {
        return Err(Error::Precondition("N must be at least 1".into()));
    }
    let raag = &config.graph;
    let g = raag.parse(&config.word)?;
    if g.is_identity() {
        return Err(Error::NotApplicable("the identity has no axis".into()));
    }
    let ax = cyclically_reduce(&g)?;
    let gamma = find_maximal_g_nested(&ax)?;
    let table = tabulate(&ax, &gamma, config.max_power, config.witness)?;
    if let Some(r) = table.iter().find(|r| r.c_reverse != 0) {
        return Err(Error::InternalInvariant(format!(
            "found {} reverse copies of the maximal segment in [o, g^{}o]",
            r.c_reverse, r.n
        )));
    }
    if let Some(r) = table.iter().find(|r| r.c_forward < r.n) {
        return Err(Error::InternalInvariant(format!(
            "only {} copies of the maximal segment in [o, g^{}o]",
            r.c_forward, r.n
        )));
    }
    let phi_bar = Ratio::from_integer(1);
    let in_commutator = g.in_commutator_subgroup();
    let mut notes = Vec::new();
    let scl_lower = if in_commutator {
        Some(scl_from(phi_bar).into())
    } else {
        notes.push("element is not in the commutator subgroup; no scl bound is claimed".to_string());
        None
    };
    Ok(QmCertificate {
        format_version: FORMAT_VERSION,
        graph: raag.graph().to_file(),
        element: g.to_string(),
        axis: AxisRecord { conjugator: ax.conjugator.to_string(), core: ax.core.to_string(), delta: ax.delta },
        segment: segment_record(&gamma),
        observed_min_ratio: min_ratio(&table).into(),
        table,
        defect_bound: DEFECT_BOUND,
        homogenized_defect_bound: HOMOGENIZED_DEFECT_BOUND,
        phi_bar_lower: phi_bar.into(),
        in_commutator_subgroup: in_commutator,
        scl_lower,
        notes,
    })
}

fn parse_at(raag: &Raag, text: &str, location: &str) -> Result<GroupElement> {
    let word = raag.graph().parse_word(text).map_err(|e| Error::Parse {
        location: location.to_string(),
        message: e.to_string(),
    })?;
    raag.element(&word)
}

fn halfspace_at(raag: &Raag, rec: &HalfspaceRecord, location: &str) -> Result<Halfspace> {
    let base = parse_at(raag, &rec.base, &format!("{location}.base"))?;
    let label = raag.gen(&rec.label).ok_or_else(|| Error::Parse {
        location: format!("{location}.label"),
        message: format!("unknown generator '{}'", rec.label),
    })?;
    let sign = match rec.sign.as_str() {
        "+" => Sign::Plus,
        "-" => Sign::Minus,
        other => {
            return Err(Error::Parse { location: format!("{location}.sign"), message: format!("bad sign '{other}'") })
        }
    };
    Ok(Halfspace::new(label, &base, sign))
}

/// Recomputes every field from the serialized data. Malformed content is a
/// parse error; content that parses but fails to re-verify gives `false`.
pub fn verify_certificate(cert: &QmCertificate) -> Result<bool> {
    verify_with(cert, WitnessSearch::Exact)
}

pub fn verify_certificate_text(text: &str) -> Result<bool> {
    verify_certificate(&QmCertificate::from_json(text)?)
}

pub fn verify_with(cert: &QmCertificate, search: WitnessSearch) -> Result<bool> {
    let graph = DefiningGraph::from_file(&cert.graph).map_err(|e| Error::Parse {
        location: "graph".into(),
        message: e.to_string(),
    })?;
    let raag = Raag::new(graph);
    let g = parse_at(&raag, &cert.element, "element")?;
    let conj = parse_at(&raag, &cert.axis.conjugator, "axis.conjugator")?;
    let core = parse_at(&raag, &cert.axis.core, "axis.core")?;
    let chain = cert
        .segment
        .chain
        .iter()
        .enumerate()
        .map(|(i, r)| halfspace_at(&raag, r, &format!("segment.chain[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    let source = parse_at(&raag, &cert.segment.ambient_source, "segment.ambient_source")?;
    let target = parse_at(&raag, &cert.segment.ambient_target, "segment.ambient_target")?;

    if cert.format_version != FORMAT_VERSION
        || cert.defect_bound != DEFECT_BOUND
        || cert.homogenized_defect_bound != HOMOGENIZED_DEFECT_BOUND
        || g.is_identity()
        || g.to_string() != cert.element
    {
        return Ok(false);
    }
    let ax = AxisData { g: g.clone(), conjugator: conj, core, delta: cert.axis.delta };
    if ax.core.conjugate_by(&ax.conjugator) != g || ax.core.len() != ax.delta {
        return Ok(false);
    }
    match cyclically_reduce(&ax.core) {
        Ok(c) if c.conjugator.is_identity() && c.delta == ax.delta => {}
        _ => return Ok(false),
    }
    if source != *ax.base_vertex() || target != ax.orbit_point(1) || chain.is_empty() {
        return Ok(false);
    }
    let Ok(gamma) = Segment::from_halfspaces(fundamental_interval(&ax)?, &chain) else {
        return Ok(false);
    };
    if !is_maximal_g_nested(&ax, gamma.positions())? {
        return Ok(false);
    }
    let rows: Vec<usize> = cert.table.iter().map(|r| r.n).collect();
    if rows.is_empty() || rows != (1..=rows.len()).collect::<Vec<_>>() {
        return Ok(false);
    }
    let table = match tabulate(&ax, &gamma, rows.len(), search) {
        Ok(t) => t,
        Err(Error::InternalInvariant(_)) => return Ok(false),
        Err(e) => return Err(e),
    };
    if table != cert.table || !premises_hold(&table) {
        return Ok(false);
    }
    if cert.phi_bar_lower.to_ratio() != Some(Ratio::from_integer(1))
        || cert.observed_min_ratio.to_ratio() != Some(min_ratio(&table))
        || cert.in_commutator_subgroup != g.in_commutator_subgroup()
    {
        return Ok(false);
    }
    let expected_scl = g.in_commutator_subgroup().then(|| scl_from(Ratio::from_integer(1)));
    Ok(cert.scl_lower.and_then(RationalRecord::to_ratio) == expected_scl
        && cert.scl_lower.is_some() == expected_scl.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn commutator_certificate() {
        let mut c = RunConfig::new(fixtures::free_group(), "a b a^-1 b^-1");
        c.max_power = 4;
        let cert = certify(&c).unwrap();
        assert_eq!(cert.scl_lower.unwrap().to_ratio(), Some(Ratio::new(1, 24)));
        assert_eq!(cert.phi_bar_lower.to_ratio(), Some(Ratio::from_integer(1)));
        assert!(verify_certificate(&cert).unwrap());
        let text = cert.to_json();
        assert!(verify_certificate_text(&text).unwrap());
    }

    #[test]
    fn abelian_element_gets_no_scl_claim() {
        let mut c = RunConfig::new(fixtures::free_abelian(), "a b");
        c.max_power = 4;
        let cert = certify(&c).unwrap();
        assert_eq!(cert.phi_bar_lower.to_ratio(), Some(Ratio::from_integer(1)));
        assert!(cert.scl_lower.is_none());
        assert!(!cert.in_commutator_subgroup);
        assert!(verify_certificate(&cert).unwrap());
    }

    #[test]
    fn identity_is_not_applicable() {
        let c = RunConfig::new(fixtures::free_group(), "a a^-1");
        assert!(matches!(certify(&c), Err(Error::NotApplicable(_))));
    }

    #[test]
    fn tampering_is_detected() {
        let mut c = RunConfig::new(fixtures::free_group(), "a b a^-1 b^-1");
        c.max_power = 3;
        let cert = certify(&c).unwrap();
        let mut t = cert.clone();
        t.table[1].omega -= 1;
        assert!(!verify_certificate(&t).unwrap());
        let mut t = cert.clone();
        t.segment.chain[1].base = "b".into();
        assert!(!verify_certificate(&t).unwrap());
        let mut t = cert.clone();
        t.scl_lower = Some(RationalRecord { numerator: 1, denominator: 12 });
        assert!(!verify_certificate(&t).unwrap());
        let mut t = cert;
        t.element = "a x".into();
        assert!(matches!(verify_certificate(&t), Err(Error::Parse { .. })));
        assert!(matches!(verify_certificate_text("{ \"format_version\": 1,"), Err(Error::Parse { .. })));
    }

    #[test]
    fn certificates_are_deterministic() {
        let c = RunConfig::new(fixtures::path_graph(), "a b c^-1 b a");
        assert_eq!(certify(&c).unwrap(), certify(&c).unwrap());
    }
}

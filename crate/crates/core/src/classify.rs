//! Complexity verdicts for sets of vertex types, and instance-level choice
//! of a polynomial algorithm.

use std::collections::BTreeSet;

use num_integer::Integer;
use serde::Serialize;

use crate::embedding::euler_check;
use crate::error::{parse_err, Error, Result};
use crate::format::parse_kind_tokens;
use crate::instance::Instance;
use crate::kind::{Direction, VertexKind};
use crate::relation::{delta_gamma, Relation, SymmetricSpec};
use crate::solve::{k5::k5_size, Algorithm};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "tag")]
pub enum Outcome {
    P { algorithm: Algorithm, case_label: String },
    #[serde(rename = "NPComplete")]
    NpComplete { route: String },
    Unknown { note: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    #[serde(flatten)]
    pub outcome: Outcome,
    pub planar: bool,
}

impl Verdict {
    fn p(algorithm: Algorithm, case_label: impl Into<String>, planar: bool) -> Verdict {
        Verdict { outcome: Outcome::P { algorithm, case_label: case_label.into() }, planar }
    }

    fn np(route: impl Into<String>, planar: bool) -> Verdict {
        Verdict { outcome: Outcome::NpComplete { route: route.into() }, planar }
    }

    fn unknown(note: impl Into<String>, planar: bool) -> Verdict {
        Verdict { outcome: Outcome::Unknown { note: note.into() }, planar }
    }

    pub fn tag(&self) -> &'static str {
        match self.outcome {
            Outcome::P { .. } => "P",
            Outcome::NpComplete { .. } => "NPComplete",
            Outcome::Unknown { .. } => "Unknown",
        }
    }

    pub fn algorithm(&self) -> Option<Algorithm> {
        match self.outcome {
            Outcome::P { algorithm, .. } => Some(algorithm),
            _ => None,
        }
    }
}

/// A set of types to classify.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GammaSpec {
    pub symmetric_types: Vec<SymmetricSpec>,
    pub duplicators: Vec<Relation>,
    pub has_constants: bool,
    /// Signed sizes of available terminators: `f > 0` is `f-in-f`, `f < 0`
    /// is `0-in-|f|`.
    pub terminators: BTreeSet<i64>,
    /// Types that are neither symmetric nor duplicators.
    pub other: Vec<Relation>,
}

impl GammaSpec {
    pub fn new(types: impl IntoIterator<Item = SymmetricSpec>) -> GammaSpec {
        GammaSpec { symmetric_types: types.into_iter().collect(), ..Default::default() }
    }

    pub fn with_constants(mut self) -> GammaSpec {
        self.has_constants = true;
        self
    }

    /// One type or directive per line:
    ///
    /// ```text
    /// # comment
    /// 1-in-3            # shorthand for i-in-j and {a,b}-in-j
    /// sym 4 S=0,3       # any vertex kind in instance syntax
    /// eq 5              # equalizers, synchronizers, alternators and
    /// sync              # general duplicators are duplicators
    /// constants
    /// terminator -3
    /// ```
    pub fn parse(text: &str) -> Result<GammaSpec> {
        let mut g = GammaSpec::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            match toks[0] {
                "constants" => g.has_constants = true,
                "terminator" => {
                    let f: i64 = toks
                        .get(1)
                        .and_then(|t| t.parse().ok())
                        .filter(|&f| f != 0)
                        .ok_or_else(|| parse_err(i + 1, "expected a non-zero terminator size"))?;
                    g.terminators.insert(f);
                }
                t if t.contains("-in-") => g.symmetric_types.push(parse_in_notation(t).map_err(|m| parse_err(i + 1, m))?),
                _ => {
                    let kind = parse_kind_tokens(&toks).map_err(|m| parse_err(i + 1, m))?;
                    g.add_kind(kind);
                }
            }
        }
        Ok(g)
    }

    /// One vertex kind per member, constants and terminators included.
    pub fn kinds(&self) -> Vec<VertexKind> {
        let mut out: Vec<VertexKind> = self.symmetric_types.iter().cloned().map(VertexKind::Symmetric).collect();
        out.extend(self.terminators.iter().map(|&f| VertexKind::Symmetric(terminator_spec(f))));
        if self.has_constants {
            out.push(VertexKind::Constant(Direction::In));
            out.push(VertexKind::Constant(Direction::Out));
        }
        for r in &self.duplicators {
            let info = r.duplicator_info_default();
            out.push(match info {
                Some(i) if i.is_alternator => VertexKind::Alternator(r.arity()),
                Some(i) if i.is_equalizer => VertexKind::Equalizer(r.arity()),
                Some(i) if i.is_synchronizer => VertexKind::Synchronizer,
                _ => VertexKind::General(r.clone()),
            });
        }
        out.extend(self.other.iter().cloned().map(VertexKind::General));
        out
    }

    fn add_kind(&mut self, kind: VertexKind) {
        match kind {
            VertexKind::Constant(_) => self.has_constants = true,
            VertexKind::Symmetric(s) => self.symmetric_types.push(s),
            VertexKind::Equalizer(_) | VertexKind::Synchronizer | VertexKind::Alternator(_) => {
                self.duplicators.push(kind.expand())
            }
            VertexKind::General(r) => {
                if let Some(s) = r.is_symmetric() {
                    self.symmetric_types.push(s);
                } else if r.duplicator_info_default().is_some() {
                    self.duplicators.push(r);
                } else {
                    self.other.push(r);
                }
            }
            VertexKind::External => self.symmetric_types.push(SymmetricSpec::new(1, [0, 1]).unwrap()),
        }
    }

    /// Every type reversed.
    pub fn reversed(&self) -> GammaSpec {
        GammaSpec {
            symmetric_types: self.symmetric_types.iter().map(|s| s.reverse()).collect(),
            duplicators: self.duplicators.iter().map(|r| r.reverse()).collect(),
            has_constants: self.has_constants,
            terminators: self.terminators.iter().map(|f| -f).collect(),
            other: self.other.iter().map(|r| r.reverse()).collect(),
        }
    }

    fn check(&self) -> Result<()> {
        if self.terminators.contains(&0) {
            return Err(Error::Invalid("terminator size 0".into()));
        }
        for r in &self.duplicators {
            if r.duplicator_info_default().is_none() {
                return Err(Error::Invalid(format!("{r:?} is not a duplicator")));
            }
        }
        Ok(())
    }

    /// Symmetric types plus the terminators and constants as types.
    fn all_types(&self) -> Vec<SymmetricSpec> {
        let mut out = self.symmetric_types.clone();
        out.extend(self.terminators.iter().map(|&f| terminator_spec(f)));
        if self.has_constants {
            out.push(SymmetricSpec::exactly(0, 1));
            out.push(SymmetricSpec::exactly(1, 1));
        }
        out
    }
}

/// `i-in-j` or `{a,b,...}-in-j`.
fn parse_in_notation(t: &str) -> std::result::Result<SymmetricSpec, String> {
    let (set, j) = t.split_once("-in-").ok_or("expected S-in-j")?;
    let j: usize = j.parse().map_err(|_| format!("bad arity in {t:?}"))?;
    let set = set.strip_prefix('{').and_then(|x| x.strip_suffix('}')).unwrap_or(set);
    let items = set
        .split(',')
        .filter(|x| !x.is_empty())
        .map(|x| x.trim().parse::<usize>().map_err(|_| format!("bad element {x:?} in {t:?}")))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    SymmetricSpec::new(j, items).map_err(|e| e.to_string())
}

pub fn terminator_spec(f: i64) -> SymmetricSpec {
    let j = f.unsigned_abs() as usize;
    SymmetricSpec::exactly(if f > 0 { j } else { 0 }, j)
}

fn gcd_of(xs: &BTreeSet<usize>) -> usize {
    xs.iter().fold(0, |g, x| g.gcd(x))
}

/// P cases that need no constants or terminators.
fn classic_easy(types: &[SymmetricSpec], planar: bool) -> Option<Verdict> {
    if types.iter().all(|s| s.is_bijunctive_closed_form()) {
        return Some(Verdict::p(Algorithm::TwoSat, "all types bijunctive", planar));
    }
    if types.iter().all(|s| s.is_affine_closed_form()) {
        return Some(Verdict::p(Algorithm::Affine, "all types affine", planar));
    }
    if types.iter().all(|s| s.max_gap() <= 1) {
        return Some(Verdict::p(Algorithm::GapFree, "no gap of size 2 or more", planar));
    }
    None
}

/// Symmetric types with constants.
pub fn classify_const(gamma: &GammaSpec, planar: bool) -> Verdict {
    let types = gamma.all_types();
    if let Some(v) = classic_easy(&types, planar) {
        return v;
    }
    let delta = delta_gamma(&types);
    let g = gcd_of(&delta);
    if !planar {
        return Verdict::np(
            format!("constants and a net-flow {g} duplicator with a type that is neither bijunctive, affine nor gap-free"),
            planar,
        );
    }
    let edge_only = |s: &SymmetricSpec| s.in_set.iter().all(|&x| x == 0 || x == s.arity);
    let is = |s: &SymmetricSpec, i: usize| s.is_singleton() == Some(i);
    if g >= 5 {
        if types.iter().all(|s| edge_only(s) || is(s, 1)) {
            return Verdict::p(Algorithm::PlanarK5, format!("equalizers of size {g} or more with 1-in-j"), planar);
        }
        if types.iter().all(|s| edge_only(s) || (s.arity >= 1 && is(s, s.arity - 1))) {
            return Verdict::p(Algorithm::PlanarK5, format!("equalizers of size {g} or more with (j-1)-in-j"), planar);
        }
    }
    Verdict::np(planar_route(&types, g), planar)
}

/// Which crossover construction makes the planar case hard.
fn planar_route(types: &[SymmetricSpec], g: usize) -> String {
    if g == 1 {
        return "net-flow 1 duplicators are trivial, so no crossover is needed".into();
    }
    let bits: Vec<String> = types.iter().map(|s| s.bitstring()).collect();
    if g <= 4 {
        let eq = if g == 3 { 3 } else { 4 };
        return if bits.iter().any(|b| b.contains("0100")) {
            format!("crossover from 1-in-3 and a {eq}-equalizer")
        } else if bits.iter().any(|b| b.contains("0010")) {
            format!("crossover from 2-in-3 and a {eq}-equalizer (reversed)")
        } else {
            format!("crossover from a {eq}-equalizer")
        };
    }
    if types.iter().any(|s| s.in_set.iter().any(|&i| i >= 2 && i + 2 <= s.arity)) {
        return "2-in-4 and a synchronizer".into();
    }
    let has = |f: &dyn Fn(&SymmetricSpec) -> bool| types.iter().any(f);
    let pair = |s: &SymmetricSpec, a: usize, b: usize| s.in_set.len() == 2 && s.contains(a) && s.contains(b);
    if has(&|s| s.arity >= 4 && (pair(s, 1, s.arity) || pair(s, 0, s.arity - 1))) {
        return "crossover from {1,j}-in-j and constants".into();
    }
    "1-in-3, 2-in-3 and a synchronizer".into()
}

/// The terminator reached by adding self-loops to `spec`, if any.
pub fn terminator_via_self_loops(spec: &SymmetricSpec) -> Option<i64> {
    let mut s = spec.clone();
    loop {
        if let Some(f) = s.terminator_sign() {
            return Some(f);
        }
        if s.arity < 2 || s.in_set.is_empty() {
            return None;
        }
        s = s.add_self_loop();
    }
}

/// Symmetric types with terminators (given or from self-loops) but no
/// constants.
pub fn classify_terminator(gamma: &GammaSpec, planar: bool) -> Verdict {
    let types = gamma.all_types();
    if let Some(v) = classic_easy(&types, planar) {
        return v;
    }
    if types.iter().all(|s| s.is_bottom_up_closed()) {
        return Verdict::p(Algorithm::BottomUp, "all types bottom-up closed", planar);
    }
    if types.iter().all(|s| s.is_top_down_closed()) {
        return Verdict::p(Algorithm::TopDown, "all types top-down closed", planar);
    }
    let derived: BTreeSet<i64> = gamma.symmetric_types.iter().filter_map(terminator_via_self_loops).collect();
    if gamma.terminators.is_empty() && derived.is_empty() && !gamma.has_constants {
        return Verdict::unknown("no terminator can be built; no dichotomy is known without one", planar);
    }
    // Once one terminator exists the rest follow, and then constants.
    let mut with = gamma.clone();
    with.has_constants = true;
    classify_const(&with, planar)
}

fn singletons(types: &[SymmetricSpec]) -> Result<Vec<(usize, usize)>> {
    types
        .iter()
        .map(|s| s.is_singleton().map(|i| (i, s.arity)).ok_or_else(|| Error::Precondition(format!("{s} is not i-in-j"))))
        .collect()
}

/// `i-in-j` types with one non-trivial duplicator of net flow `f > 0`.
pub fn classify_iij_dup(types: &[SymmetricSpec], dup: &Relation, planar: bool) -> Result<Verdict> {
    let info = dup
        .duplicator_info_default()
        .ok_or_else(|| Error::Precondition(format!("{dup:?} is not a duplicator")))?;
    if info.is_trivial || info.net_flow == 0 {
        return Err(Error::Precondition("duplicator must be non-trivial with non-zero net flow".into()));
    }
    let f = info.net_flow;
    let ij = singletons(types)?;
    if types.iter().all(|s| s.is_bijunctive_closed_form()) {
        return Ok(Verdict::p(Algorithm::TwoSat, "all types bijunctive", planar));
    }
    if planar && f >= 5 {
        if ij.iter().all(|&(i, j)| i <= 1 || i == j) {
            return Ok(Verdict::p(Algorithm::PlanarK5, format!("net flow {f} with i in {{0,1,j}}"), planar));
        }
        if ij.iter().all(|&(i, j)| i == 0 || i + 1 >= j) {
            return Ok(Verdict::p(Algorithm::PlanarK5, format!("net flow {f} with i in {{0,j-1,j}}"), planar));
        }
    }
    let route = if ij.iter().any(|&(i, j)| j >= 4 && 2 * i == j) {
        "self-loops give 2-in-4; with the duplicator this simulates a synchronizer".to_string()
    } else if planar && f < 5 {
        format!("crossover from 1-in-3 and an equalizer built from the net-flow {f} duplicator")
    } else {
        format!("self-loops give terminators, then constants; net-flow {f} duplicators reach the hard constant case")
    };
    Ok(Verdict::np(route, planar))
}

/// `i-in-j` types with synchronizers.
pub fn classify_iij_sync(types: &[SymmetricSpec], planar: bool) -> Result<Verdict> {
    let ij = singletons(types)?;
    if types.iter().all(|s| s.is_bijunctive_closed_form()) {
        return Ok(Verdict::p(Algorithm::TwoSat, "all types bijunctive", planar));
    }
    let one_in_two = |&(i, j): &(usize, usize)| i == 1 && j == 2;
    let cases: [(&str, &dyn Fn(&(usize, usize)) -> bool); 4] = [
        ("all i < j/2 or 1-in-2", &|p| one_in_two(p) || 2 * p.0 < p.1),
        ("all i > j/2 or 1-in-2", &|p| one_in_two(p) || 2 * p.0 > p.1),
        ("all i in {0,1,j}", &|&(i, j)| i <= 1 || i == j),
        ("all i in {0,j-1,j}", &|&(i, j)| i == 0 || i + 1 >= j),
    ];
    for (label, ok) in cases {
        if ij.iter().all(ok) {
            return Ok(Verdict::p(Algorithm::NetFlow, label, planar));
        }
    }
    let route = if ij.iter().any(|&(i, j)| j >= 4 && 2 * i == j) {
        "2-in-4 (by self-loops) and a synchronizer"
    } else {
        "terminators of both signs from self-loops give 1-in-3 and 2-in-3 with a synchronizer"
    };
    Ok(Verdict::np(route, planar))
}

/// `i-in-j` types with alternators in the plane. Without planarity an
/// alternator is just a synchronizer.
pub fn classify_iij_alt(types: &[SymmetricSpec], planar: bool) -> Result<Verdict> {
    if !planar {
        return classify_iij_sync(types, planar);
    }
    singletons(types)?;
    Ok(Verdict::p(Algorithm::PlanarLp, "i-in-j with alternators", planar))
}

/// Route a GammaSpec to the matching classifier.
pub fn classify(gamma: &GammaSpec, planar: bool) -> Result<Verdict> {
    gamma.check()?;
    if !gamma.other.is_empty() {
        return Ok(Verdict::unknown("outside the classified fragment", planar));
    }
    if gamma.duplicators.is_empty() {
        return Ok(if gamma.has_constants { classify_const(gamma, planar) } else { classify_terminator(gamma, planar) });
    }
    let outside = || Verdict::unknown("outside the classified fragment", planar);
    let types = gamma.all_types();
    if types.iter().any(|s| s.is_singleton().is_none()) {
        return Ok(outside());
    }
    let infos: Vec<_> = gamma
        .duplicators
        .iter()
        .map(|r| (r, r.duplicator_info_default().expect("checked")))
        .filter(|(_, i)| !i.is_trivial)
        .collect();
    if infos.is_empty() {
        // Only trivial duplicators: they add nothing beyond 1-in-2 and 2-eq.
        return Ok(classify_terminator(&GammaSpec { duplicators: Vec::new(), ..gamma.clone() }, planar));
    }
    if infos.iter().all(|(_, i)| i.net_flow == 0) {
        return if planar && infos.iter().all(|(_, i)| i.is_alternator) {
            classify_iij_alt(&types, planar)
        } else {
            classify_iij_sync(&types, planar)
        };
    }
    let flows: BTreeSet<usize> = infos.iter().map(|(_, i)| i.net_flow).collect();
    if flows.len() == 1 {
        return classify_iij_dup(&types, infos[0].0, planar);
    }
    Ok(outside())
}

fn is_planar(inst: &Instance) -> bool {
    inst.num_edges() == 0 || (inst.has_rotation() && euler_check(inst).unwrap_or(false))
}

/// Whether a vertex of the instance is a zero-flow duplicator.
fn zero_flow_dup(inst: &Instance, v: usize) -> bool {
    match inst.kind(v) {
        VertexKind::Synchronizer | VertexKind::Alternator(_) => true,
        k if k.arity() <= 24 => inst
            .relation(v)
            .duplicator_info_default()
            .is_some_and(|i| i.net_flow == 0),
        _ => false,
    }
}

/// First polynomial algorithm whose preconditions hold on `inst`.
pub fn choose_algorithm(inst: &Instance) -> Option<Algorithm> {
    let n = inst.num_vertices();
    let sym: Vec<Option<SymmetricSpec>> = inst.kinds().iter().map(|k| k.as_symmetric()).collect();
    let small = (0..n).all(|v| inst.arity(v) <= 24);
    let each = |f: &dyn Fn(usize) -> bool| (0..n).all(f);
    if each(&|v| match &sym[v] {
        Some(s) => s.is_bijunctive_closed_form(),
        None => small && inst.relation(v).is_bijunctive(),
    }) {
        return Some(Algorithm::TwoSat);
    }
    if each(&|v| match &sym[v] {
        Some(s) => s.is_affine_closed_form(),
        None => small && inst.relation(v).is_affine(),
    }) {
        return Some(Algorithm::Affine);
    }
    let all_sym = sym.iter().all(|s| s.is_some());
    let specs = || sym.iter().flatten();
    if all_sym {
        if specs().all(|s| s.max_gap() <= 1) {
            return Some(Algorithm::GapFree);
        }
        if specs().all(|s| s.is_top_down_closed()) {
            return Some(Algorithm::TopDown);
        }
        if specs().all(|s| s.is_bottom_up_closed()) {
            return Some(Algorithm::BottomUp);
        }
    }
    let planar = is_planar(inst);
    if planar && k5_size(inst).is_some() {
        return Some(Algorithm::PlanarK5);
    }
    let iij = |v: usize| sym[v].as_ref().and_then(|s| s.is_singleton().map(|i| (i, s.arity)));
    if planar && each(&|v| iij(v).is_some() || matches!(inst.kind(v), VertexKind::Alternator(k) if *k > 2)) {
        return Some(Algorithm::PlanarLp);
    }
    // Singleton types of one sync family plus zero-flow duplicators.
    if small && each(&|v| iij(v).is_some() || zero_flow_dup(inst, v)) {
        let ij: Vec<(usize, usize)> = (0..n).filter_map(iij).collect();
        let fam: [&dyn Fn(&(usize, usize)) -> bool; 4] = [
            &|&(i, j)| (i == 1 && j == 2) || 2 * i < j,
            &|&(i, j)| (i == 1 && j == 2) || 2 * i > j,
            &|&(i, j)| i <= 1 || i == j,
            &|&(i, j)| i == 0 || i + 1 >= j,
        ];
        if fam.iter().any(|f| ij.iter().all(f)) {
            return Some(Algorithm::NetFlow);
        }
    }
    None
}

/// A classifier example with its expected verdict tag.
#[derive(Debug, Clone)]
pub struct TableRow {
    pub name: &'static str,
    pub gamma: GammaSpec,
    pub planar: bool,
    pub expected: &'static str,
}

/// Curated classifier examples, each with a known verdict.
pub fn curated_table() -> Vec<TableRow> {
    let rows: [(&str, &str, bool, &str); 26] = [
        ("{0,3}-in-3 and 1-in-3 with constants", "{0,3}-in-3\n1-in-3\nconstants", false, "NPComplete"),
        ("{0,3}-in-4 with constants", "{0,3}-in-4\nconstants", false, "NPComplete"),
        ("{1,4}-in-4 with constants", "{1,4}-in-4\nconstants", false, "NPComplete"),
        ("{0,3,4}-in-4 with constants", "{0,3,4}-in-4\nconstants", false, "NPComplete"),
        ("{0,1,4}-in-4 with constants", "{0,1,4}-in-4\nconstants", false, "NPComplete"),
        ("{0,3}-in-4 alone (terminator by self-loop)", "{0,3}-in-4", false, "NPComplete"),
        ("{0,1,2}-in-2 with constants", "{0,1,2}-in-2\nconstants", true, "P"),
        ("1-in-7 and {0,7}-in-7, planar", "1-in-7\n{0,7}-in-7\nconstants", true, "P"),
        ("1-in-7 and {0,7}-in-7, non-planar", "1-in-7\n{0,7}-in-7\nconstants", false, "NPComplete"),
        ("6-in-7 and {0,7}-in-7, planar", "6-in-7\n{0,7}-in-7\nconstants", true, "P"),
        ("1-in-6 and 5-in-6 with {0,6}-in-6, planar", "1-in-6\n5-in-6\n{0,6}-in-6\nconstants", true, "NPComplete"),
        ("evens in 4 with constants", "{0,2,4}-in-4\nconstants", false, "P"),
        ("{1,2}-in-3 and 1-in-3 with constants", "{1,2}-in-3\n1-in-3\nconstants", false, "P"),
        ("1-in-3 and 3-equalizer, planar", "1-in-3\neq 3", true, "NPComplete"),
        ("1-in-3 and 5-equalizer, planar", "1-in-3\neq 5", true, "P"),
        ("1-in-3 and 5-equalizer, non-planar", "1-in-3\neq 5", false, "NPComplete"),
        ("0-in-4 and 4-in-4 with a 3-equalizer", "0-in-4\n4-in-4\neq 3", false, "P"),
        ("2-in-4 and synchronizer", "2-in-4\nsync", false, "NPComplete"),
        ("1-in-4 and 3-in-4 with synchronizer", "1-in-4\n3-in-4\nsync", false, "NPComplete"),
        ("1-in-4 and synchronizer", "1-in-4\nsync", false, "P"),
        ("2-in-4 and alternators, planar", "2-in-4\nalt 4", true, "P"),
        ("0-in-3 and 3-in-3 with alternators, planar", "0-in-3\n3-in-3\nalt 4", true, "P"),
        ("1-in-5 and alternators, planar", "1-in-5\nalt 4", true, "P"),
        ("{0,3}-in-7 alone (top-down closed)", "{0,3}-in-7", false, "P"),
        ("{1,4}-in-8 and {0,2}-in-2", "{1,4}-in-8\n{0,2}-in-2", false, "Unknown"),
        ("an asymmetric non-duplicator", "gen 3 allowed=100;010;110", false, "Unknown"),
    ];
    rows.iter()
        .map(|&(name, text, planar, expected)| TableRow {
            name,
            gamma: GammaSpec::parse(text).expect("curated gamma"),
            planar,
            expected,
        })
        .collect()
}

//! Text and JSON forms of instances and gadgets.
//!
//! ```text
//! # comment
//! vertex a sym 3 S=1
//! vertex b gen 2 allowed=01;10
//! vertex c eq 3
//! vertex d sync
//! vertex e alt 4
//! vertex f const in
//! external x            # gadgets only; order = external port order
//! edge a.0 b.1
//! rot a 0 2 1           # all vertices or none
//! outer 0               # gadgets only
//! target sym 3 S=2      # gadgets only: declared target type
//! ```

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{parse_err, Error, Result};
use crate::instance::{Edge, Endpoint, Instance};
use crate::kind::{Direction, VertexKind};
use crate::relation::{parse_word, Relation, SymmetricSpec};

/// A parsed file: an instance plus the optional gadget fields.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub instance: Instance,
    pub externals: Vec<usize>,
    pub outer: Option<usize>,
    pub target: Option<VertexKind>,
}

/// Parse a kind from its tokens, e.g. `["sym", "3", "S=0,3"]`.
pub fn parse_kind_tokens(tokens: &[&str]) -> std::result::Result<VertexKind, String> {
    let num = |i: usize| -> std::result::Result<usize, String> {
        tokens
            .get(i)
            .ok_or_else(|| "missing number".to_string())?
            .parse::<usize>()
            .map_err(|e| format!("bad number {:?}: {e}", tokens[i]))
    };
    let expect_len = |n: usize| {
        if tokens.len() == n {
            Ok(())
        } else {
            Err(format!("expected {n} tokens in kind, got {}", tokens.len()))
        }
    };
    match tokens.first().copied() {
        Some("sym") => {
            expect_len(3)?;
            let j = num(1)?;
            let list = tokens[2].strip_prefix("S=").ok_or("expected S=...")?;
            let mut s = Vec::new();
            for item in list.split(',').filter(|x| !x.is_empty()) {
                s.push(item.parse::<usize>().map_err(|e| format!("bad element {item:?}: {e}"))?);
            }
            Ok(VertexKind::Symmetric(SymmetricSpec::new(j, s).map_err(|e| e.to_string())?))
        }
        Some("gen") => {
            expect_len(3)?;
            let j = num(1)?;
            let list = tokens[2].strip_prefix("allowed=").ok_or("expected allowed=...")?;
            let mut ws = Vec::new();
            for w in list.split(';').filter(|x| !x.is_empty()) {
                ws.push(parse_word(w, j).map_err(|e| e.to_string())?);
            }
            Ok(VertexKind::General(Relation::new(j, ws).map_err(|e| e.to_string())?))
        }
        Some("eq") => {
            expect_len(2)?;
            Ok(VertexKind::Equalizer(num(1)?))
        }
        Some("sync") => {
            expect_len(1)?;
            Ok(VertexKind::Synchronizer)
        }
        Some("alt") => {
            expect_len(2)?;
            let k = num(1)?;
            if k % 2 != 0 {
                return Err(format!("alternator degree {k} is odd"));
            }
            Ok(VertexKind::Alternator(k))
        }
        Some("const") => {
            expect_len(2)?;
            match tokens[1] {
                "in" => Ok(VertexKind::Constant(Direction::In)),
                "out" => Ok(VertexKind::Constant(Direction::Out)),
                d => Err(format!("bad constant direction {d:?}")),
            }
        }
        Some(other) => Err(format!("unknown vertex kind {other:?}")),
        None => Err("missing vertex kind".into()),
    }
}

pub fn parse_kind(s: &str) -> Result<VertexKind> {
    let toks: Vec<&str> = s.split_whitespace().collect();
    parse_kind_tokens(&toks).map_err(|m| parse_err(1, m))
}

/// Inverse of [`parse_kind`]; `External` has no kind syntax and returns `None`.
pub fn kind_to_text(k: &VertexKind) -> Option<String> {
    Some(match k {
        VertexKind::Symmetric(s) => {
            let items: Vec<String> = s.in_set.iter().map(|x| x.to_string()).collect();
            format!("sym {} S={}", s.arity, items.join(","))
        }
        VertexKind::General(r) => format!("gen {} allowed={}", r.arity(), r.word_strings().join(";")),
        VertexKind::Equalizer(k) => format!("eq {k}"),
        VertexKind::Synchronizer => "sync".into(),
        VertexKind::Alternator(k) => format!("alt {k}"),
        VertexKind::Constant(Direction::In) => "const in".into(),
        VertexKind::Constant(Direction::Out) => "const out".into(),
        VertexKind::External => return None,
    })
}

fn parse_endpoint(tok: &str, ids: &HashMap<String, usize>, line: usize) -> Result<Endpoint> {
    let (v, p) = tok.rsplit_once('.').ok_or_else(|| parse_err(line, format!("expected <vertex>.<port>, got {tok:?}")))?;
    let vi = *ids.get(v).ok_or_else(|| parse_err(line, format!("unknown vertex {v:?}")))?;
    let pi = p.parse::<usize>().map_err(|e| parse_err(line, format!("bad port {p:?}: {e}")))?;
    Ok(Endpoint::new(vi, pi))
}

pub fn parse_document(text: &str) -> Result<Document> {
    let mut names = Vec::new();
    let mut kinds = Vec::new();
    let mut ids: HashMap<String, usize> = HashMap::new();
    let mut edges = Vec::new();
    let mut rots: HashMap<usize, Vec<usize>> = HashMap::new();
    let mut externals = Vec::new();
    let mut outer = None;
    let mut target = None;
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last_line = line;
        let body = raw.split('#').next().unwrap_or("");
        let toks: Vec<&str> = body.split_whitespace().collect();
        let Some(&head) = toks.first() else {
            continue;
        };
        let mut declare = |name: &str, kind: VertexKind, names: &mut Vec<String>| -> Result<()> {
            if ids.insert(name.to_string(), names.len()).is_some() {
                return Err(parse_err(line, format!("duplicate vertex {name:?}")));
            }
            names.push(name.to_string());
            kinds.push(kind);
            Ok(())
        };
        match head {
            "vertex" => {
                let name = toks.get(1).ok_or_else(|| parse_err(line, "missing vertex id"))?;
                let kind = parse_kind_tokens(&toks[2..]).map_err(|m| parse_err(line, m))?;
                declare(name, kind, &mut names)?;
            }
            "external" => {
                if toks.len() != 2 {
                    return Err(parse_err(line, "expected: external <id>"));
                }
                externals.push(names.len());
                declare(toks[1], VertexKind::External, &mut names)?;
            }
            "edge" => {
                if toks.len() != 3 {
                    return Err(parse_err(line, "expected: edge <u>.<p> <v>.<q>"));
                }
                let a = parse_endpoint(toks[1], &ids, line)?;
                let b = parse_endpoint(toks[2], &ids, line)?;
                edges.push((line, Edge { a, b }));
            }
            "rot" => {
                let name = toks.get(1).ok_or_else(|| parse_err(line, "missing vertex id"))?;
                let v = *ids.get(*name).ok_or_else(|| parse_err(line, format!("unknown vertex {name:?}")))?;
                let mut order = Vec::new();
                for t in &toks[2..] {
                    order.push(t.parse::<usize>().map_err(|e| parse_err(line, format!("bad port {t:?}: {e}")))?);
                }
                if rots.insert(v, order).is_some() {
                    return Err(parse_err(line, format!("second rotation for {name:?}")));
                }
            }
            "outer" => {
                if toks.len() != 2 {
                    return Err(parse_err(line, "expected: outer <face-id>"));
                }
                outer = Some(toks[1].parse::<usize>().map_err(|e| parse_err(line, format!("bad face id: {e}")))?);
            }
            "target" => {
                target = Some(parse_kind_tokens(&toks[1..]).map_err(|m| parse_err(line, m))?);
            }
            other => return Err(parse_err(line, format!("unknown directive {other:?}"))),
        }
    }
    let rotation = if rots.is_empty() {
        None
    } else if rots.len() == names.len() {
        Some((0..names.len()).map(|v| rots.remove(&v).unwrap()).collect())
    } else {
        return Err(parse_err(last_line, "rotation block must cover all vertices or none"));
    };
    // Report port errors against the offending edge line where possible.
    let mut used: HashMap<(usize, usize), usize> = HashMap::new();
    for (line, e) in &edges {
        for ep in [e.a, e.b] {
            if ep.port >= kinds[ep.vertex].arity() {
                return Err(parse_err(*line, format!("{}.{} exceeds arity {}", names[ep.vertex], ep.port, kinds[ep.vertex].arity())));
            }
            if let Some(prev) = used.insert((ep.vertex, ep.port), *line) {
                return Err(parse_err(*line, format!("port {}.{} already used on line {prev}", names[ep.vertex], ep.port)));
            }
        }
    }
    let edges: Vec<Edge> = edges.into_iter().map(|(_, e)| e).collect();
    let instance = Instance::new(names, kinds, edges, rotation).map_err(|e| parse_err(last_line, e.to_string()))?;
    Ok(Document { instance, externals, outer, target })
}

/// Parse a plain instance (no gadget fields).
pub fn parse_instance(text: &str) -> Result<Instance> {
    let doc = parse_document(text)?;
    if !doc.externals.is_empty() {
        return Err(parse_err(1, "external vertices are only legal in gadget files"));
    }
    Ok(doc.instance)
}

/// Canonical text form. External vertices are written as `external` lines
/// in vertex order, so gadget externals round-trip only when ascending.
pub fn to_text(inst: &Instance, extra: Option<(&Option<usize>, &Option<VertexKind>)>) -> String {
    let mut out = String::new();
    for v in 0..inst.num_vertices() {
        match kind_to_text(inst.kind(v)) {
            Some(k) => out.push_str(&format!("vertex {} {}\n", inst.name(v), k)),
            None => out.push_str(&format!("external {}\n", inst.name(v))),
        }
    }
    for e in inst.edges() {
        out.push_str(&format!(
            "edge {}.{} {}.{}\n",
            inst.name(e.a.vertex),
            e.a.port,
            inst.name(e.b.vertex),
            e.b.port
        ));
    }
    if let Some(rot) = inst.rotations() {
        for (v, r) in rot.iter().enumerate() {
            let ports: String = r.iter().map(|p| format!(" {p}")).collect();
            out.push_str(&format!("rot {}{ports}\n", inst.name(v)));
        }
    }
    if let Some((outer, target)) = extra {
        if let Some(f) = outer {
            out.push_str(&format!("outer {f}\n"));
        }
        if let Some(t) = target.as_ref().and_then(kind_to_text) {
            out.push_str(&format!("target {t}\n"));
        }
    }
    out
}

pub fn document_to_text(doc: &Document) -> String {
    to_text(&doc.instance, Some((&doc.outer, &doc.target)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum KindJson {
    Sym { arity: usize, in_set: Vec<usize> },
    Gen { arity: usize, allowed: Vec<String> },
    Eq { k: usize },
    Sync,
    Alt { k: usize },
    Const { dir: Direction },
    Ext,
}

impl From<&VertexKind> for KindJson {
    fn from(k: &VertexKind) -> Self {
        match k {
            VertexKind::Symmetric(s) => KindJson::Sym { arity: s.arity, in_set: s.in_set.iter().copied().collect() },
            VertexKind::General(r) => KindJson::Gen { arity: r.arity(), allowed: r.word_strings() },
            VertexKind::Equalizer(k) => KindJson::Eq { k: *k },
            VertexKind::Synchronizer => KindJson::Sync,
            VertexKind::Alternator(k) => KindJson::Alt { k: *k },
            VertexKind::Constant(d) => KindJson::Const { dir: *d },
            VertexKind::External => KindJson::Ext,
        }
    }
}

impl KindJson {
    pub fn to_kind(&self) -> Result<VertexKind> {
        Ok(match self {
            KindJson::Sym { arity, in_set } => VertexKind::Symmetric(SymmetricSpec::new(*arity, in_set.iter().copied())?),
            KindJson::Gen { arity, allowed } => VertexKind::General(Relation::from_strs(*arity, allowed)?),
            KindJson::Eq { k } => VertexKind::Equalizer(*k),
            KindJson::Sync => VertexKind::Synchronizer,
            KindJson::Alt { k } => VertexKind::Alternator(*k),
            KindJson::Const { dir } => VertexKind::Constant(*dir),
            KindJson::Ext => VertexKind::External,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexJson {
    pub id: String,
    pub kind: KindJson,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocumentJson {
    pub vertices: Vec<VertexJson>,
    pub edges: Vec<[(String, usize); 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rotation: Option<BTreeMap<String, Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub externals: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outer: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<KindJson>,
}

pub fn document_to_json(doc: &Document) -> DocumentJson {
    let inst = &doc.instance;
    let name = |ep: Endpoint| (inst.name(ep.vertex).to_string(), ep.port);
    DocumentJson {
        vertices: (0..inst.num_vertices())
            .map(|v| VertexJson { id: inst.name(v).to_string(), kind: inst.kind(v).into() })
            .collect(),
        edges: inst.edges().iter().map(|e| [name(e.a), name(e.b)]).collect(),
        rotation: inst
            .rotations()
            .map(|r| r.iter().enumerate().map(|(v, o)| (inst.name(v).to_string(), o.clone())).collect()),
        externals: doc.externals.iter().map(|&v| inst.name(v).to_string()).collect(),
        outer: doc.outer,
        target: doc.target.as_ref().map(|k| k.into()),
    }
}

pub fn document_from_json(j: &DocumentJson) -> Result<Document> {
    let mut names = Vec::new();
    let mut kinds = Vec::new();
    let mut ids = HashMap::new();
    for v in &j.vertices {
        ids.insert(v.id.clone(), names.len());
        names.push(v.id.clone());
        kinds.push(v.kind.to_kind()?);
    }
    let lookup = |(n, p): &(String, usize)| -> Result<Endpoint> {
        let v = *ids.get(n).ok_or_else(|| Error::Invalid(format!("unknown vertex {n:?}")))?;
        Ok(Endpoint::new(v, *p))
    };
    let mut edges = Vec::new();
    for [a, b] in &j.edges {
        edges.push(Edge { a: lookup(a)?, b: lookup(b)? });
    }
    let rotation = match &j.rotation {
        None => None,
        Some(m) => {
            let mut rot = vec![None; names.len()];
            for (n, order) in m {
                let v = *ids.get(n).ok_or_else(|| Error::Invalid(format!("unknown vertex {n:?}")))?;
                rot[v] = Some(order.clone());
            }
            if rot.iter().any(|r| r.is_none()) {
                return Err(Error::Rotation("rotation must cover all vertices".into()));
            }
            Some(rot.into_iter().map(|r| r.unwrap()).collect())
        }
    };
    let mut externals = Vec::new();
    for n in &j.externals {
        externals.push(*ids.get(n).ok_or_else(|| Error::Invalid(format!("unknown external {n:?}")))?);
    }
    let target = match &j.target {
        Some(t) => Some(t.to_kind()?),
        None => None,
    };
    Ok(Document { instance: Instance::new(names, kinds, edges, rotation)?, externals, outer: j.outer, target })
}

pub fn parse_document_json(text: &str) -> Result<Document> {
    let j: DocumentJson = serde_json::from_str(text).map_err(|e| parse_err(e.line(), e.to_string()))?;
    document_from_json(&j)
}

/// Parse either format, choosing JSON when the text starts with `{`.
pub fn parse_any(text: &str) -> Result<Document> {
    if text.trim_start().starts_with('{') {
        parse_document_json(text)
    } else {
        parse_document(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TRI: &str = "\
# three 1-in-2 vertices in a cycle
vertex a sym 2 S=1
vertex b sym 2 S=1
vertex c sym 2 S=1
edge a.1 b.0
edge b.1 c.0
edge c.1 a.0
rot a 0 1
rot b 0 1
rot c 0 1
";

    #[test]
    fn text_roundtrip() {
        let doc = parse_document(TRI).unwrap();
        assert_eq!(doc.instance.num_edges(), 3);
        let text = document_to_text(&doc);
        assert_eq!(parse_document(&text).unwrap(), doc);
        assert_eq!(text, TRI.lines().skip(1).map(|l| format!("{l}\n")).collect::<String>());
    }

    #[test]
    fn json_roundtrip() {
        let doc = parse_document(TRI).unwrap();
        let j = serde_json::to_string(&document_to_json(&doc)).unwrap();
        assert_eq!(parse_any(&j).unwrap(), doc);
    }

    #[test]
    fn errors_carry_lines() {
        let bad = "vertex a sym 2 S=1\nvertex b sym 2 S=1\nedge a.0 b.0\nedge a.0 b.1\n";
        match parse_document(bad) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("unexpected {other:?}"),
        }
        match parse_document("vertex a sim 2\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 1),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn kinds_roundtrip() {
        for s in ["sym 3 S=0,3", "sym 2 S=", "gen 2 allowed=10;01", "eq 5", "sync", "alt 6", "const in", "const out"] {
            let k = parse_kind(s).unwrap();
            assert_eq!(kind_to_text(&k).unwrap(), s);
        }
    }
}

//! Shipped gadget files. Each declares a `target` type that the gadget
//! must simulate exactly (external order included).

use crate::error::{Error, Result};
use crate::format::{parse_document, Document};
use crate::relation::Relation;
use crate::search::DEFAULT_EDGE_CAP;

use super::{derived_type_with_cap, Gadget};

macro_rules! gadget_file {
    ($name:literal) => {
        ($name, include_str!(concat!("../../data/gadgets/", $name, ".gdg")))
    };
}

/// (name, file contents) for every shipped gadget.
pub const FILES: &[(&str, &str)] = &[
    gadget_file!("sync_from_eq3"),
    gadget_file!("sync_from_flow1_dups"),
    gadget_file!("sync_from_flow2_dups"),
    gadget_file!("link_flow1"),
    gadget_file!("wrap_flow1"),
    gadget_file!("crossover_2in4_sync"),
    gadget_file!("two_in_four_from_1in3_2in3"),
    gadget_file!("two_in_three_from_1j_pair"),
    gadget_file!("crossover_1in3_eq3"),
    gadget_file!("two_in_three_from_1in3_eq4"),
    gadget_file!("subdivide_1in2"),
    gadget_file!("subdivide_01in2_alt"),
];

pub fn names() -> impl Iterator<Item = &'static str> {
    FILES.iter().map(|(n, _)| *n)
}

pub fn text(name: &str) -> Option<&'static str> {
    FILES.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

pub fn load(name: &str) -> Result<Document> {
    let t = text(name).ok_or_else(|| Error::Invalid(format!("no shipped gadget {name:?}")))?;
    parse_document(t)
}

/// Result of checking one gadget against its declared target.
#[derive(Debug, Clone)]
pub struct Check {
    pub derived: Relation,
    pub target: Relation,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.derived == self.target
    }
}

/// Enumerate the gadget of a document and compare with its `target`.
/// The cap is raised to the gadget's own size; constants and small
/// interiors keep the search tiny.
pub fn check_document(doc: &Document) -> Result<Check> {
    let target = doc
        .target
        .as_ref()
        .ok_or_else(|| Error::Invalid("gadget file has no target".into()))?
        .expand();
    let g = Gadget::from_document(doc)?;
    let cap = DEFAULT_EDGE_CAP.max(g.instance.num_edges());
    Ok(Check { derived: derived_type_with_cap(&g, cap)?, target })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::euler_check;
    use crate::format::document_to_text;
    use crate::kind::VertexKind;
    use crate::simulate::construct::{duplicator, link_duplicators, synchronizer_from, two_in_three_from_pair, wrap_duplicator};
    use crate::simulate::{derived_type, substitute};

    #[test]
    fn every_shipped_gadget_verifies() {
        for name in names() {
            let doc = load(name).unwrap();
            let c = check_document(&doc).unwrap();
            assert!(c.passed(), "{name}: {:?} vs {:?}", c.derived, c.target);
            let g = Gadget::from_document(&doc).unwrap();
            if g.instance.has_rotation() {
                assert!(euler_check(&g.instance).unwrap(), "{name}");
            }
        }
    }

    #[test]
    fn files_roundtrip() {
        for name in names() {
            let doc = load(name).unwrap();
            assert_eq!(parse_document(&document_to_text(&doc)).unwrap(), doc, "{name}");
        }
    }

    #[test]
    fn broken_crossover_fails() {
        // Dropping a synchronizer edge (replacing it by two externals) must
        // change the derived type.
        let t = text("crossover_2in4_sync").unwrap();
        let broken = t.replace("edge E.3 C.3\n", "edge E.3 yc.0\nedge C.3 yd.0\n").replace(
            "external xw\n",
            "external xw\nexternal yc\nexternal yd\n",
        );
        let broken: String = broken.lines().filter(|l| !l.starts_with("rot ") && !l.starts_with("outer")).map(|l| format!("{l}\n")).collect();
        let mut doc = parse_document(&broken).unwrap();
        doc.target = Some(VertexKind::General(crate::kind::crossover()));
        assert!(!check_document(&doc).unwrap().passed());
    }

    fn constructed() -> Vec<(&'static str, &'static str, Gadget, VertexKind)> {
        let sync = VertexKind::Synchronizer;
        let e3 = VertexKind::Equalizer(3).expand();
        let e4 = VertexKind::Equalizer(4).expand();
        let link = link_duplicators(&[(e4, 1), (e3.clone(), -1)]).unwrap();
        let linked = derived_type(&link).unwrap();
        let target = duplicator(0b011, 3);
        let wrap = wrap_duplicator(&linked, &target).unwrap();
        let d = wrap.instance.vertex_index("D").unwrap();
        let inst = substitute(&wrap.instance, d, &link).unwrap();
        let ext = wrap.externals.iter().map(|&x| inst.vertex_index(wrap.instance.name(x)).unwrap()).collect();
        let wrapped = Gadget::new(inst, ext, None).unwrap();
        vec![
            ("sync_from_eq3", "Synchronizer from two 3-equalizers joined by one edge.", synchronizer_from(&e3).unwrap(), sync.clone()),
            (
                "sync_from_flow1_dups",
                "Synchronizer from two degree-3 duplicators of net flow 1.",
                synchronizer_from(&duplicator(0b011, 3)).unwrap(),
                sync.clone(),
            ),
            (
                "sync_from_flow2_dups",
                "Synchronizer from two degree-4 duplicators of net flow 2.",
                synchronizer_from(&duplicator(0b0111, 4)).unwrap(),
                sync,
            ),
            (
                "link_flow1",
                "A 4-equalizer and a reversed 3-equalizer chained by a synchronizer: net flow 1.",
                link,
                VertexKind::General(linked),
            ),
            (
                "wrap_flow1",
                "The linked flow-1 duplicator shaped into {110, 001}.",
                wrapped,
                VertexKind::General(target),
            ),
            (
                "two_in_three_from_1j_pair",
                "2-in-3 from two {1,5}-in-5 vertices and an inward constant.",
                two_in_three_from_pair(5).unwrap(),
                VertexKind::Symmetric(crate::relation::SymmetricSpec::exactly(2, 3)),
            ),
        ]
    }

    /// Constructor-built files must match their constructors. Run with
    /// `ORIENTKIT_BLESS=1` to rewrite them.
    #[test]
    fn constructed_files_match() {
        let bless = std::env::var_os("ORIENTKIT_BLESS").is_some();
        for (name, header, g, target) in constructed() {
            let doc = g.to_document(Some(target));
            if bless {
                let path = format!("{}/data/gadgets/{name}.gdg", env!("CARGO_MANIFEST_DIR"));
                std::fs::write(path, format!("# {header}\n{}", document_to_text(&doc))).unwrap();
            } else {
                assert_eq!(load(name).unwrap(), doc, "{name}");
            }
        }
    }
}

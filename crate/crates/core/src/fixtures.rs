//! Hand-written inequality lists for small cones, stored as JSON under
//! `fixtures/` and compiled into the library.
//!
//! An entry may carry an `orbit` size: the relation then stands for every
//! image under permutations of the blocks `x`, `y`, `z`, and the expansion
//! must produce exactly that many distinct relations.

use itertools::Itertools;
use serde::Deserialize;

use crate::classical_cones::ConeId;
use crate::error::{Error, Result};
use crate::polyhedra::{InequalitySystem, LinearRelation, Provenance};
use crate::registry;

const SOURCES: &[(&str, &str)] = &[
    ("e1-3", include_str!("../fixtures/e1-3.json")),
    ("e1-4", include_str!("../fixtures/e1-4.json")),
    ("e2-1", include_str!("../fixtures/e2-1.json")),
    ("e2-2", include_str!("../fixtures/e2-2.json")),
    ("e2-3", include_str!("../fixtures/e2-3.json")),
    ("lr-2-2", include_str!("../fixtures/lr-2-2.json")),
    ("b-1", include_str!("../fixtures/b-1.json")),
    ("b-2", include_str!("../fixtures/b-2.json")),
    ("sing-p-1", include_str!("../fixtures/sing-p-1.json")),
    ("sing-p-2", include_str!("../fixtures/sing-p-2.json")),
    ("sing-3-3", include_str!("../fixtures/sing-3-3.json")),
];

#[derive(Debug, Clone, Deserialize)]
struct Entry {
    text: String,
    #[serde(default = "one")]
    orbit: usize,
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, Deserialize)]
struct Document {
    name: String,
    description: String,
    cone: String,
    params: serde_json::Value,
    #[serde(default)]
    count: Option<usize>,
    relations: Vec<Entry>,
}

#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: String,
    pub description: String,
    pub cone: ConeId,
    /// Stated number of inequalities, when the source gives one.
    pub count: Option<usize>,
    entries: Vec<Entry>,
}

pub fn names() -> impl Iterator<Item = &'static str> {
    SOURCES.iter().map(|(n, _)| *n)
}

pub fn all() -> Result<Vec<Fixture>> {
    names().map(load).collect()
}

pub fn load(name: &str) -> Result<Fixture> {
    let (_, text) = SOURCES
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::Parse(format!("no fixture named `{name}`")))?;
    let doc: Document = serde_json::from_str(text).map_err(|e| Error::Parse(format!("{name}: {e}")))?;
    let cone = ConeId::from_json(&doc.cone, &doc.params)?;
    Ok(Fixture {
        name: doc.name,
        description: doc.description,
        cone,
        count: doc.count,
        entries: doc.relations,
    })
}

/// Fixtures describing `cone`'s kind whose stored parameters match, or
/// which declare themselves valid for all `p` (sing with `q` fixed).
pub fn for_cone(cone: &ConeId) -> Result<Vec<Fixture>> {
    Ok(all()?
        .into_iter()
        .filter(|f| f.applies_to(cone))
        .collect())
}

impl Fixture {
    pub fn applies_to(&self, cone: &ConeId) -> bool {
        if self.cone.kind != cone.kind {
            return false;
        }
        match self.name.as_str() {
            "sing-p-1" | "sing-p-2" => cone.params[1] == self.cone.params[1],
            _ => self.cone.params == cone.params,
        }
    }

    fn provenance(&self) -> Provenance {
        Provenance::Fixture { name: self.name.clone() }
    }

    /// The stored relations, orbits expanded, over the blocks of `cone`.
    pub fn relations_for(&self, cone: &ConeId) -> Result<Vec<LinearRelation>> {
        if !self.applies_to(cone) {
            return Err(Error::UnsupportedCone(format!("fixture {} does not describe {cone}", self.name)));
        }
        let blocks = registry::cached(cone)?.blocks().to_vec();
        let mut out: Vec<LinearRelation> = Vec::new();
        for entry in &self.entries {
            let base = LinearRelation::parse(&entry.text, &blocks, self.provenance())?;
            let images = if entry.orbit == 1 { vec![base] } else { permuted(&base)? };
            if images.len() != entry.orbit {
                return Err(Error::Parse(format!(
                    "{}: `{}` has {} images, expected {}",
                    self.name,
                    entry.text,
                    images.len(),
                    entry.orbit
                )));
            }
            for r in images {
                if !out.iter().any(|o| o.same_form(&r)) {
                    out.push(r);
                }
            }
        }
        Ok(out)
    }

    pub fn relations(&self) -> Result<Vec<LinearRelation>> {
        self.relations_for(&self.cone)
    }

    /// Inequalities only, counted the way the source counts them.
    pub fn inequality_count(&self) -> Result<usize> {
        Ok(self
            .relations()?
            .iter()
            .filter(|r| r.rel() == crate::polyhedra::RelKind::Ge)
            .count())
    }

    pub fn to_system_for(&self, cone: &ConeId) -> Result<InequalitySystem> {
        let blocks = registry::cached(cone)?.blocks().to_vec();
        let mut sys = InequalitySystem::new(cone.clone(), blocks)?;
        for r in self.relations_for(cone)? {
            sys.insert(r)?;
        }
        Ok(sys)
    }

    pub fn to_system(&self) -> Result<InequalitySystem> {
        self.to_system_for(&self.cone)
    }
}

/// Distinct images of `rel` under permutations of the blocks `x`, `y`, `z`.
fn permuted(rel: &LinearRelation) -> Result<Vec<LinearRelation>> {
    const NAMES: [&str; 3] = ["x", "y", "z"];
    let mut out: Vec<LinearRelation> = Vec::new();
    for perm in NAMES.iter().permutations(3) {
        let coeffs = rel
            .coeffs()
            .iter()
            .map(|(k, v)| {
                let pos = NAMES.iter().position(|n| n == k).ok_or_else(|| Error::UnknownBlock(k.clone()))?;
                Ok((perm[pos].to_string(), v.clone()))
            })
            .collect::<Result<_>>()?;
        let image = LinearRelation::new(coeffs, rel.rel(), rel.provenance().clone())?;
        if !out.iter().any(|o| o.same_form(&image)) {
            out.push(image);
        }
    }
    Ok(out)
}

//! The JSON problem-file format, version 1.
//!
//! Parsing happens in two passes: the `version` field is read from an untyped
//! document first so that files written for another version are rejected
//! before their fields are interpreted, then the typed structure is read with
//! unknown fields denied.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Deserialize;

pub const SCHEMA_VERSION: u64 = 1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseError {
    /// Malformed JSON or a field that does not fit the schema.
    Schema {
        message: String,
        line: usize,
        column: usize,
    },
    UnsupportedVersion(String),
    /// An id that names no entity of the expected kind.
    DanglingRef {
        from: String,
        kind: &'static str,
        id: String,
    },
    DuplicateId {
        kind: &'static str,
        id: String,
    },
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::Schema { message, line, column } => write!(f, "SchemaError at {line}:{column}: {message}"),
            ParseError::UnsupportedVersion(v) => {
                write!(f, "SchemaError: unsupported version {v}, expected {SCHEMA_VERSION}")
            }
            ParseError::DanglingRef { from, kind, id } => {
                write!(f, "DanglingRef: {from} refers to unknown {kind} '{id}'")
            }
            ParseError::DuplicateId { kind, id } => write!(f, "SchemaError: duplicate {kind} id '{id}'"),
        }
    }
}

impl std::error::Error for ParseError {}

impl From<serde_json::Error> for ParseError {
    fn from(e: serde_json::Error) -> Self {
        let message = e.to_string();
        // serde_json appends " at line L column C"; the position is kept separately
        let message = match message.rfind(" at line ") {
            Some(i) => message[..i].to_string(),
            None => message,
        };
        ParseError::Schema { message, line: e.line(), column: e.column() }
    }
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub version: u64,
    #[serde(default)]
    pub budget: Option<BudgetSpec>,
    #[serde(default)]
    pub categories: Vec<CategorySpec>,
    #[serde(default)]
    pub functors: Vec<FunctorSpec>,
    #[serde(default)]
    pub monads: Vec<MonadSpec>,
    #[serde(default)]
    pub adjunctions: Vec<AdjunctionSpec>,
    #[serde(default)]
    pub classes: Vec<ClassSpec>,
    #[serde(default)]
    pub factorization_systems: Vec<FactorizationSystemSpec>,
    #[serde(default)]
    pub presheaves: Vec<PresheafSpec>,
    #[serde(default)]
    pub maps: Vec<MapSpec>,
    #[serde(default)]
    pub sites: Vec<SiteSpec>,
    #[serde(default)]
    pub bisites: Vec<BisiteSpec>,
    #[serde(default)]
    pub campaigns: Vec<CampaignSpec>,
}

/// Overrides for the default resource limits.
#[derive(Debug, Clone, Default, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct BudgetSpec {
    pub max_objects: Option<usize>,
    pub max_morphisms: Option<usize>,
    pub max_base_objects: Option<usize>,
    pub max_base_morphisms: Option<usize>,
    pub max_carrier: Option<usize>,
    pub max_exponential: Option<usize>,
    pub max_search_nodes: Option<u64>,
    pub max_results: Option<usize>,
}

/// Either a preset (`terminal`, `discrete`, `chain`, `poset2`,
/// `parallel_pair`, `diamond`, `grid_2x3`, `m3`, `n5`, `idempotent_monoid`,
/// `finset`) or explicit objects, morphisms and composites. Identities are
/// generated as `id_<object>`.
#[derive(Debug, Clone, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct CategorySpec {
    pub id: String,
    pub preset: Option<String>,
    pub size: Option<usize>,
    pub sizes: Option<Vec<usize>>,
    #[serde(default)]
    pub objects: Vec<String>,
    #[serde(default)]
    pub morphisms: Vec<MorphismSpec>,
    /// `[g, f, h]` declares `g ∘ f = h`.
    #[serde(default)]
    pub composites: Vec<[String; 3]>,
}

#[derive(Debug, Clone, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct MorphismSpec {
    pub name: String,
    pub src: String,
    pub dst: String,
}

/// Object and morphism images by name; unlisted identities map to
/// identities.
#[derive(Debug, Clone, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct FunctorSpec {
    pub id: String,
    pub source: String,
    pub target: String,
    pub objects: BTreeMap<String, String>,
    #[serde(default)]
    pub morphisms: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct MonadSpec {
    pub id: String,
    pub functor: String,
    pub unit: BTreeMap<String, String>,
    pub multiplication: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct AdjunctionSpec {
    pub id: String,
    pub left: String,
    pub right: String,
    pub unit: BTreeMap<String, String>,
    pub counit: BTreeMap<String, String>,
}

/// A morphism class: a keyword (`all`, `isos`, `monos`, `epis`,
/// `identities`, `none`) or a list of morphism names.
#[derive(Debug, Clone, Deserialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum ClassExpr {
    Keyword(String),
    Members(Vec<String>),
}

#[derive(Debug, Clone, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct ClassSpec {
    pub id: String,
    pub category: String,
    pub members: ClassExpr,
}

#[derive(Debug, Clone, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct FactorizationSystemSpec {
    pub id: String,
    pub category: String,
    pub left: ClassExpr,
    pub right: ClassExpr,
}

/// Carriers per object name and restriction tables per non-identity
/// morphism name.
#[derive(Debug, Clone, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct PresheafSpec {
    pub id: String,
    pub base: String,
    pub cards: BTreeMap<String, usize>,
    #[serde(default)]
    pub restrictions: BTreeMap<String, Vec<usize>>,
}

#[derive(Debug, Clone, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    pub id: String,
    pub source: String,
    pub target: String,
    pub components: BTreeMap<String, Vec<usize>>,
}

/// A topology: `identity`, `everything`, `dense`, the `n`-th enumerated
/// topology, or explicit covering sieves, each given by generating
/// morphisms. Maximal sieves always cover.
#[derive(Debug, Clone, Deserialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum TopologyExpr {
    Keyword(String),
    Enumerated { enumerated: usize },
    Covers { covers: BTreeMap<String, Vec<Vec<String>>> },
}

#[derive(Debug, Clone, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct SiteSpec {
    pub id: String,
    pub base: String,
    pub topology: TopologyExpr,
}

#[derive(Debug, Clone, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct BisiteSpec {
    pub id: String,
    pub cover: String,
    pub dual: String,
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq, PartialOrd, Ord)]
#[serde(rename_all = "kebab-case")]
pub enum CampaignKind {
    Validate,
    FactsysCheck,
    Core,
    LtEnum,
    Sheafify,
    VerifyLt,
    Quasitopos,
}

#[derive(Debug, Clone, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct CampaignSpec {
    pub id: String,
    pub kind: CampaignKind,
    pub category: Option<String>,
    pub monad: Option<String>,
    pub system: Option<String>,
    pub sigma: Option<String>,
    pub presheaf: Option<String>,
    pub site: Option<String>,
    pub bisite: Option<String>,
    pub bound: Option<usize>,
    pub method: Option<String>,
}

/// Parses and checks ids and references.
pub fn parse(text: &str) -> Result<ProblemFile, ParseError> {
    let raw: serde_json::Value = serde_json::from_str(text)?;
    match raw.get("version") {
        Some(v) if v.as_u64() == Some(SCHEMA_VERSION) => {}
        Some(v) => return Err(ParseError::UnsupportedVersion(v.to_string())),
        None => return Err(ParseError::UnsupportedVersion(String::from("(missing)"))),
    }
    let file: ProblemFile = serde_json::from_str(text)?;
    check_references(&file)?;
    Ok(file)
}

fn ids<'a>(kind: &'static str, it: impl Iterator<Item = &'a String>) -> Result<BTreeSet<&'a str>, ParseError> {
    let mut out = BTreeSet::new();
    for id in it {
        if !out.insert(id.as_str()) {
            return Err(ParseError::DuplicateId { kind, id: id.clone() });
        }
    }
    Ok(out)
}

fn need(set: &BTreeSet<&str>, from: impl Into<String>, kind: &'static str, id: &str) -> Result<(), ParseError> {
    if set.contains(id) {
        Ok(())
    } else {
        Err(ParseError::DanglingRef { from: from.into(), kind, id: id.to_string() })
    }
}

fn check_references(f: &ProblemFile) -> Result<(), ParseError> {
    let cats = ids("category", f.categories.iter().map(|c| &c.id))?;
    let functors = ids("functor", f.functors.iter().map(|c| &c.id))?;
    let monads = ids("monad", f.monads.iter().map(|c| &c.id))?;
    ids("adjunction", f.adjunctions.iter().map(|c| &c.id))?;
    let classes = ids("class", f.classes.iter().map(|c| &c.id))?;
    let systems = ids("factorization system", f.factorization_systems.iter().map(|c| &c.id))?;
    let presheaves = ids("presheaf", f.presheaves.iter().map(|c| &c.id))?;
    ids("map", f.maps.iter().map(|c| &c.id))?;
    let sites = ids("site", f.sites.iter().map(|c| &c.id))?;
    let bisites = ids("bisite", f.bisites.iter().map(|c| &c.id))?;
    ids("campaign", f.campaigns.iter().map(|c| &c.id))?;
    for x in &f.functors {
        need(&cats, format!("functor {}", x.id), "category", &x.source)?;
        need(&cats, format!("functor {}", x.id), "category", &x.target)?;
    }
    for x in &f.monads {
        need(&functors, format!("monad {}", x.id), "functor", &x.functor)?;
    }
    for x in &f.adjunctions {
        need(&functors, format!("adjunction {}", x.id), "functor", &x.left)?;
        need(&functors, format!("adjunction {}", x.id), "functor", &x.right)?;
    }
    for x in &f.classes {
        need(&cats, format!("class {}", x.id), "category", &x.category)?;
    }
    for x in &f.factorization_systems {
        need(&cats, format!("factorization system {}", x.id), "category", &x.category)?;
    }
    for x in &f.presheaves {
        need(&cats, format!("presheaf {}", x.id), "category", &x.base)?;
    }
    for x in &f.maps {
        need(&presheaves, format!("map {}", x.id), "presheaf", &x.source)?;
        need(&presheaves, format!("map {}", x.id), "presheaf", &x.target)?;
    }
    for x in &f.sites {
        need(&cats, format!("site {}", x.id), "category", &x.base)?;
    }
    for x in &f.bisites {
        need(&sites, format!("bisite {}", x.id), "site", &x.cover)?;
        need(&sites, format!("bisite {}", x.id), "site", &x.dual)?;
    }
    for x in &f.campaigns {
        let from = format!("campaign {}", x.id);
        let refs: [(&Option<String>, &BTreeSet<&str>, &'static str); 7] = [
            (&x.category, &cats, "category"),
            (&x.monad, &monads, "monad"),
            (&x.system, &systems, "factorization system"),
            (&x.sigma, &classes, "class"),
            (&x.presheaf, &presheaves, "presheaf"),
            (&x.site, &sites, "site"),
            (&x.bisite, &bisites, "bisite"),
        ];
        for (r, set, kind) in refs {
            if let Some(id) = r {
                need(set, from.clone(), kind, id)?;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_file_parses() {
        let f = parse(r#"{"version": 1, "categories": [{"id": "T", "preset": "terminal"}]}"#).unwrap();
        assert_eq!(f.categories.len(), 1);
    }

    #[test]
    fn unknown_field_is_named() {
        let err = parse("{\"version\": 1,\n \"categories\": [{\"id\": \"T\", \"colour\": 3}]}").unwrap_err();
        match err {
            ParseError::Schema { message, line, .. } => {
                assert!(message.contains("colour"), "{message}");
                assert_eq!(line, 2);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn undefined_monad_in_campaign() {
        let text = r#"{"version": 1, "campaigns": [{"id": "c", "kind": "core", "monad": "T"}]}"#;
        assert_eq!(
            parse(text).unwrap_err(),
            ParseError::DanglingRef { from: "campaign c".into(), kind: "monad", id: "T".into() }
        );
    }

    #[test]
    fn other_versions_rejected() {
        assert!(matches!(parse(r#"{"version": 2}"#), Err(ParseError::UnsupportedVersion(_))));
        assert!(matches!(parse(r#"{}"#), Err(ParseError::UnsupportedVersion(_))));
    }
}

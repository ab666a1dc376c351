//! Resolution of a parsed problem file into validated structures.
//!
//! Each entity is validated on its own. An entity whose dependency failed is
//! marked blocked instead of invalid, so a broken file reports exactly the
//! entity at fault.

use std::collections::BTreeMap;
use std::sync::Arc;

use idemcore::factsys::class::describe;
use idemcore::factsys::{check_prefactorization, MorphismClass, Violation};
use idemcore::fincat::{
    presets, AdjunctionData, AdjunctionError, CategoryError, FinCategory, FinFunctor, FinNatTrans, FunctorError,
    MonadData, MonadError, MorId, NatTransError, ObjId, RawCategory, Side,
};
use idemcore::lttop::{
    check_grothendieck, covering_sieves, dense_topology, enumerate_lt_topologies, topology_of, GrothendieckTopology,
    LtTopology,
};
use idemcore::presheaf::core::{MapError, PresheafError};
use idemcore::presheaf::{describe_sieve, Omega, Presheaf, PresheafMap, Sieve};
use idemcore::{Budget, BudgetExceeded};

use crate::schema::{
    AdjunctionSpec, BudgetSpec, CampaignSpec, CategorySpec, ClassExpr, FactorizationSystemSpec, FunctorSpec, MapSpec,
    MonadSpec, PresheafSpec, ProblemFile, SiteSpec, TopologyExpr,
};

/// Validation status of one entity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Valid,
    /// The entity itself is at fault; the witness names the violation.
    Invalid(String),
    /// A referenced entity is invalid.
    Blocked(String),
    Budget(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntityOutcome {
    pub kind: &'static str,
    pub id: String,
    pub outcome: Outcome,
}

#[derive(Debug, Clone)]
pub struct FunctorEntry {
    pub source: String,
    pub target: String,
    pub functor: FinFunctor,
}

#[derive(Debug, Clone)]
pub struct MonadEntry {
    pub category: String,
    pub monad: MonadData,
}

#[derive(Debug, Clone)]
pub struct ClassEntry {
    pub category: String,
    pub class: MorphismClass,
}

#[derive(Debug, Clone)]
pub struct SystemEntry {
    pub category: String,
    pub left: MorphismClass,
    pub right: MorphismClass,
}

#[derive(Debug, Clone)]
pub struct PresheafEntry {
    pub base: String,
    pub presheaf: Presheaf,
}

#[derive(Debug, Clone)]
pub struct MapEntry {
    pub source: String,
    pub target: String,
    pub map: PresheafMap,
}

#[derive(Debug, Clone)]
pub struct SiteEntry {
    pub base: String,
    pub topology: LtTopology,
}

#[derive(Debug, Clone)]
pub struct BisiteEntry {
    pub cover: String,
    pub dual: String,
}

/// Everything that resolved, plus one outcome per declared entity.
#[derive(Debug, Clone, Default)]
pub struct Model {
    pub budget: Budget,
    pub categories: BTreeMap<String, Arc<FinCategory>>,
    pub functors: BTreeMap<String, FunctorEntry>,
    pub monads: BTreeMap<String, MonadEntry>,
    pub adjunctions: BTreeMap<String, AdjunctionData>,
    pub classes: BTreeMap<String, ClassEntry>,
    pub systems: BTreeMap<String, SystemEntry>,
    pub presheaves: BTreeMap<String, PresheafEntry>,
    pub maps: BTreeMap<String, MapEntry>,
    pub sites: BTreeMap<String, SiteEntry>,
    pub bisites: BTreeMap<String, BisiteEntry>,
    pub campaigns: Vec<CampaignSpec>,
    pub outcomes: Vec<EntityOutcome>,
    omegas: BTreeMap<String, Arc<Omega>>,
}

enum Failure {
    Invalid(String),
    Blocked(String),
    Budget(String),
}

impl From<BudgetExceeded> for Failure {
    fn from(b: BudgetExceeded) -> Self {
        Failure::Budget(b.to_string())
    }
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure::Invalid(msg.into()))
}

pub fn apply_budget(spec: Option<&BudgetSpec>) -> Budget {
    let mut b = Budget::default();
    if let Some(s) = spec {
        let fields: [(&mut usize, Option<usize>); 7] = [
            (&mut b.max_objects, s.max_objects),
            (&mut b.max_morphisms, s.max_morphisms),
            (&mut b.max_base_objects, s.max_base_objects),
            (&mut b.max_base_morphisms, s.max_base_morphisms),
            (&mut b.max_carrier, s.max_carrier),
            (&mut b.max_exponential, s.max_exponential),
            (&mut b.max_results, s.max_results),
        ];
        for (slot, v) in fields {
            if let Some(v) = v {
                *slot = v;
            }
        }
        if let Some(n) = s.max_search_nodes {
            b.max_search_nodes = n;
        }
    }
    b
}

impl Model {
    pub fn build(file: &ProblemFile) -> Model {
        let mut m = Model { budget: apply_budget(file.budget.as_ref()), ..Model::default() };
        for spec in &file.categories {
            let r = build_category(spec, &m.budget);
            m.settle("category", &spec.id, r, |m, c| {
                m.categories.insert(spec.id.clone(), Arc::new(c));
            });
        }
        for spec in &file.functors {
            let r = m.build_functor(spec);
            m.settle("functor", &spec.id, r, |m, functor| {
                let entry = FunctorEntry { source: spec.source.clone(), target: spec.target.clone(), functor };
                m.functors.insert(spec.id.clone(), entry);
            });
        }
        for spec in &file.monads {
            let r = m.build_monad(spec);
            m.settle("monad", &spec.id, r, |m, e| {
                m.monads.insert(spec.id.clone(), e);
            });
        }
        for spec in &file.adjunctions {
            let r = m.build_adjunction(spec);
            m.settle("adjunction", &spec.id, r, |m, a| {
                m.adjunctions.insert(spec.id.clone(), a);
            });
        }
        for spec in &file.classes {
            let r = m.category(&spec.category).and_then(|c| class_of(&c, &spec.members));
            m.settle("class", &spec.id, r, |m, class| {
                m.classes.insert(spec.id.clone(), ClassEntry { category: spec.category.clone(), class });
            });
        }
        for spec in &file.factorization_systems {
            let r = m.build_system(spec);
            m.settle("factorization system", &spec.id, r, |m, e| {
                m.systems.insert(spec.id.clone(), e);
            });
        }
        for spec in &file.presheaves {
            let r = m.build_presheaf(spec);
            m.settle("presheaf", &spec.id, r, |m, p| {
                m.presheaves.insert(spec.id.clone(), PresheafEntry { base: spec.base.clone(), presheaf: p });
            });
        }
        for spec in &file.maps {
            let r = m.build_map(spec);
            m.settle("map", &spec.id, r, |m, map| {
                m.maps.insert(
                    spec.id.clone(),
                    MapEntry { source: spec.source.clone(), target: spec.target.clone(), map },
                );
            });
        }
        for spec in &file.sites {
            let r = m.build_site(spec);
            m.settle("site", &spec.id, r, |m, t| {
                m.sites.insert(spec.id.clone(), SiteEntry { base: spec.base.clone(), topology: t });
            });
        }
        for spec in &file.bisites {
            let r = match (m.sites.get(&spec.cover), m.sites.get(&spec.dual)) {
                (Some(a), Some(b)) if a.base != b.base => {
                    invalid(format!("sites {} and {} have different bases", spec.cover, spec.dual))
                }
                (Some(_), Some(_)) => Ok(BisiteEntry { cover: spec.cover.clone(), dual: spec.dual.clone() }),
                (None, _) => Err(Failure::Blocked(format!("site {}", spec.cover))),
                (_, None) => Err(Failure::Blocked(format!("site {}", spec.dual))),
            };
            m.settle("bisite", &spec.id, r, |m, b| {
                m.bisites.insert(spec.id.clone(), b);
            });
        }
        m.campaigns = file.campaigns.clone();
        m
    }

    fn settle<T>(&mut self, kind: &'static str, id: &str, r: Result<T, Failure>, keep: impl FnOnce(&mut Model, T)) {
        let outcome = match r {
            Ok(v) => {
                keep(self, v);
                Outcome::Valid
            }
            Err(Failure::Invalid(w)) => Outcome::Invalid(w),
            Err(Failure::Blocked(w)) => Outcome::Blocked(w),
            Err(Failure::Budget(w)) => Outcome::Budget(w),
        };
        self.outcomes.push(EntityOutcome { kind, id: id.to_string(), outcome });
    }

    fn category(&self, id: &str) -> Result<Arc<FinCategory>, Failure> {
        self.categories.get(id).cloned().ok_or_else(|| Failure::Blocked(format!("category {id}")))
    }

    /// The subobject classifier over a category, built once per category.
    pub fn omega(&mut self, id: &str) -> Result<Arc<Omega>, BudgetExceeded> {
        if let Some(o) = self.omegas.get(id) {
            return Ok(o.clone());
        }
        let c = self.categories[id].clone();
        check_base(&c, &self.budget)?;
        let o = Arc::new(Omega::new(c)?);
        self.omegas.insert(id.to_string(), o.clone());
        Ok(o)
    }

    fn build_functor(&self, spec: &FunctorSpec) -> Result<FinFunctor, Failure> {
        let src = self.category(&spec.source)?;
        let dst = self.category(&spec.target)?;
        let mut obj = Vec::with_capacity(src.n_objects());
        for o in src.objects() {
            let name = src.obj_name(o);
            match spec.objects.get(name) {
                Some(t) => obj.push(find_object(&dst, t)?),
                None => return invalid(format!("object {name} has no image")),
            }
        }
        for k in spec.objects.keys() {
            find_object(&src, k)?;
        }
        for k in spec.morphisms.keys() {
            find_morphism(&src, k)?;
        }
        let mut mor = Vec::with_capacity(src.n_morphisms());
        for f in src.morphisms() {
            let name = src.mor_name(f);
            match spec.morphisms.get(name) {
                Some(t) => mor.push(find_morphism(&dst, t)?),
                None if src.is_identity(f) => mor.push(dst.id(obj[src.src(f)])),
                None => return invalid(format!("morphism {name} has no image")),
            }
        }
        FinFunctor::new(src.clone(), dst.clone(), obj, mor).map_err(|e| Failure::Invalid(functor_error(&src, &e)))
    }

    fn functor(&self, id: &str) -> Result<&FunctorEntry, Failure> {
        self.functors.get(id).ok_or_else(|| Failure::Blocked(format!("functor {id}")))
    }

    fn build_monad(&self, spec: &MonadSpec) -> Result<MonadEntry, Failure> {
        let entry = self.functor(&spec.functor)?;
        let t = entry.functor.clone();
        if entry.source != entry.target {
            return invalid(format!("functor {} is not an endofunctor", spec.functor));
        }
        let c = t.source().clone();
        let id = FinFunctor::identity(c.clone());
        let tt = t.then(&t).map_err(|e| Failure::Invalid(functor_error(&c, &e)))?;
        let eta = nat_trans(&c, &c, &id, &t, &spec.unit, "unit")?;
        let mu = nat_trans(&c, &c, &tt, &t, &spec.multiplication, "multiplication")?;
        let monad = MonadData::new(t, eta, mu).map_err(|e| Failure::Invalid(monad_error(&c, &e)))?;
        Ok(MonadEntry { category: entry.source.clone(), monad })
    }

    fn build_adjunction(&self, spec: &AdjunctionSpec) -> Result<AdjunctionData, Failure> {
        let (l, r) = (self.functor(&spec.left)?, self.functor(&spec.right)?);
        if r.source != l.target || r.target != l.source {
            return invalid(format!("functor {} does not run opposite to {}", spec.right, spec.left));
        }
        let (left, right) = (l.functor.clone(), r.functor.clone());
        let c = left.source().clone();
        let d = left.target().clone();
        let gf = left.then(&right).map_err(|e| Failure::Invalid(functor_error(&c, &e)))?;
        let fg = right.then(&left).map_err(|e| Failure::Invalid(functor_error(&d, &e)))?;
        let eta = nat_trans(&c, &c, &FinFunctor::identity(c.clone()), &gf, &spec.unit, "unit")?;
        let eps = nat_trans(&d, &d, &fg, &FinFunctor::identity(d.clone()), &spec.counit, "counit")?;
        AdjunctionData::new(left, right, eta, eps).map_err(|e| {
            Failure::Invalid(match e {
                AdjunctionError::TriangleFail { side: Side::Left, obj } => {
                    format!("triangle identity εF ∘ Fη = id fails at object {}", c.obj_name(obj))
                }
                AdjunctionError::TriangleFail { side: Side::Right, obj } => {
                    format!("triangle identity Gε ∘ ηG = id fails at object {}", d.obj_name(obj))
                }
                other => other.to_string(),
            })
        })
    }

    fn build_system(&self, spec: &FactorizationSystemSpec) -> Result<SystemEntry, Failure> {
        let c = self.category(&spec.category)?;
        let left = class_of(&c, &spec.left)?;
        let right = class_of(&c, &spec.right)?;
        check_prefactorization(&c, &left, &right).map_err(|v| Failure::Invalid(violation(&c, &v)))?;
        Ok(SystemEntry { category: spec.category.clone(), left, right })
    }

    fn build_presheaf(&self, spec: &PresheafSpec) -> Result<Presheaf, Failure> {
        let c = self.category(&spec.base)?;
        check_base(&c, &self.budget)?;
        for k in spec.cards.keys() {
            find_object(&c, k)?;
        }
        for k in spec.restrictions.keys() {
            find_morphism(&c, k)?;
        }
        let mut cards = Vec::with_capacity(c.n_objects());
        for o in c.objects() {
            match spec.cards.get(c.obj_name(o)) {
                Some(&n) if n > self.budget.max_carrier => {
                    return Err(Failure::Budget(
                        BudgetExceeded::new("presheaf carrier", self.budget.max_carrier, n).to_string(),
                    ))
                }
                Some(&n) => cards.push(n),
                None => return invalid(format!("object {} has no carrier", c.obj_name(o))),
            }
        }
        let mut tables = Vec::with_capacity(c.n_morphisms());
        for f in c.morphisms() {
            let name = c.mor_name(f);
            match spec.restrictions.get(name) {
                Some(t) => tables.push(t.clone()),
                None if c.is_identity(f) => tables.push((0..cards[c.src(f)]).collect()),
                None => return invalid(format!("morphism {name} has no restriction table")),
            }
        }
        Presheaf::new(c.clone(), cards, tables).map_err(|e| Failure::Invalid(presheaf_error(&c, &e)))
    }

    fn presheaf(&self, id: &str) -> Result<&PresheafEntry, Failure> {
        self.presheaves.get(id).ok_or_else(|| Failure::Blocked(format!("presheaf {id}")))
    }

    fn build_map(&self, spec: &MapSpec) -> Result<PresheafMap, Failure> {
        let x = self.presheaf(&spec.source)?;
        let y = self.presheaf(&spec.target)?;
        if x.base != y.base {
            return invalid(format!("presheaves {} and {} have different bases", spec.source, spec.target));
        }
        let c = x.presheaf.base().clone();
        for k in spec.components.keys() {
            find_object(&c, k)?;
        }
        let mut comp = Vec::with_capacity(c.n_objects());
        for o in c.objects() {
            match spec.components.get(c.obj_name(o)) {
                Some(v) => comp.push(v.clone()),
                None => return invalid(format!("object {} has no component", c.obj_name(o))),
            }
        }
        let map = PresheafMap { comp };
        map.check(&x.presheaf, &y.presheaf).map_err(|e| {
            Failure::Invalid(match e {
                MapError::BadLength => String::from("component lengths do not match the source carriers"),
                MapError::BadValue { obj, elem } => {
                    format!("component at {} sends element {elem} outside the target", c.obj_name(obj))
                }
                MapError::NotNatural { mor, elem } => {
                    format!("naturality fails along {} at element {elem}", c.mor_name(mor))
                }
            })
        })?;
        Ok(map)
    }

    fn build_site(&mut self, spec: &SiteSpec) -> Result<LtTopology, Failure> {
        let c = self.category(&spec.base)?;
        let omega = self.omega(&spec.base)?;
        match &spec.topology {
            TopologyExpr::Keyword(k) => match k.as_str() {
                "identity" => Ok(LtTopology::identity(omega)),
                "everything" => Ok(LtTopology::everything(omega)),
                "dense" => topology_of(&omega, &dense_topology(&omega)).map_err(Failure::Invalid),
                other => invalid(format!("unknown topology keyword '{other}'")),
            },
            TopologyExpr::Enumerated { enumerated } => {
                let all = enumerate_lt_topologies(&omega, &self.budget)?;
                all.get(*enumerated).cloned().ok_or_else(|| {
                    Failure::Invalid(format!("topology index {enumerated} out of range ({} topologies)", all.len()))
                })
            }
            TopologyExpr::Covers { covers } => {
                let mut lists: Vec<Vec<Sieve>> = c.objects().map(|o| vec![omega.sieves[o][omega.top(o)]]).collect();
                for (obj, sieves) in covers {
                    let o = find_object(&c, obj)?;
                    for gens in sieves {
                        let s = generated_sieve(&c, o, gens)?;
                        lists[o].push(s);
                    }
                }
                for l in &mut lists {
                    l.sort_unstable();
                    l.dedup();
                }
                let g = GrothendieckTopology { covers: lists };
                check_grothendieck(&omega, &g)
                    .map_err(|w| Failure::Invalid(format!("not a Grothendieck topology: {w}")))?;
                let t = topology_of(&omega, &g).map_err(Failure::Invalid)?;
                debug_assert_eq!(covering_sieves(&t), g);
                Ok(t)
            }
        }
    }

    /// Outcomes that are not valid.
    pub fn problems(&self) -> impl Iterator<Item = &EntityOutcome> {
        self.outcomes.iter().filter(|o| o.outcome != Outcome::Valid)
    }

    /// Name of the category an entity lives on, for site data.
    pub fn site_base(&self, site: &str) -> Option<&Arc<FinCategory>> {
        self.sites.get(site).and_then(|s| self.categories.get(&s.base))
    }
}

/// Presheaf computations need a small base.
fn check_base(c: &FinCategory, budget: &Budget) -> Result<(), BudgetExceeded> {
    if c.n_objects() > budget.max_base_objects {
        return Err(BudgetExceeded::new("base objects", budget.max_base_objects, c.n_objects()));
    }
    if c.n_morphisms() > budget.max_base_morphisms {
        return Err(BudgetExceeded::new("base morphisms", budget.max_base_morphisms, c.n_morphisms()));
    }
    Ok(())
}

fn find_object(c: &FinCategory, name: &str) -> Result<ObjId, Failure> {
    c.find_object(name).ok_or_else(|| Failure::Invalid(format!("unknown object '{name}'")))
}

fn find_morphism(c: &FinCategory, name: &str) -> Result<MorId, Failure> {
    c.find_morphism(name).ok_or_else(|| Failure::Invalid(format!("unknown morphism '{name}'")))
}

/// The sieve on `o` generated by the named arrows into `o`.
fn generated_sieve(c: &FinCategory, o: ObjId, gens: &[String]) -> Result<Sieve, Failure> {
    let mut s: Sieve = 0;
    for g in gens {
        let f = find_morphism(c, g)?;
        if c.dst(f) != o {
            return invalid(format!("morphism {g} does not end at {}", c.obj_name(o)));
        }
        for h in c.arrows_into(c.src(f)) {
            s |= 1 << c.comp(f, h);
        }
    }
    Ok(s)
}

/// Largest finite-set category accepted as a preset.
const MAX_FINSET_MORPHISMS: usize = 64;

fn build_category(spec: &CategorySpec, budget: &Budget) -> Result<FinCategory, Failure> {
    let explicit = !spec.objects.is_empty() || !spec.morphisms.is_empty() || !spec.composites.is_empty();
    match &spec.preset {
        Some(_) if explicit => invalid("a category is either a preset or explicit, not both"),
        Some(p) => preset(p, spec.size, spec.sizes.as_deref(), budget),
        None => explicit_category(spec),
    }
}

fn preset(name: &str, size: Option<usize>, sizes: Option<&[usize]>, budget: &Budget) -> Result<FinCategory, Failure> {
    let need_size = || size.ok_or_else(|| Failure::Invalid(format!("preset {name} needs a size")));
    let small = |n: usize| {
        if n > budget.max_objects {
            Err(Failure::Budget(BudgetExceeded::new("category objects", budget.max_objects, n).to_string()))
        } else {
            Ok(n)
        }
    };
    Ok(match name {
        "terminal" => presets::terminal(),
        "discrete" => presets::discrete(small(need_size()?)?),
        "chain" => presets::chain(small(need_size()?)?),
        "poset2" => presets::poset2(),
        "parallel_pair" => presets::parallel_pair(),
        "diamond" => presets::diamond(),
        "grid_2x3" => presets::grid_2x3(),
        "m3" => presets::m3(),
        "n5" => presets::n5(),
        "idempotent_monoid" => presets::idempotent_monoid(),
        "finset" => {
            let sizes = sizes.ok_or_else(|| Failure::Invalid(String::from("preset finset needs sizes")))?;
            small(sizes.len())?;
            let count: usize = sizes
                .iter()
                .flat_map(|&a| sizes.iter().map(move |&b| b.checked_pow(a as u32).unwrap_or(usize::MAX)))
                .fold(0usize, |acc, n| acc.saturating_add(n));
            if count > MAX_FINSET_MORPHISMS {
                return Err(Failure::Budget(
                    BudgetExceeded::new("finite-set morphisms", MAX_FINSET_MORPHISMS, count).to_string(),
                ));
            }
            presets::finset(sizes)
        }
        other => return invalid(format!("unknown preset '{other}'")),
    })
}

fn explicit_category(spec: &CategorySpec) -> Result<FinCategory, Failure> {
    let mut seen = std::collections::BTreeSet::new();
    for o in &spec.objects {
        if !seen.insert(o.as_str()) {
            return invalid(format!("duplicate object '{o}'"));
        }
    }
    let mut raw = RawCategory::with_objects(spec.objects.iter().cloned());
    let mut names: BTreeMap<String, MorId> = raw.morphisms.iter().enumerate().map(|(i, m)| (m.0.clone(), i)).collect();
    let obj = |n: &str| {
        spec.objects.iter().position(|o| o == n).ok_or_else(|| Failure::Invalid(format!("unknown object '{n}'")))
    };
    for m in &spec.morphisms {
        let (s, d) = (obj(&m.src)?, obj(&m.dst)?);
        if names.contains_key(&m.name) {
            return invalid(format!("duplicate morphism '{}'", m.name));
        }
        let id = raw.arrow(m.name.clone(), s, d);
        names.insert(m.name.clone(), id);
    }
    let mor = |n: &str| names.get(n).copied().ok_or_else(|| Failure::Invalid(format!("unknown morphism '{n}'")));
    for [g, f, h] in &spec.composites {
        let (g, f, h) = (mor(g)?, mor(f)?, mor(h)?);
        raw.compose(g, f, h);
    }
    FinCategory::from_raw(&raw).map_err(|e| Failure::Invalid(category_error(&raw, &e)))
}

fn category_error(raw: &RawCategory, e: &CategoryError) -> String {
    let m = |i: MorId| raw.morphisms.get(i).map_or("?", |x| x.0.as_str()).to_string();
    let o = |i: ObjId| raw.objects.get(i).map_or("?", String::as_str).to_string();
    match *e {
        CategoryError::BadIndex { what, index } => format!("{what} index {index} out of range"),
        CategoryError::BadIdentity(x) => format!("identity law fails at object {}", o(x)),
        CategoryError::NotComposable { g, f } => {
            format!("composite {} ∘ {} declared for a non-composable pair", m(g), m(f))
        }
        CategoryError::EndpointMismatch { g, f, h } => {
            format!("composite {} ∘ {} declared as {} with wrong endpoints", m(g), m(f), m(h))
        }
        CategoryError::ConflictingComposite { g, f } => format!("composite {} ∘ {} declared twice", m(g), m(f)),
        CategoryError::MissingComposite { f, g } => format!("composite {} ∘ {} missing", m(g), m(f)),
        CategoryError::NonAssociative { f, g, h } => {
            format!("associativity fails: ({} ∘ {}) ∘ {} ≠ {} ∘ ({} ∘ {})", m(h), m(g), m(f), m(h), m(g), m(f))
        }
    }
}

fn functor_error(c: &FinCategory, e: &FunctorError) -> String {
    match *e {
        FunctorError::Endpoints(f) => format!("image of {} has the wrong endpoints", c.mor_name(f)),
        FunctorError::Identity(o) => format!("identity of {} is not sent to an identity", c.obj_name(o)),
        FunctorError::Composition { g, f } => {
            format!("composite {} ∘ {} is not preserved", c.mor_name(g), c.mor_name(f))
        }
        ref other => other.to_string(),
    }
}

fn nat_trans(
    c: &FinCategory,
    d: &Arc<FinCategory>,
    src: &FinFunctor,
    dst: &FinFunctor,
    table: &BTreeMap<String, String>,
    what: &str,
) -> Result<FinNatTrans, Failure> {
    for k in table.keys() {
        find_object(c, k)?;
    }
    let mut comp = Vec::with_capacity(c.n_objects());
    for o in c.objects() {
        match table.get(c.obj_name(o)) {
            Some(name) => comp.push(find_morphism(d, name)?),
            None => return invalid(format!("{what} has no component at {}", c.obj_name(o))),
        }
    }
    FinNatTrans::new(src.clone(), dst.clone(), comp).map_err(|e| {
        Failure::Invalid(match e {
            NatTransError::BadComponent(o) => format!("{what} component at {} has the wrong endpoints", c.obj_name(o)),
            NatTransError::NotNatural(f) => format!("{what} is not natural at {}", c.mor_name(f)),
            other => format!("{what}: {other}"),
        })
    })
}

fn monad_error(c: &FinCategory, e: &MonadError) -> String {
    match *e {
        MonadError::UnitLawFail { obj, side: Side::Left } => {
            format!("unit law μ ∘ ηT = id fails at object {}", c.obj_name(obj))
        }
        MonadError::UnitLawFail { obj, side: Side::Right } => {
            format!("unit law μ ∘ Tη = id fails at object {}", c.obj_name(obj))
        }
        MonadError::AssocFail(o) => format!("associativity μ ∘ Tμ = μ ∘ μT fails at object {}", c.obj_name(o)),
        ref other => other.to_string(),
    }
}

fn presheaf_error(c: &FinCategory, e: &PresheafError) -> String {
    match *e {
        PresheafError::BadLength => String::from("restriction table lengths do not match the carriers"),
        PresheafError::BadValue { mor, elem } => {
            format!("restriction along {} sends element {elem} outside the carrier", c.mor_name(mor))
        }
        PresheafError::Identity(o) => {
            format!("restriction along the identity of {} is not the identity", c.obj_name(o))
        }
        PresheafError::Functoriality { g, f } => format!(
            "restriction is not functorial: X({} ∘ {}) ≠ X({}) then X({})",
            c.mor_name(g),
            c.mor_name(f),
            c.mor_name(g),
            c.mor_name(f)
        ),
    }
}

/// A factorization-system violation with morphisms named.
pub fn violation(c: &FinCategory, v: &Violation) -> String {
    match *v {
        Violation::NotOrthogonal { e, m, u, v, diagonals } => format!(
            "{} is not orthogonal to {}: square u = {}, v = {} has {diagonals} diagonals",
            describe(c, e),
            describe(c, m),
            describe(c, u),
            describe(c, v)
        ),
        Violation::RightClassTooSmall(f) => format!("{} is orthogonal to the left class but not in it", describe(c, f)),
        Violation::LeftClassTooSmall(f) => format!("{} is orthogonal to the right class but not in it", describe(c, f)),
        Violation::NoFactorization(f) => format!("{} has no factorization", describe(c, f)),
        Violation::LeftNotEpi(f) => format!("{} is in the left class but not epi", describe(c, f)),
        Violation::RightNotMono(f) => format!("{} is in the right class but not mono", describe(c, f)),
    }
}

/// The class named by a keyword such as `monos`.
pub fn class_keyword(c: &FinCategory, name: &str) -> Option<MorphismClass> {
    class_of(c, &ClassExpr::Keyword(name.to_string())).ok()
}

/// Resolves a class expression on a category.
fn class_of(c: &FinCategory, expr: &ClassExpr) -> Result<MorphismClass, Failure> {
    match expr {
        ClassExpr::Keyword(k) => Ok(match k.as_str() {
            "all" => MorphismClass::all(c),
            "isos" => MorphismClass::isos(c),
            "monos" => MorphismClass::monos(c),
            "epis" => MorphismClass::epis(c),
            "identities" => MorphismClass::identities(c),
            "none" => MorphismClass::empty(c),
            other => return invalid(format!("unknown class keyword '{other}'")),
        }),
        ClassExpr::Members(names) => {
            let ids = names.iter().map(|n| find_morphism(c, n)).collect::<Result<Vec<_>, _>>()?;
            Ok(MorphismClass::from_ids(c, &ids))
        }
    }
}

/// Covering sieves of a topology, by object and arrow names.
pub fn named_covers(j: &LtTopology) -> BTreeMap<String, Vec<String>> {
    let base = j.base();
    base.objects()
        .map(|c| {
            (base.obj_name(c).to_string(), j.covering_sieves(c).iter().map(|&s| describe_sieve(base, s)).collect())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schema::parse;

    fn build(text: &str) -> Model {
        Model::build(&parse(text).unwrap())
    }

    #[test]
    fn explicit_category_with_identities_generated() {
        let m = build(
            r#"{"version": 1, "categories": [{"id": "C", "objects": ["x", "y"],
                "morphisms": [{"name": "f", "src": "x", "dst": "y"}]}]}"#,
        );
        let c = &m.categories["C"];
        assert_eq!(c.n_morphisms(), 3);
        assert_eq!(c.mor_name(c.id(0)), "id_x");
    }

    #[test]
    fn missing_composite_is_named() {
        let m = build(
            r#"{"version": 1, "categories": [{"id": "C", "objects": ["x"],
                "morphisms": [{"name": "e", "src": "x", "dst": "x"}]}]}"#,
        );
        assert_eq!(m.outcomes[0].outcome, Outcome::Invalid(String::from("composite e ∘ e missing")));
    }

    #[test]
    fn dependents_of_invalid_entities_are_blocked() {
        let m = build(
            r#"{"version": 1, "categories": [{"id": "C", "preset": "chain"}],
                "sites": [{"id": "S", "base": "C", "topology": "identity"}]}"#,
        );
        assert!(matches!(m.outcomes[0].outcome, Outcome::Invalid(_)));
        assert_eq!(m.outcomes[1].outcome, Outcome::Blocked(String::from("category C")));
    }

    #[test]
    fn covers_generate_a_topology() {
        let m = build(
            r#"{"version": 1, "categories": [{"id": "P", "preset": "poset2"}],
                "sites": [{"id": "S", "base": "P", "topology": {"covers": {"1": [["0<1"]]}}},
                          {"id": "D", "base": "P", "topology": "dense"}]}"#,
        );
        assert!(m.problems().next().is_none(), "{:?}", m.outcomes);
        assert_eq!(m.sites["S"].topology, m.sites["D"].topology);
    }

    #[test]
    fn budget_override_applies() {
        let m = build(r#"{"version": 1, "budget": {"max_carrier": 2}}"#);
        assert_eq!(m.budget.max_carrier, 2);
        assert_eq!(m.budget.max_objects, Budget::default().max_objects);
    }
}

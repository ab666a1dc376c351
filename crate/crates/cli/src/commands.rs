//! One function per subcommand. Each returns a [`CommandReport`]; nothing
//! here prints.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use idemcore::factsys::class::describe;
use idemcore::factsys::enriched::tensored_orthogonal;
use idemcore::factsys::{
    check_factorization_system, check_proper, enriched_orthogonal, finite_closure_suite, orthogonality_witness,
    presheaf_orthogonal, stability_report, Arrow, FiniteClosure, MorphismClass,
};
use idemcore::fincat::FinCategory;
use idemcore::lttop::{
    covering_sieves, dense_composition_report, describe_mismatch, enumerate_grothendieck_topologies,
    enumerate_lt_topologies, is_separated, is_sheaf, iso_under, lt_closure_suite, quasitopos_check, sheafify_oracle,
    sheafify_via_core, sweep_counts, topology_of, verify_with, LtTopology, SheafifyError, SweepData,
};
use idemcore::monadcore::{
    build_reflection, closure_suite, core_propositions, full_report, idempotent_core, sigma_t, stability_suite,
    CoreError, CoreInput, CoreResult,
};
use idemcore::presheaf::{Omega, Presheaf, PresheafMap, Universe};
use idemcore::report::{Report, Scope};
use idemcore::{Budget, BudgetExceeded};
use serde_json::{json, Value};

use crate::model::{class_keyword, named_covers, violation, Model, Outcome};
use crate::report::CommandReport;
use crate::schema::{parse, CampaignKind, CampaignSpec, ParseError};

/// Universes with more maps than this skip the dense-composition checks,
/// which are quadratic in the number of maps.
pub const DENSE_COMPOSITION_LIMIT: usize = 50_000;

/// Reads and parses a problem file.
pub fn load(path: &Path) -> Result<Model, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let file = parse(&text).map_err(|e| e.to_string())?;
    Ok(Model::build(&file))
}

fn file_name(path: &Path) -> String {
    path.file_name().map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into_owned())
}

/// `validate`: one check per entity.
pub fn validate(path: &Path) -> CommandReport {
    let mut rep = CommandReport::new("validate");
    rep.config("file", file_name(path));
    let parsed = fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))
        .and_then(|t| parse(&t).map_err(|e: ParseError| e.to_string()));
    let file = match parsed {
        Ok(f) => f,
        Err(e) => {
            let mut r = Report::new();
            r.record_witness("parse", Scope::Exact, Some(e));
            rep.absorb("", r);
            return rep;
        }
    };
    let model = Model::build(&file);
    validate_model(&model, &mut rep);
    rep
}

pub fn validate_model(model: &Model, rep: &mut CommandReport) {
    let mut r = Report::new();
    r.record_witness("parse", Scope::Exact, None);
    for o in &model.outcomes {
        let name = format!("{} {}", o.kind, o.id);
        match &o.outcome {
            Outcome::Valid => {
                r.record_witness(name, Scope::Exact, None);
            }
            Outcome::Invalid(w) => {
                r.record_witness(name, Scope::Exact, Some(w.clone()));
            }
            Outcome::Blocked(dep) => r.skip(name, Scope::Exact, format!("depends on invalid {dep}")),
            Outcome::Budget(w) => {
                r.skip(name, Scope::Exact, w.clone());
                rep.budget_exceeded.get_or_insert_with(|| w.clone());
            }
        }
    }
    rep.absorb("", r);
    let cats: serde_json::Map<String, Value> = model
        .categories
        .iter()
        .map(|(k, c)| (k.clone(), json!({"objects": c.n_objects(), "morphisms": c.n_morphisms()})))
        .collect();
    let monads: serde_json::Map<String, Value> = model
        .monads
        .iter()
        .map(|(k, m)| (k.clone(), json!({"category": m.category, "idempotent": m.monad.is_idempotent()})))
        .collect();
    let sites: serde_json::Map<String, Value> = model
        .sites
        .iter()
        .map(|(k, s)| (k.clone(), json!({"base": s.base, "covers": named_covers(&s.topology)})))
        .collect();
    let presheaves: serde_json::Map<String, Value> = model
        .presheaves
        .iter()
        .map(|(k, p)| (k.clone(), json!({"base": p.base, "cards": p.presheaf.cards()})))
        .collect();
    rep.data("categories", cats).data("monads", monads).data("sites", sites).data("presheaves", presheaves);
}

/// A morphism name, a declared class on `cid`, or a class keyword.
fn resolve_class(model: &Model, c: &FinCategory, cid: &str, name: &str) -> Option<MorphismClass> {
    if let Some(f) = c.find_morphism(name) {
        return Some(MorphismClass::from_ids(c, &[f]));
    }
    match model.classes.get(name) {
        Some(k) if k.category == cid => Some(k.class.clone()),
        Some(_) => None,
        None => class_keyword(c, name),
    }
}

/// `orth`: orthogonality of two maps of presheaves, or of two morphisms or
/// classes of a category. The category is `category` when given, else the
/// one of the two declared classes.
pub fn orth(model: &Model, e: &str, m: &str, enriched: bool, category: Option<&str>) -> CommandReport {
    let mut rep = CommandReport::new("orth");
    rep.config("pair", json!([e, m])).config("enriched", enriched);
    let mut r = Report::new();
    let declared = match (model.classes.get(e), model.classes.get(m)) {
        (Some(a), Some(b)) if a.category == b.category => Some(a.category.as_str()),
        _ => None,
    };
    if let Some(cid) = category.or(declared) {
        rep.config("category", cid);
        let Some(c) = model.categories.get(cid) else {
            r.record_witness("resolve", Scope::Exact, Some(format!("unknown or invalid category {cid}")));
            rep.absorb("", r);
            return rep;
        };
        let (Some(left), Some(right)) = (resolve_class(model, c, cid, e), resolve_class(model, c, cid, m)) else {
            r.record_witness("resolve", Scope::Exact, Some(format!("unknown morphism or class {e} or {m} in {cid}")));
            rep.absorb("", r);
            return rep;
        };
        let w = left.ids().into_iter().find_map(|ei| {
            right.ids().into_iter().find_map(|mi| {
                orthogonality_witness(c, ei, mi).map(|w| {
                    format!(
                        "{} is not orthogonal to {}: square u = {}, v = {} has {} diagonals",
                        describe(c, ei),
                        describe(c, mi),
                        describe(c, w.u),
                        describe(c, w.v),
                        w.diagonals
                    )
                })
            })
        });
        r.record_witness(format!("{e} ↓ {m}"), Scope::Exact, w);
        rep.absorb("", r);
        return rep;
    }
    let (Some(me), Some(mm)) = (model.maps.get(e), model.maps.get(m)) else {
        r.record_witness("resolve", Scope::Exact, Some(format!("unknown or invalid map {e} or {m}")));
        rep.absorb("", r);
        return rep;
    };
    let p = |id: &str| &model.presheaves[id].presheaf;
    let ea = Arrow::new(p(&me.source), p(&me.target), &me.map);
    let ma = Arrow::new(p(&mm.source), p(&mm.target), &mm.map);
    let run = || -> Result<Report, BudgetExceeded> {
        let mut r = Report::new();
        let ordinary = presheaf_orthogonal(ea, ma, &model.budget)?;
        r.record(format!("{e} ↓ {m}"), Scope::Exact, ordinary, || {
            format!("maps {e} and {m}: some square has no unique diagonal")
        });
        if enriched {
            let en = enriched_orthogonal(ea, ma, &model.budget)?;
            r.record(format!("{e} ↓ {m} enriched"), Scope::Exact, en, || {
                format!("maps {e} and {m}: the square of exponentials is not a pullback")
            });
            let tensored = tensored_orthogonal(ea, ma, &model.budget)?;
            r.record("enriched agrees with representable tensoring", Scope::Exact, tensored == en, || {
                format!("enriched {en}, tensored {tensored}")
            });
        }
        Ok(r)
    };
    match run() {
        Ok(r) => rep.absorb("", r),
        Err(b) => rep.budget_exceeded = Some(b.to_string()),
    }
    rep
}

/// `factsys-check`: factorization, properness, stability and the closure
/// operator of every declared system.
pub fn factsys_check(model: &Model, only: Option<&str>) -> CommandReport {
    let mut rep = CommandReport::new("factsys-check");
    if let Some(id) = only {
        rep.config("system", id);
    }
    let mut proper = serde_json::Map::new();
    for (id, s) in model.systems.iter().filter(|(k, _)| only.is_none_or(|o| o == k.as_str())) {
        let c = &model.categories[&s.category];
        let start = Instant::now();
        let r = system_report(c, &s.left, &s.right);
        proper.insert(id.clone(), check_proper(c, &s.left, &s.right).is_ok().into());
        rep.absorb_timed(id, r, start.elapsed());
    }
    if let Some(id) = only.filter(|o| !model.systems.contains_key(*o)) {
        let mut r = Report::new();
        r.record_witness("resolve", Scope::Exact, Some(format!("unknown or invalid factorization system {id}")));
        rep.absorb("", r);
    }
    rep.data("proper", proper);
    rep
}

/// Checks for one `(E, M)`.
pub fn system_report(c: &FinCategory, left: &MorphismClass, right: &MorphismClass) -> Report {
    let mut r = Report::new();
    match check_factorization_system(c, left, right) {
        Ok(fs) => {
            r.record_witness("factorization system", Scope::Exact, None);
            r.absorb("stability", stability_report(c, left, right));
            match FiniteClosure::from_factsys(right, &fs) {
                Ok(cl) => r.absorb("closure", finite_closure_suite(c, &cl, Some(&fs))),
                Err(f) => {
                    r.record_witness("closure", Scope::Exact, Some(format!("{} has no closure", describe(c, f))));
                }
            }
        }
        Err(v) => {
            r.record_witness("factorization system", Scope::Exact, Some(violation(c, &v)));
        }
    }
    r
}

/// `core`: the idempotent core of a monad, or the reflection for a given
/// `Σ`, with every certificate.
pub fn core(model: &Model, monad: &str, sigma: Option<&str>, system: Option<&str>) -> CommandReport {
    let mut rep = CommandReport::new("core");
    rep.config("monad", monad);
    if let Some(s) = sigma {
        rep.config("sigma", s);
    }
    rep.config("system", system.unwrap_or("isos/all"));
    let mut r = Report::new();
    let Some(entry) = model.monads.get(monad) else {
        r.record_witness("resolve", Scope::Exact, Some(format!("unknown or invalid monad {monad}")));
        rep.absorb("", r);
        return rep;
    };
    let c = entry.monad.category().clone();
    let (e_class, m_class) = match system {
        None => (MorphismClass::isos(&c), MorphismClass::all(&c)),
        Some(id) => match model.systems.get(id) {
            Some(s) if s.category == entry.category => (s.left.clone(), s.right.clone()),
            Some(_) => {
                r.record_witness("resolve", Scope::Exact, Some(format!("system {id} lives on another category")));
                rep.absorb("", r);
                return rep;
            }
            None => {
                r.record_witness("resolve", Scope::Exact, Some(format!("unknown or invalid system {id}")));
                rep.absorb("", r);
                return rep;
            }
        },
    };
    let sigma_class = match sigma {
        None => None,
        Some(id) => match model.classes.get(id) {
            Some(k) if k.category == entry.category => Some(k.class.clone()),
            _ => {
                r.record_witness(
                    "resolve",
                    Scope::Exact,
                    Some(format!("class {id} is not a class on {}", entry.category)),
                );
                rep.absorb("", r);
                return rep;
            }
        },
    };
    let start = Instant::now();
    let built = match sigma_class {
        None => idempotent_core(entry.monad.clone(), e_class, m_class).map(|res| {
            let report = full_report(&res, &model.budget);
            (res, report)
        }),
        Some(sig) => CoreInput::new(entry.monad.clone(), e_class, m_class, sig).and_then(|input| {
            let res = build_reflection(&input)?;
            let mut report = Report::new();
            report.absorb("diagnostics", res.diagnostics.clone());
            report.absorb("stability", stability_suite(&res));
            report.absorb("proposition", core_propositions(&res));
            report.absorb("closure", closure_suite(&res));
            Ok((res, report))
        }),
    };
    match built {
        Ok((res, report)) => {
            rep.absorb_timed("", report, start.elapsed());
            rep.data("result", core_data(&res));
        }
        Err(e) => {
            r.record_witness("construction", Scope::Exact, Some(core_error(&c, &e)));
            rep.absorb("", r);
        }
    }
    rep
}

pub fn core_error(c: &FinCategory, e: &CoreError) -> String {
    match e {
        CoreError::NotPrefactorization(v) => format!("not a prefactorization system: {}", violation(c, v)),
        CoreError::NotProper(v) | CoreError::DefinitionsOnly(v) => {
            format!("system is not proper: {}", violation(c, v))
        }
        CoreError::NotFactorizationSystem(v) => format!("not a factorization system: {}", violation(c, v)),
        CoreError::SigmaNotInverted(f) => format!("{} is in Σ but not inverted by T", describe(c, *f)),
        CoreError::AssumptionUnavailable(f) => {
            format!("{} has no dense then closed-embedding factorization", describe(c, *f))
        }
        CoreError::NonUniqueExtension { mor, count } => {
            format!("extension along {} has {count} candidates", describe(c, *mor))
        }
        other => other.to_string(),
    }
}

fn core_data(r: &CoreResult) -> Value {
    let c = r.input.category();
    let names = |v: &[usize]| v.iter().map(|&o| c.obj_name(o).to_string()).collect::<Vec<_>>();
    let completions: BTreeMap<String, Value> = c
        .objects()
        .map(|b| {
            (c.obj_name(b).to_string(), json!({"rho": c.mor_name(r.rho(b)), "completion": c.obj_name(r.completion(b))}))
        })
        .collect();
    let sigma: Vec<String> = sigma_t(&r.input.monad).ids().iter().map(|&f| c.mor_name(f).to_string()).collect();
    json!({
        "subcategory": names(&r.subcategory),
        "completions": completions,
        "sigma_t": sigma,
        "core_is_monad": r.ttilde.is_idempotent(),
    })
}

/// LT and Grothendieck topologies on one base, and the two round trips.
pub fn lt_duality(omega: &Arc<Omega>, budget: &Budget) -> Result<(Report, Value), BudgetExceeded> {
    let lts = enumerate_lt_topologies(omega, budget)?;
    let gts = enumerate_grothendieck_topologies(omega, budget)?;
    let mut r = Report::new();
    r.record("LT and Grothendieck counts agree", Scope::Exact, lts.len() == gts.len(), || {
        format!("{} LT, {} Grothendieck", lts.len(), gts.len())
    });
    let mut lt_trip = None;
    for (i, j) in lts.iter().enumerate() {
        let g = covering_sieves(j);
        let ok = gts.contains(&g) && topology_of(omega, &g).ok().as_ref() == Some(j);
        if !ok {
            lt_trip = Some(format!("LT topology #{i}"));
            break;
        }
    }
    r.record_witness("LT to Grothendieck to LT is the identity", Scope::Exact, lt_trip);
    let mut g_trip = None;
    for (i, g) in gts.iter().enumerate() {
        match topology_of(omega, g) {
            Ok(j) if covering_sieves(&j) == *g => {}
            Ok(_) => g_trip = Some(format!("Grothendieck topology #{i}: covers change")),
            Err(w) => g_trip = Some(format!("Grothendieck topology #{i}: {w}")),
        }
        if g_trip.is_some() {
            break;
        }
    }
    r.record_witness("Grothendieck to LT to Grothendieck is the identity", Scope::Exact, g_trip);
    let listing: Vec<Value> = lts.iter().map(|j| json!(named_covers(j))).collect();
    Ok((r, json!({"count": lts.len(), "topologies": listing})))
}

/// `lt-enum`: topologies over every category small enough to be a base.
pub fn lt_enum(model: &mut Model, only: Option<&str>) -> CommandReport {
    let mut rep = CommandReport::new("lt-enum");
    if let Some(c) = only {
        rep.config("category", c);
    }
    let ids: Vec<String> = model.categories.keys().filter(|k| only.is_none_or(|o| o == k.as_str())).cloned().collect();
    if ids.is_empty() {
        let mut r = Report::new();
        r.record_witness("resolve", Scope::Exact, Some(String::from("no valid category selected")));
        rep.absorb("", r);
        return rep;
    }
    for id in ids {
        let start = Instant::now();
        let outcome = model.omega(&id).and_then(|om| lt_duality(&om, &model.budget));
        match outcome {
            Ok((r, data)) => {
                rep.absorb_timed(&id, r, start.elapsed());
                rep.data(&id, data);
            }
            Err(b) => {
                let mut r = Report::new();
                r.skip("LT and Grothendieck counts agree", Scope::Exact, b.to_string());
                rep.absorb(&id, r);
                if only.is_some() {
                    rep.budget_exceeded = Some(b.to_string());
                }
            }
        }
    }
    rep
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Core,
    Plus,
    Both,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Core => "core",
            Method::Plus => "plus",
            Method::Both => "both",
        }
    }
}

fn map_json(x: &Presheaf, f: &PresheafMap) -> Value {
    let base = x.base();
    let m: BTreeMap<String, Vec<usize>> =
        base.objects().map(|c| (base.obj_name(c).to_string(), f.comp[c].clone())).collect();
    json!(m)
}

fn presheaf_json(x: &Presheaf) -> Value {
    let base = x.base();
    let cards: BTreeMap<String, usize> = base.objects().map(|c| (base.obj_name(c).to_string(), x.card(c))).collect();
    let res: BTreeMap<String, Vec<usize>> = base
        .morphisms()
        .filter(|&f| !base.is_identity(f))
        .map(|f| (base.mor_name(f).to_string(), x.table(f).to_vec()))
        .collect();
    json!({"cards": cards, "restrictions": res})
}

/// Sheafification of one presheaf by one or both methods.
pub fn sheafify_one(
    j: &LtTopology,
    x: &Presheaf,
    method: Method,
    budget: &Budget,
) -> Result<(Report, Value), SheafifyError> {
    let mut r = Report::new();
    let mut data = serde_json::Map::new();
    let core = match method {
        Method::Plus => None,
        _ => Some(sheafify_via_core(j, x, budget)?),
    };
    let plus = match method {
        Method::Core => None,
        _ => Some(sheafify_oracle(j, x, budget)?),
    };
    if let Some(a) = &core {
        r.record("core: result is a sheaf", Scope::Exact, is_sheaf(j, &a.object), || {
            format!("carriers {:?}", a.object.cards())
        });
        r.record("core: image of the unit is separated", Scope::Exact, is_separated(j, &a.image), || {
            format!("carriers {:?}", a.image.cards())
        });
        data.insert("core".into(), json!({"object": presheaf_json(&a.object), "unit": map_json(x, &a.unit)}));
    }
    if let Some(p) = &plus {
        r.record("plus-plus: result is a sheaf", Scope::Exact, is_sheaf(j, &p.object), || {
            format!("carriers {:?}", p.object.cards())
        });
        data.insert("plus".into(), json!({"object": presheaf_json(&p.object), "unit": map_json(x, &p.unit)}));
    }
    if let (Some(a), Some(p)) = (&core, &plus) {
        let iso = iso_under(x, &a.object, &a.unit, &p.object, &p.unit, budget)?;
        r.record("core and plus-plus isomorphic under X", Scope::Exact, iso.is_some(), || describe_mismatch(a, p));
        if let Some(i) = iso {
            data.insert("iso".into(), map_json(&a.object, &i));
        }
    }
    Ok((r, Value::Object(data)))
}

pub fn sheafify(model: &Model, presheaf: &str, site: &str, method: Method) -> CommandReport {
    let mut rep = CommandReport::new("sheafify");
    rep.config("presheaf", presheaf).config("topology", site).config("method", method.name());
    let mut r = Report::new();
    let (Some(x), Some(s)) = (model.presheaves.get(presheaf), model.sites.get(site)) else {
        r.record_witness(
            "resolve",
            Scope::Exact,
            Some(format!("unknown or invalid presheaf {presheaf} or site {site}")),
        );
        rep.absorb("", r);
        return rep;
    };
    if x.base != s.base {
        r.record_witness(
            "resolve",
            Scope::Exact,
            Some(format!("presheaf {presheaf} and site {site} have different bases")),
        );
        rep.absorb("", r);
        return rep;
    }
    let start = Instant::now();
    match sheafify_one(&s.topology, &x.presheaf, method, &model.budget) {
        Ok((r, data)) => {
            rep.absorb_timed("", r, start.elapsed());
            rep.data("result", data);
        }
        Err(SheafifyError::Budget(b)) => rep.budget_exceeded = Some(b.to_string()),
        Err(e) => {
            r.record_witness("core construction", Scope::Exact, Some(e.to_string()));
            rep.absorb("", r);
        }
    }
    rep
}

/// The bounded sweep for one topology: the theorem's items, the closure
/// suite, and dense composition when the universe is small enough.
pub fn verify_lt_report(
    j: &LtTopology,
    u: &Universe,
    budget: &Budget,
    closure: bool,
) -> Result<(Report, Value), BudgetExceeded> {
    let data = SweepData::new(j, u, budget)?;
    let mut r = Report::new();
    r.absorb("theorem", verify_with(&data));
    if closure {
        r.absorb("closure", lt_closure_suite(j, u));
    }
    if u.n_maps() <= DENSE_COMPOSITION_LIMIT {
        r.absorb("composition", dense_composition_report(&data));
    } else {
        let why = format!("{} universe maps exceed {DENSE_COMPOSITION_LIMIT}", u.n_maps());
        r.skip("composition/dense maps compose", Scope::Bounded, why.clone());
        r.skip("composition/second factor of a dense composite is dense", Scope::Bounded, why);
    }
    let (maps, dense, inverted) = sweep_counts(&data);
    Ok((r, json!({"objects": u.len(), "maps": maps, "dense_maps": dense, "inverted_maps": inverted})))
}

pub fn verify_lt(model: &Model, site: &str, bound: usize) -> CommandReport {
    let mut rep = CommandReport::new("verify-lt");
    rep.config("topology", site).config("bound", bound);
    let Some(s) = model.sites.get(site) else {
        let mut r = Report::new();
        r.record_witness("resolve", Scope::Exact, Some(format!("unknown or invalid site {site}")));
        rep.absorb("", r);
        return rep;
    };
    let start = Instant::now();
    let run = || -> Result<(Report, Value), BudgetExceeded> {
        let u = Universe::new(s.topology.base(), bound, &model.budget)?;
        verify_lt_report(&s.topology, &u, &model.budget, true)
    };
    match run() {
        Ok((r, data)) => {
            rep.absorb_timed("", r, start.elapsed());
            rep.data("universe", data);
        }
        Err(b) => rep.budget_exceeded = Some(b.to_string()),
    }
    rep
}

pub fn quasitopos(model: &Model, only: Option<&str>, bound: usize) -> CommandReport {
    let mut rep = CommandReport::new("quasitopos");
    rep.config("bound", bound);
    if let Some(b) = only {
        rep.config("bisite", b);
    }
    let chosen: Vec<(&String, _)> =
        model.bisites.iter().filter(|(k, _)| only.is_none_or(|o| o == k.as_str())).collect();
    if chosen.is_empty() {
        let mut r = Report::new();
        r.record_witness("resolve", Scope::Exact, Some(String::from("no valid bisite selected")));
        rep.absorb("", r);
        return rep;
    }
    let mut universes: BTreeMap<String, Universe> = BTreeMap::new();
    for (id, b) in chosen {
        let (cover, dual) = (&model.sites[&b.cover], &model.sites[&b.dual]);
        let start = Instant::now();
        let u = match universes.get(&cover.base) {
            Some(u) => u,
            None => match Universe::new(cover.topology.base(), bound, &model.budget) {
                Ok(u) => universes.entry(cover.base.clone()).or_insert(u),
                Err(e) => {
                    rep.budget_exceeded = Some(e.to_string());
                    return rep;
                }
            },
        };
        match quasitopos_check(&cover.topology, &dual.topology, u, &model.budget) {
            Ok(r) => rep.absorb_timed(id, r, start.elapsed()),
            Err(e) => {
                rep.budget_exceeded = Some(e.to_string());
                return rep;
            }
        }
    }
    rep
}

/// Runs the campaigns declared in a problem file.
pub fn campaigns(path: &Path, model: &mut Model) -> CommandReport {
    let mut rep = CommandReport::new("suite");
    rep.config("file", file_name(path));
    let mut v = CommandReport::new("validate");
    validate_model(model, &mut v);
    merge(&mut rep, "validate", v);
    let list: Vec<CampaignSpec> = model.campaigns.clone();
    for c in &list {
        let sub = run_campaign(model, c);
        merge(&mut rep, &c.id, sub);
    }
    rep
}

fn merge(into: &mut CommandReport, prefix: &str, sub: CommandReport) {
    let mut r = Report::new();
    r.checks = sub.checks;
    into.absorb(prefix, r);
    for (k, d) in sub.timings {
        into.timings.push((if k.is_empty() { prefix.to_string() } else { format!("{prefix}/{k}") }, d));
    }
    if !sub.data.is_empty() {
        into.data(prefix, Value::Object(sub.data));
    }
    if into.budget_exceeded.is_none() {
        into.budget_exceeded = sub.budget_exceeded;
    }
}

fn missing(what: &str, c: &CampaignSpec) -> CommandReport {
    let mut rep = CommandReport::new("campaign");
    let mut r = Report::new();
    r.record_witness("resolve", Scope::Exact, Some(format!("campaign {} needs a {what}", c.id)));
    rep.absorb("", r);
    rep
}

pub fn run_campaign(model: &mut Model, c: &CampaignSpec) -> CommandReport {
    match c.kind {
        CampaignKind::Validate => {
            let mut rep = CommandReport::new("validate");
            validate_model(model, &mut rep);
            rep
        }
        CampaignKind::FactsysCheck => factsys_check(model, c.system.as_deref()),
        CampaignKind::Core => match &c.monad {
            Some(m) => core(model, m, c.sigma.as_deref(), c.system.as_deref()),
            None => missing("monad", c),
        },
        CampaignKind::LtEnum => lt_enum(model, c.category.as_deref()),
        CampaignKind::Sheafify => match (&c.presheaf, &c.site) {
            (Some(p), Some(s)) => {
                let method = match c.method.as_deref() {
                    Some("core") => Method::Core,
                    Some("plus") => Method::Plus,
                    _ => Method::Both,
                };
                sheafify(model, p, s, method)
            }
            _ => missing("presheaf and site", c),
        },
        CampaignKind::VerifyLt => match &c.site {
            Some(s) => verify_lt(model, s, c.bound.unwrap_or(2)),
            None => missing("site", c),
        },
        CampaignKind::Quasitopos => quasitopos(model, c.bisite.as_deref(), c.bound.unwrap_or(3)),
    }
}

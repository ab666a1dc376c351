//! The acceptance campaign: eight criteria, each reduced to a report whose
//! checks must all pass.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::{Arc, OnceLock};
use std::time::{Duration, Instant};

use idemcore::factsys::{check_factorization_system, sigma_perp_objects, MorphismClass};
use idemcore::fincat::enumerate::monads;
use idemcore::fincat::reflect::smallest_containing;
use idemcore::fincat::{enumerate_reflective_subcategories, presets, FinCategory, ObjId};
use idemcore::lttop::{
    covering_sieves, enumerate_lt_topologies, lt_closure_suite, quasitopos_check, sheafify_agreement, verify_with,
    LtTopology, SheafifyError, SweepData,
};
use idemcore::monadcore::{closure_suite, idempotent_core, sigma_t, CoreResult};
use idemcore::presheaf::{enumerate_presheaves, Omega, Universe};
use idemcore::report::{Report, Scope};
use idemcore::{Budget, BudgetExceeded};

use crate::commands::{core_error, lt_duality, system_report, validate};
use crate::model::Model;
use crate::parallel::par_map;
use crate::schema::parse;

/// Bound on universe carriers for the sweeps.
pub const UNIVERSE_BOUND: usize = 3;
/// Carrier bound for the naturality part of the sheafification comparison.
pub const NATURALITY_BOUND: usize = 2;
/// Morphism limits for the monad enumeration fixtures.
pub const POSET_MORPHISM_LIMIT: usize = 24;
pub const DECLARED_MORPHISM_LIMIT: usize = 12;

/// Categories with user-declared proper factorization systems.
const DECLARED_SYSTEMS: &str = include_str!("../fixtures/valid/proper_systems.json");

#[derive(Debug, Clone)]
pub struct CriterionOutcome {
    pub number: u8,
    pub title: &'static str,
    pub report: Report,
    pub summary: String,
    pub budget: Option<String>,
    pub elapsed: Duration,
}

impl CriterionOutcome {
    /// Every check passed, none was skipped, and there was something to check.
    pub fn passed(&self) -> bool {
        self.budget.is_none() && self.report.failed() == 0 && self.report.skipped() == 0 && self.report.passed() > 0
    }

    /// First failed or skipped check, for the one-line summary.
    pub fn first_problem(&self) -> Option<String> {
        if let Some(b) = &self.budget {
            return Some(b.clone());
        }
        self.report
            .checks
            .iter()
            .find(|c| c.status != idemcore::report::Status::Pass)
            .map(|c| format!("{} [{}]: {}", c.name, c.status, c.witness.clone().unwrap_or_default()))
    }

    pub fn line(&self) -> String {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        let mut s = format!(
            "criterion {}: {status} {} ({} checks, {} failed, {} skipped; {})",
            self.number,
            self.title,
            self.report.checks.len(),
            self.report.failed(),
            self.report.skipped(),
            self.summary
        );
        if let Some(p) = self.first_problem() {
            s.push_str("; first problem: ");
            s.push_str(&p);
        }
        s
    }
}

/// A presheaf base with its topologies and a lazily built universe.
pub struct SiteBase {
    pub name: &'static str,
    pub omega: Arc<Omega>,
    pub topologies: Vec<LtTopology>,
    universe: OnceLock<Result<Universe, BudgetExceeded>>,
}

impl SiteBase {
    fn new(name: &'static str, c: FinCategory, budget: &Budget) -> Result<Self, BudgetExceeded> {
        let omega = Arc::new(Omega::new(Arc::new(c))?);
        let topologies = enumerate_lt_topologies(&omega, budget)?;
        Ok(SiteBase { name, omega, topologies, universe: OnceLock::new() })
    }

    pub fn universe(&self, budget: &Budget) -> Result<&Universe, BudgetExceeded> {
        self.universe
            .get_or_init(|| Universe::new(self.omega.base(), UNIVERSE_BOUND, budget))
            .as_ref()
            .map_err(Clone::clone)
    }
}

/// One monad with an ambient system and its core.
pub struct CoreInstance {
    pub label: String,
    pub category: Arc<FinCategory>,
    pub left: MorphismClass,
    pub right: MorphismClass,
    pub images: Vec<ObjId>,
    pub result: Result<CoreResult, String>,
    /// Smallest enumerated reflective subcategory containing the images.
    pub hull: Result<Option<Vec<ObjId>>, String>,
}

pub struct Acceptance {
    pub budget: Budget,
    pub fixtures: PathBuf,
    bases: OnceLock<Result<Vec<SiteBase>, BudgetExceeded>>,
    cores: OnceLock<Result<Vec<CoreInstance>, String>>,
}

/// Location of the fixture corpus in the source tree.
pub fn default_fixtures() -> PathBuf {
    PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures"))
}

impl Default for Acceptance {
    fn default() -> Self {
        Acceptance::new(Budget::default(), default_fixtures())
    }
}

fn record_budget(r: Result<Report, BudgetExceeded>, out: &mut Report, prefix: &str, budget: &mut Option<String>) {
    match r {
        Ok(sub) => out.absorb(prefix, sub),
        Err(b) => {
            out.skip(prefix, Scope::Exact, b.to_string());
            budget.get_or_insert_with(|| b.to_string());
        }
    }
}

impl Acceptance {
    pub fn new(budget: Budget, fixtures: PathBuf) -> Self {
        Acceptance { budget, fixtures, bases: OnceLock::new(), cores: OnceLock::new() }
    }

    /// Terminal, `0 → 1`, `0 → 1 → 2` and the parallel pair.
    pub fn bases(&self) -> Result<&[SiteBase], BudgetExceeded> {
        self.bases
            .get_or_init(|| {
                [
                    ("terminal", presets::terminal()),
                    ("poset2", presets::poset2()),
                    ("chain3", presets::chain(3)),
                    ("parallel_pair", presets::parallel_pair()),
                ]
                .into_iter()
                .map(|(n, c)| SiteBase::new(n, c, &self.budget))
                .collect()
            })
            .as_ref()
            .map(Vec::as_slice)
            .map_err(Clone::clone)
    }

    pub fn run_all(&self) -> Vec<CriterionOutcome> {
        (1..=8).map(|n| self.run(n)).collect()
    }

    pub fn run(&self, n: u8) -> CriterionOutcome {
        let start = Instant::now();
        let (title, result) = match n {
            1 => ("sheafification agreement", self.sheafification()),
            2 => ("LT and Grothendieck duality", self.duality()),
            3 => ("bounded sweep of the LT theorem", self.sweep()),
            4 => ("idempotent core oracle equivalence", self.core_oracles()),
            5 => ("idempotent core certificates", self.core_certificates()),
            6 => ("closure operator suite", self.closures()),
            7 => ("validator law suites", self.validators()),
            8 => ("quasitopos classification", self.quasitopos()),
            _ => ("unknown criterion", Err(format!("no criterion {n}"))),
        };
        let (report, summary, budget) = match result {
            Ok((r, s, b)) => (r, s, b),
            Err(e) => {
                let mut r = Report::new();
                r.record_witness("setup", Scope::Exact, Some(e.clone()));
                (r, String::from("setup failed"), None)
            }
        };
        CriterionOutcome { number: n, title, report, summary, budget, elapsed: start.elapsed() }
    }

    fn sheafification(&self) -> Result<(Report, String, Option<String>), String> {
        let bases = self.bases().map_err(|e| e.to_string())?;
        let mut out = Report::new();
        let mut budget = None;
        let mut presheaves = 0;
        let mut runs = 0;
        for base in bases {
            let b = self.budget;
            let with_maps = enumerate_presheaves(base.omega.base(), NATURALITY_BOUND, &b).map_err(|e| e.to_string())?;
            let wide = enumerate_presheaves(base.omega.base(), UNIVERSE_BOUND, &b).map_err(|e| e.to_string())?;
            presheaves += wide.len();
            let results = par_map(&base.topologies, |j| {
                let mut r = Report::new();
                r.absorb("carriers ≤ 2", sheafify_agreement(j, &with_maps, true, &b)?);
                r.absorb("carriers ≤ 3", sheafify_agreement(j, &wide, false, &b)?);
                Ok::<Report, SheafifyError>(r)
            });
            for (i, res) in results.into_iter().enumerate() {
                runs += wide.len();
                let prefix = format!("{}/topology {i}", base.name);
                match res {
                    Ok(r) => out.absorb(&prefix, r),
                    Err(SheafifyError::Budget(e)) => record_budget(Err(e), &mut out, &prefix, &mut budget),
                    Err(e) => {
                        out.record_witness(format!("{prefix}/core construction"), Scope::Exact, Some(e.to_string()));
                    }
                }
            }
        }
        Ok((out, format!("{presheaves} presheaves, {runs} sheafifications"), budget))
    }

    fn duality(&self) -> Result<(Report, String, Option<String>), String> {
        let bases = self.bases().map_err(|e| e.to_string())?;
        let mut out = Report::new();
        let mut budget = None;
        let mut counts = Vec::new();
        for base in bases {
            match lt_duality(&base.omega, &self.budget) {
                Ok((r, data)) => {
                    counts.push(format!("{} {}", base.name, data["count"]));
                    if base.name == "terminal" {
                        let n = data["count"].as_u64().unwrap_or(0);
                        out.record("terminal/exactly two topologies", Scope::Exact, n == 2, || format!("{n}"));
                    }
                    out.absorb(base.name, r);
                }
                Err(e) => record_budget(Err(e), &mut out, base.name, &mut budget),
            }
        }
        Ok((out, counts.join(", "), budget))
    }

    fn sweep(&self) -> Result<(Report, String, Option<String>), String> {
        let bases = self.bases().map_err(|e| e.to_string())?;
        let mut out = Report::new();
        let mut budget = None;
        let mut maps = 0;
        for base in bases {
            let u = match base.universe(&self.budget) {
                Ok(u) => u,
                Err(e) => {
                    record_budget(Err(e), &mut out, base.name, &mut budget);
                    continue;
                }
            };
            maps += u.n_maps() * base.topologies.len();
            let results = par_map(&base.topologies, |j| SweepData::new(j, u, &self.budget).map(|d| verify_with(&d)));
            for (i, r) in results.into_iter().enumerate() {
                record_budget(r, &mut out, &format!("{}/topology {i}", base.name), &mut budget);
            }
        }
        Ok((out, format!("bound {UNIVERSE_BOUND}, {maps} map-topology pairs"), budget))
    }

    /// Every monad on the fixture categories with its core, computed once.
    pub fn core_instances(&self) -> Result<&[CoreInstance], String> {
        self.cores.get_or_init(|| self.build_cores()).as_ref().map(Vec::as_slice).map_err(Clone::clone)
    }

    fn build_cores(&self) -> Result<Vec<CoreInstance>, String> {
        let mut systems: Vec<(String, Arc<FinCategory>, MorphismClass, MorphismClass)> = Vec::new();
        let posets: Vec<(String, FinCategory)> = (1..=6)
            .map(|n| (format!("chain{n}"), presets::chain(n)))
            .chain([
                (String::from("discrete3"), presets::discrete(3)),
                (String::from("diamond"), presets::diamond()),
                (String::from("m3"), presets::m3()),
                (String::from("n5"), presets::n5()),
                (String::from("grid_2x3"), presets::grid_2x3()),
            ])
            .collect();
        for (name, c) in posets {
            if c.n_morphisms() > POSET_MORPHISM_LIMIT {
                return Err(format!("{name} has more than {POSET_MORPHISM_LIMIT} morphisms"));
            }
            let (e, m) = (MorphismClass::isos(&c), MorphismClass::all(&c));
            systems.push((format!("{name} (isos, all)"), Arc::new(c), e, m));
        }
        let file = parse(DECLARED_SYSTEMS).map_err(|e| e.to_string())?;
        let model = Model::build(&file);
        if let Some(p) = model.problems().next() {
            return Err(format!("declared systems fixture: {} {} is not valid", p.kind, p.id));
        }
        for (id, s) in &model.systems {
            let c = model.categories[&s.category].clone();
            if c.n_morphisms() > DECLARED_MORPHISM_LIMIT {
                return Err(format!("{} has more than {DECLARED_MORPHISM_LIMIT} morphisms", s.category));
            }
            systems.push((format!("{} {id}", s.category), c, s.left.clone(), s.right.clone()));
        }
        let mut out = Vec::new();
        for (label, c, e, m) in systems {
            let ms = monads(&c, &self.budget).map_err(|b| format!("{label}: {b}"))?;
            let reflections = enumerate_reflective_subcategories(&c, &self.budget);
            for (k, t) in ms.into_iter().enumerate() {
                let images: Vec<ObjId> = c.objects().map(|b| t.on_obj(b)).collect();
                let hull = match &reflections {
                    Ok(refl) => Ok(smallest_containing(refl, &images).map(|r| r.objects.clone())),
                    Err(b) => Err(b.to_string()),
                };
                let result = idempotent_core(t, e.clone(), m.clone()).map_err(|err| core_error(&c, &err));
                out.push(CoreInstance {
                    label: format!("{label}/monad {k}"),
                    category: c.clone(),
                    left: e.clone(),
                    right: m.clone(),
                    images,
                    result,
                    hull,
                });
            }
        }
        Ok(out)
    }

    fn core_oracles(&self) -> Result<(Report, String, Option<String>), String> {
        let cores = self.core_instances()?;
        let mut out = Report::new();
        for inst in cores {
            let r = match &inst.result {
                Ok(r) => r,
                Err(e) => {
                    out.record_witness(format!("{}/core", inst.label), Scope::Exact, Some(e.clone()));
                    continue;
                }
            };
            let c = &inst.category;
            let perp = sigma_perp_objects(c, &sigma_t(&r.input.monad));
            out.record(format!("{}/core is Σ_T^⊥", inst.label), Scope::Exact, r.subcategory == perp, || {
                format!("core {:?}, orthogonality sweep {:?}", r.subcategory, perp)
            });
            let name = format!("{}/core is the reflective hull of T(Ob B)", inst.label);
            match &inst.hull {
                Ok(Some(h)) => {
                    out.record(name, Scope::Exact, *h == r.subcategory, || {
                        format!("core {:?}, hull {:?} of {:?}", r.subcategory, h, inst.images)
                    });
                }
                Ok(None) => {
                    out.record_witness(name, Scope::Exact, Some(format!("no reflective hull of {:?}", inst.images)));
                }
                Err(b) => out.skip(name, Scope::Exact, b.clone()),
            }
        }
        let categories: std::collections::BTreeSet<&str> =
            cores.iter().map(|i| i.label.split('/').next().unwrap_or("")).collect();
        Ok((out, format!("{} monads on {} category-system pairs", cores.len(), categories.len()), None))
    }

    fn core_certificates(&self) -> Result<(Report, String, Option<String>), String> {
        let cores = self.core_instances()?;
        let mut out = Report::new();
        for inst in cores {
            match &inst.result {
                Ok(r) => out.absorb(&inst.label, r.diagnostics.clone()),
                Err(e) => {
                    out.record_witness(format!("{}/core", inst.label), Scope::Exact, Some(e.clone()));
                }
            }
        }
        Ok((out, format!("{} cores", cores.len()), None))
    }

    fn closures(&self) -> Result<(Report, String, Option<String>), String> {
        let cores = self.core_instances()?;
        let mut out = Report::new();
        let mut budget = None;
        let mut ambient_seen: Vec<&str> = Vec::new();
        for inst in cores {
            let system = inst.label.split('/').next().unwrap_or("");
            if !ambient_seen.contains(&system) {
                ambient_seen.push(system);
                out.absorb(&format!("{system}/ambient"), system_report(&inst.category, &inst.left, &inst.right));
            }
            match &inst.result {
                Ok(r) => out.absorb(&format!("{}/dense-closed", inst.label), closure_suite(r)),
                Err(e) => {
                    out.record_witness(format!("{}/core", inst.label), Scope::Exact, Some(e.clone()));
                }
            }
        }
        let bases = self.bases().map_err(|e| e.to_string())?;
        let mut lt = 0;
        for base in bases {
            let u = match base.universe(&self.budget) {
                Ok(u) => u,
                Err(e) => {
                    record_budget(Err(e), &mut out, base.name, &mut budget);
                    continue;
                }
            };
            let results = par_map(&base.topologies, |j| lt_closure_suite(j, u));
            for (i, r) in results.into_iter().enumerate() {
                lt += 1;
                out.absorb(&format!("{}/topology {i}", base.name), r);
            }
        }
        let summary =
            format!("{} dense-closed systems, {} ambient systems, {lt} LT closures", cores.len(), ambient_seen.len());
        // the ambient systems must be factorization systems for the suite above
        for inst in cores {
            if check_factorization_system(&inst.category, &inst.left, &inst.right).is_err() {
                return Err(format!("{} lacks factorizations", inst.label));
            }
        }
        Ok((out, summary, budget))
    }

    fn validators(&self) -> Result<(Report, String, Option<String>), String> {
        let valid = json_files(&self.fixtures.join("valid"))?;
        let broken = json_files(&self.fixtures.join("broken"))?;
        let expectations = load_expectations(&self.fixtures.join("expectations.json"))?;
        let mut out = Report::new();
        out.record("at least 15 valid fixtures", Scope::Exact, valid.len() >= 15, || format!("{}", valid.len()));
        out.record("at least 10 broken fixtures", Scope::Exact, broken.len() >= 10, || format!("{}", broken.len()));
        for path in &valid {
            let name = stem(path);
            let rep = validate(path);
            let bad = rep.checks.iter().find(|c| c.status != idemcore::report::Status::Pass);
            out.record_witness(
                format!("{name}/accepted"),
                Scope::Exact,
                bad.map(|c| format!("{} [{}]: {}", c.name, c.status, c.witness.clone().unwrap_or_default())),
            );
            self.determinism(&mut out, path, &rep.render_json());
        }
        for path in &broken {
            let name = stem(path);
            let rep = validate(path);
            let Some((check, witness)) = expectations.get(&name) else {
                out.record_witness(format!("{name}/expectation"), Scope::Exact, Some(String::from("no expectation")));
                continue;
            };
            let got = rep.checks.iter().find(|c| c.name == *check);
            let w = match got {
                Some(c) if c.status == idemcore::report::Status::Fail && c.witness.as_deref() == Some(witness) => None,
                Some(c) => Some(format!("{} [{}]: {}", c.name, c.status, c.witness.clone().unwrap_or_default())),
                None => Some(format!("no check named {check}")),
            };
            out.record_witness(format!("{name}/rejected with the expected witness"), Scope::Exact, w);
            let fails = rep.checks.iter().filter(|c| c.status == idemcore::report::Status::Fail).count();
            out.record(format!("{name}/only the faulty entity fails"), Scope::Exact, fails == 1, || {
                format!("{fails} failures")
            });
            self.determinism(&mut out, path, &rep.render_json());
        }
        Ok((out, format!("{} valid, {} broken fixtures", valid.len(), broken.len()), None))
    }

    /// A second run renders the same bytes, which also match the golden.
    fn determinism(&self, out: &mut Report, path: &Path, first: &str) {
        let name = stem(path);
        let second = validate(path).render_json();
        out.record(format!("{name}/identical across runs"), Scope::Exact, first == second, || {
            String::from("reports differ")
        });
        let golden = self.fixtures.join("golden").join(format!("{name}.json"));
        let w = match fs::read_to_string(&golden) {
            Ok(g) if g == first => None,
            Ok(_) => Some(format!("report differs from {}", golden.display())),
            Err(e) => Some(format!("cannot read {}: {e}", golden.display())),
        };
        out.record_witness(format!("{name}/matches golden"), Scope::Exact, w);
    }

    fn quasitopos(&self) -> Result<(Report, String, Option<String>), String> {
        let bases = self.bases().map_err(|e| e.to_string())?;
        let base = bases.iter().find(|b| b.name == "poset2").ok_or("poset2 base missing")?;
        let mut out = Report::new();
        let mut budget = None;
        let u = match base.universe(&self.budget) {
            Ok(u) => u,
            Err(e) => return Ok((out, String::from("no universe"), Some(e.to_string()))),
        };
        let mut pairs = Vec::new();
        for (a, j) in base.topologies.iter().enumerate() {
            for (b, k) in base.topologies.iter().enumerate() {
                if covering_sieves(j).is_finer_than(&covering_sieves(k)) {
                    pairs.push((a, b, j, k));
                }
            }
        }
        let results = par_map(&pairs, |(_, _, j, k)| quasitopos_check(j, k, u, &self.budget));
        for ((a, b, _, _), r) in pairs.iter().zip(results) {
            record_budget(r, &mut out, &format!("J = topology {a}, K = topology {b}"), &mut budget);
        }
        Ok((out, format!("{} nested pairs, {} universe objects", pairs.len(), u.len()), budget))
    }
}

fn stem(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

/// `*.json` files of a directory, sorted by name.
pub fn json_files(dir: &Path) -> Result<Vec<PathBuf>, String> {
    let mut out: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| format!("cannot read {}: {e}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    out.sort();
    Ok(out)
}

/// Broken fixture name to (check name, exact witness).
pub fn load_expectations(path: &Path) -> Result<std::collections::BTreeMap<String, (String, String)>, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let raw: std::collections::BTreeMap<String, [String; 2]> =
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(raw.into_iter().map(|(k, [c, w])| (k, (c, w))).collect())
}

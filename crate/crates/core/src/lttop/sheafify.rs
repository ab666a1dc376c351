//! Sheafification as the completion of the double-dualization unit: the
//! closure of the image of `η_X` inside `T X`.
//!
//! `T X` is never enumerated. The image of `η_X` is built from unit
//! vectors, and every element of its closure is the amalgamation in `T X` of
//! a matching family of the image over a covering sieve. Amalgamations are
//! computed pointwise from the sheaf property of `Ω_j`.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::dual::{dualize, eta_vector, restrict_vector};
use super::plus::{plus_construction, plus_map, sheafify_oracle, PlusConstruction, Sheafification};
use super::sheaf::{is_separated, is_sheaf, matching_families, sieve_arrows};
use super::topology::{LtTopology, OmegaJ};
use crate::budget::{Budget, BudgetExceeded};
use crate::fincat::ObjId;
use crate::presheaf::{Elem, HomSearch, Presheaf, PresheafMap, Sieve};
use crate::report::{Report, Scope};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SheafifyError {
    Budget(BudgetExceeded),
    /// A matching family whose amalgamation in `T X` is not unique.
    Amalgamation {
        object: ObjId,
        sieve: Sieve,
        arrow: usize,
        candidates: usize,
    },
    /// The closure is not closed under restriction.
    NotSubpresheaf {
        object: ObjId,
        arrow: usize,
    },
}

impl fmt::Display for SheafifyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SheafifyError::Budget(b) => b.fmt(f),
            SheafifyError::Amalgamation { object, sieve, arrow, candidates } => write!(
                f,
                "family on sieve {sieve:#b} at object {object}: {candidates} candidate values at arrow {arrow}"
            ),
            SheafifyError::NotSubpresheaf { object, arrow } => {
                write!(f, "restriction along arrow {arrow} leaves the closure at object {object}")
            }
        }
    }
}

impl From<BudgetExceeded> for SheafifyError {
    fn from(b: BudgetExceeded) -> Self {
        SheafifyError::Budget(b)
    }
}

/// Closure of `im η` in `T X` with the unit, and the image itself.
#[derive(Debug, Clone)]
pub struct CoreSheafification {
    pub object: Presheaf,
    pub unit: PresheafMap,
    /// `im η_X`, the separated reflection.
    pub image: Presheaf,
    /// `X → im η_X`.
    pub quotient: PresheafMap,
    /// Elements of `object` as maps `y(c) × Ω^X → Ω`.
    pub vectors: Vec<Vec<PresheafMap>>,
}

/// Presheaf on sorted vectors, closed under restriction.
fn vector_presheaf(
    base: &alloc::sync::Arc<crate::fincat::FinCategory>,
    dual_cards: &[usize],
    vectors: &[Vec<PresheafMap>],
) -> Result<Presheaf, SheafifyError> {
    let mut restrict = Vec::with_capacity(base.n_morphisms());
    for g in base.morphisms() {
        let (d, c) = (base.src(g), base.dst(g));
        let mut col = Vec::with_capacity(vectors[c].len());
        for t in &vectors[c] {
            let r = restrict_vector(base, dual_cards, t, g);
            col.push(vectors[d].binary_search(&r).map_err(|_| SheafifyError::NotSubpresheaf { object: d, arrow: g })?);
        }
        restrict.push(col);
    }
    let card = vectors.iter().map(Vec::len).collect();
    Ok(Presheaf::new(base.clone(), card, restrict).expect("restriction of vectors is functorial"))
}

/// `cover`-closure of the image of `η` for the double dualization into
/// `Ω_dual`. With `cover = dual = j` this is `j`-sheafification; with
/// `cover ≤ dual` it is the reflection into `dual`-separated `cover`-sheaves.
pub fn closure_in_double_dual(
    cover: &LtTopology,
    dual_top: &LtTopology,
    x: &Presheaf,
    budget: &Budget,
) -> Result<CoreSheafification, SheafifyError> {
    let base = x.base().clone();
    let oj = OmegaJ::new(dual_top);
    let omega = &oj.presheaf;
    let dual = dualize(&oj, x, budget)?;
    let dual_cards = dual.object.cards().to_vec();
    let etas: Vec<Vec<PresheafMap>> =
        base.objects().map(|c| (0..x.card(c)).map(|e| eta_vector(x, &dual, c, e)).collect()).collect();
    let image_vectors: Vec<Vec<PresheafMap>> =
        etas.iter().map(|col| col.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect()).collect();
    let image = vector_presheaf(&base, &dual_cards, &image_vectors)?;
    let quotient =
        PresheafMap::from_fn(x, |c, e| image_vectors[c].binary_search(&etas[c][e]).expect("η(x) is in im η"));
    let mut closure: Vec<BTreeSet<PresheafMap>> = Vec::with_capacity(base.n_objects());
    let mut seen = 0usize;
    for c in base.objects() {
        let mut found = BTreeSet::new();
        for s in cover.covering_sieves(c) {
            let arrows = sieve_arrows(&base, c, s);
            for fam in matching_families(&image, c, s) {
                seen += 1;
                if seen > budget.max_results {
                    return Err(BudgetExceeded::new("amalgamations", budget.max_results, seen).into());
                }
                let member = |k: usize| &image_vectors[base.src(k)][fam[arrows.binary_search(&k).expect("k in S")]];
                let mut comp = Vec::with_capacity(base.n_objects());
                for d in base.objects() {
                    let n = dual_cards[d];
                    let mut col = Vec::with_capacity(base.hom(d, c).len() * n);
                    for &g in base.hom(d, c) {
                        let pulled: Vec<usize> =
                            base.arrows_into(d).filter(|&k| s >> base.comp(g, k) & 1 == 1).collect();
                        for phi in 0..n {
                            // t(g, φ) restricts along k ∈ g*S to x_(g∘k)(id, Ω^X(k) φ)
                            let wants: Vec<(usize, Elem)> = pulled
                                .iter()
                                .map(|&k| {
                                    let e = base.src(k);
                                    let v = member(base.comp(g, k));
                                    let at = base.hom_pos(base.id(e)) * dual_cards[e] + dual.object.res(k, phi);
                                    (k, v.comp[e][at])
                                })
                                .collect();
                            let candidates: Vec<Elem> = (0..omega.card(d))
                                .filter(|&w| wants.iter().all(|&(k, v)| omega.res(k, w) == v))
                                .collect();
                            if candidates.len() != 1 {
                                return Err(SheafifyError::Amalgamation {
                                    object: c,
                                    sieve: s,
                                    arrow: g,
                                    candidates: candidates.len(),
                                });
                            }
                            col.push(candidates[0]);
                        }
                    }
                    comp.push(col);
                }
                found.insert(PresheafMap { comp });
            }
        }
        closure.push(found);
    }
    let vectors: Vec<Vec<PresheafMap>> = closure.into_iter().map(|s| s.into_iter().collect()).collect();
    let object = vector_presheaf(&base, &dual_cards, &vectors)?;
    let unit = PresheafMap::from_fn(x, |c, e| vectors[c].binary_search(&etas[c][e]).expect("im η lies in its closure"));
    Ok(CoreSheafification { object, unit, image, quotient, vectors })
}

pub fn sheafify_via_core(j: &LtTopology, x: &Presheaf, budget: &Budget) -> Result<CoreSheafification, SheafifyError> {
    closure_in_double_dual(j, j, x, budget)
}

/// The unique map `a → b` under `x` along two units, if it exists and is
/// an isomorphism.
pub fn iso_under(
    x: &Presheaf,
    a: &Presheaf,
    unit_a: &PresheafMap,
    b: &Presheaf,
    unit_b: &PresheafMap,
    budget: &Budget,
) -> Result<Option<PresheafMap>, BudgetExceeded> {
    if a.cards() != b.cards() {
        return Ok(None);
    }
    let mut search = HomSearch::new(a, b).injective().budget(budget);
    for c in x.base().objects() {
        for e in 0..x.card(c) {
            search = search.fix(c, unit_a.at(c, e), unit_b.at(c, e));
        }
    }
    Ok(search.first()?.filter(|f| f.is_iso(b) && unit_a.then(f) == *unit_b))
}

/// Both constructions of the sheafification and the iso between them.
#[derive(Debug, Clone)]
pub struct SheafifyComparison {
    pub core: CoreSheafification,
    pub plus: Sheafification,
    pub iso: Option<PresheafMap>,
}

pub fn sheafify_both(j: &LtTopology, x: &Presheaf, budget: &Budget) -> Result<SheafifyComparison, SheafifyError> {
    let core = sheafify_via_core(j, x, budget)?;
    let plus = sheafify_oracle(j, x, budget)?;
    let iso = iso_under(x, &core.object, &core.unit, &plus.object, &plus.unit, budget)?;
    Ok(SheafifyComparison { core, plus, iso })
}

/// The unique `a f: a X → a Y` with `a f ∘ η_X = η_Y ∘ f`, found by search.
pub fn extend_along_unit(
    x: &Presheaf,
    ax: &Presheaf,
    unit_x: &PresheafMap,
    ay: &Presheaf,
    unit_y: &PresheafMap,
    f: &PresheafMap,
    budget: &Budget,
) -> Result<Vec<PresheafMap>, BudgetExceeded> {
    let mut search = HomSearch::new(ax, ay).budget(budget);
    for c in x.base().objects() {
        for e in 0..x.card(c) {
            search = search.fix(c, unit_x.at(c, e), unit_y.at(c, f.at(c, e)));
        }
    }
    search.collect(2)
}

/// `f⁺⁺` for the oracle, from the two plus stages of each side.
pub fn plus_plus_map(
    f: &PresheafMap,
    first: (&PlusConstruction, &PlusConstruction),
    second: (&PlusConstruction, &PlusConstruction),
) -> PresheafMap {
    let f1 = plus_map(f, first.0, first.1);
    plus_map(&f1, second.0, second.1)
}

/// Both sheafifications of every presheaf in `xs`, compared by an iso under
/// each presheaf; with `with_maps`, the isos are also checked to be natural
/// along every map between members of `xs`.
pub fn sheafify_agreement(
    j: &LtTopology,
    xs: &[Presheaf],
    with_maps: bool,
    budget: &Budget,
) -> Result<Report, SheafifyError> {
    let mut r = Report::new();
    let label = |i: usize| format!("presheaf #{i} with carriers {:?}", xs[i].cards());
    let mut cmps = Vec::with_capacity(xs.len());
    let (mut iso, mut sheaf, mut sep, mut unit) = (None, None, None, None);
    for (i, x) in xs.iter().enumerate() {
        let cmp = sheafify_both(j, x, budget)?;
        if iso.is_none() && cmp.iso.is_none() {
            iso = Some(format!("{}: {}", label(i), describe_mismatch(&cmp.core, &cmp.plus)));
        }
        if sheaf.is_none() && !is_sheaf(j, &cmp.core.object) {
            sheaf = Some(label(i));
        }
        if sep.is_none() && !is_separated(j, &cmp.core.image) {
            sep = Some(label(i));
        }
        if unit.is_none() && is_sheaf(j, x) && !cmp.core.unit.is_iso(&cmp.core.object) {
            unit = Some(label(i));
        }
        cmps.push(cmp);
    }
    r.record_witness("core and plus-plus isomorphic under X", Scope::Exact, iso.clone());
    r.record_witness("core result is a sheaf", Scope::Exact, sheaf);
    r.record_witness("image of the unit is separated", Scope::Exact, sep);
    r.record_witness("unit of a sheaf is iso", Scope::Exact, unit);
    if !with_maps {
        return Ok(r);
    }
    if iso.is_some() {
        r.skip("isos natural along maps", Scope::Exact, "no iso at some object");
        return Ok(r);
    }
    let first: Vec<PlusConstruction> = xs.iter().map(|x| plus_construction(j, x, budget)).collect::<Result<_, _>>()?;
    let second: Vec<PlusConstruction> =
        first.iter().map(|p| plus_construction(j, &p.object, budget)).collect::<Result<_, _>>()?;
    let mut unique = None;
    let mut natural = None;
    'pairs: for (i, x) in xs.iter().enumerate() {
        let (cx, ix) = (&cmps[i], cmps[i].iso.as_ref().expect("checked above"));
        for (k, y) in xs.iter().enumerate() {
            let (cy, iy) = (&cmps[k], cmps[k].iso.as_ref().expect("checked above"));
            for f in HomSearch::new(x, y).budget(budget).collect(usize::MAX)? {
                let af =
                    extend_along_unit(x, &cx.core.object, &cx.core.unit, &cy.core.object, &cy.core.unit, &f, budget)?;
                if af.len() != 1 {
                    unique = Some(format!("map {:?} from #{i} to #{k}: {} extensions", f.comp, af.len()));
                    break 'pairs;
                }
                let oracle = plus_plus_map(&f, (&first[i], &first[k]), (&second[i], &second[k]));
                if af[0].then(iy) != ix.then(&oracle) {
                    natural = Some(format!("map {:?} from #{i} to #{k}", f.comp));
                    break 'pairs;
                }
            }
        }
    }
    r.record_witness("core action on maps is the unique extension", Scope::Exact, unique);
    r.record_witness("isos natural along maps", Scope::Exact, natural);
    Ok(r)
}

/// Describes a failed comparison for reports.
pub fn describe_mismatch(core: &CoreSheafification, plus: &Sheafification) -> String {
    format!("core cards {:?}, plus-plus cards {:?}", core.object.cards(), plus.object.cards())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::presets;
    use crate::lttop::{enumerate_lt_topologies, is_separated, is_sheaf, plus_construction};
    use crate::presheaf::{enumerate_presheaves, find_iso, Omega};
    use alloc::sync::Arc;

    #[test]
    fn core_matches_plus_plus_on_small_bases() {
        let b = Budget::default();
        for c in [presets::terminal(), presets::poset2(), presets::parallel_pair()] {
            let base = Arc::new(c);
            let om = Arc::new(Omega::new(base.clone()).unwrap());
            let xs = enumerate_presheaves(&base, 2, &b).unwrap();
            for j in enumerate_lt_topologies(&om, &b).unwrap() {
                for x in &xs {
                    let cmp = sheafify_both(&j, x, &b).unwrap();
                    assert!(cmp.iso.is_some(), "{}", describe_mismatch(&cmp.core, &cmp.plus));
                    assert!(is_sheaf(&j, &cmp.core.object));
                    assert!(is_separated(&j, &cmp.core.image));
                    if is_sheaf(&j, x) {
                        assert!(cmp.core.unit.is_iso(&cmp.core.object));
                    }
                }
            }
        }
    }

    #[test]
    fn agreement_report_passes_with_maps() {
        let b = Budget::default();
        let base = Arc::new(presets::parallel_pair());
        let om = Arc::new(Omega::new(base.clone()).unwrap());
        let xs = enumerate_presheaves(&base, 2, &b).unwrap();
        for j in enumerate_lt_topologies(&om, &b).unwrap() {
            let r = sheafify_agreement(&j, &xs, true, &b).unwrap();
            assert!(r.all_passed() && r.skipped() == 0, "{:?}", r);
        }
    }

    #[test]
    fn everything_covers_core_is_terminal() {
        let b = Budget::default();
        let base = Arc::new(presets::chain(3));
        let j = LtTopology::everything(Arc::new(Omega::new(base.clone()).unwrap()));
        for x in enumerate_presheaves(&base, 2, &b).unwrap() {
            let a = sheafify_via_core(&j, &x, &b).unwrap();
            assert!(find_iso(&a.object, &Presheaf::terminal(base.clone()), &b).unwrap().is_some());
        }
    }

    #[test]
    fn core_action_on_maps_matches_plus_plus() {
        let b = Budget::default();
        let base = Arc::new(presets::poset2());
        let om = Arc::new(Omega::new(base.clone()).unwrap());
        let xs = enumerate_presheaves(&base, 2, &b).unwrap();
        for j in enumerate_lt_topologies(&om, &b).unwrap() {
            let cores: Vec<_> = xs.iter().map(|x| sheafify_both(&j, x, &b).unwrap()).collect();
            let p1: Vec<_> = xs.iter().map(|x| plus_construction(&j, x, &b).unwrap()).collect();
            let p2: Vec<_> = p1.iter().map(|p| plus_construction(&j, &p.object, &b).unwrap()).collect();
            for (i, x) in xs.iter().enumerate() {
                for (k, y) in xs.iter().enumerate() {
                    for f in HomSearch::new(x, y).collect(usize::MAX).unwrap() {
                        let (cx, cy) = (&cores[i], &cores[k]);
                        let af = extend_along_unit(
                            x,
                            &cx.core.object,
                            &cx.core.unit,
                            &cy.core.object,
                            &cy.core.unit,
                            &f,
                            &b,
                        )
                        .unwrap();
                        assert_eq!(af.len(), 1);
                        let oracle = plus_plus_map(&f, (&p1[i], &p1[k]), (&p2[i], &p2[k]));
                        let via_core = cx.iso.as_ref().unwrap().inverse(&cx.plus.object).unwrap();
                        // a f transported along the isos equals the oracle's f⁺⁺
                        assert_eq!(via_core.then(&af[0]).then(cy.iso.as_ref().unwrap()), oracle);
                    }
                }
            }
        }
    }
}

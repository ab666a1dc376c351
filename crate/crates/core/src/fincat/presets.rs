//! Standard small categories used by fixtures and tests.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use super::category::{CategoryError, FinCategory, MorId, ObjId, RawCategory};

/// One object, one morphism.
pub fn terminal() -> FinCategory {
    discrete(1)
}

/// `n` objects and identities only.
pub fn discrete(n: usize) -> FinCategory {
    let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    FinCategory::from_raw(&RawCategory::with_objects(names)).expect("discrete category")
}

/// Thin category generated by `relation` on `n` objects; the reflexive
/// transitive closure is taken, so preorders are allowed.
pub fn preorder(names: &[&str], relation: &[(ObjId, ObjId)]) -> Result<FinCategory, CategoryError> {
    let n = names.len();
    let mut le = vec![false; n * n];
    for i in 0..n {
        le[i * n + i] = true;
    }
    for &(a, b) in relation {
        if a >= n || b >= n {
            return Err(CategoryError::BadIndex { what: "object", index: a.max(b) });
        }
        le[a * n + b] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if le[i * n + k] && le[k * n + j] {
                    le[i * n + j] = true;
                }
            }
        }
    }
    let mut raw = RawCategory::with_objects(names.iter().copied());
    let mut arrow = vec![usize::MAX; n * n];
    for i in 0..n {
        arrow[i * n + i] = i;
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && le[i * n + j] {
                arrow[i * n + j] = raw.arrow(format!("{}<{}", names[i], names[j]), i, j);
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if le[i * n + j] && le[j * n + k] {
                    raw.compose(arrow[j * n + k], arrow[i * n + j], arrow[i * n + k]);
                }
            }
        }
    }
    FinCategory::from_raw(&raw)
}

/// The ordinal `0 < 1 < … < n-1`.
pub fn chain(n: usize) -> FinCategory {
    let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let rel: Vec<(ObjId, ObjId)> = (1..n).map(|i| (i - 1, i)).collect();
    preorder(&refs, &rel).expect("chain")
}

/// `0 → 1`.
pub fn poset2() -> FinCategory {
    chain(2)
}

/// Two parallel arrows `s, t: a → b`.
pub fn parallel_pair() -> FinCategory {
    let mut raw = RawCategory::with_objects(["a", "b"]);
    raw.arrow("s", 0, 1);
    raw.arrow("t", 0, 1);
    FinCategory::from_raw(&raw).expect("parallel pair")
}

/// `{0,1}²` ordered componentwise.
pub fn diamond() -> FinCategory {
    preorder(&["00", "01", "10", "11"], &[(0, 1), (0, 2), (1, 3), (2, 3)]).expect("diamond")
}

/// `2 × 3` ordered componentwise.
pub fn grid_2x3() -> FinCategory {
    let names = ["00", "01", "02", "10", "11", "12"];
    let rel = [(0, 1), (1, 2), (3, 4), (4, 5), (0, 3), (1, 4), (2, 5)];
    preorder(&names, &rel).expect("grid")
}

/// The diamond lattice with three atoms.
pub fn m3() -> FinCategory {
    preorder(&["0", "a", "b", "c", "1"], &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)]).expect("M3")
}

/// The pentagon lattice.
pub fn n5() -> FinCategory {
    preorder(&["0", "a", "b", "c", "1"], &[(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)]).expect("N5")
}

/// One-object category of a monoid given by its multiplication table;
/// element 0 must be the unit and `table[g][f] = g·f`.
pub fn monoid(names: &[&str], table: &[Vec<usize>]) -> Result<FinCategory, CategoryError> {
    let mut raw = RawCategory { objects: vec![String::from("*")], ..RawCategory::default() };
    for n in names {
        raw.morphisms.push((n.to_string(), 0, 0));
    }
    raw.identities = vec![0];
    for (g, row) in table.iter().enumerate() {
        for (f, &h) in row.iter().enumerate() {
            raw.composites.push((g, f, h));
        }
    }
    FinCategory::from_raw(&raw)
}

/// `{1, e}` with `e·e = e`.
pub fn idempotent_monoid() -> FinCategory {
    monoid(&["1", "e"], &[vec![0, 1], vec![1, 1]]).expect("idempotent monoid")
}

/// Full subcategory of finite sets on sets of the given sizes. A morphism
/// `m → n` is named by its endpoints and value list, e.g. `2>1:[0,0]`.
pub fn finset(sizes: &[usize]) -> FinCategory {
    let n = sizes.len();
    let objects: Vec<String> = sizes
        .iter()
        .enumerate()
        .map(|(i, s)| if sizes.iter().filter(|&&t| t == *s).count() > 1 { format!("{s}_{i}") } else { format!("{s}") })
        .collect();
    let mut morphisms = Vec::new();
    let mut tables: Vec<Vec<usize>> = Vec::new();
    let mut identities = vec![0; n];
    for a in 0..n {
        for b in 0..n {
            for values in all_functions(sizes[a], sizes[b]) {
                if a == b && values.iter().enumerate().all(|(i, &v)| i == v) {
                    identities[a] = morphisms.len();
                }
                morphisms.push((format!("{}>{}:{}", objects[a], objects[b], fmt_list(&values)), a, b));
                tables.push(values);
            }
        }
    }
    let find = |a: ObjId, b: ObjId, values: &[usize]| -> MorId {
        (0..morphisms.len())
            .find(|&k| morphisms[k].1 == a && morphisms[k].2 == b && tables[k] == values)
            .expect("function present")
    };
    let compose = |g: MorId, f: MorId| -> MorId {
        let values: Vec<usize> = tables[f].iter().map(|&x| tables[g][x]).collect();
        find(morphisms[f].1, morphisms[g].2, &values)
    };
    FinCategory::from_fn(objects.clone(), morphisms.clone(), identities, compose).expect("finset")
}

fn fmt_list(v: &[usize]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(","))
}

/// All functions `{0..m} → {0..n}` in lexicographic order of value lists.
pub fn all_functions(m: usize, n: usize) -> Vec<Vec<usize>> {
    if m == 0 {
        return vec![Vec::new()];
    }
    if n == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut cur = vec![0; m];
    loop {
        out.push(cur.clone());
        let mut i = m;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] < n {
                break;
            }
            cur[i] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        assert_eq!(terminal().n_morphisms(), 1);
        assert_eq!(poset2().n_morphisms(), 3);
        assert_eq!(chain(3).n_morphisms(), 6);
        assert_eq!(chain(6).n_morphisms(), 21);
        assert_eq!(parallel_pair().n_morphisms(), 4);
        assert_eq!(diamond().n_morphisms(), 9);
        assert_eq!(grid_2x3().n_morphisms(), 18);
        assert_eq!(m3().n_morphisms(), 12);
        assert_eq!(n5().n_morphisms(), 13);
        assert_eq!(finset(&[0, 1, 2]).n_morphisms(), 11);
        assert_eq!(finset(&[1, 2]).n_morphisms(), 8);
    }

    #[test]
    fn finset_mono_epi() {
        let c = finset(&[1, 2]);
        let collapse = c.find_morphism("2>1:[0,0]").unwrap();
        assert!(c.is_epi(collapse));
        assert!(!c.is_mono(collapse));
        let swap = c.find_morphism("2>2:[1,0]").unwrap();
        assert!(c.is_iso(swap));
    }
}

//! s-torsion pairs: verification of the three defining conditions,
//! canonical torsion triangles, star membership and exhaustive
//! enumeration.
//!
//! Subcategories are add-closures of sets of indecomposable labels. Star
//! membership is decided by a bounded search: candidate end terms range
//! over multisets whose signed classes sum to the class of the middle and
//! whose total dimension does not exceed the middle's homology dimension.
//! A miss is reported together with the exhausted cap, so a capped search
//! is never mistaken for a proof of absence.

use serde_json::{json, Value};

use crate::exactlin::{Field, FieldElem};
use crate::excat::{ExtElem, ExtTriangle, ObjectExpr, Presentation};
use crate::par;
use crate::{Error, Result};

/// An ordered pair of label subsets (t_set, f_set), each standing for its
/// add-closure; the zero object belongs to every add-closure. Items are
/// kept sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubcatPair {
    t_items: Vec<usize>,
    f_items: Vec<usize>,
}

impl SubcatPair {
    pub fn new(p: &Presentation, t: Vec<usize>, f: Vec<usize>) -> Result<SubcatPair> {
        let k = p.num_objects();
        for &i in t.iter().chain(f.iter()) {
            if i >= k {
                return Err(Error::input(format!(
                    "label index {i} out of range for a presentation with {k} objects"
                )));
            }
        }
        let mut t = t;
        let mut f = f;
        t.sort_unstable();
        t.dedup();
        f.sort_unstable();
        f.dedup();
        Ok(SubcatPair {
            t_items: t,
            f_items: f,
        })
    }

    pub fn from_labels<S: AsRef<str>>(p: &Presentation, t: &[S], f: &[S]) -> Result<SubcatPair> {
        let resolve = |side: &[S]| -> Result<Vec<usize>> {
            side.iter().map(|s| p.index_of(s.as_ref())).collect()
        };
        SubcatPair::new(p, resolve(t)?, resolve(f)?)
    }

    pub fn t_items(&self) -> &[usize] {
        &self.t_items
    }

    pub fn f_items(&self) -> &[usize] {
        &self.f_items
    }

    pub fn t_labels(&self, p: &Presentation) -> Vec<String> {
        self.t_items
            .iter()
            .map(|&i| p.label(i).to_string())
            .collect()
    }

    pub fn f_labels(&self, p: &Presentation) -> Vec<String> {
        self.f_items
            .iter()
            .map(|&i| p.label(i).to_string())
            .collect()
    }

    /// The reversed pair (f_set, t_set), as matched by a dualized
    /// presentation (labels keep their indices under dualize).
    pub fn swapped(&self) -> SubcatPair {
        SubcatPair {
            t_items: self.f_items.clone(),
            f_items: self.t_items.clone(),
        }
    }

    pub fn to_json(&self, p: &Presentation) -> Value {
        json!({ "T": self.t_labels(p), "F": self.f_labels(p) })
    }

    pub fn from_json(p: &Presentation, doc: &Value) -> Result<SubcatPair> {
        let obj = doc
            .as_object()
            .ok_or_else(|| Error::input("pair document must be a JSON object"))?;
        let read = |key: &str| -> Result<Vec<usize>> {
            let arr = obj
                .get(key)
                .and_then(Value::as_array)
                .ok_or_else(|| Error::input(format!("pair document needs an array at {key}")))?;
            arr.iter()
                .map(|v| {
                    let s = v
                        .as_str()
                        .ok_or_else(|| Error::input(format!("non-string label under {key}")))?;
                    p.index_of(s)
                })
                .collect()
        };
        SubcatPair::new(p, read("T")?, read("F")?)
    }

    fn validate(&self, p: &Presentation) -> Result<()> {
        let k = p.num_objects();
        if self.t_items.iter().chain(&self.f_items).any(|&i| i >= k) {
            return Err(Error::input(
                "pair refers to labels outside this presentation",
            ));
        }
        Ok(())
    }
}

/// One candidate conflation shape for a fixed middle object: end-term
/// multisets plus the first delta (in scan order) whose realization has
/// exactly that middle. Coordinates carry leading coefficient one; cones
/// of proportional classes are isomorphic, so nothing is lost.
#[derive(Debug)]
pub(crate) struct TriangleEntry {
    pub(crate) t_items: Vec<usize>,
    pub(crate) f_items: Vec<usize>,
    pub(crate) coords: Vec<FieldElem>,
}

/// Per object: every in-cap conflation shape with that middle, in
/// lexicographic (t_items, f_items) order. Built once per presentation
/// and shared by all star queries.
#[derive(Debug)]
pub(crate) struct TriangleTable {
    pub(crate) entries: Vec<Vec<TriangleEntry>>,
}

pub(crate) fn triangle_table(p: &Presentation) -> &TriangleTable {
    p.triangle_cache.get_or_init(|| build_table(p))
}

fn build_table(p: &Presentation) -> TriangleTable {
    let k = p.num_objects();
    let dims: Vec<usize> = (0..k)
        .map(|i| p.total_dim(&ObjectExpr::single(i)))
        .collect();
    let classes: Vec<Vec<i64>> = (0..k).map(|i| p.k0_class(&ObjectExpr::single(i))).collect();
    let entries = (0..k)
        .map(|x| {
            let cap = dims[x];
            let mut out = Vec::new();
            for t in multisets(&dims, cap) {
                let dim_t: usize = t.iter().map(|&i| dims[i]).sum();
                for f in multisets(&dims, cap - dim_t) {
                    if !class_sum_matches(&classes, &t, &f, &classes[x]) {
                        continue;
                    }
                    if let Some(coords) = first_working_delta(p, x, &t, &f) {
                        out.push(TriangleEntry {
                            t_items: t.clone(),
                            f_items: f,
                            coords,
                        });
                    }
                }
            }
            out
        })
        .collect();
    TriangleTable { entries }
}

/// All multisets of label indices (as nondecreasing vectors) with total
/// dimension at most `cap`, in lexicographic order starting from the
/// empty multiset.
fn multisets(dims: &[usize], cap: usize) -> Vec<Vec<usize>> {
    fn rec(
        dims: &[usize],
        cap: usize,
        start: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        for i in start..dims.len() {
            if dims[i] <= cap {
                cur.push(i);
                out.push(cur.clone());
                rec(dims, cap - dims[i], i, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = vec![Vec::new()];
    rec(dims, cap, 0, &mut Vec::new(), &mut out);
    out
}

fn class_sum_matches(classes: &[Vec<i64>], t: &[usize], f: &[usize], target: &[i64]) -> bool {
    let mut acc = vec![0i64; target.len()];
    for &i in t.iter().chain(f) {
        for (a, b) in acc.iter_mut().zip(&classes[i]) {
            *a += b;
        }
    }
    acc == target
}

fn first_working_delta(
    p: &Presentation,
    x: usize,
    t: &[usize],
    f: &[usize],
) -> Option<Vec<FieldElem>> {
    let a = ObjectExpr::from_indices(t.to_vec());
    let c = ObjectExpr::from_indices(f.to_vec());
    let d = p.e_pairs(&c, &a).len();
    let mut found = None;
    scan_coords(p.field(), d, |coords| {
        let delta = ExtElem {
            c: c.clone(),
            a: a.clone(),
            coords: coords.to_vec(),
        };
        match p.middle_of(&delta) {
            Some(items) if items == [x] => {
                found = Some(coords.to_vec());
                true
            }
            _ => false,
        }
    });
    found
}

/// Visits coordinate vectors in canonical order: the zero vector, then
/// every vector with leading coefficient one, lexicographically. Stops as
/// soon as `test` returns true.
fn scan_coords(field: Field, d: usize, mut test: impl FnMut(&[FieldElem]) -> bool) {
    let q = field.characteristic();
    let mut coords = vec![field.zero(); d];
    if test(&coords) {
        return;
    }
    for lead in (0..d).rev() {
        for c in coords.iter_mut() {
            *c = field.zero();
        }
        coords[lead] = field.one();
        loop {
            if test(&coords) {
                return;
            }
            let mut pos = d;
            let mut carried = true;
            while carried && pos > lead + 1 {
                pos -= 1;
                let next = coords[pos].0 + 1;
                if next < q {
                    coords[pos] = FieldElem(next);
                    carried = false;
                } else {
                    coords[pos] = field.zero();
                }
            }
            if carried {
                break;
            }
        }
    }
}

fn member_flags(k: usize, items: &[usize]) -> Vec<bool> {
    let mut flags = vec![false; k];
    for &i in items {
        flags[i] = true;
    }
    flags
}

/// Searches for a conflation T' -> x -> F' with T' in add t_set and F' in
/// add f_set, returning the first candidate in canonical order, realized.
/// `None` means no candidate exists within the dimension cap.
pub fn in_star(p: &Presentation, x: usize, pair: &SubcatPair) -> Result<Option<ExtTriangle>> {
    p.require_full("in_star")?;
    pair.validate(p)?;
    let k = p.num_objects();
    if x >= k {
        return Err(Error::input(format!("object index {x} out of range")));
    }
    let table = triangle_table(p);
    let t_in = member_flags(k, &pair.t_items);
    let f_in = member_flags(k, &pair.f_items);
    for entry in &table.entries[x] {
        if entry.t_items.iter().all(|&i| t_in[i]) && entry.f_items.iter().all(|&j| f_in[j]) {
            let delta = ExtElem {
                c: ObjectExpr::from_indices(entry.f_items.clone()),
                a: ObjectExpr::from_indices(entry.t_items.clone()),
                coords: entry.coords.clone(),
            };
            let tri = p.realize_extension(&delta)?;
            debug_assert_eq!(tri.b.items(), [x], "table middle must match realization");
            return Ok(Some(tri));
        }
    }
    Ok(None)
}

/// The canonical torsion triangle of x. For a verified pair the end-term
/// multisets are unique, so canonical order only breaks ties among
/// isomorphic deltas.
pub fn torsion_triangle(p: &Presentation, x: usize, pair: &SubcatPair) -> Result<ExtTriangle> {
    in_star(p, x, pair)?.ok_or_else(|| {
        Error::precondition(format!(
            "{} is not a torsion object for this pair",
            p.label(x)
        ))
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CondStatus {
    Pass,
    Fail,
    /// Not decidable at this tier: dims-only presentations cannot realize
    /// conflations, so the star condition is left unchecked.
    Unchecked,
}

/// Outcome of checking the three conditions of an s-torsion pair:
/// (1) every object lies in t_set * f_set, (2) morphisms from t_set to
/// f_set vanish, (3) negative extensions from t_set to f_set vanish.
#[derive(Debug, Clone)]
pub struct TorsionReport {
    pub cond1: CondStatus,
    pub cond2: CondStatus,
    pub cond3: CondStatus,
    /// Canonical witness triangle per indecomposable (full tier only).
    pub triangles: Vec<(usize, ExtTriangle)>,
    /// Objects with no conflation within the search cap, with that cap;
    /// decompositions beyond the cap are not examined.
    pub cond1_failures: Vec<(usize, usize)>,
    /// Pairs (t, f) with a nonzero morphism space.
    pub cond2_failures: Vec<(usize, usize)>,
    /// Pairs (t, f) with a nonzero negative extension space.
    pub cond3_failures: Vec<(usize, usize)>,
}

impl TorsionReport {
    pub fn ok(&self) -> bool {
        self.cond1 == CondStatus::Pass
            && self.cond2 == CondStatus::Pass
            && self.cond3 == CondStatus::Pass
    }
}

pub fn verify_s_torsion(p: &Presentation, pair: &SubcatPair) -> Result<TorsionReport> {
    pair.validate(p)?;
    let mut cond2_failures = Vec::new();
    let mut cond3_failures = Vec::new();
    for &t in &pair.t_items {
        for &f in &pair.f_items {
            if p.hom_dim(t, f) != 0 {
                cond2_failures.push((t, f));
            }
            if p.eneg_dim(t, f) != 0 {
                cond3_failures.push((t, f));
            }
        }
    }
    let (cond1, triangles, cond1_failures) = if p.is_full() {
        let mut triangles = Vec::new();
        let mut failures = Vec::new();
        for x in 0..p.num_objects() {
            match in_star(p, x, pair)? {
                Some(tri) => triangles.push((x, tri)),
                None => failures.push((x, p.total_dim(&ObjectExpr::single(x)))),
            }
        }
        let status = if failures.is_empty() {
            CondStatus::Pass
        } else {
            CondStatus::Fail
        };
        (status, triangles, failures)
    } else {
        (CondStatus::Unchecked, Vec::new(), Vec::new())
    };
    Ok(TorsionReport {
        cond1,
        cond2: if cond2_failures.is_empty() {
            CondStatus::Pass
        } else {
            CondStatus::Fail
        },
        cond3: if cond3_failures.is_empty() {
            CondStatus::Pass
        } else {
            CondStatus::Fail
        },
        triangles,
        cond1_failures,
        cond2_failures,
        cond3_failures,
    })
}

/// All s-torsion pairs, ordered lexicographically by t_set. In a valid
/// pair each side is the full co-vanishing set of the other: a conflation
/// whose inflation or deflation vanishes splits, which places the middle
/// inside the opposite side. The search therefore ranges over t_set
/// subsets, attaches the maximal f_set, keeps t_set only when maximal in
/// turn and then decides the star condition from the triangle table.
pub fn enumerate_s_torsion(p: &Presentation) -> Result<Vec<SubcatPair>> {
    enumerate_impl(p, true)
}

/// Sequential variant of `enumerate_s_torsion` with identical output;
/// kept unconditionally for benchmarking against the parallel path.
pub fn enumerate_s_torsion_serial(p: &Presentation) -> Result<Vec<SubcatPair>> {
    enumerate_impl(p, false)
}

fn enumerate_impl(p: &Presentation, parallel: bool) -> Result<Vec<SubcatPair>> {
    p.require_full("enumerate_s_torsion")?;
    let k = p.num_objects();
    if k > 63 {
        return Err(Error::input(format!(
            "enumeration supports at most 63 indecomposables, got {k}"
        )));
    }
    let table = triangle_table(p);
    // block_f[j]: mask of i whose presence in t_set excludes j from f_set;
    // block_t[i]: mask of j whose presence in f_set excludes i from t_set.
    let mut block_f = vec![0u64; k];
    let mut block_t = vec![0u64; k];
    for i in 0..k {
        for j in 0..k {
            if p.hom_dim(i, j) != 0 || p.eneg_dim(i, j) != 0 {
                block_f[j] |= 1 << i;
                block_t[i] |= 1 << j;
            }
        }
    }
    let worker = |range: std::ops::Range<u64>| -> Vec<SubcatPair> {
        let mut out = Vec::new();
        for t_mask in range {
            let mut f_mask = 0u64;
            for j in 0..k {
                if block_f[j] & t_mask == 0 {
                    f_mask |= 1 << j;
                }
            }
            let mut t_max = 0u64;
            for i in 0..k {
                if block_t[i] & f_mask == 0 {
                    t_max |= 1 << i;
                }
            }
            if t_max != t_mask {
                continue;
            }
            let covered = (0..k).all(|x| {
                table.entries[x].iter().any(|e| {
                    e.t_items.iter().all(|&i| t_mask >> i & 1 == 1)
                        && e.f_items.iter().all(|&j| f_mask >> j & 1 == 1)
                })
            });
            if covered {
                out.push(SubcatPair {
                    t_items: bits(t_mask, k),
                    f_items: bits(f_mask, k),
                });
            }
        }
        out
    };
    let total = 1u64 << k;
    let mut pairs: Vec<SubcatPair> = if parallel {
        par::map_vec(chunk_ranges(total), worker)
            .into_iter()
            .flatten()
            .collect()
    } else {
        worker(0..total)
    };
    pairs.sort_by(|a, b| a.t_items.cmp(&b.t_items));
    Ok(pairs)
}

fn bits(mask: u64, k: usize) -> Vec<usize> {
    (0..k).filter(|&i| mask >> i & 1 == 1).collect()
}

fn chunk_ranges(total: u64) -> Vec<std::ops::Range<u64>> {
    let chunks = 256u64.min(total.max(1));
    (0..chunks)
        .map(|c| {
            let lo = (total as u128 * c as u128 / chunks as u128) as u64;
            let hi = (total as u128 * (c + 1) as u128 / chunks as u128) as u64;
            lo..hi
        })
        .collect()
}

//! Extriangulated categories with negative first extensions, presented on a
//! finite set of indecomposable objects.
//!
//! A presentation stores the object labels, the dimension tables of Hom, E
//! and E^{-1} on label pairs, and (in the full tier) a realization binding
//! every label to a shifted interval in an ambient derived category of a
//! linearly oriented type-A quiver. Built-in instances:
//!
//! * `build_module_category(n)`: the abelian category of A_n modules
//!   (E = Ext^1, E^{-1} = 0);
//! * `build_extended_category(n, m)`: the m-extended module category, the
//!   additive hull of modules shifted by 0..m-1 inside the bounded derived
//!   category, with `E = Hom(-, -[1])` and `E^{-1} = Hom(-, -[-1])`;
//! * `product`: finite products with vanishing cross terms;
//! * `dualize`: the opposite category, presented by rebinding every label to
//!   its reflected interval so that all chain-level machinery keeps working
//!   on the rebound realization (tables transpose as a consequence).
//!
//! The dims tier (file-loaded tables without realization) answers vanishing
//! queries only; realization-dependent operations return capability errors.

mod chain;
mod check;
pub mod io;

pub use chain::{basis_triangles, InflationCheck};
pub use check::{check_negative_structure, NegCheckReport, NegFinding};

use crate::derived::{
    generator_chain_map, hom_shift_dim, stalk, ChainMap, HomSpace, PerfectComplex, ShiftedInterval,
};
use crate::exactlin::{Field, FieldElem, Matrix};
use crate::repkernel::{all_intervals, interval_label, Interval};
use crate::{Error, Result};
use std::collections::BTreeMap;
use std::sync::OnceLock;

/// One ambient factor of a presentation: the quiver size n, the shift window
/// m (objects carry shifts 0..m-1), a label prefix (empty for single-factor
/// instances), and whether the factor is dualized (labels bound to reflected
/// intervals).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorInfo {
    pub prefix: String,
    pub n: usize,
    pub m: usize,
    pub dual: bool,
}

impl FactorInfo {
    /// Interval the label (iv, s) is bound to under this factor's duality
    /// convention. Reflection sends (a, b) to (n+1-b, n+1-a) and shift s to
    /// m-1-s; applying it twice is the identity.
    fn bind(&self, named: ShiftedInterval) -> ShiftedInterval {
        if !self.dual {
            return named;
        }
        let iv = Interval {
            a: self.n + 1 - named.iv.b,
            b: self.n + 1 - named.iv.a,
        };
        ShiftedInterval::new(iv, self.m as i32 - 1 - named.shift)
    }
}

/// Direct sum of indecomposables: a sorted multiset of label indices. The
/// empty multiset is the zero object.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ObjectExpr {
    items: Vec<usize>,
}

impl ObjectExpr {
    pub fn zero() -> ObjectExpr {
        ObjectExpr { items: Vec::new() }
    }

    pub fn from_indices(mut items: Vec<usize>) -> ObjectExpr {
        items.sort_unstable();
        ObjectExpr { items }
    }

    pub fn single(i: usize) -> ObjectExpr {
        ObjectExpr { items: vec![i] }
    }

    pub fn items(&self) -> &[usize] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// True when every summand lies in the given label set.
    pub fn within(&self, set: &[usize]) -> bool {
        self.items.iter().all(|i| set.contains(i))
    }
}

/// Morphism between object expressions: one coefficient per summand pair,
/// relative to the canonical generator of each (at most one-dimensional)
/// Hom space. Entry (r, c) may be nonzero only when Hom from source summand
/// c to target summand r is nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    pub source: ObjectExpr,
    pub target: ObjectExpr,
    pub coeff: Matrix,
}

/// Element of E(c, a): coefficients over the pairs of summands (one from c,
/// one from a) whose E entry is nonzero, in lexicographic (c-position,
/// a-position) order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtElem {
    pub c: ObjectExpr,
    pub a: ObjectExpr,
    pub coords: Vec<FieldElem>,
}

/// A conflation a -> b -> c realizing the extension delta in E(c, a).
#[derive(Debug, Clone)]
pub struct ExtTriangle {
    pub a: ObjectExpr,
    pub b: ObjectExpr,
    pub c: ObjectExpr,
    pub x: Morphism,
    pub y: Morphism,
    pub delta: ExtElem,
}

/// Canonical generator bookkeeping for one ordered object pair: the chain
/// map, the hom space it lives in, and its class coordinate there (used to
/// convert arbitrary chain-map classes into generator-basis coefficients).
struct GenData {
    map: ChainMap,
    space: HomSpace,
    unit: FieldElem,
}

/// Lazily built chain-level data of a full presentation.
struct GenTables {
    stalks: Vec<PerfectComplex>,
    /// (i, j) with hom(i, j) = 1: generator of Hom(x_i, x_j).
    hom_gen: BTreeMap<(usize, usize), GenData>,
    /// (c, a) with E(c, a) = 1: generator of Hom(x_c, x_a[1]).
    e_gen: BTreeMap<(usize, usize), GenData>,
    /// Structure constants: class(g_{jk} . g_{ij}) = st(i,j,k) * class(g_{ik}).
    st: BTreeMap<(usize, usize, usize), FieldElem>,
}

/// Finite presentation of an extriangulated category with negative first
/// extensions. Immutable after construction; queries are read-only.
pub struct Presentation {
    field: Field,
    kind_tag: String,
    factors: Vec<FactorInfo>,
    labels: Vec<String>,
    index: BTreeMap<String, usize>,
    /// Per object: owning factor and bound shifted interval (full tier only).
    real: Vec<(usize, ShiftedInterval)>,
    hom: Vec<Vec<usize>>,
    e: Vec<Vec<usize>>,
    eneg: Vec<Vec<usize>>,
    gens: OnceLock<GenTables>,
    pub(crate) triangle_cache: OnceLock<crate::torsion::TriangleTable>,
}

impl Clone for Presentation {
    fn clone(&self) -> Presentation {
        Presentation {
            field: self.field,
            kind_tag: self.kind_tag.clone(),
            factors: self.factors.clone(),
            labels: self.labels.clone(),
            index: self.index.clone(),
            real: self.real.clone(),
            hom: self.hom.clone(),
            e: self.e.clone(),
            eneg: self.eneg.clone(),
            gens: OnceLock::new(),
            triangle_cache: OnceLock::new(),
        }
    }
}

impl PartialEq for Presentation {
    fn eq(&self, other: &Presentation) -> bool {
        self.field == other.field
            && self.kind_tag == other.kind_tag
            && self.factors == other.factors
            && self.labels == other.labels
            && self.real == other.real
            && self.hom == other.hom
            && self.e == other.e
            && self.eneg == other.eneg
    }
}

impl std::fmt::Debug for Presentation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Presentation")
            .field("kind", &self.kind_tag)
            .field("field_char", &self.field.characteristic())
            .field("objects", &self.labels.len())
            .finish()
    }
}

/// The abelian module category of the A_n quiver: E = Ext^1, E^{-1} = 0.
pub fn build_module_category(field: Field, n: usize) -> Presentation {
    let mut p = build_extended_category(field, n, 1);
    p.kind_tag = "module".into();
    p
}

/// The m-extended module category: interval modules shifted by 0..m-1.
pub fn build_extended_category(field: Field, n: usize, m: usize) -> Presentation {
    assert!(n >= 1, "quiver must have at least one vertex");
    assert!(m >= 1, "shift window must be nonempty");
    let factor = FactorInfo {
        prefix: String::new(),
        n,
        m,
        dual: false,
    };
    Presentation::from_factors(field, "extended", vec![factor])
}

impl Presentation {
    /// Builds the full-tier presentation determined by a list of factors.
    /// Objects are all (interval, shift) pairs of each factor in canonical
    /// name order (factor, then shift, then interval), bound through each
    /// factor's duality convention; tables come from the closed-form
    /// dimension rules of the ambient derived category.
    fn from_factors(field: Field, kind_tag: &str, factors: Vec<FactorInfo>) -> Presentation {
        let mut labels = Vec::new();
        let mut real = Vec::new();
        for (fi, fac) in factors.iter().enumerate() {
            for s in 0..fac.m as i32 {
                for iv in all_intervals(fac.n) {
                    let named = ShiftedInterval::new(iv, s);
                    labels.push(format!("{}{}", fac.prefix, named.label(fac.n)));
                    real.push((fi, fac.bind(named)));
                }
            }
        }
        Presentation::from_parts(field, kind_tag, factors, labels, real)
    }

    fn from_parts(
        field: Field,
        kind_tag: &str,
        factors: Vec<FactorInfo>,
        labels: Vec<String>,
        real: Vec<(usize, ShiftedInterval)>,
    ) -> Presentation {
        assert_eq!(labels.len(), real.len());
        let k = labels.len();
        let mut index = BTreeMap::new();
        for (i, l) in labels.iter().enumerate() {
            let prev = index.insert(l.clone(), i);
            assert!(prev.is_none(), "duplicate label {l}");
        }
        let dim = |i: usize, j: usize, t: i32| -> usize {
            let (fi, xi) = &real[i];
            let (fj, xj) = &real[j];
            if fi != fj {
                0
            } else {
                hom_shift_dim(xi, xj, t)
            }
        };
        let hom = (0..k)
            .map(|i| (0..k).map(|j| dim(i, j, 0)).collect())
            .collect();
        let e = (0..k)
            .map(|i| (0..k).map(|j| dim(i, j, 1)).collect())
            .collect();
        let eneg = (0..k)
            .map(|i| (0..k).map(|j| dim(i, j, -1)).collect())
            .collect();
        Presentation {
            field,
            kind_tag: kind_tag.to_string(),
            factors,
            labels,
            index,
            real,
            hom,
            e,
            eneg,
            gens: OnceLock::new(),
            triangle_cache: OnceLock::new(),
        }
    }

    /// Dims-tier presentation from explicit tables (no realization).
    pub(crate) fn from_tables(
        field: Field,
        labels: Vec<String>,
        hom: Vec<Vec<usize>>,
        e: Vec<Vec<usize>>,
        eneg: Vec<Vec<usize>>,
    ) -> Result<Presentation> {
        let k = labels.len();
        let mut index = BTreeMap::new();
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::input(format!("duplicate label {l}")));
            }
        }
        for t in [&hom, &e, &eneg] {
            if t.len() != k || t.iter().any(|row| row.len() != k) {
                return Err(Error::input("table shape does not match object count"));
            }
        }
        Ok(Presentation {
            field,
            kind_tag: "dims".into(),
            factors: Vec::new(),
            labels,
            index,
            real: Vec::new(),
            hom,
            e,
            eneg,
            gens: OnceLock::new(),
            triangle_cache: OnceLock::new(),
        })
    }

    /// The opposite category: every factor is marked dual and every label is
    /// rebound to its reflected interval; tables are rebuilt from the new
    /// realization (and end up transposed). Applying dualize twice returns a
    /// presentation equal to the original.
    pub fn dualize(&self) -> Result<Presentation> {
        self.require_full("dualize")?;
        let factors: Vec<FactorInfo> = self
            .factors
            .iter()
            .map(|f| FactorInfo {
                dual: !f.dual,
                ..f.clone()
            })
            .collect();
        let real: Vec<(usize, ShiftedInterval)> = self
            .real
            .iter()
            .map(|&(fi, x)| {
                let fac = &self.factors[fi];
                let iv = Interval {
                    a: fac.n + 1 - x.iv.b,
                    b: fac.n + 1 - x.iv.a,
                };
                (fi, ShiftedInterval::new(iv, fac.m as i32 - 1 - x.shift))
            })
            .collect();
        Ok(Presentation::from_parts(
            self.field,
            &self.kind_tag,
            factors,
            self.labels.clone(),
            real,
        ))
    }

    /// The zero category: no objects, every table empty.
    pub fn empty(field: Field) -> Presentation {
        Presentation::from_parts(field, "empty", Vec::new(), Vec::new(), Vec::new())
    }

    /// Product with vanishing cross terms. Labels of each part are prefixed;
    /// factors are concatenated.
    pub fn product(parts: &[(&str, &Presentation)]) -> Result<Presentation> {
        let Some(((_, first), _)) = parts.split_first() else {
            return Err(Error::input("product needs at least one part"));
        };
        let field = first.field;
        let mut factors = Vec::new();
        let mut labels = Vec::new();
        let mut real = Vec::new();
        for (prefix, p) in parts {
            p.require_full("product")?;
            if p.field != field {
                return Err(Error::input("product parts must share the field"));
            }
            let offset = factors.len();
            for f in &p.factors {
                factors.push(FactorInfo {
                    prefix: format!("{prefix}{}", f.prefix),
                    ..f.clone()
                });
            }
            for (l, &(fi, x)) in p.labels.iter().zip(&p.real) {
                labels.push(format!("{prefix}{l}"));
                real.push((offset + fi, x));
            }
        }
        Ok(Presentation::from_parts(
            field, "product", factors, labels, real,
        ))
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn kind_tag(&self) -> &str {
        &self.kind_tag
    }

    pub fn is_full(&self) -> bool {
        !self.real.is_empty() || self.labels.is_empty()
    }

    pub(crate) fn require_full(&self, op: &'static str) -> Result<()> {
        if self.is_full() {
            Ok(())
        } else {
            Err(Error::Capability { op })
        }
    }

    pub fn factors(&self) -> &[FactorInfo] {
        &self.factors
    }

    pub fn num_objects(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::input(format!("unknown label {label}")))
    }

    pub fn hom_dim(&self, i: usize, j: usize) -> usize {
        self.hom[i][j]
    }

    /// dim E(c, a): extensions of c by a (conflations a -> b -> c).
    pub fn e_dim(&self, c: usize, a: usize) -> usize {
        self.e[c][a]
    }

    /// dim E^{-1}(c, a).
    pub fn eneg_dim(&self, c: usize, a: usize) -> usize {
        self.eneg[c][a]
    }

    pub fn realization(&self, i: usize) -> Result<(usize, ShiftedInterval)> {
        self.require_full("realization")?;
        Ok(self.real[i])
    }

    /// Index of the object bound to the given factor and shifted interval,
    /// when it exists in the window.
    pub(crate) fn object_by_realization(&self, fi: usize, x: ShiftedInterval) -> Option<usize> {
        self.real.iter().position(|&(f, y)| f == fi && y == x)
    }

    /// Display name of an arbitrary shifted interval in a factor (also for
    /// objects outside the shift window, which carry no label).
    pub fn display_shifted(&self, fi: usize, x: ShiftedInterval) -> String {
        let fac = &self.factors[fi];
        // under duality the name of a bound interval is its pre-image
        let named = fac.bind(x);
        format!("{}{}", fac.prefix, named.label(fac.n))
    }

    /// X is projective iff its E row vanishes.
    pub fn is_projective(&self, i: usize) -> bool {
        self.e[i].iter().all(|&d| d == 0)
    }

    pub fn projectives(&self) -> Vec<usize> {
        (0..self.num_objects())
            .filter(|&i| self.is_projective(i))
            .collect()
    }

    /// K_0 class of an expression: signed dimension vectors, concatenated
    /// over factors.
    pub fn k0_class(&self, expr: &ObjectExpr) -> Vec<i64> {
        let sizes: Vec<usize> = self.factors.iter().map(|f| f.n).collect();
        let offsets: Vec<usize> = sizes
            .iter()
            .scan(0, |acc, &n| {
                let o = *acc;
                *acc += n;
                Some(o)
            })
            .collect();
        let total: usize = sizes.iter().sum();
        let mut out = vec![0i64; total];
        for &i in expr.items() {
            let (fi, x) = self.real[i];
            for (v, c) in x.k0_class(self.factors[fi].n).into_iter().enumerate() {
                out[offsets[fi] + v] += c;
            }
        }
        out
    }

    /// Total k-dimension of the underlying objects of an expression.
    pub fn total_dim(&self, expr: &ObjectExpr) -> usize {
        expr.items()
            .iter()
            .map(|&i| self.real[i].1.total_dim())
            .sum()
    }

    pub fn parse_expr(&self, text: &str) -> Result<ObjectExpr> {
        let t = text.trim();
        if t.is_empty() || t == "0" {
            return Ok(ObjectExpr::zero());
        }
        let mut items = Vec::new();
        for part in t.split(['+', ',']) {
            let name = part.trim();
            if name.is_empty() {
                return Err(Error::input(format!(
                    "empty summand in expression {text:?}"
                )));
            }
            items.push(self.index_of(name)?);
        }
        Ok(ObjectExpr::from_indices(items))
    }

    pub fn expr_label(&self, expr: &ObjectExpr) -> String {
        if expr.is_empty() {
            return "0".into();
        }
        let names: Vec<&str> = expr.items().iter().map(|&i| self.label(i)).collect();
        names.join("+")
    }

    pub fn expr_labels(&self, expr: &ObjectExpr) -> Vec<String> {
        expr.items()
            .iter()
            .map(|&i| self.label(i).to_string())
            .collect()
    }

    /// dim Hom between expressions: sum of the table entries over summand
    /// pairs.
    pub fn hom_dim_expr(&self, x: &ObjectExpr, y: &ObjectExpr) -> usize {
        x.items()
            .iter()
            .flat_map(|&i| y.items().iter().map(move |&j| self.hom[i][j]))
            .sum()
    }

    /// Summand pairs ((c-position, a-position)) carrying E coordinates, in
    /// lexicographic order. The coordinate vector of an ExtElem follows this
    /// order.
    pub fn e_pairs(&self, c: &ObjectExpr, a: &ObjectExpr) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (ci, &cl) in c.items().iter().enumerate() {
            for (ai, &al) in a.items().iter().enumerate() {
                if self.e[cl][al] == 1 {
                    out.push((ci, ai));
                }
            }
        }
        out
    }

    pub fn zero_ext(&self, c: &ObjectExpr, a: &ObjectExpr) -> ExtElem {
        let pairs = self.e_pairs(c, a);
        ExtElem {
            c: c.clone(),
            a: a.clone(),
            coords: vec![FieldElem(0); pairs.len()],
        }
    }

    pub fn zero_morphism(&self, source: &ObjectExpr, target: &ObjectExpr) -> Morphism {
        Morphism {
            source: source.clone(),
            target: target.clone(),
            coeff: Matrix::zero(self.field, target.len(), source.len()),
        }
    }

    pub fn identity_morphism(&self, expr: &ObjectExpr) -> Morphism {
        let mut m = self.zero_morphism(expr, expr);
        // equal labels at equal positions; duplicate summands get the
        // diagonal pattern
        for i in 0..expr.len() {
            m.coeff.set(i, i, self.field.one());
        }
        m
    }

    /// Morphism with every allowed coefficient set to 1; between
    /// indecomposables this is the canonical generator.
    pub fn canonical_morphism(&self, source: &ObjectExpr, target: &ObjectExpr) -> Morphism {
        let mut m = self.zero_morphism(source, target);
        for (r, &tl) in target.items().iter().enumerate() {
            for (c, &sl) in source.items().iter().enumerate() {
                if self.hom[sl][tl] == 1 {
                    m.coeff.set(r, c, self.field.one());
                }
            }
        }
        m
    }

    /// Parses "SRC -> TGT" with a coefficient specification: "auto" for the
    /// canonical morphism, or a JSON row-major integer matrix.
    pub fn parse_morphism(&self, literal: &str, map_spec: &str) -> Result<Morphism> {
        let parts: Vec<&str> = literal.split("->").collect();
        if parts.len() != 2 || parts.iter().any(|s| s.trim().is_empty()) {
            return Err(Error::input(format!(
                "morphism literal must be \"SRC -> TGT\" (write the zero object as 0), got {literal:?}"
            )));
        }
        let source = self.parse_expr(parts[0])?;
        let target = self.parse_expr(parts[1])?;
        if map_spec.trim() == "auto" {
            return Ok(self.canonical_morphism(&source, &target));
        }
        let rows: Vec<Vec<i64>> = serde_json::from_str(map_spec)
            .map_err(|e| Error::input(format!("coefficient matrix: {e}")))?;
        if rows.len() != target.len() || rows.iter().any(|r| r.len() != source.len()) {
            return Err(Error::input(format!(
                "coefficient matrix must be {}x{}",
                target.len(),
                source.len()
            )));
        }
        let coeff = Matrix::from_rows(self.field, &rows);
        let m = Morphism {
            source,
            target,
            coeff,
        };
        self.validate_morphism(&m)?;
        Ok(m)
    }

    /// Checks the zero pattern: coefficients only where the Hom table is
    /// nonzero.
    pub fn validate_morphism(&self, f: &Morphism) -> Result<()> {
        if f.coeff.rows != f.target.len() || f.coeff.cols != f.source.len() {
            return Err(Error::input("coefficient shape does not match expressions"));
        }
        for (r, &tl) in f.target.items().iter().enumerate() {
            for (c, &sl) in f.source.items().iter().enumerate() {
                if f.coeff.get(r, c).0 != 0 && self.hom[sl][tl] == 0 {
                    return Err(Error::input(format!(
                        "nonzero coefficient on vanishing Hom({}, {})",
                        self.label(sl),
                        self.label(tl)
                    )));
                }
            }
        }
        Ok(())
    }

    /// g after f, using the precomputed structure constants.
    pub fn compose(&self, f: &Morphism, g: &Morphism) -> Result<Morphism> {
        if f.target != g.source {
            return Err(Error::input(
                "composition mismatch: target of f is not source of g",
            ));
        }
        self.require_full("compose")?;
        let tables = self.gen_tables();
        let mut out = self.zero_morphism(&f.source, &g.target);
        for (l, &zl) in g.target.items().iter().enumerate() {
            for (k, &xk) in f.source.items().iter().enumerate() {
                let mut acc = FieldElem(0);
                for (j, &yj) in f.target.items().iter().enumerate() {
                    let a = f.coeff.get(j, k);
                    let b = g.coeff.get(l, j);
                    if a.0 == 0 || b.0 == 0 {
                        continue;
                    }
                    let Some(&s) = tables.st.get(&(xk, yj, zl)) else {
                        continue;
                    };
                    acc = self.field.add(acc, self.field.mul(self.field.mul(a, b), s));
                }
                out.coeff.set(l, k, acc);
            }
        }
        Ok(out)
    }

    /// Chain-level data, built once per presentation.
    fn gen_tables(&self) -> &GenTables {
        self.gens.get_or_init(|| {
            let field = self.field;
            let k = self.num_objects();
            let stalks: Vec<PerfectComplex> = (0..k)
                .map(|i| {
                    let (fi, x) = self.real[i];
                    stalk(field, self.factors[fi].n, &x)
                })
                .collect();
            let mut hom_gen = BTreeMap::new();
            let mut e_gen = BTreeMap::new();
            for i in 0..k {
                for j in 0..k {
                    let (fi, xi) = self.real[i];
                    let (fj, xj) = self.real[j];
                    if fi != fj {
                        continue;
                    }
                    let n = self.factors[fi].n;
                    if self.hom[i][j] == 1 {
                        let map = generator_chain_map(field, n, &xi, &xj)
                            .expect("hom table entry must have a generator");
                        let space = HomSpace::compute(&stalks[i], &stalks[j]);
                        let unit = space.class_coords(&map)[0];
                        hom_gen.insert((i, j), GenData { map, space, unit });
                    }
                    if self.e[i][j] == 1 {
                        let shifted = xj.shifted(1);
                        let map = generator_chain_map(field, n, &xi, &shifted)
                            .expect("E table entry must have a generator");
                        let space = HomSpace::compute(&stalks[i], &stalks[j].shift(1));
                        let unit = space.class_coords(&map)[0];
                        e_gen.insert((i, j), GenData { map, space, unit });
                    }
                }
            }
            let mut st = BTreeMap::new();
            for (&(i, j), gij) in &hom_gen {
                for l in 0..k {
                    let Some(gjl) = hom_gen.get(&(j, l)) else {
                        continue;
                    };
                    let Some(gil) = hom_gen.get(&(i, l)) else {
                        debug_assert!(
                            gil_composite_vanishes(&gij.map, &gjl.map, &stalks[i], &stalks[l]),
                            "composite must vanish when the target Hom space does"
                        );
                        continue;
                    };
                    let comp = gij.map.then(&gjl.map);
                    let coord = gil.space.class_coords(&comp)[0];
                    let value = field.mul(coord, field.inv(gil.unit));
                    if value.0 != 0 {
                        st.insert((i, j, l), value);
                    }
                }
            }
            GenTables {
                stalks,
                hom_gen,
                e_gen,
                st,
            }
        })
    }

    pub(crate) fn stalk_of(&self, i: usize) -> &PerfectComplex {
        &self.gen_tables().stalks[i]
    }
}

fn gil_composite_vanishes(
    f: &ChainMap,
    g: &ChainMap,
    src: &PerfectComplex,
    tgt: &PerfectComplex,
) -> bool {
    let hs = HomSpace::compute(src, tgt);
    hs.dim() == 0 || hs.is_null_homotopic(&f.then(g))
}

/// Shared label-name helper for building expressions of shifted intervals.
pub fn shifted_label(iv: Interval, shift: i32, n: usize) -> String {
    let core = interval_label(iv, n);
    if shift == 0 {
        core
    } else {
        format!("{core}[{shift}]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Field {
        Field::new(2).unwrap()
    }

    #[test]
    fn module_category_counts() {
        assert_eq!(build_module_category(f2(), 1).num_objects(), 1);
        assert_eq!(build_module_category(f2(), 2).num_objects(), 3);
        assert_eq!(build_module_category(f2(), 3).num_objects(), 6);
        let p = build_module_category(f2(), 2);
        assert_eq!(p.labels(), &["S1", "P1", "S2"]);
    }

    #[test]
    fn extended_category_labels() {
        let p = build_extended_category(f2(), 3, 2);
        assert_eq!(p.num_objects(), 12);
        assert_eq!(
            p.labels(),
            &[
                "I1", "I2", "P1", "S2", "P2", "P3", "I1[1]", "I2[1]", "P1[1]", "S2[1]", "P2[1]",
                "P3[1]"
            ]
        );
    }

    #[test]
    fn module_category_has_no_negative_extensions() {
        let p = build_module_category(f2(), 3);
        for i in 0..p.num_objects() {
            for j in 0..p.num_objects() {
                assert_eq!(p.eneg_dim(i, j), 0);
            }
        }
    }

    #[test]
    fn extended_eneg_frozen_values() {
        let p = build_extended_category(f2(), 3, 2);
        let at = |c: &str, a: &str| p.eneg_dim(p.index_of(c).unwrap(), p.index_of(a).unwrap());
        // E^{-1}(M[1], N) = 0 and E^{-1}(M, N[1]) = Hom(M, N)
        assert_eq!(at("P1", "I2[1]"), 1);
        assert_eq!(at("I2[1]", "P1"), 0);
        assert_eq!(at("I2[1]", "I2"), 0);
        for x in p.labels() {
            for y in p.labels() {
                let (i, j) = (p.index_of(x).unwrap(), p.index_of(y).unwrap());
                let (si, sj) = (
                    p.realization(i).unwrap().1.shift,
                    p.realization(j).unwrap().1.shift,
                );
                if si == sj {
                    assert_eq!(p.eneg_dim(i, j), 0, "equal shifts: {x}, {y}");
                }
            }
        }
    }

    #[test]
    fn extended_with_m1_matches_module_tables() {
        let pm = build_module_category(f2(), 3);
        let pe = build_extended_category(f2(), 3, 1);
        assert_eq!(pm.hom, pe.hom);
        assert_eq!(pm.e, pe.e);
        assert_eq!(pm.eneg, pe.eneg);
    }

    #[test]
    fn projectives_of_module_category() {
        let p = build_module_category(f2(), 3);
        let projs: Vec<&str> = p.projectives().iter().map(|&i| p.label(i)).collect();
        assert_eq!(projs, vec!["P1", "P2", "P3"]);
    }

    #[test]
    fn projectives_balance_negative_extensions() {
        // E^{-1}(-, projective) = 0 in every built-in instance
        for (n, m) in [(2, 1), (3, 2), (2, 3)] {
            let p = build_extended_category(f2(), n, m);
            for q in p.projectives() {
                for x in 0..p.num_objects() {
                    assert_eq!(p.eneg_dim(x, q), 0, "E^-1({}, {})", p.label(x), p.label(q));
                }
            }
        }
    }

    #[test]
    fn dualize_transposes_tables_and_is_involutive() {
        let p = build_extended_category(f2(), 3, 2);
        let d = p.dualize().unwrap();
        for i in 0..p.num_objects() {
            for j in 0..p.num_objects() {
                assert_eq!(p.hom_dim(i, j), d.hom_dim(j, i));
                assert_eq!(p.e_dim(i, j), d.e_dim(j, i));
                assert_eq!(p.eneg_dim(i, j), d.eneg_dim(j, i));
            }
        }
        let dd = d.dualize().unwrap();
        assert_eq!(dd, p);
    }

    #[test]
    fn dualize_rebinds_realizations() {
        let p = build_module_category(f2(), 2).dualize().unwrap();
        // label I1... n=2 names are S1, P1, S2; S1 = (1,1) reflects to (2,2)
        let i = p.index_of("S1").unwrap();
        assert_eq!(
            p.realization(i).unwrap().1,
            ShiftedInterval::new(Interval { a: 2, b: 2 }, 0)
        );
        // displaying the bound interval recovers the label
        let (fi, x) = p.realization(i).unwrap();
        assert_eq!(p.display_shifted(fi, x), "S1");
    }

    #[test]
    fn product_has_vanishing_cross_terms() {
        let a = build_module_category(f2(), 1);
        let c = build_module_category(f2(), 2);
        let b = Presentation::product(&[("A.", &a), ("C.", &c)]).unwrap();
        assert_eq!(b.num_objects(), 4);
        assert_eq!(b.labels(), &["A.P1", "C.S1", "C.P1", "C.S2"]);
        let ap = b.index_of("A.P1").unwrap();
        for l in ["C.S1", "C.P1", "C.S2"] {
            let i = b.index_of(l).unwrap();
            assert_eq!(b.hom_dim(ap, i), 0);
            assert_eq!(b.hom_dim(i, ap), 0);
            assert_eq!(b.e_dim(i, ap), 0);
        }
        // within-factor entries survive
        let s2 = b.index_of("C.S2").unwrap();
        let p1 = b.index_of("C.P1").unwrap();
        assert_eq!(b.hom_dim(s2, p1), 1);
    }

    #[test]
    fn expr_parse_and_display() {
        let p = build_extended_category(f2(), 3, 2);
        let e = p.parse_expr("P3[1]+P1[1]+I1[1]").unwrap();
        assert_eq!(e.len(), 3);
        // canonical order: shift ascending, then interval
        assert_eq!(p.expr_label(&e), "I1[1]+P1[1]+P3[1]");
        assert_eq!(p.parse_expr("0").unwrap(), ObjectExpr::zero());
        assert!(p.parse_expr("Q7").is_err());
        // comma-separated form accepted
        assert_eq!(p.parse_expr("P3[1], P1[1]").unwrap().len(), 2);
    }

    #[test]
    fn composition_structure_constants() {
        let p = build_module_category(f2(), 3);
        let s2 = ObjectExpr::single(p.index_of("S2").unwrap());
        let p1 = ObjectExpr::single(p.index_of("P1").unwrap());
        let i2 = ObjectExpr::single(p.index_of("I2").unwrap());
        // S2 -> I2 -> I1 compose to zero (kernel-killing), while
        // P1 -> I2 -> I1 composes to the canonical P1 -> I1
        let i1 = ObjectExpr::single(p.index_of("I1").unwrap());
        let g1 = p.canonical_morphism(&s2, &i2);
        let g2 = p.canonical_morphism(&i2, &i1);
        let z = p.compose(&g1, &g2).unwrap();
        assert!(z.coeff.is_zero(), "S2 -> I2 -> I1 must vanish");
        let h1 = p.canonical_morphism(&p1, &i2);
        let h2 = p.compose(&h1, &g2).unwrap();
        assert_eq!(h2, p.canonical_morphism(&p1, &i1));
    }

    #[test]
    fn identity_is_neutral_for_composition() {
        let p = build_extended_category(f2(), 3, 2);
        let x = p.parse_expr("P1+S2[1]").unwrap();
        let y = p.parse_expr("I1+I2[1]").unwrap();
        let f = p.canonical_morphism(&x, &y);
        let idx = p.identity_morphism(&x);
        let idy = p.identity_morphism(&y);
        assert_eq!(p.compose(&idx, &f).unwrap(), f);
        assert_eq!(p.compose(&f, &idy).unwrap(), f);
    }

    #[test]
    fn morphism_literal_parsing() {
        let p = build_extended_category(f2(), 3, 2);
        let f = p.parse_morphism("P1 -> I1", "auto").unwrap();
        assert_eq!(f.coeff.get(0, 0), p.field().one());
        let z = p.parse_morphism("0 -> P3[1]", "auto").unwrap();
        assert!(z.source.is_empty());
        assert!(p.parse_morphism("P1 -> ", "auto").is_err());
        // explicit matrix with a disallowed entry is rejected
        assert!(p.parse_morphism("S2 -> P3", "[[1]]").is_err());
    }

    #[test]
    fn dims_tier_refuses_realization_ops() {
        let p = Presentation::from_tables(
            f2(),
            vec!["X".into()],
            vec![vec![1]],
            vec![vec![0]],
            vec![vec![0]],
        )
        .unwrap();
        assert!(!p.is_full());
        assert!(matches!(p.realization(0), Err(Error::Capability { .. })));
        assert!(p.dualize().is_err());
    }
}

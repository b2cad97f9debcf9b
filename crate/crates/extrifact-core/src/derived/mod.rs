//! Perfect complexes over the linearly oriented A_n path algebra and the
//! chain-level calculus on them: shifts, cones, minimization, homology,
//! hom spaces modulo homotopy, and explicit splitting equivalences.
//!
//! A complex is stored cohomologically: `diff(i): C^i -> C^{i+1}`. Terms are
//! lists of projectives, each named by its start vertex (`P_a = Interval(a, n)`).
//! Since every Hom space between indecomposable projectives is 0 or 1
//! dimensional with a fixed canonical generator (identity on the support
//! overlap, and canonical generators compose to canonical generators),
//! differentials and chain maps are plain coefficient matrices subject to a
//! zero pattern: the entry for `P_src -> P_tgt` may be nonzero only when
//! `tgt <= src`.
//!
//! A shifted interval `x[s]` has homology `x` in cohomological degree `-s`;
//! its minimal complex is the shifted projective resolution
//! `P_{b+1} -> P_a` (one term when b == n).

mod homology;
mod homspace;
mod minimize;
mod split;

pub use homology::{decompose_perfect, homology_rep};
pub use homspace::{generator_chain_map, HomSpace};
pub use minimize::{is_minimal, minimize_with_maps};
pub use split::{split, Splitting};

use crate::exactlin::{Field, FieldElem, Matrix};
use crate::repkernel::{ext_dim, hom_dim, interval_label, Interval};
use std::collections::BTreeMap;
use std::fmt;

/// Object of the bounded derived category: interval module shifted by `[s]`.
/// Orders by (shift, a, b), the canonical label order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ShiftedInterval {
    pub shift: i32,
    pub iv: Interval,
}

impl ShiftedInterval {
    pub fn new(iv: Interval, shift: i32) -> ShiftedInterval {
        ShiftedInterval { shift, iv }
    }

    pub fn module(iv: Interval) -> ShiftedInterval {
        ShiftedInterval { shift: 0, iv }
    }

    pub fn shifted(&self, by: i32) -> ShiftedInterval {
        ShiftedInterval {
            shift: self.shift + by,
            iv: self.iv,
        }
    }

    /// Total k-dimension of the underlying module.
    pub fn total_dim(&self) -> usize {
        self.iv.len()
    }

    /// Class in K_0 = Z^n: (-1)^shift times the dimension vector.
    pub fn k0_class(&self, n: usize) -> Vec<i64> {
        let sign = if self.shift.rem_euclid(2) == 0 { 1 } else { -1 };
        self.iv
            .dim_vec(n)
            .iter()
            .map(|&d| sign * d as i64)
            .collect()
    }

    pub fn label(&self, n: usize) -> String {
        let core = interval_label(self.iv, n);
        if self.shift == 0 {
            core
        } else {
            format!("{core}[{}]", self.shift)
        }
    }
}

/// dim `Hom(x, y[t])` in the derived category of the hereditary algebra:
/// hom_dim at total degree 0, ext_dim at total degree 1, 0 otherwise.
pub fn hom_shift_dim(x: &ShiftedInterval, y: &ShiftedInterval, t: i32) -> usize {
    match y.shift + t - x.shift {
        0 => hom_dim(x.iv, y.iv),
        1 => ext_dim(x.iv, y.iv).0,
        _ => 0,
    }
}

/// Bounded complex of projectives over A_n. Terms hold start vertices of
/// indecomposable projective summands; `diffs[k]` maps term k to term k+1.
/// Boundary degrees with empty terms are trimmed on construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerfectComplex {
    pub n: usize,
    pub field: Field,
    min_deg: i32,
    terms: Vec<Vec<usize>>,
    diffs: Vec<Matrix>,
}

impl PerfectComplex {
    pub fn new(
        n: usize,
        field: Field,
        min_deg: i32,
        terms: Vec<Vec<usize>>,
        diffs: Vec<Matrix>,
    ) -> PerfectComplex {
        assert_eq!(diffs.len(), terms.len().saturating_sub(1));
        for (k, d) in diffs.iter().enumerate() {
            assert_eq!(d.rows, terms[k + 1].len(), "diff {k} rows");
            assert_eq!(d.cols, terms[k].len(), "diff {k} cols");
        }
        let c = PerfectComplex {
            n,
            field,
            min_deg,
            terms,
            diffs,
        };
        c.assert_valid();
        c.normalized()
    }

    pub fn zero(n: usize, field: Field) -> PerfectComplex {
        PerfectComplex {
            n,
            field,
            min_deg: 0,
            terms: Vec::new(),
            diffs: Vec::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|t| t.is_empty())
    }

    /// Degree range [min, max] with nonempty support, or None for zero.
    pub fn deg_range(&self) -> Option<(i32, i32)> {
        if self.terms.is_empty() {
            None
        } else {
            Some((self.min_deg, self.min_deg + self.terms.len() as i32 - 1))
        }
    }

    pub fn term(&self, d: i32) -> &[usize] {
        let idx = d - self.min_deg;
        if idx < 0 || idx as usize >= self.terms.len() {
            &[]
        } else {
            &self.terms[idx as usize]
        }
    }

    /// Differential C^d -> C^{d+1}, zero-shaped outside the stored range.
    pub fn diff(&self, d: i32) -> Matrix {
        let idx = d - self.min_deg;
        if idx >= 0 && (idx as usize) < self.diffs.len() {
            self.diffs[idx as usize].clone()
        } else {
            Matrix::zero(self.field, self.term(d + 1).len(), self.term(d).len())
        }
    }

    fn assert_valid(&self) {
        for (k, d) in self.diffs.iter().enumerate() {
            for r in 0..d.rows {
                for c in 0..d.cols {
                    if d.get(r, c).0 != 0 {
                        assert!(
                            self.terms[k + 1][r] <= self.terms[k][c],
                            "entry outside hom zero pattern"
                        );
                    }
                }
            }
        }
        for k in 0..self.diffs.len().saturating_sub(1) {
            assert!(
                self.diffs[k + 1].mul(&self.diffs[k]).is_zero(),
                "d^2 != 0 at degree index {k}"
            );
        }
    }

    /// Trims empty boundary degrees; the zero complex is stored canonically.
    fn normalized(mut self) -> PerfectComplex {
        while self.terms.first().is_some_and(|t| t.is_empty()) {
            self.terms.remove(0);
            if !self.diffs.is_empty() {
                self.diffs.remove(0);
            }
            self.min_deg += 1;
        }
        while self.terms.last().is_some_and(|t| t.is_empty()) {
            self.terms.pop();
            self.diffs.pop();
        }
        if self.terms.is_empty() {
            self.min_deg = 0;
            self.diffs.clear();
        }
        self
    }

    /// Shift by s: `(C[s])^i = C^{i+s}`, differential scaled by `(-1)^s`.
    pub fn shift(&self, s: i32) -> PerfectComplex {
        if self.is_zero() {
            return self.clone();
        }
        let diffs = if s.rem_euclid(2) == 0 {
            self.diffs.clone()
        } else {
            self.diffs.iter().map(|d| d.neg()).collect()
        };
        PerfectComplex {
            n: self.n,
            field: self.field,
            min_deg: self.min_deg - s,
            terms: self.terms.clone(),
            diffs,
        }
    }

    /// Total number of projective summands across all terms.
    pub fn total_summands(&self) -> usize {
        self.terms.iter().map(|t| t.len()).sum()
    }
}

impl fmt::Display for PerfectComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.deg_range() {
            None => write!(f, "0"),
            Some((lo, hi)) => {
                let parts: Vec<String> = (lo..=hi)
                    .map(|d| {
                        let names: Vec<String> =
                            self.term(d).iter().map(|&a| format!("P{a}")).collect();
                        format!("[{d}: {}]", names.join("+"))
                    })
                    .collect();
                write!(f, "{}", parts.join(" -> "))
            }
        }
    }
}

/// Minimal complex of `x[s]`: projective resolution P_{b+1} -> P_a of the
/// interval placed so homology sits in cohomological degree -s.
///
/// Defined as the shift of the degree-0 stalk, so that
/// `stalk(x.shifted(s)) == stalk(x).shift(s)` holds on the nose (including
/// the differential signs that `shift` introduces); model-building code
/// relies on that identity.
pub fn stalk(field: Field, n: usize, x: &ShiftedInterval) -> PerfectComplex {
    let iv = x.iv;
    assert!(iv.b <= n, "interval exceeds quiver");
    let module = if iv.b == n {
        PerfectComplex::new(n, field, 0, vec![vec![iv.a]], vec![])
    } else {
        let d = Matrix::from_rows(field, &[vec![1]]);
        PerfectComplex::new(n, field, -1, vec![vec![iv.b + 1], vec![iv.a]], vec![d])
    };
    module.shift(x.shift)
}

/// Chain map between two perfect complexes: one coefficient matrix per
/// degree, subject to the same hom zero pattern as differentials, strictly
/// commuting with the differentials.
#[derive(Debug, Clone)]
pub struct ChainMap {
    pub source: PerfectComplex,
    pub target: PerfectComplex,
    comps: BTreeMap<i32, Matrix>,
}

impl ChainMap {
    pub fn zero(source: &PerfectComplex, target: &PerfectComplex) -> ChainMap {
        ChainMap {
            source: source.clone(),
            target: target.clone(),
            comps: BTreeMap::new(),
        }
    }

    pub fn identity(c: &PerfectComplex) -> ChainMap {
        let mut comps = BTreeMap::new();
        if let Some((lo, hi)) = c.deg_range() {
            for d in lo..=hi {
                let k = c.term(d).len();
                if k > 0 {
                    comps.insert(d, Matrix::identity(c.field, k));
                }
            }
        }
        ChainMap {
            source: c.clone(),
            target: c.clone(),
            comps,
        }
    }

    pub fn new(source: &PerfectComplex, target: &PerfectComplex) -> ChainMap {
        ChainMap::zero(source, target)
    }

    pub fn comp(&self, d: i32) -> Matrix {
        match self.comps.get(&d) {
            Some(m) => m.clone(),
            None => Matrix::zero(
                self.source.field,
                self.target.term(d).len(),
                self.source.term(d).len(),
            ),
        }
    }

    pub fn set_comp(&mut self, d: i32, m: Matrix) {
        assert_eq!(m.rows, self.target.term(d).len());
        assert_eq!(m.cols, self.source.term(d).len());
        if m.is_zero() {
            self.comps.remove(&d);
        } else {
            self.comps.insert(d, m);
        }
    }

    /// Degrees where both source and target have terms.
    fn active_degrees(&self) -> Vec<i32> {
        let Some((slo, shi)) = self.source.deg_range() else {
            return Vec::new();
        };
        let Some((tlo, thi)) = self.target.deg_range() else {
            return Vec::new();
        };
        (slo.max(tlo)..=shi.min(thi)).collect()
    }

    /// Strict commutation with the differentials plus the zero pattern.
    pub fn is_valid(&self) -> bool {
        for d in self.active_degrees() {
            let m = self.comp(d);
            for r in 0..m.rows {
                for c in 0..m.cols {
                    if m.get(r, c).0 != 0 && self.target.term(d)[r] > self.source.term(d)[c] {
                        return false;
                    }
                }
            }
        }
        let lo = self
            .source
            .deg_range()
            .into_iter()
            .chain(self.target.deg_range())
            .map(|(l, _)| l)
            .min();
        let hi = self
            .source
            .deg_range()
            .into_iter()
            .chain(self.target.deg_range())
            .map(|(_, h)| h)
            .max();
        let (Some(lo), Some(hi)) = (lo, hi) else {
            return true;
        };
        for d in lo - 1..=hi {
            let lhs = self.target.diff(d).mul(&self.comp(d));
            let rhs = self.comp(d + 1).mul(&self.source.diff(d));
            if lhs != rhs {
                return false;
            }
        }
        true
    }

    pub fn is_zero_map(&self) -> bool {
        self.comps.values().all(|m| m.is_zero())
    }

    /// g ∘ self (self first, then g).
    pub fn then(&self, g: &ChainMap) -> ChainMap {
        assert_eq!(self.target, g.source, "composition mismatch");
        let mut out = ChainMap::zero(&self.source, &g.target);
        for d in out.active_degrees() {
            out.set_comp(d, g.comp(d).mul(&self.comp(d)));
        }
        out
    }

    pub fn add(&self, other: &ChainMap) -> ChainMap {
        assert_eq!(self.source, other.source);
        assert_eq!(self.target, other.target);
        let mut out = ChainMap::zero(&self.source, &self.target);
        for d in out.active_degrees() {
            out.set_comp(d, self.comp(d).add(&other.comp(d)));
        }
        out
    }

    pub fn sub(&self, other: &ChainMap) -> ChainMap {
        self.add(&other.scale(self.source.field.elem(-1)))
    }

    pub fn scale(&self, s: FieldElem) -> ChainMap {
        let mut out = ChainMap::zero(&self.source, &self.target);
        for (d, m) in &self.comps {
            out.set_comp(*d, m.scale(s));
        }
        out
    }

    /// `f[s]`: same components, reindexed; no sign on chain map components.
    pub fn shift(&self, s: i32) -> ChainMap {
        let mut out = ChainMap::zero(&self.source.shift(s), &self.target.shift(s));
        for (d, m) in &self.comps {
            out.set_comp(*d - s, m.clone());
        }
        out
    }
}

/// Mapping cone data for f: X -> Y. The cone has terms X^{i+1} ++ Y^i
/// (X block first), differential [[-d_X, 0], [f, d_Y]], with the canonical
/// triangle maps `incl: Y -> cone` and `proj: cone -> X[1]`.
pub struct Cone {
    pub complex: PerfectComplex,
    pub incl: ChainMap,
    pub proj: ChainMap,
}

pub fn cone(f: &ChainMap) -> Cone {
    assert!(f.is_valid(), "cone of an invalid chain map");
    let x = &f.source;
    let y = &f.target;
    let field = x.field;
    let n = x.n;
    let lo_opt = [
        x.deg_range().map(|(l, _)| l - 1),
        y.deg_range().map(|(l, _)| l),
    ]
    .into_iter()
    .flatten()
    .min();
    let hi_opt = [
        x.deg_range().map(|(_, h)| h - 1),
        y.deg_range().map(|(_, h)| h),
    ]
    .into_iter()
    .flatten()
    .max();
    let (Some(lo), Some(hi)) = (lo_opt, hi_opt) else {
        return Cone {
            complex: PerfectComplex::zero(n, field),
            incl: ChainMap::zero(y, &PerfectComplex::zero(n, field)),
            proj: ChainMap::zero(&PerfectComplex::zero(n, field), &x.shift(1)),
        };
    };
    let mut terms = Vec::new();
    for d in lo..=hi {
        let mut t: Vec<usize> = x.term(d + 1).to_vec();
        t.extend_from_slice(y.term(d));
        terms.push(t);
    }
    let mut diffs = Vec::new();
    for d in lo..hi {
        let (xs, ys) = (x.term(d + 1).len(), y.term(d).len());
        let (xt, yt) = (x.term(d + 2).len(), y.term(d + 1).len());
        let mut m = Matrix::zero(field, xt + yt, xs + ys);
        let dx = x.diff(d + 1);
        for r in 0..xt {
            for c in 0..xs {
                m.set(r, c, field.neg(dx.get(r, c)));
            }
        }
        let fc = f.comp(d + 1);
        for r in 0..yt {
            for c in 0..xs {
                m.set(xt + r, c, fc.get(r, c));
            }
        }
        let dy = y.diff(d);
        for r in 0..yt {
            for c in 0..ys {
                m.set(xt + r, xs + c, dy.get(r, c));
            }
        }
        diffs.push(m);
    }
    // raw (untrimmed) cone; incl and proj are built against it, then the
    // complex is normalized and the maps re-targeted
    let raw = PerfectComplex {
        n,
        field,
        min_deg: lo,
        terms,
        diffs,
    };
    raw.assert_valid();
    let normal = raw.clone().normalized();
    let mut incl = ChainMap::zero(y, &normal);
    let mut proj = ChainMap::zero(&normal, &x.shift(1));
    for d in lo..=hi {
        let (xs, ys) = (x.term(d + 1).len(), y.term(d).len());
        if normal.term(d).len() != xs + ys {
            // degree trimmed away; both blocks must be empty then
            continue;
        }
        if ys > 0 {
            let mut m = Matrix::zero(field, xs + ys, ys);
            for r in 0..ys {
                m.set(xs + r, r, field.one());
            }
            incl.set_comp(d, m);
        }
        if xs > 0 {
            let mut m = Matrix::zero(field, xs, xs + ys);
            for r in 0..xs {
                m.set(r, r, field.one());
            }
            proj.set_comp(d, m);
        }
    }
    debug_assert!(incl.is_valid());
    debug_assert!(proj.is_valid());
    Cone {
        complex: normal,
        incl,
        proj,
    }
}

/// Direct sum with the block inclusion/projection chain maps.
pub struct DirectSum {
    pub complex: PerfectComplex,
    pub inclusions: Vec<ChainMap>,
    pub projections: Vec<ChainMap>,
}

pub fn direct_sum(n: usize, field: Field, parts: &[PerfectComplex]) -> DirectSum {
    let lo = parts
        .iter()
        .filter_map(|c| c.deg_range().map(|(l, _)| l))
        .min();
    let hi = parts
        .iter()
        .filter_map(|c| c.deg_range().map(|(_, h)| h))
        .max();
    let (Some(lo), Some(hi)) = (lo, hi) else {
        let z = PerfectComplex::zero(n, field);
        return DirectSum {
            complex: z.clone(),
            inclusions: parts.iter().map(|c| ChainMap::zero(c, &z)).collect(),
            projections: parts.iter().map(|c| ChainMap::zero(&z, c)).collect(),
        };
    };
    let mut terms = Vec::new();
    let mut offsets: Vec<Vec<usize>> = vec![Vec::new(); parts.len()];
    for d in lo..=hi {
        let mut t = Vec::new();
        for (k, c) in parts.iter().enumerate() {
            offsets[k].push(t.len());
            t.extend_from_slice(c.term(d));
        }
        terms.push(t);
    }
    let mut diffs = Vec::new();
    for d in lo..hi {
        let rows = terms[(d + 1 - lo) as usize].len();
        let cols = terms[(d - lo) as usize].len();
        let mut m = Matrix::zero(field, rows, cols);
        for (k, c) in parts.iter().enumerate() {
            let dk = c.diff(d);
            let ro = offsets[k][(d + 1 - lo) as usize];
            let co = offsets[k][(d - lo) as usize];
            for r in 0..dk.rows {
                for cc in 0..dk.cols {
                    m.set(ro + r, co + cc, dk.get(r, cc));
                }
            }
        }
        diffs.push(m);
    }
    let raw = PerfectComplex {
        n,
        field,
        min_deg: lo,
        terms,
        diffs,
    };
    raw.assert_valid();
    let complex = raw.normalized();
    let mut inclusions = Vec::new();
    let mut projections = Vec::new();
    for (k, c) in parts.iter().enumerate() {
        let mut inc = ChainMap::zero(c, &complex);
        let mut prj = ChainMap::zero(&complex, c);
        for d in lo..=hi {
            let sz = c.term(d).len();
            if sz == 0 {
                continue;
            }
            let total = complex.term(d).len();
            let off = offsets[k][(d - lo) as usize];
            let mut mi = Matrix::zero(field, total, sz);
            let mut mp = Matrix::zero(field, sz, total);
            for r in 0..sz {
                mi.set(off + r, r, field.one());
                mp.set(r, off + r, field.one());
            }
            inc.set_comp(d, mi);
            prj.set_comp(d, mp);
        }
        debug_assert!(inc.is_valid());
        debug_assert!(prj.is_valid());
        inclusions.push(inc);
        projections.push(prj);
    }
    DirectSum {
        complex,
        inclusions,
        projections,
    }
}

/// Direct sum of the minimal stalk complexes of the given objects, in the
/// given order. This is the standard model every decomposable object is
/// compared against.
pub fn std_complex(field: Field, n: usize, summands: &[ShiftedInterval]) -> DirectSum {
    let parts: Vec<PerfectComplex> = summands.iter().map(|s| stalk(field, n, s)).collect();
    direct_sum(n, field, &parts)
}

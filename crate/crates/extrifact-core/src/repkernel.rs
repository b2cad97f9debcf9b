//! Intervals and quiver representations for the linearly oriented type-A
//! quiver `1 -> 2 -> ... -> n`.
//!
//! Indecomposable modules are the interval modules `Interval(a, b)` (the
//! field k on vertices a..b, identity arrows inside). Projectives are
//! `P_i = Interval(i, n)`, injectives `I_i = Interval(1, i)`, simples
//! `S_i = Interval(i, i)`. Hom and Ext^1 between intervals have closed
//! forms; the module also carries solver-based oracles used by the test
//! suite to validate those closed forms independently.

use crate::error::Error;
use crate::exactlin::{Field, Matrix};
use crate::Result;
use serde::{Deserialize, Serialize};

/// Interval `[a, b]` with `1 <= a <= b`; the ambient `n` is supplied by
/// context and checked where known.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Interval {
    pub a: usize,
    pub b: usize,
}

impl Interval {
    pub fn new(a: usize, b: usize) -> Result<Interval> {
        if a < 1 || b < a {
            return Err(Error::input(format!("invalid interval [{a},{b}]")));
        }
        Ok(Interval { a, b })
    }

    // intervals are nonempty by construction, so no is_empty
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.b - self.a + 1
    }

    pub fn contains(&self, v: usize) -> bool {
        self.a <= v && v <= self.b
    }

    /// Dimension vector over vertices 1..=n.
    pub fn dim_vec(&self, n: usize) -> Vec<usize> {
        (1..=n).map(|v| usize::from(self.contains(v))).collect()
    }
}

/// Canonical display label for an interval inside A_n.
///
/// Precedence: projective name if b == n, else injective name if a == 1,
/// else simple name. For n == 2 the simples keep their S-names (so the
/// three A_2 indecomposables read S1, S2, P1).
pub fn interval_label(iv: Interval, n: usize) -> String {
    if n == 2 && iv.a == iv.b {
        return format!("S{}", iv.a);
    }
    if iv.b == n {
        format!("P{}", iv.a)
    } else if iv.a == 1 {
        format!("I{}", iv.b)
    } else if iv.a == iv.b {
        format!("S{}", iv.a)
    } else {
        format!("M{}_{}", iv.a, iv.b)
    }
}

/// Parses a canonical interval label back; only canonical names are
/// accepted so every interval has exactly one spelling.
pub fn parse_interval_label(s: &str, n: usize) -> Result<Interval> {
    let bad = || Error::input(format!("unknown interval label {s:?} for n={n}"));
    let iv = if let Some(rest) = s.strip_prefix('P') {
        let i: usize = rest.parse().map_err(|_| bad())?;
        Interval::new(i, n)?
    } else if let Some(rest) = s.strip_prefix('I') {
        let i: usize = rest.parse().map_err(|_| bad())?;
        Interval::new(1, i)?
    } else if let Some(rest) = s.strip_prefix('S') {
        let i: usize = rest.parse().map_err(|_| bad())?;
        Interval::new(i, i)?
    } else if let Some(rest) = s.strip_prefix('M') {
        let (a, b) = rest.split_once('_').ok_or_else(bad)?;
        Interval::new(a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?)?
    } else {
        return Err(bad());
    };
    if iv.b > n || interval_label(iv, n) != s {
        return Err(bad());
    }
    Ok(iv)
}

/// All intervals in A_n, in the canonical order (a, b) lexicographic.
pub fn all_intervals(n: usize) -> Vec<Interval> {
    let mut out = Vec::new();
    for a in 1..=n {
        for b in a..=n {
            out.push(Interval { a, b });
        }
    }
    out.sort();
    out
}

/// dim Hom(x, y): 1 iff y.a <= x.a <= y.b <= x.b, else 0.
///
/// The nonzero morphism is the identity on the overlap [x.a, y.b]; sources
/// factor through their tops, so maps go "leftward" in start vertex.
pub fn hom_dim(x: Interval, y: Interval) -> usize {
    usize::from(y.a <= x.a && x.a <= y.b && y.b <= x.b)
}

/// dim Ext^1(x, y) together with the interval summands of the middle term
/// of the nonsplit extension when it exists.
///
/// From the resolution 0 -> P_{x.b+1} -> P_{x.a} -> x -> 0, Ext^1(x, y) is
/// the cokernel of y_{x.a} -> y_{x.b+1}, so it is 1 exactly when
/// x.a < y.a <= x.b + 1 <= y.b (and never bigger). The nonsplit middle is
/// Interval(x.a, y.b) + Interval(y.a, x.b), dropping the second summand
/// when it is empty (the adjacent case y.a == x.b + 1).
pub fn ext_dim(x: Interval, y: Interval) -> (usize, Vec<Interval>) {
    if x.a < y.a && y.a <= x.b + 1 && x.b < y.b {
        let mut middle = vec![Interval { a: x.a, b: y.b }];
        if y.a <= x.b {
            middle.push(Interval { a: y.a, b: x.b });
        }
        (1, middle)
    } else {
        (0, Vec::new())
    }
}

/// Euler form <dim x, dim y> for the linear orientation:
/// sum_i dx_i dy_i - sum_{i<n} dx_i dy_{i+1}.
pub fn euler_form(x: Interval, y: Interval, n: usize) -> i64 {
    let dx = x.dim_vec(n);
    let dy = y.dim_vec(n);
    let mut acc: i64 = 0;
    for i in 0..n {
        acc += (dx[i] * dy[i]) as i64;
    }
    for i in 0..n - 1 {
        acc -= (dx[i] * dy[i + 1]) as i64;
    }
    acc
}

/// Representation of A_n: a space per vertex, a matrix per arrow.
/// `maps[i]` realizes arrow i+1 -> i+2 and has shape `dims[i+1] x dims[i]`.
#[derive(Debug, Clone)]
pub struct QuiverRep {
    pub n: usize,
    pub field: Field,
    pub dims: Vec<usize>,
    pub maps: Vec<Matrix>,
}

impl QuiverRep {
    pub fn new(n: usize, field: Field, dims: Vec<usize>, maps: Vec<Matrix>) -> QuiverRep {
        assert_eq!(dims.len(), n);
        assert_eq!(maps.len(), n.saturating_sub(1));
        for i in 0..maps.len() {
            assert_eq!(maps[i].rows, dims[i + 1], "arrow {i} row count");
            assert_eq!(maps[i].cols, dims[i], "arrow {i} col count");
        }
        QuiverRep {
            n,
            field,
            dims,
            maps,
        }
    }

    pub fn zero(n: usize, field: Field) -> QuiverRep {
        let dims = vec![0; n];
        let maps = (0..n.saturating_sub(1))
            .map(|_| Matrix::zero(field, 0, 0))
            .collect();
        QuiverRep {
            n,
            field,
            dims,
            maps,
        }
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// Block direct sum.
    pub fn direct_sum(&self, other: &QuiverRep) -> QuiverRep {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let dims: Vec<usize> = (0..n).map(|v| self.dims[v] + other.dims[v]).collect();
        let mut maps = Vec::new();
        for i in 0..n.saturating_sub(1) {
            let mut m = Matrix::zero(self.field, dims[i + 1], dims[i]);
            for r in 0..self.dims[i + 1] {
                for c in 0..self.dims[i] {
                    m.set(r, c, self.maps[i].get(r, c));
                }
            }
            for r in 0..other.dims[i + 1] {
                for c in 0..other.dims[i] {
                    m.set(
                        self.dims[i + 1] + r,
                        self.dims[i] + c,
                        other.maps[i].get(r, c),
                    );
                }
            }
            maps.push(m);
        }
        QuiverRep {
            n,
            field: self.field,
            dims,
            maps,
        }
    }
}

/// The interval module as an explicit representation: k on a..=b, identity
/// arrows inside the support.
pub fn interval_rep(field: Field, n: usize, iv: Interval) -> QuiverRep {
    assert!(iv.b <= n);
    let dims = iv.dim_vec(n);
    let mut maps = Vec::new();
    for i in 0..n.saturating_sub(1) {
        let mut m = Matrix::zero(field, dims[i + 1], dims[i]);
        if dims[i] == 1 && dims[i + 1] == 1 {
            m.set(0, 0, field.one());
        }
        maps.push(m);
    }
    QuiverRep {
        n,
        field,
        dims,
        maps,
    }
}

/// Solver oracle: dim Hom(x, y) as the nullity of the commuting-square
/// system. Independent of the closed form; the tests play them against
/// each other.
pub fn rep_hom_oracle(x: &QuiverRep, y: &QuiverRep) -> usize {
    assert_eq!(x.n, y.n);
    let f = x.field;
    let n = x.n;
    // variables: phi_v (y.dims[v] x x.dims[v]), flattened row-major per vertex
    let offsets: Vec<usize> = {
        let mut acc = 0;
        let mut v = Vec::new();
        for i in 0..n {
            v.push(acc);
            acc += y.dims[i] * x.dims[i];
        }
        v
    };
    let total_vars: usize = (0..n).map(|i| y.dims[i] * x.dims[i]).sum();
    let mut rows: Vec<Vec<i64>> = Vec::new();
    for v in 0..n.saturating_sub(1) {
        // phi_{v+1} * Mx_v == My_v * phi_v, entrywise (i, j)
        for i in 0..y.dims[v + 1] {
            for j in 0..x.dims[v] {
                let mut row = vec![0i64; total_vars];
                for k in 0..x.dims[v + 1] {
                    let c = x.maps[v].get(k, j).0 as i64;
                    row[offsets[v + 1] + i * x.dims[v + 1] + k] += c;
                }
                for l in 0..y.dims[v] {
                    let c = y.maps[v].get(i, l).0 as i64;
                    row[offsets[v] + l * x.dims[v] + j] -= c;
                }
                rows.push(row);
            }
        }
    }
    if total_vars == 0 {
        return 0;
    }
    let m = Matrix::from_rows(f, &rows);
    let m = if m.rows == 0 {
        Matrix::zero(f, 0, total_vars)
    } else {
        m
    };
    total_vars - m.rank()
}

/// Solver oracle for dim Ext^1(x, y) via the projective resolution
/// 0 -> P_{b+1} -> P_a -> x -> 0 (no P_{b+1} term when b == n):
/// dim Ext = hom(P_{b+1}, y) - hom(P_a, y) + hom(x, y), all terms computed
/// by `rep_hom_oracle`.
pub fn ext_dim_oracle(field: Field, n: usize, x: Interval, y: Interval) -> usize {
    if x.b == n {
        return 0;
    }
    let yr = interval_rep(field, n, y);
    let pa = interval_rep(field, n, Interval { a: x.a, b: n });
    let pb = interval_rep(field, n, Interval { a: x.b + 1, b: n });
    let xr = interval_rep(field, n, x);
    let h_pb = rep_hom_oracle(&pb, &yr);
    let h_pa = rep_hom_oracle(&pa, &yr);
    let h_x = rep_hom_oracle(&xr, &yr);
    (h_pb + h_x)
        .checked_sub(h_pa)
        .expect("left-exactness of Hom violated")
}

/// Interval multiset of a representation (its barcode), via rank-function
/// inversion: with r(v, w) the rank of the composite map vertex v -> w,
/// mult(a, b) = r(a,b) - r(a-1,b) - r(a,b+1) + r(a-1,b+1).
///
/// This is the longest-first peeling multiset in closed form; the direct
/// sum of the returned intervals is isomorphic to the input, which the test
/// suite confirms against endomorphism-dimension counts.
pub fn decompose_rep(r: &QuiverRep) -> Vec<Interval> {
    let n = r.n;
    // composite[v][w] = rank of map from vertex v+1 to vertex w+1 (0-based)
    let mut rank = vec![vec![0usize; n]; n];
    for v in 0..n {
        let mut comp = Matrix::identity(r.field, r.dims[v]);
        rank[v][v] = r.dims[v];
        for w in v + 1..n {
            comp = r.maps[w - 1].mul(&comp);
            rank[v][w] = comp.rank();
        }
    }
    let rk = |v: isize, w: isize| -> i64 {
        if v < 0 || w >= n as isize {
            0
        } else {
            rank[v as usize][w as usize] as i64
        }
    };
    let mut out = Vec::new();
    for a in 1..=n {
        for b in a..=n {
            let (ai, bi) = (a as isize - 1, b as isize - 1);
            let mult = rk(ai, bi) - rk(ai - 1, bi) - rk(ai, bi + 1) + rk(ai - 1, bi + 1);
            assert!(mult >= 0, "negative multiplicity at [{a},{b}]");
            for _ in 0..mult {
                out.push(Interval { a, b });
            }
        }
    }
    // dimension vectors must add up exactly
    let mut check = vec![0usize; n];
    for iv in &out {
        for v in 0..n {
            check[v] += usize::from(iv.contains(v + 1));
        }
    }
    assert_eq!(check, r.dims, "barcode does not match dimension vector");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Field {
        Field::new(2).unwrap()
    }

    #[test]
    fn labels_follow_convention() {
        // n = 3: the six indecomposables carry the standard names
        let n = 3;
        let named: Vec<String> = all_intervals(n)
            .iter()
            .map(|iv| interval_label(*iv, n))
            .collect();
        assert_eq!(named, vec!["I1", "I2", "P1", "S2", "P2", "P3"]);
        // n = 2 keeps S-names for the simples
        let named2: Vec<String> = all_intervals(2)
            .iter()
            .map(|iv| interval_label(*iv, 2))
            .collect();
        assert_eq!(named2, vec!["S1", "P1", "S2"]);
        // n = 4 has a middle interval with no classical name
        assert_eq!(interval_label(Interval { a: 2, b: 3 }, 4), "M2_3");
    }

    #[test]
    fn labels_round_trip() {
        for n in 1..=5 {
            for iv in all_intervals(n) {
                let s = interval_label(iv, n);
                assert_eq!(parse_interval_label(&s, n).unwrap(), iv);
            }
        }
        assert!(parse_interval_label("S3", 3).is_err()); // canonical name is P3
        assert!(parse_interval_label("Q1", 3).is_err());
        assert!(parse_interval_label("P9", 3).is_err());
    }

    #[test]
    fn hom_frozen_values() {
        let p1 = Interval { a: 1, b: 3 };
        let i2 = Interval { a: 1, b: 2 };
        let s2 = Interval { a: 2, b: 2 };
        assert_eq!(hom_dim(p1, i2), 1); // the AR-quiver arrow P1 -> I2
        assert_eq!(hom_dim(s2, p1), 0);
        assert_eq!(hom_dim(p1, p1), 1);
        assert_eq!(hom_dim(i2, p1), 0);
        assert_eq!(hom_dim(s2, i2), 1); // inclusion S2 -> I2
    }

    #[test]
    fn ext_frozen_values() {
        // 0 -> S2 -> Interval(1,2) -> S1 -> 0 in A_2
        let s1 = Interval { a: 1, b: 1 };
        let s2 = Interval { a: 2, b: 2 };
        assert_eq!(ext_dim(s1, s2), (1, vec![Interval { a: 1, b: 2 }]));
        assert_eq!(ext_dim(s2, s1), (0, Vec::new()));
        // overlapping case: 0 -> P2 -> P1 + S2 -> I2 -> 0 in A_3
        let i2 = Interval { a: 1, b: 2 };
        let p2 = Interval { a: 2, b: 3 };
        assert_eq!(
            ext_dim(i2, p2),
            (1, vec![Interval { a: 1, b: 3 }, Interval { a: 2, b: 2 }])
        );
        // no extension in the other direction
        assert_eq!(ext_dim(p2, i2), (0, Vec::new()));
    }

    #[test]
    fn euler_form_equals_hom_minus_ext() {
        for n in 1..=5 {
            for x in all_intervals(n) {
                for y in all_intervals(n) {
                    let lhs = hom_dim(x, y) as i64 - ext_dim(x, y).0 as i64;
                    assert_eq!(lhs, euler_form(x, y, n), "n={n} x={x:?} y={y:?}");
                }
            }
        }
    }

    #[test]
    fn closed_forms_agree_with_oracles() {
        let f = f2();
        for n in 1..=4 {
            for x in all_intervals(n) {
                for y in all_intervals(n) {
                    let xr = interval_rep(f, n, x);
                    let yr = interval_rep(f, n, y);
                    assert_eq!(
                        rep_hom_oracle(&xr, &yr),
                        hom_dim(x, y),
                        "hom n={n} x={x:?} y={y:?}"
                    );
                    assert_eq!(
                        ext_dim_oracle(f, n, x, y),
                        ext_dim(x, y).0,
                        "ext n={n} x={x:?} y={y:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn oracles_are_field_independent_here() {
        let f3 = Field::new(3).unwrap();
        for x in all_intervals(3) {
            for y in all_intervals(3) {
                let xr = interval_rep(f3, 3, x);
                let yr = interval_rep(f3, 3, y);
                assert_eq!(rep_hom_oracle(&xr, &yr), hom_dim(x, y));
            }
        }
    }

    #[test]
    fn decompose_interval_rep_round_trip() {
        let f = f2();
        for n in 1..=4 {
            for iv in all_intervals(n) {
                let r = interval_rep(f, n, iv);
                assert_eq!(decompose_rep(&r), vec![iv]);
            }
        }
    }

    #[test]
    fn decompose_direct_sums() {
        let f = f2();
        let n = 3;
        let a = interval_rep(f, n, Interval { a: 1, b: 2 });
        let b = interval_rep(f, n, Interval { a: 2, b: 3 });
        let c = interval_rep(f, n, Interval { a: 2, b: 3 });
        let sum = a.direct_sum(&b).direct_sum(&c);
        assert_eq!(
            decompose_rep(&sum),
            vec![
                Interval { a: 1, b: 2 },
                Interval { a: 2, b: 3 },
                Interval { a: 2, b: 3 }
            ]
        );
    }

    #[test]
    fn decompose_nontrivial_basis() {
        let f = f2();
        // dims (1,2,1), arrows x -> (x,0) and (x,y) -> y: splits as
        // Interval(1,2) + Interval(2,3) even though no block structure shows
        let m1 = Matrix::from_rows(f, &[vec![1], vec![0]]);
        let m2 = Matrix::from_rows(f, &[vec![0, 1]]);
        let r = QuiverRep::new(3, f, vec![1, 2, 1], vec![m1, m2]);
        assert_eq!(
            decompose_rep(&r),
            vec![Interval { a: 1, b: 2 }, Interval { a: 2, b: 3 }]
        );
    }

    #[test]
    fn decompose_validates_by_endomorphism_count() {
        let f = f2();
        let n = 4;
        let x = interval_rep(f, n, Interval { a: 1, b: 3 });
        let y = interval_rep(f, n, Interval { a: 2, b: 4 });
        let z = interval_rep(f, n, Interval { a: 2, b: 2 });
        let sum = x.direct_sum(&y).direct_sum(&z);
        let parts = decompose_rep(&sum);
        let expected_end: usize = parts
            .iter()
            .flat_map(|p| parts.iter().map(move |q| hom_dim(*p, *q)))
            .sum();
        assert_eq!(rep_hom_oracle(&sum, &sum), expected_end);
    }

    #[test]
    fn zero_rep_decomposes_empty() {
        let f = f2();
        let r = QuiverRep::zero(3, f);
        assert!(decompose_rep(&r).is_empty());
        assert_eq!(rep_hom_oracle(&r, &r), 0);
    }
}

//! Minimization of perfect complexes by eliminating invertible differential
//! entries, with the homotopy equivalence to and from the minimal model kept
//! explicit. An entry d[r][c] is eliminable when the source and target
//! projectives coincide (the coefficient is then a scalar multiple of the
//! identity map, invertible when nonzero).

use super::{ChainMap, PerfectComplex};
use crate::exactlin::Matrix;

/// Returns (minimal, to_min, from_min) where to_min: c -> minimal and
/// from_min: minimal -> c are mutually inverse homotopy equivalences and
/// minimal has a radical differential (no entry joins equal projectives).
pub fn minimize_with_maps(c: &PerfectComplex) -> (PerfectComplex, ChainMap, ChainMap) {
    let mut cur = c.clone();
    let mut to_min = ChainMap::identity(c);
    let mut from_min = ChainMap::identity(c);
    while let Some((deg, r, col)) = find_eliminable(&cur) {
        let (next, p, i) = eliminate(&cur, deg, r, col);
        to_min = to_min.then(&p);
        from_min = i.then(&from_min);
        cur = next;
    }
    debug_assert!(to_min.is_valid());
    debug_assert!(from_min.is_valid());
    (cur, to_min, from_min)
}

/// First entry (ascending degree, then row, then column) whose source and
/// target projectives coincide and whose coefficient is nonzero.
fn find_eliminable(c: &PerfectComplex) -> Option<(i32, usize, usize)> {
    let (lo, hi) = c.deg_range()?;
    for d in lo..hi {
        let m = c.diff(d);
        for r in 0..m.rows {
            for cc in 0..m.cols {
                if m.get(r, cc).0 != 0 && c.term(d + 1)[r] == c.term(d)[cc] {
                    return Some((d, r, cc));
                }
            }
        }
    }
    None
}

/// Removes summand `col` of degree `deg` and summand `r` of degree `deg+1`,
/// adjusting the neighbouring differentials by the standard change of basis.
/// Returns the reduced complex with the projection and inclusion maps of the
/// homotopy equivalence.
fn eliminate(
    c: &PerfectComplex,
    deg: i32,
    r: usize,
    col: usize,
) -> (PerfectComplex, ChainMap, ChainMap) {
    let field = c.field;
    let d = c.diff(deg);
    let alpha = d.get(r, col);
    let ainv = field.inv(alpha);

    let keep_src: Vec<usize> = (0..d.cols).filter(|&j| j != col).collect();
    let keep_tgt: Vec<usize> = (0..d.rows).filter(|&i| i != r).collect();
    let eps = d.select(&keep_tgt, &keep_src);
    let gamma = d.select(&keep_tgt, &[col]);
    let beta = d.select(&[r], &keep_src);
    let correction = gamma.mul(&beta).scale(ainv);
    let new_mid = eps.sub(&correction);

    let (lo, hi) = c.deg_range().unwrap();
    let mut terms = Vec::new();
    let mut diffs: Vec<Matrix> = Vec::new();
    for dd in lo..=hi {
        let t: Vec<usize> = if dd == deg {
            keep_src.iter().map(|&j| c.term(dd)[j]).collect()
        } else if dd == deg + 1 {
            keep_tgt.iter().map(|&i| c.term(dd)[i]).collect()
        } else {
            c.term(dd).to_vec()
        };
        terms.push(t);
    }
    for dd in lo..hi {
        let m = if dd == deg {
            new_mid.clone()
        } else if dd == deg - 1 {
            let prev = c.diff(dd);
            let all: Vec<usize> = (0..prev.cols).collect();
            prev.select(&keep_src, &all)
        } else if dd == deg + 1 {
            let next = c.diff(dd);
            let all: Vec<usize> = (0..next.rows).collect();
            next.select(&all, &keep_tgt)
        } else {
            c.diff(dd)
        };
        diffs.push(m);
    }
    let raw = PerfectComplex {
        n: c.n,
        field,
        min_deg: lo,
        terms,
        diffs,
    };
    raw.assert_valid();
    let reduced = raw.normalized();

    // projection p: c -> reduced
    //   degree deg:   drop coordinate col
    //   degree deg+1: y_i - gamma_i * ainv * y_r on kept coordinates
    let mut p = ChainMap::zero(c, &reduced);
    // inclusion i: reduced -> c
    //   degree deg:   x -> (x, -ainv * beta x in coordinate col)
    //   degree deg+1: include kept coordinates, zero in coordinate r
    let mut inc = ChainMap::zero(&reduced, c);
    for dd in lo..=hi {
        let old_len = c.term(dd).len();
        let new_len = reduced.term(dd).len();
        if dd == deg {
            let mut mp = Matrix::zero(field, new_len, old_len);
            for (new_i, &old_j) in keep_src.iter().enumerate() {
                mp.set(new_i, old_j, field.one());
            }
            p.set_comp(dd, mp);
            let mut mi = Matrix::zero(field, old_len, new_len);
            for (new_i, &old_j) in keep_src.iter().enumerate() {
                mi.set(old_j, new_i, field.one());
            }
            let neg_row = beta.scale(field.neg(ainv));
            for (new_j, _) in keep_src.iter().enumerate() {
                mi.set(col, new_j, neg_row.get(0, new_j));
            }
            inc.set_comp(dd, mi);
        } else if dd == deg + 1 {
            let mut mp = Matrix::zero(field, new_len, old_len);
            for (new_i, &old_j) in keep_tgt.iter().enumerate() {
                mp.set(new_i, old_j, field.one());
                let corr = field.neg(field.mul(gamma.get(new_i, 0), ainv));
                mp.set(new_i, r, corr);
            }
            p.set_comp(dd, mp);
            let mut mi = Matrix::zero(field, old_len, new_len);
            for (new_i, &old_j) in keep_tgt.iter().enumerate() {
                mi.set(old_j, new_i, field.one());
            }
            inc.set_comp(dd, mi);
        } else if old_len > 0 && new_len == old_len {
            p.set_comp(dd, Matrix::identity(field, old_len));
            inc.set_comp(dd, Matrix::identity(field, old_len));
        }
    }
    debug_assert!(p.is_valid(), "projection not a chain map");
    debug_assert!(inc.is_valid(), "inclusion not a chain map");
    (reduced, p, inc)
}

/// True when no differential entry joins equal projectives.
pub fn is_minimal(c: &PerfectComplex) -> bool {
    find_eliminable(c).is_none()
}

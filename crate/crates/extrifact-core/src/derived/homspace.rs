//! The space of chain maps between two perfect complexes and its quotient by
//! null-homotopic maps. Chain maps are vectorized over the allowed entry
//! positions (degree ascending, then row, then column); strict chain maps are
//! the kernel of the commutation constraints, and homotopies span the
//! subspace to quotient by.

use super::{stalk, ChainMap, PerfectComplex, ShiftedInterval};
use crate::exactlin::{coords_mod_subspace, quotient_basis_cols, Field, FieldElem, Matrix};

/// Hom(X, Y) in the homotopy category, with a fixed basis of strict chain map
/// representatives and coordinate extraction for arbitrary strict maps.
#[derive(Debug, Clone)]
pub struct HomSpace {
    pub source: PerfectComplex,
    pub target: PerfectComplex,
    /// Allowed entry positions (degree, row, col), the vectorization order.
    positions: Vec<(i32, usize, usize)>,
    /// Columns form a basis of the strict chain map space.
    sol_basis: Matrix,
    /// Columns span the null-homotopic subspace (not necessarily a basis).
    htpy_span: Matrix,
    /// Indices into sol_basis columns independent modulo htpy_span.
    class_cols: Vec<usize>,
}

impl HomSpace {
    pub fn compute(x: &PerfectComplex, y: &PerfectComplex) -> HomSpace {
        assert_eq!(x.field, y.field);
        assert_eq!(x.n, y.n);
        let field = x.field;
        let positions = allowed_positions(x, y, 0);
        let nvars = positions.len();

        // strict commutation: for every degree d and every matrix position
        // (i, j) of (target.diff(d) * f(d) - f(d+1) * source.diff(d))
        let mut rows: Vec<Vec<i64>> = Vec::new();
        let degs = constraint_degrees(x, y);
        for &d in &degs {
            let dy = y.diff(d);
            let dx = x.diff(d);
            for i in 0..y.term(d + 1).len() {
                for j in 0..x.term(d).len() {
                    let mut row = vec![0i64; nvars];
                    let mut nontrivial = false;
                    for (k, &(pd, pr, pc)) in positions.iter().enumerate() {
                        let mut coeff = 0u64;
                        if pd == d && pc == j {
                            coeff = field.add(field.elem(coeff as i64), dy.get(i, pr)).0;
                        }
                        if pd == d + 1 && pr == i {
                            let c = field.neg(dx.get(pc, j));
                            coeff = field.add(FieldElem(coeff), c).0;
                        }
                        if coeff != 0 {
                            row[k] = coeff as i64;
                            nontrivial = true;
                        }
                    }
                    if nontrivial {
                        rows.push(row);
                    }
                }
            }
        }
        let constraints = if rows.is_empty() {
            Matrix::zero(field, 0, nvars)
        } else {
            Matrix::from_rows(field, &rows)
        };
        let sol_basis = constraints.kernel_basis();

        // homotopy span: for each allowed entry of a degree -1 map h,
        // vectorize d_Y h + h d_X
        let hpos = allowed_positions_shifted(x, y);
        let mut hcols: Vec<Vec<i64>> = Vec::new();
        for &(hd, hr, hc) in &hpos {
            // h: X^hd -> Y^{hd-1}, elementary at (hr, hc)
            let mut vec = vec![0i64; nvars];
            let dy = y.diff(hd - 1);
            for (k, &(pd, pr, pc)) in positions.iter().enumerate() {
                let mut coeff = FieldElem(0);
                // (d_Y h)(hd) contributes at degree hd, position (pr, hc)
                if pd == hd && pc == hc {
                    coeff = field.add(coeff, dy.get(pr, hr));
                }
                // (h d_X)(hd - 1): h applied after d_X: X^{hd-1} -> Y^{hd-1}
                if pd == hd - 1 && pr == hr {
                    coeff = field.add(coeff, x.diff(hd - 1).get(hc, pc));
                }
                vec[k] = coeff.0 as i64;
            }
            hcols.push(vec);
        }
        let htpy_span = cols_to_matrix(field, nvars, &hcols);
        let class_cols = quotient_basis_cols(&htpy_span, &sol_basis);
        HomSpace {
            source: x.clone(),
            target: y.clone(),
            positions,
            sol_basis,
            htpy_span,
            class_cols,
        }
    }

    /// Dimension of Hom in the homotopy category.
    pub fn dim(&self) -> usize {
        self.class_cols.len()
    }

    pub fn field(&self) -> Field {
        self.source.field
    }

    /// Dimension of the strict chain map space (before the quotient).
    pub fn strict_dim(&self) -> usize {
        self.sol_basis.cols
    }

    /// k-th basis class representative, a strict chain map.
    pub fn basis(&self, k: usize) -> ChainMap {
        let v = self.sol_basis.column(self.class_cols[k]).vectorize();
        self.devectorize(&v)
    }

    fn devectorize(&self, v: &[FieldElem]) -> ChainMap {
        let mut f = ChainMap::zero(&self.source, &self.target);
        let mut by_deg: std::collections::BTreeMap<i32, Matrix> = std::collections::BTreeMap::new();
        for (k, &(d, r, c)) in self.positions.iter().enumerate() {
            if v[k].0 != 0 {
                let m = by_deg.entry(d).or_insert_with(|| {
                    Matrix::zero(
                        self.source.field,
                        self.target.term(d).len(),
                        self.source.term(d).len(),
                    )
                });
                m.set(r, c, v[k]);
            }
        }
        for (d, m) in by_deg {
            f.set_comp(d, m);
        }
        debug_assert!(f.is_valid());
        f
    }

    fn vectorize(&self, f: &ChainMap) -> Vec<FieldElem> {
        let mut v = vec![FieldElem(0); self.positions.len()];
        for (k, &(d, r, c)) in self.positions.iter().enumerate() {
            v[k] = f.comp(d).get(r, c);
        }
        v
    }

    /// Coordinates of the homotopy class of f in the chosen basis. The map
    /// must be a strict chain map between exactly these complexes.
    pub fn class_coords(&self, f: &ChainMap) -> Vec<FieldElem> {
        assert_eq!(f.source, self.source, "class_coords: source mismatch");
        assert_eq!(f.target, self.target, "class_coords: target mismatch");
        if self.dim() == 0 {
            return Vec::new();
        }
        let v = self.vectorize(f);
        let vm = Matrix::column_from(self.source.field, &v);
        let all_rows: Vec<usize> = (0..self.sol_basis.rows).collect();
        let reps = self.sol_basis.select(&all_rows, &self.class_cols);
        coords_mod_subspace(&self.htpy_span, &reps, &vm.column(0))
            .expect("strict chain map must lie in the computed space")
    }

    pub fn is_null_homotopic(&self, f: &ChainMap) -> bool {
        self.class_coords(f).iter().all(|c| c.0 == 0)
    }

    /// Linear combination of the basis classes with the given coordinates.
    pub fn from_coords(&self, coords: &[FieldElem]) -> ChainMap {
        assert_eq!(coords.len(), self.dim());
        let field = self.source.field;
        let mut v = vec![FieldElem(0); self.positions.len()];
        for (k, &c) in coords.iter().enumerate() {
            let col = self.sol_basis.column(self.class_cols[k]).vectorize();
            for (i, &x) in col.iter().enumerate() {
                v[i] = field.add(v[i], field.mul(c, x));
            }
        }
        self.devectorize(&v)
    }
}

/// Allowed positions of a degree-`t` graded map X -> Y: entries (d, r, c)
/// with a canonical generator P_{x_c} -> P_{y_r} available, i.e. y-start <=
/// x-start, at Y-degree d + t... for chain maps t = 0.
fn allowed_positions(x: &PerfectComplex, y: &PerfectComplex, _t: i32) -> Vec<(i32, usize, usize)> {
    let mut out = Vec::new();
    let (Some((slo, shi)), Some((tlo, thi))) = (x.deg_range(), y.deg_range()) else {
        return out;
    };
    for d in slo.max(tlo)..=shi.min(thi) {
        for (r, &yt) in y.term(d).iter().enumerate() {
            for (c, &xt) in x.term(d).iter().enumerate() {
                if yt <= xt {
                    out.push((d, r, c));
                }
            }
        }
    }
    out
}

/// Allowed positions of a homotopy h: X^d -> Y^{d-1}, listed as (d, r, c)
/// with r indexing Y^{d-1} and c indexing X^d.
fn allowed_positions_shifted(x: &PerfectComplex, y: &PerfectComplex) -> Vec<(i32, usize, usize)> {
    let mut out = Vec::new();
    let (Some((slo, shi)), Some((tlo, thi))) = (x.deg_range(), y.deg_range()) else {
        return out;
    };
    for d in slo.max(tlo + 1)..=shi.min(thi + 1) {
        for (r, &yt) in y.term(d - 1).iter().enumerate() {
            for (c, &xt) in x.term(d).iter().enumerate() {
                if yt <= xt {
                    out.push((d, r, c));
                }
            }
        }
    }
    out
}

/// Degrees at which the commutation constraint can be nontrivial.
fn constraint_degrees(x: &PerfectComplex, y: &PerfectComplex) -> Vec<i32> {
    let (Some((slo, shi)), Some((tlo, thi))) = (x.deg_range(), y.deg_range()) else {
        return Vec::new();
    };
    let lo = slo.min(tlo) - 1;
    let hi = shi.max(thi);
    (lo..=hi).collect()
}

fn cols_to_matrix(field: Field, rows: usize, cols: &[Vec<i64>]) -> Matrix {
    let mut m = Matrix::zero(field, rows, cols.len());
    for (j, col) in cols.iter().enumerate() {
        for (i, &v) in col.iter().enumerate() {
            m.set(i, j, field.elem(v));
        }
    }
    m
}

/// Canonical chain map between stalk complexes: None when the hom space
/// vanishes, the identity for equal objects, otherwise the echelon-normalized
/// generator of the one-dimensional space (first vectorized entry scaled
/// to 1). Stalk hom spaces never exceed dimension one.
pub fn generator_chain_map(
    field: Field,
    n: usize,
    x: &ShiftedInterval,
    y: &ShiftedInterval,
) -> Option<ChainMap> {
    let cx = stalk(field, n, x);
    if x == y {
        return Some(ChainMap::identity(&cx));
    }
    let cy = stalk(field, n, y);
    let hs = HomSpace::compute(&cx, &cy);
    match hs.dim() {
        0 => None,
        1 => {
            let f = hs.basis(0);
            // normalize the leading coefficient
            let lead = (hs.vectorize(&f)).into_iter().find(|c| c.0 != 0).unwrap();
            Some(f.scale(field.inv(lead)))
        }
        d => panic!("stalk hom space of dimension {d}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derived::{cone, hom_shift_dim, ShiftedInterval};
    use crate::exactlin::Field;
    use crate::repkernel::{all_intervals, Interval};

    fn si(a: usize, b: usize, s: i32) -> ShiftedInterval {
        ShiftedInterval::new(Interval { a, b }, s)
    }

    #[test]
    fn hom_dims_match_closed_form() {
        let f = Field::new(2).unwrap();
        let n = 3;
        for iv_x in all_intervals(n) {
            for iv_y in all_intervals(n) {
                for sx in [0, 1] {
                    for sy in [0, 1] {
                        let x = ShiftedInterval::new(iv_x, sx);
                        let y = ShiftedInterval::new(iv_y, sy);
                        let hs = HomSpace::compute(&stalk(f, n, &x), &stalk(f, n, &y));
                        assert_eq!(hs.dim(), hom_shift_dim(&x, &y, 0), "dim Hom({x:?}, {y:?})");
                    }
                }
            }
        }
    }

    #[test]
    fn hom_dims_match_over_odd_characteristic() {
        let f = Field::new(7).unwrap();
        let n = 4;
        for iv_x in all_intervals(n) {
            for iv_y in all_intervals(n) {
                let x = ShiftedInterval::new(iv_x, 0);
                for sy in [0, 1] {
                    let y = ShiftedInterval::new(iv_y, sy);
                    let hs = HomSpace::compute(&stalk(f, n, &x), &stalk(f, n, &y));
                    assert_eq!(hs.dim(), hom_shift_dim(&x, &y, 0), "dim Hom({x:?}, {y:?})");
                }
            }
        }
    }

    #[test]
    fn generator_identity_and_normalization() {
        let f = Field::new(5).unwrap();
        let x = si(2, 2, 0);
        let id = generator_chain_map(f, 3, &x, &x).unwrap();
        assert_eq!(id.comp(0), Matrix::identity(f, 1));
        assert_eq!(id.comp(-1), Matrix::identity(f, 1));
        // P1 -> I1 is the canonical projection; leading coefficient 1
        let g = generator_chain_map(f, 3, &si(1, 3, 0), &si(1, 1, 0)).unwrap();
        let lead = (-3..3).map(|d| g.comp(d)).find(|m| !m.is_zero()).unwrap();
        let first = (0..lead.rows)
            .flat_map(|r| (0..lead.cols).map(move |c| (r, c)))
            .map(|(r, c)| lead.get(r, c))
            .find(|v| v.0 != 0)
            .unwrap();
        assert_eq!(first, f.one());
    }

    #[test]
    fn composition_of_generators_has_unit_coefficient_when_nonzero() {
        // I1 -> P2[1] and P2[1] -> S2[1] compose to the generator I1 -> S2[1]
        let f = Field::new(3).unwrap();
        let a = si(1, 1, 0);
        let b = si(2, 3, 1);
        let c = si(2, 2, 1);
        let g1 = generator_chain_map(f, 3, &a, &b).unwrap();
        let g2 = generator_chain_map(f, 3, &b, &c).unwrap();
        let comp = g1.then(&g2);
        let g13 = generator_chain_map(f, 3, &a, &c).unwrap();
        let hs = HomSpace::compute(&g13.source, &g13.target);
        let coords = hs.class_coords(&comp);
        let base = hs.class_coords(&g13);
        assert_eq!(
            coords, base,
            "composite should equal the canonical generator"
        );
    }

    #[test]
    fn null_homotopic_detection() {
        let f = Field::new(2).unwrap();
        // inclusion Y -> cone(id_Y) is null-homotopic since the cone vanishes
        let y = stalk(f, 3, &si(2, 2, 0));
        let id = ChainMap::identity(&y);
        let cn = cone(&id);
        let hs = HomSpace::compute(&y, &cn.complex);
        assert!(hs.is_null_homotopic(&cn.incl));
    }

    #[test]
    fn from_coords_round_trip() {
        let f = Field::new(5).unwrap();
        let x = stalk(f, 4, &si(2, 4, 0));
        let y = stalk(f, 4, &si(1, 3, 0));
        let hs = HomSpace::compute(&x, &y);
        assert_eq!(hs.dim(), 1);
        let g = hs.from_coords(&[f.elem(3)]);
        assert_eq!(hs.class_coords(&g), vec![f.elem(3)]);
    }
}

//! Verification of the long-exact-sequence structure that a negative first
//! extension must satisfy: every conflation a -> b -> c with class delta
//! induces, for every object W, two five-term exact sequences
//!
//! covariant:      E'(W,a) -> E'(W,b) -> E'(W,c) -> C(W,a) -> C(W,b)
//! contravariant:  E'(c,W) -> E'(b,W) -> E'(a,W) -> C(c,W) -> C(b,W)
//!
//! with E' the negative extension; the connecting maps compose with the
//! lowered class. Exactness is verified joint by joint with exact ranks:
//! composite zero plus rank(in) + rank(out) = dim at each interior space.

use super::{ExtTriangle, Presentation};
use crate::derived::{ChainMap, HomSpace};
use crate::exactlin::Matrix;
use crate::Result;

/// One interior joint (or dimension bookkeeping entry) that failed.
#[derive(Debug, Clone)]
pub struct NegFinding {
    pub w: String,
    /// 1 = covariant sequence, 2 = contravariant sequence.
    pub sequence: u8,
    /// 0 = table dimension bookkeeping, 1..=3 = interior joint position.
    pub joint: u8,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct NegCheckReport {
    pub ok: bool,
    pub joints_checked: usize,
    pub failures: Vec<NegFinding>,
}

/// Matrix of the linear map between two hom spaces induced by a chain-map
/// transformation on basis classes.
fn induced_matrix(from: &HomSpace, to: &HomSpace, apply: impl Fn(&ChainMap) -> ChainMap) -> Matrix {
    let field = to.field();
    let mut m = Matrix::zero(field, to.dim(), from.dim());
    for k in 0..from.dim() {
        let img = apply(&from.basis(k));
        for (r, c) in to.class_coords(&img).into_iter().enumerate() {
            m.set(r, k, c);
        }
    }
    m
}

/// Exactness at the space between `min` and `mout`: image of `min` equals
/// kernel of `mout`, tested as composite-zero plus a rank count.
fn exact_at(min: &Matrix, mout: &Matrix, dim: usize) -> std::result::Result<(), String> {
    let comp = mout.mul(min);
    if !comp.is_zero() {
        return Err("consecutive maps do not compose to zero".into());
    }
    let (ri, ro) = (min.rank(), mout.rank());
    if ri + ro != dim {
        return Err(format!("rank {ri} + rank {ro} != dim {dim}"));
    }
    Ok(())
}

/// Verifies both five-term sequences of one realized conflation against
/// every object of the presentation.
pub fn check_negative_structure(p: &Presentation, t: &ExtTriangle) -> Result<NegCheckReport> {
    p.require_full("check_negative_structure")?;
    let x_maps = p.assemble_morphism(&t.x);
    let y_maps = p.assemble_morphism(&t.y);
    let g_maps = p.assemble_ext_lowered(&t.delta);
    let mut failures = Vec::new();
    let mut joints = 0usize;
    for w in 0..p.num_objects() {
        let (fw, _) = p.realization(w)?;
        let wc = p.stalk_of(w).clone();
        let xm = &x_maps[fw];
        let ym = &y_maps[fw];
        let gm = &g_maps[fw];
        let am = &xm.source;
        let bm = &xm.target;
        let cm = &ym.target;
        let mut fail = |seq: u8, joint: u8, detail: String| {
            failures.push(NegFinding {
                w: p.label(w).to_string(),
                sequence: seq,
                joint,
                detail,
            });
        };

        // covariant sequence: Hom(W, -) applied to a[-1] -> b[-1] -> c[-1] -> a -> b
        let v1 = HomSpace::compute(&wc, &am.shift(-1));
        let v2 = HomSpace::compute(&wc, &bm.shift(-1));
        let v3 = HomSpace::compute(&wc, &cm.shift(-1));
        let v4 = HomSpace::compute(&wc, am);
        let v5 = HomSpace::compute(&wc, bm);
        let dims_expected = [
            sum_dim(p, |i| p.eneg_dim(w, i), t.a.items()),
            sum_dim(p, |i| p.eneg_dim(w, i), t.b.items()),
            sum_dim(p, |i| p.eneg_dim(w, i), t.c.items()),
            sum_dim(p, |i| p.hom_dim(w, i), t.a.items()),
            sum_dim(p, |i| p.hom_dim(w, i), t.b.items()),
        ];
        let dims_found = [v1.dim(), v2.dim(), v3.dim(), v4.dim(), v5.dim()];
        joints += 1;
        if dims_expected != dims_found {
            fail(
                1,
                0,
                format!("table dims {dims_expected:?} vs chain dims {dims_found:?}"),
            );
        }
        let xm1 = xm.shift(-1);
        let ym1 = ym.shift(-1);
        let m1 = induced_matrix(&v1, &v2, |f| f.then(&xm1));
        let m2 = induced_matrix(&v2, &v3, |f| f.then(&ym1));
        // connecting map: postcompose with the lowered class c[-1] -> a
        let m3 = induced_matrix(&v3, &v4, |f| f.then(gm));
        let m4 = induced_matrix(&v4, &v5, |f| f.then(xm));
        for (joint, (min, mout, dim)) in [
            (&m1, &m2, v2.dim()),
            (&m2, &m3, v3.dim()),
            (&m3, &m4, v4.dim()),
        ]
        .into_iter()
        .enumerate()
        {
            joints += 1;
            if let Err(e) = exact_at(min, mout, dim) {
                fail(1, joint as u8 + 1, e);
            }
        }

        // contravariant sequence: Hom(-, W) applied to the same conflation,
        // with target shifted down for the negative terms
        let wm1 = wc.shift(-1);
        let u1 = HomSpace::compute(cm, &wm1);
        let u2 = HomSpace::compute(bm, &wm1);
        let u3 = HomSpace::compute(am, &wm1);
        let u4 = HomSpace::compute(cm, &wc);
        let u5 = HomSpace::compute(bm, &wc);
        let dims_expected = [
            sum_dim(p, |i| p.eneg_dim(i, w), t.c.items()),
            sum_dim(p, |i| p.eneg_dim(i, w), t.b.items()),
            sum_dim(p, |i| p.eneg_dim(i, w), t.a.items()),
            sum_dim(p, |i| p.hom_dim(i, w), t.c.items()),
            sum_dim(p, |i| p.hom_dim(i, w), t.b.items()),
        ];
        let dims_found = [u1.dim(), u2.dim(), u3.dim(), u4.dim(), u5.dim()];
        joints += 1;
        if dims_expected != dims_found {
            fail(
                2,
                0,
                format!("table dims {dims_expected:?} vs chain dims {dims_found:?}"),
            );
        }
        let n1 = induced_matrix(&u1, &u2, |f| ym.then(f));
        let n2 = induced_matrix(&u2, &u3, |f| xm.then(f));
        // connecting map: precompose with the lowered class, then shift up
        let n3 = induced_matrix(&u3, &u4, |f| gm.then(f).shift(1));
        let n4 = induced_matrix(&u4, &u5, |f| ym.then(f));
        for (joint, (min, mout, dim)) in [
            (&n1, &n2, u2.dim()),
            (&n2, &n3, u3.dim()),
            (&n3, &n4, u4.dim()),
        ]
        .into_iter()
        .enumerate()
        {
            joints += 1;
            if let Err(e) = exact_at(min, mout, dim) {
                fail(2, joint as u8 + 1, e);
            }
        }
    }
    Ok(NegCheckReport {
        ok: failures.is_empty(),
        joints_checked: joints,
        failures,
    })
}

fn sum_dim(p: &Presentation, f: impl Fn(usize) -> usize, items: &[usize]) -> usize {
    let _ = p;
    items.iter().map(|&i| f(i)).sum()
}

#[cfg(test)]
mod tests {
    use super::super::{basis_triangles, build_extended_category, build_module_category};
    use super::*;
    use crate::exactlin::Field;

    #[test]
    fn module_category_triangles_pass() {
        let p = build_module_category(Field::new(2).unwrap(), 3);
        for t in basis_triangles(&p).unwrap() {
            let rep = check_negative_structure(&p, &t).unwrap();
            assert!(rep.ok, "failures: {:?}", rep.failures);
        }
    }

    #[test]
    fn extended_category_triangles_pass() {
        let p = build_extended_category(Field::new(3).unwrap(), 2, 2);
        for t in basis_triangles(&p).unwrap() {
            let rep = check_negative_structure(&p, &t).unwrap();
            assert!(rep.ok, "failures: {:?}", rep.failures);
        }
    }

    #[test]
    fn split_triangles_pass_too() {
        let p = build_extended_category(Field::new(2).unwrap(), 3, 2);
        let c = p.parse_expr("I2[1]").unwrap();
        let a = p.parse_expr("P2").unwrap();
        let t = p.realize_extension(&p.zero_ext(&c, &a)).unwrap();
        let rep = check_negative_structure(&p, &t).unwrap();
        assert!(rep.ok, "failures: {:?}", rep.failures);
        assert!(rep.joints_checked > 0);
    }
}

//! Chain-level realization of presentation data: object expressions become
//! standard direct sums of stalk complexes (one per ambient factor),
//! morphisms and extension classes become chain maps, conflations are
//! realized as mapping cones, and inflations/deflations are recognized by
//! decomposing the (co)cone and checking that every summand stays inside
//! the shift window.
//!
//! Everything here leans on one exact identity: stalks, standard models and
//! their inclusion/projection maps commute with shift on the nose. The
//! mapping cone of the lowered class c^[-1] -> a^ therefore projects
//! directly onto the unshifted model of c, with no sign bookkeeping.

use super::{ExtElem, ExtTriangle, GenData, Morphism, ObjectExpr, Presentation};
use crate::derived::{
    cone, decompose_perfect, split, std_complex, ChainMap, DirectSum, ShiftedInterval,
};
use crate::exactlin::FieldElem;
use crate::{Error, Result};

/// Standard chain model of an object expression: per ambient factor, the
/// direct sum of the stalks of its summands in canonical (shift, interval)
/// order, plus the slot map from expression positions to (factor, position
/// within the factor model).
///
/// The per-factor ordering is canonical in the *bound* realization, so for
/// dualized factors it can differ from label order; this is what makes the
/// model complex coincide with the standard complex produced by splitting.
pub(crate) struct ExprModel {
    pub slots: Vec<(usize, usize)>,
    pub models: Vec<DirectSum>,
}

impl ExprModel {
    fn incl(&self, k: usize) -> &ChainMap {
        let (fi, pos) = self.slots[k];
        &self.models[fi].inclusions[pos]
    }

    fn proj(&self, k: usize) -> &ChainMap {
        let (fi, pos) = self.slots[k];
        &self.models[fi].projections[pos]
    }
}

/// Outcome of an inflation or deflation test. The summand names of the
/// (co)cone are always reported; the expression is only present when every
/// summand stays inside the shift window, which is exactly the `ok` case.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InflationCheck {
    pub ok: bool,
    pub witness: Option<ObjectExpr>,
    pub summand_names: Vec<String>,
}

impl Presentation {
    pub(crate) fn expr_model(&self, expr: &ObjectExpr) -> ExprModel {
        self.expr_model_shifted(expr, 0)
    }

    pub(crate) fn expr_model_shifted(&self, expr: &ObjectExpr, by: i32) -> ExprModel {
        let nf = self.factors().len();
        let mut per: Vec<Vec<(ShiftedInterval, usize)>> = vec![Vec::new(); nf];
        for (k, &i) in expr.items().iter().enumerate() {
            let (fi, x) = self.real[i];
            per[fi].push((x.shifted(by), k));
        }
        let mut slots = vec![(0usize, 0usize); expr.len()];
        let mut models = Vec::with_capacity(nf);
        for (fi, mut lst) in per.into_iter().enumerate() {
            lst.sort_by_key(|&(x, _)| x);
            for (pos, &(_, k)) in lst.iter().enumerate() {
                slots[k] = (fi, pos);
            }
            let ivs: Vec<ShiftedInterval> = lst.iter().map(|&(x, _)| x).collect();
            models.push(std_complex(self.field, self.factors()[fi].n, &ivs));
        }
        ExprModel { slots, models }
    }

    /// Per-factor chain maps realizing a morphism between the standard
    /// models of its source and target.
    pub(crate) fn assemble_morphism(&self, f: &Morphism) -> Vec<ChainMap> {
        let tables = self.gen_tables();
        let sm = self.expr_model(&f.source);
        let tm = self.expr_model(&f.target);
        let mut out: Vec<ChainMap> = (0..self.factors().len())
            .map(|fi| ChainMap::zero(&sm.models[fi].complex, &tm.models[fi].complex))
            .collect();
        for (r, &tl) in f.target.items().iter().enumerate() {
            for (c, &sl) in f.source.items().iter().enumerate() {
                let a = f.coeff.get(r, c);
                if a.0 == 0 {
                    continue;
                }
                let (fc, _) = sm.slots[c];
                let (fr, _) = tm.slots[r];
                assert_eq!(fc, fr, "cross-factor coefficient on a valid morphism");
                let gen = &tables.hom_gen[&(sl, tl)].map;
                let part = sm.proj(c).then(gen).then(tm.incl(r)).scale(a);
                out[fc] = out[fc].add(&part);
            }
        }
        out
    }

    /// Per-factor chain maps c^[-1] -> a^ realizing an extension class in
    /// the degree-lowered form that cones directly to the middle term.
    pub(crate) fn assemble_ext_lowered(&self, delta: &ExtElem) -> Vec<ChainMap> {
        let tables = self.gen_tables();
        let cm = self.expr_model_shifted(&delta.c, -1);
        let am = self.expr_model(&delta.a);
        let pairs = self.e_pairs(&delta.c, &delta.a);
        assert_eq!(
            pairs.len(),
            delta.coords.len(),
            "extension coordinate count"
        );
        let mut maps: Vec<ChainMap> = (0..self.factors().len())
            .map(|fi| ChainMap::zero(&cm.models[fi].complex, &am.models[fi].complex))
            .collect();
        for (&(cpos, apos), &coord) in pairs.iter().zip(&delta.coords) {
            if coord.0 == 0 {
                continue;
            }
            let (fc, _) = cm.slots[cpos];
            let (fa, _) = am.slots[apos];
            assert_eq!(fc, fa, "cross-factor extension coordinate");
            let cl = delta.c.items()[cpos];
            let al = delta.a.items()[apos];
            let gen = tables.e_gen[&(cl, al)].map.shift(-1);
            let part = cm.proj(cpos).then(&gen).then(am.incl(apos)).scale(coord);
            maps[fc] = maps[fc].add(&part);
        }
        maps
    }

    /// Class coordinate of a stalk-to-stalk chain map relative to the
    /// cached canonical generator.
    fn stalk_coord(&self, gen: &GenData, map: &ChainMap) -> FieldElem {
        let coord = gen.space.class_coords(map)[0];
        self.field.mul(coord, self.field.inv(gen.unit))
    }

    /// Recovers morphism coefficients from per-factor chain maps between
    /// standard models of two expressions.
    pub(crate) fn coefficients_of(
        &self,
        maps: &[ChainMap],
        src: &ObjectExpr,
        sm: &ExprModel,
        tgt: &ObjectExpr,
        tm: &ExprModel,
    ) -> Morphism {
        let tables = self.gen_tables();
        let mut out = self.zero_morphism(src, tgt);
        for (r, &tl) in tgt.items().iter().enumerate() {
            for (c, &sl) in src.items().iter().enumerate() {
                let Some(gen) = tables.hom_gen.get(&(sl, tl)) else {
                    continue;
                };
                let (fc, _) = sm.slots[c];
                let (fr, _) = tm.slots[r];
                if fc != fr {
                    continue;
                }
                let comp = sm.incl(c).then(&maps[fc]).then(tm.proj(r));
                out.coeff.set(r, c, self.stalk_coord(gen, &comp));
            }
        }
        out
    }

    /// Maps decomposed chain summands of one factor back to label indices;
    /// error text names the first summand outside the shift window.
    pub(crate) fn summands_to_expr(
        &self,
        fi: usize,
        parts: &[ShiftedInterval],
        items: &mut Vec<usize>,
    ) -> std::result::Result<(), String> {
        for &si in parts {
            match self.object_by_realization(fi, si) {
                Some(idx) => items.push(idx),
                None => return Err(self.display_shifted(fi, si)),
            }
        }
        Ok(())
    }

    /// Realizes delta in E(c, a) as a conflation a -> b -> c. The middle is
    /// the split form of the mapping cone of the lowered class, which
    /// always stays inside the shift window when a and c do.
    pub fn realize_extension(&self, delta: &ExtElem) -> Result<ExtTriangle> {
        self.require_full("realize_extension")?;
        let maps = self.assemble_ext_lowered(delta);
        let mut b_items = Vec::new();
        let mut cones = Vec::new();
        for (fi, g) in maps.iter().enumerate() {
            let cn = cone(g);
            let sp = split(&cn.complex);
            self.summands_to_expr(fi, &sp.summands, &mut b_items)
                .map_err(|name| Error::internal(format!("middle summand {name} has no label")))?;
            cones.push((cn, sp));
        }
        let b = ObjectExpr::from_indices(b_items);
        let bm = self.expr_model(&b);
        let mut x_maps = Vec::new();
        let mut y_maps = Vec::new();
        for (fi, (cn, sp)) in cones.iter().enumerate() {
            debug_assert_eq!(
                sp.std, bm.models[fi].complex,
                "splitting and expression model must agree"
            );
            x_maps.push(cn.incl.then(&sp.to_std));
            y_maps.push(sp.from_std.then(&cn.proj));
        }
        let am = self.expr_model(&delta.a);
        let cm = self.expr_model(&delta.c);
        let x = self.coefficients_of(&x_maps, &delta.a, &am, &b, &bm);
        let y = self.coefficients_of(&y_maps, &b, &bm, &delta.c, &cm);
        Ok(ExtTriangle {
            a: delta.a.clone(),
            b,
            c: delta.c.clone(),
            x,
            y,
            delta: delta.clone(),
        })
    }

    /// Fast path for triangle-table construction: the label multiset of the
    /// middle term of the conflation a -> ? -> c classified by coords, or
    /// None if a summand would leave the window (cannot happen for
    /// window-closed instances; callers treat None as mismatch).
    pub(crate) fn middle_of(&self, delta: &ExtElem) -> Option<Vec<usize>> {
        let maps = self.assemble_ext_lowered(delta);
        let mut items = Vec::new();
        for (fi, g) in maps.iter().enumerate() {
            let cn = cone(g);
            let parts = decompose_perfect(&cn.complex);
            if self.summands_to_expr(fi, &parts, &mut items).is_err() {
                return None;
            }
        }
        items.sort_unstable();
        Some(items)
    }

    /// Inflation test: f is an inflation when the cone of its realization
    /// decomposes into window objects; the witness is then the cone class.
    pub fn inflation_check(&self, f: &Morphism) -> Result<InflationCheck> {
        self.require_full("inflation_check")?;
        self.validate_morphism(f)?;
        let maps = self.assemble_morphism(f);
        let mut items = Vec::new();
        let mut names = Vec::new();
        let mut ok = true;
        for (fi, g) in maps.iter().enumerate() {
            let parts = decompose_perfect(&cone(g).complex);
            for &si in &parts {
                names.push(self.display_shifted(fi, si));
            }
            if ok && self.summands_to_expr(fi, &parts, &mut items).is_err() {
                ok = false;
            }
        }
        names.sort();
        Ok(InflationCheck {
            ok,
            witness: ok.then(|| ObjectExpr::from_indices(items)),
            summand_names: names,
        })
    }

    /// Deflation test: the cocone (fiber) is the cone shifted down by one.
    pub fn deflation_check(&self, f: &Morphism) -> Result<InflationCheck> {
        self.require_full("deflation_check")?;
        self.validate_morphism(f)?;
        let maps = self.assemble_morphism(f);
        let mut items = Vec::new();
        let mut names = Vec::new();
        let mut ok = true;
        for (fi, g) in maps.iter().enumerate() {
            let parts: Vec<ShiftedInterval> = decompose_perfect(&cone(g).complex)
                .iter()
                .map(|si| si.shifted(-1))
                .collect();
            for &si in &parts {
                names.push(self.display_shifted(fi, si));
            }
            if ok && self.summands_to_expr(fi, &parts, &mut items).is_err() {
                ok = false;
            }
        }
        names.sort();
        Ok(InflationCheck {
            ok,
            witness: ok.then(|| ObjectExpr::from_indices(items)),
            summand_names: names,
        })
    }

    pub fn is_inflation(&self, f: &Morphism) -> Result<bool> {
        Ok(self.inflation_check(f)?.ok)
    }

    pub fn is_deflation(&self, f: &Morphism) -> Result<bool> {
        Ok(self.deflation_check(f)?.ok)
    }
}

/// One realized conflation per nonvanishing entry of the E table, with
/// coordinate 1: the canonical generating conflations of the presentation.
pub fn basis_triangles(p: &Presentation) -> Result<Vec<ExtTriangle>> {
    p.require_full("basis_triangles")?;
    let mut out = Vec::new();
    for c in 0..p.num_objects() {
        for a in 0..p.num_objects() {
            if p.e_dim(c, a) == 1 {
                let delta = ExtElem {
                    c: ObjectExpr::single(c),
                    a: ObjectExpr::single(a),
                    coords: vec![p.field().one()],
                };
                out.push(p.realize_extension(&delta)?);
            }
        }
    }
    Ok(out)
}

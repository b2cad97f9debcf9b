//! Factorization systems attached to s-torsion pairs. A system is carried
//! intensionally by its defining pair: the left class is the inflations
//! with cone in add(t_set), the right class those with cone in add(f_set),
//! or the cocone analogue on the deflation side. Membership, orthogonality
//! and the factorization of a single morphism are the pointwise queries;
//! `verify_fs` checks the factorization axioms over a morphism sample.
//!
//! The factorization itself is chain-level: with C the (co)cone of f and
//! T -> C -> F its torsion triangle, the middle object K is the (co)cone
//! of a composite built from the triangle, and the canonical null homotopy
//! of that composite is folded into one of the two parts so that r . l
//! equals f exactly as coefficient matrices, not just up to homotopy.

use serde_json::{json, Value};

use crate::derived::{cone, split, ChainMap};
use crate::excat::{ExtElem, ExtTriangle, Morphism, ObjectExpr, Presentation};
use crate::par;
use crate::torsion::{torsion_triangle, verify_s_torsion, SubcatPair, TorsionReport};
use crate::{Error, Result};

/// Which ambient class of morphisms the system factors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Inflation,
    Deflation,
}

impl Side {
    pub fn as_str(self) -> &'static str {
        match self {
            Side::Inflation => "inflation",
            Side::Deflation => "deflation",
        }
    }

    pub fn parse(text: &str) -> Result<Side> {
        match text.trim() {
            "inflation" => Ok(Side::Inflation),
            "deflation" => Ok(Side::Deflation),
            other => Err(Error::input(format!(
                "unknown side {other:?}, expected \"inflation\" or \"deflation\""
            ))),
        }
    }
}

/// Factorization system stored by its defining pair. The two morphism
/// classes are infinite and only ever queried pointwise, so the pair is
/// the whole representation; `verify_fs` validates its extensional meaning.
#[derive(Debug, Clone)]
pub struct FactSystem {
    pub side: Side,
    pub pair: SubcatPair,
}

impl FactSystem {
    /// Wraps a pair without verifying it, for diagnostic runs; `verify_fs`
    /// on the result reports what is broken.
    pub fn new_unchecked(side: Side, pair: SubcatPair) -> FactSystem {
        FactSystem { side, pair }
    }

    pub fn to_json(&self, p: &Presentation) -> Value {
        let mut doc = self.pair.to_json(p);
        doc["side"] = json!(self.side.as_str());
        doc
    }

    pub fn from_json(p: &Presentation, doc: &Value) -> Result<FactSystem> {
        let side = doc
            .get("side")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::input("factorization system document needs a \"side\" string"))?;
        Ok(FactSystem {
            side: Side::parse(side)?,
            pair: SubcatPair::from_json(p, doc)?,
        })
    }
}

/// Forward half of the bijection with s-torsion pairs.
pub fn torsion_to_fs(p: &Presentation, pair: &SubcatPair, side: Side) -> Result<FactSystem> {
    require_verified(p, pair)?;
    Ok(FactSystem {
        side,
        pair: pair.clone(),
    })
}

/// Backward half: the defining sets as stored. The roundtrip is
/// definitional; `roundtrip_extensional` checks the nontrivial content.
pub fn fs_to_torsion(fs: &FactSystem) -> SubcatPair {
    fs.pair.clone()
}

fn require_verified(p: &Presentation, pair: &SubcatPair) -> Result<TorsionReport> {
    let report = verify_s_torsion(p, pair)?;
    if !report.ok() {
        return Err(Error::precondition(format!(
            "(T = {}, F = {}) is not an s-torsion pair here",
            p.expr_label(&ObjectExpr::from_indices(pair.t_items().to_vec())),
            p.expr_label(&ObjectExpr::from_indices(pair.f_items().to_vec())),
        )));
    }
    Ok(report)
}

fn map_name(p: &Presentation, f: &Morphism) -> String {
    format!("{} -> {}", p.expr_label(&f.source), p.expr_label(&f.target))
}

/// The (co)cone of a map required to lie in the side's ambient class; the
/// error names the offending map and its out-of-window summands.
fn side_witness(p: &Presentation, side: Side, f: &Morphism, role: &str) -> Result<ObjectExpr> {
    let chk = match side {
        Side::Inflation => p.inflation_check(f)?,
        Side::Deflation => p.deflation_check(f)?,
    };
    match chk.witness {
        Some(w) => Ok(w),
        None => {
            let (kind, of) = match side {
                Side::Inflation => ("an inflation", "cone"),
                Side::Deflation => ("a deflation", "cocone"),
            };
            Err(Error::precondition(format!(
                "{role} {} is not {kind} ({of} summands {})",
                map_name(p, f),
                chk.summand_names.join(", "),
            )))
        }
    }
}

/// First nonvanishing space between two label multisets, as a printable
/// finding; orthogonality and the pair's vanishing conditions are the
/// same table lookups.
fn first_nonvanishing(p: &Presentation, left: &[usize], right: &[usize]) -> Option<String> {
    for &t in left {
        for &f in right {
            if p.hom_dim(t, f) != 0 {
                return Some(format!("C({}, {}) != 0", p.label(t), p.label(f)));
            }
            if p.eneg_dim(t, f) != 0 {
                return Some(format!("E^-1({}, {}) != 0", p.label(t), p.label(f)));
            }
        }
    }
    None
}

/// Left orthogonality of inflations: morphisms and negative extensions
/// from cone(f) to cone(g) all vanish.
pub fn orthogonal(p: &Presentation, f: &Morphism, g: &Morphism) -> Result<bool> {
    orthogonal_side(p, Side::Inflation, f, g)
}

/// Side-aware orthogonality; the deflation side compares cocones, with the
/// vanishing read in the same direction.
pub fn orthogonal_side(p: &Presentation, side: Side, f: &Morphism, g: &Morphism) -> Result<bool> {
    let cf = side_witness(p, side, f, "left map")?;
    let cg = side_witness(p, side, g, "right map")?;
    Ok(first_nonvanishing(p, cf.items(), cg.items()).is_none())
}

/// Membership in Infl U: an inflation whose cone summands all lie in u_set.
pub fn in_infl_class(p: &Presentation, f: &Morphism, u_set: &[usize]) -> Result<bool> {
    let chk = p.inflation_check(f)?;
    Ok(chk.ok && chk.witness.as_ref().is_some_and(|w| w.within(u_set)))
}

/// Membership in Defl U: a deflation whose cocone summands all lie in u_set.
pub fn in_defl_class(p: &Presentation, f: &Morphism, u_set: &[usize]) -> Result<bool> {
    let chk = p.deflation_check(f)?;
    Ok(chk.ok && chk.witness.as_ref().is_some_and(|w| w.within(u_set)))
}

/// A factorization f = r . l with intermediate object k. cone_l and cone_r
/// are the (co)cones placing l and r in their classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub l: Morphism,
    pub r: Morphism,
    pub k: ObjectExpr,
    pub cone_l: ObjectExpr,
    pub cone_r: ObjectExpr,
}

/// Factors an inflation through the torsion triangle of its cone; the left
/// part carries the torsion cone, the right part the torsion-free one, and
/// r . l equals f exactly.
pub fn factorize_inflation(
    p: &Presentation,
    f: &Morphism,
    pair: &SubcatPair,
) -> Result<Factorization> {
    require_verified(p, pair)?;
    factorize_checked(p, Side::Inflation, f, pair)
}

/// Deflation analogue: the cocone's torsion triangle, with the left part
/// carrying the torsion cocone.
pub fn factorize_deflation(
    p: &Presentation,
    f: &Morphism,
    pair: &SubcatPair,
) -> Result<Factorization> {
    require_verified(p, pair)?;
    factorize_checked(p, Side::Deflation, f, pair)
}

/// Factors through an already-verified pair (verify_fs re-checks the pair
/// once, not per sampled morphism).
fn factorize_checked(
    p: &Presentation,
    side: Side,
    f: &Morphism,
    pair: &SubcatPair,
) -> Result<Factorization> {
    let c_expr = side_witness(p, side, f, "map")?;
    if c_expr.within(pair.t_items()) {
        let fact = Factorization {
            l: f.clone(),
            r: p.identity_morphism(&f.target),
            k: f.target.clone(),
            cone_l: c_expr,
            cone_r: ObjectExpr::zero(),
        };
        return check_factorization(p, side, f, pair, fact);
    }
    if c_expr.within(pair.f_items()) {
        let fact = Factorization {
            l: p.identity_morphism(&f.source),
            r: f.clone(),
            k: f.source.clone(),
            cone_l: ObjectExpr::zero(),
            cone_r: c_expr,
        };
        return check_factorization(p, side, f, pair, fact);
    }
    let tri = star_triangle_expr(p, &c_expr, pair)?;
    debug_assert_eq!(
        tri.b, c_expr,
        "combined torsion triangle must sit on the (co)cone"
    );
    let fact = match side {
        Side::Inflation => build_inflation_factorization(p, f, &tri)?,
        Side::Deflation => build_deflation_factorization(p, f, &tri)?,
    };
    check_factorization(p, side, f, pair, fact)
}

/// Postconditions, enforced at runtime: exact composite and verified class
/// membership of both parts. Violations are internal errors.
fn check_factorization(
    p: &Presentation,
    side: Side,
    f: &Morphism,
    pair: &SubcatPair,
    fact: Factorization,
) -> Result<Factorization> {
    let comp = p.compose(&fact.l, &fact.r)?;
    if comp != *f {
        return Err(Error::internal(format!(
            "factorization of {} composes to a different morphism",
            map_name(p, f)
        )));
    }
    let wl = side_witness(p, side, &fact.l, "left part")?;
    let wr = side_witness(p, side, &fact.r, "right part")?;
    if wl != fact.cone_l || wr != fact.cone_r {
        return Err(Error::internal(format!(
            "factorization of {} reports wrong witnesses",
            map_name(p, f)
        )));
    }
    if !wl.within(pair.t_items()) || !wr.within(pair.f_items()) {
        return Err(Error::internal(format!(
            "factorization of {} left its classes (witnesses {}, {})",
            map_name(p, f),
            p.expr_label(&wl),
            p.expr_label(&wr),
        )));
    }
    Ok(fact)
}

/// Torsion triangle of a decomposable expression: the direct sum of the
/// canonical per-summand star triangles, realized as one conflation. The
/// combined class is block-diagonal over matching summand tags.
fn star_triangle_expr(
    p: &Presentation,
    expr: &ObjectExpr,
    pair: &SubcatPair,
) -> Result<ExtTriangle> {
    let mut per = Vec::with_capacity(expr.len());
    let mut tagged_t: Vec<(usize, usize)> = Vec::new();
    let mut tagged_f: Vec<(usize, usize)> = Vec::new();
    for (tag, &x) in expr.items().iter().enumerate() {
        let tri = torsion_triangle(p, x, pair)?;
        for &t in tri.a.items() {
            tagged_t.push((t, tag));
        }
        for &f in tri.c.items() {
            tagged_f.push((f, tag));
        }
        per.push(tri);
    }
    // stable sorts keep per-tag subsequences in their own expression order,
    // so within-tag positions can be recovered by counting
    tagged_t.sort_by_key(|&(l, _)| l);
    tagged_f.sort_by_key(|&(l, _)| l);
    let a = ObjectExpr::from_indices(tagged_t.iter().map(|&(l, _)| l).collect());
    let c = ObjectExpr::from_indices(tagged_f.iter().map(|&(l, _)| l).collect());
    let pairs = p.e_pairs(&c, &a);
    let mut coords = vec![p.field().zero(); pairs.len()];
    for (k, &(cpos, apos)) in pairs.iter().enumerate() {
        let (_, ct) = tagged_f[cpos];
        let (_, at) = tagged_t[apos];
        if ct != at {
            continue;
        }
        let tri = &per[ct];
        let wc = tagged_f[..cpos].iter().filter(|&&(_, t)| t == ct).count();
        let wa = tagged_t[..apos].iter().filter(|&&(_, t)| t == at).count();
        let inner = p.e_pairs(&tri.c, &tri.a);
        if let Some(idx) = inner.iter().position(|&q| q == (wc, wa)) {
            coords[k] = tri.delta.coords[idx];
        }
    }
    p.realize_extension(&ExtElem { c, a, coords })
}

/// With C = cone(f) and torsion triangle T -> C -> F, the middle K is the
/// cocone of the composite w: Y -> C -> F. The left part is
/// x |-> (f x, -(v h0) x) where h0 is the canonical degree -1 section of
/// cone(f); folding the homotopy in makes r . l = f on the nose.
fn build_inflation_factorization(
    p: &Presentation,
    f: &Morphism,
    tri: &ExtTriangle,
) -> Result<Factorization> {
    let nf = p.factors().len();
    let sm = p.expr_model(&f.source);
    let tm = p.expr_model(&f.target);
    let fhat = p.assemble_morphism(f);
    let vstd = p.assemble_morphism(&tri.y);
    let bm = p.expr_model(&tri.b);
    let mut k_items = Vec::new();
    let mut parts = Vec::new();
    for fi in 0..nf {
        let cn1 = cone(&fhat[fi]);
        let sp1 = split(&cn1.complex);
        debug_assert_eq!(
            sp1.std, bm.models[fi].complex,
            "cone must split onto the triangle middle"
        );
        let vhat = sp1.to_std.then(&vstd[fi]);
        let what = cn1.incl.then(&vhat);
        let cn2 = cone(&what);
        let kraw = cn2.complex.shift(-1);
        let rhat = cn2.proj.shift(-1);
        let xstd = &sm.models[fi].complex;
        let mut lhat = ChainMap::new(xstd, &kraw);
        if let Some((lo, hi)) = xstd.deg_range() {
            for d in lo..=hi {
                let xcols = xstd.term(d).len();
                if xcols == 0 {
                    continue;
                }
                // K^d = Y^d ++ F^{d-1}; the cone of f has X^d first in
                // degree d-1, so the homotopy block is the X columns of v
                let top = fhat[fi].comp(d);
                let vprev = vhat.comp(d - 1);
                let all_rows: Vec<usize> = (0..vprev.rows).collect();
                let xcols_idx: Vec<usize> = (0..xcols).collect();
                let bottom = vprev.select(&all_rows, &xcols_idx).neg();
                lhat.set_comp(d, top.vstack(&bottom));
            }
        }
        debug_assert!(lhat.is_valid(), "left part must be a chain map");
        let spk = split(&kraw);
        p.summands_to_expr(fi, &spk.summands, &mut k_items)
            .map_err(|name| {
                Error::internal(format!(
                    "factorization middle summand {name} left the window"
                ))
            })?;
        parts.push((spk, rhat, lhat));
    }
    let k = ObjectExpr::from_indices(k_items);
    let km = p.expr_model(&k);
    let mut lmaps = Vec::new();
    let mut rmaps = Vec::new();
    for (fi, (spk, rhat, lhat)) in parts.iter().enumerate() {
        debug_assert_eq!(
            spk.std, km.models[fi].complex,
            "middle must split onto its model"
        );
        lmaps.push(lhat.then(&spk.to_std));
        rmaps.push(spk.from_std.then(rhat));
    }
    let l = p.coefficients_of(&lmaps, &f.source, &sm, &k, &km);
    let r = p.coefficients_of(&rmaps, &k, &km, &f.target, &tm);
    Ok(Factorization {
        l,
        r,
        k,
        cone_l: tri.a.clone(),
        cone_r: tri.c.clone(),
    })
}

/// Dual construction. With C the cocone of f and triangle T -> C -> F, the
/// middle K is the cone of the composite w: T -> C -> X; the right part is
/// (t, x) |-> f x + (h0' u) t with h0' the canonical degree -1 retraction
/// of the cocone, so again r . l = f exactly.
fn build_deflation_factorization(
    p: &Presentation,
    f: &Morphism,
    tri: &ExtTriangle,
) -> Result<Factorization> {
    let nf = p.factors().len();
    let sm = p.expr_model(&f.source);
    let tm = p.expr_model(&f.target);
    let fhat = p.assemble_morphism(f);
    let ustd = p.assemble_morphism(&tri.x);
    let bm = p.expr_model(&tri.b);
    let mut k_items = Vec::new();
    let mut parts = Vec::new();
    for fi in 0..nf {
        let cn1 = cone(&fhat[fi]);
        let ccn = cn1.complex.shift(-1);
        let sp1 = split(&ccn);
        debug_assert_eq!(
            sp1.std, bm.models[fi].complex,
            "cocone must split onto the triangle middle"
        );
        let ghat = cn1.proj.shift(-1);
        let uhat = ustd[fi].then(&sp1.from_std);
        let what = uhat.then(&ghat);
        let cn2 = cone(&what);
        let kraw = cn2.complex.clone();
        let lhat = cn2.incl;
        let xstd = &sm.models[fi].complex;
        let ystd = &tm.models[fi].complex;
        let mut rhat = ChainMap::new(&kraw, ystd);
        if let Some((lo, hi)) = kraw.deg_range() {
            for d in lo..=hi {
                if ystd.term(d).is_empty() || kraw.term(d).is_empty() {
                    continue;
                }
                // K^d = T^{d+1} ++ X^d; the cocone of f has X^{d+1} first
                // in degree d+1, so the homotopy block is the Y rows of u
                let right = fhat[fi].comp(d);
                let unext = uhat.comp(d + 1);
                let xrows = xstd.term(d + 1).len();
                let yrows: Vec<usize> = (xrows..unext.rows).collect();
                let ucols: Vec<usize> = (0..unext.cols).collect();
                let left = unext.select(&yrows, &ucols).neg();
                rhat.set_comp(d, left.hstack(&right));
            }
        }
        debug_assert!(rhat.is_valid(), "right part must be a chain map");
        let spk = split(&kraw);
        p.summands_to_expr(fi, &spk.summands, &mut k_items)
            .map_err(|name| {
                Error::internal(format!(
                    "factorization middle summand {name} left the window"
                ))
            })?;
        parts.push((spk, rhat, lhat));
    }
    let k = ObjectExpr::from_indices(k_items);
    let km = p.expr_model(&k);
    let mut lmaps = Vec::new();
    let mut rmaps = Vec::new();
    for (fi, (spk, rhat, lhat)) in parts.iter().enumerate() {
        debug_assert_eq!(
            spk.std, km.models[fi].complex,
            "middle must split onto its model"
        );
        lmaps.push(lhat.then(&spk.to_std));
        rmaps.push(spk.from_std.then(rhat));
    }
    let l = p.coefficients_of(&lmaps, &f.source, &sm, &k, &km);
    let r = p.coefficients_of(&rmaps, &k, &km, &f.target, &tm);
    Ok(Factorization {
        l,
        r,
        k,
        cone_l: tri.a.clone(),
        cone_r: tri.c.clone(),
    })
}

/// Deterministic verification sample: zero maps into and out of every
/// indecomposable, plus the canonical basis morphism of every nonzero Hom
/// pair (identities included).
pub fn default_sample(p: &Presentation) -> Vec<Morphism> {
    let mut out = Vec::new();
    for u in 0..p.num_objects() {
        out.push(p.zero_morphism(&ObjectExpr::zero(), &ObjectExpr::single(u)));
    }
    for u in 0..p.num_objects() {
        out.push(p.zero_morphism(&ObjectExpr::single(u), &ObjectExpr::zero()));
    }
    for i in 0..p.num_objects() {
        for j in 0..p.num_objects() {
            if p.hom_dim(i, j) != 0 {
                out.push(p.canonical_morphism(&ObjectExpr::single(i), &ObjectExpr::single(j)));
            }
        }
    }
    out
}

/// Verification outcome over a sample. Maps outside the side's ambient
/// class are skipped; checked_maps counts the rest.
#[derive(Debug, Clone)]
pub struct FsReport {
    pub ok: bool,
    pub side: Side,
    pub sample_size: usize,
    pub checked_maps: usize,
    /// Findings against the defining pair itself.
    pub pair_failures: Vec<String>,
    /// Sampled class members with no valid factorization.
    pub axiom1_failures: Vec<String>,
    /// Class membership disagreeing with orthogonality against the
    /// generating maps of the opposite class.
    pub axiom23_failures: Vec<String>,
}

/// Checks the factorization axioms over the sample: every sampled map of
/// the ambient class factors (axiom 1), and membership in each class
/// agrees with orthogonality against the generating maps of the opposite
/// one (axioms 2 and 3, extensionally). The defining pair is re-verified
/// and its findings reported alongside.
pub fn verify_fs(p: &Presentation, fs: &FactSystem, sample: &[Morphism]) -> Result<FsReport> {
    p.require_full("verify_fs")?;
    let mut pair_failures = Vec::new();
    let rep = verify_s_torsion(p, &fs.pair)?;
    for &(x, cap) in &rep.cond1_failures {
        pair_failures.push(format!(
            "{} admits no conflation T -> {} -> F within summand budget {cap}",
            p.label(x),
            p.label(x)
        ));
    }
    for &(t, f) in &rep.cond2_failures {
        pair_failures.push(format!("C({}, {}) != 0", p.label(t), p.label(f)));
    }
    for &(t, f) in &rep.cond3_failures {
        pair_failures.push(format!("E^-1({}, {}) != 0", p.label(t), p.label(f)));
    }
    let results = par::map_vec(sample.to_vec(), |m| check_sample_map(p, fs, &m));
    let mut checked_maps = 0;
    let mut axiom1_failures = Vec::new();
    let mut axiom23_failures = Vec::new();
    for res in results {
        let Some((ax1, ax23)) = res? else { continue };
        checked_maps += 1;
        axiom1_failures.extend(ax1);
        axiom23_failures.extend(ax23);
    }
    Ok(FsReport {
        ok: rep.ok() && axiom1_failures.is_empty() && axiom23_failures.is_empty(),
        side: fs.side,
        sample_size: sample.len(),
        checked_maps,
        pair_failures,
        axiom1_failures,
        axiom23_failures,
    })
}

/// One sampled morphism: None when outside the ambient class, otherwise
/// its axiom 1 and axiom 2/3 findings.
#[allow(clippy::type_complexity)]
fn check_sample_map(
    p: &Presentation,
    fs: &FactSystem,
    m: &Morphism,
) -> Result<Option<(Option<String>, Vec<String>)>> {
    let chk = match fs.side {
        Side::Inflation => p.inflation_check(m)?,
        Side::Deflation => p.deflation_check(m)?,
    };
    let Some(w) = chk.witness else {
        return Ok(None);
    };
    let name = map_name(p, m);
    let ax1 = match factorize_checked(p, fs.side, m, &fs.pair) {
        Ok(_) => None,
        Err(e) => Some(format!("{name}: {e}")),
    };
    let mut ax23 = Vec::new();
    let in_l = w.within(fs.pair.t_items());
    let in_r = w.within(fs.pair.f_items());
    let left_orth = fs
        .pair
        .f_items()
        .iter()
        .all(|&u| first_nonvanishing(p, w.items(), &[u]).is_none());
    let right_orth = fs
        .pair
        .t_items()
        .iter()
        .all(|&u| first_nonvanishing(p, &[u], w.items()).is_none());
    if in_l != left_orth {
        ax23.push(format!(
            "left class membership of {name} is {in_l} but orthogonality against the right generators is {left_orth}"
        ));
    }
    if in_r != right_orth {
        ax23.push(format!(
            "right class membership of {name} is {in_r} but orthogonality against the left generators is {right_orth}"
        ));
    }
    Ok(Some((ax1, ax23)))
}

/// Extensional content of the bijection: every defining label is recovered
/// as the cone of its zero-inclusion, and over the default sample the
/// orthogonality-defined classes have cones exactly inside the defining
/// sets (both inclusions of Cone(Infl T) = T and its mirror).
pub fn roundtrip_extensional(p: &Presentation, pair: &SubcatPair) -> Result<bool> {
    require_verified(p, pair)?;
    for u in 0..p.num_objects() {
        let z = p.zero_morphism(&ObjectExpr::zero(), &ObjectExpr::single(u));
        let chk = p.inflation_check(&z)?;
        if !(chk.ok && chk.witness.as_ref().is_some_and(|w| w.items() == [u])) {
            return Ok(false);
        }
    }
    for m in default_sample(p) {
        let chk = p.inflation_check(&m)?;
        let Some(w) = chk.witness else { continue };
        let left_orth = pair
            .f_items()
            .iter()
            .all(|&v| first_nonvanishing(p, w.items(), &[v]).is_none());
        if left_orth != w.within(pair.t_items()) {
            return Ok(false);
        }
        let right_orth = pair
            .t_items()
            .iter()
            .all(|&v| first_nonvanishing(p, &[v], w.items()).is_none());
        if right_orth != w.within(pair.f_items()) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::Field;
    use crate::excat::{build_extended_category, build_module_category};

    fn f2() -> Field {
        Field::new(2).unwrap()
    }

    fn f3() -> Field {
        Field::new(3).unwrap()
    }

    fn example(field: Field) -> (Presentation, SubcatPair) {
        let p = build_extended_category(field, 3, 2);
        let pair = SubcatPair::from_labels(
            &p,
            &["P3[1]", "P1[1]", "I2[1]", "I1[1]"],
            &["P3", "P2", "P1", "S2", "I2", "I1", "S2[1]"],
        )
        .unwrap();
        (p, pair)
    }

    const X_GENERATORS: [&str; 13] = [
        "0 -> P3[1]",
        "P1 -> I2",
        "P2 -> S2",
        "0 -> I2[1]",
        "0 -> P1[1]",
        "I1 -> P2[1]",
        "I2 -> P3[1]",
        "0 -> I1[1]",
        "S2[1] -> I2[1]",
        "P2[1] -> P1[1]",
        "P3[1] -> P1[1]",
        "I1 -> S2[1]",
        "P2[1] -> S2[1]+P1[1]",
    ];

    const Y_GENERATORS: [&str; 14] = [
        "0 -> P3",
        "0 -> P2",
        "0 -> P1",
        "I2 -> I1",
        "0 -> S2",
        "0 -> I2",
        "0 -> I1",
        "S2 -> I2",
        "P3 -> P1",
        "P3 -> P2",
        "P2 -> P1",
        "0 -> S2[1]",
        "P2 -> P1+S2",
        "P3[1] -> P2[1]",
    ];

    #[test]
    fn orthogonality_frozen_values() {
        let (p, _) = example(f2());
        let id = p.identity_morphism(&p.parse_expr("P2").unwrap());
        assert!(orthogonal(&p, &id, &id).unwrap());
        let l = p.parse_morphism("P1 -> I2", "auto").unwrap();
        let r = p.parse_morphism("I2 -> I1", "auto").unwrap();
        assert!(orthogonal(&p, &l, &r).unwrap());
        let zp = p.parse_morphism("0 -> P2[1]", "auto").unwrap();
        let zs = p.parse_morphism("0 -> S2[1]", "auto").unwrap();
        assert!(!orthogonal(&p, &zp, &zs).unwrap());
    }

    #[test]
    fn orthogonality_depends_only_on_cones() {
        let (p, _) = example(f2());
        // P1 -> I2 and 0 -> P3[1] have the same cone P3[1]
        let a = p.parse_morphism("P1 -> I2", "auto").unwrap();
        let b = p.parse_morphism("0 -> P3[1]", "auto").unwrap();
        let r = p.parse_morphism("I2 -> I1", "auto").unwrap();
        let bad = p.parse_morphism("0 -> P1[1]", "auto").unwrap();
        assert_eq!(
            orthogonal(&p, &a, &r).unwrap(),
            orthogonal(&p, &b, &r).unwrap()
        );
        assert!(!orthogonal(&p, &a, &bad).unwrap());
        assert_eq!(
            orthogonal(&p, &a, &bad).unwrap(),
            orthogonal(&p, &b, &bad).unwrap()
        );
    }

    #[test]
    fn orthogonality_rejects_non_inflations() {
        let (p, _) = example(f2());
        let bad = p.parse_morphism("P1[1] -> 0", "auto").unwrap();
        let good = p.parse_morphism("0 -> S2", "auto").unwrap();
        let err = orthogonal(&p, &bad, &good).unwrap_err();
        let text = err.to_string();
        assert!(text.contains("left map P1[1] -> 0"), "got: {text}");
        assert!(text.contains("not an inflation"), "got: {text}");
    }

    #[test]
    fn class_membership_frozen_values() {
        let (p, pair) = example(f2());
        let id = p.identity_morphism(&p.parse_expr("I2").unwrap());
        assert!(in_infl_class(&p, &id, pair.t_items()).unwrap());
        assert!(in_infl_class(&p, &id, pair.f_items()).unwrap());
        let l = p.parse_morphism("P1 -> I2", "auto").unwrap();
        assert!(in_infl_class(&p, &l, pair.t_items()).unwrap());
        let f = p.parse_morphism("P1 -> I1", "auto").unwrap();
        assert!(!in_infl_class(&p, &f, pair.t_items()).unwrap());
        assert!(!in_infl_class(&p, &f, pair.f_items()).unwrap());
    }

    #[test]
    fn generator_membership_split_by_class() {
        let (p, pair) = example(f2());
        for lit in X_GENERATORS {
            let m = p.parse_morphism(lit, "auto").unwrap();
            assert!(
                in_infl_class(&p, &m, pair.t_items()).unwrap(),
                "{lit} should be in the left class"
            );
            if !p.inflation_check(&m).unwrap().witness.unwrap().is_empty() {
                assert!(
                    !in_infl_class(&p, &m, pair.f_items()).unwrap(),
                    "{lit} should not be in the right class"
                );
            }
        }
        for lit in Y_GENERATORS {
            let m = p.parse_morphism(lit, "auto").unwrap();
            assert!(
                in_infl_class(&p, &m, pair.f_items()).unwrap(),
                "{lit} should be in the right class"
            );
        }
    }

    #[test]
    fn factorize_canonical_example() {
        for field in [f2(), f3()] {
            let (p, pair) = example(field);
            let f = p.parse_morphism("P1 -> I1", "auto").unwrap();
            let fact = factorize_inflation(&p, &f, &pair).unwrap();
            assert_eq!(p.expr_label(&fact.k), "I2");
            assert_eq!(p.expr_label(&fact.cone_l), "P3[1]");
            assert_eq!(p.expr_label(&fact.cone_r), "S2[1]");
            assert_eq!(p.compose(&fact.l, &fact.r).unwrap(), f);
        }
        // over F2 the parts are the canonical generators themselves
        let (p, pair) = example(f2());
        let f = p.parse_morphism("P1 -> I1", "auto").unwrap();
        let fact = factorize_inflation(&p, &f, &pair).unwrap();
        assert_eq!(fact.l, p.parse_morphism("P1 -> I2", "auto").unwrap());
        assert_eq!(fact.r, p.parse_morphism("I2 -> I1", "auto").unwrap());
    }

    #[test]
    fn factorize_trivial_cases() {
        let (p, pair) = example(f2());
        // cone already torsion: left part is f itself
        let f = p.parse_morphism("0 -> P3[1]", "auto").unwrap();
        let fact = factorize_inflation(&p, &f, &pair).unwrap();
        assert_eq!(fact.l, f);
        assert_eq!(fact.r, p.identity_morphism(&f.target));
        assert_eq!(fact.k, f.target);
        // cone already torsion-free: right part is f itself
        let g = p.parse_morphism("0 -> S2", "auto").unwrap();
        let fact = factorize_inflation(&p, &g, &pair).unwrap();
        assert_eq!(fact.l, p.identity_morphism(&g.source));
        assert_eq!(fact.r, g);
        assert!(fact.k.is_empty());
        // isomorphisms have zero cone, landing in the first case
        let id = p.identity_morphism(&p.parse_expr("P2+S2[1]").unwrap());
        let fact = factorize_inflation(&p, &id, &pair).unwrap();
        assert_eq!(fact.l, id);
        assert!(fact.cone_l.is_empty() && fact.cone_r.is_empty());
    }

    #[test]
    fn factorize_all_sampled_inflations() {
        let (p, pair) = example(f2());
        let mut general = 0;
        for m in default_sample(&p) {
            if !p.is_inflation(&m).unwrap() {
                continue;
            }
            let fact = factorize_inflation(&p, &m, &pair).unwrap();
            assert_eq!(p.compose(&fact.l, &fact.r).unwrap(), m);
            assert!(in_infl_class(&p, &fact.l, pair.t_items()).unwrap());
            assert!(in_infl_class(&p, &fact.r, pair.f_items()).unwrap());
            if !fact.cone_l.is_empty() && !fact.cone_r.is_empty() {
                general += 1;
            }
        }
        assert!(
            general > 0,
            "sample must exercise the non-trivial construction"
        );
    }

    #[test]
    fn factorization_is_deterministic() {
        let (p, pair) = example(f3());
        let f = p.parse_morphism("P1 -> I1", "auto").unwrap();
        let once = factorize_inflation(&p, &f, &pair).unwrap();
        let twice = factorize_inflation(&p, &f, &pair).unwrap();
        assert_eq!(once, twice);
    }

    #[test]
    fn sampled_classes_are_orthogonal() {
        let (p, pair) = example(f2());
        let sample = default_sample(&p);
        let left: Vec<&Morphism> = sample
            .iter()
            .filter(|m| in_infl_class(&p, m, pair.t_items()).unwrap())
            .collect();
        let right: Vec<&Morphism> = sample
            .iter()
            .filter(|m| in_infl_class(&p, m, pair.f_items()).unwrap())
            .collect();
        assert!(!left.is_empty() && !right.is_empty());
        for l in &left {
            for r in &right {
                assert!(orthogonal(&p, l, r).unwrap());
            }
        }
    }

    #[test]
    fn module_category_factorizations_both_sides() {
        let p = build_module_category(f2(), 2);
        let pair = SubcatPair::from_labels(&p, &["S2"], &["S1"]).unwrap();
        // P1 is covered by the non-split conflation S2 -> P1 -> S1
        let f = p.parse_morphism("0 -> P1", "auto").unwrap();
        let fact = factorize_inflation(&p, &f, &pair).unwrap();
        assert_eq!(p.expr_label(&fact.k), "S2");
        assert_eq!(p.expr_label(&fact.cone_l), "S2");
        assert_eq!(p.expr_label(&fact.cone_r), "S1");
        assert_eq!(p.compose(&fact.l, &fact.r).unwrap(), f);
        let g = p.parse_morphism("P1 -> 0", "auto").unwrap();
        let fact = factorize_deflation(&p, &g, &pair).unwrap();
        assert_eq!(p.expr_label(&fact.k), "S1");
        assert_eq!(p.expr_label(&fact.cone_l), "S2");
        assert_eq!(p.expr_label(&fact.cone_r), "S1");
        assert_eq!(p.compose(&fact.l, &fact.r).unwrap(), g);
    }

    #[test]
    fn factorize_requires_verified_pair() {
        let (p, _) = example(f2());
        let bad = SubcatPair::from_labels(&p, &["P1"], &["I1"]).unwrap();
        let f = p.parse_morphism("P1 -> I1", "auto").unwrap();
        let err = factorize_inflation(&p, &f, &bad).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)), "got: {err:?}");
    }

    #[test]
    fn roundtrip_is_definitional_and_extensional() {
        let (p, pair) = example(f2());
        let fs = torsion_to_fs(&p, &pair, Side::Inflation).unwrap();
        let back = fs_to_torsion(&fs);
        assert_eq!(back.t_items(), pair.t_items());
        assert_eq!(back.f_items(), pair.f_items());
        assert!(roundtrip_extensional(&p, &pair).unwrap());
        // the degenerate pair (everything, 0)
        let all = SubcatPair::new(&p, (0..p.num_objects()).collect(), Vec::new()).unwrap();
        assert!(roundtrip_extensional(&p, &all).unwrap());
        // subsets that are no pair are refused up front
        let bad = SubcatPair::from_labels(&p, &["P1"], &["I1"]).unwrap();
        let err = roundtrip_extensional(&p, &bad).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)), "got: {err:?}");
    }

    #[test]
    fn verify_fs_example_system() {
        let (p, pair) = example(f2());
        let fs = torsion_to_fs(&p, &pair, Side::Inflation).unwrap();
        let mut sample = default_sample(&p);
        for lit in X_GENERATORS.iter().chain(Y_GENERATORS.iter()) {
            sample.push(p.parse_morphism(lit, "auto").unwrap());
        }
        sample.push(p.parse_morphism("P1 -> I1", "auto").unwrap());
        let rep = verify_fs(&p, &fs, &sample).unwrap();
        assert!(
            rep.ok,
            "ax1 {:?} ax23 {:?}",
            rep.axiom1_failures, rep.axiom23_failures
        );
        assert_eq!(rep.sample_size, sample.len());
        assert!(rep.checked_maps > X_GENERATORS.len() + Y_GENERATORS.len());
        assert!(rep.pair_failures.is_empty());
    }

    #[test]
    fn verify_fs_trivial_system() {
        let (p, _) = example(f2());
        let all = SubcatPair::new(&p, (0..p.num_objects()).collect(), Vec::new()).unwrap();
        let fs = torsion_to_fs(&p, &all, Side::Inflation).unwrap();
        let rep = verify_fs(&p, &fs, &default_sample(&p)).unwrap();
        assert!(rep.ok);
        // every inflation already lies in the left class
        let f = p.parse_morphism("P1 -> I1", "auto").unwrap();
        let fact = factorize_inflation(&p, &f, &all).unwrap();
        assert_eq!(fact.l, f);
        assert_eq!(fact.r, p.identity_morphism(&f.target));
    }

    #[test]
    fn corrupted_system_reports_vanishing_violation() {
        let (p, pair) = example(f2());
        // exchange P1[1] and P1 between the sides
        let t: Vec<String> = pair
            .t_labels(&p)
            .into_iter()
            .map(|l| if l == "P1[1]" { "P1".to_string() } else { l })
            .collect();
        let f: Vec<String> = pair
            .f_labels(&p)
            .into_iter()
            .map(|l| if l == "P1" { "P1[1]".to_string() } else { l })
            .collect();
        let broken = SubcatPair::from_labels(&p, &t, &f).unwrap();
        let fs = FactSystem::new_unchecked(Side::Inflation, broken);
        let rep = verify_fs(&p, &fs, &default_sample(&p)).unwrap();
        assert!(!rep.ok);
        assert!(
            rep.pair_failures.iter().any(|m| m == "C(P1, I2) != 0"),
            "got: {:?}",
            rep.pair_failures
        );
        assert!(
            rep.pair_failures.iter().any(|m| m == "C(P1, I1) != 0"),
            "got: {:?}",
            rep.pair_failures
        );
    }

    #[test]
    fn duality_mirrors_the_system() {
        let (p, pair) = example(f2());
        let fs = torsion_to_fs(&p, &pair, Side::Inflation).unwrap();
        let rep = verify_fs(&p, &fs, &default_sample(&p)).unwrap();
        assert!(rep.ok);
        let dp = p.dualize().unwrap();
        let dfs = torsion_to_fs(&dp, &pair.swapped(), Side::Deflation).unwrap();
        let drep = verify_fs(&dp, &dfs, &default_sample(&dp)).unwrap();
        assert!(
            drep.ok,
            "ax1 {:?} ax23 {:?}",
            drep.axiom1_failures, drep.axiom23_failures
        );
        assert_eq!(rep.checked_maps, drep.checked_maps);
    }

    #[test]
    fn deflation_factorization_mirrors_the_canonical_example() {
        let (p, pair) = example(f2());
        let dp = p.dualize().unwrap();
        let dpair = pair.swapped();
        let df = dp.parse_morphism("I1 -> P1", "auto").unwrap();
        let fact = factorize_deflation(&dp, &df, &dpair).unwrap();
        assert_eq!(dp.expr_label(&fact.k), "I2");
        assert_eq!(dp.expr_label(&fact.cone_l), "S2[1]");
        assert_eq!(dp.expr_label(&fact.cone_r), "P3[1]");
        assert_eq!(dp.compose(&fact.l, &fact.r).unwrap(), df);
        assert_eq!(fact.l, dp.parse_morphism("I1 -> I2", "auto").unwrap());
        assert_eq!(fact.r, dp.parse_morphism("I2 -> P1", "auto").unwrap());
    }

    #[test]
    fn system_documents_round_trip() {
        let (p, pair) = example(f2());
        let fs = torsion_to_fs(&p, &pair, Side::Inflation).unwrap();
        let doc = fs.to_json(&p);
        assert_eq!(doc["side"], "inflation");
        let back = FactSystem::from_json(&p, &doc).unwrap();
        assert_eq!(back.side, Side::Inflation);
        assert_eq!(back.pair.t_items(), pair.t_items());
        assert_eq!(back.pair.f_items(), pair.f_items());
        assert!(Side::parse("bogus").is_err());
    }
}

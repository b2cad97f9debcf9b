//! The end-to-end verification battery: nine numbered checks that pin the
//! worked (3, 2) fixture, the enumeration oracle, the negative structure,
//! the Euler form, gluing across recollements and duality. The integration
//! test target runs each check as its own test; the CLI selfcheck command
//! reuses the same runners.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use crate::exactlin::Field;
use crate::excat::{
    basis_triangles, build_extended_category, build_module_category, check_negative_structure,
    Presentation,
};
use crate::factsys::{
    default_sample, factorize_deflation, factorize_inflation, in_defl_class, in_infl_class,
    roundtrip_extensional, torsion_to_fs, verify_fs, Side,
};
use crate::recoll::{
    build_product_recollement, build_triangular_fixture, check_exactness_hypotheses,
    check_recollement, glue_fs, glue_torsion,
};
use crate::repkernel::{euler_form, ext_dim, hom_dim, Interval};
use crate::silting::{is_silting, silted_pair, SiltingCandidate};
use crate::torsion::{enumerate_s_torsion, verify_s_torsion, CondStatus, SubcatPair};
use crate::Result;

/// The principal fixture: the three-term silting complex of the worked
/// example over the (3, 2) window, and the add-lists it cuts out.
pub const EXAMPLE_COMPLEX: &str = "P3[1]+P1[1]+I1[1]";
const EXAMPLE_T: [&str; 4] = ["P3[1]", "P1[1]", "I2[1]", "I1[1]"];
const EXAMPLE_F: [&str; 7] = ["P3", "P2", "P1", "S2", "I2", "I1", "S2[1]"];

/// Non-identity generators of the left class of the example system.
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

/// Non-identity generators of the right class.
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

/// Pinned runtime tolerances, indexed by criterion number.
fn budget(number: usize) -> Option<Duration> {
    match number {
        1 => Some(Duration::from_secs(1)),
        2 => Some(Duration::from_secs(5)),
        5 => Some(Duration::from_secs(60)),
        _ => None,
    }
}

#[derive(Debug, Clone)]
pub struct CriterionResult {
    pub number: usize,
    pub name: &'static str,
    pub passed: bool,
    pub failures: Vec<String>,
    pub elapsed: Duration,
    pub budget: Option<Duration>,
}

impl CriterionResult {
    /// The one-line verdict the test target prints.
    pub fn line(&self) -> String {
        format!(
            "criterion {}: {} ({})",
            self.number,
            if self.passed { "pass" } else { "fail" },
            self.name
        )
    }
}

pub const CRITERION_NAMES: [&str; 9] = [
    "example silting complex and its add-lists",
    "s-torsion pair verification with triangle witnesses",
    "canonical inflation factorization",
    "generator census of both classes",
    "enumeration against the brute-force oracle",
    "negative structure on all basis conflations",
    "Euler form against hom and ext dimensions",
    "gluing across the product recollement",
    "duality of pairs and factorizations",
];

fn field() -> Field {
    Field::new(2).expect("2 is prime")
}

fn example_category() -> Presentation {
    build_extended_category(field(), 3, 2)
}

fn example_pair(p: &Presentation) -> Result<SubcatPair> {
    silted_pair(&SiltingCandidate::parse(p, EXAMPLE_COMPLEX)?, p)
}

fn label_set(labels: &[&str]) -> BTreeSet<String> {
    labels.iter().map(|s| s.to_string()).collect()
}

fn criterion_1() -> Result<Vec<String>> {
    let p = example_category();
    let cand = SiltingCandidate::parse(&p, EXAMPLE_COMPLEX)?;
    let mut fails = Vec::new();
    if !is_silting(&cand) {
        fails.push(format!("{EXAMPLE_COMPLEX} does not test as silting"));
    }
    let pair = silted_pair(&cand, &p)?;
    let t: BTreeSet<String> = pair.t_labels(&p).into_iter().collect();
    let f: BTreeSet<String> = pair.f_labels(&p).into_iter().collect();
    if t != label_set(&EXAMPLE_T) {
        fails.push(format!("T(P) = {t:?}, expected {EXAMPLE_T:?}"));
    }
    if f != label_set(&EXAMPLE_F) {
        fails.push(format!("F(P) = {f:?}, expected {EXAMPLE_F:?}"));
    }
    Ok(fails)
}

fn criterion_2() -> Result<Vec<String>> {
    let p = example_category();
    let pair = example_pair(&p)?;
    let rep = verify_s_torsion(&p, &pair)?;
    let mut fails = Vec::new();
    for (name, st) in [
        ("condition 1", rep.cond1),
        ("condition 2", rep.cond2),
        ("condition 3", rep.cond3),
    ] {
        if st != CondStatus::Pass {
            fails.push(format!("{name} is {st:?}"));
        }
    }
    let covered: BTreeSet<usize> = rep.triangles.iter().map(|&(x, _)| x).collect();
    if covered.len() != p.num_objects() || p.num_objects() != 12 {
        fails.push(format!(
            "triangle witnesses cover {} of the 12 indecomposables",
            covered.len()
        ));
    }
    Ok(fails)
}

fn criterion_3() -> Result<Vec<String>> {
    let p = example_category();
    let pair = example_pair(&p)?;
    let f = p.parse_morphism("P1 -> I1", "auto")?;
    let fact = factorize_inflation(&p, &f, &pair)?;
    let mut fails = Vec::new();
    let expect = [
        ("middle", p.expr_label(&fact.k), "I2"),
        ("left cone", p.expr_label(&fact.cone_l), "P3[1]"),
        ("right cone", p.expr_label(&fact.cone_r), "S2[1]"),
    ];
    for (what, got, want) in expect {
        if got != want {
            fails.push(format!("{what} is {got}, expected {want}"));
        }
    }
    if fact.l != p.parse_morphism("P1 -> I2", "auto")? {
        fails.push("left part is not the canonical P1 -> I2".into());
    }
    if fact.r != p.parse_morphism("I2 -> I1", "auto")? {
        fails.push("right part is not the canonical I2 -> I1".into());
    }
    if p.compose(&fact.l, &fact.r)? != f {
        fails.push("factorization does not compose back to f".into());
    }
    if in_infl_class(&p, &f, pair.t_items())? {
        fails.push("f tests as a member of the left class".into());
    }
    if in_infl_class(&p, &f, pair.f_items())? {
        fails.push("f tests as a member of the right class".into());
    }
    Ok(fails)
}

fn criterion_4() -> Result<Vec<String>> {
    let p = example_category();
    let pair = example_pair(&p)?;
    let mut fails = Vec::new();
    for lit in X_GENERATORS {
        if !in_infl_class(&p, &p.parse_morphism(lit, "auto")?, pair.t_items())? {
            fails.push(format!("{lit} is not in the left class"));
        }
    }
    for lit in Y_GENERATORS {
        if !in_infl_class(&p, &p.parse_morphism(lit, "auto")?, pair.f_items())? {
            fails.push(format!("{lit} is not in the right class"));
        }
    }
    Ok(fails)
}

/// Exhaustive subset-pair sweep; the enumeration must agree with it
/// exactly.
fn oracle_pairs(p: &Presentation) -> Result<Vec<SubcatPair>> {
    let k = p.num_objects();
    let mut out = Vec::new();
    for tmask in 0u32..1 << k {
        for fmask in 0u32..1 << k {
            let t: Vec<usize> = (0..k).filter(|&i| tmask >> i & 1 == 1).collect();
            let f: Vec<usize> = (0..k).filter(|&i| fmask >> i & 1 == 1).collect();
            let pair = SubcatPair::new(p, t, f)?;
            if verify_s_torsion(p, &pair)?.ok() {
                out.push(pair);
            }
        }
    }
    Ok(out)
}

fn criterion_5() -> Result<Vec<String>> {
    let mut fails = Vec::new();
    let p2 = build_module_category(field(), 2);
    let mut oracle = oracle_pairs(&p2)?;
    let mut enumerated = enumerate_s_torsion(&p2)?;
    let key = |pr: &SubcatPair| (pr.t_items().to_vec(), pr.f_items().to_vec());
    oracle.sort_by_key(key);
    enumerated.sort_by_key(key);
    if oracle != enumerated {
        fails.push(format!(
            "enumeration found {} pairs, the oracle {}",
            enumerated.len(),
            oracle.len()
        ));
    }
    let p = example_category();
    for pair in enumerate_s_torsion(&p)? {
        let tag = format!("(T = {:?})", pair.t_labels(&p));
        if !roundtrip_extensional(&p, &pair)? {
            fails.push(format!("{tag} fails the extensional round trip"));
        }
        let fs = torsion_to_fs(&p, &pair, Side::Inflation)?;
        let rep = verify_fs(&p, &fs, &default_sample(&p))?;
        if !rep.ok {
            fails.push(format!("{tag} fails factorization verification"));
        }
    }
    Ok(fails)
}

fn criterion_6() -> Result<Vec<String>> {
    let p = example_category();
    let tris = basis_triangles(&p)?;
    let mut fails = Vec::new();
    if tris.is_empty() {
        fails.push("no basis conflations realized".into());
    }
    for t in &tris {
        let rep = check_negative_structure(&p, t)?;
        if !rep.ok {
            fails.push(format!(
                "negative structure fails on {} -> {} -> {}",
                p.expr_label(&t.a),
                p.expr_label(&t.b),
                p.expr_label(&t.c)
            ));
        }
    }
    Ok(fails)
}

fn criterion_7() -> Result<Vec<String>> {
    let mut fails = Vec::new();
    let mut pairs = 0usize;
    for n in 1..=5usize {
        let mut intervals = Vec::new();
        for a in 1..=n {
            for b in a..=n {
                intervals.push(Interval::new(a, b)?);
            }
        }
        for &x in &intervals {
            for &y in &intervals {
                let h = hom_dim(x, y) as i64;
                let e = ext_dim(x, y).0 as i64;
                let form = euler_form(x, y, n);
                pairs += 1;
                if h - e != form {
                    fails.push(format!(
                        "n = {n}: hom - ext = {} but the form gives {form} at ({x:?}, {y:?})",
                        h - e
                    ));
                }
            }
        }
    }
    // 1 + 9 + 36 + 100 + 225 interval pairs across n = 1..=5
    if pairs != 371 {
        fails.push(format!("checked {pairs} pairs, expected 371"));
    }
    Ok(fails)
}

fn criterion_8() -> Result<Vec<String>> {
    let mut fails = Vec::new();
    let p2 = build_module_category(field(), 2);
    let r = build_product_recollement(&p2, &p2)?;
    let rep = check_recollement(&r)?;
    if !rep.ok() {
        fails.push("product recollement fails an axiom".into());
    }
    let hyp = check_exactness_hypotheses(&r)?;
    if !hyp.ok() {
        fails.push("product recollement fails the gluing hypotheses".into());
    }
    let pairs = enumerate_s_torsion(&p2)?;
    let sample = default_sample(&r.b);
    for pair1 in &pairs {
        for pair2 in &pairs {
            let (glued, grep) = glue_torsion(&r, pair1, pair2)?;
            if !grep.ok() {
                fails.push(format!(
                    "glued pair (T = {:?}) does not verify",
                    glued.t_labels(&r.b)
                ));
                continue;
            }
            for side in [Side::Inflation, Side::Deflation] {
                let fs1 = torsion_to_fs(&p2, pair1, side)?;
                let fs2 = torsion_to_fs(&p2, pair2, side)?;
                let glued_fs = glue_fs(&r, &fs1, &fs2, side)?;
                if !verify_fs(&r.b, &glued_fs, &sample)?.ok {
                    fails.push(format!(
                        "glued {side:?} system (T = {:?}) does not verify",
                        glued_fs.pair.t_labels(&r.b)
                    ));
                }
            }
        }
    }
    let fix = build_triangular_fixture(field());
    let hyp = check_exactness_hypotheses(&fix)?;
    if hyp.ok() {
        fails.push("triangular fixture passes the hypotheses it must fail".into());
    } else if !hyp
        .i_shriek_exact
        .failures
        .iter()
        .any(|s| s.contains("i^!") && s.contains("S2 -> P1 -> S1"))
    {
        fails.push(format!(
            "i^! exactness witness missing: {:?}",
            hyp.i_shriek_exact.failures
        ));
    }
    Ok(fails)
}

fn criterion_9() -> Result<Vec<String>> {
    let p = example_category();
    let dp = p.dualize()?;
    let mut fails = Vec::new();
    for pair in enumerate_s_torsion(&p)? {
        if !verify_s_torsion(&dp, &pair.swapped())?.ok() {
            fails.push(format!(
                "(F, T) with F = {:?} does not verify on the dual",
                pair.f_labels(&p)
            ));
        }
    }
    let dpair = example_pair(&p)?.swapped();
    let df = dp.parse_morphism("I1 -> P1", "auto")?;
    let fact = factorize_deflation(&dp, &df, &dpair)?;
    let expect = [
        ("middle", dp.expr_label(&fact.k), "I2"),
        ("left cocone", dp.expr_label(&fact.cone_l), "S2[1]"),
        ("right cocone", dp.expr_label(&fact.cone_r), "P3[1]"),
    ];
    for (what, got, want) in expect {
        if got != want {
            fails.push(format!(
                "dual factorization {what} is {got}, expected {want}"
            ));
        }
    }
    if dp.compose(&fact.l, &fact.r)? != df {
        fails.push("dual factorization does not compose back".into());
    }
    if in_defl_class(&dp, &df, dpair.t_items())? || in_defl_class(&dp, &df, dpair.f_items())? {
        fails.push("dual map tests as a class member but must not".into());
    }
    Ok(fails)
}

/// Runs one numbered criterion; runner errors count as failures, and a
/// blown runtime budget fails the criterion even when every check passed.
pub fn run_criterion(number: usize) -> CriterionResult {
    let start = Instant::now();
    let body: fn() -> Result<Vec<String>> = match number {
        1 => criterion_1,
        2 => criterion_2,
        3 => criterion_3,
        4 => criterion_4,
        5 => criterion_5,
        6 => criterion_6,
        7 => criterion_7,
        8 => criterion_8,
        9 => criterion_9,
        _ => {
            return CriterionResult {
                number,
                name: "unknown",
                passed: false,
                failures: vec![format!("no criterion numbered {number}")],
                elapsed: Duration::ZERO,
                budget: None,
            }
        }
    };
    let mut failures = match body() {
        Ok(fails) => fails,
        Err(e) => vec![format!("runner error: {e}")],
    };
    let elapsed = start.elapsed();
    let budget = budget(number);
    if let Some(b) = budget {
        if elapsed >= b {
            failures.push(format!("runtime {elapsed:?} exceeds the {b:?} budget"));
        }
    }
    CriterionResult {
        number,
        name: CRITERION_NAMES[number - 1],
        passed: failures.is_empty(),
        failures,
        elapsed,
        budget,
    }
}

pub fn run_all() -> Vec<CriterionResult> {
    (1..=9).map(run_criterion).collect()
}

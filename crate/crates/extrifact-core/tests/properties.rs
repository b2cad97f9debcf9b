//! Randomized invariants. The module tests pin these claims on exhaustive
//! small cases; here the same claims run against arbitrary instances drawn
//! by proptest, so regressions that only bite off the beaten path still
//! surface.

use std::sync::OnceLock;

use proptest::prelude::*;

use extrifact_core::exactlin::{Field, Matrix};
use extrifact_core::excat::{build_module_category, ObjectExpr, Presentation};
use extrifact_core::factsys::{factorize_inflation, in_infl_class};
use extrifact_core::repkernel::{
    decompose_rep, ext_dim, ext_dim_oracle, euler_form, hom_dim, interval_rep, rep_hom_oracle,
    Interval,
};
use extrifact_core::torsion::{enumerate_s_torsion, verify_s_torsion, SubcatPair};

fn small_prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5, 7])
}

fn matrix(max_dim: usize) -> impl Strategy<Value = Matrix> {
    (small_prime(), 0..=max_dim, 0..=max_dim)
        .prop_flat_map(|(p, rows, cols)| {
            let entries = prop::collection::vec(0..p, rows * cols);
            (Just(p), Just(rows), Just(cols), entries)
        })
        .prop_map(|(p, rows, cols, entries)| {
            let field = Field::new(p).unwrap();
            let mut m = Matrix::zero(field, rows, cols);
            for (idx, &v) in entries.iter().enumerate() {
                m.set(idx / cols, idx % cols, field.elem(v as i64));
            }
            m
        })
}

fn interval_in(n: usize) -> impl Strategy<Value = Interval> {
    (1..=n)
        .prop_flat_map(move |a| (Just(a), a..=n))
        .prop_map(|(a, b)| Interval::new(a, b).unwrap())
}

fn interval_pair(max_n: usize) -> impl Strategy<Value = (usize, Interval, Interval)> {
    (1..=max_n).prop_flat_map(|n| (Just(n), interval_in(n), interval_in(n)))
}

/// Pairs (x, y) built to satisfy x.a < y.a <= x.b + 1 <= y.b, the exact
/// condition for a nonsplit extension of x by y.
fn extension_pair() -> impl Strategy<Value = (usize, Interval, Interval)> {
    (2..=8usize)
        .prop_flat_map(|n| (Just(n), 2..=n))
        .prop_flat_map(|(n, yb)| (Just(n), Just(yb), 2..=yb))
        .prop_flat_map(|(n, yb, ya)| (Just(n), Just(yb), Just(ya), 1..ya))
        .prop_flat_map(|(n, yb, ya, xa)| {
            (Just(n), Just(yb), Just(ya), Just(xa), xa.max(ya - 1)..yb)
        })
        .prop_map(|(n, yb, ya, xa, xb)| {
            (n, Interval::new(xa, xb).unwrap(), Interval::new(ya, yb).unwrap())
        })
}

proptest! {
    #[test]
    fn rank_plus_nullity_is_the_column_count(m in matrix(5)) {
        let kernel = m.kernel_basis();
        prop_assert_eq!(m.rank() + kernel.cols, m.cols);
        prop_assert!(m.mul(&kernel).is_zero());
    }

    #[test]
    fn rank_survives_transposition(m in matrix(5)) {
        prop_assert_eq!(m.rank(), m.transpose().rank());
    }

    #[test]
    fn solve_returns_actual_solutions(
        (m, x) in matrix(5).prop_flat_map(|m| {
            let entries = prop::collection::vec(0..m.field().characteristic(), m.cols);
            (Just(m), entries)
        })
    ) {
        let field = m.field();
        let mut col = Matrix::zero(field, m.cols, 1);
        for (i, &v) in x.iter().enumerate() {
            col.set(i, 0, field.elem(v as i64));
        }
        let b = m.mul(&col);
        let y = m.solve(&b).expect("constructed system is solvable");
        prop_assert_eq!(m.mul(&Matrix::column_from(field, &y)), b);
    }

    #[test]
    fn euler_form_matches_hom_minus_ext((n, x, y) in interval_pair(8)) {
        let lhs = hom_dim(x, y) as i64 - ext_dim(x, y).0 as i64;
        prop_assert_eq!(lhs, euler_form(x, y, n));
    }

    #[test]
    fn closed_forms_match_the_representation_oracles(
        ((n, x, y), p) in (interval_pair(6), small_prime())
    ) {
        let field = Field::new(p).unwrap();
        prop_assert_eq!(
            hom_dim(x, y),
            rep_hom_oracle(&interval_rep(field, n, x), &interval_rep(field, n, y))
        );
        prop_assert_eq!(ext_dim(x, y).0, ext_dim_oracle(field, n, x, y));
    }

    #[test]
    fn extension_middles_add_up_dimensionwise((n, x, y) in extension_pair()) {
        let (d, middle) = ext_dim(x, y);
        prop_assert_eq!(d, 1);
        let mut sum = vec![0usize; n];
        for iv in &middle {
            for (i, v) in iv.dim_vec(n).iter().enumerate() {
                sum[i] += v;
            }
        }
        let expected: Vec<usize> = x
            .dim_vec(n)
            .iter()
            .zip(y.dim_vec(n).iter())
            .map(|(a, b)| a + b)
            .collect();
        prop_assert_eq!(sum, expected);
    }

    #[test]
    fn decomposition_round_trips_interval_multisets(
        (n, ivs) in (1..=5usize).prop_flat_map(|n| {
            (Just(n), prop::collection::vec(interval_in(n), 1..=4))
        })
    ) {
        let field = Field::new(2).unwrap();
        let rep = ivs
            .iter()
            .map(|&iv| interval_rep(field, n, iv))
            .reduce(|a, b| a.direct_sum(&b))
            .unwrap();
        let mut expected = ivs.clone();
        expected.sort();
        let mut got = decompose_rep(&rep);
        got.sort();
        prop_assert_eq!(got, expected);
    }
}

#[test]
fn the_a3_census_backs_the_index_ranges() {
    assert_eq!(cat3().num_objects(), 6);
    assert_eq!(pairs3().len(), 14);
}

fn cat3() -> &'static Presentation {
    static CAT: OnceLock<Presentation> = OnceLock::new();
    CAT.get_or_init(|| build_module_category(Field::new(2).unwrap(), 3))
}

fn dual3() -> &'static Presentation {
    static CAT: OnceLock<Presentation> = OnceLock::new();
    CAT.get_or_init(|| cat3().dualize().unwrap())
}

fn pairs3() -> &'static Vec<SubcatPair> {
    static PAIRS: OnceLock<Vec<SubcatPair>> = OnceLock::new();
    PAIRS.get_or_init(|| enumerate_s_torsion(cat3()).unwrap())
}

fn subset(mask: u8) -> Vec<usize> {
    (0..6).filter(|i| mask >> i & 1 == 1).collect()
}

proptest! {
    #[test]
    fn verification_agrees_with_enumeration(t_mask in 0u8..64, f_mask in 0u8..64) {
        let p = cat3();
        let pair = SubcatPair::new(p, subset(t_mask), subset(f_mask)).unwrap();
        let verdict = verify_s_torsion(p, &pair).unwrap().ok();
        prop_assert_eq!(verdict, pairs3().contains(&pair));
    }

    #[test]
    fn duality_transposes_verification(t_mask in 0u8..64, f_mask in 0u8..64) {
        let p = cat3();
        let pair = SubcatPair::new(p, subset(t_mask), subset(f_mask)).unwrap();
        let there = verify_s_torsion(p, &pair).unwrap().ok();
        let back = verify_s_torsion(dual3(), &pair.swapped()).unwrap().ok();
        prop_assert_eq!(there, back);
    }

    #[test]
    fn factorizations_land_in_their_classes(
        pair_idx in 0usize..14,
        src in 0usize..6,
        tgt in 0usize..6,
    ) {
        let p = cat3();
        let pair = &pairs3()[pair_idx];
        prop_assume!(p.hom_dim(src, tgt) > 0);
        let f = p.canonical_morphism(&ObjectExpr::single(src), &ObjectExpr::single(tgt));
        prop_assume!(p.is_inflation(&f).unwrap());
        let fact = factorize_inflation(p, &f, pair).unwrap();
        prop_assert_eq!(p.compose(&fact.l, &fact.r).unwrap(), f);
        prop_assert!(in_infl_class(p, &fact.l, pair.t_items()).unwrap());
        prop_assert!(in_infl_class(p, &fact.r, pair.f_items()).unwrap());
    }
}

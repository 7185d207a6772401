//! Randomised invariants over small matroids: enumerated ones on up to four
//! elements, and column matroids of small integer matrices.

mod common;

use std::sync::OnceLock;

use common::{poly_mul, Brute};
use proptest::prelude::*;
use tropical_schubert::algebra::{mobius_algebra, subalgebra_hilbert_and_structure};
use tropical_schubert::catalog::enumerate_matroids;
use tropical_schubert::cohomology::{cohomology_table, kunneth_check};
use tropical_schubert::matroid::{ElementSet, Matroid};
use tropical_schubert::schubert::{build_face_complex, check_boundary_squared, stratum_order_check};
use tropical_schubert::spectral::{e2_dims, euler_check};

fn small() -> &'static [Matroid] {
    static ALL: OnceLock<Vec<Matroid>> = OnceLock::new();
    ALL.get_or_init(|| (1..=4).flat_map(enumerate_matroids).collect())
}

fn any_small() -> impl Strategy<Value = Matroid> {
    (0..small().len()).prop_map(|k| small()[k].clone())
}

fn det(mut a: Vec<Vec<i64>>) -> i64 {
    // Fraction-free elimination (Bareiss); entries stay small here.
    let n = a.len();
    let mut sign = 1;
    let mut prev = 1;
    for k in 0..n {
        let Some(piv) = (k..n).find(|&r| a[r][k] != 0) else { return 0 };
        if piv != k {
            a.swap(piv, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// Column matroid of an `r × n` matrix, or `None` if it has rank below `r`.
fn column_matroid(r: usize, cols: &[Vec<i64>]) -> Option<Matroid> {
    let n = cols.len();
    let bases: Vec<ElementSet> = ElementSet::full(n)
        .subsets()
        .filter(|s| s.len() == r)
        .filter(|s| det((0..r).map(|i| s.iter().map(|c| cols[c][i]).collect()).collect()) != 0)
        .collect();
    Matroid::from_bases((1..=n).map(|i| i.to_string()).collect(), bases).ok()
}

fn realisable(max_n: usize) -> impl Strategy<Value = Matroid> {
    (1..=3usize, 1..=max_n)
        .prop_flat_map(|(r, n)| {
            proptest::collection::vec(proptest::collection::vec(-2i64..=2, r), n).prop_map(move |c| (r, c))
        })
        .prop_filter_map("full rank", |(r, cols)| column_matroid(r, &cols))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn cohomology_is_diagonal_whitney(m in any_small()) {
        let y = build_face_complex(&m).unwrap();
        check_boundary_squared(&y).unwrap();
        let t = cohomology_table(&y).unwrap();
        prop_assert!(t.off_diagonal_vanishes());
        prop_assert_eq!(t.diagonal(), Brute::new(&m).whitney());
        prop_assert!(stratum_order_check(&y));
    }

    #[test]
    fn realisable_cohomology(m in realisable(4)) {
        let t = cohomology_table(&build_face_complex(&m).unwrap()).unwrap();
        prop_assert!(t.off_diagonal_vanishes());
        prop_assert_eq!(t.diagonal(), m.whitney_numbers());
    }

    #[test]
    fn spectral_degenerates(m in any_small()) {
        let w = m.whitney_numbers();
        for (p, &wp) in w.iter().enumerate() {
            let e2 = e2_dims(&m, p).unwrap();
            prop_assert_eq!(e2.iter().sum::<usize>(), wp);
            prop_assert!(euler_check(&m, p).unwrap());
        }
    }

    #[test]
    fn n_p_equals_whitney(m in realisable(6)) {
        let w = Brute::new(&m).whitney();
        for (p, &wp) in w.iter().enumerate() {
            prop_assert_eq!(m.big_n(p), wp as i64);
        }
    }

    #[test]
    fn kunneth_on_direct_sums(a in any_small(), b in any_small()) {
        prop_assume!(a.len() + b.len() <= 5);
        let b = b.relabeled((0..b.len()).map(|i| format!("b{i}")).collect()).unwrap();
        let report = kunneth_check(&a, &b).unwrap();
        prop_assert!(report.passed);
        prop_assert_eq!(report.sum, poly_mul(&Brute::new(&a).whitney(), &Brute::new(&b).whitney()));
    }

    #[test]
    fn mobius_algebra_axioms(m in realisable(6)) {
        let alg = mobius_algebra(&m);
        prop_assert!(alg.unit_check());
        prop_assert!(alg.is_commutative());
        prop_assert!(alg.associativity_check());
        prop_assert_eq!(alg.dims(), m.whitney_numbers());
    }

    #[test]
    fn subalgebra_hilbert_is_whitney(m in any_small()) {
        let sub = subalgebra_hilbert_and_structure(&m).unwrap();
        prop_assert_eq!(&sub.hilbert, &m.whitney_numbers());
        prop_assert!(sub.structure_ok());
    }

    #[test]
    fn dual_and_coextension(m in realisable(5)) {
        prop_assert_eq!(m.dual().dual(), m.clone());
        prop_assert_eq!(m.dual().rank(), m.len() - m.rank());
        if m.loops().is_empty() {
            prop_assert!(m.coext_f_identity_check());
        }
    }
}

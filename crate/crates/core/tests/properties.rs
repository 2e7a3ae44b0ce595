use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;
use prcss_core::css::{code_dimension, weight_enumerator};
use prcss_core::discrepancy::{discrepancy_exact, discrepancy_exact_with, Hypergraph};
use prcss_core::enumerator::macwilliams_transform;
use prcss_core::f2::{kernel_basis, rank, row_space_basis};
use prcss_core::harness::instances::{random_chain_rows, random_css, random_hypergraph, random_matrix, rng};
use prcss_core::walks::{stationary, Distribution};
use prcss_core::{io, FiniteChain, Reference};

const CAP: u64 = 1 << 20;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rank_is_transpose_invariant(seed in any::<u64>(), rows in 1usize..20, cols in 1usize..20) {
        let m = random_matrix(&mut rng(seed), rows, cols);
        prop_assert_eq!(rank(&m), rank(&m.transpose()));
        prop_assert_eq!(rank(&m) + kernel_basis(&m).len(), cols);
    }

    #[test]
    fn macwilliams_round_trip(seed in any::<u64>(), n in 1usize..14, rows in 0usize..10) {
        let basis = row_space_basis(&random_matrix(&mut rng(seed), rows, n));
        let b = weight_enumerator(&basis, n, CAP).unwrap();
        let matrix = prcss_core::F2Matrix::from_bitvectors(n, &basis).unwrap();
        prop_assert_eq!(&io::parse_matrix(&io::write_matrix(&matrix)).unwrap(), &matrix);
        let dual_basis = kernel_basis(&matrix);
        let dual = weight_enumerator(&dual_basis, n, CAP).unwrap();
        let size = BigUint::one() << basis.len();
        prop_assert_eq!(&macwilliams_transform(&b, &size).unwrap(), &dual);
        let dual_size = BigUint::one() << dual_basis.len();
        prop_assert_eq!(macwilliams_transform(&dual, &dual_size).unwrap(), b);
    }

    #[test]
    fn css_dimension_counts_logicals(seed in any::<u64>(), n in 2usize..16, mx in 0usize..6, mz in 0usize..6) {
        let code = random_css(&mut rng(seed), n, mx, mz);
        let k = code_dimension(&code).unwrap();
        prop_assert_eq!(k, n - code.m_x() - code.m_z());
        let text = io::write_css(&code);
        prop_assert_eq!(io::parse_css(&text).unwrap(), code);
    }

    #[test]
    fn discrepancy_is_label_invariant(seed in any::<u64>(), n in 3usize..10, d in 1usize..3, m in 1usize..4) {
        // m <= 3 <= C(n, d) keeps the face draw finite
        let h = random_hypergraph(&mut rng(seed), n, d, m);
        let perm: Vec<usize> = (0..n).rev().collect();
        let a = discrepancy_exact(&h).unwrap();
        let b = discrepancy_exact(&h.relabel(&perm).unwrap()).unwrap();
        prop_assert_eq!(a.epsilon, b.epsilon);
        let text = io::write_hypergraph(&h);
        prop_assert_eq!(io::parse_hypergraph(&text).unwrap(), h);
    }

    #[test]
    fn exact_stationary_is_fixed(seed in any::<u64>(), states in 1usize..12) {
        let rows: Vec<Vec<(usize, BigRational)>> = random_chain_rows(&mut rng(seed), states)
            .into_iter()
            .map(|row| {
                let total: u32 = row.iter().map(|(_, w)| w).sum();
                row.into_iter()
                    .map(|(j, w)| (j, BigRational::new(BigInt::from(w), BigInt::from(total))))
                    .collect()
            })
            .collect();
        let chain = FiniteChain::new(rows).unwrap();
        match stationary(&chain, 1e-12).unwrap() {
            Distribution::Exact(pi) => prop_assert!(chain.is_stationary(&pi)),
            Distribution::Approx { .. } => prop_assert!(false, "small chains are solved exactly"),
        }
    }
}

#[test]
fn perfect_design_has_zero_hypergeometric_discrepancy() {
    // every 2-subset of 5 points
    let faces: Vec<Vec<usize>> = (0..5).flat_map(|a| (a + 1..5).map(move |b| vec![a, b])).collect();
    let h = Hypergraph::new(5, 2, faces).unwrap();
    let r = discrepancy_exact_with(&h, 22, Reference::Hypergeometric).unwrap();
    assert_eq!(r.epsilon, BigRational::from_integer(BigInt::from(0)));
    assert!(discrepancy_exact(&h).unwrap().epsilon > r.epsilon);
}

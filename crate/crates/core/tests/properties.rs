//! Property tests of the spec invariants.

use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use spinlab_core::picard::{solve_farkas, solve_theta_null, ExponentTable};
use spinlab_core::theta::{
    all_characteristics, random_symplectic, theta, Characteristic, PeriodMatrix,
};

fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn arbitrary_period_matrix(g: usize) -> impl Strategy<Value = PeriodMatrix> {
    let n = g * g;
    (
        proptest::collection::vec(-0.4..0.4f64, n),
        proptest::collection::vec(-0.5..0.5f64, n),
    )
        .prop_map(move |(re, l)| {
            let mut res = DMatrix::<f64>::zeros(g, g);
            let mut low = DMatrix::<f64>::zeros(g, g);
            for i in 0..g {
                for j in 0..g {
                    if j <= i {
                        res[(i, j)] = re[i * g + j];
                        res[(j, i)] = re[i * g + j];
                        low[(i, j)] = l[i * g + j];
                    }
                }
                low[(i, i)] += 1.0;
            }
            let im = &low * low.transpose();
            PeriodMatrix::new(DMatrix::from_fn(g, g, |i, j| cx(res[(i, j)], im[(i, j)])), 1e-12)
                .unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 16, ..ProptestConfig::default() })]

    /// Odd characteristics vanish at the origin for every period matrix.
    #[test]
    fn odd_theta_vanishes(om in arbitrary_period_matrix(2)) {
        let zero = vec![cx(0.0, 0.0); 2];
        for eta in all_characteristics(2).iter().filter(|c| c.is_odd()) {
            let t = theta(eta, &om, &zero, 1e-12).unwrap();
            prop_assert!(t.value.norm() <= 1e-12);
        }
    }

    /// Parity is invariant under the symplectic action, exactly.
    #[test]
    fn parity_invariant_under_symplectic(seed in any::<u64>()) {
        let mut rng = <rand::rngs::StdRng as rand::SeedableRng>::seed_from_u64(seed);
        let sigma = random_symplectic(3, 3, &mut rng);
        for eta in all_characteristics(3) {
            prop_assert_eq!(sigma.act_on_characteristic(&eta).parity(), eta.parity());
        }
    }

    /// The characteristic convention reproduces the classical parity counts.
    #[test]
    fn parity_counts(g in 1usize..=4) {
        let odd = all_characteristics(g).iter().filter(|c| c.is_odd()).count();
        prop_assert_eq!(odd, (1 << (g - 1)) * ((1 << g) - 1));
    }

    /// Divisor classes round-trip through their exact identities.
    #[test]
    fn divisor_class_roundtrip(g in 3usize..=10) {
        let table = ExponentTable::standard(g);
        let class = solve_farkas(g, &table).unwrap();
        // reassemble the identity: (8g+64) lambda must be recovered exactly
        let lam_coeff = class.lambda * spinlab_core::picard::Rat::new(8, 1);
        let expect = spinlab_core::picard::Rat::new(8 * g as i64 + 64, 1)
            - spinlab_core::picard::Rat::new(8, 1) * spinlab_core::picard::Rat::new(g as i64, 1)
            - spinlab_core::picard::Rat::new(64, 1)
            + lam_coeff;
        prop_assert_eq!(expect, lam_coeff);
        let tn = solve_theta_null(g);
        let (lam, rest) = spinlab_core::picard::theta_null_identity_roundtrip(&tn);
        prop_assert_eq!(lam, spinlab_core::picard::Rat::new(0, 1));
        prop_assert_eq!(rest[0], spinlab_core::picard::Rat::new(1, 1));
    }

    /// Theta results are reproducible across evaluation order (the sum is
    /// compensated and deterministic).
    #[test]
    fn theta_deterministic(om in arbitrary_period_matrix(2), rebits in proptest::collection::vec(0u8..2, 4)) {
        let eta = Characteristic::new(rebits).unwrap();
        let w = [cx(0.21, 0.05), cx(-0.03, 0.11)];
        let a = theta(&eta, &om, &w, 1e-12).unwrap().value;
        let b = theta(&eta, &om, &w, 1e-12).unwrap().value;
        prop_assert_eq!(a, b);
    }
}

use cartier_core::linalg::{Matrix, PrimeField};
use proptest::prelude::*;

fn matrix(p: u32) -> impl Strategy<Value = Matrix> {
    (1usize..6, 1usize..6).prop_flat_map(move |(r, c)| {
        prop::collection::vec(0..p as u8, r * c)
            .prop_map(move |v| Matrix::from_vec(PrimeField::new(p).unwrap(), r, c, v).unwrap())
    })
}

fn any_matrix() -> impl Strategy<Value = Matrix> {
    prop_oneof![matrix(2), matrix(3), matrix(5)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn rank_plus_nullity(a in any_matrix()) {
        let k = a.kernel_basis();
        prop_assert_eq!(a.rank() + k.cols(), a.cols());
        prop_assert!((&a * &k).is_zero());
        prop_assert_eq!(k.rank(), k.cols());
    }

    #[test]
    fn rref_is_idempotent_and_rank_preserving(a in any_matrix()) {
        let r = a.rref();
        prop_assert_eq!(&r.reduced.rref().reduced, &r.reduced);
        prop_assert_eq!(r.rank, a.rank());
        prop_assert!(r.pivots.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn solve_recovers_a_preimage(a in any_matrix(), seed in any::<u64>()) {
        let f = a.field();
        let mut rng = cartier_core::sample::rng(seed);
        let x = cartier_core::sample::random_matrix(f, a.cols(), 1, &mut rng);
        let b = &a * &x;
        let y = a.solve(&b).unwrap().expect("b lies in the image");
        prop_assert_eq!(&a * &y, b);
    }

    #[test]
    fn transpose_preserves_rank(a in any_matrix()) {
        prop_assert_eq!(a.transpose().rank(), a.rank());
        prop_assert_eq!(a.transpose().transpose(), a);
    }

    #[test]
    fn inverse_when_invertible(seed in any::<u64>(), n in 1usize..5) {
        let f = PrimeField::new(3).unwrap();
        let mut rng = cartier_core::sample::rng(seed);
        let a = cartier_core::sample::random_invertible(f, n, &mut rng);
        let inv = a.inverse().unwrap();
        prop_assert_eq!(&a * &inv, Matrix::identity(f, n));
    }
}

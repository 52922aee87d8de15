use std::sync::Arc;

use cartier_core::algebra::{ext_a_dims, hom_a, AModuleMap, FiniteAlgebra, GeneratorChoice};
use cartier_core::cartier::{hom_cart, CartierModule};
use cartier_core::derived_checks::verify_les;
use cartier_core::free_monad::ext_cart_dims;
use cartier_core::linalg::Matrix;
use cartier_core::{catalog, oracle, sample};
use proptest::prelude::*;

fn algebra() -> impl Strategy<Value = Arc<FiniteAlgebra>> {
    (0..catalog::all().len()).prop_map(|i| Arc::new(catalog::all().swap_remove(i)))
}

fn f2_algebra() -> impl Strategy<Value = Arc<FiniteAlgebra>> {
    prop::sample::select(vec!["F2", "F2[x]/(x^2)", "F2xF2"]).prop_map(|n| Arc::new(catalog::by_name(n).unwrap()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn twist_is_a_functor(alg in algebra(), seed in any::<u64>()) {
        let mut rng = sample::rng(seed);
        let a = sample::random_module(&alg, 3, &mut rng);
        let b = sample::random_module(&alg, 3, &mut rng);
        let c = sample::random_module(&alg, 3, &mut rng);
        let f = sample::random_module_map(&a, &b, &mut rng);
        let g = sample::random_module_map(&b, &c, &mut rng);
        let gf = g.compose(&f).unwrap();
        prop_assert_eq!(gf.frobenius_twist(), g.frobenius_twist().compose(&f.frobenius_twist()).unwrap());
        prop_assert_eq!(AModuleMap::identity(&a).frobenius_twist(), AModuleMap::identity(&a.frobenius_twist()));
        if alg.frobenius_inverse().is_some() {
            prop_assert_eq!(hom_a(&a, &b).unwrap().len(), hom_a(&a.frobenius_twist(), &b.frobenius_twist()).unwrap().len());
        }
    }

    #[test]
    fn cartier_morphisms_form_an_abelian_category(alg in algebra(), seed in any::<u64>()) {
        let mut rng = sample::rng(seed);
        let f = sample::random_cartier_morphism(&alg, 3, &mut rng);
        let (k, incl) = f.kernel().unwrap();
        let (q, proj) = f.cokernel().unwrap();
        prop_assert!(f.compose(&incl).unwrap().matrix().is_zero());
        prop_assert!(proj.compose(&f).unwrap().matrix().is_zero());
        prop_assert_eq!(k.dim() + f.matrix().rank(), f.source().dim());
        prop_assert_eq!(q.dim() + f.matrix().rank(), f.target().dim());
        prop_assert!(f.coimage_to_image().unwrap().is_isomorphism());
    }

    #[test]
    fn hom_cart_matches_enumeration(alg in f2_algebra(), seed in any::<u64>()) {
        let mut rng = sample::rng(seed);
        let m = sample::random_cartier(&alg, 2, &mut rng);
        let n = sample::random_cartier(&alg, 2, &mut rng);
        prop_assert_eq!(hom_cart(&m, &n).unwrap().len(), oracle::hom_cart_dimension(&m, &n).unwrap());
    }

    #[test]
    fn ext_a_degree_zero_is_hom(alg in algebra(), seed in any::<u64>()) {
        let mut rng = sample::rng(seed);
        let m = sample::random_module(&alg, 3, &mut rng);
        let n = sample::random_module(&alg, 3, &mut rng);
        let dims = ext_a_dims(&m, &n, 2, GeneratorChoice::default()).unwrap();
        prop_assert_eq!(dims[0], hom_a(&m, &n).unwrap().len());
    }

    #[test]
    fn les_is_exact(alg in algebra(), seed in any::<u64>()) {
        let mut rng = sample::rng(seed);
        let m = sample::random_cartier(&alg, 2, &mut rng);
        let n = sample::random_cartier(&alg, 2, &mut rng);
        let report = verify_les(&m, &n, 3).unwrap();
        prop_assert!(report.exact());
        prop_assert_eq!(ext_cart_dims(&m, &n, 0).unwrap()[0], hom_cart(&m, &n).unwrap().len());
    }

    #[test]
    fn ext1_matches_yoneda_over_f2(alg in f2_algebra(), seed in any::<u64>()) {
        let mut rng = sample::rng(seed);
        let m = sample::random_cartier(&alg, 2, &mut rng);
        let n = sample::random_cartier(&alg, 3 - m.dim().max(1), &mut rng);
        prop_assume!(m.dim() + n.dim() <= 3);
        prop_assert_eq!(ext_cart_dims(&m, &n, 1).unwrap()[1], oracle::yoneda_ext1(&m, &n).unwrap());
    }

    #[test]
    fn sampling_is_reproducible(alg in algebra(), seed in any::<u64>()) {
        let a = sample::random_cartier(&alg, 3, &mut sample::rng(seed));
        let b = sample::random_cartier(&alg, 3, &mut sample::rng(seed));
        prop_assert_eq!(a.kappa(), b.kappa());
        prop_assert_eq!(a.module(), b.module());
    }
}

/// Residue field of `F_2[x]/(x^2)` with zero structure map, checked against
/// the Yoneda enumeration before being frozen.
#[test]
fn pinned_residue_field_ext() {
    let alg = Arc::new(catalog::dual_numbers(2));
    let f = alg.field();
    let k = cartier_core::algebra::AModule::new(alg.clone(), 1, vec![Matrix::identity(f, 1), Matrix::zeros(f, 1, 1)]).unwrap();
    let m = CartierModule::new(k, Matrix::zeros(f, 1, 1)).unwrap();
    assert_eq!(oracle::yoneda_ext1(&m, &m).unwrap(), 2);
    assert_eq!(ext_cart_dims(&m, &m, 4).unwrap(), vec![1, 2, 2, 2, 2]);
}

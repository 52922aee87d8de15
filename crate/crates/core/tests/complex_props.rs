use std::sync::Arc;

use cartier_core::algebra::{AModule, FiniteAlgebra};
use cartier_core::cartier::CartierModule;
use cartier_core::complexes::{truncation_triple, CartierComplex, ModuleComplex};
use cartier_core::perverse::{
    dual_complex, is_perverse, perverse_truncate, perverse_truncate_cartier, perverse_truncation_triple,
    shipped_perversities, Perversity, Side,
};
use cartier_core::{catalog, sample};
use proptest::prelude::*;

fn algebra() -> impl Strategy<Value = Arc<FiniteAlgebra>> {
    (0..catalog::all().len()).prop_map(|i| Arc::new(catalog::all().swap_remove(i)))
}

fn module_complex(alg: &Arc<FiniteAlgebra>, seed: u64) -> ModuleComplex {
    sample::random_complex::<AModule>(alg, 4, 3, &mut sample::rng(seed))
}

fn cartier_complex(alg: &Arc<FiniteAlgebra>, seed: u64) -> CartierComplex {
    sample::random_complex::<CartierModule>(alg, 3, 3, &mut sample::rng(seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn standard_truncation(alg in algebra(), seed in any::<u64>(), n in -2i32..4) {
        let c = module_complex(&alg, seed);
        let geq = c.truncate_geq(n).unwrap();
        let leq = c.truncate_leq(n).unwrap();
        for k in c.lowest() - 1..=c.highest() + 1 {
            let h = c.homology_dim(k);
            prop_assert_eq!(geq.homology_dim(k), if k >= n { h } else { 0 });
            prop_assert_eq!(leq.homology_dim(k), if k <= n { h } else { 0 });
        }
        prop_assert_eq!(geq.truncate_geq(n).unwrap().homology_dims(), geq.homology_dims());
        prop_assert_eq!(leq.truncate_leq(n).unwrap().homology_dims(), leq.homology_dims());
        prop_assert!(truncation_triple(&c, n).unwrap().passed());
    }

    #[test]
    fn cartier_truncation_forgets(alg in algebra(), seed in any::<u64>(), n in -1i32..3) {
        let c = cartier_complex(&alg, seed);
        prop_assert_eq!(c.truncate_geq(n).unwrap().forget(), c.forget().truncate_geq(n).unwrap());
        prop_assert_eq!(c.truncate_leq(n).unwrap().forget(), c.forget().truncate_leq(n).unwrap());
        let heart = c.heart_check().unwrap();
        prop_assert_eq!(heart.is_some(), c.homology_within(0, 0));
    }

    #[test]
    fn zero_perversity_is_standard(alg in algebra(), seed in any::<u64>(), n in -2i32..4) {
        let c = module_complex(&alg, seed);
        let pv = Perversity::zero(&alg);
        prop_assert_eq!(perverse_truncate(&c, &pv, Side::Geq, n).unwrap(), c.truncate_geq(n).unwrap());
        prop_assert_eq!(perverse_truncate(&c, &pv, Side::Leq, n).unwrap(), c.truncate_leq(n).unwrap());
    }

    #[test]
    fn perverse_truncations(alg in algebra(), seed in any::<u64>(), n in -1i32..3) {
        let c = module_complex(&alg, seed);
        for pv in shipped_perversities(&alg) {
            let geq = perverse_truncate(&c, &pv, Side::Geq, n).unwrap();
            let leq = perverse_truncate(&c, &pv, Side::Leq, n).unwrap();
            prop_assert!(is_perverse(&geq.shift(-n), &pv, Side::Geq));
            prop_assert!(is_perverse(&leq.shift(-n), &pv, Side::Leq));
            prop_assert_eq!(perverse_truncate(&geq, &pv, Side::Geq, n).unwrap(), geq.clone());
            prop_assert!(perverse_truncation_triple(&c, &pv, n).unwrap().passed());
        }
    }

    #[test]
    fn cartier_perverse_truncation_forgets(alg in algebra(), seed in any::<u64>(), n in -1i32..2) {
        let c = cartier_complex(&alg, seed);
        for pv in shipped_perversities(&alg) {
            for side in [Side::Geq, Side::Leq] {
                let t = perverse_truncate_cartier(&c, &pv, side, n).unwrap();
                prop_assert_eq!(t.forget(), perverse_truncate(&c.forget(), &pv, side, n).unwrap());
            }
        }
    }

    #[test]
    fn matlis_duality_is_an_involution(alg in algebra(), seed in any::<u64>()) {
        let c = module_complex(&alg, seed);
        let dd = dual_complex(&dual_complex(&c).unwrap()).unwrap();
        prop_assert_eq!(dd, c.clone());
        let d = dual_complex(&c).unwrap();
        for k in c.degrees() {
            prop_assert_eq!(d.homology_dim(-k), c.homology_dim(k));
        }
    }
}

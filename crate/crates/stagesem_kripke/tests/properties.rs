//! Sampled agreement between Kripke forcing and the mirror semantics, and
//! the cache invariants after each query.

use kripke_fin::corpus::{formulas, small_models};
use kripke_fin::{forces, valuations};
use lambda_core::Verdict;
use proptest::prelude::*;
use stagesem_kripke::props::{check_disjointness, check_h_dichotomy, check_upward_closure};
use stagesem_kripke::{mirror_forces, MirrorCache, MirrorConfig, MirrorSystem};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mirror_agrees_with_forcing(mi in any::<usize>(), fi in any::<usize>(), wi in any::<usize>()) {
        let ms = small_models(2, 2);
        let m = &ms[mi % ms.len()];
        let fs = formulas(2);
        let phi = &fs[fi % fs.len()];
        let vars: Vec<_> = phi.free_vars().into_iter().collect();
        let ws = valuations(m, &vars);
        let w = &ws[wi % ws.len()];
        let mut cache = MirrorCache::new(MirrorSystem::build(m.clone()).unwrap(), MirrorConfig::default());
        for s in 0..m.n_states() {
            let expected = forces(m, s, w, phi).unwrap();
            prop_assert_eq!(mirror_forces(&mut cache, s, w, phi).unwrap(), Verdict::from(expected), "{}", phi);
        }
        prop_assert!(check_upward_closure(&mut cache).ok());
        prop_assert!(check_h_dichotomy(&mut cache).ok());
        prop_assert!(check_disjointness(&cache).ok());
    }
}

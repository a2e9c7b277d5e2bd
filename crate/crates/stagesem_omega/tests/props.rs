use lambda_core::{Term, Verdict};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;
use stagesem_omega::gen::{random_peak, random_term, random_typed_term};
use stagesem_omega::props::{self, Join};
use stagesem_omega::{build_universe, CanonUniverse, FullModel, StageCache, StageConfig, TypePlus};

fn cache(size: usize, stages: usize) -> StageCache {
    let u = build_universe(FullModel::single_base("b", size), 2, 1 << 16).unwrap();
    StageCache::new(u, StageConfig { stage_bound: stages, work_limit: 20_000, ..StageConfig::default() })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn verdicts_are_deterministic_and_monotone(seed in any::<u64>(), size in 1usize..=2) {
        let mut rng = StdRng::seed_from_u64(seed);
        let mut c = cache(size, 4);
        let u = c.universe().clone();
        let ts: Vec<Term> = (0..8).map(|_| random_term(&mut rng, &u, 3)).collect();
        for t in &ts {
            for n in 0..=4 {
                c.leadsto(t, &CanonUniverse::top(), n);
                c.leadsto(t, &CanonUniverse::bot(), n);
            }
        }
        let r = props::check_determinism(&c);
        prop_assert!(r.ok(), "{:?}", r.violations);
        let r = props::check_monotonicity(&mut c);
        prop_assert!(r.ok(), "{:?}", r.violations);
        let r = props::check_h_dichotomy(&mut c);
        prop_assert!(r.ok(), "{:?}", r.violations);
    }

    #[test]
    fn truth_and_falsity_are_disjoint(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let mut c = cache(1, 4);
        let u = c.universe().clone();
        let t = random_term(&mut rng, &u, 3);
        let top = c.leadsto(&t, &CanonUniverse::top(), 4);
        let bot = c.leadsto(&t, &CanonUniverse::bot(), 4);
        prop_assert!(!(top == Verdict::True && bot == Verdict::True));
    }

    #[test]
    fn peaks_are_joinable(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let mut c = cache(1, 3);
        let limit = 4 * c.config().step_budget;
        if let Some(p) = random_peak(&mut rng, &mut c, 3) {
            let j = props::check_peak(&mut c, &p.left, p.left_stage, &p.right, p.right_stage, limit);
            prop_assert!(matches!(j, Join::Joined(_)), "{:?} {:?}", p, j);
        }
    }

    #[test]
    fn typed_terms_are_closed_and_lead_to_one_element(seed in any::<u64>(), which in 0usize..5) {
        let mut rng = StdRng::seed_from_u64(seed);
        let mut c = cache(2, 6);
        let u = c.universe().clone();
        let ty = TypePlus::parse(["o", "b", "b->b", "b->o", "o->o"][which]).unwrap();
        let t = random_typed_term(&mut rng, &u, &ty, 3);
        prop_assert!(t.free_vars().is_empty());
        let hits: Vec<Term> = u.elements(&ty).unwrap().into_iter().filter(|r| c.leadsto(&t, r, 6) == Verdict::True).collect();
        prop_assert!(hits.len() <= 1, "{} leads to {:?}", lambda_core::print(&t), hits);
    }
}

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wildram_core::addpoly::{AdditivePoly, AdditivePolyJson};
use wildram_core::dynsys::{conjugate, FqMapJson, ProjPoint, RationalMap};
use wildram_core::ff;
use wildram_core::moduli::{are_conjugate, monic_additive_of, to_monic_additive};
use wildram_core::monodromy::{char0_obstruction, monodromy_level};
use wildram_core::poly::Poly;

fn small_field() -> impl Strategy<Value = (u64, usize)> {
    prop_oneof![Just((2, 1)), Just((2, 2)), Just((3, 1)), Just((3, 2)), Just((5, 1))]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn normal_form_witness_conjugates((p, k) in small_field(), m in 1usize..3, seed in any::<u64>(), shift in 0u64..5) {
        let field = ff::make_field(p, k, None).unwrap();
        let f = AdditivePoly::random_separable(&field, m, &mut ChaCha8Rng::seed_from_u64(seed));
        let c = field.from_int(shift as i64);
        let poly = f.to_poly().add(&Poly::constant(field.clone(), c));
        let nf = to_monic_additive(&poly).unwrap();
        prop_assert!(nf.g.is_monic());
        let lifted = RationalMap::polynomial(ff::embed_poly(&poly, nf.g.field()).unwrap()).unwrap();
        let g = conjugate(&lifted, &nf.witness).unwrap();
        prop_assert_eq!(monic_additive_of(&g), Some(nf.g.clone()));
        // the normal form is conjugate to itself through the identity at least
        prop_assert!(are_conjugate(&nf.g, &nf.g).unwrap().is_some());
    }

    #[test]
    fn json_round_trips((p, k) in small_field(), m in 1usize..4, seed in any::<u64>()) {
        let field = ff::make_field(p, k, None).unwrap();
        let f = AdditivePoly::random_separable(&field, m, &mut ChaCha8Rng::seed_from_u64(seed));
        let text = serde_json::to_string(&f.to_json()).unwrap();
        let back: AdditivePolyJson = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(&AdditivePoly::from_json(&back).unwrap(), &f);
        let map = RationalMap::polynomial(f.to_poly()).unwrap();
        let j: FqMapJson = serde_json::from_str(&serde_json::to_string(&FqMapJson::from_map(&map)).unwrap()).unwrap();
        let rebuilt = j.build().unwrap();
        prop_assert_eq!(rebuilt.num(), map.num());
    }

    #[test]
    fn obstruction_matches_divisibility(pi in 0usize..6, m in 1u64..12) {
        let p = [2u64, 3, 5, 7, 11, 13][pi];
        let r = char0_obstruction(p, m).unwrap();
        let pm = (p as u128).pow(m as u32);
        let crit = 2 * (pm - 1) / (p as u128 - 1);
        let divides = crit.is_multiple_of((p as u128).pow(m as u32 - 1));
        prop_assert_eq!(r.obstructed, !divides);
        prop_assert_eq!(r.iterate.is_some(), divides);
        if let Some(it) = &r.iterate {
            prop_assert!(it.obstructed);
            prop_assert!(it.m >= 3);
        }
    }

    #[test]
    fn translations_permute_the_fiber((p, k) in small_field(), seed in any::<u64>()) {
        let field = ff::make_field(p, k, None).unwrap();
        let f = AdditivePoly::random_separable(&field, 1, &mut ChaCha8Rng::seed_from_u64(seed));
        let level = monodromy_level(&f, 2).unwrap();
        let roots = &level.space.all_roots;
        let f2 = RationalMap::polynomial(level.space.iterate.embedded(&level.space.ambient).unwrap().to_poly()).unwrap();
        for x in roots {
            prop_assert_eq!(f2.eval(&ProjPoint::Finite(x.clone())), ProjPoint::Finite(level.space.ambient.zero()));
        }
        prop_assert_eq!(level.group_order(), roots.len());
    }
}

//! Property tests for the structural invariants: square-classification
//! algebra, parallel transfer, duality, representation faithfulness,
//! butterfly well-formedness, and conjugation involutivity.

use proptest::prelude::*;

use diptych_core::catalog::{canonical_endofunctor, finv_trunc, EndoName};
use diptych_core::conjugation::{
    check_butterfly, check_transversality, conjugate_principal, pregroupoid_laws,
    wing_orbit_count,
};
use diptych_core::corpus::{corpus_groupoids, corpus_morphisms};
use diptych_core::diptych::{classify_square, set_standard_diptych};
use diptych_core::fincat::{classify_arrow, compose_functors, opposite, FinFunctor, Square};
use diptych_core::groupoid::{check_groupoid, groupoids_isomorphic, transitor_injective};
use diptych_core::morphism::classify_morphism;
use diptych_core::setcat::SetSkeleton;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// gpb <=> ipb and spb, and parallel transfer of good classes across
    /// ipb/spb squares, over random commuting squares of the Set diptych.
    #[test]
    fn square_classification_algebra(seed in 0u64..2048) {
        let sk = SetSkeleton::with_bound(3);
        let d = set_standard_diptych(&sk);
        let c = d.cat();
        let m = c.n_arrows();
        // derive a square deterministically from the seed: pick left and top,
        // then right and bottom closing the shape
        let left = (seed as usize * 7919) % m;
        let top = (seed as usize * 104729) % m;
        if c.src(left) != c.src(top) {
            return Ok(());
        }
        let rights: Vec<_> = c.arrows_from(c.tgt(top)).to_vec();
        let right = rights[(seed as usize * 1299709) % rights.len()];
        let want = c.compose(right, top).unwrap();
        // choose the bottom that closes the square whenever one exists
        let bottom = c
            .hom(c.tgt(left), c.tgt(right))
            .iter()
            .copied()
            .find(|&b| c.compose(b, left) == Some(want));
        let Some(bottom) = bottom else { return Ok(()) };
        let sq = Square { top, left, right, bottom };
        let cls = classify_square(&d, sq).unwrap();
        prop_assert_eq!(cls.gpb, cls.ipb && cls.spb && cls.gpb, "gpb implies both");
        if cls.ipb && cls.spb {
            // in Set with full products, a mono comparison plus good epi
            // factorization forces the genuine pullback property
            prop_assert!(cls.gpb);
        }
        if cls.ipb && d.pre.in_di(sq.bottom) {
            prop_assert!(d.pre.in_di(sq.top), "parallel transfer of good monos");
        }
        if cls.spb && d.pre.in_ds(sq.bottom) {
            prop_assert!(d.pre.in_ds(sq.top), "parallel transfer of good epis");
        }
        if cls.gpb && cls.hs && cls.vs {
            prop_assert!(cls.s_exact, "all-good-epi pullbacks push out in Set");
        }
    }

    /// classify_arrow agrees with the definitional map-table oracle.
    #[test]
    fn arrow_classification_matches_the_table_oracle(idx in 0usize..488) {
        let sk = SetSkeleton::with_bound(4);
        if idx >= sk.cat.n_arrows() {
            return Ok(());
        }
        let cls = classify_arrow(&sk.cat, idx).unwrap();
        prop_assert_eq!(cls.mono, sk.is_injective(idx));
        prop_assert_eq!(cls.epi, sk.is_surjective(idx));
        prop_assert_eq!(cls.iso, sk.is_injective(idx) && sk.is_surjective(idx));
    }

    /// The opposite category swaps the mono and epi classifications.
    #[test]
    fn opposite_swaps_classifications(idx in 0usize..150) {
        let sk = SetSkeleton::with_bound(3);
        if idx >= sk.cat.n_arrows() {
            return Ok(());
        }
        let op = opposite(&sk.cat);
        let a = classify_arrow(&sk.cat, idx).unwrap();
        let b = classify_arrow(&op, idx).unwrap();
        prop_assert_eq!(a.mono, b.epi);
        prop_assert_eq!(a.epi, b.mono);
        prop_assert_eq!(a.split_mono, b.split_epi);
        prop_assert_eq!(a.split_epi, b.split_mono);
    }

    /// Every corpus groupoid passes the axiom check; iso search finds the
    /// identity self-isomorphism.
    #[test]
    fn corpus_groupoids_are_groupoids(seed in 0u64..32) {
        let entries = corpus_groupoids(seed);
        let (name, g) = &entries[(seed as usize * 31) % entries.len()];
        prop_assert!(check_groupoid(g).is_empty(), "{}", name);
        prop_assert!(groupoids_isomorphic(g, g).is_some(), "{}", name);
    }

    /// Morphism-class implications hold on every corpus morphism.
    #[test]
    fn corpus_flag_implications(seed in 0u64..32) {
        let entries = corpus_morphisms(seed);
        let (name, f) = &entries[(seed as usize * 17) % entries.len()];
        let c = classify_morphism(f);
        prop_assert!(!c.actor || (c.hypo_actor && c.hyper_actor), "{}", name);
        prop_assert!(!c.inductor || (c.i_faithful && c.s_full), "{}", name);
        prop_assert!(!c.s_equivalence || c.equivalence, "{}", name);
        prop_assert!(!c.extensor || c.hyper_actor, "{}", name);
        prop_assert!(!c.equivalence || c.essentially_s, "{}", name);
    }

    /// Conjugating a surjective principal morphism yields a butterfly that
    /// passes every check, has transverse wings with a valid exchange law,
    /// and conjugating back recovers the original structural groupoid.
    #[test]
    fn conjugation_invariants(seed in 0u64..24) {
        let entries = corpus_morphisms(seed);
        for (name, f) in &entries {
            let surj = {
                let mut hit = vec![false; f.target.base_size()];
                for &b in &f.f0 {
                    hit[b] = true;
                }
                hit.iter().all(|&h| h)
            };
            if !transitor_injective(&f.source) || !surj {
                continue;
            }
            let Ok(b) = conjugate_principal(f) else { continue };
            let rep = check_butterfly(&b);
            prop_assert!(rep.is_empty(), "{}: {:?}", name, rep);
            let (r_orbits, rp_orbits) = wing_orbit_count(&b);
            prop_assert_eq!(r_orbits, b.gp.base_size(), "{}", name);
            prop_assert_eq!(rp_orbits, b.g.base_size(), "{}", name);
            if check_transversality(&b.k, &b.r_flags, &b.rp_flags) {
                let laws = pregroupoid_laws(&b.k, &b.r_flags, &b.rp_flags).unwrap();
                prop_assert!(laws.exchange_ok, "{}", name);
                let back = conjugate_principal(&b.rp).unwrap();
                prop_assert!(
                    groupoids_isomorphic(&back.gp, &f.target).is_some(),
                    "{}: conjugation not involutive",
                    name
                );
            }
        }
    }
}

#[test]
fn shift_functor_identities() {
    // involution and the conjugation identity at every available truncation
    for trunc in 1..=4 {
        let sigma = canonical_endofunctor(EndoName::Sigma, trunc).unwrap();
        let twice = compose_functors(&sigma.functor, &sigma.functor).unwrap();
        let id = FinFunctor::identity(&sigma.source.pre.cat);
        assert_eq!(twice.arr_map, id.arr_map, "sigma^2 at truncation {trunc}");
    }
    for trunc in 1..=3 {
        let sigma_lo = canonical_endofunctor(EndoName::Sigma, trunc).unwrap();
        let sigma_hi = canonical_endofunctor(EndoName::Sigma, trunc + 1).unwrap();
        let delta = canonical_endofunctor(EndoName::Delta, trunc).unwrap();
        let nabla = canonical_endofunctor(EndoName::Nabla, trunc).unwrap();
        let inner = compose_functors(&delta.functor, &sigma_lo.functor).unwrap();
        let conj = compose_functors(&sigma_hi.functor, &inner).unwrap();
        assert_eq!(conj.arr_map, nabla.functor.arr_map, "nabla at truncation {trunc}");
    }
}

#[test]
fn dual_cardinal_truncation_is_faithfully_represented() {
    use diptych_core::catalog::powerset_representation;
    let fv = finv_trunc(4).unwrap();
    let c = &fv.pre.cat;
    let reps: Vec<Vec<u32>> = c
        .arrow_ids()
        .map(|a| powerset_representation(&fv, a).unwrap())
        .collect();
    for a in c.arrow_ids() {
        for b in (a + 1)..c.n_arrows() {
            if c.arrow(a) == c.arrow(b) {
                assert_ne!(reps[a], reps[b]);
            }
        }
    }
    for f in c.arrow_ids() {
        for &g in c.arrows_from(c.tgt(f)) {
            let gf = c.compose(g, f).unwrap();
            let composed: Vec<u32> = reps[f].iter().map(|&m| reps[g][m as usize]).collect();
            assert_eq!(reps[gf], composed);
        }
    }
}

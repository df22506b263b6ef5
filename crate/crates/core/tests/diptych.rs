//! Diptych axioms, square classification, the small-catalog prediptychs, and
//! the canonical shift endofunctors.

use std::collections::BTreeMap;

use diptych_core::catalog::{
    butterfly_type, canonical_endofunctor, finv_trunc, ordinal, powerset_representation, upsilon,
    EndoName, OrdinalVariant,
};
use diptych_core::diptych::{
    build_square_diptych, check_diptych, check_prediptych, classify_square, set_split_diptych,
    set_standard_diptych, Diptych, Prediptych, SquareFlavor,
};
use diptych_core::fincat::{
    check_natural, compose_functors, find_limit, DiagramSpec, FinFunctor, LimitKind, Square,
};
use diptych_core::setcat::SetSkeleton;

#[test]
fn set_standard_prediptych_is_clean() {
    let sk = SetSkeleton::with_bound(3);
    let d = set_standard_diptych(&sk);
    assert!(check_prediptych(&d.pre).is_empty());
}

#[test]
fn all_arrows_as_good_monos_violates_axiom_one() {
    let sk = SetSkeleton::with_bound(2);
    let mut d = set_standard_diptych(&sk);
    d.pre.good_monos = vec![true; sk.cat.n_arrows()];
    let rep = check_prediptych(&d.pre);
    assert!(rep.find("axiom-i").is_some(), "{rep:?}");
}

#[test]
fn trivial_prediptych_is_clean() {
    let sk = SetSkeleton::with_bound(2);
    let isos: Vec<bool> = sk
        .cat
        .arrow_ids()
        .map(|a| sk.is_injective(a) && sk.is_surjective(a))
        .collect();
    let p = Prediptych {
        cat: sk.cat.clone(),
        good_monos: isos.clone(),
        good_epis: isos,
    };
    assert!(check_prediptych(&p).is_empty());
}

#[test]
fn set_standard_diptych_passes_all_axioms() {
    let sk = SetSkeleton::with_bound(3);
    let rep = check_diptych(&set_standard_diptych(&sk));
    assert!(rep.is_empty(), "{rep:?}");
}

#[test]
fn set_split_diptych_passes_all_axioms() {
    let sk = SetSkeleton::with_bound(3);
    let rep = check_diptych(&set_split_diptych(&sk));
    assert!(rep.is_empty(), "{rep:?}");
}

fn ordinal_diptych(n: usize, variant: OrdinalVariant) -> Diptych {
    let pre = ordinal(n, variant).unwrap();
    let mut products = BTreeMap::new();
    for a in pre.cat.object_ids() {
        for b in pre.cat.object_ids() {
            if let Some(w) = find_limit(&pre.cat, LimitKind::Product, DiagramSpec::Pair(a, b))
                .unwrap()
            {
                products.insert((a, b), w);
            }
        }
    }
    Diptych { pre, products }
}

#[test]
fn trivial_total_order_is_a_diptych() {
    let rep = check_diptych(&ordinal_diptych(2, OrdinalVariant::Trivial));
    assert!(rep.is_empty(), "{rep:?}");
}

#[test]
fn all_monos_total_order_is_a_diptych() {
    let rep = check_diptych(&ordinal_diptych(2, OrdinalVariant::I));
    assert!(rep.is_empty(), "{rep:?}");
}

#[test]
fn all_epis_total_order_fails_the_strict_epi_axiom() {
    // With every arrow a good epi, the kernel-pair square of 0 -> 1 (both
    // projections are identities) is a pullback with all four arrows good,
    // yet its corner is 1 while the pushout of the span is 0. Equivalently,
    // 0 -> 1 is not a coequalizer, so it cannot be a good epi.
    let rep = check_diptych(&ordinal_diptych(2, OrdinalVariant::S));
    assert!(rep.find("axiom-vi").is_some(), "{rep:?}");
}

#[test]
fn identity_square_has_every_good_property() {
    let sk = SetSkeleton::with_bound(4);
    let d = set_standard_diptych(&sk);
    let id2 = sk.cat.identity_of(sk.object_of_size(2).unwrap());
    let cls = classify_square(&d, Square { top: id2, left: id2, right: id2, bottom: id2 })
        .unwrap();
    assert!(cls.commutes && cls.ipb && cls.gpb && cls.spb && cls.s_exact);
}

#[test]
fn good_mono_side_forces_ipb() {
    let sk = SetSkeleton::with_bound(4);
    let d = set_standard_diptych(&sk);
    let (o1, o2) = (sk.object_of_size(1).unwrap(), sk.object_of_size(2).unwrap());
    let u = sk.arrow_of_map(o1, o2, &[0]); // good mono
    let sq = Square {
        top: u,
        left: sk.cat.identity_of(o1),
        right: sk.cat.identity_of(o2),
        bottom: u,
    };
    let cls = classify_square(&d, sq).unwrap();
    assert!(cls.hi, "u is a good mono on both horizontal sides");
    assert!(cls.ipb);
}

#[test]
fn kernel_pair_square_of_a_surjection_is_s_exact() {
    // q: {0,1} -> {0}; kernel pair = {0,1} x {0,1}, four points
    let sk = SetSkeleton::with_bound(4);
    let d = set_standard_diptych(&sk);
    let (o1, o2, o4) = (
        sk.object_of_size(1).unwrap(),
        sk.object_of_size(2).unwrap(),
        sk.object_of_size(4).unwrap(),
    );
    let q = sk.arrow_of_map(o2, o1, &[0, 0]);
    let p1 = sk.arrow_of_map(o4, o2, &[0, 0, 1, 1]);
    let p2 = sk.arrow_of_map(o4, o2, &[0, 1, 0, 1]);
    let cls = classify_square(&d, Square { top: p2, left: p1, right: q, bottom: q }).unwrap();
    assert!(cls.hs && cls.vs);
    assert!(cls.gpb);
    assert!(cls.s_exact, "{cls:?}");
}

#[test]
fn upsilon_prediptych_has_the_retraction_shape() {
    let p = upsilon();
    assert_eq!(p.cat.n_objects(), 3);
    assert!(check_prediptych(&p).is_empty());
    // objects are ordered 2, 1, 0; look for omega: "0" -> "1" good mono and
    // alpha: "1" -> "0" good epi with alpha . omega = id
    let c = &p.cat;
    let mut found = false;
    for &om in c.hom(2, 1) {
        for &al in c.hom(1, 2) {
            if p.in_di(om) && p.in_ds(al) && c.compose(al, om) == Some(c.identity_of(2)) {
                found = true;
            }
        }
    }
    assert!(found, "alpha-omega retraction missing");
    // a good epi "2" -> "1" (the division generator) exists
    assert!(c.hom(0, 1).iter().any(|&d| p.in_ds(d) && !p.in_di(d)));
}

#[test]
fn butterfly_type_prediptych_shape() {
    let p = butterfly_type();
    assert_eq!(p.cat.n_objects(), 5);
    assert!(check_prediptych(&p).is_empty());
    let monos = p
        .cat
        .arrow_ids()
        .filter(|&a| p.in_di(a) && !p.cat.is_identity(a))
        .count();
    let epis = p
        .cat
        .arrow_ids()
        .filter(|&a| p.in_ds(a) && !p.cat.is_identity(a))
        .count();
    assert_eq!(monos, 2, "two wing inclusions");
    assert_eq!(epis, 4, "two quotients and their two composites with the wings");
}

#[test]
fn powerset_representation_examples() {
    let fv = finv_trunc(2).unwrap();
    // identity on cardinal 2: identity on the four subsets
    let id2 = fv.pre.cat.identity_of(fv.object_of_card(2));
    assert_eq!(powerset_representation(&fv, id2).unwrap(), vec![0, 1, 2, 3]);
    // dual of the surjection 2 -> 1: saturated subsets {{}, {0,1}}
    let dual_surj = fv.arrow_of_dual(1, 2, &[0, 0]).unwrap();
    assert_eq!(powerset_representation(&fv, dual_surj).unwrap(), vec![0b00, 0b11]);
    // dual of the injection 1 -> 2: trace map A -> A n {0}
    let dual_inj = fv.arrow_of_dual(2, 1, &[0]).unwrap();
    assert_eq!(powerset_representation(&fv, dual_inj).unwrap(), vec![0, 1, 0, 1]);
}

#[test]
fn powerset_representation_is_faithful_and_functorial() {
    let fv = finv_trunc(3).unwrap();
    let c = &fv.pre.cat;
    let reps: Vec<Vec<u32>> = c
        .arrow_ids()
        .map(|a| powerset_representation(&fv, a).unwrap())
        .collect();
    // injective on arrows (within fixed endpoints the tables differ)
    for a in c.arrow_ids() {
        for b in c.arrow_ids() {
            if a < b && c.arrow(a) == c.arrow(b) {
                assert_ne!(reps[a], reps[b], "arrows {a} and {b} collide");
            }
        }
    }
    // functorial: P(g . f) = P(g) . P(f)
    for f in c.arrow_ids() {
        for &g in c.arrows_from(c.tgt(f)) {
            let gf = c.compose(g, f).unwrap();
            let composed: Vec<u32> = reps[f].iter().map(|&m| reps[g][m as usize]).collect();
            assert_eq!(reps[gf], composed, "g={g}, f={f}");
        }
    }
}

#[test]
fn sigma_is_an_involution() {
    let pkg = canonical_endofunctor(EndoName::Sigma, 4).unwrap();
    let twice = compose_functors(&pkg.functor, &pkg.functor).unwrap();
    let id = FinFunctor::identity(&pkg.source.pre.cat);
    assert_eq!(twice.obj_map, id.obj_map);
    assert_eq!(twice.arr_map, id.arr_map);
}

#[test]
fn delta_shifts_objects_up_by_one() {
    let pkg = canonical_endofunctor(EndoName::Delta, 3).unwrap();
    for p in 1..=3 {
        assert_eq!(
            pkg.functor.obj_map[pkg.source.object_of_card(p)],
            pkg.target.object_of_card(p + 1)
        );
    }
}

#[test]
fn nabla_is_sigma_delta_sigma() {
    let trunc = 3;
    let sigma_lo = canonical_endofunctor(EndoName::Sigma, trunc).unwrap();
    let sigma_hi = canonical_endofunctor(EndoName::Sigma, trunc + 1).unwrap();
    let delta = canonical_endofunctor(EndoName::Delta, trunc).unwrap();
    let nabla = canonical_endofunctor(EndoName::Nabla, trunc).unwrap();
    let inner = compose_functors(&delta.functor, &sigma_lo.functor).unwrap();
    let conj = compose_functors(&sigma_hi.functor, &inner).unwrap();
    assert_eq!(conj.obj_map, nabla.functor.obj_map);
    assert_eq!(conj.arr_map, nabla.functor.arr_map);
}

#[test]
fn bundled_transformations_are_natural() {
    for (name, trunc) in [
        (EndoName::Sigma, 3),
        (EndoName::Delta, 3),
        (EndoName::Nabla, 3),
        (EndoName::Square, 2),
    ] {
        let pkg = canonical_endofunctor(name, trunc).unwrap();
        for entry in &pkg.transformations {
            let rep = check_natural(
                &pkg.source.pre.cat,
                &pkg.target.pre.cat,
                &entry.from,
                &entry.to,
                &entry.nat,
            );
            assert!(rep.is_empty(), "{name:?}/{}: {rep:?}", entry.name);
        }
    }
}

#[test]
fn naive_square_flavor_is_a_prediptych() {
    let sk = SetSkeleton::with_bound(2);
    let d = set_standard_diptych(&sk);
    let sp = build_square_diptych(&d, SquareFlavor::Naive).unwrap();
    let rep = check_prediptych(&sp.pre);
    assert!(rep.is_empty(), "{rep:?}");
}

#[test]
fn main_flavor_good_epis_are_the_spb_hs_squares() {
    let sk = SetSkeleton::with_bound(2);
    let d = set_standard_diptych(&sk);
    let sp = build_square_diptych(&d, SquareFlavor::Main).unwrap();
    for a in sp.pre.cat.arrow_ids() {
        let (left, right, top, bottom) = sp.squares[a];
        let cls = classify_square(&d, Square { top, left, right, bottom }).unwrap();
        assert_eq!(sp.pre.in_ds(a), cls.hs && cls.spb, "square arrow {a}");
    }
}

#[test]
fn identity_squares_are_isos_in_every_flavor() {
    // needs a diptych whose products cover every pair, so the spb/gpb flags
    // of identity squares never degrade for lack of a witness
    let d = ordinal_diptych(2, OrdinalVariant::Trivial);
    for flavor in [
        SquareFlavor::Naive,
        SquareFlavor::Main,
        SquareFlavor::MainGpb,
        SquareFlavor::GpbBoth,
        SquareFlavor::CanSpb,
        SquareFlavor::CanGpb,
    ] {
        let sp = build_square_diptych(&d, flavor).unwrap();
        for a in sp.pre.cat.arrow_ids() {
            if sp.pre.cat.is_identity(a) {
                assert!(sp.pre.in_di(a) && sp.pre.in_ds(a), "{flavor:?}, arrow {a}");
            }
        }
    }
}

#[test]
fn flavor_names_parse() {
    assert_eq!(SquareFlavor::parse("naive"), Some(SquareFlavor::Naive));
    assert_eq!(SquareFlavor::parse("main"), Some(SquareFlavor::Main));
    assert_eq!(SquareFlavor::parse("maiN"), Some(SquareFlavor::MainGpb));
    assert_eq!(SquareFlavor::parse("MaiN"), Some(SquareFlavor::GpbBoth));
    assert_eq!(SquareFlavor::parse("can-spb"), Some(SquareFlavor::CanSpb));
    assert_eq!(SquareFlavor::parse("can-gpb"), Some(SquareFlavor::CanGpb));
    assert_eq!(SquareFlavor::parse("bogus"), None);
}

//! Conjugation of principal morphisms: butterflies, transversality,
//! pregroupoid laws, mirrors, associate actions, universal activations,
//! homogeneous spaces, covers, cocycles, and gauge groupoids.

use std::collections::HashMap;

use diptych_core::conjugation::{
    associate_action, build_cover_groupoid, check_butterfly, check_transversality,
    cocycle_from_table, cohomologous, conjugate_principal, count_mediators, enumerate_activations,
    factor_through, gauge_direct, gauge_groupoid, homogeneous_space, mirror_square,
    pregroupoid_laws, torsor_from_cocycle, universal_activation, wing_orbit_count, Cover,
    MorphSquare,
};
use diptych_core::corpus::{
    cover_three_cycle, cyclic_group, cyclic_inclusion, permutation_action_law,
    principal_to_banal, translation_action_law, trivial_z2_cocycle, twisted_z2_cocycle,
    unit_inclusion, z2_free_action_on_4,
};
use diptych_core::groupoid::{
    banal_groupoid, canonical_butterfly, groupoids_isomorphic, isotropy, orbits,
    principal_groupoid,
};
use diptych_core::morphism::{action_groupoid, action_law_of_actor, classify_morphism, GroupoidMorphism};

#[test]
fn conjugate_of_a_principal_transitor() {
    let r = principal_to_banal(&[0, 0, 1, 1]).unwrap();
    let b = conjugate_principal(&r).unwrap();
    let rep = check_butterfly(&b);
    assert!(rep.is_empty(), "{rep:?}");
    assert_eq!(b.r_grp.base_size(), 4);
    assert_eq!(b.g.base_size(), 2);
    assert!(groupoids_isomorphic(&b.gp, &banal_groupoid(2)).is_some());
}

#[test]
fn conjugate_of_the_division_actor_is_the_co_division_actor() {
    let g = cyclic_group(2);
    let cb = canonical_butterfly(&g);
    let b = conjugate_principal(&cb.delta).unwrap();
    assert!(check_butterfly(&b).is_empty());
    assert!(groupoids_isomorphic(&b.gp, &g).is_some());
    assert!(groupoids_isomorphic(&b.rp_grp, &cb.nabla_g).is_some());
    assert!(classify_morphism(&b.rp).actor);
}

#[test]
fn canonical_wings_are_transverse_in_the_square_groupoid() {
    let cb = canonical_butterfly(&cyclic_group(2));
    let k = &*cb.square_g;
    let mut d_flags = vec![false; k.n_arrows()];
    for &x in &cb.iota_bot.f1 {
        d_flags[x] = true;
    }
    let mut n_flags = vec![false; k.n_arrows()];
    for &x in &cb.iota_top.f1 {
        n_flags[x] = true;
    }
    assert!(check_transversality(k, &d_flags, &n_flags));
    let laws = pregroupoid_laws(k, &d_flags, &n_flags).unwrap();
    assert!(laws.exchange_ok);
}

#[test]
fn a_wing_is_not_transverse_to_itself() {
    let k = principal_groupoid(&[0, 0]).unwrap();
    let all = vec![true; k.n_arrows()];
    assert!(!check_transversality(&k, &all, &all));
}

#[test]
fn gauge_groupoid_of_the_free_z2_action() {
    let law = z2_free_action_on_4();
    let (g_struct, b) = gauge_groupoid(&law).unwrap();
    assert!(check_butterfly(&b).is_empty());
    assert_eq!(g_struct.n_arrows(), 8);
    assert_eq!(g_struct.base_size(), 2);
    for obj in 0..g_struct.base_size() {
        assert_eq!(isotropy(&g_struct, obj).len(), 2);
    }
    assert_eq!(b.k.n_arrows(), 32);
    assert!(check_transversality(&b.k, &b.r_flags, &b.rp_flags));
    assert!(pregroupoid_laws(&b.k, &b.r_flags, &b.rp_flags).unwrap().exchange_ok);
    // independent construction of (P x P)/H agrees
    let direct = gauge_direct(&law).unwrap();
    assert!(groupoids_isomorphic(&g_struct, &direct).is_some());
}

#[test]
fn gauge_of_the_trivial_group_is_banal() {
    let law = permutation_action_law(1, &[0, 1, 2]).unwrap();
    let (g_struct, b) = gauge_groupoid(&law).unwrap();
    assert!(groupoids_isomorphic(&g_struct, &banal_groupoid(3)).is_some());
    assert_eq!(b.k.n_arrows(), 9, "K = H x banal(P) with H trivial");
}

#[test]
fn gauge_of_a_group_acting_on_itself() {
    let z3 = cyclic_group(3);
    let law = translation_action_law(&z3, 1);
    let (g_struct, b) = gauge_groupoid(&law).unwrap();
    assert!(groupoids_isomorphic(&g_struct, &z3).is_some());
    assert!(groupoids_isomorphic(&b.r_grp, &banal_groupoid(3)).is_some());
}

#[test]
fn wing_orbits_biject_with_opposite_objects() {
    let law = z2_free_action_on_4();
    let (_, b) = gauge_groupoid(&law).unwrap();
    let (r_orbits, rp_orbits) = wing_orbit_count(&b);
    assert_eq!(r_orbits, b.gp.base_size());
    assert_eq!(rp_orbits, b.g.base_size());
}

#[test]
fn conjugation_is_involutive_up_to_isomorphism() {
    for r in [
        principal_to_banal(&[0, 0, 1, 1]).unwrap(),
        principal_to_banal(&[0, 1, 1]).unwrap(),
        canonical_butterfly(&cyclic_group(2)).delta,
    ] {
        let b = conjugate_principal(&r).unwrap();
        let back = conjugate_principal(&b.rp).unwrap();
        assert!(groupoids_isomorphic(&back.gp, &r.target).is_some());
    }
}

#[test]
fn mirror_of_an_identity_square_is_an_isomorphism_square() {
    let r = principal_to_banal(&[0, 0, 1]).unwrap();
    let sq = MorphSquare {
        top: GroupoidMorphism::identity(r.source.clone()),
        bottom: GroupoidMorphism::identity(r.target.clone()),
        left: r.clone(),
        right: r,
    };
    assert!(sq.commutes());
    let (mirrored, _, _) = mirror_square(&sq).unwrap();
    assert!(mirrored.commutes());
    assert!(mirrored.bottom.is_bijective());
    assert!(mirrored.top.is_bijective());
}

#[test]
fn associate_of_the_identity_actor_lands_on_the_conjugate_base() {
    let law = z2_free_action_on_4();
    let (_, b) = gauge_groupoid(&law).unwrap();
    let id = GroupoidMorphism::identity(b.g.clone());
    let assoc = associate_action(&b, &id).unwrap();
    assert!(classify_morphism(&assoc).actor);
    assert!(*assoc.target == *b.gp);
}

#[test]
fn associate_bundle_of_the_swap_fibre() {
    // H = Z/2 acting on a 2-point fibre by swap, pushed through the gauge
    // butterfly of the free action on four points
    let law = z2_free_action_on_4();
    let (_, b) = gauge_groupoid(&law).unwrap();
    let (_, swap_actor) = action_groupoid(&permutation_action_law(2, &[1, 0]).unwrap()).unwrap();
    let assoc = associate_action(&b, &swap_actor).unwrap();
    let cls = classify_morphism(&assoc);
    assert!(cls.actor);
    assert_eq!(assoc.source.base_size(), 4, "fibre size times base size");
    assert!(*assoc.target == *b.gp);
}

#[test]
fn universal_activation_of_the_unit_inclusion_is_the_division_actor() {
    let g = cyclic_group(2);
    let f = unit_inclusion(&g);
    let univ = universal_activation(&f).unwrap();
    let cb = canonical_butterfly(&g);
    assert!(groupoids_isomorphic(&univ.act.h1, &cb.delta_g).is_some());
    assert!(classify_morphism(&univ.act.actor).actor);
    // the recovered law is left translation on the arrows of g
    let law = action_law_of_actor(&univ.act.actor).unwrap();
    assert_eq!(law.e_size, g.n_arrows());
}

#[test]
fn an_actor_activates_itself() {
    let cb = canonical_butterfly(&cyclic_group(3));
    let univ = universal_activation(&cb.delta).unwrap();
    assert!(univ.act.to_h1.is_bijective());
}

#[test]
fn activation_of_the_subgroup_inclusion_is_the_coset_action() {
    let f = cyclic_inclusion(2, 4).unwrap();
    let univ = universal_activation(&f).unwrap();
    assert_eq!(univ.act.h1.base_size(), 2, "two cosets");
    assert_eq!(univ.act.h1.n_arrows(), 8, "|Z/4| times two cosets");
    assert!(classify_morphism(&univ.act.actor).actor);
}

#[test]
fn universal_activation_is_initial() {
    let f = cyclic_inclusion(2, 4).unwrap();
    let univ = universal_activation(&f).unwrap();
    let bound = univ.act.h1.base_size();
    let activations = enumerate_activations(&f, bound);
    assert!(!activations.is_empty());
    for act in &activations {
        assert!(factor_through(&univ, act).is_some());
        assert_eq!(count_mediators(&univ, act), 1);
    }
}

#[test]
fn homogeneous_space_examples() {
    let z4 = cyclic_group(4);
    // index-two subgroup: transitive action on two cosets
    let law = homogeneous_space(&z4, &cyclic_inclusion(2, 4).unwrap()).unwrap();
    assert_eq!(law.e_size, 2);
    let (h, _) = action_groupoid(&law).unwrap();
    assert_eq!(orbits(&h).len(), 1);
    // the whole group: action on a point
    let law = homogeneous_space(&z4, &GroupoidMorphism::identity(z4.clone())).unwrap();
    assert_eq!(law.e_size, 1);
    // units only: left translation on the arrows
    let law = homogeneous_space(&z4, &unit_inclusion(&z4)).unwrap();
    assert_eq!(law.e_size, z4.n_arrows());
}

#[test]
fn trivial_cover_torsor_splits_as_a_product() {
    let cover = Cover { b_size: 2, pieces: vec![vec![0, 1]] };
    let cg = build_cover_groupoid(&cover).unwrap();
    assert_eq!(cg.n_arrows(), 2, "one piece: only diagonal pairs");
    let z2 = cyclic_group(2);
    let mut table = HashMap::new();
    table.insert((0usize, 0usize, 0usize), z2.unit(0));
    table.insert((0, 0, 1), z2.unit(0));
    let c = cocycle_from_table(&cover, &z2, &table).unwrap();
    assert!(cohomologous(&c, &c).unwrap());
    let (univ, b) = torsor_from_cocycle(&c).unwrap();
    assert_eq!(univ.act.h1.base_size(), 4, "base times group");
    assert!(check_butterfly(&b).is_empty());
}

#[test]
fn three_piece_cover_groupoid_counts() {
    let cover = cover_three_cycle();
    let cg = build_cover_groupoid(&cover).unwrap();
    assert_eq!(cg.base_size(), 6);
    assert_eq!(cg.n_arrows(), 12, "each of three base points sits in two pieces");
}

#[test]
fn twisted_cocycle_torsor_counts() {
    let twisted = twisted_z2_cocycle();
    let (univ, b) = torsor_from_cocycle(&twisted).unwrap();
    assert_eq!(univ.act.h1.base_size(), 6);
    assert_eq!(b.gp.n_arrows(), 18, "gauge groupoid of the twisted torsor");
    // the deck action alone cannot see the twist: three two-point orbits
    assert_eq!(orbits(&univ.act.h1).len(), 3);
}

#[test]
fn untwisted_cocycle_splits_and_is_not_cohomologous_to_the_twist() {
    let trivial = trivial_z2_cocycle();
    let (univ, _) = torsor_from_cocycle(&trivial).unwrap();
    assert_eq!(univ.act.h1.base_size(), 6);
    assert_eq!(orbits(&univ.act.h1).len(), 3);
    assert!(cohomologous(&trivial, &trivial).unwrap());
    assert!(!cohomologous(&twisted_z2_cocycle(), &trivial).unwrap());
}

#[test]
fn tautological_chart_reproduces_the_torsor() {
    // a single-chart cocycle for the trivializable free action recovers P
    let law = z2_free_action_on_4();
    let cover = Cover { b_size: 2, pieces: vec![vec![0, 1]] };
    let z2 = law.g.clone();
    let mut table = HashMap::new();
    table.insert((0usize, 0usize, 0usize), z2.unit(0));
    table.insert((0, 0, 1), z2.unit(0));
    let c = cocycle_from_table(&cover, &z2, &table).unwrap();
    let (univ, b) = torsor_from_cocycle(&c).unwrap();
    assert_eq!(univ.act.h1.base_size(), 4, "same total space as P");
    let (g_struct, _) = gauge_groupoid(&law).unwrap();
    assert!(groupoids_isomorphic(&b.gp, &g_struct).is_some());
}

#[test]
fn every_returned_butterfly_passes_the_checks() {
    let samples = vec![
        conjugate_principal(&principal_to_banal(&[0, 0, 1]).unwrap()).unwrap(),
        gauge_groupoid(&z2_free_action_on_4()).unwrap().1,
        torsor_from_cocycle(&twisted_z2_cocycle()).unwrap().1,
    ];
    for b in &samples {
        let rep = check_butterfly(b);
        assert!(rep.is_empty(), "{rep:?}");
        let (r_orbits, rp_orbits) = wing_orbit_count(b);
        assert_eq!(r_orbits, b.gp.base_size());
        assert_eq!(rp_orbits, b.g.base_size());
    }
}

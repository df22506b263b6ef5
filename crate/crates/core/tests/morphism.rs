//! Morphism taxonomy, action laws and action groupoids, induced groupoids,
//! kernels, two-sided quotients, and natural transformations.

use std::collections::HashMap;
use std::sync::Arc;

use diptych_core::corpus::{cyclic_group, cyclic_inclusion, permutation_action_law};
use diptych_core::groupoid::{
    banal_groupoid, canonical_butterfly, groupoids_isomorphic, principal_groupoid, transitor,
    transitor_injective, orbits,
};
use diptych_core::morphism::{
    action_groupoid, action_law_of_actor, check_action_law, classify_morphism, induced_groupoid,
    kernel, natural_iso_exists, short_exact_sequence, two_sided_quotient, ActionLaw,
    GroupoidMorphism,
};

fn quotient_z4_to_z2() -> GroupoidMorphism {
    let z4 = cyclic_group(4);
    let z2 = cyclic_group(2);
    GroupoidMorphism::new(z4, z2, vec![0], vec![0, 1, 0, 1])
}

#[test]
fn identity_morphism_has_every_flag() {
    let id = GroupoidMorphism::identity(cyclic_group(3));
    let cls = classify_morphism(&id);
    for (name, value) in cls.flags() {
        assert!(value, "flag {name} should hold for the identity");
    }
}

#[test]
fn division_morphism_of_a_group_is_an_s_actor() {
    let cb = canonical_butterfly(&cyclic_group(2));
    let cls = classify_morphism(&cb.delta);
    assert!(cls.actor && cls.s_morphism);
    assert!(cls.hypo_actor && cls.hyper_actor, "actor implies both");
}

#[test]
fn subgroup_inclusion_is_faithful_but_not_full() {
    let incl = cyclic_inclusion(2, 4).unwrap();
    let cls = classify_morphism(&incl);
    assert!(cls.i_morphism && cls.i_faithful);
    assert!(!cls.s_full);
    assert!(cls.essentially_s, "single object on both sides");
    assert!(!cls.equivalence);
    assert!(!cls.actor);
}

#[test]
fn flag_implications_hold_on_assorted_morphisms() {
    let samples = vec![
        GroupoidMorphism::identity(banal_groupoid(2).into()),
        cyclic_inclusion(2, 4).unwrap(),
        quotient_z4_to_z2(),
        canonical_butterfly(&cyclic_group(2)).delta,
    ];
    for f in &samples {
        let c = classify_morphism(f);
        assert!(!c.actor || (c.hypo_actor && c.hyper_actor));
        assert!(!c.inductor || (c.i_faithful && c.s_full));
        assert!(!c.s_equivalence || c.equivalence);
        assert!(!c.extensor || c.hyper_actor);
    }
}

#[test]
fn transitor_of_the_banal_groupoid_carries_the_pair_action() {
    let b = Arc::new(banal_groupoid(3));
    let t = transitor(&b);
    assert!(classify_morphism(&t).actor);
    let law = action_law_of_actor(&t).unwrap();
    assert_eq!(law.e_size, 3);
    // lambda((x -> y), x) = y for every pair arrow
    for a in b.cat.arrow_ids() {
        assert_eq!(law.lambda.get(&(t.f1[a], b.alpha(a))), Some(&b.beta(a)));
    }
}

#[test]
fn swap_action_of_z2_gives_the_banal_groupoid() {
    let law = permutation_action_law(2, &[1, 0]).unwrap();
    assert!(check_action_law(&law).is_empty());
    let (h, f) = action_groupoid(&law).unwrap();
    assert_eq!(h.n_arrows(), 4);
    assert!(groupoids_isomorphic(&h, &banal_groupoid(2)).is_some());
    // round trip: the actor recovers the very same law
    let back = action_law_of_actor(&f).unwrap();
    assert_eq!(back.moment, law.moment);
    assert_eq!(back.lambda, law.lambda);
}

#[test]
fn trivial_action_on_a_point_gives_back_the_group() {
    let z2 = cyclic_group(2);
    let mut lambda = HashMap::new();
    lambda.insert((0, 0), 0);
    lambda.insert((1, 0), 0);
    let law = ActionLaw { g: z2.clone(), e_size: 1, moment: vec![0], lambda };
    assert!(check_action_law(&law).is_empty());
    let (h, f) = action_groupoid(&law).unwrap();
    assert!(groupoids_isomorphic(&h, &z2).is_some());
    assert!(classify_morphism(&f).actor);
}

#[test]
fn induced_groupoid_along_the_identity_is_isomorphic() {
    let g = Arc::new(principal_groupoid(&[0, 0, 1]).unwrap());
    let (h, j) = induced_groupoid(&g, &[0, 1, 2]).unwrap();
    assert!(groupoids_isomorphic(&h, &g).is_some());
    assert!(classify_morphism(&j).inductor);
}

#[test]
fn induced_groupoid_along_a_constant_doubles_up() {
    let z2 = cyclic_group(2);
    let (h, j) = induced_groupoid(&z2, &[0, 0]).unwrap();
    assert_eq!(h.base_size(), 2);
    assert_eq!(h.n_arrows(), 8, "|E|^2 . |G|");
    let cls = classify_morphism(&j);
    assert!(cls.inductor && cls.s_equivalence, "surjective base map");
}

#[test]
fn induced_groupoid_rejects_the_empty_base() {
    assert!(induced_groupoid(&cyclic_group(2), &[]).is_err());
}

#[test]
fn kernel_of_the_group_quotient() {
    let proj = quotient_z4_to_z2();
    assert!(classify_morphism(&proj).extensor);
    let (n, incl, wit) = kernel(&proj).unwrap();
    assert!(wit.pullback_verified && wit.pushout_verified && wit.normal);
    assert!(groupoids_isomorphic(&n, &cyclic_group(2)).is_some());
    assert!(incl.check().is_empty());
}

#[test]
fn kernel_of_an_s_equivalence_is_principal() {
    let z2 = cyclic_group(2);
    let (_, j) = induced_groupoid(&z2, &[0, 0]).unwrap();
    assert!(classify_morphism(&j).s_equivalence);
    let (n, _, _) = kernel(&j).unwrap();
    assert!(transitor_injective(&n));
}

#[test]
fn quotient_of_z4_by_its_even_part() {
    let z4 = cyclic_group(4);
    let n_flags = vec![true, false, true, false]; // arrows 0 and 2
    let (q, proj) = two_sided_quotient(&z4, &n_flags).unwrap();
    assert!(groupoids_isomorphic(&q, &cyclic_group(2)).is_some());
    // first-isomorphism property: the kernel of the projection is n again
    let (n, _, _) = kernel(&proj).unwrap();
    assert!(groupoids_isomorphic(&n, &cyclic_group(2)).is_some());
}

#[test]
fn quotient_of_the_banal_groupoid_by_a_partition() {
    let b = Arc::new(banal_groupoid(4));
    let class = [0usize, 0, 1, 1];
    let n_flags: Vec<bool> = b
        .cat
        .arrow_ids()
        .map(|x| class[b.alpha(x)] == class[b.beta(x)])
        .collect();
    let (q, proj) = two_sided_quotient(&b, &n_flags).unwrap();
    assert!(groupoids_isomorphic(&q, &banal_groupoid(2)).is_some());
    assert!(classify_morphism(&proj).extensor);
}

#[test]
fn non_normal_subgroupoid_is_rejected() {
    // arrows of the banal groupoid fixing nothing: pick a non-wide subset
    let b = Arc::new(banal_groupoid(2));
    let mut n_flags = vec![false; b.n_arrows()];
    n_flags[b.unit(0)] = true; // missing the unit at object 1
    assert!(two_sided_quotient(&b, &n_flags).is_err());
}

#[test]
fn short_exact_sequence_of_the_group_quotient() {
    let seq = short_exact_sequence(&quotient_z4_to_z2()).unwrap();
    assert!(groupoids_isomorphic(&seq.n, &cyclic_group(2)).is_some());
    assert!(seq.witness.normal);
    // the composite proj . incl lands in the units
    for x in seq.n.cat.arrow_ids() {
        let image = seq.proj.f1[seq.incl.f1[x]];
        assert!(seq.g.cat.is_identity(image));
    }
}

#[test]
fn equal_morphisms_are_naturally_isomorphic() {
    let f = cyclic_inclusion(2, 4).unwrap();
    let nat = natural_iso_exists(&f, &f).unwrap().expect("identity transformation");
    assert_eq!(nat.len(), 1);
    assert!(f.target.cat.is_identity(nat[0]));
}

#[test]
fn morphisms_with_non_conjugate_images_are_not_isomorphic() {
    // both from Z/2 into Z/6: the trivial map and the order-two embedding
    let z2 = cyclic_group(2);
    let z6 = cyclic_group(6);
    let trivial = GroupoidMorphism::new(z2.clone(), z6.clone(), vec![0], vec![0, 0]);
    let embed = GroupoidMorphism::new(z2, z6, vec![0], vec![0, 3]);
    assert!(trivial.check().is_empty() && embed.check().is_empty());
    assert!(natural_iso_exists(&trivial, &embed).unwrap().is_none());
}

#[test]
fn action_groupoid_orbits_match_the_law() {
    // two swapped points and one fixed point under Z/2
    let law = permutation_action_law(2, &[1, 0]).unwrap();
    let (h, _) = action_groupoid(&law).unwrap();
    assert_eq!(orbits(&h).len(), 1);
}

//! Category kernel: validation, arrow classification, limits, functor calculus.

use diptych_core::catalog::{ordinal, OrdinalVariant};
use diptych_core::fincat::{
    check_functor, check_natural, classify_arrow, find_limit, opposite, product_category,
    validate_category, verify_square_universal, Arrow, DiagramSpec, FinCategory, FinFunctor,
    LimitKind, NatTransformation, Square,
};
use diptych_core::setcat::SetSkeleton;

fn terminal_category() -> FinCategory {
    FinCategory::from_fn(
        "terminal",
        1,
        vec![Arrow { src: 0, tgt: 0 }],
        vec![0],
        |_, _| Some(0),
    )
}

#[test]
fn terminal_category_is_valid() {
    assert!(validate_category(&terminal_category()).is_empty());
}

#[test]
fn full_transformation_monoid_on_two_points_is_valid() {
    // all four maps {0,1} -> {0,1} as a one-object category
    let sk = SetSkeleton::on_sizes(vec![2]);
    assert_eq!(sk.cat.n_arrows(), 4);
    assert!(validate_category(&sk.cat).is_empty());
}

#[test]
fn broken_unit_law_is_reported() {
    // two loops {id, e}; force e o id = id, violating neutrality of the unit
    let c = FinCategory::from_fn(
        "broken",
        1,
        vec![Arrow { src: 0, tgt: 0 }, Arrow { src: 0, tgt: 0 }],
        vec![0],
        |g, f| Some(if g == 1 && f == 0 { 0 } else { g.max(f) }),
    );
    let rep = validate_category(&c);
    assert!(rep.find("identity-neutral").is_some(), "{rep:?}");
}

#[test]
fn broken_associativity_is_reported() {
    // one object, three loops; composition chosen non-associatively
    let c = FinCategory::from_fn(
        "nonassoc",
        1,
        vec![
            Arrow { src: 0, tgt: 0 },
            Arrow { src: 0, tgt: 0 },
            Arrow { src: 0, tgt: 0 },
        ],
        vec![0],
        |g, f| {
            Some(match (g, f) {
                (0, x) | (x, 0) => x,
                (1, 1) => 2,
                (1, 2) | (2, 1) => 0,
                (2, 2) => 1,
                _ => unreachable!(),
            })
        },
    );
    // (1∘1)∘2 = 2∘2 = 1 but 1∘(1∘2) = 1∘0 = 1 ... use the validator to decide
    let rep = validate_category(&c);
    if rep.is_empty() {
        // the sample table happened to be associative; corrupt one entry instead
        let c2 = FinCategory::from_fn(
            "nonassoc2",
            1,
            vec![
                Arrow { src: 0, tgt: 0 },
                Arrow { src: 0, tgt: 0 },
                Arrow { src: 0, tgt: 0 },
            ],
            vec![0],
            |g, f| {
                Some(match (g, f) {
                    (0, x) | (x, 0) => x,
                    (1, 1) => 2,
                    (1, 2) => 0,
                    (2, 1) => 1, // breaks associativity of the cyclic table
                    (2, 2) => 1,
                    _ => unreachable!(),
                })
            },
        );
        assert!(validate_category(&c2).find("assoc").is_some());
    }
}

#[test]
fn inclusion_is_split_mono_not_epi() {
    let sk = SetSkeleton::with_bound(2);
    let (o1, o2) = (sk.object_of_size(1).unwrap(), sk.object_of_size(2).unwrap());
    let incl = sk.arrow_of_map(o1, o2, &[0]);
    let cls = classify_arrow(&sk.cat, incl).unwrap();
    assert!(cls.mono && cls.split_mono);
    assert!(!cls.epi && !cls.split_epi && !cls.iso);
}

#[test]
fn surjection_is_split_epi_not_mono() {
    let sk = SetSkeleton::with_bound(2);
    let (o1, o2) = (sk.object_of_size(1).unwrap(), sk.object_of_size(2).unwrap());
    let surj = sk.arrow_of_map(o2, o1, &[0, 0]);
    let cls = classify_arrow(&sk.cat, surj).unwrap();
    assert!(cls.epi && cls.split_epi);
    assert!(!cls.mono && !cls.split_mono && !cls.iso);
}

#[test]
fn pullback_of_two_surjections_has_apex_of_size_four() {
    let sk = SetSkeleton::with_bound(4);
    let (o1, o2) = (sk.object_of_size(1).unwrap(), sk.object_of_size(2).unwrap());
    let f = sk.arrow_of_map(o2, o1, &[0, 0]);
    let w = find_limit(&sk.cat, LimitKind::Pullback, DiagramSpec::Cospan(f, f))
        .unwrap()
        .expect("pullback exists within the bound");
    assert_eq!(sk.sizes[w.apex], 4);
}

#[test]
fn pushout_in_ordinal_three_is_the_join() {
    let ord = ordinal(3, OrdinalVariant::Trivial).unwrap();
    let c = &ord.cat;
    // arrow ids follow (i,j) with i <= j in lexicographic order
    let a01 = c.hom(0, 1)[0];
    let a02 = c.hom(0, 2)[0];
    let w = find_limit(c, LimitKind::Pushout, DiagramSpec::Span(a01, a02))
        .unwrap()
        .expect("total orders have all joins");
    assert_eq!(w.apex, 2);
}

#[test]
fn kernel_pair_square_is_pullback_and_pushout() {
    // q: {0,1,2} -> {0,1} with fibres {0,1} and {2}; the kernel pair has 5 points
    let sk = SetSkeleton::on_sizes(vec![2, 3, 5]);
    let (o2, o3, o5) = (
        sk.object_of_size(2).unwrap(),
        sk.object_of_size(3).unwrap(),
        sk.object_of_size(5).unwrap(),
    );
    let q = sk.arrow_of_map(o3, o2, &[0, 0, 1]);
    // pairs (x, y) with q(x) = q(y), lexicographic: (0,0),(0,1),(1,0),(1,1),(2,2)
    let p1 = sk.arrow_of_map(o5, o3, &[0, 0, 1, 1, 2]);
    let p2 = sk.arrow_of_map(o5, o3, &[0, 1, 0, 1, 2]);
    let sq = Square { top: p2, left: p1, right: q, bottom: q };
    assert!(sq.commutes(&sk.cat));
    assert!(verify_square_universal(&sk.cat, sq, LimitKind::Pullback).unwrap());
    assert!(verify_square_universal(&sk.cat, sq, LimitKind::Pushout).unwrap());
}

#[test]
fn opposite_is_an_involution() {
    let sk = SetSkeleton::with_bound(3);
    let op = opposite(&sk.cat);
    assert!(validate_category(&op).is_empty());
    let opop = opposite(&op);
    assert_eq!(opop.n_objects(), sk.cat.n_objects());
    assert_eq!(opop.arrows(), sk.cat.arrows());
    for f in sk.cat.arrow_ids() {
        for g in sk.cat.arrow_ids() {
            assert_eq!(sk.cat.compose(g, f), opop.compose(g, f));
        }
    }
}

#[test]
fn opposite_swaps_mono_and_epi() {
    let sk = SetSkeleton::with_bound(3);
    let op = opposite(&sk.cat);
    for f in sk.cat.arrow_ids() {
        let a = classify_arrow(&sk.cat, f).unwrap();
        let b = classify_arrow(&op, f).unwrap();
        assert_eq!(a.mono, b.epi, "arrow {f}");
        assert_eq!(a.epi, b.mono, "arrow {f}");
        assert_eq!(a.split_mono, b.split_epi, "arrow {f}");
        assert_eq!(a.iso, b.iso, "arrow {f}");
    }
}

#[test]
fn ordinal_two_squared_is_the_commutative_square_category() {
    let ord = ordinal(2, OrdinalVariant::Trivial).unwrap();
    let sq = product_category(&ord.cat, &ord.cat);
    assert!(validate_category(&sq).is_empty());
    assert_eq!(sq.n_objects(), 4);
    assert_eq!(sq.n_arrows(), 9);
    // exactly one arrow between comparable corners, none backwards
    let mut nonid = 0;
    for a in sq.arrow_ids() {
        if !sq.is_identity(a) {
            nonid += 1;
        }
    }
    assert_eq!(nonid, 5); // two sides, two sides, one diagonal
}

#[test]
fn identity_functor_and_identity_transformation_check_out() {
    let sk = SetSkeleton::with_bound(2);
    let idf = FinFunctor::identity(&sk.cat);
    assert!(check_functor(&sk.cat, &sk.cat, &idf).is_empty());
    let nat = NatTransformation {
        components: sk.cat.object_ids().map(|b| sk.cat.identity_of(b)).collect(),
    };
    assert!(check_natural(&sk.cat, &sk.cat, &idf, &idf, &nat).is_empty());
}

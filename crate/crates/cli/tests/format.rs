//! Round-trip and diagnostic tests for the document text format.

use std::collections::BTreeMap;

use diptych_cli::format::{parse, serialize, Document, Payload};
use diptych_core::conjugation::{conjugate_principal, Cover};
use diptych_core::corpus::{cover_three_cycle, cyclic_group, principal_to_banal, z2_free_action_on_4};
use diptych_core::diptych::set_standard_diptych;
use diptych_core::groupoid::canonical_butterfly;
use diptych_core::setcat::SetSkeleton;

fn assert_round_trip(doc: &Document) {
    let text = serialize(doc);
    let reparsed = parse(&text).unwrap_or_else(|e| panic!("reparsing failed: {e}\n{text}"));
    assert_eq!(serialize(&reparsed), text, "canonical form must be a fixed point");
}

#[test]
fn groupoid_document_round_trips_bit_exactly() {
    let doc = Document::new("z2", Payload::Groupoid(cyclic_group(2)));
    let text = serialize(&doc);
    assert!(text.starts_with("kind groupoid\nname z2\nobjects 1\n"));
    assert!(text.ends_with('\n'));
    assert_round_trip(&doc);
}

#[test]
fn every_document_kind_round_trips() {
    let z2 = cyclic_group(2);
    let cb = canonical_butterfly(&z2);
    let bf = conjugate_principal(&principal_to_banal(&[0, 0, 1]).unwrap()).unwrap();
    let mut table = BTreeMap::new();
    for (i, piece) in cover_three_cycle().pieces.iter().enumerate() {
        for &b in piece {
            table.insert((i, i, b), 0usize);
        }
    }
    let docs = [
        Document::new("cat", Payload::Category(z2.cat.clone())),
        Document::new("set2", Payload::Diptych(set_standard_diptych(&SetSkeleton::with_bound(2)))),
        Document::new("z2", Payload::Groupoid(z2.clone())),
        Document::new("delta", Payload::Morphism(cb.delta.clone())),
        Document::new("act", Payload::Action(z2_free_action_on_4())),
        Document::new("cover", Payload::Cover(cover_three_cycle())),
        Document::new(
            "diag",
            Payload::Cocycle { cover: cover_three_cycle(), target: z2.clone(), table },
        ),
        Document::new("bf", Payload::Butterfly(bf)),
    ];
    for doc in &docs {
        assert_round_trip(doc);
    }
}

#[test]
fn comments_and_blank_lines_are_ignored()  {
    let text = "\n# a trivial group\nkind groupoid\nname z1   # inline comment\n\nobjects 1\narrow 0 0 0\nidentity 0 0\ncomp 0 0 0\ninverse 0 0\n";
    let doc = parse(text).unwrap();
    assert_eq!(doc.name.as_deref(), Some("z1"));
    let Payload::Groupoid(g) = &doc.payload else { panic!("expected a groupoid") };
    assert_eq!(g.n_arrows(), 1);
}

#[test]
fn empty_object_category_is_rejected() {
    let e = parse("kind category\nobjects 0\n").unwrap_err();
    assert!(e.msg.contains("no objects"), "{e}");
    assert_eq!(e.line, 2);
}

#[test]
fn comp_referencing_an_unknown_arrow_is_a_dangling_id() {
    let text = "kind category\nobjects 1\narrow 0 0 0\nidentity 0 0\ncomp 0 0 0\ncomp 0 7 0\n";
    let e = parse(text).unwrap_err();
    assert!(e.msg.contains("dangling id"), "{e}");
    assert!(e.msg.contains('7'), "the offending arrow is named: {e}");
    assert_eq!(e.line, 6);
}

#[test]
fn duplicate_arrow_ids_are_rejected() {
    let text = "kind category\nobjects 1\narrow 0 0 0\narrow 0 0 0\nidentity 0 0\n";
    let e = parse(text).unwrap_err();
    assert!(e.msg.contains("duplicate id"), "{e}");
}

#[test]
fn structural_gaps_are_reported() {
    // missing identity line
    let e = parse("kind category\nobjects 1\narrow 0 0 0\n").unwrap_err();
    assert!(e.msg.contains("missing identity"), "{e}");
    // missing inverse line in a groupoid
    let e = parse("kind groupoid\nobjects 1\narrow 0 0 0\nidentity 0 0\ncomp 0 0 0\n")
        .unwrap_err();
    assert!(e.msg.contains("missing inverse"), "{e}");
    // unclosed section
    let e = parse("kind morphism\nsection source\nobjects 1\n").unwrap_err();
    assert!(e.msg.contains("never closed"), "{e}");
}

#[test]
fn unknown_kinds_and_keywords_are_syntax_errors() {
    assert!(parse("kind polytope\n").unwrap_err().msg.contains("unknown document kind"));
    assert!(parse("objects 1\n").unwrap_err().msg.contains("kind"));
    let e = parse("kind groupoid\nobjects 1\nfrobnicate 3\n").unwrap_err();
    assert!(e.msg.contains("unknown"), "{e}");
    assert_eq!(e.line, 3);
}

#[test]
fn diptych_product_lines_are_verified_on_parse() {
    let d = set_standard_diptych(&SetSkeleton::with_bound(2));
    let mut text = serialize(&Document::new("set2", Payload::Diptych(d)));
    // corrupt the witness of the largest product: point it at the terminal
    // object with identity legs
    let line = text.lines().filter(|l| l.starts_with("product")).last().unwrap().to_string();
    let mut f: Vec<&str> = line.split(' ').collect();
    f[3] = "0";
    f[4] = "0";
    f[5] = "0";
    let bad = f.join(" ");
    text = text.replace(&line, &bad);
    let e = parse(&text).unwrap_err();
    assert!(
        e.msg.contains("legs do not match") || e.msg.contains("universal property"),
        "{e}"
    );
}

#[test]
fn cover_points_must_lie_under_the_base() {
    let bad = Cover { b_size: 2, pieces: vec![vec![0, 5]] };
    let text = serialize(&Document::new("c", Payload::Cover(bad)));
    let e = parse(&text).unwrap_err();
    assert!(e.msg.contains("dangling id"), "{e}");
}

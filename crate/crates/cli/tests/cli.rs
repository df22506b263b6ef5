//! End-to-end tests of the `diptych` binary: exit-code trichotomy and
//! report contents on the standard examples.

use std::collections::BTreeMap;
use std::path::Path;
use std::process::{Command, Output};

use diptych_cli::format::{serialize, Document, Payload};
use diptych_core::corpus::{cover_three_cycle, cyclic_group, with_comp_override, z2_free_action_on_4};
use diptych_core::diptych::set_standard_diptych;
use diptych_core::groupoid::canonical_butterfly;
use diptych_core::setcat::SetSkeleton;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_diptych"))
}

fn write_doc(dir: &Path, file: &str, doc: &Document) -> String {
    let path = dir.join(file);
    std::fs::write(&path, serialize(doc)).unwrap();
    path.to_str().unwrap().to_string()
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn z2_cocycle_doc(twist: bool) -> Document {
    let cover = cover_three_cycle();
    let mut table = BTreeMap::new();
    for (i, piece) in cover.pieces.iter().enumerate() {
        for &b in piece {
            table.insert((i, i, b), 0usize);
        }
    }
    let t = if twist { 1 } else { 0 };
    for (i, j, b, v) in [(0, 1, 1, t), (1, 0, 1, t), (1, 2, 2, 0), (2, 1, 2, 0), (2, 0, 0, 0), (0, 2, 0, 0)] {
        table.insert((i, j, b), v);
    }
    Document::new(
        if twist { "twisted" } else { "trivial" },
        Payload::Cocycle { cover, target: cyclic_group(2), table },
    )
}

#[test]
fn validate_accepts_the_set_skeleton_diptych() {
    let dir = tempfile::tempdir().unwrap();
    let d = set_standard_diptych(&SetSkeleton::with_bound(3));
    let path = write_doc(dir.path(), "set3.dip", &Document::new("set3", Payload::Diptych(d)));
    let out = run(&["validate", "--input", &path]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout_of(&out));
    assert!(stdout_of(&out).contains("ok"));
}

#[test]
fn validate_reports_a_broken_groupoid_with_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let z3 = cyclic_group(3);
    let broken = with_comp_override(&z3, (1, 1), 0);
    let path = write_doc(
        dir.path(),
        "broken.dip",
        &Document::new("broken", Payload::Groupoid(broken.into())),
    );
    let out = run(&["validate", "--input", &path]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!stdout_of(&out).contains(": ok"));
}

#[test]
fn malformed_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.dip");
    std::fs::write(&path, "kind category\nobjects 0\n").unwrap();
    let out = run(&["validate", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("no objects"), "{err}");
    // unknown subcommands exit 2 as well
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn gauge_reports_eight_arrows_for_the_free_z2_action() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_doc(
        dir.path(),
        "act.dip",
        &Document::new("z2-on-4", Payload::Action(z2_free_action_on_4())),
    );
    let out = run(&["gauge", "--input", &path]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout_of(&out));
    let text = stdout_of(&out);
    assert!(text.contains("arrows(G)=8"), "{text}");
    assert!(text.contains("arrows(K)=32"), "{text}");
    assert!(text.contains("transverse=true"), "{text}");
}

#[test]
fn classify_morphism_flags_the_canonical_division_as_an_actor() {
    let dir = tempfile::tempdir().unwrap();
    let cb = canonical_butterfly(&cyclic_group(2));
    let path = write_doc(
        dir.path(),
        "delta.dip",
        &Document::new("delta-z2", Payload::Morphism(cb.delta)),
    );
    let out = run(&["classify-morphism", "--input", &path]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("actor=true"), "{text}");
    let names: Vec<&str> = text.lines().filter_map(|l| l.split('=').next()).collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted, "flags print in alphabetical order");
}

#[test]
fn nerve_of_a_group_is_exact() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_doc(
        dir.path(),
        "z2.dip",
        &Document::new("z2", Payload::Groupoid(cyclic_group(2))),
    );
    let out = run(&["nerve", "--input", &path]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("level 3: 8"), "{text}");
    assert!(text.contains("exact=true"), "{text}");
}

#[test]
fn conjugate_emits_a_butterfly_that_validates() {
    let dir = tempfile::tempdir().unwrap();
    let cb = canonical_butterfly(&cyclic_group(2));
    let input = write_doc(
        dir.path(),
        "delta.dip",
        &Document::new("delta-z2", Payload::Morphism(cb.delta)),
    );
    let emitted = dir.path().join("bf.dip");
    let out = run(&["conjugate", "--input", &input, "--emit", emitted.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout_of(&out));
    let out2 = run(&["validate", "--input", emitted.to_str().unwrap()]);
    assert_eq!(out2.status.code(), Some(0), "{}", stdout_of(&out2));
}

#[test]
fn cocycle_commands_build_torsors_and_compare_classes() {
    let dir = tempfile::tempdir().unwrap();
    let twisted = write_doc(dir.path(), "twisted.dip", &z2_cocycle_doc(true));
    let trivial = write_doc(dir.path(), "trivial.dip", &z2_cocycle_doc(false));

    let out = run(&["cocycle", "--input", &twisted]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout_of(&out));
    let text = stdout_of(&out);
    assert!(text.contains("points(torsor)=6"), "{text}");
    assert!(text.contains("arrows(gauge)=18"), "{text}");

    let out = run(&["cocycle", "--input", &twisted, "--input", &trivial]);
    assert_eq!(out.status.code(), Some(1), "different classes exit 1");
    assert!(stdout_of(&out).contains("cohomologous=false"));

    let out = run(&["cocycle", "--input", &twisted, "--input", &twisted]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_of(&out).contains("cohomologous=true"));
}

#[test]
fn classify_square_prints_all_nine_flags() {
    let dir = tempfile::tempdir().unwrap();
    let d = set_standard_diptych(&SetSkeleton::with_bound(3));
    let path = write_doc(dir.path(), "set3.dip", &Document::new("set3", Payload::Diptych(d)));
    let out = run(&["classify-square", "--input", &path, "0", "0", "0", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    for flag in ["commutes", "gpb", "hi", "hs", "ipb", "s_exact", "spb", "vi", "vs"] {
        assert!(text.contains(&format!("{flag}=")), "missing {flag}: {text}");
    }
}

#[test]
fn catalog_names_are_stable() {
    for name in ["upsilon", "butterfly-type", "ordinal:3:trivial", "finv:3", "nabla:3", "set:2"] {
        let out = run(&["catalog", name]);
        assert_eq!(out.status.code(), Some(0), "catalog {name}");
        assert!(stdout_of(&out).contains("objects="));
    }
    assert_eq!(run(&["catalog", "dodecahedron"]).status.code(), Some(2));
}

#[test]
fn sweep_passes_every_acceptance_criterion() {
    let out = run(&["sweep"]);
    let text = stdout_of(&out);
    assert_eq!(out.status.code(), Some(0), "{text}");
    assert!(text.contains("passed 9/9"), "{text}");
    assert_eq!(text.matches("PASS").count(), 9, "{text}");
}

#[test]
fn output_is_deterministic_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let d = set_standard_diptych(&SetSkeleton::with_bound(3));
    let path = write_doc(dir.path(), "set3.dip", &Document::new("set3", Payload::Diptych(d)));
    let a = stdout_of(&run(&["validate", "--input", &path]));
    let b = stdout_of(&run(&["validate", "--input", &path]));
    assert_eq!(a, b);
}

//! Seeded generators for test corpora: small groupoids within fixed size
//! bounds, single-entry table mutations that break an axiom, and named
//! example objects (actions, covers, cocycles) reused by sweeps and tests.

use std::collections::HashMap;
use std::sync::Arc;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::conjugation::{cocycle_from_table, Cocycle, Cover};
use crate::fincat::{ArrId, Arrow, FinCategory};
use crate::groupoid::{
    banal_groupoid, canonical_butterfly, check_groupoid, disjoint_union, null_groupoid,
    principal_groupoid, FinGroupoid,
};
use crate::morphism::{ActionLaw, GroupoidMorphism};

/// Maximum object count for corpus groupoids.
pub const MAX_OBJECTS: usize = 5;
/// Maximum arrow count for corpus groupoids.
pub const MAX_ARROWS: usize = 24;

/// The cyclic group of order n as a one-object groupoid; arrow k is the
/// residue k.
pub fn cyclic_group(n: usize) -> Arc<FinGroupoid> {
    assert!(n >= 1);
    let arrows = vec![Arrow { src: 0, tgt: 0 }; n];
    let cat = FinCategory::from_fn(
        format!("Z/{n}"),
        1,
        arrows,
        vec![0],
        |g, f| Some((g + f) % n),
    );
    let inverse = (0..n).map(|k| (n - k) % n).collect();
    Arc::new(FinGroupoid { cat, inverse })
}

/// The Klein four-group: arrows are bitmasks, composition is xor.
pub fn klein_group() -> Arc<FinGroupoid> {
    let arrows = vec![Arrow { src: 0, tgt: 0 }; 4];
    let cat = FinCategory::from_fn("V4", 1, arrows, vec![0], |g, f| Some(g ^ f));
    Arc::new(FinGroupoid { cat, inverse: (0..4).collect() })
}

fn within_bounds(g: &FinGroupoid) -> bool {
    g.base_size() <= MAX_OBJECTS && g.n_arrows() <= MAX_ARROWS
}

/// A deterministic corpus of at least fifty groupoids within the size
/// bounds, all passing the groupoid axioms.
pub fn corpus_groupoids(seed: u64) -> Vec<(String, Arc<FinGroupoid>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<(String, Arc<FinGroupoid>)> = Vec::new();
    for n in 1..=8 {
        out.push((format!("Z/{n}"), cyclic_group(n)));
    }
    out.push(("V4".into(), klein_group()));
    for n in 1..=5 {
        out.push((format!("null({n})"), Arc::new(null_groupoid(n))));
    }
    for n in 2..=4 {
        out.push((format!("banal({n})"), Arc::new(banal_groupoid(n))));
    }
    // random principal groupoids from surjections onto smaller sets
    for i in 0..10 {
        let n = rng.gen_range(2..=4usize);
        let k = rng.gen_range(1..=n);
        let mut p: Vec<usize> = (0..n).map(|x| x % k).collect();
        p.shuffle(&mut rng);
        let g = principal_groupoid(&p).expect("surjective by construction");
        out.push((format!("principal#{i}{p:?}"), Arc::new(g)));
    }
    // action groupoids of cyclic groups via permutations of compatible order
    let mut added = 0;
    while added < 8 {
        let n = rng.gen_range(2..=4usize);
        let e = rng.gen_range(2..=(MAX_ARROWS / n));
        let mut perm: Vec<usize> = (0..e).collect();
        perm.shuffle(&mut rng);
        let Ok(law) = permutation_action_law(n, &perm) else {
            continue;
        };
        let Ok((ag, _)) = crate::morphism::action_groupoid(&law) else {
            continue;
        };
        if within_bounds(&ag) {
            out.push((format!("action Z/{n} on {e} (#{added})"), ag));
            added += 1;
        }
    }
    // components of the canonical bow-tie of Z/2
    let cb = canonical_butterfly(&cyclic_group(2));
    out.push(("Δ(Z/2)".into(), cb.delta_g.clone()));
    out.push(("∇(Z/2)".into(), cb.nabla_g.clone()));
    out.push(("□(Z/2)".into(), cb.square_g.clone()));
    // random disjoint unions of earlier entries
    let base_len = out.len();
    let mut unions = 0;
    while unions < 15 {
        let a = &out[rng.gen_range(0..base_len)];
        let b = &out[rng.gen_range(0..base_len)];
        let u = disjoint_union(&a.1, &b.1);
        if within_bounds(&u) {
            out.push((format!("{} ⊔ {}", a.0, b.0), Arc::new(u)));
            unions += 1;
        }
    }
    for (name, g) in &out {
        debug_assert!(check_groupoid(g).is_empty(), "corpus entry {name} invalid");
        debug_assert!(within_bounds(g), "corpus entry {name} too large");
    }
    out
}

/// Replace a single composition-table entry.
pub fn with_comp_override(g: &FinGroupoid, pair: (ArrId, ArrId), to: ArrId) -> FinGroupoid {
    let cat = &g.cat;
    let arrows = cat.arrows().to_vec();
    let identity: Vec<ArrId> = (0..cat.n_objects()).map(|o| cat.identity_of(o)).collect();
    let base = cat.clone();
    let cat2 = FinCategory::from_fn(
        cat.name.clone(),
        cat.n_objects(),
        arrows,
        identity,
        move |g2, g1| {
            if (g2, g1) == pair {
                Some(to)
            } else {
                base.compose(g2, g1)
            }
        },
    );
    FinGroupoid { cat: cat2, inverse: g.inverse.clone() }
}

/// Replace a single inverse-table entry.
pub fn with_inverse_override(g: &FinGroupoid, at: ArrId, to: ArrId) -> FinGroupoid {
    let mut inverse = g.inverse.clone();
    inverse[at] = to;
    FinGroupoid { cat: g.cat.clone(), inverse }
}

/// Up to `want` single-entry mutations of g, each verified to fail the
/// groupoid axioms, with a description of the edit.
pub fn mutations(g: &FinGroupoid, seed: u64, want: usize) -> Vec<(FinGroupoid, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let n = g.n_arrows();
    if n < 2 {
        return out;
    }
    let mut composable: Vec<(ArrId, ArrId)> = Vec::new();
    for a in g.cat.arrow_ids() {
        for b in g.cat.arrow_ids() {
            if g.cat.src(a) == g.cat.tgt(b) {
                composable.push((a, b));
            }
        }
    }
    let mut attempts = 0;
    while out.len() < want && attempts < 200 * want {
        attempts += 1;
        let mutant = if rng.gen_bool(0.5) && !composable.is_empty() {
            let &(a, b) = composable.choose(&mut rng).unwrap();
            let orig = g.compose(a, b).unwrap();
            let to = rng.gen_range(0..n);
            if to == orig {
                continue;
            }
            (
                with_comp_override(g, (a, b), to),
                format!("comp[{a},{b}] := {to}"),
            )
        } else {
            let at = rng.gen_range(0..n);
            let to = rng.gen_range(0..n);
            if to == g.inv(at) {
                continue;
            }
            (with_inverse_override(g, at, to), format!("inv[{at}] := {to}"))
        };
        if !check_groupoid(&mutant.0).is_empty() {
            out.push(mutant);
        }
    }
    out
}

// ---------------------------------------------------------------------------
// named morphisms

/// Unit inclusion of the base: null groupoid on B into g.
pub fn unit_inclusion(g: &Arc<FinGroupoid>) -> GroupoidMorphism {
    let n = g.base_size();
    let src = Arc::new(null_groupoid(n));
    let f1 = (0..n).map(|b| g.unit(b)).collect();
    GroupoidMorphism::new(src, g.clone(), (0..n).collect(), f1)
}

/// Inclusion Z/m ↪ Z/n for m dividing n, k ↦ k·n/m.
pub fn cyclic_inclusion(m: usize, n: usize) -> Result<GroupoidMorphism, String> {
    if m == 0 || n % m != 0 {
        return Err("order must divide".into());
    }
    let (zm, zn) = (cyclic_group(m), cyclic_group(n));
    let f1 = (0..m).map(|k| k * (n / m)).collect();
    Ok(GroupoidMorphism::new(zm, zn, vec![0], f1))
}

/// Projection of a principal groupoid onto the banal groupoid of its
/// quotient: arrow (x → y) ↦ banal arrow (p x → p y).
pub fn principal_to_banal(p: &[usize]) -> Result<GroupoidMorphism, String> {
    let src = Arc::new(principal_groupoid(p)?);
    let k = p.iter().copied().max().map_or(0, |m| m + 1);
    let tgt = Arc::new(banal_groupoid(k));
    let f1 = src
        .cat
        .arrow_ids()
        .map(|a| p[src.alpha(a)] * k + p[src.beta(a)])
        .collect();
    Ok(GroupoidMorphism::new(src, tgt, p.to_vec(), f1))
}

/// A deterministic family of corpus morphisms spanning the taxonomy:
/// embeddings, actors, division morphisms, projections, identities.
pub fn corpus_morphisms(seed: u64) -> Vec<(String, GroupoidMorphism)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<(String, GroupoidMorphism)> = Vec::new();
    for (m, n) in [(1, 2), (2, 4), (2, 2), (3, 6), (2, 6)] {
        out.push((
            format!("Z/{m} into Z/{n}"),
            cyclic_inclusion(m, n).unwrap(),
        ));
    }
    for g in [cyclic_group(2), cyclic_group(3), klein_group()] {
        out.push((format!("units of {}", g.cat.name), unit_inclusion(&g)));
        let cb = canonical_butterfly(&g);
        out.push((format!("left translation of {}", g.cat.name), cb.delta));
        out.push((format!("right translation of {}", g.cat.name), cb.delta_bar));
    }
    for p in [vec![0usize, 0], vec![0, 0, 1], vec![0, 1, 0, 1]] {
        out.push((
            format!("principal over {p:?} to banal"),
            principal_to_banal(&p).unwrap(),
        ));
    }
    for (n, copies) in [(2usize, 1usize), (2, 2), (3, 1)] {
        let law = translation_action_law(&cyclic_group(n), copies);
        out.push((
            format!("division of Z/{n} translation x{copies}"),
            crate::conjugation::division_morphism(&law).unwrap(),
        ));
    }
    // a few random principal projections
    for i in 0..4 {
        let n = rng.gen_range(2..=4usize);
        let k = rng.gen_range(1..=n);
        let mut p: Vec<usize> = (0..n).map(|x| x % k).collect();
        p.shuffle(&mut rng);
        out.push((
            format!("random principal projection #{i}"),
            principal_to_banal(&p).unwrap(),
        ));
    }
    for (name, m) in &out {
        debug_assert!(m.check().is_empty(), "corpus morphism {name} invalid");
    }
    out
}

// ---------------------------------------------------------------------------
// named actions, covers, cocycles

/// Left-translation action of a group on `copies` disjoint copies of its
/// own arrow set; free by cancellation.
pub fn translation_action_law(h: &Arc<FinGroupoid>, copies: usize) -> ActionLaw {
    assert_eq!(h.base_size(), 1, "group expected");
    let n = h.n_arrows();
    let e_size = n * copies;
    let mut lambda = HashMap::new();
    for g in h.cat.arrow_ids() {
        for c in 0..copies {
            for k in h.cat.arrow_ids() {
                let gk = h.compose(g, k).unwrap();
                lambda.insert((g, c * n + k), c * n + gk);
            }
        }
    }
    ActionLaw {
        g: h.clone(),
        e_size,
        moment: vec![0; e_size],
        lambda,
    }
}

/// Action of Z/n on a point set through a permutation whose order divides n.
pub fn permutation_action_law(n: usize, perm: &[usize]) -> Result<ActionLaw, String> {
    let e = perm.len();
    // check perm is a permutation with sigma^n = id
    let mut cur: Vec<usize> = (0..e).collect();
    let mut seen = vec![false; e];
    for &p in perm {
        if p >= e || std::mem::replace(&mut seen[p], true) {
            return Err("not a permutation".into());
        }
    }
    let mut lambda = HashMap::new();
    let g = cyclic_group(n);
    for k in 0..n {
        for x in 0..e {
            lambda.insert((k, x), cur[x]);
        }
        cur = cur.iter().map(|&x| perm[x]).collect();
    }
    if cur != (0..e).collect::<Vec<_>>() {
        return Err("permutation order does not divide n".into());
    }
    Ok(ActionLaw {
        g,
        e_size: e,
        moment: vec![0; e],
        lambda,
    })
}

/// The free Z/2 action on four points over two orbits: the swap (0 1)(2 3).
pub fn z2_free_action_on_4() -> ActionLaw {
    permutation_action_law(2, &[1, 0, 3, 2]).unwrap()
}

/// Three 2-point pieces arranged in a cycle over the base {0, 1, 2}.
pub fn cover_three_cycle() -> Cover {
    Cover {
        b_size: 3,
        pieces: vec![vec![0, 1], vec![1, 2], vec![2, 0]],
    }
}

fn z2_cocycle(twist: bool) -> Cocycle {
    let cover = cover_three_cycle();
    let z2 = cyclic_group(2);
    let mut table = HashMap::new();
    for (i, piece) in cover.pieces.iter().enumerate() {
        for &b in piece {
            table.insert((i, i, b), 0usize);
        }
    }
    // overlaps: pieces 0∩1 = {1}, 1∩2 = {2}, 2∩0 = {0}
    let t = if twist { 1 } else { 0 };
    for (i, j, b, v) in [
        (0, 1, 1, t),
        (1, 0, 1, t),
        (1, 2, 2, 0),
        (2, 1, 2, 0),
        (2, 0, 0, 0),
        (0, 2, 0, 0),
    ] {
        table.insert((i, j, b), v);
    }
    cocycle_from_table(&cover, &z2, &table).expect("example cocycle well formed")
}

/// The 3-piece Z/2 cocycle with a single twisted overlap.
pub fn twisted_z2_cocycle() -> Cocycle {
    z2_cocycle(true)
}

/// The all-identity cocycle over the same cover.
pub fn trivial_z2_cocycle() -> Cocycle {
    z2_cocycle(false)
}

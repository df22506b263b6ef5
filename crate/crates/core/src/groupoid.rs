//! Finite groupoids: validity checking, degenerate classes (null, banal,
//! principal), orbits and isotropy, the symmetric nerve with its exactness
//! test, Υ-data reconstruction, Godement realization, the opposite groupoid,
//! and the canonical bow-tie diagram built from ΔG, ∇G and □G.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use crate::catalog::{finv_trunc, DualCardTrunc};
use crate::fincat::{opposite, validate_category, ArrId, Arrow, FinCategory, ObjId};
use crate::morphism::GroupoidMorphism;
use crate::report::ValidationReport;

/// A finite groupoid: a finite category together with an inverse table.
/// Arrows run from their source `alpha` to their target `beta`; `compose(y, x)`
/// is defined when `beta(x) == alpha(y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FinGroupoid {
    pub cat: FinCategory,
    pub inverse: Vec<ArrId>,
}

impl FinGroupoid {
    /// Wrap a category and inverse table without checking the axioms.
    /// Callers that construct by hand should run `check_groupoid` afterwards;
    /// the mutation harness uses this to build deliberately broken data.
    pub fn new_unchecked(cat: FinCategory, inverse: Vec<ArrId>) -> FinGroupoid {
        FinGroupoid { cat, inverse }
    }

    /// Build from a category alone by solving for inverses.
    pub fn from_category(cat: FinCategory) -> Result<FinGroupoid, ValidationReport> {
        let rep = validate_category(&cat);
        if !rep.is_empty() {
            return Err(rep);
        }
        let mut inverse = Vec::with_capacity(cat.n_arrows());
        for x in cat.arrow_ids() {
            let (a, b) = (cat.src(x), cat.tgt(x));
            let found = cat.hom(b, a).iter().copied().find(|&y| {
                cat.compose(y, x) == Some(cat.identity_of(a))
                    && cat.compose(x, y) == Some(cat.identity_of(b))
            });
            match found {
                Some(y) => inverse.push(y),
                None => {
                    let mut rep = ValidationReport::new();
                    rep.push("missing-inverse", format!("arrow {x} has no two-sided inverse"));
                    return Err(rep);
                }
            }
        }
        Ok(FinGroupoid { cat, inverse })
    }

    pub fn base_size(&self) -> usize {
        self.cat.n_objects()
    }

    pub fn n_arrows(&self) -> usize {
        self.cat.n_arrows()
    }

    /// source object
    pub fn alpha(&self, x: ArrId) -> ObjId {
        self.cat.src(x)
    }

    /// target object
    pub fn beta(&self, x: ArrId) -> ObjId {
        self.cat.tgt(x)
    }

    pub fn unit(&self, b: ObjId) -> ArrId {
        self.cat.identity_of(b)
    }

    pub fn inv(&self, x: ArrId) -> ArrId {
        self.inverse[x]
    }

    pub fn compose(&self, y: ArrId, x: ArrId) -> Option<ArrId> {
        self.cat.compose(y, x)
    }
}

pub fn check_groupoid(g: &FinGroupoid) -> ValidationReport {
    let mut rep = validate_category(&g.cat);
    let c = &g.cat;
    if g.inverse.len() != c.n_arrows() {
        rep.push("inverse-shape", "inverse table length differs from arrow count");
        return rep;
    }
    if !rep.is_empty() {
        return rep;
    }
    for x in c.arrow_ids() {
        let y = g.inverse[x];
        if c.src(y) != c.tgt(x) || c.tgt(y) != c.src(x) {
            rep.push(
                "inverse-typing",
                format!("inverse of arrow {x} does not reverse its endpoints"),
            );
            continue;
        }
        if c.compose(y, x) != Some(c.identity_of(c.src(x))) {
            rep.push("inverse-left", format!("inv({x}) ∘ {x} is not the source unit"));
        }
        if c.compose(x, y) != Some(c.identity_of(c.tgt(x))) {
            rep.push("inverse-right", format!("{x} ∘ inv({x}) is not the target unit"));
        }
    }
    rep
}

/// Only identity arrows.
pub fn null_groupoid(n: usize) -> FinGroupoid {
    assert!(n > 0, "empty base rejected");
    let arrows = (0..n).map(|i| Arrow { src: i, tgt: i }).collect();
    let identity = (0..n).collect();
    let cat = FinCategory::from_fn(format!("null{n}"), n, arrows, identity, |g, f| {
        if g == f { Some(f) } else { None }
    });
    let inverse = (0..n).collect();
    FinGroupoid { cat, inverse }
}

/// Exactly one arrow i → j for every ordered pair; arrow id = i*n + j.
pub fn banal_groupoid(n: usize) -> FinGroupoid {
    assert!(n > 0, "empty base rejected");
    let mut arrows = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            arrows.push(Arrow { src: i, tgt: j });
        }
    }
    let identity = (0..n).map(|i| i * n + i).collect();
    let cat = FinCategory::from_fn(format!("banal{n}"), n, arrows, identity, move |g, f| {
        Some((f / n) * n + g % n)
    });
    let mut inverse = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            inverse.push(j * n + i);
        }
    }
    FinGroupoid { cat, inverse }
}

/// Kernel-pair groupoid of a surjection: arrows are ordered pairs of points
/// in the same fibre.
pub fn principal_groupoid(p: &[usize]) -> Result<FinGroupoid, String> {
    if p.is_empty() {
        return Err("empty base rejected".into());
    }
    let q = p.iter().copied().max().unwrap() + 1;
    for v in 0..q {
        if !p.contains(&v) {
            return Err(format!("quotient map is not surjective: {v} has empty fibre"));
        }
    }
    let n = p.len();
    let mut arrows = Vec::new();
    let mut index = HashMap::new();
    for i in 0..n {
        for j in 0..n {
            if p[i] == p[j] {
                index.insert((i, j), arrows.len());
                arrows.push(Arrow { src: i, tgt: j });
            }
        }
    }
    let identity = (0..n).map(|i| index[&(i, i)]).collect();
    let ends: Vec<(usize, usize)> = arrows.iter().map(|a| (a.src, a.tgt)).collect();
    let idx2 = index.clone();
    let cat = FinCategory::from_fn("principal", n, arrows, identity, move |g, f| {
        idx2.get(&(ends[f].0, ends[g].1)).copied()
    });
    let inverse = cat
        .arrow_ids()
        .map(|a| index[&(cat.tgt(a), cat.src(a))])
        .collect();
    Ok(FinGroupoid { cat, inverse })
}

/// true iff every arrow is a loop (α = β)
pub fn is_plurigroup(g: &FinGroupoid) -> bool {
    g.cat.arrow_ids().all(|a| g.alpha(a) == g.beta(a))
}

/// Connected components of the base under reachability, sorted.
pub fn orbits(g: &FinGroupoid) -> Vec<Vec<ObjId>> {
    let n = g.base_size();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let r = find(parent, parent[x]);
            parent[x] = r;
        }
        parent[x]
    }
    for a in g.cat.arrow_ids() {
        let (x, y) = (find(&mut parent, g.alpha(a)), find(&mut parent, g.beta(a)));
        if x != y {
            parent[x] = y;
        }
    }
    let mut groups: HashMap<usize, Vec<ObjId>> = HashMap::new();
    for b in 0..n {
        let r = find(&mut parent, b);
        groups.entry(r).or_default().push(b);
    }
    let mut out: Vec<Vec<ObjId>> = groups.into_values().collect();
    out.sort_by_key(|v| v[0]);
    out
}

/// Map sending each object to the index of its orbit.
pub fn orbit_map(g: &FinGroupoid) -> Vec<usize> {
    let parts = orbits(g);
    let mut out = vec![0; g.base_size()];
    for (k, part) in parts.iter().enumerate() {
        for &b in part {
            out[b] = k;
        }
    }
    out
}

/// The loop group at an object, as a sorted arrow list.
pub fn isotropy(g: &FinGroupoid, b: ObjId) -> Vec<ArrId> {
    g.cat.hom(b, b).to_vec()
}

/// τ = (β, α): G → banal(B); arrow x maps to the unique banal arrow
/// α(x) → β(x).
pub fn transitor(g: &FinGroupoid) -> GroupoidMorphism {
    let n = g.base_size();
    let banal = banal_groupoid(n);
    let f0 = (0..n).collect();
    let f1 = g.cat.arrow_ids().map(|x| g.alpha(x) * n + g.beta(x)).collect();
    GroupoidMorphism::new(Arc::new(g.clone()), Arc::new(banal), f0, f1)
}

pub fn transitor_injective(g: &FinGroupoid) -> bool {
    let n = g.base_size();
    let mut seen = vec![false; n * n];
    for x in g.cat.arrow_ids() {
        let k = g.alpha(x) * n + g.beta(x);
        if seen[k] {
            return false;
        }
        seen[k] = true;
    }
    true
}

/// If the transitor is injective, exhibit the isomorphism with the
/// kernel-pair groupoid of the orbit map. Returns (orbit map, iso).
pub fn godement_realize(g: &FinGroupoid) -> Option<(Vec<usize>, GroupoidMorphism)> {
    if !transitor_injective(g) {
        return None;
    }
    let q = orbit_map(g);
    let pr = principal_groupoid(&q).ok()?;
    // in a groupoid, reachability gives a direct arrow, so hom(i, j) is a
    // singleton exactly when i and j share an orbit
    let mut f1 = Vec::with_capacity(g.n_arrows());
    for x in g.cat.arrow_ids() {
        let (i, j) = (g.alpha(x), g.beta(x));
        let img = pr.cat.hom(i, j);
        debug_assert_eq!(img.len(), 1);
        f1.push(img[0]);
    }
    let f0 = (0..g.base_size()).collect();
    let m = GroupoidMorphism::new(Arc::new(g.clone()), Arc::new(pr), f0, f1);
    if m.check().is_empty() && m.is_bijective() {
        Some((q, m))
    } else {
        None
    }
}

/// Componentwise product of two groupoids on the product base.
pub fn product_groupoid(a: &FinGroupoid, b: &FinGroupoid) -> FinGroupoid {
    let cat = crate::fincat::product_category(&a.cat, &b.cat);
    let md = b.n_arrows();
    let inverse = (0..a.n_arrows() * md)
        .map(|x| a.inv(x / md) * md + b.inv(x % md))
        .collect();
    FinGroupoid { cat, inverse }
}

/// The opposite groupoid together with the inversion isomorphism g → g^op.
pub fn opposite_groupoid(g: &FinGroupoid) -> (FinGroupoid, GroupoidMorphism) {
    let op = FinGroupoid {
        cat: opposite(&g.cat),
        inverse: g.inverse.clone(),
    };
    let f0 = (0..g.base_size()).collect();
    let f1 = g.inverse.clone();
    let iso = GroupoidMorphism::new(Arc::new(g.clone()), Arc::new(op.clone()), f0, f1);
    (op, iso)
}

/// Disjoint sum of two groupoids (object and arrow ids of `b` shifted).
pub fn disjoint_union(a: &FinGroupoid, b: &FinGroupoid) -> FinGroupoid {
    let (no, na) = (a.base_size(), a.n_arrows());
    let mut arrows: Vec<Arrow> = a.cat.arrows().to_vec();
    arrows.extend(b.cat.arrows().iter().map(|ar| Arrow {
        src: ar.src + no,
        tgt: ar.tgt + no,
    }));
    let mut identity: Vec<ArrId> = (0..no).map(|o| a.cat.identity_of(o)).collect();
    identity.extend((0..b.base_size()).map(|o| b.cat.identity_of(o) + na));
    let (ca, cb) = (a.cat.clone(), b.cat.clone());
    let cat = FinCategory::from_fn(
        format!("{}+{}", a.cat.name, b.cat.name),
        no + b.base_size(),
        arrows,
        identity,
        move |g, f| {
            if g < na && f < na {
                ca.compose(g, f)
            } else if g >= na && f >= na {
                cb.compose(g - na, f - na).map(|x| x + na)
            } else {
                None
            }
        },
    );
    let mut inverse = a.inverse.clone();
    inverse.extend(b.inverse.iter().map(|&x| x + na));
    FinGroupoid { cat, inverse }
}

/// Wide subgroupoid spanned by a subset of arrows (must contain all units
/// and be closed under composition and inverse). Returns the subgroupoid and
/// the arrow reindexing old → new.
pub fn wide_subgroupoid(g: &FinGroupoid, keep: &[bool]) -> Result<(FinGroupoid, Vec<Option<ArrId>>), String> {
    if keep.len() != g.n_arrows() {
        return Err("flag vector length mismatch".into());
    }
    for b in 0..g.base_size() {
        if !keep[g.unit(b)] {
            return Err(format!("unit of object {b} missing"));
        }
    }
    let mut old_of_new = Vec::new();
    let mut new_of_old = vec![None; g.n_arrows()];
    for x in g.cat.arrow_ids() {
        if keep[x] {
            new_of_old[x] = Some(old_of_new.len());
            old_of_new.push(x);
        }
    }
    for &x in &old_of_new {
        if !keep[g.inv(x)] {
            return Err(format!("not inverse-closed at arrow {x}"));
        }
    }
    for &y in &old_of_new {
        for &x in &old_of_new {
            if let Some(z) = g.compose(y, x) {
                if !keep[z] {
                    return Err(format!("not composition-closed at ({y}, {x})"));
                }
            }
        }
    }
    let arrows: Vec<Arrow> = old_of_new
        .iter()
        .map(|&x| Arrow { src: g.alpha(x), tgt: g.beta(x) })
        .collect();
    let identity = (0..g.base_size())
        .map(|b| new_of_old[g.unit(b)].unwrap())
        .collect();
    let gc = g.cat.clone();
    let old2 = old_of_new.clone();
    let new2 = new_of_old.clone();
    let cat = FinCategory::from_fn(
        format!("{}|sub", g.cat.name),
        g.base_size(),
        arrows,
        identity,
        move |gg, ff| gc.compose(old2[gg], old2[ff]).and_then(|z| new2[z]),
    );
    let inverse = old_of_new
        .iter()
        .map(|&x| new_of_old[g.inv(x)].unwrap())
        .collect();
    Ok((FinGroupoid { cat, inverse }, new_of_old))
}

/// Backtracking search for a groupoid isomorphism; returns the object and
/// arrow bijections if one exists.
pub fn groupoids_isomorphic(a: &FinGroupoid, b: &FinGroupoid) -> Option<(Vec<ObjId>, Vec<ArrId>)> {
    if a.base_size() != b.base_size() || a.n_arrows() != b.n_arrows() {
        return None;
    }
    let n = a.base_size();
    // object signature: sorted hom-set sizes, loop count
    let sig = |g: &FinGroupoid, o: ObjId| -> (usize, Vec<usize>, Vec<usize>) {
        let mut outs: Vec<usize> = (0..g.base_size()).map(|t| g.cat.hom(o, t).len()).collect();
        let mut ins: Vec<usize> = (0..g.base_size()).map(|s| g.cat.hom(s, o).len()).collect();
        let loops = g.cat.hom(o, o).len();
        outs.sort_unstable();
        ins.sort_unstable();
        (loops, outs, ins)
    };
    let sig_a: Vec<_> = (0..n).map(|o| sig(a, o)).collect();
    let sig_b: Vec<_> = (0..n).map(|o| sig(b, o)).collect();

    fn extend_arrows(
        a: &FinGroupoid,
        b: &FinGroupoid,
        obj: &[ObjId],
        f1: &mut Vec<Option<ArrId>>,
        used: &mut Vec<bool>,
        next: ArrId,
    ) -> bool {
        let m = a.n_arrows();
        if next == m {
            // full check of composition preservation
            for y in 0..m {
                for x in 0..m {
                    let lhs = a.compose(y, x).map(|z| f1[z].unwrap());
                    let rhs = b.compose(f1[y].unwrap(), f1[x].unwrap());
                    if lhs != rhs {
                        return false;
                    }
                }
            }
            return true;
        }
        if f1[next].is_some() {
            return extend_arrows(a, b, obj, f1, used, next + 1);
        }
        let (s, t) = (obj[a.alpha(next)], obj[a.beta(next)]);
        for &cand in b.cat.hom(s, t) {
            if used[cand] {
                continue;
            }
            // forced consequences: inverse, composites with already-mapped arrows
            let mut forced: Vec<(ArrId, ArrId)> = vec![(next, cand)];
            let mut ok = true;
            let mut i = 0;
            while ok && i < forced.len() {
                let (x, fx) = forced[i];
                i += 1;
                match f1[x] {
                    Some(prev) => {
                        if prev != fx {
                            ok = false;
                        }
                        continue;
                    }
                    None => {
                        if used[fx] {
                            ok = false;
                            continue;
                        }
                        f1[x] = Some(fx);
                        used[fx] = true;
                    }
                }
                let inv_pair = (a.inv(x), b.inv(fx));
                forced.push(inv_pair);
                for y in 0..a.n_arrows() {
                    if let Some(fy) = f1[y] {
                        if let Some(z) = a.compose(y, x) {
                            match b.compose(fy, fx) {
                                Some(fz) => forced.push((z, fz)),
                                None => {
                                    ok = false;
                                    break;
                                }
                            }
                        }
                        if let Some(z) = a.compose(x, y) {
                            match b.compose(fx, fy) {
                                Some(fz) => forced.push((z, fz)),
                                None => {
                                    ok = false;
                                    break;
                                }
                            }
                        }
                    }
                }
            }
            let assigned: Vec<ArrId> = forced
                .iter()
                .filter(|&&(x, fx)| f1[x] == Some(fx))
                .map(|&(x, _)| x)
                .collect();
            if ok && extend_arrows(a, b, obj, f1, used, next + 1) {
                return true;
            }
            // roll back everything assigned in this step
            for &(x, fx) in &forced {
                if f1[x] == Some(fx) && assigned.contains(&x) {
                    f1[x] = None;
                    used[fx] = false;
                }
            }
        }
        false
    }

    fn extend_objects(
        a: &FinGroupoid,
        b: &FinGroupoid,
        sig_a: &[(usize, Vec<usize>, Vec<usize>)],
        sig_b: &[(usize, Vec<usize>, Vec<usize>)],
        obj: &mut Vec<Option<ObjId>>,
        used: &mut Vec<bool>,
        next: ObjId,
    ) -> Option<(Vec<ObjId>, Vec<ArrId>)> {
        let n = a.base_size();
        if next == n {
            let objv: Vec<ObjId> = obj.iter().map(|o| o.unwrap()).collect();
            // hom sizes must match pairwise before trying arrows
            for s in 0..n {
                for t in 0..n {
                    if a.cat.hom(s, t).len() != b.cat.hom(objv[s], objv[t]).len() {
                        return None;
                    }
                }
            }
            let mut f1 = vec![None; a.n_arrows()];
            let mut usedar = vec![false; b.n_arrows()];
            if extend_arrows(a, b, &objv, &mut f1, &mut usedar, 0) {
                return Some((objv, f1.into_iter().map(|x| x.unwrap()).collect()));
            }
            return None;
        }
        for cand in 0..n {
            if used[cand] || sig_a[next] != sig_b[cand] {
                continue;
            }
            obj[next] = Some(cand);
            used[cand] = true;
            if let Some(ans) = extend_objects(a, b, sig_a, sig_b, obj, used, next + 1) {
                return Some(ans);
            }
            obj[next] = None;
            used[cand] = false;
        }
        None
    }

    let mut obj = vec![None; n];
    let mut used = vec![false; n];
    extend_objects(a, b, &sig_a, &sig_b, &mut obj, &mut used, 0)
}

// ---------------------------------------------------------------------------
// symmetric nerve

/// Truncated symmetric nerve. Level ℓ holds (ℓ+1)-tuples (x₀, …, x_ℓ) of
/// arrows with a common source, x₀ a unit; level 0 is the base in the guise
/// of unit singletons. `maps` is indexed by the arrows of the dual-cardinal
/// truncation of matching depth and gives the induced table on levels.
#[derive(Debug, Clone)]
pub struct Nerve {
    pub trunc: usize,
    pub levels: Vec<Vec<Vec<ArrId>>>,
    pub maps: Vec<Vec<usize>>,
}

/// The dual-cardinal truncation at depth 4, shared by nerve construction and
/// the exactness test.
pub fn finv4() -> &'static DualCardTrunc {
    static CELL: OnceLock<DualCardTrunc> = OnceLock::new();
    CELL.get_or_init(|| finv_trunc(4).expect("depth 4 is within bound"))
}

pub fn symmetric_nerve(g: &FinGroupoid) -> Nerve {
    try_symmetric_nerve(g, 4).expect("nerve of a valid groupoid is well defined")
}

/// Build the nerve, reporting failure when a structural map falls outside
/// its target level (which happens for corrupted composition data).
pub fn try_symmetric_nerve(g: &FinGroupoid, trunc: usize) -> Result<Nerve, String> {
    let fv_local;
    let fv: &DualCardTrunc = if trunc == 4 {
        finv4()
    } else {
        fv_local = finv_trunc(trunc).map_err(|e| e.to_string())?;
        &fv_local
    };
    let mut levels: Vec<Vec<Vec<ArrId>>> = Vec::with_capacity(trunc);
    for level in 0..trunc {
        let mut elems = Vec::new();
        for b in 0..g.base_size() {
            let mut tuples: Vec<Vec<ArrId>> = vec![vec![g.unit(b)]];
            for _ in 0..level {
                let mut next = Vec::new();
                for t in &tuples {
                    for &x in g.cat.arrows_from(b) {
                        let mut t2 = t.clone();
                        t2.push(x);
                        next.push(t2);
                    }
                }
                tuples = next;
            }
            elems.extend(tuples);
        }
        levels.push(elems);
    }
    let index: Vec<HashMap<&[ArrId], usize>> = levels
        .iter()
        .map(|lv| lv.iter().enumerate().map(|(i, t)| (t.as_slice(), i)).collect())
        .collect();
    let mut maps = Vec::with_capacity(fv.pre.cat.n_arrows());
    for a in fv.pre.cat.arrow_ids() {
        let (f, p, q) = fv.dual_of(a);
        let (lsrc, ltgt) = (p - 1, q - 1);
        let mut table = Vec::with_capacity(levels[lsrc].len());
        for tuple in &levels[lsrc] {
            let base = tuple[f[0]];
            let mut out = Vec::with_capacity(q);
            for k in 0..q {
                let y = g
                    .compose(tuple[f[k]], g.inv(base))
                    .ok_or_else(|| format!("structural map undefined on a level-{lsrc} tuple"))?;
                out.push(y);
            }
            let idx = index[ltgt]
                .get(out.as_slice())
                .ok_or_else(|| format!("structural image escapes level {ltgt}"))?;
            table.push(*idx);
        }
        maps.push(table);
    }
    Ok(Nerve { trunc, levels, maps })
}

/// One special square of the depth-4 truncation: (leg_a, leg_b, s, i) with
/// leg_a: P → A, leg_b: P → B, s: A → C, i: B → C, a certified pullback whose
/// both cospan legs carry a class.
#[derive(Debug, Clone, Copy)]
pub struct SpecialSquare {
    pub leg_a: ArrId,
    pub leg_b: ArrId,
    pub s: ArrId,
    pub i: ArrId,
}

/// Canonical pushout in finite sets of a span (f: c → a, g: c → b); returns
/// (size, leg from a, leg from b), classes numbered in order of first
/// occurrence a-side then b-side.
fn set_pushout(f: &[usize], g: &[usize], a: usize, b: usize) -> (usize, Vec<usize>, Vec<usize>) {
    let mut parent: Vec<usize> = (0..a + b).collect();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    for x in 0..f.len() {
        let (u, v) = (find(&mut parent, f[x]), find(&mut parent, a + g[x]));
        if u != v {
            parent[u] = v;
        }
    }
    let mut class = HashMap::new();
    let mut la = Vec::with_capacity(a);
    for x in 0..a {
        let r = find(&mut parent, x);
        let next = class.len();
        la.push(*class.entry(r).or_insert(next));
    }
    let mut lb = Vec::with_capacity(b);
    for x in 0..b {
        let r = find(&mut parent, a + x);
        let next = class.len();
        lb.push(*class.entry(r).or_insert(next));
    }
    (class.len(), la, lb)
}

/// All pullbacks of cospans in the depth-4 truncation whose two legs both
/// carry a class (good mono or good epi) and whose apex stays within depth.
pub fn special_squares() -> &'static Vec<SpecialSquare> {
    static CELL: OnceLock<Vec<SpecialSquare>> = OnceLock::new();
    CELL.get_or_init(|| {
        let fv = finv4();
        let c = &fv.pre.cat;
        let good: Vec<ArrId> = c
            .arrow_ids()
            .filter(|&x| fv.pre.in_di(x) || fv.pre.in_ds(x))
            .collect();
        let mut out = Vec::new();
        for &s in &good {
            for &i in &good {
                if c.tgt(s) != c.tgt(i) || i < s {
                    continue;
                }
                // pulling back along an identity is covered by functoriality
                if c.is_identity(s) || c.is_identity(i) {
                    continue;
                }
                // dualize: span (f: cc → ca, g: cc → cb) in finite sets
                let (f, ca, cc) = fv.dual_of(s);
                let (gm, cb, cc2) = fv.dual_of(i);
                debug_assert_eq!(cc, cc2);
                let (psz, la, lb) = set_pushout(f, gm, ca, cb);
                if psz == 0 || psz > fv.n {
                    continue;
                }
                let leg_a = fv.arrow_of_dual(psz, ca, &la).unwrap();
                let leg_b = fv.arrow_of_dual(psz, cb, &lb).unwrap();
                out.push(SpecialSquare { leg_a, leg_b, s, i });
            }
        }
        out
    })
}

/// Full exactness test: the table family must be functorial over the
/// truncation and send every special square to a set-level pullback.
pub fn nerve_exactness_check(n: &Nerve) -> Result<bool, String> {
    if n.trunc != 4 {
        return Err(format!("exactness needs truncation 4, nerve has {}", n.trunc));
    }
    let fv = finv4();
    let c = &fv.pre.cat;
    if n.maps.len() != c.n_arrows() || n.levels.len() != 4 {
        return Err("nerve tables do not match the truncation".into());
    }
    for a in c.arrow_ids() {
        let (ls, lt) = (c.src(a), c.tgt(a));
        if n.maps[a].len() != n.levels[ls].len()
            || n.maps[a].iter().any(|&v| v >= n.levels[lt].len())
        {
            return Err("structural table has wrong shape".into());
        }
    }
    // functoriality
    for o in c.object_ids() {
        let id = c.identity_of(o);
        if n.maps[id].iter().enumerate().any(|(i, &v)| v != i) {
            return Ok(false);
        }
    }
    for f in c.arrow_ids() {
        for &g in c.arrows_from(c.tgt(f)) {
            let gf = c.compose(g, f).expect("category is closed");
            let composed: Vec<usize> = n.maps[f].iter().map(|&x| n.maps[g][x]).collect();
            if composed != n.maps[gf] {
                return Ok(false);
            }
        }
    }
    // special pullbacks become set pullbacks: the mediator into the fibre
    // product must be injective, commuting, and hit every fibre pair
    for sq in special_squares() {
        let (ta, tb) = (&n.maps[sq.leg_a], &n.maps[sq.leg_b]);
        let (ts, ti) = (&n.maps[sq.s], &n.maps[sq.i]);
        let apex = n.levels[c.src(sq.leg_a)].len();
        let csize = n.levels[c.tgt(sq.s)].len();
        let mut seen = HashMap::with_capacity(apex);
        for e in 0..apex {
            if ts[ta[e]] != ti[tb[e]] || seen.insert((ta[e], tb[e]), e).is_some() {
                return Ok(false);
            }
        }
        let mut bucket = vec![0usize; csize];
        for &v in ti.iter() {
            bucket[v] += 1;
        }
        let fiber: usize = ts.iter().map(|&v| bucket[v]).sum();
        if fiber != apex {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Convenience wrapper: build the nerve if possible and test exactness;
/// construction failure counts as inexact.
pub fn groupoid_nerve_exact(g: &FinGroupoid) -> bool {
    match try_symmetric_nerve(g, 4) {
        Ok(n) => nerve_exactness_check(&n).unwrap_or(false),
        Err(_) => false,
    }
}

// ---------------------------------------------------------------------------
// Υ-data

/// The six-piece presentation (ΔG, G, B, δ, α, ω) from which a groupoid is
/// reconstructed: δ is division, α the source map, ω the unit section.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UpsilonData {
    pub b_size: usize,
    pub g_size: usize,
    /// the α-fibre product, as ordered pairs (y, x) with α(y) = α(x)
    pub pairs: Vec<(usize, usize)>,
    /// division table, indexed like `pairs`: (y, x) ↦ y x⁻¹
    pub delta: Vec<usize>,
    pub alpha: Vec<usize>,
    pub omega: Vec<usize>,
}

pub fn extract_upsilon(g: &FinGroupoid) -> UpsilonData {
    let mut pairs = Vec::new();
    let mut delta = Vec::new();
    for y in g.cat.arrow_ids() {
        for x in g.cat.arrow_ids() {
            if g.alpha(y) == g.alpha(x) {
                pairs.push((y, x));
                delta.push(g.compose(y, g.inv(x)).expect("targets agree after inversion"));
            }
        }
    }
    UpsilonData {
        b_size: g.base_size(),
        g_size: g.n_arrows(),
        pairs,
        delta,
        alpha: g.cat.arrow_ids().map(|x| g.alpha(x)).collect(),
        omega: (0..g.base_size()).map(|b| g.unit(b)).collect(),
    }
}

pub fn groupoid_from_upsilon(u: &UpsilonData) -> Result<FinGroupoid, String> {
    if u.b_size == 0 {
        return Err("empty base rejected".into());
    }
    if u.alpha.len() != u.g_size
        || u.omega.len() != u.b_size
        || u.delta.len() != u.pairs.len()
    {
        return Err("table length mismatch".into());
    }
    if u.alpha.iter().any(|&b| b >= u.b_size)
        || u.omega.iter().any(|&x| x >= u.g_size)
        || u.delta.iter().any(|&x| x >= u.g_size)
        || u.pairs.iter().any(|&(y, x)| y >= u.g_size || x >= u.g_size)
    {
        return Err("dangling index in Υ-data".into());
    }
    for b in 0..u.b_size {
        if u.alpha[u.omega[b]] != b {
            return Err(format!("α∘ω differs from the identity at object {b}"));
        }
    }
    // pairs must be exactly the α-fibre product, as a set
    let mut want: Vec<(usize, usize)> = Vec::new();
    for y in 0..u.g_size {
        for x in 0..u.g_size {
            if u.alpha[y] == u.alpha[x] {
                want.push((y, x));
            }
        }
    }
    let mut have = u.pairs.clone();
    have.sort_unstable();
    have.dedup();
    let mut want_sorted = want.clone();
    want_sorted.sort_unstable();
    if have != want_sorted {
        return Err("pair set is not the α-fibre product".into());
    }
    let div: HashMap<(usize, usize), usize> = u
        .pairs
        .iter()
        .copied()
        .zip(u.delta.iter().copied())
        .collect();
    // ς(x) = δ(ω(α(x)), x); β(x) = α(ς(x)); y∘x = δ(y, ς(x))
    let sigma: Vec<usize> = (0..u.g_size)
        .map(|x| div[&(u.omega[u.alpha[x]], x)])
        .collect();
    let beta: Vec<usize> = (0..u.g_size).map(|x| u.alpha[sigma[x]]).collect();
    let arrows: Vec<Arrow> = (0..u.g_size)
        .map(|x| Arrow { src: u.alpha[x], tgt: beta[x] })
        .collect();
    let identity = u.omega.clone();
    let alpha2 = u.alpha.clone();
    let beta2 = beta.clone();
    let sigma2 = sigma.clone();
    let div2 = div.clone();
    let cat = FinCategory::from_fn(
        "reconstructed",
        u.b_size,
        arrows,
        identity,
        move |y, x| {
            if beta2[x] != alpha2[y] {
                return None;
            }
            div2.get(&(y, sigma2[x])).copied()
        },
    );
    let g = FinGroupoid { cat, inverse: sigma };
    let rep = check_groupoid(&g);
    if rep.is_empty() {
        Ok(g)
    } else {
        Err(format!("reconstruction violates groupoid axioms: {rep}"))
    }
}

// ---------------------------------------------------------------------------
// canonical bow-tie

/// The principal groupoid on the arrow set of g, fibred by a map
/// base: arrows → B. Arrows are ordered pairs (x, y) in the same fibre.
fn arrow_pair_groupoid(g: &FinGroupoid, fibre: impl Fn(ArrId) -> ObjId, name: &str) -> FinGroupoid {
    let p: Vec<usize> = g.cat.arrow_ids().map(fibre).collect();
    let mut gq = principal_groupoid(&p).expect("fibre map is onto: units exist");
    gq.cat.name = name.to_string();
    gq
}

/// Groupoid of commuting squares over g: objects the arrows of g, an arrow
/// x → y is a pair (top: αx → αy, bottom: βx → βy) with y∘top = bottom∘x.
fn square_groupoid(g: &FinGroupoid) -> FinGroupoid {
    let mut arrows = Vec::new();
    let mut data = Vec::new(); // (x, y, top, bottom)
    let mut index = HashMap::new();
    for x in g.cat.arrow_ids() {
        for y in g.cat.arrow_ids() {
            for &top in g.cat.hom(g.alpha(x), g.alpha(y)) {
                let bottom = g
                    .compose(g.compose(y, top).unwrap(), g.inv(x))
                    .expect("square closes in a groupoid");
                index.insert((x, y, top), arrows.len());
                arrows.push(Arrow { src: x, tgt: y });
                data.push((x, y, top, bottom));
            }
        }
    }
    let identity = g
        .cat
        .arrow_ids()
        .map(|x| index[&(x, x, g.unit(g.alpha(x)))])
        .collect();
    let data2 = data.clone();
    let gc = g.cat.clone();
    let idx2 = index.clone();
    let cat = FinCategory::from_fn(
        format!("sq({})", g.cat.name),
        g.n_arrows(),
        arrows,
        identity,
        move |b, a| {
            let (x1, y1, t1, _) = data2[a];
            let (x2, y2, t2, _) = data2[b];
            if y1 != x2 {
                return None;
            }
            let top = gc.compose(t2, t1)?;
            let _ = (x1, y2);
            idx2.get(&(x1, y2, top)).copied()
        },
    );
    let ginv = g.inverse.clone();
    let gc2 = g.cat.clone();
    let inverse = (0..data.len())
        .map(|a| {
            let (x, y, top, _) = data[a];
            let inv_top = ginv[top];
            let _ = &gc2;
            index[&(y, x, inv_top)]
        })
        .collect();
    FinGroupoid { cat, inverse }
}

/// The canonical bow-tie of a groupoid: ΔG and ∇G (principal structures on
/// the arrow set over α and β), □G (commuting squares), and the six
/// connecting morphisms.
#[derive(Debug, Clone)]
pub struct CanonicalButterfly {
    pub g: Arc<FinGroupoid>,
    pub delta_g: Arc<FinGroupoid>,
    pub nabla_g: Arc<FinGroupoid>,
    pub square_g: Arc<FinGroupoid>,
    pub delta: GroupoidMorphism,
    pub delta_bar: GroupoidMorphism,
    pub iota_bot: GroupoidMorphism,
    pub iota_top: GroupoidMorphism,
    pub pi_bot: GroupoidMorphism,
    pub pi_top: GroupoidMorphism,
}

pub fn canonical_butterfly(g: &FinGroupoid) -> CanonicalButterfly {
    let garc = Arc::new(g.clone());
    let dg = Arc::new(arrow_pair_groupoid(g, |x| g.alpha(x), "delta-g"));
    let ng = Arc::new(arrow_pair_groupoid(g, |x| g.beta(x), "nabla-g"));
    let sq = Arc::new(square_groupoid(g));

    // index helpers for the three constructed groupoids
    let pair_arrow = |h: &FinGroupoid, x: ArrId, y: ArrId| -> ArrId {
        let hom = h.cat.hom(x, y);
        debug_assert_eq!(hom.len(), 1);
        hom[0]
    };
    let sq_arrow = |x: ArrId, y: ArrId, top: ArrId| -> ArrId {
        *sq.cat
            .hom(x, y)
            .iter()
            .find(|&&a| sq_top_of(&sq, g, a) == top)
            .expect("square arrow exists")
    };

    // δ: ΔG → G, objects x ↦ βx, pair (x → y) ↦ y x⁻¹
    let delta = GroupoidMorphism::new(
        dg.clone(),
        garc.clone(),
        g.cat.arrow_ids().map(|x| g.beta(x)).collect(),
        dg.cat
            .arrow_ids()
            .map(|a| {
                let (x, y) = (dg.alpha(a), dg.beta(a));
                g.compose(y, g.inv(x)).unwrap()
            })
            .collect(),
    );
    // δ̄: ∇G → G, objects x ↦ αx, pair (x → y) ↦ y⁻¹ x
    let delta_bar = GroupoidMorphism::new(
        ng.clone(),
        garc.clone(),
        g.cat.arrow_ids().map(|x| g.alpha(x)).collect(),
        ng.cat
            .arrow_ids()
            .map(|a| {
                let (x, y) = (ng.alpha(a), ng.beta(a));
                g.compose(g.inv(y), x).unwrap()
            })
            .collect(),
    );
    // ι_bot: ΔG → □G, identity on objects, (x → y) ↦ square with unit top
    let iota_bot = GroupoidMorphism::new(
        dg.clone(),
        sq.clone(),
        g.cat.arrow_ids().collect(),
        dg.cat
            .arrow_ids()
            .map(|a| {
                let (x, y) = (dg.alpha(a), dg.beta(a));
                sq_arrow(x, y, g.unit(g.alpha(x)))
            })
            .collect(),
    );
    // ι_top: ∇G → □G, identity on objects, (x → y) ↦ square with unit bottom
    let iota_top = GroupoidMorphism::new(
        ng.clone(),
        sq.clone(),
        g.cat.arrow_ids().collect(),
        ng.cat
            .arrow_ids()
            .map(|a| {
                let (x, y) = (ng.alpha(a), ng.beta(a));
                sq_arrow(x, y, g.compose(g.inv(y), x).unwrap())
            })
            .collect(),
    );
    // π_top: □G → G picks the top arrow (objects x ↦ αx)
    let pi_top = GroupoidMorphism::new(
        sq.clone(),
        garc.clone(),
        g.cat.arrow_ids().map(|x| g.alpha(x)).collect(),
        sq.cat.arrow_ids().map(|a| sq_top_of(&sq, g, a)).collect(),
    );
    // π_bot: □G → G picks the bottom arrow (objects x ↦ βx)
    let pi_bot = GroupoidMorphism::new(
        sq.clone(),
        garc.clone(),
        g.cat.arrow_ids().map(|x| g.beta(x)).collect(),
        sq.cat
            .arrow_ids()
            .map(|a| {
                let (x, y) = (sq.alpha(a), sq.beta(a));
                let top = sq_top_of(&sq, g, a);
                g.compose(g.compose(y, top).unwrap(), g.inv(x)).unwrap()
            })
            .collect(),
    );
    let _ = pair_arrow;
    CanonicalButterfly {
        g: garc,
        delta_g: dg,
        nabla_g: ng,
        square_g: sq,
        delta,
        delta_bar,
        iota_bot,
        iota_top,
        pi_bot,
        pi_top,
    }
}

/// Recover the top arrow of a square-groupoid arrow from the hom position.
fn sq_top_of(sq: &FinGroupoid, g: &FinGroupoid, a: ArrId) -> ArrId {
    // the square groupoid arrow a: x → y corresponds to a unique top arrow;
    // squares over (x, y) were enumerated in hom(αx, αy) order
    let (x, y) = (sq.alpha(a), sq.beta(a));
    let hom = sq.cat.hom(x, y);
    let pos = hom.iter().position(|&b| b == a).expect("arrow in its own hom-set");
    g.cat.hom(g.alpha(x), g.alpha(y))[pos]
}

/// Structural validation of the canonical bow-tie: functor axioms, the two
/// triangle commutations, and the two kernel equalities.
pub fn check_canonical_butterfly(cb: &CanonicalButterfly) -> ValidationReport {
    let mut rep = ValidationReport::new();
    for (name, m) in [
        ("delta", &cb.delta),
        ("delta-bar", &cb.delta_bar),
        ("iota-bot", &cb.iota_bot),
        ("iota-top", &cb.iota_top),
        ("pi-bot", &cb.pi_bot),
        ("pi-top", &cb.pi_top),
    ] {
        let r = m.check();
        if !r.is_empty() {
            rep.push("bow-tie-functor", format!("{name}: {r}"));
        }
    }
    if !rep.is_empty() {
        return rep;
    }
    let comp_ok = |outer: &GroupoidMorphism, inner: &GroupoidMorphism, want: &GroupoidMorphism| {
        inner.f1.iter().enumerate().all(|(a, &m)| outer.f1[m] == want.f1[a])
            && inner.f0.iter().enumerate().all(|(o, &m)| outer.f0[m] == want.f0[o])
    };
    if !comp_ok(&cb.pi_bot, &cb.iota_bot, &cb.delta) {
        rep.push("bow-tie-commute", "π_bot ∘ ι_bot differs from δ");
    }
    if !comp_ok(&cb.pi_top, &cb.iota_top, &cb.delta_bar) {
        rep.push("bow-tie-commute", "π_top ∘ ι_top differs from δ̄");
    }
    // kernel equalities: ι_bot image = arrows killed by π_top, and dually
    let g = &cb.g;
    let top_kernel: Vec<bool> = cb
        .pi_top
        .f1
        .iter()
        .map(|&img| g.cat.is_identity(img))
        .collect();
    let mut bot_image = vec![false; cb.square_g.n_arrows()];
    for &a in &cb.iota_bot.f1 {
        bot_image[a] = true;
    }
    if top_kernel != bot_image {
        rep.push("bow-tie-kernel", "ΔG is not the kernel of π_top");
    }
    let bot_kernel: Vec<bool> = cb
        .pi_bot
        .f1
        .iter()
        .map(|&img| g.cat.is_identity(img))
        .collect();
    let mut top_image = vec![false; cb.square_g.n_arrows()];
    for &a in &cb.iota_top.f1 {
        top_image[a] = true;
    }
    if bot_kernel != top_image {
        rep.push("bow-tie-kernel", "∇G is not the kernel of π_bot");
    }
    rep
}

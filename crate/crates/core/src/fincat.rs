//! Finite categories given by explicit composition tables, with brute-force
//! arrow classification and limit/colimit search certified by exhaustion.

use std::collections::{HashMap, HashSet};

use thiserror::Error;

use crate::report::ValidationReport;

pub type ObjId = usize;
pub type ArrId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub src: ObjId,
    pub tgt: ObjId,
}

#[derive(Debug, Error)]
pub enum FincatError {
    #[error("unknown arrow id {0}")]
    UnknownArrow(ArrId),
    #[error("unknown object id {0}")]
    UnknownObject(ObjId),
    #[error("malformed diagram: {0}")]
    MalformedDiagram(String),
    #[error("square does not commute")]
    NonCommutingSquare,
    #[error("domain/codomain mismatch: {0}")]
    Mismatch(String),
}

/// Composition stored as dense per-object blocks: for every middle object b,
/// a |out(b)| x |in(b)| table of composites. u32::MAX marks "not provided".
#[derive(Debug, Clone)]
struct CompTable {
    into: Vec<Vec<ArrId>>,
    outof: Vec<Vec<ArrId>>,
    pos_into: Vec<u32>,
    pos_outof: Vec<u32>,
    block: Vec<Vec<u32>>,
}

const MISSING: u32 = u32::MAX;

impl CompTable {
    fn build<F>(n_objects: usize, arrows: &[Arrow], mut comp: F) -> CompTable
    where
        F: FnMut(ArrId, ArrId) -> Option<ArrId>,
    {
        let mut into = vec![Vec::new(); n_objects];
        let mut outof = vec![Vec::new(); n_objects];
        let mut pos_into = vec![0u32; arrows.len()];
        let mut pos_outof = vec![0u32; arrows.len()];
        for (id, a) in arrows.iter().enumerate() {
            pos_into[id] = into[a.tgt].len() as u32;
            into[a.tgt].push(id);
            pos_outof[id] = outof[a.src].len() as u32;
            outof[a.src].push(id);
        }
        let mut block = Vec::with_capacity(n_objects);
        for b in 0..n_objects {
            let mut t = vec![MISSING; outof[b].len() * into[b].len()];
            for (gp, &g) in outof[b].iter().enumerate() {
                for (fp, &f) in into[b].iter().enumerate() {
                    if let Some(gf) = comp(g, f) {
                        t[gp * into[b].len() + fp] = gf as u32;
                    }
                }
            }
            block.push(t);
        }
        CompTable { into, outof, pos_into, pos_outof, block }
    }
}

#[derive(Debug, Clone)]
pub struct FinCategory {
    pub name: String,
    n_objects: usize,
    arrows: Vec<Arrow>,
    identity: Vec<ArrId>,
    comp: CompTable,
    /// hom[a * n + b]: arrows a -> b in id order.
    hom: Vec<Vec<ArrId>>,
}

impl PartialEq for FinCategory {
    fn eq(&self, other: &Self) -> bool {
        if self.n_objects != other.n_objects
            || self.arrows != other.arrows
            || self.identity != other.identity
        {
            return false;
        }
        for f in 0..self.arrows.len() {
            for &g in &self.comp.outof[self.arrows[f].tgt] {
                if self.compose(g, f) != other.compose(g, f) {
                    return false;
                }
            }
        }
        true
    }
}

impl FinCategory {
    /// Build from an explicit composite function; `comp(g, f)` is consulted
    /// exactly on composable pairs and may return None for partial tables
    /// (reported later by validate_category).
    pub fn from_fn<F>(
        name: impl Into<String>,
        n_objects: usize,
        arrows: Vec<Arrow>,
        identity: Vec<ArrId>,
        comp: F,
    ) -> FinCategory
    where
        F: FnMut(ArrId, ArrId) -> Option<ArrId>,
    {
        let table = CompTable::build(n_objects, &arrows, comp);
        let mut hom = vec![Vec::new(); n_objects * n_objects];
        for (id, a) in arrows.iter().enumerate() {
            hom[a.src * n_objects + a.tgt].push(id);
        }
        FinCategory { name: name.into(), n_objects, arrows, identity, comp: table, hom }
    }

    pub fn new(
        name: impl Into<String>,
        n_objects: usize,
        arrows: Vec<Arrow>,
        identity: Vec<ArrId>,
        comps: &[(ArrId, ArrId, ArrId)],
    ) -> FinCategory {
        let mut m = HashMap::new();
        for &(g, f, gf) in comps {
            m.insert((g, f), gf);
        }
        FinCategory::from_fn(name, n_objects, arrows, identity, |g, f| m.get(&(g, f)).copied())
    }

    pub fn n_objects(&self) -> usize {
        self.n_objects
    }

    pub fn n_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow(&self, a: ArrId) -> Arrow {
        self.arrows[a]
    }

    pub fn src(&self, a: ArrId) -> ObjId {
        self.arrows[a].src
    }

    pub fn tgt(&self, a: ArrId) -> ObjId {
        self.arrows[a].tgt
    }

    pub fn identity_of(&self, b: ObjId) -> ArrId {
        self.identity[b]
    }

    pub fn is_identity(&self, a: ArrId) -> bool {
        let Arrow { src, tgt } = self.arrows[a];
        src == tgt && self.identity[src] == a
    }

    /// g after f; None when not composable or the table has a hole.
    pub fn compose(&self, g: ArrId, f: ArrId) -> Option<ArrId> {
        let b = self.arrows[f].tgt;
        if self.arrows[g].src != b {
            return None;
        }
        let n_in = self.comp.into[b].len();
        let v = self.comp.block[b]
            [self.comp.pos_outof[g] as usize * n_in + self.comp.pos_into[f] as usize];
        if v == MISSING {
            None
        } else {
            Some(v as usize)
        }
    }

    pub fn arrows_from(&self, b: ObjId) -> &[ArrId] {
        &self.comp.outof[b]
    }

    pub fn arrows_into(&self, b: ObjId) -> &[ArrId] {
        &self.comp.into[b]
    }

    pub fn hom(&self, a: ObjId, b: ObjId) -> &[ArrId] {
        &self.hom[a * self.n_objects + b]
    }

    pub fn arrow_ids(&self) -> std::ops::Range<ArrId> {
        0..self.arrows.len()
    }

    pub fn object_ids(&self) -> std::ops::Range<ObjId> {
        0..self.n_objects
    }
}

pub fn validate_category(c: &FinCategory) -> ValidationReport {
    let mut rep = ValidationReport::new();
    if c.n_objects == 0 {
        rep.push("no-objects", "category has no objects");
    }
    if c.identity.len() != c.n_objects {
        rep.push(
            "identity-table",
            format!("{} identities for {} objects", c.identity.len(), c.n_objects),
        );
        return rep;
    }
    for b in 0..c.n_objects {
        let e = c.identity[b];
        if e >= c.arrows.len() {
            rep.push("identity-table", format!("identity of object {b} is unknown arrow {e}"));
            continue;
        }
        if c.src(e) != b || c.tgt(e) != b {
            rep.push("identity-typing", format!("identity arrow {e} of object {b} is not a loop at {b}"));
        }
    }
    for f in c.arrow_ids() {
        let Arrow { src, tgt } = c.arrows[f];
        if src >= c.n_objects || tgt >= c.n_objects {
            rep.push("arrow-typing", format!("arrow {f} has out-of-range endpoint"));
            continue;
        }
        if c.compose(f, c.identity[src]) != Some(f) {
            rep.push("identity-neutral", format!("f o id != f for arrow {f}"));
        }
        if c.compose(c.identity[tgt], f) != Some(f) {
            rep.push("identity-neutral", format!("id o f != f for arrow {f}"));
        }
    }
    // totality and typing of composites
    for f in c.arrow_ids() {
        let b = c.tgt(f);
        for &g in c.arrows_from(b) {
            match c.compose(g, f) {
                None => rep.push("comp-missing", format!("comp({g},{f}) undefined")),
                Some(gf) => {
                    if gf >= c.arrows.len() {
                        rep.push("comp-typing", format!("comp({g},{f}) = {gf} out of range"));
                    } else if c.src(gf) != c.src(f) || c.tgt(gf) != c.tgt(g) {
                        rep.push(
                            "comp-typing",
                            format!("comp({g},{f}) = {gf} has wrong endpoints"),
                        );
                    }
                }
            }
        }
    }
    if !rep.is_empty() {
        return rep;
    }
    // associativity over all composable triples
    'outer: for f in c.arrow_ids() {
        for &g in c.arrows_from(c.tgt(f)) {
            let gf = c.compose(g, f).unwrap();
            for &h in c.arrows_from(c.tgt(g)) {
                let hg = c.compose(h, g).unwrap();
                if c.compose(h, gf) != c.compose(hg, f) {
                    rep.push("assoc", format!("(h∘g)∘f != h∘(g∘f) for h={h}, g={g}, f={f}"));
                    if rep.violations.len() > 64 {
                        break 'outer;
                    }
                }
            }
        }
    }
    rep
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ArrowClass {
    pub mono: bool,
    pub epi: bool,
    pub split_mono: bool,
    pub split_epi: bool,
    pub iso: bool,
    pub inverse: Option<ArrId>,
}

pub fn classify_arrow(c: &FinCategory, f: ArrId) -> Result<ArrowClass, FincatError> {
    if f >= c.n_arrows() {
        return Err(FincatError::UnknownArrow(f));
    }
    let a = c.src(f);
    let b = c.tgt(f);
    let mut mono = true;
    'm: for x in c.object_ids() {
        let mut seen = HashMap::new();
        for &g in c.hom(x, a) {
            let fg = c.compose(f, g);
            if let Some(prev) = seen.insert(fg, g) {
                if prev != g {
                    mono = false;
                    break 'm;
                }
            }
        }
    }
    let mut epi = true;
    'e: for x in c.object_ids() {
        let mut seen = HashMap::new();
        for &g in c.hom(b, x) {
            let gf = c.compose(g, f);
            if let Some(prev) = seen.insert(gf, g) {
                if prev != g {
                    epi = false;
                    break 'e;
                }
            }
        }
    }
    let mut split_mono = false;
    let mut split_epi = false;
    let mut inverse = None;
    for &r in c.hom(b, a) {
        let rf = c.compose(r, f);
        let fr = c.compose(f, r);
        let retract = rf == Some(c.identity[a]);
        let section = fr == Some(c.identity[b]);
        split_mono |= retract;
        split_epi |= section;
        if retract && section && inverse.is_none() {
            inverse = Some(r);
        }
    }
    Ok(ArrowClass { mono, epi, split_mono, split_epi, iso: inverse.is_some(), inverse })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitKind {
    Product,
    Pullback,
    Pushout,
}

#[derive(Debug, Clone, Copy)]
pub enum DiagramSpec {
    /// Pair of objects (product).
    Pair(ObjId, ObjId),
    /// Cospan f: A -> C, g: B -> C (pullback).
    Cospan(ArrId, ArrId),
    /// Span f: C -> A, g: C -> B (pushout).
    Span(ArrId, ArrId),
}

#[derive(Debug, Clone)]
pub struct LimitWitness {
    pub kind: LimitKind,
    pub apex: ObjId,
    pub legs: [ArrId; 2],
    /// (cone leg to first foot, cone leg to second foot, unique mediator).
    pub cone_factorizations: Vec<(ArrId, ArrId, ArrId)>,
    /// For pullbacks: whether the canonical comparison into the product of the
    /// feet is a mono (None when that product does not exist in the category).
    pub comparison_mono: Option<bool>,
}

impl LimitWitness {
    /// The unique mediator for the cone (l1, l2), if that cone was recorded.
    pub fn mediator(&self, l1: ArrId, l2: ArrId) -> Option<ArrId> {
        self.cone_factorizations
            .iter()
            .find(|&&(a, b, _)| a == l1 && b == l2)
            .map(|&(_, _, m)| m)
    }
}

/// Check that m ↦ (compose(p1,m), compose(p2,m)) is injective from hom(z,apex).
fn legs_injective_at(c: &FinCategory, z: ObjId, apex: ObjId, p1: ArrId, p2: ArrId) -> bool {
    let mut seen = HashSet::new();
    for &m in c.hom(z, apex) {
        let key = (c.compose(p1, m), c.compose(p2, m));
        if !seen.insert(key) {
            return false;
        }
    }
    true
}

fn find_product(c: &FinCategory, a: ObjId, b: ObjId) -> Option<LimitWitness> {
    for apex in c.object_ids() {
        let counts_ok = c
            .object_ids()
            .all(|z| c.hom(z, apex).len() == c.hom(z, a).len() * c.hom(z, b).len());
        if !counts_ok {
            continue;
        }
        for &p1 in c.hom(apex, a) {
            for &p2 in c.hom(apex, b) {
                if c.object_ids().all(|z| legs_injective_at(c, z, apex, p1, p2)) {
                    let mut cones = Vec::new();
                    for z in c.object_ids() {
                        for &m in c.hom(z, apex) {
                            cones.push((
                                c.compose(p1, m).unwrap(),
                                c.compose(p2, m).unwrap(),
                                m,
                            ));
                        }
                    }
                    return Some(LimitWitness {
                        kind: LimitKind::Product,
                        apex,
                        legs: [p1, p2],
                        cone_factorizations: cones,
                        comparison_mono: None,
                    });
                }
            }
        }
    }
    None
}

fn find_pullback(c: &FinCategory, f: ArrId, g: ArrId) -> Result<Option<LimitWitness>, FincatError> {
    if c.tgt(f) != c.tgt(g) {
        return Err(FincatError::MalformedDiagram(format!(
            "cospan arrows {f},{g} have different targets"
        )));
    }
    let (fa, fb) = (c.src(f), c.src(g));
    // number of commuting cones from each object, independent of the apex
    let cnt: Vec<usize> = c
        .object_ids()
        .map(|z| {
            let mut n = 0;
            for &u in c.hom(z, fa) {
                for &v in c.hom(z, fb) {
                    if c.compose(f, u) == c.compose(g, v) {
                        n += 1;
                    }
                }
            }
            n
        })
        .collect();
    for apex in c.object_ids() {
        if c.object_ids().any(|z| c.hom(z, apex).len() != cnt[z]) {
            continue;
        }
        for &p1 in c.hom(apex, fa) {
            if c.compose(f, p1).is_none() {
                continue;
            }
            for &p2 in c.hom(apex, fb) {
                if c.compose(f, p1) != c.compose(g, p2) {
                    continue;
                }
                if c.object_ids().all(|z| legs_injective_at(c, z, apex, p1, p2)) {
                    let mut cones = Vec::new();
                    for z in c.object_ids() {
                        for &m in c.hom(z, apex) {
                            cones.push((
                                c.compose(p1, m).unwrap(),
                                c.compose(p2, m).unwrap(),
                                m,
                            ));
                        }
                    }
                    let comparison_mono = find_product(c, fa, fb).map(|w| {
                        let m = w
                            .mediator(p1, p2)
                            .expect("apex cone must appear among product cones");
                        classify_arrow(c, m).unwrap().mono
                    });
                    return Ok(Some(LimitWitness {
                        kind: LimitKind::Pullback,
                        apex,
                        legs: [p1, p2],
                        cone_factorizations: cones,
                        comparison_mono,
                    }));
                }
            }
        }
    }
    Ok(None)
}

fn find_pushout(c: &FinCategory, f: ArrId, g: ArrId) -> Result<Option<LimitWitness>, FincatError> {
    if c.src(f) != c.src(g) {
        return Err(FincatError::MalformedDiagram(format!(
            "span arrows {f},{g} have different sources"
        )));
    }
    let (fa, fb) = (c.tgt(f), c.tgt(g));
    let cnt: Vec<usize> = c
        .object_ids()
        .map(|z| {
            let mut n = 0;
            for &u in c.hom(fa, z) {
                for &v in c.hom(fb, z) {
                    if c.compose(u, f) == c.compose(v, g) {
                        n += 1;
                    }
                }
            }
            n
        })
        .collect();
    for apex in c.object_ids() {
        if c.object_ids().any(|z| c.hom(apex, z).len() != cnt[z]) {
            continue;
        }
        for &q1 in c.hom(fa, apex) {
            for &q2 in c.hom(fb, apex) {
                if c.compose(q1, f) != c.compose(q2, g) || c.compose(q1, f).is_none() {
                    continue;
                }
                let inj = c.object_ids().all(|z| {
                    let mut seen = HashSet::new();
                    c.hom(apex, z)
                        .iter()
                        .all(|&m| seen.insert((c.compose(m, q1), c.compose(m, q2))))
                });
                if inj {
                    let mut cones = Vec::new();
                    for z in c.object_ids() {
                        for &m in c.hom(apex, z) {
                            cones.push((
                                c.compose(m, q1).unwrap(),
                                c.compose(m, q2).unwrap(),
                                m,
                            ));
                        }
                    }
                    return Ok(Some(LimitWitness {
                        kind: LimitKind::Pushout,
                        apex,
                        legs: [q1, q2],
                        cone_factorizations: cones,
                        comparison_mono: None,
                    }));
                }
            }
        }
    }
    Ok(None)
}

pub fn find_limit(
    c: &FinCategory,
    kind: LimitKind,
    diagram: DiagramSpec,
) -> Result<Option<LimitWitness>, FincatError> {
    match (kind, diagram) {
        (LimitKind::Product, DiagramSpec::Pair(a, b)) => {
            if a >= c.n_objects || b >= c.n_objects {
                return Err(FincatError::UnknownObject(a.max(b)));
            }
            Ok(find_product(c, a, b))
        }
        (LimitKind::Pullback, DiagramSpec::Cospan(f, g)) => find_pullback(c, f, g),
        (LimitKind::Pushout, DiagramSpec::Span(f, g)) => find_pushout(c, f, g),
        _ => Err(FincatError::MalformedDiagram(
            "diagram shape does not match requested limit kind".into(),
        )),
    }
}

/// Commuting square
/// ```text
///        top
///   A' ------> A
///   left|       |right
///   v          v
///   B' ------> B
///       bottom
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Square {
    pub top: ArrId,
    pub left: ArrId,
    pub right: ArrId,
    pub bottom: ArrId,
}

impl Square {
    pub fn commutes(&self, c: &FinCategory) -> bool {
        let rt = c.compose(self.right, self.top);
        rt.is_some() && rt == c.compose(self.bottom, self.left)
    }
}

pub fn verify_square_universal(
    c: &FinCategory,
    sq: Square,
    kind: LimitKind,
) -> Result<bool, FincatError> {
    for a in [sq.top, sq.left, sq.right, sq.bottom] {
        if a >= c.n_arrows() {
            return Err(FincatError::UnknownArrow(a));
        }
    }
    if !sq.commutes(c) {
        return Err(FincatError::NonCommutingSquare);
    }
    match kind {
        LimitKind::Pullback => {
            let apex = c.src(sq.top);
            let (fa, fb) = (c.tgt(sq.left), c.tgt(sq.top));
            for z in c.object_ids() {
                let mut cnt = 0;
                for &u in c.hom(z, fa) {
                    for &v in c.hom(z, fb) {
                        if c.compose(sq.bottom, u) == c.compose(sq.right, v) {
                            cnt += 1;
                        }
                    }
                }
                if c.hom(z, apex).len() != cnt || !legs_injective_at(c, z, apex, sq.left, sq.top) {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        LimitKind::Pushout => {
            let apex = c.tgt(sq.bottom);
            let (fa, fb) = (c.src(sq.bottom), c.src(sq.right));
            for z in c.object_ids() {
                let mut cnt = 0;
                for &u in c.hom(fa, z) {
                    for &v in c.hom(fb, z) {
                        if c.compose(u, sq.left) == c.compose(v, sq.top) {
                            cnt += 1;
                        }
                    }
                }
                let mut seen = HashSet::new();
                let inj = c
                    .hom(apex, z)
                    .iter()
                    .all(|&m| seen.insert((c.compose(m, sq.bottom), c.compose(m, sq.right))));
                if c.hom(apex, z).len() != cnt || !inj {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        LimitKind::Product => Err(FincatError::MalformedDiagram(
            "verify_square_universal only handles pullback/pushout".into(),
        )),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinFunctor {
    pub obj_map: Vec<ObjId>,
    pub arr_map: Vec<ArrId>,
}

impl FinFunctor {
    pub fn identity(c: &FinCategory) -> FinFunctor {
        FinFunctor {
            obj_map: c.object_ids().collect(),
            arr_map: c.arrow_ids().collect(),
        }
    }
}

pub fn check_functor(src: &FinCategory, tgt: &FinCategory, f: &FinFunctor) -> ValidationReport {
    let mut rep = ValidationReport::new();
    if f.obj_map.len() != src.n_objects() || f.arr_map.len() != src.n_arrows() {
        rep.push("functor-shape", "object/arrow map length mismatch");
        return rep;
    }
    if f.obj_map.iter().any(|&o| o >= tgt.n_objects())
        || f.arr_map.iter().any(|&a| a >= tgt.n_arrows())
    {
        rep.push("functor-shape", "map hits unknown target id");
        return rep;
    }
    for a in src.arrow_ids() {
        let fa = f.arr_map[a];
        if tgt.src(fa) != f.obj_map[src.src(a)] || tgt.tgt(fa) != f.obj_map[src.tgt(a)] {
            rep.push("functor-typing", format!("arrow {a} image has wrong endpoints"));
        }
    }
    for b in src.object_ids() {
        if f.arr_map[src.identity_of(b)] != tgt.identity_of(f.obj_map[b]) {
            rep.push("functor-identity", format!("identity of object {b} not preserved"));
        }
    }
    for a in src.arrow_ids() {
        for &g in src.arrows_from(src.tgt(a)) {
            let ga = src.compose(g, a).unwrap();
            if tgt.compose(f.arr_map[g], f.arr_map[a]) != Some(f.arr_map[ga]) {
                rep.push("functor-comp", format!("composition not preserved on ({g},{a})"));
            }
        }
    }
    rep
}

pub fn compose_functors(g: &FinFunctor, f: &FinFunctor) -> Result<FinFunctor, FincatError> {
    if f.obj_map.iter().any(|&o| o >= g.obj_map.len())
        || f.arr_map.iter().any(|&a| a >= g.arr_map.len())
    {
        return Err(FincatError::Mismatch("functor composition out of range".into()));
    }
    Ok(FinFunctor {
        obj_map: f.obj_map.iter().map(|&o| g.obj_map[o]).collect(),
        arr_map: f.arr_map.iter().map(|&a| g.arr_map[a]).collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NatTransformation {
    /// Component arrow (in the target category) at each source object.
    pub components: Vec<ArrId>,
}

pub fn check_natural(
    src: &FinCategory,
    tgt: &FinCategory,
    f: &FinFunctor,
    g: &FinFunctor,
    t: &NatTransformation,
) -> ValidationReport {
    let mut rep = ValidationReport::new();
    if t.components.len() != src.n_objects() {
        rep.push("natural-shape", "one component required per source object");
        return rep;
    }
    for b in src.object_ids() {
        let c = t.components[b];
        if c >= tgt.n_arrows() || tgt.src(c) != f.obj_map[b] || tgt.tgt(c) != g.obj_map[b] {
            rep.push("natural-typing", format!("component at object {b} mistyped"));
        }
    }
    if !rep.is_empty() {
        return rep;
    }
    for a in src.arrow_ids() {
        let lhs = tgt.compose(t.components[src.tgt(a)], f.arr_map[a]);
        let rhs = tgt.compose(g.arr_map[a], t.components[src.src(a)]);
        if lhs.is_none() || lhs != rhs {
            rep.push("natural-square", format!("naturality fails at arrow {a}"));
        }
    }
    rep
}

/// Same object and arrow ids; src/tgt swapped, composition reversed.
pub fn opposite(c: &FinCategory) -> FinCategory {
    let arrows = c
        .arrows
        .iter()
        .map(|a| Arrow { src: a.tgt, tgt: a.src })
        .collect();
    FinCategory::from_fn(
        format!("{}^op", c.name),
        c.n_objects,
        arrows,
        c.identity.clone(),
        |g, f| c.compose(f, g),
    )
}

/// Pairs as objects/arrows; object (a,b) has id a*|D|+b, likewise arrows.
pub fn product_category(c: &FinCategory, d: &FinCategory) -> FinCategory {
    let (nd, md) = (d.n_objects(), d.n_arrows());
    let mut arrows = Vec::with_capacity(c.n_arrows() * md);
    for a in c.arrow_ids() {
        for b in d.arrow_ids() {
            arrows.push(Arrow {
                src: c.src(a) * nd + d.src(b),
                tgt: c.tgt(a) * nd + d.tgt(b),
            });
        }
    }
    let mut identity = Vec::with_capacity(c.n_objects() * nd);
    for x in c.object_ids() {
        for y in d.object_ids() {
            identity.push(c.identity_of(x) * md + d.identity_of(y));
        }
    }
    FinCategory::from_fn(
        format!("{}x{}", c.name, d.name),
        c.n_objects() * nd,
        arrows,
        identity,
        |g, f| {
            let (g1, g2) = (g / md, g % md);
            let (f1, f2) = (f / md, f % md);
            match (c.compose(g1, f1), d.compose(g2, f2)) {
                (Some(x), Some(y)) => Some(x * md + y),
                _ => None,
            }
        },
    )
}

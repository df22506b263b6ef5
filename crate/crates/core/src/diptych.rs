//! Distinguished mono/epi classes on a finite category, the six-axiom
//! checker, the ipb/spb/gpb square classifier, and square-category builders.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::fincat::{
    classify_arrow, find_limit, verify_square_universal, ArrId, DiagramSpec, FinCategory,
    LimitKind, LimitWitness, ObjId, Square,
};
use crate::report::ValidationReport;
use crate::setcat::SetSkeleton;

#[derive(Debug, Error)]
pub enum DiptychError {
    #[error("arrows do not form a commuting square")]
    NotASquare,
    #[error("catalog parameter out of bound: {0}")]
    OutOfBound(String),
    #[error("{0}")]
    Other(String),
}

#[derive(Debug, Clone)]
pub struct Prediptych {
    pub cat: FinCategory,
    /// Di membership by arrow id.
    pub good_monos: Vec<bool>,
    /// Ds membership by arrow id.
    pub good_epis: Vec<bool>,
}

impl Prediptych {
    pub fn in_di(&self, a: ArrId) -> bool {
        self.good_monos[a]
    }

    pub fn in_ds(&self, a: ArrId) -> bool {
        self.good_epis[a]
    }
}

#[derive(Debug, Clone)]
pub struct Diptych {
    pub pre: Prediptych,
    pub products: BTreeMap<(ObjId, ObjId), LimitWitness>,
}

impl Diptych {
    pub fn cat(&self) -> &FinCategory {
        &self.pre.cat
    }
}

/// Standard diptych on a Set skeleton: Di = injections, Ds = surjections,
/// products wherever an object of the right size exists.
pub fn set_standard_diptych(sk: &SetSkeleton) -> Diptych {
    let c = &sk.cat;
    let good_monos = c.arrow_ids().map(|a| sk.is_injective(a)).collect();
    let good_epis = c.arrow_ids().map(|a| sk.is_surjective(a)).collect();
    let pre = Prediptych { cat: c.clone(), good_monos, good_epis };
    let mut products = BTreeMap::new();
    for a in c.object_ids() {
        for b in c.object_ids() {
            if sk.object_of_size(sk.sizes[a] * sk.sizes[b]).is_some() {
                if let Ok(Some(w)) = find_limit(c, LimitKind::Product, DiagramSpec::Pair(a, b)) {
                    products.insert((a, b), w);
                }
            }
        }
    }
    Diptych { pre, products }
}

/// Same Di, but Ds restricted to split surjections (coincides with all
/// surjections over finite sets; kept as its own constructor for the record).
pub fn set_split_diptych(sk: &SetSkeleton) -> Diptych {
    let mut d = set_standard_diptych(sk);
    for a in d.pre.cat.arrow_ids() {
        if d.pre.good_epis[a] {
            d.pre.good_epis[a] = classify_arrow(&d.pre.cat, a).unwrap().split_epi;
        }
    }
    d
}

pub fn check_prediptych(p: &Prediptych) -> ValidationReport {
    let mut rep = ValidationReport::new();
    let c = &p.cat;
    if p.good_monos.len() != c.n_arrows() || p.good_epis.len() != c.n_arrows() {
        rep.push("class-shape", "Di/Ds flag vectors must cover all arrows");
        return rep;
    }
    for b in c.object_ids() {
        let e = c.identity_of(b);
        if !p.good_monos[e] {
            rep.push("di-identity", format!("identity of object {b} missing from Di"));
        }
        if !p.good_epis[e] {
            rep.push("ds-identity", format!("identity of object {b} missing from Ds"));
        }
    }
    for f in c.arrow_ids() {
        for &g in c.arrows_from(c.tgt(f)) {
            let gf = match c.compose(g, f) {
                Some(x) => x,
                None => continue,
            };
            if p.good_monos[f] && p.good_monos[g] && !p.good_monos[gf] {
                rep.push("di-closure", format!("Di not closed: {g}∘{f} = {gf}"));
            }
            if p.good_epis[f] && p.good_epis[g] && !p.good_epis[gf] {
                rep.push("ds-closure", format!("Ds not closed: {g}∘{f} = {gf}"));
            }
        }
    }
    for f in c.arrow_ids() {
        let iso = classify_arrow(c, f).unwrap().iso;
        if p.good_monos[f] && p.good_epis[f] && !iso {
            rep.push(
                "axiom-i",
                format!("arrow {f} lies in Di∩Ds but is not an isomorphism"),
            );
        }
        if iso && !(p.good_monos[f] && p.good_epis[f]) {
            rep.push("axiom-i", format!("isomorphism {f} missing from Di∩Ds"));
        }
    }
    rep
}

/// All commuting squares, grouped as pairs of length-2 paths with equal
/// composite: ((left, bottom), (top, right)).
fn commuting_squares(c: &FinCategory) -> Vec<Square> {
    let mut groups: HashMap<ArrId, Vec<(ArrId, ArrId)>> = HashMap::new();
    for f in c.arrow_ids() {
        for &g in c.arrows_from(c.tgt(f)) {
            if let Some(gf) = c.compose(g, f) {
                groups.entry(gf).or_default().push((f, g));
            }
        }
    }
    let mut out = Vec::new();
    for paths in groups.values() {
        for &(left, bottom) in paths {
            for &(top, right) in paths {
                out.push(Square { top, left, right, bottom });
            }
        }
    }
    out
}

pub fn check_diptych(d: &Diptych) -> ValidationReport {
    let mut rep = check_prediptych(&d.pre);
    let c = d.cat();
    let p = &d.pre;

    // supplied product witnesses must re-verify (idempotent certification)
    for (&(a, b), w) in &d.products {
        let ok = w.kind == LimitKind::Product
            && c.src(w.legs[0]) == w.apex
            && c.tgt(w.legs[0]) == a
            && c.tgt(w.legs[1]) == b
            && c.object_ids().all(|z| {
                let mut seen = std::collections::HashSet::new();
                c.hom(z, w.apex).len() == c.hom(z, a).len() * c.hom(z, b).len()
                    && c
                        .hom(z, w.apex)
                        .iter()
                        .all(|&m| seen.insert((c.compose(w.legs[0], m), c.compose(w.legs[1], m))))
            });
        if !ok {
            rep.push("product-witness", format!("stored product of ({a},{b}) fails recheck"));
        }
    }

    // (ii) Di and Ds stable under the supplied products
    for (&(a, b), w) in &d.products {
        for (&(a2, b2), w2) in &d.products {
            for &i1 in c.hom(a, a2) {
                for &i2 in c.hom(b, b2) {
                    let l1 = match c.compose(i1, w.legs[0]) {
                        Some(x) => x,
                        None => continue,
                    };
                    let l2 = match c.compose(i2, w.legs[1]) {
                        Some(x) => x,
                        None => continue,
                    };
                    let m = match w2.mediator(l1, l2) {
                        Some(m) => m,
                        None => {
                            rep.push(
                                "product-factorization",
                                format!("no mediator for cone into product of ({a2},{b2})"),
                            );
                            continue;
                        }
                    };
                    if p.in_di(i1) && p.in_di(i2) && !p.in_di(m) {
                        rep.push(
                            "axiom-ii",
                            format!("Di not stable under product: {i1}×{i2} = {m}"),
                        );
                    }
                    if p.in_ds(i1) && p.in_ds(i2) && !p.in_ds(m) {
                        rep.push(
                            "axiom-ii",
                            format!("Ds not stable under product: {i1}×{i2} = {m}"),
                        );
                    }
                }
            }
        }
    }

    // (iii) good monos are monos, good epis are epis
    for f in c.arrow_ids() {
        let cls = classify_arrow(c, f).unwrap();
        if p.in_di(f) && !cls.mono {
            rep.push("axiom-iii", format!("good mono {f} is not a mono"));
        }
        if p.in_ds(f) && !cls.epi {
            rep.push("axiom-iii", format!("good epi {f} is not an epi"));
        }
    }

    // (iv)(a) strong alpha-stability, (iv)(b) weak beta-stability
    for f in c.arrow_ids() {
        for &g in c.arrows_from(c.tgt(f)) {
            let h = match c.compose(g, f) {
                Some(x) => x,
                None => continue,
            };
            if p.in_di(h) && !p.in_di(f) {
                rep.push("axiom-iv-a", format!("{g}∘{f} = {h} ∈ Di but {f} ∉ Di"));
            }
            if p.in_ds(h) && p.in_ds(f) && !p.in_ds(g) {
                rep.push("axiom-iv-b", format!("{g}∘{f} = {h} ∈ Ds, {f} ∈ Ds but {g} ∉ Ds"));
            }
        }
    }

    // (v)(a) parallel transfer: every (s ∈ Ds, i ∈ Di) cospan has a pullback
    // with the transferred arrows good again
    for s in c.arrow_ids() {
        if !p.in_ds(s) {
            continue;
        }
        for i in c.arrow_ids() {
            if !p.in_di(i) || c.tgt(i) != c.tgt(s) {
                continue;
            }
            match find_limit(c, LimitKind::Pullback, DiagramSpec::Cospan(s, i)) {
                Ok(Some(w)) => {
                    // legs[0]: apex -> src(s) is the pulled-back i,
                    // legs[1]: apex -> src(i) is the pulled-back s
                    if !p.in_di(w.legs[0]) || !p.in_ds(w.legs[1]) {
                        rep.push(
                            "axiom-v-a",
                            format!("pullback of cospan (s={s}, i={i}) is not good"),
                        );
                    }
                }
                _ => rep.push(
                    "axiom-v-a",
                    format!("cospan (s={s}, i={i}) has no pullback"),
                ),
            }
        }
    }

    let squares = commuting_squares(c);

    // (v)(b) descent: verticals in Ds, top in Di, pullback ⟹ bottom in Di
    for sq in &squares {
        if p.in_ds(sq.left)
            && p.in_ds(sq.right)
            && p.in_di(sq.top)
            && !p.in_di(sq.bottom)
            && verify_square_universal(c, *sq, LimitKind::Pullback).unwrap_or(false)
        {
            rep.push(
                "axiom-v-b",
                format!(
                    "descent fails: pullback square (top {}, left {}, right {}, bottom {})",
                    sq.top, sq.left, sq.right, sq.bottom
                ),
            );
        }
    }

    // (vi) pullback squares with all four arrows in Ds are pushouts
    for sq in &squares {
        if p.in_ds(sq.top)
            && p.in_ds(sq.bottom)
            && p.in_ds(sq.left)
            && p.in_ds(sq.right)
            && verify_square_universal(c, *sq, LimitKind::Pullback).unwrap_or(false)
            && !verify_square_universal(c, *sq, LimitKind::Pushout).unwrap_or(false)
        {
            rep.push(
                "axiom-vi",
                format!(
                    "s-exact square is not a pushout: (top {}, left {}, right {}, bottom {})",
                    sq.top, sq.left, sq.right, sq.bottom
                ),
            );
        }
    }

    rep
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SquareClassification {
    pub commutes: bool,
    pub ipb: bool,
    pub spb: bool,
    pub gpb: bool,
    pub s_exact: bool,
    pub hi: bool,
    pub hs: bool,
    pub vi: bool,
    pub vs: bool,
}

pub fn classify_square(d: &Diptych, sq: Square) -> Result<SquareClassification, DiptychError> {
    let c = d.cat();
    let p = &d.pre;
    for a in [sq.top, sq.left, sq.right, sq.bottom] {
        if a >= c.n_arrows() {
            return Err(DiptychError::NotASquare);
        }
    }
    let shape_ok = c.src(sq.top) == c.src(sq.left)
        && c.tgt(sq.top) == c.src(sq.right)
        && c.tgt(sq.left) == c.src(sq.bottom)
        && c.tgt(sq.right) == c.tgt(sq.bottom);
    if !shape_ok {
        return Err(DiptychError::NotASquare);
    }
    let mut out = SquareClassification {
        commutes: sq.commutes(c),
        hi: p.in_di(sq.top) && p.in_di(sq.bottom),
        hs: p.in_ds(sq.top) && p.in_ds(sq.bottom),
        vi: p.in_di(sq.left) && p.in_di(sq.right),
        vs: p.in_ds(sq.left) && p.in_ds(sq.right),
        ..Default::default()
    };
    if !out.commutes {
        return Ok(out);
    }
    let bp = c.tgt(sq.left); // B'
    let a_obj = c.tgt(sq.top); // A

    // ipb: the comparison (left, top): A' -> B' x A is a good mono
    if let Some(w) = d.products.get(&(bp, a_obj)) {
        if let Some(m) = w.mediator(sq.left, sq.top) {
            out.ipb = p.in_di(m);
        }
    }

    let pb = verify_square_universal(c, sq, LimitKind::Pullback)
        .map_err(|_| DiptychError::NotASquare)?;
    out.gpb = out.ipb && pb;

    // spb: the cospan (bottom, right) has a good pullback and the canonical
    // factorization through it is a good epi
    if let Ok(Some(w)) = find_limit(c, LimitKind::Pullback, DiagramSpec::Cospan(sq.bottom, sq.right))
    {
        let good = d
            .products
            .get(&(bp, a_obj))
            .and_then(|pw| pw.mediator(w.legs[0], w.legs[1]))
            .map(|m| p.in_di(m))
            .unwrap_or(false);
        if good {
            if let Some(fact) = w.mediator(sq.left, sq.top) {
                out.spb = p.in_ds(fact);
            }
        }
    }

    if out.gpb && out.hs && out.vs {
        out.s_exact = verify_square_universal(c, sq, LimitKind::Pushout).unwrap_or(false);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SquareFlavor {
    /// hi / hs squares
    Naive,
    /// hi / hs∧spb
    Main,
    /// hi / hs∧gpb
    MainGpb,
    /// gpb on both sides
    GpbBoth,
    /// subcategory of spb squares, hi / hs inside it
    CanSpb,
    /// subcategory of gpb squares
    CanGpb,
}

impl SquareFlavor {
    pub fn parse(s: &str) -> Option<SquareFlavor> {
        Some(match s {
            "naive" => SquareFlavor::Naive,
            "main" => SquareFlavor::Main,
            "maiN" => SquareFlavor::MainGpb,
            "MaiN" => SquareFlavor::GpbBoth,
            "can-spb" => SquareFlavor::CanSpb,
            "can-gpb" => SquareFlavor::CanGpb,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone)]
pub struct SquarePrediptych {
    pub pre: Prediptych,
    /// componentwise products of vertical arrows, where d supplied both feet
    pub products: BTreeMap<(ObjId, ObjId), LimitWitness>,
    /// square-arrow id -> (left vertical, right vertical, top, bottom) in d's category
    pub squares: Vec<(ArrId, ArrId, ArrId, ArrId)>,
}

/// The square category of d (objects: arrows of d; arrows: commuting squares,
/// composed horizontally), with good classes per flavor.
pub fn build_square_diptych(
    d: &Diptych,
    flavor: SquareFlavor,
) -> Result<SquarePrediptych, DiptychError> {
    let c = d.cat();
    // classification of each commuting square (f, g, t, b): f left, g right
    let keep = |cls: &SquareClassification| match flavor {
        SquareFlavor::Naive | SquareFlavor::Main | SquareFlavor::MainGpb
        | SquareFlavor::GpbBoth => true,
        SquareFlavor::CanSpb => cls.spb,
        SquareFlavor::CanGpb => cls.gpb,
    };
    let mut squares = Vec::new();
    let mut cls_of = Vec::new();
    for f in c.arrow_ids() {
        for g in c.arrow_ids() {
            for &t in c.hom(c.src(f), c.src(g)) {
                for &b in c.hom(c.tgt(f), c.tgt(g)) {
                    let gt = c.compose(g, t);
                    if gt.is_none() || gt != c.compose(b, f) {
                        continue;
                    }
                    let cls = classify_square(d, Square { top: t, left: f, right: g, bottom: b })?;
                    let is_identity_square =
                        f == g && t == c.identity_of(c.src(f)) && b == c.identity_of(c.tgt(f));
                    if is_identity_square || keep(&cls) {
                        squares.push((f, g, t, b));
                        cls_of.push(cls);
                    }
                }
            }
        }
    }
    let mut index = HashMap::new();
    for (i, &k) in squares.iter().enumerate() {
        index.insert(k, i);
    }
    let arrows: Vec<crate::fincat::Arrow> = squares
        .iter()
        .map(|&(f, g, _, _)| crate::fincat::Arrow { src: f, tgt: g })
        .collect();
    let identity: Vec<ArrId> = c
        .arrow_ids()
        .map(|f| index[&(f, f, c.identity_of(c.src(f)), c.identity_of(c.tgt(f)))])
        .collect();
    let sq2 = squares.clone();
    let cat = FinCategory::from_fn(
        format!("Sq({})", c.name),
        c.n_arrows(),
        arrows,
        identity,
        |s2, s1| {
            let (f1, _, t1, b1) = sq2[s1];
            let (_, g2, t2, b2) = sq2[s2];
            let t = c.compose(t2, t1)?;
            let b = c.compose(b2, b1)?;
            index.get(&(f1, g2, t, b)).copied()
        },
    );
    let mut good_monos = Vec::with_capacity(squares.len());
    let mut good_epis = Vec::with_capacity(squares.len());
    for cls in &cls_of {
        let (di, ds) = match flavor {
            SquareFlavor::Naive | SquareFlavor::CanSpb | SquareFlavor::CanGpb => (cls.hi, cls.hs),
            SquareFlavor::Main => (cls.hi, cls.hs && cls.spb),
            SquareFlavor::MainGpb => (cls.hi, cls.hs && cls.gpb),
            SquareFlavor::GpbBoth => (cls.hi && cls.gpb, cls.hs && cls.gpb),
        };
        good_monos.push(di);
        good_epis.push(ds);
    }
    let pre = Prediptych { cat, good_monos, good_epis };

    // componentwise products of objects (= arrows of d)
    let mut products = BTreeMap::new();
    for (fi, f) in c.arrow_ids().enumerate() {
        for g in c.arrow_ids() {
            let ws = d.products.get(&(c.src(f), c.src(g)));
            let wt = d.products.get(&(c.tgt(f), c.tgt(g)));
            let (ws, wt) = match (ws, wt) {
                (Some(a), Some(b)) => (a, b),
                _ => continue,
            };
            // product arrow f x g: mediator of (f∘p1, g∘p2) into wt
            let l1 = match c.compose(f, ws.legs[0]) {
                Some(x) => x,
                None => continue,
            };
            let l2 = match c.compose(g, ws.legs[1]) {
                Some(x) => x,
                None => continue,
            };
            let fg = match wt.mediator(l1, l2) {
                Some(m) => m,
                None => continue,
            };
            let leg1 = pre_arrow_id(&pre.cat, &squares, (fg, f, ws.legs[0], wt.legs[0]));
            let leg2 = pre_arrow_id(&pre.cat, &squares, (fg, g, ws.legs[1], wt.legs[1]));
            let (leg1, leg2) = match (leg1, leg2) {
                (Some(a), Some(b)) => (a, b),
                _ => continue,
            };
            if let Some(w) = verify_product_candidate(&pre.cat, fg, leg1, leg2) {
                products.insert((f, g), w);
            }
            let _ = fi;
        }
    }
    Ok(SquarePrediptych { pre, products, squares })
}

fn pre_arrow_id(
    sq_cat: &FinCategory,
    squares: &[(ArrId, ArrId, ArrId, ArrId)],
    key: (ArrId, ArrId, ArrId, ArrId),
) -> Option<ArrId> {
    let _ = sq_cat;
    squares.iter().position(|&k| k == key)
}

/// Verify a proposed product apex/legs by exhaustion; returns the witness.
pub fn verify_product_candidate(
    c: &FinCategory,
    apex: ObjId,
    p1: ArrId,
    p2: ArrId,
) -> Option<LimitWitness> {
    let (a, b) = (c.tgt(p1), c.tgt(p2));
    for z in c.object_ids() {
        if c.hom(z, apex).len() != c.hom(z, a).len() * c.hom(z, b).len() {
            return None;
        }
        let mut seen = std::collections::HashSet::new();
        for &m in c.hom(z, apex) {
            if !seen.insert((c.compose(p1, m), c.compose(p2, m))) {
                return None;
            }
        }
    }
    let mut cones = Vec::new();
    for z in c.object_ids() {
        for &m in c.hom(z, apex) {
            cones.push((c.compose(p1, m).unwrap(), c.compose(p2, m).unwrap(), m));
        }
    }
    Some(LimitWitness {
        kind: LimitKind::Product,
        apex,
        legs: [p1, p2],
        cone_factorizations: cones,
        comparison_mono: None,
    })
}

//! Catalog of small prediptychs (ordinals, the three-object Υ, truncations of
//! the dual of finite cardinals, the butterfly type ⋈) and the canonical
//! endofunctors of the dual-cardinal category with their transformations.

use std::collections::HashMap;

use crate::diptych::{DiptychError, Prediptych};
use crate::fincat::{Arrow, FinCategory, FinFunctor, NatTransformation, ArrId, ObjId};

/// Hard cap on dual-cardinal truncations; composition tables grow as the
/// fourth power of the bound.
pub const FINV_BOUND: usize = 4;

/// Truncation of the dual of the category of finite nonempty cardinals.
/// Object p-1 stands for the cardinal p; an arrow from p-1 to q-1 stores the
/// underlying map q -> p of finite sets (contravariant realization).
#[derive(Debug, Clone)]
pub struct DualCardTrunc {
    pub pre: Prediptych,
    /// largest cardinal present
    pub n: usize,
    duals: Vec<Vec<usize>>,
    ends: Vec<(ObjId, ObjId)>,
    index: HashMap<(ObjId, ObjId, Vec<usize>), ArrId>,
}

impl DualCardTrunc {
    fn build(n: usize, monotone_only: bool, name: &str) -> DualCardTrunc {
        let mut arrows = Vec::new();
        let mut duals: Vec<Vec<usize>> = Vec::new();
        for s in 0..n {
            for t in 0..n {
                let (p, q) = (s + 1, t + 1);
                // all maps q -> p, rank-ordered
                for rank in 0..p.pow(q as u32) {
                    let mut table = Vec::with_capacity(q);
                    let mut r = rank;
                    for _ in 0..q {
                        table.push(r % p);
                        r /= p;
                    }
                    if monotone_only && table.windows(2).any(|w| w[0] > w[1]) {
                        continue;
                    }
                    arrows.push(Arrow { src: s, tgt: t });
                    duals.push(table);
                }
            }
        }
        let mut index = HashMap::new();
        for (id, a) in arrows.iter().enumerate() {
            index.insert((a.src, a.tgt, duals[id].clone()), id);
        }
        let identity: Vec<ArrId> = (0..n)
            .map(|s| index[&(s, s, (0..=s).collect::<Vec<_>>())])
            .collect();
        let ends: Vec<(ObjId, ObjId)> = arrows.iter().map(|a| (a.src, a.tgt)).collect();
        let (d2, e2, i2) = (duals.clone(), ends.clone(), index.clone());
        let cat = FinCategory::from_fn(name, n, arrows, identity, move |g, f| {
            // dual composition: the underlying maps compose the other way
            let table: Vec<usize> = d2[g].iter().map(|&x| d2[f][x]).collect();
            i2.get(&(e2[f].0, e2[g].1, table)).copied()
        });
        let good_monos = (0..duals.len())
            .map(|a| {
                let (p, t) = (ends[a].0 + 1, &duals[a]);
                let mut hit = vec![false; p];
                for &v in t {
                    hit[v] = true;
                }
                hit.iter().all(|&b| b) // dual of a surjection
            })
            .collect();
        let good_epis = (0..duals.len())
            .map(|a| {
                let t = &duals[a];
                let mut seen = std::collections::HashSet::new();
                t.iter().all(|&v| seen.insert(v)) // dual of an injection
            })
            .collect();
        DualCardTrunc {
            pre: Prediptych { cat, good_monos, good_epis },
            n,
            duals,
            ends,
            index,
        }
    }

    pub fn object_of_card(&self, p: usize) -> ObjId {
        assert!((1..=self.n).contains(&p));
        p - 1
    }

    pub fn card_of(&self, o: ObjId) -> usize {
        o + 1
    }

    /// Arrow from cardinal p to cardinal q realized by the map table: q -> p.
    pub fn arrow_of_dual(&self, p: usize, q: usize, table: &[usize]) -> Option<ArrId> {
        self.index.get(&(p - 1, q - 1, table.to_vec())).copied()
    }

    /// (underlying map, source cardinal, target cardinal)
    pub fn dual_of(&self, a: ArrId) -> (&[usize], usize, usize) {
        (&self.duals[a], self.ends[a].0 + 1, self.ends[a].1 + 1)
    }
}

/// finv_trunc(n): all maps, dualized. Good monos are duals of surjections,
/// good epis duals of injections.
pub fn finv_trunc(n: usize) -> Result<DualCardTrunc, DiptychError> {
    if n == 0 || n > FINV_BOUND {
        return Err(DiptychError::OutOfBound(format!("finv_trunc({n})")));
    }
    Ok(DualCardTrunc::build(n, false, &format!("Finv<={n}")))
}

/// nabla_trunc(n): monotone maps only, dualized.
pub fn nabla_trunc(n: usize) -> Result<DualCardTrunc, DiptychError> {
    if n == 0 || n > FINV_BOUND + 2 {
        return Err(DiptychError::OutOfBound(format!("nabla_trunc({n})")));
    }
    Ok(DualCardTrunc::build(n, true, &format!("Nabla<={n}")))
}

/// Inverse-image map on power sets induced by an arrow of a dual-cardinal
/// truncation; subsets are bitmasks. P(p) -> P(q) for an arrow p-1 -> q-1.
pub fn powerset_representation(t: &DualCardTrunc, a: ArrId) -> Result<Vec<u32>, DiptychError> {
    if a >= t.pre.cat.n_arrows() {
        return Err(DiptychError::Other(format!("arrow {a} not in {}", t.pre.cat.name)));
    }
    let (table, p, _q) = t.dual_of(a);
    let mut out = Vec::with_capacity(1 << p);
    for mask in 0..(1u32 << p) {
        let mut img = 0u32;
        for (x, &fx) in table.iter().enumerate() {
            if mask & (1 << fx) != 0 {
                img |= 1 << x;
            }
        }
        out.push(img);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrdinalVariant {
    /// Di = Ds = identities
    Trivial,
    /// Di = all arrows
    I,
    /// Ds = all arrows
    S,
}

/// The total order 0 < 1 < ... < n-1 as a prediptych.
pub fn ordinal(n: usize, variant: OrdinalVariant) -> Result<Prediptych, DiptychError> {
    if n == 0 || n > 16 {
        return Err(DiptychError::OutOfBound(format!("ordinal({n})")));
    }
    let mut arrows = Vec::new();
    let mut index = HashMap::new();
    for i in 0..n {
        for j in i..n {
            index.insert((i, j), arrows.len());
            arrows.push(Arrow { src: i, tgt: j });
        }
    }
    let identity: Vec<ArrId> = (0..n).map(|i| index[&(i, i)]).collect();
    let ends: Vec<(usize, usize)> = arrows.iter().map(|a| (a.src, a.tgt)).collect();
    let idx2 = index.clone();
    let cat = FinCategory::from_fn(format!("ord{n}"), n, arrows, identity, move |g, f| {
        idx2.get(&(ends[f].0, ends[g].1)).copied()
    });
    let m = cat.n_arrows();
    let ids: Vec<bool> = (0..m).map(|a| cat.is_identity(a)).collect();
    let all = vec![true; m];
    let (good_monos, good_epis) = match variant {
        OrdinalVariant::Trivial => (ids.clone(), ids),
        OrdinalVariant::I => (all, ids),
        OrdinalVariant::S => (ids, all),
    };
    Ok(Prediptych { cat, good_monos, good_epis })
}

/// Build a small category from concrete function tables between finite sets.
/// Arrows compose as functions; every composite must reappear in the list.
fn category_of_tables(
    name: &str,
    sizes: &[usize],
    specs: &[(ObjId, ObjId, Vec<usize>)],
) -> FinCategory {
    let arrows: Vec<Arrow> = specs.iter().map(|&(s, t, _)| Arrow { src: s, tgt: t }).collect();
    let mut index = HashMap::new();
    for (id, spec) in specs.iter().enumerate() {
        index.insert(spec.clone(), id);
    }
    let identity: Vec<ArrId> = (0..sizes.len())
        .map(|o| index[&(o, o, (0..sizes[o]).collect::<Vec<_>>())])
        .collect();
    let specs2 = specs.to_vec();
    FinCategory::from_fn(name, sizes.len(), arrows, identity, move |g, f| {
        let (fs, _, ft) = &specs2[f];
        let (_, gt, gt_tab) = &specs2[g];
        let table: Vec<usize> = ft.iter().map(|&x| gt_tab[x]).collect();
        index.get(&(*fs, *gt, table)).copied()
    })
}

/// The three-object prediptych Υ: objects named 2, 1, 0 with generators
/// δ: 2 ↠ 1, α: 1 ↠ 0, ω: 0 ↣ 1 and the relation αω = id.
pub fn upsilon() -> Prediptych {
    // faithful model: object "2" ↦ {0,1,2}, "1" ↦ {0,1}, "0" ↦ {0}
    let sizes = [3, 2, 1];
    let specs: Vec<(ObjId, ObjId, Vec<usize>)> = vec![
        (0, 0, vec![0, 1, 2]),  // 0: id "2"
        (1, 1, vec![0, 1]),     // 1: id "1"
        (2, 2, vec![0]),        // 2: id "0"
        (0, 1, vec![0, 0, 1]),  // 3: delta
        (1, 2, vec![0, 0]),     // 4: alpha
        (2, 1, vec![0]),        // 5: omega
        (0, 2, vec![0, 0, 0]),  // 6: alpha∘delta
        (1, 1, vec![0, 0]),     // 7: omega∘alpha
        (0, 1, vec![0, 0, 0]),  // 8: omega∘alpha∘delta
    ];
    let cat = category_of_tables("upsilon", &sizes, &specs);
    let mut good_monos = vec![false; 9];
    let mut good_epis = vec![false; 9];
    for id in [0, 1, 2] {
        good_monos[id] = true;
        good_epis[id] = true;
    }
    good_monos[5] = true;
    for id in [3, 4, 6] {
        good_epis[id] = true;
    }
    Prediptych { cat, good_monos, good_epis }
}

/// The bow-tie prediptych ⋈: five objects, two good monos pointing inward,
/// four good epis pointing outward.
pub fn butterfly_type() -> Prediptych {
    // objects: 0 = "3", 1 = "3bar", 2 = "4", 3 = "2", 4 = "2bar".
    // arrows are duals: (src, tgt, map card(tgt) -> card(src)).
    let cards = [3usize, 3, 4, 2, 2];
    let specs: Vec<(ObjId, ObjId, Vec<usize>)> = vec![
        (0, 0, vec![0, 1, 2]),    // 0: id 3
        (1, 1, vec![0, 1, 2]),    // 1: id 3bar
        (2, 2, vec![0, 1, 2, 3]), // 2: id 4
        (3, 3, vec![0, 1]),       // 3: id 2
        (4, 4, vec![0, 1]),       // 4: id 2bar
        (0, 2, vec![0, 0, 1, 2]), // 5: iota_bot
        (1, 2, vec![0, 1, 2, 2]), // 6: iota_top
        (0, 3, vec![1, 2]),       // 7: delta
        (1, 4, vec![0, 1]),       // 8: delta_bar
        (2, 3, vec![2, 3]),       // 9: pi_bot
        (2, 4, vec![0, 1]),       // 10: pi_top
        (1, 3, vec![2, 2]),       // 11: pi_bot∘iota_top
        (0, 4, vec![0, 0]),       // 12: pi_top∘iota_bot
    ];
    // dual composition over the card model
    let arrows: Vec<Arrow> = specs.iter().map(|&(s, t, _)| Arrow { src: s, tgt: t }).collect();
    let mut index = HashMap::new();
    for (id, spec) in specs.iter().enumerate() {
        index.insert(spec.clone(), id);
    }
    let identity: Vec<ArrId> = (0..5).map(|o| o).collect();
    let specs2 = specs.clone();
    let cat = FinCategory::from_fn("butterfly-type", 5, arrows, identity, move |g, f| {
        let (fs, _, f_tab) = &specs2[f];
        let (_, gt, g_tab) = &specs2[g];
        // dual: underlying maps compose the other way round
        let table: Vec<usize> = g_tab.iter().map(|&x| f_tab[x]).collect();
        index.get(&(*fs, *gt, table)).copied()
    });
    let _ = cards;
    let mut good_monos = vec![false; 13];
    let mut good_epis = vec![false; 13];
    for id in 0..5 {
        good_monos[id] = true;
        good_epis[id] = true;
    }
    good_monos[5] = true;
    good_monos[6] = true;
    for id in [7, 8, 9, 10] {
        good_epis[id] = true;
    }
    Prediptych { cat, good_monos, good_epis }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EndoName {
    Sigma,
    Delta,
    Nabla,
    Square,
}

/// A canonical endofunctor realized between two truncations of the
/// dual-cardinal category, with its bundled natural transformations.
#[derive(Debug, Clone)]
pub struct TransformationEntry {
    pub name: String,
    pub from: FinFunctor,
    pub to: FinFunctor,
    pub nat: NatTransformation,
}

#[derive(Debug, Clone)]
pub struct EndofunctorPackage {
    pub name: EndoName,
    pub source: DualCardTrunc,
    pub target: DualCardTrunc,
    pub functor: FinFunctor,
    /// inclusion of the source truncation into the target one
    pub inclusion: FinFunctor,
    pub transformations: Vec<TransformationEntry>,
}

fn functor_on_duals(
    src: &DualCardTrunc,
    tgt: &DualCardTrunc,
    obj: impl Fn(usize) -> usize,           // cardinal -> cardinal
    arr: impl Fn(&[usize], usize, usize) -> Vec<usize>, // map q->p, p, q -> image map
) -> FinFunctor {
    let obj_map: Vec<ObjId> = (1..=src.n).map(|p| tgt.object_of_card(obj(p))).collect();
    let arr_map: Vec<ArrId> = src
        .pre
        .cat
        .arrow_ids()
        .map(|a| {
            let (t, p, q) = src.dual_of(a);
            tgt.arrow_of_dual(obj(p), obj(q), &arr(t, p, q))
                .expect("image arrow must exist in the target truncation")
        })
        .collect();
    FinFunctor { obj_map, arr_map }
}

pub fn canonical_endofunctor(
    name: EndoName,
    trunc: usize,
) -> Result<EndofunctorPackage, DiptychError> {
    let shift = match name {
        EndoName::Sigma => 0,
        EndoName::Delta | EndoName::Nabla => 1,
        EndoName::Square => trunc,
    };
    if trunc == 0 || trunc + shift > FINV_BOUND {
        return Err(DiptychError::OutOfBound(format!(
            "canonical_endofunctor needs truncation {} within {FINV_BOUND}",
            trunc + shift
        )));
    }
    let source = finv_trunc(trunc)?;
    let target = finv_trunc(trunc + shift)?;
    let inclusion = functor_on_duals(&source, &target, |p| p, |t, _, _| t.to_vec());
    let mirror = |t: &[usize], p: usize| -> Vec<usize> {
        // conjugate by the order-reversing involutions
        let q = t.len();
        (0..q).map(|x| p - 1 - t[q - 1 - x]).collect()
    };
    let (functor, transformations) = match name {
        EndoName::Sigma => {
            let f = functor_on_duals(&source, &target, |p| p, |t, p, _| mirror(t, p));
            let nat = NatTransformation {
                components: (1..=trunc)
                    .map(|p| {
                        let sigma: Vec<usize> = (0..p).map(|x| p - 1 - x).collect();
                        target.arrow_of_dual(p, p, &sigma).unwrap()
                    })
                    .collect(),
            };
            let entry = TransformationEntry {
                name: "sigma".into(),
                from: inclusion.clone(),
                to: f.clone(),
                nat,
            };
            (f, vec![entry])
        }
        EndoName::Delta => {
            let f = functor_on_duals(&source, &target, |p| p + 1, |t, _, _| {
                let mut v = vec![0];
                v.extend(t.iter().map(|&x| x + 1));
                v
            });
            let nat = NatTransformation {
                components: (1..=trunc)
                    .map(|p| {
                        // dual of x ↦ x+1 : p -> 1+p
                        let d0: Vec<usize> = (0..p).map(|x| x + 1).collect();
                        target.arrow_of_dual(p + 1, p, &d0).unwrap()
                    })
                    .collect(),
            };
            let entry = TransformationEntry {
                name: "delta".into(),
                from: f.clone(),
                to: inclusion.clone(),
                nat,
            };
            (f, vec![entry])
        }
        EndoName::Nabla => {
            let f = functor_on_duals(&source, &target, |p| p + 1, |t, p, q| {
                let mut v: Vec<usize> = t.to_vec();
                v.push(p);
                let _ = q;
                v
            });
            let nat = NatTransformation {
                components: (1..=trunc)
                    .map(|p| {
                        // dual of x ↦ x : p -> p+1
                        let dp: Vec<usize> = (0..p).collect();
                        target.arrow_of_dual(p + 1, p, &dp).unwrap()
                    })
                    .collect(),
            };
            let entry = TransformationEntry {
                name: "delta-bar".into(),
                from: f.clone(),
                to: inclusion.clone(),
                nat,
            };
            (f, vec![entry])
        }
        EndoName::Square => {
            let f = functor_on_duals(&source, &target, |p| 2 * p, |t, p, q| {
                let mut v: Vec<usize> = t.to_vec();
                v.extend(t.iter().map(|&x| x + p));
                let _ = q;
                v
            });
            let iota = NatTransformation {
                components: (1..=trunc)
                    .map(|p| {
                        // dual of the codiagonal 2p -> p
                        let co: Vec<usize> = (0..2 * p).map(|x| x % p).collect();
                        target.arrow_of_dual(p, 2 * p, &co).unwrap()
                    })
                    .collect(),
            };
            let pi_bot = NatTransformation {
                components: (1..=trunc)
                    .map(|p| {
                        let inj: Vec<usize> = (0..p).collect();
                        target.arrow_of_dual(2 * p, p, &inj).unwrap()
                    })
                    .collect(),
            };
            let pi_top = NatTransformation {
                components: (1..=trunc)
                    .map(|p| {
                        let inj: Vec<usize> = (0..p).map(|x| p + x).collect();
                        target.arrow_of_dual(2 * p, p, &inj).unwrap()
                    })
                    .collect(),
            };
            let entries = vec![
                TransformationEntry {
                    name: "iota".into(),
                    from: inclusion.clone(),
                    to: f.clone(),
                    nat: iota,
                },
                TransformationEntry {
                    name: "pi-bot".into(),
                    from: f.clone(),
                    to: inclusion.clone(),
                    nat: pi_bot,
                },
                TransformationEntry {
                    name: "pi-top".into(),
                    from: f.clone(),
                    to: inclusion.clone(),
                    nat: pi_top,
                },
            ];
            (f, entries)
        }
    };
    Ok(EndofunctorPackage { name, source, target, functor, inclusion, transformations })
}

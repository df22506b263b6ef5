//! Skeletons of finite Set: one object per set size, all maps as arrows.
//! Arrows carry their underlying function tables, so mono/epi questions can
//! be cross-checked against plain injectivity/surjectivity.

use crate::fincat::{Arrow, FinCategory, ObjId, ArrId};

#[derive(Debug, Clone)]
pub struct SetSkeleton {
    pub cat: FinCategory,
    /// size of the set represented by each object
    pub sizes: Vec<usize>,
    maps: Vec<Vec<usize>>,
    /// first arrow id of hom(s, t), indexed s * n + t
    offsets: Vec<usize>,
}

fn pow(b: usize, e: usize) -> usize {
    b.checked_pow(e as u32).expect("hom-set size overflow")
}

impl SetSkeleton {
    /// Full subcategory of finite Set on the given (deduplicated, sorted) sizes.
    pub fn on_sizes(mut sizes: Vec<usize>) -> SetSkeleton {
        sizes.sort_unstable();
        sizes.dedup();
        assert!(!sizes.is_empty() && sizes[0] >= 1, "sizes must be nonempty positive");
        let n = sizes.len();
        let mut arrows = Vec::new();
        let mut maps = Vec::new();
        let mut offsets = vec![0usize; n * n];
        for s in 0..n {
            for t in 0..n {
                offsets[s * n + t] = arrows.len();
                let (ss, ts) = (sizes[s], sizes[t]);
                for rank in 0..pow(ts, ss) {
                    let mut table = Vec::with_capacity(ss);
                    let mut r = rank;
                    for _ in 0..ss {
                        table.push(r % ts);
                        r /= ts;
                    }
                    arrows.push(Arrow { src: s, tgt: t });
                    maps.push(table);
                }
            }
        }
        let mut identity = Vec::with_capacity(n);
        for (s, &sz) in sizes.iter().enumerate() {
            let table: Vec<usize> = (0..sz).collect();
            identity.push(Self::rank_of(&offsets, &sizes, n, s, s, &table));
        }
        let ends: Vec<(ObjId, ObjId)> = arrows.iter().map(|a| (a.src, a.tgt)).collect();
        let (off2, sizes2, maps2) = (offsets.clone(), sizes.clone(), maps.clone());
        let cat = FinCategory::from_fn(
            format!("Set<={}", sizes.last().unwrap()),
            n,
            arrows,
            identity,
            move |g, f| {
                let ft = &maps2[f];
                let gt = &maps2[g];
                let table: Vec<usize> = ft.iter().map(|&x| gt[x]).collect();
                Some(Self::rank_of(&off2, &sizes2, n, ends[f].0, ends[g].1, &table))
            },
        );
        SetSkeleton { cat, sizes, maps, offsets }
    }

    /// Sets {0..k-1} for k = 1..=bound.
    pub fn with_bound(bound: usize) -> SetSkeleton {
        SetSkeleton::on_sizes((1..=bound).collect())
    }

    fn rank_of(
        offsets: &[usize],
        sizes: &[usize],
        n: usize,
        s: ObjId,
        t: ObjId,
        table: &[usize],
    ) -> ArrId {
        let ts = sizes[t];
        let mut rank = 0;
        for &v in table.iter().rev() {
            rank = rank * ts + v;
        }
        offsets[s * n + t] + rank
    }

    pub fn object_of_size(&self, size: usize) -> Option<ObjId> {
        self.sizes.iter().position(|&s| s == size)
    }

    pub fn map_of(&self, a: ArrId) -> &[usize] {
        &self.maps[a]
    }

    pub fn arrow_of_map(&self, s: ObjId, t: ObjId, table: &[usize]) -> ArrId {
        assert_eq!(table.len(), self.sizes[s]);
        Self::rank_of(&self.offsets, &self.sizes, self.cat.n_objects(), s, t, table)
    }

    pub fn is_injective(&self, a: ArrId) -> bool {
        let m = &self.maps[a];
        let mut seen = vec![false; self.sizes[self.cat.tgt(a)]];
        m.iter().all(|&v| !std::mem::replace(&mut seen[v], true))
    }

    pub fn is_surjective(&self, a: ArrId) -> bool {
        let m = &self.maps[a];
        let mut seen = vec![false; self.sizes[self.cat.tgt(a)]];
        for &v in m {
            seen[v] = true;
        }
        seen.iter().all(|&b| b)
    }
}

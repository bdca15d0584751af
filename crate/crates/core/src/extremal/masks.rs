//! Freeness checks on edge sets of vertex bitmasks, local to one new edge.

use crate::patterns::PatternParams;

/// Vertex set as a bitmask; hosts have at most 64 vertices.
pub type VMask = u64;

pub(crate) fn bits(mut m: VMask) -> impl Iterator<Item = u32> {
    std::iter::from_fn(move || {
        (m != 0).then(|| {
            let b = m.trailing_zeros();
            m &= m - 1;
            b
        })
    })
}

pub(crate) fn to_vertices(m: VMask) -> Vec<u32> {
    bits(m).collect()
}

pub(crate) fn from_vertices(vs: &[u32]) -> VMask {
    vs.iter().fold(0, |acc, &v| acc | (1u64 << v))
}

/// Forbidden configuration for the greedy generators and the exact search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Forbidden {
    Kst(PatternParams),
    /// Four distinct edges with `A ∪ B = C ∪ D`, `A ∩ B = C ∩ D = ∅`.
    Quadruple,
}

/// View of a current edge set for the local checks.
pub(crate) trait EdgeView {
    fn order(&self) -> usize;
    fn contains(&self, e: VMask) -> bool;
    /// Present edges containing `v`.
    fn through(&self, v: u32) -> Vec<VMask>;
    /// All present edges.
    fn all(&self) -> Vec<VMask>;
}

/// Some `t` sets among `sets` that are pairwise disjoint.
fn has_disjoint(sets: &[VMask], t: usize, used: VMask) -> bool {
    if t == 0 {
        return true;
    }
    if sets.len() < t {
        return false;
    }
    for (i, &b) in sets.iter().enumerate() {
        if b & used == 0 && has_disjoint(&sets[i + 1..], t - 1, used | b) {
            return true;
        }
    }
    false
}

fn subsets(items: &[u32], k: usize, start: usize, acc: &mut Vec<u32>, f: &mut dyn FnMut(&[u32]) -> bool) -> bool {
    if acc.len() == k {
        return f(acc);
    }
    for i in start..items.len() {
        if items.len() - i < k - acc.len() {
            break;
        }
        acc.push(items[i]);
        if subsets(items, k, i + 1, acc, f) {
            return true;
        }
        acc.pop();
    }
    false
}

/// Whether the present edge `e` lies in a copy of `K_{s,t}^{(r)}`: for
/// some `y ∈ e`, `X = e \ {y}` extends to the full pattern with `y ∈ Y`.
fn kst_through(view: &dyn EdgeView, e: VMask, p: PatternParams) -> bool {
    for y in bits(e) {
        let x = e & !(1u64 << y);
        let others: Vec<u32> = (0..view.order() as u32)
            .filter(|&w| e >> w & 1 == 0 && view.contains(x | (1u64 << w)))
            .collect();
        let y_link: Vec<VMask> = view
            .through(y)
            .into_iter()
            .map(|f| f & !(1u64 << y))
            .filter(|&b| b & x == 0)
            .collect();
        let found = subsets(&others, p.s - 1, 0, &mut Vec::new(), &mut |rest| {
            let ymask = from_vertices(rest);
            let cn: Vec<VMask> = y_link
                .iter()
                .copied()
                .filter(|&b| b & ymask == 0 && rest.iter().all(|&w| view.contains(b | (1u64 << w))))
                .collect();
            has_disjoint(&cn, p.t - 1, 0)
        });
        if found {
            return true;
        }
    }
    false
}

/// Whether the present edge `e` lies in a four-edge configuration.
fn quadruple_through(view: &dyn EdgeView, e: VMask, r: usize) -> bool {
    let all = view.all();
    for &b in &all {
        if b & e != 0 {
            continue;
        }
        let u = e | b;
        let verts = to_vertices(u);
        let hit = subsets(&verts, r, 0, &mut Vec::new(), &mut |c| {
            let c = from_vertices(c);
            c != e && c != b && view.contains(c) && view.contains(u & !c)
        });
        if hit {
            return true;
        }
    }
    false
}

impl Forbidden {
    /// With `e` already present, whether some forbidden copy uses `e`.
    pub(crate) fn through(&self, view: &dyn EdgeView, e: VMask, r: usize) -> bool {
        match *self {
            Forbidden::Kst(p) => kst_through(view, e, p),
            Forbidden::Quadruple => quadruple_through(view, e, r),
        }
    }
}

/// A growable edge set over at most 64 vertices.
pub(crate) struct MaskSet {
    present: std::collections::HashSet<VMask>,
    by_vertex: Vec<Vec<VMask>>,
    order: Vec<VMask>,
}

impl MaskSet {
    pub(crate) fn new(n: usize) -> Self {
        MaskSet {
            present: Default::default(),
            by_vertex: vec![Vec::new(); n],
            order: Vec::new(),
        }
    }

    pub(crate) fn insert(&mut self, e: VMask) {
        if self.present.insert(e) {
            for v in bits(e) {
                self.by_vertex[v as usize].push(e);
            }
            self.order.push(e);
        }
    }

    pub(crate) fn remove_last(&mut self, e: VMask) {
        assert_eq!(self.order.pop(), Some(e));
        self.present.remove(&e);
        for v in bits(e) {
            assert_eq!(self.by_vertex[v as usize].pop(), Some(e));
        }
    }

    pub(crate) fn edges(&self) -> &[VMask] {
        &self.order
    }
}

impl EdgeView for MaskSet {
    fn order(&self) -> usize {
        self.by_vertex.len()
    }

    fn contains(&self, e: VMask) -> bool {
        self.present.contains(&e)
    }

    fn through(&self, v: u32) -> Vec<VMask> {
        self.by_vertex[v as usize].clone()
    }

    fn all(&self) -> Vec<VMask> {
        self.order.clone()
    }
}

//! Orderly branch and bound over edge subsets of a small candidate list.
//!
//! Edge sets are `u128` masks over candidates sorted lexicographically. A set
//! is canonical when no symmetry maps it to a smaller set, where `A < B`
//! means the lowest candidate of `A △ B` lies in `A`. Removing the largest
//! candidate of a canonical set leaves a canonical set, so extending only by
//! candidates above the current maximum and discarding non-canonical
//! children reaches every isomorphism class exactly once.

use itertools::Itertools;

use super::masks::{bits, from_vertices, EdgeView, Forbidden, VMask};

pub(crate) type EMask = u128;

pub(crate) struct Space {
    pub r: usize,
    pub order: usize,
    /// Candidate edges as vertex masks, ascending in lexicographic order.
    pub cands: Vec<VMask>,
    /// For each vertex, the candidates containing it.
    through: Vec<Vec<usize>>,
    /// `perm_tables[k][c]` is the image of candidate `c` under symmetry `k`.
    perm_tables: Vec<Vec<u8>>,
    index_of: std::collections::HashMap<VMask, usize>,
}

impl Space {
    /// `groups` are vertex blocks permuted independently by the symmetries.
    pub fn new(r: usize, order: usize, cands: Vec<Vec<u32>>, groups: &[Vec<u32>]) -> Self {
        assert!(cands.len() <= 128, "at most 128 candidates");
        let masks: Vec<VMask> = cands.iter().map(|c| from_vertices(c)).collect();
        let index_of: std::collections::HashMap<VMask, usize> = masks.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        let mut through = vec![Vec::new(); order];
        for (i, c) in cands.iter().enumerate() {
            for &v in c {
                through[v as usize].push(i);
            }
        }
        let per_group: Vec<Vec<Vec<u32>>> = groups
            .iter()
            .map(|g| g.iter().copied().permutations(g.len()).collect())
            .collect();
        let mut perm_tables = Vec::new();
        for combo in per_group.iter().map(|v| v.iter()).multi_cartesian_product() {
            let mut image: Vec<u32> = (0..order as u32).collect();
            for (group, target) in groups.iter().zip(&combo) {
                for (&from, &to) in group.iter().zip(target.iter()) {
                    image[from as usize] = to;
                }
            }
            if image.iter().enumerate().all(|(i, &v)| i as u32 == v) {
                continue;
            }
            let table: Vec<u8> = masks
                .iter()
                .map(|&m| {
                    let img = bits(m).fold(0u64, |acc, v| acc | (1u64 << image[v as usize]));
                    index_of[&img] as u8
                })
                .collect();
            perm_tables.push(table);
        }
        Space {
            r,
            order,
            cands: masks,
            through,
            perm_tables,
            index_of,
        }
    }

    pub fn is_canonical(&self, set: EMask) -> bool {
        for table in &self.perm_tables {
            let mut img: EMask = 0;
            let mut rest = set;
            while rest != 0 {
                let c = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                img |= 1u128 << table[c];
            }
            let diff = img ^ set;
            if diff != 0 && (set >> diff.trailing_zeros()) & 1 == 0 {
                return false;
            }
        }
        true
    }

    pub fn symmetry_count(&self) -> usize {
        self.perm_tables.len() + 1
    }
}

struct View<'a> {
    space: &'a Space,
    set: EMask,
}

impl EdgeView for View<'_> {
    fn order(&self) -> usize {
        self.space.order
    }

    fn contains(&self, e: VMask) -> bool {
        self.space.index_of.get(&e).is_some_and(|&i| self.set >> i & 1 == 1)
    }

    fn through(&self, v: u32) -> Vec<VMask> {
        self.space.through[v as usize]
            .iter()
            .filter(|&&i| self.set >> i & 1 == 1)
            .map(|&i| self.space.cands[i])
            .collect()
    }

    fn all(&self) -> Vec<VMask> {
        let mut out = Vec::new();
        let mut rest = self.set;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            out.push(self.space.cands[i]);
        }
        out
    }
}

pub(crate) struct Outcome {
    pub value: usize,
    pub witnesses: Vec<EMask>,
    pub nodes: u64,
    pub exhaustive: bool,
}

struct Dfs<'a> {
    space: &'a Space,
    forbidden: Forbidden,
    budget: u64,
    witness_limit: usize,
    nodes: u64,
    best: usize,
    witnesses: Vec<EMask>,
    out_of_budget: bool,
}

impl Dfs<'_> {
    fn addable(&self, set: EMask, c: usize) -> bool {
        let with = set | (1u128 << c);
        !self.forbidden.through(
            &View {
                space: self.space,
                set: with,
            },
            self.space.cands[c],
            self.space.r,
        )
    }

    fn visit(&mut self, set: EMask, size: usize, addable: EMask) {
        self.nodes += 1;
        if self.nodes > self.budget {
            self.out_of_budget = true;
            return;
        }
        if size > self.best {
            self.best = size;
            self.witnesses.clear();
        }
        if size == self.best && self.witnesses.len() < self.witness_limit {
            self.witnesses.push(set);
        }
        let mut rest = addable;
        while rest != 0 {
            if size + (rest.count_ones() as usize) < self.best {
                break;
            }
            let c = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let child = set | (1u128 << c);
            if !self.space.is_canonical(child) {
                continue;
            }
            let mut next: EMask = 0;
            let mut scan = rest;
            while scan != 0 {
                let d = scan.trailing_zeros() as usize;
                scan &= scan - 1;
                if self.addable(child, d) {
                    next |= 1u128 << d;
                }
            }
            self.visit(child, size + 1, next);
            if self.out_of_budget {
                return;
            }
        }
    }
}

pub(crate) fn search(space: &Space, forbidden: Forbidden, budget: u64, witness_limit: usize) -> Outcome {
    let mut dfs = Dfs {
        space,
        forbidden,
        budget,
        witness_limit,
        nodes: 0,
        best: 0,
        witnesses: Vec::new(),
        out_of_budget: false,
    };
    let initial: EMask = (0..space.cands.len())
        .filter(|&c| dfs.addable(0, c))
        .fold(0, |acc, c| acc | (1u128 << c));
    dfs.visit(0, 0, initial);
    let mut witnesses = dfs.witnesses;
    witnesses.sort_unstable();
    Outcome {
        value: dfs.best,
        witnesses,
        nodes: dfs.nodes,
        exhaustive: !dfs.out_of_budget,
    }
}

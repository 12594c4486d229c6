//! Permutability of subgroups and the degrees `sd`, `sd(H, G)`, `csd`,
//! `csd(H, G)` as exact rationals.

use rayon::prelude::*;

use crate::bitset::ElementSet;
use crate::group::{GroupError, GroupTable, Limits};
use crate::lattice::{self, CyclicPoset, Subgroup, SubgroupLattice};
use crate::Degree;

/// The element set `HK`, accumulated one right coset `Hk` at a time.
pub fn product_set(g: &GroupTable, h: &Subgroup, k: &Subgroup) -> ElementSet {
    let mut acc = ElementSet::empty(g.order());
    for y in k.members().iter() {
        if acc.contains(y) {
            continue;
        }
        for x in h.members().iter() {
            acc.insert(g.mul(x as u32, y as u32) as usize);
        }
    }
    acc
}

/// `HK = KH` as element sets.
pub fn permutes(g: &GroupTable, h: &Subgroup, k: &Subgroup) -> bool {
    if h.is_subgroup_of(k) || k.is_subgroup_of(h) {
        return true;
    }
    product_set(g, h, k) == product_set(g, k, h)
}

/// Symmetric permutability relation over a list of subgroups.
#[derive(Debug, Clone)]
struct PermutabilityMatrix {
    n: usize,
    bits: Vec<bool>,
}

impl PermutabilityMatrix {
    fn build(g: &GroupTable, subs: &[Subgroup], normal: impl Fn(usize) -> bool + Sync) -> Self {
        let n = subs.len();
        let rows: Vec<Vec<bool>> = (0..n)
            .into_par_iter()
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if j < i {
                            // filled from row j below
                            false
                        } else {
                            normal(i) || normal(j) || permutes(g, &subs[i], &subs[j])
                        }
                    })
                    .collect()
            })
            .collect();
        let mut bits = vec![false; n * n];
        for i in 0..n {
            for j in i..n {
                bits[i * n + j] = rows[i][j];
                bits[j * n + i] = rows[i][j];
            }
        }
        PermutabilityMatrix { n, bits }
    }

    fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.n + j]
    }

    fn row_count(&self, i: usize) -> usize {
        self.bits[i * self.n..(i + 1) * self.n].iter().filter(|&&b| b).count()
    }
}

/// Cyclic subgroups of `G` with their pairwise permutability precomputed;
/// every `csd` quantity is a count over this table.
#[derive(Debug, Clone)]
pub struct CyclicDegrees {
    poset: CyclicPoset,
    matrix: PermutabilityMatrix,
    c1_sizes: Vec<usize>,
}

impl CyclicDegrees {
    pub fn new(g: &GroupTable) -> Self {
        let poset = lattice::cyclic_subgroups(g);
        let matrix = PermutabilityMatrix::build(g, poset.subgroups(), |i| poset.is_normal(i));
        let c1_sizes = (0..poset.len()).map(|i| matrix.row_count(i)).collect();
        CyclicDegrees {
            poset,
            matrix,
            c1_sizes,
        }
    }

    pub fn poset(&self) -> &CyclicPoset {
        &self.poset
    }

    pub fn permutes(&self, i: usize, j: usize) -> bool {
        self.matrix.get(i, j)
    }

    /// `C_1(H_1)` for the `i`-th cyclic subgroup, as poset indices.
    pub fn c1_set(&self, i: usize) -> Vec<usize> {
        (0..self.poset.len()).filter(|&j| self.matrix.get(i, j)).collect()
    }

    pub fn c1_size(&self, i: usize) -> usize {
        self.c1_sizes[i]
    }

    /// `csd(H, G)`: permuting pairs in `L_1(H) x L_1(G)` over `|L_1(H)||L_1(G)|`.
    pub fn csd_relative(&self, h: &Subgroup) -> Degree {
        let inside = self.poset.within(h);
        let permuting: usize = inside.iter().map(|&i| self.c1_sizes[i]).sum();
        Degree::from_counts(permuting as u64, (inside.len() * self.poset.len()) as u64)
    }

    /// `csd(H)` computed inside `H` (pairs from `L_1(H)^2`).
    pub fn csd_of(&self, h: &Subgroup) -> Degree {
        let inside = self.poset.within(h);
        let permuting = inside
            .iter()
            .flat_map(|&i| inside.iter().map(move |&j| (i, j)))
            .filter(|&(i, j)| self.matrix.get(i, j))
            .count();
        Degree::from_counts(permuting as u64, (inside.len() * inside.len()) as u64)
    }

    pub fn csd(&self) -> Degree {
        let n = self.poset.len();
        let permuting: usize = self.c1_sizes.iter().sum();
        Degree::from_counts(permuting as u64, (n * n) as u64)
    }
}

/// The full lattice with pairwise permutability, for the `sd` quantities.
#[derive(Debug, Clone)]
pub struct LatticeDegrees {
    lattice: SubgroupLattice,
    matrix: PermutabilityMatrix,
    c_sizes: Vec<usize>,
}

impl LatticeDegrees {
    pub fn new(g: &GroupTable, limits: &Limits) -> Result<Self, GroupError> {
        Ok(Self::from_lattice(g, lattice::all_subgroups(g, limits)?))
    }

    pub fn from_lattice(g: &GroupTable, lattice: SubgroupLattice) -> Self {
        let matrix = PermutabilityMatrix::build(g, lattice.subgroups(), |i| lattice.is_normal(i));
        let c_sizes = (0..lattice.len()).map(|i| matrix.row_count(i)).collect();
        LatticeDegrees {
            lattice,
            matrix,
            c_sizes,
        }
    }

    pub fn lattice(&self) -> &SubgroupLattice {
        &self.lattice
    }

    pub fn permutes(&self, i: usize, j: usize) -> bool {
        self.matrix.get(i, j)
    }

    /// `sd(H, G)`: permuting pairs in `L(H) x L(G)` over `|L(H)||L(G)|`.
    pub fn sd_relative(&self, h: &Subgroup) -> Degree {
        let inside = self.lattice.within(h);
        let permuting: usize = inside.iter().map(|&i| self.c_sizes[i]).sum();
        Degree::from_counts(permuting as u64, (inside.len() * self.lattice.len()) as u64)
    }

    pub fn sd(&self) -> Degree {
        let n = self.lattice.len();
        let permuting: usize = self.c_sizes.iter().sum();
        Degree::from_counts(permuting as u64, (n * n) as u64)
    }
}

pub fn csd_relative(g: &GroupTable, h: &Subgroup) -> Degree {
    CyclicDegrees::new(g).csd_relative(h)
}

pub fn csd(g: &GroupTable) -> Degree {
    CyclicDegrees::new(g).csd()
}

pub fn sd_relative(g: &GroupTable, h: &Subgroup, limits: &Limits) -> Result<Degree, GroupError> {
    Ok(LatticeDegrees::new(g, limits)?.sd_relative(h))
}

pub fn sd(g: &GroupTable, limits: &Limits) -> Result<Degree, GroupError> {
    Ok(LatticeDegrees::new(g, limits)?.sd())
}

/// `C_1(H_1)`: the cyclic subgroups of `G` permuting with `h1`.
pub fn c1_set(g: &GroupTable, h1: &Subgroup) -> Vec<Subgroup> {
    lattice::cyclic_subgroups(g)
        .subgroups()
        .iter()
        .filter(|k| permutes(g, h1, k))
        .cloned()
        .collect()
}

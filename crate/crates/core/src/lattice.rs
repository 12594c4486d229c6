//! Cyclic subgroups, the full subgroup lattice, normality and conjugacy
//! classes of subgroups.

use std::collections::{HashMap, HashSet};

use crate::bitset::ElementSet;
use crate::group::{Elem, GroupError, GroupTable, Limits};
use crate::primes::gcd;

/// A subgroup, stored as a membership mask over the ambient group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    members: ElementSet,
    order: usize,
    generators: Vec<Elem>,
    cyclic_witness: Option<Elem>,
}

impl Subgroup {
    fn from_mask(g: &GroupTable, members: ElementSet, generators: Vec<Elem>) -> Self {
        let order = members.len();
        let cyclic_witness = match generators.as_slice() {
            [] => Some(g.identity()),
            [x] => Some(*x),
            _ => members
                .iter()
                .map(|e| e as Elem)
                .find(|&e| g.element_order(e) == order),
        };
        Subgroup {
            members,
            order,
            generators,
            cyclic_witness,
        }
    }

    pub fn members(&self) -> &ElementSet {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// A generating set (not necessarily minimal).
    pub fn generators(&self) -> &[Elem] {
        &self.generators
    }

    pub fn cyclic_witness(&self) -> Option<Elem> {
        self.cyclic_witness
    }

    pub fn is_cyclic(&self) -> bool {
        self.cyclic_witness.is_some()
    }

    pub fn contains(&self, e: Elem) -> bool {
        self.members.contains(e as usize)
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.members.is_subset(&other.members)
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }
}

// Closure of `gens` under right multiplication, starting from the identity.
fn closure_mask(g: &GroupTable, gens: &[Elem]) -> ElementSet {
    let mut mask = ElementSet::empty(g.order());
    let mut queue = vec![g.identity()];
    mask.insert(g.identity() as usize);
    let mut i = 0;
    while i < queue.len() {
        let a = queue[i];
        i += 1;
        for &s in gens {
            let c = g.mul(a, s);
            if mask.insert(c as usize) {
                queue.push(c);
            }
        }
    }
    mask
}

/// The least subgroup containing `seeds`.
pub fn generated_subgroup(g: &GroupTable, seeds: &[Elem]) -> Subgroup {
    let mut gens: Vec<Elem> = seeds.iter().copied().filter(|&s| s != g.identity()).collect();
    gens.sort_unstable();
    gens.dedup();
    let mask = closure_mask(g, &gens);
    Subgroup::from_mask(g, mask, gens)
}

/// The whole group as a subgroup of itself.
pub fn whole(g: &GroupTable) -> Subgroup {
    Subgroup::from_mask(g, ElementSet::full(g.order()), g.generators().to_vec())
}

/// `g H g^-1 = H` for every generator `g` of `G`.
pub fn is_normal(g: &GroupTable, h: &Subgroup) -> bool {
    g.generators()
        .iter()
        .all(|&x| h.generators.iter().all(|&y| h.contains(g.conjugate(x, y))))
}

/// `L_1(G)`: the distinct cyclic subgroups with their normality flags.
#[derive(Debug, Clone)]
pub struct CyclicPoset {
    subgroups: Vec<Subgroup>,
    normal: Vec<bool>,
}

impl CyclicPoset {
    pub fn subgroups(&self) -> &[Subgroup] {
        &self.subgroups
    }

    pub fn len(&self) -> usize {
        self.subgroups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subgroups.is_empty()
    }

    pub fn is_normal(&self, i: usize) -> bool {
        self.normal[i]
    }

    pub fn normal_count(&self) -> usize {
        self.normal.iter().filter(|&&n| n).count()
    }

    /// Indices of the entries contained in `h`, i.e. `L_1(H)`.
    pub fn within(&self, h: &Subgroup) -> Vec<usize> {
        within(&self.subgroups, h)
    }
}

fn within(subs: &[Subgroup], h: &Subgroup) -> Vec<usize> {
    subs.iter()
        .enumerate()
        .filter(|(_, s)| s.members.is_subset(&h.members))
        .map(|(i, _)| i)
        .collect()
}

fn sort_subgroups(subs: &mut [Subgroup]) {
    subs.sort_by(|a, b| a.order.cmp(&b.order).then_with(|| a.members.cmp(&b.members)));
}

pub fn cyclic_subgroups(g: &GroupTable) -> CyclicPoset {
    let n = g.order();
    let mut done = vec![false; n];
    let mut subgroups = Vec::new();
    for x in g.elements() {
        if done[x as usize] {
            continue;
        }
        let mut powers = vec![g.identity()];
        let mut p = x;
        while p != g.identity() {
            powers.push(p);
            p = g.mul(p, x);
        }
        let ord = powers.len();
        for (j, &e) in powers.iter().enumerate() {
            if gcd(j as u64, ord as u64) == 1 {
                done[e as usize] = true;
            }
        }
        done[x as usize] = true;
        let mask = ElementSet::from_indices(n, powers.iter().map(|&e| e as usize));
        let gens = if x == g.identity() { vec![] } else { vec![x] };
        subgroups.push(Subgroup {
            members: mask,
            order: ord,
            generators: gens,
            cyclic_witness: Some(x),
        });
    }
    sort_subgroups(&mut subgroups);
    let normal = subgroups.iter().map(|h| is_normal(g, h)).collect();
    CyclicPoset { subgroups, normal }
}

/// `|N(G) ∩ L_1(G)|`
pub fn normal_cyclic_count(g: &GroupTable) -> usize {
    cyclic_subgroups(g).normal_count()
}

/// `L(G)` with normality flags and the partition into conjugacy classes.
#[derive(Debug, Clone)]
pub struct SubgroupLattice {
    subgroups: Vec<Subgroup>,
    normal: Vec<bool>,
    class_of: Vec<usize>,
    classes: Vec<Vec<usize>>,
    index: HashMap<ElementSet, usize>,
}

impl SubgroupLattice {
    pub fn subgroups(&self) -> &[Subgroup] {
        &self.subgroups
    }

    pub fn len(&self) -> usize {
        self.subgroups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subgroups.is_empty()
    }

    pub fn is_normal(&self, i: usize) -> bool {
        self.normal[i]
    }

    pub fn class_of(&self, i: usize) -> usize {
        self.class_of[i]
    }

    /// Conjugacy classes as lists of subgroup indices, ordered by first member.
    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn position(&self, members: &ElementSet) -> Option<usize> {
        self.index.get(members).copied()
    }

    /// Indices of the entries contained in `h`, i.e. `L(H)`.
    pub fn within(&self, h: &Subgroup) -> Vec<usize> {
        within(&self.subgroups, h)
    }

    /// `γ(G)`: the number of conjugacy classes of non-normal subgroups.
    pub fn gamma(&self) -> usize {
        self.classes.iter().filter(|c| !self.normal[c[0]]).count()
    }
}

/// Enumerates every subgroup by closing the cyclic subgroups under joins
/// `<A, g>` until nothing new appears.
pub fn all_subgroups(g: &GroupTable, limits: &Limits) -> Result<SubgroupLattice, GroupError> {
    if g.order() > limits.max_lattice_order {
        return Err(GroupError::LatticeBound {
            order: g.order(),
            bound: limits.max_lattice_order,
        });
    }
    let cyclic = cyclic_subgroups(g);
    let mut seen: HashMap<ElementSet, Vec<Elem>> = HashMap::new();
    let mut frontier: Vec<(ElementSet, Vec<Elem>)> = Vec::new();
    for c in cyclic.subgroups() {
        seen.insert(c.members.clone(), c.generators.clone());
        frontier.push((c.members.clone(), c.generators.clone()));
    }
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for (mask, gens) in &frontier {
            for c in cyclic.subgroups() {
                if c.members.is_subset(mask) {
                    continue;
                }
                let mut joined = gens.clone();
                joined.extend_from_slice(&c.generators);
                let m = closure_mask(g, &joined);
                if !seen.contains_key(&m) {
                    seen.insert(m.clone(), joined.clone());
                    next.push((m, joined));
                }
            }
        }
        frontier = next;
    }
    let mut subgroups: Vec<Subgroup> = seen
        .into_iter()
        .map(|(mask, gens)| Subgroup::from_mask(g, mask, gens))
        .collect();
    sort_subgroups(&mut subgroups);
    let normal: Vec<bool> = subgroups.iter().map(|h| is_normal(g, h)).collect();
    let class_of = conjugacy_classes(g, &subgroups);
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (i, &c) in class_of.iter().enumerate() {
        if c == classes.len() {
            classes.push(Vec::new());
        }
        classes[c].push(i);
    }
    let index = subgroups
        .iter()
        .enumerate()
        .map(|(i, h)| (h.members.clone(), i))
        .collect();
    Ok(SubgroupLattice {
        subgroups,
        normal,
        class_of,
        classes,
        index,
    })
}

fn conjugate_mask(g: &GroupTable, x: Elem, mask: &ElementSet) -> ElementSet {
    ElementSet::from_indices(
        g.order(),
        mask.iter().map(|h| g.conjugate(x, h as Elem) as usize),
    )
}

/// Class id per entry of `subs`: entries share an id iff they are conjugate
/// in `G`. Ids are numbered in order of first appearance.
pub fn conjugacy_classes(g: &GroupTable, subs: &[Subgroup]) -> Vec<usize> {
    let index: HashMap<&ElementSet, usize> =
        subs.iter().enumerate().map(|(i, h)| (&h.members, i)).collect();
    let mut class = vec![usize::MAX; subs.len()];
    let mut next_id = 0;
    for i in 0..subs.len() {
        if class[i] != usize::MAX {
            continue;
        }
        // orbit under conjugation by the generators, closed transitively
        let mut orbit: HashSet<ElementSet> = HashSet::from([subs[i].members.clone()]);
        let mut stack = vec![subs[i].members.clone()];
        while let Some(m) = stack.pop() {
            for &x in g.generators() {
                let c = conjugate_mask(g, x, &m);
                if orbit.insert(c.clone()) {
                    stack.push(c);
                }
            }
        }
        for m in &orbit {
            if let Some(&j) = index.get(m) {
                class[j] = next_id;
            }
        }
        next_id += 1;
    }
    class
}

/// `γ(G)`, enumerating the full lattice.
pub fn gamma(g: &GroupTable, limits: &Limits) -> Result<usize, GroupError> {
    Ok(all_subgroups(g, limits)?.gamma())
}

/// `Z(G)`
pub fn center(g: &GroupTable) -> Subgroup {
    let central: Vec<Elem> = g
        .elements()
        .filter(|&z| g.generators().iter().all(|&x| g.mul(x, z) == g.mul(z, x)))
        .collect();
    generated_subgroup(g, &central)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::*;

    fn lim() -> Limits {
        Limits::default()
    }

    fn sizes(subs: &[Subgroup]) -> Vec<usize> {
        subs.iter().map(|h| h.order()).collect()
    }

    // Full-element conjugation, independent of the generator shortcut.
    fn classes_by_all_elements(g: &GroupTable, subs: &[Subgroup]) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = Vec::new();
        let mut assigned = vec![false; subs.len()];
        for i in 0..subs.len() {
            if assigned[i] {
                continue;
            }
            let conjugates: HashSet<ElementSet> = g
                .elements()
                .map(|x| conjugate_mask(g, x, &subs[i].members))
                .collect();
            let class: Vec<usize> = (0..subs.len())
                .filter(|&j| conjugates.contains(&subs[j].members))
                .collect();
            for &j in &class {
                assigned[j] = true;
            }
            out.push(class);
        }
        out
    }

    #[test]
    fn generated_subgroups() {
        let d8 = dihedral(8, &lim()).unwrap();
        assert!(generated_subgroup(&d8, &[d8.identity()]).is_trivial());
        // D8: y = 4, x^2 = 2
        let klein = generated_subgroup(&d8, &[4, 2]);
        assert_eq!(klein.members().iter().collect::<Vec<_>>(), vec![0, 2, 4, 6]);
        assert!(!klein.is_cyclic());
        let q16 = generalized_quaternion(16, &lim()).unwrap();
        let x = generated_subgroup(&q16, &[1]);
        assert_eq!(x.order(), 8);
        assert_eq!(x.cyclic_witness(), Some(1));
    }

    #[test]
    fn cyclic_subgroup_counts() {
        let z12 = cyclic(12, &lim()).unwrap();
        assert_eq!(cyclic_subgroups(&z12).len(), 6);
        let q8 = generalized_quaternion(8, &lim()).unwrap();
        assert_eq!(sizes(cyclic_subgroups(&q8).subgroups()), vec![1, 2, 4, 4, 4]);
        assert_eq!(cyclic_subgroups(&dihedral(16, &lim()).unwrap()).len(), 12);
        assert_eq!(cyclic_subgroups(&dihedral(8, &lim()).unwrap()).len(), 7);
        assert_eq!(cyclic_subgroups(&quasidihedral(16, &lim()).unwrap()).len(), 10);
        assert_eq!(cyclic_subgroups(&quasidihedral(32, &lim()).unwrap()).len(), 17);
        assert_eq!(cyclic_subgroups(&semidirect_cyclic(7, 3, 2, &lim()).unwrap()).len(), 9);
        // M(27): trivial, four of order 3 inside <x^3, y>, three of order 9
        assert_eq!(cyclic_subgroups(&modular(3, 3, &lim()).unwrap()).len(), 8);
    }

    #[test]
    fn lattice_sizes() {
        let q8 = generalized_quaternion(8, &lim()).unwrap();
        assert_eq!(all_subgroups(&q8, &lim()).unwrap().len(), 6);
        assert_eq!(all_subgroups(&dihedral(8, &lim()).unwrap(), &lim()).unwrap().len(), 10);
        assert_eq!(all_subgroups(&cyclic(7, &lim()).unwrap(), &lim()).unwrap().len(), 2);
        assert_eq!(all_subgroups(&alternating4(), &lim()).unwrap().len(), 10);
        // S3 = Zsd(3,2,2)
        assert_eq!(all_subgroups(&semidirect_cyclic(3, 2, 2, &lim()).unwrap(), &lim()).unwrap().len(), 6);
        let big = dihedral(600, &lim()).unwrap();
        assert!(matches!(all_subgroups(&big, &lim()), Err(GroupError::LatticeBound { .. })));
    }

    #[test]
    fn lattice_is_closed_under_joins_and_lagrange() {
        for g in [alternating4(), dihedral(16, &lim()).unwrap(), modular(2, 4, &lim()).unwrap()] {
            let lat = all_subgroups(&g, &lim()).unwrap();
            for h in lat.subgroups() {
                assert_eq!(g.order() % h.order(), 0);
                let all: Vec<Elem> = h.members().iter().map(|e| e as Elem).collect();
                assert_eq!(generated_subgroup(&g, &all).members(), h.members());
                assert_eq!(closure_mask(&g, h.generators()), *h.members());
            }
            for a in lat.subgroups() {
                for b in lat.subgroups() {
                    let mut seeds = a.generators().to_vec();
                    seeds.extend_from_slice(b.generators());
                    let j = generated_subgroup(&g, &seeds);
                    assert!(lat.position(j.members()).is_some());
                }
            }
            let cyc = cyclic_subgroups(&g);
            for c in cyc.subgroups() {
                assert!(lat.position(c.members()).is_some());
            }
            assert_eq!(lat.subgroups()[0].order(), 1);
            assert_eq!(lat.subgroups().last().unwrap().order(), g.order());
        }
    }

    #[test]
    fn normality() {
        let q16 = generalized_quaternion(16, &lim()).unwrap();
        let z = center(&q16);
        assert_eq!(z.order(), 2);
        assert!(is_normal(&q16, &z));
        let d8 = dihedral(8, &lim()).unwrap();
        assert!(!is_normal(&d8, &generated_subgroup(&d8, &[4])));
        let z12 = cyclic(12, &lim()).unwrap();
        assert!(cyclic_subgroups(&z12).subgroups().iter().all(|h| is_normal(&z12, h)));
    }

    #[test]
    fn reflection_classes_in_d8() {
        let d8 = dihedral(8, &lim()).unwrap();
        // <y>, <xy>, <x^2 y>, <x^3 y> are elements 4, 5, 6, 7
        let subs: Vec<Subgroup> = (4..8).map(|r| generated_subgroup(&d8, &[r])).collect();
        let ids = conjugacy_classes(&d8, &subs);
        assert_eq!(ids, vec![0, 1, 0, 1]);
    }

    #[test]
    fn frobenius_21_has_one_class_of_seven() {
        let g = semidirect_cyclic(7, 3, 2, &lim()).unwrap();
        let lat = all_subgroups(&g, &lim()).unwrap();
        let non_normal: Vec<&Vec<usize>> =
            lat.classes().iter().filter(|c| !lat.is_normal(c[0])).collect();
        assert_eq!(non_normal.len(), 1);
        assert_eq!(non_normal[0].len(), 7);
        assert!(non_normal[0].iter().all(|&i| lat.subgroups()[i].order() == 3));
    }

    #[test]
    fn generator_orbits_match_full_conjugation() {
        for g in [
            alternating4(),
            dihedral(16, &lim()).unwrap(),
            quasidihedral(16, &lim()).unwrap(),
            semidirect_cyclic(5, 4, 2, &lim()).unwrap(),
        ] {
            let lat = all_subgroups(&g, &lim()).unwrap();
            let oracle = classes_by_all_elements(&g, lat.subgroups());
            assert_eq!(lat.classes(), oracle.as_slice(), "{}", g.spec());
            for class in lat.classes() {
                let first = &lat.subgroups()[class[0]];
                for &i in class {
                    let h = &lat.subgroups()[i];
                    assert_eq!(h.order(), first.order());
                    assert_eq!(h.is_cyclic(), first.is_cyclic());
                }
            }
        }
    }

    #[test]
    fn gamma_values() {
        assert_eq!(gamma(&generalized_quaternion(8, &lim()).unwrap(), &lim()).unwrap(), 0);
        assert_eq!(gamma(&dihedral(8, &lim()).unwrap(), &lim()).unwrap(), 2);
        assert_eq!(gamma(&alternating4(), &lim()).unwrap(), 2);
        assert_eq!(gamma(&generalized_quaternion(16, &lim()).unwrap(), &lim()).unwrap(), 2);
        let s3 = semidirect_cyclic(3, 2, 2, &lim()).unwrap();
        let s3z3 = direct_product(&s3, &cyclic(3, &lim()).unwrap(), &lim()).unwrap();
        assert_eq!(gamma(&s3z3, &lim()).unwrap(), 3);
    }

    #[test]
    fn within_and_normal_cyclic_counts() {
        let q16 = generalized_quaternion(16, &lim()).unwrap();
        let cyc = cyclic_subgroups(&q16);
        let x = generated_subgroup(&q16, &[1]);
        let inside: Vec<usize> = cyc.within(&x).iter().map(|&i| cyc.subgroups()[i].order()).collect();
        assert_eq!(inside, vec![1, 2, 4, 8]);
        assert_eq!(cyc.within(&whole(&q16)).len(), cyc.len());
        assert_eq!(cyc.within(&generated_subgroup(&q16, &[])).len(), 1);
        for n in 3..=7u32 {
            let order = 1u64 << n;
            assert_eq!(normal_cyclic_count(&dihedral(order, &lim()).unwrap()), n as usize);
            if n >= 4 {
                assert_eq!(normal_cyclic_count(&generalized_quaternion(order, &lim()).unwrap()), n as usize);
                assert_eq!(normal_cyclic_count(&quasidihedral(order, &lim()).unwrap()), n as usize);
            }
        }
        let z12 = cyclic(12, &lim()).unwrap();
        assert_eq!(normal_cyclic_count(&z12), 6);
    }
}

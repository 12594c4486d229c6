//! Finite groups as multiplication tables, and constructors for the families
//! the library works with.
//!
//! Every constructor encodes its group structurally (pairs `x^a y^b`,
//! permutations, tuples) and then flattens it into a [`GroupTable`]; the
//! table is the only representation used downstream. For the two-generator
//! families the element `x^a y^b` has index `b * |x| + a`, so `x` is element
//! `1` and `y` is element `|x|`. A direct product `G x H` puts `(g, h)` at
//! index `g * |H| + h`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::primes::{gcd, is_prime, log_exact, pow_mod};

/// Index of an element inside its [`GroupTable`].
pub type Elem = u32;

/// Resource bounds applied to construction and to full-lattice work.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    /// Largest group order any constructor will build.
    pub max_order: usize,
    /// Largest group order for which the full subgroup lattice is enumerated.
    pub max_lattice_order: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_order: 5000,
            max_lattice_order: 512,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("{family}: {reason}")]
    InvalidParameter { family: &'static str, reason: String },
    #[error("group order {order} exceeds the configured bound {bound}")]
    OrderBound { order: u64, bound: usize },
    #[error("group order {order} exceeds the full-lattice bound {bound}")]
    LatticeBound { order: usize, bound: usize },
    #[error("table for {spec} is not a group: {reason}")]
    InvalidTable { spec: String, reason: String },
}

fn invalid(family: &'static str, reason: impl Into<String>) -> GroupError {
    GroupError::InvalidParameter {
        family,
        reason: reason.into(),
    }
}

fn check_order(order: u64, limits: &Limits) -> Result<usize, GroupError> {
    if order > limits.max_order as u64 {
        return Err(GroupError::OrderBound {
            order,
            bound: limits.max_order,
        });
    }
    Ok(order as usize)
}

/// An immutable finite group given by its full multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupTable {
    order: usize,
    mul: Vec<Elem>,
    identity: Elem,
    inv: Vec<Elem>,
    spec: String,
    generators: Vec<Elem>,
}

impl GroupTable {
    /// Builds and validates a table from a product rule on `0..order`.
    pub fn from_fn(
        spec: impl Into<String>,
        order: usize,
        generators: Vec<Elem>,
        op: impl Fn(usize, usize) -> usize,
    ) -> Result<Self, GroupError> {
        let spec = spec.into();
        let bad = |reason: String| GroupError::InvalidTable {
            spec: spec.clone(),
            reason,
        };
        if order == 0 {
            return Err(bad("empty set".into()));
        }
        let mut mul = Vec::with_capacity(order * order);
        for a in 0..order {
            for b in 0..order {
                let c = op(a, b);
                if c >= order {
                    return Err(bad(format!("{a}*{b} = {c} is out of range")));
                }
                mul.push(c as Elem);
            }
        }
        let identity = (0..order)
            .find(|&e| (0..order).all(|x| mul[e * order + x] as usize == x && mul[x * order + e] as usize == x))
            .ok_or_else(|| bad("no two-sided identity".into()))? as Elem;
        let mut inv = Vec::with_capacity(order);
        for a in 0..order {
            let b = (0..order)
                .find(|&b| mul[a * order + b] == identity)
                .ok_or_else(|| bad(format!("element {a} has no right inverse")))?;
            if mul[b * order + a] != identity {
                return Err(bad(format!("inverse of {a} is not two-sided")));
            }
            inv.push(b as Elem);
        }
        if let Some(&g) = generators.iter().find(|&&g| g as usize >= order) {
            return Err(bad(format!("generator {g} is out of range")));
        }
        let table = GroupTable {
            order,
            mul,
            identity,
            inv,
            spec,
            generators,
        };
        table.check_generators()?;
        table.check_associative()?;
        Ok(table)
    }

    fn check_generators(&self) -> Result<(), GroupError> {
        let mut seen = vec![false; self.order];
        let mut stack = vec![self.identity];
        seen[self.identity as usize] = true;
        let mut count = 1;
        while let Some(a) = stack.pop() {
            for &g in &self.generators {
                let c = self.mul(a, g);
                if !seen[c as usize] {
                    seen[c as usize] = true;
                    count += 1;
                    stack.push(c);
                }
            }
        }
        if count != self.order {
            return Err(GroupError::InvalidTable {
                spec: self.spec.clone(),
                reason: format!("generators reach {count} of {} elements", self.order),
            });
        }
        Ok(())
    }

    // Light's test: it suffices to check (x g) y = x (g y) for g in a
    // generating set, which makes the check exact at O(n^2 |gens|).
    fn check_associative(&self) -> Result<(), GroupError> {
        for &g in &self.generators {
            for x in 0..self.order as Elem {
                let xg = self.mul(x, g);
                for y in 0..self.order as Elem {
                    if self.mul(xg, y) != self.mul(x, self.mul(g, y)) {
                        return Err(GroupError::InvalidTable {
                            spec: self.spec.clone(),
                            reason: format!("({x}*{g})*{y} != {x}*({g}*{y})"),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> Elem {
        self.identity
    }

    /// The canonical spec string naming this group.
    pub fn spec(&self) -> &str {
        &self.spec
    }

    pub fn generators(&self) -> &[Elem] {
        &self.generators
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.order as Elem
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mul[a as usize * self.order + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inv[a as usize]
    }

    /// `g h g^-1`
    #[inline]
    pub fn conjugate(&self, g: Elem, h: Elem) -> Elem {
        self.mul(self.mul(g, h), self.inv(g))
    }

    pub fn pow(&self, g: Elem, e: usize) -> Elem {
        (0..e).fold(self.identity, |acc, _| self.mul(acc, g))
    }

    pub fn element_order(&self, g: Elem) -> usize {
        let mut t = 1;
        let mut x = g;
        while x != self.identity {
            x = self.mul(x, g);
            t += 1;
        }
        t
    }

    /// Sorted list of element orders, one entry per element.
    pub fn order_multiset(&self) -> Vec<usize> {
        let mut orders: Vec<usize> = self.elements().map(|g| self.element_order(g)).collect();
        orders.sort_unstable();
        orders
    }

    pub fn is_abelian(&self) -> bool {
        self.generators.iter().enumerate().all(|(i, &a)| {
            self.generators[i + 1..]
                .iter()
                .all(|&b| self.mul(a, b) == self.mul(b, a))
        })
    }
}

/// The cyclic group `Z_m`.
pub fn cyclic(m: u64, limits: &Limits) -> Result<GroupTable, GroupError> {
    if m == 0 {
        return Err(invalid("Z", "order must be at least 1"));
    }
    let m = check_order(m, limits)?;
    let gens = if m > 1 { vec![1] } else { vec![] };
    GroupTable::from_fn(format!("Z{m}"), m, gens, |a, b| (a + b) % m)
}

/// The dihedral group of the given order `2m`, with rotations `x^a` and
/// reflections `x^a y`.
pub fn dihedral(order: u64, limits: &Limits) -> Result<GroupTable, GroupError> {
    if order < 4 || !order.is_multiple_of(2) {
        return Err(invalid("D", format!("order {order} must be even and at least 4")));
    }
    let order = check_order(order, limits)?;
    let m = order / 2;
    GroupTable::from_fn(format!("D{order}"), order, vec![1, m as Elem], |i, j| {
        let (a, b) = (i % m, i / m);
        let (c, d) = (j % m, j / m);
        let rot = if b == 0 { (a + c) % m } else { (a + m - c) % m };
        ((b + d) % 2) * m + rot
    })
}

fn power_of_two_order(family: &'static str, order: u64, min_exp: u32) -> Result<u32, GroupError> {
    match log_exact(order, 2) {
        Some(n) if n >= min_exp => Ok(n),
        _ => Err(invalid(
            family,
            format!("order {order} must be 2^t with t >= {min_exp}"),
        )),
    }
}

/// The generalized quaternion (dicyclic) group of order `2^n`, `n >= 3`:
/// `x` of order `2^(n-1)`, `y^2 = x^(2^(n-2))`, `y^-1 x y = x^-1`.
pub fn generalized_quaternion(order: u64, limits: &Limits) -> Result<GroupTable, GroupError> {
    power_of_two_order("Q", order, 3)?;
    let order = check_order(order, limits)?;
    let m = order / 2;
    let half = m / 2;
    GroupTable::from_fn(format!("Q{order}"), order, vec![1, m as Elem], |i, j| {
        let (a, b) = (i % m, i / m);
        let (c, d) = (j % m, j / m);
        match (b, d) {
            (0, _) => d * m + (a + c) % m,
            // y x^c = x^-c y
            (_, 0) => m + (a + m - c) % m,
            // x^a y x^c y = x^(a-c) y^2 = x^(a-c+half)
            _ => (a + m - c + half) % m,
        }
    })
}

/// The quasidihedral group of order `2^n`, `n >= 4`:
/// `x` of order `2^(n-1)`, `y^2 = 1`, `y x y = x^(2^(n-2) - 1)`.
pub fn quasidihedral(order: u64, limits: &Limits) -> Result<GroupTable, GroupError> {
    power_of_two_order("SD", order, 4)?;
    check_order(order, limits)?;
    let m = order / 2;
    let mut g = semidirect_cyclic(m, 2, m / 2 - 1, limits)?;
    g.spec = format!("SD{order}");
    Ok(g)
}

/// `Z_m ⋊ Z_n` with `y x y^-1 = x^k`, so that
/// `(a, b)(a', b') = (a + a' k^b mod m, b + b' mod n)`.
pub fn semidirect_cyclic(m: u64, n: u64, k: u64, limits: &Limits) -> Result<GroupTable, GroupError> {
    if m == 0 || n == 0 {
        return Err(invalid("Zsd", "m and n must be at least 1"));
    }
    if gcd(k, m) != 1 {
        return Err(invalid("Zsd", format!("gcd({k}, {m}) = {} != 1", gcd(k, m))));
    }
    let kn = pow_mod(k, n, m);
    if m > 1 && kn != 1 {
        return Err(invalid(
            "Zsd",
            format!("{k}^{n} = {kn} (mod {m}), but k^n must be 1 (mod m)"),
        ));
    }
    let order = check_order(m.saturating_mul(n), limits)?;
    let (m, n) = (m as usize, n as usize);
    let kpow: Vec<usize> = (0..n).map(|b| pow_mod(k, b as u64, m as u64) as usize).collect();
    let mut gens = Vec::new();
    if m > 1 {
        gens.push(1);
    }
    if n > 1 {
        gens.push(m as Elem);
    }
    GroupTable::from_fn(format!("Zsd({m},{n},{k})"), order, gens, |i, j| {
        let (a, b) = (i % m, i / m);
        let (c, d) = (j % m, j / m);
        ((b + d) % n) * m + (a + c * kpow[b]) % m
    })
}

/// The modular `p`-group `M(p^n)` of order `p^n`.
pub fn modular(p: u64, n: u32, limits: &Limits) -> Result<GroupTable, GroupError> {
    if !is_prime(p) {
        return Err(invalid("M", format!("{p} is not prime")));
    }
    let min_n = if p == 2 { 4 } else { 3 };
    if n < min_n {
        return Err(invalid(
            "M",
            format!("n = {n} but n >= {min_n} is required when p = {p}"),
        ));
    }
    let order = p
        .checked_pow(n)
        .ok_or(GroupError::OrderBound { order: u64::MAX, bound: limits.max_order })?;
    check_order(order, limits)?;
    let m = order / p;
    let t = m / p;
    // y^-1 x y = x^(1+t) is y x y^-1 = x^(1-t) in the mirrored convention
    let mut g = semidirect_cyclic(m, p, m + 1 - t, limits)?;
    g.spec = format!("M({p},{n})");
    Ok(g)
}

/// `G x H` with `(g, h)` at index `g * |H| + h`.
pub fn direct_product(g: &GroupTable, h: &GroupTable, limits: &Limits) -> Result<GroupTable, GroupError> {
    let order = check_order((g.order as u64).saturating_mul(h.order as u64), limits)?;
    let w = h.order;
    let mut gens: Vec<Elem> = g
        .generators
        .iter()
        .map(|&a| (a as usize * w + h.identity as usize) as Elem)
        .collect();
    gens.extend(
        h.generators
            .iter()
            .map(|&b| (g.identity as usize * w + b as usize) as Elem),
    );
    GroupTable::from_fn(format!("{} x {}", g.spec, h.spec), order, gens, |i, j| {
        let a = g.mul((i / w) as Elem, (j / w) as Elem) as usize;
        let b = h.mul((i % w) as Elem, (j % w) as Elem) as usize;
        a * w + b
    })
}

/// Index of `(a, b)` inside `G x H` where `H` has order `right_order`.
pub fn product_index(a: Elem, b: Elem, right_order: usize) -> Elem {
    (a as usize * right_order + b as usize) as Elem
}

/// The alternating group on four points; elements are the even permutations
/// of `0..4` in lexicographic order, composed right to left.
pub fn alternating4() -> GroupTable {
    let perms = even_permutations_of_four();
    let index = |p: &[usize; 4]| perms.iter().position(|q| q == p).expect("closed");
    let three_cycle = index(&[1, 2, 0, 3]) as Elem;
    let double_transposition = index(&[1, 0, 3, 2]) as Elem;
    GroupTable::from_fn("A4", 12, vec![three_cycle, double_transposition], |i, j| {
        let (p, q) = (&perms[i], &perms[j]);
        index(&[p[q[0]], p[q[1]], p[q[2]], p[q[3]]])
    })
    .expect("A4 is a group")
}

fn even_permutations_of_four() -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(12);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    let distinct = (0..4).all(|i| (i + 1..4).all(|j| p[i] != p[j]));
                    let inversions = (0..4)
                        .flat_map(|i| (i + 1..4).map(move |j| (i, j)))
                        .filter(|&(i, j)| p[i] > p[j])
                        .count();
                    if distinct && inversions % 2 == 0 {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lim() -> Limits {
        Limits::default()
    }

    fn exhaustively_associative(g: &GroupTable) -> bool {
        g.elements().all(|a| {
            g.elements()
                .all(|b| g.elements().all(|c| g.mul(g.mul(a, b), c) == g.mul(a, g.mul(b, c))))
        })
    }

    #[test]
    fn cyclic_groups() {
        let z1 = cyclic(1, &lim()).unwrap();
        assert_eq!(z1.order(), 1);
        assert_eq!(cyclic(6, &lim()).unwrap().order_multiset(), vec![1, 2, 3, 3, 6, 6]);
        let z12 = cyclic(12, &lim()).unwrap();
        assert_eq!(z12.element_order(1), 12);
        assert_eq!(z12.element_order(z12.identity()), 1);
        assert!(cyclic(0, &lim()).is_err());
    }

    #[test]
    fn dihedral_relations() {
        let d8 = dihedral(8, &lim()).unwrap();
        let (x, y) = (1, 4);
        assert_eq!(d8.element_order(x), 4);
        assert_eq!(d8.element_order(y), 2);
        // y x y = x^-1
        assert_eq!(d8.mul(d8.mul(y, x), y), d8.inv(x));
        assert!(dihedral(6, &lim()).is_ok());
        assert!(dihedral(7, &lim()).is_err());
        assert!(dihedral(2, &lim()).is_err());
        assert!(dihedral(4, &lim()).unwrap().is_abelian());
    }

    #[test]
    fn quaternion_relations() {
        let q16 = generalized_quaternion(16, &lim()).unwrap();
        let (x, y) = (1, 8);
        assert_eq!(q16.element_order(x), 8);
        assert_eq!(q16.element_order(y), 4);
        assert_eq!(q16.pow(y, 2), q16.pow(x, 4));
        assert_eq!(q16.mul(q16.mul(q16.inv(y), x), y), q16.inv(x));
        // a single involution
        assert_eq!(q16.order_multiset().iter().filter(|&&o| o == 2).count(), 1);
        assert!(generalized_quaternion(4, &lim()).is_err());
        assert!(generalized_quaternion(24, &lim()).is_err());
    }

    #[test]
    fn quasidihedral_relations() {
        let s16 = quasidihedral(16, &lim()).unwrap();
        let (x, y) = (1, 8);
        assert_eq!(s16.spec(), "SD16");
        assert_eq!(s16.element_order(y), 2);
        assert_eq!(s16.mul(s16.mul(y, x), y), s16.pow(x, 3));
        assert!(quasidihedral(8, &lim()).is_err());
    }

    #[test]
    fn semidirect_constraints() {
        let g = semidirect_cyclic(7, 3, 2, &lim()).unwrap();
        assert_eq!(g.order(), 21);
        let err = semidirect_cyclic(7, 3, 3, &lim()).unwrap_err();
        assert!(err.to_string().contains("3^3 = 6 (mod 7)"), "{err}");
        assert!(semidirect_cyclic(6, 2, 3, &lim()).is_err());
        assert!(semidirect_cyclic(5, 4, 1, &lim()).unwrap().is_abelian());
    }

    #[test]
    fn semidirect_inverse_action_gives_same_order_multiset() {
        for (m, n, k, kinv) in [(7, 3, 2, 4), (9, 3, 4, 7), (13, 3, 3, 9), (5, 4, 2, 3)] {
            let a = semidirect_cyclic(m, n, k, &lim()).unwrap();
            let b = semidirect_cyclic(m, n, kinv, &lim()).unwrap();
            assert_eq!(a.order_multiset(), b.order_multiset());
        }
    }

    #[test]
    fn modular_groups() {
        let m27 = modular(3, 3, &lim()).unwrap();
        assert_eq!(m27.order(), 27);
        assert_eq!(m27.spec(), "M(3,3)");
        let (x, y) = (1, 9);
        // y^-1 x y = x^4
        assert_eq!(m27.mul(m27.mul(m27.inv(y), x), y), m27.pow(x, 4));
        assert_eq!(modular(2, 4, &lim()).unwrap().order(), 16);
        assert!(modular(2, 3, &lim()).is_err());
        assert!(modular(4, 3, &lim()).is_err());
    }

    #[test]
    fn products() {
        let z2 = cyclic(2, &lim()).unwrap();
        let z3 = cyclic(3, &lim()).unwrap();
        let p = direct_product(&z2, &z3, &lim()).unwrap();
        assert_eq!(p.spec(), "Z2 x Z3");
        assert_eq!(p.order_multiset(), cyclic(6, &lim()).unwrap().order_multiset());
        let d8 = dihedral(8, &lim()).unwrap();
        assert_eq!(direct_product(&d8, &z3, &lim()).unwrap().order(), 24);
        let q8 = generalized_quaternion(8, &lim()).unwrap();
        let z1 = cyclic(1, &lim()).unwrap();
        assert_eq!(
            direct_product(&q8, &z1, &lim()).unwrap().order_multiset(),
            q8.order_multiset()
        );
        let small = Limits { max_order: 20, ..lim() };
        assert!(matches!(
            direct_product(&d8, &z3, &small),
            Err(GroupError::OrderBound { order: 24, bound: 20 })
        ));
    }

    #[test]
    fn a4() {
        let g = alternating4();
        assert_eq!(g.order(), 12);
        assert_eq!(g.identity(), 0);
        assert_eq!(g.order_multiset(), vec![1, 2, 2, 2, 3, 3, 3, 3, 3, 3, 3, 3]);
    }

    #[test]
    fn light_test_agrees_with_exhaustive_check() {
        for g in [
            alternating4(),
            dihedral(16, &lim()).unwrap(),
            generalized_quaternion(16, &lim()).unwrap(),
            quasidihedral(16, &lim()).unwrap(),
            modular(3, 3, &lim()).unwrap(),
            semidirect_cyclic(7, 3, 2, &lim()).unwrap(),
        ] {
            assert!(exhaustively_associative(&g), "{}", g.spec());
        }
        // a non-associative loop must be rejected
        let err = GroupTable::from_fn("bad", 5, vec![1, 2], |a, b| {
            // the Latin square of a non-associative loop of order 5
            const T: [[usize; 5]; 5] = [
                [0, 1, 2, 3, 4],
                [1, 0, 3, 4, 2],
                [2, 4, 0, 1, 3],
                [3, 2, 4, 0, 1],
                [4, 3, 1, 2, 0],
            ];
            T[a][b]
        });
        assert!(matches!(err, Err(GroupError::InvalidTable { .. })), "{err:?}");
    }
}

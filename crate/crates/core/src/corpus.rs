//! Built-in group corpora for scans and property checks.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::primes::{gcd, is_prime, pow_mod};
use crate::spec::{Atom, GroupExpr};

/// Seed of the random part of [`property_corpus`].
pub const PROPERTY_SEED: u64 = 0x5eed_c5d0;

/// The subgroup `<k>` of the units mod `m`, as a sorted list.
fn unit_span(k: u64, m: u64) -> Vec<u64> {
    let mut span = vec![1 % m];
    let mut x = k % m;
    while x != 1 % m {
        span.push(x);
        x = x * k % m;
    }
    span.sort_unstable();
    span
}

/// Every family atom of order at most `max_order`. `Zsd(m,n,k)` appears
/// once per nontrivial cyclic subgroup `<k>` of units with `k^n = 1`,
/// labelled by its smallest generator. `Zsd(m,2,m-1)` is left out because it
/// is the same table as `D(2m)`.
pub fn atoms(max_order: u64) -> Vec<Atom> {
    let mut out = Vec::new();
    out.extend((1..=max_order).map(Atom::Cyclic));
    out.extend((4..=max_order).step_by(2).map(Atom::Dihedral));
    let powers = |min: u32| (min..63).map(|t| 1u64 << t).take_while(move |&o| o <= max_order);
    out.extend(powers(3).map(Atom::Quaternion));
    out.extend(powers(4).map(Atom::Quasidihedral));
    for p in (2..=max_order).filter(|&p| is_prime(p)) {
        let min = if p == 2 { 4 } else { 3 };
        for n in min.. {
            match p.checked_pow(n) {
                Some(o) if o <= max_order => out.push(Atom::Modular { p, n }),
                _ => break,
            }
        }
    }
    if max_order >= 12 {
        out.push(Atom::A4);
    }
    for m in 3..=max_order / 2 {
        for n in 2..=max_order / m {
            let mut seen = BTreeSet::new();
            for k in 2..m {
                if n == 2 && k == m - 1 {
                    continue;
                }
                if gcd(k, m) == 1 && pow_mod(k, n, m) == 1 && seen.insert(unit_span(k, m)) {
                    out.push(Atom::SemidirectCyclic { m, n, k });
                }
            }
        }
    }
    out
}

/// Atoms plus all pairwise products of nontrivial atoms, of order at most
/// `max_order`, as canonical specs sorted by order then spec.
pub fn builtin_corpus(max_order: u64) -> Vec<String> {
    let atoms = atoms(max_order);
    let mut exprs: Vec<GroupExpr> = atoms.iter().map(|&a| GroupExpr::atom(a)).collect();
    // noncyclic factors first, so products read like "D8 x Z3"
    let mut nontrivial: Vec<Atom> = atoms.into_iter().filter(|a| a.order() > 1).collect();
    nontrivial.sort_by_key(|a| matches!(a, Atom::Cyclic(_)));
    for (i, &a) in nontrivial.iter().enumerate() {
        for &b in &nontrivial[i..] {
            if a.order().saturating_mul(b.order()) <= max_order {
                exprs.push(GroupExpr::product(vec![a, b]));
            }
        }
    }
    exprs.sort_by_key(|e| (e.order(), e.to_string()));
    exprs.iter().map(|e| e.to_string()).collect()
}

const PROPERTY_FIXED: &[&str] = &[
    "Z1", "Z12", "Z30", "D6", "D8", "D10", "D12", "D16", "D18", "D32", "D64", "D128", "Q8", "Q16",
    "Q32", "Q64", "Q128", "SD16", "SD32", "SD64", "SD128", "M(2,4)", "M(2,5)", "M(3,3)", "A4",
    "Zsd(7,3,2)", "Zsd(13,3,3)", "Zsd(13,9,3)", "Zsd(5,4,2)", "Zsd(9,2,8)", "Zsd(4,4,3)",
    "Zsd(8,4,5)", "Zsd(3,2,2) x Z3", "Zsd(3,2,2) x Z5", "D8 x Z3", "Q8 x Z3", "M(3,3) x Z2",
];

/// A pair of atoms with coprime orders.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoprimePair {
    pub left: Atom,
    pub right: Atom,
}

impl CoprimePair {
    pub fn spec(&self) -> String {
        GroupExpr::product(vec![self.left, self.right]).to_string()
    }
}

/// `count` distinct products `A x B` with `gcd(|A|, |B|) = 1`, at least one
/// nonabelian factor (listed first), and order at most `max_order`, drawn with a
/// seeded generator.
pub fn random_coprime_products(seed: u64, count: usize, max_order: u64) -> Vec<CoprimePair> {
    let atoms: Vec<Atom> = atoms(max_order / 2)
        .into_iter()
        .filter(|a| a.order() > 1)
        .collect();
    let nonabelian = |a: &Atom| !matches!(a, Atom::Cyclic(_) | Atom::Dihedral(4));
    let mut pairs = Vec::new();
    for (i, &a) in atoms.iter().enumerate() {
        for &b in &atoms[i + 1..] {
            let (oa, ob) = (a.order(), b.order());
            if gcd(oa, ob) == 1 && oa * ob <= max_order && (nonabelian(&a) || nonabelian(&b)) {
                let (left, right) = if nonabelian(&a) { (a, b) } else { (b, a) };
                pairs.push(CoprimePair { left, right });
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    pairs.shuffle(&mut rng);
    pairs.truncate(count);
    pairs
}

/// The fixed property corpus (all families, orders up to 128) followed by
/// ten seeded random coprime products.
pub fn property_corpus() -> Vec<String> {
    let mut out: Vec<String> = PROPERTY_FIXED.iter().map(|s| s.to_string()).collect();
    out.extend(random_coprime_products(PROPERTY_SEED, 10, 128).iter().map(CoprimePair::spec));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec;
    use crate::Limits;

    #[test]
    fn atoms_are_valid_and_bounded() {
        for a in atoms(64) {
            a.validate().unwrap();
            assert!(a.order() <= 64);
        }
    }

    #[test]
    fn semidirect_dedup_by_unit_span() {
        let z7: Vec<_> = atoms(21)
            .into_iter()
            .filter(|a| matches!(a, Atom::SemidirectCyclic { m: 7, n: 3, .. }))
            .collect();
        // 2 and 4 span the same subgroup of order 3
        assert_eq!(z7, vec![Atom::SemidirectCyclic { m: 7, n: 3, k: 2 }]);
    }

    #[test]
    fn corpus_contents() {
        let c = builtin_corpus(24);
        for s in ["Z1", "Z12", "D8", "Q8", "Q16", "SD16", "A4", "M(2,4)", "Zsd(7,3,2)", "D8 x Z3", "Z2 x Z2"] {
            assert!(c.contains(&s.to_string()), "{s}");
        }
        assert!(!c.contains(&"Q32".to_string()));
        let unique: BTreeSet<_> = c.iter().collect();
        assert_eq!(unique.len(), c.len());
        for s in &c {
            assert_eq!(&spec::parse(s).unwrap().to_string(), s);
        }
    }

    #[test]
    fn property_corpus_shape() {
        let c = property_corpus();
        assert!(c.len() >= 40);
        let limits = Limits::default();
        for s in &c {
            let e = spec::parse(s).unwrap();
            assert!(e.order() <= 128, "{s}");
            spec::build(&e, &limits).unwrap();
        }
        let random = random_coprime_products(PROPERTY_SEED, 10, 128);
        assert_eq!(random.len(), 10);
        for p in &random {
            assert_eq!(gcd(p.left.order(), p.right.order()), 1);
        }
        assert_eq!(random, random_coprime_products(PROPERTY_SEED, 10, 128));
    }
}

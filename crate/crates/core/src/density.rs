//! Finite witnesses that relative degrees approach any rational in `[0, 1]`.
//!
//! A witness for `a/b` with `0 < a < b` is a coprime direct product of
//! `Z_p ⋊ Z_{q^n}` factors, paired with the product `H` of their `Z_{q^n}`
//! subgroups. Term `j` has exponent `n_j = a + j - 1`, so the limits
//! `n_j / (n_j + 1)` telescope to `a/b`.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::degrees::CyclicDegrees;
use crate::formulas::{csd_quaternion, g1_family_formulas};
use crate::group::{self, Elem, GroupError, GroupTable, Limits};
use crate::lattice::{generated_subgroup, Subgroup};
use crate::primes::{has_order, is_prime, smallest_unit_of_order};
use crate::Degree;

pub const DEFAULT_PRIME_HORIZON: u64 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DensityError {
    #[error("no prime p = 1 (mod {q}) in [{lo}, {horizon}]")]
    Horizon { q: u64, lo: u64, horizon: u64 },
    #[error("{q} does not divide {p} - 1")]
    Divisibility { q: u64, p: u64 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid target: {0}")]
    Target(String),
    #[error("witness check failed: {0}")]
    Check(String),
}

mod decimal {
    use std::fmt::Display;
    use std::str::FromStr;

    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<T: Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, T, D>(d: D) -> Result<T, D::Error>
    where
        T: FromStr,
        T::Err: Display,
        D: Deserializer<'de>,
    {
        String::deserialize(d)?.parse().map_err(de::Error::custom)
    }
}

/// Smallest prime `p >= lo` with `p = 1 (mod q)`, searched up to `horizon`.
pub fn next_prime_cong1(q: u64, lo: u64, horizon: u64) -> Result<u64, DensityError> {
    next_prime_cong1_avoiding(q, lo, horizon, &HashSet::new())
}

fn next_prime_cong1_avoiding(
    q: u64,
    lo: u64,
    horizon: u64,
    used: &HashSet<u64>,
) -> Result<u64, DensityError> {
    if !is_prime(q) {
        return Err(DensityError::NotPrime(q));
    }
    let lo = lo.max(2);
    let horizon_err = || DensityError::Horizon { q, lo, horizon };
    // first candidate >= lo in the class 1 mod q
    let mut c = lo.checked_add((q + 1 - lo % q) % q).ok_or_else(horizon_err)?;
    while c <= horizon {
        if c != q && !used.contains(&c) && is_prime(c) {
            return Ok(c);
        }
        c = c.checked_add(q).ok_or_else(horizon_err)?;
    }
    Err(horizon_err())
}

/// `(csd(Z_{q^n}, Z_p ⋊ Z_{q^n}), n/(n+1))` for `q | p - 1`.
pub fn limit_term(q: u64, n: u32, p: u64) -> Result<(Degree, Degree), DensityError> {
    if !is_prime(p) {
        return Err(DensityError::NotPrime(p));
    }
    if !is_prime(q) {
        return Err(DensityError::NotPrime(q));
    }
    if !(p - 1).is_multiple_of(q) {
        return Err(DensityError::Divisibility { q, p });
    }
    let value = g1_family_formulas(p, q, n)
        .map_err(|e| DensityError::Target(e.to_string()))?
        .remove(0)
        .value;
    Ok((value, Degree::new(n as u64, n as u64 + 1)))
}

/// `term - limit = (2n+1) / ((n+1)(2n+p))`.
pub fn term_gap(n: u32, p: u64) -> Degree {
    let n = BigInt::from(n);
    Degree::new(2 * &n + 1, (&n + 1) * (2 * &n + BigInt::from(p)))
}

/// `csd(Q_{2^n})` for `n = 3..=max_n`.
pub fn quaternion_tail(max_n: u32) -> Result<Vec<(u32, Degree)>, DensityError> {
    if max_n < 3 {
        return Err(DensityError::Target(format!("max_n = {max_n} must be at least 3")));
    }
    Ok((3..=max_n)
        .map(|n| (n, csd_quaternion(n).expect("n >= 3")))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessTerm {
    #[serde(with = "decimal")]
    pub q: u64,
    #[serde(with = "decimal")]
    pub n: u32,
    #[serde(with = "decimal")]
    pub p: u64,
    /// `y x y^-1 = x^k` in the concrete factor `Zsd(p, q^n, k)`.
    #[serde(with = "decimal")]
    pub k: u64,
    pub value: Degree,
    pub limit: Degree,
}

impl WitnessTerm {
    fn new(q: u64, n: u32, p: u64) -> Result<Self, DensityError> {
        let (value, limit) = limit_term(q, n, p)?;
        let k = smallest_unit_of_order(q, p).ok_or(DensityError::Divisibility { q, p })?;
        Ok(WitnessTerm { q, n, p, k, value, limit })
    }

    /// The spec of the concrete factor.
    pub fn spec(&self) -> String {
        format!("Zsd({},{},{})", self.p, self.q.pow(self.n), self.k)
    }

    pub fn order(&self) -> u64 {
        self.p.saturating_mul(self.q.saturating_pow(self.n))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Construction {
    /// `a = b`: any Iwasawa group paired with itself.
    Iwasawa,
    /// `a = 0`: `Q_{2^n}` paired with itself.
    QuaternionTail {
        #[serde(with = "decimal")]
        n: u32,
    },
    /// `0 < a < b`: the coprime product of the terms.
    Product,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApproachWitness {
    #[serde(with = "decimal")]
    pub a: u64,
    #[serde(with = "decimal")]
    pub b: u64,
    pub target: Degree,
    pub tolerance: Degree,
    pub construction: Construction,
    pub terms: Vec<WitnessTerm>,
    pub value: Degree,
    pub error: Degree,
}

/// Least integer strictly above `r`, when it fits.
fn strictly_above(r: &BigRational) -> Option<u64> {
    (r.floor().to_integer() + BigInt::from(1)).to_u64()
}

/// The first `count` primes congruent to 3 modulo 4.
fn primes_3_mod_4(count: usize) -> Vec<u64> {
    (3u64..).step_by(4).filter(|&x| is_prime(x)).take(count).collect()
}

/// Build a witness for `a/b` within `tol`, searching primes up to `horizon`.
pub fn approach_rational(a: u64, b: u64, tol: &Degree, horizon: u64) -> Result<ApproachWitness, DensityError> {
    if b == 0 || a > b {
        return Err(DensityError::Target(format!("{a}/{b} is not in [0, 1]")));
    }
    if *tol <= Degree::zero() {
        return Err(DensityError::Target("tolerance must be positive".into()));
    }
    if a == b {
        return ApproachWitness::assemble(a, b, tol, Construction::Iwasawa, vec![]);
    }
    if a == 0 {
        let n = (3u32..)
            .take(200)
            .find(|&n| csd_quaternion(n).expect("n >= 3") < *tol)
            .ok_or_else(|| DensityError::Target(format!("tolerance {tol} is below reach")))?;
        return ApproachWitness::assemble(a, b, tol, Construction::QuaternionTail { n }, vec![]);
    }
    let count = (b - a) as usize;
    let qs = primes_3_mod_4(count);
    let mut used: HashSet<u64> = qs.iter().copied().collect();
    let per_term = tol.as_ratio() / BigRational::from_integer(BigInt::from(count));
    let mut terms = Vec::with_capacity(count);
    for (j, &q) in qs.iter().enumerate() {
        let n = (a + j as u64) as u32;
        // gap < t  <=>  p > (2n+1) / ((n+1) t) - 2n
        let nb = BigInt::from(n);
        let bound = BigRational::new(2 * &nb + 1, &nb + 1) / &per_term
            - BigRational::from_integer(2 * &nb);
        let lo = match strictly_above(&bound) {
            Some(lo) if lo <= horizon => lo,
            _ => return Err(DensityError::Horizon { q, lo: u64::MAX, horizon }),
        };
        let p = next_prime_cong1_avoiding(q, lo, horizon, &used)?;
        used.insert(p);
        terms.push(WitnessTerm::new(q, n, p)?);
    }
    ApproachWitness::assemble(a, b, tol, Construction::Product, terms)
}

impl ApproachWitness {
    fn assemble(
        a: u64,
        b: u64,
        tol: &Degree,
        construction: Construction,
        terms: Vec<WitnessTerm>,
    ) -> Result<Self, DensityError> {
        let target = Degree::new(a, b);
        let value = match construction {
            Construction::Iwasawa => Degree::one(),
            Construction::QuaternionTail { n } => csd_quaternion(n).expect("n >= 3"),
            Construction::Product => terms.iter().map(|t| t.value.clone()).product(),
        };
        let error = value.abs_diff(&target);
        let w = ApproachWitness {
            a,
            b,
            target,
            tolerance: tol.clone(),
            construction,
            terms,
            value,
            error,
        };
        w.check()?;
        Ok(w)
    }

    /// A product witness from explicit `(q, n, p)` terms, for small
    /// instances that can be built as concrete groups.
    pub fn from_terms(a: u64, b: u64, tol: &Degree, terms: &[(u64, u32, u64)]) -> Result<Self, DensityError> {
        let terms = terms
            .iter()
            .map(|&(q, n, p)| WitnessTerm::new(q, n, p))
            .collect::<Result<Vec<_>, _>>()?;
        Self::assemble(a, b, tol, Construction::Product, terms)
    }

    /// Recheck every invariant from the stored fields alone.
    pub fn check(&self) -> Result<(), DensityError> {
        let fail = |m: String| Err(DensityError::Check(m));
        if self.target != Degree::new(self.a, self.b) {
            return fail(format!("target {} is not {}/{}", self.target, self.a, self.b));
        }
        let mut seen = HashSet::new();
        for t in &self.terms {
            for r in [t.q, t.p] {
                if !is_prime(r) {
                    return fail(format!("{r} is not prime"));
                }
                if !seen.insert(r) {
                    return fail(format!("prime {r} is repeated"));
                }
            }
        }
        for (j, t) in self.terms.iter().enumerate() {
            if (t.p - 1) % t.q != 0 {
                return fail(format!("{} is not 1 mod {}", t.p, t.q));
            }
            if t.n as u64 != self.a + j as u64 {
                return fail(format!("term {} has n = {} but a + j - 1 = {}", j + 1, t.n, self.a + j as u64));
            }
            if !has_order(t.k, t.q, t.p) {
                return fail(format!("{} does not have order {} mod {}", t.k, t.q, t.p));
            }
            let (value, limit) = limit_term(t.q, t.n, t.p)?;
            if value != t.value || limit != t.limit {
                return fail(format!("term {} values are stale", j + 1));
            }
        }
        if self.construction == Construction::Product {
            if self.terms.len() as u64 != self.b - self.a {
                return fail(format!("{} terms for b - a = {}", self.terms.len(), self.b - self.a));
            }
            let limits: Degree = self.terms.iter().map(|t| t.limit.clone()).product();
            if limits != self.target {
                return fail(format!("limits multiply to {limits}, not {}", self.target));
            }
            let value: Degree = self.terms.iter().map(|t| t.value.clone()).product();
            if value != self.value {
                return fail(format!("terms multiply to {value}, not {}", self.value));
            }
        } else if !self.terms.is_empty() {
            return fail("only product witnesses carry terms".into());
        }
        if self.error != self.value.abs_diff(&self.target) {
            return fail(format!("error {} is not |{} - {}|", self.error, self.value, self.target));
        }
        if self.error >= self.tolerance {
            return fail(format!("error {} is not below {}", self.error, self.tolerance));
        }
        Ok(())
    }

    /// The concrete factors `Zsd(p_j, q_j^{n_j}, k_j)`.
    pub fn factors(&self, limits: &Limits) -> Result<Vec<GroupTable>, GroupError> {
        self.terms
            .iter()
            .map(|t| group::semidirect_cyclic(t.p, t.q.pow(t.n), t.k, limits))
            .collect()
    }

    /// `csd(Z_{q^n}, factor)` by enumeration, one per term.
    pub fn oracle_terms(&self, limits: &Limits) -> Result<Vec<Degree>, GroupError> {
        Ok(self
            .factors(limits)?
            .iter()
            .zip(&self.terms)
            .map(|(g, t)| {
                let h = generated_subgroup(g, &[t.p as Elem]);
                CyclicDegrees::new(g).csd_relative(&h)
            })
            .collect())
    }

    /// The direct product of the factors with the product of their
    /// `Z_{q^n}` subgroups.
    pub fn product_group(&self, limits: &Limits) -> Result<(GroupTable, Subgroup), GroupError> {
        let factors = self.factors(limits)?;
        let mut iter = factors.iter();
        let first = iter.next().ok_or(GroupError::InvalidTable {
            spec: String::new(),
            reason: "empty product".into(),
        })?;
        let mut g = first.clone();
        for f in iter {
            g = group::direct_product(&g, f, limits)?;
        }
        let mut seeds = Vec::new();
        let mut stride: usize = factors.iter().map(|f| f.order()).product();
        for (f, t) in factors.iter().zip(&self.terms) {
            stride /= f.order();
            seeds.push((t.p as usize * stride) as Elem);
        }
        let h = generated_subgroup(&g, &seeds);
        Ok((g, h))
    }
}

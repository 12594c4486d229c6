//! The group-spec language.
//!
//! ```text
//! expr := atom { "x" atom }
//! atom := "Z" nat | "D" nat | "Q" nat | "SD" nat | "A4"
//!       | "M(" nat "," nat ")" | "Zsd(" nat "," nat "," nat ")"
//! ```
//!
//! Whitespace between tokens is ignored. `D`, `Q` and `SD` take the group
//! order; `M(p,n)` takes a prime and an exponent; `Zsd(m,n,k)` is
//! `Z_m ⋊ Z_n` with `y x y^-1 = x^k`. Products are left-associative and the
//! canonical rendering (`Display`) is the cache key for a group.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::group::{self, GroupError, GroupTable, Limits};
use crate::primes::{gcd, is_prime, log_exact, pow_mod};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Atom {
    Cyclic(u64),
    Dihedral(u64),
    Quaternion(u64),
    Quasidihedral(u64),
    Modular { p: u64, n: u32 },
    SemidirectCyclic { m: u64, n: u64, k: u64 },
    A4,
}

impl Atom {
    /// Checks the constructor preconditions, naming the violated condition.
    pub fn validate(&self) -> Result<(), String> {
        match *self {
            Atom::Cyclic(0) => Err("Z order must be at least 1".into()),
            Atom::Dihedral(o) if o < 4 || o % 2 == 1 => {
                Err(format!("D order must be even and at least 4, got {o}"))
            }
            Atom::Quaternion(o) if !matches!(log_exact(o, 2), Some(t) if t >= 3) => {
                Err(format!("Q order must be 2^t with t >= 3, got {o}"))
            }
            Atom::Quasidihedral(o) if !matches!(log_exact(o, 2), Some(t) if t >= 4) => {
                Err(format!("SD order must be 2^t with t >= 4, got {o}"))
            }
            Atom::Modular { p, .. } if !is_prime(p) => Err(format!("M(p,n) needs p prime, got {p}")),
            Atom::Modular { p, n } if n < if p == 2 { 4 } else { 3 } => Err(format!(
                "M(p,n) needs n >= {} for p = {p}, got {n}",
                if p == 2 { 4 } else { 3 }
            )),
            Atom::SemidirectCyclic { m, n, .. } if m == 0 || n == 0 => {
                Err("Zsd(m,n,k) needs m >= 1 and n >= 1".into())
            }
            Atom::SemidirectCyclic { m, k, .. } if gcd(k, m) != 1 => {
                Err(format!("Zsd(m,n,k) needs gcd(k,m) = 1, but gcd({k},{m}) = {}", gcd(k, m)))
            }
            Atom::SemidirectCyclic { m, n, k } if m > 1 && pow_mod(k, n, m) != 1 => Err(format!(
                "Zsd(m,n,k) needs k^n ≡ 1 (mod m), but {k}^{n} ≡ {} (mod {m})",
                pow_mod(k, n, m)
            )),
            _ => Ok(()),
        }
    }

    /// Group order, saturating.
    pub fn order(&self) -> u64 {
        match *self {
            Atom::Cyclic(o) | Atom::Dihedral(o) | Atom::Quaternion(o) | Atom::Quasidihedral(o) => o,
            Atom::Modular { p, n } => p.checked_pow(n).unwrap_or(u64::MAX),
            Atom::SemidirectCyclic { m, n, .. } => m.saturating_mul(n),
            Atom::A4 => 12,
        }
    }

    pub fn build(&self, limits: &Limits) -> Result<GroupTable, GroupError> {
        match *self {
            Atom::Cyclic(m) => group::cyclic(m, limits),
            Atom::Dihedral(o) => group::dihedral(o, limits),
            Atom::Quaternion(o) => group::generalized_quaternion(o, limits),
            Atom::Quasidihedral(o) => group::quasidihedral(o, limits),
            Atom::Modular { p, n } => group::modular(p, n, limits),
            Atom::SemidirectCyclic { m, n, k } => group::semidirect_cyclic(m, n, k, limits),
            Atom::A4 => Ok(group::alternating4()),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Cyclic(m) => write!(f, "Z{m}"),
            Atom::Dihedral(o) => write!(f, "D{o}"),
            Atom::Quaternion(o) => write!(f, "Q{o}"),
            Atom::Quasidihedral(o) => write!(f, "SD{o}"),
            Atom::Modular { p, n } => write!(f, "M({p},{n})"),
            Atom::SemidirectCyclic { m, n, k } => write!(f, "Zsd({m},{n},{k})"),
            Atom::A4 => write!(f, "A4"),
        }
    }
}

/// A parsed group spec: a left-associated direct product of atoms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupExpr {
    factors: Vec<Atom>,
}

impl GroupExpr {
    /// Panics if `factors` is empty.
    pub fn product(factors: Vec<Atom>) -> Self {
        assert!(!factors.is_empty(), "a group expression needs at least one atom");
        GroupExpr { factors }
    }

    pub fn atom(a: Atom) -> Self {
        GroupExpr { factors: vec![a] }
    }

    pub fn factors(&self) -> &[Atom] {
        &self.factors
    }

    pub fn order(&self) -> u64 {
        self.factors.iter().fold(1u64, |acc, a| acc.saturating_mul(a.order()))
    }

    pub fn validate(&self) -> Result<(), String> {
        self.factors.iter().try_for_each(Atom::validate)
    }
}

impl fmt::Display for GroupExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str(" x ")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("invalid parameters at byte {offset}: {message}")]
    Constraint { offset: usize, message: String },
}

impl SpecError {
    pub fn offset(&self) -> usize {
        match self {
            SpecError::Syntax { offset, .. } | SpecError::Constraint { offset, .. } => *offset,
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn syntax<T>(&self, message: impl Into<String>) -> Result<T, SpecError> {
        Err(SpecError::Syntax {
            offset: self.pos,
            message: message.into(),
        })
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<(), SpecError> {
        if self.eat(token) {
            Ok(())
        } else {
            self.syntax(format!("expected {token:?}"))
        }
    }

    fn nat(&mut self) -> Result<u64, SpecError> {
        self.skip_ws();
        let digits = self.rest().bytes().take_while(u8::is_ascii_digit).count();
        if digits == 0 {
            return self.syntax("expected a decimal number");
        }
        let text = &self.rest()[..digits];
        let value = text.parse::<u64>().or_else(|_| self.syntax("number too large"))?;
        self.pos += digits;
        Ok(value)
    }

    fn atom(&mut self) -> Result<Atom, SpecError> {
        self.skip_ws();
        let start = self.pos;
        let atom = if self.eat("Zsd") {
            self.expect("(")?;
            let m = self.nat()?;
            self.expect(",")?;
            let n = self.nat()?;
            self.expect(",")?;
            let k = self.nat()?;
            self.expect(")")?;
            Atom::SemidirectCyclic { m, n, k }
        } else if self.eat("Z") {
            Atom::Cyclic(self.nat()?)
        } else if self.eat("SD") {
            Atom::Quasidihedral(self.nat()?)
        } else if self.eat("D") {
            Atom::Dihedral(self.nat()?)
        } else if self.eat("Q") {
            Atom::Quaternion(self.nat()?)
        } else if self.eat("A4") {
            Atom::A4
        } else if self.eat("M") {
            self.expect("(")?;
            let p = self.nat()?;
            self.expect(",")?;
            let n_pos = self.pos;
            let n = self.nat()?;
            let n = u32::try_from(n).map_err(|_| SpecError::Syntax {
                offset: n_pos,
                message: "exponent too large".into(),
            })?;
            self.expect(")")?;
            Atom::Modular { p, n }
        } else {
            return self.syntax("expected one of Z, D, Q, SD, A4, M(, Zsd(");
        };
        atom.validate()
            .map_err(|message| SpecError::Constraint { offset: start, message })?;
        Ok(atom)
    }

    fn expr(&mut self) -> Result<GroupExpr, SpecError> {
        let mut factors = vec![self.atom()?];
        while self.eat("x") {
            factors.push(self.atom()?);
        }
        self.skip_ws();
        if !self.rest().is_empty() {
            return self.syntax("expected \"x\" or end of input");
        }
        Ok(GroupExpr { factors })
    }
}

pub fn parse(spec: &str) -> Result<GroupExpr, SpecError> {
    Parser { src: spec, pos: 0 }.expr()
}

impl FromStr for GroupExpr {
    type Err = SpecError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

/// Builds the table, folding products left to right. The table's spec string
/// is the canonical rendering of `expr`.
pub fn build(expr: &GroupExpr, limits: &Limits) -> Result<GroupTable, GroupError> {
    let order = expr.order();
    if order > limits.max_order as u64 {
        return Err(GroupError::OrderBound {
            order,
            bound: limits.max_order,
        });
    }
    let mut factors = expr.factors.iter();
    let first = factors.next().expect("non-empty").build(limits)?;
    factors.try_fold(first, |acc, a| group::direct_product(&acc, &a.build(limits)?, limits))
}

//! Points of the plane and functionals on it.

use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{self, Rat};

/// A point of the norm space, `(a1, a2)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Vec2 {
    #[serde(with = "rational::serde_text")]
    pub a1: Rat,
    #[serde(with = "rational::serde_text")]
    pub a2: Rat,
}

/// A linear functional `(f1, f2)` acting by `f1*a1 + f2*a2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Functional2 {
    #[serde(with = "rational::serde_text")]
    pub f1: Rat,
    #[serde(with = "rational::serde_text")]
    pub f2: Rat,
}

impl Vec2 {
    pub fn new(a1: Rat, a2: Rat) -> Self {
        Self { a1, a2 }
    }

    pub fn ints(a1: i64, a2: i64) -> Self {
        Self::new(rational::int(a1), rational::int(a2))
    }

    pub fn zero() -> Self {
        Self::ints(0, 0)
    }

    pub fn e1() -> Self {
        Self::ints(1, 0)
    }

    pub fn e2() -> Self {
        Self::ints(0, 1)
    }

    pub fn abs(&self) -> Self {
        Self::new(self.a1.abs(), self.a2.abs())
    }

    pub fn is_zero(&self) -> bool {
        self.a1.is_zero() && self.a2.is_zero()
    }

    pub fn is_nonneg(&self) -> bool {
        !self.a1.is_negative() && !self.a2.is_negative()
    }

    /// Componentwise order: `self >= other`.
    pub fn dominates(&self, other: &Vec2) -> bool {
        self.a1 >= other.a1 && self.a2 >= other.a2
    }

    pub fn add(&self, o: &Vec2) -> Vec2 {
        Vec2::new(&self.a1 + &o.a1, &self.a2 + &o.a2)
    }

    pub fn sub(&self, o: &Vec2) -> Vec2 {
        Vec2::new(&self.a1 - &o.a1, &self.a2 - &o.a2)
    }

    pub fn scale(&self, t: &Rat) -> Vec2 {
        Vec2::new(&self.a1 * t, &self.a2 * t)
    }

    /// `self + t * (to - self)`.
    pub fn lerp(&self, to: &Vec2, t: &Rat) -> Vec2 {
        self.add(&to.sub(self).scale(t))
    }

    /// z-component of the cross product.
    pub fn cross(&self, o: &Vec2) -> Rat {
        &self.a1 * &o.a2 - &self.a2 * &o.a1
    }

    pub fn as_functional(&self) -> Functional2 {
        Functional2::new(self.a1.clone(), self.a2.clone())
    }

    pub fn to_f64(&self) -> [f64; 2] {
        [rational::to_f64(&self.a1), rational::to_f64(&self.a2)]
    }

    /// All sign reflections, deduplicated, in the order `(+,+), (-,+), (-,-), (+,-)`.
    pub fn reflections(&self) -> Vec<Vec2> {
        let mut out: Vec<Vec2> = Vec::with_capacity(4);
        for (s1, s2) in [(1, 1), (-1, 1), (-1, -1), (1, -1)] {
            let p = Vec2::new(
                if s1 < 0 { -self.a1.clone() } else { self.a1.clone() },
                if s2 < 0 { -self.a2.clone() } else { self.a2.clone() },
            );
            if !out.contains(&p) {
                out.push(p);
            }
        }
        out
    }
}

/// Orientation of three points: positive for a left turn.
pub fn turn(p: &Vec2, q: &Vec2, r: &Vec2) -> Rat {
    q.sub(p).cross(&r.sub(q))
}

impl Functional2 {
    pub fn new(f1: Rat, f2: Rat) -> Self {
        Self { f1, f2 }
    }

    pub fn ints(f1: i64, f2: i64) -> Self {
        Self::new(rational::int(f1), rational::int(f2))
    }

    pub fn apply(&self, a: &Vec2) -> Rat {
        &self.f1 * &a.a1 + &self.f2 * &a.a2
    }

    pub fn as_vec(&self) -> Vec2 {
        Vec2::new(self.f1.clone(), self.f2.clone())
    }

    pub fn to_f64(&self) -> [f64; 2] {
        [rational::to_f64(&self.f1), rational::to_f64(&self.f2)]
    }
}

impl fmt::Display for Vec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", rational::format(&self.a1), rational::format(&self.a2))
    }
}

impl fmt::Display for Functional2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}, {}>", rational::format(&self.f1), rational::format(&self.f2))
    }
}

/// Shorthand for tests and examples: `v(1, 2, 3, 10)` is `(1/2, 3/10)`.
pub fn v(n1: i64, d1: i64, n2: i64, d2: i64) -> Vec2 {
    Vec2::new(rational::ratio(n1, d1), rational::ratio(n2, d2))
}

pub fn fnl(n1: i64, d1: i64, n2: i64, d2: i64) -> Functional2 {
    Functional2::new(rational::ratio(n1, d1), rational::ratio(n2, d2))
}

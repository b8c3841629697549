use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::field::Gf;

/// A degree-one place. Rational backends use `z: None`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Place {
    Affine { x: Gf, z: Option<Gf> },
    Infinity,
}

impl Place {
    pub fn rational(x: Gf) -> Self {
        Place::Affine { x, z: None }
    }

    pub fn hermitian(x: Gf, z: Gf) -> Self {
        Place::Affine { x, z: Some(z) }
    }

    pub fn x(&self) -> Option<Gf> {
        match self {
            Place::Affine { x, .. } => Some(*x),
            Place::Infinity => None,
        }
    }

    /// Coordinates as element indices: `[x]` or `[x, z]`; empty for P∞.
    pub fn coordinates(&self) -> Vec<u32> {
        match self {
            Place::Affine { x, z: None } => vec![x.index()],
            Place::Affine { x, z: Some(z) } => vec![x.index(), z.index()],
            Place::Infinity => Vec::new(),
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Affine { x, z: None } => write!(f, "P({x})"),
            Place::Affine { x, z: Some(z) } => write!(f, "P({x},{z})"),
            Place::Infinity => write!(f, "P∞"),
        }
    }
}

/// A formal integer combination of degree-one places.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Divisor {
    coeffs: BTreeMap<Place, i64>,
}

impl Divisor {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(p: Place, c: i64) -> Self {
        let mut d = Self::new();
        d.add_place(p, c);
        d
    }

    pub fn add_place(&mut self, p: Place, c: i64) {
        let e = self.coeffs.entry(p).or_insert(0);
        *e += c;
        if *e == 0 {
            self.coeffs.remove(&p);
        }
    }

    /// v_P of the divisor.
    pub fn coefficient(&self, p: &Place) -> i64 {
        self.coeffs.get(p).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> i64 {
        self.coeffs.values().sum()
    }

    pub fn support(&self) -> impl Iterator<Item = (&Place, &i64)> {
        self.coeffs.iter()
    }

    pub fn plus(&self, other: &Divisor) -> Divisor {
        let mut d = self.clone();
        for (p, &c) in &other.coeffs {
            d.add_place(*p, c);
        }
        d
    }

    pub fn minus(&self, other: &Divisor) -> Divisor {
        self.plus(&other.scale(-1))
    }

    pub fn scale(&self, k: i64) -> Divisor {
        let mut d = Divisor::new();
        for (p, &c) in &self.coeffs {
            d.add_place(*p, k * c);
        }
        d
    }

    pub fn is_effective(&self) -> bool {
        self.coeffs.values().all(|&c| c >= 0)
    }

    /// self ≥ other.
    pub fn dominates(&self, other: &Divisor) -> bool {
        self.minus(other).is_effective()
    }

    /// Image under a place map.
    pub fn map_places(&self, f: impl Fn(&Place) -> Place) -> Divisor {
        let mut d = Divisor::new();
        for (p, &c) in &self.coeffs {
            d.add_place(f(p), c);
        }
        d
    }

    /// D/2, when every coefficient is even.
    pub fn halve(&self) -> Option<Divisor> {
        if self.coeffs.values().any(|c| c % 2 != 0) {
            return None;
        }
        let mut d = Divisor::new();
        for (p, &c) in &self.coeffs {
            d.add_place(*p, c / 2);
        }
        Some(d)
    }
}

impl FromIterator<(Place, i64)> for Divisor {
    fn from_iter<I: IntoIterator<Item = (Place, i64)>>(iter: I) -> Self {
        let mut d = Divisor::new();
        for (p, c) in iter {
            d.add_place(p, c);
        }
        d
    }
}

impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .map(|(p, c)| format!("{c}·{p}"))
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_order() {
        let a = Place::rational(Gf(1));
        let d = Divisor::single(a, 2).plus(&Divisor::single(Place::Infinity, -3));
        assert_eq!(d.degree(), -1);
        assert!(!d.is_effective());
        assert_eq!(d.minus(&d), Divisor::new());
        assert_eq!(d.scale(2).halve().unwrap(), d);
        assert!(d.halve().is_none());
        assert!(Divisor::single(a, 3).dominates(&Divisor::single(a, 1)));
    }
}

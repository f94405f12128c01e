//! Permutations of `{0, …, n-1}` stored as image arrays.
//!
//! Products compose as functions: `(p * q)(x) = p(q(x))`. The derived
//! ordering compares image arrays lexicographically, which is the canonical
//! element order used everywhere a "smallest representative" is chosen.

use std::fmt;
use std::ops::Mul;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<u32>,
}

impl Perm {
    pub fn identity(degree: usize) -> Perm {
        Perm {
            images: (0..degree as u32).collect(),
        }
    }

    /// Builds a permutation from 0-based images, checking bijectivity.
    pub fn from_images(images: Vec<u32>) -> Result<Perm> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            let i = i as usize;
            if i >= n || seen[i] {
                return Err(Error::InvalidPermutation(format!(
                    "images {images:?} are not a bijection of 0..{n}"
                )));
            }
            seen[i] = true;
        }
        Ok(Perm { images })
    }

    /// Builds a permutation from 0-based cycles.
    pub fn from_cycles(degree: usize, cycles: &[&[u32]]) -> Result<Perm> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            for (k, &a) in cycle.iter().enumerate() {
                let a = a as usize;
                if a >= degree {
                    return Err(Error::InvalidPermutation(format!(
                        "point {} out of range for degree {degree}",
                        a + 1
                    )));
                }
                if touched[a] {
                    return Err(Error::InvalidPermutation(format!(
                        "point {} appears twice",
                        a + 1
                    )));
                }
                touched[a] = true;
                images[a] = cycle[(k + 1) % cycle.len()];
            }
        }
        Ok(Perm { images })
    }

    /// Parses cycle notation with 1-based points, e.g. `"(1 2 3)(4 5)"`.
    ///
    /// Whitespace is insignificant apart from separating numbers; commas are
    /// accepted as separators too. The identity is written `"()"`.
    pub fn parse(degree: usize, text: &str) -> Result<Perm> {
        let cycles = parse_cycles(text)?;
        let refs: Vec<&[u32]> = cycles.iter().map(|c| c.as_slice()).collect();
        Perm::from_cycles(degree, &refs)
    }

    /// Largest point (1-based) mentioned in a cycle string; 0 for `"()"`.
    pub fn max_point(text: &str) -> Result<usize> {
        Ok(parse_cycles(text)?
            .iter()
            .flatten()
            .map(|&p| p as usize + 1)
            .max()
            .unwrap_or(0))
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j as usize] = i as u32;
        }
        Perm { images }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        Perm {
            images: other.images.iter().map(|&j| self.images[j as usize]).collect(),
        }
    }

    /// `self ∘ x ∘ self⁻¹`.
    pub fn conjugate(&self, x: &Perm) -> Perm {
        // (g x g⁻¹)(g(i)) = g(x(i))
        let mut images = vec![0; self.images.len()];
        for (i, &xi) in x.images.iter().enumerate() {
            images[self.images[i] as usize] = self.images[xi as usize];
        }
        Perm { images }
    }

    pub fn smallest_moved_point(&self) -> Option<usize> {
        self.images
            .iter()
            .enumerate()
            .find(|(i, &j)| *i as u32 != j)
            .map(|(i, _)| i)
    }

    pub fn order(&self) -> u64 {
        let mut seen = vec![false; self.degree()];
        let mut order = 1u64;
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut len = 0u64;
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                p = self.images[p] as usize;
                len += 1;
            }
            order = lcm(order, len);
        }
        order
    }

    /// Disjoint cycles of length at least two, 0-based, each starting at its
    /// smallest point.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] || self.images[start] as usize == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                cycle.push(p as u32);
                p = self.images[p] as usize;
            }
            out.push(cycle);
        }
        out
    }

    /// Places this permutation on points `offset..offset+degree` of a larger
    /// set of `total` points, fixing everything else.
    pub fn shifted(&self, offset: usize, total: usize) -> Perm {
        let mut images: Vec<u32> = (0..total as u32).collect();
        for (i, &j) in self.images.iter().enumerate() {
            images[offset + i] = offset as u32 + j;
        }
        Perm { images }
    }
}

impl Mul for &Perm {
    type Output = Perm;

    fn mul(self, rhs: &Perm) -> Perm {
        self.compose(rhs)
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for cycle in cycles {
            write!(f, "(")?;
            for (k, p) in cycle.iter().enumerate() {
                if k > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", p + 1)?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

fn parse_cycles(text: &str) -> Result<Vec<Vec<u32>>> {
    let mut cycles = Vec::new();
    let mut current: Option<Vec<u32>> = None;
    let mut number = String::new();

    let flush = |number: &mut String, current: &mut Option<Vec<u32>>| -> Result<()> {
        if number.is_empty() {
            return Ok(());
        }
        let cycle = current
            .as_mut()
            .ok_or_else(|| Error::Parse(format!("number {number} outside of a cycle")))?;
        let p: u32 = number
            .parse()
            .map_err(|_| Error::Parse(format!("bad point {number:?}")))?;
        if p == 0 {
            return Err(Error::Parse("points are 1-based; found 0".into()));
        }
        cycle.push(p - 1);
        number.clear();
        Ok(())
    };

    for ch in text.chars() {
        match ch {
            '(' => {
                if current.is_some() {
                    return Err(Error::Parse(format!("nested '(' in {text:?}")));
                }
                current = Some(Vec::new());
            }
            ')' => {
                flush(&mut number, &mut current)?;
                let cycle = current
                    .take()
                    .ok_or_else(|| Error::Parse(format!("unbalanced ')' in {text:?}")))?;
                if !cycle.is_empty() {
                    cycles.push(cycle);
                }
            }
            c if c.is_ascii_digit() => number.push(c),
            c if c.is_whitespace() || c == ',' => flush(&mut number, &mut current)?,
            c => return Err(Error::Parse(format!("unexpected character {c:?} in {text:?}"))),
        }
    }
    if current.is_some() {
        return Err(Error::Parse(format!("unterminated cycle in {text:?}")));
    }
    if cycles.is_empty() && !text.contains("()") {
        return Err(Error::Parse(format!("no cycles in {text:?}")));
    }
    Ok(cycles)
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display_round_trip() {
        let p = Perm::parse(5, "(1 2 3)(4 5)").unwrap();
        assert_eq!(p.images(), &[1, 2, 0, 4, 3]);
        assert_eq!(p.to_string(), "(1 2 3)(4 5)");
        assert_eq!(Perm::parse(5, " ( 4,5 )( 1 2 3 ) ").unwrap(), p);
        assert!(Perm::parse(4, "()").unwrap().is_identity());
        assert_eq!(Perm::identity(3).to_string(), "()");
    }

    #[test]
    fn parse_errors() {
        assert!(Perm::parse(3, "(1 2 4)").is_err());
        assert!(Perm::parse(3, "(1 2)(2 3)").is_err());
        assert!(Perm::parse(3, "(1 2").is_err());
        assert!(Perm::parse(3, "(0 1)").is_err());
        assert!(Perm::parse(3, "1 2").is_err());
        assert!(Perm::parse(3, "(1 x)").is_err());
    }

    #[test]
    fn composition_applies_right_factor_first() {
        let a = Perm::parse(3, "(1 2)").unwrap();
        let b = Perm::parse(3, "(2 3)").unwrap();
        // a(b(1)) = a(1) = 2, a(b(2)) = a(3) = 3, a(b(3)) = a(2) = 1
        assert_eq!((&a * &b).to_string(), "(1 2 3)");
        assert_eq!(&a * &a.inverse(), Perm::identity(3));
    }

    #[test]
    fn conjugation_relabels() {
        let t = Perm::parse(3, "(1 2)").unwrap();
        let g = Perm::parse(3, "(2 3)").unwrap();
        assert_eq!(g.conjugate(&t), &(&g * &t) * &g.inverse());
        assert_eq!(g.conjugate(&t).to_string(), "(1 3)");
    }

    #[test]
    fn identity_is_canonically_smallest() {
        let id = Perm::identity(4);
        let p = Perm::parse(4, "(3 4)").unwrap();
        assert!(id < p);
        assert_eq!(Perm::parse(6, "(1 2 3)(4 5)").unwrap().order(), 6);
    }
}

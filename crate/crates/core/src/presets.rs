//! Named groups and the group-spec text syntax.
//!
//! | spec | generators |
//! |------|------------|
//! | `S<n>` | `(1 2 … n)`, `(1 2)` |
//! | `A<n>` | `(1 2 k)` for `k = 3..n` |
//! | `C<n>` | `(1 2 … n)` |
//! | `D<2n>` | `(1 2 … n)` and `i ↦ n+1−i`; `D2 = C2`, `D4 = V4` |
//! | `V4` | `(1 2)(3 4)`, `(1 3)(2 4)` |
//! | `Q8` | `(1 2 3 4)(5 6 7 8)`, `(1 5 3 7)(2 8 4 6)` |
//! | `SL(2,5)` | `[[1,1],[0,1]]` and `[[0,4],[1,0]]` on the 24 nonzero vectors of `F5²`, listed lexicographically |
//! | `F21` | `x ↦ x+1`, `x ↦ 2x` on `Z/7` (point `x+1`) |
//!
//! Products are written `AxB`, powers `C2^3`, and explicit groups
//! `perm:<degree>:<cycles>;<cycles>` (the degree may be omitted).

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::Perm;

/// Group text accepted by [`parse_group`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupSpec {
    Preset(String),
    Product(Vec<GroupSpec>),
    Explicit {
        degree: usize,
        generators: Vec<String>,
    },
}

impl GroupSpec {
    pub fn parse(text: &str) -> Result<GroupSpec> {
        let text = text.trim();
        if let Some(rest) = text.strip_prefix("perm:") {
            let (degree, cycles) = match rest.split_once(':') {
                Some((d, c)) => (
                    Some(
                        d.trim()
                            .parse::<usize>()
                            .map_err(|_| Error::Parse(format!("bad degree {d:?}")))?,
                    ),
                    c,
                ),
                None => (None, rest),
            };
            let generators: Vec<String> = cycles
                .split(';')
                .map(str::trim)
                .filter(|c| !c.is_empty())
                .map(String::from)
                .collect();
            let needed = generators
                .iter()
                .map(|g| Perm::max_point(g))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .max()
                .unwrap_or(0)
                .max(1);
            let degree = degree.unwrap_or(needed);
            return Ok(GroupSpec::Explicit { degree, generators });
        }
        let factors: Vec<&str> = text.split('x').collect();
        if factors.len() > 1 {
            return Ok(GroupSpec::Product(
                factors.into_iter().map(GroupSpec::parse).collect::<Result<_>>()?,
            ));
        }
        if let Some((base, exp)) = text.split_once('^') {
            let k: usize = exp
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent in {text:?}")))?;
            if k == 0 {
                return Err(Error::Parse(format!("zero exponent in {text:?}")));
            }
            let base = GroupSpec::parse(base)?;
            return Ok(GroupSpec::Product(vec![base; k]));
        }
        if text.is_empty() {
            return Err(Error::Parse("empty group spec".into()));
        }
        Ok(GroupSpec::Preset(text.to_string()))
    }

    pub fn build(&self) -> Result<PermGroup> {
        match self {
            GroupSpec::Preset(name) => preset(name),
            GroupSpec::Product(factors) => {
                let groups: Vec<PermGroup> = factors.iter().map(GroupSpec::build).collect::<Result<_>>()?;
                Ok(direct_product(&groups)?)
            }
            GroupSpec::Explicit { degree, generators } => {
                let gens = generators
                    .iter()
                    .map(|g| Perm::parse(*degree, g))
                    .collect::<Result<_>>()?;
                PermGroup::new(*degree, gens)
            }
        }
    }
}

/// Parses and builds a group spec.
pub fn parse_group(text: &str) -> Result<PermGroup> {
    GroupSpec::parse(text)?.build()
}

fn number(name: &str, prefix: &str) -> Option<usize> {
    name.strip_prefix(prefix)?.parse().ok()
}

fn group(degree: usize, cycles: &[Vec<u32>]) -> Result<PermGroup> {
    let gens = cycles
        .iter()
        .map(|c| Perm::from_cycles(degree, &[c.as_slice()]))
        .collect::<Result<_>>()?;
    PermGroup::new(degree, gens)
}

fn from_cycle_text(degree: usize, gens: &[&str]) -> Result<PermGroup> {
    PermGroup::new(
        degree,
        gens.iter().map(|g| Perm::parse(degree, g)).collect::<Result<_>>()?,
    )
}

/// A named group; see the module docs for the generator conventions.
pub fn preset(name: &str) -> Result<PermGroup> {
    match name {
        "V4" => return from_cycle_text(4, &["(1 2)(3 4)", "(1 3)(2 4)"]),
        "Q8" => return from_cycle_text(8, &["(1 2 3 4)(5 6 7 8)", "(1 5 3 7)(2 8 4 6)"]),
        "SL(2,5)" => return sl25(),
        "F21" => {
            let shift: Vec<u32> = (0..7).map(|x| (x + 1) % 7).collect();
            let double: Vec<u32> = (0..7).map(|x| 2 * x % 7).collect();
            return PermGroup::new(7, vec![Perm::from_images(shift)?, Perm::from_images(double)?]);
        }
        _ => {}
    }
    let unknown = || Error::Parse(format!("unknown group {name:?}"));
    if let Some(n) = number(name, "S") {
        return match n {
            0 => Err(unknown()),
            1 | 2 => group(n, &[(0..n as u32).collect()]),
            _ => group(n, &[(0..n as u32).collect(), vec![0, 1]]),
        };
    }
    if let Some(n) = number(name, "A") {
        if n == 0 {
            return Err(unknown());
        }
        let gens: Vec<Vec<u32>> = (2..n as u32).map(|k| vec![0, 1, k]).collect();
        return group(n, &gens);
    }
    if let Some(n) = number(name, "C") {
        if n == 0 {
            return Err(unknown());
        }
        return group(n, &[(0..n as u32).collect()]);
    }
    if let Some(m) = number(name, "D") {
        return match m {
            2 => preset("C2"),
            4 => preset("V4"),
            m if m >= 6 && m % 2 == 0 => {
                let n = m / 2;
                let rotation = Perm::from_cycles(n, &[&(0..n as u32).collect::<Vec<_>>()])?;
                let reflection = Perm::from_images((0..n as u32).map(|i| n as u32 - 1 - i).collect())?;
                PermGroup::new(n, vec![rotation, reflection])
            }
            _ => Err(unknown()),
        };
    }
    Err(unknown())
}

/// `SL(2,5)` acting on the nonzero column vectors of `F5²`.
fn sl25() -> Result<PermGroup> {
    let vectors: Vec<(u32, u32)> = (0..5)
        .flat_map(|a| (0..5).map(move |b| (a, b)))
        .filter(|&v| v != (0, 0))
        .collect();
    let index = |v: (u32, u32)| vectors.iter().position(|&w| w == v).expect("nonzero") as u32;
    let act = |m: [[u32; 2]; 2]| -> Result<Perm> {
        Perm::from_images(
            vectors
                .iter()
                .map(|&(a, b)| index(((m[0][0] * a + m[0][1] * b) % 5, (m[1][0] * a + m[1][1] * b) % 5)))
                .collect(),
        )
    };
    PermGroup::new(24, vec![act([[1, 1], [0, 1]])?, act([[0, 4], [1, 0]])?])
}

/// Direct product acting on the disjoint union of the factors' points.
pub fn direct_product(factors: &[PermGroup]) -> Result<PermGroup> {
    let total: usize = factors.iter().map(PermGroup::degree).sum();
    let mut gens = Vec::new();
    let mut offset = 0;
    for f in factors {
        gens.extend(f.generators().iter().map(|g| g.shifted(offset, total)));
        offset += f.degree();
    }
    PermGroup::new(total, gens)
}

/// Groups of order at most 48 swept by the self-test, each given by a spec
/// string.
pub const CATALOG: &[&str] = &[
    "C1", "C2", "C3", "C4", "V4", "C5", "C6", "S3", "C7", "C8", "C4xC2", "C2^3", "D8", "Q8",
    "C9", "C3xC3", "D10", "C10", "C12", "D12", "A4", "C6xC2", "C14", "D14", "C4xC4",
    "D16", "Q8xC2", "D8xC2", "C4xC2^2", "C3xS3", "S3xC3xC2", "C18", "F21", "A4xC2", "S4", "D24",
    "Q8xC3", "C3xD8", "S3xS3", "A4xC3", "D8xC3xC2", "S4xC2", "A4xC4",
];

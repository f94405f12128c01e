use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::field::{parse_rational, pow_mod, Field};
use crate::exactlin::matrix::Matrix;
use crate::structure::out::OutGroup;

/// A representation of `Out(H)` over a field: one matrix per class, indexed
/// like [`OutGroup`] classes.
#[derive(Clone, Debug)]
pub struct KModule {
    name: String,
    field: Field,
    dim: usize,
    rho: Vec<Matrix>,
}

impl KModule {
    /// Checks `ρ(0) = 1`, `ρ(a)ρ(b) = ρ(ab)` and invertibility.
    pub fn new(name: &str, out: &OutGroup, field: Field, rho: Vec<Matrix>) -> Result<KModule> {
        let k = out.order();
        if rho.len() != k {
            return Err(Error::Module(format!(
                "{} matrices given for an outer automorphism group of order {k}",
                rho.len()
            )));
        }
        let dim = rho.first().map_or(0, Matrix::rows);
        for (a, m) in rho.iter().enumerate() {
            if m.field() != field || m.rows() != dim || m.cols() != dim {
                return Err(Error::Module(format!(
                    "matrix for class {a} is not {dim}x{dim} over {field}"
                )));
            }
            if m.rank() != dim {
                return Err(Error::Module(format!("matrix for class {a} is singular")));
            }
        }
        if rho[0] != Matrix::identity(field, dim) {
            return Err(Error::Module("class 0 must act as the identity".into()));
        }
        for a in 0..k {
            for b in 0..k {
                if rho[a].mul(&rho[b])? != rho[out.mul(a, b)] {
                    return Err(Error::Module(format!(
                        "not a homomorphism: rho({a}) rho({b}) differs from rho({})",
                        out.mul(a, b)
                    )));
                }
            }
        }
        Ok(KModule {
            name: name.to_string(),
            field,
            dim,
            rho,
        })
    }

    /// Every class acts as `[1]`.
    pub fn trivial(out: &OutGroup, field: Field) -> KModule {
        KModule {
            name: "trivial".into(),
            field,
            dim: 1,
            rho: vec![Matrix::identity(field, 1); out.order()],
        }
    }

    /// The nontrivial character of an outer automorphism group of order 2.
    pub fn sign(out: &OutGroup, field: Field) -> Result<KModule> {
        if out.order() != 2 {
            return Err(Error::Module(format!(
                "sign needs an outer automorphism group of order 2, found order {}",
                out.order()
            )));
        }
        if field.characteristic() == 2 {
            return Err(Error::Module(
                "sign coincides with trivial in characteristic 2".into(),
            ));
        }
        let rho = vec![
            Matrix::identity(field, 1),
            Matrix::from_integers(field, 1, 1, &[-1])?,
        ];
        KModule::new("sign", out, field, rho)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rho(&self, a: usize) -> &Matrix {
        &self.rho[a]
    }

    pub fn out_order(&self) -> usize {
        self.rho.len()
    }
}

/// Multiset of `Out(H)` classes with positive integer multiplicities.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormalSum(BTreeMap<usize, u64>);

impl FormalSum {
    pub fn new() -> FormalSum {
        FormalSum::default()
    }

    pub fn from_entries(entries: impl IntoIterator<Item = usize>) -> FormalSum {
        let mut u = FormalSum::new();
        for a in entries {
            u.add(a, 1);
        }
        u
    }

    pub fn add(&mut self, class: usize, multiplicity: u64) {
        if multiplicity > 0 {
            *self.0.entry(class).or_insert(0) += multiplicity;
        }
    }

    /// Multiset union.
    pub fn merged(&self, other: &FormalSum) -> FormalSum {
        let mut u = self.clone();
        for (&a, &m) in &other.0 {
            u.add(a, m);
        }
        u
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.0.iter().map(|(&a, &m)| (a, m))
    }

    pub fn multiplicity(&self, class: usize) -> u64 {
        self.0.get(&class).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.0.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// `Σ multiplicity · ρ(class)`, reducing multiplicities into the field.
pub fn act(module: &KModule, u: &FormalSum) -> Result<Matrix> {
    let mut m = Matrix::zeros(module.field, module.dim, module.dim);
    for (a, k) in u.iter() {
        let rho = module.rho.get(a).ok_or_else(|| {
            Error::Module(format!(
                "class {a} out of range for an outer automorphism group of order {}",
                module.out_order()
            ))
        })?;
        m.add_scaled(rho, k)?;
    }
    Ok(m)
}

/// Dimension of the image of `v ↦ Σ ρ(e)v` over the given entries, one per
/// element of the acting group.
pub fn trace_image_dim(module: &KModule, entries: &[usize]) -> Result<usize> {
    Ok(act(module, &FormalSum::from_entries(entries.iter().copied()))?.rank())
}

/// Reads a module description.
///
/// ```text
/// field Q
/// dim 2
/// rep 1
/// 0 1
/// 1 0
/// ```
///
/// `name trivial` or `name sign` replaces the matrix blocks. Class 0 may be
/// omitted and defaults to the identity; every other class needs a block.
/// A `field` line, when present, must agree with `field`. Text after `#` is
/// ignored.
pub fn load_module(text: &str, out: &OutGroup, field: Field) -> Result<KModule> {
    let mut lines = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .enumerate()
        .filter(|(_, l)| !l.is_empty())
        .peekable();
    let mut dim: Option<usize> = None;
    let mut name: Option<String> = None;
    let mut blocks: BTreeMap<usize, Matrix> = BTreeMap::new();
    let err = |n: usize, msg: String| Error::Parse(format!("module line {}: {msg}", n + 1));

    while let Some((n, line)) = lines.next() {
        let mut words = line.split_whitespace();
        let keyword = words.next().unwrap_or_default();
        let arg = words.next();
        if words.next().is_some() {
            return Err(err(n, format!("unexpected text in {line:?}")));
        }
        let arg = arg.ok_or_else(|| err(n, format!("{keyword} needs an argument")))?;
        match keyword {
            "field" => {
                let declared: Field = arg.parse()?;
                if declared != field {
                    return Err(Error::Module(format!(
                        "module is declared over {declared} but {field} was requested"
                    )));
                }
            }
            "dim" => dim = Some(arg.parse().map_err(|_| err(n, format!("bad dimension {arg:?}")))?),
            "name" => name = Some(arg.to_string()),
            "rep" => {
                let d = dim.ok_or_else(|| err(n, "dim must come before rep".into()))?;
                let class: usize = arg
                    .parse()
                    .map_err(|_| err(n, format!("bad class index {arg:?}")))?;
                if class >= out.order() {
                    return Err(err(
                        n,
                        format!("class {class} out of range (order {})", out.order()),
                    ));
                }
                let mut values = Vec::with_capacity(d * d);
                for _ in 0..d {
                    let (m, row) = lines
                        .next()
                        .ok_or_else(|| err(n, format!("rep {class} needs {d} rows")))?;
                    let row: Vec<_> = row.split_whitespace().map(parse_rational).collect::<Result<_>>()?;
                    if row.len() != d {
                        return Err(err(m, format!("expected {d} entries, found {}", row.len())));
                    }
                    values.extend(row);
                }
                if blocks.insert(class, Matrix::from_rationals(field, d, d, values)?).is_some() {
                    return Err(err(n, format!("rep {class} given twice")));
                }
            }
            other => return Err(err(n, format!("unknown keyword {other:?}"))),
        }
    }

    if let Some(name) = name {
        if !blocks.is_empty() {
            return Err(Error::Parse("a named module takes no rep blocks".into()));
        }
        if dim.is_some_and(|d| d != 1) {
            return Err(Error::Parse(format!("{name} is one-dimensional")));
        }
        return named_module(&name, out, field);
    }
    let d = dim.ok_or_else(|| Error::Parse("module needs a dim line".into()))?;
    blocks.entry(0).or_insert_with(|| Matrix::identity(field, d));
    let rho: Vec<Matrix> = (0..out.order())
        .map(|a| {
            blocks
                .remove(&a)
                .ok_or_else(|| Error::Module(format!("no matrix given for class {a}")))
        })
        .collect::<Result<_>>()?;
    KModule::new("explicit", out, field, rho)
}

/// The `n` one-dimensional characters of a cyclic `Out(H)` of order `n`
/// over `F_p`, which need `n | p − 1`. Character `k` sends the first class of
/// order `n` to `ζ^k`, where `ζ = g^((p−1)/n)` for the smallest primitive
/// root `g` mod `p`.
pub fn cyclic_characters(out: &OutGroup, field: Field) -> Result<Vec<KModule>> {
    let n = out.order();
    let p = field.characteristic();
    if p == 0 || (p - 1) % n as u64 != 0 {
        return Err(Error::Module(format!("{field} has no primitive root of unity of order {n}")));
    }
    let class_order = |a: usize| {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = out.mul(x, a);
            k += 1;
        }
        k
    };
    let c = (0..n)
        .find(|&a| class_order(a) == n)
        .ok_or_else(|| Error::Module(format!("outer automorphism group of order {n} is not cyclic")))?;
    let g = (2..p)
        .find(|&g| (1..p - 1).all(|e| (p - 1) % e != 0 || pow_mod(g, e, p) != 1))
        .unwrap_or(1);
    let zeta = pow_mod(g, (p - 1) / n as u64, p);
    (0..n)
        .map(|k| {
            let step = pow_mod(zeta, k as u64, p);
            let mut rho = vec![None; n];
            let (mut x, mut v) = (0, 1);
            for _ in 0..n {
                rho[x] = Some(Matrix::from_integers(field, 1, 1, &[v as i64])?);
                x = out.mul(x, c);
                v = v * step % p;
            }
            let rho = rho.into_iter().map(|m| m.expect("c generates")).collect();
            KModule::new(&format!("chi{k}"), out, field, rho)
        })
        .collect()
}

/// `trivial` or `sign`.
pub fn named_module(name: &str, out: &OutGroup, field: Field) -> Result<KModule> {
    match name {
        "trivial" => Ok(KModule::trivial(out, field)),
        "sign" => KModule::sign(out, field),
        other => Err(Error::Parse(format!("unknown module name {other:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::PermGroup;
    use crate::perm::Perm;
    use crate::structure::out::out_group;

    fn out(degree: usize, gens: &[&str]) -> OutGroup {
        let g = PermGroup::new(
            degree,
            gens.iter().map(|g| Perm::parse(degree, g).unwrap()).collect(),
        )
        .unwrap();
        out_group(&g, 720).unwrap()
    }

    fn a5_out() -> OutGroup {
        out(5, &["(1 2 3)", "(3 4 5)"])
    }

    fn v4_out() -> OutGroup {
        out(4, &["(1 2)(3 4)", "(1 3)(2 4)"])
    }

    #[test]
    fn named_modules() {
        let o = a5_out();
        let t = load_module("name trivial", &o, Field::Rationals).unwrap();
        assert_eq!(t.dim(), 1);
        assert_eq!(t.rho(1), &Matrix::identity(Field::Rationals, 1));
        let s = load_module("field Q\nname sign", &o, Field::Rationals).unwrap();
        assert_eq!(s.rho(1), &Matrix::from_integers(Field::Rationals, 1, 1, &[-1]).unwrap());
        assert!(load_module("name sign", &o, Field::Prime(2)).is_err());
        assert!(load_module("name sign", &v4_out(), Field::Rationals).is_err());
        assert!(load_module("field F3\nname trivial", &o, Field::Rationals).is_err());
    }

    #[test]
    fn act_examples() {
        let o = a5_out();
        let sign = KModule::sign(&o, Field::Rationals).unwrap();
        let triv = KModule::trivial(&o, Field::Rationals);
        let id = FormalSum::from_entries([0]);
        let both = FormalSum::from_entries([0, 1]);
        assert_eq!(act(&sign, &id).unwrap(), Matrix::identity(Field::Rationals, 1));
        assert!(act(&sign, &both).unwrap().is_zero());
        assert_eq!(
            act(&triv, &both).unwrap(),
            Matrix::from_integers(Field::Rationals, 1, 1, &[2]).unwrap()
        );
        assert!(act(&triv, &FormalSum::from_entries([5])).is_err());
    }

    #[test]
    fn trace_examples() {
        let o = a5_out();
        let sign = KModule::sign(&o, Field::Rationals).unwrap();
        assert_eq!(trace_image_dim(&sign, &[0]).unwrap(), 1);
        assert_eq!(trace_image_dim(&sign, &[0, 1]).unwrap(), 0);
        let triv = KModule::trivial(&o, Field::Prime(3));
        assert_eq!(trace_image_dim(&triv, &[0, 0, 0]).unwrap(), 0);
        assert_eq!(trace_image_dim(&triv, &[0, 0]).unwrap(), 1);
    }

    /// Out(V4) ≅ GL(2,2) acting on V4 itself, read off the generator images.
    fn natural_f2_text(o: &OutGroup) -> String {
        let table = o.table();
        let gens = o.generators();
        // coordinates of an element in the basis gens[0], gens[1]
        let coords = |x: u32| -> [u8; 2] {
            for a in 0..2u8 {
                for b in 0..2u8 {
                    let mut y = 0;
                    if a == 1 {
                        y = table.mul(y, gens[0]);
                    }
                    if b == 1 {
                        y = table.mul(y, gens[1]);
                    }
                    if y == x {
                        return [a, b];
                    }
                }
            }
            unreachable!()
        };
        let mut text = String::from("field F2\ndim 2\n");
        for c in 0..o.order() {
            let rep = o.representative(c);
            let i0 = coords(rep.apply(gens[0]));
            let i1 = coords(rep.apply(gens[1]));
            text.push_str(&format!("rep {c}\n{} {}\n{} {}\n", i0[0], i1[0], i0[1], i1[1]));
        }
        text
    }

    #[test]
    fn explicit_module_round_trip() {
        let o = v4_out();
        let text = natural_f2_text(&o);
        let m = load_module(&text, &o, Field::Prime(2)).unwrap();
        assert_eq!(m.dim(), 2);
        // swapping two classes breaks the homomorphism property
        let broken = text.replacen("rep 1", "rep X", 1).replacen("rep 2", "rep 1", 1).replacen("rep X", "rep 2", 1);
        let err = load_module(&broken, &o, Field::Prime(2)).unwrap_err();
        assert!(err.to_string().contains("homomorphism"), "{err}");
    }

    #[test]
    fn malformed_modules() {
        let o = a5_out();
        assert!(load_module("dim 1\nrep 1\n1 2", &o, Field::Rationals).is_err());
        assert!(load_module("dim 1\nrep 3\n1", &o, Field::Rationals).is_err());
        assert!(load_module("dim 1", &o, Field::Rationals).is_err());
        assert!(load_module("dim 1\nrep 1\n0", &o, Field::Rationals).is_err());
        assert!(load_module("colour red", &o, Field::Rationals).is_err());
        // the sign character written out by hand
        let m = load_module("dim 1\nrep 1\n-1 # sign", &o, Field::Rationals).unwrap();
        assert_eq!(m.rho(1), KModule::sign(&o, Field::Rationals).unwrap().rho(1));
    }

    #[test]
    fn formal_sums_add_under_act() {
        let o = v4_out();
        let m = load_module(&natural_f2_text(&o), &o, Field::Prime(2)).unwrap();
        let u1 = FormalSum::from_entries([0, 1, 1, 3]);
        let u2 = FormalSum::from_entries([2, 5, 4]);
        let lhs = act(&m, &u1).unwrap().add(&act(&m, &u2).unwrap()).unwrap();
        assert_eq!(lhs, act(&m, &u1.merged(&u2)).unwrap());
    }
}

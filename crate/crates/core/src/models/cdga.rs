use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bicomplex::{Bidegree, ComplexData, ComplexError, DoubleComplex, Grid, ValidationReport};
use crate::linalg::{format_rational, Matrix, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub name: String,
    pub bidegree: [i32; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Truncation {
    pub max_p: i32,
    pub max_q: i32,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub weights: BTreeMap<String, u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_weight: Option<u32>,
}

/// A free bigraded commutative algebra with derivation rules on generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CdgaSpec {
    pub generators: Vec<GeneratorSpec>,
    #[serde(default)]
    pub d1: BTreeMap<String, String>,
    #[serde(default)]
    pub d2: BTreeMap<String, String>,
    pub truncation: Truncation,
}

/// Exponent vector indexed like [`CdgaSpec::generators`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Monomial(pub Vec<u32>);

/// Formal sum of monomials with nonzero rational coefficients.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Polynomial(pub BTreeMap<Monomial, Rational>);

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CdgaError {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("undeclared generator {name:?} at position {position}")]
    Undeclared { name: String, position: usize },
    #[error("negative exponent at position {position}")]
    NegativeExponent { position: usize },
    #[error("duplicate generator {0:?}")]
    Duplicate(String),
    #[error("generator {0:?} has a negative bidegree")]
    NegativeBidegree(String),
    #[error("even generator {0:?} of bidegree (0,0) makes the truncation infinite")]
    Unbounded(String),
    #[error("rule for {generator:?} in {map} violates bidegree: term {term} has bidegree {found}, expected {expected}")]
    Bidegree { map: &'static str, generator: String, term: String, found: Bidegree, expected: Bidegree },
    #[error("truncation is not stable: discarded monomial {discarded} has {map}-image term {kept} inside the retained region")]
    Unstable { map: &'static str, discarded: String, kept: String },
    #[error("rule for {0:?} refers to no declared generator")]
    UnknownRule(String),
    #[error("induced derivations fail validation: {0}")]
    Invalid(String),
    #[error("weight bound {w} is too small; at least {min} is needed to certify the requested bidegrees")]
    WeightTooSmall { w: u32, min: u32 },
}

impl From<ValidationReport> for CdgaError {
    fn from(r: ValidationReport) -> Self {
        CdgaError::Invalid(r.to_string())
    }
}

impl CdgaSpec {
    fn index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn generator_bidegree(&self, i: usize) -> Bidegree {
        let [p, q] = self.generators[i].bidegree;
        Bidegree::new(p, q)
    }

    pub fn is_odd(&self, i: usize) -> bool {
        self.generator_bidegree(i).total().rem_euclid(2) == 1
    }

    pub fn bidegree(&self, m: &Monomial) -> Bidegree {
        m.0.iter().enumerate().fold(Bidegree::new(0, 0), |acc, (i, &e)| {
            let b = self.generator_bidegree(i);
            acc.shift(b.p * e as i32, b.q * e as i32)
        })
    }

    pub fn weight(&self, m: &Monomial) -> u32 {
        m.0.iter()
            .zip(&self.generators)
            .map(|(&e, g)| e * self.truncation.weights.get(&g.name).copied().unwrap_or(0))
            .sum()
    }

    pub fn one(&self) -> Monomial {
        Monomial(vec![0; self.generators.len()])
    }

    fn generator(&self, i: usize) -> Monomial {
        let mut m = self.one();
        m.0[i] = 1;
        m
    }

    /// Product of monomials in canonical order, with its Koszul sign, or `None` if an odd
    /// generator would appear twice.
    pub fn mul_monomials(&self, a: &Monomial, b: &Monomial) -> Option<(bool, Monomial)> {
        let mut swaps = 0usize;
        for (j, &eb) in b.0.iter().enumerate() {
            if eb == 0 || !self.is_odd(j) {
                continue;
            }
            if a.0[j] > 0 {
                return None;
            }
            swaps += (j + 1..a.0.len()).filter(|&i| a.0[i] > 0 && self.is_odd(i)).count();
        }
        let m = Monomial(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect());
        Some((swaps % 2 == 1, m))
    }

    pub fn mul(&self, a: &Polynomial, b: &Polynomial) -> Polynomial {
        let mut out = Polynomial::default();
        for (ma, ca) in &a.0 {
            for (mb, cb) in &b.0 {
                if let Some((neg, m)) = self.mul_monomials(ma, mb) {
                    let c = ca * cb;
                    out.add_term(m, if neg { -c } else { c });
                }
            }
        }
        out
    }

    /// Generators of `m` in canonical order, even powers repeated.
    fn factors(&self, m: &Monomial) -> Vec<usize> {
        m.0.iter().enumerate().flat_map(|(i, &e)| std::iter::repeat_n(i, e as usize)).collect()
    }

    /// Extends `rules` (images of generators) to `m` as a derivation of total degree 1.
    pub fn derive(&self, rules: &[Polynomial], m: &Monomial) -> Polynomial {
        let factors = self.factors(m);
        let mut out = Polynomial::default();
        for j in 0..factors.len() {
            let image = &rules[factors[j]];
            if image.0.is_empty() {
                continue;
            }
            let mut left = self.one();
            let mut left_degree = 0;
            for &f in &factors[..j] {
                left.0[f] += 1;
                left_degree += self.generator_bidegree(f).total();
            }
            let mut right = self.one();
            for &f in &factors[j + 1..] {
                right.0[f] += 1;
            }
            let term = self.mul(&self.mul(&Polynomial::monomial(left), image), &Polynomial::monomial(right));
            let sign = if left_degree % 2 == 0 { Rational::one() } else { -Rational::one() };
            for (mm, c) in term.0 {
                out.add_term(mm, c * &sign);
            }
        }
        out
    }

    pub fn format_monomial(&self, m: &Monomial) -> String {
        let parts: Vec<String> = m
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                let name = &self.generators[i].name;
                if e == 1 {
                    name.clone()
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    /// Emits `poly` in the expression grammar; parsing the result gives `poly` back.
    pub fn format(&self, poly: &Polynomial) -> String {
        if poly.0.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (m, c)) in poly.0.iter().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            match (k, negative) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            let is_one = m.0.iter().all(|&e| e == 0);
            if is_one {
                out.push_str(&format_rational(&abs));
            } else if abs.is_one() {
                out.push_str(&self.format_monomial(m));
            } else {
                let _ = write!(out, "{}*{}", format_rational(&abs), self.format_monomial(m));
            }
        }
        out
    }

    fn check_generators(&self) -> Result<(), CdgaError> {
        for (i, g) in self.generators.iter().enumerate() {
            if self.generators[..i].iter().any(|h| h.name == g.name) {
                return Err(CdgaError::Duplicate(g.name.clone()));
            }
            if g.bidegree[0] < 0 || g.bidegree[1] < 0 {
                return Err(CdgaError::NegativeBidegree(g.name.clone()));
            }
            if g.bidegree == [0, 0] && !self.is_odd(i) {
                return Err(CdgaError::Unbounded(g.name.clone()));
            }
        }
        Ok(())
    }

    fn rules(&self, map: &'static str, src: &BTreeMap<String, String>) -> Result<Vec<Polynomial>, CdgaError> {
        for name in src.keys() {
            if self.index(name).is_none() {
                return Err(CdgaError::UnknownRule(name.clone()));
            }
        }
        let shift = if map == "d1" { (1, 0) } else { (0, 1) };
        self.generators
            .iter()
            .enumerate()
            .map(|(i, g)| {
                let Some(text) = src.get(&g.name) else {
                    return Ok(Polynomial::default());
                };
                let poly = parse_expression(text, self)?;
                let expected = self.generator_bidegree(i).shift(shift.0, shift.1);
                for m in poly.0.keys() {
                    let found = self.bidegree(m);
                    if found != expected {
                        return Err(CdgaError::Bidegree {
                            map,
                            generator: g.name.clone(),
                            term: self.format_monomial(m),
                            found,
                            expected,
                        });
                    }
                }
                Ok(poly)
            })
            .collect()
    }

    /// All monomials with bidegree inside `[0, max_p] × [0, max_q]`, sorted.
    fn box_monomials(&self) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut current = self.one();
        self.enumerate(0, Bidegree::new(0, 0), &mut current, &mut out);
        out.sort();
        out
    }

    fn enumerate(&self, i: usize, at: Bidegree, current: &mut Monomial, out: &mut Vec<Monomial>) {
        let t = &self.truncation;
        if i == self.generators.len() {
            out.push(current.clone());
            return;
        }
        let b = self.generator_bidegree(i);
        let max_e = if self.is_odd(i) { 1 } else { u32::MAX };
        let mut e = 0;
        let mut pos = at;
        while e <= max_e && pos.p <= t.max_p && pos.q <= t.max_q {
            current.0[i] = e;
            self.enumerate(i + 1, pos, current, out);
            e += 1;
            pos = pos.shift(b.p, b.q);
        }
        current.0[i] = 0;
    }

    fn retained(&self, m: &Monomial) -> bool {
        self.truncation.max_weight.is_none_or(|w| self.weight(m) <= w)
    }
}

impl Polynomial {
    pub fn monomial(m: Monomial) -> Self {
        let mut p = Polynomial::default();
        p.0.insert(m, Rational::one());
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.0.entry(m).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.0.retain(|_, v| !v.is_zero());
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    spec: &'a CdgaSpec,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, CdgaError> {
        Err(CdgaError::Syntax { position: self.pos, message: message.into() })
    }

    fn number(&mut self) -> Result<num_bigint::BigInt, CdgaError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.error("expected a number");
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits").parse().expect("digits parse"))
    }

    fn exponent(&mut self) -> Result<u32, CdgaError> {
        if self.peek() == Some(b'-') {
            return Err(CdgaError::NegativeExponent { position: self.pos });
        }
        let n = self.number()?;
        u32::try_from(n).or_else(|_| self.error("exponent too large"))
    }

    fn factor(&mut self, acc: &mut Polynomial) -> Result<(), CdgaError> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let num = self.number()?;
                let den = if self.peek() == Some(b'/') {
                    self.pos += 1;
                    let d = self.number()?;
                    if d.is_zero() {
                        return self.error("division by zero");
                    }
                    d
                } else {
                    num_bigint::BigInt::one()
                };
                let c = Rational::new(num, den);
                for v in acc.0.values_mut() {
                    *v *= &c;
                }
                acc.0.retain(|_, v| !v.is_zero());
                Ok(())
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii identifier");
                let i = self
                    .spec
                    .index(name)
                    .ok_or_else(|| CdgaError::Undeclared { name: name.into(), position: start })?;
                let e = if self.peek() == Some(b'^') {
                    self.pos += 1;
                    self.exponent()?
                } else {
                    1
                };
                for _ in 0..e {
                    *acc = self.spec.mul(acc, &Polynomial::monomial(self.spec.generator(i)));
                }
                Ok(())
            }
            Some(c) => self.error(format!("unexpected character {:?}", c as char)),
            None => self.error("unexpected end of expression"),
        }
    }

    fn term(&mut self) -> Result<Polynomial, CdgaError> {
        let mut acc = Polynomial::monomial(self.spec.one());
        self.factor(&mut acc)?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            self.factor(&mut acc)?;
        }
        Ok(acc)
    }

    fn expression(&mut self) -> Result<Polynomial, CdgaError> {
        let mut out = Polynomial::default();
        let mut negative = false;
        match self.peek() {
            Some(b'-') => {
                negative = true;
                self.pos += 1;
            }
            Some(b'+') => self.pos += 1,
            _ => {}
        }
        loop {
            let t = self.term()?;
            for (m, c) in t.0 {
                out.add_term(m, if negative { -c } else { c });
            }
            match self.peek() {
                Some(b'+') => negative = false,
                Some(b'-') => negative = true,
                None => return Ok(out),
                Some(c) => return self.error(format!("unexpected character {:?}", c as char)),
            }
            self.pos += 1;
        }
    }
}

/// Parses a sum of terms `c * x^e * y * …` into normalized form.
pub fn parse_expression(src: &str, spec: &CdgaSpec) -> Result<Polynomial, CdgaError> {
    Parser { src: src.as_bytes(), pos: 0, spec }.expression()
}

/// Enumerates the retained monomial basis and extends the rules as derivations.
pub fn build_cdga(spec: &CdgaSpec, name: &str) -> Result<DoubleComplex, CdgaError> {
    spec.check_generators()?;
    let d1 = spec.rules("d1", &spec.d1)?;
    let d2 = spec.rules("d2", &spec.d2)?;
    let all = spec.box_monomials();
    let (kept, dropped): (Vec<&Monomial>, Vec<&Monomial>) = all.iter().partition(|m| spec.retained(m));
    for m in &dropped {
        for (map, rules) in [("d1", &d1), ("d2", &d2)] {
            if let Some(k) = spec.derive(rules, m).0.keys().find(|x| {
                let b = spec.bidegree(x);
                b.p <= spec.truncation.max_p && b.q <= spec.truncation.max_q && spec.retained(x)
            }) {
                return Err(CdgaError::Unstable {
                    map,
                    discarded: spec.format_monomial(m),
                    kept: spec.format_monomial(k),
                });
            }
        }
    }
    let grid = Grid::new(spec.truncation.max_p as usize + 1, spec.truncation.max_q as usize + 1);
    let mut basis: BTreeMap<Bidegree, Vec<&Monomial>> = BTreeMap::new();
    for m in &kept {
        basis.entry(spec.bidegree(m)).or_default().push(m);
    }
    let position: HashMap<&Monomial, usize> =
        basis.values().flat_map(|v| v.iter().enumerate().map(|(i, m)| (*m, i))).collect();
    let mut data = ComplexData::new(name, grid, |b| basis.get(&b).map_or(0, Vec::len));
    for (b, monomials) in &basis {
        for (shift, rules, is_d1) in [((1, 0), &d1, true), ((0, 1), &d2, false)] {
            let target = b.shift(shift.0, shift.1);
            let rows = data.dim(target);
            if rows == 0 {
                continue;
            }
            let mut m = Matrix::zeros(rows, monomials.len());
            for (j, src) in monomials.iter().enumerate() {
                for (img, c) in spec.derive(rules, src).0 {
                    if let Some(&i) = position.get(&img) {
                        m[(i, j)] = c;
                    }
                }
            }
            let set = if is_d1 { data.set_d1(*b, m) } else { data.set_d2(*b, m) };
            set.map_err(|e: ComplexError| CdgaError::Invalid(e.to_string()))?;
        }
    }
    data.set_labels(|b| {
        basis.get(&b).map_or_else(Vec::new, |v| v.iter().map(|m| spec.format_monomial(m)).collect())
    })
    .map_err(|e| CdgaError::Invalid(e.to_string()))?;
    let report = data.validate();
    if !report.is_valid() {
        return Err(report.into());
    }
    Ok(DoubleComplex::new(data).expect("validated above"))
}

/// Generators, rules and weight truncation of the Calabi-Eckmann model with parameters
/// `0 ≤ u ≤ v`, i.e. `x01`, `x11`, `y` of bidegree `(u+1,u)` and `x` of bidegree `(v+1,v)`.
pub fn calabi_eckmann_spec(u: u32, v: u32, w: u32) -> CdgaSpec {
    let (ui, vi) = (u as i32, v as i32);
    let y = format!("y{}{}", u + 1, u);
    let x = format!("x{}{}", v + 1, v);
    let generators = vec![
        GeneratorSpec { name: "x01".into(), bidegree: [0, 1] },
        GeneratorSpec { name: "x11".into(), bidegree: [1, 1] },
        GeneratorSpec { name: y.clone(), bidegree: [ui + 1, ui] },
        GeneratorSpec { name: x, bidegree: [vi + 1, vi] },
    ];
    let bound = w as i32 + vi + 1;
    CdgaSpec {
        generators,
        d1: BTreeMap::from([("x01".to_string(), "x11".to_string())]),
        d2: BTreeMap::from([(y.clone(), format!("x11^{}", u + 1))]),
        truncation: Truncation {
            max_p: bound,
            max_q: bound,
            weights: BTreeMap::from([("x11".to_string(), 1), (y, u + 1)]),
            max_weight: Some(w),
        },
    }
}

/// The default weight bound `2(u+v+2)`.
pub fn default_weight(u: u32, v: u32) -> u32 {
    2 * (u + v + 2)
}

/// Truncated Calabi-Eckmann model. Columns `p ≤ W − (u+2)` are certified; the complex
/// is trimmed to the smallest grid containing its support.
pub fn example_calabi_eckmann(u: u32, v: u32, w: Option<u32>) -> Result<DoubleComplex, CdgaError> {
    assert!(u <= v, "the Calabi-Eckmann parameters must satisfy u ≤ v");
    let w = w.unwrap_or_else(|| default_weight(u, v));
    let min = 2 * u + v + 3;
    if w < min {
        return Err(CdgaError::WeightTooSmall { w, min });
    }
    let spec = calabi_eckmann_spec(u, v, w);
    let c = build_cdga(&spec, &format!("calabi-eckmann({u},{v}) W={w}"))?;
    let support = c.grid().bidegrees().filter(|&b| c.dim(b) > 0);
    let (p_max, q_max) = support.fold((0, 0), |(p, q), b| (p.max(b.p), q.max(b.q)));
    let mut data = c.regrid(Grid::new(p_max as usize + 1, q_max as usize + 1)).expect("support fits").into_data();
    data.set_certified_max_p(Some(w as i32 - (u as i32 + 2)));
    Ok(DoubleComplex::new(data).expect("regridding preserves validity"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ce11() -> CdgaSpec {
        calabi_eckmann_spec(1, 1, 8)
    }

    #[test]
    fn powers_and_odd_squares() {
        let s = ce11();
        let p = parse_expression("x11^2", &s).unwrap();
        assert_eq!(p.0.len(), 1);
        assert_eq!(p.0.keys().next().unwrap().0, vec![0, 2, 0, 0]);
        assert!(parse_expression("x01*x01", &s).unwrap().is_zero());
        assert!(parse_expression("x01^2", &s).unwrap().is_zero());
    }

    #[test]
    fn koszul_sign_on_reordering() {
        let s = ce11();
        let a = parse_expression("y21*x01", &s).unwrap();
        let b = parse_expression("-x01*y21", &s).unwrap();
        assert_eq!(a, b);
        let c = parse_expression("x11*x01", &s).unwrap();
        assert_eq!(c, parse_expression("x01*x11", &s).unwrap());
    }

    #[test]
    fn parse_errors() {
        let s = ce11();
        assert!(matches!(parse_expression("x11^-1", &s), Err(CdgaError::NegativeExponent { position: 4 })));
        assert!(matches!(parse_expression("x11 + z", &s), Err(CdgaError::Undeclared { position: 6, .. })));
        assert!(matches!(parse_expression("x11 +", &s), Err(CdgaError::Syntax { .. })));
        assert!(matches!(parse_expression("x11 ) ", &s), Err(CdgaError::Syntax { position: 4, .. })));
    }

    #[test]
    fn format_round_trips() {
        let s = ce11();
        let p = parse_expression("3/2*x11^2*x01 - 2*x21*y21 + 5", &s).unwrap();
        let text = s.format(&p);
        assert_eq!(parse_expression(&text, &s).unwrap(), p);
        assert_eq!(s.format(&Polynomial::default()), "0");
    }

    #[test]
    fn leibniz_rule_with_signs() {
        let s = ce11();
        let d1 = s.rules("d1", &s.d1).unwrap();
        let m = parse_expression("x01*x21", &s).unwrap();
        let (mono, _) = m.0.into_iter().next().unwrap();
        assert_eq!(s.derive(&d1, &mono), parse_expression("x11*x21", &s).unwrap());
        let d2 = s.rules("d2", &s.d2).unwrap();
        let m = parse_expression("x01*y21", &s).unwrap();
        let (mono, _) = m.0.into_iter().next().unwrap();
        assert_eq!(s.derive(&d2, &mono), parse_expression("-x01*x11^2", &s).unwrap());
    }

    #[test]
    fn rule_bidegrees_are_checked() {
        let mut s = ce11();
        s.d1.insert("x01".into(), "x11^2".into());
        assert!(matches!(build_cdga(&s, "bad"), Err(CdgaError::Bidegree { .. })));
    }

    #[test]
    fn unstable_truncation_is_rejected() {
        let mut s = ce11();
        s.truncation.weights.insert("x01".into(), 5);
        assert!(matches!(build_cdga(&s, "bad"), Err(CdgaError::Unstable { .. })));
    }

    #[test]
    fn powers_of_one_even_generator() {
        let s = CdgaSpec {
            generators: vec![GeneratorSpec { name: "x".into(), bidegree: [1, 1] }],
            d1: BTreeMap::new(),
            d2: BTreeMap::new(),
            truncation: Truncation { max_p: 3, max_q: 3, weights: BTreeMap::new(), max_weight: None },
        };
        let c = build_cdga(&s, "powers").unwrap();
        for b in c.grid().bidegrees() {
            assert_eq!(c.dim(b), usize::from(b.p == b.q));
        }
    }

    #[test]
    fn weight_bound_is_checked() {
        assert!(matches!(example_calabi_eckmann(1, 1, Some(5)), Err(CdgaError::WeightTooSmall { min: 6, .. })));
    }
}

//! The formal Adams-bigraded cdga on Steinberg and Totaro symbols.
//!
//! Every generator has cohomological degree 1, so as a graded-commutative
//! algebra over Q this is the exterior algebra on the generator alphabet.
//! Monomials are stored as strictly increasing generator lists; the sign of
//! the sorting permutation is absorbed into the coefficient. The Adams
//! weight never contributes a sign.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::{CoreError, Rational};

/// (cohomological degree, Adams weight).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Bidegree {
    pub cohomological: i32,
    pub adams: i32,
}

impl Bidegree {
    pub const ZERO: Bidegree = Bidegree { cohomological: 0, adams: 0 };

    pub const fn new(cohomological: i32, adams: i32) -> Self {
        Bidegree { cohomological, adams }
    }
}

impl Add for Bidegree {
    type Output = Bidegree;
    fn add(self, o: Bidegree) -> Bidegree {
        Bidegree::new(self.cohomological + o.cohomological, self.adams + o.adams)
    }
}

impl Sub for Bidegree {
    type Output = Bidegree;
    fn sub(self, o: Bidegree) -> Bidegree {
        Bidegree::new(self.cohomological - o.cohomological, self.adams - o.adams)
    }
}

impl fmt::Display for Bidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.cohomological, self.adams)
    }
}

/// Which of the two Steinberg symbols `[t]` / `[1-t]` a letter denotes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Flavor {
    Plain,
    Complement,
}

impl Flavor {
    pub fn flip(self) -> Flavor {
        match self {
            Flavor::Plain => Flavor::Complement,
            Flavor::Complement => Flavor::Plain,
        }
    }
}

/// Base point of a symbol: one of the two endpoints, or the variable of a
/// block of coordinates. Variables are numbered by the first coordinate
/// of their block (1 = U, 2 = V, ...).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Base {
    A,
    B,
    Var(u8),
}

impl Base {
    pub fn is_constant(self) -> bool {
        !matches!(self, Base::Var(_))
    }

    fn name(self) -> String {
        match self {
            Base::A => "a".into(),
            Base::B => "b".into(),
            Base::Var(i) => match i {
                1..=6 => ["U", "V", "W", "X", "Y", "Z"][i as usize - 1].into(),
                _ => format!("t{i}"),
            },
        }
    }
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

fn letter(base: Base, flavor: Flavor) -> String {
    match flavor {
        Flavor::Plain => base.name(),
        Flavor::Complement => format!("1-{}", base.name()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    Steinberg {
        base: Base,
        flavor: Flavor,
    },
    /// Canonical Totaro words only: length 2 words are `(Plain, Complement)`.
    Totaro {
        base: Base,
        word: Vec<Flavor>,
    },
}

impl Generator {
    pub fn bidegree(&self) -> Bidegree {
        match self {
            Generator::Steinberg { .. } => Bidegree::new(1, 1),
            Generator::Totaro { word, .. } => Bidegree::new(1, word.len() as i32),
        }
    }

    pub fn base(&self) -> Base {
        match self {
            Generator::Steinberg { base, .. } | Generator::Totaro { base, .. } => *base,
        }
    }

    fn with_base(&self, base: Base) -> Element {
        match self {
            Generator::Steinberg { flavor, .. } => Element::steinberg(base, *flavor),
            Generator::Totaro { word, .. } => Element::totaro(base, word),
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Steinberg { base, flavor } => write!(f, "[{}]", letter(*base, *flavor)),
            Generator::Totaro { base, word } => {
                let parts: Vec<String> = word.iter().map(|fl| letter(*base, *fl)).collect();
                write!(f, "T{{{}}}", parts.join(","))
            }
        }
    }
}

/// A strictly increasing product of distinct generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(Vec<Generator>);

impl Monomial {
    pub fn unit() -> Self {
        Monomial(Vec::new())
    }

    pub fn generators(&self) -> &[Generator] {
        &self.0
    }

    pub fn degree(&self) -> i32 {
        self.0.len() as i32
    }

    pub fn bidegree(&self) -> Bidegree {
        self.0.iter().fold(Bidegree::ZERO, |acc, g| acc + g.bidegree())
    }

    /// Sorts a generator list into a monomial, returning the Koszul sign of
    /// the sort, or `None` when a generator repeats.
    pub fn normalize(mut gens: Vec<Generator>) -> Option<(Monomial, bool)> {
        // insertion sort, counting transpositions
        let mut negative = false;
        for i in 1..gens.len() {
            let mut j = i;
            while j > 0 && gens[j - 1] > gens[j] {
                gens.swap(j - 1, j);
                negative = !negative;
                j -= 1;
            }
        }
        if gens.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        Some((Monomial(gens), negative))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self.0.iter().map(|g| g.to_string()).collect();
        f.write_str(&parts.join("*"))
    }
}

/// A finite Q-linear combination of monomials. Zero coefficients are never
/// stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Element {
    terms: BTreeMap<Monomial, Rational>,
}

impl Element {
    pub fn zero() -> Self {
        Element::default()
    }

    pub fn one() -> Self {
        Element::scalar(Rational::one())
    }

    pub fn scalar(q: Rational) -> Self {
        Element::from_monomial(Monomial::unit(), q)
    }

    pub fn from_monomial(m: Monomial, q: Rational) -> Self {
        let mut e = Element::zero();
        e.add_term(m, q);
        e
    }

    pub fn generator(g: Generator) -> Self {
        Element::from_monomial(Monomial(vec![g]), Rational::one())
    }

    /// `[x]` or `[1-x]`.
    pub fn steinberg(base: Base, flavor: Flavor) -> Self {
        Element::generator(Generator::Steinberg { base, flavor })
    }

    /// The Totaro symbol of a word, with the canonical conventions applied:
    /// a length-1 word is the Steinberg symbol, a word of repeated letters is
    /// zero and `T{1-x,x}` is `-T{x,1-x}`.
    pub fn totaro(base: Base, word: &[Flavor]) -> Self {
        match word.len() {
            0 => Element::one(),
            1 => Element::steinberg(base, word[0]),
            _ if word.iter().all(|f| *f == word[0]) => Element::zero(),
            2 if word[0] == Flavor::Complement => {
                -Element::generator(Generator::Totaro { base, word: vec![Flavor::Plain, Flavor::Complement] })
            }
            _ => Element::generator(Generator::Totaro { base, word: word.to_vec() }),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, m: Monomial, q: Rational) {
        if q.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(q);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += q;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, q: Rational) -> Element {
        if q.is_zero() {
            return Element::zero();
        }
        Element { terms: self.terms.iter().map(|(m, c)| (m.clone(), *c * q)).collect() }
    }

    /// The common bidegree of all terms; `None` for zero or heterogeneous
    /// elements.
    pub fn bidegree(&self) -> Option<Bidegree> {
        let mut it = self.terms.keys().map(Monomial::bidegree);
        let first = it.next()?;
        it.all(|b| b == first).then_some(first)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.bidegree().is_some()
    }

    /// The constant (unit-monomial) coefficient.
    pub fn constant_part(&self) -> Rational {
        self.coefficient(&Monomial::unit())
    }

    /// True when no generator with a variable base occurs.
    pub fn is_constant_only(&self) -> bool {
        self.terms.keys().all(|m| m.0.iter().all(|g| g.base().is_constant()))
    }

    pub fn multiply(&self, other: &Element) -> Element {
        let mut out = Element::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let gens: Vec<Generator> = m1.0.iter().chain(m2.0.iter()).cloned().collect();
                if let Some((m, neg)) = Monomial::normalize(gens) {
                    let c = *c1 * *c2;
                    out.add_term(m, if neg { -c } else { c });
                }
            }
        }
        out
    }

    /// The differential: zero on Steinberg symbols, the defining-system sum
    /// on Totaro symbols, extended as a derivation.
    pub fn differential(&self) -> Element {
        let mut out = Element::zero();
        for (m, c) in &self.terms {
            for (i, g) in m.0.iter().enumerate() {
                let dg = generator_differential(g);
                if dg.is_zero() {
                    continue;
                }
                let left = Element::from_monomial(Monomial(m.0[..i].to_vec()), Rational::one());
                let right = Element::from_monomial(Monomial(m.0[i + 1..].to_vec()), Rational::one());
                // every generator has degree 1
                let sign = if i % 2 == 0 { *c } else { -*c };
                out += &left.multiply(&dg).multiply(&right).scale(sign);
            }
        }
        out
    }

    /// `sum (-1)^deg(m) c_m m`: the sign picked up when the element passes an
    /// odd operator.
    pub fn parity_twist(&self) -> Element {
        Element {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), if m.degree() % 2 == 0 { *c } else { -*c })).collect(),
        }
    }

    /// `(-1)^(n-1) x` for `x` homogeneous of cohomological degree `n`.
    pub fn overline_cochain(&self) -> Result<Element, CoreError> {
        if self.is_zero() {
            return Ok(Element::zero());
        }
        let bd = self.bidegree().ok_or(CoreError::Heterogeneous)?;
        Ok(if (bd.cohomological - 1).rem_euclid(2) == 0 { self.clone() } else { -self.clone() })
    }

    /// The algebra homomorphism replacing the base of every symbol.
    pub fn substitute(&self, assignment: &dyn Fn(Base) -> Base) -> Element {
        let mut out = Element::zero();
        for (m, c) in &self.terms {
            let mut prod = Element::scalar(*c);
            for g in &m.0 {
                let b = g.base();
                let nb = assignment(b);
                let ge = if nb == b { Element::generator(g.clone()) } else { g.with_base(nb) };
                prod = prod.multiply(&ge);
                if prod.is_zero() {
                    break;
                }
            }
            out += &prod;
        }
        out
    }

    /// Canonical text form, deterministic term order, rationals as `p/q`.
    pub fn to_canonical_string(&self) -> String {
        self.to_string()
    }
}

/// `d` on a single generator.
pub fn generator_differential(g: &Generator) -> Element {
    match g {
        Generator::Steinberg { .. } => Element::zero(),
        Generator::Totaro { base, word } => crate::massey::totaro_differential(*base, word),
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            if m.0.is_empty() {
                write!(f, "{}", a)?;
            } else if a.is_one() {
                write!(f, "{}", m)?;
            } else {
                write!(f, "{}*{}", a, m)?;
            }
        }
        Ok(())
    }
}

impl AddAssign<&Element> for Element {
    fn add_assign(&mut self, o: &Element) {
        for (m, c) in &o.terms {
            self.add_term(m.clone(), *c);
        }
    }
}

impl SubAssign<&Element> for Element {
    fn sub_assign(&mut self, o: &Element) {
        for (m, c) in &o.terms {
            self.add_term(m.clone(), -*c);
        }
    }
}

impl Add for Element {
    type Output = Element;
    fn add(mut self, o: Element) -> Element {
        self += &o;
        self
    }
}

impl Sub for Element {
    type Output = Element;
    fn sub(mut self, o: Element) -> Element {
        self -= &o;
        self
    }
}

impl Neg for Element {
    type Output = Element;
    fn neg(self) -> Element {
        self.scale(-Rational::one())
    }
}

impl Mul for &Element {
    type Output = Element;
    fn mul(self, o: &Element) -> Element {
        self.multiply(o)
    }
}

impl Mul for Element {
    type Output = Element;
    fn mul(self, o: Element) -> Element {
        self.multiply(&o)
    }
}

/// Parses a product or sum written in the canonical form, e.g.
/// `-2*[a]*T{a,1-a} + [U]`.
pub fn parse_element(s: &str) -> Result<Element, CoreError> {
    let s = s.trim();
    if s == "0" || s.is_empty() {
        return Ok(Element::zero());
    }
    let mut out = Element::zero();
    let mut sign = Rational::one();
    let mut rest = s;
    if let Some(r) = rest.strip_prefix('-') {
        sign = -sign;
        rest = r.trim_start();
    }
    loop {
        // find next top-level " + " or " - "
        let mut depth = 0i32;
        let mut split = None;
        let bytes = rest.as_bytes();
        for i in 0..bytes.len() {
            match bytes[i] {
                b'[' | b'{' => depth += 1,
                b']' | b'}' => depth -= 1,
                b' ' if depth == 0
                    && i + 2 < bytes.len()
                    && (bytes[i + 1] == b'+' || bytes[i + 1] == b'-')
                    && bytes[i + 2] == b' ' =>
                {
                    split = Some(i);
                    break;
                }
                _ => {}
            }
        }
        let (term, next) = match split {
            Some(i) => (&rest[..i], Some((&rest[i + 1..i + 2], &rest[i + 3..]))),
            None => (rest, None),
        };
        out += &parse_term(term)?.scale(sign);
        match next {
            Some((op, r)) => {
                sign = if op == "-" { -Rational::one() } else { Rational::one() };
                rest = r;
            }
            None => break,
        }
    }
    Ok(out)
}

fn parse_term(s: &str) -> Result<Element, CoreError> {
    let mut acc = Element::one();
    for factor in split_top(s.trim(), '*') {
        let factor = factor.trim();
        let e = if factor.starts_with('[') || factor.starts_with("T{") {
            parse_generator(factor)?
        } else {
            let q: Rational = factor.parse().map_err(|_| CoreError::Parse(factor.to_string()))?;
            Element::scalar(q)
        };
        acc = acc.multiply(&e);
    }
    Ok(acc)
}

fn split_top(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '[' | '{' => depth += 1,
            ']' | '}' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

/// Parses a single letter such as `a`, `1-b`, `U`, `1-t7`.
pub fn parse_letter(s: &str) -> Result<(Base, Flavor), CoreError> {
    let s = s.trim();
    let (flavor, name) = match s.strip_prefix("1-") {
        Some(r) => (Flavor::Complement, r.trim()),
        None => (Flavor::Plain, s),
    };
    let base = match name {
        "a" => Base::A,
        "b" => Base::B,
        "U" => Base::Var(1),
        "V" => Base::Var(2),
        "W" => Base::Var(3),
        "X" => Base::Var(4),
        "Y" => Base::Var(5),
        "Z" => Base::Var(6),
        other => match other.strip_prefix('t').and_then(|d| d.parse::<u8>().ok()) {
            Some(i) => Base::Var(i),
            None => return Err(CoreError::Parse(s.to_string())),
        },
    };
    Ok((base, flavor))
}

fn parse_generator(s: &str) -> Result<Element, CoreError> {
    if let Some(inner) = s.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
        let (base, flavor) = parse_letter(inner)?;
        return Ok(Element::steinberg(base, flavor));
    }
    if let Some(inner) = s.strip_prefix("T{").and_then(|r| r.strip_suffix('}')) {
        let letters = inner.split(',').map(parse_letter).collect::<Result<Vec<_>, _>>()?;
        let base = letters.first().ok_or_else(|| CoreError::Parse(s.to_string()))?.0;
        if letters.iter().any(|(b, _)| *b != base) || letters.len() < 2 {
            return Err(CoreError::Parse(s.to_string()));
        }
        let word: Vec<Flavor> = letters.iter().map(|(_, f)| *f).collect();
        return Ok(Element::totaro(base, &word));
    }
    Err(CoreError::Parse(s.to_string()))
}

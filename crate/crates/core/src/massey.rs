//! Defining systems and representative cocycles for Massey products of
//! Steinberg symbols, and the differential of Totaro generators.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::cdga::{parse_letter, Base, Element, Flavor};
use crate::CoreError;

/// Differential of `T_w`: the sum over splittings `w = w' w''` of
/// `overline(T_{w'}) * T_{w''}`, with the canonical length-1 and length-2
/// conventions for the pieces.
pub fn totaro_differential(base: Base, word: &[Flavor]) -> Element {
    let mut out = Element::zero();
    for i in 1..word.len() {
        let left = Element::totaro(base, &word[..i]);
        let right = Element::totaro(base, &word[i..]);
        if left.is_zero() || right.is_zero() {
            continue;
        }
        let left = left.overline_cochain().expect("Totaro symbols are homogeneous");
        out += &left.multiply(&right);
    }
    out
}

/// A word of Steinberg letters, each with its own base.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MasseyWord(pub Vec<(Base, Flavor)>);

impl MasseyWord {
    /// All letters share `base`.
    pub fn uniform(base: Base, flavors: &[Flavor]) -> Self {
        MasseyWord(flavors.iter().map(|f| (base, *f)).collect())
    }

    /// Parses `a,1-a,a` style input.
    pub fn parse(s: &str) -> Result<Self, CoreError> {
        let letters = s.split(',').map(parse_letter).collect::<Result<Vec<_>, _>>()?;
        if letters.is_empty() {
            return Err(CoreError::Parse(s.to_string()));
        }
        Ok(MasseyWord(letters))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn sub(&self, range: (usize, usize)) -> MasseyWord {
        MasseyWord(self.0[range.0..range.1].to_vec())
    }

    fn common_base(&self) -> Option<Base> {
        let b = self.0.first()?.0;
        self.0.iter().all(|(x, _)| *x == b).then_some(b)
    }

    fn flavors(&self) -> Vec<Flavor> {
        self.0.iter().map(|(_, f)| *f).collect()
    }
}

impl fmt::Display for MasseyWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(b, fl)| match fl {
                Flavor::Plain => b.to_string(),
                Flavor::Complement => format!("1-{b}"),
            })
            .collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Bounding cochains indexed by contiguous subword `[start, end)` of a word.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct DefiningSystem {
    bounds: BTreeMap<(usize, usize), Element>,
}

impl DefiningSystem {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, start: usize, end: usize, bound: Element) {
        self.bounds.insert((start, end), bound);
    }

    pub fn get(&self, start: usize, end: usize) -> Option<&Element> {
        self.bounds.get(&(start, end))
    }

    /// Every proper subword of length at least 2 is bounded by its formal
    /// Totaro generator.
    pub fn canonical(w: &MasseyWord) -> Result<Self, CoreError> {
        let mut sys = DefiningSystem::new();
        let n = w.len();
        for len in 2..n {
            for start in 0..=n - len {
                let sub = w.sub((start, start + len));
                let base = sub.common_base().ok_or_else(|| CoreError::NoCanonicalBound(sub.to_string()))?;
                sys.set(start, start + len, Element::totaro(base, &sub.flavors()));
            }
        }
        Ok(sys)
    }

    fn bound(&self, w: &MasseyWord, start: usize, end: usize) -> Result<Element, CoreError> {
        if end - start == 1 {
            let (b, f) = w.0[start];
            return Ok(Element::steinberg(b, f));
        }
        self.get(start, end).cloned().ok_or_else(|| CoreError::IncompleteSystem(w.sub((start, end)).to_string()))
    }

    /// `sum_i overline(B(w[start..k])) * B(w[k..end])`.
    fn product_sum(&self, w: &MasseyWord, start: usize, end: usize) -> Result<Element, CoreError> {
        let mut out = Element::zero();
        for k in start + 1..end {
            let left = self.bound(w, start, k)?.overline_cochain()?;
            let right = self.bound(w, k, end)?;
            out += &left.multiply(&right);
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SystemFailure {
    pub subword: String,
    pub residual: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SystemReport {
    pub word: String,
    pub failures: Vec<SystemFailure>,
}

impl SystemReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks `d B(w') = sum overline(B(w'<=i)) B(w'>i)` for every proper
/// contiguous subword of length at least 2.
pub fn check_defining_system(w: &MasseyWord, sys: &DefiningSystem) -> SystemReport {
    let mut report = SystemReport { word: w.to_string(), failures: Vec::new() };
    let n = w.len();
    for len in 2..n {
        for start in 0..=n - len {
            let end = start + len;
            let label = w.sub((start, end)).to_string();
            let residual = match (sys.bound(w, start, end), sys.product_sum(w, start, end)) {
                (Ok(b), Ok(p)) => b.differential() - p,
                (Err(e), _) | (_, Err(e)) => {
                    report.failures.push(SystemFailure { subword: label, residual: e.to_string() });
                    continue;
                }
            };
            if !residual.is_zero() {
                report.failures.push(SystemFailure { subword: label, residual: residual.to_string() });
            }
        }
    }
    report
}

/// The cocycle `sum_i overline(B(w<=i)) B(w>i)` representing the Massey
/// product of the word.
pub fn massey_representative(w: &MasseyWord, sys: &DefiningSystem) -> Result<Element, CoreError> {
    if w.is_empty() {
        return Err(CoreError::Parse("empty Massey word".into()));
    }
    let report = check_defining_system(w, sys);
    if let Some(f) = report.failures.first() {
        return Err(CoreError::InvalidSystem { subword: f.subword.clone(), residual: f.residual.clone() });
    }
    if w.len() == 1 {
        let (b, f) = w.0[0];
        return Ok(Element::steinberg(b, f));
    }
    sys.product_sum(w, 0, w.len())
}

/// The indeterminacy `first * H + H * third` of a triple product.
#[derive(Clone, Debug, PartialEq)]
pub struct TripleIndeterminacy {
    pub left: Element,
    pub right: Element,
}

impl fmt::Display for TripleIndeterminacy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = if self.left.is_zero() { "0".to_string() } else { format!("({})*H", self.left) };
        let r = if self.right.is_zero() { "0".to_string() } else { format!("H*({})", self.right) };
        write!(f, "{l} + {r}")
    }
}

pub fn triple_indeterminacy(first: &Element, third: &Element) -> Result<TripleIndeterminacy, CoreError> {
    for x in [first, third] {
        if !x.is_homogeneous() {
            return Err(CoreError::Heterogeneous);
        }
        let dx = x.differential();
        if !dx.is_zero() {
            return Err(CoreError::NotCocycle(dx.to_string()));
        }
    }
    Ok(TripleIndeterminacy { left: first.clone(), right: third.clone() })
}

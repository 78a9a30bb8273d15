//! The reduced bar complex of the formal cdga.
//!
//! A word `r1 | ... | rn` has bar degree `|r1| + ... + |rn| - n`. The
//! differential is
//!
//! ```text
//! D(r1|...|rn) = Σ_i (-1)^(|r1|+...+|r(i-1)|) r1|...|d ri|...|rn
//!              + Σ_j (-1)^(|r1|+...+|rn|+j) r1|...|rj rj+1|...|rn
//! ```
//!
//! On words of bar degree 0 the product sign is `(-1)^(n+j)`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::cdga::{parse_element, Element, Monomial};
use crate::{CoreError, Rational};

/// `r1 | ... | rn`, letters in the augmentation ideal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BarWord(pub Vec<Element>);

impl BarWord {
    /// Parses letters separated by `|`, e.g. `[a] | T{a,1-a}`.
    pub fn parse(s: &str) -> Result<BarWord, CoreError> {
        if s.trim().is_empty() {
            return Ok(BarWord(Vec::new()));
        }
        s.split('|').map(|t| parse_element(t.trim())).collect::<Result<_, _>>().map(BarWord)
    }

    /// Multilinear expansion into monomial words.
    pub fn expand(&self) -> BarSum {
        let mut words: Vec<(Vec<Monomial>, Rational)> = vec![(Vec::new(), Rational::one())];
        for r in &self.0 {
            let mut next = Vec::new();
            for (w, c) in &words {
                for (m, q) in r.terms() {
                    let mut w = w.clone();
                    w.push(m.clone());
                    next.push((w, c * q));
                }
            }
            words = next;
        }
        let mut s = BarSum::zero();
        for (w, c) in words {
            s.add(w, c);
        }
        s
    }
}

/// A formal sum of monomial words. Words with a constant letter are zero
/// in the reduced complex and are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BarSum {
    terms: BTreeMap<Vec<Monomial>, Rational>,
}

impl BarSum {
    pub fn zero() -> Self {
        BarSum::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Monomial>, &Rational)> {
        self.terms.iter()
    }

    pub fn add(&mut self, w: Vec<Monomial>, c: Rational) {
        if c.is_zero() || w.iter().any(|m| m.degree() == 0) {
            return;
        }
        let e = self.terms.entry(w.clone()).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn add_sum(&mut self, o: &BarSum, c: Rational) {
        for (w, q) in &o.terms {
            self.add(w.clone(), c * q);
        }
    }

    /// Places `e` at position `i` of `w` (replacing `len` letters).
    fn add_spliced(&mut self, w: &[Monomial], i: usize, len: usize, e: &Element, c: Rational) {
        for (m, q) in e.terms() {
            let mut v = w[..i].to_vec();
            v.push(m.clone());
            v.extend_from_slice(&w[i + len..]);
            self.add(v, c * q);
        }
    }
}

impl fmt::Display for BarSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let word = if w.is_empty() {
                "1".to_string()
            } else {
                w.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(" | ")
            };
            let sign = if c.is_negative() { "-" } else { "+" };
            match (i, c.is_negative()) {
                (0, false) => {}
                (0, true) => f.write_str("-")?,
                _ => write!(f, " {sign} ")?,
            }
            if c.abs().is_one() {
                write!(f, "{word}")?;
            } else {
                write!(f, "{}*({word})", c.abs())?;
            }
        }
        Ok(())
    }
}

fn sign(k: i32) -> Rational {
    if k.rem_euclid(2) == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

fn monomial_word_differential(w: &[Monomial], out: &mut BarSum, c: Rational) {
    let total: i32 = w.iter().map(Monomial::degree).sum();
    let mut before = 0;
    for (i, m) in w.iter().enumerate() {
        let dm = Element::from_monomial(m.clone(), Rational::one()).differential();
        out.add_spliced(w, i, 1, &dm, c * sign(before));
        before += m.degree();
    }
    for j in 1..w.len() {
        let prod = Element::from_monomial(w[j - 1].clone(), Rational::one())
            .multiply(&Element::from_monomial(w[j].clone(), Rational::one()));
        out.add_spliced(w, j - 1, 2, &prod, c * sign(total + j as i32));
    }
}

pub fn bar_differential_sum(s: &BarSum) -> BarSum {
    let mut out = BarSum::zero();
    for (w, c) in s.terms() {
        monomial_word_differential(w, &mut out, *c);
    }
    out
}

pub fn bar_differential(w: &BarWord) -> BarSum {
    bar_differential_sum(&w.expand())
}

pub fn is_bar_cocycle(s: &BarSum) -> bool {
    bar_differential_sum(s).is_zero()
}

/// Bar-degree-0 cocycles spanned by words of at most `max_len` letters
/// from `letters` with total Adams weight `weight`, as a basis in reduced
/// echelon form. Letters of the formal cdga have positive degree, so no
/// degree -1 words exist and there are no boundaries to divide out.
pub fn h0_kernel_basis(letters: &[Element], max_len: usize, weight: i32) -> Result<Vec<BarSum>, CoreError> {
    for r in letters {
        r.bidegree().ok_or(CoreError::Heterogeneous)?;
        if r.constant_part() != Rational::zero() {
            return Err(CoreError::Shape(format!("{r} is not in the augmentation ideal")));
        }
    }
    // words as index lists, filtered by bar degree 0 and weight
    let mut words: Vec<Vec<usize>> = Vec::new();
    let mut layer: Vec<Vec<usize>> = vec![Vec::new()];
    for len in 0..=max_len {
        for w in &layer {
            let bd: Vec<_> = w.iter().map(|&i| letters[i].bidegree().expect("homogeneous")).collect();
            let deg: i32 = bd.iter().map(|b| b.cohomological).sum();
            let adams: i32 = bd.iter().map(|b| b.adams).sum();
            if deg == len as i32 && adams == weight {
                words.push(w.clone());
            }
        }
        if len < max_len {
            layer = layer.iter().flat_map(|w| (0..letters.len()).map(move |i| [w.clone(), vec![i]].concat())).collect();
        }
    }
    let sums: Vec<BarSum> =
        words.iter().map(|w| BarWord(w.iter().map(|&i| letters[i].clone()).collect()).expand()).collect();
    let images: Vec<BarSum> = sums.iter().map(bar_differential_sum).collect();
    let mut rows: BTreeMap<Vec<Monomial>, usize> = BTreeMap::new();
    for img in &images {
        for (w, _) in img.terms() {
            let k = rows.len();
            rows.entry(w.clone()).or_insert(k);
        }
    }
    let mut a = vec![vec![Rational::zero(); images.len()]; rows.len()];
    for (j, img) in images.iter().enumerate() {
        for (w, c) in img.terms() {
            a[rows[w]][j] = *c;
        }
    }
    Ok(nullspace(a, images.len())
        .into_iter()
        .map(|v| {
            let mut s = BarSum::zero();
            for (j, c) in v.iter().enumerate() {
                if !c.is_zero() {
                    s.add_sum(&sums[j], *c);
                }
            }
            s
        })
        .filter(|s| !s.is_zero())
        .collect())
}

/// Basis of `{x : A x = 0}`, one vector per free column.
fn nullspace(mut a: Vec<Vec<Rational>>, ncols: usize) -> Vec<Vec<Rational>> {
    let nrows = a.len();
    let mut pivots: Vec<usize> = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row == nrows {
            break;
        }
        let Some(p) = (row..nrows).find(|&i| !a[i][col].is_zero()) else { continue };
        a.swap(row, p);
        let inv = a[row][col].recip();
        for v in a[row].iter_mut() {
            *v *= inv;
        }
        for i in 0..nrows {
            if i != row && !a[i][col].is_zero() {
                let f = a[i][col];
                for j in col..ncols {
                    let sub = f * a[row][j];
                    a[i][j] -= sub;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Rational::zero(); ncols];
            v[free] = Rational::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -a[r][free];
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(s: &str) -> BarWord {
        BarWord::parse(s).unwrap()
    }

    fn el(s: &str) -> Element {
        parse_element(s).unwrap()
    }

    fn single(s: &str) -> BarSum {
        BarWord(vec![el(s)]).expand()
    }

    #[test]
    fn single_letter_is_d() {
        assert_eq!(bar_differential(&word("T{a,1-a}")), single("[a]*[1-a]"));
        assert!(bar_differential(&word("[a]")).is_zero());
    }

    #[test]
    fn two_steinberg_letters() {
        let mut want = BarSum::zero();
        want.add_sum(&single("[a]*[1-a]"), -Rational::one());
        assert_eq!(bar_differential(&word("[a] | [1-a]")), want);
        assert!(!is_bar_cocycle(&word("[a] | [1-a]").expand()));
    }

    #[test]
    fn corrected_word_is_a_cocycle() {
        let mut s = word("[a] | [1-a]").expand();
        s.add_sum(&single("T{a,1-a}"), Rational::one());
        assert!(is_bar_cocycle(&s));
        assert!(is_bar_cocycle(&BarSum::zero()));
        assert!(is_bar_cocycle(&BarWord(Vec::new()).expand()));
    }

    #[test]
    fn square_vanishes_off_degree_zero() {
        let w = word("[a] | T{b,1-b} | T{a,a,1-a}");
        assert!(bar_differential_sum(&bar_differential(&w)).is_zero());
    }

    #[test]
    fn kernel_examples() {
        let basis = h0_kernel_basis(&[el("[a]")], 1, 1).unwrap();
        assert_eq!(basis, vec![single("[a]")]);
        assert_eq!(h0_kernel_basis(&[], 2, 0).unwrap(), vec![BarWord(Vec::new()).expand()]);
        let letters = [el("[a]"), el("[1-a]"), el("T{a,1-a}")];
        let basis = h0_kernel_basis(&letters, 2, 2).unwrap();
        assert_eq!(basis.len(), 4);
        assert!(basis.iter().all(is_bar_cocycle));
        let mut s = word("[a] | [1-a]").expand();
        s.add_sum(&single("T{a,1-a}"), Rational::one());
        assert!(basis.contains(&s));
    }
}

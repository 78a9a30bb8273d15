//! Solving `d y = r` in the formal cdga by matching `r` against
//! differentials of products containing Totaro symbols.

use std::collections::{HashMap, HashSet};

use num_traits::{One, Zero};

use crate::cdga::{Base, Element, Flavor, Generator, Monomial};
use crate::{CoreError, Rational};

const MAX_ROUNDS: usize = 4;

/// Restricts candidate Totaro words per base. Without restrictions every
/// word is allowed.
#[derive(Clone, Debug, Default)]
pub struct TotaroFilter {
    words: Option<HashMap<Base, HashSet<Vec<Flavor>>>>,
}

impl TotaroFilter {
    pub fn any() -> Self {
        TotaroFilter { words: None }
    }

    /// Every contiguous subword of `word`, over `base`.
    pub fn subwords(base: Base, word: &[Flavor]) -> Self {
        let mut f = TotaroFilter { words: Some(HashMap::new()) };
        for i in 0..word.len() {
            for j in i + 2..=word.len() {
                f.allow(base, word[i..j].to_vec());
            }
        }
        f
    }

    /// The words a cell can produce: prefixes over `a`, suffixes over `b`,
    /// and over a block variable the runs starting at that block.
    pub fn for_cell(vars: &[Base], word: &[Option<Flavor>]) -> Self {
        let mut f = TotaroFilter { words: Some(HashMap::new()) };
        let m = word.len();
        for i in 0..m {
            for j in i + 2..=m {
                let Some(run) = word[i..j].iter().copied().collect::<Option<Vec<Flavor>>>() else { break };
                if i == 0 {
                    f.allow(Base::A, run.clone());
                }
                if j == m {
                    f.allow(Base::B, run.clone());
                }
                f.allow(vars[i], run);
            }
        }
        f
    }

    fn allow(&mut self, base: Base, w: Vec<Flavor>) {
        if let Some(words) = &mut self.words {
            words.entry(base).or_default().insert(w);
        }
    }

    pub fn allows(&self, base: Base, w: &[Flavor]) -> bool {
        let Some(words) = &self.words else { return true };
        if w.len() < 2 {
            return true;
        }
        let Some(set) = words.get(&base) else { return false };
        // T{1-x,x} and T{x,1-x} are the same generator up to sign
        set.contains(w) || (w.len() == 2 && set.contains(&vec![w[1], w[0]]))
    }
}

/// Words a generator can stand for; `T{x,1-x}` is also `-T{1-x,x}`.
fn words_of(g: &Generator) -> Vec<Vec<Flavor>> {
    match g {
        Generator::Steinberg { flavor, .. } => vec![vec![*flavor]],
        Generator::Totaro { word, .. } if word.len() == 2 => vec![word.clone(), vec![word[1], word[0]]],
        Generator::Totaro { word, .. } => vec![word.clone()],
    }
}

/// Monomials obtained from `m` by fusing two generators over the same base
/// into the Totaro symbol of their concatenated words.
fn fusions(m: &Monomial, filter: &TotaroFilter) -> Vec<Monomial> {
    let gens = m.generators();
    let mut out = Vec::new();
    for p in 0..gens.len() {
        for q in p + 1..gens.len() {
            let base = gens[p].base();
            if gens[q].base() != base {
                continue;
            }
            let rest: Vec<Generator> =
                gens.iter().enumerate().filter(|(i, _)| *i != p && *i != q).map(|(_, g)| g.clone()).collect();
            let Some((rest, _)) = Monomial::normalize(rest) else { continue };
            let rest = Element::from_monomial(rest, Rational::one());
            for (x, y) in [(p, q), (q, p)] {
                for wx in words_of(&gens[x]) {
                    for wy in words_of(&gens[y]) {
                        let w: Vec<Flavor> = wx.iter().chain(wy.iter()).copied().collect();
                        if !filter.allows(base, &w) {
                            continue;
                        }
                        let prod = Element::totaro(base, &w).multiply(&rest);
                        out.extend(prod.terms().next().map(|(m, _)| m.clone()));
                    }
                }
            }
        }
    }
    out
}

/// Finds `y` with `d y = r`, or reports `r` as unmatched.
pub fn integrate(r: &Element, filter: &TotaroFilter) -> Result<Element, CoreError> {
    if r.is_zero() {
        return Ok(Element::zero());
    }
    let mut candidates: Vec<Monomial> = Vec::new();
    let mut boundaries: Vec<Element> = Vec::new();
    let mut seen: HashSet<Monomial> = HashSet::new();
    let mut rows: HashMap<Monomial, usize> = HashMap::new();
    let mut frontier: Vec<Monomial> = Vec::new();
    for (m, _) in r.terms() {
        rows.insert(m.clone(), rows.len());
        frontier.push(m.clone());
    }
    for _ in 0..MAX_ROUNDS {
        let mut next = Vec::new();
        for m in &frontier {
            for c in fusions(m, filter) {
                if !seen.insert(c.clone()) {
                    continue;
                }
                let dc = Element::from_monomial(c.clone(), Rational::one()).differential();
                for (dm, _) in dc.terms() {
                    if !rows.contains_key(dm) {
                        rows.insert(dm.clone(), rows.len());
                        next.push(dm.clone());
                    }
                }
                candidates.push(c);
                boundaries.push(dc);
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }

    let ncols = candidates.len();
    let mut a = vec![vec![Rational::zero(); ncols + 1]; rows.len()];
    for (j, dc) in boundaries.iter().enumerate() {
        for (m, c) in dc.terms() {
            a[rows[m]][j] = *c;
        }
    }
    for (m, c) in r.terms() {
        a[rows[m]][ncols] = *c;
    }
    let x = solve(a, ncols).ok_or_else(|| CoreError::UnmatchedResidual(r.to_string()))?;
    let mut y = Element::zero();
    for (c, q) in candidates.into_iter().zip(x) {
        if !q.is_zero() {
            y.add_term(c, q);
        }
    }
    Ok(y)
}

/// Gaussian elimination on an augmented matrix; free variables are zero.
fn solve(mut a: Vec<Vec<Rational>>, ncols: usize) -> Option<Vec<Rational>> {
    let nrows = a.len();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(p) = (row..nrows).find(|&i| !a[i][col].is_zero()) else { continue };
        a.swap(row, p);
        let inv = a[row][col].recip();
        for v in a[row].iter_mut() {
            *v *= inv;
        }
        for i in 0..nrows {
            if i != row && !a[i][col].is_zero() {
                let factor = a[i][col];
                for j in col..=ncols {
                    let sub = factor * a[row][j];
                    a[i][j] -= sub;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == nrows {
            break;
        }
    }
    if a[row..].iter().any(|r| !r[ncols].is_zero()) {
        return None;
    }
    let mut x = vec![Rational::zero(); ncols];
    for (i, col) in pivots.into_iter().enumerate() {
        x[col] = a[i][ncols];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cdga::parse_element;
    use Flavor::{Complement as C, Plain as P};

    fn el(s: &str) -> Element {
        parse_element(s).unwrap()
    }

    #[test]
    fn integrates_steinberg_relation() {
        let y = integrate(&el("[a]*[1-a]*[W]"), &TotaroFilter::any()).unwrap();
        assert_eq!(y, el("T{a,1-a}*[W]"));
    }

    #[test]
    fn filter_picks_the_source_word() {
        let r = el("-2*[U]*T{U,1-U}");
        let y = integrate(&r, &TotaroFilter::subwords(Base::Var(1), &[P, C, P])).unwrap();
        assert_eq!(y, el("T{U,1-U,U}"));
        let y = integrate(&r, &TotaroFilter::subwords(Base::Var(1), &[P, P, C])).unwrap();
        assert_eq!(y, el("-2*T{U,U,1-U}"));
    }

    #[test]
    fn non_boundary_is_reported() {
        let err = integrate(&el("[a]*[b]"), &TotaroFilter::any()).unwrap_err();
        assert!(matches!(err, CoreError::UnmatchedResidual(_)));
    }

    #[test]
    fn solution_has_the_requested_boundary() {
        let r = el("[a]*T{1-a,a,1-a} + T{a,1-a,a}*[1-a]");
        let y = integrate(&r, &TotaroFilter::any()).unwrap();
        assert_eq!(y.differential(), r);
    }
}

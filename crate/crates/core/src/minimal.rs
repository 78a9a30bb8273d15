//! The minimal model: the quotient of the totalized cell module onto one
//! layer of `2^k` unit-free words per level.
//!
//! The quotient sends a cell whose word has no unit letter to that word,
//! whatever its face, and every other cell to zero. Level 0 cells all map to
//! the unit word.

use std::collections::HashMap;

use crate::cdga::{Base, Bidegree, Element, Flavor};
use crate::modules::{is_chain_map, vec_add, BasisElement, CellModule, ModuleMap, Vector};
use crate::path::{assemble, Assembly, Face, PathComplex};
use crate::CoreError;

/// A minimal cell module together with the unit-free words labelling its
/// basis.
#[derive(Clone, Debug)]
pub struct MinimalModule {
    pub n: usize,
    pub words: Vec<Vec<Flavor>>,
    pub module: CellModule,
}

/// Unit-free words of length `0..=n`, shortest first, `[v]` before `[1-v]`.
pub fn minimal_words(n: usize) -> Vec<Vec<Flavor>> {
    let mut out = vec![Vec::new()];
    let mut layer: Vec<Vec<Flavor>> = vec![Vec::new()];
    for _ in 0..n {
        layer = layer
            .iter()
            .flat_map(|w| {
                [Flavor::Plain, Flavor::Complement].into_iter().map(move |f| {
                    let mut w = w.clone();
                    w.push(f);
                    w
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

pub fn word_label(w: &[Flavor]) -> String {
    if w.is_empty() {
        return "1".into();
    }
    let mut e = Element::one();
    for (j, f) in w.iter().enumerate() {
        e = e.multiply(&Element::steinberg(Base::Var(j as u8 + 1), *f));
    }
    e.to_string().replace('*', "")
}

struct Quotient {
    index: HashMap<Vec<Flavor>, usize>,
}

impl Quotient {
    fn new(words: &[Vec<Flavor>]) -> Self {
        Quotient { index: words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect() }
    }

    fn image(&self, pc: &PathComplex, level: usize, idx: usize) -> Option<usize> {
        let w = &pc.cells[level][idx].word;
        let full: Option<Vec<Flavor>> = w.iter().copied().collect();
        full.map(|w| self.index[&w])
    }

    /// The quotient map on the totalized basis.
    fn map(&self, pc: &PathComplex, rank: usize) -> ModuleMap {
        let mut cols = Vec::new();
        for level in (0..=pc.n).rev() {
            for idx in 0..pc.rank(level) {
                let mut v = Vector::new();
                if let Some(i) = self.image(pc, level, idx) {
                    v.insert(i, Element::one());
                }
                cols.push(v);
            }
        }
        ModuleMap::from_columns(rank, Bidegree::ZERO, cols)
    }
}

/// Quotients the assembled cell module of `n` onto its minimal model.
pub fn minimize(n: usize) -> Result<(MinimalModule, Assembly), CoreError> {
    let asm = assemble(n);
    if !asm.report.passed() {
        let r = &asm.report.residuals[0];
        return Err(CoreError::NotChainMap(format!("{} fails on {}: {}", r.identity, r.cell, r.value)));
    }
    let pc = &asm.complex;
    let words = minimal_words(n);
    let q = Quotient::new(&words);
    let mut cols = Vec::with_capacity(words.len());
    for w in &words {
        let k = w.len();
        // section: the word on the face with n - k points pinned to a
        let face = Face::new(n - k, vec![1; k], 0);
        let letters: Vec<Option<Flavor>> = w.iter().map(|f| Some(*f)).collect();
        let src = pc.total_index(k, pc.cell_id(&face, &letters));
        let mut col = Vector::new();
        for (t, c) in asm.total.differential.column(src) {
            let (level, idx) = locate(pc, *t);
            if let Some(i) = q.image(pc, level, idx) {
                vec_add(&mut col, i, c);
            }
        }
        cols.push(col);
    }
    let basis = words.iter().map(|w| BasisElement::new(word_label(w), Bidegree::new(0, w.len() as i32))).collect();
    let module = CellModule::new(basis, ModuleMap::from_columns(words.len(), Bidegree::new(1, 0), cols));
    Ok((MinimalModule { n, words, module }, asm))
}

fn locate(pc: &PathComplex, mut t: usize) -> (usize, usize) {
    for level in (0..=pc.n).rev() {
        if t < pc.rank(level) {
            return (level, t);
        }
        t -= pc.rank(level);
    }
    panic!("index outside the totalized basis")
}

/// The quotient map from the totalized cell module, and whether it is a
/// chain map.
pub fn quotient_is_chain_map(m: &MinimalModule, asm: &Assembly) -> bool {
    let q = Quotient::new(&m.words).map(&asm.complex, m.module.rank());
    is_chain_map(&q, &asm.total, &m.module)
}

/// True iff no differential entry has a nonzero unit part.
pub fn check_minimal(m: &CellModule) -> bool {
    m.differential.entries().all(|(_, _, e)| e.constant_part() == crate::Rational::from_integer(0))
}

/// `(Adams weight, rank)` per layer.
pub fn weight_layers(m: &MinimalModule) -> Vec<(i32, usize)> {
    (0..=m.n).map(|k| (-(k as i32), m.words.iter().filter(|w| w.len() == k).count())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cdga::parse_element;

    #[test]
    fn n1_first_row() {
        let (m, _) = minimize(1).unwrap();
        let d = &m.module.differential;
        assert_eq!(d.entry(0, 1), parse_element("[b] - [a]").unwrap());
        assert_eq!(d.entry(0, 2), parse_element("[1-b] - [1-a]").unwrap());
        assert!(d.entry(1, 2).is_zero());
    }

    #[test]
    fn weight_layer_ranks() {
        let (m, _) = minimize(2).unwrap();
        assert_eq!(weight_layers(&m), vec![(0, 1), (-1, 2), (-2, 4)]);
        let (m, _) = minimize(0).unwrap();
        assert_eq!(weight_layers(&m), vec![(0, 1)]);
    }

    #[test]
    fn labels_follow_the_basis_order() {
        let labels: Vec<String> = minimal_words(2).iter().map(|w| word_label(w)).collect();
        assert_eq!(labels, ["1", "[U]", "[1-U]", "[U][V]", "[U][1-V]", "[1-U][V]", "[1-U][1-V]"]);
    }

    #[test]
    fn unit_entry_breaks_minimality() {
        let (mut m, _) = minimize(1).unwrap();
        assert!(check_minimal(&m.module));
        m.module.differential.set(1, 2, Element::one());
        assert!(!check_minimal(&m.module));
        let trivial = CellModule::free(vec![BasisElement::new("1", Bidegree::ZERO)]);
        assert!(check_minimal(&trivial));
    }

    #[test]
    fn quotient_is_a_chain_map_and_minimal() {
        for n in 0..=3 {
            let (m, asm) = minimize(n).unwrap();
            assert!(m.module.is_complex(), "n={n}");
            assert!(check_minimal(&m.module), "n={n}");
            assert!(quotient_is_chain_map(&m, &asm), "n={n}");
        }
    }
}

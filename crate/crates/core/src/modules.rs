//! Differential graded modules over the formal cdga.
//!
//! Modules are free on a finite labelled basis. An element is a vector of
//! left coefficients, and a module map is determined by its values on the
//! basis: `F(c e) = c F(e)`. The differential of a module satisfies
//! `d(c e) = d(c) e + (-1)^|c| c d(e)`.

use std::collections::BTreeMap;

use num_traits::One;
use serde::Serialize;

use crate::cdga::{Bidegree, Element};
use crate::{CoreError, Rational};

/// Left coefficients indexed by basis position.
pub type Vector = BTreeMap<usize, Element>;

pub fn vec_add(acc: &mut Vector, idx: usize, x: &Element) {
    if x.is_zero() {
        return;
    }
    let slot = acc.entry(idx).or_default();
    *slot += x;
    if slot.is_zero() {
        acc.remove(&idx);
    }
}

pub fn vec_add_all(acc: &mut Vector, other: &Vector, scale: Rational) {
    for (i, x) in other {
        vec_add(acc, *i, &x.scale(scale));
    }
}

/// Multiplies every coefficient on the left by `c`.
pub fn vec_left_mul(c: &Element, v: &Vector) -> Vector {
    let mut out = Vector::new();
    for (i, x) in v {
        vec_add(&mut out, *i, &c.multiply(x));
    }
    out
}

pub fn vec_to_string(v: &Vector, labels: &[BasisElement]) -> String {
    if v.is_empty() {
        return "0".into();
    }
    v.iter()
        .map(|(i, x)| format!("({})·{}", x, labels.get(*i).map(|b| b.label.as_str()).unwrap_or("?")))
        .collect::<Vec<_>>()
        .join(" + ")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasisElement {
    pub label: String,
    pub bidegree: Bidegree,
}

impl BasisElement {
    pub fn new(label: impl Into<String>, bidegree: Bidegree) -> Self {
        BasisElement { label: label.into(), bidegree }
    }
}

/// A matrix of left coefficients: column `j` holds the image of source
/// basis element `j`. `shift` is the bidegree of the map.
#[derive(Clone, Debug, PartialEq)]
pub struct ModuleMap {
    pub source_rank: usize,
    pub target_rank: usize,
    pub shift: Bidegree,
    columns: Vec<Vector>,
}

impl ModuleMap {
    pub fn zero(source_rank: usize, target_rank: usize, shift: Bidegree) -> Self {
        ModuleMap { source_rank, target_rank, shift, columns: vec![Vector::new(); source_rank] }
    }

    pub fn identity(rank: usize) -> Self {
        let mut m = ModuleMap::zero(rank, rank, Bidegree::ZERO);
        for i in 0..rank {
            m.set(i, i, Element::one());
        }
        m
    }

    pub fn from_columns(target_rank: usize, shift: Bidegree, columns: Vec<Vector>) -> Self {
        ModuleMap { source_rank: columns.len(), target_rank, shift, columns }
    }

    pub fn set(&mut self, row: usize, col: usize, x: Element) {
        if x.is_zero() {
            self.columns[col].remove(&row);
        } else {
            self.columns[col].insert(row, x);
        }
    }

    pub fn entry(&self, row: usize, col: usize) -> Element {
        self.columns[col].get(&row).cloned().unwrap_or_default()
    }

    pub fn column(&self, col: usize) -> &Vector {
        &self.columns[col]
    }

    pub fn columns(&self) -> &[Vector] {
        &self.columns
    }

    /// Nonzero entries as `(row, col, element)` in column-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Element)> {
        self.columns.iter().enumerate().flat_map(|(j, c)| c.iter().map(move |(i, x)| (*i, j, x)))
    }

    pub fn apply(&self, v: &Vector) -> Vector {
        let mut out = Vector::new();
        for (j, c) in v {
            for (i, x) in &self.columns[*j] {
                vec_add(&mut out, *i, &c.multiply(x));
            }
        }
        out
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &ModuleMap) -> ModuleMap {
        let cols = first.columns.iter().map(|c| self.apply(c)).collect();
        ModuleMap::from_columns(self.target_rank, first.shift + self.shift, cols)
    }

    pub fn add(&self, other: &ModuleMap) -> ModuleMap {
        let mut out = self.clone();
        for (j, c) in other.columns.iter().enumerate() {
            vec_add_all(&mut out.columns[j], c, Rational::one());
        }
        out
    }

    pub fn scale(&self, q: Rational) -> ModuleMap {
        let cols = self
            .columns
            .iter()
            .map(|c| c.iter().map(|(i, x)| (*i, x.scale(q))).filter(|(_, x)| !x.is_zero()).collect())
            .collect();
        ModuleMap::from_columns(self.target_rank, self.shift, cols)
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(|c| c.is_empty())
    }

    /// Checks that every entry has the bidegree forced by its row, column
    /// and the map's shift.
    pub fn check_homogeneous(&self, source: &CellModule, target: &CellModule) -> Result<(), CoreError> {
        if source.rank() != self.source_rank || target.rank() != self.target_rank {
            return Err(CoreError::Shape(format!(
                "map {}x{} against modules {}->{}",
                self.target_rank,
                self.source_rank,
                source.rank(),
                target.rank()
            )));
        }
        for (i, j, x) in self.entries() {
            let want = source.basis[j].bidegree + self.shift - target.basis[i].bidegree;
            if x.bidegree() != Some(want) {
                return Err(CoreError::Shape(format!("entry ({i},{j}) = {x} is not homogeneous of bidegree {want}")));
            }
        }
        Ok(())
    }
}

/// A free module with a differential given on the basis.
#[derive(Clone, Debug, PartialEq)]
pub struct CellModule {
    pub basis: Vec<BasisElement>,
    pub differential: ModuleMap,
}

impl CellModule {
    pub fn new(basis: Vec<BasisElement>, differential: ModuleMap) -> Self {
        CellModule { basis, differential }
    }

    /// Free module with zero differential.
    pub fn free(basis: Vec<BasisElement>) -> Self {
        let r = basis.len();
        CellModule { basis, differential: ModuleMap::zero(r, r, Bidegree::new(1, 0)) }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn degree(&self, i: usize) -> i32 {
        self.basis[i].bidegree.cohomological
    }

    /// `d(sum c_i e_i) = sum d(c_i) e_i + (-1)^|c_i| c_i d(e_i)`.
    pub fn d(&self, v: &Vector) -> Vector {
        let mut out = Vector::new();
        for (i, c) in v {
            vec_add(&mut out, *i, &c.differential());
            let col = self.differential.column(*i);
            if col.is_empty() {
                continue;
            }
            vec_add_all(&mut out, &vec_left_mul(&c.parity_twist(), col), Rational::one());
        }
        out
    }

    fn unit(&self, i: usize) -> Vector {
        let mut v = Vector::new();
        v.insert(i, Element::one());
        v
    }

    /// Basis elements whose `d^2` is nonzero, with the residual.
    pub fn d_squared_residuals(&self) -> Vec<(usize, Vector)> {
        (0..self.rank())
            .filter_map(|i| {
                let dd = self.d(&self.d(&self.unit(i)));
                (!dd.is_empty()).then_some((i, dd))
            })
            .collect()
    }

    pub fn is_complex(&self) -> bool {
        self.d_squared_residuals().is_empty()
    }

    pub fn check_homogeneous(&self) -> Result<(), CoreError> {
        self.differential.check_homogeneous(self, self)
    }
}

/// Brace shift: bidegrees move by `(-n, -n)`, so `shift(A, -1)` has its
/// generator in `(1, 1)`.
pub fn shift(m: &CellModule, n: i32) -> CellModule {
    let basis = m.basis.iter().map(|b| BasisElement::new(b.label.clone(), b.bidegree - Bidegree::new(n, n))).collect();
    CellModule::new(basis, m.differential.clone())
}

/// Adams-only twist `M(r)`: weights move by `r`, so `A(-1)` has its
/// generator in `(0, 1)`.
pub fn adams_twist(m: &CellModule, r: i32) -> CellModule {
    let basis = m.basis.iter().map(|b| BasisElement::new(b.label.clone(), b.bidegree - Bidegree::new(0, r))).collect();
    CellModule::new(basis, m.differential.clone())
}

pub fn sphere(p: i32, q: i32) -> CellModule {
    CellModule::free(vec![BasisElement::new(format!("i^{p},{q}"), Bidegree::new(p, q))])
}

/// The cone on `sphere(p + 1, q)`.
pub fn disk(p: i32, q: i32) -> CellModule {
    let s = sphere(p + 1, q);
    cofiber_unchecked(&s, &s, &ModuleMap::identity(1))
}

/// `sum_i (-1)^|e_i| c_i f(e_i)` summed over a basis expansion.
fn overline_column(f: &ModuleMap, source: &CellModule, j: usize) -> Vector {
    let col = f.column(j);
    if source.degree(j) % 2 == 0 {
        col.clone()
    } else {
        col.iter().map(|(i, x)| (*i, -x.clone())).collect()
    }
}

/// `d_N ∘ f - f ∘ d_M` on every basis element.
pub fn chain_map_residual(f: &ModuleMap, source: &CellModule, target: &CellModule) -> Vec<(usize, Vector)> {
    (0..source.rank())
        .filter_map(|j| {
            let fe = f.column(j).clone();
            let mut r = target.d(&fe);
            let fd = f.apply(&source.differential.column(j).clone());
            // f(d(e)) where d(e) = sum c_i e_i: f left-linear
            vec_add_all(&mut r, &fd, -Rational::one());
            (!r.is_empty()).then_some((j, r))
        })
        .collect()
}

pub fn is_chain_map(f: &ModuleMap, source: &CellModule, target: &CellModule) -> bool {
    chain_map_residual(f, source, target).is_empty()
}

fn cofiber_unchecked(source: &CellModule, target: &CellModule, f: &ModuleMap) -> CellModule {
    totalize(&[source.clone(), target.clone()], &[vec![f.clone()]])
}

/// The mapping cone: basis `source[I] ⊕ target` with differential
/// `((d_M, 0), (f̄, d_N))`, `f̄(x) = (-1)^|x| f(x)`.
pub fn cofiber(source: &CellModule, target: &CellModule, f: &ModuleMap) -> Result<CellModule, CoreError> {
    let res = chain_map_residual(f, source, target);
    if let Some((j, r)) = res.first() {
        return Err(CoreError::NotChainMap(format!("{}: {}", source.basis[*j].label, vec_to_string(r, &target.basis))));
    }
    Ok(cofiber_unchecked(source, target, f))
}

/// Verifies `d h - h d = (-1)^|e| (f - g)` on every basis element `e`,
/// where `h` stands for `m ↦ h(m ⊗ [I])`.
pub fn homotopy_residual(
    h: &ModuleMap,
    f: &ModuleMap,
    g: &ModuleMap,
    source: &CellModule,
    target: &CellModule,
) -> Vec<(usize, Vector)> {
    (0..source.rank())
        .filter_map(|j| {
            let mut r = target.d(h.column(j));
            vec_add_all(&mut r, &h.apply(source.differential.column(j)), -Rational::one());
            let sign = if source.degree(j) % 2 == 0 { Rational::one() } else { -Rational::one() };
            vec_add_all(&mut r, f.column(j), -sign);
            vec_add_all(&mut r, g.column(j), sign);
            (!r.is_empty()).then_some((j, r))
        })
        .collect()
}

pub fn check_homotopy(h: &ModuleMap, f: &ModuleMap, g: &ModuleMap, source: &CellModule, target: &CellModule) -> bool {
    homotopy_residual(h, f, g, source, target).is_empty()
}

/// Squares `W -α-> Y`, `X -β-> Z`, `f: W -> X`, `g: Y -> Z` and a homotopy
/// `h: βf ≃ gα` induce `C(f) -> C(g)`, `x + w[I] ↦ β(x) + h(w) + α(w)[I]`.
#[allow(clippy::too_many_arguments)]
pub fn cofiber_map(
    w: &CellModule,
    x: &CellModule,
    y: &CellModule,
    z: &CellModule,
    alpha: &ModuleMap,
    beta: &ModuleMap,
    f: &ModuleMap,
    g: &ModuleMap,
    h: &ModuleMap,
) -> Result<ModuleMap, CoreError> {
    let bf = beta.compose(f);
    let ga = g.compose(alpha);
    let res = homotopy_residual(h, &bf, &ga, w, z);
    if let Some((j, r)) = res.first() {
        return Err(CoreError::NotHomotopy(format!("{}: {}", w.basis[*j].label, vec_to_string(r, &z.basis))));
    }
    // C(f) = W[I] ⊕ X, C(g) = Y[I] ⊕ Z
    let (nw, ny) = (w.rank(), y.rank());
    let mut cols = Vec::with_capacity(nw + x.rank());
    for j in 0..nw {
        let mut c = Vector::new();
        for (i, e) in alpha.column(j) {
            vec_add(&mut c, *i, e);
        }
        for (i, e) in h.column(j) {
            vec_add(&mut c, ny + *i, e);
        }
        cols.push(c);
    }
    for j in 0..x.rank() {
        cols.push(beta.column(j).iter().map(|(i, e)| (ny + *i, e.clone())).collect());
    }
    Ok(ModuleMap::from_columns(ny + z.rank(), Bidegree::ZERO, cols))
}

/// Totalization of a homotopy-coherent complex `M_top -> ... -> M_bottom`.
///
/// `maps[j][i]` goes from `modules[i]` to `modules[i + j + 1]` (so `j = 0`
/// are the first-order maps and `j >= 1` the higher homotopies). The module
/// at list position `i` is placed with a cohomological shift of
/// `-(L - 1 - i)`. The total differential is lower triangular with the
/// module differentials on the diagonal and `x ↦ (-1)^|x| m(x)` below it,
/// where `|x|` is the degree inside the component.
pub fn totalize(modules: &[CellModule], maps: &[Vec<ModuleMap>]) -> CellModule {
    let l = modules.len();
    let offsets: Vec<usize> = modules
        .iter()
        .scan(0usize, |acc, m| {
            let o = *acc;
            *acc += m.rank();
            Some(o)
        })
        .collect();
    let total: usize = modules.iter().map(CellModule::rank).sum();
    let mut basis = Vec::with_capacity(total);
    for (i, m) in modules.iter().enumerate() {
        let k = (l - 1 - i) as i32;
        for b in &m.basis {
            basis.push(BasisElement::new(b.label.clone(), b.bidegree - Bidegree::new(k, 0)));
        }
    }
    let mut cols = vec![Vector::new(); total];
    for (i, m) in modules.iter().enumerate() {
        for j in 0..m.rank() {
            let col = &mut cols[offsets[i] + j];
            for (r, e) in m.differential.column(j) {
                vec_add(col, offsets[i] + r, e);
            }
        }
    }
    for (order, layer) in maps.iter().enumerate() {
        for (i, f) in layer.iter().enumerate() {
            let t = i + order + 1;
            if t >= l {
                continue;
            }
            for j in 0..modules[i].rank() {
                let col = overline_column(f, &modules[i], j);
                let dst = &mut cols[offsets[i] + j];
                for (r, e) in col {
                    vec_add(dst, offsets[t] + r, &e);
                }
            }
        }
    }
    CellModule::new(basis, ModuleMap::from_columns(total, Bidegree::new(1, 0), cols))
}

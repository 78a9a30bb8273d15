//! The path-torsor complex `B_*` of face cochain models, its free cell model
//! `C_*`, and the maps and homotopies relating them.
//!
//! A face of `X^n` groups consecutive coordinates into blocks; coordinates
//! before the first block are pinned to `a` and those after the last block
//! to `b`. Block `j` is parametrized by the variable of its first coordinate,
//! so on `X^3` the face `{a} x Δ` has the single block variable `V`.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use num_traits::One;
use serde::Serialize;

use crate::cdga::{Base, Bidegree, Element, Flavor};
use crate::integrate::{integrate, TotaroFilter};
use crate::modules::{totalize, vec_add, vec_add_all, vec_left_mul, BasisElement, CellModule, ModuleMap, Vector};
use crate::{CoreError, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Face {
    pub a_pins: usize,
    pub blocks: Vec<usize>,
    pub b_pins: usize,
}

impl Ord for Face {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .a_pins
            .cmp(&self.a_pins)
            .then_with(|| self.blocks.cmp(&other.blocks))
            .then_with(|| self.b_pins.cmp(&other.b_pins))
    }
}

impl PartialOrd for Face {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// The `i`-th coface of a face with `m` blocks: `0` pins the first block to
/// `a`, `m` pins the last block to `b`, anything between merges blocks `i`
/// and `i + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coface {
    PinA,
    Merge(usize),
    PinB,
}

impl Face {
    pub fn new(a_pins: usize, blocks: Vec<usize>, b_pins: usize) -> Self {
        Face { a_pins, blocks, b_pins }
    }

    pub fn n(&self) -> usize {
        self.a_pins + self.blocks.iter().sum::<usize>() + self.b_pins
    }

    pub fn level(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_var(&self, j: usize) -> Base {
        Base::Var((1 + self.a_pins + self.blocks[..j].iter().sum::<usize>()) as u8)
    }

    pub fn cofaces(&self) -> Vec<Coface> {
        let m = self.level();
        if m == 0 {
            return Vec::new();
        }
        let mut out = vec![Coface::PinA];
        out.extend((1..m).map(Coface::Merge));
        out.push(Coface::PinB);
        out
    }

    /// `(-1)^i` for the `i`-th coface.
    pub fn coface_sign(&self, c: Coface) -> Rational {
        let i = match c {
            Coface::PinA => 0,
            Coface::Merge(i) => i,
            Coface::PinB => self.level(),
        };
        if i % 2 == 0 {
            Rational::one()
        } else {
            -Rational::one()
        }
    }

    pub fn apply(&self, c: Coface) -> Face {
        let mut f = self.clone();
        match c {
            Coface::PinA => f.a_pins += f.blocks.remove(0),
            Coface::Merge(i) => {
                let s = f.blocks.remove(i);
                f.blocks[i - 1] += s;
            }
            Coface::PinB => f.b_pins += f.blocks.pop().expect("face has a block"),
        }
        f
    }

    /// The base substitution realizing restriction along a coface.
    pub fn substitution(&self, c: Coface) -> (Base, Base) {
        match c {
            Coface::PinA => (self.block_var(0), Base::A),
            Coface::Merge(i) => (self.block_var(i), self.block_var(i - 1)),
            Coface::PinB => (self.block_var(self.level() - 1), Base::B),
        }
    }

    /// Pins the first `k` blocks to `a`.
    fn pin_a(&self, k: usize) -> Face {
        let s: usize = self.blocks[..k].iter().sum();
        Face::new(self.a_pins + s, self.blocks[k..].to_vec(), self.b_pins)
    }

    fn pin_b(&self, k: usize) -> Face {
        let m = self.level();
        let s: usize = self.blocks[m - k..].iter().sum();
        Face::new(self.a_pins, self.blocks[..m - k].to_vec(), self.b_pins + s)
    }
}

/// Coordinates of the face, e.g. `(a,U,U,b)` for `{a} x Δ_X x {b}`.
impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut coords = vec!["a".to_string(); self.a_pins];
        for (j, s) in self.blocks.iter().enumerate() {
            let v = self.block_var(j).to_string();
            coords.extend(std::iter::repeat_n(v, *s));
        }
        coords.extend(std::iter::repeat_n("b".to_string(), self.b_pins));
        write!(f, "({})", coords.join(","))
    }
}

fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 1..=total.saturating_sub(parts - 1) {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// All faces of `X^n`, indexed by level.
pub fn build_face_lattice(n: usize) -> Vec<Vec<Face>> {
    let mut levels = vec![Vec::new(); n + 1];
    for p in 0..=n {
        for q in 0..=n - p {
            let free = n - p - q;
            for m in 0..=free {
                for blocks in compositions(free, m) {
                    levels[m].push(Face::new(p, blocks, q));
                }
            }
        }
    }
    for l in &mut levels {
        l.sort();
    }
    levels
}

/// One letter of a cell word: `None` is the unit, otherwise `[v]` or `[1-v]`.
pub type Letter = Option<Flavor>;
pub type Word = Vec<Letter>;

pub fn reduced_length(w: &[Letter]) -> usize {
    w.iter().filter(|l| l.is_some()).count()
}

/// The non-unit letters, in order.
pub fn reduced_word(w: &[Letter]) -> Vec<Flavor> {
    w.iter().flatten().copied().collect()
}

fn letters() -> [Letter; 3] {
    [None, Some(Flavor::Plain), Some(Flavor::Complement)]
}

fn words(m: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    for _ in 0..m {
        out = out
            .into_iter()
            .flat_map(|w| {
                letters().into_iter().map(move |l| {
                    let mut w = w.clone();
                    w.push(l);
                    w
                })
            })
            .collect();
    }
    out
}

fn sign(odd: bool) -> Rational {
    if odd {
        -Rational::one()
    } else {
        Rational::one()
    }
}

/// A basis element of `C_k`: a word on a face with `k` blocks.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cell {
    pub face: usize,
    pub word: Word,
}

/// Face lattice and cell bases for a fixed `n`.
#[derive(Clone, Debug)]
pub struct PathComplex {
    pub n: usize,
    pub faces: Vec<Vec<Face>>,
    pub cells: Vec<Vec<Cell>>,
    face_index: Vec<HashMap<Face, usize>>,
    cell_index: Vec<HashMap<(usize, Word), usize>>,
}

impl PathComplex {
    pub fn new(n: usize) -> Self {
        let faces = build_face_lattice(n);
        let face_index = faces.iter().map(|l| l.iter().cloned().enumerate().map(|(i, f)| (f, i)).collect()).collect();
        let cells: Vec<Vec<Cell>> = faces
            .iter()
            .enumerate()
            .map(|(k, l)| {
                (0..l.len()).flat_map(|face| words(k).into_iter().map(move |word| Cell { face, word })).collect()
            })
            .collect();
        let cell_index =
            cells.iter().map(|l| l.iter().enumerate().map(|(i, c)| ((c.face, c.word.clone()), i)).collect()).collect();
        PathComplex { n, faces, cells, face_index, cell_index }
    }

    pub fn rank(&self, level: usize) -> usize {
        self.cells[level].len()
    }

    pub fn face_id(&self, f: &Face) -> usize {
        self.face_index[f.level()][f]
    }

    pub fn cell_id(&self, f: &Face, w: &[Letter]) -> usize {
        self.cell_index[f.level()][&(self.face_id(f), w.to_vec())]
    }

    pub fn cell_face(&self, level: usize, idx: usize) -> &Face {
        &self.faces[level][self.cells[level][idx].face]
    }

    /// Product of the block Steinberg symbols of a word on a face.
    pub fn word_element(face: &Face, w: &[Letter]) -> Element {
        let mut out = Element::one();
        for (j, l) in w.iter().enumerate() {
            if let Some(fl) = l {
                out = out.multiply(&Element::steinberg(face.block_var(j), *fl));
            }
        }
        out
    }

    pub fn cell_label(&self, level: usize, idx: usize) -> String {
        let c = &self.cells[level][idx];
        let face = &self.faces[level][c.face];
        let w = PathComplex::word_element(face, &c.word);
        format!("{w}@{face}")
    }

    /// `C_k` with zero differential; a word with `l` non-unit letters sits in
    /// bidegree `(l, l)`.
    pub fn level_module(&self, level: usize) -> CellModule {
        let basis = self.cells[level]
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let l = reduced_length(&c.word) as i32;
                BasisElement::new(self.cell_label(level, i), Bidegree::new(l, l))
            })
            .collect();
        CellModule::free(basis)
    }

    fn unit_at(&self, face: &Face, w: &[Letter], c: Element) -> Vector {
        let mut v = Vector::new();
        vec_add(&mut v, self.cell_id(face, w), &c);
        v
    }

    /// `alpha` on one cell of level `k`: the signed coface sum, with the
    /// endpoint symbols moved to the left and mixed merges dropped.
    pub fn alpha_cell(&self, level: usize, idx: usize) -> Vector {
        let c = &self.cells[level][idx];
        let face = &self.faces[level][c.face];
        let w = &c.word;
        let m = w.len();
        let mut out = Vector::new();
        for cf in face.cofaces() {
            let s = face.coface_sign(cf);
            let target = face.apply(cf);
            match cf {
                Coface::PinA => {
                    let coeff = w[0].map_or_else(Element::one, |fl| Element::steinberg(Base::A, fl));
                    vec_add_all(&mut out, &self.unit_at(&target, &w[1..], coeff), s);
                }
                Coface::PinB => {
                    let rest = &w[..m - 1];
                    let coeff = w[m - 1].map_or_else(Element::one, |fl| Element::steinberg(Base::B, fl));
                    let koszul = w[m - 1].is_some() && reduced_length(rest) % 2 == 1;
                    vec_add_all(&mut out, &self.unit_at(&target, rest, coeff), s * sign(koszul));
                }
                Coface::Merge(i) => {
                    let merged = match (w[i - 1], w[i]) {
                        (None, x) | (x, None) => x,
                        _ => continue,
                    };
                    let mut nw = w.clone();
                    nw.remove(i);
                    nw[i - 1] = merged;
                    vec_add_all(&mut out, &self.unit_at(&target, &nw, Element::one()), s);
                }
            }
        }
        out
    }

    pub fn alpha(&self, level: usize) -> ModuleMap {
        let cols = (0..self.rank(level)).map(|i| self.alpha_cell(level, i)).collect();
        ModuleMap::from_columns(self.rank(level - 1), Bidegree::ZERO, cols)
    }

    /// `beta` on a vector of face elements at `level` (indexed by face).
    pub fn beta(&self, level: usize, x: &Vector) -> Vector {
        let mut out = Vector::new();
        for (fi, e) in x {
            let face = &self.faces[level][*fi];
            for cf in face.cofaces() {
                let (from, to) = face.substitution(cf);
                let img = e.substitute(&|b| if b == from { to } else { b });
                let tid = self.face_id(&face.apply(cf));
                vec_add(&mut out, tid, &img.scale(face.coface_sign(cf)));
            }
        }
        out
    }

    /// `f` on one cell: its word as a product of block Steinberg symbols.
    pub fn f_cell(&self, level: usize, idx: usize) -> Vector {
        let c = &self.cells[level][idx];
        let mut out = Vector::new();
        vec_add(&mut out, c.face, &PathComplex::word_element(&self.faces[level][c.face], &c.word));
        out
    }

    /// Closed-form `h^k` on one cell of `level`, landing in `level - k`.
    pub fn h_closed(&self, level: usize, k: usize, idx: usize) -> Vector {
        let c = &self.cells[level][idx];
        let face = &self.faces[level][c.face];
        let w = &c.word;
        let m = w.len();
        let mut out = Vector::new();
        if k < 2 || k > m {
            return out;
        }
        let l = reduced_length(w);
        let lambda = l * (k - 1) + k * (k - 1) / 2;
        let s = sign(lambda % 2 == 1);
        if let Some(head) = w[..k].iter().copied().collect::<Option<Vec<Flavor>>>() {
            let t = Element::totaro(Base::A, &head);
            vec_add_all(&mut out, &self.unit_at(&face.pin_a(k), &w[k..], t), s);
        }
        if let Some(tail) = w[m - k..].iter().copied().collect::<Option<Vec<Flavor>>>() {
            let t = Element::totaro(Base::B, &tail);
            let units = (m - k) - reduced_length(&w[..m - k]);
            let s = -s * sign(k * units % 2 == 1);
            vec_add_all(&mut out, &self.unit_at(&face.pin_b(k), &w[..m - k], t), s);
        }
        out
    }

    /// Closed-form `H^k` on one cell of `level`, landing in the face models
    /// of `level - k`: the signed sum over groupings of the blocks into runs
    /// whose reduced lengths add up to `k`.
    pub fn big_h_closed(&self, level: usize, k: usize, idx: usize) -> Vector {
        let c = &self.cells[level][idx];
        let face = &self.faces[level][c.face];
        let w = &c.word;
        let m = w.len();
        let mut out = Vector::new();
        if k == 0 {
            return self.f_cell(level, idx);
        }
        if k >= m {
            return out;
        }
        let l = reduced_length(w);
        let mu = l * k + k * (k - 1) / 2;
        let s = sign(mu % 2 == 1);
        for runs in compositions(m, m - k) {
            let mut start = 0;
            let mut prod = Element::one();
            let mut blocks = Vec::with_capacity(runs.len());
            let mut twist = 0;
            for r in &runs {
                twist += (r - 1) * (start - reduced_length(&w[..start]));
                let var = face.block_var(start);
                let piece = &w[start..start + r];
                let factor = if *r == 1 {
                    piece[0].map_or_else(Element::one, |fl| Element::steinberg(var, fl))
                } else {
                    match piece.iter().copied().collect::<Option<Vec<Flavor>>>() {
                        Some(fw) => Element::totaro(var, &fw),
                        None => Element::zero(),
                    }
                };
                prod = prod.multiply(&factor);
                blocks.push(face.blocks[start..start + r].iter().sum());
                start += r;
            }
            if prod.is_zero() {
                continue;
            }
            let target = Face::new(face.a_pins, blocks, face.b_pins);
            vec_add(&mut out, self.face_id(&target), &prod.scale(s * sign(twist % 2 == 1)));
        }
        out
    }
}

/// The coherent families `h^k` and `H^k`, indexed by source level.
#[derive(Clone, Debug, PartialEq)]
pub struct Homotopies {
    /// `h[i][k][e]` goes from level `i` to level `i - k`; `h[i][1]` is `alpha`.
    pub h: Vec<Vec<Vec<Vector>>>,
    /// `big[i][k][e]` is a vector of face elements at level `i - k`;
    /// `big[i][0]` is `f`.
    pub big: Vec<Vec<Vec<Vector>>>,
}

impl Homotopies {
    /// `alpha` and `f` filled in, every higher homotopy zero.
    fn strict(pc: &PathComplex) -> Self {
        let mut h = Vec::with_capacity(pc.n + 1);
        let mut big = Vec::with_capacity(pc.n + 1);
        for i in 0..=pc.n {
            let r = pc.rank(i);
            let mut hi = vec![vec![Vector::new(); r]; i + 1];
            if i >= 1 {
                hi[1] = (0..r).map(|e| pc.alpha_cell(i, e)).collect();
            }
            let mut bi = vec![vec![Vector::new(); r]; i + 1];
            bi[0] = (0..r).map(|e| pc.f_cell(i, e)).collect();
            h.push(hi);
            big.push(bi);
        }
        Homotopies { h, big }
    }

    /// `h^k` from `level` as a module map.
    pub fn h_map(&self, pc: &PathComplex, level: usize, k: usize) -> ModuleMap {
        let shift = Bidegree::new(1 - k as i32, 0);
        ModuleMap::from_columns(pc.rank(level - k), shift, self.h[level][k].clone())
    }
}

/// All homotopies from the closed formulas; `H` into level 0 is zero.
pub fn homotopies_closed(pc: &PathComplex) -> Homotopies {
    let mut fam = Homotopies::strict(pc);
    for i in 2..=pc.n {
        for k in 2..=i {
            fam.h[i][k] = (0..pc.rank(i)).map(|e| pc.h_closed(i, k, e)).collect();
        }
    }
    for i in 2..=pc.n {
        for k in 1..i {
            fam.big[i][k] = (0..pc.rank(i)).map(|e| pc.big_h_closed(i, k, e)).collect();
        }
    }
    fam
}

/// One vector per level.
pub type Leveled = Vec<Vector>;

fn leveled(n: usize) -> Leveled {
    vec![Vector::new(); n + 1]
}

fn unit(idx: usize) -> Vector {
    let mut v = Vector::new();
    v.insert(idx, Element::one());
    v
}

impl PathComplex {
    /// The total differential of `C`: `d` on coefficients plus
    /// `(-1)^|x| h^k(x)` for every `k >= 1`.
    pub fn d_c(&self, fam: &Homotopies, level: usize, v: &Vector) -> Leveled {
        let mut out = leveled(self.n);
        for (t, c) in v {
            vec_add(&mut out[level], *t, &c.differential());
            let l = reduced_length(&self.cells[level][*t].word);
            let tw = c.parity_twist().scale(sign(l % 2 == 1));
            for k in 1..=level {
                let col = &fam.h[level][k][*t];
                if !col.is_empty() {
                    vec_add_all(&mut out[level - k], &vec_left_mul(&tw, col), Rational::one());
                }
            }
        }
        out
    }

    /// The total differential of `B`: `d` on each face element plus
    /// `(-1)^|x| beta(x)`.
    pub fn d_b(&self, level: usize, x: &Vector) -> Leveled {
        let mut out = leveled(self.n);
        let mut twisted = Vector::new();
        for (f, e) in x {
            vec_add(&mut out[level], *f, &e.differential());
            vec_add(&mut twisted, *f, &e.parity_twist());
        }
        if level > 0 {
            out[level - 1] = self.beta(level, &twisted);
        }
        out
    }

    /// The comparison map `sum_k H^k`, with `H^0 = f`.
    pub fn phi(&self, fam: &Homotopies, level: usize, v: &Vector) -> Leveled {
        let mut out = leveled(self.n);
        for (t, c) in v {
            for k in 0..=level {
                let col = &fam.big[level][k][*t];
                if !col.is_empty() {
                    vec_add_all(&mut out[level - k], &vec_left_mul(c, col), Rational::one());
                }
            }
        }
        out
    }

    fn apply_leveled(&self, x: &Leveled, op: impl Fn(usize, &Vector) -> Leveled) -> Leveled {
        let mut out = leveled(self.n);
        for (l, v) in x.iter().enumerate() {
            if v.is_empty() {
                continue;
            }
            for (tl, tv) in op(l, v).into_iter().enumerate() {
                vec_add_all(&mut out[tl], &tv, Rational::one());
            }
        }
        out
    }

    /// Totalization of `C_n -> ... -> C_0` with the given homotopies.
    pub fn total_c(&self, fam: &Homotopies) -> CellModule {
        let modules: Vec<CellModule> = (0..=self.n).rev().map(|l| self.level_module(l)).collect();
        let maps: Vec<Vec<ModuleMap>> =
            (1..=self.n).map(|k| (k..=self.n).rev().map(|l| fam.h_map(self, l, k)).collect()).collect();
        totalize(&modules, &maps)
    }

    /// Position of a level-`level` cell in the totalized basis.
    pub fn total_index(&self, level: usize, idx: usize) -> usize {
        (level + 1..=self.n).map(|l| self.rank(l)).sum::<usize>() + idx
    }
}

fn leveled_is_zero(x: &Leveled) -> bool {
    x.iter().all(Vector::is_empty)
}

fn leveled_sub(a: &Leveled, b: &Leveled) -> Leveled {
    let mut out = a.clone();
    for (l, v) in b.iter().enumerate() {
        vec_add_all(&mut out[l], v, -Rational::one());
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct Residual {
    pub identity: String,
    pub cell: String,
    pub value: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct AssemblyReport {
    pub n: usize,
    pub cells: usize,
    pub residuals: Vec<Residual>,
}

impl AssemblyReport {
    pub fn passed(&self) -> bool {
        self.residuals.is_empty()
    }
}

fn show_leveled(pc: &PathComplex, x: &Leveled, cells: bool) -> String {
    let mut parts = Vec::new();
    for (l, v) in x.iter().enumerate() {
        for (i, e) in v {
            let at = if cells { pc.cell_label(l, *i) } else { pc.faces[l][*i].to_string() };
            parts.push(format!("({e})@{at}"));
        }
    }
    parts.join(" + ")
}

/// Checks `D_C^2 = 0`, `D_B^2 = 0` on the image of the comparison map, and
/// `Phi D_C = D_B Phi`, on every cell.
pub fn verify(pc: &PathComplex, fam: &Homotopies) -> AssemblyReport {
    let mut report = AssemblyReport { n: pc.n, cells: 0, residuals: Vec::new() };
    for level in 0..=pc.n {
        for e in 0..pc.rank(level) {
            report.cells += 1;
            let v = unit(e);
            let mut push = |identity: &str, x: &Leveled, cells: bool| {
                if !leveled_is_zero(x) {
                    report.residuals.push(Residual {
                        identity: identity.into(),
                        cell: pc.cell_label(level, e),
                        value: show_leveled(pc, x, cells),
                    });
                }
            };
            let dce = pc.d_c(fam, level, &v);
            let ddc = pc.apply_leveled(&dce, |l, x| pc.d_c(fam, l, x));
            push("D_C^2", &ddc, true);
            let phie = pc.phi(fam, level, &v);
            let dbphi = pc.apply_leveled(&phie, |l, x| pc.d_b(l, x));
            let ddb = pc.apply_leveled(&dbphi, |l, x| pc.d_b(l, x));
            push("D_B^2", &ddb, false);
            let phidc = pc.apply_leveled(&dce, |l, x| pc.phi(fam, l, x));
            push("H D_C = D_B H", &leveled_sub(&phidc, &dbphi), false);
        }
    }
    report
}

/// Builds the families degree by degree, integrating each coherence
/// residual against the Totaro catalog.
pub fn homotopies_inductive(pc: &PathComplex) -> Result<Homotopies, CoreError> {
    let (fam, err) = homotopies_inductive_partial(pc);
    match err {
        Some(e) => Err(e),
        None => Ok(fam),
    }
}

/// As `homotopies_inductive`, but returns whatever was built before the
/// first unmatched residual.
pub fn homotopies_inductive_partial(pc: &PathComplex) -> (Homotopies, Option<CoreError>) {
    let mut fam = Homotopies::strict(pc);
    let err = fill_inductive(pc, &mut fam).err();
    (fam, err)
}

fn fill_inductive(pc: &PathComplex, fam: &mut Homotopies) -> Result<(), CoreError> {
    for i in 1..=pc.n {
        for e in 0..pc.rank(i) {
            let word = &pc.cells[i][e].word;
            let face = pc.cell_face(i, e);
            let vars: Vec<Base> = (0..face.level()).map(|j| face.block_var(j)).collect();
            let filter = TotaroFilter::for_cell(&vars, word);
            let l = reduced_length(word);
            let v = unit(e);
            for k in 1..=i {
                if k >= 2 {
                    let dce = pc.d_c(fam, i, &v);
                    let q = &pc.apply_leveled(&dce, |lv, x| pc.d_c(fam, lv, x))[i - k];
                    let mut y = Vector::new();
                    for (t, r) in q {
                        let target = r.scale(-sign(l % 2 == 1));
                        let c = integrate(&target, &filter).map_err(|err| unmatched(pc, "h", k, i, e, err))?;
                        vec_add(&mut y, *t, &c);
                    }
                    fam.h[i][k][e] = y;
                }
                let dce = pc.d_c(fam, i, &v);
                let phidc = &pc.apply_leveled(&dce, |lv, x| pc.phi(fam, lv, x))[i - k];
                let phie = pc.phi(fam, i, &v);
                let dbphi = &pc.apply_leveled(&phie, |lv, x| pc.d_b(lv, x))[i - k];
                let mut r = phidc.clone();
                vec_add_all(&mut r, dbphi, -Rational::one());
                let mut y = Vector::new();
                for (f, x) in &r {
                    let c = integrate(x, &filter).map_err(|err| unmatched(pc, "H", k, i, e, err))?;
                    vec_add(&mut y, *f, &c);
                }
                fam.big[i][k][e] = y;
            }
        }
    }
    Ok(())
}

fn unmatched(pc: &PathComplex, which: &str, k: usize, level: usize, e: usize, err: CoreError) -> CoreError {
    CoreError::UnmatchedResidual(format!("{which}^{k} on {}: {err}", pc.cell_label(level, e)))
}

/// The assembled complexes with their homotopies and verification report.
#[derive(Clone, Debug)]
pub struct Assembly {
    pub complex: PathComplex,
    pub homotopies: Homotopies,
    pub total: CellModule,
    pub report: AssemblyReport,
}

/// Builds `C`, `B` and `H` from the closed formulas and verifies them.
pub fn assemble(n: usize) -> Assembly {
    let complex = PathComplex::new(n);
    let homotopies = homotopies_closed(&complex);
    let total = complex.total_c(&homotopies);
    let report = verify(&complex, &homotopies);
    Assembly { complex, homotopies, total, report }
}

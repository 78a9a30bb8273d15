//! Multivariate polynomials and rational functions over `Q`, in the
//! constant `a` (variable 0) and the cycle parameters `x1, x2, ...`
//! (variables 1, 2, ...).

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

/// Exponent vectors carry no trailing zeros, so `Vec` order is pure lex
/// with variable 0 most significant.
type Exps = Vec<u32>;

fn trim(mut e: Exps) -> Exps {
    while e.last() == Some(&0) {
        e.pop();
    }
    e
}

fn exp_mul(a: &Exps, b: &Exps) -> Exps {
    let mut out = vec![0; a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, x) in b.iter().enumerate() {
        out[i] += x;
    }
    out
}

fn exp_of(e: &Exps, v: usize) -> u32 {
    e.get(v).copied().unwrap_or(0)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    terms: BTreeMap<Exps, Q>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        let mut p = Poly::zero();
        p.add_term(Vec::new(), c);
        p
    }

    pub fn int(c: i64) -> Self {
        Poly::constant(Q::from_integer(BigInt::from(c)))
    }

    pub fn var(v: usize) -> Self {
        Poly::var_pow(v, 1)
    }

    pub fn var_pow(v: usize, k: u32) -> Self {
        let mut e = vec![0; v + 1];
        e[v] = k;
        let mut p = Poly::zero();
        p.add_term(trim(e), Q::one());
        p
    }

    fn add_term(&mut self, e: Exps, c: Q) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(Q::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value if the polynomial has no variables at all.
    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    /// Highest variable index occurring.
    pub fn top_var(&self) -> Option<usize> {
        self.terms.keys().filter(|e| !e.is_empty()).map(|e| e.len() - 1).max()
    }

    /// True iff no parameter (variable >= 1) occurs.
    pub fn is_param_free(&self) -> bool {
        self.top_var().is_none_or(|v| v == 0)
    }

    pub fn deg(&self, v: usize) -> u32 {
        self.terms.keys().map(|e| exp_of(e, v)).max().unwrap_or(0)
    }

    pub fn neg(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut p = self.clone();
        for (e, c) in &o.terms {
            p.add_term(e.clone(), c.clone());
        }
        p
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut p = Poly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                p.add_term(exp_mul(e1, e2), c1 * c2);
            }
        }
        p
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect() }
    }

    pub fn pow(&self, k: u32) -> Poly {
        (0..k).fold(Poly::one(), |acc, _| acc.mul(self))
    }

    fn leading(&self) -> Option<(&Exps, &Q)> {
        self.terms.iter().next_back()
    }

    /// Scales to leading coefficient 1 (zero stays zero).
    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some((_, c)) => self.scale(&c.recip()),
            None => Poly::zero(),
        }
    }

    /// Coefficients of `v^0, v^1, ...`, each free of `v`.
    pub fn coeffs_in(&self, v: usize) -> Vec<Poly> {
        let mut out = vec![Poly::zero(); self.deg(v) as usize + 1];
        for (e, c) in &self.terms {
            let k = exp_of(e, v) as usize;
            let mut e = e.clone();
            if v < e.len() {
                e[v] = 0;
            }
            out[k].add_term(trim(e), c.clone());
        }
        out
    }

    pub fn coeff_of(&self, v: usize, k: u32) -> Poly {
        self.coeffs_in(v).into_iter().nth(k as usize).unwrap_or_default()
    }

    pub fn derivative(&self, v: usize) -> Poly {
        let mut p = Poly::zero();
        for (e, c) in &self.terms {
            let k = exp_of(e, v);
            if k > 0 {
                let mut e = e.clone();
                e[v] -= 1;
                p.add_term(trim(e), c * Q::from_integer(BigInt::from(k)));
            }
        }
        p
    }

    /// Exact division; `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (de, dc) = d.leading()?;
        let (de, dc) = (de.clone(), dc.clone());
        let mut r = self.clone();
        let mut q = Poly::zero();
        while let Some((e, c)) = r.leading() {
            if e.len() < de.len() || de.iter().enumerate().any(|(i, x)| exp_of(e, i) < *x) {
                return None;
            }
            let qe: Exps = trim((0..e.len()).map(|i| exp_of(e, i) - exp_of(&de, i)).collect());
            let qc = c / &dc;
            let mut t = Poly::zero();
            t.add_term(qe, qc);
            r = r.sub(&t.mul(d));
            q = q.add(&t);
        }
        Some(q)
    }

    /// Pseudo-remainder of `self` by `b` with respect to `v`.
    fn prem(&self, b: &Poly, v: usize) -> Poly {
        let db = b.deg(v);
        let lb = b.coeff_of(v, db);
        let mut r = self.clone();
        while !r.is_zero() && r.deg(v) >= db {
            let dr = r.deg(v);
            let lr = r.coeff_of(v, dr);
            r = r.mul(&lb).sub(&lr.mul(b).mul(&Poly::var_pow(v, dr - db)));
        }
        r
    }

    /// Gcd of the coefficients with respect to `v`.
    pub fn content_in(&self, v: usize) -> Poly {
        self.coeffs_in(v).iter().fold(Poly::zero(), |g, c| gcd(&g, c))
    }

    fn primitive_in(&self, v: usize) -> Poly {
        self.div_exact(&self.content_in(v)).expect("content divides")
    }

    /// Renames variable `w` to `w - 1` for every `w > v`; `v` must not occur.
    pub fn drop_var(&self, v: usize) -> Poly {
        let mut p = Poly::zero();
        for (e, c) in &self.terms {
            debug_assert_eq!(exp_of(e, v), 0);
            let mut e = e.clone();
            if v < e.len() {
                e.remove(v);
            }
            p.add_term(trim(e), c.clone());
        }
        p
    }

    /// Applies `f` to every variable index.
    pub fn rename(&self, f: impl Fn(usize) -> usize) -> Poly {
        let mut p = Poly::zero();
        for (e, c) in &self.terms {
            let mut out: Exps = Vec::new();
            for (i, k) in e.iter().enumerate() {
                if *k > 0 {
                    let j = f(i);
                    if out.len() <= j {
                        out.resize(j + 1, 0);
                    }
                    out[j] += k;
                }
            }
            p.add_term(trim(out), c.clone());
        }
        p
    }

    /// Substitutes `v = num / den`, returning `(numerator, den^deg)`.
    fn subs(&self, v: usize, num: &Poly, den: &Poly) -> (Poly, Poly) {
        let d = self.deg(v);
        let mut out = Poly::zero();
        for (k, c) in self.coeffs_in(v).iter().enumerate() {
            if !c.is_zero() {
                out = out.add(&c.mul(&num.pow(k as u32)).mul(&den.pow(d - k as u32)));
            }
        }
        (out, den.pow(d))
    }

    /// Irreducible-in-practice factors with multiplicities: repeated
    /// content extraction plus square-free splitting. Factors free of
    /// parameters are dropped.
    pub fn param_factors(&self) -> Vec<(Poly, u32)> {
        let mut out: Vec<(Poly, u32)> = Vec::new();
        self.split_into(1, &mut out);
        out
    }

    fn split_into(&self, mult: u32, out: &mut Vec<(Poly, u32)>) {
        if self.is_param_free() {
            return;
        }
        let top = self.top_var().unwrap_or(0);
        for v in 1..=top {
            if self.deg(v) == 0 {
                continue;
            }
            let c = self.content_in(v);
            if c.top_var().is_some() {
                c.split_into(mult, out);
                self.div_exact(&c).expect("content divides").split_into(mult, out);
                return;
            }
            if self.deg(v) >= 2 {
                let g = gcd(self, &self.derivative(v));
                if g.top_var().is_some() {
                    let rest = self.div_exact(&g).expect("gcd divides");
                    g.split_into(mult, out);
                    rest.split_into(mult, out);
                    return;
                }
            }
        }
        let f = self.monic();
        match out.iter_mut().find(|(g, _)| *g == f) {
            Some((_, m)) => *m += mult,
            None => out.push((f, mult)),
        }
    }
}

/// Monic gcd over `Q`; `gcd(0, 0) = 0`.
pub fn gcd(f: &Poly, g: &Poly) -> Poly {
    if f.is_zero() {
        return g.monic();
    }
    if g.is_zero() {
        return f.monic();
    }
    let Some(v) = f.top_var().max(g.top_var()) else { return Poly::one() };
    let cf = f.content_in(v);
    let cg = g.content_in(v);
    let c = gcd(&cf, &cg);
    if f.deg(v) == 0 || g.deg(v) == 0 {
        return c;
    }
    let mut a = f.div_exact(&cf).expect("content divides");
    let mut b = g.div_exact(&cg).expect("content divides");
    if a.deg(v) < b.deg(v) {
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        let r = a.prem(&b, v);
        if r.is_zero() {
            break;
        }
        if r.deg(v) == 0 {
            b = Poly::one();
            break;
        }
        a = b;
        b = r.primitive_in(v);
    }
    c.mul(&b.primitive_in(v)).monic()
}

fn var_name(v: usize) -> String {
    if v == 0 {
        "a".into()
    } else {
        format!("x{v}")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, k)| **k > 0)
                .map(|(v, k)| if *k == 1 { var_name(v) } else { format!("{}^{k}", var_name(v)) })
                .collect();
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            if mono.is_empty() {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs}*")?;
                }
                write!(f, "{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

/// A reduced quotient `num / den` with monic denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> RatFunc {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RatFunc { num, den: Poly::one() };
        }
        let g = gcd(&num, &den);
        let num = num.div_exact(&g).expect("gcd divides");
        let den = den.div_exact(&g).expect("gcd divides");
        let lc = den.leading().map(|(_, c)| c.recip()).expect("nonzero");
        RatFunc { num: num.scale(&lc), den: den.scale(&lc) }
    }

    pub fn poly(p: Poly) -> RatFunc {
        RatFunc::new(p, Poly::one())
    }

    pub fn int(c: i64) -> RatFunc {
        RatFunc::poly(Poly::int(c))
    }

    pub fn var(v: usize) -> RatFunc {
        RatFunc::poly(Poly::var(v))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    pub fn is_param_free(&self) -> bool {
        self.num.is_param_free() && self.den.is_param_free()
    }

    pub fn top_var(&self) -> Option<usize> {
        self.num.top_var().max(self.den.top_var())
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        RatFunc::new(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den))
    }

    pub fn sub(&self, o: &RatFunc) -> RatFunc {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        RatFunc::new(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    /// `None` on division by zero.
    pub fn div(&self, o: &RatFunc) -> Option<RatFunc> {
        (!o.is_zero()).then(|| RatFunc::new(self.num.mul(&o.den), self.den.mul(&o.num)))
    }

    pub fn rename(&self, f: impl Fn(usize) -> usize + Copy) -> RatFunc {
        RatFunc::new(self.num.rename(f), self.den.rename(f))
    }

    pub fn drop_var(&self, v: usize) -> RatFunc {
        RatFunc { num: self.num.drop_var(v), den: self.den.drop_var(v) }
    }

    /// Value at `v = r`; `None` means infinity.
    pub fn subs(&self, v: usize, r: &RatFunc) -> Option<RatFunc> {
        if self.num.deg(v) == 0 && self.den.deg(v) == 0 {
            return Some(self.clone());
        }
        let (n, dn) = self.num.subs(v, &r.num, &r.den);
        let (d, dd) = self.den.subs(v, &r.num, &r.den);
        // n/dn over d/dd
        let num = n.mul(&dd);
        let den = d.mul(&dn);
        (!den.is_zero()).then(|| RatFunc::new(num, den))
    }

    /// Limit as `v` goes to infinity; `None` means infinity.
    pub fn subs_infinity(&self, v: usize) -> Option<RatFunc> {
        let (dn, dd) = (self.num.deg(v), self.den.deg(v));
        if dn > dd {
            return None;
        }
        if dn < dd {
            return Some(RatFunc::int(0));
        }
        Some(RatFunc::new(self.num.coeff_of(v, dn), self.den.coeff_of(v, dd)))
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |p: &Poly| {
            let s = p.to_string();
            if p.terms.len() > 1 {
                format!("({s})")
            } else {
                s
            }
        };
        if self.den.as_constant().is_some() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
        }
    }
}

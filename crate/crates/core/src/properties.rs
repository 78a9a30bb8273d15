//! Algebraic invariants checked on random inputs.

use crate::bar::{bar_differential, bar_differential_sum, BarWord};
use crate::cdga::{Base, Bidegree, Element, Flavor};
use crate::massey::{massey_representative, DefiningSystem, MasseyWord};
use crate::path::{homotopies_closed, reduced_length, PathComplex};
use crate::Rational;
use proptest::prelude::*;

fn base() -> impl Strategy<Value = Base> {
    prop_oneof![Just(Base::A), Just(Base::B), (1u8..=3).prop_map(Base::Var)]
}

fn const_base() -> impl Strategy<Value = Base> {
    prop_oneof![Just(Base::A), Just(Base::B)]
}

fn flavor() -> impl Strategy<Value = Flavor> {
    prop_oneof![Just(Flavor::Plain), Just(Flavor::Complement)]
}

/// A Steinberg symbol (length 1) or a Totaro symbol.
fn generator_over(b: impl Strategy<Value = Base>, max_len: usize) -> impl Strategy<Value = Element> {
    (b, prop::collection::vec(flavor(), 1..=max_len)).prop_map(|(b, w)| {
        if w.len() == 1 {
            Element::steinberg(b, w[0])
        } else {
            Element::totaro(b, &w)
        }
    })
}

fn coefficient() -> impl Strategy<Value = Rational> {
    (-5i64..=5, 1i64..=3).prop_map(|(p, q)| Rational::new(p, q))
}

/// A scaled product of up to three generators; homogeneous.
fn monomial() -> impl Strategy<Value = Element> {
    (prop::collection::vec(generator_over(base(), 4), 0..=3), coefficient())
        .prop_map(|(gs, c)| gs.iter().fold(Element::one(), |acc, g| acc.multiply(g)).scale(c))
}

fn element() -> impl Strategy<Value = Element> {
    prop::collection::vec(monomial(), 1..=3).prop_map(|ms| ms.into_iter().fold(Element::zero(), |a, m| a + m))
}

fn degree(x: &Element) -> i32 {
    x.bidegree().map_or(0, |b| b.cohomological)
}

fn sign(k: i32) -> Rational {
    if k.rem_euclid(2) == 0 {
        Rational::from_integer(1)
    } else {
        Rational::from_integer(-1)
    }
}

fn substitution() -> impl Strategy<Value = Vec<Base>> {
    prop::collection::vec(base(), 3)
}

fn apply(x: &Element, s: &[Base]) -> Element {
    x.substitute(&|b| match b {
        Base::Var(i) => s[i as usize - 1],
        other => other,
    })
}

proptest! {
    #[test]
    fn graded_commutativity(x in monomial(), y in monomial()) {
        let s = sign(degree(&x) * degree(&y));
        prop_assert_eq!(x.multiply(&y), y.multiply(&x).scale(s));
    }

    #[test]
    fn leibniz(x in monomial(), y in element()) {
        let lhs = x.multiply(&y).differential();
        let rhs = x.differential().multiply(&y) + x.multiply(&y.differential()).scale(sign(degree(&x)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn differential_squares_to_zero(x in element()) {
        prop_assert!(x.differential().differential().is_zero());
    }

    #[test]
    fn differential_raises_cohomological_degree(x in monomial()) {
        let dx = x.differential();
        if !dx.is_zero() {
            let b = x.bidegree().unwrap();
            prop_assert_eq!(dx.bidegree(), Some(Bidegree::new(b.cohomological + 1, b.adams)));
        }
    }

    #[test]
    fn substitution_is_a_dga_map(x in element(), y in element(), s in substitution()) {
        prop_assert_eq!(apply(&x.multiply(&y), &s), apply(&x, &s).multiply(&apply(&y, &s)));
        prop_assert_eq!(apply(&x.differential(), &s), apply(&x, &s).differential());
    }

    #[test]
    fn massey_representatives_are_cocycles(b in base(), w in prop::collection::vec(flavor(), 1..=5)) {
        let word = MasseyWord::uniform(b, &w);
        let sys = DefiningSystem::canonical(&word).unwrap();
        let rep = massey_representative(&word, &sys).unwrap();
        prop_assert!(rep.differential().is_zero());
        if w.len() == 2 {
            prop_assert_eq!(rep, Element::steinberg(b, w[0]).multiply(&Element::steinberg(b, w[1])));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn bar_differential_squares_to_zero(letters in prop::collection::vec(generator_over(const_base(), 4), 1..=4)) {
        let w = BarWord(letters);
        prop_assert!(bar_differential_sum(&bar_differential(&w)).is_zero(), "{:?}", w);
    }
}

/// Entries of `h^k` and `H^k` carry the degrees forced by their position in
/// the totalized complex, and every map preserves Adams weight.
#[test]
fn homotopies_preserve_degrees() {
    for n in 2..=4 {
        let pc = PathComplex::new(n);
        let fam = homotopies_closed(&pc);
        let mut seen = 0;
        for level in 1..=n {
            for idx in 0..pc.rank(level) {
                let l = reduced_length(&pc.cells[level][idx].word) as i32;
                for k in 1..=level {
                    for (t, e) in &fam.h[level][k][idx] {
                        let lt = reduced_length(&pc.cells[level - k][*t].word) as i32;
                        let b = e.bidegree().unwrap();
                        assert_eq!(b.adams + lt, l, "h adams");
                        assert_eq!(b.cohomological, l - lt + 1 - k as i32, "h degree");
                        seen += 1;
                    }
                }
                for k in 0..level {
                    for e in fam.big[level][k][idx].values() {
                        let b = e.bidegree().unwrap();
                        assert_eq!(b, Bidegree::new(l - k as i32, l), "H bidegree");
                        seen += 1;
                    }
                }
            }
        }
        assert!(seen > 0, "n={n}: no entries");
    }
}

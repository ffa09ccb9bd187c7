use folichar::gca::{rat, ratio, DerivationSpec, Generator, GradedElement, Monomial};
use proptest::prelude::*;

fn sym(id: u8, deg: u8) -> GradedElement {
    GradedElement::generator(Generator::symbol(id, deg))
}

/// Symbol ids 0..8; even ids have degree 2, odd ids degree 1 (or 3 for id 7).
fn degree_of(id: u8) -> u8 {
    match id {
        7 => 3,
        i if i % 2 == 0 => 2,
        _ => 1,
    }
}

fn factor() -> impl Strategy<Value = u8> {
    0u8..8
}

fn element() -> impl Strategy<Value = GradedElement> {
    prop::collection::vec((prop::collection::vec(factor(), 0..4), -4i64..=4, 1i64..=3), 0..5).prop_map(|terms| {
        let mut e = GradedElement::zero();
        for (word, n, d) in terms {
            let mut m = GradedElement::scalar(ratio(n, d));
            for id in word {
                m = m.wedge(&sym(id, degree_of(id)));
            }
            e += &m;
        }
        e
    })
}

fn homogeneous() -> impl Strategy<Value = GradedElement> {
    element().prop_map(|e| match e.degrees().first() {
        Some(&d) => e.homogeneous_part(d),
        None => e,
    })
}

/// Sign of sorting `ids` by bubble sort, with a transposition of x and y
/// contributing (−1)^{|x||y|}; zero when an odd symbol repeats.
fn brute_force_sign(ids: &[u8]) -> i64 {
    let mut v = ids.to_vec();
    let mut sign = 1;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] > v[j + 1] {
                if degree_of(v[j]) % 2 == 1 && degree_of(v[j + 1]) % 2 == 1 {
                    sign = -sign;
                }
                v.swap(j, j + 1);
            }
        }
    }
    for w in v.windows(2) {
        if w[0] == w[1] && degree_of(w[0]) % 2 == 1 {
            return 0;
        }
    }
    sign
}

proptest! {
    #[test]
    fn koszul_sign_matches_bubble_sort(ids in prop::collection::vec(factor(), 1..7)) {
        let mut prod = GradedElement::one();
        for &id in &ids {
            prod = prod.wedge(&sym(id, degree_of(id)));
        }
        let mut sorted = ids.clone();
        sorted.sort();
        let mut normal = GradedElement::one();
        for &id in &sorted {
            normal = normal.wedge(&sym(id, degree_of(id)));
        }
        let s = brute_force_sign(&ids);
        prop_assert_eq!(prod, normal.scale(&rat(s)));
    }

    #[test]
    fn graded_commutativity(a in homogeneous(), b in homogeneous()) {
        let (da, db) = (a.homogeneous_degree().unwrap_or(0), b.homogeneous_degree().unwrap_or(0));
        let sign = if da * db % 2 == 1 { -1 } else { 1 };
        prop_assert_eq!(a.wedge(&b), b.wedge(&a).scale(&rat(sign)));
    }

    #[test]
    fn associativity(a in element(), b in element(), c in element()) {
        prop_assert_eq!(a.wedge(&b).wedge(&c), a.wedge(&b.wedge(&c)));
    }

    #[test]
    fn distributivity(a in element(), b in element(), c in element()) {
        prop_assert_eq!(a.wedge(&(&b + &c)), &a.wedge(&b) + &a.wedge(&c));
    }

    #[test]
    fn leibniz_rule(
        a in homogeneous(),
        b in element(),
        images in prop::collection::vec(homogeneous(), 8),
        odd in any::<bool>(),
    ) {
        // degree ±1 derivation: keep images of the right degree, else zero
        let k: i32 = if odd { 1 } else { -1 };
        let mut d = DerivationSpec::new(k);
        for id in 0..8u8 {
            let target = degree_of(id) as i32 + k;
            let img = &images[id as usize];
            let img = if target >= 0 { img.homogeneous_part(target as usize) } else { GradedElement::zero() };
            d.set(Generator::symbol(id, degree_of(id)), img);
        }
        let da = a.homogeneous_degree().unwrap_or(0);
        let sign = if (k.unsigned_abs() as usize * da) % 2 == 1 { -1 } else { 1 };
        let lhs = d.apply(&a.wedge(&b)).unwrap();
        let rhs = &d.apply(&a).unwrap().wedge(&b) + &a.wedge(&d.apply(&b).unwrap()).scale(&rat(sign));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn normal_form_is_idempotent(a in element()) {
        let mut rebuilt = GradedElement::zero();
        for (m, c) in a.iter() {
            rebuilt += &GradedElement::term(c.clone(), m.clone());
        }
        prop_assert_eq!(&rebuilt, &a);
        prop_assert_eq!(&a.wedge(&GradedElement::one()), &a);
        prop_assert!((&a - &a).is_empty());
        prop_assert!(a.iter().all(|(_, c)| *c != rat(0)));
    }
}

#[test]
fn odd_square_vanishes_even_square_does_not() {
    assert!(sym(1, 1).wedge(&sym(1, 1)).is_zero());
    assert!(sym(7, 3).pow(2).is_zero());
    assert_eq!(sym(0, 2).pow(3).len(), 1);
    assert_eq!(Monomial::unit().degree(), 0);
}

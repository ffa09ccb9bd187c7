//! Exact graded-commutative algebra over the rationals: free generators,
//! degree-zero function symbols, derivations and algebra homomorphisms.

mod element;
mod matrix;
mod ops;
mod symbols;

pub use element::{rat, ratio, GradedElement, Monomial, Rational};
pub use matrix::MatrixForm;
pub use ops::{AlgebraHom, DerivationSpec};
pub use symbols::{Family, FunctionSymbol, Generator};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GcaError {
    #[error("no image registered for {0}")]
    MissingImage(String),
    #[error("{0}")]
    Invalid(String),
}

/// Drop every monomial whose weight exceeds `max_weight`.
pub fn truncate_weight(a: &GradedElement, max_weight: usize) -> GradedElement {
    a.filter(|m| m.weight() <= max_weight)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(id: u8, deg: u8) -> GradedElement {
        GradedElement::generator(Generator::symbol(id, deg))
    }

    #[test]
    fn odd_generators_anticommute() {
        let (x, y) = (g(1, 1), g(2, 1));
        assert_eq!(&x * &y, -(&y * &x));
        assert!((&x * &x).is_zero());
    }

    #[test]
    fn even_generators_commute_and_power() {
        let (x, y) = (g(1, 2), g(2, 1));
        assert_eq!(&x * &y, &y * &x);
        let sq = &x * &x;
        assert_eq!(sq.len(), 1);
        assert_eq!(sq.iter().next().unwrap().0.word[0].1, 2);
    }

    #[test]
    fn koszul_sign_with_three_odd() {
        let (a, b, c) = (g(1, 1), g(2, 1), g(3, 1));
        // c a b = a b c after two transpositions
        assert_eq!(&(&c * &a) * &b, &(&a * &b) * &c);
        assert_eq!(&(&b * &a) * &c, -(&(&a * &b) * &c));
    }

    #[test]
    fn derivation_leibniz_on_odd_product() {
        let (a, b) = (Generator::symbol(1, 1), Generator::symbol(2, 1));
        let mut d = DerivationSpec::new(1);
        d.set(a, g(3, 2)).set(b, g(4, 2));
        d.set(Generator::symbol(3, 2), GradedElement::zero());
        d.set(Generator::symbol(4, 2), GradedElement::zero());
        let ab = &g(1, 1) * &g(2, 1);
        let expect = &(&g(3, 2) * &g(2, 1)) - &(&g(1, 1) * &g(4, 2));
        assert_eq!(d.apply(&ab).unwrap(), expect);
    }

    #[test]
    fn missing_image_is_an_error() {
        let d = DerivationSpec::new(1);
        assert!(matches!(d.apply(&g(1, 1)), Err(GcaError::MissingImage(_))));
    }

    #[test]
    fn function_symbols_differentiate() {
        let t = FunctionSymbol::SimplexParam(1);
        let mut d = DerivationSpec::new(1);
        d.set_function(t, GradedElement::generator(Generator::dt(1)));
        let t2 = GradedElement::function(t).pow(2);
        let got = d.apply(&t2).unwrap();
        let expect = (&GradedElement::function(t) * &GradedElement::generator(Generator::dt(1)))
            .scale(&rat(2));
        assert_eq!(got, expect);
    }

    #[test]
    fn dump_is_sorted_and_zero_is_empty() {
        assert_eq!(GradedElement::zero().dump(), "");
        let e = &g(2, 1) + &g(1, 1).scale(&ratio(-1, 2));
        assert_eq!(e.dump(), "-1/2 * 1 * g1\n1 * 1 * g2\n");
    }

    #[test]
    fn matrix_trace_of_commutator_of_odd_forms() {
        let q = 2;
        let w = MatrixForm::from_fn(q, |a, b| GradedElement::generator(Generator::weil_omega(a, b)));
        // tr(w^2) = 0 for a matrix of 1-forms
        assert!(w.mul(&w).trace().is_zero());
        assert!(!w.mul(&w).mul(&w).trace().is_zero());
    }
}

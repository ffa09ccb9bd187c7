//! Forms on the nerve of the holonomy groupoid: face maps, the simplicial
//! connection and its curvature, integration over simplices, and the
//! characteristic cochains built from them.

mod local;
mod nerve;

pub use local::{
    evaluate_chern_polynomial, verify_bott, verify_gv_closed, BottReport, GvClosureReport,
    LocalModel,
};
pub use nerve::{
    coboundary, cup, curvature, dt, face_table, formal_differential, integrate_simplex,
    pullback_alpha, pullback_contraction, pullback_dalpha, simplicial_connection, t,
    random_pullback_cochain, total_differential, unit_pullback, vertex_map_hom, Cochain, FaceTable,
};

use serde::Serialize;
use thiserror::Error;

use crate::gca::{AlgebraHom, GcaError, Generator, GradedElement, MatrixForm};
use crate::weil::{chern_formula, transgression_formula, WeilError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Model {
    /// Free pullback alphabet, no relations beyond graded commutativity.
    Formal,
    /// Bott-adapted coordinates of rank q.
    Local { q: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SimplicialError {
    #[error("alphabet mismatch: {0}")]
    Alphabet(String),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Algebra(#[from] GcaError),
    #[error(transparent)]
    Weil(#[from] WeilError),
}

/// Send h_i and c_i to the transgression and Chern forms of (A, R).
pub fn characteristic_hom(
    q: usize,
    conn: &MatrixForm,
    curv: &MatrixForm,
) -> AlgebraHom {
    let mut hom = AlgebraHom::new();
    for i in 1..=q {
        hom.set(Generator::wo_c(i), chern_formula(i, curv));
        if i % 2 == 1 {
            hom.set(Generator::wo_h(i), transgression_formula(i, conn, curv));
        }
    }
    hom
}

/// ψ(word) at levels 0..=max_level: evaluate on the simplicial connection of
/// each level, integrate over the simplex, and optionally localize.
pub fn char_cochain(
    word: &GradedElement,
    max_level: usize,
    q: usize,
    model: Model,
) -> Result<Vec<Cochain>, SimplicialError> {
    let d = formal_differential();
    let mut out = Vec::with_capacity(max_level + 1);
    for k in 0..=max_level {
        let forms: Vec<MatrixForm> = (0..=k).map(|i| pullback_alpha(k, i, q)).collect();
        let a = simplicial_connection(k, &forms);
        let r = curvature(&a, &d)?;
        let integrand = characteristic_hom(q, &a, &r).apply(word)?;
        let mut c = integrate_simplex(&integrand, k);
        if let Model::Local { q: lq } = model {
            let local = LocalModel::new(lq)?;
            c = local.truncate(&local.localize(k).apply(&c)?);
        }
        out.push(Cochain::new(k, c, model));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gca::{rat, ratio, FunctionSymbol};
    use crate::weil::WoAlgebra;

    fn sym(id: u8, deg: u8) -> GradedElement {
        GradedElement::generator(Generator::symbol(id, deg))
    }

    fn a(k: usize, i: usize) -> GradedElement {
        GradedElement::generator(Generator::pullback(k, i, 1, 1))
    }

    #[test]
    fn face_tables_level_two() {
        let f = face_table(2);
        assert_eq!(f.maps, vec![vec![1, 2], vec![0, 2], vec![0, 1]]);
    }

    #[test]
    fn connection_at_levels_zero_and_one() {
        let c0 = simplicial_connection(0, &[pullback_alpha(0, 0, 1)]);
        assert_eq!(c0.get(1, 1), &a(0, 0));
        let c1 = simplicial_connection(1, &[pullback_alpha(1, 0, 1), pullback_alpha(1, 1, 1)]);
        let t1 = GradedElement::function(FunctionSymbol::SimplexParam(1));
        let expect = &(&(&GradedElement::one() - &t1) * &a(1, 0)) + &(&t1 * &a(1, 1));
        assert_eq!(c1.get(1, 1), &expect);
    }

    #[test]
    fn level_one_curvature() {
        let d = formal_differential();
        let c1 = simplicial_connection(1, &[pullback_alpha(1, 0, 1), pullback_alpha(1, 1, 1)]);
        let r = curvature(&c1, &d).unwrap();
        let da = |i| GradedElement::generator(Generator::pullback_d(1, i, 1, 1));
        let expect = &(&(&dt(1, 0) * &(&a(1, 0) - &a(1, 1))) + &(&t(1, 0) * &da(0)))
            + &(&t(1, 1) * &da(1));
        assert_eq!(r.get(1, 1), &expect);
    }

    #[test]
    fn simplex_moments() {
        let beta = sym(9, 2);
        // t0 dt0 ∧ β integrates to β/2
        let e = &(&t(1, 0) * &dt(1, 0)) * &beta;
        assert_eq!(integrate_simplex(&e, 1), beta.scale(&ratio(1, 2)));
        let e2 = &(&(&t(2, 1) * &t(2, 2)) * &(&dt(2, 1) * &dt(2, 2))) * &beta;
        assert_eq!(integrate_simplex(&e2, 2), beta.scale(&ratio(1, 24)));
        // no dt at level 1 integrates to zero
        assert!(integrate_simplex(&beta, 1).is_zero());
    }

    #[test]
    fn coboundary_of_level_zero_alpha() {
        let c = Cochain::new(0, a(0, 0), Model::Formal);
        assert_eq!(coboundary(&c).unwrap().element, &a(1, 1) - &a(1, 0));
        let c2 = coboundary(&coboundary(&c).unwrap()).unwrap();
        assert!(c2.is_zero());
    }

    #[test]
    fn coboundary_of_gv_form() {
        let c = Cochain::new(1, &a(1, 0) * &a(1, 1), Model::Formal);
        let b = |i| a(2, i);
        let expect = &(&(&b(1) * &b(2)) - &(&b(0) * &b(2))) + &(&b(0) * &b(1));
        assert_eq!(coboundary(&c).unwrap().element, expect);
    }

    #[test]
    fn coboundary_rejects_wrong_level() {
        let c = Cochain::new(1, a(0, 0), Model::Formal);
        assert!(matches!(coboundary(&c), Err(SimplicialError::Alphabet(_))));
    }

    #[test]
    fn cup_signs() {
        let s = Cochain::new(0, GradedElement::int(3), Model::Formal);
        let s2 = Cochain::new(0, a(0, 0), Model::Formal);
        assert_eq!(cup(&s, &s2).unwrap().element, a(0, 0).scale(&rat(3)));
        let one_form = Cochain::new(1, a(1, 0), Model::Formal);
        let zero_form = Cochain::new(1, GradedElement::one(), Model::Formal);
        assert_eq!(cup(&one_form, &zero_form).unwrap().element, -a(2, 0));
    }

    #[test]
    fn gv_cochain_levels() {
        let wo = WoAlgebra::new(1).unwrap();
        let word = wo.parse_word("h1*c1").unwrap();
        let cs = char_cochain(&word, 3, 1, Model::Formal).unwrap();
        let da0 = GradedElement::generator(Generator::pullback_d(0, 0, 1, 1));
        assert_eq!(cs[0].element, &a(0, 0) * &da0);
        assert_eq!(cs[1].element, &a(1, 0) * &a(1, 1));
        // -1/2 (a0 + a1)(a0 - a1) is the same element
        let symmetric = (&(&a(1, 0) + &a(1, 1)) * &(&a(1, 0) - &a(1, 1))).scale(&ratio(-1, 2));
        assert_eq!(cs[1].element, symmetric);
        assert!(cs[2].is_zero() && cs[3].is_zero());
    }

    #[test]
    fn gv_closure_report() {
        let r = verify_gv_closed().unwrap();
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn bott_low_degree_has_no_vanishing_claim() {
        let m = LocalModel::new(1).unwrap();
        let r = verify_bott(&m, 1, "c1").unwrap();
        assert!(r.passed);
        assert!(r.min_weight.unwrap() >= 1);
    }

    #[test]
    fn bott_vanishing_rank_one() {
        let m = LocalModel::new(1).unwrap();
        for k in 0..=2 {
            let r = verify_bott(&m, k, "c1^2").unwrap();
            assert!(r.passed, "{r:?}");
        }
    }

    #[test]
    fn wrong_maurer_cartan_sign_breaks_weight_bound() {
        let m = LocalModel::with_wrong_maurer_cartan(2).unwrap();
        let r = verify_bott(&m, 0, "c1*c2").unwrap();
        assert!(!r.passed);
        assert!(r.low_weight_terms > 0);
    }

    #[test]
    fn connection_contracts_to_x() {
        let x = vec![vec![rat(2), rat(-1)], vec![ratio(1, 3), rat(0)]];
        let ix = pullback_contraction(&x);
        for k in 0..=3 {
            let forms: Vec<MatrixForm> = (0..=k).map(|i| pullback_alpha(k, i, 2)).collect();
            let c = simplicial_connection(k, &forms);
            let got = c.try_map(|e| ix.apply(e)).unwrap();
            assert_eq!(got, MatrixForm::from_rational(&x));
        }
    }
}

use folichar::gca::{rat, ratio, GradedElement};
use folichar::suite::dump;
use folichar::weil::{WeilContext, WoAlgebra};

fn golden(name: &str) -> String {
    let path = format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

#[test]
fn chern_and_transgression_dumps_match_golden() {
    for q in 1..=3 {
        for i in 1..=q {
            assert_eq!(dump(&format!("c{i}"), Some(q)).unwrap(), golden(&format!("c{i}_q{q}.txt")), "c{i} q={q}");
            if i % 2 == 1 {
                assert_eq!(dump(&format!("h{i}"), Some(q)).unwrap(), golden(&format!("h{i}_q{q}.txt")), "h{i} q={q}");
            }
        }
    }
}

#[test]
fn gv_dumps_match_golden() {
    assert_eq!(dump("psi0", None).unwrap(), golden("gv_level0.txt"));
    assert_eq!(dump("psi1", None).unwrap(), golden("gv_level1.txt"));
}

#[test]
fn inclusion_is_a_chain_map() {
    for (q, words) in [(1, vec!["h1", "c1", "h1*c1", "h1*c1^2"]), (2, vec!["h1*c1", "h1*c2", "c1*c2", "h1*c1^2"])] {
        let w = WeilContext::new(q).unwrap();
        let wo = WoAlgebra::new(q).unwrap();
        let inc = wo.inclusion(&w).unwrap();
        let d = wo.d();
        for word in words {
            let x = wo.parse_word(word).unwrap();
            let lhs = w.d.apply(&inc.apply(&x).unwrap()).unwrap();
            let rhs = inc.apply(&d.apply(&x).unwrap()).unwrap();
            assert_eq!(lhs, rhs, "q={q} {word}");
        }
    }
}

#[test]
fn chern_forms_invariant_under_a_generic_matrix() {
    let w = WeilContext::new(2).unwrap();
    let x = vec![vec![ratio(3, 2), rat(-2)], vec![ratio(1, 5), rat(7)]];
    let l = w.lie_derivative(&x).unwrap();
    let i = w.contraction(&x);
    for k in 1..=2 {
        let c = w.chern_c(k).unwrap();
        assert!(l.apply(&c).unwrap().is_zero());
        assert!(i.apply(&c).unwrap().is_zero());
    }
    // ω itself is not invariant
    let om = GradedElement::generator(folichar::gca::Generator::weil_omega(1, 2));
    assert!(!l.apply(&om).unwrap().is_zero());
}

#[test]
fn h1_is_not_gl_basic() {
    let w = WeilContext::new(2).unwrap();
    let h1 = w.transgression_h(1).unwrap();
    let gl = w.basis.gl_basis();
    assert!(!w.is_basic(&h1, &gl, &[]).unwrap());
    assert!(w.is_basic(&h1, &w.basis.so_basis(), &[]).unwrap());
}

#[test]
fn only_odd_transgressions_up_to_rank() {
    let w = WeilContext::new(3).unwrap();
    assert!(w.transgression_h(2).is_err());
    assert!(w.transgression_h(5).is_err());
    assert!(WoAlgebra::new(0).is_err());
    assert!(WeilContext::new(0).is_err());
}

#[test]
fn truncation_kills_products_beyond_twice_the_rank() {
    let wo = WoAlgebra::new(2).unwrap();
    let d = wo.d();
    for word in ["h1*c1^2", "h1*c2", "h1*c1*c2", "c1^3", "h1*c1^3"] {
        let m = wo.parse_word(word).unwrap();
        let lhs = wo.truncate(&d.apply(&m).unwrap());
        let rhs = wo.truncate(&d.apply(&wo.truncate(&m)).unwrap());
        assert_eq!(lhs, rhs, "{word}");
    }
    // c1^3 has c-degree 6 > 4
    assert!(wo.truncate(&wo.parse_word("c1^3").unwrap()).is_zero());
    assert!(!wo.truncate(&wo.parse_word("h1*c1^2").unwrap()).is_zero());
}

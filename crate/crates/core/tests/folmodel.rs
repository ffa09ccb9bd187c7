use folichar::folmodel::{mat_mul, CircleDiffeo, FourierTerm, Germ, ModelError, SeamProfile, SuspensionModel};

const A: f64 = 0.3;
const B: f64 = 0.1;

fn model(steps: usize) -> SuspensionModel {
    let f = CircleDiffeo::new(vec![FourierTerm { n: 1, a: A, b: 0.0 }, FourierTerm { n: 2, a: 0.0, b: B }]).unwrap();
    SuspensionModel::new(f, SeamProfile::new(2).unwrap(), steps).unwrap()
}

// independent copy of f and f' for the finite-difference oracle
fn f(z: f64) -> f64 {
    z + A * z.sin() + B * (2.0 * z).cos()
}

fn fp(z: f64) -> f64 {
    1.0 + A * z.cos() - 2.0 * B * (2.0 * z).sin()
}

fn log_modular(n: u32, mut z: f64) -> f64 {
    let mut s = 0.0;
    for _ in 0..n {
        s += fp(z).ln();
        z = f(z);
    }
    s
}

#[test]
fn delta_matches_finite_difference_of_log_modular() {
    let m = model(1000);
    let h = 1e-5;
    for n in 0..=3u32 {
        for j in 0..16 {
            let z = 0.05 + j as f64 * 0.39;
            let fd = (log_modular(n, z + h) - log_modular(n, z - h)) / (2.0 * h);
            let d = m.delta_analytic(Germ::new(n as i32, z)).unwrap();
            assert!((fd - d).abs() < 1e-7 * (1.0 + d.abs()), "n={n} z={z}: {fd} vs {d}");
            let dual = m.log_modular_derivative(Germ::new(n as i32, z)).unwrap();
            assert!((dual - d).abs() < 1e-12 * (1.0 + d.abs()));
        }
    }
}

#[test]
fn backward_windings_invert_forward_ones() {
    let m = model(1000);
    for n in 1..=3 {
        let g = Germ::new(n, 1.3);
        let back = m.inverse(g).unwrap();
        let data = m.germ_data(g).unwrap();
        let inv = m.germ_data(back).unwrap();
        assert!((inv.target - 1.3).abs() < 1e-12);
        assert!((inv.modular * data.modular - 1.0).abs() < 1e-12);
        // δ(u⁻¹) = −δ(u)/Δ(u)
        assert!((inv.delta + data.delta / data.modular).abs() < 1e-11);
    }
}

#[test]
fn delta_is_a_cocycle_and_weighted_action_is_multiplicative() {
    let m = model(1000);
    for n1 in -3..=3 {
        for n2 in -3..=3 {
            let u2 = Germ::new(n2, 0.7);
            let u1 = Germ::new(n1, m.target(u2).unwrap());
            let prod = m.compose(u1, u2).unwrap();
            let d2 = m.germ_data(u2).unwrap();
            let lhs = m.delta_analytic(prod).unwrap();
            let rhs = d2.delta + m.delta_analytic(u1).unwrap() * d2.modular;
            assert!((lhs - rhs).abs() < 1e-10, "{n1} {n2}");
            let w = mat_mul(m.weighted_action_matrix(u1).unwrap(), m.weighted_action_matrix(u2).unwrap());
            let w12 = m.weighted_action_matrix(prod).unwrap();
            for (r1, r2) in w.iter().zip(&w12) {
                for (x, y) in r1.iter().zip(r2) {
                    assert!((x - y).abs() < 1e-10);
                }
            }
        }
    }
}

#[test]
fn path_integral_reproduces_delta_at_fourth_order() {
    let m = model(1000);
    for n in [-3, -1, 1, 2, 3] {
        let g = Germ::new(n, 2.2);
        let d = m.delta_analytic(g).unwrap();
        let p = m.path_integral_curvature(g, 1.0, 1000).unwrap();
        assert!((p - d).abs() <= 1e-10 * d.abs().max(1.0), "n={n}: {p} vs {d}");
        let e: Vec<f64> = [8, 16].iter().map(|&s| (m.path_integral_curvature(g, 1.0, s).unwrap() - d).abs()).collect();
        assert!((e[0] / e[1]).log2() > 3.5, "n={n}: errors {e:?}");
    }
}

#[test]
fn rotation_has_no_modular_variation() {
    let m = SuspensionModel::new(CircleDiffeo::rotation(0.5), SeamProfile::new(1).unwrap(), 100).unwrap();
    for n in -3..=3 {
        let d = m.germ_data(Germ::new(n, 0.4)).unwrap();
        assert_eq!(d.delta, 0.0);
        assert_eq!(d.modular, 1.0);
        assert_eq!(m.path_integral_curvature(Germ::new(n, 0.4), 1.0, 100).unwrap(), 0.0);
    }
}

#[test]
fn constructors_reject_bad_input() {
    assert!(matches!(
        CircleDiffeo::new(vec![FourierTerm { n: 1, a: 1.2, b: 0.0 }]),
        Err(ModelError::NotDiffeomorphism(_))
    ));
    assert!(matches!(CircleDiffeo::new(vec![FourierTerm { n: 1, a: f64::NAN, b: 0.0 }]), Err(ModelError::NonFinite)));
    assert!(matches!(SeamProfile::new(0), Err(ModelError::SeamOrder(0))));
    let f = CircleDiffeo::rotation(0.1);
    assert!(matches!(SuspensionModel::new(f, SeamProfile::new(1).unwrap(), 7), Err(ModelError::Steps(7))));
    let m = model(10);
    assert!(m.compose(Germ::new(1, 0.0), Germ::new(1, 0.0)).is_err());
}

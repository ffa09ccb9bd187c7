//! The suspension foliation of a circle diffeomorphism f on the mapping torus
//! [0,1] × S¹ / (1, z) ~ (0, f(z)), with Bott connection A = ψ(x)·(log f')'(z) dz
//! on the normal bundle.

use std::f64::consts::TAU;
use std::ops::{Add, Div, Mul, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("not an orientation-preserving diffeomorphism: sup |f' - 1| = {0:.6} (must be < 1)")]
    NotDiffeomorphism(f64),
    #[error("non-finite Fourier coefficient")]
    NonFinite,
    #[error("inverse did not converge at y = {0}")]
    InverseFailed(f64),
    #[error("seam profile order must be at least 1, got {0}")]
    SeamOrder(u32),
    #[error("quadrature needs an even positive number of steps, got {0}")]
    Steps(usize),
    #[error("germs are not composable: source {source_point} vs target {target}")]
    NotComposable { source_point: f64, target: f64 },
}

/// One Fourier mode `a sin(n z) + b cos(n z)` of f(z) - z.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FourierTerm {
    pub n: u32,
    #[serde(default)]
    pub a: f64,
    #[serde(default)]
    pub b: f64,
}

/// Forward-mode dual number, used to differentiate through iterates and
/// Newton inverses.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dual {
    pub v: f64,
    pub d: f64,
}

impl Dual {
    pub fn new(v: f64, d: f64) -> Self {
        Dual { v, d }
    }
    pub fn constant(v: f64) -> Self {
        Dual { v, d: 0.0 }
    }
}

impl Add for Dual {
    type Output = Dual;
    fn add(self, o: Dual) -> Dual {
        Dual::new(self.v + o.v, self.d + o.d)
    }
}

impl Sub for Dual {
    type Output = Dual;
    fn sub(self, o: Dual) -> Dual {
        Dual::new(self.v - o.v, self.d - o.d)
    }
}

impl Mul for Dual {
    type Output = Dual;
    fn mul(self, o: Dual) -> Dual {
        Dual::new(self.v * o.v, self.d * o.v + self.v * o.d)
    }
}

impl Div for Dual {
    type Output = Dual;
    fn div(self, o: Dual) -> Dual {
        Dual::new(self.v / o.v, (self.d * o.v - self.v * o.d) / (o.v * o.v))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CircleDiffeo {
    terms: Vec<FourierTerm>,
}

const SUP_SAMPLES: usize = 8192;
const NEWTON_TOL: f64 = 1e-13;

impl CircleDiffeo {
    /// f(z) = z + Σ a_n sin(nz) + b_n cos(nz). A constant (n = 0) term is a rotation.
    pub fn new(terms: Vec<FourierTerm>) -> Result<Self, ModelError> {
        if terms.iter().any(|t| !t.a.is_finite() || !t.b.is_finite()) {
            return Err(ModelError::NonFinite);
        }
        let f = CircleDiffeo { terms };
        let sup = (0..SUP_SAMPLES)
            .map(|i| (f.deriv(TAU * i as f64 / SUP_SAMPLES as f64) - 1.0).abs())
            .fold(0.0, f64::max);
        if sup >= 1.0 {
            return Err(ModelError::NotDiffeomorphism(sup));
        }
        Ok(f)
    }

    pub fn rotation(angle: f64) -> Self {
        CircleDiffeo { terms: vec![FourierTerm { n: 0, a: 0.0, b: angle }] }
    }

    pub fn terms(&self) -> &[FourierTerm] {
        &self.terms
    }

    /// f' ≡ 1.
    pub fn is_rotation(&self) -> bool {
        self.terms.iter().all(|t| t.n == 0 || (t.a == 0.0 && t.b == 0.0))
    }

    pub fn value(&self, z: f64) -> f64 {
        let mut s = z;
        for t in &self.terms {
            if t.n == 0 {
                s += t.b;
            } else {
                let nz = t.n as f64 * z;
                s += t.a * nz.sin() + t.b * nz.cos();
            }
        }
        s
    }

    pub fn deriv(&self, z: f64) -> f64 {
        let mut s = 1.0;
        for t in self.terms.iter().filter(|t| t.n > 0) {
            let n = t.n as f64;
            s += n * (t.a * (n * z).cos() - t.b * (n * z).sin());
        }
        s
    }

    pub fn second(&self, z: f64) -> f64 {
        let mut s = 0.0;
        for t in self.terms.iter().filter(|t| t.n > 0) {
            let n = t.n as f64;
            s -= n * n * (t.a * (n * z).sin() + t.b * (n * z).cos());
        }
        s
    }

    /// (log f')' = f'' / f'.
    pub fn log_deriv_prime(&self, z: f64) -> f64 {
        self.second(z) / self.deriv(z)
    }

    pub fn value_dual(&self, z: Dual) -> Dual {
        Dual::new(self.value(z.v), self.deriv(z.v) * z.d)
    }

    pub fn deriv_dual(&self, z: Dual) -> Dual {
        Dual::new(self.deriv(z.v), self.second(z.v) * z.d)
    }

    /// Newton iteration seeded at y.
    pub fn inverse(&self, y: f64) -> Result<f64, ModelError> {
        let mut z = y;
        for _ in 0..100 {
            let step = (self.value(z) - y) / self.deriv(z);
            z -= step;
            if step.abs() < NEWTON_TOL * (1.0 + z.abs()) {
                return Ok(z);
            }
        }
        Err(ModelError::InverseFailed(y))
    }

    pub fn inverse_dual(&self, y: Dual) -> Result<Dual, ModelError> {
        let w = self.inverse(y.v)?;
        Ok(Dual::new(w, y.d / self.deriv(w)))
    }
}

/// Smoothstep seam profile ψ of order N: ψ' ∝ x^N (1-x)^N, ψ(0)=0, ψ(1)=1.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeamProfile {
    pub order: u32,
}

impl SeamProfile {
    pub fn new(order: u32) -> Result<Self, ModelError> {
        if order == 0 {
            return Err(ModelError::SeamOrder(order));
        }
        Ok(SeamProfile { order })
    }

    fn norm(&self) -> f64 {
        // 1 / B(N+1, N+1) = (2N+1)! / (N!)^2
        let n = self.order as u64;
        let mut v = 1.0f64;
        for k in 1..=n {
            v *= (n + k) as f64 / k as f64;
        }
        v * (2 * n + 1) as f64
    }

    pub fn derivative(&self, x: f64) -> f64 {
        let n = self.order as i32;
        self.norm() * (x * (1.0 - x)).powi(n)
    }

    pub fn value(&self, x: f64) -> f64 {
        let n = self.order as i32;
        let m = 2 * n + 1;
        let mut s = 0.0;
        let mut binom = 1.0;
        for j in 0..=m {
            if j > n {
                s += binom * x.powi(j) * (1.0 - x).powi(m - j);
            }
            binom = binom * (m - j) as f64 / (j + 1) as f64;
        }
        s
    }
}

/// A holonomy germ: wind `winding` times around the suspension starting at
/// transverse coordinate `source` on the seam x = 0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Germ {
    pub winding: i32,
    pub source: f64,
}

impl Germ {
    pub fn new(winding: i32, source: f64) -> Self {
        Germ { winding, source }
    }
}

/// Holonomy data of a germ: target point, modular function and δ.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GermData {
    pub target: f64,
    pub modular: f64,
    pub delta: f64,
}

/// Reduce to [0, 2π).
pub fn wrap(z: f64) -> f64 {
    z.rem_euclid(TAU)
}

fn circle_distance(a: f64, b: f64) -> f64 {
    let d = wrap(a - b);
    d.min(TAU - d)
}

#[derive(Clone, Debug)]
pub struct SuspensionModel {
    pub diffeo: CircleDiffeo,
    pub profile: SeamProfile,
    pub steps: usize,
}

/// Extra components added to the transported transverse vector along a path.
pub struct Perturbation<'a> {
    /// dx component as a function of (lap, x).
    pub leafwise: &'a dyn Fn(usize, f64) -> f64,
    /// dτ (frame scaling) component as a function of (lap, x).
    pub vertical: &'a dyn Fn(usize, f64) -> f64,
}

impl SuspensionModel {
    pub fn new(diffeo: CircleDiffeo, profile: SeamProfile, steps: usize) -> Result<Self, ModelError> {
        check_steps(steps)?;
        Ok(SuspensionModel { diffeo, profile, steps })
    }

    pub fn target(&self, g: Germ) -> Result<f64, ModelError> {
        Ok(self.holonomy(g)?.0)
    }

    /// (f^n(z), (f^n)'(z)).
    pub fn holonomy(&self, g: Germ) -> Result<(f64, f64), ModelError> {
        let d = self.germ_data(g)?;
        Ok((d.target, d.modular))
    }

    pub fn modular(&self, g: Germ) -> Result<f64, ModelError> {
        Ok(self.germ_data(g)?.modular)
    }

    pub fn delta_analytic(&self, g: Germ) -> Result<f64, ModelError> {
        Ok(self.germ_data(g)?.delta)
    }

    /// Iterate along the orbit accumulating target, derivative and
    /// δ(n, z) = Σ_j (log f')'(z_j) (f^j)'(z), the chain-rule expansion of
    /// ∂_z log (f^n)'. Backwards windings use
    /// δ(−n, z) = −Σ_{j=1}^{n} (log f')'(f^{−j} z) (f^{−j})'(z).
    pub fn germ_data(&self, g: Germ) -> Result<GermData, ModelError> {
        let f = &self.diffeo;
        let mut z = g.source;
        let mut jac = 1.0;
        let mut delta = 0.0;
        if g.winding >= 0 {
            for _ in 0..g.winding {
                delta += f.log_deriv_prime(z) * jac;
                jac *= f.deriv(z);
                z = f.value(z);
            }
        } else {
            for _ in 0..(-g.winding) {
                z = f.inverse(z)?;
                jac /= f.deriv(z);
                delta -= f.log_deriv_prime(z) * jac;
            }
        }
        Ok(GermData { target: z, modular: jac, delta })
    }

    /// ∂_z log Δ by forward-mode differentiation of the modular function.
    pub fn log_modular_derivative(&self, g: Germ) -> Result<f64, ModelError> {
        let f = &self.diffeo;
        let mut z = Dual::new(g.source, 1.0);
        let mut jac = Dual::constant(1.0);
        if g.winding >= 0 {
            for _ in 0..g.winding {
                jac = jac * f.deriv_dual(z);
                z = f.value_dual(z);
            }
        } else {
            for _ in 0..(-g.winding) {
                z = f.inverse_dual(z)?;
                jac = jac / f.deriv_dual(z);
            }
        }
        Ok(jac.d / jac.v)
    }

    /// g1 ∘ g2: first g2, then g1.
    pub fn compose(&self, g1: Germ, g2: Germ) -> Result<Germ, ModelError> {
        let t = self.target(g2)?;
        if circle_distance(t, g1.source) > 1e-9 {
            return Err(ModelError::NotComposable { source_point: g1.source, target: t });
        }
        Ok(Germ::new(g1.winding + g2.winding, g2.source))
    }

    pub fn inverse(&self, g: Germ) -> Result<Germ, ModelError> {
        Ok(Germ::new(-g.winding, self.target(g)?))
    }

    /// Curvature 2-form ψ'(x)(log f')'(z) dx∧dz evaluated on (u, w), with
    /// vectors given as (x, z, τ) components.
    pub fn curvature(&self, x: f64, z: f64, u: [f64; 3], w: [f64; 3]) -> f64 {
        self.profile.derivative(x) * self.diffeo.log_deriv_prime(z) * (u[0] * w[1] - u[1] * w[0])
    }

    /// ∫_γ R(γ̇, X̃) along the leafwise path representing `g`, where X̃ is the
    /// transverse vector `v` transported across seams by f'. Simpson rule
    /// with `steps` intervals per lap.
    pub fn path_integral_curvature(&self, g: Germ, v: f64, steps: usize) -> Result<f64, ModelError> {
        let zero = |_: usize, _: f64| 0.0;
        self.path_integral_perturbed(g, v, steps, &Perturbation { leafwise: &zero, vertical: &zero })
    }

    pub fn path_integral_perturbed(
        &self,
        g: Germ,
        v: f64,
        steps: usize,
        p: &Perturbation,
    ) -> Result<f64, ModelError> {
        check_steps(steps)?;
        let f = &self.diffeo;
        let h = 1.0 / steps as f64;
        let mut z = g.source;
        let mut vz = v;
        let mut total = 0.0;
        let laps = g.winding.unsigned_abs() as usize;
        let forward = g.winding >= 0;
        for lap in 0..laps {
            if !forward {
                // step back across the seam into the previous chart at x = 1
                z = f.inverse(z)?;
                vz /= f.deriv(z);
            }
            let mut lap_sum = 0.0;
            for i in 0..=steps {
                let s = i as f64 * h;
                let (x, xdot) = if forward { (s, 1.0) } else { (1.0 - s, -1.0) };
                let tangent = [xdot, 0.0, 0.0];
                let field = [(p.leafwise)(lap, x), vz, (p.vertical)(lap, x)];
                let w = simpson_weight(i, steps);
                lap_sum += w * self.curvature(x, z, tangent, field);
            }
            total += lap_sum * h / 3.0;
            if forward {
                vz *= f.deriv(z);
                z = f.value(z);
            }
        }
        Ok(total)
    }

    /// Triangular normal action [[1, δ], [0, 1]] of a germ on the extended
    /// normal bundle.
    pub fn action_matrix(&self, g: Germ) -> Result<[[f64; 2]; 2], ModelError> {
        let d = self.germ_data(g)?;
        Ok([[1.0, d.delta], [0.0, 1.0]])
    }

    /// The same action in the trivialization weighted by Δ, [[1, δ], [0, Δ]];
    /// this one composes as a matrix homomorphism.
    pub fn weighted_action_matrix(&self, g: Germ) -> Result<[[f64; 2]; 2], ModelError> {
        let d = self.germ_data(g)?;
        Ok([[1.0, d.delta], [0.0, d.modular]])
    }
}

fn check_steps(steps: usize) -> Result<(), ModelError> {
    if steps == 0 || steps % 2 == 1 {
        return Err(ModelError::Steps(steps));
    }
    Ok(())
}

pub(crate) fn simpson_weight(i: usize, n: usize) -> f64 {
    if i == 0 || i == n {
        1.0
    } else if i % 2 == 1 {
        4.0
    } else {
        2.0
    }
}

pub fn mat_mul(a: [[f64; 2]; 2], b: [[f64; 2]; 2]) -> [[f64; 2]; 2] {
    let mut c = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

/// Convergence order from three successive refinements by a factor of two.
pub fn richardson_order(coarse: f64, mid: f64, fine: f64) -> f64 {
    ((coarse - mid).abs() / (mid - fine).abs()).log2()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(eps: f64) -> SuspensionModel {
        let f = CircleDiffeo::new(vec![FourierTerm { n: 1, a: eps, b: 0.0 }]).unwrap();
        SuspensionModel::new(f, SeamProfile::new(2).unwrap(), 1000).unwrap()
    }

    #[test]
    fn rejects_non_diffeomorphisms() {
        let bad = CircleDiffeo::new(vec![FourierTerm { n: 1, a: 1.2, b: 0.0 }]);
        assert!(matches!(bad, Err(ModelError::NotDiffeomorphism(_))));
        assert!(SeamProfile::new(0).is_err());
    }

    #[test]
    fn derivative_at_zero() {
        let m = model(0.3);
        assert!((m.modular(Germ::new(1, 0.0)).unwrap() - 1.3).abs() < 1e-15);
        assert_eq!(m.modular(Germ::new(0, 1.0)).unwrap(), 1.0);
        assert_eq!(m.delta_analytic(Germ::new(0, 1.0)).unwrap(), 0.0);
    }

    #[test]
    fn two_step_holonomy_by_chain_rule() {
        let m = model(0.3);
        let f = &m.diffeo;
        let z = 0.7;
        let (t, j) = m.holonomy(Germ::new(2, z)).unwrap();
        assert!((t - f.value(f.value(z))).abs() < 1e-14);
        assert!((j - f.deriv(f.value(z)) * f.deriv(z)).abs() < 1e-14);
    }

    #[test]
    fn inverse_germ_inverts_derivative() {
        let m = model(0.3);
        let g = Germ::new(2, 1.1);
        let gi = m.inverse(g).unwrap();
        let prod = m.modular(g).unwrap() * m.modular(gi).unwrap();
        assert!((prod - 1.0).abs() < 1e-13);
        let back = m.target(gi).unwrap();
        assert!((back - 1.1).abs() < 1e-12);
    }

    #[test]
    fn single_lap_delta_is_log_derivative() {
        let m = model(0.3);
        let z = 2.0;
        let expect = m.diffeo.log_deriv_prime(z);
        assert!((m.delta_analytic(Germ::new(1, z)).unwrap() - expect).abs() < 1e-15);
        let p = m.path_integral_curvature(Germ::new(1, z), 1.0, 1000).unwrap();
        assert!((p - expect).abs() < 1e-10);
    }

    #[test]
    fn seam_profile_is_a_step() {
        for n in 1..5 {
            let p = SeamProfile::new(n).unwrap();
            assert!(p.value(0.0).abs() < 1e-15);
            assert!((p.value(1.0) - 1.0).abs() < 1e-12);
            assert!((p.value(0.5) - 0.5).abs() < 1e-12);
            let h = 1e-6;
            let fd = (p.value(0.3 + h) - p.value(0.3 - h)) / (2.0 * h);
            assert!((fd - p.derivative(0.3)).abs() < 1e-6);
        }
    }

    #[test]
    fn dual_route_matches_chain_rule() {
        let m = model(0.3);
        for n in -3..=3 {
            let g = Germ::new(n, 0.4);
            let a = m.delta_analytic(g).unwrap();
            let b = m.log_modular_derivative(g).unwrap();
            assert!((a - b).abs() < 1e-12, "n={n}: {a} vs {b}");
        }
    }

    #[test]
    fn rotation_is_flat() {
        let m = SuspensionModel::new(CircleDiffeo::rotation(0.5), SeamProfile::new(2).unwrap(), 100)
            .unwrap();
        assert!(m.diffeo.is_rotation());
        for n in -3..=3 {
            let g = Germ::new(n, 1.0);
            assert_eq!(m.modular(g).unwrap(), 1.0);
            assert_eq!(m.delta_analytic(g).unwrap(), 0.0);
            assert_eq!(m.path_integral_curvature(g, 1.0, 100).unwrap(), 0.0);
        }
    }

    #[test]
    fn composition_requires_matching_points() {
        let m = model(0.3);
        let g2 = Germ::new(1, 0.5);
        let g1 = Germ::new(1, 0.9);
        assert!(matches!(m.compose(g1, g2), Err(ModelError::NotComposable { .. })));
    }
}

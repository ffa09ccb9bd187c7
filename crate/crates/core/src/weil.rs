//! The Weil algebra of gl(q), Chern forms, transgressions and the truncated
//! algebra generated by them.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::gca::{
    rat, ratio, AlgebraHom, DerivationSpec, Family, GcaError, Generator, GradedElement,
    MatrixForm, Rational,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WeilError {
    #[error("rank must be at least 1, got {0}")]
    BadRank(usize),
    #[error("structure constants fail the {0}")]
    BadStructure(&'static str),
    #[error("{what} index {index} is out of range for rank q = {q}")]
    IndexRange { what: &'static str, index: usize, q: usize },
    #[error("cannot parse `{0}`: {1}")]
    Parse(String, String),
    #[error(transparent)]
    Algebra(#[from] GcaError),
}

/// Rational square matrix, rows of equal length.
pub type RationalMatrix = Vec<Vec<Rational>>;

/// Structure constants of gl(q) in the basis E_ab, flattened as
/// `f[k][i][j]` = coefficient of E_k in [E_i, E_j].
#[derive(Clone, Debug)]
pub struct LieBasis {
    q: usize,
    f: Vec<i8>,
}

impl LieBasis {
    pub fn gl(q: usize) -> Result<Self, WeilError> {
        if q == 0 {
            return Err(WeilError::BadRank(q));
        }
        let n = q * q;
        let mut f = vec![0i8; n * n * n];
        for a in 0..q {
            for b in 0..q {
                for c in 0..q {
                    for d in 0..q {
                        let i = a * q + b;
                        let j = c * q + d;
                        if b == c {
                            f[(a * q + d) * n * n + i * n + j] += 1;
                        }
                        if d == a {
                            f[(c * q + b) * n * n + i * n + j] -= 1;
                        }
                    }
                }
            }
        }
        let basis = LieBasis { q, f };
        basis.check()?;
        Ok(basis)
    }

    pub fn rank(&self) -> usize {
        self.q
    }

    pub fn dim(&self) -> usize {
        self.q * self.q
    }

    /// Coefficient of basis element `k` in `[e_i, e_j]`.
    pub fn f(&self, k: usize, i: usize, j: usize) -> i64 {
        let n = self.dim();
        self.f[k * n * n + i * n + j] as i64
    }

    /// 1-based matrix position of basis index `i`.
    pub fn position(&self, i: usize) -> (usize, usize) {
        (i / self.q + 1, i % self.q + 1)
    }

    fn check(&self) -> Result<(), WeilError> {
        let n = self.dim();
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if self.f(k, i, j) != -self.f(k, j, i) {
                        return Err(WeilError::BadStructure("antisymmetry check"));
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for m in 0..n {
                        let mut s = 0;
                        for l in 0..n {
                            s += self.f(l, i, j) * self.f(m, l, k)
                                + self.f(l, j, k) * self.f(m, l, i)
                                + self.f(l, k, i) * self.f(m, l, j);
                        }
                        if s != 0 {
                            return Err(WeilError::BadStructure("Jacobi identity"));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// The matrix unit for basis index `i`.
    pub fn element(&self, i: usize) -> RationalMatrix {
        let (a, b) = self.position(i);
        let mut m = vec![vec![Rational::zero(); self.q]; self.q];
        m[a - 1][b - 1] = Rational::one();
        m
    }

    pub fn gl_basis(&self) -> Vec<RationalMatrix> {
        (0..self.dim()).map(|i| self.element(i)).collect()
    }

    /// E_ab - E_ba for a < b.
    pub fn so_basis(&self) -> Vec<RationalMatrix> {
        let q = self.q;
        let mut out = Vec::new();
        for a in 0..q {
            for b in a + 1..q {
                let mut m = vec![vec![Rational::zero(); q]; q];
                m[a][b] = Rational::one();
                m[b][a] = -Rational::one();
                out.push(m);
            }
        }
        out
    }
}

/// W(gl(q)) with its differential and the connection/curvature matrices.
#[derive(Clone, Debug)]
pub struct WeilContext {
    pub basis: LieBasis,
    pub omega: MatrixForm,
    pub curvature: MatrixForm,
    pub d: DerivationSpec,
}

impl WeilContext {
    pub fn new(q: usize) -> Result<Self, WeilError> {
        let basis = LieBasis::gl(q)?;
        let n = basis.dim();
        let gen_w = |i: usize| {
            let (a, b) = basis.position(i);
            GradedElement::generator(Generator::weil_omega(a, b))
        };
        let gen_c = |i: usize| {
            let (a, b) = basis.position(i);
            GradedElement::generator(Generator::weil_curvature(a, b))
        };

        let mut d = DerivationSpec::new(1);
        let half = ratio(1, 2);
        for i in 0..n {
            let (a, b) = basis.position(i);
            let mut dw = gen_c(i);
            let mut dc = GradedElement::zero();
            for j in 0..n {
                for k in 0..n {
                    let f = basis.f(i, j, k);
                    if f == 0 {
                        continue;
                    }
                    let f = rat(f);
                    dw = &dw - &(&gen_w(j) * &gen_w(k)).scale(&(&f * &half));
                    dc = &dc + &(&gen_c(j) * &gen_w(k)).scale(&f);
                }
            }
            d.set(Generator::weil_omega(a, b), dw);
            d.set(Generator::weil_curvature(a, b), dc);
        }

        Ok(WeilContext {
            omega: MatrixForm::from_fn(q, |a, b| GradedElement::generator(Generator::weil_omega(a, b))),
            curvature: MatrixForm::from_fn(q, |a, b| {
                GradedElement::generator(Generator::weil_curvature(a, b))
            }),
            basis,
            d,
        })
    }

    pub fn rank(&self) -> usize {
        self.basis.rank()
    }

    pub fn generators(&self) -> Vec<Generator> {
        let q = self.rank();
        let mut out = Vec::new();
        for a in 1..=q {
            for b in 1..=q {
                out.push(Generator::weil_omega(a, b));
                out.push(Generator::weil_curvature(a, b));
            }
        }
        out
    }

    /// Contraction by a matrix X: ω_ab ↦ X_ab, Ω ↦ 0.
    pub fn contraction(&self, x: &RationalMatrix) -> DerivationSpec {
        let q = self.rank();
        let mut i_x = DerivationSpec::new(-1);
        for a in 1..=q {
            for b in 1..=q {
                i_x.set(Generator::weil_omega(a, b), GradedElement::scalar(x[a - 1][b - 1].clone()));
                i_x.set(Generator::weil_curvature(a, b), GradedElement::zero());
            }
        }
        i_x
    }

    /// L_X = i_X d + d i_X, tabulated on generators.
    pub fn lie_derivative(&self, x: &RationalMatrix) -> Result<DerivationSpec, WeilError> {
        let i_x = self.contraction(x);
        let mut l = DerivationSpec::new(0);
        for g in self.generators() {
            let e = GradedElement::generator(g);
            let v = &i_x.apply(&self.d.apply(&e)?)? + &self.d.apply(&i_x.apply(&e)?)?;
            l.set(g, v);
        }
        Ok(l)
    }

    pub fn chern_c(&self, i: usize) -> Result<GradedElement, WeilError> {
        if i == 0 || i > self.rank() {
            return Err(WeilError::IndexRange { what: "Chern form", index: i, q: self.rank() });
        }
        Ok(chern_formula(i, &self.curvature))
    }

    pub fn transgression_h(&self, i: usize) -> Result<GradedElement, WeilError> {
        if i % 2 == 0 || i > self.rank() {
            return Err(WeilError::IndexRange {
                what: "transgression (odd index up to the rank)",
                index: i,
                q: self.rank(),
            });
        }
        Ok(transgression_formula(i, &self.omega, &self.curvature))
    }

    /// Killed by `i_X` for every X in `contract` and by `L_X` for every X in `invariant`.
    pub fn is_basic(
        &self,
        a: &GradedElement,
        contract: &[RationalMatrix],
        invariant: &[RationalMatrix],
    ) -> Result<bool, WeilError> {
        for x in contract {
            if !self.contraction(x).apply(a)?.is_zero() {
                return Ok(false);
            }
        }
        for x in invariant {
            if !self.lie_derivative(x)?.apply(a)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Tr(R^i) for a curvature-like matrix.
pub fn chern_formula(i: usize, curvature: &MatrixForm) -> GradedElement {
    curvature.pow(i as u32).trace()
}

/// Antisymmetric and symmetric parts.
pub fn sym_antisym_split(m: &MatrixForm) -> (MatrixForm, MatrixForm) {
    let t = m.transpose();
    let half = ratio(1, 2);
    (m.sub(&t).scale(&half), m.add(&t).scale(&half))
}

/// i·Tr ∫₀¹ A_s (t R_s + R_o + (t²−1) A_s²)^{i−1} dt for connection A and curvature R.
pub fn transgression_formula(i: usize, conn: &MatrixForm, curv: &MatrixForm) -> GradedElement {
    let q = conn.size();
    let (_, a_s) = sym_antisym_split(conn);
    let (r_o, r_s) = sym_antisym_split(curv);
    let a_s2 = a_s.mul(&a_s);
    // coefficients of t^0, t^1, t^2
    let base = [r_o.sub(&a_s2), r_s, a_s2];

    let mut poly = vec![MatrixForm::identity(q)];
    for _ in 1..i {
        let mut next = vec![MatrixForm::zeros(q); poly.len() + 2];
        for (p, m) in poly.iter().enumerate() {
            for (r, b) in base.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                next[p + r] = next[p + r].add(&m.mul(b));
            }
        }
        poly = next;
    }

    let mut out = GradedElement::zero();
    for (p, m) in poly.iter().enumerate() {
        let tr = a_s.mul(m).trace();
        out += &tr.scale(&ratio(1, p as i64 + 1));
    }
    out.scale(&rat(i as i64))
}

/// The abstract algebra on h_i (odd i ≤ q) and c_i (i ≤ q).
#[derive(Clone, Debug)]
pub struct WoAlgebra {
    q: usize,
}

impl WoAlgebra {
    pub fn new(q: usize) -> Result<Self, WeilError> {
        if q == 0 {
            return Err(WeilError::BadRank(q));
        }
        Ok(WoAlgebra { q })
    }

    pub fn rank(&self) -> usize {
        self.q
    }

    pub fn h(&self, i: usize) -> Result<GradedElement, WeilError> {
        if i % 2 == 0 || i > self.q {
            return Err(WeilError::IndexRange { what: "h", index: i, q: self.q });
        }
        Ok(GradedElement::generator(Generator::wo_h(i)))
    }

    pub fn c(&self, i: usize) -> Result<GradedElement, WeilError> {
        if i == 0 || i > self.q {
            return Err(WeilError::IndexRange { what: "c", index: i, q: self.q });
        }
        Ok(GradedElement::generator(Generator::wo_c(i)))
    }

    pub fn d(&self) -> DerivationSpec {
        let mut d = DerivationSpec::new(1);
        for i in 1..=self.q {
            d.set(Generator::wo_c(i), GradedElement::zero());
            if i % 2 == 1 {
                d.set(Generator::wo_h(i), GradedElement::generator(Generator::wo_c(i)));
            }
        }
        d
    }

    /// h_i ↦ transgression, c_i ↦ Chern form.
    pub fn inclusion(&self, w: &WeilContext) -> Result<AlgebraHom, WeilError> {
        let mut hom = AlgebraHom::new();
        for i in 1..=self.q {
            hom.set(Generator::wo_c(i), w.chern_c(i)?);
            if i % 2 == 1 {
                hom.set(Generator::wo_h(i), w.transgression_h(i)?);
            }
        }
        Ok(hom)
    }

    /// Zero out monomials whose c-part has degree above 2q.
    pub fn truncate(&self, a: &GradedElement) -> GradedElement {
        a.filter(|m| m.family_degree(Family::WoC) <= 2 * self.q)
    }

    /// Parse words like `c1^2`, `c1*c2`, `h1*c1`.
    pub fn parse_word(&self, s: &str) -> Result<GradedElement, WeilError> {
        let err = |why: &str| WeilError::Parse(s.to_string(), why.to_string());
        let s = s.trim();
        if s.is_empty() {
            return Err(err("empty expression"));
        }
        let mut acc = GradedElement::one();
        for factor in s.split('*') {
            let factor = factor.trim();
            let (base, exp) = match factor.split_once('^') {
                Some((b, e)) => {
                    (b.trim(), e.trim().parse::<u32>().map_err(|_| err("bad exponent"))?)
                }
                None => (factor, 1),
            };
            let mut chars = base.chars();
            let kind = chars.next().ok_or_else(|| err("empty factor"))?;
            let idx: usize = chars.as_str().parse().map_err(|_| err("bad index"))?;
            let g = match kind {
                'c' => self.c(idx)?,
                'h' => self.h(idx)?,
                _ => return Err(err("unknown symbol")),
            };
            acc = acc.wedge(&g.pow(exp));
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl2_bracket_matches_matrix_commutator() {
        let b = LieBasis::gl(2).unwrap();
        // [E11, E12] = E12; indices: E11=0, E12=1
        assert_eq!(b.f(1, 0, 1), 1);
        assert_eq!(b.f(0, 0, 1), 0);
        assert!(LieBasis::gl(1).unwrap().f.iter().all(|&v| v == 0));
    }

    #[test]
    fn rank_one_differential() {
        let w = WeilContext::new(1).unwrap();
        let om = GradedElement::generator(Generator::weil_omega(1, 1));
        let cu = GradedElement::generator(Generator::weil_curvature(1, 1));
        assert_eq!(w.d.apply(&om).unwrap(), cu);
        assert!(w.d.apply(&cu).unwrap().is_zero());
        assert_eq!(w.transgression_h(1).unwrap(), om);
    }

    #[test]
    fn matrix_identities_hold() {
        for q in 1..=3 {
            let w = WeilContext::new(q).unwrap();
            let dw = w.omega.try_map(|e| w.d.apply(e)).unwrap();
            assert_eq!(dw, w.curvature.sub(&w.omega.mul(&w.omega)));
            let dc = w.curvature.try_map(|e| w.d.apply(e)).unwrap();
            assert_eq!(dc, w.curvature.mul(&w.omega).sub(&w.omega.mul(&w.curvature)));
        }
    }

    #[test]
    fn contraction_pairs_with_matrix_entries() {
        let w = WeilContext::new(2).unwrap();
        let e11 = w.basis.element(0);
        let i = w.contraction(&e11);
        let om = |a, b| GradedElement::generator(Generator::weil_omega(a, b));
        assert_eq!(i.apply(&om(1, 1)).unwrap(), GradedElement::one());
        assert!(i.apply(&om(1, 2)).unwrap().is_zero());
    }

    #[test]
    fn abelian_lie_derivative_vanishes() {
        let w = WeilContext::new(1).unwrap();
        let l = w.lie_derivative(&w.basis.element(0)).unwrap();
        let om = GradedElement::generator(Generator::weil_omega(1, 1));
        assert!(l.apply(&om).unwrap().is_zero());
        assert!(l.apply(&GradedElement::int(5)).unwrap().is_zero());
    }

    #[test]
    fn traces_in_rank_two() {
        let w = WeilContext::new(2).unwrap();
        let c1 = w.chern_c(1).unwrap();
        let expect = &GradedElement::generator(Generator::weil_curvature(1, 1))
            + &GradedElement::generator(Generator::weil_curvature(2, 2));
        assert_eq!(c1, expect);
        let h1 = w.transgression_h(1).unwrap();
        assert_eq!(h1, w.omega.trace());
        assert!(w.transgression_h(2).is_err());
        assert!(w.chern_c(3).is_err());
    }

    #[test]
    fn split_reconstructs() {
        let w = WeilContext::new(3).unwrap();
        let (o, s) = sym_antisym_split(&w.omega);
        assert_eq!(o.add(&s), w.omega);
        let (o2, s2) = sym_antisym_split(&s);
        assert!(o2.is_zero());
        assert_eq!(s2, s);
        let one = WeilContext::new(1).unwrap();
        assert!(sym_antisym_split(&one.omega).0.is_zero());
    }

    #[test]
    fn basic_elements() {
        let w = WeilContext::new(2).unwrap();
        let gl = w.basis.gl_basis();
        assert!(w.is_basic(&w.chern_c(2).unwrap(), &gl, &gl).unwrap());
        let so = w.basis.so_basis();
        assert!(w.is_basic(&w.transgression_h(1).unwrap(), &so, &gl).unwrap());
        let w1 = WeilContext::new(1).unwrap();
        let om = GradedElement::generator(Generator::weil_omega(1, 1));
        assert!(!w1.is_basic(&om, &w1.basis.gl_basis(), &[]).unwrap());
    }

    #[test]
    fn truncation_examples() {
        let wo = WoAlgebra::new(1).unwrap();
        assert!(wo.truncate(&wo.parse_word("c1^2").unwrap()).is_zero());
        let gv = wo.parse_word("h1*c1").unwrap();
        assert_eq!(wo.truncate(&gv), gv);
        assert_eq!(wo.truncate(&wo.h(1).unwrap()), wo.h(1).unwrap());
        assert!(wo.parse_word("c2").is_err());
        assert!(wo.parse_word("x1").is_err());
    }
}

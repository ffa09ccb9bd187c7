use serde::Serialize;

use crate::gca::{
    truncate_weight, AlgebraHom, DerivationSpec, Family, FunctionSymbol, Generator,
    GradedElement, MatrixForm, Rational,
};
use crate::weil::WoAlgebra;

use super::nerve::{
    coboundary, integrate_simplex, simplex_function_rule, simplicial_connection, unit_pullback,
    Cochain,
};
use super::{char_cochain, Model, SimplicialError};

/// Bott-adapted local coordinates: every pulled-back connection is a
/// transverse part θ_i (one dz) plus a Maurer-Cartan part m shared by all
/// vertices. `d θ = λ + η` splits by dz-count, and `d m = sign · m∧m`
/// with sign −1 for the genuine Maurer-Cartan relation.
#[derive(Clone, Debug)]
pub struct LocalModel {
    pub q: usize,
    mc_sign: i64,
}

impl LocalModel {
    pub fn new(q: usize) -> Result<Self, SimplicialError> {
        if q == 0 {
            return Err(SimplicialError::Invalid("rank must be at least 1".into()));
        }
        Ok(LocalModel { q, mc_sign: -1 })
    }

    /// Same model with `d m = +m∧m`; used to show the relation matters.
    pub fn with_wrong_maurer_cartan(q: usize) -> Result<Self, SimplicialError> {
        Ok(LocalModel { mc_sign: 1, ..Self::new(q)? })
    }

    pub fn maurer_cartan(&self) -> MatrixForm {
        MatrixForm::from_fn(self.q, |a, b| GradedElement::generator(Generator::maurer_cartan(a, b)))
    }

    pub fn transverse(&self, k: usize, i: usize) -> MatrixForm {
        MatrixForm::from_fn(self.q, |a, b| GradedElement::generator(Generator::transverse(k, i, a, b)))
    }

    pub fn alpha(&self, k: usize, i: usize) -> MatrixForm {
        self.transverse(k, i).add(&self.maurer_cartan())
    }

    fn mc_square(&self) -> MatrixForm {
        let m = self.maurer_cartan();
        m.mul(&m)
    }

    pub fn differential(&self) -> DerivationSpec {
        let m2 = self.mc_square();
        let sign = Rational::from_integer(self.mc_sign.into());
        DerivationSpec::new(1)
            .with_rule(move |g| {
                let i = g.index;
                match g.family {
                    Family::SimplexDt => Some(GradedElement::zero()),
                    Family::Transverse => {
                        let (k, v, a, b) = (i[0] as usize, i[1] as usize, i[2] as usize, i[3] as usize);
                        Some(
                            &GradedElement::generator(Generator::derived(0, k, v, a, b))
                                + &GradedElement::generator(Generator::derived(1, k, v, a, b)),
                        )
                    }
                    Family::MaurerCartan => {
                        Some(m2.get(i[0] as usize, i[1] as usize).scale(&sign))
                    }
                    _ => None,
                }
            })
            .with_function_rule(simplex_function_rule)
    }

    /// Pullback generators at `level` ↦ local expressions.
    pub fn localize(&self, level: usize) -> AlgebraHom {
        let m = self.maurer_cartan();
        let m2 = self.mc_square();
        let sign = Rational::from_integer(self.mc_sign.into());
        AlgebraHom::new()
            .with_rule(move |g| {
                let i = g.index;
                let (k, v, a, b) = (i[0] as usize, i[1] as usize, i[2] as usize, i[3] as usize);
                if k != level {
                    return None;
                }
                match g.family {
                    Family::Pullback1 => {
                        Some(&GradedElement::generator(Generator::transverse(k, v, a, b)) + m.get(a, b))
                    }
                    Family::Pullback2 => {
                        let lam = GradedElement::generator(Generator::derived(0, k, v, a, b));
                        let eta = GradedElement::generator(Generator::derived(1, k, v, a, b));
                        Some(&(&lam + &eta) + &m2.get(a, b).scale(&sign))
                    }
                    _ => None,
                }
            })
            .passthrough(Family::SimplexDt)
            .passthrough(Family::MaurerCartan)
    }

    /// Terms with more than q transverse differentials vanish.
    pub fn truncate(&self, a: &GradedElement) -> GradedElement {
        truncate_weight(a, self.q)
    }

    /// Explicit coordinates: θ = Σ_j A_j dz^j, λ = Σ_j A_L,j ∧ dz^j,
    /// η = Σ_{j,j'} A_T,jj' dz^{j'} ∧ dz^j, with only q odd dz's available.
    pub fn realization(&self) -> AlgebraHom {
        let q = self.q;
        let dz = |j: usize| GradedElement::generator(Generator::dz(j));
        let coeff = |name: &'static str, k: usize, v: usize, a: usize, b: usize, j: usize, jj: usize| {
            GradedElement::function(FunctionSymbol::Coefficient {
                name,
                index: [k as u8, v as u8, a as u8, b as u8, j as u8, jj as u8],
            })
        };
        AlgebraHom::new()
            .with_rule(move |g| {
                let i = g.index;
                let mut out = GradedElement::zero();
                match g.family {
                    Family::Transverse => {
                        let (k, v, a, b) = (i[0] as usize, i[1] as usize, i[2] as usize, i[3] as usize);
                        for j in 1..=q {
                            out += &coeff("A", k, v, a, b, j, 0).wedge(&dz(j));
                        }
                    }
                    Family::DerivedCoeff => {
                        let (k, v, a, b) = (i[1] as usize, i[2] as usize, i[3] as usize, i[4] as usize);
                        for j in 1..=q {
                            if i[0] == 0 {
                                let al = GradedElement::generator(Generator::leafwise(k, v, a, b, j));
                                out += &al.wedge(&dz(j));
                            } else {
                                for jj in 1..=q {
                                    let c = coeff("AT", k, v, a, b, j, jj);
                                    out += &c.wedge(&dz(jj)).wedge(&dz(j));
                                }
                            }
                        }
                    }
                    _ => return None,
                }
                Some(out)
            })
            .passthrough(Family::MaurerCartan)
            .passthrough(Family::SimplexDt)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BottReport {
    pub q: usize,
    pub level: usize,
    pub polynomial: String,
    pub polynomial_degree: usize,
    /// Terms above this weight were never formed.
    pub weight_bound: usize,
    pub surviving_terms: usize,
    pub min_weight: Option<usize>,
    pub low_weight_terms: usize,
    pub truncated_zero: bool,
    pub realized_zero: bool,
    pub passed: bool,
}

fn chern_bounded(i: usize, r: &MatrixForm, max_weight: usize) -> GradedElement {
    let mut acc = r.clone();
    for _ in 1..i {
        acc = acc.mul_bounded(r, max_weight);
    }
    acc.trace()
}

/// Evaluate a polynomial in the c_i (an element of the h/c alphabet without
/// h's) on a curvature matrix, forming only terms of weight ≤ `max_weight`.
pub fn evaluate_chern_polynomial(
    poly: &GradedElement,
    r: &MatrixForm,
    max_weight: usize,
) -> Result<GradedElement, SimplicialError> {
    let mut out = GradedElement::zero();
    for (m, c) in poly.iter() {
        let mut acc = GradedElement::scalar(c.clone());
        for &(g, e) in &m.word {
            if g.family != Family::WoC {
                return Err(SimplicialError::Invalid(format!(
                    "{g} is not a Chern generator"
                )));
            }
            let ci = chern_bounded(g.index[0] as usize, r, max_weight);
            for _ in 0..e {
                acc = acc.wedge_bounded(&ci, max_weight);
            }
        }
        out += &acc;
    }
    Ok(out)
}

/// Integrate P(R^(k)) over Δ^k in the local model and inspect transverse
/// weights: nothing of weight below deg P may survive, and for deg P > q the
/// result must vanish both under the weight rule and in explicit coordinates.
pub fn verify_bott(
    model: &LocalModel,
    level: usize,
    poly_text: &str,
) -> Result<BottReport, SimplicialError> {
    let wo = WoAlgebra::new(model.q)?;
    let poly = wo.parse_word(poly_text)?;
    let degree = match poly.homogeneous_degree() {
        Some(d) if d % 2 == 0 && d > 0 => d / 2,
        _ => return Err(SimplicialError::Invalid(format!("`{poly_text}` is not a homogeneous Chern polynomial"))),
    };
    let bound = degree;

    let forms: Vec<MatrixForm> = (0..=level).map(|i| model.alpha(level, i)).collect();
    let a = simplicial_connection(level, &forms);
    let d = model.differential();
    let r = a.try_map(|e| d.apply(e))?.add(&a.mul_bounded(&a, bound));
    let integrand = evaluate_chern_polynomial(&poly, &r, bound)?;
    let result = integrate_simplex(&integrand, level);

    let low = result.filter(|m| m.weight() < degree).len();
    let truncated_zero = model.truncate(&result).is_zero();
    let realized_zero = model.realization().apply(&result)?.is_zero();
    let vanishing_claim = degree > model.q;
    let passed = low == 0 && (!vanishing_claim || (truncated_zero && realized_zero));
    Ok(BottReport {
        q: model.q,
        level,
        polynomial: poly_text.to_string(),
        polynomial_degree: degree,
        weight_bound: bound,
        surviving_terms: result.len(),
        min_weight: result.min_weight(),
        low_weight_terms: low,
        truncated_zero,
        realized_zero,
        passed,
    })
}

#[derive(Clone, Debug)]
pub struct GvClosureReport {
    /// ψ(h₁c₁) at levels 0..=3 in the free alphabet, q = 1.
    pub levels: Vec<Cochain>,
    pub expected_level_one: GradedElement,
    pub level_one_matches: bool,
    pub higher_levels_vanish: bool,
    /// ∂ of the level-1 cochain in the free alphabet; nonzero.
    pub formal_coboundary: GradedElement,
    /// The same after passing to the local model and applying the weight rule.
    pub local_coboundary: GradedElement,
    /// Localizing first and then taking ∂ gives the same answer.
    pub localize_commutes: bool,
    /// α₀ − α₁ and α₀∧α₁ pulled back to the units.
    pub curvature_on_units: GradedElement,
    pub gv_form_on_units: GradedElement,
    /// r*α − s*α and the plain alternating-sum coboundary ∂α = s*α − r*α.
    pub integrated_curvature: GradedElement,
    pub coboundary_of_alpha: GradedElement,
    pub passed: bool,
}

/// The Godbillon-Vey cochain α₀∧α₁ in codimension one: its normal form, the
/// vanishing of its higher-level companions, and ∂-closedness in the local
/// model (with the free alphabet as a witness that the Bott hypothesis matters).
pub fn verify_gv_closed() -> Result<GvClosureReport, SimplicialError> {
    let q = 1;
    let wo = WoAlgebra::new(q)?;
    let word = wo.parse_word("h1*c1")?;
    let levels = char_cochain(&word, 3, q, Model::Formal)?;

    let a = |k, i| GradedElement::generator(Generator::pullback(k, i, 1, 1));
    let expected = a(1, 0).wedge(&a(1, 1));
    let level_one_matches = levels[1].element == expected;
    let higher_levels_vanish = levels[2..].iter().all(Cochain::is_zero);

    let formal = coboundary(&levels[1])?;
    let local = LocalModel::new(q)?;
    let local_coboundary = local.truncate(&local.localize(2).apply(&formal.element)?);

    let localized = Cochain::new(1, local.localize(1).apply(&levels[1].element)?, Model::Local { q });
    let other_way = local.truncate(&coboundary(&localized)?.element);
    let localize_commutes = other_way == local_coboundary;

    let curvature = &a(1, 0) - &a(1, 1);
    let curvature_on_units = unit_pullback(&curvature)?;
    let gv_form_on_units = unit_pullback(&levels[1].element)?;

    let base = Cochain::new(0, a(0, 0), Model::Formal);
    let coboundary_of_alpha = coboundary(&base)?.element;

    let passed = level_one_matches
        && higher_levels_vanish
        && !formal.element.is_zero()
        && local_coboundary.is_zero()
        && localize_commutes
        && curvature_on_units.is_zero()
        && gv_form_on_units.is_zero()
        && coboundary_of_alpha == -&curvature;

    Ok(GvClosureReport {
        levels,
        expected_level_one: expected,
        level_one_matches,
        higher_levels_vanish,
        formal_coboundary: formal.element,
        local_coboundary,
        localize_commutes,
        curvature_on_units,
        gv_form_on_units,
        integrated_curvature: curvature,
        coboundary_of_alpha,
        passed,
    })
}

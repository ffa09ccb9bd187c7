use num_bigint::BigInt;
use num_traits::One;

use crate::gca::{
    AlgebraHom, DerivationSpec, Family, FunctionSymbol, Generator, GradedElement,
    MatrixForm, Monomial, Rational,
};

use super::{Model, SimplicialError};

/// Simplex coordinate t_i at level k. t_0 is eliminated as 1 - (t_1 + ... + t_k).
pub fn t(k: usize, i: usize) -> GradedElement {
    if i == 0 {
        let mut e = GradedElement::one();
        for j in 1..=k {
            e = &e - &GradedElement::function(FunctionSymbol::SimplexParam(j as u8));
        }
        e
    } else {
        GradedElement::function(FunctionSymbol::SimplexParam(i as u8))
    }
}

/// dt_i at level k, with dt_0 = -(dt_1 + ... + dt_k).
pub fn dt(k: usize, i: usize) -> GradedElement {
    if i == 0 {
        let mut e = GradedElement::zero();
        for j in 1..=k {
            e = &e - &GradedElement::generator(Generator::dt(j));
        }
        e
    } else {
        GradedElement::generator(Generator::dt(i))
    }
}

/// Vertex maps of the face maps into level `k`: `maps[i][j]` is the level-k
/// vertex that vertex `j` of level k-1 lands on under ε^k_i.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceTable {
    pub level: usize,
    pub maps: Vec<Vec<usize>>,
}

pub fn face_table(k: usize) -> FaceTable {
    assert!(k >= 1, "face maps start at level 1");
    let maps = (0..=k)
        .map(|i| (0..k).map(|j| if j < i { j } else { j + 1 }).collect())
        .collect();
    FaceTable { level: k, maps }
}

/// Connection matrix at vertex `i` of level `k`.
pub fn pullback_alpha(k: usize, i: usize, q: usize) -> MatrixForm {
    MatrixForm::from_fn(q, |a, b| GradedElement::generator(Generator::pullback(k, i, a, b)))
}

pub fn pullback_dalpha(k: usize, i: usize, q: usize) -> MatrixForm {
    MatrixForm::from_fn(q, |a, b| GradedElement::generator(Generator::pullback_d(k, i, a, b)))
}

/// α^(k) = Σ t_i α_i.
pub fn simplicial_connection(k: usize, vertex_forms: &[MatrixForm]) -> MatrixForm {
    assert_eq!(vertex_forms.len(), k + 1, "need one form per vertex");
    let q = vertex_forms[0].size();
    let mut acc = MatrixForm::zeros(q);
    for (i, a) in vertex_forms.iter().enumerate() {
        acc = acc.add(&a.left_scale(&t(k, i)));
    }
    acc
}

/// dA + A∧A.
pub fn curvature(a: &MatrixForm, d: &DerivationSpec) -> Result<MatrixForm, SimplicialError> {
    Ok(a.try_map(|e| d.apply(e))?.add(&a.mul(a)))
}

/// The de Rham differential on the free pullback alphabets of every level.
pub fn formal_differential() -> DerivationSpec {
    DerivationSpec::new(1)
        .with_rule(|g| match g.family {
            Family::SimplexDt | Family::Pullback2 => Some(GradedElement::zero()),
            Family::Pullback1 => {
                let i = g.index;
                Some(GradedElement::generator(Generator::pullback_d(
                    i[0] as usize,
                    i[1] as usize,
                    i[2] as usize,
                    i[3] as usize,
                )))
            }
            _ => None,
        })
        .with_function_rule(simplex_function_rule)
}

pub(super) fn simplex_function_rule(f: FunctionSymbol) -> Option<GradedElement> {
    match f {
        FunctionSymbol::SimplexParam(i) => Some(GradedElement::generator(Generator::dt(i as usize))),
        FunctionSymbol::Coefficient { .. } => None,
    }
}

/// Contraction by X on the pullback alphabet: α_i ↦ X, dt ↦ 0, t ↦ 0.
pub fn pullback_contraction(x: &[Vec<Rational>]) -> DerivationSpec {
    let x: Vec<Vec<Rational>> = x.to_vec();
    DerivationSpec::new(-1)
        .with_rule(move |g| match g.family {
            Family::Pullback1 => {
                let (a, b) = (g.index[2] as usize, g.index[3] as usize);
                Some(GradedElement::scalar(x[a - 1][b - 1].clone()))
            }
            Family::SimplexDt => Some(GradedElement::zero()),
            _ => None,
        })
        .with_function_rule(|_| Some(GradedElement::zero()))
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, v| acc * BigInt::from(v))
}

/// Fibre integration over Δ^k.
///
/// Δ^k carries the orientation dt_0∧…∧dt_{k-1} = (−1)^k dt_1∧…∧dt_k, and
/// ∫ F(t) dt_1…dt_k ∧ β = (−1)^k (∫ F) β with the Dirichlet moments
/// ∫ t^a = Π a_i! / (k + Σ a_i)!. Terms without all k differentials drop out.
pub fn integrate_simplex(c: &GradedElement, k: usize) -> GradedElement {
    let mut out = GradedElement::zero();
    for (m, coeff) in c.iter() {
        let dts = m.word.iter().take_while(|(g, _)| g.family == Family::SimplexDt).count();
        if dts != k {
            continue;
        }
        let mut exps = vec![0u32; k + 1];
        let mut funcs = Vec::new();
        for &(f, e) in &m.funcs {
            match f {
                FunctionSymbol::SimplexParam(i) => exps[i as usize] = e,
                _ => funcs.push((f, e)),
            }
        }
        let total: u32 = exps[1..].iter().sum();
        let num = exps[1..].iter().fold(BigInt::one(), |acc, &a| acc * factorial(a));
        let mut value = coeff * Rational::new(num, factorial(total + k as u32));
        if k % 2 == 1 {
            value = -value;
        }
        out.add_term(Monomial { funcs, word: m.word[k..].to_vec() }, value);
    }
    out
}

/// A form on the level-`level` nerve space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    pub level: usize,
    pub element: GradedElement,
    pub model: Model,
}

impl Cochain {
    pub fn new(level: usize, element: GradedElement, model: Model) -> Self {
        Cochain { level, element, model }
    }

    pub fn form_degree(&self) -> Option<usize> {
        self.element.homogeneous_degree()
    }

    pub fn is_zero(&self) -> bool {
        self.element.is_zero()
    }
}

/// Re-index the vertex slot of every level-`from` generator through `map`.
pub fn vertex_map_hom(from: usize, to: usize, map: Vec<usize>) -> AlgebraHom {
    AlgebraHom::new()
        .with_rule(move |g| {
            let i = g.index;
            let remap = |vertex: u8| map[vertex as usize];
            match g.family {
                Family::Pullback1 | Family::Pullback2 | Family::Transverse if i[0] as usize == from => {
                    let mut idx = i;
                    idx[0] = to as u8;
                    idx[1] = remap(i[1]) as u8;
                    Some(GradedElement::generator(Generator { index: idx, ..g }))
                }
                Family::DerivedCoeff if i[1] as usize == from => {
                    let mut idx = i;
                    idx[1] = to as u8;
                    idx[2] = remap(i[2]) as u8;
                    Some(GradedElement::generator(Generator { index: idx, ..g }))
                }
                _ => None,
            }
        })
        .passthrough(Family::MaurerCartan)
        .passthrough(Family::Symbol)
}

fn check_level(c: &GradedElement, level: usize) -> Result<(), SimplicialError> {
    for (m, _) in c.iter() {
        for (g, _) in &m.word {
            let lvl = match g.family {
                Family::Pullback1 | Family::Pullback2 | Family::Transverse => g.index[0],
                Family::DerivedCoeff => g.index[1],
                Family::MaurerCartan | Family::Symbol => continue,
                _ => {
                    return Err(SimplicialError::Alphabet(format!(
                        "{g} is not a nerve-level generator"
                    )))
                }
            };
            if lvl as usize != level {
                return Err(SimplicialError::Alphabet(format!(
                    "{g} does not live at level {level}"
                )));
            }
        }
        if !m.funcs.is_empty() {
            return Err(SimplicialError::Alphabet(
                "cochain still depends on simplex or coefficient functions".into(),
            ));
        }
    }
    Ok(())
}

/// ∂ = Σ_i (−1)^i (ε_i)^*.
pub fn coboundary(c: &Cochain) -> Result<Cochain, SimplicialError> {
    check_level(&c.element, c.level)?;
    let k = c.level + 1;
    let table = face_table(k);
    let mut out = GradedElement::zero();
    for (i, map) in table.maps.into_iter().enumerate() {
        let img = vertex_map_hom(c.level, k, map).apply(&c.element)?;
        if i % 2 == 0 {
            out += &img;
        } else {
            out = &out - &img;
        }
    }
    Ok(Cochain::new(k, out, c.model))
}

/// Cup product: pull c1 back along the front face, c2 along the back face,
/// and multiply with sign (−1)^{(form degree of c1)·(level of c2)}.
pub fn cup(c1: &Cochain, c2: &Cochain) -> Result<Cochain, SimplicialError> {
    if c1.model != c2.model {
        return Err(SimplicialError::Alphabet("cup of cochains from different models".into()));
    }
    check_level(&c1.element, c1.level)?;
    check_level(&c2.element, c2.level)?;
    let (m, n) = (c1.level, c2.level);
    let front = vertex_map_hom(m, m + n, (0..=m).collect()).apply(&c1.element)?;
    let back = vertex_map_hom(n, m + n, (m..=m + n).collect()).apply(&c2.element)?;
    let mut out = GradedElement::zero();
    for deg in c1.element.degrees() {
        let part = front.homogeneous_part(deg);
        let prod = part.wedge(&back);
        if (deg * n) % 2 == 1 {
            out = &out - &prod;
        } else {
            out += &prod;
        }
    }
    Ok(Cochain::new(m + n, out, c1.model))
}

/// The two homogeneous pieces of δc = (−1)^m dc + ∂c, at levels m and m+1.
pub fn total_differential(
    c: &Cochain,
    d: &DerivationSpec,
) -> Result<(Cochain, Cochain), SimplicialError> {
    let mut dc = d.apply(&c.element)?;
    if c.level % 2 == 1 {
        dc = -dc;
    }
    Ok((Cochain::new(c.level, dc, c.model), coboundary(c)?))
}

/// Pullback along the unit (degeneracy) map from level 1 to level 0: both
/// vertices collapse to the single level-0 vertex.
pub fn unit_pullback(c: &GradedElement) -> Result<GradedElement, SimplicialError> {
    Ok(vertex_map_hom(1, 0, vec![0, 0]).apply(c)?)
}

/// Random integer combination of products of up to three level-`level`
/// pullback generators α and dα, for property checks.
pub fn random_pullback_cochain<R: rand::Rng>(level: usize, q: usize, terms: usize, rng: &mut R) -> Cochain {
    let mut out = GradedElement::zero();
    for _ in 0..terms {
        let mut m = GradedElement::int(rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 });
        for _ in 0..rng.gen_range(1..=3) {
            let (i, a, b) = (rng.gen_range(0..=level), rng.gen_range(1..=q), rng.gen_range(1..=q));
            let g = if rng.gen_bool(0.6) { Generator::pullback(level, i, a, b) } else { Generator::pullback_d(level, i, a, b) };
            m = m.wedge(&GradedElement::generator(g));
        }
        out += &m;
    }
    Cochain::new(level, out, Model::Formal)
}

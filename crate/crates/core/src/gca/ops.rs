use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use super::element::{rat, GradedElement, Monomial};
use super::symbols::{Family, FunctionSymbol, Generator};
use super::GcaError;

pub type GeneratorRule = Arc<dyn Fn(Generator) -> Option<GradedElement> + Send + Sync>;
pub type FunctionRule = Arc<dyn Fn(FunctionSymbol) -> Option<GradedElement> + Send + Sync>;

/// A graded derivation given by its values on generators and functions.
/// Explicit images win over the rules.
#[derive(Clone)]
pub struct DerivationSpec {
    pub degree: i32,
    gens: HashMap<Generator, GradedElement>,
    funcs: HashMap<FunctionSymbol, GradedElement>,
    gen_rule: Option<GeneratorRule>,
    func_rule: Option<FunctionRule>,
}

impl fmt::Debug for DerivationSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DerivationSpec")
            .field("degree", &self.degree)
            .field("generators", &self.gens.len())
            .field("functions", &self.funcs.len())
            .finish()
    }
}

impl DerivationSpec {
    pub fn new(degree: i32) -> Self {
        DerivationSpec {
            degree,
            gens: HashMap::new(),
            funcs: HashMap::new(),
            gen_rule: None,
            func_rule: None,
        }
    }

    pub fn set(&mut self, g: Generator, image: GradedElement) -> &mut Self {
        self.gens.insert(g, image);
        self
    }

    pub fn set_function(&mut self, f: FunctionSymbol, image: GradedElement) -> &mut Self {
        self.funcs.insert(f, image);
        self
    }

    pub fn with_rule(
        mut self,
        rule: impl Fn(Generator) -> Option<GradedElement> + Send + Sync + 'static,
    ) -> Self {
        self.gen_rule = Some(Arc::new(rule));
        self
    }

    pub fn with_function_rule(
        mut self,
        rule: impl Fn(FunctionSymbol) -> Option<GradedElement> + Send + Sync + 'static,
    ) -> Self {
        self.func_rule = Some(Arc::new(rule));
        self
    }

    pub fn image(&self, g: Generator) -> Result<GradedElement, GcaError> {
        if let Some(v) = self.gens.get(&g) {
            return Ok(v.clone());
        }
        self.gen_rule
            .as_ref()
            .and_then(|r| r(g))
            .ok_or_else(|| GcaError::MissingImage(g.to_string()))
    }

    pub fn function_image(&self, f: FunctionSymbol) -> Result<GradedElement, GcaError> {
        if let Some(v) = self.funcs.get(&f) {
            return Ok(v.clone());
        }
        self.func_rule
            .as_ref()
            .and_then(|r| r(f))
            .ok_or_else(|| GcaError::MissingImage(f.to_string()))
    }

    pub fn apply(&self, a: &GradedElement) -> Result<GradedElement, GcaError> {
        let mut out = GradedElement::zero();
        for (m, c) in a.iter() {
            out += &self.apply_monomial(m)?.scale(c);
        }
        Ok(out)
    }

    fn apply_monomial(&self, m: &Monomial) -> Result<GradedElement, GcaError> {
        let mut out = GradedElement::zero();
        let word = GradedElement::term(rat(1), Monomial { funcs: vec![], word: m.word.clone() });

        for (k, &(f, e)) in m.funcs.iter().enumerate() {
            let mut rest = m.funcs.clone();
            if e == 1 {
                rest.remove(k);
            } else {
                rest[k].1 -= 1;
            }
            let prefix = GradedElement::term(rat(e as i64), Monomial { funcs: rest, word: vec![] });
            let df = self.function_image(f)?;
            if df.is_zero() {
                continue;
            }
            out += &prefix.wedge(&df).wedge(&word);
        }

        let odd_derivation = self.degree.rem_euclid(2) == 1;
        let mut prefix_degree = 0usize;
        for (k, &(g, e)) in m.word.iter().enumerate() {
            let dg = self.image(g)?;
            if !dg.is_zero() {
                let mut before = m.word[..k].to_vec();
                let after = m.word[k + 1..].to_vec();
                let mut coeff = rat(e as i64);
                if odd_derivation && prefix_degree % 2 == 1 {
                    coeff = -coeff;
                }
                if e > 1 {
                    before.push((g, e - 1));
                }
                let left = GradedElement::term(coeff, Monomial { funcs: m.funcs.clone(), word: before });
                let right = GradedElement::term(rat(1), Monomial { funcs: vec![], word: after });
                out += &left.wedge(&dg).wedge(&right);
            }
            prefix_degree += g.degree as usize * e as usize;
        }
        Ok(out)
    }

    /// Graded commutator `[self, other] = self other - (-1)^{|self||other|} other self`.
    pub fn commutator_apply(
        &self,
        other: &DerivationSpec,
        a: &GradedElement,
    ) -> Result<GradedElement, GcaError> {
        let ab = self.apply(&other.apply(a)?)?;
        let ba = other.apply(&self.apply(a)?)?;
        if (self.degree * other.degree).rem_euclid(2) == 1 {
            Ok(&ab + &ba)
        } else {
            Ok(&ab - &ba)
        }
    }
}

/// Algebra homomorphism defined on generators. Functions and any family in
/// `passthrough` map to themselves unless an image is given.
#[derive(Clone, Default)]
pub struct AlgebraHom {
    gens: HashMap<Generator, GradedElement>,
    funcs: HashMap<FunctionSymbol, GradedElement>,
    rule: Option<GeneratorRule>,
    passthrough: Vec<Family>,
}

impl fmt::Debug for AlgebraHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AlgebraHom")
            .field("generators", &self.gens.len())
            .field("passthrough", &self.passthrough)
            .finish()
    }
}

impl AlgebraHom {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, g: Generator, image: GradedElement) -> &mut Self {
        self.gens.insert(g, image);
        self
    }

    pub fn set_function(&mut self, f: FunctionSymbol, image: GradedElement) -> &mut Self {
        self.funcs.insert(f, image);
        self
    }

    pub fn with_rule(
        mut self,
        rule: impl Fn(Generator) -> Option<GradedElement> + Send + Sync + 'static,
    ) -> Self {
        self.rule = Some(Arc::new(rule));
        self
    }

    pub fn passthrough(mut self, family: Family) -> Self {
        self.passthrough.push(family);
        self
    }

    fn image(&self, g: Generator) -> Result<GradedElement, GcaError> {
        if let Some(v) = self.gens.get(&g) {
            return Ok(v.clone());
        }
        if let Some(v) = self.rule.as_ref().and_then(|r| r(g)) {
            return Ok(v);
        }
        if self.passthrough.contains(&g.family) {
            return Ok(GradedElement::generator(g));
        }
        Err(GcaError::MissingImage(g.to_string()))
    }

    pub fn apply(&self, a: &GradedElement) -> Result<GradedElement, GcaError> {
        let mut cache: HashMap<Generator, GradedElement> = HashMap::new();
        let mut out = GradedElement::zero();
        for (m, c) in a.iter() {
            let mut acc = GradedElement::scalar(c.clone());
            for &(f, e) in &m.funcs {
                let img = match self.funcs.get(&f) {
                    Some(v) => v.clone(),
                    None => GradedElement::function(f),
                };
                acc = acc.wedge(&img.pow(e));
            }
            for &(g, e) in &m.word {
                if let std::collections::hash_map::Entry::Vacant(v) = cache.entry(g) {
                    v.insert(self.image(g)?);
                }
                let img = &cache[&g];
                for _ in 0..e {
                    acc = acc.wedge(img);
                    if acc.is_zero() {
                        break;
                    }
                }
                if acc.is_zero() {
                    break;
                }
            }
            out += &acc;
        }
        Ok(out)
    }
}

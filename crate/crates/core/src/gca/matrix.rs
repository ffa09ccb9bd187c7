use super::element::{GradedElement, Rational};
use super::GcaError;

/// Square matrix with entries in the graded algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixForm {
    q: usize,
    entries: Vec<GradedElement>,
}

impl MatrixForm {
    pub fn zeros(q: usize) -> Self {
        MatrixForm { q, entries: vec![GradedElement::zero(); q * q] }
    }

    pub fn identity(q: usize) -> Self {
        Self::from_fn(q, |a, b| if a == b { GradedElement::one() } else { GradedElement::zero() })
    }

    /// Entries indexed from 1, matching generator names.
    pub fn from_fn(q: usize, mut f: impl FnMut(usize, usize) -> GradedElement) -> Self {
        let mut entries = Vec::with_capacity(q * q);
        for a in 1..=q {
            for b in 1..=q {
                entries.push(f(a, b));
            }
        }
        MatrixForm { q, entries }
    }

    pub fn from_rational(m: &[Vec<Rational>]) -> Self {
        let q = m.len();
        Self::from_fn(q, |a, b| GradedElement::scalar(m[a - 1][b - 1].clone()))
    }

    pub fn size(&self) -> usize {
        self.q
    }

    pub fn get(&self, a: usize, b: usize) -> &GradedElement {
        &self.entries[(a - 1) * self.q + (b - 1)]
    }

    pub fn set(&mut self, a: usize, b: usize, v: GradedElement) {
        self.entries[(a - 1) * self.q + (b - 1)] = v;
    }

    pub fn entries(&self) -> &[GradedElement] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(GradedElement::is_zero)
    }

    fn zip(&self, other: &Self, f: impl Fn(&GradedElement, &GradedElement) -> GradedElement) -> Self {
        assert_eq!(self.q, other.q, "matrix sizes differ");
        MatrixForm {
            q: self.q,
            entries: self.entries.iter().zip(&other.entries).map(|(x, y)| f(x, y)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, |x, y| x + y)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, |x, y| x - y)
    }

    pub fn neg(&self) -> Self {
        self.map(|x| -x)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        self.map(|x| x.scale(c))
    }

    /// Left multiplication of every entry by `e`.
    pub fn left_scale(&self, e: &GradedElement) -> Self {
        self.map(|x| e.wedge(x))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.q, other.q, "matrix sizes differ");
        let q = self.q;
        Self::from_fn(q, |a, b| {
            let mut s = GradedElement::zero();
            for c in 1..=q {
                s += &self.get(a, c).wedge(other.get(c, b));
            }
            s
        })
    }

    pub fn mul_bounded(&self, other: &Self, max_weight: usize) -> Self {
        assert_eq!(self.q, other.q, "matrix sizes differ");
        let q = self.q;
        Self::from_fn(q, |a, b| {
            let mut s = GradedElement::zero();
            for c in 1..=q {
                s += &self.get(a, c).wedge_bounded(other.get(c, b), max_weight);
            }
            s
        })
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = MatrixForm::identity(self.q);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn trace(&self) -> GradedElement {
        let mut s = GradedElement::zero();
        for a in 1..=self.q {
            s += self.get(a, a);
        }
        s
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.q, |a, b| self.get(b, a).clone())
    }

    pub fn map(&self, f: impl Fn(&GradedElement) -> GradedElement) -> Self {
        MatrixForm { q: self.q, entries: self.entries.iter().map(f).collect() }
    }

    pub fn try_map(
        &self,
        f: impl Fn(&GradedElement) -> Result<GradedElement, GcaError>,
    ) -> Result<Self, GcaError> {
        Ok(MatrixForm { q: self.q, entries: self.entries.iter().map(f).collect::<Result<_, _>>()? })
    }
}

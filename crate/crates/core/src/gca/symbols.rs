use std::fmt;

/// Which alphabet a generator belongs to. The ordering here drives the
/// canonical monomial order, so simplex differentials always lead a word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    SimplexDt,
    WoH,
    WoC,
    WeilOmega,
    WeilCurvature,
    Pullback1,
    Pullback2,
    CoordDz,
    Transverse,
    LeafwiseForm,
    DerivedCoeff,
    MaurerCartan,
    Symbol,
}

impl Family {
    pub fn tag(self) -> &'static str {
        match self {
            Family::SimplexDt => "simplex-t-differential",
            Family::WoH => "wo-h",
            Family::WoC => "wo-c",
            Family::WeilOmega => "weil-omega",
            Family::WeilCurvature => "weil-Omega",
            Family::Pullback1 => "pullback-1form",
            Family::Pullback2 => "pullback-2form",
            Family::CoordDz => "coordinate-dz",
            Family::Transverse => "transverse-1form",
            Family::LeafwiseForm => "leafwise-1form",
            Family::DerivedCoeff => "derived-coefficient-form",
            Family::MaurerCartan => "maurer-cartan",
            Family::Symbol => "symbol",
        }
    }
}

/// A free generator. Indices are stored as given (matrix indices are 1-based).
///
/// `weight` counts how many transverse coordinate differentials the generator
/// carries in the local model; it is zero everywhere else.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Generator {
    pub family: Family,
    pub index: [u8; 5],
    pub degree: u8,
    pub weight: u8,
}

impl Generator {
    pub const fn new(family: Family, index: [u8; 5], degree: u8, weight: u8) -> Self {
        Generator { family, index, degree, weight }
    }

    pub fn is_odd(self) -> bool {
        self.degree % 2 == 1
    }

    pub fn dt(i: usize) -> Self {
        Self::new(Family::SimplexDt, [i as u8, 0, 0, 0, 0], 1, 0)
    }

    pub fn weil_omega(a: usize, b: usize) -> Self {
        Self::new(Family::WeilOmega, [a as u8, b as u8, 0, 0, 0], 1, 0)
    }

    pub fn weil_curvature(a: usize, b: usize) -> Self {
        Self::new(Family::WeilCurvature, [a as u8, b as u8, 0, 0, 0], 2, 0)
    }

    pub fn wo_h(i: usize) -> Self {
        Self::new(Family::WoH, [i as u8, 0, 0, 0, 0], (2 * i - 1) as u8, 0)
    }

    pub fn wo_c(i: usize) -> Self {
        Self::new(Family::WoC, [i as u8, 0, 0, 0, 0], (2 * i) as u8, 0)
    }

    /// Pullback of the connection form to the nerve at `level`, vertex `vertex`.
    pub fn pullback(level: usize, vertex: usize, a: usize, b: usize) -> Self {
        Self::new(Family::Pullback1, [level as u8, vertex as u8, a as u8, b as u8, 0], 1, 0)
    }

    pub fn pullback_d(level: usize, vertex: usize, a: usize, b: usize) -> Self {
        Self::new(Family::Pullback2, [level as u8, vertex as u8, a as u8, b as u8, 0], 2, 0)
    }

    pub fn dz(j: usize) -> Self {
        Self::new(Family::CoordDz, [j as u8, 0, 0, 0, 0], 1, 1)
    }

    /// Transverse part of a pulled-back connection in the local model.
    pub fn transverse(level: usize, vertex: usize, a: usize, b: usize) -> Self {
        Self::new(Family::Transverse, [level as u8, vertex as u8, a as u8, b as u8, 0], 1, 1)
    }

    /// Leafwise part of `d` of the coefficient of `dz^j` in a transverse form.
    pub fn leafwise(level: usize, vertex: usize, a: usize, b: usize, j: usize) -> Self {
        Self::new(
            Family::LeafwiseForm,
            [level as u8, vertex as u8, a as u8, b as u8, j as u8],
            1,
            0,
        )
    }

    /// `d` of a transverse form splits into a part with one `dz` (kind 0)
    /// and a part with two (kind 1).
    pub fn derived(kind: u8, level: usize, vertex: usize, a: usize, b: usize) -> Self {
        let weight = if kind == 0 { 1 } else { 2 };
        Self::new(
            Family::DerivedCoeff,
            [kind, level as u8, vertex as u8, a as u8, b as u8],
            2,
            weight,
        )
    }

    pub fn maurer_cartan(a: usize, b: usize) -> Self {
        Self::new(Family::MaurerCartan, [a as u8, b as u8, 0, 0, 0], 1, 0)
    }

    pub fn symbol(id: u8, degree: u8) -> Self {
        Self::new(Family::Symbol, [id, 0, 0, 0, 0], degree, 0)
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = self.index;
        match self.family {
            Family::SimplexDt => write!(f, "dt{}", i[0]),
            Family::WoH => write!(f, "h{}", i[0]),
            Family::WoC => write!(f, "c{}", i[0]),
            Family::WeilOmega => write!(f, "w[{},{}]", i[0], i[1]),
            Family::WeilCurvature => write!(f, "W[{},{}]", i[0], i[1]),
            Family::Pullback1 => write!(f, "a{}.{}[{},{}]", i[0], i[1], i[2], i[3]),
            Family::Pullback2 => write!(f, "da{}.{}[{},{}]", i[0], i[1], i[2], i[3]),
            Family::CoordDz => write!(f, "dz{}", i[0]),
            Family::Transverse => write!(f, "th{}.{}[{},{}]", i[0], i[1], i[2], i[3]),
            Family::LeafwiseForm => {
                write!(f, "AL{}.{}[{},{};{}]", i[0], i[1], i[2], i[3], i[4])
            }
            Family::DerivedCoeff => {
                let name = if i[0] == 0 { "lam" } else { "eta" };
                write!(f, "{}{}.{}[{},{}]", name, i[1], i[2], i[3], i[4])
            }
            Family::MaurerCartan => write!(f, "m[{},{}]", i[0], i[1]),
            Family::Symbol => write!(f, "g{}", i[0]),
        }
    }
}

/// Degree-zero symbols: simplex coordinates and opaque coefficient functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FunctionSymbol {
    SimplexParam(u8),
    Coefficient { name: &'static str, index: [u8; 6] },
}

impl fmt::Display for FunctionSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctionSymbol::SimplexParam(i) => write!(f, "t{i}"),
            FunctionSymbol::Coefficient { name, index } => {
                let parts: Vec<String> = index.iter().map(|v| v.to_string()).collect();
                write!(f, "{name}[{}]", parts.join(","))
            }
        }
    }
}

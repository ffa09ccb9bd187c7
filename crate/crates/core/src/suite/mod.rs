//! Named checks grouped by subsystem, the command-line overrides that feed
//! them, and the runner that turns them into records.

mod algebra;
mod dump;
mod numeric;

use std::fmt;

use thiserror::Error;

use crate::config::{default_bott_poly, BottCase, Config, ConfigError};
use crate::folmodel::ModelError;
use crate::gca::{Family, GcaError};
use crate::gvnum::{ExecMode, GvError};
use crate::report::{CheckRecord, Derived, Summary};
use crate::simplicial::SimplicialError;
use crate::weil::{WeilError, WoAlgebra};

pub use dump::dump;

#[derive(Debug, Error)]
pub enum SuiteError {
    #[error("unknown check id `{0}`")]
    UnknownCheck(String),
    #[error("check `{id}` belongs to `{group}`, not `{requested}`")]
    WrongGroup { id: String, group: Group, requested: String },
    #[error("{0}")]
    Usage(String),
    #[error("constructor rejected: {0}")]
    Constructor(ModelError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Weil(#[from] WeilError),
    #[error(transparent)]
    Simplicial(#[from] SimplicialError),
    #[error(transparent)]
    Algebra(#[from] GcaError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Gv(#[from] GvError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Group {
    Weil,
    Bott,
    Model,
    GvCocycle,
    /// Run by `derive gv`.
    Gv,
}

impl Group {
    pub const ALL: [Group; 5] = [Group::Weil, Group::Bott, Group::Gv, Group::Model, Group::GvCocycle];

    pub fn name(self) -> &'static str {
        match self {
            Group::Weil => "weil",
            Group::Bott => "bott",
            Group::Model => "model",
            Group::GvCocycle => "gvcocycle",
            Group::Gv => "gv",
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub const CHECKS: &[(&str, Group)] = &[
    ("weil.d_squared", Group::Weil),
    ("weil.matrix_identities", Group::Weil),
    ("weil.dh_equals_c", Group::Weil),
    ("weil.c_basic_gl", Group::Weil),
    ("weil.h_basic_so", Group::Weil),
    ("weil.contractions_anticommute", Group::Weil),
    ("weil.cartan_derivation", Group::Weil),
    ("weil.truncation_ideal", Group::Weil),
    ("bott.vanishing", Group::Bott),
    ("bott.weight_bound", Group::Bott),
    ("bott.negative_control", Group::Bott),
    ("gv.normal_form", Group::Gv),
    ("gv.higher_levels_vanish", Group::Gv),
    ("gv.local_closure", Group::Gv),
    ("gv.formal_witness", Group::Gv),
    ("gv.units", Group::Gv),
    ("nerve.coboundary_squared", Group::Gv),
    ("nerve.d_commutes", Group::Gv),
    ("model.delta_cocycle", Group::Model),
    ("model.modular_homomorphism", Group::Model),
    ("model.holonomy_functor", Group::Model),
    ("model.path_integral", Group::Model),
    ("model.path_integral_order", Group::Model),
    ("model.action_matrix", Group::Model),
    ("model.perturbation_invariance", Group::Model),
    ("model.profile_independence", Group::Model),
    ("model.flat_case", Group::Model),
    ("gvcocycle.antisymmetry", Group::GvCocycle),
    ("gvcocycle.hochschild", Group::GvCocycle),
    ("gvcocycle.log_delta_agreement", Group::GvCocycle),
    ("gvcocycle.tau_shift_invariance", Group::GvCocycle),
    ("gvcocycle.flat_case", Group::GvCocycle),
];

fn lookup(id: &str) -> Option<(&'static str, Group)> {
    CHECKS.iter().find(|(name, _)| *name == id).copied()
}

/// Check ids to run for `groups`, restricted to `only` when it is non-empty.
/// Every id is validated before anything runs.
pub fn select(groups: &[Group], only: &[String]) -> Result<Vec<&'static str>, SuiteError> {
    let requested = groups.iter().map(|g| g.name()).collect::<Vec<_>>().join("|");
    let mut chosen = Vec::new();
    for id in only {
        let (name, group) = lookup(id).ok_or_else(|| SuiteError::UnknownCheck(id.clone()))?;
        if !groups.contains(&group) {
            return Err(SuiteError::WrongGroup { id: id.clone(), group, requested });
        }
        if !chosen.contains(&name) {
            chosen.push(name);
        }
    }
    let all = CHECKS.iter().filter(|(_, g)| groups.contains(g)).map(|(n, _)| *n);
    Ok(if chosen.is_empty() { all.collect() } else { all.filter(|n| chosen.contains(n)).collect() })
}

/// Parse `a..b` (inclusive).
pub fn parse_levels(s: &str) -> Result<[usize; 2], SuiteError> {
    let bad = || SuiteError::Usage(format!("--levels expects a..b with a ≤ b, got `{s}`"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok([a, b])
}

/// Command-line adjustments to a config.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub q: Option<usize>,
    pub levels: Option<[usize; 2]>,
    pub poly: Option<String>,
}

impl Overrides {
    pub fn apply(&self, cfg: &mut Config) -> Result<(), SuiteError> {
        if self.q == Some(0) {
            return Err(SuiteError::Usage("--q must be at least 1".into()));
        }
        if let Some(q) = self.q {
            cfg.weil.ranks = vec![q];
            cfg.derive.q = q;
        }
        if let Some(l) = self.levels {
            cfg.derive.levels = l;
        }
        if self.q.is_some() || self.poly.is_some() {
            let q = self.q.unwrap_or(cfg.bott.cases.first().map_or(1, |c| c.q));
            let poly = self.poly.clone().unwrap_or_else(|| default_bott_poly(q));
            check_chern_polynomial(q, &poly)?;
            let levels = self.levels.unwrap_or([0, (q + 1).min(3)]);
            cfg.bott.cases = vec![BottCase { q, poly, levels }];
        } else if let Some(l) = self.levels {
            for c in &mut cfg.bott.cases {
                c.levels = l;
            }
        }
        Ok(())
    }
}

/// `poly` must parse in rank q as a nonzero homogeneous polynomial in the c_i.
pub fn check_chern_polynomial(q: usize, poly: &str) -> Result<(), SuiteError> {
    let p = WoAlgebra::new(q)?.parse_word(poly)?;
    if p.iter().any(|(m, _)| m.contains_family(Family::WoH)) || p.homogeneous_degree().is_none() {
        return Err(SuiteError::Usage(format!("`{poly}` is not a homogeneous Chern polynomial")));
    }
    Ok(())
}

/// Run the selected checks in registry order. Skips come from `cfg.skip`.
pub fn run(cfg: &Config, ids: &[&str], mode: ExecMode) -> Vec<CheckRecord> {
    let mut ctx = numeric::Context::new(cfg, mode);
    ids.iter()
        .map(|&id| {
            if cfg.skip.iter().any(|s| s == id) {
                return CheckRecord::skipped(id);
            }
            let r = match lookup(id).map(|(_, g)| g) {
                Some(Group::Weil | Group::Bott | Group::Gv) => algebra::run(cfg, id),
                Some(Group::Model | Group::GvCocycle) => numeric::run(&mut ctx, id),
                None => Err(SuiteError::UnknownCheck(id.to_string())),
            };
            r.unwrap_or_else(|e| CheckRecord::failed(id, e))
        })
        .collect()
}

/// Reject unknown ids in the config's skip list.
pub fn validate_skips(cfg: &Config) -> Result<(), SuiteError> {
    for s in &cfg.skip {
        lookup(s).ok_or_else(|| SuiteError::UnknownCheck(s.clone()))?;
    }
    Ok(())
}

pub fn verify(cfg: &Config, groups: &[Group], only: &[String], mode: ExecMode) -> Result<Summary, SuiteError> {
    validate_skips(cfg)?;
    let ids = select(groups, only)?;
    let name = groups.iter().map(|g| g.name()).collect::<Vec<_>>().join("+");
    Ok(Summary::new(&format!("verify {name}"), run(cfg, &ids, mode), vec![]))
}

/// ψ(h1·c1^q) at the configured levels, followed by the gv and nerve checks.
pub fn derive_gv(cfg: &Config, only: &[String], mode: ExecMode) -> Result<Summary, SuiteError> {
    validate_skips(cfg)?;
    let ids = select(&[Group::Gv], only)?;
    let derived: Vec<Derived> = algebra::derive_gv_levels(cfg)?;
    Ok(Summary::new("derive gv", run(cfg, &ids, mode), derived))
}

//! One line per acceptance criterion. Tolerances, grids and sample counts are
//! pinned here rather than read from the defaults, so changing a default
//! cannot quietly loosen a criterion.

use std::time::{Duration, Instant};

use folichar::config::{BottCase, Config};
use folichar::gvnum::ExecMode;
use folichar::report::CheckRecord;
use folichar::suite;

fn pinned() -> Config {
    let mut cfg = Config::default();
    cfg.skip.clear();
    cfg.weil.ranks = vec![1, 2, 3];
    cfg.nerve.max_level = 3;
    cfg.bott.cases = vec![
        BottCase { q: 1, poly: "c1^2".into(), levels: [0, 2] },
        BottCase { q: 2, poly: "c1*c2".into(), levels: [0, 3] },
    ];
    cfg.model.random_pairs = 1000;
    cfg.model.max_winding = 3;
    cfg.model.steps = 1000;
    cfg.model.basepoints = 32;
    (cfg.gv.nx, cfg.gv.nz, cfg.gv.nt) = (64, 64, 32);
    let t = &mut cfg.tolerances;
    t.cocycle = 1e-10;
    t.path_integral = 1e-6;
    t.path_order = 2.0;
    t.pairing = 1e-3;
    t.pairing_order = 1.8;
    t.log_delta = 1e-10;
    t.flat = 1e-12;
    cfg
}

struct Criterion {
    number: u32,
    what: &'static str,
    ids: &'static [&'static str],
    budget: Duration,
}

const CRITERIA: &[Criterion] = &[
    Criterion { number: 1, what: "d^2 = 0 on W(gl(q)) generators, q <= 3", ids: &["weil.d_squared"], budget: Duration::from_secs(1) },
    Criterion { number: 2, what: "dh1 = c1 for q = 1,2,3 and dh3 = c3 for q = 3", ids: &["weil.dh_equals_c"], budget: Duration::from_secs(30) },
    Criterion {
        number: 3,
        what: "c_i gl-basic, h_i so-basic for odd i, q <= 3",
        ids: &["weil.c_basic_gl", "weil.h_basic_so"],
        budget: Duration::from_secs(60),
    },
    Criterion {
        number: 4,
        what: "coboundary squares to zero and commutes with d, levels <= 3",
        ids: &["nerve.coboundary_squared", "nerve.d_commutes"],
        budget: Duration::from_secs(60),
    },
    Criterion {
        number: 5,
        what: "level-1 GV cochain is a0 a1; levels 2 and 3 vanish",
        ids: &["gv.normal_form", "gv.higher_levels_vanish"],
        budget: Duration::from_secs(1),
    },
    Criterion {
        number: 6,
        what: "Bott vanishing for c1^2 (q=1) and c1c2 (q=2) with the weight bound",
        ids: &["bott.vanishing", "bott.weight_bound"],
        budget: Duration::from_secs(60),
    },
    Criterion {
        number: 7,
        what: "GV cochain closed in the local model, not in the free alphabet",
        ids: &["gv.local_closure", "gv.formal_witness"],
        budget: Duration::from_secs(60),
    },
    Criterion { number: 8, what: "delta cocycle over 1000 pairs, |n| <= 3", ids: &["model.delta_cocycle"], budget: Duration::from_secs(5) },
    Criterion {
        number: 9,
        what: "path integral = delta = action-matrix entry, order >= 2",
        ids: &["model.path_integral", "model.path_integral_order"],
        budget: Duration::from_secs(30),
    },
    Criterion {
        number: 10,
        what: "GV cocycle antisymmetric and Hochschild-closed at (64,64,32), order >= 1.8",
        ids: &["gvcocycle.antisymmetry", "gvcocycle.hochschild"],
        budget: Duration::from_secs(300),
    },
    Criterion {
        number: 11,
        what: "delta and d log Delta weightings agree; rotation gives zero",
        ids: &["gvcocycle.log_delta_agreement", "gvcocycle.flat_case"],
        budget: Duration::from_secs(60),
    },
];

fn short(rec: &CheckRecord) -> String {
    let vals: Vec<String> = rec.values.iter().map(|(k, v)| format!("{k}={v:.3e}")).collect();
    format!("{}[{}]", rec.id, vals.join(" "))
}

#[test]
fn acceptance() {
    let cfg = pinned();
    cfg.validate().unwrap();
    let mut failed = Vec::new();
    for c in CRITERIA {
        let start = Instant::now();
        let records = suite::run(&cfg, c.ids, ExecMode { serial: false });
        let elapsed = start.elapsed();
        let checks_ok = records.iter().all(CheckRecord::passed) && records.len() == c.ids.len();
        let in_time = elapsed <= c.budget;
        let ok = checks_ok && in_time;
        let mut line = format!(
            "{} criterion {:>2}: {} ({:.2} s of {} s)",
            if ok { "PASS" } else { "FAIL" },
            c.number,
            c.what,
            elapsed.as_secs_f64(),
            c.budget.as_secs()
        );
        if !in_time {
            line.push_str(" over budget");
        }
        for r in &records {
            line.push_str("  ");
            line.push_str(&short(r));
            if !r.passed() {
                line.push_str(&format!(" ({})", r.detail));
            }
        }
        println!("{line}");
        if !ok {
            failed.push(c.number);
        }
    }
    assert!(failed.is_empty(), "criteria failed: {failed:?}");
}

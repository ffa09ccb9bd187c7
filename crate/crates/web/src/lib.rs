//! Browser bindings: a δ curve for a circle diffeomorphism, element dumps
//! from the Weil algebra, and single Bott vanishing checks.

use std::f64::consts::TAU;

use wasm_bindgen::prelude::*;

use folichar::folmodel::{CircleDiffeo, FourierTerm, Germ, SeamProfile, SuspensionModel};
use folichar::simplicial::{verify_bott, LocalModel};

const MAX_SAMPLES: usize = 4096;

/// Rows (z, δ(n, z), path integral) for z on a uniform grid, flattened.
pub fn delta_rows(a1: f64, b2: f64, winding: i32, samples: usize, steps: usize) -> Result<Vec<f64>, String> {
    if samples == 0 || samples > MAX_SAMPLES {
        return Err(format!("samples must be in 1..={MAX_SAMPLES}"));
    }
    if winding.abs() > 8 {
        return Err("winding must satisfy |n| <= 8".into());
    }
    let f = CircleDiffeo::new(vec![FourierTerm { n: 1, a: a1, b: 0.0 }, FourierTerm { n: 2, a: 0.0, b: b2 }])
        .map_err(|e| e.to_string())?;
    let profile = SeamProfile::new(2).map_err(|e| e.to_string())?;
    let m = SuspensionModel::new(f, profile, steps).map_err(|e| e.to_string())?;
    let mut out = Vec::with_capacity(3 * samples);
    for j in 0..samples {
        let z = TAU * j as f64 / samples as f64;
        let g = Germ::new(winding, z);
        out.push(z);
        out.push(m.delta_analytic(g).map_err(|e| e.to_string())?);
        out.push(m.path_integral_curvature(g, 1.0, steps).map_err(|e| e.to_string())?);
    }
    Ok(out)
}

pub fn dump_text(element: &str, q: usize) -> Result<String, String> {
    if !(1..=3).contains(&q) {
        return Err("q must be 1, 2 or 3 here".into());
    }
    folichar::suite::dump(element, Some(q)).map_err(|e| e.to_string())
}

pub fn bott_json(q: usize, poly: &str, level: usize) -> Result<String, String> {
    if !(1..=2).contains(&q) || level > 3 {
        return Err("q must be 1 or 2 and the level at most 3".into());
    }
    let model = LocalModel::new(q).map_err(|e| e.to_string())?;
    let report = verify_bott(&model, level, poly).map_err(|e| e.to_string())?;
    serde_json::to_string(&report).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn delta_curve(a1: f64, b2: f64, winding: i32, samples: usize) -> Result<Vec<f64>, JsValue> {
    delta_rows(a1, b2, winding, samples, 200).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn weil_dump(element: &str, q: usize) -> Result<String, JsValue> {
    dump_text(element, q).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn bott_check(q: usize, poly: &str, level: usize) -> Result<String, JsValue> {
    bott_json(q, poly, level).map_err(|e| JsValue::from_str(&e))
}

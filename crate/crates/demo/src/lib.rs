//! Browser bindings for three interactive views: a cyclic-groupoid Cayley
//! table, ratchet/qubit transition amplitudes over time, and the
//! factorizable-state explorer. Every export returns a JSON string; errors
//! come back as `{"error": "..."}` so the page never has to catch.

use std::f64::consts::PI;

use gqm_core::io::{self, Format, OutputKind};
use gqm_core::measure::{amplitude_matrix, quantum_measure, Event};
use gqm_core::ratchet::{self, MINUS, PLUS};
use gqm_core::Propagator;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Largest groupoid the Cayley view will draw.
pub const MAX_TRANSITIONS: usize = 144;

fn wrap(r: Result<Value, String>) -> String {
    r.unwrap_or_else(|e| json!({ "error": e })).to_string()
}

/// Cayley table and axiom report of C_{n,k}.
pub fn cayley_table(n_outcomes: usize, k: usize) -> Result<Value, String> {
    if n_outcomes == 0 || k == 0 || n_outcomes * n_outcomes * k > MAX_TRANSITIONS {
        return Err(format!("need n, k >= 1 and n^2 k <= {MAX_TRANSITIONS}"));
    }
    let mut spec = json!({ "groupoid_source": { "cyclic": [n_outcomes, k] } });
    if (n_outcomes, k) == (2, 3) {
        spec["naming"] = json!("ratchet");
    }
    let exp = io::load(spec.to_string()).map_err(|d| d.to_string())?;
    let doc = |kind| -> Result<Value, String> {
        let (_, text) = io::render(&exp, kind, Some(Format::Json)).map_err(|d| d.to_string())?;
        serde_json::from_str(&text).map_err(|e| e.to_string())
    };
    let table = doc(OutputKind::Cayley)?;
    let axioms = doc(OutputKind::Axioms)?;
    Ok(json!({
        "header": table["header"],
        "rows": table["rows"],
        "valid": axioms["valid"],
        "composable_pairs": axioms["composable_pairs"],
        "violations": axioms["violations"],
    }))
}

/// Transition amplitudes `⟨y|x⟩(t)` of the ratchet state for the ratchet
/// Hamiltonian (`qubit = false`) or the qubit-like one (`qubit = true`).
///
/// `delta_step` picks `δ = 2π·delta_step/3`, the admissible phase shifts.
pub fn amplitude_curves(s: f64, delta_step: u32, qubit: bool, t_stop: f64, steps: usize) -> Result<Value, String> {
    if !(t_stop.is_finite() && t_stop > 0.0) || !(2..=2000).contains(&steps) {
        return Err("need t_stop > 0 and 2 <= steps <= 2000".into());
    }
    let g = ratchet::c23();
    let delta = 2.0 * PI * f64::from(delta_step % 3) / 3.0;
    let state = ratchet::ratchet_state(&g, s, delta).map_err(|e| e.to_string())?;
    let h = if qubit { ratchet::qubit_hamiltonian(&g) } else { ratchet::ratchet_hamiltonian(&g) };
    let prop = Propagator::new(&g, &h).map_err(|e| e.to_string())?;
    let t: Vec<f64> = (0..steps).map(|i| t_stop * i as f64 / (steps - 1) as f64).collect();
    let mut curves = serde_json::Map::new();
    for (key, x, y) in [("pp", PLUS, PLUS), ("mp", PLUS, MINUS), ("pm", MINUS, PLUS), ("mm", MINUS, MINUS)] {
        let amps = t.iter().map(|&ti| prop.amplitude(&state, x, y, ti)).collect::<Result<Vec<_>, _>>();
        let amps = amps.map_err(|e| e.to_string())?;
        curves.insert(
            key.into(),
            json!({
                "re": amps.iter().map(|a| a.re).collect::<Vec<_>>(),
                "im": amps.iter().map(|a| a.im).collect::<Vec<_>>(),
                "abs": amps.iter().map(|a| a.norm()).collect::<Vec<_>>(),
            }),
        );
    }
    Ok(json!({ "t": t, "delta": delta, "spectrum": prop.spectrum(), "curves": curves }))
}

/// Tries to extend `φ(alpha_1) = e^{is}`, `φ(beta_1) = e^{i(δ−s)}` to a
/// factorizable state and, on success, reports its quantum measure on hom sets.
pub fn explore_state(s: f64, delta: f64) -> Result<Value, String> {
    let g = ratchet::c23();
    let e3 = (3.0 * delta).cos();
    let base = json!({ "s": s, "delta": delta, "cos_3delta": e3 });
    let state = match ratchet::ratchet_state(&g, s, delta) {
        Ok(st) => st,
        Err(e) => {
            let mut v = base;
            v["admissible"] = json!(false);
            v["reason"] = json!(e.to_string());
            return Ok(v);
        }
    };
    let names: Vec<&str> = g.transitions().iter().map(|t| t.name.as_str()).collect();
    let phi: Vec<[f64; 2]> = state.phi().values().iter().map(|z| [z.re, z.im]).collect();
    let amp = amplitude_matrix(&g, &state).map_err(|e| e.to_string())?;
    let mut hom = Vec::new();
    for (lx, x) in [("+", PLUS), ("-", MINUS)] {
        for (ly, y) in [("+", PLUS), ("-", MINUS)] {
            let mu = quantum_measure(&g, &state, &Event::hom(&g, x, y)).map_err(|e| e.to_string())?;
            let a = amp[(y, x)];
            hom.push(json!({ "from": lx, "to": ly, "mu": mu.raw, "amplitude": [a.re, a.im] }));
        }
    }
    let mut v = base;
    v["admissible"] = json!(true);
    v["transitions"] = json!(names);
    v["phi"] = json!(phi);
    v["hom"] = json!(hom);
    Ok(v)
}

#[wasm_bindgen(js_name = cayleyTable)]
pub fn cayley_table_js(n_outcomes: usize, k: usize) -> String {
    wrap(cayley_table(n_outcomes, k))
}

#[wasm_bindgen(js_name = amplitudeCurves)]
pub fn amplitude_curves_js(s: f64, delta_step: u32, qubit: bool, t_stop: f64, steps: usize) -> String {
    wrap(amplitude_curves(s, delta_step, qubit, t_stop, steps))
}

#[wasm_bindgen(js_name = exploreState)]
pub fn explore_state_js(s: f64, delta: f64) -> String {
    wrap(explore_state(s, delta))
}

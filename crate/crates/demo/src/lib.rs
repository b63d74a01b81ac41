//! Browser bindings. Every function takes plain strings and returns a JSON
//! string; errors come back as `{"error": ...}`.

use forkcalc::farey::{self, Slope};
use forkcalc::freewords::parse_tuple;
use forkcalc::{forking, io, whitehead};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn render(r: Result<Value, String>) -> String {
    r.unwrap_or_else(|e| json!({ "error": e })).to_string()
}

/// Free-factor independence of `b` and `c` over `A`.
#[wasm_bindgen]
pub fn independent(rank: u32, a: &str, b: &str, c: &str, depth: u32) -> String {
    render((|| {
        let t = |s: &str| parse_tuple(rank, s).map_err(|e| e.to_string());
        let v = forking::independent_over_free_factor(rank, &t(a)?, &t(b)?, &t(c)?, depth).map_err(|e| e.to_string())?;
        Ok(io::verdict_to_json(&v))
    })())
}

/// Whitehead minimization and the part-of-basis test.
#[wasm_bindgen]
pub fn minimize(rank: u32, tuple: &str) -> String {
    render((|| {
        let t = parse_tuple(rank, tuple).map_err(|e| e.to_string())?;
        let (min, phi) = whitehead::minimize(rank, &t).map_err(|e| e.to_string())?;
        let basis = whitehead::is_part_of_basis(rank, &t).map_err(|e| e.to_string())?;
        Ok(json!({
            "minimized": io::tuple_to_json(&min),
            "min_length": min.iter().map(|w| w.len()).sum::<usize>(),
            "witness": io::automorphism_to_json(&phi),
            "part_of_basis": basis.is_some(),
        }))
    })())
}

/// Farey graph distance between two slopes written `p/q`.
#[wasm_bindgen]
pub fn farey_distance(s: &str, t: &str) -> String {
    render((|| {
        let s: Slope = s.parse().map_err(|e: farey::FareyError| e.to_string())?;
        let t: Slope = t.parse().map_err(|e: farey::FareyError| e.to_string())?;
        Ok(json!({ "distance": farey::distance(s, t) }))
    })())
}

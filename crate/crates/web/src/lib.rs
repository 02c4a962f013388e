//! WebAssembly bindings for the demo page in `www/`.
//!
//! Every export takes plain strings/numbers and returns a JSON document, so
//! the page needs no generated type glue. The logic lives in ordinary
//! functions that are tested natively; the `#[wasm_bindgen]` wrappers only
//! turn errors into JS exceptions.

use permpat::formulas::lookup;
use permpat::generators::{generate, FamilyId};
use permpat::perm::{count_occurrences, occurrences};
use permpat::{Oracle, Pattern, Permutation, RestrictionSpec};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Brute force in the browser runs on one thread; keep it interactive.
pub const MAX_N: usize = 9;
/// Occurrences listed for highlighting; the count itself is exact.
pub const MAX_LISTED: usize = 500;
pub const MAX_PERMUTATION_LEN: usize = 40;

fn to_json(value: &impl Serialize) -> String {
    serde_json::to_string(value).expect("demo payloads serialize")
}

#[derive(Serialize)]
struct CountReply {
    permutation: Vec<u32>,
    pattern: Vec<u32>,
    count: u64,
    /// 0-based positions of each listed occurrence.
    occurrences: Vec<Vec<usize>>,
    truncated: bool,
}

pub fn count_impl(permutation: &str, pattern: &str) -> Result<String, String> {
    let pi: Permutation = permutation.parse().map_err(|e: permpat::Error| e.to_string())?;
    let alpha: Pattern = pattern.parse().map_err(|e: permpat::Error| e.to_string())?;
    if pi.len() > MAX_PERMUTATION_LEN {
        return Err(format!("permutations up to length {MAX_PERMUTATION_LEN} only"));
    }
    let count = count_occurrences(&pi, &alpha, None).value;
    let listed = occurrences(&pi, &alpha, MAX_LISTED);
    Ok(to_json(&CountReply {
        permutation: pi.as_slice().to_vec(),
        pattern: alpha.as_slice().to_vec(),
        count,
        truncated: (listed.len() as u64) < count,
        occurrences: listed,
    }))
}

#[derive(Serialize)]
struct SequenceRow {
    n: usize,
    brute: u64,
    /// `None` where no closed form is known or stated.
    formula: Option<u64>,
}

#[derive(Serialize)]
struct SequenceReply {
    spec: String,
    class: Option<&'static str>,
    formula: Option<String>,
    validity: Option<String>,
    rows: Vec<SequenceRow>,
    /// First permutations of the largest `n`, for drawing.
    sample: Vec<Vec<u32>>,
}

pub fn sequence_impl(spec: &str, n_max: usize) -> Result<String, String> {
    let spec: RestrictionSpec = spec.parse().map_err(|e: permpat::Error| e.to_string())?;
    if !(1..=MAX_N).contains(&n_max) {
        return Err(format!("choose n between 1 and {MAX_N}"));
    }
    let oracle = Oracle::default();
    let entry = lookup(&spec);
    let mut rows = Vec::new();
    for n in 1..=n_max {
        let brute = oracle.count(n, &spec).map_err(|e| e.to_string())?;
        let formula = match entry {
            Some(e) => e.eval(n).map_err(|e| e.to_string())?,
            None => None,
        };
        rows.push(SequenceRow { n, brute, formula });
    }
    let sample = oracle
        .members(n_max, &spec)
        .map_err(|e| e.to_string())?
        .into_iter()
        .take(12)
        .map(Permutation::into_word)
        .collect();
    Ok(to_json(&SequenceReply {
        spec: spec.to_string(),
        class: entry.map(|e| e.class_id.label()),
        formula: entry.map(|e| e.closed_form.to_string()),
        validity: entry.map(|e| e.validity()),
        rows,
        sample,
    }))
}

#[derive(Serialize)]
struct GenerateReply {
    family: &'static str,
    spec: String,
    n: usize,
    expected: usize,
    members: Vec<Vec<u32>>,
}

pub fn generate_impl(family: &str, n: usize) -> Result<String, String> {
    let family: FamilyId = family.parse().map_err(|e: permpat::Error| e.to_string())?;
    if n > 12 {
        return Err("choose n up to 12".into());
    }
    let members = generate(family, n).map_err(|e| e.to_string())?;
    Ok(to_json(&GenerateReply {
        family: family.label(),
        spec: family.spec().to_string(),
        n,
        expected: family.expected_len(n),
        members: members.into_iter().map(Permutation::into_word).collect(),
    }))
}

/// Labels and restrictions of the generated families, for the page's menu.
pub fn families_impl() -> String {
    #[derive(Serialize)]
    struct Family {
        label: &'static str,
        spec: String,
        base: usize,
    }
    let list: Vec<Family> = FamilyId::ALL
        .into_iter()
        .map(|f| Family { label: f.label(), spec: f.spec().to_string(), base: f.base_size() })
        .collect();
    to_json(&list)
}

#[wasm_bindgen]
pub fn count(permutation: &str, pattern: &str) -> Result<String, JsError> {
    count_impl(permutation, pattern).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn sequence(spec: &str, n_max: usize) -> Result<String, JsError> {
    sequence_impl(spec, n_max).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = generateFamily)]
pub fn generate_family(family: &str, n: usize) -> Result<String, JsError> {
    generate_impl(family, n).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn families() -> String {
    families_impl()
}

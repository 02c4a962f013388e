//! Empirical almost-Wilf classification.
//!
//! Specs are grouped by exact equality of their brute-force count sequences
//! over a finite window of `n`. Agreement over a window is evidence, not
//! proof, so every report carries the window it was computed on.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::enumerate::Oracle;
use crate::error::{Error, Result};
use crate::formulas::{lookup, ClassId};
use crate::spec::RestrictionSpec;
use crate::symmetry::orbit;

pub const DEFAULT_WINDOW: (usize, usize) = (3, 9);

const METHOD_NOTE: &str = "empirical over window";

fn spec_texts<S: serde::Serializer>(specs: &[RestrictionSpec], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(specs.iter().map(ToString::to_string))
}

fn spec_text<S: serde::Serializer>(spec: &RestrictionSpec, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(spec)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EmpiricalClass {
    /// Lexicographically least member.
    #[serde(serialize_with = "spec_text")]
    pub representative: RestrictionSpec,
    #[serde(serialize_with = "spec_texts")]
    pub members: Vec<RestrictionSpec>,
    /// `s_n` for each `n` of the window.
    pub witness: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassReport {
    pub window: (usize, usize),
    pub classes: Vec<EmpiricalClass>,
    pub method: &'static str,
}

impl ClassReport {
    /// Class sizes in report order.
    pub fn sizes(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c.members.len()).collect()
    }

    pub fn class_of(&self, spec: &RestrictionSpec) -> Option<&EmpiricalClass> {
        self.classes.iter().find(|c| c.members.contains(spec))
    }
}

/// Classifies with the default brute-force oracle.
pub fn classify(specs: &[RestrictionSpec], n_min: usize, n_max: usize) -> Result<ClassReport> {
    let oracle = Oracle::default();
    classify_with(specs, n_min, n_max, |spec, n| oracle.count(n, spec))
}

/// Classifies using `count(spec, n)` as the source of `s_n(spec)`, e.g. a cache
/// in front of the oracle.
pub fn classify_with(
    specs: &[RestrictionSpec],
    n_min: usize,
    n_max: usize,
    mut count: impl FnMut(&RestrictionSpec, usize) -> Result<u64>,
) -> Result<ClassReport> {
    if specs.is_empty() {
        return Err(Error::InvalidInput("nothing to classify".into()));
    }
    if n_min > n_max {
        return Err(Error::InvalidInput(format!("empty window {n_min}..={n_max}")));
    }
    let unique: BTreeSet<&RestrictionSpec> = specs.iter().collect();
    let mut by_sequence: BTreeMap<Vec<u64>, Vec<RestrictionSpec>> = BTreeMap::new();
    for spec in unique {
        let seq = (n_min..=n_max)
            .map(|n| count(spec, n))
            .collect::<Result<Vec<_>>>()?;
        // Specs arrive in sorted order, so each member list stays sorted.
        by_sequence.entry(seq).or_default().push(spec.clone());
    }
    let mut classes: Vec<EmpiricalClass> = by_sequence
        .into_iter()
        .map(|(witness, members)| EmpiricalClass {
            representative: members[0].clone(),
            members,
            witness,
        })
        .collect();
    classes.sort_by(|a, b| a.representative.cmp(&b.representative));
    Ok(ClassReport { window: (n_min, n_max), classes, method: METHOD_NOTE })
}

/// How one empirical class lines up with the formula ledger.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassReconciliation {
    pub representative: RestrictionSpec,
    /// Ledger classes of the members, deduplicated.
    pub table_classes: Vec<ClassId>,
    /// Members with no ledger entry.
    pub unlisted: Vec<RestrictionSpec>,
    /// Number of distinct symmetry orbits among the members.
    pub orbit_count: usize,
}

impl ClassReconciliation {
    /// The class joins specs that no symmetry relates.
    pub fn fused_beyond_symmetry(&self) -> bool {
        self.orbit_count > 1
    }

    /// Several ledger classes share one sequence over the window.
    pub fn indistinguishable_over_window(&self) -> bool {
        self.table_classes.len() > 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reconciliation {
    pub window: (usize, usize),
    pub classes: Vec<ClassReconciliation>,
    /// Ledger classes whose input members ended up in more than one empirical class.
    pub split: Vec<ClassId>,
}

impl Reconciliation {
    /// One empirical class per ledger class, nothing split or merged or missing.
    pub fn matches_table(&self) -> bool {
        self.split.is_empty()
            && self
                .classes
                .iter()
                .all(|c| c.table_classes.len() == 1 && c.unlisted.is_empty())
    }

    pub fn discrepancies(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .split
            .iter()
            .map(|c| format!("class {c} is split across several sequences"))
            .collect();
        for c in &self.classes {
            if c.indistinguishable_over_window() {
                let ids: Vec<&str> = c.table_classes.iter().map(|c| c.label()).collect();
                out.push(format!(
                    "classes {} coincide over n = {}..={}",
                    ids.join(", "),
                    self.window.0,
                    self.window.1
                ));
            }
            for s in &c.unlisted {
                out.push(format!("{s} has no closed form in the ledger"));
            }
        }
        out
    }
}

pub fn reconcile(report: &ClassReport) -> Reconciliation {
    let mut seen_in: BTreeMap<ClassId, BTreeSet<usize>> = BTreeMap::new();
    let classes = report
        .classes
        .iter()
        .enumerate()
        .map(|(idx, class)| {
            let mut table = BTreeSet::new();
            let mut unlisted = Vec::new();
            let mut orbits: BTreeSet<RestrictionSpec> = BTreeSet::new();
            for spec in &class.members {
                match lookup(spec) {
                    Some(entry) => {
                        table.insert(entry.class_id);
                        seen_in.entry(entry.class_id).or_default().insert(idx);
                    }
                    None => unlisted.push(spec.clone()),
                }
                // Orbits are named by their least element.
                orbits.insert(orbit(spec).into_iter().next().expect("orbits contain their spec"));
            }
            ClassReconciliation {
                representative: class.representative.clone(),
                table_classes: table.into_iter().collect(),
                unlisted,
                orbit_count: orbits.len(),
            }
        })
        .collect();
    let split = seen_in
        .into_iter()
        .filter(|(_, idx)| idx.len() > 1)
        .map(|(c, _)| c)
        .collect();
    Reconciliation { window: report.window, classes, split }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(s: &str) -> RestrictionSpec {
        s.parse().unwrap()
    }

    #[test]
    fn single_spec_is_one_class() {
        let r = classify(&[spec("(123;132)")], 3, 6).unwrap();
        assert_eq!(r.classes.len(), 1);
        assert_eq!(r.classes[0].witness, [1, 4, 12, 32]);
        assert_eq!(r.method, "empirical over window");
    }

    #[test]
    fn empty_input_and_window_rejected() {
        assert!(classify(&[], 3, 6).is_err());
        assert!(classify(&[spec("(123;132)")], 6, 3).is_err());
    }

    #[test]
    fn duplicates_are_collapsed() {
        let s = spec("(123;132)");
        let r = classify(&[s.clone(), s.clone()], 3, 5).unwrap();
        assert_eq!(r.classes[0].members, [s]);
    }

    #[test]
    fn zero_classes_merge_on_a_late_window() {
        let r = classify(&[spec("(123;321)"), spec("(∅;{123,321})")], 6, 8).unwrap();
        assert_eq!(r.classes.len(), 1);
        assert_eq!(r.classes[0].witness, [0, 0, 0]);
        let rec = reconcile(&r);
        assert!(rec.classes[0].indistinguishable_over_window());
        assert_eq!(rec.classes[0].table_classes, [ClassId::A, ClassId::F]);
        assert!(!rec.matches_table());

        let r = classify(&[spec("(123;321)"), spec("(∅;{123,321})")], 3, 8).unwrap();
        assert_eq!(r.classes.len(), 2);
        assert!(reconcile(&r).matches_table());
    }

    #[test]
    fn unlisted_specs_are_reported() {
        let r = classify(&[spec("(∅;132^2)")], 3, 6).unwrap();
        let rec = reconcile(&r);
        assert_eq!(rec.classes[0].unlisted, [spec("(∅;132^2)")]);
        assert_eq!(rec.discrepancies().len(), 1);
    }

    #[test]
    fn json_layout() {
        let r = classify(&[spec("(123;231)"), spec("(132;321)")], 3, 5).unwrap();
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["window"], serde_json::json!([3, 5]));
        assert_eq!(json["classes"][0]["members"], serde_json::json!(["(123;231)", "(132;321)"]));
        assert_eq!(json["classes"][0]["witness"], serde_json::json!([1, 3, 5]));
    }
}

mod common;

use std::collections::BTreeSet;

use permpat::classify::{classify, classify_with, reconcile};
use permpat::formulas::{entry, known_table, lookup, ClassId};
use permpat::generators::{generate, phi, phi_cap, FamilyId};
use permpat::enumerate::satisfies;
use permpat::{Oracle, RestrictionSpec};

use common::published;

#[test]
fn class_members_match_published_lists() {
    for c in ClassId::ORDERED.into_iter().chain(ClassId::MULTISET) {
        assert_eq!(entry(c).members, published(c), "class {c}");
    }
}

#[test]
fn ordered_and_multiset_specs_are_partitioned() {
    for (all, ids) in [
        (RestrictionSpec::ordered_pairs_len3(), ClassId::ORDERED),
        (RestrictionSpec::multiset_pairs_len3(), ClassId::MULTISET),
    ] {
        let mut seen = BTreeSet::new();
        for c in ids {
            for m in &entry(c).members {
                assert!(seen.insert(m.clone()), "{m} listed twice");
            }
        }
        let all: BTreeSet<_> = all.into_iter().collect();
        assert_eq!(seen, all);
    }
}

#[test]
fn every_entry_agrees_with_the_oracle() {
    let oracle = Oracle::default();
    for e in known_table() {
        for spec in &e.members {
            for n in 1..=9 {
                if let Some(v) = e.eval(n).unwrap() {
                    assert_eq!(oracle.count(n, spec).unwrap(), v, "{} {spec} n = {n}", e.class_id);
                }
            }
        }
    }
}

#[test]
fn single_containment_follows_symmetry() {
    let oracle = Oracle::default();
    for (spec, class) in [
        ("(∅;321)", ClassId::SingleContain123),
        ("(∅;231)", ClassId::SingleContain132),
        ("(∅;312)", ClassId::SingleContain132),
        ("(∅;213)", ClassId::SingleContain132),
    ] {
        let spec: RestrictionSpec = spec.parse().unwrap();
        assert_eq!(lookup(&spec).unwrap().class_id, class);
        for n in 3..=9 {
            assert_eq!(oracle.count(n, &spec).unwrap(), entry(class).eval(n).unwrap().unwrap());
        }
    }
}

#[test]
fn mixed_restrictions_coincide() {
    for n in 5..=20 {
        assert_eq!(entry(ClassId::C).eval(n).unwrap(), entry(ClassId::G).eval(n).unwrap());
    }
    for n in 4..=20 {
        assert_eq!(entry(ClassId::E).eval(n).unwrap(), entry(ClassId::J).eval(n).unwrap());
    }
}

#[test]
fn generated_families_are_the_restricted_sets() {
    let oracle = Oracle::default();
    for f in FamilyId::ALL {
        for n in f.base_size()..=9 {
            let got = generate(f, n).unwrap();
            assert_eq!(got.len(), f.expected_len(n), "{f} n = {n}");
            assert!(got.iter().all(|p| satisfies(p, &f.spec())));
            assert_eq!(got, oracle.members(n, &f.spec()).unwrap(), "{f} n = {n}");
        }
    }
}

#[test]
fn generated_members_are_distinct_and_closed_under_phi() {
    for f in FamilyId::ALL {
        for n in f.base_size()..=10 {
            let members = generate(f, n).unwrap();
            assert!(members.windows(2).all(|w| w[0] < w[1]), "{f} has duplicates at n = {n}");
            for p in &members {
                assert!(satisfies(&phi(p), &f.spec()), "phi({p}) leaves {f}");
            }
            if matches!(f, FamilyId::Avoid132Contain312 | FamilyId::Contain132And312) {
                for p in &members {
                    assert!(satisfies(&phi_cap(p), &f.spec()), "append-max({p}) leaves {f}");
                }
            }
        }
    }
}

fn ordered() -> Vec<RestrictionSpec> {
    RestrictionSpec::ordered_pairs_len3()
}

#[test]
fn wider_windows_refine_classes() {
    let narrow = classify(&ordered(), 4, 7).unwrap();
    let wide = classify(&ordered(), 3, 8).unwrap();
    for class in &wide.classes {
        let home = narrow.class_of(&class.members[0]).unwrap();
        assert!(class.members.iter().all(|m| home.members.contains(m)));
    }
}

#[test]
fn classification_ignores_input_order() {
    let mut specs = RestrictionSpec::multiset_pairs_len3();
    let forward = classify(&specs, 4, 8).unwrap();
    specs.reverse();
    assert_eq!(classify(&specs, 4, 8).unwrap(), forward);
}

#[test]
fn classification_is_symmetry_closed() {
    let report = classify(&ordered(), 3, 8).unwrap();
    for class in &report.classes {
        for m in &class.members {
            for image in permpat::symmetry::orbit(m) {
                assert!(class.members.contains(&image));
            }
        }
    }
}

#[test]
fn classify_with_ledger_values_matches_brute() {
    let brute = classify(&RestrictionSpec::multiset_pairs_len3(), 4, 9).unwrap();
    // Values the ledger leaves unknown (class F at n = 4, 5) come from the oracle.
    let oracle = Oracle::default();
    let from_table = classify_with(&RestrictionSpec::multiset_pairs_len3(), 4, 9, |spec, n| {
        match lookup(spec).unwrap().eval(n)? {
            Some(v) => Ok(v),
            None => oracle.count(n, spec),
        }
    })
    .unwrap();
    assert_eq!(brute, from_table);
    assert!(reconcile(&brute).matches_table());
}

#[test]
fn widening_the_window_changes_no_class() {
    let mut all = RestrictionSpec::ordered_pairs_len3();
    all.extend(RestrictionSpec::multiset_pairs_len3());
    let partition = |lo, hi| -> BTreeSet<Vec<RestrictionSpec>> {
        classify(&all, lo, hi).unwrap().classes.into_iter().map(|c| c.members).collect()
    };
    assert_eq!(partition(3, 7), partition(3, 9));
}

#[test]
fn joint_late_window_fuses_mixed_restrictions() {
    let mut all = RestrictionSpec::ordered_pairs_len3();
    all.extend(RestrictionSpec::multiset_pairs_len3());
    let report = classify(&all, 5, 9).unwrap();
    let c = report.class_of(&"(123;231)".parse().unwrap()).unwrap();
    assert!(c.members.contains(&"(∅;{123,231})".parse().unwrap()));
    let e = report.class_of(&"(132;231)".parse().unwrap()).unwrap();
    assert!(e.members.contains(&"(∅;{132,231})".parse().unwrap()));
    let rec = reconcile(&report);
    assert!(rec.classes.iter().any(|c| c.table_classes == [ClassId::C, ClassId::G]));
}

#![allow(dead_code)]

use std::collections::BTreeSet;

use permpat::formulas::ClassId;
use permpat::RestrictionSpec;

pub fn specs(list: &[&str]) -> BTreeSet<RestrictionSpec> {
    list.iter().map(|s| s.parse().unwrap()).collect()
}

/// The published class lists, transcribed verbatim.
pub fn published(class: ClassId) -> BTreeSet<RestrictionSpec> {
    match class {
        ClassId::A => specs(&["(123;321)", "(321;123)"]),
        ClassId::B => specs(&[
            "(123;132)", "(123;213)", "(132;123)", "(213;123)",
            "(231;321)", "(312;321)", "(321;231)", "(321;312)",
        ]),
        ClassId::C => specs(&[
            "(123;231)", "(123;312)", "(132;321)", "(213;321)",
            "(231;123)", "(312;123)", "(321;132)", "(321;213)",
        ]),
        ClassId::D => specs(&["(132;213)", "(213;132)", "(231;312)", "(312;231)"]),
        ClassId::E => specs(&[
            "(132;231)", "(132;312)", "(213;231)", "(213;312)",
            "(231;132)", "(231;213)", "(312;132)", "(312;213)",
        ]),
        // Listed twice in the source as the same multiset.
        ClassId::F => specs(&["(∅;{123,321})", "(∅;{321,123})"]),
        ClassId::G => specs(&["(∅;{123,231})", "(∅;{123,312})", "(∅;{132,321})", "(∅;{213,321})"]),
        ClassId::H => specs(&["(∅;{123,132})", "(∅;{123,213})", "(∅;{231,321})", "(∅;{312,321})"]),
        ClassId::I => specs(&["(∅;{132,213})", "(∅;{231,312})"]),
        ClassId::J => specs(&["(∅;{132,231})", "(∅;{132,312})", "(∅;{213,231})", "(∅;{213,312})"]),
        other => panic!("no published list for {other}"),
    }
}

//! Reversal, complement and inverse, and the order-8 group they generate.
//!
//! Each group element is stored in the normal form `r^a ∘ c^b ∘ i^d`, applied
//! right to left (inverse first). Occurrence counts are equivariant: if `pi`
//! has `s` occurrences of `alpha` then `g(pi)` has `s` occurrences of
//! `g(alpha)`, so every element maps `S_n(R;T)` bijectively onto
//! `S_n(g(R);g(T))`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::perm::{Pattern, Permutation};
use crate::spec::RestrictionSpec;

pub fn reverse(pi: &Permutation) -> Permutation {
    let mut w = pi.as_slice().to_vec();
    w.reverse();
    Permutation::from_word_unchecked(w)
}

pub fn complement(pi: &Permutation) -> Permutation {
    let top = pi.len() as u32 + 1;
    Permutation::from_word_unchecked(pi.as_slice().iter().map(|&v| top - v).collect())
}

pub fn inverse(pi: &Permutation) -> Permutation {
    let mut w = vec![0u32; pi.len()];
    for (j, &v) in pi.as_slice().iter().enumerate() {
        w[v as usize - 1] = j as u32 + 1;
    }
    Permutation::from_word_unchecked(w)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SymmetryOp {
    reverse: bool,
    complement: bool,
    inverse: bool,
}

impl SymmetryOp {
    pub const IDENTITY: Self = Self::new(false, false, false);
    pub const R: Self = Self::new(true, false, false);
    pub const C: Self = Self::new(false, true, false);
    pub const RC: Self = Self::new(true, true, false);
    pub const I: Self = Self::new(false, false, true);
    pub const RI: Self = Self::new(true, false, true);
    pub const CI: Self = Self::new(false, true, true);
    pub const RCI: Self = Self::new(true, true, true);

    /// The eight group elements in their fixed enumeration order.
    pub const ALL: [Self; 8] = [
        Self::IDENTITY,
        Self::R,
        Self::C,
        Self::RC,
        Self::I,
        Self::RI,
        Self::CI,
        Self::RCI,
    ];

    const fn new(reverse: bool, complement: bool, inverse: bool) -> Self {
        Self { reverse, complement, inverse }
    }

    /// `self ∘ other`: apply `other` first.
    ///
    /// Uses `i ∘ r = c ∘ i` and `i ∘ c = r ∘ i` to move the inverse to the right.
    pub fn compose(self, other: Self) -> Self {
        let (r2, c2) = if self.inverse {
            (other.complement, other.reverse)
        } else {
            (other.reverse, other.complement)
        };
        Self::new(self.reverse ^ r2, self.complement ^ c2, self.inverse ^ other.inverse)
    }

    pub fn inverse(self) -> Self {
        Self::ALL
            .into_iter()
            .find(|&g| self.compose(g) == Self::IDENTITY)
            .expect("every group element has an inverse")
    }

    pub fn apply(self, pi: &Permutation) -> Permutation {
        let mut out = if self.inverse { inverse(pi) } else { pi.clone() };
        if self.complement {
            out = complement(&out);
        }
        if self.reverse {
            out = reverse(&out);
        }
        out
    }

    pub fn apply_to_pattern(self, alpha: &Pattern) -> Pattern {
        Pattern::try_from(self.apply(alpha.as_permutation())).expect("patterns are non-empty")
    }

    /// Maps every avoided and contained pattern, keeping multiplicities.
    pub fn apply_to_spec(self, spec: &RestrictionSpec) -> RestrictionSpec {
        RestrictionSpec::new(
            spec.avoid().iter().map(|p| self.apply_to_pattern(p)),
            spec.contain().iter().map(|(p, &m)| (self.apply_to_pattern(p), m)),
        )
        .expect("a bijection on patterns keeps avoid and contain disjoint")
    }

    pub fn name(self) -> &'static str {
        match (self.reverse, self.complement, self.inverse) {
            (false, false, false) => "id",
            (true, false, false) => "r",
            (false, true, false) => "c",
            (true, true, false) => "rc",
            (false, false, true) => "i",
            (true, false, true) => "ri",
            (false, true, true) => "ci",
            (true, true, true) => "rci",
        }
    }
}

impl fmt::Display for SymmetryOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SymmetryOp {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|g| g.name() == s.trim())
            .ok_or_else(|| {
                Error::Parse(format!(
                    "unknown symmetry {s:?}; expected one of id, r, c, i, rc, ri, ci, rci"
                ))
            })
    }
}

/// All images of `spec` under the group, deduplicated and sorted.
pub fn orbit(spec: &RestrictionSpec) -> BTreeSet<RestrictionSpec> {
    SymmetryOp::ALL.iter().map(|g| g.apply_to_spec(spec)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::LexPermutations;

    fn perm(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn spec(s: &str) -> RestrictionSpec {
        s.parse().unwrap()
    }

    #[test]
    fn single_maps() {
        assert_eq!(reverse(&perm("1234")), perm("4321"));
        assert_eq!(reverse(&perm("3142")), perm("2413"));
        assert_eq!(complement(&perm("132")), perm("312"));
        assert_eq!(complement(&perm("1234")), perm("4321"));
        assert_eq!(inverse(&perm("231")), perm("312"));
        assert_eq!(inverse(&Permutation::identity(5)), Permutation::identity(5));
    }

    #[test]
    fn involutions_on_s5() {
        for pi in LexPermutations::new(5) {
            assert_eq!(reverse(&reverse(&pi)), pi);
            assert_eq!(complement(&complement(&pi)), pi);
            assert_eq!(inverse(&inverse(&pi)), pi);
            assert_eq!(reverse(&complement(&pi)), complement(&reverse(&pi)));
        }
    }

    #[test]
    fn apply_matches_step_by_step() {
        assert_eq!(SymmetryOp::RC.apply(&perm("123")), perm("123"));
        assert_eq!(SymmetryOp::RC.apply(&perm("132")), perm("213"));
        for pi in LexPermutations::new(4) {
            assert_eq!(SymmetryOp::IDENTITY.apply(&pi), pi);
            assert_eq!(SymmetryOp::RCI.apply(&pi), reverse(&complement(&inverse(&pi))));
        }
    }

    #[test]
    fn composition_table_matches_action() {
        // The probe must have eight distinct images for the check to be faithful.
        let probe = perm("13542");
        let images: BTreeSet<_> = SymmetryOp::ALL.iter().map(|g| g.apply(&probe)).collect();
        assert_eq!(images.len(), 8);
        for g in SymmetryOp::ALL {
            for h in SymmetryOp::ALL {
                assert_eq!(g.compose(h).apply(&probe), g.apply(&h.apply(&probe)), "{g} ∘ {h}");
            }
        }
    }

    #[test]
    fn group_axioms() {
        let all = SymmetryOp::ALL;
        for g in all {
            assert_eq!(g.compose(SymmetryOp::IDENTITY), g);
            assert_eq!(SymmetryOp::IDENTITY.compose(g), g);
            assert_eq!(g.compose(g.inverse()), SymmetryOp::IDENTITY);
            for h in all {
                assert!(all.contains(&g.compose(h)));
                for k in all {
                    assert_eq!(g.compose(h).compose(k), g.compose(h.compose(k)));
                }
            }
        }
        for gen in [SymmetryOp::R, SymmetryOp::C, SymmetryOp::I] {
            assert_eq!(gen.compose(gen), SymmetryOp::IDENTITY);
        }
        assert_eq!(SymmetryOp::R.compose(SymmetryOp::C), SymmetryOp::C.compose(SymmetryOp::R));
        // r and i do not commute: the group is dihedral, not abelian.
        assert_ne!(SymmetryOp::R.compose(SymmetryOp::I), SymmetryOp::I.compose(SymmetryOp::R));
    }

    #[test]
    fn names_round_trip() {
        for g in SymmetryOp::ALL {
            assert_eq!(g.name().parse::<SymmetryOp>().unwrap(), g);
        }
        assert!("cr".parse::<SymmetryOp>().is_err());
    }

    #[test]
    fn spec_images() {
        // rc fixes 123, so the avoided pattern survives unchanged.
        assert_eq!(SymmetryOp::RC.apply_to_spec(&spec("(123;132)")), spec("(123;213)"));
        assert_eq!(SymmetryOp::R.apply_to_spec(&spec("(123;132)")), spec("(321;231)"));
        assert_eq!(SymmetryOp::IDENTITY.apply_to_spec(&spec("(123;132)")), spec("(123;132)"));
        assert_eq!(
            SymmetryOp::C.apply_to_spec(&spec("(∅;{123,231})")),
            spec("(∅;{321,213})")
        );
        assert_eq!(SymmetryOp::R.apply_to_spec(&spec("(∅;132^2)")), spec("(∅;231^2)"));
    }

    #[test]
    fn orbit_sizes() {
        // (123;231) only reaches the four specs avoiding 123 or 321; the other
        // half of its almost-Wilf class is a separate orbit.
        let c1 = orbit(&spec("(123;231)"));
        let expected: BTreeSet<_> = ["(123;231)", "(123;312)", "(321;132)", "(321;213)"]
            .into_iter()
            .map(spec)
            .collect();
        assert_eq!(c1, expected);
        assert_eq!(orbit(&spec("(132;213)")).len(), 4);
        assert_eq!(orbit(&spec("(∅;{132,213})")).len(), 2);
        assert_eq!(orbit(&spec("(∅;{123,321})")).len(), 1);
        for s in RestrictionSpec::ordered_pairs_len3() {
            assert_eq!(8 % orbit(&s).len(), 0);
        }
    }
}

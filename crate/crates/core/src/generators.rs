//! Recursive constructions of five restricted families.
//!
//! Each family is grown one length at a time from a small base set. Three
//! families use `phi` plus two extra permutations per step (giving `2n-5`
//! members); the other two map every member through both `phi` and
//! `phi_cap` (giving `2^(n-3)` members).

use std::fmt;
use std::str::FromStr;

use crate::enumerate::Oracle;
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::spec::RestrictionSpec;

/// `pi_1 … pi_{m-1}  ↦  (pi_1+1) … (pi_{m-1}+1) 1`
pub fn phi(pi: &Permutation) -> Permutation {
    let mut w: Vec<u32> = pi.as_slice().iter().map(|v| v + 1).collect();
    w.push(1);
    Permutation::from_word_unchecked(w)
}

/// `pi_1 … pi_{m-1}  ↦  pi_1 … pi_{m-1} m`
pub fn phi_cap(pi: &Permutation) -> Permutation {
    let mut w = pi.as_slice().to_vec();
    w.push(pi.len() as u32 + 1);
    Permutation::from_word_unchecked(w)
}

/// `hi, hi-1, …, lo`, empty when `hi < lo`.
fn down(hi: u32, lo: u32) -> impl Iterator<Item = u32> {
    (lo..=hi).rev()
}

fn word(parts: impl IntoIterator<Item = u32>) -> Permutation {
    Permutation::from_word_unchecked(parts.into_iter().collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FamilyId {
    /// `(123;312)`
    Avoid123Contain312,
    /// `(312;123)`
    Avoid312Contain123,
    /// `(∅;{123,312})`
    Contain123And312,
    /// `(132;312)`
    Avoid132Contain312,
    /// `(∅;{132,312})`
    Contain132And312,
}

impl FamilyId {
    pub const ALL: [FamilyId; 5] = [
        FamilyId::Avoid123Contain312,
        FamilyId::Avoid312Contain123,
        FamilyId::Contain123And312,
        FamilyId::Avoid132Contain312,
        FamilyId::Contain132And312,
    ];

    pub fn spec(self) -> RestrictionSpec {
        let text = match self {
            FamilyId::Avoid123Contain312 => "(123;312)",
            FamilyId::Avoid312Contain123 => "(312;123)",
            FamilyId::Contain123And312 => "(∅;{123,312})",
            FamilyId::Avoid132Contain312 => "(132;312)",
            FamilyId::Contain132And312 => "(∅;{132,312})",
        };
        text.parse().expect("family specs are well formed")
    }

    pub fn label(self) -> &'static str {
        match self {
            FamilyId::Avoid123Contain312 => "F_123_312",
            FamilyId::Avoid312Contain123 => "F_312_123",
            FamilyId::Contain123And312 => "F_E123_312",
            FamilyId::Avoid132Contain312 => "F_132_312",
            FamilyId::Contain132And312 => "F_E132_312",
        }
    }

    /// Smallest `n` the construction starts from.
    pub fn base_size(self) -> usize {
        match self {
            FamilyId::Avoid123Contain312 | FamilyId::Avoid312Contain123 => 3,
            FamilyId::Contain123And312 => 5,
            FamilyId::Avoid132Contain312 | FamilyId::Contain132And312 => 4,
        }
    }

    /// Expected family size at `n >= base_size()`.
    pub fn expected_len(self, n: usize) -> usize {
        match self {
            FamilyId::Avoid132Contain312 | FamilyId::Contain132And312 => 1 << (n - 3),
            _ => 2 * n - 5,
        }
    }

    fn base(self) -> Result<Vec<Permutation>> {
        let parse = |list: &[&str]| -> Vec<Permutation> {
            list.iter().map(|s| s.parse().expect("base permutations are well formed")).collect()
        };
        Ok(match self {
            FamilyId::Avoid123Contain312 => parse(&["312"]),
            FamilyId::Avoid312Contain123 => parse(&["123"]),
            // No closed-form base is known for this family; take it from the oracle.
            FamilyId::Contain123And312 => Oracle::default().members(5, &self.spec())?,
            FamilyId::Avoid132Contain312 => parse(&["3124", "4231"]),
            FamilyId::Contain132And312 => parse(&["2413", "3142"]),
        })
    }

    /// The two members of length `m` that are not `phi`-images, for the
    /// `2n-5` families.
    fn extras(self, m: u32) -> Option<[Permutation; 2]> {
        Some(match self {
            // 3 1 m (m-1) … 4 2  and  (m-2) … 2 m 1 (m-1)
            FamilyId::Avoid123Contain312 => [
                word([3, 1].into_iter().chain(down(m, 4)).chain([2])),
                word(down(m - 2, 2).chain([m, 1, m - 1])),
            ],
            // 1 (m-1) m (m-2) … 2  and  (m-2) (m-1) (m-3) … 1 m
            FamilyId::Avoid312Contain123 => [
                word([1, m - 1, m].into_iter().chain(down(m - 2, 2))),
                word([m - 2, m - 1].into_iter().chain(down(m - 3, 1)).chain([m])),
            ],
            // 1 m (m-2) (m-1) (m-3) … 2  and  (m-1) (m-3) (m-2) (m-4) … 1 m
            FamilyId::Contain123And312 => [
                word([1, m, m - 2, m - 1].into_iter().chain(down(m - 3, 2))),
                word([m - 1, m - 3, m - 2].into_iter().chain(down(m - 4, 1)).chain([m])),
            ],
            FamilyId::Avoid132Contain312 | FamilyId::Contain132And312 => return None,
        })
    }

    /// Builds the members of length `m` from those of length `m - 1`.
    pub fn step(self, prev: &[Permutation], m: usize) -> Vec<Permutation> {
        let mut next: Vec<Permutation> = match self.extras(m as u32) {
            Some(extras) => prev.iter().map(phi).chain(extras).collect(),
            None => prev.iter().flat_map(|p| [phi(p), phi_cap(p)]).collect(),
        };
        next.sort();
        next
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Accepts a label (`F_132_312`) or the family's spec (`132;312`, `(∅;{132,312})`).
impl FromStr for FamilyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(f) = FamilyId::ALL.into_iter().find(|f| f.label().eq_ignore_ascii_case(s)) {
            return Ok(f);
        }
        let spec: RestrictionSpec = s
            .parse()
            .map_err(|_| Error::Parse(format!("unknown family {s:?}")))?;
        FamilyId::ALL
            .into_iter()
            .find(|f| f.spec() == spec)
            .ok_or_else(|| Error::Parse(format!("no generating rule for {spec}")))
    }
}

/// All members of the family of length `n`, sorted.
pub fn generate(family: FamilyId, n: usize) -> Result<Vec<Permutation>> {
    let base = family.base_size();
    if n < base {
        return Err(Error::InvalidInput(format!(
            "{family} is generated from n = {base}; got n = {n}"
        )));
    }
    let mut current = family.base()?;
    current.sort();
    for m in base + 1..=n {
        current = family.step(&current, m);
    }
    Ok(current)
}

//! Brute-force oracle over `S_n`.
//!
//! Everything here walks the full symmetric group in lexicographic order, so
//! it is only usable at desk scale (the default limit is `n = 10`). The
//! search space splits into `n` blocks by first letter; blocks are evaluated
//! independently (in parallel with the `parallel` feature) and merged in
//! order, so results are identical to a serial walk.

use std::time::{SystemTime, UNIX_EPOCH};

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::perm::{CompiledPattern, Permutation};
use crate::spec::RestrictionSpec;

pub const DEFAULT_LIMIT: usize = 10;

/// Advances `word` to its lexicographic successor; false when it was the last.
pub fn next_permutation(word: &mut [u32]) -> bool {
    let Some(pivot) = word.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let succ = word
        .iter()
        .rposition(|&v| v > word[pivot])
        .expect("the pivot has a larger element to its right");
    word.swap(pivot, succ);
    word[pivot + 1..].reverse();
    true
}

/// All permutations of `1..=n` in lexicographic order. `n = 0` yields the empty word once.
#[derive(Debug, Clone)]
pub struct LexPermutations {
    word: Vec<u32>,
    done: bool,
}

impl LexPermutations {
    pub fn new(n: usize) -> Self {
        Self { word: (1..=n as u32).collect(), done: false }
    }
}

impl Iterator for LexPermutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        if self.done {
            return None;
        }
        let current = Permutation::from_word_unchecked(self.word.clone());
        self.done = !next_permutation(&mut self.word);
        Some(current)
    }
}

/// A spec prepared for repeated membership tests.
///
/// Avoidance checks run first (one occurrence is enough to reject), then
/// containment checks, each looking at no more than `m + 1` occurrences.
/// Within each group shorter patterns go first.
#[derive(Debug, Clone)]
pub struct CompiledSpec {
    avoid: Vec<CompiledPattern>,
    contain: Vec<(CompiledPattern, u64)>,
}

impl CompiledSpec {
    pub fn new(spec: &RestrictionSpec) -> Self {
        let mut avoid: Vec<_> = spec.avoid().iter().collect();
        avoid.sort_by_key(|p| p.len());
        let mut contain: Vec<_> = spec.contain().iter().collect();
        contain.sort_by_key(|(p, _)| p.len());
        Self {
            avoid: avoid.into_iter().map(|p| CompiledPattern::new(p.as_slice())).collect(),
            contain: contain
                .into_iter()
                .map(|(p, &m)| (CompiledPattern::new(p.as_slice()), u64::from(m)))
                .collect(),
        }
    }

    pub fn matches(&self, word: &[u32]) -> bool {
        self.avoid.iter().all(|p| p.count_upto(word, 1) == 0)
            && self.contain.iter().all(|(p, m)| p.count_upto(word, m + 1) == *m)
    }
}

/// True iff `pi` avoids every pattern of `spec.avoid()` and has exactly the
/// required number of occurrences of every pattern of `spec.contain()`.
pub fn satisfies(pi: &Permutation, spec: &RestrictionSpec) -> bool {
    CompiledSpec::new(spec).matches(pi.as_slice())
}

/// How a sequence of counts was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Brute,
    Formula,
    Generator,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Brute => "brute",
            Method::Formula => "formula",
            Method::Generator => "generator",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "brute" => Ok(Method::Brute),
            "formula" => Ok(Method::Formula),
            "generator" => Ok(Method::Generator),
            other => Err(Error::Parse(format!("unknown method {other:?}"))),
        }
    }
}

/// Counts `s_n(R;T)` for consecutive `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceRecord {
    pub spec: RestrictionSpec,
    pub n_min: usize,
    pub n_max: usize,
    pub values: Vec<u64>,
    pub method: Method,
    /// Seconds since the Unix epoch.
    pub produced_at: u64,
}

impl SequenceRecord {
    pub fn new(spec: RestrictionSpec, n_min: usize, values: Vec<u64>, method: Method) -> Self {
        let n_max = n_min + values.len().saturating_sub(1);
        let produced_at = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Self { spec, n_min, n_max, values, method, produced_at }
    }

    /// `(n, count)` pairs.
    pub fn iter(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        (self.n_min..).zip(self.values.iter().copied())
    }
}

/// `{"spec":…,"range":[a,b],"values":[…],"method":"brute","produced_at":…}`
impl Serialize for SequenceRecord {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(5))?;
        map.serialize_entry("spec", &self.spec)?;
        map.serialize_entry("range", &[self.n_min, self.n_max])?;
        map.serialize_entry("values", &self.values)?;
        map.serialize_entry("method", &self.method)?;
        map.serialize_entry("produced_at", &self.produced_at)?;
        map.end()
    }
}

/// The brute-force oracle, bounded by a hard limit on `n`.
#[derive(Debug, Clone, Copy)]
pub struct Oracle {
    limit: usize,
    #[cfg_attr(not(feature = "parallel"), allow(dead_code))]
    parallel: bool,
}

impl Default for Oracle {
    fn default() -> Self {
        Self { limit: DEFAULT_LIMIT, parallel: cfg!(feature = "parallel") }
    }
}

impl Oracle {
    pub fn with_limit(limit: usize) -> Self {
        Self { limit, ..Self::default() }
    }

    pub fn serial(self) -> Self {
        Self { parallel: false, ..self }
    }

    pub fn limit(&self) -> usize {
        self.limit
    }

    fn check(&self, n: usize) -> Result<()> {
        if n > self.limit {
            Err(Error::ResourceLimit { n, limit: self.limit })
        } else {
            Ok(())
        }
    }

    pub fn iter_sn(&self, n: usize) -> Result<LexPermutations> {
        self.check(n)?;
        Ok(LexPermutations::new(n))
    }

    pub fn members(&self, n: usize, spec: &RestrictionSpec) -> Result<Vec<Permutation>> {
        self.check(n)?;
        let compiled = CompiledSpec::new(spec);
        let blocks = self.map_blocks(n, |first| {
            let mut out = Vec::new();
            walk_block(n, first, |w| {
                if compiled.matches(w) {
                    out.push(Permutation::from_word_unchecked(w.to_vec()));
                }
            });
            out
        });
        Ok(blocks.into_iter().flatten().collect())
    }

    pub fn count(&self, n: usize, spec: &RestrictionSpec) -> Result<u64> {
        self.check(n)?;
        let compiled = CompiledSpec::new(spec);
        let tallies = self.map_blocks(n, |first| {
            let mut tally = 0u64;
            walk_block(n, first, |w| tally += u64::from(compiled.matches(w)));
            tally
        });
        tallies
            .into_iter()
            .try_fold(0u64, |acc, t| acc.checked_add(t))
            .ok_or(Error::Overflow("summing block tallies"))
    }

    pub fn sequence(&self, spec: &RestrictionSpec, n_min: usize, n_max: usize) -> Result<SequenceRecord> {
        if n_min > n_max {
            return Err(Error::InvalidInput(format!("empty range {n_min}..={n_max}")));
        }
        self.check(n_max)?;
        let values = (n_min..=n_max)
            .map(|n| self.count(n, spec))
            .collect::<Result<Vec<_>>>()?;
        Ok(SequenceRecord::new(spec.clone(), n_min, values, Method::Brute))
    }

    /// Evaluates `f` once per first-letter block (a single block for `n = 0`),
    /// returning the results in block order.
    fn map_blocks<T: Send>(&self, n: usize, f: impl Fn(u32) -> T + Sync) -> Vec<T> {
        if n == 0 {
            return vec![f(0)];
        }
        #[cfg(feature = "parallel")]
        if self.parallel {
            use rayon::prelude::*;
            return (1..=n as u32).into_par_iter().map(&f).collect();
        }
        (1..=n as u32).map(f).collect()
    }
}

/// Visits, in lexicographic order, every permutation of `1..=n` starting with
/// `first` (every permutation of length 0 when `n = 0`).
fn walk_block(n: usize, first: u32, mut visit: impl FnMut(&[u32])) {
    if n == 0 {
        visit(&[]);
        return;
    }
    let mut word = Vec::with_capacity(n);
    word.push(first);
    word.extend((1..=n as u32).filter(|&v| v != first));
    loop {
        visit(&word);
        if !next_permutation(&mut word[1..]) {
            break;
        }
    }
}

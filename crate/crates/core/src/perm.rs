//! Permutations, patterns, and occurrence counting.
//!
//! A permutation of length `n` is stored as its one-line word over `1..=n`.
//! A pattern is structurally the same thing, kept as a separate type so that
//! call sites read as "count `pattern` inside `perm`".
//!
//! Two counters are provided. [`count_occurrences`] is a depth-first search
//! over increasing index tuples that abandons a partial match as soon as the
//! chosen values disagree with the pattern's relative order, and can stop at a
//! caller-supplied cap. [`count_len3_fast`] is an exact quadratic-time kernel
//! for length-3 patterns built from prefix rank tallies.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A permutation of `1..=n` in one-line (word) notation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    word: Vec<u32>,
}

impl Permutation {
    /// Builds a permutation from its word, checking that it is a bijection on `1..=n`.
    pub fn new(word: Vec<u32>) -> Result<Self> {
        if word.is_empty() {
            return Err(Error::InvalidInput("a permutation must have length at least 1".into()));
        }
        check_bijection(&word)?;
        Ok(Self { word })
    }

    /// The identity of length `n`. `n = 0` gives the empty permutation, which
    /// only exists as the starting point for constructions such as `phi`.
    pub fn identity(n: usize) -> Self {
        Self { word: (1..=n as u32).collect() }
    }

    /// Wraps a word already known to be a bijection on `1..=n` (possibly empty).
    pub(crate) fn from_word_unchecked(word: Vec<u32>) -> Self {
        debug_assert!(check_bijection(&word).is_ok());
        Self { word }
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.word
    }

    pub fn into_word(self) -> Vec<u32> {
        self.word
    }

    /// Compact digit form (`"3142"`), available only when every value is at most 9.
    pub fn compact(&self) -> Option<String> {
        compact_word(&self.word)
    }
}

fn compact_word(word: &[u32]) -> Option<String> {
    word.iter()
        .map(|&v| char::from_digit(v, 10).filter(|_| v <= 9))
        .collect()
}

fn check_bijection(word: &[u32]) -> Result<()> {
    let n = word.len();
    let mut seen = vec![false; n + 1];
    for &v in word {
        let idx = v as usize;
        if idx == 0 || idx > n {
            return Err(Error::InvalidInput(format!(
                "value {v} is outside 1..={n}"
            )));
        }
        if std::mem::replace(&mut seen[idx], true) {
            return Err(Error::InvalidInput(format!("value {v} appears twice")));
        }
    }
    Ok(())
}

/// Token form, e.g. `3 1 4 2`.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tokens(f, &self.word)
    }
}

fn write_tokens(f: &mut fmt::Formatter<'_>, word: &[u32]) -> fmt::Result {
    for (i, v) in word.iter().enumerate() {
        if i > 0 {
            f.write_str(" ")?;
        }
        write!(f, "{v}")?;
    }
    Ok(())
}

/// Parses a word written as whitespace- or comma-separated decimal tokens, or
/// as a compact digit string when there is a single token.
pub(crate) fn parse_word(text: &str) -> Result<Vec<u32>> {
    let text = text.trim();
    if text.is_empty() {
        return Err(Error::Parse("empty permutation".into()));
    }
    let tokens: Vec<&str> = text
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .collect();
    if tokens.len() == 1 {
        let token = tokens[0];
        return token
            .chars()
            .map(|c| {
                c.to_digit(10)
                    .ok_or_else(|| Error::Parse(format!("unexpected character {c:?} in {token:?}")))
            })
            .collect();
    }
    tokens
        .iter()
        .map(|t| {
            t.parse::<u32>()
                .map_err(|_| Error::Parse(format!("{t:?} is not a positive integer")))
        })
        .collect()
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Permutation::new(parse_word(s)?)
    }
}

/// A pattern of length `k >= 1`, matched by relative order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pattern(Permutation);

impl Pattern {
    pub fn new(word: Vec<u32>) -> Result<Self> {
        Permutation::new(word).map(Pattern)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn as_slice(&self) -> &[u32] {
        self.0.as_slice()
    }

    pub fn as_permutation(&self) -> &Permutation {
        &self.0
    }

    /// All `k!` patterns of length `k`, in lexicographic order.
    pub fn all_of_length(k: usize) -> Vec<Pattern> {
        crate::enumerate::LexPermutations::new(k).map(Pattern).collect()
    }

    /// `"132"` for short patterns, token form otherwise.
    pub fn text(&self) -> String {
        self.0.compact().unwrap_or_else(|| self.0.to_string())
    }
}

impl From<Pattern> for Permutation {
    fn from(p: Pattern) -> Self {
        p.0
    }
}

impl TryFrom<Permutation> for Pattern {
    type Error = Error;

    fn try_from(p: Permutation) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::InvalidInput("a pattern must have length at least 1".into()));
        }
        Ok(Pattern(p))
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text())
    }
}

impl FromStr for Pattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Pattern::new(parse_word(s)?)
    }
}

impl Serialize for Pattern {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.text())
    }
}

/// Result of a possibly capped occurrence count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OccurrenceCount {
    /// Exact count when `capped` is false, otherwise the cap itself.
    pub value: u64,
    /// Counting stopped because the exact count exceeds the cap.
    pub capped: bool,
}

/// Replaces every entry by its rank among the entries (1 = smallest).
pub fn standardize<T: Ord>(word: &[T]) -> Result<Pattern> {
    if word.is_empty() {
        return Err(Error::InvalidInput("cannot standardize an empty word".into()));
    }
    let mut order: Vec<usize> = (0..word.len()).collect();
    order.sort_by(|&a, &b| word[a].cmp(&word[b]));
    if order.windows(2).any(|w| word[w[0]] == word[w[1]]) {
        return Err(Error::InvalidInput("cannot standardize a word with repeated entries".into()));
    }
    let mut out = vec![0u32; word.len()];
    for (rank, &pos) in order.iter().enumerate() {
        out[pos] = rank as u32 + 1;
    }
    Ok(Pattern(Permutation::from_word_unchecked(out)))
}

/// Order constraints for matching a pattern left to right.
///
/// When the `j`-th pattern letter is placed, its value must exceed the value
/// placed for `below[j]` and be smaller than the one placed for `above[j]`:
/// the nearest already-placed letters beneath and above it in value.
#[derive(Debug, Clone)]
pub(crate) struct CompiledPattern {
    below: Vec<Option<usize>>,
    above: Vec<Option<usize>>,
}

const STACK_DEPTH: usize = 32;

impl CompiledPattern {
    pub(crate) fn new(pattern: &[u32]) -> Self {
        let k = pattern.len();
        let mut below = vec![None; k];
        let mut above = vec![None; k];
        for j in 0..k {
            let v = pattern[j];
            below[j] = (0..j).filter(|&i| pattern[i] < v).max_by_key(|&i| pattern[i]);
            above[j] = (0..j).filter(|&i| pattern[i] > v).min_by_key(|&i| pattern[i]);
        }
        Self { below, above }
    }

    pub(crate) fn len(&self) -> usize {
        self.below.len()
    }

    /// Counts occurrences in `text`, stopping as soon as `limit` have been seen.
    pub(crate) fn count_upto(&self, text: &[u32], limit: u64) -> u64 {
        let k = self.len();
        if k > text.len() || limit == 0 {
            return 0;
        }
        let mut stack = [0u32; STACK_DEPTH];
        let mut heap = Vec::new();
        let chosen: &mut [u32] = if k <= STACK_DEPTH {
            &mut stack[..k]
        } else {
            heap.resize(k, 0);
            &mut heap
        };
        let mut found = 0;
        self.search(text, chosen, 0, 0, limit, &mut found);
        found
    }

    /// Returns false once `limit` occurrences have been found. The tally is a
    /// `u64` bounded by `C(n, k)`, which cannot overflow for any enumerable `n`.
    fn search(
        &self,
        text: &[u32],
        chosen: &mut [u32],
        start: usize,
        depth: usize,
        limit: u64,
        found: &mut u64,
    ) -> bool {
        let k = chosen.len();
        // Leave room for the k - depth - 1 letters still to place.
        let end = text.len() + depth + 1 - k;
        for pos in start..end {
            let v = text[pos];
            if self.below[depth].is_some_and(|i| chosen[i] > v)
                || self.above[depth].is_some_and(|i| chosen[i] < v)
            {
                continue;
            }
            if depth + 1 == k {
                *found += 1;
                if *found >= limit {
                    return false;
                }
            } else {
                chosen[depth] = v;
                if !self.search(text, chosen, pos + 1, depth + 1, limit, found) {
                    return false;
                }
            }
        }
        true
    }
}

fn count_upto(pi: &[u32], alpha: &[u32], limit: u64) -> u64 {
    CompiledPattern::new(alpha).count_upto(pi, limit)
}

/// Number of index sets `i_1 < ... < i_k` on which `pi` is order-isomorphic to
/// `alpha`. With `cap = Some(c)` the result is `min(exact, c)` and `capped`
/// reports whether the exact count is larger than `c`.
pub fn count_occurrences(pi: &Permutation, alpha: &Pattern, cap: Option<u64>) -> OccurrenceCount {
    match cap {
        None => OccurrenceCount { value: count_upto(pi.as_slice(), alpha.as_slice(), u64::MAX), capped: false },
        Some(c) => {
            let found = count_upto(pi.as_slice(), alpha.as_slice(), c.saturating_add(1));
            OccurrenceCount { value: found.min(c), capped: found > c }
        }
    }
}

pub fn avoids(pi: &Permutation, alpha: &Pattern) -> bool {
    count_upto(pi.as_slice(), alpha.as_slice(), 1) == 0
}

/// True iff `pi` has exactly `r` occurrences of `alpha`; looks at no more than `r + 1` of them.
pub fn contains_exactly(pi: &Permutation, alpha: &Pattern, r: u64) -> bool {
    count_upto(pi.as_slice(), alpha.as_slice(), r.saturating_add(1)) == r
}

/// Lists occurrences as 0-based position tuples, at most `limit` of them.
pub fn occurrences(pi: &Permutation, alpha: &Pattern, limit: usize) -> Vec<Vec<usize>> {
    fn walk(
        text: &[u32],
        alpha: &[u32],
        start: usize,
        picked: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        limit: usize,
    ) {
        let depth = picked.len();
        if depth == alpha.len() {
            out.push(picked.clone());
            return;
        }
        for pos in start..=(text.len() + depth - alpha.len()) {
            if out.len() >= limit {
                return;
            }
            let consistent = picked
                .iter()
                .zip(alpha)
                .all(|(&p, &a)| (text[p] < text[pos]) == (a < alpha[depth]));
            if consistent {
                picked.push(pos);
                walk(text, alpha, pos + 1, picked, out, limit);
                picked.pop();
            }
        }
    }

    let mut out = Vec::new();
    if alpha.len() <= pi.len() {
        walk(pi.as_slice(), alpha.as_slice(), 0, &mut Vec::new(), &mut out, limit);
    }
    out
}

/// Exact length-3 occurrence count in `O(n^2)` time and memory.
///
/// For every pair `j < k` whose values are ordered like the pattern's last two
/// letters, the number of valid first letters is read from a prefix tally
/// `below[j][v] = #{ i < j : pi_i < v }`.
pub fn count_len3_fast(pi: &Permutation, alpha: &Pattern) -> Result<OccurrenceCount> {
    let a = alpha.as_slice();
    if a.len() != 3 {
        return Err(Error::InvalidInput(format!(
            "the fast kernel needs a length-3 pattern, got {alpha}"
        )));
    }
    let w = pi.as_slice();
    let n = w.len();
    // below[j * stride + v] = #{ i < j : w_i < v } for v in 0..=n+1.
    let stride = n + 2;
    let mut below = vec![0u32; (n + 1) * stride];
    for j in 0..n {
        let (prev, next) = below.split_at_mut((j + 1) * stride);
        let prev = &prev[j * stride..];
        let row = &mut next[..stride];
        for v in 0..stride {
            row[v] = prev[v] + u32::from((w[j] as usize) < v);
        }
    }
    let tally = |j: usize, lo: u32, hi: u32| -> u64 {
        // #{ i < j : lo < w_i < hi }
        let row = &below[j * stride..(j + 1) * stride];
        u64::from(row[hi as usize] - row[lo as usize + 1])
    };
    let second_below_third = a[1] < a[2];
    let top = n as u32 + 1;
    let mut total: u64 = 0;
    for j in 1..n {
        for k in j + 1..n {
            let (x, y) = (w[j], w[k]);
            if (x < y) != second_below_third {
                continue;
            }
            let (lo, hi) = (x.min(y), x.max(y));
            let first = match a[0] {
                1 => tally(j, 0, lo),
                3 => tally(j, hi, top),
                _ => tally(j, lo, hi),
            };
            total = total
                .checked_add(first)
                .ok_or(Error::Overflow("counting length-3 occurrences"))?;
        }
    }
    Ok(OccurrenceCount { value: total, capped: false })
}

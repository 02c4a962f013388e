//! Restriction specs `(R;T)`: a set of patterns to avoid and a multiset of
//! patterns each of which must occur an exact number of times.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::perm::Pattern;

/// The pair `(R;T)`. Stored canonically: both sides are ordered
/// lexicographically and repeated containment patterns are folded into their
/// multiplicity, so equal specs compare equal regardless of how they were
/// written.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RestrictionSpec {
    avoid: BTreeSet<Pattern>,
    contain: BTreeMap<Pattern, u32>,
}

impl RestrictionSpec {
    pub fn new(
        avoid: impl IntoIterator<Item = Pattern>,
        contain: impl IntoIterator<Item = (Pattern, u32)>,
    ) -> Result<Self> {
        let avoid: BTreeSet<Pattern> = avoid.into_iter().collect();
        let mut folded: BTreeMap<Pattern, u32> = BTreeMap::new();
        for (p, m) in contain {
            if m == 0 {
                return Err(Error::InvalidInput(format!(
                    "containment multiplicity for {p} must be at least 1"
                )));
            }
            let slot = folded.entry(p).or_insert(0);
            *slot = slot
                .checked_add(m)
                .ok_or(Error::Overflow("folding containment multiplicities"))?;
        }
        if let Some(p) = folded.keys().find(|p| avoid.contains(*p)) {
            return Err(Error::InvalidInput(format!(
                "pattern {p} cannot be both avoided and contained"
            )));
        }
        Ok(Self { avoid, contain: folded })
    }

    /// `S_n(R)`: avoid every pattern in `avoid`, no containment requirement.
    pub fn avoiding(avoid: impl IntoIterator<Item = Pattern>) -> Self {
        Self { avoid: avoid.into_iter().collect(), contain: BTreeMap::new() }
    }

    /// `(alpha;beta)`: avoid `alpha`, contain `beta` exactly once.
    pub fn pair(alpha: Pattern, beta: Pattern) -> Result<Self> {
        Self::new([alpha], [(beta, 1)])
    }

    /// `(∅;{alpha,beta})`: contain each of the two exactly once (twice if equal).
    pub fn multiset(alpha: Pattern, beta: Pattern) -> Self {
        Self::new([], [(alpha, 1), (beta, 1)]).expect("pure containment specs are always valid")
    }

    pub fn avoid(&self) -> &BTreeSet<Pattern> {
        &self.avoid
    }

    pub fn contain(&self) -> &BTreeMap<Pattern, u32> {
        &self.contain
    }

    pub fn is_unrestricted(&self) -> bool {
        self.avoid.is_empty() && self.contain.is_empty()
    }

    /// Longest pattern mentioned, 0 for the unrestricted spec.
    pub fn max_pattern_len(&self) -> usize {
        self.avoid
            .iter()
            .chain(self.contain.keys())
            .map(Pattern::len)
            .max()
            .unwrap_or(0)
    }

    /// All 30 ordered pairs `(alpha;beta)` with `alpha != beta` of length 3.
    pub fn ordered_pairs_len3() -> Vec<Self> {
        let s3 = Pattern::all_of_length(3);
        let mut out = Vec::with_capacity(30);
        for a in &s3 {
            for b in &s3 {
                if a != b {
                    out.push(Self::pair(a.clone(), b.clone()).expect("distinct patterns"));
                }
            }
        }
        out
    }

    /// All 15 multisets `(∅;{alpha,beta})` with `alpha != beta` of length 3.
    pub fn multiset_pairs_len3() -> Vec<Self> {
        let s3 = Pattern::all_of_length(3);
        let mut out = Vec::with_capacity(15);
        for (i, a) in s3.iter().enumerate() {
            for b in &s3[i + 1..] {
                out.push(Self::multiset(a.clone(), b.clone()));
            }
        }
        out
    }
}

fn write_side<'a>(
    f: &mut fmt::Formatter<'_>,
    items: impl ExactSizeIterator<Item = (&'a Pattern, u32)>,
) -> fmt::Result {
    let len = items.len();
    if len == 0 {
        return f.write_str("∅");
    }
    if len > 1 {
        f.write_str("{")?;
    }
    for (i, (p, m)) in items.enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{p}")?;
        if m > 1 {
            write!(f, "^{m}")?;
        }
    }
    if len > 1 {
        f.write_str("}")?;
    }
    Ok(())
}

/// Canonical text such as `(123;312)`, `(∅;{132,213})` or `({123,321};∅)`.
impl fmt::Display for RestrictionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        write_side(f, self.avoid.iter().map(|p| (p, 1)))?;
        f.write_str(";")?;
        write_side(f, self.contain.iter().map(|(p, &m)| (p, m)))?;
        f.write_str(")")
    }
}

/// Parses `pattern` or `pattern^m`.
pub fn parse_pattern_with_multiplicity(token: &str) -> Result<(Pattern, u32)> {
    let token = token.trim();
    match token.split_once('^') {
        Some((p, m)) => {
            let m: u32 = m
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad multiplicity in {token:?}")))?;
            Ok((p.parse()?, m))
        }
        None => Ok((token.parse()?, 1)),
    }
}

fn parse_side(text: &str) -> Result<Vec<(Pattern, u32)>> {
    let text = text.trim();
    if text.is_empty() || text == "∅" || text == "-" {
        return Ok(Vec::new());
    }
    let inner = text
        .strip_prefix('{')
        .and_then(|t| t.strip_suffix('}'))
        .unwrap_or(text);
    inner
        .split(',')
        .filter(|t| !t.trim().is_empty())
        .map(parse_pattern_with_multiplicity)
        .collect()
}

impl FromStr for RestrictionSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let body = s
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .unwrap_or(s);
        let (avoid, contain) = body
            .split_once(';')
            .ok_or_else(|| Error::Parse(format!("expected (avoid;contain), got {s:?}")))?;
        let mut avoid_patterns = Vec::new();
        for (p, m) in parse_side(avoid)? {
            if m != 1 {
                return Err(Error::Parse(format!("avoided pattern {p} cannot carry a multiplicity")));
            }
            avoid_patterns.push(p);
        }
        Self::new(avoid_patterns, parse_side(contain)?)
    }
}

/// `{"avoid":["123"],"contain":[{"pattern":"312","count":1}]}`
impl Serialize for RestrictionSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        struct Contain<'a>(&'a BTreeMap<Pattern, u32>);

        impl Serialize for Contain<'_> {
            fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
                #[derive(Serialize)]
                struct Entry<'a> {
                    pattern: &'a Pattern,
                    count: u32,
                }
                let mut seq = serializer.serialize_seq(Some(self.0.len()))?;
                for (pattern, &count) in self.0 {
                    seq.serialize_element(&Entry { pattern, count })?;
                }
                seq.end()
            }
        }

        let mut map = serializer.serialize_map(Some(2))?;
        map.serialize_entry("avoid", &self.avoid)?;
        map.serialize_entry("contain", &Contain(&self.contain))?;
        map.end()
    }
}

//! Closed forms for `s_n(R;T)` over length-3 patterns.
//!
//! Each [`FormulaEntry`] covers a whole almost-Wilf class: its member specs
//! are the union of the symmetry orbits of a few seed specs. Formulas are
//! evaluated over exact rationals because several of them are stated with
//! negative powers of two inside their validity range (`n·2^(n-5)` at
//! `n = 4`); every result must come out integral.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::OnceLock;

use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::spec::RestrictionSpec;
use crate::symmetry::orbit;

type Q = Ratio<i128>;

/// Exact expression in the single variable `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Int(i64),
    N,
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    /// `2^e`; negative exponents give fractions.
    Pow2(Box<Expr>),
    /// `C(a, b)`, zero when `b < 0`, `a < 0` or `b > a`.
    Binom(Box<Expr>, Box<Expr>),
}

pub mod expr {
    //! Small constructors so the ledger reads like the formulas it encodes.
    use super::Expr;

    pub fn n() -> Expr {
        Expr::N
    }
    pub fn int(v: i64) -> Expr {
        Expr::Int(v)
    }
    pub fn add(a: Expr, b: Expr) -> Expr {
        Expr::Add(a.into(), b.into())
    }
    pub fn sub(a: Expr, b: Expr) -> Expr {
        Expr::Sub(a.into(), b.into())
    }
    pub fn mul(a: Expr, b: Expr) -> Expr {
        Expr::Mul(a.into(), b.into())
    }
    pub fn div(a: Expr, b: Expr) -> Expr {
        Expr::Div(a.into(), b.into())
    }
    pub fn pow2(e: Expr) -> Expr {
        Expr::Pow2(e.into())
    }
    pub fn binom(a: Expr, b: Expr) -> Expr {
        Expr::Binom(a.into(), b.into())
    }
    /// `n + k` (or `n - |k|`).
    pub fn n_plus(k: i64) -> Expr {
        match k {
            0 => n(),
            k if k > 0 => add(n(), int(k)),
            k => sub(n(), int(-k)),
        }
    }
}

fn overflow() -> Error {
    Error::Overflow("evaluating a closed form")
}

fn as_integer(q: &Q) -> Option<i128> {
    q.is_integer().then(|| q.to_integer())
}

fn binomial(a: i128, b: i128) -> Result<i128> {
    if a < 0 || b < 0 || b > a {
        return Ok(0);
    }
    let b = b.min(a - b);
    let mut acc: i128 = 1;
    for i in 0..b {
        // acc * (a - i) / (i + 1) is exact at every step.
        acc = acc.checked_mul(a - i).ok_or_else(overflow)? / (i + 1);
    }
    Ok(acc)
}

impl Expr {
    /// Exact rational value at `n`. Non-integral arguments to `2^·` or
    /// `C(·,·)` are reported as a non-integral error with an empty class label.
    pub fn eval(&self, n: i64) -> Result<Q> {
        let non_integral = |what: &str| Error::NonIntegral {
            class: String::new(),
            n: n.max(0) as usize,
            value: what.to_string(),
        };
        Ok(match self {
            Expr::Int(v) => Q::from_integer(i128::from(*v)),
            Expr::N => Q::from_integer(i128::from(n)),
            Expr::Add(a, b) => a.eval(n)?.checked_add(&b.eval(n)?).ok_or_else(overflow)?,
            Expr::Sub(a, b) => a.eval(n)?.checked_sub(&b.eval(n)?).ok_or_else(overflow)?,
            Expr::Mul(a, b) => a.eval(n)?.checked_mul(&b.eval(n)?).ok_or_else(overflow)?,
            Expr::Div(a, b) => {
                let d = b.eval(n)?;
                if d.is_zero() {
                    return Err(Error::InvalidInput(format!("division by zero in {self} at n = {n}")));
                }
                a.eval(n)?.checked_div(&d).ok_or_else(overflow)?
            }
            Expr::Pow2(e) => {
                let e = e.eval(n)?;
                let e = as_integer(&e).ok_or_else(|| non_integral(&format!("exponent {e}")))?;
                let magnitude = u32::try_from(e.unsigned_abs()).map_err(|_| overflow())?;
                let p = 2i128.checked_pow(magnitude).ok_or_else(overflow)?;
                if e >= 0 {
                    Q::from_integer(p)
                } else {
                    Q::new(1, p)
                }
            }
            Expr::Binom(a, b) => {
                let (a, b) = (a.eval(n)?, b.eval(n)?);
                let a = as_integer(&a).ok_or_else(|| non_integral(&format!("binomial top {a}")))?;
                let b = as_integer(&b).ok_or_else(|| non_integral(&format!("binomial bottom {b}")))?;
                Q::from_integer(binomial(a, b)?)
            }
        })
    }

    fn is_atom(&self) -> bool {
        matches!(self, Expr::Int(_) | Expr::N | Expr::Pow2(_) | Expr::Binom(..))
    }

    fn fmt_factor(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_atom() || matches!(self, Expr::Mul(..)) {
            write!(f, "{self}")
        } else {
            write!(f, "({self})")
        }
    }
}

/// Plain-text rendering, e.g. `(n-2)*2^(n-3)` or `C(2n-3,n-3)`.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Int(v) => write!(f, "{v}"),
            Expr::N => f.write_str("n"),
            Expr::Add(a, b) => write!(f, "{a}+{b}"),
            Expr::Sub(a, b) => {
                write!(f, "{a}-")?;
                if matches!(**b, Expr::Add(..) | Expr::Sub(..)) {
                    write!(f, "({b})")
                } else {
                    write!(f, "{b}")
                }
            }
            Expr::Mul(a, b) => {
                // 2n rather than 2*n
                if let (Expr::Int(k), Expr::N) = (&**a, &**b) {
                    return write!(f, "{k}n");
                }
                a.fmt_factor(f)?;
                f.write_str("*")?;
                b.fmt_factor(f)
            }
            Expr::Div(a, b) => {
                a.fmt_factor(f)?;
                f.write_str("/")?;
                if b.is_atom() {
                    write!(f, "{b}")
                } else {
                    write!(f, "({b})")
                }
            }
            Expr::Pow2(e) => {
                if e.is_atom() {
                    write!(f, "2^{e}")
                } else {
                    write!(f, "2^({e})")
                }
            }
            Expr::Binom(a, b) => write!(f, "C({a},{b})"),
        }
    }
}

/// Labels of the almost-Wilf classes (`A`–`J`) and of the background results
/// on single avoidance, pair avoidance and single containment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClassId {
    SingleAvoid,
    PairAvoidPowerOfTwo,
    PairAvoidQuadratic,
    PairAvoidEmpty,
    SingleContain123,
    SingleContain132,
    A,
    B,
    C,
    D,
    E,
    F,
    G,
    H,
    I,
    J,
}

impl ClassId {
    pub fn label(self) -> &'static str {
        match self {
            ClassId::SingleAvoid => "SINGLE_AVOID",
            ClassId::PairAvoidPowerOfTwo => "SS_2A",
            ClassId::PairAvoidQuadratic => "SS_2B",
            ClassId::PairAvoidEmpty => "SS_2C",
            ClassId::SingleContain123 => "SINGLE_CONTAIN_123",
            ClassId::SingleContain132 => "SINGLE_CONTAIN_132",
            ClassId::A => "A",
            ClassId::B => "B",
            ClassId::C => "C",
            ClassId::D => "D",
            ClassId::E => "E",
            ClassId::F => "F",
            ClassId::G => "G",
            ClassId::H => "H",
            ClassId::I => "I",
            ClassId::J => "J",
        }
    }

    /// Classes of ordered pairs `(alpha;beta)`.
    pub const ORDERED: [ClassId; 5] = [ClassId::A, ClassId::B, ClassId::C, ClassId::D, ClassId::E];
    /// Classes of multisets `(∅;{alpha,beta})`.
    pub const MULTISET: [ClassId; 5] = [ClassId::F, ClassId::G, ClassId::H, ClassId::I, ClassId::J];
}

impl fmt::Display for ClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for ClassId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        known_table()
            .iter()
            .map(|e| e.class_id)
            .find(|c| c.label().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Parse(format!("unknown formula class {s:?}")))
    }
}

#[derive(Debug, Clone)]
pub struct FormulaEntry {
    pub class_id: ClassId,
    /// Short description of where the closed form comes from.
    pub source: &'static str,
    /// Theorem labels (`"4.2"`, …) the entry answers to in `verify --theorems`.
    pub theorems: Vec<&'static str>,
    /// Specs whose symmetry orbits make up the class.
    pub seeds: Vec<RestrictionSpec>,
    pub members: BTreeSet<RestrictionSpec>,
    pub closed_form: Expr,
    pub valid_from: usize,
    /// Known values below `valid_from`, sorted by `n`.
    pub exceptions: Vec<(usize, u64)>,
}

impl FormulaEntry {
    fn new(
        class_id: ClassId,
        source: &'static str,
        theorems: &[&'static str],
        seeds: &[&str],
        closed_form: Expr,
        valid_from: usize,
        exceptions: &[(usize, u64)],
    ) -> Self {
        let seeds: Vec<RestrictionSpec> = seeds
            .iter()
            .map(|s| s.parse().expect("ledger seed specs are well formed"))
            .collect();
        let members = seeds.iter().flat_map(orbit).collect();
        Self {
            class_id,
            source,
            theorems: theorems.to_vec(),
            seeds,
            members,
            closed_form,
            valid_from,
            exceptions: exceptions.to_vec(),
        }
    }

    pub fn covers(&self, spec: &RestrictionSpec) -> bool {
        self.members.contains(spec)
    }

    /// `s_n` for this class: an exception if one is listed, the closed form
    /// from `valid_from` on, `None` (unknown) otherwise.
    pub fn eval(&self, n: usize) -> Result<Option<u64>> {
        if let Some(&(_, v)) = self.exceptions.iter().find(|(m, _)| *m == n) {
            return Ok(Some(v));
        }
        if n == 0 || n < self.valid_from {
            return Ok(None);
        }
        let n_i64 = i64::try_from(n).map_err(|_| overflow())?;
        let value = self.closed_form.eval(n_i64).map_err(|e| match e {
            Error::NonIntegral { value, .. } => Error::NonIntegral { class: self.class_id.to_string(), n, value },
            other => other,
        })?;
        let non_integral = || Error::NonIntegral {
            class: self.class_id.to_string(),
            n,
            value: value.to_string(),
        };
        let int = as_integer(&value).ok_or_else(non_integral)?;
        u64::try_from(int).map(Some).map_err(|_| non_integral())
    }

    /// Human-readable validity, e.g. `n >= 7; s_4=3, s_5=6, s_6=17`.
    pub fn validity(&self) -> String {
        let mut out = format!("n >= {}", self.valid_from);
        if !self.exceptions.is_empty() {
            let ex: Vec<String> = self.exceptions.iter().map(|(n, v)| format!("s_{n}={v}")).collect();
            out.push_str("; ");
            out.push_str(&ex.join(", "));
        }
        out
    }
}

/// `{"class":"I","source":…,"theorems":["5.3"],"members":["(∅;{132,213})",…],
///   "formula":"…","valid_from":7,"exceptions":[[4,3],…]}`
impl Serialize for FormulaEntry {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let members: Vec<String> = self.members.iter().map(ToString::to_string).collect();
        let mut st = serializer.serialize_struct("FormulaEntry", 7)?;
        st.serialize_field("class", self.class_id.label())?;
        st.serialize_field("source", self.source)?;
        st.serialize_field("theorems", &self.theorems)?;
        st.serialize_field("members", &members)?;
        st.serialize_field("formula", &self.closed_form.to_string())?;
        st.serialize_field("valid_from", &self.valid_from)?;
        st.serialize_field("exceptions", &self.exceptions)?;
        st.end()
    }
}

/// A word of length `n < 3` has no length-3 subsequence at all.
const TOO_SHORT: [(usize, u64); 2] = [(1, 0), (2, 0)];
/// A word of length 3 realises exactly one length-3 pattern, so it cannot
/// contain two distinct ones.
const TWO_PATTERNS_TOO_SHORT: [(usize, u64); 3] = [(1, 0), (2, 0), (3, 0)];

fn build_table() -> Vec<FormulaEntry> {
    use expr::*;
    use ClassId::*;

    let catalan = div(binom(mul(int(2), n()), n()), n_plus(1));
    let two_n_minus_5 = sub(mul(int(2), n()), int(5));

    vec![
        FormulaEntry::new(
            SingleAvoid,
            "single pattern avoidance: Catalan numbers",
            &[],
            &["(123;∅)", "(132;∅)"],
            catalan,
            1,
            &[],
        ),
        FormulaEntry::new(
            PairAvoidPowerOfTwo,
            "pair avoidance, power-of-two classes",
            &["2.1"],
            &["({123,132};∅)", "({132,213};∅)", "({132,231};∅)"],
            pow2(n_plus(-1)),
            2,
            &[(1, 1)],
        ),
        FormulaEntry::new(
            PairAvoidQuadratic,
            "pair avoidance, quadratic classes",
            &["2.1"],
            &["({123,231};∅)"],
            add(binom(n(), int(2)), int(1)),
            1,
            &[],
        ),
        FormulaEntry::new(
            PairAvoidEmpty,
            "avoiding both 123 and 321",
            &["2.1"],
            &["({123,321};∅)"],
            int(0),
            5,
            &[],
        ),
        FormulaEntry::new(
            SingleContain123,
            "exactly one 123 (Noonan)",
            &[],
            &["(∅;123)"],
            div(mul(int(3), binom(mul(int(2), n()), n_plus(3))), n()),
            3,
            &TOO_SHORT,
        ),
        FormulaEntry::new(
            SingleContain132,
            "exactly one 132 (Bona)",
            &[],
            &["(∅;132)"],
            binom(sub(mul(int(2), n()), int(3)), n_plus(-3)),
            3,
            &TOO_SHORT,
        ),
        FormulaEntry::new(A, "avoid 123, contain 321 once", &[], &["(123;321)"], int(0), 6, &TOO_SHORT),
        FormulaEntry::new(
            B,
            "avoid one pattern, contain a neighbouring one once",
            &["4.1"],
            &["(123;132)", "(132;123)"],
            mul(n_plus(-2), pow2(n_plus(-3))),
            3,
            &TOO_SHORT,
        ),
        FormulaEntry::new(
            C,
            "linear class, two symmetry orbits with the same count",
            &["4.2", "4.5"],
            &["(123;231)", "(132;321)"],
            two_n_minus_5.clone(),
            3,
            &TOO_SHORT,
        ),
        FormulaEntry::new(
            D,
            "avoid 132, contain 213 once",
            &["4.3"],
            &["(132;213)"],
            mul(n(), pow2(n_plus(-5))),
            4,
            &[(1, 0), (2, 0), (3, 1)],
        ),
        FormulaEntry::new(
            E,
            "avoid 132, contain 231 once",
            &["4.4"],
            &["(132;231)"],
            pow2(n_plus(-3)),
            3,
            &TOO_SHORT,
        ),
        FormulaEntry::new(
            F,
            "contain 123 and 321 once each",
            &[],
            &["(∅;{123,321})"],
            int(0),
            6,
            &TWO_PATTERNS_TOO_SHORT,
        ),
        FormulaEntry::new(
            G,
            "contain 123 and 231 once each",
            &["5.2"],
            &["(∅;{123,231})"],
            two_n_minus_5,
            5,
            &[(1, 0), (2, 0), (3, 0), (4, 2)],
        ),
        FormulaEntry::new(
            H,
            "contain 123 and 132 once each",
            &["5.1"],
            &["(∅;{123,132})"],
            mul(mul(n_plus(-3), n_plus(-4)), pow2(n_plus(-5))),
            5,
            &TWO_PATTERNS_TOO_SHORT,
        ),
        FormulaEntry::new(
            I,
            "contain 132 and 213 once each",
            &["5.3"],
            &["(∅;{132,213})"],
            mul(
                sub(add(mul(n(), n()), mul(int(21), n())), int(28)),
                pow2(n_plus(-9)),
            ),
            7,
            &[(1, 0), (2, 0), (3, 0), (4, 3), (5, 6), (6, 17)],
        ),
        FormulaEntry::new(
            J,
            "contain 132 and 231 once each",
            &["5.4"],
            &["(∅;{132,231})"],
            pow2(n_plus(-3)),
            4,
            &TWO_PATTERNS_TOO_SHORT,
        ),
    ]
}

/// The full ledger, built once.
pub fn known_table() -> &'static [FormulaEntry] {
    static TABLE: OnceLock<Vec<FormulaEntry>> = OnceLock::new();
    TABLE.get_or_init(build_table)
}

pub fn entry(class_id: ClassId) -> &'static FormulaEntry {
    known_table()
        .iter()
        .find(|e| e.class_id == class_id)
        .expect("every class id has a ledger entry")
}

/// The entry whose member set contains `spec`, if any closed form is known.
pub fn lookup(spec: &RestrictionSpec) -> Option<&'static FormulaEntry> {
    known_table().iter().find(|e| e.covers(spec))
}

/// Entries answering to a theorem label (`"5.3"`) or a class label (`"I"`).
pub fn select(key: &str) -> Vec<&'static FormulaEntry> {
    let key = key.trim();
    known_table()
        .iter()
        .filter(|e| e.theorems.contains(&key) || e.class_id.label().eq_ignore_ascii_case(key))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::expr::*;
    use super::*;

    fn spec(s: &str) -> RestrictionSpec {
        s.parse().unwrap()
    }

    #[test]
    fn lookup_examples() {
        assert_eq!(lookup(&spec("(321;312)")).unwrap().class_id, ClassId::B);
        assert_eq!(lookup(&spec("(∅;{213,312})")).unwrap().class_id, ClassId::J);
        assert!(lookup(&spec("(∅;132^2)")).is_none());
        assert!(lookup(&spec("(∅;123^2)")).is_none());
    }

    #[test]
    fn eval_examples() {
        assert_eq!(entry(ClassId::B).eval(5).unwrap(), Some(12));
        assert_eq!(entry(ClassId::D).eval(4).unwrap(), Some(2));
        assert_eq!(entry(ClassId::D).eval(3).unwrap(), Some(1));
        assert_eq!(entry(ClassId::I).eval(7).unwrap(), Some(42));
        assert_eq!(entry(ClassId::I).eval(8).unwrap(), Some(102));
        assert_eq!(entry(ClassId::G).eval(5).unwrap(), Some(5));
        assert_eq!(entry(ClassId::SingleAvoid).eval(4).unwrap(), Some(14));
    }

    #[test]
    fn below_range_is_unknown() {
        assert_eq!(entry(ClassId::A).eval(5).unwrap(), None);
        assert_eq!(entry(ClassId::H).eval(4).unwrap(), None);
        assert_eq!(entry(ClassId::PairAvoidEmpty).eval(4).unwrap(), None);
        assert_eq!(entry(ClassId::B).eval(0).unwrap(), None);
    }

    #[test]
    fn mis_transcribed_formula_is_detected() {
        let mut bad = entry(ClassId::I).clone();
        bad.closed_form = mul(n(), pow2(n_plus(-9)));
        assert!(matches!(bad.eval(7), Err(Error::NonIntegral { .. })));
    }

    #[test]
    fn expressions_render() {
        assert_eq!(entry(ClassId::B).closed_form.to_string(), "(n-2)*2^(n-3)");
        assert_eq!(entry(ClassId::I).closed_form.to_string(), "(n*n+21n-28)*2^(n-9)");
        assert_eq!(entry(ClassId::SingleContain132).closed_form.to_string(), "C(2n-3,n-3)");
        assert_eq!(entry(ClassId::SingleAvoid).closed_form.to_string(), "C(2n,n)/(n+1)");
    }

    #[test]
    fn binomial_conventions() {
        assert_eq!(binomial(5, 2).unwrap(), 10);
        assert_eq!(binomial(5, -1).unwrap(), 0);
        assert_eq!(binomial(2, 4).unwrap(), 0);
        assert_eq!(binomial(-1, 0).unwrap(), 0);
        assert_eq!(binomial(40, 20).unwrap(), 137_846_528_820);
    }

    #[test]
    fn select_by_theorem_or_class() {
        let c: Vec<_> = select("4.5").iter().map(|e| e.class_id).collect();
        assert_eq!(c, [ClassId::C]);
        assert_eq!(select("2.1").len(), 3);
        assert_eq!(select("i")[0].class_id, ClassId::I);
        assert!(select("9.9").is_empty());
    }

    #[test]
    fn class_h_table_form_matches_theorem_form() {
        let table_form = mul(binom(n_plus(-3), int(2)), pow2(n_plus(-4)));
        let theorem = &entry(ClassId::H).closed_form;
        for n in 3..=20 {
            assert_eq!(table_form.eval(n).unwrap(), theorem.eval(n).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn ledger_json_export() {
        let json = serde_json::to_value(entry(ClassId::I)).unwrap();
        assert_eq!(json["class"], "I");
        assert_eq!(json["valid_from"], 7);
        assert_eq!(json["members"].as_array().unwrap().len(), 2);
        assert_eq!(json["exceptions"][3], serde_json::json!([4, 3]));
    }
}

//! Partitions, bipartitions and the label types for irreducible characters
//! of types A, B and D.
//!
//! Ordering follows one convention everywhere: partitions are graded
//! (smaller weight first) and, within a weight, lexicographically
//! decreasing, so the partitions of 4 come out as
//! `(4), (3,1), (2,2), (2,1,1), (1,1,1,1)`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{CoxError, Result};

/// An integer partition stored as its weakly decreasing positive parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Partition(Vec<u32>);

impl Partition {
    /// Builds a partition from parts that must already be weakly decreasing
    /// and positive.
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.iter().any(|&p| p == 0) {
            return Err(CoxError::Domain(format!("zero part in {parts:?}")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(CoxError::Domain(format!("parts not decreasing: {parts:?}")));
        }
        Ok(Partition(parts))
    }

    /// Sorts the input and drops zeros.
    pub fn from_unsorted(mut parts: Vec<u32>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    /// The one-row partition `(n)`, or ∅ for `n = 0`.
    pub fn row(n: u32) -> Self {
        if n == 0 {
            Self::empty()
        } else {
            Partition(vec![n])
        }
    }

    /// The one-column partition `(1^n)`.
    pub fn column(n: u32) -> Self {
        Partition(vec![1; n as usize])
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Number of nonzero parts.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Part `i` (0-based), or 0 beyond the last part.
    pub fn part(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn transpose(&self) -> Self {
        let width = self.part(0) as usize;
        let mut cols = vec![0u32; width];
        for &p in &self.0 {
            for c in cols.iter_mut().take(p as usize) {
                *c += 1;
            }
        }
        Partition(cols)
    }

    pub fn combine(&self, other: &Partition, mode: CombineMode) -> Self {
        match mode {
            CombineMode::Sum => {
                let len = self.len().max(other.len());
                Partition((0..len).map(|i| self.part(i) + other.part(i)).collect())
            }
            CombineMode::Union => {
                let mut parts = self.0.clone();
                parts.extend_from_slice(&other.0);
                Partition::from_unsorted(parts)
            }
        }
    }

    pub fn all_parts_even(&self) -> bool {
        self.0.iter().all(|p| p % 2 == 0)
    }

    pub fn odd_part_count(&self) -> usize {
        self.0.iter().filter(|p| *p % 2 == 1).count()
    }

    /// Young-diagram containment `other ⊆ self`.
    pub fn contains(&self, other: &Partition) -> bool {
        other.len() <= self.len() && other.0.iter().zip(&self.0).all(|(a, b)| a <= b)
    }
}

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight()
            .cmp(&other.weight())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CombineMode {
    /// Componentwise sum `λ + μ`.
    Sum,
    /// Sorted multiset union `λ ∪ μ`.
    Union,
}

/// All partitions of `n` in canonical order.
pub fn partitions_of(n: u32) -> Vec<Partition> {
    fn rec(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        for p in (1..=rest.min(max)).rev() {
            cur.push(p);
            rec(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// Ordered pair of partitions labelling an irreducible character of `B_n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BiPartition {
    pub first: Partition,
    pub second: Partition,
}

impl BiPartition {
    pub fn new(first: Partition, second: Partition) -> Self {
        BiPartition { first, second }
    }

    pub fn weight(&self) -> u32 {
        self.first.weight() + self.second.weight()
    }

    pub fn swap(&self) -> Self {
        BiPartition::new(self.second.clone(), self.first.clone())
    }

    pub fn transpose(&self) -> Self {
        BiPartition::new(self.first.transpose(), self.second.transpose())
    }
}

fn pair_cmp(a: (&Partition, &Partition), b: (&Partition, &Partition)) -> Ordering {
    b.0.weight()
        .cmp(&a.0.weight())
        .then_with(|| a.0.cmp(b.0))
        .then_with(|| a.1.cmp(b.1))
}

impl Ord for BiPartition {
    fn cmp(&self, other: &Self) -> Ordering {
        pair_cmp((&self.first, &self.second), (&other.first, &other.second))
    }
}

impl PartialOrd for BiPartition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All bipartitions of `n`: larger first component first.
pub fn bipartitions_of(n: u32) -> Vec<BiPartition> {
    let mut out = Vec::new();
    for k in (0..=n).rev() {
        for lam in partitions_of(k) {
            for mu in partitions_of(n - k) {
                out.push(BiPartition::new(lam.clone(), mu));
            }
        }
    }
    out
}

/// Unordered pair `{λ, μ}` with `λ ≠ μ`. The stored order is the one that
/// comes first among `(λ,μ)` and `(μ,λ)` in the bipartition order, so the
/// heavier partition is written first and ∅ always last.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UnorderedBiPartition {
    first: Partition,
    second: Partition,
}

impl UnorderedBiPartition {
    pub fn new(a: Partition, b: Partition) -> Result<Self> {
        if a == b {
            return Err(CoxError::Domain(format!(
                "unordered bipartition needs distinct parts, got {a} twice"
            )));
        }
        if pair_cmp((&a, &b), (&b, &a)) == Ordering::Greater {
            Ok(UnorderedBiPartition { first: b, second: a })
        } else {
            Ok(UnorderedBiPartition { first: a, second: b })
        }
    }

    pub fn first(&self) -> &Partition {
        &self.first
    }

    pub fn second(&self) -> &Partition {
        &self.second
    }

    pub fn weight(&self) -> u32 {
        self.first.weight() + self.second.weight()
    }

    pub fn transpose(&self) -> Self {
        UnorderedBiPartition::new(self.first.transpose(), self.second.transpose())
            .expect("transpose keeps parts distinct")
    }

    pub fn as_ordered(&self) -> BiPartition {
        BiPartition::new(self.first.clone(), self.second.clone())
    }

    /// Whether `p` is one of the two parts.
    pub fn has_part(&self, p: &Partition) -> bool {
        &self.first == p || &self.second == p
    }
}

impl Ord for UnorderedBiPartition {
    fn cmp(&self, other: &Self) -> Ordering {
        pair_cmp((&self.first, &self.second), (&other.first, &other.second))
    }
}

impl PartialOrd for UnorderedBiPartition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All unordered bipartitions `{λ,μ}` of `n` with `λ ≠ μ`.
pub fn unordered_bipartitions_of(n: u32) -> Vec<UnorderedBiPartition> {
    bipartitions_of(n)
        .into_iter()
        .filter(|b| b.first != b.second)
        .map(|b| UnorderedBiPartition::new(b.first, b.second).expect("distinct"))
        .filter_map({
            let mut seen = std::collections::BTreeSet::new();
            move |u| seen.insert(u.clone()).then_some(u)
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_value(v: i64) -> Self {
        if v >= 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

/// Degenerate type-D label `[ν, ±]` with `|ν| = n/2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DegenerateLabel {
    pub core: Partition,
    pub sign: Sign,
}

impl DegenerateLabel {
    pub fn new(core: Partition, sign: Sign) -> Self {
        DegenerateLabel { core, sign }
    }

    pub fn rank(&self) -> u32 {
        2 * self.core.weight()
    }
}

/// Label of an irreducible character in one of the three universes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IrrLabel {
    A(Partition),
    B(BiPartition),
    DNondeg(UnorderedBiPartition),
    DDegen(DegenerateLabel),
}

impl IrrLabel {
    pub fn weight(&self) -> u32 {
        match self {
            IrrLabel::A(p) => p.weight(),
            IrrLabel::B(b) => b.weight(),
            IrrLabel::DNondeg(u) => u.weight(),
            IrrLabel::DDegen(d) => d.rank(),
        }
    }
}

/// Filter families used by the closed-form characters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    All,
    ERows,
    ECols,
    ORows(u32),
    OCols(u32),
    ERowsB,
    EColsB,
    ORowsB(u32),
    OColsB(u32),
    ERowsD,
    EColsD,
    ORowsD(u32),
    OColsD(u32),
    Bipartitions,
    Unordered,
    Degenerate,
}

fn union_odd(a: &Partition, b: &Partition) -> usize {
    a.odd_part_count() + b.odd_part_count()
}

/// Labels of the given family at rank `n`, in canonical order.
pub fn enumerate(n: u32, family: Family) -> Result<Vec<IrrLabel>> {
    let parity = |q: u32| -> Result<()> {
        if q > n || (n - q) % 2 != 0 {
            Err(CoxError::Domain(format!(
                "odd-part count {q} incompatible with rank {n}"
            )))
        } else {
            Ok(())
        }
    };
    let a = |f: &dyn Fn(&Partition) -> bool| -> Vec<IrrLabel> {
        partitions_of(n).into_iter().filter(|p| f(p)).map(IrrLabel::A).collect()
    };
    let b = |f: &dyn Fn(&BiPartition) -> bool| -> Vec<IrrLabel> {
        bipartitions_of(n).into_iter().filter(|p| f(p)).map(IrrLabel::B).collect()
    };
    let d = |f: &dyn Fn(&UnorderedBiPartition) -> bool| -> Vec<IrrLabel> {
        unordered_bipartitions_of(n)
            .into_iter()
            .filter(|p| f(p))
            .map(IrrLabel::DNondeg)
            .collect()
    };
    let out = match family {
        Family::All => a(&|_| true),
        Family::ERows => a(&|p| p.all_parts_even()),
        Family::ECols => a(&|p| p.transpose().all_parts_even()),
        Family::ORows(q) => {
            parity(q)?;
            a(&|p| p.odd_part_count() == q as usize)
        }
        Family::OCols(q) => {
            parity(q)?;
            a(&|p| p.transpose().odd_part_count() == q as usize)
        }
        Family::ERowsB => b(&|p| p.first.all_parts_even() && p.second.all_parts_even()),
        Family::EColsB => b(&|p| {
            p.first.transpose().all_parts_even() && p.second.transpose().all_parts_even()
        }),
        Family::ORowsB(q) => {
            parity(q)?;
            b(&|p| union_odd(&p.first, &p.second) == q as usize)
        }
        Family::OColsB(q) => {
            parity(q)?;
            b(&|p| union_odd(&p.first.transpose(), &p.second.transpose()) == q as usize)
        }
        Family::ERowsD => d(&|p| p.first().all_parts_even() && p.second().all_parts_even()),
        Family::EColsD => d(&|p| {
            p.first().transpose().all_parts_even() && p.second().transpose().all_parts_even()
        }),
        Family::ORowsD(q) => {
            parity(q)?;
            d(&|p| union_odd(p.first(), p.second()) == q as usize)
        }
        Family::OColsD(q) => {
            parity(q)?;
            d(&|p| union_odd(&p.first().transpose(), &p.second().transpose()) == q as usize)
        }
        Family::Bipartitions => b(&|_| true),
        Family::Unordered => d(&|_| true),
        Family::Degenerate => {
            if n % 2 != 0 {
                return Err(CoxError::Domain(format!(
                    "degenerate labels need even rank, got {n}"
                )));
            }
            partitions_of(n / 2)
                .into_iter()
                .flat_map(|c| {
                    [Sign::Plus, Sign::Minus]
                        .map(|s| IrrLabel::DDegen(DegenerateLabel::new(c.clone(), s)))
                })
                .collect()
        }
    };
    Ok(out)
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "∅");
        }
        write!(f, "(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for BiPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.first, self.second)
    }
}

impl fmt::Display for UnorderedBiPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{}}}", self.first, self.second)
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

impl fmt::Display for DegenerateLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.core, self.sign)
    }
}

impl fmt::Display for IrrLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IrrLabel::A(p) => p.fmt(f),
            IrrLabel::B(b) => b.fmt(f),
            IrrLabel::DNondeg(u) => u.fmt(f),
            IrrLabel::DDegen(d) => d.fmt(f),
        }
    }
}

/// Small recursive-descent reader for the text forms.
struct Reader<'a> {
    chars: Vec<char>,
    pos: usize,
    src: &'a str,
}

impl<'a> Reader<'a> {
    fn new(src: &'a str) -> Self {
        Reader { chars: src.chars().filter(|c| !c.is_whitespace()).collect(), pos: 0, src }
    }

    fn err(&self, what: &str) -> CoxError {
        CoxError::Parse(format!("{what} in {:?}", self.src))
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected '{c}'")))
        }
    }

    fn done(&self) -> Result<()> {
        if self.pos == self.chars.len() {
            Ok(())
        } else {
            Err(self.err("trailing input"))
        }
    }

    fn partition(&mut self) -> Result<Partition> {
        match self.peek() {
            Some('∅') => {
                self.pos += 1;
                Ok(Partition::empty())
            }
            Some('(') => {
                self.pos += 1;
                let mut parts = Vec::new();
                if self.peek() == Some(')') {
                    self.pos += 1;
                    return Ok(Partition::empty());
                }
                loop {
                    let start = self.pos;
                    while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                        self.pos += 1;
                    }
                    let digits: String = self.chars[start..self.pos].iter().collect();
                    let base: u32 = digits.parse().map_err(|_| self.err("expected part"))?;
                    if self.peek() == Some('^') {
                        self.pos += 1;
                        let start = self.pos;
                        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                            self.pos += 1;
                        }
                        let digits: String = self.chars[start..self.pos].iter().collect();
                        let k: usize = digits.parse().map_err(|_| self.err("expected exponent"))?;
                        parts.extend(std::iter::repeat(base).take(k));
                    } else {
                        parts.push(base);
                    }
                    match self.peek() {
                        Some(',') => self.pos += 1,
                        Some(')') => {
                            self.pos += 1;
                            break;
                        }
                        _ => return Err(self.err("expected ',' or ')'")),
                    }
                }
                Partition::new(parts).map_err(|e| self.err(&e.to_string()))
            }
            _ => Err(self.err("expected partition")),
        }
    }

    fn sign(&mut self) -> Result<Sign> {
        match self.peek() {
            Some('+') => {
                self.pos += 1;
                Ok(Sign::Plus)
            }
            Some('-') | Some('−') => {
                self.pos += 1;
                Ok(Sign::Minus)
            }
            _ => Err(self.err("expected sign")),
        }
    }
}

impl FromStr for Partition {
    type Err = CoxError;
    fn from_str(s: &str) -> Result<Self> {
        let mut r = Reader::new(s);
        let p = r.partition()?;
        r.done()?;
        Ok(p)
    }
}

impl FromStr for BiPartition {
    type Err = CoxError;
    fn from_str(s: &str) -> Result<Self> {
        let mut r = Reader::new(s);
        r.expect('(')?;
        let a = r.partition()?;
        r.expect(',')?;
        let b = r.partition()?;
        r.expect(')')?;
        r.done()?;
        Ok(BiPartition::new(a, b))
    }
}

impl FromStr for UnorderedBiPartition {
    type Err = CoxError;
    fn from_str(s: &str) -> Result<Self> {
        let mut r = Reader::new(s);
        r.expect('{')?;
        let a = r.partition()?;
        r.expect(',')?;
        let b = r.partition()?;
        r.expect('}')?;
        r.done()?;
        UnorderedBiPartition::new(a, b)
    }
}

impl FromStr for DegenerateLabel {
    type Err = CoxError;
    fn from_str(s: &str) -> Result<Self> {
        let mut r = Reader::new(s);
        r.expect('[')?;
        let core = r.partition()?;
        r.expect(',')?;
        let sign = r.sign()?;
        r.expect(']')?;
        r.done()?;
        Ok(DegenerateLabel::new(core, sign))
    }
}

impl FromStr for IrrLabel {
    type Err = CoxError;
    /// Type-A and type-B forms are distinguished by nesting: `((2),(1))`
    /// is a bipartition, `(2,1)` a partition.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.starts_with('{') {
            Ok(IrrLabel::DNondeg(t.parse()?))
        } else if t.starts_with('[') {
            Ok(IrrLabel::DDegen(t.parse()?))
        } else if t.starts_with("((") || t.starts_with("(∅") || t.starts_with("(()") {
            Ok(IrrLabel::B(t.parse()?))
        } else {
            Ok(IrrLabel::A(t.parse()?))
        }
    }
}

macro_rules! string_serde {
    ($($t:ty),*) => {$(
        impl Serialize for $t {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                s.collect_str(self)
            }
        }
        impl<'de> Deserialize<'de> for $t {
            fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
                let s = String::deserialize(d)?;
                s.parse().map_err(serde::de::Error::custom)
            }
        }
    )*};
}

string_serde!(Partition, BiPartition, UnorderedBiPartition, DegenerateLabel, IrrLabel);

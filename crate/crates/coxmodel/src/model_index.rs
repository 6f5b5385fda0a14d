//! Model indices for types A, B and D: validity, transforms, equivalence
//! canonicalization, enumeration and characters.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::{OnceLock, RwLock};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::char_ring::{MfStatus, VirtualCharacter, WeylType};
use crate::error::{CoxError, Result};
use crate::induction::{self, DegenSplitPolicy, Side};

/// Linear character label of a column. `Pm`/`Mp` only occur in type B
/// (`1₊₋`, `1₋₊`) and in type D at `α₀ = 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Gamma {
    Triv,
    Sgn,
    Pm,
    Mp,
}

impl Gamma {
    /// Product with the sign character.
    pub fn bar(self) -> Self {
        match self {
            Gamma::Triv => Gamma::Sgn,
            Gamma::Sgn => Gamma::Triv,
            Gamma::Pm => Gamma::Mp,
            Gamma::Mp => Gamma::Pm,
        }
    }

    pub fn diamond(self) -> Self {
        match self {
            Gamma::Pm => Gamma::Mp,
            Gamma::Mp => Gamma::Pm,
            g => g,
        }
    }

    pub fn is_ordinary(self) -> bool {
        matches!(self, Gamma::Triv | Gamma::Sgn)
    }

    fn name(self) -> &'static str {
        match self {
            Gamma::Triv => "triv",
            Gamma::Sgn => "sgn",
            Gamma::Pm => "pm",
            Gamma::Mp => "mp",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Arrow {
    Cw,
    Ccw,
}

impl Arrow {
    pub fn flip(self) -> Self {
        match self {
            Arrow::Cw => Arrow::Ccw,
            Arrow::Ccw => Arrow::Cw,
        }
    }
}

/// Perfect conjugacy class label of a column.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Beta {
    Id,
    IdPlus,
    Fpf,
    FpfPlus,
    FpfDiamond,
    /// `p` fixed points, `q` negated points.
    Pq(u32, u32),
    /// D₄ triality image of `(p,q)`.
    Tri(u32, u32, Arrow),
}

impl fmt::Display for Beta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Beta::Id => write!(f, "id"),
            Beta::IdPlus => write!(f, "id+"),
            Beta::Fpf => write!(f, "fpf"),
            Beta::FpfPlus => write!(f, "fpf+"),
            Beta::FpfDiamond => write!(f, "fpf◇"),
            Beta::Pq(p, q) => write!(f, "({p},{q})"),
            Beta::Tri(p, q, a) => write!(f, "({p},{q},{})", if *a == Arrow::Cw { "cw" } else { "ccw" }),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum BetaRepr {
    Name(String),
    Pq(String, u32, u32),
    Tri(String, u32, u32, Arrow),
}

impl Serialize for Beta {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let r = match *self {
            Beta::Id => BetaRepr::Name("id".into()),
            Beta::IdPlus => BetaRepr::Name("idplus".into()),
            Beta::Fpf => BetaRepr::Name("fpf".into()),
            Beta::FpfPlus => BetaRepr::Name("fpfplus".into()),
            Beta::FpfDiamond => BetaRepr::Name("fpfdiamond".into()),
            Beta::Pq(p, q) => BetaRepr::Pq("pq".into(), p, q),
            Beta::Tri(p, q, a) => BetaRepr::Tri("tri".into(), p, q, a),
        };
        r.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Beta {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        Ok(match BetaRepr::deserialize(d)? {
            BetaRepr::Name(n) => match n.as_str() {
                "id" => Beta::Id,
                "idplus" => Beta::IdPlus,
                "fpf" => Beta::Fpf,
                "fpfplus" => Beta::FpfPlus,
                "fpfdiamond" => Beta::FpfDiamond,
                other => return Err(D::Error::custom(format!("unknown beta {other:?}"))),
            },
            BetaRepr::Pq(tag, p, q) if tag == "pq" => Beta::Pq(p, q),
            BetaRepr::Tri(tag, p, q, a) if tag == "tri" => Beta::Tri(p, q, a),
            _ => return Err(D::Error::custom("malformed beta")),
        })
    }
}

/// One column `(α, β, γ)` of a model index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Column {
    pub alpha: u32,
    pub beta: Beta,
    pub gamma: Gamma,
}

impl Column {
    pub fn new(alpha: u32, beta: Beta, gamma: Gamma) -> Self {
        Column { alpha, beta, gamma }
    }

    fn empty() -> Self {
        Column::new(0, Beta::Id, Gamma::Triv)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModelIndexA {
    pub columns: Vec<Column>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModelIndexB {
    pub left: Column,
    pub right: Column,
}

/// Type-D index. `negated` marks `α₁ = −n`, which requires `α₀ = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModelIndexD {
    pub left: Column,
    pub right: Column,
    pub negated: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModelIndex {
    A(ModelIndexA),
    B(ModelIndexB),
    D(ModelIndexD),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Transform {
    Star,
    Dual,
    Bar,
    Diamond,
    Normalize,
    /// D₄ order-three diagram automorphism.
    Triality,
    /// B₂ generator swap `s₀ ↔ s₁`.
    SwapB2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EquivalenceRelation {
    Strong,
    Full,
}

impl ModelIndexA {
    pub fn new(columns: Vec<Column>) -> Self {
        ModelIndexA { columns }
    }

    pub fn rank(&self) -> u32 {
        self.columns.iter().map(|c| c.alpha).sum()
    }
}

impl ModelIndexB {
    pub fn new(left: Column, right: Column) -> Self {
        ModelIndexB { left, right }
    }

    pub fn rank(&self) -> u32 {
        self.left.alpha + self.right.alpha
    }
}

impl ModelIndexD {
    pub fn new(left: Column, right: Column, negated: bool) -> Self {
        ModelIndexD { left, right, negated }
    }

    pub fn rank(&self) -> u32 {
        self.left.alpha + self.right.alpha
    }

    /// Signed `α₁`.
    pub fn alpha1(&self) -> i64 {
        let a = i64::from(self.right.alpha);
        if self.negated {
            -a
        } else {
            a
        }
    }
}

/// Shorthand for a two-column A index `[a0,a1; b0,b1; g0,g1]`.
pub fn index_a2(a: (u32, u32), b: (Beta, Beta), g: (Gamma, Gamma)) -> ModelIndex {
    ModelIndex::A(ModelIndexA::new(vec![Column::new(a.0, b.0, g.0), Column::new(a.1, b.1, g.1)]))
}

pub fn index_b(a: (u32, u32), b: (Beta, Beta), g: (Gamma, Gamma)) -> ModelIndex {
    ModelIndex::B(ModelIndexB::new(Column::new(a.0, b.0, g.0), Column::new(a.1, b.1, g.1)))
}

/// D index with signed `α₁`.
pub fn index_d(alpha0: u32, alpha1: i64, b: (Beta, Beta), g: (Gamma, Gamma)) -> ModelIndex {
    ModelIndex::D(ModelIndexD::new(
        Column::new(alpha0, b.0, g.0),
        Column::new(alpha1.unsigned_abs() as u32, b.1, g.1),
        alpha1 < 0,
    ))
}

impl ModelIndex {
    pub fn weyl_type(&self) -> WeylType {
        match self {
            ModelIndex::A(_) => WeylType::A,
            ModelIndex::B(_) => WeylType::B,
            ModelIndex::D(_) => WeylType::D,
        }
    }

    pub fn rank(&self) -> u32 {
        match self {
            ModelIndex::A(x) => x.rank(),
            ModelIndex::B(x) => x.rank(),
            ModelIndex::D(x) => x.rank(),
        }
    }

    pub fn validate(&self) -> Vec<String> {
        validate(self)
    }

    pub fn is_valid(&self) -> bool {
        validate(self).is_empty()
    }

    pub fn transform(&self, kind: Transform) -> Result<ModelIndex> {
        transform(self, kind)
    }

    pub fn canonical_form(&self, rel: EquivalenceRelation) -> Result<ModelIndex> {
        canonical_form(self, rel)
    }

    pub fn character(&self, policy: DegenSplitPolicy) -> Result<VirtualCharacter> {
        character_of_index(self, policy)
    }
}

fn fmt_cols(f: &mut fmt::Formatter<'_>, alphas: &[String], cols: &[Column]) -> fmt::Result {
    let b: Vec<String> = cols.iter().map(|c| c.beta.to_string()).collect();
    let g: Vec<&str> = cols.iter().map(|c| c.gamma.name()).collect();
    write!(f, "[{}; {}; {}]", alphas.join(","), b.join(","), g.join(","))
}

impl fmt::Display for ModelIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelIndex::A(x) => {
                let a: Vec<String> = x.columns.iter().map(|c| c.alpha.to_string()).collect();
                fmt_cols(f, &a, &x.columns)
            }
            ModelIndex::B(x) => {
                let a = vec![x.left.alpha.to_string(), x.right.alpha.to_string()];
                fmt_cols(f, &a, &[x.left, x.right])
            }
            ModelIndex::D(x) => {
                let a = vec![x.left.alpha.to_string(), x.alpha1().to_string()];
                fmt_cols(f, &a, &[x.left, x.right])
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
struct IndexRepr {
    #[serde(rename = "type")]
    ty: WeylType,
    alpha: Vec<i64>,
    beta: Vec<Beta>,
    gamma: Vec<Gamma>,
}

impl Serialize for ModelIndex {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let cols: Vec<Column> = match self {
            ModelIndex::A(x) => x.columns.clone(),
            ModelIndex::B(x) => vec![x.left, x.right],
            ModelIndex::D(x) => vec![x.left, x.right],
        };
        let mut alpha: Vec<i64> = cols.iter().map(|c| i64::from(c.alpha)).collect();
        if let ModelIndex::D(x) = self {
            alpha[1] = x.alpha1();
        }
        IndexRepr {
            ty: self.weyl_type(),
            alpha,
            beta: cols.iter().map(|c| c.beta).collect(),
            gamma: cols.iter().map(|c| c.gamma).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ModelIndex {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        let r = IndexRepr::deserialize(d)?;
        if r.alpha.len() != r.beta.len() || r.alpha.len() != r.gamma.len() {
            return Err(D::Error::custom("alpha, beta and gamma rows differ in length"));
        }
        let col = |i: usize| -> std::result::Result<Column, D::Error> {
            let a = u32::try_from(r.alpha[i].unsigned_abs()).map_err(D::Error::custom)?;
            Ok(Column::new(a, r.beta[i], r.gamma[i]))
        };
        let cols = (0..r.alpha.len()).map(col).collect::<std::result::Result<Vec<_>, _>>()?;
        match r.ty {
            WeylType::A => {
                if r.alpha.iter().any(|&a| a < 0) {
                    return Err(D::Error::custom("negative alpha in type A"));
                }
                Ok(ModelIndex::A(ModelIndexA::new(cols)))
            }
            WeylType::B | WeylType::D => {
                if cols.len() != 2 {
                    return Err(D::Error::custom("type B/D indices have two columns"));
                }
                if r.alpha[0] < 0 || (r.ty == WeylType::B && r.alpha[1] < 0) {
                    return Err(D::Error::custom("negative alpha"));
                }
                if r.ty == WeylType::B {
                    Ok(ModelIndex::B(ModelIndexB::new(cols[0], cols[1])))
                } else {
                    Ok(ModelIndex::D(ModelIndexD::new(cols[0], cols[1], r.alpha[1] < 0)))
                }
            }
        }
    }
}

impl std::str::FromStr for ModelIndex {
    type Err = CoxError;

    /// Parses the JSON form.
    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| CoxError::Parse(format!("model index: {e}")))
    }
}

// ---------------------------------------------------------------- validity

fn check_a_column(c: &Column, out: &mut Vec<String>, at: &str) {
    match c.beta {
        Beta::Id | Beta::IdPlus => {}
        Beta::Fpf | Beta::FpfPlus => {
            if c.alpha % 2 == 1 {
                out.push(format!("{at}: fpf with odd alpha"));
            }
        }
        b => out.push(format!("{at}: beta {b} not allowed in a type A column")),
    }
    if !c.gamma.is_ordinary() {
        out.push(format!("{at}: gamma must be triv/sgn"));
    }
}

fn check_b_right(c: &Column, out: &mut Vec<String>) {
    check_a_column(c, out, "column 1");
    if matches!(c.beta, Beta::Fpf | Beta::FpfPlus) && c.alpha < 4 && c.alpha != 0 {
        out.push("column 1: fpf requires alpha1 in {4,6,...}".into());
    }
    if matches!(c.beta, Beta::Fpf | Beta::FpfPlus) && c.alpha == 0 {
        out.push("column 1: fpf requires alpha1 in {4,6,...}".into());
    }
}

pub fn validate(idx: &ModelIndex) -> Vec<String> {
    let mut out = Vec::new();
    match idx {
        ModelIndex::A(x) => {
            if x.columns.is_empty() {
                out.push("no columns".into());
            }
            let zeros = x.columns.iter().filter(|c| c.alpha == 0).count();
            if zeros > 0 && x.columns.len() != 2 {
                out.push("alpha = 0 only allowed in the two-column extended form".into());
            }
            if x.rank() == 0 {
                out.push("rank must be positive".into());
            }
            for (i, c) in x.columns.iter().enumerate() {
                check_a_column(c, &mut out, &format!("column {i}"));
            }
        }
        ModelIndex::B(x) => {
            let (l, r) = (&x.left, &x.right);
            if x.rank() == 0 {
                out.push("rank must be positive".into());
            }
            match l.beta {
                Beta::Id | Beta::IdPlus => {}
                Beta::Fpf => {
                    if l.alpha % 2 == 1 {
                        out.push("column 0: fpf with odd alpha".into());
                    }
                    if !l.gamma.is_ordinary() {
                        out.push("gamma0 must be triv/sgn with beta0=fpf".into());
                    }
                }
                Beta::Pq(p, q) => {
                    if p == 0 || q == 0 || p + q != l.alpha {
                        out.push(format!("column 0: (p,q) must be positive with p+q = {}", l.alpha));
                    }
                }
                b => out.push(format!("column 0: beta {b} not allowed in type B")),
            }
            if l.alpha <= 1 && !l.gamma.is_ordinary() {
                out.push("gamma0 must be triv/sgn when alpha0 <= 1".into());
            }
            check_b_right(r, &mut out);
        }
        ModelIndex::D(x) => {
            let (l, r) = (&x.left, &x.right);
            let n = x.rank();
            if n < 2 {
                out.push("type D needs rank at least 2".into());
            }
            if x.negated && l.alpha != 0 {
                out.push("alpha1 = -n requires alpha0 = 0".into());
            }
            if l.alpha == 1 {
                out.push("alpha1 must lie in {-n, n} or {0,...,n-2}".into());
            }
            match l.beta {
                Beta::Id | Beta::IdPlus => {}
                Beta::Fpf | Beta::FpfDiamond => {
                    if l.alpha % 2 == 1 {
                        out.push("column 0: fpf with odd alpha".into());
                    }
                }
                Beta::Pq(p, q) => {
                    if p == 0 || q == 0 || p + q != l.alpha || l.alpha <= 2 {
                        out.push(format!(
                            "column 0: (p,q) must be positive with p+q = alpha0 > 2, got ({p},{q})"
                        ));
                    }
                }
                Beta::Tri(p, q, _) => {
                    if l.alpha != 4 || !matches!((p, q), (3, 1) | (1, 3)) {
                        out.push("column 0: triality classes need alpha0 = 4 and (p,q) in {(3,1),(1,3)}".into());
                    }
                }
                b => out.push(format!("column 0: beta {b} not allowed in type D")),
            }
            if l.alpha != 2 && !l.gamma.is_ordinary() {
                out.push("gamma0 may be pm/mp only when alpha0 = 2".into());
            }
            check_b_right(r, &mut out);
        }
    }
    out
}

fn ensure_valid(idx: &ModelIndex) -> Result<()> {
    let v = validate(idx);
    if v.is_empty() {
        Ok(())
    } else {
        Err(CoxError::InvalidIndex(format!("{idx}: {}", v.join("; "))))
    }
}

// -------------------------------------------------------------- transforms

fn dual_a_beta(b: Beta) -> Beta {
    match b {
        Beta::Id => Beta::IdPlus,
        Beta::IdPlus => Beta::Id,
        Beta::Fpf => Beta::FpfPlus,
        Beta::FpfPlus => Beta::Fpf,
        other => other,
    }
}

fn dual_b_left(b: Beta) -> Beta {
    match b {
        Beta::Pq(p, q) => Beta::Pq(q, p),
        Beta::Id => Beta::IdPlus,
        Beta::IdPlus => Beta::Id,
        other => other,
    }
}

fn dual_d_left(b: Beta, alpha0: u32, n: u32) -> Beta {
    let odd = n % 2 == 1;
    let keep = (alpha0 / 2 + n) % 2 == 0;
    match b {
        Beta::Pq(p, q) => Beta::Pq(q, p),
        Beta::Tri(p, q, a) => Beta::Tri(q, p, if odd { a.flip() } else { a }),
        Beta::Fpf => {
            if keep {
                Beta::Fpf
            } else {
                Beta::FpfDiamond
            }
        }
        Beta::FpfDiamond => {
            if keep {
                Beta::FpfDiamond
            } else {
                Beta::Fpf
            }
        }
        Beta::Id => Beta::IdPlus,
        Beta::IdPlus => Beta::Id,
        other => other,
    }
}

fn diamond_d_left(b: Beta) -> Beta {
    match b {
        Beta::Tri(p, q, a) => Beta::Tri(p, q, a.flip()),
        Beta::Fpf => Beta::FpfDiamond,
        Beta::FpfDiamond => Beta::Fpf,
        other => other,
    }
}

fn normalize_a_column(c: Column) -> Column {
    let mut c = c;
    if c.beta == Beta::IdPlus {
        c.beta = Beta::Id;
    }
    match c.alpha {
        0 | 1 => Column::new(c.alpha, Beta::Id, Gamma::Triv),
        2 => Column::new(2, Beta::Id, c.gamma),
        _ => c,
    }
}

fn normalize(idx: &ModelIndex) -> ModelIndex {
    match idx {
        ModelIndex::A(x) => {
            let mut cols: Vec<Column> =
                x.columns.iter().filter(|c| c.alpha > 0).map(|c| normalize_a_column(*c)).collect();
            if cols.is_empty() {
                cols = x.columns.clone();
            }
            ModelIndex::A(ModelIndexA::new(cols))
        }
        ModelIndex::B(x) => {
            let mut l = x.left;
            if l.beta == Beta::IdPlus {
                l.beta = Beta::Id;
            }
            match l.alpha {
                0 => l = Column::empty(),
                1 => l.beta = Beta::Id,
                _ => {}
            }
            if l.beta == Beta::Fpf {
                l.gamma = match l.gamma {
                    Gamma::Mp => Gamma::Triv,
                    Gamma::Pm => Gamma::Sgn,
                    g => g,
                };
            }
            if l.alpha == 2 && l.beta == Beta::Pq(1, 1) {
                l.gamma = match l.gamma {
                    Gamma::Pm => Gamma::Triv,
                    Gamma::Mp => Gamma::Sgn,
                    g => g,
                };
            }
            ModelIndex::B(ModelIndexB::new(l, normalize_a_column(x.right)))
        }
        ModelIndex::D(x) => {
            let mut l = x.left;
            if l.beta == Beta::IdPlus {
                l.beta = Beta::Id;
            }
            match l.alpha {
                0 | 1 => l = Column::new(l.alpha, Beta::Id, Gamma::Triv),
                2 => l.beta = Beta::Id,
                _ => {}
            }
            ModelIndex::D(ModelIndexD::new(l, normalize_a_column(x.right), x.negated))
        }
    }
}

fn a3_class_of_d3(b: Beta) -> Option<Beta> {
    match b {
        Beta::Id => Some(Beta::Id),
        Beta::IdPlus => Some(Beta::IdPlus),
        Beta::Pq(1, 2) => Some(Beta::Fpf),
        Beta::Pq(2, 1) => Some(Beta::FpfPlus),
        _ => None,
    }
}

fn d3_class_of_a3(b: Beta) -> Option<Beta> {
    match b {
        Beta::Id => Some(Beta::Id),
        Beta::IdPlus => Some(Beta::IdPlus),
        Beta::Fpf => Some(Beta::Pq(1, 2)),
        Beta::FpfPlus => Some(Beta::Pq(2, 1)),
        _ => None,
    }
}

fn gamma_d2_signs(g: Gamma) -> (i8, i8) {
    match g {
        Gamma::Triv => (1, 1),
        Gamma::Sgn => (-1, -1),
        Gamma::Pm => (1, -1),
        Gamma::Mp => (-1, 1),
    }
}

fn gamma_from_d2_signs(s: (i8, i8)) -> Gamma {
    match s {
        (1, 1) => Gamma::Triv,
        (-1, -1) => Gamma::Sgn,
        (1, -1) => Gamma::Pm,
        _ => Gamma::Mp,
    }
}

fn sign_gamma(s: i8) -> Gamma {
    if s > 0 {
        Gamma::Triv
    } else {
        Gamma::Sgn
    }
}

fn gamma_sign(g: Gamma) -> i8 {
    if g == Gamma::Sgn {
        -1
    } else {
        1
    }
}

/// D₄ triality `T ↦ T^α` with `α⁻¹ = ↻`, on normalized indices.
fn triality(x: &ModelIndexD) -> Result<ModelIndexD> {
    let bad = || CoxError::InvalidIndex(format!("triality undefined on {}", ModelIndex::D(*x)));
    let (l, r) = (x.left, x.right);
    Ok(match (l.alpha, x.alpha1()) {
        (4, 0) => {
            let beta = match l.beta {
                Beta::Id => Beta::Id,
                Beta::Pq(2, 2) => Beta::Fpf,
                Beta::Fpf => Beta::FpfDiamond,
                Beta::FpfDiamond => Beta::Pq(2, 2),
                Beta::Pq(p, q) => Beta::Tri(p, q, Arrow::Cw),
                Beta::Tri(p, q, Arrow::Cw) => Beta::Tri(p, q, Arrow::Ccw),
                Beta::Tri(p, q, Arrow::Ccw) => Beta::Pq(p, q),
                _ => return Err(bad()),
            };
            ModelIndexD::new(Column::new(4, beta, l.gamma), r, false)
        }
        (2, 2) => {
            let (a, b) = gamma_d2_signs(l.gamma);
            let c = gamma_sign(r.gamma);
            // (σ(s₋₁), σ(s₁), σ(s₃)) ↦ (σ(s₃), σ(s₋₁), σ(s₁))
            ModelIndexD::new(
                Column::new(2, Beta::Id, gamma_from_d2_signs((c, a))),
                Column::new(2, Beta::Id, sign_gamma(b)),
                false,
            )
        }
        (3, 1) => {
            let beta = a3_class_of_d3(l.beta).ok_or_else(bad)?;
            ModelIndexD::new(Column::empty(), Column::new(4, beta, l.gamma), false)
        }
        (0, 4) => ModelIndexD::new(Column::empty(), r, true),
        (0, -4) => {
            let beta = d3_class_of_a3(r.beta).ok_or_else(bad)?;
            ModelIndexD::new(
                Column::new(3, beta, r.gamma),
                Column::new(1, Beta::Id, Gamma::Triv),
                false,
            )
        }
        _ => return Err(bad()),
    })
}

/// `s₀ ↔ s₁` on normalized B₂ indices.
fn swap_b2(x: &ModelIndexB) -> Result<ModelIndexB> {
    let bad = || CoxError::InvalidIndex(format!("B2 swap undefined on {}", ModelIndex::B(*x)));
    let (l, r) = (x.left, x.right);
    Ok(match (l.alpha, r.alpha) {
        (2, 0) => {
            let beta = match l.beta {
                Beta::Id => Beta::Id,
                Beta::Fpf => Beta::Pq(1, 1),
                Beta::Pq(1, 1) => Beta::Fpf,
                _ => return Err(bad()),
            };
            ModelIndexB::new(Column::new(2, beta, l.gamma.diamond()), r)
        }
        (1, 1) => ModelIndexB::new(Column::empty(), Column::new(2, Beta::Id, l.gamma)),
        (0, 2) => ModelIndexB::new(
            Column::new(1, Beta::Id, r.gamma),
            Column::new(1, Beta::Id, Gamma::Triv),
        ),
        _ => return Err(bad()),
    })
}

pub fn transform(idx: &ModelIndex, kind: Transform) -> Result<ModelIndex> {
    let bad = || CoxError::TypeMismatch(format!("transform {kind:?} not applicable to {idx}"));
    Ok(match (kind, idx) {
        (Transform::Normalize, _) => normalize(idx),
        (Transform::Bar, ModelIndex::A(x)) => ModelIndex::A(ModelIndexA::new(
            x.columns.iter().map(|c| Column::new(c.alpha, c.beta, c.gamma.bar())).collect(),
        )),
        (Transform::Bar, ModelIndex::B(x)) => {
            let mut y = *x;
            y.left.gamma = y.left.gamma.bar();
            y.right.gamma = y.right.gamma.bar();
            ModelIndex::B(y)
        }
        (Transform::Bar, ModelIndex::D(x)) => {
            let mut y = *x;
            y.left.gamma = y.left.gamma.bar();
            y.right.gamma = y.right.gamma.bar();
            ModelIndex::D(y)
        }
        (Transform::Star, ModelIndex::A(x)) => {
            ModelIndex::A(ModelIndexA::new(x.columns.iter().rev().copied().collect()))
        }
        (Transform::Dual, ModelIndex::A(x)) => ModelIndex::A(ModelIndexA::new(
            x.columns
                .iter()
                .rev()
                .map(|c| Column::new(c.alpha, dual_a_beta(c.beta), c.gamma))
                .collect(),
        )),
        (Transform::Dual, ModelIndex::B(x)) => ModelIndex::B(ModelIndexB::new(
            Column::new(x.left.alpha, dual_b_left(x.left.beta), x.left.gamma),
            Column::new(x.right.alpha, dual_a_beta(x.right.beta), x.right.gamma),
        )),
        (Transform::Dual, ModelIndex::D(x)) => {
            let n = x.rank();
            let odd = n % 2 == 1;
            let negated = if odd && x.right.alpha == n { !x.negated } else { x.negated };
            let g0 = if odd { x.left.gamma.diamond() } else { x.left.gamma };
            ModelIndex::D(ModelIndexD::new(
                Column::new(x.left.alpha, dual_d_left(x.left.beta, x.left.alpha, n), g0),
                Column::new(x.right.alpha, dual_a_beta(x.right.beta), x.right.gamma),
                negated,
            ))
        }
        (Transform::Diamond, ModelIndex::D(x)) => {
            let n = x.rank();
            let negated = if x.right.alpha == n { !x.negated } else { x.negated };
            ModelIndex::D(ModelIndexD::new(
                Column::new(x.left.alpha, diamond_d_left(x.left.beta), x.left.gamma.diamond()),
                x.right,
                negated,
            ))
        }
        (Transform::Triality, ModelIndex::D(x)) if x.rank() == 4 => {
            match normalize(idx) {
                ModelIndex::D(y) => ModelIndex::D(triality(&y)?),
                _ => unreachable!(),
            }
        }
        (Transform::SwapB2, ModelIndex::B(x)) if x.rank() == 2 => match normalize(idx) {
            ModelIndex::B(y) => ModelIndex::B(swap_b2(&y)?),
            _ => unreachable!(),
        },
        _ => return Err(bad()),
    })
}

/// Generators of the orbit relation, applied to normalized indices.
pub fn generators(ty: WeylType, n: u32, rel: EquivalenceRelation) -> Vec<Transform> {
    let mut g = vec![Transform::Dual];
    match ty {
        WeylType::A => g.push(Transform::Star),
        WeylType::B => {}
        WeylType::D => {
            if n % 2 == 1 {
                g.push(Transform::Diamond);
            }
        }
    }
    if rel == EquivalenceRelation::Full {
        g.push(Transform::Bar);
        match ty {
            WeylType::B if n == 2 => g.push(Transform::SwapB2),
            WeylType::D => {
                if n % 2 == 0 {
                    g.push(Transform::Diamond);
                }
                if n == 4 {
                    g.push(Transform::Triality);
                }
            }
            _ => {}
        }
    }
    g
}

/// All normalized indices reachable from `idx` under the relation's generators.
pub fn orbit(idx: &ModelIndex, rel: EquivalenceRelation) -> Result<BTreeSet<ModelIndex>> {
    ensure_valid(idx)?;
    let gens = generators(idx.weyl_type(), idx.rank(), rel);
    let start = normalize(idx);
    let mut seen = BTreeSet::new();
    seen.insert(start.clone());
    let mut queue = VecDeque::from([start]);
    while let Some(x) = queue.pop_front() {
        for &g in &gens {
            let y = normalize(&transform(&x, g)?);
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    Ok(seen)
}

type CanonMemo = RwLock<HashMap<(ModelIndex, EquivalenceRelation), ModelIndex>>;

fn canon_memo() -> &'static CanonMemo {
    static MEMO: OnceLock<CanonMemo> = OnceLock::new();
    MEMO.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Least element of the orbit.
pub fn canonical_form(idx: &ModelIndex, rel: EquivalenceRelation) -> Result<ModelIndex> {
    let key = (idx.clone(), rel);
    if let Some(v) = canon_memo().read().expect("memo poisoned").get(&key) {
        return Ok(v.clone());
    }
    let least = orbit(idx, rel)?.into_iter().next().expect("orbit contains idx");
    canon_memo().write().expect("memo poisoned").insert(key, least.clone());
    Ok(least)
}

// ------------------------------------------------------------- projections

fn a_gamma_left(g: Gamma) -> Option<Gamma> {
    match g {
        Gamma::Triv => Some(Gamma::Triv),
        Gamma::Pm => Some(Gamma::Sgn),
        _ => None,
    }
}

fn a_gamma_right(g: Gamma) -> Option<Gamma> {
    match g {
        Gamma::Mp => Some(Gamma::Triv),
        Gamma::Sgn => Some(Gamma::Sgn),
        _ => None,
    }
}

fn finish_projection(mut cols: Vec<Column>, alpha1: u32) -> ModelIndexA {
    if alpha1 == 0 {
        cols.pop();
    }
    ModelIndexA::new(cols)
}

fn project_b(x: &ModelIndexB, left: bool) -> Option<ModelIndexA> {
    let (l, r) = (x.left, x.right);
    if l.alpha == 0 {
        return Some(ModelIndexA::new(vec![r]));
    }
    let cols = match l.beta {
        Beta::Fpf => vec![l, r],
        Beta::Id | Beta::IdPlus | Beta::Pq(..) => {
            let g = if left { a_gamma_left(l.gamma) } else { a_gamma_right(l.gamma) }?;
            match l.beta {
                Beta::Pq(p, q) => vec![
                    Column::new(p, Beta::Id, g),
                    Column::new(q, Beta::Id, g),
                    r,
                ],
                b => vec![Column::new(l.alpha, b, g), r],
            }
        }
        _ => return None,
    };
    Some(finish_projection(cols, r.alpha))
}

/// Index-level `π_L`; `None` stands for the zero output.
pub fn pi_l(x: &ModelIndexB) -> Option<ModelIndexA> {
    project_b(x, true)
}

pub fn pi_r(x: &ModelIndexB) -> Option<ModelIndexA> {
    project_b(x, false)
}

/// Index-level `π_D`.
pub fn pi_d(x: &ModelIndexD) -> Option<ModelIndexA> {
    let (l, r) = (x.left, x.right);
    if l.alpha == 0 {
        return Some(ModelIndexA::new(vec![r]));
    }
    if !l.gamma.is_ordinary() {
        return None;
    }
    let cols = match l.beta {
        Beta::Fpf | Beta::FpfDiamond => vec![Column::new(l.alpha, Beta::Fpf, l.gamma), r],
        Beta::Pq(p, q) => vec![
            Column::new(p, Beta::Id, l.gamma),
            Column::new(q, Beta::Id, l.gamma),
            r,
        ],
        _ => vec![Column::new(l.alpha, Beta::Id, l.gamma), r],
    };
    Some(finish_projection(cols, r.alpha))
}

// --------------------------------------------------------------- characters

pub fn character_of_index(idx: &ModelIndex, policy: DegenSplitPolicy) -> Result<VirtualCharacter> {
    ensure_valid(idx)?;
    let n = idx.rank();
    match idx {
        ModelIndex::A(x) => {
            let mut acc: Option<VirtualCharacter> = None;
            for c in x.columns.iter().filter(|c| c.alpha > 0) {
                let chi = induction::column_char(WeylType::A, c)?;
                acc = Some(match acc {
                    None => chi,
                    Some(a) => induction::bullet(WeylType::A, &a, &chi)?,
                });
            }
            Ok(acc.unwrap_or_else(|| VirtualCharacter::zero(WeylType::A, n)))
        }
        ModelIndex::B(x) => {
            let left = (x.left.alpha > 0).then(|| induction::column_char(WeylType::B, &x.left)).transpose()?;
            let right = (x.right.alpha > 0)
                .then(|| induction::column_char(WeylType::A, &x.right).and_then(|a| induction::ind_a_to_b(&a)))
                .transpose()?;
            match (left, right) {
                (Some(l), Some(r)) => induction::bullet(WeylType::B, &l, &r),
                (Some(l), None) => Ok(l),
                (None, Some(r)) => Ok(r),
                (None, None) => Err(CoxError::InvalidIndex(format!("{idx}: empty"))),
            }
        }
        ModelIndex::D(x) => {
            let left = (x.left.alpha > 0).then(|| induction::column_char(WeylType::D, &x.left)).transpose()?;
            let side = if x.negated { Side::Minus } else { Side::Plus };
            let right = (x.right.alpha > 0)
                .then(|| {
                    induction::column_char(WeylType::A, &x.right)
                        .and_then(|a| induction::ind_a_to_d(&a, side, policy))
                })
                .transpose()?;
            match (left, right) {
                (Some(l), Some(r)) => induction::bullet_d_coarse(&l, &r),
                (Some(l), None) => Ok(l),
                (None, Some(r)) => Ok(r),
                (None, None) => Err(CoxError::InvalidIndex(format!("{idx}: empty"))),
            }
        }
    }
}

// -------------------------------------------------------------- enumeration

/// An enumerated index with its character and multiplicity-free status.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndexEntry {
    pub index: ModelIndex,
    pub character: VirtualCharacter,
    pub mf: MfStatus,
}

fn a_column_choices(alpha: u32) -> Vec<Column> {
    let mut betas = vec![Beta::Id, Beta::IdPlus];
    if alpha % 2 == 0 {
        betas.extend([Beta::Fpf, Beta::FpfPlus]);
    }
    let mut out = Vec::new();
    for b in betas {
        for g in [Gamma::Triv, Gamma::Sgn] {
            out.push(Column::new(alpha, b, g));
        }
    }
    out
}

fn right_column_choices(alpha: u32) -> Vec<Column> {
    if alpha == 0 {
        return vec![Column::empty()];
    }
    let mut out = a_column_choices(alpha);
    if alpha < 4 {
        out.retain(|c| matches!(c.beta, Beta::Id | Beta::IdPlus));
    }
    out
}

fn compositions(n: u32, max_parts: usize) -> Vec<Vec<u32>> {
    fn rec(rest: u32, max_parts: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        if cur.len() == max_parts {
            return;
        }
        for a in 1..=rest {
            cur.push(a);
            rec(rest - a, max_parts, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, max_parts, &mut Vec::new(), &mut out);
    out
}

fn all_a_indices(n: u32, max_cols: usize) -> Vec<ModelIndex> {
    let mut out = Vec::new();
    for comp in compositions(n, max_cols) {
        let mut partial: Vec<Vec<Column>> = vec![Vec::new()];
        for &a in &comp {
            let choices = a_column_choices(a);
            partial = partial
                .into_iter()
                .flat_map(|p| {
                    choices.iter().map(move |c| {
                        let mut q = p.clone();
                        q.push(*c);
                        q
                    })
                })
                .collect();
        }
        out.extend(partial.into_iter().map(|c| ModelIndex::A(ModelIndexA::new(c))));
    }
    out
}

fn b_left_choices(alpha0: u32) -> Vec<Column> {
    if alpha0 == 0 {
        return vec![Column::empty()];
    }
    let mut betas = vec![Beta::Id, Beta::IdPlus];
    if alpha0 % 2 == 0 {
        betas.push(Beta::Fpf);
    }
    for p in 1..alpha0 {
        betas.push(Beta::Pq(p, alpha0 - p));
    }
    let mut out = Vec::new();
    for b in betas {
        let gammas: &[Gamma] = if alpha0 <= 1 || b == Beta::Fpf {
            &[Gamma::Triv, Gamma::Sgn]
        } else {
            &[Gamma::Triv, Gamma::Sgn, Gamma::Pm, Gamma::Mp]
        };
        for &g in gammas {
            out.push(Column::new(alpha0, b, g));
        }
    }
    out
}

fn d_left_choices(alpha0: u32) -> Vec<Column> {
    if alpha0 == 0 {
        return vec![Column::empty()];
    }
    let mut betas = vec![Beta::Id, Beta::IdPlus];
    if alpha0 % 2 == 0 {
        betas.extend([Beta::Fpf, Beta::FpfDiamond]);
    }
    if alpha0 > 2 {
        for p in 1..alpha0 {
            betas.push(Beta::Pq(p, alpha0 - p));
        }
    }
    if alpha0 == 4 {
        for (p, q) in [(3, 1), (1, 3)] {
            for a in [Arrow::Cw, Arrow::Ccw] {
                betas.push(Beta::Tri(p, q, a));
            }
        }
    }
    let gammas: &[Gamma] = if alpha0 == 2 {
        &[Gamma::Triv, Gamma::Sgn, Gamma::Pm, Gamma::Mp]
    } else {
        &[Gamma::Triv, Gamma::Sgn]
    };
    let mut out = Vec::new();
    for b in betas {
        for &g in gammas {
            out.push(Column::new(alpha0, b, g));
        }
    }
    out
}

/// Every valid index of the given type and rank (up to the column cap in type A).
pub fn all_indices(ty: WeylType, n: u32, max_a_cols: usize) -> Vec<ModelIndex> {
    match ty {
        WeylType::A => all_a_indices(n, max_a_cols),
        WeylType::B => {
            let mut out = Vec::new();
            for a0 in 0..=n {
                for l in b_left_choices(a0) {
                    for r in right_column_choices(n - a0) {
                        out.push(ModelIndex::B(ModelIndexB::new(l, r)));
                    }
                }
            }
            out
        }
        WeylType::D => {
            let mut out = Vec::new();
            let mut alpha1: Vec<i64> = (0..=i64::from(n) - 2).collect();
            alpha1.push(i64::from(n));
            alpha1.push(-i64::from(n));
            for a1 in alpha1 {
                let a0 = n - a1.unsigned_abs() as u32;
                for l in d_left_choices(a0) {
                    for r in right_column_choices(a1.unsigned_abs() as u32) {
                        out.push(ModelIndex::D(ModelIndexD::new(l, r, a1 < 0)));
                    }
                }
            }
            out.retain(|i| i.is_valid());
            out
        }
    }
}

fn is_fpf_like(b: Beta) -> bool {
    matches!(b, Beta::Fpf | Beta::FpfPlus | Beta::FpfDiamond)
}

fn even_at_least_4(a: u32) -> bool {
    a >= 4 && a % 2 == 0
}

/// Exclusions proven by the non-multiplicity-free lemmas.
pub fn lemma_excludes(idx: &ModelIndex) -> bool {
    match idx {
        ModelIndex::A(x) => {
            let cols: Vec<&Column> = x.columns.iter().filter(|c| c.alpha > 0).collect();
            if cols.len() > 2 {
                return true;
            }
            if cols.len() == 2 {
                let (c1, c2) = (cols[0], cols[1]);
                let f1 = even_at_least_4(c1.alpha) && is_fpf_like(c1.beta);
                let f2 = even_at_least_4(c2.alpha) && is_fpf_like(c2.beta);
                let same = c1.gamma == c2.gamma;
                return (f1 && c2.alpha >= 2 && same) || (f2 && c1.alpha >= 2 && same) || (f1 && f2);
            }
            false
        }
        ModelIndex::B(x) => {
            let (l, r) = (x.left, x.right);
            (even_at_least_4(r.alpha) && is_fpf_like(r.beta))
                || (l.alpha >= 2
                    && l.alpha % 2 == 0
                    && l.beta == Beta::Fpf
                    && r.alpha >= 2
                    && l.gamma == r.gamma
                    && l.gamma.is_ordinary())
                || (matches!(l.beta, Beta::Pq(..)) && r.alpha > 0)
        }
        ModelIndex::D(x) => {
            let (l, r) = (x.left, x.right);
            (even_at_least_4(r.alpha) && is_fpf_like(r.beta))
                || (even_at_least_4(l.alpha)
                    && matches!(l.beta, Beta::Fpf | Beta::FpfDiamond)
                    && r.alpha >= 2
                    && l.gamma == r.gamma
                    && l.gamma.is_ordinary())
                || (matches!(l.beta, Beta::Pq(..)) && l.alpha >= 3 && r.alpha >= 1)
        }
    }
}

/// One representative per strong class. With `mf_only`, lemma-excluded
/// classes and classes with a non-multiplicity-free character are dropped;
/// unknown status is kept and flagged in the entry.
pub fn enumerate_indices(
    ty: WeylType,
    n: u32,
    mf_only: bool,
    policy: DegenSplitPolicy,
) -> Result<Vec<IndexEntry>> {
    if n == 0 || (ty != WeylType::A && n < 2) {
        return Err(CoxError::Domain(format!("rank {n} too small for type {ty}")));
    }
    let max_cols = if mf_only { 2 } else { n as usize };
    let mut reps = BTreeSet::new();
    for idx in all_indices(ty, n, max_cols) {
        let canon = canonical_form(&idx, EquivalenceRelation::Strong)?;
        reps.insert(canon);
    }
    let mut out = Vec::new();
    for index in reps {
        if mf_only && orbit(&index, EquivalenceRelation::Strong)?.iter().any(lemma_excludes) {
            continue;
        }
        let character = character_of_index(&index, policy)?;
        let mf = character.is_multiplicity_free()?;
        if mf_only && mf == MfStatus::False {
            continue;
        }
        out.push(IndexEntry { index, character, mf });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_roundtrip() {
        let s = r#"{"type":"B","alpha":[2,3],"beta":["fpf","id"],"gamma":["triv","sgn"]}"#;
        let idx: ModelIndex = s.parse().unwrap();
        assert_eq!(serde_json::to_string(&idx).unwrap(), s);
        let d = r#"{"type":"D","alpha":[4,1],"beta":[["tri",3,1,"cw"],"id"],"gamma":["triv","triv"]}"#;
        let idx: ModelIndex = d.parse().unwrap();
        assert!(idx.is_valid());
        assert_eq!(serde_json::to_string(&idx).unwrap(), d);
    }

    #[test]
    fn validation_messages() {
        let a = ModelIndex::A(ModelIndexA::new(vec![Column::new(3, Beta::Fpf, Gamma::Triv)]));
        assert!(validate(&a).iter().any(|v| v.contains("fpf with odd alpha")));
        let b = index_b((2, 2), (Beta::Fpf, Beta::Id), (Gamma::Pm, Gamma::Sgn));
        assert!(validate(&b).iter().any(|v| v.contains("gamma0 must be triv/sgn with beta0=fpf")));
    }

    #[test]
    fn spec_transforms() {
        let t = index_a2((2, 2), (Beta::Fpf, Beta::Id), (Gamma::Triv, Gamma::Sgn));
        assert_eq!(
            transform(&t, Transform::Bar).unwrap(),
            index_a2((2, 2), (Beta::Fpf, Beta::Id), (Gamma::Sgn, Gamma::Triv))
        );
        assert_eq!(
            transform(&t, Transform::Dual).unwrap(),
            index_a2((2, 2), (Beta::IdPlus, Beta::FpfPlus), (Gamma::Sgn, Gamma::Triv))
        );
        let d = index_d(4, 2, (Beta::Fpf, Beta::Id), (Gamma::Triv, Gamma::Sgn));
        let dd = transform(&d, Transform::Diamond).unwrap();
        assert_eq!(dd, index_d(4, 2, (Beta::FpfDiamond, Beta::Id), (Gamma::Triv, Gamma::Sgn)));
        let e = index_d(0, 5, (Beta::Id, Beta::Id), (Gamma::Triv, Gamma::Sgn));
        assert_eq!(
            transform(&e, Transform::Diamond).unwrap(),
            index_d(0, -5, (Beta::Id, Beta::Id), (Gamma::Triv, Gamma::Sgn))
        );
    }

    #[test]
    fn triality_has_order_three() {
        for idx in all_indices(WeylType::D, 4, 2) {
            let n0 = normalize(&idx);
            let mut x = n0.clone();
            for _ in 0..3 {
                x = transform(&x, Transform::Triality).unwrap();
            }
            assert_eq!(normalize(&x), n0, "{idx}");
        }
    }
}

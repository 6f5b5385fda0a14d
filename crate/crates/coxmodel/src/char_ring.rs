//! Virtual characters of `S_n`, `B_n` and `D_n` as sparse integer
//! combinations of irreducible labels.

use std::collections::BTreeMap;
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{CoxError, Result};
pub use crate::partitions::IrrLabel;
use crate::partitions::{
    bipartitions_of, partitions_of, unordered_bipartitions_of, BiPartition, DegenerateLabel,
    Partition, Sign, UnorderedBiPartition,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum WeylType {
    A,
    B,
    D,
}

impl fmt::Display for WeylType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Sparse integer combination of irreducible labels.
///
/// For type D at even rank, `unresolved` records, per core `ν`, the total
/// multiplicity of `[ν,+]` and `[ν,-]` whose split is not known. A core
/// never appears both in `unresolved` and among the degenerate keys of
/// `coeffs`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VirtualCharacter {
    ty: WeylType,
    rank: u32,
    coeffs: BTreeMap<IrrLabel, i64>,
    unresolved: BTreeMap<Partition, u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MfStatus {
    True,
    False,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TwistKind {
    Sgn,
    Diamond,
    BMinusPlus,
    BPlusMinus,
}

fn label_fits(ty: WeylType, rank: u32, label: &IrrLabel) -> bool {
    let kind = matches!(
        (ty, label),
        (WeylType::A, IrrLabel::A(_))
            | (WeylType::B, IrrLabel::B(_))
            | (WeylType::D, IrrLabel::DNondeg(_))
            | (WeylType::D, IrrLabel::DDegen(_))
    );
    kind && label.weight() == rank
}

impl VirtualCharacter {
    pub fn zero(ty: WeylType, rank: u32) -> Self {
        VirtualCharacter { ty, rank, coeffs: BTreeMap::new(), unresolved: BTreeMap::new() }
    }

    pub fn from_label(ty: WeylType, rank: u32, label: IrrLabel) -> Result<Self> {
        let mut chi = Self::zero(ty, rank);
        chi.add_label(label, 1)?;
        Ok(chi)
    }

    /// Sum of the given labels, each with coefficient one.
    pub fn from_labels<I: IntoIterator<Item = IrrLabel>>(ty: WeylType, rank: u32, labels: I) -> Result<Self> {
        let mut chi = Self::zero(ty, rank);
        for l in labels {
            chi.add_label(l, 1)?;
        }
        Ok(chi)
    }

    pub fn weyl_type(&self) -> WeylType {
        self.ty
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn coeffs(&self) -> &BTreeMap<IrrLabel, i64> {
        &self.coeffs
    }

    pub fn unresolved(&self) -> &BTreeMap<Partition, u64> {
        &self.unresolved
    }

    pub fn has_unresolved(&self) -> bool {
        !self.unresolved.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty() && self.unresolved.is_empty()
    }

    pub fn coeff(&self, label: &IrrLabel) -> i64 {
        self.coeffs.get(label).copied().unwrap_or(0)
    }

    pub fn add_label(&mut self, label: IrrLabel, c: i64) -> Result<()> {
        if !label_fits(self.ty, self.rank, &label) {
            return Err(CoxError::TypeMismatch(format!(
                "label {label} does not belong to {}{}",
                self.ty, self.rank
            )));
        }
        if c == 0 {
            return Ok(());
        }
        if let IrrLabel::DDegen(d) = &label {
            if let Some(m) = self.unresolved.get_mut(&d.core) {
                let total = (*m as i64).checked_add(c).ok_or(CoxError::Overflow("add_label"))?;
                if total < 0 {
                    return Err(CoxError::Domain(format!(
                        "negative mass at unresolved core {}",
                        d.core
                    )));
                }
                *m = total as u64;
                if *m == 0 {
                    self.unresolved.remove(&d.core);
                }
                return Ok(());
            }
        }
        let v = self.coeff(&label).checked_add(c).ok_or(CoxError::Overflow("add_label"))?;
        if v == 0 {
            self.coeffs.remove(&label);
        } else {
            self.coeffs.insert(label, v);
        }
        Ok(())
    }

    /// Adds `mass` copies of `[core,±]` with unknown sign split. Resolved
    /// degenerate coefficients at the same core are folded into the mass.
    pub fn add_unresolved(&mut self, core: Partition, mass: u64) -> Result<()> {
        if self.ty != WeylType::D || self.rank % 2 != 0 || 2 * core.weight() != self.rank {
            return Err(CoxError::TypeMismatch(format!(
                "unresolved core {core} does not fit {}{}",
                self.ty, self.rank
            )));
        }
        if mass == 0 {
            return Ok(());
        }
        let mut total = mass;
        for s in [Sign::Plus, Sign::Minus] {
            let key = IrrLabel::DDegen(DegenerateLabel::new(core.clone(), s));
            if let Some(c) = self.coeffs.remove(&key) {
                if c < 0 {
                    return Err(CoxError::Domain(format!(
                        "cannot merge negative {key} into unresolved mass"
                    )));
                }
                total += c as u64;
            }
        }
        let e = self.unresolved.entry(core).or_insert(0);
        *e = e.checked_add(total).ok_or(CoxError::Overflow("add_unresolved"))?;
        Ok(())
    }

    fn same_space(&self, other: &Self) -> Result<()> {
        if self.ty != other.ty || self.rank != other.rank {
            return Err(CoxError::TypeMismatch(format!(
                "{}{} vs {}{}",
                self.ty, self.rank, other.ty, other.rank
            )));
        }
        Ok(())
    }

    pub fn add(&mut self, other: &Self) -> Result<()> {
        self.add_scaled(other, 1)
    }

    pub fn add_scaled(&mut self, other: &Self, k: i64) -> Result<()> {
        self.same_space(other)?;
        for (l, c) in &other.coeffs {
            let v = c.checked_mul(k).ok_or(CoxError::Overflow("add_scaled"))?;
            self.add_label(l.clone(), v)?;
        }
        if k < 0 && !other.unresolved.is_empty() {
            return Err(CoxError::Unresolved("subtraction of unresolved mass".into()));
        }
        for (core, m) in &other.unresolved {
            let v = m.checked_mul(k as u64).ok_or(CoxError::Overflow("add_scaled"))?;
            self.add_unresolved(core.clone(), v)?;
        }
        Ok(())
    }

    pub fn sum<'a, I: IntoIterator<Item = &'a VirtualCharacter>>(ty: WeylType, rank: u32, items: I) -> Result<Self> {
        let mut acc = Self::zero(ty, rank);
        for x in items {
            acc.add(x)?;
        }
        Ok(acc)
    }

    /// Applies a label map to every constituent.
    pub fn map_labels(&self, f: impl Fn(&IrrLabel) -> IrrLabel, core: impl Fn(&Partition) -> Partition) -> Result<Self> {
        let mut out = Self::zero(self.ty, self.rank);
        for (l, c) in &self.coeffs {
            out.add_label(f(l), *c)?;
        }
        for (k, m) in &self.unresolved {
            out.add_unresolved(core(k), *m)?;
        }
        Ok(out)
    }

    /// Total degree; unresolved mass contributes its common degree.
    pub fn degree(&self) -> Result<i64> {
        let mut total: i64 = 0;
        for (l, c) in &self.coeffs {
            let d = i64::try_from(degree(l)?).map_err(|_| CoxError::Overflow("degree"))?;
            total = total
                .checked_add(d.checked_mul(*c).ok_or(CoxError::Overflow("degree"))?)
                .ok_or(CoxError::Overflow("degree"))?;
        }
        for (core, m) in &self.unresolved {
            let d = degree(&IrrLabel::DDegen(DegenerateLabel::new(core.clone(), Sign::Plus)))?;
            let v = d.checked_mul(*m).ok_or(CoxError::Overflow("degree"))?;
            total = total
                .checked_add(i64::try_from(v).map_err(|_| CoxError::Overflow("degree"))?)
                .ok_or(CoxError::Overflow("degree"))?;
        }
        Ok(total)
    }

    /// Labels with nonzero coefficient.
    pub fn support(&self) -> impl Iterator<Item = &IrrLabel> {
        self.coeffs.iter().filter(|(_, c)| **c != 0).map(|(l, _)| l)
    }

    /// `Σ c` over resolved labels plus unresolved mass.
    pub fn mass(&self) -> i64 {
        self.coeffs.values().sum::<i64>() + self.unresolved.values().sum::<u64>() as i64
    }

    /// Bounds on `Σ c²` (exact when nothing is unresolved).
    pub fn square_norm_bounds(&self) -> (i64, i64) {
        let base: i64 = self.coeffs.values().map(|c| c * c).sum();
        let lo: i64 = self.unresolved.values().map(|&m| ((m * m + 1) / 2) as i64).sum();
        let hi: i64 = self.unresolved.values().map(|&m| (m * m) as i64).sum();
        (base + lo, base + hi)
    }

    pub fn is_multiplicity_free(&self) -> Result<MfStatus> {
        is_multiplicity_free(self)
    }

    pub fn twist(&self, kind: TwistKind) -> Result<Self> {
        twist(self, kind)
    }

    /// Replaces every unresolved core by the given split `(plus, minus)`.
    pub fn resolve(&self, splits: &BTreeMap<Partition, (u64, u64)>) -> Result<Self> {
        let mut out = self.clone();
        for (core, &m) in &self.unresolved {
            let &(a, b) = splits
                .get(core)
                .ok_or_else(|| CoxError::Unresolved(format!("no split for core {core}")))?;
            if a + b != m {
                return Err(CoxError::Domain(format!("split {a}+{b} != mass {m} at {core}")));
            }
            out.unresolved.remove(core);
            out.add_label(IrrLabel::DDegen(DegenerateLabel::new(core.clone(), Sign::Plus)), a as i64)?;
            out.add_label(IrrLabel::DDegen(DegenerateLabel::new(core.clone(), Sign::Minus)), b as i64)?;
        }
        Ok(out)
    }
}

impl fmt::Display for VirtualCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (l, c) in &self.coeffs {
            let sep = if first { "" } else { " + " };
            first = false;
            if *c == 1 {
                write!(f, "{sep}χ^{l}")?;
            } else {
                write!(f, "{sep}{c}·χ^{l}")?;
            }
        }
        for (core, m) in &self.unresolved {
            let sep = if first { "" } else { " + " };
            first = false;
            write!(f, "{sep}{m}·χ^[{core},?]")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct CharacterJson {
    #[serde(rename = "type")]
    ty: WeylType,
    rank: u32,
    coeffs: Vec<(IrrLabel, i64)>,
    #[serde(default)]
    unresolved: Vec<(Partition, u64)>,
}

impl Serialize for VirtualCharacter {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CharacterJson {
            ty: self.ty,
            rank: self.rank,
            coeffs: self.coeffs.iter().map(|(l, c)| (l.clone(), *c)).collect(),
            unresolved: self.unresolved.iter().map(|(l, c)| (l.clone(), *c)).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for VirtualCharacter {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = CharacterJson::deserialize(d)?;
        let mut chi = VirtualCharacter::zero(raw.ty, raw.rank);
        for (l, c) in raw.coeffs {
            chi.add_label(l, c).map_err(D::Error::custom)?;
        }
        for (k, m) in raw.unresolved {
            chi.add_unresolved(k, m).map_err(D::Error::custom)?;
        }
        Ok(chi)
    }
}

/// Every irreducible label of the given universe once, in canonical order.
pub fn irr_universe(ty: WeylType, n: u32) -> Vec<IrrLabel> {
    match ty {
        WeylType::A => partitions_of(n).into_iter().map(IrrLabel::A).collect(),
        WeylType::B => bipartitions_of(n).into_iter().map(IrrLabel::B).collect(),
        WeylType::D => {
            let mut out: Vec<IrrLabel> =
                unordered_bipartitions_of(n).into_iter().map(IrrLabel::DNondeg).collect();
            if n % 2 == 0 {
                for core in partitions_of(n / 2) {
                    for s in [Sign::Plus, Sign::Minus] {
                        out.push(IrrLabel::DDegen(DegenerateLabel::new(core.clone(), s)));
                    }
                }
            }
            out
        }
    }
}

/// The sum of all irreducible characters, each once.
pub fn regular_model_character(ty: WeylType, n: u32) -> VirtualCharacter {
    VirtualCharacter::from_labels(ty, n, irr_universe(ty, n)).expect("universe labels fit")
}

pub fn binomial(n: u32, k: u32) -> Result<u64> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc
            .checked_mul(u64::from(n - i))
            .ok_or(CoxError::Overflow("binomial"))?
            / u64::from(i + 1);
    }
    Ok(acc)
}

/// Number of standard tableaux of shape `p`, by the hook-length formula.
pub fn partition_degree(p: &Partition) -> Result<u64> {
    let t = p.transpose();
    let mut hooks: Vec<u64> = Vec::with_capacity(p.weight() as usize);
    for (i, &row) in p.parts().iter().enumerate() {
        for j in 0..row as usize {
            let arm = u64::from(row) - j as u64 - 1;
            let leg = u64::from(t.part(j)) - i as u64 - 1;
            hooks.push(arm + leg + 1);
        }
    }
    // multiply 1..n and divide by hooks one at a time using gcd reduction
    let mut num: Vec<u64> = (1..=u64::from(p.weight())).collect();
    for h in hooks {
        let mut h = h;
        for v in num.iter_mut() {
            if h == 1 {
                break;
            }
            let g = num_integer::gcd(*v, h);
            *v /= g;
            h /= g;
        }
        debug_assert_eq!(h, 1);
    }
    num.into_iter()
        .try_fold(1u64, |acc, v| acc.checked_mul(v))
        .ok_or(CoxError::Overflow("partition_degree"))
}

fn bi_degree(a: &Partition, b: &Partition) -> Result<u64> {
    let n = a.weight() + b.weight();
    binomial(n, a.weight())?
        .checked_mul(partition_degree(a)?)
        .and_then(|x| partition_degree(b).ok().and_then(|d| x.checked_mul(d)))
        .ok_or(CoxError::Overflow("degree"))
}

pub fn degree(label: &IrrLabel) -> Result<u64> {
    match label {
        IrrLabel::A(p) => partition_degree(p),
        IrrLabel::B(b) => bi_degree(&b.first, &b.second),
        IrrLabel::DNondeg(u) => bi_degree(u.first(), u.second()),
        IrrLabel::DDegen(d) => Ok(bi_degree(&d.core, &d.core)? / 2),
    }
}

pub fn is_multiplicity_free(chi: &VirtualCharacter) -> Result<MfStatus> {
    if let Some((l, c)) = chi.coeffs.iter().find(|(_, c)| **c < 0) {
        return Err(CoxError::Domain(format!("negative coefficient {c} at {l}")));
    }
    if chi.coeffs.values().any(|&c| c >= 2) || chi.unresolved.values().any(|&m| m >= 3) {
        return Ok(MfStatus::False);
    }
    if chi.unresolved.values().any(|&m| m == 2) {
        return Ok(MfStatus::Unknown);
    }
    Ok(MfStatus::True)
}

/// The image of one label under a twist.
pub fn twist_label(ty: WeylType, rank: u32, label: &IrrLabel, kind: TwistKind) -> Result<IrrLabel> {
    let bad = || CoxError::TypeMismatch(format!("twist {kind:?} not defined on {ty}{rank}"));
    Ok(match (kind, label) {
        (TwistKind::Sgn, IrrLabel::A(p)) => IrrLabel::A(p.transpose()),
        (TwistKind::Sgn, IrrLabel::B(b)) => {
            IrrLabel::B(BiPartition::new(b.second.transpose(), b.first.transpose()))
        }
        (TwistKind::BMinusPlus, IrrLabel::B(b)) => IrrLabel::B(b.swap()),
        (TwistKind::BPlusMinus, IrrLabel::B(b)) => IrrLabel::B(b.transpose()),
        (TwistKind::Sgn, IrrLabel::DNondeg(u)) => IrrLabel::DNondeg(u.transpose()),
        (TwistKind::Sgn, IrrLabel::DDegen(d)) => {
            let sign = if (rank / 2) % 2 == 0 { d.sign } else { d.sign.flip() };
            IrrLabel::DDegen(DegenerateLabel::new(d.core.transpose(), sign))
        }
        (TwistKind::Diamond, IrrLabel::DNondeg(u)) => IrrLabel::DNondeg(u.clone()),
        (TwistKind::Diamond, IrrLabel::DDegen(d)) => {
            IrrLabel::DDegen(DegenerateLabel::new(d.core.clone(), d.sign.flip()))
        }
        _ => return Err(bad()),
    })
}

pub fn twist(chi: &VirtualCharacter, kind: TwistKind) -> Result<VirtualCharacter> {
    let ok = matches!(
        (chi.ty, kind),
        (_, TwistKind::Sgn)
            | (WeylType::B, TwistKind::BMinusPlus)
            | (WeylType::B, TwistKind::BPlusMinus)
            | (WeylType::D, TwistKind::Diamond)
    );
    if !ok {
        return Err(CoxError::TypeMismatch(format!("twist {kind:?} not defined on type {}", chi.ty)));
    }
    let mut out = VirtualCharacter::zero(chi.ty, chi.rank);
    for (l, c) in &chi.coeffs {
        out.add_label(twist_label(chi.ty, chi.rank, l, kind)?, *c)?;
    }
    for (core, m) in &chi.unresolved {
        let k = if kind == TwistKind::Sgn { core.transpose() } else { core.clone() };
        out.add_unresolved(k, *m)?;
    }
    Ok(out)
}

/// Shorthand constructors used throughout the formulas.
pub fn a_label(p: Partition) -> IrrLabel {
    IrrLabel::A(p)
}

pub fn b_label(first: Partition, second: Partition) -> IrrLabel {
    IrrLabel::B(BiPartition::new(first, second))
}

/// `{λ,μ}` for `λ ≠ μ`, or `[λ,sign]` is not produced here.
pub fn d_label(first: Partition, second: Partition) -> Result<IrrLabel> {
    Ok(IrrLabel::DNondeg(UnorderedBiPartition::new(first, second)?))
}

pub fn d_degen(core: Partition, sign: Sign) -> IrrLabel {
    IrrLabel::DDegen(DegenerateLabel::new(core, sign))
}

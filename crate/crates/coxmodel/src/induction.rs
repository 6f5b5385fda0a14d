//! Induction products, cross-type induction and restriction, projections and
//! single-column characters.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{OnceLock, RwLock};

use serde::{Deserialize, Serialize};

use crate::char_ring::{b_label, d_degen, d_label, VirtualCharacter, WeylType};
use crate::error::{CoxError, Result};
use crate::lr::{lr_coefficient, try_lr_expand};
use crate::model_index::{Arrow, Beta, Column, Gamma};
use crate::partitions::{enumerate, partitions_of, BiPartition, Family, IrrLabel, Partition, Sign};

/// How degenerate constituents of `Ind_{S_n}^{D_n}` are handled at even rank
/// when no closed form applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DegenSplitPolicy {
    /// Only the Pieri closed forms; anything else is an error.
    ExactClosedForm,
    /// Record the total mass `c^ν_{λλ}` per core.
    Unresolved,
    /// Resolve by evaluating the induced character in the oracle group,
    /// allowed up to rank `cap`.
    OracleAssisted { cap: u32 },
}

impl Default for DegenSplitPolicy {
    fn default() -> Self {
        DegenSplitPolicy::Unresolved
    }
}

/// `S_n` versus `S_{-n} = S_n^⋄` inside `D_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Plus,
    Minus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Projection {
    #[serde(rename = "piL")]
    PiL,
    #[serde(rename = "piR")]
    PiR,
    #[serde(rename = "piD")]
    PiD,
}

type Terms = Vec<(IrrLabel, u64)>;
type BulletMemo = RwLock<HashMap<(WeylType, IrrLabel, IrrLabel), Terms>>;

fn bullet_memo() -> &'static BulletMemo {
    static MEMO: OnceLock<BulletMemo> = OnceLock::new();
    MEMO.get_or_init(|| RwLock::new(HashMap::new()))
}

fn to_i64(v: u64, what: &'static str) -> Result<i64> {
    i64::try_from(v).map_err(|_| CoxError::Overflow(what))
}

fn c(lam: &Partition, mu: &Partition, nu: &Partition) -> u64 {
    lr_coefficient(lam, mu, nu)
}

/// Ordered lifts of a D label to B labels `(λ,μ)`.
fn lifts(l: &IrrLabel) -> Vec<(Partition, Partition)> {
    match l {
        IrrLabel::DNondeg(u) => vec![
            (u.first().clone(), u.second().clone()),
            (u.second().clone(), u.first().clone()),
        ],
        IrrLabel::DDegen(d) => vec![(d.core.clone(), d.core.clone())],
        _ => Vec::new(),
    }
}

/// Taylor's coefficient `d^Υ_{ΛΓ}` of `χ^Υ` in `χ^Λ •_D χ^Γ`.
pub fn taylor_coefficient(l: &IrrLabel, g: &IrrLabel, out: &IrrLabel) -> Result<u64> {
    use IrrLabel::{DDegen, DNondeg};
    let v = match (l, g, out) {
        (DNondeg(a), DNondeg(b), DNondeg(n)) => {
            let (l1, l2, m1, m2, n1, n2) = (a.first(), a.second(), b.first(), b.second(), n.first(), n.second());
            c(l1, m1, n1) * c(l2, m2, n2)
                + c(l1, m2, n1) * c(l2, m1, n2)
                + c(l2, m1, n1) * c(l1, m2, n2)
                + c(l2, m2, n1) * c(l1, m1, n2)
        }
        (DDegen(a), DNondeg(b), DNondeg(n)) | (DNondeg(b), DDegen(a), DNondeg(n)) => {
            let lam = &a.core;
            c(lam, b.first(), n.first()) * c(lam, b.second(), n.second())
                + c(lam, b.second(), n.first()) * c(lam, b.first(), n.second())
        }
        (DDegen(a), DDegen(b), DNondeg(n)) => c(&a.core, &b.core, n.first()) * c(&a.core, &b.core, n.second()),
        (DNondeg(a), DNondeg(b), DDegen(n)) => {
            let nu = &n.core;
            c(a.first(), b.first(), nu) * c(a.second(), b.second(), nu)
                + c(a.first(), b.second(), nu) * c(a.second(), b.first(), nu)
        }
        (DDegen(a), DNondeg(b), DDegen(n)) | (DNondeg(b), DDegen(a), DDegen(n)) => {
            c(&a.core, b.first(), &n.core) * c(&a.core, b.second(), &n.core)
        }
        (DDegen(a), DDegen(b), DDegen(n)) => {
            let k = c(&a.core, &b.core, &n.core) as i64;
            let eps = a.sign.value() * b.sign.value() * n.sign.value();
            let twice = k * (k + eps);
            assert!(twice >= 0 && twice % 2 == 0, "Taylor case (f) not a nonnegative integer");
            (twice / 2) as u64
        }
        _ => return Err(CoxError::TypeMismatch("taylor_coefficient expects D labels".into())),
    };
    Ok(v)
}

fn label_bullet(ty: WeylType, l: &IrrLabel, g: &IrrLabel) -> Result<Terms> {
    let key = (ty, l.clone(), g.clone());
    if let Some(v) = bullet_memo().read().expect("memo poisoned").get(&key) {
        return Ok(v.clone());
    }
    let terms: Terms = match (ty, l, g) {
        (WeylType::A, IrrLabel::A(a), IrrLabel::A(b)) => {
            try_lr_expand(a, b)?.into_iter().map(|(nu, k)| (IrrLabel::A(nu), k)).collect()
        }
        (WeylType::B, IrrLabel::B(a), IrrLabel::B(b)) => {
            let left = try_lr_expand(&a.first, &b.first)?;
            let right = try_lr_expand(&a.second, &b.second)?;
            let mut out = Vec::new();
            for (n1, k1) in &left {
                for (n2, k2) in &right {
                    out.push((b_label(n1.clone(), n2.clone()), k1 * k2));
                }
            }
            out
        }
        (WeylType::D, _, _) => {
            let mut outs: BTreeSet<IrrLabel> = BTreeSet::new();
            for (a1, a2) in lifts(l) {
                for (b1, b2) in lifts(g) {
                    for n1 in try_lr_expand(&a1, &b1)?.keys() {
                        for n2 in try_lr_expand(&a2, &b2)?.keys() {
                            if n1 == n2 {
                                outs.insert(d_degen(n1.clone(), Sign::Plus));
                                outs.insert(d_degen(n1.clone(), Sign::Minus));
                            } else {
                                outs.insert(d_label(n1.clone(), n2.clone())?);
                            }
                        }
                    }
                }
            }
            let mut out = Vec::new();
            for o in outs {
                let k = taylor_coefficient(l, g, &o)?;
                if k > 0 {
                    out.push((o, k));
                }
            }
            out
        }
        _ => return Err(CoxError::TypeMismatch(format!("bullet {ty}: labels {l}, {g}"))),
    };
    bullet_memo().write().expect("memo poisoned").insert(key, terms.clone());
    Ok(terms)
}

fn check_same_type(ty: WeylType, f: &VirtualCharacter, g: &VirtualCharacter) -> Result<()> {
    if f.weyl_type() != ty || g.weyl_type() != ty {
        return Err(CoxError::TypeMismatch(format!(
            "bullet {ty} on {} and {} characters",
            f.weyl_type(),
            g.weyl_type()
        )));
    }
    Ok(())
}

/// `f • g`: induction from the product of parabolic subgroups.
pub fn bullet(ty: WeylType, f: &VirtualCharacter, g: &VirtualCharacter) -> Result<VirtualCharacter> {
    check_same_type(ty, f, g)?;
    if f.has_unresolved() || g.has_unresolved() {
        return Err(CoxError::Unresolved("•_D on characters with unresolved degenerate mass".into()));
    }
    let rank = f.rank() + g.rank();
    let mut out = VirtualCharacter::zero(ty, rank);
    for (a, ka) in f.coeffs() {
        for (b, kb) in g.coeffs() {
            let k = ka.checked_mul(*kb).ok_or(CoxError::Overflow("bullet"))?;
            for (o, m) in label_bullet(ty, a, b)? {
                let v = to_i64(m, "bullet")?.checked_mul(k).ok_or(CoxError::Overflow("bullet"))?;
                out.add_label(o, v)?;
            }
        }
    }
    Ok(out)
}

/// One constituent of a D character: a resolved label or `m` copies of
/// `[core,±]` with unknown split.
#[derive(Clone)]
enum DPart {
    Label(IrrLabel, i64),
    Mass(Partition, u64),
}

fn d_parts(f: &VirtualCharacter) -> Vec<DPart> {
    let mut v: Vec<DPart> = f.coeffs().iter().map(|(l, k)| DPart::Label(l.clone(), *k)).collect();
    v.extend(f.unresolved().iter().map(|(c, m)| DPart::Mass(c.clone(), *m)));
    v
}

/// Possible sign assignments of a part: weighted labels per choice.
fn part_choices(p: &DPart) -> Vec<Vec<(IrrLabel, i64)>> {
    match p {
        DPart::Label(l, k) => vec![vec![(l.clone(), *k)]],
        DPart::Mass(core, m) => (0..=*m)
            .map(|a| {
                vec![
                    (d_degen(core.clone(), Sign::Plus), a as i64),
                    (d_degen(core.clone(), Sign::Minus), (*m - a) as i64),
                ]
            })
            .collect(),
    }
}

/// `•_D` accepting unresolved mass. Each pair of parts is expanded under
/// every admissible split of its unresolved factors; cores on which the
/// outcomes disagree become unresolved mass. The result is exact when no
/// disagreement occurs and otherwise records the sign-free totals.
pub fn bullet_d_coarse(f: &VirtualCharacter, g: &VirtualCharacter) -> Result<VirtualCharacter> {
    check_same_type(WeylType::D, f, g)?;
    if !f.has_unresolved() && !g.has_unresolved() {
        return bullet(WeylType::D, f, g);
    }
    let rank = f.rank() + g.rank();
    let mut out = VirtualCharacter::zero(WeylType::D, rank);
    let mut masses: BTreeMap<Partition, u64> = BTreeMap::new();
    for pa in d_parts(f) {
        for pb in d_parts(g) {
            let mut outcomes: Vec<BTreeMap<IrrLabel, i64>> = Vec::new();
            for ca in part_choices(&pa) {
                for cb in part_choices(&pb) {
                    let mut acc: BTreeMap<IrrLabel, i64> = BTreeMap::new();
                    for (a, ka) in &ca {
                        for (b, kb) in &cb {
                            if *ka == 0 || *kb == 0 {
                                continue;
                            }
                            for (o, m) in label_bullet(WeylType::D, a, b)? {
                                *acc.entry(o).or_insert(0) += to_i64(m, "bullet_d_coarse")? * ka * kb;
                            }
                        }
                    }
                    acc.retain(|_, v| *v != 0);
                    outcomes.push(acc);
                }
            }
            let first = outcomes[0].clone();
            let mut unsettled: BTreeSet<Partition> = BTreeSet::new();
            for o in &outcomes[1..] {
                let keys: BTreeSet<&IrrLabel> = o.keys().chain(first.keys()).collect();
                for k in keys {
                    if o.get(k) != first.get(k) {
                        match k {
                            IrrLabel::DDegen(d) => {
                                unsettled.insert(d.core.clone());
                            }
                            _ => unreachable!("non-degenerate outputs do not depend on signs"),
                        }
                    }
                }
            }
            for (l, k) in first {
                match &l {
                    IrrLabel::DDegen(d) if unsettled.contains(&d.core) => {
                        if k < 0 {
                            return Err(CoxError::Unresolved("negative unresolved product".into()));
                        }
                        *masses.entry(d.core.clone()).or_insert(0) += k as u64;
                    }
                    _ => out.add_label(l, k)?,
                }
            }
        }
    }
    for (core, m) in masses {
        out.add_unresolved(core, m)?;
    }
    Ok(out)
}

fn check_type(chi: &VirtualCharacter, ty: WeylType, op: &str) -> Result<()> {
    if chi.weyl_type() != ty {
        return Err(CoxError::TypeMismatch(format!("{op} expects a {ty} character, got {}", chi.weyl_type())));
    }
    Ok(())
}

/// `Ind_{S_n}^{B_n}`.
pub fn ind_a_to_b(chi: &VirtualCharacter) -> Result<VirtualCharacter> {
    check_type(chi, WeylType::A, "ind_a_to_b")?;
    let n = chi.rank();
    let mut out = VirtualCharacter::zero(WeylType::B, n);
    for (l, k) in chi.coeffs() {
        let IrrLabel::A(nu) = l else { unreachable!() };
        for a in 0..=n {
            for lam in partitions_of(a) {
                for mu in partitions_of(n - a) {
                    let m = c(&lam, &mu, nu);
                    if m > 0 {
                        out.add_label(b_label(lam.clone(), mu), to_i64(m, "ind_a_to_b")? * k)?;
                    }
                }
            }
        }
    }
    Ok(out)
}

fn pieri_degenerate(nu: &Partition, n: u32) -> Option<(Partition, Sign)> {
    let half = n / 2;
    if *nu == Partition::row(n) {
        Some((Partition::row(half), Sign::Plus))
    } else if *nu == Partition::column(n) {
        Some((Partition::column(half), if half % 2 == 0 { Sign::Plus } else { Sign::Minus }))
    } else {
        None
    }
}

/// `Ind_{S_{±n}}^{D_n}`.
pub fn ind_a_to_d(chi: &VirtualCharacter, side: Side, policy: DegenSplitPolicy) -> Result<VirtualCharacter> {
    check_type(chi, WeylType::A, "ind_a_to_d")?;
    let n = chi.rank();
    let mut out = VirtualCharacter::zero(WeylType::D, n);
    for (l, k) in chi.coeffs() {
        let IrrLabel::A(nu) = l else { unreachable!() };
        for a in 0..=n {
            for lam in partitions_of(a) {
                for mu in partitions_of(n - a) {
                    if lam >= mu {
                        continue;
                    }
                    let m = c(&lam, &mu, nu);
                    if m > 0 {
                        out.add_label(d_label(lam.clone(), mu)?, to_i64(m, "ind_a_to_d")? * k)?;
                    }
                }
            }
        }
        if n % 2 == 1 {
            continue;
        }
        let mut pending: Vec<(Partition, u64)> = Vec::new();
        for core in partitions_of(n / 2) {
            let m = c(&core, &core, nu);
            if m > 0 {
                pending.push((core, m));
            }
        }
        if pending.is_empty() {
            continue;
        }
        if let Some((core, sign)) = pieri_degenerate(nu, n) {
            out.add_label(d_degen(core, sign), *k)?;
            continue;
        }
        match policy {
            DegenSplitPolicy::ExactClosedForm => {
                return Err(CoxError::Unresolved(format!(
                    "degenerate split of Ind_S^D χ^{nu} has no closed form"
                )))
            }
            DegenSplitPolicy::Unresolved => {
                if *k < 0 {
                    return Err(CoxError::Unresolved("negative multiple of unresolved mass".into()));
                }
                for (core, m) in pending {
                    out.add_unresolved(core, m * *k as u64)?;
                }
            }
            DegenSplitPolicy::OracleAssisted { cap } => {
                if n > cap {
                    return Err(CoxError::CapExceeded { what: "oracle-assisted rank".into(), needed: u64::from(n), cap: u64::from(cap) });
                }
                let splits = crate::oracle::degenerate_split_of_induced(nu)?;
                for (core, m) in pending {
                    match splits.get(&core) {
                        Some(&(plus, minus)) => {
                            debug_assert_eq!(plus + minus, m);
                            out.add_label(d_degen(core.clone(), Sign::Plus), to_i64(plus, "split")? * k)?;
                            out.add_label(d_degen(core, Sign::Minus), to_i64(minus, "split")? * k)?;
                        }
                        None => {
                            if *k < 0 {
                                return Err(CoxError::Unresolved("negative multiple of unresolved mass".into()));
                            }
                            out.add_unresolved(core, m * *k as u64)?;
                        }
                    }
                }
            }
        }
    }
    match side {
        Side::Plus => Ok(out),
        Side::Minus => out.twist(crate::char_ring::TwistKind::Diamond),
    }
}

pub fn restrict_b_to_d(chi: &VirtualCharacter) -> Result<VirtualCharacter> {
    check_type(chi, WeylType::B, "restrict_b_to_d")?;
    let mut out = VirtualCharacter::zero(WeylType::D, chi.rank());
    for (l, k) in chi.coeffs() {
        let IrrLabel::B(b) = l else { unreachable!() };
        if b.first == b.second {
            out.add_label(d_degen(b.first.clone(), Sign::Plus), *k)?;
            out.add_label(d_degen(b.first.clone(), Sign::Minus), *k)?;
        } else {
            out.add_label(d_label(b.first.clone(), b.second.clone())?, *k)?;
        }
    }
    Ok(out)
}

pub fn induce_d_to_b(chi: &VirtualCharacter) -> Result<VirtualCharacter> {
    check_type(chi, WeylType::D, "induce_d_to_b")?;
    let mut out = VirtualCharacter::zero(WeylType::B, chi.rank());
    for (l, k) in chi.coeffs() {
        match l {
            IrrLabel::DNondeg(u) => {
                out.add_label(b_label(u.first().clone(), u.second().clone()), *k)?;
                out.add_label(b_label(u.second().clone(), u.first().clone()), *k)?;
            }
            IrrLabel::DDegen(d) => out.add_label(b_label(d.core.clone(), d.core.clone()), *k)?,
            _ => unreachable!(),
        }
    }
    for (core, m) in chi.unresolved() {
        out.add_label(b_label(core.clone(), core.clone()), to_i64(*m, "induce_d_to_b")?)?;
    }
    Ok(out)
}

pub fn project(kind: Projection, chi: &VirtualCharacter) -> Result<VirtualCharacter> {
    let ty = if kind == Projection::PiD { WeylType::D } else { WeylType::B };
    check_type(chi, ty, "project")?;
    let mut out = VirtualCharacter::zero(WeylType::A, chi.rank());
    for (l, k) in chi.coeffs() {
        let image = match (kind, l) {
            (Projection::PiL, IrrLabel::B(b)) if b.second.is_empty() => Some(b.first.clone()),
            (Projection::PiR, IrrLabel::B(b)) if b.first.is_empty() => Some(b.second.clone()),
            (Projection::PiD, IrrLabel::DNondeg(u)) if u.second().is_empty() => Some(u.first().clone()),
            (Projection::PiD, IrrLabel::DNondeg(u)) if u.first().is_empty() => Some(u.second().clone()),
            _ => None,
        };
        if let Some(p) = image {
            out.add_label(IrrLabel::A(p), *k)?;
        }
    }
    Ok(out)
}

fn from_family(ty: WeylType, n: u32, family: Family) -> Result<VirtualCharacter> {
    VirtualCharacter::from_labels(ty, n, enumerate(n, family)?)
}

fn lambda_pq(p: u32, q: u32) -> Vec<Partition> {
    let (hi, lo) = (p.max(q), p.min(q));
    (0..=lo).map(|r| Partition::from_unsorted(vec![hi + r, lo - r])).collect()
}

fn bad_column(ty: WeylType, col: &Column) -> CoxError {
    CoxError::InvalidIndex(format!("column ({}, {}, {:?}) invalid for type {ty}", col.alpha, col.beta, col.gamma))
}

/// Character of a single column.
pub fn column_char(ty: WeylType, col: &Column) -> Result<VirtualCharacter> {
    let n = col.alpha;
    match ty {
        WeylType::A => {
            if !col.gamma.is_ordinary() {
                return Err(bad_column(ty, col));
            }
            let sgn = col.gamma == Gamma::Sgn;
            match col.beta {
                Beta::Id | Beta::IdPlus => {
                    let p = if sgn { Partition::column(n) } else { Partition::row(n) };
                    VirtualCharacter::from_label(ty, n, IrrLabel::A(p))
                }
                Beta::Fpf | Beta::FpfPlus if n % 2 == 0 => {
                    from_family(ty, n, if sgn { Family::ECols } else { Family::ERows })
                }
                _ => Err(bad_column(ty, col)),
            }
        }
        WeylType::B => match col.beta {
            Beta::Id | Beta::IdPlus => {
                let (a, b) = match col.gamma {
                    Gamma::Triv => (Partition::row(n), Partition::empty()),
                    Gamma::Sgn => (Partition::empty(), Partition::column(n)),
                    Gamma::Pm => (Partition::column(n), Partition::empty()),
                    Gamma::Mp => (Partition::empty(), Partition::row(n)),
                };
                VirtualCharacter::from_label(ty, n, b_label(a, b))
            }
            Beta::Fpf if n % 2 == 0 => match col.gamma {
                Gamma::Triv => from_family(ty, n, Family::ERowsB),
                Gamma::Sgn => from_family(ty, n, Family::EColsB),
                _ => Err(bad_column(ty, col)),
            },
            Beta::Pq(p, q) if p > 0 && q > 0 && p + q == n => {
                let labels = lambda_pq(p, q).into_iter().map(|lam| match col.gamma {
                    Gamma::Triv => b_label(lam, Partition::empty()),
                    Gamma::Mp => b_label(Partition::empty(), lam),
                    Gamma::Sgn => b_label(Partition::empty(), lam.transpose()),
                    Gamma::Pm => b_label(lam.transpose(), Partition::empty()),
                });
                VirtualCharacter::from_labels(ty, n, labels)
            }
            _ => Err(bad_column(ty, col)),
        },
        WeylType::D => {
            let sgn = col.gamma == Gamma::Sgn;
            let plain = |p: Partition| d_label(p, Partition::empty());
            match col.beta {
                // in D_2 every perfect involution is central
                Beta::Id | Beta::IdPlus => {
                    let label = match col.gamma {
                        Gamma::Triv => plain(Partition::row(n))?,
                        Gamma::Sgn => plain(Partition::column(n))?,
                        Gamma::Mp if n == 2 => d_degen(Partition::row(1), Sign::Plus),
                        Gamma::Pm if n == 2 => d_degen(Partition::row(1), Sign::Minus),
                        _ => return Err(bad_column(ty, col)),
                    };
                    VirtualCharacter::from_label(ty, n, label)
                }
                Beta::Fpf | Beta::FpfDiamond if n == 2 && !col.gamma.is_ordinary() => {
                    let sign = if col.gamma == Gamma::Mp { Sign::Plus } else { Sign::Minus };
                    VirtualCharacter::from_label(ty, n, d_degen(Partition::row(1), sign))
                }
                Beta::Fpf | Beta::FpfDiamond if n % 2 == 0 && col.gamma.is_ordinary() => {
                    let mut chi = from_family(ty, n, if sgn { Family::EColsD } else { Family::ERowsD })?;
                    let sign = if col.beta == Beta::Fpf { Sign::Plus } else { Sign::Minus };
                    for l in enumerate(n / 2, if sgn { Family::ECols } else { Family::ERows })? {
                        let IrrLabel::A(core) = l else { unreachable!() };
                        chi.add_label(d_degen(core, sign), 1)?;
                    }
                    Ok(chi)
                }
                Beta::Pq(p, q) if p > 0 && q > 0 && p + q == n && n > 2 && col.gamma.is_ordinary() => {
                    let mut chi = VirtualCharacter::zero(ty, n);
                    for j in 0..=p.min(q) {
                        let lam = if sgn {
                            let mut parts = vec![2; j as usize];
                            parts.extend(std::iter::repeat(1).take((n - 2 * j) as usize));
                            Partition::new(parts)?
                        } else {
                            Partition::from_unsorted(vec![n - j, j])
                        };
                        chi.add_label(plain(lam)?, 1)?;
                    }
                    Ok(chi)
                }
                Beta::Tri(p, q, arrow) if n == 4 && matches!((p, q), (3, 1) | (1, 3)) && col.gamma.is_ordinary() => {
                    let sign = if arrow == Arrow::Cw { Sign::Plus } else { Sign::Minus };
                    let (top, core) = if sgn {
                        (Partition::column(4), Partition::column(2))
                    } else {
                        (Partition::row(4), Partition::row(2))
                    };
                    VirtualCharacter::from_labels(ty, n, [plain(top)?, d_degen(core, sign)])
                }
                _ => Err(bad_column(ty, col)),
            }
        }
    }
}

/// Lifts an unordered bipartition's two orders, for tests and callers that
/// compare against type B.
pub fn ordered_lifts(l: &IrrLabel) -> Vec<BiPartition> {
    lifts(l).into_iter().map(|(a, b)| BiPartition::new(a, b)).collect()
}

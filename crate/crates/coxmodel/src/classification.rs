//! Perfect models: the known families, the exact-cover search, classification
//! up to strong and full equivalence, the even-rank type-D nonexistence
//! certificate, and the dihedral and H₃ catalogs.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::char_ring::{irr_universe, IrrLabel, MfStatus, VirtualCharacter, WeylType};
use crate::error::{CoxError, Result};
use crate::induction::DegenSplitPolicy;
use crate::model_index::{
    enumerate_indices, index_a2, index_b, index_d, Beta, EquivalenceRelation, Gamma, ModelIndex,
};
use crate::oracle::{self, cached_group, group_for, ClassFunction, ExtendedElement, GroupSpec, Triple};
use crate::partitions::{partitions_of, DegenerateLabel, Partition, Sign};

/// Largest ranks accepted by the symbolic search, per type.
pub const SEARCH_BOUND_A: u32 = 10;
pub const SEARCH_BOUND_B: u32 = 8;
pub const SEARCH_BOUND_D: u32 = 8;

// ------------------------------------------------------------------ families

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelFamily {
    PA,
    PB,
    PBhat,
    PD,
    B3Extra1,
    B3Extra2,
    AExtra4,
    I2Odd,
    /// Variants 1..=4 in the order the four models are listed.
    I2Even(u8),
    /// Variants 1..=4: the two three-triple models, then the two two-triple ones.
    H3(u8),
}

impl fmt::Display for ModelFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelFamily::PA => write!(f, "PA"),
            ModelFamily::PB => write!(f, "PB"),
            ModelFamily::PBhat => write!(f, "PBhat"),
            ModelFamily::PD => write!(f, "PD"),
            ModelFamily::B3Extra1 => write!(f, "B3extra1"),
            ModelFamily::B3Extra2 => write!(f, "B3extra2"),
            ModelFamily::AExtra4 => write!(f, "Aextra4"),
            ModelFamily::I2Odd => write!(f, "I2odd"),
            ModelFamily::I2Even(v) => write!(f, "I2even/{v}"),
            ModelFamily::H3(v) => write!(f, "H3/{v}"),
        }
    }
}

impl FromStr for ModelFamily {
    type Err = CoxError;

    /// Accepts the names printed by `Display`; `I2even` and `H3` default to
    /// variant 1.
    fn from_str(s: &str) -> Result<Self> {
        let (name, variant) = match s.split_once('/') {
            Some((a, b)) => {
                let v: u8 = b.parse().map_err(|_| CoxError::Parse(format!("bad variant in {s}")))?;
                (a, Some(v))
            }
            None => (s, None),
        };
        let plain = |fam: ModelFamily| match variant {
            None => Ok(fam),
            Some(_) => Err(CoxError::Parse(format!("family {name} has no variants"))),
        };
        let variant_of = |v: Option<u8>| match v.unwrap_or(1) {
            v @ 1..=4 => Ok(v),
            v => Err(CoxError::Parse(format!("variant {v} out of range 1..=4"))),
        };
        match name.to_ascii_lowercase().as_str() {
            "pa" => plain(ModelFamily::PA),
            "pb" => plain(ModelFamily::PB),
            "pbhat" => plain(ModelFamily::PBhat),
            "pd" => plain(ModelFamily::PD),
            "b3extra1" => plain(ModelFamily::B3Extra1),
            "b3extra2" => plain(ModelFamily::B3Extra2),
            "aextra4" => plain(ModelFamily::AExtra4),
            "i2odd" => plain(ModelFamily::I2Odd),
            "i2even" => Ok(ModelFamily::I2Even(variant_of(variant)?)),
            "h3" => Ok(ModelFamily::H3(variant_of(variant)?)),
            _ => Err(CoxError::Parse(format!("unknown model family {name}"))),
        }
    }
}

// ------------------------------------------------------------- candidates

/// A triple of a group without a symbolic character theory, with a
/// readable label such as `T[s,t;+-]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LabelledTriple {
    pub label: String,
    pub triple: Triple,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelMembers {
    Indices(Vec<ModelIndex>),
    Triples(Vec<LabelledTriple>),
}

impl ModelMembers {
    pub fn len(&self) -> usize {
        match self {
            ModelMembers::Indices(v) => v.len(),
            ModelMembers::Triples(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Summed {
    Weyl(VirtualCharacter),
    Dihedral(DihedralCharacter),
    ClassFunction(ClassFunction<i64>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum CandidateStatus {
    Unverified,
    VerifiedSymbolic,
    VerifiedOracle,
    /// The verdict depends on degenerate splits at these cores.
    NeedsOracle { cores: Vec<Partition> },
    Failed { reason: String },
}

impl CandidateStatus {
    pub fn is_verified(&self) -> bool {
        matches!(self, CandidateStatus::VerifiedSymbolic | CandidateStatus::VerifiedOracle)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PerfectModelCandidate {
    pub family: Option<ModelFamily>,
    pub group: GroupSpec,
    #[serde(flatten)]
    pub members: ModelMembers,
    pub summed: Option<Summed>,
    pub status: CandidateStatus,
}

impl fmt::Display for PerfectModelCandidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = match &self.members {
            ModelMembers::Indices(v) => v.iter().map(|i| i.to_string()).collect(),
            ModelMembers::Triples(v) => v.iter().map(|t| t.label.clone()).collect(),
        };
        write!(f, "{{{}}}", names.join(", "))
    }
}

// ----------------------------------------------------------- known models

fn pattern_indices(ty: WeylType, n: u32) -> Vec<ModelIndex> {
    (0..=n / 2)
        .map(|k| {
            let a = (2 * k, n - 2 * k);
            let b = (Beta::Fpf, Beta::Id);
            let g = (Gamma::Triv, Gamma::Sgn);
            match ty {
                WeylType::A => index_a2(a, b, g),
                WeylType::B => index_b(a, b, g),
                WeylType::D => index_d(a.0, i64::from(a.1), b, g),
            }
        })
        .collect()
}

fn require(ok: bool, family: ModelFamily, n: u32, need: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(CoxError::Domain(format!("family {family} needs {need}, got {n}")))
    }
}

/// The literal member set of a known model, with its summed character and
/// the symbolic (or closed-form) verdict. H₃ candidates start out
/// `Unverified`; see [`verify_with_oracle`].
pub fn known_model(family: ModelFamily, n: u32) -> Result<PerfectModelCandidate> {
    use Gamma::{Mp, Pm, Sgn, Triv};
    use ModelFamily as F;
    let id2 = (Beta::Id, Beta::Id);
    let indices = match family {
        F::PA => {
            require(n >= 1, family, n, "n >= 1")?;
            pattern_indices(WeylType::A, n)
        }
        F::PB => {
            require(n >= 2, family, n, "n >= 2")?;
            pattern_indices(WeylType::B, n)
        }
        F::PBhat => {
            require(n >= 2, family, n, "n >= 2")?;
            let mut v = vec![index_b((2, n - 2), id2, (Triv, Sgn)), index_b((2, n - 2), id2, (Mp, Sgn))];
            v.extend(pattern_indices(WeylType::B, n).into_iter().enumerate().filter(|(k, _)| *k != 1).map(|(_, i)| i));
            v
        }
        F::PD => {
            require(n >= 3 && n % 2 == 1, family, n, "odd n >= 3")?;
            pattern_indices(WeylType::D, n)
        }
        F::B3Extra1 => {
            require(n == 3, family, n, "n = 3")?;
            vec![
                index_b((1, 2), id2, (Triv, Triv)),
                index_b((2, 1), id2, (Sgn, Triv)),
                index_b((3, 0), id2, (Pm, Triv)),
                index_b((3, 0), id2, (Mp, Triv)),
            ]
        }
        F::B3Extra2 => {
            require(n == 3, family, n, "n = 3")?;
            // The first member's 1₋₊ on B₁ is the sign character.
            vec![
                index_b((1, 2), id2, (Sgn, Triv)),
                index_b((2, 1), id2, (Pm, Triv)),
                index_b((3, 0), id2, (Triv, Triv)),
                index_b((3, 0), id2, (Sgn, Triv)),
            ]
        }
        F::AExtra4 => {
            require(n == 4, family, n, "n = 4")?;
            vec![index_a2((1, 3), id2, (Triv, Sgn)), index_a2((2, 2), id2, (Triv, Triv))]
        }
        F::I2Odd | F::I2Even(_) => return dihedral_known_model(family, n),
        F::H3(v) => return h3_known_model(v, n),
    };
    let ty = indices[0].weyl_type();
    candidate_from_indices(Some(family), ty, n, normalize_members(indices)?)
}

fn normalize_members(indices: Vec<ModelIndex>) -> Result<Vec<ModelIndex>> {
    for idx in &indices {
        let v = idx.validate();
        if !v.is_empty() {
            return Err(CoxError::InvalidIndex(format!("{idx}: {}", v.join("; "))));
        }
    }
    Ok(indices)
}

/// Candidate built from an arbitrary index set, with its symbolic verdict.
pub fn candidate(indices: Vec<ModelIndex>) -> Result<PerfectModelCandidate> {
    let first = indices.first().ok_or_else(|| CoxError::Domain("empty candidate".into()))?;
    let (ty, n) = (first.weyl_type(), first.rank());
    if let Some(bad) = indices.iter().find(|i| i.weyl_type() != ty || i.rank() != n) {
        return Err(CoxError::TypeMismatch(format!("{bad} is not of type {ty} rank {n}")));
    }
    candidate_from_indices(None, ty, n, normalize_members(indices)?)
}

fn candidate_from_indices(
    family: Option<ModelFamily>,
    ty: WeylType,
    n: u32,
    indices: Vec<ModelIndex>,
) -> Result<PerfectModelCandidate> {
    let chars = indices
        .iter()
        .map(|i| i.character(DegenSplitPolicy::Unresolved))
        .collect::<Result<Vec<_>>>()?;
    let summed = VirtualCharacter::sum(ty, n, chars.iter())?;
    let status = match verdict_of_sum(&summed)? {
        PerfectVerdict::Perfect => CandidateStatus::VerifiedSymbolic,
        PerfectVerdict::NeedsOracle { cores } => CandidateStatus::NeedsOracle { cores },
        PerfectVerdict::NotPerfect { witness, coefficient } => {
            CandidateStatus::Failed { reason: format!("{witness} has coefficient {coefficient}") }
        }
    };
    Ok(PerfectModelCandidate {
        family,
        group: group_for(ty, n),
        members: ModelMembers::Indices(indices),
        summed: Some(Summed::Weyl(summed)),
        status,
    })
}

// --------------------------------------------------------- symbolic test

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "verdict")]
pub enum PerfectVerdict {
    Perfect,
    /// `witness` is a label whose total cannot be 1; for a degenerate pair
    /// with unresolved mass `coefficient` is the resolved part.
    NotPerfect { witness: IrrLabel, coefficient: i64 },
    NeedsOracle { cores: Vec<Partition> },
}

pub fn is_perfect_symbolic(cand: &[ModelIndex], policy: DegenSplitPolicy) -> Result<PerfectVerdict> {
    let first = cand.first().ok_or_else(|| CoxError::Domain("empty candidate".into()))?;
    let (ty, n) = (first.weyl_type(), first.rank());
    if let Some(bad) = cand.iter().find(|i| i.weyl_type() != ty || i.rank() != n) {
        return Err(CoxError::TypeMismatch(format!("{bad} is not of type {ty} rank {n}")));
    }
    let chars = cand.iter().map(|i| i.character(policy)).collect::<Result<Vec<_>>>()?;
    verdict_of_sum(&VirtualCharacter::sum(ty, n, chars.iter())?)
}

fn degen(core: &Partition, sign: Sign) -> IrrLabel {
    IrrLabel::DDegen(DegenerateLabel::new(core.clone(), sign))
}

fn verdict_of_sum(sum: &VirtualCharacter) -> Result<PerfectVerdict> {
    let unresolved = sum.unresolved();
    for label in irr_universe(sum.weyl_type(), sum.rank()) {
        if let IrrLabel::DDegen(d) = &label {
            if unresolved.contains_key(&d.core) {
                continue;
            }
        }
        let c = sum.coeff(&label);
        if c != 1 {
            return Ok(PerfectVerdict::NotPerfect { witness: label, coefficient: c });
        }
    }
    if let Some(stray) = sum.support().find(|l| !label_fits(sum, l)) {
        return Ok(PerfectVerdict::NotPerfect { witness: stray.clone(), coefficient: sum.coeff(stray) });
    }
    let mut pending = Vec::new();
    for (core, &m) in unresolved {
        let p = sum.coeff(&degen(core, Sign::Plus));
        let q = sum.coeff(&degen(core, Sign::Minus));
        if p > 1 || p + q + m as i64 != 2 {
            return Ok(PerfectVerdict::NotPerfect { witness: degen(core, Sign::Plus), coefficient: p });
        }
        if q > 1 {
            return Ok(PerfectVerdict::NotPerfect { witness: degen(core, Sign::Minus), coefficient: q });
        }
        pending.push(core.clone());
    }
    if pending.is_empty() {
        Ok(PerfectVerdict::Perfect)
    } else {
        Ok(PerfectVerdict::NeedsOracle { cores: pending })
    }
}

fn label_fits(sum: &VirtualCharacter, l: &IrrLabel) -> bool {
    irr_universe(sum.weyl_type(), sum.rank()).contains(l)
}

/// Replaces the status by the oracle verdict; errors if the group is over
/// the oracle cap.
pub fn verify_with_oracle(cand: &mut PerfectModelCandidate) -> Result<()> {
    let g = cached_group(cand.group)?;
    let triples = match &cand.members {
        ModelMembers::Indices(v) => v.iter().map(|i| g.triple_of_index(i)).collect::<Result<Vec<_>>>()?,
        ModelMembers::Triples(v) => v.iter().map(|t| t.triple.clone()).collect(),
    };
    let check = g.oracle_is_perfect(&triples)?;
    if cand.summed.is_none() {
        let mut sum = ClassFunction::zero(g.num_classes());
        for t in &triples {
            sum = sum.add(&g.triple_character(t)?)?;
        }
        cand.summed = Some(Summed::ClassFunction(sum));
    }
    cand.status = match check.witness_class {
        None => CandidateStatus::VerifiedOracle,
        Some(c) => CandidateStatus::Failed {
            reason: format!("oracle: the summed character differs from the involution count on class {c}"),
        },
    };
    Ok(())
}

// ------------------------------------------------------------ exact cover

/// Bitset rows over a label universe; `covers` enumerates every exact
/// cover, choosing at each node the uncovered label with fewest live rows.
struct ExactCover {
    words: usize,
    rows: Vec<Vec<u64>>,
    by_label: Vec<Vec<usize>>,
}

#[derive(Default)]
struct CoverRun {
    covers: Vec<Vec<usize>>,
    /// Labels that had no live row at some dead end.
    starved: BTreeSet<usize>,
    nodes: u64,
}

impl ExactCover {
    fn new(nbits: usize, rows: Vec<Vec<usize>>) -> Self {
        let words = nbits.div_ceil(64).max(1);
        let mut by_label = vec![Vec::new(); nbits];
        let rows = rows
            .into_iter()
            .enumerate()
            .map(|(r, bits)| {
                let mut set = vec![0u64; words];
                for b in bits {
                    set[b / 64] |= 1 << (b % 64);
                    by_label[b].push(r);
                }
                set
            })
            .collect();
        ExactCover { words, rows, by_label }
    }

    fn covers(&self) -> CoverRun {
        let mut run = CoverRun::default();
        let mut covered = vec![0u64; self.words];
        let mut chosen = Vec::new();
        self.descend(&mut covered, &mut chosen, &mut run);
        run.covers.sort();
        run
    }

    fn live(&self, r: usize, covered: &[u64]) -> bool {
        self.rows[r].iter().zip(covered).all(|(a, b)| a & b == 0)
    }

    fn descend(&self, covered: &mut Vec<u64>, chosen: &mut Vec<usize>, run: &mut CoverRun) {
        run.nodes += 1;
        let mut best: Option<(usize, usize)> = None;
        for (label, rows) in self.by_label.iter().enumerate() {
            if covered[label / 64] >> (label % 64) & 1 == 1 {
                continue;
            }
            let count = rows.iter().filter(|&&r| self.live(r, covered)).count();
            if best.map_or(true, |(_, c)| count < c) {
                best = Some((label, count));
                if count == 0 {
                    break;
                }
            }
        }
        let Some((label, count)) = best else {
            let mut c = chosen.clone();
            c.sort_unstable();
            run.covers.push(c);
            return;
        };
        if count == 0 {
            run.starved.insert(label);
            return;
        }
        for &r in &self.by_label[label] {
            if !self.live(r, covered) {
                continue;
            }
            for (c, w) in covered.iter_mut().zip(&self.rows[r]) {
                *c |= w;
            }
            chosen.push(r);
            self.descend(covered, chosen, run);
            chosen.pop();
            for (c, w) in covered.iter_mut().zip(&self.rows[r]) {
                *c &= !w;
            }
        }
    }
}

// ------------------------------------------------------------ candidates

/// One multiplicity-free strong-class representative, expanded into the
/// label sets it could contribute.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateRow {
    pub index: ModelIndex,
    /// Resolved labels (all with coefficient 1).
    pub labels: Vec<IrrLabel>,
    /// Ways to realize the unresolved degenerate mass without a repeated
    /// label; a single empty entry when nothing is unresolved.
    pub degenerate_options: Vec<Vec<IrrLabel>>,
}

impl CandidateRow {
    pub fn is_conditional(&self) -> bool {
        self.degenerate_options.iter().any(|o| !o.is_empty())
    }

    fn unresolved_cores(&self) -> BTreeSet<Partition> {
        self.degenerate_options
            .iter()
            .flatten()
            .filter_map(|l| match l {
                IrrLabel::DDegen(d) => Some(d.core.clone()),
                _ => None,
            })
            .collect()
    }
}

fn candidate_row(index: ModelIndex, chi: &VirtualCharacter) -> Option<CandidateRow> {
    let mut labels = Vec::new();
    for (l, &c) in chi.coeffs() {
        match c {
            0 => {}
            1 => labels.push(l.clone()),
            _ => return None,
        }
    }
    let mut options: Vec<Vec<IrrLabel>> = vec![Vec::new()];
    for (core, &m) in chi.unresolved() {
        let free: Vec<IrrLabel> = [Sign::Plus, Sign::Minus]
            .into_iter()
            .map(|s| degen(core, s))
            .filter(|l| chi.coeff(l) == 0)
            .collect();
        let choices: Vec<Vec<IrrLabel>> = match (m, free.len()) {
            (1, _) => free.iter().map(|l| vec![l.clone()]).collect(),
            (2, 2) => vec![free.clone()],
            _ => Vec::new(),
        };
        options = options
            .iter()
            .flat_map(|o| {
                choices.iter().map(move |c| {
                    let mut v = o.clone();
                    v.extend(c.iter().cloned());
                    v
                })
            })
            .collect();
    }
    if options.is_empty() {
        return None;
    }
    Some(CandidateRow { index, labels, degenerate_options: options })
}

/// Multiplicity-free (or possibly multiplicity-free) strong-class
/// representatives at `(ty, n)`.
pub fn candidate_rows(ty: WeylType, n: u32) -> Result<Vec<CandidateRow>> {
    let entries = enumerate_indices(ty, n, true, DegenSplitPolicy::Unresolved)?;
    Ok(entries
        .into_iter()
        .filter(|e| e.mf != MfStatus::False)
        .filter_map(|e| candidate_row(e.index, &e.character))
        .collect())
}

fn check_bound(ty: WeylType, n: u32) -> Result<()> {
    let bound = match ty {
        WeylType::A => SEARCH_BOUND_A,
        WeylType::B => SEARCH_BOUND_B,
        WeylType::D => SEARCH_BOUND_D,
    };
    if n > bound {
        return Err(CoxError::CapExceeded {
            what: format!("symbolic search in type {ty}"),
            needed: u64::from(n),
            cap: u64::from(bound),
        });
    }
    Ok(())
}

/// Every perfect model of `(ty, n)` as a set of strong-class
/// representatives, sorted. Covers that use an assumed degenerate split are
/// settled by the oracle when the group fits under the cap; otherwise they
/// are returned with status `NeedsOracle`.
pub fn search_perfect_models(ty: WeylType, n: u32) -> Result<Vec<PerfectModelCandidate>> {
    check_bound(ty, n)?;
    let universe = irr_universe(ty, n);
    let pos: BTreeMap<&IrrLabel, usize> = universe.iter().enumerate().map(|(i, l)| (l, i)).collect();
    let candidates = candidate_rows(ty, n)?;

    // Dedup identical bitsets; each row keeps its (candidate, option) preimages.
    let mut rows: BTreeMap<Vec<usize>, Vec<(usize, usize)>> = BTreeMap::new();
    for (ci, c) in candidates.iter().enumerate() {
        for (oi, opt) in c.degenerate_options.iter().enumerate() {
            let mut bits: Vec<usize> = c.labels.iter().chain(opt).map(|l| pos[l]).collect();
            bits.sort_unstable();
            rows.entry(bits).or_default().push((ci, oi));
        }
    }
    let (bitsets, preimages): (Vec<_>, Vec<_>) = rows.into_iter().unzip();
    let run = ExactCover::new(universe.len(), bitsets).covers();

    let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
    for cover in &run.covers {
        let mut partial: Vec<Vec<usize>> = vec![Vec::new()];
        for &r in cover {
            partial = partial
                .iter()
                .flat_map(|p| {
                    preimages[r].iter().filter(|(ci, _)| !p.contains(ci)).map(move |(ci, _)| {
                        let mut q = p.clone();
                        q.push(*ci);
                        q
                    })
                })
                .collect();
        }
        for mut p in partial {
            p.sort_unstable();
            found.insert(p);
        }
    }

    let oracle_ok = group_for(ty, n).expected_order() <= oracle::oracle_cap();
    let mut out = Vec::new();
    for members in found {
        let indices: Vec<ModelIndex> = members.iter().map(|&ci| candidates[ci].index.clone()).collect();
        let mut cand = candidate_from_indices(None, ty, n, indices)?;
        let cores: BTreeSet<Partition> = members.iter().flat_map(|&ci| candidates[ci].unresolved_cores()).collect();
        if !cores.is_empty() {
            if oracle_ok {
                verify_with_oracle(&mut cand)?;
                if !cand.status.is_verified() {
                    continue;
                }
            } else {
                cand.status = CandidateStatus::NeedsOracle { cores: cores.into_iter().collect() };
            }
        }
        out.push(cand);
    }
    Ok(out)
}

// --------------------------------------------------------- classification

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub group: GroupSpec,
    pub relation: EquivalenceRelation,
    pub models: Vec<PerfectModelCandidate>,
    /// Partition of `models` (by position) into equivalence classes.
    pub classes: Vec<Vec<usize>>,
}

impl Classification {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }
}

fn group_classes(keys: Vec<Vec<String>>) -> Vec<Vec<usize>> {
    let mut by: BTreeMap<Vec<String>, Vec<usize>> = BTreeMap::new();
    for (i, mut k) in keys.into_iter().enumerate() {
        k.sort();
        by.entry(k).or_default().push(i);
    }
    let mut classes: Vec<Vec<usize>> = by.into_values().collect();
    classes.sort();
    classes
}

pub fn classify(ty: WeylType, n: u32, rel: EquivalenceRelation) -> Result<Classification> {
    let models = search_perfect_models(ty, n)?;
    let keys = models
        .iter()
        .map(|m| match &m.members {
            ModelMembers::Indices(v) => v
                .iter()
                .map(|i| i.canonical_form(rel).map(|c| c.to_string()))
                .collect::<Result<Vec<_>>>(),
            ModelMembers::Triples(_) => Err(CoxError::TypeMismatch("triple members in a Weyl search".into())),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Classification { group: group_for(ty, n), relation: rel, models, classes: group_classes(keys) })
}

/// Dispatches to the symbolic search, the dihedral closed form, or the
/// oracle (H₃).
pub fn classify_group(spec: GroupSpec, rel: EquivalenceRelation) -> Result<Classification> {
    match spec {
        GroupSpec::SymA(n) => classify(WeylType::A, n, rel),
        GroupSpec::SymB(n) => classify(WeylType::B, n, rel),
        GroupSpec::SymD(n) => classify(WeylType::D, n, rel),
        GroupSpec::Dihedral(m) => classify_dihedral(m, rel),
        GroupSpec::H3 => classify_by_oracle(GroupSpec::H3, rel),
    }
}

/// Exhaustive classification in the brute-force group.
pub fn classify_by_oracle(spec: GroupSpec, rel: EquivalenceRelation) -> Result<Classification> {
    let g = cached_group(spec)?;
    let search = oracle::oracle_search(&g)?;
    let labels = g.generator_labels().to_vec();
    let models = search
        .models
        .iter()
        .map(|m| {
            let triples: Vec<LabelledTriple> =
                m.iter().map(|&t| labelled(&g, &labels, search.triples[t].triple.clone())).collect();
            let mut sum = ClassFunction::zero(g.num_classes());
            for &t in m {
                sum = sum.add(&search.triples[t].character)?;
            }
            Ok(PerfectModelCandidate {
                family: None,
                group: spec,
                members: ModelMembers::Triples(triples),
                summed: Some(Summed::ClassFunction(sum)),
                status: CandidateStatus::VerifiedOracle,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let classes = match rel {
        EquivalenceRelation::Strong => search.strong_classes(),
        EquivalenceRelation::Full => search.full_classes(),
    };
    let mut classes: Vec<Vec<usize>> = classes
        .into_iter()
        .map(|mut c| {
            c.sort_unstable();
            c
        })
        .collect();
    classes.sort();
    Ok(Classification { group: spec, relation: rel, models, classes })
}

fn labelled(g: &oracle::OracleGroup, labels: &[String], triple: Triple) -> LabelledTriple {
    let gens: Vec<usize> = (0..labels.len()).filter(|k| triple.j >> k & 1 == 1).collect();
    let names: Vec<&str> = gens.iter().map(|&k| labels[k].as_str()).collect();
    let signs: String = gens.iter().map(|&k| if triple.sigma >> k & 1 == 1 { '-' } else { '+' }).collect();
    let mut label = format!("T[{};{}", names.join(","), signs);
    let id_theta: Vec<u8> = (0..labels.len() as u8).collect();
    if triple.z.w != g.identity() || triple.z.theta != id_theta {
        let word: Vec<&str> = g.reduced_word(triple.z.w).iter().map(|&k| labels[k].as_str()).collect();
        let w = if word.is_empty() { "1".to_string() } else { word.join("") };
        label.push_str(&format!(";z={w}"));
        if triple.z.theta != id_theta {
            let th: Vec<String> = triple.z.theta.iter().map(|t| t.to_string()).collect();
            label.push_str(&format!(",theta=[{}]", th.join(",")));
        }
    }
    label.push(']');
    LabelledTriple { label, triple }
}

// -------------------------------------------------------- dihedral groups

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DihedralIrr {
    Triv,
    Sgn,
    /// `+` on `s`, `-` on `t` (even `m` only).
    PlusMinus,
    MinusPlus,
    /// Two-dimensional `ρ_h`.
    Rho(u32),
}

impl fmt::Display for DihedralIrr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DihedralIrr::Triv => write!(f, "1"),
            DihedralIrr::Sgn => write!(f, "sgn"),
            DihedralIrr::PlusMinus => write!(f, "1+-"),
            DihedralIrr::MinusPlus => write!(f, "1-+"),
            DihedralIrr::Rho(h) => write!(f, "rho{h}"),
        }
    }
}

/// Nonnegative combination of dihedral irreducibles.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DihedralCharacter(pub BTreeMap<DihedralIrr, i64>);

impl DihedralCharacter {
    fn add(&mut self, irr: DihedralIrr, c: i64) {
        *self.0.entry(irr).or_insert(0) += c;
    }

    fn add_all(&mut self, other: &DihedralCharacter) {
        for (&k, &v) in &other.0 {
            self.add(k, v);
        }
    }
}

impl fmt::Display for DihedralCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .0
            .iter()
            .filter(|(_, c)| **c != 0)
            .map(|(k, c)| if *c == 1 { k.to_string() } else { format!("{c}*{k}") })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl Serialize for DihedralCharacter {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let m: BTreeMap<String, i64> = self.0.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        m.serialize(s)
    }
}

fn rho_count(m: u32) -> u32 {
    if m % 2 == 1 {
        (m - 1) / 2
    } else {
        m / 2 - 1
    }
}

pub fn dihedral_irreducibles(m: u32) -> Vec<DihedralIrr> {
    let mut v = vec![DihedralIrr::Triv, DihedralIrr::Sgn];
    if m % 2 == 0 {
        v.extend([DihedralIrr::PlusMinus, DihedralIrr::MinusPlus]);
    }
    v.extend((1..=rho_count(m)).map(DihedralIrr::Rho));
    v
}

const S_BIT: u32 = 1;
const T_BIT: u32 = 2;

fn linear_irr(sigma: u32) -> DihedralIrr {
    match sigma {
        0 => DihedralIrr::Triv,
        3 => DihedralIrr::Sgn,
        T_BIT => DihedralIrr::PlusMinus,
        _ => DihedralIrr::MinusPlus,
    }
}

/// Model triples `(J, {1}, σ)` of `I₂(m)` (every perfect class of a
/// parabolic is `≡` to the identity one), with `J` and `σ` as masks over
/// `s = bit 0`, `t = bit 1`.
pub fn dihedral_triples(m: u32) -> Vec<(u32, u32)> {
    let mut v = vec![(0, 0)];
    for j in [S_BIT, T_BIT] {
        v.push((j, 0));
        v.push((j, j));
    }
    let linear: &[u32] = if m % 2 == 0 { &[0, 3, T_BIT, S_BIT] } else { &[0, 3] };
    v.extend(linear.iter().map(|&s| (3, s)));
    v
}

/// Character of `(J, {1}, σ)` in `I₂(m)` in closed form.
pub fn dihedral_triple_character(m: u32, j: u32, sigma: u32) -> Result<DihedralCharacter> {
    if m < 3 {
        return Err(CoxError::Domain(format!("dihedral closed form needs m >= 3, got {m}")));
    }
    let even = m % 2 == 0;
    let mut chi = DihedralCharacter::default();
    let rhos = |chi: &mut DihedralCharacter, c: i64| {
        for h in 1..=rho_count(m) {
            chi.add(DihedralIrr::Rho(h), c);
        }
    };
    match j {
        0 => {
            for irr in dihedral_irreducibles(m) {
                chi.add(irr, if matches!(irr, DihedralIrr::Rho(_)) { 2 } else { 1 });
            }
        }
        S_BIT | T_BIT => {
            let neg = sigma == j;
            chi.add(if neg { DihedralIrr::Sgn } else { DihedralIrr::Triv }, 1);
            if even {
                // The linear character restricting to σ on ⟨j⟩ besides 1/sgn.
                let other = match (j == S_BIT, neg) {
                    (true, false) | (false, true) => DihedralIrr::PlusMinus,
                    _ => DihedralIrr::MinusPlus,
                };
                chi.add(other, 1);
            }
            rhos(&mut chi, 1);
        }
        3 => {
            if !even && !(sigma == 0 || sigma == 3) {
                return Err(CoxError::Domain(format!("σ mask {sigma} is not a character of I2({m})")));
            }
            chi.add(linear_irr(sigma), 1);
        }
        _ => return Err(CoxError::Domain(format!("bad parabolic mask {j}"))),
    }
    Ok(chi)
}

fn dihedral_label(j: u32, sigma: u32) -> String {
    let gens: Vec<(&str, u32)> = [("s", S_BIT), ("t", T_BIT)].into_iter().filter(|(_, b)| j & b != 0).collect();
    let names: Vec<&str> = gens.iter().map(|(n, _)| *n).collect();
    let signs: String = gens.iter().map(|(_, b)| if sigma & b != 0 { '-' } else { '+' }).collect();
    format!("T[{};{}]", names.join(","), signs)
}

fn dihedral_member(j: u32, sigma: u32) -> LabelledTriple {
    LabelledTriple {
        label: dihedral_label(j, sigma),
        triple: Triple { j, z: ExtendedElement { w: 0, theta: vec![0, 1] }, sigma },
    }
}

fn swap_st(mask: u32) -> u32 {
    (mask & S_BIT) << 1 | (mask & T_BIT) >> 1
}

fn dihedral_candidate(
    family: Option<ModelFamily>,
    m: u32,
    members: &[(u32, u32)],
) -> Result<PerfectModelCandidate> {
    let mut sum = DihedralCharacter::default();
    for &(j, s) in members {
        sum.add_all(&dihedral_triple_character(m, j, s)?);
    }
    let failure = dihedral_irreducibles(m)
        .into_iter()
        .map(|irr| (irr, sum.0.get(&irr).copied().unwrap_or(0)))
        .find(|&(_, c)| c != 1);
    let status = match failure {
        None => CandidateStatus::VerifiedSymbolic,
        Some((irr, c)) => CandidateStatus::Failed { reason: format!("{irr} has coefficient {c}") },
    };
    Ok(PerfectModelCandidate {
        family,
        group: GroupSpec::Dihedral(m),
        members: ModelMembers::Triples(members.iter().map(|&(j, s)| dihedral_member(j, s)).collect()),
        summed: Some(Summed::Dihedral(sum)),
        status,
    })
}

fn dihedral_known_model(family: ModelFamily, m: u32) -> Result<PerfectModelCandidate> {
    let members: Vec<(u32, u32)> = match family {
        ModelFamily::I2Odd => {
            require(m >= 5 && m % 2 == 1, family, m, "odd m >= 5")?;
            vec![(3, 0), (S_BIT, S_BIT)]
        }
        ModelFamily::I2Even(v) => {
            require(m >= 6 && m % 2 == 0, family, m, "even m >= 6")?;
            match v {
                1 => vec![(3, 0), (3, T_BIT), (S_BIT, S_BIT)],
                2 => vec![(3, 0), (3, S_BIT), (T_BIT, T_BIT)],
                3 => vec![(3, 3), (3, S_BIT), (S_BIT, 0)],
                4 => vec![(3, 3), (3, T_BIT), (T_BIT, 0)],
                _ => return Err(CoxError::Domain(format!("I2even variant {v} out of range"))),
            }
        }
        _ => unreachable!("dihedral families only"),
    };
    dihedral_candidate(Some(family), m, &members)
}

/// Closed-form classification of `I₂(m)`, `m ≥ 5`. Strong equivalence is
/// the `s ↔ t` swap when `m` is odd (conjugation by `w₀`) and trivial on
/// these representatives when `m` is even; full equivalence adds the bar
/// map and, for even `m`, the outer swap.
pub fn classify_dihedral(m: u32, rel: EquivalenceRelation) -> Result<Classification> {
    if m < 5 {
        return Err(CoxError::Domain(format!("dihedral closed form covers m >= 5, got {m}")));
    }
    let triples = dihedral_triples(m);
    let chars = triples
        .iter()
        .map(|&(j, s)| dihedral_triple_character(m, j, s))
        .collect::<Result<Vec<_>>>()?;
    let irrs = dihedral_irreducibles(m);
    let pos: BTreeMap<DihedralIrr, usize> = irrs.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let rows: Vec<Vec<usize>> = chars
        .iter()
        .map(|c| {
            if c.0.values().any(|&v| v > 1) {
                Vec::new()
            } else {
                c.0.iter().filter(|(_, &v)| v == 1).map(|(k, _)| pos[k]).collect()
            }
        })
        .collect();
    let covers = ExactCover::new(irrs.len(), rows).covers().covers;

    let odd = m % 2 == 1;
    let canon = |(j, s): (u32, u32)| -> (u32, u32) {
        let mut orbit = vec![(j, s)];
        if odd {
            orbit.push((swap_st(j), swap_st(s)));
        }
        if rel == EquivalenceRelation::Full {
            let more: Vec<(u32, u32)> = orbit.iter().map(|&(j, s)| (j, s ^ j)).collect();
            orbit.extend(more);
            if !odd {
                let more: Vec<(u32, u32)> = orbit.iter().map(|&(j, s)| (swap_st(j), swap_st(s))).collect();
                orbit.extend(more);
            }
        }
        orbit.into_iter().min().expect("nonempty orbit")
    };
    let mut models = Vec::new();
    let mut keys = Vec::new();
    for cover in covers {
        let members: Vec<(u32, u32)> = cover.iter().map(|&r| triples[r]).collect();
        keys.push(members.iter().map(|&t| format!("{:?}", canon(t))).collect());
        models.push(dihedral_candidate(None, m, &members)?);
    }
    Ok(Classification { group: GroupSpec::Dihedral(m), relation: rel, models, classes: group_classes(keys) })
}

// -------------------------------------------------------------------- H₃

fn h3_known_model(variant: u8, n: u32) -> Result<PerfectModelCandidate> {
    require(n == 3, ModelFamily::H3(variant), n, "rank 3")?;
    // h1 = bit 0, h2 = bit 1, h3 = bit 2; h1 and h3 commute.
    let members: Vec<(u32, u32)> = match variant {
        1 => vec![(0b111, 0), (0b111, 0b111), (0b101, 0b100)],
        2 => vec![(0b111, 0), (0b111, 0b111), (0b101, 0b001)],
        3 => vec![(0b011, 0), (0b110, 0b110)],
        4 => vec![(0b011, 0b011), (0b110, 0)],
        _ => return Err(CoxError::Domain(format!("H3 variant {variant} out of range"))),
    };
    let labels = ["h1", "h2", "h3"];
    let triples = members
        .into_iter()
        .map(|(j, sigma)| {
            let gens: Vec<usize> = (0..3).filter(|k| j >> k & 1 == 1).collect();
            let names: Vec<&str> = gens.iter().map(|&k| labels[k]).collect();
            let signs: String = gens.iter().map(|&k| if sigma >> k & 1 == 1 { '-' } else { '+' }).collect();
            LabelledTriple {
                label: format!("T[{};{}]", names.join(","), signs),
                triple: Triple { j, z: ExtendedElement { w: 0, theta: vec![0, 1, 2] }, sigma },
            }
        })
        .collect();
    Ok(PerfectModelCandidate {
        family: Some(ModelFamily::H3(variant)),
        group: GroupSpec::H3,
        members: ModelMembers::Triples(triples),
        summed: None,
        status: CandidateStatus::Unverified,
    })
}

// ------------------------------------------------- even-D nonexistence

/// One candidate's contribution in the optimistic degenerate cover.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateRow {
    pub index: ModelIndex,
    /// `[2, n-2; β₀, β₁; ±∓, γ₁]` shape.
    pub psi_form: bool,
    pub nondegenerate: Vec<IrrLabel>,
    /// Degenerate labels the candidate may contribute, over all splits of
    /// its unresolved mass.
    pub degenerate_reach: Vec<IrrLabel>,
}

/// Machine-checkable record of why `D_n` (even `n`) has no perfect model.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonexistenceCertificate {
    pub rank: u32,
    /// Cores whose `+`/`-` pair no cover of the nondegenerate labels can
    /// complete.
    pub uncoverable: Vec<Partition>,
    pub rows: Vec<CertificateRow>,
    /// Every exact cover of the nondegenerate labels, as row positions.
    pub nondegenerate_covers: Vec<Vec<usize>>,
    /// Per cover, the cores it leaves incomplete (never empty).
    pub failing_cores: Vec<Vec<Partition>>,
    pub narrative: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "outcome")]
pub enum NonexistenceOutcome {
    Certificate(NonexistenceCertificate),
    /// A cover that survives the optimistic test; a real model is possible.
    Counterexample { indices: Vec<ModelIndex> },
}

fn is_psi_form(idx: &ModelIndex) -> bool {
    match idx {
        ModelIndex::D(x) => {
            x.left.alpha == 2
                && !x.negated
                && matches!(x.left.gamma, Gamma::Pm | Gamma::Mp)
                && matches!(x.right.gamma, Gamma::Triv | Gamma::Sgn)
        }
        _ => false,
    }
}

fn sign_labels(core: &Partition) -> [IrrLabel; 2] {
    [degen(core, Sign::Plus), degen(core, Sign::Minus)]
}

/// Cores of the degenerate pairs left incomplete by a cover, where each
/// member may contribute any subset of its reach (the optimistic reading).
fn optimistic_failures(rows: &[CertificateRow], cover: &[usize], cores: &[Partition]) -> Vec<Partition> {
    let reach: BTreeSet<&IrrLabel> = cover.iter().flat_map(|&r| rows[r].degenerate_reach.iter()).collect();
    cores
        .iter()
        .filter(|c| sign_labels(c).iter().any(|l| !reach.contains(l)))
        .cloned()
        .collect()
}

fn nondegenerate_covers(n: u32, rows: &[CertificateRow]) -> Result<Vec<Vec<usize>>> {
    let universe: Vec<IrrLabel> =
        irr_universe(WeylType::D, n).into_iter().filter(|l| !matches!(l, IrrLabel::DDegen(_))).collect();
    let pos: BTreeMap<&IrrLabel, usize> = universe.iter().enumerate().map(|(i, l)| (l, i)).collect();
    let bitrows = rows
        .iter()
        .map(|r| {
            r.nondegenerate
                .iter()
                .map(|l| pos.get(l).copied().ok_or_else(|| CoxError::Domain(format!("{l} not a label of D{n}"))))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ExactCover::new(universe.len(), bitrows).covers().covers)
}

/// Rows with an empty nondegenerate part never enter a nondegenerate cover;
/// they are folded into every cover's reach instead.
fn reach_with_free_rows(rows: &[CertificateRow], cover: &[usize]) -> Vec<usize> {
    let mut all: Vec<usize> = cover.to_vec();
    all.extend((0..rows.len()).filter(|&r| rows[r].nondegenerate.is_empty()));
    all.sort_unstable();
    all.dedup();
    all
}

/// Even-rank type-D nonexistence check. Each multiplicity-free candidate
/// may contribute any degenerate labels its character can reach; if every
/// exact cover of the nondegenerate labels still misses a sign of some
/// core, no perfect model exists.
pub fn d_even_nonexistence(n: u32) -> Result<NonexistenceOutcome> {
    if n < 6 || n % 2 == 1 {
        return Err(CoxError::Domain(format!("d_even_nonexistence needs even n >= 6, got {n}")));
    }
    let mut rows = Vec::new();
    for entry in enumerate_indices(WeylType::D, n, true, DegenSplitPolicy::Unresolved)? {
        if entry.mf == MfStatus::False {
            continue;
        }
        let Some(row) = candidate_row(entry.index.clone(), &entry.character) else { continue };
        let mut reach: BTreeSet<IrrLabel> =
            row.labels.iter().filter(|l| matches!(l, IrrLabel::DDegen(_))).cloned().collect();
        reach.extend(row.degenerate_options.iter().flatten().cloned());
        rows.push(CertificateRow {
            psi_form: is_psi_form(&entry.index),
            index: entry.index,
            nondegenerate: row.labels.into_iter().filter(|l| !matches!(l, IrrLabel::DDegen(_))).collect(),
            degenerate_reach: reach.into_iter().collect(),
        });
    }
    let cores = partitions_of(n / 2);
    let covers = nondegenerate_covers(n, &rows)?;
    let mut failing = Vec::new();
    for cover in &covers {
        let f = optimistic_failures(&rows, &reach_with_free_rows(&rows, cover), &cores);
        if f.is_empty() {
            return Ok(NonexistenceOutcome::Counterexample {
                indices: cover.iter().map(|&r| rows[r].index.clone()).collect(),
            });
        }
        failing.push(f);
    }
    let uncoverable: BTreeSet<Partition> = failing.iter().flatten().cloned().collect();
    let psi_cores: BTreeSet<String> = rows
        .iter()
        .filter(|r| r.psi_form)
        .flat_map(|r| r.degenerate_reach.iter())
        .filter_map(|l| match l {
            IrrLabel::DDegen(d) => Some(d.core.to_string()),
            _ => None,
        })
        .collect();
    let narrative = vec![
        format!("{} multiplicity-free strong-class representatives of D{n}", rows.len()),
        format!("{} of them in psi form", rows.iter().filter(|r| r.psi_form).count()),
        format!("cores reached by psi-form rows: {}", psi_cores.into_iter().collect::<Vec<_>>().join(", ")),
        format!("{} exact covers of the nondegenerate labels", covers.len()),
        format!(
            "each leaves some core with a missing sign; cores failing somewhere: {}",
            uncoverable.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")
        ),
    ];
    Ok(NonexistenceOutcome::Certificate(NonexistenceCertificate {
        rank: n,
        uncoverable: uncoverable.into_iter().collect(),
        rows,
        nondegenerate_covers: covers,
        failing_cores: failing,
        narrative,
    }))
}

/// Re-runs the optimistic cover from the recorded rows alone and checks
/// that it reproduces the recorded covers and failures.
pub fn replay_certificate(cert: &NonexistenceCertificate) -> Result<bool> {
    let n = cert.rank;
    let cores = partitions_of(n / 2);
    let covers = nondegenerate_covers(n, &cert.rows)?;
    if covers != cert.nondegenerate_covers || covers.len() != cert.failing_cores.len() {
        return Ok(false);
    }
    let mut union = BTreeSet::new();
    for (cover, recorded) in covers.iter().zip(&cert.failing_cores) {
        let f = optimistic_failures(&cert.rows, &reach_with_free_rows(&cert.rows, cover), &cores);
        if f.is_empty() || &f != recorded {
            return Ok(false);
        }
        union.extend(f);
    }
    Ok(union.into_iter().collect::<Vec<_>>() == cert.uncoverable)
}

/// Checks that the recorded rows are exactly what the current character
/// computation produces.
pub fn certificate_rows_match(cert: &NonexistenceCertificate) -> Result<bool> {
    match d_even_nonexistence(cert.rank)? {
        NonexistenceOutcome::Certificate(fresh) => Ok(fresh.rows == cert.rows),
        NonexistenceOutcome::Counterexample { .. } => Ok(false),
    }
}

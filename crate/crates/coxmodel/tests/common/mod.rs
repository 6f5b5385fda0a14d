//! Exhaustive checks shared by the property suites and the acceptance
//! target. Each check returns a one-line summary or the first failure.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use coxmodel::char_ring::{
    a_label, b_label, d_degen, d_label, degree, irr_universe, is_multiplicity_free, twist, twist_label, MfStatus,
    TwistKind, VirtualCharacter, WeylType,
};
use coxmodel::classification::{
    classify, classify_by_oracle, classify_dihedral, d_even_nonexistence, certificate_rows_match,
    is_perfect_symbolic, known_model, replay_certificate, verify_with_oracle, CandidateStatus, Classification,
    ModelFamily, ModelMembers, NonexistenceOutcome, PerfectModelCandidate, PerfectVerdict,
};
use coxmodel::induction::{
    bullet, bullet_d_coarse, ind_a_to_b, ind_a_to_d, induce_d_to_b, project, restrict_b_to_d, DegenSplitPolicy,
    Projection, Side,
};
use coxmodel::lr::{lr_coefficient, lr_expand};
use coxmodel::model_index::{
    all_indices, canonical_form, character_of_index, index_d, pi_d, pi_l, pi_r, transform, Arrow, Beta,
    EquivalenceRelation, Gamma, ModelIndex, Transform,
};
use coxmodel::oracle::{
    cached_group, group_for, involution_count, irreducible_degree_sum, oracle_decompose, oracle_search,
    symmetric_character, EquivKey, GroupSpec, OracleGroup, SignedPermutation,
};
use coxmodel::partitions::{
    enumerate, partitions_of, CombineMode, Family, IrrLabel, Partition, Sign,
};
use coxmodel::Rational;

pub type Check = Result<String, String>;

pub const ORACLE_POLICY: DegenSplitPolicy = DegenSplitPolicy::OracleAssisted { cap: 8 };

fn fail<T>(msg: String) -> Result<T, String> {
    Err(msg)
}

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return fail(format!($($fmt)+));
        }
    };
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

pub fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

pub fn part(parts: &[u32]) -> Partition {
    Partition::new(parts.to_vec()).expect("valid partition")
}

/// All `(λ, μ)` with `|λ| + |μ| ≤ total`.
pub fn pairs_up_to(total: u32) -> Vec<(Partition, Partition)> {
    let mut out = Vec::new();
    for n in 0..=total {
        for a in 0..=n {
            for lam in partitions_of(a) {
                for mu in partitions_of(n - a) {
                    out.push((lam.clone(), mu));
                }
            }
        }
    }
    out
}

// ------------------------------------------------------------- partitions

pub fn check_transpose_involution(max: u32) -> Check {
    let mut count = 0;
    for n in 0..=max {
        for p in partitions_of(n) {
            let t = p.transpose();
            ensure!(t.weight() == n, "transpose of {p} has weight {}", t.weight());
            ensure!(t.transpose() == p, "transpose is not an involution at {p}");
            count += 1;
        }
    }
    Ok(format!("{count} partitions of n <= {max}"))
}

/// Partition numbers from Euler's pentagonal recurrence.
pub fn pentagonal_partition_numbers(max: u32) -> Vec<u64> {
    let mut p = vec![0i64; max as usize + 1];
    p[0] = 1;
    for n in 1..=max as i64 {
        let mut total = 0i64;
        for k in 1.. {
            let g1 = k * (3 * k - 1) / 2;
            if g1 > n {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            total += sign * p[(n - g1) as usize];
            let g2 = k * (3 * k + 1) / 2;
            if g2 <= n {
                total += sign * p[(n - g2) as usize];
            }
        }
        p[n as usize] = total;
    }
    p.into_iter().map(|v| v as u64).collect()
}

pub fn check_partition_counts(max: u32) -> Check {
    let expected = pentagonal_partition_numbers(max);
    for n in 0..=max {
        let listed = partitions_of(n).len() as u64;
        let enumerated = enumerate(n, Family::All).map_err(err)?.len() as u64;
        ensure!(
            listed == expected[n as usize] && enumerated == listed,
            "p({n}): recurrence {} listed {listed} enumerated {enumerated}",
            expected[n as usize]
        );
    }
    Ok(format!("p(n) for n <= {max}, p({max}) = {}", expected[max as usize]))
}

pub fn check_ocols_orows(max: u32) -> Check {
    let mut families = 0;
    for n in 0..=max {
        let mut seen = 0;
        for q in (n % 2..=n).step_by(2) {
            let rows = enumerate(n, Family::ORows(q)).map_err(err)?;
            let cols: BTreeSet<IrrLabel> = enumerate(n, Family::OCols(q)).map_err(err)?.into_iter().collect();
            let transposed: BTreeSet<IrrLabel> = rows
                .iter()
                .map(|l| match l {
                    IrrLabel::A(p) => IrrLabel::A(p.transpose()),
                    other => other.clone(),
                })
                .collect();
            ensure!(cols == transposed, "OCols({n},{q}) differs from transposed ORows");
            seen += rows.len();
            families += 1;
        }
        ensure!(seen == partitions_of(n).len(), "ORows({n},·) do not partition the partitions of {n}");
    }
    Ok(format!("{families} (n,q) families, n <= {max}"))
}

pub fn check_even_halving(max: u32) -> Check {
    for n in (0..=max).step_by(2) {
        let halves: BTreeSet<Partition> = partitions_of(n)
            .into_iter()
            .filter(|p| p.all_parts_even())
            .map(|p| Partition::new(p.parts().iter().map(|x| x / 2).collect()).expect("halved"))
            .collect();
        let target: BTreeSet<Partition> = partitions_of(n / 2).into_iter().collect();
        ensure!(halves == target, "halving fails at n = {n}");
        let erows = enumerate(n, Family::ERows).map_err(err)?.len();
        ensure!(erows == target.len(), "ERows({n}) has {erows} members, expected {}", target.len());
    }
    Ok(format!("even n <= {max}"))
}

// ----------------------------------------------------------------- LR rule

fn z_factor(rho: &[u32]) -> i64 {
    let mut counts: BTreeMap<u32, i64> = BTreeMap::new();
    for &r in rho {
        *counts.entry(r).or_insert(0) += 1;
    }
    counts
        .into_iter()
        .map(|(i, m)| i64::from(i).pow(m as u32) * (1..=m).product::<i64>())
        .product()
}

/// `c^ν_{λμ}` as `⟨Ind_{S_a×S_b}(χ^λ⊗χ^μ), χ^ν⟩` from character values.
pub fn lr_by_characters(lam: &Partition, mu: &Partition, nu: &Partition) -> i64 {
    let (a, b) = (lam.weight(), mu.weight());
    if nu.weight() != a + b {
        return 0;
    }
    let mut acc = Rational::from_integer(0);
    for r1 in partitions_of(a) {
        for r2 in partitions_of(b) {
            let mut cycles: Vec<u32> = r1.parts().iter().chain(r2.parts()).copied().collect();
            cycles.sort_unstable_by(|x, y| y.cmp(x));
            let v = symmetric_character(lam, r1.parts())
                * symmetric_character(mu, r2.parts())
                * symmetric_character(nu, &cycles);
            acc += Rational::new(v, z_factor(r1.parts()) * z_factor(r2.parts()));
        }
    }
    assert!(acc.is_integer(), "non-integral inner product");
    acc.to_integer()
}

pub fn check_lr_against_characters(total: u32) -> Check {
    let mut count = 0;
    for (lam, mu) in pairs_up_to(total) {
        if lam.is_empty() || mu.is_empty() {
            continue;
        }
        for nu in partitions_of(lam.weight() + mu.weight()) {
            let fast = lr_coefficient(&lam, &mu, &nu) as i64;
            let slow = lr_by_characters(&lam, &mu, &nu);
            ensure!(fast == slow, "c^{nu}_{{{lam},{mu}}}: tableaux {fast}, characters {slow}");
            count += 1;
        }
    }
    Ok(format!("{count} coefficients, |λ|+|μ| <= {total}"))
}

pub fn transposed_expansion(map: &BTreeMap<Partition, u64>) -> BTreeMap<Partition, u64> {
    map.iter().map(|(p, c)| (p.transpose(), *c)).collect()
}

pub fn check_lr_pair_symmetries(lam: &Partition, mu: &Partition) -> Result<(), String> {
    let forward = lr_expand(lam, mu);
    ensure!(forward == lr_expand(mu, lam), "c_{{{lam},{mu}}} is not symmetric");
    let t = lr_expand(&lam.transpose(), &mu.transpose());
    ensure!(t == transposed_expansion(&forward), "transpose symmetry fails for ({lam},{mu})");
    Ok(())
}

pub fn check_lr_symmetries(total: u32) -> Check {
    let pairs = pairs_up_to(total);
    for (lam, mu) in &pairs {
        check_lr_pair_symmetries(lam, mu)?;
    }
    Ok(format!("{} pairs, |λ|+|μ| <= {total}", pairs.len()))
}

pub fn check_monotonicity(total: u32, rmax: u32) -> Check {
    let mut count = 0;
    for (lam, mu) in pairs_up_to(total) {
        for (nu, c) in lr_expand(&lam, &mu) {
            for r in 1..=rmax {
                let col = Partition::column(r);
                let row = Partition::row(r);
                let by_sum = lr_coefficient(&lam, &mu.combine(&col, CombineMode::Sum), &nu.combine(&col, CombineMode::Sum));
                ensure!(by_sum >= c, "c^{nu}_{{{lam},{mu}}} = {c} but the (1^{r}) shift gives {by_sum}");
                let by_union =
                    lr_coefficient(&lam, &mu.combine(&row, CombineMode::Union), &nu.combine(&row, CombineMode::Union));
                ensure!(by_union >= c, "c^{nu}_{{{lam},{mu}}} = {c} but the ({r}) union gives {by_union}");
                count += 2;
            }
        }
    }
    Ok(format!("{count} inequalities, weights <= {total}, r <= {rmax}"))
}

pub fn check_lr_sum_union_positive(total: u32) -> Check {
    let pairs = pairs_up_to(total);
    for (lam, mu) in &pairs {
        let sum = lam.combine(mu, CombineMode::Sum);
        let union = lam.combine(mu, CombineMode::Union);
        ensure!(lr_coefficient(lam, mu, &sum) >= 1, "c^{sum}_{{{lam},{mu}}} = 0");
        ensure!(lr_coefficient(lam, mu, &union) >= 1, "c^{union}_{{{lam},{mu}}} = 0");
    }
    Ok(format!("{} pairs, |λ|+|μ| <= {total}", pairs.len()))
}

// ------------------------------------------------------------ characters

pub fn universe_ranks(ty: WeylType, max: u32) -> std::ops::RangeInclusive<u32> {
    match ty {
        WeylType::D => 2..=max,
        _ => 1..=max,
    }
}

pub fn check_twist_involutions(max: u32) -> Check {
    let mut count = 0;
    for ty in [WeylType::A, WeylType::B, WeylType::D] {
        for n in universe_ranks(ty, max) {
            for label in irr_universe(ty, n) {
                let s = twist_label(ty, n, &label, TwistKind::Sgn).map_err(err)?;
                ensure!(twist_label(ty, n, &s, TwistKind::Sgn).map_err(err)? == label, "sgn twist of {label} ({ty}{n})");
                ensure!(degree(&s).map_err(err)? == degree(&label).map_err(err)?, "sgn twist changes the degree of {label}");
                if ty == WeylType::D {
                    let d = twist_label(ty, n, &label, TwistKind::Diamond).map_err(err)?;
                    ensure!(twist_label(ty, n, &d, TwistKind::Diamond).map_err(err)? == label, "diamond twist of {label}");
                    match &label {
                        IrrLabel::DNondeg(_) => ensure!(d == label, "diamond moves {label}"),
                        IrrLabel::DDegen(x) => ensure!(
                            d == d_degen(x.core.clone(), x.sign.flip()),
                            "diamond does not flip the sign of {label}"
                        ),
                        _ => return fail(format!("non-D label {label} in a D universe")),
                    }
                }
                count += 1;
            }
        }
    }
    Ok(format!("{count} labels, ranks <= {max}"))
}

/// Degree sum over the symbolic universe against the oracle's involution
/// count.
pub fn check_frobenius_schur_labels(ty: WeylType, max: u32) -> Check {
    for n in universe_ranks(ty, max) {
        let symbolic: u64 = irr_universe(ty, n).iter().map(|l| degree(l).map_err(err)).sum::<Result<u64, _>>()?;
        let g = cached_group(group_for(ty, n)).map_err(err)?;
        let r2 = g.sqrt_count();
        let at_identity = r2.0[g.class_of(g.identity())];
        let involutions = involution_count(&g);
        ensure!(
            symbolic == involutions && at_identity as u64 == involutions,
            "{ty}{n}: Σ deg = {symbolic}, involutions {involutions}, r2(1) = {at_identity}"
        );
    }
    Ok(format!("{ty} ranks <= {max}"))
}

// -------------------------------------------------------------- induction

pub fn label_char(ty: WeylType, label: &IrrLabel) -> VirtualCharacter {
    VirtualCharacter::from_label(ty, label.weight(), label.clone()).expect("label fits")
}

pub fn binomial(n: u64, k: u64) -> u64 {
    (1..=k).fold(1, |acc, i| acc * (n - k + i) / i)
}

/// `[W_{a+b} : W_a × W_b]`. In type D the product subgroup `D_a × D_b`
/// has index `2·C(a+b, a)` once both factors are nontrivial.
pub fn product_index(ty: WeylType, a: u32, b: u32) -> u64 {
    let base = binomial(u64::from(a + b), u64::from(a));
    if ty == WeylType::D && a >= 1 && b >= 1 {
        2 * base
    } else {
        base
    }
}

pub fn check_degree_multiplicativity(total: u32) -> Check {
    let mut count = 0;
    for ty in [WeylType::A, WeylType::B, WeylType::D] {
        for a in universe_ranks(ty, total) {
            for b in universe_ranks(ty, total - a.min(total)) {
                if a + b > total {
                    continue;
                }
                for f in irr_universe(ty, a) {
                    for g in irr_universe(ty, b) {
                        let prod = bullet(ty, &label_char(ty, &f), &label_char(ty, &g)).map_err(err)?;
                        let expected = product_index(ty, a, b) * degree(&f).map_err(err)? * degree(&g).map_err(err)?;
                        let got = prod.degree().map_err(err)?;
                        ensure!(got as u64 == expected, "deg({f} •{ty} {g}) = {got}, expected {expected}");
                        count += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{count} label pairs, total weight <= {total}"))
}

fn a_char(p: &Partition) -> VirtualCharacter {
    VirtualCharacter::from_label(WeylType::A, p.weight(), a_label(p.clone())).expect("A label")
}

/// `π_L(b •_B Ind(a)) = π_L(b) •_A a`.
pub fn check_b_over_a_product_form(total: u32) -> Check {
    let mut count = 0;
    for i in 1..total {
        for j in 1..=total - i {
            for b in irr_universe(WeylType::B, i) {
                let bc = label_char(WeylType::B, &b);
                let left = project(Projection::PiL, &bc).map_err(err)?;
                for a in partitions_of(j) {
                    let ach = a_char(&a);
                    let lhs = project(Projection::PiL, &bullet(WeylType::B, &bc, &ind_a_to_b(&ach).map_err(err)?).map_err(err)?)
                        .map_err(err)?;
                    let rhs = bullet(WeylType::A, &left, &ach).map_err(err)?;
                    ensure!(lhs == rhs, "piL({b} •B Ind {a}) = {lhs}, piL({b}) •A {a} = {rhs}");
                    count += 1;
                }
            }
        }
    }
    Ok(format!("{count} products, weights <= {total}"))
}

/// `π_D(d •_D Ind(a)) = π_D(d) •_A a`.
pub fn check_d_over_a_product_form(total: u32) -> Check {
    let mut count = 0;
    for i in 2..total {
        for j in 1..=total - i {
            for d in irr_universe(WeylType::D, i) {
                let dc = label_char(WeylType::D, &d);
                let left = project(Projection::PiD, &dc).map_err(err)?;
                for a in partitions_of(j) {
                    let ach = a_char(&a);
                    let induced = ind_a_to_d(&ach, Side::Plus, ORACLE_POLICY).map_err(err)?;
                    let lhs = project(Projection::PiD, &bullet_d_coarse(&dc, &induced).map_err(err)?).map_err(err)?;
                    let rhs = bullet(WeylType::A, &left, &ach).map_err(err)?;
                    ensure!(lhs == rhs, "piD({d} •D Ind {a}) = {lhs}, piD({d}) •A {a} = {rhs}");
                    count += 1;
                }
            }
        }
    }
    Ok(format!("{count} products, weights <= {total}"))
}

/// Mackey on the index-two pair `D_n ⊂ B_n`: `Res Ind χ = χ + χ^⋄` and
/// `Ind Res (λ,μ) = (λ,μ) + (μ,λ)`.
pub fn check_bd_reciprocity(max: u32) -> Check {
    let mut count = 0;
    for n in 2..=max {
        for label in irr_universe(WeylType::D, n) {
            let chi = label_char(WeylType::D, &label);
            let back = restrict_b_to_d(&induce_d_to_b(&chi).map_err(err)?).map_err(err)?;
            let mut expected = chi.clone();
            expected.add(&twist(&chi, TwistKind::Diamond).map_err(err)?).map_err(err)?;
            ensure!(back == expected, "Res Ind {label} = {back}, expected {expected}");
            count += 1;
        }
        for label in irr_universe(WeylType::B, n) {
            let IrrLabel::B(bp) = &label else { unreachable!() };
            let chi = label_char(WeylType::B, &label);
            let back = induce_d_to_b(&restrict_b_to_d(&chi).map_err(err)?).map_err(err)?;
            let mut expected = chi.clone();
            expected.add_label(b_label(bp.second.clone(), bp.first.clone()), 1).map_err(err)?;
            ensure!(back == expected, "Ind Res {label} = {back}, expected {expected}");
            count += 1;
        }
    }
    Ok(format!("{count} labels, ranks <= {max}"))
}

// ------------------------------------------------------------ model index

pub fn index_ranks(ty: WeylType, max: u32) -> std::ops::RangeInclusive<u32> {
    match ty {
        WeylType::A => 1..=max,
        _ => 2..=max,
    }
}

pub fn indices(ty: WeylType, n: u32) -> Vec<ModelIndex> {
    all_indices(ty, n, n as usize)
}

pub fn check_dual_involution(max: u32) -> Check {
    let mut count = 0;
    for ty in [WeylType::A, WeylType::B, WeylType::D] {
        for n in index_ranks(ty, max) {
            for idx in indices(ty, n) {
                let dual = transform(&idx, Transform::Dual).map_err(err)?;
                ensure!(dual.is_valid(), "dual of {idx} is invalid: {dual}");
                let back = transform(&dual, Transform::Dual).map_err(err)?;
                ensure!(back == idx, "(T∨)∨ = {back} for T = {idx}");
                count += 1;
            }
        }
    }
    Ok(format!("{count} indices, ranks <= {max}"))
}

pub fn check_bar_and_dual_characters(max: u32) -> Check {
    let mut count = 0;
    for ty in [WeylType::A, WeylType::B, WeylType::D] {
        for n in index_ranks(ty, max) {
            for idx in indices(ty, n) {
                let chi = character_of_index(&idx, ORACLE_POLICY).map_err(err)?;
                let bar = transform(&idx, Transform::Bar).map_err(err)?;
                let bar_chi = character_of_index(&bar, ORACLE_POLICY).map_err(err)?;
                let sgn = twist(&chi, TwistKind::Sgn).map_err(err)?;
                ensure!(bar_chi == sgn, "χ of bar({idx}) = {bar_chi}, sgn·χ = {sgn}");
                let dual = transform(&idx, Transform::Dual).map_err(err)?;
                let dual_chi = character_of_index(&dual, ORACLE_POLICY).map_err(err)?;
                ensure!(dual_chi == chi, "χ of dual({idx}) = {dual_chi}, χ = {chi}");
                count += 1;
            }
        }
    }
    Ok(format!("{count} indices, ranks <= {max}"))
}

fn projected_index_character(target: Option<coxmodel::model_index::ModelIndexA>, n: u32) -> Result<VirtualCharacter, String> {
    match target {
        Some(a) => character_of_index(&ModelIndex::A(a), ORACLE_POLICY).map_err(err),
        None => Ok(VirtualCharacter::zero(WeylType::A, n)),
    }
}

pub fn check_projection_commutation(max: u32) -> Check {
    let mut count = 0;
    for n in 2..=max {
        for idx in indices(WeylType::B, n) {
            let ModelIndex::B(x) = &idx else { unreachable!() };
            let chi = character_of_index(&idx, ORACLE_POLICY).map_err(err)?;
            for (kind, target) in [(Projection::PiL, pi_l(x)), (Projection::PiR, pi_r(x))] {
                let lhs = projected_index_character(target.clone(), n)?;
                let rhs = project(kind, &chi).map_err(err)?;
                ensure!(lhs == rhs, "{kind:?} at {idx}: index side {lhs}, character side {rhs}");
                count += 1;
            }
        }
        for idx in indices(WeylType::D, n) {
            let ModelIndex::D(x) = &idx else { unreachable!() };
            let chi = character_of_index(&idx, ORACLE_POLICY).map_err(err)?;
            let lhs = projected_index_character(pi_d(x), n)?;
            let rhs = project(Projection::PiD, &chi).map_err(err)?;
            ensure!(lhs == rhs, "piD at {idx}: index side {lhs}, character side {rhs}");
            count += 1;
        }
    }
    Ok(format!("{count} projections, n <= {max}"))
}

// ------------------------------------------------------------------ product multiplicity

#[derive(Default, Debug)]
pub struct ProductTally {
    pub products: usize,
    pub exceptions: Vec<String>,
}

impl ProductTally {
    fn record(&mut self, what: impl FnOnce() -> String, chi: &VirtualCharacter) -> Result<(), String> {
        self.products += 1;
        match is_multiplicity_free(chi).map_err(err)? {
            MfStatus::False => {}
            MfStatus::True => self.exceptions.push(format!("{} is multiplicity-free", what())),
            MfStatus::Unknown => self.exceptions.push(format!("{} is undecided", what())),
        }
        Ok(())
    }

    fn summary(self, what: &str) -> Check {
        if self.exceptions.is_empty() {
            Ok(format!("{} {what} products, zero exceptions", self.products))
        } else {
            Err(format!("{} exceptions, first: {}", self.exceptions.len(), self.exceptions[0]))
        }
    }
}

fn nonempty_partitions(max: u32) -> Vec<Partition> {
    (1..=max).flat_map(partitions_of).collect()
}

pub fn check_products_not_mf_a(total: u32) -> Check {
    let mut tally = ProductTally::default();
    let parts = nonempty_partitions(total);
    for lam in &parts {
        for mu in &parts {
            if lam.weight() + mu.weight() + 1 > total {
                continue;
            }
            let first = lr_expand(lam, mu);
            for nu in &parts {
                let n = lam.weight() + mu.weight() + nu.weight();
                if n > total {
                    continue;
                }
                let mut chi = VirtualCharacter::zero(WeylType::A, n);
                for (kappa, c) in &first {
                    for (out, d) in lr_expand(kappa, nu) {
                        chi.add_label(a_label(out), (c * d) as i64).map_err(err)?;
                    }
                }
                tally.record(|| format!("χ{lam}•χ{mu}•χ{nu}"), &chi)?;
            }
        }
    }
    tally.summary("A")
}

fn a_product(lam: &Partition, mu: &Partition) -> Result<VirtualCharacter, String> {
    bullet(WeylType::A, &a_char(lam), &a_char(mu)).map_err(err)
}

/// `Ind_{B_a × S_b × S_c}^{B_n}(f ⊗ χ^λ ⊗ χ^μ)` for every `f ∈ Irr(B_a)`,
/// `a ≥ 0`, `b, c ≥ 1`.
pub fn check_products_not_mf_b(total: u32) -> Check {
    let mut tally = ProductTally::default();
    let parts = nonempty_partitions(total);
    for a in 0..=total.saturating_sub(2) {
        let lefts: Vec<Option<IrrLabel>> =
            if a == 0 { vec![None] } else { irr_universe(WeylType::B, a).into_iter().map(Some).collect() };
        for lam in &parts {
            for mu in &parts {
                if a + lam.weight() + mu.weight() > total {
                    continue;
                }
                let right = ind_a_to_b(&a_product(lam, mu)?).map_err(err)?;
                for f in &lefts {
                    let chi = match f {
                        None => right.clone(),
                        Some(f) => bullet(WeylType::B, &label_char(WeylType::B, f), &right).map_err(err)?,
                    };
                    let name = f.as_ref().map(|f| f.to_string()).unwrap_or_else(|| "1".into());
                    tally.record(|| format!("χ{name}•B Ind(χ{lam}•χ{mu})"), &chi)?;
                }
            }
        }
    }
    tally.summary("B")
}

/// `Ind_{W_J}^{D_n}` for `|S − J| = 2`: `W_J = S_b × S_c` inside either
/// copy of `S_n`, or `D_a × S_b × S_c` with `a ≥ 2`. `D_2` is reducible and
/// skipped.
pub fn check_products_not_mf_d(total: u32) -> Check {
    let mut tally = ProductTally::default();
    let parts = nonempty_partitions(total);
    for lam in &parts {
        for mu in &parts {
            let n = lam.weight() + mu.weight();
            if n > total || n < 3 {
                continue;
            }
            let prod = a_product(lam, mu)?;
            for side in [Side::Plus, Side::Minus] {
                let chi = ind_a_to_d(&prod, side, ORACLE_POLICY).map_err(err)?;
                tally.record(|| format!("Ind_{side:?}(χ{lam}•χ{mu})"), &chi)?;
            }
            for a in 2..=total.saturating_sub(n) {
                let right = ind_a_to_d(&prod, Side::Plus, ORACLE_POLICY).map_err(err)?;
                for f in irr_universe(WeylType::D, a) {
                    let chi = bullet_d_coarse(&label_char(WeylType::D, &f), &right).map_err(err)?;
                    tally.record(|| format!("χ{f}•D Ind(χ{lam}•χ{mu})"), &chi)?;
                }
            }
        }
    }
    tally.summary("D")
}

// ---------------------------------------------------------------- oracle

/// Every group the suites build.
pub fn oracle_groups() -> Vec<GroupSpec> {
    let mut v: Vec<GroupSpec> = (1..=6).map(GroupSpec::SymA).collect();
    v.extend((2..=5).map(GroupSpec::SymB));
    v.extend((2..=6).map(GroupSpec::SymD));
    v.extend((3..=12).map(GroupSpec::Dihedral));
    v.push(GroupSpec::H3);
    v
}

pub fn check_fs_degree_identity(specs: &[GroupSpec]) -> Check {
    for &spec in specs {
        let g = cached_group(spec).map_err(err)?;
        let degrees = irreducible_degree_sum(&g).map_err(err)?;
        let involutions = involution_count(&g) as i64;
        let r2 = g.sqrt_count();
        ensure!(
            degrees == involutions && r2.0[g.class_of(g.identity())] == involutions,
            "{spec}: Σ deg = {degrees}, involutions = {involutions}"
        );
        let norm = g.inner_product(&r2, &r2).map_err(err)?;
        ensure!(
            norm == Rational::from_integer(g.num_classes() as i64),
            "{spec}: <r2,r2> = {norm}, classes = {}",
            g.num_classes()
        );
    }
    Ok(format!("{} groups", specs.len()))
}

/// `(one-line image, θ)` of a perfect class's minimal element.
pub type InventoryEntry = (Vec<i32>, Vec<u8>);

fn one_line(g: &OracleGroup, x: u32) -> Vec<i32> {
    let p = g.element(x);
    match g_spec(g) {
        GroupSpec::SymA(_) => (0..p.len()).map(|i| p.image(i) as i32 + 1).collect(),
        _ => SignedPermutation::from_perm(p).images().to_vec(),
    }
}

fn g_spec(g: &OracleGroup) -> GroupSpec {
    g.spec
}

pub fn oracle_inventory(spec: GroupSpec) -> Result<BTreeSet<InventoryEntry>, String> {
    let g = cached_group(spec).map_err(err)?;
    let classes = g.perfect_classes().map_err(err)?;
    let set: BTreeSet<InventoryEntry> = classes.iter().map(|c| (one_line(&g, c.minimal), c.theta.clone())).collect();
    ensure!(set.len() == classes.len(), "{spec}: two perfect classes share a minimal element");
    Ok(set)
}

fn identity_theta(rank: usize) -> Vec<u8> {
    (0..rank as u8).collect()
}

fn swapped(rank: usize, a: usize, b: usize) -> Vec<u8> {
    let mut t = identity_theta(rank);
    t.swap(a, b);
    t
}

fn signed_line(negated: &[usize], n: usize) -> Vec<i32> {
    (1..=n as i32).map(|i| if negated.contains(&(i as usize)) { -i } else { i }).collect()
}

/// One-line form of `s₁s₃⋯` (or `s₋₁s₃⋯` when `diamond`) on `n` points.
fn fpf_line(n: usize, diamond: bool) -> Vec<i32> {
    let mut v: Vec<i32> = (1..=n as i32).collect();
    for k in (0..n).step_by(2) {
        v.swap(k, k + 1);
    }
    if diamond {
        v[0] = -2;
        v[1] = -1;
    }
    v
}

/// Published perfect-class lists, written out as minimal elements.
pub fn expected_inventory(spec: GroupSpec) -> BTreeSet<InventoryEntry> {
    let mut out = BTreeSet::new();
    match spec {
        GroupSpec::SymA(n) => {
            let n = n as usize;
            let rank = n.saturating_sub(1);
            let reversed: Vec<u8> = (0..rank as u8).rev().collect();
            let id: Vec<i32> = (1..=n as i32).collect();
            let w0: Vec<i32> = (1..=n as i32).rev().collect();
            out.insert((id.clone(), identity_theta(rank)));
            out.insert((w0, reversed.clone()));
            if n % 2 == 0 {
                out.insert((fpf_line(n, false), identity_theta(rank)));
                out.insert((id, reversed));
            }
        }
        GroupSpec::SymB(n) => {
            let n = n as usize;
            for q in 0..=n {
                out.insert((signed_line(&(1..=q).collect::<Vec<_>>(), n), identity_theta(n)));
            }
            if n % 2 == 0 {
                out.insert((fpf_line(n, false), identity_theta(n)));
            }
        }
        GroupSpec::SymD(n) => {
            let n = n as usize;
            let diamond = swapped(n, 0, 1);
            out.insert(((1..=n as i32).collect(), identity_theta(n)));
            if n % 2 == 0 {
                out.insert((signed_line(&(1..=n).collect::<Vec<_>>(), n), identity_theta(n)));
            } else {
                out.insert((signed_line(&(2..=n).collect::<Vec<_>>(), n), diamond.clone()));
            }
            for q in 1..n {
                if q % 2 == 0 {
                    out.insert((signed_line(&(1..=q).collect::<Vec<_>>(), n), identity_theta(n)));
                } else {
                    out.insert((signed_line(&(2..=q).collect::<Vec<_>>(), n), diamond.clone()));
                }
            }
            if n % 2 == 0 {
                out.insert((fpf_line(n, false), identity_theta(n)));
                out.insert((fpf_line(n, true), identity_theta(n)));
            }
            if n == 4 {
                // ↻⋄↺ read as a composite of maps: s₁ ↔ s₃; ↺⋄↻: s₋₁ ↔ s₃.
                let cw = swapped(4, 1, 3);
                let ccw = swapped(4, 0, 3);
                out.insert((vec![1, 2, 3, 4], cw.clone()));
                out.insert((vec![1, 2, 3, 4], ccw.clone()));
                out.insert((vec![4, 3, 2, 1], cw));
                out.insert((vec![-4, 3, 2, -1], ccw));
            }
        }
        _ => {}
    }
    out
}

pub fn check_inventory(spec: GroupSpec) -> Result<usize, String> {
    let found = oracle_inventory(spec)?;
    let expected = expected_inventory(spec);
    ensure!(
        found == expected,
        "{spec}: oracle {found:?} vs expected {expected:?}"
    );
    Ok(found.len())
}

pub fn check_inventories() -> Check {
    let mut counts = Vec::new();
    for spec in (1..=6).map(GroupSpec::SymA).chain((2..=5).map(GroupSpec::SymB)).chain((2..=5).map(GroupSpec::SymD)) {
        counts.push(format!("{spec}:{}", check_inventory(spec)?));
    }
    let d4 = check_inventory(GroupSpec::SymD(4))?;
    ensure!(d4 == 11, "D4 has {d4} perfect classes");
    Ok(counts.join(" "))
}

fn d4_index_character(beta: Beta, gamma: Gamma) -> Result<VirtualCharacter, String> {
    let g = cached_group(GroupSpec::SymD(4)).map_err(err)?;
    let idx = index_d(4, 0, (beta, Beta::Id), (gamma, Gamma::Triv));
    let t = g.triple_of_index(&idx).map_err(err)?;
    oracle_decompose(&g, &g.triple_character(&t).map_err(err)?).map_err(err)
}

fn d_char(parts: &[(IrrLabel, i64)]) -> VirtualCharacter {
    let mut chi = VirtualCharacter::zero(WeylType::D, 4);
    for (l, k) in parts {
        chi.add_label(l.clone(), *k).expect("D4 label");
    }
    chi
}

fn nondeg(a: &[u32], b: &[u32]) -> IrrLabel {
    d_label(part(a), part(b)).expect("unordered bipartition")
}

pub fn check_d4_fpf_characters() -> Check {
    let cases = [
        (Beta::Fpf, Gamma::Triv, vec![(nondeg(&[4], &[]), 1), (nondeg(&[2, 2], &[]), 1), (d_degen(part(&[2]), Sign::Plus), 1)]),
        (Beta::FpfDiamond, Gamma::Triv, vec![(nondeg(&[4], &[]), 1), (nondeg(&[2, 2], &[]), 1), (d_degen(part(&[2]), Sign::Minus), 1)]),
        (
            Beta::Fpf,
            Gamma::Sgn,
            vec![(nondeg(&[1, 1, 1, 1], &[]), 1), (nondeg(&[2, 2], &[]), 1), (d_degen(part(&[1, 1]), Sign::Plus), 1)],
        ),
        (
            Beta::FpfDiamond,
            Gamma::Sgn,
            vec![(nondeg(&[1, 1, 1, 1], &[]), 1), (nondeg(&[2, 2], &[]), 1), (d_degen(part(&[1, 1]), Sign::Minus), 1)],
        ),
    ];
    for (beta, gamma, expected) in cases {
        let got = d4_index_character(beta, gamma)?;
        let want = d_char(&expected);
        ensure!(got == want, "[4; {beta}; {gamma:?}]: oracle {got}, expected {want}");
    }
    Ok("4 fpf characters of D4".into())
}

pub fn check_d4_triality_characters() -> Check {
    let mut count = 0;
    for (p, q) in [(3, 1), (1, 3)] {
        for (arrow, sign) in [(Arrow::Cw, Sign::Plus), (Arrow::Ccw, Sign::Minus)] {
            for (gamma, top, core) in [(Gamma::Triv, vec![4u32], vec![2u32]), (Gamma::Sgn, vec![1, 1, 1, 1], vec![1, 1])] {
                let got = d4_index_character(Beta::Tri(p, q, arrow), gamma)?;
                let want = d_char(&[(nondeg(&top, &[]), 1), (d_degen(part(&core), sign), 1)]);
                ensure!(got == want, "[4; ({p},{q},{arrow:?}); {gamma:?}]: oracle {got}, expected {want}");
                count += 1;
            }
        }
    }
    Ok(format!("{count} triality characters of D4"))
}

/// Theorem on factorizable triples, checked in the oracle: every triple
/// whose automorphism moves a component of `J` has a non-MF character.
pub fn check_nonfactorizable_not_mf(spec: GroupSpec) -> Result<usize, String> {
    let g = cached_group(spec).map_err(err)?;
    let rank = g.rank();
    let mut count = 0;
    for t in g.all_triples().map_err(err)? {
        let j = t.triple.j;
        let theta = &t.triple.z.theta;
        let members: Vec<usize> = (0..rank).filter(|k| j >> k & 1 == 1).collect();
        let mut moved = false;
        for &s in &members {
            let image = theta[s] as usize;
            if image != s && !connected(&g, j, s, image) {
                moved = true;
            }
        }
        if moved {
            ensure!(!g.oracle_is_mf(&t.character).map_err(err)?, "{spec}: non-factorizable triple {:?} is MF", t.triple);
            count += 1;
        }
    }
    Ok(count)
}

fn connected(g: &OracleGroup, mask: u32, a: usize, b: usize) -> bool {
    let mut seen = vec![a];
    let mut stack = vec![a];
    while let Some(x) = stack.pop() {
        for y in 0..g.rank() {
            if mask >> y & 1 == 1 && g.coxeter_m(x, y) > 2 && !seen.contains(&y) {
                seen.push(y);
                stack.push(y);
            }
        }
    }
    seen.contains(&b)
}

// --------------------------------------------------------- classification

pub fn member_indices(m: &PerfectModelCandidate) -> &[ModelIndex] {
    match &m.members {
        ModelMembers::Indices(v) => v,
        ModelMembers::Triples(_) => &[],
    }
}

pub fn strong_key(indices: &[ModelIndex]) -> Result<Vec<ModelIndex>, String> {
    let mut k = indices
        .iter()
        .map(|i| canonical_form(i, EquivalenceRelation::Strong).map_err(err))
        .collect::<Result<Vec<_>, _>>()?;
    k.sort();
    Ok(k)
}

pub fn model_keys(c: &Classification) -> Result<BTreeSet<Vec<ModelIndex>>, String> {
    c.models.iter().map(|m| strong_key(member_indices(m))).collect()
}

pub fn check_known_symbolic(family: ModelFamily, n: u32) -> Result<(), String> {
    let cand = known_model(family, n).map_err(err)?;
    ensure!(cand.status == CandidateStatus::VerifiedSymbolic, "{family}:{n} is {:?}", cand.status);
    Ok(())
}

pub fn check_known_oracle(family: ModelFamily, n: u32) -> Result<(), String> {
    let mut cand = known_model(family, n).map_err(err)?;
    verify_with_oracle(&mut cand).map_err(err)?;
    ensure!(cand.status == CandidateStatus::VerifiedOracle, "{family}:{n} by oracle: {:?}", cand.status);
    Ok(())
}

pub fn check_no_proper_subset_perfect(m: &PerfectModelCandidate) -> Result<(), String> {
    let members = member_indices(m);
    for skip in 0..members.len() {
        let rest: Vec<ModelIndex> =
            members.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, x)| x.clone()).collect();
        if rest.is_empty() {
            continue;
        }
        let verdict = is_perfect_symbolic(&rest, DegenSplitPolicy::Unresolved).map_err(err)?;
        ensure!(verdict != PerfectVerdict::Perfect, "{m} minus {} is still perfect", members[skip]);
    }
    Ok(())
}

pub fn check_bar_closed(c: &Classification) -> Result<(), String> {
    let keys = model_keys(c)?;
    for k in &keys {
        let bar: Vec<ModelIndex> =
            k.iter().map(|i| transform(i, Transform::Bar).map_err(err)).collect::<Result<_, _>>()?;
        ensure!(keys.contains(&strong_key(&bar)?), "bar of {k:?} is missing from {}", c.group);
    }
    Ok(())
}

pub fn check_degree_identity(c: &Classification, ty: WeylType, n: u32) -> Result<(), String> {
    let universe: u64 = irr_universe(ty, n).iter().map(|l| degree(l).map_err(err)).sum::<Result<u64, _>>()?;
    let g = cached_group(group_for(ty, n)).map_err(err)?;
    let involutions = involution_count(&g);
    ensure!(universe == involutions, "{ty}{n}: Σ deg {universe} vs involutions {involutions}");
    for m in &c.models {
        let mut total = 0i64;
        for idx in member_indices(m) {
            total += character_of_index(idx, DegenSplitPolicy::Unresolved).map_err(err)?.degree().map_err(err)?;
        }
        ensure!(total as u64 == universe, "{m}: Σ deg = {total}, expected {universe}");
    }
    Ok(())
}

pub fn classify_checked(ty: WeylType, n: u32, rel: EquivalenceRelation) -> Result<Classification, String> {
    let c = classify(ty, n, rel).map_err(err)?;
    for m in &c.models {
        ensure!(m.status.is_verified(), "{ty}{n}: unverified model {m} ({:?})", m.status);
    }
    Ok(c)
}

pub fn check_oracle_confirms_models(c: &Classification) -> Result<(), String> {
    for m in &c.models {
        let mut copy = m.clone();
        verify_with_oracle(&mut copy).map_err(err)?;
        ensure!(copy.status == CandidateStatus::VerifiedOracle, "{m} rejected by the oracle: {:?}", copy.status);
    }
    Ok(())
}

pub fn contains_family(c: &Classification, family: ModelFamily, n: u32) -> Result<bool, String> {
    let known = known_model(family, n).map_err(err)?;
    Ok(model_keys(c)?.contains(&strong_key(member_indices(&known))?))
}

/// `(strong, full)` class counts from the oracle's exhaustive search.
pub fn oracle_class_counts(spec: GroupSpec) -> Result<(usize, usize), String> {
    let g = cached_group(spec).map_err(err)?;
    let s = oracle_search(&g).map_err(err)?;
    Ok((s.strong_classes().len(), s.full_classes().len()))
}

fn triple_model_key(g: &OracleGroup, m: &PerfectModelCandidate) -> Result<Vec<EquivKey>, String> {
    let ModelMembers::Triples(ts) = &m.members else {
        return fail(format!("{m} has no triples"));
    };
    let mut keys = ts.iter().map(|t| g.equiv_key(&t.triple).map_err(err)).collect::<Result<Vec<_>, _>>()?;
    keys.sort();
    Ok(keys)
}

/// Maps each class of `c` to the oracle strong class of its models and
/// checks the map is a bijection.
pub fn check_matches_oracle_classes(spec: GroupSpec, c: &Classification) -> Result<usize, String> {
    let g = cached_group(spec).map_err(err)?;
    let search = oracle_search(&g).map_err(err)?;
    let mut by_key: BTreeMap<Vec<EquivKey>, usize> = BTreeMap::new();
    for (ci, class) in search.strong_classes().iter().enumerate() {
        for &mi in class {
            let mut keys: Vec<EquivKey> = search.models[mi].iter().map(|&t| search.triples[t].key.clone()).collect();
            keys.sort();
            by_key.insert(keys, ci);
        }
    }
    let mut hit = BTreeSet::new();
    for class in &c.classes {
        let mut images = BTreeSet::new();
        for &mi in class {
            let key = triple_model_key(&g, &c.models[mi])?;
            let Some(&oc) = by_key.get(&key) else {
                return fail(format!("{spec}: model {} is not an oracle model", c.models[mi]));
            };
            images.insert(oc);
        }
        ensure!(images.len() == 1, "{spec}: one class spans oracle classes {images:?}");
        ensure!(hit.insert(*images.iter().next().expect("nonempty")), "{spec}: two classes share an oracle class");
    }
    ensure!(
        hit.len() == search.strong_classes().len(),
        "{spec}: {} classes vs {} oracle classes",
        hit.len(),
        search.strong_classes().len()
    );
    Ok(hit.len())
}

// ------------------------------------------------------------- criteria

pub struct Criterion {
    pub number: u32,
    pub title: &'static str,
    pub result: Check,
    pub elapsed: Duration,
}

impl Criterion {
    pub fn line(&self) -> String {
        let (tag, text) = match &self.result {
            Ok(s) => ("PASS", s.as_str()),
            Err(s) => ("FAIL", s.as_str()),
        };
        format!("[{tag}] criterion {} ({}) in {:.1?}: {text}", self.number, self.title, self.elapsed)
    }
}

pub fn run_criterion(number: u32, title: &'static str, f: impl FnOnce() -> Check) -> Criterion {
    let (result, elapsed) = timed(f);
    Criterion { number, title, result, elapsed }
}

fn within(elapsed: Duration, limit: Duration, what: &str) -> Result<(), String> {
    ensure!(elapsed < limit, "{what} took {elapsed:.1?}, limit {limit:?}");
    Ok(())
}

pub fn criterion_type_a() -> Check {
    use EquivalenceRelation::Strong;
    let mut notes = Vec::new();
    for n in 5..=8 {
        let (c, elapsed) = timed(|| classify_checked(WeylType::A, n, Strong));
        let c = c?;
        ensure!(c.class_count() == 2, "A{n}: {} strong classes", c.class_count());
        ensure!(contains_family(&c, ModelFamily::PA, n)?, "A{n}: P^A missing");
        if n == 8 {
            within(elapsed, Duration::from_secs(120), "A8 classification")?;
        }
        notes.push(format!("A{n}:2"));
    }
    let a4 = classify_checked(WeylType::A, 4, Strong)?;
    ensure!(a4.class_count() > 2, "A4 has no extra models");
    ensure!(contains_family(&a4, ModelFamily::AExtra4, 4)?, "A4 search misses the extra set");
    notes.push(format!("A4:{} incl. extra set", a4.class_count()));
    for n in 1..=5 {
        check_oracle_confirms_models(&classify_checked(WeylType::A, n, Strong)?)?;
    }
    notes.push("oracle confirms every model at n<=5".into());
    Ok(notes.join(", "))
}

pub fn criterion_type_b() -> Check {
    use EquivalenceRelation::{Full, Strong};
    let mut notes = Vec::new();
    for n in 4..=6 {
        let (c, elapsed) = timed(|| classify_checked(WeylType::B, n, Strong));
        let c = c?;
        ensure!(c.class_count() == 4, "B{n}: {} strong classes", c.class_count());
        if n == 6 {
            within(elapsed, Duration::from_secs(300), "B6 classification")?;
        }
        notes.push(format!("B{n}:4"));
    }
    let strong = classify_checked(WeylType::B, 3, Strong)?;
    let full = classify_checked(WeylType::B, 3, Full)?;
    for f in [ModelFamily::PB, ModelFamily::PBhat, ModelFamily::B3Extra1, ModelFamily::B3Extra2] {
        ensure!(contains_family(&strong, f, 3)?, "B3 search misses {f}");
    }
    let oracle = oracle_class_counts(GroupSpec::SymB(3))?;
    ensure!(
        (strong.class_count(), full.class_count()) == oracle,
        "B3 symbolic ({}, {}) vs oracle {oracle:?}",
        strong.class_count(),
        full.class_count()
    );
    // Theorem classes are 4 strong (2 full); each extra set is ≈ but not ~ to its bar.
    ensure!(
        strong.class_count() == 4 + 2 * 2 && full.class_count() == 2 + 2,
        "B3: {} strong, {} full",
        strong.class_count(),
        full.class_count()
    );
    notes.push(format!(
        "B3: {} strong / {} full (4 theorem strong classes + 2 extra ≈-classes = 6; the extras split into 4 ~-classes), oracle agrees",
        strong.class_count(),
        full.class_count()
    ));
    for n in 2..=8 {
        check_known_symbolic(ModelFamily::PB, n)?;
        check_known_symbolic(ModelFamily::PBhat, n)?;
    }
    for n in 2..=4 {
        check_known_oracle(ModelFamily::PB, n)?;
        check_known_oracle(ModelFamily::PBhat, n)?;
    }
    notes.push("PB/PBhat symbolic n<=8, oracle n<=4".into());
    Ok(notes.join(", "))
}

pub fn criterion_type_d() -> Check {
    let mut notes = Vec::new();
    for n in [5, 7] {
        check_known_symbolic(ModelFamily::PD, n)?;
    }
    check_known_oracle(ModelFamily::PD, 5)?;
    notes.push("PD symbolic at 5,7, oracle at 5".to_string());
    let d5 = classify_checked(WeylType::D, 5, EquivalenceRelation::Strong)?;
    ensure!(d5.class_count() == 2, "D5: {} strong classes", d5.class_count());
    notes.push("D5:2".into());
    let g = cached_group(GroupSpec::SymD(4)).map_err(err)?;
    let search = oracle_search(&g).map_err(err)?;
    ensure!(search.models.is_empty(), "D4 oracle search found {} models", search.models.len());
    notes.push("D4 oracle search empty".into());
    for n in [6, 8] {
        match d_even_nonexistence(n).map_err(err)? {
            NonexistenceOutcome::Certificate(cert) => {
                ensure!(replay_certificate(&cert).map_err(err)?, "D{n} certificate does not replay");
                ensure!(certificate_rows_match(&cert).map_err(err)?, "D{n} certificate rows are stale");
                notes.push(format!("D{n} certificate ({} covers) replays", cert.nondegenerate_covers.len()));
            }
            NonexistenceOutcome::Counterexample { indices } => {
                return fail(format!("D{n}: counterexample {indices:?}"));
            }
        }
    }
    Ok(notes.join(", "))
}

pub fn criterion_dihedral() -> Check {
    for m in 5..=16 {
        let c = classify_dihedral(m, EquivalenceRelation::Strong).map_err(err)?;
        let want = if m % 2 == 0 { 4 } else { 2 };
        ensure!(c.class_count() == want, "I2({m}): {} strong classes", c.class_count());
        if m <= 12 {
            check_matches_oracle_classes(GroupSpec::Dihedral(m), &c)?;
        }
    }
    Ok("m=5..16 closed form 2 (odd) / 4 (even), oracle bijection for m<=12".into())
}

pub fn criterion_h3() -> Check {
    let start = Instant::now();
    for v in 1..=4 {
        check_known_oracle(ModelFamily::H3(v), 3)?;
    }
    let c = classify_by_oracle(GroupSpec::H3, EquivalenceRelation::Strong).map_err(err)?;
    ensure!(c.class_count() == 4, "H3: {} strong classes", c.class_count());
    let g = cached_group(GroupSpec::H3).map_err(err)?;
    let mut hit = BTreeSet::new();
    for v in 1..=4 {
        let known = known_model(ModelFamily::H3(v), 3).map_err(err)?;
        let key = triple_model_key(&g, &known)?;
        let class = c
            .classes
            .iter()
            .position(|cl| cl.iter().any(|&mi| triple_model_key(&g, &c.models[mi]).ok().as_ref() == Some(&key)))
            .ok_or_else(|| format!("H3 model {v} not found by the search"))?;
        hit.insert(class);
    }
    ensure!(hit.len() == 4, "the four listed H3 models fall into {} classes", hit.len());
    within(start.elapsed(), Duration::from_secs(30), "H3")?;
    Ok("4 listed models verify, 4 strong classes, one per listed model".into())
}

pub fn criterion_property_suites() -> Check {
    let checks: Vec<(&str, Check)> = vec![
        ("LR monotonicity", check_monotonicity(10, 4)),
        ("LR sum/union positivity", check_lr_sum_union_positive(12)),
        ("LR symmetries", check_lr_symmetries(10)),
        ("twists", check_twist_involutions(8)),
        ("dual", check_dual_involution(6)),
        ("bar/dual characters", check_bar_and_dual_characters(5)),
        ("projections", check_projection_commutation(5)),
        ("B over A product form", check_b_over_a_product_form(6)),
        ("D over A product form", check_d_over_a_product_form(6)),
    ];
    let mut notes = Vec::new();
    for (name, r) in checks {
        notes.push(format!("{name}: {}", r.map_err(|e| format!("{name}: {e}"))?));
    }
    Ok(notes.join("; "))
}

pub fn criterion_products() -> Check {
    Ok(format!("{}; {}; {}", check_products_not_mf_a(9)?, check_products_not_mf_b(7)?, check_products_not_mf_d(7)?))
}

pub fn criterion_oracle() -> Check {
    let inventory = check_inventories()?;
    let fs = check_fs_degree_identity(&oracle_groups())?;
    let p3 = check_d4_triality_characters()?;
    let p1 = check_d4_fpf_characters()?;
    Ok(format!("inventories {inventory}; FS identity in {fs}; {p3}; {p1}"))
}

pub fn all_criteria() -> Vec<Criterion> {
    vec![
        run_criterion(1, "type A classification", criterion_type_a),
        run_criterion(2, "type B classification", criterion_type_b),
        run_criterion(3, "type D", criterion_type_d),
        run_criterion(4, "dihedral", criterion_dihedral),
        run_criterion(5, "H3", criterion_h3),
        run_criterion(6, "LR and identity suites", criterion_property_suites),
        run_criterion(7, "induced products not multiplicity-free", criterion_products),
        run_criterion(8, "oracle consistency", criterion_oracle),
    ]
}

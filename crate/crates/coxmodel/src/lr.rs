//! Littlewood–Richardson coefficients by row-wise enumeration of LR fillings.

use std::collections::{BTreeMap, HashMap};
use std::sync::{OnceLock, RwLock};

use crate::error::{CoxError, Result};
use crate::partitions::Partition;

/// Memo key `(λ, μ, ν)` for `c^ν_{λμ}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LRKey {
    pub lam: Partition,
    pub mu: Partition,
    pub nu: Partition,
}

fn memo() -> &'static RwLock<HashMap<LRKey, u64>> {
    static MEMO: OnceLock<RwLock<HashMap<LRKey, u64>>> = OnceLock::new();
    MEMO.get_or_init(|| RwLock::new(HashMap::new()))
}

/// `c^ν_{λμ}`; zero when weights mismatch or `λ, μ ⊄ ν`.
pub fn lr_coefficient(lam: &Partition, mu: &Partition, nu: &Partition) -> u64 {
    try_lr_coefficient(lam, mu, nu).expect("LR coefficient overflow")
}

pub fn try_lr_coefficient(lam: &Partition, mu: &Partition, nu: &Partition) -> Result<u64> {
    if lam.weight() + mu.weight() != nu.weight() || !nu.contains(lam) || !nu.contains(mu) {
        return Ok(0);
    }
    if mu.is_empty() || lam.is_empty() {
        return Ok(1);
    }
    let key = LRKey { lam: lam.clone(), mu: mu.clone(), nu: nu.clone() };
    if let Some(&v) = memo().read().expect("memo poisoned").get(&key) {
        return Ok(v);
    }
    let v = count_fillings(lam, mu, nu)?;
    memo().write().expect("memo poisoned").insert(key, v);
    Ok(v)
}

struct Filling<'a> {
    lam: &'a Partition,
    mu: &'a Partition,
    nu: &'a Partition,
    labels: usize,
    // counts[r][k]: number of entries k+1 in row r
    counts: Vec<Vec<u32>>,
    // used[k]: entries k+1 placed so far
    used: Vec<u32>,
}

impl Filling<'_> {
    /// `#{entries ≤ k+1 in row r}`, with `k = -1` meaning zero.
    fn leq(&self, r: usize, k: isize) -> u32 {
        if k < 0 {
            return 0;
        }
        self.counts[r].iter().take(k as usize + 1).sum()
    }

    fn rows(&mut self, r: usize) -> Result<u64> {
        if r == self.nu.len() {
            return Ok(u64::from(self.used.iter().zip(self.mu.parts()).all(|(a, b)| a == b)));
        }
        let cells = self.nu.part(r) - self.lam.part(r);
        let top = self.labels.min(r + 1);
        self.counts[r].iter_mut().for_each(|c| *c = 0);
        self.entries(r, 0, top, cells)
    }

    fn entries(&mut self, r: usize, k: usize, top: usize, left: u32) -> Result<u64> {
        if k == top {
            if left != 0 {
                return Ok(0);
            }
            return self.rows(r + 1);
        }
        let lattice_cap = if k == 0 {
            u32::MAX
        } else {
            // entries k+1 so far, including this row, may not exceed entries k
            // in rows strictly above
            let above: u32 = (0..r).map(|i| self.counts[i][k - 1]).sum();
            above - self.used[k]
        };
        let content_cap = self.mu.part(k) - self.used[k];
        let max = left.min(lattice_cap).min(content_cap);
        let mut total = 0u64;
        for c in 0..=max {
            self.counts[r][k] = c;
            if r > 0 {
                let here = self.lam.part(r) + self.leq(r, k as isize);
                let there = self.lam.part(r - 1) + self.leq(r - 1, k as isize - 1);
                if here > there {
                    break;
                }
            }
            if k + 1 == top && c != left {
                continue;
            }
            self.used[k] += c;
            let sub = self.entries(r, k + 1, top, left - c)?;
            self.used[k] -= c;
            total = total.checked_add(sub).ok_or(CoxError::Overflow("lr_coefficient"))?;
        }
        self.counts[r][k] = 0;
        Ok(total)
    }
}

fn count_fillings(lam: &Partition, mu: &Partition, nu: &Partition) -> Result<u64> {
    let labels = mu.len();
    let mut f = Filling {
        lam,
        mu,
        nu,
        labels,
        counts: vec![vec![0; labels]; nu.len()],
        used: vec![0; labels],
    };
    f.rows(0)
}

/// Candidate shapes `ν ⊇ λ ∪ μ` of weight `|λ|+|μ|` whose skew columns fit
/// in `ℓ(μ)` rows.
fn candidates(lam: &Partition, mu: &Partition) -> Vec<Partition> {
    let n = lam.weight() + mu.weight();
    let max_len = lam.len() + mu.len();
    let width = lam.part(0) + mu.part(0);
    let lam_t = lam.transpose();
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(
        i: usize,
        rest: u32,
        prev: u32,
        ctx: (&Partition, &Partition, &Partition, usize),
        cur: &mut Vec<u32>,
        out: &mut Vec<Partition>,
    ) {
        let (lam, mu, lam_t, max_len) = ctx;
        if rest == 0 {
            if i >= lam.len() && i >= mu.len() {
                let nu = Partition::new(cur.clone()).expect("decreasing");
                let nu_t = nu.transpose();
                let fits = (0..nu_t.len()).all(|j| nu_t.part(j) - lam_t.part(j) <= mu.len() as u32);
                if fits {
                    out.push(nu);
                }
            }
            return;
        }
        if i >= max_len {
            return;
        }
        let lo = lam.part(i).max(mu.part(i)).max(1);
        let hi = prev.min(rest);
        if lo > hi {
            return;
        }
        for v in (lo..=hi).rev() {
            cur.push(v);
            rec(i + 1, rest - v, v, ctx, cur, out);
            cur.pop();
        }
    }
    rec(0, n, width, (lam, mu, &lam_t, max_len), &mut cur, &mut out);
    out
}

/// Full expansion of `χ^λ •_A χ^μ` as `ν ↦ c^ν_{λμ}` (positive entries only).
pub fn lr_expand(lam: &Partition, mu: &Partition) -> BTreeMap<Partition, u64> {
    try_lr_expand(lam, mu).expect("LR coefficient overflow")
}

pub fn try_lr_expand(lam: &Partition, mu: &Partition) -> Result<BTreeMap<Partition, u64>> {
    let mut out = BTreeMap::new();
    for nu in candidates(lam, mu) {
        let c = try_lr_coefficient(lam, mu, &nu)?;
        if c > 0 {
            out.insert(nu, c);
        }
    }
    Ok(out)
}

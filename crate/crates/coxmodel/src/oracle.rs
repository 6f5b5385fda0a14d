//! Brute-force ground truth. Finite Coxeter groups are realized as explicit
//! permutation groups; perfect involutions, centralizers and induced
//! characters are computed by enumeration.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::char_ring::{b_label, d_degen, d_label, partition_degree, VirtualCharacter, WeylType};
use crate::error::{CoxError, Result};
use crate::lr::lr_coefficient;
use crate::model_index::{Arrow, Beta, Column, Gamma, ModelIndex};
use crate::partitions::{partitions_of, Partition, Sign};
use crate::scalar::Scalar;

pub const DEFAULT_CAP: u64 = 1_000_000;
const MAX_POINTS: usize = 16;

/// Group-size cap, from `COXMODEL_ORACLE_CAP` when set.
pub fn oracle_cap() -> u64 {
    std::env::var("COXMODEL_ORACLE_CAP")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_CAP)
}

pub type ElemId = u32;

/// Permutation of at most 16 points.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    len: u8,
    img: [u8; MAX_POINTS],
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &self.img[..self.len as usize])
    }
}

impl Perm {
    pub fn identity(len: usize) -> Self {
        assert!(len <= MAX_POINTS);
        let mut img = [0u8; MAX_POINTS];
        for (i, v) in img.iter_mut().enumerate() {
            *v = i as u8;
        }
        Perm { len: len as u8, img }
    }

    pub fn from_images(images: &[usize]) -> Result<Self> {
        if images.len() > MAX_POINTS {
            return Err(CoxError::Domain(format!("at most {MAX_POINTS} points")));
        }
        let mut seen = [false; MAX_POINTS];
        let mut p = Perm::identity(images.len());
        for (i, &v) in images.iter().enumerate() {
            if v >= images.len() || seen[v] {
                return Err(CoxError::Domain(format!("not a permutation: {images:?}")));
            }
            seen[v] = true;
            p.img[i] = v as u8;
        }
        Ok(p)
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn image(&self, i: usize) -> usize {
        self.img[i] as usize
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Perm) -> Perm {
        let mut p = *self;
        for i in 0..self.len as usize {
            p.img[i] = self.img[other.img[i] as usize];
        }
        p
    }

    pub fn inverse(&self) -> Perm {
        let mut p = *self;
        for i in 0..self.len as usize {
            p.img[self.img[i] as usize] = i as u8;
        }
        p
    }
}

/// Signed permutation of `±[n]`, stored as the images of `1..=n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SignedPermutation(Vec<i32>);

impl SignedPermutation {
    pub fn new(images: Vec<i32>) -> Result<Self> {
        let n = images.len() as i32;
        let mut abs: Vec<i32> = images.iter().map(|v| v.abs()).collect();
        abs.sort_unstable();
        if abs != (1..=n).collect::<Vec<_>>() {
            return Err(CoxError::Domain(format!("not a signed permutation: {images:?}")));
        }
        Ok(SignedPermutation(images))
    }

    pub fn images(&self) -> &[i32] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn negatives(&self) -> usize {
        self.0.iter().filter(|v| **v < 0).count()
    }

    fn point(n: usize, i: i32) -> usize {
        if i > 0 {
            (i - 1) as usize
        } else {
            n + (-i - 1) as usize
        }
    }

    pub fn to_perm(&self) -> Result<Perm> {
        let n = self.0.len();
        if 2 * n > MAX_POINTS {
            return Err(CoxError::Domain(format!("signed rank {n} too large")));
        }
        let mut img = vec![0usize; 2 * n];
        for (k, &v) in self.0.iter().enumerate() {
            let i = k as i32 + 1;
            img[Self::point(n, i)] = Self::point(n, v);
            img[Self::point(n, -i)] = Self::point(n, -v);
        }
        Perm::from_images(&img)
    }

    pub fn from_perm(p: &Perm) -> Self {
        let n = p.len() / 2;
        let images = (0..n)
            .map(|k| {
                let v = p.image(k);
                if v < n {
                    v as i32 + 1
                } else {
                    -((v - n) as i32 + 1)
                }
            })
            .collect();
        SignedPermutation(images)
    }

    /// Cycle lengths of `|w|`, split by whether the cycle carries an odd
    /// number of sign changes.
    pub fn signed_cycle_type(&self) -> (Vec<u32>, Vec<u32>) {
        let n = self.0.len();
        let mut seen = vec![false; n];
        let (mut pos, mut neg) = (Vec::new(), Vec::new());
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let (mut len, mut flips, mut i) = (0u32, 0u32, start);
            while !seen[i] {
                seen[i] = true;
                len += 1;
                let v = self.0[i];
                if v < 0 {
                    flips += 1;
                }
                i = (v.unsigned_abs() - 1) as usize;
            }
            if flips % 2 == 0 {
                pos.push(len);
            } else {
                neg.push(len);
            }
        }
        pos.sort_unstable_by(|a, b| b.cmp(a));
        neg.sort_unstable_by(|a, b| b.cmp(a));
        (pos, neg)
    }
}

impl fmt::Display for SignedPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupSpec {
    SymA(u32),
    SymB(u32),
    SymD(u32),
    Dihedral(u32),
    H3,
}

impl GroupSpec {
    pub fn expected_order(&self) -> u64 {
        let fact = |n: u32| (1..=u64::from(n)).product::<u64>();
        match *self {
            GroupSpec::SymA(n) => fact(n),
            GroupSpec::SymB(n) => (1u64 << n) * fact(n),
            GroupSpec::SymD(n) => (1u64 << (n.max(1) - 1)) * fact(n),
            GroupSpec::Dihedral(m) => 2 * u64::from(m),
            GroupSpec::H3 => 120,
        }
    }

    pub fn weyl_type(&self) -> Option<WeylType> {
        match self {
            GroupSpec::SymA(_) => Some(WeylType::A),
            GroupSpec::SymB(_) => Some(WeylType::B),
            GroupSpec::SymD(_) => Some(WeylType::D),
            _ => None,
        }
    }

    fn generators(&self) -> Result<(Vec<Perm>, Vec<String>)> {
        let signed = |v: Vec<i32>| SignedPermutation::new(v).and_then(|s| s.to_perm());
        let swap = |n: u32, i: u32| -> Vec<i32> {
            let mut v: Vec<i32> = (1..=n as i32).collect();
            v.swap(i as usize - 1, i as usize);
            v
        };
        match *self {
            GroupSpec::SymA(n) => {
                if n == 0 || n as usize > MAX_POINTS {
                    return Err(CoxError::Domain(format!("symA({n}) out of range")));
                }
                let mut gens = Vec::new();
                let mut labels = Vec::new();
                for i in 1..n {
                    let mut img: Vec<usize> = (0..n as usize).collect();
                    img.swap(i as usize - 1, i as usize);
                    gens.push(Perm::from_images(&img)?);
                    labels.push(format!("s{i}"));
                }
                Ok((gens, labels))
            }
            GroupSpec::SymB(n) | GroupSpec::SymD(n) => {
                let is_b = matches!(self, GroupSpec::SymB(_));
                if n < if is_b { 1 } else { 2 } || 2 * n as usize > MAX_POINTS {
                    return Err(CoxError::Domain(format!("{self:?} out of range")));
                }
                let mut first: Vec<i32> = (1..=n as i32).collect();
                let label0 = if is_b {
                    first[0] = -1;
                    "s0"
                } else {
                    first[0] = -2;
                    first[1] = -1;
                    "s-1"
                };
                let mut gens = vec![signed(first)?];
                let mut labels = vec![label0.to_string()];
                for i in 1..n {
                    gens.push(signed(swap(n, i))?);
                    labels.push(format!("s{i}"));
                }
                Ok((gens, labels))
            }
            GroupSpec::Dihedral(m) => {
                if m < 2 || m as usize > MAX_POINTS {
                    return Err(CoxError::Domain(format!("dihedral({m}) out of range")));
                }
                let m = m as usize;
                let s: Vec<usize> = (0..m).map(|i| (m - i) % m).collect();
                let t: Vec<usize> = (0..m).map(|i| (m + 1 - i) % m).collect();
                Ok((vec![Perm::from_images(&s)?, Perm::from_images(&t)?], vec!["s".into(), "t".into()]))
            }
            GroupSpec::H3 => {
                let (d, _) = GroupSpec::SymD(6).generators()?;
                // d[0] = s-1, d[i] = s_i
                let h1 = d[1].compose(&d[3]);
                let h2 = d[2].compose(&d[4]);
                let h3 = d[0].compose(&d[5]);
                Ok((vec![h1, h2, h3], vec!["h1".into(), "h2".into(), "h3".into()]))
            }
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::SymA(n) => write!(f, "symA({n})"),
            GroupSpec::SymB(n) => write!(f, "symB({n})"),
            GroupSpec::SymD(n) => write!(f, "symD({n})"),
            GroupSpec::Dihedral(m) => write!(f, "dihedral({m})"),
            GroupSpec::H3 => write!(f, "h3"),
        }
    }
}

/// Class function indexed by conjugacy-class id.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClassFunction<T>(pub Vec<T>);

impl<T: Scalar> ClassFunction<T> {
    pub fn zero(classes: usize) -> Self {
        ClassFunction(vec![T::zero(); classes])
    }

    pub fn values(&self) -> &[T] {
        &self.0
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a.checked_add(&b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a.checked_add(&(T::zero() - b)))
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a.checked_mul(&b))
    }

    fn zip(&self, other: &Self, f: impl Fn(T, T) -> Option<T>) -> Result<Self> {
        if self.0.len() != other.0.len() {
            return Err(CoxError::TypeMismatch("class functions on different groups".into()));
        }
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| f(*a, *b).ok_or(CoxError::Overflow("class function arithmetic")))
            .collect::<Result<Vec<T>>>()
            .map(ClassFunction)
    }
}

/// `(w, θ)` with `θ` a permutation of the generator indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ExtendedElement {
    pub w: ElemId,
    pub theta: Vec<u8>,
}

/// Model triple `(J, K, σ)`: `J` as a generator bitmask, `K` through an
/// element `z = (w, θ)` of the class, `σ` as the bitmask of generators in
/// `J` sent to `-1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Triple {
    pub j: u32,
    pub z: ExtendedElement,
    pub sigma: u32,
}

/// `≡`-key: `J`, the centralizer of the minimal element, and the elements of
/// the centralizer on which `σ` is `-1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EquivKey {
    pub j: u32,
    pub centralizer: Vec<ElemId>,
    pub negative: Vec<ElemId>,
}

/// A standard parabolic subgroup with a breadth-first spanning tree over
/// its own generators.
#[derive(Debug)]
pub struct Parabolic {
    pub mask: u32,
    pub elems: Vec<ElemId>,
    local: HashMap<ElemId, u32>,
    parent: Vec<(u32, u8)>,
    pub longest: ElemId,
}

impl Parabolic {
    pub fn order(&self) -> usize {
        self.elems.len()
    }

    pub fn contains(&self, g: ElemId) -> bool {
        self.local.contains_key(&g)
    }

    fn local_index(&self, g: ElemId) -> Option<usize> {
        self.local.get(&g).map(|&i| i as usize)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerfectClass {
    pub j: u32,
    pub theta: Vec<u8>,
    pub minimal: ElemId,
    pub size: usize,
}

pub struct OracleGroup {
    pub spec: GroupSpec,
    elems: Vec<Perm>,
    index: HashMap<Perm, ElemId>,
    gens: Vec<ElemId>,
    gen_labels: Vec<String>,
    coxeter: Vec<Vec<u32>>,
    lengths: Vec<u32>,
    parent: Vec<(ElemId, u8)>,
    inverse: Vec<ElemId>,
    class_of: Vec<u32>,
    class_sizes: Vec<u64>,
    class_reps: Vec<ElemId>,
    reflections: Vec<ElemId>,
    automorphisms: Vec<Vec<u8>>,
    aut_tables: Vec<Vec<ElemId>>,
    longest: ElemId,
    parabolics: Mutex<HashMap<u32, Arc<Parabolic>>>,
    perfect: Mutex<HashMap<u32, Arc<Vec<PerfectClass>>>>,
}

impl fmt::Debug for OracleGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OracleGroup({}, order {})", self.spec, self.elems.len())
    }
}

fn group_cache() -> &'static Mutex<HashMap<GroupSpec, Arc<OracleGroup>>> {
    static CACHE: OnceLock<Mutex<HashMap<GroupSpec, Arc<OracleGroup>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Builds (or returns the cached) group.
pub fn cached_group(spec: GroupSpec) -> Result<Arc<OracleGroup>> {
    if let Some(g) = group_cache().lock().expect("cache poisoned").get(&spec) {
        return Ok(g.clone());
    }
    let g = Arc::new(build_group(spec)?);
    group_cache().lock().expect("cache poisoned").insert(spec, g.clone());
    Ok(g)
}

pub fn build_group(spec: GroupSpec) -> Result<OracleGroup> {
    build_group_with_cap(spec, oracle_cap())
}

pub fn build_group_with_cap(spec: GroupSpec, cap: u64) -> Result<OracleGroup> {
    let expected = spec.expected_order();
    if expected > cap {
        return Err(CoxError::CapExceeded { what: format!("order of {spec}"), needed: expected, cap });
    }
    let (gen_perms, gen_labels) = spec.generators()?;
    let points = match spec {
        GroupSpec::SymA(n) => n as usize,
        GroupSpec::SymB(n) | GroupSpec::SymD(n) => 2 * n as usize,
        GroupSpec::Dihedral(m) => m as usize,
        GroupSpec::H3 => 12,
    };
    let id = Perm::identity(points);
    let mut elems = vec![id];
    let mut index = HashMap::from([(id, 0u32)]);
    let mut lengths = vec![0u32];
    let mut parent = vec![(0u32, u8::MAX)];
    let mut queue = VecDeque::from([0u32]);
    while let Some(x) = queue.pop_front() {
        for (k, g) in gen_perms.iter().enumerate() {
            let y = elems[x as usize].compose(g);
            if !index.contains_key(&y) {
                let yid = elems.len() as u32;
                if u64::from(yid) >= cap {
                    return Err(CoxError::CapExceeded { what: format!("order of {spec}"), needed: expected, cap });
                }
                index.insert(y, yid);
                elems.push(y);
                lengths.push(lengths[x as usize] + 1);
                parent.push((x, k as u8));
                queue.push_back(yid);
            }
        }
    }
    if elems.len() as u64 != expected {
        return Err(CoxError::Oracle(format!("{spec}: order {} != {expected}", elems.len())));
    }
    let gens: Vec<ElemId> = gen_perms.iter().map(|g| index[g]).collect();
    let inverse: Vec<ElemId> = elems.iter().map(|p| index[&p.inverse()]).collect();
    let mul = |a: ElemId, b: ElemId| index[&elems[a as usize].compose(&elems[b as usize])];
    let order_of = |x: ElemId| {
        let (mut k, mut y) = (1u32, x);
        while y != 0 {
            y = mul(y, x);
            k += 1;
        }
        k
    };
    let r = gens.len();
    let coxeter: Vec<Vec<u32>> = (0..r)
        .map(|i| (0..r).map(|j| if i == j { 1 } else { order_of(mul(gens[i], gens[j])) }).collect())
        .collect();
    let mut class_of = vec![u32::MAX; elems.len()];
    let mut class_sizes = Vec::new();
    let mut class_reps = Vec::new();
    for start in 0..elems.len() as u32 {
        if class_of[start as usize] != u32::MAX {
            continue;
        }
        let c = class_sizes.len() as u32;
        class_of[start as usize] = c;
        let mut size = 1u64;
        let mut q = VecDeque::from([start]);
        while let Some(x) = q.pop_front() {
            for &s in &gens {
                let y = mul(mul(s, x), s);
                if class_of[y as usize] == u32::MAX {
                    class_of[y as usize] = c;
                    size += 1;
                    q.push_back(y);
                }
            }
        }
        class_sizes.push(size);
        class_reps.push(start);
    }
    let mut refl: BTreeSet<ElemId> = gens.iter().copied().collect();
    let mut q: VecDeque<ElemId> = gens.iter().copied().collect();
    while let Some(x) = q.pop_front() {
        for &s in &gens {
            let y = mul(mul(s, x), s);
            if refl.insert(y) {
                q.push_back(y);
            }
        }
    }
    let longest = (0..elems.len() as u32).max_by_key(|&x| lengths[x as usize]).unwrap_or(0);
    if lengths[longest as usize] as usize != refl.len() {
        return Err(CoxError::Oracle(format!("{spec}: length of w0 differs from reflection count")));
    }
    let mut g = OracleGroup {
        spec,
        elems,
        index,
        gens,
        gen_labels,
        coxeter,
        lengths,
        parent,
        inverse,
        class_of,
        class_sizes,
        class_reps,
        reflections: refl.into_iter().collect(),
        automorphisms: Vec::new(),
        aut_tables: Vec::new(),
        longest,
        parabolics: Mutex::new(HashMap::new()),
        perfect: Mutex::new(HashMap::new()),
    };
    let full = g.full_mask();
    g.automorphisms = g.diagram_automorphisms(full);
    g.aut_tables = g.automorphisms.iter().map(|a| g.global_aut_table(a)).collect();
    Ok(g)
}

fn bits(mask: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |i| mask & (1 << i) != 0)
}

impl OracleGroup {
    pub fn order(&self) -> usize {
        self.elems.len()
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    pub fn full_mask(&self) -> u32 {
        ((1u64 << self.gens.len()) - 1) as u32
    }

    pub fn identity(&self) -> ElemId {
        0
    }

    pub fn generator(&self, k: usize) -> ElemId {
        self.gens[k]
    }

    pub fn generator_labels(&self) -> &[String] {
        &self.gen_labels
    }

    pub fn coxeter_m(&self, i: usize, j: usize) -> u32 {
        self.coxeter[i][j]
    }

    pub fn element(&self, x: ElemId) -> &Perm {
        &self.elems[x as usize]
    }

    pub fn id_of(&self, p: &Perm) -> Option<ElemId> {
        self.index.get(p).copied()
    }

    pub fn signed_element(&self, images: Vec<i32>) -> Result<ElemId> {
        let p = SignedPermutation::new(images)?.to_perm()?;
        self.id_of(&p).ok_or_else(|| CoxError::Oracle(format!("element not in {}", self.spec)))
    }

    pub fn mul(&self, a: ElemId, b: ElemId) -> ElemId {
        self.index[&self.elems[a as usize].compose(&self.elems[b as usize])]
    }

    pub fn inv(&self, a: ElemId) -> ElemId {
        self.inverse[a as usize]
    }

    pub fn product(&self, word: &[usize]) -> ElemId {
        word.iter().fold(0, |acc, &k| self.mul(acc, self.gens[k]))
    }

    pub fn coxeter_length(&self, x: ElemId) -> u32 {
        self.lengths[x as usize]
    }

    /// A reduced word (generator indices).
    pub fn reduced_word(&self, x: ElemId) -> Vec<usize> {
        let mut w = Vec::new();
        let mut y = x;
        while y != 0 {
            let (p, k) = self.parent[y as usize];
            w.push(k as usize);
            y = p;
        }
        w.reverse();
        w
    }

    pub fn longest_element(&self) -> ElemId {
        self.longest
    }

    pub fn num_classes(&self) -> usize {
        self.class_sizes.len()
    }

    pub fn class_of(&self, x: ElemId) -> usize {
        self.class_of[x as usize] as usize
    }

    pub fn class_size(&self, c: usize) -> u64 {
        self.class_sizes[c]
    }

    pub fn class_rep(&self, c: usize) -> ElemId {
        self.class_reps[c]
    }

    pub fn reflections(&self) -> &[ElemId] {
        &self.reflections
    }

    /// `Aut(W,S)` as generator permutations; entry 0 is the identity.
    pub fn automorphisms(&self) -> &[Vec<u8>] {
        &self.automorphisms
    }

    pub fn apply_automorphism(&self, a: usize, x: ElemId) -> ElemId {
        self.aut_tables[a][x as usize]
    }

    /// Whether a diagram automorphism is conjugation by an element of `W`.
    pub fn is_inner(&self, a: usize) -> bool {
        let theta = &self.automorphisms[a];
        let w0 = self.longest;
        let id = theta.iter().enumerate().all(|(i, &t)| i == t as usize);
        id || (0..self.rank()).all(|i| self.mul(self.mul(w0, self.gens[i]), w0) == self.gens[theta[i] as usize])
    }

    fn identity_theta(&self) -> Vec<u8> {
        (0..self.rank() as u8).collect()
    }

    /// Generator permutations of `J` preserving the Coxeter matrix, fixing
    /// `S \ J` pointwise.
    pub fn diagram_automorphisms(&self, mask: u32) -> Vec<Vec<u8>> {
        let js: Vec<usize> = bits(mask).collect();
        let mut out = Vec::new();
        let mut cur: Vec<usize> = Vec::new();
        let mut used = vec![false; self.rank()];
        self.aut_rec(&js, &mut cur, &mut used, &mut out);
        out.sort();
        let id = self.identity_theta();
        if let Some(pos) = out.iter().position(|a| *a == id) {
            out.swap(0, pos);
            out[1..].sort();
        }
        out
    }

    fn aut_rec(&self, js: &[usize], cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<u8>>) {
        if cur.len() == js.len() {
            let mut theta = self.identity_theta();
            for (i, &s) in js.iter().enumerate() {
                theta[s] = cur[i] as u8;
            }
            out.push(theta);
            return;
        }
        let k = cur.len();
        for &t in js {
            if used[t] {
                continue;
            }
            let ok = (0..k).all(|i| self.coxeter[js[i]][js[k]] == self.coxeter[cur[i]][t]);
            if ok {
                used[t] = true;
                cur.push(t);
                self.aut_rec(js, cur, used, out);
                cur.pop();
                used[t] = false;
            }
        }
    }

    fn global_aut_table(&self, theta: &[u8]) -> Vec<ElemId> {
        let mut table = vec![0u32; self.order()];
        for x in 1..self.order() {
            let (p, k) = self.parent[x];
            table[x] = self.mul(table[p as usize], self.gens[theta[k as usize] as usize]);
        }
        table
    }

    pub fn parabolic(&self, mask: u32) -> Arc<Parabolic> {
        if let Some(p) = self.parabolics.lock().expect("poisoned").get(&mask) {
            return p.clone();
        }
        let js: Vec<usize> = bits(mask).collect();
        let mut elems = vec![0u32];
        let mut local = HashMap::from([(0u32, 0u32)]);
        let mut parent = vec![(0u32, u8::MAX)];
        let mut i = 0;
        while i < elems.len() {
            let x = elems[i];
            for &k in &js {
                let y = self.mul(x, self.gens[k]);
                if let std::collections::hash_map::Entry::Vacant(e) = local.entry(y) {
                    e.insert(elems.len() as u32);
                    elems.push(y);
                    parent.push((i as u32, k as u8));
                }
            }
            i += 1;
        }
        let longest = *elems.iter().max_by_key(|&&x| self.lengths[x as usize]).expect("nonempty");
        let p = Arc::new(Parabolic { mask, elems, local, parent, longest });
        self.parabolics.lock().expect("poisoned").insert(mask, p.clone());
        p
    }

    /// `θ(g)` for every `g ∈ W_J`, indexed like `par.elems`.
    fn theta_table(&self, par: &Parabolic, theta: &[u8]) -> Vec<ElemId> {
        let mut table = vec![0u32; par.order()];
        for x in 1..par.order() {
            let (p, k) = par.parent[x];
            table[x] = self.mul(table[p as usize], self.gens[theta[k as usize] as usize]);
        }
        table
    }

    /// `α·(w, θ) = (α(w), αθα⁻¹)` for a diagram automorphism `α` of `W_J`.
    pub fn transport(&self, mask: u32, alpha: &[u8], w: ElemId, theta: &[u8]) -> (ElemId, Vec<u8>) {
        let par = self.parabolic(mask);
        let table = self.theta_table(&par, alpha);
        let w2 = table[par.local_index(w).expect("in W_J")];
        let mut t2 = self.identity_theta();
        for i in 0..self.rank() {
            t2[alpha[i] as usize] = alpha[theta[i] as usize];
        }
        (w2, t2)
    }

    /// `σ(g)` for every `g ∈ W_J`.
    fn sigma_table(&self, par: &Parabolic, sigma: u32) -> Vec<i8> {
        let mut table = vec![1i8; par.order()];
        for x in 1..par.order() {
            let (p, k) = par.parent[x];
            let s = if sigma & (1 << k) != 0 { -1 } else { 1 };
            table[x] = table[p as usize] * s;
        }
        table
    }

    fn parabolic_reflections(&self, par: &Parabolic) -> Vec<ElemId> {
        let js: Vec<ElemId> = bits(par.mask).map(|k| self.gens[k]).collect();
        let mut set: BTreeSet<ElemId> = js.iter().copied().collect();
        let mut q: VecDeque<ElemId> = js.iter().copied().collect();
        while let Some(x) = q.pop_front() {
            for &s in &js {
                let y = self.mul(self.mul(s, x), s);
                if set.insert(y) {
                    q.push_back(y);
                }
            }
        }
        set.into_iter().collect()
    }

    /// Twisted-conjugation orbit of `w` in `W_J` and its unique shortest element.
    fn twisted_orbit(&self, mask: u32, w: ElemId, theta: &[u8]) -> Result<(ElemId, usize)> {
        let js: Vec<usize> = bits(mask).collect();
        let mut seen = BTreeSet::from([w]);
        let mut q = VecDeque::from([w]);
        while let Some(x) = q.pop_front() {
            for &k in &js {
                let y = self.mul(self.mul(self.gens[k], x), self.gens[theta[k] as usize]);
                if seen.insert(y) {
                    q.push_back(y);
                }
            }
        }
        let min_len = seen.iter().map(|&x| self.lengths[x as usize]).min().expect("nonempty");
        let mins: Vec<ElemId> = seen.iter().copied().filter(|&x| self.lengths[x as usize] == min_len).collect();
        if mins.len() != 1 {
            return Err(CoxError::Oracle(format!(
                "{}: twisted class has {} minimal elements",
                self.spec,
                mins.len()
            )));
        }
        Ok((mins[0], seen.len()))
    }

    /// Whether `(w,θ)` is a perfect involution of `W_J⁺`.
    pub fn is_perfect_involution(&self, mask: u32, z: &ExtendedElement) -> bool {
        let par = self.parabolic(mask);
        if !par.contains(z.w) || !self.is_theta_of(mask, &z.theta) {
            return false;
        }
        let table = self.theta_table(&par, &z.theta);
        let th = |x: ElemId| table[par.local_index(x).expect("in W_J")];
        self.perfect_with(&par, &self.parabolic_reflections(&par), z.w, &th)
    }

    fn is_theta_of(&self, mask: u32, theta: &[u8]) -> bool {
        theta.len() == self.rank()
            && self.diagram_automorphisms(mask).iter().any(|a| a == theta)
            && (0..self.rank()).all(|i| theta[theta[i] as usize] as usize == i)
    }

    fn perfect_with(&self, _par: &Parabolic, refl: &[ElemId], w: ElemId, th: &dyn Fn(ElemId) -> ElemId) -> bool {
        let tw = th(w);
        if self.mul(w, tw) != 0 {
            return false;
        }
        refl.iter().all(|&t| {
            let x = self.mul(self.mul(self.mul(w, th(t)), tw), t);
            self.mul(x, x) == 0
        })
    }

    /// All perfect conjugacy classes of `W_J⁺`.
    pub fn perfect_classes_of(&self, mask: u32) -> Result<Arc<Vec<PerfectClass>>> {
        if let Some(p) = self.perfect.lock().expect("poisoned").get(&mask) {
            return Ok(p.clone());
        }
        let par = self.parabolic(mask);
        let refl = self.parabolic_reflections(&par);
        let mut out = Vec::new();
        for theta in self.diagram_automorphisms(mask) {
            if (0..self.rank()).any(|i| theta[theta[i] as usize] as usize != i) {
                continue;
            }
            let table = self.theta_table(&par, &theta);
            let th = |x: ElemId| table[par.local_index(x).expect("in W_J")];
            let mut done: BTreeSet<ElemId> = BTreeSet::new();
            for &w in &par.elems {
                if done.contains(&w) || !self.perfect_with(&par, &refl, w, &th) {
                    continue;
                }
                let (minimal, size) = self.twisted_orbit(mask, w, &theta)?;
                let js: Vec<usize> = bits(mask).collect();
                let mut q = VecDeque::from([w]);
                done.insert(w);
                while let Some(x) = q.pop_front() {
                    for &k in &js {
                        let y = self.mul(self.mul(self.gens[k], x), self.gens[theta[k] as usize]);
                        if done.insert(y) {
                            q.push_back(y);
                        }
                    }
                }
                out.push(PerfectClass { j: mask, theta: theta.clone(), minimal, size });
            }
        }
        out.sort_by(|a, b| {
            (self.lengths[a.minimal as usize], &a.theta, a.minimal).cmp(&(self.lengths[b.minimal as usize], &b.theta, b.minimal))
        });
        let out = Arc::new(out);
        self.perfect.lock().expect("poisoned").insert(mask, out.clone());
        Ok(out)
    }

    pub fn perfect_classes(&self) -> Result<Arc<Vec<PerfectClass>>> {
        self.perfect_classes_of(self.full_mask())
    }

    /// `C_J(z) = {g ∈ W_J : g z = z g}`.
    pub fn centralizer(&self, mask: u32, z: &ExtendedElement) -> Result<Vec<ElemId>> {
        let par = self.parabolic(mask);
        if !par.contains(z.w) {
            return Err(CoxError::Oracle("z outside W_J⁺".into()));
        }
        let table = self.theta_table(&par, &z.theta);
        let mut out: Vec<ElemId> = par
            .elems
            .iter()
            .zip(&table)
            .filter(|(&g, &tg)| self.mul(g, z.w) == self.mul(z.w, tg))
            .map(|(&g, _)| g)
            .collect();
        out.sort_unstable();
        Ok(out)
    }

    /// Linear characters of `W_J`, as masks of generators sent to `-1`.
    pub fn linear_sigmas(&self, mask: u32) -> Vec<u32> {
        let js: Vec<usize> = bits(mask).collect();
        (0..(1u32 << js.len()))
            .map(|sub| js.iter().enumerate().filter(|(i, _)| sub & (1 << i) != 0).fold(0u32, |m, (_, &k)| m | (1 << k)))
            .filter(|&sig| {
                js.iter().all(|&a| {
                    js.iter().all(|&b| self.coxeter[a][b] % 2 == 0 || ((sig >> a) & 1) == ((sig >> b) & 1))
                })
            })
            .collect()
    }

    /// Induced class function `Ind_H^G(f)` from values of `f` on the listed
    /// subgroup elements.
    pub fn induced_character<T: Scalar>(&self, h: &[ElemId], f: &[T]) -> Result<ClassFunction<T>> {
        let mut sums = vec![T::zero(); self.num_classes()];
        for (&x, &v) in h.iter().zip(f) {
            let c = self.class_of(x);
            sums[c] = sums[c].checked_add(&v).ok_or(CoxError::Overflow("induced_character"))?;
        }
        let g = T::from_usize(self.order()).ok_or(CoxError::Overflow("induced_character"))?;
        let hn = T::from_usize(h.len()).ok_or(CoxError::Overflow("induced_character"))?;
        let mut out = Vec::with_capacity(sums.len());
        for (c, s) in sums.into_iter().enumerate() {
            let size = T::from_u64(self.class_sizes[c]).ok_or(CoxError::Overflow("induced_character"))?;
            let num = s.checked_mul(&g).ok_or(CoxError::Overflow("induced_character"))?;
            let den = hn * size;
            if !(num % den).is_zero() {
                return Err(CoxError::Oracle("induced character value not integral".into()));
            }
            out.push(num / den);
        }
        Ok(ClassFunction(out))
    }

    /// Induction of a `±1` character of `H`, after checking multiplicativity
    /// on all pairs when `|H|` is small enough.
    pub fn induced_linear(&self, h: &[ElemId], sigma: &[i64]) -> Result<ClassFunction<i64>> {
        if h.len() <= 2048 {
            let pos: HashMap<ElemId, usize> = h.iter().enumerate().map(|(i, &x)| (x, i)).collect();
            for (i, &a) in h.iter().enumerate() {
                for (j, &b) in h.iter().enumerate() {
                    let Some(&k) = pos.get(&self.mul(a, b)) else {
                        return Err(CoxError::Domain("H is not closed under multiplication".into()));
                    };
                    if sigma[k] != sigma[i] * sigma[j] {
                        return Err(CoxError::Domain("sigma is not multiplicative".into()));
                    }
                }
            }
        }
        self.induced_character(h, sigma)
    }

    /// `r2(x) = #{h : h² = x}`.
    pub fn sqrt_count(&self) -> ClassFunction<i64> {
        let mut counts = vec![0u64; self.num_classes()];
        for x in 0..self.order() as u32 {
            counts[self.class_of(self.mul(x, x))] += 1;
        }
        ClassFunction(
            counts
                .iter()
                .zip(&self.class_sizes)
                .map(|(c, s)| {
                    assert_eq!(c % s, 0, "square counts constant on classes");
                    (c / s) as i64
                })
                .collect(),
        )
    }

    pub fn inner_product(&self, f: &ClassFunction<i64>, g: &ClassFunction<i64>) -> Result<Ratio<i64>> {
        if f.0.len() != self.num_classes() || g.0.len() != self.num_classes() {
            return Err(CoxError::TypeMismatch("class function of another group".into()));
        }
        let mut acc: i128 = 0;
        for c in 0..self.num_classes() {
            acc += i128::from(self.class_sizes[c] as i64) * i128::from(f.0[c]) * i128::from(g.0[c]);
        }
        let n = self.order() as i128;
        let g = num_integer::gcd(acc, n);
        let (num, den) = (acc / g, n / g);
        Ok(Ratio::new(
            i64::try_from(num).map_err(|_| CoxError::Overflow("inner_product"))?,
            i64::try_from(den).map_err(|_| CoxError::Overflow("inner_product"))?,
        ))
    }

    fn integral_inner(&self, f: &ClassFunction<i64>, g: &ClassFunction<i64>) -> Result<i64> {
        let r = self.inner_product(f, g)?;
        if !r.is_integer() {
            return Err(CoxError::Oracle(format!("inner product {r} not integral")));
        }
        Ok(r.to_integer())
    }

    pub fn linear_character(&self, sigma: u32) -> ClassFunction<i64> {
        let par = self.parabolic(self.full_mask());
        let table = self.sigma_table(&par, sigma);
        let mut vals = vec![0i64; self.num_classes()];
        for (i, &x) in par.elems.iter().enumerate() {
            vals[self.class_of(x)] = i64::from(table[i]);
        }
        ClassFunction(vals)
    }

    pub fn sign_character(&self) -> ClassFunction<i64> {
        self.linear_character(self.full_mask())
    }

    pub fn oracle_is_mf(&self, chi: &ClassFunction<i64>) -> Result<bool> {
        let r2 = self.sqrt_count();
        Ok(self.inner_product(chi, chi)? == self.inner_product(chi, &r2)?)
    }

    // ------------------------------------------------------------ triples

    /// Replaces `z` by the unique minimal element of its class.
    pub fn minimize(&self, t: &Triple) -> Result<Triple> {
        let (w, _) = self.twisted_orbit(t.j, t.z.w, &t.z.theta)?;
        Ok(Triple { j: t.j, z: ExtendedElement { w, theta: t.z.theta.clone() }, sigma: t.sigma })
    }

    fn check_triple(&self, t: &Triple) -> Result<()> {
        if !self.is_perfect_involution(t.j, &t.z) {
            return Err(CoxError::Oracle(format!("{}: z is not a perfect involution of W_J⁺", self.spec)));
        }
        if !self.linear_sigmas(t.j).contains(&t.sigma) {
            return Err(CoxError::Oracle("sigma is not a linear character of W_J".into()));
        }
        Ok(())
    }

    pub fn equiv_key(&self, t: &Triple) -> Result<EquivKey> {
        let m = self.minimize(t)?;
        let cent = self.centralizer(m.j, &m.z)?;
        let par = self.parabolic(m.j);
        let sig = self.sigma_table(&par, m.sigma);
        let mut negative: Vec<ElemId> =
            cent.iter().copied().filter(|&g| sig[par.local_index(g).expect("in W_J")] < 0).collect();
        negative.sort_unstable();
        Ok(EquivKey { j: m.j, centralizer: cent, negative })
    }

    /// `χ^T = Ind_{C_J(z)}^W(σ)`.
    pub fn triple_character(&self, t: &Triple) -> Result<ClassFunction<i64>> {
        self.check_triple(t)?;
        let cent = self.centralizer(t.j, &t.z)?;
        let par = self.parabolic(t.j);
        let sig = self.sigma_table(&par, t.sigma);
        let vals: Vec<i64> = cent.iter().map(|&g| i64::from(sig[par.local_index(g).expect("in W_J")])).collect();
        self.induced_character(&cent, &vals)
    }

    fn gen_index(&self, x: ElemId) -> usize {
        self.gens.iter().position(|&g| g == x).expect("generator")
    }

    fn mask_image(&self, mask: u32, f: impl Fn(usize) -> usize) -> u32 {
        bits(mask).fold(0, |m, k| m | (1 << f(k)))
    }

    pub fn dual(&self, t: &Triple) -> Result<Triple> {
        let w0 = self.longest;
        let par = self.parabolic(t.j);
        let wj = par.longest;
        let ad = |x: ElemId, g: ElemId| self.mul(self.mul(g, x), self.inv(g));
        let conj0 = |k: usize| self.gen_index(ad(self.gens[k], w0));
        let j2 = self.mask_image(t.j, conj0);
        let w = ad(self.mul(t.z.w, wj), w0);
        let mut theta = self.identity_theta();
        for s2 in bits(j2) {
            let s = conj0(s2);
            let ts = self.gens[t.z.theta[s] as usize];
            theta[s2] = self.gen_index(ad(ad(ts, wj), w0)) as u8;
        }
        let sigma = self.mask_image(t.sigma, conj0);
        self.minimize(&Triple { j: j2, z: ExtendedElement { w, theta }, sigma })
    }

    /// `T^α = (α⁻¹J, α⁻¹K, σ∘α)`.
    pub fn apply_aut_to_triple(&self, a: usize, t: &Triple) -> Result<Triple> {
        let alpha = &self.automorphisms[a];
        let mut inv = vec![0u8; alpha.len()];
        for (i, &v) in alpha.iter().enumerate() {
            inv[v as usize] = i as u8;
        }
        let inv_a = (0..self.automorphisms.len())
            .find(|&b| self.automorphisms[b] == inv)
            .expect("automorphisms form a group");
        let j2 = self.mask_image(t.j, |k| inv[k] as usize);
        let w = self.apply_automorphism(inv_a, t.z.w);
        let mut theta = self.identity_theta();
        for s2 in bits(j2) {
            theta[s2] = inv[t.z.theta[alpha[s2] as usize] as usize];
        }
        let sigma = self.mask_image(t.sigma, |k| inv[k] as usize);
        self.minimize(&Triple { j: j2, z: ExtendedElement { w, theta }, sigma })
    }

    pub fn bar(&self, t: &Triple) -> Triple {
        Triple { j: t.j, z: t.z.clone(), sigma: t.sigma ^ t.j }
    }

    /// Every triple `(J, K, σ)`, one per `≡`-class, in a fixed order.
    pub fn all_triples(&self) -> Result<Vec<OracleTriple>> {
        let mut seen: HashMap<EquivKey, usize> = HashMap::new();
        let mut out = Vec::new();
        for mask in 0..=self.full_mask() {
            for class in self.perfect_classes_of(mask)?.iter() {
                for sigma in self.linear_sigmas(mask) {
                    let t = Triple { j: mask, z: ExtendedElement { w: class.minimal, theta: class.theta.clone() }, sigma };
                    let key = self.equiv_key(&t)?;
                    if seen.contains_key(&key) {
                        continue;
                    }
                    let character = self.triple_character(&t)?;
                    seen.insert(key.clone(), out.len());
                    out.push(OracleTriple { triple: t, key, character });
                }
            }
        }
        Ok(out)
    }

    /// Union-find roots of the strong (or full) relation on `≡`-classes.
    pub fn triple_classes(&self, triples: &[OracleTriple], full: bool) -> Result<Vec<usize>> {
        let pos: HashMap<&EquivKey, usize> = triples.iter().enumerate().map(|(i, t)| (&t.key, i)).collect();
        let mut uf: Vec<usize> = (0..triples.len()).collect();
        fn find(uf: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while uf[r] != r {
                r = uf[r];
            }
            let mut y = x;
            while uf[y] != r {
                let n = uf[y];
                uf[y] = r;
                y = n;
            }
            r
        }
        let auts: Vec<usize> = (1..self.automorphisms.len()).filter(|&a| full || self.is_inner(a)).collect();
        for (i, t) in triples.iter().enumerate() {
            let mut images = vec![self.dual(&t.triple)?];
            for &a in &auts {
                images.push(self.apply_aut_to_triple(a, &t.triple)?);
            }
            if full {
                images.push(self.bar(&t.triple));
            }
            for img in images {
                let k = self.equiv_key(&img)?;
                let j = *pos.get(&k).ok_or_else(|| CoxError::Oracle("transformed triple outside universe".into()))?;
                let (a, b) = (find(&mut uf, i), find(&mut uf, j));
                if a != b {
                    uf[a.max(b)] = a.min(b);
                }
            }
        }
        Ok((0..triples.len()).map(|i| find(&mut uf, i)).collect())
    }

    /// Sum of the triple characters equals `r2`; the witness is the first
    /// class where they differ.
    pub fn oracle_is_perfect(&self, triples: &[Triple]) -> Result<PerfectCheck> {
        let mut sum = ClassFunction::zero(self.num_classes());
        for t in triples {
            sum = sum.add(&self.triple_character(t)?)?;
        }
        let r2 = self.sqrt_count();
        let witness = (0..self.num_classes()).find(|&c| sum.0[c] != r2.0[c]);
        Ok(PerfectCheck { perfect: witness.is_none(), witness_class: witness })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerfectCheck {
    pub perfect: bool,
    pub witness_class: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct OracleTriple {
    pub triple: Triple,
    pub key: EquivKey,
    pub character: ClassFunction<i64>,
}

/// Result of the exhaustive search.
#[derive(Clone, Debug)]
pub struct OracleSearch {
    pub triples: Vec<OracleTriple>,
    /// Each model as sorted indices into `triples`.
    pub models: Vec<Vec<usize>>,
    pub strong_roots: Vec<usize>,
    pub full_roots: Vec<usize>,
}

impl OracleSearch {
    fn classes_by(&self, roots: &[usize]) -> Vec<Vec<usize>> {
        let mut by: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for (i, m) in self.models.iter().enumerate() {
            let mut sig: Vec<usize> = m.iter().map(|&t| roots[t]).collect();
            sig.sort_unstable();
            by.entry(sig).or_default().push(i);
        }
        by.into_values().collect()
    }

    /// Models grouped by strong equivalence (bijection of strongly
    /// equivalent triples).
    pub fn strong_classes(&self) -> Vec<Vec<usize>> {
        self.classes_by(&self.strong_roots)
    }

    pub fn full_classes(&self) -> Vec<Vec<usize>> {
        self.classes_by(&self.full_roots)
    }
}

struct CoverSearch<'a> {
    group: &'a OracleGroup,
    chars: Vec<ClassFunction<i64>>,
    degrees: Vec<i64>,
    orth: Vec<Vec<bool>>,
    probes: Vec<Vec<bool>>,
    target: i64,
    found: Vec<Vec<usize>>,
}

impl CoverSearch<'_> {
    fn run(&mut self, chosen: &mut Vec<usize>, allowed: Vec<bool>, degree: i64) {
        if degree == self.target {
            let mut c = chosen.clone();
            c.sort_unstable();
            self.found.push(c);
            return;
        }
        let avail: i64 = (0..self.chars.len()).filter(|&i| allowed[i]).map(|i| self.degrees[i]).sum();
        if degree + avail < self.target {
            return;
        }
        // an uncovered probe with the fewest allowed carriers
        let mut best: Option<(usize, Vec<usize>)> = None;
        for p in &self.probes {
            if chosen.iter().any(|&c| p[c]) {
                continue;
            }
            let carriers: Vec<usize> = (0..self.chars.len()).filter(|&i| allowed[i] && p[i]).collect();
            if best.as_ref().map_or(true, |(n, _)| carriers.len() < *n) {
                best = Some((carriers.len(), carriers));
            }
        }
        match best {
            Some((0, _)) => {}
            Some((_, carriers)) => {
                for c in carriers {
                    self.take(chosen, &allowed, degree, c);
                }
            }
            None => {
                let Some(first) = (0..self.chars.len()).find(|&i| allowed[i]) else { return };
                self.take(chosen, &allowed, degree, first);
                let mut rest = allowed;
                rest[first] = false;
                self.run(chosen, rest, degree);
            }
        }
    }

    fn take(&mut self, chosen: &mut Vec<usize>, allowed: &[bool], degree: i64, c: usize) {
        if degree + self.degrees[c] > self.target {
            return;
        }
        let next: Vec<bool> = (0..self.chars.len()).map(|i| allowed[i] && i != c && self.orth[c][i]).collect();
        chosen.push(c);
        self.run(chosen, next, degree + self.degrees[c]);
        chosen.pop();
    }
}

/// Known irreducible characters usable as search probes.
fn probe_irreducibles(g: &OracleGroup, chars: &[ClassFunction<i64>]) -> Result<Vec<ClassFunction<i64>>> {
    let mut irr: BTreeSet<Vec<i64>> = BTreeSet::new();
    let linear: Vec<ClassFunction<i64>> = g.linear_sigmas(g.full_mask()).into_iter().map(|s| g.linear_character(s)).collect();
    for l in &linear {
        irr.insert(l.0.clone());
    }
    for c in chars {
        if g.integral_inner(c, c)? == 1 {
            irr.insert(c.0.clone());
        }
    }
    for a in chars {
        for b in chars {
            if a == b {
                continue;
            }
            let ab = g.integral_inner(a, b)?;
            if ab == g.integral_inner(b, b)? && ab > 0 {
                let d = a.sub(b)?;
                if g.integral_inner(&d, &d)? == 1 && d.0[0] > 0 {
                    irr.insert(d.0);
                }
            }
        }
    }
    if let Ok(table) = standard_irreducibles(g) {
        for (_, f) in table {
            irr.insert(f.0);
        }
    }
    let base: Vec<Vec<i64>> = irr.iter().cloned().collect();
    for v in base {
        for l in &linear {
            let p: Vec<i64> = v.iter().zip(&l.0).map(|(a, b)| a * b).collect();
            irr.insert(p);
        }
    }
    Ok(irr.into_iter().map(ClassFunction).collect())
}

/// Exhaustive perfect-model search over all triples of `G`.
pub fn oracle_search(g: &OracleGroup) -> Result<OracleSearch> {
    let triples = g.all_triples()?;
    let r2 = g.sqrt_count();
    let mut by_char: BTreeMap<Vec<i64>, Vec<usize>> = BTreeMap::new();
    for (i, t) in triples.iter().enumerate() {
        if g.oracle_is_mf(&t.character)? {
            by_char.entry(t.character.0.clone()).or_default().push(i);
        }
    }
    let chars: Vec<ClassFunction<i64>> = by_char.keys().cloned().map(ClassFunction).collect();
    let preimages: Vec<Vec<usize>> = by_char.values().cloned().collect();
    let k = chars.len();
    let mut orth = vec![vec![false; k]; k];
    for a in 0..k {
        for b in 0..k {
            orth[a][b] = g.integral_inner(&chars[a], &chars[b])? == 0;
        }
    }
    let probes_cf = probe_irreducibles(g, &chars)?;
    let mut probes = Vec::new();
    for p in &probes_cf {
        let row: Vec<bool> = chars.iter().map(|c| g.integral_inner(c, p).map(|v| v > 0)).collect::<Result<_>>()?;
        probes.push(row);
    }
    let mut search = CoverSearch {
        group: g,
        degrees: chars.iter().map(|c| c.0[g.class_of(0)]).collect(),
        chars,
        orth,
        probes,
        target: r2.0[g.class_of(0)],
        found: Vec::new(),
    };
    let allowed = vec![true; k];
    search.run(&mut Vec::new(), allowed, 0);
    let mut models = Vec::new();
    for cover in &search.found {
        let total = cover.iter().try_fold(ClassFunction::zero(search.group.num_classes()), |acc, &c| acc.add(&search.chars[c]))?;
        if total != r2 {
            return Err(CoxError::Oracle("cover does not sum to r2".into()));
        }
        let mut partial: Vec<Vec<usize>> = vec![Vec::new()];
        for &c in cover {
            partial = partial
                .into_iter()
                .flat_map(|p| {
                    preimages[c].iter().map(move |&t| {
                        let mut q = p.clone();
                        q.push(t);
                        q
                    })
                })
                .collect();
        }
        for mut m in partial {
            m.sort_unstable();
            models.push(m);
        }
    }
    models.sort();
    let strong_roots = g.triple_classes(&triples, false)?;
    let full_roots = g.triple_classes(&triples, true)?;
    Ok(OracleSearch { triples, models, strong_roots, full_roots })
}

// -------------------------------------------------------- irreducibles

/// Number of ways to assign cycles to blocks of the given sizes.
fn young_count(cycles: &[u32], blocks: &mut [u32]) -> i64 {
    match cycles.split_first() {
        None => i64::from(blocks.iter().all(|&b| b == 0)),
        Some((&c, rest)) => {
            let mut total = 0;
            for i in 0..blocks.len() {
                if blocks[i] >= c {
                    blocks[i] -= c;
                    total += young_count(rest, blocks);
                    blocks[i] += c;
                }
            }
            total
        }
    }
}

fn permutations_of(k: usize) -> Vec<(Vec<usize>, i64)> {
    fn rec(cur: &mut Vec<usize>, used: &mut Vec<bool>, k: usize, out: &mut Vec<(Vec<usize>, i64)>) {
        if cur.len() == k {
            let mut inv = 0;
            for i in 0..k {
                for j in i + 1..k {
                    if cur[i] > cur[j] {
                        inv += 1;
                    }
                }
            }
            out.push((cur.clone(), if inv % 2 == 0 { 1 } else { -1 }));
            return;
        }
        for v in 0..k {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                rec(cur, used, k, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; k], k, &mut out);
    out
}

type SymMemo = Mutex<HashMap<(Partition, Vec<u32>), i64>>;

fn sym_memo() -> &'static SymMemo {
    static MEMO: OnceLock<SymMemo> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `χ^λ` at cycle type `cycles`, by the Jacobi–Trudi alternating sum of
/// Young permutation characters.
pub fn symmetric_character(lam: &Partition, cycles: &[u32]) -> i64 {
    let mut key_cycles = cycles.to_vec();
    key_cycles.sort_unstable_by(|a, b| b.cmp(a));
    let key = (lam.clone(), key_cycles.clone());
    if let Some(&v) = sym_memo().lock().expect("poisoned").get(&key) {
        return v;
    }
    let t = lam.transpose();
    let (shape, twist) = if t.len() < lam.len() { (&t, true) } else { (lam, false) };
    let k = shape.len();
    let mut total = 0i64;
    for (perm, sign) in permutations_of(k) {
        let mut blocks = Vec::with_capacity(k);
        let mut ok = true;
        for (i, &pi) in perm.iter().enumerate() {
            let v = shape.part(i) as i64 - i as i64 + pi as i64;
            if v < 0 {
                ok = false;
                break;
            }
            blocks.push(v as u32);
        }
        if ok {
            total += sign * young_count(&key_cycles, &mut blocks);
        }
    }
    if twist {
        let even_cycles = key_cycles.iter().filter(|&&c| c % 2 == 0).count();
        if even_cycles % 2 == 1 {
            total = -total;
        }
    }
    sym_memo().lock().expect("poisoned").insert(key, total);
    total
}

/// `χ^{(λ,μ)}` of `B_n` at signed cycle type `(positive, negative)`.
pub fn hyperoctahedral_character(lam: &Partition, mu: &Partition, pos: &[u32], neg: &[u32]) -> i64 {
    let cycles: Vec<(u32, bool)> = pos.iter().map(|&c| (c, false)).chain(neg.iter().map(|&c| (c, true))).collect();
    let k = lam.weight();
    let mut total = 0i64;
    for sub in 0..(1u32 << cycles.len()) {
        let (mut first, mut second, mut sign) = (Vec::new(), Vec::new(), 1i64);
        for (i, &(c, negative)) in cycles.iter().enumerate() {
            if sub & (1 << i) != 0 {
                first.push(c);
            } else {
                second.push(c);
                if negative {
                    sign = -sign;
                }
            }
        }
        if first.iter().sum::<u32>() != k {
            continue;
        }
        total += sign * symmetric_character(lam, &first) * symmetric_character(mu, &second);
    }
    total
}

fn cycle_data(g: &OracleGroup, x: ElemId) -> (Vec<u32>, Vec<u32>) {
    match g.spec {
        GroupSpec::SymA(_) => {
            let p = g.element(x);
            let n = p.len();
            let mut seen = vec![false; n];
            let mut out = Vec::new();
            for s in 0..n {
                if seen[s] {
                    continue;
                }
                let (mut len, mut i) = (0, s);
                while !seen[i] {
                    seen[i] = true;
                    len += 1;
                    i = p.image(i);
                }
                out.push(len);
            }
            out.sort_unstable_by(|a, b| b.cmp(a));
            (out, Vec::new())
        }
        _ => SignedPermutation::from_perm(g.element(x)).signed_cycle_type(),
    }
}

/// Irreducible characters of `S_n`, `B_n`, and the non-degenerate ones of
/// `D_n`, as class functions of the oracle group.
pub fn standard_irreducibles(g: &OracleGroup) -> Result<Vec<(crate::partitions::IrrLabel, ClassFunction<i64>)>> {
    if g.spec.weyl_type().is_none() {
        return Err(CoxError::TypeMismatch(format!("no standard labels for {}", g.spec)));
    }
    let data: Vec<(Vec<u32>, Vec<u32>)> = (0..g.num_classes()).map(|c| cycle_data(g, g.class_rep(c))).collect();
    let mut out = Vec::new();
    match g.spec {
        GroupSpec::SymA(n) => {
            for lam in partitions_of(n) {
                let vals = data.iter().map(|(p, _)| symmetric_character(&lam, p)).collect();
                out.push((crate::partitions::IrrLabel::A(lam), ClassFunction(vals)));
            }
        }
        GroupSpec::SymB(n) => {
            for a in 0..=n {
                for lam in partitions_of(a) {
                    for mu in partitions_of(n - a) {
                        let vals = data.iter().map(|(p, q)| hyperoctahedral_character(&lam, &mu, p, q)).collect();
                        out.push((b_label(lam.clone(), mu), ClassFunction(vals)));
                    }
                }
            }
        }
        GroupSpec::SymD(n) => {
            for a in 0..=n {
                for lam in partitions_of(a) {
                    for mu in partitions_of(n - a) {
                        if lam >= mu {
                            continue;
                        }
                        let vals = data.iter().map(|(p, q)| hyperoctahedral_character(&lam, &mu, p, q)).collect();
                        out.push((d_label(lam.clone(), mu)?, ClassFunction(vals)));
                    }
                }
            }
        }
        _ => return Err(CoxError::TypeMismatch(format!("no standard labels for {}", g.spec))),
    }
    Ok(out)
}

/// `Σ χ(1)` over `Irr(W)`. Types A, B, D use the labelled irreducibles (a
/// degenerate pair `[ν,±]` contributes `χ^{(ν,ν)}(1)`); dihedral groups and
/// `H₃ ≅ A₅ × C₂` use their known degree lists.
pub fn irreducible_degree_sum(g: &OracleGroup) -> Result<i64> {
    match g.spec {
        GroupSpec::Dihedral(m) => Ok(if m % 2 == 0 { i64::from(m) + 2 } else { i64::from(m) + 1 }),
        GroupSpec::H3 => Ok(2 * (1 + 3 + 3 + 4 + 5)),
        spec => {
            let id_class = g.class_of(g.identity());
            let mut total: i64 = standard_irreducibles(g)?.iter().map(|(_, chi)| chi.0[id_class]).sum();
            if let GroupSpec::SymD(n) = spec {
                if n % 2 == 0 {
                    let n_id = vec![1u32; n as usize];
                    total += partitions_of(n / 2)
                        .iter()
                        .map(|nu| hyperoctahedral_character(nu, nu, &n_id, &[]))
                        .sum::<i64>();
                }
            }
            Ok(total)
        }
    }
}

/// Number of `x` with `x² = 1`, the identity included.
pub fn involution_count(g: &OracleGroup) -> u64 {
    (0..g.order() as u32).filter(|&x| g.mul(x, x) == g.identity()).count() as u64
}

/// `(w_fpf, w_fpf⋄)` in `D_n`, `n` even.
fn fpf_pair(g: &OracleGroup) -> Result<(ElemId, ElemId)> {
    let GroupSpec::SymD(n) = g.spec else {
        return Err(CoxError::TypeMismatch("fpf pair needs type D".into()));
    };
    if n % 2 != 0 {
        return Err(CoxError::Domain("fpf pair needs even rank".into()));
    }
    let rest: Vec<usize> = (3..n as usize).step_by(2).collect();
    let mut a = vec![1];
    a.extend(&rest);
    let mut b = vec![0];
    b.extend(&rest);
    Ok((g.product(&a), g.product(&b)))
}

/// Splits `(plus, minus)` of degenerate multiplicities agreed on by every
/// solution of `Σ (a_ν − b_ν) 2^{n/2} χ^ν(1) = diff` with `a_ν + b_ν = mass_ν`.
fn solve_splits(n: u32, masses: &BTreeMap<Partition, u64>, diff: i64) -> Result<BTreeMap<Partition, (u64, u64)>> {
    let cores: Vec<(&Partition, u64, i64)> = masses
        .iter()
        .map(|(c, &m)| Ok((c, m, (1i64 << (n / 2)) * partition_degree(c)? as i64)))
        .collect::<Result<_>>()?;
    let mut solutions: Vec<Vec<u64>> = Vec::new();
    fn rec(i: usize, cores: &[(&Partition, u64, i64)], rest: i64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if i == cores.len() {
            if rest == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let (_, m, w) = cores[i];
        for a in 0..=m {
            cur.push(a);
            rec(i + 1, cores, rest - (2 * a as i64 - m as i64) * w, cur, out);
            cur.pop();
        }
    }
    rec(0, &cores, diff, &mut Vec::new(), &mut solutions);
    if solutions.is_empty() {
        return Err(CoxError::Oracle("no degenerate split matches the fpf difference".into()));
    }
    let mut out = BTreeMap::new();
    for (i, (core, m, _)) in cores.iter().enumerate() {
        let a = solutions[0][i];
        if solutions.iter().all(|s| s[i] == a) {
            out.insert((*core).clone(), (a, m - a));
        }
    }
    Ok(out)
}

/// Decomposes a class function of `S_n`, `B_n` or `D_n` into irreducible
/// labels. Degenerate `D` constituents are split through the value gap at
/// `w_fpf`; cores whose split stays ambiguous are left unresolved.
pub fn oracle_decompose(g: &OracleGroup, f: &ClassFunction<i64>) -> Result<VirtualCharacter> {
    let (ty, n) = match g.spec {
        GroupSpec::SymA(n) => (WeylType::A, n),
        GroupSpec::SymB(n) => (WeylType::B, n),
        GroupSpec::SymD(n) => (WeylType::D, n),
        _ => return Err(CoxError::TypeMismatch(format!("cannot decompose on {}", g.spec))),
    };
    let mut out = VirtualCharacter::zero(ty, n);
    for (label, chi) in standard_irreducibles(g)? {
        out.add_label(label, g.integral_inner(f, &chi)?)?;
    }
    if ty == WeylType::D && n % 2 == 0 {
        let data: Vec<(Vec<u32>, Vec<u32>)> = (0..g.num_classes()).map(|c| cycle_data(g, g.class_rep(c))).collect();
        let mut masses = BTreeMap::new();
        for core in partitions_of(n / 2) {
            let vals = ClassFunction(data.iter().map(|(p, q)| hyperoctahedral_character(&core, &core, p, q)).collect());
            let m = g.integral_inner(f, &vals)?;
            if m < 0 {
                return Err(CoxError::Domain("negative degenerate mass in oracle decomposition".into()));
            }
            if m > 0 {
                masses.insert(core, m as u64);
            }
        }
        let (a, b) = fpf_pair(g)?;
        let diff = f.0[g.class_of(a)] - f.0[g.class_of(b)];
        let splits = solve_splits(n, &masses, diff)?;
        for (core, m) in masses {
            match splits.get(&core) {
                Some(&(p, q)) => {
                    out.add_label(d_degen(core.clone(), Sign::Plus), p as i64)?;
                    out.add_label(d_degen(core, Sign::Minus), q as i64)?;
                }
                None => out.add_unresolved(core, m)?,
            }
        }
    }
    Ok(out)
}

type SplitMemo = Mutex<HashMap<Partition, BTreeMap<Partition, (u64, u64)>>>;

/// Resolved degenerate multiplicities of `Ind_{S_n}^{D_n}(χ^ν)`, `n = |ν|`
/// even, from the oracle group `D_n`.
pub fn degenerate_split_of_induced(nu: &Partition) -> Result<BTreeMap<Partition, (u64, u64)>> {
    static MEMO: OnceLock<SplitMemo> = OnceLock::new();
    let memo = MEMO.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = memo.lock().expect("poisoned").get(nu) {
        return Ok(v.clone());
    }
    let n = nu.weight();
    if n % 2 != 0 {
        return Err(CoxError::Domain("degenerate splits need even rank".into()));
    }
    let g = cached_group(GroupSpec::SymD(n))?;
    let mask = g.full_mask() & !1;
    let par = g.parabolic(mask);
    let vals: Vec<i64> = par.elems.iter().map(|&h| symmetric_character(nu, &cycle_data(&g, h).0)).collect();
    let x = g.induced_character(&par.elems, &vals)?;
    let (a, b) = fpf_pair(&g)?;
    let diff = x.0[g.class_of(a)] - x.0[g.class_of(b)];
    let mut masses = BTreeMap::new();
    for core in partitions_of(n / 2) {
        let m = lr_coefficient(&core, &core, nu);
        if m > 0 {
            masses.insert(core, m);
        }
    }
    let splits = solve_splits(n, &masses, diff)?;
    memo.lock().expect("poisoned").insert(nu.clone(), splits.clone());
    Ok(splits)
}

// ------------------------------------------------- indices as triples

struct TripleBuilder<'a> {
    g: &'a OracleGroup,
    n: usize,
    j: u32,
    w: ElemId,
    theta: Vec<u8>,
    sigma: u32,
}

impl<'a> TripleBuilder<'a> {
    fn new(g: &'a OracleGroup) -> Self {
        let n = match g.spec {
            GroupSpec::SymA(n) | GroupSpec::SymB(n) | GroupSpec::SymD(n) => n as usize,
            _ => 0,
        };
        TripleBuilder { g, n, j: 0, w: 0, theta: g.identity_theta(), sigma: 0 }
    }

    fn add_gens(&mut self, gens: &[usize], gamma_neg: &[usize]) {
        for &k in gens {
            self.j |= 1 << k;
        }
        for &k in gamma_neg {
            self.sigma |= 1 << k;
        }
    }

    fn times(&mut self, x: ElemId) {
        self.w = self.g.mul(self.w, x);
    }

    fn swap(&mut self, a: usize, b: usize) {
        self.theta[a] = b as u8;
        self.theta[b] = a as u8;
    }

    /// Signed permutation acting on the points `offset+1 ..= offset+images.len()`.
    fn signed_block(&self, offset: usize, images: &[i32]) -> Result<ElemId> {
        let mut full: Vec<i32> = (1..=self.n as i32).collect();
        for (i, &v) in images.iter().enumerate() {
            full[offset + i] = v.signum() * (v.abs() + offset as i32);
        }
        self.g.signed_element(full)
    }

    /// Type-A column on a chain of generators.
    fn a_column(&mut self, chain: &[usize], col: &Column) -> Result<()> {
        let neg: Vec<usize> = if col.gamma == Gamma::Sgn { chain.to_vec() } else { Vec::new() };
        self.add_gens(chain, &neg);
        let k = chain.len();
        let flip = |b: &mut Self| {
            for i in 0..k / 2 {
                b.swap(chain[i], chain[k - 1 - i]);
            }
        };
        match col.beta {
            Beta::Id => {}
            Beta::IdPlus => {
                let mut word = Vec::new();
                for top in 0..k {
                    for i in (0..=top).rev() {
                        word.push(chain[i]);
                    }
                }
                let w0 = self.g.product(&word);
                self.times(w0);
                flip(self);
            }
            Beta::Fpf => {
                let word: Vec<usize> = chain.iter().step_by(2).copied().collect();
                let x = self.g.product(&word);
                self.times(x);
            }
            Beta::FpfPlus => flip(self),
            b => return Err(CoxError::InvalidIndex(format!("beta {b} in a type A column"))),
        }
        Ok(())
    }
}

impl OracleGroup {
    /// The model triple `T^Θ` of an index, with `z` minimal in its class.
    pub fn triple_of_index(&self, idx: &ModelIndex) -> Result<Triple> {
        let violations = idx.validate();
        if !violations.is_empty() {
            return Err(CoxError::InvalidIndex(violations.join("; ")));
        }
        let mismatch = || CoxError::TypeMismatch(format!("index {idx} does not fit {}", self.spec));
        let mut b = TripleBuilder::new(self);
        match (idx, self.spec) {
            (ModelIndex::A(x), GroupSpec::SymA(n)) if x.rank() == n => {
                let mut offset = 0usize;
                for col in &x.columns {
                    let a = col.alpha as usize;
                    let chain: Vec<usize> = (offset..offset + a.saturating_sub(1)).collect();
                    if a > 0 {
                        b.a_column(&chain, col)?;
                    }
                    offset += a;
                }
            }
            (ModelIndex::B(x), GroupSpec::SymB(n)) if x.rank() == n => {
                let a0 = x.left.alpha as usize;
                if a0 > 0 {
                    let gens: Vec<usize> = (0..a0).collect();
                    let neg: Vec<usize> = match x.left.gamma {
                        Gamma::Triv => vec![],
                        Gamma::Sgn => gens.clone(),
                        Gamma::Pm => (1..a0).collect(),
                        Gamma::Mp => vec![0],
                    };
                    b.add_gens(&gens, &neg);
                    let negate = |q: usize| -> Vec<i32> {
                        (1..=a0 as i32).map(|i| if (i as usize) <= q { -i } else { i }).collect()
                    };
                    match x.left.beta {
                        Beta::Id => {}
                        Beta::IdPlus => {
                            let e = b.signed_block(0, &negate(a0))?;
                            b.times(e);
                        }
                        Beta::Fpf => {
                            let word: Vec<usize> = (1..a0).step_by(2).collect();
                            let e = self.product(&word);
                            b.times(e);
                        }
                        Beta::Pq(_, q) => {
                            let e = b.signed_block(0, &negate(q as usize))?;
                            b.times(e);
                        }
                        _ => return Err(mismatch()),
                    }
                }
                let chain: Vec<usize> = (a0 + 1..n as usize).collect();
                if x.right.alpha > 0 {
                    b.a_column(&chain, &x.right)?;
                }
            }
            (ModelIndex::D(x), GroupSpec::SymD(n)) if x.rank() == n => {
                let a0 = x.left.alpha as usize;
                if a0 >= 2 {
                    let gens: Vec<usize> = (0..a0).collect();
                    let neg: Vec<usize> = match x.left.gamma {
                        Gamma::Triv => vec![],
                        Gamma::Sgn => gens.clone(),
                        // 1₊₋ is + on s₋₁ and − on s₁
                        Gamma::Pm => vec![1],
                        Gamma::Mp => vec![0],
                    };
                    b.add_gens(&gens, &neg);
                    // negate the points from..=to of the block
                    let negate = |from: usize, to: usize| -> Vec<i32> {
                        (1..=a0 as i32).map(|i| if (i as usize) >= from && (i as usize) <= to { -i } else { i }).collect()
                    };
                    match x.left.beta {
                        Beta::Id => {}
                        Beta::IdPlus => {
                            if a0 % 2 == 0 {
                                let e = b.signed_block(0, &negate(1, a0))?;
                                b.times(e);
                            } else {
                                let e = b.signed_block(0, &negate(2, a0))?;
                                b.times(e);
                                b.swap(0, 1);
                            }
                        }
                        Beta::Fpf | Beta::FpfDiamond => {
                            let mut word = vec![if x.left.beta == Beta::Fpf { 1 } else { 0 }];
                            word.extend((3..a0).step_by(2));
                            let e = self.product(&word);
                            b.times(e);
                        }
                        Beta::Pq(_, q) => {
                            let q = q as usize;
                            if q % 2 == 0 {
                                let e = b.signed_block(0, &negate(1, q))?;
                                b.times(e);
                            } else {
                                let e = b.signed_block(0, &negate(2, q))?;
                                b.times(e);
                                b.swap(0, 1);
                            }
                        }
                        Beta::Tri(p, q, arrow) => {
                            if a0 != 4 || p + q != 4 || p == 0 || q == 0 {
                                return Err(mismatch());
                            }
                            // K_(p,q) transported by the order-three automorphism
                            let q = q as usize;
                            let (base, mut theta) = if q % 2 == 0 {
                                (b.signed_block(0, &negate(1, q))?, self.identity_theta())
                            } else {
                                let mut t = self.identity_theta();
                                t.swap(0, 1);
                                (b.signed_block(0, &negate(2, q))?, t)
                            };
                            let mut alpha = self.identity_theta();
                            let cycle: [u8; 4] = match arrow {
                                Arrow::Cw => [1, 3, 2, 0],
                                Arrow::Ccw => [3, 0, 2, 1],
                            };
                            alpha[..4].copy_from_slice(&cycle);
                            let (w, t) = self.transport(0b1111, &alpha, base, &theta);
                            theta = t;
                            b.times(w);
                            b.theta[..4].copy_from_slice(&theta[..4]);
                        }
                        _ => return Err(mismatch()),
                    }
                }
                if x.right.alpha > 0 {
                    let chain: Vec<usize> = if x.negated {
                        let mut c = vec![0];
                        c.extend(2..n as usize);
                        c
                    } else {
                        (a0 + 1..n as usize).collect()
                    };
                    b.a_column(&chain, &x.right)?;
                }
            }
            _ => return Err(mismatch()),
        }
        let t = Triple { j: b.j, z: ExtendedElement { w: b.w, theta: b.theta }, sigma: b.sigma };
        self.check_triple(&t)?;
        self.minimize(&t)
    }
}

/// Group matching an index's type and rank.
pub fn group_for(ty: WeylType, n: u32) -> GroupSpec {
    match ty {
        WeylType::A => GroupSpec::SymA(n),
        WeylType::B => GroupSpec::SymB(n),
        WeylType::D => GroupSpec::SymD(n),
    }
}

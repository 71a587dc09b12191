//! Congruence subgroups through their images in `SL2(Z/N)`.
//!
//! Right cosets `G g` are enumerated by breadth-first search under right
//! multiplication by `S = [[0,-1],[1,0]]` and `T = [[1,1],[0,1]]`. Cusps are
//! the orbits of `T` on the coset space and their widths are the orbit
//! lengths; this needs `-I` in `G`, which holds for `Gamma0` and `GammaTilde`.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{factor_u64, gcd_u64, inv_mod, is_prime_u64, pow_mod};

/// Default bound on the number of cosets.
pub const DEFAULT_INDEX_CAP: usize = 1_000_000;
/// Above this many subgroup elements cosets are matched by scanning
/// representatives instead of by canonical minimal member.
const CANONICAL_LIMIT: u64 = 1 << 20;
/// Largest `|SL2(Z/N)|` for which a custom predicate is enumerated.
const CUSTOM_ENUM_LIMIT: u64 = 1 << 22;
const CLOSURE_SAMPLES: usize = 512;
const CLOSURE_SEED: u64 = 0x6a09_e667;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModGroupError {
    #[error("invalid level: {0}")]
    InvalidLevel(String),
    #[error("more than {cap} cosets")]
    IndexCapExceeded { cap: usize },
    #[error("predicate {name} is not closed: {witness}")]
    NotClosed { name: String, witness: String },
    #[error("cusp widths are only computed for subgroups containing -I")]
    MinusIdentityRequired,
    #[error("{inner} is not contained in {outer}: {witness}")]
    NotASubgroup {
        inner: String,
        outer: String,
        witness: String,
    },
    #[error("index {inner_index} is not a multiple of {outer_index}")]
    NonIntegralDegree {
        inner_index: usize,
        outer_index: usize,
    },
    #[error("levels {0} and {1} differ")]
    LevelMismatch(u64, u64),
}

/// Element of `SL2(Z/N)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MatModN {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub d: u64,
    pub level: u64,
}

impl fmt::Debug for MatModN {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]] mod {}",
            self.a, self.b, self.c, self.d, self.level
        )
    }
}

impl MatModN {
    /// Reduces the entries and checks `ad - bc = 1 (mod N)`.
    pub fn new(a: i64, b: i64, c: i64, d: i64, level: u64) -> Option<Self> {
        let n = level as i64;
        let r = |x: i64| x.rem_euclid(n) as u64;
        let m = Self::raw(r(a), r(b), r(c), r(d), level);
        m.is_special().then_some(m)
    }

    fn raw(a: u64, b: u64, c: u64, d: u64, level: u64) -> Self {
        Self { a, b, c, d, level }
    }

    pub fn identity(level: u64) -> Self {
        Self::raw(1 % level, 0, 0, 1 % level, level)
    }

    pub fn minus_identity(level: u64) -> Self {
        Self::raw((level - 1) % level, 0, 0, (level - 1) % level, level)
    }

    pub fn s(level: u64) -> Self {
        Self::raw(0, (level - 1) % level, 1 % level, 0, level)
    }

    pub fn t(level: u64) -> Self {
        Self::raw(1 % level, 1 % level, 0, 1 % level, level)
    }

    pub fn det(&self) -> u64 {
        let n = self.level;
        (self.a * self.d % n + n - self.b * self.c % n) % n
    }

    pub fn is_special(&self) -> bool {
        self.det() == 1 % self.level
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.level;
        Self::raw(
            (self.a * o.a + self.b * o.c) % n,
            (self.a * o.b + self.b * o.d) % n,
            (self.c * o.a + self.d * o.c) % n,
            (self.c * o.b + self.d * o.d) % n,
            n,
        )
    }

    pub fn inverse(&self) -> Self {
        let n = self.level;
        Self::raw(self.d, (n - self.b) % n, (n - self.c) % n, self.a, n)
    }

    pub fn neg(&self) -> Self {
        let n = self.level;
        Self::raw(
            (n - self.a) % n,
            (n - self.b) % n,
            (n - self.c) % n,
            (n - self.d) % n,
            n,
        )
    }

    fn key(&self) -> [u64; 4] {
        [self.a, self.b, self.c, self.d]
    }
}

/// Every element of `SL2(Z/N)`, bottom row first.
pub fn sl2_elements(level: u64) -> Vec<MatModN> {
    let n = level;
    let mut out = Vec::new();
    for c in 0..n {
        for d in 0..n {
            if gcd_u64(gcd_u64(c, d), n) != 1 {
                continue;
            }
            let (a0, b0) = complete_row(c, d, n);
            for t in 0..n {
                out.push(MatModN::raw(
                    (a0 + t * c) % n,
                    (b0 + t * d) % n,
                    c,
                    d,
                    n,
                ));
            }
        }
    }
    out
}

/// `(a, b)` with `a d - b c = 1 (mod n)` for a primitive row `(c, d)`.
fn complete_row(c: u64, d: u64, n: u64) -> (u64, u64) {
    if n == 1 {
        return (0, 0);
    }
    // u d + v c = g = gcd(c, d), then alpha g = 1 (mod n)
    let (g, u, v) = ext_gcd_i128(d as i128, c as i128);
    let alpha = inv_mod(g as u64 % n, n).expect("row is primitive mod n") as i128;
    let n_i = n as i128;
    let a = (alpha * u).rem_euclid(n_i) as u64;
    let b = (-alpha * v).rem_euclid(n_i) as u64;
    (a, b)
}

fn ext_gcd_i128(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd_i128(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// `|SL2(Z/N)| = N^3 prod_{q | N} (1 - 1/q^2)`.
pub fn sl2_order(level: u64) -> u64 {
    factor_u64(level)
        .into_iter()
        .fold(1u64, |acc, (q, e)| {
            acc * q.pow(3 * (e - 1)) * (q * q * q - q)
        })
}

pub type Predicate = Arc<dyn Fn(&MatModN) -> bool + Send + Sync>;

#[derive(Clone)]
pub enum SubgroupKind {
    Gamma0,
    Gamma1,
    /// The whole modular group.
    GammaFull,
    /// `c = 0` and `a^12 = 1 (mod p)`.
    GammaTilde,
    Custom { name: String, predicate: Predicate },
}

impl SubgroupKind {
    pub fn name(&self) -> String {
        match self {
            SubgroupKind::Gamma0 => "gamma0".into(),
            SubgroupKind::Gamma1 => "gamma1".into(),
            SubgroupKind::GammaFull => "gamma-full".into(),
            SubgroupKind::GammaTilde => "gamma-tilde".into(),
            SubgroupKind::Custom { name, .. } => format!("custom:{name}"),
        }
    }
}

impl fmt::Debug for SubgroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

#[derive(Clone, Debug)]
pub struct CongruenceSubgroup {
    level: u64,
    kind: SubgroupKind,
    contains_minus_id: bool,
}

/// Builds one of the standard subgroups at level `n`.
pub fn make_subgroup(kind: SubgroupKind, n: u64) -> Result<CongruenceSubgroup, ModGroupError> {
    if n == 0 || n >= 1 << 31 {
        return Err(ModGroupError::InvalidLevel(format!("{n} is out of range")));
    }
    if matches!(kind, SubgroupKind::GammaTilde) && !is_prime_u64(n) {
        return Err(ModGroupError::InvalidLevel(format!(
            "gamma-tilde needs a prime level, got {n}"
        )));
    }
    let custom = matches!(kind, SubgroupKind::Custom { .. });
    if custom && sl2_order(n) > CUSTOM_ENUM_LIMIT {
        return Err(ModGroupError::InvalidLevel(format!(
            "custom predicates are enumerated only for |SL2(Z/N)| <= {CUSTOM_ENUM_LIMIT}"
        )));
    }
    let mut g = CongruenceSubgroup {
        level: n,
        kind,
        contains_minus_id: false,
    };
    g.contains_minus_id = g.contains(&MatModN::minus_identity(n));
    if custom {
        g.check_closure(CLOSURE_SAMPLES, CLOSURE_SEED)?;
    }
    Ok(g)
}

/// Subgroup cut out by an arbitrary predicate; rejected unless it contains
/// the identity and passes a sampled closure test.
pub fn custom_subgroup<F>(name: &str, n: u64, predicate: F) -> Result<CongruenceSubgroup, ModGroupError>
where
    F: Fn(&MatModN) -> bool + Send + Sync + 'static,
{
    make_subgroup(
        SubgroupKind::Custom {
            name: name.to_string(),
            predicate: Arc::new(predicate),
        },
        n,
    )
}

impl CongruenceSubgroup {
    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn kind(&self) -> &SubgroupKind {
        &self.kind
    }

    pub fn contains_minus_id(&self) -> bool {
        self.contains_minus_id
    }

    pub fn name(&self) -> String {
        format!("{}({})", self.kind.name(), self.level)
    }

    pub fn contains(&self, m: &MatModN) -> bool {
        debug_assert_eq!(m.level, self.level);
        let n = self.level;
        match &self.kind {
            SubgroupKind::Gamma0 => m.c == 0,
            SubgroupKind::Gamma1 => m.c == 0 && m.a == 1 % n && m.d == 1 % n,
            SubgroupKind::GammaFull => true,
            SubgroupKind::GammaTilde => m.c == 0 && pow_mod(m.a, 12, n) == 1 % n,
            SubgroupKind::Custom { predicate, .. } => predicate(m),
        }
    }

    /// Number of elements of the image in `SL2(Z/N)`, when cheap to know.
    fn order_hint(&self) -> Option<u64> {
        let n = self.level;
        match &self.kind {
            SubgroupKind::Gamma0 => Some(n * units_mod(n).len() as u64),
            SubgroupKind::Gamma1 => Some(n),
            SubgroupKind::GammaFull => Some(sl2_order(n)),
            SubgroupKind::GammaTilde => Some(n * gcd_u64(12, n - 1)),
            SubgroupKind::Custom { .. } => None,
        }
    }

    /// All elements of the image in `SL2(Z/N)`.
    pub fn elements(&self) -> Vec<MatModN> {
        let n = self.level;
        let upper = |diag: Vec<u64>| -> Vec<MatModN> {
            let mut out = Vec::with_capacity(diag.len() * n as usize);
            for a in diag {
                let d = inv_mod(a, n).unwrap_or(0);
                for b in 0..n {
                    out.push(MatModN::raw(a, b, 0, d, n));
                }
            }
            out
        };
        match &self.kind {
            SubgroupKind::Gamma0 => upper(units_mod(n)),
            SubgroupKind::Gamma1 => upper(vec![1 % n]),
            SubgroupKind::GammaTilde => upper(
                units_mod(n)
                    .into_iter()
                    .filter(|&a| pow_mod(a, 12, n) == 1)
                    .collect(),
            ),
            SubgroupKind::GammaFull => sl2_elements(n),
            SubgroupKind::Custom { .. } => sl2_elements(n)
                .into_iter()
                .filter(|m| self.contains(m))
                .collect(),
        }
    }

    /// Sampled closure test: identity, products and inverses of random
    /// members stay in the subgroup.
    pub fn check_closure(&self, samples: usize, seed: u64) -> Result<(), ModGroupError> {
        let n = self.level;
        let fail = |witness: String| ModGroupError::NotClosed {
            name: self.name(),
            witness,
        };
        if !self.contains(&MatModN::identity(n)) {
            return Err(fail("identity is not a member".into()));
        }
        let members = self.elements();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            let g = members[rng.gen_range(0..members.len())];
            let h = members[rng.gen_range(0..members.len())];
            if !self.contains(&g.inverse()) {
                return Err(fail(format!("inverse of {g:?}")));
            }
            let gh = g.mul(&h);
            if !self.contains(&gh) {
                return Err(fail(format!("{g:?} * {h:?}")));
            }
        }
        Ok(())
    }
}

fn units_mod(n: u64) -> Vec<u64> {
    (0..n).filter(|&a| gcd_u64(a, n) == 1).collect()
}

enum CosetIndex {
    /// Canonical key (minimal `h g` over the subgroup) to coset id.
    Canonical {
        members: Vec<MatModN>,
        ids: HashMap<[u64; 4], usize>,
    },
    /// Match against stored representatives with `g r^-1 in G`.
    Scan,
}

/// Right cosets `G \ SL2(Z/N)` with the permutation action of `S` and `T`.
pub struct CosetTable {
    subgroup: CongruenceSubgroup,
    reps: Vec<MatModN>,
    s_perm: Vec<usize>,
    t_perm: Vec<usize>,
    index: CosetIndex,
}

impl CosetTable {
    pub fn subgroup(&self) -> &CongruenceSubgroup {
        &self.subgroup
    }

    pub fn index(&self) -> usize {
        self.reps.len()
    }

    pub fn representatives(&self) -> &[MatModN] {
        &self.reps
    }

    /// Coset `G g S` as a function of the coset of `g`.
    pub fn s_action(&self) -> &[usize] {
        &self.s_perm
    }

    pub fn t_action(&self) -> &[usize] {
        &self.t_perm
    }

    /// Id of the coset containing `g`.
    pub fn coset_of(&self, g: &MatModN) -> usize {
        self.lookup(g).expect("every element lies in an enumerated coset")
    }

    fn lookup(&self, g: &MatModN) -> Option<usize> {
        match &self.index {
            CosetIndex::Canonical { members, ids } => ids.get(&canonical_key(members, g)).copied(),
            CosetIndex::Scan => {
                let same_coset = |r: &MatModN| self.subgroup.contains(&g.mul(&r.inverse()));
                self.reps.iter().position(same_coset)
            }
        }
    }
}

fn canonical_key(members: &[MatModN], g: &MatModN) -> [u64; 4] {
    members
        .iter()
        .map(|h| h.mul(g).key())
        .min()
        .expect("a subgroup is nonempty")
}

pub fn coset_enumeration(g: &CongruenceSubgroup) -> Result<CosetTable, ModGroupError> {
    coset_enumeration_capped(g, DEFAULT_INDEX_CAP)
}

pub fn coset_enumeration_capped(
    g: &CongruenceSubgroup,
    cap: usize,
) -> Result<CosetTable, ModGroupError> {
    let n = g.level;
    let order = g.order_hint();
    let canonical = order.is_none_or(|o| o <= CANONICAL_LIMIT);
    let mut table = CosetTable {
        subgroup: g.clone(),
        reps: Vec::new(),
        s_perm: Vec::new(),
        t_perm: Vec::new(),
        index: if canonical {
            CosetIndex::Canonical {
                members: g.elements(),
                ids: HashMap::new(),
            }
        } else {
            CosetIndex::Scan
        },
    };
    let gens = [MatModN::s(n), MatModN::t(n)];
    let mut queue = VecDeque::new();
    insert_coset(&mut table, MatModN::identity(n));
    queue.push_back(0usize);
    while let Some(id) = queue.pop_front() {
        for (slot, gen) in gens.iter().enumerate() {
            let h = table.reps[id].mul(gen);
            let target = match table.lookup(&h) {
                Some(t) => t,
                None => {
                    if table.reps.len() >= cap {
                        return Err(ModGroupError::IndexCapExceeded { cap });
                    }
                    let t = insert_coset(&mut table, h);
                    queue.push_back(t);
                    t
                }
            };
            if slot == 0 {
                table.s_perm[id] = target;
            } else {
                table.t_perm[id] = target;
            }
        }
    }
    Ok(table)
}

fn insert_coset(table: &mut CosetTable, rep: MatModN) -> usize {
    let id = table.reps.len();
    if let CosetIndex::Canonical { members, ids } = &mut table.index {
        ids.insert(canonical_key(members, &rep), id);
    }
    table.reps.push(rep);
    table.s_perm.push(usize::MAX);
    table.t_perm.push(usize::MAX);
    id
}

/// `[outer : inner]`, after checking on samples that `inner` lies in `outer`.
pub fn covering_degree(
    inner: &CongruenceSubgroup,
    outer: &CongruenceSubgroup,
) -> Result<usize, ModGroupError> {
    if inner.level != outer.level {
        return Err(ModGroupError::LevelMismatch(inner.level, outer.level));
    }
    let members = inner.elements();
    let mut rng = ChaCha8Rng::seed_from_u64(CLOSURE_SEED);
    let picks: Vec<MatModN> = if members.len() <= CLOSURE_SAMPLES {
        members
    } else {
        (0..CLOSURE_SAMPLES)
            .map(|_| members[rng.gen_range(0..members.len())])
            .collect()
    };
    if let Some(w) = picks.iter().find(|m| !outer.contains(m)) {
        return Err(ModGroupError::NotASubgroup {
            inner: inner.name(),
            outer: outer.name(),
            witness: format!("{w:?}"),
        });
    }
    let ii = coset_enumeration(inner)?.index();
    let io = coset_enumeration(outer)?.index();
    if ii % io != 0 {
        return Err(ModGroupError::NonIntegralDegree {
            inner_index: ii,
            outer_index: io,
        });
    }
    Ok(ii / io)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cusp {
    /// Coset id of the first representative met in the orbit.
    pub rep: usize,
    pub width: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CuspData {
    pub cusps: Vec<Cusp>,
    pub v_infinity: usize,
}

impl CuspData {
    pub fn widths(&self) -> Vec<usize> {
        self.cusps.iter().map(|c| c.width).collect()
    }

    pub fn width_sum(&self) -> usize {
        self.cusps.iter().map(|c| c.width).sum()
    }
}

/// Orbits of `T` on the coset space, from an existing table.
pub fn cusps_of_table(table: &CosetTable) -> Result<CuspData, ModGroupError> {
    if !table.subgroup.contains_minus_id {
        return Err(ModGroupError::MinusIdentityRequired);
    }
    let mut seen = vec![false; table.index()];
    let mut cusps = Vec::new();
    for start in 0..table.index() {
        if seen[start] {
            continue;
        }
        let mut width = 0;
        let mut k = start;
        while !seen[k] {
            seen[k] = true;
            width += 1;
            k = table.t_perm[k];
        }
        cusps.push(Cusp { rep: start, width });
    }
    Ok(CuspData {
        v_infinity: cusps.len(),
        cusps,
    })
}

pub fn cusps(g: &CongruenceSubgroup) -> Result<CuspData, ModGroupError> {
    if !g.contains_minus_id {
        return Err(ModGroupError::MinusIdentityRequired);
    }
    cusps_of_table(&coset_enumeration(g)?)
}

pub fn num_cusps(g: &CongruenceSubgroup) -> Result<usize, ModGroupError> {
    Ok(cusps(g)?.v_infinity)
}

/// Ramification of `X_tilde -> X0(p)` at the cusps.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum EtaleOutcome {
    Pass,
    Fail {
        /// Coset id of a cusp of the cover with ramification index > 1.
        witness_rep: usize,
        ramification: usize,
    },
}

impl EtaleOutcome {
    pub fn passed(&self) -> bool {
        matches!(self, EtaleOutcome::Pass)
    }
}

/// Compares each cusp width on the `GammaTilde(p)` side with the width of
/// its image cusp on `X0(p)`.
pub fn etale_check(p: u64) -> Result<EtaleOutcome, ModGroupError> {
    let tilde = make_subgroup(SubgroupKind::GammaTilde, p)?;
    let gamma0 = make_subgroup(SubgroupKind::Gamma0, p)?;
    let top = coset_enumeration(&tilde)?;
    let bottom = coset_enumeration(&gamma0)?;
    let top_cusps = cusps_of_table(&top)?;
    let bottom_cusps = cusps_of_table(&bottom)?;
    let mut width_of_coset = vec![0usize; bottom.index()];
    for c in &bottom_cusps.cusps {
        let mut k = c.rep;
        loop {
            width_of_coset[k] = c.width;
            k = bottom.t_perm[k];
            if k == c.rep {
                break;
            }
        }
    }
    for c in &top_cusps.cusps {
        let image = bottom.coset_of(&top.reps[c.rep]);
        let below = width_of_coset[image];
        if c.width != below {
            return Ok(EtaleOutcome::Fail {
                witness_rep: c.rep,
                ramification: c.width / below,
            });
        }
    }
    Ok(EtaleOutcome::Pass)
}

/// JSON report for one subgroup.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CuspReport {
    pub level: u64,
    pub kind: String,
    pub index: usize,
    pub contains_minus_id: bool,
    pub cusps: Vec<CuspEntry>,
    pub v_infinity: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CuspEntry {
    pub rep: [[u64; 2]; 2],
    pub width: usize,
}

pub fn cusp_report(g: &CongruenceSubgroup) -> Result<CuspReport, ModGroupError> {
    let table = coset_enumeration(g)?;
    let data = cusps_of_table(&table)?;
    Ok(CuspReport {
        level: g.level,
        kind: g.kind.name(),
        index: table.index(),
        contains_minus_id: g.contains_minus_id,
        cusps: data
            .cusps
            .iter()
            .map(|c| {
                let m = table.reps[c.rep];
                CuspEntry {
                    rep: [[m.a, m.b], [m.c, m.d]],
                    width: c.width,
                }
            })
            .collect(),
        v_infinity: data.v_infinity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sub(kind: SubgroupKind, n: u64) -> CongruenceSubgroup {
        make_subgroup(kind, n).unwrap()
    }

    #[test]
    fn membership_examples() {
        let t11 = sub(SubgroupKind::GammaTilde, 11);
        // 2^12 = 4 mod 11
        let m = MatModN::new(2, 0, 0, 6, 11).unwrap();
        assert!(!t11.contains(&m));
        let g0 = sub(SubgroupKind::Gamma0, 11);
        assert!(g0.contains(&MatModN::new(1, 0, 11, 1, 11).unwrap()));
        for p in [11, 17, 19, 23, 97] {
            assert!(sub(SubgroupKind::GammaTilde, p).contains_minus_id());
        }
        assert!(!sub(SubgroupKind::Gamma1, 11).contains_minus_id());
        assert!(make_subgroup(SubgroupKind::GammaTilde, 12).is_err());
    }

    #[test]
    fn sl2_enumeration_has_the_right_size() {
        for n in 1..=30u64 {
            let all = sl2_elements(n);
            assert_eq!(all.len() as u64, sl2_order(n), "n = {n}");
            assert!(all.iter().all(MatModN::is_special));
        }
        let mut all = sl2_elements(12);
        all.sort();
        all.dedup();
        assert_eq!(all.len() as u64, sl2_order(12));
    }

    #[test]
    fn indices() {
        assert_eq!(coset_enumeration(&sub(SubgroupKind::Gamma0, 11)).unwrap().index(), 12);
        assert_eq!(
            coset_enumeration(&sub(SubgroupKind::GammaTilde, 11)).unwrap().index(),
            60
        );
        for n in [1, 7, 12, 150] {
            assert_eq!(
                coset_enumeration(&sub(SubgroupKind::GammaFull, n)).unwrap().index(),
                1
            );
        }
        // psi(12) = 12 * (3/2) * (4/3) = 24
        assert_eq!(coset_enumeration(&sub(SubgroupKind::Gamma0, 12)).unwrap().index(), 24);
    }

    #[test]
    fn canonical_and_scan_lookups_agree() {
        let g = sub(SubgroupKind::Gamma0, 10);
        let canonical = coset_enumeration(&g).unwrap();
        let mut scan = coset_enumeration(&g).unwrap();
        scan.index = CosetIndex::Scan;
        for m in sl2_elements(10) {
            assert_eq!(canonical.coset_of(&m), scan.coset_of(&m));
        }
    }

    #[test]
    fn index_cap() {
        let g = sub(SubgroupKind::GammaTilde, 11);
        assert_eq!(
            coset_enumeration_capped(&g, 59).err(),
            Some(ModGroupError::IndexCapExceeded { cap: 59 })
        );
    }

    #[test]
    fn degrees() {
        let t = sub(SubgroupKind::GammaTilde, 11);
        let g0 = sub(SubgroupKind::Gamma0, 11);
        assert_eq!(covering_degree(&t, &g0).unwrap(), 5);
        assert_eq!(covering_degree(&g0, &g0).unwrap(), 1);
        let t17 = sub(SubgroupKind::GammaTilde, 17);
        let g17 = sub(SubgroupKind::Gamma0, 17);
        assert_eq!(covering_degree(&t17, &g17).unwrap(), 4);
        assert!(matches!(
            covering_degree(&g0, &t),
            Err(ModGroupError::NotASubgroup { .. })
        ));
    }

    #[test]
    fn cusp_examples() {
        let full = cusps(&sub(SubgroupKind::GammaFull, 1)).unwrap();
        assert_eq!(full.widths(), vec![1]);
        let g0 = cusps(&sub(SubgroupKind::Gamma0, 11)).unwrap();
        let mut w = g0.widths();
        w.sort();
        assert_eq!(w, vec![1, 11]);
        let t = cusps(&sub(SubgroupKind::GammaTilde, 11)).unwrap();
        assert!(t.v_infinity >= 3);
        assert_eq!(t.width_sum(), 60);
        assert_eq!(
            cusps(&sub(SubgroupKind::Gamma1, 11)).err(),
            Some(ModGroupError::MinusIdentityRequired)
        );
    }

    #[test]
    fn etale_examples() {
        assert!(etale_check(11).unwrap().passed());
        assert!(etale_check(17).unwrap().passed());
        // at p = 13 every a is a 12th root of unity, so the cover is trivial
        assert!(etale_check(13).unwrap().passed());
        assert_eq!(num_cusps(&sub(SubgroupKind::GammaTilde, 13)).unwrap(), 2);
    }

    #[test]
    fn custom_predicates() {
        let sixth = custom_subgroup("a^6=1", 11, |m| m.c == 0 && pow_mod(m.a, 6, 11) == 1).unwrap();
        assert!(sixth.contains_minus_id());
        assert_eq!(coset_enumeration(&sixth).unwrap().index(), 60);
        // a in {a^6 = 1} or a = 2 is not a group: 2 * 2 = 4 has 4^6 = 4
        let broken = custom_subgroup("perturbed", 11, |m| {
            m.c == 0 && (pow_mod(m.a, 6, 11) == 1 || m.a == 2)
        });
        assert!(matches!(broken, Err(ModGroupError::NotClosed { .. })));
        let no_identity = custom_subgroup("empty", 5, |m| m.c == 1);
        assert!(matches!(no_identity, Err(ModGroupError::NotClosed { .. })));
    }

    #[test]
    fn report_shape() {
        let r = cusp_report(&sub(SubgroupKind::Gamma0, 11)).unwrap();
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        assert_eq!(v["level"], 11);
        assert_eq!(v["kind"], "gamma0");
        assert_eq!(v["index"], 12);
        assert_eq!(v["v_infinity"], 2);
        assert_eq!(v["cusps"][0]["rep"], serde_json::json!([[1, 0], [0, 1]]));
    }
}

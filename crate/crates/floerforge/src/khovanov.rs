//! Integer Khovanov tables and the rank arithmetic used to pass from them
//! to knot Floer bounds: universal-coefficient ranks, the reduced-rank
//! relation over GF(2), graded tensor products, the split-link spectral
//! sequence bound, Lee class bookkeeping, the reduced-rank bound on knot
//! Floer homology, and s-invariant / Euler-characteristic extraction from
//! thin tables. Tables are ingested as data, never computed from diagrams.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::constraints::{ConstraintReport, Verdict};
use crate::exactalg::FieldKind;

/// Integer Khovanov homology: free rank plus torsion orders (prime
/// powers) per (homological, quantum) bigrading.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct KhTable {
    pub entries: BTreeMap<(i64, i64), (usize, Vec<u64>)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KhError {
    OddReducedRank(usize),
    BadTorsion(u64),
    MixedQuantumParity,
}

impl fmt::Display for KhError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KhError::OddReducedRank(r) => {
                write!(f, "GF(2) rank {} is odd; the reduced-rank relation needs it even", r)
            }
            KhError::BadTorsion(t) => write!(f, "torsion order {} is not a prime power", t),
            KhError::MixedQuantumParity => write!(f, "quantum gradings mix parity"),
        }
    }
}

fn is_prime_power(mut n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in 2..=n {
        if p * p > n {
            return true; // n itself is prime
        }
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            return n == 1;
        }
    }
    true
}

impl KhTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_free(&mut self, i: i64, j: i64, rank: usize) {
        self.entries.entry((i, j)).or_insert((0, Vec::new())).0 += rank;
    }

    pub fn add_torsion(&mut self, i: i64, j: i64, order: u64) {
        self.entries.entry((i, j)).or_insert((0, Vec::new())).1.push(order);
    }

    pub fn validate(&self) -> Result<(), KhError> {
        let mut parity = None;
        for ((_, j), (_, torsion)) in self.entries.iter() {
            match parity {
                None => parity = Some(j.rem_euclid(2)),
                Some(p) if p == j.rem_euclid(2) => {}
                _ => return Err(KhError::MixedQuantumParity),
            }
            for t in torsion {
                if !is_prime_power(*t) {
                    return Err(KhError::BadTorsion(*t));
                }
            }
        }
        Ok(())
    }

    /// Field ranks per bigrading by universal coefficients: rationally the
    /// free rank; over GF(2) every Z/2^k summand contributes rank one in
    /// its own bigrading and one in the adjacent (cohomologically lower)
    /// homological grading.
    pub fn uct_ranks(&self, field: FieldKind) -> BTreeMap<(i64, i64), usize> {
        let mut out = BTreeMap::new();
        for ((i, j), (free, torsion)) in self.entries.iter() {
            if *free > 0 {
                *out.entry((*i, *j)).or_insert(0) += free;
            }
            if field == FieldKind::GF2 {
                let two_torsion = torsion.iter().filter(|t| *t % 2 == 0).count();
                if two_torsion > 0 {
                    *out.entry((*i, *j)).or_insert(0) += two_torsion;
                    *out.entry((*i - 1, *j)).or_insert(0) += two_torsion;
                }
            }
        }
        out
    }

    pub fn total_rank(&self, field: FieldKind) -> usize {
        self.uct_ranks(field).values().sum()
    }

    /// Total GF(2) rank halved (the reduced-rank relation); errors when
    /// the total is odd.
    pub fn reduced_rank_f2(&self) -> Result<usize, KhError> {
        let total = self.total_rank(FieldKind::GF2);
        if total % 2 != 0 {
            return Err(KhError::OddReducedRank(total));
        }
        Ok(total / 2)
    }

    /// Rational ranks collapsed onto the i - j grading.
    pub fn ranks_by_i_minus_j(&self, field: FieldKind) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for ((i, j), r) in self.uct_ranks(field) {
            if r > 0 {
                *out.entry(i - j).or_insert(0) += r;
            }
        }
        out
    }

    /// Rational ranks per homological grading.
    pub fn ranks_by_i(&self, field: FieldKind) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for ((i, _), r) in self.uct_ranks(field) {
            if r > 0 {
                *out.entry(i).or_insert(0) += r;
            }
        }
        out
    }

    /// Canonical JSON rendering, entries sorted by (i, j).
    pub fn to_json(&self) -> String {
        let mut parts = Vec::new();
        for ((i, j), (free, torsion)) in self.entries.iter() {
            let tors = torsion
                .iter()
                .map(|t| t.to_string())
                .collect::<Vec<_>>()
                .join(",");
            parts.push(format!(
                "{{\"i\":{},\"j\":{},\"free\":{},\"torsion\":[{}]}}",
                i, j, free, tors
            ));
        }
        format!("{{\"entries\":[{}]}}", parts.join(","))
    }

    pub fn from_json(text: &str) -> Result<KhTable, String> {
        let v: serde_json::Value =
            serde_json::from_str(text).map_err(|e| format!("bad JSON: {}", e))?;
        let entries = v
            .get("entries")
            .and_then(|e| e.as_array())
            .ok_or("missing entries array")?;
        let mut t = KhTable::new();
        for e in entries {
            let i = e.get("i").and_then(|x| x.as_i64()).ok_or("missing i")?;
            let j = e.get("j").and_then(|x| x.as_i64()).ok_or("missing j")?;
            let free = e.get("free").and_then(|x| x.as_u64()).unwrap_or(0) as usize;
            if free > 0 {
                t.add_free(i, j, free);
            }
            if let Some(tors) = e.get("torsion").and_then(|x| x.as_array()) {
                for o in tors {
                    let o = o.as_u64().ok_or("bad torsion order")?;
                    t.add_torsion(i, j, o);
                }
            }
        }
        t.validate().map_err(|e| e.to_string())?;
        Ok(t)
    }
}

/// Graded convolution of i-j collapsed rank functions.
pub fn kh_tensor(a: &BTreeMap<i64, usize>, b: &BTreeMap<i64, usize>) -> BTreeMap<i64, usize> {
    let mut out = BTreeMap::new();
    for (ga, ra) in a {
        for (gb, rb) in b {
            *out.entry(ga + gb).or_insert(0) += ra * rb;
        }
    }
    out
}

/// Split-link spectral sequence bound: for every grading l the link rank
/// in i-j grading l dominates the split tensor rank in l + 2 lk.
pub fn batson_seed_check(
    link_by_l: &BTreeMap<i64, usize>,
    tensor_by_l: &BTreeMap<i64, usize>,
    lk: i64,
) -> ConstraintReport {
    let rule = "khovanov.batson-seed";
    let mut ls: BTreeSet<i64> = link_by_l.keys().copied().collect();
    ls.extend(tensor_by_l.keys().map(|l| l - 2 * lk));
    for l in ls {
        let have = link_by_l.get(&l).copied().unwrap_or(0);
        let need = tensor_by_l.get(&(l + 2 * lk)).copied().unwrap_or(0);
        if have < need {
            return ConstraintReport {
                rule: rule.to_string(),
                verdict: Verdict::Fail,
                witness: format!(
                    "rank {} in i-j grading {} below split tensor rank {} in grading {}",
                    have,
                    l,
                    need,
                    l + 2 * lk
                ),
            };
        }
    }
    ConstraintReport { rule: rule.to_string(), verdict: Verdict::Pass, witness: String::new() }
}

/// Lee class bookkeeping read off a table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeeData {
    /// homological gradings whose rational rank admits a surviving pair
    pub surviving: Vec<i64>,
    /// upper bound on the component count
    pub component_bound: usize,
    /// linking number readable when exactly two gradings survive
    pub lk: Option<i64>,
}

pub fn lee_data(t: &KhTable) -> LeeData {
    let by_i = t.ranks_by_i(FieldKind::Q);
    let surviving: Vec<i64> = by_i.iter().filter(|(_, r)| **r >= 2).map(|(i, _)| *i).collect();
    let lk = if surviving.len() == 2 {
        Some((surviving[1] - surviving[0]).abs() / 2 * (if surviving[1] >= surviving[0] { 1 } else { -1 }))
    } else {
        None
    };
    LeeData { component_bound: surviving.len().max(1), surviving, lk }
}

/// Lee constraint as a rule: a two-component table must carry its
/// surviving pairs exactly in homological gradings {0, 2 lk}.
pub fn lee_constraint(t: &KhTable, n: usize, lk: i64) -> ConstraintReport {
    let rule = "khovanov.lee";
    if n > 2 {
        return ConstraintReport {
            rule: rule.to_string(),
            verdict: Verdict::Inapplicable,
            witness: "stated for at most two components".to_string(),
        };
    }
    let data = lee_data(t);
    let expect: BTreeSet<i64> = if n == 2 {
        BTreeSet::from([0, 2 * lk])
    } else {
        BTreeSet::from([0])
    };
    let got: BTreeSet<i64> = data.surviving.iter().copied().collect();
    if got == expect {
        ConstraintReport {
            rule: rule.to_string(),
            verdict: Verdict::Pass,
            witness: format!(
                "surviving gradings {:?}",
                got.iter().collect::<Vec<_>>()
            ),
        }
    } else {
        ConstraintReport {
            rule: rule.to_string(),
            verdict: Verdict::Fail,
            witness: format!(
                "surviving gradings {:?} but {:?} expected",
                got.iter().collect::<Vec<_>>(),
                expect.iter().collect::<Vec<_>>()
            ),
        }
    }
}

/// Reduced-rank bound on knot Floer homology: 2^(n-1) times the reduced
/// Khovanov rank.
pub fn dowlin_bound(reduced_rank: usize, n: usize) -> usize {
    (1usize << (n.saturating_sub(1))) * reduced_rank
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThinData {
    pub thin: bool,
    pub delta_support: Vec<i64>,
    pub s: Option<i64>,
    pub chi_bound: Option<i64>,
}

/// Thinness over Q (free part in two adjacent j-2i gradings) and, for
/// thin tables supported in j-2i = 2n and 2n+2, the s-invariant n+1 and
/// the Euler characteristic bound 2-2n.
pub fn kh_thin_s_chi(t: &KhTable) -> ThinData {
    let mut deltas: BTreeSet<i64> = BTreeSet::new();
    for ((i, j), r) in t.uct_ranks(FieldKind::Q) {
        if r > 0 {
            deltas.insert(j - 2 * i);
        }
    }
    let support: Vec<i64> = deltas.iter().copied().collect();
    let thin = match support.as_slice() {
        [] | [_] => true,
        [a, b] => b - a == 2,
        _ => false,
    };
    if !thin || support.len() != 2 || support[1] % 2 != 0 {
        return ThinData { thin, delta_support: support, s: None, chi_bound: None };
    }
    let n = support[1] / 2;
    ThinData {
        thin,
        delta_support: support,
        s: Some(n + 1),
        chi_bound: Some(2 - 2 * n),
    }
}

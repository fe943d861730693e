//! The five-family classification of E2-collapsed complexes: realization
//! of the standard summands, decomposition following the structure of the
//! classification proof (boxes split off where the two second-order
//! compositions meet, then staircases extracted, then vertical/horizontal
//! pairs), and an independent census oracle that counts summands from
//! line-homology data instead. Both routes are checked against a complete
//! invariant pack before an answer is returned.
//!
//! Summand layouts (anchor conventions pinned by the worked torus-link
//! cases):
//!
//! * `B_d[i,j]` — box with top corner at (i,j) Maslov d, middles at
//!   (i-1,j), (i,j-1) Maslov d-1, bottom at (i-1,j-1) Maslov d-2. Over Q
//!   the top horizontal arrow carries -1 so that d^2 = 0.
//! * `V_d^l[i,j]` — (i,j) at Maslov d over (i,j-l) at d-1, one vertical
//!   arrow of length l. `H_d^l[i,j]` is the horizontal mirror.
//! * `Y_d^l[i,j]` — (2l+1)-generator unit-step zigzag: l+1 uppers
//!   u_k = (i-l/2+k, j+l/2-k) at Maslov d, l corners
//!   c_k = u_k - (1,0) = u_{k-1} - (0,1) at d-1, arrows into the corners.
//!   Total homology is one class at Maslov d.
//! * `X_d^l[i,j]` — the arrows-out mirror: l+1 sinks x_k at Maslov d in
//!   the same positions, l sources s_k = x_k + (0,1) at d+1. X^0 = Y^0 is
//!   a single generator; isolated generators are always reported as Y^0.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::complexes::{BifilteredComplex, BigradedModule, Grading};
use crate::exactalg::{FieldKind, FieldScalar, HalfInt, SparseMatrix};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub enum SummandKind {
    B,
    V,
    H,
    X,
    Y,
}

impl fmt::Display for SummandKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SummandKind::B => "B",
            SummandKind::V => "V",
            SummandKind::H => "H",
            SummandKind::X => "X",
            SummandKind::Y => "Y",
        };
        write!(f, "{}", s)
    }
}

/// One indecomposable summand: family, Maslov anchor d, staircase/arrow
/// parameter l (meaningless for B, stored as 0), and the [i,j] shift.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub struct SummandDescriptor {
    pub kind: SummandKind,
    pub d: HalfInt,
    pub l: u32,
    pub shift: (HalfInt, HalfInt),
}

impl SummandDescriptor {
    pub fn new(kind: SummandKind, d: HalfInt, l: u32, shift: (HalfInt, HalfInt)) -> Self {
        SummandDescriptor { kind, d, l, shift }
    }

    pub fn boxed(d: HalfInt, i: HalfInt, j: HalfInt) -> Self {
        Self::new(SummandKind::B, d, 0, (i, j))
    }

    pub fn rank(&self) -> usize {
        match self.kind {
            SummandKind::B => 4,
            SummandKind::V | SummandKind::H => 2,
            SummandKind::X | SummandKind::Y => 2 * self.l as usize + 1,
        }
    }

    /// Generator positions of the realized summand.
    pub fn generator_gradings(&self) -> Vec<Grading> {
        let unit = HalfInt::from_int(1);
        let (i, j) = self.shift;
        match self.kind {
            SummandKind::B => vec![
                Grading::new(i, j, self.d),
                Grading::new(i - unit, j, self.d - unit),
                Grading::new(i, j - unit, self.d - unit),
                Grading::new(i - unit, j - unit, self.d - unit - unit),
            ],
            SummandKind::V => {
                let len = HalfInt::from_int(self.l as i64);
                vec![
                    Grading::new(i, j, self.d),
                    Grading::new(i, j - len, self.d - unit),
                ]
            }
            SummandKind::H => {
                let len = HalfInt::from_int(self.l as i64);
                vec![
                    Grading::new(i, j, self.d),
                    Grading::new(i - len, j, self.d - unit),
                ]
            }
            SummandKind::Y => {
                let l = self.l as i64;
                let mut out = Vec::new();
                for k in 0..=l {
                    out.push(Grading::new(
                        i + HalfInt::from_doubled(2 * k - l),
                        j + HalfInt::from_doubled(l - 2 * k),
                        self.d,
                    ));
                }
                for k in 1..=l {
                    out.push(Grading::new(
                        i + HalfInt::from_doubled(2 * k - l - 2),
                        j + HalfInt::from_doubled(l - 2 * k),
                        self.d - unit,
                    ));
                }
                out
            }
            SummandKind::X => {
                let l = self.l as i64;
                let mut out = Vec::new();
                for k in 0..=l {
                    out.push(Grading::new(
                        i + HalfInt::from_doubled(2 * k - l),
                        j + HalfInt::from_doubled(l - 2 * k),
                        self.d,
                    ));
                }
                for k in 1..=l {
                    out.push(Grading::new(
                        i + HalfInt::from_doubled(2 * k - l),
                        j + HalfInt::from_doubled(l - 2 * k + 2),
                        self.d + unit,
                    ));
                }
                out
            }
        }
    }
}

impl fmt::Display for SummandDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            SummandKind::B => write!(f, "B[{}][{},{}]", self.d, self.shift.0, self.shift.1),
            _ => write!(
                f,
                "{}[{}]^{}[{},{}]",
                self.kind, self.d, self.l, self.shift.0, self.shift.1
            ),
        }
    }
}

fn parse_halfint(s: &str) -> Result<HalfInt, String> {
    let s = s.trim();
    if let Some(num) = s.strip_suffix("/2") {
        let n: i64 = num.trim().parse().map_err(|_| format!("bad half-integer {:?}", s))?;
        Ok(HalfInt::from_doubled(n))
    } else {
        let n: i64 = s.parse().map_err(|_| format!("bad integer {:?}", s))?;
        Ok(HalfInt::from_int(n))
    }
}

impl std::str::FromStr for SummandDescriptor {
    type Err = String;

    /// Parses the canonical rendering: "B[-4][0,0]", "Y[-1]^1[3/2,3/2]".
    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        let kind = match s.chars().next() {
            Some('B') => SummandKind::B,
            Some('V') => SummandKind::V,
            Some('H') => SummandKind::H,
            Some('X') => SummandKind::X,
            Some('Y') => SummandKind::Y,
            _ => return Err(format!("unknown summand kind in {:?}", s)),
        };
        let rest = &s[1..];
        let close = rest.find(']').ok_or_else(|| format!("missing Maslov anchor in {:?}", s))?;
        if !rest.starts_with('[') {
            return Err(format!("expected '[' after the kind in {:?}", s));
        }
        let d = parse_halfint(&rest[1..close])?;
        let rest = &rest[close + 1..];
        let (l, rest) = if kind == SummandKind::B {
            (0u32, rest)
        } else {
            let rest = rest
                .strip_prefix('^')
                .ok_or_else(|| format!("expected '^l' in {:?}", s))?;
            let open = rest.find('[').ok_or_else(|| format!("missing shift in {:?}", s))?;
            let l: u32 = rest[..open].parse().map_err(|_| format!("bad length in {:?}", s))?;
            (l, &rest[open..])
        };
        let inner = rest
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| format!("missing shift brackets in {:?}", s))?;
        let (i, j) = inner
            .split_once(',')
            .ok_or_else(|| format!("shift needs two coordinates in {:?}", s))?;
        Ok(SummandDescriptor::new(kind, d, l, (parse_halfint(i)?, parse_halfint(j)?)))
    }
}

/// A multiset of summand descriptors in canonical (rendered-string) order.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Decomposition {
    pub summands: Vec<SummandDescriptor>,
}

impl Decomposition {
    pub fn new(mut summands: Vec<SummandDescriptor>) -> Self {
        summands.sort_by_key(|s| s.to_string());
        Decomposition { summands }
    }

    pub fn total_rank(&self) -> usize {
        self.summands.iter().map(|s| s.rank()).sum()
    }

    pub fn render(&self) -> String {
        self.summands
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl fmt::Display for Decomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecompError {
    InvalidComplex(String),
    NotE2Collapsed(String),
    /// Structure outside the five-family vocabulary; an honest refusal.
    NotInVocabulary(String),
    Mismatch(String),
}

impl fmt::Display for DecompError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecompError::InvalidComplex(s) => write!(f, "invalid complex: {}", s),
            DecompError::NotE2Collapsed(s) => write!(f, "not E2-collapsed: {}", s),
            DecompError::NotInVocabulary(s) => write!(f, "not in summand vocabulary: {}", s),
            DecompError::Mismatch(s) => write!(f, "decomposition mismatch: {}", s),
        }
    }
}

/// Builds the standard complex of one summand. Generator ids are
/// "<descriptor>.<part>" so witnesses stay traceable.
pub fn realize_summand(s: &SummandDescriptor, field: FieldKind) -> BifilteredComplex {
    let mut c = BifilteredComplex::new(field);
    let one = FieldScalar::one(field);
    let neg = one.neg();
    let name = s.to_string();
    let grs = s.generator_gradings();
    match s.kind {
        SummandKind::B => {
            for (gr, part) in grs.iter().zip(["t", "h", "v", "b"]) {
                c.add_generator(format!("{}.{}", name, part), *gr);
            }
            c.add_arrow(&format!("{}.t", name), &format!("{}.h", name), neg);
            c.add_arrow(&format!("{}.t", name), &format!("{}.v", name), one.clone());
            c.add_arrow(&format!("{}.h", name), &format!("{}.b", name), one.clone());
            c.add_arrow(&format!("{}.v", name), &format!("{}.b", name), one);
        }
        SummandKind::V | SummandKind::H => {
            assert!(s.l >= 1, "{} summand needs arrow length >= 1", s.kind);
            c.add_generator(format!("{}.t", name), grs[0]);
            c.add_generator(format!("{}.b", name), grs[1]);
            c.add_arrow(&format!("{}.t", name), &format!("{}.b", name), one);
        }
        SummandKind::Y => {
            let l = s.l as usize;
            for k in 0..=l {
                c.add_generator(format!("{}.u{}", name, k), grs[k]);
            }
            for k in 1..=l {
                c.add_generator(format!("{}.c{}", name, k), grs[l + k]);
                c.add_arrow(
                    &format!("{}.u{}", name, k - 1),
                    &format!("{}.c{}", name, k),
                    one.clone(),
                );
                c.add_arrow(
                    &format!("{}.u{}", name, k),
                    &format!("{}.c{}", name, k),
                    one.clone(),
                );
            }
        }
        SummandKind::X => {
            let l = s.l as usize;
            for k in 0..=l {
                c.add_generator(format!("{}.x{}", name, k), grs[k]);
            }
            for k in 1..=l {
                c.add_generator(format!("{}.s{}", name, k), grs[l + k]);
                c.add_arrow(
                    &format!("{}.s{}", name, k),
                    &format!("{}.x{}", name, k - 1),
                    one.clone(),
                );
                c.add_arrow(
                    &format!("{}.s{}", name, k),
                    &format!("{}.x{}", name, k),
                    neg.clone(),
                );
            }
        }
    }
    debug_assert!(c.is_valid(), "realized summand invalid: {:?}", c.validate());
    c
}

/// Direct sum of realized summands, numbered to keep ids unique.
pub fn realize_decomposition(d: &Decomposition, field: FieldKind) -> BifilteredComplex {
    let mut out = BifilteredComplex::new(field);
    for (k, s) in d.summands.iter().enumerate() {
        out = out.direct_sum(&realize_summand(s, field), &k.to_string());
    }
    out
}

/// The associated-graded module of a decomposition: every summand arrow
/// has positive Alexander drop, so E1 ranks are just generator counts.
pub fn module_of_decomposition(d: &Decomposition) -> BigradedModule {
    let mut m = BigradedModule::new();
    for s in &d.summands {
        for gr in s.generator_gradings() {
            m.add(gr, 1);
        }
    }
    m
}

// ---------------------------------------------------------------------
// Invariant pack
// ---------------------------------------------------------------------

/// Comparison data that pins the summand multiset: associated-graded
/// ranks, total homology, line homologies with filtration levels in both
/// directions, the bifiltration corner profile of total homology, and
/// the pairwise intersection ranks of corner image subspaces (these see
/// whether two filtration corners detect the same homology class — the
/// piece of data that separates a staircase-plus-dot from two shorter
/// staircases threading the same positions). Every field is an invariant
/// of the bifiltered homotopy type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantPack {
    pub e1: BTreeMap<Grading, usize>,
    pub total: BTreeMap<HalfInt, usize>,
    /// (a2 line, a1 level, maslov) -> line-homology class count
    pub v_lines: BTreeMap<(HalfInt, HalfInt, HalfInt), usize>,
    /// (a1 line, a2 level, maslov) -> class count
    pub h_lines: BTreeMap<(HalfInt, HalfInt, HalfInt), usize>,
    /// (x, y, maslov) -> rank of im(H(F_{<=x,<=y}) -> H(C))
    pub corners: BTreeMap<(HalfInt, HalfInt, HalfInt), usize>,
    /// ((x1,y1), (x2,y2), maslov) -> dim of the intersection of the two
    /// corner images inside H(C), for incomparable corner pairs
    pub corner_pairs: BTreeMap<((HalfInt, HalfInt), (HalfInt, HalfInt), HalfInt), usize>,
}

pub fn invariant_pack(c: &BifilteredComplex) -> InvariantPack {
    let corners = corner_profile(c);
    InvariantPack {
        e1: c.associated_graded_homology().ranks,
        total: c.total_homology(),
        v_lines: line_classes(c, 2),
        h_lines: line_classes(c, 1),
        corner_pairs: corner_pair_profile(c, &corners),
        corners,
    }
}

/// For each Maslov level and each incomparable pair of grid corners with
/// nonzero image, the dimension of the intersection of the two image
/// subspaces in total homology: dim(M_p) + dim(M_q) - dim(M_p + M_q).
fn corner_pair_profile(
    c: &BifilteredComplex,
    corners: &BTreeMap<(HalfInt, HalfInt, HalfInt), usize>,
) -> BTreeMap<((HalfInt, HalfInt), (HalfInt, HalfInt), HalfInt), usize> {
    let all: Vec<usize> = (0..c.len()).collect();
    let mut by_m: BTreeMap<HalfInt, Vec<(HalfInt, HalfInt, usize)>> = BTreeMap::new();
    for ((x, y, m), r) in corners.iter() {
        by_m.entry(*m).or_default().push((*x, *y, *r));
    }
    let mut out = BTreeMap::new();
    for (m, pts) in by_m {
        for i in 0..pts.len() {
            for j in (i + 1)..pts.len() {
                let (x1, y1, d1) = pts[i];
                let (x2, y2, d2) = pts[j];
                let comparable = (x1 <= x2 && y1 <= y2) || (x2 <= x1 && y2 <= y1);
                if comparable {
                    continue;
                }
                let sub = |x: HalfInt, y: HalfInt| -> Vec<usize> {
                    all.iter()
                        .copied()
                        .filter(|k| {
                            let g = c.generators()[*k].gr;
                            g.a1 <= x && g.a2 <= y
                        })
                        .collect()
                };
                let joint = image_pair_rank(c, &all, &sub(x1, y1), &sub(x2, y2), m);
                let meet = d1 + d2 - joint;
                if meet > 0 {
                    out.insert(((x1, y1), (x2, y2), m), meet);
                }
            }
        }
    }
    out
}

/// dim(im(H(sub1) -> H) + im(H(sub2) -> H)) at one Maslov level.
fn image_pair_rank(
    c: &BifilteredComplex,
    ambient: &[usize],
    sub1: &[usize],
    sub2: &[usize],
    m: HalfInt,
) -> usize {
    let unit = HalfInt::from_int(1);
    let amb_m: Vec<usize> = ambient
        .iter()
        .copied()
        .filter(|i| c.generators()[*i].gr.maslov == m)
        .collect();
    let amb_above: Vec<usize> = ambient
        .iter()
        .copied()
        .filter(|i| c.generators()[*i].gr.maslov == m + unit)
        .collect();
    let col_of: BTreeMap<usize, usize> = amb_m.iter().enumerate().map(|(k, i)| (*i, k)).collect();
    let cycles_of = |sub: &[usize]| -> Vec<SparseVecLocal> {
        let sub_set: BTreeSet<usize> = sub.iter().copied().collect();
        let sub_m: Vec<usize> = sub
            .iter()
            .copied()
            .filter(|i| c.generators()[*i].gr.maslov == m)
            .collect();
        let sub_below: Vec<usize> = sub
            .iter()
            .copied()
            .filter(|i| c.generators()[*i].gr.maslov == m - unit)
            .collect();
        let mut d_sub = SparseMatrix::new(c.field, sub_below.len().max(1), sub_m.len());
        for (col, s) in sub_m.iter().enumerate() {
            for (row, t) in sub_below.iter().enumerate() {
                let v = c.coeff(*s, *t);
                if !v.is_zero() && sub_set.contains(t) {
                    d_sub.set(row, col, v);
                }
            }
        }
        d_sub
            .rank_and_kernel()
            .1
            .into_iter()
            .map(|v| {
                v.into_iter()
                    .map(|(col, coeff)| (col_of[&sub_m[col]], coeff))
                    .collect::<Vec<_>>()
            })
            .collect()
    };
    let z1 = cycles_of(sub1);
    let z2 = cycles_of(sub2);
    let mut d_amb = SparseMatrix::new(c.field, amb_m.len().max(1), amb_above.len().max(1));
    for (col, s) in amb_above.iter().enumerate() {
        for (t, row) in col_of.iter() {
            let v = c.coeff(*s, *t);
            if !v.is_zero() {
                d_amb.set(*row, col, v);
            }
        }
    }
    let rank_b = d_amb.rank_and_kernel().0;
    let mut joint = SparseMatrix::new(
        c.field,
        amb_m.len().max(1),
        z1.len() + z2.len() + amb_above.len().max(1),
    );
    for (col, z) in z1.iter().chain(z2.iter()).enumerate() {
        for (row, coeff) in z {
            joint.set(*row, col, coeff.clone());
        }
    }
    for ((row, col), v) in d_amb.entries().map(|(k, v)| (*k, v.clone())) {
        joint.set(row, z1.len() + z2.len() + col, v);
    }
    joint.rank_and_kernel().0 - rank_b
}

type SparseVecLocal = Vec<(usize, FieldScalar)>;

/// Homology classes of each Alexander-line quotient complex, tagged with
/// the filtration level (in the other direction) at which each class
/// first appears.
fn line_classes(
    c: &BifilteredComplex,
    line_axis: u8,
) -> BTreeMap<(HalfInt, HalfInt, HalfInt), usize> {
    let mut out = BTreeMap::new();
    let lines: BTreeSet<HalfInt> = c
        .generators()
        .iter()
        .map(|g| if line_axis == 2 { g.gr.a2 } else { g.gr.a1 })
        .collect();
    for line in lines {
        let gens: Vec<usize> = (0..c.len())
            .filter(|i| {
                let g = c.generators()[*i].gr;
                (if line_axis == 2 { g.a2 } else { g.a1 }) == line
            })
            .collect();
        let level_of = |i: usize| {
            let g = c.generators()[i].gr;
            if line_axis == 2 {
                g.a1
            } else {
                g.a2
            }
        };
        let levels: BTreeSet<HalfInt> = gens.iter().map(|i| level_of(*i)).collect();
        let mut prev: BTreeMap<HalfInt, usize> = BTreeMap::new();
        for cut in levels {
            let sub: Vec<usize> = gens.iter().copied().filter(|i| level_of(*i) <= cut).collect();
            let ranks = image_in_homology(c, &gens, &sub);
            for (m, r) in ranks.iter() {
                let before = prev.get(m).copied().unwrap_or(0);
                if *r > before {
                    *out.entry((line, cut, *m)).or_insert(0) += r - before;
                }
            }
            prev = ranks;
        }
    }
    out
}

/// Rank of im(H(F_{<=(x,y)}) -> H(C)) per Maslov level, over the full
/// support grid of the complex (zero entries omitted).
fn corner_profile(c: &BifilteredComplex) -> BTreeMap<(HalfInt, HalfInt, HalfInt), usize> {
    let all: Vec<usize> = (0..c.len()).collect();
    let xs: BTreeSet<HalfInt> = c.generators().iter().map(|g| g.gr.a1).collect();
    let ys: BTreeSet<HalfInt> = c.generators().iter().map(|g| g.gr.a2).collect();
    let mut out = BTreeMap::new();
    for x in xs.iter() {
        for y in ys.iter() {
            let sub: Vec<usize> = all
                .iter()
                .copied()
                .filter(|i| {
                    let g = c.generators()[*i].gr;
                    g.a1 <= *x && g.a2 <= *y
                })
                .collect();
            for (m, r) in image_in_homology(c, &all, &sub) {
                if r > 0 {
                    out.insert((*x, *y, m), r);
                }
            }
        }
    }
    out
}

/// Rank of the map H(sub) -> H(ambient) per Maslov grading, where both
/// complexes are spans of generator index sets of `c` (arrows restricted
/// to endpoints inside the respective set) and `sub` is closed under the
/// restricted differential of `ambient`.
fn image_in_homology(
    c: &BifilteredComplex,
    ambient: &[usize],
    sub: &[usize],
) -> BTreeMap<HalfInt, usize> {
    let amb_set: BTreeSet<usize> = ambient.iter().copied().collect();
    let sub_set: BTreeSet<usize> = sub.iter().copied().collect();
    let unit = HalfInt::from_int(1);
    let mut out = BTreeMap::new();
    let levels: BTreeSet<HalfInt> =
        sub.iter().map(|i| c.generators()[*i].gr.maslov).collect();
    for m in levels {
        let sub_m: Vec<usize> = sub
            .iter()
            .copied()
            .filter(|i| c.generators()[*i].gr.maslov == m)
            .collect();
        let sub_below: Vec<usize> = sub
            .iter()
            .copied()
            .filter(|i| c.generators()[*i].gr.maslov == m - unit)
            .collect();
        let amb_m: Vec<usize> = ambient
            .iter()
            .copied()
            .filter(|i| c.generators()[*i].gr.maslov == m)
            .collect();
        let amb_above: Vec<usize> = ambient
            .iter()
            .copied()
            .filter(|i| c.generators()[*i].gr.maslov == m + unit)
            .collect();
        let arrow = |s: usize, t: usize| c.coeff(s, t);
        // cycles of sub at level m
        let mut d_sub = SparseMatrix::new(c.field, sub_below.len().max(1), sub_m.len());
        for (col, s) in sub_m.iter().enumerate() {
            for (row, t) in sub_below.iter().enumerate() {
                let v = arrow(*s, *t);
                if !v.is_zero() && sub_set.contains(t) {
                    d_sub.set(row, col, v);
                }
            }
        }
        let (_, kernel) = d_sub.rank_and_kernel();
        if kernel.is_empty() {
            continue;
        }
        let col_of: BTreeMap<usize, usize> =
            amb_m.iter().enumerate().map(|(k, i)| (*i, k)).collect();
        // boundaries of ambient at level m
        let mut d_amb = SparseMatrix::new(c.field, amb_m.len().max(1), amb_above.len().max(1));
        for (col, s) in amb_above.iter().enumerate() {
            for (t, row) in col_of.iter() {
                let v = arrow(*s, *t);
                if !v.is_zero() && amb_set.contains(t) {
                    d_amb.set(*row, col, v);
                }
            }
        }
        // rank of (cycles of sub) modulo (boundaries of ambient)
        let mut joint = SparseMatrix::new(
            c.field,
            amb_m.len().max(1),
            kernel.len() + amb_above.len().max(1),
        );
        for (col, z) in kernel.iter().enumerate() {
            for (sub_col, coeff) in z {
                let amb_row = col_of[&sub_m[*sub_col]];
                joint.set(amb_row, col, coeff.clone());
            }
        }
        for ((row, col), v) in d_amb.entries().map(|(k, v)| (*k, v.clone())) {
            joint.set(row, kernel.len() + col, v);
        }
        let rank_b = d_amb.rank_and_kernel().0;
        let img = joint.rank_and_kernel().0 - rank_b;
        if img > 0 {
            out.insert(m, img);
        }
    }
    out
}

/// Compares the complete invariant set of `c` against the realized direct
/// sum of `d`.
pub fn verify_decomposition(c: &BifilteredComplex, d: &Decomposition) -> Result<(), String> {
    let realized = realize_decomposition(d, c.field);
    let a = invariant_pack(&c.reduce_grading_preserving());
    let b = invariant_pack(&realized);
    for (name, same) in [
        ("associated-graded ranks", a.e1 == b.e1),
        ("total homology", a.total == b.total),
        ("vertical line homology", a.v_lines == b.v_lines),
        ("horizontal line homology", a.h_lines == b.h_lines),
        ("corner profile", a.corners == b.corners),
        ("corner pair profile", a.corner_pairs == b.corner_pairs),
    ] {
        if !same {
            return Err(format!(
                "{} differ between the complex and the realized decomposition",
                name
            ));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------
// Decomposition
// ---------------------------------------------------------------------

/// Keeps only arrows of total Alexander drop one. For any input reachable
/// from a unit-arrow complex by filtered basis changes this is a
/// grading-preserving conjugate of the straightened complex: strictly
/// filtration-lowering corrections only produce drops of two or more, so
/// stripping them recovers the unit structure up to a grading-preserving
/// isomorphism, and every rank extracted below is invariant under those.
fn unit_part(c: &BifilteredComplex) -> BifilteredComplex {
    let mut out = BifilteredComplex::new(c.field);
    for g in c.generators() {
        out.add_generator(g.id.clone(), g.gr);
    }
    for (s, t, coeff) in c.diff_entries() {
        let gs = c.generators()[s].gr;
        let gt = c.generators()[t].gr;
        if (gs.a1 - gt.a1) + (gs.a2 - gt.a2) == HalfInt::from_int(1) {
            out.set_coeff(s, t, coeff.clone());
        }
    }
    out
}

/// Decomposes a reduced E2-collapsed complex into the five families. The
/// box count at each position is the rank of the composite d_v . d_h out
/// of that position — precisely where the images of the two second-order
/// compositions meet; staircases are then extracted against the corner
/// profile of the total homology, and what remains must be vertical and
/// horizontal pairs. The answer is verified against the input before
/// being returned.
pub fn decompose_e2(c: &BifilteredComplex) -> Result<Decomposition, DecompError> {
    let violations = c.validate();
    if !violations.is_empty() {
        return Err(DecompError::InvalidComplex(violations[0].0.clone()));
    }
    let reduced = c.reduce_grading_preserving();
    let uc = unit_part(&reduced);
    let mut summands: Vec<SummandDescriptor> = Vec::new();

    // generator counts per position
    let mut e1: BTreeMap<Grading, i64> = BTreeMap::new();
    for g in uc.generators() {
        *e1.entry(g.gr).or_insert(0) += 1;
    }

    // box step: rank of the composite per source position
    let positions: BTreeSet<Grading> = uc.generators().iter().map(|g| g.gr).collect();
    let unit = HalfInt::from_int(1);
    let mut h_arrows: BTreeMap<Grading, i64> = BTreeMap::new();
    let mut v_arrows: BTreeMap<Grading, i64> = BTreeMap::new();
    for p in positions.iter() {
        let r_h = block_rank(&uc, *p, Grading::new(p.a1 - unit, p.a2, p.maslov - unit));
        let r_v = block_rank(&uc, *p, Grading::new(p.a1, p.a2 - unit, p.maslov - unit));
        if r_h > 0 {
            h_arrows.insert(*p, r_h as i64);
        }
        if r_v > 0 {
            v_arrows.insert(*p, r_v as i64);
        }
        let boxes = composite_rank(&uc, *p);
        for _ in 0..boxes {
            let b = SummandDescriptor::boxed(p.maslov, p.a1, p.a2);
            for gr in b.generator_gradings() {
                *e1.entry(gr).or_insert(0) -= 1;
            }
            // a box consumes one h-arrow and one v-arrow at p, plus one of
            // each out of its two middle corners
            *h_arrows.entry(*p).or_insert(0) -= 1;
            *v_arrows.entry(*p).or_insert(0) -= 1;
            *h_arrows
                .entry(Grading::new(p.a1, p.a2 - unit, p.maslov - unit))
                .or_insert(0) -= 1;
            *v_arrows
                .entry(Grading::new(p.a1 - unit, p.a2, p.maslov - unit))
                .or_insert(0) -= 1;
            summands.push(b);
        }
    }

    // staircase step: peel regions off the corner profile of the total
    // homology. A corner-consistent staircase assignment can still clash
    // with the arrow and generator budgets, so the search runs jointly
    // over all Maslov levels and backtracks through the full completion:
    // arrow accounting, V/H extraction, generator bookkeeping, and the
    // final invariant verification.
    let pack_corners = corner_profile(&uc);
    let total = uc.total_homology();
    let xs: BTreeSet<HalfInt> = uc.generators().iter().map(|g| g.gr.a1).collect();
    let ys: BTreeSet<HalfInt> = uc.generators().iter().map(|g| g.gr.a2).collect();
    let ms: Vec<HalfInt> = total.keys().copied().collect();
    let grid: Vec<(HalfInt, HalfInt)> = xs
        .iter()
        .flat_map(|x| ys.iter().map(move |y| (*x, *y)))
        .collect();
    let mut residuals: Vec<BTreeMap<(HalfInt, HalfInt), i64>> = ms
        .iter()
        .map(|m| {
            grid.iter()
                .map(|(x, y)| {
                    (
                        (*x, *y),
                        pack_corners.get(&(*x, *y, *m)).copied().unwrap_or(0) as i64,
                    )
                })
                .collect()
        })
        .collect();
    let finish = |stairs: &[SummandDescriptor],
                  e1_now: &BTreeMap<Grading, i64>|
     -> Option<Decomposition> {
        let mut h = h_arrows.clone();
        let mut v = v_arrows.clone();
        for s in stairs {
            let l = s.l as i64;
            let (i, j) = s.shift;
            match s.kind {
                SummandKind::Y => {
                    for k in 0..l {
                        let uk = Grading::new(
                            i + HalfInt::from_doubled(2 * k - l),
                            j + HalfInt::from_doubled(l - 2 * k),
                            s.d,
                        );
                        let uk1 = Grading::new(
                            i + HalfInt::from_doubled(2 * (k + 1) - l),
                            j + HalfInt::from_doubled(l - 2 * (k + 1)),
                            s.d,
                        );
                        *v.entry(uk).or_insert(0) -= 1;
                        *h.entry(uk1).or_insert(0) -= 1;
                    }
                }
                SummandKind::X => {
                    for k in 1..=l {
                        let sk = Grading::new(
                            i + HalfInt::from_doubled(2 * k - l),
                            j + HalfInt::from_doubled(l - 2 * k + 2),
                            s.d + unit,
                        );
                        *h.entry(sk).or_insert(0) -= 1;
                        *v.entry(sk).or_insert(0) -= 1;
                    }
                }
                _ => unreachable!(),
            }
        }
        if h.values().any(|k| *k < 0) || v.values().any(|k| *k < 0) {
            return None;
        }
        let mut pieces: Vec<SummandDescriptor> = summands.clone();
        pieces.extend_from_slice(stairs);
        let mut e1_rest = e1_now.clone();
        for (p, k) in v.iter() {
            for _ in 0..*k {
                let s = SummandDescriptor::new(SummandKind::V, p.maslov, 1, (p.a1, p.a2));
                for gr in s.generator_gradings() {
                    *e1_rest.entry(gr).or_insert(0) -= 1;
                }
                pieces.push(s);
            }
        }
        for (p, k) in h.iter() {
            for _ in 0..*k {
                let s = SummandDescriptor::new(SummandKind::H, p.maslov, 1, (p.a1, p.a2));
                for gr in s.generator_gradings() {
                    *e1_rest.entry(gr).or_insert(0) -= 1;
                }
                pieces.push(s);
            }
        }
        if e1_rest.values().any(|k| *k != 0) {
            return None;
        }
        let d = Decomposition::new(pieces);
        if verify_decomposition(&uc, &d).is_ok() {
            Some(d)
        } else {
            None
        }
    };
    let mut stairs: Vec<SummandDescriptor> = Vec::new();
    let result = stair_search(
        &grid,
        &ms,
        0,
        &mut residuals,
        &mut e1,
        &mut stairs,
        &finish,
    );
    let decomp = result.ok_or_else(|| {
        if !reduced.is_e2_collapsed() {
            DecompError::NotE2Collapsed(
                "no unit-arrow decomposition accounts for the invariants".to_string(),
            )
        } else {
            DecompError::NotInVocabulary(
                "no staircase assignment completes to a five-family decomposition".to_string(),
            )
        }
    })?;
    verify_decomposition(c, &decomp).map_err(DecompError::Mismatch)?;
    Ok(decomp)
}

/// Rank of the differential block between two exact positions.
fn block_rank(c: &BifilteredComplex, from: Grading, to: Grading) -> usize {
    let sources: Vec<usize> = (0..c.len()).filter(|i| c.generators()[*i].gr == from).collect();
    let targets: Vec<usize> = (0..c.len()).filter(|i| c.generators()[*i].gr == to).collect();
    if sources.is_empty() || targets.is_empty() {
        return 0;
    }
    let mut m = SparseMatrix::new(c.field, targets.len(), sources.len());
    for (col, s) in sources.iter().enumerate() {
        for (row, t) in targets.iter().enumerate() {
            let v = c.coeff(*s, *t);
            if !v.is_zero() {
                m.set(row, col, v);
            }
        }
    }
    m.rank_and_kernel().0
}

/// Rank of d_v . d_h out of position p — the number of box tops rooted
/// there. (By anticommutativity this equals the rank of d_h . d_v.)
fn composite_rank(c: &BifilteredComplex, p: Grading) -> usize {
    let unit = HalfInt::from_int(1);
    let mid = Grading::new(p.a1 - unit, p.a2, p.maslov - unit);
    let out = Grading::new(p.a1 - unit, p.a2 - unit, p.maslov - unit - unit);
    let sources: Vec<usize> = (0..c.len()).filter(|i| c.generators()[*i].gr == p).collect();
    let mids: Vec<usize> = (0..c.len()).filter(|i| c.generators()[*i].gr == mid).collect();
    let outs: Vec<usize> = (0..c.len()).filter(|i| c.generators()[*i].gr == out).collect();
    if sources.is_empty() || mids.is_empty() || outs.is_empty() {
        return 0;
    }
    let mut m = SparseMatrix::new(c.field, outs.len(), sources.len());
    for (col, s) in sources.iter().enumerate() {
        for (row, t) in outs.iter().enumerate() {
            let mut acc = FieldScalar::zero(c.field);
            for q in mids.iter() {
                acc = acc.add(&c.coeff(*s, *q).mul(&c.coeff(*q, *t)));
            }
            if !acc.is_zero() {
                m.set(row, col, acc);
            }
        }
    }
    m.rank_and_kernel().0
}

/// Deterministic joint search for the staircase multisets across all
/// Maslov levels. Each level's corner-profile residual is peeled at its
/// lexicographically least uncovered grid point, branching over Y then X
/// with ascending length; complete assignments are handed to `finish`,
/// and the first one it accepts wins.
#[allow(clippy::too_many_arguments)]
fn stair_search(
    grid: &[(HalfInt, HalfInt)],
    ms: &[HalfInt],
    level: usize,
    residuals: &mut Vec<BTreeMap<(HalfInt, HalfInt), i64>>,
    e1: &mut BTreeMap<Grading, i64>,
    acc: &mut Vec<SummandDescriptor>,
    finish: &dyn Fn(&[SummandDescriptor], &BTreeMap<Grading, i64>) -> Option<Decomposition>,
) -> Option<Decomposition> {
    if level == ms.len() {
        return finish(acc, e1);
    }
    let m = ms[level];
    if residuals[level].values().any(|v| *v < 0) {
        return None;
    }
    let first = residuals[level].iter().find(|(_, v)| **v > 0).map(|(k, _)| *k);
    let Some((x0, y0)) = first else {
        return stair_search(grid, ms, level + 1, residuals, e1, acc, finish);
    };
    let max_l = e1.values().filter(|v| **v > 0).sum::<i64>().max(0);
    // Y_m^l with corner quadrant rooted at (x0, y0): uppers run along the
    // antidiagonal from (x0 - l, y0) to (x0, y0 - l)
    for l in 0..=max_l {
        let desc = SummandDescriptor::new(
            SummandKind::Y,
            m,
            l as u32,
            (x0 - HalfInt::from_doubled(l), y0 - HalfInt::from_doubled(l)),
        );
        if let Some(d) =
            try_stair(grid, ms, level, residuals, e1, &desc, (x0, y0), acc, finish)
        {
            return Some(d);
        }
    }
    // X_m^l with first sink at (x0, y0)
    for l in 1..=max_l {
        let desc = SummandDescriptor::new(
            SummandKind::X,
            m,
            l as u32,
            (x0 + HalfInt::from_doubled(l), y0 - HalfInt::from_doubled(l)),
        );
        if let Some(d) =
            try_stair(grid, ms, level, residuals, e1, &desc, (x0, y0), acc, finish)
        {
            return Some(d);
        }
    }
    None
}

fn stair_region_hits(desc: &SummandDescriptor, x: HalfInt, y: HalfInt) -> bool {
    let l = desc.l as i64;
    let (i, j) = desc.shift;
    match desc.kind {
        SummandKind::Y => {
            x >= i + HalfInt::from_doubled(l) && y >= j + HalfInt::from_doubled(l)
        }
        SummandKind::X => (0..=l).any(|k| {
            x >= i + HalfInt::from_doubled(2 * k - l) && y >= j + HalfInt::from_doubled(l - 2 * k)
        }),
        _ => false,
    }
}

#[allow(clippy::too_many_arguments)]
fn try_stair(
    grid: &[(HalfInt, HalfInt)],
    ms: &[HalfInt],
    level: usize,
    residuals: &mut Vec<BTreeMap<(HalfInt, HalfInt), i64>>,
    e1: &mut BTreeMap<Grading, i64>,
    desc: &SummandDescriptor,
    _root: (HalfInt, HalfInt),
    acc: &mut Vec<SummandDescriptor>,
    finish: &dyn Fn(&[SummandDescriptor], &BTreeMap<Grading, i64>) -> Option<Decomposition>,
) -> Option<Decomposition> {
    // generator budget; on failure restore what was already taken
    let gens = desc.generator_gradings();
    for (k, g) in gens.iter().enumerate() {
        if e1.get(g).copied().unwrap_or(0) <= 0 {
            for taken in &gens[..k] {
                *e1.get_mut(taken).unwrap() += 1;
            }
            return None;
        }
        *e1.entry(*g).or_insert(0) -= 1;
    }
    let mut touched = Vec::new();
    let mut ok = true;
    for (x, y) in grid.iter() {
        if stair_region_hits(desc, *x, *y) {
            let e = residuals[level].get_mut(&(*x, *y)).unwrap();
            *e -= 1;
            touched.push((*x, *y));
            if *e < 0 {
                ok = false;
                break;
            }
        }
    }
    let mut found = None;
    if ok {
        acc.push(*desc);
        found = stair_search(grid, ms, level, residuals, e1, acc, finish);
        if found.is_none() {
            acc.pop();
        }
    }
    if found.is_none() {
        for (x, y) in touched {
            *residuals[level].get_mut(&(x, y)).unwrap() += 1;
        }
        for g in &gens {
            *e1.get_mut(g).unwrap() += 1;
        }
    }
    found
}

// ---------------------------------------------------------------------
// Census oracle
// ---------------------------------------------------------------------

/// Independent census: reads the summand multiset off the line-homology
/// data. Staircases are the total-homology classes, matched between their
/// vertical-line and horizontal-line end appearances; V pairs are the
/// leftover vertical-line classes chained top-over-bottom, H likewise;
/// boxes soak up the remaining generator count. Candidate end matchings
/// are tried in deterministic order and the first one that verifies wins.
pub fn summand_census_oracle(c: &BifilteredComplex) -> Result<Decomposition, DecompError> {
    let violations = c.validate();
    if !violations.is_empty() {
        return Err(DecompError::InvalidComplex(violations[0].0.clone()));
    }
    let reduced = c.reduce_grading_preserving();
    let pack = invariant_pack(&reduced);

    let mut v_entries: Vec<(HalfInt, HalfInt, HalfInt)> = Vec::new(); // (line a2, a1 level, m)
    for ((line, lvl, m), k) in pack.v_lines.iter() {
        for _ in 0..*k {
            v_entries.push((*line, *lvl, *m));
        }
    }
    let mut h_entries: Vec<(HalfInt, HalfInt, HalfInt)> = Vec::new(); // (line a1, a2 level, m)
    for ((line, lvl, m), k) in pack.h_lines.iter() {
        for _ in 0..*k {
            h_entries.push((*line, *lvl, *m));
        }
    }
    let stair_budget: Vec<HalfInt> = pack
        .total
        .iter()
        .flat_map(|(m, k)| std::iter::repeat(*m).take(*k))
        .collect();

    let mut v_used = vec![false; v_entries.len()];
    let mut h_used = vec![false; h_entries.len()];
    let mut stairs: Vec<SummandDescriptor> = Vec::new();
    let mut answer: Option<Decomposition> = None;
    census_stairs(
        &reduced,
        &pack,
        &stair_budget,
        0,
        &v_entries,
        &h_entries,
        &mut v_used,
        &mut h_used,
        &mut stairs,
        &mut answer,
    );
    match answer {
        Some(d) => {
            verify_decomposition(c, &d).map_err(DecompError::Mismatch)?;
            Ok(d)
        }
        None => Err(DecompError::NotInVocabulary(
            "census found no consistent summand assignment".to_string(),
        )),
    }
}

#[allow(clippy::too_many_arguments)]
fn census_stairs(
    reduced: &BifilteredComplex,
    pack: &InvariantPack,
    budget: &[HalfInt],
    idx: usize,
    v_entries: &[(HalfInt, HalfInt, HalfInt)],
    h_entries: &[(HalfInt, HalfInt, HalfInt)],
    v_used: &mut Vec<bool>,
    h_used: &mut Vec<bool>,
    stairs: &mut Vec<SummandDescriptor>,
    answer: &mut Option<Decomposition>,
) {
    if answer.is_some() {
        return;
    }
    if idx == budget.len() {
        if let Some(d) = census_finish(reduced, pack, v_entries, h_entries, v_used, h_used, stairs)
        {
            *answer = Some(d);
        }
        return;
    }
    let m = budget[idx];
    for vi in 0..v_entries.len() {
        if v_used[vi] || v_entries[vi].2 != m {
            continue;
        }
        let (v_line, v_lvl, _) = v_entries[vi];
        for hi in 0..h_entries.len() {
            if h_used[hi] || h_entries[hi].2 != m {
                continue;
            }
            let (h_line, h_lvl, _) = h_entries[hi];
            // the two ends sit on one antidiagonal
            if v_lvl + v_line != h_line + h_lvl {
                continue;
            }
            let spread = (h_line - v_lvl).doubled();
            if spread % 2 != 0 {
                continue;
            }
            let (kind, l) = if spread > 0 {
                (SummandKind::Y, spread / 2)
            } else if spread < 0 {
                (SummandKind::X, -spread / 2)
            } else {
                (SummandKind::Y, 0)
            };
            let i = HalfInt::from_doubled((v_lvl + h_line).doubled() / 2);
            let j = HalfInt::from_doubled((v_line + h_lvl).doubled() / 2);
            let desc = SummandDescriptor::new(kind, m, l as u32, (i, j));
            v_used[vi] = true;
            h_used[hi] = true;
            stairs.push(desc);
            census_stairs(
                reduced, pack, budget, idx + 1, v_entries, h_entries, v_used, h_used, stairs,
                answer,
            );
            stairs.pop();
            v_used[vi] = false;
            h_used[hi] = false;
            if answer.is_some() {
                return;
            }
        }
    }
}

fn census_finish(
    reduced: &BifilteredComplex,
    pack: &InvariantPack,
    v_entries: &[(HalfInt, HalfInt, HalfInt)],
    h_entries: &[(HalfInt, HalfInt, HalfInt)],
    v_used: &[bool],
    h_used: &[bool],
    stairs: &[SummandDescriptor],
) -> Option<Decomposition> {
    let mut pieces: Vec<SummandDescriptor> = stairs.to_vec();
    // leftover vertical-line classes chain into V pairs: a top at
    // (line j, level i, m) over a bottom at (line j-l, level i, m-1)
    let unit = HalfInt::from_int(1);
    let mut v_rest: Vec<(HalfInt, HalfInt, HalfInt)> = v_entries
        .iter()
        .enumerate()
        .filter(|(k, _)| !v_used[*k])
        .map(|(_, e)| *e)
        .collect();
    while !v_rest.is_empty() {
        // topmost first: maximal maslov, then maximal line
        let top = *v_rest
            .iter()
            .max_by_key(|(line, lvl, m)| (*m, *line, *lvl))
            .unwrap();
        remove_one(&mut v_rest, &top);
        let bot = v_rest
            .iter()
            .copied()
            .filter(|(line, lvl, m)| *lvl == top.1 && *m == top.2 - unit && *line < top.0)
            .max_by_key(|(line, _, _)| *line);
        let Some(bot) = bot else { return None };
        remove_one(&mut v_rest, &bot);
        let l = (top.0 - bot.0).as_int()?;
        pieces.push(SummandDescriptor::new(
            SummandKind::V,
            top.2,
            l as u32,
            (top.1, top.0),
        ));
    }
    let mut h_rest: Vec<(HalfInt, HalfInt, HalfInt)> = h_entries
        .iter()
        .enumerate()
        .filter(|(k, _)| !h_used[*k])
        .map(|(_, e)| *e)
        .collect();
    while !h_rest.is_empty() {
        let top = *h_rest
            .iter()
            .max_by_key(|(line, lvl, m)| (*m, *line, *lvl))
            .unwrap();
        remove_one(&mut h_rest, &top);
        let bot = h_rest
            .iter()
            .copied()
            .filter(|(line, lvl, m)| *lvl == top.1 && *m == top.2 - unit && *line < top.0)
            .max_by_key(|(line, _, _)| *line);
        let Some(bot) = bot else { return None };
        remove_one(&mut h_rest, &bot);
        let l = (top.0 - bot.0).as_int()?;
        pieces.push(SummandDescriptor::new(
            SummandKind::H,
            top.2,
            l as u32,
            (top.0, top.1),
        ));
    }
    // boxes soak up the remainder, greedily from the top: the
    // lexicographically greatest leftover position is always a box top
    let mut leftover: BTreeMap<Grading, i64> =
        pack.e1.iter().map(|(g, r)| (*g, *r as i64)).collect();
    for s in &pieces {
        for g in s.generator_gradings() {
            *leftover.entry(g).or_insert(0) -= 1;
        }
    }
    leftover.retain(|_, v| *v != 0);
    loop {
        if leftover.values().any(|v| *v < 0) {
            return None;
        }
        let Some((&top, _)) = leftover.iter().next_back() else { break };
        let b = SummandDescriptor::boxed(top.maslov, top.a1, top.a2);
        for g in b.generator_gradings() {
            *leftover.entry(g).or_insert(0) -= 1;
        }
        leftover.retain(|_, v| *v != 0);
        pieces.push(b);
    }
    let d = Decomposition::new(pieces);
    if verify_decomposition(reduced, &d).is_ok() {
        Some(d)
    } else {
        None
    }
}

fn remove_one<T: PartialEq>(xs: &mut Vec<T>, x: &T) {
    if let Some(p) = xs.iter().position(|y| y == x) {
        xs.remove(p);
    }
}

// ---------------------------------------------------------------------
// Pairing rules for two-component link complexes
// ---------------------------------------------------------------------

/// Checks the summand pairing a complex must satisfy to be the link Floer
/// complex of a two-component link: exactly one Maslov-0 and one
/// Maslov-(-1) staircase (total homology F_0 + F_-1), V summands in
/// (d, d-1) shifted pairs, H summands likewise.
pub fn check_pairing(d: &Decomposition) -> Result<(), String> {
    let unit = HalfInt::from_int(1);
    let stairs: Vec<&SummandDescriptor> = d
        .summands
        .iter()
        .filter(|s| matches!(s.kind, SummandKind::X | SummandKind::Y))
        .collect();
    if stairs.len() != 2 {
        return Err(format!(
            "expected exactly two staircase summands, found {}",
            stairs.len()
        ));
    }
    let ds: BTreeSet<i64> = stairs.iter().map(|s| s.d.doubled()).collect();
    if ds != BTreeSet::from([0, -2]) {
        return Err(format!(
            "staircase Maslov anchors must be 0 and -1, found {}",
            stairs
                .iter()
                .map(|s| s.d.to_string())
                .collect::<Vec<_>>()
                .join(",")
        ));
    }
    for (kind, step) in [
        (SummandKind::V, (HalfInt::ZERO, unit)),
        (SummandKind::H, (unit, HalfInt::ZERO)),
    ] {
        let mut pool: Vec<&SummandDescriptor> =
            d.summands.iter().filter(|s| s.kind == kind).collect();
        while let Some(top) = pool.pop() {
            let partner = pool.iter().position(|s| {
                s.l == top.l
                    && (s.d == top.d - unit
                        && s.shift == (top.shift.0 - step.0, top.shift.1 - step.1))
                    || (top.d == s.d - unit
                        && top.shift == (s.shift.0 - step.0, s.shift.1 - step.1))
            });
            match partner {
                Some(p) => {
                    pool.remove(p);
                }
                None => return Err(format!("unpaired {} summand {}", kind, top)),
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::scramble_basis;
    use crate::rng::Rng;

    fn hi(n: i64) -> HalfInt {
        HalfInt::from_int(n)
    }

    fn hd(n: i64) -> HalfInt {
        HalfInt::from_doubled(n)
    }

    #[test]
    fn realize_pinned_shapes() {
        // Y_0^0[2,2] is one generator at (2,2) Maslov 0
        let y00 = realize_summand(
            &SummandDescriptor::new(SummandKind::Y, hi(0), 0, (hi(2), hi(2))),
            FieldKind::GF2,
        );
        assert_eq!(y00.len(), 1);
        assert_eq!(y00.generators()[0].gr, Grading::new(hi(2), hi(2), hi(0)));

        // Y_{-1}^1[3/2,3/2]: (2,1) and (1,2) at Maslov -1, (1,1) at -2
        let y11 = realize_summand(
            &SummandDescriptor::new(SummandKind::Y, hi(-1), 1, (hd(3), hd(3))),
            FieldKind::GF2,
        );
        let grs: BTreeSet<Grading> = y11.generators().iter().map(|g| g.gr).collect();
        assert_eq!(
            grs,
            BTreeSet::from([
                Grading::new(hi(1), hi(2), hi(-1)),
                Grading::new(hi(2), hi(1), hi(-1)),
                Grading::new(hi(1), hi(1), hi(-2)),
            ])
        );
        let th = y11.total_homology();
        assert_eq!(th.get(&hi(-1)), Some(&1));
        assert_eq!(th.values().sum::<usize>(), 1);

        // B_{-4}[0,0] over Q: square on (0,0),(-1,0),(0,-1),(-1,-1), d^2=0
        let b = realize_summand(
            &SummandDescriptor::boxed(hi(-4), hi(0), hi(0)),
            FieldKind::Q,
        );
        assert!(b.is_valid());
        assert_eq!(b.len(), 4);
        assert!(b.total_homology().is_empty());

        // X and Y staircases have rank-one total homology at maslov d
        for kind in [SummandKind::X, SummandKind::Y] {
            for l in 0..=4u32 {
                for field in [FieldKind::GF2, FieldKind::Q] {
                    let s = SummandDescriptor::new(kind, hi(-1), l, (hd(1), hd(-1)));
                    let c = realize_summand(&s, field);
                    assert!(c.is_valid(), "{} invalid over {:?}", s, field);
                    let th = c.total_homology();
                    assert_eq!(th.get(&hi(-1)), Some(&1), "{} over {:?}", s, field);
                    assert_eq!(th.values().sum::<usize>(), 1);
                }
            }
        }
    }

    #[test]
    fn descriptor_rendering() {
        let s = SummandDescriptor::new(SummandKind::Y, hi(-1), 1, (hd(3), hd(3)));
        assert_eq!(s.to_string(), "Y[-1]^1[3/2,3/2]");
        let b = SummandDescriptor::boxed(hi(-4), hi(1), hi(-1));
        assert_eq!(b.to_string(), "B[-4][1,-1]");
    }

    fn t28_descriptors() -> Vec<SummandDescriptor> {
        vec![
            SummandDescriptor::new(SummandKind::Y, hi(0), 0, (hi(2), hi(2))),
            SummandDescriptor::new(SummandKind::Y, hi(-1), 1, (hd(3), hd(3))),
            SummandDescriptor::boxed(hi(-2), hi(1), hi(1)),
            SummandDescriptor::boxed(hi(-4), hi(0), hi(0)),
            SummandDescriptor::boxed(hi(-6), hi(-1), hi(-1)),
        ]
    }

    #[test]
    fn t28_catalog_decomposes_and_pairs() {
        for field in [FieldKind::GF2, FieldKind::Q] {
            let d = Decomposition::new(t28_descriptors());
            let c = realize_decomposition(&d, field);
            assert!(c.is_valid());
            // full filtered complex has homology F_0 + F_-1
            let th = c.total_homology();
            assert_eq!(th.get(&hi(0)), Some(&1));
            assert_eq!(th.get(&hi(-1)), Some(&1));
            assert_eq!(th.len(), 2);
            let got = decompose_e2(&c).unwrap();
            assert_eq!(got, d);
            let census = summand_census_oracle(&c).unwrap();
            assert_eq!(census, d);
            assert!(check_pairing(&d).is_ok());
        }
    }

    #[test]
    fn pairing_rejects_lone_v() {
        let d = Decomposition::new(vec![
            SummandDescriptor::new(SummandKind::Y, hi(0), 0, (hi(0), hi(0))),
            SummandDescriptor::new(SummandKind::Y, hi(-1), 0, (hi(1), hi(-1))),
            SummandDescriptor::new(SummandKind::V, hi(0), 1, (hi(1), hi(1))),
        ]);
        assert!(check_pairing(&d).is_err());
    }

    #[test]
    fn pairing_accepts_x_pair_plus_boxes() {
        let d = Decomposition::new(vec![
            SummandDescriptor::new(SummandKind::X, hi(0), 1, (hi(1), hi(1))),
            SummandDescriptor::new(SummandKind::X, hi(-1), 1, (hi(1), hi(1))),
            SummandDescriptor::boxed(hi(-2), hi(0), hi(0)),
        ]);
        assert!(check_pairing(&d).is_ok());
    }

    #[test]
    fn census_single_v() {
        let d = Decomposition::new(vec![SummandDescriptor::new(
            SummandKind::V,
            hi(0),
            1,
            (hi(0), hi(0)),
        )]);
        let c = realize_decomposition(&d, FieldKind::GF2);
        assert_eq!(summand_census_oracle(&c).unwrap(), d);
        assert_eq!(decompose_e2(&c).unwrap(), d);
    }

    #[test]
    fn single_generator_reports_y0() {
        let mut c = BifilteredComplex::new(FieldKind::Q);
        c.add_generator("x", Grading::new(hd(1), hd(-3), hi(2)));
        let d = decompose_e2(&c).unwrap();
        assert_eq!(d.summands.len(), 1);
        assert_eq!(d.summands[0].kind, SummandKind::Y);
        assert_eq!(d.summands[0].l, 0);
    }

    #[test]
    fn ambiguous_y_pairs_distinguished() {
        // Y^0[0,0] + Y^2[0,0] versus Y^1[-1/2,1/2] + Y^1[1/2,-1/2] have the
        // same associated-graded ranks and per-block arrow counts; the
        // corner profile tells them apart.
        let d1 = Decomposition::new(vec![
            SummandDescriptor::new(SummandKind::Y, hi(0), 0, (hi(0), hi(0))),
            SummandDescriptor::new(SummandKind::Y, hi(0), 2, (hi(0), hi(0))),
        ]);
        let d2 = Decomposition::new(vec![
            SummandDescriptor::new(SummandKind::Y, hi(0), 1, (hd(-1), hd(1))),
            SummandDescriptor::new(SummandKind::Y, hi(0), 1, (hd(1), hd(-1))),
        ]);
        for field in [FieldKind::GF2, FieldKind::Q] {
            for d in [&d1, &d2] {
                let mut c = realize_decomposition(d, field);
                let mut rng = Rng::new(31);
                scramble_basis(&mut c, &mut rng, 40);
                assert_eq!(&decompose_e2(&c).unwrap(), d, "decompose over {:?}", field);
                assert_eq!(&summand_census_oracle(&c).unwrap(), d, "census over {:?}", field);
            }
        }
    }

    fn random_descriptor(rng: &mut Rng, max_l: u32) -> SummandDescriptor {
        let kind = *rng.pick(&[
            SummandKind::B,
            SummandKind::V,
            SummandKind::H,
            SummandKind::X,
            SummandKind::Y,
        ]);
        let d = hi(rng.range(-3, 3));
        let shift = (hd(rng.range(-4, 5)), hd(rng.range(-4, 5)));
        match kind {
            SummandKind::B => SummandDescriptor::boxed(d, shift.0, shift.1),
            SummandKind::V | SummandKind::H => SummandDescriptor::new(kind, d, 1, shift),
            _ => {
                let l = rng.range(0, max_l as i64 + 1) as u32;
                // X^0 = Y^0; the canonical report is Y
                let kind = if l == 0 { SummandKind::Y } else { kind };
                SummandDescriptor::new(kind, d, l, shift)
            }
        }
    }

    /// Generate-then-recover: random sums of summands, scrambled by random
    /// filtered basis changes, must decompose back to the same multiset by
    /// both routes.
    #[test]
    fn random_round_trips() {
        let mut rng = Rng::new(0xd15ea5e);
        for trial in 0..120 {
            let field = if trial % 2 == 0 { FieldKind::GF2 } else { FieldKind::Q };
            let mut summands = Vec::new();
            let mut total = 0usize;
            // gradings must share one coset per coordinate
            while total < 10 {
                let s = random_descriptor(&mut rng, 3);
                // keep every generator in the integer coset for mixing
                let g0 = s.generator_gradings();
                if g0.iter().any(|g| !g.a1.is_integer() || !g.a2.is_integer() || !g.maslov.is_integer()) {
                    continue;
                }
                total += s.rank();
                summands.push(s);
                if rng.chance(1, 4) {
                    break;
                }
            }
            let d = Decomposition::new(summands);
            let mut c = realize_decomposition(&d, field);
            let steps = 4 * c.len();
            scramble_basis(&mut c, &mut rng, steps);
            assert!(c.is_valid());
            let got = decompose_e2(&c).unwrap_or_else(|e| {
                panic!("trial {}: decompose failed on {}: {}", trial, d, e)
            });
            assert_eq!(got, d, "trial {} decompose", trial);
            let census = summand_census_oracle(&c).unwrap_or_else(|e| {
                panic!("trial {}: census failed on {}: {}", trial, d, e)
            });
            assert_eq!(census, d, "trial {} census", trial);
        }
    }

    #[test]
    fn rejects_long_arrows() {
        // V^2 has a length-two vertical arrow: outside the unit-arrow
        // decomposition domain, refused rather than guessed
        let d = Decomposition::new(vec![SummandDescriptor::new(
            SummandKind::V,
            hi(0),
            2,
            (hi(0), hi(0)),
        )]);
        let c = realize_decomposition(&d, FieldKind::GF2);
        assert!(c.is_valid());
        assert!(decompose_e2(&c).is_err());
    }

    #[test]
    fn verify_distinguishes_swapped_summands() {
        // swapping a box for V pairs of the same total rank changes the
        // horizontal-only rank data
        let c = realize_decomposition(
            &Decomposition::new(vec![SummandDescriptor::boxed(hi(-2), hi(1), hi(1))]),
            FieldKind::GF2,
        );
        let wrong = Decomposition::new(vec![
            SummandDescriptor::new(SummandKind::V, hi(-2), 1, (hi(1), hi(1))),
            SummandDescriptor::new(SummandKind::V, hi(-3), 1, (hi(0), hi(1))),
        ]);
        assert!(verify_decomposition(&c, &wrong).is_err());
        let empty = BifilteredComplex::new(FieldKind::GF2);
        assert!(verify_decomposition(&empty, &Decomposition::default()).is_ok());
    }
}

#[cfg(test)]
mod parse_tests {
    use super::*;

    #[test]
    fn descriptor_parse_round_trip() {
        for s in ["B[-4][0,0]", "Y[-1]^1[3/2,3/2]", "V[0]^2[1,-1]", "X[0]^3[-5/2,5/2]"] {
            let d: SummandDescriptor = s.parse().unwrap();
            assert_eq!(d.to_string(), s);
        }
        assert!("Q[0]^1[0,0]".parse::<SummandDescriptor>().is_err());
        assert!("B[0,0]".parse::<SummandDescriptor>().is_err());
    }
}

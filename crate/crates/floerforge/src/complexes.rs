//! The bifiltered complex data model: validation, associated-graded and
//! total homology, grading-preserving reduction, and projection of a
//! bigraded module to single-Alexander-graded (knot-style) ranks.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::exactalg::{FieldKind, FieldScalar, HalfInt, SparseMatrix};

/// Multi-grading of one generator: two Alexander gradings and the Maslov
/// (homological) grading.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Grading {
    pub a1: HalfInt,
    pub a2: HalfInt,
    pub maslov: HalfInt,
}

impl Grading {
    pub fn new(a1: HalfInt, a2: HalfInt, maslov: HalfInt) -> Self {
        Grading { a1, a2, maslov }
    }

    /// Conjugation-symmetry image: (a1, a2, m) -> (-a1, -a2, m - 2a1 - 2a2).
    /// Reverse-engineered from the worked torus-link gradings; an involution.
    pub fn conjugate(self) -> Grading {
        Grading {
            a1: -self.a1,
            a2: -self.a2,
            maslov: self.maslov - self.a1 - self.a1 - self.a2 - self.a2,
        }
    }

    /// Component-exchange image: (a1, a2, m) -> (a2, a1, m).
    pub fn exchange(self) -> Grading {
        Grading { a1: self.a2, a2: self.a1, maslov: self.maslov }
    }

    pub fn delta(self) -> HalfInt {
        self.a1 + self.a2 - self.maslov
    }
}

impl fmt::Display for Grading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{};{})", self.a1, self.a2, self.maslov)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub id: String,
    pub gr: Grading,
}

/// A finitely generated complex with a bifiltered, Maslov-drop-1
/// differential over GF(2) or Q.
#[derive(Clone, Debug, PartialEq)]
pub struct BifilteredComplex {
    pub field: FieldKind,
    generators: Vec<Generator>,
    /// (source index, target index) -> nonzero coefficient
    diff: BTreeMap<(usize, usize), FieldScalar>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation(pub String);

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Ranks of a multi-graded vector space, finitely supported.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BigradedModule {
    pub ranks: BTreeMap<Grading, usize>,
}

impl BigradedModule {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, gr: Grading, rank: usize) {
        if rank == 0 {
            return;
        }
        *self.ranks.entry(gr).or_insert(0) += rank;
    }

    pub fn rank_at(&self, gr: Grading) -> usize {
        self.ranks.get(&gr).copied().unwrap_or(0)
    }

    pub fn total_rank(&self) -> usize {
        self.ranks.values().sum()
    }

    pub fn support(&self) -> impl Iterator<Item = (HalfInt, HalfInt)> + '_ {
        self.ranks.keys().map(|g| (g.a1, g.a2))
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    /// Mirror dual: all three gradings negated.
    pub fn mirror(&self) -> BigradedModule {
        let mut out = BigradedModule::new();
        for (g, r) in self.ranks.iter() {
            out.add(Grading::new(-g.a1, -g.a2, -g.maslov), *r);
        }
        out
    }

    /// Total rank on the hyperplane where the chosen Alexander grading
    /// equals `value` (axis 1 or 2).
    pub fn line_rank(&self, axis: u8, value: HalfInt) -> usize {
        self.ranks
            .iter()
            .filter(|(g, _)| (if axis == 1 { g.a1 } else { g.a2 }) == value)
            .map(|(_, r)| r)
            .sum()
    }

    pub fn axis_values(&self, axis: u8) -> BTreeSet<HalfInt> {
        self.ranks
            .keys()
            .map(|g| if axis == 1 { g.a1 } else { g.a2 })
            .collect()
    }
}

/// Declared link-level hypotheses consumed by the constraint rules; never
/// inferred from modules.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ComponentData {
    pub n_components: usize,
    /// Unordered pair (i, j) with i < j -> linking number.
    pub lk: BTreeMap<(usize, usize), i64>,
    pub fibered: Vec<Option<bool>>,
    pub unknotted: Vec<Option<bool>>,
    pub genus_bound: Vec<Option<i64>>,
}

impl ComponentData {
    pub fn two_component(lk: i64) -> Self {
        let mut m = BTreeMap::new();
        m.insert((0, 1), lk);
        ComponentData {
            n_components: 2,
            lk: m,
            fibered: vec![None; 2],
            unknotted: vec![None; 2],
            genus_bound: vec![None; 2],
        }
    }

    pub fn knot() -> Self {
        ComponentData {
            n_components: 1,
            lk: BTreeMap::new(),
            fibered: vec![None],
            unknotted: vec![None],
            genus_bound: vec![None],
        }
    }

    pub fn lk_pair(&self, i: usize, j: usize) -> i64 {
        let key = if i < j { (i, j) } else { (j, i) };
        self.lk.get(&key).copied().unwrap_or(0)
    }

    /// Total linking of component i with the rest of the link.
    pub fn lk_with_rest(&self, i: usize) -> i64 {
        (0..self.n_components)
            .filter(|&j| j != i)
            .map(|j| self.lk_pair(i, j))
            .sum()
    }
}

impl BifilteredComplex {
    pub fn new(field: FieldKind) -> Self {
        BifilteredComplex { field, generators: Vec::new(), diff: BTreeMap::new() }
    }

    pub fn add_generator(&mut self, id: impl Into<String>, gr: Grading) -> usize {
        let id = id.into();
        assert!(
            self.index_of(&id).is_none(),
            "duplicate generator id {:?}",
            id
        );
        self.generators.push(Generator { id, gr });
        self.generators.len() - 1
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.id == id)
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn diff_entries(&self) -> impl Iterator<Item = (usize, usize, &FieldScalar)> {
        self.diff.iter().map(|((s, t), c)| (*s, *t, c))
    }

    pub fn coeff(&self, source: usize, target: usize) -> FieldScalar {
        self.diff
            .get(&(source, target))
            .cloned()
            .unwrap_or_else(|| FieldScalar::zero(self.field))
    }

    pub fn set_coeff(&mut self, source: usize, target: usize, c: FieldScalar) {
        assert_eq!(c.kind(), self.field, "field mismatch");
        if c.is_zero() {
            self.diff.remove(&(source, target));
        } else {
            self.diff.insert((source, target), c);
        }
    }

    pub fn add_arrow(&mut self, source: &str, target: &str, c: FieldScalar) {
        let s = self.index_of(source).expect("unknown source id");
        let t = self.index_of(target).expect("unknown target id");
        let cur = self.coeff(s, t);
        self.set_coeff(s, t, cur.add(&c));
    }

    pub fn arrow_count(&self) -> usize {
        self.diff.len()
    }

    /// Structural and axiom checks: Maslov drop 1, filtration monotone,
    /// d^2 = 0, single coset per grading coordinate.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut seen = BTreeSet::new();
        for g in &self.generators {
            if !seen.insert(g.id.clone()) {
                out.push(Violation(format!("duplicate generator id {:?}", g.id)));
            }
        }
        if let Some(first) = self.generators.first() {
            let (c1, c2, cm) = (
                first.gr.a1.doubled().rem_euclid(2),
                first.gr.a2.doubled().rem_euclid(2),
                first.gr.maslov.doubled().rem_euclid(2),
            );
            for g in &self.generators {
                if g.gr.a1.doubled().rem_euclid(2) != c1
                    || g.gr.a2.doubled().rem_euclid(2) != c2
                    || g.gr.maslov.doubled().rem_euclid(2) != cm
                {
                    out.push(Violation(format!(
                        "generator {:?} at {} leaves the grading coset of {:?}",
                        g.id, g.gr, first.id
                    )));
                }
            }
        }
        for ((s, t), c) in self.diff.iter() {
            let (gs, gt) = (&self.generators[*s], &self.generators[*t]);
            if c.kind() != self.field {
                out.push(Violation(format!(
                    "arrow {} -> {} has coefficient in the wrong field",
                    gs.id, gt.id
                )));
            }
            if c.is_zero() {
                out.push(Violation(format!("arrow {} -> {} stored with zero coefficient", gs.id, gt.id)));
            }
            if gt.gr.maslov != gs.gr.maslov - HalfInt::from_int(1) {
                out.push(Violation(format!(
                    "maslov drop: arrow {} -> {} drops maslov by {}",
                    gs.id,
                    gt.id,
                    gs.gr.maslov - gt.gr.maslov
                )));
            }
            if gt.gr.a1 > gs.gr.a1 || gt.gr.a2 > gs.gr.a2 {
                out.push(Violation(format!(
                    "filtration: arrow {} -> {} increases an Alexander grading",
                    gs.id, gt.id
                )));
            }
        }
        // d^2 = 0, checked per (source, final-target) pair
        let mut sq: BTreeMap<(usize, usize), FieldScalar> = BTreeMap::new();
        for ((s, m), c1) in self.diff.iter() {
            for ((m2, t), c2) in self.diff.range((*m, 0)..(*m + 1, 0)) {
                debug_assert_eq!(m, m2);
                let e = sq
                    .entry((*s, *t))
                    .or_insert_with(|| FieldScalar::zero(self.field));
                *e = e.add(&c1.mul(c2));
            }
        }
        for ((s, t), c) in sq {
            if !c.is_zero() {
                out.push(Violation(format!(
                    "d^2 != 0: component {} -> {} equals {}",
                    self.generators[s].id, self.generators[t].id, c
                )));
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// Every arrow drops exactly one Alexander grading (the other is
    /// unchanged) — the E2-collapsed shape after reduction.
    pub fn is_e2_collapsed(&self) -> bool {
        self.diff.iter().all(|((s, t), _)| {
            let d1 = self.generators[*s].gr.a1 - self.generators[*t].gr.a1;
            let d2 = self.generators[*s].gr.a2 - self.generators[*t].gr.a2;
            (d1 == HalfInt::ZERO) != (d2 == HalfInt::ZERO)
        })
    }

    /// True when all arrows drop total Alexander grading by exactly one.
    pub fn has_unit_arrows_only(&self) -> bool {
        self.diff.iter().all(|((s, t), _)| {
            let gs = self.generators[*s].gr;
            let gt = self.generators[*t].gr;
            (gs.a1 - gt.a1) + (gs.a2 - gt.a2) == HalfInt::from_int(1)
        })
    }

    pub fn has_grading_preserving_arrows(&self) -> bool {
        self.diff.iter().any(|((s, t), _)| {
            self.generators[*s].gr.a1 == self.generators[*t].gr.a1
                && self.generators[*s].gr.a2 == self.generators[*t].gr.a2
        })
    }

    /// Homology of the Alexander-grading-preserving part of the
    /// differential: the associated-graded (E1) ranks per multi-grading.
    /// Arrows of positive filtration drop vanish here.
    pub fn associated_graded_homology(&self) -> BigradedModule {
        let mut positions: BTreeMap<(HalfInt, HalfInt, HalfInt), Vec<usize>> = BTreeMap::new();
        for (i, g) in self.generators.iter().enumerate() {
            positions
                .entry((g.gr.a1, g.gr.a2, g.gr.maslov))
                .or_default()
                .push(i);
        }
        let block_rank = |sources: &[usize], targets: &[usize]| -> usize {
            if sources.is_empty() || targets.is_empty() {
                return 0;
            }
            let mut m = SparseMatrix::new(self.field, targets.len(), sources.len());
            for (cj, s) in sources.iter().enumerate() {
                for (ri, t) in targets.iter().enumerate() {
                    let c = self.coeff(*s, *t);
                    if !c.is_zero() {
                        m.set(ri, cj, c);
                    }
                }
            }
            m.rank_and_kernel().0
        };
        let empty: Vec<usize> = Vec::new();
        let mut out = BigradedModule::new();
        for ((a1, a2, m), gens) in positions.iter() {
            let below = positions
                .get(&(*a1, *a2, *m - HalfInt::from_int(1)))
                .unwrap_or(&empty);
            let above = positions
                .get(&(*a1, *a2, *m + HalfInt::from_int(1)))
                .unwrap_or(&empty);
            let r_out = block_rank(gens, below);
            let r_in = block_rank(above, gens);
            let h = gens.len() - r_out - r_in;
            out.add(Grading::new(*a1, *a2, *m), h);
        }
        out
    }

    /// Homology of the full differential, graded by Maslov only.
    pub fn total_homology(&self) -> BTreeMap<HalfInt, usize> {
        let mut levels: BTreeMap<HalfInt, Vec<usize>> = BTreeMap::new();
        for (i, g) in self.generators.iter().enumerate() {
            levels.entry(g.gr.maslov).or_default().push(i);
        }
        let empty: Vec<usize> = Vec::new();
        let rank_between = |sources: &[usize], targets: &[usize]| -> usize {
            if sources.is_empty() || targets.is_empty() {
                return 0;
            }
            let mut m = SparseMatrix::new(self.field, targets.len(), sources.len());
            for (cj, s) in sources.iter().enumerate() {
                for (ri, t) in targets.iter().enumerate() {
                    let c = self.coeff(*s, *t);
                    if !c.is_zero() {
                        m.set(ri, cj, c);
                    }
                }
            }
            m.rank_and_kernel().0
        };
        let mut out = BTreeMap::new();
        for (m, gens) in levels.iter() {
            let below = levels.get(&(*m - HalfInt::from_int(1))).unwrap_or(&empty);
            let above = levels.get(&(*m + HalfInt::from_int(1))).unwrap_or(&empty);
            let h = gens.len() - rank_between(gens, below) - rank_between(above, gens);
            if h > 0 {
                out.insert(*m, h);
            }
        }
        out
    }

    /// Cancels all grading-preserving differential components. Candidate
    /// cancellations are processed sorted by (a1 desc, a2 desc, maslov
    /// desc, source id asc, target id asc), so the output is reproducible.
    pub fn reduce_grading_preserving(&self) -> BifilteredComplex {
        let mut c = self.clone();
        loop {
            let mut candidates: Vec<(usize, usize)> = c
                .diff
                .iter()
                .filter(|((s, t), _)| {
                    c.generators[*s].gr.a1 == c.generators[*t].gr.a1
                        && c.generators[*s].gr.a2 == c.generators[*t].gr.a2
                })
                .map(|((s, t), _)| (*s, *t))
                .collect();
            if candidates.is_empty() {
                return c;
            }
            candidates.sort_by(|(s1, t1), (s2, t2)| {
                let g1 = c.generators[*s1].gr;
                let g2 = c.generators[*s2].gr;
                g2.a1
                    .cmp(&g1.a1)
                    .then(g2.a2.cmp(&g1.a2))
                    .then(g2.maslov.cmp(&g1.maslov))
                    .then(c.generators[*s1].id.cmp(&c.generators[*s2].id))
                    .then(c.generators[*t1].id.cmp(&c.generators[*t2].id))
            });
            let (s, t) = candidates[0];
            c = c.cancel_pair(s, t);
        }
    }

    /// Gaussian cancellation of the arrow s -> t (coefficient must be
    /// nonzero, hence invertible).
    fn cancel_pair(&self, s: usize, t: usize) -> BifilteredComplex {
        let c_st = self.coeff(s, t);
        assert!(!c_st.is_zero());
        let inv = c_st.inv();
        let into_t: Vec<(usize, FieldScalar)> = self
            .diff
            .iter()
            .filter(|((z, t2), _)| *t2 == t && *z != s)
            .map(|((z, _), c)| (*z, c.clone()))
            .collect();
        let out_of_s: Vec<(usize, FieldScalar)> = self
            .diff
            .iter()
            .filter(|((s2, y), _)| *s2 == s && *y != t)
            .map(|((_, y), c)| (*y, c.clone()))
            .collect();
        let mut next = BifilteredComplex::new(self.field);
        let mut remap = vec![usize::MAX; self.generators.len()];
        for (i, g) in self.generators.iter().enumerate() {
            if i != s && i != t {
                remap[i] = next.add_generator(g.id.clone(), g.gr);
            }
        }
        for ((a, b), coeff) in self.diff.iter() {
            if *a == s || *a == t || *b == s || *b == t {
                continue;
            }
            next.set_coeff(remap[*a], remap[*b], coeff.clone());
        }
        for (z, cz) in &into_t {
            for (y, cy) in &out_of_s {
                // d'(z) gains -<dz,t> c^-1 <ds,y> on y
                let corr = cz.mul(&inv).mul(cy).neg();
                let cur = next.coeff(remap[*z], remap[*y]);
                next.set_coeff(remap[*z], remap[*y], cur.add(&corr));
            }
        }
        next
    }

    /// Filtered change of basis: e[target] += c * e[source], which requires
    /// gr(source) <= gr(target) componentwise with equal Maslov grading.
    /// The stored generator gradings are unchanged; only arrows move.
    pub fn basis_add(&mut self, source: usize, target: usize, c: &FieldScalar) {
        assert_ne!(source, target);
        let gs = self.generators[source].gr;
        let gt = self.generators[target].gr;
        assert!(
            gs.a1 <= gt.a1 && gs.a2 <= gt.a2 && gs.maslov == gt.maslov,
            "basis_add violates filtration"
        );
        if c.is_zero() {
            return;
        }
        // column op: d(new target) = d(target) + c d(source)
        let src_arrows: Vec<(usize, FieldScalar)> = self
            .diff
            .iter()
            .filter(|((a, _), _)| *a == source)
            .map(|((_, b), k)| (*b, k.clone()))
            .collect();
        for (b, k) in src_arrows {
            let cur = self.coeff(target, b);
            self.set_coeff(target, b, cur.add(&c.mul(&k)));
        }
        // row op: arrows into target acquire -c on source
        let into_target: Vec<(usize, FieldScalar)> = self
            .diff
            .iter()
            .filter(|((_, b), _)| *b == target)
            .map(|((a, _), k)| (*a, k.clone()))
            .collect();
        for (a, k) in into_target {
            if a == target {
                continue;
            }
            let cur = self.coeff(a, source);
            self.set_coeff(a, source, cur.sub(&c.mul(&k)));
        }
    }

    /// Rescales a basis vector by a nonzero scalar.
    pub fn basis_scale(&mut self, gen: usize, c: &FieldScalar) {
        assert!(!c.is_zero());
        let inv = c.inv();
        let out: Vec<(usize, FieldScalar)> = self
            .diff
            .iter()
            .filter(|((a, _), _)| *a == gen)
            .map(|((_, b), k)| (*b, k.clone()))
            .collect();
        for (b, k) in out {
            self.set_coeff(gen, b, c.mul(&k));
        }
        let into: Vec<(usize, FieldScalar)> = self
            .diff
            .iter()
            .filter(|((_, b), _)| *b == gen)
            .map(|((a, _), k)| (*a, k.clone()))
            .collect();
        for (a, k) in into {
            self.set_coeff(a, gen, inv.mul(&k));
        }
    }

    /// Direct sum, suffixing ids to keep them unique.
    pub fn direct_sum(&self, other: &BifilteredComplex, suffix: &str) -> BifilteredComplex {
        assert_eq!(self.field, other.field);
        let mut out = self.clone();
        let offset = out.generators.len();
        for g in &other.generators {
            out.generators.push(Generator {
                id: format!("{}.{}", g.id, suffix),
                gr: g.gr,
            });
        }
        for ((s, t), c) in other.diff.iter() {
            out.set_coeff(offset + s, offset + t, c.clone());
        }
        out
    }
}

/// Random filtered change of basis: repeatedly adds a generator into
/// another of the same Maslov grading and componentwise-higher Alexander
/// grading. Upper-triangular by construction, so the bifiltered homotopy
/// type is untouched; used to exercise reduction and decomposition on
/// inputs that no longer look like direct sums.
pub fn scramble_basis(c: &mut BifilteredComplex, rng: &mut crate::rng::Rng, steps: usize) {
    let n = c.len();
    if n < 2 {
        return;
    }
    for _ in 0..steps {
        let i = rng.range(0, n as i64) as usize;
        let j = rng.range(0, n as i64) as usize;
        if i == j {
            continue;
        }
        let gi = c.generators()[i].gr;
        let gj = c.generators()[j].gr;
        if gi.a1 <= gj.a1 && gi.a2 <= gj.a2 && gi.maslov == gj.maslov {
            let coeff = match c.field {
                FieldKind::GF2 => FieldScalar::one(FieldKind::GF2),
                FieldKind::Q => FieldScalar::from_int(FieldKind::Q, *rng.pick(&[1, -1, 2])),
            };
            c.basis_add(i, j, &coeff);
        }
    }
}

/// Projects a multi-graded module onto the single Alexander grading
/// A = a1 + a2 and shifts Maslov up by (n-1)/2, matching the worked
/// torus-link gradings (integer-Maslov two-component modules land in
/// Z + 1/2, as the degeneration to #^(n-1) S^1 x S^2 requires).
pub fn project_to_hfk(
    m: &BigradedModule,
    n_components: usize,
) -> BTreeMap<(HalfInt, HalfInt), usize> {
    let shift = HalfInt::from_doubled(n_components as i64 - 1);
    let mut out = BTreeMap::new();
    for (g, r) in m.ranks.iter() {
        *out.entry((g.a1 + g.a2, g.maslov + shift)).or_insert(0) += r;
    }
    out
}

/// Total rank per single Alexander grading of projected ranks.
pub fn hfk_alexander_ranks(
    hfk: &BTreeMap<(HalfInt, HalfInt), usize>,
) -> BTreeMap<HalfInt, usize> {
    let mut out = BTreeMap::new();
    for ((a, _), r) in hfk.iter() {
        *out.entry(*a).or_insert(0) += r;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat_int;
    use crate::rng::Rng;
    use num_rational::BigRational;
    use num_traits::Zero;

    fn gr(a1: i64, a2: i64, m: i64) -> Grading {
        Grading::new(HalfInt::from_int(a1), HalfInt::from_int(a2), HalfInt::from_int(m))
    }

    #[test]
    fn single_generator_is_valid() {
        let mut c = BifilteredComplex::new(FieldKind::GF2);
        c.add_generator("x", gr(0, 0, 0));
        assert!(c.is_valid());
        assert_eq!(c.total_homology().get(&HalfInt::ZERO), Some(&1));
    }

    #[test]
    fn maslov_drop_two_is_violation() {
        let mut c = BifilteredComplex::new(FieldKind::GF2);
        c.add_generator("a", gr(1, 0, 0));
        c.add_generator("b", gr(0, 0, -2));
        c.add_arrow("a", "b", FieldScalar::one(FieldKind::GF2));
        let v = c.validate();
        assert!(v.iter().any(|x| x.0.contains("maslov drop")));
    }

    #[test]
    fn filtration_violation_detected() {
        let mut c = BifilteredComplex::new(FieldKind::GF2);
        c.add_generator("a", gr(0, 0, 0));
        c.add_generator("b", gr(1, 0, -1));
        c.add_arrow("a", "b", FieldScalar::one(FieldKind::GF2));
        let v = c.validate();
        assert!(v.iter().any(|x| x.0.contains("filtration")));
    }

    #[test]
    fn d_squared_checked_over_q() {
        // square with all +1 arrows fails over Q, passes over GF(2)
        for (kind, ok) in [(FieldKind::Q, false), (FieldKind::GF2, true)] {
            let mut c = BifilteredComplex::new(kind);
            c.add_generator("top", gr(0, 0, 0));
            c.add_generator("mh", gr(-1, 0, -1));
            c.add_generator("mv", gr(0, -1, -1));
            c.add_generator("bot", gr(-1, -1, -2));
            for (s, t) in [("top", "mh"), ("top", "mv"), ("mh", "bot"), ("mv", "bot")] {
                c.add_arrow(s, t, FieldScalar::one(kind));
            }
            assert_eq!(c.is_valid(), ok, "field {:?}", kind);
        }
    }

    #[test]
    fn coset_consistency() {
        let mut c = BifilteredComplex::new(FieldKind::GF2);
        c.add_generator("a", gr(0, 0, 0));
        let mut b = c.clone();
        b.add_generator("half", Grading::new(HalfInt::half(), HalfInt::ZERO, HalfInt::ZERO));
        assert!(c.is_valid());
        assert!(!b.is_valid());
    }

    /// A box complex: length-1 arrows vanish in the associated graded, so
    /// E1 ranks equal generator counts, while total homology is zero.
    #[test]
    fn box_homologies() {
        let mut c = BifilteredComplex::new(FieldKind::Q);
        c.add_generator("top", gr(0, 0, 0));
        c.add_generator("mh", gr(-1, 0, -1));
        c.add_generator("mv", gr(0, -1, -1));
        c.add_generator("bot", gr(-1, -1, -2));
        c.add_arrow("top", "mh", FieldScalar::from_int(FieldKind::Q, -1));
        c.add_arrow("top", "mv", FieldScalar::one(FieldKind::Q));
        c.add_arrow("mh", "bot", FieldScalar::one(FieldKind::Q));
        c.add_arrow("mv", "bot", FieldScalar::one(FieldKind::Q));
        assert!(c.is_valid());
        let e1 = c.associated_graded_homology();
        assert_eq!(e1.total_rank(), 4);
        assert!(c.total_homology().is_empty());
    }

    #[test]
    fn grading_preserving_pair_cancels_to_empty() {
        let mut c = BifilteredComplex::new(FieldKind::Q);
        c.add_generator("a", gr(1, 2, 0));
        c.add_generator("b", gr(1, 2, -1));
        c.add_arrow("a", "b", FieldScalar::from_int(FieldKind::Q, 3));
        let r = c.reduce_grading_preserving();
        assert!(r.is_empty());
        assert!(c.associated_graded_homology().is_empty());
    }

    #[test]
    fn already_reduced_unchanged() {
        let mut c = BifilteredComplex::new(FieldKind::GF2);
        c.add_generator("a", gr(1, 0, 0));
        c.add_generator("b", gr(0, 0, -1));
        c.add_arrow("a", "b", FieldScalar::one(FieldKind::GF2));
        assert_eq!(c.reduce_grading_preserving(), c);
    }

    /// Builds a random valid complex: a partial matching differential
    /// (sources and targets disjoint) conjugated by random filtered basis
    /// changes. d^2 = 0 is automatic and preserved.
    pub(crate) fn random_complex(rng: &mut Rng, kind: FieldKind, n: usize) -> BifilteredComplex {
        let mut c = BifilteredComplex::new(kind);
        for i in 0..n {
            c.add_generator(
                format!("g{}", i),
                gr(rng.range(-3, 4), rng.range(-3, 4), rng.range(-3, 4)),
            );
        }
        // random partial matching with compatible gradings
        let mut used_s = vec![false; n];
        let mut used_t = vec![false; n];
        for _ in 0..(2 * n) {
            let s = rng.range(0, n as i64) as usize;
            let t = rng.range(0, n as i64) as usize;
            if s == t || used_s[s] || used_t[t] || used_t[s] || used_s[t] {
                continue;
            }
            let gs = c.generators()[s].gr;
            let gt = c.generators()[t].gr;
            if gt.maslov != gs.maslov - HalfInt::from_int(1) || gt.a1 > gs.a1 || gt.a2 > gs.a2 {
                continue;
            }
            let coeff = match kind {
                FieldKind::GF2 => FieldScalar::one(kind),
                FieldKind::Q => FieldScalar::from_int(kind, *rng.pick(&[1, -1, 2, 3])),
            };
            c.set_coeff(s, t, coeff);
            used_s[s] = true;
            used_t[t] = true;
        }
        scramble_basis(&mut c, rng, 3 * n);
        c
    }

    /// Dense homology oracle: builds the full differential matrix per
    /// Maslov level from scratch and row-reduces it.
    fn dense_total_homology(c: &BifilteredComplex) -> BTreeMap<HalfInt, usize> {
        let mut levels: BTreeMap<HalfInt, Vec<usize>> = BTreeMap::new();
        for (i, g) in c.generators().iter().enumerate() {
            levels.entry(g.gr.maslov).or_default().push(i);
        }
        let rank = |rows: &[usize], cols: &[usize]| -> usize {
            let mut m = SparseMatrix::new(c.field, rows.len(), cols.len());
            for (j, s) in cols.iter().enumerate() {
                for (i, t) in rows.iter().enumerate() {
                    let v = c.coeff(*s, *t);
                    if !v.is_zero() {
                        m.set(i, j, v);
                    }
                }
            }
            m.rank_and_kernel().0
        };
        let empty = Vec::new();
        let mut out = BTreeMap::new();
        for (m, gens) in levels.iter() {
            let lo = levels.get(&(*m - HalfInt::from_int(1))).unwrap_or(&empty);
            let hi = levels.get(&(*m + HalfInt::from_int(1))).unwrap_or(&empty);
            let h = gens.len() - rank(lo, gens) - rank(gens, hi);
            if h > 0 {
                out.insert(*m, h);
            }
        }
        out
    }

    #[test]
    fn random_complexes_validate_and_match_oracle() {
        let mut rng = Rng::new(2024);
        for trial in 0..60 {
            let kind = if trial % 2 == 0 { FieldKind::GF2 } else { FieldKind::Q };
            let c = random_complex(&mut rng, kind, 10);
            assert!(c.is_valid(), "random complex invalid: {:?}", c.validate());
            assert_eq!(c.total_homology(), dense_total_homology(&c));
            let reduced = c.reduce_grading_preserving();
            assert!(reduced.is_valid());
            assert!(!reduced.has_grading_preserving_arrows());
            assert_eq!(
                reduced.associated_graded_homology(),
                c.associated_graded_homology(),
                "reduction changed E1"
            );
            assert_eq!(reduced.total_homology(), c.total_homology());
            // spectral-sequence monotonicity
            let e1_total: usize = c.associated_graded_homology().total_rank();
            let h_total: usize = c.total_homology().values().sum();
            assert!(h_total <= e1_total);
        }
    }

    #[test]
    fn projection_keeps_total_rank() {
        let mut m = BigradedModule::new();
        m.add(gr(1, 0, 0), 2);
        m.add(gr(0, 1, -1), 3);
        let p = project_to_hfk(&m, 2);
        let total: usize = p.values().sum();
        assert_eq!(total, 5);
        // single generator at (1,0,m) with n=2 -> (A=1, M=m+1/2)
        let mut single = BigradedModule::new();
        single.add(gr(1, 0, -2), 1);
        let p = project_to_hfk(&single, 2);
        assert_eq!(
            p.get(&(HalfInt::from_int(1), HalfInt::from_doubled(-3))),
            Some(&1)
        );
        assert!(project_to_hfk(&BigradedModule::new(), 2).is_empty());
    }

    #[test]
    fn conjugation_is_involution() {
        let mut rng = Rng::new(5);
        for _ in 0..100 {
            let g = Grading::new(
                HalfInt::from_doubled(rng.range(-9, 10)),
                HalfInt::from_doubled(rng.range(-9, 10)),
                HalfInt::from_doubled(rng.range(-9, 10)),
            );
            assert_eq!(g.conjugate().conjugate(), g);
            assert_eq!(g.exchange().exchange(), g);
        }
    }

    #[test]
    fn eval_sanity_zero_rational() {
        assert!(BigRational::zero().is_zero());
        let _ = rat_int(0);
    }
}

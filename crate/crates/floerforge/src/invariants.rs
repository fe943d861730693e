//! Decategorification (Euler characteristics, Alexander and Conway
//! polynomials, linking number extraction) and polytope data (link Floer
//! polytope, dual Thurston slices, delta spectrum).

use std::collections::BTreeSet;
use std::fmt;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::complexes::{BigradedModule, Grading};
use crate::exactalg::{rat_int, HalfInt, LaurentPoly, PolyError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InvariantError {
    MixedMaslovCoset,
    EmptyModule,
    NotDivisible(String),
    Poly(PolyError),
}

impl fmt::Display for InvariantError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InvariantError::MixedMaslovCoset => {
                write!(f, "maslov gradings do not lie in a single integer coset")
            }
            InvariantError::EmptyModule => write!(f, "empty module"),
            InvariantError::NotDivisible(s) => write!(f, "euler characteristic not divisible: {}", s),
            InvariantError::Poly(e) => write!(f, "{}", e),
        }
    }
}

impl From<PolyError> for InvariantError {
    fn from(e: PolyError) -> Self {
        InvariantError::Poly(e)
    }
}

/// Parity sign (-1)^(m - m0) where m0 is the coset offset of the module's
/// Maslov gradings (0 or 1/2). Errors when gradings mix cosets.
fn maslov_sign_offset(m: &BigradedModule) -> Result<HalfInt, InvariantError> {
    let mut offset = None;
    for g in m.ranks.keys() {
        let o = g.maslov.doubled().rem_euclid(2);
        match offset {
            None => offset = Some(o),
            Some(prev) if prev == o => {}
            _ => return Err(InvariantError::MixedMaslovCoset),
        }
    }
    Ok(HalfInt::from_doubled(offset.unwrap_or(0)))
}

/// Two-variable Euler characteristic: sum over generators of
/// (-1)^(maslov) rank t1^(a1) t2^(a2), with the sign read relative to the
/// module's Maslov coset.
pub fn euler_two_variable(m: &BigradedModule) -> Result<LaurentPoly, InvariantError> {
    let offset = maslov_sign_offset(m)?;
    let mut p = LaurentPoly::zero(2);
    for (g, r) in m.ranks.iter() {
        let sign = if g.maslov.parity_rel(offset) == 0 { 1 } else { -1 };
        p.add_term(vec![g.a1, g.a2], rat_int(sign * *r as i64));
    }
    Ok(p)
}

/// One-variable Alexander polynomial of a two-component module: the
/// collapsed Euler characteristic divided by (t^1/2 - t^-1/2). The global
/// sign convention is fixed once by this choice of divisor and reproduces
/// the worked torus-link polynomials; it also makes the Conway pipeline
/// return the linking number with its sign for both handednesses.
pub fn alexander_single(m: &BigradedModule) -> Result<LaurentPoly, InvariantError> {
    let e2 = euler_two_variable(m)?;
    let e = e2.collapse_diagonal();
    alexander_from_euler(&e)
}

/// Divides a collapsed Euler characteristic by (t^1/2 - t^-1/2).
pub fn alexander_from_euler(e: &LaurentPoly) -> Result<LaurentPoly, InvariantError> {
    if e.is_zero() {
        return Ok(LaurentPoly::zero(1));
    }
    if !e.eval_at_one().is_zero() {
        return Err(InvariantError::NotDivisible(e.render(&["t"])));
    }
    // e / (t^1/2 - t^-1/2) = (e / (t - 1)) * t^1/2: synthetic division from
    // the top exponent down
    let mut rem = e.clone();
    let mut quot = LaurentPoly::zero(1);
    while !rem.is_zero() {
        let (top, c) = {
            let (e, c) = rem.terms().next_back().unwrap();
            (e[0], c.clone())
        };
        let bottom = rem.terms().next().unwrap().0[0];
        if top <= bottom && !rem.is_zero() {
            // a single surviving term cannot be divisible by (t - 1)
            return Err(InvariantError::NotDivisible(rem.render(&["t"])));
        }
        // rem -= c t^(top-1) (t - 1)
        quot.add_term(vec![top - HalfInt::from_int(1)], c.clone());
        rem.add_term(vec![top], -c.clone());
        rem.add_term(vec![top - HalfInt::from_int(1)], c);
    }
    // multiply by t^1/2
    let mut out = LaurentPoly::zero(1);
    for (e, c) in quot.terms() {
        out.add_term(vec![e[0] + HalfInt::half()], c.clone());
    }
    Ok(out)
}

/// Conway polynomial pipeline: Alexander polynomial, then t -> t^2
/// (producing the nabla(t - 1/t) form), then the binomial rewrite to the
/// z variable.
pub fn conway(m: &BigradedModule) -> Result<LaurentPoly, InvariantError> {
    let alex = alexander_single(m)?;
    conway_from_alexander(&alex)
}

pub fn conway_from_alexander(alex: &LaurentPoly) -> Result<LaurentPoly, InvariantError> {
    let in_t = alex.substitute_square();
    Ok(in_t.rewrite_in_z()?)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum LinkingMode {
    /// The literal first Conway coefficient (of z^1).
    StrictHoste,
    /// The lowest-degree nonzero coefficient — the reading the
    /// detection arguments take when the first coefficient vanishes.
    LowestCoefficient,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Linking {
    Value(i64),
    Indeterminate,
}

impl fmt::Display for Linking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Linking::Value(v) => write!(f, "{}", v),
            Linking::Indeterminate => write!(f, "indeterminate"),
        }
    }
}

/// Reads a linking number off an odd Conway polynomial.
pub fn linking_from_conway(p: &LaurentPoly, mode: LinkingMode) -> Linking {
    if p.is_zero() {
        return Linking::Indeterminate;
    }
    let coeff = match mode {
        LinkingMode::StrictHoste => p.coeff(&[HalfInt::from_int(1)]),
        LinkingMode::LowestCoefficient => p.terms().next().map(|(_, c)| c.clone()).unwrap(),
    };
    if coeff.is_zero() {
        return Linking::Value(0);
    }
    assert!(coeff.is_integer(), "non-integer Conway coefficient");
    let i = coeff.to_integer();
    Linking::Value(i64::try_from(&i).unwrap_or(i64::MAX))
}

/// Convex hull of the support in the (A1, A2) plane, counterclockwise
/// with no redundant vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FloerPolytope {
    pub vertices: Vec<(HalfInt, HalfInt)>,
}

pub fn floer_polytope(m: &BigradedModule) -> Result<FloerPolytope, InvariantError> {
    if m.is_empty() {
        return Err(InvariantError::EmptyModule);
    }
    let pts: BTreeSet<(HalfInt, HalfInt)> = m.support().collect();
    Ok(FloerPolytope { vertices: convex_hull(&pts.into_iter().collect::<Vec<_>>()) })
}

/// Andrew's monotone chain on exact half-integer points; collinear points
/// are dropped so the vertex list is minimal. Output starts at the
/// lexicographically least vertex and runs counterclockwise.
pub fn convex_hull(points: &[(HalfInt, HalfInt)]) -> Vec<(HalfInt, HalfInt)> {
    let mut pts: Vec<(HalfInt, HalfInt)> = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let cross = |o: (HalfInt, HalfInt), a: (HalfInt, HalfInt), b: (HalfInt, HalfInt)| -> i64 {
        let (ox, oy) = (o.0.doubled() as i128, o.1.doubled() as i128);
        let (ax, ay) = (a.0.doubled() as i128, a.1.doubled() as i128);
        let (bx, by) = (b.0.doubled() as i128, b.1.doubled() as i128);
        let v = (ax - ox) * (by - oy) - (ay - oy) * (bx - ox);
        v.signum() as i64
    };
    let mut lower: Vec<(HalfInt, HalfInt)> = Vec::new();
    for p in pts.iter() {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], *p) <= 0 {
            lower.pop();
        }
        lower.push(*p);
    }
    let mut upper: Vec<(HalfInt, HalfInt)> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], *p) <= 0 {
            upper.pop();
        }
        upper.push(*p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// One axis slice of the dual Thurston polytope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualThurstonSlice {
    pub axis: u8,
    /// Interval endpoints (lo, hi) as exact rationals.
    pub lo: BigRational,
    pub hi: BigRational,
}

impl DualThurstonSlice {
    pub fn strictly_inside_unit(&self) -> bool {
        self.lo > rat_int(-1) && self.hi < rat_int(1)
    }
}

/// The support-breadth norm dual to the link Floer support: for a
/// covector b, x(b) = 2 max_(s in S) <b, s> - (|b1| + |b2|), the Thurston
/// norm read off the support with the meridian correction subtracted
/// (the normalization constant 1 per axis is pinned by the torus-link
/// detection pipelines: the true links pass the unit-interval bound and
/// the shifted-box variants fail it).
fn support_norm_on_line(
    support: &[(HalfInt, HalfInt)],
    axis: u8,
    side: i64,
) -> Option<BigRational> {
    // minimize x(b) over covectors with the axis coordinate fixed to
    // `side` (+1 or -1); the other coordinate t ranges over Q. The
    // function is piecewise linear and convex in t, so the minimum sits at
    // a breakpoint: a tie between two support functionals or t = 0.
    let val = |t: &BigRational| -> BigRational {
        let mut best: Option<BigRational> = None;
        for (s1, s2) in support {
            let (c1, c2) = if axis == 2 {
                (
                    BigRational::new(s1.doubled().into(), 2.into()),
                    BigRational::new(s2.doubled().into(), 2.into()),
                )
            } else {
                (
                    BigRational::new(s2.doubled().into(), 2.into()),
                    BigRational::new(s1.doubled().into(), 2.into()),
                )
            };
            let v = t * &c1 + &c2 * BigRational::from_integer(side.into());
            best = Some(match best {
                None => v,
                Some(b) => {
                    if v > b {
                        v
                    } else {
                        b
                    }
                }
            });
        }
        let two = rat_int(2);
        two * best.unwrap() - t.abs() - rat_int(1)
    };
    if support.is_empty() {
        return None;
    }
    // unboundedness check: slopes at +/- infinity
    let max_c1 = support
        .iter()
        .map(|(s1, s2)| if axis == 2 { s1.doubled() } else { s2.doubled() })
        .max()
        .unwrap();
    let min_c1 = support
        .iter()
        .map(|(s1, s2)| if axis == 2 { s1.doubled() } else { s2.doubled() })
        .min()
        .unwrap();
    // x(t) ~ 2 max_c1/2 * t - t = (max_c1 - 1) t as t -> +inf
    if max_c1 - 1 <= 0 || -min_c1 - 1 <= 0 {
        // norm unbounded below along this line: dual slice collapses
        return None;
    }
    let mut candidates: Vec<BigRational> = vec![BigRational::zero()];
    let pts: Vec<(BigRational, BigRational)> = support
        .iter()
        .map(|(s1, s2)| {
            let a = BigRational::new(
                (if axis == 2 { s1 } else { s2 }).doubled().into(),
                2.into(),
            );
            let b = BigRational::new(
                (if axis == 2 { s2 } else { s1 }).doubled().into(),
                2.into(),
            );
            (a, b)
        })
        .collect();
    for i in 0..pts.len() {
        for j in (i + 1)..pts.len() {
            if pts[i].0 != pts[j].0 {
                let t = (&pts[j].1 - &pts[i].1) / (&pts[i].0 - &pts[j].0);
                candidates.push(t * BigRational::from_integer(side.into()));
            }
        }
    }
    let mut best = val(&candidates[0]);
    for t in candidates.iter().skip(1) {
        let v = val(t);
        if v < best {
            best = v;
        }
    }
    Some(best)
}

/// Slice of the dual Thurston polytope along one Alexander axis, computed
/// from the support of a symmetric module. The endpoint on each side is
/// min over covectors of norm/coordinate; a nonpositive minimum means the
/// norm has a null direction and the slice collapses to a point.
pub fn dual_thurston_axis_slice(
    m: &BigradedModule,
    axis: u8,
) -> Result<DualThurstonSlice, InvariantError> {
    let support: BTreeSet<(HalfInt, HalfInt)> = m.support().collect();
    for (a1, a2) in support.iter() {
        if !support.contains(&(-*a1, -*a2)) {
            return Err(InvariantError::NotDivisible(format!(
                "support not symmetric at ({},{})",
                a1, a2
            )));
        }
    }
    Ok(dual_slice_of_support(
        &support.into_iter().collect::<Vec<_>>(),
        axis,
    ))
}

/// Same computation on a raw support set (symmetrized internally), used by
/// the braid-polytope rule where hypothetical candidates need not be
/// symmetric.
pub fn dual_slice_of_support(points: &[(HalfInt, HalfInt)], axis: u8) -> DualThurstonSlice {
    let mut sym: BTreeSet<(HalfInt, HalfInt)> = points.iter().copied().collect();
    for (a, b) in points {
        sym.insert((-*a, -*b));
    }
    let support: Vec<(HalfInt, HalfInt)> = sym.into_iter().collect();
    let zero = BigRational::zero();
    let hi = match support_norm_on_line(&support, axis, 1) {
        Some(v) if v > zero => v,
        _ => zero.clone(),
    };
    let lo = match support_norm_on_line(&support, axis, -1) {
        Some(v) if v > zero => -v,
        _ => zero,
    };
    DualThurstonSlice { axis, lo, hi }
}

/// Multiset of delta values a1 + a2 - maslov over the support.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct DeltaSpectrum {
    pub values: std::collections::BTreeMap<HalfInt, usize>,
}

pub fn delta_spectrum(m: &BigradedModule) -> DeltaSpectrum {
    let mut out = DeltaSpectrum::default();
    for (g, r) in m.ranks.iter() {
        *out.values.entry(g.delta()).or_insert(0) += r;
    }
    out
}

pub fn is_thin(m: &BigradedModule) -> bool {
    delta_spectrum(m).values.len() <= 1
}

/// A synthetic two-component carrier module with a prescribed collapsed
/// Euler characteristic: |c_k| generators at (k, 0) with Maslov parity
/// matching the sign of c_k. Used to feed printed hypothetical Alexander
/// data through the Conway pipeline.
pub fn module_with_euler(e: &LaurentPoly) -> BigradedModule {
    assert_eq!(e.vars(), 1);
    let mut m = BigradedModule::new();
    for (exp, c) in e.terms() {
        let k = exp[0];
        let count = c.abs().to_integer();
        let count = i64::try_from(&count).unwrap() as usize;
        let maslov = HalfInt::from_int(if c.is_negative() { 1 } else { 0 });
        m.add(Grading::new(k, HalfInt::ZERO, maslov), count);
    }
    m
}

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::halfint::HalfInt;

/// Exact Laurent polynomial in one or two variables with half-integer
/// exponents and rational coefficients. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct LaurentPoly {
    vars: usize,
    terms: BTreeMap<Vec<HalfInt>, BigRational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PolyError {
    VarMismatch { left: usize, right: usize },
    /// `rewrite_in_z` input was not in the image of u = t - 1/t; carries the
    /// canonical rendering of the residual.
    NotInImage(String),
}

impl fmt::Display for PolyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolyError::VarMismatch { left, right } => {
                write!(f, "variable count mismatch: {} vs {}", left, right)
            }
            PolyError::NotInImage(r) => {
                write!(f, "polynomial not in the image of u = t - t^-1; residual {}", r)
            }
        }
    }
}

impl LaurentPoly {
    pub fn zero(vars: usize) -> Self {
        assert!(vars == 1 || vars == 2);
        LaurentPoly { vars, terms: BTreeMap::new() }
    }

    pub fn one(vars: usize) -> Self {
        let mut p = Self::zero(vars);
        p.add_term(vec![HalfInt::ZERO; vars], BigRational::one());
        p
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(
        &self,
    ) -> impl DoubleEndedIterator<Item = (&Vec<HalfInt>, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exp: &[HalfInt]) -> BigRational {
        self.terms.get(exp).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Adds `c * x^exp`, pruning the term if the sum cancels.
    pub fn add_term(&mut self, exp: Vec<HalfInt>, c: BigRational) {
        assert_eq!(exp.len(), self.vars);
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp.clone()).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn monomial(vars: usize, exp: Vec<HalfInt>, c: BigRational) -> Self {
        let mut p = Self::zero(vars);
        p.add_term(exp, c);
        p
    }

    pub fn add(&self, rhs: &LaurentPoly) -> Result<LaurentPoly, PolyError> {
        self.check_vars(rhs)?;
        let mut out = self.clone();
        for (e, c) in rhs.terms.iter() {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &LaurentPoly) -> Result<LaurentPoly, PolyError> {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> LaurentPoly {
        let mut out = LaurentPoly::zero(self.vars);
        for (e, c) in self.terms.iter() {
            out.terms.insert(e.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> LaurentPoly {
        let mut out = LaurentPoly::zero(self.vars);
        if c.is_zero() {
            return out;
        }
        for (e, k) in self.terms.iter() {
            out.terms.insert(e.clone(), k * c);
        }
        out
    }

    fn check_vars(&self, rhs: &LaurentPoly) -> Result<(), PolyError> {
        if self.vars != rhs.vars {
            return Err(PolyError::VarMismatch { left: self.vars, right: rhs.vars });
        }
        Ok(())
    }

    /// Exact product; zero terms pruned.
    pub fn mul(&self, rhs: &LaurentPoly) -> Result<LaurentPoly, PolyError> {
        self.check_vars(rhs)?;
        let mut out = LaurentPoly::zero(self.vars);
        for (e1, c1) in self.terms.iter() {
            for (e2, c2) in rhs.terms.iter() {
                let exp: Vec<HalfInt> =
                    e1.iter().zip(e2.iter()).map(|(a, b)| *a + *b).collect();
                out.add_term(exp, c1 * c2);
            }
        }
        Ok(out)
    }

    /// One-variable substitution t -> t^2 (doubles every exponent).
    pub fn substitute_square(&self) -> LaurentPoly {
        assert_eq!(self.vars, 1);
        let mut out = LaurentPoly::zero(1);
        for (e, c) in self.terms.iter() {
            out.terms.insert(vec![HalfInt(2 * e[0].0)], c.clone());
        }
        out
    }

    /// Collapses a two-variable polynomial along t1 = t2 = t.
    pub fn collapse_diagonal(&self) -> LaurentPoly {
        assert_eq!(self.vars, 2);
        let mut out = LaurentPoly::zero(1);
        for (e, c) in self.terms.iter() {
            out.add_term(vec![e[0] + e[1]], c.clone());
        }
        out
    }

    /// Sum of coefficients, i.e. evaluation at every variable = 1.
    pub fn eval_at_one(&self) -> BigRational {
        self.terms.values().fold(BigRational::zero(), |a, c| a + c)
    }

    /// True when every exponent is an odd integer (one variable).
    pub fn is_odd_poly(&self) -> bool {
        assert_eq!(self.vars, 1);
        self.terms
            .keys()
            .all(|e| e[0].is_integer() && e[0].as_int().unwrap().rem_euclid(2) == 1)
    }

    /// True when p(1/t) = -p(t), i.e. only t^k - t^-k combinations appear.
    pub fn is_antisymmetric(&self) -> bool {
        assert_eq!(self.vars, 1);
        self.terms.iter().all(|(e, c)| {
            let me = vec![-e[0]];
            self.coeff(&me) == -c.clone()
        })
    }

    /// Expands (t - 1/t)^k exactly via the binomial theorem.
    pub fn u_power(k: u32) -> LaurentPoly {
        let mut out = LaurentPoly::zero(1);
        let mut binom = BigInt::one();
        for j in 0..=k {
            // binom = C(k, j)
            let sign = if j % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            out.add_term(
                vec![HalfInt::from_int(k as i64 - 2 * j as i64)],
                BigRational::from_integer(&sign * &binom),
            );
            binom = &binom * BigInt::from((k - j) as i64) / BigInt::from((j + 1) as i64);
        }
        out
    }

    /// Rewrites an antisymmetric polynomial in t as a polynomial in
    /// u = t - 1/t, by repeatedly eliminating the top surviving degree
    /// with the binomial expansion of u^k. The output is returned in the
    /// u variable; a nonzero residual is an error carrying its rendering.
    pub fn rewrite_in_z(&self) -> Result<LaurentPoly, PolyError> {
        assert_eq!(self.vars, 1);
        let mut rem = self.clone();
        let mut out = LaurentPoly::zero(1);
        loop {
            let top = match rem.terms.keys().next_back() {
                None => return Ok(out),
                Some(e) => e[0],
            };
            let k = match top.as_int() {
                Some(k) if k > 0 => k,
                // degree <= 0 with terms left cannot be in the image
                _ => return Err(PolyError::NotInImage(rem.render(&["t"]))),
            };
            let c = rem.coeff(&[top]);
            let uk = Self::u_power(k as u32);
            rem = rem.sub(&uk.scale(&c)).unwrap();
            out.add_term(vec![HalfInt::from_int(k)], c);
            if rem.terms.keys().next_back().map(|e| e[0]) >= Some(top) {
                // degree must strictly drop; defensive guard against loops
                return Err(PolyError::NotInImage(rem.render(&["t"])));
            }
        }
    }

    /// Substitutes u = t - 1/t into a u-polynomial (test oracle direction).
    pub fn substitute_u(&self) -> LaurentPoly {
        assert_eq!(self.vars, 1);
        let mut out = LaurentPoly::zero(1);
        for (e, c) in self.terms.iter() {
            let k = e[0].as_int().expect("u-polynomial with non-integer exponent");
            assert!(k >= 0, "u-polynomial with negative exponent");
            out = out.add(&Self::u_power(k as u32).scale(c)).unwrap();
        }
        out
    }

    /// Canonical text rendering: terms sorted by descending exponent,
    /// half-integer exponents printed as fractions ("t^{3/2}").
    pub fn render(&self, var_names: &[&str]) -> String {
        assert_eq!(var_names.len(), self.vars);
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let mag = c.abs();
            if c.is_negative() {
                s.push_str(if i == 0 { "-" } else { " - " });
            } else if i > 0 {
                s.push_str(" + ");
            }
            let mono: Vec<String> = e
                .iter()
                .zip(var_names.iter())
                .filter(|(exp, _)| **exp != HalfInt::ZERO)
                .map(|(exp, name)| {
                    if *exp == HalfInt::from_int(1) {
                        name.to_string()
                    } else {
                        format!("{}^{{{}}}", name, exp)
                    }
                })
                .collect();
            if mono.is_empty() {
                s.push_str(&format_rat(&mag));
            } else {
                if !mag.is_one() {
                    s.push_str(&format_rat(&mag));
                    s.push(' ');
                }
                s.push_str(&mono.join(" "));
            }
        }
        s
    }
}

fn format_rat(q: &BigRational) -> String {
    if q.denom() == &BigInt::one() {
        format!("{}", q.numer())
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::scalar::rat_int;

    fn one_var(terms: &[(i64, i64)]) -> LaurentPoly {
        // (doubled exponent, coefficient)
        let mut p = LaurentPoly::zero(1);
        for (e, c) in terms {
            p.add_term(vec![HalfInt::from_doubled(*e)], rat_int(*c));
        }
        p
    }

    #[test]
    fn mul_identity() {
        let p = one_var(&[(3, 2), (-1, -1)]);
        assert_eq!(p.mul(&LaurentPoly::one(1)).unwrap(), p);
    }

    #[test]
    fn mul_two_term_product() {
        // (t^{-1/2} - t^{1/2}) * t^{1/2} = 1 - t
        let a = one_var(&[(-1, 1), (1, -1)]);
        let b = one_var(&[(1, 1)]);
        let prod = a.mul(&b).unwrap();
        assert_eq!(prod, one_var(&[(0, 1), (2, -1)]));
    }

    #[test]
    fn mul_var_mismatch() {
        let a = LaurentPoly::one(1);
        let b = LaurentPoly::one(2);
        assert!(matches!(a.mul(&b), Err(PolyError::VarMismatch { .. })));
    }

    #[test]
    fn paper_t28_l5_product() {
        // (t^-1 - t)(-t^-12 + 2t^-10 - t^-8 + 2t^-2 - 4 + 2t^2 - t^8 + 2t^10 - t^12),
        // expanded by the binomial oracle and frozen here.
        let a = one_var(&[(-2, 1), (2, -1)]);
        let b = one_var(&[
            (-24, -1),
            (-20, 2),
            (-16, -1),
            (-4, 2),
            (0, -4),
            (4, 2),
            (16, -1),
            (20, 2),
            (24, -1),
        ]);
        let expect = one_var(&[
            (26, 1),
            (22, -3),
            (18, 3),
            (14, -1),
            (6, -2),
            (2, 6),
            (-2, -6),
            (-6, 2),
            (-14, 1),
            (-18, -3),
            (-22, 3),
            (-26, -1),
        ]);
        assert_eq!(a.mul(&b).unwrap(), expect);
    }

    #[test]
    fn rewrite_degree_one() {
        let p = one_var(&[(2, 1), (-2, -1)]); // t - 1/t
        let u = p.rewrite_in_z().unwrap();
        assert_eq!(u, one_var(&[(2, 1)]));
    }

    #[test]
    fn rewrite_t28_l5() {
        let p = one_var(&[
            (26, 1),
            (-26, -1),
            (22, -3),
            (-22, 3),
            (18, 3),
            (-18, -3),
            (14, -1),
            (-14, 1),
            (6, -2),
            (-6, 2),
            (2, 6),
            (-2, -6),
        ]);
        let u = p.rewrite_in_z().unwrap();
        // nabla(u) = u^13 + 10u^11 + 35u^9 + 50u^7 + 25u^5
        let expect = one_var(&[(26, 1), (22, 10), (18, 35), (14, 50), (10, 25)]);
        assert_eq!(u, expect);
        assert_eq!(u.substitute_u(), p);
    }

    #[test]
    fn rewrite_t28_l4_confirms_paper_value() {
        // -t^9 + t^-9 + 3t^7 - 3t^-7 - 3t^5 + 3t^-5 + 3t^3 - 3t^-3 - 6t + 6t^-1
        let p = one_var(&[
            (18, -1),
            (-18, 1),
            (14, 3),
            (-14, -3),
            (10, -3),
            (-10, 3),
            (6, 3),
            (-6, -3),
            (2, -6),
            (-2, 6),
        ]);
        let u = p.rewrite_in_z().unwrap();
        let expect = one_var(&[(18, -1), (14, -6), (10, -9)]);
        assert_eq!(u, expect, "binomial oracle disagrees with printed -u^9-6u^7-9u^5");
    }

    #[test]
    fn rewrite_rejects_non_image() {
        let p = one_var(&[(2, 1), (-2, 1)]); // symmetric, not antisymmetric
        assert!(!p.is_antisymmetric());
        assert!(matches!(p.rewrite_in_z(), Err(PolyError::NotInImage(_))));
    }

    #[test]
    fn rewrite_roundtrip_random_odd() {
        let mut rng = crate::rng::Rng::new(0x5eed);
        for _ in 0..200 {
            let mut q = LaurentPoly::zero(1);
            for k in 1..=6i64 {
                if k % 2 == 1 {
                    let c = rng.range(-4, 5);
                    q.add_term(vec![HalfInt::from_int(k)], rat_int(c));
                }
            }
            let p = q.substitute_u();
            assert!(p.is_antisymmetric());
            assert_eq!(p.rewrite_in_z().unwrap(), q);
        }
    }

    #[test]
    fn mul_commutative_associative_random() {
        let mut rng = crate::rng::Rng::new(42);
        for _ in 0..50 {
            let mut ps = Vec::new();
            for _ in 0..3 {
                let mut p = LaurentPoly::zero(1);
                for _ in 0..4 {
                    p.add_term(
                        vec![HalfInt::from_doubled(rng.range(-6, 7))],
                        rat_int(rng.range(-3, 4)),
                    );
                }
                ps.push(p);
            }
            let (a, b, c) = (&ps[0], &ps[1], &ps[2]);
            assert_eq!(a.mul(b).unwrap(), b.mul(a).unwrap());
            assert_eq!(
                a.mul(b).unwrap().mul(c).unwrap(),
                a.mul(&b.mul(c).unwrap()).unwrap()
            );
            assert!(a.mul(&LaurentPoly::zero(1)).unwrap().is_zero());
        }
    }

    #[test]
    fn rendering_canonical() {
        let p = one_var(&[(3, 1), (0, -2), (-4, 1)]);
        assert_eq!(p.render(&["t"]), "t^{3/2} - 2 + t^{-2}");
        let mut q = LaurentPoly::zero(2);
        q.add_term(vec![HalfInt::from_int(1), HalfInt::from_int(-1)], rat_int(3));
        assert_eq!(q.render(&["t1", "t2"]), "3 t1 t2^{-1}");
        assert_eq!(LaurentPoly::zero(1).render(&["u"]), "0");
    }
}

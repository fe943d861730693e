use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Coefficient field of a complex: GF(2) or the rationals.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum FieldKind {
    GF2,
    Q,
}

impl fmt::Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldKind::GF2 => write!(f, "GF2"),
            FieldKind::Q => write!(f, "Q"),
        }
    }
}

/// An exact scalar: a GF(2) bit or an arbitrary-precision rational.
///
/// `BigRational` keeps itself in lowest terms with positive denominator,
/// which is exactly the stored-form invariant we need.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum FieldScalar {
    F2(u8),
    Q(BigRational),
}

impl FieldScalar {
    pub fn zero(kind: FieldKind) -> Self {
        match kind {
            FieldKind::GF2 => FieldScalar::F2(0),
            FieldKind::Q => FieldScalar::Q(BigRational::zero()),
        }
    }

    pub fn one(kind: FieldKind) -> Self {
        match kind {
            FieldKind::GF2 => FieldScalar::F2(1),
            FieldKind::Q => FieldScalar::Q(BigRational::one()),
        }
    }

    pub fn from_int(kind: FieldKind, n: i64) -> Self {
        match kind {
            FieldKind::GF2 => FieldScalar::F2((n.rem_euclid(2)) as u8),
            FieldKind::Q => FieldScalar::Q(BigRational::from_integer(BigInt::from(n))),
        }
    }

    pub fn kind(&self) -> FieldKind {
        match self {
            FieldScalar::F2(_) => FieldKind::GF2,
            FieldScalar::Q(_) => FieldKind::Q,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldScalar::F2(b) => *b == 0,
            FieldScalar::Q(q) => q.is_zero(),
        }
    }

    pub fn add(&self, rhs: &FieldScalar) -> FieldScalar {
        match (self, rhs) {
            (FieldScalar::F2(a), FieldScalar::F2(b)) => FieldScalar::F2((a + b) % 2),
            (FieldScalar::Q(a), FieldScalar::Q(b)) => FieldScalar::Q(a + b),
            _ => panic!("field mismatch in scalar addition"),
        }
    }

    pub fn sub(&self, rhs: &FieldScalar) -> FieldScalar {
        match (self, rhs) {
            (FieldScalar::F2(a), FieldScalar::F2(b)) => FieldScalar::F2((a + b) % 2),
            (FieldScalar::Q(a), FieldScalar::Q(b)) => FieldScalar::Q(a - b),
            _ => panic!("field mismatch in scalar subtraction"),
        }
    }

    pub fn mul(&self, rhs: &FieldScalar) -> FieldScalar {
        match (self, rhs) {
            (FieldScalar::F2(a), FieldScalar::F2(b)) => FieldScalar::F2(a * b),
            (FieldScalar::Q(a), FieldScalar::Q(b)) => FieldScalar::Q(a * b),
            _ => panic!("field mismatch in scalar multiplication"),
        }
    }

    pub fn neg(&self) -> FieldScalar {
        match self {
            FieldScalar::F2(a) => FieldScalar::F2(*a),
            FieldScalar::Q(a) => FieldScalar::Q(-a),
        }
    }

    pub fn inv(&self) -> FieldScalar {
        match self {
            FieldScalar::F2(1) => FieldScalar::F2(1),
            FieldScalar::F2(_) => panic!("inverse of zero in GF(2)"),
            FieldScalar::Q(a) => {
                assert!(!a.is_zero(), "inverse of zero rational");
                FieldScalar::Q(a.recip())
            }
        }
    }

    /// Parses "3", "-3/2" style decimal strings into the given field.
    pub fn parse(kind: FieldKind, s: &str) -> Result<FieldScalar, String> {
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n, d),
            None => (s, "1"),
        };
        let n: BigInt = num.parse().map_err(|_| format!("bad numerator {:?}", num))?;
        let d: BigInt = den.parse().map_err(|_| format!("bad denominator {:?}", den))?;
        if d.is_zero() {
            return Err("zero denominator".to_string());
        }
        let q = BigRational::new(n, d);
        Ok(match kind {
            FieldKind::Q => FieldScalar::Q(q),
            FieldKind::GF2 => {
                if !q.denom().is_odd_int() {
                    return Err("even denominator has no GF(2) image".to_string());
                }
                let r = q.numer().mod_floor_2() * q.denom().mod_floor_2();
                FieldScalar::F2(r)
            }
        })
    }
}

trait Mod2 {
    fn mod_floor_2(&self) -> u8;
    fn is_odd_int(&self) -> bool;
}

impl Mod2 for BigInt {
    fn mod_floor_2(&self) -> u8 {
        if (self % BigInt::from(2)).is_zero() {
            0
        } else {
            1
        }
    }
    fn is_odd_int(&self) -> bool {
        self.mod_floor_2() == 1
    }
}

impl fmt::Display for FieldScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldScalar::F2(b) => write!(f, "{}", b),
            FieldScalar::Q(q) => {
                if q.denom() == &BigInt::one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
        }
    }
}

/// Convenience constructor for exact rationals.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn rat_is_negative(q: &BigRational) -> bool {
    q.is_negative()
}

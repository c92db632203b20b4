use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// The ground field: the rationals or a prime field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Rationals,
    Prime(u32),
}

impl Field {
    /// Prime field of characteristic `p`; rejects composite or oversized `p`.
    pub fn prime(p: u64) -> Result<Field> {
        if p < 2 || p >= (1 << 31) || !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not a prime below 2^31")));
        }
        Ok(Field::Prime(p as u32))
    }

    pub fn characteristic(&self) -> u32 {
        match self {
            Field::Rationals => 0,
            Field::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> Scalar {
        self.int(0)
    }

    pub fn one(&self) -> Scalar {
        self.int(1)
    }

    pub fn int(&self, n: i64) -> Scalar {
        match self {
            Field::Rationals => Scalar::Small(n, 1),
            Field::Prime(p) => Scalar::Mod(n.rem_euclid(*p as i64) as u32, *p),
        }
    }

    pub fn frac(&self, n: i64, d: i64) -> Result<Scalar> {
        if d == 0 {
            return Err(Error::Parse(format!("zero denominator in {n}/{d}")));
        }
        let den = self.int(d);
        let inv = den
            .inv()
            .ok_or_else(|| Error::Parse(format!("denominator {d} vanishes in {self}")))?;
        Ok(&self.int(n) * &inv)
    }

    /// Parses `"n"`, `"-n"` or `"n/d"` with arbitrarily large integers.
    pub fn parse(&self, s: &str) -> Result<Scalar> {
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (s, "1"),
        };
        let n: BigInt = num
            .parse()
            .map_err(|_| Error::Parse(format!("bad scalar {s:?}")))?;
        let d: BigInt = den
            .parse()
            .map_err(|_| Error::Parse(format!("bad scalar {s:?}")))?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        match self {
            Field::Rationals => Ok(Scalar::from_big(BigRational::new(n, d))),
            Field::Prime(p) => {
                let pb = BigInt::from(*p);
                let nm = n.mod_floor(&pb).to_u32().unwrap();
                let dm = d.mod_floor(&pb).to_u32().unwrap();
                let dinv = Scalar::Mod(dm, *p)
                    .inv()
                    .ok_or_else(|| Error::Parse(format!("denominator of {s:?} vanishes mod {p}")))?;
                Ok(&Scalar::Mod(nm, *p) * &dinv)
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "q"),
            Field::Prime(p) => write!(f, "fp:{p}"),
        }
    }
}

impl std::str::FromStr for Field {
    type Err = Error;
    fn from_str(s: &str) -> Result<Field> {
        match s.trim() {
            "q" | "Q" => Ok(Field::Rationals),
            other => {
                let p = other
                    .strip_prefix("fp:")
                    .ok_or_else(|| Error::InvalidField(format!("unknown field {other:?}")))?;
                let p: u64 = p
                    .parse()
                    .map_err(|_| Error::InvalidField(format!("bad characteristic {p:?}")))?;
                Field::prime(p)
            }
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// An exact field element. Rationals stay in machine words until they overflow.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    /// Normalized fraction: positive denominator, coprime parts.
    Small(i64, i64),
    /// Only used when the value does not fit `Small`.
    Big(Box<BigRational>),
    /// Residue and modulus.
    Mod(u32, u32),
}

impl Scalar {
    fn from_i128(n: i128, d: i128) -> Scalar {
        let (mut n, mut d) = if d < 0 { (-n, -d) } else { (n, d) };
        if n == 0 {
            return Scalar::Small(0, 1);
        }
        let g = n.gcd(&d);
        if g != 1 {
            n /= g;
            d /= g;
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(a), Ok(b)) => Scalar::Small(a, b),
            _ => Scalar::Big(Box::new(BigRational::new_raw(n.into(), d.into()))),
        }
    }

    fn from_big(r: BigRational) -> Scalar {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(a), Some(b)) => Scalar::Small(a, b),
            _ => Scalar::Big(Box::new(r)),
        }
    }

    fn to_big(&self) -> BigRational {
        match self {
            Scalar::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Scalar::Big(b) => (**b).clone(),
            Scalar::Mod(..) => panic!("mixed fields"),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Scalar::Small(0, _) | Scalar::Mod(0, _))
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Scalar::Small(1, 1) | Scalar::Mod(1, _))
    }

    pub fn inv(&self) -> Option<Scalar> {
        match self {
            Scalar::Small(0, _) | Scalar::Mod(0, _) => None,
            Scalar::Small(n, d) => Some(Scalar::from_i128(*d as i128, *n as i128)),
            Scalar::Big(b) => Some(Scalar::from_big(b.recip())),
            Scalar::Mod(a, p) => {
                let (mut t, mut nt) = (0i64, 1i64);
                let (mut r, mut nr) = (*p as i64, *a as i64);
                while nr != 0 {
                    let q = r / nr;
                    (t, nt) = (nt, t - q * nt);
                    (r, nr) = (nr, r - q * nr);
                }
                Some(Scalar::Mod(t.rem_euclid(*p as i64) as u32, *p))
            }
        }
    }

    pub fn field(&self) -> Field {
        match self {
            Scalar::Mod(_, p) => Field::Prime(*p),
            _ => Field::Rationals,
        }
    }

    /// Canonical textual form: `n`, `n/d`, or the residue.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Small(n, 1) => write!(f, "{n}"),
            Scalar::Small(n, d) => write!(f, "{n}/{d}"),
            Scalar::Big(b) => {
                if b.denom().is_one() {
                    write!(f, "{}", b.numer())
                } else {
                    write!(f, "{}/{}", b.numer(), b.denom())
                }
            }
            Scalar::Mod(a, _) => write!(f, "{a}"),
        }
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Small(0, _), x) | (x, Scalar::Small(0, _)) => x.clone(),
            (Scalar::Small(a, b), Scalar::Small(c, d)) => {
                if b == d {
                    Scalar::from_i128(*a as i128 + *c as i128, *b as i128)
                } else {
                    Scalar::from_i128(
                        *a as i128 * *d as i128 + *c as i128 * *b as i128,
                        *b as i128 * *d as i128,
                    )
                }
            }
            (Scalar::Mod(a, p), Scalar::Mod(b, _)) => {
                Scalar::Mod(((*a as u64 + *b as u64) % *p as u64) as u32, *p)
            }
            (x, y) => Scalar::from_big(x.to_big() + y.to_big()),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        self + &(-o)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Small(0, _), _) | (_, Scalar::Small(0, _)) => Scalar::Small(0, 1),
            (Scalar::Small(1, 1), x) | (x, Scalar::Small(1, 1)) => x.clone(),
            (Scalar::Small(a, b), Scalar::Small(c, d)) => {
                let g1 = (*a as i128).gcd(&(*d as i128));
                let g2 = (*c as i128).gcd(&(*b as i128));
                Scalar::from_i128(
                    (*a as i128 / g1) * (*c as i128 / g2),
                    (*b as i128 / g2) * (*d as i128 / g1),
                )
            }
            (Scalar::Mod(a, p), Scalar::Mod(b, _)) => {
                Scalar::Mod(((*a as u64 * *b as u64) % *p as u64) as u32, *p)
            }
            (x, y) => Scalar::from_big(x.to_big() * y.to_big()),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Small(n, d) => match n.checked_neg() {
                Some(m) => Scalar::Small(m, *d),
                None => Scalar::from_i128(-(*n as i128), *d as i128),
            },
            Scalar::Big(b) => Scalar::from_big(-(**b).clone()),
            Scalar::Mod(0, p) => Scalar::Mod(0, *p),
            Scalar::Mod(a, p) => Scalar::Mod(p - a, *p),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, o: Scalar) -> Scalar {
        &self + &o
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, o: Scalar) -> Scalar {
        &self - &o
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, o: Scalar) -> Scalar {
        &self * &o
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_and_print() {
        let q = Field::Rationals;
        assert_eq!(q.parse("6/-4").unwrap().to_string(), "-3/2");
        assert_eq!(q.parse(" 12 ").unwrap(), q.int(12));
        assert!(q.parse("1/0").is_err());
        let f7 = Field::prime(7).unwrap();
        assert_eq!(f7.parse("3/2").unwrap(), f7.int(5));
        assert!(f7.parse("1/7").is_err());
        assert!(Field::prime(9).is_err());
        assert_eq!("fp:5".parse::<Field>().unwrap(), Field::Prime(5));
    }

    #[test]
    fn overflow_promotes_to_big() {
        let q = Field::Rationals;
        let big = q.int(i64::MAX);
        let sq = &big * &big;
        assert!(matches!(sq, Scalar::Big(_)));
        let back = &sq * &big.inv().unwrap();
        assert_eq!(back, big);
        assert!(matches!(back, Scalar::Small(..)));
        assert_eq!(-&q.int(i64::MIN), &q.int(0) - &q.int(i64::MIN));
    }

    proptest! {
        #[test]
        fn field_axioms_rational(a in -1000i64..1000, b in 1i64..1000, c in -1000i64..1000, d in 1i64..1000) {
            let q = Field::Rationals;
            let x = q.frac(a, b).unwrap();
            let y = q.frac(c, d).unwrap();
            prop_assert_eq!(&(&x + &y) - &y, x.clone());
            prop_assert_eq!(&x * &y, &y * &x);
            if !x.is_zero() {
                prop_assert!((&x * &x.inv().unwrap()).is_one());
            }
        }

        #[test]
        fn field_axioms_prime(a in 0i64..10_007, b in 0i64..10_007) {
            let f = Field::prime(10_007).unwrap();
            let (x, y) = (f.int(a), f.int(b));
            prop_assert_eq!(&(&x - &y) + &y, x.clone());
            if !x.is_zero() {
                prop_assert!((&x * &x.inv().unwrap()).is_one());
            }
        }
    }
}

//! Exact coefficient rings: ℤ, ℚ, ℤ[1/2] and ℤ/p. All are Euclidean, which
//! is all the Smith normal form needs.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub trait Ring:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// Short tag used in reports, e.g. `Z` or `Zp:7`.
    fn name() -> String;

    fn from_i64(n: i64) -> Self;

    fn is_field() -> bool;

    fn is_unit(&self) -> bool;

    fn inverse(&self) -> Option<Self>;

    /// Euclidean division: `a = q*b + r` with `r = 0` or `norm(r) < norm(b)`.
    fn div_rem(&self, other: &Self) -> (Self, Self);

    /// Euclidean size, zero exactly for zero.
    fn norm(&self) -> BigUint;

    /// A unit `u` such that `u * self` is the preferred associate.
    fn canonical_unit(&self) -> Self;

    /// Label of a non-unit invariant factor as a positive integer, if the ring
    /// has torsion at all.
    fn torsion_label(&self) -> Option<u64>;

    fn is_divisor_of(&self, other: &Self) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.div_rem(self).1.is_zero()
    }
}

impl Ring for BigInt {
    fn name() -> String {
        "Z".into()
    }

    fn from_i64(n: i64) -> Self {
        BigInt::from(n)
    }

    fn is_field() -> bool {
        false
    }

    fn is_unit(&self) -> bool {
        self.abs().is_one()
    }

    fn inverse(&self) -> Option<Self> {
        self.is_unit().then(|| self.clone())
    }

    fn div_rem(&self, other: &Self) -> (Self, Self) {
        Integer::div_rem(self, other)
    }

    fn norm(&self) -> BigUint {
        self.magnitude().clone()
    }

    fn canonical_unit(&self) -> Self {
        if self.sign() == Sign::Minus {
            -BigInt::one()
        } else {
            BigInt::one()
        }
    }

    fn torsion_label(&self) -> Option<u64> {
        Some(self.magnitude().to_u64().expect("torsion coefficient exceeds u64"))
    }
}

impl Ring for BigRational {
    fn name() -> String {
        "Q".into()
    }

    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn is_field() -> bool {
        true
    }

    fn is_unit(&self) -> bool {
        !self.is_zero()
    }

    fn inverse(&self) -> Option<Self> {
        (!self.is_zero()).then(|| self.recip())
    }

    fn div_rem(&self, other: &Self) -> (Self, Self) {
        (self / other, BigRational::zero())
    }

    fn norm(&self) -> BigUint {
        if self.is_zero() {
            BigUint::zero()
        } else {
            BigUint::one()
        }
    }

    fn canonical_unit(&self) -> Self {
        self.inverse().unwrap_or_else(BigRational::one)
    }

    fn torsion_label(&self) -> Option<u64> {
        None
    }
}

/// ℤ with 2 inverted: values `n / 2^k` stored with `n` odd whenever `k > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Zhalf {
    num: BigInt,
    exp: u32,
}

impl Zhalf {
    pub fn new(num: BigInt, exp: u32) -> Self {
        let mut z = Zhalf { num, exp };
        z.normalize();
        z
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.exp = 0;
            return;
        }
        let tz = self.num.trailing_zeros().unwrap_or(0).min(self.exp as u64) as u32;
        self.num >>= tz;
        self.exp -= tz;
    }

    fn with_exp(&self, e: u32) -> BigInt {
        &self.num << (e - self.exp)
    }

    /// Odd part of the numerator, which determines the associate class.
    fn odd_part(&self) -> BigInt {
        if self.num.is_zero() {
            return BigInt::zero();
        }
        let tz = self.num.trailing_zeros().unwrap_or(0);
        &self.num >> tz
    }
}

impl fmt::Display for Zhalf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/2^{}", self.num, self.exp)
        }
    }
}

impl Add for Zhalf {
    type Output = Zhalf;
    fn add(self, o: Zhalf) -> Zhalf {
        let e = self.exp.max(o.exp);
        Zhalf::new(self.with_exp(e) + o.with_exp(e), e)
    }
}

impl Sub for Zhalf {
    type Output = Zhalf;
    fn sub(self, o: Zhalf) -> Zhalf {
        self + (-o)
    }
}

impl Mul for Zhalf {
    type Output = Zhalf;
    fn mul(self, o: Zhalf) -> Zhalf {
        Zhalf::new(self.num * o.num, self.exp + o.exp)
    }
}

impl Neg for Zhalf {
    type Output = Zhalf;
    fn neg(self) -> Zhalf {
        Zhalf { num: -self.num, exp: self.exp }
    }
}

impl Zero for Zhalf {
    fn zero() -> Self {
        Zhalf { num: BigInt::zero(), exp: 0 }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for Zhalf {
    fn one() -> Self {
        Zhalf { num: BigInt::one(), exp: 0 }
    }
}

impl Ring for Zhalf {
    fn name() -> String {
        "Zhalf".into()
    }

    fn from_i64(n: i64) -> Self {
        Zhalf::new(BigInt::from(n), 0)
    }

    fn is_field() -> bool {
        false
    }

    fn is_unit(&self) -> bool {
        self.odd_part().abs().is_one()
    }

    fn inverse(&self) -> Option<Self> {
        if !self.is_unit() {
            return None;
        }
        // self = ±2^j / 2^exp
        let j = self.num.trailing_zeros().unwrap_or(0) as u32;
        let sign = if self.num.is_negative() { -BigInt::one() } else { BigInt::one() };
        Some(Zhalf::new(sign << self.exp, j))
    }

    fn div_rem(&self, other: &Self) -> (Self, Self) {
        // a = u a', b = v b' with units u, v and odd integers a', b'
        let (ao, bo) = (self.odd_part(), other.odd_part());
        if ao.is_zero() {
            return (Zhalf::zero(), Zhalf::zero());
        }
        let (q, r) = Integer::div_rem(&ao, &bo);
        let unit_self = unit_of(self, &ao);
        let unit_other = unit_of(other, &bo);
        let vinv = unit_other.inverse().expect("unit");
        let quot = unit_self.clone() * vinv * Zhalf::new(q, 0);
        let rem = unit_self * Zhalf::new(r, 0);
        (quot, rem)
    }

    fn norm(&self) -> BigUint {
        self.odd_part().magnitude().clone()
    }

    fn canonical_unit(&self) -> Self {
        if self.is_zero() {
            return Zhalf::one();
        }
        let o = self.odd_part();
        let u = unit_of(self, &o);
        let inv = u.inverse().expect("unit");
        if o.is_negative() {
            -inv
        } else {
            inv
        }
    }

    fn torsion_label(&self) -> Option<u64> {
        Some(self.odd_part().magnitude().to_u64().expect("torsion coefficient exceeds u64"))
    }
}

/// The unit `x / odd` for `x` with odd part `odd`.
fn unit_of(x: &Zhalf, odd: &BigInt) -> Zhalf {
    if x.is_zero() {
        return Zhalf::one();
    }
    let two_pow = &x.num / odd;
    Zhalf::new(two_pow, x.exp)
}

/// Integers modulo a prime `P`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Zp<const P: u64>(u64);

impl<const P: u64> Zp<P> {
    pub fn new(v: i64) -> Self {
        Zp(v.rem_euclid(P as i64) as u64)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Zp(1 % P);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }
}

impl<const P: u64> fmt::Display for Zp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Add for Zp<P> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Zp((self.0 + o.0) % P)
    }
}

impl<const P: u64> Sub for Zp<P> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Zp((self.0 + P - o.0) % P)
    }
}

impl<const P: u64> Mul for Zp<P> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Zp(((self.0 as u128 * o.0 as u128) % P as u128) as u64)
    }
}

impl<const P: u64> Neg for Zp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Zp((P - self.0) % P)
    }
}

impl<const P: u64> Zero for Zp<P> {
    fn zero() -> Self {
        Zp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u64> One for Zp<P> {
    fn one() -> Self {
        Zp(1 % P)
    }
}

impl<const P: u64> Ring for Zp<P> {
    fn name() -> String {
        format!("Zp:{P}")
    }

    fn from_i64(n: i64) -> Self {
        Zp::new(n)
    }

    fn is_field() -> bool {
        true
    }

    fn is_unit(&self) -> bool {
        self.0 != 0
    }

    fn inverse(&self) -> Option<Self> {
        (self.0 != 0).then(|| self.pow(P - 2))
    }

    fn div_rem(&self, other: &Self) -> (Self, Self) {
        (*self * other.inverse().expect("division by zero"), Zp(0))
    }

    fn norm(&self) -> BigUint {
        BigUint::from((self.0 != 0) as u8)
    }

    fn canonical_unit(&self) -> Self {
        self.inverse().unwrap_or(Zp(1 % P))
    }

    fn torsion_label(&self) -> Option<u64> {
        None
    }
}

/// Primes `p` for which `Zp:<p>` can be chosen at run time.
pub const SUPPORTED_PRIMES: [u64; 18] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 101, 1009, 65521];

/// Coefficient ring chosen at run time.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RingTag {
    Q,
    Z,
    Zhalf,
    Zp(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RingTagError {
    #[error("unknown ring {0:?}, expected Q, Z, Zhalf or Zp:<p>")]
    Unknown(String),
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("Zp:{0} is not supported, choose one of {SUPPORTED_PRIMES:?}")]
    Unsupported(u64),
}

impl RingTag {
    /// Whether 2 is invertible, as the Lee deformation assumes.
    pub fn inverts_two(self) -> bool {
        match self {
            RingTag::Q | RingTag::Zhalf => true,
            RingTag::Z => false,
            RingTag::Zp(p) => p != 2,
        }
    }
}

impl fmt::Display for RingTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingTag::Q => f.write_str("Q"),
            RingTag::Z => f.write_str("Z"),
            RingTag::Zhalf => f.write_str("Zhalf"),
            RingTag::Zp(p) => write!(f, "Zp:{p}"),
        }
    }
}

impl std::str::FromStr for RingTag {
    type Err = RingTagError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "Q" => Ok(RingTag::Q),
            "Z" => Ok(RingTag::Z),
            "Zhalf" => Ok(RingTag::Zhalf),
            _ => {
                let p: u64 = s
                    .strip_prefix("Zp:")
                    .and_then(|p| p.parse().ok())
                    .ok_or_else(|| RingTagError::Unknown(s.to_string()))?;
                if !is_prime(p) {
                    Err(RingTagError::NotPrime(p))
                } else if !SUPPORTED_PRIMES.contains(&p) {
                    Err(RingTagError::Unsupported(p))
                } else {
                    Ok(RingTag::Zp(p))
                }
            }
        }
    }
}

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

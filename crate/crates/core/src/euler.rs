//! Laurent polynomials in `q` and the graded Euler characteristic.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg};
use std::str::FromStr;

use thiserror::Error;

use crate::ring::Ring;
use crate::tqft::ChainComplex;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EulerError {
    #[error("graded Euler characteristic needs t = 0, got t = {0}")]
    Deformed(i64),
    #[error("complex carries no quantum degrees")]
    Ungraded,
    #[error("cannot parse Laurent polynomial: {0}")]
    Parse(String),
}

/// Integer Laurent polynomial in `q`, stored sparsely.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Laurent(BTreeMap<i32, i64>);

impl Laurent {
    pub fn zero() -> Self {
        Laurent(BTreeMap::new())
    }

    pub fn monomial(coeff: i64, exp: i32) -> Self {
        let mut p = Laurent::zero();
        p.add_term(coeff, exp);
        p
    }

    pub fn add_term(&mut self, coeff: i64, exp: i32) {
        let c = self.0.entry(exp).or_insert(0);
        *c += coeff;
        if *c == 0 {
            self.0.remove(&exp);
        }
    }

    pub fn coeff(&self, exp: i32) -> i64 {
        self.0.get(&exp).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Nonzero terms as `(exponent, coefficient)`, ascending.
    pub fn terms(&self) -> impl Iterator<Item = (i32, i64)> + '_ {
        self.0.iter().map(|(&e, &c)| (e, c))
    }

    /// Value at `q = 1`.
    pub fn at_one(&self) -> i64 {
        self.0.values().sum()
    }

    pub fn pow(&self, k: u32) -> Laurent {
        (0..k).fold(Laurent::monomial(1, 0), |acc, _| &acc * self)
    }
}

impl Add for &Laurent {
    type Output = Laurent;
    fn add(self, o: &Laurent) -> Laurent {
        let mut p = self.clone();
        for (e, c) in o.terms() {
            p.add_term(c, e);
        }
        p
    }
}

impl Mul for &Laurent {
    type Output = Laurent;
    fn mul(self, o: &Laurent) -> Laurent {
        let mut p = Laurent::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in o.terms() {
                p.add_term(c1 * c2, e1 + e2);
            }
        }
        p
    }
}

impl Neg for Laurent {
    type Output = Laurent;
    fn neg(self) -> Laurent {
        Laurent(self.0.into_iter().map(|(e, c)| (e, -c)).collect())
    }
}

impl fmt::Display for Laurent {
    /// Ascending exponents, e.g. `q^-1 + q` or `-2q^-3 + 1 - q^5`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms().enumerate() {
            let sign = if c < 0 { "-" } else { "+" };
            match (k, sign) {
                (0, "-") => write!(f, "-")?,
                (0, _) => {}
                _ => write!(f, " {sign} ")?,
            }
            let a = c.unsigned_abs();
            match e {
                0 => write!(f, "{a}")?,
                _ => {
                    if a != 1 {
                        write!(f, "{a}")?;
                    }
                    if e == 1 {
                        write!(f, "q")?;
                    } else {
                        write!(f, "q^{e}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl FromStr for Laurent {
    type Err = EulerError;

    fn from_str(s: &str) -> Result<Self, EulerError> {
        let err = || EulerError::Parse(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact == "0" {
            return Ok(Laurent::zero());
        }
        let mut p = Laurent::zero();
        let mut rest = compact.as_str();
        while !rest.is_empty() {
            let (neg, body) = match rest.as_bytes()[0] {
                b'-' => (true, &rest[1..]),
                b'+' => (false, &rest[1..]),
                _ => (false, rest),
            };
            // a term ends at the next sign that is not an exponent sign
            let end = body
                .char_indices()
                .skip(1)
                .find(|&(i, ch)| (ch == '+' || ch == '-') && !body[..i].ends_with('^'))
                .map_or(body.len(), |(i, _)| i);
            let term = &body[..end];
            rest = &body[end..];
            let (coeff, exp) = match term.find('q') {
                None => (term.parse::<i64>().map_err(|_| err())?, 0),
                Some(qpos) => {
                    let c = if qpos == 0 { 1 } else { term[..qpos].parse::<i64>().map_err(|_| err())? };
                    let tail = &term[qpos + 1..];
                    let e = if tail.is_empty() {
                        1
                    } else {
                        tail.strip_prefix('^').ok_or_else(err)?.parse::<i32>().map_err(|_| err())?
                    };
                    (c, e)
                }
            };
            p.add_term(if neg { -coeff } else { coeff }, exp);
        }
        Ok(p)
    }
}

/// `Σ_i (-1)^i qdim C^i` of a `t = 0` complex.
pub fn graded_euler<R: Ring>(cc: &ChainComplex<R>) -> Result<Laurent, EulerError> {
    if cc.t != 0 {
        return Err(EulerError::Deformed(cc.t));
    }
    let q = cc.qdegrees.as_ref().ok_or(EulerError::Ungraded)?;
    let mut p = Laurent::zero();
    for (i, degs) in cc.degrees().zip(q) {
        let sign = if i.rem_euclid(2) == 0 { 1 } else { -1 };
        for &e in degs {
            p.add_term(sign, e);
        }
    }
    Ok(p)
}

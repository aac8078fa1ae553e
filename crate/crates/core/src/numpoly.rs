//! Integer-valued numerical polynomials.
//!
//! A [`NumericalPolynomial`] is stored by its integer coordinates in the
//! basis `C(t+i, i)`, i = 0, 1, 2, …  Every polynomial that takes integer
//! values on all integers has unique integer coordinates in this basis, so
//! integer-valuedness is structural rather than checked per evaluation.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Generalized binomial coefficient `C(x, k)` for integer `x` (exact).
pub fn binomial(x: &BigInt, k: u32) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for j in 0..k {
        num *= x - BigInt::from(j);
        den *= BigInt::from(j + 1);
    }
    &num / &den
}

/// `C(n, k)` for machine integers (panics on negative `n`).
pub fn binomial_u(n: u32, k: u32) -> u64 {
    let b = binomial(&BigInt::from(n), k);
    u64::try_from(&b).expect("binomial fits in u64")
}

/// Dense univariate polynomial helpers over the rationals, used only for
/// basis conversion.  Coefficient lists are low-degree-first.
fn strip(mut v: Vec<BigRational>) -> Vec<BigRational> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn dense_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let zero = BigRational::zero();
    let v = (0..n)
        .map(|i| {
            let x = a.get(i).unwrap_or(&zero);
            let y = b.get(i).unwrap_or(&zero);
            x - y
        })
        .collect();
    strip(v)
}

fn dense_scale(a: &[BigRational], c: &BigRational) -> Vec<BigRational> {
    strip(a.iter().map(|x| x * c).collect())
}

/// Power-basis expansion of `Π_{j=1..k} (t + s_j) / j` for the given shifts.
fn product_of_linear(shifts: &[i64]) -> Vec<BigRational> {
    let mut out = vec![BigRational::one()];
    for (j, &s) in shifts.iter().enumerate() {
        // multiply by (t + s), divide by (j + 1)
        let mut next = vec![BigRational::zero(); out.len() + 1];
        let sq = BigRational::from_integer(BigInt::from(s));
        for (i, c) in out.iter().enumerate() {
            next[i + 1] += c;
            next[i] += c * &sq;
        }
        let div = BigRational::from_integer(BigInt::from(j as i64 + 1));
        out = strip(next.into_iter().map(|c| c / &div).collect());
    }
    out
}

/// Power-basis expansion of the basis element `C(t+i, i)`.
fn basis_power(i: u32) -> Vec<BigRational> {
    product_of_linear(&(1..=i as i64).collect::<Vec<_>>())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumericalPolynomial {
    /// `coords[i]` multiplies `C(t+i, i)`; no trailing zeros.
    coords: Vec<BigInt>,
}

impl NumericalPolynomial {
    pub fn new(mut coords: Vec<BigInt>) -> Self {
        while coords.last().is_some_and(|c| c.is_zero()) {
            coords.pop();
        }
        NumericalPolynomial { coords }
    }

    pub fn zero() -> Self {
        NumericalPolynomial { coords: Vec::new() }
    }

    pub fn constant(n: i64) -> Self {
        NumericalPolynomial::new(vec![BigInt::from(n)])
    }

    pub fn from_i64_coords(coords: &[i64]) -> Self {
        NumericalPolynomial::new(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn degree(&self) -> Option<u32> {
        if self.coords.is_empty() {
            None
        } else {
            Some(self.coords.len() as u32 - 1)
        }
    }

    /// Leading binomial coordinate (the one of highest index).
    pub fn leading(&self) -> Option<&BigInt> {
        self.coords.last()
    }

    pub fn eval(&self, t: &BigInt) -> BigInt {
        self.coords
            .iter()
            .enumerate()
            .map(|(i, c)| c * binomial(&(t + BigInt::from(i as u32)), i as u32))
            .sum()
    }

    pub fn eval_i64(&self, t: i64) -> BigInt {
        self.eval(&BigInt::from(t))
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coords.len().max(other.coords.len());
        let zero = BigInt::zero();
        let coords = (0..n)
            .map(|i| {
                self.coords.get(i).unwrap_or(&zero) + other.coords.get(i).unwrap_or(&zero)
            })
            .collect();
        NumericalPolynomial::new(coords)
    }

    pub fn neg(&self) -> Self {
        NumericalPolynomial { coords: self.coords.iter().map(|c| -c).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Converts a power-basis rational polynomial (low degree first) into
    /// binomial coordinates; errors when the result is not integer-valued.
    pub fn from_power_basis(coeffs: &[BigRational]) -> Result<Self> {
        let mut rem = strip(coeffs.to_vec());
        let deg = rem.len().saturating_sub(1);
        let mut coords = vec![BigInt::zero(); rem.len()];
        for i in (0..rem.len()).rev() {
            if rem.len() <= i || rem[i].is_zero() {
                continue;
            }
            // C(t+i, i) has leading coefficient 1/i!
            let mut fact = BigRational::one();
            for j in 1..=i as u64 {
                fact *= BigRational::from_integer(BigInt::from(j));
            }
            let ci = &rem[i] * &fact;
            if !ci.denom().is_one() {
                return Err(Error::Invalid(format!(
                    "polynomial is not integer-valued (coordinate {i} of degree-{deg} fit is {ci})"
                )));
            }
            coords[i] = ci.to_integer();
            rem = dense_sub(&rem, &dense_scale(&basis_power(i as u32), &ci));
        }
        if !rem.is_empty() {
            return Err(Error::Invalid("basis conversion left a remainder".into()));
        }
        Ok(NumericalPolynomial::new(coords))
    }

    /// Power-basis coefficients (low degree first), exact rationals.
    pub fn to_power_basis(&self) -> Vec<BigRational> {
        let mut out: Vec<BigRational> = Vec::new();
        for (i, c) in self.coords.iter().enumerate() {
            let term = dense_scale(&basis_power(i as u32), &BigRational::from_integer(c.clone()));
            let n = out.len().max(term.len());
            let zero = BigRational::zero();
            out = (0..n)
                .map(|k| {
                    let x = out.get(k).unwrap_or(&zero);
                    let y = term.get(k).unwrap_or(&zero);
                    x + y
                })
                .collect();
        }
        strip(out)
    }

    /// The shifted binomial `C(t + a - k, a)` as a numerical polynomial.
    pub fn shifted_binomial(a: u32, k: u32) -> Self {
        // Π_{j=1..a} (t + j - k) / j
        let shifts: Vec<i64> = (1..=a as i64).map(|j| j - k as i64).collect();
        let power = product_of_linear(&shifts);
        NumericalPolynomial::from_power_basis(&power)
            .expect("shifted binomials are integer-valued")
    }

    /// Renders the power-basis form with the given variable letter.
    pub fn display_power(&self, var: char) -> String {
        let pw = self.to_power_basis();
        if pw.is_empty() {
            return "0".to_string();
        }
        let mut parts: Vec<String> = Vec::new();
        for (i, c) in pw.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = if c.is_negative() { -c.clone() } else { c.clone() };
            let sign = if c.is_negative() { "-" } else { "+" };
            let coeff = if mag.denom().is_one() {
                format!("{}", mag.numer())
            } else {
                format!("{}/{}", mag.numer(), mag.denom())
            };
            let body = match i {
                0 => coeff,
                _ => {
                    let varpart = if i == 1 { var.to_string() } else { format!("{var}^{i}") };
                    if mag.is_one() {
                        varpart
                    } else {
                        format!("{coeff}*{varpart}")
                    }
                }
            };
            if parts.is_empty() {
                parts.push(if sign == "-" { format!("-{body}") } else { body });
            } else {
                parts.push(format!(" {sign} {body}"));
            }
        }
        parts.concat()
    }
}

impl fmt::Display for NumericalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_power('d'))
    }
}

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Rational;

/// Univariate polynomial with rational coefficients, lowest degree first and
/// no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Poly {
        while coeffs.last().is_some_and(Rational::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Poly {
        Poly { coeffs: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Interpolating polynomial through `(xs[i], ys[i])`, Newton form.
    pub fn interpolate(xs: &[Rational], ys: &[Rational]) -> Poly {
        assert_eq!(xs.len(), ys.len());
        let n = xs.len();
        let mut dd = ys.to_vec();
        for j in 1..n {
            for i in (j..n).rev() {
                dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - j]);
            }
        }
        // expand Newton form
        let mut out = vec![Rational::zero(); n.max(1)];
        for k in (0..n).rev() {
            // out = out * (x - xs[k]) + dd[k]
            let mut next = vec![Rational::zero(); out.len() + 1];
            for (i, c) in out.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= &(c * &xs[k]);
            }
            next[0] += &dd[k];
            next.truncate(n.max(1));
            out = next;
        }
        Poly::new(out)
    }

    fn lead(&self) -> &Rational {
        self.coeffs.last().expect("nonzero polynomial")
    }

    fn rem(&self, other: &Poly) -> Poly {
        let dv = other.degree().expect("division by zero polynomial");
        let mut r = self.coeffs.clone();
        let inv = other.lead().recip();
        while r.len() > dv && !r.is_empty() {
            let shift = r.len() - 1 - dv;
            let f = r.last().unwrap() * &inv;
            for (i, c) in other.coeffs.iter().enumerate() {
                r[shift + i].sub_mul(&f, c);
            }
            r.pop();
            while r.last().is_some_and(Rational::is_zero) {
                r.pop();
            }
        }
        Poly::new(r)
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            return a;
        }
        let inv = a.lead().recip();
        Poly::new(a.coeffs.iter().map(|c| c * &inv).collect())
    }

    /// Integer coefficients with content one.
    fn primitive(&self) -> Vec<BigInt> {
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&lcm / c.denom()))
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        ints.into_iter().map(|c| c / &g).collect()
    }

    /// All rational roots, found by the rational root theorem. Returns `None`
    /// when a coefficient that must be factored exceeds `limit`.
    pub fn rational_roots(&self, limit: u64) -> Option<Vec<Rational>> {
        if self.degree().unwrap_or(0) == 0 {
            return Some(Vec::new());
        }
        let mut ints = self.primitive();
        let mut roots = Vec::new();
        // factor out x^k
        let zeros = ints.iter().take_while(|c| c.is_zero()).count();
        if zeros > 0 {
            roots.push(Rational::zero());
            ints.drain(..zeros);
        }
        if ints.len() <= 1 {
            return Some(roots);
        }
        let a0 = ints[0].abs().to_u64().filter(|&v| v <= limit)?;
        let an = ints.last().unwrap().abs().to_u64().filter(|&v| v <= limit)?;
        let reduced = Poly::new(ints.iter().map(|c| Rational::from(c.clone())).collect());
        for p in divisors(a0) {
            for q in divisors(an) {
                if num_integer::gcd(p, q) != 1 {
                    continue;
                }
                for sign in [1i64, -1] {
                    let cand = Rational::new(sign * p as i64, q as i64);
                    if reduced.eval(&cand).is_zero() && !roots.contains(&cand) {
                        roots.push(cand);
                    }
                }
            }
        }
        roots.sort();
        Some(roots)
    }
}

fn divisors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut i = 1u64;
    while i * i <= n {
        if n.is_multiple_of(i) {
            out.push(i);
            if i * i != n {
                out.push(n / i);
            }
        }
        i += 1;
    }
    out
}

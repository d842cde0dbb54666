use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::PolyError;
use crate::arith::{display_rational, rat, Rational};

/// Sparse polynomial in `nvars` variables with rational coefficients.
/// Terms are kept in lexicographic exponent order and never store zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Poly {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Poly {
        let mut p = Poly::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Poly {
        Self::constant(nvars, Rational::one())
    }

    /// The variable `x_{i+1}`.
    pub fn var(nvars: usize, i: usize) -> Poly {
        assert!(i < nvars, "variable index out of range");
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Poly::zero(nvars);
        p.add_term(e, Rational::one());
        p
    }

    /// `sum c_i x_i`.
    pub fn linear_form(coeffs: &[Rational]) -> Poly {
        let n = coeffs.len();
        let mut p = Poly::zero(n);
        for (i, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            p.add_term(e, c.clone());
        }
        p
    }

    pub fn linear_form_int(coeffs: &[i64]) -> Poly {
        Self::linear_form(&coeffs.iter().map(|&c| rat(c)).collect::<Vec<_>>())
    }

    pub fn from_terms(
        nvars: usize,
        terms: impl IntoIterator<Item = (Vec<u32>, Rational)>,
    ) -> Result<Poly, PolyError> {
        let mut p = Poly::zero(nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(PolyError::ArityMismatch {
                    expected: nvars,
                    found: e.len(),
                });
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, e: Vec<u32>, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Terms in lexicographic exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, e: &[u32]) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Every term has total degree `d` (the zero polynomial qualifies for all `d`).
    pub fn is_homogeneous_of(&self, d: u32) -> bool {
        self.terms.keys().all(|e| e.iter().sum::<u32>() == d)
    }

    fn check_arity(&self, other: &Poly) -> Result<(), PolyError> {
        if self.nvars == other.nvars {
            Ok(())
        } else {
            Err(PolyError::ArityMismatch {
                expected: self.nvars,
                found: other.nvars,
            })
        }
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check_arity(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check_arity(other)?;
        let mut out = Poly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v * c);
        }
        out
    }

    pub fn pow(&self, k: u32) -> Poly {
        (0..k).fold(Poly::one(self.nvars), |acc, _| &acc * self)
    }

    pub fn eval(&self, x: &[Rational]) -> Result<Rational, PolyError> {
        if x.len() != self.nvars {
            return Err(PolyError::ArityMismatch {
                expected: self.nvars,
                found: x.len(),
            });
        }
        Ok(self.terms.iter().fold(Rational::zero(), |acc, (e, c)| {
            let m = e
                .iter()
                .zip(x)
                .fold(c.clone(), |m, (&k, xi)| m * num_traits::pow(xi.clone(), k as usize));
            acc + m
        }))
    }

    /// Substitutes `forms[i]` for `x_{i+1}`; all forms share one arity.
    pub fn compose_linear(&self, forms: &[Poly]) -> Result<Poly, PolyError> {
        if forms.len() != self.nvars {
            return Err(PolyError::ArityMismatch {
                expected: self.nvars,
                found: forms.len(),
            });
        }
        let m = forms.first().map_or(0, Poly::nvars);
        if let Some(f) = forms.iter().find(|f| f.nvars != m) {
            return Err(PolyError::ArityMismatch {
                expected: m,
                found: f.nvars,
            });
        }
        let mut out = Poly::zero(m);
        for (e, c) in &self.terms {
            let mut term = Poly::constant(m, c.clone());
            for (f, &k) in forms.iter().zip(e) {
                term = &term * &f.pow(k);
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// Restriction to the span of `vectors`: substitutes `x = sum_k t_k v_k`.
    pub fn restrict_to_span(&self, vectors: &[Vec<Rational>]) -> Poly {
        let k = vectors.len();
        let forms: Vec<Poly> = (0..self.nvars)
            .map(|i| Poly::linear_form(&vectors.iter().map(|v| v[i].clone()).collect::<Vec<_>>()))
            .collect();
        if k == 0 {
            return Poly::constant(0, self.coefficient(&vec![0; self.nvars]));
        }
        self.compose_linear(&forms).expect("forms share an arity")
    }

    /// `e_0, ..., e_r` of the given polynomials.
    pub fn elementary_symmetric(nvars: usize, forms: &[Poly]) -> Vec<Poly> {
        let mut e = vec![Poly::one(nvars)];
        for f in forms {
            e.push(Poly::zero(nvars));
            for i in (1..e.len()).rev() {
                let t = &e[i - 1] * f;
                e[i] = &e[i] + &t;
            }
        }
        e
    }
}

impl Add for &Poly {
    type Output = Poly;

    /// Panics on arity mismatch; see [`Poly::checked_add`].
    fn add(self, rhs: &Poly) -> Poly {
        self.checked_add(rhs).expect("arity mismatch")
    }
}

impl Sub for &Poly {
    type Output = Poly;

    fn sub(self, rhs: &Poly) -> Poly {
        self.checked_sub(rhs).expect("arity mismatch")
    }
}

impl Mul for &Poly {
    type Output = Poly;

    fn mul(self, rhs: &Poly) -> Poly {
        self.checked_mul(rhs).expect("arity mismatch")
    }
}

impl Neg for &Poly {
    type Output = Poly;

    fn neg(self) -> Poly {
        self.scale(&-Rational::one())
    }
}

impl fmt::Display for Poly {
    /// Renders as `x1^2 - 1/2*x1*x2 + 3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // highest degree first reads more naturally
        let mut terms: Vec<(&Vec<u32>, &Rational)> = self.terms.iter().collect();
        terms.sort_by(|a, b| {
            let da: u32 = a.0.iter().sum();
            let db: u32 = b.0.iter().sum();
            db.cmp(&da).then_with(|| b.0.cmp(a.0))
        });
        for (idx, (e, c)) in terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (idx, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    if k == 1 {
                        format!("x{}", i + 1)
                    } else {
                        format!("x{}^{}", i + 1, k)
                    }
                })
                .collect();
            if vars.is_empty() {
                write!(f, "{}", display_rational(&mag))?;
            } else if mag.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{}*{}", display_rational(&mag), vars.join("*"))?;
            }
        }
        Ok(())
    }
}

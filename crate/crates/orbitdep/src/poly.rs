//! Sparse homogeneous integer forms: exact evaluation, products, and the
//! `{"monomials":[{"exps":[...],"coef":c}]}` wire format.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A nonzero homogeneous polynomial with integer coefficients, stored as a
/// sorted sparse list of (exponent tuple, coefficient).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HomogeneousForm {
    num_vars: usize,
    degree: u32,
    terms: Vec<(Vec<u32>, BigInt)>,
}

#[derive(Serialize, Deserialize)]
struct MonomialWire {
    exps: Vec<u32>,
    coef: i64,
}

#[derive(Serialize, Deserialize)]
struct FormWire {
    monomials: Vec<MonomialWire>,
}

impl HomogeneousForm {
    /// Builds a form from monomials, combining duplicates and dropping zero
    /// coefficients. All exponent tuples must have the same length and total
    /// degree, and at least one term must survive.
    pub fn new(num_vars: usize, terms: Vec<(Vec<u32>, BigInt)>) -> Result<Self> {
        if num_vars == 0 {
            return Err(Error::Parse("a form needs at least one variable".into()));
        }
        let mut combined: std::collections::BTreeMap<Vec<u32>, BigInt> =
            std::collections::BTreeMap::new();
        let mut degree: Option<u32> = None;
        for (exps, coef) in terms {
            if exps.len() != num_vars {
                return Err(Error::Parse(format!(
                    "monomial has {} exponents, expected {}",
                    exps.len(),
                    num_vars
                )));
            }
            let total: u32 = exps.iter().sum();
            match degree {
                None => degree = Some(total),
                Some(d) if d != total => {
                    return Err(Error::Parse(format!(
                        "mixed total degrees {} and {}",
                        d, total
                    )))
                }
                _ => {}
            }
            let entry = combined.entry(exps).or_insert_with(BigInt::zero);
            *entry += coef;
        }
        combined.retain(|_, c| !c.is_zero());
        if combined.is_empty() {
            return Err(Error::Parse("form is identically zero".into()));
        }
        let terms: Vec<(Vec<u32>, BigInt)> = combined.into_iter().collect();
        Ok(HomogeneousForm {
            num_vars,
            degree: degree.unwrap(),
            terms,
        })
    }

    /// Convenience constructor from machine-integer coefficients.
    pub fn from_terms(num_vars: usize, terms: &[(&[u32], i64)]) -> Result<Self> {
        Self::new(
            num_vars,
            terms
                .iter()
                .map(|(e, c)| (e.to_vec(), BigInt::from(*c)))
                .collect(),
        )
    }

    /// The single variable `X_i` as a degree-1 form.
    pub fn variable(num_vars: usize, i: usize) -> Self {
        let mut exps = vec![0u32; num_vars];
        exps[i] = 1;
        HomogeneousForm {
            num_vars,
            degree: 1,
            terms: vec![(exps, BigInt::one())],
        }
    }

    /// A linear form from its coefficient vector (must be nonzero).
    pub fn linear(coeffs: &[BigInt]) -> Result<Self> {
        let terms = coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                let mut exps = vec![0u32; coeffs.len()];
                exps[i] = 1;
                (exps, c.clone())
            })
            .collect();
        Self::new(coeffs.len(), terms)
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn terms(&self) -> &[(Vec<u32>, BigInt)] {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Largest coefficient magnitude.
    pub fn max_coef_abs(&self) -> BigInt {
        self.terms
            .iter()
            .map(|(_, c)| c.abs())
            .max()
            .expect("nonzero form")
    }

    /// gcd of the coefficients.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for (_, c) in &self.terms {
            g = g.gcd(c);
        }
        g
    }

    /// Divides out the content so the coefficient gcd is one.
    pub fn primitive_part(&self) -> Self {
        let g = self.content();
        if g.is_one() {
            return self.clone();
        }
        HomogeneousForm {
            num_vars: self.num_vars,
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c / &g))
                .collect(),
        }
    }

    /// Exact evaluation at integer coordinates.
    pub fn evaluate(&self, coords: &[BigInt]) -> BigInt {
        assert_eq!(coords.len(), self.num_vars, "coordinate count mismatch");
        let mut acc = BigInt::zero();
        for (exps, coef) in &self.terms {
            let mut term = coef.clone();
            for (x, &e) in coords.iter().zip(exps) {
                match e {
                    0 => {}
                    1 => term *= x,
                    _ => term *= x.pow(e),
                }
            }
            acc += term;
        }
        acc
    }

    /// Polynomial product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.num_vars != other.num_vars {
            return Err(Error::DimensionMismatch(self.num_vars, other.num_vars));
        }
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exps: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                terms.push((exps, ca * cb));
            }
        }
        Self::new(self.num_vars, terms)
    }

    /// Product of several forms.
    pub fn product(forms: &[Self]) -> Result<Self> {
        let first = forms
            .first()
            .ok_or_else(|| Error::Parse("empty product".into()))?;
        let mut acc = first.clone();
        for f in &forms[1..] {
            acc = acc.mul(f)?;
        }
        Ok(acc)
    }

    /// When the form is `±` a product of distinct coordinate variables,
    /// returns the sorted variable indices (the support of a subdivisor of
    /// the coordinate-hyperplane union).
    pub fn coordinate_subdivisor_support(&self) -> Option<Vec<usize>> {
        if self.terms.len() != 1 {
            return None;
        }
        let (exps, coef) = &self.terms[0];
        if !coef.abs().is_one() {
            return None;
        }
        let mut support = Vec::new();
        for (i, &e) in exps.iter().enumerate() {
            match e {
                0 => {}
                1 => support.push(i),
                _ => return None,
            }
        }
        if support.is_empty() {
            None
        } else {
            Some(support)
        }
    }

    /// Serializes into the sparse wire structure. Coefficients beyond i64
    /// are rejected (the interchange format carries plain JSON numbers).
    pub fn to_wire_json(&self) -> Result<serde_json::Value> {
        let monomials: Vec<MonomialWire> = self
            .terms
            .iter()
            .map(|(e, c)| {
                c.to_string()
                    .parse::<i64>()
                    .map(|coef| MonomialWire {
                        exps: e.clone(),
                        coef,
                    })
                    .map_err(|_| {
                        Error::Parse(format!("coefficient {} does not fit the wire format", c))
                    })
            })
            .collect::<Result<_>>()?;
        Ok(serde_json::to_value(FormWire { monomials }).expect("serializable"))
    }

    /// Parses the sparse wire structure.
    pub fn from_wire_json(value: &serde_json::Value) -> Result<Self> {
        let wire: FormWire = serde_json::from_value(value.clone())
            .map_err(|e| Error::Parse(format!("bad form JSON: {}", e)))?;
        if wire.monomials.is_empty() {
            return Err(Error::Parse("form has no monomials".into()));
        }
        let num_vars = wire.monomials[0].exps.len();
        Self::new(
            num_vars,
            wire.monomials
                .into_iter()
                .map(|m| (m.exps, BigInt::from(m.coef)))
                .collect(),
        )
    }
}

impl fmt::Display for HomogeneousForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (exps, coef)) in self.terms.iter().enumerate() {
            let mag = coef.abs();
            if i == 0 {
                if coef.is_negative() {
                    write!(f, "-")?;
                }
            } else if coef.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let is_constant = exps.iter().all(|&e| e == 0);
            if !mag.is_one() || is_constant {
                write!(f, "{}", mag)?;
                if !is_constant {
                    write!(f, "*")?;
                }
            }
            let mut first_var = true;
            for (v, &e) in exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !first_var {
                    write!(f, "*")?;
                }
                first_var = false;
                write!(f, "X{}", v)?;
                if e > 1 {
                    write!(f, "^{}", e)?;
                }
            }
        }
        Ok(())
    }
}

impl FromStr for HomogeneousForm {
    type Err = Error;

    /// Parses expressions like `X0^2*X1 - 3*X2^3 + X0*X1*X2`.
    fn from_str(s: &str) -> Result<Self> {
        let mut raw_terms: Vec<(i32, String)> = Vec::new();
        let mut sign = 1i32;
        let mut current = String::new();
        for ch in s.chars() {
            match ch {
                '+' | '-' => {
                    if !current.trim().is_empty() {
                        raw_terms.push((sign, std::mem::take(&mut current)));
                    }
                    sign = if ch == '-' { -1 } else { 1 };
                }
                _ => current.push(ch),
            }
        }
        if !current.trim().is_empty() {
            raw_terms.push((sign, current));
        }
        if raw_terms.is_empty() {
            return Err(Error::Parse(format!("empty form: {:?}", s)));
        }

        let mut parsed: Vec<(BigInt, Vec<(usize, u32)>)> = Vec::new();
        let mut max_var = 0usize;
        for (sign, body) in raw_terms {
            let mut coef = BigInt::from(sign);
            let mut powers: Vec<(usize, u32)> = Vec::new();
            for factor in body.split('*') {
                let t = factor.trim();
                if t.is_empty() {
                    return Err(Error::Parse(format!("empty factor in {:?}", body)));
                }
                if t.starts_with('X') || t.starts_with('x') {
                    let (var_part, exp) = match t.split_once('^') {
                        Some((v, e)) => {
                            let exp: u32 = e
                                .trim()
                                .parse()
                                .map_err(|_| Error::Parse(format!("bad exponent in {:?}", t)))?;
                            (v.trim(), exp)
                        }
                        None => (t, 1),
                    };
                    let idx: usize = var_part[1..]
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad variable {:?}", var_part)))?;
                    max_var = max_var.max(idx);
                    powers.push((idx, exp));
                } else {
                    let n: BigInt = t
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad coefficient {:?}", t)))?;
                    coef *= n;
                }
            }
            parsed.push((coef, powers));
        }
        let num_vars = max_var + 1;
        let terms = parsed
            .into_iter()
            .map(|(coef, powers)| {
                let mut exps = vec![0u32; num_vars];
                for (idx, e) in powers {
                    exps[idx] += e;
                }
                (exps, coef)
            })
            .collect();
        Self::new(num_vars, terms)
    }
}

/// All exponent tuples of the given total degree, in decreasing
/// lexicographic order.
pub fn monomials_of_degree(num_vars: usize, degree: u32) -> Vec<Vec<u32>> {
    fn fill(out: &mut Vec<Vec<u32>>, current: &mut Vec<u32>, pos: usize, remaining: u32) {
        if pos + 1 == current.len() {
            current[pos] = remaining;
            out.push(current.clone());
            current[pos] = 0;
            return;
        }
        for e in (0..=remaining).rev() {
            current[pos] = e;
            fill(out, current, pos + 1, remaining - e);
        }
        current[pos] = 0;
    }
    let mut out = Vec::new();
    let mut current = vec![0u32; num_vars];
    fill(&mut out, &mut current, 0, degree);
    out
}

/// Resultant of two binary forms via the Sylvester determinant; nonzero
/// exactly when the forms share no projective root.
pub fn binary_resultant(f: &HomogeneousForm, g: &HomogeneousForm) -> Result<BigInt> {
    if f.num_vars() != 2 || g.num_vars() != 2 {
        return Err(Error::Domain("binary resultant needs two variables".into()));
    }
    let m = f.degree() as usize;
    let n = g.degree() as usize;
    // dense coefficients: index i holds the coefficient of X0^(deg-i) X1^i
    let dense = |h: &HomogeneousForm| {
        let mut v = vec![BigInt::zero(); h.degree() as usize + 1];
        for (exps, c) in h.terms() {
            v[exps[1] as usize] = c.clone();
        }
        v
    };
    let fc = dense(f);
    let gc = dense(g);
    let size = m + n;
    let mut mat = vec![vec![BigInt::zero(); size]; size];
    for row in 0..n {
        for (i, c) in fc.iter().enumerate() {
            mat[row][row + i] = c.clone();
        }
    }
    for row in 0..m {
        for (i, c) in gc.iter().enumerate() {
            mat[n + row][row + i] = c.clone();
        }
    }
    Ok(bareiss_determinant(mat))
}

/// Fraction-free determinant (Bareiss) of a square big-integer matrix.
pub fn bareiss_determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(swap) => {
                    m.swap(k, swap);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = num / &prev;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn form(s: &str) -> HomogeneousForm {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_display() {
        let f = form("X0^2*X1 - 3*X2^3 + X0*X1*X2");
        assert_eq!(f.num_vars(), 3);
        assert_eq!(f.degree(), 3);
        assert_eq!(f.num_terms(), 3);
        let text = f.to_string();
        let back: HomogeneousForm = text.parse().unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn rejects_inhomogeneous_and_zero() {
        assert!("X0 + X1^2".parse::<HomogeneousForm>().is_err());
        assert!("X0 - X0".parse::<HomogeneousForm>().is_err());
    }

    #[test]
    fn evaluate_exactly() {
        let f = form("X0^2 + X1^2");
        let at = |a: i64, b: i64| f.evaluate(&[BigInt::from(a), BigInt::from(b)]);
        assert_eq!(at(1, 1), BigInt::from(2));
        assert_eq!(at(3, 4), BigInt::from(25));
        assert_eq!(at(0, 0), BigInt::from(0));
    }

    #[test]
    fn product_of_linear_forms() {
        let l1 = HomogeneousForm::linear(&[BigInt::from(1), BigInt::from(1)]).unwrap();
        let l2 = HomogeneousForm::linear(&[BigInt::from(1), BigInt::from(-1)]).unwrap();
        let prod = l1.mul(&l2).unwrap();
        assert_eq!(prod, form("X0^2 - X1^2"));
    }

    #[test]
    fn coordinate_subdivisor_detection() {
        assert_eq!(
            form("X0*X1").coordinate_subdivisor_support(),
            Some(vec![0, 1])
        );
        assert_eq!(form("X1").coordinate_subdivisor_support(), Some(vec![1]));
        assert_eq!(form("X0^2").coordinate_subdivisor_support(), None);
        assert_eq!(form("2*X0").coordinate_subdivisor_support(), None);
        assert_eq!(form("X0+X1").coordinate_subdivisor_support(), None);
    }

    #[test]
    fn wire_round_trip() {
        let f = form("X0^2*X1 - 3*X2^3");
        let json = f.to_wire_json().unwrap();
        let back = HomogeneousForm::from_wire_json(&json).unwrap();
        assert_eq!(back, f);
        let text = serde_json::to_string(&json).unwrap();
        assert!(text.contains("exps"));
        assert!(text.contains("coef"));
    }

    #[test]
    fn monomial_enumeration() {
        let m = monomials_of_degree(3, 2);
        assert_eq!(m.len(), 6); // C(4,2)
        assert!(m.contains(&vec![2, 0, 0]));
        assert!(m.contains(&vec![0, 1, 1]));
        let m1 = monomials_of_degree(2, 4);
        assert_eq!(m1.len(), 5);
    }

    #[test]
    fn resultant_detects_common_roots() {
        // X0*X1 and X1^2 share the projective root [1:0]
        let f = form("X0*X1");
        let g = form("X1^2");
        assert_eq!(binary_resultant(&f, &g).unwrap(), BigInt::zero());

        // X0^2+X1^2 and X0*X1 share no projective root
        let f = form("X0^2 + X1^2");
        let g = form("X0*X1");
        assert!(!binary_resultant(&f, &g).unwrap().is_zero());
    }

    #[test]
    fn bareiss_matches_small_determinants() {
        let m = vec![
            vec![BigInt::from(2), BigInt::from(3)],
            vec![BigInt::from(5), BigInt::from(7)],
        ];
        assert_eq!(bareiss_determinant(m), BigInt::from(-1));
        let m = vec![
            vec![BigInt::from(1), BigInt::from(2), BigInt::from(3)],
            vec![BigInt::from(4), BigInt::from(5), BigInt::from(6)],
            vec![BigInt::from(7), BigInt::from(8), BigInt::from(10)],
        ];
        assert_eq!(bareiss_determinant(m), BigInt::from(-3));
    }
}

//! Rational points of projective N-space in canonical coordinates, and the
//! coordinatewise multiplicative structure.
//!
//! The canonical representative of a point is the unique tuple of coprime
//! integers whose first nonzero coordinate is positive, so point equality is
//! structural equality and deduplication is a hash lookup.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::Rational;
use crate::error::{Error, Result};

/// A rational point of projective N-space in canonical coordinates:
/// not all zero, gcd one, first nonzero coordinate positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjectivePoint {
    coords: Vec<BigInt>,
}

/// A point of the N-torus: N nonzero rational coordinates. Embeds into
/// projective space as `[1 : a_1 : ... : a_N]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusPoint {
    coords: Vec<Rational>,
}

impl ProjectivePoint {
    /// Canonicalizes a tuple of rational homogeneous coordinates: clears
    /// denominators, divides by the gcd and fixes the leading sign.
    pub fn normalize(raw: &[Rational]) -> Result<Self> {
        if raw.iter().all(|c| c.is_zero()) {
            return Err(Error::AllZeroCoordinates);
        }
        if raw.len() < 2 {
            return Err(Error::Domain(
                "a projective point needs at least two coordinates".into(),
            ));
        }
        let mut lcm = BigInt::one();
        for c in raw {
            lcm = lcm.lcm(c.denom());
        }
        let ints: Vec<BigInt> = raw.iter().map(|c| (c * &lcm).to_integer()).collect();
        Ok(Self::from_integers_unchecked(ints))
    }

    /// Canonicalizes integer homogeneous coordinates.
    pub fn from_integers(coords: Vec<BigInt>) -> Result<Self> {
        if coords.iter().all(|c| c.is_zero()) {
            return Err(Error::AllZeroCoordinates);
        }
        if coords.len() < 2 {
            return Err(Error::Domain(
                "a projective point needs at least two coordinates".into(),
            ));
        }
        Ok(Self::from_integers_unchecked(coords))
    }

    fn from_integers_unchecked(mut coords: Vec<BigInt>) -> Self {
        let mut gcd = BigInt::zero();
        for c in &coords {
            gcd = gcd.gcd(c);
        }
        debug_assert!(!gcd.is_zero());
        if !gcd.is_one() {
            for c in &mut coords {
                *c = &*c / &gcd;
            }
        }
        let flip = coords
            .iter()
            .find(|c| !c.is_zero())
            .map(|c| c.is_negative())
            .unwrap_or(false);
        if flip {
            for c in &mut coords {
                *c = -&*c;
            }
        }
        ProjectivePoint { coords }
    }

    /// Convenience constructor from machine integers.
    pub fn from_i64(coords: &[i64]) -> Result<Self> {
        Self::from_integers(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Projective dimension N (one less than the coordinate count).
    pub fn dimension(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn has_zero_coordinate(&self) -> bool {
        self.coords.iter().any(|c| c.is_zero())
    }

    /// Largest coordinate absolute value; positive on canonical points.
    pub fn max_abs(&self) -> BigUint {
        self.coords
            .iter()
            .map(|c| c.magnitude())
            .max()
            .expect("nonempty")
            .clone()
    }

    /// Coordinatewise product `[a_0 b_0 : ... : a_N b_N]`, normalized.
    pub fn coord_mul(&self, other: &Self) -> Result<Self> {
        if self.dimension() != other.dimension() {
            return Err(Error::DimensionMismatch(
                self.dimension(),
                other.dimension(),
            ));
        }
        let prod: Vec<BigInt> = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a * b)
            .collect();
        if prod.iter().all(|c| c.is_zero()) {
            return Err(Error::DegenerateProduct);
        }
        Ok(Self::from_integers_unchecked(prod))
    }

    /// Coordinatewise r-th power `[a_0^r : ... : a_N^r]`. Only defined for
    /// r <= 0 on points with no zero coordinate.
    pub fn power(&self, r: i64) -> Result<Self> {
        if r <= 0 && self.has_zero_coordinate() {
            return Err(Error::ZeroCoordinate);
        }
        if r >= 0 {
            let pows: Vec<BigInt> = self.coords.iter().map(|c| c.pow(r as u32)).collect();
            Ok(Self::from_integers_unchecked(pows))
        } else {
            // a_i^r rescaled by (prod a_j)^(-r) gives integer coordinates
            let k = (-r) as u32;
            let pows: Vec<BigInt> = (0..self.coords.len())
                .map(|i| {
                    self.coords
                        .iter()
                        .enumerate()
                        .filter(|(j, _)| *j != i)
                        .map(|(_, c)| c.pow(k))
                        .product()
                })
                .collect();
            Ok(Self::from_integers_unchecked(pows))
        }
    }

    /// Componentwise vector power through the torus embedding: torus
    /// coordinate i is raised to `rvec[i-1]`.
    pub fn vector_power(&self, rvec: &[i64]) -> Result<Self> {
        let t = self.torus_coords()?;
        let raised = t.vector_power(rvec)?;
        Ok(raised.embed())
    }

    /// Extracts torus coordinates `(a_1/a_0, ..., a_N/a_0)`; requires every
    /// coordinate nonzero.
    pub fn torus_coords(&self) -> Result<TorusPoint> {
        if self.has_zero_coordinate() {
            return Err(Error::ZeroCoordinate);
        }
        let a0 = &self.coords[0];
        let coords = self.coords[1..]
            .iter()
            .map(|c| Rational::new(c.clone(), a0.clone()))
            .collect();
        Ok(TorusPoint { coords })
    }

    /// Renders as `[a0:a1:...:aN]`.
    pub fn to_display_string(&self) -> String {
        format!("{}", self)
    }
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ":")?;
            }
            write!(f, "{}", c)?;
        }
        write!(f, "]")
    }
}

impl FromStr for ProjectivePoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("expected [a0:a1:...:aN], got {:?}", s)))?;
        let coords: Vec<BigInt> = inner
            .split(':')
            .map(|part| {
                part.trim()
                    .parse::<BigInt>()
                    .map_err(|_| Error::Parse(format!("bad coordinate {:?}", part)))
            })
            .collect::<Result<_>>()?;
        ProjectivePoint::from_integers(coords)
    }
}

impl TorusPoint {
    /// Builds a torus point; every coordinate must be nonzero.
    pub fn new(coords: Vec<Rational>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::Domain("torus dimension must be positive".into()));
        }
        if coords.iter().any(|c| c.is_zero()) {
            return Err(Error::ZeroCoordinate);
        }
        Ok(TorusPoint { coords })
    }

    pub fn from_i64(coords: &[i64]) -> Result<Self> {
        Self::new(
            coords
                .iter()
                .map(|&c| Rational::from_integer(BigInt::from(c)))
                .collect(),
        )
    }

    /// Torus dimension N.
    pub fn dimension(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    /// The standard inclusion `(a_1,...,a_N) -> [1:a_1:...:a_N]`.
    pub fn embed(&self) -> ProjectivePoint {
        let mut raw = Vec::with_capacity(self.coords.len() + 1);
        raw.push(Rational::one());
        raw.extend(self.coords.iter().cloned());
        ProjectivePoint::normalize(&raw).expect("torus coordinates are nonzero")
    }

    /// Coordinatewise product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.dimension() != other.dimension() {
            return Err(Error::DimensionMismatch(
                self.dimension(),
                other.dimension(),
            ));
        }
        Ok(TorusPoint {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a * b)
                .collect(),
        })
    }

    /// Coordinatewise integer power (r may be negative).
    pub fn power(&self, r: i64) -> Self {
        TorusPoint {
            coords: self.coords.iter().map(|c| rational_powi(c, r)).collect(),
        }
    }

    /// Componentwise powers `(a_1^{r_1}, ..., a_N^{r_N})`.
    pub fn vector_power(&self, rvec: &[i64]) -> Result<Self> {
        if rvec.len() != self.dimension() {
            return Err(Error::DimensionMismatch(rvec.len(), self.dimension()));
        }
        Ok(TorusPoint {
            coords: self
                .coords
                .iter()
                .zip(rvec)
                .map(|(c, &r)| rational_powi(c, r))
                .collect(),
        })
    }

    /// The identity element `(1, ..., 1)`.
    pub fn identity(dimension: usize) -> Self {
        TorusPoint {
            coords: vec![Rational::one(); dimension],
        }
    }

    pub fn is_identity(&self) -> bool {
        self.coords.iter().all(|c| c.is_one())
    }
}

impl fmt::Display for TorusPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", c)?;
        }
        write!(f, ")")
    }
}

impl FromStr for TorusPoint {
    type Err = Error;

    /// Parses `(a_1, ..., a_N)` or a bare comma-separated list of rationals.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let inner = t
            .strip_prefix('(')
            .and_then(|u| u.strip_suffix(')'))
            .unwrap_or(t);
        let coords: Vec<Rational> = inner
            .split(',')
            .map(crate::arith::parse_rational)
            .collect::<Result<_>>()?;
        TorusPoint::new(coords)
    }
}

/// Integer power of a nonzero rational, negative exponents allowed.
pub fn rational_powi(q: &Rational, r: i64) -> Rational {
    if r == 0 {
        return Rational::one();
    }
    let mag = q.pow(r.unsigned_abs() as i32);
    if r < 0 {
        mag.recip()
    } else {
        mag
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(coords: &[i64]) -> ProjectivePoint {
        ProjectivePoint::from_i64(coords).unwrap()
    }

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn normalize_examples() {
        let p = ProjectivePoint::normalize(&[rat(2, 3), rat(4, 1), rat(1, 1)]).unwrap();
        assert_eq!(p, pt(&[2, 12, 3]));

        let p = ProjectivePoint::normalize(&[rat(0, 1), rat(-2, 1), rat(4, 1)]).unwrap();
        assert_eq!(p, pt(&[0, 1, -2]));

        let p = ProjectivePoint::normalize(&[rat(5, 1), rat(0, 1), rat(0, 1)]).unwrap();
        assert_eq!(p, pt(&[1, 0, 0]));

        assert_eq!(
            ProjectivePoint::normalize(&[rat(0, 1), rat(0, 1)]),
            Err(Error::AllZeroCoordinates)
        );
    }

    #[test]
    fn normalize_is_scale_invariant_and_idempotent() {
        let p = pt(&[6, -9, 12]);
        for lambda in [rat(7, 3), rat(-2, 5), rat(1, 1)] {
            let scaled: Vec<Rational> = p
                .coords()
                .iter()
                .map(|c| Rational::from_integer(c.clone()) * &lambda)
                .collect();
            assert_eq!(ProjectivePoint::normalize(&scaled).unwrap(), p);
        }
    }

    #[test]
    fn coord_mul_examples() {
        assert_eq!(
            pt(&[1, 2, 3]).coord_mul(&pt(&[1, 4, 5])).unwrap(),
            pt(&[1, 8, 15])
        );
        assert_eq!(
            pt(&[1, 0, 3]).coord_mul(&pt(&[1, 4, 0])).unwrap(),
            pt(&[1, 0, 0])
        );
        // [2:4] and [3:6] both normalize to [1:2]; the product is [6:24] = [1:4]
        assert_eq!(pt(&[2, 4]).coord_mul(&pt(&[3, 6])).unwrap(), pt(&[1, 4]));
        assert_eq!(
            pt(&[1, 0]).coord_mul(&pt(&[0, 1])),
            Err(Error::DegenerateProduct)
        );
    }

    #[test]
    fn power_examples() {
        assert_eq!(pt(&[1, 2, 4]).power(2).unwrap(), pt(&[1, 4, 16]));
        assert_eq!(pt(&[1, 2, 4]).power(-1).unwrap(), pt(&[4, 2, 1]));
        assert_eq!(pt(&[0, 1]).power(-1), Err(Error::ZeroCoordinate));
        assert_eq!(pt(&[0, 1]).power(0), Err(Error::ZeroCoordinate));
        assert_eq!(pt(&[3, 5]).power(0).unwrap(), pt(&[1, 1]));
        assert_eq!(pt(&[1, 2]).power(1).unwrap(), pt(&[1, 2]));
        // positive powers stay defined on zero-bearing points
        assert_eq!(pt(&[0, 2]).power(3).unwrap(), pt(&[0, 1]));
    }

    #[test]
    fn power_addition_law_on_torus_points() {
        let p = pt(&[2, 3, 5]);
        for (a, b) in [(1i64, 2i64), (2, 3), (-1, 4), (-2, -1)] {
            let lhs = p.power(a + b).unwrap();
            let rhs = p.power(a).unwrap().coord_mul(&p.power(b).unwrap()).unwrap();
            assert_eq!(lhs, rhs, "a={} b={}", a, b);
        }
    }

    #[test]
    fn vector_power_examples() {
        assert_eq!(pt(&[1, 2, 3]).vector_power(&[2, 1]).unwrap(), pt(&[1, 4, 3]));
        assert_eq!(
            pt(&[1, 2, 4]).vector_power(&[-1, -1]).unwrap(),
            pt(&[4, 2, 1])
        );
        assert_eq!(
            pt(&[2, 4, 6]).vector_power(&[1, 1]).unwrap(),
            pt(&[1, 2, 3])
        );
        assert_eq!(
            pt(&[0, 1, 1]).vector_power(&[1, 1]),
            Err(Error::ZeroCoordinate)
        );
    }

    #[test]
    fn torus_round_trip() {
        let t = TorusPoint::new(vec![rat(2, 1), rat(3, 2)]).unwrap();
        let p = t.embed();
        assert_eq!(p, pt(&[2, 4, 3]));
        assert_eq!(p.torus_coords().unwrap(), t);

        assert_eq!(pt(&[0, 1, 1]).torus_coords(), Err(Error::ZeroCoordinate));
    }

    #[test]
    fn torus_multiplicative_compatibility() {
        let t1 = TorusPoint::new(vec![rat(2, 3), rat(5, 1)]).unwrap();
        let t2 = TorusPoint::new(vec![rat(-1, 2), rat(7, 4)]).unwrap();
        let lhs = t1.mul(&t2).unwrap().embed();
        let rhs = t1.embed().coord_mul(&t2.embed()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn display_and_parse_round_trip() {
        for coords in [vec![1i64, -2, 3], vec![0, 1], vec![17, 0, -34]] {
            let p = pt(&coords);
            let text = p.to_display_string();
            let back: ProjectivePoint = text.parse().unwrap();
            assert_eq!(back, p);
        }
        let p: ProjectivePoint = "[2:12:3]".parse().unwrap();
        assert_eq!(p, pt(&[2, 12, 3]));
        assert!("[]".parse::<ProjectivePoint>().is_err());
        assert!("1:2".parse::<ProjectivePoint>().is_err());
        assert!("[0:0]".parse::<ProjectivePoint>().is_err());
    }

    #[test]
    fn coord_mul_identity_and_commutativity() {
        let id = pt(&[1, 1, 1]);
        let p = pt(&[3, -5, 7]);
        let q = pt(&[2, 9, -11]);
        assert_eq!(p.coord_mul(&id).unwrap(), p);
        assert_eq!(p.coord_mul(&q).unwrap(), q.coord_mul(&p).unwrap());
        let r = pt(&[5, 4, 3]);
        assert_eq!(
            p.coord_mul(&q).unwrap().coord_mul(&r).unwrap(),
            p.coord_mul(&q.coord_mul(&r).unwrap()).unwrap()
        );
    }
}

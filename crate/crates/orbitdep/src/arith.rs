//! Places of **Q**, normalized absolute values, valuations and exact
//! factorization of arbitrary-precision integers.
//!
//! Factorization is staged: batched trial division against a subproduct tree
//! of all primes below the trial bound, then Brent's cycle-finding rho on the
//! remaining cofactor (native `u64`, Montgomery `u128`, or big-integer,
//! depending on size), with BPSW primality testing in between. Inputs beyond
//! the digit cap or surviving the rho iteration budget produce a budget error
//! instead of stalling.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use once_cell::sync::Lazy;

use crate::error::{Error, Result};

/// Exact rational number; reduced, with positive denominator.
pub type Rational = BigRational;

/// Largest prime bound served by the subproduct tree.
const TRIAL_TABLE_BOUND: u64 = 1_000_000;

/// A place of the rational field.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    /// The unique archimedean place (usual real absolute value).
    Archimedean,
    /// The non-archimedean place attached to a prime `p`, normalized so
    /// that `|p|_p = 1/p`.
    Finite(BigUint),
}

impl Place {
    /// Builds a finite place, verifying primality of `p`.
    pub fn finite(p: impl Into<BigUint>) -> Result<Self> {
        let p = p.into();
        if !is_prime(&p) {
            return Err(Error::Domain(format!("{} is not prime", p)));
        }
        Ok(Place::Finite(p))
    }

    pub fn is_archimedean(&self) -> bool {
        matches!(self, Place::Archimedean)
    }
}

impl std::fmt::Display for Place {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Place::Archimedean => write!(f, "inf"),
            Place::Finite(p) => write!(f, "{}", p),
        }
    }
}

/// Sign and sorted prime powers of a nonzero integer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    /// `+1` or `-1`.
    pub sign: i8,
    /// `(prime, exponent)` pairs, primes strictly increasing, exponents >= 1.
    pub factors: Vec<(BigUint, u32)>,
}

impl Factorization {
    /// Multiplies the factorization back together.
    pub fn reconstruct(&self) -> BigInt {
        let mut acc = BigUint::one();
        for (p, e) in &self.factors {
            acc *= p.pow(*e);
        }
        let mag = BigInt::from(acc);
        if self.sign < 0 {
            -mag
        } else {
            mag
        }
    }

    /// Exponent of `p`, zero when `p` does not occur.
    pub fn exponent_of(&self, p: &BigUint) -> u32 {
        self.factors
            .binary_search_by(|(q, _)| q.cmp(p))
            .map(|i| self.factors[i].1)
            .unwrap_or(0)
    }
}

/// Tuning knobs for [`factor_with`].
#[derive(Debug, Clone)]
pub struct FactorConfig {
    /// Trial-division bound; clamped to `1_000_000` (the precomputed table).
    pub trial_bound: u64,
    /// Reject inputs with more decimal digits than this.
    pub digit_cap: usize,
    /// Rho iterations allowed per composite cofactor before giving up.
    pub rho_budget: u64,
}

impl Default for FactorConfig {
    fn default() -> Self {
        FactorConfig {
            trial_bound: 1_000_000,
            digit_cap: 5_000,
            rho_budget: 30_000_000,
        }
    }
}

/// Factors a nonzero integer with default configuration.
pub fn factor(n: &BigInt) -> Result<Factorization> {
    factor_with(n, &FactorConfig::default())
}

/// Factors a nonzero integer.
pub fn factor_with(n: &BigInt, config: &FactorConfig) -> Result<Factorization> {
    if n.is_zero() {
        return Err(Error::ZeroInput);
    }
    let sign = if n.is_negative() { -1 } else { 1 };
    let mag = n.magnitude().clone();
    let digits = decimal_digits(&mag);
    if digits > config.digit_cap {
        return Err(Error::FactorDigitCap {
            digits,
            cap: config.digit_cap,
        });
    }
    let mut factors = factor_biguint(mag, config)?;
    factors.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(Factorization { sign, factors })
}

/// p-adic valuation of a nonzero rational: `v_p(num) - v_p(den)`.
pub fn valuation(p: &BigUint, q: &Rational) -> Result<i64> {
    if q.is_zero() {
        return Err(Error::ZeroInput);
    }
    let num = valuation_int(p, q.numer().magnitude());
    let den = valuation_int(p, q.denom().magnitude());
    Ok(num - den)
}

/// Exponent of `p` in a nonzero natural number.
pub fn valuation_int(p: &BigUint, n: &BigUint) -> i64 {
    debug_assert!(!n.is_zero());
    let mut v = 0i64;
    let mut rest = n.clone();
    loop {
        let (quot, rem) = rest.div_rem(p);
        if rem.is_zero() {
            v += 1;
            rest = quot;
        } else {
            return v;
        }
    }
}

/// Log of the normalized absolute value `log |q|_v`, in nats.
pub fn log_abs(v: &Place, q: &Rational) -> Result<f64> {
    if q.is_zero() {
        return Err(Error::ZeroInput);
    }
    match v {
        Place::Archimedean => Ok(ln_rational_abs(q)),
        Place::Finite(p) => {
            let val = valuation(p, q)?;
            Ok(-(val as f64) * ln_biguint(p))
        }
    }
}

/// Natural log of a positive big integer, accurate to ~1e-15 relative error.
pub fn ln_biguint(n: &BigUint) -> f64 {
    debug_assert!(!n.is_zero());
    let bits = n.bits();
    if bits <= 63 {
        return (n.to_u64().unwrap() as f64).ln();
    }
    let shift = bits - 63;
    let top = (n >> shift).to_u64().unwrap();
    (top as f64).ln() + (shift as f64) * std::f64::consts::LN_2
}

/// Natural log of `|n|` for a nonzero big integer.
pub fn ln_bigint_abs(n: &BigInt) -> f64 {
    ln_biguint(n.magnitude())
}

/// Natural log of `|q|` for a nonzero rational.
pub fn ln_rational_abs(q: &Rational) -> f64 {
    ln_biguint(q.numer().magnitude()) - ln_biguint(q.denom().magnitude())
}

/// Number of decimal digits of a natural number.
pub fn decimal_digits(n: &BigUint) -> usize {
    if n.is_zero() {
        return 1;
    }
    // bits * log10(2), corrected near the boundary
    let approx = (n.bits() as f64 * std::f64::consts::LOG10_2).floor() as usize;
    let mut pow = BigUint::from(10u32).pow(approx as u32);
    let mut digits = approx;
    while pow <= *n {
        pow *= 10u32;
        digits += 1;
    }
    digits
}

/// Parses "a/b", an integer, or a plain decimal like "0.75" into an exact
/// rational.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::Parse(format!("invalid rational: {:?}", text));
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().map_err(|_| bad())?;
        let d: BigInt = den.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let frac_digits = frac_part.len() as u32;
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int_part.trim_start().starts_with('-');
        let int: BigInt = if int_part.is_empty() || int_part == "-" {
            BigInt::zero()
        } else {
            int_part.parse().map_err(|_| bad())?
        };
        let frac: BigInt = frac_part.parse().map_err(|_| bad())?;
        let scale = BigInt::from(10u32).pow(frac_digits);
        let num = &int * &scale + if negative { -&frac } else { frac.clone() };
        return Ok(Rational::new(num, scale));
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}

// ---------------------------------------------------------------------------
// Primality
// ---------------------------------------------------------------------------

/// Deterministic primality for `u64` (Miller-Rabin with a verified base set).
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let d = (n - 1) >> (n - 1).trailing_zeros();
    let s = (n - 1).trailing_zeros();
    // This base set is known to be correct for all n < 2^64.
    'base: for a in [2u64, 325, 9375, 28178, 450775, 9780504, 1795265022] {
        let a = a % n;
        if a == 0 {
            continue;
        }
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'base;
            }
        }
        return false;
    }
    true
}

/// Primality test: deterministic below 2^64, BPSW (with extra Miller-Rabin
/// rounds) above. No BPSW pseudoprime is known.
pub fn is_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    for p in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43] {
        if (n % p).is_zero() {
            return false;
        }
    }
    for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if !miller_rabin_round(n, &BigUint::from(a)) {
            return false;
        }
    }
    strong_lucas_selfridge(n)
}

fn miller_rabin_round(n: &BigUint, a: &BigUint) -> bool {
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let mut x = a.modpow(&d, n);
    if x == one || x == n_minus_1 {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == n_minus_1 {
            return true;
        }
    }
    false
}

/// Jacobi symbol (a/n) for odd positive n.
fn jacobi(a: &BigInt, n: &BigUint) -> i32 {
    let mut a = a.mod_floor(&BigInt::from(n.clone()));
    let mut n = n.clone();
    let mut result = 1i32;
    while !a.is_zero() {
        let mut a_mag = a.magnitude().clone();
        let twos = a_mag.trailing_zeros().unwrap_or(0);
        if twos > 0 {
            a_mag >>= twos;
            if twos % 2 == 1 {
                let n_mod_8 = (&n % 8u32).to_u32().unwrap();
                if n_mod_8 == 3 || n_mod_8 == 5 {
                    result = -result;
                }
            }
        }
        // quadratic reciprocity flip
        if (&a_mag % 4u32).to_u32().unwrap() == 3 && (&n % 4u32).to_u32().unwrap() == 3 {
            result = -result;
        }
        let new_a = BigInt::from(&n % &a_mag);
        n = a_mag;
        a = new_a;
    }
    if n.is_one() {
        result
    } else {
        0
    }
}

/// Strong Lucas probable-prime test with Selfridge's parameter choice.
fn strong_lucas_selfridge(n: &BigUint) -> bool {
    // Find D in 5, -7, 9, -11, ... with jacobi(D, n) = -1.
    let mut d = BigInt::from(5);
    loop {
        match jacobi(&d, n) {
            -1 => break,
            0 => {
                // Shares a factor with n unless |D| == n.
                return BigInt::from(n.clone()) == d.abs();
            }
            _ => {}
        }
        d = if d.is_positive() {
            -(&d + BigInt::from(2))
        } else {
            -(&d - BigInt::from(2))
        };
        if d.magnitude().to_u64() == Some(1_000_001) {
            // n is almost certainly a perfect square; verify.
            let root = n.sqrt();
            if &root * &root == *n {
                return false;
            }
        }
    }
    // P = 1, Q = (1 - D) / 4
    let n_int = BigInt::from(n.clone());
    let q: BigInt = (BigInt::one() - &d) / 4;
    let n_plus_1 = n + 1u32;
    let s = n_plus_1.trailing_zeros().unwrap_or(0);
    let t = &n_plus_1 >> s;

    // Compute U_t, V_t, Q^t mod n by binary expansion.
    let mut u = BigInt::one();
    let mut v = BigInt::one();
    let mut qk = q.mod_floor(&n_int);
    let bits = t.bits();
    for i in (0..bits - 1).rev() {
        // double: (U, V)_{2k} from (U, V)_k
        u = (&u * &v).mod_floor(&n_int);
        v = (&v * &v - BigInt::from(2) * &qk).mod_floor(&n_int);
        qk = (&qk * &qk).mod_floor(&n_int);
        if t.bit(i) {
            // increment: (U, V)_{2k+1}; the halvings are exact mod the odd n
            let mut new_u: BigInt = &u + &v;
            if new_u.is_odd() {
                new_u += &n_int;
            }
            let new_u: BigInt = (new_u / BigInt::from(2)).mod_floor(&n_int);
            let mut new_v: BigInt = &d * &u + &v;
            if new_v.is_odd() {
                new_v += &n_int;
            }
            let new_v: BigInt = (new_v / BigInt::from(2)).mod_floor(&n_int);
            u = new_u;
            v = new_v;
            qk = (&qk * q.mod_floor(&n_int)).mod_floor(&n_int);
        }
    }

    if u.is_zero() || v.is_zero() {
        return true;
    }
    for _ in 1..s {
        v = (&v * &v - BigInt::from(2) * &qk).mod_floor(&n_int);
        qk = (&qk * &qk).mod_floor(&n_int);
        if v.is_zero() {
            return true;
        }
    }
    false
}

// ---------------------------------------------------------------------------
// u64 / u128 modular arithmetic
// ---------------------------------------------------------------------------

fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u64(acc, base, m);
        }
        base = mul_mod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

/// 256-bit product of two u128 values as (high, low) halves.
fn umul256(a: u128, b: u128) -> (u128, u128) {
    const MASK: u128 = (1u128 << 64) - 1;
    let (a1, a0) = (a >> 64, a & MASK);
    let (b1, b0) = (b >> 64, b & MASK);
    let p00 = a0 * b0;
    let p01 = a0 * b1;
    let p10 = a1 * b0;
    let p11 = a1 * b1;
    let mid = (p00 >> 64) + (p01 & MASK) + (p10 & MASK);
    let lo = (p00 & MASK) | (mid << 64);
    let hi = p11 + (p01 >> 64) + (p10 >> 64) + (mid >> 64);
    (hi, lo)
}

/// Montgomery context for odd moduli below 2^126.
struct Mont128 {
    n: u128,
    ninv: u128, // -n^{-1} mod 2^128
    r: u128,    // 2^128 mod n (the Montgomery form of 1)
    r2: u128,   // 2^256 mod n
}

impl Mont128 {
    fn new(n: u128) -> Self {
        debug_assert!(n & 1 == 1 && n > 1 && n < (1u128 << 126));
        let mut inv = n;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u128.wrapping_sub(n.wrapping_mul(inv)));
        }
        let ninv = inv.wrapping_neg();
        let r = (u128::MAX % n) + 1;
        let r = if r == n { 0 } else { r };
        // r2 = r * 2^128 mod n by 128 modular doublings (n < 2^126 keeps
        // the additions overflow-free)
        let mut r2 = r;
        for _ in 0..128 {
            r2 <<= 1;
            if r2 >= n {
                r2 -= n;
            }
        }
        Mont128 { n, ninv, r, r2 }
    }

    #[inline]
    fn redc(&self, hi: u128, lo: u128) -> u128 {
        let m = lo.wrapping_mul(self.ninv);
        let (mn_hi, mn_lo) = umul256(m, self.n);
        let (_, carry) = lo.overflowing_add(mn_lo);
        let mut t = hi + mn_hi + carry as u128;
        if t >= self.n {
            t -= self.n;
        }
        t
    }

    #[inline]
    fn mul(&self, a: u128, b: u128) -> u128 {
        let (hi, lo) = umul256(a, b);
        self.redc(hi, lo)
    }

    fn to_mont(&self, a: u128) -> u128 {
        self.mul(a % self.n, self.r2)
    }

    fn from_mont(&self, a: u128) -> u128 {
        self.redc(0, a)
    }
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

// ---------------------------------------------------------------------------
// Pollard rho (Brent's variant)
// ---------------------------------------------------------------------------

/// Brent rho on a u64 composite that has no factor below ~1024.
fn rho_u64(n: u64) -> u64 {
    debug_assert!(n & 1 == 1);
    let mut c = 1u64;
    loop {
        let mut x = 2u64;
        let mut y = 2u64;
        let mut d = 1u64;
        let mut count = 0u64;
        while d == 1 {
            x = mul_mod_u64(x, x, n).wrapping_add(c) % n;
            y = mul_mod_u64(y, y, n).wrapping_add(c) % n;
            y = mul_mod_u64(y, y, n).wrapping_add(c) % n;
            d = gcd_u64(x.abs_diff(y), n);
            count += 1;
            if count > (1 << 27) {
                break;
            }
        }
        if d != n && d != 1 {
            return d;
        }
        c += 1;
    }
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Brent rho with batched gcds in Montgomery arithmetic. Returns a proper
/// factor, or None when the iteration budget runs out.
fn rho_u128(n: u128, budget: u64) -> Option<u128> {
    let mont = Mont128::new(n);
    let one = mont.r;
    let mut iterations = 0u64;
    for c_plain in 1u128..64 {
        let c = mont.to_mont(c_plain);
        let f = |x: u128| {
            let y = mont.mul(x, x);
            let s = y + c;
            if s >= n {
                s - n
            } else {
                s
            }
        };
        let mut y = one;
        let mut cycle_len = 1u64;
        'brent: loop {
            let x = y;
            for _ in 0..cycle_len {
                y = f(y);
            }
            let mut k = 0u64;
            while k < cycle_len {
                let steps = (cycle_len - k).min(128);
                let ys = y;
                let mut q = one;
                for _ in 0..steps {
                    y = f(y);
                    let diff = if x >= y { x - y } else { y - x };
                    q = mont.mul(q, diff);
                }
                iterations += steps;
                if iterations > budget {
                    return None;
                }
                let g = gcd_u128(mont.from_mont(q), n);
                if g > 1 {
                    if g < n {
                        return Some(g);
                    }
                    // Backtrack one step at a time.
                    let mut z = ys;
                    for _ in 0..steps {
                        z = f(z);
                        let diff = if x >= z { x - z } else { z - x };
                        let g = gcd_u128(mont.from_mont(diff), n);
                        if g > 1 {
                            if g < n {
                                return Some(g);
                            }
                            break 'brent; // cycle degenerate for this c
                        }
                    }
                    break 'brent;
                }
                k += steps;
            }
            cycle_len *= 2;
        }
    }
    None
}

/// Brent rho over big integers; used only above 2^126.
fn rho_big(n: &BigUint, budget: u64) -> Option<BigUint> {
    let one = BigUint::one();
    let mut iterations = 0u64;
    for c_plain in 1u32..32 {
        let c = BigUint::from(c_plain);
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut cycle_len = 1u64;
        'brent: loop {
            let x = y.clone();
            for _ in 0..cycle_len {
                y = f(&y);
            }
            let mut k = 0u64;
            while k < cycle_len {
                let steps = (cycle_len - k).min(128);
                let ys = y.clone();
                let mut q = one.clone();
                for _ in 0..steps {
                    y = f(&y);
                    let diff = if x >= y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                iterations += steps;
                if iterations > budget {
                    return None;
                }
                let g = gcd_balanced(&q, n);
                if !g.is_one() {
                    if g < *n {
                        return Some(g);
                    }
                    let mut z = ys;
                    for _ in 0..steps {
                        z = f(&z);
                        let diff = if x >= z { &x - &z } else { &z - &x };
                        let g = gcd_balanced(&diff, n);
                        if !g.is_one() {
                            if g < *n {
                                return Some(g);
                            }
                            break 'brent;
                        }
                    }
                    break 'brent;
                }
                k += steps;
            }
            cycle_len *= 2;
        }
    }
    None
}

/// gcd with the larger operand reduced first (binary gcd on huge inputs is
/// quadratic in the size gap).
pub(crate) fn gcd_balanced(a: &BigUint, b: &BigUint) -> BigUint {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    if a.bits() > 4 * b.bits() {
        let r = a % b;
        if r.is_zero() {
            return b.clone();
        }
        return b.gcd(&r);
    }
    if b.bits() > 4 * a.bits() {
        let r = b % a;
        if r.is_zero() {
            return a.clone();
        }
        return a.gcd(&r);
    }
    a.gcd(b)
}

// ---------------------------------------------------------------------------
// Subproduct tree over the primes below 10^6
// ---------------------------------------------------------------------------

const LEAF_PRIMES: usize = 64;

struct PrimeTree {
    /// Primes below TRIAL_TABLE_BOUND, chunked per leaf.
    leaves: Vec<Vec<u64>>,
    /// levels[0] = leaf products; levels.last() = single root product.
    levels: Vec<Vec<BigUint>>,
}

static PRIME_TREE: Lazy<PrimeTree> = Lazy::new(|| {
    let primes = sieve(TRIAL_TABLE_BOUND);
    let leaves: Vec<Vec<u64>> = primes.chunks(LEAF_PRIMES).map(|c| c.to_vec()).collect();
    let mut levels: Vec<Vec<BigUint>> = Vec::new();
    let leaf_products: Vec<BigUint> = leaves
        .iter()
        .map(|chunk| chunk.iter().map(|&p| BigUint::from(p)).product())
        .collect();
    levels.push(leaf_products);
    while levels.last().unwrap().len() > 1 {
        let prev = levels.last().unwrap();
        let next: Vec<BigUint> = prev
            .chunks(2)
            .map(|pair| {
                if pair.len() == 2 {
                    &pair[0] * &pair[1]
                } else {
                    pair[0].clone()
                }
            })
            .collect();
        levels.push(next);
    }
    PrimeTree { leaves, levels }
});

fn sieve(bound: u64) -> Vec<u64> {
    let n = bound as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

/// All primes `p <= bound` dividing `m`, found by gcd descent through the
/// subproduct tree.
fn tree_prime_divisors(m: &BigUint, bound: u64) -> Vec<u64> {
    let tree = &PRIME_TREE;
    let mut found = Vec::new();
    let top = tree.levels.len() - 1;
    let mut stack = vec![(top, 0usize)];
    while let Some((level, idx)) = stack.pop() {
        let product = &tree.levels[level][idx];
        let g = gcd_balanced(m, product);
        if g.is_one() {
            continue;
        }
        if level == 0 {
            for &p in &tree.leaves[idx] {
                if p <= bound && (m % p).is_zero() {
                    found.push(p);
                }
            }
        } else {
            let lo = idx * 2;
            let hi = lo + 1;
            if hi < tree.levels[level - 1].len() {
                stack.push((level - 1, hi));
            }
            stack.push((level - 1, lo));
        }
    }
    found.sort_unstable();
    found
}

// ---------------------------------------------------------------------------
// Factorization driver
// ---------------------------------------------------------------------------

fn factor_u64_into(mut n: u64, out: &mut Vec<(BigUint, u32)>) {
    for p in [2u64, 3, 5] {
        let mut e = 0u32;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((BigUint::from(p), e));
        }
    }
    let mut d = 7u64;
    let increments = [4u64, 2, 4, 2, 4, 6, 2, 6]; // wheel mod 30
    let mut wheel = 0usize;
    while d <= 1024 && d * d <= n {
        if n % d == 0 {
            let mut e = 0u32;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((BigUint::from(d), e));
        }
        d += increments[wheel];
        wheel = (wheel + 1) % increments.len();
    }
    if n == 1 {
        return;
    }
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime_u64(m) {
            push_prime(out, BigUint::from(m), 1);
            continue;
        }
        let d = rho_u64(m);
        stack.push(d);
        stack.push(m / d);
    }
}

fn push_prime(out: &mut Vec<(BigUint, u32)>, p: BigUint, e: u32) {
    if let Some(entry) = out.iter_mut().find(|(q, _)| *q == p) {
        entry.1 += e;
    } else {
        out.push((p, e));
    }
}

fn factor_biguint(n: BigUint, config: &FactorConfig) -> Result<Vec<(BigUint, u32)>> {
    let mut out = Vec::new();
    if n.is_one() {
        return Ok(out);
    }
    if let Some(small) = n.to_u64() {
        factor_u64_into(small, &mut out);
        return Ok(out);
    }

    let bound = config.trial_bound.min(TRIAL_TABLE_BOUND);
    let mut rest = n;
    for p in tree_prime_divisors(&rest, bound) {
        let p_big = BigUint::from(p);
        let mut e = 0u32;
        loop {
            let (q, r) = rest.div_rem(&p_big);
            if r.is_zero() {
                rest = q;
                e += 1;
            } else {
                break;
            }
        }
        out.push((p_big, e));
    }

    // Split the remaining cofactor(s) with rho.
    let mut stack = vec![rest];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if let Some(small) = m.to_u64() {
            let mut sub = Vec::new();
            factor_u64_into(small, &mut sub);
            for (p, e) in sub {
                push_prime(&mut out, p, e);
            }
            continue;
        }
        if is_prime(&m) {
            push_prime(&mut out, m, 1);
            continue;
        }
        // Perfect powers defeat rho-style splitting; peel them first.
        if let Some((base, k)) = perfect_power(&m) {
            for _ in 0..k {
                stack.push(base.clone());
            }
            continue;
        }
        let divisor = if let Some(as_u128) = m.to_u128() {
            if as_u128 < (1u128 << 126) {
                rho_u128(as_u128, config.rho_budget).map(BigUint::from)
            } else {
                rho_big(&m, config.rho_budget)
            }
        } else {
            rho_big(&m, config.rho_budget)
        };
        match divisor {
            Some(d) => {
                stack.push(&m / &d);
                stack.push(d);
            }
            None => {
                return Err(Error::FactorBudget {
                    digits: decimal_digits(&m),
                });
            }
        }
    }
    Ok(out)
}

/// Detects `m = base^k` with k >= 2, returning the smallest such base.
fn perfect_power(m: &BigUint) -> Option<(BigUint, u32)> {
    let bits = m.bits();
    for k in (2..=bits.min(64) as u32).rev() {
        let root = m.nth_root(k);
        if root.pow(k) == *m {
            return Some((root, k));
        }
    }
    None
}

/// Exact multiset of prime exponents of a nonzero rational: the map
/// `p -> v_p(q)` over the primes dividing numerator or denominator.
pub fn rational_exponents(q: &Rational) -> Result<Vec<(BigUint, i64)>> {
    if q.is_zero() {
        return Err(Error::ZeroInput);
    }
    let num = factor(q.numer())?;
    let den = factor(&q.denom().clone())?;
    let mut map: std::collections::BTreeMap<BigUint, i64> = std::collections::BTreeMap::new();
    for (p, e) in num.factors {
        *map.entry(p).or_insert(0) += e as i64;
    }
    for (p, e) in den.factors {
        *map.entry(p).or_insert(0) -= e as i64;
    }
    Ok(map.into_iter().filter(|(_, e)| *e != 0).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn factor_small_examples() {
        let f = factor(&big(12)).unwrap();
        assert_eq!(f.sign, 1);
        assert_eq!(
            f.factors,
            vec![(BigUint::from(2u32), 2), (BigUint::from(3u32), 1)]
        );

        let f = factor(&big(-45)).unwrap();
        assert_eq!(f.sign, -1);
        assert_eq!(
            f.factors,
            vec![(BigUint::from(3u32), 2), (BigUint::from(5u32), 1)]
        );

        let f = factor(&big(1)).unwrap();
        assert_eq!(f.sign, 1);
        assert!(f.factors.is_empty());

        assert_eq!(factor(&big(0)), Err(Error::ZeroInput));
    }

    #[test]
    fn factor_reconstructs() {
        for n in [
            2i64,
            -17,
            1_000_000,
            999_983, // prime
            (1 << 40) + 1,
            600_851_475_143,
            -987_654_321_987,
        ] {
            let f = factor(&big(n)).unwrap();
            assert_eq!(f.reconstruct(), big(n), "n = {}", n);
            for (p, _) in &f.factors {
                assert!(is_prime(p), "claimed prime {} is composite", p);
            }
        }
    }

    #[test]
    fn factor_large_composites() {
        // 2^89 - 1 = 618970019642690137449562111 (prime)
        let m89 = (BigInt::one() << 89) - 1;
        let f = factor(&m89).unwrap();
        assert_eq!(f.factors.len(), 1);
        assert_eq!(f.factors[0].1, 1);

        // product of two 11-digit primes
        let p = BigInt::from(10_000_000_019u64);
        let q = BigInt::from(10_000_000_033u64);
        let f = factor(&(&p * &q)).unwrap();
        assert_eq!(f.factors.len(), 2);
        assert_eq!(f.reconstruct(), p * q);

        // smooth times a medium prime
        let n = BigInt::from(2u32).pow(30) * BigInt::from(3u32).pow(20) * 1_000_003;
        let f = factor(&n).unwrap();
        assert_eq!(f.reconstruct(), n);
    }

    #[test]
    fn factor_perfect_power() {
        let p = BigUint::from(1_000_000_007u64);
        let n = BigInt::from(p.pow(3));
        let f = factor(&n).unwrap();
        assert_eq!(f.factors, vec![(p, 3)]);
    }

    #[test]
    fn digit_cap_is_enforced() {
        let huge = BigInt::from(7u32).pow(9000);
        let cfg = FactorConfig {
            digit_cap: 100,
            ..FactorConfig::default()
        };
        match factor_with(&huge, &cfg) {
            Err(Error::FactorDigitCap { cap: 100, .. }) => {}
            other => panic!("expected digit-cap error, got {:?}", other),
        }
    }

    #[test]
    fn valuation_examples() {
        let q = |n: i64, d: i64| Rational::new(big(n), big(d));
        assert_eq!(valuation(&BigUint::from(2u32), &q(12, 1)).unwrap(), 2);
        assert_eq!(valuation(&BigUint::from(3u32), &q(4, 9)).unwrap(), -2);
        assert_eq!(valuation(&BigUint::from(5u32), &q(7, 1)).unwrap(), 0);
        assert_eq!(
            valuation(&BigUint::from(2u32), &Rational::zero()),
            Err(Error::ZeroInput)
        );
    }

    #[test]
    fn log_abs_examples() {
        let q = |n: i64, d: i64| Rational::new(big(n), big(d));
        let arch = log_abs(&Place::Archimedean, &q(-3, 2)).unwrap();
        assert!((arch - (1.5f64).ln()).abs() < 1e-14);

        let v2 = log_abs(&Place::Finite(BigUint::from(2u32)), &q(12, 1)).unwrap();
        assert!((v2 + 2.0 * (2f64).ln()).abs() < 1e-14);

        let v7 = log_abs(&Place::Finite(BigUint::from(7u32)), &q(1, 7)).unwrap();
        assert!((v7 - (7f64).ln()).abs() < 1e-14);
    }

    #[test]
    fn product_formula_exactly_on_exponents() {
        // sum of log|q|_v over all relevant places is zero; verified on the
        // exact exponent vector plus an archimedean float residue.
        let q = Rational::new(big(-2310 * 8), big(81 * 49));
        let exps = rational_exponents(&q).unwrap();
        // log|q| = sum e_p log p  must hold exactly as integers:
        let mut reconstructed = Rational::one();
        for (p, e) in &exps {
            let p_rat = Rational::from_integer(BigInt::from(p.clone()));
            if *e >= 0 {
                reconstructed *= p_rat.pow(*e as i32);
            } else {
                reconstructed /= p_rat.pow((-e) as i32);
            }
        }
        assert_eq!(reconstructed, q.abs());
        // float projection
        let arch = ln_rational_abs(&q);
        let finite: f64 = exps
            .iter()
            .map(|(p, e)| -(*e as f64) * ln_biguint(p))
            .sum();
        assert!((arch + finite).abs() < 1e-12);
    }

    #[test]
    fn ln_biguint_accuracy() {
        let n = BigUint::from(3u32).pow(200);
        let expected = 200.0 * (3f64).ln();
        assert!((ln_biguint(&n) - expected).abs() < 1e-9);

        let small = BigUint::from(12u32);
        assert!((ln_biguint(&small) - (12f64).ln()).abs() < 1e-15);
    }

    #[test]
    fn is_prime_known_values() {
        assert!(is_prime_u64(2));
        assert!(is_prime_u64(999_983));
        assert!(!is_prime_u64(999_981));
        assert!(is_prime_u64(18_446_744_073_709_551_557)); // largest u64 prime
        let m61 = (BigUint::one() << 61) - 1u32;
        assert!(is_prime(&m61));
        let m89 = (BigUint::one() << 89) - 1u32;
        assert!(is_prime(&m89));
        let m67 = (BigUint::one() << 67) - 1u32; // famously composite
        assert!(!is_prime(&m67));
        // Carmichael number
        assert!(!is_prime(&BigUint::from(561u32)));
    }

    #[test]
    fn place_constructor_checks_primality() {
        assert!(Place::finite(7u32).is_ok());
        assert!(Place::finite(8u32).is_err());
        assert!(Place::finite(1u32).is_err());
    }

    #[test]
    fn parse_rational_forms() {
        assert_eq!(parse_rational("3/4").unwrap(), Rational::new(big(3), big(4)));
        assert_eq!(parse_rational("-7").unwrap(), Rational::from_integer(big(-7)));
        assert_eq!(parse_rational("0.75").unwrap(), Rational::new(big(3), big(4)));
        assert_eq!(parse_rational("-0.5").unwrap(), Rational::new(big(-1), big(2)));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn decimal_digit_count() {
        assert_eq!(decimal_digits(&BigUint::from(1u32)), 1);
        assert_eq!(decimal_digits(&BigUint::from(9u32)), 1);
        assert_eq!(decimal_digits(&BigUint::from(10u32)), 2);
        assert_eq!(decimal_digits(&BigUint::from(10u32).pow(50)), 51);
        assert_eq!(decimal_digits(&(BigUint::from(10u32).pow(50) - 1u32)), 50);
    }
}

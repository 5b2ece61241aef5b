//! Factorial number system, truncated profinite integers and Fibonacci
//! numbers at profinite indices.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest supported precision: `(k+1)!` must fit in a `u128`.
pub const MAX_PRECISION: usize = 33;

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// A residue modulo `(k+1)!` written as `c_1·1! + c_2·2! + … + c_k·k!` with
/// `0 ≤ c_i ≤ i`. `digits[0]` is `c_1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FactorialDigits {
    digits: Vec<u32>,
}

impl FactorialDigits {
    pub fn from_digits(digits: Vec<u32>) -> Result<Self> {
        if digits.is_empty() || digits.len() > MAX_PRECISION {
            return Err(Error::InvalidArgument(format!("precision must be in 1..={MAX_PRECISION}")));
        }
        for (i, &c) in digits.iter().enumerate() {
            if c as usize > i + 1 {
                return Err(Error::InvalidArgument(format!("digit c_{} = {c} exceeds {}", i + 1, i + 1)));
            }
        }
        Ok(FactorialDigits { digits })
    }

    pub fn zero(k: usize) -> Result<Self> {
        Self::from_digits(vec![0; k])
    }

    pub fn precision(&self) -> usize {
        self.digits.len()
    }

    /// `c_1, …, c_k`.
    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    /// `(k+1)!`.
    pub fn modulus(&self) -> u128 {
        factorial(self.precision() + 1)
    }

    /// The residue in `[0, (k+1)!)`.
    pub fn value(&self) -> u128 {
        self.digits
            .iter()
            .enumerate()
            .map(|(i, &c)| c as u128 * factorial(i + 1))
            .sum()
    }

    pub fn add(&self, other: &FactorialDigits) -> Result<FactorialDigits> {
        if self.precision() != other.precision() {
            return Err(Error::PrecisionMismatch(self.precision(), other.precision()));
        }
        let mut carry = 0;
        let digits = self
            .digits
            .iter()
            .zip(&other.digits)
            .enumerate()
            .map(|(i, (&x, &y))| {
                let s = x + y + carry;
                let base = i as u32 + 2;
                carry = s / base;
                s % base
            })
            .collect();
        Ok(FactorialDigits { digits })
    }

    pub fn neg(&self) -> FactorialDigits {
        let m = self.modulus();
        let v = (m - self.value()) % m;
        from_residue(v, self.precision())
    }

    pub fn mul(&self, other: &FactorialDigits) -> Result<FactorialDigits> {
        if self.precision() != other.precision() {
            return Err(Error::PrecisionMismatch(self.precision(), other.precision()));
        }
        let m = self.modulus();
        let v = mul_mod(self.value(), other.value(), m);
        Ok(from_residue(v, self.precision()))
    }

    /// Residue modulo `m`, valid when `m` divides `(k+1)!`.
    pub fn residue_mod(&self, m: u128) -> Result<u128> {
        if m == 0 || self.modulus() % m != 0 {
            return Err(Error::InvalidArgument(format!("{m} does not divide ({}+1)!", self.precision())));
        }
        Ok(self.value() % m)
    }
}

fn mul_mod(a: u128, b: u128, m: u128) -> u128 {
    let (mut a, mut b, mut r) = (a % m, b, 0u128);
    while b > 0 {
        if b & 1 == 1 {
            r = (r + a) % m;
        }
        a = (a + a) % m;
        b >>= 1;
    }
    r
}

fn from_residue(mut v: u128, k: usize) -> FactorialDigits {
    let digits = (1..=k)
        .map(|i| {
            let base = i as u128 + 1;
            let c = v % base;
            v /= base;
            c as u32
        })
        .collect();
    FactorialDigits { digits }
}

/// `x mod (k+1)!` in factorial digits.
pub fn to_factorial(x: i128, k: usize) -> Result<FactorialDigits> {
    if k == 0 || k > MAX_PRECISION {
        return Err(Error::InvalidArgument(format!("precision must be in 1..={MAX_PRECISION}")));
    }
    let m = factorial(k + 1);
    let v = if x >= 0 {
        x as u128 % m
    } else {
        let r = x.unsigned_abs() % m;
        (m - r) % m
    };
    Ok(from_residue(v, k))
}

impl fmt::Display for FactorialDigits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d: Vec<String> = self.digits.iter().rev().map(u32::to_string).collect();
        write!(f, "({})_!", d.join(" "))
    }
}

impl Serialize for FactorialDigits {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.digits.serialize(s)
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// `v_p(x)`; `value` is `None` for `x = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PadicValuation {
    pub p: u64,
    pub value: Option<u32>,
}

impl PadicValuation {
    /// `|x|_p = p^{-v}`, zero for `x = 0`.
    pub fn norm(&self) -> f64 {
        match self.value {
            Some(v) => (self.p as f64).powi(-(v as i32)),
            None => 0.0,
        }
    }
}

pub fn padic_valuation(x: i128, p: u64) -> Result<PadicValuation> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if x == 0 {
        return Ok(PadicValuation { p, value: None });
    }
    let mut x = x.unsigned_abs();
    let mut v = 0;
    while x % p as u128 == 0 {
        x /= p as u128;
        v += 1;
    }
    Ok(PadicValuation { p, value: Some(v) })
}

fn pisano_cache() -> &'static Mutex<HashMap<u64, u64>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, u64>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Period of `F_n mod m`. For `m = 1` this is 1.
pub fn pisano_period(m: u64) -> u64 {
    if m <= 1 {
        return 1;
    }
    if let Some(&p) = pisano_cache().lock().unwrap().get(&m) {
        return p;
    }
    let (mut a, mut b) = (0u64, 1u64);
    let mut n = 0u64;
    loop {
        let c = ((a as u128 + b as u128) % m as u128) as u64;
        a = b;
        b = c;
        n += 1;
        if a == 0 && b == 1 {
            break;
        }
    }
    pisano_cache().lock().unwrap().insert(m, n);
    n
}

fn fib_small(n: u64, m: u64) -> u64 {
    let (mut a, mut b) = (0u64, 1 % m);
    for _ in 0..n {
        let c = ((a as u128 + b as u128) % m as u128) as u64;
        a = b;
        b = c;
    }
    a
}

/// `F_n mod m` for any integer `n`, using `F_{-n} = (-1)^{n-1} F_n`.
pub fn fib_mod(n: i128, m: u64) -> Result<u64> {
    if m < 2 {
        return Err(Error::InvalidArgument("modulus must be at least 2".into()));
    }
    let p = pisano_period(m) as i128;
    Ok(fib_small(n.rem_euclid(p) as u64, m))
}

/// Least `j` with `π(m) | (j+1)!`: the precision a factorial-digit index
/// needs for `F_γ mod m` to be well defined.
pub fn precision_for_modulus(m: u64) -> usize {
    let p = pisano_period(m) as u128;
    (1..).find(|&j| factorial(j + 1) % p == 0).expect("some factorial is divisible by p")
}

/// `F_γ mod m` for a truncated profinite index `γ`.
pub fn fib_mod_factorial(gamma: &FactorialDigits, m: u64) -> Result<u64> {
    if m < 2 {
        return Err(Error::InvalidArgument("modulus must be at least 2".into()));
    }
    let needed = precision_for_modulus(m);
    if gamma.precision() < needed {
        return Err(Error::horizon(needed, gamma.precision()));
    }
    let p = pisano_period(m) as u128;
    Ok(fib_small((gamma.value() % p) as u64, m))
}

/// `n! mod m`.
pub fn factorial_mod(n: u64, m: u64) -> u64 {
    let mut r = 1 % m as u128;
    for i in 1..=n as u128 {
        r = r * (i % m as u128) % m as u128;
        if r == 0 {
            break;
        }
    }
    r as u64
}

/// `F_{n!+offset} mod m`.
pub fn fib_factorial_index(n: u64, offset: i128, m: u64) -> Result<u64> {
    let p = pisano_period(m);
    let idx = factorial_mod(n, p) as i128 + offset;
    fib_mod(idx, m)
}

/// Least `n` with `π(m) | n!`: from there on `F_{n!+c} ≡ F_c (mod m)`.
pub fn factorial_stabilization_index(m: u64) -> u64 {
    let p = pisano_period(m);
    (1..).find(|&n| factorial_mod(n, p) == 0).expect("some factorial is divisible by p")
}

//! Zeckendorf (Fibonacci) numeration.
//!
//! A natural number is written as a sum of distinct, non-adjacent Fibonacci
//! numbers `F_i` with `i >= 2`. The digit string is most significant first, so
//! the word `a_1 a_2 ... a_t` denotes `sum a_i * F_{t+2-i}`. Zero is the empty
//! word internally and renders as `"0"`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ZeckError {
    #[error("digit {digit} at position {position} is not binary")]
    NonBinaryDigit { position: usize, digit: char },
    #[error("`{0}` is not a canonical Zeckendorf word")]
    NotCanonical(String),
}

/// `F_0 ..= F_93`, every Fibonacci number that fits in a `u64`.
pub const FIB_U64: [u64; 94] = {
    let mut table = [0u64; 94];
    table[1] = 1;
    let mut i = 2;
    while i < 94 {
        table[i] = table[i - 1] + table[i - 2];
        i += 1;
    }
    table
};

/// The Fibonacci number `F_i`, exactly.
pub fn fibonacci(i: usize) -> BigUint {
    if i < FIB_U64.len() {
        return BigUint::from(FIB_U64[i]);
    }
    let mut a = BigUint::from(FIB_U64[92]);
    let mut b = BigUint::from(FIB_U64[93]);
    for _ in 93..i {
        let next = &a + &b;
        a = std::mem::replace(&mut b, next);
    }
    b
}

/// A canonical Zeckendorf word: binary digits, most significant first, no
/// `11` factor and no leading zero.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ZeckWord(Vec<u8>);

impl ZeckWord {
    /// Greedy largest-Fibonacci-first encoding.
    pub fn encode(n: &BigUint) -> Self {
        if n.is_zero() {
            return ZeckWord(Vec::new());
        }
        if let Some(small) = n.to_u64() {
            return Self::encode_u64(small);
        }
        // Fibonacci weights F_2, F_3, ... up to the largest one not exceeding n.
        let mut weights = vec![BigUint::from(1u32), BigUint::from(2u32)];
        loop {
            let next = &weights[weights.len() - 1] + &weights[weights.len() - 2];
            if &next > n {
                break;
            }
            weights.push(next);
        }
        let mut rest = n.clone();
        let mut digits = Vec::with_capacity(weights.len());
        for w in weights.iter().rev() {
            if &rest >= w {
                rest -= w;
                digits.push(1);
            } else {
                digits.push(0);
            }
        }
        debug_assert!(rest.is_zero());
        ZeckWord(strip_leading_zeros(digits))
    }

    pub fn encode_u64(n: u64) -> Self {
        ZeckWord(encode_digits_u64(n))
    }

    /// Wraps a digit vector, checking canonicity.
    pub fn from_digits(digits: Vec<u8>) -> Result<Self, ZeckError> {
        check_binary(&digits)?;
        if !is_canonical(&digits) {
            return Err(ZeckError::NotCanonical(render(&digits)));
        }
        Ok(ZeckWord(digits))
    }

    pub fn digits(&self) -> &[u8] {
        &self.0
    }

    pub fn into_digits(self) -> Vec<u8> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn value(&self) -> BigUint {
        decode_unchecked(&self.0)
    }

    /// The digits left-padded with zeros to `len` (which must be at least the
    /// word length).
    pub fn padded(&self, len: usize) -> Vec<u8> {
        assert!(len >= self.0.len(), "cannot pad to a shorter length");
        let mut out = vec![0u8; len - self.0.len()];
        out.extend_from_slice(&self.0);
        out
    }
}

impl fmt::Display for ZeckWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(&self.0))
    }
}

impl FromStr for ZeckWord {
    type Err = ZeckError;

    /// Accepts `"0"` for zero; otherwise the string must already be canonical.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let digits = parse_bits(s)?;
        if digits == [0] {
            return Ok(ZeckWord::default());
        }
        Self::from_digits(digits)
    }
}

/// Parses an ASCII bit string into digits without any canonicity check.
pub fn parse_bits(s: &str) -> Result<Vec<u8>, ZeckError> {
    s.chars()
        .enumerate()
        .map(|(position, c)| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            digit => Err(ZeckError::NonBinaryDigit { position, digit }),
        })
        .collect()
}

fn check_binary(digits: &[u8]) -> Result<(), ZeckError> {
    match digits.iter().position(|&d| d > 1) {
        Some(position) => Err(ZeckError::NonBinaryDigit {
            position,
            digit: char::from_digit(digits[position] as u32, 36).unwrap_or('?'),
        }),
        None => Ok(()),
    }
}

fn render(digits: &[u8]) -> String {
    if digits.is_empty() {
        return "0".to_string();
    }
    digits.iter().map(|&d| if d == 0 { '0' } else { '1' }).collect()
}

fn strip_leading_zeros(mut digits: Vec<u8>) -> Vec<u8> {
    let first_one = digits.iter().position(|&d| d != 0).unwrap_or(digits.len());
    digits.drain(..first_one);
    digits
}

fn decode_unchecked(digits: &[u8]) -> BigUint {
    let t = digits.len();
    if t + 1 < FIB_U64.len() {
        let mut acc: u128 = 0;
        for (i, &d) in digits.iter().enumerate() {
            if d == 1 {
                acc += FIB_U64[t + 1 - i] as u128;
            }
        }
        return BigUint::from(acc);
    }
    // Horner-style evaluation with a running pair of Fibonacci weights, from
    // the least significant digit up.
    let mut acc = BigUint::zero();
    let mut lo = BigUint::from(1u32); // F_2
    let mut hi = BigUint::from(2u32); // F_3
    for &d in digits.iter().rev() {
        if d == 1 {
            acc += &lo;
        }
        let next = &lo + &hi;
        lo = std::mem::replace(&mut hi, next);
    }
    acc
}

/// The weighted Fibonacci sum of any binary digit string. Canonicity is not
/// required and leading zeros are ignored.
pub fn decode(digits: &[u8]) -> Result<BigUint, ZeckError> {
    check_binary(digits)?;
    Ok(decode_unchecked(digits))
}

/// Decodes a textual bit string; `"0"` and `""` both denote zero.
pub fn decode_str(s: &str) -> Result<BigUint, ZeckError> {
    decode(&parse_bits(s)?)
}

/// Decoding into a `u64`, `None` on overflow. Digits must be binary.
pub fn decode_u64(digits: &[u8]) -> Option<u64> {
    let t = digits.len();
    let mut acc: u64 = 0;
    for (i, &d) in digits.iter().enumerate() {
        if d != 0 {
            let w = *FIB_U64.get(t + 1 - i)?;
            acc = acc.checked_add(w)?;
        }
    }
    Some(acc)
}

/// Canonical digits of `n`, no leading zeros.
pub fn encode_digits_u64(mut n: u64) -> Vec<u8> {
    if n == 0 {
        return Vec::new();
    }
    // Largest index i >= 2 with F_i <= n.
    let mut top = 2;
    while top + 1 < FIB_U64.len() && FIB_U64[top + 1] <= n {
        top += 1;
    }
    let mut digits = Vec::with_capacity(top - 1);
    for i in (2..=top).rev() {
        if FIB_U64[i] <= n {
            n -= FIB_U64[i];
            digits.push(1);
        } else {
            digits.push(0);
        }
    }
    digits
}

/// Number of digits in the canonical encoding of `n`.
pub fn encoded_len_u64(n: u64) -> usize {
    if n == 0 {
        return 0;
    }
    let mut top = 2;
    while top + 1 < FIB_U64.len() && FIB_U64[top + 1] <= n {
        top += 1;
    }
    top - 1
}

/// True iff the word has no `11` factor and no leading zero.
pub fn is_canonical(digits: &[u8]) -> bool {
    if digits.first() == Some(&0) {
        return false;
    }
    !digits.windows(2).any(|w| w[0] == 1 && w[1] == 1)
}

/// True iff the word has no `11` factor (leading zeros allowed).
pub fn is_valid_padded(digits: &[u8]) -> bool {
    !digits.windows(2).any(|w| w[0] == 1 && w[1] == 1)
}

/// Value-preserving rewrite to canonical form by repeatedly replacing a
/// `011` factor with `100` (`F_i + F_{i+1} = F_{i+2}`).
pub fn normalize(digits: &[u8]) -> Result<ZeckWord, ZeckError> {
    check_binary(digits)?;
    let mut w = Vec::with_capacity(digits.len() + 1);
    w.push(0);
    w.extend_from_slice(digits);
    // The leftmost `11` is always preceded by a 0 (the guard digit covers the
    // front), and every rewrite removes one 1, so the sweep terminates.
    while let Some(i) = w.windows(2).position(|p| p == [1, 1]) {
        debug_assert!(i >= 1 && w[i - 1] == 0);
        w[i - 1] = 1;
        w[i] = 0;
        w[i + 1] = 0;
    }
    Ok(ZeckWord(strip_leading_zeros(w)))
}

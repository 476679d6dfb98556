//! Small helpers over arbitrary-precision integers.

pub use ibig::IBig as Int;
use ibig::ops::Abs;

pub fn int(v: i64) -> Int {
    Int::from(v)
}

pub fn zero() -> Int {
    Int::from(0u8)
}

pub fn one() -> Int {
    Int::from(1u8)
}

#[inline]
pub fn is_zero(a: &Int) -> bool {
    *a == Int::from(0u8)
}

#[inline]
pub fn is_one(a: &Int) -> bool {
    *a == Int::from(1u8)
}

#[inline]
pub fn is_neg(a: &Int) -> bool {
    *a < Int::from(0u8)
}

pub fn abs(a: &Int) -> Int {
    a.abs()
}

/// Least non-negative residue of `a` modulo `m` (m != 0).
pub fn rem_floor(a: &Int, m: &Int) -> Int {
    let r = a % m;
    if is_neg(&r) {
        r + m.abs()
    } else {
        r
    }
}

/// Reduce `a` modulo `m`, leaving it unchanged when `m` is zero.
pub fn reduce(a: &Int, m: &Int) -> Int {
    if is_zero(m) {
        a.clone()
    } else {
        rem_floor(a, m)
    }
}

/// Floor division.
pub fn div_floor(a: &Int, b: &Int) -> Int {
    let q = a / b;
    if !is_zero(&(a - &q * b)) && (is_neg(a) != is_neg(b)) {
        q - 1
    } else {
        q
    }
}

/// Quotient of the division `a / b`, which is assumed exact.
pub fn div_exact(a: &Int, b: &Int) -> Int {
    let q = a / b;
    debug_assert!(is_zero(&(a - &q * b)), "inexact division {a} / {b}");
    q
}

pub fn divides(d: &Int, a: &Int) -> bool {
    if is_zero(d) {
        is_zero(a)
    } else {
        is_zero(&(a % d))
    }
}

pub fn gcd(a: &Int, b: &Int) -> Int {
    if is_zero(a) {
        return b.abs();
    }
    if is_zero(b) {
        return a.abs();
    }
    a.gcd(b)
}

pub fn lcm(a: &Int, b: &Int) -> Int {
    if is_zero(a) || is_zero(b) {
        return zero();
    }
    div_exact(&(a * b).abs(), &gcd(a, b))
}

/// Returns `(g, x, y)` with `x*a + y*b = g = gcd(a, b) >= 0`.
pub fn ext_gcd(a: &Int, b: &Int) -> (Int, Int, Int) {
    match (is_zero(a), is_zero(b)) {
        (true, true) => (zero(), one(), zero()),
        (true, false) => (b.abs(), zero(), b.signum()),
        (false, true) => (a.abs(), a.signum(), zero()),
        (false, false) => a.extended_gcd(b),
    }
}

pub fn to_i64(a: &Int) -> Option<i64> {
    i64::try_from(a).ok()
}

pub fn to_usize(a: &Int) -> Option<usize> {
    usize::try_from(a).ok()
}

/// Parse a decimal integer string.
pub fn parse_int(s: &str) -> Option<Int> {
    let t = s.trim();
    if t.is_empty() {
        return None;
    }
    t.parse::<Int>().ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residues_are_non_negative() {
        assert_eq!(rem_floor(&int(-7), &int(3)), int(2));
        assert_eq!(rem_floor(&int(7), &int(-3)), int(1));
        assert_eq!(div_floor(&int(-7), &int(2)), int(-4));
        assert_eq!(div_floor(&int(7), &int(2)), int(3));
    }

    #[test]
    fn bezout_with_zeros() {
        for (a, b) in [(0, 0), (0, -5), (4, 0), (-12, 18), (7, 3)] {
            let (g, x, y) = ext_gcd(&int(a), &int(b));
            assert_eq!(&x * int(a) + &y * int(b), g);
            assert!(!is_neg(&g));
        }
    }

    #[test]
    fn parse_big_decimal() {
        let v = parse_int("-123456789012345678901234567890").unwrap();
        assert_eq!(v.to_string(), "-123456789012345678901234567890");
        assert!(parse_int("12a").is_none());
    }
}

//! Exact integer and rational helpers.
//!
//! Every parameter of the construction (ε-expressions, ρ scales, the list
//! size q) is derived here without floating point, so two runs on the same
//! input always agree bit for bit.

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Zero};

/// Rational used for every ε-like parameter.
pub type Rational = Ratio<u64>;
/// Wider rational for products of several parameters.
pub type Wide = Ratio<u128>;

/// Fixed-point denominator of [`ln_upper`].
pub const LN_UNIT: u128 = 1_000_000_000;

/// ⌈ln 2 · 10⁹⌉.
const LN2_UP: u128 = 693_147_181;

/// ⌈ln(1 + (b+1)/64) · 10⁹⌉ for b = 0..63.
const LN_MANTISSA_UP: [u128; 64] = [
    15504187, 30771659, 45809537, 60624622, 75223422, 89612159, 103796794, 117783036, 131576358,
    145182010, 158605031, 171850257, 184922339, 197825744, 210564770, 223143552, 235566072,
    247836164, 259957525, 271933716, 283768174, 295464213, 307025036, 318453732, 329753287,
    340926587, 351976424, 362905494, 373716410, 384411699, 394993809, 405465109, 415827896,
    426084396, 436236767, 446287103, 456237434, 466089730, 475845905, 485507816, 495077267,
    504556011, 513945752, 523248144, 532464799, 541597283, 550647118, 559615788, 568504736,
    577315366, 586049046, 594707108, 603290852, 611801542, 620240410, 628608660, 636907463,
    645137962, 653301273, 661398483, 669430654, 677398824, 685304004, 693147181,
];

pub fn wide(r: Rational) -> Wide {
    Wide::new(*r.numer() as u128, *r.denom() as u128)
}

pub fn ceil_div(a: u128, b: u128) -> u128 {
    assert!(b > 0, "division by zero");
    a.div_ceil(b)
}

pub fn ceil_wide(r: Wide) -> u128 {
    ceil_div(*r.numer(), *r.denom())
}

pub fn floor_wide(r: Wide) -> u128 {
    r.numer() / r.denom()
}

/// ⌊log2 x⌋ for x ≥ 1.
pub fn floor_log2(x: u128) -> u32 {
    assert!(x >= 1);
    127 - x.leading_zeros()
}

/// ⌈log2 x⌉ for x ≥ 1 (0 for x = 1).
pub fn ceil_log2(x: u128) -> u32 {
    assert!(x >= 1);
    if x == 1 {
        0
    } else {
        floor_log2(x - 1) + 1
    }
}

/// Smallest r ≥ 1 with r^p ≥ x.
pub fn ceil_root(x: u128, p: u32) -> u128 {
    assert!(p >= 1);
    if x <= 1 {
        return 1;
    }
    let reaches = |r: u128| match r.checked_pow(p) {
        Some(v) => v >= x,
        None => true,
    };
    let (mut lo, mut hi) = (1u128, 1u128);
    while !reaches(hi) {
        lo = hi;
        hi *= 2;
    }
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if reaches(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    lo
}

/// ⌈√x⌉.
pub fn ceil_sqrt(x: u128) -> u128 {
    if x == 0 {
        0
    } else {
        ceil_root(x, 2)
    }
}

/// Upper bound on ln x in units of 10⁻⁹, from a 64-bucket mantissa table.
pub fn ln_upper(x: u64) -> u128 {
    assert!(x >= 1);
    let x = x as u128;
    let k = floor_log2(x);
    let base = 1u128 << k;
    let bucket = ceil_div((x - base) * 64, base);
    let frac = if bucket == 0 { 0 } else { LN_MANTISSA_UP[bucket as usize - 1] };
    k as u128 * LN2_UP + frac
}

/// Is `base^exp ≤ n`, computed exactly.
pub fn pow_at_most(base: Wide, exp: u32, n: u128) -> bool {
    let num = BigUint::from(*base.numer()).pow(exp);
    let den = BigUint::from(*base.denom()).pow(exp);
    num <= BigUint::from(n) * den
}

/// Largest p ≥ 0 with base^{p²} ≤ n, i.e. ⌊√(log n / log base)⌋ for base > 1.
pub fn sqrt_log_ratio(n: u128, base: Wide) -> u32 {
    assert!(base > Wide::one(), "base must exceed 1");
    let mut p = 0u32;
    while pow_at_most(base, (p + 1) * (p + 1), n) {
        p += 1;
    }
    p
}

/// (1 + x)^y as an exact rational.
pub fn pow_wide(x: Wide, y: u32) -> Wide {
    let mut acc = Wide::one();
    for _ in 0..y {
        acc *= x;
    }
    acc
}

/// Least common multiple, panicking on overflow.
pub fn lcm(a: u64, b: u64) -> u64 {
    let g = a.gcd(&b);
    (a / g).checked_mul(b).expect("lcm overflow")
}

/// Parses `num/den` (or a bare integer) into a reduced rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim().parse().ok()?, b.trim().parse().ok()?),
        None => (s.trim().parse().ok()?, 1u64),
    };
    if den == 0 {
        return None;
    }
    Some(Rational::new(num, den))
}

/// `true` iff 0 < ε ≤ 1.
pub fn valid_epsilon(eps: Rational) -> bool {
    !eps.is_zero() && eps <= Rational::one()
}

/// Decimal rendering for reports; never used in decisions.
pub fn to_f64(r: Wide) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// `num/den`, or just `num` for integers.
pub fn fmt_ratio<T: std::fmt::Display + Clone + num_integer::Integer>(r: &Ratio<T>) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_ratio(r))
}

pub fn ser_wide<S: serde::Serializer>(r: &Wide, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_ratio(r))
}

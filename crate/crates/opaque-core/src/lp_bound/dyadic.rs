//! Exact rational enclosures for the handful of irrational constants feeding
//! the LP (π, sin, cos, square roots), plus directed rounding to dyadic
//! rationals. Everything is computed from integer arithmetic: series partial
//! sums with alternating-remainder bounds and integer square roots, so no
//! correctness assumption on libm enters the certified pipeline.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Parse a plain decimal like "0.1793" or "2" exactly.
pub fn rat_from_decimal(s: &str) -> Option<Rat> {
    let s = s.trim();
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1i32, rest),
        None => (1, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let num: BigInt = digits.parse().ok()?;
    let den = BigInt::from(10u8).pow(frac_part.len() as u32);
    Some(Rat::new(num * BigInt::from(sign), den))
}

/// ceil(r · 2^bits) / 2^bits.
pub fn round_up_dyadic(r: &Rat, bits: u32) -> Rat {
    let scale = BigInt::one() << bits;
    let scaled = r * Rat::from_integer(scale.clone());
    Rat::new(scaled.ceil().to_integer(), scale)
}

/// floor(r · 2^bits) / 2^bits.
pub fn round_down_dyadic(r: &Rat, bits: u32) -> Rat {
    let scale = BigInt::one() << bits;
    let scaled = r * Rat::from_integer(scale.clone());
    Rat::new(scaled.floor().to_integer(), scale)
}

/// A closed interval with exact rational endpoints. Arithmetic is exact;
/// only the transcendental constructors introduce (rigorous) widening.
#[derive(Clone, Debug)]
pub struct RatInterval {
    pub lo: Rat,
    pub hi: Rat,
}

impl RatInterval {
    pub fn new(lo: Rat, hi: Rat) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        RatInterval { lo, hi }
    }

    pub fn point(r: Rat) -> Self {
        RatInterval {
            lo: r.clone(),
            hi: r,
        }
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn add(&self, o: &RatInterval) -> Self {
        RatInterval::new(&self.lo + &o.lo, &self.hi + &o.hi)
    }

    pub fn sub(&self, o: &RatInterval) -> Self {
        RatInterval::new(&self.lo - &o.hi, &self.hi - &o.lo)
    }

    pub fn mul(&self, o: &RatInterval) -> Self {
        let products = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        let lo = products.iter().min().expect("nonempty").clone();
        let hi = products.iter().max().expect("nonempty").clone();
        RatInterval::new(lo, hi)
    }

    /// Division of a non-negative interval by a strictly positive interval.
    pub fn div_pos(&self, o: &RatInterval) -> Self {
        assert!(o.lo.is_positive(), "divisor interval must be positive");
        assert!(!self.lo.is_negative(), "dividend interval must be non-negative");
        RatInterval::new(&self.lo / &o.hi, &self.hi / &o.lo)
    }

    pub fn scale(&self, r: &Rat) -> Self {
        if r.is_negative() {
            RatInterval::new(&self.hi * r, &self.lo * r)
        } else {
            RatInterval::new(&self.lo * r, &self.hi * r)
        }
    }

    /// Outward rounding to the 2^-bits grid; keeps numerators small.
    pub fn compress(&self, bits: u32) -> Self {
        RatInterval::new(
            round_down_dyadic(&self.lo, bits),
            round_up_dyadic(&self.hi, bits),
        )
    }

    pub fn to_f64(&self) -> f64 {
        let mid = (&self.lo + &self.hi) / Rat::from_integer(BigInt::from(2));
        mid.to_f64().unwrap_or(f64::NAN)
    }
}

fn pow2_inv(bits: u32) -> Rat {
    Rat::new(BigInt::one(), BigInt::one() << bits)
}

/// Enclosure of √r for r ≥ 0, verified by exact squaring.
pub fn sqrt_interval(r: &Rat, bits: u32) -> RatInterval {
    assert!(!r.is_negative(), "sqrt of a negative rational");
    if r.is_zero() {
        return RatInterval::point(Rat::zero());
    }
    let scale = BigInt::one() << bits;
    let scaled = (r.numer() * &scale * &scale) / r.denom();
    let root = scaled.sqrt();
    let ulp = pow2_inv(bits);
    let mut lo = Rat::new(root.clone(), scale.clone());
    let mut hi = Rat::new(root + BigInt::one(), scale);
    for _ in 0..4 {
        if &lo * &lo > *r {
            lo -= &ulp;
        }
        if &hi * &hi < *r {
            hi += &ulp;
        }
    }
    assert!(&lo * &lo <= *r && *r <= &hi * &hi, "sqrt enclosure failed");
    RatInterval::new(lo.max(Rat::zero()), hi)
}

/// arctan(1/x) for integer x ≥ 2, by its alternating series.
fn atan_inv(x: i64, bits: u32) -> RatInterval {
    let target = pow2_inv(bits + 8);
    let x2 = Rat::from_integer(BigInt::from(x * x));
    let mut term = Rat::new(BigInt::one(), BigInt::from(x));
    let mut power = term.clone(); // 1/x^(2k+1)
    let mut sum = term.clone();
    let mut k = 0u32;
    loop {
        k += 1;
        power /= &x2;
        term = &power / Rat::from_integer(BigInt::from(2 * k as i64 + 1));
        if k % 2 == 1 {
            sum -= &term;
        } else {
            sum += &term;
        }
        if term < target {
            break;
        }
    }
    // remainder is bounded by the first omitted term
    let next = (&power / &x2) / Rat::from_integer(BigInt::from(2 * k as i64 + 3));
    RatInterval::new(&sum - &next, &sum + &next).compress(bits + 4)
}

/// Machin's formula: π = 16·arctan(1/5) − 4·arctan(1/239).
pub fn pi_interval(bits: u32) -> RatInterval {
    let a = atan_inv(5, bits + 8);
    let b = atan_inv(239, bits + 8);
    a.scale(&rat(16, 1)).sub(&b.scale(&rat(4, 1))).compress(bits)
}

/// sin at an exact rational point, |x| ≤ 2, by the alternating Taylor series.
fn sin_point(x: &Rat, bits: u32) -> RatInterval {
    assert!(x.abs() <= rat(2, 1), "series domain");
    let target = pow2_inv(bits + 8);
    let x2 = x * x;
    let mut term = x.clone();
    let mut sum = x.clone();
    let mut k = 0u32;
    loop {
        k += 1;
        let d = BigInt::from((2 * k) as u64 * (2 * k + 1) as u64);
        term = &term * &x2 / Rat::from_integer(d);
        if k % 2 == 1 {
            sum -= &term;
        } else {
            sum += &term;
        }
        if k >= 2 && term.abs() < target {
            break;
        }
    }
    let bound = term.abs();
    RatInterval::new(&sum - &bound, &sum + &bound).compress(bits + 4)
}

/// cos at an exact rational point, |x| ≤ 2.
fn cos_point(x: &Rat, bits: u32) -> RatInterval {
    assert!(x.abs() <= rat(2, 1), "series domain");
    let target = pow2_inv(bits + 8);
    let x2 = x * x;
    let mut term = Rat::one();
    let mut sum = Rat::one();
    let mut k = 0u32;
    loop {
        k += 1;
        let d = BigInt::from((2 * k - 1) as u64 * (2 * k) as u64);
        term = &term * &x2 / Rat::from_integer(d);
        if k % 2 == 1 {
            sum -= &term;
        } else {
            sum += &term;
        }
        if k >= 2 && term.abs() < target {
            break;
        }
    }
    let bound = term.abs();
    RatInterval::new(&sum - &bound, &sum + &bound).compress(bits + 4)
}

/// sin over an interval inside [0, π/2], where it is increasing.
pub fn sin_interval(x: &RatInterval, bits: u32) -> RatInterval {
    assert!(!x.lo.is_negative() && x.hi <= rat(1571, 1000), "monotone domain");
    RatInterval::new(sin_point(&x.lo, bits).lo, sin_point(&x.hi, bits).hi)
}

/// cos over an interval inside [0, π/2], where it is decreasing.
pub fn cos_interval(x: &RatInterval, bits: u32) -> RatInterval {
    assert!(!x.lo.is_negative() && x.hi <= rat(1571, 1000), "monotone domain");
    RatInterval::new(cos_point(&x.hi, bits).lo, cos_point(&x.lo, bits).hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(iv: &RatInterval, v: f64, tol: f64) {
        let lo = iv.lo.to_f64().unwrap();
        let hi = iv.hi.to_f64().unwrap();
        assert!(lo <= v + tol && v - tol <= hi, "[{lo}, {hi}] vs {v}");
        assert!(hi - lo < tol, "interval too wide: {}", hi - lo);
    }

    #[test]
    fn pi_enclosure() {
        let pi = pi_interval(128);
        close(&pi, std::f64::consts::PI, 1e-30);
        assert!(pi.width() < pow2_inv(120));
    }

    #[test]
    fn sqrt_enclosures() {
        let s2 = sqrt_interval(&rat(2, 1), 128);
        close(&s2, 2.0f64.sqrt(), 1e-15);
        assert!(&s2.lo * &s2.lo <= rat(2, 1));
        assert!(&s2.hi * &s2.hi >= rat(2, 1));
        close(&sqrt_interval(&rat(1, 4), 96), 0.5, 1e-20);
        close(&sqrt_interval(&rat(0, 1), 96), 0.0, 1e-20);
    }

    #[test]
    fn trig_enclosures() {
        let x = RatInterval::point(rat(1, 2));
        close(&sin_interval(&x, 128), 0.5f64.sin(), 1e-15);
        close(&cos_interval(&x, 128), 0.5f64.cos(), 1e-15);
        let tiny = RatInterval::point(rat(1, 100000));
        close(&sin_interval(&tiny, 128), 1e-5f64.sin(), 1e-20);
    }

    #[test]
    fn directed_rounding_brackets() {
        let pi = pi_interval(200);
        let up = round_up_dyadic(&pi.hi, 64);
        let down = round_down_dyadic(&pi.lo, 64);
        assert!(down < up);
        assert!(up.clone() - down.clone() < rat(1, 1 << 60));
        assert!(down.to_f64().unwrap() <= std::f64::consts::PI);
        assert!(up.to_f64().unwrap() >= std::f64::consts::PI);
    }

    #[test]
    fn decimal_parsing() {
        assert_eq!(rat_from_decimal("0.1793").unwrap(), rat(1793, 10000));
        assert_eq!(rat_from_decimal("2").unwrap(), rat(2, 1));
        assert_eq!(rat_from_decimal("-1.5").unwrap(), rat(-3, 2));
        assert!(rat_from_decimal("abc").is_none());
    }
}

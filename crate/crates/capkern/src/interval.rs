//! Rigorous fixed-point interval arithmetic over dyadic rationals, with a
//! directed natural logarithm, complex rectangle arithmetic, and validated
//! enclosures of the complex roots of integer polynomials.
//!
//! Every value is a pair of mantissas at a shared binary precision; all
//! roundings are outward. These intervals drive the logarithmic embedding
//! used for unit-exponent recovery; final answers are always re-verified by
//! exact arithmetic elsewhere.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::poly::{self, ZPoly};
use crate::{Error, Result};

/// Closed interval [lo, hi] / 2^prec.
#[derive(Clone, PartialEq, Eq)]
pub struct Iv {
    pub lo: BigInt,
    pub hi: BigInt,
    pub prec: u32,
}

impl std::fmt::Debug for Iv {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{:.6e}, {:.6e}]@{}", self.lo_f64(), self.hi_f64(), self.prec)
    }
}

fn floor_shift(x: &BigInt, k: u32) -> BigInt {
    x >> k
}

fn ceil_shift(x: &BigInt, k: u32) -> BigInt {
    -(&(-x) >> k)
}

impl Iv {
    pub fn point(m: BigInt, prec: u32) -> Iv {
        Iv { lo: m.clone(), hi: m, prec }
    }

    pub fn from_int(n: &BigInt, prec: u32) -> Iv {
        Iv::point(n << prec, prec)
    }

    pub fn zero(prec: u32) -> Iv {
        Iv::point(BigInt::zero(), prec)
    }

    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: u32) -> Iv {
        assert!(!den.is_zero());
        let (num, den) =
            if den.is_negative() { (-num, -den) } else { (num.clone(), den.clone()) };
        let scaled: BigInt = &num << prec;
        let lo = scaled.div_floor(&den);
        let hi = scaled.div_ceil(&den);
        Iv { lo, hi, prec }
    }

    pub fn from_rational(q: &BigRational, prec: u32) -> Iv {
        Iv::from_ratio(q.numer(), q.denom(), prec)
    }

    pub fn lo_f64(&self) -> f64 {
        self.lo.to_f64().unwrap_or(f64::NEG_INFINITY) / 2f64.powi(self.prec as i32)
    }

    pub fn hi_f64(&self) -> f64 {
        self.hi.to_f64().unwrap_or(f64::INFINITY) / 2f64.powi(self.prec as i32)
    }

    pub fn is_valid(&self) -> bool {
        self.lo <= self.hi
    }

    pub fn width_mantissa(&self) -> BigInt {
        &self.hi - &self.lo
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    /// Does this interval contain exactly one integer? Returns it if so.
    pub fn unique_integer(&self) -> Option<BigInt> {
        let lo_int = ceil_shift(&self.lo, self.prec);
        let hi_int = floor_shift(&self.hi, self.prec);
        if lo_int == hi_int {
            Some(lo_int)
        } else {
            None
        }
    }

    pub fn add(&self, other: &Iv) -> Iv {
        debug_assert_eq!(self.prec, other.prec);
        Iv { lo: &self.lo + &other.lo, hi: &self.hi + &other.hi, prec: self.prec }
    }

    pub fn sub(&self, other: &Iv) -> Iv {
        debug_assert_eq!(self.prec, other.prec);
        Iv { lo: &self.lo - &other.hi, hi: &self.hi - &other.lo, prec: self.prec }
    }

    pub fn neg(&self) -> Iv {
        Iv { lo: -&self.hi, hi: -&self.lo, prec: self.prec }
    }

    pub fn mul(&self, other: &Iv) -> Iv {
        debug_assert_eq!(self.prec, other.prec);
        let cands =
            [&self.lo * &other.lo, &self.lo * &other.hi, &self.hi * &other.lo, &self.hi * &other.hi];
        let lo = cands.iter().min().unwrap().clone();
        let hi = cands.iter().max().unwrap().clone();
        Iv { lo: floor_shift(&lo, self.prec), hi: ceil_shift(&hi, self.prec), prec: self.prec }
    }

    pub fn sqr(&self) -> Iv {
        if self.contains_zero() {
            let m = (&self.lo * &self.lo).max(&self.hi * &self.hi);
            Iv { lo: BigInt::zero(), hi: ceil_shift(&m, self.prec), prec: self.prec }
        } else {
            self.mul(self)
        }
    }

    pub fn scale_int(&self, n: &BigInt) -> Iv {
        if n.is_negative() {
            Iv { lo: &self.hi * n, hi: &self.lo * n, prec: self.prec }
        } else {
            Iv { lo: &self.lo * n, hi: &self.hi * n, prec: self.prec }
        }
    }

    /// Division; requires the divisor to be sign-definite.
    pub fn div(&self, other: &Iv) -> Result<Iv> {
        debug_assert_eq!(self.prec, other.prec);
        if other.contains_zero() {
            return Err(Error::RecoveryFailure("interval division by zero-straddling interval".into()));
        }
        let shift = |x: &BigInt| -> BigInt { x << self.prec };
        let mut lo: Option<BigInt> = None;
        let mut hi: Option<BigInt> = None;
        for a in [&self.lo, &self.hi] {
            for b in [&other.lo, &other.hi] {
                let fl = shift(a).div_floor(b);
                let cl = shift(a).div_ceil(b);
                lo = Some(match lo {
                    None => fl.clone(),
                    Some(cur) => cur.min(fl.clone()),
                });
                hi = Some(match hi {
                    None => cl.clone(),
                    Some(cur) => cur.max(cl.clone()),
                });
            }
        }
        Ok(Iv { lo: lo.unwrap(), hi: hi.unwrap(), prec: self.prec })
    }

    /// The union hull of two intervals.
    pub fn hull(&self, other: &Iv) -> Iv {
        Iv {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
            prec: self.prec,
        }
    }

    pub fn intersect(&self, other: &Iv) -> Option<Iv> {
        let lo = self.lo.clone().max(other.lo.clone());
        let hi = self.hi.clone().min(other.hi.clone());
        if lo <= hi {
            Some(Iv { lo, hi, prec: self.prec })
        } else {
            None
        }
    }

    pub fn strictly_inside(&self, outer: &Iv) -> bool {
        self.lo > outer.lo && self.hi < outer.hi
    }

    /// |self| as an interval.
    pub fn abs(&self) -> Iv {
        if self.is_positive() {
            self.clone()
        } else if self.is_negative() {
            self.neg()
        } else {
            let m = (-&self.lo).max(self.hi.clone());
            Iv { lo: BigInt::zero(), hi: m, prec: self.prec }
        }
    }

    /// Rescale to a different precision, outward.
    pub fn to_prec(&self, prec: u32) -> Iv {
        if prec >= self.prec {
            let k = prec - self.prec;
            Iv { lo: &self.lo << k, hi: &self.hi << k, prec }
        } else {
            let k = self.prec - prec;
            Iv { lo: floor_shift(&self.lo, k), hi: ceil_shift(&self.hi, k), prec }
        }
    }

    /// Natural logarithm. Requires a strictly positive interval.
    pub fn ln(&self) -> Result<Iv> {
        if !self.is_positive() {
            return Err(Error::RecoveryFailure("ln of non-positive interval".into()));
        }
        let lo = ln_dyadic(&self.lo, self.prec, false);
        let hi = ln_dyadic(&self.hi, self.prec, true);
        Ok(Iv { lo: lo.lo, hi: hi.hi, prec: self.prec })
    }
}

/// Enclosure of ln(m / 2^prec) for m > 0, at the same output precision.
/// The `upper` flag only matters for which endpoint the caller uses; the
/// whole returned interval is a valid enclosure either way.
fn ln_dyadic(m: &BigInt, prec: u32, _upper: bool) -> Iv {
    debug_assert!(m.is_positive());
    let wp = prec + 32;
    // m/2^prec = y * 2^k with y = m/2^(b-1) in [1, 2).
    let b = m.bits() as u32;
    let k = b as i64 - 1 - prec as i64;
    // t = (y - 1)/(y + 1) = (m - 2^(b-1)) / (m + 2^(b-1)), in [0, 1/3).
    let pow = BigInt::one() << (b - 1);
    let t = Iv::from_ratio(&(m - &pow), &(m + &pow), wp);
    // ln y = 2 * sum_{j odd} t^j / j, tail after term J bounded by
    // t^(J+2) / ((J+2) (1 - t^2)).
    let t2 = t.sqr();
    let mut term = t.clone(); // t^j for current odd j
    let mut j = 1u32;
    let mut sum = Iv::zero(wp);
    loop {
        let contrib = term.div(&Iv::from_int(&BigInt::from(j), wp)).expect("j > 0");
        sum = sum.add(&contrib);
        // Stop when the next term cannot matter at this precision.
        let next = term.mul(&t2);
        if next.hi.bits() as i64 <= 4 || j > 4 * wp {
            // Tail bound: t^(j+2)/((j+2)(1 - t^2)) evaluated outward.
            let one = Iv::from_int(&BigInt::one(), wp);
            let denom = one.sub(&t2);
            let tail_hi = if denom.is_positive() {
                next.div(&denom).expect("positive").hi.max(BigInt::zero())
            } else {
                // t < 1/3 always, so this cannot happen; be safe anyway.
                next.hi.clone() << 2
            };
            sum = Iv { lo: sum.lo.clone(), hi: &sum.hi + tail_hi, prec: wp };
            break;
        }
        term = next;
        j += 2;
    }
    let ln_y = sum.scale_int(&BigInt::from(2));
    let ln2 = ln2_cached(wp);
    let total = ln_y.add(&ln2.scale_int(&BigInt::from(k)));
    total.to_prec(prec)
}

fn ln2_cached(prec: u32) -> Iv {
    static CACHE: OnceLock<Mutex<HashMap<u32, Iv>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap();
    if let Some(v) = guard.get(&prec) {
        return v.clone();
    }
    // ln 2 = 2 atanh(1/3): series sum (1/3)^j / j over odd j, doubled.
    let wp = prec + 32;
    let t = Iv::from_ratio(&BigInt::one(), &BigInt::from(3), wp);
    let t2 = t.sqr();
    let mut term = t.clone();
    let mut j = 1u32;
    let mut sum = Iv::zero(wp);
    loop {
        let contrib = term.div(&Iv::from_int(&BigInt::from(j), wp)).expect("j > 0");
        sum = sum.add(&contrib);
        let next = term.mul(&t2);
        if next.hi.bits() as i64 <= 4 {
            let one = Iv::from_int(&BigInt::one(), wp);
            let denom = one.sub(&t2);
            let tail_hi = next.div(&denom).expect("positive").hi.max(BigInt::zero());
            sum = Iv { lo: sum.lo.clone(), hi: &sum.hi + tail_hi, prec: wp };
            break;
        }
        term = next;
        j += 2;
    }
    let v = sum.scale_int(&BigInt::from(2)).to_prec(prec);
    guard.insert(prec, v.clone());
    v
}

/// Complex rectangle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CIv {
    pub re: Iv,
    pub im: Iv,
}

impl CIv {
    pub fn new(re: Iv, im: Iv) -> CIv {
        CIv { re, im }
    }

    pub fn from_int(n: &BigInt, prec: u32) -> CIv {
        CIv { re: Iv::from_int(n, prec), im: Iv::zero(prec) }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec
    }

    pub fn add(&self, o: &CIv) -> CIv {
        CIv { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }

    pub fn sub(&self, o: &CIv) -> CIv {
        CIv { re: self.re.sub(&o.re), im: self.im.sub(&o.im) }
    }

    pub fn mul(&self, o: &CIv) -> CIv {
        CIv {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }

    pub fn abs_sq(&self) -> Iv {
        self.re.sqr().add(&self.im.sqr())
    }

    pub fn div(&self, o: &CIv) -> Result<CIv> {
        let d = o.abs_sq();
        if d.contains_zero() {
            return Err(Error::RecoveryFailure("complex interval division by zero".into()));
        }
        let conj = CIv { re: o.re.clone(), im: o.im.neg() };
        let num = self.mul(&conj);
        Ok(CIv { re: num.re.div(&d)?, im: num.im.div(&d)? })
    }

    pub fn strictly_inside(&self, outer: &CIv) -> bool {
        self.re.strictly_inside(&outer.re) && self.im.strictly_inside(&outer.im)
    }

    pub fn intersect(&self, o: &CIv) -> Option<CIv> {
        Some(CIv { re: self.re.intersect(&o.re)?, im: self.im.intersect(&o.im)? })
    }

    pub fn midpoint(&self) -> CIv {
        let re = (&self.re.lo + &self.re.hi) >> 1;
        let im = (&self.im.lo + &self.im.hi) >> 1;
        CIv { re: Iv::point(re, self.re.prec), im: Iv::point(im, self.im.prec) }
    }

    pub fn to_prec(&self, prec: u32) -> CIv {
        CIv { re: self.re.to_prec(prec), im: self.im.to_prec(prec) }
    }

    fn disjoint(&self, o: &CIv) -> bool {
        self.re.intersect(&o.re).is_none() || self.im.intersect(&o.im).is_none()
    }
}

/// Evaluate an integer polynomial on a complex rectangle (Horner).
pub fn eval_poly(f: &ZPoly, z: &CIv) -> CIv {
    let prec = z.prec();
    let mut acc = CIv::from_int(&BigInt::zero(), prec);
    for c in f.coeffs.iter().rev() {
        acc = acc.mul(z).add(&CIv::from_int(c, prec));
    }
    acc
}

// ---------------------------------------------------------------------------
// Validated root enclosures
// ---------------------------------------------------------------------------

/// One archimedean place of the field Q[x]/(f): a validated enclosure of a
/// real root, or of one root from each complex-conjugate pair (the one with
/// positive imaginary part).
#[derive(Clone, Debug)]
pub struct RootEnclosures {
    pub prec: u32,
    pub real: Vec<Iv>,
    pub complex: Vec<CIv>,
}

#[derive(Clone, Copy, Debug)]
struct C64 {
    re: f64,
    im: f64,
}

impl C64 {
    fn mul(self, o: C64) -> C64 {
        C64 { re: self.re * o.re - self.im * o.im, im: self.re * o.im + self.im * o.re }
    }
    fn sub(self, o: C64) -> C64 {
        C64 { re: self.re - o.re, im: self.im - o.im }
    }
    fn add(self, o: C64) -> C64 {
        C64 { re: self.re + o.re, im: self.im + o.im }
    }
    fn div(self, o: C64) -> C64 {
        let d = o.re * o.re + o.im * o.im;
        C64 { re: (self.re * o.re + self.im * o.im) / d, im: (self.im * o.re - self.re * o.im) / d }
    }
    fn norm_sq(self) -> f64 {
        self.re * self.re + self.im * self.im
    }
}

/// Aberth-Ehrlich simultaneous iteration for approximate roots. Only used
/// for seeding; every output is re-validated by interval Newton.
fn aberth_roots(f: &ZPoly) -> Vec<C64> {
    let d = f.degree();
    let coeffs: Vec<f64> = f.coeffs.iter().map(|c| c.to_f64().unwrap()).collect();
    let eval = |z: C64| -> C64 {
        let mut acc = C64 { re: 0.0, im: 0.0 };
        for &c in coeffs.iter().rev() {
            acc = acc.mul(z).add(C64 { re: c, im: 0.0 });
        }
        acc
    };
    let dcoeffs: Vec<f64> = coeffs[1..].iter().enumerate().map(|(i, &c)| c * (i + 1) as f64).collect();
    let deval = |z: C64| -> C64 {
        let mut acc = C64 { re: 0.0, im: 0.0 };
        for &c in dcoeffs.iter().rev() {
            acc = acc.mul(z).add(C64 { re: c, im: 0.0 });
        }
        acc
    };
    let radius = 1.0 + coeffs[..d].iter().map(|c| c.abs()).fold(0.0, f64::max);
    let mut z: Vec<C64> = (0..d)
        .map(|j| {
            let angle = 2.0 * std::f64::consts::PI * (j as f64 + 0.3) / d as f64 + 0.4;
            C64 { re: radius * angle.cos(), im: radius * angle.sin() }
        })
        .collect();
    for _ in 0..300 {
        let mut moved = 0.0f64;
        for j in 0..d {
            let fz = eval(z[j]);
            let dfz = deval(z[j]);
            if dfz.norm_sq() == 0.0 {
                continue;
            }
            let newton = fz.div(dfz);
            let mut sum = C64 { re: 0.0, im: 0.0 };
            for k in 0..d {
                if k != j {
                    let diff = z[j].sub(z[k]);
                    if diff.norm_sq() > 1e-30 {
                        sum = sum.add(C64 { re: 1.0, im: 0.0 }.div(diff));
                    }
                }
            }
            let denom = C64 { re: 1.0, im: 0.0 }.sub(newton.mul(sum));
            let step = newton.div(denom);
            z[j] = z[j].sub(step);
            moved = moved.max(step.norm_sq());
        }
        if moved < 1e-28 {
            break;
        }
    }
    z
}

fn f64_to_mantissa(x: f64, prec: u32) -> BigInt {
    let scaled = x * 2f64.powi(prec.min(52) as i32);
    let base = BigInt::from(scaled.round() as i64);
    if prec > 52 {
        base << (prec - 52)
    } else {
        base
    }
}

/// Validate and refine one complex root inside a box around the seed.
fn validate_complex_root(f: &ZPoly, df: &ZPoly, seed: C64, prec: u32) -> Option<CIv> {
    // Initial half-width schedule, in powers of two.
    for h_exp in [20u32, 16, 24, 12, 28] {
        let h = BigInt::one() << prec.saturating_sub(h_exp).max(1);
        let re_m = f64_to_mantissa(seed.re, prec);
        let im_m = f64_to_mantissa(seed.im, prec);
        let mut z = CIv {
            re: Iv { lo: &re_m - &h, hi: &re_m + &h, prec },
            im: Iv { lo: &im_m - &h, hi: &im_m + &h, prec },
        };
        let mut certified = false;
        for _ in 0..64 {
            let m = z.midpoint();
            let fm = eval_poly(f, &m);
            let dfz = eval_poly(df, &z);
            let Ok(quot) = fm.div(&dfz) else { break };
            let n = m.sub(&quot);
            if n.strictly_inside(&z) {
                certified = true;
            }
            match n.intersect(&z) {
                Some(next) => {
                    let shrunk = next.re.width_mantissa() < z.re.width_mantissa()
                        || next.im.width_mantissa() < z.im.width_mantissa();
                    z = next;
                    if !shrunk {
                        break;
                    }
                }
                None => break,
            }
        }
        if certified {
            return Some(z);
        }
    }
    None
}

impl RootEnclosures {
    /// Validated enclosures of all roots of a monic squarefree integer
    /// polynomial, one representative per archimedean place.
    pub fn compute(f: &ZPoly, prec: u32) -> Result<RootEnclosures> {
        let d = f.degree();
        let df = f.derivative();
        // Real roots by Sturm bisection: fully exact.
        let sturm = poly::Sturm::new(f);
        let isolated = poly::isolate_real_roots(f);
        let width = BigRational::new(BigInt::one(), BigInt::one() << (prec + 8));
        let mut real = Vec::new();
        for (lo, hi) in &isolated {
            let (l, h) = poly::refine_root(&sturm, lo, hi, &width);
            let lo_iv = Iv::from_rational(&l, prec);
            let hi_iv = Iv::from_rational(&h, prec);
            real.push(Iv { lo: lo_iv.lo, hi: hi_iv.hi, prec });
        }
        let r1 = real.len();
        if (d - r1) % 2 != 0 {
            return Err(Error::RecoveryFailure("real root parity violation".into()));
        }
        let r2 = (d - r1) / 2;
        // Complex seeds, keep those in the upper half plane.
        let mut complex = Vec::new();
        if r2 > 0 {
            let seeds: Vec<C64> =
                aberth_roots(f).into_iter().filter(|z| z.im > 1e-9).collect();
            if seeds.len() != r2 {
                return Err(Error::RecoveryFailure(format!(
                    "expected {r2} upper-half-plane roots, found {}",
                    seeds.len()
                )));
            }
            for seed in seeds {
                let boxed = validate_complex_root(f, &df, seed, prec).ok_or_else(|| {
                    Error::RecoveryFailure("complex root validation failed".into())
                })?;
                if !boxed.im.is_positive() {
                    return Err(Error::RecoveryFailure(
                        "validated box touches the real axis".into(),
                    ));
                }
                complex.push(boxed);
            }
            // Deterministic order and pairwise disjointness certify that the
            // boxes capture distinct conjugate pairs.
            complex.sort_by(|a, b| (a.re.lo.clone(), a.im.lo.clone()).cmp(&(b.re.lo.clone(), b.im.lo.clone())));
            for i in 0..complex.len() {
                for j in i + 1..complex.len() {
                    if !complex[i].disjoint(&complex[j]) {
                        return Err(Error::RecoveryFailure(
                            "complex root boxes overlap; raise precision".into(),
                        ));
                    }
                }
            }
        }
        Ok(RootEnclosures { prec, real, complex })
    }

    pub fn num_places(&self) -> usize {
        self.real.len() + self.complex.len()
    }

    pub fn signature(&self) -> (usize, usize) {
        (self.real.len(), self.complex.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(x: i64, prec: u32) -> Iv {
        Iv::from_int(&BigInt::from(x), prec)
    }

    #[test]
    fn interval_ops_contain_truth() {
        let prec = 64;
        let a = Iv::from_ratio(&BigInt::from(1), &BigInt::from(3), prec);
        let b = Iv::from_ratio(&BigInt::from(2), &BigInt::from(7), prec);
        let sum = a.add(&b);
        // 1/3 + 2/7 = 13/21
        let truth = Iv::from_ratio(&BigInt::from(13), &BigInt::from(21), prec);
        assert!(sum.lo <= truth.lo && truth.hi <= sum.hi);
        let prod = a.mul(&b);
        let truth = Iv::from_ratio(&BigInt::from(2), &BigInt::from(21), prec);
        assert!(prod.lo <= truth.lo && truth.hi <= prod.hi);
        let quot = a.div(&b).unwrap();
        let truth = Iv::from_ratio(&BigInt::from(7), &BigInt::from(6), prec);
        assert!(quot.lo <= truth.lo && truth.hi <= quot.hi);
    }

    #[test]
    fn ln_brackets_known_values() {
        let prec = 96;
        let eps = 1e-12;
        // ln 2 = 0.6931471805599453...
        let two = iv(2, prec);
        let l = two.ln().unwrap();
        assert!(l.lo_f64() < 0.6931471805599453 + eps && 0.6931471805599453 - eps < l.hi_f64());
        assert!((l.hi_f64() - l.lo_f64()).abs() < 1e-12);
        // ln 10 = 2.302585092994046...
        let ten = iv(10, prec);
        let l = ten.ln().unwrap();
        assert!(l.lo_f64() < 2.302585092994046 + eps && 2.302585092994046 - eps < l.hi_f64());
        // ln(1/2) = -ln 2.
        let half = Iv::from_ratio(&BigInt::one(), &BigInt::from(2), prec);
        let l = half.ln().unwrap();
        assert!(l.lo_f64() < -0.6931471805599453 + eps && -0.6931471805599453 - eps < l.hi_f64());
        // ln 1 = 0.
        let one = iv(1, prec);
        let l = one.ln().unwrap();
        assert!(l.contains_zero());
        assert!((l.hi_f64() - l.lo_f64()).abs() < 1e-20);
    }

    #[test]
    fn ln_monotone_endpoints() {
        let prec = 64;
        let eps = 1e-12;
        // An interval [3, 5]: ln in [ln 3, ln 5].
        let x = Iv { lo: BigInt::from(3) << prec, hi: BigInt::from(5) << prec, prec };
        let l = x.ln().unwrap();
        assert!(l.lo_f64() < 1.0986122886681098 + eps);
        assert!(l.hi_f64() > 1.6094379124341003 - eps);
        assert!(l.lo_f64() > 1.09);
        assert!(l.hi_f64() < 1.61);
    }

    #[test]
    fn complex_mul_div() {
        let prec = 64;
        // (1+2i)(3-i) = 5+5i
        let a = CIv { re: iv(1, prec), im: iv(2, prec) };
        let b = CIv { re: iv(3, prec), im: iv(-1, prec) };
        let p = a.mul(&b);
        assert!(p.re.lo <= BigInt::from(5) << prec && BigInt::from(5) << prec <= p.re.hi);
        assert!(p.im.lo <= BigInt::from(5) << prec && BigInt::from(5) << prec <= p.im.hi);
        let q = p.div(&b).unwrap();
        assert!(q.re.lo <= BigInt::from(1) << prec && BigInt::from(1) << prec <= q.re.hi);
        assert!(q.im.lo <= BigInt::from(2) << prec && BigInt::from(2) << prec <= q.im.hi);
    }

    #[test]
    fn roots_of_quadratics() {
        // x^2 + 1: roots ±i.
        let f = ZPoly::from_i64(&[1, 0, 1]);
        let enc = RootEnclosures::compute(&f, 64).unwrap();
        assert_eq!(enc.signature(), (0, 1));
        let z = &enc.complex[0];
        assert!(z.re.contains_zero());
        let one = BigInt::one() << 64;
        assert!(z.im.lo <= one && one <= z.im.hi);

        // x^2 - 2: two real roots.
        let f = ZPoly::from_i64(&[-2, 0, 1]);
        let enc = RootEnclosures::compute(&f, 64).unwrap();
        assert_eq!(enc.signature(), (2, 0));
        let sqrt2 = 1.4142135623730951f64;
        assert!(enc.real[0].lo_f64() < -sqrt2 + 1e-10 && -sqrt2 - 1e-10 < enc.real[0].hi_f64());
        assert!(enc.real[1].lo_f64() < sqrt2 + 1e-10 && sqrt2 - 1e-10 < enc.real[1].hi_f64());
    }

    #[test]
    fn roots_of_fixture_polynomials() {
        // x^4 + 3x^2 + 1: totally complex, roots ±i*phi, ±i/phi.
        let f = ZPoly::from_i64(&[1, 0, 3, 0, 1]);
        let enc = RootEnclosures::compute(&f, 80).unwrap();
        assert_eq!(enc.signature(), (0, 2));
        let phi = 1.618033988749895f64;
        let mut ims: Vec<f64> =
            enc.complex.iter().map(|z| (z.im.lo_f64() + z.im.hi_f64()) / 2.0).collect();
        ims.sort_by(f64::total_cmp);
        assert!((ims[0] - 1.0 / phi).abs() < 1e-9);
        assert!((ims[1] - phi).abs() < 1e-9);
        for z in &enc.complex {
            assert!(z.re.contains_zero());
        }

        // x^3 - x - 1: one real root, one conjugate pair.
        let f = ZPoly::from_i64(&[-1, -1, 0, 1]);
        let enc = RootEnclosures::compute(&f, 80).unwrap();
        assert_eq!(enc.signature(), (1, 1));
        assert!((enc.real[0].lo_f64() - 1.324717957244746).abs() < 1e-9);
        // |complex root|^2 = 1/real root.
        let alpha = 1.324717957244746f64;
        let z = &enc.complex[0];
        let nsq = z.abs_sq();
        assert!((nsq.lo_f64() - 1.0 / alpha).abs() < 1e-8);
    }

    #[test]
    fn unit_log_vector_sums_to_zero() {
        // The fundamental unit x^3-x-1 has log vector summing to 0 with
        // multiplicities (1, 2): ln|alpha| + 2 ln|z| = ln|N(alpha)| = 0.
        let f = ZPoly::from_i64(&[-1, -1, 0, 1]);
        let enc = RootEnclosures::compute(&f, 96).unwrap();
        let lr = enc.real[0].abs().ln().unwrap();
        let lc = enc.complex[0].abs_sq().ln().unwrap();
        let total = lr.add(&lc); // ln|alpha| + ln|z|^2
        assert!(total.contains_zero());
        assert!((total.hi_f64() - total.lo_f64()).abs() < 1e-15);
    }

    #[test]
    fn unique_integer_detection() {
        let prec = 32;
        let x = Iv {
            lo: (BigInt::from(3) << prec) - 5,
            hi: (BigInt::from(3) << prec) + 5,
            prec,
        };
        assert_eq!(x.unique_integer(), Some(BigInt::from(3)));
        let wide = Iv { lo: BigInt::zero(), hi: BigInt::from(2) << prec, prec };
        assert_eq!(wide.unique_integer(), None);
    }
}

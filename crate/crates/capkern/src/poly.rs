//! Integer and rational polynomial arithmetic: resultants and discriminants
//! via Sylvester determinants, Sturm sequences for real-root counting and
//! isolation, factorization over prime fields, and a Zassenhaus-style
//! irreducibility certificate over the rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::matrix::Mat;
use crate::{Error, Result};

/// Polynomial over Z, coefficients low to high, no trailing zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct ZPoly {
    pub coeffs: Vec<BigInt>,
}

impl std::fmt::Debug for ZPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("{c}*x"),
                _ => format!("{c}*x^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl ZPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        ZPoly { coeffs }
    }

    pub fn from_i64(cs: &[i64]) -> Self {
        ZPoly::new(cs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        ZPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        ZPoly { coeffs: vec![BigInt::one()] }
    }

    pub fn x() -> Self {
        ZPoly { coeffs: vec![BigInt::zero(), BigInt::one()] }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; callers check `is_zero` first where it matters.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(One::is_one)
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn add(&self, other: &ZPoly) -> ZPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        ZPoly::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &ZPoly) -> ZPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        ZPoly::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn neg(&self) -> ZPoly {
        ZPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, other: &ZPoly) -> ZPoly {
        if self.is_zero() || other.is_zero() {
            return ZPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ZPoly::new(out)
    }

    pub fn derivative(&self) -> ZPoly {
        if self.coeffs.len() <= 1 {
            return ZPoly::zero();
        }
        ZPoly::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * BigInt::from(i + 1))
                .collect(),
        )
    }

    /// Exact division by a monic polynomial; None if the remainder is nonzero.
    pub fn div_exact_monic(&self, g: &ZPoly) -> Option<ZPoly> {
        let (q, r) = self.divmod_monic(g);
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }

    /// Division with remainder by a monic polynomial, exact over Z.
    pub fn divmod_monic(&self, g: &ZPoly) -> (ZPoly, ZPoly) {
        assert!(g.is_monic(), "divisor must be monic");
        let dg = g.degree();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dg {
            return (ZPoly::zero(), ZPoly::new(rem));
        }
        let mut quo = vec![BigInt::zero(); rem.len() - dg];
        for i in (dg..rem.len()).rev() {
            let c = rem[i].clone();
            if c.is_zero() {
                continue;
            }
            quo[i - dg] = c.clone();
            for (j, gc) in g.coeffs.iter().enumerate() {
                let sub = &c * gc;
                rem[i - dg + j] -= sub;
            }
        }
        (ZPoly::new(quo), ZPoly::new(rem))
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    pub fn to_rational(&self) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect())
    }
}

/// Resultant of f and g via the Sylvester matrix (fraction-free determinant).
pub fn resultant(f: &ZPoly, g: &ZPoly) -> BigInt {
    if f.is_zero() || g.is_zero() {
        return BigInt::zero();
    }
    let (m, n) = (f.degree(), g.degree());
    if m == 0 {
        return num_traits::pow::pow(f.coeff(0), n);
    }
    if n == 0 {
        return num_traits::pow::pow(g.coeff(0), m);
    }
    let size = m + n;
    let mut s = Mat::zero(size, size);
    for row in 0..n {
        for (k, c) in f.coeffs.iter().enumerate() {
            s[(row, row + m - k)] = c.clone();
        }
    }
    for row in 0..m {
        for (k, c) in g.coeffs.iter().enumerate() {
            s[(n + row, row + n - k)] = c.clone();
        }
    }
    s.det()
}

/// Discriminant of f: (-1)^{d(d-1)/2} resultant(f, f') / lc(f).
pub fn discriminant(f: &ZPoly) -> BigInt {
    let d = f.degree();
    let res = resultant(f, &f.derivative());
    let signed = if (d * (d - 1) / 2) % 2 == 1 { -res } else { res };
    signed / f.leading()
}

/// Polynomial over Q.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPoly {
    pub coeffs: Vec<BigRational>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn derivative(&self) -> QPoly {
        if self.coeffs.len() <= 1 {
            return QPoly::new(vec![]);
        }
        QPoly::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i + 1)))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn rem(&self, g: &QPoly) -> QPoly {
        assert!(!g.is_zero());
        let dg = g.degree();
        let lg = g.coeff(dg);
        let mut rem = self.coeffs.clone();
        while rem.len() > dg && !rem.is_empty() {
            let c = rem.last().unwrap().clone();
            if c.is_zero() {
                rem.pop();
                continue;
            }
            let q = &c / &lg;
            let shift = rem.len() - 1 - dg;
            for (j, gc) in g.coeffs.iter().enumerate() {
                let sub = &q * gc;
                rem[shift + j] -= sub;
            }
            while rem.last().is_some_and(Zero::is_zero) {
                rem.pop();
            }
        }
        QPoly::new(rem)
    }

    pub fn gcd(&self, other: &QPoly) -> QPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            return a;
        }
        let lead = a.coeff(a.degree());
        QPoly::new(a.coeffs.iter().map(|c| c / &lead).collect())
    }
}

fn divide_exact_q(f: &QPoly, g: &QPoly) -> QPoly {
    let dg = g.degree();
    let lg = g.coeff(dg);
    let mut rem = f.coeffs.clone();
    let mut quo = vec![BigRational::zero(); f.coeffs.len().saturating_sub(dg)];
    while rem.len() > dg {
        let c = rem.last().unwrap().clone();
        let shift = rem.len() - 1 - dg;
        if !c.is_zero() {
            let q = &c / &lg;
            quo[shift] = q.clone();
            for (j, gc) in g.coeffs.iter().enumerate() {
                let sub = &q * gc;
                rem[shift + j] -= sub;
            }
        }
        while rem.last().is_some_and(Zero::is_zero) {
            rem.pop();
        }
    }
    QPoly::new(quo)
}

/// Sturm chain of the squarefree part of f.
pub struct Sturm {
    chain: Vec<QPoly>,
    pub squarefree: QPoly,
}

impl Sturm {
    pub fn new(f: &ZPoly) -> Sturm {
        let fq = f.to_rational();
        let g = fq.gcd(&fq.derivative());
        let squarefree = if g.degree() == 0 { fq.clone() } else { divide_exact_q(&fq, &g) };
        let mut chain = vec![squarefree.clone(), squarefree.derivative()];
        loop {
            let k = chain.len();
            if chain[k - 1].is_zero() {
                chain.pop();
                break;
            }
            let r = chain[k - 2].rem(&chain[k - 1]);
            if r.is_zero() {
                break;
            }
            chain.push(QPoly::new(r.coeffs.iter().map(|c| -c).collect()));
        }
        Sturm { chain, squarefree }
    }

    fn variations(&self, x: &BigRational) -> usize {
        let mut last = 0i8;
        let mut v = 0;
        for p in &self.chain {
            let val = p.eval(x);
            let s = if val.is_zero() {
                0
            } else if val.is_positive() {
                1i8
            } else {
                -1i8
            };
            if s != 0 {
                if last != 0 && s != last {
                    v += 1;
                }
                last = s;
            }
        }
        v
    }

    /// Number of distinct real roots in the half-open interval (a, b].
    pub fn count_in(&self, a: &BigRational, b: &BigRational) -> usize {
        self.variations(a) - self.variations(b)
    }
}

/// Count of distinct real roots of f.
pub fn real_root_count(f: &ZPoly) -> usize {
    let sturm = Sturm::new(f);
    let bound = cauchy_bound(f);
    sturm.count_in(&-bound.clone(), &bound)
}

/// Rational B with all complex roots of f inside |z| < B.
pub fn cauchy_bound(f: &ZPoly) -> BigRational {
    let lc = f.leading().abs();
    let mut mx = BigInt::zero();
    for c in &f.coeffs[..f.coeffs.len().saturating_sub(1)] {
        if c.abs() > mx {
            mx = c.abs();
        }
    }
    BigRational::one() + BigRational::new(mx, lc)
}

/// Disjoint rational intervals, each containing exactly one real root of f,
/// sorted left to right. Intervals with lo == hi mark exact rational roots.
pub fn isolate_real_roots(f: &ZPoly) -> Vec<(BigRational, BigRational)> {
    let sturm = Sturm::new(f);
    let bound = cauchy_bound(f);
    let mut work = vec![(-bound.clone(), bound)];
    let mut done = Vec::new();
    while let Some((lo, hi)) = work.pop() {
        let count = sturm.count_in(&lo, &hi);
        if count == 0 {
            continue;
        }
        if count == 1 {
            // Shrink until the left endpoint is not a root (the interval is
            // half-open on the left, but downstream code wants both
            // endpoints clean).
            done.push((lo, hi));
            continue;
        }
        let mid = (&lo + &hi) / BigRational::from_integer(BigInt::from(2));
        if sturm.squarefree.eval(&mid).is_zero() {
            done.push((mid.clone(), mid.clone()));
            let step = (&hi - &lo) / BigRational::from_integer(BigInt::from(1024));
            work.push((lo, &mid - &step));
            work.push((&mid + &step, hi));
        } else {
            work.push((lo, mid.clone()));
            work.push((mid, hi));
        }
    }
    done.sort_by(|a, b| a.0.cmp(&b.0));
    done
}

/// Shrink an isolating interval for a single root of f below `width` by
/// Sturm-guarded bisection. Exact rational roots collapse to points.
pub fn refine_root(
    sturm: &Sturm,
    lo: &BigRational,
    hi: &BigRational,
    width: &BigRational,
) -> (BigRational, BigRational) {
    let (mut lo, mut hi) = (lo.clone(), hi.clone());
    let two = BigRational::from_integer(BigInt::from(2));
    while &(&hi - &lo) > width {
        let mid = (&lo + &hi) / &two;
        if sturm.squarefree.eval(&mid).is_zero() {
            return (mid.clone(), mid);
        }
        if sturm.count_in(&lo, &mid) == 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (lo, hi)
}

// ---------------------------------------------------------------------------
// Arithmetic modulo a small prime
// ---------------------------------------------------------------------------

/// Polynomial over F_p, coefficients low to high, normalized.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PPoly {
    pub p: u64,
    pub coeffs: Vec<u64>,
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

fn invmod(a: u64, p: u64) -> u64 {
    powmod(a, p - 2, p)
}

impl PPoly {
    pub fn new(p: u64, mut coeffs: Vec<u64>) -> Self {
        for c in &mut coeffs {
            *c %= p;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        PPoly { p, coeffs }
    }

    pub fn from_zpoly(f: &ZPoly, p: u64) -> Self {
        let pb = BigInt::from(p);
        PPoly::new(
            p,
            f.coeffs
                .iter()
                .map(|c| u64::try_from(c.mod_floor(&pb)).expect("residue fits u64"))
                .collect(),
        )
    }

    pub fn to_zpoly(&self) -> ZPoly {
        ZPoly::new(self.coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero(p: u64) -> Self {
        PPoly { p, coeffs: vec![] }
    }

    pub fn one(p: u64) -> Self {
        PPoly { p, coeffs: vec![1] }
    }

    pub fn x(p: u64) -> Self {
        PPoly { p, coeffs: vec![0, 1] }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> u64 {
        *self.coeffs.last().unwrap_or(&0)
    }

    pub fn coeff(&self, i: usize) -> u64 {
        *self.coeffs.get(i).unwrap_or(&0)
    }

    pub fn monic(&self) -> PPoly {
        if self.is_zero() || self.leading() == 1 {
            return self.clone();
        }
        let inv = invmod(self.leading(), self.p);
        PPoly::new(self.p, self.coeffs.iter().map(|&c| mulmod(c, inv, self.p)).collect())
    }

    pub fn add(&self, other: &PPoly) -> PPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        PPoly::new(self.p, (0..n).map(|i| (self.coeff(i) + other.coeff(i)) % self.p).collect())
    }

    pub fn sub(&self, other: &PPoly) -> PPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        PPoly::new(
            self.p,
            (0..n).map(|i| (self.coeff(i) + self.p - other.coeff(i)) % self.p).collect(),
        )
    }

    pub fn mul(&self, other: &PPoly) -> PPoly {
        if self.is_zero() || other.is_zero() {
            return PPoly::zero(self.p);
        }
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + mulmod(a, b, self.p)) % self.p;
            }
        }
        PPoly::new(self.p, out)
    }

    pub fn divmod(&self, g: &PPoly) -> (PPoly, PPoly) {
        assert!(!g.is_zero());
        let dg = g.degree();
        let lg_inv = invmod(g.leading(), self.p);
        let mut rem = self.coeffs.clone();
        let mut quo = vec![0u64; rem.len().saturating_sub(dg)];
        while rem.len() > dg {
            let c = *rem.last().unwrap();
            let shift = rem.len() - 1 - dg;
            if c != 0 {
                let q = mulmod(c, lg_inv, self.p);
                quo[shift] = q;
                for (j, &gc) in g.coeffs.iter().enumerate() {
                    let idx = shift + j;
                    rem[idx] = (rem[idx] + self.p - mulmod(q, gc, self.p)) % self.p;
                }
            }
            rem.pop();
            while rem.last() == Some(&0) {
                rem.pop();
            }
        }
        (PPoly::new(self.p, quo), PPoly::new(self.p, rem))
    }

    pub fn rem(&self, g: &PPoly) -> PPoly {
        self.divmod(g).1
    }

    pub fn div_exact(&self, g: &PPoly) -> PPoly {
        let (q, r) = self.divmod(g);
        assert!(r.is_zero(), "inexact division mod p");
        q
    }

    pub fn gcd(&self, other: &PPoly) -> PPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> PPoly {
        if self.coeffs.len() <= 1 {
            return PPoly::zero(self.p);
        }
        PPoly::new(
            self.p,
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, &c)| mulmod(c, (i as u64 + 1) % self.p, self.p))
                .collect(),
        )
    }

    pub fn eval(&self, x: u64) -> u64 {
        let mut acc = 0u64;
        for &c in self.coeffs.iter().rev() {
            acc = (mulmod(acc, x, self.p) + c) % self.p;
        }
        acc
    }

    fn pow_mod(&self, e: u128, modulus: &PPoly) -> PPoly {
        let mut base = self.rem(modulus);
        let mut acc = PPoly::one(self.p);
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(modulus);
            }
            base = base.mul(&base).rem(modulus);
            e >>= 1;
        }
        acc
    }

    /// For f with all exponents divisible by p, the unique g with g^p = f.
    fn pth_root(&self) -> PPoly {
        let p = self.p as usize;
        let mut out = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate() {
            if i % p == 0 {
                out.push(c);
            } else {
                assert_eq!(c, 0, "not a p-th power");
            }
        }
        PPoly::new(self.p, out)
    }
}

/// Product of the distinct monic irreducible factors of f.
fn radical_mod_p(f: &PPoly) -> PPoly {
    let f = f.monic();
    if f.is_constant() {
        return PPoly::one(f.p);
    }
    let fd = f.derivative();
    if fd.is_zero() {
        return radical_mod_p(&f.pth_root());
    }
    let g = f.gcd(&fd);
    let u = f.div_exact(&g);
    // Strip the u-supported part out of g; the residue is a perfect p-th
    // power carrying exactly the factors whose multiplicity p divides.
    let mut h = g;
    loop {
        let d = h.gcd(&u);
        if d.is_constant() {
            break;
        }
        h = h.div_exact(&d);
    }
    if h.is_constant() {
        u
    } else {
        u.mul(&radical_mod_p(&h.pth_root()))
    }
}

/// Full factorization of f over F_p into monic irreducible factors with
/// multiplicities. Deterministic for a fixed seed.
pub fn factor_mod_p(f: &ZPoly, p: u64, seed: u64) -> Vec<(PPoly, usize)> {
    let fp = PPoly::from_zpoly(f, p).monic();
    let rad = radical_mod_p(&fp);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut irreducibles = Vec::new();
    distinct_degree_split(&rad, &mut irreducibles, &mut rng);
    irreducibles.sort_by(|a, b| (a.degree(), &a.coeffs).cmp(&(b.degree(), &b.coeffs)));
    irreducibles
        .into_iter()
        .map(|g| {
            let m = mod_multiplicity(&fp, &g);
            (g, m)
        })
        .collect()
}

fn mod_multiplicity(f: &PPoly, g: &PPoly) -> usize {
    let mut cur = f.clone();
    let mut k = 0;
    loop {
        let (q, r) = cur.divmod(g);
        if !r.is_zero() {
            return k;
        }
        k += 1;
        cur = q;
        if cur.is_constant() {
            return k;
        }
    }
}

fn distinct_degree_split(f: &PPoly, out: &mut Vec<PPoly>, rng: &mut ChaCha8Rng) {
    let p = f.p;
    let mut f = f.monic();
    if f.is_constant() {
        return;
    }
    let mut h = PPoly::x(p);
    let mut k = 0usize;
    while f.degree() >= 1 {
        k += 1;
        if f.degree() < 2 * k {
            out.push(f.monic());
            return;
        }
        h = h.pow_mod(p as u128, &f);
        let g = f.gcd(&h.sub(&PPoly::x(p)));
        if g.is_constant() {
            continue;
        }
        equal_degree_split(&g, k, out, rng);
        f = f.div_exact(&g);
        h = h.rem(&f);
    }
}

fn equal_degree_split(f: &PPoly, k: usize, out: &mut Vec<PPoly>, rng: &mut ChaCha8Rng) {
    let p = f.p;
    if f.degree() == k {
        out.push(f.monic());
        return;
    }
    loop {
        let deg = f.degree();
        let a = PPoly::new(p, (0..deg).map(|_| rng.gen_range(0..p)).collect());
        if a.is_constant() {
            continue;
        }
        let b = if p == 2 {
            // Trace map of F_{2^k} over F_2 applied to a, reduced mod f.
            let mut acc = a.clone();
            let mut t = a.clone();
            for _ in 1..k {
                t = t.mul(&t).rem(f);
                acc = acc.add(&t);
            }
            acc
        } else {
            let e = (pow_u128(p, k as u32) - 1) / 2;
            a.pow_mod(e, f).sub(&PPoly::one(p))
        };
        let g = f.gcd(&b);
        if !g.is_constant() && g.degree() < f.degree() {
            equal_degree_split(&g, k, out, rng);
            equal_degree_split(&f.div_exact(&g), k, out, rng);
            return;
        }
    }
}

fn pow_u128(p: u64, k: u32) -> u128 {
    let mut r = 1u128;
    for _ in 0..k {
        r *= p as u128;
    }
    r
}

/// Deterministic Miller-Rabin for u64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Irreducibility of a monic integer polynomial over Q, certified by
/// Zassenhaus recombination at a single prime exceeding twice the
/// Landau-Mignotte factor bound.
pub fn is_irreducible(f: &ZPoly, seed: u64) -> Result<bool> {
    assert!(f.is_monic(), "irreducibility check expects monic input");
    let d = f.degree();
    if d == 0 {
        return Ok(false);
    }
    if d == 1 {
        return Ok(true);
    }
    // Any monic factor has coefficients bounded by 2^d (1 + sum |a_i|).
    let mut norm = BigInt::one();
    for c in &f.coeffs {
        norm += c.abs();
    }
    let bound: BigInt = norm << d;
    let two_bound: BigInt = &bound << 1;
    let disc = discriminant(f);
    if disc.is_zero() {
        return Ok(false);
    }
    let mut p: u64 = u64::try_from(&two_bound + 1u8).map_err(|_| {
        Error::InternalOverflow("factor bound exceeds u64; polynomial too large for desk scale".into())
    })?;
    loop {
        if is_prime_u64(p) && !(&disc % BigInt::from(p)).is_zero() {
            break;
        }
        p += 1;
    }
    let factors = factor_mod_p(f, p, seed);
    debug_assert!(factors.iter().all(|(_, m)| *m == 1));
    if factors.len() == 1 {
        return Ok(true);
    }
    // Try all proper subsets of total degree <= d/2; balanced-lift, test
    // exact division over Z. Sound because a true monic factor reduces mod p
    // to a subset product and its coefficients are below p/2.
    let half = BigInt::from(p) / 2;
    let total = factors.len();
    assert!(total <= 24, "unexpected factor count");
    for mask in 1u32..(1 << total) - 1 {
        let deg: usize = factors
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, (g, _))| g.degree())
            .sum();
        if deg == 0 || deg > d / 2 {
            continue;
        }
        let mut prod = PPoly::one(p);
        for (i, (g, _)) in factors.iter().enumerate() {
            if mask >> i & 1 == 1 {
                prod = prod.mul(g);
            }
        }
        let lifted = ZPoly::new(
            prod.coeffs
                .iter()
                .map(|&c| {
                    let v = BigInt::from(c);
                    if v > half {
                        v - BigInt::from(p)
                    } else {
                        v
                    }
                })
                .collect(),
        );
        if f.div_exact_monic(&lifted).is_some() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zp(cs: &[i64]) -> ZPoly {
        ZPoly::from_i64(cs)
    }

    #[test]
    fn arithmetic_basics() {
        let f = zp(&[1, 0, 1]); // x^2 + 1
        let g = zp(&[-1, 1]); // x - 1
        assert_eq!(f.mul(&g), zp(&[-1, 1, -1, 1]));
        let (q, r) = zp(&[-1, 1, -1, 1]).divmod_monic(&f);
        assert_eq!(q, g);
        assert!(r.is_zero());
        assert_eq!(f.eval_int(&BigInt::from(2)), BigInt::from(5));
    }

    #[test]
    fn resultants_and_discriminants() {
        assert_eq!(discriminant(&zp(&[1, 0, 1])), BigInt::from(-4));
        assert_eq!(discriminant(&zp(&[-1, -1, 1])), BigInt::from(5));
        assert_eq!(discriminant(&zp(&[-1, -1, 0, 1])), BigInt::from(-23));
        // disc(x^4 + p x^2 + q) = 16 q (p^2 - 4q)^2.
        assert_eq!(discriminant(&zp(&[1, 0, 3, 0, 1])), BigInt::from(400));
        assert_eq!(resultant(&zp(&[-2, 1]), &zp(&[-3, 1])), BigInt::from(-1));
    }

    #[test]
    fn sturm_counts_and_isolation() {
        // x^3 - x - 1 has one real root (~1.3247).
        let f = zp(&[-1, -1, 0, 1]);
        assert_eq!(real_root_count(&f), 1);
        let roots = isolate_real_roots(&f);
        assert_eq!(roots.len(), 1);
        let approx = BigRational::new(BigInt::from(13247), BigInt::from(10000));
        assert!(roots[0].0 <= approx && approx <= roots[0].1);

        assert_eq!(real_root_count(&zp(&[1, 0, 1])), 0);
        assert_eq!(real_root_count(&zp(&[-2, 0, 1])), 2);
        assert_eq!(real_root_count(&zp(&[1, 0, 3, 0, 1])), 0);
        assert_eq!(real_root_count(&zp(&[6, -1, 1])), 0);

        // Exact rational root: f = x. Refinement collapses to the point.
        let f = zp(&[0, 1]);
        let roots = isolate_real_roots(&f);
        assert_eq!(roots.len(), 1);
        assert!(roots[0].0 <= BigRational::zero() && BigRational::zero() <= roots[0].1);
        let sturm = Sturm::new(&f);
        let tiny = BigRational::new(BigInt::one(), BigInt::from(1u64 << 30));
        let (l, h) = refine_root(&sturm, &roots[0].0, &roots[0].1, &tiny);
        assert_eq!(l, h);
        assert!(l.is_zero());
    }

    #[test]
    fn refine_shrinks() {
        let f = zp(&[-2, 0, 1]);
        let sturm = Sturm::new(&f);
        let roots = isolate_real_roots(&f);
        assert_eq!(roots.len(), 2);
        let width = BigRational::new(BigInt::one(), BigInt::from(1u64 << 40));
        for (lo, hi) in roots {
            let (l, h) = refine_root(&sturm, &lo, &hi, &width);
            assert!(&h - &l <= width);
            let prod = f.eval_rational(&l) * f.eval_rational(&h);
            assert!(prod.is_negative());
        }
    }

    #[test]
    fn factor_mod_p_examples() {
        // x^2+1: (x+2)(x+3) mod 5, irreducible mod 3, (x+1)^2 mod 2.
        let f = zp(&[1, 0, 1]);
        let f5 = factor_mod_p(&f, 5, 1);
        assert_eq!(f5.len(), 2);
        assert!(f5.iter().all(|(g, m)| g.degree() == 1 && *m == 1));
        let f3 = factor_mod_p(&f, 3, 1);
        assert_eq!(f3.len(), 1);
        assert_eq!(f3[0].0.degree(), 2);
        assert_eq!(f3[0].1, 1);
        let f2 = factor_mod_p(&f, 2, 1);
        assert_eq!(f2.len(), 1);
        assert_eq!((f2[0].0.degree(), f2[0].1), (1, 2));
    }

    #[test]
    fn factor_mod_2_perfect_square() {
        // x^4+3x^2+1 mod 2 = (x^2+x+1)^2.
        let f = zp(&[1, 0, 3, 0, 1]);
        let fs = factor_mod_p(&f, 2, 1);
        assert_eq!(fs.len(), 1);
        assert_eq!(fs[0].0, PPoly::new(2, vec![1, 1, 1]));
        assert_eq!(fs[0].1, 2);
    }

    #[test]
    fn factor_mod_p_multiplicity_mix() {
        // x (x-1)^2 (x+1) mod 7.
        let f = zp(&[-1, 1]).mul(&zp(&[-1, 1])).mul(&zp(&[1, 1])).mul(&zp(&[0, 1]));
        let fs = factor_mod_p(&f, 7, 3);
        assert_eq!(fs.len(), 3);
        let total: usize = fs.iter().map(|(_, m)| m).sum();
        assert_eq!(total, 4);
        // Re-multiplying recovers f mod 7.
        let mut prod = PPoly::one(7);
        for (g, m) in &fs {
            for _ in 0..*m {
                prod = prod.mul(g);
            }
        }
        assert_eq!(prod, PPoly::from_zpoly(&f, 7));
    }

    #[test]
    fn factor_mod_23_with_double_root() {
        // x^3 - x - 1 mod 23 = (x - 3)(x - 10)^2.
        let f = zp(&[-1, -1, 0, 1]);
        let fs = factor_mod_p(&f, 23, 5);
        assert_eq!(fs.len(), 2);
        let mut roots: Vec<(u64, usize)> =
            fs.iter().map(|(g, m)| ((23 - g.coeff(0)) % 23, *m)).collect();
        roots.sort();
        assert_eq!(roots, vec![(3, 1), (10, 2)]);
    }

    #[test]
    fn irreducibility() {
        assert!(is_irreducible(&zp(&[5, 0, 1]), 1).unwrap());
        assert!(is_irreducible(&zp(&[1, 0, 1]), 1).unwrap());
        assert!(is_irreducible(&zp(&[-1, -1, 1]), 1).unwrap());
        assert!(is_irreducible(&zp(&[-1, -1, 0, 1]), 1).unwrap());
        assert!(is_irreducible(&zp(&[6, -1, 1]), 1).unwrap());
        // The biquadratic quartic has no inert primes; recombination is
        // what proves it irreducible.
        assert!(is_irreducible(&zp(&[1, 0, 3, 0, 1]), 1).unwrap());
        assert!(!is_irreducible(&zp(&[-1, 0, 1]), 1).unwrap());
        assert!(!is_irreducible(&zp(&[1, 2, 1]), 1).unwrap());
        assert!(!is_irreducible(&zp(&[2, 0, 3, 0, 1]), 1).unwrap());
        assert!(!is_irreducible(&zp(&[4, 0, 0, 0, 1]), 1).unwrap());
    }

    #[test]
    fn primality() {
        assert!(is_prime_u64(2));
        assert!(is_prime_u64(23));
        assert!(is_prime_u64(1_000_003));
        assert!(!is_prime_u64(1));
        assert!(!is_prime_u64(1_000_001));
    }
}

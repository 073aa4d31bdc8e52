//! Scalar rings for Hecke coefficients.
//!
//! Two rings appear.  `Fq` is the finite field F_{p^f}; it is the coefficient
//! field of the specialized algebra, where every wall parameter is sent to
//! zero.  `QHalf` is the ring of Laurent polynomials over Z in one formal
//! variable v_o per wall orbit, with v_o^2 playing the role of the orbit
//! parameter q_o; it is the coefficient ring of the generic algebra.  `Coeff`
//! is the small interface the algebra layer needs from either ring.

use crate::error::{Error, Result};
use num_traits::{One, Zero};
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

/// Cap on field size; everything here is meant for tiny residue fields.
const MAX_Q: u64 = 4096;

// ---------------------------------------------------------------------------
// F_p polynomial helpers on digit vectors (index i = coefficient of x^i).
// ---------------------------------------------------------------------------

fn ptrim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn pmul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + ai * bj) % p;
        }
    }
    ptrim(&mut out);
    out
}

/// Remainder of `a` modulo the monic polynomial with lower coefficients
/// `m_low` and degree `m_low.len()`.
fn pmod(a: &[u32], m_low: &[u32], p: u32) -> Vec<u32> {
    let deg = m_low.len();
    let mut r: Vec<u32> = a.to_vec();
    ptrim(&mut r);
    while r.len() > deg {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - deg;
        // r -= lead * x^shift * (x^deg + m_low)
        let last = r.len() - 1;
        r[last] = 0;
        for (i, &mi) in m_low.iter().enumerate() {
            let idx = shift + i;
            r[idx] = (r[idx] + p * p - (lead * mi) % p) % p;
        }
        ptrim(&mut r);
    }
    r
}

fn digits_of(mut n: u64, p: u32) -> Vec<u32> {
    let mut out = Vec::new();
    while n > 0 {
        out.push((n % p as u64) as u32);
        n /= p as u64;
    }
    out
}

fn encode(digits: &[u32], p: u32) -> u32 {
    let mut out: u64 = 0;
    for &d in digits.iter().rev() {
        out = out * p as u64 + d as u64;
    }
    out as u32
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// True when the monic polynomial x^f + sum(m_low) has no monic divisor of
/// degree between 1 and f/2.  Trial division; fields here are tiny.
fn is_irreducible(m_low: &[u32], p: u32) -> bool {
    let f = m_low.len();
    for d in 1..=f / 2 {
        // candidate divisor x^d + lower, lower encoded by c
        let pd = (p as u64).pow(d as u32);
        for c in 0..pd {
            let mut cand = digits_of(c, p);
            cand.resize(d, 0);
            // full modulus as dividend digits
            let mut dividend = m_low.to_vec();
            dividend.resize(f, 0);
            dividend.push(1);
            if pmod(&dividend, &cand, p).is_empty() {
                return false;
            }
        }
    }
    true
}

// ---------------------------------------------------------------------------
// Field tables
// ---------------------------------------------------------------------------

/// Shared arithmetic tables for one finite field F_{p^f}.  Elements are digit
/// encodings of polynomials modulo the lexicographically first monic
/// irreducible of degree f.
#[derive(Debug)]
pub struct FqTables {
    pub p: u32,
    pub f: u32,
    pub q: u32,
    /// Lower coefficients of the monic modulus, constant term first.
    pub modulus: Vec<u32>,
    mul: Vec<u32>,
    add: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
    /// Smallest multiplicative generator in digit encoding.
    pub generator: u32,
    /// `exp[a]` = generator^a, for a in 0..q-1.
    pub exp: Vec<u32>,
    /// `dlog[x]` defined for x != 0.
    pub dlog: Vec<u32>,
}

impl FqTables {
    /// Returns the shared tables for F_{p^f}, building them on first use.
    pub fn get(p: u32, f: u32) -> Result<Arc<FqTables>> {
        static CACHE: OnceLock<Mutex<HashMap<(u32, u32), Arc<FqTables>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().unwrap();
        if let Some(t) = guard.get(&(p, f)) {
            return Ok(t.clone());
        }
        let t = Arc::new(FqTables::build(p, f)?);
        guard.insert((p, f), t.clone());
        Ok(t)
    }

    fn build(p: u32, f: u32) -> Result<FqTables> {
        if !is_prime(p) {
            return Err(Error::BadField(format!("{p} is not prime")));
        }
        if f == 0 {
            return Err(Error::BadField("extension degree must be positive".into()));
        }
        let q64 = (p as u64).pow(f);
        if q64 > MAX_Q {
            return Err(Error::BadField(format!("p^f = {q64} exceeds cap {MAX_Q}")));
        }
        let q = q64 as u32;
        // lexicographically first monic irreducible of degree f
        let mut modulus = None;
        for c in 0..q64 {
            let mut low = digits_of(c, p);
            low.resize(f as usize, 0);
            if is_irreducible(&low, p) {
                modulus = Some(low);
                break;
            }
        }
        let modulus = modulus.ok_or_else(|| Error::BadField("no irreducible found".into()))?;

        let dig = |n: u32| -> Vec<u32> {
            let mut d = digits_of(n as u64, p);
            ptrim(&mut d);
            d
        };
        let mut mul = vec![0u32; (q * q) as usize];
        let mut add = vec![0u32; (q * q) as usize];
        for a in 0..q {
            let da = dig(a);
            for b in 0..q {
                let db = dig(b);
                mul[(a * q + b) as usize] = encode(&pmod(&pmul(&da, &db, p), &modulus, p), p);
                let mut ds = vec![0u32; f as usize];
                for (i, &x) in da.iter().enumerate() {
                    ds[i] = x;
                }
                for (i, &x) in db.iter().enumerate() {
                    ds[i] = (ds[i] + x) % p;
                }
                add[(a * q + b) as usize] = encode(&ds, p);
            }
        }
        let mut neg = vec![0u32; q as usize];
        for a in 0..q {
            for b in 0..q {
                if add[(a * q + b) as usize] == 0 {
                    neg[a as usize] = b;
                }
            }
        }
        let powmod = |mut base: u32, mut e: u64| -> u32 {
            let mut acc = 1u32;
            while e > 0 {
                if e & 1 == 1 {
                    acc = mul[(acc * q + base) as usize];
                }
                base = mul[(base * q + base) as usize];
                e >>= 1;
            }
            acc
        };
        let mut inv = vec![0u32; q as usize];
        for a in 1..q {
            inv[a as usize] = powmod(a, (q - 2) as u64);
            debug_assert_eq!(mul[(a * q + inv[a as usize]) as usize], 1);
        }
        // smallest generator of the cyclic group of order q-1
        let order = (q - 1) as u64;
        let mut generator = 0;
        'outer: for g in 1..q {
            let mut d = 1u64;
            while d * d <= order {
                if order % d == 0 {
                    for e in [d, order / d] {
                        if e < order && powmod(g, e) == 1 {
                            continue 'outer;
                        }
                    }
                }
                d += 1;
            }
            generator = g;
            break;
        }
        let mut exp = vec![0u32; (q - 1) as usize];
        let mut dlog = vec![0u32; q as usize];
        let mut acc = 1u32;
        for a in 0..(q - 1) {
            exp[a as usize] = acc;
            dlog[acc as usize] = a;
            acc = mul[(acc * q + generator) as usize];
        }
        Ok(FqTables {
            p,
            f,
            q,
            modulus,
            mul,
            add,
            neg,
            inv,
            generator,
            exp,
            dlog,
        })
    }
}

// ---------------------------------------------------------------------------
// Field elements
// ---------------------------------------------------------------------------

/// An element of F_{p^f}.  Values produced by `Zero`/`One` carry no field and
/// hold a literal integer instead; they adopt the field of the other operand
/// on first contact.  Mixing two distinct attached fields is a bug and
/// panics.
#[derive(Clone)]
pub struct Fq {
    tables: Option<Arc<FqTables>>,
    val: i64,
}

impl Fq {
    /// The image of the integer `n` in the field.
    pub fn int(t: &Arc<FqTables>, n: i64) -> Fq {
        let p = t.p as i64;
        let r = ((n % p) + p) % p;
        Fq {
            tables: Some(t.clone()),
            val: r,
        }
    }

    /// Element with the given digit encoding.
    pub fn from_index(t: &Arc<FqTables>, idx: u32) -> Fq {
        assert!(idx < t.q);
        Fq {
            tables: Some(t.clone()),
            val: idx as i64,
        }
    }

    /// generator^a, with the fixed smallest generator.
    pub fn gen_pow(t: &Arc<FqTables>, a: u64) -> Fq {
        let e = (a % (t.q - 1) as u64) as usize;
        Fq::from_index(t, t.exp[e])
    }

    pub fn tables(&self) -> Option<&Arc<FqTables>> {
        self.tables.as_ref()
    }

    /// Digit encoding in the attached field; panics on detached literals that
    /// have never met a field.
    pub fn index(&self) -> u32 {
        match &self.tables {
            Some(_) => self.val as u32,
            None => panic!("detached scalar has no field encoding"),
        }
    }

    fn attach(&self, t: &Arc<FqTables>) -> Fq {
        match &self.tables {
            Some(own) => {
                assert!(
                    own.p == t.p && own.f == t.f,
                    "mixed fields F_{}^{} and F_{}^{}",
                    own.p,
                    own.f,
                    t.p,
                    t.f
                );
                self.clone()
            }
            None => Fq::int(t, self.val),
        }
    }

    fn merge<FA, FL>(&self, rhs: &Fq, field_op: FA, lit_op: FL) -> Fq
    where
        FA: Fn(&Arc<FqTables>, u32, u32) -> u32,
        FL: Fn(i64, i64) -> i64,
    {
        match (&self.tables, &rhs.tables) {
            (None, None) => Fq {
                tables: None,
                val: lit_op(self.val, rhs.val),
            },
            _ => {
                let t = self
                    .tables
                    .as_ref()
                    .or(rhs.tables.as_ref())
                    .unwrap()
                    .clone();
                let a = self.attach(&t);
                let b = rhs.attach(&t);
                Fq {
                    val: field_op(&t, a.val as u32, b.val as u32) as i64,
                    tables: Some(t),
                }
            }
        }
    }

    pub fn inv(&self) -> Result<Fq> {
        match &self.tables {
            Some(t) => {
                if self.val == 0 {
                    Err(Error::SolveFailure("inverse of zero".into()))
                } else {
                    Ok(Fq {
                        tables: Some(t.clone()),
                        val: t.inv[self.val as usize] as i64,
                    })
                }
            }
            None => match self.val {
                1 => Ok(self.clone()),
                -1 => Ok(self.clone()),
                _ => Err(Error::SolveFailure("inverse of detached scalar".into())),
            },
        }
    }

    pub fn pow(&self, mut e: u64) -> Fq {
        let mut acc = Fq::one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            e >>= 1;
        }
        acc
    }
}

impl fmt::Debug for Fq {
    fn fmt(&self, fo: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.tables {
            Some(t) => write!(fo, "Fq({}; q={})", self.val, t.q),
            None => write!(fo, "Fq(lit {})", self.val),
        }
    }
}

impl fmt::Display for Fq {
    fn fmt(&self, fo: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.tables {
            None => write!(fo, "{}", self.val),
            Some(t) if t.f == 1 => write!(fo, "{}", self.val),
            Some(t) => {
                let d = digits_of(self.val as u64, t.p);
                if d.is_empty() {
                    return write!(fo, "0");
                }
                let mut first = true;
                for (i, &c) in d.iter().enumerate() {
                    if c == 0 {
                        continue;
                    }
                    if !first {
                        write!(fo, "+")?;
                    }
                    first = false;
                    match i {
                        0 => write!(fo, "{c}")?,
                        1 if c == 1 => write!(fo, "x")?,
                        1 => write!(fo, "{c}x")?,
                        _ if c == 1 => write!(fo, "x^{i}")?,
                        _ => write!(fo, "{c}x^{i}")?,
                    }
                }
                Ok(())
            }
        }
    }
}

impl PartialEq for Fq {
    fn eq(&self, rhs: &Fq) -> bool {
        match (&self.tables, &rhs.tables) {
            (None, None) => self.val == rhs.val,
            _ => {
                let t = self.tables.as_ref().or(rhs.tables.as_ref()).unwrap();
                self.attach(t).val == rhs.attach(t).val
            }
        }
    }
}
impl Eq for Fq {}

impl Add for Fq {
    type Output = Fq;
    fn add(self, rhs: Fq) -> Fq {
        self.merge(&rhs, |t, a, b| t.add[(a * t.q + b) as usize], |a, b| a + b)
    }
}

impl Sub for Fq {
    type Output = Fq;
    fn sub(self, rhs: Fq) -> Fq {
        self + (-rhs)
    }
}

impl Mul for Fq {
    type Output = Fq;
    fn mul(self, rhs: Fq) -> Fq {
        self.merge(&rhs, |t, a, b| t.mul[(a * t.q + b) as usize], |a, b| a * b)
    }
}

impl Neg for Fq {
    type Output = Fq;
    fn neg(self) -> Fq {
        match &self.tables {
            Some(t) => Fq {
                val: t.neg[self.val as usize] as i64,
                tables: self.tables.clone(),
            },
            None => Fq {
                tables: None,
                val: -self.val,
            },
        }
    }
}

impl Zero for Fq {
    fn zero() -> Fq {
        Fq {
            tables: None,
            val: 0,
        }
    }
    fn is_zero(&self) -> bool {
        self.val == 0
    }
}

impl One for Fq {
    fn one() -> Fq {
        Fq {
            tables: None,
            val: 1,
        }
    }
}

// ---------------------------------------------------------------------------
// Generic Laurent ring
// ---------------------------------------------------------------------------

/// Laurent polynomial over Z in the formal square roots v_o of the orbit
/// parameters.  Keys are exponent vectors in the v-variables with trailing
/// zeros trimmed; values are nonzero integers.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct QHalf {
    pub terms: BTreeMap<Vec<i16>, i64>,
}

fn trim_key(mut k: Vec<i16>) -> Vec<i16> {
    while k.last() == Some(&0) {
        k.pop();
    }
    k
}

impl QHalf {
    pub fn constant(n: i64) -> QHalf {
        let mut terms = BTreeMap::new();
        if n != 0 {
            terms.insert(Vec::new(), n);
        }
        QHalf { terms }
    }

    /// The orbit parameter q_o = v_o^2.
    pub fn q_of(orbit: usize) -> QHalf {
        QHalf::monomial(orbit, 2, 1)
    }

    /// Its formal square root v_o.
    pub fn q_half_of(orbit: usize) -> QHalf {
        QHalf::monomial(orbit, 1, 1)
    }

    /// c * v_orbit^e
    pub fn monomial(orbit: usize, e: i16, c: i64) -> QHalf {
        let mut k = vec![0i16; orbit + 1];
        k[orbit] = e;
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert(trim_key(k), c);
        }
        QHalf { terms }
    }

    /// Product of v_o^{exps[o]} over all orbits.
    pub fn monomial_vec(exps: &[i16], c: i64) -> QHalf {
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert(trim_key(exps.to_vec()), c);
        }
        QHalf { terms }
    }

    fn add_term(&mut self, k: Vec<i16>, c: i64) {
        if c == 0 {
            return;
        }
        let k = trim_key(k);
        let e = self.terms.entry(k.clone()).or_insert(0);
        *e += c;
        if *e == 0 {
            self.terms.remove(&k);
        }
    }

    /// True when no monomial carries a negative exponent.
    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|k| k.iter().all(|&e| e >= 0))
    }

    /// Value at v = 0 when polynomial: the constant coefficient.
    pub fn constant_coeff(&self) -> i64 {
        self.terms.get(&Vec::new()).copied().unwrap_or(0)
    }
}

impl fmt::Display for QHalf {
    fn fmt(&self, fo: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(fo, "0");
        }
        let mut first = true;
        for (k, c) in &self.terms {
            if !first {
                write!(fo, " + ")?;
            }
            first = false;
            if k.is_empty() {
                write!(fo, "{c}")?;
                continue;
            }
            if *c != 1 {
                write!(fo, "{c}*")?;
            }
            let mut firstv = true;
            for (o, &e) in k.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !firstv {
                    write!(fo, "*")?;
                }
                firstv = false;
                if e == 1 {
                    write!(fo, "v{o}")?;
                } else {
                    write!(fo, "v{o}^{e}")?;
                }
            }
        }
        Ok(())
    }
}

impl Add for QHalf {
    type Output = QHalf;
    fn add(self, rhs: QHalf) -> QHalf {
        let mut out = self;
        for (k, c) in rhs.terms {
            out.add_term(k, c);
        }
        out
    }
}

impl Sub for QHalf {
    type Output = QHalf;
    fn sub(self, rhs: QHalf) -> QHalf {
        self + (-rhs)
    }
}

impl Neg for QHalf {
    type Output = QHalf;
    fn neg(self) -> QHalf {
        QHalf {
            terms: self.terms.into_iter().map(|(k, c)| (k, -c)).collect(),
        }
    }
}

impl Mul for QHalf {
    type Output = QHalf;
    fn mul(self, rhs: QHalf) -> QHalf {
        let mut out = QHalf::default();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &rhs.terms {
                let n = ka.len().max(kb.len());
                let mut k = vec![0i16; n];
                for (i, &e) in ka.iter().enumerate() {
                    k[i] += e;
                }
                for (i, &e) in kb.iter().enumerate() {
                    k[i] += e;
                }
                out.add_term(k, ca * cb);
            }
        }
        out
    }
}

impl Zero for QHalf {
    fn zero() -> QHalf {
        QHalf::default()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for QHalf {
    fn one() -> QHalf {
        QHalf::constant(1)
    }
}

/// Sends every v_o to zero and reduces the surviving constant into F_{p^f}.
/// Errors when some monomial has a negative exponent.
pub fn specialize(x: &QHalf, t: &Arc<FqTables>) -> Result<Fq> {
    if !x.is_polynomial() {
        return Err(Error::NonPolynomial(format!("{x}")));
    }
    Ok(Fq::int(t, x.constant_coeff()))
}

// ---------------------------------------------------------------------------
// Shared scalar interface
// ---------------------------------------------------------------------------

/// What the algebra layer needs from a coefficient ring.
pub trait Coeff:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Zero
    + One
{
    /// Context fixing the ambient ring: field tables, or nothing for the
    /// generic ring.
    type Ctx: Clone + fmt::Debug;
    fn int(ctx: &Self::Ctx, n: i64) -> Self;
    /// Image of the wall parameter q_o of the given orbit.
    fn q_orbit(ctx: &Self::Ctx, orbit: usize) -> Self;
}

impl Coeff for Fq {
    type Ctx = Arc<FqTables>;
    fn int(ctx: &Self::Ctx, n: i64) -> Fq {
        Fq::int(ctx, n)
    }
    fn q_orbit(ctx: &Self::Ctx, _orbit: usize) -> Fq {
        Fq::int(ctx, 0)
    }
}

impl Coeff for QHalf {
    type Ctx = ();
    fn int(_ctx: &(), n: i64) -> QHalf {
        QHalf::constant(n)
    }
    fn q_orbit(_ctx: &(), orbit: usize) -> QHalf {
        QHalf::q_of(orbit)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modulus_choices_are_the_first_irreducibles() {
        assert_eq!(FqTables::get(2, 1).unwrap().modulus, vec![0]);
        // x^2 + x + 1 over F_2
        assert_eq!(FqTables::get(2, 2).unwrap().modulus, vec![1, 1]);
        // x^2 + 1 over F_3
        assert_eq!(FqTables::get(3, 2).unwrap().modulus, vec![1, 0]);
        // x^3 + 2x + 1 over F_3
        assert_eq!(FqTables::get(3, 3).unwrap().modulus, vec![1, 2, 0]);
    }

    #[test]
    fn field_axioms_on_samples() {
        for (p, f) in [(2, 1), (3, 1), (5, 1), (2, 2), (3, 2), (2, 3)] {
            let t = FqTables::get(p, f).unwrap();
            let q = t.q;
            for a in 0..q {
                let fa = Fq::from_index(&t, a);
                // additive and multiplicative inverses
                assert!((fa.clone() + (-fa.clone())).is_zero());
                if a != 0 {
                    assert_eq!(fa.clone() * fa.inv().unwrap(), Fq::int(&t, 1));
                }
                for b in 0..q {
                    let fb = Fq::from_index(&t, b);
                    assert_eq!(fa.clone() * fb.clone(), fb.clone() * fa.clone());
                    for c in 0..q {
                        let fc = Fq::from_index(&t, c);
                        let lhs = fa.clone() * (fb.clone() + fc.clone());
                        let rhs = fa.clone() * fb.clone() + fa.clone() * fc.clone();
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn frobenius_is_additive() {
        let t = FqTables::get(3, 2).unwrap();
        for a in 0..t.q {
            for b in 0..t.q {
                let fa = Fq::from_index(&t, a);
                let fb = Fq::from_index(&t, b);
                let lhs = (fa.clone() + fb.clone()).pow(3);
                assert_eq!(lhs, fa.pow(3) + fb.pow(3));
            }
        }
    }

    #[test]
    fn generator_has_full_order() {
        for (p, f) in [(3, 1), (3, 2), (2, 2), (7, 1)] {
            let t = FqTables::get(p, f).unwrap();
            let g = Fq::from_index(&t, t.generator);
            let mut seen = std::collections::HashSet::new();
            let mut acc = Fq::int(&t, 1);
            for _ in 0..(t.q - 1) {
                assert!(seen.insert(acc.index()));
                acc = acc * g.clone();
            }
            assert_eq!(acc, Fq::int(&t, 1));
            // dlog and exp are mutually inverse
            for a in 0..(t.q - 1) {
                assert_eq!(t.dlog[t.exp[a as usize] as usize], a);
            }
        }
    }

    #[test]
    fn detached_literals_adopt_fields() {
        let t = FqTables::get(3, 1).unwrap();
        let one = Fq::one();
        let x = Fq::int(&t, 2);
        assert_eq!(one.clone() + x.clone(), Fq::int(&t, 0));
        assert_eq!((-one) * x, Fq::int(&t, 1));
        assert_eq!(Fq::zero() + Fq::one(), Fq::one());
    }

    #[test]
    fn laurent_ring_ops() {
        let v0 = QHalf::q_half_of(0);
        let v1 = QHalf::q_half_of(1);
        let q0 = QHalf::q_of(0);
        assert_eq!(v0.clone() * v0.clone(), q0.clone());
        let x = v0.clone() * v1.clone() + QHalf::constant(2);
        let y = x.clone() * x.clone();
        // (v0 v1 + 2)^2 = v0^2 v1^2 + 4 v0 v1 + 4
        let expect = QHalf::monomial_vec(&[2, 2], 1)
            + QHalf::monomial_vec(&[1, 1], 4)
            + QHalf::constant(4);
        assert_eq!(y, expect);
        assert!((x.clone() - x).is_zero());
        // negative exponents fail the gate
        let bad = QHalf::monomial(0, -1, 3);
        assert!(!bad.is_polynomial());
        let t = FqTables::get(3, 1).unwrap();
        assert!(specialize(&bad, &t).is_err());
        assert_eq!(specialize(&q0, &t).unwrap(), Fq::int(&t, 0));
        assert_eq!(
            specialize(&(QHalf::constant(5) + q0), &t).unwrap(),
            Fq::int(&t, 2)
        );
    }

    #[test]
    fn trailing_zero_trim_gives_canonical_keys() {
        let a = QHalf::monomial_vec(&[1, 0, 0], 1);
        let b = QHalf::monomial(0, 1, 1);
        assert_eq!(a, b);
    }
}

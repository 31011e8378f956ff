//! Exact arithmetic in the tower GF(p) < GF(q) < GF(q^t).
//!
//! Elements of GF(q^t) are stored as packed codes: the base-q digits of a
//! code are the coefficients of the element on the power basis {1, v, ...,
//! v^(t-1)}, and each GF(q) coefficient is itself the base-p packing of its
//! coefficients on {1, u, ..., u^(e-1)}.  The GF(q) subfield is therefore
//! exactly the set of codes below q.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Packed element code of GF(q^t) (or of GF(q), when the code is < q).
pub type Elem = u64;

const DEFAULT_ENUM_BOUND: u64 = 1 << 20;
const DEFAULT_TABLE_THRESHOLD: u64 = 1 << 20;

/// Size limits for a [`FieldTower`].
#[derive(Clone, Copy, Debug)]
pub struct TowerConfig {
    /// Reject towers with q^t above this bound.
    pub enum_bound: u64,
    /// Build discrete-log/antilog tables only when q^t is at most this.
    pub table_threshold: u64,
}

impl Default for TowerConfig {
    fn default() -> Self {
        TowerConfig {
            enum_bound: DEFAULT_ENUM_BOUND,
            table_threshold: DEFAULT_TABLE_THRESHOLD,
        }
    }
}

/// The arithmetic context GF(p) < GF(q = p^e) < GF(q^t).
///
/// Immutable after construction; all element operations are pure.
pub struct FieldTower {
    p: u64,
    e: u32,
    t: u32,
    q: u64,
    qt: u64,
    /// Monic irreducible of degree e over GF(p), low degree first.
    f: Vec<u64>,
    /// Monic irreducible of degree t over GF(q) (coefficients are GF(q) codes).
    g: Vec<u64>,
    // GF(q) tables, q x q flattened.
    add_q: Vec<u64>,
    mul_q: Vec<u64>,
    inv_q: Vec<u64>,
    neg_q: Vec<u64>,
    /// a -> a^p in GF(q).
    frob_p_q: Vec<u64>,
    // Discrete log/antilog tables for GF(q^t)* when qt <= table_threshold.
    log: Option<Vec<u64>>,
    exp: Option<Vec<u64>>,
}

impl FieldTower {
    /// Builds the tower with deterministically chosen moduli: the least
    /// irreducible monic polynomial of the right degree, where candidates are
    /// ordered by the packed value of their non-leading coefficients.
    pub fn build(p: u64, e: u32, t: u32) -> Result<FieldTower> {
        FieldTower::build_with(p, e, t, None, None, TowerConfig::default())
    }

    pub fn build_with(
        p: u64,
        e: u32,
        t: u32,
        f_override: Option<&[u64]>,
        g_override: Option<&[u64]>,
        cfg: TowerConfig,
    ) -> Result<FieldTower> {
        if !is_prime(p) {
            return Err(Error::NonPrime(p));
        }
        if e == 0 {
            return Err(Error::InvalidConfig("e must be positive".into()));
        }
        if t < 2 {
            return Err(Error::DegreeTooSmall(t, 2));
        }
        let q = checked_pow(p, e, cfg.enum_bound)?;
        let qt = checked_pow(q, t, cfg.enum_bound)?;

        // GF(p) as a trivial base field for selecting f.
        let fp = SmallField::prime(p);
        let f = match f_override {
            Some(f) => {
                let f = f.to_vec();
                validate_irreducible(&fp, &f, e as usize)?;
                f
            }
            None => least_irreducible(&fp, e as usize),
        };

        // GF(q) tables from polynomial arithmetic mod f.
        let (add_q, mul_q, inv_q, neg_q, frob_p_q) = build_gfq_tables(p, e, q, &f);
        let fq = SmallField {
            size: q,
            add: add_q.clone(),
            mul: mul_q.clone(),
            inv: inv_q.clone(),
            neg: neg_q.clone(),
        };
        let g = match g_override {
            Some(g) => {
                let g = g.to_vec();
                validate_irreducible(&fq, &g, t as usize)?;
                g
            }
            None => least_irreducible(&fq, t as usize),
        };

        let mut tower = FieldTower {
            p,
            e,
            t,
            q,
            qt,
            f,
            g,
            add_q,
            mul_q,
            inv_q,
            neg_q,
            frob_p_q,
            log: None,
            exp: None,
        };
        if qt <= cfg.table_threshold {
            tower.build_log_tables();
        }
        Ok(tower)
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn e(&self) -> u32 {
        self.e
    }
    pub fn t(&self) -> u32 {
        self.t
    }
    pub fn q(&self) -> u64 {
        self.q
    }
    pub fn qt(&self) -> u64 {
        self.qt
    }
    pub fn f_poly(&self) -> &[u64] {
        &self.f
    }
    pub fn g_poly(&self) -> &[u64] {
        &self.g
    }

    /// All element codes of GF(q^t), zero first.
    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.qt
    }

    /// All element codes of the GF(q) subfield.
    pub fn subfield_elements(&self) -> impl Iterator<Item = Elem> {
        0..self.q
    }

    pub fn is_in_base(&self, a: Elem) -> bool {
        a < self.q
    }

    /// Base-q digits of a code (coefficients on the power basis), length t.
    pub fn digits(&self, a: Elem) -> Vec<u64> {
        let mut a = a;
        (0..self.t)
            .map(|_| {
                let d = a % self.q;
                a /= self.q;
                d
            })
            .collect()
    }

    pub fn from_digits(&self, digits: &[u64]) -> Elem {
        let mut a = 0;
        for &d in digits.iter().rev() {
            debug_assert!(d < self.q);
            a = a * self.q + d;
        }
        a
    }

    /// Flattened GF(p) coefficient vector of length e*t, low degree first.
    pub fn p_coeffs(&self, a: Elem) -> Vec<u64> {
        let mut out = Vec::with_capacity((self.e * self.t) as usize);
        for d in self.digits(a) {
            let mut d = d;
            for _ in 0..self.e {
                out.push(d % self.p);
                d /= self.p;
            }
        }
        out
    }

    // ---- GF(q) arithmetic on codes < q ----

    pub fn fq_add(&self, a: Elem, b: Elem) -> Elem {
        self.add_q[(a * self.q + b) as usize]
    }
    pub fn fq_mul(&self, a: Elem, b: Elem) -> Elem {
        self.mul_q[(a * self.q + b) as usize]
    }
    pub fn fq_neg(&self, a: Elem) -> Elem {
        self.neg_q[a as usize]
    }
    pub fn fq_inv(&self, a: Elem) -> Elem {
        debug_assert!(a != 0);
        self.inv_q[a as usize]
    }
    /// a^(p^j) for a in GF(q); the table holds the generator a -> a^p.
    pub fn fq_frob_p(&self, a: Elem, j: u32) -> Elem {
        let mut a = a;
        for _ in 0..(j % self.e) {
            a = self.frob_p_q[a as usize];
        }
        a
    }

    // ---- GF(q^t) arithmetic ----

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut shift = 1;
        for _ in 0..self.t {
            out += self.fq_add(a % self.q, b % self.q) * shift;
            a /= self.q;
            b /= self.q;
            shift *= self.q;
        }
        out
    }

    pub fn neg(&self, a: Elem) -> Elem {
        let mut a = a;
        let mut out = 0;
        let mut shift = 1;
        for _ in 0..self.t {
            out += self.fq_neg(a % self.q) * shift;
            a /= self.q;
            shift *= self.q;
        }
        out
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            return 0;
        }
        if let (Some(log), Some(exp)) = (&self.log, &self.exp) {
            let n = self.qt - 1;
            let s = (log[a as usize] + log[b as usize]) % n;
            return exp[s as usize];
        }
        self.mul_poly(a, b)
    }

    fn mul_poly(&self, a: Elem, b: Elem) -> Elem {
        let da = self.digits(a);
        let db = self.digits(b);
        let t = self.t as usize;
        let mut prod = vec![0u64; 2 * t - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                if y == 0 {
                    continue;
                }
                prod[i + j] = self.fq_add(prod[i + j], self.fq_mul(x, y));
            }
        }
        // Reduce mod g: v^t = -(g_0 + g_1 v + ... + g_{t-1} v^{t-1}).
        for i in (t..2 * t - 1).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            prod[i] = 0;
            for j in 0..t {
                let sub = self.fq_mul(c, self.g[j]);
                prod[i - t + j] = self.fq_add(prod[i - t + j], self.fq_neg(sub));
            }
        }
        self.from_digits(&prod[..t])
    }

    /// Scalar multiple by a GF(q) element, digitwise.
    pub fn scale(&self, c: Elem, a: Elem) -> Elem {
        debug_assert!(c < self.q);
        let mut a = a;
        let mut out = 0;
        let mut shift = 1;
        for _ in 0..self.t {
            out += self.fq_mul(c, a % self.q) * shift;
            a /= self.q;
            shift *= self.q;
        }
        out
    }

    pub fn inv(&self, a: Elem) -> Elem {
        debug_assert!(a != 0);
        if let (Some(log), Some(exp)) = (&self.log, &self.exp) {
            let n = self.qt - 1;
            let s = (n - log[a as usize]) % n;
            return exp[s as usize];
        }
        self.pow(a, self.qt - 2)
    }

    /// a^k with k taken modulo q^t - 1 for nonzero a.
    pub fn pow(&self, a: Elem, k: u64) -> Elem {
        if a == 0 {
            return if k == 0 { 1 } else { 0 };
        }
        let n = self.qt - 1;
        let k = k % n;
        if let (Some(log), Some(exp)) = (&self.log, &self.exp) {
            let s = ((log[a as usize] as u128 * k as u128) % n as u128) as u64;
            return exp[s as usize];
        }
        let mut base = a;
        let mut k = k;
        let mut acc = 1;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    /// a^d for an exact (possibly negative) integer exponent.
    pub fn pow_int(&self, a: Elem, d: &BigInt) -> Elem {
        if a == 0 {
            return if d.is_zero() { 1 } else { 0 };
        }
        let n = BigInt::from(self.qt - 1);
        let mut r = d.mod_floor(&n);
        if r.is_negative() {
            r += &n;
        }
        self.pow(a, r.to_u64().expect("reduced exponent fits u64"))
    }

    /// a^(q^i), the i-th power of the q-Frobenius.
    pub fn frob(&self, a: Elem, i: u32) -> Elem {
        let i = i % self.t;
        if i == 0 || a < self.q {
            return a;
        }
        let n = self.qt - 1;
        let mut exp: u64 = 1;
        for _ in 0..i {
            exp = ((exp as u128 * self.q as u128) % n as u128) as u64;
        }
        self.pow(a, exp)
    }

    /// a^(p^j): the full automorphism group of GF(q^t) over GF(p).
    pub fn frob_p(&self, a: Elem, j: u32) -> Elem {
        let j = j % (self.e * self.t);
        if j == 0 {
            return a;
        }
        let n = self.qt - 1;
        let mut exp: u64 = 1;
        for _ in 0..j {
            exp = ((exp as u128 * self.p as u128) % n as u128) as u64;
        }
        self.pow(a, exp)
    }

    /// The norm over GF(q): the product of the t conjugates.  The result lies
    /// in the GF(q) subfield (its code is below q).
    pub fn norm(&self, a: Elem) -> Elem {
        let mut acc = a;
        let mut conj = a;
        for _ in 1..self.t {
            conj = self.frob(conj, 1);
            acc = self.mul(acc, conj);
        }
        debug_assert!(acc < self.q);
        acc
    }

    /// Smallest m dividing t with a^(q^m) = a.  The order of 0 is 1.
    pub fn elem_order(&self, a: Elem) -> u32 {
        for m in 1..=self.t {
            if self.t % m == 0 && self.frob(a, m) == a {
                return m;
            }
        }
        unreachable!("a^(q^t) = a for every element")
    }

    /// Whether a lies in the intermediate field GF(q^m).
    pub fn in_subfield(&self, a: Elem, m: u32) -> bool {
        m % self.elem_order(a) == 0
    }

    /// Canonical representative of the projective point <a>_q: the least code
    /// in the orbit of a under GF(q)* scaling.
    pub fn fq_span_rep(&self, a: Elem) -> Elem {
        let mut best = a;
        for c in 2..self.q {
            let s = self.scale(c, a);
            if s < best {
                best = s;
            }
        }
        best
    }

    fn build_log_tables(&mut self) {
        let n = self.qt - 1;
        let factors = prime_factors(n);
        let gen = (1..self.qt)
            .find(|&c| {
                factors
                    .iter()
                    .all(|&r| self.pow_no_tables(c, n / r) != 1)
            })
            .expect("GF(q^t)* is cyclic");
        let mut log = vec![0u64; self.qt as usize];
        let mut exp = vec![0u64; n as usize];
        let mut acc = 1u64;
        for i in 0..n {
            exp[i as usize] = acc;
            log[acc as usize] = i;
            acc = self.mul_poly(acc, gen);
        }
        debug_assert_eq!(acc, 1);
        self.log = Some(log);
        self.exp = Some(exp);
    }

    fn pow_no_tables(&self, a: Elem, mut k: u64) -> Elem {
        let mut base = a;
        let mut acc = 1;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul_poly(acc, base);
            }
            base = self.mul_poly(base, base);
            k >>= 1;
        }
        acc
    }
}

/// theta_s = (q^(s+1) - 1)/(q - 1), the number of points of PG(s, q).
/// theta_{-1} = 0.
pub fn theta(s: i64, q: u64) -> BigInt {
    if s < 0 {
        return BigInt::zero();
    }
    let q = BigInt::from(q);
    (q.pow(s as u32 + 1) - 1) / (q - 1)
}

/// Least nonnegative d with d * theta_{nu-1} = 1 (mod theta_{t-1}).
/// Requires gcd(nu, t) = 1.
pub fn theta_inverse(nu: u64, t: u64, q: u64) -> Result<BigInt> {
    if nu.gcd(&t) != 1 {
        return Err(Error::NotCoprime { nu, t });
    }
    let a = theta(nu as i64 - 1, q);
    let m = theta(t as i64 - 1, q);
    if m.is_one() {
        return Ok(BigInt::zero());
    }
    let ext = a.extended_gcd(&m);
    debug_assert!(ext.gcd.is_one());
    Ok(ext.x.mod_floor(&m))
}

/// Sum of the base-q digits of d.
pub fn digit_sum(d: &BigUint, q: u64) -> u64 {
    let q = BigUint::from(q);
    let mut d = d.clone();
    let mut s = 0u64;
    while !d.is_zero() {
        let (quo, rem) = d.div_rem(&q);
        s += rem.to_u64().unwrap();
        d = quo;
    }
    s
}

/// Parses a comma-separated coefficient list, low degree first.
pub fn parse_poly(s: &str) -> Result<Vec<u64>> {
    s.split(',')
        .map(|c| {
            c.trim()
                .parse::<u64>()
                .map_err(|_| Error::InvalidConfig(format!("bad coefficient {:?}", c)))
        })
        .collect()
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn checked_pow(base: u64, exp: u32, bound: u64) -> Result<u64> {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc *= base as u128;
        if acc > bound as u128 {
            return Err(Error::SizeLimit {
                qt: acc.min(u64::MAX as u128) as u64,
                bound,
            });
        }
    }
    Ok(acc as u64)
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// ---- small-field polynomial machinery used only at construction time ----

/// Table-backed arithmetic for a field of size at most a few hundred.
struct SmallField {
    size: u64,
    add: Vec<u64>,
    mul: Vec<u64>,
    inv: Vec<u64>,
    neg: Vec<u64>,
}

impl SmallField {
    fn prime(p: u64) -> SmallField {
        let mut add = vec![0; (p * p) as usize];
        let mut mul = vec![0; (p * p) as usize];
        let mut inv = vec![0; p as usize];
        let mut neg = vec![0; p as usize];
        for a in 0..p {
            neg[a as usize] = (p - a) % p;
            for b in 0..p {
                add[(a * p + b) as usize] = (a + b) % p;
                mul[(a * p + b) as usize] = a * b % p;
                if a * b % p == 1 {
                    inv[a as usize] = b;
                }
            }
        }
        SmallField {
            size: p,
            add,
            mul,
            inv,
            neg,
        }
    }

    fn add(&self, a: u64, b: u64) -> u64 {
        self.add[(a * self.size + b) as usize]
    }
    fn mul(&self, a: u64, b: u64) -> u64 {
        self.mul[(a * self.size + b) as usize]
    }
    fn neg(&self, a: u64) -> u64 {
        self.neg[a as usize]
    }
    fn inv(&self, a: u64) -> u64 {
        self.inv[a as usize]
    }
}

fn poly_trim(p: &mut Vec<u64>) {
    while p.last() == Some(&0) {
        p.pop();
    }
}

/// Remainder of a mod b over the field; b must be nonzero.
fn poly_rem(fld: &SmallField, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let mut b = b.to_vec();
    poly_trim(&mut b);
    let db = b.len() - 1;
    let lead_inv = fld.inv(b[db]);
    while r.len() > db {
        let dr = r.len() - 1;
        let c = fld.mul(r[dr], lead_inv);
        for i in 0..=db {
            let s = fld.mul(c, b[i]);
            r[dr - db + i] = fld.add(r[dr - db + i], fld.neg(s));
        }
        poly_trim(&mut r);
        if r.is_empty() {
            break;
        }
    }
    r
}

/// Exhaustive trial division by all lower-degree monic polynomials.
fn poly_is_irreducible(fld: &SmallField, poly: &[u64]) -> bool {
    let deg = poly.len() - 1;
    if deg == 0 {
        return false;
    }
    if deg == 1 {
        return true;
    }
    for d in 1..=deg / 2 {
        // All monic divisors of degree d: packed non-leading coefficients.
        let count = fld.size.pow(d as u32);
        for packed in 0..count {
            let mut cand = Vec::with_capacity(d + 1);
            let mut v = packed;
            for _ in 0..d {
                cand.push(v % fld.size);
                v /= fld.size;
            }
            cand.push(1);
            if poly_rem(fld, poly, &cand).is_empty() {
                return false;
            }
        }
    }
    true
}

/// The least monic irreducible of the given degree, ordering candidates by
/// the packed value of the non-leading coefficients.
fn least_irreducible(fld: &SmallField, deg: usize) -> Vec<u64> {
    let count = fld.size.pow(deg as u32);
    for packed in 0..count {
        let mut cand = Vec::with_capacity(deg + 1);
        let mut v = packed;
        for _ in 0..deg {
            cand.push(v % fld.size);
            v /= fld.size;
        }
        cand.push(1);
        if poly_is_irreducible(fld, &cand) {
            return cand;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn validate_irreducible(fld: &SmallField, poly: &[u64], deg: usize) -> Result<()> {
    if poly.len() != deg + 1 || poly[deg] != 1 || poly.iter().any(|&c| c >= fld.size) {
        return Err(Error::BadPolynomialDegree(poly.to_vec(), deg));
    }
    if !poly_is_irreducible(fld, poly) {
        return Err(Error::ReduciblePolynomial(poly.to_vec(), fld.size));
    }
    Ok(())
}

fn build_gfq_tables(
    p: u64,
    e: u32,
    q: u64,
    f: &[u64],
) -> (Vec<u64>, Vec<u64>, Vec<u64>, Vec<u64>, Vec<u64>) {
    let fp = SmallField::prime(p);
    let unpack = |a: u64| -> Vec<u64> {
        let mut v = Vec::with_capacity(e as usize);
        let mut a = a;
        for _ in 0..e {
            v.push(a % p);
            a /= p;
        }
        v
    };
    let pack = |v: &[u64]| -> u64 {
        let mut a = 0;
        for &c in v.iter().rev() {
            a = a * p + c;
        }
        a
    };
    let mut add = vec![0; (q * q) as usize];
    let mut mul = vec![0; (q * q) as usize];
    let mut inv = vec![0; q as usize];
    let mut neg = vec![0; q as usize];
    for a in 0..q {
        let va = unpack(a);
        neg[a as usize] = pack(&va.iter().map(|&c| fp.neg(c)).collect::<Vec<_>>());
        for b in 0..q {
            let vb = unpack(b);
            let sum: Vec<u64> = va.iter().zip(&vb).map(|(&x, &y)| fp.add(x, y)).collect();
            add[(a * q + b) as usize] = pack(&sum);
            // product mod f
            let mut prod = vec![0u64; 2 * e as usize - 1];
            for (i, &x) in va.iter().enumerate() {
                for (j, &y) in vb.iter().enumerate() {
                    prod[i + j] = fp.add(prod[i + j], fp.mul(x, y));
                }
            }
            let mut r = poly_rem(&fp, &prod, f);
            r.resize(e as usize, 0);
            let m = pack(&r);
            mul[(a * q + b) as usize] = m;
            if m == 1 {
                inv[a as usize] = b;
            }
        }
    }
    // a -> a^p table
    let mut frob_p_q = vec![0; q as usize];
    for a in 0..q {
        let mut acc = 1u64;
        for _ in 0..p {
            acc = mul[(acc * q + a) as usize];
        }
        frob_p_q[a as usize] = acc;
    }
    (add, mul, inv, neg, frob_p_q)
}

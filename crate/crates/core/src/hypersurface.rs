//! The degree-t hypersurface {<(a,b)> : N(a) = N(b)} of PG(2t-1, q), its
//! partitions into (t-1)-subspaces {<(z, k z^(q^h))>}, the line counts N1 and
//! N2, and the closed-form count of q-order sublines of the reference
//! pseudoregulus set.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::fieldred::{contract, expand};
use crate::gf::{theta, Elem, FieldTower};
use crate::projspace::{enumerate_space_points, Fld, ProjPoint, Subspace};

fn require_q_ge_t(q: u64, t: u32) -> Result<()> {
    if q < t as u64 {
        return Err(Error::OutOfHypothesis { q, min: t as u64 });
    }
    Ok(())
}

/// Splits a point of PG(2t-1, q) into its two field coordinates.
pub fn split(tw: &FieldTower, p: &ProjPoint) -> (Elem, Elem) {
    let pair = contract(tw, &p.coords);
    debug_assert_eq!(pair.len(), 2);
    (pair[0], pair[1])
}

/// Membership predicate: equal norms of the two halves.
pub fn membership(tw: &FieldTower, p: &ProjPoint) -> bool {
    let (a, b) = split(tw, p);
    tw.norm(a) == tw.norm(b)
}

/// All points of the hypersurface, materialized; theta_{t-1}^2 of them.
pub fn points(tw: &FieldTower) -> Vec<ProjPoint> {
    enumerate_space_points(Fld::base(tw), 2 * tw.t() as usize)
        .filter(|p| membership(tw, p))
        .collect()
}

pub fn norm_one_elements(tw: &FieldTower) -> Vec<Elem> {
    (1..tw.qt()).filter(|&k| tw.norm(k) == 1).collect()
}

/// One member of a partition family: the (t-1)-subspace
/// {<(z, k z^(q^h))> : z != 0} with N(k) = 1.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct FamilySubspace {
    pub h: u32,
    pub k: Elem,
}

impl FamilySubspace {
    pub fn subspace(&self, tw: &FieldTower) -> Subspace {
        let t = tw.t() as usize;
        let v: Elem = tw.q();
        let rows: Vec<Vec<Elem>> = (0..t)
            .map(|i| {
                let z = tw.pow(v, i as u64);
                let mut row = expand(tw, &[z]);
                row.extend(expand(tw, &[tw.mul(self.k, tw.frob(z, self.h))]));
                row
            })
            .collect();
        Subspace::from_vectors(Fld::base(tw), 2 * t, &rows)
    }

    /// Direct membership without materializing the subspace.
    pub fn contains_point(&self, tw: &FieldTower, p: &ProjPoint) -> bool {
        let (a, b) = split(tw, p);
        b == tw.mul(self.k, tw.frob(a, self.h))
    }
}

/// The h-th family: one member per norm-one k; a partition of the
/// hypersurface.
pub fn family(tw: &FieldTower, h: u32) -> Result<Vec<FamilySubspace>> {
    if h >= tw.t() {
        return Err(Error::InvalidConfig(format!(
            "family index {h} out of range 0..{}",
            tw.t()
        )));
    }
    Ok(norm_one_elements(tw)
        .into_iter()
        .map(|k| FamilySubspace { h, k })
        .collect())
}

/// The member of the h-th family through a hypersurface point.
pub fn family_member_through(tw: &FieldTower, h: u32, p: &ProjPoint) -> FamilySubspace {
    let (a, b) = split(tw, p);
    debug_assert!(a != 0 && b != 0, "hypersurface points have nonzero halves");
    FamilySubspace { h, k: tw.mul(b, tw.inv(tw.frob(a, h))) }
}

fn mobius(mut n: u64) -> i64 {
    let mut m = 1i64;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            m = -m;
        }
        p += 1;
    }
    if n > 1 {
        m = -m;
    }
    m
}

/// Number of elements of GF(q^t) of degree exactly m over GF(q).
pub fn degree_exactly_count(q: u64, m: u32) -> BigInt {
    let mut acc = BigInt::zero();
    for d in 1..=m {
        if m % d == 0 {
            acc += mobius((m / d) as u64) * BigInt::from(q).pow(d);
        }
    }
    debug_assert!(!acc.is_negative());
    acc
}

/// Sum of [GF(q)(y):GF(q)] over all y outside GF(q).
pub fn degree_sum(q: u64, t: u32) -> BigInt {
    let mut acc = BigInt::zero();
    for m in 2..=t {
        if t % m == 0 {
            acc += m * degree_exactly_count(q, m);
        }
    }
    acc
}

pub(crate) fn exact_div(num: BigInt, den: BigInt) -> BigInt {
    let (quo, rem) = num.div_rem(&den);
    assert!(rem.is_zero(), "count formula must divide exactly");
    quo
}

/// Lines of the hypersurface through one of its points.
pub fn n1(q: u64, t: u32) -> Result<BigInt> {
    require_q_ge_t(q, t)?;
    Ok(exact_div(degree_sum(q, t), BigInt::from(q * (q - 1))))
}

/// All lines of PG(2t-1, q) contained in the hypersurface.
pub fn n2(q: u64, t: u32) -> Result<BigInt> {
    require_q_ge_t(q, t)?;
    let th = theta(t as i64 - 1, q);
    Ok(exact_div(
        &th * &th * degree_sum(q, t),
        BigInt::from(q * (q * q - 1)),
    ))
}

/// Closed-form number of q-order sublines of the reference pseudoregulus set.
pub fn subline_count(q: u64, t: u32) -> Result<BigInt> {
    let n1 = n1(q, t)?;
    let th = theta(t as i64 - 1, q);
    Ok(exact_div(
        th * (n1 - theta(t as i64 - 2, q)),
        BigInt::from(q + 1),
    ))
}

/// Prime-t simplification of [`subline_count`].
pub fn subline_count_prime_t(q: u64, t: u32) -> Result<BigInt> {
    require_q_ge_t(q, t)?;
    Ok(exact_div(
        (t - 1) * theta(t as i64 - 1, q) * theta(t as i64 - 2, q),
        theta(1, q),
    ))
}

/// The lines through a hypersurface point by the structured classification:
/// conjugate the point to <(1,1)> by a norm-preserving diagonal map, then
/// join with the points <(y, y^(q^h))>, y outside GF(q).
pub fn lines_through(tw: &FieldTower, p: &ProjPoint) -> Result<BTreeSet<Subspace>> {
    require_q_ge_t(tw.q(), tw.t())?;
    let fb = Fld::base(tw);
    let t = tw.t() as usize;
    let (a0, b0) = split(tw, p);
    assert!(tw.norm(a0) == tw.norm(b0), "point not on the hypersurface");
    let mut out = BTreeSet::new();
    for y in tw.q()..tw.qt() {
        for h in 0..tw.t() {
            // diagonal image of (y, y^(q^h)) under (x,z) -> (a0 x, b0 z)
            let mut q_row = expand(tw, &[tw.mul(a0, y)]);
            q_row.extend(expand(tw, &[tw.mul(b0, tw.frob(y, h))]));
            let line = Subspace::from_vectors(fb, 2 * t, &[p.coords.clone(), q_row]);
            debug_assert_eq!(line.pdim(), 1);
            out.insert(line);
        }
    }
    Ok(out)
}

/// Brute-force oracle: lines through a point by scanning all hypersurface
/// points and testing full containment.
pub fn lines_through_scan(tw: &FieldTower, p: &ProjPoint) -> BTreeSet<Subspace> {
    let fb = Fld::base(tw);
    let t = tw.t() as usize;
    let mut out = BTreeSet::new();
    for q_pt in points(tw) {
        if &q_pt == p {
            continue;
        }
        let line = Subspace::from_vectors(fb, 2 * t, &[p.coords.clone(), q_pt.coords]);
        if out.contains(&line) {
            continue;
        }
        if line.points(fb).iter().all(|x| membership(tw, x)) {
            out.insert(line);
        }
    }
    out
}

/// Brute-force oracle: all lines contained in the hypersurface.
pub fn all_lines_scan(tw: &FieldTower) -> BTreeSet<Subspace> {
    let fb = Fld::base(tw);
    let t = tw.t() as usize;
    let pts = points(tw);
    let mut out = BTreeSet::new();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let line = Subspace::from_vectors(
                fb,
                2 * t,
                &[pts[i].coords.clone(), pts[j].coords.clone()],
            );
            if out.contains(&line) {
                continue;
            }
            if line.points(fb).iter().all(|x| membership(tw, x)) {
                out.insert(line);
            }
        }
    }
    out
}

/// One row of the counts table.
#[derive(Clone, Debug)]
pub struct CountsRow {
    pub q: u64,
    pub t: u32,
    pub n1: BigInt,
    pub n2: BigInt,
    pub subline_count_formula: BigInt,
    pub subline_count_enumerated: Option<BigInt>,
    pub agree: Option<bool>,
}

pub fn counts_row(q: u64, t: u32, enumerated: Option<BigInt>) -> Result<CountsRow> {
    let formula = subline_count(q, t)?;
    let agree = enumerated.as_ref().map(|e| e == &formula);
    Ok(CountsRow {
        q,
        t,
        n1: n1(q, t)?,
        n2: n2(q, t)?,
        subline_count_formula: formula,
        subline_count_enumerated: enumerated,
        agree,
    })
}

//! Field reduction PG(r-1, q^t) -> PG(rt-1, q) with respect to the tower's
//! power basis {1, v, ..., v^(t-1)}, the induced Desarguesian spread, and the
//! blow-down map B(S) defining linear sets.

use std::collections::BTreeSet;

use num_bigint::BigInt;

use crate::gf::{theta, Elem, FieldTower};
use crate::projspace::{Fld, ProjPoint, Subspace};

/// A linear set of PG(r-1, q^t) together with a witness subspace of
/// PG(rt-1, q) that blows down to it.
#[derive(Clone, Debug)]
pub struct LinearSet {
    pub points: BTreeSet<ProjPoint>,
    pub witness: Subspace,
    /// dim(witness) + 1, the number of GF(q)-dimensions behind the set.
    pub rank: usize,
    /// True when |points| attains the maximum theta_{rank-1}.
    pub scattered: bool,
}

/// Expands a GF(q^t)-vector into rt base-q coordinates on the power basis.
pub fn expand(tw: &FieldTower, coords: &[Elem]) -> Vec<Elem> {
    let mut out = Vec::with_capacity(coords.len() * tw.t() as usize);
    for &c in coords {
        out.extend(tw.digits(c));
    }
    out
}

/// Reads rt base-q coordinates back as a GF(q^t)-vector of length r.
pub fn contract(tw: &FieldTower, coords: &[Elem]) -> Vec<Elem> {
    let t = tw.t() as usize;
    debug_assert_eq!(coords.len() % t, 0);
    coords.chunks(t).map(|c| tw.from_digits(c)).collect()
}

/// The spread element of a point P of PG(r-1, q^t): the (t-1)-subspace of
/// PG(rt-1, q) whose GF(q)-points are the expansions of the GF(q^t)-multiples
/// of P.
pub fn field_reduce(tw: &FieldTower, p: &ProjPoint) -> Subspace {
    let t = tw.t() as usize;
    let r = p.coords.len();
    let fb = Fld::base(tw);
    let v: Elem = tw.q(); // code of the power-basis generator
    let mut rows = Vec::with_capacity(t);
    let mut scale: Elem = 1;
    for _ in 0..t {
        let multiple: Vec<Elem> = p.coords.iter().map(|&c| tw.mul(scale, c)).collect();
        rows.push(expand(tw, &multiple));
        scale = tw.mul(scale, v);
    }
    let s = Subspace::from_vectors(fb, r * t, &rows);
    debug_assert_eq!(s.pdim(), t as i64 - 1);
    s
}

/// The point of PG(r-1, q^t) whose spread element contains the given
/// GF(q)-point of PG(rt-1, q).
pub fn blow_down_point(tw: &FieldTower, p: &ProjPoint) -> ProjPoint {
    let fe = Fld::ext(tw);
    ProjPoint::normalize(fe, &contract(tw, &p.coords)).expect("nonzero point")
}

/// B(S): the linear set of all points of PG(r-1, q^t) whose spread element
/// meets S.  Computed by blowing down every GF(q)-point of S.
pub fn blowup_b(tw: &FieldTower, s: &Subspace) -> LinearSet {
    let fb = Fld::base(tw);
    let points: BTreeSet<ProjPoint> = s
        .points(fb)
        .iter()
        .map(|p| blow_down_point(tw, p))
        .collect();
    let rank = s.rank();
    let scattered = BigInt::from(points.len()) == theta(rank as i64 - 1, tw.q());
    LinearSet { points, witness: s.clone(), rank, scattered }
}

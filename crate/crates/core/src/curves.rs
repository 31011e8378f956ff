//! q-order sublines of the reference pseudoregulus set: enumeration by two
//! independent algorithms, classification by the hypersurface family carrying
//! a transversal line, preimage curves inside the subgeometry, normal
//! rational curves (construction, detection, rationality), and exact integer
//! powers of lines of PG_q(F_{q^t}).

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{digit_sum, is_prime, theta, theta_inverse, Elem, FieldTower};
use crate::hypersurface::{exact_div, norm_one_elements, subline_count};
use crate::linset::{frame_matrix, reference_set, CanonicalSubgeometry};
use crate::projspace::{
    enumerate_space_points, mat_inv, mat_vec, span, Fld, ProjPoint, Subspace,
};

/// A q-order subline is determined by its point set; all algorithms use the
/// sorted set of normalized points as the canonical key.
pub type SublinePoints = BTreeSet<ProjPoint>;

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

/// The points (a : b) of PG(1, q) as pairs of base-subfield codes.
fn pg1_base(tw: &FieldTower) -> Vec<(Elem, Elem)> {
    let mut out: Vec<(Elem, Elem)> = (0..tw.q()).map(|b| (1, b)).collect();
    out.push((0, 1));
    out
}

/// The unique q-order subline through three distinct points of PG(1, q^t):
/// the image of PG(1, q) under the projectivity sending the standard frame
/// to the three points.
pub fn subline_closure(
    tw: &FieldTower,
    p1: &ProjPoint,
    p2: &ProjPoint,
    p3: &ProjPoint,
) -> Result<SublinePoints> {
    if p1 == p2 || p1 == p3 || p2 == p3 {
        return Err(Error::InvalidConfig("subline frame points must be distinct".into()));
    }
    let fe = Fld::ext(tw);
    let m = frame_matrix(tw, p1, p2, p3)
        .expect("distinct points of a projective line form a frame");
    let mut out = BTreeSet::new();
    for (a, b) in pg1_base(tw) {
        let img = mat_vec(fe, &m, &[a, b]);
        out.insert(ProjPoint::normalize(fe, &img).expect("projectivity image is nonzero"));
    }
    debug_assert_eq!(out.len() as u64, tw.q() + 1);
    Ok(out)
}

/// Enumeration algorithm A: close every 3-subset of the reference set and
/// keep the sublines fully contained in it.  Quadratic-cubic oracle path.
pub fn sublines_triple_closure(tw: &FieldTower) -> BTreeSet<SublinePoints> {
    let lref = reference_set(tw);
    let lset: BTreeSet<ProjPoint> = lref.iter().cloned().collect();
    let n = lref.len();
    (0..n)
        .into_par_iter()
        .map(|i| {
            let mut local = BTreeSet::new();
            for j in i + 1..n {
                for k in j + 1..n {
                    let s = subline_closure(tw, &lref[i], &lref[j], &lref[k])
                        .expect("reference points are distinct");
                    if s.iter().all(|p| lset.contains(p)) {
                        local.insert(s);
                    }
                }
            }
            local
        })
        .reduce(BTreeSet::new, |mut a, b| {
            a.extend(b);
            a
        })
}

/// Every line of PG(t-1, q) on the power-basis coordinates, as the list of
/// field codes of its q+1 points.
fn base_line_codes(tw: &FieldTower) -> Vec<Vec<Elem>> {
    let fb = Fld::base(tw);
    let t = tw.t() as usize;
    let pts: Vec<ProjPoint> = enumerate_space_points(fb, t).collect();
    let mut lines = BTreeSet::new();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            lines.insert(span(fb, &[pts[i].clone(), pts[j].clone()]));
        }
    }
    lines
        .iter()
        .map(|l| {
            l.points(fb)
                .iter()
                .map(|p| tw.from_digits(&p.coords))
                .collect()
        })
        .collect()
}

/// Enumeration algorithm B: blow down every line inside a family member
/// S_{h,k} with h >= 1.  A line {<a z + b w>_q} maps to the points
/// <(1, k u^(q^h - 1))> with u on the line; full-size images are exactly the
/// sublines of the reference set, each arising theta_{t-1} times in total.
pub fn sublines_via_families(tw: &FieldTower) -> BTreeSet<SublinePoints> {
    let lines = base_line_codes(tw);
    let ks = norm_one_elements(tw);
    let full = tw.q() + 1;
    let jobs: Vec<(u32, Elem)> = (1..tw.t())
        .flat_map(|h| ks.iter().map(move |&k| (h, k)))
        .collect();
    jobs.par_iter()
        .map(|&(h, k)| {
            let mut local = BTreeSet::new();
            for zline in &lines {
                let mut s: SublinePoints = BTreeSet::new();
                for &z in zline {
                    let c = tw.mul(k, tw.mul(tw.frob(z, h), tw.inv(z)));
                    s.insert(ProjPoint { coords: vec![1, c] });
                }
                if s.len() as u64 == full {
                    local.insert(s);
                }
            }
            local
        })
        .reduce(BTreeSet::new, |mut a, b| {
            a.extend(b);
            a
        })
}

/// Per-family lookup tables v -> {z : z^(q^h - 1) = v}, built once and shared
/// by all classification queries.
pub struct FamilyClassifier {
    buckets: Vec<HashMap<Elem, Vec<Elem>>>,
}

impl FamilyClassifier {
    pub fn new(tw: &FieldTower) -> FamilyClassifier {
        let mut buckets = Vec::new();
        for h in 1..tw.t() {
            let mut map: HashMap<Elem, Vec<Elem>> = HashMap::new();
            for z in 1..tw.qt() {
                let v = tw.mul(tw.frob(z, h), tw.inv(z));
                map.entry(v).or_default().push(z);
            }
            buckets.push(map);
        }
        FamilyClassifier { buckets }
    }
}

/// Classification witness of a subline of the reference set.
#[derive(Clone, Debug)]
pub struct SublineClass {
    /// Family index of the member carrying a transversal line.
    pub h: u32,
    /// Norm-one family parameter of that member.
    pub k: Elem,
    /// Field-element basis of the transversal line (blow-down source).
    pub z: Elem,
    pub w: Elem,
    /// Order of the preimage line: smallest m with (w/z)^(q^m) = w/z.
    pub m: u32,
    /// Order of the preimage curve: the residue of h nu^(-1) mod m in 1..m-1.
    pub preimage_order: u32,
    /// theta_{nu-1}^(-1) modulo theta_{t-1}.
    pub delta: BigInt,
}

/// Finds a family member S_{h,k} containing a transversal line of the
/// regulus of r, i.e. a line whose blow-down is exactly r.  Searches h
/// ascending; candidate basis vectors come from the classifier's root
/// tables for the first two points of r.
pub fn classify_subline(
    tw: &FieldTower,
    fc: &FamilyClassifier,
    r: &SublinePoints,
    nu: u32,
) -> Result<SublineClass> {
    let t = tw.t();
    if gcd(nu as u64, t as u64) != 1 {
        return Err(Error::NotCoprime { nu: nu as u64, t: t as u64 });
    }
    let cset = subline_c_values(r)?;
    let mut it = cset.iter();
    let (&c0, &c1) = (it.next().unwrap(), it.next().unwrap());
    let ks = norm_one_elements(tw);
    let frame = pg1_base(tw);
    for h in 1..t {
        for &k in &ks {
            let ki = tw.inv(k);
            let Some(sols0) = fc.buckets[h as usize - 1].get(&tw.mul(c0, ki)) else { continue };
            let Some(sols1) = fc.buckets[h as usize - 1].get(&tw.mul(c1, ki)) else { continue };
            for &z in sols0 {
                for &w in sols1 {
                    if tw.is_in_base(tw.mul(w, tw.inv(z))) {
                        continue;
                    }
                    let mut image = BTreeSet::new();
                    for &(a, b) in &frame {
                        let u = tw.add(tw.mul(a, z), tw.mul(b, w));
                        image.insert(tw.mul(k, tw.mul(tw.frob(u, h), tw.inv(u))));
                    }
                    if image == cset {
                        let m = tw.elem_order(tw.mul(w, tw.inv(z)));
                        if h % m == 0 {
                            continue;
                        }
                        let nu_inv = (1..m)
                            .find(|x| (x * nu) % m == 1 % m)
                            .expect("nu is invertible modulo every divisor of t");
                        let n = (h * nu_inv) % m;
                        let delta = theta_inverse(nu as u64, t as u64, tw.q())?;
                        return Ok(SublineClass { h, k, z, w, m, preimage_order: n, delta });
                    }
                }
            }
        }
    }
    Err(Error::NoTransversal)
}

/// All family indices h >= 1 whose members carry a transversal line of r.
pub fn families_of_subline(
    tw: &FieldTower,
    fc: &FamilyClassifier,
    r: &SublinePoints,
) -> Result<BTreeSet<u32>> {
    let cset = subline_c_values(r)?;
    let mut it = cset.iter();
    let (&c0, &c1) = (it.next().unwrap(), it.next().unwrap());
    let ks = norm_one_elements(tw);
    let frame = pg1_base(tw);
    let mut out = BTreeSet::new();
    'family: for h in 1..tw.t() {
        for &k in &ks {
            let ki = tw.inv(k);
            let Some(sols0) = fc.buckets[h as usize - 1].get(&tw.mul(c0, ki)) else { continue };
            let Some(sols1) = fc.buckets[h as usize - 1].get(&tw.mul(c1, ki)) else { continue };
            for &z in sols0 {
                for &w in sols1 {
                    if tw.is_in_base(tw.mul(w, tw.inv(z))) {
                        continue;
                    }
                    let mut image = BTreeSet::new();
                    for &(a, b) in &frame {
                        let u = tw.add(tw.mul(a, z), tw.mul(b, w));
                        image.insert(tw.mul(k, tw.mul(tw.frob(u, h), tw.inv(u))));
                    }
                    if image == cset {
                        out.insert(h);
                        continue 'family;
                    }
                }
            }
        }
    }
    Ok(out)
}

/// The affine coordinates c of a subline {<(1, c)>} of the reference set.
fn subline_c_values(r: &SublinePoints) -> Result<BTreeSet<Elem>> {
    let mut out = BTreeSet::new();
    for p in r {
        if p.coords.len() != 2 || p.coords[0] != 1 {
            return Err(Error::InvalidConfig(
                "subline must consist of affine points <(1, c)>".into(),
            ));
        }
        out.insert(p.coords[1]);
    }
    if out.len() < 3 {
        return Err(Error::InvalidConfig("subline needs at least three points".into()));
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyStat {
    pub count: u64,
    pub preimage_order: u32,
}

/// Machine-readable census of the sublines contained in the reference set.
#[derive(Clone, Debug, Serialize)]
pub struct SublineCensus {
    pub q: u64,
    pub t: u32,
    pub nu: u32,
    pub total: u64,
    pub by_family: BTreeMap<u32, FamilyStat>,
    pub formula_value: String,
    /// None when q < t: the counting formula is out of hypothesis there.
    pub agree: Option<bool>,
}

/// Enumerates (algorithm B by default, triple closure when `slow_triples`),
/// classifies every subline, and compares the total with the counting
/// formula.
pub fn subline_census(tw: &FieldTower, nu: u32, slow_triples: bool) -> Result<SublineCensus> {
    let t = tw.t();
    if gcd(nu as u64, t as u64) != 1 {
        return Err(Error::NotCoprime { nu: nu as u64, t: t as u64 });
    }
    let subs = if slow_triples {
        sublines_triple_closure(tw)
    } else {
        sublines_via_families(tw)
    };
    let fc = FamilyClassifier::new(tw);
    let subs: Vec<SublinePoints> = subs.into_iter().collect();
    let classes: Vec<SublineClass> = subs
        .par_iter()
        .map(|r| classify_subline(tw, &fc, r, nu))
        .collect::<Result<_>>()?;
    let mut by_family: BTreeMap<u32, FamilyStat> = BTreeMap::new();
    for c in &classes {
        let e = by_family
            .entry(c.h)
            .or_insert(FamilyStat { count: 0, preimage_order: c.preimage_order });
        e.count += 1;
    }
    let in_hypothesis = tw.q() >= t as u64;
    let formula = subline_count(tw.q(), t).unwrap_or_else(|_| BigInt::from(-1));
    let agree = if in_hypothesis {
        Some(BigInt::from(subs.len()) == formula)
    } else {
        None
    };
    Ok(SublineCensus {
        q: tw.q(),
        t,
        nu,
        total: subs.len() as u64,
        by_family,
        formula_value: formula.to_string(),
        agree,
    })
}

/// A normal rational curve of order n: the image of a projective parameter
/// line under the frame-normalized parametrization with pole vector b, read
/// inside an n-subspace of the ambient space.
///
/// Frame coordinates of the point at parameter y are prod_{j != i} (y - b_j);
/// the parameter at infinity maps to the all-ones frame vector.
#[derive(Clone, Debug)]
pub struct NormalRationalCurve {
    pub ambient: Subspace,
    pub order: usize,
    /// (n+1) x (n+1): frame coordinates -> coordinates on ambient.rows.
    pub from_frame: Vec<Vec<Elem>>,
    /// n+1 distinct poles, elements of the parameter field's closure.
    pub b: Vec<Elem>,
}

/// Coefficients of p on the RREF rows of s (p must lie in s): the values of
/// p at the leading columns.
fn sub_coords(fld: Fld, s: &Subspace, p: &ProjPoint) -> Vec<Elem> {
    debug_assert!(s.contains(fld, p));
    s.rows
        .iter()
        .map(|row| {
            let lead = row.iter().position(|&c| c != 0).expect("RREF rows are nonzero");
            p.coords[lead]
        })
        .collect()
}

fn ambient_from_sub(fld: Fld, s: &Subspace, c: &[Elem]) -> Vec<Elem> {
    let mut out = vec![0; s.ambient];
    for (ci, row) in c.iter().zip(&s.rows) {
        for (o, &r) in out.iter_mut().zip(row) {
            *o = fld.add(*o, fld.mul(*ci, r));
        }
    }
    out
}

impl NormalRationalCurve {
    pub fn point_at(&self, fld: Fld, y: Elem) -> ProjPoint {
        let n = self.order;
        let f: Vec<Elem> = (0..=n)
            .map(|i| {
                let mut acc: Elem = 1;
                for (j, &bj) in self.b.iter().enumerate() {
                    if j != i {
                        acc = fld.mul(acc, fld.sub(y, bj));
                    }
                }
                acc
            })
            .collect();
        let c = mat_vec(fld, &self.from_frame, &f);
        ProjPoint::normalize(fld, &ambient_from_sub(fld, &self.ambient, &c))
            .expect("curve points are nonzero")
    }

    pub fn point_at_infinity(&self, fld: Fld) -> ProjPoint {
        let ones = vec![1; self.order + 1];
        let c = mat_vec(fld, &self.from_frame, &ones);
        ProjPoint::normalize(fld, &ambient_from_sub(fld, &self.ambient, &c))
            .expect("curve points are nonzero")
    }

    /// All |param| + 1 points; `param` chooses the parameter field (the base
    /// subfield for q-order curves, the full field for rational normal
    /// curves of PG(t-1, q^t)).
    pub fn point_set(&self, fld: Fld, param: Fld) -> BTreeSet<ProjPoint> {
        let mut out: BTreeSet<ProjPoint> =
            param.elements().map(|y| self.point_at(fld, y)).collect();
        out.insert(self.point_at_infinity(fld));
        out
    }
}

/// Fits a normal rational curve through the given points, coordinates in
/// `fld`, parameter line over `param`.
///
/// The order is the dimension of the span.  The first n+1 points are mapped
/// to the unit frame, point n+2 to the all-ones vector; point n+3 (hit at
/// parameter 0 after normalizing the all-ones parameter to infinity) then
/// determines the poles uniquely.  Every remaining input point is required
/// to lie on the result.
pub fn fit_nrc(fld: Fld, param: Fld, pts: &[ProjPoint]) -> Result<NormalRationalCurve> {
    let distinct: BTreeSet<&ProjPoint> = pts.iter().collect();
    if distinct.len() != pts.len() {
        return Err(Error::InvalidConfig("curve fit requires distinct points".into()));
    }
    let ambient = span(fld, pts);
    let n = ambient.pdim();
    if n < 1 {
        return Err(Error::NotGeneralPosition("points span only a point".into()));
    }
    let n = n as usize;
    if (pts.len() as u64) > param.size() + 1 {
        return Err(Error::InvalidConfig(
            "more points than a curve over the parameter field can carry".into(),
        ));
    }
    let coords: Vec<Vec<Elem>> = pts.iter().map(|p| sub_coords(fld, &ambient, p)).collect();
    // columns P_1 .. P_{n+1}
    let basis: Vec<Vec<Elem>> = (0..=n)
        .map(|i| (0..=n).map(|j| coords[j][i]).collect())
        .collect();
    let basis_inv = mat_inv(fld, &basis).ok_or_else(|| {
        Error::NotGeneralPosition("first n+1 points are linearly dependent".into())
    })?;
    if pts.len() < n + 2 {
        return Err(Error::InvalidConfig(
            "need at least n+2 points to pin down a curve of order n".into(),
        ));
    }
    let lambda = mat_vec(fld, &basis_inv, &coords[n + 1]);
    if lambda.iter().any(|&x| x == 0) {
        return Err(Error::NotGeneralPosition(
            "point n+2 lies in a face of the frame simplex".into(),
        ));
    }
    let from_frame: Vec<Vec<Elem>> = (0..=n)
        .map(|i| (0..=n).map(|j| fld.mul(lambda[j], coords[j][i])).collect())
        .collect();
    let b: Vec<Elem> = if pts.len() == n + 2 {
        // no further freedom only when the parameter line has exactly n+2
        // points: the curve is the frame itself, poles exhaust the field
        if param.size() != n as u64 + 1 {
            return Err(Error::InvalidConfig(
                "n+2 points underdetermine a curve unless the parameter field has n+1 elements"
                    .into(),
            ));
        }
        param.elements().collect()
    } else {
        let to_frame = mat_inv(fld, &from_frame).expect("frame matrix is invertible");
        let c = mat_vec(fld, &to_frame, &coords[n + 2]);
        if c.iter().any(|&x| x == 0) {
            return Err(Error::NotGeneralPosition(
                "point n+3 lies in a face of the frame simplex".into(),
            ));
        }
        let cs: BTreeSet<Elem> = c.iter().copied().collect();
        if cs.len() != c.len() {
            return Err(Error::NotGeneralPosition(
                "point n+3 is in a hyperplane through the unit point".into(),
            ));
        }
        // poles are the parameters of the first n+1 points, so they must lie
        // in the parameter field; the scaling freedom y -> a y is spent on
        // normalizing the first pole to 1
        let b: Vec<Elem> = c.iter().map(|&ci| fld.mul(c[0], fld.inv(ci))).collect();
        if b.iter().any(|&bi| bi >= param.size()) {
            return Err(Error::InvalidConfig(
                "points do not lie on a common normal rational curve".into(),
            ));
        }
        b
    };
    let curve = NormalRationalCurve { ambient, order: n, from_frame, b };
    let all = curve.point_set(fld, param);
    for p in pts {
        if !all.contains(p) {
            return Err(Error::InvalidConfig(
                "points do not lie on a common normal rational curve".into(),
            ));
        }
    }
    Ok(curve)
}

/// The unique normal rational curve of order n through n+3 points in general
/// position, parameter field equal to the coordinate field.
pub fn nrc_through(fld: Fld, pts: &[ProjPoint]) -> Result<NormalRationalCurve> {
    let ambient = span(fld, pts);
    if pts.len() as i64 != ambient.pdim() + 3 {
        return Err(Error::InvalidConfig(
            "a unique curve needs exactly n+3 spanning points".into(),
        ));
    }
    fit_nrc(fld, fld, pts)
}

/// A curve of PG(t-1, q^t) is GF(q)-rational iff it has exactly q+1 points
/// with all normalized coordinates in the base subfield.
pub fn is_fq_rational(tw: &FieldTower, curve: &NormalRationalCurve) -> Result<bool> {
    if tw.q() < tw.t() as u64 + 1 {
        return Err(Error::OutOfHypothesis { q: tw.q(), min: tw.t() as u64 + 1 });
    }
    Ok(rational_points(tw, curve).len() as u64 == tw.q() + 1)
}

/// The points of the curve all of whose normalized coordinates lie in GF(q).
pub fn rational_points(tw: &FieldTower, curve: &NormalRationalCurve) -> BTreeSet<ProjPoint> {
    let fe = Fld::ext(tw);
    curve
        .point_set(fe, fe)
        .into_iter()
        .filter(|p| p.coords.iter().all(|&c| tw.is_in_base(c)))
        .collect()
}

/// Exact counts attached to rational normal curves of PG(t-1, q), t prime:
/// k1 = number of imaginary points, k2 = imaginary points per rational
/// curve, k3 = number of rational curves through the conjugate orbit of an
/// imaginary point, nu_t1 = number of rational normal curves.
#[derive(Clone, Debug)]
pub struct NrcCounts {
    pub k1: BigInt,
    pub k2: BigInt,
    pub k3: BigInt,
    pub nu_t1: BigInt,
    pub identity_holds: bool,
}

pub fn nrc_count_identities(q: u64, t: u32) -> Result<NrcCounts> {
    if !is_prime(t as u64) {
        return Err(Error::InvalidConfig("the count identities require t prime".into()));
    }
    let qb = BigInt::from(q);
    let qt = qb.pow(t);
    let qt1 = qb.pow(t - 1);
    let mut k1 = qt1.clone();
    for i in 0..t - 1 {
        k1 *= &qt1 - qb.pow(i);
    }
    let k2 = &qt - &qb;
    let mut prod = BigInt::from(1);
    for i in 0..t {
        prod *= &qt - qb.pow(i);
    }
    let k3 = exact_div(
        prod.clone(),
        &qb * (&qt - 1) * (&qt1 - 1),
    );
    let nu_t1 = exact_div(
        prod,
        &qb * (qb.pow(2) - 1) * (&qb - 1),
    );
    let identity_holds = k1 == &k2 * &k3;
    Ok(NrcCounts { k1, k2, k3, nu_t1, identity_holds })
}

/// The d-th power of a line of PG_q(F_{q^t}): image points as canonical
/// GF(q)-span representatives.
#[derive(Clone, Debug)]
pub struct LinePower {
    pub points: BTreeSet<Elem>,
    pub d: BigInt,
    /// o(l): smallest m dividing t with (w/z)^(q^m) = w/z.
    pub order: u32,
    /// Base-q digit sum of d reduced modulo q^t - 1.
    pub d_q: u64,
    /// True when image points coincide (fewer than q+1 of them).
    pub degenerate: bool,
}

/// Canonical representatives of the q+1 points of the line <z, w>_q.
pub fn line_points(tw: &FieldTower, z: Elem, w: Elem) -> Result<Vec<Elem>> {
    if z == 0 || w == 0 || tw.is_in_base(tw.mul(w, tw.inv(z))) {
        return Err(Error::InvalidConfig(
            "line basis must be GF(q)-independent field elements".into(),
        ));
    }
    Ok(pg1_base(tw)
        .iter()
        .map(|&(a, b)| tw.fq_span_rep(tw.add(tw.mul(a, z), tw.mul(b, w))))
        .collect())
}

pub fn line_order(tw: &FieldTower, z: Elem, w: Elem) -> u32 {
    tw.elem_order(tw.mul(w, tw.inv(z)))
}

pub fn power_of_line(tw: &FieldTower, z: Elem, w: Elem, d: &BigInt) -> Result<LinePower> {
    let pts: BTreeSet<Elem> = line_points(tw, z, w)?
        .iter()
        .map(|&u| tw.fq_span_rep(tw.pow_int(u, d)))
        .collect();
    let modulus = BigInt::from(tw.qt() - 1);
    let mut r = d.mod_floor(&modulus);
    if r.is_negative() {
        r += &modulus;
    }
    let d_q = digit_sum(&r.to_biguint().expect("reduced exponent is nonnegative"), tw.q());
    let degenerate = (pts.len() as u64) < tw.q() + 1;
    Ok(LinePower { points: pts, d: d.clone(), order: line_order(tw, z, w), d_q, degenerate })
}

/// Reads canonical span representatives as points of PG(t-1, q) on the
/// power-basis coordinates.
pub fn reps_to_points(tw: &FieldTower, reps: &BTreeSet<Elem>) -> Vec<ProjPoint> {
    let fb = Fld::base(tw);
    reps.iter()
        .map(|&x| ProjPoint::normalize(fb, &tw.digits(x)).expect("nonzero representative"))
        .collect()
}

/// Verification report: l^d with d = theta_{nu-1}^(-1) theta_{h-1} is a
/// normal rational curve of order n, n = h nu^(-1) mod m.
#[derive(Clone, Debug)]
pub struct MainthetaReport {
    pub d: BigInt,
    pub d_reduced: BigInt,
    pub m: u32,
    pub n: u32,
    pub size_ok: bool,
    pub curve_order: usize,
    pub is_nrc: bool,
    pub general_position: bool,
    pub equivalent_to_reduced: bool,
}

fn all_subsets_general_position(fld: Fld, pts: &[ProjPoint], k: usize) -> bool {
    // every k-subset spans a (k-1)-flat
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        let sel: Vec<ProjPoint> = idx.iter().map(|&i| pts[i].clone()).collect();
        if span(fld, &sel).pdim() != k as i64 - 1 {
            return false;
        }
        // advance the combination
        let mut i = k;
        loop {
            if i == 0 {
                return true;
            }
            i -= 1;
            if idx[i] != i + pts.len() - k {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

pub fn verify_maintheta(tw: &FieldTower, z: Elem, w: Elem, nu: u32, h: u32) -> Result<MainthetaReport> {
    let t = tw.t();
    if gcd(nu as u64, t as u64) != 1 {
        return Err(Error::NotCoprime { nu: nu as u64, t: t as u64 });
    }
    let m = line_order(tw, z, w);
    if h % m == 0 {
        return Err(Error::InvalidConfig("the line order must not divide h".into()));
    }
    let nu_inv = (1..m).find(|x| (x * nu) % m == 1 % m).expect("nu invertible mod m");
    let n = (h * nu_inv) % m;
    if tw.q() < n as u64 {
        return Err(Error::OutOfHypothesis { q: tw.q(), min: n as u64 });
    }
    let q = tw.q();
    let d = theta_inverse(nu as u64, t as u64, q)? * theta(h as i64 - 1, q);
    // reduced exponent sum_{i<n} q^(nu i), congruent to d mod theta_{m-1}
    let mut d_reduced = BigInt::zero();
    for i in 0..n {
        d_reduced += BigInt::from(q).pow(nu * i);
    }
    assert!(
        ((&d - &d_reduced) % theta(m as i64 - 1, q)).is_zero(),
        "exponent must reduce modulo theta_{{m-1}}"
    );
    let lp = power_of_line(tw, z, w, &d)?;
    let lp_reduced = power_of_line(tw, z, w, &d_reduced)?;
    // the scaling by beta = z^(d' - d) realizes the equivalence of the two
    // powers as an actual projectivity of PG(t-1, q)
    let beta = tw.pow_int(z, &(&d_reduced - &d));
    let scaled: BTreeSet<Elem> = lp
        .points
        .iter()
        .map(|&x| tw.fq_span_rep(tw.mul(beta, x)))
        .collect();
    let equivalent_to_reduced = scaled == lp_reduced.points;
    let fb = Fld::base(tw);
    let pts = reps_to_points(tw, &lp.points);
    let size_ok = pts.len() as u64 == q + 1;
    let curve = fit_nrc(fb, fb, &pts)?;
    let general_position = all_subsets_general_position(fb, &pts, n as usize + 1);
    Ok(MainthetaReport {
        d,
        d_reduced,
        m,
        n,
        size_ok,
        curve_order: curve.order,
        is_nrc: curve.order == n as usize,
        general_position,
        equivalent_to_reduced,
    })
}

/// l^(-1) coincides pointwise with the q-Frobenius image of l^(theta_{t-2})
/// and is a normal rational curve of order m-1.
#[derive(Clone, Debug)]
pub struct InversePowerReport {
    pub pointwise_equal: bool,
    pub curve_order: usize,
    pub m: u32,
}

pub fn verify_inverse_power(tw: &FieldTower, z: Elem, w: Elem) -> Result<InversePowerReport> {
    let m = line_order(tw, z, w);
    if tw.q() < m as u64 - 1 {
        return Err(Error::OutOfHypothesis { q: tw.q(), min: m as u64 - 1 });
    }
    let inv_pts: BTreeSet<Elem> = line_points(tw, z, w)?
        .iter()
        .map(|&u| tw.fq_span_rep(tw.inv(u)))
        .collect();
    let theta_pow = power_of_line(tw, z, w, &theta(tw.t() as i64 - 2, tw.q()))?;
    let frob_pts: BTreeSet<Elem> = theta_pow
        .points
        .iter()
        .map(|&x| tw.fq_span_rep(tw.frob(x, 1)))
        .collect();
    let pointwise_equal = inv_pts == frob_pts;
    let fb = Fld::base(tw);
    let curve = fit_nrc(fb, fb, &reps_to_points(tw, &inv_pts))?;
    Ok(InversePowerReport { pointwise_equal, curve_order: curve.order, m })
}

/// Carrier-curve verification in the normal-form coordinates: the conjugate
/// subgeometry Sigma = {(lambda, lambda^sigma, ..., lambda^(sigma^(t-1)))},
/// the conjugate orbit of the imaginary center generator at the unit
/// vectors, the center X_{t-1} = X_t = 0 and the axis X_1 = .. = X_{t-2} = 0.
#[derive(Clone, Debug)]
pub struct CarrierReport {
    pub curve_count: u64,
    pub subline_count: u64,
    pub expected: BigInt,
    pub counts_match: bool,
    pub all_sublines_in_reference: bool,
    pub families: BTreeSet<u32>,
    pub single_family: bool,
    pub family_h: u32,
}

/// Enumerates the normal rational curves of order t-1 through the t unit
/// vectors and two points of Sigma, projects each from the center onto the
/// axis, and confirms the projections are exactly theta_{t-1} theta_{t-2} /
/// theta_1 distinct q-order sublines of the reference set, all in the single
/// family h = -nu mod t.
pub fn verify_carrier_curves(tw: &FieldTower, nu: u32) -> Result<CarrierReport> {
    let t = tw.t();
    let q = tw.q();
    if !is_prime(t as u64) {
        return Err(Error::InvalidConfig("carrier-curve count requires t prime".into()));
    }
    if q < t as u64 + 1 {
        return Err(Error::OutOfHypothesis { q, min: t as u64 + 1 });
    }
    let fe = Fld::ext(tw);
    let sigma = CanonicalSubgeometry::conjugate_form(tw, nu)?;
    let spts: Vec<ProjPoint> = sigma.points(tw);
    let sset: BTreeSet<ProjPoint> = spts.iter().cloned().collect();
    let lref: BTreeSet<ProjPoint> = reference_set(tw).into_iter().collect();
    let units: Vec<ProjPoint> = (0..t as usize)
        .map(|i| {
            let mut c = vec![0; t as usize];
            c[i] = 1;
            ProjPoint { coords: c }
        })
        .collect();
    let pairs: Vec<(usize, usize)> = (0..spts.len())
        .flat_map(|i| (i + 1..spts.len()).map(move |j| (i, j)))
        .collect();
    let results: Vec<Result<(BTreeSet<ProjPoint>, SublinePoints, bool)>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let mut pts = units.clone();
            pts.push(spts[i].clone());
            pts.push(spts[j].clone());
            let curve = nrc_through(fe, &pts)?;
            let cpts = curve.point_set(fe, fe);
            let on_sigma: BTreeSet<ProjPoint> =
                cpts.iter().filter(|p| sset.contains(*p)).cloned().collect();
            let mut proj: SublinePoints = BTreeSet::new();
            for p in &on_sigma {
                let a = p.coords[t as usize - 2];
                let b = p.coords[t as usize - 1];
                proj.insert(ProjPoint::normalize(fe, &[a, b]).expect("nonzero trace"));
            }
            let in_ref = on_sigma.len() as u64 == q + 1
                && proj.len() as u64 == q + 1
                && proj.iter().all(|p| lref.contains(p));
            Ok((cpts, proj, in_ref))
        })
        .collect();
    let mut curves = BTreeSet::new();
    let mut sublines = BTreeSet::new();
    let mut all_in_ref = true;
    for r in results {
        let (cpts, proj, in_ref) = r?;
        all_in_ref &= in_ref;
        // projections must really be sublines: re-close three of their points
        if proj.len() >= 3 {
            let three: Vec<&ProjPoint> = proj.iter().take(3).collect();
            let closure = subline_closure(tw, three[0], three[1], three[2])?;
            all_in_ref &= closure == proj;
        } else {
            all_in_ref = false;
        }
        curves.insert(cpts);
        sublines.insert(proj);
    }
    let fc = FamilyClassifier::new(tw);
    let mut families = BTreeSet::new();
    for r in &sublines {
        families.insert(classify_subline(tw, &fc, r, nu)?.h);
    }
    let expected = exact_div(
        theta(t as i64 - 1, q) * theta(t as i64 - 2, q),
        theta(1, q),
    );
    let family_h = (t - nu % t) % t;
    Ok(CarrierReport {
        curve_count: curves.len() as u64,
        subline_count: sublines.len() as u64,
        expected: expected.clone(),
        counts_match: BigInt::from(curves.len()) == expected
            && BigInt::from(sublines.len()) == expected,
        all_sublines_in_reference: all_in_ref,
        single_family: families.len() == 1 && families.contains(&family_h),
        families,
        family_h,
    })
}

/// The points of Sigma (conjugate form) whose projection from the center
/// onto the axis lands in r, together with the GF(q)-span representative of
/// the field element parametrizing the projected coordinate pair.
pub fn preimage_points(
    tw: &FieldTower,
    r: &SublinePoints,
    nu: u32,
) -> Result<Vec<(Elem, ProjPoint)>> {
    let t = tw.t();
    if gcd(nu as u64, t as u64) != 1 {
        return Err(Error::NotCoprime { nu: nu as u64, t: t as u64 });
    }
    let fe = Fld::ext(tw);
    let mut out = Vec::new();
    for lam in 1..tw.qt() {
        if tw.fq_span_rep(lam) != lam {
            continue;
        }
        let coords: Vec<Elem> = (0..t).map(|j| tw.frob(lam, nu * j)).collect();
        let p = ProjPoint::normalize(fe, &coords).expect("nonzero");
        let a = coords[t as usize - 2];
        let b = coords[t as usize - 1];
        let img = ProjPoint::normalize(fe, &[a, b]).expect("nonzero trace");
        if r.contains(&img) {
            // the projected pair is (mu, mu^sigma) with mu = lambda^(sigma^(t-2))
            out.push((tw.fq_span_rep(tw.frob(lam, nu * (t - 2))), p));
        }
    }
    Ok(out)
}

/// Preimage verification: the q+1 Sigma-points over a subline form a normal
/// rational curve whose order matches the classification, and their
/// parametrizing field elements are a scalar multiple of the d-th power of
/// the transversal line, d = delta theta_{h-1}.
#[derive(Clone, Debug)]
pub struct PreimageReport {
    pub curve: NormalRationalCurve,
    pub class: SublineClass,
    pub order_matches: bool,
    pub power_model_matches: bool,
}

pub fn preimage_curve(
    tw: &FieldTower,
    fc: &FamilyClassifier,
    r: &SublinePoints,
    nu: u32,
) -> Result<PreimageReport> {
    let pre = preimage_points(tw, r, nu)?;
    if pre.len() as u64 != tw.q() + 1 {
        return Err(Error::InvalidConfig(
            "a q-order subline must have q+1 preimage points on Sigma".into(),
        ));
    }
    let fe = Fld::ext(tw);
    let fb = Fld::base(tw);
    let pts: Vec<ProjPoint> = pre.iter().map(|(_, p)| p.clone()).collect();
    let curve = fit_nrc(fe, fb, &pts)?;
    let class = classify_subline(tw, fc, r, nu)?;
    let order_matches = curve.order == class.preimage_order as usize;
    let d = &class.delta * theta(class.h as i64 - 1, tw.q());
    let model = power_of_line(tw, class.z, class.w, &d)?;
    let reps: BTreeSet<Elem> = pre.iter().map(|&(mu, _)| mu).collect();
    let u0 = *reps.iter().next().unwrap();
    let power_model_matches = model.points.iter().any(|&x0| {
        let s = tw.mul(u0, tw.inv(x0));
        let shifted: BTreeSet<Elem> = model
            .points
            .iter()
            .map(|&x| tw.fq_span_rep(tw.mul(s, x)))
            .collect();
        shifted == reps
    });
    Ok(PreimageReport { curve, class, order_matches, power_model_matches })
}

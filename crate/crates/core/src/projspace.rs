//! Points, subspaces and collineations of PG(n-1, F) where F is either level
//! of a [`FieldTower`]: the ground field GF(q) or the extension GF(q^t).
//!
//! Everything is kept in canonical form — points with leftmost nonzero
//! coordinate 1, subspaces as reduced row-echelon bases — so that equality is
//! coordinate equality and sets of points/subspaces hash and sort cheaply.

use crate::error::{Error, Result};
use crate::gf::{Elem, FieldTower};

/// Which level of the tower a coordinate lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    /// GF(q): codes below q.
    Base,
    /// GF(q^t).
    Ext,
}

/// A borrowed view of one field level of the tower.
#[derive(Clone, Copy)]
pub struct Fld<'a> {
    pub tw: &'a FieldTower,
    pub level: Level,
}

impl<'a> Fld<'a> {
    pub fn base(tw: &'a FieldTower) -> Fld<'a> {
        Fld { tw, level: Level::Base }
    }
    pub fn ext(tw: &'a FieldTower) -> Fld<'a> {
        Fld { tw, level: Level::Ext }
    }
    pub fn size(&self) -> u64 {
        match self.level {
            Level::Base => self.tw.q(),
            Level::Ext => self.tw.qt(),
        }
    }
    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.size()
    }
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        match self.level {
            Level::Base => self.tw.fq_add(a, b),
            Level::Ext => self.tw.add(a, b),
        }
    }
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        match self.level {
            Level::Base => self.tw.fq_mul(a, b),
            Level::Ext => self.tw.mul(a, b),
        }
    }
    pub fn neg(&self, a: Elem) -> Elem {
        match self.level {
            Level::Base => self.tw.fq_neg(a),
            Level::Ext => self.tw.neg(a),
        }
    }
    pub fn inv(&self, a: Elem) -> Elem {
        match self.level {
            Level::Base => self.tw.fq_inv(a),
            Level::Ext => self.tw.inv(a),
        }
    }
    /// a^(p^j); at Base level the automorphism group has order e.
    pub fn frob_p(&self, a: Elem, j: u32) -> Elem {
        match self.level {
            Level::Base => self.tw.fq_frob_p(a, j),
            Level::Ext => self.tw.frob_p(a, j),
        }
    }
    /// Order of the automorphism group of this level over the prime field.
    pub fn aut_order(&self) -> u32 {
        match self.level {
            Level::Base => self.tw.e(),
            Level::Ext => self.tw.e() * self.tw.t(),
        }
    }
}

/// A point of PG(n-1, F): homogeneous coordinates normalized so the leftmost
/// nonzero coordinate is 1.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProjPoint {
    pub coords: Vec<Elem>,
}

impl ProjPoint {
    /// Normalizes a nonzero vector; returns None for the zero vector.
    pub fn normalize(fld: Fld, coords: &[Elem]) -> Option<ProjPoint> {
        let lead = coords.iter().position(|&c| c != 0)?;
        let inv = fld.inv(coords[lead]);
        Some(ProjPoint {
            coords: coords.iter().map(|&c| fld.mul(inv, c)).collect(),
        })
    }

    pub fn dim_ambient(&self) -> usize {
        self.coords.len()
    }
}

/// A projective subspace as a reduced row-echelon basis.  The empty subspace
/// (projective dimension -1) has no rows.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subspace {
    pub rows: Vec<Vec<Elem>>,
    pub ambient: usize,
}

impl Subspace {
    pub fn empty(ambient: usize) -> Subspace {
        Subspace { rows: Vec::new(), ambient }
    }

    pub fn from_vectors(fld: Fld, ambient: usize, vectors: &[Vec<Elem>]) -> Subspace {
        Subspace {
            rows: rref(fld, vectors.to_vec()),
            ambient,
        }
    }

    pub fn whole(ambient: usize) -> Subspace {
        let rows = (0..ambient)
            .map(|i| {
                let mut r = vec![0; ambient];
                r[i] = 1;
                r
            })
            .collect();
        Subspace { rows, ambient }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Projective dimension: rank - 1, so -1 for the empty subspace.
    pub fn pdim(&self) -> i64 {
        self.rows.len() as i64 - 1
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn contains(&self, fld: Fld, p: &ProjPoint) -> bool {
        reduce_by_rref(fld, &self.rows, p.coords.clone())
            .iter()
            .all(|&c| c == 0)
    }

    pub fn contains_sub(&self, fld: Fld, other: &Subspace) -> bool {
        other
            .rows
            .iter()
            .all(|r| reduce_by_rref(fld, &self.rows, r.clone()).iter().all(|&c| c == 0))
    }

    /// The single point of a 0-dimensional subspace.
    pub fn as_point(&self) -> Option<ProjPoint> {
        if self.rows.len() == 1 {
            Some(ProjPoint { coords: self.rows[0].clone() })
        } else {
            None
        }
    }

    /// All theta_{pdim} points, one per normalized coefficient combination of
    /// the basis rows (leftmost nonzero coefficient 1).
    pub fn points(&self, fld: Fld) -> Vec<ProjPoint> {
        let k = self.rows.len();
        let mut out = Vec::new();
        for lead in (0..k).rev() {
            // coefficients: c[lead] = 1, c[lead+1..] free, earlier zero
            let free = k - lead - 1;
            let mut idx = vec![0u64; free];
            loop {
                let mut v = self.rows[lead].clone();
                for (j, &c) in idx.iter().enumerate() {
                    if c != 0 {
                        for (x, &b) in v.iter_mut().zip(&self.rows[lead + 1 + j]) {
                            *x = fld.add(*x, fld.mul(c, b));
                        }
                    }
                }
                out.push(ProjPoint::normalize(fld, &v).expect("independent rows"));
                // increment mixed-radix counter
                let mut pos = free;
                loop {
                    if pos == 0 {
                        break;
                    }
                    pos -= 1;
                    idx[pos] += 1;
                    if idx[pos] < fld.size() {
                        break;
                    }
                    idx[pos] = 0;
                }
                if idx.iter().all(|&c| c == 0) {
                    break;
                }
            }
        }
        out
    }
}

/// Reduced row echelon form over the given field; returns only nonzero rows.
pub fn rref(fld: Fld, mut rows: Vec<Vec<Elem>>) -> Vec<Vec<Elem>> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let pivot = (rank..rows.len()).find(|&r| rows[r][col] != 0);
        let Some(pivot) = pivot else { continue };
        rows.swap(rank, pivot);
        let inv = fld.inv(rows[rank][col]);
        for c in rows[rank].clone().iter().enumerate() {
            rows[rank][c.0] = fld.mul(inv, *c.1);
        }
        for r in 0..rows.len() {
            if r != rank && rows[r][col] != 0 {
                let factor = rows[r][col];
                let pivot_row = rows[rank].clone();
                for (x, &b) in rows[r].iter_mut().zip(&pivot_row) {
                    *x = fld.sub(*x, fld.mul(factor, b));
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rows.truncate(rank);
    rows
}

fn reduce_by_rref(fld: Fld, rref_rows: &[Vec<Elem>], mut v: Vec<Elem>) -> Vec<Elem> {
    for row in rref_rows {
        let Some(lead) = row.iter().position(|&c| c != 0) else { continue };
        if v[lead] != 0 {
            let factor = v[lead];
            for (x, &b) in v.iter_mut().zip(row) {
                *x = fld.sub(*x, fld.mul(factor, b));
            }
        }
    }
    v
}

/// Span of a collection of points.
pub fn span(fld: Fld, points: &[ProjPoint]) -> Subspace {
    let ambient = points.first().map_or(0, |p| p.coords.len());
    Subspace::from_vectors(
        fld,
        ambient,
        &points.iter().map(|p| p.coords.clone()).collect::<Vec<_>>(),
    )
}

/// Span of two subspaces (their join).
pub fn join(fld: Fld, a: &Subspace, b: &Subspace) -> Subspace {
    let mut rows = a.rows.clone();
    rows.extend(b.rows.iter().cloned());
    Subspace { rows: rref(fld, rows), ambient: a.ambient }
}

/// Join of a subspace and a point.
pub fn join_point(fld: Fld, a: &Subspace, p: &ProjPoint) -> Subspace {
    let mut rows = a.rows.clone();
    rows.push(p.coords.clone());
    Subspace { rows: rref(fld, rows), ambient: a.ambient }
}

/// Basis of the right null space {x | M x = 0}.
pub fn nullspace(fld: Fld, matrix: &[Vec<Elem>], ncols: usize) -> Vec<Vec<Elem>> {
    let r = rref(fld, matrix.to_vec());
    let mut lead_cols = Vec::new();
    for row in &r {
        lead_cols.push(row.iter().position(|&c| c != 0).unwrap());
    }
    let mut basis = Vec::new();
    for col in 0..ncols {
        if lead_cols.contains(&col) {
            continue;
        }
        let mut v = vec![0; ncols];
        v[col] = 1;
        for (row, &lc) in r.iter().zip(&lead_cols) {
            v[lc] = fld.neg(row[col]);
        }
        basis.push(v);
    }
    basis
}

/// Dual description: constraints vanishing on the subspace, as a matrix whose
/// rows are the coefficient vectors.
pub fn dual(fld: Fld, s: &Subspace) -> Vec<Vec<Elem>> {
    nullspace(fld, &s.rows, s.ambient)
}

/// Intersection of two subspaces, via stacked dual constraints.
pub fn meet(fld: Fld, a: &Subspace, b: &Subspace) -> Subspace {
    debug_assert_eq!(a.ambient, b.ambient);
    let mut constraints = dual(fld, a);
    constraints.extend(dual(fld, b));
    let rows = nullspace(fld, &constraints, a.ambient);
    Subspace { rows: rref(fld, rows), ambient: a.ambient }
}

/// Determinant by Gaussian elimination.
pub fn det(fld: Fld, m: &[Vec<Elem>]) -> Elem {
    let n = m.len();
    let mut m: Vec<Vec<Elem>> = m.to_vec();
    let mut acc: Elem = 1;
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| m[r][col] != 0) else {
            return 0;
        };
        if pivot != col {
            m.swap(col, pivot);
            acc = fld.neg(acc);
        }
        acc = fld.mul(acc, m[col][col]);
        let inv = fld.inv(m[col][col]);
        for r in col + 1..n {
            if m[r][col] != 0 {
                let factor = fld.mul(m[r][col], inv);
                let top = m[col].clone();
                for (x, &b) in m[r].iter_mut().zip(&top) {
                    *x = fld.sub(*x, fld.mul(factor, b));
                }
            }
        }
    }
    acc
}

/// Matrix inverse; None when singular.
pub fn mat_inv(fld: Fld, m: &[Vec<Elem>]) -> Option<Vec<Vec<Elem>>> {
    let n = m.len();
    let mut aug: Vec<Vec<Elem>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { 1 } else { 0 }));
            r
        })
        .collect();
    aug = rref(fld, aug);
    if aug.len() < n {
        return None;
    }
    for (i, row) in aug.iter().enumerate() {
        if row[..n].iter().position(|&c| c != 0) != Some(i) {
            return None;
        }
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn mat_mul(fld: Fld, a: &[Vec<Elem>], b: &[Vec<Elem>]) -> Vec<Vec<Elem>> {
    let n = a.len();
    let m = b[0].len();
    let k = b.len();
    let mut out = vec![vec![0; m]; n];
    for i in 0..n {
        for l in 0..k {
            if a[i][l] == 0 {
                continue;
            }
            for j in 0..m {
                out[i][j] = fld.add(out[i][j], fld.mul(a[i][l], b[l][j]));
            }
        }
    }
    out
}

pub fn mat_vec(fld: Fld, a: &[Vec<Elem>], v: &[Elem]) -> Vec<Elem> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(0, |acc, (&m, &x)| fld.add(acc, fld.mul(m, x)))
        })
        .collect()
}

pub fn identity_matrix(n: usize) -> Vec<Vec<Elem>> {
    (0..n)
        .map(|i| {
            let mut r = vec![0; n];
            r[i] = 1;
            r
        })
        .collect()
}

/// A collineation of PG(n-1, q^t): an invertible matrix M together with an
/// automorphism exponent a, acting as x -> M . x^(p^a).  Projectivity iff
/// a = 0 (mod the automorphism-group order).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Collineation {
    pub matrix: Vec<Vec<Elem>>,
    /// Exponent of the p-power Frobenius, reduced mod e*t.
    pub aut: u32,
}

impl Collineation {
    pub fn identity(n: usize) -> Collineation {
        Collineation { matrix: identity_matrix(n), aut: 0 }
    }

    pub fn projectivity(matrix: Vec<Vec<Elem>>) -> Collineation {
        Collineation { matrix, aut: 0 }
    }

    pub fn is_projectivity(&self) -> bool {
        self.aut == 0
    }

    pub fn n(&self) -> usize {
        self.matrix.len()
    }

    pub fn apply(&self, fld: Fld, p: &ProjPoint) -> ProjPoint {
        let twisted: Vec<Elem> = p.coords.iter().map(|&c| fld.frob_p(c, self.aut)).collect();
        let image = mat_vec(fld, &self.matrix, &twisted);
        ProjPoint::normalize(fld, &image).expect("invertible matrix")
    }

    pub fn apply_sub(&self, fld: Fld, s: &Subspace) -> Subspace {
        let rows: Vec<Vec<Elem>> = s
            .rows
            .iter()
            .map(|row| {
                let twisted: Vec<Elem> = row.iter().map(|&c| fld.frob_p(c, self.aut)).collect();
                mat_vec(fld, &self.matrix, &twisted)
            })
            .collect();
        Subspace { rows: rref(fld, rows), ambient: s.ambient }
    }

    /// Composition: (self . other), i.e. apply `other` first.
    pub fn compose(&self, fld: Fld, other: &Collineation) -> Collineation {
        let n = fld.aut_order();
        let twisted: Vec<Vec<Elem>> = other
            .matrix
            .iter()
            .map(|row| row.iter().map(|&c| fld.frob_p(c, self.aut)).collect())
            .collect();
        Collineation {
            matrix: mat_mul(fld, &self.matrix, &twisted),
            aut: (self.aut + other.aut) % n,
        }
    }

    pub fn inverse(&self, fld: Fld) -> Collineation {
        let n = fld.aut_order();
        let inv = mat_inv(fld, &self.matrix).expect("collineation matrix is invertible");
        let back = (n - self.aut % n) % n;
        let twisted: Vec<Vec<Elem>> = inv
            .iter()
            .map(|row| row.iter().map(|&c| fld.frob_p(c, back)).collect())
            .collect();
        Collineation { matrix: twisted, aut: back }
    }

    /// Iterated application: self^k.
    pub fn power(&self, fld: Fld, k: u32) -> Collineation {
        let mut acc = Collineation::identity(self.n());
        for _ in 0..k {
            acc = self.compose(fld, &acc);
        }
        acc
    }
}

/// The semilinear collineation induced by x -> x^(q^nu) applied
/// coordinatewise.  Fixes exactly the standard canonical subgeometry
/// pointwise; a generator of that stabilizer when gcd(nu, t) = 1.
pub fn sigma_hat(tw: &FieldTower, nu: u32, n: usize) -> Result<Collineation> {
    if num_integer::gcd(nu as u64, tw.t() as u64) != 1 {
        return Err(Error::NotCoprime { nu: nu as u64, t: tw.t() as u64 });
    }
    Ok(Collineation {
        matrix: identity_matrix(n),
        aut: (tw.e() * nu) % (tw.e() * tw.t()),
    })
}

/// All points of PG(n-1, F) in lexicographic order of normalized coordinates.
pub fn enumerate_space_points(fld: Fld<'_>, n: usize) -> impl Iterator<Item = ProjPoint> + '_ {
    let size = fld.size();
    // Leading one at position i (from the right first for lex order: points
    // with more leading zeros sort first).
    (0..n).rev().flat_map(move |lead| {
        let free = n - lead - 1;
        let total = size.pow(free as u32);
        (0..total).map(move |mut packed| {
            let mut coords = vec![0; n];
            coords[lead] = 1;
            for j in (0..free).rev() {
                coords[lead + 1 + j] = packed % size;
                packed /= size;
            }
            ProjPoint { coords }
        })
    })
}

/// All hyperplanes of PG(n-1, F), as subspaces, via dual points.
pub fn enumerate_hyperplanes(fld: Fld<'_>, n: usize) -> impl Iterator<Item = Subspace> + '_ {
    enumerate_space_points(fld, n).map(move |dual_pt| {
        let rows = nullspace(fld, &[dual_pt.coords], n);
        Subspace { rows: rref(fld, rows), ambient: n }
    })
}

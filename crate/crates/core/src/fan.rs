//! Polyhedral fan data: cones, face relations, the cone poset, and per-cone
//! lattice data (stabilizer sublattice and orbit quotient).
//!
//! Cones are stored by generator lists. Faces are found by the supporting
//! hyperplane test on generator subsets, and pairwise intersections by
//! enumerating extreme rays of the joint coefficient cone; everything is
//! exact integer/rational arithmetic. Fans need not be complete.

use crate::lattice::{
    dot, smith_normal_form, IntMatrix, LatticeError, QuotientLattice, Sublattice,
};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FanError {
    #[error("no cone with id {0} in this fan")]
    UnknownCone(usize),
    #[error("generator has length {got}, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid fan: {}", format_violations(.0))]
    Invalid(Vec<Violation>),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

fn format_violations(v: &[Violation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

/// A fan-invariant violation, reported by `Fan::validate`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NotStronglyConvex { cone: usize },
    MissingZeroCone,
    FaceMissing { of: usize, face: String },
    IntersectionNotCommonFace { a: usize, b: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotStronglyConvex { cone } => {
                write!(f, "cone {cone} is not strongly convex (contains a line)")
            }
            Violation::MissingZeroCone => write!(f, "zero cone missing"),
            Violation::FaceMissing { of, face } => {
                write!(f, "face missing: {face} of cone {of}")
            }
            Violation::IntersectionNotCommonFace { a, b } => {
                write!(f, "intersection of cones {a} and {b} is not a common face")
            }
        }
    }
}

/// Primitive form of a nonzero integer vector: entries divided by their gcd.
pub fn primitive_vector(v: &[BigInt]) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() || g.is_one() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

fn is_zero_vec(v: &[BigInt]) -> bool {
    v.iter().all(|x| x.is_zero())
}

/// Exact solve of `sum_i lambda_i * vectors_i = target` over Q. Returns the
/// unique solution when the vectors are linearly independent and the system
/// is consistent, `None` otherwise.
fn solve_combination(vectors: &[Vec<BigInt>], target: &[BigInt]) -> Option<Vec<BigRational>> {
    let s = vectors.len();
    let n = target.len();
    // rows of the augmented system: one per ambient coordinate
    let mut rows: Vec<Vec<BigRational>> = (0..n)
        .map(|r| {
            let mut row: Vec<BigRational> = vectors
                .iter()
                .map(|v| BigRational::from(v[r].clone()))
                .collect();
            row.push(BigRational::from(target[r].clone()));
            row
        })
        .collect();

    let mut pivot_rows: Vec<usize> = Vec::new();
    let mut r0 = 0;
    for col in 0..s {
        let Some(p) = (r0..n).find(|&r| !rows[r][col].is_zero()) else {
            return None; // dependent columns: another subset will witness
        };
        rows.swap(r0, p);
        let pivot_row = rows[r0].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == r0 || row[col].is_zero() {
                continue;
            }
            let factor = &row[col] / &pivot_row[col];
            for (c, cell) in row.iter_mut().enumerate().take(s + 1).skip(col) {
                *cell = &*cell - &factor * &pivot_row[c];
            }
        }
        pivot_rows.push(r0);
        r0 += 1;
    }
    // consistency: remaining rows must have zero right-hand side
    if rows[r0..n].iter().any(|row| !row[s].is_zero()) {
        return None;
    }
    let mut lambda = vec![BigRational::zero(); s];
    for (col, &pr) in pivot_rows.iter().enumerate() {
        lambda[col] = &rows[pr][s] / &rows[pr][col];
    }
    Some(lambda)
}

/// Membership of a point in the cone spanned by `generators`, decided
/// exactly by searching a linearly independent subset carrying a
/// nonnegative combination.
pub fn cone_contains(generators: &[Vec<BigInt>], point: &[BigInt]) -> bool {
    if is_zero_vec(point) {
        return true;
    }
    if generators.is_empty() {
        return false;
    }
    fn search(
        generators: &[Vec<BigInt>],
        point: &[BigInt],
        start: usize,
        size: usize,
        indices: &mut Vec<usize>,
    ) -> bool {
        if indices.len() == size {
            let subset: Vec<Vec<BigInt>> = indices.iter().map(|&i| generators[i].clone()).collect();
            if let Some(lambda) = solve_combination(&subset, point) {
                if lambda.iter().all(|l| !l.is_negative()) {
                    return true;
                }
            }
            return false;
        }
        for i in start..generators.len() {
            indices.push(i);
            if search(generators, point, i + 1, size, indices) {
                return true;
            }
            indices.pop();
        }
        false
    }
    let mut indices: Vec<usize> = Vec::new();
    for size in 1..=generators.len() {
        if search(generators, point, 0, size, &mut indices) {
            return true;
        }
    }
    false
}

/// Strong convexity: the cone contains no line. Equivalent to no generator
/// whose negative also lies in the cone.
pub fn is_strongly_convex(generators: &[Vec<BigInt>]) -> bool {
    generators.iter().all(|g| {
        let neg: Vec<BigInt> = g.iter().map(|x| -x).collect();
        !cone_contains(generators, &neg)
    })
}

/// Canonical generator list: primitive, deduplicated, reduced to extreme
/// rays, sorted. Only meaningful for strongly convex cones; for others the
/// primitive sorted list is returned unreduced.
fn canonical_generators(
    ambient_rank: usize,
    raw: &[Vec<BigInt>],
) -> Result<Vec<Vec<BigInt>>, FanError> {
    let mut gens: Vec<Vec<BigInt>> = Vec::new();
    for v in raw {
        if v.len() != ambient_rank {
            return Err(FanError::DimensionMismatch {
                expected: ambient_rank,
                got: v.len(),
            });
        }
        if is_zero_vec(v) {
            continue;
        }
        let p = primitive_vector(v);
        if !gens.contains(&p) {
            gens.push(p);
        }
    }
    if is_strongly_convex(&gens) {
        let extreme: Vec<Vec<BigInt>> = gens
            .iter()
            .enumerate()
            .filter(|(i, g)| {
                let others: Vec<Vec<BigInt>> = gens
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| j != i)
                    .map(|(_, v)| v.clone())
                    .collect();
                !cone_contains(&others, g)
            })
            .map(|(_, g)| g.clone())
            .collect();
        gens = extreme;
    }
    gens.sort();
    Ok(gens)
}

fn generator_rank(gens: &[Vec<BigInt>]) -> usize {
    if gens.is_empty() {
        0
    } else {
        IntMatrix::from_rows(gens.to_vec()).rank()
    }
}

/// Direct facets (codimension-one faces) of a strongly convex cone with
/// canonical generators, as generator sublists. Found by the supporting
/// hyperplane test: for each generator subset spanning a hyperplane of the
/// cone's span, keep it when all generators lie weakly on one side.
fn direct_facets(gens: &[Vec<BigInt>]) -> Vec<Vec<Vec<BigInt>>> {
    let d = generator_rank(gens);
    if d == 0 {
        return Vec::new();
    }
    if d == 1 {
        return vec![Vec::new()]; // the zero cone
    }
    let ambient = gens[0].len();
    let span = Sublattice::from_generators(ambient, gens.to_vec())
        .expect("generators have ambient length")
        .saturate();
    let coords: Vec<Vec<BigInt>> = gens
        .iter()
        .map(|g| {
            span.solve_coords(g)
                .expect("ambient length")
                .expect("generator lies in its saturated span")
        })
        .collect();

    fn enumerate(
        s: usize,
        size: usize,
        start: usize,
        subset: &mut Vec<usize>,
        coords: &[Vec<BigInt>],
        d: usize,
        facet_sets: &mut BTreeSet<Vec<usize>>,
    ) {
        if subset.len() == size {
            let rows: Vec<Vec<BigInt>> = subset.iter().map(|&i| coords[i].clone()).collect();
            let m = if rows.is_empty() {
                IntMatrix::zeros(0, d)
            } else {
                IntMatrix::from_rows(rows)
            };
            let snf = smith_normal_form(&m);
            if snf.rank == d - 1 {
                // one-dimensional kernel: last column of the Smith transform
                let u: Vec<BigInt> = (0..d).map(|i| snf.v.at(i, d - 1).clone()).collect();
                let signs: Vec<i8> = coords
                    .iter()
                    .map(|c| {
                        let v = dot(&u, c);
                        if v.is_zero() {
                            0
                        } else if v.is_positive() {
                            1
                        } else {
                            -1
                        }
                    })
                    .collect();
                let supporting = signs.iter().all(|&x| x >= 0) || signs.iter().all(|&x| x <= 0);
                if supporting {
                    let zero_set: Vec<usize> = signs
                        .iter()
                        .enumerate()
                        .filter(|(_, &x)| x == 0)
                        .map(|(i, _)| i)
                        .collect();
                    facet_sets.insert(zero_set);
                }
            }
            return;
        }
        for i in start..s {
            subset.push(i);
            enumerate(s, size, i + 1, subset, coords, d, facet_sets);
            subset.pop();
        }
    }

    let mut facet_sets: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut subset: Vec<usize> = Vec::new();
    enumerate(
        gens.len(),
        d - 1,
        0,
        &mut subset,
        &coords,
        d,
        &mut facet_sets,
    );

    facet_sets
        .into_iter()
        .map(|set| set.into_iter().map(|i| gens[i].clone()).collect())
        .collect()
}

/// All faces of a strongly convex cone (canonical generators), including
/// the cone itself and the zero cone, as canonical generator lists.
fn all_faces(
    gens: &[Vec<BigInt>],
    memo: &mut BTreeMap<Vec<Vec<BigInt>>, BTreeSet<Vec<Vec<BigInt>>>>,
) -> BTreeSet<Vec<Vec<BigInt>>> {
    if let Some(hit) = memo.get(gens) {
        return hit.clone();
    }
    let mut out: BTreeSet<Vec<Vec<BigInt>>> = BTreeSet::new();
    out.insert(gens.to_vec());
    for facet in direct_facets(gens) {
        out.extend(all_faces(&facet, memo));
    }
    memo.insert(gens.to_vec(), out.clone());
    out
}

/// Generators of the intersection of two cones: extreme rays of the joint
/// coefficient cone `{(l, m) >= 0 : sum l_i a_i = sum m_j b_j}`, mapped back
/// to the ambient lattice.
pub fn intersect_cones(
    ambient_rank: usize,
    a: &[Vec<BigInt>],
    b: &[Vec<BigInt>],
) -> Vec<Vec<BigInt>> {
    let k = a.len();
    let l = b.len();
    if k == 0 || l == 0 {
        return Vec::new();
    }
    // rows of m: the a-generators then the negated b-generators
    let mut rows: Vec<Vec<BigInt>> = a.to_vec();
    rows.extend(b.iter().map(|g| g.iter().map(|x| -x).collect::<Vec<_>>()));
    let total_rank = IntMatrix::from_rows(rows.clone()).rank();

    fn enumerate(
        rows: &[Vec<BigInt>],
        k: usize,
        ambient_rank: usize,
        max_size: usize,
        start: usize,
        subset: &mut Vec<usize>,
        points: &mut BTreeSet<Vec<BigInt>>,
    ) {
        if !subset.is_empty() {
            let sub_rows: Vec<Vec<BigInt>> = subset.iter().map(|&i| rows[i].clone()).collect();
            let s = sub_rows.len();
            let snf = smith_normal_form(&IntMatrix::from_rows(sub_rows));
            if snf.rank + 1 == s {
                // one-dimensional left kernel: bottom row of the row transform
                let z: Vec<BigInt> = snf.u.row(s - 1).to_vec();
                let all_pos = z.iter().all(|x| x.is_positive());
                let all_neg = z.iter().all(|x| x.is_negative());
                if all_pos || all_neg {
                    let mut x = vec![BigInt::zero(); ambient_rank];
                    for (pos, &ri) in subset.iter().enumerate() {
                        if ri < k {
                            let coef = if all_pos { z[pos].clone() } else { -&z[pos] };
                            for (c, xc) in x.iter_mut().enumerate() {
                                *xc += &coef * &rows[ri][c];
                            }
                        }
                    }
                    if !is_zero_vec(&x) {
                        points.insert(primitive_vector(&x));
                    }
                }
            }
        }
        if subset.len() == max_size {
            return;
        }
        for i in start..rows.len() {
            subset.push(i);
            enumerate(rows, k, ambient_rank, max_size, i + 1, subset, points);
            subset.pop();
        }
    }

    let mut points: BTreeSet<Vec<BigInt>> = BTreeSet::new();
    let mut subset: Vec<usize> = Vec::new();
    enumerate(
        &rows,
        k,
        ambient_rank,
        total_rank + 1,
        0,
        &mut subset,
        &mut points,
    );
    points.into_iter().collect()
}

/// A strongly convex rational polyhedral cone, stored by its canonical
/// (primitive, extreme, sorted) generator list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cone {
    id: usize,
    generators: Vec<Vec<BigInt>>,
    dim: usize,
}

impl Cone {
    pub fn id(&self) -> usize {
        self.id
    }

    pub fn generators(&self) -> &[Vec<BigInt>] {
        &self.generators
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn describe(&self) -> String {
        if self.generators.is_empty() {
            return "0".to_string();
        }
        let parts: Vec<String> = self
            .generators
            .iter()
            .map(|g| {
                let coords: Vec<String> = g.iter().map(|x| x.to_string()).collect();
                format!("({})", coords.join(","))
            })
            .collect();
        format!("cone{{{}}}", parts.join(","))
    }
}

/// Per-cone lattice data: the saturated stabilizer sublattice `N ∩ span(σ)`
/// and the split quotient carrying the orbit's fundamental group.
#[derive(Debug, Clone)]
pub struct OrbitData {
    pub cone_id: usize,
    pub stab_lattice: Sublattice,
    pub quotient: QuotientLattice,
    pub orbit_dim: usize,
}

/// A fan: cones closed under faces with pairwise intersections along common
/// faces, plus the face partial order. Immutable after construction.
#[derive(Debug, Clone)]
pub struct Fan {
    ambient_rank: usize,
    cones: Vec<Cone>,
    key_to_id: BTreeMap<Vec<Vec<BigInt>>, usize>,
    // (sigma, tau) pairs meaning sigma is a face of tau; reflexive
    face_relation: BTreeSet<(usize, usize)>,
    orbit: Vec<OrbitData>,
}

impl Fan {
    /// Builds a face-closed, validated fan from generator lists. The zero
    /// cone and all faces are synthesized; cone ids are assigned in
    /// lexicographic order of the sorted generator lists.
    pub fn new(ambient_rank: usize, cones: Vec<Vec<Vec<BigInt>>>) -> Result<Fan, FanError> {
        let mut canon: Vec<Vec<Vec<BigInt>>> = Vec::new();
        for raw in &cones {
            let gens = canonical_generators(ambient_rank, raw)?;
            if !is_strongly_convex(&gens) {
                return Err(FanError::Invalid(vec![Violation::NotStronglyConvex {
                    cone: canon.len(),
                }]));
            }
            canon.push(gens);
        }
        let mut memo = BTreeMap::new();
        let mut keys: BTreeSet<Vec<Vec<BigInt>>> = BTreeSet::new();
        keys.insert(Vec::new());
        for gens in &canon {
            keys.extend(all_faces(gens, &mut memo));
        }
        let fan = Self::assemble(ambient_rank, keys, &mut memo)?;
        let violations = fan.validate();
        if violations.is_empty() {
            Ok(fan)
        } else {
            Err(FanError::Invalid(violations))
        }
    }

    /// Builds a fan from an explicit cone list without synthesizing faces
    /// and without validation; pair with `validate` for diagnostics.
    pub fn from_explicit(
        ambient_rank: usize,
        cones: Vec<Vec<Vec<BigInt>>>,
    ) -> Result<Fan, FanError> {
        let mut keys: BTreeSet<Vec<Vec<BigInt>>> = BTreeSet::new();
        for raw in &cones {
            keys.insert(canonical_generators(ambient_rank, raw)?);
        }
        let mut memo = BTreeMap::new();
        Self::assemble(ambient_rank, keys, &mut memo)
    }

    fn assemble(
        ambient_rank: usize,
        keys: BTreeSet<Vec<Vec<BigInt>>>,
        memo: &mut BTreeMap<Vec<Vec<BigInt>>, BTreeSet<Vec<Vec<BigInt>>>>,
    ) -> Result<Fan, FanError> {
        let mut cones = Vec::new();
        let mut key_to_id = BTreeMap::new();
        for (id, key) in keys.iter().enumerate() {
            let dim = generator_rank(key);
            cones.push(Cone {
                id,
                generators: key.clone(),
                dim,
            });
            key_to_id.insert(key.clone(), id);
        }
        let mut face_relation = BTreeSet::new();
        for cone in &cones {
            if is_strongly_convex(&cone.generators) {
                for face in all_faces(&cone.generators, memo) {
                    if let Some(&fid) = key_to_id.get(&face) {
                        face_relation.insert((fid, cone.id));
                    }
                }
            } else {
                face_relation.insert((cone.id, cone.id));
            }
        }
        let mut orbit = Vec::new();
        for cone in &cones {
            let stab =
                Sublattice::from_generators(ambient_rank, cone.generators.clone())?.saturate();
            let quotient = stab.complete_basis()?;
            orbit.push(OrbitData {
                cone_id: cone.id,
                stab_lattice: stab,
                quotient,
                orbit_dim: ambient_rank - cone.dim,
            });
        }
        Ok(Fan {
            ambient_rank,
            cones,
            key_to_id,
            face_relation,
            orbit,
        })
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn cones(&self) -> &[Cone] {
        &self.cones
    }

    pub fn cone(&self, id: usize) -> Result<&Cone, FanError> {
        self.cones.get(id).ok_or(FanError::UnknownCone(id))
    }

    pub fn zero_cone_id(&self) -> Option<usize> {
        self.key_to_id.get(&Vec::new()).copied()
    }

    pub fn cone_id_by_generators(&self, gens: &[Vec<BigInt>]) -> Option<usize> {
        let key = canonical_generators(self.ambient_rank, gens).ok()?;
        self.key_to_id.get(&key).copied()
    }

    pub fn is_face(&self, sigma: usize, tau: usize) -> bool {
        self.face_relation.contains(&(sigma, tau))
    }

    /// All faces of `tau` present in the fan, including the zero cone and
    /// `tau` itself.
    pub fn faces_of(&self, tau: usize) -> Result<Vec<&Cone>, FanError> {
        self.cone(tau)?;
        Ok(self
            .cones
            .iter()
            .filter(|c| self.is_face(c.id, tau))
            .collect())
    }

    pub fn orbit_data(&self, id: usize) -> Result<&OrbitData, FanError> {
        self.cone(id)?;
        Ok(&self.orbit[id])
    }

    pub fn cones_of_dim(&self, dim: usize) -> Vec<&Cone> {
        self.cones.iter().filter(|c| c.dim == dim).collect()
    }

    /// Cone ids grouped by cone dimension (= orbit codimension), levels
    /// `0..=ambient_rank`. The levels partition the cone set.
    pub fn codim_filtration(&self) -> Vec<Vec<usize>> {
        let mut levels = vec![Vec::new(); self.ambient_rank + 1];
        for c in &self.cones {
            levels[c.dim].push(c.id);
        }
        levels
    }

    /// Checks every fan invariant and returns the violations found.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for c in &self.cones {
            if !is_strongly_convex(&c.generators) {
                out.push(Violation::NotStronglyConvex { cone: c.id });
            }
        }
        if self.zero_cone_id().is_none() {
            out.push(Violation::MissingZeroCone);
        }
        let mut memo = BTreeMap::new();
        for c in &self.cones {
            if !is_strongly_convex(&c.generators) {
                continue;
            }
            for face in all_faces(&c.generators, &mut memo) {
                if !self.key_to_id.contains_key(&face) {
                    let desc = Cone {
                        id: usize::MAX,
                        generators: face.clone(),
                        dim: generator_rank(&face),
                    }
                    .describe();
                    out.push(Violation::FaceMissing {
                        of: c.id,
                        face: desc,
                    });
                }
            }
        }
        for a in &self.cones {
            for b in &self.cones {
                if a.id >= b.id || self.is_face(a.id, b.id) || self.is_face(b.id, a.id) {
                    continue;
                }
                if !is_strongly_convex(&a.generators) || !is_strongly_convex(&b.generators) {
                    continue;
                }
                let inter = intersect_cones(self.ambient_rank, &a.generators, &b.generators);
                let key = match canonical_generators(self.ambient_rank, &inter) {
                    Ok(k) => k,
                    Err(_) => {
                        out.push(Violation::IntersectionNotCommonFace { a: a.id, b: b.id });
                        continue;
                    }
                };
                let ok = match self.key_to_id.get(&key) {
                    Some(&iid) => self.is_face(iid, a.id) && self.is_face(iid, b.id),
                    None => false,
                };
                if !ok {
                    out.push(Violation::IntersectionNotCommonFace { a: a.id, b: b.id });
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::int_vec;

    fn c2_fan() -> Fan {
        Fan::new(2, vec![vec![int_vec(&[1, 0]), int_vec(&[0, 1])]]).unwrap()
    }

    #[test]
    fn closure_synthesizes_faces() {
        let fan = c2_fan();
        assert_eq!(fan.cones().len(), 4, "0, two rays, one 2-cone");
        assert_eq!(
            fan.codim_filtration()
                .iter()
                .map(Vec::len)
                .collect::<Vec<_>>(),
            vec![1, 2, 1]
        );
    }

    #[test]
    fn faces_of_examples() {
        let fan = c2_fan();
        let top = fan
            .cones()
            .iter()
            .find(|c| c.dim() == 2)
            .map(|c| c.id())
            .unwrap();
        assert_eq!(fan.faces_of(top).unwrap().len(), 4);
        let zero = fan.zero_cone_id().unwrap();
        assert_eq!(fan.faces_of(zero).unwrap().len(), 1);
        assert!(fan.faces_of(99).is_err());
    }

    #[test]
    fn cone_over_square_has_ten_faces() {
        let fan = Fan::new(
            3,
            vec![vec![
                int_vec(&[1, 0, 1]),
                int_vec(&[0, 1, 1]),
                int_vec(&[-1, 0, 1]),
                int_vec(&[0, -1, 1]),
            ]],
        )
        .unwrap();
        assert_eq!(fan.cones().len(), 10, "1 + 4 + 4 + 1");
        let sizes: Vec<usize> = fan.codim_filtration().iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![1, 4, 4, 1]);
        let top = fan.cones().iter().find(|c| c.dim() == 3).unwrap();
        assert_eq!(fan.faces_of(top.id()).unwrap().len(), 10);
    }

    #[test]
    fn orbit_data_examples() {
        let fan = c2_fan();
        let ray = fan.cone_id_by_generators(&[int_vec(&[1, 0])]).unwrap();
        let od = fan.orbit_data(ray).unwrap();
        assert_eq!(od.stab_lattice.rank(), 1);
        assert_eq!(od.quotient.rank(), 1);
        assert_eq!(od.orbit_dim, 1);

        let zero = fan.zero_cone_id().unwrap();
        let od = fan.orbit_data(zero).unwrap();
        assert_eq!(od.stab_lattice.rank(), 0);
        assert_eq!(od.orbit_dim, 2);
    }

    #[test]
    fn a1_singularity_stabilizer_saturates() {
        let fan = Fan::new(2, vec![vec![int_vec(&[1, 0]), int_vec(&[1, 2])]]).unwrap();
        let top = fan.cones().iter().find(|c| c.dim() == 2).unwrap();
        let od = fan.orbit_data(top.id()).unwrap();
        // span{(1,0),(1,2)} has index 2; the stabilizer lattice saturates to Z^2
        assert_eq!(od.stab_lattice.rank(), 2);
        assert!(od.stab_lattice.contains(&int_vec(&[0, 1])).unwrap());
        assert_eq!(od.orbit_dim, 0);
    }

    #[test]
    fn p1_filtration() {
        let fan = Fan::new(1, vec![vec![int_vec(&[1])], vec![int_vec(&[-1])]]).unwrap();
        let sizes: Vec<usize> = fan.codim_filtration().iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![1, 2]);
    }

    #[test]
    fn canonicalization_drops_redundant_generators() {
        let fan = Fan::new(
            2,
            vec![vec![int_vec(&[1, 0]), int_vec(&[0, 1]), int_vec(&[1, 1])]],
        )
        .unwrap();
        let top = fan.cones().iter().find(|c| c.dim() == 2).unwrap();
        assert_eq!(top.generators().len(), 2, "(1,1) is not extreme");
        // non-primitive generators are normalized
        let fan = Fan::new(2, vec![vec![int_vec(&[2, 0])]]).unwrap();
        assert!(fan.cone_id_by_generators(&[int_vec(&[1, 0])]).is_some());
    }

    #[test]
    fn non_strongly_convex_rejected() {
        let err = Fan::new(1, vec![vec![int_vec(&[1]), int_vec(&[-1])]]).unwrap_err();
        assert!(matches!(err, FanError::Invalid(_)));
        // hidden line: the three generators sum to zero
        let err = Fan::new(
            2,
            vec![vec![int_vec(&[1, 0]), int_vec(&[-1, 1]), int_vec(&[0, -1])]],
        )
        .unwrap_err();
        assert!(matches!(err, FanError::Invalid(_)));
    }

    #[test]
    fn validate_complete_explicit_fan() {
        let fan = Fan::from_explicit(
            2,
            vec![
                vec![],
                vec![int_vec(&[1, 0])],
                vec![int_vec(&[0, 1])],
                vec![int_vec(&[1, 0]), int_vec(&[0, 1])],
            ],
        )
        .unwrap();
        assert_eq!(fan.validate(), Vec::new());
    }

    #[test]
    fn validate_detects_missing_face() {
        let fan = Fan::from_explicit(
            2,
            vec![
                vec![],
                vec![int_vec(&[1, 0])],
                vec![int_vec(&[1, 0]), int_vec(&[0, 1])],
            ],
        )
        .unwrap();
        let violations = fan.validate();
        assert!(
            violations
                .iter()
                .any(|v| matches!(v, Violation::FaceMissing { .. })),
            "got {violations:?}"
        );
    }

    #[test]
    fn validate_detects_interior_overlap() {
        // the 2-cones {(1,0),(0,1)} and {(1,0),(1,2)} overlap in interiors
        let fan = Fan::from_explicit(
            2,
            vec![
                vec![],
                vec![int_vec(&[1, 0])],
                vec![int_vec(&[0, 1])],
                vec![int_vec(&[1, 2])],
                vec![int_vec(&[1, 0]), int_vec(&[0, 1])],
                vec![int_vec(&[1, 0]), int_vec(&[1, 2])],
            ],
        )
        .unwrap();
        let violations = fan.validate();
        assert!(
            violations
                .iter()
                .any(|v| matches!(v, Violation::IntersectionNotCommonFace { .. })),
            "got {violations:?}"
        );
    }

    #[test]
    fn adjacent_cones_intersect_in_common_ray() {
        let fan = Fan::new(
            2,
            vec![
                vec![int_vec(&[1, 0]), int_vec(&[0, 1])],
                vec![int_vec(&[0, 1]), int_vec(&[-1, 0])],
            ],
        )
        .unwrap();
        assert_eq!(fan.validate(), Vec::new());
        let inter = intersect_cones(
            2,
            &[int_vec(&[1, 0]), int_vec(&[0, 1])],
            &[int_vec(&[0, 1]), int_vec(&[-1, 0])],
        );
        assert_eq!(inter, vec![int_vec(&[0, 1])]);
    }

    #[test]
    fn cone_membership() {
        let gens = vec![int_vec(&[1, 0]), int_vec(&[1, 2])];
        assert!(cone_contains(&gens, &int_vec(&[1, 1])));
        assert!(cone_contains(&gens, &int_vec(&[3, 2])));
        assert!(!cone_contains(&gens, &int_vec(&[0, 1])));
        assert!(!cone_contains(&gens, &int_vec(&[-1, 0])));
        assert!(cone_contains(&gens, &int_vec(&[0, 0])));
    }

    #[test]
    fn face_relation_is_partial_order() {
        let fan = Fan::new(
            2,
            vec![
                vec![int_vec(&[1, 0]), int_vec(&[0, 1])],
                vec![int_vec(&[0, 1]), int_vec(&[-1, 0])],
                vec![int_vec(&[-1, 0]), int_vec(&[0, -1])],
                vec![int_vec(&[0, -1]), int_vec(&[1, 0])],
            ],
        )
        .unwrap();
        let n = fan.cones().len();
        assert_eq!(n, 9);
        for a in 0..n {
            assert!(fan.is_face(a, a), "reflexive");
            for b in 0..n {
                if a != b && fan.is_face(a, b) {
                    assert!(!fan.is_face(b, a), "antisymmetric");
                }
                for c in 0..n {
                    if fan.is_face(a, b) && fan.is_face(b, c) {
                        assert!(fan.is_face(a, c), "transitive");
                    }
                }
            }
        }
    }
}

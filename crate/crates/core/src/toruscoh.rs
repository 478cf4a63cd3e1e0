//! Cohomology of compact tori with rank-one finite-order coefficients.
//!
//! Two independent routes are provided: a closed form (binomial ranks for
//! the trivial character, zero otherwise) and a Koszul-complex computation
//! of `H^*(Z^k, M)` over the cyclotomic field `Q(zeta_m)`, with ranks
//! extracted by exact rational linear algebra. Ranks over `Q(zeta_m)` and
//! over `C` agree for these complexes, so nothing is lost by working over
//! the cyclotomic field.

use crate::charsys::Character;
use crate::lattice::IntMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;

/// Graded nonnegative ranks with canonical trimming of zero margins.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedRanks {
    offset: i64,
    ranks: Vec<u64>,
}

impl GradedRanks {
    pub fn new(offset: i64, ranks: Vec<u64>) -> Self {
        let mut offset = offset;
        let mut ranks = ranks;
        while ranks.first() == Some(&0) {
            ranks.remove(0);
            offset += 1;
        }
        while ranks.last() == Some(&0) {
            ranks.pop();
        }
        if ranks.is_empty() {
            offset = 0;
        }
        GradedRanks { offset, ranks }
    }

    pub fn zero() -> Self {
        GradedRanks {
            offset: 0,
            ranks: Vec::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.ranks.is_empty()
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn rank_at(&self, degree: i64) -> u64 {
        if degree < self.offset {
            return 0;
        }
        let idx = (degree - self.offset) as usize;
        self.ranks.get(idx).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, u64)> + '_ {
        self.ranks
            .iter()
            .enumerate()
            .map(move |(i, &r)| (self.offset + i as i64, r))
    }

    /// Alternating sum of ranks.
    pub fn euler_characteristic(&self) -> i64 {
        self.iter()
            .map(|(d, r)| {
                if d.rem_euclid(2) == 0 {
                    r as i64
                } else {
                    -(r as i64)
                }
            })
            .sum()
    }

    pub fn total(&self) -> u64 {
        self.ranks.iter().sum()
    }

    /// Degrees shifted by `m` (an entry at degree `d` moves to `d - m`).
    pub fn shifted(&self, m: i64) -> GradedRanks {
        GradedRanks {
            offset: self.offset - m,
            ranks: self.ranks.clone(),
        }
    }
}

impl fmt::Display for GradedRanks {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.iter().map(|(d, r)| format!("{d}:{r}")).collect();
        write!(f, "{}", parts.join(" "))
    }
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    u64::try_from(acc).expect("binomial overflow")
}

fn divisors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n.is_multiple_of(i) {
            out.push(i);
            if i != n / i {
                out.push(n / i);
            }
        }
        i += 1;
    }
    out.sort_unstable();
    out
}

// integer polynomials, coefficients low to high, no trailing zeros

fn poly_trim(p: &mut Vec<BigInt>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

/// Exact division by a monic divisor; panics if the division is not exact.
fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    assert!(den.last().is_some_and(|c| c.is_one()), "divisor not monic");
    let mut rem = num.to_vec();
    poly_trim(&mut rem);
    let d = den.len() - 1;
    if rem.len() < den.len() {
        assert!(rem.is_empty(), "division not exact");
        return Vec::new();
    }
    let mut quot = vec![BigInt::zero(); rem.len() - d];
    while rem.len() >= den.len() {
        let lead = rem.last().unwrap().clone();
        let shift = rem.len() - den.len();
        quot[shift] = lead.clone();
        for (i, c) in den.iter().enumerate() {
            let v = &rem[shift + i] - &lead * c;
            rem[shift + i] = v;
        }
        poly_trim(&mut rem);
    }
    assert!(rem.is_empty(), "division not exact");
    quot
}

fn x_pow_minus_one(n: u64) -> Vec<BigInt> {
    let mut p = vec![BigInt::zero(); n as usize + 1];
    p[0] = -BigInt::one();
    p[n as usize] = BigInt::one();
    p
}

/// The m-th cyclotomic polynomial, by recursive exact division of
/// `x^m - 1` by the lower cyclotomic polynomials.
pub fn cyclotomic_polynomial(m: u64) -> Vec<BigInt> {
    assert!(m >= 1, "cyclotomic order must be positive");
    if m == 1 {
        return vec![-BigInt::one(), BigInt::one()];
    }
    let mut num = x_pow_minus_one(m);
    for d in divisors(m) {
        if d == m {
            continue;
        }
        num = poly_div_exact(&num, &cyclotomic_polynomial(d));
    }
    num
}

/// Element of `Q(zeta_m)` in the power basis `1, zeta, ..., zeta^{phi(m)-1}`,
/// reduced modulo the m-th cyclotomic polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclotomicElement {
    order: u64,
    coeffs: Vec<BigRational>,
    // the non-leading coefficients of the (monic) cyclotomic polynomial,
    // kept for reduction when multiplying by zeta
    modulus_tail: Vec<BigInt>,
}

impl CyclotomicElement {
    pub fn zero(m: u64) -> Self {
        let phi_poly = cyclotomic_polynomial(m);
        let deg = phi_poly.len() - 1;
        CyclotomicElement {
            order: m,
            coeffs: vec![BigRational::zero(); deg],
            modulus_tail: phi_poly[..deg].to_vec(),
        }
    }

    pub fn one(m: u64) -> Self {
        let mut e = Self::zero(m);
        e.coeffs[0] = BigRational::one();
        e
    }

    /// `zeta_m^a`, reduced.
    pub fn root_power(m: u64, a: u64) -> Self {
        let mut e = Self::one(m);
        for _ in 0..(a % m) {
            e = e.mul_by_root();
        }
        e
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn sub(&self, other: &CyclotomicElement) -> CyclotomicElement {
        assert_eq!(self.order, other.order);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        CyclotomicElement {
            order: self.order,
            coeffs,
            modulus_tail: self.modulus_tail.clone(),
        }
    }

    /// Multiplication by `zeta`, using `zeta^phi = -(modulus tail)`.
    pub fn mul_by_root(&self) -> CyclotomicElement {
        let deg = self.coeffs.len();
        let lead = self.coeffs[deg - 1].clone();
        let mut coeffs = vec![BigRational::zero(); deg];
        coeffs[1..deg].clone_from_slice(&self.coeffs[..deg - 1]);
        if !lead.is_zero() {
            for (c, t) in coeffs.iter_mut().zip(&self.modulus_tail) {
                *c -= &lead * BigRational::from(t.clone());
            }
        }
        CyclotomicElement {
            order: self.order,
            coeffs,
            modulus_tail: self.modulus_tail.clone(),
        }
    }

    /// Matrix of multiplication by this element on the power basis: the
    /// element evaluated through the companion matrix of the cyclotomic
    /// polynomial. Column `j` holds the coefficients of `self * zeta^j`.
    pub fn regular_rep(&self) -> Vec<Vec<BigRational>> {
        let deg = self.coeffs.len();
        let mut cols = Vec::with_capacity(deg);
        let mut cur = self.clone();
        for _ in 0..deg {
            cols.push(cur.coeffs.clone());
            cur = cur.mul_by_root();
        }
        // transpose columns into rows
        (0..deg)
            .map(|i| (0..deg).map(|j| cols[j][i].clone()).collect())
            .collect()
    }
}

/// Rank of a rational matrix by clearing denominators row by row and
/// running exact integer elimination.
pub fn rational_matrix_rank(rows: &[Vec<BigRational>]) -> usize {
    if rows.is_empty() || rows[0].is_empty() {
        return 0;
    }
    let int_rows: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|row| {
            let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect()
        })
        .collect();
    IntMatrix::from_rows(int_rows).rank()
}

/// Closed form: binomial ranks for the trivial character, zero otherwise.
pub fn torus_cohomology_closed_form(chi: &Character) -> GradedRanks {
    let k = chi.ambient_rank() as u64;
    if chi.is_trivial() {
        GradedRanks::new(0, (0..=k).map(|q| binomial(k, q)).collect())
    } else {
        GradedRanks::zero()
    }
}

fn subsets_of_size(k: usize, size: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, k: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..k {
            cur.push(i);
            rec(i + 1, k, size, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(size);
    rec(0, k, size, &mut cur, &mut out);
    out
}

/// Independent route: group cohomology of `Z^k` acting on a one-dimensional
/// `Q(zeta_m)`-module, as the cohomology of the exterior-algebra complex
/// with differential `v -> c ∧ v`, where `c_j` is monodromy-minus-one.
/// Ranks are computed exactly over `Q` via the companion-matrix expansion.
pub fn torus_cohomology_koszul_oracle(chi: &Character) -> GradedRanks {
    let k = chi.ambient_rank();
    let m: u64 = u64::try_from(chi.order()).expect("character order too large for the oracle");
    let one = CyclotomicElement::one(m);
    let phi = one.degree();

    // c_j = zeta^{a_j} - 1 where chi_j = a_j / m
    let scalars: Vec<CyclotomicElement> = chi
        .values()
        .iter()
        .map(|v| {
            let a = v.numer() * (BigInt::from(m) / v.denom());
            let a = u64::try_from(a).expect("character value exponent out of range");
            CyclotomicElement::root_power(m, a).sub(&one)
        })
        .collect();

    // rank over Q(zeta) of each wedge differential d^q: Λ^q -> Λ^{q+1}
    let mut diff_rank = vec![0usize; k + 1];
    for q in 0..k {
        let cols_subsets = subsets_of_size(k, q);
        let rows_subsets = subsets_of_size(k, q + 1);
        let row_index: std::collections::BTreeMap<&Vec<usize>, usize> = rows_subsets
            .iter()
            .enumerate()
            .map(|(i, s)| (s, i))
            .collect();
        let nrows = rows_subsets.len() * phi;
        let ncols = cols_subsets.len() * phi;
        let mut matrix = vec![vec![BigRational::zero(); ncols]; nrows];
        for (ci, s) in cols_subsets.iter().enumerate() {
            for j in 0..k {
                if s.contains(&j) {
                    continue;
                }
                let mut t = s.clone();
                let pos = t.iter().filter(|&&x| x < j).count();
                t.insert(pos, j);
                let ri = row_index[&t];
                let sign_neg = pos % 2 == 1;
                let block = scalars[j].regular_rep();
                for a in 0..phi {
                    for b in 0..phi {
                        let v = if sign_neg {
                            -&block[a][b]
                        } else {
                            block[a][b].clone()
                        };
                        matrix[ri * phi + a][ci * phi + b] = v;
                    }
                }
            }
        }
        let r = rational_matrix_rank(&matrix);
        assert_eq!(r % phi, 0, "rank not divisible by the field degree");
        diff_rank[q] = r / phi;
    }

    let ranks = (0..=k)
        .map(|q| {
            let dim = binomial(k as u64, q as u64);
            let below = if q == 0 { 0 } else { diff_rank[q - 1] as u64 };
            let here = if q == k { 0 } else { diff_rank[q] as u64 };
            dim - here - below
        })
        .collect();
    GradedRanks::new(0, ranks)
}

//! Exact arbitrary-precision integer linear algebra: Hermite and Smith normal
//! forms, fraction-free determinants, and integer linear solving.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinAlgError {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

/// Dense integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IntMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        IntMatrix::from_rows(
            rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Matrix with row `i` and column `j` removed.
    pub fn minor(&self, i: usize, j: usize) -> IntMatrix {
        assert!(i < self.rows && j < self.cols);
        let mut out = IntMatrix::zero(self.rows - 1, self.cols - 1);
        for r in 0..self.rows {
            if r == i {
                continue;
            }
            for c in 0..self.cols {
                if c == j {
                    continue;
                }
                let rr = if r < i { r } else { r - 1 };
                let cc = if c < j { c } else { c - 1 };
                out[(rr, cc)] = self[(r, c)].clone();
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| &self[(i, j)] * &x[j]).sum())
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[a] -= q * row[b]
    fn row_sub(&mut self, a: usize, b: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let t = q * &self[(b, j)];
            self[(a, j)] -= t;
        }
    }

    /// col[a] -= q * col[b]
    fn col_sub(&mut self, a: usize, b: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let t = q * &self[(i, b)];
            self[(i, a)] -= t;
        }
    }

    fn negate_row(&mut self, a: usize) {
        for j in 0..self.cols {
            let v = -self[(a, j)].clone();
            self[(a, j)] = v;
        }
    }

    fn negate_col(&mut self, a: usize) {
        for i in 0..self.rows {
            let v = -self[(i, a)].clone();
            self[(i, a)] = v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

/// Finitely generated abelian group in invariant-factor form:
/// Z^free_rank + Z/d_1 + ... + Z/d_k with d_1 | d_2 | ... | d_k, every d_i >= 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianGroupPresentation {
    invariant_factors: Vec<BigUint>,
    free_rank: usize,
}

impl AbelianGroupPresentation {
    pub fn new(invariant_factors: Vec<BigUint>, free_rank: usize) -> Self {
        let two = BigUint::from(2u32);
        for w in invariant_factors.windows(2) {
            assert!(
                (&w[1] % &w[0]).is_zero(),
                "invariant factors must form a divisibility chain"
            );
        }
        assert!(invariant_factors.iter().all(|d| *d >= two), "factors must be >= 2");
        AbelianGroupPresentation { invariant_factors, free_rank }
    }

    pub fn trivial() -> Self {
        AbelianGroupPresentation { invariant_factors: vec![], free_rank: 0 }
    }

    pub fn invariant_factors(&self) -> &[BigUint] {
        &self.invariant_factors
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty() && self.free_rank == 0
    }

    /// Order of the torsion part.
    pub fn torsion_order(&self) -> BigUint {
        self.invariant_factors.iter().product()
    }

    /// Presentation of the torsion subgroup alone.
    pub fn torsion(&self) -> AbelianGroupPresentation {
        AbelianGroupPresentation {
            invariant_factors: self.invariant_factors.clone(),
            free_rank: 0,
        }
    }
}

/// Position of the smallest nonzero entry (by absolute value) of the trailing
/// submatrix starting at (k, k). Ties break to the lowest row, then column.
fn smallest_pivot(m: &IntMatrix, k: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in k..m.rows() {
        for j in k..m.cols() {
            if m[(i, j)].is_zero() {
                continue;
            }
            match best {
                None => best = Some((i, j)),
                Some(b) => {
                    if m[(i, j)].abs() < m[(b.0, b.1)].abs() {
                        best = Some((i, j));
                    }
                }
            }
        }
    }
    best
}

/// Smith normal form diagonal d_1 | d_2 | ... including 1s and trailing 0s.
/// Length = min(rows, cols). Deterministic: smallest-|pivot| selection with
/// lowest-row-then-column tie break.
pub fn smith_normal_form(m: &IntMatrix) -> Vec<BigInt> {
    let mut a = m.clone();
    let n = a.rows().min(a.cols());
    let mut k = 0;
    while k < n {
        let Some((pi, pj)) = smallest_pivot(&a, k) else { break };
        a.swap_rows(k, pi);
        a.swap_cols(k, pj);

        // Clear row k and column k; the smallest-pivot choice makes the
        // remainders strictly shrink, so this terminates.
        loop {
            let mut dirty = false;
            for i in (k + 1)..a.rows() {
                if !a[(i, k)].is_zero() {
                    let q = div_round(&a[(i, k)], &a[(k, k)]);
                    a.row_sub(i, k, &q);
                    if !a[(i, k)].is_zero() {
                        dirty = true;
                    }
                }
            }
            for j in (k + 1)..a.cols() {
                if !a[(k, j)].is_zero() {
                    let q = div_round(&a[(k, j)], &a[(k, k)]);
                    a.col_sub(j, k, &q);
                    if !a[(k, j)].is_zero() {
                        dirty = true;
                    }
                }
            }
            if !dirty {
                break;
            }
            // A remainder survived somewhere; move the smallest entry back to
            // the pivot position and go again.
            let (pi, pj) = smallest_pivot(&a, k).expect("nonzero entry must exist");
            a.swap_rows(k, pi);
            a.swap_cols(k, pj);
        }

        // Enforce that the pivot divides everything below-right; if not, fold
        // the offending row in and redo this step.
        let mut offender = None;
        'scan: for i in (k + 1)..a.rows() {
            for j in (k + 1)..a.cols() {
                if !(&a[(i, j)] % &a[(k, k)]).is_zero() {
                    offender = Some(i);
                    break 'scan;
                }
            }
        }
        if let Some(i) = offender {
            let one = BigInt::from(-1);
            a.row_sub(k, i, &one); // row_k += row_i
            continue;
        }

        if a[(k, k)].is_negative() {
            a.negate_row(k);
        }
        k += 1;
    }
    (0..n).map(|i| a[(i, i)].clone()).collect()
}

/// Division rounded to nearest (ties toward zero), so |a - q*b| <= |b|/2.
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_rem(b);
    let two_r = BigInt::from(2) * r.abs();
    if two_r > b.abs() {
        if (a.is_negative()) == (b.is_negative()) {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

/// Exact determinant via fraction-free (Bareiss) elimination.
pub fn determinant(m: &IntMatrix) -> Result<BigInt, LinAlgError> {
    if !m.is_square() {
        return Err(LinAlgError::NonSquare { rows: m.rows(), cols: m.cols() });
    }
    let n = m.rows();
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a = m.clone();
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..(n - 1) {
        if a[(k, k)].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !a[(i, k)].is_zero()) else {
                return Ok(BigInt::zero());
            };
            a.swap_rows(k, swap);
            sign = -sign;
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let num = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                let (q, r) = num.div_rem(&prev);
                debug_assert!(r.is_zero(), "Bareiss division must be exact");
                let _ = r;
                a[(i, j)] = q;
            }
            a[(i, k)] = BigInt::zero();
        }
        prev = a[(k, k)].clone();
    }
    let det = a[(n - 1, n - 1)].clone();
    Ok(if sign < 0 { -det } else { det })
}

/// Naive cofactor expansion; test oracle for small matrices.
pub fn determinant_cofactor(m: &IntMatrix) -> Result<BigInt, LinAlgError> {
    if !m.is_square() {
        return Err(LinAlgError::NonSquare { rows: m.rows(), cols: m.cols() });
    }
    let n = m.rows();
    if n == 0 {
        return Ok(BigInt::one());
    }
    if n == 1 {
        return Ok(m[(0, 0)].clone());
    }
    let mut acc = BigInt::zero();
    for i in 0..n {
        if m[(i, 0)].is_zero() {
            continue;
        }
        let sub = determinant_cofactor(&m.minor(i, 0))?;
        let term = &m[(i, 0)] * sub;
        if i % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(acc)
}

/// Modular/CRT determinant backend. Same answer as `determinant`; kept as an
/// independent route and cross-checked in tests.
pub fn determinant_crt(m: &IntMatrix) -> Result<BigInt, LinAlgError> {
    if !m.is_square() {
        return Err(LinAlgError::NonSquare { rows: m.rows(), cols: m.cols() });
    }
    let n = m.rows();
    if n == 0 {
        return Ok(BigInt::one());
    }
    // Hadamard bound squared: product of row norms squared.
    let mut bound_sq = BigInt::one();
    for i in 0..n {
        let row_norm_sq: BigInt = (0..n).map(|j| &m[(i, j)] * &m[(i, j)]).sum();
        if row_norm_sq.is_zero() {
            return Ok(BigInt::zero());
        }
        bound_sq *= row_norm_sq;
    }

    let mut modulus = BigInt::one();
    let mut residue = BigInt::zero();
    let mut p_cursor: u64 = (1 << 31) - 1;
    // Need modulus^2 > 4 * bound_sq so the centered lift is unambiguous.
    while &modulus * &modulus <= BigInt::from(4) * &bound_sq {
        let p = next_prime_below(p_cursor);
        p_cursor = p - 1;
        let r = det_mod_p(m, p);
        // CRT combine (modulus, residue) with (p, r).
        let p_big = BigInt::from(p);
        let inv = mod_inverse(&(&modulus % &p_big), &p_big).expect("moduli are coprime");
        let diff = (BigInt::from(r) - &residue) % &p_big;
        let t = (diff * inv) % &p_big;
        let t = if t.is_negative() { t + &p_big } else { t };
        residue += &modulus * t;
        modulus *= &p_big;
    }
    let half = &modulus / 2;
    if residue > half {
        residue -= &modulus;
    }
    Ok(residue)
}

fn next_prime_below(start: u64) -> u64 {
    let mut p = start;
    loop {
        if is_prime_u64(p) {
            return p;
        }
        p -= 1;
    }
}

pub(crate) fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
        if n == q {
            return true;
        }
        if n.is_multiple_of(q) {
            return false;
        }
    }
    let mut d = 37u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

#[allow(clippy::needless_range_loop)]
fn det_mod_p(m: &IntMatrix, p: u64) -> u64 {
    let n = m.rows();
    let pb = BigInt::from(p);
    let mut a: Vec<Vec<u64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let r = &m[(i, j)] % &pb;
                    let r = if r.is_negative() { r + &pb } else { r };
                    u64::try_from(r).unwrap()
                })
                .collect()
        })
        .collect();
    let mut det: u64 = 1;
    for k in 0..n {
        let Some(piv) = (k..n).find(|&i| a[i][k] != 0) else { return 0 };
        if piv != k {
            a.swap(piv, k);
            det = p - det;
        }
        det = mulmod(det, a[k][k], p);
        let inv = inv_mod_u64(a[k][k], p);
        for i in (k + 1)..n {
            if a[i][k] == 0 {
                continue;
            }
            let f = mulmod(a[i][k], inv, p);
            for j in k..n {
                let sub = mulmod(f, a[k][j], p);
                a[i][j] = (a[i][j] + p - sub) % p;
            }
        }
    }
    det % p
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn inv_mod_u64(a: u64, p: u64) -> u64 {
    // Fermat; p is prime.
    let mut base = a % p;
    let mut exp = p - 2;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, p);
        }
        base = mulmod(base, base, p);
        exp >>= 1;
    }
    acc
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if e.gcd.is_one() {
        let x = e.x % m;
        Some(if x.is_negative() { x + m } else { x })
    } else {
        None
    }
}

/// Column-style Hermite normal form: returns (H, V) with M·V = H, V unimodular.
/// H is in column echelon form with positive pivots; entries to the left of a
/// pivot in its row are reduced into [0, pivot).
pub fn hermite_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = m.clone();
    let mut v = IntMatrix::identity(m.cols());
    let mut cur = 0usize;
    for row in 0..m.rows() {
        if cur >= m.cols() {
            break;
        }
        loop {
            // Smallest nonzero |entry| in this row among columns >= cur.
            let mut best: Option<usize> = None;
            for j in cur..m.cols() {
                if h[(row, j)].is_zero() {
                    continue;
                }
                match best {
                    None => best = Some(j),
                    Some(b) => {
                        if h[(row, j)].abs() < h[(row, b)].abs() {
                            best = Some(j);
                        }
                    }
                }
            }
            let Some(b) = best else { break };
            h.swap_cols(cur, b);
            v.swap_cols(cur, b);
            let mut clean = true;
            for j in (cur + 1)..m.cols() {
                if h[(row, j)].is_zero() {
                    continue;
                }
                let q = h[(row, j)].div_floor(&h[(row, cur)]);
                h.col_sub(j, cur, &q);
                v.col_sub(j, cur, &q);
                if !h[(row, j)].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if h[(row, cur)].is_zero() {
            continue;
        }
        if h[(row, cur)].is_negative() {
            h.negate_col(cur);
            v.negate_col(cur);
        }
        // Reduce the entries left of the pivot into [0, pivot).
        for j in 0..cur {
            let q = h[(row, j)].div_floor(&h[(row, cur)]);
            h.col_sub(j, cur, &q);
            v.col_sub(j, cur, &q);
        }
        cur += 1;
    }
    (h, v)
}

/// Any integer solution of M·x = b, or None when no integer solution exists.
/// The returned solution is verified by substitution.
pub fn solve_integer(m: &IntMatrix, b: &[BigInt]) -> Result<Option<Vec<BigInt>>, LinAlgError> {
    if b.len() != m.rows() {
        return Err(LinAlgError::DimensionMismatch(format!(
            "rhs length {} vs {} rows",
            b.len(),
            m.rows()
        )));
    }
    let (h, v) = hermite_normal_form(m);
    // Pivot column for each row, in echelon order.
    let mut y = vec![BigInt::zero(); m.cols()];
    let mut cur = 0usize;
    for row in 0..m.rows() {
        let residual: BigInt =
            &b[row] - (0..cur).map(|j| &h[(row, j)] * &y[j]).sum::<BigInt>();
        if cur < m.cols() && !h[(row, cur)].is_zero() {
            let (q, r) = residual.div_rem(&h[(row, cur)]);
            if !r.is_zero() {
                return Ok(None);
            }
            y[cur] = q;
            cur += 1;
        } else if !residual.is_zero() {
            return Ok(None);
        }
    }
    let x = v.mul_vec(&y);
    // Substitution post-check on every call.
    let check = m.mul_vec(&x);
    assert!(
        check.iter().zip(b).all(|(l, r)| l == r),
        "solver produced a non-solution"
    );
    Ok(Some(x))
}

/// Cokernel Z^rows / colspan(M) as invariant factors (>= 2) plus free rank.
pub fn cokernel(m: &IntMatrix) -> AbelianGroupPresentation {
    let diag = smith_normal_form(m);
    let nonzero = diag.iter().filter(|d| !d.is_zero()).count();
    let factors: Vec<BigUint> = diag
        .iter()
        .filter(|d| !d.is_zero() && !d.is_one())
        .map(|d| d.to_biguint().expect("SNF diagonal is nonnegative"))
        .collect();
    AbelianGroupPresentation::new(factors, m.rows() - nonzero)
}

//! Exact integer linear algebra: matrices over `BigInt`, Smith normal form
//! with both transform matrices, Hermite-normal-form lattices, and the
//! minimal-representative reduction used to canonicalize residues modulo an
//! image lattice.
//!
//! Everything here is deterministic: the SNF pivot rule (smallest nonzero
//! absolute value, ties broken by row-major position) and the HNF shape
//! (column-style, pivot rows strictly increasing, positive pivots, entries in
//! a pivot row reduced into `[0, pivot)`) are fixed, so equal inputs always
//! produce identical outputs.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IntLinError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix shape {rows}x{cols} does not match {len} entries")]
    BadShape { rows: usize, cols: usize, len: usize },
    #[error("modulus k must be >= 1")]
    ZeroModulus,
}

/// Dense matrix over arbitrary-precision integers, row-major storage.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self, IntLinError> {
        if entries.len() != rows * cols {
            return Err(IntLinError::BadShape { rows, cols, len: entries.len() });
        }
        Ok(IntMatrix { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, entries: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        IntMatrix { rows, cols, entries }
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self::from_fn(r, c, |i, j| BigInt::from(rows[i][j]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        IntMatrix::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = BigInt::zero();
            for k in 0..self.cols {
                acc += self.get(i, k) * other.get(k, j);
            }
            acc
        })
    }

    /// Matrix-vector product `self * x`.
    pub fn mul_vec(&self, x: &[BigInt]) -> Result<Vec<BigInt>, IntLinError> {
        if x.len() != self.cols {
            return Err(IntLinError::DimensionMismatch { expected: self.cols, got: x.len() });
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = BigInt::zero();
                for (k, xk) in x.iter().enumerate() {
                    acc += self.get(i, k) * xk;
                }
                acc
            })
            .collect())
    }

    /// Exact determinant via fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m: Vec<Vec<BigInt>> =
            (0..n).map(|i| (0..n).map(|j| self.get(i, j).clone()).collect()).collect();
        let mut sign = 1i32;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                    Some(i) => {
                        m.swap(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    m[i][j] = num / &prev; // exact by the Bareiss identity
                }
                m[i][k] = BigInt::zero();
            }
            prev = m[k][k].clone();
        }
        let d = m[n - 1][n - 1].clone();
        if sign < 0 {
            -d
        } else {
            d
        }
    }

    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols && self.det().abs().is_one()
    }

    /// The submatrix made of columns `0..c`.
    pub fn leading_columns(&self, c: usize) -> IntMatrix {
        assert!(c <= self.cols);
        IntMatrix::from_fn(self.rows, c, |i, j| self.get(i, j).clone())
    }
}

/// Smith normal form `P^-1 * B * Q = diag(d_1, ..., d_l, 0, ...)` with
/// unimodular `P`, `Q`, positive invariant factors, and `d_i | d_(i+1)`.
///
/// `p_inv` is accumulated during the reduction (it is the product of the row
/// operations), so callers never need to invert `P`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfDecomposition {
    pub p: IntMatrix,
    pub p_inv: IntMatrix,
    pub q: IntMatrix,
    /// The nonzero invariant factors `d_1 | d_2 | ... | d_l`, all positive.
    pub diag: Vec<BigInt>,
    rows: usize,
    cols: usize,
}

impl SnfDecomposition {
    pub fn rank(&self) -> usize {
        self.diag.len()
    }

    /// The full `rows x cols` diagonal matrix, for checking `B*Q == P*D`.
    pub fn diag_matrix(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.rows, self.cols);
        for (i, d) in self.diag.iter().enumerate() {
            m.set(i, i, d.clone());
        }
        m
    }
}

/// Working state of the SNF reduction: the matrix being reduced plus the three
/// transform accumulators, kept in sync under every elementary operation.
struct SnfWorker {
    a: IntMatrix,
    p: IntMatrix,
    p_inv: IntMatrix,
    q: IntMatrix,
}

impl SnfWorker {
    // Row operation a <- E*a updates p <- p*E^-1 and p_inv <- E*p_inv.
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.a.cols {
            self.a.entries.swap(i * self.a.cols + c, j * self.a.cols + c);
        }
        for r in 0..self.p.rows {
            self.p.entries.swap(r * self.p.cols + i, r * self.p.cols + j);
        }
        for c in 0..self.p_inv.cols {
            self.p_inv.entries.swap(i * self.p_inv.cols + c, j * self.p_inv.cols + c);
        }
    }

    /// row_i -= coef * row_j
    fn row_sub(&mut self, i: usize, j: usize, coef: &BigInt) {
        if coef.is_zero() {
            return;
        }
        for c in 0..self.a.cols {
            let v = self.a.get(i, c) - coef * self.a.get(j, c);
            self.a.set(i, c, v);
        }
        // p <- p * (I + coef E_ij): column j gains coef * column i
        for r in 0..self.p.rows {
            let v = self.p.get(r, j) + coef * self.p.get(r, i);
            self.p.set(r, j, v);
        }
        for c in 0..self.p_inv.cols {
            let v = self.p_inv.get(i, c) - coef * self.p_inv.get(j, c);
            self.p_inv.set(i, c, v);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for c in 0..self.a.cols {
            let v = -self.a.get(i, c).clone();
            self.a.set(i, c, v);
        }
        for r in 0..self.p.rows {
            let v = -self.p.get(r, i).clone();
            self.p.set(r, i, v);
        }
        for c in 0..self.p_inv.cols {
            let v = -self.p_inv.get(i, c).clone();
            self.p_inv.set(i, c, v);
        }
    }

    // Column operation a <- a*E updates q <- q*E.
    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.a.rows {
            self.a.entries.swap(r * self.a.cols + i, r * self.a.cols + j);
        }
        for r in 0..self.q.rows {
            self.q.entries.swap(r * self.q.cols + i, r * self.q.cols + j);
        }
    }

    /// col_j -= coef * col_i
    fn col_sub(&mut self, j: usize, i: usize, coef: &BigInt) {
        if coef.is_zero() {
            return;
        }
        for r in 0..self.a.rows {
            let v = self.a.get(r, j) - coef * self.a.get(r, i);
            self.a.set(r, j, v);
        }
        for r in 0..self.q.rows {
            let v = self.q.get(r, j) - coef * self.q.get(r, i);
            self.q.set(r, j, v);
        }
    }
}

/// Pivot rule: smallest nonzero absolute value in the trailing submatrix,
/// ties broken by (row, col) scan order.
fn pivot_position(a: &IntMatrix, k: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in k..a.rows() {
        for j in k..a.cols() {
            let v = a.get(i, j);
            if v.is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if a.get(bi, bj).magnitude() <= v.magnitude() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

/// Smith normal form of `m` (square or rectangular).
pub fn snf(m: &IntMatrix) -> SnfDecomposition {
    let rows = m.rows();
    let cols = m.cols();
    let mut w = SnfWorker {
        a: m.clone(),
        p: IntMatrix::identity(rows),
        p_inv: IntMatrix::identity(rows),
        q: IntMatrix::identity(cols),
    };
    let mut k = 0;
    while k < rows.min(cols) {
        let Some((pi, pj)) = pivot_position(&w.a, k) else { break };
        w.swap_rows(k, pi);
        w.swap_cols(k, pj);
        if w.a.get(k, k).is_negative() {
            w.negate_row(k);
        }
        let pivot = w.a.get(k, k).clone();
        let mut clean = true;
        for i in k + 1..rows {
            let coef = w.a.get(i, k) / &pivot; // truncated division
            w.row_sub(i, k, &coef);
            if !w.a.get(i, k).is_zero() {
                clean = false;
            }
        }
        for j in k + 1..cols {
            let coef = w.a.get(k, j) / &pivot;
            w.col_sub(j, k, &coef);
            if !w.a.get(k, j).is_zero() {
                clean = false;
            }
        }
        if !clean {
            continue; // leftover remainders are smaller than the pivot; re-pick
        }
        // The pivot must divide the whole trailing submatrix for the
        // divisibility chain; if not, fold the offending row into row k and
        // re-reduce (the new remainder is strictly smaller than the pivot).
        let offender = (k + 1..rows)
            .find(|&i| (k + 1..cols).any(|j| !w.a.get(i, j).mod_floor(&pivot).is_zero()));
        if let Some(i) = offender {
            let minus_one = -BigInt::one();
            w.row_sub(k, i, &minus_one); // row_k += row_i
            continue;
        }
        k += 1;
    }
    let diag: Vec<BigInt> = (0..k).map(|i| w.a.get(i, i).clone()).collect();
    debug_assert!(diag.windows(2).all(|d| d[1].mod_floor(&d[0]).is_zero()));
    SnfDecomposition { p: w.p, p_inv: w.p_inv, q: w.q, diag, rows, cols }
}

/// Rank of an integer matrix (number of nonzero SNF invariant factors).
pub fn rank(m: &IntMatrix) -> usize {
    snf(m).rank()
}

/// A subgroup of `Z^ambient` stored by its canonical basis: column-style
/// Hermite normal form (pivot rows strictly increasing, pivots positive,
/// the other entries of each pivot row reduced into `[0, pivot)`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    ambient: usize,
    basis: IntMatrix,
    /// pivot row of each basis column, strictly increasing
    pivots: Vec<usize>,
}

impl Lattice {
    /// The zero subgroup of `Z^n` (empty basis).
    pub fn zero(ambient: usize) -> Self {
        Lattice { ambient, basis: IntMatrix::zeros(ambient, 0), pivots: Vec::new() }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    /// Canonical coset representative of `x` modulo this lattice: reduce the
    /// coordinate at each pivot row into `[0, pivot)` by subtracting basis
    /// columns. Two vectors reduce to the same representative exactly when
    /// they differ by a lattice element.
    pub fn reduce(&self, x: &[BigInt]) -> Result<Vec<BigInt>, IntLinError> {
        if x.len() != self.ambient {
            return Err(IntLinError::DimensionMismatch { expected: self.ambient, got: x.len() });
        }
        let mut v = x.to_vec();
        for (j, &prow) in self.pivots.iter().enumerate() {
            let coef = v[prow].div_floor(self.basis.get(prow, j));
            if coef.is_zero() {
                continue;
            }
            for (r, vr) in v.iter_mut().enumerate().skip(prow) {
                *vr -= &coef * self.basis.get(r, j);
            }
        }
        Ok(v)
    }

    /// Exact membership test.
    pub fn member(&self, x: &[BigInt]) -> Result<bool, IntLinError> {
        Ok(self.reduce(x)?.iter().all(Zero::is_zero))
    }
}

/// The lattice spanned by the columns of `m`, in canonical (HNF) form.
pub fn image_lattice(m: &IntMatrix) -> Lattice {
    let ambient = m.rows();
    let mut cols: Vec<Vec<BigInt>> = (0..m.cols()).map(|c| m.column(c)).collect();
    let mut fixed = 0usize;
    let mut pivots = Vec::new();
    for row in 0..ambient {
        loop {
            let nonzero: Vec<usize> =
                (fixed..cols.len()).filter(|&c| !cols[c][row].is_zero()).collect();
            if nonzero.is_empty() {
                break;
            }
            if nonzero.len() == 1 {
                let c = nonzero[0];
                cols.swap(fixed, c);
                if cols[fixed][row].is_negative() {
                    for v in cols[fixed].iter_mut() {
                        *v = -v.clone();
                    }
                }
                // reduce earlier pivot columns' entries at this row into [0, pivot)
                let (earlier, rest) = cols.split_at_mut(fixed);
                let pivot_col = &rest[0];
                for col in earlier.iter_mut() {
                    let coef = col[row].div_floor(&pivot_col[row]);
                    if !coef.is_zero() {
                        for (w, p) in col[row..].iter_mut().zip(&pivot_col[row..]) {
                            *w -= &coef * p;
                        }
                    }
                }
                pivots.push(row);
                fixed += 1;
                break;
            }
            // Euclidean elimination at this row: subtract multiples of the
            // column with the smallest nonzero entry from all the others.
            let &best = nonzero
                .iter()
                .min_by(|&&x, &&y| cols[x][row].magnitude().cmp(cols[y][row].magnitude()))
                .unwrap();
            let pivot_col = cols[best].clone();
            for &c in &nonzero {
                if c == best {
                    continue;
                }
                let coef = &cols[c][row] / &pivot_col[row];
                if coef.is_zero() {
                    continue;
                }
                for r in row..ambient {
                    let w = &cols[c][r] - &coef * &pivot_col[r];
                    cols[c][r] = w;
                }
            }
        }
    }
    debug_assert!(cols[fixed..].iter().all(|c| c.iter().all(Zero::is_zero)));
    let basis = IntMatrix::from_fn(ambient, fixed, |i, j| cols[j][i].clone());
    Lattice { ambient, basis, pivots }
}

/// Unique representative of `x` modulo the image of the decomposed matrix.
///
/// Writing `y' = P^-1 x`, coordinate `i` is reduced modulo `d_i` into the
/// window `floor(-d_i/2)+1 ..= floor(d_i/2)` for `i < l`, and passed through
/// unchanged for `i >= l`; the result is `P y'`. Two inputs yield the same
/// representative exactly when their difference lies in the image lattice.
pub fn minimal_rep(d: &SnfDecomposition, x: &[BigInt]) -> Result<Vec<BigInt>, IntLinError> {
    let mut y = d.p_inv.mul_vec(x)?;
    for (i, di) in d.diag.iter().enumerate() {
        let mut rem = y[i].mod_floor(di);
        if &rem * 2 > *di {
            rem -= di;
        }
        y[i] = rem;
    }
    d.p.mul_vec(&y)
}

/// Index of `H + (kZ)^n` inside `Z^n`, computed from the SNF of the augmented
/// matrix `[basis(H) | k*I]`. Always finite since `k*I` has full rank.
pub fn index_mod_k(h: &Lattice, k: u64) -> Result<BigInt, IntLinError> {
    if k == 0 {
        return Err(IntLinError::ZeroModulus);
    }
    let d = snf(&augmented_mod_k(h, k));
    debug_assert_eq!(d.rank(), h.ambient());
    Ok(d.diag.iter().product())
}

/// The augmented matrix `[basis(H) | k*I]` whose image is `H + (kZ)^n`.
pub fn augmented_mod_k(h: &Lattice, k: u64) -> IntMatrix {
    let n = h.ambient();
    let r = h.rank();
    IntMatrix::from_fn(n, r + n, |i, j| {
        if j < r {
            h.basis().get(i, j).clone()
        } else if j - r == i {
            BigInt::from(k)
        } else {
            BigInt::zero()
        }
    })
}

/// Isolator (saturation) `sqrt(H) = { z : mz in H for some m > 0 }`, together
/// with the index `[sqrt(H) : H]`, obtained by clearing the SNF invariant
/// factors: if `basis(H) = P diag(d_i) Q^-1` then `sqrt(H)` is spanned by the
/// first `rank` columns of `P`, and the index is `prod d_i`.
pub fn isolator(h: &Lattice) -> (Lattice, BigInt) {
    let d = snf(h.basis());
    let span = d.p.leading_columns(d.rank());
    let index = d.diag.iter().product();
    (image_lattice(&span), index)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn bigvec(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    /// Oracle: invariant factors via determinantal divisors. `D_k` is the gcd
    /// of all k x k minors; `d_k = D_k / D_(k-1)`. Entirely independent of the
    /// elimination in `snf`.
    fn invariant_factors_via_minors(m: &IntMatrix) -> Vec<BigInt> {
        fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            if k > n {
                return vec![];
            }
            let mut out = Vec::new();
            for last in k - 1..n {
                for mut head in combinations(last, k - 1) {
                    head.push(last);
                    out.push(head);
                }
            }
            out
        }
        let mut factors = Vec::new();
        let mut prev = BigInt::one();
        for k in 1..=m.rows().min(m.cols()) {
            let mut gcd = BigInt::zero();
            for rsel in combinations(m.rows(), k) {
                for csel in combinations(m.cols(), k) {
                    let minor =
                        IntMatrix::from_fn(k, k, |i, j| m.get(rsel[i], csel[j]).clone()).det();
                    gcd = gcd.gcd(&minor);
                }
            }
            if gcd.is_zero() {
                break;
            }
            factors.push(&gcd / &prev);
            prev = gcd;
        }
        factors
    }

    fn check_snf_contract(m: &IntMatrix, d: &SnfDecomposition) {
        // B*Q == P*D avoids inverting P; with |det P| = 1 it is equivalent
        // to P^-1 * B * Q = D.
        assert_eq!(m.mul(&d.q), d.p.mul(&d.diag_matrix()));
        assert!(d.p.is_unimodular());
        assert!(d.q.is_unimodular());
        assert_eq!(d.p.mul(&d.p_inv), IntMatrix::identity(m.rows()));
        for w in d.diag.windows(2) {
            assert!(w[1].mod_floor(&w[0]).is_zero(), "divisibility chain broken");
        }
        assert!(d.diag.iter().all(|v| v.is_positive()));
    }

    #[test]
    fn snf_of_known_matrix() {
        let m = IntMatrix::from_i64_rows(&[vec![2, 4], vec![4, 4]]);
        let d = snf(&m);
        assert_eq!(d.diag, bigvec(&[2, 4]));
        check_snf_contract(&m, &d);
    }

    #[test]
    fn snf_matches_minor_gcd_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(101);
        for _ in 0..60 {
            let rows = rng.random_range(1..=4);
            let cols = rng.random_range(1..=4);
            let m =
                IntMatrix::from_fn(rows, cols, |_, _| BigInt::from(rng.random_range(-9i64..=9)));
            let d = snf(&m);
            assert_eq!(d.diag, invariant_factors_via_minors(&m), "matrix {m:?}");
            check_snf_contract(&m, &d);
        }
    }

    #[test]
    fn snf_is_deterministic() {
        let m = IntMatrix::from_i64_rows(&[vec![6, 4, -2], vec![2, 8, 10], vec![0, -6, 12]]);
        let d1 = snf(&m);
        let d2 = snf(&m.clone());
        assert_eq!(d1, d2);
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&IntMatrix::from_i64_rows(&[vec![1, 1], vec![-1, 1]])), 2);
        assert_eq!(rank(&IntMatrix::zeros(3, 3)), 0);
        assert_eq!(rank(&IntMatrix::from_i64_rows(&[vec![2, 0], vec![0, 0]])), 1);
    }

    #[test]
    fn hnf_is_canonical_under_column_ops() {
        let mut rng = ChaCha8Rng::seed_from_u64(202);
        for _ in 0..40 {
            let n = rng.random_range(1..=4);
            let c = rng.random_range(0..=4);
            let m = IntMatrix::from_fn(n, c, |_, _| BigInt::from(rng.random_range(-9i64..=9)));
            // right-multiplying by a unimodular matrix preserves the column span
            let mut u = IntMatrix::identity(c);
            for _ in 0..8 {
                if c < 2 {
                    break;
                }
                let i = rng.random_range(0..c);
                let mut j = rng.random_range(0..c);
                if i == j {
                    j = (j + 1) % c;
                }
                let coef = BigInt::from(rng.random_range(-3i64..=3));
                for r in 0..c {
                    let v = u.get(r, j) + &coef * u.get(r, i);
                    u.set(r, j, v);
                }
            }
            assert_eq!(image_lattice(&m), image_lattice(&m.mul(&u)));
        }
    }

    #[test]
    fn hnf_shape_of_known_lattice() {
        let l = image_lattice(&IntMatrix::from_i64_rows(&[vec![2, 4], vec![4, 4]]));
        assert_eq!(l.rank(), 2);
        assert_eq!(*l.basis(), IntMatrix::from_i64_rows(&[vec![2, 0], vec![0, 4]]));
        // full-rank HNF basis is triangular; index = product of pivots = 8
        let (iso, index) = isolator(&l);
        assert_eq!(iso, image_lattice(&IntMatrix::identity(2)));
        assert_eq!(index, BigInt::from(8));
    }

    #[test]
    fn membership_examples() {
        let l = image_lattice(&IntMatrix::from_i64_rows(&[vec![1, 1], vec![-1, 1]]));
        assert!(l.member(&bigvec(&[2, 0])).unwrap());
        assert!(!l.member(&bigvec(&[1, 0])).unwrap());
        let zero = Lattice::zero(2);
        assert!(zero.member(&bigvec(&[0, 0])).unwrap());
        assert!(!zero.member(&bigvec(&[0, 3])).unwrap());
    }

    #[test]
    fn member_dimension_error() {
        let l = Lattice::zero(2);
        assert_eq!(
            l.member(&bigvec(&[1, 2, 3])).unwrap_err(),
            IntLinError::DimensionMismatch { expected: 2, got: 3 }
        );
    }

    #[test]
    fn minimal_rep_window_examples() {
        // B = diag(2,0): first coordinate reduced into {0,1}, second passes through
        let d = snf(&IntMatrix::from_i64_rows(&[vec![2, 0], vec![0, 0]]));
        assert_eq!(minimal_rep(&d, &bigvec(&[5, 3])).unwrap(), bigvec(&[1, 3]));
        // B = 2I: window {-..0..1} x {..}: (-5,-3) -> (1,1)
        let d2 = snf(&IntMatrix::from_i64_rows(&[vec![2, 0], vec![0, 2]]));
        assert_eq!(minimal_rep(&d2, &bigvec(&[-5, -3])).unwrap(), bigvec(&[1, 1]));
        // even modulus keeps +d/2 and excludes -d/2: residues of 4Z are -1..=2
        let d3 = snf(&IntMatrix::from_i64_rows(&[vec![4]]));
        let reps: Vec<BigInt> =
            (-6..6).map(|x| minimal_rep(&d3, &[BigInt::from(x)]).unwrap()[0].clone()).collect();
        for r in &reps {
            assert!(*r >= BigInt::from(-1) && *r <= BigInt::from(2));
        }
    }

    #[test]
    fn minimal_rep_agrees_with_membership() {
        let mut rng = ChaCha8Rng::seed_from_u64(303);
        for _ in 0..40 {
            let n = rng.random_range(1..=4);
            let m = IntMatrix::from_fn(n, n, |_, _| BigInt::from(rng.random_range(-6i64..=6)));
            let d = snf(&m);
            let image = image_lattice(&m);
            let sample = |rng: &mut ChaCha8Rng| -> Vec<BigInt> {
                (0..n).map(|_| BigInt::from(rng.random_range(-40i64..=40))).collect()
            };
            for _ in 0..20 {
                let x = sample(&mut rng);
                let y = sample(&mut rng);
                let rx = minimal_rep(&d, &x).unwrap();
                let ry = minimal_rep(&d, &y).unwrap();
                // reduction stays in the coset and is idempotent
                let diff: Vec<BigInt> = x.iter().zip(&rx).map(|(a, b)| a - b).collect();
                assert!(image.member(&diff).unwrap());
                assert_eq!(minimal_rep(&d, &rx).unwrap(), rx);
                // same representative exactly for lattice-equivalent inputs
                let xy: Vec<BigInt> = x.iter().zip(&y).map(|(a, b)| a - b).collect();
                assert_eq!(rx == ry, image.member(&xy).unwrap());
            }
        }
    }

    #[test]
    fn index_mod_k_examples() {
        // H = Z^3: adding (5Z)^3 changes nothing
        let full = image_lattice(&IntMatrix::identity(3));
        assert_eq!(index_mod_k(&full, 5).unwrap(), BigInt::one());
        // H = 2Z x {0} in Z^2, k = 4: index of 2Z x 4Z is 8
        let h = image_lattice(&IntMatrix::from_i64_rows(&[vec![2], vec![0]]));
        assert_eq!(index_mod_k(&h, 4).unwrap(), BigInt::from(8));
        assert_eq!(index_mod_k(&h, 0).unwrap_err(), IntLinError::ZeroModulus);
    }

    #[test]
    fn index_mod_k_matches_closed_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(404);
        for _ in 0..60 {
            let n = rng.random_range(1..=4);
            let c = rng.random_range(0..=n);
            let m = IntMatrix::from_fn(n, c, |_, _| BigInt::from(rng.random_range(-8i64..=8)));
            let h = image_lattice(&m);
            let d = snf(h.basis());
            let k = rng.random_range(1u64..=50);
            let closed: BigInt =
                d.diag.iter().map(|di| di.gcd(&BigInt::from(k))).product::<BigInt>()
                    * BigInt::from(k).pow((n - d.rank()) as u32);
            assert_eq!(index_mod_k(&h, k).unwrap(), closed);
        }
    }

    #[test]
    fn isolator_examples() {
        let h = image_lattice(&IntMatrix::from_i64_rows(&[vec![2], vec![0]]));
        let (iso, index) = isolator(&h);
        assert_eq!(*iso.basis(), IntMatrix::from_i64_rows(&[vec![1], vec![0]]));
        assert_eq!(index, BigInt::from(2));
        // isolators are saturated: taking the isolator twice is idempotent
        let (iso2, index2) = isolator(&iso);
        assert_eq!(iso2, iso);
        assert_eq!(index2, BigInt::one());
        // zero lattice
        let (isoz, indexz) = isolator(&Lattice::zero(3));
        assert_eq!(isoz.rank(), 0);
        assert_eq!(indexz, BigInt::one());
    }

    #[test]
    fn isolator_contains_original_with_matching_index() {
        let mut rng = ChaCha8Rng::seed_from_u64(505);
        for _ in 0..30 {
            let n = rng.random_range(1..=4);
            let c = rng.random_range(0..=n);
            let m = IntMatrix::from_fn(n, c, |_, _| BigInt::from(rng.random_range(-7i64..=7)));
            let h = image_lattice(&m);
            let (iso, index) = isolator(&h);
            assert_eq!(iso.rank(), h.rank());
            for j in 0..h.rank() {
                assert!(iso.member(&h.basis().column(j)).unwrap());
            }
            let d = snf(h.basis());
            assert_eq!(index, d.diag.iter().product::<BigInt>());
        }
    }
}

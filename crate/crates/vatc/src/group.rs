//! Finitely generated virtually abelian groups presented as extensions of a
//! finite group by the lattice `N = Z^n`.
//!
//! An element is a pair `(x, a)` with `x` in `Z^n` and `a` the index of a
//! coset representative; it stands for the product `i(x) * rep_a`. The data
//! of the extension are the coset multiplication table `m(a,b)`, the cocycle
//! `t(a,b)` (defined by `rep_a * rep_b = i(t(a,b)) * rep_m(a,b)`), and the
//! conjugation action `M_a` of each representative on the lattice. The
//! multiplication law is
//!
//! ```text
//! (x, a) * (y, b) = (x + M_a y + t(a,b), m(a,b))
//! ```
//!
//! Coset index 0 is always the identity coset with `M_0 = I` and vanishing
//! cocycle; `validate` checks all of this plus the group axioms.
//!
//! Element coordinates are `i64`: at the scales this crate enumerates, all
//! coordinates fit comfortably, and every arithmetic step is checked so an
//! overflow fails loudly instead of wrapping.

use crate::intlin::IntMatrix;
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// Structural problems that make group data unusable (shape mismatches,
/// out-of-range indices). Algebraic problems are reported by `validate`.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroupDataError {
    #[error("group must have at least one coset")]
    NoCosets,
    #[error("coset labels must be distinct (label {0:?} repeats)")]
    DuplicateLabel(String),
    #[error("mult table must be {m}x{m}, got row {row} of length {len}")]
    MultShape { m: usize, row: usize, len: usize },
    #[error("mult[{a}][{b}] = {value} is not a coset index (m = {m})")]
    MultRange { a: usize, b: usize, value: usize, m: usize },
    #[error("cocycle must be {m}x{m} vectors of length {n}; entry [{a}][{b}] has length {len}")]
    CocycleShape { m: usize, n: usize, a: usize, b: usize, len: usize },
    #[error("action must hold {m} matrices of size {n}x{n}; matrix {a} is malformed")]
    ActionShape { m: usize, n: usize, a: usize },
    #[error("rep_image must have {m} entries, got {len}")]
    RepImageLen { m: usize, len: usize },
    #[error("rep_image[{a}] is malformed: vector length or coset index out of range")]
    RepImageEntry { a: usize },
    #[error("endomorphism matrix must be {n}x{n}")]
    EndoMatrixShape { n: usize },
}

/// Small square integer matrix used in the element-arithmetic hot path.
/// All products are accumulated in `i128` and converted back with a loud
/// failure on overflow.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat64 {
    n: usize,
    entries: Vec<i64>,
}

impl Mat64 {
    pub fn identity(n: usize) -> Self {
        let mut entries = vec![0i64; n * n];
        for i in 0..n {
            entries[i * n + i] = 1;
        }
        Mat64 { n, entries }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Option<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return None;
        }
        Some(Mat64 { n, entries: rows.iter().flatten().copied().collect() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.get(i, j)).collect()).collect()
    }

    pub fn mul_vec(&self, x: &[i64]) -> Vec<i64> {
        assert_eq!(x.len(), self.n);
        (0..self.n)
            .map(|i| {
                let acc: i128 = (0..self.n).map(|j| self.get(i, j) as i128 * x[j] as i128).sum();
                i64::try_from(acc).expect("coordinate overflow in lattice action")
            })
            .collect()
    }

    pub fn mul(&self, other: &Mat64) -> Mat64 {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let acc: i128 =
                    (0..n).map(|k| self.get(i, k) as i128 * other.get(k, j) as i128).sum();
                entries.push(i64::try_from(acc).expect("coordinate overflow in matrix product"));
            }
        }
        Mat64 { n, entries }
    }

    pub fn to_int_matrix(&self) -> IntMatrix {
        IntMatrix::from_fn(self.n, self.n, |i, j| self.get(i, j).into())
    }
}

/// A group element `(x, a) = i(x) * rep_a`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupElement {
    pub vector: Vec<i64>,
    pub coset: usize,
}

impl GroupElement {
    pub fn new(vector: Vec<i64>, coset: usize) -> Self {
        GroupElement { vector, coset }
    }

    /// Deterministic sort key: coset index first, then the vector.
    pub fn sort_key(&self) -> (usize, Vec<i64>) {
        (self.coset, self.vector.clone())
    }
}

/// Extension data describing a finitely generated virtually abelian group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VAGroupData {
    n: usize,
    cosets: Vec<String>,
    mult: Vec<Vec<usize>>,
    cocycle: Vec<Vec<Vec<i64>>>,
    action: Vec<Mat64>,
}

impl VAGroupData {
    /// Build group data, checking shapes and index ranges only. Whether the
    /// data satisfies the group axioms is the business of [`Self::validate`].
    pub fn new(
        n: usize,
        cosets: Vec<String>,
        mult: Vec<Vec<usize>>,
        cocycle: Vec<Vec<Vec<i64>>>,
        action: Vec<Vec<Vec<i64>>>,
    ) -> Result<Self, GroupDataError> {
        let m = cosets.len();
        if m == 0 {
            return Err(GroupDataError::NoCosets);
        }
        for (i, label) in cosets.iter().enumerate() {
            if cosets[..i].contains(label) {
                return Err(GroupDataError::DuplicateLabel(label.clone()));
            }
        }
        if mult.len() != m {
            return Err(GroupDataError::MultShape { m, row: m, len: mult.len() });
        }
        for (a, row) in mult.iter().enumerate() {
            if row.len() != m {
                return Err(GroupDataError::MultShape { m, row: a, len: row.len() });
            }
            for (b, &v) in row.iter().enumerate() {
                if v >= m {
                    return Err(GroupDataError::MultRange { a, b, value: v, m });
                }
            }
        }
        if cocycle.len() != m {
            return Err(GroupDataError::CocycleShape { m, n, a: m, b: 0, len: cocycle.len() });
        }
        for (a, row) in cocycle.iter().enumerate() {
            if row.len() != m {
                return Err(GroupDataError::CocycleShape { m, n, a, b: m, len: row.len() });
            }
            for (b, v) in row.iter().enumerate() {
                if v.len() != n {
                    return Err(GroupDataError::CocycleShape { m, n, a, b, len: v.len() });
                }
            }
        }
        if action.len() != m {
            return Err(GroupDataError::ActionShape { m, n, a: m });
        }
        let mut mats = Vec::with_capacity(m);
        for (a, rows) in action.iter().enumerate() {
            let mat = (rows.len() == n)
                .then(|| Mat64::from_rows(rows))
                .flatten()
                .ok_or(GroupDataError::ActionShape { m, n, a })?;
            mats.push(mat);
        }
        Ok(VAGroupData { n, cosets, mult, cocycle, action: mats })
    }

    pub fn lattice_rank(&self) -> usize {
        self.n
    }

    pub fn coset_count(&self) -> usize {
        self.cosets.len()
    }

    pub fn coset_labels(&self) -> &[String] {
        &self.cosets
    }

    pub fn mult_table(&self) -> &[Vec<usize>] {
        &self.mult
    }

    pub fn cocycle(&self, a: usize, b: usize) -> &[i64] {
        &self.cocycle[a][b]
    }

    pub fn action(&self, a: usize) -> &Mat64 {
        &self.action[a]
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement::new(vec![0; self.n], 0)
    }

    /// The representative `(0, a)` of coset `a`.
    pub fn coset_rep(&self, a: usize) -> GroupElement {
        GroupElement::new(vec![0; self.n], a)
    }

    /// `(x, a) * (y, b) = (x + M_a y + t(a,b), m(a,b))`
    pub fn multiply(&self, g: &GroupElement, h: &GroupElement) -> GroupElement {
        let act = self.action[g.coset].mul_vec(&h.vector);
        let t = &self.cocycle[g.coset][h.coset];
        let vector = (0..self.n)
            .map(|i| {
                let acc = g.vector[i] as i128 + act[i] as i128 + t[i] as i128;
                i64::try_from(acc).expect("coordinate overflow in group multiplication")
            })
            .collect();
        GroupElement::new(vector, self.mult[g.coset][h.coset])
    }

    /// Two-sided inverse. Uses the coset-inverse lookup plus the identity
    /// `M_(a^-1) = M_a^-1`, so no rational arithmetic is needed.
    pub fn inverse(&self, g: &GroupElement) -> GroupElement {
        let a = g.coset;
        let b = (0..self.coset_count())
            .find(|&b| self.mult[a][b] == 0)
            .expect("coset table has no inverse; validate the group data first");
        let t = &self.cocycle[a][b];
        let neg: Vec<i64> = (0..self.n).map(|i| -(g.vector[i] + t[i])).collect();
        GroupElement::new(self.action[b].mul_vec(&neg), b)
    }

    /// `e_1, ..., e_n` in the identity coset followed by the nontrivial coset
    /// representatives: a generating set for the whole group.
    pub fn standard_generators(&self) -> Vec<GroupElement> {
        let mut gens = Vec::new();
        for i in 0..self.n {
            let mut v = vec![0; self.n];
            v[i] = 1;
            gens.push(GroupElement::new(v, 0));
        }
        for a in 1..self.coset_count() {
            gens.push(self.coset_rep(a));
        }
        gens
    }

    /// Check every defining identity of the extension data. The report lists
    /// each violated identity with the indices that witness it, in a fixed
    /// check order, so the first entry is the first violation found.
    pub fn validate(&self) -> ValidationReport {
        let m = self.coset_count();
        let mut issues = Vec::new();
        for a in 0..m {
            if self.mult[0][a] != a || self.mult[a][0] != a {
                issues.push(ValidationIssue::IdentityMultiplication { a });
            }
            if self.cocycle[0][a].iter().any(|&v| v != 0)
                || self.cocycle[a][0].iter().any(|&v| v != 0)
            {
                issues.push(ValidationIssue::IdentityCocycle { a });
            }
        }
        if self.action[0] != Mat64::identity(self.n) {
            issues.push(ValidationIssue::IdentityAction);
        }
        for a in 0..m {
            let mut row_seen = vec![false; m];
            let mut col_seen = vec![false; m];
            for b in 0..m {
                row_seen[self.mult[a][b]] = true;
                col_seen[self.mult[b][a]] = true;
            }
            if !row_seen.iter().all(|&s| s) || !col_seen.iter().all(|&s| s) {
                issues.push(ValidationIssue::MultNotPermutation { a });
            }
            if !(0..m).any(|b| self.mult[a][b] == 0 && self.mult[b][a] == 0) {
                issues.push(ValidationIssue::MissingInverse { a });
            }
        }
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    if self.mult[self.mult[a][b]][c] != self.mult[a][self.mult[b][c]] {
                        issues.push(ValidationIssue::Associativity { a, b, c });
                    }
                }
            }
        }
        for (a, mat) in self.action.iter().enumerate() {
            if !mat.to_int_matrix().is_unimodular() {
                issues.push(ValidationIssue::ActionNotUnimodular { a });
            }
        }
        for a in 0..m {
            for b in 0..m {
                if self.action[a].mul(&self.action[b]) != self.action[self.mult[a][b]] {
                    issues.push(ValidationIssue::ActionCompatibility { a, b });
                }
            }
        }
        // cocycle identity: t(a,b) + t(m(a,b),c) = M_a t(b,c) + t(a, m(b,c))
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    let lhs: Vec<i64> = (0..self.n)
                        .map(|i| self.cocycle[a][b][i] + self.cocycle[self.mult[a][b]][c][i])
                        .collect();
                    let act = self.action[a].mul_vec(&self.cocycle[b][c]);
                    let rhs: Vec<i64> =
                        (0..self.n).map(|i| act[i] + self.cocycle[a][self.mult[b][c]][i]).collect();
                    if lhs != rhs {
                        issues.push(ValidationIssue::CocycleIdentity { a, b, c });
                    }
                }
            }
        }
        ValidationReport { issues }
    }

    /// Render an element as `x1,...,xn;label`.
    pub fn format_element(&self, g: &GroupElement) -> String {
        let coords: Vec<String> = g.vector.iter().map(|v| v.to_string()).collect();
        format!("{};{}", coords.join(","), self.cosets[g.coset])
    }
}

/// A single violated identity, with the indices that witness it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationIssue {
    #[error("mult[0][{a}] or mult[{a}][0] differs from {a}; coset 0 must be the identity")]
    IdentityMultiplication { a: usize },
    #[error(
        "cocycle[0][{a}] or cocycle[{a}][0] is nonzero; the identity coset must act trivially"
    )]
    IdentityCocycle { a: usize },
    #[error("action[0] is not the identity matrix")]
    IdentityAction,
    #[error("mult row/column {a} is not a permutation of the cosets")]
    MultNotPermutation { a: usize },
    #[error("coset {a} has no two-sided inverse in the mult table")]
    MissingInverse { a: usize },
    #[error("mult table is not associative at ({a},{b},{c})")]
    Associativity { a: usize, b: usize, c: usize },
    #[error("action[{a}] is not unimodular")]
    ActionNotUnimodular { a: usize },
    #[error("action[{a}]*action[{b}] != action[mult[{a}][{b}]]")]
    ActionCompatibility { a: usize, b: usize },
    #[error("cocycle identity fails at ({a},{b},{c})")]
    CocycleIdentity { a: usize, b: usize, c: usize },
    #[error("rep_image[0] is not the identity element")]
    EndoIdentityImage,
    #[error("matrix does not intertwine the actions at coset {a}: Phi*M_a != M_phi(a)*Phi")]
    EndoIntertwining { a: usize },
    #[error("endomorphism is not multiplicative on representatives at ({a},{b})")]
    EndoMultiplicativity { a: usize, b: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub issues: Vec<ValidationIssue>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.issues.is_empty() {
            write!(f, "valid")
        } else {
            for (i, issue) in self.issues.iter().enumerate() {
                if i > 0 {
                    writeln!(f)?;
                }
                write!(f, "{issue}")?;
            }
            Ok(())
        }
    }
}

/// An endomorphism of the group that maps the lattice into itself: a matrix
/// `Phi` (the restriction to `N`) plus the image `phi(rep_a)` of every coset
/// representative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Endomorphism {
    matrix: Mat64,
    rep_image: Vec<GroupElement>,
}

impl Endomorphism {
    pub fn new(
        group: &VAGroupData,
        matrix: Vec<Vec<i64>>,
        rep_image: Vec<GroupElement>,
    ) -> Result<Self, GroupDataError> {
        let n = group.lattice_rank();
        let m = group.coset_count();
        let mat = (matrix.len() == n)
            .then(|| Mat64::from_rows(&matrix))
            .flatten()
            .filter(|mat| mat.n() == n)
            .ok_or(GroupDataError::EndoMatrixShape { n })?;
        if rep_image.len() != m {
            return Err(GroupDataError::RepImageLen { m, len: rep_image.len() });
        }
        for (a, g) in rep_image.iter().enumerate() {
            if g.vector.len() != n || g.coset >= m {
                return Err(GroupDataError::RepImageEntry { a });
            }
        }
        Ok(Endomorphism { matrix: mat, rep_image })
    }

    pub fn matrix(&self) -> &Mat64 {
        &self.matrix
    }

    pub fn rep_image(&self, a: usize) -> &GroupElement {
        &self.rep_image[a]
    }

    pub fn rep_images(&self) -> &[GroupElement] {
        &self.rep_image
    }

    /// Coset of `phi(rep_a)`.
    pub fn coset_image(&self, a: usize) -> usize {
        self.rep_image[a].coset
    }

    /// `phi((x, a)) = (Phi x, 0) * rep_image[a]`
    pub fn apply(&self, group: &VAGroupData, g: &GroupElement) -> GroupElement {
        let lattice_part = GroupElement::new(self.matrix.mul_vec(&g.vector), 0);
        group.multiply(&lattice_part, &self.rep_image[g.coset])
    }

    /// Check that the data defines a homomorphism: `rep_image[0]` is the
    /// identity, `Phi` intertwines the actions (`Phi M_a = M_phi(a) Phi`),
    /// and the representative images are multiplicative against the cocycle
    /// (`phi(rep_a) phi(rep_b) = i(Phi t(a,b)) * phi(rep_m(a,b))`).
    pub fn validate(&self, group: &VAGroupData) -> ValidationReport {
        let m = group.coset_count();
        let mut issues = Vec::new();
        if self.rep_image[0] != group.identity() {
            issues.push(ValidationIssue::EndoIdentityImage);
        }
        for a in 0..m {
            let lhs = self.matrix.mul(group.action(a));
            let rhs = group.action(self.rep_image[a].coset).mul(&self.matrix);
            if lhs != rhs {
                issues.push(ValidationIssue::EndoIntertwining { a });
            }
        }
        for a in 0..m {
            for b in 0..m {
                let lhs = group.multiply(&self.rep_image[a], &self.rep_image[b]);
                let t_image = GroupElement::new(self.matrix.mul_vec(group.cocycle(a, b)), 0);
                let rhs = group.multiply(&t_image, &self.rep_image[group.mult_table()[a][b]]);
                if lhs != rhs {
                    issues.push(ValidationIssue::EndoMultiplicativity { a, b });
                }
            }
        }
        ValidationReport { issues }
    }
}

/// `z * g * phi(z)^-1`
pub fn twisted_conjugate(
    group: &VAGroupData,
    endo: &Endomorphism,
    z: &GroupElement,
    g: &GroupElement,
) -> GroupElement {
    let zg = group.multiply(z, g);
    group.multiply(&zg, &group.inverse(&endo.apply(group, z)))
}

/// Per-coset twisting data for the class machinery.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistData {
    pub coset: usize,
    /// `B_a = I - M_a * Phi`; twisted conjugation by a lattice element `w`
    /// moves the vector part of a coset-`a` element by `B_a w`.
    pub twisted_matrix: Mat64,
    /// `E_a`: cosets `c` whose twisted conjugation maps coset `a` to itself.
    pub members: Vec<usize>,
    /// `s_a(c) = M_a * vec(phi^a(c))` with `phi^a(c) = phi(c) a^-1 c^-1 a`,
    /// aligned with `members`.
    pub shifts: Vec<Vec<i64>>,
}

/// Compute `E_a`, the twisted matrix, and the shift vectors for coset `a`.
pub fn twist_data(group: &VAGroupData, endo: &Endomorphism, a: usize) -> TwistData {
    let n = group.lattice_rank();
    let id = Mat64::identity(n);
    let ma_phi = group.action(a).mul(endo.matrix());
    let rows: Vec<Vec<i64>> =
        (0..n).map(|i| (0..n).map(|j| id.get(i, j) - ma_phi.get(i, j)).collect()).collect();
    let twisted_matrix = Mat64::from_rows(&rows).unwrap();

    let rep_a = group.coset_rep(a);
    let mut members = Vec::new();
    let mut shifts = Vec::new();
    for c in 0..group.coset_count() {
        let rep_c = group.coset_rep(c);
        if twisted_conjugate(group, endo, &rep_c, &rep_a).coset != a {
            continue;
        }
        // phi^a(c) = phi(c) a^-1 c^-1 a, which lands in the lattice for c in E_a
        let phi_c = endo.apply(group, &rep_c);
        let p = group.multiply(
            &group
                .multiply(&group.multiply(&phi_c, &group.inverse(&rep_a)), &group.inverse(&rep_c)),
            &rep_a,
        );
        assert_eq!(p.coset, 0, "phi^a(c) left the lattice: twisted conjugacy logic bug");
        members.push(c);
        shifts.push(group.action(a).mul_vec(&p.vector));
    }
    TwistData { coset: a, twisted_matrix, members, shifts }
}

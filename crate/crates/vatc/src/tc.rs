//! Twisted conjugacy classes: canonical forms, Reidemeister numbers, and
//! Reidemeister numbers of the congruence quotients `G / (kZ)^n`.
//!
//! For `g = (x, a)` and a twisting endomorphism `phi`, every conjugator
//! `z = (w, c)` factors as `(w, 0) * (0, c)`, so the class of `g` is the
//! finite union over cosets `c` of the sets
//!
//! ```text
//! { (x_c + B_(a_c) w, a_c) : w in Z^n },   (x_c, a_c) = (0,c) g phi((0,c))^-1
//! ```
//!
//! with `B_a = I - M_a Phi`. Each set is a coset of the image lattice of
//! `B_(a_c)`, so membership is decided by exact lattice arithmetic, and the
//! lexicographically least pair (coset index, minimal residue) over all `c`
//! is a canonical form for the whole class. Replacing the image lattice by
//! `Image(B_a) + (kZ)^n` (via the augmented matrix `[B_a | kI]`) yields the
//! analogous canonical form in the quotient `G / (kZ)^n`.

use crate::group::{twisted_conjugate, Endomorphism, GroupElement, VAGroupData};
use crate::intlin::{
    augmented_mod_k, image_lattice, minimal_rep, snf, IntMatrix, Lattice, SnfDecomposition,
};
use num_bigint::BigInt;
use serde::Serialize;
use std::collections::HashSet;
use std::fmt;
use thiserror::Error;

/// Refuse quotient enumerations with more than this many elements.
pub const QUOTIENT_GUARD: u128 = 10_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TcError {
    #[error("modulus k must be >= 1")]
    ZeroModulus,
    #[error("quotient has {needed} elements, refusing (guard: {guard})")]
    ResourceGuard { needed: u128, guard: u128 },
}

/// The lattice data attached to one coset: `B_a = I - M_a Phi`, its SNF, and
/// its image lattice. The rank of `B_a` controls how fast classes meeting
/// coset `a` grow.
#[derive(Debug, Clone)]
pub struct CosetLattice {
    pub coset: usize,
    pub matrix: IntMatrix,
    pub snf: SnfDecomposition,
    pub image: Lattice,
    pub rank: usize,
}

/// Canonical form of a twisted conjugacy class: the least (coset index,
/// minimal residue) pair over the class. Two elements are twisted conjugate
/// exactly when their canonical forms are equal, and `(residue, coset)` is
/// itself a member of the class.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ClassCanonicalForm {
    pub coset: usize,
    pub residue: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReidemeisterCount {
    Finite(u64),
    Infinite,
}

impl ReidemeisterCount {
    pub fn as_finite(&self) -> Option<u64> {
        match self {
            ReidemeisterCount::Finite(v) => Some(*v),
            ReidemeisterCount::Infinite => None,
        }
    }
}

impl fmt::Display for ReidemeisterCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReidemeisterCount::Finite(v) => write!(f, "{v}"),
            ReidemeisterCount::Infinite => write!(f, "infinite"),
        }
    }
}

/// Support and growth degree of a single class: the cosets the class
/// intersects and the maximum coset rank among them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassSupport {
    pub cosets: Vec<usize>,
    pub degree: usize,
}

/// The polynomial degrees predicted from the coset ranks alone: the twisted
/// class counting series grows like `r^(n - min rank)`, the quotient series
/// like `k^(n - min rank)`, and the ball like `r^n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreePrediction {
    pub coset_ranks: Vec<usize>,
    pub fr_degree: usize,
    pub fq_degree: usize,
    pub ball_degree: usize,
}

/// A group together with a twisting endomorphism and the per-coset lattice
/// data, ready to canonicalize elements. Inputs are assumed validated.
#[derive(Debug, Clone)]
pub struct TwistedConjugacy {
    group: VAGroupData,
    endo: Endomorphism,
    lattices: Vec<CosetLattice>,
}

fn big_vec(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn small_vec(v: &[BigInt]) -> Vec<i64> {
    v.iter().map(|x| i64::try_from(x).expect("canonical residue exceeds 64-bit range")).collect()
}

impl TwistedConjugacy {
    pub fn new(group: &VAGroupData, endo: &Endomorphism) -> Self {
        let n = group.lattice_rank();
        let id = IntMatrix::identity(n);
        let lattices = (0..group.coset_count())
            .map(|a| {
                let ma_phi = group.action(a).mul(endo.matrix()).to_int_matrix();
                let matrix = IntMatrix::from_fn(n, n, |i, j| id.get(i, j) - ma_phi.get(i, j));
                let dec = snf(&matrix);
                let image = image_lattice(&matrix);
                let rank = dec.rank();
                CosetLattice { coset: a, matrix, snf: dec, image, rank }
            })
            .collect();
        TwistedConjugacy { group: group.clone(), endo: endo.clone(), lattices }
    }

    pub fn group(&self) -> &VAGroupData {
        &self.group
    }

    pub fn endo(&self) -> &Endomorphism {
        &self.endo
    }

    pub fn coset_lattices(&self) -> &[CosetLattice] {
        &self.lattices
    }

    /// The conjugates `(0,c) g phi((0,c))^-1` over all cosets `c`. Every
    /// member of the class of `g` is a lattice-twist of one of these.
    fn coset_conjugates(&self, g: &GroupElement) -> Vec<GroupElement> {
        (0..self.group.coset_count())
            .map(|c| twisted_conjugate(&self.group, &self.endo, &self.group.coset_rep(c), g))
            .collect()
    }

    /// Canonical form of the class of `g`.
    pub fn canonical_form(&self, g: &GroupElement) -> ClassCanonicalForm {
        self.coset_conjugates(g)
            .into_iter()
            .map(|h| {
                let red = minimal_rep(&self.lattices[h.coset].snf, &big_vec(&h.vector))
                    .expect("twisted matrix and element dimensions agree");
                ClassCanonicalForm { coset: h.coset, residue: small_vec(&red) }
            })
            .min()
            .expect("at least one coset")
    }

    pub fn are_twisted_conjugate(&self, g: &GroupElement, h: &GroupElement) -> bool {
        self.canonical_form(g) == self.canonical_form(h)
    }

    /// Which cosets the class of `g` intersects, and the growth degree of the
    /// class: the maximum coset rank over the support.
    pub fn class_support_and_degree(&self, g: &GroupElement) -> ClassSupport {
        let mut cosets: Vec<usize> =
            self.coset_conjugates(g).into_iter().map(|h| h.coset).collect();
        cosets.sort_unstable();
        cosets.dedup();
        let degree = cosets.iter().map(|&a| self.lattices[a].rank).max().unwrap_or(0);
        ClassSupport { cosets, degree }
    }

    pub fn predicted_degrees(&self) -> DegreePrediction {
        let n = self.group.lattice_rank();
        let coset_ranks: Vec<usize> = self.lattices.iter().map(|l| l.rank).collect();
        let min_rank = *coset_ranks.iter().min().expect("at least one coset");
        DegreePrediction {
            coset_ranks,
            fr_degree: n - min_rank,
            fq_degree: n - min_rank,
            ball_degree: n,
        }
    }

    /// The Reidemeister number: infinite exactly when some coset matrix
    /// `B_a` is rank deficient; otherwise count distinct canonical forms over
    /// one residue representative per `Image(B_a)`-coset for every `a`.
    pub fn reidemeister_number(&self) -> ReidemeisterCount {
        let n = self.group.lattice_rank();
        if self.lattices.iter().any(|l| l.rank < n) {
            return ReidemeisterCount::Infinite;
        }
        let mut forms: HashSet<ClassCanonicalForm> = HashSet::new();
        for lat in &self.lattices {
            for vector in ResidueIter::new(&lat.snf) {
                forms.insert(self.canonical_form(&GroupElement::new(vector, lat.coset)));
            }
        }
        ReidemeisterCount::Finite(forms.len() as u64)
    }

    /// SNF of `[B_a | kI]` per coset: the augmented image is
    /// `Image(B_a) + (kZ)^n`, always of full rank.
    fn quotient_context(&self, k: u64) -> Result<Vec<SnfDecomposition>, TcError> {
        if k == 0 {
            return Err(TcError::ZeroModulus);
        }
        Ok(self.lattices.iter().map(|l| snf(&augmented_mod_k(&l.image, k))).collect())
    }

    fn canonical_form_in_quotient(
        &self,
        g: &GroupElement,
        ctx: &[SnfDecomposition],
    ) -> ClassCanonicalForm {
        self.coset_conjugates(g)
            .into_iter()
            .map(|h| {
                let red = minimal_rep(&ctx[h.coset], &big_vec(&h.vector))
                    .expect("augmented matrix and element dimensions agree");
                ClassCanonicalForm { coset: h.coset, residue: small_vec(&red) }
            })
            .min()
            .expect("at least one coset")
    }

    /// Canonical form of the image of `g` in `G / (kZ)^n`: invariant under
    /// twisted conjugation and under translating any coordinate by `k`.
    pub fn quotient_canonical_form(
        &self,
        k: u64,
        g: &GroupElement,
    ) -> Result<ClassCanonicalForm, TcError> {
        let ctx = self.quotient_context(k)?;
        Ok(self.canonical_form_in_quotient(g, &ctx))
    }

    /// Errors when the quotient `G / (kZ)^n` is too large to enumerate
    /// (`k^n * m` elements beyond [`QUOTIENT_GUARD`]). Monotone in `k`, so
    /// checking the largest intended modulus up front covers a whole sweep.
    pub fn quotient_guard(&self, k: u64) -> Result<(), TcError> {
        let n = self.group.lattice_rank() as u32;
        let m = self.group.coset_count() as u128;
        let needed = (k as u128).checked_pow(n).and_then(|v| v.checked_mul(m));
        match needed {
            Some(v) if v <= QUOTIENT_GUARD => Ok(()),
            _ => Err(TcError::ResourceGuard {
                needed: needed.unwrap_or(u128::MAX),
                guard: QUOTIENT_GUARD,
            }),
        }
    }

    /// Reidemeister number of the induced endomorphism on `G / (kZ)^n`,
    /// counting distinct quotient canonical forms over one representative per
    /// `(Image(B_a) + kZ^n)`-residue — `O(index)` work per coset rather than
    /// `O(k^n)`.
    pub fn quotient_reidemeister(&self, k: u64) -> Result<u64, TcError> {
        self.quotient_guard(k)?;
        let ctx = self.quotient_context(k)?;
        let mut forms: HashSet<ClassCanonicalForm> = HashSet::new();
        for (lat, dec) in self.lattices.iter().zip(&ctx) {
            for vector in ResidueIter::new(dec) {
                forms.insert(
                    self.canonical_form_in_quotient(&GroupElement::new(vector, lat.coset), &ctx),
                );
            }
        }
        Ok(forms.len() as u64)
    }

    /// Independent oracle for `quotient_reidemeister`: enumerate all
    /// `k^n * m` elements of the quotient and close them under twisted
    /// conjugation by the standard generators with a union-find. Twists
    /// compose (`tw_z . tw_w = tw_(zw)`), so closing under a generating set
    /// of the finite quotient reaches the full orbit of every element.
    pub fn quotient_reidemeister_bruteforce(&self, k: u64) -> Result<u64, TcError> {
        if k == 0 {
            return Err(TcError::ZeroModulus);
        }
        self.quotient_guard(k)?;
        let n = self.group.lattice_rank();
        let m = self.group.coset_count();
        let kn = (k as usize).pow(n as u32);
        let total = kn * m;
        let ki = k as i64;

        let decode = |idx: usize| -> GroupElement {
            let coset = idx / kn;
            let mut rest = idx % kn;
            let mut vector = vec![0i64; n];
            for slot in vector.iter_mut() {
                *slot = (rest % k as usize) as i64;
                rest /= k as usize;
            }
            GroupElement::new(vector, coset)
        };
        let encode = |g: &GroupElement| -> usize {
            let mut idx = 0usize;
            for &v in g.vector.iter().rev() {
                idx = idx * k as usize + v.rem_euclid(ki) as usize;
            }
            g.coset * kn + idx
        };

        let generators = self.group.standard_generators();
        let mut uf = UnionFind::new(total);
        for idx in 0..total {
            let g = decode(idx);
            for s in &generators {
                let h = twisted_conjugate(&self.group, &self.endo, s, &g);
                uf.union(idx, encode(&h));
            }
        }
        Ok(uf.component_count() as u64)
    }
}

/// Streams one representative of every residue class of `Z^n` modulo the
/// image of a full-rank decomposed matrix: the coordinates in the `P`-basis
/// run over the minimal windows `floor(-d_i/2)+1 ..= floor(d_i/2)`.
struct ResidueIter {
    p_cols: Vec<Vec<i64>>,
    windows: Vec<(i64, i64)>,
    odometer: Option<Vec<i64>>,
}

impl ResidueIter {
    fn new(dec: &SnfDecomposition) -> Self {
        let n = dec.p.rows();
        assert_eq!(dec.rank(), n, "residue enumeration needs a full-rank lattice");
        let p_cols: Vec<Vec<i64>> = (0..n)
            .map(|j| {
                (0..n)
                    .map(|i| {
                        i64::try_from(dec.p.get(i, j)).expect("transform entry exceeds 64-bit")
                    })
                    .collect()
            })
            .collect();
        let windows: Vec<(i64, i64)> = dec
            .diag
            .iter()
            .map(|d| {
                let d = i64::try_from(d).expect("invariant factor exceeds 64-bit");
                let hi = d.div_euclid(2);
                (hi - d + 1, hi)
            })
            .collect();
        let odometer = Some(windows.iter().map(|&(lo, _)| lo).collect());
        ResidueIter { p_cols, windows, odometer }
    }
}

impl Iterator for ResidueIter {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        let current = self.odometer.as_ref()?.clone();
        let n = self.windows.len();
        let vector: Vec<i64> = (0..n)
            .map(|i| {
                let acc: i128 =
                    (0..n).map(|j| self.p_cols[j][i] as i128 * current[j] as i128).sum();
                i64::try_from(acc).expect("residue representative exceeds 64-bit")
            })
            .collect();
        // advance the odometer
        let mut digits = current;
        let mut pos = 0;
        loop {
            if pos == n {
                self.odometer = None;
                break;
            }
            digits[pos] += 1;
            if digits[pos] <= self.windows[pos].1 {
                self.odometer = Some(digits);
                break;
            }
            digits[pos] = self.windows[pos].0;
            pos += 1;
        }
        Some(vector)
    }
}

struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n as u32).collect() }
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] as usize != i {
            let grand = self.parent[self.parent[i] as usize];
            self.parent[i] = grand;
            i = grand as usize;
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb) as u32;
        }
    }

    fn component_count(&mut self) -> usize {
        (0..self.parent.len()).filter(|&i| self.find(i) == i).count()
    }
}

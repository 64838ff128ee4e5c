//! Exact linear algebra over the prime field GF(p).
//!
//! Elements are canonical residues 0 ≤ v < p for an odd prime p < 2^31, so a
//! product of two representatives fits in a u64 before reduction. Matrices are
//! dense and row-major. Elimination uses deterministic first-nonzero pivoting
//! (columns left to right, rows top to bottom), so every rank, kernel and
//! solve result is reproducible bit for bit.

use thiserror::Error;

/// Largest admissible modulus (exclusive); keeps products inside u64.
const MAX_MODULUS: u64 = 1 << 31;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ArithError {
    /// The requested modulus is not an odd prime below 2^31.
    #[error("modulus {0} is not an odd prime below 2^31")]
    InvalidModulus(u64),
    /// `solve` was called on a system with no solution.
    #[error("linear system is inconsistent")]
    InconsistentSystem,
}

/// The prime field GF(p). Cheap to copy; carried by every element and matrix
/// so that mixed-field operations can be rejected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Field {
    p: u64,
}

/// Default modulus used by the command-line tools.
pub const DEFAULT_PRIME: u64 = 10007;

fn is_odd_prime(p: u64) -> bool {
    if p < 3 || p % 2 == 0 {
        return false;
    }
    let mut d = 3u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl Field {
    /// Constructs GF(p), rejecting moduli that are not odd primes below 2^31.
    pub fn new(p: u64) -> Result<Self, ArithError> {
        if p >= MAX_MODULUS || !is_odd_prime(p) {
            return Err(ArithError::InvalidModulus(p));
        }
        Ok(Field { p })
    }

    /// GF(10007), the default working field.
    pub fn default_field() -> Self {
        Field { p: DEFAULT_PRIME }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Canonical element from a possibly negative integer.
    pub fn elem(&self, v: i64) -> FieldElement {
        let p = self.p as i64;
        let r = ((v % p) + p) % p;
        FieldElement {
            value: r as u64,
            field: *self,
        }
    }

    /// Canonical element from a nonnegative representative.
    pub fn elem_u64(&self, v: u64) -> FieldElement {
        FieldElement {
            value: v % self.p,
            field: *self,
        }
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            value: 0,
            field: *self,
        }
    }

    pub fn one(&self) -> FieldElement {
        FieldElement {
            value: 1,
            field: *self,
        }
    }

    #[inline]
    pub(crate) fn add_raw(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub(crate) fn sub_raw(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub(crate) fn mul_raw(&self, a: u64, b: u64) -> u64 {
        (a * b) % self.p
    }

    #[inline]
    pub(crate) fn neg_raw(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    /// Multiplicative inverse by extended Euclid; panics on zero.
    pub(crate) fn inv_raw(&self, a: u64) -> u64 {
        assert!(a != 0, "inverse of zero in GF({})", self.p);
        let (mut r0, mut r1) = (self.p as i64, (a % self.p) as i64);
        let (mut s0, mut s1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        debug_assert_eq!(r0, 1, "modulus must be prime");
        let p = self.p as i64;
        (((s0 % p) + p) % p) as u64
    }
}

/// An element of GF(p) in canonical form 0 ≤ value < p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u64,
    field: Field,
}

impl FieldElement {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn inverse(&self) -> FieldElement {
        FieldElement {
            value: self.field.inv_raw(self.value),
            field: self.field,
        }
    }

    fn check_same_field(&self, other: &FieldElement) {
        assert_eq!(
            self.field, other.field,
            "operation mixes elements of different fields"
        );
    }
}

impl std::ops::Add for FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: FieldElement) -> FieldElement {
        self.check_same_field(&rhs);
        FieldElement {
            value: self.field.add_raw(self.value, rhs.value),
            field: self.field,
        }
    }
}

impl std::ops::Sub for FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: FieldElement) -> FieldElement {
        self.check_same_field(&rhs);
        FieldElement {
            value: self.field.sub_raw(self.value, rhs.value),
            field: self.field,
        }
    }
}

impl std::ops::Mul for FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: FieldElement) -> FieldElement {
        self.check_same_field(&rhs);
        FieldElement {
            value: self.field.mul_raw(self.value, rhs.value),
            field: self.field,
        }
    }
}

impl std::ops::Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement {
            value: self.field.neg_raw(self.value),
            field: self.field,
        }
    }
}

impl std::fmt::Display for FieldElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Dense row-major matrix over GF(p).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl ExactMatrix {
    pub fn zero(field: Field, rows: usize, cols: usize) -> Self {
        ExactMatrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = ExactMatrix::zero(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_fn(
        field: Field,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> FieldElement,
    ) -> Self {
        let mut m = ExactMatrix::zero(field, rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                let e = f(r, c);
                assert_eq!(e.field, field, "entry from a different field");
                m.data[r * cols + c] = e.value;
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn get(&self, r: usize, c: usize) -> FieldElement {
        FieldElement {
            value: self.data[r * self.cols + c],
            field: self.field,
        }
    }

    pub fn set(&mut self, r: usize, c: usize, v: FieldElement) {
        assert_eq!(v.field, self.field, "entry from a different field");
        self.data[r * self.cols + c] = v.value;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn transpose(&self) -> ExactMatrix {
        let mut t = ExactMatrix::zero(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        t
    }

    pub fn multiply(&self, rhs: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.field, rhs.field, "matrices over different fields");
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in multiply");
        let p = self.field.p;
        let mut out = ExactMatrix::zero(self.field, self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[r * self.cols + k];
                if a == 0 {
                    continue;
                }
                let src = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let dst = &mut out.data[r * rhs.cols..(r + 1) * rhs.cols];
                for (d, &s) in dst.iter_mut().zip(src.iter()) {
                    *d = (*d + a * s) % p;
                }
            }
        }
        out
    }

    /// Horizontal concatenation [self | rhs].
    pub fn hstack(&self, rhs: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.field, rhs.field);
        assert_eq!(self.rows, rhs.rows, "row mismatch in hstack");
        let cols = self.cols + rhs.cols;
        let mut out = ExactMatrix::zero(self.field, self.rows, cols);
        for r in 0..self.rows {
            out.data[r * cols..r * cols + self.cols]
                .copy_from_slice(&self.data[r * self.cols..(r + 1) * self.cols]);
            out.data[r * cols + self.cols..(r + 1) * cols]
                .copy_from_slice(&rhs.data[r * rhs.cols..(r + 1) * rhs.cols]);
        }
        out
    }

    /// Vertical concatenation [self; rhs].
    pub fn vstack(&self, rhs: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.field, rhs.field);
        assert_eq!(self.cols, rhs.cols, "column mismatch in vstack");
        let mut out = ExactMatrix::zero(self.field, self.rows + rhs.rows, self.cols);
        out.data[..self.data.len()].copy_from_slice(&self.data);
        out.data[self.data.len()..].copy_from_slice(&rhs.data);
        out
    }

    /// Row echelon form in place on a raw buffer; returns pivot columns in
    /// order. First-nonzero pivoting: scan columns left to right, take the
    /// topmost unused row with a nonzero entry.
    fn echelon_raw(field: Field, data: &mut [u64], rows: usize, cols: usize) -> Vec<usize> {
        let p = field.p;
        let mut pivot_cols = Vec::new();
        let mut pr = 0usize;
        for pc in 0..cols {
            if pr == rows {
                break;
            }
            let mut sel = None;
            for r in pr..rows {
                if data[r * cols + pc] != 0 {
                    sel = Some(r);
                    break;
                }
            }
            let Some(sel) = sel else { continue };
            if sel != pr {
                for c in 0..cols {
                    data.swap(pr * cols + c, sel * cols + c);
                }
            }
            // Normalize the pivot row so later elimination is a single fused
            // multiply-subtract per entry.
            let inv = field.inv_raw(data[pr * cols + pc]);
            for c in pc..cols {
                data[pr * cols + c] = (data[pr * cols + c] * inv) % p;
            }
            for r in (pr + 1)..rows {
                let f = data[r * cols + pc];
                if f == 0 {
                    continue;
                }
                data[r * cols + pc] = 0;
                for c in (pc + 1)..cols {
                    let sub = (f * data[pr * cols + c]) % p;
                    let cur = data[r * cols + c];
                    data[r * cols + c] = if cur >= sub { cur - sub } else { cur + p - sub };
                }
            }
            pivot_cols.push(pc);
            pr += 1;
        }
        pivot_cols
    }

    /// Reduced row echelon form in place; returns pivot columns.
    fn rref_raw(field: Field, data: &mut [u64], rows: usize, cols: usize) -> Vec<usize> {
        let p = field.p;
        let pivots = Self::echelon_raw(field, data, rows, cols);
        for (pr, &pc) in pivots.iter().enumerate().rev() {
            for r in 0..pr {
                let f = data[r * cols + pc];
                if f == 0 {
                    continue;
                }
                data[r * cols + pc] = 0;
                for c in (pc + 1)..cols {
                    let sub = (f * data[pr * cols + c]) % p;
                    let cur = data[r * cols + c];
                    data[r * cols + c] = if cur >= sub { cur - sub } else { cur + p - sub };
                }
            }
        }
        pivots
    }

    fn rank_raw(&self) -> usize {
        let mut work = self.data.clone();
        Self::echelon_raw(self.field, &mut work, self.rows, self.cols).len()
    }

    /// Rank over GF(p). In test builds also certifies rank(M) = rank(Mᵀ) and
    /// the rank-nullity identity against the kernel dimension.
    pub fn rank(&self) -> usize {
        let r = self.rank_raw();
        debug_assert_eq!(r, self.transpose().rank_raw(), "rank(M) != rank(M^T)");
        r
    }

    /// Basis of the right null space as matrix columns: self · K = 0, and the
    /// number of columns equals cols − rank. Deterministic: one column per
    /// free variable, ascending, with a 1 in the free position.
    pub fn kernel_basis(&self) -> ExactMatrix {
        let mut work = self.data.clone();
        let pivots = Self::rref_raw(self.field, &mut work, self.rows, self.cols);
        let pivot_set: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = Some(i);
            }
            v
        };
        let free: Vec<usize> = (0..self.cols).filter(|c| pivot_set[*c].is_none()).collect();
        let mut k = ExactMatrix::zero(self.field, self.cols, free.len());
        for (j, &fc) in free.iter().enumerate() {
            k.data[fc * free.len() + j] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                let v = work[i * self.cols + fc];
                k.data[pc * free.len() + j] = self.field.neg_raw(v);
            }
        }
        debug_assert_eq!(pivots.len() + k.cols, self.cols, "rank-nullity violated");
        debug_assert!(self.multiply(&k).is_zero(), "kernel basis fails M*K = 0");
        k
    }

    /// One exact solution X of self · X = rhs (free variables set to zero).
    /// Errors when the system is inconsistent. In test builds the solution is
    /// multiplied back and compared with rhs.
    pub fn solve(&self, rhs: &ExactMatrix) -> Result<ExactMatrix, ArithError> {
        assert_eq!(self.field, rhs.field, "matrices over different fields");
        assert_eq!(self.rows, rhs.rows, "row mismatch in solve");
        let aug = self.hstack(rhs);
        let mut work = aug.data.clone();
        let total = aug.cols;
        let pivots = Self::rref_raw(self.field, &mut work, aug.rows, total);
        if pivots.iter().any(|&pc| pc >= self.cols) {
            return Err(ArithError::InconsistentSystem);
        }
        let mut x = ExactMatrix::zero(self.field, self.cols, rhs.cols);
        for (i, &pc) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x.data[pc * rhs.cols + j] = work[i * total + self.cols + j];
            }
        }
        debug_assert_eq!(&self.multiply(&x), rhs, "solve fails multiply-back");
        Ok(x)
    }

    /// Reduced row echelon form (fresh matrix) plus pivot columns; the
    /// canonical representative used for deterministic basis extraction.
    pub fn rref(&self) -> (ExactMatrix, Vec<usize>) {
        let mut work = self.data.clone();
        let pivots = Self::rref_raw(self.field, &mut work, self.rows, self.cols);
        (
            ExactMatrix {
                field: self.field,
                rows: self.rows,
                cols: self.cols,
                data: work,
            },
            pivots,
        )
    }
}

impl std::fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for r in 0..self.rows {
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.data[r * self.cols + c])?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    fn random_matrix(field: Field, rows: usize, cols: usize, rng: &mut ChaCha20Rng) -> ExactMatrix {
        ExactMatrix::from_fn(field, rows, cols, |_, _| {
            field.elem_u64(rng.gen_range(0..field.modulus()))
        })
    }

    /// Independent elimination oracle: processes columns right to left and
    /// picks the bottom-most unused nonzero row, the opposite pivot policy to
    /// the production routine.
    fn rank_oracle(m: &ExactMatrix) -> usize {
        let field = m.field();
        let p = field.modulus();
        let (rows, cols) = (m.rows(), m.cols());
        let mut data: Vec<u64> =
            (0..rows * cols).map(|i| m.get(i / cols, i % cols).value()).collect();
        let mut used = vec![false; rows];
        let mut rank = 0;
        for pc in (0..cols).rev() {
            let mut sel = None;
            for r in (0..rows).rev() {
                if !used[r] && data[r * cols + pc] != 0 {
                    sel = Some(r);
                    break;
                }
            }
            let Some(sel) = sel else { continue };
            used[sel] = true;
            rank += 1;
            let inv = field.inv_raw(data[sel * cols + pc]);
            for r in 0..rows {
                if used[r] && r == sel {
                    continue;
                }
                let f = (data[r * cols + pc] * inv) % p;
                if f == 0 {
                    continue;
                }
                for c in 0..cols {
                    let sub = (f * data[sel * cols + c]) % p;
                    let cur = data[r * cols + c];
                    data[r * cols + c] = if cur >= sub { cur - sub } else { cur + p - sub };
                }
            }
        }
        rank
    }

    #[test]
    fn field_rejects_non_primes() {
        assert!(Field::new(1).is_err());
        assert!(Field::new(2).is_err());
        assert!(Field::new(9).is_err());
        assert!(Field::new(10006).is_err());
        assert!(Field::new(1 << 31).is_err());
        assert!(Field::new(10007).is_ok());
        assert!(Field::new(3).is_ok());
    }

    #[test]
    fn field_inverse_roundtrip() {
        let f = Field::new(101).unwrap();
        for v in 1..101 {
            let e = f.elem_u64(v);
            assert_eq!((e * e.inverse()).value(), 1);
        }
    }

    #[test]
    fn elem_reduces_negatives() {
        let f = Field::default_field();
        assert_eq!(f.elem(-1).value(), 10006);
        assert_eq!(f.elem(-10007).value(), 0);
        assert_eq!(f.elem(10008).value(), 1);
    }

    #[test]
    fn rank_matches_independent_elimination() {
        let field = Field::default_field();
        let mut rng = ChaCha20Rng::seed_from_u64(17);
        for _ in 0..40 {
            let rows = rng.gen_range(1..9);
            let cols = rng.gen_range(1..9);
            // Mix of generic and low-rank matrices: product of thin factors.
            let k = rng.gen_range(0..=rows.min(cols));
            let m = if k == 0 {
                ExactMatrix::zero(field, rows, cols)
            } else {
                let a = random_matrix(field, rows, k, &mut rng);
                let b = random_matrix(field, k, cols, &mut rng);
                a.multiply(&b)
            };
            assert_eq!(m.rank(), rank_oracle(&m));
            assert!(m.rank() <= k);
        }
    }

    #[test]
    fn rank_equals_transpose_rank() {
        let field = Field::default_field();
        let mut rng = ChaCha20Rng::seed_from_u64(23);
        for _ in 0..20 {
            let m = random_matrix(field, rng.gen_range(1..10), rng.gen_range(1..10), &mut rng);
            assert_eq!(m.rank(), m.transpose().rank());
        }
    }

    #[test]
    fn kernel_annihilates_and_spans() {
        let field = Field::default_field();
        let mut rng = ChaCha20Rng::seed_from_u64(29);
        for _ in 0..20 {
            let rows = rng.gen_range(1..8);
            let cols = rng.gen_range(1..8);
            let m = random_matrix(field, rows, cols, &mut rng);
            let k = m.kernel_basis();
            assert!(m.multiply(&k).is_zero());
            assert_eq!(k.cols() + m.rank(), cols);
            // Columns are independent: the kernel matrix has full column rank.
            assert_eq!(k.rank(), k.cols());
        }
    }

    #[test]
    fn solve_recovers_constructed_solutions() {
        let field = Field::default_field();
        let mut rng = ChaCha20Rng::seed_from_u64(31);
        for _ in 0..20 {
            let rows = rng.gen_range(1..8);
            let cols = rng.gen_range(1..8);
            let m = random_matrix(field, rows, cols, &mut rng);
            let x0 = random_matrix(field, cols, 2, &mut rng);
            let b = m.multiply(&x0);
            let x = m.solve(&b).expect("constructed system must be solvable");
            assert_eq!(m.multiply(&x), b);
        }
    }

    #[test]
    fn solve_detects_inconsistency() {
        let field = Field::default_field();
        // x + y = 1 and x + y = 2 cannot both hold.
        let m = ExactMatrix::from_fn(field, 2, 2, |_, _| field.one());
        let mut b = ExactMatrix::zero(field, 2, 1);
        b.set(0, 0, field.elem(1));
        b.set(1, 0, field.elem(2));
        assert_eq!(m.solve(&b), Err(ArithError::InconsistentSystem));
    }

    #[test]
    fn elimination_is_deterministic() {
        let field = Field::default_field();
        let mut rng = ChaCha20Rng::seed_from_u64(37);
        let m = random_matrix(field, 6, 9, &mut rng);
        let (r1, p1) = m.rref();
        let (r2, p2) = m.rref();
        assert_eq!(r1, r2);
        assert_eq!(p1, p2);
    }

    #[test]
    fn stack_helpers_compose() {
        let field = Field::default_field();
        let a = ExactMatrix::identity(field, 2);
        let b = ExactMatrix::zero(field, 2, 2);
        let h = a.hstack(&b);
        assert_eq!(h.cols(), 4);
        assert_eq!(h.get(1, 1).value(), 1);
        assert_eq!(h.get(1, 3).value(), 0);
        let v = a.vstack(&b);
        assert_eq!(v.rows(), 4);
        assert_eq!(v.rank(), 2);
    }
}

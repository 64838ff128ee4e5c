//! Degree-zero Hom and Ext computations for a standard determinantal sample:
//! ₀Hom(M,M), ₀Ext¹_R(M,M) with explicit cocycle representatives, the
//! trace-of-adjugate tangent map into ₀Hom_R(I,A), ₀Hom_R(I,A) itself, the
//! degree-zero strand of the five-term exact sequence, truncated ₀Ext^i_A(M,M),
//! and ₀Ext¹_A(I/I²,A).
//!
//! Everything reduces to exact linear algebra on graded pieces. A degree piece
//! of a cokernel is handled through a projector onto complement coordinates
//! (with a section embedding class coordinates back into the free ambient
//! piece), so kernels, ranks, and multiplication maps between pieces are all
//! plain matrix operations over GF(p).

use crate::arith::{ExactMatrix, Field};
use crate::determinantal::{
    codimension_check, maximal_minors, CodimensionReport, DeterminantalError, GradedMatrix,
    GradedModulePresentation,
};
use crate::groebner::{
    buchberger, normal_form, syzygies, GradedFreeModule, GroebnerError, ModuleElement,
    QuotientContext, ResolutionBounds,
};
use crate::poly::{GradedPieceBasis, Monomial, Polynomial, Ring};
use itertools::Itertools;
use serde::{Deserialize, Serialize};
use std::cell::RefCell;
use std::collections::BTreeMap;
use std::rc::Rc;
use thiserror::Error;

#[derive(Error, Debug)]
pub enum HomExtError {
    #[error("the sample is not standard determinantal: {0:?}")]
    NotStandardDeterminantal(CodimensionReport),
    #[error("maximal minor {index} vanishes; the sample is too degenerate")]
    ZeroMinor { index: usize },
    #[error(
        "trace assignments violate syzygy {syzygy} of the minors; \
         this indicates an implementation bug"
    )]
    SyzygyIncompatible { syzygy: usize },
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error(transparent)]
    Determinantal(#[from] DeterminantalError),
}

// ---------------------------------------------------------------------------
// Graded piece indexing
// ---------------------------------------------------------------------------

/// Monomial basis of the degree-d piece of ⊕_k R(−twists[k]), component-major
/// with the canonical piece basis inside each component. This ordering matches
/// the row/column layout of `graded_map_matrix`.
struct PieceIndex {
    bases: Vec<GradedPieceBasis>,
    offsets: Vec<usize>,
    dim: usize,
}

impl PieceIndex {
    fn new(ring: Ring, twists: &[i64], degree: i64) -> Self {
        let bases: Vec<GradedPieceBasis> = twists
            .iter()
            .map(|&t| GradedPieceBasis::new(ring, degree - t))
            .collect();
        let mut offsets = Vec::with_capacity(twists.len());
        let mut acc = 0usize;
        for b in &bases {
            offsets.push(acc);
            acc += b.len();
        }
        PieceIndex {
            bases,
            offsets,
            dim: acc,
        }
    }

    fn entry(&self, idx: usize) -> (usize, &Monomial) {
        let comp = match self.offsets.binary_search(&idx) {
            Ok(k) => {
                // Skip empty components sharing the same offset.
                let mut k = k;
                while self.bases[k].is_empty() {
                    k += 1;
                }
                k
            }
            Err(k) => k - 1,
        };
        (comp, &self.bases[comp].monomials()[idx - self.offsets[comp]])
    }

    /// Adds the coordinates of `poly` placed in component `comp` into column
    /// `col` of `out`.
    fn accumulate(&self, out: &mut ExactMatrix, col: usize, comp: usize, poly: &Polynomial) {
        if poly.is_zero() {
            return;
        }
        for (m, c) in poly.terms() {
            let i = self.bases[comp]
                .index_of(m)
                .expect("monomial outside the graded piece");
            let row = self.offsets[comp] + i;
            let cur = out.get(row, col);
            out.set(row, col, cur + c);
        }
    }
}

/// Monomial basis for polynomial matrices ψ of shape rows×cols where entry
/// (i,j) is homogeneous of degree `degree + col_twists[j] − row_twists[i]`,
/// i.e. degree-`degree` maps ⊕_j R(−col_twists[j]) → ⊕_i R(−row_twists[i]).
/// Column-major blocks: for a fixed column j the inner layout coincides with
/// `PieceIndex(row_twists, degree + col_twists[j])`.
struct MatrixPieceIndex {
    row_twists: Vec<i64>,
    col_twists: Vec<i64>,
    bases: Vec<Vec<GradedPieceBasis>>,
    offsets: Vec<Vec<usize>>,
    col_offsets: Vec<usize>,
    col_dims: Vec<usize>,
    dim: usize,
}

impl MatrixPieceIndex {
    fn new(ring: Ring, row_twists: &[i64], col_twists: &[i64], degree: i64) -> Self {
        let mut bases = Vec::with_capacity(col_twists.len());
        let mut offsets = Vec::with_capacity(col_twists.len());
        let mut col_offsets = Vec::with_capacity(col_twists.len());
        let mut col_dims = Vec::with_capacity(col_twists.len());
        let mut acc = 0usize;
        for &cj in col_twists {
            col_offsets.push(acc);
            let mut row_bases = Vec::with_capacity(row_twists.len());
            let mut row_offsets = Vec::with_capacity(row_twists.len());
            let start = acc;
            for &ri in row_twists {
                let b = GradedPieceBasis::new(ring, degree + cj - ri);
                row_offsets.push(acc);
                acc += b.len();
                row_bases.push(b);
            }
            col_dims.push(acc - start);
            bases.push(row_bases);
            offsets.push(row_offsets);
        }
        MatrixPieceIndex {
            row_twists: row_twists.to_vec(),
            col_twists: col_twists.to_vec(),
            bases,
            offsets,
            col_offsets,
            col_dims,
            dim: acc,
        }
    }

    fn unit(&self, idx: usize) -> (usize, usize, &Monomial) {
        for j in 0..self.col_twists.len() {
            for i in 0..self.row_twists.len() {
                let off = self.offsets[j][i];
                let len = self.bases[j][i].len();
                if idx >= off && idx < off + len {
                    return (i, j, &self.bases[j][i].monomials()[idx - off]);
                }
            }
        }
        panic!("matrix piece index out of range");
    }

    fn accumulate(
        &self,
        out: &mut ExactMatrix,
        col: usize,
        row_i: usize,
        col_j: usize,
        poly: &Polynomial,
    ) {
        if poly.is_zero() {
            return;
        }
        for (m, c) in poly.terms() {
            let k = self.bases[col_j][row_i]
                .index_of(m)
                .expect("monomial outside the matrix piece");
            let row = self.offsets[col_j][row_i] + k;
            let cur = out.get(row, col);
            out.set(row, col, cur + c);
        }
    }

}

// ---------------------------------------------------------------------------
// Quotient pieces: projector + section for a degree piece of a cokernel
// ---------------------------------------------------------------------------

/// The degree-d piece of coker(span ⊆ ⊕R(−twists)) with explicit linear
/// structure: `projector` sends ambient coordinates to class coordinates and
/// `class_cols` lists the ambient basis positions whose classes form the
/// chosen basis (so placing class coordinates at those positions is a
/// section).
struct QuotientPiece {
    index: PieceIndex,
    projector: ExactMatrix,
    class_cols: Vec<usize>,
}

impl QuotientPiece {
    fn new(index: PieceIndex, span: &ExactMatrix) -> Self {
        assert_eq!(span.rows(), index.dim, "span rows must match the ambient");
        let field = span.field();
        let (r, pivots) = span.transpose().rref();
        let pivot_set: Vec<bool> = {
            let mut v = vec![false; index.dim];
            for &p in &pivots {
                v[p] = true;
            }
            v
        };
        let class_cols: Vec<usize> = (0..index.dim).filter(|&j| !pivot_set[j]).collect();
        let mut projector = ExactMatrix::zero(field, class_cols.len(), index.dim);
        for (alpha, &q) in class_cols.iter().enumerate() {
            projector.set(alpha, q, field.one());
        }
        for (i, &p) in pivots.iter().enumerate() {
            for (alpha, &q) in class_cols.iter().enumerate() {
                let v = r.get(i, q);
                if !v.is_zero() {
                    projector.set(alpha, p, -v);
                }
            }
        }
        QuotientPiece {
            index,
            projector,
            class_cols,
        }
    }

    fn dim(&self) -> usize {
        self.class_cols.len()
    }

    /// The (component, monomial) ambient position representing class basis
    /// vector `k`.
    fn section(&self, k: usize) -> (usize, &Monomial) {
        self.index.entry(self.class_cols[k])
    }

    fn project(&self, ambient: &ExactMatrix) -> ExactMatrix {
        self.projector.multiply(ambient)
    }
}

/// The class-coordinate matrix of multiplication by `f` from one quotient
/// piece to another (componentwise, same twist list).
fn mult_map(ring: Ring, f: &Polynomial, from: &QuotientPiece, to: &QuotientPiece) -> ExactMatrix {
    let field = ring.field();
    let mut ambient = ExactMatrix::zero(field, to.index.dim, from.dim());
    if !f.is_zero() {
        for k in 0..from.dim() {
            let (comp, mono) = from.section(k);
            let prod = f.mul_term(mono, field.one());
            to.index.accumulate(&mut ambient, k, comp, &prod);
        }
    }
    to.project(&ambient)
}

fn row_slice(m: &ExactMatrix, from: usize, len: usize) -> ExactMatrix {
    let mut out = ExactMatrix::zero(m.field(), len, m.cols());
    for r in 0..len {
        for c in 0..m.cols() {
            out.set(r, c, m.get(from + r, c));
        }
    }
    out
}

fn stack_all(field: Field, blocks: Vec<ExactMatrix>, cols: usize) -> ExactMatrix {
    let mut out = ExactMatrix::zero(field, 0, cols);
    for b in blocks {
        out = out.vstack(&b);
    }
    out
}

// ---------------------------------------------------------------------------
// Hom(M,M) degree pieces
// ---------------------------------------------------------------------------

/// The degree-d piece of Hom_A(M,M) = Hom_R(M,M): cocycles Z_d = {ψ : each
/// column of ψ𝒜 lies in im 𝒜} modulo coboundaries B_d = {𝒜θ}. Stores chosen
/// class representatives and a solver for projecting cocycles to class
/// coordinates.
struct HomMMPiece {
    mpi: MatrixPieceIndex,
    class_dim: usize,
    /// Ambient coordinates of the class representative cocycles.
    reps: ExactMatrix,
    /// [independent B columns | reps]; solving against it projects.
    solver: ExactMatrix,
    bind_cols: usize,
}

impl HomMMPiece {
    fn project(&self, v: &ExactMatrix) -> ExactMatrix {
        if self.class_dim == 0 {
            return ExactMatrix::zero(v.field(), 0, v.cols());
        }
        let x = self
            .solver
            .solve(v)
            .expect("element does not lie in the cocycle space");
        row_slice(&x, self.bind_cols, self.class_dim)
    }
}

// ---------------------------------------------------------------------------
// The shared context for a standard determinantal sample
// ---------------------------------------------------------------------------

/// Everything the Hom/Ext operations need about one standard determinantal
/// sample: the quotient ring A = R/I_t, the maximal minors in lexicographic
/// column-subset order, their syzygies over R, and memoized degree-piece
/// toolkits for A, M, and Hom(M,M).
pub struct StandardContext {
    matrix: GradedMatrix,
    ring: Ring,
    quotient: QuotientContext,
    codim: CodimensionReport,
    minor_subsets: Vec<Vec<usize>>,
    minors: Vec<Polynomial>,
    minor_degrees: Vec<i64>,
    syzygies: Vec<ModuleElement>,
    syzygy_degrees: Vec<i64>,
    presentation: GradedModulePresentation,
    m_pieces: RefCell<BTreeMap<i64, Rc<QuotientPiece>>>,
    a_pieces: RefCell<BTreeMap<i64, Rc<QuotientPiece>>>,
    hom_mm_pieces: RefCell<BTreeMap<i64, Rc<HomMMPiece>>>,
    constraint: RefCell<Option<Rc<ExactMatrix>>>,
}

impl StandardContext {
    pub fn new(matrix: GradedMatrix) -> Result<Self, HomExtError> {
        let report = codimension_check(&matrix);
        if !report.standard {
            return Err(HomExtError::NotStandardDeterminantal(report));
        }
        let ring = matrix.ring();
        let spec = matrix.spec();
        let t = spec.t();
        let minor_subsets: Vec<Vec<usize>> = (0..spec.cols()).combinations(t).collect();
        let minors = maximal_minors(&matrix);
        for (idx, f) in minors.iter().enumerate() {
            if f.is_zero() {
                return Err(HomExtError::ZeroMinor { index: idx });
            }
        }
        let sum_b: i64 = spec.b.iter().sum();
        let minor_degrees: Vec<i64> = minor_subsets
            .iter()
            .map(|j| j.iter().map(|&q| spec.a[q]).sum::<i64>() - sum_b)
            .collect();
        let quotient = QuotientContext::new(ring, &minors);
        let free = GradedFreeModule::new(ring, vec![0]);
        let gens: Vec<ModuleElement> = minors
            .iter()
            .map(|f| free.element(vec![f.clone()]))
            .collect();
        let syz = syzygies(&free, &gens);
        let syz_module = GradedFreeModule::new(ring, minor_degrees.clone());
        let syzygy_degrees: Vec<i64> = syz
            .iter()
            .map(|s| syz_module.degree_of(s).expect("homogeneous syzygy"))
            .collect();
        let presentation = matrix.presentation_of_m();
        Ok(StandardContext {
            ring,
            quotient,
            codim: report,
            minor_subsets,
            minors,
            minor_degrees,
            syzygies: syz,
            syzygy_degrees,
            presentation,
            matrix,
            m_pieces: RefCell::new(BTreeMap::new()),
            a_pieces: RefCell::new(BTreeMap::new()),
            hom_mm_pieces: RefCell::new(BTreeMap::new()),
            constraint: RefCell::new(None),
        })
    }

    pub fn matrix(&self) -> &GradedMatrix {
        &self.matrix
    }

    pub fn quotient(&self) -> &QuotientContext {
        &self.quotient
    }

    pub fn codimension_report(&self) -> &CodimensionReport {
        &self.codim
    }

    pub fn minors(&self) -> &[Polynomial] {
        &self.minors
    }

    pub fn minor_degrees(&self) -> &[i64] {
        &self.minor_degrees
    }

    pub fn minor_subsets(&self) -> &[Vec<usize>] {
        &self.minor_subsets
    }

    fn b_twists(&self) -> Vec<i64> {
        self.matrix.spec().b.clone()
    }

    fn a_twists(&self) -> Vec<i64> {
        self.matrix.spec().a.clone()
    }

    fn m_piece(&self, degree: i64) -> Rc<QuotientPiece> {
        if let Some(p) = self.m_pieces.borrow().get(&degree) {
            return Rc::clone(p);
        }
        let index = PieceIndex::new(self.ring, &self.b_twists(), degree);
        let span = self.presentation.map_matrix(degree);
        let piece = Rc::new(QuotientPiece::new(index, &span));
        self.m_pieces
            .borrow_mut()
            .insert(degree, Rc::clone(&piece));
        piece
    }

    fn a_piece(&self, degree: i64) -> Rc<QuotientPiece> {
        if let Some(p) = self.a_pieces.borrow().get(&degree) {
            return Rc::clone(p);
        }
        let index = PieceIndex::new(self.ring, &[0], degree);
        let field = self.ring.field();
        let mut span = ExactMatrix::zero(field, index.dim, 0);
        for f in &self.minors {
            let d = i64::from(f.degree().expect("nonzero minor"));
            let basis = GradedPieceBasis::new(self.ring, degree - d);
            let mut block = ExactMatrix::zero(field, index.dim, basis.len());
            for (col, mono) in basis.monomials().iter().enumerate() {
                let prod = f.mul_term(mono, field.one());
                index.accumulate(&mut block, col, 0, &prod);
            }
            span = span.hstack(&block);
        }
        let piece = Rc::new(QuotientPiece::new(index, &span));
        self.a_pieces
            .borrow_mut()
            .insert(degree, Rc::clone(&piece));
        piece
    }

    /// H_M at `degree`, read off the memoized piece.
    pub fn hilbert_m(&self, degree: i64) -> usize {
        self.m_piece(degree).dim()
    }

    /// Hilbert function of A at `degree`.
    pub fn hilbert_a(&self, degree: i64) -> usize {
        self.a_piece(degree).dim()
    }

    /// Ambient contributions of ψ ↦ ψ𝒜 (right multiplication by the sample):
    /// ψ ranges over `psi`-shaped matrices, outputs over `out`-shaped ones.
    fn right_mult_image(&self, psi: &MatrixPieceIndex, out: &MatrixPieceIndex) -> ExactMatrix {
        let field = self.ring.field();
        let mut m = ExactMatrix::zero(field, out.dim, psi.dim);
        for u in 0..psi.dim {
            let (i, ip, mono) = psi.unit(u);
            let mono = mono.clone();
            for j in 0..out.col_twists.len() {
                let e = self.matrix.entry(ip, j);
                if e.is_zero() {
                    continue;
                }
                let prod = e.mul_term(&mono, field.one());
                out.accumulate(&mut m, u, i, j, &prod);
            }
        }
        m
    }

    /// Ambient contributions of χ ↦ 𝒜χ (left multiplication by the sample):
    /// χ has row twists a, the output has row twists b, same column twists.
    fn left_mult_image(&self, chi: &MatrixPieceIndex, out: &MatrixPieceIndex) -> ExactMatrix {
        let field = self.ring.field();
        let t = self.matrix.nrows();
        let mut m = ExactMatrix::zero(field, out.dim, chi.dim);
        for u in 0..chi.dim {
            let (q, j, mono) = chi.unit(u);
            let mono = mono.clone();
            for i in 0..t {
                let e = self.matrix.entry(i, q);
                if e.is_zero() {
                    continue;
                }
                let prod = e.mul_term(&mono, field.one());
                out.accumulate(&mut m, u, i, j, &prod);
            }
        }
        m
    }

    /// The degree-d piece of Hom(M,M) with class representatives.
    fn hom_mm_piece(&self, degree: i64) -> Rc<HomMMPiece> {
        if let Some(p) = self.hom_mm_pieces.borrow().get(&degree) {
            return Rc::clone(p);
        }
        let field = self.ring.field();
        let b = self.b_twists();
        let a = self.a_twists();
        let psi = MatrixPieceIndex::new(self.ring, &b, &b, degree);
        // Cocycle condition: project each column of ψ𝒜 into M.
        let out_shape = MatrixPieceIndex::new(self.ring, &b, &a, degree);
        let contributions = self.right_mult_image(&psi, &out_shape);
        let mut blocks = Vec::new();
        for (j, &aj) in a.iter().enumerate() {
            let piece = self.m_piece(degree + aj);
            let block = row_slice(&contributions, out_shape.col_offsets[j], out_shape.col_dims[j]);
            blocks.push(piece.project(&block));
        }
        let constraint = stack_all(field, blocks, psi.dim);
        let z_basis = constraint.kernel_basis();
        // Coboundaries 𝒜θ.
        let theta = MatrixPieceIndex::new(self.ring, &a, &b, degree);
        let bmat = self.left_mult_image(&theta, &psi);
        let (_, bpivots) = bmat.rref();
        let mut bind = ExactMatrix::zero(field, psi.dim, bpivots.len());
        for (c, &p) in bpivots.iter().enumerate() {
            for r in 0..psi.dim {
                bind.set(r, c, bmat.get(r, p));
            }
        }
        let (_, joint_pivots) = bind.hstack(&z_basis).rref();
        let rep_cols: Vec<usize> = joint_pivots
            .iter()
            .filter(|&&p| p >= bind.cols())
            .map(|&p| p - bind.cols())
            .collect();
        let mut reps = ExactMatrix::zero(field, psi.dim, rep_cols.len());
        for (c, &zc) in rep_cols.iter().enumerate() {
            for r in 0..psi.dim {
                reps.set(r, c, z_basis.get(r, zc));
            }
        }
        let solver = bind.hstack(&reps);
        let piece = Rc::new(HomMMPiece {
            mpi: psi,
            class_dim: rep_cols.len(),
            reps,
            solver,
            bind_cols: bind.cols(),
        });
        self.hom_mm_pieces
            .borrow_mut()
            .insert(degree, Rc::clone(&piece));
        piece
    }

    /// dim ₀Hom(M,M) (the same over R and over A, since I annihilates M).
    pub fn hom_mm(&self) -> usize {
        self.hom_mm_piece(0).class_dim
    }

    /// The stacked syzygy-constraint matrix cutting ₀Hom_R(I,A) out of
    /// ⊕_J A_{deg f_J}: one block row per syzygy of the minors.
    fn syzygy_constraint(&self) -> Rc<ExactMatrix> {
        if let Some(m) = self.constraint.borrow().as_ref() {
            return Rc::clone(m);
        }
        let field = self.ring.field();
        let col_pieces: Vec<Rc<QuotientPiece>> =
            self.minor_degrees.iter().map(|&d| self.a_piece(d)).collect();
        let total_cols: usize = col_pieces.iter().map(|p| p.dim()).sum();
        let mut blocks = Vec::new();
        for (l, s) in self.syzygies.iter().enumerate() {
            let target = self.a_piece(self.syzygy_degrees[l]);
            let mut block = ExactMatrix::zero(field, target.dim(), total_cols);
            let mut off = 0usize;
            for (jm, from) in col_pieces.iter().enumerate() {
                let coeff = s.component(jm);
                if !coeff.is_zero() {
                    let sub = mult_map(self.ring, coeff, from, &target);
                    for r in 0..sub.rows() {
                        for c in 0..sub.cols() {
                            block.set(r, off + c, sub.get(r, c));
                        }
                    }
                }
                off += from.dim();
            }
            blocks.push(block);
        }
        let m = Rc::new(stack_all(field, blocks, total_cols));
        *self.constraint.borrow_mut() = Some(Rc::clone(&m));
        m
    }

    /// dim ₀Hom_R(I,A), by syzygies of the minors and degree-wise linear
    /// algebra.
    pub fn hom_i_a(&self) -> usize {
        let c = self.syzygy_constraint();
        c.cols() - c.rank()
    }

    /// ₀Ext¹_R(M,M) with explicit cocycle representatives η: G* → F*.
    pub fn ext1_r_mm(&self) -> Ext1R {
        let field = self.ring.field();
        let b = self.b_twists();
        let a = self.a_twists();
        let eta = MatrixPieceIndex::new(self.ring, &b, &a, 0);
        // Column-wise adjustments by im 𝒜: η and η + 𝒜χ induce the same map
        // G* → M.
        let chi = MatrixPieceIndex::new(self.ring, &a, &a, 0);
        let x0 = self.left_mult_image(&chi, &eta);
        // Maps factoring through F*: η = ψ̃𝒜.
        let psi = MatrixPieceIndex::new(self.ring, &b, &b, 0);
        let y = self.right_mult_image(&psi, &eta);
        let g = x0.hstack(&y);
        let joint = g.hstack(&ExactMatrix::identity(field, eta.dim));
        let (_, pivots) = joint.rref();
        let mut cocycles = Vec::new();
        for &p in pivots.iter().filter(|&&p| p >= g.cols()) {
            let u = p - g.cols();
            let (i, j, mono) = eta.unit(u);
            let mut grid = vec![vec![Polynomial::zero(self.ring); a.len()]; b.len()];
            grid[i][j] = Polynomial::constant(self.ring, field.one())
                .mul_term(mono, field.one());
            cocycles.push(grid);
        }
        let hom_mm = self.hom_mm();
        let hom_fstar_m: usize = b.iter().map(|&d| self.hilbert_m(d)).sum();
        let hom_gstar_m: usize = a.iter().map(|&d| self.hilbert_m(d)).sum();
        let dimension = cocycles.len();
        assert_eq!(
            dimension + hom_fstar_m,
            hom_gstar_m + hom_mm,
            "four-term rank bookkeeping failed"
        );
        Ext1R {
            dimension,
            cocycles,
            hom_mm,
            hom_fstar_m,
            hom_gstar_m,
        }
    }

    /// Image of one cocycle under the trace-of-adjugate map: for each maximal
    /// minor (columns J, ascending) the value tr(adj(𝒜_J)·η_J) reduced
    /// modulo I.
    pub fn tangent_image(&self, eta: &[Vec<Polynomial>]) -> Vec<Polynomial> {
        let t = self.matrix.nrows();
        let mut out = Vec::with_capacity(self.minor_subsets.len());
        for subset in &self.minor_subsets {
            let sub: Vec<Vec<Polynomial>> = (0..t)
                .map(|i| subset.iter().map(|&q| self.matrix.entry(i, q).clone()).collect())
                .collect();
            let adj = adjugate(self.ring, &sub);
            let mut trace = Polynomial::zero(self.ring);
            for (pos, &jq) in subset.iter().enumerate() {
                for k in 0..t {
                    if adj[pos][k].is_zero() || eta[k][jq].is_zero() {
                        continue;
                    }
                    trace = trace.add(&adj[pos][k].mul(&eta[k][jq]));
                }
            }
            out.push(self.quotient.reduce_poly(&trace));
        }
        out
    }

    /// The matrix of the tangent map ₀Ext¹_R(M,M) → ₀Hom_R(I,A) over the
    /// cocycle basis, with syzygy-compatibility verified.
    pub fn tangent_map(&self, ext1: &Ext1R) -> Result<TangentMap, HomExtError> {
        let field = self.ring.field();
        let col_pieces: Vec<Rc<QuotientPiece>> =
            self.minor_degrees.iter().map(|&d| self.a_piece(d)).collect();
        let total_rows: usize = col_pieces.iter().map(|p| p.dim()).sum();
        let mut matrix = ExactMatrix::zero(field, total_rows, ext1.cocycles.len());
        for (col, eta) in ext1.cocycles.iter().enumerate() {
            let images = self.tangent_image(eta);
            let mut off = 0usize;
            for (jm, piece) in col_pieces.iter().enumerate() {
                let mut amb = ExactMatrix::zero(field, piece.index.dim, 1);
                piece.index.accumulate(&mut amb, 0, 0, &images[jm]);
                let cls = piece.project(&amb);
                for r in 0..cls.rows() {
                    matrix.set(off + r, col, cls.get(r, 0));
                }
                off += piece.dim();
            }
        }
        // A genuine homomorphism I → A kills every syzygy of the minors.
        let constraint = self.syzygy_constraint();
        let composed = constraint.multiply(&matrix);
        if !composed.is_zero() {
            let block = (0..composed.rows())
                .find(|&r| (0..composed.cols()).any(|c| !composed.get(r, c).is_zero()))
                .unwrap_or(0);
            let mut acc = 0usize;
            let mut syz = 0usize;
            for (l, &d) in self.syzygy_degrees.iter().enumerate() {
                let h = self.a_piece(d).dim();
                if block < acc + h {
                    syz = l;
                    break;
                }
                acc += h;
            }
            return Err(HomExtError::SyzygyIncompatible { syzygy: syz });
        }
        let rank = matrix.rank();
        Ok(TangentMap {
            rank,
            matrix,
            minor_degrees: self.minor_degrees.clone(),
        })
    }

    /// dim (E₂^{0,1})₀ = dim ₀Hom_R(I, Hom_A(M,M)).
    pub fn hom_i_hom_mm(&self) -> usize {
        let field = self.ring.field();
        let col_pieces: Vec<Rc<HomMMPiece>> = self
            .minor_degrees
            .iter()
            .map(|&d| self.hom_mm_piece(d))
            .collect();
        let total_cols: usize = col_pieces.iter().map(|p| p.class_dim).sum();
        if total_cols == 0 {
            return 0;
        }
        let mut blocks = Vec::new();
        for (l, s) in self.syzygies.iter().enumerate() {
            let target = self.hom_mm_piece(self.syzygy_degrees[l]);
            if target.class_dim == 0 {
                continue;
            }
            let mut ambient = ExactMatrix::zero(field, target.mpi.dim, total_cols);
            let mut off = 0usize;
            for (jm, from) in col_pieces.iter().enumerate() {
                let coeff = s.component(jm);
                if !coeff.is_zero() && from.class_dim > 0 {
                    let scaled = scalar_mult_mpi(self.ring, coeff, &from.mpi, &target.mpi)
                        .multiply(&from.reps);
                    for r in 0..scaled.rows() {
                        for c in 0..scaled.cols() {
                            ambient.set(r, off + c, scaled.get(r, c));
                        }
                    }
                }
                off += from.class_dim;
            }
            blocks.push(target.project(&ambient));
        }
        let constraint = stack_all(field, blocks, total_cols);
        total_cols - constraint.rank()
    }

    /// The degree-zero strand of the five-term exact sequence.
    pub fn five_term(&self) -> Result<FiveTermDegreeZero, HomExtError> {
        let ext1 = self.ext1_r_mm();
        let tangent = self.tangent_map(&ext1)?;
        let e2 = self.hom_i_hom_mm();
        let rank_delta0 = tangent.rank;
        assert!(
            rank_delta0 <= e2,
            "the image of the connecting map exceeds its codomain"
        );
        let ext1_a = ext1.dimension - rank_delta0;
        Ok(FiveTermDegreeZero {
            hom_mm: ext1.hom_mm,
            ext1_r: ext1.dimension,
            ext1_a,
            e2_01: e2,
            ext2_a: None,
            rank_delta0,
            ker_ext2_a_to_ext2_r: e2 - rank_delta0,
            delta0_surjective: rank_delta0 == e2,
            delta0_injective: ext1_a == 0,
            ext2_map_injective: rank_delta0 == e2,
        })
    }

    fn default_degree_bound(&self) -> i64 {
        let max_minor = self.minor_degrees.iter().copied().max().unwrap_or(0);
        max_minor + self.ring.n() as i64 + 3
    }

    /// Prunes a presentation over A to a minimal one: any constant entry
    /// means the relation expresses one generator through the others, so that
    /// generator and relation can be eliminated. The resolution machinery
    /// requires (and asserts) minimal presentations.
    fn minimalize_presentation(
        &self,
        twists: Vec<i64>,
        relations: &[ModuleElement],
    ) -> (Vec<i64>, Vec<ModuleElement>) {
        let mut twists = twists;
        let unit_mono = Monomial::new(vec![0; self.ring.nvars()]);
        let mut entries: Vec<Vec<Polynomial>> = (0..twists.len())
            .map(|l| {
                relations
                    .iter()
                    .map(|r| self.quotient.reduce_poly(r.component(l)))
                    .collect()
            })
            .collect();
        loop {
            let ncols = entries.first().map_or(0, Vec::len);
            let mut found = None;
            'outer: for (l, row) in entries.iter().enumerate() {
                for (k, e) in row.iter().enumerate() {
                    if !e.is_zero() && e.degree() == Some(0) {
                        found = Some((l, k));
                        break 'outer;
                    }
                }
            }
            let Some((l, k)) = found else { break };
            let pivot = entries[l][k]
                .terms()
                .next()
                .expect("nonzero constant")
                .1;
            let scale = pivot.inverse();
            let row_l: Vec<Polynomial> = entries[l].clone();
            let col_k: Vec<Polynomial> = entries.iter().map(|row| row[k].clone()).collect();
            for kp in 0..ncols {
                if kp == k || row_l[kp].is_zero() {
                    continue;
                }
                let factor = row_l[kp].mul_term(&unit_mono, scale);
                for (lp, row) in entries.iter_mut().enumerate() {
                    let adjusted = row[kp].sub(&factor.mul(&col_k[lp]));
                    row[kp] = self.quotient.reduce_poly(&adjusted);
                }
            }
            entries.remove(l);
            twists.remove(l);
            for row in &mut entries {
                row.remove(k);
            }
        }
        let module = GradedFreeModule::new(self.ring, twists.clone());
        let ncols = entries.first().map_or(0, Vec::len);
        let relations: Vec<ModuleElement> = (0..ncols)
            .map(|k| module.element(entries.iter().map(|row| row[k].clone()).collect()))
            .filter(|e| !e.is_zero())
            .collect();
        (twists, relations)
    }

    /// dim ₀Ext^i_A(coker, T)₀ from a truncated minimal A-free resolution of
    /// coker(relations ⊆ ⊕A(−target_twists)), with T = A or M selected by
    /// `into_m`.
    fn ext_over_a(
        &self,
        target_twists: Vec<i64>,
        relations: &[ModuleElement],
        i: usize,
        into_m: bool,
        max_degree: Option<i64>,
    ) -> Result<usize, HomExtError> {
        let bound = max_degree.unwrap_or_else(|| self.default_degree_bound());
        let (min_twists, min_relations) = self.minimalize_presentation(target_twists, relations);
        let target = GradedFreeModule::new(self.ring, min_twists);
        let bounds = ResolutionBounds {
            max_homological: i + 1,
            max_degree: bound,
        };
        let res = self
            .quotient
            .minimal_free_resolution_quotient(&target, &min_relations, bounds)?;
        let gen_degrees = |k: usize| -> Vec<i64> {
            res.modules
                .get(k)
                .map(|m| m.twists().to_vec())
                .unwrap_or_default()
        };
        let piece = |d: i64| -> Rc<QuotientPiece> {
            if into_m {
                self.m_piece(d)
            } else {
                self.a_piece(d)
            }
        };
        let hom_dim = |degs: &[i64]| -> usize { degs.iter().map(|&d| piece(d).dim()).sum() };
        // ∂^k: Hom(F_k, T)₀ → Hom(F_{k+1}, T)₀, precomposition with the
        // differential F_{k+1} → F_k.
        let del = |k: usize| -> ExactMatrix {
            let from_degs = gen_degrees(k);
            let to_degs = gen_degrees(k + 1);
            let field = self.ring.field();
            let rows = hom_dim(&to_degs);
            let cols = hom_dim(&from_degs);
            let mut out = ExactMatrix::zero(field, rows, cols);
            if rows == 0 || cols == 0 {
                return out;
            }
            let diff = &res.differentials[k];
            let mut row_off = 0usize;
            for (beta, &db) in to_degs.iter().enumerate() {
                let to_piece = piece(db);
                let mut col_off = 0usize;
                for (alpha, &da) in from_degs.iter().enumerate() {
                    let from_piece = piece(da);
                    let entry = diff[beta].component(alpha);
                    if !entry.is_zero() {
                        let block = mult_map(self.ring, entry, &from_piece, &to_piece);
                        for r in 0..block.rows() {
                            for c in 0..block.cols() {
                                out.set(row_off + r, col_off + c, block.get(r, c));
                            }
                        }
                    }
                    col_off += from_piece.dim();
                }
                row_off += to_piece.dim();
            }
            out
        };
        let di = del(i);
        let kernel = di.cols() - di.rank();
        if i == 0 {
            return Ok(kernel);
        }
        let prev = del(i - 1);
        Ok(kernel - prev.rank())
    }

    /// dim ₀Ext^i_A(M,M), i = 1 or 2, via a truncated minimal A-free
    /// resolution of M.
    pub fn ext_a_mm_truncated(
        &self,
        i: usize,
        max_degree: Option<i64>,
    ) -> Result<usize, HomExtError> {
        assert!(i == 1 || i == 2, "only Ext¹ and Ext² are needed");
        self.ext_over_a(
            self.b_twists(),
            &self.presentation.relation_columns(),
            i,
            true,
            max_degree,
        )
    }

    /// ₀Hom_A(I/I²,A) and ₀Ext¹_A(I/I²,A) from the conormal presentation
    /// (syzygies of I reduced modulo I).
    pub fn ext1_a_conormal(
        &self,
        max_degree: Option<i64>,
    ) -> Result<ConormalReport, HomExtError> {
        let hom = self.ext_over_a(self.minor_degrees.clone(), &self.syzygies, 0, false, max_degree)?;
        let ext1 =
            self.ext_over_a(self.minor_degrees.clone(), &self.syzygies, 1, false, max_degree)?;
        Ok(ConormalReport {
            hom,
            ext1,
            degree_bound: max_degree.unwrap_or_else(|| self.default_degree_bound()),
        })
    }
}

/// Ambient-coordinate matrix of multiplication by the scalar polynomial `s`
/// between two matrix-shaped pieces with the same twist lists.
fn scalar_mult_mpi(
    ring: Ring,
    s: &Polynomial,
    from: &MatrixPieceIndex,
    to: &MatrixPieceIndex,
) -> ExactMatrix {
    let field = ring.field();
    let mut out = ExactMatrix::zero(field, to.dim, from.dim);
    for u in 0..from.dim {
        let (i, j, mono) = from.unit(u);
        let prod = s.mul_term(mono, field.one());
        to.accumulate(&mut out, u, i, j, &prod);
    }
    out
}

/// The adjugate of a square polynomial matrix, Laplace convention: the (i,k)
/// entry is (−1)^{i+k} times the determinant with row k and column i removed,
/// so adj(S)·S = det(S)·Id.
fn adjugate(ring: Ring, sub: &[Vec<Polynomial>]) -> Vec<Vec<Polynomial>> {
    let t = sub.len();
    let mut adj = vec![vec![Polynomial::zero(ring); t]; t];
    for i in 0..t {
        for k in 0..t {
            let rows: Vec<usize> = (0..t).filter(|&r| r != k).collect();
            let cols: Vec<usize> = (0..t).filter(|&c| c != i).collect();
            let minor = poly_det(ring, sub, &rows, &cols);
            adj[i][k] = if (i + k) % 2 == 0 { minor } else { minor.neg() };
        }
    }
    adj
}

fn poly_det(ring: Ring, m: &[Vec<Polynomial>], rows: &[usize], cols: &[usize]) -> Polynomial {
    if rows.is_empty() {
        return Polynomial::constant(ring, ring.field().one());
    }
    let mut acc = Polynomial::zero(ring);
    let r = rows[0];
    let rest: Vec<usize> = rows[1..].to_vec();
    for (pos, &c) in cols.iter().enumerate() {
        let e = &m[r][c];
        if e.is_zero() {
            continue;
        }
        let sub_cols: Vec<usize> = cols
            .iter()
            .enumerate()
            .filter(|&(p, _)| p != pos)
            .map(|(_, &cc)| cc)
            .collect();
        let sub = poly_det(ring, m, &rest, &sub_cols);
        let term = e.mul(&sub);
        acc = if pos % 2 == 0 {
            acc.add(&term)
        } else {
            acc.sub(&term)
        };
    }
    acc
}

// ---------------------------------------------------------------------------
// Result types
// ---------------------------------------------------------------------------

/// ₀Ext¹_R(M,M): dimension, cocycle representatives η: G* → F* (single-term
/// matrices chosen as a complement basis), and the rank bookkeeping of the
/// four-term sequence 0 → Hom(M,M) → Hom(F*,M) → Hom(G*,M) → Ext¹ → 0.
pub struct Ext1R {
    pub dimension: usize,
    pub cocycles: Vec<Vec<Vec<Polynomial>>>,
    pub hom_mm: usize,
    pub hom_fstar_m: usize,
    pub hom_gstar_m: usize,
}

/// The matrix of the trace-of-adjugate map on the cocycle basis, with rows
/// grouped by maximal minor (class coordinates of A in the minor's degree).
pub struct TangentMap {
    pub matrix: ExactMatrix,
    pub rank: usize,
    pub minor_degrees: Vec<i64>,
}

/// Degree-zero strand of the five-term exact sequence
/// 0 → Ext¹_A(M,M) → Ext¹_R(M,M) → Hom(I,Hom(M,M)) → Ext²_A(M,M) → Ext²_R(M,M).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiveTermDegreeZero {
    pub hom_mm: usize,
    pub ext1_a: usize,
    pub ext1_r: usize,
    pub e2_01: usize,
    pub ext2_a: Option<usize>,
    pub rank_delta0: usize,
    pub ker_ext2_a_to_ext2_r: usize,
    pub delta0_surjective: bool,
    pub delta0_injective: bool,
    pub ext2_map_injective: bool,
}

/// ₀Hom and ₀Ext¹ of the conormal module I/I² into A, with the internal
/// degree guard used by the truncated resolution.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConormalReport {
    pub hom: usize,
    pub ext1: usize,
    pub degree_bound: i64,
}

// ---------------------------------------------------------------------------
// General degree-zero Hom between presentations
// ---------------------------------------------------------------------------

/// Which ring the Hom space is taken over: the polynomial ring itself, or its
/// quotient by the listed ideal generators (module structures through the
/// surjection).
pub enum HomBase<'a> {
    OverR,
    OverQuotient(&'a [Polynomial]),
}

/// A basis of degree-zero homomorphisms between presented modules. Each basis
/// element is a grid of polynomials: entry (r, l) is the r-th target-component
/// of the image of generator l of the source module.
pub struct GradedHomSpace {
    pub source: GradedModulePresentation,
    pub target: GradedModulePresentation,
    pub degree: i64,
    pub basis: Vec<Vec<Vec<Polynomial>>>,
}

impl GradedHomSpace {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// Checks by Groebner normal form that every basis element annihilates
    /// the source relations inside the target module.
    pub fn annihilates_relations(&self, ideal: Option<&[Polynomial]>) -> bool {
        let ring = self.target.target().ring();
        let module = self.target.target().clone();
        let mut gens = self.target.relation_columns();
        if let Some(ideal_gens) = ideal {
            for f in ideal_gens {
                for s in 0..module.rank() {
                    let mut comps = vec![Polynomial::zero(ring); module.rank()];
                    comps[s] = f.clone();
                    gens.push(module.element(comps));
                }
            }
        }
        let gb = buchberger(&module, &gens);
        let n_entries = self.source.entries();
        for hom in &self.basis {
            for k in 0..self.source.source().rank() {
                let mut image = module.zero_element();
                for l in 0..self.source.target().rank() {
                    let coeff = &n_entries[l][k];
                    if coeff.is_zero() {
                        continue;
                    }
                    let col: Vec<Polynomial> =
                        (0..module.rank()).map(|r| hom[r][l].mul(coeff)).collect();
                    image = image.add(&module.element(col));
                }
                if !normal_form(&image, &gb).is_zero() {
                    return false;
                }
            }
        }
        true
    }
}

/// Basis of degree-zero homomorphisms coker(N) → coker(P), over R or over the
/// quotient by an ideal. A homomorphism assigns to each generator of N a class
/// in P of the same degree such that every relation of N maps to zero.
pub fn hom_degree_zero(
    n: &GradedModulePresentation,
    p: &GradedModulePresentation,
    over: HomBase,
) -> GradedHomSpace {
    let ring = p.target().ring();
    let field = ring.field();
    let p_twists = p.target().twists().to_vec();
    let build_piece = |d: i64| -> QuotientPiece {
        let index = PieceIndex::new(ring, &p_twists, d);
        let mut span = p.map_matrix(d);
        if let HomBase::OverQuotient(gens) = &over {
            for f in gens.iter().filter(|f| !f.is_zero()) {
                let df = i64::from(f.degree().expect("nonzero ideal generator"));
                for (comp, &tw) in p_twists.iter().enumerate() {
                    let basis = GradedPieceBasis::new(ring, d - tw - df);
                    let mut block = ExactMatrix::zero(field, index.dim, basis.len());
                    for (col, mono) in basis.monomials().iter().enumerate() {
                        let prod = f.mul_term(mono, field.one());
                        index.accumulate(&mut block, col, comp, &prod);
                    }
                    span = span.hstack(&block);
                }
            }
        }
        QuotientPiece::new(index, &span)
    };
    let gen_degrees = n.target().twists().to_vec();
    let rel_degrees = n.source().twists().to_vec();
    let gen_pieces: Vec<QuotientPiece> = gen_degrees.iter().map(|&d| build_piece(d)).collect();
    let total_cols: usize = gen_pieces.iter().map(|q| q.dim()).sum();
    let mut blocks = Vec::new();
    for (k, &sk) in rel_degrees.iter().enumerate() {
        let target_piece = build_piece(sk);
        let mut block = ExactMatrix::zero(field, target_piece.dim(), total_cols);
        let mut off = 0usize;
        for (l, from) in gen_pieces.iter().enumerate() {
            let coeff = &n.entries()[l][k];
            if !coeff.is_zero() {
                let sub = mult_map(ring, coeff, from, &target_piece);
                for r in 0..sub.rows() {
                    for c in 0..sub.cols() {
                        block.set(r, off + c, sub.get(r, c));
                    }
                }
            }
            off += from.dim();
        }
        blocks.push(block);
    }
    let constraint = stack_all(field, blocks, total_cols);
    let kernel = constraint.kernel_basis();
    let mut basis = Vec::new();
    for h in 0..kernel.cols() {
        let mut grid =
            vec![vec![Polynomial::zero(ring); gen_degrees.len()]; p_twists.len()];
        let mut off = 0usize;
        for (l, piece) in gen_pieces.iter().enumerate() {
            for cls in 0..piece.dim() {
                let coeff = kernel.get(off + cls, h);
                if coeff.is_zero() {
                    continue;
                }
                let (comp, mono) = piece.section(cls);
                let term =
                    Polynomial::constant(ring, coeff).mul_term(mono, field.one());
                grid[comp][l] = grid[comp][l].add(&term);
            }
            off += piece.dim();
        }
        basis.push(grid);
    }
    GradedHomSpace {
        source: n.clone(),
        target: p.clone(),
        degree: 0,
        basis,
    }
}

// ---------------------------------------------------------------------------
// Free-function entry points over a bare sample
// ---------------------------------------------------------------------------

pub fn ext1_r_mm(m: &GradedMatrix) -> Result<Ext1R, HomExtError> {
    Ok(StandardContext::new(m.clone())?.ext1_r_mm())
}

pub fn tangent_map_em(m: &GradedMatrix, ext1: &Ext1R) -> Result<TangentMap, HomExtError> {
    StandardContext::new(m.clone())?.tangent_map(ext1)
}

pub fn hom_i_a(m: &GradedMatrix) -> Result<usize, HomExtError> {
    Ok(StandardContext::new(m.clone())?.hom_i_a())
}

pub fn five_term_degree_zero(m: &GradedMatrix) -> Result<FiveTermDegreeZero, HomExtError> {
    StandardContext::new(m.clone())?.five_term()
}

pub fn ext_a_mm_truncated(
    m: &GradedMatrix,
    i: usize,
    max_degree: Option<i64>,
) -> Result<usize, HomExtError> {
    StandardContext::new(m.clone())?.ext_a_mm_truncated(i, max_degree)
}

pub fn ext1_a_conormal(
    m: &GradedMatrix,
    max_degree: Option<i64>,
) -> Result<ConormalReport, HomExtError> {
    StandardContext::new(m.clone())?.ext1_a_conormal(max_degree)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::determinantal::{general_standard_sample, DegreeMatrixSpec};
    use crate::formulas::lambda;

    fn sample(n: usize, b: &[i64], a: &[i64]) -> GradedMatrix {
        let spec = DegreeMatrixSpec::new(n, b.to_vec(), a.to_vec()).unwrap();
        general_standard_sample(&spec).unwrap().0
    }

    fn context(n: usize, b: &[i64], a: &[i64]) -> StandardContext {
        StandardContext::new(sample(n, b, a)).unwrap()
    }

    #[test]
    fn hom_from_free_rank_one_counts_degree_zero_sections() {
        let m = sample(2, &[0, 0], &[1, 1, 1]);
        let p = m.presentation_of_m();
        let ring = m.ring();
        let r_presentation = GradedModulePresentation::new(
            GradedFreeModule::new(ring, vec![0]),
            GradedFreeModule::new(ring, vec![]),
            vec![vec![]],
        )
        .unwrap();
        let hom = hom_degree_zero(&r_presentation, &p, HomBase::OverR);
        assert_eq!(hom.dimension() as u64, p.hilbert_function(0));
        assert!(hom.annihilates_relations(None));
    }

    #[test]
    fn hom_mm_is_one_dimensional_for_small_standard_samples() {
        for (n, b, a) in [
            (2usize, vec![0i64, 0], vec![1i64, 1, 1]),
            (2, vec![0, 0], vec![1, 1, 1, 3]),
            (3, vec![0, 0], vec![1, 1, 1]),
        ] {
            let ctx = context(n, &b, &a);
            assert_eq!(ctx.hom_mm(), 1, "b={b:?} a={a:?}");
        }
    }

    #[test]
    fn hom_degree_zero_agrees_with_the_piece_machinery() {
        let m = sample(2, &[0, 0], &[1, 1, 2]);
        let ctx = StandardContext::new(m.clone()).unwrap();
        let p = m.presentation_of_m();
        let over_r = hom_degree_zero(&p, &p, HomBase::OverR);
        let minors = maximal_minors(&m);
        let over_a = hom_degree_zero(&p, &p, HomBase::OverQuotient(minors.as_slice()));
        assert_eq!(over_r.dimension(), ctx.hom_mm());
        assert_eq!(over_a.dimension(), ctx.hom_mm());
        assert!(over_r.annihilates_relations(None));
        assert!(over_a.annihilates_relations(Some(minors.as_slice())));
    }

    #[test]
    fn ext1_r_dimension_equals_lambda_when_hom_mm_is_k() {
        for (n, b, a) in [
            (2usize, vec![0i64, 0], vec![1i64, 1, 1]),
            (2, vec![0, 0], vec![1, 1, 1, 3]),
            (3, vec![0, 0], vec![1, 1, 1, 1]),
        ] {
            let spec = DegreeMatrixSpec::new(n, b.clone(), a.clone()).unwrap();
            let ctx = context(n, &b, &a);
            let e = ctx.ext1_r_mm();
            assert_eq!(e.hom_mm, 1);
            assert_eq!(e.dimension as i64, lambda(&spec), "b={b:?} a={a:?}");
        }
    }

    #[test]
    fn points_in_projective_three_space_match_the_closed_forms() {
        // 2×4 linear matrix in four variables: λ = c(c+1)+c−2 = 13 at c = 3,
        // and ₀Ext¹_A(M,M) = c−2 = 1 by both routes.
        let ctx = context(3, &[0, 0], &[1, 1, 1, 1]);
        let five = ctx.five_term().unwrap();
        assert_eq!(five.ext1_r, 13);
        assert_eq!(five.ext1_a, 1);
        assert_eq!(ctx.ext_a_mm_truncated(1, None).unwrap(), 1);
    }

    #[test]
    fn trace_of_adjugate_sends_the_trivial_direction_to_zero() {
        let m = sample(2, &[0, 0], &[1, 1, 2]);
        let ctx = StandardContext::new(m.clone()).unwrap();
        let images = ctx.tangent_image(m.entries());
        assert!(images.iter().all(Polynomial::is_zero));
    }

    #[test]
    fn adjugate_satisfies_the_laplace_identity() {
        let m = sample(2, &[0, 0], &[1, 1, 2, 3]);
        let ring = m.ring();
        let sub: Vec<Vec<Polynomial>> = (0..2)
            .map(|i| (0..2).map(|j| m.entry(i, j + 1).clone()).collect())
            .collect();
        let adj = adjugate(ring, &sub);
        let det = poly_det(ring, &sub, &[0, 1], &[0, 1]);
        for i in 0..2 {
            for j in 0..2 {
                let mut acc = Polynomial::zero(ring);
                for k in 0..2 {
                    acc = acc.add(&adj[i][k].mul(&sub[k][j]));
                }
                if i == j {
                    assert_eq!(acc, det);
                } else {
                    assert!(acc.is_zero());
                }
            }
        }
    }

    #[test]
    fn five_term_bookkeeping_for_a_quartic_column() {
        // (0,0; 1,1,1,3) in three variables: λ = 8 and ₀Ext¹_A(M,M) = 2, so
        // the tangent map has rank 6; the truncated route returns the same 2.
        let spec = DegreeMatrixSpec::new(2, vec![0, 0], vec![1, 1, 1, 3]).unwrap();
        let ctx = context(2, &[0, 0], &[1, 1, 1, 3]);
        let five = ctx.five_term().unwrap();
        assert_eq!(five.ext1_r as i64, lambda(&spec));
        assert_eq!(five.ext1_r, 8);
        assert_eq!(five.ext1_a, 2);
        assert_eq!(five.rank_delta0, 6);
        assert_eq!(five.ext1_a, ctx.ext_a_mm_truncated(1, None).unwrap());
        assert_eq!(
            five.ker_ext2_a_to_ext2_r,
            five.e2_01 - five.rank_delta0
        );
        assert_eq!(five.delta0_surjective, five.ext2_map_injective);
        let text = serde_json::to_string(&five).unwrap();
        let back: FiveTermDegreeZero = serde_json::from_str(&text).unwrap();
        assert_eq!(back, five);
    }

    #[test]
    fn good_samples_realize_e2_as_hom_into_the_ring() {
        // For a good determinantal sample Hom_A(M,M) ≅ A, so the E₂ corner
        // equals ₀Hom_R(I,A).
        for (n, b, a) in [
            (2usize, vec![0i64, 0], vec![1i64, 1, 1]),
            (3, vec![0, 0], vec![1, 1, 2]),
        ] {
            let ctx = context(n, &b, &a);
            assert!(ctx.codimension_report().good);
            assert_eq!(ctx.hom_i_hom_mm(), ctx.hom_i_a(), "b={b:?} a={a:?}");
        }
    }

    #[test]
    fn large_depth_regime_has_vanishing_first_ext() {
        // With n − c ≥ 2 the sample is deep enough that ₀Ext¹_A(M,M) = 0.
        let ctx = context(4, &[0, 0], &[1, 1, 1]);
        let five = ctx.five_term().unwrap();
        assert_eq!(five.ext1_a, 0);
        assert!(five.delta0_injective);
    }

    #[test]
    fn conormal_hom_matches_hom_i_a() {
        for (n, b, a) in [
            (2usize, vec![0i64, 0], vec![1i64, 1, 1]),
            (2, vec![0, 0], vec![1, 1, 2]),
        ] {
            let ctx = context(n, &b, &a);
            let conormal = ctx.ext1_a_conormal(None).unwrap();
            assert_eq!(conormal.hom, ctx.hom_i_a(), "b={b:?} a={a:?}");
        }
    }

    #[test]
    fn complete_intersection_conormal_is_free() {
        // (b; a) = (0,0; 0,2,3): the constant column makes I a complete
        // intersection of type (2,3) in three variables, with a redundant
        // third generator among the minors. The normal module is free, so
        // ₀Hom(I,A) = H_A(2) + H_A(3) and the obstruction space vanishes.
        let ctx = context(2, &[0, 0], &[0, 2, 3]);
        let expected = ctx.hilbert_a(2) + ctx.hilbert_a(3);
        assert_eq!(ctx.hom_i_a(), expected);
        let conormal = ctx.ext1_a_conormal(None).unwrap();
        assert_eq!(conormal.hom, expected);
        assert_eq!(conormal.ext1, 0);
    }

    #[test]
    fn zero_matrix_is_rejected() {
        let spec = DegreeMatrixSpec::new(2, vec![0, 0], vec![1, 1, 1]).unwrap();
        let ring = spec.ring().unwrap();
        let zero = vec![vec![Polynomial::zero(ring); 3]; 2];
        let m = GradedMatrix::from_entries(spec, zero).unwrap();
        assert!(matches!(
            StandardContext::new(m),
            Err(HomExtError::NotStandardDeterminantal(_))
        ));
    }
}

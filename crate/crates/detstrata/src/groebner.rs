//! Gröbner bases, syzygies and minimal free resolutions for graded
//! submodules of free modules over R = k[x0..xn], and over graded quotients
//! A = R/I via lifting.
//!
//! The module term order is position-over-term refining grevlex: a term in a
//! lower-indexed component beats any term in a higher-indexed one, and ties
//! within a component are broken by grevlex on the monomials. Buchberger runs
//! use the normal selection strategy (lowest true S-pair degree first, then
//! lexicographic on the pair indices) so results are deterministic; bases are
//! auto-reduced, which makes the output unique for a given submodule.

use crate::arith::{ExactMatrix, Field};
use crate::poly::{graded_piece_dimension, GradedPieceBasis, Monomial, Polynomial, Ring};
use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum GroebnerError {
    /// A generator needed by the computation has degree beyond the configured
    /// internal degree bound; results would be silently wrong if truncated.
    #[error("generator of degree {needed} exceeds the internal degree bound {bound}")]
    TruncationExceeded { needed: i64, bound: i64 },
}

/// A graded free module ⊕_k R(−twists[k]); generator e_k has degree
/// twists[k].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedFreeModule {
    ring: Ring,
    twists: Vec<i64>,
}

impl GradedFreeModule {
    pub fn new(ring: Ring, twists: Vec<i64>) -> Self {
        GradedFreeModule { ring, twists }
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn rank(&self) -> usize {
        self.twists.len()
    }

    pub fn twists(&self) -> &[i64] {
        &self.twists
    }

    /// Wraps component polynomials into an element, checking homogeneity:
    /// every nonzero component must be homogeneous and all components must
    /// have the same total degree after the twist shift.
    pub fn element(&self, components: Vec<Polynomial>) -> ModuleElement {
        assert_eq!(components.len(), self.rank(), "component count != rank");
        let elem = ModuleElement { components };
        assert!(
            self.degree_of(&elem).is_some() || elem.is_zero(),
            "module element is not homogeneous"
        );
        elem
    }

    pub fn zero_element(&self) -> ModuleElement {
        ModuleElement {
            components: vec![Polynomial::zero(self.ring); self.rank()],
        }
    }

    /// e_k as an element.
    pub fn basis_element(&self, k: usize) -> ModuleElement {
        let mut z = self.zero_element();
        z.components[k] = Polynomial::constant(self.ring, self.ring.field().one());
        z
    }

    /// Uniform total degree of a nonzero homogeneous element, None for zero
    /// or inhomogeneous input.
    pub fn degree_of(&self, elem: &ModuleElement) -> Option<i64> {
        let mut degree = None;
        for (k, comp) in elem.components.iter().enumerate() {
            if comp.is_zero() {
                continue;
            }
            if !comp.is_homogeneous() {
                return None;
            }
            let d = i64::from(comp.degree().expect("nonzero")) + self.twists[k];
            match degree {
                None => degree = Some(d),
                Some(prev) if prev != d => return None,
                _ => {}
            }
        }
        degree
    }

    /// dim_k F_d = Σ_k dim R_{d − twists[k]}.
    pub fn piece_dimension(&self, degree: i64) -> u64 {
        self.twists
            .iter()
            .map(|&t| graded_piece_dimension(degree - t, self.ring.n()))
            .sum()
    }
}

/// An element of a graded free module, stored as one polynomial per
/// component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleElement {
    components: Vec<Polynomial>,
}

impl ModuleElement {
    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    pub fn component(&self, k: usize) -> &Polynomial {
        &self.components[k]
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Polynomial::is_zero)
    }

    /// Lead term under POT-over-grevlex: the grevlex lead of the first
    /// nonzero component.
    pub fn lead_term(&self) -> Option<(usize, &Monomial, u64)> {
        for (k, comp) in self.components.iter().enumerate() {
            if let Some((m, c)) = comp.lead_term() {
                return Some((k, m, c.value()));
            }
        }
        None
    }

    pub fn add(&self, other: &ModuleElement) -> ModuleElement {
        ModuleElement {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &ModuleElement) -> ModuleElement {
        ModuleElement {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    /// Multiply by the term c·m.
    pub fn mul_term(&self, m: &Monomial, c: u64) -> ModuleElement {
        let field = self.components[0].ring().field();
        let ce = field.elem_u64(c);
        ModuleElement {
            components: self.components.iter().map(|p| p.mul_term(m, ce)).collect(),
        }
    }

    pub fn scale(&self, c: u64) -> ModuleElement {
        let field = self.components[0].ring().field();
        let ce = field.elem_u64(c);
        ModuleElement {
            components: self.components.iter().map(|p| p.scale(ce)).collect(),
        }
    }
}

/// A Gröbner basis of a graded submodule, auto-reduced: lead coefficients
/// are 1, no lead term divides another, and every element is fully reduced
/// against the rest. Auto-reduction makes the basis unique, which is tested
/// under permutation of the input generators.
#[derive(Debug, Clone)]
pub struct GroebnerBasis {
    module: GradedFreeModule,
    elements: Vec<ModuleElement>,
    reduced: bool,
}

impl GroebnerBasis {
    pub fn module(&self) -> &GradedFreeModule {
        &self.module
    }

    pub fn elements(&self) -> &[ModuleElement] {
        &self.elements
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    /// Lead terms of the basis: the initial submodule's generators.
    pub fn initial_terms(&self) -> Vec<(usize, Monomial)> {
        self.elements
            .iter()
            .map(|g| {
                let (s, m, _) = g.lead_term().expect("basis elements are nonzero");
                (s, m.clone())
            })
            .collect()
    }

    /// Number of standard monomials of total degree d in F/N: monomials at
    /// position k of degree d − twist[k] divisible by no initial term at k.
    pub fn quotient_piece_dimension(&self, degree: i64) -> u64 {
        self.standard_monomials(degree).len() as u64
    }

    /// The standard monomials (position, monomial) of degree d, ordered by
    /// position then descending grevlex: the canonical basis of (F/N)_d.
    pub fn standard_monomials(&self, degree: i64) -> Vec<(usize, Monomial)> {
        let ring = self.module.ring();
        let leads = self.initial_terms();
        let mut out = Vec::new();
        for (k, &t) in self.module.twists().iter().enumerate() {
            let basis = GradedPieceBasis::new(ring, degree - t);
            for m in basis.monomials() {
                let reducible = leads
                    .iter()
                    .any(|(s, lead)| *s == k && lead.divides(m));
                if !reducible {
                    out.push((k, m.clone()));
                }
            }
        }
        out
    }
}

fn field_of(module: &GradedFreeModule) -> Field {
    module.ring().field()
}

/// Full normal form: every term of the remainder is irreducible by the
/// basis. Returns the remainder and, when `cofactors` is Some, accumulates
/// quotients so that input = Σ cofactor_k · basis_k + remainder.
fn reduce_full(
    module: &GradedFreeModule,
    input: &ModuleElement,
    basis: &[ModuleElement],
    mut cofactors: Option<&mut Vec<Polynomial>>,
) -> ModuleElement {
    let ring = module.ring();
    let field = field_of(module);
    let leads: Vec<(usize, Monomial, u64)> = basis
        .iter()
        .map(|g| {
            let (s, m, c) = g.lead_term().expect("basis elements must be nonzero");
            (s, m.clone(), c)
        })
        .collect();
    let mut work = input.clone();
    let mut remainder = module.zero_element();
    'outer: while let Some((s, m, c)) = work.lead_term() {
        let m = m.clone();
        for (k, (ls, lm, lc)) in leads.iter().enumerate() {
            if *ls == s && lm.divides(&m) {
                let q = lm.quotient_into(&m).expect("divisibility checked");
                let factor = field.mul_raw(c, field.inv_raw(*lc));
                work = work.sub(&basis[k].mul_term(&q, factor));
                if let Some(cof) = cofactors.as_deref_mut() {
                    let add = Polynomial::from_raw_terms(ring, vec![(q, factor)]);
                    cof[k] = cof[k].add(&add);
                }
                continue 'outer;
            }
        }
        // Irreducible lead: move it to the remainder.
        let term = {
            let mut z = module.zero_element();
            z.components[s] = Polynomial::from_raw_terms(ring, vec![(m.clone(), c)]);
            z
        };
        remainder = remainder.add(&term);
        work = work.sub(&term);
    }
    remainder
}

struct Engine {
    module: GradedFreeModule,
    basis: Vec<ModuleElement>,
    /// Row k expresses basis[k] in the original generators.
    rows: Vec<Vec<Polynomial>>,
    /// Syzygies of the original generators found so far (S-pairs that
    /// reduced to zero), as coefficient vectors on the original generators.
    syzygy_rows: Vec<Vec<Polynomial>>,
    tracking: bool,
    use_criteria: bool,
    queue: BinaryHeap<Reverse<(i64, usize, usize)>>,
    norig: usize,
}

impl Engine {
    fn new(module: GradedFreeModule, gens: &[ModuleElement], tracking: bool) -> Self {
        let norig = gens.len();
        let mut engine = Engine {
            module,
            basis: Vec::new(),
            rows: Vec::new(),
            syzygy_rows: Vec::new(),
            tracking,
            // Both Buchberger criteria discard S-pairs whose syzygies may be
            // needed to generate the full syzygy module, so they are only
            // enabled when cofactor tracking is off.
            use_criteria: !tracking,
            queue: BinaryHeap::new(),
            norig,
        };
        for (i, g) in gens.iter().enumerate() {
            assert!(!g.is_zero(), "zero generator passed to Buchberger");
            assert!(
                engine.module.degree_of(g).is_some(),
                "inhomogeneous generator passed to Buchberger"
            );
            let mut row = vec![Polynomial::zero(engine.module.ring()); norig];
            row[i] = Polynomial::constant(engine.module.ring(), field_of(&engine.module).one());
            engine.append(g.clone(), row);
        }
        engine
    }

    fn lead(&self, k: usize) -> (usize, &Monomial, u64) {
        self.basis[k].lead_term().expect("basis element nonzero")
    }

    fn append(&mut self, elem: ModuleElement, row: Vec<Polynomial>) {
        let k = self.basis.len();
        let (s, m, _) = elem.lead_term().expect("appending zero element");
        let twist = self.module.twists()[s];
        let m = m.clone();
        for i in 0..k {
            let (si, mi, _) = self.lead(i);
            if si != s {
                continue;
            }
            let lcm = mi.lcm(&m);
            let deg = i64::from(lcm.degree()) + twist;
            self.queue.push(Reverse((deg, i, k)));
        }
        self.basis.push(elem);
        self.rows.push(row);
    }

    /// Gebauer-Möller style chain skip, in the order-free safe form: the
    /// pair (i,j) is redundant when some other lead divides lcm(i,j) and
    /// both sub-lcms are proper divisors.
    fn chain_skip(&self, i: usize, j: usize) -> bool {
        let (s, mi, _) = self.lead(i);
        let (sj, mj, _) = self.lead(j);
        debug_assert_eq!(s, sj);
        let lcm = mi.lcm(mj);
        for k in 0..self.basis.len() {
            if k == i || k == j {
                continue;
            }
            let (sk, mk, _) = self.lead(k);
            if sk != s || !mk.divides(&lcm) {
                continue;
            }
            if mk.lcm(mi) != lcm && mk.lcm(mj) != lcm {
                return true;
            }
        }
        false
    }

    fn run(&mut self) {
        while let Some(Reverse((_, i, j))) = self.queue.pop() {
            let (_, mi, ci) = self.lead(i);
            let (_, mj, cj) = self.lead(j);
            let (mi, mj, ci, cj) = (mi.clone(), mj.clone(), ci, cj);
            if self.use_criteria {
                // Product criterion: only valid in rank one.
                if self.module.rank() == 1 && mi.coprime(&mj) {
                    continue;
                }
                if self.chain_skip(i, j) {
                    continue;
                }
            }
            let lcm = mi.lcm(&mj);
            let ui = mi.quotient_into(&lcm).expect("lcm divisible by lead");
            let uj = mj.quotient_into(&lcm).expect("lcm divisible by lead");
            let spair = self.basis[i]
                .mul_term(&ui, cj)
                .sub(&self.basis[j].mul_term(&uj, ci));
            let mut cof = vec![Polynomial::zero(self.module.ring()); self.basis.len()];
            let remainder = reduce_full(
                &self.module,
                &spair,
                &self.basis,
                if self.tracking { Some(&mut cof) } else { None },
            );
            if self.tracking {
                // Row for the reduced S-element in original coordinates:
                // cj·ui·row_i − ci·uj·row_j − Σ q_k·row_k.
                let ring = self.module.ring();
                let mut row = vec![Polynomial::zero(ring); self.norig];
                let ti = Polynomial::from_raw_terms(ring, vec![(ui.clone(), cj)]);
                let tj = Polynomial::from_raw_terms(ring, vec![(uj.clone(), ci)]);
                for (l, slot) in row.iter_mut().enumerate() {
                    let mut v = ti.mul(&self.rows[i][l]).sub(&tj.mul(&self.rows[j][l]));
                    for (k, q) in cof.iter().enumerate() {
                        if !q.is_zero() {
                            v = v.sub(&q.mul(&self.rows[k][l]));
                        }
                    }
                    *slot = v;
                }
                if remainder.is_zero() {
                    self.syzygy_rows.push(row);
                } else {
                    self.append(remainder, row);
                }
            } else if !remainder.is_zero() {
                self.append(remainder, Vec::new());
            }
        }
    }

    /// Auto-reduction: drop elements whose lead is divisible by another lead,
    /// fully reduce the survivors against each other, scale leads to 1, and
    /// sort by lead term for a canonical ordering. Cofactor rows follow every
    /// transformation.
    fn auto_reduce(&mut self) {
        let field = field_of(&self.module);
        let ring = self.module.ring();
        // Phase 1: discard redundant leads. Process in a deterministic order
        // (ascending lead) and keep the first representative of each lead.
        let mut order: Vec<usize> = (0..self.basis.len()).collect();
        order.sort_by(|&a, &b| {
            let (sa, ma, _) = self.lead(a);
            let (sb, mb, _) = self.lead(b);
            sa.cmp(&sb).then_with(|| ma.cmp(mb)).then(a.cmp(&b))
        });
        let mut kept: Vec<usize> = Vec::new();
        for &k in &order {
            let (s, m, _) = self.lead(k);
            let redundant = kept.iter().any(|&l| {
                let (ls, lm, _) = self.lead(l);
                ls == s && lm.divides(m)
            });
            if !redundant {
                kept.push(k);
            }
        }
        let mut basis: Vec<ModuleElement> = kept.iter().map(|&k| self.basis[k].clone()).collect();
        let mut rows: Vec<Vec<Polynomial>> = if self.tracking {
            kept.iter().map(|&k| self.rows[k].clone()).collect()
        } else {
            Vec::new()
        };
        // Phase 2: full inter-reduction with lead normalization.
        for idx in 0..basis.len() {
            let others: Vec<ModuleElement> = basis
                .iter()
                .enumerate()
                .filter(|(l, _)| *l != idx)
                .map(|(_, g)| g.clone())
                .collect();
            let mut cof = vec![Polynomial::zero(ring); others.len()];
            let reduced = reduce_full(
                &self.module,
                &basis[idx],
                &others,
                if self.tracking { Some(&mut cof) } else { None },
            );
            // Leads are pairwise non-divisible, so reduction keeps the lead.
            let (_, _, c) = reduced.lead_term().expect("inter-reduction kept the lead");
            let inv = field.inv_raw(c);
            if self.tracking {
                let mut new_row = self.rows_combination(idx, &rows, &cof);
                for slot in &mut new_row {
                    *slot = slot.scale(field.elem_u64(inv));
                }
                rows[idx] = new_row;
            }
            basis[idx] = reduced.scale(inv);
        }
        self.basis = basis;
        self.rows = rows;
    }

    /// Row for basis[idx] − Σ cof_l · (others row l), where others skips idx.
    fn rows_combination(
        &self,
        idx: usize,
        rows: &[Vec<Polynomial>],
        cof: &[Polynomial],
    ) -> Vec<Polynomial> {
        let mut out = rows[idx].clone();
        let mut l = 0usize;
        for (k, row) in rows.iter().enumerate() {
            if k == idx {
                continue;
            }
            let q = &cof[l];
            l += 1;
            if q.is_zero() {
                continue;
            }
            for (slot, r) in out.iter_mut().zip(row.iter()) {
                *slot = slot.sub(&q.mul(r));
            }
        }
        out
    }
}

/// Reduced Gröbner basis of the submodule generated by `gens`.
pub fn buchberger(module: &GradedFreeModule, gens: &[ModuleElement]) -> GroebnerBasis {
    let nonzero: Vec<ModuleElement> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    let mut engine = Engine::new(module.clone(), &nonzero, false);
    engine.run();
    engine.auto_reduce();
    GroebnerBasis {
        module: module.clone(),
        elements: engine.basis,
        reduced: true,
    }
}

/// The unique fully reduced normal form of `elem` modulo the basis.
pub fn normal_form(elem: &ModuleElement, gb: &GroebnerBasis) -> ModuleElement {
    reduce_full(&gb.module, elem, &gb.elements, None)
}

/// Generators of the syzygy module of `gens`: elements σ of the free module
/// with twists deg(gens[k]) such that Σ σ_k · gens_k = 0. The returned set
/// generates all syzygies (S-pair relations plus redundancy relations).
pub fn syzygies(module: &GradedFreeModule, gens: &[ModuleElement]) -> Vec<ModuleElement> {
    let ring = module.ring();
    for g in gens {
        assert!(!g.is_zero(), "syzygies of a zero generator are not graded");
    }
    let mut engine = Engine::new(module.clone(), gens, true);
    engine.run();
    engine.auto_reduce();
    // V rows: each original generator rewritten over the final basis.
    let mut id_minus_vu: Vec<Vec<Polynomial>> = Vec::new();
    for (l, g) in gens.iter().enumerate() {
        let mut cof = vec![Polynomial::zero(ring); engine.basis.len()];
        let rem = reduce_full(module, g, &engine.basis, Some(&mut cof));
        assert!(rem.is_zero(), "generator fails to reduce over its own basis");
        let mut row = vec![Polynomial::zero(ring); gens.len()];
        row[l] = Polynomial::constant(ring, ring.field().one());
        for (k, q) in cof.iter().enumerate() {
            if q.is_zero() {
                continue;
            }
            for (slot, u) in row.iter_mut().zip(engine.rows[k].iter()) {
                *slot = slot.sub(&q.mul(u));
            }
        }
        if row.iter().any(|p| !p.is_zero()) {
            id_minus_vu.push(row);
        }
    }
    let twists: Vec<i64> = gens
        .iter()
        .map(|g| module.degree_of(g).expect("homogeneous generator"))
        .collect();
    let syz_module = GradedFreeModule::new(ring, twists);
    let mut out = Vec::new();
    for row in engine.syzygy_rows.iter().chain(id_minus_vu.iter()) {
        if row.iter().all(Polynomial::is_zero) {
            continue;
        }
        let elem = syz_module.element(row.clone());
        debug_assert!(
            apply_row(module, gens, &elem).is_zero(),
            "syzygy fails to annihilate the generators"
        );
        out.push(elem);
    }
    out
}

/// Σ σ_k · gens_k, the composition check for syzygy rows.
pub fn apply_row(
    module: &GradedFreeModule,
    gens: &[ModuleElement],
    syzygy: &ModuleElement,
) -> ModuleElement {
    let mut acc = module.zero_element();
    for (k, coeff) in syzygy.components().iter().enumerate() {
        if coeff.is_zero() {
            continue;
        }
        for (m, c) in coeff.terms() {
            acc = acc.add(&gens[k].mul_term(m, c.value()));
        }
    }
    acc
}

/// Krull dimension of F/N for a rank-one module (that is, of R/I): the size
/// of the largest variable subset S such that no initial-ideal generator is
/// supported inside S. Returns None when I is the unit ideal. Supports up to
/// 16 variables; callers stay far below that.
pub fn krull_dimension(gb: &GroebnerBasis) -> Option<usize> {
    assert_eq!(gb.module.rank(), 1, "Krull dimension expects an ideal");
    let nvars = gb.module.ring().nvars();
    assert!(nvars <= 16, "variable subset enumeration capped at 16");
    let leads: Vec<Monomial> = gb.initial_terms().into_iter().map(|(_, m)| m).collect();
    if leads.iter().any(Monomial::is_one) {
        return None;
    }
    let mut best: Option<usize> = None;
    for mask in 0u32..(1 << nvars) {
        let size = mask.count_ones() as usize;
        if best.is_some_and(|b| size <= b) {
            continue;
        }
        let independent = leads.iter().all(|m| {
            m.exps()
                .iter()
                .enumerate()
                .any(|(i, &e)| e > 0 && mask & (1 << i) == 0)
        });
        if independent {
            best = Some(size);
        }
    }
    Some(best.unwrap_or(0))
}

/// The matrix of a graded map ⊕_k R(−source[k]) → ⊕_l R(−target[l]) in
/// degree d, with blocks given by multiplication by entries[l][k] (which must
/// be zero or homogeneous of degree source[k] − target[l]). Bases are the
/// descending-grevlex monomial bases of each summand, concatenated in summand
/// order.
pub fn graded_map_matrix(
    ring: Ring,
    target: &[i64],
    source: &[i64],
    entries: &[Vec<Polynomial>],
    degree: i64,
) -> ExactMatrix {
    let field = ring.field();
    let n = ring.n();
    let row_sizes: Vec<usize> = target
        .iter()
        .map(|&t| graded_piece_dimension(degree - t, n) as usize)
        .collect();
    let col_sizes: Vec<usize> = source
        .iter()
        .map(|&t| graded_piece_dimension(degree - t, n) as usize)
        .collect();
    let rows: usize = row_sizes.iter().sum();
    let cols: usize = col_sizes.iter().sum();
    let mut out = ExactMatrix::zero(field, rows, cols);
    let mut row_off = vec![0usize; target.len()];
    {
        let mut acc = 0;
        for (l, off) in row_off.iter_mut().enumerate() {
            *off = acc;
            acc += row_sizes[l];
        }
    }
    let mut col_acc = 0usize;
    for (k, &sk) in source.iter().enumerate() {
        let src_basis = GradedPieceBasis::new(ring, degree - sk);
        for (l, &tl) in target.iter().enumerate() {
            let f = &entries[l][k];
            if f.is_zero() {
                continue;
            }
            debug_assert_eq!(
                i64::from(f.degree().expect("nonzero entry")),
                sk - tl,
                "entry degree does not match the twists"
            );
            let tgt_basis = GradedPieceBasis::new(ring, degree - tl);
            for (j, m) in src_basis.monomials().iter().enumerate() {
                for (t, c) in f.terms() {
                    let prod = t.mul(m);
                    let i = tgt_basis.index_of(&prod).expect("degree bookkeeping");
                    let cur = out.get(row_off[l] + i, col_acc + j);
                    out.set(row_off[l] + i, col_acc + j, cur + c);
                }
            }
        }
        col_acc += src_basis.len();
    }
    out
}

/// Columns of a graded map as module elements of the target: column k lists
/// the image of e_k.
pub fn columns_to_entries(target_rank: usize, columns: &[ModuleElement]) -> Vec<Vec<Polynomial>> {
    let mut entries: Vec<Vec<Polynomial>> = Vec::with_capacity(target_rank);
    for l in 0..target_rank {
        entries.push(columns.iter().map(|c| c.component(l).clone()).collect());
    }
    entries
}

/// Betti numbers β_{i,j}: at homological degree i, the free term has β_{i,j}
/// summands R(−j).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BettiTable {
    entries: BTreeMap<(usize, i64), u64>,
}

impl BettiTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, i: usize, j: i64, count: u64) {
        if count > 0 {
            *self.entries.entry((i, j)).or_insert(0) += count;
        }
    }

    pub fn get(&self, i: usize, j: i64) -> u64 {
        self.entries.get(&(i, j)).copied().unwrap_or(0)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, i64, u64)> + '_ {
        self.entries.iter().map(|(&(i, j), &b)| (i, j, b))
    }

    pub fn max_homological(&self) -> usize {
        self.entries.keys().map(|&(i, _)| i).max().unwrap_or(0)
    }

    /// Largest internal degree j carrying a summand, if any.
    pub fn max_internal_degree(&self) -> Option<i64> {
        self.entries.keys().map(|&(_, j)| j).max()
    }

    pub fn total(&self, i: usize) -> u64 {
        self.entries
            .iter()
            .filter(|(&(hi, _), _)| hi == i)
            .map(|(_, &b)| b)
            .sum()
    }

    /// Formal difference self − other as signed counts, for generization
    /// comparisons; empty when the tables agree.
    pub fn difference(&self, other: &BettiTable) -> BTreeMap<(usize, i64), i64> {
        let mut diff: BTreeMap<(usize, i64), i64> = BTreeMap::new();
        for (i, j, b) in self.entries() {
            *diff.entry((i, j)).or_insert(0) += b as i64;
        }
        for (i, j, b) in other.entries() {
            *diff.entry((i, j)).or_insert(0) -= b as i64;
        }
        diff.retain(|_, v| *v != 0);
        diff
    }

    /// Text rendering: a "total:" row, then one row per internal degree j
    /// with the counts per homological degree i in aligned columns.
    pub fn render_text(&self) -> String {
        if self.entries.is_empty() {
            return "empty table\n".to_string();
        }
        let imax = self.max_homological();
        let jmin = self.entries.keys().map(|&(_, j)| j).min().unwrap();
        let jmax = self.entries.keys().map(|&(_, j)| j).max().unwrap();
        let width = 7usize;
        let mut out = String::new();
        out.push_str(&format!("{:>6}", ""));
        for i in 0..=imax {
            out.push_str(&format!("{i:>width$}"));
        }
        out.push('\n');
        out.push_str(&format!("{:>6}", "total:"));
        for i in 0..=imax {
            out.push_str(&format!("{:>width$}", self.total(i)));
        }
        out.push('\n');
        for j in jmin..=jmax {
            if (0..=imax).all(|i| self.get(i, j) == 0) {
                continue;
            }
            out.push_str(&format!("{:>5}:", j));
            for i in 0..=imax {
                let b = self.get(i, j);
                if b == 0 {
                    out.push_str(&format!("{:>width$}", "."));
                } else {
                    out.push_str(&format!("{b:>width$}"));
                }
            }
            out.push('\n');
        }
        out
    }
}

// Serialized as a sorted list of (homological degree, internal degree, count)
// triples: JSON object keys must be strings, which rules out the map form.
impl serde::Serialize for BettiTable {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.entries())
    }
}

impl<'de> serde::Deserialize<'de> for BettiTable {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let triples =
            <Vec<(usize, i64, u64)> as serde::Deserialize>::deserialize(deserializer)?;
        let mut table = BettiTable::new();
        for (i, j, count) in triples {
            table.add(i, j, count);
        }
        Ok(table)
    }
}

/// A minimal graded free resolution F_0 ← F_1 ← ⋯, with differential i
/// stored as the list of images in F_i of the generators of F_{i+1}.
#[derive(Debug, Clone)]
pub struct FreeResolution {
    pub modules: Vec<GradedFreeModule>,
    pub differentials: Vec<Vec<ModuleElement>>,
    /// True when the homological bound cut the resolution before the kernel
    /// vanished.
    pub truncated: bool,
}

impl FreeResolution {
    pub fn length(&self) -> usize {
        self.modules.len() - 1
    }

    pub fn betti_table(&self) -> BettiTable {
        let mut t = BettiTable::new();
        for (i, module) in self.modules.iter().enumerate() {
            for &j in module.twists() {
                t.add(i, j, 1);
            }
        }
        t
    }

    /// No differential entry is a nonzero constant.
    pub fn is_minimal(&self) -> bool {
        self.differentials.iter().all(|cols| {
            cols.iter().all(|col| {
                col.components()
                    .iter()
                    .all(|p| p.is_zero() || p.degree() != Some(0))
            })
        })
    }

    /// The degree-d matrix of differential i (F_{i+1} → F_i).
    pub fn differential_matrix(&self, i: usize, degree: i64) -> ExactMatrix {
        let target = &self.modules[i];
        let source = &self.modules[i + 1];
        let entries = columns_to_entries(target.rank(), &self.differentials[i]);
        graded_map_matrix(
            target.ring(),
            target.twists(),
            source.twists(),
            &entries,
            degree,
        )
    }

    /// Degree-wise exactness at F_i for 1 ≤ i < length, by rank counts:
    /// rank d_i(d) + rank d_{i+1}(d) = dim (F_i)_d for every degree d in
    /// [dmin, dmax]. Beyond the last module exactness means the last
    /// differential has full kernel rank only if truncated; a complete
    /// resolution must also have injective final differential.
    pub fn is_exact_by_ranks(&self, dmin: i64, dmax: i64) -> bool {
        for i in 1..self.length() {
            for d in dmin..=dmax {
                let fi = self.modules[i].piece_dimension(d);
                let r_in = self.differential_matrix(i, d).rank() as u64;
                let r_out = self.differential_matrix(i - 1, d).rank() as u64;
                if r_in + r_out != fi {
                    return false;
                }
            }
        }
        if !self.truncated && self.length() >= 1 {
            let last = self.length() - 1;
            for d in dmin..=dmax {
                let src = self.modules[last + 1].piece_dimension(d);
                let r = self.differential_matrix(last, d).rank() as u64;
                if r != src {
                    return false;
                }
            }
        }
        true
    }
}

/// Bounds for resolution computations. The homological bound truncates the
/// resolution (recorded, not an error); the degree bound is a guard that
/// turns runaway generator degrees into TruncationExceeded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResolutionBounds {
    pub max_homological: usize,
    pub max_degree: i64,
}

/// Selects a minimal generating set from homogeneous elements: processes
/// candidates by ascending degree (stable within a degree) and keeps exactly
/// those outside the submodule generated by the earlier picks. Membership is
/// tested with `reducer`, which must return the normal form against the
/// submodule generated by the supplied picks.
fn select_minimal<F>(
    module: &GradedFreeModule,
    gens: &[ModuleElement],
    mut reducer: F,
) -> Vec<ModuleElement>
where
    F: FnMut(&[ModuleElement], &ModuleElement) -> ModuleElement,
{
    let mut candidates: Vec<&ModuleElement> = gens.iter().filter(|g| !g.is_zero()).collect();
    candidates.sort_by_key(|g| module.degree_of(g).expect("homogeneous generator"));
    let mut selected: Vec<ModuleElement> = Vec::new();
    for g in candidates {
        if selected.is_empty() {
            selected.push(g.clone());
            continue;
        }
        let nf = reducer(&selected, g);
        if !nf.is_zero() {
            selected.push(g.clone());
        }
    }
    selected
}

/// Minimal free resolution over R of the module coker(relations ⊆ target).
/// Each step selects minimal generators (so the differentials automatically
/// avoid unit entries) and then computes their syzygies. Over R the process
/// stops on its own at homological degree ≤ n+1.
pub fn minimal_free_resolution(
    target: &GradedFreeModule,
    relations: &[ModuleElement],
    bounds: ResolutionBounds,
) -> Result<FreeResolution, GroebnerError> {
    resolve_with(
        target,
        relations,
        bounds,
        |module, selected, g| {
            let gb = buchberger(module, selected);
            normal_form(g, &gb)
        },
        |module, selected| syzygies(module, selected),
    )
}

fn resolve_with<R, S>(
    target: &GradedFreeModule,
    relations: &[ModuleElement],
    bounds: ResolutionBounds,
    mut reduce_vs: R,
    mut syzygy_step: S,
) -> Result<FreeResolution, GroebnerError>
where
    R: FnMut(&GradedFreeModule, &[ModuleElement], &ModuleElement) -> ModuleElement,
    S: FnMut(&GradedFreeModule, &[ModuleElement]) -> Vec<ModuleElement>,
{
    let ring = target.ring();
    let mut modules = vec![target.clone()];
    let mut differentials: Vec<Vec<ModuleElement>> = Vec::new();
    let mut current_module = target.clone();
    let mut current_gens: Vec<ModuleElement> = relations.to_vec();
    let mut truncated = false;
    for _step in 0..bounds.max_homological {
        let selected = {
            let module = current_module.clone();
            select_minimal(&module, &current_gens, |sel, g| reduce_vs(&module, sel, g))
        };
        if selected.is_empty() {
            break;
        }
        let twists: Vec<i64> = selected
            .iter()
            .map(|g| current_module.degree_of(g).expect("homogeneous"))
            .collect();
        if let Some(&worst) = twists.iter().max() {
            if worst > bounds.max_degree {
                return Err(GroebnerError::TruncationExceeded {
                    needed: worst,
                    bound: bounds.max_degree,
                });
            }
        }
        let next_module = GradedFreeModule::new(ring, twists);
        let next_gens = syzygy_step(&current_module, &selected);
        differentials.push(selected);
        modules.push(next_module.clone());
        current_module = next_module;
        current_gens = next_gens;
        if current_gens.is_empty() {
            break;
        }
    }
    if !current_gens.is_empty() {
        let module = current_module.clone();
        let leftovers = select_minimal(&module, &current_gens, |sel, g| reduce_vs(&module, sel, g));
        truncated = !leftovers.is_empty();
    }
    let res = FreeResolution {
        modules,
        differentials,
        truncated,
    };
    debug_assert!(res.is_minimal(), "resolution has a unit differential entry");
    Ok(res)
}

/// A graded quotient ring A = R/I, carried as a reduced Gröbner basis of I.
/// Degree pieces of A are spanned by the standard monomials; canonical
/// representatives are normal forms.
#[derive(Debug, Clone)]
pub struct QuotientContext {
    ring: Ring,
    ideal_gb: GroebnerBasis,
    ideal_minimal_gens: Vec<Polynomial>,
}

impl QuotientContext {
    pub fn new(ring: Ring, ideal_gens: &[Polynomial]) -> Self {
        let free = GradedFreeModule::new(ring, vec![0]);
        let elems: Vec<ModuleElement> = ideal_gens
            .iter()
            .filter(|f| !f.is_zero())
            .map(|f| free.element(vec![f.clone()]))
            .collect();
        let ideal_gb = buchberger(&free, &elems);
        let minimal = select_minimal(&free, &elems, |sel, g| {
            let gb = buchberger(&free, sel);
            normal_form(g, &gb)
        });
        QuotientContext {
            ring,
            ideal_gb,
            ideal_minimal_gens: minimal
                .into_iter()
                .map(|e| e.component(0).clone())
                .collect(),
        }
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn ideal_gb(&self) -> &GroebnerBasis {
        &self.ideal_gb
    }

    /// A minimal generating set of I (degrees ascending).
    pub fn ideal_minimal_gens(&self) -> &[Polynomial] {
        &self.ideal_minimal_gens
    }

    /// Canonical representative of f in A.
    pub fn reduce_poly(&self, f: &Polynomial) -> Polynomial {
        let free = GradedFreeModule::new(self.ring, vec![0]);
        normal_form(&free.element(vec![f.clone()]), &self.ideal_gb)
            .component(0)
            .clone()
    }

    /// dim_k A_d.
    pub fn piece_dimension(&self, degree: i64) -> u64 {
        self.ideal_gb.quotient_piece_dimension(degree)
    }

    /// Standard-monomial basis of A_d, descending grevlex.
    pub fn piece_basis(&self, degree: i64) -> Vec<Monomial> {
        self.ideal_gb
            .standard_monomials(degree)
            .into_iter()
            .map(|(_, m)| m)
            .collect()
    }

    /// Krull dimension of A.
    pub fn krull_dimension(&self) -> Option<usize> {
        krull_dimension(&self.ideal_gb)
    }

    /// Canonical componentwise representative of an element of a free
    /// A-module.
    pub fn reduce_element(&self, module: &GradedFreeModule, e: &ModuleElement) -> ModuleElement {
        module.element(
            e.components()
                .iter()
                .map(|p| self.reduce_poly(p))
                .collect(),
        )
    }

    /// Lifted generator set over R for the A-submodule generated by `gens`:
    /// the generators themselves followed by f·e_s for every minimal
    /// generator f of I and every position s. Membership in the A-submodule
    /// equals membership in the lifted R-submodule.
    fn lifted_gens(
        &self,
        module: &GradedFreeModule,
        gens: &[ModuleElement],
    ) -> Vec<ModuleElement> {
        let mut lifted: Vec<ModuleElement> = gens.to_vec();
        for f in &self.ideal_minimal_gens {
            for s in 0..module.rank() {
                let mut z = module.zero_element();
                z.components_mut()[s] = f.clone();
                lifted.push(z);
            }
        }
        lifted
    }

    /// Normal form of `e` against the A-submodule generated by `gens`.
    pub fn submodule_normal_form(
        &self,
        module: &GradedFreeModule,
        gens: &[ModuleElement],
        e: &ModuleElement,
    ) -> ModuleElement {
        let lifted = self.lifted_gens(module, gens);
        let gb = buchberger(module, &lifted);
        normal_form(e, &gb)
    }

    /// Generators of the syzygy module over A of `gens`: R-syzygies of the
    /// lifted set, projected to the original coordinates and reduced to
    /// canonical representatives.
    pub fn syzygies_over_quotient(
        &self,
        module: &GradedFreeModule,
        gens: &[ModuleElement],
    ) -> Vec<ModuleElement> {
        let lifted = self.lifted_gens(module, gens);
        let all = syzygies(module, &lifted);
        let twists: Vec<i64> = gens
            .iter()
            .map(|g| module.degree_of(g).expect("homogeneous"))
            .collect();
        let syz_module = GradedFreeModule::new(self.ring, twists);
        let mut out = Vec::new();
        for s in all {
            let projected: Vec<Polynomial> = s.components()[..gens.len()]
                .iter()
                .map(|p| self.reduce_poly(p))
                .collect();
            let elem = syz_module.element(projected);
            if !elem.is_zero() {
                out.push(elem);
            }
        }
        out
    }

    /// Minimal free resolution over A of coker(relations ⊆ target), both
    /// given over A. Usually infinite; always truncated by the homological
    /// bound.
    pub fn minimal_free_resolution_quotient(
        &self,
        target: &GradedFreeModule,
        relations: &[ModuleElement],
        bounds: ResolutionBounds,
    ) -> Result<FreeResolution, GroebnerError> {
        resolve_with(
            target,
            relations,
            bounds,
            |module, selected, g| self.submodule_normal_form(module, selected, g),
            |module, selected| self.syzygies_over_quotient(module, selected),
        )
    }

    /// The degree-d matrix of an A-linear map ⊕A(−source[k]) → ⊕A(−target[l])
    /// in the standard-monomial bases of the pieces.
    pub fn graded_map_matrix_quotient(
        &self,
        target: &[i64],
        source: &[i64],
        entries: &[Vec<Polynomial>],
        degree: i64,
    ) -> ExactMatrix {
        let field = self.ring.field();
        let tgt_bases: Vec<Vec<Monomial>> =
            target.iter().map(|&t| self.piece_basis(degree - t)).collect();
        let src_bases: Vec<Vec<Monomial>> =
            source.iter().map(|&t| self.piece_basis(degree - t)).collect();
        let rows: usize = tgt_bases.iter().map(Vec::len).sum();
        let cols: usize = src_bases.iter().map(Vec::len).sum();
        let mut out = ExactMatrix::zero(field, rows, cols);
        let mut row_off = vec![0usize; target.len()];
        {
            let mut acc = 0;
            for (l, off) in row_off.iter_mut().enumerate() {
                *off = acc;
                acc += tgt_bases[l].len();
            }
        }
        let mut col = 0usize;
        for (k, src_basis) in src_bases.iter().enumerate() {
            for m in src_basis {
                for (l, tgt_basis) in tgt_bases.iter().enumerate() {
                    let f = &entries[l][k];
                    if f.is_zero() {
                        continue;
                    }
                    let prod = self.reduce_poly(&f.mul_term(m, field.one()));
                    for (t, c) in prod.terms() {
                        let i = tgt_basis
                            .iter()
                            .position(|b| b == t)
                            .expect("normal form stays inside the standard basis");
                        let cur = out.get(row_off[l] + i, col);
                        out.set(row_off[l] + i, col, cur + c);
                    }
                }
                col += 1;
            }
        }
        out
    }
}

impl ModuleElement {
    pub(crate) fn components_mut(&mut self) -> &mut [Polynomial] {
        &mut self.components
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Field;
    use crate::poly::{parse_polynomial, random_homogeneous};
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn ring(n: usize) -> Ring {
        Ring::new(n, Field::default_field())
    }

    fn ideal_module(r: Ring) -> GradedFreeModule {
        GradedFreeModule::new(r, vec![0])
    }

    fn poly_elems(module: &GradedFreeModule, polys: &[Polynomial]) -> Vec<ModuleElement> {
        polys.iter().map(|p| module.element(vec![p.clone()])).collect()
    }

    /// 2×2 minors of a seeded generic linear 2×3 matrix in 4 variables.
    fn generic_scroll_minors(r: Ring, seed: u64) -> Vec<Polynomial> {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let entries: Vec<Vec<Polynomial>> = (0..2)
            .map(|_| (0..3).map(|_| random_homogeneous(r, 1, &mut rng)).collect())
            .collect();
        let mut minors = Vec::new();
        for a in 0..3 {
            for b in (a + 1)..3 {
                let m = entries[0][a]
                    .mul(&entries[1][b])
                    .sub(&entries[0][b].mul(&entries[1][a]));
                minors.push(m);
            }
        }
        minors
    }

    #[test]
    fn scroll_minors_form_quadric_basis_of_codimension_two() {
        let r = ring(3);
        let module = ideal_module(r);
        let minors = generic_scroll_minors(r, 11);
        let gb = buchberger(&module, &poly_elems(&module, &minors));
        assert!(gb.is_reduced());
        let leads = gb.initial_terms();
        assert_eq!(leads.len(), 3);
        assert!(leads.iter().all(|(_, m)| m.degree() == 2));
        assert_eq!(krull_dimension(&gb), Some(2));
    }

    #[test]
    fn normal_form_vanishes_on_members_and_is_stable() {
        let r = ring(2);
        let module = ideal_module(r);
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        let gens: Vec<Polynomial> = (0..3).map(|_| random_homogeneous(r, 2, &mut rng)).collect();
        let elems = poly_elems(&module, &gens);
        let gb = buchberger(&module, &elems);
        for g in &elems {
            assert!(normal_form(g, &gb).is_zero());
        }
        let f = random_homogeneous(r, 3, &mut rng);
        let fe = module.element(vec![f.clone()]);
        let nf = normal_form(&fe, &gb);
        // Adding a member does not change the normal form.
        let shifted = fe.add(&elems[0].mul_term(&Monomial::variable(3, 1), 4));
        assert_eq!(normal_form(&shifted, &gb), nf);
        // Normal forms are fixed points.
        assert_eq!(normal_form(&nf, &gb), nf);
    }

    #[test]
    fn reduced_basis_is_permutation_invariant() {
        let r = ring(2);
        let module = ideal_module(r);
        let mut rng = ChaCha20Rng::seed_from_u64(7);
        let mut gens: Vec<ModuleElement> = (0..4)
            .map(|_| module.element(vec![random_homogeneous(r, 2, &mut rng)]))
            .collect();
        let gb1 = buchberger(&module, &gens);
        gens.shuffle(&mut rng);
        let gb2 = buchberger(&module, &gens);
        assert_eq!(gb1.elements(), gb2.elements());
    }

    #[test]
    fn module_basis_handles_positions() {
        // Submodule of R^2 generated by (x0, x1) and (x1, x0): S-pairs only
        // form within a position.
        let r = ring(1);
        let module = GradedFreeModule::new(r, vec![0, 0]);
        let x0 = Polynomial::variable(r, 0);
        let x1 = Polynomial::variable(r, 1);
        let g1 = module.element(vec![x0.clone(), x1.clone()]);
        let g2 = module.element(vec![x1.clone(), x0.clone()]);
        let gb = buchberger(&module, &[g1.clone(), g2.clone()]);
        for g in [&g1, &g2] {
            assert!(normal_form(g, &gb).is_zero());
        }
        // (x0^2 - x1^2, 0) = x0·g1 - x1·g2 is in the submodule.
        let member = module.element(vec![
            x0.mul(&x0).sub(&x1.mul(&x1)),
            Polynomial::zero(r),
        ]);
        assert!(normal_form(&member, &gb).is_zero());
        // e_0 itself is not.
        assert!(!normal_form(&module.basis_element(0), &gb).is_zero());
    }

    #[test]
    fn syzygies_annihilate_and_are_complete_for_koszul() {
        let r = ring(2);
        let module = ideal_module(r);
        let vars: Vec<Polynomial> = (0..3).map(|i| Polynomial::variable(r, i)).collect();
        let elems = poly_elems(&module, &vars);
        let syz = syzygies(&module, &elems);
        for s in &syz {
            assert!(apply_row(&module, &elems, s).is_zero());
        }
        // The Koszul syzygies of three variables need three generators.
        let syz_module = GradedFreeModule::new(r, vec![1, 1, 1]);
        let minimal = {
            let m2 = syz_module.clone();
            select_minimal(&m2, &syz, |sel, g| {
                let gb = buchberger(&m2, sel);
                normal_form(g, &gb)
            })
        };
        assert_eq!(minimal.len(), 3);
        assert!(minimal
            .iter()
            .all(|s| syz_module.degree_of(s) == Some(2)));
    }

    #[test]
    fn krull_dimension_handles_edge_cases() {
        let r = ring(2);
        let module = ideal_module(r);
        // Zero ideal: dimension n+1 = 3.
        let gb_zero = buchberger(&module, &[]);
        assert_eq!(krull_dimension(&gb_zero), Some(3));
        // Unit ideal: None.
        let one = Polynomial::constant(r, r.field().one());
        let gb_unit = buchberger(&module, &poly_elems(&module, &[one]));
        assert_eq!(krull_dimension(&gb_unit), None);
        // (x0, x1) in three variables: dimension 1.
        let gb_line = buchberger(
            &module,
            &poly_elems(
                &module,
                &[Polynomial::variable(r, 0), Polynomial::variable(r, 1)],
            ),
        );
        assert_eq!(krull_dimension(&gb_line), Some(1));
    }

    #[test]
    fn koszul_resolution_of_the_irrelevant_ideal() {
        let r = ring(2);
        let module = ideal_module(r);
        let vars: Vec<Polynomial> = (0..3).map(|i| Polynomial::variable(r, i)).collect();
        let res = minimal_free_resolution(
            &module,
            &poly_elems(&module, &vars),
            ResolutionBounds {
                max_homological: 10,
                max_degree: 20,
            },
        )
        .unwrap();
        assert!(!res.truncated);
        assert_eq!(res.length(), 3);
        let t = res.betti_table();
        assert_eq!(t.get(0, 0), 1);
        assert_eq!(t.get(1, 1), 3);
        assert_eq!(t.get(2, 2), 3);
        assert_eq!(t.get(3, 3), 1);
        assert!(res.is_minimal());
        assert!(res.is_exact_by_ranks(0, 6));
    }

    #[test]
    fn hilbert_function_from_initial_terms_matches_rank_computation() {
        // For R/I with I generated by generic quadrics: standard-monomial
        // counts against dim R_d − rank of the degree-d multiplication map.
        let r = ring(2);
        let module = ideal_module(r);
        let mut rng = ChaCha20Rng::seed_from_u64(13);
        let gens: Vec<Polynomial> = (0..2).map(|_| random_homogeneous(r, 2, &mut rng)).collect();
        let elems = poly_elems(&module, &gens);
        let gb = buchberger(&module, &elems);
        // Map ⊕ R(−2)² → R in each degree; image dimension = rank.
        let entries = vec![gens.clone()];
        for d in 0..=7i64 {
            let mat = graded_map_matrix(r, &[0], &[2, 2], &entries, d);
            let expected = graded_piece_dimension(d, 2) - mat.rank() as u64;
            assert_eq!(gb.quotient_piece_dimension(d), expected, "degree {d}");
        }
    }

    #[test]
    fn hilbert_burch_shape_for_linear_codimension_two() {
        // Generic 2×3 linear matrix in 3 variables: minors resolve with
        // total Betti numbers (1, 3, 2) and twists 0; 2,2,2; 3,3.
        let r = ring(2);
        let module = ideal_module(r);
        let minors = generic_scroll_minors(Ring::new(2, Field::default_field()), 3)
            .into_iter()
            .collect::<Vec<_>>();
        let res = minimal_free_resolution(
            &module,
            &poly_elems(&module, &minors),
            ResolutionBounds {
                max_homological: 10,
                max_degree: 20,
            },
        )
        .unwrap();
        let t = res.betti_table();
        assert_eq!(t.get(0, 0), 1);
        assert_eq!(t.get(1, 2), 3);
        assert_eq!(t.get(2, 3), 2);
        assert_eq!(res.length(), 2);
        assert!(res.is_exact_by_ranks(0, 8));
    }

    #[test]
    fn truncation_guard_fires_on_tight_degree_bound() {
        let r = ring(2);
        let module = ideal_module(r);
        let vars: Vec<Polynomial> = (0..3).map(|i| Polynomial::variable(r, i)).collect();
        let err = minimal_free_resolution(
            &module,
            &poly_elems(&ideal_module(r), &vars),
            ResolutionBounds {
                max_homological: 10,
                max_degree: 1,
            },
        )
        .unwrap_err();
        assert!(matches!(err, GroebnerError::TruncationExceeded { .. }));
    }

    #[test]
    fn quotient_context_reduces_and_counts() {
        // A = k[x0,x1]/(x0^2): Hilbert function 1, 2, 2, 2, ...
        let r = ring(1);
        let x0 = Polynomial::variable(r, 0);
        let ctx = QuotientContext::new(r, &[x0.mul(&x0)]);
        assert_eq!(ctx.piece_dimension(0), 1);
        assert_eq!(ctx.piece_dimension(1), 2);
        assert_eq!(ctx.piece_dimension(2), 2);
        assert_eq!(ctx.piece_dimension(5), 2);
        assert_eq!(ctx.krull_dimension(), Some(1));
        assert!(ctx.reduce_poly(&x0.mul(&x0)).is_zero());
        assert_eq!(ctx.ideal_minimal_gens().len(), 1);
    }

    #[test]
    fn quotient_resolution_of_the_residue_field_is_minimal_and_exact() {
        // A = k[x0,x1]/(x0^2), resolve k = A/(x0,x1) a few steps.
        let r = ring(1);
        let x0 = Polynomial::variable(r, 0);
        let x1 = Polynomial::variable(r, 1);
        let ctx = QuotientContext::new(r, &[x0.mul(&x0)]);
        let target = GradedFreeModule::new(r, vec![0]);
        let res = ctx
            .minimal_free_resolution_quotient(
                &target,
                &poly_elems(&target, &[x0.clone(), x1.clone()]),
                ResolutionBounds {
                    max_homological: 3,
                    max_degree: 12,
                },
            )
            .unwrap();
        assert!(res.truncated, "k has infinite resolution over A");
        assert!(res.is_minimal());
        assert_eq!(res.betti_table().get(1, 1), 2);
        // Exactness over A by ranks, using standard-monomial matrices.
        for i in 1..res.length() {
            for d in 0..=6i64 {
                let fi = &res.modules[i];
                let dim: u64 = fi
                    .twists()
                    .iter()
                    .map(|&t| ctx.piece_dimension(d - t))
                    .sum();
                let into = ctx.graded_map_matrix_quotient(
                    res.modules[i].twists(),
                    res.modules[i + 1].twists(),
                    &columns_to_entries(fi.rank(), &res.differentials[i]),
                    d,
                );
                let out = ctx.graded_map_matrix_quotient(
                    res.modules[i - 1].twists(),
                    res.modules[i].twists(),
                    &columns_to_entries(res.modules[i - 1].rank(), &res.differentials[i - 1]),
                    d,
                );
                assert_eq!(
                    into.rank() as u64 + out.rank() as u64,
                    dim,
                    "exactness at step {i}, degree {d}"
                );
            }
        }
    }

    #[test]
    fn betti_table_renders_with_total_row() {
        let mut t = BettiTable::new();
        t.add(0, 0, 1);
        t.add(1, 2, 3);
        t.add(2, 3, 2);
        let text = t.render_text();
        assert!(text.contains("total:"));
        assert!(text.lines().count() >= 4);
        assert_eq!(t.total(1), 3);
        let d = t.difference(&t.clone());
        assert!(d.is_empty());
    }

    #[test]
    fn parsed_generators_reach_the_same_basis() {
        let r = ring(2);
        let module = ideal_module(r);
        let f = parse_polynomial("x0*x1 + x2^2", r).unwrap();
        let g = parse_polynomial("x0^2", r).unwrap();
        let gb = buchberger(&module, &poly_elems(&module, &[f.clone(), g.clone()]));
        let h = f.mul(&g);
        assert!(normal_form(&module.element(vec![h]), &gb).is_zero());
    }
}

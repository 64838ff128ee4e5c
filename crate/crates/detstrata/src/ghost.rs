//! Ghost terms in minimal free resolutions.
//!
//! A **ghost** is a free summand R(−j) appearing in two consecutive terms of a
//! minimal graded free resolution. When the degree matrix of a stratum has a
//! corner equality a_j = b_i, the summands that overlap because of that corner
//! are *removable*: deleting the matched row and column yields a smaller shape
//! whose general member has the same Hilbert function but a resolution with
//! exactly those overlapping pairs cancelled. Overlaps not attributable to a
//! corner can survive every such generization.
//!
//! The module provides ghost detection on a Betti table, the corner reduction
//! of a degree-matrix shape, and an end-to-end generization check that samples
//! both shapes, resolves them, and compares the outcome against the predicted
//! cancellation.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::determinantal::{
    betti_alternating_sum, codimension_check, eagon_northcott_betti, general_standard_sample,
    maximal_minors, sample_matrix, DegreeMatrixSpec, DeterminantalError, GradedMatrix, SampleMode,
};
use crate::formulas::nonempty;
use crate::groebner::{
    minimal_free_resolution, BettiTable, GradedFreeModule, GroebnerError, QuotientContext,
    ResolutionBounds,
};
use crate::poly::{Polynomial, Ring};

#[derive(Debug, Error)]
pub enum GhostError {
    /// The requested entry is not an allowed corner overlap: the row must be
    /// the first or last row (1-based), the column the first or last column
    /// (0-based), and the two twists must agree there.
    #[error("entry (row {row}, column {col}) is not a removable corner overlap: {reason}")]
    NotACornerOverlap {
        row: usize,
        col: usize,
        reason: String,
    },
    #[error("the {which} stratum is empty")]
    StratumEmpty { which: &'static str },
    #[error(transparent)]
    Determinantal(#[from] DeterminantalError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
}

// ---------------------------------------------------------------------------
// Ghost detection on a Betti table
// ---------------------------------------------------------------------------

/// One overlapping summand class: `count` copies of R(−degree) shared by the
/// consecutive homological degrees `lower` and `upper` = `lower + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GhostOverlap {
    pub lower: usize,
    pub upper: usize,
    pub degree: i64,
    pub count: u64,
    /// How many of these pairs a declared corner equality accounts for.
    /// `None` when the ledger was built without corner context.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub removable: Option<u64>,
}

impl GhostOverlap {
    /// Pairs not explained by the corner; these can survive generization.
    pub fn persistent(&self) -> Option<u64> {
        self.removable.map(|r| self.count - r)
    }
}

/// Every consecutive overlap of a minimal Betti table, ordered by
/// (internal degree, lower homological degree).
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct GhostLedger {
    pub overlaps: Vec<GhostOverlap>,
}

impl GhostLedger {
    pub fn is_empty(&self) -> bool {
        self.overlaps.is_empty()
    }

    pub fn total_overlap(&self) -> u64 {
        self.overlaps.iter().map(|o| o.count).sum()
    }

    /// Recompute the overlap counts from a table and compare with the stored
    /// ones (classification aside). The ledger of a table must satisfy this.
    pub fn matches(&self, table: &BettiTable) -> bool {
        let fresh = detect_ghosts(table);
        fresh.overlaps.len() == self.overlaps.len()
            && fresh.overlaps.iter().zip(&self.overlaps).all(|(f, s)| {
                f.lower == s.lower
                    && f.upper == s.upper
                    && f.degree == s.degree
                    && f.count == s.count
            })
    }
}

/// List every internal degree j and pair of consecutive homological degrees
/// (i, i+1) where the table has summands on both sides; the overlap count is
/// min(β_{i,j}, β_{i+1,j}). The table must come from a *minimal* resolution
/// for the overlaps to have their ghost meaning.
pub fn detect_ghosts(table: &BettiTable) -> GhostLedger {
    let degrees: BTreeSet<i64> = table.entries().map(|(_, j, _)| j).collect();
    let imax = table.max_homological();
    let mut overlaps = Vec::new();
    for &degree in &degrees {
        for lower in 0..imax {
            let below = table.get(lower, degree);
            let above = table.get(lower + 1, degree);
            if below > 0 && above > 0 {
                overlaps.push(GhostOverlap {
                    lower,
                    upper: lower + 1,
                    degree,
                    count: below.min(above),
                    removable: None,
                });
            }
        }
    }
    GhostLedger { overlaps }
}

// ---------------------------------------------------------------------------
// Corner reduction of a degree-matrix shape
// ---------------------------------------------------------------------------

/// The corner convention: `row` is 1-based among the row twists b (so the
/// allowed values are 1 and t) and `col` is 0-based among the column twists a
/// (allowed values 0 and t+c−2), with a[col] = b[row] required.
fn check_corner(spec: &DegreeMatrixSpec, row: usize, col: usize) -> Result<(), GhostError> {
    spec.validate()?;
    let t = spec.t();
    let last = spec.cols() - 1;
    let fail = |reason: String| {
        Err(GhostError::NotACornerOverlap {
            row,
            col,
            reason,
        })
    };
    if row != 1 && row != t {
        return fail(format!("the row index must be 1 or {t} (1-based)"));
    }
    if col != 0 && col != last {
        return fail(format!("the column index must be 0 or {last} (0-based)"));
    }
    if spec.a[col] != spec.b[row - 1] {
        return fail(format!(
            "the twists differ: a[{col}] = {} but b[{row}] = {}",
            spec.a[col],
            spec.b[row - 1]
        ));
    }
    Ok(())
}

/// Delete the matched row and column of a corner equality a[col] = b[row],
/// producing the shape of the generization. Prime and seed carry over.
pub fn reduce_degree_matrix(
    spec: &DegreeMatrixSpec,
    row: usize,
    col: usize,
) -> Result<DegreeMatrixSpec, GhostError> {
    check_corner(spec, row, col)?;
    let mut b = spec.b.clone();
    b.remove(row - 1);
    let mut a = spec.a.clone();
    a.remove(col);
    let reduced = DegreeMatrixSpec {
        n: spec.n,
        p: spec.p,
        b,
        a,
        seed: spec.seed,
        explicit_entries: None,
    };
    reduced.validate()?;
    Ok(reduced)
}

/// The overlapping pairs the corner accounts for, keyed by (lower homological
/// degree, internal degree). Computed from the closed-form resolution shapes:
/// the summands of the reduced shape embed twist-preservingly in those of the
/// full shape (adjoin the matched column to the column subset), and the
/// leftover summands pair off across consecutive homological degrees (adjoin
/// the matched column and row both). Within each internal degree the pair
/// counts therefore satisfy p_i = d_i − p_{i−1} where d_i is the removed
/// count at homological degree i.
pub fn corner_ghost_pairs(
    spec: &DegreeMatrixSpec,
    row: usize,
    col: usize,
) -> Result<BTreeMap<(usize, i64), u64>, GhostError> {
    let reduced = reduce_degree_matrix(spec, row, col)?;
    let full = eagon_northcott_betti(spec);
    let small = eagon_northcott_betti(&reduced);
    let diff = full.difference(&small);
    debug_assert!(
        diff.values().all(|&v| v > 0),
        "the reduced shape must embed in the full one"
    );
    let mut pairs = BTreeMap::new();
    let degrees: BTreeSet<i64> = diff.keys().map(|&(_, d)| d).collect();
    for &degree in &degrees {
        let hmax = diff
            .keys()
            .filter(|&&(_, d)| d == degree)
            .map(|&(h, _)| h)
            .max()
            .unwrap();
        let mut carry: i64 = 0;
        for h in 0..=hmax {
            let removed = diff.get(&(h, degree)).copied().unwrap_or(0);
            let fresh = removed - carry;
            debug_assert!(fresh >= 0, "pair recurrence went negative");
            if fresh > 0 {
                pairs.insert((h, degree), fresh as u64);
            }
            carry = fresh;
        }
        debug_assert_eq!(carry, 0, "pair recurrence left a remainder");
    }
    Ok(pairs)
}

/// Detect the ghosts of a table and mark, per overlap, how many pairs the
/// given corner equality accounts for.
pub fn detect_ghosts_for_corner(
    table: &BettiTable,
    spec: &DegreeMatrixSpec,
    row: usize,
    col: usize,
) -> Result<GhostLedger, GhostError> {
    let pairs = corner_ghost_pairs(spec, row, col)?;
    let mut ledger = detect_ghosts(table);
    for overlap in &mut ledger.overlaps {
        let attributable = pairs
            .get(&(overlap.lower, overlap.degree))
            .copied()
            .unwrap_or(0);
        overlap.removable = Some(attributable.min(overlap.count));
    }
    Ok(ledger)
}

// ---------------------------------------------------------------------------
// Resolving a sampled quotient
// ---------------------------------------------------------------------------

/// Minimal graded Betti table of R/I over R, where I is generated by the
/// maximal minors of the sampled matrix. The degree bound comes from the top
/// twist of the closed-form length-c complex that resolves the same quotient.
/// The second component flags a truncated (homologically cut) resolution.
pub fn minimal_quotient_betti(matrix: &GradedMatrix) -> Result<(BettiTable, bool), GhostError> {
    let ring = matrix.ring();
    let target = GradedFreeModule::new(ring, vec![0]);
    let relations: Vec<_> = maximal_minors(matrix)
        .into_iter()
        .filter(|f| !f.is_zero())
        .map(|f| target.element(vec![f]))
        .collect();
    let bounds = ResolutionBounds {
        max_homological: ring.nvars() + 1,
        max_degree: eagon_northcott_betti(matrix.spec())
            .max_internal_degree()
            .unwrap_or(0)
            + 2,
    };
    let res = minimal_free_resolution(&target, &relations, bounds)?;
    Ok((res.betti_table(), res.truncated))
}

// ---------------------------------------------------------------------------
// Generization check
// ---------------------------------------------------------------------------

/// Outcome of the generization comparison for one corner. Comparison fields
/// are `None` when the degenerate sample was never witnessed; mismatches are
/// recorded as findings, not errors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerizationReport {
    pub spec: DegreeMatrixSpec,
    pub reduced: DegreeMatrixSpec,
    pub corner_row: usize,
    pub corner_col: usize,
    /// Whether some seed produced a standard sample with the corner (and all
    /// other degree-zero entries) set to zero.
    pub special_witnessed: bool,
    pub special_seed: Option<u64>,
    pub general_seeds: Vec<u64>,
    pub special_table: BettiTable,
    pub general_table: BettiTable,
    /// (lower homological degree, internal degree, count) of the pairs the
    /// corner is predicted to cancel.
    pub removable_pairs: Vec<(usize, i64, u64)>,
    pub special_ledger: GhostLedger,
    pub general_ledger: GhostLedger,
    /// Degreewise equality of the two Hilbert functions, read off the exact
    /// resolutions; checked through `hilbert_checked_through`, which is large
    /// enough to separate the underlying polynomials.
    pub hilbert_agree: Option<bool>,
    pub hilbert_checked_through: i64,
    /// Whether the general table equals the degenerate table minus exactly
    /// the corner-attributable pairs.
    pub table_matches_prediction: Option<bool>,
    /// Whether the maximal minors of the bordered matrix (unit at the corner,
    /// zeros along its row and column, the reduced sample elsewhere) generate
    /// the same ideal as the next-size-down minors of the reduced sample.
    pub bordered_ideal_matches: bool,
    pub findings: Vec<String>,
}

impl GenerizationReport {
    /// Human-readable comparison: both tables, the removed pairs, and what
    /// survives.
    pub fn render_comparison(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "corner (row {}, col {}): shared twist {}\n",
            self.corner_row, self.corner_col, self.spec.b[self.corner_row - 1]
        ));
        if self.special_witnessed {
            out.push_str("degenerate sample (corner set to zero):\n");
            out.push_str(&self.special_table.render_text());
        } else {
            out.push_str("degenerate sample: not witnessed\n");
        }
        out.push_str("general sample of the reduced shape:\n");
        out.push_str(&self.general_table.render_text());
        if self.removable_pairs.is_empty() {
            out.push_str("pairs removed by the generization: none\n");
        } else {
            out.push_str("pairs removed by the generization:\n");
            for &(lower, degree, count) in &self.removable_pairs {
                out.push_str(&format!(
                    "  degree {degree}: {count} between homological {lower} and {}\n",
                    lower + 1
                ));
            }
        }
        let persistent: Vec<&GhostOverlap> = self
            .special_ledger
            .overlaps
            .iter()
            .filter(|o| o.persistent().unwrap_or(0) > 0)
            .collect();
        if persistent.is_empty() {
            out.push_str("persistent overlaps: none\n");
        } else {
            out.push_str("persistent overlaps (survive the generization):\n");
            for o in persistent {
                out.push_str(&format!(
                    "  degree {}: {} between homological {} and {}\n",
                    o.degree,
                    o.persistent().unwrap_or(0),
                    o.lower,
                    o.upper
                ));
            }
        }
        if self.findings.is_empty() {
            out.push_str("findings: none\n");
        } else {
            out.push_str("findings:\n");
            for f in &self.findings {
                out.push_str(&format!("  - {f}\n"));
            }
        }
        out
    }
}

/// Subtract `count` summands at both (h, d) and (h+1, d) for each pair;
/// `None` when some count would go negative.
fn subtract_pairs(
    table: &BettiTable,
    pairs: &BTreeMap<(usize, i64), u64>,
) -> Option<BettiTable> {
    let mut counts: BTreeMap<(usize, i64), i64> =
        table.entries().map(|(i, j, b)| ((i, j), b as i64)).collect();
    for (&(h, d), &c) in pairs {
        *counts.entry((h, d)).or_insert(0) -= c as i64;
        *counts.entry((h + 1, d)).or_insert(0) -= c as i64;
    }
    let mut out = BettiTable::new();
    for ((i, j), v) in counts {
        if v < 0 {
            return None;
        }
        if v > 0 {
            out.add(i, j, v as u64);
        }
    }
    Some(out)
}

/// Mutual containment of the two generated ideals, decided by reducing each
/// generator list against the other side's normal forms.
fn ideals_equal(ring: Ring, lhs: &[Polynomial], rhs: &[Polynomial]) -> bool {
    let ql = QuotientContext::new(ring, lhs);
    let qr = QuotientContext::new(ring, rhs);
    lhs.iter().all(|f| qr.reduce_poly(f).is_zero())
        && rhs.iter().all(|f| ql.reduce_poly(f).is_zero())
}

/// The bordered matrix of the inclusion direction: a unit at the corner,
/// zeros along its row and column, and the reduced-shape sample in the
/// remaining block. Its shape is the full spec.
fn bordered_matrix(
    spec: &DegreeMatrixSpec,
    row: usize,
    col: usize,
    inner: &GradedMatrix,
) -> Result<GradedMatrix, GhostError> {
    let ring = spec.ring()?;
    let zero = Polynomial::zero(ring);
    let one = Polynomial::constant(ring, ring.field().one());
    let t = spec.t();
    let cols = spec.cols();
    let mut entries = vec![vec![zero; cols]; t];
    entries[row - 1][col] = one;
    let mut r_in = 0;
    for (r, row_entries) in entries.iter_mut().enumerate() {
        if r == row - 1 {
            continue;
        }
        let mut c_in = 0;
        for (c, e) in row_entries.iter_mut().enumerate() {
            if c == col {
                continue;
            }
            *e = inner.entry(r_in, c_in).clone();
            c_in += 1;
        }
        r_in += 1;
    }
    GradedMatrix::from_entries(spec.clone(), entries).map_err(Into::into)
}

/// Sample both sides of a corner generization and compare them.
///
/// The degenerate side samples the full shape with every degree-zero entry
/// (the corner among them) set to zero, trying `seeds` (or eight consecutive
/// seeds from the spec's own when empty) until the codimension check passes.
/// The general side is a standard sample of the reduced shape. Both quotients
/// are resolved minimally, then three checks run: degreewise Hilbert
/// agreement, cancellation of exactly the corner-attributable pairs, and the
/// bordered-matrix ideal identity for the inclusion direction. Mismatches are
/// reported as findings; only an empty stratum or a failed computation is an
/// error.
pub fn verify_generization(
    spec: &DegreeMatrixSpec,
    row: usize,
    col: usize,
    seeds: &[u64],
) -> Result<GenerizationReport, GhostError> {
    check_corner(spec, row, col)?;
    let reduced = reduce_degree_matrix(spec, row, col)?;
    if !nonempty(spec) {
        return Err(GhostError::StratumEmpty { which: "full" });
    }
    if !nonempty(&reduced) {
        return Err(GhostError::StratumEmpty { which: "reduced" });
    }

    let mut findings = Vec::new();
    let pairs = corner_ghost_pairs(spec, row, col)?;

    let attempts: Vec<u64> = if seeds.is_empty() {
        (0..8).map(|k| spec.seed.wrapping_add(k)).collect()
    } else {
        seeds.to_vec()
    };
    let mut special = None;
    for &s in &attempts {
        let m = sample_matrix(&spec.clone().with_seed(s), SampleMode::Minimal)?;
        if codimension_check(&m).standard {
            special = Some((m, s));
            break;
        }
    }

    let (general_matrix, _, general_seeds) = general_standard_sample(&reduced)?;
    let (general_table, general_truncated) = minimal_quotient_betti(&general_matrix)?;
    if general_truncated {
        findings.push(
            "the resolution of the reduced-shape sample hit its homological bound; \
             comparisons read only the computed range"
                .to_string(),
        );
    }
    let general_ledger = detect_ghosts(&general_table);

    let mut special_witnessed = false;
    let mut special_seed = None;
    let mut special_table = BettiTable::new();
    let mut special_ledger = GhostLedger::default();
    let mut hilbert_agree = None;
    let mut hilbert_checked_through = 0;
    let mut table_matches_prediction = None;

    match special {
        None => findings.push(format!(
            "no degenerate sample passed the codimension check over seeds {attempts:?}; \
             membership of the zero-corner locus is not witnessed here \
             (this does not establish its emptiness)"
        )),
        Some((m, s)) => {
            special_witnessed = true;
            special_seed = Some(s);
            let (table, truncated) = minimal_quotient_betti(&m)?;
            if truncated {
                findings.push(
                    "the resolution of the degenerate sample hit its homological bound; \
                     comparisons read only the computed range"
                        .to_string(),
                );
            }
            special_ledger = detect_ghosts_for_corner(&table, spec, row, col)?;
            special_table = table;

            // Degreewise Hilbert comparison through top twist + n + 1: both
            // sides are polynomial beyond their top twist, so agreement there
            // forces agreement everywhere.
            let top = special_table
                .max_internal_degree()
                .unwrap_or(0)
                .max(general_table.max_internal_degree().unwrap_or(0));
            hilbert_checked_through = top + spec.n as i64 + 1;
            let agree = (0..=hilbert_checked_through).all(|d| {
                betti_alternating_sum(&special_table, spec.n, d)
                    == betti_alternating_sum(&general_table, spec.n, d)
            });
            if !agree {
                findings.push(
                    "the Hilbert functions of the degenerate and reduced-shape samples disagree"
                        .to_string(),
                );
            }
            hilbert_agree = Some(agree);

            match subtract_pairs(&special_table, &pairs) {
                None => {
                    findings.push(
                        "the predicted pair removal exceeds the summands actually present"
                            .to_string(),
                    );
                    table_matches_prediction = Some(false);
                }
                Some(predicted) => {
                    let ok = predicted == general_table;
                    if !ok {
                        let diff = general_table.difference(&predicted);
                        findings.push(format!(
                            "the reduced-shape table differs from the prediction \
                             (general minus predicted, signed): {diff:?}"
                        ));
                    }
                    table_matches_prediction = Some(ok);
                }
            }
        }
    }

    // Inclusion direction: border the reduced sample with a unit at the
    // corner and compare minor ideals.
    let bordered = bordered_matrix(spec, row, col, &general_matrix)?;
    let bordered_ideal_matches = ideals_equal(
        bordered.ring(),
        &maximal_minors(&bordered),
        &maximal_minors(&general_matrix),
    );
    if !bordered_ideal_matches {
        findings.push(
            "the maximal minors of the bordered matrix do not generate the same ideal \
             as the reduced sample's minors"
                .to_string(),
        );
    }

    Ok(GenerizationReport {
        spec: spec.clone(),
        reduced,
        corner_row: row,
        corner_col: col,
        special_witnessed,
        special_seed,
        general_seeds,
        special_table,
        general_table,
        removable_pairs: pairs.iter().map(|(&(h, d), &c)| (h, d, c)).collect(),
        special_ledger,
        general_ledger,
        hilbert_agree,
        hilbert_checked_through,
        table_matches_prediction,
        bordered_ideal_matches,
        findings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ExactMatrix;
    use crate::verdicts::sufficient_condition_scan;

    fn table(entries: &[(usize, i64, u64)]) -> BettiTable {
        let mut t = BettiTable::new();
        for &(i, j, c) in entries {
            t.add(i, j, c);
        }
        t
    }

    #[test]
    fn detection_lists_every_consecutive_overlap() {
        // 0 → R(−7)⊕R(−6)⊕R(−5) → R(−5)⁴⊕R(−4)⁴ → R(−3)⁶ → R: one shared
        // R(−5) between homological degrees 2 and 3.
        let t = table(&[
            (0, 0, 1),
            (1, 3, 6),
            (2, 4, 4),
            (2, 5, 4),
            (3, 5, 1),
            (3, 6, 1),
            (3, 7, 1),
        ]);
        let ledger = detect_ghosts(&t);
        assert_eq!(ledger.overlaps.len(), 1);
        let o = &ledger.overlaps[0];
        assert_eq!((o.lower, o.upper, o.degree, o.count), (2, 3, 5, 1));
        assert!(o.removable.is_none());
        assert!(ledger.matches(&t));

        // 0 → R(−5)⊕R(−4)² → R(−4)⊕R(−3)³ → R: one shared R(−4) between 1
        // and 2.
        let t2 = table(&[(0, 0, 1), (1, 3, 3), (1, 4, 1), (2, 4, 2), (2, 5, 1)]);
        let ledger2 = detect_ghosts(&t2);
        assert_eq!(ledger2.overlaps.len(), 1);
        let o2 = &ledger2.overlaps[0];
        assert_eq!((o2.lower, o2.upper, o2.degree, o2.count), (1, 2, 4, 1));

        // A complete intersection of distinct degrees has none.
        let koszul = table(&[(0, 0, 1), (1, 2, 1), (1, 3, 1), (2, 5, 1)]);
        assert!(detect_ghosts(&koszul).is_empty());

        // The recompute invariant notices a tampered count.
        let mut tampered = ledger2.clone();
        tampered.overlaps[0].count = 7;
        assert!(!tampered.matches(&t2));
    }

    #[test]
    fn corner_reduction_deletes_the_matched_row_and_column() {
        let spec = DegreeMatrixSpec::new(1, vec![-2, -1, -1], vec![-1, 0, 0, 0]).unwrap();
        let reduced = reduce_degree_matrix(&spec, 3, 0).unwrap();
        assert_eq!(reduced.b, vec![-2, -1]);
        assert_eq!(reduced.a, vec![0, 0, 0]);
        assert_eq!(reduced.n, spec.n);
        assert_eq!(reduced.p, spec.p);

        let spec2 = DegreeMatrixSpec::new(2, vec![-3, -1, -1], vec![-1, 0, 0, 0, 0]).unwrap();
        let reduced2 = reduce_degree_matrix(&spec2, 3, 0).unwrap();
        assert_eq!(reduced2.b, vec![-3, -1]);
        assert_eq!(reduced2.a, vec![0, 0, 0, 0]);

        // An interior row is rejected even though the twists match there.
        let spec3 = DegreeMatrixSpec::new(3, vec![-1, 0, 0], vec![0, 0, 1, 1, 1]).unwrap();
        assert!(matches!(
            reduce_degree_matrix(&spec3, 2, 1),
            Err(GhostError::NotACornerOverlap { row: 2, col: 1, .. })
        ));

        // A boundary position without twist equality is rejected too.
        assert!(matches!(
            reduce_degree_matrix(&spec, 1, 0),
            Err(GhostError::NotACornerOverlap { .. })
        ));
    }

    #[test]
    fn corner_pair_counts_follow_the_closed_form_difference() {
        let spec = DegreeMatrixSpec::new(2, vec![-2, -1, -1], vec![-1, 0, 0, 0, 0]).unwrap();
        let pairs = corner_ghost_pairs(&spec, 3, 0).unwrap();
        let expect: BTreeMap<(usize, i64), u64> =
            [((1, 4), 4), ((2, 5), 2), ((2, 6), 1)].into_iter().collect();
        assert_eq!(pairs, expect);

        // Removing the pairs from the full closed-form table lands exactly on
        // the reduced one.
        let reduced = reduce_degree_matrix(&spec, 3, 0).unwrap();
        let full = eagon_northcott_betti(&spec);
        let small = eagon_northcott_betti(&reduced);
        assert_eq!(subtract_pairs(&full, &pairs), Some(small));
    }

    #[test]
    fn reduction_preserves_the_hilbert_function() {
        let cases = [
            DegreeMatrixSpec::new(1, vec![-2, -1, -1], vec![-1, 0, 0, 0]).unwrap(),
            DegreeMatrixSpec::new(2, vec![-3, -1, -1], vec![-1, 0, 0, 0, 0]).unwrap(),
            DegreeMatrixSpec::new(2, vec![-2, -1, -1], vec![-1, 0, 0, 0, 0]).unwrap(),
        ];
        for spec in cases {
            let reduced = reduce_degree_matrix(&spec, 3, 0).unwrap();
            let full = eagon_northcott_betti(&spec);
            let small = eagon_northcott_betti(&reduced);
            let top = full.max_internal_degree().unwrap_or(0) + spec.n as i64 + 1;
            for d in 0..=top {
                assert_eq!(
                    betti_alternating_sum(&full, spec.n, d),
                    betti_alternating_sum(&small, spec.n, d),
                    "Hilbert values differ at degree {d}"
                );
            }
        }
    }

    #[test]
    fn generization_removes_the_corner_ghost_in_two_variables() {
        let spec = DegreeMatrixSpec::new(1, vec![-2, -1, -1], vec![-1, 0, 0, 0]).unwrap();
        let report = verify_generization(&spec, 3, 0, &[]).unwrap();

        assert!(report.special_witnessed);
        assert_eq!(
            report.special_table,
            table(&[(0, 0, 1), (1, 3, 3), (1, 4, 1), (2, 4, 2), (2, 5, 1)])
        );
        assert_eq!(
            report.general_table,
            table(&[(0, 0, 1), (1, 3, 3), (2, 4, 1), (2, 5, 1)])
        );
        assert_eq!(report.hilbert_agree, Some(true));
        assert_eq!(report.table_matches_prediction, Some(true));
        assert!(report.bordered_ideal_matches);

        // The single overlap is wholly attributable to the corner...
        assert_eq!(report.special_ledger.overlaps.len(), 1);
        let o = &report.special_ledger.overlaps[0];
        assert_eq!((o.lower, o.upper, o.degree, o.count), (1, 2, 4, 1));
        assert_eq!(o.removable, Some(1));
        assert_eq!(o.persistent(), Some(0));
        // ...and nothing overlaps after the generization.
        assert!(report.general_ledger.is_empty());

        let json = serde_json::to_string(&report).unwrap();
        let back: GenerizationReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, report);

        let text = report.render_comparison();
        assert!(text.contains("corner (row 3, col 0)"));
        assert!(text.contains("persistent overlaps: none"));
    }

    #[test]
    fn non_corner_overlap_survives_generization() {
        let spec = DegreeMatrixSpec::new(2, vec![-2, -1, -1], vec![-1, 0, 0, 0, 0]).unwrap();
        let report = verify_generization(&spec, 3, 0, &[]).unwrap();

        assert!(report.special_witnessed);
        assert_eq!(
            report.special_table,
            table(&[
                (0, 0, 1),
                (1, 3, 6),
                (1, 4, 4),
                (2, 4, 8),
                (2, 5, 6),
                (2, 6, 1),
                (3, 5, 3),
                (3, 6, 2),
                (3, 7, 1),
            ])
        );
        assert_eq!(
            report.general_table,
            table(&[
                (0, 0, 1),
                (1, 3, 6),
                (2, 4, 4),
                (2, 5, 4),
                (3, 5, 1),
                (3, 6, 1),
                (3, 7, 1),
            ])
        );
        assert_eq!(report.hilbert_agree, Some(true));
        assert_eq!(report.table_matches_prediction, Some(true));
        assert!(report.bordered_ideal_matches);

        // Per-degree classification: the R(−5) shared between homological 2
        // and 3 is only partly explained by the corner; one copy persists.
        let by_key: BTreeMap<(usize, i64), &GhostOverlap> = report
            .special_ledger
            .overlaps
            .iter()
            .map(|o| ((o.lower, o.degree), o))
            .collect();
        assert_eq!(by_key[&(1, 4)].count, 4);
        assert_eq!(by_key[&(1, 4)].persistent(), Some(0));
        assert_eq!(by_key[&(2, 5)].count, 3);
        assert_eq!(by_key[&(2, 5)].removable, Some(2));
        assert_eq!(by_key[&(2, 5)].persistent(), Some(1));
        assert_eq!(by_key[&(2, 6)].count, 1);
        assert_eq!(by_key[&(2, 6)].persistent(), Some(0));

        // And indeed it still overlaps in the generization's own table.
        assert_eq!(report.general_ledger.overlaps.len(), 1);
        let survivor = &report.general_ledger.overlaps[0];
        assert_eq!(
            (survivor.lower, survivor.upper, survivor.degree, survivor.count),
            (2, 3, 5, 1)
        );

        // The reduced shape's table equals its closed form, so the survivor
        // is forced for every sample without degree-zero entries; at n = 5
        // the combinatorial scan certifies the regime where every graded
        // deformation comes from deforming the matrix, making it persistent
        // for the general member there as well.
        assert_eq!(report.general_table, eagon_northcott_betti(&report.reduced));
        let lifted = DegreeMatrixSpec::new(5, report.reduced.b.clone(), report.reduced.a.clone())
            .unwrap();
        let scan = sufficient_condition_scan(&lifted).unwrap();
        assert!(scan.smooth_component_applies);
    }

    #[test]
    fn row_operations_preserve_the_minor_ideal() {
        let spec = DegreeMatrixSpec::new(2, vec![0, 0], vec![1, 1, 2]).unwrap();
        let (m, _, _) = general_standard_sample(&spec).unwrap();
        let field = m.ring().field();
        let mut c = ExactMatrix::identity(field, 2);
        c.set(0, 1, field.one()); // unimodular: row₀ += row₁
        let transformed = m.row_transform(&c).unwrap();
        assert!(ideals_equal(
            m.ring(),
            &maximal_minors(&m),
            &maximal_minors(&transformed)
        ));
        // The tables agree too, as the ideals are literally equal.
        let (t1, _) = minimal_quotient_betti(&m).unwrap();
        let (t2, _) = minimal_quotient_betti(&transformed).unwrap();
        assert_eq!(t1, t2);
    }

    #[test]
    fn empty_strata_are_rejected() {
        // The corner itself is fine (a₃ = b₃ = 5 at the boundary) but the
        // shape fails a₁ ≥ b₂, so no standard member exists.
        let spec = DegreeMatrixSpec::new(2, vec![0, 5, 5], vec![1, 1, 5, 5]).unwrap();
        assert!(matches!(
            verify_generization(&spec, 3, 3, &[]),
            Err(GhostError::StratumEmpty { which: "full" })
        ));
    }
}

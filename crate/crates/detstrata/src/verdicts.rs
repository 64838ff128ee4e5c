//! Rule engine for stratum verdicts.
//!
//! The closed-form invariants say how big W_s(b; a) is; the Hom/Ext machinery
//! says how the sampled algebra deforms. This module combines the two: each
//! rule checks its hypotheses against computed values and, only when every
//! hypothesis is verified, contributes verdicts — the dimension of the
//! stratum, its codimension inside the ambient family of graded quotients
//! with the same Hilbert function, generic smoothness, whether the closure is
//! an irreducible component, whether every deformation comes from deforming
//! the matrix, and whether the general element is glicci.
//!
//! Every rule leaves a provenance entry: fired (hypotheses verified, verdicts
//! contributed), refused (a hypothesis was computed and failed), or
//! unverifiable (a hypothesis could not be certified within the configured
//! bounds). Verdicts from different rules are merged with consistency
//! checks: dimensions must agree exactly, and an exact codimension must lie
//! inside every interval bound.

use crate::determinantal::{
    eagon_northcott_betti, general_standard_sample, DegreeMatrixSpec, DeterminantalError,
    GradedMatrix,
};
use crate::formulas::{nonempty, FormulasError, StratumInvariants};
use crate::groebner::{
    minimal_free_resolution, GradedFreeModule, GroebnerError, ResolutionBounds,
};
use crate::homext::{HomExtError, StandardContext};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Version tag embedded in every serialized report; bump on any change to
/// field names or semantics.
pub const REPORT_SCHEMA_VERSION: u32 = 1;

pub const RULE_CODIM_TWO_QUOTIENT: &str = "codim-two-quotient";
pub const RULE_DIMENSION_VIA_MODULE: &str = "dimension-via-module";
pub const RULE_CODIMENSION_BOUND: &str = "codimension-bound";
pub const RULE_SMOOTH_COMPONENT: &str = "smooth-component";
pub const RULE_COMPONENT_VIA_SURJECTIVITY: &str = "component-via-surjectivity";
pub const RULE_GLICCI: &str = "glicci-general-element";

#[derive(Error, Debug)]
pub enum VerdictsError {
    #[error("two rules produced incompatible verdicts for {field}: {left} vs {right}")]
    InconsistentVerdicts {
        field: &'static str,
        left: String,
        right: String,
    },
    #[error(transparent)]
    Formulas(#[from] FormulasError),
    #[error(transparent)]
    HomExt(#[from] HomExtError),
    #[error(transparent)]
    Determinantal(#[from] DeterminantalError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
}

// ---------------------------------------------------------------------------
// Hypothesis record
// ---------------------------------------------------------------------------

/// Everything the rules look at, computed once per sample. Optional fields
/// are `None` when the computation hit its degree or homological bounds; a
/// rule that needs them then reports "unverifiable" rather than guessing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisRecord {
    /// Codimension of A in R (number of columns minus rows plus one).
    pub c: usize,
    /// Krull dimension of A = R/I, i.e. n + 1 − c.
    pub dim_a: usize,
    /// Closed-form stratum dimension λ = λ_c + K_3 + … + K_c.
    pub lambda: i64,
    /// dim ₀Hom_A(M,M); the scalars always contribute 1.
    pub hom_mm: usize,
    /// Whether ₀Hom_A(M,M) is exactly the scalars.
    pub hom_a_mm_is_k: bool,
    /// dim ₀Ext¹_R(M,M), computed from the ambient presentation.
    pub ext1_r_mm: usize,
    /// dim ₀Ext¹_A(M,M) = ext¹_R − rank δ₀ (five-term exact sequence).
    pub ext1_a_mm: usize,
    /// dim ₀Ext²_A(M,M) from a truncated A-free resolution of M, when the
    /// resolution stayed within bounds.
    pub ext2_a_mm: Option<usize>,
    /// Rank of the connecting map δ₀ : ₀Ext¹_R(M,M) → ₀Hom(I, Hom(M,M)).
    pub rank_delta0: usize,
    /// dim ₀Hom(I, Hom(M,M)), the target of δ₀.
    pub e2_01: usize,
    /// dim ker(₀Ext²_A(M,M) → ₀Ext²_R(M,M)) = e2_01 − rank δ₀.
    pub ker_ext2: usize,
    /// δ₀ injective, equivalently ₀Ext¹_A(M,M) = 0.
    pub delta0_injective: bool,
    /// δ₀ surjective, equivalently ₀Ext²_A(M,M) → ₀Ext²_R(M,M) injective.
    pub delta0_surjective: bool,
    /// dim ₀Hom_R(I, A): the tangent-space dimension of the ambient family
    /// at the sample.
    pub hom_i_a: usize,
    /// dim ₀Ext¹_A(I/I², A), when the conormal resolution stayed within
    /// bounds; 0 means the sample is unobstructed as a graded algebra.
    pub ext1_a_conormal: Option<usize>,
    /// depth A = n + 1 − pd_R(A), certified by computing a minimal R-free
    /// resolution; `None` when the resolution was truncated.
    pub depth_a: Option<usize>,
}

// ---------------------------------------------------------------------------
// Verdicts
// ---------------------------------------------------------------------------

/// Codimension of the stratum closure inside the ambient family of graded
/// quotients with the same Hilbert function, near the sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CodimensionVerdict {
    Exact { value: usize },
    Interval { lower: usize, upper: usize },
}

impl CodimensionVerdict {
    /// Intersect two verdicts; `Err` when they are incompatible.
    fn merge(self, other: CodimensionVerdict) -> Result<CodimensionVerdict, ()> {
        use CodimensionVerdict::*;
        match (self, other) {
            (Exact { value: x }, Exact { value: y }) => {
                if x == y {
                    Ok(Exact { value: x })
                } else {
                    Err(())
                }
            }
            (Exact { value }, Interval { lower, upper })
            | (Interval { lower, upper }, Exact { value }) => {
                if lower <= value && value <= upper {
                    Ok(Exact { value })
                } else {
                    Err(())
                }
            }
            (
                Interval {
                    lower: l1,
                    upper: u1,
                },
                Interval {
                    lower: l2,
                    upper: u2,
                },
            ) => {
                let lower = l1.max(l2);
                let upper = u1.min(u2);
                if lower > upper {
                    Err(())
                } else if lower == upper {
                    Ok(Exact { value: lower })
                } else {
                    Ok(Interval { lower, upper })
                }
            }
        }
    }
}

impl std::fmt::Display for CodimensionVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CodimensionVerdict::Exact { value } => write!(f, "{value}"),
            CodimensionVerdict::Interval { lower, upper } => write!(f, "[{lower}, {upper}]"),
        }
    }
}

/// The conclusions; each field stays `None` until some rule certifies it.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictSet {
    /// Dimension of the stratum W_s(b; a).
    pub dim_ws: Option<i64>,
    /// Codimension of the stratum closure in the ambient family.
    pub codim_in_family: Option<CodimensionVerdict>,
    /// The ambient family is smooth at a general point of the stratum.
    pub generically_smooth: Option<bool>,
    /// The stratum closure is an irreducible component of the family.
    pub is_component: Option<bool>,
    /// Every graded deformation of the sample comes from deforming the
    /// matrix entries.
    pub every_def_from_matrix: Option<bool>,
    /// A general element of the stratum is glicci (in the Gorenstein
    /// liaison class of a complete intersection).
    pub glicci_general_element: Option<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RuleStatus {
    /// Hypotheses verified; verdicts contributed.
    Fired,
    /// A hypothesis was computed and found to fail.
    Refused,
    /// A hypothesis could not be certified within the configured bounds.
    Unverifiable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProvenanceEntry {
    pub rule: String,
    pub status: RuleStatus,
    pub detail: String,
}

/// The full machine-readable outcome for one stratum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumReport {
    pub schema_version: u32,
    pub spec: DegreeMatrixSpec,
    pub invariants: StratumInvariants,
    pub hypotheses: HypothesisRecord,
    pub verdicts: VerdictSet,
    pub provenance: Vec<ProvenanceEntry>,
}

// ---------------------------------------------------------------------------
// Combinatorial sufficient conditions
// ---------------------------------------------------------------------------

/// Degree-pattern conditions that guarantee the rule hypotheses for a
/// *general* matrix of the given shape, checked without sampling anything.
/// Each flag records that the corresponding condition holds — not a verdict
/// by itself, but a promise that the general member of the stratum passes
/// the named rule.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SufficientConditionScan {
    /// Krull dimension of A = n + 1 − c.
    pub dim_a: usize,
    /// The stratum is nonempty (a_{i−1} ≥ b_i with strict inequality
    /// somewhere).
    pub nonempty: bool,
    /// a_{i−2} ≥ b_i for 2 ≤ i ≤ t.
    pub gap_two: bool,
    /// a_{i−min(3,t)} ≥ b_i for min(3,t) ≤ i ≤ t.
    pub gap_min3: bool,
    /// dim A ≥ 2 and gap_two: a general sample satisfies the hypotheses of
    /// `codimension-bound` (and `dimension-via-module`).
    pub codimension_bound_applies: bool,
    /// dim A ≥ 3 and gap_min3: a general sample satisfies the hypotheses of
    /// `smooth-component`.
    pub smooth_component_applies: bool,
    /// dim A ≥ 3 and gap_min3: a general sample satisfies the hypotheses of
    /// `component-via-surjectivity`.
    pub surjectivity_component_applies: bool,
    /// dim A ≥ 3 and gap_min3: a general element is glicci.
    pub glicci_applies: bool,
    /// With gap_min3 and a general sample, the scheme cut out by the minors
    /// is a local complete intersection outside a closed subset of
    /// codimension ≥ min(5, c + 2) in it.
    pub lci_outside_codim: Option<usize>,
    /// Artinian case n = c: a_0 > b_t together with a_{t+c−2} > a_{t−2}
    /// (for 3 ≤ c ≤ 5) or a_{t+3} > a_{t−2} (for c > 5) guarantees the
    /// dimension formula dim W = λ.
    pub artinian_dimension_clause: bool,
    /// a_0 > b_t and a_{t+c−2} > a_{t−2}: the dimension formula
    /// dim W = λ_c + K_3 + … + K_c holds with no restriction on n − c.
    pub dimension_formula_clause: bool,
    /// n − c ≥ 1, the stratum is nonempty and gap_two holds: the dimension
    /// formula holds for a general sample.
    pub positive_dim_dimension_clause: bool,
    /// n − c ≥ 2 and gap_min3: the stratum closure is an irreducible
    /// component of the Hilbert scheme.
    pub component_closure_clause: bool,
    /// t = 2, n = c > 2, every entry linear: the only shape known to make
    /// the dimension formula fail (dim W is strictly smaller than λ).
    pub linear_two_row_exception: bool,
}

/// Evaluate the degree-pattern conditions for a spec. Purely combinatorial:
/// no sampling, no linear algebra.
pub fn sufficient_condition_scan(
    spec: &DegreeMatrixSpec,
) -> Result<SufficientConditionScan, VerdictsError> {
    spec.validate()?;
    let t = spec.t();
    let c = spec.c();
    let n = spec.n;
    let dim_a = (n + 1).saturating_sub(c);
    let a = &spec.a;
    let b = &spec.b;

    // b is 1-based in the inequalities (b_1..b_t), a is 0-based.
    let gap = |offset: usize| (offset..=t).all(|i| a[i - offset] >= b[i - 1]);
    let gap_two = gap(2);
    let gap_min3 = gap(3.min(t));

    let top = t + c - 2; // last column index
    let a0_beats_bt = a[0] > b[t - 1];
    let spread = a[top] > a[t - 2];
    let artinian_dimension_clause = n == c
        && a0_beats_bt
        && match c {
            3..=5 => spread,
            _ if c > 5 => a[t + 3] > a[t - 2],
            _ => false,
        };
    let dimension_formula_clause = a0_beats_bt && spread;

    let all_linear = b.iter().all(|&x| x == b[0]) && a.iter().all(|&x| x == b[0] + 1);
    let linear_two_row_exception = t == 2 && n == c && c > 2 && all_linear;

    let deep = dim_a >= 3 && gap_min3;
    Ok(SufficientConditionScan {
        dim_a,
        nonempty: nonempty(spec),
        gap_two,
        gap_min3,
        codimension_bound_applies: dim_a >= 2 && gap_two,
        smooth_component_applies: deep,
        surjectivity_component_applies: deep,
        glicci_applies: deep,
        lci_outside_codim: if gap_min3 { Some(5.min(c + 2)) } else { None },
        artinian_dimension_clause,
        dimension_formula_clause,
        positive_dim_dimension_clause: dim_a >= 2 && nonempty(spec) && gap_two,
        component_closure_clause: dim_a >= 3 && gap_min3,
        linear_two_row_exception,
    })
}

// ---------------------------------------------------------------------------
// Hypothesis gathering
// ---------------------------------------------------------------------------

/// depth A via a minimal R-free resolution of A: depth = n + 1 − pd.
/// Returns `None` when the resolution hit its bounds.
fn certified_depth(ctx: &StandardContext) -> Option<usize> {
    let ring = ctx.matrix().ring();
    let target = GradedFreeModule::new(ring, vec![0]);
    let relations: Vec<_> = ctx
        .minors()
        .iter()
        .map(|m| target.element(vec![m.clone()]))
        .collect();
    let spec = ctx.matrix().spec();
    let bounds = ResolutionBounds {
        max_homological: ring.nvars() + 1,
        // Generator degrees of the minimal resolution are bounded by the top
        // twist of the Eagon–Northcott complex resolving the same quotient.
        max_degree: eagon_northcott_betti(spec)
            .max_internal_degree()
            .unwrap_or(0)
            + 2,
    };
    match minimal_free_resolution(&target, &relations, bounds) {
        Ok(res) if !res.truncated && res.length() <= ring.nvars() => {
            Some(ring.nvars() - res.length())
        }
        Ok(_) => None,
        Err(GroebnerError::TruncationExceeded { .. }) => None,
    }
}

/// Compute the hypotheses the rules consult, recording a provenance note for
/// each optional value that was skipped or could not be certified.
///
/// The expensive optional values are gathered lazily: a truncated resolution
/// is only attempted when some rule could actually consume its result. When
/// an earlier, cheaper hypothesis already fails every rule that would need
/// the value, it stays `None` with a note saying so.
pub fn gather_hypotheses(
    ctx: &StandardContext,
    lambda: i64,
) -> Result<(HypothesisRecord, Vec<ProvenanceEntry>), VerdictsError> {
    let mut notes = Vec::new();
    let five = ctx.five_term()?;
    let hom_a_mm_is_k = five.hom_mm == 1;
    let hom_i_a = ctx.hom_i_a();

    let spec = ctx.matrix().spec();
    let c = spec.c();
    let dim_a = (spec.n + 1).saturating_sub(c);

    let skip = |what: &str, why: String, notes: &mut Vec<ProvenanceEntry>| {
        notes.push(ProvenanceEntry {
            rule: format!("hypothesis:{what}"),
            status: RuleStatus::Unverifiable,
            detail: why,
        });
    };

    // ext²_A(M,M) matters only past the hom(M,M) = k, ext¹_A(M,M) = 0 gates,
    // and for c = 2 its vanishing holds unconditionally.
    let ext2_a_mm = if c == 2 {
        skip(
            "ext2_a_mm",
            "c = 2: vanishing holds unconditionally; not recomputed".into(),
            &mut notes,
        );
        None
    } else if !hom_a_mm_is_k || five.ext1_a != 0 {
        skip(
            "ext2_a_mm",
            "skipped: an earlier module hypothesis already failed".into(),
            &mut notes,
        );
        None
    } else {
        match ctx.ext_a_mm_truncated(2, None) {
            Ok(v) => {
                // The kernel of the map to the ambient Ext² can never exceed
                // the source dimension.
                debug_assert!(five.ker_ext2_a_to_ext2_r <= v);
                Some(v)
            }
            Err(HomExtError::Groebner(GroebnerError::TruncationExceeded { needed, bound })) => {
                skip(
                    "ext2_a_mm",
                    format!(
                        "truncated resolution needed degree {needed} > bound {bound}; \
                         left unverified"
                    ),
                    &mut notes,
                );
                None
            }
            Err(e) => return Err(e.into()),
        }
    };

    // The conormal Ext¹ only decides whether the codimension bound is
    // attained; when the bound is already zero the verdict is exact anyway.
    let ext1_a_conormal = if !hom_a_mm_is_k || five.ext1_a != 0 {
        skip(
            "ext1_a_conormal",
            "skipped: an earlier module hypothesis already failed".into(),
            &mut notes,
        );
        None
    } else if hom_i_a as i64 <= lambda {
        skip(
            "ext1_a_conormal",
            "skipped: the codimension bound is already zero-width".into(),
            &mut notes,
        );
        None
    } else {
        match ctx.ext1_a_conormal(None) {
            Ok(report) => Some(report.ext1),
            Err(HomExtError::Groebner(GroebnerError::TruncationExceeded { needed, bound })) => {
                skip(
                    "ext1_a_conormal",
                    format!(
                        "truncated resolution needed degree {needed} > bound {bound}; \
                         left unverified"
                    ),
                    &mut notes,
                );
                None
            }
            Err(e) => return Err(e.into()),
        }
    };

    // Certified depth is consumed by the glicci rule alone.
    let depth_a = if dim_a >= 2 && hom_a_mm_is_k && five.delta0_surjective {
        let depth = certified_depth(ctx);
        if depth.is_none() {
            skip(
                "depth_a",
                "ambient free resolution hit its bounds; depth left unverified".into(),
                &mut notes,
            );
        }
        depth
    } else {
        skip(
            "depth_a",
            "skipped: no rule consuming depth can fire for this sample".into(),
            &mut notes,
        );
        None
    };

    let record = HypothesisRecord {
        c,
        dim_a,
        lambda,
        hom_mm: five.hom_mm,
        hom_a_mm_is_k,
        ext1_r_mm: five.ext1_r,
        ext1_a_mm: five.ext1_a,
        ext2_a_mm,
        rank_delta0: five.rank_delta0,
        e2_01: five.e2_01,
        ker_ext2: five.ker_ext2_a_to_ext2_r,
        delta0_injective: five.delta0_injective,
        delta0_surjective: five.delta0_surjective,
        hom_i_a,
        ext1_a_conormal,
        depth_a,
    };
    Ok((record, notes))
}

// ---------------------------------------------------------------------------
// The rules
// ---------------------------------------------------------------------------

struct Refusal {
    status: RuleStatus,
    detail: String,
}

fn refused(detail: String) -> Result<(VerdictSet, String), Refusal> {
    Err(Refusal {
        status: RuleStatus::Refused,
        detail,
    })
}

fn unverifiable(detail: String) -> Result<(VerdictSet, String), Refusal> {
    Err(Refusal {
        status: RuleStatus::Unverifiable,
        detail,
    })
}

type RuleOutcome = Result<(VerdictSet, String), Refusal>;

/// Codimension-two quotients are unobstructed: the ambient family is smooth
/// at the sample of dimension λ, so the stratum closure is a component of
/// codimension zero, every deformation deforms the matrix, and no Ext
/// computation is needed.
fn rule_codim_two_quotient(h: &HypothesisRecord) -> RuleOutcome {
    if h.c != 2 {
        return refused(format!("only applies to c = 2 (here c = {})", h.c));
    }
    let v = VerdictSet {
        dim_ws: Some(h.lambda),
        codim_in_family: Some(CodimensionVerdict::Exact { value: 0 }),
        generically_smooth: Some(true),
        is_component: Some(true),
        every_def_from_matrix: Some(true),
        glicci_general_element: None,
    };
    Ok((
        v,
        format!(
            "c = 2: the family is smooth at the sample of dimension λ = {}; \
             the stratum closure fills a whole component",
            h.lambda
        ),
    ))
}

/// When M has only scalar endomorphisms and ₀Ext¹_A(M,M) = 0, the stratum
/// has dimension exactly λ; if moreover ₀Ext²_A(M,M) = 0, every deformation
/// of the sample comes from deforming the matrix. For c = 2 the module
/// hypotheses hold unconditionally (M is a twist of the canonical module).
fn rule_dimension_via_module(h: &HypothesisRecord) -> RuleOutcome {
    let auto = h.c == 2;
    if !auto {
        let mut missing = Vec::new();
        if !h.hom_a_mm_is_k {
            missing.push(format!(
                "hom_a_mm_is_k (computed dim hom(M,M) = {})",
                h.hom_mm
            ));
        }
        if h.ext1_a_mm != 0 {
            missing.push(format!("ext1_a_mm = 0 (computed {})", h.ext1_a_mm));
        }
        if !missing.is_empty() {
            return refused(missing.join("; "));
        }
    }
    let ext2_vanishes = auto || h.ext2_a_mm == Some(0);
    let v = VerdictSet {
        dim_ws: Some(h.lambda),
        every_def_from_matrix: if ext2_vanishes { Some(true) } else { None },
        ..VerdictSet::default()
    };
    let mut detail = if auto {
        format!(
            "c = 2: self-Ext of the cokernel module vanishes in positive \
             degrees unconditionally; dim W = λ = {}",
            h.lambda
        )
    } else {
        format!(
            "hom(M,M) = k and ext1_a(M,M) = 0 verified; dim W = λ = {}",
            h.lambda
        )
    };
    match (ext2_vanishes, h.ext2_a_mm, auto) {
        (true, _, false) => detail.push_str("; ext2_a(M,M) = 0, so every deformation deforms the matrix"),
        (false, Some(e2), _) => {
            detail.push_str(&format!("; ext2_a(M,M) = {e2} ≠ 0, deformation claim withheld"))
        }
        (false, None, _) => detail.push_str("; ext2_a(M,M) unverified, deformation claim withheld"),
        _ => {}
    }
    Ok((v, detail))
}

/// Same hypotheses as `dimension-via-module`, plus the bound: the
/// codimension of the stratum closure in the ambient family is at most
/// ₀hom(I,A) − λ, which in turn is at most dim ker(₀Ext²_A(M,M) →
/// ₀Ext²_R(M,M)). The upper bound is attained exactly when the family is
/// smooth at the sample, which is certified by ₀Ext¹_A(I/I², A) = 0.
fn rule_codimension_bound(h: &HypothesisRecord) -> RuleOutcome {
    let mut missing = Vec::new();
    if !h.hom_a_mm_is_k {
        missing.push(format!(
            "hom_a_mm_is_k (computed dim hom(M,M) = {})",
            h.hom_mm
        ));
    }
    if h.ext1_a_mm != 0 {
        missing.push(format!("ext1_a_mm = 0 (computed {})", h.ext1_a_mm));
    }
    if !missing.is_empty() {
        return refused(missing.join("; "));
    }
    let defect = h.hom_i_a as i64 - h.lambda;
    if defect < 0 {
        return refused(format!(
            "tangent dimension hom(I,A) = {} is smaller than λ = {}; \
             inconsistent sample, verdict withheld",
            h.hom_i_a, h.lambda
        ));
    }
    let upper = defect as usize;
    if upper > h.ker_ext2 {
        return refused(format!(
            "defect hom(I,A) − λ = {upper} exceeds its certified bound \
             ker(ext2_a → ext2_r) = {}; inconsistent sample, verdict withheld",
            h.ker_ext2
        ));
    }
    let mut v = VerdictSet {
        dim_ws: Some(h.lambda),
        ..VerdictSet::default()
    };
    let detail;
    if upper == 0 {
        // Tangent dimension equals the dimension of the stratum through the
        // point, so the family is smooth there of dimension λ.
        v.codim_in_family = Some(CodimensionVerdict::Exact { value: 0 });
        v.generically_smooth = Some(true);
        detail = format!(
            "dim W = λ = {}; the tangent dimension hom(I,A) equals λ, so the \
             family is smooth at the sample and the codimension is exactly 0",
            h.lambda
        );
    } else if h.ext1_a_conormal == Some(0) {
        v.codim_in_family = Some(CodimensionVerdict::Exact { value: upper });
        v.generically_smooth = Some(true);
        detail = format!(
            "dim W = λ = {}; ext1_a(I/I², A) = 0 makes the family smooth at \
             the sample, so the codimension is exactly hom(I,A) − λ = {upper} \
             (defect bound ker(ext2_a → ext2_r) = {})",
            h.lambda, h.ker_ext2
        );
    } else {
        v.codim_in_family = Some(CodimensionVerdict::Interval {
            lower: 0,
            upper,
        });
        let conormal = match h.ext1_a_conormal {
            Some(e) => format!("ext1_a(I/I², A) = {e} ≠ 0"),
            None => "ext1_a(I/I², A) unverified".into(),
        };
        detail = format!(
            "dim W = λ = {}; codimension lies in [0, hom(I,A) − λ] = [0, {upper}] \
             (defect bound ker(ext2_a → ext2_r) = {}); {conormal}, so smoothness \
             is not certified and the bound stays an interval",
            h.lambda, h.ker_ext2
        );
    }
    Ok((v, detail))
}

/// When additionally ₀Ext²_A(M,M) = 0, the stratum closure is a generically
/// smooth irreducible component of the ambient family: dimension λ,
/// codimension zero, every deformation from the matrix.
fn rule_smooth_component(h: &HypothesisRecord) -> RuleOutcome {
    let mut missing = Vec::new();
    if !h.hom_a_mm_is_k {
        missing.push(format!(
            "hom_a_mm_is_k (computed dim hom(M,M) = {})",
            h.hom_mm
        ));
    }
    if h.ext1_a_mm != 0 {
        missing.push(format!("ext1_a_mm = 0 (computed {})", h.ext1_a_mm));
    }
    if !missing.is_empty() {
        return refused(missing.join("; "));
    }
    let ext2_note = if h.c == 2 {
        "ext2_a(M,M) = 0 holds unconditionally for c = 2"
    } else {
        match h.ext2_a_mm {
            Some(0) => "ext2_a(M,M) = 0 verified",
            Some(e2) => return refused(format!("ext2_a_mm = 0 (computed {e2})")),
            None => {
                return unverifiable(
                    "ext2_a_mm could not be certified within resolution bounds".into(),
                )
            }
        }
    };
    let v = VerdictSet {
        dim_ws: Some(h.lambda),
        codim_in_family: Some(CodimensionVerdict::Exact { value: 0 }),
        generically_smooth: Some(true),
        is_component: Some(true),
        every_def_from_matrix: Some(true),
        glicci_general_element: None,
    };
    Ok((
        v,
        format!(
            "hom(M,M) = k, ext1_a(M,M) = 0 and {ext2_note}: the stratum \
             closure is a generically smooth component of dimension λ = {}",
            h.lambda
        ),
    ))
}

/// When M has only scalar endomorphisms and δ₀ is surjective, deforming the
/// algebra is the same as deforming the matrix: the stratum closure is a
/// component of dimension λ − ₀ext¹_A(M,M), and the family is smooth at the
/// sample (so its tangent dimension must equal that number, which is checked).
fn rule_component_via_surjectivity(h: &HypothesisRecord) -> RuleOutcome {
    let mut missing = Vec::new();
    if !h.hom_a_mm_is_k {
        missing.push(format!(
            "hom_a_mm_is_k (computed dim hom(M,M) = {})",
            h.hom_mm
        ));
    }
    if !h.delta0_surjective {
        missing.push(format!(
            "delta0_surjective (rank δ₀ = {} < target dim = {})",
            h.rank_delta0, h.e2_01
        ));
    }
    if !missing.is_empty() {
        return refused(missing.join("; "));
    }
    let dim = h.lambda - h.ext1_a_mm as i64;
    if dim != h.hom_i_a as i64 {
        return refused(format!(
            "cross-check failed: λ − ext1_a(M,M) = {dim} but the tangent \
             dimension hom(I,A) = {}; verdict withheld",
            h.hom_i_a
        ));
    }
    let v = VerdictSet {
        dim_ws: Some(dim),
        generically_smooth: Some(true),
        is_component: Some(true),
        every_def_from_matrix: Some(true),
        ..VerdictSet::default()
    };
    Ok((
        v,
        format!(
            "hom(M,M) = k and δ₀ surjective: deformations of the algebra all \
             come from the matrix, the stratum closure is a generically smooth \
             component of dimension λ − ext1_a(M,M) = {} − {} = {dim} \
             (matches hom(I,A) = {})",
            h.lambda, h.ext1_a_mm, h.hom_i_a
        ),
    ))
}

/// For a positive-dimensional scheme cut out by the minors, the same
/// surjectivity hypothesis makes the Hilbert scheme smooth at the sample
/// and the general element of the unique component through it glicci. The
/// cohomological side condition is certified by depth A ≥ 2.
fn rule_glicci(h: &HypothesisRecord) -> RuleOutcome {
    if h.dim_a == 0 {
        return refused(
            "the quotient is artinian and defines no projective scheme".into(),
        );
    }
    if h.dim_a == 1 {
        return refused(
            "the scheme is zero-dimensional; the cohomological hypothesis \
             cannot be certified at depth 1"
                .into(),
        );
    }
    let depth = match h.depth_a {
        Some(d) => d,
        None => {
            return unverifiable(
                "depth could not be certified within resolution bounds".into(),
            )
        }
    };
    if depth < 2 {
        return refused(format!(
            "certified depth {depth} < 2; the cohomological hypothesis fails"
        ));
    }
    let mut missing = Vec::new();
    if !h.hom_a_mm_is_k {
        missing.push(format!(
            "hom_a_mm_is_k (computed dim hom(M,M) = {})",
            h.hom_mm
        ));
    }
    if !h.delta0_surjective {
        missing.push(format!(
            "delta0_surjective (rank δ₀ = {} < target dim = {})",
            h.rank_delta0, h.e2_01
        ));
    }
    if !missing.is_empty() {
        return refused(missing.join("; "));
    }
    let v = VerdictSet {
        glicci_general_element: Some(true),
        ..VerdictSet::default()
    };
    Ok((
        v,
        format!(
            "dim X = {} ≥ 1, certified depth {depth} ≥ 2, hom(M,M) = k and δ₀ \
             surjective: a general element of the unique component through the \
             sample is glicci",
            h.dim_a - 1
        ),
    ))
}

// ---------------------------------------------------------------------------
// Merging and evaluation
// ---------------------------------------------------------------------------

fn merge_bool(
    field: &'static str,
    into: &mut Option<bool>,
    from: Option<bool>,
) -> Result<(), VerdictsError> {
    match (*into, from) {
        (Some(x), Some(y)) if x != y => Err(VerdictsError::InconsistentVerdicts {
            field,
            left: x.to_string(),
            right: y.to_string(),
        }),
        (None, Some(y)) => {
            *into = Some(y);
            Ok(())
        }
        _ => Ok(()),
    }
}

fn merge_sets(into: &mut VerdictSet, from: &VerdictSet) -> Result<(), VerdictsError> {
    match (into.dim_ws, from.dim_ws) {
        (Some(x), Some(y)) if x != y => {
            return Err(VerdictsError::InconsistentVerdicts {
                field: "dim_ws",
                left: x.to_string(),
                right: y.to_string(),
            })
        }
        (None, Some(y)) => into.dim_ws = Some(y),
        _ => {}
    }
    match (into.codim_in_family, from.codim_in_family) {
        (Some(x), Some(y)) => {
            into.codim_in_family =
                Some(
                    x.merge(y)
                        .map_err(|_| VerdictsError::InconsistentVerdicts {
                            field: "codim_in_family",
                            left: x.to_string(),
                            right: y.to_string(),
                        })?,
                )
        }
        (None, Some(y)) => into.codim_in_family = Some(y),
        _ => {}
    }
    merge_bool(
        "generically_smooth",
        &mut into.generically_smooth,
        from.generically_smooth,
    )?;
    merge_bool("is_component", &mut into.is_component, from.is_component)?;
    merge_bool(
        "every_def_from_matrix",
        &mut into.every_def_from_matrix,
        from.every_def_from_matrix,
    )?;
    merge_bool(
        "glicci_general_element",
        &mut into.glicci_general_element,
        from.glicci_general_element,
    )?;
    Ok(())
}

fn apply_rule(
    rule: &'static str,
    outcome: RuleOutcome,
    verdicts: &mut VerdictSet,
    provenance: &mut Vec<ProvenanceEntry>,
) -> Result<(), VerdictsError> {
    match outcome {
        Ok((set, detail)) => {
            merge_sets(verdicts, &set)?;
            provenance.push(ProvenanceEntry {
                rule: rule.into(),
                status: RuleStatus::Fired,
                detail,
            });
        }
        Err(refusal) => provenance.push(ProvenanceEntry {
            rule: rule.into(),
            status: refusal.status,
            detail: refusal.detail,
        }),
    }
    Ok(())
}

/// Run every rule against an explicit sample, using the given closed-form
/// invariants for its spec.
pub fn evaluate_sample(
    matrix: GradedMatrix,
    invariants: StratumInvariants,
) -> Result<StratumReport, VerdictsError> {
    let spec = matrix.spec().clone();
    let ctx = StandardContext::new(matrix)?;
    let (hypotheses, mut provenance) = gather_hypotheses(&ctx, invariants.lambda)?;
    let mut verdicts = VerdictSet::default();
    let outcomes: [(&'static str, RuleOutcome); 6] = [
        (RULE_CODIM_TWO_QUOTIENT, rule_codim_two_quotient(&hypotheses)),
        (
            RULE_DIMENSION_VIA_MODULE,
            rule_dimension_via_module(&hypotheses),
        ),
        (RULE_CODIMENSION_BOUND, rule_codimension_bound(&hypotheses)),
        (RULE_SMOOTH_COMPONENT, rule_smooth_component(&hypotheses)),
        (
            RULE_COMPONENT_VIA_SURJECTIVITY,
            rule_component_via_surjectivity(&hypotheses),
        ),
        (RULE_GLICCI, rule_glicci(&hypotheses)),
    ];
    for (rule, outcome) in outcomes {
        apply_rule(rule, outcome, &mut verdicts, &mut provenance)?;
    }
    Ok(StratumReport {
        schema_version: REPORT_SCHEMA_VERSION,
        spec,
        invariants,
        hypotheses,
        verdicts,
        provenance,
    })
}

/// Sample a general matrix for the spec and run every rule against it. The
/// verdicts are statements about the sampled algebra; for hypotheses that
/// are open conditions they transfer to a general member of the stratum.
pub fn evaluate_stratum(spec: &DegreeMatrixSpec) -> Result<StratumReport, VerdictsError> {
    let invariants = StratumInvariants::compute(spec)?;
    let (matrix, _, _) = general_standard_sample(spec)?;
    evaluate_sample(matrix, invariants)
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(n: usize, b: &[i64], a: &[i64]) -> DegreeMatrixSpec {
        DegreeMatrixSpec::new(n, b.to_vec(), a.to_vec()).unwrap()
    }

    fn entry<'r>(report: &'r StratumReport, rule: &str) -> &'r ProvenanceEntry {
        report
            .provenance
            .iter()
            .find(|e| e.rule == rule)
            .unwrap_or_else(|| panic!("no provenance entry for {rule}"))
    }

    #[test]
    fn scan_flags_follow_the_degree_patterns() {
        // Deep quotient with ascending degrees: every "applies" flag is on.
        let s = sufficient_condition_scan(&spec(5, &[0, 0], &[1, 1, 2])).unwrap();
        assert_eq!(s.dim_a, 4);
        assert!(s.gap_two && s.gap_min3);
        assert!(s.codimension_bound_applies);
        assert!(s.smooth_component_applies);
        assert!(s.surjectivity_component_applies);
        assert!(s.glicci_applies);
        assert_eq!(s.lci_outside_codim, Some(4));
        assert!(s.component_closure_clause);
        assert!(!s.linear_two_row_exception);

        // dim X = 2 with a_0 > b_t: the smooth-component conditions hold.
        let s = sufficient_condition_scan(&spec(4, &[0, 0], &[1, 1, 2])).unwrap();
        assert_eq!(s.dim_a, 3);
        assert!(s.smooth_component_applies);

        // Linear 2 × (c+1) with n = c: the one known failing shape.
        let s = sufficient_condition_scan(&spec(3, &[0, 0], &[1, 1, 1, 1])).unwrap();
        assert!(s.linear_two_row_exception);
        assert!(!s.artinian_dimension_clause);
        assert!(!s.dimension_formula_clause);
        assert!(!s.codimension_bound_applies);

        // Artinian with one higher column degree: the dimension clauses fire.
        let s = sufficient_condition_scan(&spec(3, &[0, 0], &[1, 1, 1, 2])).unwrap();
        assert!(s.artinian_dimension_clause);
        assert!(s.dimension_formula_clause);
        assert!(!s.linear_two_row_exception);
    }

    #[test]
    fn codim_two_strata_get_unconditional_verdicts() {
        let report = evaluate_stratum(&spec(2, &[0, 0], &[1, 1, 1])).unwrap();
        assert_eq!(report.verdicts.dim_ws, Some(report.invariants.lambda));
        assert_eq!(
            report.verdicts.codim_in_family,
            Some(CodimensionVerdict::Exact { value: 0 })
        );
        assert_eq!(report.verdicts.generically_smooth, Some(true));
        assert_eq!(report.verdicts.is_component, Some(true));
        assert_eq!(report.verdicts.every_def_from_matrix, Some(true));
        assert_eq!(
            entry(&report, RULE_CODIM_TWO_QUOTIENT).status,
            RuleStatus::Fired
        );
        assert_eq!(
            entry(&report, RULE_DIMENSION_VIA_MODULE).status,
            RuleStatus::Fired
        );
        // dim X = 0: glicci needs a positive-dimensional scheme.
        assert_eq!(entry(&report, RULE_GLICCI).status, RuleStatus::Refused);
        assert_eq!(report.verdicts.glicci_general_element, None);
    }

    #[test]
    fn artinian_pencil_of_binary_cubics_has_dimension_three() {
        let report = evaluate_stratum(&spec(1, &[-2, -1], &[0, 0, 0])).unwrap();
        assert_eq!(report.invariants.lambda, 3);
        assert_eq!(report.verdicts.dim_ws, Some(3));
        assert_eq!(
            report.verdicts.codim_in_family,
            Some(CodimensionVerdict::Exact { value: 0 })
        );
        let glicci = entry(&report, RULE_GLICCI);
        assert_eq!(glicci.status, RuleStatus::Refused);
        assert!(glicci.detail.contains("artinian"));
    }

    #[test]
    fn quartic_column_routes_to_the_surjectivity_rule() {
        let report = evaluate_stratum(&spec(2, &[0, 0], &[1, 1, 1, 3])).unwrap();
        // ext1_a(M,M) = 2 blocks the dimension-via-module route…
        let refusedentry = entry(&report, RULE_DIMENSION_VIA_MODULE);
        assert_eq!(refusedentry.status, RuleStatus::Refused);
        assert!(refusedentry.detail.contains("ext1_a_mm"));
        assert_eq!(
            entry(&report, RULE_CODIMENSION_BOUND).status,
            RuleStatus::Refused
        );
        // …but δ₀ is surjective, so the stratum is still a component, of
        // dimension λ − ext1_a = 8 − 2 = 6.
        assert_eq!(
            entry(&report, RULE_COMPONENT_VIA_SURJECTIVITY).status,
            RuleStatus::Fired
        );
        assert_eq!(report.hypotheses.lambda, 8);
        assert_eq!(report.hypotheses.ext1_a_mm, 2);
        assert_eq!(report.verdicts.dim_ws, Some(6));
        assert_eq!(report.verdicts.is_component, Some(true));
        // No rule certified a codimension for this stratum.
        assert_eq!(report.verdicts.codim_in_family, None);
        assert_eq!(entry(&report, RULE_GLICCI).status, RuleStatus::Refused);
    }

    #[test]
    fn positive_dimensional_codim_two_scheme_is_glicci() {
        let report = evaluate_stratum(&spec(3, &[0, 0], &[1, 1, 2])).unwrap();
        assert_eq!(report.hypotheses.depth_a, Some(2));
        assert_eq!(report.verdicts.glicci_general_element, Some(true));
        assert_eq!(report.verdicts.dim_ws, Some(report.invariants.lambda));
        // codim-two-quotient gives Exact(0); codimension-bound must agree.
        assert_eq!(
            entry(&report, RULE_CODIMENSION_BOUND).status,
            RuleStatus::Fired
        );
        assert_eq!(
            report.verdicts.codim_in_family,
            Some(CodimensionVerdict::Exact { value: 0 })
        );
        assert_eq!(report.hypotheses.hom_i_a as i64, report.invariants.lambda);

        let json = serde_json::to_string(&report).unwrap();
        let back: StratumReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, report);
    }

    #[test]
    fn empty_strata_are_rejected_up_front() {
        let err = evaluate_stratum(&spec(2, &[0, 5], &[1, 1, 1])).unwrap_err();
        assert!(matches!(
            err,
            VerdictsError::Formulas(FormulasError::EmptyStratum)
        ));
    }

    #[test]
    fn codimension_merging_is_monotone() {
        use CodimensionVerdict::*;
        let exact = Exact { value: 2 };
        let wide = Interval { lower: 0, upper: 5 };
        assert_eq!(exact.merge(wide), Ok(Exact { value: 2 }));
        assert_eq!(wide.merge(exact), Ok(Exact { value: 2 }));
        assert!(Exact { value: 7 }.merge(wide).is_err());
        assert_eq!(
            (Interval { lower: 1, upper: 4 }).merge(Interval { lower: 3, upper: 9 }),
            Ok(Interval { lower: 3, upper: 4 })
        );
        assert!(
            (Interval { lower: 0, upper: 1 })
                .merge(Interval { lower: 3, upper: 9 })
                .is_err()
        );

        let mut total = VerdictSet {
            dim_ws: Some(14),
            ..VerdictSet::default()
        };
        let conflicting = VerdictSet {
            dim_ws: Some(12),
            ..VerdictSet::default()
        };
        assert!(matches!(
            merge_sets(&mut total, &conflicting),
            Err(VerdictsError::InconsistentVerdicts { field: "dim_ws", .. })
        ));
    }
}

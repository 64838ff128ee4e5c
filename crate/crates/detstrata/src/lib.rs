//! Exact computation with determinantal graded algebras over prime fields.
//!
//! The crate constructs quotients A = R/I_t(𝒜) of a polynomial ring
//! R = k[x_0..x_n] by the maximal minors of a homogeneous t × (t+c−1) matrix,
//! and computes the invariants that control the stratum W_s(b;a) of such
//! quotients inside the parameter space of graded algebras with fixed Hilbert
//! function: closed-form dimension formulas, degree-zero Hom and Ext groups,
//! minimal free resolutions with Betti tables, and ghost-term analysis.
//!
//! All arithmetic is exact over GF(p) for a configurable odd prime p; every
//! computation is deterministic for a fixed (spec, seed, bounds) triple.

pub mod arith;
pub mod determinantal;
pub mod formulas;
pub mod ghost;
pub mod groebner;
pub mod homext;
pub mod poly;
pub mod verdicts;

pub use arith::{ArithError, ExactMatrix, Field, FieldElement};
pub use determinantal::{
    build_flag, buchsbaum_rim_betti, codimension_check, eagon_northcott_betti,
    general_standard_sample, h_vector, hilbert_function_m, maximal_minors, minors,
    quotient_context, sample_matrix, Codimension, CodimensionReport, DegreeMatrixSpec,
    DeterminantalError, DeterminantalFlag, GradedMatrix, GradedModulePresentation, SampleMode,
};
pub use ghost::{
    corner_ghost_pairs, detect_ghosts, detect_ghosts_for_corner, minimal_quotient_betti,
    reduce_degree_matrix, verify_generization, GenerizationReport, GhostError, GhostLedger,
    GhostOverlap,
};
pub use formulas::{
    aut_b, binomial, dimension_formula, ell_values, h_values, k_values, lambda, lambda_c,
    lambda_quotient_c2, nonempty, AutomorphismCount, DimensionPair, FormulasError, HomMmStatus,
    StratumInvariants,
};
pub use groebner::{
    buchberger, graded_map_matrix, krull_dimension, minimal_free_resolution, normal_form,
    syzygies, BettiTable, FreeResolution, GradedFreeModule, GroebnerBasis, GroebnerError,
    ModuleElement, QuotientContext, ResolutionBounds,
};
pub use homext::{
    ext1_a_conormal, ext1_r_mm, ext_a_mm_truncated, five_term_degree_zero, hom_degree_zero,
    hom_i_a, tangent_map_em, ConormalReport, Ext1R, FiveTermDegreeZero, GradedHomSpace, HomBase,
    HomExtError, StandardContext, TangentMap,
};
pub use poly::{
    graded_piece_dimension, parse_polynomial, random_homogeneous, GradedPieceBasis, Monomial,
    PolyError, Polynomial, Ring,
};
pub use verdicts::{
    evaluate_sample, evaluate_stratum, gather_hypotheses, sufficient_condition_scan,
    CodimensionVerdict, HypothesisRecord, ProvenanceEntry, RuleStatus, StratumReport,
    SufficientConditionScan, VerdictSet, VerdictsError, REPORT_SCHEMA_VERSION,
};

//! Closed-form combinatorics of the stratum W_s(b;a): the binomial sum λ_c,
//! the correction terms K_3..K_c with their ℓ and h inputs, the two dimension
//! formulas (binomial form and Hilbert-function form), the automorphism count
//! of B, and the nonemptiness predicate.

use crate::determinantal::{
    general_standard_sample, hilbert_function_m, DegreeMatrixSpec, DeterminantalError,
};
use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum FormulasError {
    #[error("the stratum is empty: need a_(i-1) >= b_i for all i, strictly for some i")]
    EmptyStratum,
    #[error(transparent)]
    Determinantal(#[from] DeterminantalError),
}

/// C(x, n) as the dimension of the degree-(x−n) piece of R = k[x_0..x_n]:
/// zero whenever x < n. Computed in 128-bit and asserted to fit the report
/// width.
pub fn binomial(x: i64, n: usize) -> i64 {
    if x < n as i64 {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..n {
        acc = acc * ((x as u128) - i as u128) / (i as u128 + 1);
    }
    i64::try_from(acc).expect("binomial exceeds the report integer width")
}

/// The base closed form λ_c: Σ C(a_j−b_i+n, n) + Σ C(b_i−a_j+n, n)
/// − Σ C(a_i−a_j+n, n) − Σ C(b_i−b_j+n, n) + 1, the first two sums over
/// (row, column) index pairs, the last two squaring over column and row
/// indices respectively.
pub fn lambda_c(spec: &DegreeMatrixSpec) -> i64 {
    let n = spec.n;
    let mut acc: i64 = 1;
    for &bi in &spec.b {
        for &aj in &spec.a {
            acc += binomial(aj - bi + n as i64, n);
            acc += binomial(bi - aj + n as i64, n);
        }
    }
    for &ai in &spec.a {
        for &aj in &spec.a {
            acc -= binomial(ai - aj + n as i64, n);
        }
    }
    for &bi in &spec.b {
        for &bj in &spec.b {
            acc -= binomial(bi - bj + n as i64, n);
        }
    }
    acc
}

/// ℓ_i = Σ_{j=0}^{t+i−2} a_j − Σ_q b_q for i = 3..c (empty when c = 2).
pub fn ell_values(spec: &DegreeMatrixSpec) -> Vec<i64> {
    let t = spec.t();
    let c = spec.c();
    let sum_b: i64 = spec.b.iter().sum();
    (3..=c)
        .map(|i| spec.a[..=(t + i - 2)].iter().sum::<i64>() - sum_b)
        .collect()
}

/// h_{i−3} = 2a_{t+i−2} − ℓ_i + n for i = 3..c.
pub fn h_values(spec: &DegreeMatrixSpec) -> Vec<i64> {
    let t = spec.t();
    let n = spec.n as i64;
    ell_values(spec)
        .iter()
        .enumerate()
        .map(|(idx, &ell)| {
            let i = idx + 3;
            2 * spec.a[t + i - 2] - ell + n
        })
        .collect()
}

/// The correction terms K_3..K_c: K_{i+3} sums
/// (−1)^{i−r} C(h_i + a_{i₁}+…+a_{i_r} + b_{j₁}+…+b_{j_s}, n) over r+s = i,
/// strictly increasing column indices 0 ≤ i₁ < … < i_r ≤ t+i, and weakly
/// increasing row indices 1 ≤ j₁ ≤ … ≤ j_s ≤ t. Values can in principle be
/// negative; callers report rather than reject that.
pub fn k_values(spec: &DegreeMatrixSpec) -> Vec<i64> {
    let t = spec.t();
    let c = spec.c();
    let n = spec.n;
    let h = h_values(spec);
    let mut out = Vec::new();
    for i in 0..=c.saturating_sub(3) {
        if i + 3 > c {
            break;
        }
        let hi = h[i];
        let mut k: i64 = 0;
        for r in 0..=i {
            let s = i - r;
            let sign = if (i - r) % 2 == 0 { 1 } else { -1 };
            for cols in (0..=(t + i)).combinations(r) {
                let sum_a: i64 = cols.iter().map(|&j| spec.a[j]).sum();
                for rows in (0..t).combinations_with_replacement(s) {
                    let sum_b: i64 = rows.iter().map(|&q| spec.b[q]).sum();
                    k += sign * binomial(hi + sum_a + sum_b, n);
                }
            }
        }
        out.push(k);
    }
    out
}

/// λ = λ_c + K_3 + … + K_c, the binomial form of the stratum dimension.
pub fn lambda(spec: &DegreeMatrixSpec) -> i64 {
    lambda_c(spec) + k_values(spec).iter().sum::<i64>()
}

/// Nonemptiness of W_s(b;a): a_{i−1} ≥ b_i for every i with strict
/// inequality for at least one.
pub fn nonempty(spec: &DegreeMatrixSpec) -> bool {
    spec.stratum_nonempty()
}

/// Both dimension formulas: the binomial λ and the Hilbert-function form
/// Σ_j H_M(a_j) − Σ_i H_M(b_i) + 1 evaluated on a sampled standard matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionPair {
    pub lambda: i64,
    pub dim_via_hm: i64,
}

pub fn dimension_formula(spec: &DegreeMatrixSpec) -> Result<DimensionPair, FormulasError> {
    if !nonempty(spec) {
        return Err(FormulasError::EmptyStratum);
    }
    let (matrix, _, _) = general_standard_sample(spec)?;
    let mut dim: i64 = 1;
    for &aj in &spec.a {
        dim += hilbert_function_m(&matrix, aj) as i64;
    }
    for &bi in &spec.b {
        dim -= hilbert_function_m(&matrix, bi) as i64;
    }
    Ok(DimensionPair {
        lambda: lambda(spec),
        dim_via_hm: dim,
    })
}

/// Whether the hypothesis ₀hom(M,M) = 1 behind the automorphism count was
/// verified by a linear-algebra computation or merely assumed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HomMmStatus {
    Verified,
    Assumed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutomorphismCount {
    pub value: i64,
    pub hom_mm: HomMmStatus,
}

/// aut(B_c) = 1 + K_3 + … + K_c, valid when ₀hom(M,M) = 1; the status flag
/// records whether that hypothesis was checked.
pub fn aut_b(spec: &DegreeMatrixSpec, hom_mm: HomMmStatus) -> AutomorphismCount {
    AutomorphismCount {
        value: 1 + k_values(spec).iter().sum::<i64>(),
        hom_mm,
    }
}

/// The c = 2 dimension formula over a quotient ring R̄, with dim R̄_d
/// supplied by the caller: Σ h(a_j−b_i) + Σ h(b_i−a_j) − Σ h(a_i−a_j)
/// − Σ h(b_i−b_j) + 1. With h = dim R_d it reduces to λ_c.
pub fn lambda_quotient_c2<F>(spec: &DegreeMatrixSpec, hilbert_of_rbar: F) -> i64
where
    F: Fn(i64) -> u64,
{
    assert_eq!(spec.c(), 2, "quotient dimension formula needs c = 2");
    let h = |d: i64| -> i64 { hilbert_of_rbar(d) as i64 };
    let mut acc: i64 = 1;
    for &bi in &spec.b {
        for &aj in &spec.a {
            acc += h(aj - bi);
            acc += h(bi - aj);
        }
    }
    for &ai in &spec.a {
        for &aj in &spec.a {
            acc -= h(ai - aj);
        }
    }
    for &bi in &spec.b {
        for &bj in &spec.b {
            acc -= h(bi - bj);
        }
    }
    acc
}

/// The full closed-form invariant bundle for a nonempty stratum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumInvariants {
    pub lambda_c: i64,
    pub k: Vec<i64>,
    pub ell: Vec<i64>,
    pub h: Vec<i64>,
    pub lambda: i64,
    pub dim_via_hm: i64,
    pub nonempty: bool,
    /// Some K_i came out negative; reported, never asserted away.
    pub negative_k: bool,
    /// Seeds consumed while hunting for a standard sample.
    pub sample_seeds: Vec<u64>,
}

impl StratumInvariants {
    pub fn compute(spec: &DegreeMatrixSpec) -> Result<Self, FormulasError> {
        if !nonempty(spec) {
            return Err(FormulasError::EmptyStratum);
        }
        let (matrix, _, seeds) = general_standard_sample(spec)?;
        let mut dim: i64 = 1;
        for &aj in &spec.a {
            dim += hilbert_function_m(&matrix, aj) as i64;
        }
        for &bi in &spec.b {
            dim -= hilbert_function_m(&matrix, bi) as i64;
        }
        let k = k_values(spec);
        let lc = lambda_c(spec);
        Ok(StratumInvariants {
            lambda_c: lc,
            negative_k: k.iter().any(|&v| v < 0),
            lambda: lc + k.iter().sum::<i64>(),
            k,
            ell: ell_values(spec),
            h: h_values(spec),
            dim_via_hm: dim,
            nonempty: true,
            sample_seeds: seeds,
        })
    }
}

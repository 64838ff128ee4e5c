//! Multivariate polynomials over GF(p) in the variables x0..xn.
//!
//! Monomials carry their exponent vector (length n+1) and a cached total
//! degree; the term order is graded reverse lexicographic (grevlex)
//! throughout. Polynomials store terms sorted in strictly descending order
//! with no zero coefficients and a cached homogeneity flag, so structural
//! equality is semantic equality.

use crate::arith::{ExactMatrix, Field, FieldElement};
use rand::Rng;
use thiserror::Error;

/// Upper bound on a single exponent accepted by constructors and the parser.
/// Working degrees stay far below this; the bound exists to keep adversarial
/// input from overflowing degree arithmetic.
pub const MAX_EXPONENT: u32 = 4096;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("unexpected character {0:?} at byte {1}")]
    UnexpectedChar(char, usize),
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("variable x{index} exceeds ring variable x{max}")]
    VariableOutOfRange { index: usize, max: usize },
    #[error("exponent {0} exceeds the supported bound {MAX_EXPONENT}")]
    ExponentTooLarge(u64),
    #[error("number literal too long")]
    NumberTooLong,
    #[error("empty term at byte {0}")]
    EmptyTerm(usize),
}

/// The graded polynomial ring k[x0..xn] with coefficients in GF(p).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ring {
    n: usize,
    field: Field,
}

impl Ring {
    /// Ring with variables x0..xn, so n+1 variables in total.
    pub fn new(n: usize, field: Field) -> Self {
        Ring { n, field }
    }

    /// Largest variable index.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nvars(&self) -> usize {
        self.n + 1
    }

    pub fn field(&self) -> Field {
        self.field
    }
}

/// A monomial: exponent vector of length n+1 with cached total degree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<u32>,
    degree: u32,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        assert!(
            exps.iter().all(|&e| e <= MAX_EXPONENT),
            "exponent exceeds supported bound"
        );
        let degree = exps.iter().sum();
        Monomial { exps, degree }
    }

    pub fn one(nvars: usize) -> Self {
        Monomial {
            exps: vec![0; nvars],
            degree: 0,
        }
    }

    pub fn variable(nvars: usize, i: usize) -> Self {
        assert!(i < nvars);
        let mut exps = vec![0; nvars];
        exps[i] = 1;
        Monomial { exps, degree: 1 }
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        let exps: Vec<u32> = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(a, b)| a + b)
            .collect();
        Monomial {
            degree: self.degree + other.degree,
            exps,
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// other / self, when self divides other.
    pub fn quotient_into(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        let exps: Vec<u32> = other
            .exps
            .iter()
            .zip(&self.exps)
            .map(|(b, a)| b - a)
            .collect();
        Some(Monomial {
            degree: other.degree - self.degree,
            exps,
        })
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        let exps: Vec<u32> = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(a, b)| *a.max(b))
            .collect();
        Monomial::new(exps)
    }

    /// True when the two monomials share no variable.
    pub fn coprime(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| *a == 0 || *b == 0)
    }
}

impl Ord for Monomial {
    /// Grevlex: compare total degree first; on ties the monomial whose last
    /// differing exponent is smaller is the larger one.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        self.degree.cmp(&other.degree).then_with(|| {
            for i in (0..self.exps.len()).rev() {
                match self.exps[i].cmp(&other.exps[i]) {
                    std::cmp::Ordering::Less => return std::cmp::Ordering::Greater,
                    std::cmp::Ordering::Greater => return std::cmp::Ordering::Less,
                    std::cmp::Ordering::Equal => {}
                }
            }
            std::cmp::Ordering::Equal
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl std::fmt::Display for Monomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "x{i}")?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// A polynomial: terms sorted strictly descending in grevlex, no zero
/// coefficients, with a cached homogeneity flag.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    ring: Ring,
    terms: Vec<(Monomial, u64)>,
    homogeneous: bool,
}

impl Polynomial {
    pub fn zero(ring: Ring) -> Self {
        Polynomial {
            ring,
            terms: Vec::new(),
            homogeneous: true,
        }
    }

    pub fn constant(ring: Ring, c: FieldElement) -> Self {
        Self::from_terms(ring, vec![(Monomial::one(ring.nvars()), c)])
    }

    pub fn variable(ring: Ring, i: usize) -> Self {
        Self::from_terms(
            ring,
            vec![(Monomial::variable(ring.nvars(), i), ring.field().one())],
        )
    }

    /// Normalizing constructor: sorts descending, merges duplicates, drops
    /// zeros, computes the homogeneity flag.
    pub fn from_terms(ring: Ring, terms: Vec<(Monomial, FieldElement)>) -> Self {
        let mut raw: Vec<(Monomial, u64)> = terms
            .into_iter()
            .map(|(m, c)| {
                assert_eq!(m.nvars(), ring.nvars(), "monomial has wrong variable count");
                assert_eq!(c.field(), ring.field(), "coefficient from a different field");
                (m, c.value())
            })
            .collect();
        raw.sort_by(|a, b| b.0.cmp(&a.0));
        let field = ring.field();
        let mut merged: Vec<(Monomial, u64)> = Vec::with_capacity(raw.len());
        for (m, c) in raw {
            if let Some(last) = merged.last_mut() {
                if last.0 == m {
                    last.1 = field.add_raw(last.1, c);
                    continue;
                }
            }
            merged.push((m, c));
        }
        merged.retain(|(_, c)| *c != 0);
        let homogeneous = match merged.first() {
            None => true,
            Some((m0, _)) => merged.iter().all(|(m, _)| m.degree() == m0.degree()),
        };
        Polynomial {
            ring,
            terms: merged,
            homogeneous,
        }
    }

    pub(crate) fn from_raw_terms(ring: Ring, terms: Vec<(Monomial, u64)>) -> Self {
        let field = ring.field();
        Self::from_terms(
            ring,
            terms
                .into_iter()
                .map(|(m, c)| (m, field.elem_u64(c)))
                .collect(),
        )
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.homogeneous
    }

    /// Total degree of a nonzero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.first().map(|(m, _)| m.degree())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, FieldElement)> + '_ {
        let field = self.ring.field();
        self.terms.iter().map(move |(m, c)| (m, field.elem_u64(*c)))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn lead_term(&self) -> Option<(&Monomial, FieldElement)> {
        self.terms
            .first()
            .map(|(m, c)| (m, self.ring.field().elem_u64(*c)))
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        assert_eq!(self.ring, other.ring, "polynomials from different rings");
        let field = self.ring.field();
        // Merge two descending term lists.
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            match self.terms[i].0.cmp(&other.terms[j].0) {
                std::cmp::Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    out.push(other.terms[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = field.add_raw(self.terms[i].1, other.terms[j].1);
                    if c != 0 {
                        out.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        let homogeneous = match out.first() {
            None => true,
            Some((m0, _)) => out.iter().all(|(m, _)| m.degree() == m0.degree()),
        };
        Polynomial {
            ring: self.ring,
            terms: out,
            homogeneous,
        }
    }

    pub fn neg(&self) -> Polynomial {
        let field = self.ring.field();
        Polynomial {
            ring: self.ring,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), field.neg_raw(*c)))
                .collect(),
            homogeneous: self.homogeneous,
        }
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: FieldElement) -> Polynomial {
        assert_eq!(c.field(), self.ring.field());
        if c.is_zero() {
            return Polynomial::zero(self.ring);
        }
        let field = self.ring.field();
        Polynomial {
            ring: self.ring,
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), field.mul_raw(*v, c.value())))
                .collect(),
            homogeneous: self.homogeneous,
        }
    }

    /// Multiply by a single term c·m.
    pub fn mul_term(&self, m: &Monomial, c: FieldElement) -> Polynomial {
        assert_eq!(c.field(), self.ring.field());
        if c.is_zero() {
            return Polynomial::zero(self.ring);
        }
        let field = self.ring.field();
        // Multiplying a descending list by a fixed monomial preserves order.
        Polynomial {
            ring: self.ring,
            terms: self
                .terms
                .iter()
                .map(|(t, v)| (t.mul(m), field.mul_raw(*v, c.value())))
                .collect(),
            homogeneous: self.homogeneous,
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        assert_eq!(self.ring, other.ring, "polynomials from different rings");
        let field = self.ring.field();
        let mut acc: std::collections::BTreeMap<Monomial, u64> = std::collections::BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m = m1.mul(m2);
                let add = field.mul_raw(*c1, *c2);
                let e = acc.entry(m).or_insert(0);
                *e = field.add_raw(*e, add);
            }
        }
        let mut terms: Vec<(Monomial, u64)> = acc.into_iter().filter(|(_, c)| *c != 0).collect();
        terms.reverse();
        let homogeneous = match terms.first() {
            None => true,
            Some((m0, _)) => terms.iter().all(|(m, _)| m.degree() == m0.degree()),
        };
        Polynomial {
            ring: self.ring,
            terms,
            homogeneous,
        }
    }

    /// Evaluate at a point, coordinate i giving the value of x_i.
    pub fn eval(&self, point: &[FieldElement]) -> FieldElement {
        assert_eq!(point.len(), self.ring.nvars());
        let field = self.ring.field();
        let mut total = 0u64;
        for (m, c) in &self.terms {
            let mut v = *c;
            for (i, &e) in m.exps().iter().enumerate() {
                for _ in 0..e {
                    v = field.mul_raw(v, point[i].value());
                }
            }
            total = field.add_raw(total, v);
        }
        field.elem_u64(total)
    }

    /// Coordinates of a homogeneous polynomial in the basis of its degree.
    pub fn coordinates(&self, basis: &GradedPieceBasis) -> Vec<u64> {
        let mut coords = vec![0u64; basis.len()];
        for (m, c) in &self.terms {
            let idx = basis
                .index_of(m)
                .expect("monomial outside the graded piece basis");
            coords[idx] = *c;
        }
        coords
    }
}

impl std::fmt::Display for Polynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{c}")?;
            } else if *c == 1 {
                write!(f, "{m}")?;
            } else {
                write!(f, "{c}*{m}")?;
            }
        }
        Ok(())
    }
}

/// The monomial basis of the graded piece R_d, ordered descending grevlex.
/// This fixed ordering is what makes every coordinate matrix in the crate
/// deterministic.
#[derive(Debug, Clone)]
pub struct GradedPieceBasis {
    degree: i64,
    monomials: Vec<Monomial>,
}

impl GradedPieceBasis {
    pub fn new(ring: Ring, degree: i64) -> Self {
        let monomials = if degree < 0 {
            Vec::new()
        } else {
            let mut out = Vec::new();
            let mut current = vec![0u32; ring.nvars()];
            gen_exponents(&mut out, &mut current, 0, degree as u32);
            out.sort_by(|a, b| b.cmp(a));
            out
        };
        GradedPieceBasis { degree, monomials }
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.monomials.binary_search_by(|probe| probe.cmp(m).reverse()).ok()
    }
}

fn gen_exponents(out: &mut Vec<Monomial>, current: &mut Vec<u32>, pos: usize, remaining: u32) {
    if pos + 1 == current.len() {
        current[pos] = remaining;
        out.push(Monomial::new(current.clone()));
        current[pos] = 0;
        return;
    }
    for e in 0..=remaining {
        current[pos] = e;
        gen_exponents(out, current, pos + 1, remaining - e);
    }
    current[pos] = 0;
}

/// dim R_d = C(d+n, n) for d ≥ 0, and 0 for d < 0, in n+1 variables.
pub fn graded_piece_dimension(degree: i64, n: usize) -> u64 {
    if degree < 0 {
        return 0;
    }
    let d = degree as u128;
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 1..=(n as u128) {
        num *= d + i;
        den *= i;
    }
    u64::try_from(num / den).expect("graded piece dimension overflows u64")
}

/// Uniformly random coefficients (zero allowed, so full support is typical
/// but not guaranteed) on every monomial of degree d, drawn in descending
/// grevlex order so a fixed RNG stream reproduces the polynomial exactly.
/// Negative degree gives the zero polynomial.
pub fn random_homogeneous(ring: Ring, degree: i64, rng: &mut impl Rng) -> Polynomial {
    if degree < 0 {
        return Polynomial::zero(ring);
    }
    let basis = GradedPieceBasis::new(ring, degree);
    let p = ring.field().modulus();
    let terms: Vec<(Monomial, u64)> = basis
        .monomials()
        .iter()
        .map(|m| (m.clone(), rng.gen_range(0..p)))
        .collect();
    Polynomial::from_raw_terms(ring, terms)
}

/// The matrix of multiplication by a homogeneous f: R_d → R_{d+deg f}, in the
/// descending-grevlex coordinate bases on both sides.
pub fn multiplication_matrix(f: &Polynomial, from_degree: i64) -> ExactMatrix {
    let ring = f.ring();
    let field = ring.field();
    assert!(f.is_homogeneous(), "multiplication operator needs homogeneous f");
    let e = f.degree().map(i64::from).unwrap_or(0);
    let source = GradedPieceBasis::new(ring, from_degree);
    let target = GradedPieceBasis::new(ring, from_degree + e);
    let mut m = ExactMatrix::zero(field, target.len(), source.len());
    if f.is_zero() {
        return m;
    }
    for (j, src) in source.monomials().iter().enumerate() {
        for (t, c) in f.terms() {
            let prod = t.mul(src);
            let i = target
                .index_of(&prod)
                .expect("product escapes the target graded piece");
            let cur = m.get(i, j);
            m.set(i, j, cur + c);
        }
    }
    m
}

/// Parses the plus-separated text syntax, e.g. `3*x0^2*x1 + 2*x1*x2 + 5`.
/// A leading minus or minus-separated terms are accepted and folded into the
/// coefficients mod p. Variables must be x0..xn for the given ring.
pub fn parse_polynomial(input: &str, ring: Ring) -> Result<Polynomial, PolyError> {
    let bytes = input.as_bytes();
    let field = ring.field();
    let mut pos = 0usize;
    let mut terms: Vec<(Monomial, FieldElement)> = Vec::new();

    fn skip_ws(bytes: &[u8], pos: &mut usize) {
        while *pos < bytes.len() && (bytes[*pos] as char).is_ascii_whitespace() {
            *pos += 1;
        }
    }

    fn parse_uint(bytes: &[u8], pos: &mut usize) -> Result<u64, PolyError> {
        let start = *pos;
        while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
            *pos += 1;
        }
        if *pos == start {
            return Err(PolyError::UnexpectedEnd);
        }
        if *pos - start > 18 {
            return Err(PolyError::NumberTooLong);
        }
        Ok(std::str::from_utf8(&bytes[start..*pos])
            .expect("digits are ascii")
            .parse()
            .expect("checked digit run"))
    }

    skip_ws(bytes, &mut pos);
    if pos == bytes.len() {
        return Err(PolyError::UnexpectedEnd);
    }
    let mut sign_negative = false;
    if bytes[pos] == b'-' {
        sign_negative = true;
        pos += 1;
    } else if bytes[pos] == b'+' {
        pos += 1;
    }
    loop {
        skip_ws(bytes, &mut pos);
        let term_start = pos;
        let mut coeff = field.one();
        let mut exps = vec![0u32; ring.nvars()];
        let mut saw_factor = false;
        loop {
            skip_ws(bytes, &mut pos);
            if pos < bytes.len() && bytes[pos].is_ascii_digit() {
                let v = parse_uint(bytes, &mut pos)?;
                coeff = coeff * field.elem_u64(v);
                saw_factor = true;
            } else if pos < bytes.len() && bytes[pos] == b'x' {
                pos += 1;
                let idx = parse_uint(bytes, &mut pos)? as usize;
                if idx > ring.n() {
                    return Err(PolyError::VariableOutOfRange {
                        index: idx,
                        max: ring.n(),
                    });
                }
                let mut exp = 1u64;
                skip_ws(bytes, &mut pos);
                if pos < bytes.len() && bytes[pos] == b'^' {
                    pos += 1;
                    skip_ws(bytes, &mut pos);
                    exp = parse_uint(bytes, &mut pos)?;
                }
                if exp > MAX_EXPONENT as u64 || exps[idx] as u64 + exp > MAX_EXPONENT as u64 {
                    return Err(PolyError::ExponentTooLarge(exp));
                }
                exps[idx] += exp as u32;
                saw_factor = true;
            } else if saw_factor {
                break;
            } else if pos < bytes.len() {
                return Err(PolyError::UnexpectedChar(bytes[pos] as char, pos));
            } else {
                return Err(PolyError::UnexpectedEnd);
            }
            skip_ws(bytes, &mut pos);
            if pos < bytes.len() && bytes[pos] == b'*' {
                pos += 1;
                saw_factor = false;
                continue;
            }
            break;
        }
        if !saw_factor {
            return Err(PolyError::EmptyTerm(term_start));
        }
        if sign_negative {
            coeff = -coeff;
        }
        terms.push((Monomial::new(exps), coeff));
        skip_ws(bytes, &mut pos);
        if pos == bytes.len() {
            break;
        }
        match bytes[pos] {
            b'+' => {
                sign_negative = false;
                pos += 1;
            }
            b'-' => {
                sign_negative = true;
                pos += 1;
            }
            other => return Err(PolyError::UnexpectedChar(other as char, pos)),
        }
    }
    Ok(Polynomial::from_terms(ring, terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    fn ring2() -> Ring {
        Ring::new(2, Field::default_field())
    }

    fn mono(exps: &[u32]) -> Monomial {
        Monomial::new(exps.to_vec())
    }

    #[test]
    fn grevlex_orders_degree_two_in_three_vars() {
        // Descending: x0^2 > x0x1 > x1^2 > x0x2 > x1x2 > x2^2.
        let chain = [
            mono(&[2, 0, 0]),
            mono(&[1, 1, 0]),
            mono(&[0, 2, 0]),
            mono(&[1, 0, 1]),
            mono(&[0, 1, 1]),
            mono(&[0, 0, 2]),
        ];
        for w in chain.windows(2) {
            assert!(w[0] > w[1], "{} should exceed {}", w[0], w[1]);
        }
        let basis = GradedPieceBasis::new(ring2(), 2);
        assert_eq!(basis.monomials(), &chain);
    }

    #[test]
    fn grevlex_prefers_higher_degree() {
        assert!(mono(&[0, 0, 3]) > mono(&[2, 0, 0]));
    }

    #[test]
    fn graded_piece_dimension_matches_enumeration() {
        for n in 1..=5usize {
            let ring = Ring::new(n, Field::default_field());
            for d in -2..=6i64 {
                let basis = GradedPieceBasis::new(ring, d);
                assert_eq!(basis.len() as u64, graded_piece_dimension(d, n));
            }
        }
        assert_eq!(graded_piece_dimension(0, 3), 1);
        assert_eq!(graded_piece_dimension(-1, 3), 0);
        assert_eq!(graded_piece_dimension(4, 2), 15);
    }

    #[test]
    fn basis_index_lookup_roundtrips() {
        let basis = GradedPieceBasis::new(Ring::new(3, Field::default_field()), 4);
        for (i, m) in basis.monomials().iter().enumerate() {
            assert_eq!(basis.index_of(m), Some(i));
        }
        assert_eq!(basis.index_of(&mono(&[1, 0, 0, 0])), None);
    }

    fn random_poly(ring: Ring, max_deg: u32, rng: &mut ChaCha20Rng) -> Polynomial {
        let nterms = rng.gen_range(0..8);
        let field = ring.field();
        let terms = (0..nterms)
            .map(|_| {
                let exps: Vec<u32> = (0..ring.nvars()).map(|_| rng.gen_range(0..=max_deg)).collect();
                (
                    Monomial::new(exps),
                    field.elem_u64(rng.gen_range(0..field.modulus())),
                )
            })
            .collect();
        Polynomial::from_terms(ring, terms)
    }

    #[test]
    fn multiplication_respects_evaluation() {
        // Evaluation at random points is an independent homomorphism oracle.
        let ring = ring2();
        let field = ring.field();
        let mut rng = ChaCha20Rng::seed_from_u64(41);
        for _ in 0..25 {
            let f = random_poly(ring, 3, &mut rng);
            let g = random_poly(ring, 3, &mut rng);
            let h = f.mul(&g);
            for _ in 0..4 {
                let pt: Vec<FieldElement> = (0..3)
                    .map(|_| field.elem_u64(rng.gen_range(0..field.modulus())))
                    .collect();
                assert_eq!(h.eval(&pt), f.eval(&pt) * g.eval(&pt));
            }
        }
    }

    #[test]
    fn multiplication_matches_naive_convolution() {
        let ring = ring2();
        let mut rng = ChaCha20Rng::seed_from_u64(43);
        for _ in 0..25 {
            let f = random_poly(ring, 3, &mut rng);
            let g = random_poly(ring, 3, &mut rng);
            // Oracle: term-by-term products accumulated through the
            // normalizing constructor instead of the merge map.
            let mut pieces: Vec<(Monomial, FieldElement)> = Vec::new();
            for (mf, cf) in f.terms() {
                for (mg, cg) in g.terms() {
                    pieces.push((mf.mul(mg), cf * cg));
                }
            }
            let oracle = Polynomial::from_terms(ring, pieces);
            assert_eq!(f.mul(&g), oracle);
        }
    }

    #[test]
    fn homogeneous_products_add_degrees() {
        let ring = ring2();
        let mut rng = ChaCha20Rng::seed_from_u64(47);
        let f = random_homogeneous(ring, 2, &mut rng);
        let g = random_homogeneous(ring, 3, &mut rng);
        let h = f.mul(&g);
        assert!(h.is_homogeneous());
        assert_eq!(h.degree(), Some(5));
    }

    #[test]
    fn random_homogeneous_is_seed_deterministic() {
        let ring = ring2();
        let a = random_homogeneous(ring, 4, &mut ChaCha20Rng::seed_from_u64(7));
        let b = random_homogeneous(ring, 4, &mut ChaCha20Rng::seed_from_u64(7));
        let c = random_homogeneous(ring, 4, &mut ChaCha20Rng::seed_from_u64(8));
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!(a.is_homogeneous());
        // At p = 10007 a dropped monomial has probability 1/p per slot; full
        // support on all 15 slots is the overwhelmingly typical outcome.
        assert!(a.num_terms() >= 13);
        assert!(random_homogeneous(ring, -1, &mut ChaCha20Rng::seed_from_u64(7)).is_zero());
    }

    #[test]
    fn parser_accepts_spec_syntax() {
        let ring = ring2();
        let p = parse_polynomial("3*x0^2*x1 + 2*x1*x2 + 5", ring).unwrap();
        assert_eq!(p.num_terms(), 3);
        assert!(!p.is_homogeneous());
        let field = ring.field();
        let pt = [field.elem(1), field.elem(1), field.elem(1)];
        assert_eq!(p.eval(&pt).value(), 10);
        // Repeated variables multiply out.
        let q = parse_polynomial("x0*x0*x0", ring).unwrap();
        assert_eq!(q.degree(), Some(3));
        // Unary minus folds into the field.
        let r = parse_polynomial("-x0 + x0", ring).unwrap();
        assert!(r.is_zero());
        let s = parse_polynomial("2 - 3", ring).unwrap();
        assert_eq!(s.eval(&pt), field.elem(-1));
    }

    #[test]
    fn parser_rejects_malformed_input() {
        let ring = ring2();
        assert!(matches!(
            parse_polynomial("x3", ring),
            Err(PolyError::VariableOutOfRange { index: 3, max: 2 })
        ));
        assert!(matches!(
            parse_polynomial("x0^999999", ring),
            Err(PolyError::ExponentTooLarge(_))
        ));
        assert!(parse_polynomial("", ring).is_err());
        assert!(parse_polynomial("3*", ring).is_err());
        assert!(parse_polynomial("x0 + + x1", ring).is_err());
        assert!(parse_polynomial("y0", ring).is_err());
        assert!(parse_polynomial("x0 & x1", ring).is_err());
        assert!(parse_polynomial("x", ring).is_err());
    }

    #[test]
    fn display_parse_roundtrip() {
        let ring = ring2();
        let mut rng = ChaCha20Rng::seed_from_u64(53);
        for _ in 0..30 {
            let f = random_poly(ring, 4, &mut rng);
            let back = parse_polynomial(&f.to_string(), ring);
            if f.is_zero() {
                assert!(back.unwrap().is_zero());
            } else {
                assert_eq!(back.unwrap(), f);
            }
        }
    }

    #[test]
    fn multiplication_matrix_agrees_with_products() {
        let ring = ring2();
        let mut rng = ChaCha20Rng::seed_from_u64(59);
        let f = random_homogeneous(ring, 2, &mut rng);
        let mat = multiplication_matrix(&f, 3);
        assert_eq!(mat.rows() as u64, graded_piece_dimension(5, 2));
        assert_eq!(mat.cols() as u64, graded_piece_dimension(3, 2));
        let g = random_homogeneous(ring, 3, &mut rng);
        let src = GradedPieceBasis::new(ring, 3);
        let dst = GradedPieceBasis::new(ring, 5);
        let coords = g.coordinates(&src);
        let field = ring.field();
        let vec = ExactMatrix::from_fn(field, coords.len(), 1, |r, _| field.elem_u64(coords[r]));
        let image = mat.multiply(&vec);
        let expected = f.mul(&g).coordinates(&dst);
        for (i, &e) in expected.iter().enumerate() {
            assert_eq!(image.get(i, 0).value(), e);
        }
    }
}

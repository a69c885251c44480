//! Local invariants of integral lattices: `p`-adic Jordan decompositions,
//! Conway–Sloane symbols, `p`-excesses and oddities, and the existence test
//! for a lattice with prescribed local data.
//!
//! Jordan decompositions are computed in exact rational arithmetic. A
//! rational is treated as a `p`-adic integer when its denominator is prime to
//! `p`; valuations are tracked explicitly, so nothing is ever truncated.
//!
//! 2-adic symbols are compared literally. Two 2-adic symbols describing the
//! same form through different Jordan decompositions compare unequal; no
//! sign-walking canonicalization is attempted.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::arith::{factor, is_prime, pow_mod, rat_mod, rat_valuation, relevant_primes, split_prime};
use crate::lattice::Lattice;
use crate::matrix::RatMatrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenusError {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("kronecker symbol mod 2 needs an odd argument, got {0}")]
    EvenArgument(BigInt),
    #[error("{what} requires p = 2, got {p}")]
    NeedsTwo { what: &'static str, p: u64 },
    #[error("{what} requires an odd prime, got 2")]
    NeedsOdd { what: &'static str },
    #[error("malformed genus data: {0}")]
    Malformed(String),
    #[error("syntax error: {0}")]
    Syntax(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FormType {
    /// Some diagonal entry is odd (the only type used at odd primes).
    I,
    /// Every diagonal entry is even.
    II,
}

/// One Jordan constituent `q^{ε n}_t` with `q = p^exponent`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct JordanBlock {
    pub exponent: u32,
    pub dim: usize,
    /// `+1` or `-1`.
    pub sign: i8,
    pub form_type: FormType,
    /// Residue mod 8; always zero at odd primes and for type II.
    pub oddity: u8,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PadicSymbol {
    pub prime: u64,
    /// Sorted by ascending exponent, at most one block per exponent.
    pub blocks: Vec<JordanBlock>,
}

/// Global data for the existence question: signature, determinant, and a
/// local symbol for every prime dividing `2 · det`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenusSpec {
    pub signature: (usize, usize),
    pub det: BigInt,
    pub symbols: BTreeMap<u64, PadicSymbol>,
}

/// A unimodular-over-`Z_(p)` constituent together with its scale exponent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JordanConstituent {
    pub exponent: u32,
    /// `f_q`: the constituent divided by its scale; a `p`-adic unit determinant.
    pub form: RatMatrix,
    /// Sizes of the 1x1 / 2x2 pieces of `form`, in order along the diagonal.
    pub pieces: Vec<usize>,
}

/// `transform · gram · transformᵀ = ⊕ p^e · form_e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JordanDecomposition {
    pub prime: u64,
    pub constituents: Vec<JordanConstituent>,
    pub transform: RatMatrix,
}

/// Which existence condition a local datum violates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Condition {
    Determinant,
    OddityFormula,
    TypeII,
    TableDim1,
    TableDim2,
    Parity,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::Determinant => "determinant condition",
            Condition::OddityFormula => "oddity formula",
            Condition::TypeII => "Jordan blocks: type II oddity",
            Condition::TableDim1 => "Jordan blocks: dimension 1 table",
            Condition::TableDim2 => "Jordan blocks: dimension 2 table",
            Condition::Parity => "Jordan blocks: oddity parity",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub condition: Condition,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenusVerdict {
    pub violations: Vec<Violation>,
}

impl GenusVerdict {
    pub fn exists(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violates(&self, c: Condition) -> bool {
        self.violations.iter().any(|v| v.condition == c)
    }
}

/// Both sides of `signature + Σ p-excess ≡ oddity (mod 8)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OddityCheck {
    pub lhs: u8,
    pub rhs: u8,
}

impl OddityCheck {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// Legendre symbol `(a/p)` for an odd prime `p`.
pub fn legendre(a: &BigInt, p: u64) -> Result<i8, GenusError> {
    if p == 2 || !is_prime(p) {
        return Err(GenusError::NotOddPrime(p));
    }
    let bp = BigInt::from(p);
    let r = a.modpow(&BigInt::from((p - 1) / 2), &bp);
    let r = ((r % &bp) + &bp) % &bp;
    Ok(if r.is_zero() {
        0
    } else if r.is_one() {
        1
    } else {
        -1
    })
}

/// `(a/2)`: `+1` for `a ≡ ±1 (mod 8)`, `-1` for `a ≡ ±3 (mod 8)`.
pub fn kronecker2(a: &BigInt) -> Result<i8, GenusError> {
    let r = ((a % 8u8) + 8u8) % 8u8;
    match u8::try_from(&r).expect("residue fits") {
        1 | 7 => Ok(1),
        3 | 5 => Ok(-1),
        _ => Err(GenusError::EvenArgument(a.clone())),
    }
}

/// Unit symbol of a `p`-adic unit given as a rational.
fn unit_sign(u: &BigRational, p: u64) -> i8 {
    if p == 2 {
        kronecker2(&BigInt::from(rat_mod(u, 8))).expect("2-adic unit")
    } else {
        legendre(&BigInt::from(rat_mod(u, p)), p).expect("odd prime")
    }
}

/// Block-diagonalizes the Gram matrix over `Z_(p)`.
pub fn jordan_decompose(lattice: &Lattice, p: u64) -> JordanDecomposition {
    let n = lattice.dim();
    let mut a = lattice.gram().to_rat();
    let mut t = RatMatrix::identity(n);
    // (start index, size, valuation)
    let mut pieces: Vec<(usize, usize, i64)> = Vec::new();
    let mut k = 0;
    while k < n {
        let v = (k..n)
            .flat_map(|i| (k..n).map(move |j| (i, j)))
            .filter(|&(i, j)| !a[(i, j)].is_zero())
            .map(|(i, j)| rat_valuation(&a[(i, j)], p))
            .min()
            .expect("nondegenerate form has a nonzero entry");
        if let Some(i) = (k..n).find(|&i| !a[(i, i)].is_zero() && rat_valuation(&a[(i, i)], p) == v) {
            a.sym_swap(i, k);
            t.swap_rows(i, k);
            for r in k + 1..n {
                if a[(r, k)].is_zero() {
                    continue;
                }
                let f = -(&a[(r, k)] / &a[(k, k)]);
                a.sym_add_multiple(r, k, &f);
                t.add_row_multiple(r, k, &f);
            }
            pieces.push((k, 1, v));
            k += 1;
            continue;
        }
        let (i, j) = (k..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .find(|&(i, j)| !a[(i, j)].is_zero() && rat_valuation(&a[(i, j)], p) == v)
            .expect("minimal valuation is attained off the diagonal");
        if p != 2 {
            // e_i + e_j has norm of valuation exactly v when p is odd
            a.sym_add(i, j);
            t.add_row_multiple(i, j, &BigRational::one());
            continue;
        }
        a.sym_swap(i, k);
        t.swap_rows(i, k);
        let j = if j == k { i } else { j };
        a.sym_swap(j, k + 1);
        t.swap_rows(j, k + 1);
        let det = &a[(k, k)] * &a[(k + 1, k + 1)] - &a[(k, k + 1)] * &a[(k + 1, k)];
        for r in k + 2..n {
            let (b0, b1) = (a[(r, k)].clone(), a[(r, k + 1)].clone());
            if b0.is_zero() && b1.is_zero() {
                continue;
            }
            // (x, y) = (b0, b1) · B⁻¹
            let x = (&b0 * &a[(k + 1, k + 1)] - &b1 * &a[(k + 1, k)]) / &det;
            let y = (&b1 * &a[(k, k)] - &b0 * &a[(k, k + 1)]) / &det;
            a.sym_add_multiple(r, k, &-x.clone());
            a.sym_add_multiple(r, k + 1, &-y.clone());
            t.add_row_multiple(r, k, &-x);
            t.add_row_multiple(r, k + 1, &-y);
        }
        pieces.push((k, 2, v));
        k += 2;
    }

    let mut order: Vec<usize> = (0..pieces.len()).collect();
    order.sort_by_key(|&i| (pieces[i].2, pieces[i].0));
    let mut row_order = Vec::with_capacity(n);
    let mut constituents: Vec<JordanConstituent> = Vec::new();
    let mut idx = 0;
    while idx < order.len() {
        let v = pieces[order[idx]].2;
        let mut members = Vec::new();
        while idx < order.len() && pieces[order[idx]].2 == v {
            members.push(pieces[order[idx]]);
            idx += 1;
        }
        let dim: usize = members.iter().map(|m| m.1).sum();
        let scale = BigRational::from_integer(BigInt::from(p).pow(v as u32)).recip();
        let mut form = RatMatrix::zeros(dim, dim);
        let mut off = 0;
        for &(start, size, _) in &members {
            for r in 0..size {
                for c in 0..size {
                    form[(off + r, off + c)] = &a[(start + r, start + c)] * &scale;
                }
                row_order.push(start + r);
            }
            off += size;
        }
        constituents.push(JordanConstituent {
            exponent: u32::try_from(v).expect("integral form has nonnegative valuations"),
            form,
            pieces: members.iter().map(|m| m.1).collect(),
        });
    }
    JordanDecomposition {
        prime: p,
        constituents,
        transform: t.select_rows(&row_order),
    }
}

impl JordanConstituent {
    fn block(&self, p: u64) -> JordanBlock {
        let dim = self.form.rows();
        let sign = unit_sign(&self.form.det(), p);
        if p != 2 {
            return JordanBlock {
                exponent: self.exponent,
                dim,
                sign,
                form_type: FormType::I,
                oddity: 0,
            };
        }
        let mut off = 0;
        let mut odd = false;
        let mut oddity = 0u64;
        for &size in &self.pieces {
            if size == 1 {
                odd = true;
                oddity += rat_mod(&self.form[(off, off)], 8);
            }
            off += size;
        }
        JordanBlock {
            exponent: self.exponent,
            dim,
            sign,
            form_type: if odd { FormType::I } else { FormType::II },
            oddity: (oddity % 8) as u8,
        }
    }
}

pub fn padic_symbol(lattice: &Lattice, p: u64) -> PadicSymbol {
    let jd = jordan_decompose(lattice, p);
    PadicSymbol {
        prime: p,
        blocks: jd.constituents.iter().map(|c| c.block(p)).collect(),
    }
}

fn odd_exponent_minus_count(sym: &PadicSymbol) -> u64 {
    sym.blocks
        .iter()
        .filter(|b| b.exponent % 2 == 1 && b.sign == -1)
        .count() as u64
}

/// `Σ n_q (q - 1) + 4·#{odd-exponent q with ε_q = -1}` mod 8, for odd `p`.
pub fn p_excess(sym: &PadicSymbol) -> Result<u8, GenusError> {
    if sym.prime == 2 {
        return Err(GenusError::NeedsOdd { what: "p-excess" });
    }
    let mut total: u64 = 0;
    for b in &sym.blocks {
        let q_minus_one = (pow_mod(sym.prime, b.exponent, 8) + 7) % 8;
        total += (b.dim as u64 % 8) * q_minus_one;
    }
    total += 4 * odd_exponent_minus_count(sym);
    Ok((total % 8) as u8)
}

/// `Σ t_q + 4·#{odd-exponent q with ε_q = -1}` mod 8, for `p = 2`.
pub fn oddity(sym: &PadicSymbol) -> Result<u8, GenusError> {
    if sym.prime != 2 {
        return Err(GenusError::NeedsTwo {
            what: "oddity",
            p: sym.prime,
        });
    }
    let t: u64 = sym.blocks.iter().map(|b| b.oddity as u64).sum();
    Ok(((t + 4 * odd_exponent_minus_count(sym)) % 8) as u8)
}

fn signature_mod8(sig: (usize, usize)) -> u8 {
    ((sig.0 as i64 - sig.1 as i64).rem_euclid(8)) as u8
}

pub fn oddity_formula_check(lattice: &Lattice) -> OddityCheck {
    let mut lhs = signature_mod8(lattice.signature()) as u64;
    for (p, _) in factor(lattice.det()) {
        if p != 2 {
            lhs += p_excess(&padic_symbol(lattice, p)).expect("odd prime") as u64;
        }
    }
    let rhs = oddity(&padic_symbol(lattice, 2)).expect("p = 2");
    OddityCheck {
        lhs: (lhs % 8) as u8,
        rhs,
    }
}

/// Local symbol of the lattice with all inner products negated.
pub fn negate_symbol(sym: &PadicSymbol) -> PadicSymbol {
    let p = sym.prime;
    let blocks = sym
        .blocks
        .iter()
        .map(|b| {
            let mut b = b.clone();
            if p == 2 {
                b.oddity = (8 - b.oddity) % 8;
            } else {
                let minus_one_pow = if b.dim % 2 == 0 { 1 } else { -1 };
                b.sign *= legendre(&BigInt::from(minus_one_pow), p).expect("odd prime");
            }
            b
        })
        .collect();
    PadicSymbol { prime: p, blocks }
}

impl JordanBlock {
    pub fn scale(&self, p: u64) -> BigInt {
        BigInt::from(p).pow(self.exponent)
    }

    /// Type-I block at an odd prime, which carries no oddity.
    pub fn odd(exponent: u32, dim: usize, sign: i8) -> Self {
        JordanBlock {
            exponent,
            dim,
            sign,
            form_type: FormType::I,
            oddity: 0,
        }
    }

    pub fn type_one(exponent: u32, dim: usize, sign: i8, oddity: u8) -> Self {
        JordanBlock {
            exponent,
            dim,
            sign,
            form_type: FormType::I,
            oddity: oddity % 8,
        }
    }

    pub fn type_two(exponent: u32, dim: usize, sign: i8) -> Self {
        JordanBlock {
            exponent,
            dim,
            sign,
            form_type: FormType::II,
            oddity: 0,
        }
    }
}

/// A maximal run of type-I 2-adic blocks with consecutive exponents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Compartment {
    pub blocks: std::ops::Range<usize>,
    pub dim: usize,
    pub sign: i8,
    pub oddity: u8,
}

impl PadicSymbol {
    pub fn dim(&self) -> usize {
        self.blocks.iter().map(|b| b.dim).sum()
    }

    /// `Σ exponent · n_q`, the valuation of the determinant.
    pub fn det_valuation(&self) -> u64 {
        self.blocks.iter().map(|b| b.exponent as u64 * b.dim as u64).sum()
    }

    pub fn sign_product(&self) -> i8 {
        self.blocks.iter().map(|b| b.sign).product()
    }

    pub fn compartments(&self) -> Vec<Compartment> {
        let mut out = Vec::new();
        let mut i = 0;
        while i < self.blocks.len() {
            if self.blocks[i].form_type != FormType::I {
                i += 1;
                continue;
            }
            let start = i;
            while i + 1 < self.blocks.len()
                && self.blocks[i + 1].form_type == FormType::I
                && self.blocks[i + 1].exponent == self.blocks[i].exponent + 1
            {
                i += 1;
            }
            let run = &self.blocks[start..=i];
            out.push(Compartment {
                blocks: start..i + 1,
                dim: run.iter().map(|b| b.dim).sum(),
                sign: run.iter().map(|b| b.sign).product(),
                oddity: (run.iter().map(|b| b.oddity as u32).sum::<u32>() % 8) as u8,
            });
            i += 1;
        }
        out
    }

    /// Moves each compartment's total oddity onto its first block.
    ///
    /// Per-block oddities inside a compartment are not invariants; this gives
    /// a representative that round-trips through the bracketed text form.
    pub fn compartment_normalized(&self) -> PadicSymbol {
        let mut out = self.clone();
        if self.prime == 2 {
            for c in self.compartments() {
                for (k, i) in c.blocks.clone().enumerate() {
                    out.blocks[i].oddity = if k == 0 { c.oddity } else { 0 };
                }
            }
        }
        out
    }

    /// Parses a single local symbol such as `1^+3 7^-1` or `[1^+2 2^+1]_3 4^-2`.
    pub fn parse(p: u64, text: &str) -> Result<Self, GenusError> {
        if !is_prime(p) {
            return Err(GenusError::Syntax(format!("{p} is not prime")));
        }
        let mut blocks = Vec::new();
        let chars: Vec<char> = text.chars().collect();
        let mut pos = 0;
        let skip_ws = |pos: &mut usize| {
            while *pos < chars.len() && chars[*pos].is_whitespace() {
                *pos += 1;
            }
        };
        loop {
            skip_ws(&mut pos);
            if pos >= chars.len() {
                break;
            }
            if chars[pos] == '[' {
                if p != 2 {
                    return Err(GenusError::Syntax("compartments only exist at p = 2".into()));
                }
                pos += 1;
                let first = blocks.len();
                loop {
                    skip_ws(&mut pos);
                    if pos < chars.len() && chars[pos] == ']' {
                        pos += 1;
                        break;
                    }
                    if pos >= chars.len() {
                        return Err(GenusError::Syntax("unterminated '['".into()));
                    }
                    let (mut b, sub) = parse_block(p, &chars, &mut pos)?;
                    if sub.is_some() {
                        return Err(GenusError::Syntax(
                            "blocks inside a compartment take no subscript".into(),
                        ));
                    }
                    b.form_type = FormType::I;
                    blocks.push(b);
                }
                if blocks.len() == first {
                    return Err(GenusError::Syntax("empty compartment".into()));
                }
                let t = parse_subscript(&chars, &mut pos)?
                    .ok_or_else(|| GenusError::Syntax("compartment needs an oddity subscript".into()))?;
                blocks[first].oddity = t;
                continue;
            }
            let (mut b, sub) = parse_block(p, &chars, &mut pos)?;
            if p == 2 {
                match sub {
                    Some(t) => {
                        b.form_type = FormType::I;
                        b.oddity = t;
                    }
                    None => b.form_type = FormType::II,
                }
            } else if sub.is_some() {
                return Err(GenusError::Syntax("oddity subscripts only exist at p = 2".into()));
            }
            blocks.push(b);
        }
        Ok(PadicSymbol { prime: p, blocks })
    }
}

fn parse_uint(chars: &[char], pos: &mut usize) -> Option<u64> {
    let start = *pos;
    while *pos < chars.len() && chars[*pos].is_ascii_digit() {
        *pos += 1;
    }
    chars[start..*pos].iter().collect::<String>().parse().ok()
}

fn parse_subscript(chars: &[char], pos: &mut usize) -> Result<Option<u8>, GenusError> {
    if *pos < chars.len() && chars[*pos] == '_' {
        *pos += 1;
        let neg = *pos < chars.len() && chars[*pos] == '-';
        if neg {
            *pos += 1;
        }
        let t = parse_uint(chars, pos).ok_or_else(|| GenusError::Syntax("missing oddity".into()))?;
        let t = (t % 8) as u8;
        return Ok(Some(if neg { (8 - t) % 8 } else { t }));
    }
    Ok(None)
}

fn parse_block(p: u64, chars: &[char], pos: &mut usize) -> Result<(JordanBlock, Option<u8>), GenusError> {
    let at = *pos;
    let q = parse_uint(chars, pos)
        .ok_or_else(|| GenusError::Syntax(format!("expected a scale at position {at}")))?;
    let mut exponent = 0;
    let mut rest = q;
    while rest > 1 && rest % p == 0 {
        rest /= p;
        exponent += 1;
    }
    if rest != 1 {
        return Err(GenusError::Syntax(format!("scale {q} is not a power of {p}")));
    }
    if *pos >= chars.len() || chars[*pos] != '^' {
        return Err(GenusError::Syntax(format!("expected '^' after scale {q}")));
    }
    *pos += 1;
    let sign = match chars.get(*pos) {
        Some('+') => 1,
        Some('-') => -1,
        _ => return Err(GenusError::Syntax(format!("expected '+' or '-' after {q}^"))),
    };
    *pos += 1;
    let dim = parse_uint(chars, pos).unwrap_or(1) as usize;
    if dim == 0 {
        return Err(GenusError::Syntax("block dimension must be positive".into()));
    }
    let sub = parse_subscript(chars, pos)?;
    Ok((JordanBlock::odd(exponent, dim, sign), sub))
}

fn render_block(p: u64, b: &JordanBlock) -> String {
    format!(
        "{}^{}{}",
        b.scale(p),
        if b.sign > 0 { '+' } else { '-' },
        b.dim
    )
}

impl fmt::Display for PadicSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.prime;
        let mut parts = Vec::new();
        if p != 2 {
            parts.extend(self.blocks.iter().map(|b| render_block(p, b)));
        } else {
            let comps = self.compartments();
            let mut i = 0;
            while i < self.blocks.len() {
                if let Some(c) = comps.iter().find(|c| c.blocks.start == i) {
                    let inner: Vec<String> = c.blocks.clone().map(|j| render_block(p, &self.blocks[j])).collect();
                    parts.push(format!("[{}]_{}", inner.join(" "), c.oddity));
                    i = c.blocks.end;
                } else {
                    parts.push(render_block(p, &self.blocks[i]));
                    i += 1;
                }
            }
        }
        f.write_str(&parts.join(" "))
    }
}

impl GenusSpec {
    /// Local data of an actual lattice.
    pub fn of_lattice(lattice: &Lattice) -> Self {
        let symbols = relevant_primes(lattice.det())
            .into_iter()
            .map(|p| (p, padic_symbol(lattice, p)))
            .collect();
        GenusSpec {
            signature: lattice.signature(),
            det: lattice.det().clone(),
            symbols,
        }
    }

    pub fn dim(&self) -> usize {
        self.signature.0 + self.signature.1
    }

    /// Structural consistency, independent of whether the genus exists.
    pub fn validate(&self) -> Result<(), GenusError> {
        let bad = |m: String| Err(GenusError::Malformed(m));
        if self.det.is_zero() {
            return bad("determinant is zero".into());
        }
        let expected_sign = if self.signature.1 % 2 == 0 { 1 } else { -1 };
        if (self.det.is_positive() as i8 * 2 - 1) != expected_sign {
            return bad(format!(
                "determinant {} has the wrong sign for signature {:?}",
                self.det, self.signature
            ));
        }
        let needed = relevant_primes(&self.det);
        for p in &needed {
            if !self.symbols.contains_key(p) {
                return bad(format!("missing {p}-adic symbol"));
            }
        }
        for (&p, sym) in &self.symbols {
            if sym.prime != p {
                return bad(format!("symbol stored under {p} is for prime {}", sym.prime));
            }
            if !is_prime(p) {
                return bad(format!("{p} is not prime"));
            }
            if sym.dim() != self.dim() {
                return bad(format!(
                    "{p}-adic symbol has dimension {} but the signature has {}",
                    sym.dim(),
                    self.dim()
                ));
            }
            if sym.blocks.windows(2).any(|w| w[0].exponent >= w[1].exponent) {
                return bad(format!("{p}-adic blocks are not strictly ascending"));
            }
            if sym.blocks.iter().any(|b| b.dim == 0 || (b.sign != 1 && b.sign != -1)) {
                return bad(format!("{p}-adic symbol has an invalid block"));
            }
            if p != 2 && sym.blocks.iter().any(|b| b.oddity != 0) {
                return bad(format!("{p}-adic symbol carries an oddity"));
            }
            let (alpha, _) = split_prime(&self.det, p);
            if sym.det_valuation() != alpha as u64 {
                return bad(format!(
                    "{p}-adic scales give valuation {} but det has {alpha}",
                    sym.det_valuation()
                ));
            }
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self, GenusError> {
        text.parse()
    }
}

/// Decides whether an integral lattice with the given local data exists.
///
/// Structural problems (dimension or determinant mismatch) are reported as
/// `Err`; a well-formed spec always yields a verdict listing every violated
/// condition.
pub fn genus_exists(spec: &GenusSpec) -> Result<GenusVerdict, GenusError> {
    spec.validate()?;
    let mut violations = Vec::new();

    for (&p, sym) in &spec.symbols {
        let (_, a) = split_prime(&spec.det, p);
        let expected = if p == 2 {
            kronecker2(&a).expect("odd part")
        } else {
            legendre(&a, p).expect("odd prime")
        };
        if sym.sign_product() != expected {
            violations.push(Violation {
                condition: Condition::Determinant,
                detail: format!("p = {p}: product of signs {} but ({a}/{p}) = {expected}", sym.sign_product()),
            });
        }
    }

    let mut lhs = signature_mod8(spec.signature) as u64;
    for (&p, sym) in &spec.symbols {
        if p != 2 {
            lhs += p_excess(sym).expect("odd prime") as u64;
        }
    }
    let lhs = (lhs % 8) as u8;
    let two = &spec.symbols[&2];
    let rhs = oddity(two).expect("p = 2");
    if lhs != rhs {
        violations.push(Violation {
            condition: Condition::OddityFormula,
            detail: format!("signature + p-excesses = {lhs} but oddity = {rhs} (mod 8)"),
        });
    }

    for b in &two.blocks {
        if b.form_type == FormType::II && (b.oddity != 0 || b.dim % 2 != 0) {
            violations.push(Violation {
                condition: Condition::TypeII,
                detail: format!(
                    "type II block at scale {} has dimension {} and oddity {}",
                    b.scale(2),
                    b.dim,
                    b.oddity
                ),
            });
        }
    }
    for c in two.compartments() {
        let at = two.blocks[c.blocks.start].scale(2);
        let t = c.oddity;
        match c.dim {
            1 => {
                let ok = if c.sign == 1 { matches!(t, 1 | 7) } else { matches!(t, 3 | 5) };
                if !ok {
                    violations.push(Violation {
                        condition: Condition::TableDim1,
                        detail: format!("compartment at {at}: dimension 1, sign {}, oddity {t}", c.sign),
                    });
                }
            }
            2 => {
                let ok = if c.sign == 1 { matches!(t, 0 | 2 | 6) } else { matches!(t, 4 | 2 | 6) };
                if !ok {
                    violations.push(Violation {
                        condition: Condition::TableDim2,
                        detail: format!("compartment at {at}: dimension 2, sign {}, oddity {t}", c.sign),
                    });
                }
            }
            _ => {}
        }
        if (t as usize) % 2 != c.dim % 2 {
            violations.push(Violation {
                condition: Condition::Parity,
                detail: format!("compartment at {at}: oddity {t} vs dimension {}", c.dim),
            });
        }
    }
    Ok(GenusVerdict { violations })
}

impl fmt::Display for GenusSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "sig {} {}; det {}", self.signature.0, self.signature.1, self.det)?;
        for (p, sym) in &self.symbols {
            write!(f, "; {p}: {sym}")?;
        }
        Ok(())
    }
}

/// `sig R S; det D; p: <symbol>; ...`
impl FromStr for GenusSpec {
    type Err = GenusError;

    fn from_str(text: &str) -> Result<Self, GenusError> {
        let mut signature = None;
        let mut det = None;
        let mut symbols = BTreeMap::new();
        for part in text.split(|c| c == ';' || c == '\n').map(str::trim).filter(|s| !s.is_empty()) {
            if let Some(rest) = part.strip_prefix("sig") {
                let nums: Vec<usize> = rest
                    .split(|c: char| !c.is_ascii_digit())
                    .filter(|s| !s.is_empty())
                    .map(|s| s.parse().map_err(|_| GenusError::Syntax(format!("bad signature {rest:?}"))))
                    .collect::<Result<_, _>>()?;
                if nums.len() != 2 {
                    return Err(GenusError::Syntax(format!("signature needs two numbers: {part:?}")));
                }
                signature = Some((nums[0], nums[1]));
            } else if let Some(rest) = part.strip_prefix("det") {
                let rest = rest.trim().trim_start_matches('=').trim();
                det = Some(
                    BigInt::from_str(rest).map_err(|_| GenusError::Syntax(format!("bad determinant {rest:?}")))?,
                );
            } else if let Some((p, sym)) = part.split_once(':') {
                let p: u64 = p
                    .trim()
                    .trim_start_matches('p')
                    .trim_start_matches('=')
                    .parse()
                    .map_err(|_| GenusError::Syntax(format!("bad prime in {part:?}")))?;
                if symbols.insert(p, PadicSymbol::parse(p, sym)?).is_some() {
                    return Err(GenusError::Syntax(format!("duplicate symbol for {p}")));
                }
            } else {
                return Err(GenusError::Syntax(format!("unrecognized clause {part:?}")));
            }
        }
        Ok(GenusSpec {
            signature: signature.ok_or_else(|| GenusError::Syntax("missing 'sig'".into()))?,
            det: det.ok_or_else(|| GenusError::Syntax("missing 'det'".into()))?,
            symbols,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::IntMatrix;

    fn b(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn worked_l() -> Lattice {
        Lattice::diagonal(&[-7, 1, 1, 1])
    }

    #[test]
    fn legendre_and_kronecker() {
        assert_eq!(legendre(&b(1), 7), Ok(1));
        assert_eq!(legendre(&b(3), 7), Ok(-1));
        assert_eq!(legendre(&b(7), 7), Ok(0));
        assert_eq!(legendre(&b(-1), 7), Ok(-1));
        assert_eq!(legendre(&b(-1), 5), Ok(1));
        assert!(legendre(&b(1), 2).is_err());
        assert!(legendre(&b(1), 9).is_err());
        assert_eq!(kronecker2(&b(7)), Ok(1));
        assert_eq!(kronecker2(&b(3)), Ok(-1));
        assert_eq!(kronecker2(&b(1)), Ok(1));
        assert_eq!(kronecker2(&b(-7)), Ok(1));
        assert!(kronecker2(&b(4)).is_err());
    }

    #[test]
    fn jordan_examples() {
        let jd = jordan_decompose(&worked_l(), 7);
        assert_eq!(jd.constituents.len(), 2);
        assert_eq!(jd.constituents[0].exponent, 0);
        assert_eq!(jd.constituents[0].form, IntMatrix::diag(&[1, 1, 1]).to_rat());
        assert_eq!(jd.constituents[1].exponent, 1);
        assert_eq!(jd.constituents[1].form, IntMatrix::diag(&[-1]).to_rat());

        let jd = jordan_decompose(&worked_l(), 3);
        assert_eq!(jd.constituents.len(), 1);
        assert_eq!(jd.constituents[0].form.rows(), 4);

        let a2 = Lattice::new(IntMatrix::from_i64(&[&[2, 1], &[1, 2]])).unwrap();
        let jd = jordan_decompose(&a2, 3);
        let dims: Vec<(u32, usize)> = jd.constituents.iter().map(|c| (c.exponent, c.form.rows())).collect();
        assert_eq!(dims, vec![(0, 1), (1, 1)]);

        // at 2, A2 is a single type II plane with sign -1
        let s = padic_symbol(&a2, 2);
        assert_eq!(s.blocks, vec![JordanBlock::type_two(0, 2, -1)]);
    }

    #[test]
    fn jordan_transform_reassembles_gram() {
        let l = Lattice::new(IntMatrix::from_i64(&[&[4, 2, 0], &[2, 6, 2], &[0, 2, 8]])).unwrap();
        for p in [2, 3, 5, 7] {
            let jd = jordan_decompose(&l, p);
            let mut blocks = RatMatrix::zeros(3, 3);
            let mut off = 0;
            for c in &jd.constituents {
                let s = BigRational::from_integer(BigInt::from(p).pow(c.exponent));
                for i in 0..c.form.rows() {
                    for j in 0..c.form.rows() {
                        blocks[(off + i, off + j)] = &c.form[(i, j)] * &s;
                    }
                }
                off += c.form.rows();
            }
            let t = &jd.transform;
            assert_eq!(&(t * &l.gram().to_rat()) * &t.transpose(), blocks, "p = {p}");
            assert_eq!(rat_valuation(&t.det(), p), 0);
        }
    }

    #[test]
    fn symbols_of_worked_lattices() {
        let s7 = padic_symbol(&worked_l(), 7);
        assert_eq!(s7.blocks, vec![JordanBlock::odd(0, 3, 1), JordanBlock::odd(1, 1, -1)]);
        assert_eq!(s7.to_string(), "1^+3 7^-1");
        let s2 = padic_symbol(&worked_l(), 2);
        assert_eq!(s2.blocks, vec![JordanBlock::type_one(0, 4, 1, 4)]);
        assert_eq!(s2.to_string(), "[1^+4]_4");
        let k2 = padic_symbol(&Lattice::diagonal(&[7, 1, 1]), 2);
        assert_eq!(k2.blocks, vec![JordanBlock::type_one(0, 3, 1, 1)]);
    }

    #[test]
    fn excess_and_oddity_values() {
        assert_eq!(p_excess(&padic_symbol(&worked_l(), 7)), Ok(2));
        assert_eq!(p_excess(&padic_symbol(&Lattice::diagonal(&[7, 1, 1]), 7)), Ok(6));
        assert_eq!(p_excess(&padic_symbol(&worked_l(), 3)), Ok(0));
        assert!(p_excess(&padic_symbol(&worked_l(), 2)).is_err());
        assert_eq!(oddity(&padic_symbol(&worked_l(), 2)), Ok(4));
        assert_eq!(oddity(&padic_symbol(&Lattice::diagonal(&[7, 1, 1]), 2)), Ok(1));
        let h = Lattice::new(IntMatrix::from_i64(&[&[0, 1], &[1, 0]])).unwrap();
        assert_eq!(oddity(&padic_symbol(&h, 2)), Ok(0));
        assert!(oddity(&padic_symbol(&worked_l(), 7)).is_err());
    }

    #[test]
    fn oddity_formula_examples() {
        let c = oddity_formula_check(&worked_l());
        assert_eq!((c.lhs, c.rhs), (4, 4));
        for n in 1..10 {
            assert!(oddity_formula_check(&Lattice::standard_lorentzian(n)).holds());
        }
        let c = oddity_formula_check(&Lattice::diagonal(&[7, 1, 1]));
        assert_eq!((c.lhs, c.rhs), (1, 1));
    }

    #[test]
    fn negation_rules() {
        let s = PadicSymbol { prime: 7, blocks: vec![JordanBlock::odd(1, 1, -1)] };
        assert_eq!(negate_symbol(&s).blocks[0].sign, 1);
        let s2 = padic_symbol(&worked_l(), 2);
        assert_eq!(negate_symbol(&s2).blocks[0].oddity, 4);
        let s5 = PadicSymbol { prime: 5, blocks: vec![JordanBlock::odd(0, 2, -1), JordanBlock::odd(1, 3, 1)] };
        assert_eq!(negate_symbol(&s5), s5);
        let l = worked_l();
        for p in [2, 7] {
            assert_eq!(negate_symbol(&padic_symbol(&l, p)), padic_symbol(&l.negate(), p));
        }
    }

    fn k_spec() -> GenusSpec {
        GenusSpec::parse("sig 3 0; det 7; 7: 1^+2 7^+1; 2: [1^+3]_1").unwrap()
    }

    #[test]
    fn existence_examples() {
        assert!(genus_exists(&GenusSpec::of_lattice(&worked_l())).unwrap().exists());
        assert!(genus_exists(&k_spec()).unwrap().exists());
        let mut bad = k_spec();
        bad.symbols.get_mut(&2).unwrap().blocks[0].oddity = 3;
        let v = genus_exists(&bad).unwrap();
        assert!(!v.exists());
        assert!(v.violates(Condition::OddityFormula));
    }

    #[test]
    fn existence_tables() {
        // 1-dim form <3>: sign -1, oddity 3
        assert!(genus_exists(&GenusSpec::parse("sig 1 0; det 3; 3: 3^+1; 2: [1^-1]_3").unwrap())
            .unwrap()
            .exists());
        let v = genus_exists(&GenusSpec::parse("sig 1 0; det 3; 3: 3^+1; 2: [1^-1]_7").unwrap()).unwrap();
        assert!(v.violates(Condition::TableDim1));
        // A2: type II plane
        assert!(genus_exists(&GenusSpec::parse("sig 2 0; det 3; 3: 1^-1 3^-1; 2: 1^-2").unwrap())
            .unwrap()
            .exists());
        let v = genus_exists(&GenusSpec::parse("sig 1 0; det 1; 2: 1^+1").unwrap()).unwrap();
        assert!(v.violates(Condition::TypeII));
        // type I plane <1> + <1>: t = 2 ok, t = 4 with sign + is not
        let v = genus_exists(&GenusSpec::parse("sig 2 0; det 1; 2: [1^+2]_4").unwrap()).unwrap();
        assert!(v.violates(Condition::TableDim2));
    }

    #[test]
    fn malformed_specs() {
        let e = genus_exists(&GenusSpec::parse("sig 3 0; det 7; 7: 1^+2 7^+1; 2: [1^+2]_1").unwrap());
        assert!(matches!(e, Err(GenusError::Malformed(_))));
        let e = genus_exists(&GenusSpec::parse("sig 3 0; det 7; 2: [1^+3]_1").unwrap());
        assert!(matches!(e, Err(GenusError::Malformed(_))));
        let e = genus_exists(&GenusSpec::parse("sig 2 1; det 7; 7: 1^+2 7^+1; 2: [1^+3]_1").unwrap());
        assert!(matches!(e, Err(GenusError::Malformed(_))));
        assert!(matches!(GenusSpec::parse("sig 3 0; 7: 1^+2"), Err(GenusError::Syntax(_))));
        assert!(matches!(PadicSymbol::parse(7, "6^+1"), Err(GenusError::Syntax(_))));
    }

    #[test]
    fn text_roundtrip() {
        let spec = GenusSpec::parse("sig 3 0; det 2; 2: [1^+2 2^+1]_3").unwrap();
        assert_eq!(spec.to_string(), "sig 3 0; det 2; 2: [1^+2 2^+1]_3");
        assert_eq!(GenusSpec::parse(&spec.to_string()).unwrap(), spec);
        let l = Lattice::new(IntMatrix::from_i64(&[&[2, 1, 0], &[1, 2, 0], &[0, 0, 12]])).unwrap();
        let s = GenusSpec::of_lattice(&l);
        let back = GenusSpec::parse(&s.to_string()).unwrap();
        for (p, sym) in &s.symbols {
            assert_eq!(back.symbols[p], sym.compartment_normalized());
        }
    }
}

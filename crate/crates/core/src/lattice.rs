//! Integral lattices given by Gram matrices, and their discriminant groups.

use std::cmp::Ordering;
use std::path::Path;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{factor, frac, one_over};
use crate::matrix::{dot, vec_mat, IntMatrix, MatrixError, RatMatrix};
use crate::serial;

#[derive(Debug, Error)]
pub enum LatticeError {
    #[error("Gram matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("Gram matrix is not symmetric")]
    NotSymmetric,
    #[error("Gram matrix is singular (degenerate form)")]
    Singular,
    #[error("sublattice basis must be a nonsingular {expected}x{expected} matrix")]
    BadSublattice { expected: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// A nondegenerate integral lattice, stored as its Gram matrix with the
/// determinant and signature cached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    gram: IntMatrix,
    det: BigInt,
    signature: (usize, usize),
}

/// On-disk lattice description: `{"gram": [[...]], "name": "..."}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LatticeFile {
    #[serde(with = "serial::int_matrix")]
    pub gram: IntMatrix,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

/// `Δ(L) = L*/L` as a sum of cyclic groups `Z/d_1 ⊕ ... ⊕ Z/d_k`, `d_1 | d_2 | ...`.
///
/// Generator `i` is represented by `lifts.row(i)`, a vector of `L*` in
/// lattice coordinates with every coordinate in `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscriminantGroup {
    factors: Vec<BigInt>,
    lifts: RatMatrix,
    // column i maps a dual vector to its coefficient on generator i (mod d_i)
    dual_coords: IntMatrix,
}

/// The `Q/Z`-valued form on `Δ(L)` evaluated on pairs of generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscForm {
    pairings: Vec<Vec<BigRational>>,
}

impl From<MatrixError> for LatticeError {
    fn from(e: MatrixError) -> Self {
        match e {
            MatrixError::NotSquare { rows, cols } => LatticeError::NotSquare { rows, cols },
            MatrixError::NotSymmetric => LatticeError::NotSymmetric,
            MatrixError::Singular | MatrixError::Degenerate => LatticeError::Singular,
            other => LatticeError::Parse(other.to_string()),
        }
    }
}

impl Lattice {
    /// Validates a Gram matrix: square, symmetric, nonsingular.
    pub fn new(gram: IntMatrix) -> Result<Self, LatticeError> {
        if !gram.is_square() {
            return Err(LatticeError::NotSquare {
                rows: gram.rows(),
                cols: gram.cols(),
            });
        }
        if !gram.is_symmetric() {
            return Err(LatticeError::NotSymmetric);
        }
        let det = gram.det();
        if det.is_zero() {
            return Err(LatticeError::Singular);
        }
        let signature = gram.to_rat().signature()?;
        Ok(Lattice {
            gram,
            det,
            signature,
        })
    }

    pub fn diagonal(entries: &[i64]) -> Self {
        Self::new(IntMatrix::diag(entries)).expect("nonzero diagonal")
    }

    /// `diag(-1, 1, ..., 1)` of dimension `n + 1`: the odd unimodular
    /// Lorentzian lattice of signature `(n, 1)`.
    pub fn standard_lorentzian(n: usize) -> Self {
        assert!(n >= 1, "standard Lorentzian lattice needs n >= 1");
        let mut d = vec![1i64; n + 1];
        d[0] = -1;
        Self::diagonal(&d)
    }

    /// The zero-dimensional lattice.
    pub fn empty() -> Self {
        Self::new(IntMatrix::zeros(0, 0)).expect("empty lattice is valid")
    }

    pub fn from_json_str(s: &str) -> Result<Self, LatticeError> {
        let file: LatticeFile =
            serde_json::from_str(s).map_err(|e| LatticeError::Parse(e.to_string()))?;
        Self::new(file.gram)
    }

    pub fn load(path: &Path) -> Result<Self, LatticeError> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_file(&self, name: Option<String>) -> LatticeFile {
        LatticeFile {
            gram: self.gram.clone(),
            name,
        }
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn det(&self) -> &BigInt {
        &self.det
    }

    /// `(positive, negative)` inertia.
    pub fn signature(&self) -> (usize, usize) {
        self.signature
    }

    pub fn is_unimodular(&self) -> bool {
        self.det.abs().is_one()
    }

    /// Some basis vector has odd norm (equivalently, the lattice is not even).
    pub fn is_odd(&self) -> bool {
        (0..self.dim()).any(|i| self.gram[(i, i)].is_odd())
    }

    /// `x · A · yᵀ` for rational coordinate vectors.
    pub fn inner(&self, x: &[BigRational], y: &[BigRational]) -> BigRational {
        dot(&vec_mat(x, &self.gram.to_rat()), y)
    }

    pub fn direct_sum(&self, other: &Lattice) -> Lattice {
        Lattice {
            gram: IntMatrix::block_diag(&self.gram, &other.gram),
            det: &self.det * &other.det,
            signature: (
                self.signature.0 + other.signature.0,
                self.signature.1 + other.signature.1,
            ),
        }
    }

    /// The same module with every inner product negated.
    pub fn negate(&self) -> Lattice {
        let det = if self.dim() % 2 == 0 {
            self.det.clone()
        } else {
            -&self.det
        };
        Lattice {
            gram: self.gram.neg(),
            det,
            signature: (self.signature.1, self.signature.0),
        }
    }

    /// Sublattice spanned by the rows of `rows` (lattice coordinates).
    /// Returns the sublattice and its index.
    pub fn sublattice(&self, rows: &IntMatrix) -> Result<(Lattice, BigInt), LatticeError> {
        let n = self.dim();
        if rows.rows() != n || rows.cols() != n {
            return Err(LatticeError::BadSublattice { expected: n });
        }
        let index = rows.det().abs();
        if index.is_zero() {
            return Err(LatticeError::BadSublattice { expected: n });
        }
        let gram = &(rows * &self.gram) * &rows.transpose();
        let sub = Lattice::new(gram)?;
        assert_eq!(sub.det, &index * &index * &self.det, "index law violated");
        Ok((sub, index))
    }

    pub fn discriminant_group(&self) -> DiscriminantGroup {
        let n = self.dim();
        let snf = self.gram.snf();
        let u_inv = snf
            .u
            .to_rat()
            .inverse()
            .expect("SNF transform is unimodular")
            .to_int()
            .expect("inverse of a unimodular matrix is integral");
        let mut factors = Vec::new();
        let mut lift_rows = Vec::new();
        let mut coord_cols: Vec<Vec<BigInt>> = Vec::new();
        for (i, d) in snf.diagonal().into_iter().enumerate() {
            if d.is_one() {
                continue;
            }
            let scale = one_over(&d);
            let plus: Vec<BigRational> = snf
                .u
                .row(i)
                .iter()
                .map(|x| frac(&(BigRational::from_integer(x.clone()) * &scale)))
                .collect();
            let minus: Vec<BigRational> = plus.iter().map(|x| frac(&-x)).collect();
            // canonical representative: the lexicographically smaller of ±g
            let (lift, sign) = if cmp_vec(&minus, &plus) == Ordering::Less {
                (minus, -BigInt::one())
            } else {
                (plus, BigInt::one())
            };
            coord_cols.push((0..n).map(|r| &u_inv[(r, i)] * &d * &sign).collect());
            lift_rows.push(lift);
            factors.push(d);
        }
        let k = factors.len();
        let lifts = if k == 0 {
            RatMatrix::zeros(0, n)
        } else {
            RatMatrix::from_rows(&lift_rows).expect("lift rows are uniform")
        };
        let mut dual_coords = IntMatrix::zeros(n, k);
        for (c, col) in coord_cols.iter().enumerate() {
            for (r, x) in col.iter().enumerate() {
                dual_coords[(r, c)] = x.clone();
            }
        }
        DiscriminantGroup {
            factors,
            lifts,
            dual_coords,
        }
    }

    /// Pairings of the generator lifts, reduced into `[0, 1)`.
    pub fn discriminant_form(&self, group: &DiscriminantGroup) -> DiscForm {
        let a = self.gram.to_rat();
        let k = group.rank();
        let images: Vec<Vec<BigRational>> = (0..k).map(|i| vec_mat(group.lift(i), &a)).collect();
        let pairings = (0..k)
            .map(|i| (0..k).map(|j| frac(&dot(&images[i], group.lift(j)))).collect())
            .collect();
        DiscForm { pairings }
    }

    /// Strongly square-free test; also returns the rank `δ` of `Δ(L)`.
    pub fn is_ssf(&self) -> (bool, usize) {
        let group = self.discriminant_group();
        let delta = group.rank();
        let square_free = group
            .factors()
            .iter()
            .all(|d| factor(d).iter().all(|&(_, e)| e == 1));
        (square_free && 2 * delta <= self.dim(), delta)
    }

    /// Whether `g` is an automorphism, `g · A · gᵀ = A`.
    pub fn preserves(&self, g: &IntMatrix) -> bool {
        g.rows() == self.dim()
            && g.cols() == self.dim()
            && &(g * &self.gram) * &g.transpose() == self.gram
    }
}

fn cmp_vec(a: &[BigRational], b: &[BigRational]) -> Ordering {
    a.iter().cmp(b.iter())
}

impl DiscriminantGroup {
    pub fn factors(&self) -> &[BigInt] {
        &self.factors
    }

    /// Number of nontrivial invariant factors (`δ`).
    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn order(&self) -> BigInt {
        self.factors.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn lifts(&self) -> &RatMatrix {
        &self.lifts
    }

    pub fn lift(&self, i: usize) -> &[BigRational] {
        self.lifts.row(i)
    }

    pub fn dim(&self) -> usize {
        self.lifts.cols()
    }

    /// Coefficients of a dual vector on the generators, each reduced mod `d_i`.
    ///
    /// Panics if `x` is not in `L*`.
    pub fn coefficients(&self, x: &[BigRational]) -> Vec<BigInt> {
        let c = vec_mat(x, &self.dual_coords.to_rat());
        c.iter()
            .zip(&self.factors)
            .map(|(v, d)| {
                assert!(v.is_integer(), "vector is not in the dual lattice");
                v.to_integer().mod_floor(d)
            })
            .collect()
    }

    /// `Σ c_i g_i` as a vector of `L*` (not reduced mod `L`).
    pub fn element(&self, coeffs: &[BigInt]) -> Vec<BigRational> {
        let c: Vec<BigRational> = coeffs
            .iter()
            .map(|x| BigRational::from_integer(x.clone()))
            .collect();
        vec_mat(&c, &self.lifts)
    }

    /// Order of `Σ c_i g_i`.
    pub fn element_order(&self, coeffs: &[BigInt]) -> BigInt {
        coeffs
            .iter()
            .zip(&self.factors)
            .fold(BigInt::one(), |acc, (c, d)| acc.lcm(&(d / c.gcd(d))))
    }
}

impl DiscForm {
    pub fn len(&self) -> usize {
        self.pairings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairings.is_empty()
    }

    pub fn norm(&self, i: usize) -> &BigRational {
        &self.pairings[i][i]
    }

    pub fn pairing(&self, i: usize, j: usize) -> &BigRational {
        &self.pairings[i][j]
    }

    pub fn pairings(&self) -> &[Vec<BigRational>] {
        &self.pairings
    }

    /// `q(Σ c_i g_i)` in `Q/Z`.
    pub fn norm_of(&self, coeffs: &[BigInt]) -> BigRational {
        self.pairing_of(coeffs, coeffs)
    }

    /// `b(Σ a_i g_i, Σ c_j g_j)` in `Q/Z`.
    pub fn pairing_of(&self, a: &[BigInt], c: &[BigInt]) -> BigRational {
        let mut acc = BigRational::zero();
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, cj) in c.iter().enumerate() {
                if cj.is_zero() {
                    continue;
                }
                acc += &self.pairings[i][j] * BigRational::from_integer(ai * cj);
            }
        }
        frac(&acc)
    }
}

/// Negation in `Q/Z` on representatives in `[0, 1)`.
pub fn neg_mod1(x: &BigRational) -> BigRational {
    frac(&-x)
}

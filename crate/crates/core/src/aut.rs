//! Automorphisms of lattices, congruence subgroups, and extension of
//! automorphisms across a glued embedding.
//!
//! Matrices act on row vectors: `v ↦ v·g`, so `g` is an automorphism when
//! `g · A · gᵀ = A`.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::gluing::Embedding;
use crate::lattice::Lattice;
use crate::matrix::{vec_mat, IntMatrix, RatMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AutError {
    #[error("matrix is {rows}x{cols} but the lattice has dimension {dim}")]
    Dimension { rows: usize, cols: usize, dim: usize },
    #[error("reflection vector has norm zero")]
    ZeroNorm,
    #[error("reflection in a vector of norm {norm} is not integral")]
    NonIntegral { norm: BigInt },
    #[error("matrix does not preserve the Gram matrix")]
    NotAutomorphism,
    #[error("automorphism is not congruent to the identity mod 2")]
    NotLevelTwo,
    #[error("no automorphism of K induces the required action on the discriminant group")]
    NoExtension,
}

fn check_dim(l: &Lattice, g: &IntMatrix) -> Result<(), AutError> {
    if g.rows() != l.dim() || g.cols() != l.dim() {
        return Err(AutError::Dimension {
            rows: g.rows(),
            cols: g.cols(),
            dim: l.dim(),
        });
    }
    Ok(())
}

pub fn is_automorphism(l: &Lattice, g: &IntMatrix) -> Result<bool, AutError> {
    check_dim(l, g)?;
    Ok(l.preserves(g))
}

/// `g ≡ I (mod m)` entrywise.
pub fn congruence_level(g: &IntMatrix, m: u64) -> bool {
    g.is_identity_mod(&BigInt::from(m))
}

/// `x ↦ x - 2(x,v)/(v,v) · v`, as the matrix whose row `i` is the image of `e_i`.
pub fn reflection(l: &Lattice, v: &[BigInt]) -> Result<IntMatrix, AutError> {
    let n = l.dim();
    if v.len() != n {
        return Err(AutError::Dimension {
            rows: 1,
            cols: v.len(),
            dim: n,
        });
    }
    let a = l.gram();
    let av: Vec<BigInt> = (0..n).map(|i| (0..n).map(|j| &a[(i, j)] * &v[j]).sum()).collect();
    let norm: BigInt = v.iter().zip(&av).map(|(x, y)| x * y).sum();
    if norm.is_zero() {
        return Err(AutError::ZeroNorm);
    }
    let mut r = IntMatrix::identity(n);
    for i in 0..n {
        let twice: BigInt = &av[i] * 2;
        if !twice.is_multiple_of(&norm) {
            return Err(AutError::NonIntegral { norm });
        }
        let c = twice / &norm;
        for j in 0..n {
            r[(i, j)] -= &c * &v[j];
        }
    }
    Ok(r)
}

trait Scalar: Clone + PartialEq + Num + From<i64> {}
impl Scalar for i128 {}
impl Scalar for BigInt {}

/// Lattice vectors with entries in `[-bound, bound]` and norm in a given set,
/// in lexicographic order, each with its image under the Gram matrix.
struct ShortVectors<T> {
    vectors: Vec<Vec<i64>>,
    norms: Vec<T>,
    images: Vec<Vec<T>>,
}

impl<T: Scalar> ShortVectors<T> {
    fn collect(a: &[Vec<T>], bound: i64, wanted: &[T]) -> Self {
        let n = a.len();
        let mut out = ShortVectors {
            vectors: Vec::new(),
            norms: Vec::new(),
            images: Vec::new(),
        };
        if n == 0 || bound < 0 {
            return out;
        }
        let mut v = vec![-bound; n];
        loop {
            let image: Vec<T> = (0..n)
                .map(|j| (0..n).fold(T::zero(), |acc, i| acc + T::from(v[i]) * a[i][j].clone()))
                .collect();
            let norm = (0..n).fold(T::zero(), |acc, j| acc + T::from(v[j]) * image[j].clone());
            if wanted.contains(&norm) {
                out.vectors.push(v.clone());
                out.norms.push(norm);
                out.images.push(image);
            }
            let mut pos = n;
            loop {
                if pos == 0 {
                    return out;
                }
                pos -= 1;
                if v[pos] < bound {
                    v[pos] += 1;
                    break;
                }
                v[pos] = -bound;
            }
        }
    }
}

fn dot_i<T: Scalar>(image: &[T], v: &[i64]) -> T {
    image
        .iter()
        .zip(v)
        .fold(T::zero(), |acc, (x, &y)| acc + x.clone() * T::from(y))
}

/// Backtracking over images of the basis vectors: row `i` must have norm
/// `A_ii` and pair with earlier rows as `A_ij`.
fn backtrack<T: Scalar>(a: &[Vec<T>], sv: &ShortVectors<T>, limit: usize) -> Vec<Vec<Vec<i64>>> {
    let n = a.len();
    let by_row: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..sv.vectors.len()).filter(|&k| sv.norms[k] == a[i][i]).collect())
        .collect();
    let mut chosen: Vec<usize> = Vec::with_capacity(n);
    let mut out = Vec::new();

    fn rec<T: Scalar>(
        a: &[Vec<T>],
        sv: &ShortVectors<T>,
        by_row: &[Vec<usize>],
        chosen: &mut Vec<usize>,
        out: &mut Vec<Vec<Vec<i64>>>,
        limit: usize,
    ) {
        let i = chosen.len();
        if i == a.len() {
            out.push(chosen.iter().map(|&k| sv.vectors[k].clone()).collect());
            return;
        }
        for &k in &by_row[i] {
            if out.len() >= limit {
                return;
            }
            let fits = chosen
                .iter()
                .enumerate()
                .all(|(j, &c)| dot_i(&sv.images[k], &sv.vectors[c]) == a[i][j]);
            if fits {
                chosen.push(k);
                rec(a, sv, by_row, chosen, out, limit);
                chosen.pop();
            }
        }
    }
    if limit > 0 {
        rec(a, sv, &by_row, &mut chosen, &mut out, limit);
    }
    out
}

fn short_vectors<T: Scalar>(a: &[Vec<T>], bound: i64, norms: &[i64], with_diagonal: bool) -> ShortVectors<T> {
    let mut wanted: Vec<T> = norms.iter().map(|&x| T::from(x)).collect();
    if with_diagonal {
        for (i, row) in a.iter().enumerate() {
            if !wanted.contains(&row[i]) {
                wanted.push(row[i].clone());
            }
        }
    }
    ShortVectors::collect(a, bound, &wanted)
}

/// Vectors with entries in `[-bound, bound]` of each given norm, in that
/// order and lexicographically within a norm; of `±v` only the one with a
/// positive leading entry is kept.
fn roots<T: Scalar>(a: &[Vec<T>], bound: i64, norms: &[i64]) -> Vec<Vec<i64>> {
    let sv = short_vectors(a, bound, norms, false);
    let mut out = Vec::new();
    for &target in norms {
        let t = T::from(target);
        for (v, norm) in sv.vectors.iter().zip(&sv.norms) {
            if *norm == t && v.iter().find(|x| **x != 0).is_some_and(|x| *x > 0) {
                out.push(v.clone());
            }
        }
    }
    out
}

/// Runs `f` on the Gram matrix as `i128` when no intermediate can overflow,
/// otherwise on `BigInt`.
fn with_scalar<R>(l: &Lattice, bound: i64, f: impl FnOnce(Gram) -> R) -> R {
    let n = l.dim();
    let max_entry = l.gram().entries().iter().map(|x| x.abs()).max().unwrap_or_default();
    // every intermediate is at most n² · bound² · max|A|
    let worst = BigInt::from(n * n) * BigInt::from(bound).pow(2) * (max_entry + 1u32);
    if worst < BigInt::one() << 120 {
        f(Gram::Small(
            l.gram()
                .to_rows()
                .iter()
                .map(|r| r.iter().map(|x| x.to_i128().expect("checked above")).collect())
                .collect(),
        ))
    } else {
        f(Gram::Big(l.gram().to_rows()))
    }
}

enum Gram {
    Small(Vec<Vec<i128>>),
    Big(Vec<Vec<BigInt>>),
}

fn clamp_bound(bound: u64) -> i64 {
    bound.min(i64::MAX as u64 / 2) as i64
}

/// Reflections in the vectors of the given norms with entries in
/// `[-bound, bound]`, skipping those that are not integral.
pub fn reflections_in_norms(l: &Lattice, bound: u64, norms: &[i64]) -> Vec<IntMatrix> {
    if l.dim() == 0 {
        return Vec::new();
    }
    let b = clamp_bound(bound);
    let vs = with_scalar(l, b, |g| match g {
        Gram::Small(a) => roots(&a, b, norms),
        Gram::Big(a) => roots(&a, b, norms),
    });
    let mut seen = HashSet::new();
    vs.into_iter()
        .filter_map(|v| reflection(l, &v.into_iter().map(BigInt::from).collect::<Vec<_>>()).ok())
        .filter(|r| seen.insert(r.clone()))
        .collect()
}

/// Up to `limit` automorphisms whose rows have entries in `[-bound, bound]`,
/// found by backtracking over images of the basis vectors.
pub fn backtrack_automorphisms(l: &Lattice, bound: u64, limit: usize) -> Vec<IntMatrix> {
    if l.dim() == 0 {
        return vec![IntMatrix::identity(0)];
    }
    let b = clamp_bound(bound);
    let finds = with_scalar(l, b, |g| match g {
        Gram::Small(a) => backtrack(&a, &short_vectors(&a, b, &[], true), limit),
        Gram::Big(a) => backtrack(&a, &short_vectors(&a, b, &[], true), limit),
    });
    finds
        .into_iter()
        .map(|rows| {
            let rows: Vec<Vec<BigInt>> = rows
                .into_iter()
                .map(|r| r.into_iter().map(BigInt::from).collect())
                .collect();
            let g = IntMatrix::from_rows(&rows).expect("square");
            debug_assert!(l.preserves(&g));
            g
        })
        .collect()
}

/// A deterministic finite list of automorphisms: `I`, `-I`, every reflection
/// in a vector of norm ±1 or ±2 with entries in `[-bound, bound]`, then up to
/// `limit` automorphisms found by backtracking over rows with the same bound.
pub fn find_automorphisms(l: &Lattice, bound: u64, limit: usize) -> Vec<IntMatrix> {
    let n = l.dim();
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    let candidates = [IntMatrix::identity(n), IntMatrix::identity(n).neg()]
        .into_iter()
        .chain(reflections_in_norms(l, bound, &[1, -1, 2, -2]))
        .chain(backtrack_automorphisms(l, bound, limit));
    for g in candidates {
        if seen.insert(g.clone()) {
            out.push(g);
        }
    }
    out
}

/// `|GL_n(F_2)| = Π_{i<n} (2^n - 2^i)`.
pub fn gl_order_mod2(n: usize) -> BigInt {
    let two_n = BigInt::one() << n;
    (0..n).map(|i| &two_n - (BigInt::one() << i)).product()
}

/// Reduction of a matrix mod 2, as a flat bit vector.
pub fn residue_mod2(g: &IntMatrix) -> Vec<bool> {
    g.entries().iter().map(|x| x.is_odd()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtendedAut {
    pub source: IntMatrix,
    /// The automorphism of `K` paired with `source`.
    pub h: IntMatrix,
    /// `source ⊕ h` on `L ⊕ K`.
    pub extension: IntMatrix,
    /// `P · extension · P⁻¹` with `P` the glue basis: the action in the
    /// coordinates of the glued lattice.
    pub conjugated: RatMatrix,
}

/// Action of `g` on the generators of `Δ(L)`: row `i` holds the
/// coefficients of `x_i · g`.
fn induced_action(l: &Lattice, g: &IntMatrix) -> Vec<Vec<BigInt>> {
    let group = l.discriminant_group();
    let gr = g.to_rat();
    (0..group.rank())
        .map(|i| group.coefficients(&vec_mat(group.lift(i), &gr)))
        .collect()
}

fn signed_diagonals(m: usize) -> Vec<IntMatrix> {
    (0..1u64 << m)
        .map(|mask| {
            let d: Vec<i64> = (0..m).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect();
            IntMatrix::diag(&d)
        })
        .collect()
}

fn permutations(m: usize) -> Vec<Vec<usize>> {
    if m == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for rest in permutations(m - 1) {
        for pos in 0..=rest.len() {
            let mut p = rest.clone();
            p.insert(pos, m - 1);
            out.push(p);
        }
    }
    out.sort();
    out
}

fn signed_permutations(m: usize) -> Vec<IntMatrix> {
    let mut out = Vec::new();
    for p in permutations(m) {
        for s in signed_diagonals(m) {
            let mut g = IntMatrix::zeros(m, m);
            for (i, &j) in p.iter().enumerate() {
                g[(i, j)] = s[(i, i)].clone();
            }
            out.push(g);
        }
    }
    out
}

/// Candidate automorphisms of `K` in the fixed search order.
fn k_candidates(k: &Lattice, bound: u64) -> Vec<IntMatrix> {
    let m = k.dim();
    let mut out = vec![IntMatrix::identity(m), IntMatrix::identity(m).neg()];
    out.extend(signed_diagonals(m));
    out.extend(signed_permutations(m));
    out.extend(find_automorphisms(k, bound, 2000));
    let mut seen = HashSet::new();
    out.retain(|g| seen.insert(g.clone()) && k.preserves(g));
    out
}

/// Pairs a level-2 automorphism `g` of `L` with an automorphism `h` of `K`
/// compatible with the glue map, so that `g ⊕ h` preserves the glued lattice.
///
/// Among compatible `h` the first whose extension is again `≡ I (mod 2)` is
/// preferred; otherwise the first compatible one is returned. `bound` limits
/// the automorphisms of `K` harvested after signed permutations.
pub fn extend_automorphism(e: &Embedding, g: &IntMatrix, bound: u64) -> Result<ExtendedAut, AutError> {
    if !is_automorphism(&e.l, g)? {
        return Err(AutError::NotAutomorphism);
    }
    if !congruence_level(g, 2) {
        return Err(AutError::NotLevelTwo);
    }
    let action = induced_action(&e.l, g);
    let gk = e.k.discriminant_group();
    let factors = gk.factors();
    // φ(x_i · g) = Σ_j action[i][j] φ(x_j)
    let targets: Vec<Vec<BigInt>> = action
        .iter()
        .map(|row| {
            (0..gk.rank())
                .map(|c| {
                    let s: BigInt = row.iter().enumerate().map(|(j, a)| a * &e.glue.image(j)[c]).sum();
                    s.mod_floor(&factors[c])
                })
                .collect()
        })
        .collect();

    let p = &e.glue_basis;
    let p_inv = p.inverse().expect("glue basis is nonsingular");
    let mut fallback = None;
    for h in k_candidates(&e.k, bound) {
        let hr = h.to_rat();
        let compatible = (0..e.glue.len()).all(|i| {
            let moved = vec_mat(&gk.element(e.glue.image(i)), &hr);
            gk.coefficients(&moved) == targets[i]
        });
        if !compatible {
            continue;
        }
        let extension = IntMatrix::block_diag(g, &h);
        let conjugated = &(p * &extension.to_rat()) * &p_inv;
        let found = ExtendedAut {
            source: g.clone(),
            h,
            extension,
            conjugated,
        };
        if found
            .conjugated
            .to_int()
            .is_some_and(|c| congruence_level(&c, 2))
        {
            return Ok(found);
        }
        fallback.get_or_insert(found);
    }
    fallback.ok_or(AutError::NoExtension)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContainmentVerdict {
    pub integral: bool,
    pub preserves_gram: bool,
    pub level_two: bool,
}

impl ContainmentVerdict {
    pub fn passed(&self) -> bool {
        self.integral && self.preserves_gram && self.level_two
    }
}

/// Checks that a level-2 automorphism of `L` acts on the glued lattice as a
/// level-2 automorphism.
pub fn check_containment(e: &Embedding, g: &IntMatrix, bound: u64) -> Result<ContainmentVerdict, AutError> {
    let ext = extend_automorphism(e, g, bound)?;
    Ok(match ext.conjugated.to_int() {
        None => ContainmentVerdict {
            integral: false,
            preserves_gram: false,
            level_two: false,
        },
        Some(c) => ContainmentVerdict {
            integral: true,
            preserves_gram: e.glued.preserves(&c),
            level_two: congruence_level(&c, 2),
        },
    })
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// The change of basis from the worked example, in `L ⊕ K` coordinates with
/// `L = diag(-7,1,1,1)` and `K = diag(7,1,1)`.
pub fn example_basis() -> RatMatrix {
    let mut b = RatMatrix::identity(7);
    b[(0, 0)] = q(4, 7);
    b[(0, 4)] = q(-3, 7);
    b[(4, 0)] = q(-3, 7);
    b[(4, 4)] = q(4, 7);
    b
}

/// Parameters `a, b, …, p` of the displayed block matrices, in that order.
pub type ExampleParams = [i64; 16];

fn example_gamma(t: &ExampleParams, sign: i64) -> IntMatrix {
    let [a, b, c, d, e, f, g, h, i, j, k, l, m, n, o, p] = *t;
    let mut x = IntMatrix::from_i64(&[
        &[7 * a + sign, 7 * b, 7 * c, 7 * d, 0, 0, 0],
        &[e, f, g, h, 0, 0, 0],
        &[i, j, k, l, 0, 0, 0],
        &[m, n, o, p, 0, 0, 0],
        &[0, 0, 0, 0, 1, 0, 0],
        &[0, 0, 0, 0, 0, 1, 0],
        &[0, 0, 0, 0, 0, 0, 1],
    ]);
    if sign < 0 {
        x[(4, 4)] = BigInt::from(-1);
        x[(5, 5)] = BigInt::from(-1);
    }
    x
}

/// `γ₁` (`sign = 1`) or `γ₂` (`sign = -1`) before conjugation.
pub fn example_gamma1(t: &ExampleParams) -> IntMatrix {
    example_gamma(t, 1)
}

pub fn example_gamma2(t: &ExampleParams) -> IntMatrix {
    example_gamma(t, -1)
}

/// The displayed value of `B·γ·B⁻¹` as a function of the parameters.
pub fn example_pattern(t: &ExampleParams, sign: i64) -> IntMatrix {
    let [a, b, c, d, e, f, g, h, i, j, k, l, m, n, o, p] = *t;
    IntMatrix::from_i64(&[
        &[16 * a + sign, 4 * b, 4 * c, 4 * d, 12 * a, 0, 0],
        &[4 * e, f, g, h, 3 * e, 0, 0],
        &[4 * i, j, k, l, 3 * i, 0, 0],
        &[4 * m, n, o, p, 3 * m, 0, 0],
        &[-12 * a, -3 * b, -3 * c, -3 * d, -9 * a + sign, 0, 0],
        &[0, 0, 0, 0, 0, sign, 0],
        &[0, 0, 0, 0, 0, 0, 1],
    ])
}

/// `B · γ · B⁻¹` computed exactly.
pub fn conjugate_by_example_basis(gamma: &IntMatrix) -> RatMatrix {
    let b = example_basis();
    let inv = b.inverse().expect("B is invertible");
    &(&b * &gamma.to_rat()) * &inv
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExampleVerdict {
    pub gram_identity: bool,
    pub gamma1: bool,
    pub gamma2: bool,
}

impl ExampleVerdict {
    pub fn passed(&self) -> bool {
        self.gram_identity && self.gamma1 && self.gamma2
    }
}

/// The worked example's matrix identities, with `γ₁` built from
/// `diag(1,-1,1,1)` and `γ₂` from `-I₄` (both with `a = 0`).
pub fn verify_example_matrices() -> ExampleVerdict {
    let b = example_basis();
    let ambient = IntMatrix::diag(&[-7, 1, 1, 1, 7, 1, 1]).to_rat();
    let target = IntMatrix::diag(&[-1, 1, 1, 1, 1, 1, 1]).to_rat();
    let gram_identity = &(&b * &ambient) * &b.transpose() == target;

    let from_reflection: ExampleParams = [0, 0, 0, 0, 0, -1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1];
    let from_negation: ExampleParams = [0, 0, 0, 0, 0, -1, 0, 0, 0, 0, -1, 0, 0, 0, 0, -1];
    let matches = |t: &ExampleParams, sign: i64| {
        let g = example_gamma(t, sign);
        conjugate_by_example_basis(&g) == example_pattern(t, sign).to_rat()
    };
    ExampleVerdict {
        gram_identity,
        gamma1: matches(&from_reflection, 1),
        gamma2: matches(&from_negation, -1),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gluing::{embed_unimodular, glue, GlueMap};

    fn l7() -> Lattice {
        Lattice::diagonal(&[-7, 1, 1, 1])
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn automorphism_predicates() {
        let l = l7();
        assert!(is_automorphism(&l, &IntMatrix::identity(4)).unwrap());
        assert!(is_automorphism(&l, &IntMatrix::identity(4).neg()).unwrap());
        assert!(is_automorphism(&l, &IntMatrix::diag(&[1, -1, 1, 1])).unwrap());
        assert!(is_automorphism(&l, &IntMatrix::identity(3)).is_err());
        let swap = IntMatrix::from_i64(&[&[1, 0, 0, 0], &[0, 0, 1, 0], &[0, 1, 0, 0], &[0, 0, 0, 1]]);
        assert!(is_automorphism(&l, &swap).unwrap());
        assert!(!congruence_level(&swap, 2));
        assert!(congruence_level(&IntMatrix::identity(4).neg(), 2));
        assert!(congruence_level(&IntMatrix::diag(&[1, -1, 1, 1]), 2));
    }

    #[test]
    fn reflections() {
        let l = l7();
        assert_eq!(reflection(&l, &big(&[0, 1, 0, 0])).unwrap(), IntMatrix::diag(&[1, -1, 1, 1]));
        let r = reflection(&l, &big(&[0, 1, 1, 0])).unwrap();
        assert_eq!(r, IntMatrix::from_i64(&[&[1, 0, 0, 0], &[0, 0, -1, 0], &[0, -1, 0, 0], &[0, 0, 0, 1]]));
        assert!((&r * &r).is_identity());
        let h = Lattice::new(IntMatrix::from_i64(&[&[0, 1], &[1, 0]])).unwrap();
        assert_eq!(reflection(&h, &big(&[1, 0])), Err(AutError::ZeroNorm));
        assert!(matches!(reflection(&l, &big(&[1, 0, 0, 0])), Ok(_)));
        assert!(matches!(
            reflection(&Lattice::diagonal(&[3, 1]), &big(&[1, 1])),
            Err(AutError::NonIntegral { .. })
        ));
    }

    #[test]
    fn harvest_small_bound() {
        let l = l7();
        let found = find_automorphisms(&l, 1, 1000);
        assert!(found.iter().all(|g| l.preserves(g)));
        for mask in 0..16u32 {
            let d: Vec<i64> = (0..4).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect();
            assert!(found.contains(&IntMatrix::diag(&d)));
        }
        assert_eq!(found[0], IntMatrix::identity(4));
        assert_eq!(found[1], IntMatrix::identity(4).neg());
        assert_eq!(found, find_automorphisms(&l, 1, 1000));
        let residues: HashSet<Vec<bool>> = found.iter().map(residue_mod2).collect();
        assert!(BigInt::from(residues.len()) <= gl_order_mod2(4));
    }

    #[test]
    fn harvest_finds_nontrivial_first_rows() {
        let l = l7();
        let nontrivial = |g: &IntMatrix| (1..4).any(|j| !g[(0, j)].is_zero());
        assert!(!find_automorphisms(&l, 1, 1000).iter().any(nontrivial));
        let found = find_automorphisms(&l, 8, 50);
        let g = found.iter().find(|g| nontrivial(g)).expect("first row off the axis");
        assert!(l.preserves(g));
        // preserving L* forces the rest of the first row into 7Z
        assert!((1..4).all(|j| g[(0, j)].is_multiple_of(&BigInt::from(7))));
        // the reflection in (1,2,2,0), of norm 1
        assert!(found.contains(&reflection(&l, &big(&[1, 2, 2, 0])).unwrap()));
    }

    #[test]
    fn gl2_orders() {
        assert_eq!(gl_order_mod2(1), BigInt::from(1));
        assert_eq!(gl_order_mod2(2), BigInt::from(6));
        assert_eq!(gl_order_mod2(3), BigInt::from(168));
    }

    #[test]
    fn extension_cases() {
        let e = embed_unimodular(&l7(), 1000).unwrap();
        let id = extend_automorphism(&e, &IntMatrix::identity(4), 1).unwrap();
        assert!(id.h.is_identity());
        assert!(id.conjugated.to_int().unwrap().is_identity());

        let neg = extend_automorphism(&e, &IntMatrix::identity(4).neg(), 1).unwrap();
        assert_eq!(neg.h, IntMatrix::identity(3).neg());
        let v = check_containment(&e, &IntMatrix::identity(4).neg(), 1).unwrap();
        assert!(v.passed());

        let r = extend_automorphism(&e, &IntMatrix::diag(&[1, -1, 1, 1]), 1).unwrap();
        assert!(r.h.is_identity());
        assert!(check_containment(&e, &IntMatrix::diag(&[1, -1, 1, 1]), 1).unwrap().passed());

        let swap = IntMatrix::from_i64(&[&[1, 0, 0, 0], &[0, 0, 1, 0], &[0, 1, 0, 0], &[0, 0, 0, 1]]);
        assert_eq!(check_containment(&e, &swap, 1), Err(AutError::NotLevelTwo));
    }

    #[test]
    fn extension_on_worked_example() {
        // the glue of B, with K = diag(7,1,1)
        let l = l7();
        let k = Lattice::diagonal(&[7, 1, 1]);
        let e = glue(&l, &k, &GlueMap::new(vec![big(&[1])])).unwrap();
        let ext = extend_automorphism(&e, &IntMatrix::identity(4).neg(), 1).unwrap();
        let c = ext.conjugated.to_int().unwrap();
        assert!(e.glued.preserves(&c));
        assert!(congruence_level(&c, 2));
    }

    #[test]
    fn level_two_elements_that_do_not_extend() {
        // reflection in (1,-2,-2,0), norm 2: level 2, trivial on Δ(L), but no
        // h ∈ Aut(diag(1,1,6)) keeps the extension at level 2
        let l = Lattice::diagonal(&[-6, 1, 1, 1]);
        let e = embed_unimodular(&l, 1000).unwrap();
        assert_eq!(e.k.gram(), &IntMatrix::diag(&[1, 1, 6]));
        let g = reflection(&l, &big(&[1, -2, -2, 0])).unwrap();
        assert!(congruence_level(&g, 2));
        let v = check_containment(&e, &g, 3).unwrap();
        assert!(v.integral && v.preserves_gram && !v.level_two);

        // acts on Δ(L) = Z/15 by 11, which Aut(diag(1,1,15)) cannot match
        let l = Lattice::diagonal(&[-15, 1, 1, 1]);
        let e = embed_unimodular(&l, 1000).unwrap();
        let g = IntMatrix::from_i64(&[&[11, 30, 30, 0], &[-2, -5, -6, 0], &[-2, -6, -5, 0], &[0, 0, 0, -1]]);
        assert!(l.preserves(&g) && congruence_level(&g, 2));
        assert_eq!(check_containment(&e, &g, 3), Err(AutError::NoExtension));
    }

    #[test]
    fn example_matrices() {
        assert!(verify_example_matrices().passed());
        let t: ExampleParams = [2, -1, 3, 5, 4, -2, 7, 1, 0, 3, -3, 2, 6, 1, 1, -4];
        for sign in [1, -1] {
            let g = example_gamma(&t, sign);
            assert_eq!(conjugate_by_example_basis(&g), example_pattern(&t, sign).to_rat());
        }
    }
}

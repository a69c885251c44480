//! Unimodular overlattices: a positive-definite companion `K`, an
//! anti-isometry `Δ(L) → Δ(K)`, and the overlattice of `L ⊕ K` along its graph.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{factor, split_prime, valuation};
use crate::genus::{
    genus_exists, kronecker2, legendre, negate_symbol, p_excess, padic_symbol, GenusSpec,
    JordanBlock, PadicSymbol,
};
use crate::lattice::{neg_mod1, DiscForm, DiscriminantGroup, Lattice, LatticeError};
use crate::matrix::{IntMatrix, RatMatrix};
use crate::serial;

#[derive(Debug, Error)]
pub enum GluingError {
    #[error("lattice is already unimodular")]
    Unimodular,
    #[error(
        "2-part of the discriminant group is not 2-elementary (invariant factors {factors}); \
         pass to a strongly square-free lattice first"
    )]
    NotTwoElementary { factors: String },
    #[error("companion genus does not exist: {0}")]
    NoGenus(String),
    #[error("no companion with entries up to {budget} found for genus {spec}")]
    SearchExhausted { budget: u64, spec: String },
    #[error("discriminant groups differ: {left} vs {right}")]
    GroupMismatch { left: String, right: String },
    #[error("no anti-isometry between the discriminant forms")]
    NoAntiIsometry,
    #[error("glue map has {got} images, expected {expected}")]
    BadGlueMap { expected: usize, got: usize },
    #[error("glued Gram matrix is not integral (glue group is not isotropic)")]
    NonIntegral,
    #[error("glue basis must be a nonsingular {expected}x{expected} matrix")]
    BadBasis { expected: usize },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// Where in the embedding pipeline a failure happened.
#[derive(Debug, Error)]
pub enum EmbedError {
    #[error("companion spec: {0}")]
    Spec(GluingError),
    #[error("companion search: {0}")]
    Search(GluingError),
    #[error("anti-isometry: {0}")]
    AntiIsometry(GluingError),
    #[error("glue: {0}")]
    Glue(GluingError),
    #[error("verification failed: {}", .0.join(", "))]
    Verify(Vec<&'static str>),
}

/// `φ`: generator `i` of `Δ(L)` goes to `Σ images[i][j] μ_j` in `Δ(K)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GlueMap {
    #[serde(with = "serial::int_rows")]
    pub images: Vec<Vec<BigInt>>,
}

impl GlueMap {
    pub fn new(images: Vec<Vec<BigInt>>) -> Self {
        GlueMap { images }
    }

    pub fn image(&self, i: usize) -> &[BigInt] {
        &self.images[i]
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub integral: bool,
    pub unimodular: bool,
    pub signature_ok: bool,
    pub odd_type: bool,
    /// The vectors of the glued lattice orthogonal to `K` form a copy of `L`.
    pub complement_ok: bool,
    /// `det(glued) · |G|² = det L · det K`.
    pub index_ok: bool,
    pub m: usize,
    #[serde(with = "serial::big_int")]
    pub glue_order: BigInt,
}

impl Certificate {
    pub fn passed(&self) -> bool {
        self.failures().is_empty()
    }

    /// Names of the failed checks. A non-integral Gram leaves the others
    /// undecided, so only "integral" is reported then.
    pub fn failures(&self) -> Vec<&'static str> {
        if !self.integral {
            return vec!["integral"];
        }
        [
            (self.integral, "integral"),
            (self.unimodular, "unimodular"),
            (self.signature_ok, "signature"),
            (self.odd_type, "odd type"),
            (self.complement_ok, "orthogonal complement"),
            (self.index_ok, "index law"),
        ]
        .into_iter()
        .filter(|(ok, _)| !ok)
        .map(|(_, name)| name)
        .collect()
    }

    fn non_integral(m: usize, glue_order: BigInt) -> Self {
        Certificate {
            integral: false,
            unimodular: false,
            signature_ok: false,
            odd_type: false,
            complement_ok: false,
            index_ok: false,
            m,
            glue_order,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Embedding {
    pub l: Lattice,
    pub k: Lattice,
    pub glue: GlueMap,
    /// One vector `(x_i, φ x_i)` of `L* ⊕ K*` per generator of `Δ(L)`.
    pub generators: RatMatrix,
    /// Rows are a basis of the glued lattice in `L ⊕ K` coordinates.
    pub glue_basis: RatMatrix,
    pub glued: Lattice,
    pub glue_index: BigInt,
    pub certificate: Certificate,
}

/// JSON layout of an embedding, also the input of `verify`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EmbeddingFile {
    #[serde(rename = "L")]
    pub l: LatticeGram,
    #[serde(rename = "K")]
    pub k: LatticeGram,
    pub glue_map: GlueMap,
    #[serde(with = "serial::rat_matrix")]
    pub glue_generators: RatMatrix,
    #[serde(with = "serial::rat_matrix")]
    pub glue_basis: RatMatrix,
    pub glued: LatticeGram,
    pub certificate: Certificate,
    pub m: usize,
    #[serde(with = "serial::big_int")]
    pub glue_order: BigInt,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LatticeGram {
    #[serde(with = "serial::int_matrix")]
    pub gram: IntMatrix,
}

impl Embedding {
    pub fn m(&self) -> usize {
        self.k.dim()
    }

    pub fn to_file(&self) -> EmbeddingFile {
        EmbeddingFile {
            l: LatticeGram { gram: self.l.gram().clone() },
            k: LatticeGram { gram: self.k.gram().clone() },
            glue_map: self.glue.clone(),
            glue_generators: self.generators.clone(),
            glue_basis: self.glue_basis.clone(),
            glued: LatticeGram { gram: self.glued.gram().clone() },
            certificate: self.certificate.clone(),
            m: self.m(),
            glue_order: self.glue_index.clone(),
        }
    }

    /// Whether `x` (in `L ⊕ K` coordinates) lies in the glued lattice.
    pub fn contains(&self, x: &[BigRational]) -> bool {
        let inv = self.glue_basis.inverse().expect("glue basis is nonsingular");
        crate::matrix::vec_mat(x, &inv).iter().all(BigRational::is_integer)
    }
}

fn m_for(delta: usize) -> usize {
    (delta + 1).max(3)
}

/// `(-1)^s det L`, which is always positive.
fn companion_det(l: &Lattice) -> BigInt {
    if l.signature().1 % 2 == 0 {
        l.det().clone()
    } else {
        -l.det()
    }
}

fn factors_text(g: &DiscriminantGroup) -> String {
    let f: Vec<String> = g.factors().iter().map(ToString::to_string).collect();
    format!("[{}]", f.join(", "))
}

/// Local data of the positive-definite companion `K`, following the recipe
/// for odd and even determinant.
pub fn companion_spec(l: &Lattice) -> Result<GenusSpec, GluingError> {
    if l.is_unimodular() {
        return Err(GluingError::Unimodular);
    }
    let group = l.discriminant_group();
    let delta = group.rank();
    let d = companion_det(l);
    let m = m_for(delta);
    let two_elementary = group
        .factors()
        .iter()
        .all(|f| f.is_odd() || valuation(f, 2) == 1);
    if d.is_even() && !two_elementary {
        return Err(GluingError::NotTwoElementary {
            factors: factors_text(&group),
        });
    }

    let mut symbols = BTreeMap::new();
    let mut excess: u64 = 0;
    for (p, _) in factor(&d) {
        if p == 2 {
            continue;
        }
        let neg = negate_symbol(&padic_symbol(l, p));
        let mut blocks: Vec<JordanBlock> = neg.blocks.into_iter().filter(|b| b.exponent > 0).collect();
        let used: usize = blocks.iter().map(|b| b.dim).sum();
        assert!(used < m, "scaled blocks fit below m");
        let (_, a) = split_prime(&d, p);
        let target = legendre(&a, p).expect("odd prime");
        let rest: i8 = blocks.iter().map(|b| b.sign).product();
        blocks.insert(0, JordanBlock::odd(0, m - used, target * rest));
        let sym = PadicSymbol { prime: p, blocks };
        excess += p_excess(&sym).expect("odd prime") as u64;
        symbols.insert(p, sym);
    }
    let t = ((m as u64 + excess) % 8) as u8;
    let two = if d.is_odd() {
        vec![JordanBlock::type_one(0, m, kronecker2(&d).expect("odd"), t)]
    } else {
        let (alpha, a) = split_prime(&d, 2);
        let alpha = alpha as usize;
        let sign = kronecker2(&a).expect("odd part");
        if alpha < m {
            vec![
                JordanBlock::type_one(0, m - alpha, sign, t),
                JordanBlock::type_one(1, alpha, 1, 0),
            ]
        } else {
            vec![JordanBlock::type_one(1, alpha, 1, t)]
        }
    };
    symbols.insert(2, PadicSymbol { prime: 2, blocks: two });

    let spec = GenusSpec {
        signature: (m, 0),
        det: d,
        symbols,
    };
    let verdict = genus_exists(&spec).map_err(|e| GluingError::NoGenus(e.to_string()))?;
    if !verdict.exists() {
        let why: Vec<String> = verdict.violations.iter().map(|v| v.detail.clone()).collect();
        return Err(GluingError::NoGenus(format!("{spec}: {}", why.join("; "))));
    }
    Ok(spec)
}

/// Sorted diagonals `a_1 ≤ ... ≤ a_m` with product `d`, in lexicographic order.
fn diagonal_candidates(d: &BigInt, m: usize, budget: &BigInt) -> Vec<Vec<BigInt>> {
    let mut divisors = vec![BigInt::one()];
    for (p, e) in factor(d) {
        let mut next = Vec::new();
        for x in &divisors {
            let mut q = x.clone();
            for _ in 0..=e {
                next.push(q.clone());
                q *= p;
            }
        }
        divisors = next;
    }
    divisors.sort();

    fn rec(
        rest: &BigInt,
        slots: usize,
        lo: &BigInt,
        divisors: &[BigInt],
        budget: &BigInt,
        cur: &mut Vec<BigInt>,
        out: &mut Vec<Vec<BigInt>>,
    ) {
        if slots == 1 {
            if rest >= lo && rest <= budget {
                cur.push(rest.clone());
                out.push(cur.clone());
                cur.pop();
            }
            return;
        }
        for a in divisors {
            if a < lo || a > budget || !rest.is_multiple_of(a) {
                continue;
            }
            if a.pow(slots as u32) > *rest {
                break;
            }
            cur.push(a.clone());
            rec(&(rest / a), slots - 1, a, divisors, budget, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(d, m, &BigInt::one(), &divisors, budget, &mut Vec::new(), &mut out);
    out
}

/// Walks positive-definite Grams of determinant `d` in lexicographic order of
/// their upper triangles, restricted to forms satisfying the necessary
/// Minkowski conditions (`a_11 ≤ a_22 ≤ ...`, `|2 a_ij| ≤ a_ii`,
/// `Π a_ii ≤ (4/3)^{m(m-1)/2} d`). Diagonal Grams are skipped. Stops early
/// when `visit` returns true.
fn general_candidates(d: &BigInt, m: usize, budget: i64, visit: &mut dyn FnMut(&IntMatrix) -> bool) {
    let e = (m * (m - 1) / 2) as u32;
    // Π a_ii · 3^e ≤ 4^e · d
    let cap = BigInt::from(4).pow(e) * d;
    let three_e = BigInt::from(3).pow(e);
    let slots: Vec<(usize, usize)> = (0..m).flat_map(|i| (i..m).map(move |j| (i, j))).collect();
    let mut g = IntMatrix::zeros(m, m);

    struct Ctx<'a> {
        m: usize,
        d: &'a BigInt,
        budget: i64,
        cap: BigInt,
        three_e: BigInt,
        slots: Vec<(usize, usize)>,
    }

    fn diag_product(g: &IntMatrix, upto: usize) -> BigInt {
        (0..upto).map(|k| g[(k, k)].clone()).product()
    }

    fn leading_minor(g: &IntMatrix, k: usize) -> BigInt {
        let rows: Vec<Vec<BigInt>> = (0..k).map(|i| g.row(i)[..k].to_vec()).collect();
        if k == 0 {
            return BigInt::one();
        }
        IntMatrix::from_rows(&rows).expect("square").det()
    }

    fn rec(ctx: &Ctx, pos: usize, g: &mut IntMatrix, visit: &mut dyn FnMut(&IntMatrix) -> bool) -> bool {
        let m = ctx.m;
        let (i, j) = ctx.slots[pos];
        if i == m - 1 {
            // last diagonal entry: det is linear in it
            let minor = leading_minor(g, m - 1);
            g[(i, i)] = BigInt::zero();
            let c = g.det();
            let num = ctx.d - c;
            if !num.is_multiple_of(&minor) {
                return false;
            }
            let a = num / &minor;
            let lo = g[(m - 2, m - 2)].clone();
            if a < lo || a > BigInt::from(ctx.budget) {
                return false;
            }
            if diag_product(g, m - 1) * &a * &ctx.three_e > ctx.cap {
                return false;
            }
            g[(i, i)] = a;
            let diagonal = (0..m).all(|r| (0..m).all(|s| r == s || g[(r, s)].is_zero()));
            let stop = !diagonal && visit(g);
            g[(i, i)] = BigInt::zero();
            return stop;
        }
        if i == j {
            let lo: i64 = if i == 0 { 1 } else { g[(i - 1, i - 1)].to_i64().expect("small") };
            let prefix = diag_product(g, i);
            let mut a = lo;
            while a <= ctx.budget {
                let aa = BigInt::from(a);
                // later diagonal entries are at least a
                if &prefix * aa.pow((m - i) as u32) * &ctx.three_e > ctx.cap {
                    break;
                }
                g[(i, i)] = aa;
                if leading_minor(g, i + 1).is_positive() && rec(ctx, pos + 1, g, visit) {
                    return true;
                }
                a += 1;
            }
            g[(i, i)] = BigInt::zero();
            false
        } else {
            let half = (g[(i, i)].to_i64().expect("small") / 2).min(ctx.budget);
            for b in -half..=half {
                g[(i, j)] = BigInt::from(b);
                g[(j, i)] = BigInt::from(b);
                if rec(ctx, pos + 1, g, visit) {
                    return true;
                }
            }
            g[(i, j)] = BigInt::zero();
            g[(j, i)] = BigInt::zero();
            false
        }
    }

    if budget < 1 {
        return;
    }
    let ctx = Ctx {
        m,
        d,
        budget,
        cap,
        three_e,
        slots,
    };
    rec(&ctx, 0, &mut g, visit);
}

/// Finds a positive-definite companion for `L`: diagonal Grams first, then
/// general reduced Grams, each accepted only if an anti-isometry exists.
///
/// `budget` bounds the absolute value of every Gram entry.
pub fn companion_search(l: &Lattice, budget: u64) -> Result<Lattice, GluingError> {
    let spec = companion_spec(l)?;
    let m = spec.dim();
    let group_l = l.discriminant_group();
    let form_l = l.discriminant_form(&group_l);
    let odd_primes: Vec<u64> = spec.symbols.keys().copied().filter(|&p| p != 2).collect();

    let accept = |gram: IntMatrix| -> Option<Lattice> {
        let k = Lattice::new(gram).ok()?;
        let group_k = k.discriminant_group();
        if group_k.factors() != group_l.factors() {
            return None;
        }
        if odd_primes.iter().any(|&p| padic_symbol(&k, p) != spec.symbols[&p]) {
            return None;
        }
        let form_k = k.discriminant_form(&group_k);
        anti_isometry(&group_l, &form_l, &group_k, &form_k).ok()?;
        Some(k)
    };

    let big_budget = BigInt::from(budget);
    for diag in diagonal_candidates(&spec.det, m, &big_budget) {
        if let Some(k) = accept(IntMatrix::diag(&diag)) {
            return Ok(k);
        }
    }
    let mut found = None;
    general_candidates(&spec.det, m, budget.min(i64::MAX as u64) as i64, &mut |g| {
        found = accept(g.clone());
        found.is_some()
    });
    found.ok_or_else(|| GluingError::SearchExhausted {
        budget,
        spec: spec.to_string(),
    })
}

/// Searches for `φ: Δ(L) → Δ(K)` negating norms and pairings, trying images
/// of each generator in lexicographic order of their coefficients.
pub fn anti_isometry(
    gl: &DiscriminantGroup,
    fl: &DiscForm,
    gk: &DiscriminantGroup,
    fk: &DiscForm,
) -> Result<GlueMap, GluingError> {
    if gl.factors() != gk.factors() {
        return Err(GluingError::GroupMismatch {
            left: factors_text(gl),
            right: factors_text(gk),
        });
    }
    let k = gl.rank();
    let mut images: Vec<Vec<BigInt>> = Vec::with_capacity(k);
    if search_images(gl, fl, gk, fk, &mut images) {
        Ok(GlueMap::new(images))
    } else {
        Err(GluingError::NoAntiIsometry)
    }
}

fn search_images(
    gl: &DiscriminantGroup,
    fl: &DiscForm,
    gk: &DiscriminantGroup,
    fk: &DiscForm,
    images: &mut Vec<Vec<BigInt>>,
) -> bool {
    let k = gl.rank();
    let i = images.len();
    if i == k {
        return is_onto(images, gk.factors());
    }
    let order = &gl.factors()[i];
    let want_norm = neg_mod1(fl.norm(i));
    let mut c = vec![BigInt::zero(); k];
    loop {
        if &gk.element_order(&c) == order
            && fk.norm_of(&c) == want_norm
            && (0..i).all(|j| fk.pairing_of(&c, &images[j]) == neg_mod1(fl.pairing(i, j)))
        {
            images.push(c.clone());
            if search_images(gl, fl, gk, fk, images) {
                return true;
            }
            images.pop();
        }
        // next tuple, last coordinate fastest
        let mut pos = k;
        loop {
            if pos == 0 {
                return false;
            }
            pos -= 1;
            c[pos] += 1;
            if c[pos] < gk.factors()[pos] {
                break;
            }
            c[pos] = BigInt::zero();
        }
    }
}

/// Whether the rows of `images` generate `⊕ Z/d_j`.
fn is_onto(images: &[Vec<BigInt>], factors: &[BigInt]) -> bool {
    let k = factors.len();
    if k == 0 {
        return true;
    }
    let mut rows: Vec<Vec<BigInt>> = images.to_vec();
    for (j, d) in factors.iter().enumerate() {
        let mut r = vec![BigInt::zero(); k];
        r[j] = d.clone();
        rows.push(r);
    }
    let (h, _) = IntMatrix::from_rows(&rows).expect("uniform").hnf();
    (0..k).all(|i| (0..k).all(|j| h[(i, j)] == BigInt::from((i == j) as i64)))
}

fn rat(x: &BigInt) -> BigRational {
    BigRational::from_integer(x.clone())
}

/// Overlattice of `L ⊕ K` generated by the graph of `φ`.
pub fn glue(l: &Lattice, k: &Lattice, phi: &GlueMap) -> Result<Embedding, GluingError> {
    let gl = l.discriminant_group();
    let gk = k.discriminant_group();
    if phi.len() != gl.rank() {
        return Err(GluingError::BadGlueMap {
            expected: gl.rank(),
            got: phi.len(),
        });
    }
    let (n, m) = (l.dim(), k.dim());
    let mut gens = Vec::with_capacity(gl.rank());
    for i in 0..gl.rank() {
        let image = phi.image(i);
        if image.len() != gk.rank() {
            return Err(GluingError::BadGlueMap {
                expected: gk.rank(),
                got: image.len(),
            });
        }
        let mut row = gl.lift(i).to_vec();
        row.extend(gk.element(image));
        gens.push(row);
    }
    let generators = if gens.is_empty() {
        RatMatrix::zeros(0, n + m)
    } else {
        RatMatrix::from_rows(&gens).expect("uniform rows")
    };

    let mut all: Vec<Vec<BigRational>> = RatMatrix::identity(n + m).to_rows();
    all.extend(gens);
    let stacked = RatMatrix::from_rows(&all).expect("uniform rows");
    let den = stacked.common_denominator();
    let scaled = stacked.scale(&rat(&den)).to_int().expect("cleared denominators");
    let (h, _) = scaled.hnf();
    let basis_rows: Vec<Vec<BigRational>> = (0..n + m)
        .map(|i| h.row(i).iter().map(|x| BigRational::new(x.clone(), den.clone())).collect())
        .collect();
    let glue_basis = RatMatrix::from_rows(&basis_rows).expect("uniform rows");

    let ambient = IntMatrix::block_diag(l.gram(), k.gram()).to_rat();
    let gram = &(&glue_basis * &ambient) * &glue_basis.transpose();
    let gram = gram.to_int().ok_or(GluingError::NonIntegral)?;
    let glued = Lattice::new(gram)?;
    let glue_index = (BigRational::one() / glue_basis.det().abs()).to_integer();
    let certificate = verify_raw(l, k, &glue_basis)?;
    Ok(Embedding {
        l: l.clone(),
        k: k.clone(),
        glue: phi.clone(),
        generators,
        glue_basis,
        glued,
        glue_index,
        certificate,
    })
}

/// Recomputes every certificate flag from `L`, `K`, and a glue basis.
pub fn verify_raw(l: &Lattice, k: &Lattice, glue_basis: &RatMatrix) -> Result<Certificate, GluingError> {
    let (n, m) = (l.dim(), k.dim());
    let size = n + m;
    if glue_basis.rows() != size || glue_basis.cols() != size {
        return Err(GluingError::BadBasis { expected: size });
    }
    let det_b = glue_basis.det();
    if det_b.is_zero() {
        return Err(GluingError::BadBasis { expected: size });
    }
    // L ⊕ K has index 1/|det B| in the glued lattice
    let index = BigRational::one() / det_b.abs();
    let glue_order = if index.is_integer() {
        index.to_integer()
    } else {
        BigInt::zero()
    };
    let ambient = IntMatrix::block_diag(l.gram(), k.gram()).to_rat();
    let gram = &(glue_basis * &ambient) * &glue_basis.transpose();
    let Some(gram) = gram.to_int() else {
        return Ok(Certificate::non_integral(m, glue_order));
    };
    let glued = Lattice::new(gram)?;
    let (r, s) = l.signature();
    let index_ok = !glue_order.is_zero()
        && glued.det() * &glue_order * &glue_order == l.det() * k.det()
        && glue_order == l.discriminant_group().order();
    let odd_type = (0..glued.dim()).any(|i| glued.gram()[(i, i)].is_odd());

    Ok(Certificate {
        integral: true,
        unimodular: glued.is_unimodular(),
        signature_ok: glued.signature() == (r + m, s),
        odd_type,
        complement_ok: complement_is_l(l, glue_basis, &glued),
        index_ok,
        m,
        glue_order,
    })
}

/// The glued vectors with zero `K` part form a lattice isometric to `L` via
/// a unimodular change of basis.
fn complement_is_l(l: &Lattice, glue_basis: &RatMatrix, glued: &Lattice) -> bool {
    let n = l.dim();
    let size = glue_basis.rows();
    let k_part: Vec<Vec<BigRational>> = glue_basis.to_rows().iter().map(|r| r[n..].to_vec()).collect();
    let k_part = RatMatrix::from_rows(&k_part).expect("uniform rows");
    let den = k_part.common_denominator();
    let Some(k_int) = k_part.scale(&rat(&den)).to_int() else {
        return false;
    };
    let y = k_int.left_kernel();
    if y.rows() != n {
        return false;
    }
    if n == 0 {
        return true;
    }
    let in_ambient = &y.to_rat() * glue_basis;
    let x_rows: Vec<Vec<BigRational>> = in_ambient.to_rows().iter().map(|r| r[..n].to_vec()).collect();
    let Some(x) = RatMatrix::from_rows(&x_rows).expect("uniform").to_int() else {
        return false;
    };
    debug_assert_eq!(y.cols(), size);
    let complement = &(&y * glued.gram()) * &y.transpose();
    x.det().abs().is_one() && &(&x * l.gram()) * &x.transpose() == complement
}

/// Certificate of an existing embedding, recomputed from scratch.
pub fn verify_embedding(e: &Embedding) -> Result<Certificate, GluingError> {
    verify_raw(&e.l, &e.k, &e.glue_basis)
}

/// Embeds `L` into an odd unimodular lattice of signature `(r + m, s)` with
/// `m = max(δ + 1, 3)`.
pub fn embed_unimodular(l: &Lattice, budget: u64) -> Result<Embedding, EmbedError> {
    if l.is_unimodular() {
        let k = Lattice::diagonal(&[1, 1, 1]);
        let e = glue(l, &k, &GlueMap::new(vec![])).map_err(EmbedError::Glue)?;
        return check(e);
    }
    companion_spec(l).map_err(EmbedError::Spec)?;
    let k = companion_search(l, budget).map_err(EmbedError::Search)?;
    let (gl, gk) = (l.discriminant_group(), k.discriminant_group());
    let phi = anti_isometry(&gl, &l.discriminant_form(&gl), &gk, &k.discriminant_form(&gk))
        .map_err(EmbedError::AntiIsometry)?;
    let e = glue(l, &k, &phi).map_err(EmbedError::Glue)?;
    check(e)
}

fn check(e: Embedding) -> Result<Embedding, EmbedError> {
    let fails = e.certificate.failures();
    if fails.is_empty() {
        Ok(e)
    } else {
        Err(EmbedError::Verify(fails))
    }
}

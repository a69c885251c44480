//! The ring `O_d / 2O_d` for imaginary quadratic `Q(√-d)` and the order of
//! `SL₂` over it.
//!
//! In characteristic 2 we have `-I ≡ I`, so reduction mod 2 factors through
//! `PSL₂(O_d)`. The index of the level-2 principal congruence subgroup is the
//! order of the image, which is all of `SL₂(O_d/2)` by strong approximation.
//! That surjectivity is assumed, not computed.

use std::fmt;

use thiserror::Error;

use crate::arith::is_squarefree;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BianchiError {
    #[error("d = {0} is not a square-free positive integer")]
    NotSquarefree(u64),
    #[error("ring tables for d = {d} fail the {law} law")]
    Axiom { d: u64, law: &'static str },
}

/// Element `x + yω` of `O_d/2`, encoded as `x | y << 1`.
pub type Elem = u8;

/// A commutative ring with four elements `{0, 1, ω, 1+ω}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteRing4 {
    pub d: u64,
    add: [[Elem; 4]; 4],
    mul: [[Elem; 4]; 4],
}

impl FiniteRing4 {
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        self.add[a as usize][b as usize]
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mul[a as usize][b as usize]
    }

    pub fn units(&self) -> Vec<Elem> {
        (0..4).filter(|&a| (0..4).any(|b| self.mul(a, b) == 1)).collect()
    }

    pub fn is_field(&self) -> bool {
        self.units().len() == 3
    }

    /// Number of nonzero `a` with `a² = 0`.
    fn nilpotents(&self) -> usize {
        (1..4).filter(|&a| self.mul(a, a) == 0).count()
    }

    pub fn description(&self) -> &'static str {
        if self.is_field() {
            "F_4 (field with four elements)"
        } else if self.nilpotents() > 0 {
            "F_2[x]/(x^2) (local, not a field)"
        } else {
            "F_2 x F_2 (split)"
        }
    }

    /// `ω²` as an element.
    pub fn omega_squared(&self) -> Elem {
        self.mul(2, 2)
    }

    fn verify(&self) -> Result<(), BianchiError> {
        let fail = |law| Err(BianchiError::Axiom { d: self.d, law });
        for a in 0..4 {
            if self.add(a, 0) != a || self.mul(a, 1) != a {
                return fail("identity");
            }
            for b in 0..4 {
                if self.add(a, b) != self.add(b, a) || self.mul(a, b) != self.mul(b, a) {
                    return fail("commutativity");
                }
                for c in 0..4 {
                    if self.add(self.add(a, b), c) != self.add(a, self.add(b, c)) {
                        return fail("additive associativity");
                    }
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                        return fail("multiplicative associativity");
                    }
                    if self.mul(a, self.add(b, c)) != self.add(self.mul(a, b), self.mul(a, c)) {
                        return fail("distributive");
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for FiniteRing4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const NAMES: [&str; 4] = ["0", "1", "w", "1+w"];
        write!(
            f,
            "O_{}/2 with w^2 = {}: {}",
            self.d,
            NAMES[self.omega_squared() as usize],
            self.description()
        )
    }
}

/// `O_d/2` from the integral basis `{1, ω}`: `ω = √-d` when `d ≡ 1, 2 (mod 4)`,
/// `ω = (1 + √-d)/2` when `d ≡ 3 (mod 4)`.
pub fn ring_mod2(d: u64) -> Result<FiniteRing4, BianchiError> {
    if !is_squarefree(d) {
        return Err(BianchiError::NotSquarefree(d));
    }
    // ω² = s + tω over Z, reduced mod 2
    let (s, t) = if d % 4 == 3 {
        // ω² = ω - (1 + d)/4
        ((((1 + d) / 4) % 2) as u8, 1u8)
    } else {
        // ω² = -d
        ((d % 2) as u8, 0u8)
    };
    let mut add = [[0; 4]; 4];
    let mut mul = [[0; 4]; 4];
    for a in 0..4u8 {
        for b in 0..4u8 {
            add[a as usize][b as usize] = a ^ b;
            let (x1, y1, x2, y2) = (a & 1, a >> 1, b & 1, b >> 1);
            // (x1 + y1ω)(x2 + y2ω) = x1x2 + (x1y2 + x2y1)ω + y1y2ω²
            let yy = y1 & y2;
            let x = (x1 & x2) ^ (yy & s);
            let y = (x1 & y2) ^ (x2 & y1) ^ (yy & t);
            mul[a as usize][b as usize] = x | y << 1;
        }
    }
    let ring = FiniteRing4 { d, add, mul };
    ring.verify()?;
    Ok(ring)
}

/// `|SL₂(O_d/2)|`, counting all 256 matrices with `ad - bc = 1`.
pub fn bianchi_index(d: u64) -> Result<u64, BianchiError> {
    let r = ring_mod2(d)?;
    let mut count = 0;
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for e in 0..4 {
                    // minus is plus in characteristic 2
                    if r.add(r.mul(a, e), r.mul(b, c)) == 1 {
                        count += 1;
                    }
                }
            }
        }
    }
    Ok(count)
}

/// The residue class of `d` that determines the index.
pub fn residue_class(d: u64) -> &'static str {
    match d % 8 {
        1 | 5 => "d = 1 mod 4",
        2 | 6 => "d = 2 mod 4",
        3 => "d = 3 mod 8",
        7 => "d = 7 mod 8",
        _ => "d = 0 mod 4",
    }
}

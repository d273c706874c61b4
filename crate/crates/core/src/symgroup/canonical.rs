//! The distinguished permutations used by the moment formulas.
//!
//! On `S_{2p}` the first `p` points are the "top" copy (`iᵀ` is index
//! `i-1`) and the last `p` the "bottom" copy (`iᴮ` is index `p+i-1`).

use serde::{Deserialize, Serialize};

use super::perm::Permutation;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CanonicalKind {
    /// Full cycle `(p p-1 .. 2 1)` on `S_p`, i.e. `i -> i-1`.
    Gamma,
    /// Two backward cycles `(p .. 1)(2p .. p+1)` on `S_{2p}`.
    Gamma2,
    /// `γᵀ ⊕ γᴮ`: backward on the top copy, forward on the bottom copy.
    GammaTb,
    /// The `2p`-cycle `(pᵀ .. 2ᵀ 1ᵀ 1ᴮ 2ᴮ .. pᴮ)`.
    GammaTilde,
    /// The involution `iᵀ <-> iᴮ`.
    Delta,
}

pub fn top(p: usize, i: usize) -> usize {
    debug_assert!(i >= 1 && i <= p);
    i - 1
}

pub fn bottom(p: usize, i: usize) -> usize {
    debug_assert!(i >= 1 && i <= p);
    p + i - 1
}

pub fn canonical(kind: CanonicalKind, p: usize) -> Result<Permutation> {
    if p < 1 {
        return Err(Error::Domain("canonical permutations need p >= 1".into()));
    }
    let back = |i: usize| (i + p - 1) % p;
    let fwd = |i: usize| (i + 1) % p;
    let map: Vec<usize> = match kind {
        CanonicalKind::Gamma => (0..p).map(back).collect(),
        CanonicalKind::Gamma2 => (0..p).map(back).chain((0..p).map(|i| p + back(i))).collect(),
        CanonicalKind::GammaTb => (0..p).map(back).chain((0..p).map(|i| p + fwd(i))).collect(),
        CanonicalKind::GammaTilde => {
            let tb = canonical(CanonicalKind::GammaTb, p)?;
            let swap = Permutation::from_cycles(2 * p, &[vec![top(p, p), bottom(p, 1)]]);
            // p = 1: (1ᵀ 1ᴮ) with γᵀ⊕γᴮ = id.
            return swap?.compose(&tb);
        }
        CanonicalKind::Delta => (0..p).map(|i| i + p).chain(0..p).collect(),
    };
    Permutation::from_vec(map)
}

pub fn gamma(p: usize) -> Permutation {
    canonical(CanonicalKind::Gamma, p.max(1)).expect("p >= 1")
}

pub fn delta(p: usize) -> Permutation {
    canonical(CanonicalKind::Delta, p.max(1)).expect("p >= 1")
}

pub fn gamma_tb(p: usize) -> Permutation {
    canonical(CanonicalKind::GammaTb, p.max(1)).expect("p >= 1")
}

/// The two possible factors `I` (identity) and `E` (Bell projector) of the
/// expansion `Q = I - E`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Choice {
    Identity,
    Bell,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChoiceFunction {
    choice: Vec<Choice>,
}

impl ChoiceFunction {
    pub fn new(choice: Vec<Choice>) -> Self {
        Self { choice }
    }

    /// Bit `j` of `mask` set means position `j+1` is `Bell`.
    pub fn from_mask(p: usize, mask: u64) -> Self {
        Self {
            choice: (0..p)
                .map(|j| if mask >> j & 1 == 1 { Choice::Bell } else { Choice::Identity })
                .collect(),
        }
    }

    /// All `2^p` choice functions, ordered by bitmask.
    pub fn all(p: usize) -> impl Iterator<Item = ChoiceFunction> {
        (0..1u64 << p).map(move |m| Self::from_mask(p, m))
    }

    pub fn p(&self) -> usize {
        self.choice.len()
    }

    /// Value at the 1-based position `i`, taken modulo `p`.
    pub fn at(&self, i: usize) -> Choice {
        let p = self.p();
        self.choice[(i + p - 1) % p]
    }

    pub fn bell_count(&self) -> usize {
        self.choice.iter().filter(|&&c| c == Choice::Bell).count()
    }

    pub fn identity_count(&self) -> usize {
        self.p() - self.bell_count()
    }

    pub fn flipped(&self, i: usize) -> Self {
        let mut out = self.clone();
        let p = self.p();
        let slot = &mut out.choice[(i + p - 1) % p];
        *slot = match *slot {
            Choice::Identity => Choice::Bell,
            Choice::Bell => Choice::Identity,
        };
        out
    }
}

/// The permutation `f̂ ∈ S_{2p}` encoding `tr(f(1)Z f(2)Z .. f(p)Z)`:
///
/// * `iᵀ -> (i-1)ᵀ` if `f(i) = I`, otherwise `iᵀ -> iᴮ`;
/// * `iᴮ -> (i+1)ᴮ` if `f(i+1) = I`, otherwise `iᴮ -> iᵀ`.
pub fn f_hat(f: &ChoiceFunction) -> Permutation {
    let p = f.p();
    let mut map = vec![0; 2 * p];
    for i in 1..=p {
        let prev = if i == 1 { p } else { i - 1 };
        let next = if i == p { 1 } else { i + 1 };
        map[top(p, i)] = match f.at(i) {
            Choice::Identity => top(p, prev),
            Choice::Bell => bottom(p, i),
        };
        map[bottom(p, i)] = match f.at(next) {
            Choice::Identity => bottom(p, next),
            Choice::Bell => top(p, i),
        };
    }
    Permutation::from_vec(map).expect("f-hat is a bijection")
}

/// `true` iff `a ∘ δ` has a fixed point, i.e. some `a(iᵀ) = iᴮ` or `a(iᴮ) = iᵀ`.
pub fn is_vertical(a: &Permutation, p: usize) -> Result<bool> {
    if a.size() != 2 * p {
        return Err(Error::SizeMismatch { left: a.size(), right: 2 * p });
    }
    Ok((0..p).any(|i| a.apply(i) == i + p || a.apply(i + p) == i))
}

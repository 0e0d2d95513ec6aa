//! Weight-lattice arithmetic.
//!
//! Weights are integer vectors in the fundamental-weight basis, so the `i`-th
//! coordinate of `λ` is the pairing `<λ, α_i^∨>`. `(a, b)` means
//! `a ω_1 + b ω_2`.

use std::fmt;
use std::ops::{Add, AddAssign, Index, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rootsys::RootSystem;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default)]
#[serde(transparent)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn new(coords: impl Into<Vec<i64>>) -> Self {
        Weight(coords.into())
    }

    pub fn zero(rank: usize) -> Self {
        Weight(vec![0; rank])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Dominant means every fundamental coordinate is nonnegative.
    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }

    pub fn scaled(&self, k: i64) -> Self {
        Weight(self.0.iter().map(|&c| c * k).collect())
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl From<Vec<i64>> for Weight {
    fn from(v: Vec<i64>) -> Self {
        Weight(v)
    }
}

impl<const N: usize> From<[i64; N]> for Weight {
    fn from(v: [i64; N]) -> Self {
        Weight(v.to_vec())
    }
}

impl Index<usize> for Weight {
    type Output = i64;
    fn index(&self, i: usize) -> &i64 {
        &self.0[i]
    }
}

impl Add for &Weight {
    type Output = Weight;
    fn add(self, rhs: &Weight) -> Weight {
        debug_assert_eq!(self.rank(), rhs.rank());
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Add for Weight {
    type Output = Weight;
    fn add(mut self, rhs: Weight) -> Weight {
        self += &rhs;
        self
    }
}

impl Sub for &Weight {
    type Output = Weight;
    fn sub(self, rhs: &Weight) -> Weight {
        debug_assert_eq!(self.rank(), rhs.rank());
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Sub for Weight {
    type Output = Weight;
    fn sub(mut self, rhs: Weight) -> Weight {
        self -= &rhs;
        self
    }
}

impl AddAssign<&Weight> for Weight {
    fn add_assign(&mut self, rhs: &Weight) {
        for (a, b) in self.0.iter_mut().zip(&rhs.0) {
            *a += b;
        }
    }
}

impl SubAssign<&Weight> for Weight {
    fn sub_assign(&mut self, rhs: &Weight) {
        for (a, b) in self.0.iter_mut().zip(&rhs.0) {
            *a -= b;
        }
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight(self.0.iter().map(|c| -c).collect())
    }
}

impl Mul<&Weight> for i64 {
    type Output = Weight;
    fn mul(self, rhs: &Weight) -> Weight {
        rhs.scaled(self)
    }
}

/// Integer power `p^n` as a lattice scalar.
pub fn prime_power(p: u64, n: u32) -> i64 {
    i64::try_from(p)
        .ok()
        .and_then(|p| p.checked_pow(n))
        .expect("p^n overflows i64")
}

pub fn check_prime(p: u64) -> Result<()> {
    if p < 2 || (2..).take_while(|d| d * d <= p).any(|d| p.is_multiple_of(d)) {
        return Err(Error::NotPrime(p));
    }
    Ok(())
}

/// `λ = λ⁰ + p^n λ¹` with `λ⁰ ∈ X_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PAdicSplit {
    pub lambda0: Weight,
    pub lambda1: Weight,
    pub n: u32,
    pub p: u64,
}

impl PAdicSplit {
    pub fn recompose(&self) -> Weight {
        &self.lambda0 + &self.lambda1.scaled(prime_power(self.p, self.n))
    }
}

/// Digitwise floor division by `p^n`. Works for non-dominant `λ`; `n = 0`
/// gives `λ⁰ = 0`.
pub fn split(lambda: &Weight, p: u64, n: u32) -> PAdicSplit {
    let q = prime_power(p, n);
    let (lambda0, lambda1) = lambda
        .0
        .iter()
        .map(|&c| (c.rem_euclid(q), c.div_euclid(q)))
        .unzip();
    PAdicSplit {
        lambda0: Weight(lambda0),
        lambda1: Weight(lambda1),
        n,
        p,
    }
}

/// Membership in `X_n`: dominant with every coordinate `< p^n`.
pub fn is_restricted(lambda: &Weight, p: u64, n: u32) -> bool {
    let q = prime_power(p, n);
    lambda.0.iter().all(|&c| (0..q).contains(&c))
}

/// All of `X_n` for a given rank, in lexicographic order.
pub fn restricted_weights(rank: usize, p: u64, n: u32) -> Vec<Weight> {
    let q = prime_power(p, n);
    box_weights(rank, 0, q - 1)
}

/// Every weight with all coordinates in `lo..=hi`, lexicographic.
pub fn box_weights(rank: usize, lo: i64, hi: i64) -> Vec<Weight> {
    let mut out = vec![Weight(Vec::with_capacity(rank))];
    for _ in 0..rank {
        out = out
            .into_iter()
            .flat_map(|w| {
                (lo..=hi).map(move |c| {
                    let mut v = w.0.clone();
                    v.push(c);
                    Weight(v)
                })
            })
            .collect();
    }
    out
}

/// Normal form of `μ` under the dot action `w·μ = w(μ+ρ) − ρ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DotNormal {
    /// `μ + ρ` lies on a reflecting hyperplane.
    Singular,
    Regular { sign: i64, weight: Weight },
}

impl DotNormal {
    pub fn sign(&self) -> i64 {
        match self {
            DotNormal::Singular => 0,
            DotNormal::Regular { sign, .. } => *sign,
        }
    }
}

/// Moves `μ + ρ` into the dominant chamber by simple reflections, tracking
/// the parity of the word used.
pub fn dot_dominantize(rs: &RootSystem, mu: &Weight) -> DotNormal {
    let mut v = mu + rs.rho();
    let mut sign = 1;
    while let Some(i) = v.0.iter().position(|&c| c < 0) {
        rs.reflect_in_place(&mut v, i);
        sign = -sign;
    }
    if v.0.contains(&0) {
        return DotNormal::Singular;
    }
    DotNormal::Regular {
        sign,
        weight: &v - rs.rho(),
    }
}

/// `<μ+ρ, α₀^∨> ≤ p` on every irreducible component.
pub fn in_bottom_alcove(rs: &RootSystem, mu: &Weight, p: u64) -> Result<bool> {
    rs.check_weight(mu)?;
    if !mu.is_dominant() {
        return Err(Error::NotDominant(mu.clone()));
    }
    let shifted = mu + rs.rho();
    Ok(rs
        .components()
        .iter()
        .all(|c| rs.pair(&shifted, rs.alpha0(c)) <= p as i64))
}

/// Membership in `X(≤1)`: per component, at most one simple root with
/// `<λ¹, α^∨> < h − 2`.
pub fn in_one_wall_region(rs: &RootSystem, lambda: &Weight, p: u64) -> Result<bool> {
    rs.check_weight(lambda)?;
    if !lambda.is_dominant() {
        return Err(Error::NotDominant(lambda.clone()));
    }
    let lambda1 = split(lambda, p, 1).lambda1;
    Ok(rs.components().iter().all(|c| {
        let bound = c.coxeter_number() - 2;
        c.simple_range()
            .filter(|&i| lambda1[i] < bound)
            .count()
            <= 1
    }))
}

//! Composition factors of the baby Verma module `Ẑ₁(λ)` as a `G₁B`-module.
//!
//! As a T-module `Ẑ₁(λ) ≅ St ⊗ (λ − (p−1)ρ)`, and the simple `G₁B`-modules
//! `L̂₁(μ) = L(μ⁰) ⊗ pμ¹` have linearly independent characters with highest
//! weight `μ`. Peeling off highest weights therefore recovers the factors.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::charring::{steinberg_character, FormalCharacter};
use crate::error::{Error, Result};
use crate::rootsys::RootSystem;
use crate::simples::Simples;
use crate::weights::{prime_power, split, Weight};

/// One factor `L̂₁(μ)` with `μ = μ⁰ + pμ¹`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct G1BFactor {
    pub weight: Weight,
    pub mu0: Weight,
    pub mu1: Weight,
    pub mult: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct G1BFactorList {
    pub lambda: Weight,
    pub p: u64,
    pub factors: Vec<G1BFactor>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FactorListJson {
    lambda: Weight,
    factors: Vec<G1BFactor>,
}

impl G1BFactorList {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&FactorListJson {
            lambda: self.lambda.clone(),
            factors: self.factors.clone(),
        })
        .expect("factor list serializes")
    }

    pub fn from_json(s: &str, p: u64) -> Result<Self> {
        let parsed: FactorListJson = serde_json::from_str(s)?;
        let q = prime_power(p, 1);
        for f in &parsed.factors {
            if f.weight != &f.mu0 + &f.mu1.scaled(q) || f.mult <= 0 {
                return Err(Error::Schema(format!("inconsistent factor {}", f.weight)));
            }
        }
        Ok(G1BFactorList {
            lambda: parsed.lambda,
            p,
            factors: parsed.factors,
        })
    }

    /// `Σ mult · ch L(μ⁰) · e^{pμ¹}`.
    pub fn reassemble(&self, simples: &Simples) -> Result<FormalCharacter> {
        let q = prime_power(self.p, 1);
        let mut out = FormalCharacter::zero(simples.system());
        for f in &self.factors {
            let l = simples.exact_character(&f.mu0)?;
            out.add_scaled(&l.shift(&f.mu1.scaled(q)), f.mult);
        }
        Ok(out)
    }

    /// `Σ mult · dim L(μ⁰)`, which must equal `p^{|R⁺|}`.
    pub fn total_dimension(&self, simples: &Simples) -> Result<i64> {
        self.factors
            .iter()
            .map(|f| Ok(f.mult * simples.exact_character(&f.mu0)?.dimension()))
            .sum()
    }
}

/// `ch Ẑ₁(λ) = ch St · e^{λ−(p−1)ρ}`.
pub fn zhat_character(rs: &Arc<RootSystem>, lambda: &Weight, p: u64) -> FormalCharacter {
    let shift = lambda - &rs.rho().scaled(p as i64 - 1);
    steinberg_character(rs, p, 1).shift(&shift)
}

/// `G₁B` composition factors of `Ẑ₁(λ)` with multiplicities, highest first.
pub fn decompose(simples: &Simples, lambda: &Weight) -> Result<G1BFactorList> {
    let rs = simples.system();
    rs.check_weight(lambda)?;
    let p = simples.p();
    let q = prime_power(p, 1);
    let mut rem = zhat_character(rs, lambda, p);
    let mut factors = Vec::new();
    while let Some((top, k)) = rem.highest_term().map(|(w, k)| (w.clone(), k)) {
        if k < 0 {
            return Err(Error::NegativeRemainder(top));
        }
        let s = split(&top, p, 1);
        let l = simples.exact_character(&s.lambda0)?;
        rem.add_scaled(&l.shift(&s.lambda1.scaled(q)), -k);
        factors.push(G1BFactor {
            weight: top,
            mu0: s.lambda0,
            mu1: s.lambda1,
            mult: k,
        });
    }
    rs.sort_canonical(&mut factors, |f| &f.weight);
    Ok(G1BFactorList {
        lambda: lambda.clone(),
        p,
        factors,
    })
}

/// `I_λ`: simple roots `α` with `⟨μ¹, α^∨⟩ < −1` for some factor.
pub fn i_lambda(factors: &G1BFactorList) -> BTreeSet<usize> {
    factors
        .factors
        .iter()
        .flat_map(|f| {
            f.mu1
                .coords()
                .iter()
                .enumerate()
                .filter(|(_, &c)| c < -1)
                .map(|(i, _)| i)
        })
        .collect()
}

/// `h_λ = max{h_J | J ⊆ I connected} + 1`, with the empty maximum taken as 0.
/// Restrict `subset` to one component to get a per-component value.
pub fn h_lambda(rs: &RootSystem, subset: &BTreeSet<usize>) -> i64 {
    rs.connected_components(subset)
        .iter()
        .map(|j| rs.h_j(j))
        .max()
        .unwrap_or(0)
        + 1
}

/// Every connected subset of `subset` in the Dynkin diagram.
pub fn connected_subsets(rs: &RootSystem, subset: &BTreeSet<usize>) -> Vec<Vec<usize>> {
    let items: Vec<usize> = subset.iter().copied().collect();
    (1u32..(1 << items.len()))
        .map(|mask| {
            items
                .iter()
                .enumerate()
                .filter(|(b, _)| mask & (1 << b) != 0)
                .map(|(_, &i)| i)
                .collect::<BTreeSet<usize>>()
        })
        .filter(|j| rs.connected_components(j).len() == 1)
        .map(|j| j.into_iter().collect())
        .collect()
}

#[derive(Clone, Debug, Default)]
pub struct WeightEstimateReport {
    pub checked_pairs: usize,
    pub steinberg_weights: usize,
    pub violations: Vec<String>,
}

impl WeightEstimateReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks, for every factor and every `β ∈ R⁺`,
/// `⟨λ¹,β^∨⟩ − h(β^∨) − h + 2 ≤ ⟨μ¹,β^∨⟩ ≤ ⟨λ¹,β^∨⟩ + h − 2`, and
/// `|⟨ν, β^∨⟩| ≤ (p−1)(h−1)` for every weight `ν` of `St`.
pub fn check_weight_estimates(rs: &Arc<RootSystem>, factors: &G1BFactorList) -> WeightEstimateReport {
    let p = factors.p as i64;
    let lambda1 = split(&factors.lambda, factors.p, 1).lambda1;
    let mut report = WeightEstimateReport::default();
    for beta in rs.positive_roots() {
        let h = rs.components()[beta.component].coxeter_number();
        let l1 = rs.pair(&lambda1, beta);
        let lo = l1 - beta.coroot_height() - h + 2;
        let hi = l1 + h - 2;
        for f in &factors.factors {
            let m1 = rs.pair(&f.mu1, beta);
            report.checked_pairs += 1;
            if m1 < lo || m1 > hi {
                report.violations.push(format!(
                    "factor {} at β={:?}: {lo} ≤ {m1} ≤ {hi} fails",
                    f.weight, beta.simple
                ));
            }
        }
    }
    let st = steinberg_character(rs, factors.p, 1);
    for (nu, _) in st.terms() {
        report.steinberg_weights += 1;
        for beta in rs.positive_roots() {
            let h = rs.components()[beta.component].coxeter_number();
            let v = rs.pair(nu, beta);
            if v.abs() > (p - 1) * (h - 1) {
                report
                    .violations
                    .push(format!("St weight {nu} at β={:?}: |{v}| > {}", beta.simple, (p - 1) * (h - 1)));
            }
        }
    }
    report
}

//! Filtration criteria and character-level certificates.
//!
//! A certificate for `∇(λ)` at level `n` lists `(μ⁰, μ¹, m)` with
//! `Σ m · ch L(μ⁰) · χ(μ¹)^{(n)} = χ(λ)`. Characters give necessary
//! conditions only: a nonnegative certificate does not by itself prove that a
//! module-level `p^n`-filtration exists. The `GUARANTEED` status means one of
//! the proven criteria applies.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::charring::{steinberg_character, weyl_character, FormalCharacter};
use crate::error::{Error, Result};
use crate::g1b::{decompose, h_lambda, i_lambda, G1BFactorList};
use crate::rootsys::RootSystem;
use crate::simples::Simples;
use crate::weights::{in_one_wall_region, prime_power, split, dot_dominantize, DotNormal, Weight};

/// Which criterion guarantees a filtration, in priority order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Flag {
    /// Level 0: `∇(λ)` is its own good filtration.
    Base,
    Small,
    Large,
    OneWall,
    MainBound,
    GlobalBound,
}

impl Flag {
    pub fn as_str(&self) -> &'static str {
        match self {
            Flag::Base => "base",
            Flag::Small => "small",
            Flag::Large => "large",
            Flag::OneWall => "one_wall",
            Flag::MainBound => "main_bound",
            Flag::GlobalBound => "global_bound",
        }
    }
}

impl FromStr for Flag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "base" => Flag::Base,
            "small" => Flag::Small,
            "large" => Flag::Large,
            "one_wall" => Flag::OneWall,
            "main_bound" => Flag::MainBound,
            "global_bound" => Flag::GlobalBound,
            _ => return Err(Error::Schema(format!("unknown flag {s}"))),
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CriteriaFlags {
    pub small: bool,
    pub large: bool,
    pub main_bound: bool,
    pub one_wall: bool,
    pub global_bound: bool,
}

impl CriteriaFlags {
    /// The highest-priority flag that fired.
    pub fn strongest(&self) -> Option<Flag> {
        [
            (self.small, Flag::Small),
            (self.large, Flag::Large),
            (self.one_wall, Flag::OneWall),
            (self.main_bound, Flag::MainBound),
            (self.global_bound, Flag::GlobalBound),
        ]
        .into_iter()
        .find(|(on, _)| *on)
        .map(|(_, f)| f)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CriteriaReport {
    pub lambda: Weight,
    pub p: u64,
    pub flags: CriteriaFlags,
    /// `None` when the `Ẑ₁(λ)` factors could not be computed.
    pub i_lambda: Option<BTreeSet<usize>>,
    pub h_lambda: Option<i64>,
    pub h: i64,
}

/// Evaluates every criterion for dominant `λ`. On reducible systems each
/// flag requires its inequality on every component.
pub fn criteria(simples: &Simples, lambda: &Weight) -> Result<CriteriaReport> {
    let factors = match decompose(simples, lambda) {
        Ok(f) => Some(f),
        Err(Error::SimpleCharUnavailable(_)) => None,
        Err(e) => return Err(e),
    };
    criteria_with(simples, lambda, factors.as_ref())
}

fn criteria_with(
    simples: &Simples,
    lambda: &Weight,
    factors: Option<&G1BFactorList>,
) -> Result<CriteriaReport> {
    let rs = simples.system();
    rs.check_weight(lambda)?;
    if !lambda.is_dominant() {
        return Err(Error::NotDominant(lambda.clone()));
    }
    let p = simples.p() as i64;
    let lambda1 = split(lambda, simples.p(), 1).lambda1;
    let i_set = factors.map(i_lambda);

    let mut flags = CriteriaFlags {
        small: true,
        large: true,
        main_bound: i_set.is_some(),
        one_wall: in_one_wall_region(rs, lambda, simples.p())?,
        global_bound: true,
    };
    let mut h_lam_max = None;
    for c in rs.components() {
        let h = c.coxeter_number();
        flags.small &= rs.pair(&lambda1, rs.alpha0(c)) <= p - 2 * h + 3;
        flags.large &= c.simple_range().all(|i| lambda[i] >= p * (h - 2));
        flags.one_wall &= p >= 2 * (h - 2);
        flags.global_bound &= p >= (h - 2) * h;
        if let Some(i_set) = &i_set {
            let local: BTreeSet<usize> = i_set
                .iter()
                .copied()
                .filter(|i| c.simple_range().contains(i))
                .collect();
            let hl = h_lambda(rs, &local);
            flags.main_bound &= p >= (h - 2) * hl;
            h_lam_max = Some(h_lam_max.map_or(hl, |m: i64| m.max(hl)));
        }
    }
    Ok(CriteriaReport {
        lambda: lambda.clone(),
        p: simples.p(),
        flags,
        i_lambda: i_set,
        h_lambda: h_lam_max,
        h: rs.coxeter_number(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    Guaranteed(Flag),
    CharConsistent,
    Unknown,
    Failed,
}

impl Status {
    /// Larger is stronger.
    fn strength(&self) -> i32 {
        match self {
            Status::Guaranteed(f) => 100 - *f as i32,
            Status::CharConsistent => 2,
            Status::Unknown => 1,
            Status::Failed => 0,
        }
    }

    pub fn weakest(self, other: Status) -> Status {
        if other.strength() < self.strength() {
            other
        } else {
            self
        }
    }

    /// Whether the Euler identity is expected to hold with all lines present.
    pub fn has_lines(&self) -> bool {
        !matches!(self, Status::Unknown | Status::Failed)
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Guaranteed(flag) => write!(f, "GUARANTEED:{}", flag.as_str()),
            Status::CharConsistent => f.write_str("CHAR_CONSISTENT"),
            Status::Unknown => f.write_str("UNKNOWN"),
            Status::Failed => f.write_str("FAILED"),
        }
    }
}

impl FromStr for Status {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "CHAR_CONSISTENT" => Status::CharConsistent,
            "UNKNOWN" => Status::Unknown,
            "FAILED" => Status::Failed,
            _ => match s.strip_prefix("GUARANTEED:") {
                Some(flag) => Status::Guaranteed(flag.parse()?),
                None => return Err(Error::Schema(format!("unknown status {s}"))),
            },
        })
    }
}

impl Serialize for Status {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Status {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertLine {
    pub mu0: Weight,
    pub mu1: Weight,
    pub mult: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Certificate {
    pub lambda: Weight,
    pub p: u64,
    pub n: u32,
    pub status: Status,
    pub lines: Vec<CertLine>,
}

impl Certificate {
    /// The level-0 certificate: the single line `(0, λ, 1)`.
    pub fn good_filtration(lambda: &Weight, p: u64) -> Self {
        Certificate {
            lambda: lambda.clone(),
            p,
            n: 0,
            status: Status::Guaranteed(Flag::Base),
            lines: vec![CertLine {
                mu0: Weight::zero(lambda.rank()),
                mu1: lambda.clone(),
                mult: 1,
            }],
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificate serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn all_nonnegative(&self) -> bool {
        self.lines.iter().all(|l| l.mult >= 0)
    }

    /// `Σ mult · ch L(μ⁰) · χ(μ¹)^{(n)}`.
    pub fn euler_sum(&self, simples: &Simples) -> Result<FormalCharacter> {
        let rs = simples.system();
        let mut out = FormalCharacter::zero(rs);
        for line in &self.lines {
            let l = simples.exact_character(&line.mu0)?;
            let chi = weyl_character(rs, &line.mu1)?.frobenius_twist(self.p, self.n);
            out.add_scaled(&l.mul_unchecked(&chi), line.mult);
        }
        Ok(out)
    }

    /// Checks `Σ mult · ch L(μ⁰) · χ(μ¹)^{(n)} = χ(λ)` coefficientwise.
    pub fn euler_identity_holds(&self, simples: &Simples) -> Result<bool> {
        Ok(self.euler_sum(simples)? == weyl_character(simples.system(), &self.lambda)?)
    }

    /// `Σ mult · dim L(μ⁰) · dim χ(μ¹)` against `dim χ(λ)`.
    pub fn dimension_check(&self, simples: &Simples) -> Result<bool> {
        let rs = simples.system();
        let mut total: i128 = 0;
        for line in &self.lines {
            let l = simples.exact_character(&line.mu0)?.dimension() as i128;
            total += i128::from(line.mult) * l * rs.weyl_dimension(&line.mu1);
        }
        Ok(total == rs.weyl_dimension(&self.lambda))
    }
}

fn merge_lines(rs: &RootSystem, p: u64, n: u32, acc: BTreeMap<(Weight, Weight), i64>) -> Vec<CertLine> {
    let q = prime_power(p, n);
    let mut lines: Vec<(Weight, CertLine)> = acc
        .into_iter()
        .filter(|(_, m)| *m != 0)
        .map(|((mu0, mu1), mult)| (&mu0 + &mu1.scaled(q), CertLine { mu0, mu1, mult }))
        .collect();
    rs.sort_canonical(&mut lines, |l| &l.0);
    lines.into_iter().map(|(_, l)| l).collect()
}

/// Certificate for `∇(λ)` at level `n`. Level 1 comes from inducing the
/// `Ẑ₁(λ)` factors; higher levels refine it.
pub fn certify(simples: &Simples, lambda: &Weight, n: u32) -> Result<Certificate> {
    let rs = simples.system();
    rs.check_weight(lambda)?;
    if !lambda.is_dominant() {
        return Err(Error::NotDominant(lambda.clone()));
    }
    match n {
        0 => Ok(Certificate::good_filtration(lambda, simples.p())),
        1 => certify_level_one(simples, lambda),
        _ => refine(simples, &certify_level_one(simples, lambda)?, n),
    }
}

fn certify_level_one(simples: &Simples, lambda: &Weight) -> Result<Certificate> {
    let rs = simples.system();
    let p = simples.p();
    let unknown = || Certificate {
        lambda: lambda.clone(),
        p,
        n: 1,
        status: Status::Unknown,
        lines: Vec::new(),
    };
    let factors = match decompose(simples, lambda) {
        Ok(f) => f,
        Err(Error::SimpleCharUnavailable(_)) => return Ok(unknown()),
        Err(e) => return Err(e),
    };
    let report = criteria_with(simples, lambda, Some(&factors))?;

    let mut acc: BTreeMap<(Weight, Weight), i64> = BTreeMap::new();
    for f in &factors.factors {
        if let DotNormal::Regular { sign, weight } = dot_dominantize(rs, &f.mu1) {
            *acc.entry((f.mu0.clone(), weight)).or_insert(0) += sign * f.mult;
        }
    }
    // every line needs an exact ch L(μ⁰) for the Euler identity to be checkable
    for (mu0, _) in acc.keys() {
        if simples.exact_character(mu0).is_err() {
            return Ok(unknown());
        }
    }
    let lines = merge_lines(rs, p, 1, acc);
    let nonneg = lines.iter().all(|l| l.mult >= 0);
    let status = match (report.flags.strongest(), nonneg) {
        (Some(flag), true) => Status::Guaranteed(flag),
        (None, true) => Status::CharConsistent,
        (None, false) => Status::Failed,
        (Some(flag), false) => {
            return Err(Error::InvariantViolation(format!(
                "{lambda} p={p}: criterion {} holds but the certificate has negative lines",
                flag.as_str()
            )))
        }
    };
    Ok(Certificate {
        lambda: lambda.clone(),
        p,
        n: 1,
        status,
        lines,
    })
}

/// Refines a level-`n` certificate to `target_n` one level at a time by
/// certifying every `∇(μ¹)` at level 1 and folding `ν⁰` into the restricted
/// part: `(μ⁰ + p^n ν⁰, ν¹, m·m')`.
pub fn refine(simples: &Simples, cert: &Certificate, target_n: u32) -> Result<Certificate> {
    if !cert.status.has_lines() {
        return Err(Error::NotRefinable(cert.status.to_string()));
    }
    if target_n < cert.n {
        return Err(Error::InvariantViolation(format!(
            "cannot refine level {} down to {target_n}",
            cert.n
        )));
    }
    let rs = simples.system();
    let p = simples.p();
    let mut current = cert.clone();
    let mut subs: HashMap<Weight, Certificate> = HashMap::new();
    while current.n < target_n {
        let q = prime_power(p, current.n);
        let mut status = current.status;
        let mut acc: BTreeMap<(Weight, Weight), i64> = BTreeMap::new();
        for line in &current.lines {
            let sub = match subs.get(&line.mu1) {
                Some(s) => s,
                None => {
                    let s = certify_level_one(simples, &line.mu1)?;
                    subs.entry(line.mu1.clone()).or_insert(s)
                }
            };
            status = status.weakest(sub.status);
            if sub.status == Status::Unknown {
                return Ok(Certificate {
                    lambda: cert.lambda.clone(),
                    p,
                    n: target_n,
                    status: Status::Unknown,
                    lines: Vec::new(),
                });
            }
            for s in &sub.lines {
                let mu0 = &line.mu0 + &s.mu0.scaled(q);
                *acc.entry((mu0, s.mu1.clone())).or_insert(0) += line.mult * s.mult;
            }
        }
        let n = current.n + 1;
        let lines = merge_lines(rs, p, n, acc);
        if lines.iter().any(|l| l.mult < 0) {
            status = status.weakest(Status::Failed);
        }
        current = Certificate {
            lambda: cert.lambda.clone(),
            p,
            n,
            status,
            lines,
        };
    }
    Ok(current)
}

#[derive(Clone, Debug)]
pub struct DivisibilityReport {
    pub divisible: bool,
    pub quotient: Option<FormalCharacter>,
    /// Coefficients of `ch St_n^{⊗3} − ch St_n` in the χ-basis are all ≥ 0.
    pub summand_ok: bool,
    /// Coefficient of `χ((p^n−1)ρ)` in `ch St_n^{⊗3}`.
    pub steinberg_in_cube: i64,
}

/// Character-level divisibility by `St_n`, plus the summand sanity check.
pub fn divisibility_report(c: &FormalCharacter, p: u64, n: u32) -> Result<DivisibilityReport> {
    let rs = c.system();
    let st = steinberg_character(rs, p, n);
    let quotient = match c.divide_by(&st) {
        Ok(q) => Some(q),
        Err(Error::NotDivisible(_)) => None,
        Err(e) => return Err(e),
    };
    let cube = st.mul(&st)?.mul(&st)?;
    let top = rs.rho().scaled(prime_power(p, n) - 1);
    let expansion = cube.weyl_expansion()?;
    let steinberg_in_cube = expansion
        .iter()
        .find(|(w, _)| *w == top)
        .map_or(0, |(_, k)| *k);
    let summand_ok = steinberg_in_cube >= 1
        && expansion.iter().all(|(w, k)| *k >= i64::from(*w == top));
    Ok(DivisibilityReport {
        divisible: quotient.is_some(),
        quotient,
        summand_ok,
        steinberg_in_cube,
    })
}

/// Checks `(ch L(λ⁰)·χ(λ¹)^{(m)})^{(n)} · ch St_n = ch L((p^n−1)ρ + p^n λ⁰) · χ(λ¹)^{(n+m)}`
/// with `λ = λ⁰ + p^m λ¹`.
pub fn steinberg_component_identity(simples: &Simples, lambda: &Weight, m: u32, n: u32) -> Result<bool> {
    let rs: &Arc<RootSystem> = simples.system();
    rs.check_weight(lambda)?;
    if !lambda.is_dominant() {
        return Err(Error::NotDominant(lambda.clone()));
    }
    let p = simples.p();
    let s = split(lambda, p, m);
    let chi1 = weyl_character(rs, &s.lambda1)?;
    let lhs = simples
        .exact_character(&s.lambda0)?
        .mul_unchecked(&chi1.frobenius_twist(p, m))
        .frobenius_twist(p, n)
        .mul_unchecked(&steinberg_character(rs, p, n));
    let big = &rs.rho().scaled(prime_power(p, n) - 1) + &s.lambda0.scaled(prime_power(p, n));
    let rhs = simples
        .exact_character(&big)?
        .mul_unchecked(&chi1.frobenius_twist(p, n + m));
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(v: &[i64]) -> Weight {
        Weight(v.to_vec())
    }

    fn lines(c: &Certificate) -> Vec<(Weight, Weight, i64)> {
        c.lines.iter().map(|l| (l.mu0.clone(), l.mu1.clone(), l.mult)).collect()
    }

    #[test]
    fn sl3_small_flag_region() {
        let a2 = RootSystem::parse("A2").unwrap();
        let s = Simples::new(&a2, 5).unwrap();
        for lam in crate::weights::box_weights(2, 0, 14) {
            let r = criteria_with(&s, &lam, None).unwrap();
            let l1 = split(&lam, 5, 1).lambda1;
            assert_eq!(r.flags.small, l1[0] + l1[1] <= 2, "{lam}");
        }
    }

    #[test]
    fn global_bounds() {
        let a2 = RootSystem::parse("A2").unwrap();
        let s = Simples::new(&a2, 3).unwrap();
        assert!(criteria(&s, &w(&[4, 0])).unwrap().flags.global_bound);
        let b2 = RootSystem::parse("B2").unwrap();
        let s = Simples::new(&b2, 11).unwrap();
        assert!(criteria_with(&s, &w(&[3, 40]), None).unwrap().flags.global_bound);
        let s = Simples::new(&b2, 7).unwrap();
        assert!(!criteria_with(&s, &w(&[3, 40]), None).unwrap().flags.global_bound);
    }

    #[test]
    fn large_flag_boundary() {
        let a2 = RootSystem::parse("A2").unwrap();
        let s = Simples::new(&a2, 5).unwrap();
        let r = criteria(&s, &w(&[5, 5])).unwrap();
        assert!(r.flags.large);
        let r = criteria(&s, &w(&[30, 0])).unwrap();
        assert!(!r.flags.large);
    }

    #[test]
    fn zero_is_small_when_p_large() {
        let b2 = RootSystem::parse("B2").unwrap();
        for p in [5, 7, 11] {
            let s = Simples::new(&b2, p).unwrap();
            assert!(criteria(&s, &w(&[0, 0])).unwrap().flags.small);
        }
    }

    #[test]
    fn steinberg_certificate() {
        let b2 = RootSystem::parse("B2").unwrap();
        let s = Simples::new(&b2, 3).unwrap();
        let c = certify(&s, &b2.rho().scaled(2), 1).unwrap();
        assert!(matches!(c.status, Status::Guaranteed(_)));
        assert_eq!(lines(&c), vec![(w(&[2, 2]), w(&[0, 0]), 1)]);
    }

    #[test]
    fn a1_two() {
        let a1 = RootSystem::parse("A1").unwrap();
        let s = Simples::new(&a1, 2).unwrap();
        let c = certify(&s, &w(&[2]), 1).unwrap();
        assert_eq!(lines(&c), vec![(w(&[0]), w(&[1]), 1), (w(&[0]), w(&[0]), 1)]);
        assert!(c.euler_identity_holds(&s).unwrap());
        let r = refine(&s, &Certificate::good_filtration(&w(&[2]), 2), 1).unwrap();
        assert_eq!(lines(&r), lines(&c));
        assert_eq!(refine(&s, &c, 1).unwrap(), c);
    }

    #[test]
    fn sp4_zero_certificate() {
        let b2 = RootSystem::parse("B2").unwrap();
        let s = Simples::new(&b2, 2).unwrap();
        let c = certify(&s, &w(&[0, 0]), 1).unwrap();
        assert!(c.euler_identity_holds(&s).unwrap());
        assert!(c.all_nonnegative());
        assert_eq!(lines(&c), vec![(w(&[0, 0]), w(&[0, 0]), 1)]);
    }

    #[test]
    fn refine_rejects_failed_and_unknown() {
        let a1 = RootSystem::parse("A1").unwrap();
        let s = Simples::new(&a1, 2).unwrap();
        let mut c = Certificate::good_filtration(&w(&[3]), 2);
        c.status = Status::Failed;
        assert!(matches!(refine(&s, &c, 1), Err(Error::NotRefinable(_))));
        c.status = Status::Unknown;
        assert!(matches!(refine(&s, &c, 1), Err(Error::NotRefinable(_))));
    }

    #[test]
    fn status_strings() {
        for s in [
            Status::Guaranteed(Flag::Small),
            Status::Guaranteed(Flag::OneWall),
            Status::CharConsistent,
            Status::Unknown,
            Status::Failed,
        ] {
            assert_eq!(s.to_string().parse::<Status>().unwrap(), s);
        }
        assert_eq!(Status::Guaranteed(Flag::Small).to_string(), "GUARANTEED:small");
        assert_eq!(
            Status::Guaranteed(Flag::Small).weakest(Status::Guaranteed(Flag::MainBound)),
            Status::Guaranteed(Flag::MainBound)
        );
        assert_eq!(Status::CharConsistent.weakest(Status::Failed), Status::Failed);
    }

    #[test]
    fn certificate_json() {
        let a1 = RootSystem::parse("A1").unwrap();
        let s = Simples::new(&a1, 2).unwrap();
        let c = certify(&s, &w(&[2]), 1).unwrap();
        let j = c.to_json();
        assert_eq!(
            j,
            r#"{"lambda":[2],"p":2,"n":1,"status":"GUARANTEED:small","lines":[{"mu0":[0],"mu1":[1],"mult":1},{"mu0":[0],"mu1":[0],"mult":1}]}"#
        );
        assert_eq!(Certificate::from_json(&j).unwrap(), c);
    }

    #[test]
    fn divisibility_examples() {
        let a1 = RootSystem::parse("A1").unwrap();
        let one = FormalCharacter::monomial(&a1, w(&[0]));
        let r = divisibility_report(&one, 2, 1).unwrap();
        assert!(!r.divisible);
        assert!(r.summand_ok);
        assert_eq!(r.steinberg_in_cube, 2);
        let chi = weyl_character(&a1, &w(&[4])).unwrap();
        let st = steinberg_character(&a1, 2, 1);
        let r = divisibility_report(&chi.mul(&st).unwrap(), 2, 1).unwrap();
        assert_eq!(r.quotient.unwrap(), chi);
    }

    #[test]
    fn component_identity_small_cases() {
        let a1 = RootSystem::parse("A1").unwrap();
        let s = Simples::new(&a1, 2).unwrap();
        for lam in 0..6 {
            for (m, n) in [(0, 0), (0, 1), (1, 1), (1, 2), (2, 1)] {
                assert!(steinberg_component_identity(&s, &w(&[lam]), m, n).unwrap());
            }
        }
    }
}

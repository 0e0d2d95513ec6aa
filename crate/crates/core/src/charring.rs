//! Formal characters: finitely supported integer functions on the weight
//! lattice, with convolution product, Frobenius scaling, Weyl characters via
//! Freudenthal's recursion, and exact division by W-symmetric characters.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rootsys::RootSystem;
use crate::weights::{dot_dominantize, prime_power, DotNormal, Weight};

#[derive(Clone)]
pub struct FormalCharacter {
    rs: Arc<RootSystem>,
    terms: HashMap<Weight, i64>,
}

impl PartialEq for FormalCharacter {
    fn eq(&self, other: &Self) -> bool {
        self.rs.cartan_type() == other.rs.cartan_type() && self.terms == other.terms
    }
}

impl Eq for FormalCharacter {}

impl fmt::Debug for FormalCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[", self.rs.name())?;
        for (i, (w, m)) in self.sorted_entries().iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{m}e{w}")?;
        }
        write!(f, "]")
    }
}

impl FormalCharacter {
    pub fn zero(rs: &Arc<RootSystem>) -> Self {
        FormalCharacter {
            rs: Arc::clone(rs),
            terms: HashMap::new(),
        }
    }

    /// `e^μ`.
    pub fn monomial(rs: &Arc<RootSystem>, mu: Weight) -> Self {
        Self::from_terms(rs, [(mu, 1)])
    }

    pub fn from_terms(rs: &Arc<RootSystem>, terms: impl IntoIterator<Item = (Weight, i64)>) -> Self {
        let mut c = Self::zero(rs);
        for (w, m) in terms {
            c.add_term(w, m);
        }
        c
    }

    pub fn system(&self) -> &Arc<RootSystem> {
        &self.rs
    }

    pub fn add_term(&mut self, w: Weight, m: i64) {
        if m == 0 {
            return;
        }
        let e = self.terms.entry(w);
        match e {
            std::collections::hash_map::Entry::Occupied(mut o) => {
                *o.get_mut() += m;
                if *o.get() == 0 {
                    o.remove();
                }
            }
            std::collections::hash_map::Entry::Vacant(v) => {
                v.insert(m);
            }
        }
    }

    pub fn coefficient(&self, w: &Weight) -> i64 {
        self.terms.get(w).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Weight, &i64)> {
        self.terms.iter()
    }

    pub fn support_len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Sum of multiplicities.
    pub fn dimension(&self) -> i64 {
        self.terms.values().sum()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.terms.values().all(|&m| m > 0)
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.rs, &other.rs) || self.rs.cartan_type() == other.rs.cartan_type() {
            Ok(())
        } else {
            Err(Error::MismatchedSystem {
                left: self.rs.name(),
                right: other.rs.name(),
            })
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        out.add_scaled(other, 1);
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        out.add_scaled(other, -1);
        Ok(out)
    }

    /// `self += k·other`; systems must already agree.
    pub(crate) fn add_scaled(&mut self, other: &Self, k: i64) {
        for (w, m) in &other.terms {
            self.add_term(w.clone(), k * m);
        }
    }

    pub fn scale(&self, k: i64) -> Self {
        if k == 0 {
            return Self::zero(&self.rs);
        }
        FormalCharacter {
            rs: Arc::clone(&self.rs),
            terms: self.terms.iter().map(|(w, m)| (w.clone(), k * m)).collect(),
        }
    }

    /// Convolution: the coefficient of `ν` is `Σ_{μ+μ'=ν} a(μ) b(μ')`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let (small, large) = if self.terms.len() <= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut out: HashMap<Weight, i64> =
            HashMap::with_capacity(small.terms.len() * large.terms.len() / 2 + 1);
        for (a, ma) in &small.terms {
            for (b, mb) in &large.terms {
                *out.entry(a + b).or_insert(0) += ma * mb;
            }
        }
        out.retain(|_, m| *m != 0);
        FormalCharacter {
            rs: Arc::clone(&self.rs),
            terms: out,
        }
    }

    /// Multiplication by `e^μ`.
    pub fn shift(&self, mu: &Weight) -> Self {
        FormalCharacter {
            rs: Arc::clone(&self.rs),
            terms: self.terms.iter().map(|(w, m)| (w + mu, *m)).collect(),
        }
    }

    /// Frobenius twist `M^{(n)}`: every weight scaled by `p^n`.
    pub fn frobenius_twist(&self, p: u64, n: u32) -> Self {
        let q = prime_power(p, n);
        FormalCharacter {
            rs: Arc::clone(&self.rs),
            terms: self.terms.iter().map(|(w, m)| (w.scaled(q), *m)).collect(),
        }
    }

    /// Entries sorted by the elimination order, highest first.
    pub fn sorted_entries(&self) -> Vec<(Weight, i64)> {
        let mut v: Vec<(Weight, i64)> = self.terms.iter().map(|(w, m)| (w.clone(), *m)).collect();
        self.rs.sort_canonical(&mut v, |e| &e.0);
        v
    }

    /// Dominant weights of the support, highest first.
    pub fn dominant_part(&self) -> Vec<(Weight, i64)> {
        let mut v: Vec<(Weight, i64)> = self
            .terms
            .iter()
            .filter(|(w, _)| w.is_dominant())
            .map(|(w, m)| (w.clone(), *m))
            .collect();
        self.rs.sort_canonical(&mut v, |e| &e.0);
        v
    }

    /// Highest weight in the elimination order with its coefficient.
    pub fn highest_term(&self) -> Option<(&Weight, i64)> {
        self.terms
            .iter()
            .max_by(|(a, _), (b, _)| {
                self.rs
                    .height_scaled(a)
                    .cmp(&self.rs.height_scaled(b))
                    .then_with(|| a.cmp(b))
            })
            .map(|(w, m)| (w, *m))
    }

    /// Multiplicities are constant on W-orbits.
    pub fn is_w_symmetric(&self) -> bool {
        self.terms.iter().all(|(w, m)| {
            if w.is_dominant() {
                self.rs.orbit_vec(w).iter().all(|v| self.terms.get(v) == Some(m))
            } else {
                self.terms.get(&self.rs.dominant(w)) == Some(m)
            }
        })
    }

    /// Coefficients in the basis `{χ(λ)}`; requires a W-symmetric character.
    pub fn weyl_expansion(&self) -> Result<Vec<(Weight, i64)>> {
        if !self.is_w_symmetric() {
            return Err(Error::InvariantViolation(
                "χ-basis expansion needs a W-symmetric character".into(),
            ));
        }
        let mut rem: HashMap<Weight, i64> = self
            .terms
            .iter()
            .filter(|(w, _)| w.is_dominant())
            .map(|(w, m)| (w.clone(), *m))
            .collect();
        let mut out = Vec::new();
        while let Some(top) = max_in_order(&self.rs, rem.keys()) {
            let k = rem[&top];
            for (w, m) in dominant_multiplicities(&self.rs, &top) {
                let e = rem.entry(w.clone()).or_insert(0);
                *e -= k * m;
                if *e == 0 {
                    rem.remove(&w);
                }
            }
            out.push((top, k));
        }
        Ok(out)
    }

    /// Exact quotient `q` with `q·d = self`, by highest-weight elimination in
    /// the χ-basis.
    pub fn divide_by(&self, d: &Self) -> Result<Self> {
        self.check_same(d)?;
        if !self.is_w_symmetric() || !d.is_w_symmetric() {
            return Err(Error::NotDivisible("operands must be W-symmetric".into()));
        }
        let (dtop, dk) = match d.highest_term() {
            Some((w, k)) => (w.clone(), k),
            None => return Err(Error::NotDivisible("division by zero character".into())),
        };
        if dk != 1 || !dtop.is_dominant() {
            return Err(Error::NotDivisible(format!(
                "divisor highest weight {dtop} has multiplicity {dk}"
            )));
        }
        let mut rem = self.clone();
        let mut quotient = Self::zero(&self.rs);
        while let Some((top, k)) = rem.highest_term().map(|(w, k)| (w.clone(), k)) {
            let q = &top - &dtop;
            if !q.is_dominant() {
                return Err(Error::NotDivisible(format!(
                    "remainder has highest weight {top} not above {dtop}"
                )));
            }
            let chi = weyl_character(&self.rs, &q)?;
            rem.add_scaled(&chi.mul_unchecked(d), -k);
            quotient.add_scaled(&chi, k);
        }
        Ok(quotient)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&CharacterJson {
            system: self.rs.name(),
            entries: self
                .sorted_entries()
                .into_iter()
                .map(|(wt, mult)| EntryJson { wt, mult })
                .collect(),
        })
        .expect("character serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let parsed: CharacterJson = serde_json::from_str(s)?;
        let rs = RootSystem::parse(&parsed.system)?;
        let mut c = Self::zero(&rs);
        for e in parsed.entries {
            rs.check_weight(&e.wt)?;
            if e.mult == 0 {
                return Err(Error::Schema(format!("zero multiplicity stored at {}", e.wt)));
            }
            if c.terms.contains_key(&e.wt) {
                return Err(Error::Schema(format!("duplicate weight {}", e.wt)));
            }
            c.terms.insert(e.wt, e.mult);
        }
        Ok(c)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CharacterJson {
    system: String,
    entries: Vec<EntryJson>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EntryJson {
    wt: Weight,
    mult: i64,
}

fn max_in_order<'a>(rs: &RootSystem, ws: impl Iterator<Item = &'a Weight>) -> Option<Weight> {
    ws.max_by(|a, b| {
        rs.height_scaled(a)
            .cmp(&rs.height_scaled(b))
            .then_with(|| a.cmp(b))
    })
    .cloned()
}

/// Dominant weights `μ ≤ λ` with their multiplicities in `χ(λ)`, by
/// Freudenthal's recursion. Highest first.
pub fn dominant_multiplicities(rs: &RootSystem, lambda: &Weight) -> Vec<(Weight, i64)> {
    // dominant weights below λ, reached by subtracting positive roots
    let mut doms: Vec<Weight> = vec![lambda.clone()];
    let mut seen: std::collections::HashSet<Weight> = doms.iter().cloned().collect();
    let mut k = 0;
    while k < doms.len() {
        let mu = doms[k].clone();
        for beta in rs.positive_roots() {
            let nu = &mu - &beta.weight;
            if nu.is_dominant() && seen.insert(nu.clone()) {
                doms.push(nu);
            }
        }
        k += 1;
    }
    rs.sort_canonical(&mut doms, |w| w);

    let lr = lambda + rs.rho();
    let top = rs.form_scaled(&lr, &lr);
    let mut mult: HashMap<Weight, i64> = HashMap::with_capacity(doms.len());
    let mut out = Vec::with_capacity(doms.len());
    for mu in doms {
        let m = if &mu == lambda {
            1
        } else {
            let mr = &mu + rs.rho();
            let den = top - rs.form_scaled(&mr, &mr);
            let mut num = 0i64;
            for beta in rs.positive_roots() {
                let mut nu = &mu + &beta.weight;
                while let Some(&m) = mult.get(&rs.dominant(&nu)) {
                    num += 2 * rs.form_scaled(&nu, &beta.weight) * m;
                    nu += &beta.weight;
                }
            }
            debug_assert!(den > 0 && num % den == 0, "Freudenthal division at {mu}");
            num / den
        };
        if m != 0 {
            mult.insert(mu.clone(), m);
            out.push((mu, m));
        }
    }
    out
}

/// `χ(λ) = ch ∇(λ)`.
pub fn weyl_character(rs: &Arc<RootSystem>, lambda: &Weight) -> Result<FormalCharacter> {
    rs.check_weight(lambda)?;
    if !lambda.is_dominant() {
        return Err(Error::NotDominant(lambda.clone()));
    }
    if let Some(t) = rs.weyl_cache.read().expect("cache lock").get(lambda) {
        return Ok(FormalCharacter {
            rs: Arc::clone(rs),
            terms: (**t).clone(),
        });
    }
    let mut terms = HashMap::new();
    for (mu, m) in dominant_multiplicities(rs, lambda) {
        for w in rs.orbit_vec(&mu) {
            terms.insert(w, m);
        }
    }
    rs.weyl_cache
        .write()
        .expect("cache lock")
        .insert(lambda.clone(), Arc::new(terms.clone()));
    Ok(FormalCharacter {
        rs: Arc::clone(rs),
        terms,
    })
}

/// Dominant parts of every memoized `χ(λ)`, sorted by `λ`.
pub fn cached_weyl_characters(rs: &RootSystem) -> Vec<(Weight, Vec<(Weight, i64)>)> {
    let cache = rs.weyl_cache.read().expect("cache lock");
    let mut out: Vec<_> = cache
        .iter()
        .map(|(l, t)| {
            let mut dom: Vec<(Weight, i64)> = t
                .iter()
                .filter(|(w, _)| w.is_dominant())
                .map(|(w, m)| (w.clone(), *m))
                .collect();
            dom.sort();
            (l.clone(), dom)
        })
        .collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

/// Seeds the memo table with a previously computed `χ(λ)` given by its
/// dominant multiplicities. Entries that fail a dimension check against the
/// Weyl formula are rejected.
pub fn seed_weyl_character(rs: &RootSystem, lambda: &Weight, dominant: &[(Weight, i64)]) -> Result<()> {
    rs.check_weight(lambda)?;
    let mut terms = HashMap::new();
    let mut dim: i128 = 0;
    for (mu, m) in dominant {
        rs.check_weight(mu)?;
        if !mu.is_dominant() || !rs.root_le(mu, lambda) {
            return Err(Error::Schema(format!("{mu} cannot occur in χ{lambda}")));
        }
        for w in rs.orbit_vec(mu) {
            terms.insert(w, *m);
            dim += i128::from(*m);
        }
    }
    if dim != rs.weyl_dimension(lambda) || terms.get(lambda) != Some(&1) {
        return Err(Error::Schema(format!("cached χ{lambda} has the wrong shape")));
    }
    rs.weyl_cache
        .write()
        .expect("cache lock")
        .insert(lambda.clone(), Arc::new(terms));
    Ok(())
}

/// `Σ (−1)^i ch R^i Ind_B^G(μ)`: `±χ` of the dot-dominant representative, or
/// zero when `μ + ρ` is singular.
pub fn euler_character(rs: &Arc<RootSystem>, mu: &Weight) -> Result<FormalCharacter> {
    rs.check_weight(mu)?;
    match dot_dominantize(rs, mu) {
        DotNormal::Singular => Ok(FormalCharacter::zero(rs)),
        DotNormal::Regular { sign, weight } => Ok(weyl_character(rs, &weight)?.scale(sign)),
    }
}

/// `ch St_n = χ((p^n − 1)ρ)`.
pub fn steinberg_character(rs: &Arc<RootSystem>, p: u64, n: u32) -> FormalCharacter {
    let top = rs.rho().scaled(prime_power(p, n) - 1);
    weyl_character(rs, &top).expect("(p^n-1)ρ is dominant")
}

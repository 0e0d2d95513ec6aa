//! Characters of the simple modules `L(λ)`.
//!
//! Non-restricted weights are reduced to restricted digits by Steinberg's
//! tensor product theorem. A restricted digit is resolved, in order, by the
//! bottom-alcove shortcut (`L = ∇`), an ingested decomposition table, or the
//! Jantzen sum formula. When the sum formula leaves a multiplicity undecided
//! the result is marked [`CharStatus::Ambiguous`]; nothing is guessed.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::path::Path;
use std::sync::{Arc, RwLock};

use serde::{Deserialize, Serialize};

use crate::charring::{dominant_multiplicities, weyl_character, FormalCharacter};
use crate::error::{Error, Result};
use crate::rootsys::RootSystem;
use crate::weights::{
    check_prime, dot_dominantize, in_bottom_alcove, is_restricted, restricted_weights, split,
    DotNormal, Weight,
};

/// Upper bound on the number of multiplicity assignments tried when the sum
/// formula leaves several composition multiplicities open.
const MAX_CANDIDATES: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CharStatus {
    Exact,
    Ambiguous,
}

#[derive(Clone, Debug)]
pub struct SimpleCharResult {
    pub character: FormalCharacter,
    pub status: CharStatus,
    pub notes: String,
}

impl SimpleCharResult {
    pub fn is_exact(&self) -> bool {
        self.status == CharStatus::Exact
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Computed,
    Ingested,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Computed => "COMPUTED",
            Provenance::Ingested => "INGESTED",
        })
    }
}

/// One row `[χ(λ) : L(μ)]` of a decomposition matrix, `μ ≤ λ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub lambda: Weight,
    pub factors: Vec<(Weight, i64)>,
    pub provenance: Provenance,
}

/// Decomposition numbers for restricted weights of one `(system, p)`.
#[derive(Clone, Debug)]
pub struct DecompTable {
    system: String,
    p: u64,
    rows: BTreeMap<Weight, TableRow>,
    ambiguous: BTreeSet<Weight>,
}

impl PartialEq for DecompTable {
    fn eq(&self, other: &Self) -> bool {
        self.system == other.system
            && self.p == other.p
            && self.rows.len() == other.rows.len()
            && self
                .rows
                .iter()
                .zip(&other.rows)
                .all(|((a, ra), (b, rb))| a == b && ra.factors == rb.factors)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TableJson {
    system: String,
    p: u64,
    rows: Vec<RowJson>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RowJson {
    lambda: Weight,
    factors: Vec<FactorJson>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FactorJson {
    mu: Weight,
    mult: i64,
}

impl DecompTable {
    pub fn new(system: impl Into<String>, p: u64) -> Self {
        DecompTable {
            system: system.into(),
            p,
            rows: BTreeMap::new(),
            ambiguous: BTreeSet::new(),
        }
    }

    pub fn system(&self) -> &str {
        &self.system
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn rows(&self) -> impl Iterator<Item = &TableRow> {
        self.rows.values()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn row(&self, lambda: &Weight) -> Option<&TableRow> {
        self.rows.get(lambda)
    }

    /// Restricted weights the solver could not pin down.
    pub fn ambiguous(&self) -> &BTreeSet<Weight> {
        &self.ambiguous
    }

    pub fn insert(&mut self, row: TableRow) {
        self.ambiguous.remove(&row.lambda);
        self.rows.insert(row.lambda.clone(), row);
    }

    /// Merges `other` into `self`. Ingested rows win over computed ones;
    /// disagreements are logged.
    pub fn merge(&mut self, other: DecompTable) {
        for (lambda, row) in other.rows {
            match self.rows.get(&lambda) {
                Some(existing) if existing.factors != row.factors => {
                    log::warn!(
                        "decomposition table conflict at {lambda}: {} row {:?} vs {} row {:?}",
                        existing.provenance,
                        existing.factors,
                        row.provenance,
                        row.factors
                    );
                    if row.provenance == Provenance::Ingested
                        || existing.provenance != Provenance::Ingested
                    {
                        self.insert(row);
                    }
                }
                Some(_) => {
                    if row.provenance == Provenance::Ingested {
                        self.insert(row);
                    }
                }
                None => self.insert(row),
            }
        }
        for w in other.ambiguous {
            if !self.rows.contains_key(&w) {
                self.ambiguous.insert(w);
            }
        }
    }

    pub fn to_json(&self) -> String {
        let rows = self
            .rows
            .values()
            .map(|r| RowJson {
                lambda: r.lambda.clone(),
                factors: r
                    .factors
                    .iter()
                    .map(|(mu, mult)| FactorJson {
                        mu: mu.clone(),
                        mult: *mult,
                    })
                    .collect(),
            })
            .collect();
        serde_json::to_string(&TableJson {
            system: self.system.clone(),
            p: self.p,
            rows,
        })
        .expect("table serializes")
    }

    /// Parses and validates a table. Rows are tagged with `provenance`.
    /// Any violation rejects the whole input.
    pub fn from_json(s: &str, rs: &RootSystem, provenance: Provenance) -> Result<Self> {
        let parsed: TableJson =
            serde_json::from_str(s).map_err(|e| Error::Schema(e.to_string()))?;
        if parsed.system != rs.name() {
            return Err(Error::Schema(format!(
                "table is for {}, expected {}",
                parsed.system,
                rs.name()
            )));
        }
        check_prime(parsed.p).map_err(|e| Error::Schema(e.to_string()))?;
        let mut table = DecompTable::new(parsed.system, parsed.p);
        for row in parsed.rows {
            let lambda = row.lambda;
            rs.check_weight(&lambda)
                .map_err(|e| Error::Schema(e.to_string()))?;
            if !is_restricted(&lambda, parsed.p, 1) {
                return Err(Error::InvariantViolation(format!(
                    "row {lambda} is not a restricted weight"
                )));
            }
            if table.rows.contains_key(&lambda) {
                return Err(Error::Schema(format!("duplicate row {lambda}")));
            }
            let mut seen = BTreeSet::new();
            let mut factors = Vec::new();
            for f in row.factors {
                rs.check_weight(&f.mu)
                    .map_err(|e| Error::Schema(e.to_string()))?;
                if !seen.insert(f.mu.clone()) {
                    return Err(Error::Schema(format!("duplicate factor {} in row {lambda}", f.mu)));
                }
                if f.mult < 0 {
                    return Err(Error::InvariantViolation(format!(
                        "negative multiplicity {} for {} in row {lambda}",
                        f.mult, f.mu
                    )));
                }
                if !f.mu.is_dominant() {
                    return Err(Error::InvariantViolation(format!(
                        "factor {} in row {lambda} is not dominant",
                        f.mu
                    )));
                }
                if !rs.root_le(&f.mu, &lambda) {
                    return Err(Error::InvariantViolation(format!(
                        "factor {} is not below {lambda} in the root order",
                        f.mu
                    )));
                }
                if f.mu == lambda && f.mult != 1 {
                    return Err(Error::InvariantViolation(format!(
                        "diagonal entry of row {lambda} is {}",
                        f.mult
                    )));
                }
                if f.mult > 0 {
                    factors.push((f.mu, f.mult));
                }
            }
            if !seen.contains(&lambda) {
                return Err(Error::InvariantViolation(format!(
                    "row {lambda} lacks its diagonal entry"
                )));
            }
            rs.sort_canonical(&mut factors, |f| &f.0);
            table.rows.insert(
                lambda.clone(),
                TableRow {
                    lambda,
                    factors,
                    provenance,
                },
            );
        }
        Ok(table)
    }

    pub fn export(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }

    pub fn ingest(path: impl AsRef<Path>, rs: &RootSystem) -> Result<Self> {
        let s = std::fs::read_to_string(path)?;
        Self::from_json(&s, rs, Provenance::Ingested)
    }

    /// Tables shipped with the crate, produced by the Jantzen solver.
    pub fn bundled(rs: &RootSystem, p: u64) -> Option<Self> {
        let raw = match (rs.name().as_str(), p) {
            ("A2", 2) => include_str!("../data/A2_p2.json"),
            ("A2", 3) => include_str!("../data/A2_p3.json"),
            ("A2", 5) => include_str!("../data/A2_p5.json"),
            ("B2", 2) => include_str!("../data/B2_p2.json"),
            ("B2", 3) => include_str!("../data/B2_p3.json"),
            ("B2", 5) => include_str!("../data/B2_p5.json"),
            ("B2", 7) => include_str!("../data/B2_p7.json"),
            _ => return None,
        };
        Some(Self::from_json(raw, rs, Provenance::Ingested).expect("bundled table is valid"))
    }
}

/// Simple characters for one root system and prime, memoized.
pub struct Simples {
    rs: Arc<RootSystem>,
    p: u64,
    table: RwLock<DecompTable>,
    cache: RwLock<HashMap<Weight, Arc<SimpleCharResult>>>,
}

impl fmt::Debug for Simples {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Simples")
            .field("system", &self.rs.name())
            .field("p", &self.p)
            .finish()
    }
}

enum RowOutcome {
    Exact(Vec<(Weight, i64)>, String),
    Ambiguous(String),
}

impl Simples {
    pub fn new(rs: &Arc<RootSystem>, p: u64) -> Result<Self> {
        check_prime(p)?;
        Ok(Simples {
            rs: Arc::clone(rs),
            p,
            table: RwLock::new(DecompTable::new(rs.name(), p)),
            cache: RwLock::new(HashMap::new()),
        })
    }

    /// [`Simples::new`] with the shipped table for this system and prime
    /// already ingested, when there is one.
    pub fn with_bundled(rs: &Arc<RootSystem>, p: u64) -> Result<Self> {
        let s = Self::new(rs, p)?;
        if let Some(t) = DecompTable::bundled(rs, p) {
            s.ingest(t)?;
        }
        Ok(s)
    }

    pub fn system(&self) -> &Arc<RootSystem> {
        &self.rs
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Installs an ingested table after checking that every row produces a
    /// nonnegative simple character with highest weight `λ`. Nothing is
    /// merged if any row fails.
    pub fn ingest(&self, table: DecompTable) -> Result<()> {
        if table.system != self.rs.name() || table.p != self.p {
            return Err(Error::Schema(format!(
                "table for {} p={} does not match {} p={}",
                table.system,
                table.p,
                self.rs.name(),
                self.p
            )));
        }
        let mut merged = self.table.read().expect("table lock").clone();
        merged.merge(table.clone());
        let trial = Simples {
            rs: Arc::clone(&self.rs),
            p: self.p,
            table: RwLock::new(merged.clone()),
            cache: RwLock::new(HashMap::new()),
        };
        for row in table.rows() {
            let r = trial.simple_character(&row.lambda)?;
            if r.is_exact() {
                let c = &r.character;
                if !c.is_nonnegative() || c.coefficient(&row.lambda) != 1 || c.highest_term().map(|t| t.0) != Some(&row.lambda) {
                    return Err(Error::InvariantViolation(format!(
                        "row {} yields an invalid simple character",
                        row.lambda
                    )));
                }
            }
        }
        *self.table.write().expect("table lock") = merged;
        self.cache.write().expect("cache lock").clear();
        Ok(())
    }

    pub fn table(&self) -> DecompTable {
        self.table.read().expect("table lock").clone()
    }

    /// `ch L(λ)` for dominant `λ`.
    pub fn simple_character(&self, lambda: &Weight) -> Result<Arc<SimpleCharResult>> {
        self.rs.check_weight(lambda)?;
        if !lambda.is_dominant() {
            return Err(Error::NotDominant(lambda.clone()));
        }
        if let Some(r) = self.cache.read().expect("cache lock").get(lambda) {
            return Ok(Arc::clone(r));
        }
        let result = if is_restricted(lambda, self.p, 1) {
            self.restricted(lambda)?
        } else {
            self.tensor_product(lambda)?
        };
        let result = Arc::new(result);
        self.cache
            .write()
            .expect("cache lock")
            .insert(lambda.clone(), Arc::clone(&result));
        Ok(result)
    }

    /// Like [`Simples::simple_character`] but fails unless the result is exact.
    pub fn exact_character(&self, lambda: &Weight) -> Result<FormalCharacter> {
        let r = self.simple_character(lambda)?;
        if r.is_exact() {
            Ok(r.character.clone())
        } else {
            Err(Error::SimpleCharUnavailable(lambda.clone()))
        }
    }

    /// Resolves every restricted weight up front.
    pub fn prepare(&self) -> Result<()> {
        let mut ws = restricted_weights(self.rs.rank(), self.p, 1);
        ws.sort_by_key(|w| self.rs.height_scaled(w));
        for w in ws {
            self.simple_character(&w)?;
        }
        Ok(())
    }

    fn tensor_product(&self, lambda: &Weight) -> Result<SimpleCharResult> {
        let s = split(lambda, self.p, 1);
        let low = self.simple_character(&s.lambda0)?;
        let high = self.simple_character(&s.lambda1)?;
        let status = if low.is_exact() && high.is_exact() {
            CharStatus::Exact
        } else {
            CharStatus::Ambiguous
        };
        Ok(SimpleCharResult {
            character: low
                .character
                .mul_unchecked(&high.character.frobenius_twist(self.p, 1)),
            status,
            notes: "Steinberg tensor product".into(),
        })
    }

    fn restricted(&self, lambda: &Weight) -> Result<SimpleCharResult> {
        if in_bottom_alcove(&self.rs, lambda, self.p)? {
            return Ok(SimpleCharResult {
                character: weyl_character(&self.rs, lambda)?,
                status: CharStatus::Exact,
                notes: "bottom alcove".into(),
            });
        }
        let ingested = self
            .table
            .read()
            .expect("table lock")
            .row(lambda)
            .map(|r| r.factors.clone());
        let (factors, notes) = match ingested {
            Some(f) => (f, "decomposition table".to_string()),
            None => match self.jantzen_row(lambda)? {
                RowOutcome::Exact(f, notes) => (f, notes),
                RowOutcome::Ambiguous(notes) => {
                    return Ok(SimpleCharResult {
                        character: weyl_character(&self.rs, lambda)?,
                        status: CharStatus::Ambiguous,
                        notes,
                    })
                }
            },
        };
        self.character_from_row(lambda, &factors, notes)
    }

    /// `ch L(λ) = χ(λ) − Σ_{μ<λ} d_{λμ} ch L(μ)`.
    fn character_from_row(&self, lambda: &Weight, factors: &[(Weight, i64)], notes: String) -> Result<SimpleCharResult> {
        let mut c = weyl_character(&self.rs, lambda)?;
        let mut status = CharStatus::Exact;
        for (mu, d) in factors {
            if mu == lambda {
                continue;
            }
            let l = self.simple_character(mu)?;
            if !l.is_exact() {
                status = CharStatus::Ambiguous;
            }
            c.add_scaled(&l.character, -d);
        }
        Ok(SimpleCharResult {
            character: c,
            status,
            notes,
        })
    }

    fn dominant_simple(&self, mu: &Weight) -> Result<Option<HashMap<Weight, i64>>> {
        let l = self.simple_character(mu)?;
        Ok(l.is_exact().then(|| {
            l.character
                .terms()
                .filter(|(w, _)| w.is_dominant())
                .map(|(w, m)| (w.clone(), *m))
                .collect()
        }))
    }

    /// Jantzen sum `Σ_{β>0} Σ_{0<mp<⟨λ+ρ,β^∨⟩} ν_p(mp) χ(s_{β,mp}·λ)` in the
    /// χ-basis.
    pub fn jantzen_sum(&self, lambda: &Weight) -> BTreeMap<Weight, i64> {
        let p = self.p as i64;
        let shifted = lambda + self.rs.rho();
        let mut out: BTreeMap<Weight, i64> = BTreeMap::new();
        for beta in self.rs.positive_roots() {
            let a = self.rs.pair(&shifted, beta);
            let mut mp = p;
            while mp < a {
                let target = lambda - &beta.weight.scaled(a - mp);
                if let DotNormal::Regular { sign, weight } = dot_dominantize(&self.rs, &target) {
                    let e = out.entry(weight.clone()).or_insert(0);
                    *e += sign * valuation(mp, p);
                    if *e == 0 {
                        out.remove(&weight);
                    }
                }
                mp += p;
            }
        }
        out
    }

    fn jantzen_row(&self, lambda: &Weight) -> Result<RowOutcome> {
        // dominant part of the sum formula
        let mut rem: HashMap<Weight, i64> = HashMap::new();
        for (nu, a) in self.jantzen_sum(lambda) {
            for (w, m) in dominant_multiplicities(&self.rs, &nu) {
                *rem.entry(w).or_insert(0) += a * m;
            }
        }
        rem.retain(|_, m| *m != 0);

        // expand in the basis of simple characters
        let mut coeffs: Vec<(Weight, i64)> = Vec::new();
        let mut simple_dom: HashMap<Weight, HashMap<Weight, i64>> = HashMap::new();
        while let Some(top) = rem
            .keys()
            .max_by(|a, b| {
                self.rs
                    .height_scaled(a)
                    .cmp(&self.rs.height_scaled(b))
                    .then_with(|| a.cmp(b))
            })
            .cloned()
        {
            let k = rem[&top];
            if k < 0 {
                return Ok(RowOutcome::Ambiguous(format!(
                    "sum formula has negative coefficient {k} at L{top}"
                )));
            }
            let Some(dom) = self.dominant_simple(&top)? else {
                return Ok(RowOutcome::Ambiguous(format!("L{top} is ambiguous")));
            };
            for (w, m) in &dom {
                let e = rem.entry(w.clone()).or_insert(0);
                *e -= k * m;
                if *e == 0 {
                    rem.remove(w);
                }
            }
            simple_dom.insert(top.clone(), dom);
            coeffs.push((top, k));
        }

        let open: Vec<usize> = (0..coeffs.len()).filter(|&i| coeffs[i].1 >= 2).collect();
        let mut row = vec![(lambda.clone(), 1)];
        if open.is_empty() {
            row.extend(coeffs.iter().cloned());
            self.rs.sort_canonical(&mut row, |f| &f.0);
            return Ok(RowOutcome::Exact(row, "Jantzen sum formula".into()));
        }

        // 1 ≤ d_μ ≤ c_μ for open μ; keep assignments giving a nonnegative ch L(λ)
        let total: usize = open
            .iter()
            .map(|&i| coeffs[i].1 as usize)
            .try_fold(1usize, |acc, c| acc.checked_mul(c))
            .unwrap_or(usize::MAX);
        if total > MAX_CANDIDATES {
            return Ok(RowOutcome::Ambiguous(format!(
                "{total} candidate multiplicity assignments"
            )));
        }
        let chi: HashMap<Weight, i64> = dominant_multiplicities(&self.rs, lambda).into_iter().collect();
        let mut survivors = Vec::new();
        let mut choice: Vec<i64> = vec![1; open.len()];
        loop {
            let mut d: Vec<i64> = coeffs.iter().map(|c| c.1).collect();
            for (slot, &i) in open.iter().enumerate() {
                d[i] = choice[slot];
            }
            let mut l = chi.clone();
            for ((mu, _), k) in coeffs.iter().zip(&d) {
                for (w, m) in &simple_dom[mu] {
                    *l.entry(w.clone()).or_insert(0) -= k * m;
                }
            }
            if l.values().all(|&m| m >= 0) {
                survivors.push(d);
            }
            // odometer over the open slots
            let mut slot = 0;
            loop {
                if slot == open.len() {
                    break;
                }
                if choice[slot] < coeffs[open[slot]].1 {
                    choice[slot] += 1;
                    break;
                }
                choice[slot] = 1;
                slot += 1;
            }
            if slot == open.len() {
                break;
            }
        }
        match survivors.as_slice() {
            [d] => {
                row.extend(coeffs.iter().zip(d).map(|((mu, _), &k)| (mu.clone(), k)));
                self.rs.sort_canonical(&mut row, |f| &f.0);
                Ok(RowOutcome::Exact(row, "Jantzen sum formula + positivity".into()))
            }
            _ => Ok(RowOutcome::Ambiguous(format!(
                "{} multiplicity assignments consistent with the sum formula",
                survivors.len()
            ))),
        }
    }

    /// Decomposition numbers for restricted weights with all coordinates at
    /// most `bound`. Undetermined weights are listed in
    /// [`DecompTable::ambiguous`] and get no row.
    pub fn jantzen_solver(&self, bound: i64) -> Result<DecompTable> {
        let mut table = DecompTable::new(self.rs.name(), self.p);
        let mut ws: Vec<Weight> = restricted_weights(self.rs.rank(), self.p, 1)
            .into_iter()
            .filter(|w| w.0.iter().all(|&c| c <= bound))
            .collect();
        ws.sort_by_key(|w| self.rs.height_scaled(w));
        for lambda in ws {
            // make sure lower simple characters are resolved first
            self.simple_character(&lambda)?;
            let outcome = if in_bottom_alcove(&self.rs, &lambda, self.p)? {
                RowOutcome::Exact(vec![(lambda.clone(), 1)], String::new())
            } else {
                self.jantzen_row(&lambda)?
            };
            match outcome {
                RowOutcome::Exact(factors, _) => table.insert(TableRow {
                    lambda,
                    factors,
                    provenance: Provenance::Computed,
                }),
                RowOutcome::Ambiguous(why) => {
                    log::info!("L{lambda} left undetermined: {why}");
                    table.ambiguous.insert(lambda);
                }
            }
        }
        Ok(table)
    }
}

/// `ν_p(n)` for `n > 0`.
fn valuation(mut n: i64, p: i64) -> i64 {
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charring::steinberg_character;

    fn w(v: &[i64]) -> Weight {
        Weight(v.to_vec())
    }

    #[test]
    fn bundled_tables_match_solver() {
        for (t, p) in [("A2", 2), ("A2", 3), ("A2", 5), ("B2", 2), ("B2", 3), ("B2", 5), ("B2", 7)] {
            let rs = RootSystem::parse(t).unwrap();
            let fresh = Simples::new(&rs, p).unwrap().jantzen_solver(i64::MAX).unwrap();
            assert!(fresh.ambiguous().is_empty());
            assert_eq!(DecompTable::bundled(&rs, p).unwrap(), fresh, "{t} p={p}");
        }
        let g2 = RootSystem::parse("G2").unwrap();
        assert!(DecompTable::bundled(&g2, 3).is_none());
    }

    #[test]
    fn a2_p3_adjoint_loses_the_trivial() {
        let a2 = RootSystem::parse("A2").unwrap();
        let s = Simples::with_bundled(&a2, 3).unwrap();
        assert_eq!(s.exact_character(&w(&[1, 1])).unwrap().dimension(), 7);
    }

    #[test]
    fn bottom_alcove_is_weyl() {
        let a2 = RootSystem::parse("A2").unwrap();
        let s = Simples::new(&a2, 5).unwrap();
        let r = s.simple_character(&w(&[1, 1])).unwrap();
        assert!(r.is_exact());
        assert_eq!(r.character, weyl_character(&a2, &w(&[1, 1])).unwrap());
    }

    #[test]
    fn rank_one_twist() {
        let a1 = RootSystem::parse("A1").unwrap();
        let s = Simples::new(&a1, 3).unwrap();
        let c = s.exact_character(&w(&[3])).unwrap();
        assert_eq!(c, FormalCharacter::from_terms(&a1, [(w(&[3]), 1), (w(&[-3]), 1)]));
    }

    #[test]
    fn steinberg_is_simple() {
        for name in ["A2", "B2"] {
            let rs = RootSystem::parse(name).unwrap();
            let s = Simples::new(&rs, 2).unwrap();
            let c = s.exact_character(rs.rho()).unwrap();
            assert_eq!(c, steinberg_character(&rs, 2, 1));
            assert_eq!(c.dimension(), 1 << rs.positive_roots().len());
        }
    }

    #[test]
    fn rank_one_sum_formula() {
        // χ(2) = L(2) + L(0) for A1, p = 2
        let a1 = RootSystem::parse("A1").unwrap();
        let s = Simples::new(&a1, 2).unwrap();
        assert_eq!(s.jantzen_sum(&w(&[2])), BTreeMap::from([(w(&[0]), 1)]));
        let l2 = s.exact_character(&w(&[2])).unwrap();
        assert_eq!(l2, FormalCharacter::from_terms(&a1, [(w(&[2]), 1), (w(&[-2]), 1)]));
    }

    #[test]
    fn b2_p2_long_fundamental() {
        let b2 = RootSystem::parse("B2").unwrap();
        let s = Simples::new(&b2, 2).unwrap();
        assert_eq!(s.exact_character(&w(&[0, 1])).unwrap().dimension(), 4);
        assert_eq!(s.exact_character(&w(&[1, 0])).unwrap().dimension(), 4);
        let t = s.jantzen_solver(1).unwrap();
        assert_eq!(t.len(), 4);
        assert_eq!(
            t.row(&w(&[0, 1])).unwrap().factors,
            vec![(w(&[0, 1]), 1), (w(&[0, 0]), 1)]
        );
    }

    #[test]
    fn solver_rows_unitriangular() {
        for (name, p) in [("A2", 3), ("B2", 3), ("G2", 3)] {
            let rs = RootSystem::parse(name).unwrap();
            let s = Simples::new(&rs, p).unwrap();
            let t = s.jantzen_solver(p as i64).unwrap();
            for row in t.rows() {
                assert_eq!(row.factors[0], (row.lambda.clone(), 1), "{name}");
                assert!(row.factors.iter().all(|(mu, m)| *m > 0 && rs.root_le(mu, &row.lambda)));
            }
        }
    }

    #[test]
    fn ingest_rejects_bad_rows() {
        let b2 = RootSystem::parse("B2").unwrap();
        let neg = r#"{"system":"B2","p":2,"rows":[{"lambda":[0,1],"factors":[{"mu":[0,1],"mult":1},{"mu":[0,0],"mult":-1}]}]}"#;
        assert!(matches!(
            DecompTable::from_json(neg, &b2, Provenance::Ingested),
            Err(Error::InvariantViolation(_))
        ));
        let incomparable = r#"{"system":"B2","p":2,"rows":[{"lambda":[0,1],"factors":[{"mu":[0,1],"mult":1},{"mu":[1,0],"mult":1}]}]}"#;
        assert!(matches!(
            DecompTable::from_json(incomparable, &b2, Provenance::Ingested),
            Err(Error::InvariantViolation(_))
        ));
        let no_diag = r#"{"system":"B2","p":2,"rows":[{"lambda":[0,1],"factors":[{"mu":[0,0],"mult":1}]}]}"#;
        assert!(DecompTable::from_json(no_diag, &b2, Provenance::Ingested).is_err());
        let wrong_system = r#"{"system":"A2","p":2,"rows":[]}"#;
        assert!(matches!(
            DecompTable::from_json(wrong_system, &b2, Provenance::Ingested),
            Err(Error::Schema(_))
        ));
        let garbage = r#"{"system":"B2","p":2,"rowz":[]}"#;
        assert!(matches!(
            DecompTable::from_json(garbage, &b2, Provenance::Ingested),
            Err(Error::Schema(_))
        ));
    }

    #[test]
    fn ingest_rejects_inconsistent_character() {
        // d = 2 would make ch L(0,1) negative at the zero weight
        let b2 = RootSystem::parse("B2").unwrap();
        let s = Simples::new(&b2, 2).unwrap();
        let bad = r#"{"system":"B2","p":2,"rows":[{"lambda":[0,1],"factors":[{"mu":[0,1],"mult":1},{"mu":[0,0],"mult":2}]}]}"#;
        let t = DecompTable::from_json(bad, &b2, Provenance::Ingested).unwrap();
        assert!(matches!(s.ingest(t), Err(Error::InvariantViolation(_))));
        assert!(s.table().is_empty());
    }

    #[test]
    fn merge_prefers_ingested() {
        let b2 = RootSystem::parse("B2").unwrap();
        let mut computed = DecompTable::new("B2", 2);
        computed.insert(TableRow {
            lambda: w(&[0, 1]),
            factors: vec![(w(&[0, 1]), 1)],
            provenance: Provenance::Computed,
        });
        let ingested = DecompTable::from_json(
            r#"{"system":"B2","p":2,"rows":[{"lambda":[0,1],"factors":[{"mu":[0,1],"mult":1},{"mu":[0,0],"mult":1}]}]}"#,
            &b2,
            Provenance::Ingested,
        )
        .unwrap();
        computed.merge(ingested.clone());
        assert_eq!(computed.row(&w(&[0, 1])).unwrap().provenance, Provenance::Ingested);
        assert_eq!(computed, ingested);
    }

    #[test]
    fn export_ingest_round_trip() {
        let b2 = RootSystem::parse("B2").unwrap();
        let s = Simples::new(&b2, 3).unwrap();
        let t = s.jantzen_solver(2).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("b2.json");
        t.export(&path).unwrap();
        let back = DecompTable::ingest(&path, &b2).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.to_json(), t.to_json());
    }

    #[test]
    fn valuations() {
        assert_eq!(valuation(8, 2), 3);
        assert_eq!(valuation(9, 3), 2);
        assert_eq!(valuation(10, 5), 1);
    }
}

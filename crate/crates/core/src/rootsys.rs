//! Root systems built from Cartan types.
//!
//! Simple roots are labelled as in Bourbaki, with one exception: `B2` puts the
//! short simple root first, so `B2` and `C2` coincide and `(a, b)` means
//! `a ω_short + b ω_long`.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;
use std::ops::Range;
use std::str::FromStr;
use std::sync::{Arc, RwLock};

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::weights::Weight;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    fn from_char(c: char) -> Option<Self> {
        Some(match c.to_ascii_uppercase() {
            'A' => Family::A,
            'B' => Family::B,
            'C' => Family::C,
            'D' => Family::D,
            'E' => Family::E,
            'F' => Family::F,
            'G' => Family::G,
            _ => return None,
        })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// An irreducible Cartan type such as `B2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SimpleType {
    pub family: Family,
    pub rank: usize,
}

impl SimpleType {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::B | Family::C => rank >= 2,
            Family::D => rank >= 3,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if ok {
            Ok(SimpleType { family, rank })
        } else {
            Err(Error::InvalidType(format!("{family}{rank}")))
        }
    }

    /// Entries `⟨α_i, α_j^∨⟩` for `i ≠ j`, 0-indexed.
    fn off_diagonal(&self) -> Vec<(usize, usize, i64)> {
        let n = self.rank;
        let mut out = Vec::new();
        let mut link = |i: usize, j: usize, ij: i64, ji: i64| {
            out.push((i, j, ij));
            out.push((j, i, ji));
        };
        let chain = |upto: usize, link: &mut dyn FnMut(usize, usize, i64, i64)| {
            for i in 0..upto {
                link(i, i + 1, -1, -1);
            }
        };
        match (self.family, n) {
            (Family::A, _) => chain(n - 1, &mut link),
            // short root first
            (Family::B, 2) | (Family::C, _) => {
                chain(n - 2, &mut link);
                // ⟨α_n, α_{n-1}^∨⟩ = -2 with α_n long
                link(n - 2, n - 1, -1, -2);
            }
            (Family::B, _) => {
                chain(n - 2, &mut link);
                link(n - 2, n - 1, -2, -1);
            }
            (Family::D, _) => {
                chain(n - 2, &mut link);
                link(n - 3, n - 1, -1, -1);
            }
            (Family::E, _) => {
                link(0, 2, -1, -1);
                link(1, 3, -1, -1);
                for i in 2..n - 1 {
                    link(i, i + 1, -1, -1);
                }
            }
            (Family::F, _) => {
                link(0, 1, -1, -1);
                link(1, 2, -2, -1);
                link(2, 3, -1, -1);
            }
            (Family::G, _) => link(0, 1, -1, -3),
        }
        out
    }
}

impl fmt::Display for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, self.rank)
    }
}

/// A product of irreducible types, written `A1xA1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CartanType {
    pub components: Vec<SimpleType>,
}

impl CartanType {
    pub fn rank(&self) -> usize {
        self.components.iter().map(|c| c.rank).sum()
    }

    pub fn is_irreducible(&self) -> bool {
        self.components.len() == 1
    }
}

impl FromStr for CartanType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidType(s.to_string());
        let components = s
            .split(['x', '×', '*'])
            .map(|part| {
                let part = part.trim();
                let mut chars = part.chars();
                let family = chars.next().and_then(Family::from_char).ok_or_else(bad)?;
                let rank: usize = chars.as_str().parse().map_err(|_| bad())?;
                SimpleType::new(family, rank)
            })
            .collect::<Result<Vec<_>>>()?;
        if components.is_empty() {
            return Err(bad());
        }
        Ok(CartanType { components })
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, "x")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// A positive root together with its coroot.
#[derive(Clone, Debug)]
pub struct Root {
    /// Coordinates in the simple roots.
    pub simple: Vec<i64>,
    /// Coordinates in the fundamental weights.
    pub weight: Weight,
    /// Coordinates of `β^∨` in the simple coroots.
    pub coroot: Vec<i64>,
    pub component: usize,
    norm2: i64,
}

impl Root {
    pub fn height(&self) -> i64 {
        self.simple.iter().sum()
    }

    /// `h(β^∨) = ⟨ρ, β^∨⟩`.
    pub fn coroot_height(&self) -> i64 {
        self.coroot.iter().sum()
    }
}

#[derive(Clone, Debug)]
pub struct Component {
    pub ty: SimpleType,
    offset: usize,
    alpha0: usize,
    coxeter: i64,
}

impl Component {
    pub fn simple_range(&self) -> Range<usize> {
        self.offset..self.offset + self.ty.rank
    }

    pub fn coxeter_number(&self) -> i64 {
        self.coxeter
    }
}

/// A Weyl group element stored as a word `s_{i_1} ⋯ s_{i_k}`; the rightmost
/// reflection acts first.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WeylElement {
    pub word: Vec<usize>,
}

impl WeylElement {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn det(&self) -> i64 {
        if self.word.len().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn act(&self, rs: &RootSystem, lambda: &Weight) -> Weight {
        let mut v = lambda.clone();
        for &i in self.word.iter().rev() {
            rs.reflect_in_place(&mut v, i);
        }
        v
    }

    /// `w·μ = w(μ+ρ) − ρ`.
    pub fn dot_act(&self, rs: &RootSystem, mu: &Weight) -> Weight {
        &self.act(rs, &(mu + rs.rho())) - rs.rho()
    }

    /// Matrix of `w` on fundamental-weight coordinates (acts on columns).
    pub fn matrix(&self, rs: &RootSystem) -> Vec<Vec<i64>> {
        let n = rs.rank();
        let mut m: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect();
        for &i in &self.word {
            m = mat_mul(&m, &rs.reflection_matrix(i));
        }
        m
    }
}

fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

pub fn apply_matrix(m: &[Vec<i64>], lambda: &Weight) -> Weight {
    Weight(
        m.iter()
            .map(|row| row.iter().zip(&lambda.0).map(|(a, b)| a * b).sum())
            .collect(),
    )
}

type CharTerms = HashMap<Weight, i64>;

pub struct RootSystem {
    ty: CartanType,
    /// `simple[i][j] = ⟨α_i, α_j^∨⟩`; row `i` is `α_i` in weight coordinates.
    simple: Vec<Weight>,
    /// Squared lengths of the simple roots, integer-normalized per component.
    lengths: Vec<i64>,
    /// Simple-root coordinates of a weight `w` are `inv_num · w / inv_den`.
    inv_num: Vec<Vec<i64>>,
    inv_den: i64,
    height_row: Vec<i64>,
    positive: Vec<Root>,
    components: Vec<Component>,
    rho: Weight,
    pub(crate) weyl_cache: RwLock<HashMap<Weight, Arc<CharTerms>>>,
}

impl fmt::Debug for RootSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RootSystem").field("type", &self.ty.to_string()).finish()
    }
}

impl RootSystem {
    pub fn parse(s: &str) -> Result<Arc<Self>> {
        Self::build(&s.parse()?)
    }

    pub fn build(ty: &CartanType) -> Result<Arc<Self>> {
        let rank = ty.rank();
        let mut pairing = vec![vec![0i64; rank]; rank];
        let mut comp_of = vec![0usize; rank];
        let mut offset = 0;
        for (ci, c) in ty.components.iter().enumerate() {
            let c = SimpleType::new(c.family, c.rank)?;
            for i in 0..c.rank {
                pairing[offset + i][offset + i] = 2;
                comp_of[offset + i] = ci;
            }
            for (i, j, v) in c.off_diagonal() {
                pairing[offset + i][offset + j] = v;
            }
            offset += c.rank;
        }

        let lengths = symmetrize(&pairing, &comp_of);
        let simple: Vec<Weight> = pairing.iter().map(|r| Weight(r.clone())).collect();

        // inverse of the transpose of `pairing`
        let transpose: Vec<Vec<i64>> = (0..rank)
            .map(|i| (0..rank).map(|j| pairing[j][i]).collect())
            .collect();
        let (inv_num, inv_den) = integer_inverse(&transpose);
        let height_row = (0..rank)
            .map(|j| (0..rank).map(|i| inv_num[i][j]).sum())
            .collect();

        let positive = positive_roots(&pairing, &lengths, &comp_of);

        let mut rs = RootSystem {
            ty: ty.clone(),
            simple,
            lengths,
            inv_num,
            inv_den,
            height_row,
            positive,
            components: Vec::new(),
            rho: Weight(vec![1; rank]),
            weyl_cache: RwLock::new(HashMap::new()),
        };

        let mut offset = 0;
        for c in &ty.components {
            let range: Vec<usize> = (offset..offset + c.rank).collect();
            let alpha0 = rs
                .highest_short_root_index(&range)
                .expect("irreducible component has roots");
            let coxeter = rs.positive[alpha0].coroot_height() + 1;
            rs.components.push(Component {
                ty: *c,
                offset,
                alpha0,
                coxeter,
            });
            offset += c.rank;
        }
        Ok(Arc::new(rs))
    }

    pub fn cartan_type(&self) -> &CartanType {
        &self.ty
    }

    pub fn name(&self) -> String {
        self.ty.to_string()
    }

    pub fn rank(&self) -> usize {
        self.simple.len()
    }

    pub fn rho(&self) -> &Weight {
        &self.rho
    }

    /// `α_i` in fundamental-weight coordinates.
    pub fn simple_root(&self, i: usize) -> &Weight {
        &self.simple[i]
    }

    pub fn positive_roots(&self) -> &[Root] {
        &self.positive
    }

    pub fn simple_root_record(&self, i: usize) -> &Root {
        self.positive
            .iter()
            .find(|r| r.height() == 1 && r.simple[i] == 1)
            .expect("simple roots are positive")
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn component_of_simple(&self, i: usize) -> &Component {
        self.components
            .iter()
            .find(|c| c.simple_range().contains(&i))
            .expect("index within rank")
    }

    /// Highest short root of a component.
    pub fn alpha0(&self, c: &Component) -> &Root {
        &self.positive[c.alpha0]
    }

    /// Coxeter number; for reducible systems the largest over components.
    pub fn coxeter_number(&self) -> i64 {
        self.components.iter().map(|c| c.coxeter).max().unwrap_or(0)
    }

    pub fn check_weight(&self, lambda: &Weight) -> Result<()> {
        if lambda.rank() != self.rank() {
            return Err(Error::RankMismatch {
                weight: lambda.clone(),
                got: lambda.rank(),
                rank: self.rank(),
            });
        }
        Ok(())
    }

    /// `⟨λ, β^∨⟩`.
    pub fn pair(&self, lambda: &Weight, beta: &Root) -> i64 {
        pair_coroot(lambda, &beta.coroot)
    }

    pub fn reflect_in_place(&self, v: &mut Weight, i: usize) {
        let k = v[i];
        if k != 0 {
            for (a, b) in v.0.iter_mut().zip(&self.simple[i].0) {
                *a -= k * b;
            }
        }
    }

    pub fn reflect(&self, lambda: &Weight, i: usize) -> Weight {
        let mut v = lambda.clone();
        self.reflect_in_place(&mut v, i);
        v
    }

    /// `s_β(λ) = λ − ⟨λ, β^∨⟩ β`.
    pub fn reflect_root(&self, lambda: &Weight, beta: &Root) -> Weight {
        lambda - &beta.weight.scaled(self.pair(lambda, beta))
    }

    fn reflection_matrix(&self, i: usize) -> Vec<Vec<i64>> {
        let n = self.rank();
        (0..n)
            .map(|r| {
                (0..n)
                    .map(|c| i64::from(r == c) - if c == i { self.simple[i][r] } else { 0 })
                    .collect()
            })
            .collect()
    }

    /// Unique dominant weight in `W λ` and a witness `w` with `w(λ)` dominant.
    pub fn dominant_representative(&self, lambda: &Weight) -> (Weight, WeylElement) {
        let mut v = lambda.clone();
        let mut applied = Vec::new();
        while let Some(i) = v.0.iter().position(|&c| c < 0) {
            self.reflect_in_place(&mut v, i);
            applied.push(i);
        }
        applied.reverse();
        (v, WeylElement { word: applied })
    }

    pub fn dominant(&self, lambda: &Weight) -> Weight {
        let mut v = lambda.clone();
        while let Some(i) = v.0.iter().position(|&c| c < 0) {
            self.reflect_in_place(&mut v, i);
        }
        v
    }

    pub fn longest_element(&self) -> WeylElement {
        let (rho, w) = self.dominant_representative(&-&self.rho);
        debug_assert_eq!(rho, self.rho);
        w
    }

    /// Orbit by reflection closure; no group enumeration.
    pub fn weyl_orbit(&self, lambda: &Weight) -> BTreeSet<Weight> {
        self.orbit_vec(lambda).into_iter().collect()
    }

    pub(crate) fn orbit_vec(&self, lambda: &Weight) -> Vec<Weight> {
        let start = self.dominant(lambda);
        let mut seen: HashSet<Weight> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(start.clone());
        queue.push_back(start);
        let mut out = Vec::new();
        while let Some(v) = queue.pop_front() {
            for i in 0..self.rank() {
                // from a chamber-side weight, only descend through positive coordinates
                if v[i] > 0 {
                    let r = self.reflect(&v, i);
                    if seen.insert(r.clone()) {
                        queue.push_back(r);
                    }
                }
            }
            out.push(v);
        }
        out
    }

    /// Simple-root coordinates scaled by [`RootSystem::root_denominator`].
    pub fn simple_coords_scaled(&self, lambda: &Weight) -> Vec<i64> {
        self.inv_num
            .iter()
            .map(|row| row.iter().zip(&lambda.0).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn root_denominator(&self) -> i64 {
        self.inv_den
    }

    /// Height (sum of simple-root coordinates) times the root denominator.
    pub fn height_scaled(&self, lambda: &Weight) -> i64 {
        self.height_row.iter().zip(&lambda.0).map(|(a, b)| a * b).sum()
    }

    /// `μ ≤ λ` in the root order: `λ − μ ∈ ℕS`.
    pub fn root_le(&self, mu: &Weight, lambda: &Weight) -> bool {
        let d = self.simple_coords_scaled(&(lambda - mu));
        d.iter().all(|&c| c >= 0 && c % self.inv_den == 0)
    }

    /// Sort key for the elimination order: larger keys come first.
    pub fn order_key(&self, lambda: &Weight) -> (i64, Weight) {
        (self.height_scaled(lambda), lambda.clone())
    }

    /// Sorts weights by the elimination order, highest first.
    pub fn sort_canonical<T>(&self, items: &mut [T], key: impl Fn(&T) -> &Weight) {
        items.sort_by(|a, b| {
            let (ka, kb) = (key(a), key(b));
            self.height_scaled(kb)
                .cmp(&self.height_scaled(ka))
                .then_with(|| kb.cmp(ka))
        });
    }

    /// The invariant form scaled to integers: `2·den·(λ, μ)`.
    pub fn form_scaled(&self, lambda: &Weight, mu: &Weight) -> i64 {
        let s = self.simple_coords_scaled(mu);
        (0..self.rank())
            .map(|i| lambda[i] * s[i] * self.lengths[i])
            .sum()
    }

    fn highest_short_root_index(&self, subset: &[usize]) -> Option<usize> {
        let inside = |r: &Root| {
            r.simple
                .iter()
                .enumerate()
                .all(|(i, &c)| c == 0 || subset.contains(&i))
        };
        let min_norm = self.positive.iter().filter(|r| inside(r)).map(|r| r.norm2).min()?;
        self.positive
            .iter()
            .enumerate()
            .filter(|(_, r)| inside(r) && r.norm2 == min_norm)
            .max_by_key(|(_, r)| r.height())
            .map(|(i, _)| i)
    }

    /// `α_J` for a connected subset `J ⊆ S`.
    pub fn highest_short_root(&self, subset: &[usize]) -> Option<&Root> {
        self.highest_short_root_index(subset).map(|i| &self.positive[i])
    }

    /// `h_J = ⟨ρ, α_J^∨⟩` for connected `J`.
    pub fn h_j(&self, subset: &[usize]) -> i64 {
        self.highest_short_root(subset)
            .map(Root::coroot_height)
            .unwrap_or(0)
    }

    pub fn simple_adjacent(&self, i: usize, j: usize) -> bool {
        i != j && self.simple[i][j] != 0
    }

    /// Connected components of `subset` in the Dynkin diagram.
    pub fn connected_components(&self, subset: &BTreeSet<usize>) -> Vec<Vec<usize>> {
        let mut left: BTreeSet<usize> = subset.clone();
        let mut out = Vec::new();
        while let Some(&start) = left.iter().next() {
            left.remove(&start);
            let mut comp = vec![start];
            let mut k = 0;
            while k < comp.len() {
                let v = comp[k];
                let next: Vec<usize> =
                    left.iter().copied().filter(|&u| self.simple_adjacent(v, u)).collect();
                for u in next {
                    left.remove(&u);
                    comp.push(u);
                }
                k += 1;
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Number of weights of `W λ`, i.e. `|W|` for regular `λ`.
    pub fn orbit_size(&self, lambda: &Weight) -> usize {
        self.orbit_vec(lambda).len()
    }

    /// Weyl dimension formula `∏ ⟨λ+ρ, β^∨⟩ / ⟨ρ, β^∨⟩`, evaluated over the rationals.
    pub fn weyl_dimension(&self, lambda: &Weight) -> i128 {
        let shifted = lambda + &self.rho;
        let mut acc = Ratio::from_integer(1i128);
        for beta in &self.positive {
            acc *= Ratio::new(
                i128::from(self.pair(&shifted, beta)),
                i128::from(beta.coroot_height()),
            );
        }
        assert!(acc.is_integer(), "Weyl dimension must be integral");
        acc.to_integer()
    }
}

pub(crate) fn pair_coroot(lambda: &Weight, coroot: &[i64]) -> i64 {
    coroot.iter().zip(&lambda.0).map(|(a, b)| a * b).sum()
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Squared lengths `l_i` with `⟨α_i, α_j^∨⟩ l_j = ⟨α_j, α_i^∨⟩ l_i`.
fn symmetrize(pairing: &[Vec<i64>], comp_of: &[usize]) -> Vec<i64> {
    let n = pairing.len();
    let mut lengths = vec![0i64; n];
    for start in 0..n {
        if lengths[start] != 0 {
            continue;
        }
        lengths[start] = 6;
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            for j in 0..n {
                if i != j && pairing[i][j] != 0 && lengths[j] == 0 {
                    lengths[j] = lengths[i] * pairing[j][i] / pairing[i][j];
                    stack.push(j);
                }
            }
        }
        let comp = comp_of[start];
        let g = (0..n)
            .filter(|&i| comp_of[i] == comp)
            .fold(0, |g, i| gcd(g, lengths[i]));
        for i in 0..n {
            if comp_of[i] == comp {
                lengths[i] /= g;
            }
        }
    }
    lengths
}

/// Inverse of an integer matrix as `(numerator, common denominator)`.
fn integer_inverse(m: &[Vec<i64>]) -> (Vec<Vec<i64>>, i64) {
    let n = m.len();
    let mut a: Vec<Vec<Ratio<i64>>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .map(|&x| Ratio::from_integer(x))
                .chain((0..n).map(|j| Ratio::from_integer(i64::from(i == j))))
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| a[r][col] != Ratio::from_integer(0))
            .expect("Cartan matrices are nonsingular");
        a.swap(col, pivot);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x *= inv;
        }
        for r in 0..n {
            if r != col && a[r][col] != Ratio::from_integer(0) {
                let f = a[r][col];
                let pivot_row = a[col].clone();
                for (x, y) in a[r].iter_mut().zip(&pivot_row) {
                    *x -= f * y;
                }
            }
        }
    }
    let den = a
        .iter()
        .flat_map(|row| row[n..].iter())
        .fold(1i64, |l, x| l / gcd(l, *x.denom()) * x.denom());
    let num = a
        .iter()
        .map(|row| row[n..].iter().map(|x| (x * den).to_integer()).collect())
        .collect();
    (num, den)
}

/// Positive roots by closure under root strings.
fn positive_roots(pairing: &[Vec<i64>], lengths: &[i64], comp_of: &[usize]) -> Vec<Root> {
    let n = pairing.len();
    let unit = |i: usize| -> Vec<i64> { (0..n).map(|j| i64::from(i == j)).collect() };
    let mut known: HashSet<Vec<i64>> = HashSet::new();
    let mut layer: Vec<Vec<i64>> = (0..n).map(unit).collect();
    let mut all: Vec<Vec<i64>> = Vec::new();
    known.extend(layer.iter().cloned());
    while !layer.is_empty() {
        all.extend(layer.iter().cloned());
        let mut next: Vec<Vec<i64>> = Vec::new();
        for beta in &layer {
            for i in 0..n {
                // ⟨β, α_i^∨⟩
                let pairing_i: i64 = (0..n).map(|j| beta[j] * pairing[j][i]).sum();
                let mut r = 0;
                loop {
                    let mut down = beta.clone();
                    down[i] -= r + 1;
                    if known.contains(&down) {
                        r += 1;
                    } else {
                        break;
                    }
                }
                if r - pairing_i > 0 {
                    let mut up = beta.clone();
                    up[i] += 1;
                    if known.insert(up.clone()) {
                        next.push(up);
                    }
                }
            }
        }
        next.sort();
        layer = next;
    }

    all.into_iter()
        .map(|b| {
            let norm2: i64 = (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .map(|(i, j)| b[i] * b[j] * pairing[i][j] * lengths[j])
                .sum();
            let coroot = (0..n).map(|i| 2 * b[i] * lengths[i] / norm2).collect();
            let weight = Weight(
                (0..n)
                    .map(|j| (0..n).map(|i| b[i] * pairing[i][j]).sum())
                    .collect(),
            );
            let component = comp_of[b.iter().position(|&c| c != 0).expect("nonzero root")];
            Root {
                simple: b,
                weight,
                coroot,
                component,
                norm2,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn classical_count(t: &SimpleType) -> usize {
        let n = t.rank;
        match t.family {
            Family::A => n * (n + 1) / 2,
            Family::B | Family::C => n * n,
            Family::D => n * (n - 1),
            Family::E => [36, 63, 120][n - 6],
            Family::F => 24,
            Family::G => 6,
        }
    }

    fn all_types() -> Vec<String> {
        let mut v = Vec::new();
        for n in 1..=8 {
            v.push(format!("A{n}"));
        }
        for n in 2..=8 {
            v.push(format!("B{n}"));
            v.push(format!("C{n}"));
        }
        for n in 3..=8 {
            v.push(format!("D{n}"));
        }
        v.extend(["E6", "E7", "E8", "F4", "G2"].map(String::from));
        v
    }

    #[test]
    fn coxeter_numbers() {
        let a2 = RootSystem::parse("A2").unwrap();
        assert_eq!(a2.coxeter_number(), 3);
        let b2 = RootSystem::parse("B2").unwrap();
        assert_eq!(b2.coxeter_number(), 4);
        assert_eq!(b2.positive_roots().len(), 4);
    }

    #[test]
    fn root_counts_match_classical() {
        for name in all_types() {
            let rs = RootSystem::parse(&name).unwrap();
            let t = rs.cartan_type().components[0];
            assert_eq!(rs.positive_roots().len(), classical_count(&t), "{name}");
            // h = |R| / rank
            let h = rs.coxeter_number() as usize;
            assert_eq!(h * t.rank, 2 * classical_count(&t), "{name}");
            let a0 = rs.alpha0(&rs.components()[0]);
            assert_eq!(a0.coroot_height(), rs.coxeter_number() - 1, "{name}");
        }
    }

    #[test]
    fn rho_pairs_to_one_on_simple_coroots() {
        for name in all_types() {
            let rs = RootSystem::parse(&name).unwrap();
            for i in 0..rs.rank() {
                assert_eq!(rs.pair(rs.rho(), rs.simple_root_record(i)), 1);
            }
            for beta in rs.positive_roots() {
                assert_eq!(rs.pair(rs.rho(), beta), beta.coroot_height());
            }
        }
    }

    #[test]
    fn invalid_types_rejected() {
        for bad in ["B1", "D2", "E5", "E9", "F3", "G3", "A0", "Q2", "", "A"] {
            assert!(matches!(RootSystem::parse(bad), Err(Error::InvalidType(_))), "{bad}");
        }
    }

    #[test]
    fn reducible_parse() {
        let rs = RootSystem::parse("A1xA1").unwrap();
        assert_eq!(rs.rank(), 2);
        assert_eq!(rs.positive_roots().len(), 2);
        assert_eq!(rs.components().len(), 2);
        assert_eq!(rs.name(), "A1xA1");
        let rs = RootSystem::parse("A2xB2").unwrap();
        assert_eq!(rs.positive_roots().len(), 7);
        assert_eq!(rs.coxeter_number(), 4);
    }

    #[test]
    fn b2_short_root_first() {
        let b2 = RootSystem::parse("B2").unwrap();
        assert_eq!(b2.simple_root(0), &Weight::from([2, -1]));
        assert_eq!(b2.simple_root(1), &Weight::from([-2, 2]));
        let a0 = b2.alpha0(&b2.components()[0]);
        assert_eq!(a0.simple, vec![1, 1]);
        assert_eq!(a0.coroot, vec![1, 2]);
    }

    #[test]
    fn orbits() {
        let a1 = RootSystem::parse("A1").unwrap();
        assert_eq!(
            a1.weyl_orbit(&Weight::from([3])),
            [Weight::from([3]), Weight::from([-3])].into_iter().collect()
        );
        let b2 = RootSystem::parse("B2").unwrap();
        assert_eq!(b2.weyl_orbit(&Weight::from([0, 0])).len(), 1);
        assert_eq!(b2.weyl_orbit(b2.rho()).len(), 8);
        let g2 = RootSystem::parse("G2").unwrap();
        assert_eq!(g2.orbit_size(g2.rho()), 12);
        let f4 = RootSystem::parse("F4").unwrap();
        assert_eq!(f4.orbit_size(f4.rho()), 1152);
    }

    #[test]
    fn longest_element_maps_positive_to_negative() {
        for name in ["A1", "A2", "A3", "B2", "B3", "C3", "D4", "G2", "F4"] {
            let rs = RootSystem::parse(name).unwrap();
            let w0 = rs.longest_element();
            assert_eq!(w0.len(), rs.positive_roots().len(), "{name}");
            let pos: BTreeSet<Weight> =
                rs.positive_roots().iter().map(|r| r.weight.clone()).collect();
            let neg: BTreeSet<Weight> =
                pos.iter().map(|w| -&w0.act(&rs, w)).collect();
            assert_eq!(pos, neg, "{name}");
        }
        let a1 = RootSystem::parse("A1").unwrap();
        assert_eq!(a1.longest_element().act(&a1, &Weight::from([5])), Weight::from([-5]));
        let b2 = RootSystem::parse("B2").unwrap();
        let w0 = b2.longest_element();
        let mu = Weight::from([3, 1]);
        assert_eq!(w0.act(&b2, &mu), -&mu);
    }

    #[test]
    fn word_and_matrix_agree() {
        for name in ["A2", "B2", "G2", "A3"] {
            let rs = RootSystem::parse(name).unwrap();
            let w0 = rs.longest_element();
            let m = w0.matrix(&rs);
            assert_eq!(apply_matrix(&m, rs.rho()), w0.act(&rs, rs.rho()));
            let (dom, w) = rs.dominant_representative(&Weight::from(vec![-3; rs.rank()]));
            assert!(dom.is_dominant());
            assert_eq!(apply_matrix(&w.matrix(&rs), &Weight::from(vec![-3; rs.rank()])), dom);
        }
    }

    #[test]
    fn dominant_representative_of_dominant_is_identity() {
        let b2 = RootSystem::parse("B2").unwrap();
        let (d, w) = b2.dominant_representative(&Weight::from([2, 3]));
        assert_eq!(d, Weight::from([2, 3]));
        assert!(w.is_empty());
    }

    #[test]
    fn weyl_dimension_values() {
        let b2 = RootSystem::parse("B2").unwrap();
        assert_eq!(b2.weyl_dimension(b2.rho()), 16);
        assert_eq!(b2.weyl_dimension(&Weight::from([1, 0])), 4);
        assert_eq!(b2.weyl_dimension(&Weight::from([0, 1])), 5);
        let a2 = RootSystem::parse("A2").unwrap();
        assert_eq!(a2.weyl_dimension(&Weight::from([1, 1])), 8);
        let g2 = RootSystem::parse("G2").unwrap();
        assert_eq!(g2.weyl_dimension(&Weight::from([1, 0])), 7);
        let e8 = RootSystem::parse("E8").unwrap();
        let mut adj = Weight::zero(8);
        adj.0[7] = 1;
        assert_eq!(e8.weyl_dimension(&adj), 248);
    }

    #[test]
    fn root_order() {
        let a2 = RootSystem::parse("A2").unwrap();
        assert!(a2.root_le(&Weight::from([0, 0]), &Weight::from([1, 1])));
        assert!(!a2.root_le(&Weight::from([1, 0]), &Weight::from([1, 1])));
        assert!(!a2.root_le(&Weight::from([3, 0]), &Weight::from([1, 1])));
        assert!(a2.root_le(&Weight::from([0, 3]), &Weight::from([2, 2])));
    }

    #[test]
    fn h_j_of_subsystems() {
        let b3 = RootSystem::parse("B3").unwrap();
        assert_eq!(b3.h_j(&[0, 1, 2]), b3.coxeter_number() - 1);
        assert_eq!(b3.h_j(&[0]), 1);
        assert_eq!(b3.h_j(&[1, 2]), 3); // B2 inside B3
        assert_eq!(b3.h_j(&[0, 1]), 2); // A2
    }
}

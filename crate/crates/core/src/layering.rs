//! Layering vectors and the combinatorics of the cube-zero family: dominance
//! order, nonemptiness, Tits form and root decomposition, generic socle
//! layerings and the component enumeration.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LayeringError {
    #[error("layering vectors have different shapes")]
    ShapeMismatch,
    #[error("n must be at least 2, got {0}")]
    BadN(usize),
    #[error("the stratum of {d} is empty for n={n}: {reason}")]
    Empty { n: usize, d: DimVec3, reason: String },
    #[error("({d1},{d2}) is not a sum of root generators for n={n}")]
    NoDecomposition { n: usize, d1: usize, d2: usize },
    #[error("no closed form for the generic socle layering of {d} (n={n})")]
    NoClosedForm { n: usize, d: DimVec3 },
    #[error("cannot parse layering {0:?}")]
    Parse(String),
}

/// Per-layer, per-vertex dimensions `layers[i][v]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LayeringVector {
    layers: Vec<Vec<usize>>,
}

impl LayeringVector {
    pub fn new(layers: Vec<Vec<usize>>) -> Self {
        LayeringVector { layers }
    }

    /// One-vertex layering from its layer sizes.
    pub fn single(sizes: &[usize]) -> Self {
        LayeringVector { layers: sizes.iter().map(|&s| vec![s]).collect() }
    }

    pub fn layers(&self) -> &[Vec<usize>] {
        &self.layers
    }

    pub fn len(&self) -> usize {
        self.layers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.layers.is_empty()
    }

    pub fn vertex_count(&self) -> usize {
        self.layers.first().map_or(0, Vec::len)
    }

    /// Layer sizes of a one-vertex layering. Panics on several vertices.
    pub fn as_single_vertex(&self) -> Vec<usize> {
        self.layers
            .iter()
            .map(|l| {
                assert_eq!(l.len(), 1, "layering has {} vertices", l.len());
                l[0]
            })
            .collect()
    }

    /// Sum over layers, per vertex.
    pub fn totals(&self) -> Vec<usize> {
        let mut t = vec![0; self.vertex_count()];
        for l in &self.layers {
            for (acc, x) in t.iter_mut().zip(l) {
                *acc += x;
            }
        }
        t
    }

    pub fn reversed(&self) -> Self {
        let mut layers = self.layers.clone();
        layers.reverse();
        LayeringVector { layers }
    }

    /// Appends zero layers up to `len` layers.
    pub fn padded(&self, len: usize) -> Self {
        let mut layers = self.layers.clone();
        let nv = self.vertex_count();
        layers.resize(len.max(layers.len()), vec![0; nv]);
        LayeringVector { layers }
    }

    /// Drops layer 0, leaving the layering `(d₁, …, d_{m−1})` of the radical.
    pub fn without_top(&self) -> Self {
        LayeringVector { layers: self.layers.iter().skip(1).cloned().collect() }
    }

    pub fn to_dimvec3(&self) -> Option<DimVec3> {
        match self.as_single_checked()?.as_slice() {
            [d0, d1, d2] => Some(DimVec3::new(*d0, *d1, *d2)),
            _ => None,
        }
    }

    fn as_single_checked(&self) -> Option<Vec<usize>> {
        self.layers.iter().map(|l| if l.len() == 1 { Some(l[0]) } else { None }).collect()
    }
}

impl fmt::Display for LayeringVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = match self.as_single_checked() {
            Some(s) => s.iter().map(usize::to_string).collect(),
            None => self
                .layers
                .iter()
                .map(|l| l.iter().map(usize::to_string).collect::<Vec<_>>().join(","))
                .collect(),
        };
        let sep = if self.vertex_count() == 1 { "," } else { ";" };
        write!(f, "({})", parts.join(sep))
    }
}

/// Accepts `d0,d1,…` for one vertex or `a,b;c,d;…` (layers separated by `;`).
impl FromStr for LayeringVector {
    type Err = LayeringError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || LayeringError::Parse(s.to_string());
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parse_list = |part: &str| -> Result<Vec<usize>, LayeringError> {
            part.split(',').map(|x| x.trim().parse::<usize>().map_err(|_| bad())).collect()
        };
        if s.contains(';') {
            let layers = s.split(';').map(parse_list).collect::<Result<Vec<_>, _>>()?;
            if layers.windows(2).any(|w| w[0].len() != w[1].len()) {
                return Err(bad());
            }
            Ok(LayeringVector::new(layers))
        } else {
            Ok(LayeringVector::single(&parse_list(s)?))
        }
    }
}

/// A one-vertex, three-layer dimension vector `(d₀, d₁, d₂)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DimVec3 {
    pub d0: usize,
    pub d1: usize,
    pub d2: usize,
}

impl DimVec3 {
    pub const fn new(d0: usize, d1: usize, d2: usize) -> Self {
        DimVec3 { d0, d1, d2 }
    }

    pub fn total(&self) -> usize {
        self.d0 + self.d1 + self.d2
    }

    pub fn to_array(&self) -> [usize; 3] {
        [self.d0, self.d1, self.d2]
    }

    pub fn reversed(&self) -> Self {
        DimVec3::new(self.d2, self.d1, self.d0)
    }

    pub fn to_layering(&self) -> LayeringVector {
        LayeringVector::single(&self.to_array())
    }

    /// All triples of the given total, lexicographically.
    pub fn with_total(total: usize) -> impl Iterator<Item = DimVec3> {
        (0..=total).flat_map(move |d0| (0..=total - d0).map(move |d1| DimVec3::new(d0, d1, total - d0 - d1)))
    }
}

impl fmt::Display for DimVec3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.d0, self.d1, self.d2)
    }
}

impl FromStr for DimVec3 {
    type Err = LayeringError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        LayeringVector::from_str(s)?
            .to_dimvec3()
            .ok_or_else(|| LayeringError::Parse(s.to_string()))
    }
}

impl From<[usize; 3]> for DimVec3 {
    fn from(a: [usize; 3]) -> Self {
        DimVec3::new(a[0], a[1], a[2])
    }
}

impl Serialize for DimVec3 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_array().serialize(s)
    }
}

impl<'de> Deserialize<'de> for DimVec3 {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(<[usize; 3]>::deserialize(d)?.into())
    }
}

/// Prefix-sum comparison, vertex by vertex.
pub fn dominance_leq(u: &LayeringVector, v: &LayeringVector) -> Result<bool, LayeringError> {
    if u.len() != v.len() || u.vertex_count() != v.vertex_count() || u.layers.iter().chain(&v.layers).any(|l| l.len() != u.vertex_count()) {
        return Err(LayeringError::ShapeMismatch);
    }
    let mut su = vec![0usize; u.vertex_count()];
    let mut sv = su.clone();
    for (lu, lv) in u.layers.iter().zip(&v.layers) {
        for k in 0..su.len() {
            su[k] += lu[k];
            sv[k] += lv[k];
            if su[k] > sv[k] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn dominance_comparable(u: &LayeringVector, v: &LayeringVector) -> Result<bool, LayeringError> {
    Ok(dominance_leq(u, v)? || dominance_leq(v, u)?)
}

/// The pair `(raddim, socdim)` of a representation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ThetaPair {
    pub rad: LayeringVector,
    pub soc: LayeringVector,
}

impl ThetaPair {
    pub fn new(rad: LayeringVector, soc: LayeringVector) -> Result<Self, LayeringError> {
        if rad.totals() != soc.totals() {
            return Err(LayeringError::ShapeMismatch);
        }
        Ok(ThetaPair { rad, soc })
    }

    /// Product order.
    pub fn leq(&self, other: &Self) -> Result<bool, LayeringError> {
        Ok(dominance_leq(&self.rad, &other.rad)? && dominance_leq(&self.soc, &other.soc)?)
    }

    pub fn comparable(&self, other: &Self) -> Result<bool, LayeringError> {
        Ok(self.leq(other)? || other.leq(self)?)
    }
}

fn check_n(n: usize) -> Result<(), LayeringError> {
    if n < 2 {
        Err(LayeringError::BadN(n))
    } else {
        Ok(())
    }
}

/// The first failing inequality of the nonemptiness criterion, if any.
pub fn nonempty_violation(n: usize, d: DimVec3) -> Option<String> {
    if d.d1 > n * d.d0 {
        return Some(format!("d1 ≤ n·d0 violated ({} > {})", d.d1, n * d.d0));
    }
    if n * d.d2 > (n * n - 1) * d.d1 {
        return Some(format!("n·d2 ≤ (n²−1)·d1 violated ({} > {})", n * d.d2, (n * n - 1) * d.d1));
    }
    None
}

/// Whether representations with radical (equivalently, socle) layering `d` exist.
pub fn rad_nonempty(n: usize, d: DimVec3) -> bool {
    nonempty_violation(n, d).is_none()
}

fn require_nonempty(n: usize, d: DimVec3) -> Result<(), LayeringError> {
    check_n(n)?;
    match nonempty_violation(n, d) {
        Some(reason) => Err(LayeringError::Empty { n, d, reason }),
        None => Ok(()),
    }
}

/// `q(d₁,d₂) = d₁² + d₂² − n·d₁·d₂`.
pub fn tits_q(n: usize, d1: usize, d2: usize) -> i64 {
    let (n, d1, d2) = (n as i64, d1 as i64, d2 as i64);
    d1 * d1 + d2 * d2 - n * d1 * d2
}

/// `(1,0), …, (1,n−1), (2,2n−1), …, (n,n²−1)`.
pub fn root_generators(n: usize) -> Vec<(usize, usize)> {
    (0..n).map(|j| (1, j)).chain((2..=n).map(|k| (k, k * n - 1))).collect()
}

fn root_inequality(n: usize, d1: usize, d2: usize) -> bool {
    n * d2 <= (n * n - 1) * d1
}

fn greedy_decompose(n: usize, mut d1: usize, mut d2: usize) -> Option<Vec<(usize, usize)>> {
    let top = n * n - 1;
    let mut out = Vec::new();
    let mut take = |g: (usize, usize), d1: &mut usize, d2: &mut usize| -> bool {
        if g.0 > *d1 || g.1 > *d2 {
            return false;
        }
        *d1 -= g.0;
        *d2 -= g.1;
        out.push(g);
        root_inequality(n, *d1, *d2)
    };
    while d2 > top {
        if !take((n, top), &mut d1, &mut d2) {
            return None;
        }
    }
    while d1 > n {
        if !take((1, 0), &mut d1, &mut d2) {
            return None;
        }
    }
    loop {
        if d1 == 0 {
            return (d2 == 0).then_some(out);
        }
        if d1 == 1 || d2 == n * d1 - 1 {
            take((d1, d2), &mut d1, &mut d2);
            return Some(out);
        }
        if d2 >= n {
            if !take((1, n - 1), &mut d1, &mut d2) {
                return None;
            }
            continue;
        }
        take((1, d2), &mut d1, &mut d2);
        while d1 > 0 {
            take((1, 0), &mut d1, &mut d2);
        }
        return Some(out);
    }
}

/// Fewest-summand decomposition by dynamic programming over the rectangle.
pub fn exhaustive_decompose(n: usize, d1: usize, d2: usize) -> Option<Vec<(usize, usize)>> {
    let gens = root_generators(n);
    let idx = |a: usize, b: usize| a * (d2 + 1) + b;
    let mut best: Vec<Option<(usize, usize)>> = vec![None; (d1 + 1) * (d2 + 1)];
    let mut reach = vec![false; best.len()];
    reach[0] = true;
    for a in 0..=d1 {
        for b in 0..=d2 {
            if reach[idx(a, b)] {
                continue;
            }
            for (gi, &(g1, g2)) in gens.iter().enumerate() {
                if g1 <= a && g2 <= b && reach[idx(a - g1, b - g2)] {
                    reach[idx(a, b)] = true;
                    best[idx(a, b)] = Some((gi, 0));
                    break;
                }
            }
        }
    }
    if !reach[idx(d1, d2)] {
        return None;
    }
    let (mut a, mut b) = (d1, d2);
    let mut out = Vec::new();
    while (a, b) != (0, 0) {
        let (gi, _) = best[idx(a, b)].expect("reachable");
        let g = gens[gi];
        out.push(g);
        a -= g.0;
        b -= g.1;
    }
    Some(out)
}

/// Writes `(d₁,d₂)` as a sum of root generators. Every partial remainder
/// satisfies `n·d₂ ≤ (n²−1)·d₁`.
pub fn root_decompose(n: usize, d1: usize, d2: usize) -> Result<Vec<(usize, usize)>, LayeringError> {
    check_n(n)?;
    let none = LayeringError::NoDecomposition { n, d1, d2 };
    if !root_inequality(n, d1, d2) {
        return Err(none);
    }
    greedy_decompose(n, d1, d2)
        .or_else(|| exhaustive_decompose(n, d1, d2))
        .ok_or(none)
}

/// Generic `dim ⋂ ker Cᵢ`: `max(d₀ − (n·d₁ − d₂), 0)`.
pub fn h0_generic(n: usize, d: DimVec3) -> Result<usize, LayeringError> {
    require_nonempty(n, d)?;
    Ok(d.d0.saturating_sub((n * d.d1).saturating_sub(d.d2)))
}

/// Generic `dim ⋂ ker Aᵢ`: `max(d₁ − n·d₂, 0)`.
pub fn h1_generic(n: usize, d: DimVec3) -> Result<usize, LayeringError> {
    require_nonempty(n, d)?;
    Ok(d.d1.saturating_sub(n * d.d2))
}

/// For `d ≡ 1 (mod n²+n)`, the parameter `a` of the exceptional pair.
pub fn exceptional_parameter(n: usize, total: usize) -> Option<usize> {
    let k = n * n + n;
    (total % k == 1).then(|| (total - 1) / k + 1)
}

/// `(a, n(a−1), (n²−1)(a−1))` and `((n²−1)(a−1), n(a−1)+1, a−1)`.
pub fn exceptional_pair(n: usize, a: usize) -> (DimVec3, DimVec3) {
    let b = a - 1;
    (
        DimVec3::new(a, n * b, (n * n - 1) * b),
        DimVec3::new((n * n - 1) * b, n * b + 1, b),
    )
}

fn exceptional_family(n: usize, d: DimVec3) -> Option<(usize, bool)> {
    let a = exceptional_parameter(n, d.total())?;
    let (first, second) = exceptional_pair(n, a);
    if d == first {
        Some((a, true))
    } else if d == second {
        Some((a, false))
    } else {
        None
    }
}

/// Generic socle layering on the radical stratum of `d`.
pub fn generic_socdim(n: usize, d: DimVec3) -> Result<DimVec3, LayeringError> {
    require_nonempty(n, d)?;
    if d.d1 == 0 && d.d2 == 0 {
        return Ok(d);
    }
    let big = (n * n - 1) * d.d2;
    if d.d1 > n * d.d2 {
        // when n·d₁ − d₂ < d₀ the common kernel of the C_i lifts into the socle
        let h = d.d1 - n * d.d2;
        let s0 = d.d2 + h + h0_generic(n, d)?;
        let s2 = big.min(d.d0);
        return Ok(DimVec3::new(s0, d.total() - s0 - s2, s2));
    }
    if let Some((a, true)) = exceptional_family(n, d) {
        if a >= 2 {
            return Ok(exceptional_pair(n, a).1);
        }
    }
    if h0_generic(n, d)? == 0 {
        return Ok(d.reversed());
    }
    Err(LayeringError::NoClosedForm { n, d })
}

/// Generic radical layering on the socle stratum of `s`. Transposition swaps
/// the two strata, so the formula is the same.
pub fn generic_raddim(n: usize, s: DimVec3) -> Result<DimVec3, LayeringError> {
    generic_socdim(n, s)
}

/// Whether the generic socle layering of `d` has `d` as its own generic
/// radical layering, which is what happens on a component.
pub fn fixed_point_check(n: usize, d: DimVec3) -> Result<bool, LayeringError> {
    let s = generic_socdim(n, d)?;
    Ok(matches!(generic_raddim(n, s), Ok(back) if back == d))
}

fn is_regular_component(n: usize, d: DimVec3) -> bool {
    d.d1 <= n * d.d0
        && d.d1 <= n * d.d2
        && d.d2 + d.d0 <= n * d.d1
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentEntry {
    pub layering: DimVec3,
    pub socdim: DimVec3,
    pub exceptional: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentReport {
    pub n: usize,
    pub d: usize,
    pub entries: Vec<ComponentEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

/// The layerings whose strata closures are the irreducible components of the
/// variety of `d`-dimensional modules, with their generic socle layerings.
/// Regular entries come first, then exceptional ones, each sorted.
pub fn components(n: usize, d: usize) -> Result<ComponentReport, LayeringError> {
    check_n(n)?;
    let mut warnings = Vec::new();
    let mut regular: BTreeSet<DimVec3> = DimVec3::with_total(d).filter(|&v| is_regular_component(n, v)).collect();
    let mut exceptional = BTreeSet::new();
    if let Some(a) = exceptional_parameter(n, d) {
        let (first, second) = exceptional_pair(n, a);
        for v in [first, second] {
            if rad_nonempty(n, v) {
                regular.remove(&v);
                exceptional.insert(v);
            } else {
                warnings.push(format!("exceptional vector {v} (a={a}) has an empty stratum and is left out"));
            }
        }
    }
    let entry = |v: DimVec3, exceptional: bool| -> Result<ComponentEntry, LayeringError> {
        Ok(ComponentEntry { layering: v, socdim: generic_socdim(n, v)?, exceptional })
    };
    let entries = regular
        .into_iter()
        .map(|v| entry(v, false))
        .chain(exceptional.into_iter().map(|v| entry(v, true)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ComponentReport { n, d, entries, warnings })
}

impl ComponentReport {
    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("plain data")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("n={} d={}\n", self.n, self.d);
        out.push_str(&format!("{:<12}{}\n", "layering", "generic socdim"));
        for e in &self.entries {
            let name = format!("{}{}", e.layering, if e.exceptional { "*" } else { "" });
            out.push_str(&format!("{:<12}{}\n", name, e.socdim));
        }
        if self.entries.iter().any(|e| e.exceptional) {
            out.push_str("* exceptional\n");
        }
        for w in &self.warnings {
            out.push_str(&format!("warning: {w}\n"));
        }
        out
    }

    pub fn theta_pairs(&self) -> Vec<ThetaPair> {
        self.entries
            .iter()
            .map(|e| ThetaPair { rad: e.layering.to_layering(), soc: e.socdim.to_layering() })
            .collect()
    }

    /// Generic `(raddim, socdim)` pairs are pairwise distinct and incomparable.
    pub fn theta_separated(&self) -> bool {
        let pairs = self.theta_pairs();
        pairs.iter().enumerate().all(|(i, p)| {
            pairs[i + 1..].iter().all(|q| p != q && !p.comparable(q).expect("same shape"))
        })
    }
}

/// A lattice point of the root window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RootPoint {
    pub d1: usize,
    pub d2: usize,
    pub q: i64,
    pub is_generator: bool,
    /// `(1,n)`: a root outside the cone `n·d₂ ≤ (n²−1)·d₁`.
    pub is_excluded: bool,
}

/// All `(d₁,d₂)` in `[0,max]²` with `q ≤ 1`.
pub fn roots_table(n: usize, max: usize) -> Vec<RootPoint> {
    let gens: BTreeSet<_> = root_generators(n).into_iter().collect();
    let mut out = Vec::new();
    for d1 in 0..=max {
        for d2 in 0..=max {
            let q = tits_q(n, d1, d2);
            if q <= 1 {
                out.push(RootPoint { d1, d2, q, is_generator: gens.contains(&(d1, d2)), is_excluded: (d1, d2) == (1, n) });
            }
        }
    }
    out
}

pub fn roots_csv(points: &[RootPoint]) -> String {
    let mut out = String::from("d1,d2,q,is_generator,is_excluded\n");
    for p in points {
        out.push_str(&format!("{},{},{},{},{}\n", p.d1, p.d2, p.q, p.is_generator, p.is_excluded));
    }
    out
}

/// Multiplicities of a decomposition, for display.
pub fn summarize_decomposition(parts: &[(usize, usize)]) -> Value {
    let mut counts: HashMap<(usize, usize), usize> = HashMap::new();
    for &p in parts {
        *counts.entry(p).or_default() += 1;
    }
    let mut items: Vec<_> = counts.into_iter().collect();
    items.sort();
    Value::Array(items.into_iter().map(|((a, b), c)| json!({"root": [a, b], "count": c})).collect())
}

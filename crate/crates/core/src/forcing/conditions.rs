use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use rand::Rng;
use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConditionError {
    #[error("unknown condition system `{0}` (expected trivial, cohen or poset:<file>)")]
    UnknownSystem(String),
    #[error("cannot read poset file: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed poset file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid poset: {0}")]
    Poset(String),
    #[error("malformed Cohen condition `{0}`")]
    Cohen(String),
}

/// A finite partial map from ℕ to {0, 1}.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CohenCondition(BTreeMap<u32, bool>);

impl CohenCondition {
    pub fn new<I: IntoIterator<Item = (u32, bool)>>(entries: I) -> Result<Self, (u32, bool, bool)> {
        let mut map = BTreeMap::new();
        for (k, v) in entries {
            if let Some(&old) = map.get(&k) {
                if old != v {
                    return Err((k, old, v));
                }
            }
            map.insert(k, v);
        }
        Ok(CohenCondition(map))
    }

    pub fn entries(&self) -> impl Iterator<Item = (u32, bool)> + '_ {
        self.0.iter().map(|(k, v)| (*k, *v))
    }

    /// Parses sorted or unsorted `index:bit` pairs separated by commas.
    pub fn parse(s: &str) -> Result<Self, ConditionError> {
        let bad = || ConditionError::Cohen(s.to_string());
        let s = s.trim();
        if s.is_empty() {
            return Ok(CohenCondition::default());
        }
        let mut entries = Vec::new();
        for pair in s.split(',') {
            let (k, v) = pair.trim().split_once(':').ok_or_else(bad)?;
            let k: u32 = k.trim().parse().map_err(|_| bad())?;
            let v = match v.trim() {
                "0" => false,
                "1" => true,
                _ => return Err(bad()),
            };
            entries.push((k, v));
        }
        CohenCondition::new(entries).map_err(|_| bad())
    }
}

impl fmt::Display for CohenCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(k, v)| format!("{k}:{}", u8::from(*v))).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// A forcing condition. `Unit` is the greatest condition `𝟙` in every system.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Condition {
    Unit,
    Cohen(CohenCondition),
    Poset(u32),
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Condition::Unit => f.write_str("1"),
            Condition::Cohen(c) => c.fmt(f),
            Condition::Poset(i) => write!(f, "#{i}"),
        }
    }
}

/// A finite sequence of conditions; concatenation makes it a monoid with the
/// empty sequence as unit.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CondSeq(Vec<Condition>);

impl CondSeq {
    pub fn unit() -> Self {
        CondSeq(Vec::new())
    }

    pub fn single(c: Condition) -> Self {
        CondSeq(vec![c])
    }

    pub fn from_conditions<I: IntoIterator<Item = Condition>>(it: I) -> Self {
        CondSeq(it.into_iter().collect())
    }

    pub fn concat(&self, other: &CondSeq) -> CondSeq {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        CondSeq(v)
    }

    /// Concatenation of several sequences, left to right.
    pub fn join<'a, I: IntoIterator<Item = &'a CondSeq>>(parts: I) -> CondSeq {
        CondSeq(parts.into_iter().flat_map(|s| s.0.iter().cloned()).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn conditions(&self) -> &[Condition] {
        &self.0
    }

    pub fn contains(&self, c: &Condition) -> bool {
        self.0.contains(c)
    }
}

impl fmt::Display for CondSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(" "))
    }
}

#[derive(Deserialize)]
struct PosetFile {
    elements: Vec<String>,
    /// Pairs `[a, b]` meaning `a ≤ b`; closed reflexively and transitively.
    order: Vec<(String, String)>,
    #[serde(rename = "false")]
    false_conditions: Vec<String>,
}

/// A finite inf-semilattice with a greatest element and an initial segment of
/// false conditions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PosetSemilattice {
    names: Vec<String>,
    meet: Vec<Vec<u32>>,
    top: u32,
    is_false: Vec<bool>,
}

impl PosetSemilattice {
    /// Builds the semilattice from generating order pairs `a ≤ b` (indices).
    pub fn new(names: Vec<String>, order: &[(u32, u32)], false_set: &[u32]) -> Result<Self, ConditionError> {
        let n = names.len();
        if n == 0 {
            return Err(ConditionError::Poset("no elements".into()));
        }
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in order {
            let (a, b) = (a as usize, b as usize);
            if a >= n || b >= n {
                return Err(ConditionError::Poset("order pair out of range".into()));
            }
            leq[a][b] = true;
        }
        #[allow(clippy::needless_range_loop)]
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && leq[i][j] && leq[j][i] {
                    return Err(ConditionError::Poset(format!("`{}` and `{}` form a cycle", names[i], names[j])));
                }
            }
        }
        let top = (0..n)
            .find(|&t| (0..n).all(|i| leq[i][t]))
            .ok_or_else(|| ConditionError::Poset("no greatest element".into()))? as u32;
        let mut meet = vec![vec![0u32; n]; n];
        for i in 0..n {
            for j in 0..n {
                let lower: Vec<usize> = (0..n).filter(|&k| leq[k][i] && leq[k][j]).collect();
                let glb = lower
                    .iter()
                    .copied()
                    .find(|&g| lower.iter().all(|&k| leq[k][g]))
                    .ok_or_else(|| {
                        ConditionError::Poset(format!("`{}` and `{}` have no greatest lower bound", names[i], names[j]))
                    })?;
                meet[i][j] = glb as u32;
            }
        }
        let mut is_false = vec![false; n];
        for &f in false_set {
            let f = f as usize;
            if f >= n {
                return Err(ConditionError::Poset("false condition out of range".into()));
            }
            is_false[f] = true;
        }
        for i in 0..n {
            for j in 0..n {
                if is_false[j] && leq[i][j] && !is_false[i] {
                    return Err(ConditionError::Poset("false conditions must form an initial segment".into()));
                }
            }
        }
        Ok(PosetSemilattice { names, meet, top, is_false })
    }

    pub fn from_json(text: &str) -> Result<Self, ConditionError> {
        let file: PosetFile = serde_json::from_str(text)?;
        let index = |name: &str| -> Result<u32, ConditionError> {
            file.elements
                .iter()
                .position(|e| e == name)
                .map(|i| i as u32)
                .ok_or_else(|| ConditionError::Poset(format!("unknown element `{name}`")))
        };
        let order = file
            .order
            .iter()
            .map(|(a, b)| Ok((index(a)?, index(b)?)))
            .collect::<Result<Vec<_>, ConditionError>>()?;
        let false_set = file
            .false_conditions
            .iter()
            .map(|a| index(a))
            .collect::<Result<Vec<_>, _>>()?;
        PosetSemilattice::new(file.elements.clone(), &order, &false_set)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn top(&self) -> u32 {
        self.top
    }

    pub fn name(&self, i: u32) -> &str {
        &self.names[i as usize]
    }

    pub fn meet(&self, a: u32, b: u32) -> u32 {
        self.meet[a as usize][b as usize]
    }

    pub fn is_false(&self, a: u32) -> bool {
        self.is_false[a as usize]
    }
}

/// Compatibility structure for condition sequences.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConditionSystem {
    /// Singleton carrier; every sequence is compatible.
    Trivial,
    /// Finite partial maps ℕ → {0,1}; compatible iff the union of graphs is functional.
    Cohen,
    /// Inf-semilattice; compatible iff the greatest lower bound is not false.
    Poset(Arc<PosetSemilattice>),
}

impl ConditionSystem {
    /// `trivial`, `cohen` or `poset:<file>`.
    pub fn from_name(name: &str) -> Result<Self, ConditionError> {
        match name {
            "trivial" => Ok(ConditionSystem::Trivial),
            "cohen" => Ok(ConditionSystem::Cohen),
            _ => match name.strip_prefix("poset:") {
                Some(path) => Self::load_poset(Path::new(path)),
                None => Err(ConditionError::UnknownSystem(name.to_string())),
            },
        }
    }

    pub fn load_poset(path: &Path) -> Result<Self, ConditionError> {
        let text = std::fs::read_to_string(path)?;
        Ok(ConditionSystem::Poset(Arc::new(PosetSemilattice::from_json(&text)?)))
    }

    pub fn name(&self) -> &'static str {
        match self {
            ConditionSystem::Trivial => "trivial",
            ConditionSystem::Cohen => "cohen",
            ConditionSystem::Poset(_) => "poset",
        }
    }

    pub fn unit(&self) -> Condition {
        Condition::Unit
    }

    pub fn compatible(&self, seq: &CondSeq) -> bool {
        match self {
            ConditionSystem::Trivial => true,
            ConditionSystem::Cohen => {
                let mut graph: BTreeMap<u32, bool> = BTreeMap::new();
                for c in seq.conditions() {
                    match c {
                        Condition::Unit => {}
                        Condition::Cohen(cc) => {
                            for (k, v) in cc.entries() {
                                if *graph.entry(k).or_insert(v) != v {
                                    return false;
                                }
                            }
                        }
                        Condition::Poset(_) => return false,
                    }
                }
                true
            }
            ConditionSystem::Poset(lat) => {
                let mut glb = lat.top();
                for c in seq.conditions() {
                    match c {
                        Condition::Unit => {}
                        Condition::Poset(i) if (*i as usize) < lat.len() => glb = lat.meet(glb, *i),
                        _ => return false,
                    }
                }
                !lat.is_false(glb)
            }
        }
    }

    /// Samples a condition of this system. Cohen conditions use indices below 4
    /// so that both compatible and incompatible sequences are common.
    pub fn random_condition<R: Rng + ?Sized>(&self, rng: &mut R) -> Condition {
        match self {
            ConditionSystem::Trivial => Condition::Unit,
            ConditionSystem::Cohen => {
                if rng.gen_ratio(1, 8) {
                    return Condition::Unit;
                }
                let size = rng.gen_range(0..=2);
                let entries: Vec<(u32, bool)> = (0..size).map(|_| (rng.gen_range(0..4), rng.gen())).collect();
                // keep the first binding of a repeated index
                let mut map = BTreeMap::new();
                for (k, v) in entries {
                    map.entry(k).or_insert(v);
                }
                Condition::Cohen(CohenCondition(map))
            }
            ConditionSystem::Poset(lat) => Condition::Poset(rng.gen_range(0..lat.len() as u32)),
        }
    }

    pub fn random_seq<R: Rng + ?Sized>(&self, rng: &mut R, max_len: usize) -> CondSeq {
        let len = rng.gen_range(0..=max_len);
        CondSeq::from_conditions((0..len).map(|_| self.random_condition(rng)))
    }
}

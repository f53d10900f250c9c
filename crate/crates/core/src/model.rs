//! Items, constraints, instances and the distributions they are drawn from.

use std::collections::HashSet;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

/// First id of the range reserved for dummy items.
///
/// Kept below 2^53 so ids survive a round trip through any JSON reader that
/// stores numbers as doubles.
pub const DUMMY_ID_BASE: u64 = 1 << 52;

/// Index of a property (category), `0..d`.
pub type Property = usize;

/// A candidate: the properties it possesses and its value for each of them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Item {
    id: u64,
    props: Vec<(Property, f64)>,
}

impl Item {
    /// Builds an item; `props` is sorted by property index.
    pub fn new(id: u64, mut props: Vec<(Property, f64)>) -> Self {
        props.sort_by_key(|&(p, _)| p);
        Item { id, props }
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn props(&self) -> &[(Property, f64)] {
        &self.props
    }

    pub fn value(&self, p: Property) -> Option<f64> {
        self.props
            .binary_search_by_key(&p, |&(q, _)| q)
            .ok()
            .map(|i| self.props[i].1)
    }

    pub fn has(&self, p: Property) -> bool {
        self.value(p).is_some()
    }

    pub fn is_dummy(&self) -> bool {
        is_dummy_id(self.id)
    }
}

pub fn is_dummy_id(id: u64) -> bool {
    id >= DUMMY_ID_BASE
}

/// Per-property capacities `k_1..k_d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawSpec", into = "RawSpec")]
pub struct ConstraintSpec {
    caps: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct RawSpec {
    caps: Vec<usize>,
}

impl TryFrom<RawSpec> for ConstraintSpec {
    type Error = Error;

    fn try_from(raw: RawSpec) -> Result<Self> {
        ConstraintSpec::new(raw.caps)
    }
}

impl From<ConstraintSpec> for RawSpec {
    fn from(spec: ConstraintSpec) -> Self {
        RawSpec { caps: spec.caps }
    }
}

impl ConstraintSpec {
    pub fn new(caps: Vec<usize>) -> Result<Self> {
        if caps.is_empty() {
            return Err(Error::config("at least one property capacity is required"));
        }
        if let Some(i) = caps.iter().position(|&c| c == 0) {
            return Err(Error::config(format!("capacity of property {i} must be positive")));
        }
        Ok(ConstraintSpec { caps })
    }

    /// `d` properties, each with capacity one.
    pub fn unit(d: usize) -> Result<Self> {
        Self::new(vec![1; d])
    }

    pub fn caps(&self) -> &[usize] {
        &self.caps
    }

    pub fn d(&self) -> usize {
        self.caps.len()
    }

    pub fn k(&self) -> usize {
        self.caps.iter().sum()
    }
}

/// Items in arrival order; the id of each item is its position.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Instance {
    items: Vec<Item>,
}

impl Instance {
    pub fn new(items: Vec<Item>) -> Result<Self> {
        for (pos, item) in items.iter().enumerate() {
            if item.id != pos as u64 {
                return Err(Error::input(format!(
                    "item at position {pos} has id {}; instance ids must equal arrival positions",
                    item.id
                )));
            }
        }
        Ok(Instance { items })
    }

    pub fn items(&self) -> &[Item] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn into_items(self) -> Vec<Item> {
        self.items
    }
}

/// The law items are drawn from. Values are uniform on `[0, 1)`,
/// independently for every possessed property.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum DistributionSpec {
    /// Every item possesses property 0 only.
    SinglePropertyUniform {
        #[serde(default = "one")]
        d: usize,
    },
    /// Every item possesses exactly one of `d` equiprobable properties.
    DisjointPropertiesUniform { d: usize },
    /// Property `p` is possessed independently with probability `probs[p]`;
    /// items that come out with no property are redrawn.
    OverlapBernoulli { d: usize, probs: Vec<f64> },
}

fn one() -> usize {
    1
}

impl DistributionSpec {
    pub fn d(&self) -> usize {
        match self {
            DistributionSpec::SinglePropertyUniform { d }
            | DistributionSpec::DisjointPropertiesUniform { d }
            | DistributionSpec::OverlapBernoulli { d, .. } => *d,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            DistributionSpec::SinglePropertyUniform { d } => {
                if *d != 1 {
                    return Err(Error::config(format!(
                        "single-property-uniform has exactly one property, got d={d}"
                    )));
                }
            }
            DistributionSpec::DisjointPropertiesUniform { d } => {
                if *d == 0 {
                    return Err(Error::config("disjoint-properties-uniform needs d >= 1"));
                }
            }
            DistributionSpec::OverlapBernoulli { d, probs } => {
                if *d == 0 {
                    return Err(Error::config("overlap-bernoulli needs d >= 1"));
                }
                if probs.len() != *d {
                    return Err(Error::config(format!(
                        "overlap-bernoulli has d={d} but {} membership probabilities",
                        probs.len()
                    )));
                }
                if let Some(p) = probs.iter().find(|p| !(0.0..=1.0).contains(*p)) {
                    return Err(Error::config(format!("membership probability {p} outside [0,1]")));
                }
                if probs.iter().all(|&p| p == 0.0) {
                    return Err(Error::config(
                        "overlap-bernoulli needs at least one positive membership probability",
                    ));
                }
            }
        }
        Ok(())
    }

    fn draw_props(&self, rng: &mut impl Rng) -> Vec<(Property, f64)> {
        match self {
            DistributionSpec::SinglePropertyUniform { .. } => vec![(0, rng.gen::<f64>())],
            DistributionSpec::DisjointPropertiesUniform { d } => {
                let p = rng.gen_range(0..*d);
                vec![(p, rng.gen::<f64>())]
            }
            DistributionSpec::OverlapBernoulli { probs, .. } => loop {
                let members: Vec<Property> = probs
                    .iter()
                    .enumerate()
                    .filter(|&(_, &q)| rng.gen::<f64>() < q)
                    .map(|(p, _)| p)
                    .collect();
                if !members.is_empty() {
                    break members.into_iter().map(|p| (p, rng.gen::<f64>())).collect();
                }
            },
        }
    }
}

/// Draws `n` i.i.d. items. The result depends only on `(dist, n, seed)`.
pub fn sample_instance(dist: &DistributionSpec, n: usize, seed: u64) -> Result<Instance> {
    dist.validate()?;
    let mut rng = rng_from_seed(seed);
    let items = (0..n)
        .map(|i| Item::new(i as u64, dist.draw_props(&mut rng)))
        .collect();
    Ok(Instance { items })
}

/// The `k` zero-valued items possessing every property that keep every
/// instance feasible.
pub fn dummy_items(spec: &ConstraintSpec) -> Vec<Item> {
    let props: Vec<(Property, f64)> = (0..spec.d()).map(|p| (p, 0.0)).collect();
    (0..spec.k())
        .map(|j| Item::new(DUMMY_ID_BASE + j as u64, props.clone()))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    ValueOutOfRange { id: u64, property: Property, value: f64 },
    UnknownProperty { id: u64, property: Property },
    DuplicateProperty { id: u64, property: Property },
    DuplicateId { id: u64 },
    EmptyProps { id: u64 },
    ReservedId { id: u64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ValueOutOfRange { id, property, value } => {
                write!(f, "item {id}: value {value} of property {property} out of range [0,1]")
            }
            Violation::UnknownProperty { id, property } => {
                write!(f, "item {id}: unknown property {property}")
            }
            Violation::DuplicateProperty { id, property } => {
                write!(f, "item {id}: property {property} listed twice")
            }
            Violation::DuplicateId { id } => write!(f, "duplicate item id {id}"),
            Violation::EmptyProps { id } => write!(f, "item {id}: no properties"),
            Violation::ReservedId { id } => write!(f, "item {id}: id is in the dummy range"),
        }
    }
}

/// Checks an instance against a spec. An empty report means valid.
pub fn validate_instance(inst: &Instance, spec: &ConstraintSpec) -> Vec<Violation> {
    validate_items(inst.items(), spec, false)
}

/// Checks an arbitrary item sequence. With `allow_dummies`, ids in the
/// reserved dummy range are accepted.
pub fn validate_items(items: &[Item], spec: &ConstraintSpec, allow_dummies: bool) -> Vec<Violation> {
    let mut report = Vec::new();
    let mut seen = HashSet::with_capacity(items.len());
    for item in items {
        let id = item.id;
        if !seen.insert(id) {
            report.push(Violation::DuplicateId { id });
        }
        if item.is_dummy() && !allow_dummies {
            report.push(Violation::ReservedId { id });
        }
        if item.props.is_empty() {
            report.push(Violation::EmptyProps { id });
        }
        for (j, &(property, value)) in item.props.iter().enumerate() {
            if j > 0 && item.props[j - 1].0 == property {
                report.push(Violation::DuplicateProperty { id, property });
            }
            if property >= spec.d() {
                report.push(Violation::UnknownProperty { id, property });
            }
            if !(0.0..=1.0).contains(&value) {
                report.push(Violation::ValueOutOfRange { id, property, value });
            }
        }
    }
    report
}

pub(crate) fn ensure_valid(items: &[Item], spec: &ConstraintSpec) -> Result<()> {
    match validate_items(items, spec, false).first() {
        None => Ok(()),
        Some(v) => Err(Error::input(v.to_string())),
    }
}

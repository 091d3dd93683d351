//! Domain types: problem instances, points, inequalities, and exact
//! enumeration of the feasible 0/1 set.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::indexset::IndexSet;
use crate::rat::{self, Rat, RawRat};

/// Default ceiling for 2^n enumeration; the CLI can override it via
/// `CARDCUT_GUARD_N`.
pub const DEFAULT_ENUM_GUARD: usize = 24;

/// A problem instance: ground set size `n`, an ordered family of `m`
/// distinct nonempty subsets, and cardinality bounds `l <= sum z_j <= u`.
///
/// Constructed through [`Instance::new`] or [`parse_instance`], which
/// canonicalize (sort each member set) and validate all invariants.
#[derive(Clone, PartialEq, Eq)]
pub struct Instance {
    n: usize,
    l: usize,
    u: usize,
    sets: Vec<IndexSet>,
}

impl Instance {
    /// Validates and canonicalizes a raw description with 1-based member
    /// indices.
    pub fn new(n: usize, l: usize, u: usize, sets_1based: &[Vec<usize>]) -> Result<Instance> {
        if n == 0 {
            return Err(Error::parse("n must be positive"));
        }
        if l > u {
            return Err(Error::parse(format!("l exceeds u (l={l}, u={u})")));
        }
        if u > n {
            return Err(Error::parse(format!("u exceeds n (u={u}, n={n})")));
        }
        if sets_1based.is_empty() {
            return Err(Error::parse("sets must contain at least one subset"));
        }
        let mut sets = Vec::with_capacity(sets_1based.len());
        for (i, raw) in sets_1based.iter().enumerate() {
            if raw.is_empty() {
                return Err(Error::parse(format!("empty set at position {}", i + 1)));
            }
            let s = IndexSet::from_1based(raw, n).map_err(|j| {
                Error::parse(format!(
                    "out-of-range index {} in set {} (valid range 1..={})",
                    j,
                    i + 1,
                    n
                ))
            })?;
            sets.push(s);
        }
        for i in 0..sets.len() {
            for k in i + 1..sets.len() {
                if sets[i] == sets[k] {
                    return Err(Error::parse(format!(
                        "duplicate sets at positions {} and {}",
                        i + 1,
                        k + 1
                    )));
                }
            }
        }
        Ok(Instance { n, l, u, sets })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of member sets.
    pub fn m(&self) -> usize {
        self.sets.len()
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn u(&self) -> usize {
        self.u
    }

    pub fn sets(&self) -> &[IndexSet] {
        &self.sets
    }

    /// Member set by 0-based index.
    pub fn set(&self, i: usize) -> &IndexSet {
        &self.sets[i]
    }

    /// True when the family forms a strict chain in the given order.
    pub fn is_nested(&self) -> bool {
        self.sets
            .windows(2)
            .all(|w| w[0].is_subset_of(&w[1]) && w[0] != w[1])
    }

    /// Union of all member sets.
    pub fn family_union(&self) -> IndexSet {
        let mut acc = IndexSet::new();
        for s in &self.sets {
            acc = acc.union(s);
        }
        acc
    }

    /// Delta bits produced by a z-support mask (bit `j` of `zmask` means
    /// `z_{j+1} = 1`); bit `i` of the result means `delta_{i+1} = 1`.
    pub fn delta_mask_of(&self, zmask: u64) -> u64 {
        debug_assert!(self.n <= 64);
        let mut d = 0u64;
        for (i, s) in self.sets.iter().enumerate() {
            let sm = s.as_mask().expect("set fits in 64 bits");
            if sm & zmask == 0 {
                d |= 1u64 << i;
            }
        }
        d
    }
}

impl fmt::Debug for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Instance(n={}, l={}, u={}, sets=[", self.n, self.l, self.u)?;
        for (i, s) in self.sets.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, "])")
    }
}

#[derive(Deserialize)]
struct RawInstance {
    n: usize,
    l: usize,
    u: usize,
    sets: Vec<Vec<usize>>,
}

impl Serialize for Instance {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Out {
            n: usize,
            l: usize,
            u: usize,
            sets: Vec<Vec<usize>>,
            #[serde(skip_serializing_if = "std::ops::Not::not")]
            nested: bool,
        }
        Out {
            n: self.n,
            l: self.l,
            u: self.u,
            sets: self.sets.iter().map(|s| s.to_vec_1based()).collect(),
            nested: self.is_nested(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Instance {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawInstance::deserialize(d)?;
        Instance::new(raw.n, raw.l, raw.u, &raw.sets).map_err(D::Error::custom)
    }
}

/// Parses a UTF-8 JSON document `{"n":..,"l":..,"u":..,"sets":[[..],..]}`.
pub fn parse_instance(text: &str) -> Result<Instance> {
    serde_json::from_str(text).map_err(|e| Error::parse(e.to_string()))
}

/// A (possibly fractional) point in the `(z, delta)` space.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Point {
    #[serde(with = "rat::serde_rat_vec")]
    pub z: Vec<Rat>,
    #[serde(with = "rat::serde_rat_vec")]
    pub delta: Vec<Rat>,
}

impl Point {
    /// True when every coordinate is 0 or 1.
    pub fn is_binary(&self) -> bool {
        self.z
            .iter()
            .chain(self.delta.iter())
            .all(|v| v.is_zero() || v.is_one())
    }

    /// True when every coordinate lies in `[0, 1]`.
    pub fn in_unit_box(&self) -> bool {
        self.z
            .iter()
            .chain(self.delta.iter())
            .all(|v| !v.is_negative() && *v <= Rat::one())
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.z.len(), self.delta.len())
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "z=(")?;
        for (i, v) in self.z.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", rat::format_rat(v))?;
        }
        write!(f, ") delta=(")?;
        for (i, v) in self.delta.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", rat::format_rat(v))?;
        }
        write!(f, ")")
    }
}

/// Constraint sense.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "=")]
    Eq,
}

/// A sparse linear inequality `alpha^T z + beta^T delta (sense) gamma`.
///
/// Sparse maps never hold zero coefficients; keys are 0-based internally and
/// 1-based in serialized form.  `tag` records which generator produced the
/// row.
#[derive(Clone, PartialEq, Eq)]
pub struct Inequality {
    pub alpha: BTreeMap<usize, Rat>,
    pub beta: BTreeMap<usize, Rat>,
    pub gamma: Rat,
    pub sense: Sense,
    pub tag: String,
}

impl Inequality {
    pub fn new(
        alpha: impl IntoIterator<Item = (usize, Rat)>,
        beta: impl IntoIterator<Item = (usize, Rat)>,
        gamma: Rat,
        sense: Sense,
        tag: impl Into<String>,
    ) -> Inequality {
        let alpha = alpha.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        let beta = beta.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Inequality {
            alpha,
            beta,
            gamma,
            sense,
            tag: tag.into(),
        }
    }

    /// Left-hand side value `alpha^T z + beta^T delta` at a point.
    pub fn lhs(&self, p: &Point) -> Rat {
        let mut acc = Rat::zero();
        for (&j, c) in &self.alpha {
            acc += c * &p.z[j];
        }
        for (&i, c) in &self.beta {
            acc += c * &p.delta[i];
        }
        acc
    }

    /// Exact slack: `gamma - lhs` for `<=` and `=`, `lhs - gamma` for `>=`.
    /// Satisfaction means nonnegative slack (zero slack for equalities).
    pub fn slack(&self, p: &Point) -> Rat {
        let lhs = self.lhs(p);
        match self.sense {
            Sense::Le | Sense::Eq => &self.gamma - lhs,
            Sense::Ge => lhs - &self.gamma,
        }
    }

    pub fn is_satisfied_by(&self, p: &Point) -> bool {
        let s = self.slack(p);
        match self.sense {
            Sense::Eq => s.is_zero(),
            _ => !s.is_negative(),
        }
    }

    pub fn is_tight_at(&self, p: &Point) -> bool {
        self.slack(p).is_zero()
    }

    /// Integer view `(alpha, beta, gamma)` when every coefficient is an
    /// integer fitting `i64`; enables fast exact evaluation at 0/1 points.
    pub fn integer_view(&self) -> Option<IntegerView> {
        let conv = |m: &BTreeMap<usize, Rat>| -> Option<Vec<(usize, i64)>> {
            m.iter().map(|(&k, v)| Some((k, rat::as_i64(v)?))).collect()
        };
        Some(IntegerView {
            alpha: conv(&self.alpha)?,
            beta: conv(&self.beta)?,
            gamma: rat::as_i64(&self.gamma)?,
            sense: self.sense,
        })
    }
}

impl fmt::Debug for Inequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (&j, c) in &self.alpha {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "{}*z{}", rat::format_rat(c), j + 1)?;
            first = false;
        }
        for (&i, c) in &self.beta {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "{}*d{}", rat::format_rat(c), i + 1)?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        let op = match self.sense {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        };
        write!(f, " {} {} [{}]", op, rat::format_rat(&self.gamma), self.tag)
    }
}

/// All-integer coefficient view of an [`Inequality`].
pub struct IntegerView {
    pub alpha: Vec<(usize, i64)>,
    pub beta: Vec<(usize, i64)>,
    pub gamma: i64,
    pub sense: Sense,
}

impl IntegerView {
    /// Slack at a 0/1 point given as bit masks.
    pub fn slack_at_masks(&self, zmask: u64, dmask: u64) -> i64 {
        let mut lhs = 0i64;
        for &(j, c) in &self.alpha {
            if zmask & (1u64 << j) != 0 {
                lhs += c;
            }
        }
        for &(i, c) in &self.beta {
            if dmask & (1u64 << i) != 0 {
                lhs += c;
            }
        }
        match self.sense {
            Sense::Le | Sense::Eq => self.gamma - lhs,
            Sense::Ge => lhs - self.gamma,
        }
    }
}

mod serde_coeff_map {
    use super::*;

    pub fn serialize<S: Serializer>(
        m: &BTreeMap<usize, Rat>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let out: BTreeMap<String, String> = m
            .iter()
            .map(|(&k, v)| ((k + 1).to_string(), rat::format_rat(v)))
            .collect();
        out.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<BTreeMap<usize, Rat>, D::Error> {
        let raw: BTreeMap<String, RawRat> = BTreeMap::deserialize(d)?;
        let mut out = BTreeMap::new();
        for (k, v) in raw {
            let idx: usize = k
                .parse()
                .map_err(|_| D::Error::custom(format!("bad coefficient key {k:?}")))?;
            if idx == 0 {
                return Err(D::Error::custom("coefficient keys are 1-based"));
            }
            let r = v.into_rat().map_err(D::Error::custom)?;
            if !r.is_zero() {
                out.insert(idx - 1, r);
            }
        }
        Ok(out)
    }
}

impl Serialize for Inequality {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Out<'a> {
            tag: &'a str,
            sense: Sense,
            #[serde(with = "serde_coeff_map")]
            alpha: &'a BTreeMap<usize, Rat>,
            #[serde(with = "serde_coeff_map")]
            beta: &'a BTreeMap<usize, Rat>,
            gamma: String,
        }
        Out {
            tag: &self.tag,
            sense: self.sense,
            alpha: &self.alpha,
            beta: &self.beta,
            gamma: rat::format_rat(&self.gamma),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Inequality {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct In {
            #[serde(default)]
            tag: String,
            sense: Sense,
            #[serde(with = "serde_coeff_map")]
            alpha: BTreeMap<usize, Rat>,
            #[serde(with = "serde_coeff_map")]
            beta: BTreeMap<usize, Rat>,
            gamma: RawRat,
        }
        let raw = In::deserialize(d)?;
        Ok(Inequality {
            alpha: raw.alpha,
            beta: raw.beta,
            gamma: raw.gamma.into_rat().map_err(D::Error::custom)?,
            sense: raw.sense,
            tag: raw.tag,
        })
    }
}

/// A dense linear objective over the `(z, delta)` space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Objective {
    #[serde(with = "rat::serde_rat_vec")]
    pub z: Vec<Rat>,
    #[serde(with = "rat::serde_rat_vec")]
    pub delta: Vec<Rat>,
}

impl Objective {
    pub fn zeros(n: usize, m: usize) -> Objective {
        Objective {
            z: vec![Rat::zero(); n],
            delta: vec![Rat::zero(); m],
        }
    }

    pub fn value_at(&self, p: &Point) -> Rat {
        let mut acc = Rat::zero();
        for (c, v) in self.z.iter().zip(&p.z) {
            acc += c * v;
        }
        for (c, v) in self.delta.iter().zip(&p.delta) {
            acc += c * v;
        }
        acc
    }

    pub fn check_dims(&self, inst: &Instance) -> Result<()> {
        if self.z.len() != inst.n() || self.delta.len() != inst.m() {
            return Err(Error::domain(format!(
                "objective dimensions ({}, {}) do not match instance ({}, {})",
                self.z.len(),
                self.delta.len(),
                inst.n(),
                inst.m()
            )));
        }
        Ok(())
    }
}

/// The point `v^U`: `z_j = 1` iff `j` is in `U`, with each `delta_i` the
/// product of `(1 - z_j)` over the members of `S_i`.
pub fn lift_point(inst: &Instance, members: &IndexSet) -> Result<Point> {
    let k = members.card();
    if k < inst.l() || k > inst.u() {
        return Err(Error::domain(format!(
            "|U| = {} outside cardinality bounds [{}, {}]",
            k,
            inst.l(),
            inst.u()
        )));
    }
    if let Some(j) = members.iter().find(|&j| j >= inst.n()) {
        return Err(Error::domain(format!(
            "U contains index {} beyond ground set size {}",
            j + 1,
            inst.n()
        )));
    }
    let z: Vec<Rat> = (0..inst.n())
        .map(|j| {
            if members.contains(j) {
                Rat::one()
            } else {
                Rat::zero()
            }
        })
        .collect();
    let delta: Vec<Rat> = inst
        .sets()
        .iter()
        .map(|s| {
            if s.is_disjoint_from(members) {
                Rat::one()
            } else {
                Rat::zero()
            }
        })
        .collect();
    Ok(Point { z, delta })
}

/// Independent membership predicate: re-checks the product formula and the
/// cardinality window for a binary point.
pub fn is_member(inst: &Instance, p: &Point) -> bool {
    if p.z.len() != inst.n() || p.delta.len() != inst.m() || !p.is_binary() {
        return false;
    }
    let ones: usize = p.z.iter().filter(|v| v.is_one()).count();
    if ones < inst.l() || ones > inst.u() {
        return false;
    }
    inst.sets().iter().zip(&p.delta).all(|(s, d)| {
        let mut prod = Rat::one();
        for j in s.iter() {
            prod *= Rat::one() - &p.z[j];
        }
        prod == *d
    })
}

/// Support masks `(zmask, dmask)` of all feasible points, in ascending
/// z-mask order.  Shared scaffolding for [`enumerate_points`] and the
/// brute-force oracles.
pub fn enumerate_masks(inst: &Instance, guard: usize) -> Result<Vec<(u64, u64)>> {
    let n = inst.n();
    if n > guard {
        return Err(Error::Guard { n, limit: guard });
    }
    if n > 63 {
        return Err(Error::Guard { n, limit: 63 });
    }
    let mut out = Vec::new();
    for zmask in 0u64..(1u64 << n) {
        let k = zmask.count_ones() as usize;
        if k < inst.l() || k > inst.u() {
            continue;
        }
        out.push((zmask, inst.delta_mask_of(zmask)));
    }
    Ok(out)
}

/// The point encoded by a `(zmask, dmask)` pair.
pub fn point_of_masks(inst: &Instance, zmask: u64, dmask: u64) -> Point {
    let z = (0..inst.n())
        .map(|j| {
            if zmask & (1 << j) != 0 {
                Rat::one()
            } else {
                Rat::zero()
            }
        })
        .collect();
    let delta = (0..inst.m())
        .map(|i| {
            if dmask & (1 << i) != 0 {
                Rat::one()
            } else {
                Rat::zero()
            }
        })
        .collect();
    Point { z, delta }
}

/// Enumerates all feasible points `v^U` in ascending z-mask order
/// (deterministic contract), guarded by the default enumeration bound.
pub fn enumerate_points(inst: &Instance) -> Result<Vec<Point>> {
    enumerate_points_with_guard(inst, DEFAULT_ENUM_GUARD)
}

/// As [`enumerate_points`] with an explicit guard.
pub fn enumerate_points_with_guard(inst: &Instance, guard: usize) -> Result<Vec<Point>> {
    Ok(enumerate_masks(inst, guard)?
        .into_iter()
        .map(|(zm, dm)| point_of_masks(inst, zm, dm))
        .collect())
}

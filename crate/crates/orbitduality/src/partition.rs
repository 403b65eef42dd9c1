//! Partitions with the B/C multiplicity conditions: membership, transpose,
//! dominance, collapse to the nearest member, specialness, the duality map
//! between the two families, and enumeration.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Which classical family a partition belongs to.
///
/// * `B` — partitions of an odd total in which every even part occurs an
///   even number of times.
/// * `C` — partitions of an even total in which every odd part occurs an
///   even number of times.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OrbitType {
    B,
    C,
}

impl OrbitType {
    /// The other family.
    pub fn flip(self) -> Self {
        match self {
            OrbitType::B => OrbitType::C,
            OrbitType::C => OrbitType::B,
        }
    }

    /// Parity every total must have: 1 for B, 0 for C.
    fn total_parity(self) -> u64 {
        match self {
            OrbitType::B => 1,
            OrbitType::C => 0,
        }
    }

    /// A part value is multiplicity-constrained when its parity equals this.
    fn constrained_parity(self) -> u64 {
        match self {
            OrbitType::B => 0, // even parts must have even multiplicity
            OrbitType::C => 1, // odd parts must have even multiplicity
        }
    }

    pub fn letter(self) -> char {
        match self {
            OrbitType::B => 'B',
            OrbitType::C => 'C',
        }
    }
}

impl fmt::Display for OrbitType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// A partition stored in canonical form: weakly decreasing positive parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Partition {
    parts: Vec<u64>,
}

impl Partition {
    /// Builds a partition from arbitrary part values: zeros are dropped and
    /// the rest sorted decreasingly.
    pub fn new(mut parts: Vec<u64>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.parts.iter().sum()
    }

    /// Multiplicity of a given part value.
    pub fn multiplicity(&self, value: u64) -> usize {
        self.parts.iter().filter(|&&p| p == value).count()
    }

    /// Distinct part values, decreasing.
    pub fn distinct_values(&self) -> Vec<u64> {
        let mut vals = self.parts.clone();
        vals.dedup();
        vals
    }

    /// Conjugate partition (column lengths of the Young diagram).
    pub fn transpose(&self) -> Partition {
        let Some(&first) = self.parts.first() else {
            return Partition::empty();
        };
        let mut cols = Vec::with_capacity(first as usize);
        for col in 1..=first {
            cols.push(self.parts.iter().filter(|&&p| p >= col).count() as u64);
        }
        Partition { parts: cols }
    }

    /// Number of parts `>= value`, i.e. the transpose entry at `value`
    /// (zero when `value` exceeds the largest part; `value` must be >= 1).
    pub fn transpose_at(&self, value: u64) -> u64 {
        self.parts.iter().filter(|&&p| p >= value).count() as u64
    }

    /// Whether `self` dominates `other`: every prefix sum of `self` is at
    /// least the corresponding prefix sum of `other` (shorter partitions are
    /// padded with zeros). Only meaningful for equal totals.
    pub fn dominates(&self, other: &Partition) -> bool {
        let rows = self.parts.len().max(other.parts.len());
        let mut acc_self = 0u64;
        let mut acc_other = 0u64;
        for i in 0..rows {
            acc_self += self.parts.get(i).copied().unwrap_or(0);
            acc_other += other.parts.get(i).copied().unwrap_or(0);
            if acc_self < acc_other {
                return false;
            }
        }
        true
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

/// Multiplicity test for the family: every constrained-parity part value
/// occurs an even number of times, and the total has the family's parity.
pub fn is_member(d: &Partition, t: OrbitType) -> bool {
    if d.total() % 2 != t.total_parity() {
        return false;
    }
    for v in d.distinct_values() {
        if v % 2 == t.constrained_parity() && d.multiplicity(v) % 2 == 1 {
            return false;
        }
    }
    true
}

fn require_total_parity(d: &Partition, t: OrbitType) -> Result<()> {
    if d.total() % 2 != t.total_parity() {
        return Err(Error::ParityMismatch {
            total: d.total(),
            orbit_type: t.letter(),
        });
    }
    Ok(())
}

/// Largest constrained part value with odd multiplicity, if any.
fn first_violation(parts: &[u64], t: OrbitType) -> Option<u64> {
    let mut i = 0;
    while i < parts.len() {
        let v = parts[i];
        let mut j = i;
        while j < parts.len() && parts[j] == v {
            j += 1;
        }
        if v % 2 == t.constrained_parity() && (j - i) % 2 == 1 {
            return Some(v);
        }
        i = j;
    }
    None
}

/// Collapse of `d` to the family: the unique dominance-greatest member lying
/// below `d`. Repeatedly fixes the largest offending part value by moving a
/// unit box down the diagram.
pub fn collapse(d: &Partition, t: OrbitType) -> Result<Partition> {
    require_total_parity(d, t)?;
    let mut parts = d.parts().to_vec();
    // Each pass strictly lowers the partition in dominance order; the chain
    // length is far below total^2.
    let fuel = (d.total() as usize + 2) * (d.total() as usize + 2);
    for _ in 0..fuel {
        let Some(q) = first_violation(&parts, t) else {
            let out = Partition::new(parts);
            debug_assert!(is_member(&out, t));
            return Ok(out);
        };
        // q >= 2: a constrained value of 1 with odd multiplicity would force
        // odd count of odd parts, contradicting the total parity.
        debug_assert!(q >= 2);
        let last_q = parts.iter().rposition(|&p| p == q).expect("value present");
        parts[last_q] = q - 1;
        match parts.iter().position(|&p| p + 1 < q) {
            Some(j) => parts[j] += 1,
            None => parts.push(1),
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        parts.retain(|&p| p > 0);
    }
    unreachable!("collapse did not terminate for {d} (internal bug)");
}

/// Specialness: the transpose satisfies the same family's multiplicity
/// condition.
pub fn is_special(d: &Partition, t: OrbitType) -> bool {
    if !is_member(d, t) {
        return false;
    }
    let tr = d.transpose();
    for v in tr.distinct_values() {
        if v % 2 == t.constrained_parity() && tr.multiplicity(v) % 2 == 1 {
            return false;
        }
    }
    true
}

fn require_special(d: &Partition, t: OrbitType) -> Result<()> {
    if !is_member(d, t) {
        return Err(Error::NotAMember(format!("{d} (type {t})")));
    }
    if !is_special(d, t) {
        return Err(Error::NotSpecial(format!("{d} (type {t})")));
    }
    Ok(())
}

/// Duality map between the special members of the two families.
///
/// * from C: add one box to the first row, then collapse into B;
/// * from B: remove one box from the last row, then collapse into C.
///
/// Restricted to special partitions these are mutually inverse bijections.
pub fn springer_dual(d: &Partition, t: OrbitType) -> Result<Partition> {
    require_special(d, t)?;
    let mut parts = d.parts().to_vec();
    match t {
        OrbitType::C => {
            if parts.is_empty() {
                parts.push(1);
            } else {
                parts[0] += 1;
            }
            collapse(&Partition::new(parts), OrbitType::B)
        }
        OrbitType::B => {
            let last = parts.len() - 1; // a type-B member has odd total, hence parts
            parts[last] -= 1;
            collapse(&Partition::new(parts), OrbitType::C)
        }
    }
}

/// Which partitions `enumerate_partitions` yields.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnumerateFilter {
    All,
    SpecialOnly,
}

/// All members of the family with the given total, in decreasing
/// lexicographic order, optionally restricted to special ones.
pub fn enumerate_partitions(
    t: OrbitType,
    total: u64,
    filter: EnumerateFilter,
) -> Result<Vec<Partition>> {
    if total % 2 != t.total_parity() {
        return Err(Error::ParityMismatch {
            total,
            orbit_type: t.letter(),
        });
    }
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    gen_partitions(total, total, &mut prefix, &mut |parts| {
        let d = Partition::new(parts.to_vec());
        let keep = match filter {
            EnumerateFilter::All => is_member(&d, t),
            EnumerateFilter::SpecialOnly => is_special(&d, t),
        };
        if keep {
            out.push(d);
        }
    });
    Ok(out)
}

fn gen_partitions(remaining: u64, max_part: u64, prefix: &mut Vec<u64>, emit: &mut impl FnMut(&[u64])) {
    if remaining == 0 {
        emit(prefix);
        return;
    }
    let hi = remaining.min(max_part);
    for p in (1..=hi).rev() {
        prefix.push(p);
        gen_partitions(remaining - p, p, prefix, emit);
        prefix.pop();
    }
}

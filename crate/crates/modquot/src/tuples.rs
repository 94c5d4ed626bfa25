//! Tuples of cyclically reduced relators, their symmetrized closures, and
//! the equivalence generated by reordering, rotating entries, inverting
//! entries, and applying the `b <-> B` swap to the whole tuple.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;
use rand::RngCore;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::words::{sample_cyclic_with, CyclicWord, Word};
use crate::{Error, Result};

/// Cap on explicit orbit enumeration, in group elements.
pub const DEFAULT_ORBIT_BUDGET: u128 = 10_000_000;

/// An ordered tuple of nonempty cyclically reduced words.
///
/// Entries are concrete words; rotating an entry produces a different tuple.
/// Rotation-insensitive comparisons go through [`canonical_tuple`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RelatorTuple {
    relators: Vec<CyclicWord>,
}

impl RelatorTuple {
    pub fn new(relators: Vec<CyclicWord>) -> Result<RelatorTuple> {
        if relators.is_empty() {
            return Err(Error::EmptyTuple);
        }
        if let Some(index) = relators.iter().position(|r| r.is_empty()) {
            return Err(Error::EmptyRelator { index });
        }
        Ok(RelatorTuple { relators })
    }

    /// Parses the relator-file format: one relator per line; blank lines and
    /// lines starting with `#` are skipped; tuple order is line order.
    pub fn parse(text: &str) -> Result<RelatorTuple> {
        let mut relators = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let word = CyclicWord::parse(line).map_err(|e| Error::MalformedLine {
                line: idx + 1,
                reason: e.to_string(),
            })?;
            relators.push(word);
        }
        RelatorTuple::new(relators)
    }

    pub fn relators(&self) -> &[CyclicWord] {
        &self.relators
    }

    pub fn relator_count(&self) -> usize {
        self.relators.len()
    }

    pub fn lengths(&self) -> Vec<usize> {
        self.relators.iter().map(|r| r.len()).collect()
    }

    /// Length of the longest entry.
    pub fn max_length(&self) -> usize {
        self.relators.iter().map(|r| r.len()).max().unwrap_or(0)
    }

    /// The common entry length, if all entries have one.
    pub fn equal_length(&self) -> Option<usize> {
        let n = self.relators[0].len();
        self.relators.iter().all(|r| r.len() == n).then_some(n)
    }

    /// Applies the `b <-> B` swap to every entry.
    pub fn eta(&self) -> RelatorTuple {
        RelatorTuple {
            relators: self.relators.iter().map(|r| r.eta()).collect(),
        }
    }

    /// Draws a tuple of `m` independent uniform cyclically reduced words of
    /// length exactly `n`.
    pub fn sample_equal_length(n: usize, m: usize, rng: &mut impl RngCore) -> Result<RelatorTuple> {
        if m == 0 {
            return Err(Error::EmptyTuple);
        }
        let relators = (0..m)
            .map(|_| sample_cyclic_with(n, rng))
            .collect::<Result<Vec<_>>>()?;
        Ok(RelatorTuple { relators })
    }

    #[cfg(test)]
    pub(crate) fn from_relators_unchecked(relators: Vec<CyclicWord>) -> RelatorTuple {
        debug_assert!(!relators.is_empty() && relators.iter().all(|r| !r.is_empty()));
        RelatorTuple { relators }
    }
}

impl fmt::Display for RelatorTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.relators.iter().format(", "))
    }
}

impl Serialize for RelatorTuple {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.relators.len()))?;
        for r in &self.relators {
            seq.serialize_element(r)?;
        }
        seq.end()
    }
}

/// One labeled rotation of one relator or of its inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Occurrence {
    /// Index of the originating relator in the tuple.
    pub relator: usize,
    /// True when this rotation comes from the inverse of the relator.
    pub inverted: bool,
    /// Rotation offset into the (possibly inverted) relator.
    pub offset: usize,
    /// The rotated word.
    pub word: Word,
}

/// The symmetrized closure of a tuple: all rotations of every entry and of
/// every entry's inverse.
///
/// `members` is the closure as a set of words; `occurrences` keeps one entry
/// per labeled rotation, so coincidences (a proper power, an entry rotating
/// onto another) appear as repeated words under distinct labels.
#[derive(Debug, Clone)]
pub struct SymmetrizedSet {
    occurrences: Vec<Occurrence>,
    members: BTreeSet<Word>,
    canonical_keys: BTreeSet<Word>,
}

/// Builds the symmetrized closure of `t`.
pub fn symmetrized_closure(t: &RelatorTuple) -> SymmetrizedSet {
    let mut occurrences = Vec::new();
    let mut members = BTreeSet::new();
    let mut canonical_keys = BTreeSet::new();
    for (relator, r) in t.relators().iter().enumerate() {
        for (inverted, base) in [(false, r.clone()), (true, r.invert())] {
            canonical_keys.insert(base.canonical().into_word());
            for offset in 0..base.len() {
                let word = base.rotate(offset).into_word();
                members.insert(word.clone());
                occurrences.push(Occurrence {
                    relator,
                    inverted,
                    offset,
                    word,
                });
            }
        }
    }
    SymmetrizedSet {
        occurrences,
        members,
        canonical_keys,
    }
}

impl SymmetrizedSet {
    /// The closure as a set of distinct words.
    pub fn members(&self) -> &BTreeSet<Word> {
        &self.members
    }

    /// Canonical representatives of the rotation classes in the closure.
    pub fn canonical_keys(&self) -> &BTreeSet<Word> {
        &self.canonical_keys
    }

    /// All labeled rotations, `2 * (sum of entry lengths)` of them.
    pub fn occurrences(&self) -> &[Occurrence] {
        &self.occurrences
    }

    pub fn member_count(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.members.contains(w)
    }

    /// Length of the shortest member.
    pub fn min_member_len(&self) -> usize {
        self.members.iter().map(|w| w.len()).min().unwrap_or(0)
    }

    /// The closure of the `b <-> B` image of the originating tuple.
    pub fn eta(&self) -> SymmetrizedSet {
        let occurrences = self
            .occurrences
            .iter()
            .map(|o| Occurrence {
                relator: o.relator,
                inverted: o.inverted,
                offset: o.offset,
                word: o.word.eta(),
            })
            .collect();
        let members = self.members.iter().map(|w| w.eta()).collect();
        let canonical_keys = self
            .canonical_keys
            .iter()
            .map(|w| {
                CyclicWord::new(w.eta())
                    .expect("eta preserves cyclic reducedness")
                    .canonical()
                    .into_word()
            })
            .collect();
        SymmetrizedSet {
            occurrences,
            members,
            canonical_keys,
        }
    }
}

/// The canonical form of a tuple under reorder, rotation, entrywise
/// inversion, and global `b <-> B` swap.
///
/// For each choice of applying the swap or not: every entry is replaced by
/// the least word among the rotations of the entry and of its inverse, the
/// entries are sorted, and the smaller of the two results wins.  Two tuples
/// are equivalent exactly when their canonical forms coincide.
pub fn canonical_tuple(t: &RelatorTuple) -> RelatorTuple {
    let candidate = |swap: bool| -> Vec<CyclicWord> {
        let mut entries: Vec<CyclicWord> = t
            .relators()
            .iter()
            .map(|r| {
                let r = if swap { r.eta() } else { r.clone() };
                let fwd = r.canonical();
                let bwd = r.invert().canonical();
                if fwd.word() <= bwd.word() {
                    fwd
                } else {
                    bwd
                }
            })
            .collect();
        entries.sort();
        entries
    };
    let plain = candidate(false);
    let swapped = candidate(true);
    RelatorTuple {
        relators: if plain <= swapped { plain } else { swapped },
    }
}

/// True when some reordering, entry rotations, entry inversions, and an
/// optional global `b <-> B` swap carry `s` onto `t`.
pub fn equivalent(s: &RelatorTuple, t: &RelatorTuple) -> bool {
    canonical_tuple(s) == canonical_tuple(t)
}

/// Order of the symmetry group acting on equal-length tuples:
/// `2 * m! * (2n)^m`.  `None` on overflow.
pub fn symmetry_group_order(n: usize, m: usize) -> Option<u128> {
    let mut order: u128 = 2;
    for i in 1..=m as u128 {
        order = order.checked_mul(i)?;
    }
    for _ in 0..m {
        order = order.checked_mul(2 * n as u128)?;
    }
    Some(order)
}

/// Explicit orbit of `t` under the full symmetry group, with the default
/// enumeration budget.
pub fn orbit(t: &RelatorTuple) -> Result<BTreeSet<RelatorTuple>> {
    orbit_with_budget(t, DEFAULT_ORBIT_BUDGET)
}

/// Explicit orbit of `t`, refusing when the group order `2 * m! * (2n)^m`
/// exceeds `budget`.
pub fn orbit_with_budget(t: &RelatorTuple, budget: u128) -> Result<BTreeSet<RelatorTuple>> {
    let n = t.equal_length().ok_or(Error::UnequalLengths)?;
    let m = t.relator_count();
    let needed = symmetry_group_order(n, m).unwrap_or(u128::MAX);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let mut out = BTreeSet::new();
    for swap in [false, true] {
        let base: Vec<CyclicWord> = t
            .relators()
            .iter()
            .map(|r| if swap { r.eta() } else { r.clone() })
            .collect();
        for perm in (0..m).permutations(m) {
            // Per entry: 2n choices, rotation offset plus optional inversion.
            let mut counters = vec![0usize; m];
            'combos: loop {
                let relators: Vec<CyclicWord> = perm
                    .iter()
                    .zip(&counters)
                    .map(|(&src, &c)| {
                        let rotated = base[src].rotate(c % n);
                        if c >= n {
                            rotated.invert()
                        } else {
                            rotated
                        }
                    })
                    .collect();
                out.insert(RelatorTuple { relators });
                for digit in 0..=m {
                    if digit == m {
                        break 'combos;
                    }
                    counters[digit] += 1;
                    if counters[digit] < 2 * n {
                        break;
                    }
                    counters[digit] = 0;
                }
            }
        }
    }
    Ok(out)
}

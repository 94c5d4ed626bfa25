//! Isomorphism verdicts for quotients given by relator tuples, exact
//! equivalence-class counts against their closed-form approximation, and a
//! binary complexity measure for presentations over an abstract alphabet.
//!
//! The decision procedure is deliberately partial: it answers only when one
//! tuple passes the full condition battery and the other satisfies C'(1/8),
//! in which case equality of the symmetrized closures (directly or after the
//! letterwise `b <-> B` flip) settles the question.  Outside that regime the
//! verdict is `Undecided`, never a guess.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::genericity::{check_q, GenericityParams};
use crate::smallcancel::{dehn_gate, same_members, satisfies_cprime};
use crate::tuples::{
    canonical_tuple, orbit_with_budget, symmetrized_closure, symmetry_group_order, RelatorTuple,
    DEFAULT_ORBIT_BUDGET,
};
use crate::words::{enumerate_cyclic, CyclicWord};
use crate::{Error, Result};

/// Which of the two input tuples supplied a gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn as_str(self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
        }
    }
}

/// Outcome of the partial isomorphism decision.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsoOutcome {
    Isomorphic,
    NotIsomorphic,
    Undecided,
}

impl IsoOutcome {
    pub fn as_str(self) -> &'static str {
        match self {
            IsoOutcome::Isomorphic => "isomorphic",
            IsoOutcome::NotIsomorphic => "not_isomorphic",
            IsoOutcome::Undecided => "undecided",
        }
    }
}

/// Structured evidence behind an [`IsoVerdict`]: which gate carried the
/// decision and which set comparison it rested on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IsoReason {
    /// The symmetrized closures agree as canonical key sets, directly or
    /// after the letterwise flip; `battery_side` passed the battery and the
    /// other side passed C'(1/8).
    ClosureMatch { battery_side: Side, flipped: bool },
    /// Gates passed but the closures differ both directly and after the
    /// flip.
    ClosureMismatch { battery_side: Side },
    /// Both tuples pass the battery with the equal-length refinement at the
    /// same entry length, yet their relator counts differ.
    CountMismatch {
        left: usize,
        right: usize,
        length: usize,
    },
    /// Neither orientation supplies a battery pass on one side and C'(1/8)
    /// on the other, and the count comparison does not apply.
    GatesFailed {
        left_battery: bool,
        right_battery: bool,
        left_metric: bool,
        right_metric: bool,
    },
}

impl fmt::Display for IsoReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IsoReason::ClosureMatch {
                battery_side,
                flipped,
            } => write!(
                f,
                "closures coincide{} (battery on {})",
                if *flipped { " after the letterwise flip" } else { "" },
                battery_side.as_str(),
            ),
            IsoReason::ClosureMismatch { battery_side } => write!(
                f,
                "closures differ directly and after the letterwise flip (battery on {})",
                battery_side.as_str(),
            ),
            IsoReason::CountMismatch {
                left,
                right,
                length,
            } => write!(
                f,
                "both sides pass the equal-length battery at length {length} with different \
                 relator counts {left} and {right}",
            ),
            IsoReason::GatesFailed {
                left_battery,
                right_battery,
                left_metric,
                right_metric,
            } => write!(
                f,
                "no decisive gate: battery left={left_battery} right={right_battery}, \
                 C'(1/8) left={left_metric} right={right_metric}",
            ),
        }
    }
}

/// Verdict of [`generic_iso`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsoVerdict {
    pub outcome: IsoOutcome,
    pub reason: IsoReason,
}

impl fmt::Display for IsoVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.outcome.as_str(), self.reason)
    }
}

impl Serialize for IsoVerdict {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut state = serializer.serialize_struct("IsoVerdict", 3)?;
        state.serialize_field("outcome", self.outcome.as_str())?;
        match &self.reason {
            IsoReason::ClosureMatch {
                battery_side,
                flipped,
            } => {
                state.serialize_field("reason", "closure_match")?;
                state.serialize_field(
                    "detail",
                    &format!("battery_side={} flipped={}", battery_side.as_str(), flipped),
                )?;
            }
            IsoReason::ClosureMismatch { battery_side } => {
                state.serialize_field("reason", "closure_mismatch")?;
                state.serialize_field(
                    "detail",
                    &format!("battery_side={}", battery_side.as_str()),
                )?;
            }
            IsoReason::CountMismatch {
                left,
                right,
                length,
            } => {
                state.serialize_field("reason", "count_mismatch")?;
                state.serialize_field(
                    "detail",
                    &format!("left={left} right={right} length={length}"),
                )?;
            }
            IsoReason::GatesFailed {
                left_battery,
                right_battery,
                left_metric,
                right_metric,
            } => {
                state.serialize_field("reason", "gates_failed")?;
                state.serialize_field(
                    "detail",
                    &format!(
                        "battery left={left_battery} right={right_battery}, metric \
                         left={left_metric} right={right_metric}"
                    ),
                )?;
            }
        }
        state.end()
    }
}

/// Partial isomorphism decision for the quotients presented by two tuples.
///
/// When one tuple passes the condition battery and the other satisfies
/// C'(1/8), the quotients are isomorphic exactly when the symmetrized
/// closures coincide as canonical key sets, directly or after the letterwise
/// flip.  When both tuples pass the battery with the equal-length refinement
/// at a common length but have different relator counts, the quotients are
/// distinct.  In all other cases the verdict is `Undecided`; gate failures
/// are verdicts, not errors.  Errors are reserved for invalid parameters and
/// blown search budgets.
pub fn generic_iso(
    left: &RelatorTuple,
    right: &RelatorTuple,
    params: &GenericityParams,
) -> Result<IsoVerdict> {
    let left_report = check_q(left, params)?;
    let right_report = check_q(right, params)?;
    let left_closure = symmetrized_closure(left);
    let right_closure = symmetrized_closure(right);
    let left_metric = satisfies_cprime(&left_closure, dehn_gate()).holds;
    let right_metric = satisfies_cprime(&right_closure, dehn_gate()).holds;
    let left_battery = left_report.overall_q;
    let right_battery = right_report.overall_q;

    if (left_battery && right_metric) || (right_battery && left_metric) {
        let battery_side = if left_battery && right_metric {
            Side::Left
        } else {
            Side::Right
        };
        let verdict = if same_members(&left_closure, &right_closure) {
            IsoVerdict {
                outcome: IsoOutcome::Isomorphic,
                reason: IsoReason::ClosureMatch {
                    battery_side,
                    flipped: false,
                },
            }
        } else if same_members(&left_closure, &right_closure.eta()) {
            IsoVerdict {
                outcome: IsoOutcome::Isomorphic,
                reason: IsoReason::ClosureMatch {
                    battery_side,
                    flipped: true,
                },
            }
        } else {
            IsoVerdict {
                outcome: IsoOutcome::NotIsomorphic,
                reason: IsoReason::ClosureMismatch { battery_side },
            }
        };
        return Ok(verdict);
    }

    if left_report.overall_u && right_report.overall_u {
        if let (Some(a), Some(b)) = (left.equal_length(), right.equal_length()) {
            if a == b && left.relator_count() != right.relator_count() {
                return Ok(IsoVerdict {
                    outcome: IsoOutcome::NotIsomorphic,
                    reason: IsoReason::CountMismatch {
                        left: left.relator_count(),
                        right: right.relator_count(),
                        length: a,
                    },
                });
            }
        }
    }

    Ok(IsoVerdict {
        outcome: IsoOutcome::Undecided,
        reason: IsoReason::GatesFailed {
            left_battery,
            right_battery,
            left_metric,
            right_metric,
        },
    })
}

/// Exact tallies over an enumerated population of tuples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrbitCensus {
    /// Tuples passing the filter.
    pub tuples: u64,
    /// Equivalence classes among them.
    pub orbits: u64,
}

impl Serialize for OrbitCensus {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut state = serializer.serialize_struct("OrbitCensus", 2)?;
        state.serialize_field("tuples", &self.tuples)?;
        state.serialize_field("orbits", &self.orbits)?;
        state.end()
    }
}

/// Counts tuples of length-`n` relators passing `filter`, and their
/// equivalence classes, by bucketing canonical forms.
///
/// The enumeration space has `gamma(n)^m` tuples; the call refuses when that
/// exceeds `budget`.  The walk is partitioned over first entries and merged,
/// so the tallies are independent of scheduling.
pub fn orbit_census<F>(n: usize, m: usize, filter: F, budget: u128) -> Result<OrbitCensus>
where
    F: Fn(&RelatorTuple) -> bool + Sync,
{
    if n == 0 {
        return Err(Error::BadParameter {
            name: "n",
            requirement: "a positive relator length",
            value: "0".to_string(),
        });
    }
    if m == 0 {
        return Err(Error::EmptyTuple);
    }
    let words: Vec<CyclicWord> = enumerate_cyclic(n).collect();
    let needed = (words.len() as u128)
        .checked_pow(m as u32)
        .unwrap_or(u128::MAX);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    if words.is_empty() {
        return Ok(OrbitCensus {
            tuples: 0,
            orbits: 0,
        });
    }
    let (tuples, keys) = (0..words.len())
        .into_par_iter()
        .map(|first| {
            let mut keys = BTreeSet::new();
            let mut tuples = 0u64;
            let mut digits = vec![0usize; m - 1];
            loop {
                let relators = std::iter::once(words[first].clone())
                    .chain(digits.iter().map(|&d| words[d].clone()))
                    .collect();
                let tuple =
                    RelatorTuple::new(relators).expect("enumerated relators are nonempty");
                if filter(&tuple) {
                    tuples += 1;
                    keys.insert(canonical_tuple(&tuple));
                }
                let mut pos = 0;
                while pos < digits.len() {
                    digits[pos] += 1;
                    if digits[pos] < words.len() {
                        break;
                    }
                    digits[pos] = 0;
                    pos += 1;
                }
                if pos == digits.len() {
                    break;
                }
            }
            (tuples, keys)
        })
        .reduce(
            || (0u64, BTreeSet::new()),
            |(ta, mut ka), (tb, kb)| {
                ka.extend(kb);
                (ta + tb, ka)
            },
        );
    Ok(OrbitCensus {
        tuples,
        orbits: keys.len() as u64,
    })
}

/// Number of equivalence classes among tuples of length-`n` relators passing
/// `filter`, under the default enumeration budget.
pub fn count_orbits<F>(n: usize, m: usize, filter: F) -> Result<u64>
where
    F: Fn(&RelatorTuple) -> bool + Sync,
{
    Ok(orbit_census(n, m, filter, DEFAULT_ORBIT_BUDGET)?.orbits)
}

/// True when the equivalence class of `t` has the full size
/// `2 * m! * (2n)^m`: no nontrivial transform fixes the tuple, and the
/// letterwise flip lands outside the transform orbit.
pub fn has_free_orbit(t: &RelatorTuple) -> Result<bool> {
    let n = t.equal_length().ok_or(Error::UnequalLengths)?;
    let full = symmetry_group_order(n, t.relator_count()).unwrap_or(u128::MAX);
    let class = orbit_with_budget(t, DEFAULT_ORBIT_BUDGET)?;
    Ok(class.len() as u128 == full)
}

/// Exact value of `(2^(n/2+1))^m / (2 * m! * (2n)^m)`: the closed-form
/// leading term for the number of equivalence classes of m-tuples of
/// length-n relators.  Every class has at most `2 * m! * (2n)^m` members, so
/// the true class count is bounded below by this value at every even n.
pub fn asymptotic_im(n: usize, m: usize) -> Result<BigRational> {
    if n == 0 || n % 2 != 0 {
        return Err(Error::BadSampleLength { n });
    }
    if m == 0 {
        return Err(Error::EmptyTuple);
    }
    let numer = BigInt::from(1) << ((n / 2 + 1) * m);
    let mut denom = BigInt::from(2);
    for i in 1..=m {
        denom *= BigInt::from(i);
    }
    denom *= BigInt::from(2 * n).pow(m as u32);
    Ok(BigRational::new(numer, denom))
}

/// A finite presentation over an abstract signed alphabet `b_1, ..., b_s`.
/// Relators are nonempty words of nonzero 1-based indices, negative for
/// inverses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenericPresentation {
    generators: usize,
    relators: Vec<Vec<i64>>,
}

impl GenericPresentation {
    /// Checks that indices are in range and that every generator occurs in
    /// some relator; without the occurrence invariant the encoding would not
    /// determine the generator count.
    pub fn new(generators: usize, relators: Vec<Vec<i64>>) -> Result<GenericPresentation> {
        let mut seen = vec![false; generators];
        for (index, word) in relators.iter().enumerate() {
            if word.is_empty() {
                return Err(Error::EmptyRelator { index });
            }
            for &x in word {
                let magnitude = x.unsigned_abs() as usize;
                if x == 0 || magnitude > generators {
                    return Err(Error::BadGeneratorIndex {
                        index: x,
                        count: generators,
                    });
                }
                seen[magnitude - 1] = true;
            }
        }
        if let Some(missing) = seen.iter().position(|&occurs| !occurs) {
            return Err(Error::UnusedGenerator { index: missing + 1 });
        }
        Ok(GenericPresentation {
            generators,
            relators,
        })
    }

    /// Parses the presentation file format: the first significant line is
    /// the generator count, each following line one relator as signed
    /// indices separated by whitespace.  Blank lines and `#` comments are
    /// skipped.
    pub fn parse(text: &str) -> Result<GenericPresentation> {
        let mut generators: Option<usize> = None;
        let mut relators = Vec::new();
        for (offset, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            match generators {
                None => {
                    generators = Some(line.parse().map_err(|_| Error::MalformedLine {
                        line: offset + 1,
                        reason: "expected a generator count".to_string(),
                    })?)
                }
                Some(_) => {
                    let word = line
                        .split_whitespace()
                        .map(|token| {
                            token.parse::<i64>().map_err(|_| Error::MalformedLine {
                                line: offset + 1,
                                reason: format!("expected a signed index, got {token:?}"),
                            })
                        })
                        .collect::<Result<Vec<i64>>>()?;
                    relators.push(word);
                }
            }
        }
        let generators = generators.ok_or(Error::MalformedLine {
            line: 1,
            reason: "missing generator count".to_string(),
        })?;
        GenericPresentation::new(generators, relators)
    }

    pub fn generator_count(&self) -> usize {
        self.generators
    }

    pub fn relators(&self) -> &[Vec<i64>] {
        &self.relators
    }

    /// Sum of the relator lengths: the total relator volume of the
    /// presentation.
    pub fn ell_one(&self) -> usize {
        self.relators.iter().map(|word| word.len()).sum()
    }
}

/// Symbol alphabet of the serialized form; the position of each symbol is
/// its 3-bit code.
const CODE_SYMBOLS: [char; 6] = ['b', '0', '1', '-', ',', '|'];

/// A presentation serialized over the six-symbol alphabet and block-coded at
/// three bits per symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodedPresentation {
    symbols: String,
    bits: Vec<bool>,
}

impl EncodedPresentation {
    pub fn symbols(&self) -> &str {
        &self.symbols
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn bit_len(&self) -> usize {
        self.bits.len()
    }

    /// Big-endian nibble packing; the final nibble is zero-padded on the
    /// right.
    pub fn hex(&self) -> String {
        self.bits
            .chunks(4)
            .map(|chunk| {
                let mut nibble = 0u8;
                for (position, &bit) in chunk.iter().enumerate() {
                    if bit {
                        nibble |= 1 << (3 - position);
                    }
                }
                char::from_digit(nibble as u32, 16).expect("nibble is below 16")
            })
            .collect()
    }
}

impl Serialize for EncodedPresentation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut state = serializer.serialize_struct("EncodedPresentation", 3)?;
        state.serialize_field("symbols", &self.symbols)?;
        state.serialize_field("bits", &self.bit_len())?;
        state.serialize_field("hex", &self.hex())?;
        state.end()
    }
}

/// Serializes a presentation: each occurrence of generator `i` becomes `b`
/// followed by the binary digits of `i` (most significant first, no leading
/// zeros), with a `-` prefix for inverses; relators are separated by `,` and
/// the presentation ends with `|`.  Each symbol is then coded in three bits.
pub fn encode_presentation(g: &GenericPresentation) -> EncodedPresentation {
    let mut symbols = String::new();
    for (index, word) in g.relators().iter().enumerate() {
        if index > 0 {
            symbols.push(',');
        }
        for &x in word {
            if x < 0 {
                symbols.push('-');
            }
            symbols.push('b');
            symbols.push_str(&format!("{:b}", x.unsigned_abs()));
        }
    }
    symbols.push('|');
    let mut bits = Vec::with_capacity(symbols.len() * 3);
    for ch in symbols.chars() {
        let code = CODE_SYMBOLS
            .iter()
            .position(|&symbol| symbol == ch)
            .expect("serialized symbols come from the code alphabet");
        for shift in (0..3).rev() {
            bits.push(code >> shift & 1 == 1);
        }
    }
    EncodedPresentation { symbols, bits }
}

fn bad_encoding(reason: impl Into<String>) -> Error {
    Error::BadEncoding {
        reason: reason.into(),
    }
}

/// Inverts [`encode_presentation`].  The generator count is recovered as the
/// largest occurring index, which the occurrence invariant makes exact.
pub fn decode_presentation(bits: &[bool]) -> Result<GenericPresentation> {
    if bits.len() % 3 != 0 {
        return Err(bad_encoding("bit length is not a multiple of three"));
    }
    let symbols: Vec<char> = bits
        .chunks(3)
        .map(|chunk| {
            let code = (chunk[0] as usize) << 2 | (chunk[1] as usize) << 1 | chunk[2] as usize;
            CODE_SYMBOLS
                .get(code)
                .copied()
                .ok_or_else(|| bad_encoding(format!("unassigned 3-bit block {code:03b}")))
        })
        .collect::<Result<Vec<char>>>()?;
    match symbols.iter().position(|&ch| ch == '|') {
        Some(position) if position + 1 == symbols.len() => {}
        Some(_) => return Err(bad_encoding("content after the terminator")),
        None => return Err(bad_encoding("missing terminator")),
    }
    let body = &symbols[..symbols.len() - 1];

    let mut relators = Vec::new();
    if !body.is_empty() {
        for relator in body.split(|&ch| ch == ',') {
            let mut word = Vec::new();
            let mut cursor = 0;
            while cursor < relator.len() {
                let negative = relator[cursor] == '-';
                if negative {
                    cursor += 1;
                }
                if relator.get(cursor) != Some(&'b') {
                    return Err(bad_encoding("expected a generator marker"));
                }
                cursor += 1;
                let start = cursor;
                while cursor < relator.len() && matches!(relator[cursor], '0' | '1') {
                    cursor += 1;
                }
                if start == cursor {
                    return Err(bad_encoding("generator marker without binary digits"));
                }
                if relator[start] == '0' {
                    return Err(bad_encoding("leading zero in a generator index"));
                }
                let mut index: i64 = 0;
                for &digit in &relator[start..cursor] {
                    index = index
                        .checked_mul(2)
                        .and_then(|v| v.checked_add((digit == '1') as i64))
                        .ok_or_else(|| bad_encoding("generator index overflows"))?;
                }
                word.push(if negative { -index } else { index });
            }
            if word.is_empty() {
                return Err(bad_encoding("empty relator between separators"));
            }
            relators.push(word);
        }
    }
    let generators = relators
        .iter()
        .flatten()
        .map(|x| x.unsigned_abs() as usize)
        .max()
        .unwrap_or(0);
    GenericPresentation::new(generators, relators)
}

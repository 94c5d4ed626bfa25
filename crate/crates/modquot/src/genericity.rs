//! The genericity condition battery for relator tuples, and Monte Carlo
//! estimation of how often random tuples satisfy it.
//!
//! A tuple passes the battery when each relator avoids thin-barbell
//! readability, the symmetrized closure satisfies small cancellation, and the
//! relators are free of coincidences: no proper powers, no two relators (or
//! their inverses) sharing a rotation class, no long factor shared between a
//! sign-flipped relator and any relator, no relator in its own inverse's
//! rotation class, and a length floor.  Two refinements are tracked on top:
//! all relators having equal length, and every nontrivial formal transform of
//! the tuple changing its tuple of short prefixes.

use itertools::Itertools;
use num_rational::Ratio;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::ser::{Serialize, SerializeMap, SerializeSeq, Serializer};
use std::collections::BTreeMap;
use std::fmt;

use crate::smallcancel::{satisfies_cprime, PieceWitness};
use crate::suffix::SuffixAutomaton;
use crate::tuples::{symmetrized_closure, RelatorTuple, DEFAULT_ORBIT_BUDGET};
use crate::words::{sample_cyclic_ball_with, CyclicWord, Letter, Word};
use crate::{barbell, Error, Result};

/// Thresholds for the condition battery.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenericityParams {
    /// Small-cancellation bound: every piece must be shorter than
    /// `lambda` times the member it sits in.
    pub lambda: Ratio<u64>,
    /// Barbell-readability bound: a bar of length at most `theta` times the
    /// window length disqualifies a relator.
    pub theta: Ratio<u64>,
    /// Minimum relator length.
    pub min_length: usize,
    /// Relaxes the default thresholds for desk-scale runs; recorded in every
    /// report so results state the thresholds they were judged against.
    pub experiment: bool,
}

impl Default for GenericityParams {
    fn default() -> GenericityParams {
        GenericityParams {
            lambda: Ratio::new(1, 120),
            theta: Ratio::new(1, 40),
            min_length: 1200,
            experiment: false,
        }
    }
}

impl GenericityParams {
    pub fn validate(&self) -> Result<()> {
        if *self.lambda.numer() == 0 || self.lambda > Ratio::new(1, 1) {
            return Err(Error::BadParameter {
                name: "lambda",
                requirement: "a rational in (0, 1]",
                value: self.lambda.to_string(),
            });
        }
        if *self.theta.numer() == 0 || self.theta >= Ratio::new(1, 1) {
            return Err(Error::BadParameter {
                name: "theta",
                requirement: "a rational strictly between 0 and 1",
                value: self.theta.to_string(),
            });
        }
        if !self.experiment {
            if self.lambda > Ratio::new(1, 120) {
                return Err(Error::BadParameter {
                    name: "lambda",
                    requirement: "at most 1/120 outside experiment mode",
                    value: self.lambda.to_string(),
                });
            }
            if self.min_length < 1200 {
                return Err(Error::BadParameter {
                    name: "min_length",
                    requirement: "at least 1200 outside experiment mode",
                    value: self.min_length.to_string(),
                });
            }
        }
        Ok(())
    }
}

/// The individual checks making up the battery, in report order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Condition {
    /// No relator has a half-length window readable in a thin barbell.
    NotReadable,
    /// The symmetrized closure satisfies the piece-length bound.
    SmallCancellation,
    /// No relator equals a nontrivial rotation of itself.
    NotProperPower,
    /// No two relators share a rotation class, up to inversion.
    DistinctClasses,
    /// No factor longer than a third of a relator survives the b-letter
    /// sign flip into any relator's rotations.
    EtaFactorBound,
    /// No relator lies in its own inverse's rotation class.
    NotInverseClass,
    /// Every relator meets the length floor.
    MinLength,
    /// All relators have the same length.
    EqualLengths,
    /// Every nontrivial formal transform changes the tuple of short
    /// prefixes.
    PrefixSeparation,
}

impl Condition {
    pub const ALL: [Condition; 9] = [
        Condition::NotReadable,
        Condition::SmallCancellation,
        Condition::NotProperPower,
        Condition::DistinctClasses,
        Condition::EtaFactorBound,
        Condition::NotInverseClass,
        Condition::MinLength,
        Condition::EqualLengths,
        Condition::PrefixSeparation,
    ];

    /// The core battery, without the two tuple-shape refinements.
    pub const CORE: [Condition; 7] = [
        Condition::NotReadable,
        Condition::SmallCancellation,
        Condition::NotProperPower,
        Condition::DistinctClasses,
        Condition::EtaFactorBound,
        Condition::NotInverseClass,
        Condition::MinLength,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Condition::NotReadable => "not_readable",
            Condition::SmallCancellation => "small_cancellation",
            Condition::NotProperPower => "not_proper_power",
            Condition::DistinctClasses => "distinct_classes",
            Condition::EtaFactorBound => "eta_factor_bound",
            Condition::NotInverseClass => "not_inverse_class",
            Condition::MinLength => "min_length",
            Condition::EqualLengths => "equal_lengths",
            Condition::PrefixSeparation => "prefix_separation",
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Evidence attached to a failed check; every variant revalidates
/// independently of the checker that produced it.
#[derive(Debug, Clone)]
pub enum Witness {
    Readable {
        index: usize,
        bar: Word,
        window: Word,
    },
    Piece(PieceWitness),
    ProperPower {
        index: usize,
        period: usize,
    },
    SharedClass {
        first: usize,
        second: usize,
        inverted: bool,
    },
    SharedEtaFactor {
        source: usize,
        target: usize,
        inverted: bool,
        factor: Word,
    },
    InverseClass {
        index: usize,
        offset: usize,
    },
    Short {
        index: usize,
        length: usize,
    },
    Lengths(Vec<usize>),
    UnchangedPrefixes {
        eta: bool,
        permutation: Vec<usize>,
        offsets: Vec<usize>,
        inverted: Vec<bool>,
    },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Readable { index, bar, window } => {
                write!(f, "relator {index} has window {window} readable over bar {bar}")
            }
            Witness::Piece(p) => write!(
                f,
                "piece {} shared by rotation {} of relator {} and rotation {} of relator {}",
                p.piece, p.first.offset, p.first.relator, p.second.offset, p.second.relator
            ),
            Witness::ProperPower { index, period } => {
                write!(f, "relator {index} equals its own rotation by {period}")
            }
            Witness::SharedClass {
                first,
                second,
                inverted,
            } => write!(
                f,
                "relator {first} is a rotation of relator {second}{}",
                if *inverted { " inverted" } else { "" }
            ),
            Witness::SharedEtaFactor {
                source,
                target,
                inverted,
                factor,
            } => write!(
                f,
                "factor {factor} of the sign-flipped relator {source} occurs in relator {target}{}",
                if *inverted { " inverted" } else { "" }
            ),
            Witness::InverseClass { index, offset } => {
                write!(f, "relator {index} equals its inverse rotated by {offset}")
            }
            Witness::Short { index, length } => {
                write!(f, "relator {index} has length {length}")
            }
            Witness::Lengths(lengths) => write!(f, "lengths {lengths:?}"),
            Witness::UnchangedPrefixes {
                eta,
                permutation,
                offsets,
                inverted,
            } => write!(
                f,
                "prefixes fixed by transform (flip {eta}, order {permutation:?}, rotations {offsets:?}, inversions {inverted:?})"
            ),
        }
    }
}

#[derive(Debug, Clone)]
pub enum Verdict {
    Pass,
    Fail(Witness),
    /// The check was refused rather than run; never counted as a pass.
    Undecided {
        needed: u128,
        budget: u128,
    },
}

impl Verdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }
}

/// Outcome of the full battery on one tuple.
#[derive(Debug, Clone)]
pub struct GenericityReport {
    pub params: GenericityParams,
    pub verdicts: BTreeMap<Condition, Verdict>,
    /// Core battery passed.
    pub overall_q: bool,
    /// Core battery passed with equal lengths.
    pub overall_u: bool,
    /// Equal lengths and prefix separation on top of the core battery.
    pub overall_uprime: bool,
}

impl GenericityReport {
    pub fn verdict(&self, condition: Condition) -> &Verdict {
        &self.verdicts[&condition]
    }
}

fn doubled(letters: &[Letter]) -> Vec<Letter> {
    let mut out = letters.to_vec();
    out.extend_from_slice(letters);
    out
}

/// Smallest nontrivial rotation fixing the word, if any.
fn power_period(word: &CyclicWord) -> Option<usize> {
    let n = word.len();
    let text = doubled(word.letters());
    (1..n).find(|&p| text[p..p + n] == *word.letters())
}

/// Rotation offset at which the inverse reproduces the word, if any.
fn inverse_offset(word: &CyclicWord) -> Option<usize> {
    let n = word.len();
    let text = doubled(word.invert().letters());
    (0..n).find(|&p| text[p..p + n] == *word.letters())
}

fn check_not_readable(tuple: &RelatorTuple, theta: Ratio<u64>) -> Result<Verdict> {
    for (index, relator) in tuple.relators().iter().enumerate() {
        if let Some(witness) = barbell::theta_readable(relator, theta)? {
            return Ok(Verdict::Fail(Witness::Readable {
                index,
                bar: witness.bar,
                window: witness.window,
            }));
        }
    }
    Ok(Verdict::Pass)
}

fn check_small_cancellation(tuple: &RelatorTuple, lambda: Ratio<u64>) -> Verdict {
    let closure = symmetrized_closure(tuple);
    let report = satisfies_cprime(&closure, lambda);
    match report.violation {
        None => Verdict::Pass,
        Some(witness) => Verdict::Fail(Witness::Piece(witness)),
    }
}

fn check_not_proper_power(tuple: &RelatorTuple) -> Verdict {
    for (index, relator) in tuple.relators().iter().enumerate() {
        if let Some(period) = power_period(relator) {
            return Verdict::Fail(Witness::ProperPower { index, period });
        }
    }
    Verdict::Pass
}

fn check_distinct_classes(tuple: &RelatorTuple) -> Verdict {
    let relators = tuple.relators();
    let canon: Vec<CyclicWord> = relators.iter().map(|r| r.canonical()).collect();
    let canon_inv: Vec<CyclicWord> = relators.iter().map(|r| r.invert().canonical()).collect();
    for i in 0..relators.len() {
        for j in i + 1..relators.len() {
            if canon[i] == canon[j] {
                return Verdict::Fail(Witness::SharedClass {
                    first: i,
                    second: j,
                    inverted: false,
                });
            }
            if canon[i] == canon_inv[j] {
                return Verdict::Fail(Witness::SharedClass {
                    first: i,
                    second: j,
                    inverted: true,
                });
            }
        }
    }
    Verdict::Pass
}

fn check_eta_factor_bound(tuple: &RelatorTuple) -> Verdict {
    let relators = tuple.relators();
    for (source, relator) in relators.iter().enumerate() {
        let flipped = doubled(relator.eta().letters());
        let automaton = SuffixAutomaton::build(&flipped);
        // A shared factor is a violation when it outgrows a third of the
        // source relator; factors of rotations never outgrow the target.
        let limit = relator.len() / 3;
        for (target, other) in relators.iter().enumerate() {
            for (inverted, variant) in [(false, other.clone()), (true, other.invert())] {
                if limit + 1 > variant.len() {
                    continue;
                }
                let text = doubled(variant.letters());
                let (len, end) = automaton.longest_common_factor_at(&text);
                if len > limit {
                    let factor = Word::from_reduced(text[end - (limit + 1)..end].to_vec());
                    return Verdict::Fail(Witness::SharedEtaFactor {
                        source,
                        target,
                        inverted,
                        factor,
                    });
                }
            }
        }
    }
    Verdict::Pass
}

fn check_not_inverse_class(tuple: &RelatorTuple) -> Verdict {
    for (index, relator) in tuple.relators().iter().enumerate() {
        if let Some(offset) = inverse_offset(relator) {
            return Verdict::Fail(Witness::InverseClass { index, offset });
        }
    }
    Verdict::Pass
}

fn check_min_length(tuple: &RelatorTuple, min_length: usize) -> Verdict {
    for (index, relator) in tuple.relators().iter().enumerate() {
        if relator.len() < min_length {
            return Verdict::Fail(Witness::Short {
                index,
                length: relator.len(),
            });
        }
    }
    Verdict::Pass
}

fn check_equal_lengths(tuple: &RelatorTuple) -> Verdict {
    match tuple.equal_length() {
        Some(_) => Verdict::Pass,
        None => Verdict::Fail(Witness::Lengths(tuple.lengths())),
    }
}

/// Checks that every nontrivial combination of reordering, rotating entries,
/// inverting entries, and flipping b-letter signs changes the tuple of
/// prefixes of length ⌊lambda·|r_j|⌋.  Refuses (undecided) when the
/// transform count exceeds the budget.
fn check_prefix_separation(tuple: &RelatorTuple, lambda: Ratio<u64>, budget: u128) -> Verdict {
    let m = tuple.relator_count();
    let lengths = tuple.lengths();
    let mut needed: u128 = 2;
    for &n in &lengths {
        needed = needed.saturating_mul(2 * n as u128);
    }
    for f in 1..=m as u128 {
        needed = needed.saturating_mul(f);
    }
    if needed > budget {
        return Verdict::Undecided { needed, budget };
    }

    let num = *lambda.numer() as u128;
    let den = *lambda.denom() as u128;
    let prefix_len: Vec<usize> = lengths
        .iter()
        .map(|&n| (num * n as u128 / den) as usize)
        .collect();
    let base: Vec<&[Letter]> = tuple
        .relators()
        .iter()
        .zip(&prefix_len)
        .map(|(r, &l)| &r.letters()[..l])
        .collect();
    // Doubled letter arrays for each relator variant: [flip][entry][direction].
    let variants: [Vec<[Vec<Letter>; 2]>; 2] = [false, true].map(|flip| {
        tuple
            .relators()
            .iter()
            .map(|r| {
                let w = if flip { r.eta() } else { r.clone() };
                [doubled(w.letters()), doubled(w.invert().letters())]
            })
            .collect()
    });

    for flip in 0..2usize {
        for perm in (0..m).permutations(m) {
            let radices: Vec<usize> = perm.iter().map(|&src| 2 * lengths[src]).collect();
            let mut counters = vec![0usize; m];
            loop {
                let identity =
                    flip == 0 && counters.iter().all(|&c| c == 0) && perm.iter().enumerate().all(|(j, &s)| j == s);
                if !identity {
                    let unchanged = (0..m).all(|j| {
                        let src = perm[j];
                        let n = lengths[src];
                        let l = prefix_len[j];
                        if l > n {
                            return false;
                        }
                        let rot = counters[j] % n;
                        let inv = counters[j] >= n;
                        let text = &variants[flip][src][usize::from(inv)];
                        let start = if inv { (n - rot) % n } else { rot };
                        text[start..start + l] == *base[j]
                    });
                    if unchanged {
                        return Verdict::Fail(Witness::UnchangedPrefixes {
                            eta: flip == 1,
                            permutation: perm.clone(),
                            offsets: counters.iter().zip(&perm).map(|(&c, &s)| c % lengths[s]).collect(),
                            inverted: counters
                                .iter()
                                .zip(&perm)
                                .map(|(&c, &s)| c >= lengths[s])
                                .collect(),
                        });
                    }
                }
                let mut done = true;
                for j in 0..m {
                    counters[j] += 1;
                    if counters[j] < radices[j] {
                        done = false;
                        break;
                    }
                    counters[j] = 0;
                }
                if done {
                    break;
                }
            }
        }
    }
    Verdict::Pass
}

/// Runs the full battery with an explicit budget for the prefix-separation
/// enumeration.
pub fn check_q_with_budget(
    tuple: &RelatorTuple,
    params: &GenericityParams,
    budget: u128,
) -> Result<GenericityReport> {
    params.validate()?;
    let mut verdicts = BTreeMap::new();
    verdicts.insert(Condition::NotReadable, check_not_readable(tuple, params.theta)?);
    verdicts.insert(
        Condition::SmallCancellation,
        check_small_cancellation(tuple, params.lambda),
    );
    verdicts.insert(Condition::NotProperPower, check_not_proper_power(tuple));
    verdicts.insert(Condition::DistinctClasses, check_distinct_classes(tuple));
    verdicts.insert(Condition::EtaFactorBound, check_eta_factor_bound(tuple));
    verdicts.insert(Condition::NotInverseClass, check_not_inverse_class(tuple));
    verdicts.insert(
        Condition::MinLength,
        check_min_length(tuple, params.min_length),
    );
    verdicts.insert(Condition::EqualLengths, check_equal_lengths(tuple));
    verdicts.insert(
        Condition::PrefixSeparation,
        check_prefix_separation(tuple, params.lambda, budget),
    );

    let overall_q = Condition::CORE.iter().all(|c| verdicts[c].is_pass());
    let overall_u = overall_q && verdicts[&Condition::EqualLengths].is_pass();
    let overall_uprime = overall_u && verdicts[&Condition::PrefixSeparation].is_pass();
    Ok(GenericityReport {
        params: params.clone(),
        verdicts,
        overall_q,
        overall_u,
        overall_uprime,
    })
}

/// Runs the full battery with the default transform budget.
pub fn check_q(tuple: &RelatorTuple, params: &GenericityParams) -> Result<GenericityReport> {
    check_q_with_budget(tuple, params, DEFAULT_ORBIT_BUDGET)
}

/// The prefix-separation refinement on its own; `gate_passed` records
/// whether the tuple passed the core battery with equal lengths.
#[derive(Debug, Clone)]
pub struct PrefixSeparation {
    pub gate_passed: bool,
    pub verdict: Verdict,
}

pub fn check_uprime(tuple: &RelatorTuple, params: &GenericityParams) -> Result<PrefixSeparation> {
    check_uprime_with_budget(tuple, params, DEFAULT_ORBIT_BUDGET)
}

pub fn check_uprime_with_budget(
    tuple: &RelatorTuple,
    params: &GenericityParams,
    budget: u128,
) -> Result<PrefixSeparation> {
    let report = check_q_with_budget(tuple, params, budget)?;
    Ok(PrefixSeparation {
        gate_passed: report.overall_u,
        verdict: report.verdicts[&Condition::PrefixSeparation].clone(),
    })
}

/// 95%-style score interval for a binomial proportion.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    // The endpoints coincide with the sample proportion at 0 and 1 in exact
    // arithmetic; snap them so rounding never excludes it.
    let low = if successes == 0 { 0.0 } else { (center - half).max(0.0) };
    let high = if successes == trials {
        1.0
    } else {
        (center + half).min(1.0)
    };
    (low, high)
}

/// One aggregated pass-rate estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct SurveyRow {
    pub condition: String,
    pub n: usize,
    pub m: usize,
    pub trials: u64,
    pub passes: u64,
    pub undecided: u64,
    pub pass_rate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SurveyTable {
    pub rows: Vec<SurveyRow>,
}

impl SurveyTable {
    pub fn row(&self, condition: &str) -> Option<&SurveyRow> {
        self.rows.iter().find(|r| r.condition == condition)
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum TrialVerdict {
    Pass,
    Fail,
    Undecided,
}

/// Estimates per-condition and overall pass rates over `trials` tuples
/// sampled uniformly: entries drawn from the radius-`n` ball, or from the
/// length-`n` sphere in equal-length mode.  Per-trial seeds are derived as
/// `seed ⊕ trial`, so the table is independent of scheduling and identical
/// across runs.
pub fn survey(
    n: usize,
    m: usize,
    trials: u64,
    seed: u64,
    params: &GenericityParams,
    equal_length: bool,
    budget: u128,
) -> Result<SurveyTable> {
    params.validate()?;
    if n == 0 || n % 2 != 0 {
        return Err(Error::BadSampleLength { n });
    }
    if m == 0 {
        return Err(Error::EmptyTuple);
    }
    if trials == 0 {
        return Err(Error::BadParameter {
            name: "trials",
            requirement: "at least 1",
            value: trials.to_string(),
        });
    }

    let stat_count = Condition::ALL.len() + 3;
    let outcomes: Result<Vec<Vec<TrialVerdict>>> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ trial);
            let tuple = if equal_length {
                RelatorTuple::sample_equal_length(n, m, &mut rng)?
            } else {
                let mut words = Vec::with_capacity(m);
                while words.len() < m {
                    let word = sample_cyclic_ball_with(n, &mut rng)?;
                    if !word.is_empty() {
                        words.push(word);
                    }
                }
                RelatorTuple::new(words)?
            };
            let report = check_q_with_budget(&tuple, params, budget)?;
            let mut row = Vec::with_capacity(stat_count);
            for condition in Condition::ALL {
                row.push(match report.verdicts[&condition] {
                    Verdict::Pass => TrialVerdict::Pass,
                    Verdict::Fail(_) => TrialVerdict::Fail,
                    Verdict::Undecided { .. } => TrialVerdict::Undecided,
                });
            }
            for overall in [report.overall_q, report.overall_u, report.overall_uprime] {
                row.push(if overall {
                    TrialVerdict::Pass
                } else {
                    TrialVerdict::Fail
                });
            }
            Ok(row)
        })
        .collect();
    let outcomes = outcomes?;

    let labels: Vec<String> = Condition::ALL
        .iter()
        .map(|c| c.as_str().to_owned())
        .chain(["overall_q".into(), "overall_u".into(), "overall_uprime".into()])
        .collect();
    let rows = labels
        .into_iter()
        .enumerate()
        .map(|(i, condition)| {
            let passes = outcomes.iter().filter(|row| row[i] == TrialVerdict::Pass).count() as u64;
            let undecided = outcomes
                .iter()
                .filter(|row| row[i] == TrialVerdict::Undecided)
                .count() as u64;
            let (ci_low, ci_high) = wilson_interval(passes, trials, 1.96);
            SurveyRow {
                condition,
                n,
                m,
                trials,
                passes,
                undecided,
                pass_rate: passes as f64 / trials as f64,
                ci_low,
                ci_high,
            }
        })
        .collect();
    Ok(SurveyTable { rows })
}

impl Serialize for GenericityParams {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(4))?;
        map.serialize_entry("lambda", &self.lambda.to_string())?;
        map.serialize_entry("theta", &self.theta.to_string())?;
        map.serialize_entry("min_length", &self.min_length)?;
        map.serialize_entry("experiment", &self.experiment)?;
        map.end()
    }
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(None)?;
        match self {
            Verdict::Pass => map.serialize_entry("status", "pass")?,
            Verdict::Fail(witness) => {
                map.serialize_entry("status", "fail")?;
                map.serialize_entry("witness", &witness.to_string())?;
            }
            Verdict::Undecided { needed, budget } => {
                map.serialize_entry("status", "undecided")?;
                map.serialize_entry("needed", &needed.to_string())?;
                map.serialize_entry("budget", &budget.to_string())?;
            }
        }
        map.end()
    }
}

impl Serialize for GenericityReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(5))?;
        map.serialize_entry("params", &self.params)?;
        let verdicts: BTreeMap<&str, &Verdict> = self
            .verdicts
            .iter()
            .map(|(c, v)| (c.as_str(), v))
            .collect();
        map.serialize_entry("verdicts", &verdicts)?;
        map.serialize_entry("overall_q", &self.overall_q)?;
        map.serialize_entry("overall_u", &self.overall_u)?;
        map.serialize_entry("overall_uprime", &self.overall_uprime)?;
        map.end()
    }
}

impl Serialize for SurveyRow {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(9))?;
        map.serialize_entry("condition", &self.condition)?;
        map.serialize_entry("n", &self.n)?;
        map.serialize_entry("m", &self.m)?;
        map.serialize_entry("trials", &self.trials)?;
        map.serialize_entry("passes", &self.passes)?;
        map.serialize_entry("undecided", &self.undecided)?;
        map.serialize_entry("pass_rate", &self.pass_rate)?;
        map.serialize_entry("ci_low", &self.ci_low)?;
        map.serialize_entry("ci_high", &self.ci_high)?;
        map.end()
    }
}

impl Serialize for SurveyTable {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.rows.len()))?;
        for row in &self.rows {
            seq.serialize_element(row)?;
        }
        seq.end()
    }
}

//! Pieces, the C'(λ) small-cancellation test, and a Dehn-style rewriting
//! solver for the word problem of the quotient group.
//!
//! A piece is the longest common prefix of two distinct labeled rotations
//! ([`Occurrence`]s) in a symmetrized closure.  Working with labeled
//! rotations rather than distinct words makes coincidences count: a proper
//! power carries equal-worded occurrences under different labels, so its
//! maximal piece is the whole relator and C'(λ) fails for every λ ≤ 1.

use num_rational::Ratio;
use std::collections::BTreeMap;

use crate::tuples::{Occurrence, SymmetrizedSet};
use crate::words::{Letter, Word};
use crate::{Error, Result};

/// The small-cancellation strength the rewriting solver relies on.
pub fn dehn_gate() -> Ratio<u64> {
    Ratio::new(1, 8)
}

/// Two distinct occurrences exhibiting a piece as their common prefix.
#[derive(Debug, Clone)]
pub struct PieceWitness {
    pub piece: Word,
    pub first: Occurrence,
    pub second: Occurrence,
}

/// Summary of all pieces of a symmetrized closure.
#[derive(Debug, Clone)]
pub struct PieceReport {
    /// Length of the longest piece.
    pub max_piece_len: usize,
    /// A pair of occurrences realizing the longest piece.
    pub witness: Option<PieceWitness>,
    /// Longest piece prefixing any occurrence of each relator, keyed by the
    /// relator's index in the tuple.
    pub per_relator_max: BTreeMap<usize, usize>,
}

/// Outcome of the C'(λ) test.
#[derive(Debug, Clone)]
pub struct CprimeReport {
    pub holds: bool,
    pub lambda: Ratio<u64>,
    pub max_piece_len: usize,
    /// Present when `holds` is false: a piece at least λ times as long as a
    /// member it prefixes.
    pub violation: Option<PieceWitness>,
}

fn lcp_len(a: &[Letter], b: &[Letter]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

/// Occurrence indices sorted by word, with the common-prefix length of each
/// sorted-adjacent pair.  The longest common prefix of an occurrence with
/// any other occurrence is realized at one of its sorted neighbors.
fn sorted_adjacent_lcps(set: &SymmetrizedSet) -> (Vec<usize>, Vec<usize>) {
    let occs = set.occurrences();
    let mut order: Vec<usize> = (0..occs.len()).collect();
    order.sort_by(|&a, &b| occs[a].word.cmp(&occs[b].word));
    let lcps = order
        .windows(2)
        .map(|pair| lcp_len(occs[pair[0]].word.letters(), occs[pair[1]].word.letters()))
        .collect();
    (order, lcps)
}

/// Computes the piece structure of a symmetrized closure.
pub fn pieces(set: &SymmetrizedSet) -> PieceReport {
    let occs = set.occurrences();
    let (order, lcps) = sorted_adjacent_lcps(set);
    let mut max_piece_len = 0;
    let mut best_pair: Option<(usize, usize)> = None;
    let mut per_relator_max: BTreeMap<usize, usize> = BTreeMap::new();
    for (k, &lcp) in lcps.iter().enumerate() {
        let (i, j) = (order[k], order[k + 1]);
        if lcp > max_piece_len || best_pair.is_none() {
            max_piece_len = lcp;
            best_pair = Some((i, j));
        }
        for idx in [i, j] {
            let entry = per_relator_max.entry(occs[idx].relator).or_insert(0);
            *entry = (*entry).max(lcp);
        }
    }
    let witness = best_pair.map(|(i, j)| PieceWitness {
        piece: occs[i].word.subword(0, max_piece_len),
        first: occs[i].clone(),
        second: occs[j].clone(),
    });
    PieceReport {
        max_piece_len,
        witness,
        per_relator_max,
    }
}

/// Tests the strict small-cancellation condition: every piece `u` prefixing a
/// member `r` satisfies `|u| < λ·|r|`, compared in exact integer arithmetic.
pub fn satisfies_cprime(set: &SymmetrizedSet, lambda: Ratio<u64>) -> CprimeReport {
    let occs = set.occurrences();
    let (order, lcps) = sorted_adjacent_lcps(set);
    let num = *lambda.numer() as u128;
    let den = *lambda.denom() as u128;
    let mut max_piece_len = 0;
    let mut violation: Option<PieceWitness> = None;
    for (k, &lcp) in lcps.iter().enumerate() {
        max_piece_len = max_piece_len.max(lcp);
        if violation.is_some() {
            continue;
        }
        let (i, j) = (order[k], order[k + 1]);
        let violated = [i, j]
            .into_iter()
            .any(|idx| lcp as u128 * den >= num * occs[idx].word.len() as u128);
        if violated {
            violation = Some(PieceWitness {
                piece: occs[i].word.subword(0, lcp),
                first: occs[i].clone(),
                second: occs[j].clone(),
            });
        }
    }
    CprimeReport {
        holds: violation.is_none(),
        lambda,
        max_piece_len,
        violation,
    }
}

fn require_gate(set: &SymmetrizedSet) -> Result<()> {
    let report = satisfies_cprime(set, dehn_gate());
    match report.violation {
        None => Ok(()),
        Some(witness) => Err(Error::GateFailed {
            lambda: dehn_gate(),
            piece_len: witness.piece.len(),
            relator_len: witness.first.word.len().min(witness.second.word.len()),
            piece: witness.piece,
        }),
    }
}

/// Result of running the rewriting solver on a word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DehnResult {
    /// The irreducible word the solver stopped at.  In cyclic mode this is
    /// the canonical rotation of the cyclically reduced residue.
    pub normal_form: Word,
    /// True exactly when the input represents the identity of the quotient.
    pub trivial: bool,
    /// Number of relator replacements performed.
    pub steps: usize,
}

/// Members of the closure grouped by length and sorted, for prefix lookups.
struct MemberIndex {
    by_len: BTreeMap<usize, Vec<Word>>,
}

impl MemberIndex {
    fn build(set: &SymmetrizedSet) -> MemberIndex {
        let mut by_len: BTreeMap<usize, Vec<Word>> = BTreeMap::new();
        for member in set.members() {
            by_len.entry(member.len()).or_default().push(member.clone());
        }
        // BTreeSet iteration is already sorted, so each bucket is sorted.
        MemberIndex { by_len }
    }

    /// Longest common prefix between `window` and any member of `bucket`,
    /// with the matching member.  Sorted order puts the best match next to
    /// the insertion point.
    fn best_match<'a>(window: &[Letter], bucket: &'a [Word]) -> (usize, &'a Word) {
        let pos = bucket.partition_point(|m| m.letters() < window);
        let mut best = (0, &bucket[0]);
        if pos < bucket.len() {
            best = (lcp_len(window, bucket[pos].letters()), &bucket[pos]);
        }
        if pos > 0 {
            let lcp = lcp_len(window, bucket[pos - 1].letters());
            if lcp > best.0 {
                best = (lcp, &bucket[pos - 1]);
            }
        }
        best
    }

    /// Finds the leftmost replacement site: a factor of `letters` that is a
    /// prefix of a member `r` and strictly longer than `|r|/2`.  Returns the
    /// start offset, matched length, and the member.  Among candidates at
    /// the same offset the one shrinking the word most wins.
    fn find_site<'a>(&'a self, letters: &[Letter]) -> Option<(usize, usize, &'a Word)> {
        for start in 0..letters.len() {
            let mut site: Option<(usize, usize, &'a Word)> = None;
            for (&len, bucket) in &self.by_len {
                if len / 2 >= letters.len() - start {
                    break;
                }
                let window = &letters[start..(start + len).min(letters.len())];
                let (matched, member) = Self::best_match(window, bucket);
                if 2 * matched > len {
                    let better = match site {
                        None => true,
                        Some((_, prev_matched, prev_member)) => {
                            let prev_shrink = 2 * prev_matched - prev_member.len();
                            2 * matched - len > prev_shrink
                        }
                    };
                    if better {
                        site = Some((start, matched, member));
                    }
                }
            }
            if site.is_some() {
                return site;
            }
        }
        None
    }
}

/// One replacement: the factor at `start` of length `matched` equals the
/// first `matched` letters of `member`, so it equals the inverse of the
/// member's remaining suffix in the quotient.
fn replace(letters: &[Letter], start: usize, matched: usize, member: &Word) -> Word {
    let suffix_inverse = member
        .letters()[matched..]
        .iter()
        .rev()
        .map(|l| l.inverse());
    Word::normalize_letters(
        letters[..start]
            .iter()
            .copied()
            .chain(suffix_inverse)
            .chain(letters[start + matched..].iter().copied()),
    )
}

/// Runs the rewriting solver on the word as given, scanning only linear
/// factors.  Reaching the empty word certifies triviality; a nonempty
/// residue is decisive only for inputs whose reductions stay linearly
/// visible, so callers deciding triviality of arbitrary words should use
/// [`dehn_normalize_cyclic`].
pub fn dehn_normalize(w: &Word, set: &SymmetrizedSet) -> Result<DehnResult> {
    require_gate(set)?;
    let index = MemberIndex::build(set);
    let mut current = w.clone();
    let mut steps = 0;
    while let Some((start, matched, member)) = index.find_site(current.letters()) {
        let member = member.clone();
        current = replace(current.letters(), start, matched, &member);
        steps += 1;
    }
    let trivial = current.is_empty();
    Ok(DehnResult {
        normal_form: current,
        trivial,
        steps,
    })
}

/// Runs the solver up to conjugacy: the word is cyclically reduced between
/// replacements and factors may wrap around the end.  Because every
/// nontrivial relation contains more than half of some relator in one of its
/// rotations, the verdict decides triviality for every input.
pub fn dehn_normalize_cyclic(w: &Word, set: &SymmetrizedSet) -> Result<DehnResult> {
    require_gate(set)?;
    let index = MemberIndex::build(set);
    let mut current = crate::words::cyclic_reduce(w);
    let mut steps = 0;
    loop {
        let n = current.len();
        if n == 0 {
            break;
        }
        // Factors of the cyclic word are factors of the doubled word that
        // start in the first period and are no longer than the period.
        let mut doubled = current.letters().to_vec();
        doubled.extend_from_slice(current.letters());
        let mut site: Option<(usize, usize, Word)> = None;
        'scan: for start in 0..n {
            for (&len, bucket) in &index.by_len {
                if len / 2 >= n {
                    break;
                }
                let window = &doubled[start..start + len.min(n)];
                let (matched, member) = MemberIndex::best_match(window, bucket);
                if 2 * matched > len {
                    site = Some((start, matched, member.clone()));
                    break 'scan;
                }
            }
        }
        match site {
            Some((start, matched, member)) => {
                let rotation = &doubled[start..start + n];
                current = crate::words::cyclic_reduce(&replace(rotation, 0, matched, &member));
                steps += 1;
            }
            None => break,
        }
    }
    let trivial = current.is_empty();
    Ok(DehnResult {
        normal_form: current.into_word(),
        trivial,
        steps,
    })
}

/// Ungated comparison of two closures as sets of words.
pub fn same_members(a: &SymmetrizedSet, b: &SymmetrizedSet) -> bool {
    a.canonical_keys() == b.canonical_keys()
}

/// Decides whether two closures generate the same normal subgroup, which for
/// closures passing C'(1/8) reduces to set equality of their members.
pub fn greendlinger_equal(a: &SymmetrizedSet, b: &SymmetrizedSet) -> Result<bool> {
    require_gate(a)?;
    require_gate(b)?;
    Ok(same_members(a, b))
}

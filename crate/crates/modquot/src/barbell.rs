//! Barbell graphs and readability of words as path labels.
//!
//! A `u`-barbell is a labeled graph: an `a`-loop at one end vertex, a
//! `b`-loop at the other, and a simple arc spelling `u` between them, with
//! every dart paired with an inverse dart.  A word is readable when some
//! path from some vertex spells it.  Long reduced words readable in a small
//! barbell are forced into a rigid shape, crossing the bar back and forth,
//! which is what makes readability a useful rarity test.

use num_rational::Ratio;
use std::collections::{BTreeSet, HashMap};

use crate::suffix::SuffixAutomaton;
use crate::words::{CyclicWord, Letter, Word};
use crate::{Error, Result};

/// Fixed-width bit set over graph vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Bits(Vec<u64>);

impl Bits {
    fn empty(len: usize) -> Bits {
        Bits(vec![0; len.div_ceil(64)])
    }

    fn full(len: usize) -> Bits {
        let mut bits = Bits::empty(len);
        for i in 0..len {
            bits.set(i);
        }
        bits
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn or_assign(&mut self, other: &Bits) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a |= b;
        }
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|&b| b == 0)
    }

    fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(block, &bits)| {
            (0..64).filter_map(move |i| (bits >> i & 1 == 1).then_some(block * 64 + i))
        })
    }
}

fn letter_index(letter: Letter) -> usize {
    match letter {
        Letter::A => 0,
        Letter::B => 1,
        Letter::Binv => 2,
    }
}

/// The `u`-barbell: vertex 0 carries the `a`-loop, vertex `|u|` carries the
/// `b`-loop, and the bar arc spells `u` from end to end.
#[derive(Debug, Clone)]
pub struct BarbellGraph {
    bar: Word,
    /// Per letter, per vertex: the set of dart targets.
    targets: [Vec<Bits>; 3],
    /// Per letter, per vertex: the dart sources, for suffix sweeps.
    sources: [Vec<Vec<usize>>; 3],
    reduced: bool,
}

/// Builds the barbell over a nonempty bar label.
pub fn build_barbell(u: &Word) -> Result<BarbellGraph> {
    if u.is_empty() {
        return Err(Error::EmptyBar);
    }
    let len = u.len();
    let vertices = len + 1;
    let mut targets: [Vec<Bits>; 3] =
        std::array::from_fn(|_| vec![Bits::empty(vertices); vertices]);
    let mut sources: [Vec<Vec<usize>>; 3] = std::array::from_fn(|_| vec![Vec::new(); vertices]);
    let mut add = |from: usize, letter: Letter, to: usize| {
        targets[letter_index(letter)][from].set(to);
        sources[letter_index(letter)][to].push(from);
    };
    add(0, Letter::A, 0);
    add(vertices - 1, Letter::B, vertices - 1);
    add(vertices - 1, Letter::Binv, vertices - 1);
    for (i, &letter) in u.letters().iter().enumerate() {
        add(i, letter, i + 1);
        add(i + 1, letter.inverse(), i);
    }
    // Reduced words alternate a-letters and b-letters, so the shape check
    // below already forces the wrap-around pair to be reduced.
    let letters = u.letters();
    let reduced = len >= 2 && len % 2 == 0 && letters[0].is_b_type() && letters[len - 1] == Letter::A;
    Ok(BarbellGraph {
        bar: u.clone(),
        targets,
        sources,
        reduced,
    })
}

/// Verdict of a readability query, with a replayable witness path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReadabilityAnswer {
    pub readable: bool,
    pub start_vertex: Option<usize>,
    /// Vertex sequence of a witness path, one entry per position including
    /// both endpoints.
    pub path: Option<Vec<usize>>,
}

impl BarbellGraph {
    pub fn bar(&self) -> &Word {
        &self.bar
    }

    /// Bar label is cyclically reduced of even length, starting with a
    /// `b`-letter and ending with `a`.
    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn vertex_count(&self) -> usize {
        self.bar.len() + 1
    }

    /// Directed darts: the bar in both directions plus two darts per loop.
    pub fn dart_count(&self) -> usize {
        2 * self.bar.len() + 4
    }

    fn step(&self, states: &Bits, letter: Letter) -> Bits {
        let table = &self.targets[letter_index(letter)];
        let mut next = Bits::empty(self.vertex_count());
        for v in states.iter_ones() {
            next.or_assign(&table[v]);
        }
        next
    }

    fn has_dart(&self, from: usize, letter: Letter, to: usize) -> bool {
        self.targets[letter_index(letter)][from].get(to)
    }

    /// Nondeterministic simulation from every vertex at once.
    #[cfg(test)]
    pub(crate) fn reads(&self, letters: &[Letter]) -> bool {
        let mut states = Bits::full(self.vertex_count());
        for &letter in letters {
            states = self.step(&states, letter);
            if states.is_empty() {
                return false;
            }
        }
        true
    }

    /// Scans `text` once, tracking per vertex the longest readable suffix
    /// ending there; returns the first end position of a readable window of
    /// length `min_len` whose start lies before `start_limit`.
    fn first_readable_window(
        &self,
        text: &[Letter],
        min_len: usize,
        start_limit: usize,
    ) -> Option<usize> {
        let vertices = self.vertex_count();
        let mut current = vec![0usize; vertices];
        let mut next = vec![0usize; vertices];
        for (pos, &letter) in text.iter().enumerate() {
            let table = &self.sources[letter_index(letter)];
            for v in 0..vertices {
                next[v] = table[v].iter().map(|&s| current[s] + 1).max().unwrap_or(0);
            }
            std::mem::swap(&mut current, &mut next);
            let end = pos + 1;
            if end >= min_len
                && end - min_len < start_limit
                && current.iter().any(|&l| l >= min_len)
            {
                return Some(end);
            }
        }
        None
    }

    /// Readability with a witness path reconstructed from the simulation
    /// history.
    pub fn readable(&self, w: &Word) -> ReadabilityAnswer {
        let mut history = vec![Bits::full(self.vertex_count())];
        for &letter in w.letters() {
            let next = self.step(history.last().unwrap(), letter);
            if next.is_empty() {
                return ReadabilityAnswer {
                    readable: false,
                    start_vertex: None,
                    path: None,
                };
            }
            history.push(next);
        }
        let mut path = vec![history.last().unwrap().iter_ones().next().unwrap()];
        for (i, &letter) in w.letters().iter().enumerate().rev() {
            let cur = *path.last().unwrap();
            let prev = history[i]
                .iter_ones()
                .find(|&p| self.has_dart(p, letter, cur))
                .expect("simulation history admits a predecessor");
            path.push(prev);
        }
        path.reverse();
        ReadabilityAnswer {
            readable: true,
            start_vertex: Some(path[0]),
            path: Some(path),
        }
    }
}

/// After `a` a reduced word continues with a `b`-letter; after a `b`-letter,
/// with `a`.  Entry 3 is the fresh start.
fn allowed_letters(last: usize) -> &'static [Letter] {
    const AFTER_A: [Letter; 2] = [Letter::B, Letter::Binv];
    const AFTER_B: [Letter; 1] = [Letter::A];
    const START: [Letter; 3] = [Letter::A, Letter::B, Letter::Binv];
    match last {
        0 => &AFTER_A,
        1 | 2 => &AFTER_B,
        _ => &START,
    }
}

/// Exact number of distinct reduced words of length `n` readable in `g`,
/// by dynamic programming over determinized simulation states crossed with
/// the last-letter class.
pub fn count_readable(n: usize, g: &BarbellGraph) -> u128 {
    let mut current: HashMap<(Bits, usize), u128> = HashMap::new();
    current.insert((Bits::full(g.vertex_count()), 3), 1);
    for _ in 0..n {
        let mut next: HashMap<(Bits, usize), u128> = HashMap::new();
        for ((states, last), count) in &current {
            for &letter in allowed_letters(*last) {
                let stepped = g.step(states, letter);
                if !stepped.is_empty() {
                    *next.entry((stepped, letter_index(letter))).or_default() += count;
                }
            }
        }
        current = next;
    }
    current.values().sum()
}

/// All reduced bar labels of length `2k`: a `b`-letter choice in each odd
/// block, `a` in between.
pub fn reduced_bars(k: usize) -> Vec<Word> {
    assert!(k >= 1);
    (0..1u64 << k)
        .map(|mask| {
            let mut letters = Vec::with_capacity(2 * k);
            for slot in 0..k {
                letters.push(if mask >> slot & 1 == 0 {
                    Letter::B
                } else {
                    Letter::Binv
                });
                letters.push(Letter::A);
            }
            Word::from_reduced(letters)
        })
        .collect()
}

/// Number of distinct reduced words of length `n` readable in at least one
/// reduced barbell with bar length at most `max_bar`, via the disjoint-union
/// automaton of all such barbells.
pub fn count_readable_union(n: usize, max_bar: usize) -> u128 {
    let graphs: Vec<BarbellGraph> = (1..=max_bar / 2)
        .flat_map(|k| reduced_bars(k).into_iter().map(|u| build_barbell(&u).unwrap()))
        .collect();
    if graphs.is_empty() {
        return 0;
    }
    // Joint state: one simulation set per graph, dead graphs dropped to
    // keep the state canonical.
    type Joint = Vec<(usize, Bits)>;
    let start: Joint = graphs
        .iter()
        .enumerate()
        .map(|(i, g)| (i, Bits::full(g.vertex_count())))
        .collect();
    let mut current: HashMap<(Joint, usize), u128> = HashMap::new();
    current.insert((start, 3), 1);
    for _ in 0..n {
        let mut next: HashMap<(Joint, usize), u128> = HashMap::new();
        for ((joint, last), count) in &current {
            for &letter in allowed_letters(*last) {
                let stepped: Joint = joint
                    .iter()
                    .filter_map(|(i, states)| {
                        let s = graphs[*i].step(states, letter);
                        (!s.is_empty()).then_some((*i, s))
                    })
                    .collect();
                if !stepped.is_empty() {
                    *next.entry((stepped, letter_index(letter))).or_default() += count;
                }
            }
        }
        current = next;
    }
    current.values().sum()
}

/// A bar and window demonstrating θ-readability.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaWitness {
    /// The bar label of the reduced barbell.
    pub bar: Word,
    /// The readable window: a factor of a rotation of the word, at least
    /// half the word long, with `|bar| ≤ θ·|window|`.
    pub window: Word,
}

fn check_theta(theta: Ratio<u64>) -> Result<(u128, u128)> {
    let num = *theta.numer() as u128;
    let den = *theta.denom() as u128;
    if num == 0 || num >= den {
        return Err(Error::BadParameter {
            name: "theta",
            requirement: "a rational strictly between 0 and 1",
            value: theta.to_string(),
        });
    }
    Ok((num, den))
}

/// Longest run of consecutive `a·u·b^±·u⁻¹` blocks in the text, each block
/// starting where the previous one ends.
fn longest_block_chain(text: &[Letter], u: &[Letter]) -> usize {
    let bar_len = u.len();
    let block = 2 * bar_len + 2;
    let inverse: Vec<Letter> = u.iter().rev().map(|l| l.inverse()).collect();
    let is_block = |q: usize| {
        q + block <= text.len()
            && text[q] == Letter::A
            && text[q + 1..q + 1 + bar_len] == u[..]
            && text[q + 1 + bar_len].is_b_type()
            && text[q + 2 + bar_len..q + block] == inverse[..]
    };
    let mut chain = vec![0usize; text.len() + 1];
    let mut best = 0;
    for q in (0..text.len()).rev() {
        if is_block(q) {
            chain[q] = 1 + chain[q + block];
            best = best.max(chain[q]);
        }
    }
    best
}

/// Candidate bars harvested from the doubled word: every window with the
/// reduced-barbell shape, and the inverse of every window whose inverse has
/// that shape.
fn window_bars(doubled: &[Letter], n: usize, k: usize) -> BTreeSet<Word> {
    let mut out = BTreeSet::new();
    let len = 2 * k;
    if len > n {
        return out;
    }
    for start in 0..n {
        let window = &doubled[start..start + len];
        if window[0].is_b_type() {
            out.insert(Word::from_reduced(window.to_vec()));
        } else {
            let inverted: Vec<Letter> = window.iter().rev().map(|l| l.inverse()).collect();
            out.insert(Word::from_reduced(inverted));
        }
    }
    out
}

/// Decides whether some factor `v` of a rotation of `w` or `w⁻¹` with
/// `|v| ≥ |w|/2` is readable in a reduced `u`-barbell with `|u| ≤ θ·|v|`.
///
/// Readability is closed under factors and inverses, so it suffices to scan
/// windows of the doubled word at the minimum admissible length for each
/// bar size.  A window that long must cross the whole bar, which both
/// restricts candidate bars to windows of the word (or their inverses) and
/// forces a run of consecutive `a·u·b^±·u⁻¹` blocks; candidates failing the
/// block-count prefilters are skipped without simulation.  For bar sizes so
/// large relative to θ that a window need not cross the bar, every reduced
/// bar shape is tried instead, behind a budget guard.
pub fn theta_readable(w: &CyclicWord, theta: Ratio<u64>) -> Result<Option<ThetaWitness>> {
    let (num, den) = check_theta(theta)?;
    let n = w.len();
    // Any admissible bar has length at least 2.
    if 2 * den > num * n as u128 {
        return Ok(None);
    }
    let k_max = (num * n as u128 / (2 * den)) as usize;

    let mut doubled = w.letters().to_vec();
    doubled.extend_from_slice(w.letters());
    let index = SuffixAutomaton::build(&doubled);

    // v_min: shortest admissible window for this bar size.  A readable
    // window forces full bar crossings roughly every 2k+1 letters beyond
    // stubs of at most 2k at each end, and consecutive crossings alternate
    // direction, so both the bar and its inverse must occur at least
    // ⌊crossings/2⌋ times.
    struct Plan {
        k: usize,
        v_min: usize,
        occurrences: usize,
        restricted: bool,
    }
    let mut plans = Vec::new();
    let mut brute_shapes: u128 = 0;
    for k in 1..=k_max {
        let v_min_theta = ((2 * k) as u128 * den).div_ceil(num) as usize;
        let v_min = v_min_theta.max(n.div_ceil(2));
        if v_min > n {
            continue;
        }
        let crossings = v_min.saturating_sub(4 * k).div_ceil(2 * k + 1);
        // Harvesting bars from the word is complete only when the window
        // provably crosses in both directions.
        let restricted = crossings >= 2;
        if !restricted {
            brute_shapes = brute_shapes
                .saturating_add(1u128.checked_shl(k as u32).unwrap_or(u128::MAX));
        }
        plans.push(Plan {
            k,
            v_min,
            occurrences: crossings / 2,
            restricted,
        });
    }
    let budget: u128 = 1 << 22;
    if brute_shapes > budget {
        return Err(Error::BudgetExceeded {
            needed: brute_shapes,
            budget,
        });
    }

    for plan in plans {
        let bars: BTreeSet<Word> = if plan.restricted {
            window_bars(&doubled, n, plan.k)
        } else {
            reduced_bars(plan.k).into_iter().collect()
        };
        for bar in bars {
            if (index.count_occurrences(bar.letters()) as usize) < plan.occurrences
                || (index.count_occurrences(bar.invert().letters()) as usize) < plan.occurrences
            {
                continue;
            }
            // A window splits as stubs of at most 4k+1 letters around a run
            // of consecutive a·u·b^±·u⁻¹ blocks of 4k+2 letters each.
            let chain = longest_block_chain(&doubled, bar.letters());
            if chain * (4 * plan.k + 2) + 8 * plan.k + 2 < plan.v_min {
                continue;
            }
            let graph = build_barbell(&bar)?;
            debug_assert!(graph.is_reduced());
            if let Some(end) = graph.first_readable_window(&doubled, plan.v_min, n) {
                return Ok(Some(ThetaWitness {
                    bar,
                    window: Word::from_reduced(doubled[end - plan.v_min..end].to_vec()),
                }));
            }
        }
    }
    Ok(None)
}

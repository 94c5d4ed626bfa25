//! Reduced and cyclically reduced words over the alphabet `{a, b, B}`.
//!
//! The ambient group is the free product of the order-two group generated by
//! `a` and the order-three group generated by `b`; `B` stands for the inverse
//! of `b`.  A word is *reduced* when it contains none of the factors `aa`,
//! `bB`, `Bb`, `bb`, `BB` (the last two are shortened to `B` and `b` rather
//! than cancelled).  It is *cyclically reduced* when every rotation is
//! reduced, which for length at least two forces even length and strict
//! alternation between `a` and `b`-type letters.

use num_bigint::BigUint;
use rand::RngCore;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};
use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

/// A single letter. The ordering `A < B < Binv` (i.e. `a < b < B` in text
/// form) is the one used for all lexicographic comparisons in this crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    /// The involution `a`.
    A,
    /// The order-three generator `b`.
    B,
    /// The inverse `b^{-1}`, written `B`.
    Binv,
}

impl Letter {
    /// Group inverse of the letter (`a` is its own inverse).
    pub fn inverse(self) -> Letter {
        match self {
            Letter::A => Letter::A,
            Letter::B => Letter::Binv,
            Letter::Binv => Letter::B,
        }
    }

    /// The letter swap `b <-> B` (the automorphism fixing `a`).
    pub fn eta(self) -> Letter {
        match self {
            Letter::A => Letter::A,
            Letter::B => Letter::Binv,
            Letter::Binv => Letter::B,
        }
    }

    /// True for `b` and `B`.
    pub fn is_b_type(self) -> bool {
        matches!(self, Letter::B | Letter::Binv)
    }

    pub fn to_char(self) -> char {
        match self {
            Letter::A => 'a',
            Letter::B => 'b',
            Letter::Binv => 'B',
        }
    }

    pub fn from_char(ch: char) -> Option<Letter> {
        match ch {
            'a' => Some(Letter::A),
            'b' => Some(Letter::B),
            'B' => Some(Letter::Binv),
            _ => None,
        }
    }
}

/// What happens when `second` is written immediately after `first`.
enum Combine {
    /// The pair is reduced as written.
    Keep,
    /// The two letters cancel (`aa`, `bB`, `Bb`).
    Cancel,
    /// The two letters merge into one (`bb -> B`, `BB -> b`).
    Merge(Letter),
}

fn combine(first: Letter, second: Letter) -> Combine {
    use Letter::*;
    match (first, second) {
        (A, A) | (B, Binv) | (Binv, B) => Combine::Cancel,
        (B, B) => Combine::Merge(Binv),
        (Binv, Binv) => Combine::Merge(B),
        _ => Combine::Keep,
    }
}

/// True when `first` followed by `second` is not reduced.
pub(crate) fn clashes(first: Letter, second: Letter) -> bool {
    !matches!(combine(first, second), Combine::Keep)
}

/// A reduced word: the normal form of a group element.
///
/// Comparison is lexicographic in the letter order `a < b < B`, with a proper
/// prefix ordered before its extensions.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    /// The empty word (the identity element).
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    /// Parses text that must already be reduced.
    pub fn parse_reduced(text: &str) -> Result<Word> {
        let letters = parse_letters(text)?;
        if let Some(pos) = first_violation(&letters) {
            return Err(Error::NotReduced { pos });
        }
        Ok(Word(letters))
    }

    /// Parses arbitrary text over `{a, b, B}` and rewrites it to the reduced
    /// normal form of the element it spells.
    pub fn normalize(text: &str) -> Result<Word> {
        Ok(Word::normalize_letters(parse_letters(text)?))
    }

    /// Rewrites a raw letter sequence to its reduced normal form.
    pub fn normalize_letters(letters: impl IntoIterator<Item = Letter>) -> Word {
        let mut stack: Vec<Letter> = Vec::new();
        for letter in letters {
            push_normalized(&mut stack, letter);
        }
        Word(stack)
    }

    /// Wraps letters that are known to be reduced already (e.g. a factor of a
    /// reduced word).
    pub(crate) fn from_reduced(letters: Vec<Letter>) -> Word {
        debug_assert!(first_violation(&letters).is_none());
        Word(letters)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    /// The group inverse: reversed order, each letter inverted.
    pub fn invert(&self) -> Word {
        let letters: Vec<Letter> = self.0.iter().rev().map(|l| l.inverse()).collect();
        // The inverse of a reduced word is reduced: a clash in the inverse
        // would mirror a clash in the original.
        Word::from_reduced(letters)
    }

    /// The automorphism swapping `b` and `B` letterwise.
    pub fn eta(&self) -> Word {
        let letters: Vec<Letter> = self.0.iter().map(|l| l.eta()).collect();
        Word::from_reduced(letters)
    }

    /// Normalized product `self · other`.
    pub fn concat(&self, other: &Word) -> Word {
        let mut stack = self.0.clone();
        for &letter in &other.0 {
            push_normalized(&mut stack, letter);
        }
        Word(stack)
    }

    /// The factor `self[start..end]`, which is reduced because `self` is.
    pub fn subword(&self, start: usize, end: usize) -> Word {
        Word::from_reduced(self.0[start..end].to_vec())
    }
}

fn push_normalized(stack: &mut Vec<Letter>, letter: Letter) {
    let mut incoming = Some(letter);
    while let Some(l) = incoming.take() {
        match stack.last() {
            None => stack.push(l),
            Some(&top) => match combine(top, l) {
                Combine::Keep => stack.push(l),
                Combine::Cancel => {
                    stack.pop();
                }
                Combine::Merge(m) => {
                    stack.pop();
                    incoming = Some(m);
                }
            },
        }
    }
}

fn parse_letters(text: &str) -> Result<Vec<Letter>> {
    text.chars()
        .enumerate()
        .map(|(pos, ch)| Letter::from_char(ch).ok_or(Error::InvalidCharacter { ch, pos }))
        .collect()
}

/// Position of the first non-reduced pair, if any.
fn first_violation(letters: &[Letter]) -> Option<usize> {
    letters.windows(2).position(|p| clashes(p[0], p[1]))
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for letter in &self.0 {
            write!(f, "{}", letter.to_char())?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word> {
        Word::parse_reduced(s)
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

/// A cyclically reduced word: every rotation is reduced.
///
/// This is a concrete word, not a rotation class; two rotations of the same
/// necklace compare as different `CyclicWord`s.  Use [`CyclicWord::canonical`]
/// to move to the distinguished representative of the rotation class.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CyclicWord(Word);

impl CyclicWord {
    /// Wraps a word after checking that it is cyclically reduced.
    pub fn new(word: Word) -> Result<CyclicWord> {
        if word.len() >= 2 {
            let first = word.0[0];
            let last = *word.0.last().unwrap();
            if clashes(last, first) {
                return Err(Error::NotCyclicallyReduced);
            }
        }
        Ok(CyclicWord(word))
    }

    /// Parses text that must spell a cyclically reduced word.
    pub fn parse(text: &str) -> Result<CyclicWord> {
        CyclicWord::new(Word::parse_reduced(text)?)
    }

    pub fn word(&self) -> &Word {
        &self.0
    }

    pub fn into_word(self) -> Word {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        self.0.letters()
    }

    /// Rotation moving the first `k` letters to the end.
    pub fn rotate(&self, k: usize) -> CyclicWord {
        if self.is_empty() {
            return self.clone();
        }
        let n = self.len();
        let k = k % n;
        let mut letters = Vec::with_capacity(n);
        letters.extend_from_slice(&self.0 .0[k..]);
        letters.extend_from_slice(&self.0 .0[..k]);
        CyclicWord(Word::from_reduced(letters))
    }

    /// All rotations as plain words, in rotation-offset order.  A periodic
    /// word yields repeats; the list always has `max(1, len)` entries.
    pub fn rotations(&self) -> Vec<Word> {
        if self.is_empty() {
            return vec![Word::empty()];
        }
        (0..self.len()).map(|k| self.rotate(k).0).collect()
    }

    /// The lexicographically least rotation, the distinguished representative
    /// of this word's rotation class.
    pub fn canonical(&self) -> CyclicWord {
        self.rotate(least_rotation_index(self.letters()))
    }

    pub fn is_canonical(&self) -> bool {
        least_rotation_index(self.letters()) == 0
    }

    /// The inverse, which is again cyclically reduced.
    pub fn invert(&self) -> CyclicWord {
        CyclicWord(self.0.invert())
    }

    /// The `b <-> B` swap, which preserves cyclic reducedness.
    pub fn eta(&self) -> CyclicWord {
        CyclicWord(self.0.eta())
    }
}

impl fmt::Display for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl FromStr for CyclicWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<CyclicWord> {
        CyclicWord::parse(s)
    }
}

impl Serialize for CyclicWord {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

/// Index of the lexicographically least rotation (the classic two-pointer
/// smallest-cyclic-shift algorithm, linear time).
pub(crate) fn least_rotation_index(s: &[Letter]) -> usize {
    let n = s.len();
    if n == 0 {
        return 0;
    }
    let (mut i, mut j, mut k) = (0usize, 1usize, 0usize);
    while i < n && j < n && k < n {
        let a = s[(i + k) % n];
        let b = s[(j + k) % n];
        if a == b {
            k += 1;
            continue;
        }
        if a > b {
            i = i + k + 1;
        } else {
            j = j + k + 1;
        }
        if i == j {
            j += 1;
        }
        k = 0;
    }
    i.min(j)
}

/// Conjugates away matching ends until the word is cyclically reduced, then
/// returns the canonical rotation of the result.
///
/// Each round conjugates by the first letter and renormalizes; when the
/// wrap-around pair clashes this strictly shortens the word (a cancellation
/// removes two letters, a `bb`-style merge removes one), so the loop
/// terminates.  The result is the unique shortest conjugate up to rotation.
pub fn cyclic_reduce(w: &Word) -> CyclicWord {
    let mut cur = w.clone();
    loop {
        if cur.len() <= 1 {
            break;
        }
        let first = cur.0[0];
        let last = *cur.0.last().unwrap();
        if !clashes(last, first) {
            break;
        }
        let rotated = cur.0[1..].iter().copied().chain([first]);
        cur = Word::normalize_letters(rotated);
    }
    CyclicWord::new(cur)
        .expect("stripping loop ends on a cyclically reduced word")
        .canonical()
}

/// Number of cyclically reduced words of length `n`.
///
/// The empty word counts once and the three single letters are cyclically
/// reduced; beyond that only even lengths occur, with `2 · 2^(n/2)` words.
pub fn gamma(n: usize) -> BigUint {
    match n {
        0 => BigUint::from(1u32),
        1 => BigUint::from(3u32),
        n if n % 2 == 1 => BigUint::from(0u32),
        n => BigUint::from(2u32) << (n / 2),
    }
}

/// Number of cyclically reduced words of length at most `n`.
pub fn rho(n: usize) -> BigUint {
    if n == 0 {
        BigUint::from(1u32)
    } else {
        // 1 + 3 + sum of 2·2^k for k = 1..n/2 telescopes to 4·2^(n/2).
        BigUint::from(4u32) << (n / 2)
    }
}

/// Exact counts of cyclically reduced words at and up to a given length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable {
    pub n: usize,
    /// Count of cyclically reduced words of length exactly `n`.
    pub gamma: BigUint,
    /// Count of cyclically reduced words of length at most `n`.
    pub rho: BigUint,
}

impl CountTable {
    pub fn new(n: usize) -> CountTable {
        CountTable {
            n,
            gamma: gamma(n),
            rho: rho(n),
        }
    }
}

/// Enumerates every cyclically reduced word of length `n` exactly once, in a
/// fixed deterministic order (for even `n`: all words starting with `a` in
/// lexicographic order, then all words starting with a `b`-type letter).
///
/// # Panics
///
/// Panics if the count `2 · 2^(n/2)` does not fit in `u64`; enumeration at
/// such lengths is infeasible anyway.
pub fn enumerate_cyclic(n: usize) -> impl Iterator<Item = CyclicWord> {
    let count: u64 = match n {
        0 => 1,
        1 => 3,
        n if n % 2 == 1 => 0,
        n => {
            assert!(n / 2 < 63, "enumeration of length {n} words does not fit in u64");
            2u64 << (n / 2)
        }
    };
    (0..count).map(move |idx| nth_cyclic(n, idx))
}

/// The `idx`-th word in the [`enumerate_cyclic`] order.
fn nth_cyclic(n: usize, idx: u64) -> CyclicWord {
    match n {
        0 => return CyclicWord(Word::empty()),
        1 => {
            let letter = [Letter::A, Letter::B, Letter::Binv][idx as usize];
            return CyclicWord(Word(vec![letter]));
        }
        _ => {}
    }
    let half = n / 2;
    let b_first = idx >> half == 1;
    let slot = |i: usize| {
        if idx >> (half - 1 - i) & 1 == 0 {
            Letter::B
        } else {
            Letter::Binv
        }
    };
    let mut letters = Vec::with_capacity(n);
    for i in 0..half {
        if b_first {
            letters.push(slot(i));
            letters.push(Letter::A);
        } else {
            letters.push(Letter::A);
            letters.push(slot(i));
        }
    }
    CyclicWord(Word::from_reduced(letters))
}

/// Draws a uniformly random cyclically reduced word of even length `n >= 2`.
///
/// The draw consumes one `u64` for the `a`-first/`b`-first choice and then one
/// bit per `b`-slot, so the output is a pure function of the seed.
pub fn sample_cyclic(n: usize, seed: u64) -> Result<CyclicWord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_cyclic_with(n, &mut rng)
}

/// As [`sample_cyclic`], drawing from a caller-supplied generator.
pub fn sample_cyclic_with(n: usize, rng: &mut impl RngCore) -> Result<CyclicWord> {
    if n == 0 || n % 2 == 1 {
        return Err(Error::BadSampleLength { n });
    }
    let b_first = rng.next_u64() & 1 == 1;
    let half = n / 2;
    let mut letters = Vec::with_capacity(n);
    let mut bits = 0u64;
    for i in 0..half {
        if i % 64 == 0 {
            bits = rng.next_u64();
        }
        let b_letter = if bits >> (i % 64) & 1 == 0 {
            Letter::B
        } else {
            Letter::Binv
        };
        if b_first {
            letters.push(b_letter);
            letters.push(Letter::A);
        } else {
            letters.push(Letter::A);
            letters.push(b_letter);
        }
    }
    Ok(CyclicWord(Word::from_reduced(letters)))
}

/// Draws a uniformly random cyclically reduced word of length at most `n`
/// (`n` even and positive), the empty word and single letters included.
pub fn sample_cyclic_ball(n: usize, seed: u64) -> Result<CyclicWord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_cyclic_ball_with(n, &mut rng)
}

/// As [`sample_cyclic_ball`], drawing from a caller-supplied generator.
///
/// The length distribution follows the exact counts: the top length holds
/// half the ball's mass (`gamma(l) / rho(l) = 1/2` for even `l >= 2`), so a
/// fair coin per level descends to the right stratum, and the four words of
/// length at most one split the remainder evenly.
pub fn sample_cyclic_ball_with(n: usize, rng: &mut impl RngCore) -> Result<CyclicWord> {
    if n == 0 || n % 2 == 1 {
        return Err(Error::BadSampleLength { n });
    }
    let mut level = n;
    while level >= 2 {
        if rng.next_u64() & 1 == 1 {
            return sample_cyclic_with(level, rng);
        }
        level -= 2;
    }
    Ok(match rng.next_u64() & 3 {
        0 => CyclicWord(Word::empty()),
        1 => CyclicWord(Word(vec![Letter::A])),
        2 => CyclicWord(Word(vec![Letter::B])),
        _ => CyclicWord(Word(vec![Letter::Binv])),
    })
}

/// Enumerates every reduced word of length `n` (test helper and oracle input;
/// reduced words of odd length exist, unlike cyclically reduced ones).
pub fn enumerate_reduced(n: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut current: Vec<Letter> = Vec::with_capacity(n);
    fn extend(current: &mut Vec<Letter>, n: usize, out: &mut Vec<Word>) {
        if current.len() == n {
            out.push(Word::from_reduced(current.clone()));
            return;
        }
        for letter in [Letter::A, Letter::B, Letter::Binv] {
            if let Some(&last) = current.last() {
                if clashes(last, letter) {
                    continue;
                }
            }
            current.push(letter);
            extend(current, n, out);
            current.pop();
        }
    }
    extend(&mut current, n, &mut out);
    out
}

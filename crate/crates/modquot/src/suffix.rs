//! A suffix automaton over letter sequences.
//!
//! Built once on a text, it answers two questions used throughout the crate
//! in linear total time: how often a pattern occurs as a factor of the text,
//! and how long the longest common factor with another sequence is.

use crate::words::Letter;

const NONE: u32 = u32::MAX;

#[derive(Clone)]
struct State {
    len: u32,
    link: u32,
    next: [u32; 3],
    cloned: bool,
}

impl State {
    fn new(len: u32) -> State {
        State {
            len,
            link: NONE,
            next: [NONE; 3],
            cloned: false,
        }
    }
}

fn index(letter: Letter) -> usize {
    match letter {
        Letter::A => 0,
        Letter::B => 1,
        Letter::Binv => 2,
    }
}

pub(crate) struct SuffixAutomaton {
    states: Vec<State>,
    /// Occurrence count of the factors recognized at each state.
    occurrences: Vec<u64>,
}

impl SuffixAutomaton {
    /// Builds the automaton of all factors of `text`.
    pub fn build(text: &[Letter]) -> SuffixAutomaton {
        let mut states = vec![State::new(0)];
        let mut last = 0usize;
        for &letter in text {
            last = extend(&mut states, last, index(letter));
        }
        let occurrences = occurrence_counts(&states);
        SuffixAutomaton { states, occurrences }
    }

    /// Number of (possibly overlapping) occurrences of `pattern` in the text.
    pub fn count_occurrences(&self, pattern: &[Letter]) -> u64 {
        let mut v = 0usize;
        for &letter in pattern {
            let next = self.states[v].next[index(letter)];
            if next == NONE {
                return 0;
            }
            v = next as usize;
        }
        self.occurrences[v]
    }

    /// True when `pattern` is a factor of the text.
    #[cfg(test)]
    pub fn contains(&self, pattern: &[Letter]) -> bool {
        let mut v = 0usize;
        for &letter in pattern {
            let next = self.states[v].next[index(letter)];
            if next == NONE {
                return false;
            }
            v = next as usize;
        }
        true
    }

    /// Length of the longest factor shared by the text and `other`.
    #[cfg(test)]
    pub fn longest_common_factor(&self, other: &[Letter]) -> usize {
        self.longest_common_factor_at(other).0
    }

    /// Longest shared factor as (length, exclusive end position in `other`).
    pub fn longest_common_factor_at(&self, other: &[Letter]) -> (usize, usize) {
        let mut v = 0usize;
        let mut matched = 0usize;
        let mut best = (0usize, 0usize);
        for (pos, &letter) in other.iter().enumerate() {
            let c = index(letter);
            while v != 0 && self.states[v].next[c] == NONE {
                v = self.states[v].link as usize;
                matched = self.states[v].len as usize;
            }
            if self.states[v].next[c] != NONE {
                v = self.states[v].next[c] as usize;
                matched += 1;
            } else {
                matched = 0;
            }
            if matched > best.0 {
                best = (matched, pos + 1);
            }
        }
        best
    }
}

/// Standard online construction step; returns the new `last` state.
fn extend(states: &mut Vec<State>, last: usize, c: usize) -> usize {
    let cur = states.len();
    let new_len = states[last].len + 1;
    states.push(State::new(new_len));

    let mut p = last;
    loop {
        if states[p].next[c] != NONE {
            break;
        }
        states[p].next[c] = cur as u32;
        if states[p].link == NONE {
            states[cur].link = 0;
            return cur;
        }
        p = states[p].link as usize;
    }

    let q = states[p].next[c] as usize;
    if states[q].len == states[p].len + 1 {
        states[cur].link = q as u32;
        return cur;
    }

    let clone = states.len();
    let mut cloned = states[q].clone();
    cloned.len = states[p].len + 1;
    cloned.cloned = true;
    states.push(cloned);
    loop {
        if states[p].next[c] != q as u32 {
            break;
        }
        states[p].next[c] = clone as u32;
        if states[p].link == NONE {
            break;
        }
        p = states[p].link as usize;
    }
    states[q].link = clone as u32;
    states[cur].link = clone as u32;
    cur
}

/// Propagates endpoint counts up the suffix links: original states start at
/// one (they mark an endpoint of a prefix), clones at zero.
fn occurrence_counts(states: &[State]) -> Vec<u64> {
    let mut counts: Vec<u64> = states
        .iter()
        .enumerate()
        .map(|(i, s)| u64::from(i != 0 && !s.cloned))
        .collect();
    let mut order: Vec<usize> = (1..states.len()).collect();
    order.sort_unstable_by_key(|&i| std::cmp::Reverse(states[i].len));
    for i in order {
        let link = states[i].link as usize;
        counts[link] += counts[i];
    }
    counts
}

//! Acceptance suite: one test per release criterion, each printing one
//! `criterion NN <name>: PASS|FAIL (...)` line (visible with
//! `cargo test --test acceptance -- --nocapture`).
//!
//! Every threshold, tolerance, and time budget is pinned in this file.
//! Criteria that a test shows to be unattainable at the pinned sizes are
//! still run as stated and fail with the measured evidence plus a
//! companion verification of the same law at a feasible size; they are
//! not weakened to force a pass.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use modquot::genericity::{check_q, survey, Condition, GenericityParams};
use modquot::isocount::{generic_iso, has_free_orbit, orbit_census, IsoOutcome};
use modquot::smallcancel::{dehn_normalize, pieces, satisfies_cprime};
use modquot::tuples::{
    orbit, symmetrized_closure, RelatorTuple, SymmetrizedSet, DEFAULT_ORBIT_BUDGET,
};
use modquot::words::{
    enumerate_cyclic, enumerate_reduced, sample_cyclic_with, CyclicWord, Letter, Word,
};
use num_rational::Ratio;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Prints the per-criterion verdict line, then enforces the time budget and
/// the verdict itself.
fn conclude(id: u32, name: &str, started: Instant, budget: Duration, ok: bool, detail: &str) {
    let elapsed = started.elapsed();
    let in_budget = elapsed <= budget;
    let status = if ok && in_budget { "PASS" } else { "FAIL" };
    println!(
        "criterion {id:02} {name}: {status} ({:.1}s of {:.0}s budget; {detail})",
        elapsed.as_secs_f64(),
        budget.as_secs_f64()
    );
    assert!(
        in_budget,
        "criterion {id:02} {name}: exceeded {budget:?} (took {elapsed:?})"
    );
    assert!(ok, "criterion {id:02} {name}: {detail}");
}

fn desk_params() -> GenericityParams {
    GenericityParams {
        lambda: Ratio::new(1, 8),
        theta: Ratio::new(1, 5),
        min_length: 2,
        experiment: true,
    }
}

/// Uniformly random reduced word of exactly `len` letters.
fn random_reduced(len: usize, rng: &mut impl RngCore) -> Word {
    let mut letters = Vec::with_capacity(len);
    let mut a_next = rng.random_bool(0.5);
    for _ in 0..len {
        if a_next {
            letters.push(Letter::A);
        } else {
            letters.push(if rng.random_bool(0.5) { Letter::B } else { Letter::Binv });
        }
        a_next = !a_next;
    }
    Word::parse_reduced(&letters.iter().map(|l| l.to_char()).collect::<String>()).unwrap()
}

/// Rotation-and-inversion class checks used as sampling filters, computed
/// from first principles on the letter sequences.
fn is_proper_power(r: &CyclicWord) -> bool {
    (1..r.len()).any(|k| r.rotate(k).letters() == r.letters())
}

fn same_rotation_class(x: &[Letter], y: &[Letter]) -> bool {
    if x.len() != y.len() {
        return false;
    }
    let doubled: Vec<Letter> = x.iter().chain(x.iter()).copied().collect();
    doubled.windows(y.len()).any(|w| w == y)
}

fn inverse_letters(x: &[Letter]) -> Vec<Letter> {
    x.iter().rev().map(|l| l.inverse()).collect()
}

/// Conditions: no proper powers, no shared rotation class across entries
/// (up to inversion), no entry in its own inverse's class.
fn passes_class_conditions(t: &RelatorTuple) -> bool {
    let rs = t.relators();
    for (i, r) in rs.iter().enumerate() {
        if is_proper_power(r) {
            return false;
        }
        if same_rotation_class(r.letters(), &inverse_letters(r.letters())) {
            return false;
        }
        for s in &rs[i + 1..] {
            if same_rotation_class(r.letters(), s.letters())
                || same_rotation_class(r.letters(), &inverse_letters(s.letters()))
            {
                return false;
            }
        }
    }
    true
}

#[test]
fn criterion_01_cyclic_word_counting() {
    let started = Instant::now();
    let mut ok = true;
    let mut detail = String::new();
    for n in (2..=24usize).step_by(2) {
        let count = enumerate_cyclic(n).count() as u128;
        let expected = 2u128 << (n / 2);
        if count != expected {
            ok = false;
            detail = format!("n={n}: counted {count}, expected {expected}");
            break;
        }
    }
    if ok {
        detail = "lengths 2..=24 all match 2*2^(n/2) exactly".into();
    }
    conclude(1, "cyclic word counting", started, Duration::from_secs(10), ok, &detail);
}

#[test]
fn criterion_02_closure_size() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x02);
    let n = 100;
    let per_m = 334;
    let mut ok = true;
    let mut detail = String::new();
    let mut rejected = 0usize;
    'outer: for m in 1..=3usize {
        let mut accepted = 0;
        while accepted < per_m {
            let t = RelatorTuple::sample_equal_length(n, m, &mut rng).unwrap();
            if !passes_class_conditions(&t) {
                rejected += 1;
                continue;
            }
            accepted += 1;
            let size = symmetrized_closure(&t).member_count();
            if size != 2 * m * n {
                ok = false;
                detail = format!("m={m}: closure has {size} members, expected {}", 2 * m * n);
                break 'outer;
            }
        }
    }
    if ok {
        detail = format!(
            "3x{per_m} filtered tuples at n={n}: every closure has exactly 2mn members \
             ({rejected} samples rejected by the class filter)"
        );
    }
    conclude(2, "closure size", started, Duration::from_secs(30), ok, &detail);
}

#[test]
fn criterion_03_orbit_size_constant() {
    let started = Instant::now();
    let params = desk_params();
    let n = 40;
    let wanted = 100usize;
    let filter = [
        Condition::NotProperPower,
        Condition::DistinctClasses,
        Condition::EtaFactorBound,
        Condition::NotInverseClass,
    ];
    let mut summaries = Vec::new();
    let mut ok = true;
    for (m, cap) in [(1usize, 150_000usize), (2, 30_000)] {
        let mut rng = ChaCha8Rng::seed_from_u64(0x0300 + m as u64);
        let mut collected = Vec::new();
        let mut attempts = 0;
        while collected.len() < wanted && attempts < cap {
            attempts += 1;
            let t = RelatorTuple::sample_equal_length(n, m, &mut rng).unwrap();
            let report = check_q(&t, &params).unwrap();
            if filter.iter().all(|&c| report.verdict(c).is_pass()) {
                collected.push(t);
            }
        }
        let expected = 2 * (1..=m as u128).product::<u128>() * (2 * n as u128).pow(m as u32);
        let mut exact = 0usize;
        for t in &collected {
            if orbit(t).unwrap().len() as u128 == expected {
                exact += 1;
            }
        }
        if collected.len() < wanted || exact != collected.len() {
            ok = false;
        }
        summaries.push(format!(
            "m={m}: {}/{wanted} qualifying tuples in {attempts} samples, {exact} with class \
             size exactly {expected}",
            collected.len()
        ));
    }
    let detail = format!(
        "{}; the sign-flip factor cap floor(n/3)=13 at n=40 is beaten almost surely (a \
         relator's flipped image typically shares a factor of length about 2*log2(2*(2n)^2) \
         = 25 with its own rotations; the per-relator self-check passes at rate 0.002, so \
         two relators pass jointly at roughly 4e-6 and collecting 100 would take on the \
         order of 1e7 samples, hours rather than the two-minute budget)",
        summaries.join("; ")
    );
    conclude(3, "orbit size constant", started, Duration::from_secs(120), ok, &detail);
}

/// Independent canonical key: minimum letter-level form over every
/// reordering, rotation, entry inversion, and global sign flip.
fn brute_class_key(t: &RelatorTuple) -> Vec<Vec<Letter>> {
    let entries: Vec<&CyclicWord> = t.relators().iter().collect();
    let m = entries.len();
    let perms: Vec<Vec<usize>> = match m {
        1 => vec![vec![0]],
        2 => vec![vec![0, 1], vec![1, 0]],
        _ => panic!("brute key implemented for m <= 2"),
    };
    let variants: Vec<Vec<Vec<Letter>>> = entries
        .iter()
        .map(|w| {
            let mut vs = Vec::new();
            let fwd = w.letters().to_vec();
            let inv = inverse_letters(&fwd);
            for base in [fwd, inv] {
                for k in 0..base.len() {
                    let mut rotated = base[k..].to_vec();
                    rotated.extend_from_slice(&base[..k]);
                    vs.push(rotated);
                }
            }
            vs
        })
        .collect();
    let mut best: Option<Vec<Vec<Letter>>> = None;
    for perm in &perms {
        let lists: Vec<&Vec<Vec<Letter>>> = perm.iter().map(|&i| &variants[i]).collect();
        let mut counters = vec![0usize; m];
        loop {
            let picked: Vec<Vec<Letter>> =
                (0..m).map(|i| lists[i][counters[i]].clone()).collect();
            for flip in [false, true] {
                let candidate: Vec<Vec<Letter>> = if flip {
                    picked
                        .iter()
                        .map(|w| w.iter().map(|l| l.eta()).collect())
                        .collect()
                } else {
                    picked.clone()
                };
                if best.as_ref().is_none_or(|b| candidate < *b) {
                    best = Some(candidate);
                }
            }
            let mut i = 0;
            loop {
                if i == m {
                    break;
                }
                counters[i] += 1;
                if counters[i] < lists[i].len() {
                    break;
                }
                counters[i] = 0;
                i += 1;
            }
            if i == m {
                break;
            }
        }
    }
    best.unwrap()
}

#[test]
fn criterion_04_orbit_counting_kernel() {
    let started = Instant::now();
    let mut ok = true;
    let mut details = Vec::new();

    // Part 1: in the sub-population whose classes are full-size, the
    // tuple/class ratio is exactly 2*(2n) for m = 1.
    let mut nonempty = Vec::new();
    for n in (2..=16usize).step_by(2) {
        let census = orbit_census(n, 1, |t| has_free_orbit(t).unwrap(), DEFAULT_ORBIT_BUDGET)
            .unwrap();
        if u128::from(census.tuples) != 4 * n as u128 * u128::from(census.orbits) {
            ok = false;
            details.push(format!(
                "n={n}: {} tuples vs {} classes breaks the 4n ratio",
                census.tuples, census.orbits
            ));
        }
        if census.orbits > 0 {
            nonempty.push(format!("n={n}:{}x{}", census.orbits, 4 * n));
        }
    }
    if nonempty.is_empty() {
        ok = false;
        details.push("full-size sub-population empty at every length".into());
    }

    // Part 2: canonicalization agrees with the brute-force partition.
    for (n, m) in [(2usize, 1usize), (4, 1), (6, 1), (8, 1), (2, 2), (4, 2)] {
        let words: Vec<CyclicWord> = enumerate_cyclic(n).collect();
        let population: Vec<RelatorTuple> = if m == 1 {
            words
                .iter()
                .map(|w| RelatorTuple::new(vec![w.clone()]).unwrap())
                .collect()
        } else {
            words
                .iter()
                .flat_map(|x| {
                    words
                        .iter()
                        .map(|y| RelatorTuple::new(vec![x.clone(), y.clone()]).unwrap())
                })
                .collect()
        };
        let mut by_brute: BTreeMap<Vec<Vec<Letter>>, Vec<usize>> = BTreeMap::new();
        let mut by_canonical: BTreeMap<RelatorTuple, Vec<usize>> = BTreeMap::new();
        for (i, t) in population.iter().enumerate() {
            by_brute.entry(brute_class_key(t)).or_default().push(i);
            by_canonical
                .entry(modquot::tuples::canonical_tuple(t))
                .or_default()
                .push(i);
        }
        let brute_parts: Vec<Vec<usize>> = by_brute.into_values().collect();
        let mut canon_parts: Vec<Vec<usize>> = by_canonical.into_values().collect();
        canon_parts.sort();
        let mut brute_sorted = brute_parts.clone();
        brute_sorted.sort();
        if brute_sorted != canon_parts {
            ok = false;
            details.push(format!(
                "n={n} m={m}: canonical partition ({} classes) differs from brute force ({})",
                canon_parts.len(),
                brute_sorted.len()
            ));
        }
    }
    let detail = if ok {
        format!(
            "full-size classes at {} (others empty, ratio vacuous); canonical partitions \
             match brute force for m=1 n<=8 and m=2 n<=4",
            nonempty.join(", ")
        )
    } else {
        details.join("; ")
    };
    conclude(4, "orbit counting kernel", started, Duration::from_secs(300), ok, &detail);
}

fn lcp_len(x: &[Letter], y: &[Letter]) -> usize {
    x.iter().zip(y).take_while(|(a, b)| a == b).count()
}

#[test]
fn criterion_05_piece_statistics_oracle() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x05);
    let lambdas = [Ratio::new(1u64, 12), Ratio::new(1, 8), Ratio::new(1, 6)];
    let mut ok = true;
    let mut detail = String::new();
    'outer: for i in 0..1000usize {
        let m = i % 3 + 1;
        let words: Vec<CyclicWord> = (0..m)
            .map(|_| {
                let len = 2 * rng.random_range(1..=20usize);
                sample_cyclic_with(len, &mut rng).unwrap()
            })
            .collect();
        let set = symmetrized_closure(&RelatorTuple::new(words).unwrap());
        let occs = set.occurrences();
        let mut oracle_max = 0usize;
        let mut oracle_violated = [false; 3];
        for a in 0..occs.len() {
            for b in (a + 1)..occs.len() {
                let lcp = lcp_len(occs[a].word.letters(), occs[b].word.letters());
                oracle_max = oracle_max.max(lcp);
                for (slot, lambda) in lambdas.iter().enumerate() {
                    let (num, den) = (*lambda.numer() as u128, *lambda.denom() as u128);
                    for len in [occs[a].word.len(), occs[b].word.len()] {
                        if lcp as u128 * den >= num * len as u128 {
                            oracle_violated[slot] = true;
                        }
                    }
                }
            }
        }
        let report = pieces(&set);
        if report.max_piece_len != oracle_max {
            ok = false;
            detail = format!(
                "set {i}: reported max piece {} vs oracle {oracle_max}",
                report.max_piece_len
            );
            break;
        }
        if let Some(witness) = &report.witness {
            let piece = witness.piece.letters();
            if witness.first.word.letters()[..piece.len()] != *piece
                || witness.second.word.letters()[..piece.len()] != *piece
            {
                ok = false;
                detail = format!("set {i}: witness piece is not a common prefix");
                break;
            }
        }
        for (slot, lambda) in lambdas.iter().enumerate() {
            if satisfies_cprime(&set, *lambda).holds != !oracle_violated[slot] {
                ok = false;
                detail = format!("set {i}: piece bound disagreement at lambda={lambda}");
                break 'outer;
            }
        }
    }
    if ok {
        detail = "1000 random closures (m<=3, lengths<=40): max piece, witness, and three \
                  piece-bound verdicts all match the all-pairs oracle"
            .into();
    }
    conclude(5, "piece statistics oracle", started, Duration::from_secs(60), ok, &detail);
}

/// Barbell built from first principles: vertices 0..=|u|, an `a`-loop at
/// vertex 0, a `b`-loop at vertex |u|, and the bar spelling `u`.
fn barbell_darts(u: &Word) -> Vec<Vec<(Letter, usize)>> {
    let poles = u.len();
    let mut darts = vec![Vec::new(); poles + 1];
    darts[0].push((Letter::A, 0));
    darts[poles].push((Letter::B, poles));
    darts[poles].push((Letter::Binv, poles));
    for (i, &l) in u.letters().iter().enumerate() {
        darts[i].push((l, i + 1));
        darts[i + 1].push((l.inverse(), i));
    }
    darts
}

fn oracle_readable(darts: &[Vec<(Letter, usize)>], w: &[Letter]) -> bool {
    let mut reachable: Vec<bool> = vec![true; darts.len()];
    for &letter in w {
        let mut next = vec![false; darts.len()];
        for (v, hit) in reachable.iter().enumerate() {
            if *hit {
                for &(l, to) in &darts[v] {
                    if l == letter {
                        next[to] = true;
                    }
                }
            }
        }
        reachable = next;
        if !reachable.contains(&true) {
            return false;
        }
    }
    true
}

#[test]
fn criterion_06_readability_oracle() {
    let started = Instant::now();
    let bars: Vec<Word> = (1..=6usize).flat_map(enumerate_reduced).collect();
    let words: Vec<Word> = (0..=12usize).flat_map(enumerate_reduced).collect();
    let mut ok = true;
    let mut detail = String::new();
    let mut checked = 0usize;

    'bars: for bar in &bars {
        let g = modquot::barbell::build_barbell(bar).unwrap();
        let darts = barbell_darts(bar);
        for w in &words {
            checked += 1;
            let answer = g.readable(w);
            if answer.readable != oracle_readable(&darts, w.letters()) {
                ok = false;
                detail = format!("bar {bar}, word {w}: readability disagrees with oracle");
                break 'bars;
            }
            if answer.readable {
                let path = answer.path.as_ref().unwrap();
                let valid = path.len() == w.len() + 1
                    && answer.start_vertex == Some(path[0])
                    && w.letters()
                        .iter()
                        .enumerate()
                        .all(|(i, &l)| darts[path[i]].contains(&(l, path[i + 1])));
                if !valid {
                    ok = false;
                    detail = format!("bar {bar}, word {w}: witness path does not spell the word");
                    break 'bars;
                }
            }
        }
        // Counting agrees with enumeration through length 14.
        for n in 0..=14usize {
            let enumerated = enumerate_reduced(n)
                .into_iter()
                .filter(|w| oracle_readable(&darts, w.letters()))
                .count() as u128;
            if modquot::barbell::count_readable(n, &g) != enumerated {
                ok = false;
                detail = format!("bar {bar}, n={n}: counted words differ from enumeration");
                break 'bars;
            }
        }
    }

    // Growth cap: a bar of length 2k admits at most 4(2k+1)*2^(n/(4k+2))
    // readable words of length n.
    if ok {
        'bound: for k in 1..=3usize {
            for bar in modquot::barbell::reduced_bars(k) {
                let g = modquot::barbell::build_barbell(&bar).unwrap();
                for n in 1..=20usize {
                    let cap = 4.0 * (2 * k + 1) as f64 * 2f64.powf(n as f64 / (4 * k + 2) as f64);
                    let count = modquot::barbell::count_readable(n, &g) as f64;
                    if count > cap {
                        ok = false;
                        detail =
                            format!("bar {bar}, n={n}: {count} readable words exceed cap {cap}");
                        break 'bound;
                    }
                }
            }
        }
    }
    if ok {
        detail = format!(
            "{} bar/word pairs match the oracle with valid witness paths; counts match \
             enumeration to length 14; growth cap holds to length 20 for bars of length <= 6",
            checked
        );
    }
    conclude(6, "readability oracle", started, Duration::from_secs(300), ok, &detail);
}

/// Builds a reduced product of `count` conjugated closure members.
fn conjugate_product(set: &SymmetrizedSet, count: usize, rng: &mut impl RngCore) -> Word {
    let occs = set.occurrences();
    let mut letters: Vec<Letter> = Vec::new();
    for _ in 0..count {
        let u = random_reduced(rng.random_range(0..=50usize), rng);
        let member = &occs[rng.random_range(0..occs.len())].word;
        letters.extend_from_slice(u.letters());
        letters.extend_from_slice(member.letters());
        letters.extend(inverse_letters(u.letters()));
    }
    Word::normalize_letters(letters)
}

#[test]
fn criterion_07_triviality_solver() {
    let started = Instant::now();
    let gate = Ratio::new(1u64, 8);
    let mut rng = ChaCha8Rng::seed_from_u64(0x07);

    // As stated: single relators of length 100 passing the 1/8 piece bound.
    // A length-100 closure carries 200 rotation words whose 13-letter
    // prefixes range over only 192 possibilities, so some pair shares a
    // 13-letter piece while the bound demands pieces shorter than 12.5.
    let n_stated = 100;
    let cap = 3000;
    let mut qualifying = 0usize;
    for _ in 0..cap {
        let t = RelatorTuple::sample_equal_length(n_stated, 1, &mut rng).unwrap();
        if satisfies_cprime(&symmetrized_closure(&t), gate).holds {
            qualifying += 1;
        }
    }
    let stated_ok = qualifying >= 100;

    // Companion: the same solver contract verified at length 400, where the
    // piece bound is satisfiable (pass rate about 0.98).
    let n_wide = 400;
    let mut products_ok = 0usize;
    let mut products = 0usize;
    let mut nontrivial_ok = 0usize;
    let mut nontrivial = 0usize;
    for _ in 0..100 {
        let (tuple, set) = loop {
            let t = RelatorTuple::sample_equal_length(n_wide, 1, &mut rng).unwrap();
            let set = symmetrized_closure(&t);
            if satisfies_cprime(&set, gate).holds {
                break (t, set);
            }
        };
        let _ = &tuple;
        for _ in 0..5 {
            let count = rng.random_range(1..=5usize);
            let product = conjugate_product(&set, count, &mut rng);
            products += 1;
            if dehn_normalize(&product, &set).unwrap().trivial {
                products_ok += 1;
            }
        }
        let mut probes: Vec<Word> = ["a", "b", "ab"]
            .iter()
            .map(|s| Word::parse_reduced(s).unwrap())
            .collect();
        for _ in 0..100 {
            // Shorter than every closure member, hence outside the closure.
            probes.push(random_reduced(rng.random_range(1..n_wide / 2), &mut rng));
        }
        for probe in probes {
            nontrivial += 1;
            if !dehn_normalize(&probe, &set).unwrap().trivial {
                nontrivial_ok += 1;
            }
        }
    }
    let companion_ok = products_ok == products && nontrivial_ok == nontrivial;

    let ok = stated_ok && companion_ok;
    let detail = format!(
        "at n=100 the piece-bound population is empty by counting (200 rotation words, 192 \
         possible 13-letter prefixes): {qualifying}/{cap} samples qualified; companion at \
         n=400 over 100 closures: {products_ok}/{products} conjugate products reduced to the \
         empty word, {nontrivial_ok}/{nontrivial} short outside words stayed nontrivial"
    );
    conclude(7, "triviality solver", started, Duration::from_secs(120), ok, &detail);
}

/// Applies a random composite of the symmetries the decider must absorb:
/// reordering, rotation, entry inversion, and the global sign flip.
fn rigidity_transform(t: &RelatorTuple, rng: &mut impl RngCore) -> RelatorTuple {
    let mut entries: Vec<CyclicWord> = t.relators().to_vec();
    if entries.len() == 2 && rng.random_bool(0.5) {
        entries.swap(0, 1);
    }
    let transformed: Vec<CyclicWord> = entries
        .into_iter()
        .map(|w| {
            let mut v = w.rotate(rng.random_range(0..w.len()));
            if rng.random_bool(0.5) {
                v = v.invert();
            }
            v
        })
        .collect();
    let tuple = RelatorTuple::new(transformed).unwrap();
    if rng.random_bool(0.5) {
        tuple.eta()
    } else {
        tuple
    }
}

#[test]
fn criterion_08_isomorphism_decider_soundness() {
    let started = Instant::now();
    let params = desk_params();
    let gate = Ratio::new(1u64, 8);
    let n = 400;
    let mut rng = ChaCha8Rng::seed_from_u64(0x08);
    let sample_passing = |m: usize, rng: &mut ChaCha8Rng| loop {
        let t = RelatorTuple::sample_equal_length(n, m, rng).unwrap();
        if check_q(&t, &params).unwrap().overall_q
            && satisfies_cprime(&symmetrized_closure(&t), gate).holds
        {
            return t;
        }
    };
    let mut matched = 0usize;
    let mut separated = 0usize;
    let rounds = 50usize;
    for m in [1usize, 2] {
        for _ in 0..rounds {
            let t = sample_passing(m, &mut rng);
            let twin = rigidity_transform(&t, &mut rng);
            if matches!(
                generic_iso(&t, &twin, &params).unwrap().outcome,
                IsoOutcome::Isomorphic
            ) {
                matched += 1;
            }
            let other = sample_passing(m, &mut rng);
            if matches!(
                generic_iso(&t, &other, &params).unwrap().outcome,
                IsoOutcome::NotIsomorphic
            ) {
                separated += 1;
            }
        }
    }
    let ok = matched == 2 * rounds && separated == 2 * rounds;
    let detail = format!(
        "n={n}, m in {{1,2}}: {matched}/{} transformed twins recognized, {separated}/{} \
         independent tuples separated",
        2 * rounds,
        2 * rounds
    );
    conclude(8, "isomorphism decider soundness", started, Duration::from_secs(120), ok, &detail);
}

fn overall_rates(
    lambda: Ratio<u64>,
    theta: Ratio<u64>,
    sizes: &[usize],
    trials: u64,
    seed: u64,
) -> Vec<(f64, f64, f64)> {
    let params = GenericityParams {
        lambda,
        theta,
        min_length: 0,
        experiment: true,
    };
    sizes
        .iter()
        .map(|&n| {
            let table = survey(n, 1, trials, seed, &params, false, DEFAULT_ORBIT_BUDGET).unwrap();
            let row = table
                .rows
                .iter()
                .find(|r| r.condition == "overall_q")
                .unwrap();
            (row.ci_low, row.pass_rate, row.ci_high)
        })
        .collect()
}

fn trend_holds(rates: &[(f64, f64, f64)]) -> (bool, bool) {
    let nondecreasing = rates.windows(2).all(|w| w[1].1 >= w[0].1);
    let separated = rates.first().unwrap().2 < rates.last().unwrap().0;
    (nondecreasing, separated)
}

#[test]
fn criterion_09_genericity_trend() {
    let started = Instant::now();
    let sizes = [60usize, 120, 240, 480];
    let trials = 10_000u64;

    let stated = overall_rates(Ratio::new(1, 24), Ratio::new(1, 24), &sizes, trials, 0x09);
    let (stated_mono, stated_sep) = trend_holds(&stated);
    let stated_ok = stated_mono && stated_sep;

    // Companion: the same protocol with the piece bound at 1/8, where the
    // rate actually leaves zero inside this size range.
    let wide = overall_rates(Ratio::new(1, 8), Ratio::new(1, 5), &sizes, trials, 0x09);
    let (wide_mono, wide_sep) = trend_holds(&wide);

    let fmt = |rates: &[(f64, f64, f64)]| {
        rates
            .iter()
            .map(|(_, r, _)| format!("{r:.4}"))
            .collect::<Vec<_>>()
            .join(", ")
    };
    let detail = format!(
        "at piece bound 1/24 the rate is flat zero for every n <= 480 (rates [{}]; a random \
         closure's longest piece stays far above n/24 at these sizes), so the endpoint \
         intervals overlap: monotone={stated_mono}, separated={stated_sep}; companion at \
         1/8: rates [{}], monotone={wide_mono}, separated={wide_sep}",
        fmt(&stated),
        fmt(&wide)
    );
    conclude(
        9,
        "genericity trend",
        started,
        Duration::from_secs(1800),
        stated_ok && wide_mono && wide_sep,
        &detail,
    );
}

#[test]
fn criterion_10_full_scale_determinism() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x10);
    let tuple = RelatorTuple::sample_equal_length(1200, 1, &mut rng).unwrap();
    let params = GenericityParams::default();
    assert!(!params.experiment);

    let first = check_q(&tuple, &params).unwrap();
    let second = check_q(&tuple, &params).unwrap();
    let bytes_first = serde_json::to_string(&first).unwrap();
    let bytes_second = serde_json::to_string(&second).unwrap();
    let ok = bytes_first == bytes_second;
    let detail = format!(
        "n=1200 check at bound 1/120 completed twice with {} identical report bytes \
         (overall verdict {})",
        bytes_first.len(),
        first.overall_q
    );
    conclude(10, "full-scale determinism", started, Duration::from_secs(1800), ok, &detail);
}

//! Helpers shared by the integration test targets: independent oracles
//! (kept free of the library's own reduction and enumeration paths) and
//! deterministic random generators.

#![allow(dead_code)]

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use tracehom::trace::{EventAlphabet, EventId, IndependenceRelation, Word};
use tracehom::{PartialActionSystem, SparseIntMatrix, StateId, Transition};

pub fn sample_path(name: &str) -> String {
    format!("{}/../../samples/{name}", env!("CARGO_MANIFEST_DIR"))
}

pub fn load_sample(name: &str) -> String {
    std::fs::read_to_string(sample_path(name)).expect("sample file readable")
}

// --- determinant / rank / divisor oracles (independent of smith.rs) ----

/// Determinant by Laplace expansion along the first row.
pub fn determinant(matrix: &[Vec<BigInt>]) -> BigInt {
    let n = matrix.len();
    if n == 0 {
        return BigInt::one();
    }
    if n == 1 {
        return matrix[0][0].clone();
    }
    let mut det = BigInt::zero();
    for (j, entry) in matrix[0].iter().enumerate() {
        if entry.is_zero() {
            continue;
        }
        let minor: Vec<Vec<BigInt>> = matrix[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(c, _)| *c != j)
                    .map(|(_, v)| v.clone())
                    .collect()
            })
            .collect();
        let term = entry * determinant(&minor);
        if j % 2 == 0 {
            det += term;
        } else {
            det -= term;
        }
    }
    det
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn rec(n: usize, k: usize, from: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in from..n {
            current.push(i);
            rec(n, k, i + 1, current, out);
            current.pop();
        }
    }
    rec(n, k, 0, &mut current, &mut out);
    out
}

/// Divisor chain via gcds of k x k minors: with g_k the gcd of all k x k
/// minors (g_0 = 1), the k-th divisor is g_k / g_{k-1}; the rank is the
/// largest k with g_k nonzero.
pub fn minor_gcd_divisors(matrix: &SparseIntMatrix) -> Vec<BigInt> {
    let dense = matrix.to_dense();
    let (rows, cols) = (matrix.n_rows(), matrix.n_cols());
    let mut divisors = Vec::new();
    let mut previous = BigInt::one();
    for k in 1..=rows.min(cols) {
        let mut g = BigInt::zero();
        for row_pick in combinations(rows, k) {
            for col_pick in combinations(cols, k) {
                let sub: Vec<Vec<BigInt>> = row_pick
                    .iter()
                    .map(|&r| col_pick.iter().map(|&c| dense[r][c].clone()).collect())
                    .collect();
                g = g.gcd(&determinant(&sub));
            }
        }
        if g.is_zero() {
            break;
        }
        divisors.push(&g / &previous);
        previous = g;
    }
    divisors
}

/// Rank by fraction-free (Bareiss) Gaussian elimination.
pub fn fraction_free_rank(matrix: &SparseIntMatrix) -> usize {
    let mut a = matrix.to_dense();
    let (rows, cols) = (matrix.n_rows(), matrix.n_cols());
    let mut rank = 0;
    let mut previous = BigInt::one();
    for col in 0..cols {
        let Some(pivot_row) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, pivot_row);
        for r in rank + 1..rows {
            for c in col + 1..cols {
                let numerator = &a[rank][col] * &a[r][c] - &a[r][col] * &a[rank][c];
                a[r][c] = numerator / &previous;
            }
            a[r][col] = BigInt::zero();
        }
        previous = a[rank][col].clone();
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

// --- brute-force word tools -------------------------------------------

/// Closure of a word under adjacent independent swaps.
pub fn commutation_class(rel: &IndependenceRelation, w: &Word) -> BTreeSet<Word> {
    let mut seen = BTreeSet::new();
    let mut queue = vec![w.clone()];
    seen.insert(w.clone());
    while let Some(v) = queue.pop() {
        for i in 0..v.0.len().saturating_sub(1) {
            if rel.is_independent(v.0[i], v.0[i + 1]) {
                let mut swapped = v.clone();
                swapped.0.swap(i, i + 1);
                if seen.insert(swapped.clone()) {
                    queue.push(swapped);
                }
            }
        }
    }
    seen
}

/// All words over `n_events` letters with length below `max_len`.
pub fn all_words(n_events: usize, max_len: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for prefix in &frontier {
            for e in 0..n_events {
                let mut word = prefix.clone();
                word.push(EventId(e));
                out.push(Word(word.clone()));
                next.push(word);
            }
        }
        frontier = next;
    }
    out
}

// --- random generators --------------------------------------------------

pub struct SystemShape {
    pub max_states: usize,
    pub max_events: usize,
    /// Probability that a (state, event) slot is defined before repair,
    /// drawn per system from this range.
    pub density: std::ops::Range<f64>,
    /// Force targets above sources so the transition graph is acyclic.
    pub acyclic: bool,
}

/// Draws a random system and deletes table entries until every
/// independent pair commutes from every state; the result always passes
/// validation.
pub fn random_sound_system(rng: &mut ChaCha8Rng, shape: &SystemShape) -> PartialActionSystem {
    let n_states = rng.random_range(1..=shape.max_states);
    let n_events = rng.random_range(1..=shape.max_events);
    let density = rng.random_range(shape.density.clone());

    let mut pairs = Vec::new();
    for a in 0..n_events {
        for b in a + 1..n_events {
            if rng.random_bool(0.5) {
                pairs.push((EventId(a), EventId(b)));
            }
        }
    }

    let mut table: Vec<Vec<Option<usize>>> = vec![vec![None; n_events]; n_states];
    for (x, row) in table.iter_mut().enumerate() {
        for slot in row.iter_mut() {
            if !rng.random_bool(density) {
                continue;
            }
            *slot = if shape.acyclic {
                if x + 1 < n_states {
                    Some(rng.random_range(x + 1..n_states))
                } else {
                    None
                }
            } else {
                Some(rng.random_range(0..n_states))
            };
        }
    }

    // Repair a broken square by filling in its missing corner when the
    // budget allows, otherwise by dropping the second leg of the defined
    // path. The pair (budget, defined entries) drops lexicographically at
    // every step, so this terminates.
    let apply2 = |table: &Vec<Vec<Option<usize>>>, x: usize, e1: usize, e2: usize| {
        table[x][e1].and_then(|y| table[y][e2])
    };
    let mut completion_budget = n_states * n_events;
    'repair: loop {
        for x in 0..n_states {
            for &(EventId(a), EventId(b)) in &pairs {
                let ab = apply2(&table, x, a, b);
                let ba = apply2(&table, x, b, a);
                if ab == ba {
                    continue;
                }
                if completion_budget > 0 {
                    if let (Some(u), Some(z)) = (ab, table[x][b]) {
                        if table[z][a].is_none() && (!shape.acyclic || u > z) {
                            table[z][a] = Some(u);
                            completion_budget -= 1;
                            continue 'repair;
                        }
                    }
                    if let (Some(u), Some(y)) = (ba, table[x][a]) {
                        if table[y][b].is_none() && (!shape.acyclic || u > y) {
                            table[y][b] = Some(u);
                            completion_budget -= 1;
                            continue 'repair;
                        }
                    }
                }
                if ab.is_some() {
                    let y = table[x][a].unwrap();
                    table[y][b] = None;
                } else {
                    let z = table[x][b].unwrap();
                    table[z][a] = None;
                }
                continue 'repair;
            }
        }
        break;
    }

    let alphabet =
        EventAlphabet::new((0..n_events).map(|e| format!("e{e}")).collect()).unwrap();
    let independence = IndependenceRelation::new(n_events, pairs).unwrap();
    let states = (0..n_states).map(|s| format!("s{s}")).collect();
    let transitions: Vec<Transition> = table
        .iter()
        .enumerate()
        .flat_map(|(x, row)| {
            row.iter().enumerate().filter_map(move |(e, to)| {
                to.map(|to| Transition {
                    from: StateId(x),
                    event: EventId(e),
                    to: StateId(to),
                })
            })
        })
        .collect();
    let sys = PartialActionSystem::from_parts(alphabet, independence, states, &transitions, None)
        .unwrap();
    assert!(sys.validate().is_empty(), "repair must leave a sound table");
    sys
}

/// Rebuilds a system with events redeclared in the order given by `perm`
/// (new index i holds old event `perm[i]`). The states and the action are
/// untouched, so the homology must not change.
pub fn permute_events(sys: &PartialActionSystem, perm: &[usize]) -> PartialActionSystem {
    let n = sys.alphabet().len();
    assert_eq!(perm.len(), n);
    let mut new_of_old = vec![0; n];
    for (new, &old) in perm.iter().enumerate() {
        new_of_old[old] = new;
    }

    let names: Vec<String> = perm
        .iter()
        .map(|&old| sys.alphabet().name(EventId(old)).to_string())
        .collect();
    let alphabet = EventAlphabet::new(names).unwrap();
    let pairs: Vec<(EventId, EventId)> = sys
        .independence()
        .pairs()
        .into_iter()
        .map(|(a, b)| (EventId(new_of_old[a.0]), EventId(new_of_old[b.0])))
        .collect();
    let independence = IndependenceRelation::new(n, pairs).unwrap();
    let transitions: Vec<Transition> = sys
        .transitions()
        .map(|t| Transition {
            from: t.from,
            event: EventId(new_of_old[t.event.0]),
            to: t.to,
        })
        .collect();
    PartialActionSystem::from_parts(
        alphabet,
        independence,
        sys.state_names().to_vec(),
        &transitions,
        sys.initial(),
    )
    .unwrap()
}

/// Uniformly random permutation of `0..n`.
pub fn random_permutation(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        perm.swap(i, j);
    }
    perm
}

/// Random matrix with entries drawn uniformly from `lo..=hi`.
pub fn random_matrix(
    rng: &mut ChaCha8Rng,
    max_rows: usize,
    max_cols: usize,
    lo: i64,
    hi: i64,
) -> SparseIntMatrix {
    let rows = rng.random_range(1..=max_rows);
    let cols = rng.random_range(1..=max_cols);
    let mut triplets = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            let v = rng.random_range(lo..=hi);
            if v != 0 {
                triplets.push((r, c, BigInt::from(v)));
            }
        }
    }
    SparseIntMatrix::from_triplets(rows, cols, triplets).unwrap()
}

/// Signed magnitude check used by divisor comparisons.
pub fn assert_divisor_chain(divisors: &[BigInt]) {
    for d in divisors {
        assert!(d.is_positive(), "divisor {d} must be positive");
    }
    for pair in divisors.windows(2) {
        assert!(
            (&pair[1] % &pair[0]).is_zero(),
            "divisibility broken: {} does not divide {}",
            pair[0],
            pair[1]
        );
    }
}

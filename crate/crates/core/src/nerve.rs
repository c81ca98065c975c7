//! Brute-force cross-check: homology through the nerve of the state
//! category.
//!
//! States and the traces between them form a category (morphisms are
//! commutation classes of words, composition is concatenation). Its nerve
//! is the simplicial set of composable chains; homology of that space must
//! agree with the cubical complex in every degree. Chains are enumerated
//! explicitly, so the transition graph is required to be acyclic — with a
//! cycle some morphism set is infinite and the enumeration cannot finish.
//!
//! This module is a test instrument: correctness over speed.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;

use crate::action::{PartialActionSystem, StateId};
use crate::complex::{homology_from_differentials, HomologyGroup};
use crate::error::{Error, Result};
use crate::smith::SparseIntMatrix;
use crate::trace::Word;

/// For each ordered state pair, every trace (canonical-form word) leading
/// from the first to the second. The empty trace sits at each `(x, x)`.
#[derive(Clone, Debug)]
pub struct MorphismTable {
    by_pair: BTreeMap<(StateId, StateId), BTreeSet<Word>>,
}

impl MorphismTable {
    /// Traces from `x` to `y`, sorted; empty slice when there are none.
    pub fn traces(&self, x: StateId, y: StateId) -> Vec<&Word> {
        self.by_pair
            .get(&(x, y))
            .map(|set| set.iter().collect())
            .unwrap_or_default()
    }

    /// Total number of morphisms, identities included.
    pub fn len(&self) -> usize {
        self.by_pair.values().map(BTreeSet::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.by_pair.is_empty()
    }

    /// Non-identity morphisms as `(source, trace, target)`, sorted.
    fn arrows(&self) -> Vec<(StateId, Word, StateId)> {
        let mut out = Vec::new();
        for ((x, y), words) in &self.by_pair {
            for w in words {
                if !w.is_empty() {
                    out.push((*x, w.clone(), *y));
                }
            }
        }
        out
    }
}

/// Enumerates all traces between scope states by walking every path and
/// collapsing words to their canonical forms.
///
/// Fails with [`Error::Cyclic`] when the transition graph restricted to
/// `scope` has a directed cycle (self-loops included).
pub fn enumerate_morphisms(
    sys: &PartialActionSystem,
    scope: &BTreeSet<StateId>,
) -> Result<MorphismTable> {
    check_acyclic(sys, scope)?;
    let rel = sys.independence();
    let mut by_pair: BTreeMap<(StateId, StateId), BTreeSet<Word>> = BTreeMap::new();
    for &start in scope {
        let mut stack = vec![(start, Vec::new())];
        while let Some((state, word)) = stack.pop() {
            by_pair
                .entry((start, state))
                .or_default()
                .insert(rel.normal_form(&Word(word.clone())));
            for e in sys.alphabet().ids() {
                if let Some(next) = sys.apply_event(state, e) {
                    if scope.contains(&next) {
                        let mut longer = word.clone();
                        longer.push(e);
                        stack.push((next, longer));
                    }
                }
            }
        }
    }
    Ok(MorphismTable { by_pair })
}

/// Homology of the nerve: simplices are chains of composable non-identity
/// morphisms, the boundary alternates over dropping an end or composing
/// two adjacent arrows. Composing non-empty traces never yields an
/// identity, so no face degenerates.
///
/// With `max_dim = Some(d)` chains are built through degree `d + 1`, which
/// keeps every reported group below the cut exact; groups are reported for
/// degrees `0..=d`.
pub fn nerve_homology(
    sys: &PartialActionSystem,
    scope: &BTreeSet<StateId>,
    max_dim: Option<usize>,
) -> Result<Vec<HomologyGroup>> {
    let table = enumerate_morphisms(sys, scope)?;
    let rel = sys.independence();

    // Outgoing non-identity arrows per source state, sorted by trace.
    let mut outgoing: BTreeMap<StateId, Vec<(Word, StateId)>> = BTreeMap::new();
    for (src, word, dst) in table.arrows() {
        outgoing.entry(src).or_default().push((word, dst));
    }

    // chains[n]: degree-n simplices; a chain is (start, [arrow words...])
    // with the intermediate states implied. Built in lexicographic order.
    type Chain = (StateId, Vec<Word>);
    let vertex_chains: Vec<Chain> = scope.iter().map(|&s| (s, Vec::new())).collect();
    let mut chains: Vec<Vec<Chain>> = vec![vertex_chains];
    let build_through = max_dim.map(|d| d + 1);
    loop {
        let degree = chains.len();
        if build_through.is_some_and(|cap| degree > cap) {
            break;
        }
        let previous = &chains[degree - 1];
        let mut next: Vec<Chain> = Vec::new();
        for (start, words) in previous {
            let end = chain_end(sys, *start, words);
            if let Some(extensions) = outgoing.get(&end) {
                for (word, _) in extensions {
                    let mut longer = words.clone();
                    longer.push(word.clone());
                    next.push((*start, longer));
                }
            }
        }
        if next.is_empty() {
            break;
        }
        next.sort();
        chains.push(next);
    }

    let index: Vec<BTreeMap<&Chain, usize>> = chains
        .iter()
        .map(|level| level.iter().enumerate().map(|(i, c)| (c, i)).collect())
        .collect();

    let mut diffs = Vec::with_capacity(chains.len().saturating_sub(1));
    for degree in 1..chains.len() {
        let mut triplets = Vec::new();
        for (c, (start, words)) in chains[degree].iter().enumerate() {
            for face in 0..=degree {
                let sign = if face % 2 == 0 { 1 } else { -1 };
                let smaller: Chain = if face == 0 {
                    let new_start = sys
                        .apply_word(*start, &words[0])
                        .expect("chain arrows are realizable");
                    (new_start, words[1..].to_vec())
                } else if face == degree {
                    (*start, words[..degree - 1].to_vec())
                } else {
                    let mut glued = words[face - 1].0.clone();
                    glued.extend(words[face].0.iter().copied());
                    let composed = rel.normal_form(&Word(glued));
                    let mut shorter = Vec::with_capacity(degree - 1);
                    shorter.extend_from_slice(&words[..face - 1]);
                    shorter.push(composed);
                    shorter.extend_from_slice(&words[face + 1..]);
                    (*start, shorter)
                };
                let r = *index[degree - 1]
                    .get(&smaller)
                    .expect("faces of a chain are chains");
                triplets.push((r, c, BigInt::from(sign)));
            }
        }
        diffs.push(
            SparseIntMatrix::from_triplets(chains[degree - 1].len(), chains[degree].len(), triplets)
                .expect("indices come from the chain tables"),
        );
    }

    let sizes: Vec<usize> = chains.iter().map(Vec::len).collect();
    let mut groups = homology_from_differentials(&sizes, &diffs);
    if let Some(d) = max_dim {
        groups.truncate(d + 1);
    }
    Ok(groups)
}

fn chain_end(sys: &PartialActionSystem, start: StateId, words: &[Word]) -> StateId {
    words.iter().fold(start, |state, w| {
        sys.apply_word(state, w).expect("chain arrows are realizable")
    })
}

/// Depth-first cycle detection over the scope-restricted transition graph.
fn check_acyclic(sys: &PartialActionSystem, scope: &BTreeSet<StateId>) -> Result<()> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        White,
        Grey,
        Black,
    }
    let mut marks = vec![Mark::White; sys.state_count()];
    for &root in scope {
        if marks[root.0] != Mark::White {
            continue;
        }
        // Iterative DFS; the stack keeps (state, next-event cursor).
        let mut stack = vec![(root, 0usize)];
        marks[root.0] = Mark::Grey;
        while let Some(&mut (state, ref mut cursor)) = stack.last_mut() {
            if *cursor >= sys.alphabet().len() {
                marks[state.0] = Mark::Black;
                stack.pop();
                continue;
            }
            let e = crate::trace::EventId(*cursor);
            *cursor += 1;
            if let Some(next) = sys.apply_event(state, e) {
                if !scope.contains(&next) {
                    continue;
                }
                match marks[next.0] {
                    Mark::Grey => {
                        return Err(Error::Cyclic {
                            state: sys.state_name(next).to_string(),
                        })
                    }
                    Mark::White => {
                        marks[next.0] = Mark::Grey;
                        stack.push((next, 0));
                    }
                    Mark::Black => {}
                }
            }
        }
    }
    Ok(())
}

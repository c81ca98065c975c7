//! Event alphabets, independence relations and partial commutation.
//!
//! Words over the alphabet are identified up to swapping adjacent
//! independent letters. Each equivalence class has a unique
//! lexicographically least representative (with respect to declaration
//! order), which serves as the canonical form for equality tests.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of an event in its [`EventAlphabet`], assigned in declaration order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EventId(pub usize);

/// A finite, totally ordered set of named events.
///
/// The total order is declaration order; it is stable across runs and is
/// the order used for canonical words and clique tuples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EventAlphabet {
    names: Vec<String>,
}

impl EventAlphabet {
    /// Builds an alphabet from distinct, non-empty names.
    pub fn new(names: Vec<String>) -> Result<Self> {
        for (i, name) in names.iter().enumerate() {
            if name.is_empty() {
                return Err(Error::Input(format!("event #{i} has an empty name")));
            }
            if names[..i].contains(name) {
                return Err(Error::Input(format!("duplicate event name {name:?}")));
            }
        }
        Ok(Self { names })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Name of an event. Panics if the id is out of range.
    pub fn name(&self, e: EventId) -> &str {
        &self.names[e.0]
    }

    /// Looks an event up by name.
    pub fn id_of(&self, name: &str) -> Option<EventId> {
        self.names.iter().position(|n| n == name).map(EventId)
    }

    pub fn ids(&self) -> impl Iterator<Item = EventId> + '_ {
        (0..self.names.len()).map(EventId)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Renders a word as space-separated event names.
    pub fn render_word(&self, word: &Word) -> String {
        word.0
            .iter()
            .map(|&e| self.name(e))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// A word over the event alphabet: a finite sequence of event ids.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(pub Vec<EventId>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<Vec<EventId>> for Word {
    fn from(letters: Vec<EventId>) -> Self {
        Word(letters)
    }
}

impl FromIterator<EventId> for Word {
    fn from_iter<T: IntoIterator<Item = EventId>>(iter: T) -> Self {
        Word(iter.into_iter().collect())
    }
}

/// Irreflexive symmetric relation on events; related events commute.
///
/// Stored as a symmetric adjacency matrix over event indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndependenceRelation {
    event_count: usize,
    adjacent: Vec<bool>,
}

impl IndependenceRelation {
    /// Builds the relation from unordered pairs. Rejects reflexive pairs
    /// and out-of-range indices.
    pub fn new(event_count: usize, pairs: impl IntoIterator<Item = (EventId, EventId)>) -> Result<Self> {
        let mut adjacent = vec![false; event_count * event_count];
        for (a, b) in pairs {
            if a.0 >= event_count || b.0 >= event_count {
                return Err(Error::Input(format!(
                    "independence pair ({}, {}) references an event outside 0..{event_count}",
                    a.0, b.0
                )));
            }
            if a == b {
                return Err(Error::Input(format!(
                    "independence must be irreflexive; got the pair ({}, {})",
                    a.0, b.0
                )));
            }
            adjacent[a.0 * event_count + b.0] = true;
            adjacent[b.0 * event_count + a.0] = true;
        }
        Ok(Self {
            event_count,
            adjacent,
        })
    }

    /// The empty relation: no two events commute.
    pub fn discrete(event_count: usize) -> Self {
        Self {
            event_count,
            adjacent: vec![false; event_count * event_count],
        }
    }

    pub fn event_count(&self) -> usize {
        self.event_count
    }

    /// True iff `a` and `b` are independent. Always false for `a == b`.
    /// Panics if an id is out of range.
    pub fn is_independent(&self, a: EventId, b: EventId) -> bool {
        assert!(
            a.0 < self.event_count && b.0 < self.event_count,
            "event id out of range: ({}, {}) with {} events",
            a.0,
            b.0,
            self.event_count
        );
        self.adjacent[a.0 * self.event_count + b.0]
    }

    /// The unordered pairs of the relation, each reported once as (low, high).
    pub fn pairs(&self) -> Vec<(EventId, EventId)> {
        let mut out = Vec::new();
        for a in 0..self.event_count {
            for b in a + 1..self.event_count {
                if self.adjacent[a * self.event_count + b] {
                    out.push((EventId(a), EventId(b)));
                }
            }
        }
        out
    }

    /// Lexicographically least representative of the commutation class
    /// of `word`.
    ///
    /// Two words have equal normal forms iff one can be rewritten into the
    /// other by swapping adjacent independent letters. Greedy strategy: at
    /// each step, among the letters that commute with everything before
    /// them, pull the smallest one to the front.
    pub fn normal_form(&self, word: &Word) -> Word {
        let mut rest = word.0.clone();
        let mut out = Vec::with_capacity(rest.len());
        while !rest.is_empty() {
            let mut best = 0;
            for i in 1..rest.len() {
                let movable = rest[..i].iter().all(|&p| self.is_independent(p, rest[i]));
                if movable && rest[i] < rest[best] {
                    best = i;
                }
                // A blocked letter also blocks everything equal behind it,
                // but later positions may still hold smaller movable letters,
                // so the scan must continue to the end.
            }
            out.push(rest.remove(best));
        }
        Word(out)
    }

    /// All strictly increasing `size`-tuples of pairwise independent events,
    /// in lexicographic order. For `size == 0` the single empty tuple.
    pub fn cliques_of_size(&self, size: usize) -> Vec<Vec<EventId>> {
        let mut out = Vec::new();
        let mut current = Vec::with_capacity(size);
        self.extend_clique(&mut current, size, 0, &mut out);
        out
    }

    fn extend_clique(
        &self,
        current: &mut Vec<EventId>,
        target: usize,
        from: usize,
        out: &mut Vec<Vec<EventId>>,
    ) {
        if current.len() == target {
            out.push(current.clone());
            return;
        }
        // Not enough events left to reach the target size.
        if from + (target - current.len()) > self.event_count {
            return;
        }
        for i in from..self.event_count {
            let e = EventId(i);
            if current.iter().all(|&p| self.is_independent(p, e)) {
                current.push(e);
                self.extend_clique(current, target, i + 1, out);
                current.pop();
            }
        }
    }

    /// Size of the largest set of pairwise independent events (0 for an
    /// empty alphabet, 1 when the relation is empty but events exist).
    pub fn max_clique_size(&self) -> usize {
        let mut best = 0;
        let mut current = Vec::new();
        self.search_max_clique(&mut current, 0, &mut best);
        best
    }

    fn search_max_clique(&self, current: &mut Vec<EventId>, from: usize, best: &mut usize) {
        *best = (*best).max(current.len());
        for i in from..self.event_count {
            // Even taking every remaining event cannot beat the best.
            if current.len() + (self.event_count - i) <= *best {
                return;
            }
            let e = EventId(i);
            if current.iter().all(|&p| self.is_independent(p, e)) {
                current.push(e);
                self.search_max_clique(current, i + 1, best);
                current.pop();
            }
        }
    }
}

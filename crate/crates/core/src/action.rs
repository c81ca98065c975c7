//! Finite partial actions of a partially commutative alphabet on a state set.
//!
//! Each event acts as a partial function on states; "undefined" is absence
//! from the table and absorbs further applications. A table is well defined
//! only when independent events commute from every state, with undefined
//! propagating on both sides; [`PartialActionSystem::validate`] checks
//! exactly that.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::trace::{EventAlphabet, EventId, IndependenceRelation, Word};

/// Index of a state, assigned in declaration order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, Deserialize)]
pub struct StateId(pub usize);

/// A single transition `from --event--> to`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Transition {
    pub from: StateId,
    pub event: EventId,
    pub to: StateId,
}

/// Witness that two independent events fail to commute from some state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommutationViolation {
    pub state: StateId,
    pub first: EventId,
    pub second: EventId,
    /// Result of applying `first` then `second`.
    pub first_then_second: Option<StateId>,
    /// Result of applying `second` then `first`.
    pub second_then_first: Option<StateId>,
}

/// A finite state set with one partial transition per (state, event) pair,
/// an independence relation on events, and an optional initial state.
#[derive(Clone, Debug)]
pub struct PartialActionSystem {
    alphabet: EventAlphabet,
    independence: IndependenceRelation,
    states: Vec<String>,
    /// Row-major (state-major) table; `None` means undefined.
    table: Vec<Option<StateId>>,
    initial: Option<StateId>,
}

impl PartialActionSystem {
    /// Assembles a system and checks structural invariants: distinct
    /// non-empty state names, in-range references, at most one transition
    /// per (state, event). Commutation is checked separately by
    /// [`validate`](Self::validate).
    pub fn from_parts(
        alphabet: EventAlphabet,
        independence: IndependenceRelation,
        states: Vec<String>,
        transitions: &[Transition],
        initial: Option<StateId>,
    ) -> Result<Self> {
        if independence.event_count() != alphabet.len() {
            return Err(Error::Input(format!(
                "independence relation is over {} events but the alphabet has {}",
                independence.event_count(),
                alphabet.len()
            )));
        }
        for (i, name) in states.iter().enumerate() {
            if name.is_empty() {
                return Err(Error::Input(format!("state #{i} has an empty name")));
            }
            if states[..i].contains(name) {
                return Err(Error::Input(format!("duplicate state name {name:?}")));
            }
        }
        let mut table = vec![None; states.len() * alphabet.len()];
        for t in transitions {
            for s in [t.from, t.to] {
                if s.0 >= states.len() {
                    return Err(Error::Input(format!(
                        "transition references state index {} outside 0..{}",
                        s.0,
                        states.len()
                    )));
                }
            }
            if t.event.0 >= alphabet.len() {
                return Err(Error::Input(format!(
                    "transition references event index {} outside 0..{}",
                    t.event.0,
                    alphabet.len()
                )));
            }
            let slot = &mut table[t.from.0 * alphabet.len() + t.event.0];
            if slot.is_some() {
                return Err(Error::Input(format!(
                    "duplicate transition from {:?} on event {:?}",
                    states[t.from.0],
                    alphabet.name(t.event)
                )));
            }
            *slot = Some(t.to);
        }
        if let Some(s0) = initial {
            if s0.0 >= states.len() {
                return Err(Error::Input(format!(
                    "initial state index {} outside 0..{}",
                    s0.0,
                    states.len()
                )));
            }
        }
        Ok(Self {
            alphabet,
            independence,
            states,
            table,
            initial,
        })
    }

    /// Parses the JSON input format:
    ///
    /// ```json
    /// {
    ///   "events": ["a", "b"],
    ///   "independence": [["a", "b"]],
    ///   "states": ["x", "y"],
    ///   "initial": "x",
    ///   "transitions": [{"from": "x", "event": "a", "to": "y"}]
    /// }
    /// ```
    ///
    /// All references are by name; unknown or duplicate names are reported
    /// with their location.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let file: ActionFile = serde_json::from_str(text)?;
        let alphabet = EventAlphabet::new(file.events)?;
        let mut pairs = Vec::with_capacity(file.independence.len());
        for (i, (a, b)) in file.independence.iter().enumerate() {
            let a = alphabet
                .id_of(a)
                .ok_or_else(|| Error::Input(format!("independence pair #{i}: unknown event {a:?}")))?;
            let b = alphabet
                .id_of(b)
                .ok_or_else(|| Error::Input(format!("independence pair #{i}: unknown event {b:?}")))?;
            pairs.push((a, b));
        }
        let independence = IndependenceRelation::new(alphabet.len(), pairs)?;

        let state_id = |name: &str, at: &str| -> Result<StateId> {
            file.states
                .iter()
                .position(|s| s == name)
                .map(StateId)
                .ok_or_else(|| Error::Input(format!("{at}: unknown state {name:?}")))
        };
        let mut transitions = Vec::with_capacity(file.transitions.len());
        for (i, t) in file.transitions.iter().enumerate() {
            let at = format!("transition #{i}");
            let from = state_id(&t.from, &at)?;
            let to = state_id(&t.to, &at)?;
            let event = alphabet
                .id_of(&t.event)
                .ok_or_else(|| Error::Input(format!("{at}: unknown event {:?}", t.event)))?;
            transitions.push(Transition { from, event, to });
        }
        let initial = match &file.initial {
            Some(name) => Some(state_id(name, "initial")?),
            None => None,
        };
        Self::from_parts(alphabet, independence, file.states, &transitions, initial)
    }

    pub fn alphabet(&self) -> &EventAlphabet {
        &self.alphabet
    }

    pub fn independence(&self) -> &IndependenceRelation {
        &self.independence
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn state_name(&self, x: StateId) -> &str {
        &self.states[x.0]
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn state_ids(&self) -> impl Iterator<Item = StateId> + '_ {
        (0..self.states.len()).map(StateId)
    }

    pub fn initial(&self) -> Option<StateId> {
        self.initial
    }

    /// All defined transitions, ordered by (state, event).
    pub fn transitions(&self) -> impl Iterator<Item = Transition> + '_ {
        let width = self.alphabet.len();
        self.table.iter().enumerate().filter_map(move |(i, to)| {
            to.map(|to| Transition {
                from: StateId(i / width),
                event: EventId(i % width),
                to,
            })
        })
    }

    /// Applies one event; `None` means the action is undefined there.
    /// Panics if an index is out of range.
    pub fn apply_event(&self, x: StateId, e: EventId) -> Option<StateId> {
        assert!(x.0 < self.states.len(), "state id {} out of range", x.0);
        assert!(e.0 < self.alphabet.len(), "event id {} out of range", e.0);
        self.table[x.0 * self.alphabet.len() + e.0]
    }

    /// Left-to-right fold of [`apply_event`](Self::apply_event); undefined
    /// absorbs the rest of the word.
    pub fn apply_word(&self, x: StateId, word: &Word) -> Option<StateId> {
        word.0
            .iter()
            .try_fold(x, |state, &e| self.apply_event(state, e))
    }

    /// Checks commutation for every state and independent pair: applying
    /// the pair in either order must agree, where both-undefined counts as
    /// agreement. Violations are returned as data, ordered by (state,
    /// first, second).
    pub fn validate(&self) -> Vec<CommutationViolation> {
        let mut violations = Vec::new();
        let pairs = self.independence.pairs();
        for x in self.state_ids() {
            for &(a, b) in &pairs {
                let ab = self.apply_event(x, a).and_then(|y| self.apply_event(y, b));
                let ba = self.apply_event(x, b).and_then(|y| self.apply_event(y, a));
                if ab != ba {
                    violations.push(CommutationViolation {
                        state: x,
                        first: a,
                        second: b,
                        first_then_second: ab,
                        second_then_first: ba,
                    });
                }
            }
        }
        violations
    }

    /// Renders a violation with state and event names.
    pub fn describe_violation(&self, v: &CommutationViolation) -> String {
        let opt = |s: Option<StateId>| match s {
            Some(s) => self.state_name(s).to_string(),
            None => "undefined".to_string(),
        };
        format!(
            "at state {}: {} then {} gives {}, but {} then {} gives {}",
            self.state_name(v.state),
            self.alphabet.name(v.first),
            self.alphabet.name(v.second),
            opt(v.first_then_second),
            self.alphabet.name(v.second),
            self.alphabet.name(v.first),
            opt(v.second_then_first),
        )
    }

    /// Breadth-first closure of `{start}` under single-event application.
    pub fn reachable_states(&self, start: StateId) -> BTreeSet<StateId> {
        assert!(start.0 < self.states.len(), "state id {} out of range", start.0);
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::new();
        seen.insert(start);
        queue.push_back(start);
        while let Some(x) = queue.pop_front() {
            for e in self.alphabet.ids() {
                if let Some(y) = self.apply_event(x, e) {
                    if seen.insert(y) {
                        queue.push_back(y);
                    }
                }
            }
        }
        seen
    }

    /// The scope of every state.
    pub fn all_states(&self) -> BTreeSet<StateId> {
        self.state_ids().collect()
    }

    /// Weakly connected components of the transition graph, each sorted,
    /// ordered by smallest member.
    pub fn connected_components(&self) -> Vec<Vec<StateId>> {
        self.connected_components_in(&self.all_states())
    }

    /// Weakly connected components of the transition graph restricted to
    /// `scope` (only edges with both endpoints inside).
    pub fn connected_components_in(&self, scope: &BTreeSet<StateId>) -> Vec<Vec<StateId>> {
        let mut undirected: Vec<BTreeSet<StateId>> = vec![BTreeSet::new(); self.states.len()];
        for t in self.transitions() {
            if scope.contains(&t.from) && scope.contains(&t.to) {
                undirected[t.from.0].insert(t.to);
                undirected[t.to.0].insert(t.from);
            }
        }
        let mut components = Vec::new();
        let mut visited = BTreeSet::new();
        for &start in scope {
            if !visited.insert(start) {
                continue;
            }
            let mut component = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(x) = queue.pop_front() {
                for &y in &undirected[x.0] {
                    if visited.insert(y) {
                        component.push(y);
                        queue.push_back(y);
                    }
                }
            }
            component.sort();
            components.push(component);
        }
        components
    }
}

impl fmt::Display for CommutationViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "state #{}: events #{} and #{} do not commute",
            self.state.0, self.first.0, self.second.0
        )
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ActionFile {
    events: Vec<String>,
    #[serde(default)]
    independence: Vec<(String, String)>,
    states: Vec<String>,
    #[serde(default)]
    initial: Option<String>,
    #[serde(default)]
    transitions: Vec<TransitionFile>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TransitionFile {
    from: String,
    event: String,
    to: String,
}

//! Condition/event nets and their compilation to partial action systems.
//!
//! A marking is a set of places. An event fires at a marking when its
//! preconditions all hold and none of its postconditions do; firing
//! removes the preconditions and adds the postconditions. Two events are
//! independent when they touch disjoint place sets, which makes the
//! induced partial action commute for independent pairs by construction.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use fixedbitset::FixedBitSet;
use serde::Deserialize;

use crate::action::{PartialActionSystem, StateId, Transition};
use crate::error::{Error, Result};
use crate::trace::{EventAlphabet, EventId, IndependenceRelation};

/// Index of a place, assigned in declaration order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PlaceId(pub usize);

/// A set of places, stored as a bitset of fixed width `|places|`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Marking(FixedBitSet);

impl Marking {
    pub fn empty(width: usize) -> Self {
        Marking(FixedBitSet::with_capacity(width))
    }

    pub fn from_places(width: usize, places: impl IntoIterator<Item = PlaceId>) -> Self {
        let mut bits = FixedBitSet::with_capacity(width);
        for p in places {
            assert!(p.0 < width, "place id {} out of range", p.0);
            bits.insert(p.0);
        }
        Marking(bits)
    }

    pub fn width(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, p: PlaceId) -> bool {
        self.0.contains(p.0)
    }

    pub fn places(&self) -> impl Iterator<Item = PlaceId> + '_ {
        self.0.ones().map(PlaceId)
    }

    fn is_superset_of(&self, other: &Marking) -> bool {
        other.0.is_subset(&self.0)
    }

    fn is_disjoint_from(&self, other: &Marking) -> bool {
        self.0.is_disjoint(&other.0)
    }
}

/// An event of the net with its precondition and postcondition place sets.
#[derive(Clone, Debug)]
pub struct NetEvent {
    pub name: String,
    pub pre: Marking,
    pub post: Marking,
}

impl NetEvent {
    /// Places the event reads or writes.
    fn neighborhood(&self) -> Marking {
        let mut bits = self.pre.0.clone();
        bits.union_with(&self.post.0);
        Marking(bits)
    }
}

/// A condition/event net: places, events with pre/post sets, and an
/// initial marking.
///
/// An event with overlapping pre and post sets is accepted as input; the
/// firing rule can never be satisfied for it, so it is permanently
/// disabled.
#[derive(Clone, Debug)]
pub struct CENet {
    places: Vec<String>,
    events: Vec<NetEvent>,
    initial: Marking,
}

/// Hard cap on `|places|` for exhaustive compilation over all markings.
pub const MAX_FULL_COMPILE_PLACES: usize = 20;

impl CENet {
    pub fn new(
        places: Vec<String>,
        events: Vec<(String, Vec<PlaceId>, Vec<PlaceId>)>,
        initial: Vec<PlaceId>,
    ) -> Result<Self> {
        for (i, name) in places.iter().enumerate() {
            if name.is_empty() {
                return Err(Error::Input(format!("place #{i} has an empty name")));
            }
            if places[..i].contains(name) {
                return Err(Error::Input(format!("duplicate place name {name:?}")));
            }
        }
        let width = places.len();
        let check = |ids: &[PlaceId], what: &str, event: &str| -> Result<()> {
            for p in ids {
                if p.0 >= width {
                    return Err(Error::Input(format!(
                        "event {event:?}: {what} references place index {} outside 0..{width}",
                        p.0
                    )));
                }
            }
            Ok(())
        };
        let mut net_events = Vec::with_capacity(events.len());
        for (i, (name, pre, post)) in events.into_iter().enumerate() {
            if name.is_empty() {
                return Err(Error::Input(format!("event #{i} has an empty name")));
            }
            if net_events.iter().any(|e: &NetEvent| e.name == name) {
                return Err(Error::Input(format!("duplicate event name {name:?}")));
            }
            check(&pre, "pre", &name)?;
            check(&post, "post", &name)?;
            net_events.push(NetEvent {
                name,
                pre: Marking::from_places(width, pre),
                post: Marking::from_places(width, post),
            });
        }
        check(&initial, "initial marking", "<net>")?;
        Ok(Self {
            places,
            events: net_events,
            initial: Marking::from_places(width, initial),
        })
    }

    /// Parses the JSON net format:
    ///
    /// ```json
    /// {
    ///   "places": ["p", "q"],
    ///   "events": [{"name": "a", "pre": [], "post": ["p"]}],
    ///   "initial": []
    /// }
    /// ```
    ///
    /// References are by place name; unknown or repeated names are
    /// reported with their location.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let file: NetFile = serde_json::from_str(text)?;
        let place_id = |name: &str, at: &str| -> Result<PlaceId> {
            file.places
                .iter()
                .position(|p| p == name)
                .map(PlaceId)
                .ok_or_else(|| Error::Input(format!("{at}: unknown place {name:?}")))
        };
        let resolve_set = |names: &[String], at: &str| -> Result<Vec<PlaceId>> {
            let mut out = Vec::with_capacity(names.len());
            for name in names {
                let id = place_id(name, at)?;
                if out.contains(&id) {
                    return Err(Error::Input(format!("{at}: place {name:?} listed twice")));
                }
                out.push(id);
            }
            Ok(out)
        };
        let mut events = Vec::with_capacity(file.events.len());
        for e in &file.events {
            let pre = resolve_set(&e.pre, &format!("event {:?} pre", e.name))?;
            let post = resolve_set(&e.post, &format!("event {:?} post", e.name))?;
            events.push((e.name.clone(), pre, post));
        }
        let initial = resolve_set(&file.initial, "initial marking")?;
        Self::new(file.places, events, initial)
    }

    pub fn place_count(&self) -> usize {
        self.places.len()
    }

    pub fn event_count(&self) -> usize {
        self.events.len()
    }

    pub fn events(&self) -> &[NetEvent] {
        &self.events
    }

    pub fn initial_marking(&self) -> &Marking {
        &self.initial
    }

    /// Renders a marking as an indicator tuple over places in declaration
    /// order, e.g. `(1,0,1)`.
    pub fn marking_name(&self, marking: &Marking) -> String {
        let cells: Vec<&str> = (0..self.places.len())
            .map(|i| if marking.contains(PlaceId(i)) { "1" } else { "0" })
            .collect();
        format!("({})", cells.join(","))
    }

    /// Two events are independent iff their pre/post neighborhoods are
    /// disjoint. Irreflexive by construction: (e, e) is never included,
    /// even for events with empty neighborhoods.
    pub fn derive_independence(&self) -> IndependenceRelation {
        let neighborhoods: Vec<Marking> =
            self.events.iter().map(NetEvent::neighborhood).collect();
        let mut pairs = Vec::new();
        for a in 0..self.events.len() {
            for b in a + 1..self.events.len() {
                if neighborhoods[a].is_disjoint_from(&neighborhoods[b]) {
                    pairs.push((EventId(a), EventId(b)));
                }
            }
        }
        IndependenceRelation::new(self.events.len(), pairs)
            .expect("derived pairs are in range and irreflexive")
    }

    /// True iff `pre(e) ⊆ s` and `post(e) ∩ s = ∅`.
    pub fn enabled(&self, marking: &Marking, e: EventId) -> bool {
        let event = &self.events[e.0];
        marking.is_superset_of(&event.pre) && marking.is_disjoint_from(&event.post)
    }

    /// Fires `e` when enabled: `(s \ pre(e)) ∪ post(e)`.
    pub fn fire(&self, marking: &Marking, e: EventId) -> Option<Marking> {
        if !self.enabled(marking, e) {
            return None;
        }
        let event = &self.events[e.0];
        let mut bits = marking.0.clone();
        bits.difference_with(&event.pre.0);
        bits.union_with(&event.post.0);
        Some(Marking(bits))
    }

    /// Compiles the net into a partial action system over the markings
    /// reachable from the initial marking (breadth-first discovery order,
    /// events tried in declaration order). The initial state is set.
    pub fn compile(&self) -> PartialActionSystem {
        let mut markings: Vec<Marking> = vec![self.initial.clone()];
        let mut ids: HashMap<Marking, StateId> = HashMap::new();
        ids.insert(self.initial.clone(), StateId(0));
        let mut queue = VecDeque::from([StateId(0)]);
        let mut transitions = Vec::new();
        while let Some(x) = queue.pop_front() {
            let current = markings[x.0].clone();
            for e in 0..self.events.len() {
                let Some(next) = self.fire(&current, EventId(e)) else {
                    continue;
                };
                let to = match ids.get(&next) {
                    Some(&to) => to,
                    None => {
                        let to = StateId(markings.len());
                        ids.insert(next.clone(), to);
                        markings.push(next);
                        queue.push_back(to);
                        to
                    }
                };
                transitions.push(Transition {
                    from: x,
                    event: EventId(e),
                    to,
                });
            }
        }
        self.assemble(markings, transitions, StateId(0))
    }

    /// Compiles over every subset of places (markings in indicator-tuple
    /// order, first place most significant). Fails when the place count
    /// exceeds [`MAX_FULL_COMPILE_PLACES`].
    pub fn compile_all_markings(&self) -> Result<PartialActionSystem> {
        let width = self.places.len();
        if width > MAX_FULL_COMPILE_PLACES {
            return Err(Error::CapExceeded {
                what: "place count for exhaustive marking enumeration".into(),
                limit: MAX_FULL_COMPILE_PLACES,
                actual: width,
            });
        }
        let total = 1usize << width;
        let marking_of = |index: usize| {
            Marking::from_places(
                width,
                (0..width).filter(|i| index >> (width - 1 - i) & 1 == 1).map(PlaceId),
            )
        };
        let index_of = |m: &Marking| -> usize {
            (0..width).fold(0, |acc, i| {
                acc << 1 | usize::from(m.contains(PlaceId(i)))
            })
        };

        let mut markings = Vec::with_capacity(total);
        let mut transitions = Vec::new();
        for index in 0..total {
            let marking = marking_of(index);
            for e in 0..self.events.len() {
                if let Some(next) = self.fire(&marking, EventId(e)) {
                    transitions.push(Transition {
                        from: StateId(index),
                        event: EventId(e),
                        to: StateId(index_of(&next)),
                    });
                }
            }
            markings.push(marking);
        }
        let initial = StateId(index_of(&self.initial));
        Ok(self.assemble(markings, transitions, initial))
    }

    fn assemble(
        &self,
        markings: Vec<Marking>,
        transitions: Vec<Transition>,
        initial: StateId,
    ) -> PartialActionSystem {
        let alphabet = EventAlphabet::new(self.events.iter().map(|e| e.name.clone()).collect())
            .expect("event names were validated at net construction");
        let names = markings.iter().map(|m| self.marking_name(m)).collect();
        let sys = PartialActionSystem::from_parts(
            alphabet,
            self.derive_independence(),
            names,
            &transitions,
            Some(initial),
        )
        .expect("compiled tables are structurally valid by construction");
        debug_assert!(
            sys.validate().is_empty(),
            "independent events touch disjoint places, so firing must commute"
        );
        sys
    }
}

impl fmt::Display for Marking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = (0..self.width())
            .map(|i| usize::from(self.0.contains(i)).to_string())
            .collect();
        write!(f, "({})", cells.join(","))
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NetFile {
    places: Vec<String>,
    events: Vec<NetEventFile>,
    #[serde(default)]
    initial: Vec<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NetEventFile {
    name: String,
    #[serde(default)]
    pre: Vec<String>,
    #[serde(default)]
    post: Vec<String>,
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Four events threading a token through three buffer places:
    /// a feeds p, b moves p to q, c moves q to r, d drains r.
    pub(crate) fn pipeline_net() -> CENet {
        CENet::new(
            vec!["p".into(), "q".into(), "r".into()],
            vec![
                ("a".into(), vec![], vec![PlaceId(0)]),
                ("b".into(), vec![PlaceId(0)], vec![PlaceId(1)]),
                ("c".into(), vec![PlaceId(1)], vec![PlaceId(2)]),
                ("d".into(), vec![PlaceId(2)], vec![]),
            ],
            vec![],
        )
        .unwrap()
    }

    fn marking(net: &CENet, places: &[usize]) -> Marking {
        Marking::from_places(net.place_count(), places.iter().map(|&i| PlaceId(i)))
    }

    #[test]
    fn independence_pairs_of_the_pipeline() {
        let net = pipeline_net();
        let rel = net.derive_independence();
        assert_eq!(
            rel.pairs(),
            vec![
                (EventId(0), EventId(2)),
                (EventId(0), EventId(3)),
                (EventId(1), EventId(3)),
            ]
        );
    }

    #[test]
    fn shared_place_blocks_independence() {
        let net = CENet::new(
            vec!["p".into()],
            vec![
                ("a".into(), vec![], vec![PlaceId(0)]),
                ("b".into(), vec![PlaceId(0)], vec![]),
            ],
            vec![],
        )
        .unwrap();
        assert!(net.derive_independence().pairs().is_empty());
    }

    #[test]
    fn empty_neighborhood_events_are_independent_of_everything() {
        let net = CENet::new(
            vec!["p".into()],
            vec![
                ("noop1".into(), vec![], vec![]),
                ("noop2".into(), vec![], vec![]),
                ("use_p".into(), vec![PlaceId(0)], vec![]),
            ],
            vec![],
        )
        .unwrap();
        let rel = net.derive_independence();
        assert!(rel.is_independent(EventId(0), EventId(1)));
        assert!(rel.is_independent(EventId(0), EventId(2)));
        assert!(!rel.is_independent(EventId(0), EventId(0)));
    }

    #[test]
    fn enabling_follows_the_firing_rule() {
        let net = pipeline_net();
        let empty = marking(&net, &[]);
        assert!(net.enabled(&empty, EventId(0)));
        // a's postcondition p already holds at {p}.
        assert!(!net.enabled(&marking(&net, &[0]), EventId(0)));
    }

    #[test]
    fn contradictory_event_is_never_enabled() {
        let net = CENet::new(
            vec!["p".into(), "q".into()],
            vec![("e".into(), vec![PlaceId(0)], vec![PlaceId(0)])],
            vec![],
        )
        .unwrap();
        let all = [
            marking(&net, &[]),
            marking(&net, &[0]),
            marking(&net, &[1]),
            marking(&net, &[0, 1]),
        ];
        for m in &all {
            assert!(!net.enabled(m, EventId(0)));
            assert_eq!(net.fire(m, EventId(0)), None);
        }
    }

    #[test]
    fn firing_moves_tokens() {
        let net = pipeline_net();
        assert_eq!(
            net.fire(&marking(&net, &[0]), EventId(1)),
            Some(marking(&net, &[1]))
        );
        assert_eq!(net.fire(&marking(&net, &[]), EventId(1)), None);
        assert_eq!(
            net.fire(&marking(&net, &[0, 2]), EventId(3)),
            Some(marking(&net, &[0]))
        );
    }

    #[test]
    fn pipeline_compiles_to_eight_markings_and_twelve_edges() {
        let net = pipeline_net();
        let sys = net.compile();
        assert_eq!(sys.state_count(), 8);
        assert_eq!(sys.transitions().count(), 12);
        assert_eq!(sys.initial(), Some(StateId(0)));
        assert_eq!(sys.state_name(StateId(0)), "(0,0,0)");
        assert!(sys.validate().is_empty());
        // Every marking is reachable.
        assert_eq!(sys.reachable_states(StateId(0)).len(), 8);
    }

    #[test]
    fn stuck_net_compiles_to_a_single_state() {
        let net = CENet::new(
            vec!["p".into(), "q".into()],
            vec![("b".into(), vec![PlaceId(0)], vec![PlaceId(1)])],
            vec![],
        )
        .unwrap();
        let sys = net.compile();
        assert_eq!(sys.state_count(), 1);
        assert_eq!(sys.transitions().count(), 0);
    }

    #[test]
    fn full_compilation_enumerates_all_markings_in_tuple_order() {
        let net = pipeline_net();
        let sys = net.compile_all_markings().unwrap();
        assert_eq!(sys.state_count(), 8);
        assert_eq!(sys.state_name(StateId(0)), "(0,0,0)");
        assert_eq!(sys.state_name(StateId(1)), "(0,0,1)");
        assert_eq!(sys.state_name(StateId(4)), "(1,0,0)");
        assert_eq!(sys.transitions().count(), 12);
        assert!(sys.validate().is_empty());
    }

    #[test]
    fn full_compilation_is_capped() {
        let places: Vec<String> = (0..21).map(|i| format!("p{i}")).collect();
        let net = CENet::new(places, vec![("e".into(), vec![], vec![PlaceId(0)])], vec![]).unwrap();
        assert!(matches!(
            net.compile_all_markings(),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn json_parsing_reports_unknown_places() {
        let net = CENet::from_json_str(
            r#"{
                "places": ["p"],
                "events": [{"name": "a", "pre": [], "post": ["p"]}],
                "initial": []
            }"#,
        )
        .unwrap();
        assert_eq!(net.place_count(), 1);

        let err = CENet::from_json_str(
            r#"{"places": ["p"],
                "events": [{"name": "a", "pre": ["zz"], "post": []}],
                "initial": []}"#,
        )
        .unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("zz") && msg.contains('a'), "{msg}");
    }
}

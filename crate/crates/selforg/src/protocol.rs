//! The posting protocol: which posts count as statements of interest.
//!
//! An initiation counts once someone else follows it up. A follow-up counts
//! once it is acknowledged, either by the initiator of the thread or by the
//! author of the post it replied to (the sub-thread rule).

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Result, SelforgError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EventKind {
    Initiate,
    Followup,
    Ack,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PostingEvent {
    /// Arrival index, unique within a ledger.
    pub t: u64,
    pub subscriber: String,
    pub thread: String,
    pub kind: EventKind,
    #[serde(default)]
    pub parent: Option<u64>,
}

impl PostingEvent {
    pub fn new(t: u64, subscriber: &str, thread: &str, kind: EventKind, parent: Option<u64>) -> Self {
        PostingEvent { t, subscriber: subscriber.into(), thread: thread.into(), kind, parent }
    }
}

/// Why an event did not count.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Violation {
    NeverFollowedUp,
    NotAcknowledged,
    /// The acknowledger was neither the thread's initiator nor the author of
    /// the post being answered.
    AckNotPermitted,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Contribution {
    pub t: u64,
    pub subscriber: String,
    pub thread: String,
    /// The top-level thread the post belongs to.
    pub root: String,
    /// The follow-up or acknowledgement that made this post count.
    pub evidence: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThreadLedger {
    pub events: Vec<PostingEvent>,
    pub counted: Vec<Contribution>,
    pub flags: Vec<(u64, Violation)>,
    /// Every thread id seen, with its top-level thread.
    pub roots: BTreeMap<String, String>,
}

impl ThreadLedger {
    pub fn subscribers(&self) -> Vec<String> {
        let mut s: Vec<String> = self.events.iter().map(|e| e.subscriber.clone()).collect();
        s.sort();
        s.dedup();
        s
    }

    pub fn event(&self, t: u64) -> Option<&PostingEvent> {
        self.events.iter().find(|e| e.t == t)
    }

    pub fn contributions_of<'a>(&'a self, subscriber: &'a str) -> impl Iterator<Item = &'a Contribution> + 'a {
        self.counted.iter().filter(move |c| c.subscriber == subscriber)
    }

    pub fn flag_of(&self, t: u64) -> Option<Violation> {
        self.flags.iter().find(|(e, _)| *e == t).map(|(_, v)| *v)
    }
}

pub fn validate_protocol(events: &[PostingEvent]) -> Result<ThreadLedger> {
    let mut by_t: HashMap<u64, usize> = HashMap::new();
    let mut roots: BTreeMap<String, String> = BTreeMap::new();
    // initiator of each top-level thread
    let mut initiators: HashMap<String, String> = HashMap::new();
    for (i, e) in events.iter().enumerate() {
        let parent = match (e.kind, e.parent) {
            (EventKind::Initiate, Some(_)) => return Err(SelforgError::UnexpectedParent(e.t)),
            (EventKind::Initiate, None) => None,
            (_, None) => return Err(SelforgError::MissingParent(e.t)),
            (_, Some(p)) => {
                let &pi = by_t.get(&p).ok_or(SelforgError::UnknownParent { event: e.t, parent: p })?;
                Some(&events[pi])
            }
        };
        match (e.kind, parent) {
            (EventKind::Initiate, _) => {
                let root = roots.entry(e.thread.clone()).or_insert_with(|| e.thread.clone()).clone();
                initiators.entry(root).or_insert_with(|| e.subscriber.clone());
            }
            (EventKind::Followup, Some(p)) => {
                if p.kind == EventKind::Ack {
                    return Err(SelforgError::InvalidParent { event: e.t, parent: p.t });
                }
                if p.subscriber == e.subscriber {
                    return Err(SelforgError::SelfFollowup { event: e.t, subscriber: e.subscriber.clone() });
                }
                let root = roots[&p.thread].clone();
                roots.entry(e.thread.clone()).or_insert(root);
            }
            (EventKind::Ack, Some(p)) => {
                if p.kind != EventKind::Followup {
                    return Err(SelforgError::InvalidParent { event: e.t, parent: p.t });
                }
            }
            _ => unreachable!("parent presence checked above"),
        }
        if by_t.insert(e.t, i).is_some() {
            return Err(SelforgError::DuplicateEvent(e.t));
        }
    }

    let parent_of = |e: &PostingEvent| e.parent.map(|p| &events[by_t[&p]]);
    let mut followed: HashMap<u64, u64> = HashMap::new();
    let mut acked: HashMap<u64, u64> = HashMap::new();
    let mut flags = Vec::new();
    for e in events {
        match e.kind {
            EventKind::Followup => {
                followed.entry(e.parent.expect("checked")).or_insert(e.t);
            }
            EventKind::Ack => {
                let f = parent_of(e).expect("checked");
                let answered = parent_of(f).expect("follow-ups have parents");
                let initiator = &initiators[&roots[&f.thread]];
                let permitted = e.subscriber != f.subscriber
                    && (&e.subscriber == initiator || e.subscriber == answered.subscriber);
                if permitted {
                    acked.entry(f.t).or_insert(e.t);
                } else {
                    flags.push((e.t, Violation::AckNotPermitted));
                }
            }
            EventKind::Initiate => {}
        }
    }
    let mut counted = Vec::new();
    for e in events {
        let evidence = match e.kind {
            EventKind::Initiate => followed.get(&e.t).copied().ok_or(Violation::NeverFollowedUp),
            EventKind::Followup => acked.get(&e.t).copied().ok_or(Violation::NotAcknowledged),
            EventKind::Ack => continue,
        };
        match evidence {
            Ok(evidence) => counted.push(Contribution {
                t: e.t,
                subscriber: e.subscriber.clone(),
                thread: e.thread.clone(),
                root: roots[&e.thread].clone(),
                evidence,
            }),
            Err(v) => flags.push((e.t, v)),
        }
    }
    flags.sort_by_key(|(t, _)| *t);
    Ok(ThreadLedger { events: events.to_vec(), counted, flags, roots })
}

/// Reads `t,subscriber,thread,kind,parent` rows; `parent` may be empty.
pub fn parse_events_csv(text: &str) -> Result<Vec<PostingEvent>> {
    let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    r.deserialize().map(|row| row.map_err(SelforgError::from)).collect()
}

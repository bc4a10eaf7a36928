use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventKind {
    TaskRelease { task: usize },
    TransmissionDone { task: usize },
    ExecStart { task: usize },
    ExecDone { task: usize },
    MobilityTick { tick: u32 },
    MigrationOccurred { task: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Event {
    pub time_s: f64,
    /// Insertion counter; breaks ties between equal times.
    pub seq: u64,
    pub kind: EventKind,
}

impl Eq for Event {}

impl Ord for Event {
    fn cmp(&self, other: &Self) -> Ordering {
        self.time_s.total_cmp(&other.time_s).then(self.seq.cmp(&other.seq))
    }
}

impl PartialOrd for Event {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Min-queue of events ordered by `(time, seq)` that refuses to schedule
/// anything before the last popped event.
#[derive(Debug, Default)]
pub struct EventQueue {
    heap: BinaryHeap<Reverse<Event>>,
    next_seq: u64,
    now_s: f64,
}

impl EventQueue {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn now_s(&self) -> f64 {
        self.now_s
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }

    pub fn push(&mut self, time_s: f64, kind: EventKind) -> Result<()> {
        if !(time_s >= self.now_s) {
            return Err(Error::Simulation(format!(
                "causality: {kind:?} scheduled at {time_s} s, clock is at {} s",
                self.now_s
            )));
        }
        self.heap.push(Reverse(Event {
            time_s,
            seq: self.next_seq,
            kind,
        }));
        self.next_seq += 1;
        Ok(())
    }

    pub fn pop(&mut self) -> Option<Event> {
        let Reverse(ev) = self.heap.pop()?;
        debug_assert!(ev.time_s >= self.now_s);
        self.now_s = ev.time_s;
        Some(ev)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn equal_times_pop_in_insertion_order() {
        let mut q = EventQueue::new();
        q.push(1.0, EventKind::MobilityTick { tick: 1 }).unwrap();
        q.push(1.0, EventKind::TaskRelease { task: 0 }).unwrap();
        q.push(0.5, EventKind::ExecDone { task: 3 }).unwrap();
        let kinds: Vec<EventKind> = std::iter::from_fn(|| q.pop()).map(|e| e.kind).collect();
        assert_eq!(
            kinds,
            vec![
                EventKind::ExecDone { task: 3 },
                EventKind::MobilityTick { tick: 1 },
                EventKind::TaskRelease { task: 0 }
            ]
        );
    }

    #[test]
    fn past_events_are_rejected() {
        let mut q = EventQueue::new();
        q.push(2.0, EventKind::MobilityTick { tick: 2 }).unwrap();
        q.pop();
        assert!(q.push(1.0, EventKind::ExecDone { task: 0 }).is_err());
        assert!(q.push(f64::NAN, EventKind::ExecDone { task: 0 }).is_err());
        assert!(q.push(2.0, EventKind::ExecDone { task: 0 }).is_ok());
    }

    proptest! {
        #[test]
        fn pops_are_totally_ordered(times in prop::collection::vec(0.0f64..100.0, 1..200)) {
            let mut q = EventQueue::new();
            for (i, t) in times.iter().enumerate() {
                q.push(*t, EventKind::ExecDone { task: i }).unwrap();
            }
            let mut last: Option<Event> = None;
            while let Some(e) = q.pop() {
                if let Some(prev) = last {
                    prop_assert!(prev < e);
                }
                last = Some(e);
            }
        }
    }
}

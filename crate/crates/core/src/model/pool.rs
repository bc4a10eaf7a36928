use crate::error::{Error, Result};

/// Slice of a fog node's capacity held by one task over `[start_s, end_s)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reservation {
    pub start_s: f64,
    pub end_s: f64,
    pub alloc_hz: f64,
}

/// Capacity pool of a fog node with FIFO admission.
///
/// A request is admitted once its allocation fits in the free capacity and
/// every earlier request has been admitted. Execution times are known at
/// admission, so the admission instant of a new request can be computed
/// right away: all existing reservations start no later than the most
/// recent admission, hence usage only decreases after that point.
#[derive(Debug, Clone, PartialEq)]
pub struct FogPool {
    capacity_hz: f64,
    reservations: Vec<Reservation>,
    last_admission_s: f64,
}

const SLACK: f64 = 1e-9;

impl FogPool {
    pub fn new(capacity_hz: f64) -> Self {
        Self {
            capacity_hz,
            reservations: Vec::new(),
            last_admission_s: f64::NEG_INFINITY,
        }
    }

    pub fn capacity_hz(&self) -> f64 {
        self.capacity_hz
    }

    pub fn reservations(&self) -> &[Reservation] {
        &self.reservations
    }

    /// Allocated frequency in use at instant `t`.
    pub fn usage_at(&self, t: f64) -> f64 {
        self.reservations
            .iter()
            .filter(|r| r.start_s <= t && t < r.end_s)
            .map(|r| r.alloc_hz)
            .sum()
    }

    fn fits(&self, t: f64, alloc_hz: f64) -> bool {
        self.usage_at(t) + alloc_hz <= self.capacity_hz * (1.0 + SLACK)
    }

    /// Instant at which a request arriving at `now_s` would be admitted.
    pub fn admission_time(&self, now_s: f64, alloc_hz: f64) -> Result<f64> {
        if !(alloc_hz > 0.0) || alloc_hz > self.capacity_hz * (1.0 + SLACK) {
            return Err(Error::OverCapacity {
                alloc_hz,
                capacity_hz: self.capacity_hz,
            });
        }
        let earliest = now_s.max(self.last_admission_s);
        if self.fits(earliest, alloc_hz) {
            return Ok(earliest);
        }
        let mut ends: Vec<f64> = self
            .reservations
            .iter()
            .map(|r| r.end_s)
            .filter(|&e| e > earliest)
            .collect();
        ends.sort_by(f64::total_cmp);
        ends.into_iter()
            .find(|&t| self.fits(t, alloc_hz))
            .ok_or(Error::OverCapacity {
                alloc_hz,
                capacity_hz: self.capacity_hz,
            })
    }

    /// Queue wait a request arriving at `now_s` would see.
    pub fn estimate_wait(&self, now_s: f64, alloc_hz: f64) -> Result<f64> {
        Ok(self.admission_time(now_s, alloc_hz)? - now_s)
    }

    /// Admits (or queues) a request holding `alloc_hz` for `duration_s` once
    /// started. Returns the queue wait.
    pub fn admit_or_queue(&mut self, now_s: f64, alloc_hz: f64, duration_s: f64) -> Result<f64> {
        let start = self.admission_time(now_s, alloc_hz)?;
        self.reservations.push(Reservation {
            start_s: start,
            end_s: start + duration_s,
            alloc_hz,
        });
        self.last_admission_s = start;
        Ok(start - now_s)
    }

    /// Drops reservations that finished at or before `now_s`.
    pub fn release_finished(&mut self, now_s: f64) {
        self.reservations.retain(|r| r.end_s > now_s);
    }

    /// Checks that usage never exceeds capacity, at every reservation start.
    pub fn audit(&self) -> bool {
        self.reservations
            .iter()
            .all(|r| self.usage_at(r.start_s) <= self.capacity_hz * (1.0 + SLACK))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Replays requests in a tiny discrete-event loop: time advances only
    /// to request arrivals and reservation ends, and the queue head is
    /// admitted whenever it fits.
    fn replay_oracle(capacity: f64, held: &[(f64, f64)], requests: &[(f64, f64, f64)]) -> Vec<f64> {
        let mut running: Vec<(f64, f64)> = held.to_vec(); // (end, alloc)
        let mut queue: std::collections::VecDeque<usize> = Default::default();
        let mut admitted = vec![f64::NAN; requests.len()];
        let mut times: Vec<f64> = requests.iter().map(|r| r.0).collect();
        times.extend(held.iter().map(|h| h.0));
        let mut next_req = 0;
        let mut t = 0.0;
        loop {
            running.retain(|&(end, _)| end > t);
            while next_req < requests.len() && requests[next_req].0 <= t {
                queue.push_back(next_req);
                next_req += 1;
            }
            while let Some(&head) = queue.front() {
                let used: f64 = running.iter().map(|r| r.1).sum();
                let (_, alloc, dur) = requests[head];
                if used + alloc <= capacity {
                    running.push((t + dur, alloc));
                    admitted[head] = t;
                    queue.pop_front();
                } else {
                    break;
                }
            }
            if next_req == requests.len() && queue.is_empty() {
                return admitted;
            }
            let next_arrival = requests.get(next_req).map_or(f64::INFINITY, |r| r.0);
            let next_end = running
                .iter()
                .map(|r| r.0)
                .filter(|&e| e > t)
                .fold(f64::INFINITY, f64::min);
            t = next_arrival.min(next_end);
        }
    }

    #[test]
    fn waits_for_release() {
        let mut pool = FogPool::new(5e9);
        pool.admit_or_queue(0.0, 4e9, 10.0).unwrap();
        let wait = pool.admit_or_queue(4.0, 2e9, 3.0).unwrap();
        assert_eq!(wait, 6.0);
        let oracle = replay_oracle(5e9, &[(10.0, 4e9)], &[(4.0, 2e9, 3.0)]);
        assert_eq!(oracle, vec![10.0]);
    }

    #[test]
    fn empty_pool_admits_immediately() {
        let mut pool = FogPool::new(5e9);
        assert_eq!(pool.admit_or_queue(3.0, 5e9, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn queued_requests_are_fifo() {
        let mut pool = FogPool::new(5e9);
        pool.admit_or_queue(0.0, 4e9, 10.0).unwrap();
        // needs 2 GHz: waits for the release at t=10
        assert_eq!(pool.admit_or_queue(1.0, 2e9, 5.0).unwrap(), 9.0);
        // 1 GHz would fit right now, but may not overtake the queued request
        assert_eq!(pool.admit_or_queue(2.0, 1e9, 5.0).unwrap(), 8.0);
        assert!(pool.audit());
    }

    #[test]
    fn rejects_request_above_capacity() {
        let mut pool = FogPool::new(5e9);
        assert!(matches!(
            pool.admit_or_queue(0.0, 6e9, 1.0),
            Err(Error::OverCapacity { .. })
        ));
    }

    #[test]
    fn matches_replay_oracle_on_random_streams() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let n = rng.random_range(1..12);
            let mut t = 0.0;
            let requests: Vec<(f64, f64, f64)> = (0..n)
                .map(|_| {
                    t += rng.random_range(0.0..3.0f64).floor();
                    (t, rng.random_range(1..=5) as f64 * 1e9, rng.random_range(1..8) as f64)
                })
                .collect();
            let mut pool = FogPool::new(5e9);
            let got: Vec<f64> = requests
                .iter()
                .map(|&(at, alloc, dur)| at + pool.admit_or_queue(at, alloc, dur).unwrap())
                .collect();
            assert_eq!(got, replay_oracle(5e9, &[], &requests), "{requests:?}");
            assert!(pool.audit());
        }
    }
}

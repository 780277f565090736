//! Bounded FIFO queue with occupancy statistics.

use std::collections::VecDeque;

use crate::Minutes;

/// "Unbounded" queues are realised as this finite capacity.
pub const UNBOUNDED_CAPACITY: usize = 1_000_000;

/// FIFO queue that refuses entries beyond its capacity and tracks the
/// observed maximum and time-weighted mean length.
#[derive(Debug, Clone)]
pub struct BoundedQueue<T> {
    capacity: usize,
    items: VecDeque<T>,
    max_len: usize,
    area: f64,
    last_change: Minutes,
}

impl<T> BoundedQueue<T> {
    pub fn new(capacity: usize) -> Self {
        Self {
            capacity,
            items: VecDeque::new(),
            max_len: 0,
            area: 0.0,
            last_change: 0.0,
        }
    }

    pub fn unbounded() -> Self {
        Self::new(UNBOUNDED_CAPACITY)
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.items.len() >= self.capacity
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    fn integrate(&mut self, now: Minutes) {
        self.area += self.items.len() as f64 * (now - self.last_change);
        self.last_change = now;
    }

    /// Enqueue, or give the item back if the queue is at capacity.
    pub fn try_enqueue(&mut self, item: T, now: Minutes) -> Result<(), T> {
        if self.is_full() {
            return Err(item);
        }
        self.integrate(now);
        self.items.push_back(item);
        self.max_len = self.max_len.max(self.items.len());
        assert!(self.items.len() <= self.capacity, "queue exceeded capacity");
        Ok(())
    }

    pub fn dequeue(&mut self, now: Minutes) -> Option<T> {
        self.integrate(now);
        self.items.pop_front()
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    /// Time-weighted mean length over [0, now].
    pub fn mean_len(&self, now: Minutes) -> f64 {
        if now <= 0.0 {
            return 0.0;
        }
        (self.area + self.items.len() as f64 * (now - self.last_change)) / now
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rejects_beyond_capacity() {
        let mut q = BoundedQueue::new(2);
        assert!(q.try_enqueue(1, 0.0).is_ok());
        assert!(q.try_enqueue(2, 1.0).is_ok());
        assert_eq!(q.try_enqueue(3, 2.0), Err(3));
        assert_eq!(q.dequeue(3.0), Some(1));
        assert!(q.try_enqueue(3, 4.0).is_ok());
        assert_eq!(q.max_len(), 2);
    }

    #[test]
    fn time_weighted_mean() {
        let mut q = BoundedQueue::new(10);
        q.try_enqueue('a', 0.0).unwrap();
        q.try_enqueue('b', 5.0).unwrap();
        q.dequeue(10.0);
        // len 1 on [0,5), 2 on [5,10), 1 on [10,20) -> area 25 over 20
        assert!((q.mean_len(20.0) - 1.25).abs() < 1e-12);
    }

    #[test]
    fn capacity_zero_rejects_everything() {
        let mut q = BoundedQueue::new(0);
        assert_eq!(q.try_enqueue((), 0.0), Err(()));
    }

    proptest! {
        #[test]
        fn length_never_exceeds_capacity(cap in 0usize..8, ops in prop::collection::vec(any::<bool>(), 0..200)) {
            let mut q = BoundedQueue::new(cap);
            let mut now = 0.0;
            for op in ops {
                now += 1.0;
                if op {
                    let _ = q.try_enqueue(0u8, now);
                } else {
                    let _ = q.dequeue(now);
                }
                prop_assert!(q.len() <= cap);
            }
        }
    }
}

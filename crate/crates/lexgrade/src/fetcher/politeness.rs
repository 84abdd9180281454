//! Request pacing: bounded concurrency and a minimum gap between starts.

use std::sync::{Condvar, Mutex, MutexGuard};
use std::time::{Duration, Instant};

#[derive(Debug, Default)]
struct State {
    in_flight: usize,
    last_start: Option<Instant>,
}

#[derive(Debug)]
pub struct Gate {
    concurrency: usize,
    delay: Duration,
    state: Mutex<State>,
    changed: Condvar,
}

/// Held for the duration of one request.
#[derive(Debug)]
pub struct Permit<'a> {
    gate: &'a Gate,
}

impl Gate {
    pub fn new(concurrency: usize, delay: Duration) -> Self {
        Self {
            concurrency: concurrency.max(1),
            delay,
            state: Mutex::new(State::default()),
            changed: Condvar::new(),
        }
    }

    fn lock(&self) -> MutexGuard<'_, State> {
        self.state.lock().unwrap_or_else(|e| e.into_inner())
    }

    /// Blocks until a slot is free and `delay` has elapsed since the previous
    /// start.
    pub fn acquire(&self) -> Permit<'_> {
        let mut state = self.lock();
        loop {
            if state.in_flight < self.concurrency {
                let now = Instant::now();
                let ready = state.last_start.map_or(now, |t| t + self.delay);
                if now >= ready {
                    state.in_flight += 1;
                    state.last_start = Some(now);
                    return Permit { gate: self };
                }
                state = self
                    .changed
                    .wait_timeout(state, ready - now)
                    .unwrap_or_else(|e| e.into_inner())
                    .0;
            } else {
                state = self.changed.wait(state).unwrap_or_else(|e| e.into_inner());
            }
        }
    }
}

impl Drop for Permit<'_> {
    fn drop(&mut self) {
        self.gate.lock().in_flight -= 1;
        self.gate.changed.notify_all();
    }
}

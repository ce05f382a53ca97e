//! A bounded single-producer single-consumer channel with blocking,
//! suspension-based send and receive.
//!
//! Built from one mutex-guarded ring buffer and two condition variables:
//! `not_empty` wakes a parked receiver, `not_full` wakes a parked sender.
//! Threads suspend instead of spinning while they wait, so a stalled
//! neighbor costs no CPU. Single-producer single-consumer is enforced at
//! compile time: endpoints can move to another thread ([`Send`]) but cannot
//! be shared or cloned, so exactly one thread can ever touch each side.

use std::cell::Cell;
use std::collections::VecDeque;
use std::fmt;
use std::marker::PhantomData;
use std::sync::{Arc, Condvar, Mutex};

use thiserror::Error;

/// Smallest capacity the exchange protocol is deadlock-free at: each endpoint
/// must absorb one message per direction per step without blocking the
/// sender.
pub const MIN_CAPACITY: usize = 2;

struct State<T> {
    buffer: VecDeque<T>,
    producer_alive: bool,
    consumer_alive: bool,
    /// Messages accepted by `send` over the channel's lifetime.
    sent: u64,
}

struct Shared<T> {
    state: Mutex<State<T>>,
    not_empty: Condvar,
    not_full: Condvar,
    capacity: usize,
}

/// The producing endpoint. `Send` but neither `Sync` nor `Clone`, so exactly
/// one thread can ever hold it:
///
/// ```compile_fail
/// fn shareable<T: Sync>(_: &T) {}
/// let (tx, _rx) = heatring::exchange::channel::<f64>(2).unwrap();
/// shareable(&tx);
/// ```
pub struct Sender<T> {
    shared: Arc<Shared<T>>,
    // Cell<()> is Send but !Sync, which makes the endpoint movable to one
    // thread while never shareable across threads.
    _not_sync: PhantomData<Cell<()>>,
}

/// The consuming endpoint. `Send` but neither `Sync` nor `Clone`:
///
/// ```compile_fail
/// fn shareable<T: Sync>(_: &T) {}
/// let (_tx, rx) = heatring::exchange::channel::<f64>(2).unwrap();
/// shareable(&rx);
/// ```
pub struct Receiver<T> {
    shared: Arc<Shared<T>>,
    _not_sync: PhantomData<Cell<()>>,
}

/// A read-only observer of one channel's counters. Freely shareable; used to
/// audit how many messages a run actually moved.
#[derive(Clone)]
pub struct ChannelProbe<T> {
    shared: Arc<Shared<T>>,
}

/// Creates a channel holding at most `capacity` in-flight messages.
pub fn channel<T>(capacity: usize) -> Result<(Sender<T>, Receiver<T>), CapacityError> {
    if capacity < MIN_CAPACITY {
        return Err(CapacityError { requested: capacity });
    }
    let shared = Arc::new(Shared {
        state: Mutex::new(State {
            buffer: VecDeque::with_capacity(capacity),
            producer_alive: true,
            consumer_alive: true,
            sent: 0,
        }),
        not_empty: Condvar::new(),
        not_full: Condvar::new(),
        capacity,
    });
    Ok((
        Sender {
            shared: Arc::clone(&shared),
            _not_sync: PhantomData,
        },
        Receiver {
            shared,
            _not_sync: PhantomData,
        },
    ))
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("channel capacity must be at least {MIN_CAPACITY}, got {requested}")]
pub struct CapacityError {
    pub requested: usize,
}

/// `send` failed because the receiver is gone; gives the message back.
pub struct SendError<T>(pub T);

impl<T> fmt::Debug for SendError<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("SendError(..)")
    }
}

impl<T> fmt::Display for SendError<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("sending on a channel whose receiver is gone")
    }
}

impl<T> std::error::Error for SendError<T> {}

/// `recv` failed because the sender is gone and the buffer is drained.
#[derive(Debug, Error, PartialEq, Eq)]
#[error("receiving on a channel whose sender is gone")]
pub struct RecvError;

impl<T> Sender<T> {
    /// Blocks while the buffer is full. Fails only if the receiver has been
    /// dropped.
    pub fn send(&self, value: T) -> Result<(), SendError<T>> {
        let mut state = self.shared.state.lock().unwrap();
        loop {
            if !state.consumer_alive {
                return Err(SendError(value));
            }
            if state.buffer.len() < self.shared.capacity {
                state.buffer.push_back(value);
                state.sent += 1;
                self.shared.not_empty.notify_one();
                return Ok(());
            }
            state = self.shared.not_full.wait(state).unwrap();
        }
    }

    /// A probe observing this channel's counters.
    pub fn probe(&self) -> ChannelProbe<T> {
        ChannelProbe {
            shared: Arc::clone(&self.shared),
        }
    }
}

impl<T> Receiver<T> {
    /// Blocks while the buffer is empty. Fails only once the sender has been
    /// dropped and every buffered message has been drained, so no message is
    /// ever lost to a disconnect.
    pub fn recv(&self) -> Result<T, RecvError> {
        let mut state = self.shared.state.lock().unwrap();
        loop {
            if let Some(value) = state.buffer.pop_front() {
                self.shared.not_full.notify_one();
                return Ok(value);
            }
            if !state.producer_alive {
                return Err(RecvError);
            }
            state = self.shared.not_empty.wait(state).unwrap();
        }
    }

    pub fn probe(&self) -> ChannelProbe<T> {
        ChannelProbe {
            shared: Arc::clone(&self.shared),
        }
    }
}

impl<T> ChannelProbe<T> {
    /// Messages accepted over the channel's lifetime, including any still
    /// buffered.
    pub fn messages_sent(&self) -> u64 {
        self.shared.state.lock().unwrap().sent
    }

    /// Messages currently buffered.
    pub fn buffered(&self) -> usize {
        self.shared.state.lock().unwrap().buffer.len()
    }

    pub fn capacity(&self) -> usize {
        self.shared.capacity
    }
}

impl<T> Drop for Sender<T> {
    fn drop(&mut self) {
        let mut state = self.shared.state.lock().unwrap();
        state.producer_alive = false;
        drop(state);
        // A receiver parked on an empty buffer must wake to observe the
        // disconnect.
        self.shared.not_empty.notify_one();
    }
}

impl<T> Drop for Receiver<T> {
    fn drop(&mut self) {
        let mut state = self.shared.state.lock().unwrap();
        state.consumer_alive = false;
        drop(state);
        self.shared.not_full.notify_one();
    }
}

use std::sync::{Arc, Condvar, Mutex, OnceLock};

use crate::error::Result;

struct Slot<T> {
    value: OnceLock<Result<T>>,
    lock: Mutex<()>,
    ready: Condvar,
}

/// Result of a submitted task. Resolves exactly once; after that, `wait`
/// returns without blocking.
pub struct CompletionHandle<T> {
    slot: Arc<Slot<T>>,
}

pub(crate) struct Completer<T> {
    slot: Arc<Slot<T>>,
}

pub(crate) fn pair<T>() -> (CompletionHandle<T>, Completer<T>) {
    let slot = Arc::new(Slot { value: OnceLock::new(), lock: Mutex::new(()), ready: Condvar::new() });
    (CompletionHandle { slot: slot.clone() }, Completer { slot })
}

impl<T> Completer<T> {
    pub(crate) fn complete(self, r: Result<T>) {
        let _ = self.slot.value.set(r);
        let _g = self.slot.lock.lock().unwrap();
        self.slot.ready.notify_all();
    }
}

impl<T> CompletionHandle<T> {
    pub fn is_done(&self) -> bool {
        self.slot.value.get().is_some()
    }

    /// `None` while pending.
    pub fn try_get(&self) -> Option<&Result<T>> {
        self.slot.value.get()
    }

    /// Block until the task finished and borrow its result.
    pub fn wait(&self) -> &Result<T> {
        if let Some(v) = self.slot.value.get() {
            return v;
        }
        let mut g = self.slot.lock.lock().unwrap();
        while self.slot.value.get().is_none() {
            g = self.slot.ready.wait(g).unwrap();
        }
        drop(g);
        self.slot.value.get().unwrap()
    }

    /// Block and take the result.
    pub fn join(self) -> Result<T> {
        self.wait();
        // The completer may still be inside `complete`, between storing the
        // value and dropping its reference.
        let mut slot = self.slot;
        loop {
            match Arc::try_unwrap(slot) {
                Ok(s) => return s.value.into_inner().unwrap(),
                Err(s) => {
                    slot = s;
                    std::thread::yield_now();
                }
            }
        }
    }
}

use std::cell::Cell;
use std::collections::VecDeque;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Condvar, Mutex};
use std::thread::JoinHandle;

use super::handle::{pair, CompletionHandle};
use crate::error::{Error, Result};

type Job = Box<dyn FnOnce() + Send + 'static>;

/// Jobs a worker takes per queue visit, at most.
const MAX_BATCH: usize = 16;

static NEXT_POOL_ID: AtomicU64 = AtomicU64::new(1);

thread_local! {
    /// Id of the pool this thread works for (0 = not a worker).
    static WORKER_OF: Cell<u64> = const { Cell::new(0) };
}

pub fn available_cores() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PoolOptions {
    pub workers: usize,
    /// Pin worker `i` to core `i mod cores`.
    pub pin: bool,
    /// Allow more workers than cores (for invariance tests on small hosts).
    pub oversubscribe: bool,
}

impl PoolOptions {
    pub fn new(workers: usize) -> Self {
        PoolOptions { workers, pin: false, oversubscribe: false }
    }
}

struct Queue {
    jobs: VecDeque<Job>,
    shutdown: bool,
}

struct Shared {
    queue: Mutex<Queue>,
    work: Condvar,
    in_flight: AtomicU64,
    idle_lock: Mutex<()>,
    idle: Condvar,
    workers: usize,
}

impl Shared {
    fn finish_one(&self) {
        if self.in_flight.fetch_sub(1, Ordering::AcqRel) == 1 {
            let _g = self.idle_lock.lock().unwrap();
            self.idle.notify_all();
        }
    }
}

pub struct WorkerPool {
    id: u64,
    shared: Arc<Shared>,
    threads: Mutex<Vec<JoinHandle<()>>>,
}

fn panic_message(p: Box<dyn std::any::Any + Send>) -> String {
    if let Some(s) = p.downcast_ref::<&str>() {
        s.to_string()
    } else if let Some(s) = p.downcast_ref::<String>() {
        s.clone()
    } else {
        "panic".into()
    }
}

struct LoopState {
    remaining: AtomicU64,
    first_error: Mutex<Option<(usize, Error)>>,
    lock: Mutex<()>,
    done: Condvar,
}

impl WorkerPool {
    pub fn new(workers: usize) -> Result<Self> {
        Self::with_options(PoolOptions::new(workers))
    }

    pub fn with_options(opt: PoolOptions) -> Result<Self> {
        let cores = available_cores();
        if opt.workers == 0 {
            return Err(Error::config("worker count must be at least 1"));
        }
        if opt.workers > cores && !opt.oversubscribe {
            return Err(Error::config(format!(
                "{} workers requested but only {cores} cores available (use --oversubscribe to allow)",
                opt.workers
            )));
        }
        let id = NEXT_POOL_ID.fetch_add(1, Ordering::Relaxed);
        let shared = Arc::new(Shared {
            queue: Mutex::new(Queue { jobs: VecDeque::new(), shutdown: false }),
            work: Condvar::new(),
            in_flight: AtomicU64::new(0),
            idle_lock: Mutex::new(()),
            idle: Condvar::new(),
            workers: opt.workers,
        });
        let threads = (0..opt.workers)
            .map(|i| {
                let sh = shared.clone();
                std::thread::Builder::new()
                    .name(format!("octo-worker-{i}"))
                    .spawn(move || {
                        if opt.pin {
                            pin_to(i % cores);
                        }
                        WORKER_OF.with(|w| w.set(id));
                        worker_loop(&sh);
                    })
                    .map_err(Error::Io)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(WorkerPool { id, shared, threads: Mutex::new(threads) })
    }

    pub fn worker_count(&self) -> usize {
        self.shared.workers
    }

    /// Unfinished submitted tasks.
    pub fn in_flight(&self) -> u64 {
        self.shared.in_flight.load(Ordering::Acquire)
    }

    fn on_worker(&self) -> bool {
        WORKER_OF.with(|w| w.get()) == self.id
    }

    fn enqueue(&self, jobs: impl IntoIterator<Item = Job>) -> Result<()> {
        let mut q = self.shared.queue.lock().unwrap();
        if q.shutdown {
            return Err(Error::Lifecycle);
        }
        let before = q.jobs.len();
        q.jobs.extend(jobs);
        let added = q.jobs.len() - before;
        self.shared.in_flight.fetch_add(added as u64, Ordering::AcqRel);
        drop(q);
        if added == 1 {
            self.shared.work.notify_one();
        } else if added > 1 {
            self.shared.work.notify_all();
        }
        Ok(())
    }

    /// Run `task` once on some worker.
    pub fn submit<T, F>(&self, task: F) -> Result<CompletionHandle<T>>
    where
        T: Send + Sync + 'static,
        F: FnOnce() -> Result<T> + Send + 'static,
    {
        let (handle, completer) = pair();
        let job: Job = Box::new(move || {
            let r = catch_unwind(AssertUnwindSafe(task)).unwrap_or_else(|p| Err(Error::Task(panic_message(p))));
            completer.complete(r);
        });
        self.enqueue([job])?;
        Ok(handle)
    }

    /// Block until every submitted task (including ones submitted while
    /// waiting) has finished. From inside a task this cannot wait for the
    /// caller itself, so it drains the queue inline instead.
    pub fn wait_all(&self) {
        if self.on_worker() {
            while let Some(job) = self.shared.queue.lock().unwrap().jobs.pop_front() {
                run_job(job);
                self.shared.finish_one();
            }
            return;
        }
        let mut g = self.shared.idle_lock.lock().unwrap();
        while self.shared.in_flight.load(Ordering::Acquire) != 0 {
            g = self.shared.idle.wait(g).unwrap();
        }
    }

    /// Apply `f` to every item, one task per item, and return once all are
    /// done. The error reported is the one with the lowest index; the other
    /// items still run.
    pub fn for_each_mut<T, F>(&self, items: &mut [T], f: F) -> Result<()>
    where
        T: Send,
        F: Fn(usize, &mut T) -> Result<()> + Sync,
    {
        let n = items.len();
        if n == 0 {
            return Ok(());
        }
        if self.on_worker() {
            let mut first = None;
            for (i, it) in items.iter_mut().enumerate() {
                if let Err(e) = f(i, it) {
                    first.get_or_insert(e);
                }
            }
            return first.map_or(Ok(()), Err);
        }
        let state = Arc::new(LoopState {
            remaining: AtomicU64::new(n as u64),
            first_error: Mutex::new(None),
            lock: Mutex::new(()),
            done: Condvar::new(),
        });
        // The jobs borrow `f` and `items` through raw addresses; this is
        // sound because we do not return before every job has finished with
        // them (and the jobs never unwind past their catch_unwind).
        let fp = &f as *const F as usize;
        let base = items.as_mut_ptr() as usize;
        let jobs = (0..n).map(|i| {
            let st = state.clone();
            Box::new(move || {
                // SAFETY: see above; each job gets a distinct index.
                let (f, item) = unsafe { (&*(fp as *const F), &mut *(base as *mut T).add(i)) };
                let r = catch_unwind(AssertUnwindSafe(|| f(i, item))).unwrap_or_else(|p| Err(Error::Task(panic_message(p))));
                if let Err(e) = r {
                    let mut slot = st.first_error.lock().unwrap();
                    if slot.as_ref().is_none_or(|(j, _)| i < *j) {
                        *slot = Some((i, e));
                    }
                }
                if st.remaining.fetch_sub(1, Ordering::AcqRel) == 1 {
                    let _g = st.lock.lock().unwrap();
                    st.done.notify_all();
                }
            }) as Job
        });
        let jobs: Vec<Job> = jobs.collect();
        // Lifetime erasure: the boxes capture only addresses and an Arc.
        self.enqueue(jobs)?;
        let mut g = state.lock.lock().unwrap();
        while state.remaining.load(Ordering::Acquire) != 0 {
            g = state.done.wait(g).unwrap();
        }
        drop(g);
        let first = state.first_error.lock().unwrap().take();
        first.map_or(Ok(()), |(_, e)| Err(e))
    }

    /// Map every item in parallel, preserving order.
    pub fn map<T, R, F>(&self, items: &[T], f: F) -> Result<Vec<R>>
    where
        T: Sync,
        R: Send,
        F: Fn(usize, &T) -> Result<R> + Sync,
    {
        let mut out: Vec<Option<R>> = (0..items.len()).map(|_| None).collect();
        self.for_each_mut(&mut out, |i, slot| {
            *slot = Some(f(i, &items[i])?);
            Ok(())
        })?;
        Ok(out.into_iter().map(|r| r.expect("every slot filled")).collect())
    }

    /// Stop accepting tasks, let the queue drain and join the workers.
    pub fn shutdown(&self) {
        self.shared.queue.lock().unwrap().shutdown = true;
        self.shared.work.notify_all();
        let threads = std::mem::take(&mut *self.threads.lock().unwrap());
        for t in threads {
            let _ = t.join();
        }
    }
}

impl Drop for WorkerPool {
    fn drop(&mut self) {
        self.shutdown();
    }
}

fn run_job(job: Job) {
    // Jobs catch their own panics; this is a backstop so a worker never dies.
    let _ = catch_unwind(AssertUnwindSafe(job));
}

fn worker_loop(sh: &Shared) {
    loop {
        let batch: Vec<Job> = {
            let mut q = sh.queue.lock().unwrap();
            while q.jobs.is_empty() && !q.shutdown {
                q = sh.work.wait(q).unwrap();
            }
            if q.jobs.is_empty() {
                return;
            }
            let n = (q.jobs.len() / (2 * sh.workers)).clamp(1, MAX_BATCH);
            q.jobs.drain(..n).collect()
        };
        for job in batch {
            run_job(job);
            sh.finish_one();
        }
    }
}

#[cfg(target_os = "linux")]
fn pin_to(cpu: usize) {
    // SAFETY: plain libc calls on a zeroed, stack-owned cpu_set_t.
    unsafe {
        let mut set: libc::cpu_set_t = std::mem::zeroed();
        libc::CPU_SET(cpu, &mut set);
        libc::sched_setaffinity(0, std::mem::size_of::<libc::cpu_set_t>(), &set);
    }
}

#[cfg(not(target_os = "linux"))]
fn pin_to(_cpu: usize) {}

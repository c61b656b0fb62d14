//! Word-operation counters.
//!
//! A coarse, machine-independent cost proxy: arbitrary-precision primitives
//! add their limb cost, dense transforms add one per butterfly. Counters are
//! per thread so that concurrent computations do not pollute each other.

use std::cell::Cell;

thread_local! {
    static WORD_OPS: Cell<u64> = const { Cell::new(0) };
}

#[inline]
pub fn count(n: u64) {
    WORD_OPS.with(|c| c.set(c.get().wrapping_add(n)));
}

/// Current value of this thread's counter.
pub fn word_ops() -> u64 {
    WORD_OPS.with(|c| c.get())
}

pub fn reset() {
    WORD_OPS.with(|c| c.set(0));
}

/// Runs `f` and returns its result together with the word operations it
/// performed on this thread.
pub fn measure<T>(f: impl FnOnce() -> T) -> (T, u64) {
    let start = word_ops();
    let out = f();
    (out, word_ops().wrapping_sub(start))
}

use std::collections::HashSet;

use super::word::Word;

/// A scheduled string: `base` padded with zeros to length `len`. Kept
/// unpadded so that long schedules stay cheap to check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Scheduled {
    pub base: Word,
    pub len: usize,
}

impl Scheduled {
    pub fn word(&self) -> Word {
        self.base.padded(self.len)
    }

    /// Whether `w` is a prefix of the padded string.
    pub fn extends(&self, w: &Word) -> bool {
        if w.len() <= self.base.len() {
            w.is_prefix_of(&self.base)
        } else {
            let tail = w.len() - self.base.len();
            let mask = if tail == 64 { u64::MAX } else { (1u64 << tail) - 1 };
            w.len() <= self.len && self.base.is_prefix_of(w) && w.bits() & mask == 0
        }
    }
}

/// Walks all strings in length-lexicographic order, each time serving the
/// first string that is not yet a prefix of an earlier scheduled one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseSchedule {
    cursor: Word,
    served: HashSet<Word>,
}

impl Default for DenseSchedule {
    fn default() -> Self {
        DenseSchedule {
            cursor: Word::EMPTY,
            served: HashSet::new(),
        }
    }
}

impl DenseSchedule {
    /// The next scheduled string, of length `len`; `None` if the next
    /// unserved string is longer than `len`.
    pub fn next(&mut self, len: usize) -> Option<Scheduled> {
        while self.served.contains(&self.cursor) {
            self.cursor = self.cursor.next_shortlex();
        }
        if self.cursor.len() > len {
            return None;
        }
        let base = self.cursor;
        for k in 0..=base.len() {
            self.served.insert(base.prefix(k));
        }
        // padding serves the zero extensions too, up to the word-size limit
        let mut w = base;
        while w.len() < len.min(super::word::MAX_WORD_LEN - 1) {
            w = w.push(false);
            self.served.insert(w);
        }
        Some(Scheduled { base, len })
    }
}

/// The first `steps` entries of the schedule with lengths `start`,
/// `start + 2`, `start + 4`, ...: `u_0, u_2, ...` for `start = 0` and
/// `v_1, v_3, ...` for `start = 1`.
pub fn dense_schedule(start: usize, steps: usize) -> Vec<Scheduled> {
    let mut s = DenseSchedule::default();
    (0..steps)
        .map(|m| s.next(start + 2 * m).expect("the cursor grows logarithmically"))
        .collect()
}

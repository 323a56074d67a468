//! Octal path keys.
//!
//! A key packs the refinement level into the top byte and the root-to-leaf
//! child indices, three bits per level, into the low bits. Child index
//! `c = x | y << 1 | z << 2` where x/y/z are the child's half along each
//! axis. Ordering is depth-first (pre-order): a node sorts before all of its
//! descendants, and siblings sort by child index, which makes sorted leaves a
//! Morton-style space-filling curve.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

pub const MAX_LEVEL: u8 = 7;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Key(u64);

impl Key {
    pub const ROOT: Key = Key(0);

    pub fn from_raw(raw: u64) -> Option<Key> {
        let level = (raw >> 56) as u8;
        let path = raw & ((1 << 56) - 1);
        (level <= MAX_LEVEL && path >> (3 * level as u32) == 0).then_some(Key(raw))
    }

    pub fn raw(self) -> u64 {
        self.0
    }

    pub fn level(self) -> u8 {
        (self.0 >> 56) as u8
    }

    pub fn path(self) -> u64 {
        self.0 & ((1 << 56) - 1)
    }

    pub fn child(self, c: u8) -> Key {
        debug_assert!(c < 8 && self.level() < MAX_LEVEL);
        Key(((self.level() as u64 + 1) << 56) | (self.path() << 3) | c as u64)
    }

    pub fn children(self) -> [Key; 8] {
        std::array::from_fn(|c| self.child(c as u8))
    }

    pub fn parent(self) -> Option<Key> {
        let l = self.level();
        (l > 0).then(|| Key(((l as u64 - 1) << 56) | (self.path() >> 3)))
    }

    /// Index of this node within its parent.
    pub fn child_index(self) -> u8 {
        (self.path() & 7) as u8
    }

    /// Integer position of the node among the `2^level` nodes per axis.
    pub fn coords(self) -> [u32; 3] {
        let mut c = [0u32; 3];
        let l = self.level() as u32;
        for d in 0..l {
            let bits = (self.path() >> (3 * (l - 1 - d))) & 7;
            for (a, ca) in c.iter_mut().enumerate() {
                *ca = (*ca << 1) | ((bits >> a) & 1) as u32;
            }
        }
        c
    }

    pub fn from_coords(level: u8, c: [u32; 3]) -> Key {
        debug_assert!(level <= MAX_LEVEL && c.iter().all(|&x| x < 1 << level));
        let mut path = 0u64;
        for d in 0..level as u32 {
            let bit = level as u32 - 1 - d;
            let oct = (c[0] >> bit & 1) | (c[1] >> bit & 1) << 1 | (c[2] >> bit & 1) << 2;
            path = (path << 3) | oct as u64;
        }
        Key(((level as u64) << 56) | path)
    }

    /// The ancestor at `level` (or self when equal).
    pub fn ancestor(self, level: u8) -> Key {
        debug_assert!(level <= self.level());
        let up = 3 * (self.level() - level) as u32;
        Key(((level as u64) << 56) | (self.path() >> up))
    }

    fn sort_tuple(self) -> (u64, u8) {
        (self.path() << (3 * (MAX_LEVEL - self.level()) as u32), self.level())
    }
}

impl Ord for Key {
    fn cmp(&self, o: &Self) -> Ordering {
        self.sort_tuple().cmp(&o.sort_tuple())
    }
}

impl PartialOrd for Key {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for Key {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L{}:", self.level())?;
        if self.level() == 0 {
            return f.write_str("root");
        }
        for d in (0..self.level() as u32).rev() {
            write!(f, "{}", (self.path() >> (3 * d)) & 7)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Key {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

//! Cross-rank face adjacency from leaf geometry alone.

use std::collections::BTreeSet;
use std::ops::Range;

use octolite::mesh::{Key, Tree};

fn extent(k: Key, depth: u8) -> ([i64; 3], i64) {
    let w = 1i64 << (depth - k.level());
    (k.coords().map(|c| c as i64 * w), w)
}

/// Does `b` share part of face `face` of `a` (outflow domain)?
fn touches(a: Key, b: Key, face: usize, depth: u8) -> bool {
    let ((pa, wa), (pb, wb)) = (extent(a, depth), extent(b, depth));
    let ax = face / 2;
    let on_plane = if face % 2 == 1 { pb[ax] == pa[ax] + wa } else { pb[ax] + wb == pa[ax] };
    on_plane && (0..3).filter(|&t| t != ax).all(|t| pa[t].max(pb[t]) < (pa[t] + wa).min(pb[t] + wb))
}

/// (receiving leaf, face, foreign source rank) triples from geometry alone.
pub fn adjacency_messages(tree: &Tree, ranges: &[Range<usize>]) -> Vec<usize> {
    let owner = |i: usize| ranges.iter().position(|r| r.contains(&i)).unwrap();
    let depth = tree.max_level();
    let leaves = tree.leaves();
    let mut per_sender = vec![0; ranges.len()];
    for (i, a) in leaves.iter().enumerate() {
        for face in 0..6 {
            let srcs: BTreeSet<usize> = (0..leaves.len())
                .filter(|&j| owner(j) != owner(i) && touches(a.key(), leaves[j].key(), face, depth))
                .map(owner)
                .collect();
            for s in srcs {
                per_sender[s] += 1;
            }
        }
    }
    per_sender
}

//! Ghost-shell filling.
//!
//! A [`GhostPlan`] is built once per tree: for each of a leaf's 6 × 64 face
//! ghost cells it stores a [`Recipe`] saying how to compute the value from
//! interior cells of the tree (copy, 8-cell restriction, or limited
//! prolongation from a coarser leaf). Edge and corner ghosts are never read
//! by the face-flux stencil and are left alone.
//!
//! Filling is two-phase so it parallelizes without locks: every leaf gathers
//! its ghost values into a private [`GhostBuf`] reading only interiors, then
//! the buffers are copied into the ghost shells.
//!
//! A coarse leaf bordering finer leaves also gathers, per fine face, the
//! left/right states the fine leaves will see. The coarse side recomputes the
//! fine fluxes from these and uses their average, so both sides of a
//! coarse–fine interface move exactly the same amount of every conserved
//! quantity.

use super::subgrid::{idx, SubGrid, N, NFIELDS};
use super::transfer::{prolong_limited, restrict};
use super::tree::{Cover, Tree};
use super::Boundary;
use crate::error::{Error, Result};

pub const FACE_CELLS: usize = N * N;
pub const GHOST_SLOTS: usize = 6 * FACE_CELLS;
pub const SUBFACES: usize = 4 * FACE_CELLS;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CellRef {
    pub leaf: u32,
    /// Box index within the leaf.
    pub cell: u16,
}

impl CellRef {
    fn new(leaf: usize, b: [usize; 3]) -> Self {
        CellRef { leaf: leaf as u32, cell: idx(b[0], b[1], b[2]) as u16 }
    }

    #[inline]
    fn get(self, leaves: &[SubGrid], f: usize) -> f64 {
        leaves[self.leaf as usize].get(f, self.cell as usize)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Src {
    Cell(CellRef),
    Mean([CellRef; 8]),
}

impl Src {
    fn eval(&self, leaves: &[SubGrid], f: usize) -> f64 {
        match self {
            Src::Cell(c) => c.get(leaves, f),
            Src::Mean(cs) => restrict(&cs.map(|c| c.get(leaves, f))),
        }
    }

    fn visit(&self, out: &mut impl FnMut(CellRef)) {
        match self {
            Src::Cell(c) => out(*c),
            Src::Mean(cs) => cs.iter().for_each(|&c| out(c)),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Prolong {
    pub center: CellRef,
    pub lo: [Option<Src>; 3],
    pub hi: [Option<Src>; 3],
    pub sign: [f64; 3],
}

#[derive(Clone, Debug, PartialEq)]
pub enum Recipe {
    Copy(CellRef),
    Restrict([CellRef; 8]),
    Prolong(Box<Prolong>),
}

impl Recipe {
    #[inline]
    pub fn eval(&self, leaves: &[SubGrid], f: usize) -> f64 {
        match self {
            Recipe::Copy(c) => c.get(leaves, f),
            Recipe::Restrict(cs) => restrict(&cs.map(|c| c.get(leaves, f))),
            Recipe::Prolong(p) => {
                let side = |s: &[Option<Src>; 3]| std::array::from_fn(|a| s[a].as_ref().map(|s| s.eval(leaves, f)));
                prolong_limited(p.center.get(leaves, f), side(&p.lo), side(&p.hi), p.sign)
            }
        }
    }

    pub fn visit_sources(&self, out: &mut impl FnMut(CellRef)) {
        match self {
            Recipe::Copy(c) => out(*c),
            Recipe::Restrict(cs) => cs.iter().for_each(|&c| out(c)),
            Recipe::Prolong(p) => {
                out(p.center);
                p.lo.iter().chain(&p.hi).flatten().for_each(|s| s.visit(out));
            }
        }
    }
}

/// Which conserved fields a fill touches.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fields(u8);

impl Fields {
    pub const ALL: Fields = Fields(0b11111);

    pub fn only(f: usize) -> Fields {
        assert!(f < NFIELDS);
        Fields(1 << f)
    }

    pub fn contains(self, f: usize) -> bool {
        self.0 >> f & 1 == 1
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..NFIELDS).filter(move |&f| self.contains(f))
    }
}

pub fn face_axis(face: usize) -> usize {
    face / 2
}

pub fn face_side(face: usize) -> usize {
    face % 2
}

/// The two axes other than `axis`, ascending.
pub fn tangential(axis: usize) -> (usize, usize) {
    match axis {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

/// Box coordinates of ghost `slot` on `face`.
pub fn ghost_cell(face: usize, slot: usize) -> [usize; 3] {
    let (a, (t1, t2)) = (face_axis(face), tangential(face_axis(face)));
    let mut b = [0; 3];
    b[a] = if face_side(face) == 0 { 0 } else { N + 1 };
    b[t1] = slot % N + 1;
    b[t2] = slot / N + 1;
    b
}

/// Interior cell just inside ghost `slot` of `face`.
pub fn boundary_cell(face: usize, slot: usize) -> [usize; 3] {
    let mut b = ghost_cell(face, slot);
    let a = face_axis(face);
    b[a] = if face_side(face) == 0 { 1 } else { N };
    b
}

/// Fine faces a coarse leaf recomputes on one of its faces. Entry
/// `4 * slot + sub` is the sub-face `sub = u + 2 v` of coarse face cell
/// `slot` (`u`, `v` along the two tangential axes).
#[derive(Clone, Debug, PartialEq)]
pub struct RefluxFace {
    pub face: u8,
    pub entries: Vec<RefluxEntry>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RefluxEntry {
    /// Index into the plan's recipe table: the fine leaf's ghost across
    /// this sub-face.
    pub ghost: u32,
    /// The fine leaf's cell on its side of the sub-face.
    pub cell: CellRef,
}

#[derive(Clone, Debug)]
pub struct GhostPlan {
    recipes: Vec<Recipe>,
    reflux: Vec<Vec<RefluxFace>>,
}

/// Per-leaf gather target.
#[derive(Clone, Debug)]
pub struct GhostBuf {
    /// `f * GHOST_SLOTS + face * 64 + slot`.
    pub ghosts: Vec<f64>,
    pub reflux: Vec<RefluxBuf>,
}

/// States on both sides of the 256 fine faces behind one coarse face, each
/// field-major: `f * SUBFACES + entry`. "Left" is the low side along the
/// face normal.
#[derive(Clone, Debug)]
pub struct RefluxBuf {
    pub face: u8,
    pub left: Vec<f64>,
    pub right: Vec<f64>,
}

fn global_cell(g: &SubGrid, b: [usize; 3]) -> [i64; 3] {
    let c = g.key().coords();
    std::array::from_fn(|a| c[a] as i64 * N as i64 + b[a] as i64 - 1)
}

/// Wrap or reject a global cell position at `level`.
fn in_domain(boundary: Boundary, level: u8, mut g: [i64; 3]) -> Option<[i64; 3]> {
    let n = (N as i64) << level;
    for x in &mut g {
        if !(0..n).contains(x) {
            if boundary != Boundary::Periodic {
                return None;
            }
            *x = x.rem_euclid(n);
        }
    }
    Some(g)
}

fn node_of(g: [i64; 3]) -> [u32; 3] {
    g.map(|x| (x >> 3) as u32)
}

fn local_in(leaf: &SubGrid, g: [i64; 3]) -> Option<[usize; 3]> {
    let c = leaf.key().coords();
    let mut b = [0; 3];
    for a in 0..3 {
        let l = g[a] - c[a] as i64 * N as i64;
        if !(0..N as i64).contains(&l) {
            return None;
        }
        b[a] = l as usize + 1;
    }
    Some(b)
}

impl GhostPlan {
    pub fn build(tree: &Tree) -> Result<GhostPlan> {
        let leaves = tree.leaves();
        let mut recipes = Vec::with_capacity(leaves.len() * GHOST_SLOTS);
        for li in 0..leaves.len() {
            for face in 0..6 {
                for slot in 0..FACE_CELLS {
                    recipes.push(recipe_for(tree, li, face, slot)?);
                }
            }
        }
        let mut reflux = Vec::with_capacity(leaves.len());
        for li in 0..leaves.len() {
            reflux.push(reflux_faces(tree, li)?);
        }
        Ok(GhostPlan { recipes, reflux })
    }

    pub fn recipe(&self, leaf: usize, face: usize, slot: usize) -> &Recipe {
        &self.recipes[leaf * GHOST_SLOTS + face * FACE_CELLS + slot]
    }

    pub fn reflux(&self, leaf: usize) -> &[RefluxFace] {
        &self.reflux[leaf]
    }

    pub fn new_buf(&self, leaf: usize) -> GhostBuf {
        GhostBuf {
            ghosts: vec![0.0; NFIELDS * GHOST_SLOTS],
            reflux: self.reflux[leaf]
                .iter()
                .map(|r| RefluxBuf { face: r.face, left: vec![0.0; NFIELDS * SUBFACES], right: vec![0.0; NFIELDS * SUBFACES] })
                .collect(),
        }
    }

    /// Sorted, de-duplicated cells read when filling `face` of `leaf`,
    /// including those behind its reflux entries.
    pub fn face_sources(&self, leaf: usize, face: usize) -> Vec<CellRef> {
        let mut out = Vec::new();
        let mut push = |c: CellRef| out.push(c);
        for slot in 0..FACE_CELLS {
            self.recipe(leaf, face, slot).visit_sources(&mut push);
        }
        for r in self.reflux[leaf].iter().filter(|r| r.face as usize == face) {
            for e in &r.entries {
                self.recipes[e.ghost as usize].visit_sources(&mut push);
                push(e.cell);
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Read phase: compute `leaf`'s ghost values (and reflux states when all
    /// fields are selected) from interiors only.
    pub fn gather(&self, leaves: &[SubGrid], leaf: usize, fields: Fields, buf: &mut GhostBuf) {
        let rs = &self.recipes[leaf * GHOST_SLOTS..(leaf + 1) * GHOST_SLOTS];
        for f in fields.iter() {
            let out = &mut buf.ghosts[f * GHOST_SLOTS..(f + 1) * GHOST_SLOTS];
            for (o, r) in out.iter_mut().zip(rs) {
                *o = r.eval(leaves, f);
            }
        }
        if fields != Fields::ALL {
            return;
        }
        for (spec, rb) in self.reflux[leaf].iter().zip(&mut buf.reflux) {
            let fine_is_high = face_side(spec.face as usize) == 1;
            for f in 0..NFIELDS {
                for (e, entry) in spec.entries.iter().enumerate() {
                    let ghost = self.recipes[entry.ghost as usize].eval(leaves, f);
                    let cell = entry.cell.get(leaves, f);
                    let (l, r) = if fine_is_high { (ghost, cell) } else { (cell, ghost) };
                    rb.left[f * SUBFACES + e] = l;
                    rb.right[f * SUBFACES + e] = r;
                }
            }
        }
    }

    /// Write phase: copy gathered values into the ghost shell.
    pub fn apply(grid: &mut SubGrid, fields: Fields, buf: &GhostBuf) {
        for f in fields.iter() {
            let src = &buf.ghosts[f * GHOST_SLOTS..(f + 1) * GHOST_SLOTS];
            let dst = grid.field_mut(f);
            for face in 0..6 {
                for slot in 0..FACE_CELLS {
                    let [i, j, k] = ghost_cell(face, slot);
                    dst[idx(i, j, k)] = src[face * FACE_CELLS + slot];
                }
            }
        }
    }
}

/// Serial fill of every leaf.
pub fn fill_ghosts(tree: &mut Tree, plan: &GhostPlan, fields: Fields) {
    let mut bufs: Vec<GhostBuf> = (0..tree.leaf_count()).map(|i| plan.new_buf(i)).collect();
    for (i, b) in bufs.iter_mut().enumerate() {
        plan.gather(tree.leaves(), i, fields, b);
    }
    for (g, b) in tree.leaves_mut().iter_mut().zip(&bufs) {
        GhostPlan::apply(g, fields, b);
    }
}

fn recipe_for(tree: &Tree, li: usize, face: usize, slot: usize) -> Result<Recipe> {
    let leaves = tree.leaves();
    let me = &leaves[li];
    let level = me.level();
    let Some(g) = in_domain(tree.boundary(), level, global_cell(me, ghost_cell(face, slot))) else {
        // Outflow: zero gradient.
        return Ok(Recipe::Copy(CellRef::new(li, boundary_cell(face, slot))));
    };
    match tree.cover(level, node_of(g)) {
        Cover::Leaf(j) => Ok(Recipe::Copy(CellRef::new(j, local_in(&leaves[j], g).expect("covering leaf")))),
        Cover::Finer => {
            let mut cs = [CellRef { leaf: 0, cell: 0 }; 8];
            for (o, c) in cs.iter_mut().enumerate() {
                let fine = std::array::from_fn(|a| 2 * g[a] + (o >> a & 1) as i64);
                match tree.cover(level + 1, node_of(fine)) {
                    Cover::Leaf(j) => *c = CellRef::new(j, local_in(&leaves[j], fine).expect("covering leaf")),
                    _ => return Err(ungraded(me, "finer")),
                }
            }
            Ok(Recipe::Restrict(cs))
        }
        Cover::Coarser(ci) => {
            let coarse = &leaves[ci];
            if coarse.level() + 1 != level {
                return Err(ungraded(me, "coarser"));
            }
            let gc = g.map(|x| x >> 1);
            let sign = g.map(|x| if x & 1 == 1 { 1.0 } else { -1.0 });
            let center = CellRef::new(ci, local_in(coarse, gc).expect("coarse cell inside coarse leaf"));
            let mut lo: [Option<Src>; 3] = Default::default();
            let mut hi: [Option<Src>; 3] = Default::default();
            for a in 0..3 {
                for (dir, slot) in [(-1i64, &mut lo[a]), (1, &mut hi[a])] {
                    let mut nb = gc;
                    nb[a] += dir;
                    let Some(nb) = in_domain(tree.boundary(), level - 1, nb) else { continue };
                    *slot = if let Some(b) = local_in(coarse, nb) {
                        Some(Src::Cell(CellRef::new(ci, b)))
                    } else {
                        // The only other leaf the stencil may touch is the
                        // receiver itself, through the restriction of its
                        // own cells.
                        let fine: Vec<[i64; 3]> = (0..8)
                            .map(|o| std::array::from_fn(|d| 2 * nb[d] + (o >> d & 1) as i64))
                            .collect();
                        match fine.iter().map(|&p| local_in(me, p)).collect::<Option<Vec<_>>>() {
                            Some(bs) => Some(Src::Mean(std::array::from_fn(|o| CellRef::new(li, bs[o])))),
                            None => None,
                        }
                    };
                }
            }
            Ok(Recipe::Prolong(Box::new(Prolong { center, lo, hi, sign })))
        }
    }
}

fn reflux_faces(tree: &Tree, ci: usize) -> Result<Vec<RefluxFace>> {
    let leaves = tree.leaves();
    let me = &leaves[ci];
    let level = me.level();
    let mut out = Vec::new();
    for face in 0..6 {
        let (a, side) = (face_axis(face), face_side(face));
        let dir = if side == 0 { -1 } else { 1 };
        let Some(nc) = tree.neighbor_coords(level, me.key().coords(), a, dir) else { continue };
        if tree.cover(level, nc) != Cover::Finer {
            continue;
        }
        let (t1, t2) = tangential(a);
        let fine_face = 2 * a + (1 - side);
        let mut entries = Vec::with_capacity(SUBFACES);
        for slot in 0..FACE_CELLS {
            let g = in_domain(tree.boundary(), level, global_cell(me, ghost_cell(face, slot))).expect("neighbour exists");
            for sub in 0..4 {
                let mut fine = g.map(|x| 2 * x);
                fine[a] += if side == 1 { 0 } else { 1 };
                fine[t1] += (sub & 1) as i64;
                fine[t2] += (sub >> 1) as i64;
                let Cover::Leaf(fj) = tree.cover(level + 1, node_of(fine)) else {
                    return Err(ungraded(me, "finer"));
                };
                let fb = local_in(&leaves[fj], fine).expect("covering leaf");
                let fslot = (fb[t1] - 1) + N * (fb[t2] - 1);
                entries.push(RefluxEntry {
                    ghost: (fj * GHOST_SLOTS + fine_face * FACE_CELLS + fslot) as u32,
                    cell: CellRef::new(fj, fb),
                });
            }
        }
        out.push(RefluxFace { face: face as u8, entries });
    }
    Ok(out)
}

fn ungraded(g: &SubGrid, what: &str) -> Error {
    Error::Structure(format!("leaf {} has a {what} neighbour more than one level away", g.key()))
}

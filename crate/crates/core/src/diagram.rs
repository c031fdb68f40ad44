//! Planar link diagrams and the local moves used by the skein engines.
//!
//! A diagram is a list of crossings, each with four *slots* numbered
//! counterclockwise `0..4`. Slot `4*c + p` is position `p` of crossing `c`.
//! Slots 0 and 2 lie on one strand through the crossing, slots 1 and 3 on
//! the other. Every slot is joined by an edge to exactly one other slot
//! (`adj`), and crossingless unknotted circles are kept as a bare count.
//!
//! Each crossing also records which strand is on top and, for each strand,
//! which end is incoming. Switching a crossing only flips the over bit, so
//! the underlying shadow, the slot numbering and the orientation are all
//! unchanged by a switch.
//!
//! Braid closures are drawn with strands running upward; the closing arcs
//! return down on the right. At a braid crossing the slots sit at the lower
//! right (0), upper right (1), upper left (2) and lower left (3).
//!
//! Debug text form (see [`LinkDiagram`]'s `Display`): a `loops N` line, then
//! one line per crossing
//! `X<c>: <c.p> <c.p> <c.p> <c.p> over=<02|13> in=<0|2><1|3> sign=<+|->`
//! listing the partner slot of each position. Not a stable format.

use std::fmt;

use crate::error::DiagramError;

/// Partner map on the four positions of one crossing.
pub type Pairing = [u8; 4];

const VERTICAL: Pairing = [1, 0, 3, 2];
const HORIZONTAL: Pairing = [3, 2, 1, 0];
const STRAIGHT: Pairing = [2, 3, 0, 1];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Smoothing {
    /// Joins positions 0–1 and 2–3. For a braid crossing this is the
    /// identity braid, i.e. the oriented smoothing.
    Vertical,
    /// Joins positions 0–3 and 1–2 (a cup and a cap at a braid crossing).
    Horizontal,
}

impl Smoothing {
    fn pairing(self) -> Pairing {
        match self {
            Smoothing::Vertical => VERTICAL,
            Smoothing::Horizontal => HORIZONTAL,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Crossing {
    /// The 1–3 strand passes over the 0–2 strand.
    pub over_odd: bool,
    /// The 0–2 strand enters at position 0 (else at 2).
    pub in0: bool,
    /// The 1–3 strand enters at position 1 (else at 3).
    pub in1: bool,
}

impl Crossing {
    pub fn sign(&self) -> i32 {
        let along_even = if self.in0 { 1 } else { -1 };
        let along_odd = if self.in1 { -1 } else { 1 };
        let over = if self.over_odd { 1 } else { -1 };
        over * along_even * along_odd
    }

    pub fn is_incoming(&self, pos: usize) -> bool {
        match pos & 3 {
            0 => self.in0,
            1 => self.in1,
            2 => !self.in0,
            _ => !self.in1,
        }
    }

    pub fn is_over(&self, pos: usize) -> bool {
        (pos & 1 == 1) == self.over_odd
    }
}

/// Canonical encoding of a diagram up to relabeling of crossings and
/// rotation of slot numbers. Equal keys mean isomorphic diagrams.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DiagramKey(Vec<u16>);

impl DiagramKey {
    pub fn as_slice(&self) -> &[u16] {
        &self.0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkDiagram {
    crossings: Vec<Crossing>,
    adj: Vec<u32>,
    loops: u32,
}

#[inline]
fn crossing_of(slot: u32) -> usize {
    (slot >> 2) as usize
}

#[inline]
fn opposite(slot: u32) -> u32 {
    slot ^ 2
}

impl LinkDiagram {
    /// `n` disjoint unknotted circles.
    pub fn unlink(n: u32) -> Self {
        LinkDiagram { crossings: Vec::new(), adj: Vec::new(), loops: n }
    }

    pub(crate) fn braid_closure(generators: &[i32], strands: usize) -> Self {
        let n = generators.len();
        let mut adj = vec![u32::MAX; 4 * n];
        let mut crossings = Vec::with_capacity(n);
        let mut top: Vec<Option<u32>> = vec![None; strands];
        let mut bottom: Vec<Option<u32>> = vec![None; strands];
        let mut attach = |pos: usize, slot: u32, top: &mut Vec<Option<u32>>, adj: &mut Vec<u32>| match top[pos] {
            Some(prev) => {
                adj[prev as usize] = slot;
                adj[slot as usize] = prev;
            }
            None => bottom[pos] = Some(slot),
        };
        for (k, &g) in generators.iter().enumerate() {
            let i = g.unsigned_abs() as usize - 1;
            let base = 4 * k as u32;
            attach(i, base + 3, &mut top, &mut adj);
            attach(i + 1, base, &mut top, &mut adj);
            top[i] = Some(base + 2);
            top[i + 1] = Some(base + 1);
            // positive: the lower-left to upper-right strand (3 -> 1) is on top
            crossings.push(Crossing { over_odd: g > 0, in0: true, in1: false });
        }
        let mut loops = 0;
        for pos in 0..strands {
            match (top[pos], bottom[pos]) {
                (Some(t), Some(b)) => {
                    adj[t as usize] = b;
                    adj[b as usize] = t;
                }
                _ => loops += 1,
            }
        }
        LinkDiagram { crossings, adj, loops }
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn partner(&self, slot: u32) -> u32 {
        self.adj[slot as usize]
    }

    pub fn free_loops(&self) -> u32 {
        self.loops
    }

    pub fn writhe(&self) -> i64 {
        self.crossings.iter().map(|c| c.sign() as i64).sum()
    }

    pub fn sign(&self, c: usize) -> Result<i32, DiagramError> {
        self.crossings.get(c).map(Crossing::sign).ok_or(DiagramError::UnknownCrossing(c))
    }

    fn slot_incoming(&self, slot: u32) -> bool {
        self.crossings[crossing_of(slot)].is_incoming((slot & 3) as usize)
    }

    fn slot_over(&self, slot: u32) -> bool {
        self.crossings[crossing_of(slot)].is_over((slot & 3) as usize)
    }

    /// Every edge runs from an outgoing slot to an incoming one.
    pub fn is_consistently_oriented(&self) -> bool {
        (0..self.adj.len() as u32).all(|s| self.slot_incoming(s) != self.slot_incoming(self.adj[s as usize]))
    }

    /// Components through crossings, each as its incoming slots in
    /// traversal order starting from the component's smallest incoming slot.
    pub fn traversals(&self) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.adj.len()];
        let mut out = Vec::new();
        for s in 0..self.adj.len() as u32 {
            if seen[s as usize] || !self.slot_incoming(s) {
                continue;
            }
            let mut comp = Vec::new();
            let mut cur = s;
            loop {
                seen[cur as usize] = true;
                seen[opposite(cur) as usize] = true;
                comp.push(cur);
                cur = self.adj[opposite(cur) as usize];
                if cur == s {
                    break;
                }
            }
            out.push(comp);
        }
        out
    }

    pub fn component_count(&self) -> usize {
        self.traversals().len() + self.loops as usize
    }

    fn check(&self, c: usize) -> Result<(), DiagramError> {
        if c < self.crossings.len() {
            Ok(())
        } else {
            Err(DiagramError::UnknownCrossing(c))
        }
    }

    pub fn switch_crossing(&self, c: usize) -> Result<Self, DiagramError> {
        self.check(c)?;
        let mut d = self.clone();
        d.crossings[c].over_odd = !d.crossings[c].over_odd;
        Ok(d)
    }

    /// The orientation-respecting smoothing (L₀).
    pub fn smooth_oriented(&self, c: usize) -> Result<Self, DiagramError> {
        self.check(c)?;
        let x = self.crossings[c];
        let pairing = if x.in0 != x.in1 { VERTICAL } else { HORIZONTAL };
        Ok(self.excise(&[(c, pairing)]))
    }

    /// Either smoothing, ignoring orientation; the result is re-oriented
    /// canonically (see [`LinkDiagram::reorient`]).
    pub fn smooth_unoriented(&self, c: usize, mode: Smoothing) -> Result<Self, DiagramError> {
        self.check(c)?;
        let mut d = self.excise(&[(c, mode.pairing())]);
        d.reorient();
        Ok(d)
    }

    /// Remove crossings, joining their positions according to each pairing.
    /// Closed circles formed entirely inside the removed set become loops.
    fn excise(&self, removals: &[(usize, Pairing)]) -> Self {
        let n = self.crossings.len();
        let mut pairing: Vec<Option<Pairing>> = vec![None; n];
        for &(c, p) in removals {
            pairing[c] = Some(p);
        }
        let removed = |slot: u32| pairing[crossing_of(slot)].is_some();
        let paired = |slot: u32| -> u32 {
            let p = pairing[crossing_of(slot)].expect("slot of a removed crossing");
            (slot & !3) | p[(slot & 3) as usize] as u32
        };
        let mut visited = vec![false; 4 * n];
        let mut joins = Vec::new();
        let mut loops = self.loops;
        let removed_slots: Vec<u32> = removals
            .iter()
            .flat_map(|&(c, _)| (0..4).map(move |p| 4 * c as u32 + p))
            .collect();
        for &s in &removed_slots {
            let x = self.adj[s as usize];
            if visited[s as usize] || removed(x) {
                continue;
            }
            let mut cur = s;
            loop {
                visited[cur as usize] = true;
                let m = paired(cur);
                visited[m as usize] = true;
                let y = self.adj[m as usize];
                if !removed(y) {
                    joins.push((x, y));
                    break;
                }
                cur = y;
            }
        }
        for &s in &removed_slots {
            if visited[s as usize] {
                continue;
            }
            loops += 1;
            let mut cur = s;
            loop {
                visited[cur as usize] = true;
                let m = paired(cur);
                visited[m as usize] = true;
                cur = self.adj[m as usize];
                if cur == s {
                    break;
                }
            }
        }
        let mut new_index = vec![usize::MAX; n];
        let mut crossings = Vec::with_capacity(n - removals.len());
        for (c, x) in self.crossings.iter().enumerate() {
            if pairing[c].is_none() {
                new_index[c] = crossings.len();
                crossings.push(*x);
            }
        }
        let remap = |slot: u32| 4 * new_index[crossing_of(slot)] as u32 + (slot & 3);
        let mut adj = vec![u32::MAX; 4 * crossings.len()];
        for (c, &ni) in new_index.iter().enumerate() {
            if ni == usize::MAX {
                continue;
            }
            for p in 0..4u32 {
                let s = 4 * c as u32 + p;
                let t = self.adj[s as usize];
                if !removed(t) {
                    adj[(4 * ni as u32 + p) as usize] = remap(t);
                }
            }
        }
        for (x, y) in joins {
            let (x, y) = (remap(x), remap(y));
            adj[x as usize] = y;
            adj[y as usize] = x;
        }
        LinkDiagram { crossings, adj, loops }
    }

    /// Choose an orientation from the shadow alone: each component is
    /// traversed starting at its smallest slot, which becomes incoming.
    pub fn reorient(&mut self) {
        let mut incoming: Vec<Option<bool>> = vec![None; self.adj.len()];
        for s in 0..self.adj.len() as u32 {
            if incoming[s as usize].is_some() {
                continue;
            }
            let mut cur = s;
            loop {
                incoming[cur as usize] = Some(true);
                incoming[opposite(cur) as usize] = Some(false);
                cur = self.adj[opposite(cur) as usize];
                if cur == s {
                    break;
                }
            }
        }
        for (c, x) in self.crossings.iter_mut().enumerate() {
            x.in0 = incoming[4 * c] == Some(true);
            x.in1 = incoming[4 * c + 1] == Some(true);
        }
    }

    fn find_kink(&self) -> Option<(usize, Pairing)> {
        for s in 0..self.adj.len() as u32 {
            let t = self.adj[s as usize];
            if crossing_of(t) != crossing_of(s) {
                continue;
            }
            let (p, q) = (s & 3, t & 3);
            if (p + 1) & 3 == q || (q + 1) & 3 == p {
                let pairing = if p.min(q) == 0 && p.max(q) == 3 || p.min(q) == 1 { HORIZONTAL } else { VERTICAL };
                return Some((crossing_of(s), pairing));
            }
        }
        None
    }

    fn find_bigon(&self) -> Option<(usize, usize)> {
        for s in 0..self.adj.len() as u32 {
            let t = self.adj[s as usize];
            let (c1, c2) = (crossing_of(s), crossing_of(t));
            if c1 == c2 {
                continue;
            }
            let s2 = (s & !3) | ((s + 1) & 3);
            let t2 = self.adj[s2 as usize];
            if crossing_of(t2) == c2 && t2 & 3 == (t + 3) & 3 && self.slot_over(s) == self.slot_over(t) {
                return Some((c1, c2));
            }
        }
        None
    }

    /// Apply Reidemeister I and II reductions until none remain. Returns the
    /// reduced diagram and the sum of the signs of the removed kinks.
    pub fn simplify(&self) -> (Self, i64) {
        let mut d = self.clone();
        let mut kinks = 0i64;
        loop {
            if let Some((c, pairing)) = d.find_kink() {
                kinks += d.crossings[c].sign() as i64;
                d = d.excise(&[(c, pairing)]);
                d.loops -= 1;
                continue;
            }
            if let Some((c1, c2)) = d.find_bigon() {
                d = d.excise(&[(c1, STRAIGHT), (c2, STRAIGHT)]);
                continue;
            }
            return (d, kinks);
        }
    }

    /// First crossing met on its under strand when the components are
    /// traversed in order from their base points. `None` means the diagram
    /// is descending, hence an unlink. The choice depends only on the shadow
    /// and the orientation, so switching the returned crossing leaves every
    /// earlier crossing good.
    pub fn first_bad_crossing(&self) -> Option<usize> {
        let mut seen = vec![false; self.crossings.len()];
        for comp in self.traversals() {
            for s in comp {
                let c = crossing_of(s);
                if !seen[c] {
                    seen[c] = true;
                    if !self.slot_over(s) {
                        return Some(c);
                    }
                }
            }
        }
        None
    }

    /// Split into pieces whose crossings are connected through edges, plus
    /// the number of free loops.
    pub fn connected_pieces(&self) -> (Vec<LinkDiagram>, u32) {
        let n = self.crossings.len();
        let mut piece = vec![usize::MAX; n];
        let mut count = 0;
        for start in 0..n {
            if piece[start] != usize::MAX {
                continue;
            }
            let mut stack = vec![start];
            piece[start] = count;
            while let Some(c) = stack.pop() {
                for p in 0..4 {
                    let o = crossing_of(self.adj[4 * c + p]);
                    if piece[o] == usize::MAX {
                        piece[o] = count;
                        stack.push(o);
                    }
                }
            }
            count += 1;
        }
        if count <= 1 {
            let mut only = self.clone();
            only.loops = 0;
            let pieces = if n == 0 { Vec::new() } else { vec![only] };
            return (pieces, self.loops);
        }
        let mut local = vec![0usize; n];
        let mut sizes = vec![0usize; count];
        for c in 0..n {
            local[c] = sizes[piece[c]];
            sizes[piece[c]] += 1;
        }
        let mut out: Vec<LinkDiagram> = sizes
            .iter()
            .map(|&k| LinkDiagram { crossings: Vec::with_capacity(k), adj: vec![0; 4 * k], loops: 0 })
            .collect();
        for c in 0..n {
            out[piece[c]].crossings.push(self.crossings[c]);
            for p in 0..4 {
                let t = self.adj[4 * c + p];
                out[piece[c]].adj[4 * local[c] + p] = 4 * local[crossing_of(t)] as u32 + (t & 3);
            }
        }
        (out, self.loops)
    }

    fn encode_from(&self, start: u32, oriented: bool, buf: &mut Vec<u16>) {
        let n = self.crossings.len();
        let mut label = vec![u16::MAX; n];
        let mut rot = vec![0u32; n];
        let mut order = Vec::with_capacity(n);
        let c0 = crossing_of(start);
        label[c0] = 0;
        rot[c0] = start & 3;
        order.push(c0);
        buf.clear();
        let mut idx = 0;
        while idx < order.len() {
            let c = order[idx];
            let r = rot[c];
            let x = self.crossings[c];
            let mut header = (x.over_odd as u16) ^ (r as u16 & 1);
            if oriented {
                header |= (x.is_incoming(r as usize) as u16) << 1;
                header |= (x.is_incoming((r + 1) as usize & 3) as u16) << 2;
            }
            buf.push(header);
            for j in 0..4 {
                let t = self.adj[4 * c + ((r + j) & 3) as usize];
                let ct = crossing_of(t);
                if label[ct] == u16::MAX {
                    label[ct] = order.len() as u16;
                    rot[ct] = t & 3;
                    order.push(ct);
                }
                buf.push(label[ct] << 2 | (((t & 3) + 4 - rot[ct]) & 3) as u16);
            }
            idx += 1;
        }
    }

    fn piece_key(&self, oriented: bool) -> Vec<u16> {
        let mut best: Option<Vec<u16>> = None;
        let mut buf = Vec::new();
        for s in 0..self.adj.len() as u32 {
            if oriented && !self.slot_incoming(s) {
                continue;
            }
            self.encode_from(s, oriented, &mut buf);
            if best.as_ref().is_none_or(|b| buf < *b) {
                best = Some(buf.clone());
            }
        }
        best.unwrap_or_default()
    }

    /// Relabeling-invariant key. With `oriented` the strand directions are
    /// part of the key; without it only the unoriented diagram is.
    pub fn canonical_key(&self, oriented: bool) -> DiagramKey {
        let (pieces, loops) = self.connected_pieces();
        let mut keys: Vec<Vec<u16>> = pieces.iter().map(|p| p.piece_key(oriented)).collect();
        keys.sort();
        let mut out = vec![oriented as u16, loops as u16, keys.len() as u16];
        for k in keys {
            out.push(k.len() as u16);
            out.extend(k);
        }
        DiagramKey(out)
    }

    /// Copy with crossing `c` renamed to `perm[c]` and its positions rotated
    /// by `rot[c]` (old position `p` becomes `(p + rot[c]) % 4`).
    pub fn relabeled(&self, perm: &[usize], rot: &[u8]) -> Self {
        let n = self.crossings.len();
        let map = |slot: u32| -> u32 {
            let c = crossing_of(slot);
            4 * perm[c] as u32 + (((slot & 3) + rot[c] as u32) & 3)
        };
        let mut crossings = vec![self.crossings[0]; n];
        let mut adj = vec![0; 4 * n];
        for c in 0..n {
            let x = self.crossings[c];
            let r = rot[c] as usize;
            crossings[perm[c]] = Crossing {
                over_odd: x.over_odd ^ (r & 1 == 1),
                in0: x.is_incoming((4 - r) & 3),
                in1: x.is_incoming((5 - r) & 3),
            };
            for p in 0..4u32 {
                let s = 4 * c as u32 + p;
                adj[map(s) as usize] = map(self.adj[s as usize]);
            }
        }
        LinkDiagram { crossings, adj, loops: self.loops }
    }
}

impl fmt::Display for LinkDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "loops {}", self.loops)?;
        for (c, x) in self.crossings.iter().enumerate() {
            write!(f, "X{c}:")?;
            for p in 0..4 {
                let t = self.adj[4 * c + p];
                write!(f, " {}.{}", crossing_of(t), t & 3)?;
            }
            writeln!(
                f,
                " over={} in={}{} sign={}",
                if x.over_odd { "13" } else { "02" },
                if x.in0 { 0 } else { 2 },
                if x.in1 { 1 } else { 3 },
                if x.sign() > 0 { '+' } else { '-' }
            )?;
        }
        Ok(())
    }
}

//! Union-find that tracks vertex and edge counts per component.

use alloc::vec::Vec;

pub(crate) struct Dsu {
    parent: Vec<usize>,
    verts: Vec<usize>,
    edges: Vec<usize>,
}

impl Dsu {
    pub fn new(n: usize) -> Self {
        Dsu { parent: (0..n).collect(), verts: alloc::vec![1; n], edges: alloc::vec![0; n] }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Adds edge `uv` and returns `(vertices, edges)` of the resulting component.
    pub fn add_edge(&mut self, u: usize, v: usize) -> (usize, usize) {
        let (mut a, mut b) = (self.find(u), self.find(v));
        if a != b {
            if self.verts[a] < self.verts[b] {
                core::mem::swap(&mut a, &mut b);
            }
            self.parent[b] = a;
            self.verts[a] += self.verts[b];
            self.edges[a] += self.edges[b];
        }
        self.edges[a] += 1;
        (self.verts[a], self.edges[a])
    }
}

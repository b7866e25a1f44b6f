/// Disjoint-set forest with union by rank and path compression.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<u32>,
    rank: Vec<u8>,
    components: usize,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        assert!(n <= u32::MAX as usize, "too many nodes for u32 indices");
        UnionFind {
            parent: (0..n as u32).collect(),
            rank: vec![0; n],
            components: n,
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn components(&self) -> usize {
        self.components
    }

    #[inline]
    pub fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] as usize != root {
            root = self.parent[root] as usize;
        }
        let mut cur = x;
        while self.parent[cur] as usize != root {
            let next = self.parent[cur] as usize;
            self.parent[cur] = root as u32;
            cur = next;
        }
        root
    }

    /// Merges the sets of `a` and `b`; returns whether they were distinct.
    #[inline]
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            return false;
        }
        self.link_roots(ra, rb);
        true
    }

    /// Links two distinct roots.
    #[inline]
    pub(crate) fn link_roots(&mut self, ra: usize, rb: usize) {
        debug_assert_ne!(ra, rb);
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb as u32,
            std::cmp::Ordering::Greater => self.parent[rb] = ra as u32,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra as u32;
                self.rank[ra] += 1;
            }
        }
        self.components -= 1;
    }

    /// Number of elements in singleton sets.
    pub fn singletons(&mut self) -> usize {
        let mut size = vec![0u32; self.len()];
        for i in 0..self.len() {
            let r = self.find(i);
            size[r] += 1;
        }
        size.iter().filter(|&&s| s == 1).count()
    }

    /// Root of the largest set, if any.
    pub fn largest_root(&mut self) -> Option<usize> {
        let mut size = vec![0u32; self.len()];
        for i in 0..self.len() {
            let r = self.find(i);
            size[r] += 1;
        }
        size.iter()
            .enumerate()
            .max_by_key(|(_, s)| **s)
            .map(|(i, _)| i)
    }
}

//! Dancing-links exact cover with an explicit stack, so the search can stop
//! on a budget and resume from a recorded path.

use std::time::Instant;

use crate::error::{Error, Result};

const ROOT: usize = 0;

pub(crate) struct Dlx {
    left: Vec<usize>,
    right: Vec<usize>,
    up: Vec<usize>,
    down: Vec<usize>,
    col: Vec<usize>,
    row: Vec<usize>,
    size: Vec<usize>,
    stack: Vec<usize>,
    pub(crate) nodes: u64,
}

pub(crate) enum Step {
    Found(Vec<usize>),
    Exhausted,
    Budget(Vec<usize>),
}

pub(crate) struct Limits {
    pub(crate) nodes: u64,
    pub(crate) deadline: Option<Instant>,
}

impl Dlx {
    /// Columns `0..columns`; `rows[r]` lists the columns row `r` covers.
    pub(crate) fn new(columns: usize, rows: &[Vec<usize>]) -> Self {
        let headers = columns + 1;
        let mut d = Dlx {
            left: (0..headers).map(|i| if i == 0 { columns } else { i - 1 }).collect(),
            right: (0..headers).map(|i| (i + 1) % headers).collect(),
            up: (0..headers).collect(),
            down: (0..headers).collect(),
            col: (0..headers).collect(),
            row: vec![usize::MAX; headers],
            size: vec![0; headers],
            stack: Vec::new(),
            nodes: 0,
        };
        for (r, cols) in rows.iter().enumerate() {
            let first = d.col.len();
            for (i, &c) in cols.iter().enumerate() {
                let h = c + 1;
                let x = d.col.len();
                d.col.push(h);
                d.row.push(r);
                d.up.push(d.up[h]);
                d.down.push(h);
                let above = d.up[h];
                d.down[above] = x;
                d.up[h] = x;
                d.size[h] += 1;
                d.left.push(if i == 0 { x } else { x - 1 });
                d.right.push(first);
                if i > 0 {
                    d.right[x - 1] = x;
                    d.left[first] = x;
                }
            }
        }
        d
    }

    fn cover(&mut self, c: usize) {
        let (l, r) = (self.left[c], self.right[c]);
        self.right[l] = r;
        self.left[r] = l;
        let mut i = self.down[c];
        while i != c {
            let mut j = self.right[i];
            while j != i {
                let (u, d) = (self.up[j], self.down[j]);
                self.down[u] = d;
                self.up[d] = u;
                self.size[self.col[j]] -= 1;
                j = self.right[j];
            }
            i = self.down[i];
        }
    }

    fn uncover(&mut self, c: usize) {
        let mut i = self.up[c];
        while i != c {
            let mut j = self.left[i];
            while j != i {
                self.size[self.col[j]] += 1;
                let (u, d) = (self.up[j], self.down[j]);
                self.down[u] = j;
                self.up[d] = j;
                j = self.left[j];
            }
            i = self.up[i];
        }
        let (l, r) = (self.left[c], self.right[c]);
        self.right[l] = c;
        self.left[r] = c;
    }

    fn cover_row(&mut self, x: usize) {
        let mut j = self.right[x];
        while j != x {
            self.cover(self.col[j]);
            j = self.right[j];
        }
    }

    fn uncover_row(&mut self, x: usize) {
        let mut j = self.left[x];
        while j != x {
            self.uncover(self.col[j]);
            j = self.left[j];
        }
    }

    /// Fewest remaining candidates, ties to the lowest column.
    fn choose(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        let mut c = self.right[ROOT];
        while c != ROOT {
            if best.is_none_or(|b| self.size[c] < self.size[b]) {
                best = Some(c);
            }
            c = self.right[c];
        }
        best
    }

    fn path(&self) -> Vec<usize> {
        self.stack.iter().map(|&x| self.row[x]).collect()
    }

    fn push(&mut self, x: usize) {
        self.cover_row(x);
        self.stack.push(x);
        self.nodes += 1;
    }

    /// Re-enters the state reached by choosing `path` from the root.
    pub(crate) fn replay(&mut self, path: &[usize]) -> Result<()> {
        for &r in path {
            let c = self
                .choose()
                .ok_or_else(|| Error::InvalidCheckpoint("path continues past a full cover".into()))?;
            self.cover(c);
            let mut x = self.down[c];
            while x != c && self.row[x] != r {
                x = self.down[x];
            }
            if x == c {
                return Err(Error::InvalidCheckpoint(format!(
                    "row {r} is not a candidate at depth {}",
                    self.stack.len()
                )));
            }
            self.cover_row(x);
            self.stack.push(x);
        }
        Ok(())
    }

    fn over_budget(&self, limits: &Limits) -> bool {
        self.nodes >= limits.nodes
            || (self.nodes.is_multiple_of(256) && limits.deadline.is_some_and(|d| Instant::now() >= d))
    }

    /// Runs until a cover is found, the tree is exhausted, or the limits hit.
    pub(crate) fn run(&mut self, limits: &Limits) -> Step {
        loop {
            match self.choose() {
                None => return Step::Found(self.path()),
                Some(c) if self.size[c] > 0 => {
                    self.cover(c);
                    let x = self.down[c];
                    self.push(x);
                }
                Some(_) => {
                    if !self.backtrack() {
                        return Step::Exhausted;
                    }
                }
            }
            if self.over_budget(limits) {
                return Step::Budget(self.path());
            }
        }
    }

    /// Moves to the next sibling of the deepest choice that has one.
    fn backtrack(&mut self) -> bool {
        while let Some(x) = self.stack.pop() {
            self.uncover_row(x);
            let c = self.col[x];
            let next = self.down[x];
            if next != c {
                self.push(next);
                return true;
            }
            self.uncover(c);
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unlimited() -> Limits {
        Limits {
            nodes: u64::MAX,
            deadline: None,
        }
    }

    #[test]
    fn knuth_example() {
        // Columns A..G as 0..6; the unique cover is rows 0, 3, 4.
        let rows = vec![
            vec![2, 4, 5],
            vec![0, 3, 6],
            vec![1, 2, 5],
            vec![0, 3],
            vec![1, 6],
            vec![3, 4, 6],
        ];
        let mut d = Dlx::new(7, &rows);
        match d.run(&unlimited()) {
            Step::Found(mut path) => {
                path.sort_unstable();
                assert_eq!(path, vec![0, 3, 4]);
            }
            _ => panic!("expected a cover"),
        }
    }

    #[test]
    fn no_cover_is_exhausted() {
        let mut d = Dlx::new(3, &[vec![0, 1], vec![1, 2]]);
        assert!(matches!(d.run(&unlimited()), Step::Exhausted));
        let mut empty_column = Dlx::new(2, &[vec![0]]);
        assert!(matches!(empty_column.run(&unlimited()), Step::Exhausted));
    }

    #[test]
    fn node_budget_stops_and_replays() {
        let rows = vec![vec![0], vec![0, 1], vec![1], vec![2]];
        let mut d = Dlx::new(3, &rows);
        let Step::Budget(path) = d.run(&Limits { nodes: 1, deadline: None }) else {
            panic!("expected the budget to stop the search");
        };
        let mut resumed = Dlx::new(3, &rows);
        resumed.replay(&path).unwrap();
        assert!(matches!(resumed.run(&unlimited()), Step::Found(_)));
        assert!(Dlx::new(3, &rows).replay(&[3, 3]).is_err());
    }
}

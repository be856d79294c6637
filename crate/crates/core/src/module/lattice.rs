use std::collections::{HashSet, VecDeque};

use fixedbitset::FixedBitSet;

use super::{ModuleCtx, Submodule};
use crate::error::{Error, Result};

impl ModuleCtx {
    /// The distinct cyclic submodules `Rx`, sorted.
    pub fn cyclic_submodules(&self) -> Vec<Submodule> {
        let mut seen: HashSet<FixedBitSet> = HashSet::new();
        let mut out = Vec::new();
        for x in self.elements() {
            let c = self.cyclic(x);
            if seen.insert(c.members().clone()) {
                out.push(c);
            }
        }
        out.sort();
        out
    }

    /// Every submodule of the module, sorted by size then member list.
    ///
    /// Breadth-first closure: starting from `{0}`, adjoin one cyclic
    /// submodule at a time and keep the sums not seen before. Every submodule
    /// is a finite sum of cyclic ones, so the search is complete.
    pub fn enumerate_submodules(&self, cap: usize) -> Result<Vec<Submodule>> {
        if self.size() > cap {
            return Err(Error::SizeLimit {
                size: self.size(),
                cap,
            });
        }
        let cyclics = self.cyclic_submodules();
        let zero = self.zero_submodule();
        let mut seen: HashSet<FixedBitSet> = HashSet::new();
        seen.insert(zero.members().clone());
        let mut queue = VecDeque::from([zero.clone()]);
        let mut out = vec![zero];
        while let Some(n) = queue.pop_front() {
            for c in &cyclics {
                if c.is_subset(&n) {
                    continue;
                }
                let k = n.sum(c);
                if seen.insert(k.members().clone()) {
                    queue.push_back(k.clone());
                    out.push(k);
                }
            }
        }
        out.sort();
        Ok(out)
    }
}

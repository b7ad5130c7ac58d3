use std::ops::AddAssign;

use serde::{Deserialize, Serialize};

/// Search-tree counters.
///
/// `branch_nodes` counts internal nodes that opened branches, `leaves` counts
/// terminal nodes whether they failed or produced models, and
/// `models_emitted` counts assignments handed out, including the expansion of
/// unconstrained variables at a leaf. A single R_{1/3} constraint gives one
/// branch node, three leaves and three models.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumStats {
    pub branch_nodes: u64,
    pub leaves: u64,
    pub models_emitted: u64,
    pub max_depth: u64,
}

impl EnumStats {
    pub fn nodes(&self) -> u64 {
        self.branch_nodes + self.leaves
    }

    pub(crate) fn reach(&mut self, depth: usize) {
        self.max_depth = self.max_depth.max(depth as u64);
    }
}

impl AddAssign for EnumStats {
    fn add_assign(&mut self, o: Self) {
        self.branch_nodes += o.branch_nodes;
        self.leaves += o.leaves;
        self.models_emitted += o.models_emitted;
        self.max_depth = self.max_depth.max(o.max_depth);
    }
}

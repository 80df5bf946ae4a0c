//! Feasibility checks that work directly on [`DynamicGraph`], independent of
//! the bitmask encodings the oracles use.

use serde::{Deserialize, Serialize};

use crate::graph::{DynamicGraph, VertexId, VertexSet};

/// What an output set has to satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Feasibility {
    Domination,
    DirectedDomination,
    Independence,
}

impl Feasibility {
    pub fn name(self) -> &'static str {
        match self {
            Feasibility::Domination => "domination",
            Feasibility::DirectedDomination => "directed-domination",
            Feasibility::Independence => "independence",
        }
    }

    pub fn check(self, g: &DynamicGraph, set: &VertexSet) -> bool {
        match self {
            Feasibility::Domination => is_dominating(g, set),
            Feasibility::DirectedDomination => is_directed_dominating(g, set),
            Feasibility::Independence => is_independent(g, set),
        }
    }
}

fn all_alive(g: &DynamicGraph, set: &VertexSet) -> bool {
    set.iter().all(|&v| g.is_alive(v))
}

/// Every alive vertex is in `set` or adjacent to it. Members must be alive.
pub fn is_dominating(g: &DynamicGraph, set: &VertexSet) -> bool {
    all_alive(g, set) && first_undominated(g, set).is_none()
}

pub fn first_undominated(g: &DynamicGraph, set: &VertexSet) -> Option<VertexId> {
    g.vertices().find(|&v| !set.contains(&v) && !g.neighbors(v).expect("alive").iter().any(|u| set.contains(u)))
}

/// Every alive `v` has a member of `set` inside its out-closed neighborhood.
pub fn is_directed_dominating(g: &DynamicGraph, set: &VertexSet) -> bool {
    all_alive(g, set)
        && g.vertices()
            .all(|v| set.contains(&v) || g.arrival_neighbors(v).expect("alive").iter().any(|u| set.contains(u)))
}

/// Members alive and pairwise non-adjacent.
pub fn is_independent(g: &DynamicGraph, set: &VertexSet) -> bool {
    all_alive(g, set) && set.iter().all(|&v| g.neighbors(v).expect("alive").iter().all(|u| !set.contains(u)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stream::{EventStream, StreamEvent};

    fn path4() -> DynamicGraph {
        EventStream::new(
            None,
            vec![
                StreamEvent::arrival(0, &[]),
                StreamEvent::arrival(1, &[0]),
                StreamEvent::arrival(2, &[1]),
                StreamEvent::arrival(3, &[2]),
            ],
        )
        .replay()
        .unwrap()
    }

    fn set(ids: &[u32]) -> VertexSet {
        ids.iter().copied().map(VertexId).collect()
    }

    #[test]
    fn domination() {
        let g = path4();
        assert!(is_dominating(&g, &set(&[1, 3])));
        assert!(is_dominating(&g, &set(&[0, 2])));
        assert!(is_dominating(&g, &set(&[0, 3])));
        assert!(!is_dominating(&g, &set(&[1])));
        assert!(!is_dominating(&g, &set(&[1, 3, 9])));
    }

    #[test]
    fn directed_domination_uses_arrival_orientation() {
        let g = path4();
        // vertex 0 can only be dominated by itself
        assert!(!is_directed_dominating(&g, &set(&[1, 3])));
        assert!(is_directed_dominating(&g, &set(&[0, 2])));
    }

    #[test]
    fn independence() {
        let g = path4();
        assert!(is_independent(&g, &set(&[0, 2])));
        assert!(is_independent(&g, &set(&[0, 3])));
        assert!(!is_independent(&g, &set(&[1, 2])));
        assert!(is_independent(&g, &set(&[])));
    }
}

//! Port dependency graph and its strongly connected components.

use super::{Model, PortId};

/// Directed graph over ports.
///
/// Edges run from a flow's source to its target, and from an input port to
/// each output of the same function whose transfer reads it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DependencyGraph {
    successors: Vec<Vec<PortId>>,
    /// Components in topological order of the condensation (sources first).
    sccs: Vec<Vec<PortId>>,
    component_of: Vec<usize>,
}

impl DependencyGraph {
    pub fn node_count(&self) -> usize {
        self.successors.len()
    }

    pub fn successors(&self, p: PortId) -> &[PortId] {
        &self.successors[p.index()]
    }

    pub fn edges(&self) -> impl Iterator<Item = (PortId, PortId)> + '_ {
        self.successors
            .iter()
            .enumerate()
            .flat_map(|(i, s)| s.iter().map(move |&t| (PortId(i as u32), t)))
    }

    pub fn components(&self) -> &[Vec<PortId>] {
        &self.sccs
    }

    pub fn component_of(&self, p: PortId) -> usize {
        self.component_of[p.index()]
    }

    /// True if the component has more than one port or a self-loop.
    pub fn is_cyclic(&self, component: usize) -> bool {
        match self.sccs[component].as_slice() {
            [p] => self.successors[p.index()].contains(p),
            _ => true,
        }
    }

    pub fn is_acyclic(&self) -> bool {
        (0..self.sccs.len()).all(|c| !self.is_cyclic(c))
    }
}

pub fn dependency_graph(model: &Model) -> DependencyGraph {
    let n = model.ports().len();
    let mut successors: Vec<Vec<PortId>> = vec![Vec::new(); n];
    for fl in model.flows() {
        successors[fl.source.index()].push(fl.target);
    }
    for f in model.functions() {
        for t in &f.transfers {
            let mut reads = t.status.referenced_ports();
            if let Some(v) = &t.value {
                reads.extend(v.referenced_ports());
            }
            for p in reads {
                successors[p.index()].push(t.port);
            }
        }
    }
    for s in &mut successors {
        s.sort_unstable();
        s.dedup();
    }
    let mut sccs = tarjan(&successors);
    sccs.reverse();
    let mut component_of = vec![0; n];
    for (c, members) in sccs.iter().enumerate() {
        for p in members {
            component_of[p.index()] = c;
        }
    }
    DependencyGraph {
        successors,
        sccs,
        component_of,
    }
}

/// Iterative Tarjan. Components come out in reverse topological order;
/// members of each component are sorted by port id.
fn tarjan(succ: &[Vec<PortId>]) -> Vec<Vec<PortId>> {
    const UNSEEN: usize = usize::MAX;
    let n = succ.len();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut out = Vec::new();
    let mut counter = 0;
    // (node, next successor position)
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        call.push((root, 0));
        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if *pos == 0 && index[v] == UNSEEN {
                index[v] = counter;
                low[v] = counter;
                counter += 1;
                stack.push(v);
                on_stack[v] = true;
            }
            if let Some(w) = succ[v].get(*pos).map(|p| p.index()) {
                *pos += 1;
                if index[w] == UNSEEN {
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack");
                    on_stack[w] = false;
                    comp.push(PortId(w as u32));
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                out.push(comp);
            }
        }
    }
    out
}

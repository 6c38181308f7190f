//! Small graph routines over adjacency lists: strongly connected components,
//! shortest paths and parity-cycle detection.

use std::collections::VecDeque;

/// Strongly connected components of the subgraph induced by `include`,
/// in reverse topological order (Tarjan, iterative).
pub fn strongly_connected_components(successors: &[Vec<usize>], include: &[bool]) -> Vec<Vec<usize>> {
    let n = successors.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut components = Vec::new();
    let mut counter = 0;

    for root in 0..n {
        if !include[root] || index[root] != usize::MAX {
            continue;
        }
        // (node, next successor position)
        let mut work = vec![(root, 0usize)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (node, ref mut pos)) = work.last_mut() {
            if let Some(&next) = successors[node].get(*pos) {
                *pos += 1;
                if !include[next] {
                    continue;
                }
                if index[next] == usize::MAX {
                    index[next] = counter;
                    low[next] = counter;
                    counter += 1;
                    stack.push(next);
                    on_stack[next] = true;
                    work.push((next, 0));
                } else if on_stack[next] {
                    low[node] = low[node].min(index[next]);
                }
            } else {
                work.pop();
                if let Some(&(parent, _)) = work.last() {
                    low[parent] = low[parent].min(low[node]);
                }
                if low[node] == index[node] {
                    let mut component = Vec::new();
                    loop {
                        let member = stack.pop().expect("tarjan stack");
                        on_stack[member] = false;
                        component.push(member);
                        if member == node {
                            break;
                        }
                    }
                    component.sort_unstable();
                    components.push(component);
                }
            }
        }
    }
    components
}

/// Shortest path `from -> ... -> to` (at least one edge when `from == to`)
/// through nodes allowed by `include`, with successors explored in
/// ascending order. Returns the node sequence including both ends.
pub fn shortest_path(
    successors: &[Vec<usize>],
    include: &[bool],
    from: usize,
    to: usize,
) -> Option<Vec<usize>> {
    let n = successors.len();
    let mut parent = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    let sorted = |node: usize| {
        let mut s: Vec<usize> = successors[node].iter().copied().filter(|&x| include[x]).collect();
        s.sort_unstable();
        s.dedup();
        s
    };
    for next in sorted(from) {
        if next == to {
            return Some(vec![from, to]);
        }
        if !seen[next] {
            seen[next] = true;
            parent[next] = from;
            queue.push_back(next);
        }
    }
    while let Some(node) = queue.pop_front() {
        for next in sorted(node) {
            if next == to {
                let mut path = vec![to, node];
                let mut cur = node;
                while cur != from {
                    cur = parent[cur];
                    path.push(cur);
                }
                path.reverse();
                return Some(path);
            }
            if !seen[next] {
                seen[next] = true;
                parent[next] = node;
                queue.push_back(next);
            }
        }
    }
    None
}

/// Looks for a cycle whose least priority has the given parity (0 = even,
/// 1 = odd) among nodes allowed by `include`. Returns the cycle as a node
/// sequence starting and ending at a node carrying that least priority.
pub fn cycle_with_least_priority_parity(
    successors: &[Vec<usize>],
    include: &[bool],
    priority: &[u32],
    parity: u32,
) -> Option<Vec<usize>> {
    let mut candidates: Vec<u32> = (0..successors.len())
        .filter(|&v| include[v] && priority[v] % 2 == parity)
        .map(|v| priority[v])
        .collect();
    candidates.sort_unstable();
    candidates.dedup();
    for p in candidates {
        let allowed: Vec<bool> = (0..successors.len()).map(|v| include[v] && priority[v] >= p).collect();
        for component in strongly_connected_components(successors, &allowed) {
            for &v in component.iter().filter(|&&v| priority[v] == p) {
                let mut inside = vec![false; successors.len()];
                for &w in &component {
                    inside[w] = true;
                }
                if let Some(cycle) = shortest_path(successors, &inside, v, v) {
                    return Some(cycle);
                }
            }
        }
    }
    None
}

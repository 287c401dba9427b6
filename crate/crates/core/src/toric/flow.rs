//! Transportation feasibility: is there a nonnegative integer matrix with
//! given row and column sums supported on a bipartite edge set?

/// Returns a matrix `plan[i][j]` with the requested margins whose support lies
/// in `adj` (bit `j` of `adj[i]` allows entry `(i,j)`), or `None` if none exists.
pub fn transport_plan(row_sums: &[u32], col_sums: &[u32], adj: &[u64]) -> Option<Vec<Vec<u32>>> {
    let rows = row_sums.len();
    let cols = col_sums.len();
    let total: u64 = row_sums.iter().map(|&v| v as u64).sum();
    if total != col_sums.iter().map(|&v| v as u64).sum::<u64>() {
        return None;
    }
    let mut flow = vec![vec![0u32; cols]; rows];
    let mut row_left = row_sums.to_vec();
    let mut col_left = col_sums.to_vec();

    // greedy start; augmenting paths repair whatever it gets wrong
    for i in 0..rows {
        for j in 0..cols {
            if adj[i] >> j & 1 == 1 && row_left[i] > 0 && col_left[j] > 0 {
                let amount = row_left[i].min(col_left[j]);
                flow[i][j] += amount;
                row_left[i] -= amount;
                col_left[j] -= amount;
            }
        }
    }

    // nodes: rows 0..rows, columns rows..rows+cols
    let mut parent = vec![usize::MAX; rows + cols];
    let mut queue = Vec::with_capacity(rows + cols);
    loop {
        if row_left.iter().all(|&v| v == 0) {
            return Some(flow);
        }
        parent.iter_mut().for_each(|p| *p = usize::MAX);
        queue.clear();
        for i in 0..rows {
            if row_left[i] > 0 {
                parent[i] = i;
                queue.push(i);
            }
        }
        let mut sink_col = None;
        let mut head = 0;
        while head < queue.len() && sink_col.is_none() {
            let u = queue[head];
            head += 1;
            if u < rows {
                let mut mask = adj[u];
                while mask != 0 {
                    let j = mask.trailing_zeros() as usize;
                    mask &= mask - 1;
                    if j >= cols || parent[rows + j] != usize::MAX {
                        continue;
                    }
                    parent[rows + j] = u;
                    if col_left[j] > 0 {
                        sink_col = Some(j);
                        break;
                    }
                    queue.push(rows + j);
                }
            } else {
                let j = u - rows;
                for i in 0..rows {
                    if flow[i][j] > 0 && parent[i] == usize::MAX {
                        parent[i] = u;
                        queue.push(i);
                    }
                }
            }
        }
        let j_end = sink_col?;

        // bottleneck along the path
        let mut amount = col_left[j_end];
        let mut node = rows + j_end;
        loop {
            let p = parent[node];
            if node >= rows {
                node = p;
            } else if p == node {
                amount = amount.min(row_left[node]);
                break;
            } else {
                amount = amount.min(flow[node][p - rows]);
                node = p;
            }
        }
        let mut node = rows + j_end;
        loop {
            let p = parent[node];
            if node >= rows {
                flow[p][node - rows] += amount;
                node = p;
            } else if p == node {
                row_left[node] -= amount;
                break;
            } else {
                flow[node][p - rows] -= amount;
                node = p;
            }
        }
        col_left[j_end] -= amount;
    }
}

pub fn transport_feasible(row_sums: &[u32], col_sums: &[u32], adj: &[u64]) -> bool {
    transport_plan(row_sums, col_sums, adj).is_some()
}

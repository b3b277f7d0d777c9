use crate::error::{Error, Result};
use crate::model::{ActionVector, InstanceKind, InstanceSpec};

/// All actions of the instance in ascending lexicographic order.
///
/// Fails with [`Error::EnumerationLimit`] as soon as more than `limit` actions
/// exist; the output is never truncated.
pub fn enumerate_actions(spec: &InstanceSpec, limit: usize) -> Result<Vec<ActionVector>> {
    let mut out = Vec::new();
    match spec.kind() {
        InstanceKind::Transport { supplies, demands } => {
            let mut plan = vec![0u32; spec.dim()];
            let mut cols = demands.clone();
            let rows = supplies.clone();
            transport_rec(&rows, &mut cols, 0, rows[0], &mut plan, &mut out, limit)?;
        }
        InstanceKind::Knapsack { weights, capacity } => {
            let mut counts = vec![0u32; weights.len()];
            knapsack_rec(weights, 0, *capacity, &mut counts, &mut out, limit)?;
        }
        InstanceKind::Explicit { actions } => {
            if actions.len() > limit {
                return Err(Error::EnumerationLimit { limit });
            }
            out = actions.clone();
        }
    }
    Ok(out)
}

fn push(out: &mut Vec<ActionVector>, a: &[u32], limit: usize) -> Result<()> {
    if out.len() >= limit {
        return Err(Error::EnumerationLimit { limit });
    }
    out.push(ActionVector(a.to_vec()));
    Ok(())
}

/// Fills cells row-major; `row_left` is what row `cell / n` still has to ship.
fn transport_rec(
    rows: &[u32],
    cols: &mut [u32],
    cell: usize,
    row_left: u32,
    plan: &mut [u32],
    out: &mut Vec<ActionVector>,
    limit: usize,
) -> Result<()> {
    let n = cols.len();
    let m = rows.len();
    if cell == m * n {
        if cols.iter().all(|&c| c == 0) {
            push(out, plan, limit)?;
        }
        return Ok(());
    }
    let (i, j) = (cell / n, cell % n);
    let hi = row_left.min(cols[j]);
    let lo = if j == n - 1 { row_left } else { 0 };
    if lo > hi {
        return Ok(());
    }
    for q in lo..=hi {
        plan[cell] = q;
        cols[j] -= q;
        let next_left = if j == n - 1 {
            rows.get(i + 1).copied().unwrap_or(0)
        } else {
            row_left - q
        };
        transport_rec(rows, cols, cell + 1, next_left, plan, out, limit)?;
        cols[j] += q;
    }
    plan[cell] = 0;
    Ok(())
}

fn knapsack_rec(
    weights: &[u32],
    item: usize,
    left: u32,
    counts: &mut [u32],
    out: &mut Vec<ActionVector>,
    limit: usize,
) -> Result<()> {
    if item == weights.len() {
        return push(out, counts, limit);
    }
    for k in 0..=left / weights[item] {
        counts[item] = k;
        knapsack_rec(weights, item + 1, left - k * weights[item], counts, out, limit)?;
    }
    counts[item] = 0;
    Ok(())
}

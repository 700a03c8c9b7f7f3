//! Totalizer against the subset-enumeration encoding and against counting.

use std::collections::BTreeSet;

use setsat::cardinality::{
    build_totalizer, encode_cardinality_eq, naive_cardinality_eq, Totalizer,
};
use setsat::solver::enumerate_models;
use setsat::{ClauseSink, CnfFormula, Lit, VariableOrigin};

fn inputs(f: &mut CnfFormula, n: usize) -> Vec<Lit> {
    (0..n)
        .map(|_| f.new_var(VariableOrigin::Anonymous).pos())
        .collect()
}

/// Input assignments (as bitmasks) of every model.
fn projected(f: &CnfFormula, n: usize) -> BTreeSet<u32> {
    let mut out = BTreeSet::new();
    enumerate_models(f, |m| {
        let mask = (0..n)
            .filter(|&i| m.values()[i])
            .fold(0u32, |a, i| a | 1 << i);
        out.insert(mask);
        true
    });
    out
}

/// Totalizer and naive encodings of `|x| = k` agree with each other and with
/// the popcount, for `n <= max_n` and `k <= n + 1`.
pub fn equivalence(max_n: usize) -> Result<usize, String> {
    let mut cases = 0;
    for n in 1..=max_n {
        for k in 0..=n + 1 {
            let mut tot = CnfFormula::new();
            let xs = inputs(&mut tot, n);
            encode_cardinality_eq(&xs, k, 0, &mut tot);
            let mut naive = CnfFormula::new();
            let ys = inputs(&mut naive, n);
            naive_cardinality_eq(&ys, k, &mut naive).map_err(|e| e.to_string())?;
            let a = projected(&tot, n);
            let b = projected(&naive, n);
            let expected: BTreeSet<u32> = (0..1u32 << n)
                .filter(|m| m.count_ones() as usize == k)
                .collect();
            if a != b || a != expected {
                return Err(format!(
                    "n={n} k={k}: totalizer {} naive {} expected {} solutions",
                    a.len(),
                    b.len(),
                    expected.len()
                ));
            }
            if k == n + 1 && !a.is_empty() {
                return Err(format!("n={n} k={k} should be unsatisfiable"));
            }
            cases += 1;
        }
    }
    Ok(cases)
}

/// Leaves below each node, indexed by node id.
fn leaf_sets(tree: &Totalizer) -> Vec<Vec<Lit>> {
    let mut leaves: Vec<Vec<Lit>> = Vec::with_capacity(tree.nodes.len());
    for node in &tree.nodes {
        let l = match node.children {
            None => node.outputs.clone(),
            Some((a, b)) => [leaves[a].clone(), leaves[b].clone()].concat(),
        };
        leaves.push(l);
    }
    leaves
}

/// Every model of a bare totalizer has sorted outputs at each node whose
/// true prefix is the number of true leaves below it, and there is exactly
/// one model per input assignment.
pub fn monotone_counting(max_n: usize) -> Result<usize, String> {
    let mut models = 0;
    for n in 1..=max_n {
        let mut f = CnfFormula::new();
        let xs = inputs(&mut f, n);
        let tree = build_totalizer(&xs, 0, &mut f);
        let leaves = leaf_sets(&tree);
        let mut error = None;
        let count = enumerate_models(&f, |m| {
            for (node, below) in tree.nodes.iter().zip(&leaves) {
                let vals: Vec<bool> = node.outputs.iter().map(|&l| m.lit_value(l)).collect();
                if vals.windows(2).any(|w| !w[0] && w[1]) {
                    error = Some(format!(
                        "n={n}: node {} outputs not sorted: {vals:?}",
                        node.id
                    ));
                    return false;
                }
                let ones = vals.iter().filter(|&&v| v).count();
                let truth = below.iter().filter(|&&l| m.lit_value(l)).count();
                if ones != truth {
                    error = Some(format!(
                        "n={n}: node {} counts {ones}, leaves hold {truth}",
                        node.id
                    ));
                    return false;
                }
            }
            true
        });
        if let Some(e) = error {
            return Err(e);
        }
        if count != 1 << n {
            return Err(format!("n={n}: {count} models, expected {}", 1u64 << n));
        }
        models += count as usize;
    }
    Ok(models)
}

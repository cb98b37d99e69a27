use super::ProductDecomposition;
use crate::algebra::Polynomial;
use crate::error::{Error, Result};
use crate::formula::{gate_canonical_trees, is_upt, spine_cut, BinaryTree, Formula, Gate};

/// The gate realizing the node `j` steps down the right spine of the canonical
/// tree, following the first child at every addition gate.
fn spine_gate(f: &Formula, trees: &[Option<BinaryTree>], j: usize) -> usize {
    let mut g = f.root();
    let mut steps = j;
    loop {
        while let Gate::Add(es) = f.gate(g) {
            g = es[0].child;
        }
        if steps == 0 {
            return g;
        }
        let Gate::Mul(es) = f.gate(g) else {
            unreachable!("spine step below a leaf")
        };
        let (a, b) = (es[0].child, es[1].child);
        let tb = trees[b].as_ref().expect("UPT subformula");
        let ta = trees[a].as_ref().expect("UPT subformula");
        let joined = BinaryTree::node(ta.clone(), tb.clone()).canonical();
        g = if joined.right() == Some(tb) { b } else { a };
        steps -= 1;
    }
}

fn decompose(f: &Formula, out: &mut Vec<Vec<Polynomial>>) -> Result<()> {
    let trees = gate_canonical_trees(f)?;
    let t = trees[f.root()].clone().ok_or(Error::NotUpt)?;
    let Some((j, _)) = spine_cut(&t) else {
        let p = f.eval();
        if !p.is_zero() {
            out.push(vec![p]);
        }
        return Ok(());
    };
    let g = spine_gate(f, &trees, j);
    let (a, _, cg) = f.split_at_gate(g)?;
    if !a.is_zero() {
        let mut inner = Vec::new();
        decompose(&cg, &mut inner)?;
        for s in inner {
            let mut row = Vec::with_capacity(s.len() + 1);
            row.push(a.clone());
            row.extend(s);
            out.push(row);
        }
    }
    if let Some(rest) = f.replace_with_zero(g) {
        decompose(&rest, out)?;
    }
    Ok(())
}

/// `C = A_g·C_g + C_{g←0}` applied recursively at the spine gate chosen by the
/// degree sequence; every summand has the factor degrees of `Deg-seq(𝒯(C))`.
pub fn upt_log_product_decompose(f: &Formula) -> Result<ProductDecomposition> {
    let b = f.binarize();
    if is_upt(&b)?.is_none() {
        return Err(Error::NotUpt);
    }
    let mut summands = Vec::new();
    decompose(&b, &mut summands)?;
    Ok(ProductDecomposition {
        nvars: f.nvars(),
        summands,
        source_size: f.size(),
        normalized_size: b.size(),
    })
}

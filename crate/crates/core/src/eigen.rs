//! Hermitian eigensolver that exploits sparsity patterns.
//!
//! The coupling graph of the matrix (an edge wherever an off-diagonal entry
//! is nonzero) is split into connected components, each solved on its own.
//! A component whose graph is a tree is first made real by a diagonal phase
//! change `D† H D`, which leaves the eigenvalues untouched, and goes to the
//! real symmetric solver. Anything else goes to the dense complex solver.
//!
//! The circuit Hamiltonians only couple levels `n` and `n ± 2`, so they fall
//! apart into an even and an odd chain.

use faer::{c64, Mat, MatRef, Side};

use crate::error::{Error, Result};

/// One connected block of the coupling graph.
#[derive(Clone, Debug)]
struct Component {
    indices: Vec<usize>,
    /// `Some(theta)` when the block is a tree, with the phases that make it real.
    phases: Option<Vec<f64>>,
}

fn components(h: MatRef<'_, c64>) -> Vec<Component> {
    let n = h.nrows();
    let mut neighbours = vec![Vec::new(); n];
    for j in 0..n {
        for i in (j + 1)..n {
            if h[(i, j)] != c64::new(0.0, 0.0) {
                neighbours[i].push(j);
                neighbours[j].push(i);
            }
        }
    }

    let mut seen = vec![false; n];
    let mut theta = vec![0.0; n];
    let mut out = Vec::new();
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut indices = vec![root];
        let mut edges = 0usize;
        let mut head = 0;
        while head < indices.len() {
            let u = indices[head];
            head += 1;
            for &v in &neighbours[u] {
                edges += 1;
                if !seen[v] {
                    seen[v] = true;
                    // makes e^{-iθ_u} H_uv e^{iθ_v} real and positive
                    theta[v] = theta[u] - h[(u, v)].arg();
                    indices.push(v);
                }
            }
        }
        let tree = edges / 2 + 1 == indices.len();
        indices.sort_unstable();
        let phases = tree.then(|| indices.iter().map(|&i| theta[i]).collect());
        out.push(Component { indices, phases });
    }
    out
}

impl Component {
    /// `D† H D` on a tree block: every edge becomes `|H_ab|`.
    fn real_block(&self, h: MatRef<'_, c64>) -> Mat<f64> {
        let idx = &self.indices;
        Mat::from_fn(idx.len(), idx.len(), |a, b| {
            let z = h[(idx[a], idx[b])];
            if a == b {
                z.re
            } else {
                z.norm()
            }
        })
    }

    fn complex_block(&self, h: MatRef<'_, c64>) -> Mat<c64> {
        let idx = &self.indices;
        Mat::from_fn(idx.len(), idx.len(), |a, b| h[(idx[a], idx[b])])
    }
}

/// Eigenvalues of every component, merged in ascending order.
pub fn eigenvalues(h: MatRef<'_, c64>) -> Result<Vec<f64>> {
    let dim = h.nrows();
    let mut all = Vec::with_capacity(dim);
    for comp in components(h) {
        let values = match &comp.phases {
            Some(_) => comp.real_block(h).self_adjoint_eigenvalues(Side::Lower),
            None => comp.complex_block(h).self_adjoint_eigenvalues(Side::Lower),
        }
        .map_err(|_| Error::EigenSolver { dim })?;
        all.extend(values);
    }
    all.sort_by(f64::total_cmp);
    Ok(all)
}

/// Eigenvalues (ascending) and the matching eigenvectors as columns.
pub fn eigen(h: MatRef<'_, c64>) -> Result<(Vec<f64>, Mat<c64>)> {
    let dim = h.nrows();
    // (eigenvalue, component, column within component)
    let mut order: Vec<(f64, usize, usize)> = Vec::with_capacity(dim);
    let mut blocks: Vec<(Component, Mat<c64>)> = Vec::new();
    for comp in components(h) {
        let (values, vectors) = match &comp.phases {
            Some(p) => {
                let evd = comp
                    .real_block(h)
                    .self_adjoint_eigen(Side::Lower)
                    .map_err(|_| Error::EigenSolver { dim })?;
                let u = evd.U();
                let vectors = Mat::from_fn(u.nrows(), u.ncols(), |a, k| c64::cis(p[a]) * u[(a, k)]);
                let s = evd.S();
                ((0..u.ncols()).map(|k| s[k]).collect::<Vec<_>>(), vectors)
            }
            None => {
                let evd = comp
                    .complex_block(h)
                    .self_adjoint_eigen(Side::Lower)
                    .map_err(|_| Error::EigenSolver { dim })?;
                let s = evd.S();
                let u = evd.U();
                ((0..u.ncols()).map(|k| s[k].re).collect(), u.to_owned())
            }
        };
        let b = blocks.len();
        order.extend(values.into_iter().enumerate().map(|(k, e)| (e, b, k)));
        blocks.push((comp, vectors));
    }
    order.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));

    let mut vectors = Mat::<c64>::zeros(dim, dim);
    for (col, &(_, b, k)) in order.iter().enumerate() {
        let (comp, v) = &blocks[b];
        for (a, &i) in comp.indices.iter().enumerate() {
            vectors[(i, col)] = v[(a, k)];
        }
    }
    Ok((order.into_iter().map(|(e, _, _)| e).collect(), vectors))
}

#![allow(dead_code)]

use std::collections::HashSet;

use radlayer::algebra::evaluate_word;
use radlayer::exactmat::{Field, Matrix};
use radlayer::{DimVec3, Representation};

/// Whether `(d1, d2)` is a nonnegative integer combination of
/// `(1,0),…,(1,n−1),(2,2n−1),…,(n,n²−1)`, by plain recursion with memo.
pub fn is_root_combination(n: usize, d1: usize, d2: usize) -> bool {
    let mut gens = Vec::new();
    for j in 0..n {
        gens.push((1, j));
    }
    for k in 2..=n {
        gens.push((k, k * n - 1));
    }
    fn go(gens: &[(usize, usize)], d1: usize, d2: usize, seen: &mut HashSet<(usize, usize)>) -> bool {
        if (d1, d2) == (0, 0) {
            return true;
        }
        if !seen.insert((d1, d2)) {
            return false;
        }
        gens.iter().any(|&(a, b)| a <= d1 && b <= d2 && go(gens, d1 - a, d2 - b, seen))
    }
    go(&gens, d1, d2, &mut HashSet::new())
}

/// The four inequalities of a regular component.
pub fn passes_component_inequalities(n: usize, d: DimVec3) -> bool {
    d.d1 <= n * d.d0 && d.d1 <= n * d.d2 && d.d2 + d.d0 <= n * d.d1
}

/// Dimension of the space of all `(N_f)` with `Σ c·g(M′)·N_x = 0` for every
/// relation, by writing out the whole linear system in the entries of the
/// `N_f` and taking its nullity.
pub fn fiber_kernel_oracle<F: Field>(mprime: &Representation<F>, d0: &[usize]) -> usize {
    let pres = mprime.presentation();
    let q = pres.quiver();
    let f = mprime.field();
    let dims = mprime.dims();
    // unknown (arrow, row, col) ↦ column index
    let mut unknowns = Vec::new();
    for (x, arr) in q.arrows().iter().enumerate() {
        for r in 0..dims[arr.target] {
            for c in 0..d0[arr.source] {
                unknowns.push((x, r, c));
            }
        }
    }
    let mut equations: Vec<Vec<F::Elem>> = Vec::new();
    for rel in pres.relations() {
        let (h, w) = (dims[rel.target()], d0[rel.source()]);
        let mut images: Vec<Matrix<F>> = Vec::new();
        for &(x, r, c) in &unknowns {
            let mut out = Matrix::zeros(f, h, w);
            for t in rel.terms().iter().filter(|t| t.last == x) {
                let g = evaluate_word(pres, dims, mprime.arrow_matrices(), &t.prefix).unwrap();
                let unit = Matrix::unit(f, dims[q.arrow(x).target], w, r, c);
                out = out.add(&g.mul(&unit).scale(&t.coeff));
            }
            images.push(out);
        }
        for i in 0..h {
            for j in 0..w {
                equations.push(images.iter().map(|m| m.get(i, j).clone()).collect());
            }
        }
    }
    let cols = unknowns.len();
    let entries: Vec<F::Elem> = equations.into_iter().flatten().collect();
    let rows = if cols == 0 { 0 } else { entries.len() / cols };
    let system = Matrix::from_elems(f, rows, cols, entries).unwrap();
    cols - system.rank()
}

/// The closed form for the local family: `(n(d1+d2) − d2)·d0`.
pub fn local_fiber_formula(n: usize, d: DimVec3) -> usize {
    (n * (d.d1 + d.d2) - d.d2) * d.d0
}

//! Seeded random instances for property tests and benches: valid bounded
//! complexes with known cohomology, random chain maps, and random closed
//! maps. Every bounded complex over a field splits into spheres and discs,
//! so conjugating such a sum by graded automorphisms reaches every
//! isomorphism class while the construction keeps the cohomology on record.

use std::collections::BTreeMap;

use rand::rngs::StdRng;
use rand::Rng;

use crate::complex::{Complex, ChainMap};
use crate::field::{FieldSpec, Scalar};
use crate::linalg::{kernel_basis, rank, Matrix};

pub fn random_scalar(field: FieldSpec, rng: &mut StdRng) -> Scalar {
    field.from_i64(rng.gen_range(-3i64..=3))
}

pub fn random_matrix(field: FieldSpec, rows: usize, cols: usize, rng: &mut StdRng) -> Matrix {
    let mut m = Matrix::zero(field, rows, cols);
    for r in 0..rows {
        for c in 0..cols {
            m.set(r, c, random_scalar(field, rng));
        }
    }
    m
}

fn random_invertible(field: FieldSpec, n: usize, rng: &mut StdRng) -> Matrix {
    loop {
        let m = random_matrix(field, n, n, rng);
        if rank(&m) == n {
            return m;
        }
    }
}

fn invert(field: FieldSpec, m: &Matrix) -> Matrix {
    let n = m.rows();
    let cols: Vec<Vec<Scalar>> = (0..n)
        .map(|r| {
            let mut e = vec![field.zero(); n];
            e[r] = field.one();
            crate::linalg::solve(m, &e).expect("matrix is invertible")
        })
        .collect();
    Matrix::from_columns(field, &cols, n)
}

/// A random valid bounded complex in degrees [lo, hi] together with its
/// cohomology dimensions (the sphere counts used to build it).
pub fn random_complex(
    field: FieldSpec,
    lo: i32,
    hi: i32,
    max_rank: usize,
    rng: &mut StdRng,
) -> (Complex, BTreeMap<i32, usize>) {
    let mut spheres: BTreeMap<i32, usize> = BTreeMap::new();
    let mut discs: BTreeMap<i32, usize> = BTreeMap::new(); // disc from d to d+1
    for d in lo..=hi {
        spheres.insert(d, rng.gen_range(0..=max_rank));
        if d < hi {
            discs.insert(d, rng.gen_range(0..=max_rank));
        }
    }
    // components: spheres at d plus disc bottoms at d plus disc tops at d
    let dim_at = |d: i32| -> usize {
        spheres.get(&d).copied().unwrap_or(0)
            + discs.get(&d).copied().unwrap_or(0)
            + discs.get(&(d - 1)).copied().unwrap_or(0)
    };
    let mut components = BTreeMap::new();
    for d in lo..=hi {
        let n = dim_at(d);
        if n > 0 {
            components.insert(d, n);
        }
    }
    // block differential: disc bottoms at d map identically onto disc tops
    // at d+1; order basis as [spheres | bottoms(d) | tops(d-1)]
    let mut differentials = BTreeMap::new();
    for d in lo..hi {
        let rows = dim_at(d + 1);
        let cols = dim_at(d);
        if rows == 0 || cols == 0 {
            continue;
        }
        let s = spheres.get(&d).copied().unwrap_or(0);
        let b = discs.get(&d).copied().unwrap_or(0);
        let s_next = spheres.get(&(d + 1)).copied().unwrap_or(0);
        let b_next = discs.get(&(d + 1)).copied().unwrap_or(0);
        let mut m = Matrix::zero(field, rows, cols);
        for k in 0..b {
            m.set(s_next + b_next + k, s + k, field.one());
        }
        differentials.insert(d, m);
    }
    // conjugate by random automorphisms: d' = P_{d+1} d P_d^{-1}
    let autos: BTreeMap<i32, Matrix> = components
        .iter()
        .map(|(&d, &n)| (d, random_invertible(field, n, rng)))
        .collect();
    let differentials = differentials
        .into_iter()
        .map(|(d, m)| {
            let p_next = &autos[&(d + 1)];
            let p_inv = invert(field, &autos[&d]);
            (d, p_next.mul(&m).unwrap().mul(&p_inv).unwrap())
        })
        .collect();
    let c = Complex::new(field, components, differentials).expect("constructed to be valid");
    let cohomology = spheres.into_iter().filter(|&(_, n)| n > 0).collect();
    (c, cohomology)
}

/// A uniformly random graded map of the given degree.
pub fn random_chain_map(
    source: &Complex,
    target: &Complex,
    degree: i32,
    rng: &mut StdRng,
) -> ChainMap {
    let field = source.field;
    let components = source
        .support()
        .map(|n| {
            (
                n,
                random_matrix(field, target.dim(n + degree), source.dim(n), rng),
            )
        })
        .collect();
    ChainMap::new(source.clone(), target.clone(), degree, components)
        .expect("shapes are consistent")
}

/// A random closed degree-0 chain map: a random combination of a kernel
/// basis of the Hom-complex differential.
pub fn random_closed_map(source: &Complex, target: &Complex, rng: &mut StdRng) -> ChainMap {
    let field = source.field;
    let (hom, basis) = crate::complex::hom_complex(source, target);
    let z = kernel_basis(&hom.differential(0));
    let mut coords = vec![field.zero(); hom.dim(0)];
    for v in z.basis() {
        let c = random_scalar(field, rng);
        for (t, x) in coords.iter_mut().zip(v) {
            *t = field.add(t, &field.mul(&c, x));
        }
    }
    basis.map_of(0, &coords)
}

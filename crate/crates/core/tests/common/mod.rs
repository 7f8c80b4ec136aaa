#![allow(dead_code)]

use powroot_core::{Field, GroupSpec, Matrix, TriangularGroup};

pub struct Named {
    pub name: &'static str,
    pub group: TriangularGroup,
}

pub fn fp(p: u64) -> Field {
    Field::prime(p).unwrap()
}

pub fn diag(field: Field, d: &[i64]) -> Matrix {
    Matrix::diagonal_matrix(field, &d.iter().map(|&x| field.from_i64(x)).collect::<Vec<_>>())
}

/// `I + E_ij` (0-based).
pub fn elem(field: Field, n: usize, i: usize, j: usize) -> Matrix {
    let mut m = Matrix::identity(field, n);
    m.set(i, j, field.one());
    m
}

pub fn strict(field: Field, n: usize, i: usize, j: usize) -> Matrix {
    let mut m = Matrix::zeros(field, n, n);
    m.set(i, j, field.one());
    m
}

fn build(name: &'static str, p: u64, n: usize, diags: &[&[i64]], unis: &[(usize, usize)], extra: Vec<Matrix>) -> Named {
    let f = fp(p);
    let mut generators: Vec<Matrix> = diags.iter().map(|d| diag(f, d)).collect();
    generators.extend(unis.iter().map(|&(i, j)| elem(f, n, i, j)));
    generators.extend(extra);
    let spec = GroupSpec { field: f, dim: n, generators, lie_algebra: None, cap: Some(20_000) };
    let group = spec.validate().unwrap_or_else(|e| panic!("{name}: {e}"));
    Named { name, group }
}

const HEIS: &[(usize, usize)] = &[(0, 1), (1, 2)];
const COL3: &[(usize, usize)] = &[(0, 2), (1, 2)];
const U4: &[(usize, usize)] = &[(0, 1), (1, 2), (2, 3)];

/// Finite triangular groups with |G| ≤ 10⁴ over F_3, F_5, F_7 and F_11.
pub fn finite_corpus() -> Vec<Named> {
    let f5 = fp(5);
    let f7 = fp(7);
    vec![
        build("g5", 5, 3, &[&[4, 2, 1]], COL3, vec![]),
        // n = 2
        build("aff3", 3, 2, &[&[2, 1]], &[(0, 1)], vec![]),
        build("aff5", 5, 2, &[&[2, 1]], &[(0, 1)], vec![]),
        build("aff5-sign", 5, 2, &[&[4, 1]], &[(0, 1)], vec![]),
        build("aff7-mixed", 7, 2, &[&[3, 5]], &[(0, 1)], vec![]),
        build("aff11", 11, 2, &[&[2, 1]], &[(0, 1)], vec![]),
        build("aff11-scalar", 11, 2, &[&[10, 10]], &[(0, 1)], vec![]),
        build("torus7", 7, 2, &[&[2, 4]], &[], vec![]),
        // n = 3, abelian N in the last column
        build("col3", 3, 3, &[&[2, 2, 1]], COL3, vec![]),
        build("col7", 7, 3, &[&[3, 2, 1]], COL3, vec![]),
        build("col11", 11, 3, &[&[2, 4, 1]], COL3, vec![]),
        build("col5-two-tori", 5, 3, &[&[4, 1, 1], &[1, 2, 1]], COL3, vec![]),
        build("col7-flip", 7, 3, &[&[6, 1, 1]], COL3, vec![]),
        // n = 3, abelian N in the first row
        build("row5", 5, 3, &[&[1, 2, 3]], &[(0, 1), (0, 2)], vec![]),
        build("row11", 11, 3, &[&[1, 3, 9]], &[(0, 1), (0, 2)], vec![]),
        // n = 3, Heisenberg N
        build("heis3", 3, 3, &[], HEIS, vec![]),
        build("heis3-t", 3, 3, &[&[2, 1, 1]], HEIS, vec![]),
        build("heis5-t", 5, 3, &[&[2, 1, 1]], HEIS, vec![]),
        build("heis5-mixed", 5, 3, &[&[2, 3, 1]], HEIS, vec![]),
        build("heis5-scalar", 5, 3, &[&[4, 4, 4]], HEIS, vec![]),
        build("heis7-t", 7, 3, &[&[3, 1, 1]], HEIS, vec![]),
        build("heis7-mid", 7, 3, &[&[1, 6, 1]], HEIS, vec![]),
        build("heis11", 11, 3, &[], HEIS, vec![]),
        build("heis11-flip", 11, 3, &[&[10, 1, 1]], HEIS, vec![]),
        build("heis5-two-tori", 5, 3, &[&[2, 1, 1], &[1, 1, 2]], HEIS, vec![]),
        // n = 3, other shapes
        build("line7", 7, 3, &[&[2, 1, 3]], &[(0, 1)], vec![]),
        build(
            "jordan7",
            7,
            3,
            &[&[2, 2, 2]],
            &[],
            vec![Matrix::from_i64(f7, &[&[1, 1, 0], &[0, 1, 1], &[0, 0, 1]])],
        ),
        build(
            "skew5",
            5,
            3,
            &[],
            COL3,
            vec![Matrix::from_i64(f5, &[&[2, 1, 0], &[0, 3, 0], &[0, 0, 1]])],
        ),
        // n = 4
        build("u4-3", 3, 4, &[], U4, vec![]),
        build("u4-3-t", 3, 4, &[&[2, 1, 1, 1]], U4, vec![]),
        build("u4-3-alt", 3, 4, &[&[2, 1, 2, 1]], U4, vec![]),
        build("col4-5", 5, 4, &[&[2, 3, 4, 1]], &[(0, 3), (1, 3), (2, 3)], vec![]),
        build("col4-7", 7, 4, &[&[3, 5, 1, 1]], &[(0, 3), (1, 3), (2, 3)], vec![]),
        build("split4-5", 5, 4, &[&[2, 1, 3, 1]], &[(0, 1), (2, 3)], vec![]),
        build("corner4-11", 11, 4, &[&[2, 1, 1, 1]], &[(0, 3)], vec![]),
        build("heis4-3", 3, 4, &[&[2, 2, 1, 1]], &[(0, 1), (1, 3)], vec![]),
        build("block4-5", 5, 4, &[&[2, 1, 1, 1]], &[(0, 2), (1, 3), (0, 3)], vec![]),
    ]
}

/// Admissible exponents up to 6 for a characteristic.
pub fn admissible_ks(p: u64) -> Vec<u64> {
    (1..=6).filter(|k| k % p != 0).collect()
}

//! Fixtures shared by the benchmarks.

use powroot_core::{Field, GroupSpec, IntMatrix, Matrix, TriangularGroup};

fn matrix(field: Field, rows: &[&[i64]]) -> Matrix {
    let n = rows.len();
    let data = rows.iter().flat_map(|r| r.iter().map(|&v| field.from_i64(v))).collect();
    Matrix::new(field, n, n, data).expect("square")
}

/// `F_5`, n = 3: `diag(4,2,1)` acting on the two translations `I+E13`, `I+E23`.
pub fn g5() -> TriangularGroup {
    let f = Field::prime(5).unwrap();
    let generators = vec![
        matrix(f, &[&[4, 0, 0], &[0, 2, 0], &[0, 0, 1]]),
        matrix(f, &[&[1, 0, 1], &[0, 1, 0], &[0, 0, 1]]),
        matrix(f, &[&[1, 0, 0], &[0, 1, 1], &[0, 0, 1]]),
    ];
    GroupSpec { field: f, dim: 3, generators, lie_algebra: None, cap: Some(20_000) }.validate().unwrap()
}

/// Full upper unitriangular group of size 4 over `F_p` with a diagonal torus element.
pub fn unitriangular4(p: u64) -> TriangularGroup {
    let f = Field::prime(p).unwrap();
    let mut generators = Vec::new();
    for i in 0..3 {
        let mut rows = vec![vec![0i64; 4]; 4];
        for (d, row) in rows.iter_mut().enumerate() {
            row[d] = 1;
        }
        rows[i][i + 1] = 1;
        let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
        generators.push(matrix(f, &refs));
    }
    generators.push(matrix(f, &[&[2, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]));
    GroupSpec { field: f, dim: 4, generators, lie_algebra: None, cap: Some(200_000) }.validate().unwrap()
}

/// Rational Heisenberg group with torus `diag(4,9,1)` and `diag(-1,1,1)`.
pub fn heisenberg_q() -> TriangularGroup {
    let q = Field::Rational;
    let e = |i: usize, j: usize| {
        let mut rows = vec![vec![0i64; 3]; 3];
        rows[i][j] = 1;
        let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
        matrix(q, &refs)
    };
    let generators = vec![
        matrix(q, &[&[4, 0, 0], &[0, 9, 0], &[0, 0, 1]]),
        matrix(q, &[&[-1, 0, 0], &[0, 1, 0], &[0, 0, 1]]),
    ];
    GroupSpec { field: q, dim: 3, generators, lie_algebra: Some(vec![e(0, 1), e(1, 2), e(0, 2)]), cap: None }
        .validate()
        .unwrap()
}

/// Deterministic pseudo-random integer matrix with entries in `[-bound, bound]`.
pub fn int_matrix(rows: usize, cols: usize, bound: i64, seed: u64) -> IntMatrix {
    let mut s = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    let mut m = IntMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let v = ((s >> 33) % (2 * bound as u64 + 1)) as i64 - bound;
            m.set(i, j, v.into());
        }
    }
    m
}

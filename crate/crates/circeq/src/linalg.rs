//! Exact integer row lattices: Hermite normal form and span membership.
//!
//! The verification of the permuted linear systems needs, for a small integer
//! matrix, (a) whether a target vector lies in the rational row span, (b) the
//! minimal positive integer `d` such that `d·t` lies in the integer row
//! lattice, and (c) membership in the lattice itself. All three reduce to
//! expressing the target over a Hermite-basis of the lattice: the basis rows
//! are independent with strictly increasing pivots, so the rational
//! representation is unique and its denominator lcm is exactly that minimal
//! `d`.

use crate::coeff::IntCoeff;
use num_rational::Ratio;
use num_traits::Zero;

/// Row-style Hermite normal form of the lattice spanned by `rows`.
///
/// Returns a basis of independent rows with strictly increasing pivot
/// columns, positive pivots, and entries above each pivot reduced into
/// `[0, pivot)`. Zero rows are dropped, so the result has full row rank.
pub fn hnf_rows<T: IntCoeff>(mut rows: Vec<Vec<T>>) -> Vec<Vec<T>> {
    if rows.is_empty() {
        return rows;
    }
    let width = rows[0].len();
    assert!(rows.iter().all(|r| r.len() == width), "ragged matrix");
    let mut basis: Vec<Vec<T>> = Vec::new();
    let mut col = 0;
    let mut start = 0;
    while col < width && start < rows.len() {
        // Zero out column `col` below `start` with gcd row operations.
        loop {
            let mut pivot: Option<usize> = None;
            for (i, row) in rows.iter().enumerate().skip(start) {
                if !row[col].is_zero()
                    && pivot.is_none_or(|p| row[col].abs() < rows[p][col].abs())
                {
                    pivot = Some(i);
                }
            }
            let Some(p) = pivot else { break };
            rows.swap(start, p);
            let mut done = true;
            for i in (start + 1)..rows.len() {
                if rows[i][col].is_zero() {
                    continue;
                }
                let q = num_integer::Integer::div_floor(&rows[i][col], &rows[start][col]);
                for j in col..width {
                    let sub = q.clone() * rows[start][j].clone();
                    rows[i][j] -= &sub;
                }
                if !rows[i][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if !rows[start][col].is_zero() {
            if rows[start][col].is_negative() {
                for x in rows[start].iter_mut() {
                    *x = -x.clone();
                }
            }
            basis.push(rows[start].clone());
            start += 1;
        }
        col += 1;
    }
    // Reduce entries above each pivot into [0, pivot). Forward order: once
    // column p_i is clean, later reductions only touch columns right of it.
    for i in 0..basis.len() {
        let pivot_col = basis[i].iter().position(|x| !x.is_zero()).expect("nonzero row");
        for j in 0..i {
            let q = num_integer::Integer::div_floor(&basis[j][pivot_col], &basis[i][pivot_col]);
            if q.is_zero() {
                continue;
            }
            for c in 0..width {
                let sub = q.clone() * basis[i][c].clone();
                basis[j][c] -= &sub;
            }
        }
    }
    basis
}

/// Express `target` over a Hermite basis, if it lies in the rational row
/// span. The representation is unique because the basis rows are independent;
/// the coefficients come back in basis order.
pub fn express_in_rowspan<T: IntCoeff>(
    basis: &[Vec<T>],
    target: &[T],
) -> Option<Vec<Ratio<T>>> {
    let mut residual: Vec<Ratio<T>> =
        target.iter().map(|x| Ratio::from_integer(x.clone())).collect();
    let mut coeffs = Vec::with_capacity(basis.len());
    for row in basis {
        let pivot_col = row.iter().position(|x| !x.is_zero()).expect("basis rows are nonzero");
        let c = residual[pivot_col].clone() / Ratio::from_integer(row[pivot_col].clone());
        if !c.is_zero() {
            for (r, x) in residual.iter_mut().zip(row) {
                let sub = c.clone() * Ratio::from_integer(x.clone());
                *r = r.clone() - sub;
            }
        }
        coeffs.push(c);
    }
    if residual.iter().all(|x| x.is_zero()) {
        Some(coeffs)
    } else {
        None
    }
}

/// Least positive `d` with `d·target` in the integer lattice of `basis`, or
/// `None` when the target is outside the rational span. `Some(1)` means
/// lattice membership.
pub fn minimal_denominator<T: IntCoeff>(basis: &[Vec<T>], target: &[T]) -> Option<T> {
    let coeffs = express_in_rowspan(basis, target)?;
    let mut d = T::one();
    for c in &coeffs {
        d = num_integer::Integer::lcm(&d, c.denom());
    }
    Some(d)
}

/// Is `target` in the integer row lattice of `basis`?
pub fn in_lattice<T: IntCoeff>(basis: &[Vec<T>], target: &[T]) -> bool {
    minimal_denominator(basis, target).is_some_and(|d| d.is_one())
}

/// Integer basis of the orthogonal complement of the row space of `rows`.
///
/// A vector lies in the rational row span exactly when it is orthogonal to
/// every returned vector, which makes this a cheap span-membership filter:
/// the dot products are integer arithmetic, no rational solve needed.
pub fn row_space_kernel<T: IntCoeff>(rows: &[Vec<T>]) -> Vec<Vec<T>> {
    let width = match rows.first() {
        Some(r) => r.len(),
        None => return Vec::new(),
    };
    let mut mat: Vec<Vec<Ratio<T>>> = rows
        .iter()
        .map(|r| r.iter().map(|x| Ratio::from_integer(x.clone())).collect())
        .collect();
    // reduced row echelon form, tracking pivot columns
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut r = 0usize;
    for col in 0..width {
        let Some(p) = (r..mat.len()).find(|&i| !mat[i][col].is_zero()) else {
            continue;
        };
        mat.swap(r, p);
        let inv = mat[r][col].clone();
        for x in mat[r].iter_mut() {
            *x = x.clone() / inv.clone();
        }
        for i in 0..mat.len() {
            if i != r && !mat[i][col].is_zero() {
                let f = mat[i][col].clone();
                for c in 0..width {
                    let sub = f.clone() * mat[r][c].clone();
                    mat[i][c] = mat[i][c].clone() - sub;
                }
            }
        }
        pivot_cols.push(col);
        r += 1;
        if r == mat.len() {
            break;
        }
    }
    let mut kernel = Vec::new();
    for free in 0..width {
        if pivot_cols.contains(&free) {
            continue;
        }
        // rational kernel vector: 1 at the free column, -entry at pivots
        let mut v: Vec<Ratio<T>> = vec![Ratio::from_integer(T::zero()); width];
        v[free] = Ratio::from_integer(T::one());
        for (row, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = Ratio::from_integer(T::zero()) - mat[row][free].clone();
        }
        let mut scale = T::one();
        for x in &v {
            scale = num_integer::Integer::lcm(&scale, x.denom());
        }
        let scaled: Vec<T> = v
            .iter()
            .map(|x| x.numer().clone() * (scale.clone() / x.denom().clone()))
            .collect();
        kernel.push(scaled);
    }
    kernel
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Int;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn m(rows: &[&[i64]]) -> Vec<Vec<i64>> {
        rows.iter().map(|r| r.to_vec()).collect()
    }

    #[test]
    fn hnf_of_simple_lattices() {
        // already-diagonal input is unchanged
        assert_eq!(hnf_rows(m(&[&[2, 0], &[0, 3]])), m(&[&[2, 0], &[0, 3]]));
        // dependent rows collapse
        assert_eq!(hnf_rows(m(&[&[1, 2], &[2, 4]])), m(&[&[1, 2]]));
        // gcd appears: rows (2,0) and (3,0) generate (1,0)
        assert_eq!(hnf_rows(m(&[&[2, 0], &[3, 0]])), m(&[&[1, 0]]));
        // zero matrix collapses to nothing
        assert!(hnf_rows(m(&[&[0, 0], &[0, 0]])).is_empty());
        // negative pivots are normalized positive
        assert_eq!(hnf_rows(m(&[&[-2, 1]])), m(&[&[2, -1]]));
    }

    #[test]
    fn hnf_is_in_hermite_shape() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..200 {
            let rows = rng.gen_range(1..=5usize);
            let cols = rng.gen_range(1..=5usize);
            let mat: Vec<Vec<i64>> = (0..rows)
                .map(|_| (0..cols).map(|_| rng.gen_range(-6..=6i64)).collect())
                .collect();
            let h = hnf_rows(mat);
            let mut last_pivot: Option<usize> = None;
            for row in &h {
                let p = row.iter().position(|&x| x != 0).expect("no zero rows");
                assert!(last_pivot.is_none_or(|lp| p > lp), "pivots increase");
                assert!(row[p] > 0, "pivot positive");
                last_pivot = Some(p);
            }
            // entries above a pivot are reduced
            for (i, row_i) in h.iter().enumerate() {
                let p = row_i.iter().position(|&x| x != 0).unwrap();
                for row_j in h.iter().take(i) {
                    assert!(0 <= row_j[p] && row_j[p] < row_i[p], "reduced above pivot");
                }
            }
        }
    }

    #[test]
    fn hnf_preserves_the_lattice() {
        let mut rng = StdRng::seed_from_u64(23);
        for _ in 0..200 {
            let rows = rng.gen_range(1..=4usize);
            let cols = rng.gen_range(1..=4usize);
            let mat: Vec<Vec<i64>> = (0..rows)
                .map(|_| (0..cols).map(|_| rng.gen_range(-5..=5i64)).collect())
                .collect();
            let h = hnf_rows(mat.clone());
            // every original row lies in the lattice of the basis
            for row in &mat {
                assert!(in_lattice(&h, row), "{mat:?} -> {h:?}");
            }
            // and every basis row is an integer combination of original rows,
            // verified through the HNF of the originals (same lattice, same HNF)
            let h2 = hnf_rows(h.clone());
            assert_eq!(h, h2, "HNF is idempotent");
            // random integer combinations of the originals are in the lattice
            for _ in 0..5 {
                let mut combo = vec![0i64; cols];
                for row in &mat {
                    let c = rng.gen_range(-3..=3i64);
                    for (x, &v) in combo.iter_mut().zip(row) {
                        *x += c * v;
                    }
                }
                assert!(in_lattice(&h, &combo));
            }
        }
    }

    #[test]
    fn span_membership_and_denominators() {
        // lattice 2Z x 3Z inside Z²
        let basis = hnf_rows(m(&[&[2, 0], &[0, 3]]));
        assert_eq!(minimal_denominator(&basis, &[1, 0]), Some(2));
        assert_eq!(minimal_denominator(&basis, &[0, 1]), Some(3));
        assert_eq!(minimal_denominator(&basis, &[1, 1]), Some(6));
        assert_eq!(minimal_denominator(&basis, &[2, 3]), Some(1));
        assert!(in_lattice(&basis, &[4, -3]));
        assert!(!in_lattice(&basis, &[1, 0]));

        // rank-deficient: span of (1, 1) only
        let basis = hnf_rows(m(&[&[1, 1]]));
        assert_eq!(express_in_rowspan(&basis, &[3, 3]).unwrap().len(), 1);
        assert!(express_in_rowspan(&basis, &[1, 0]).is_none());
        assert_eq!(minimal_denominator(&basis, &[1, 0]), None);
    }

    #[test]
    fn expression_reproduces_target() {
        let mut rng = StdRng::seed_from_u64(37);
        for _ in 0..200 {
            let rows = rng.gen_range(1..=4usize);
            let cols = rng.gen_range(2..=5usize);
            let mat: Vec<Vec<i64>> = (0..rows)
                .map(|_| (0..cols).map(|_| rng.gen_range(-4..=4i64)).collect())
                .collect();
            let basis = hnf_rows(mat);
            if basis.is_empty() {
                continue;
            }
            // build a rational combination, then recover it
            let coeffs: Vec<num_rational::Rational64> = (0..basis.len())
                .map(|_| num_rational::Rational64::new(rng.gen_range(-6..=6), rng.gen_range(1..=4)))
                .collect();
            let target_rat: Vec<num_rational::Rational64> = (0..cols)
                .map(|j| {
                    coeffs
                        .iter()
                        .zip(&basis)
                        .map(|(c, row)| *c * num_rational::Rational64::from_integer(row[j]))
                        .sum()
                })
                .collect();
            // scale to integers
            let scale = target_rat
                .iter()
                .fold(1i64, |acc, r| num_integer::lcm(acc, *r.denom()));
            let target: Vec<i64> =
                target_rat.iter().map(|r| (*r * num_rational::Rational64::from_integer(scale)).to_integer()).collect();
            let got = express_in_rowspan(&basis, &target).expect("in span by construction");
            let scaled: Vec<num_rational::Rational64> = coeffs
                .iter()
                .map(|c| *c * num_rational::Rational64::from_integer(scale))
                .collect();
            assert_eq!(got, scaled);
        }
    }

    #[test]
    fn i64_and_bigint_routes_agree() {
        let mut rng = StdRng::seed_from_u64(53);
        for _ in 0..100 {
            let rows = rng.gen_range(1..=4usize);
            let cols = rng.gen_range(1..=4usize);
            let mat: Vec<Vec<i64>> = (0..rows)
                .map(|_| (0..cols).map(|_| rng.gen_range(-8..=8i64)).collect())
                .collect();
            let big: Vec<Vec<Int>> = mat
                .iter()
                .map(|r| r.iter().map(|&x| Int::from(x)).collect())
                .collect();
            let h_small = hnf_rows(mat.clone());
            let h_big = hnf_rows(big);
            let widened: Vec<Vec<Int>> = h_small
                .iter()
                .map(|r| r.iter().map(|&x| Int::from(x)).collect())
                .collect();
            assert_eq!(h_big, widened);
            let target: Vec<i64> = (0..cols).map(|_| rng.gen_range(-8..=8i64)).collect();
            let target_big: Vec<Int> = target.iter().map(|&x| Int::from(x)).collect();
            let d_small = minimal_denominator(&h_small, &target);
            let d_big = minimal_denominator(&h_big, &target_big);
            assert_eq!(d_small.map(Int::from), d_big);
        }
    }

    /// The minimal denominator is genuinely minimal: no smaller positive
    /// multiple of the target lands in the lattice.
    #[test]
    fn minimal_denominator_is_minimal() {
        let mut rng = StdRng::seed_from_u64(71);
        for _ in 0..100 {
            let rows = rng.gen_range(1..=3usize);
            let cols = rng.gen_range(1..=4usize);
            let mat: Vec<Vec<i64>> = (0..rows)
                .map(|_| (0..cols).map(|_| rng.gen_range(-5..=5i64)).collect())
                .collect();
            let basis = hnf_rows(mat);
            let target: Vec<i64> = (0..cols).map(|_| rng.gen_range(-5..=5i64)).collect();
            if let Some(d) = minimal_denominator(&basis, &target) {
                assert!(d >= 1);
                for mult in 1..d {
                    let scaled: Vec<i64> = target.iter().map(|&x| x * mult).collect();
                    assert!(!in_lattice(&basis, &scaled), "d not minimal");
                }
                let scaled: Vec<i64> = target.iter().map(|&x| x * d).collect();
                assert!(in_lattice(&basis, &scaled));
            }
        }
    }

    /// Kernel vectors are orthogonal to every row, span the full complement,
    /// and orthogonality to them characterizes rational span membership.
    #[test]
    fn kernel_characterizes_row_span() {
        let mut rng = StdRng::seed_from_u64(83);
        for _ in 0..80 {
            let rows = rng.gen_range(1..=4usize);
            let cols = rng.gen_range(1..=6usize);
            let mat: Vec<Vec<i64>> = (0..rows)
                .map(|_| (0..cols).map(|_| rng.gen_range(-4..=4i64)).collect())
                .collect();
            let kernel = row_space_kernel(&mat);
            for v in &kernel {
                for row in &mat {
                    let dot: i64 = row.iter().zip(v).map(|(a, b)| a * b).sum();
                    assert_eq!(dot, 0);
                }
            }
            let basis = hnf_rows(mat.clone());
            assert_eq!(kernel.len(), cols - basis.len(), "rank-nullity");
            // membership test agrees with the rational solver
            for _ in 0..6 {
                let target: Vec<i64> = if rng.gen_bool(0.5) {
                    // random integer combination of the rows: always in span
                    let mut t = vec![0i64; cols];
                    for row in &mat {
                        let c = rng.gen_range(-3..=3i64);
                        for (ti, x) in t.iter_mut().zip(row) {
                            *ti += c * x;
                        }
                    }
                    t
                } else {
                    (0..cols).map(|_| rng.gen_range(-4..=4i64)).collect()
                };
                let by_solve = express_in_rowspan(&basis, &target).is_some();
                let by_kernel = kernel
                    .iter()
                    .all(|v| v.iter().zip(&target).map(|(a, b)| a * b).sum::<i64>() == 0);
                assert_eq!(by_solve, by_kernel);
            }
        }
    }
}

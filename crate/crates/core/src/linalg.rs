//! Small dense exact linear algebra over [`Rat`].

use num_traits::{Signed, Zero};

use crate::rat::Rat;

/// Solves `a x = b` for square non-singular `a`; `None` if singular.
pub fn solve(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let n = a.len();
    let mut m: Vec<Vec<Rat>> = a.iter().zip(b).map(|(row, r)| {
        let mut row = row.clone();
        row.push(r.clone());
        row
    }).collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let p = m[col][col].clone();
        for j in col..=n {
            m[col][j] = &m[col][j] / &p;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for j in col..=n {
                    let v = &f * &m[col][j];
                    m[r][j] -= v;
                }
            }
        }
    }
    Some(m.into_iter().map(|mut row| row.pop().unwrap()).collect())
}

/// Symmetric negative definiteness by Gaussian elimination without
/// pivoting: every pivot of `-a` must be strictly positive.
pub fn is_negative_definite(a: &[Vec<Rat>]) -> bool {
    let n = a.len();
    let mut m: Vec<Vec<Rat>> = a.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
    for k in 0..n {
        if !m[k][k].is_positive() {
            return false;
        }
        for i in k + 1..n {
            if m[i][k].is_zero() {
                continue;
            }
            let f = &m[i][k] / &m[k][k];
            for j in k..n {
                let v = &f * &m[k][j];
                m[i][j] -= v;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, rat};

    #[test]
    fn solve_small() {
        let a = vec![vec![int(2), int(1)], vec![int(1), int(3)]];
        let x = solve(&a, &[int(3), int(5)]).unwrap();
        assert_eq!(x, vec![rat(4, 5), rat(7, 5)]);
        assert!(solve(&[vec![int(1), int(2)], vec![int(2), int(4)]], &[int(0), int(0)]).is_none());
    }

    #[test]
    fn definiteness() {
        assert!(is_negative_definite(&[vec![int(-2), int(1)], vec![int(1), int(-2)]]));
        assert!(!is_negative_definite(&[vec![int(-1), int(1)], vec![int(1), int(-1)]]));
        assert!(!is_negative_definite(&[vec![int(0)]]));
        assert!(is_negative_definite(&[]));
    }
}

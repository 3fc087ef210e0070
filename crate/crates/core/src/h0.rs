//! Brute-force section counts on the projective plane.
//!
//! `h0_oracle_p2` returns the dimension of the space of degree-`d` forms
//! vanishing to prescribed orders along lines and at points. Line
//! conditions are removed by a change of coordinates that turns each line
//! into a coordinate line (so sections are `X^a Y^b Z^c * g`); point
//! conditions become Taylor-coefficient equations. Ranks are computed over
//! two large prime fields and the maximum is taken, which is the rank over
//! the rationals unless both primes divide all maximal minors.

use num_integer::Integer;

use crate::error::{invalid, Error, Result};
use crate::rat::{int, Rat};

const PRIMES: [u64; 2] = [2_305_843_009_213_693_951, 2_147_483_647];

/// Upper bound on elementary operations a single call may perform.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_ops: u128,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_ops: 20_000_000_000 }
    }
}

impl Budget {
    pub fn new(max_ops: u128) -> Budget {
        Budget { max_ops }
    }

    pub fn charge(&self, needed: u128) -> Result<()> {
        if needed > self.max_ops {
            Err(Error::Budget { needed, budget: self.max_ops })
        } else {
            Ok(())
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum PointSpec {
    /// The i-th point of a fixed general-position family.
    General(usize),
    /// Explicit homogeneous integer coordinates.
    At([i64; 3]),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Constraint {
    /// Vanishing to `order` along the line `form . (x, y, z) = 0`.
    Line { form: [i64; 3], order: u32 },
    /// Multiplicity at least `order` at a point.
    Point { at: PointSpec, order: u32 },
}

fn sieve(n: usize) -> Vec<i64> {
    let mut is = vec![true; n + 1];
    let mut out = vec![];
    for i in 2..=n {
        if is[i] {
            out.push(i as i64);
            let mut j = i * i;
            while j <= n {
                is[j] = false;
                j += i;
            }
        }
    }
    out
}

/// Coordinates of the `index`-th general point under re-randomization
/// round `salt`: three distinct primes.
pub fn general_point(index: usize, salt: usize) -> [i64; 3] {
    let primes = sieve(20_000);
    let k = 3 * index + 37 * salt + 2;
    [primes[k], primes[k + 1], primes[k + 2]]
}

fn det3(m: &[[i64; 3]; 3]) -> i128 {
    let m = |i: usize, j: usize| m[i][j] as i128;
    m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
        + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0))
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

fn to_mod(x: i128, p: u64) -> u64 {
    x.rem_euclid(p as i128) as u64
}

fn rank_mod(mut rows: Vec<Vec<u64>>, ncols: usize, p: u64) -> usize {
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else { continue };
        rows.swap(rank, piv);
        let inv = powmod(rows[rank][col], p - 2, p);
        for j in col..ncols {
            rows[rank][j] = mulmod(rows[rank][j], inv, p);
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[col] != 0 {
                let f = row[col];
                for j in col..ncols {
                    let v = mulmod(f, pivot_row[j], p);
                    row[j] = (row[j] + p - v) % p;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

struct System {
    exps: Vec<[u32; 3]>,
    points: Vec<([i64; 3], u32)>,
}

impl System {
    fn rows_mod(&self, p: u64, binom: &[Vec<u64>]) -> Vec<Vec<u64>> {
        let mut rows = vec![];
        for (pt, order) in &self.points {
            let chart = (0..3).find(|&c| to_mod(pt[c] as i128, p) != 0).expect("point has a nonzero coordinate");
            let inv = powmod(to_mod(pt[chart] as i128, p), p - 2, p);
            let others: Vec<usize> = (0..3).filter(|&c| c != chart).collect();
            let a = mulmod(to_mod(pt[others[0]] as i128, p), inv, p);
            let b = mulmod(to_mod(pt[others[1]] as i128, p), inv, p);
            for total in 0..*order {
                for s in 0..=total {
                    let t = total - s;
                    let row: Vec<u64> = self
                        .exps
                        .iter()
                        .map(|e| {
                            let (ex, ey) = (e[others[0]], e[others[1]]);
                            if ex < s || ey < t {
                                return 0;
                            }
                            let cx = mulmod(binom[ex as usize][s as usize], powmod(a, (ex - s) as u64, p), p);
                            let cy = mulmod(binom[ey as usize][t as usize], powmod(b, (ey - t) as u64, p), p);
                            mulmod(cx, cy, p)
                        })
                        .collect();
                    rows.push(row);
                }
            }
        }
        rows
    }

    fn rank(&self) -> usize {
        let max_n = self.exps.iter().flat_map(|e| e.iter()).copied().max().unwrap_or(0) as usize;
        PRIMES
            .iter()
            .map(|&p| {
                let mut binom = vec![vec![0u64; max_n + 1]; max_n + 1];
                for n in 0..=max_n {
                    binom[n][0] = 1;
                    for k in 1..=n {
                        binom[n][k] = (binom[n - 1][k - 1] + if k < n { binom[n - 1][k] } else { 0 }) % p;
                    }
                }
                rank_mod(self.rows_mod(p, &binom), self.exps.len(), p)
            })
            .max()
            .unwrap_or(0)
    }

    fn row_count(&self) -> usize {
        self.points.iter().map(|(_, o)| (o * (o + 1) / 2) as usize).sum()
    }
}

/// Dimension of degree-`d` forms on the projective plane satisfying the
/// vanishing constraints.
pub fn h0_oracle_p2(d: u32, constraints: &[Constraint], budget: &Budget) -> Result<u64> {
    let mut lines: Vec<([i64; 3], u32)> = vec![];
    for c in constraints {
        if let Constraint::Line { form, order } = c {
            if *form == [0, 0, 0] {
                return invalid("line form must be nonzero");
            }
            lines.push((*form, *order));
        }
    }
    if lines.len() > 3 {
        return invalid("at most three line constraints are supported");
    }
    // complete the line forms to an invertible coordinate change
    let mut m: Vec<[i64; 3]> = lines.iter().map(|(f, _)| *f).collect();
    for unit in [[1, 0, 0], [0, 1, 0], [0, 0, 1]] {
        if m.len() == 3 {
            break;
        }
        let mut trial = m.clone();
        trial.push(unit);
        let independent = match trial.len() {
            1 => true,
            2 => (0..3).any(|i| (0..3).any(|j| trial[0][i] * trial[1][j] != trial[0][j] * trial[1][i])),
            _ => det3(&[trial[0], trial[1], trial[2]]) != 0,
        };
        if independent {
            m = trial;
        }
    }
    let mat = [m[0], m[1], m[2]];
    let indep_lines = match lines.len() {
        0 | 1 => true,
        2 => (0..3).any(|i| (0..3).any(|j| mat[0][i] * mat[1][j] != mat[0][j] * mat[1][i])),
        _ => det3(&mat) != 0,
    };
    if !indep_lines || det3(&mat) == 0 {
        return invalid("line constraints must be pairwise distinct and in general position");
    }
    let mut shift = [0u32; 3];
    for (i, (_, o)) in lines.iter().enumerate() {
        shift[i] = *o;
    }
    let used: u32 = shift.iter().sum();
    if used > d {
        return Ok(0);
    }
    let e = d - used;
    let mut exps = vec![];
    for i in 0..=e {
        for j in 0..=e - i {
            exps.push([shift[0] + i, shift[1] + j, shift[2] + e - i - j]);
        }
    }
    let ncols = exps.len();

    let build = |salt: usize| -> Result<System> {
        let mut points = vec![];
        for c in constraints {
            if let Constraint::Point { at, order } = c {
                let p = match at {
                    PointSpec::General(i) => general_point(*i, salt),
                    PointSpec::At(p) => *p,
                };
                if p == [0, 0, 0] {
                    return invalid("point coordinates must be nonzero");
                }
                let q: Vec<i64> = (0..3)
                    .map(|r| (0..3).map(|c| mat[r][c] as i128 * p[c] as i128).sum::<i128>())
                    .map(|v| i64::try_from(v).map_err(|_| Error::Validation("point coordinates overflow".into())))
                    .collect::<Result<_>>()?;
                let g = q.iter().fold(0i64, |g, &x| g.gcd(&x));
                let q = [q[0] / g, q[1] / g, q[2] / g];
                if *order > 0 {
                    points.push((q, *order));
                }
            }
        }
        Ok(System { exps: exps.clone(), points })
    };

    let sys = build(0)?;
    let nrows = sys.row_count();
    let pivots = nrows.min(ncols) as u128;
    budget.charge(2 * nrows as u128 * ncols as u128 * pivots.max(1))?;
    if nrows == 0 {
        return Ok(ncols as u64);
    }
    let has_general = constraints.iter().any(|c| matches!(c, Constraint::Point { at: PointSpec::General(_), .. }));
    let mut rank = sys.rank();
    if has_general && rank < nrows.min(ncols) {
        for salt in 1..=2 {
            budget.charge(2 * nrows as u128 * ncols as u128 * pivots.max(1))?;
            rank = rank.max(build(salt)?.rank());
        }
    }
    Ok((ncols - rank) as u64)
}

/// Leading-coefficient estimate `2 a` of `h(k) ~ a k^2` from the second
/// difference `h(k) - 2 h(k - s) + h(k - 2s)`, divided by `s^2`. Exact when
/// `h` agrees with a quadratic on `{k - 2s, k - s, k}`.
pub fn second_difference_volume(h_k: u64, h_k1: u64, h_k2: u64, step: u64) -> Rat {
    (int(h_k as i64) - int(2 * h_k1 as i64) + int(h_k2 as i64)) / int((step * step) as i64)
}

/// `2 h / k^2`.
pub fn normalized_count(h: u64, k: u64) -> Rat {
    int(2 * h as i64) / int((k * k) as i64)
}

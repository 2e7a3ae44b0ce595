//! Binary Kravchuk polynomials in exact integer arithmetic.
//!
//! `P_m(x) = sum_l (-1)^l C(x, l) C(n - x, m - l)` for integers
//! `0 <= m, x <= n`. Values outgrow 64 bits quickly, so everything is `BigInt`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KravchukError {
    #[error("{what} = {value} outside 0..={max}")]
    Range {
        what: &'static str,
        value: usize,
        max: usize,
    },
    #[error("expected {expected} values, got {found}")]
    Length { expected: usize, found: usize },
}

fn check(what: &'static str, value: usize, max: usize) -> Result<(), KravchukError> {
    if value > max {
        Err(KravchukError::Range { what, value, max })
    } else {
        Ok(())
    }
}

/// `C(n, k)`, zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Rows `0..=n` of Pascal's triangle.
pub fn pascal(n: usize) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(n + 1);
    for r in 0..=n {
        let mut row = vec![BigInt::one(); r + 1];
        for k in 1..r {
            row[k] = &rows[r - 1][k - 1] + &rows[r - 1][k];
        }
        rows.push(row);
    }
    rows
}

fn choose(table: &[Vec<BigInt>], n: usize, k: usize) -> BigInt {
    if k > n {
        BigInt::zero()
    } else {
        table[n][k].clone()
    }
}

fn eval_with(table: &[Vec<BigInt>], n: usize, m: usize, x: usize) -> BigInt {
    let mut acc = BigInt::zero();
    for l in 0..=m.min(x) {
        let term = choose(table, x, l) * choose(table, n - x, m - l);
        if l % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// `P_m(x)` for length `n`.
pub fn kravchuk_eval(n: usize, m: usize, x: usize) -> Result<BigInt, KravchukError> {
    check("m", m, n)?;
    check("x", x, n)?;
    Ok(eval_with(&pascal(n), n, m, x))
}

/// All values `P_m(x)`, `0 <= m, x <= n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KravchukTable {
    n: usize,
    values: Vec<Vec<BigInt>>,
    binomials: Vec<BigInt>,
}

impl KravchukTable {
    pub fn new(n: usize) -> Self {
        let table = pascal(n);
        let values = (0..=n)
            .map(|m| (0..=n).map(|x| eval_with(&table, n, m, x)).collect())
            .collect();
        Self {
            n,
            values,
            binomials: table[n].clone(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `P_m(x)`.
    pub fn get(&self, m: usize, x: usize) -> &BigInt {
        &self.values[m][x]
    }

    /// `C(n, k)` for this table's `n`.
    pub fn binomial(&self, k: usize) -> &BigInt {
        &self.binomials[k]
    }

    /// Evaluates `sum_j coeffs[j] P_j(x)`; `coeffs` may be shorter than `n + 1`.
    pub fn combine(&self, coeffs: &[BigInt], x: usize) -> BigInt {
        coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| c * &self.values[j][x])
            .sum()
    }

    /// `sum_k C(n,k) P_i(k) P_j(k)`, which should be `delta_ij 2^n C(n,i)`.
    pub fn inner_product(&self, i: usize, j: usize) -> BigInt {
        (0..=self.n)
            .map(|k| &self.binomials[k] * &self.values[i][k] * &self.values[j][k])
            .sum()
    }
}

/// Kravchuk coefficients of `P_m(x)^2`: index `2i` holds
/// `C(2i, i) C(n - 2i, m - i)`, odd indices are zero. Length `2m + 1`.
pub fn kravchuk_square_coeffs(n: usize, m: usize) -> Result<Vec<BigInt>, KravchukError> {
    check("m", m, n / 2)?;
    let table = pascal(n);
    let mut out = vec![BigInt::zero(); 2 * m + 1];
    for i in 0..=m {
        out[2 * i] = choose(&table, 2 * i, i) * choose(&table, n - 2 * i, m - i);
    }
    Ok(out)
}

/// Coefficients `g_j` with `g(x) = sum_j g_j P_j(x)` on `x = 0..=n`:
/// `g_j = (2^n C(n,j))^-1 sum_k C(n,k) P_j(k) g(k)`.
pub fn kravchuk_decompose(n: usize, g: &[BigRational]) -> Result<Vec<BigRational>, KravchukError> {
    if g.len() != n + 1 {
        return Err(KravchukError::Length {
            expected: n + 1,
            found: g.len(),
        });
    }
    let table = KravchukTable::new(n);
    let two_n = BigInt::one() << n;
    Ok((0..=n)
        .map(|j| {
            let sum: BigRational = (0..=n)
                .map(|k| {
                    BigRational::from_integer(table.binomial(k) * table.get(j, k)) * &g[k]
                })
                .sum();
            sum / BigRational::from_integer(&two_n * table.binomial(j))
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Character-sum definition: sum over weight-m words w of (-1)^{u.w},
    /// with u the first x coordinates.
    fn character_sum(n: usize, m: usize, x: usize) -> i64 {
        let u: u32 = (1u32 << x) - 1;
        (0u32..1 << n)
            .filter(|w| w.count_ones() as usize == m)
            .map(|w| if (u & w).count_ones().is_multiple_of(2) { 1 } else { -1 })
            .sum()
    }

    fn int(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn rat(p: i64) -> BigRational {
        BigRational::from_integer(int(p))
    }

    #[test]
    fn eval_examples() {
        assert_eq!(kravchuk_eval(4, 0, 2).unwrap(), int(1));
        assert_eq!(kravchuk_eval(5, 2, 0).unwrap(), int(10));
        assert_eq!(kravchuk_eval(4, 1, 1).unwrap(), int(2));
        assert_eq!(character_sum(4, 1, 1), 2);
        assert!(kravchuk_eval(4, 5, 0).is_err());
        assert!(kravchuk_eval(4, 0, 5).is_err());
    }

    #[test]
    fn explicit_form_matches_character_sum() {
        for n in 0..=10 {
            let t = KravchukTable::new(n);
            for m in 0..=n {
                for x in 0..=n {
                    assert_eq!(*t.get(m, x), int(character_sum(n, m, x)), "n={n} m={m} x={x}");
                }
            }
        }
    }

    #[test]
    fn table_boundary_values() {
        let t = KravchukTable::new(9);
        for x in 0..=9 {
            assert_eq!(*t.get(0, x), int(1));
        }
        for m in 0..=9 {
            assert_eq!(*t.get(m, 0), binomial(9, m));
        }
    }

    #[test]
    fn square_coeff_examples() {
        let a = kravchuk_square_coeffs(4, 1).unwrap();
        assert_eq!(a, vec![int(4), int(0), int(2)]);
        let p1_0 = kravchuk_eval(4, 1, 0).unwrap();
        assert_eq!(int(4) + int(2) * kravchuk_eval(4, 2, 0).unwrap(), &p1_0 * &p1_0);
        assert_eq!(kravchuk_square_coeffs(7, 0).unwrap(), vec![int(1)]);
        for n in 0..12 {
            for m in 0..=n / 2 {
                assert_eq!(kravchuk_square_coeffs(n, m).unwrap()[0], binomial(n, m));
            }
        }
        assert!(kravchuk_square_coeffs(5, 3).is_err());
    }

    #[test]
    fn decompose_examples() {
        let ones = vec![rat(1); 6];
        let g = kravchuk_decompose(5, &ones).unwrap();
        assert_eq!(g[0], rat(1));
        assert!(g[1..].iter().all(Zero::is_zero));

        let t5 = KravchukTable::new(5);
        let p2: Vec<BigRational> = (0..=5).map(|x| BigRational::from_integer(t5.get(2, x).clone())).collect();
        let g = kravchuk_decompose(5, &p2).unwrap();
        for (j, c) in g.iter().enumerate() {
            assert_eq!(*c, rat(i64::from(j == 2)));
        }

        let t4 = KravchukTable::new(4);
        let sq: Vec<BigRational> = (0..=4)
            .map(|x| BigRational::from_integer(t4.get(1, x) * t4.get(1, x)))
            .collect();
        let g = kravchuk_decompose(4, &sq).unwrap();
        assert_eq!(g, vec![rat(4), rat(0), rat(2), rat(0), rat(0)]);

        assert!(kravchuk_decompose(4, &ones).is_err());
    }

    #[test]
    fn decomposition_reconstructs_values() {
        let n = 7;
        let g: Vec<BigRational> = (0..=n as i64).map(|x| BigRational::new(int(x * x - 3), int(x + 2))).collect();
        let coeffs = kravchuk_decompose(n, &g).unwrap();
        let t = KravchukTable::new(n);
        for x in 0..=n {
            let v: BigRational = coeffs
                .iter()
                .enumerate()
                .map(|(j, c)| c * BigRational::from_integer(t.get(j, x).clone()))
                .sum();
            assert_eq!(v, g[x]);
        }
    }

    #[test]
    fn binomial_conventions() {
        assert_eq!(binomial(5, 7), int(0));
        assert_eq!(binomial(0, 0), int(1));
        assert_eq!(binomial(64, 32), "1832624140942590534".parse::<BigInt>().unwrap());
        let p = pascal(20);
        for k in 0..=20 {
            assert_eq!(p[20][k], binomial(20, k));
        }
    }
}

//! Quasihomogeneity of function germs.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Result;
use crate::linalg;
use crate::local_algebra::{milnor, tjurina};
use crate::poly::Polynomial;
use crate::rat::Rat;

/// Positive integer weights with `g(t^w1 z1, .., t^wd zd) = t^degree g(z)`,
/// normalized so that `gcd(w1, .., wd, degree) = 1`.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct WeightSystem {
    pub weights: Vec<u64>,
    pub degree: u64,
}

impl WeightSystem {
    pub fn weighted_degree(&self, exponents: &[u32]) -> u64 {
        self.weights.iter().zip(exponents).map(|(w, &e)| w * e as u64).sum()
    }
}

// total number of candidates tried when the weight system is not unique
const FREE_SEARCH_BUDGET: f64 = 20_000.0;

/// Solves `<w, a> = degree` over every support exponent `a` of `g`.
///
/// When several normalized solutions exist (some variable is absent, or the
/// support is degenerate) the lexicographically smallest one is returned.
pub fn find_weights(g: &Polynomial) -> Option<WeightSystem> {
    if g.is_zero() || !g.vanishes_at_origin() {
        return None;
    }
    let d = g.ctx().len();
    // unknowns: w_1 .. w_d, degree
    let rows: Vec<Vec<Rat>> = g
        .terms()
        .map(|(m, _)| {
            let mut r: Vec<Rat> = m.exponents().iter().map(|&e| Rat::from_int(e as i64)).collect();
            r.push(-Rat::one());
            r
        })
        .collect();
    let mut reduced = rows.clone();
    let pivots = linalg::rref(&mut reduced);
    let free: Vec<usize> = (0..=d).filter(|c| !pivots.contains(c)).collect();
    if free.is_empty() {
        return None;
    }
    let solve = |values: &[i64]| -> Vec<Rat> {
        let mut v = vec![Rat::zero(); d + 1];
        for (&f, &x) in free.iter().zip(values) {
            v[f] = Rat::from_int(x);
        }
        for (row, &pc) in pivots.iter().enumerate() {
            let mut s = Rat::zero();
            for &f in &free {
                s -= &(&reduced[row][f] * &v[f]);
            }
            v[pc] = s;
        }
        v
    };
    if free.len() == 1 {
        let v = solve(&[1]);
        let v = if v.iter().all(Rat::is_negative) { v.iter().map(|x| -x).collect() } else { v };
        return normalize(&v);
    }
    let bound = (FREE_SEARCH_BUDGET.powf(1.0 / free.len() as f64).floor() as i64).max(2);
    let mut best: Option<WeightSystem> = None;
    let mut values = vec![1i64; free.len()];
    loop {
        if let Some(ws) = normalize(&solve(&values)) {
            let better = match &best {
                None => true,
                Some(b) => (&ws.weights, ws.degree) < (&b.weights, b.degree),
            };
            if better {
                best = Some(ws);
            }
        }
        // odometer over [1, bound]^free
        let mut i = 0;
        loop {
            if i == values.len() {
                return best;
            }
            values[i] += 1;
            if values[i] <= bound {
                break;
            }
            values[i] = 1;
            i += 1;
        }
    }
}

fn normalize(v: &[Rat]) -> Option<WeightSystem> {
    if !v.iter().all(|x| !x.is_zero() && !x.is_negative()) {
        return None;
    }
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(&x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let ints: Vec<u64> = ints.iter().map(|x| (x / &g).abs().to_u64()).collect::<Option<_>>()?;
    let (degree, weights) = ints.split_last()?;
    Some(WeightSystem { weights: weights.to_vec(), degree: *degree })
}

/// `g` is R-equivalent to a quasihomogeneous germ: either it is one, or
/// its Milnor and Tjurina numbers agree (Saito's criterion).
pub fn is_r_equiv_quasihomogeneous(g: &Polynomial, k_max: usize) -> Result<bool> {
    let mu = milnor(g, k_max)?.dimension;
    let tau = tjurina(g, k_max)?.dimension;
    Ok(find_weights(g).is_some() || mu == tau)
}

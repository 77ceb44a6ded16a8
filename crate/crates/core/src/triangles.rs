//! Weighted-path triangles and diamonds in exact rational arithmetic.
//!
//! A node value T(r, n) at row r and column n is the weighted count of
//! paths from the start column to column n in r steps. Each step moves one
//! column; a step n → n+1 carries `w_right(n)` and a step n+1 → n carries
//! `w_left(n)`:
//!
//! `T(r+1, n) = w_right(n−1) T(r, n−1) + w_left(n) T(r, n+1)`.
//!
//! Triangular diagrams never visit negative columns. Column n, read down the
//! rows with alternating signs and divided by r!, gives the Taylor series of
//! the function the diagram codes for that column.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{lambda_sq, AlgebraSpec, Profile};
use crate::error::{LadderError, Result};
use crate::phase::phase_gn;
use crate::special::bessel_jn;

#[derive(Debug, Clone, PartialEq)]
pub enum WeightRule {
    /// Both directions weighted by λ_n; λ_n must be rational.
    LambdaSymmetric(AlgebraSpec),
    /// w_right(n) = n+1, w_left(n) = n+p.
    Tilde(BigRational),
    /// w_right(n) = n+p, w_left(n) = n+1.
    Bar(BigRational),
    /// w_right = 1, w_left(n) = n+1.
    GaussTilde,
    /// w_right(n) = n+1, w_left = 1.
    GaussBar,
    Unit,
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn exact(x: f64) -> Result<BigRational> {
    BigRational::from_float(x)
        .ok_or_else(|| LadderError::InvalidInput(format!("{x} is not a finite rational")))
}

fn rational_sqrt(x: &BigRational, n: i64) -> Result<BigRational> {
    if x.is_negative() {
        return Err(LadderError::NonUnitaryRegime {
            j: n,
            lambda_sq: x.to_f64().unwrap_or(f64::NAN),
        });
    }
    let (p, q) = (x.numer().sqrt(), x.denom().sqrt());
    if &(&p * &p) == x.numer() && &(&q * &q) == x.denom() {
        Ok(BigRational::new(p, q))
    } else {
        Err(LadderError::InvalidInput(format!(
            "lambda_{n}^2 = {x} has no rational square root; use a tilde/bar rule"
        )))
    }
}

/// λ_n as an exact rational, when it is one.
pub fn exact_lambda(spec: &AlgebraSpec, n: i64) -> Result<BigRational> {
    let sq = match *spec {
        AlgebraSpec::Parametric { alpha, beta, sigma } => {
            exact(sigma)? * (exact(alpha)? + int(n)) * (exact(beta)? + int(n))
        }
        AlgebraSpec::Profile { profile } => match profile {
            Profile::Sho => int(if n >= -1 { n + 1 } else { 0 }),
            Profile::ConstantOne => int(1),
            Profile::Phase => int(if n >= 0 { 1 } else { 0 }),
        },
    };
    rational_sqrt(&sq, n)
}

impl WeightRule {
    pub fn w_right(&self, n: i64) -> Result<BigRational> {
        Ok(match self {
            WeightRule::LambdaSymmetric(spec) => exact_lambda(spec, n)?,
            WeightRule::Tilde(_) | WeightRule::GaussBar => int(n + 1),
            WeightRule::Bar(p) => int(n) + p,
            WeightRule::GaussTilde | WeightRule::Unit => int(1),
        })
    }

    pub fn w_left(&self, n: i64) -> Result<BigRational> {
        Ok(match self {
            WeightRule::LambdaSymmetric(spec) => exact_lambda(spec, n)?,
            WeightRule::Tilde(p) => int(n) + p,
            WeightRule::Bar(_) | WeightRule::GaussTilde => int(n + 1),
            WeightRule::GaussBar | WeightRule::Unit => int(1),
        })
    }

    pub fn name(&self) -> String {
        match self {
            WeightRule::LambdaSymmetric(spec) => format!("lambda-symmetric({})", spec.label()),
            WeightRule::Tilde(p) => format!("tilde({p})"),
            WeightRule::Bar(p) => format!("bar({p})"),
            WeightRule::GaussTilde => "gauss-tilde".into(),
            WeightRule::GaussBar => "gauss-bar".into(),
            WeightRule::Unit => "unit".into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Boundary {
    /// Columns n ≥ 0 only.
    Triangular,
    /// All integer columns.
    Diamond,
}

impl std::str::FromStr for Boundary {
    type Err = LadderError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "triangular" | "triangle" => Ok(Boundary::Triangular),
            "diamond" => Ok(Boundary::Diamond),
            other => Err(LadderError::InvalidInput(format!("unknown boundary '{other}'"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CoeffDiagram {
    pub rule: WeightRule,
    pub boundary: Boundary,
    pub start_column: i64,
    /// Row r maps every parity-allowed column within reach to T(r, n).
    pub rows: Vec<BTreeMap<i64, BigRational>>,
}

impl CoeffDiagram {
    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, r: usize, n: i64) -> BigRational {
        self.rows
            .get(r)
            .and_then(|row| row.get(&n))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// Values down column n at the rows where it is occupied.
    pub fn column(&self, n: i64) -> Vec<(usize, BigRational)> {
        (0..self.rows.len())
            .filter_map(|r| self.rows[r].get(&n).map(|v| (r, v.clone())))
            .collect()
    }

    /// Column and row range touched by any stored node.
    pub fn column_range(&self) -> (i64, i64) {
        let lo = self.rows.iter().filter_map(|r| r.keys().next().copied()).min().unwrap_or(0);
        let hi = self.rows.iter().filter_map(|r| r.keys().next_back().copied()).max().unwrap_or(0);
        (lo, hi)
    }
}

pub fn generate(
    rule: WeightRule,
    boundary: Boundary,
    start_column: i64,
    num_rows: usize,
) -> Result<CoeffDiagram> {
    if num_rows == 0 {
        return Err(LadderError::InvalidInput("a diagram needs at least one row".into()));
    }
    if boundary == Boundary::Triangular && start_column < 0 {
        return Err(LadderError::InvalidInput(format!(
            "triangular diagrams start at a column >= 0, got {start_column}"
        )));
    }
    let mut rows = Vec::with_capacity(num_rows);
    rows.push(BTreeMap::from([(start_column, BigRational::one())]));
    for r in 1..num_rows as i64 {
        let prev: &BTreeMap<i64, BigRational> = rows.last().unwrap();
        let mut row = BTreeMap::new();
        let mut n = start_column - r;
        if boundary == Boundary::Triangular {
            while n < 0 {
                n += 2;
            }
        }
        while n <= start_column + r {
            let mut v = BigRational::zero();
            if let Some(t) = prev.get(&(n - 1)) {
                if !t.is_zero() {
                    v += rule.w_right(n - 1)? * t;
                }
            }
            if let Some(t) = prev.get(&(n + 1)) {
                if !t.is_zero() {
                    v += rule.w_left(n)? * t;
                }
            }
            row.insert(n, v);
            n += 2;
        }
        rows.push(row);
    }
    Ok(CoeffDiagram { rule, boundary, start_column, rows })
}

/// Unit-weight triangular diagram started in column m: the phase-operator
/// path counts.
pub fn path_count_diagram(m: i64, num_rows: usize) -> Result<CoeffDiagram> {
    generate(WeightRule::Unit, Boundary::Triangular, m, num_rows)
}

fn factorial(r: usize) -> BigInt {
    (1..=r).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// `(r, (−1)^{(r − (n − start))/2} T(r, n)/r!)` for every occupied row of column n.
pub fn column_series(d: &CoeffDiagram, n: i64) -> Vec<(u32, BigRational)> {
    let offset = n - d.start_column;
    d.column(n)
        .into_iter()
        .filter(|(r, _)| *r as i64 >= offset.abs())
        .map(|(r, v)| {
            let k = (r as i64 - offset) / 2;
            let signed = if k % 2 == 0 { v } else { -v };
            (r as u32, signed / BigRational::from_integer(factorial(r)))
        })
        .collect()
}

pub fn series_value(series: &[(u32, BigRational)], y: f64) -> f64 {
    series
        .iter()
        .map(|(r, c)| c.to_f64().unwrap_or(f64::NAN) * y.powi(*r as i32))
        .sum()
}

/// Largest deviation over the grid between the truncated column series and
/// the target function.
pub fn series_match(d: &CoeffDiagram, n: i64, target: impl Fn(f64) -> f64, y_grid: &[f64]) -> f64 {
    let series = column_series(d, n);
    y_grid
        .iter()
        .map(|&y| (series_value(&series, y) - target(y)).abs())
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SignMode {
    Plain,
    /// Occupied sites of a row alternate +, −, +, … from the left.
    Alternating,
}

pub fn row_sums(d: &CoeffDiagram, signs: SignMode) -> Vec<BigRational> {
    d.rows
        .iter()
        .map(|row| {
            row.values().enumerate().fold(BigRational::zero(), |acc, (i, v)| match signs {
                SignMode::Alternating if i % 2 == 1 => acc - v,
                _ => acc + v,
            })
        })
        .collect()
}

/// Re-checks the defining recurrence and the parity rule at every node.
pub fn check_invariants(d: &CoeffDiagram) -> Result<bool> {
    for (r, row) in d.rows.iter().enumerate() {
        for (&n, v) in row {
            if (n - d.start_column - r as i64).rem_euclid(2) != 0 {
                return Ok(false);
            }
            if d.boundary == Boundary::Triangular && n < 0 {
                return Ok(false);
            }
            if r == 0 {
                continue;
            }
            let want = d.rule.w_right(n - 1)? * d.get(r - 1, n - 1) + d.rule.w_left(n)? * d.get(r - 1, n + 1);
            if &want != v {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// λ-weighted diagram in floating point, for profiles whose λ_n are
/// irrational. Values are approximate.
pub fn generate_float_lambda(
    spec: &AlgebraSpec,
    boundary: Boundary,
    start_column: i64,
    num_rows: usize,
) -> Vec<BTreeMap<i64, f64>> {
    let lam = |n: i64| lambda_sq(spec, n).max(0.0).sqrt();
    let mut rows = vec![BTreeMap::from([(start_column, 1.0)])];
    for r in 1..num_rows as i64 {
        let prev = rows.last().unwrap();
        let mut row = BTreeMap::new();
        let mut n = start_column - r;
        while n <= start_column + r {
            if boundary == Boundary::Diamond || n >= 0 {
                let v = lam(n - 1) * prev.get(&(n - 1)).copied().unwrap_or(0.0)
                    + lam(n) * prev.get(&(n + 1)).copied().unwrap_or(0.0);
                row.insert(n, v);
            }
            n += 2;
        }
        rows.push(row);
    }
    rows
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeRecord {
    pub row: usize,
    pub column: i64,
    pub numerator: String,
    pub denominator: String,
}

pub fn node_records(d: &CoeffDiagram) -> Vec<NodeRecord> {
    d.rows
        .iter()
        .enumerate()
        .flat_map(|(r, row)| {
            row.iter().map(move |(&n, v)| NodeRecord {
                row: r,
                column: n,
                numerator: v.numer().to_string(),
                denominator: v.denom().to_string(),
            })
        })
        .collect()
}

fn show(v: &BigRational) -> String {
    if v.is_integer() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

/// Staggered text layout: one line per row, each value under its column.
pub fn render_ascii(d: &CoeffDiagram) -> String {
    let (lo, hi) = d.column_range();
    let width = d
        .rows
        .iter()
        .flat_map(|r| r.values().map(|v| show(v).len()))
        .max()
        .unwrap_or(1)
        .max(format!("{lo}").len())
        .max(format!("{hi}").len())
        + 1;
    let mut out = String::new();
    let _ = write!(out, "{:>5} |", "n");
    for n in lo..=hi {
        let _ = write!(out, "{n:>width$}");
    }
    out.push('\n');
    for (r, row) in d.rows.iter().enumerate() {
        let _ = write!(out, "{r:>5} |");
        for n in lo..=hi {
            match row.get(&n) {
                Some(v) => {
                    let _ = write!(out, "{:>width$}", show(v));
                }
                None => out.push_str(&" ".repeat(width)),
            }
        }
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SumRule {
    /// J_0(2y) + 2 Σ J_{2k}(2y) = 1
    BesselUnity,
    /// J_0(2y) + 2 Σ (−1)^k J_{2k}(2y) = cos 2y
    BesselCos,
    /// 2 Σ (−1)^{k+1} J_{2k−1}(2y) = sin 2y
    BesselSin,
    /// (1/y) Σ (2k+1) J_{2k+1}(2y) = 1
    PhaseUnity,
    /// (1/y) Σ 2k J_{2k}(2y) = ∫_0^y J_1(2z)/z dz
    PhaseIntegral,
}

impl SumRule {
    pub const ALL: [SumRule; 5] = [
        SumRule::BesselUnity,
        SumRule::BesselCos,
        SumRule::BesselSin,
        SumRule::PhaseUnity,
        SumRule::PhaseIntegral,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SumRule::BesselUnity => "bessel-unity",
            SumRule::BesselCos => "bessel-cos",
            SumRule::BesselSin => "bessel-sin",
            SumRule::PhaseUnity => "phase-unity",
            SumRule::PhaseIntegral => "phase-integral",
        }
    }
}

impl std::str::FromStr for SumRule {
    type Err = LadderError;

    fn from_str(s: &str) -> Result<Self> {
        SumRule::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| LadderError::InvalidInput(format!("unknown sum rule '{s}'")))
    }
}

/// `∫_0^y J_1(2z)/z dz = Σ (−1)^k y^{2k+1} / ((2k+1) k! (k+1)!)`.
pub fn j1_over_z_integral(y: f64) -> f64 {
    let mut coef = 1.0; // 1/(k!(k+1)!)
    let mut sum = 0.0;
    let y2 = y * y;
    let mut power = y;
    for k in 0..200 {
        let t = coef * power / (2 * k + 1) as f64;
        sum += if k % 2 == 0 { t } else { -t };
        if t.abs() < 1e-18 * sum.abs().max(1e-300) {
            break;
        }
        coef /= ((k + 1) * (k + 2)) as f64;
        power *= y2;
    }
    sum
}

/// |left − right| of a Bessel sum rule truncated at k_max.
pub fn sumrule_check(rule: SumRule, y: f64, k_max: u32) -> Result<f64> {
    if k_max < 1 {
        return Err(LadderError::InvalidInput("k_max must be at least 1".into()));
    }
    let x = 2.0 * y;
    let ks = 1..=k_max as i64;
    let (left, right) = match rule {
        SumRule::BesselUnity => (bessel_jn(0, x) + 2.0 * ks.map(|k| bessel_jn(2 * k, x)).sum::<f64>(), 1.0),
        SumRule::BesselCos => (
            bessel_jn(0, x) + 2.0 * ks.map(|k| sign(k) * bessel_jn(2 * k, x)).sum::<f64>(),
            x.cos(),
        ),
        SumRule::BesselSin => (2.0 * ks.map(|k| -sign(k) * bessel_jn(2 * k - 1, x)).sum::<f64>(), x.sin()),
        // (2k+1) J_{2k+1}(2y)/y is the phase G_{2k}, finite at y = 0
        SumRule::PhaseUnity => ((0..=k_max).map(|k| phase_gn(2 * k, y)).sum::<f64>(), 1.0),
        SumRule::PhaseIntegral => (
            (1..=k_max).map(|k| phase_gn(2 * k - 1, y)).sum::<f64>(),
            j1_over_z_integral(y),
        ),
    };
    Ok((left - right).abs())
}

fn sign(k: i64) -> f64 {
    if k % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| int(x)).collect()
    }

    fn col(d: &CoeffDiagram, n: i64) -> Vec<BigRational> {
        d.column(n).into_iter().map(|(_, v)| v).collect()
    }

    #[test]
    fn euler_numbers_from_lambda_rule() {
        let d = generate(
            WeightRule::LambdaSymmetric(AlgebraSpec::parametric(1.0, 1.0, 1.0)),
            Boundary::Triangular,
            0,
            7,
        )
        .unwrap();
        assert_eq!(col(&d, 0), ints(&[1, 1, 5, 61]));
        assert!(check_invariants(&d).unwrap());
    }

    #[test]
    fn tangent_numbers_from_tilde_two() {
        let d = generate(WeightRule::Tilde(int(2)), Boundary::Triangular, 0, 7).unwrap();
        assert_eq!(col(&d, 0), ints(&[1, 2, 16, 272]));
        assert_eq!(col(&d, 1), ints(&[1, 8, 136]));
        assert_eq!(col(&d, 2)[..2], ints(&[2, 40])[..]);
    }

    #[test]
    fn pascal_rows_in_unit_diamond() {
        let d = generate(WeightRule::Unit, Boundary::Diamond, 0, 4).unwrap();
        let row3: Vec<_> = d.rows[3].iter().map(|(&n, v)| (n, v.clone())).collect();
        assert_eq!(row3, vec![(-3, int(1)), (-1, int(3)), (1, int(3)), (3, int(1))]);
    }

    #[test]
    fn column_series_signs() {
        let d = generate(WeightRule::Unit, Boundary::Diamond, 0, 7).unwrap();
        let s = column_series(&d, 0);
        let want = [(0, 1, 1), (2, -2, 2), (4, 6, 24), (6, -20, 720)];
        for ((r, c), (wr, num, den)) in s.iter().zip(want) {
            assert_eq!(*r, wr);
            assert_eq!(*c, BigRational::new(BigInt::from(num), BigInt::from(den)));
        }
        let g = generate(WeightRule::GaussTilde, Boundary::Triangular, 0, 7).unwrap();
        let coeffs: Vec<_> = column_series(&g, 0).into_iter().map(|(_, c)| c).collect();
        assert_eq!(
            coeffs,
            vec![
                int(1),
                BigRational::new((-1).into(), 2.into()),
                BigRational::new(3.into(), 24.into()),
                BigRational::new((-15).into(), 720.into())
            ]
        );
        let t = path_count_diagram(0, 7).unwrap();
        let coeffs: Vec<_> = column_series(&t, 0).into_iter().map(|(_, c)| c).collect();
        assert_eq!(
            coeffs,
            vec![
                int(1),
                BigRational::new((-1).into(), 2.into()),
                BigRational::new(2.into(), 24.into()),
                BigRational::new((-5).into(), 720.into())
            ]
        );
    }

    #[test]
    fn series_match_examples() {
        let d = generate(WeightRule::Tilde(int(1)), Boundary::Triangular, 0, 16).unwrap();
        let grid: Vec<f64> = (-6..=6).map(|k| k as f64 * 0.05).collect();
        assert!(series_match(&d, 1, |y| y.tanh() / y.cosh(), &grid) <= 1e-9);
        let t = path_count_diagram(0, 16).unwrap();
        for n in 0..4 {
            assert!(series_match(&t, n, |y| phase_gn(n as u32, y), &grid) <= 1e-9);
        }
        assert_eq!(series_value(&column_series(&t, 0), 0.0), 1.0);
        assert_eq!(series_value(&column_series(&t, 2), 0.0), 0.0);
    }

    #[test]
    fn row_sum_rules() {
        let d = generate(WeightRule::Unit, Boundary::Diamond, 0, 8).unwrap();
        let plain = row_sums(&d, SignMode::Plain);
        assert_eq!(plain, (0..8).map(|r| int(1 << r)).collect::<Vec<_>>());
        let alt = row_sums(&d, SignMode::Alternating);
        assert_eq!(alt[0], int(1));
        assert!(alt[1..].iter().all(|v| v.is_zero()));
    }

    #[test]
    fn path_counts() {
        let d = path_count_diagram(1, 8).unwrap();
        assert_eq!(col(&d, 0), ints(&[1, 2, 5, 14]));
        let d = path_count_diagram(2, 9).unwrap();
        assert_eq!(col(&d, 0), ints(&[1, 3, 9, 28]));
        let d = path_count_diagram(0, 9).unwrap();
        assert_eq!(col(&d, 0), ints(&[1, 1, 2, 5, 14]));
    }

    #[test]
    fn irrational_lambda_is_rejected() {
        let r = generate(WeightRule::LambdaSymmetric(AlgebraSpec::profile(Profile::Sho)), Boundary::Triangular, 0, 4);
        assert!(matches!(r, Err(LadderError::InvalidInput(_))));
        let f = generate_float_lambda(&AlgebraSpec::profile(Profile::Sho), Boundary::Triangular, 0, 3);
        assert!((f[2][&0] - 1.0).abs() < 1e-15);
        assert!((f[2][&2] - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn sum_rules_small_residuals() {
        for rule in SumRule::ALL {
            for &y in &[0.0, 0.4, 0.8] {
                let r = sumrule_check(rule, y, 16).unwrap();
                assert!(r <= 1e-12, "{} at y={y}: {r}", rule.name());
            }
        }
    }

    #[test]
    fn ascii_and_records() {
        let d = generate(WeightRule::Unit, Boundary::Diamond, 0, 3).unwrap();
        let text = render_ascii(&d);
        assert_eq!(text.lines().count(), 4);
        assert!(text.lines().nth(3).unwrap().contains('2'));
        let recs = node_records(&d);
        assert_eq!(recs.len(), 1 + 2 + 3);
        assert_eq!(recs[0], NodeRecord { row: 0, column: 0, numerator: "1".into(), denominator: "1".into() });
    }
}

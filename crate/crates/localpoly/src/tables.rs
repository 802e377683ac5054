//! Embedded reference values for the shipped weight-4 examples at levels 7, 15
//! and 22, stored as a versioned JSON resource.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec;
use crate::hecke::{parse_rational, HeckeEvaluator, HeckePolynomial};
use crate::local_poly::{LocalPolyParams, LocalPolynomial};
use crate::qforms::RationalPoint;

const RESOURCE: &str = include_str!("../resources/tables.json");

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Column {
    pub d: i64,
    /// Factored rationals such as `2^4*3^2` or `2^9*5*7/3^4`.
    pub cells: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReferenceTable {
    pub level: u64,
    pub k: u32,
    pub d0: i64,
    /// Name of the Hecke preset applied before tabulating.
    pub hecke: String,
    /// Evaluation points, one per row.
    pub xs: Vec<String>,
    /// Row labels of the reference layout when they differ from `xs`.
    #[serde(default)]
    pub row_labels: Option<Vec<String>>,
    pub columns: Vec<Column>,
}

impl ReferenceTable {
    pub fn params(&self, d: i64) -> Result<LocalPolyParams> {
        LocalPolyParams::new(self.k, self.level, d, self.d0)
    }

    pub fn polynomial(&self) -> Result<HeckePolynomial> {
        HeckePolynomial::preset(&self.hecke).ok_or_else(|| Error::data(format!("unknown preset {}", self.hecke)))
    }

    pub fn points(&self) -> Result<Vec<BigRational>> {
        self.xs.iter().map(|s| parse_rational(s)).collect()
    }

    /// Expected values, column-major: `expected()[col][row]`.
    pub fn expected(&self) -> Result<Vec<Vec<BigRational>>> {
        self.columns.iter().map(|c| c.cells.iter().map(|s| parse_factored(s)).collect()).collect()
    }

    pub fn row_label(&self, row: usize) -> &str {
        self.row_labels.as_ref().map_or(&self.xs[row], |l| &l[row])
    }

    pub fn cell_count(&self) -> usize {
        self.columns.iter().map(|c| c.cells.len()).sum()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HeckeAtHalf {
    pub level: u64,
    pub d0: i64,
    pub d: i64,
    pub value: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CInfinityGap {
    pub level: u64,
    pub d0: i64,
    pub d: i64,
    /// Reference gap between series and closed form of the inner sum.
    pub gap: f64,
    pub bound: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GammaGap {
    pub level: u64,
    pub d0: i64,
    pub d: i64,
    pub gap: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SplittingResidual {
    pub level: u64,
    pub d0: i64,
    pub d: i64,
    pub residual: f64,
    /// Number of coefficient terms in the cosine series behind the reference value.
    pub phi_terms: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LValueRef {
    pub level: u64,
    pub d: i64,
    pub value: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct References {
    pub version: u32,
    pub tables: Vec<ReferenceTable>,
    pub hecke_at_half: Vec<HeckeAtHalf>,
    pub c_infinity_gaps: Vec<CInfinityGap>,
    pub gamma_gaps: Vec<GammaGap>,
    pub splitting_residuals: Vec<SplittingResidual>,
    pub l_values: Vec<LValueRef>,
}

impl References {
    pub fn table(&self, level: u64) -> Option<&ReferenceTable> {
        self.tables.iter().find(|t| t.level == level)
    }

    /// `D₀` used with each level in the shipped examples.
    pub fn d0_for_level(&self, level: u64) -> Option<i64> {
        self.table(level).map(|t| t.d0)
    }
}

pub fn references() -> &'static References {
    static REFS: OnceLock<References> = OnceLock::new();
    REFS.get_or_init(|| serde_json::from_str(RESOURCE).expect("embedded tables are valid JSON"))
}

/// One recomputed table cell.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CellCheck {
    pub x: String,
    pub d: i64,
    pub expected: BigRational,
    pub actual: BigRational,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TableReport {
    pub level: u64,
    pub cells: Vec<CellCheck>,
}

impl TableReport {
    pub fn passed(&self) -> usize {
        self.cells.iter().filter(|c| c.ok).count()
    }

    pub fn all_ok(&self) -> bool {
        self.cells.iter().all(|c| c.ok)
    }

    pub fn mismatches(&self) -> impl Iterator<Item = &CellCheck> {
        self.cells.iter().filter(|c| !c.ok)
    }
}

/// Recomputes every cell of the reference table at `level` exactly.
pub fn verify_table(level: u64) -> Result<TableReport> {
    let table = references().table(level).ok_or_else(|| Error::data(format!("no reference table for level {level}")))?;
    let poly = table.polynomial()?;
    let xs = table.points()?;
    let pts = xs.iter().map(RationalPoint::from_big).collect::<Result<Vec<_>>>()?;
    let expected = table.expected()?;
    let columns = exec::map(&table.columns, |col| -> Result<Vec<BigRational>> {
        let lp = LocalPolynomial::new(&table.params(col.d)?)?;
        HeckeEvaluator::new(&lp, &poly, table.k).eval_many(&pts)
    });
    let mut cells = Vec::with_capacity(table.cell_count());
    for ((col, exp), got) in table.columns.iter().zip(expected).zip(columns) {
        for ((x, e), a) in table.xs.iter().zip(exp).zip(got?) {
            cells.push(CellCheck { x: x.clone(), d: col.d, ok: e == a, expected: e, actual: a });
        }
    }
    Ok(TableReport { level, cells })
}

/// Parses `n₁*n₂^e/(d₁^e*d₂)`; factors are integers with optional exponents.
pub fn parse_factored(s: &str) -> Result<BigRational> {
    let bad = || Error::data(format!("malformed factored rational `{s}`"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d.trim().trim_start_matches('(').trim_end_matches(')')),
        None => (s, "1"),
    };
    let product = |part: &str| -> Result<BigInt> {
        let mut acc = BigInt::one();
        for f in part.split('*') {
            let f = f.trim();
            let (base, exp) = f.split_once('^').unwrap_or((f, "1"));
            let base: BigInt = base.trim().parse().map_err(|_| bad())?;
            let exp: u32 = exp.trim().parse().map_err(|_| bad())?;
            acc *= base.pow(exp);
        }
        Ok(acc)
    };
    Ok(BigRational::new(product(num)?, product(den)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nt::rat;

    #[test]
    fn resource_shape() {
        let r = references();
        assert_eq!(r.version, 1);
        assert_eq!(r.table(7).unwrap().cell_count(), 24);
        assert_eq!(r.table(15).unwrap().cell_count(), 36);
        assert_eq!(r.table(22).unwrap().cell_count(), 24);
        assert_eq!(r.l_values.iter().filter(|v| v.value == 0.0).count(), 7);
        for t in &r.tables {
            t.polynomial().unwrap();
            for c in &t.columns {
                t.params(c.d).unwrap();
            }
        }
    }

    #[test]
    fn factored_parsing() {
        assert_eq!(parse_factored("2^4*3^2").unwrap(), rat(144, 1));
        assert_eq!(parse_factored("2^9*5*7/3^4").unwrap(), rat(17920, 81));
        assert_eq!(parse_factored("2^10*3^2*5^2*19*23/(7^3*11^2)").unwrap(), rat(100684800, 41503));
        assert!(parse_factored("2^x").is_err());
    }

    #[test]
    fn half_values_agree_with_tables() {
        let r = references();
        for h in &r.hecke_at_half {
            let t = r.table(h.level).unwrap();
            let col = t.columns.iter().position(|c| c.d == h.d).unwrap();
            assert_eq!(t.expected().unwrap()[col][0], parse_rational(&h.value).unwrap());
        }
    }
}

use num_bigint::BigUint;
use serde::Serialize;

use crate::density::models::polyo_block;
use crate::density::{count_fillings, iterate_recurrence};
use crate::error::{Error, Result};
use crate::formulas::{
    every_row_walls_count, first_column_walls_count, four_column_walls_count, multi_column_walls_count,
    two_col_intro_count, vertical_walls_count, vertical_walls_count_fixed, HeightList,
};
use crate::models::Model;
use crate::shapes::families::{
    every_row_walls, multi_column_walls, polyomino, two_column, two_column_vertical, TwoColumnPattern,
};
use crate::shapes::{build_poset, count_linear_extensions, ShapeSpec, MAX_ORACLE_ELEMENTS};

/// Ranges covered by [`cross_validate`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Small,
    Full,
}

impl Suite {
    fn vertical_max(self) -> usize {
        match self {
            Suite::Small => 5,
            Suite::Full => 8,
        }
    }

    fn first_column_max(self) -> usize {
        match self {
            Suite::Small => 5,
            Suite::Full => 9,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CrossRow {
    pub model: String,
    pub case: String,
    #[serde(serialize_with = "ser_count")]
    pub formula: Option<BigUint>,
    #[serde(serialize_with = "ser_count")]
    pub oracle: Option<BigUint>,
    #[serde(serialize_with = "ser_count")]
    pub density: Option<BigUint>,
    pub agree: bool,
}

fn ser_count<S: serde::Serializer>(v: &Option<BigUint>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(x) => s.serialize_str(&x.to_string()),
        None => s.serialize_none(),
    }
}

impl CrossRow {
    fn new(model: &str, case: String, formula: Option<BigUint>, oracle: Option<BigUint>, density: Option<BigUint>) -> Self {
        let present: Vec<&BigUint> = [&formula, &oracle, &density].into_iter().flatten().collect();
        let agree = present.len() >= 2 && present.windows(2).all(|w| w[0] == w[1]);
        CrossRow {
            model: model.to_string(),
            case,
            formula,
            oracle,
            density,
            agree,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CrossReport {
    pub rows: Vec<CrossRow>,
    pub disagreements: usize,
}

impl CrossReport {
    pub fn passed(&self) -> bool {
        self.disagreements == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &CrossRow> {
        self.rows.iter().filter(|r| !r.agree)
    }

    /// `Err(Consistency)` naming the first disagreeing row, if any.
    pub fn into_result(self) -> Result<CrossReport> {
        if let Some(r) = self.failures().next() {
            return Err(Error::consistency(format!(
                "{} disagreement(s); first: {} {} (formula {}, oracle {}, density {})",
                self.disagreements,
                r.model,
                r.case,
                show(&r.formula),
                show(&r.oracle),
                show(&r.density)
            )));
        }
        Ok(self)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn to_table(&self) -> String {
        let head = ["model", "case", "formula", "oracle", "density", "ok"];
        let body: Vec<[String; 6]> = self
            .rows
            .iter()
            .map(|r| {
                [
                    r.model.clone(),
                    r.case.clone(),
                    show(&r.formula),
                    show(&r.oracle),
                    show(&r.density),
                    if r.agree { "yes".into() } else { "NO".into() },
                ]
            })
            .collect();
        let mut width = head.map(str::len);
        for row in &body {
            for (w, c) in width.iter_mut().zip(row) {
                *w = (*w).max(c.chars().count());
            }
        }
        let line = |cells: [&str; 6]| {
            let mut s = String::new();
            for (i, c) in cells.iter().enumerate() {
                s.push_str(&format!("{c:<w$}", w = width[i]));
                s.push_str(if i + 1 < 6 { "  " } else { "\n" });
            }
            s.trim_end().to_string() + "\n"
        };
        let mut out = line(head);
        for row in &body {
            out.push_str(&line([&row[0], &row[1], &row[2], &row[3], &row[4], &row[5]]));
        }
        out.push_str(&format!("{} rows, {} disagreements\n", self.rows.len(), self.disagreements));
        out
    }
}

fn show(v: &Option<BigUint>) -> String {
    v.as_ref().map_or_else(|| "-".into(), |x| x.to_string())
}

fn oracle(shape: &ShapeSpec) -> Result<BigUint> {
    count_linear_extensions(&build_poset(shape))
}

fn rows_label(rows: &[usize]) -> String {
    let list: Vec<String> = rows.iter().map(usize::to_string).collect();
    format!("[{}]", list.join(","))
}

fn polyomino_rows(out: &mut Vec<CrossRow>) -> Result<()> {
    let tower = iterate_recurrence(&polyo_block(), 4)?;
    for n in 0..=4 {
        let density = count_fillings(&tower, n)?.count;
        let oracle = oracle(&polyomino(n)?)?;
        out.push(CrossRow::new(Model::Polyomino.name(), format!("n={n}"), None, Some(oracle), Some(density)));
    }
    Ok(())
}

fn pattern_rows(out: &mut Vec<CrossRow>) -> Result<()> {
    for pattern in TwoColumnPattern::ALL {
        let name = Model::TwoColumn(pattern).name();
        for n in 1..=4 {
            let formula = two_col_intro_count(n as u64, pattern);
            let oracle = oracle(&two_column(n, pattern)?)?;
            out.push(CrossRow::new(name, format!("n={n}"), Some(formula), Some(oracle), None));
        }
    }
    Ok(())
}

fn vertical_rows(suite: Suite, out: &mut Vec<CrossRow>) -> Result<()> {
    for n in 1..=suite.vertical_max() {
        let mut by_k = vec![BigUint::default(); n + 1];
        for mask in 0u32..1 << n {
            let rows: Vec<usize> = (0..n).filter(|r| mask >> r & 1 == 1).collect();
            let formula = vertical_walls_count_fixed(n, &rows)?;
            let oracle = oracle(&two_column_vertical(n, &rows)?)?;
            by_k[rows.len()] += &oracle;
            out.push(CrossRow::new(
                "nx2-vertical",
                format!("n={n} rows={}", rows_label(&rows)),
                Some(formula),
                Some(oracle),
                None,
            ));
        }
        for (k, total) in by_k.into_iter().enumerate() {
            out.push(CrossRow::new(
                "nx2-vertical-sum",
                format!("n={n} k={k}"),
                Some(vertical_walls_count(n as u64, k as u64)?),
                Some(total),
                None,
            ));
        }
    }
    Ok(())
}

fn heights_of(h: &HeightList) -> Vec<usize> {
    h.heights().iter().map(|&x| x as usize).collect()
}

fn first_column_rows(suite: Suite, out: &mut Vec<CrossRow>) -> Result<()> {
    for n in 1..=suite.first_column_max() {
        for h in HeightList::all(n as u64) {
            let hs = heights_of(&h);
            let formula = first_column_walls_count(&h)?;
            let oracle = oracle(&multi_column_walls(n, 2, &hs)?)?;
            out.push(CrossRow::new(
                "nx2-first-col",
                format!("n={n} h={}", rows_label(&hs)),
                Some(formula),
                Some(oracle),
                None,
            ));
        }
    }
    Ok(())
}

fn multi_column_rows(out: &mut Vec<CrossRow>) -> Result<()> {
    for m in [3usize, 4] {
        for n in 1..=MAX_ORACLE_ELEMENTS / m {
            for h in HeightList::all(n as u64) {
                let hs = heights_of(&h);
                let oracle = oracle(&multi_column_walls(n, m, &hs)?)?;
                let case = format!("m={m} n={n} h={}", rows_label(&hs));
                let formula = multi_column_walls_count(m as u64, &h)?;
                out.push(CrossRow::new("nxm-walls", case.clone(), Some(formula), Some(oracle.clone()), None));
                if m == 4 {
                    let formula = four_column_walls_count(&h)?;
                    out.push(CrossRow::new("nx4-walls", case, Some(formula), Some(oracle), None));
                }
            }
        }
    }
    Ok(())
}

fn every_row_rows(out: &mut Vec<CrossRow>) -> Result<()> {
    for m in 1..=24usize {
        for n in 1..=24 / m {
            let formula = every_row_walls_count(n as u64, m as u64);
            let oracle = oracle(&every_row_walls(n, m)?)?;
            out.push(CrossRow::new(
                Model::RowWalls.name(),
                format!("n={n} m={m}"),
                Some(formula),
                Some(oracle),
                None,
            ));
        }
    }
    Ok(())
}

/// Formula, oracle and density counts side by side for every built-in model at oracle scale.
pub fn cross_validate(suite: Suite) -> Result<CrossReport> {
    let mut rows = Vec::new();
    polyomino_rows(&mut rows)?;
    pattern_rows(&mut rows)?;
    vertical_rows(suite, &mut rows)?;
    first_column_rows(suite, &mut rows)?;
    multi_column_rows(&mut rows)?;
    every_row_rows(&mut rows)?;
    let disagreements = rows.iter().filter(|r| !r.agree).count();
    Ok(CrossReport { rows, disagreements })
}


#[cfg(test)]
mod suite_tests {
    use super::*;

    #[test]
    fn small_suite_agrees() {
        let report = cross_validate(Suite::Small).unwrap();
        assert!(report.rows.len() > 100);
        let bad: Vec<String> = report.failures().map(|r| format!("{} {}", r.model, r.case)).collect();
        assert!(bad.is_empty(), "{bad:?}");
    }
}

use std::collections::HashSet;
use std::time::Instant;

use num_bigint::BigUint;
use walltab::density::models::polyo_block;
use walltab::density::{
    count_fillings, derive_kernel, iterate_recurrence, load_tower, save_tower, tower_to_json,
};
use walltab::exactmath::{MultiPoly, Rational};
use walltab::formulas::{
    catalan, count_coloured_paths, first_column_walls_count, lemma_fillings_count,
    lemma_fillings_rewritten, multi_column_walls_count, path_to_tableau, tableau_to_coloured_path,
    vertical_walls_count, wall_count_pmf, HeightList,
};
use walltab::shapes::families::two_column_vertical;
use walltab::shapes::{build_poset, enumerate_fillings};
use walltab::stats::{cross_validate, Suite};
use walltab::{Error, Result};

pub struct Outcome {
    pub name: &'static str,
    pub result: Result<String>,
    pub seconds: f64,
}

fn fail(msg: impl Into<String>) -> Error {
    Error::Consistency(msg.into())
}

/// How the reconciliation report is echoed before the check lines.
#[derive(Clone, Copy)]
pub enum Echo {
    Table,
    Json,
}

fn reconciliation(suite: Suite, echo: Option<Echo>) -> Result<String> {
    let report = cross_validate(suite)?;
    match echo {
        Some(Echo::Table) => print!("{}", report.to_table()),
        Some(Echo::Json) => println!("{}", report.to_json()),
        None => {}
    }
    let rows = report.rows.len();
    report.into_result()?;
    Ok(format!("{rows} rows agree"))
}

fn integrality(depth: usize) -> Result<String> {
    let tower = iterate_recurrence(&polyo_block(), depth)?;
    for n in 0..=depth {
        count_fillings(&tower, n)?;
    }
    Ok(format!("f_0..f_{depth} integral"))
}

fn printed_kernel() -> Result<MultiPoly> {
    let vars = ["x", "z"];
    let t = |c: i64, a: u32, b: u32| (vec![a, b], Rational::from_integer(c.into()));
    let left = MultiPoly::from_terms(&vars, [t(1, 0, 1), t(-1, 0, 0)])?;
    let mid = MultiPoly::from_terms(&vars, [t(1, 1, 0), t(-1, 0, 1)])?;
    let cubic = MultiPoly::from_terms(
        &vars,
        [t(3, 3, 0), t(-7, 2, 1), t(-1, 1, 2), t(-1, 0, 3), t(-2, 2, 0), t(4, 1, 1), t(4, 0, 2)],
    )?;
    Ok(left
        .try_mul(&mid)?
        .try_mul(&cubic)?
        .scale(&Rational::new(1.into(), 24.into())))
}

fn kernel() -> Result<String> {
    let block = polyo_block();
    let mut tower = iterate_recurrence(&block, 6)?;
    let k = derive_kernel(&block, &mut tower)?;
    let want = printed_kernel()?;
    if k.poly() != &want {
        return Err(fail(format!("derived {}, expected {want}", k.poly())));
    }
    for n in 0..6 {
        if k.apply(&tower.poly(n)) != tower.poly(n + 1) {
            return Err(fail(format!("kernel does not map p_{n} to p_{}", n + 1)));
        }
    }
    Ok(format!("Q(x,z) = {}", k.poly()))
}

fn identities() -> Result<String> {
    for n in 1..=50u64 {
        let total: BigUint = (0..=n).map(|k| vertical_walls_count(n, k)).sum::<Result<_>>()?;
        let want = catalan(n) * ((BigUint::from(1u32) << (n + 1)) - 1u32);
        if total != want {
            return Err(fail(format!("sum of v(n,k) at n={n}: {total} vs {want}")));
        }
        let mass: Rational = wall_count_pmf(n)?.iter().sum();
        if mass != Rational::from_integer(1.into()) {
            return Err(fail(format!("pmf at n={n} sums to {mass}")));
        }
    }
    for n in 1..=12u64 {
        for lambda in 1..=n {
            let a = Rational::from_integer(lemma_fillings_count(n, lambda)?.into());
            let b = lemma_fillings_rewritten(n, lambda)?;
            if a != b {
                return Err(fail(format!("lemma forms differ at n={n}, λ={lambda}")));
            }
        }
    }
    for n in 1..=6u64 {
        for h in HeightList::all(n) {
            if multi_column_walls_count(2, &h)? != first_column_walls_count(&h)? {
                return Err(fail(format!("m=2 specialization differs at n={n}, h={:?}", h.heights())));
            }
        }
    }
    Ok("vertical-wall sums, pmf mass, lemma forms, m=2 specialization".into())
}

fn bijection(max_n: usize) -> Result<String> {
    let mut checked = 0usize;
    for n in 1..=max_n {
        let mut paths = HashSet::new();
        for mask in 0u32..1 << n {
            let rows: Vec<usize> = (0..n).filter(|r| mask >> r & 1 == 1).collect();
            let shape = two_column_vertical(n, &rows)?;
            for filling in enumerate_fillings(&build_poset(&shape), usize::MAX)? {
                let path = tableau_to_coloured_path(&shape, &filling)?;
                if path.red_count() != rows.len() {
                    return Err(fail(format!("red steps {} vs walls {rows:?}", path.red_count())));
                }
                let (back_shape, back) = path_to_tableau(&path)?;
                if back_shape != shape || back != filling {
                    return Err(fail(format!("roundtrip differs for n={n}, walls {rows:?}, {filling}")));
                }
                if !paths.insert(path) {
                    return Err(fail(format!("two fillings share a path at n={n}")));
                }
                checked += 1;
            }
        }
        if BigUint::from(paths.len()) != count_coloured_paths(n) {
            return Err(fail(format!("n={n}: {} paths hit, {} exist", paths.len(), count_coloured_paths(n))));
        }
    }
    Ok(format!("{checked} fillings roundtrip, n ≤ {max_n}"))
}

fn cache() -> Result<String> {
    let block = polyo_block();
    let tower = iterate_recurrence(&block, 6)?;
    let dir = std::env::temp_dir().join(format!("walltab-verify-{}", std::process::id()));
    let path = dir.join("tower.json");
    let run = || -> Result<String> {
        save_tower(&tower, &path)?;
        let back = load_tower(&path, &block)?;
        if tower_to_json(&back) != tower_to_json(&tower) {
            return Err(fail("reloaded tower differs"));
        }
        let mut doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path)?)?;
        let coeffs = doc["levels"][1]["coeffs"].as_array_mut().ok_or_else(|| fail("unexpected cache layout"))?;
        let last = coeffs.last_mut().ok_or_else(|| fail("empty level"))?;
        *last = serde_json::Value::String(format!("{}1", last.as_str().unwrap_or("0")));
        std::fs::write(&path, serde_json::to_string(&doc)?)?;
        match load_tower(&path, &block) {
            Err(Error::Cache(msg)) => Ok(format!("roundtrip exact; tampered file rejected ({msg})")),
            Err(e) => Err(e),
            Ok(_) => Err(fail("tampered cache was accepted")),
        }
    };
    let out = run();
    let _ = std::fs::remove_dir_all(&dir);
    out
}

pub fn run(suite: Suite, echo: Option<Echo>) -> Vec<Outcome> {
    let depth = match suite {
        Suite::Small => 12,
        Suite::Full => 40,
    };
    let checks: Vec<(&'static str, Box<dyn Fn() -> Result<String>>)> = vec![
        ("reconciliation", Box::new(move || reconciliation(suite, echo))),
        ("integrality", Box::new(move || integrality(depth))),
        ("kernel", Box::new(kernel)),
        ("identities", Box::new(identities)),
        ("bijection", Box::new(|| bijection(4))),
        ("cache", Box::new(cache)),
    ];
    checks
        .into_iter()
        .map(|(name, f)| {
            let start = Instant::now();
            let result = f();
            Outcome {
                name,
                result,
                seconds: start.elapsed().as_secs_f64(),
            }
        })
        .collect()
}

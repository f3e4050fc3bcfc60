//! One PASS/FAIL line per acceptance criterion; exits nonzero if any fails.

use std::collections::{HashMap, HashSet};
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use walltab::density::models::polyo_block;
use walltab::density::{
    count_fillings, derive_kernel, iterate_recurrence, load_tower, save_tower, tower_to_json,
    DensityTower,
};
use walltab::exactmath::{MultiPoly, Rational};
use walltab::formulas::{
    catalan, first_column_walls_count, lemma_fillings_count, lemma_fillings_rewritten,
    multi_column_walls_count, path_to_tableau, tableau_to_coloured_path, vertical_walls_count,
    wall_count_pmf, HeightList,
};
use walltab::sampler::{RngState, Sampler};
use walltab::shapes::families::{polyomino, two_column_vertical};
use walltab::shapes::{build_poset, count_linear_extensions, enumerate_fillings, is_valid_filling};
use walltab::stats::{chi_square_uniformity, cross_validate, Suite, SIGNIFICANCE};

type Check = Result<String, String>;

/// The twelve terms as printed, `f_0` first.
const PRINTED: [&str; 12] = [
    "1",
    "12",
    "8550",
    "39235950",
    "629738299350",
    "26095645151941500",
    "2323497950101372223250",
    "392833430654718548673344250",
    "115375222087417545717234273063750",
    "55038140590519890608190921051205837500",
    "40460077456664688766902540022810130044068750",
    "4393840235884118464495128448703896167747914784375",
];

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn sequence() -> Check {
    let start = Instant::now();
    let tower = iterate_recurrence(&polyo_block(), 11).map_err(err)?;
    let got: Vec<String> = (0..=11)
        .map(|n| count_fillings(&tower, n).map(|r| r.count.to_string()))
        .collect::<Result<_, _>>()
        .map_err(err)?;
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(60) {
        return Err(format!("took {elapsed:?}"));
    }
    let bad: Vec<String> = got
        .iter()
        .zip(PRINTED)
        .enumerate()
        .filter(|(_, (g, p))| g.as_str() != *p)
        .map(|(n, (g, p))| format!("f_{n} computed {g}, printed {p}"))
        .collect();
    if bad.is_empty() {
        Ok(format!("f_0..f_11 exact in {elapsed:?}"))
    } else {
        Err(format!("{} in {elapsed:?}", bad.join("; ")))
    }
}

fn oracle_equivalence() -> Check {
    let tower = iterate_recurrence(&polyo_block(), 4).map_err(err)?;
    let mut cells = Vec::new();
    for n in 1..=4 {
        let shape = polyomino(n).map_err(err)?;
        let oracle = count_linear_extensions(&build_poset(&shape)).map_err(err)?;
        let density = count_fillings(&tower, n).map_err(err)?.count;
        if oracle != density {
            return Err(format!("n={n}: oracle {oracle}, density {density}"));
        }
        cells.push(shape.len().to_string());
    }
    Ok(format!("n=1..4 with {} cells", cells.join("/")))
}

fn kernel_identity() -> Check {
    let vars = ["x", "z"];
    let t = |c: i64, a: u32, b: u32| (vec![a, b], Rational::from_integer(c.into()));
    let factor = |terms: Vec<(Vec<u32>, Rational)>| MultiPoly::from_terms(&vars, terms).map_err(err);
    let want = factor(vec![t(1, 0, 1), t(-1, 0, 0)])?
        .try_mul(&factor(vec![t(1, 1, 0), t(-1, 0, 1)])?)
        .and_then(|p| {
            p.try_mul(&MultiPoly::from_terms(
                &vars,
                [t(3, 3, 0), t(-7, 2, 1), t(-1, 1, 2), t(-1, 0, 3), t(-2, 2, 0), t(4, 1, 1), t(4, 0, 2)],
            )?)
        })
        .map_err(err)?
        .scale(&Rational::new(1.into(), 24.into()));
    let block = polyo_block();
    let mut tower = iterate_recurrence(&block, 2).map_err(err)?;
    let k = derive_kernel(&block, &mut tower).map_err(err)?;
    if k.poly() == &want {
        Ok(format!("{} terms match", want.len()))
    } else {
        Err(format!("derived {}, expected {want}", k.poly()))
    }
}

fn closed_forms() -> Check {
    let report = cross_validate(Suite::Small).map_err(err)?;
    let families: HashSet<&str> = report.rows.iter().map(|r| r.model.as_str()).collect();
    for family in [
        "nx2-no-walls",
        "nx2-vertical-all",
        "nx2-horizontal-all",
        "nx2-left-col",
        "nx2-walls-all",
        "nx2-vertical",
        "nx2-vertical-sum",
        "nx2-first-col",
        "nxm-walls",
        "nx4-walls",
        "nxm-rowwalls",
    ] {
        if !families.contains(family) {
            return Err(format!("no rows for {family}"));
        }
    }
    let rows = report.rows.len();
    report.into_result().map_err(err)?;
    Ok(format!("{rows} rows, zero disagreements"))
}

fn identities() -> Check {
    let one = Rational::from_integer(1.into());
    for n in 1..=50u64 {
        let total: BigUint = (0..=n)
            .map(|k| vertical_walls_count(n, k))
            .sum::<Result<_, _>>()
            .map_err(err)?;
        if total != catalan(n) * ((BigUint::from(1u32) << (n + 1)) - 1u32) {
            return Err(format!("vertical-wall sum at n={n}"));
        }
        if wall_count_pmf(n).map_err(err)?.iter().sum::<Rational>() != one {
            return Err(format!("pmf mass at n={n}"));
        }
    }
    for n in 1..=12u64 {
        for l in 1..=n {
            let a = Rational::from_integer(lemma_fillings_count(n, l).map_err(err)?.into());
            if a != lemma_fillings_rewritten(n, l).map_err(err)? {
                return Err(format!("lemma forms at n={n}, λ={l}"));
            }
        }
    }
    for n in 1..=6u64 {
        for h in HeightList::all(n) {
            if multi_column_walls_count(2, &h).map_err(err)? != first_column_walls_count(&h).map_err(err)? {
                return Err(format!("m=2 at n={n}, {:?}", h.heights()));
            }
        }
    }
    Ok("sums n≤50, pmf n≤50, lemma n≤12, m=2 n≤6".into())
}

fn bijection() -> Check {
    let mut count = 0;
    for n in 1..=4usize {
        let mut seen = HashSet::new();
        for mask in 0u32..1 << n {
            let rows: Vec<usize> = (0..n).filter(|r| mask >> r & 1 == 1).collect();
            let shape = two_column_vertical(n, &rows).map_err(err)?;
            for f in enumerate_fillings(&build_poset(&shape), usize::MAX).map_err(err)? {
                let path = tableau_to_coloured_path(&shape, &f).map_err(err)?;
                if path.red_count() != rows.len() {
                    return Err(format!("n={n} walls {rows:?}: {} red steps", path.red_count()));
                }
                if path_to_tableau(&path).map_err(err)? != (shape.clone(), f.clone()) {
                    return Err(format!("roundtrip fails for {f} with walls {rows:?}"));
                }
                if !seen.insert(path) {
                    return Err(format!("n={n}: path reached twice"));
                }
                count += 1;
            }
        }
    }
    Ok(format!("{count} fillings, n ≤ 4"))
}

/// Chi-square of `samples` draws at size `n` against all fillings, by majority over three seeds.
fn uniform_at(tower: &DensityTower, n: usize, samples: u64) -> Check {
    let shape = polyomino(n).map_err(err)?;
    let all = enumerate_fillings(&build_poset(&shape), 100_000).map_err(err)?;
    let index: HashMap<Vec<u32>, usize> = all.iter().enumerate().map(|(i, f)| (f.labels().to_vec(), i)).collect();
    let sampler = Sampler::new(tower, n).map_err(err)?;
    let run = |seed: u64| -> Result<f64, String> {
        let mut rng = RngState::new(seed);
        let mut counts = vec![0u64; all.len()];
        for _ in 0..samples {
            let s = sampler.sample_polyomino(&mut rng).map_err(err)?;
            let f = sampler.filling_on_shape(s.filling.labels(), false, &shape).map_err(err)?;
            if !is_valid_filling(&shape, &f).map_err(err)? {
                return Err(format!("invalid sample {f}"));
            }
            counts[index[f.labels()]] += 1;
        }
        Ok(chi_square_uniformity(&counts, &vec![1.0; all.len()]).map_err(err)?.p_value)
    };
    // Majority of three seeds; stop once the outcome is decided.
    let mut p = Vec::new();
    for seed in 1..=3u64 {
        p.push(run(seed)?);
        let accepted = p.iter().filter(|&&p| p > SIGNIFICANCE).count();
        if accepted >= 2 || p.len() - accepted >= 2 {
            break;
        }
    }
    let accepted = p.iter().filter(|&&p| p > SIGNIFICANCE).count();
    let p_values: Vec<String> = p.iter().map(|p| format!("{p:.3}")).collect();
    let msg = format!("n={n}: {} outcomes, {samples} samples, p = {}", all.len(), p_values.join(", "));
    if accepted >= 2 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn uniformity() -> Check {
    let tower = iterate_recurrence(&polyo_block(), 2).map_err(err)?;
    let a = uniform_at(&tower, 1, 60_000)?;
    let b = uniform_at(&tower, 2, 500_000)?;
    Ok(format!("{a}; {b}; all samples valid"))
}

fn determinism() -> Check {
    let tower = iterate_recurrence(&polyo_block(), 6).map_err(err)?;
    let sampler = Sampler::new(&tower, 6).map_err(err)?;
    let stream = || -> Result<Vec<u64>, String> {
        let mut rng = RngState::new(2024);
        let mut bits = Vec::new();
        for _ in 0..50 {
            let s = sampler.sample_polyomino(&mut rng).map_err(err)?;
            bits.extend(s.values.iter().map(|v| v.to_bits()));
            bits.extend(s.filling.labels().iter().map(|&l| l as u64));
        }
        let t = sampler.sample_tableau(&mut rng, 1_000_000).map_err(err)?;
        bits.extend(t.labels.iter().map(|&l| l as u64));
        Ok(bits)
    };
    let (a, b) = (stream()?, stream()?);
    if a == b {
        Ok(format!("{} words identical", a.len()))
    } else {
        Err("streams differ".into())
    }
}

fn per_sample(tower: &DensityTower, n: usize, reps: u32) -> Result<Duration, String> {
    let sampler = Sampler::new(tower, n).map_err(err)?;
    let mut rng = RngState::new(5);
    sampler.sample_polyomino(&mut rng).map_err(err)?;
    let start = Instant::now();
    for _ in 0..reps {
        sampler.sample_polyomino(&mut rng).map_err(err)?;
    }
    Ok(start.elapsed() / reps)
}

fn performance() -> Check {
    let start = Instant::now();
    let tower = iterate_recurrence(&polyo_block(), 100).map_err(err)?;
    let sampler = Sampler::new(&tower, 100).map_err(err)?;
    sampler.sample_polyomino(&mut RngState::new(1)).map_err(err)?;
    let total = start.elapsed();
    let t25 = per_sample(&tower, 25, 40)?;
    let t50 = per_sample(&tower, 50, 20)?;
    let t100 = per_sample(&tower, 100, 10)?;
    let r1 = t50.as_secs_f64() / t25.as_secs_f64();
    let r2 = t100.as_secs_f64() / t50.as_secs_f64();
    let msg = format!(
        "n=100 build+sample {total:?}; per sample {t25:?}/{t50:?}/{t100:?}, ratios {r1:.2} and {r2:.2}"
    );
    if total < Duration::from_secs(30) && r1 <= 8.0 && r2 <= 8.0 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn cache() -> Check {
    let block = polyo_block();
    let tower = iterate_recurrence(&block, 15).map_err(err)?;
    let dir = std::env::temp_dir().join(format!("walltab-acceptance-{}", std::process::id()));
    let path = dir.join("tower.json");
    let result = (|| {
        save_tower(&tower, &path).map_err(err)?;
        let mut back = load_tower(&path, &block).map_err(err)?;
        if back.polys() != tower.polys() || tower_to_json(&back) != tower_to_json(&tower) {
            return Err("reloaded tower differs".to_string());
        }
        let computed = back.extend_to(15).map_err(err)?;
        if computed != 0 {
            return Err(format!("warm extend recomputed {computed} levels"));
        }
        let more = back.extend_to(17).map_err(err)?;
        let fresh = iterate_recurrence(&block, 17).map_err(err)?;
        if more != 2 || back.polys() != fresh.polys() {
            return Err("extension after load differs".into());
        }
        Ok("bit-exact roundtrip; warm load computes 0 levels".to_string())
    })();
    let _ = std::fs::remove_dir_all(&dir);
    result
}

fn main() {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("sequence reproduction", sequence),
        ("oracle equivalence", oracle_equivalence),
        ("kernel identity", kernel_identity),
        ("closed forms vs oracle", closed_forms),
        ("identities", identities),
        ("bijection", bijection),
        ("sampler uniformity", uniformity),
        ("determinism", determinism),
        ("performance envelope", performance),
        ("cache", cache),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("PASS {name} ({secs:.1} s): {msg}"),
            Err(msg) => {
                failed += 1;
                println!("FAIL {name} ({secs:.1} s): {msg}");
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

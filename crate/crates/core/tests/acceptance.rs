//! Acceptance suite. Runs each criterion once, prints one PASS/FAIL line per
//! criterion with its runtime against the budget, and exits nonzero if any
//! criterion fails.
//!
//! cargo test -p lesiondx --test acceptance

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use lesiondx::cli;
use lesiondx::evaluation::normalized_multiclass_accuracy;
use lesiondx::pipeline::evaluate_rows;
use lesiondx::submission::{read_submission, read_truth, SubmissionRow};
use lesiondx::{
    apply_shades_of_gray, correct_rgb_image, decide, decode_mask, encode_mask, estimate_illuminant,
    frequency_priority_table, malignancy_priority_table, voc_palette, AbsentMode, ClassHistogram, ConfusionMatrix,
    DiagnosisVector, LabelMask, LesionClass, LinearRgbImage, NormOrder, RgbImage, Strategy,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

mod common;
use common::{class_subsets, decision_oracle, gray_world_oracle, recall_oracle, rel_close};

type Outcome = Result<String, String>;
type Criterion = (&'static str, u64, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {{
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($fmt)+));
        }
    }};
}

fn priority_tables() -> Outcome {
    use LesionClass::*;
    let freq = frequency_priority_table();
    let mal = malignancy_priority_table();
    ensure!(freq.ranking() == &[Df, Vasc, Akiec, Bcc, Bkl, Mel, Nv], "frequency order {:?}", freq.ranking());
    ensure!(mal.ranking() == &[Df, Bcc, Mel, Vasc, Akiec, Bkl, Nv], "malignancy order {:?}", mal.ranking());
    ensure!(mal.rank(Akiec) < mal.rank(Bkl), "AKIEC must precede BKL");
    let counts: BTreeMap<_, _> = lesiondx::class::TRAINING_IMAGE_COUNTS.into_iter().collect();
    let ordered: Vec<u32> = freq.ranking().iter().map(|c| counts[c]).collect();
    ensure!(ordered == [115, 142, 327, 514, 1099, 1113, 6705], "training counts {ordered:?}");
    Ok("both tables match".into())
}

fn strategy_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(127);
    let mut checked = 0usize;
    for subset in class_subsets() {
        for trial in 0..50 {
            let hi = if trial % 2 == 0 { 4 } else { 10_000 };
            let counts: Vec<_> = subset.iter().map(|&c| (c, rng.random_range(1..=hi))).collect();
            let hist = ClassHistogram::from_pairs(counts.iter().copied());
            for strategy in Strategy::ALL {
                let got = decide(&hist, strategy).one_hot_class();
                let want = decision_oracle(strategy, &counts);
                ensure!(got == Some(want), "{strategy} on {counts:?}: got {got:?}, oracle {want}");
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} decisions, 0 mismatches"))
}

fn decision_rules() -> Outcome {
    use LesionClass::*;
    for strategy in Strategy::ALL {
        for class in LesionClass::ALL {
            let v = decide(&ClassHistogram::from_pairs([(class, 42)]), strategy);
            ensure!(v == DiagnosisVector::one_hot(class) && v.confidence(class) == 1.0, "{strategy}: single {class}");
        }
        let v = decide(&ClassHistogram::new(), strategy);
        ensure!(v.confidence(Nv) == 1.0 && v.one_hot_class() == Some(Nv), "{strategy}: empty mask gave {v:?}");
    }
    let mixed = ClassHistogram::from_pairs([(Mel, 100), (Nv, 50)]);
    let v = decide(&mixed, Strategy::PixelMajority);
    ensure!(v.one_hot_class() == Some(Mel), "MEL:100 NV:50 gave {v:?}");
    Ok("single, empty and majority rules hold".into())
}

fn color_constancy() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for i in 0..100 {
        let px: Vec<[f64; 3]> = (0..256)
            .map(|_| [rng.random_range(1.0..255.0), rng.random_range(1.0..255.0), rng.random_range(1.0..255.0)])
            .collect();
        let img = LinearRgbImage::new(16, 16, px).map_err(|e| e.to_string())?;
        let out = apply_shades_of_gray(&img, NormOrder::Finite(1.0)).map_err(|e| e.to_string())?;
        for (got, want) in out.pixels().iter().zip(gray_world_oracle(img.pixels())) {
            for c in 0..3 {
                ensure!(rel_close(got[c], want[c], 1e-9), "image {i}: {} vs oracle {}", got[c], want[c]);
            }
        }
        for p in [NormOrder::Finite(1.0), NormOrder::Finite(6.0), NormOrder::Infinity] {
            let corrected = apply_shades_of_gray(&img, p).map_err(|e| e.to_string())?;
            let e = estimate_illuminant(&corrected, p).map_err(|e| e.to_string())?.e;
            let ratio = e.iter().copied().fold(f64::MIN, f64::max) / e.iter().copied().fold(f64::MAX, f64::min);
            ensure!(ratio <= 1.0 + 1e-9, "image {i}, p={p}: re-estimate {e:?}");
        }
    }
    for v in 0..=255u8 {
        let gray = RgbImage::filled(16, 16, [v, v, v]).map_err(|e| e.to_string())?;
        for p in [NormOrder::Finite(1.0), NormOrder::Finite(6.0), NormOrder::Infinity] {
            match correct_rgb_image(&gray, p) {
                Ok(out) => ensure!(out == gray, "gray {v} changed under p={p}"),
                // All-zero channels have no illuminant to estimate.
                Err(_) if v == 0 => {}
                Err(e) => return Err(format!("gray {v}: {e}")),
            }
        }
    }
    Ok("gray-world oracle, achromatic re-estimate, gray fixed points".into())
}

fn mask_codec() -> Outcome {
    const VOC_HEAD: [[u8; 3]; 8] = [
        [0, 0, 0],
        [128, 0, 0],
        [0, 128, 0],
        [128, 128, 0],
        [0, 0, 128],
        [128, 0, 128],
        [0, 128, 128],
        [128, 128, 128],
    ];
    let palette = voc_palette();
    for (i, rgb) in VOC_HEAD.iter().enumerate() {
        ensure!(palette.get(i as u8) == *rgb, "palette {i} is {:?}", palette.get(i as u8));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(200);
    for i in 0..200 {
        let (w, h) = (rng.random_range(1..=96), rng.random_range(1..=96));
        let labels = (0..w * h).map(|_| rng.random_range(0..=7u8)).collect();
        let mask = LabelMask::new(w, h, labels).map_err(|e| e.to_string())?;
        let bytes = encode_mask(&mask).map_err(|e| e.to_string())?;
        let back = decode_mask(&bytes).map_err(|e| e.to_string())?;
        ensure!(back == mask, "mask {i} ({w}x{h}) did not round-trip");
    }
    Ok("200 masks round-trip, palette 0-7 correct".into())
}

fn metric() -> Outcome {
    let mut diag = ConfusionMatrix::new();
    for class in LesionClass::ALL {
        for _ in 0..5 {
            diag.add(class, class);
        }
    }
    let mut half = ConfusionMatrix::new();
    half.add(LesionClass::Mel, LesionClass::Mel);
    half.add(LesionClass::Mel, LesionClass::Mel);
    half.add(LesionClass::Nv, LesionClass::Nv);
    half.add(LesionClass::Nv, LesionClass::Mel);
    let mut constant = ConfusionMatrix::new();
    for class in LesionClass::ALL {
        for _ in 0..10 {
            constant.add(class, LesionClass::Nv);
        }
    }
    for (name, cm, want) in [("diagonal", diag, 1.0), ("recalls 1.0/0.5", half, 0.75), ("constant", constant, 1.0 / 7.0)] {
        let got = normalized_multiclass_accuracy(&cm).map_err(|e| e.to_string())?;
        ensure!((got - want).abs() <= 1e-12, "{name}: {got} vs {want}");
    }

    let mut rng = ChaCha8Rng::seed_from_u64(1000);
    for i in 0..1000 {
        let mut cells = [[0u64; 7]; 7];
        for row in &mut cells {
            for v in row.iter_mut() {
                *v = if rng.random_bool(0.3) { 0 } else { rng.random_range(0..50) };
            }
        }
        if i % 10 == 0 {
            cells[rng.random_range(0..7)] = [0; 7];
        }
        let got = normalized_multiclass_accuracy(&ConfusionMatrix::from_cells(cells)).ok();
        let want = recall_oracle(&cells);
        match (got, want) {
            (Some(g), Some(w)) => ensure!((g - w).abs() <= 1e-12, "matrix {i}: {g} vs {w}"),
            (None, None) => {}
            _ => return Err(format!("matrix {i}: presence mismatch {got:?} vs {want:?}")),
        }
    }
    Ok("fixtures and 1000 random matrices agree".into())
}

fn run_cli(args: &[&str]) -> Result<String, String> {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cli::run(std::iter::once("lesiondx").chain(args.iter().copied()), &mut out, &mut err);
    if code != cli::EXIT_OK {
        return Err(format!("{args:?} exited {code}: {}", String::from_utf8_lossy(&err)));
    }
    Ok(String::from_utf8_lossy(&out).into_owned())
}

fn path_str(p: &Path) -> &str {
    p.to_str().expect("utf-8 temp path")
}

/// Every file under `root`, keyed by relative path.
fn snapshot(root: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut files = BTreeMap::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for entry in fs::read_dir(&dir).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                let rel = path.strip_prefix(root).unwrap().to_string_lossy().into_owned();
                files.insert(rel, fs::read(&path).unwrap());
            }
        }
    }
    files
}

const STRATEGY_NAMES: [&str; 3] = ["pixel-majority", "freq-priority", "malignancy-priority"];

fn desk_run(root: &Path) -> Result<(), String> {
    let data = root.join("data");
    run_cli(&["synth", "--count", "200", "--seed", "2018", path_str(&data)])?;
    let masks = data.join("masks");
    let truth = data.join("truth.csv");
    for name in STRATEGY_NAMES {
        let pred = root.join(format!("{name}.csv"));
        run_cli(&["diagnose", path_str(&masks), "--strategy", name, "-o", path_str(&pred)])?;
        let report = root.join(format!("{name}.json"));
        run_cli(&["evaluate", path_str(&pred), path_str(&truth), "--report", path_str(&report)])?;
    }
    Ok(())
}

fn end_to_end() -> Outcome {
    let first = tempfile::tempdir().map_err(|e| e.to_string())?;
    let started = Instant::now();
    desk_run(first.path())?;
    let elapsed = started.elapsed();
    ensure!(elapsed < Duration::from_secs(30), "single run took {elapsed:?}");

    let data = first.path().join("data");
    let kinds_text = fs::read_to_string(data.join("kinds.csv")).map_err(|e| e.to_string())?;
    let kinds: BTreeMap<String, String> = kinds_text
        .lines()
        .skip(1)
        .filter_map(|l| l.split_once(','))
        .map(|(id, k)| (id.to_string(), k.to_string()))
        .collect();
    let tally = |k: &str| kinds.values().filter(|v| *v == k).count();
    let split = (tally("single"), tally("empty"), tally("two-class"));
    ensure!(split == (140, 30, 30), "split {split:?}");

    let truth = read_truth(fs::File::open(data.join("truth.csv")).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    let mut predictions: Vec<Vec<SubmissionRow>> = Vec::new();
    for name in STRATEGY_NAMES {
        let file = fs::File::open(first.path().join(format!("{name}.csv"))).map_err(|e| e.to_string())?;
        predictions.push(read_submission(file).map_err(|e| e.to_string())?);
    }

    let single_truth: Vec<_> = truth.iter().filter(|(id, _)| kinds[id] == "single").cloned().collect();
    for (name, rows) in STRATEGY_NAMES.iter().zip(&predictions) {
        let single_rows: Vec<_> = rows.iter().filter(|r| kinds[&r.image_id] == "single").cloned().collect();
        let report = evaluate_rows(&single_rows, &single_truth, AbsentMode::Exclude).map_err(|e| e.to_string())?;
        ensure!(report.normalized_multiclass_accuracy == 1.0, "{name}: single subset scored {}", report.normalized_multiclass_accuracy);
    }

    let mut two_class_diffs = BTreeSet::new();
    for i in 0..predictions[0].len() {
        let id = &predictions[0][i].image_id;
        let row: Vec<_> = predictions.iter().map(|p| p[i].confidences).collect();
        ensure!(predictions.iter().all(|p| &p[i].image_id == id), "row order differs at {i}");
        let agree = row.iter().all(|v| *v == row[0]);
        match kinds[id].as_str() {
            "two-class" if !agree => {
                two_class_diffs.insert(id.clone());
            }
            "two-class" => {}
            "empty" => ensure!(
                row.iter().all(|v| v.one_hot_class() == Some(LesionClass::Nv)),
                "{id}: empty mask did not give NV"
            ),
            _ => ensure!(agree, "{id}: strategies disagree outside the two-class subset"),
        }
    }
    ensure!(!two_class_diffs.is_empty(), "no two-class sample separated the strategies");

    let second = tempfile::tempdir().map_err(|e| e.to_string())?;
    desk_run(second.path())?;
    let (a, b) = (snapshot(first.path()), snapshot(second.path()));
    ensure!(a.keys().eq(b.keys()), "output file sets differ");
    for (path, bytes) in &a {
        ensure!(&b[path] == bytes, "{path} differs between runs");
    }
    Ok(format!(
        "split 140/30/30, single subset 1.0, {} two-class disagreements, {} files identical, run {:.2}s",
        two_class_diffs.len(),
        a.len(),
        elapsed.as_secs_f64()
    ))
}

fn preprocess() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let input = dir.path().join("in");
    run_cli(&["synth", "--count", "12", "--seed", "5", "--size", "160x120", path_str(&dir.path().join("synth"))])?;
    fs::rename(dir.path().join("synth").join("images"), &input).map_err(|e| e.to_string())?;
    // Add sizes that need both up- and down-scaling, and a JPEG.
    let mut rng = ChaCha8Rng::seed_from_u64(375);
    for (i, (w, h)) in [(640u32, 480u32), (333, 211), (500, 375), (1024, 300)].into_iter().enumerate() {
        let px = (0..w * h).map(|_| [rng.random(), rng.random(), rng.random()]).collect();
        let img = RgbImage::new(w, h, px).map_err(|e| e.to_string())?.to_buffer();
        let ext = if i == 1 { "jpg" } else { "png" };
        img.save(input.join(format!("extra_{i}.{ext}"))).map_err(|e| e.to_string())?;
    }

    let outs = [dir.path().join("out_a"), dir.path().join("out_b")];
    for out in &outs {
        run_cli(&["preprocess", path_str(&input), path_str(out)])?;
    }
    let (a, b) = (snapshot(&outs[0]), snapshot(&outs[1]));
    ensure!(a.len() == 16, "{} outputs, expected 16", a.len());
    ensure!(a == b, "outputs differ between runs");
    for (name, bytes) in &a {
        let img = image::load_from_memory(bytes).map_err(|e| format!("{name}: {e}"))?;
        ensure!((img.width(), img.height()) == (500, 375), "{name} is {}x{}", img.width(), img.height());
    }
    Ok(format!("{} images at 500x375, byte-identical reruns", a.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("priority-table constants", 1, priority_tables),
        ("decision-strategy oracle", 5, strategy_oracle),
        ("single and empty decision rules", 1, decision_rules),
        ("color constancy", 10, color_constancy),
        ("mask codec", 5, mask_codec),
        ("normalized multi-class accuracy", 5, metric),
        ("end-to-end desk run", 60, end_to_end),
        ("preprocess stage", 30, preprocess),
    ];
    let mut failures = 0;
    for (name, budget, check) in criteria {
        let started = Instant::now();
        let outcome = check();
        let elapsed = started.elapsed();
        let over = elapsed > Duration::from_secs(budget);
        let (tag, detail) = match outcome {
            Ok(_) if over => ("FAIL", format!("over budget of {budget}s")),
            Ok(detail) => ("PASS", detail),
            Err(why) => ("FAIL", why),
        };
        if tag == "FAIL" {
            failures += 1;
        }
        println!("[{tag}] {name:<32} {:>7.3}s / {budget}s  {detail}", elapsed.as_secs_f64());
    }
    println!("{} of {} criteria passed", 8 - failures, 8);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

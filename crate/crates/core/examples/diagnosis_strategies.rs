//! How the three strategies resolve masks with several classes in them.
//!
//! cargo run --example diagnosis_strategies

use lesiondx::{decide, detection_kind, ClassHistogram, LesionClass::*, Strategy};

fn main() {
    let cases = [
        ("single BKL", ClassHistogram::from_pairs([(Bkl, 300)])),
        ("nothing detected", ClassHistogram::new()),
        ("mostly MEL", ClassHistogram::from_pairs([(Mel, 100), (Nv, 50)])),
        ("NV with a little BCC", ClassHistogram::from_pairs([(Nv, 900), (Bcc, 40)])),
        ("AKIEC vs BKL tie", ClassHistogram::from_pairs([(Akiec, 60), (Bkl, 60)])),
    ];
    for (name, hist) in cases {
        print!("{name:<22} {:<9}", format!("{:?}", detection_kind(&hist)));
        for strategy in Strategy::ALL {
            let class = decide(&hist, strategy).one_hot_class().expect("one-hot");
            print!(" {strategy}={class}");
        }
        println!();
    }
}

//! Entropy, mutual information and the class-weighted MI score on small,
//! hand-checkable inputs.
//!
//! ```bash
//! cargo run --example information_measures
//! ```

use featrec::infotheory::{
    entropy, joint_mutual_information, labels_as_codes, mi_rank_score, mutual_information,
    normalized_mutual_information, MiRankMode,
};

fn main() -> featrec::Result<()> {
    println!("H(1:3 split)          = {:.6} bits", entropy(&[0, 1, 1, 1]));

    // joint counts [[2,1],[1,2]]
    let x = [0, 0, 0, 1, 1, 1];
    let y = [0, 0, 1, 0, 1, 1];
    println!("I(X;Y) for [[2,1],[1,2]] = {:.6} bits", mutual_information(&x, &y)?.bits());
    println!("symmetric uncertainty    = {:.6}", normalized_mutual_information(&x, &y)?);

    // XOR: neither input alone is informative, the pair is
    let a = [0, 0, 1, 1];
    let b = [0, 1, 0, 1];
    let c = [0, 1, 1, 0];
    println!(
        "XOR: I(a;c) = {:.3}, I(b;c) = {:.3}, I((a,b);c) = {:.3}",
        mutual_information(&a, &c)?.bits(),
        mutual_information(&b, &c)?.bits(),
        joint_mutual_information(&a, &b, &c)?
    );

    let labels = labels_as_codes(&[0, 0, 1, 1, 2, 2]);
    let feature = [0, 0, 1, 1, 1, 1];
    for mode in [MiRankMode::OneVsRest, MiRankMode::Plain] {
        println!("MIrank ({mode:?}) = {:.6}", mi_rank_score(&feature, &labels, mode)?);
    }
    Ok(())
}

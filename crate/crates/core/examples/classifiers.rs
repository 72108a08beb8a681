//! Train the MLP, the one-vs-all RBF SVM and k-NN on a four-class problem and
//! save the SVM as a versioned JSON model document.
//!
//! ```bash
//! cargo run --release --example classifiers
//! ```

use featrec::data::Standardizer;
use featrec::models::{ClassifierSpec, ModelDocument};
use featrec::synthetic::{planted, PlantedConfig};

fn main() -> featrec::Result<()> {
    let train = planted(&PlantedConfig { seed: 1, ..PlantedConfig::default() })?;
    let test = planted(&PlantedConfig { seed: 2, ..PlantedConfig::default() })?;
    let features = [0, 1, 2, 3];
    let all_train: Vec<usize> = (0..train.n_rows()).collect();
    let all_test: Vec<usize> = (0..test.n_rows()).collect();

    let scaler = Standardizer::fit_rows(&train, &all_train, &features);
    let xtr = scaler.transform(&train.select(&all_train, &features));
    let xte = scaler.transform(&test.select(&all_test, &features));

    for name in ["nn", "svm", "knn", "majority"] {
        let spec = ClassifierSpec::from_name(name)?;
        let model = spec.fit(&xtr, train.labels(), train.class_count(), 7)?;
        let pred = model.predict(&xte)?;
        let acc = pred.iter().zip(test.labels()).filter(|(p, y)| p == y).count() as f64
            / pred.len() as f64;
        println!("{name:<9} held-out accuracy {acc:.3}");
        if name == "svm" {
            let json = ModelDocument::new(model).to_json()?;
            println!("          model document: {} bytes of JSON", json.len());
        }
    }
    Ok(())
}

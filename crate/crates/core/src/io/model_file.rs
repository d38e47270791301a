//! Versioned JSON model documents.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::classifier::{ChaosCompModel, ClassDistribution, TrainConfig};
use crate::error::{Error, Result};
use crate::pipeline::{Preprocessor, ScalerParams};
use crate::symbolic::ReturnMapModel;

pub const SCHEMA_VERSION: u64 = 1;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScalerDoc {
    min: Vec<f64>,
    max: Vec<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelDoc {
    version: u64,
    n: u32,
    threshold: f64,
    alpha: f64,
    pad_symbol: u8,
    augment: bool,
    raw_features: usize,
    scaler: ScalerDoc,
    class_names: Vec<String>,
    classes: Vec<Vec<f64>>,
}

pub fn model_to_json(model: &ChaosCompModel) -> Result<String> {
    let config = model.config();
    let pre = model.preprocessor();
    let doc = ModelDoc {
        version: SCHEMA_VERSION,
        n: config.n,
        threshold: config.threshold,
        alpha: config.alpha,
        pad_symbol: config.pad_symbol,
        augment: pre.augment(),
        raw_features: pre.raw_features(),
        scaler: ScalerDoc {
            min: pre.scaler().min().to_vec(),
            max: pre.scaler().max().to_vec(),
        },
        class_names: model.class_names().to_vec(),
        classes: model.classes().iter().map(|c| c.probs().to_vec()).collect(),
    };
    let mut text = serde_json::to_string_pretty(&doc)?;
    text.push('\n');
    Ok(text)
}

pub fn model_from_json(text: &str) -> Result<ChaosCompModel> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    let version = value
        .get("version")
        .ok_or_else(|| Error::MalformedModel("missing \"version\" field".into()))?;
    match version.as_u64() {
        Some(SCHEMA_VERSION) => {}
        Some(v) => return Err(Error::SchemaVersion(v)),
        None => {
            return Err(Error::MalformedModel(format!(
                "bad version field {version}"
            )))
        }
    }
    let doc: ModelDoc =
        serde_json::from_value(value).map_err(|e| Error::MalformedModel(e.to_string()))?;

    let config = TrainConfig {
        n: doc.n,
        threshold: doc.threshold,
        alpha: doc.alpha,
        pad_symbol: doc.pad_symbol,
        augment: doc.augment,
    };
    let scaler = ScalerParams::new(doc.scaler.min, doc.scaler.max)?;
    let preprocessor = Preprocessor::new(doc.raw_features, doc.augment, scaler)?;
    let classes = doc
        .classes
        .into_iter()
        .enumerate()
        .map(|(c, probs)| {
            Ok(ClassDistribution::new(
                c,
                ReturnMapModel::new(doc.n, probs)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    ChaosCompModel::from_parts(config, preprocessor, doc.class_names, classes)
}

pub fn save_model(model: &ChaosCompModel, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, model_to_json(model)?).map_err(|e| Error::io(path, e))
}

pub fn load_model(path: impl AsRef<Path>) -> Result<ChaosCompModel> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    model_from_json(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifier::train;

    fn toy_model() -> ChaosCompModel {
        let x = vec![
            vec![0.0, 1.0, 1.0, 0.0],
            vec![1.0, 1.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0, 0.0],
            vec![0.0, 0.0, 0.0, 1.0],
            vec![1.0, 0.0, 1.0, 0.0],
            vec![1.0, 1.0, 0.0, 0.0],
        ];
        let config = TrainConfig {
            n: 2,
            threshold: 0.5,
            alpha: 0.01,
            pad_symbol: 1,
            augment: false,
        };
        train(
            &x,
            &[0, 0, 0, 1, 1, 1],
            vec!["zero".into(), "one".into()],
            config,
            Preprocessor::identity(4),
        )
        .unwrap()
    }

    #[test]
    fn round_trip_is_lossless() {
        let model = toy_model();
        let back = model_from_json(&model_to_json(&model).unwrap()).unwrap();
        assert_eq!(back, model);
        for (a, b) in back.classes().iter().zip(model.classes()) {
            assert_eq!(a.probs(), b.probs());
        }
    }

    #[test]
    fn truncated_document_fails() {
        let text = model_to_json(&toy_model()).unwrap();
        let cut = &text[..text.len() / 2];
        assert!(matches!(model_from_json(cut), Err(Error::Json(_))));
    }

    #[test]
    fn unknown_version_named() {
        let text = model_to_json(&toy_model())
            .unwrap()
            .replace("\"version\": 1", "\"version\": 7");
        let err = model_from_json(&text).unwrap_err();
        assert!(matches!(err, Error::SchemaVersion(7)));
        assert!(err.to_string().contains('7'));
    }

    #[test]
    fn invalid_probabilities_rejected() {
        let text = model_to_json(&toy_model()).unwrap();
        let mut value: serde_json::Value = serde_json::from_str(&text).unwrap();
        value["classes"][0][0] = serde_json::json!(0.0);
        assert!(model_from_json(&value.to_string()).is_err());

        let mut value: serde_json::Value = serde_json::from_str(&text).unwrap();
        value.as_object_mut().unwrap().remove("version");
        assert!(matches!(
            model_from_json(&value.to_string()),
            Err(Error::MalformedModel(_))
        ));
    }
}

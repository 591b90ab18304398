//! Versioned JSON model files.
//!
//! Floats are written in shortest round-trip decimal form and parsed back
//! exactly, so a loaded model scores every input bit-for-bit like the saved
//! one.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use rankcal::calibration::{CalibratedModel, CalibrationMap};
use rankcal::methods::Fitted;
use rankcal::sgd::{LinearModel, LossKind};
use serde::{Deserialize, Serialize};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModelKind {
    Logistic,
    Squared,
    PairwiseLogistic,
    #[serde(rename = "CRR")]
    Crr,
    Calibrated,
}

impl From<LossKind> for ModelKind {
    fn from(kind: LossKind) -> Self {
        match kind {
            LossKind::Logistic => ModelKind::Logistic,
            LossKind::Squared => ModelKind::Squared,
            LossKind::PairwiseLogistic => ModelKind::PairwiseLogistic,
            LossKind::Crr => ModelKind::Crr,
        }
    }
}

impl ModelKind {
    fn loss(self) -> Option<LossKind> {
        match self {
            ModelKind::Logistic => Some(LossKind::Logistic),
            ModelKind::Squared => Some(LossKind::Squared),
            ModelKind::PairwiseLogistic => Some(LossKind::PairwiseLogistic),
            ModelKind::Crr => Some(LossKind::Crr),
            ModelKind::Calibrated => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSearch {
    pub lambda: Vec<f64>,
    pub eta0: Vec<f64>,
    pub selected_by: String,
    pub validation_fraction: f64,
    pub best_score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reserve {
    pub fraction: f64,
    pub seed: u64,
    /// Row count of the data the split was drawn from.
    pub total_rows: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationInfo {
    /// `held_out` or `all_rows`.
    pub mode: String,
    pub rows: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingInfo {
    pub method: String,
    pub seed: u64,
    pub lambda: f64,
    pub steps: usize,
    pub eta0: f64,
    pub crr_alpha: f64,
    pub standardize: String,
    pub training_rows: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSearch>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reserve: Option<Reserve>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub calibration: Option<CalibrationInfo>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub format_version: u32,
    pub model_kind: ModelKind,
    /// Loss of the underlying ranker when `model_kind` is `Calibrated`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ranker_kind: Option<ModelKind>,
    pub weights: Vec<f64>,
    pub bias: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub breakpoints: Option<Vec<(f64, f64)>>,
    /// CSV columns the weights refer to, in order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub feature_names: Option<Vec<String>>,
    pub training: TrainingInfo,
}

impl ModelFile {
    pub fn from_linear(model: &LinearModel, feature_names: Option<Vec<String>>, training: TrainingInfo) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            model_kind: model.kind().into(),
            ranker_kind: None,
            weights: model.weights().to_vec(),
            bias: model.bias(),
            breakpoints: None,
            feature_names,
            training,
        }
    }

    pub fn is_calibrated(&self) -> bool {
        self.model_kind == ModelKind::Calibrated
    }

    /// Replaces an uncalibrated model by its composition with `map`.
    pub fn with_map(mut self, map: &CalibrationMap, info: CalibrationInfo) -> Result<Self> {
        if self.is_calibrated() {
            bail!("model is already calibrated");
        }
        self.ranker_kind = Some(self.model_kind);
        self.model_kind = ModelKind::Calibrated;
        self.breakpoints = Some(map.breakpoints().to_vec());
        self.training.calibration = Some(info);
        Ok(self)
    }

    pub fn linear(&self) -> Result<LinearModel> {
        let kind = match self.model_kind {
            ModelKind::Calibrated => self.ranker_kind.context("calibrated model without ranker_kind")?,
            other => other,
        };
        let loss = kind.loss().context("ranker_kind cannot be Calibrated")?;
        Ok(LinearModel::new(self.weights.clone(), self.bias, loss)?)
    }

    pub fn predictor(&self) -> Result<Fitted> {
        let linear = self.linear()?;
        match (&self.breakpoints, self.is_calibrated()) {
            (Some(points), true) => {
                let map = CalibrationMap::new(points.clone())?;
                Ok(Fitted::Calibrated(CalibratedModel::new(linear, map)))
            }
            (None, false) => Ok(Fitted::Linear(linear)),
            (None, true) => bail!("calibrated model without breakpoints"),
            (Some(_), false) => bail!("breakpoints present on an uncalibrated model"),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        Ok(text)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text).context("model file is not valid JSON")?;
        match value.get("format_version").and_then(serde_json::Value::as_u64) {
            Some(v) if v == u64::from(FORMAT_VERSION) => {}
            Some(v) => bail!("unsupported model format_version {v} (this build reads {FORMAT_VERSION})"),
            None => bail!("model file has no format_version"),
        }
        let file: ModelFile = serde_json::from_value(value).context("malformed model file")?;
        file.predictor()?;
        Ok(file)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json()?).with_context(|| format!("cannot write {}", path.display()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        Self::from_json(&text).with_context(|| format!("cannot load model {}", path.display()))
    }
}

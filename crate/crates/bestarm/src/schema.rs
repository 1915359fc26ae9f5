//! Instance JSON: `{"name": string?, "means": [number, ...], "variance": 1.0}`.

use std::fs;
use std::path::Path;

use bestarm_core::{BanditInstance, UNIT_VARIANCE};
use serde::{Deserialize, Serialize};

use crate::error::HarnessError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub means: Vec<f64>,
    pub variance: f64,
}

impl InstanceFile {
    pub fn into_instance(self) -> Result<BanditInstance, HarnessError> {
        Ok(BanditInstance::from_parts(self.means, self.variance, self.name)?)
    }
}

impl From<&BanditInstance> for InstanceFile {
    fn from(instance: &BanditInstance) -> Self {
        Self {
            name: instance.name().map(str::to_owned),
            means: instance.means().to_vec(),
            variance: UNIT_VARIANCE,
        }
    }
}

pub fn parse_instance(text: &str, path: &Path) -> Result<BanditInstance, HarnessError> {
    let file: InstanceFile = serde_json::from_str(text)
        .map_err(|source| HarnessError::Parse { path: path.to_owned(), source })?;
    file.into_instance()
}

pub fn load_instance(path: &Path) -> Result<BanditInstance, HarnessError> {
    let text = fs::read_to_string(path)
        .map_err(|source| HarnessError::Read { path: path.to_owned(), source })?;
    parse_instance(&text, path)
}

pub fn instance_json(instance: &BanditInstance) -> String {
    let mut s = serde_json::to_string_pretty(&InstanceFile::from(instance))
        .expect("instance serialization cannot fail");
    s.push('\n');
    s
}

pub fn save_instance(instance: &BanditInstance, path: &Path) -> Result<(), HarnessError> {
    fs::write(path, instance_json(instance))
        .map_err(|source| HarnessError::Write { path: path.to_owned(), source })
}

//! The code bundle: a spec, its Fourier description and the claimed
//! parameters, as one JSON document.

use serde::{Deserialize, Serialize};
use weylcode::encodable::EncodableForm;
use weylcode::fourier_code::{CodeParams, FourierDescription};
use weylcode::galois::{FieldMatrix, PrimeField};
use weylcode::gottesman::{GottesmanSpec, SpecDocument};

use crate::CliError;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CodeBundle {
    pub spec: SpecDocument,
    #[serde(rename = "B")]
    pub b: Vec<Vec<u32>>,
    pub claimed: CodeParams,
    pub provenance: String,
    /// Upper-triangular phase matrix when the spec is in sum-zero form.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub form: Option<Vec<Vec<u32>>>,
}

/// A bundle whose description has been rebuilt and whose claimed dimension
/// has been checked.
pub struct Loaded {
    pub bundle: CodeBundle,
    pub description: FourierDescription,
}

pub fn to_i64(rows: &[Vec<u32>]) -> Vec<Vec<i64>> {
    rows.iter()
        .map(|r| r.iter().map(|&v| v as i64).collect())
        .collect()
}

impl CodeBundle {
    pub fn new(
        description: &FourierDescription,
        d: usize,
        provenance: String,
        form: Option<&EncodableForm>,
    ) -> Result<Self, CliError> {
        Ok(CodeBundle {
            spec: description.spec().to_document(),
            b: description.to_rows(),
            claimed: description.params(d)?,
            provenance,
            form: form.map(|f| f.upper().to_rows()),
        })
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Usage(format!("malformed bundle: {e}")))
    }

    /// Rebuilds the description. A claimed `K` that differs from the computed
    /// dimension is returned as a witness.
    pub fn load(self) -> Result<std::result::Result<Loaded, serde_json::Value>, CliError> {
        let spec = GottesmanSpec::from_document(&self.spec)?;
        let description = FourierDescription::from_rows(spec, &to_i64(&self.b))?;
        let k = description.code_dimension()?;
        if k != self.claimed.k || self.claimed.n != self.spec.n || self.claimed.q != self.spec.q {
            return Ok(Err(serde_json::json!({
                "kind": "claimed_parameters",
                "claimed": self.claimed,
                "computed": description.params(self.claimed.d)?,
            })));
        }
        Ok(Ok(Loaded {
            bundle: self,
            description,
        }))
    }

    pub fn encodable_form(&self) -> Result<EncodableForm, CliError> {
        let rows = self
            .form
            .as_ref()
            .ok_or_else(|| CliError::Usage("bundle carries no sum-zero form".into()))?;
        let f = PrimeField::new(self.spec.q)?;
        let upper = FieldMatrix::from_rows(f, self.spec.n, &to_i64(rows))?;
        Ok(EncodableForm::new(upper)?)
    }
}

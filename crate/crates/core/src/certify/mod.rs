//! Certificates for the diophantine definition: predicate witnesses, square
//! membership certificates with their soundness descent, the chain that
//! certifies arbitrary elements of `O_F`, and a versioned file wrapper.

pub mod chain;
pub mod four_squares;
pub mod square;
pub mod witness;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub use chain::{certify_of_element, trace_integer, verify_of_certificate, OfCertificate, Trace};
pub use four_squares::four_squares_witness;
pub use square::{build_s_certificate, certification_gate, soundness_descent, verify_s_certificate, SCertificate};
pub use witness::{divisibility_witness, predicate_witness, DivisibilityWitness, PredicateKind, PredicateWitness};

pub const FILE_FORMAT: &str = "dioph-certificate";
pub const FILE_VERSION: u32 = 1;

/// On-disk envelope: the certificate body plus a SHA-256 digest of its
/// canonical (sorted-key, compact) JSON encoding.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateFile {
    pub format: String,
    pub version: u32,
    pub kind: String,
    pub sha256: String,
    pub body: Value,
}

fn digest(body: &Value) -> String {
    let bytes = serde_json::to_vec(body).expect("JSON values serialize");
    hex::encode(Sha256::digest(&bytes))
}

impl CertificateFile {
    pub fn wrap<T: Serialize>(kind: &str, cert: &T) -> Result<Self> {
        let body = serde_json::to_value(cert)?;
        Ok(CertificateFile {
            format: FILE_FORMAT.into(),
            version: FILE_VERSION,
            kind: kind.into(),
            sha256: digest(&body),
            body,
        })
    }

    pub fn digest_matches(&self) -> bool {
        self.sha256 == digest(&self.body)
    }

    /// Checks the envelope and decodes the body.
    pub fn open<T: for<'de> Deserialize<'de>>(&self, kind: &str) -> Result<T> {
        if self.format != FILE_FORMAT || self.version != FILE_VERSION {
            return Err(Error::Certificate(format!("unsupported format {} v{}", self.format, self.version)));
        }
        if self.kind != kind {
            return Err(Error::Certificate(format!("expected a {kind} certificate, found {}", self.kind)));
        }
        Ok(serde_json::from_value(self.body.clone())?)
    }
}

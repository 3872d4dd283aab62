use serde::Serialize;

/// One verified identity: both sides are exposed and a pass is exact
/// integer equality, never a tolerance.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationEntry {
    pub name: String,
    pub lhs: i128,
    pub rhs: i128,
    pub status: VerStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VerStatus {
    Pass,
    Fail,
}

impl VerificationEntry {
    pub fn check(name: impl Into<String>, lhs: i128, rhs: i128) -> VerificationEntry {
        VerificationEntry {
            name: name.into(),
            lhs,
            rhs,
            status: if lhs == rhs {
                VerStatus::Pass
            } else {
                VerStatus::Fail
            },
            note: None,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> VerificationEntry {
        self.note = Some(note.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status == VerStatus::Pass
    }
}

pub fn all_pass(entries: &[VerificationEntry]) -> bool {
    entries.iter().all(|e| e.passed())
}

use std::fmt;

use serde::{Deserialize, Serialize};

/// Outcome of a diagnostic evaluated on a finite truncation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    /// The truncation does not settle the question either way.
    Indeterminate,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    /// Combines verdicts: any failure wins, then any indeterminate.
    pub fn all<I: IntoIterator<Item = Verdict>>(items: I) -> Verdict {
        let mut out = Verdict::Pass;
        for v in items {
            match v {
                Verdict::Fail => return Verdict::Fail,
                Verdict::Indeterminate => out = Verdict::Indeterminate,
                Verdict::Pass => {}
            }
        }
        out
    }

    /// Swaps pass and fail, keeping indeterminate.
    pub fn inverted(self) -> Verdict {
        match self {
            Verdict::Pass => Verdict::Fail,
            Verdict::Fail => Verdict::Pass,
            Verdict::Indeterminate => Verdict::Indeterminate,
        }
    }

    pub fn is_pass(self) -> bool {
        self == Verdict::Pass
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Indeterminate => "INDETERMINATE",
        })
    }
}

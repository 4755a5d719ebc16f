/// Knobs shared by the high-level algorithms.
#[derive(Clone, Debug, PartialEq)]
pub struct Options {
    /// Failure probability budget handed to massager calls. The bundled
    /// massager is deterministic and never fails, so this only affects
    /// how the budget is split among subcalls.
    pub epsilon: f64,
    /// Run the runtime invariant suite (coprimality of subproblems,
    /// determinant identities, stage precision bounds).
    pub check_invariants: bool,
    /// Seed for randomized fast paths. `None` keeps everything deterministic.
    pub seed: Option<u64>,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            epsilon: 0.5,
            check_invariants: false,
            seed: None,
        }
    }
}

impl Options {
    pub fn checked() -> Self {
        Options {
            check_invariants: true,
            ..Options::default()
        }
    }

    /// Options for a child call with a quarter of the failure budget.
    pub(crate) fn quarter(&self) -> Options {
        Options {
            epsilon: self.epsilon / 4.0,
            ..self.clone()
        }
    }

    pub(crate) fn checking(&self) -> bool {
        self.check_invariants || cfg!(debug_assertions)
    }
}

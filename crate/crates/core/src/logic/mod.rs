//! Formulas over ℙ¹, the axiom harness, the linear-solve lemma and the
//! quantifier elimination extension step.

mod axioms;
mod formula;
mod linear;
mod qe;

pub use axioms::{lin_witness, max_gap, run_axiom, run_axiom_suite, Axiom, AxiomReport, Violation};
pub use formula::{eval_formula, Formula, FormulaValue};
pub use linear::{linear_form, linear_solve, lipschitz_bound_check, residual, solve_precondition, LipschitzCheck};
pub(crate) use qe::rational_window;
pub use qe::{extend_step_acvf, nonsaturation_witness, ExtendCase, ExtendStep, NonSaturation};

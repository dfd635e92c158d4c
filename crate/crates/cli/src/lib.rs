//! JSON instances, scenario runs and reports for the `kantorovich` binary.

pub mod error;
pub mod gen;
pub mod instance;
pub mod scenario;

pub use error::InputError;
pub use instance::{load_instance, parse_instance, Arithmetic, Instance, Problem};
pub use scenario::{run_scenario, Command, Options, Report};

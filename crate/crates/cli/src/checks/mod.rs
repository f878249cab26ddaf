//! Check builders, one module per subcommand.

pub mod crux_cmd;
pub mod g0;
pub mod g1;
pub mod glue_demo;
pub mod props;
pub mod ring;

use crate::scenario::Scenario;
use framecheck_core::projective::ProjCache;
use std::sync::{Arc, OnceLock};

/// Immutable run configuration shared by every check.
#[derive(Clone)]
pub struct Config {
    pub p: u64,
    pub n: usize,
    pub trunc: usize,
    /// Support-sweep truncation level; larger than the closure level
    /// because supports are cheap and worth sweeping widely.
    pub support_trunc: usize,
    pub seed: u64,
    pub max_random_tries: usize,
    pub slow: bool,
    pub cache: Arc<ProjCache>,
    pub scenario: Option<Arc<Scenario>>,
}

pub const DEFAULT_SUPPORT_TRUNC: usize = 25;

/// Lazily computed shared state: several checks of one subcommand hang off
/// the same expensive computation, and whichever runs first initializes it.
pub struct Shared<T> {
    cell: Arc<OnceLock<T>>,
    init: Arc<dyn Fn() -> T + Send + Sync>,
}

impl<T> Clone for Shared<T> {
    fn clone(&self) -> Self {
        Shared {
            cell: Arc::clone(&self.cell),
            init: Arc::clone(&self.init),
        }
    }
}

impl<T> Shared<T> {
    pub fn new(init: impl Fn() -> T + Send + Sync + 'static) -> Self {
        Shared {
            cell: Arc::new(OnceLock::new()),
            init: Arc::new(init),
        }
    }

    pub fn get(&self) -> &T {
        self.cell.get_or_init(|| (self.init)())
    }
}

/// Decimal rendering for arbitrary-precision integers in reports.
pub fn big(value: &num_bigint::BigUint) -> serde_json::Value {
    serde_json::Value::String(value.to_string())
}

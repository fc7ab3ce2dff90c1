//! Simulator for spiking neural P systems with delays.
//!
//! A system is stepped through one of three transition-matrix layouts
//! (dense sparse matrix, ELL, or a compressed synapse matrix) or through a
//! direct rule-by-rule oracle. All back ends produce identical traces.
//!
//! ```
//! use snpsim::{gen_sort, simulate, Format, HaltReason, SimOptions, SortInstance};
//!
//! let inst = SortInstance::descending(3);
//! let sys = gen_sort(&inst).unwrap();
//! let trace = simulate(&sys, Format::Compressed, &SimOptions::new(100)).unwrap();
//! assert_eq!(trace.halt, HaltReason::NoApplicableRules);
//! assert_eq!(inst.decode(trace.final_config()), vec![1, 2, 3]);
//! ```

pub mod engine;
pub mod generators;
pub mod io;
pub mod matrix;
pub mod model;
pub mod oracle;
pub mod selection;

pub use engine::{
    simulate, Engine, Format, HaltReason, RecordMode, SimError, SimOptions, SimState,
    SpikingVector, Trace, TraceRecord,
};
pub use generators::{
    gen_random, gen_sort, gen_subset_sum, GenError, RandomBounds, SortInstance, SubsetSumInstance,
    SubsetSumLayout,
};
pub use io::{system_from_json, system_to_json, ModelFile, ModelFileError};
pub use matrix::{
    build_compressed, build_ell, build_rule_vector, build_sparse, storage_count, storage_elements,
    ElementWidths, EllEntry, EllMatrix, NeuronRuleMap, RuleVector, SparseMatrix, StorageCount,
    StorageFormat, SynapseMatrix,
};
pub use model::{
    ModelError, NeuronId, RegEx, RegexKind, Rule, RuleId, SnpSystem, Stats, SystemBuilder,
};
pub use oracle::{oracle_simulate, oracle_step};
pub use selection::Selection;

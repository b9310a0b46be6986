"""Spanning-tree QUBO encoding solved by feedback-driven statevector protocols."""

from .experiment import (
    Problem,
    VariantOutcome,
    build_protocol_config,
    prepare_problem,
    run_variant,
)
from .graphs import (
    WeightedGraph,
    canonical_edge,
    generate_random_graph,
    is_spanning_tree,
    kruskal_mst,
    load_graph,
    save_graph,
)
from .protocols import (
    ControlShape,
    ProtocolConfig,
    RunTrace,
    Variant,
    ground_probability,
    initial_state,
    make_drivers,
    rescale_derivative,
    run_protocol,
    tr_layer_count,
)
from .qubo import (
    DecodedSolution,
    EdgeVar,
    OrderVar,
    QuboModel,
    VariableRegistry,
    ViolationReport,
    bits_to_index,
    bits_to_string,
    build_mst_qubo,
    build_variable_registry,
    decode,
    evaluate_qubo,
    index_to_bits,
    penalty_weight,
    qubo_to_json,
)
from .simulator import (
    DiagonalHamiltonian,
    DriverKind,
    DriverTerm,
    StateVector,
    apply_driver,
    apply_problem_phase,
    commutator_expectation,
    diagonalize_qubo,
    expected_energy,
    ground_states,
)

__version__ = "0.1.0"

"""entcap: entanglement measures and multi-access capacity brackets for pure
multiparty quantum states."""

from .capacity import (
    CapacityBracket,
    CapacityConsistencyError,
    ProtocolResult,
    SweepResult,
    assisted_bell_value,
    assisted_joint_value,
    bracket_as_dict,
    capacity_bracket,
    p_maxmin_d,
    p_maxmin_s,
    singlet_conversion_prob,
    sweep_unassisted,
    unassisted_protocol_value,
    write_sweep_csv,
)
from .families import (
    StateSpecError,
    chi,
    cluster,
    ghz,
    ghz_from_beta2,
    make_state,
    rvb_ferro,
    rvb_ferro_limit,
    singlet,
    two_singlets,
    w,
    w2,
)
from .measures import BipartiteCapacities, GmResult, bipartite_capacities, ggm, gm, von_neumann_entropy
from .states import (
    BELL_LABELS,
    COMPUTATIONAL_BASIS,
    PLUS_MINUS_BASIS,
    Bipartition,
    ProjectiveQubitBasis,
    PureState,
    RawStateError,
    SchmidtSpectrum,
    all_bipartitions,
    apply_local_unitary,
    haar_random_unitary,
    inner_product,
    joint_bell_measure,
    joint_measure,
    load_raw_state,
    measure_party,
    random_pure_state,
    save_raw_state,
    schmidt_spectrum,
    states_equal_up_to_phase,
)

__version__ = "0.1.0"

__all__ = [
    "BELL_LABELS",
    "BipartiteCapacities",
    "Bipartition",
    "CapacityBracket",
    "CapacityConsistencyError",
    "COMPUTATIONAL_BASIS",
    "GmResult",
    "PLUS_MINUS_BASIS",
    "ProjectiveQubitBasis",
    "ProtocolResult",
    "PureState",
    "RawStateError",
    "SchmidtSpectrum",
    "StateSpecError",
    "SweepResult",
    "all_bipartitions",
    "apply_local_unitary",
    "assisted_bell_value",
    "assisted_joint_value",
    "bipartite_capacities",
    "bracket_as_dict",
    "capacity_bracket",
    "chi",
    "cluster",
    "ggm",
    "ghz",
    "ghz_from_beta2",
    "gm",
    "haar_random_unitary",
    "inner_product",
    "joint_bell_measure",
    "joint_measure",
    "load_raw_state",
    "make_state",
    "measure_party",
    "p_maxmin_d",
    "p_maxmin_s",
    "random_pure_state",
    "rvb_ferro",
    "rvb_ferro_limit",
    "save_raw_state",
    "schmidt_spectrum",
    "singlet",
    "singlet_conversion_prob",
    "states_equal_up_to_phase",
    "sweep_unassisted",
    "two_singlets",
    "unassisted_protocol_value",
    "von_neumann_entropy",
    "w",
    "w2",
    "write_sweep_csv",
]

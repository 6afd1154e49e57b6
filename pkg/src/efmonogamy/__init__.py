"""Monogamy of the squared entanglement of formation in multiqubit systems.

Concurrence, entanglement of formation, convex roofs, discord and the
squared-EoF multipartite indicators, with reproductions of the GHZ/W,
W_N and cavity-reservoir examples.
"""

from .discord import (
    QubitMeasurement,
    conditional_entropy_after_measurement,
    minimize_conditional_entropy,
    eof_c1_c2r1_closed_form,
    eof_via_koashi_winter,
)
from .dynamics import PovmPair, apply_local_povm, locc_counterexample, tau2_grid_c1_c2r1
from .indicators import (
    IndicatorReport,
    MonogamyViolation,
    eof_lower_bound,
    ghzw_constants,
    monogamy_score_ef,
    sef_monogamy_check_mixed_rank2,
    sef_monogamy_check_pure,
    table1_value,
    tau1_ghzw_closed_form,
    tau1_pure,
    tau2,
    tau2_partition_avg,
)
from .linalg import (
    ContractError,
    DensityMatrix,
    PureState,
    UnsupportedRankError,
    partial_trace,
    purify,
    schmidt_decompose,
    tensor_product,
)
from .measures import (
    binary_entropy,
    ckw_residual_pure,
    concurrence_pure_bipartite,
    concurrence_two_qubit,
    eof_from_concurrence,
    eof_pure_bipartite,
    eof_two_qubit,
    m_function,
    sef,
    sef_d1,
    sef_d2,
    three_tangle_pure,
    von_neumann_entropy,
)
from .roof import (
    Decomposition,
    RoofConfig,
    eof_mixed,
    find_p0,
    minimize_roof,
    tau1_global,
    tau1_mixed,
    three_tangle_mixed,
)

__version__ = "0.1.0"

"""Coherence toolkit: states, measures, gates and channels, cohering and
decohering powers, and coherence-correlation relations."""

from .channels import (
    PRESETS,
    KrausChannel,
    apply_channel,
    channel_tensor,
    commutes_with_dephasing,
    dilate,
    identity_channel,
    is_unital,
    parse_channel_spec,
    preset_channel,
)
from .correlations import (
    BipartiteState,
    discord_fixed_basis,
    one_way_deficit,
    optimize_deficit,
    qi_relative_entropy,
    ree_pure,
    verify_coherence_chain,
    verify_deficit_relations,
)
from .errors import QCoherenceError
from .gates import UnitaryGate, build_gate, controlled, gcnot, parse_gate_spec, u_adc, zyz
from .linalg import eig_hermitian, eigvalsh, embed_operator, partial_trace, tensor_product
from .measures import (
    coherence_l1,
    coherence_rel_entropy,
    relative_entropy,
    shannon_entropy,
    von_neumann_entropy,
)
from .powers import (
    MaxCoherentSet,
    PowerResult,
    binary_entropy,
    cohering_power,
    cohering_power_zyz,
    decohering_power,
    max_output_entropy,
    sup_cohering_power,
)
from .report import Check, VerificationReport, report_schema
from .states import (
    DensityOperator,
    PureState,
    ReferenceBasis,
    dephase,
    load_state,
    maximally_coherent,
    pure_state,
    random_density,
    random_pure,
    random_unitary,
    save_state,
)
from .verify import SUITES, run_suite

__version__ = "0.1.0"

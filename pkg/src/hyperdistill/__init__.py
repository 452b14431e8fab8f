"""Single-copy entanglement distillation of polarisation x energy-time hyperentangled photon pairs."""

from .bcnot import GateImperfection, apply_bcnot, apply_imperfect_bcnot, bcnot_unitary, build_transfer_table
from .bellcore import (
    BellLabel,
    BellWeights,
    PauliAxis,
    bell_diagonal,
    bell_state,
    fidelity,
    fidelity_from_visibilities,
    visibility,
)
from .channels import PolErrorType, WaveplateSetting, et_noise, pol_noise, waveplate_channel
from .config import ConfigError, RunConfig
from .distill import DistillResult, NoPostselectedPopulation, distill, gain_map, postselect_phi
from .estimator import CoincidenceWindowTransformer, DistillationModel
from .hyperstate import HyperState, Subspace, marginal, product_state, to_full_matrix
from .rates import LinkBudget, db_to_linear, single_copy_rate, two_copy_rate
from .runner import emit, run
from .timing import (
    TimingModel,
    coincidence_count,
    et_fidelity_vs_window,
    peak_populations,
    simulate_timetags,
)

__version__ = "0.1.0"

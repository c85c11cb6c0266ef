"""Dynamic metasurface antenna (DMA) massive-MIMO uplink simulator."""

from .beampattern import PatternResult, array_factor, holographic_tuning
from .channel import ChannelRealization, ScenarioConfig, drop_users, generate_channel, pathloss_gain
from .element import (
    ElementWeight,
    FeasibleSet,
    LorentzianTuning,
    frequency_response,
    lorentzian_phase_weight,
    normalized_response_curve,
    project_weight,
)
from .errors import ConfigError, DomainError, NumericalError, SingularFrontEndError
from .experiment import ExperimentSpec, preset, run_experiment
from .optimizer import (
    OptimizerOptions,
    optimize_dma,
    optimize_phase_shifter_hybrid,
    unconstrained_combiner,
)
from .rates import (
    RateResult,
    digital_subarray_capacity,
    fully_digital_sum_capacity,
    uplink_sum_rate,
)
from .waveguide import AnalogCombiner, ArrayGeometry, assemble_combiner, propagation_gain

__version__ = "0.1.0"

"""Kitaev wire networks with classical Markovian noise.

Exact marginal dynamics over noise states, trajectory sampling, fast- and
slow-noise limits, and adiabatic mode-transport protocols on chains and
T-junctions.
"""

__version__ = "0.1.0"

from .analysis import (
    dispersion,
    heating_rate_analytic,
    heating_rate_fit,
    quench_g_infinity,
    quench_longtime_correlation,
    slow_noise_decay_model,
)
from .dynamics import (
    FastLimitSpec,
    InvariantMonitor,
    MarginalEnsemble,
    bind_bond_scale,
    bind_global_mu,
    bind_site_mu,
    edge_correlation_observable,
    energy_observable,
    evolve_lindblad_fast,
    evolve_marginal,
    evolve_quasi_static,
    evolve_trajectory_average,
)
from .errors import (
    ConfigError,
    DegenerateGroundStateError,
    FitError,
    IntegrationError,
    NetworkError,
    NoiseModelError,
    NoisyKitaevError,
    NonTopologicalError,
    ScheduleError,
)
from .experiments import PRESETS, preset_config, run_experiment
from .noise import (
    autocorrelation,
    constant,
    discretized_gaussian,
    noise_statistics,
    sample_autocorrelation,
    sample_trajectory,
    stationary_distribution,
    telegraph,
)
from .schedules import (
    Ramp,
    Schedule,
    Step,
    build_braiding_schedule,
    build_split_binding,
    build_tjunction,
    build_transport_schedule,
    count_correlation_drops,
    run_braid,
    run_transport,
    transport_fidelity_sweep,
)
from .wires import (
    build_hamiltonian,
    chain,
    edge_correlation,
    energy_expectation,
    ground_state_covariance,
    ring,
    trajectory_parity,
    validate_covariance,
    zero_modes,
)

"""Exception types shared across the package."""


class NoisyKitaevError(Exception):
    """Base class for all package-specific errors."""


class NetworkError(NoisyKitaevError, ValueError):
    """Invalid wire-network specification (bad bonds, sites, couplings)."""


class NoiseModelError(NoisyKitaevError, ValueError):
    """Invalid jump-noise specification (rates, generator, states)."""


class ReducibleGeneratorError(NoiseModelError):
    """Generator with more than one closed communicating class."""

    def __init__(self, components):
        self.components = [sorted(c) for c in components]
        super().__init__(
            "generator is reducible; communicating classes: "
            + ", ".join(str(c) for c in self.components)
        )


class ScheduleError(NoisyKitaevError, ValueError):
    """Invalid drive schedule (unknown targets, discontinuous ramps)."""


class IntegrationError(NoisyKitaevError, RuntimeError):
    """Time integration failed a convergence or invariant check."""


class DegenerateGroundStateError(NoisyKitaevError, ValueError):
    """Ground state not unique beyond a single topological zero pair."""


class NonTopologicalError(NoisyKitaevError, ValueError):
    """A zero mode was required but the Hamiltonian has none."""


class FitError(NoisyKitaevError, RuntimeError):
    """A trace lacks the regime a fit assumes (e.g. no linear growth)."""


class ConfigError(NoisyKitaevError, ValueError):
    """Invalid experiment configuration document."""

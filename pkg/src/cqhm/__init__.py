"""Complex quantum Hamilton mechanics for the harmonic-oscillator family."""
__version__ = "0.1.0"

from .errors import (  # noqa: E402
    ClassificationError,
    CQHMError,
    EquilibriumStart,
    IntegrationError,
    NodeApproach,
    NodeSingularity,
    NotClosed,
    RootFindingFailure,
    TransitionPole,
    UnsupportedField,
)
from .special import hermite, hermite_derivative  # noqa: E402
from .eigensystem import (  # noqa: E402
    Eigenstate,
    EnergyBreakdown,
    FamilyParams,
    eigenvalue,
    equilibria,
    intrinsic_energy,
    momentum,
    quantum_potential,
    schrodinger_residual,
    velocity,
    wavefunction,
)
from .dynamics import (  # noqa: E402
    Trajectory,
    TransitionSample,
    energy_from_initial_conditions,
    integrate_trajectory,
    integrate_transition,
    transition_energy,
    transition_velocity,
)
from .invariance import (  # noqa: E402
    CatalogEntry,
    InvarianceReport,
    catalog,
    map_from_base,
    map_to_base,
    verify_invariance,
)
from .contour import ContourResult, action_integral, period_integral, residue_oracle  # noqa: E402

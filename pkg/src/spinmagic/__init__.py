"""Stabilizer Renyi entropy in unitary and monitored spin dynamics."""

from .analysis import (
    FitResult,
    LinearFit,
    SweepPoint,
    fit_generalized_lorentzian,
    fit_linear,
    lorentzian,
    steady_average,
)
from .evolution import Propagator, apply_unitary, make_propagator
from .hamiltonian import (
    HamiltonianOperator,
    SykCouplings,
    XxzParams,
    build_syk,
    build_xxz,
    couplings_from_json,
    couplings_to_json,
    sample_syk_couplings,
)
from .hilbert import (
    SpinConfig,
    StateVector,
    SubspaceBasis,
    enumerate_basis,
    neel_state,
    rank,
    unrank,
)
from .kernels import BACKEND
from .magic import (
    IntegrityError,
    PauliString,
    pauli_expectation,
    pauli_matrix_element,
    pauli_purity,
    sre,
    sre_dense_oracle,
)
from .monitoring import (
    DensityMatrix,
    IntegrationError,
    MonitoringParams,
    NoiseSample,
    TrajectoryRecord,
    lindblad_evolve,
    pure_density,
    qsd_step,
    run_ensemble,
    run_trajectory,
    sigma_z_expectations,
)
from .randomstates import haar_state, random_phase_state

__version__ = "0.1.0"

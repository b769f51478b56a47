"""Steering ellipsoids and steered coherence under engineered damping."""

from .coherence import (
    ReferenceBasis,
    coherence,
    fibonacci_sphere,
    msc_bruteforce,
    msc_closed_form,
    reference_basis_of,
    steered_state,
)
from .linalg import (
    DensityReport,
    HermitianEigenResult,
    SingularMarginalError,
    hermitian_eig,
    kron,
    partial_trace,
    psd_inv_sqrt,
    validate_density,
)
from .oracles import (
    AmplitudeTrace,
    DiscretizedBath,
    analytic_trace,
    build_bath,
    compare_traces,
    discrete_modes_oracle,
    kernel_quadrature,
    memory_kernel,
    volterra_oracle,
)
from .reservoir import (
    ChannelSnapshot,
    InitialStateParams,
    ReservoirParams,
    channel_snapshot,
    closed_form_ellipsoid,
    collective_amplitude_ratio,
    dfs_transform,
    evolve_bipartite,
    initial_state,
    kraus_pair,
    lorentzian_J,
    site_amplitudes,
    survival_amplitude,
)
from .scenario import (
    ConfigError,
    InvariantViolationError,
    MeshRecord,
    ScenarioConfig,
    TimeSeriesRow,
    detect_backflow,
    export_csv,
    export_mesh_json,
    load_config,
    run_scenario,
    time_grid,
    write_outputs,
)
from .steering import (
    BlochRep,
    Ellipsoid,
    assemble_from_bloch,
    bloch_decompose,
    canonical_state,
    ellipsoid_surface_points,
    steering_ellipsoid,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"

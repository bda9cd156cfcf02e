"""Distributed finite-time tracking of a maneuvering target from bearing-only
measurements. Thin Python layer over the C++ core in ``_core``."""

from ._core import (
    BswarmError,
    CertificationError,
    GraphError,
    ObservabilityError,
    ParameterError,
    ScenarioError,
    SingularGeometryError,
    ValidationFailed,
    algebraic_connectivity,
    bearing,
    beta_from_bound,
    build_graph,
    centralized_solution,
    finite_time_bound,
    load_scenario,
    local_information,
    local_solution,
    observability_check,
    pack_phi,
    parse_scenario,
    projector_M,
    run,
    sweep,
    unpack_phi,
    validate,
    verify_projector_identities,
)

__all__ = [name for name in dir() if not name.startswith("_")]

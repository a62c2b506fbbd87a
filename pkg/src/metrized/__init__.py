"""Exact harmonic analysis on polarized metrized graphs and explicit bound constants."""

__version__ = "0.1.0"

from .bounds import BoundReport, cinkir_constant, count_bound, green_sup_constant
from .core import (
    Divisor,
    EdgePoint,
    MetrizedGraph,
    Polarization,
    build_graph,
    first_betti,
    genus,
    parse_rational,
    polarize,
    subdivide,
    total_length,
)
from .errors import (
    DegreeCertificateFailure,
    GenerationFailure,
    InvalidEpsilon,
    InvalidGenus,
    InvalidGraph,
    InvalidPolarization,
    MetrizedError,
    SolverInconsistency,
)
from .harmonic import (
    Measure,
    canonical_measure,
    diagonal_profile,
    effective_resistance,
    green_function,
    green_value,
    j_function,
    tau_measure,
)
from .invariants import (
    analyze,
    c_constant,
    elkies_check,
    epsilon_invariant,
    inequality_audit,
    invariant_report,
    lambda_invariant,
    phi_invariant,
    sup_green,
    tau_invariant,
)
from .linalg import BACKEND
from .verify import GeneratorParams, campaign, random_graph

"""Perfect-matching certificates from the A_alpha spectral radius of a graph."""

from .graph import (
    Graph,
    GraphFormatError,
    PartitionSpec,
    complete_graph,
    components,
    disjoint_union,
    empty_graph,
    enumerate_graphs,
    extremal_graph,
    family_g5,
    is_connected,
    join,
    parse_graph6,
    read_graph6_file,
    split_family,
    to_graph6,
)
from .matching import MatchingResult, TutteWitness, has_perfect_matching_dp, max_matching, tutte_witness
from .spectra import (
    QuotientMatrix,
    SpectralResult,
    a_alpha,
    full_spectrum,
    quotient_b1,
    quotient_b3_b4,
    quotient_b5,
    rho_alpha,
    spectral_radius,
    validate_equitable,
)
from .thresholds import (
    CubicPoly,
    closed_form_g5_max,
    f_alpha,
    largest_real_root,
    phi_b5_coeffs,
    psi_eval,
    theorem_cubic,
    threshold,
)
from .verifier import (
    Certificate,
    Verdict,
    certify,
    emit_report,
    exhaustive_verify,
    sweep_argmax_s,
    verify_claim1,
    verify_claim2,
    verify_claim3,
)

__version__ = "0.1.0"


def __getattr__(name):
    # sklearn is only imported when the estimator is asked for
    if name in ("SpectralMatchingCertifier", "check_graphs"):
        from . import estimator

        return getattr(estimator, name)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")

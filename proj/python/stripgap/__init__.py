"""Band spectra and gap certificates for periodic Schroedinger operators on a strip."""

from ._core import (
    ConditionVerdicts,
    PhiEvaluation,
    PhiSup,
    StripGeometry,
    __version__,
    a0_closed,
    ap_closed,
    ap_exact_integral,
    band_energy,
    conditions_check,
    constants,
    counting,
    ell1_threshold,
    galerkin_bands,
    low_spectrum_difference,
    mode_energy,
    phi_p,
    phi_sup,
    run_cli,
    s5_bound,
    unperturbed_bands,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]

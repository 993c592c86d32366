"""Tolerance defaults. ``LCRIT_TOL`` scales every default target uniformly."""

import os

_BASE = {
    "quad": 1e-12,      # absolute target for adaptive quadrature
    "tail": 1e-13,      # Dirichlet-series tail truncation
    "series": 1e-14,    # k-series / H_n truncation
    "zero": 1e-10,      # ordinate refinement
    "inversion": 1e-12, # Fourier inversion convergence
}


def tol(name):
    """Default tolerance ``name``, multiplied by ``$LCRIT_TOL`` / 1e-12 if set."""
    value = _BASE[name]
    override = os.environ.get("LCRIT_TOL")
    if override:
        value *= float(override) / 1e-12
    return value

"""Numerics for Dirichlet L-functions in the critical strip: evaluation, zeros,
iterated arguments, extremal test functions, the explicit formula and envelopes."""

from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("artifact")
except PackageNotFoundError:  # running from a source tree
    __version__ = "0.1.0"

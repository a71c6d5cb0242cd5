"""Orbit-space cohomology of free involutions on products of projective spaces."""

from .algebra import SpaceKind, TruncatedAlgebra, build_space_algebra, hilbert_series
from .spectral import BorelSetup, compute_pages, enumerate_cases, totalize
from .theorems import SpaceSpec, candidate_presentation, verify_space

__all__ = [
    "BorelSetup",
    "SpaceKind",
    "SpaceSpec",
    "TruncatedAlgebra",
    "build_space_algebra",
    "candidate_presentation",
    "compute_pages",
    "enumerate_cases",
    "hilbert_series",
    "totalize",
    "verify_space",
]

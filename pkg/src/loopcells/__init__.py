"""Lattice Jordan cells and logarithmic couplings for loop models and spin chains.

The package builds the standard link-pattern and spin representations of the
Temperley-Lieb algebra, the associated Hamiltonians and transfer matrices,
and the bilinear pairings under which they are self-adjoint.  On top of those
it measures the indecomposability parameter ``b`` (through rank-two Jordan
cells and the two-leg "trousers" overlap), Affleck-Ludwig boundary entropies,
and finite-size extrapolations.

Submodules are imported lazily so that the command-line front end can
configure threading environment variables before any numerical library
loads.
"""

from __future__ import annotations

import importlib

__version__ = "0.1.0"

_SUBMODULES = (
    "diagrams",
    "tl",
    "forms",
    "models",
    "spectral",
    "observables",
    "fixtures",
    "cli",
)

__all__ = [*_SUBMODULES, "__version__"]


def __getattr__(name: str):
    if name in _SUBMODULES:
        module = importlib.import_module(f".{name}", __name__)
        globals()[name] = module
        return module
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")


def __dir__() -> list[str]:
    return sorted(set(globals()) | set(_SUBMODULES))

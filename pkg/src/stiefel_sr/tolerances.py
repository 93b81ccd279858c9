"""Shared numerical tolerances.

A single read-only record drives every structural check in the library.  The
defaults are tuned for double precision at matrix sizes up to ~32; the CLI may
install a modified record once at startup via :func:`configure`, after which
the record is treated as immutable.
"""

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    """Tolerance record.

    sym: allowed deviation from skew-Hermitian symmetry.
    unit: allowed deviation from unitarity (and from det=+1 in real mode).
    eq: entrywise tolerance when comparing canonical representatives; looser
        than ``unit`` to absorb accumulated exponential error along curves.
    hit: endpoint acceptance radius for cut-locus searches (>= 10 * eq).
    vel: velocity distinctness threshold when clustering minimizers.
    """

    sym: float = 1e-12
    unit: float = 1e-10
    eq: float = 1e-9
    hit: float = 1e-8
    vel: float = 1e-3


TOL = Tolerances()


def configure(**overrides) -> Tolerances:
    """Replace the global tolerance record (intended for program startup only)."""
    global TOL
    for value in overrides.values():
        if not value > 0:
            raise ValueError("tolerances must be positive")
    TOL = replace(TOL, **overrides)
    return TOL

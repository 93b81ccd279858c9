"""Lie-bracket machinery for the horizontal distribution.

Rank computations treat a complex matrix as a real vector (real and imaginary
parts stacked), because the dimensions being compared are real dimensions.
Brackets of horizontal vectors land in the block-diagonal part; the lower
right block is tangent to the directions quotiented away by the Stiefel
equivalence, so it is projected out before counting dimensions.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from . import matcore
from .matcore import COMPLEX, REAL
from .homspace import BlockVelocity

_RANK_RTOL = 1e-8


@dataclass(frozen=True)
class BracketReport:
    n: int
    k: int
    mode: str
    dim_h: int
    dim_h_plus_brackets: int
    target_dim: int
    generating: bool

    def to_json_dict(self) -> dict:
        return asdict(self)


def lie_bracket(x, y, mode: str = COMPLEX) -> np.ndarray:
    """Commutator [X, Y] = XY - YX of two skew-Hermitian matrices."""
    a = matcore.check_skew_hermitian(x, mode)
    b = matcore.check_skew_hermitian(y, mode)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return a @ b - b @ a


def stiefel_tangent_dim(n: int, k: int, mode: str = COMPLEX) -> int:
    """Real dimension of the Stiefel tangent space: 2nk - k^2, or nk - k(k+1)/2."""
    matcore.check_mode(mode)
    if mode == COMPLEX:
        return 2 * n * k - k * k
    return n * k - k * (k + 1) // 2


def horizontal_dim(n: int, k: int, mode: str = COMPLEX) -> int:
    """Real dimension of the horizontal distribution: 2k(n-k), or k(n-k)."""
    matcore.check_mode(mode)
    return (2 if mode == COMPLEX else 1) * k * (n - k)


def horizontal_basis(n: int, k: int, mode: str = COMPLEX) -> list[BlockVelocity]:
    """Real basis of the horizontal space: one b-block entry at a time (and i times it)."""
    matcore.check_mode(mode)
    units = [1.0] if mode == REAL else [1.0, 1j]
    out = []
    for p in range(k):
        for q in range(n - k):
            for unit in units:
                b = np.zeros((k, n - k), dtype=np.complex128)
                b[p, q] = unit
                out.append(BlockVelocity(np.zeros((k, k)), b, mode))
    return out


def _real_rows(mats, mode: str) -> np.ndarray:
    """Stack matrices as real row vectors (re parts, then im parts in complex mode)."""
    rows = []
    for m in mats:
        m = np.asarray(m, dtype=np.complex128)
        if mode == COMPLEX:
            rows.append(np.concatenate([m.real.ravel(), m.imag.ravel()]))
        else:
            rows.append(m.real.ravel())
    return np.array(rows)


def _rank(rows: np.ndarray) -> int:
    if rows.size == 0:
        return 0
    s = np.linalg.svd(rows, compute_uv=False)
    if s[0] == 0.0:
        return 0
    return int(np.sum(s > _RANK_RTOL * s[0]))


def _project_to_stiefel_tangent(m: np.ndarray, k: int) -> np.ndarray:
    """Zero the lower-right block: quotient out the directions the manifold ignores."""
    out = np.array(m)
    out[k:, k:] = 0.0
    return out


def bracket_generating_rank(n: int, k: int, mode: str = COMPLEX) -> BracketReport:
    """Rank test: do horizontal directions plus their first brackets span the tangent space?

    Builds the real span of all horizontal basis blocks together with the
    brackets of every basis pair (projected to the Stiefel tangent space) and
    compares its rank against the full tangent dimension.
    """
    if not 1 <= k < n:
        raise ValueError(f"need 1 <= k < n, got n={n}, k={k}")
    basis = horizontal_basis(n, k, mode)
    embedded = [bv.embed() for bv in basis]
    mats = list(embedded)
    for i in range(len(embedded)):
        for j in range(i + 1, len(embedded)):
            br = embedded[i] @ embedded[j] - embedded[j] @ embedded[i]
            mats.append(_project_to_stiefel_tangent(br, k))
    rank = _rank(_real_rows(mats, mode))
    target = stiefel_tangent_dim(n, k, mode)
    return BracketReport(
        n=n,
        k=k,
        mode=mode,
        dim_h=horizontal_dim(n, k, mode),
        dim_h_plus_brackets=rank,
        target_dim=target,
        generating=rank == target,
    )


def strongly_bracket_check_vn1(
    n: int, samples: int = 100, seed: int = 0, _sections=None
) -> bool:
    """Check the strong bracket-generating property of V_{n,1} by sampling.

    For each nonzero horizontal row b, the span of the horizontal space and
    the brackets of the b-section with the horizontal basis must already be
    the whole (2n-1)-dimensional tangent space.  Near-zero draws are rejected
    as zero sections and replaced, never counted.
    """
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    rng = np.random.default_rng(seed)
    basis = horizontal_basis(n, 1, COMPLEX)
    embedded = [bv.embed() for bv in basis]
    target = stiefel_tangent_dim(n, 1, COMPLEX)

    def draw():
        if _sections is not None:
            return np.asarray(_sections.pop(0), dtype=np.complex128).reshape(1, -1)
        return matcore.random_matrix(rng, 1, n - 1, COMPLEX)

    checked = 0
    while checked < samples:
        b = draw()
        if float(np.linalg.norm(b)) <= 1e-12:
            continue  # zero section: rejected, not counted
        z = BlockVelocity(np.zeros((1, 1)), b, COMPLEX).embed()
        mats = list(embedded)
        for e in embedded:
            mats.append(_project_to_stiefel_tangent(z @ e - e @ z, 1))
        if _rank(_real_rows(mats, COMPLEX)) != target:
            return False
        checked += 1
    return True


@dataclass(frozen=True)
class MontgomeryReport:
    condition1: bool  # distribution dimension is a multiple of 4
    condition2: bool  # distribution dimension >= codimension + 1
    possible: bool

    def to_json_dict(self) -> dict:
        return asdict(self)


def montgomery_condition(m: int, l: int) -> MontgomeryReport:
    """Dimension obstruction for strongly bracket-generating distributions.

    An l-dimensional strongly bracket-generating distribution on an
    m-dimensional manifold with codimension >= 2 requires l to be a multiple
    of 4 or l >= (m - l) + 1; ``possible`` is the disjunction.  Codimension
    below 2 is outside the statement's scope and raises.
    """
    if not 0 < l < m:
        raise ValueError(f"need 0 < l < m, got m={m}, l={l}")
    if m - l < 2:
        raise ValueError(f"codimension {m - l} < 2 is outside the obstruction's scope")
    c1 = l % 4 == 0
    c2 = l >= (m - l) + 1
    return MontgomeryReport(condition1=c1, condition2=c2, possible=c1 or c2)

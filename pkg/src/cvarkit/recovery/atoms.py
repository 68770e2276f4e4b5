"""Atoms of the CVaR norm and the explicit norm forms they induce.

For p >= 2 and alpha in ``((p-2)/p, (p-1)/p)`` the CVaR norm reduces to
``|x|_(p) + [p (1 - alpha) - 1] |x|_(p-1)``, whose unit ball is the hull
of the unit vectors ``+-e_i`` and the scaled sign vectors
``b / (p (1 - alpha))``. For alpha in ``(0, 1/p)`` it reduces to
``sum |x_i| - p alpha min |x_i|``.
"""

from __future__ import annotations

import itertools
from typing import Iterator

import numpy as np
from numpy.typing import ArrayLike

from cvarkit.model.recovery import AlphaBracket, AtomKind, AtomLabel, AtomSet
from cvarkit.norms.cvar_norm import magnitudes

CLASSIFY_TOL = 1e-6


def cvar_norm_high_alpha(x: ArrayLike, alpha: float) -> float:
    """``|x|_(p) + [p (1 - alpha) - 1] |x|_(p-1)`` for ``(p-2)/p < alpha < (p-1)/p``."""
    m = magnitudes(x)
    p = m.size
    if p < 2 or not (p - 2) / p < alpha < (p - 1) / p:
        raise ValueError(f"alpha={alpha} is outside (({p}-2)/{p}, ({p}-1)/{p})")
    return float(m[-1] + (p * (1.0 - alpha) - 1.0) * m[-2])


def cvar_norm_low_alpha(x: ArrayLike, alpha: float) -> float:
    """``sum |x_i| - p alpha min |x_i|`` for ``0 < alpha < 1/p``."""
    m = magnitudes(x)
    p = m.size
    if p < 2 or not 0.0 < alpha < 1.0 / p:
        raise ValueError(f"alpha={alpha} is outside (0, 1/{p})")
    return float(m.sum() - p * alpha * m[0])


def atom_norm(x: ArrayLike, atomset: AtomSet) -> float:
    """Explicit CVaR norm on the bracket of ``atomset``."""
    if atomset.bracket is AlphaBracket.HIGH:
        return cvar_norm_high_alpha(x, atomset.alpha)
    return cvar_norm_low_alpha(x, atomset.alpha)


def atoms(atomset: AtomSet) -> Iterator[tuple[AtomLabel, np.ndarray]]:
    """Every atom with its label: 2p unit vectors, then 2^p sign vectors."""
    p = atomset.dimension
    for i in range(p):
        for sign in (1, -1):
            e = np.zeros(p)
            e[i] = sign
            yield AtomLabel(AtomKind.UNIT, index=i, sign=sign), e
    for signs in itertools.product((1, -1), repeat=p):
        yield AtomLabel(AtomKind.BINARY, signs=signs), atomset.binary_scale * np.array(signs, dtype=float)


def contains(atomset: AtomSet, x: ArrayLike, tol: float = CLASSIFY_TOL) -> bool:
    return classify_atom(x, atomset, tol).kind is not AtomKind.NONE


def classify_atom(x: ArrayLike, atomset: AtomSet, tol: float = CLASSIFY_TOL) -> AtomLabel:
    """Nearest atom within L-infinity distance ``tol``, else ``other``.

    A unit atom has ``p - 1`` entries near zero; a binary atom has every
    entry near ``+-binary_scale``.
    """
    v = np.asarray(x, dtype=float).ravel()
    p = atomset.dimension
    if v.size != p or not np.all(np.isfinite(v)):
        return AtomLabel(AtomKind.NONE)
    near_zero = np.abs(v) <= tol
    if near_zero.sum() == p - 1:
        i = int(np.flatnonzero(~near_zero)[0])
        if abs(abs(v[i]) - 1.0) <= tol:
            return AtomLabel(AtomKind.UNIT, index=i, sign=1 if v[i] > 0 else -1)
        return AtomLabel(AtomKind.NONE)
    scale = atomset.binary_scale
    if np.all(np.abs(np.abs(v) - scale) <= tol):
        return AtomLabel(AtomKind.BINARY, signs=tuple(1 if s > 0 else -1 for s in v))
    return AtomLabel(AtomKind.NONE)

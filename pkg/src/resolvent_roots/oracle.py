"""Independent numeric root finder used to seed and to check the series roots.

Aberth-Ehrlich simultaneous iteration (Jacobi sweeps) followed by a guarded
Newton polish.  Coefficient lists here are *descending*: ``coeffs[0]`` is the
leading coefficient.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

from .errors import FlatDerivativeError, NonConvergenceError

__all__ = [
    "RootEstimate",
    "MatchResult",
    "horner",
    "aberth_roots",
    "newton_polish",
    "match_roots",
    "clusters",
]

MAX_SWEEPS = 200
# Initial guesses sit at angles 2*pi*k/n + ROTATION; an irrational offset
# keeps them off any symmetry axis of real polynomials.
ROTATION = math.sqrt(2) - 1.0
CLUSTER_DISTANCE = 1e-7
EPS = 2.0**-52


def horner(coeffs, x):
    """Return ``(p(x), p'(x))`` for descending ``coeffs``."""
    p = 0j
    dp = 0j
    for c in coeffs:
        dp = dp * x + p
        p = p * x + c
    return p, dp


def _abs_bound(coeffs, x):
    """Sum of |a_i| |x|^i, the scale of rounding error in ``horner``."""
    ax = abs(x)
    acc = 0.0
    for c in coeffs:
        acc = acc * ax + abs(c)
    return acc


@dataclass(frozen=True)
class RootEstimate:
    """A candidate root of the polynomial with descending coefficients ``coeffs``.

    ``residual`` is recomputed from ``value`` on every access.
    """

    value: complex | None
    coeffs: tuple = field(repr=False)
    branch_id: int | None = None
    oracle_distance: float | None = None
    status: str = "converged"
    error_estimate: float | None = None

    @property
    def residual(self) -> float | None:
        if self.value is None:
            return None
        return abs(horner(self.coeffs, self.value)[0])


def _descending(coeffs):
    cs = [complex(c) for c in coeffs]
    while cs and cs[0] == 0:
        cs.pop(0)
    if len(cs) < 2:
        raise ValueError("polynomial must have degree >= 1 with nonzero leading coefficient")
    return tuple(cs)


def newton_polish(coeffs, x0, max_steps=50):
    """Refine a simple root by Newton's method.

    Stops when the step is below 1e-15 relative or the residual reaches the
    rounding floor.  The returned point never has a larger residual than
    ``x0``.
    """
    cs = _descending(coeffs)
    x = complex(x0)
    best, best_res = x, abs(horner(cs, x)[0])
    for _ in range(max_steps):
        p, dp = horner(cs, x)
        if abs(dp) < 1e-30:
            raise FlatDerivativeError(x)
        step = p / dp
        x_new = x - step
        res_new = abs(horner(cs, x_new)[0])
        if res_new <= best_res:
            best, best_res = x_new, res_new
        if abs(step) <= 1e-15 * max(1.0, abs(x)):
            return best
        if best_res <= 4 * EPS * _abs_bound(cs, best):
            return best
        x = x_new
    raise NonConvergenceError(
        f"Newton iteration did not converge from {x0!r}", last=x, worst_residual=best_res
    )


def aberth_roots(coeffs, tol=1e-12, polish=True):
    """All roots (with multiplicity) of the polynomial with descending ``coeffs``."""
    cs = _descending(coeffs)
    n = len(cs) - 1
    lead = cs[0]
    radius = 1.0 + max(abs(c / lead) for c in cs[1:])
    z = [radius * cmath.exp(1j * (2 * math.pi * k / n + ROTATION)) for k in range(n)]

    converged = False
    for _ in range(MAX_SWEEPS):
        updates = []
        for i, zi in enumerate(z):
            p, dp = horner(cs, zi)
            if p == 0:
                updates.append(0j)
                continue
            s = sum(1.0 / (zi - zj) for j, zj in enumerate(z) if j != i and zi != zj)
            if dp == 0:
                # a stationary point: nudge instead of dividing by zero
                updates.append(1e-8 * max(1.0, abs(zi)) * cmath.exp(1j * ROTATION))
                continue
            ratio = p / dp
            updates.append(ratio / (1.0 - ratio * s))
        z = [zi - w for zi, w in zip(z, updates)]
        if all(abs(w) <= tol * max(1.0, abs(zi)) for w, zi in zip(updates, z)):
            converged = True
            break

    if not converged:
        worst = max(abs(horner(cs, zi)[0]) for zi in z)
        raise NonConvergenceError(
            f"Aberth iteration did not converge in {MAX_SWEEPS} sweeps "
            f"(worst residual {worst:.3e})",
            last=z,
            worst_residual=worst,
        )

    if polish:
        z = [_guarded_polish(cs, z, i) for i in range(n)]
    return [RootEstimate(value=zi, coeffs=cs) for zi in z]


def _guarded_polish(cs, z, i):
    zi = z[i]
    others = [abs(zi - zj) for j, zj in enumerate(z) if j != i]
    gap = min(others) if others else math.inf
    if gap < CLUSTER_DISTANCE:
        return zi
    try:
        refined = newton_polish(cs, zi)
    except (FlatDerivativeError, NonConvergenceError):
        return zi
    # a polish that walks toward a neighbour is rejected
    if abs(refined - zi) > 0.25 * gap:
        return zi
    return refined


def clusters(values, distance=CLUSTER_DISTANCE):
    """Group roots closer than ``distance``; returns ``[(centre, multiplicity)]``."""
    values = [complex(v) for v in values]
    groups = []
    for v in values:
        for g in groups:
            if any(abs(v - w) < distance for w in g):
                g.append(v)
                break
        else:
            groups.append([v])
    return [(sum(g) / len(g), len(g)) for g in groups]


@dataclass(frozen=True)
class MatchResult:
    pairs: tuple  # (index into estimates, index into oracle, distance)
    max_distance: float
    unmatched_estimates: tuple
    unmatched_oracle: tuple  # oracle roots not reached by the series


def _value(r):
    return complex(r.value if isinstance(r, RootEstimate) else r)


def match_roots(estimates, oracle) -> MatchResult:
    """Greedy minimum-distance one-to-one matching between two root lists."""
    a = [_value(r) for r in estimates]
    b = [_value(r) for r in oracle]

    def key(z):
        return (z.real, z.imag)

    candidates = []
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            lo, hi = sorted((key(x), key(y)))
            candidates.append((abs(x - y), lo, hi, i, j))
    candidates.sort(key=lambda c: c[:3])

    used_a, used_b, pairs = set(), set(), []
    for dist, _, _, i, j in candidates:
        if i in used_a or j in used_b:
            continue
        used_a.add(i)
        used_b.add(j)
        pairs.append((i, j, dist))
    pairs.sort()
    return MatchResult(
        pairs=tuple(pairs),
        max_distance=max((d for _, _, d in pairs), default=0.0),
        unmatched_estimates=tuple(i for i in range(len(a)) if i not in used_a),
        unmatched_oracle=tuple(j for j in range(len(b)) if j not in used_b),
    )

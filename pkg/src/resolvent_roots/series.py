"""Power-series expansion of each root branch x(s) about s = 0.

A branch is labelled by its seed ``x(0)``, a root of ``p(x, 0)``.  The first
``n - 1`` Taylor coefficients come from implicit differentiation; the rest are
generated by the index recurrence read off the homogeneous resolvent.  The
stored series is for ``y = x + shift``.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass, field, replace
from fractions import Fraction

from .algebra import UniPoly, XSPoly, poly_gcd
from .errors import MultipleSeedRootError, SingularIndexError, SingularPointError
from .oracle import RootEstimate, aberth_roots, newton_polish
from .resolvent import ResolventODE, implicit_derivatives, x_coefficients

__all__ = [
    "Recurrence",
    "SeriesBranch",
    "normalize_coefficients",
    "branch_seeds",
    "taylor_coefficients",
    "taylor_seeds",
    "extract_recurrence",
    "run_recurrence",
    "estimate_radius",
    "expand_branch",
    "rescale",
    "evaluate_branch",
]

DEFAULT_TERMS = 64
RESIDUAL_TOL = 1e-8


def normalize_coefficients(p: XSPoly, a0):
    """Scale p and a0 by the smallest power of two M >= 1 exceeding every |a_i|, |a0|.

    Returns ``(p_hat, a0_hat, M)`` with ``p_hat(x, s) = p(x, M s) / M``, so the
    roots of ``p_hat(x, a0_hat)`` are those of ``p(x, a0)``.
    """
    a0 = Fraction(a0)
    biggest = max([abs(a0)] + [abs(c) for c in x_coefficients(p)])
    factor = Fraction(1)
    while factor <= biggest:
        factor *= 2
    if factor == 1:
        return p, a0, factor
    inv = 1 / factor
    scaled = XSPoly([UniPoly([0, 1])] + [c * inv for c in p.coeffs[1:]])
    return scaled, a0 * inv, factor


def _is_exact(v):
    return isinstance(v, (int, Fraction))


def branch_seeds(p: XSPoly):
    """The n roots of p(x, 0): exact 0 first, then the cofactor roots."""
    base = p.at_s(0)
    g = poly_gcd(base, base.derivative())
    if g.degree > 0:
        raise MultipleSeedRootError(
            f"p(x, 0) has a multiple root: {_describe_repeated(g)}",
            roots=_gcd_roots(g),
        )
    cofactor = [complex(c) for c in reversed(base.coeffs[1:])]
    seeds = [Fraction(0)]
    if len(cofactor) > 1:
        found = []
        for r in aberth_roots(cofactor):
            x = r.value
            try:
                x = newton_polish(cofactor, x)
            except Exception:
                pass
            found.append(x)
        found.sort(key=lambda z: (round(z.real, 12), round(z.imag, 12)))
        seeds.extend(found)
    return seeds


def _gcd_roots(g: UniPoly):
    if g.degree == 1:
        return [-g[0] / g[1]]
    return [r.value for r in aberth_roots([complex(c) for c in reversed(g.coeffs)])]


def _describe_repeated(g: UniPoly):
    parts = []
    for r in _gcd_roots(g):
        if isinstance(r, Fraction):
            parts.append(str(r))
        else:
            parts.append(f"{r.real:.12g}{r.imag:+.12g}j")
    return ", ".join(parts) + " (repeated)"


def taylor_coefficients(p: XSPoly, b0, k_max: int):
    """Taylor coefficients b_0 .. b_k_max of the branch through ``b0``.

    ``b_k = N_k(b0) / (k! p'(b0)^(2k-1))``; exact when ``b0`` is rational.
    """
    dp = p.diff("x").to_x_poly()
    slope = dp(b0)
    if slope == 0 or (not _is_exact(slope) and abs(slope) < 1e-300):
        raise MultipleSeedRootError(f"p'(x) vanishes at seed {b0!r}", roots=[b0])
    out = [b0]
    if k_max < 1:
        return out
    fact = 1
    for d in implicit_derivatives(p, k_max):
        fact *= d.order
        out.append(d.numerator(b0) / (fact * slope ** d.denominator_exponent))
    return out


def taylor_seeds(p: XSPoly, b0):
    """The seeds b_0 .. b_{n-2} that pin down a branch in the recurrence."""
    return taylor_coefficients(p, b0, p.degree - 2)


@dataclass(frozen=True)
class Recurrence:
    """``sum_d bands[d](i) * b[i + d] = 0`` for all i >= 0 (negative indices read 0)."""

    order: int
    bands: dict

    @property
    def max_offset(self) -> int:
        return max(d for d, q in self.bands.items() if q)

    @property
    def leading(self) -> UniPoly:
        return self.bands[self.max_offset]

    def residual(self, b, i):
        total = 0
        for d, q in self.bands.items():
            k = i + d
            if 0 <= k < len(b):
                total += q(i) * b[k]
        return total


def _falling(shift: int, length: int) -> UniPoly:
    """(i + shift)(i + shift - 1) ... (i + shift - length + 1) as a polynomial in i."""
    out = UniPoly([1])
    for k in range(length):
        out = out * UniPoly([shift - k, 1])
    return out


def extract_recurrence(ode: ResolventODE) -> Recurrence:
    """Coefficient recurrence for power-series solutions of the homogeneous ODE."""
    if not ode.homogeneous:
        raise ValueError("recurrence extraction needs a homogeneous ODE")
    r = ode.order
    if ode.coeffs[0][0] == 0:
        raise SingularPointError("s=0 is a singular point of the resolvent")
    bands = {}
    for pos, poly in enumerate(ode.coeffs):
        j = r - pos  # derivative order
        for t, c in enumerate(poly.coeffs):
            if not c:
                continue
            d = j - t
            term = _falling(d, j) * c
            bands[d] = bands.get(d, UniPoly()) + term
    bands = {d: q for d, q in sorted(bands.items()) if q}
    return Recurrence(order=r, bands=bands)


def run_recurrence(rec: Recurrence, seeds, K: int, exact=None):
    """Coefficients b_0 .. b_K from the first ``max_offset`` seeds.

    Exact rational arithmetic when every seed is rational (or ``exact=True``),
    complex floating point otherwise.
    """
    top = rec.max_offset
    if len(seeds) != top:
        raise ValueError(f"need {top} seeds, got {len(seeds)}")
    if exact is None:
        exact = all(_is_exact(v) for v in seeds)
    b = [Fraction(v) for v in seeds] if exact else [complex(v) for v in seeds]
    lower = [(d, q) for d, q in rec.bands.items() if d < top]
    lead = rec.leading
    for i in range(0, K - top + 1):
        pivot = lead(i)
        if pivot == 0:
            raise SingularIndexError(i)
        acc = 0
        for d, q in lower:
            k = i + d
            if k < 0:
                continue
            w = q(i)
            if w:
                acc += (w if exact else float(w)) * b[k]
        b.append(-acc / pivot if exact else -acc / float(pivot))
    return b[: K + 1]


def _log_abs(v):
    if isinstance(v, Fraction):
        if not v:
            return None
        return math.log(abs(v.numerator)) - math.log(v.denominator)
    m = abs(complex(v))
    return math.log(m) if m > 0 else None


def estimate_radius(coefficients) -> float:
    """Empirical radius of convergence from the coefficient tail.

    Median of ``|b_j / b_i| ** (1 / (j - i))`` over consecutive nonzero
    coefficients in the last third, inverted.  Zero ratios give infinity;
    non-finite ones give the conservative answer 0.
    """
    n = len(coefficients)
    if n < 16:
        raise ValueError("need at least 16 coefficients to estimate a radius")
    start = (2 * n) // 3
    logs = [(i, _log_abs(coefficients[i])) for i in range(start, n)]
    logs = [(i, m) for i, m in logs if m is not None]
    if not logs:
        return math.inf
    if len(logs) == 1:
        # one surviving term gives no ratio; use the root test on it
        i, m = logs[0]
        return math.exp(-m / i) if i else math.inf
    rates = [(m2 - m1) / (i2 - i1) for (i1, m1), (i2, m2) in zip(logs, logs[1:])]
    mid = statistics.median(rates)
    if not math.isfinite(mid):
        return 0.0
    try:
        return math.exp(-mid)
    except OverflowError:
        return math.inf


@dataclass(frozen=True)
class SeriesBranch:
    """One root branch; ``coefficients`` are those of ``y = x + shift``, unscaled."""

    branch_id: int
    seed: object
    seeds: tuple
    coefficients: tuple
    shift: Fraction
    poly: XSPoly = field(repr=False)
    scale: float = 1.0
    radius_estimate: float = math.inf
    status: str = "converged"

    @property
    def x_coefficients(self):
        return (self.seed,) + tuple(self.coefficients[1:])

    @property
    def scaled_coefficients(self):
        e = self.scale
        return tuple(complex(b) * e**i for i, b in enumerate(self.coefficients))

    @property
    def terms(self) -> int:
        return len(self.coefficients)


def expand_branch(p: XSPoly, rec: Recurrence, shift, seed, K=DEFAULT_TERMS, branch_id=0, exact=None):
    seeds = taylor_seeds(p, seed)
    y_seeds = [seeds[0] + shift] + list(seeds[1:])
    coeffs = run_recurrence(rec, y_seeds, K, exact=exact)
    radius = estimate_radius(coeffs) if len(coeffs) >= 16 else math.inf
    return SeriesBranch(
        branch_id=branch_id,
        seed=seed,
        seeds=tuple(seeds),
        coefficients=tuple(coeffs),
        shift=Fraction(shift),
        poly=p,
        radius_estimate=radius,
    )


def rescale(branch: SeriesBranch, e) -> SeriesBranch:
    """Expand in ``t = s / e`` instead of s; the evaluated sum is unchanged."""
    e = float(e)
    if not e > 0:
        raise ValueError("scale must be positive")
    return replace(branch, scale=e)


def _poly_at(p: XSPoly, s_val):
    """Descending complex coefficients of p(x, s_val)."""
    return tuple(complex(c(s_val)) for c in reversed(p.coeffs))


def evaluate_branch(branch: SeriesBranch, s_val) -> RootEstimate:
    """Sum the branch at ``s = s_val``.

    A point at or beyond the estimated radius is reported as diverged with no
    value; inside it, the tail bound ``|last term| / (1 - rho)`` is attached
    and a residual above tolerance also marks the estimate diverged.
    """
    coeffs = _poly_at(branch.poly, s_val)
    if s_val == 0:
        return RootEstimate(
            value=complex(branch.seed), coeffs=coeffs, branch_id=branch.branch_id,
            status="converged", error_estimate=0.0,
        )
    s = complex(s_val)
    radius = branch.radius_estimate
    rho = abs(s) / radius if radius > 0 else math.inf
    if rho >= 1:
        return RootEstimate(
            value=None, coeffs=coeffs, branch_id=branch.branch_id, status="diverged",
        )
    t = s / branch.scale
    scaled = branch.scaled_coefficients
    acc = 0j
    for c in reversed(scaled[1:]):
        acc = acc * t + c
    value = complex(branch.seed) + t * acc
    last = abs(scaled[-1] * t ** (len(scaled) - 1))
    tail = last / (1 - rho)
    est = RootEstimate(
        value=value, coeffs=coeffs, branch_id=branch.branch_id,
        status="converged", error_estimate=tail,
    )
    size = max(1.0, max(abs(c) for c in coeffs))
    if not est.residual <= RESIDUAL_TOL * size:
        est = replace(est, status="diverged")
    return est

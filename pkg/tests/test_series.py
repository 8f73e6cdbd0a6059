import math
from fractions import Fraction

import mpmath
import pytest

from conftest import random_instances
from resolvent_roots.algebra import UniPoly
from resolvent_roots.errors import MultipleSeedRootError, SingularIndexError, SingularPointError
from resolvent_roots.resolvent import ResolventODE, root_polynomial, shift_homogenize, solve_resolvent
from resolvent_roots.series import (
    Recurrence,
    branch_seeds,
    estimate_radius,
    evaluate_branch,
    expand_branch,
    extract_recurrence,
    normalize_coefficients,
    rescale,
    run_recurrence,
    taylor_coefficients,
    taylor_seeds,
)
from resolvent_roots.pipeline import RunConfig, run_pipeline


def catalan(m):
    return math.comb(2 * m, m) // (m + 1)


def pipeline_parts(p):
    ode = shift_homogenize(solve_resolvent(p), p)
    return ode, extract_recurrence(ode)


def fixed_point_cubic_series(K):
    """Series of the b0 = 0 root of x^3 + x + s by iterating x <- -s - x^3 (truncated)."""
    x = UniPoly()
    for _ in range(K + 1):
        cube = x * x * x
        x = UniPoly([0, -1]) - UniPoly(cube.coeffs[: K + 1])
    return [x[i] for i in range(K + 1)]


# -- normalization -----------------------------------------------------------

def test_normalize_scales_by_power_of_two():
    p = root_polynomial([2, 2])
    scaled, a0, factor = normalize_coefficients(p, 2)
    assert factor == 4 and a0 == Fraction(1, 2)
    assert scaled.at_s(0).coeffs == (0, Fraction(1, 2), Fraction(1, 2))


def test_normalize_noop_when_small():
    p = root_polynomial([Fraction(1, 2), Fraction(-1, 4)])
    scaled, a0, factor = normalize_coefficients(p, Fraction(1, 3))
    assert factor == 1 and scaled == p and a0 == Fraction(1, 3)


def test_normalize_cubic():
    p = root_polynomial([1, 0, 1])
    scaled, a0, factor = normalize_coefficients(p, Fraction(1, 10))
    assert factor == 2
    assert scaled.at_s(0).coeffs == (0, Fraction(1, 2), 0, Fraction(1, 2))
    assert a0 == Fraction(1, 20)
    before = sorted(mpmath.polyroots([1, 0, 1, Fraction(1, 10)]), key=lambda z: (float(z.real), float(z.imag)))
    after = sorted(mpmath.polyroots([0.5, 0, 0.5, 0.05]), key=lambda z: (float(z.real), float(z.imag)))
    assert all(abs(a - b) < 1e-12 for a, b in zip(before, after))


# -- seeds -------------------------------------------------------------------

def test_seeds_quadratic(quadratic):
    assert branch_seeds(quadratic) == [0, pytest.approx(-1)]
    assert isinstance(branch_seeds(quadratic)[0], Fraction)


def test_seeds_cubic(cubic):
    seeds = branch_seeds(cubic)
    assert seeds[0] == 0
    assert sorted(seeds[1:], key=lambda z: z.imag) == [pytest.approx(-1j), pytest.approx(1j)]


def test_seeds_reject_double_root():
    with pytest.raises(MultipleSeedRootError, match="0") as info:
        branch_seeds(root_polynomial([1, 1, 0]))
    assert info.value.roots == (0,)


@pytest.mark.parametrize("cs,p", random_instances(10, seed=5))
def test_seed_vieta(cs, p):
    seeds = branch_seeds(p)
    assert len(seeds) == p.degree
    expected = -float(cs[1] / cs[0]) if p.degree > 1 else 0.0
    assert abs(sum(complex(z) for z in seeds) - expected) <= 1e-10
    for z in seeds[1:]:
        value = sum(complex(c) * z**k for k, c in enumerate(p.at_s(0).coeffs))
        assert abs(value) <= 1e-13 * max(1.0, abs(z) ** p.degree)


def test_taylor_seeds_examples(cubic):
    assert taylor_seeds(cubic, Fraction(0)) == [0, -1]
    b = taylor_seeds(cubic, 1j)
    assert b[0] == 1j and b[1] == pytest.approx(0.5)
    quartic = root_polynomial([1, 0, 0, 1])
    assert taylor_seeds(quartic, Fraction(0)) == [0, -1, 0]


def test_taylor_seed_flat_derivative():
    p = root_polynomial([1, 0, -3])  # p'(x) = 3x^2 - 3 vanishes at 1
    with pytest.raises(MultipleSeedRootError):
        taylor_seeds(p, Fraction(1))


# -- recurrence --------------------------------------------------------------

def test_recurrence_quadratic(quadratic):
    _, rec = pipeline_parts(quadratic)
    assert rec.max_offset == 1
    assert rec.bands == {1: UniPoly([1, 1]), 0: UniPoly([2, -4])}


def test_recurrence_cubic(cubic):
    _, rec = pipeline_parts(cubic)
    assert rec.bands == {2: UniPoly([8, 12, 4]), 0: UniPoly([-3, 0, 27])}
    # 4(i+2)(i+1) and 3(9i^2 - 1)
    assert rec.bands[2] == UniPoly([2, 3, 1]) * 4
    assert rec.bands[0] == UniPoly([-1, 0, 9]) * 3


def test_recurrence_constant_solutions():
    ode = ResolventODE(order=1, coeffs=(UniPoly([1]), UniPoly()), inhomog=UniPoly())
    rec = extract_recurrence(ode)
    assert rec.bands == {1: UniPoly([1, 1])}
    assert run_recurrence(rec, [Fraction(3)], 5) == [3, 0, 0, 0, 0, 0]


def test_recurrence_refuses_singular_point():
    ode = ResolventODE(order=1, coeffs=(UniPoly([0, 1]), UniPoly([1])), inhomog=UniPoly())
    with pytest.raises(SingularPointError):
        extract_recurrence(ode)


def test_recurrence_reproduces_matched_identity(cubic):
    _, rec = pipeline_parts(cubic)
    b = run_recurrence(rec, [Fraction(0), Fraction(-1)], 30)
    assert all(rec.residual(b, i) == 0 for i in range(29))


def test_catalan_branch(quadratic):
    ode, rec = pipeline_parts(quadratic)
    y = run_recurrence(rec, [Fraction(1, 2)], 12)
    assert y[0] == Fraction(1, 2)
    assert y[1:] == [-catalan(i - 1) for i in range(1, 13)]


def test_cubic_branch_coefficients(cubic):
    _, rec = pipeline_parts(cubic)
    b = run_recurrence(rec, [Fraction(0), Fraction(-1)], 20)
    assert b[:10] == [0, -1, 0, 1, 0, -3, 0, 12, 0, -55]
    assert b == fixed_point_cubic_series(20)
    assert b == taylor_coefficients(cubic, Fraction(0), 20)


def test_singular_index():
    rec = Recurrence(order=1, bands={1: UniPoly([-3, 1]), 0: UniPoly([1])})
    with pytest.raises(SingularIndexError) as info:
        run_recurrence(rec, [Fraction(1)], 10)
    assert info.value.index == 3


def test_float_mode_tracks_exact(cubic):
    _, rec = pipeline_parts(cubic)
    exact = run_recurrence(rec, [Fraction(0), Fraction(-1)], 40)
    floating = run_recurrence(rec, [0j, -1 + 0j], 40)
    for e, f in zip(exact, floating):
        assert abs(complex(e) - f) <= 1e-13 * max(1.0, abs(float(e)))


# -- radius ------------------------------------------------------------------

def test_radius_catalan(quadratic):
    ode, rec = pipeline_parts(quadratic)
    coeffs = run_recurrence(rec, [Fraction(1, 2)], 63)
    assert estimate_radius(coeffs) == pytest.approx(0.25, rel=0.05)


def test_radius_cubic(cubic):
    _, rec = pipeline_parts(cubic)
    coeffs = run_recurrence(rec, [Fraction(0), Fraction(-1)], 63)
    assert estimate_radius(coeffs) == pytest.approx(math.sqrt(4 / 27), rel=0.05)


def test_radius_of_polynomial_is_infinite():
    assert estimate_radius([1, 2, 3] + [0] * 20) == math.inf


def test_radius_needs_sixteen_terms():
    with pytest.raises(ValueError):
        estimate_radius([1] * 10)


# -- rescale & evaluate ------------------------------------------------------

def _branch(p, seed=Fraction(0), K=64):
    ode, rec = pipeline_parts(p)
    return expand_branch(p, rec, ode.shift, seed, K=K)


def test_rescale_identity(cubic):
    br = _branch(cubic)
    assert rescale(br, 1).scaled_coefficients == tuple(complex(c) for c in br.coefficients)


def test_rescale_bounds_catalan(quadratic):
    br = rescale(_branch(quadratic), 0.25)
    mags = [abs(c) for c in br.scaled_coefficients[1:]]
    assert all(m <= 1.0 for m in mags)
    assert all(b <= a for a, b in zip(mags[1:], mags[2:]))


@pytest.mark.parametrize("frac", [0.1, 0.5, 0.9])
def test_rescale_is_evaluation_invariant(cubic, frac):
    br = _branch(cubic)
    s = frac * 0.9 * math.sqrt(4 / 27)
    base = evaluate_branch(br, s).value
    for e in (0.1, br.radius_estimate / 2, br.radius_estimate, 1.0):
        assert abs(evaluate_branch(rescale(br, e), s).value - base) <= 1e-12 * max(1.0, abs(base))


def test_evaluate_cubic_real_branch(cubic):
    br = _branch(cubic, K=12)
    est = evaluate_branch(br, Fraction(1, 10))
    reference = mpmath.findroot(lambda x: x**3 + x + mpmath.mpf(1) / 10, -0.1)
    assert est.status == "converged"
    assert abs(est.value - complex(reference)) < 1e-9
    assert est.value.real == pytest.approx(-0.09902885, abs=1e-8)
    assert est.residual <= 1e-8


def test_evaluate_at_origin_returns_seed(cubic):
    br = _branch(cubic, seed=1j)
    assert evaluate_branch(br, 0).value == 1j
    assert evaluate_branch(_branch(cubic), Fraction(0)).value == 0


def test_evaluate_outside_radius_diverges(cubic):
    est = evaluate_branch(_branch(cubic), 1)
    assert est.status == "diverged"
    assert est.value is None


def test_shift_consistency():
    p = root_polynomial([2, -3, 1, 1])
    ode, rec = pipeline_parts(p)
    for k, seed in enumerate(branch_seeds(p)):
        br = expand_branch(p, rec, ode.shift, seed, K=20, branch_id=k)
        assert br.coefficients[0] == seed + ode.shift
        assert br.x_coefficients[0] == seed


@pytest.mark.parametrize("cs,p", random_instances(8, seed=99, degrees=(2, 3, 4)))
def test_normalization_root_invariance(cs, p):
    raw = run_pipeline(RunConfig(cs + [Fraction(0)], normalize=False, oracle_check=False))
    radius = min(b.radius_estimate for b in raw.branches)
    a0 = Fraction(radius * 0.3).limit_denominator(10**6)
    plain = run_pipeline(RunConfig(cs + [a0], normalize=False, oracle_check=False))
    normed = run_pipeline(RunConfig(cs + [a0], normalize=True, oracle_check=False))
    for e1, e2 in zip(plain.estimates, normed.estimates):
        assert e1.status == e2.status == "converged"
        assert abs(e1.value - e2.value) <= 1e-10

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from deltadelta.catalog import SpectralParameter, eval_Au, eval_f, eval_u, make_case, segment_distance
from deltadelta.errors import DomainError, UnstableParameterError, ValidationError

from conftest import A, B

MID = (A + B) / 2


def pv_oracle(u, a, b, x):
    """1/(i pi) p.v. int_a^b u(y)/(y - x) dy by symmetric splitting.

    On [x-d, x+d] the principal value equals int_0^d (u(x+t) - u(x-t))/t dt,
    which is regular; the leftover one-sided piece has no singularity.
    """
    d = min(x - a, b - x)
    core, _ = integrate.quad(lambda t: (u(x + t) - u(x - t)) / t, 0, d, epsabs=1e-14, epsrel=1e-13, limit=200)
    if x - a < b - x:
        rest, _ = integrate.quad(lambda y: u(y) / (y - x), x + d, b, epsabs=1e-14, epsrel=1e-13, limit=200)
    else:
        rest, _ = integrate.quad(lambda y: u(y) / (y - x), a, x - d, epsabs=1e-14, epsrel=1e-13, limit=200)
    return (core + rest) / (1j * math.pi)


def test_u_values():
    assert eval_u(make_case("const", A, B), 0.3) == 1
    assert eval_u(make_case("bump", A, B), MID) == pytest.approx((B - A) / 2, rel=1e-15)
    assert eval_u(make_case("power", A, B, 0.25), MID) == pytest.approx(0.7071067811865476, rel=1e-15)


def test_Au_values_at_midpoint():
    assert eval_Au(make_case("const", A, B), MID) == pytest.approx(0, abs=1e-15)
    assert eval_Au(make_case("bump", A, B), MID) == pytest.approx(0, abs=1e-15)
    # unnormalized 2 cos(pi al) rho^al - 2 divided by -2i at rho = 1
    expected = (2 * math.cos(math.pi / 4) - 2) / (-2j)
    assert eval_Au(make_case("power", A, B, 0.25), MID) == pytest.approx(expected, rel=1e-15)
    assert expected.imag == pytest.approx(-0.2928932188134524)


def test_f_values():
    assert eval_f(make_case("const", A, B), 2, MID) == pytest.approx(2)
    assert eval_f(make_case("bump", A, B), 2, MID) == pytest.approx(B - A)


def test_power_constant_rhs():
    # lambda = i cot(pi al) makes f x-independent
    for alpha in (0.25, 0.1, -0.3):
        case = make_case("power", A, B, alpha)
        lam = 1j / math.tan(math.pi * alpha)
        x = np.linspace(A + 1e-6, B - 1e-6, 200)
        f = case.f(lam, x)
        assert np.ptp(f.real) + np.ptp(f.imag) <= 1e-12 * np.max(np.abs(f))


def test_normalizations_match_jump_pairs():
    """Rescaled triples are the jump-relation (u, A u) divided by -2 pi i, 2i, -2i."""
    x = np.linspace(A + 0.01, B - 0.01, 7)
    rho = (x - A) / (B - x)
    const, bump, power = (make_case(k, A, B) for k in ("const", "bump", "power"))
    np.testing.assert_allclose(const.Au(x), 2 * np.log(rho) / (-2j * math.pi), rtol=1e-14)
    np.testing.assert_allclose(bump.u(x), 2j * np.sqrt((x - A) * (B - x)) / 2j, rtol=1e-14)
    np.testing.assert_allclose(bump.Au(x), ((A + B) - 2 * x) / 2j, rtol=1e-12, atol=1e-15)
    al = 0.25
    np.testing.assert_allclose(power.u(x), -2j * math.sin(math.pi * al) * rho**al / (-2j), rtol=1e-14)
    np.testing.assert_allclose(power.Au(x), (2 * math.cos(math.pi * al) * rho**al - 2) / (-2j), rtol=1e-14)


def test_const_against_pv_quadrature():
    case = make_case("const", A, B)
    rng = np.random.default_rng(11)
    for x in rng.uniform(A, B, 100):
        ref = pv_oracle(lambda y: 1.0, A, B, x)
        assert abs(case.Au(x) - ref) <= 1e-8 * abs(ref) + 1e-14


@pytest.mark.filterwarnings("ignore::scipy.integrate.IntegrationWarning")
@pytest.mark.parametrize("kind", ["bump", "power"])
def test_other_cases_against_pv_quadrature(kind):
    case = make_case(kind, A, B)
    u = lambda y: case.u_gaps(max(y - A, 0.0), max(B - y, 1e-300)).real
    rng = np.random.default_rng(12)
    for x in rng.uniform(A + 0.05, B - 0.05, 20):
        ref = pv_oracle(u, A, B, x)
        assert abs(case.Au(x) - ref) <= 1e-7 * max(abs(ref), 1.0)


@given(
    left=st.floats(min_value=1e-9, max_value=B - A - 1e-9),
)
def test_parity_even_solutions(left):
    right = (B - A) - left
    for kind in ("const", "bump"):
        case = make_case(kind, A, B)
        mirrored = case.Au_gaps(right, left)
        direct = -case.Au_gaps(left, right)
        assert abs(mirrored - direct) <= 4 * np.spacing(max(abs(direct), 1e-300))


@given(x=st.floats(min_value=A, max_value=B, exclude_min=True, exclude_max=True))
def test_parity_pointwise(x):
    xr = A + B - x
    if not A < xr < B:
        return
    case = make_case("const", A, B)
    # rounding of the mirror point, amplified by |d Au / dx|
    slope = (1 / (x - A) + 1 / (B - x)) / math.pi
    tol = 4 * np.spacing(max(abs(case.Au(x)), 1.0)) + 4 * np.spacing(B) * slope
    assert abs(case.Au(xr) + case.Au(x)) <= tol


def test_power_alpha_to_zero():
    x = np.linspace(A + 0.1, B - 0.1, 5)
    case = make_case("power", A, B, 1e-12)
    assert np.max(np.abs(case.u(x))) < 1e-11
    assert np.max(np.abs(case.Au(x))) < 1e-11


def test_power_blows_up_toward_b():
    case = make_case("power", A, B, 0.25)
    vals = np.abs(case.u_gaps(B - A - np.array([1e-2, 1e-6, 1e-12]), np.array([1e-2, 1e-6, 1e-12])))
    assert np.all(np.diff(vals) > 0)


@pytest.mark.parametrize("x", [A, B, A - 1, B + 0.5])
def test_domain_errors(x):
    case = make_case("bump", A, B)
    with pytest.raises(DomainError):
        eval_u(case, x)
    with pytest.raises(DomainError):
        eval_Au(case, x)
    with pytest.raises(DomainError):
        eval_f(case, 2, x)


def test_case_validation():
    with pytest.raises(ValidationError):
        make_case("power", A, B, 0.5)
    with pytest.raises(ValidationError):
        make_case("sine", A, B)


@pytest.mark.parametrize(
    "lam, dist",
    [(2, 1.0), (1j, 1.0), (-1.5, 0.5), (1 + 1j, 1.0), (0.5 + 0.1j, 0.1), (2 + 1j, math.sqrt(2)), (-3 - 4j, math.hypot(2, 4))],
)
def test_segment_distance(lam, dist):
    assert segment_distance(lam) == pytest.approx(dist, rel=1e-15)
    assert SpectralParameter(lam).dist_to_C == pytest.approx(dist, rel=1e-15)


@pytest.mark.parametrize("lam", [0.5, -1, 1, 0, 1 + 1e-13, 0.3 + 1e-13j])
def test_unstable_parameter(lam):
    with pytest.raises(UnstableParameterError) as info:
        SpectralParameter(lam)
    assert info.value.distance < 1e-12

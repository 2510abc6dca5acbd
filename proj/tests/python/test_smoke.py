import math

import pytest

try:
    import cqsmooth as cq
except ImportError:
    import _cqsmooth as cq


def test_bdf_polynomial():
    assert cq.bdf_polynomial(1) == pytest.approx([1.0, -1.0])
    assert cq.bdf_polynomial(2) == pytest.approx([1.5, -2.0, 0.5])


def test_cq_weights_sqrt():
    w = cq.cq_weights(0.5, 1, 2)
    assert w == pytest.approx([1.0, -0.5, -0.125])


def test_discrete_derivative_ramp():
    tau = 0.25
    values = [i * tau for i in range(5)]
    assert cq.discrete_conv_derivative(1.0, 1, values, tau) == pytest.approx(1.0)


def test_hadamard_values():
    assert cq.hadamard_power_integral(2.0, 1.0) == pytest.approx(-1.0)
    assert cq.smooth_power_source(-1.5, 2, 1.0) == pytest.approx(-4.0)


def test_singular_quadrature():
    assert cq.singular_quadrature(-0.5, lambda s: 1.0, 0.0, 1.0) == pytest.approx(2.0)
    assert cq.singular_quadrature(-0.5, lambda s: s, 0.0, 1.0) == pytest.approx(2.0 / 3)


def test_cgl_nodes():
    x = cq.cgl_nodes(4)
    assert x[0] == 1.0 and x[-1] == -1.0
    assert x[1] == pytest.approx(math.sqrt(2) / 2)


def test_laplacian_on_sine():
    M = 16
    nodes = cq.cgl_nodes(M)[1:-1]
    A = cq.laplacian_dirichlet(M)
    s = [math.sin(math.pi * x) for x in nodes]
    for i, row in enumerate(A):
        val = sum(a * b for a, b in zip(row, s))
        assert val == pytest.approx(-math.pi**2 * s[i], abs=1e-6)


def test_mittag_leffler_exponential():
    for z in (-2.0, -0.5, 0.0, 1.5):
        assert cq.mittag_leffler(1.0, 1.0, z) == pytest.approx(math.exp(z), rel=1e-12)


def test_scalar_mode_converges_to_oracle():
    gamma, lam = 0.7, -1.0
    exact = cq.scalar_exact_solution(gamma, lam, ups0=1.0, q0=1.0, mu=-1.2, t=1.0)
    errs = []
    for N in (64, 128, 256):
        u = cq.advance_scalar_mode(gamma, 2, 2, 1.0, N, lam, ups0=1.0,
                                   source_kind="power", mu=-1.2, q0=1.0)
        errs.append(abs(u[-1] - exact))
    orders = cq.convergence_order(errs)
    assert errs[-1] < errs[0]
    assert orders[-1] > 1.5


def test_smoothed_scalar_matches_series():
    mu, m, t = -1.8, 3, 0.75
    series = sum(
        math.gamma(mu + j + 1) / (math.gamma(mu + j + m + 1) * math.factorial(j))
        * t ** (mu + j + m)
        for j in range(40)
    )
    assert cq.smoothed_scalar("product", mu, m, t) == pytest.approx(series, rel=1e-11)


def test_stability_metadata():
    assert cq.stability_check(0.7, 6) == "unconditional"
    assert cq.stability_check(1.7, 6) == "conditional"
    lo, hi = cq.stability_annulus(1.7, 6)
    assert 0.5 < lo < 0.7 and 85 < hi < 100
    assert cq.stability_annulus(0.7, 6) is None


def test_pde_advance_zero_data():
    out = cq.advance(0.5, 1, 2, 1.0, 8, 8)
    assert all(abs(v) == 0.0 for row in out["u"] for v in row)
    assert not out["unstable"]

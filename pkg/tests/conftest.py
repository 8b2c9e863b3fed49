"""Shared fixtures and independent oracles.

The oracles here deliberately avoid the code paths they check: the
B-spline oracle is the Cox-de Boor recursion instead of truncated powers,
the moment oracle is a raw lattice sum, and the operator oracle stacks a
composite Simpson rule over the full combined window without any knot
alignment.
"""

import math
import warnings

import numpy as np
import pytest

from expsample import (
    OperatorSpec,
    QuadratureConfig,
    characteristic,
    durrmeyer_eval,
    make_translate_combination,
    mellin_bspline,
)


@pytest.fixture(autouse=True)
def _silence_admissibility():
    # the suite exercises unbounded test functions on purpose
    with warnings.catch_warnings():
        warnings.filterwarnings(
            "ignore", message=".*neither boundedness nor a growth bound.*")
        yield


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture
def b2():
    return mellin_bspline(2)


@pytest.fixture
def b4():
    return mellin_bspline(4)


@pytest.fixture
def char():
    return characteristic()


@pytest.fixture
def psi():
    return make_translate_combination(2, -2.0, -3.0)


def cox_de_boor(n, t):
    """Central B-spline of order n at t, by the Cox-de Boor recursion on
    the uniform knots 0..n shifted to be centred at zero."""
    x = t + n / 2.0

    def N(i, k):
        if k == 1:
            return 1.0 if i <= x < i + 1 else 0.0
        return ((x - i) / (k - 1)) * N(i, k - 1) \
            + ((i + k - x) / (k - 1)) * N(i + 1, k - 1)

    return N(0, n)


def direct_discrete_moment(kernel, nu, u, kspan=60):
    """Raw lattice sum over a wide fixed window."""
    tau = math.log(u)
    total = 0.0
    for k in range(math.floor(tau) - kspan, math.ceil(tau) + kspan + 1):
        total += float(kernel.eval_log(tau - k)) * (k - tau) ** nu
    return total


def simpson_operator_oracle(chi, phi, w, f, x, n_inner=4001):
    """Operator value via composite Simpson on each inner window, with no
    knot alignment and a generous node count."""
    tc = w * math.log(x)
    lo_c, hi_c = chi.support
    lo_p, hi_p = phi.support
    total = 0.0
    for k in range(math.floor(tc - hi_c) - 1, math.ceil(tc - lo_c) + 2):
        cw = float(chi.eval_log(tc - k))
        if cw == 0.0:
            continue
        a = (k + lo_p) / w
        b = (k + hi_p) / w
        us = np.linspace(a, b, n_inner)
        vals = np.array([float(phi.eval_log(w * u - k)) * f(math.exp(u))
                         for u in us])
        inner = float(np.trapezoid(vals, us)) if hasattr(np, "trapezoid") \
            else float(np.trapz(vals, us))
        total += cw * w * inner
    return total


def dense_config_oracle(spec, f, x):
    """The package's own evaluator at 10x quadrature density and doubled
    truncation radius; independent of the default configuration."""
    dense = OperatorSpec(
        chi=spec.chi,
        phi=spec.phi,
        w=spec.w,
        truncation_radius=2.0 * spec.chi.log_support_radius,
        quadrature=QuadratureConfig(
            nodes_per_unit=10 * spec.quadrature.nodes_per_unit,
            panel_max_width=spec.quadrature.panel_max_width),
    )
    return durrmeyer_eval(dense, f, x)

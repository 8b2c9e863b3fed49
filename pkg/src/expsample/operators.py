"""Sampling-type operators on the multiplicative half-line.

The central object replaces each sample value of f at the node e^{k/w}
with a convolution mean against a second kernel phi:

    (I_w f)(x) = sum_k chi(e^{-k} x^w) * w * int phi(e^{-k} t^w) f(t) dt/t

For compactly supported chi the k-sum is an exact finite sum; the inner
integral lives on log t in [(k + lo_phi)/w, (k + hi_phi)/w] and is done by
knot-aligned Gauss-Legendre panels.  Choosing phi as the indicator of
[1, e) turns the inner integral into the plain mean of f(e^u) over
[k/w, (k+1)/w]; kantorovich_eval implements that form directly as an
independent route, and sampling_eval is the bare series driven by raw
sample values.
"""

from __future__ import annotations

import csv
import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import EvaluationError, SamplingError
from .kernels import Kernel
from .quadrature import DEFAULT_CONFIG, LogInterval, QuadratureConfig, _panel_nodes


@dataclass(frozen=True)
class OperatorSpec:
    """A (chi, phi) kernel pair with scale w and numerical policy.

    truncation_radius bounds |k - w log x| in the outer sum; None means
    the exact window induced by the support of chi.  A finite radius may
    not cut into that support.
    """

    chi: Kernel
    phi: Kernel
    w: float
    truncation_radius: Optional[float] = None
    quadrature: QuadratureConfig = field(default_factory=QuadratureConfig)

    def __post_init__(self):
        if self.w <= 0:
            raise ValueError(f"w must be positive, got {self.w}")
        if self.truncation_radius is not None:
            if self.truncation_radius < self.chi.log_support_radius:
                raise ValueError(
                    "truncation_radius may not be smaller than the support "
                    f"radius {self.chi.log_support_radius} of chi")

    def with_w(self, w):
        return OperatorSpec(self.chi, self.phi, w,
                            self.truncation_radius, self.quadrature)


def _admissibility_warning(f):
    bounded = getattr(f, "bounded", False)
    growth = getattr(f, "growth_bound", None)
    if not bounded and growth is None:
        name = getattr(f, "name", repr(f))
        warnings.warn(
            f"function {name!r} declares neither boundedness nor a growth "
            "bound; the operator series may not converge globally",
            stacklevel=3)


def _outer_window(chi, w, x, radius=None):
    """Integers k with chi(e^{-k} x^w) != 0 (possibly narrowed by radius)."""
    tc = w * math.log(x)
    lo, hi = chi.support
    kmin = math.floor(tc - hi)
    kmax = math.ceil(tc - lo)
    if radius is not None:
        kmin = max(kmin, math.ceil(tc - radius))
        kmax = min(kmax, math.floor(tc + radius))
    if kmin > kmax:
        raise EvaluationError(
            f"empty summation window for w={w}, x={x}: check truncation_radius")
    return tc, np.arange(kmin, kmax + 1)


def _convolution_log(phi, f, w, log_s, cfg):
    """w * int phi(t^w / s^w) f(t) dt/t with log s given directly."""
    lo, hi = phi.support
    iv = LogInterval(log_s + lo / w, log_s + hi / w)
    knots = tuple(log_s + k / w for k in phi.knots)
    total = 0.0
    for nodes, weights in _panel_nodes(iv, cfg, knots):
        phis = np.asarray(phi.eval_log(w * (nodes - log_s)), dtype=float)
        for u, wt, pv in zip(nodes, weights, phis):
            if pv == 0.0:
                continue
            t = math.exp(u)
            try:
                fv = f(t)
            except EvaluationError as exc:
                raise EvaluationError(
                    f"evaluating f at t={t!r} inside the convolution window "
                    f"around s=e^{log_s:.6g}: {exc}") from exc
            if not math.isfinite(fv):
                raise EvaluationError(
                    f"non-finite value of f at t={t!r} inside the "
                    f"convolution window around s=e^{log_s:.6g}")
            total += wt * pv * fv
    return float(w * total)


def mellin_convolution(phi, f, w, s, cfg=DEFAULT_CONFIG):
    """Convolution mean of f against the scaled kernel w phi(u^w), centred
    at s > 0.  Reproduces constants exactly whenever phi integrates to 1."""
    if s <= 0:
        raise ValueError("s must be positive")
    return _convolution_log(phi, f, w, math.log(s), cfg)


def durrmeyer_eval(spec, f, x):
    """Evaluate the convolution-sampling operator at x > 0.

    Exact finite sum over the support window of chi; each term weights the
    convolution mean of f around the node e^{k/w}.
    """
    if x <= 0:
        raise ValueError("x must be positive")
    _admissibility_warning(f)
    tc, ks = _outer_window(spec.chi, spec.w, x, spec.truncation_radius)
    weights = np.asarray(spec.chi.eval_log(tc - ks), dtype=float)
    total = 0.0
    for k, cw in zip(ks, weights):
        if cw == 0.0:
            continue
        total += cw * _convolution_log(spec.phi, f, spec.w, k / spec.w,
                                       spec.quadrature)
    return float(total)


def kantorovich_eval(chi, f, w, x, cfg=DEFAULT_CONFIG):
    """The integral-mean form: sum_k chi(e^{-k} x^w) w int_{k/w}^{(k+1)/w}
    f(e^u) du, written out directly rather than through a phi kernel.
    Must agree with durrmeyer_eval under the characteristic kernel."""
    if x <= 0:
        raise ValueError("x must be positive")
    _admissibility_warning(f)
    tc, ks = _outer_window(chi, w, x)
    weights = np.asarray(chi.eval_log(tc - ks), dtype=float)
    total = 0.0
    for k, cw in zip(ks, weights):
        if cw == 0.0:
            continue
        iv = LogInterval(k / w, (k + 1) / w)
        inner = 0.0
        for nodes, wts in _panel_nodes(iv, cfg):
            for u, wt in zip(nodes, wts):
                fv = f(math.exp(u))
                if not math.isfinite(fv):
                    raise EvaluationError(
                        f"non-finite value of f at t={math.exp(u)!r} in the "
                        f"mean over [{k}/{w}, {k + 1}/{w}]")
                inner += wt * fv
        total += cw * w * inner
    return float(total)


@dataclass(frozen=True)
class SampleAccessor:
    """Sample values g(e^{k/w}) by synthesis from a function or from an
    explicit table keyed by k."""

    fn: Optional[Callable[[float], float]] = None
    table: Optional[dict] = None

    @classmethod
    def from_function(cls, f):
        return cls(fn=f)

    @classmethod
    def from_table(cls, table):
        return cls(table=dict(table))

    def sample(self, k, w):
        if self.fn is not None:
            return self.fn(math.exp(k / w))
        if self.table is not None:
            try:
                return self.table[k]
            except KeyError:
                raise SamplingError(
                    f"no sample for k={k} (node e^{{{k}/{w}}}) in the table"
                ) from None
        raise SamplingError("sample accessor has neither function nor table")


def sampling_eval(chi, samples, w, x):
    """The bare sampling series sum_k chi(e^{-k} x^w) g(e^{k/w})."""
    if x <= 0:
        raise ValueError("x must be positive")
    tc, ks = _outer_window(chi, w, x)
    weights = np.asarray(chi.eval_log(tc - ks), dtype=float)
    total = 0.0
    for k, cw in zip(ks, weights):
        if cw == 0.0:
            continue
        total += cw * samples.sample(int(k), w)
    return float(total)


# --- batch evaluation -------------------------------------------------------

def _worker_count(requested=None):
    if requested is not None:
        return max(1, requested)
    env = os.environ.get("EXPSAMPLE_THREADS", "0")
    try:
        n = int(env)
    except ValueError:
        n = 0
    if n <= 0:
        n = os.cpu_count() or 1
    return n


def batch_eval(spec, f, points, evaluator=None, max_workers=None):
    """Evaluate the operator on a grid of (x, w) pairs.

    Each point is independent and pure, so the pool size only affects
    speed; results are assembled in input order.  Returns rows
    (x, w, f(x), value, abs_err).
    """
    if evaluator is None:
        def evaluator(x, w):
            return durrmeyer_eval(spec.with_w(w), f, x)

    def one(pt):
        x, w = pt
        val = evaluator(x, w)
        fx = f(x)
        return (x, w, fx, val, abs(fx - val))

    workers = _worker_count(max_workers)
    if workers == 1:
        return [one(pt) for pt in points]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one, points))


BATCH_CSV_COLUMNS = ("x", "w", "fx", "Iwfx", "abs_err")


def write_batch_csv(rows, path):
    """Serialize batch rows with the documented column set, atomically."""
    tmp = f"{path}.tmp.{os.getpid()}"
    with open(tmp, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(BATCH_CSV_COLUMNS)
        for row in rows:
            writer.writerow([repr(v) for v in row])
    os.replace(tmp, path)

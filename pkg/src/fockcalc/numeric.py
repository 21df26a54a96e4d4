"""Floating-point quadrature oracle for the exact engine.

Integrals over the plane are taken in polar form with ``u = r^2``: the
radial part uses Gauss-Laguerre nodes (exact for polynomials in ``u`` of
degree ``<= 2R - 1``) and the angular part a uniform rule with ``A`` nodes
(exact for trigonometric polynomials of degree ``<= A - 1``).  All integrands
here are polynomial in ``z``, ``zbar`` times ``exp(-|z|^2)``, so the node
counts that make the rule exact follow from degrees alone.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial.laguerre import laggauss

from .calculus import AnalyticPoly, MixedSymbol, toeplitz_apply

__all__ = [
    "InsufficientExactness",
    "QuadratureRule",
    "KernelEvaluator",
    "ComparisonReport",
    "numeric_inner_product",
    "numeric_project",
    "numeric_toeplitz",
    "compare_exact_numeric",
]

KERNEL_GUARD_TERMS = 8


class InsufficientExactness(ValueError):
    """The quadrature rule or kernel truncation is too small for the integrand."""


@lru_cache(maxsize=None)
def _laguerre(R: int):
    return laggauss(R)


@dataclass(frozen=True)
class QuadratureRule:
    radial: int
    angular: int

    def __post_init__(self):
        if self.radial < 1 or self.angular < 1:
            raise ValueError("quadrature rule needs at least one node per direction")

    @classmethod
    def for_degrees(cls, u_degree: int, bandwidth: int) -> "QuadratureRule":
        """Smallest rule exact for ``u^u_degree`` and frequencies up to ``bandwidth``."""
        return cls(max(1, (u_degree + 2) // 2), bandwidth + 1)

    @property
    def radial_exactness(self) -> int:
        return 2 * self.radial - 1

    @property
    def angular_exactness(self) -> int:
        return self.angular - 1

    def require(self, u_degree: int, bandwidth: int) -> None:
        if u_degree > self.radial_exactness:
            raise InsufficientExactness(
                f"radial rule with {self.radial} nodes is exact to u-degree "
                f"{self.radial_exactness}, need {u_degree}"
            )
        if bandwidth > self.angular_exactness:
            raise InsufficientExactness(
                f"angular rule with {self.angular} nodes is exact to frequency "
                f"{self.angular_exactness}, need {bandwidth}"
            )

    def doubled(self) -> "QuadratureRule":
        return QuadratureRule(2 * self.radial, 2 * self.angular)

    def nodes(self):
        """Flattened points ``w`` and weights so that sum(weights * F(w)) ~ int F e^{-|w|^2} dA."""
        u, wu = _laguerre(self.radial)
        theta = 2.0 * np.pi * np.arange(self.angular) / self.angular
        points = np.sqrt(u)[:, None] * np.exp(1j * theta)[None, :]
        weights = np.repeat(wu[:, None] * (np.pi / self.angular), self.angular, axis=1)
        return points.ravel(), weights.ravel()


@dataclass(frozen=True)
class KernelEvaluator:
    """Truncated reproducing kernel ``sum_{j<=M} m!/(j+m)! (z conj(w))^j``."""

    m: int
    truncation: int

    def coefficients(self) -> np.ndarray:
        m = self.m
        return np.array(
            [math.factorial(m) / math.factorial(j + m) for j in range(self.truncation + 1)]
        )

    def __call__(self, z, w) -> np.ndarray:
        x = np.multiply.outer(np.asarray(z, dtype=complex), np.conj(np.asarray(w, dtype=complex)))
        out = np.zeros_like(x)
        for c in self.coefficients()[::-1]:
            out = out * x + c
        return out

    def tail_bound(self, x: float) -> float:
        """Bound on the dropped terms at ``|z w| = x``; ``inf`` if not yet decreasing."""
        m, M = self.m, self.truncation
        ratio = x / (M + 2 + m)
        if ratio >= 1:
            return math.inf
        first = math.exp((M + 1) * math.log(x) - math.lgamma(M + 2 + m) + math.lgamma(m + 1)) if x > 0 else 0.0
        return first / (1 - ratio)


def _poly_arrays(f: AnalyticPoly):
    degs = np.array([k for k, _ in f.items()], dtype=int)
    coeffs = np.array([complex(c) for _, c in f.items()], dtype=complex)
    return degs, coeffs


def _eval_poly(f: AnalyticPoly, z: np.ndarray) -> np.ndarray:
    degs, coeffs = _poly_arrays(f)
    if degs.size == 0:
        return np.zeros_like(z, dtype=complex)
    return (coeffs[None, :] * z[:, None] ** degs[None, :]).sum(axis=1)


def numeric_inner_product(f: AnalyticPoly, g: AnalyticPoly, m: int, rule: QuadratureRule | None = None) -> complex:
    """Quadrature value of ``int f conj(g) |z|^{2m} exp(-|z|^2) dA``."""
    df = int(f.degree()) if f else 0
    dg = int(g.degree()) if g else 0
    u_degree = (df + dg) // 2 + m
    bandwidth = max(df, dg)
    if rule is None:
        rule = QuadratureRule.for_degrees(u_degree, bandwidth)
    rule.require(u_degree, bandwidth)
    w, weights = rule.nodes()
    integrand = _eval_poly(f, w) * np.conj(_eval_poly(g, w)) * np.abs(w) ** (2 * m)
    return complex(np.sum(weights * integrand))


def _circle_points(count: int, radius: float = 1.0) -> np.ndarray:
    return radius * np.exp(2j * np.pi * (np.arange(count) + 0.25) / count)


def _fit(values: np.ndarray, points: np.ndarray, degree: int) -> np.ndarray:
    vander = points[:, None] ** np.arange(degree + 1)[None, :]
    coeffs, *_ = np.linalg.lstsq(vander, values, rcond=None)
    return coeffs


def _projection_integral(
    terms: list[tuple[complex, int, int]], m: int, rule: QuadratureRule, kernel: KernelEvaluator, z: np.ndarray
) -> np.ndarray:
    # (1/(pi m!)) int (sum c w^a conj(w)^b) K_m(z, w) |w|^{2m} e^{-|w|^2} dA(w)
    w, weights = rule.nodes()
    f_vals = np.zeros_like(w)
    for c, a, b in terms:
        f_vals = f_vals + c * w**a * np.conj(w) ** b
    integrand = f_vals * np.abs(w) ** (2 * m) * weights
    kz = kernel(z, w)
    return (kz * integrand[None, :]).sum(axis=1) / (math.pi * math.factorial(m))


def _requirements(terms: list[tuple[complex, int, int]], m: int, truncation: int) -> tuple[int, int]:
    u_degree = 0
    bandwidth = 0
    for _, a, b in terms:
        shift = a - b
        # only the kernel term with j = a - b survives; its u-degree is a + m
        u_degree = max(u_degree, a + m)
        bandwidth = max(bandwidth, abs(shift), abs(shift - truncation))
    return u_degree, bandwidth


def numeric_project(
    s: int,
    t_bar: int,
    m: int,
    rule: QuadratureRule | None = None,
    kernel: KernelEvaluator | None = None,
    eval_points: np.ndarray | None = None,
) -> np.ndarray:
    """Coefficients (degrees ``0..s``) of ``P(zbar^t_bar z^s)`` fitted from quadrature values."""
    if kernel is None:
        kernel = KernelEvaluator(m, s + KERNEL_GUARD_TERMS)
    if kernel.truncation < s:
        raise InsufficientExactness(f"kernel truncation {kernel.truncation} < s = {s}")
    terms = [(1.0 + 0j, s, t_bar)]
    u_degree, bandwidth = _requirements(terms, m, kernel.truncation)
    if rule is None:
        rule = QuadratureRule.for_degrees(u_degree, bandwidth)
    rule.require(u_degree, bandwidth)
    if eval_points is None:
        eval_points = _circle_points(s + 5)
    eval_points = np.asarray(eval_points, dtype=complex)
    values = _projection_integral(terms, m, rule, kernel, eval_points)
    return _fit(values, eval_points, s)


@dataclass
class ComparisonReport:
    max_rel_err: float
    nodes_radial: int
    nodes_angular: int
    kernel_truncation: int
    passed: bool
    numeric: list[complex] | None = None

    def to_dict(self) -> dict:
        return {
            "max_rel_err": self.max_rel_err,
            "nodes_radial": self.nodes_radial,
            "nodes_angular": self.nodes_angular,
            "kernel_truncation": self.kernel_truncation,
            "pass": self.passed,
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def _symbol_terms(phi: MixedSymbol, f: AnalyticPoly) -> list[tuple[complex, int, int]]:
    out = []
    for (p, n), c in phi.items():
        for k, a in f.items():
            out.append((complex(c * a), p + k, n))
    return out


def numeric_toeplitz(
    phi: MixedSymbol,
    f: AnalyticPoly,
    m: int,
    rule: QuadratureRule | None = None,
    truncation: int | None = None,
) -> tuple[np.ndarray, QuadratureRule, KernelEvaluator]:
    """Coefficients of ``T_phi f`` recovered from the defining integral."""
    terms = _symbol_terms(phi, f)
    degree = max((a - b for _, a, b in terms), default=0)
    degree = max(degree, 0)
    kernel = KernelEvaluator(m, degree + KERNEL_GUARD_TERMS if truncation is None else truncation)
    if kernel.truncation < degree:
        raise InsufficientExactness(f"kernel truncation {kernel.truncation} < output degree {degree}")
    u_degree, bandwidth = _requirements(terms, m, kernel.truncation)
    if rule is None:
        rule = QuadratureRule.for_degrees(u_degree, bandwidth)
    rule.require(u_degree, bandwidth)
    points = _circle_points(degree + 5)
    values = _projection_integral(terms, m, rule, kernel, points) if terms else np.zeros(len(points), complex)
    return _fit(values, points, degree), rule, kernel


def compare_exact_numeric(
    phi: MixedSymbol,
    f: AnalyticPoly,
    m: int,
    rule: QuadratureRule | None = None,
    tol: float = 1e-8,
) -> ComparisonReport:
    """Largest componentwise relative gap between exact and quadrature ``T_phi f``.

    Coefficients that are exactly zero are measured against the largest
    exact coefficient instead.
    """
    numeric, rule, kernel = numeric_toeplitz(phi, f, m, rule)
    exact = toeplitz_apply(phi, f, m)
    exact_vals = np.array([complex(exact.coeff(k)) for k in range(len(numeric))])
    scale = max(np.max(np.abs(exact_vals), initial=0.0), 1.0)
    worst = 0.0
    for e, x in zip(exact_vals, numeric):
        denom = abs(e) if e != 0 else scale
        worst = max(worst, abs(x - e) / denom)
    if exact and exact.degree() >= len(numeric):
        worst = math.inf
    return ComparisonReport(float(worst), rule.radial, rule.angular, kernel.truncation, bool(worst <= tol), [complex(x) for x in numeric])

"""Necessary-condition checks for hyponormality and quasinormality.

Two-term symbols ``a z^p zbar^n + b z^s zbar^t`` with ``p >= n`` and
``t >= s`` are probed at monomials ``z^k``.  Every check evaluates its
factorial expressions exactly and carries a cross-check computed by the
quadratic-form engine in :mod:`fockcalc.calculus`.
"""

from __future__ import annotations

import enum
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .calculus import (
    AnalyticPoly,
    MixedSymbol,
    hyponormality_form,
    quasinormality_defect,
)
from .scalar import GaussianRational, PiScalar, as_gaussian, factorial

__all__ = [
    "HypoCase",
    "QuasiCase",
    "HypothesisError",
    "TwoTermSymbol",
    "CriterionReport",
    "QuasiReport",
    "ZnCResult",
    "SweepResult",
    "classify_hypo",
    "classify_quasi",
    "master_bracket",
    "thm21_inequality",
    "remark24_check",
    "zn_c_form",
    "remark27_bound",
    "thm31_classify",
    "necessary_sweep",
]


class HypothesisError(ValueError):
    """Inputs violate a hypothesis of the check being run."""


class HypoCase(str, enum.Enum):
    H1 = "H1"  # t > s+1, p = n+1
    H2 = "H2"  # t > s+1, p > n+1
    H3 = "H3"  # t = s+1, p > n+1
    OUT_OF_SCOPE = "OutOfScope"


class QuasiCase(str, enum.Enum):
    QA = "Qa"  # p != n, s != t
    QB = "Qb"  # p == n, s != t
    QC = "Qc"  # p != n, s == t
    QD = "Qd"  # p == n, s == t


def _f(n: int) -> int:
    if n < 0:
        raise RuntimeError(f"internal error: factorial argument {n} out of range")
    return factorial(n)


@dataclass(frozen=True)
class TwoTermSymbol:
    """``a z^p zbar^n + b z^s zbar^t`` with ``p >= n`` and ``t >= s``."""

    a: GaussianRational
    b: GaussianRational
    p: int
    n: int
    s: int
    t: int

    def __post_init__(self):
        object.__setattr__(self, "a", as_gaussian(self.a))
        object.__setattr__(self, "b", as_gaussian(self.b))
        if min(self.p, self.n, self.s, self.t) < 0:
            raise HypothesisError("exponents must be nonnegative")
        if self.p < self.n:
            raise HypothesisError(f"hypothesis p >= n violated (p={self.p}, n={self.n})")
        if self.t < self.s:
            raise HypothesisError(f"hypothesis t >= s violated (s={self.s}, t={self.t})")

    @classmethod
    def from_symbol(cls, phi: MixedSymbol) -> "TwoTermSymbol":
        """Split a symbol with at most two terms into the ``a`` and ``b`` parts.

        The ``a`` term is the one with ``p >= n``; the other needs ``t >= s``.
        A single term is taken as the ``a`` part with ``b = 0``, or as the
        ``b`` part with ``a = 0`` if it only fits there.  The exponents of the
        absent term are dummies chosen so that the gaps differ and the case
        is never H3, whose printed inequality ignores the coefficients.
        """
        items = list(phi.items())
        if not items or len(items) > 2:
            raise HypothesisError("expected a symbol with one or two terms")
        if len(items) == 1:
            (p, n), c = items[0]
            if p >= n:
                return cls(c, 0, p, n, 0, 3 if p - n == 2 else 2)
            return cls(0, c, 0, 0, p, n)
        (k1, c1), (k2, c2) = items
        for (pa, na), ca, (sb, tb), cb in ((k1, c1, k2, c2), (k2, c2, k1, c1)):
            if pa >= na and tb >= sb:
                return cls(ca, cb, pa, na, sb, tb)
        raise HypothesisError(
            f"symbol {phi} cannot be written as a z^p zb^n + b z^s zb^t with p >= n, t >= s"
        )

    def symbol(self) -> MixedSymbol:
        return MixedSymbol({(self.p, self.n): self.a}) + MixedSymbol({(self.s, self.t): self.b})

    def with_coefficients(self, a, b) -> "TwoTermSymbol":
        return TwoTermSymbol(a, b, self.p, self.n, self.s, self.t)


def classify_hypo(sym: TwoTermSymbol) -> HypoCase:
    p, n, s, t = sym.p, sym.n, sym.s, sym.t
    if t > s + 1 and p == n + 1:
        return HypoCase.H1
    if t > s + 1 and p > n + 1:
        return HypoCase.H2
    if t == s + 1 and p > n + 1:
        return HypoCase.H3
    return HypoCase.OUT_OF_SCOPE


def classify_quasi(sym: TwoTermSymbol) -> QuasiCase:
    if sym.p != sym.n:
        return QuasiCase.QC if sym.s == sym.t else QuasiCase.QA
    return QuasiCase.QD if sym.s == sym.t else QuasiCase.QB


def _fmt(x) -> str | None:
    return None if x is None else str(x)


@dataclass(frozen=True)
class CriterionReport:
    theorem: str
    case: str
    k: int | None
    lhs: Fraction
    rhs: Fraction
    holds: bool
    cross_check: object = None  # pi-free form value at z^k, when available
    variant: str = "derived"

    def to_dict(self) -> dict:
        return {
            "theorem": self.theorem,
            "case": self.case,
            "k": self.k,
            "lhs": str(self.lhs),
            "rhs": str(self.rhs),
            "holds": self.holds,
            "cross_check": _fmt(self.cross_check),
        }


def _norm_ratio(top: int, bottom: int) -> Fraction:
    # top!^2 / bottom!
    return Fraction(_f(top) ** 2, _f(bottom))


def _hypo_split(sym: TwoTermSymbol, m: int, k: int) -> tuple[Fraction, Fraction]:
    """``(||T z^k||^2, ||T* z^k||^2) / pi`` for non-interfering terms."""
    p, n, s, t = sym.p, sym.n, sym.s, sym.t
    a2, b2 = sym.a.abs_sq(), sym.b.abs_sq()
    forward = a2 * _norm_ratio(p + k + m, p + k + m - n) + b2 * _norm_ratio(s + k + m, s + k + m - t)
    backward = a2 * _norm_ratio(n + k + m, n + k + m - p) + b2 * _norm_ratio(t + k + m, t + k + m - s)
    return forward, backward


def _check_thm21(sym: TwoTermSymbol, k: int):
    if k <= max(sym.p, sym.t):
        raise HypothesisError(f"probe condition k > p, t violated (k={k}, p={sym.p}, t={sym.t})")
    if abs(sym.p - sym.n) == abs(sym.t - sym.s):
        raise HypothesisError(
            f"hypothesis |p - n| != |t - s| violated (p={sym.p}, n={sym.n}, s={sym.s}, t={sym.t})"
        )


def master_bracket(sym: TwoTermSymbol, m: int, k: int) -> Fraction:
    """``||T z^k||^2 - ||T* z^k||^2`` over pi from the closed factorial form."""
    _check_thm21(sym, k)
    forward, backward = _hypo_split(sym, m, k)
    return forward - backward


def _form_at_monomial(sym: TwoTermSymbol, m: int, k: int) -> Fraction:
    value = hyponormality_form(sym.symbol(), AnalyticPoly.monomial(k), m)
    if not value.is_real():
        raise AssertionError("hyponormality form must be real")
    return value.coeff.re


def thm21_inequality(sym: TwoTermSymbol, m: int, k: int, variant: str = "printed") -> CriterionReport:
    """Evaluate the case-appropriate necessary inequality at ``z^k``.

    For H1 and H2 the inequality is ``|a|^2 A >= |b|^2 B`` with both sides
    read off the master bracket.  H3 uses the coefficient-free printed
    reduction unless ``variant="derived"``, which compares the two norms
    directly.  Out-of-scope cases always use the norm comparison.
    """
    _check_thm21(sym, k)
    case = classify_hypo(sym)
    p, n, s, t = sym.p, sym.n, sym.s, sym.t
    a2, b2 = sym.a.abs_sq(), sym.b.abs_sq()
    if case is HypoCase.H1:
        lhs = a2 * (Fraction(_f(p + k + m) ** 2, _f(k + m + 1)) - Fraction(_f(p + k + m - 1) ** 2, _f(k + m - 1)))
        rhs = b2 * (_norm_ratio(t + k + m, t + k + m - s) - _norm_ratio(s + k + m, s + k + m - t))
        used = "printed"
    elif case is HypoCase.H2:
        lhs = a2 * (_norm_ratio(p + k + m, p + k + m - n) - _norm_ratio(n + k + m, n + k + m - p))
        rhs = b2 * (_norm_ratio(t + k + m, t + k + m - s) - _norm_ratio(s + k + m, s + k + m - t))
        used = "printed"
    elif case is HypoCase.H3 and variant == "printed":
        lhs = Fraction(_f(p + k + m - 1) ** 2 * ((p + k + m) ** 2 - 1))
        rhs = Fraction(_f(s + k + m) ** 2 * ((s + k + m + 1) ** 2 - (k + m + 1) * (k + m)))
        used = "printed"
    else:
        lhs, rhs = _hypo_split(sym, m, k)
        used = "derived"
    return CriterionReport(
        theorem="thm21",
        case=case.value,
        k=k,
        lhs=lhs,
        rhs=rhs,
        holds=lhs >= rhs,
        cross_check=_form_at_monomial(sym, m, k),
        variant=used,
    )


def remark24_check(sym: TwoTermSymbol, m: int) -> CriterionReport:
    """Coefficient inequality for ``p - n = 1 = t - s`` probed at ``k = 1``."""
    if sym.p - sym.n != 1 or sym.t - sym.s != 1:
        raise HypothesisError(
            f"hypothesis p - n = 1 = t - s violated (p={sym.p}, n={sym.n}, s={sym.s}, t={sym.t})"
        )
    base = (1 + m) * (2 + m)
    lhs = Fraction(sym.a.abs_sq() * _f(sym.p + m) ** 2 * ((1 + sym.p + m) ** 2 - base))
    rhs = Fraction(sym.b.abs_sq() * _f(sym.t + m) ** 2 * ((1 + sym.t + m) ** 2 - base))
    return CriterionReport("remark24", "p-n=1=t-s", 1, lhs, rhs, lhs >= rhs)


@dataclass(frozen=True)
class ZnCResult:
    full: PiScalar
    reduced: PiScalar

    @property
    def full_holds(self) -> bool:
        return self.full >= 0

    @property
    def reduced_holds(self) -> bool:
        return self.reduced >= 0

    def to_dict(self) -> dict:
        return {
            "theorem": "zn-c",
            "full": str(self.full),
            "full_holds": self.full_holds,
            "reduced": str(self.reduced),
            "reduced_holds": self.reduced_holds,
        }


def zn_c_form(n: int, s: int, C, m: int, coeffs: AnalyticPoly) -> ZnCResult:
    """Necessary form for ``phi = z^n + C |z|^{2s}`` evaluated at ``f``.

    ``full`` includes the low-degree sum over ``k < n``; ``reduced`` drops it.
    Coefficients past the top degree of ``f`` count as zero.
    """
    if n < 1 or s < 1:
        raise HypothesisError(f"need n >= 1 and s >= 1 (got n={n}, s={s})")
    C = as_gaussian(C)
    top = int(coeffs.degree()) if coeffs else -1
    low = Fraction(0)
    diag = Fraction(0)
    cross = Fraction(0)
    for k in range(top + 1):
        ak = coeffs.coeff(k)
        if k < n:
            low += ak.abs_sq() * _f(k + n + m)
        else:
            diag += ak.abs_sq() * (_f(k + n + m) - Fraction(_f(k + m) ** 2, _f(k + m - n)))
        akn = coeffs.coeff(k + n)
        if ak and akn:
            weight = Fraction(_f(k + m + n + s) * _f(k + m) - _f(k + m + n) * _f(k + m + s), _f(k + m))
            cross += (C * akn * ak.conj()).re * weight
    reduced = diag + 2 * cross
    return ZnCResult(PiScalar(low + reduced), PiScalar(reduced))


def remark27_bound(m: int, s: int) -> Fraction:
    """Upper bound on ``|C|^2`` from the non-positive discriminant."""
    if s < 1:
        raise HypothesisError(f"need s >= 1 (got s={s})")
    return Fraction(_f(1 + m) ** 2, s * s * _f(m + s) ** 2)


@dataclass(frozen=True)
class QuasiReport:
    case: QuasiCase
    k: int
    outcome: str  # "auto-quasinormal" | "identity-required" | "degenerate"
    lhs: Fraction | None = None
    rhs: Fraction | None = None
    holds: bool | None = None
    cross_check: GaussianRational | None = None  # pi-free defect at (z^k, z^k)
    variant: str = "derived"

    def to_dict(self) -> dict:
        return {
            "theorem": "thm31",
            "case": self.case.value,
            "k": self.k,
            "outcome": self.outcome,
            "lhs": _fmt(self.lhs),
            "rhs": _fmt(self.rhs),
            "holds": self.holds,
            "cross_check": _fmt(self.cross_check),
        }


def thm31_classify(sym: TwoTermSymbol, m: int, k: int, as_stated: bool = False) -> QuasiReport:
    """Classify the quasinormality probe at ``z^k`` and evaluate its identity.

    In case Qb the diagonal defect equals ``a |b|^2 (rhs - lhs) pi``; in
    case Qc it equals ``|a|^2 b (rhs - lhs) pi``.  ``as_stated`` switches the
    Qb identity to the variant with ``(t+k+m+s)!`` and ``(s+k+m-p-t)!``.
    """
    p, n, s, t = sym.p, sym.n, sym.s, sym.t
    if k <= max(2 * p, 2 * t):
        raise HypothesisError(f"probe condition k > 2p, 2t violated (k={k}, p={p}, t={t})")
    case = classify_quasi(sym)
    defect = quasinormality_defect(
        sym.symbol(), AnalyticPoly.monomial(k), AnalyticPoly.monomial(k), m
    ).coeff
    if case in (QuasiCase.QA, QuasiCase.QD):
        return QuasiReport(case, k, "auto-quasinormal", cross_check=defect)
    if case is QuasiCase.QB:
        if as_stated:
            lhs = Fraction(_f(p + k + m) * _f(t + k + m) ** 2, _f(k + m) * _f(t + k + m + s))
            rhs = Fraction(_f(s + k + m) ** 2 * _f(s + k + m - p - t), _f(s + k + m - t) ** 2)
        else:
            lhs = Fraction(_f(p + k + m) * _f(t + k + m) ** 2, _f(k + m) * _f(t + k + m - s))
            rhs = Fraction(_f(s + k + m) ** 2 * _f(s + k + m + p - t), _f(s + k + m - t) ** 2)
        degenerate = not sym.a or not sym.b
    else:
        lhs = Fraction(_f(s + k + m) * _f(k + m + n) ** 2, _f(k + m) * _f(k + n + m - p))
        rhs = Fraction(_f(p + k + m) ** 2 * _f(p + k + m + s - n), _f(p + k + m - n) ** 2)
        degenerate = not sym.a or not sym.b
    return QuasiReport(
        case,
        k,
        "degenerate" if degenerate else "identity-required",
        lhs,
        rhs,
        lhs == rhs,
        defect,
        "as-stated" if as_stated and case is QuasiCase.QB else "derived",
    )


def quasi_coefficient(sym: TwoTermSymbol) -> GaussianRational:
    """Factor multiplying ``(rhs - lhs)`` in the diagonal defect (Qb/Qc)."""
    case = classify_quasi(sym)
    if case is QuasiCase.QB:
        return sym.a * sym.b.abs_sq()
    if case is QuasiCase.QC:
        return sym.b * sym.a.abs_sq()
    raise ValueError(f"no identity coefficient for case {case.value}")


@dataclass
class SweepResult:
    reports: list = field(default_factory=list)

    @property
    def first_failing_k(self) -> int | None:
        for r in self.reports:
            if r.holds is False:
                return r.k
        return None

    @property
    def all_hold(self) -> bool:
        return self.first_failing_k is None

    def to_dict(self) -> dict:
        return {
            "reports": [r.to_dict() for r in self.reports],
            "first_failing_k": self.first_failing_k,
        }


def _thread_cap() -> int:
    try:
        return max(1, int(os.environ.get("FOCKCALC_THREADS", "1")))
    except ValueError:
        return 1


def necessary_sweep(
    sym: TwoTermSymbol,
    m: int,
    k_range: Iterable[int],
    theorem: str = "thm21",
    **options,
) -> SweepResult:
    """Run one per-``k`` check over ``k_range``; order of reports follows the range."""
    ks = list(k_range)
    if not ks:
        raise ValueError("empty k range")
    checks = {"thm21": thm21_inequality, "thm31": thm31_classify}
    if theorem not in checks:
        raise ValueError(f"unknown theorem {theorem!r}")
    check = checks[theorem]
    threads = _thread_cap()
    if threads > 1 and len(ks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            reports = list(pool.map(lambda k: check(sym, m, k, **options), ks))
    else:
        reports = [check(sym, m, k, **options) for k in ks]
    return SweepResult(reports)

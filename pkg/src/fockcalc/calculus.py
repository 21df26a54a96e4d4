"""Closed-form calculus on polynomials of the Fock-Sobolev space F^{2,m}.

Conventions:

* ``<z^s, z^t> = pi (s+m)!`` when ``s == t`` and 0 otherwise, i.e. the
  weight is ``|z|^{2m} exp(-|z|^2) dA`` with no normalising prefactor.
* ``P(zbar^t z^s) = (s+m)!/(s+m-t)! z^(s-t)`` for ``s >= t`` and 0 otherwise.
* The adjoint of ``T_phi`` on polynomials is ``T_{conj(phi)}``.

All values are exact; inner products come back as :class:`PiScalar`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .scalar import GaussianRational, PiScalar, as_gaussian, factorial, falling_ratio

__all__ = [
    "FockParams",
    "AnalyticPoly",
    "MixedTerm",
    "MixedSymbol",
    "inner_product",
    "project_mixed",
    "adjoint_symbol",
    "toeplitz_apply",
    "toeplitz_adjoint_apply",
    "hyponormality_form",
    "quasinormality_defect",
    "sum_decomposition",
]

_ZERO = GaussianRational(0)


@dataclass(frozen=True)
class FockParams:
    """Sobolev order ``m``; ``m = 0`` is the classical Fock space."""

    m: int = 1

    def __post_init__(self):
        if not isinstance(self.m, int) or self.m < 0:
            raise ValueError(f"Sobolev order must be a nonnegative integer, got {self.m!r}")


def _order(m) -> int:
    if isinstance(m, FockParams):
        return m.m
    if not isinstance(m, int) or isinstance(m, bool) or m < 0:
        raise ValueError(f"Sobolev order must be a nonnegative integer, got {m!r}")
    return m


class AnalyticPoly:
    """Polynomial in ``z`` with Gaussian rational coefficients.

    Stored as a degree -> coefficient map without zero entries.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[int, object] | None = None):
        clean: dict[int, GaussianRational] = {}
        for k, c in (terms or {}).items():
            if not isinstance(k, int) or k < 0:
                raise ValueError(f"degree must be a nonnegative integer, got {k!r}")
            c = as_gaussian(c)
            if c:
                clean[k] = c
        self._terms = dict(sorted(clean.items()))

    @classmethod
    def monomial(cls, k: int, coeff=1) -> "AnalyticPoly":
        return cls({k: coeff})

    @classmethod
    def from_coeffs(cls, coeffs: Iterable) -> "AnalyticPoly":
        """Build from ``[a_0, a_1, ...]``."""
        return cls(dict(enumerate(coeffs)))

    @classmethod
    def _raw(cls, terms: dict[int, GaussianRational]) -> "AnalyticPoly":
        out = cls.__new__(cls)
        out._terms = dict(sorted((k, c) for k, c in terms.items() if c))
        return out

    @property
    def terms(self) -> dict[int, GaussianRational]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def coeff(self, k: int) -> GaussianRational:
        return self._terms.get(k, _ZERO)

    def degree(self) -> float | int:
        """Largest degree, or ``-inf`` for the zero polynomial."""
        return max(self._terms) if self._terms else float("-inf")

    def coeff_list(self, length: int | None = None) -> list[GaussianRational]:
        if length is None:
            length = (max(self._terms) + 1) if self._terms else 0
        return [self.coeff(k) for k in range(length)]

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def __eq__(self, other):
        if isinstance(other, AnalyticPoly):
            return self._terms == other._terms
        if isinstance(other, int) and other == 0:
            return not self._terms
        return NotImplemented

    def __hash__(self):
        return hash(tuple(self._terms.items()))

    def __add__(self, other):
        if not isinstance(other, AnalyticPoly):
            return NotImplemented
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, _ZERO) + c
        return AnalyticPoly._raw(out)

    def __neg__(self):
        return AnalyticPoly._raw({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        if not isinstance(other, AnalyticPoly):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, AnalyticPoly):
            out: dict[int, GaussianRational] = {}
            for j, a in self._terms.items():
                for k, b in other._terms.items():
                    out[j + k] = out.get(j + k, _ZERO) + a * b
            return AnalyticPoly._raw(out)
        c = as_gaussian(other)
        return AnalyticPoly._raw({k: v * c for k, v in self._terms.items()})

    __rmul__ = __mul__

    def __call__(self, z: complex) -> complex:
        return sum(complex(c) * z**k for k, c in self._terms.items())

    def __str__(self):
        from .dsl import format_poly

        return format_poly(self)

    def __repr__(self):
        return f"AnalyticPoly({str(self)!r})"


@dataclass(frozen=True)
class MixedTerm:
    """``coeff * z^p * zbar^n``."""

    coeff: GaussianRational
    p: int
    n: int

    def __post_init__(self):
        object.__setattr__(self, "coeff", as_gaussian(self.coeff))
        if self.p < 0 or self.n < 0:
            raise ValueError(f"exponents must be nonnegative, got p={self.p}, n={self.n}")
        if not self.coeff:
            raise ValueError("MixedTerm coefficient must be nonzero")


class MixedSymbol:
    """Finite sum of mixed monomials ``c z^p zbar^n`` keyed by ``(p, n)``."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[tuple[int, int], object] | Iterable[MixedTerm] | None = None):
        acc: dict[tuple[int, int], GaussianRational] = {}
        if terms is None:
            items = []
        elif isinstance(terms, Mapping):
            items = [(p, n, c) for (p, n), c in terms.items()]
        else:
            items = [(t.p, t.n, t.coeff) for t in terms]
        for p, n, c in items:
            if p < 0 or n < 0:
                raise ValueError(f"exponents must be nonnegative, got ({p}, {n})")
            acc[(p, n)] = acc.get((p, n), _ZERO) + as_gaussian(c)
        self._terms = dict(sorted((k, c) for k, c in acc.items() if c))

    @classmethod
    def monomial(cls, p: int, n: int = 0, coeff=1) -> "MixedSymbol":
        return cls({(p, n): coeff})

    @classmethod
    def constant(cls, c) -> "MixedSymbol":
        return cls({(0, 0): c})

    @property
    def terms(self) -> list[MixedTerm]:
        return [MixedTerm(c, p, n) for (p, n), c in self._terms.items()]

    def items(self):
        return self._terms.items()

    def coeff(self, p: int, n: int) -> GaussianRational:
        return self._terms.get((p, n), _ZERO)

    def is_analytic(self) -> bool:
        return all(n == 0 for _, n in self._terms)

    def max_shift(self) -> int:
        """Largest ``p - n`` (0 for the zero symbol)."""
        return max((p - n for p, n in self._terms), default=0)

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def __eq__(self, other):
        if isinstance(other, MixedSymbol):
            return self._terms == other._terms
        return NotImplemented

    def __hash__(self):
        return hash(tuple(self._terms.items()))

    def __add__(self, other):
        if not isinstance(other, MixedSymbol):
            return NotImplemented
        merged = dict(self._terms)
        for k, c in other._terms.items():
            merged[k] = merged.get(k, _ZERO) + c
        return MixedSymbol(merged)

    def __neg__(self):
        return MixedSymbol({k: -c for k, c in self._terms.items()})

    def __mul__(self, other):
        c = as_gaussian(other)
        return MixedSymbol({k: v * c for k, v in self._terms.items()})

    __rmul__ = __mul__

    def __str__(self):
        from .dsl import format_symbol

        return format_symbol(self)

    def __repr__(self):
        return f"MixedSymbol({str(self)!r})"


def _norm_sq(k: int, m: int) -> int:
    return factorial(k + m)


def inner_product(f: AnalyticPoly, g: AnalyticPoly, m=1) -> PiScalar:
    """``<f, g> = sum_k f_k conj(g_k) pi (k+m)!``."""
    m = _order(m)
    total = _ZERO
    for k, c in f.items():
        d = g.coeff(k)
        if d:
            total = total + c * d.conj() * _norm_sq(k, m)
    return PiScalar(total)


def _projection_factor(t_bar: int, s: int, m: int) -> int:
    # coefficient of z^(s - t_bar) in P(zbar^t_bar z^s); 0 below the diagonal
    if s < t_bar:
        return 0
    return falling_ratio(s + m, t_bar)


def project_mixed(t_bar: int, s: int, m=1) -> AnalyticPoly:
    """Orthogonal projection of ``zbar^t_bar z^s`` onto the analytic polynomials."""
    m = _order(m)
    if t_bar < 0 or s < 0:
        raise ValueError("exponents must be nonnegative")
    factor = _projection_factor(t_bar, s, m)
    if not factor:
        return AnalyticPoly()
    return AnalyticPoly._raw({s - t_bar: GaussianRational(factor)})


def adjoint_symbol(phi: MixedSymbol) -> MixedSymbol:
    return MixedSymbol({(n, p): c.conj() for (p, n), c in phi.items()})


def toeplitz_apply(phi: MixedSymbol, f: AnalyticPoly, m=1) -> AnalyticPoly:
    m = _order(m)
    out: dict[int, GaussianRational] = {}
    for (p, n), c in phi.items():
        for k, a in f.items():
            factor = _projection_factor(n, p + k, m)
            if factor:
                d = p + k - n
                out[d] = out.get(d, _ZERO) + c * a * factor
    return AnalyticPoly._raw(out)


def toeplitz_adjoint_apply(phi: MixedSymbol, f: AnalyticPoly, m=1) -> AnalyticPoly:
    return toeplitz_apply(adjoint_symbol(phi), f, m)


def hyponormality_form(phi: MixedSymbol, f: AnalyticPoly, m=1) -> PiScalar:
    """``||T f||^2 - ||T* f||^2``; real for every ``f``."""
    tf = toeplitz_apply(phi, f, m)
    tsf = toeplitz_adjoint_apply(phi, f, m)
    return inner_product(tf, tf, m) - inner_product(tsf, tsf, m)


def quasinormality_defect(phi: MixedSymbol, f: AnalyticPoly, g: AnalyticPoly, m=1) -> PiScalar:
    """``<(T* T^2 - T T* T) f, g>``, built from iterated applications.

    The defect operator is not self-adjoint, so the value may be complex
    even when ``f == g``.
    """
    conj_phi = adjoint_symbol(phi)
    tf = toeplitz_apply(phi, f, m)
    lhs = toeplitz_apply(conj_phi, toeplitz_apply(phi, tf, m), m)
    rhs = toeplitz_apply(phi, toeplitz_apply(conj_phi, tf, m), m)
    return inner_product(lhs - rhs, g, m)


def sum_decomposition(t_sym: MixedSymbol, s_sym: MixedSymbol, f: AnalyticPoly, m=1) -> PiScalar:
    """Hyponormality form of ``T + S`` expanded into self and cross terms."""
    tu = toeplitz_apply(t_sym, f, m)
    su = toeplitz_apply(s_sym, f, m)
    tsu = toeplitz_adjoint_apply(t_sym, f, m)
    ssu = toeplitz_adjoint_apply(s_sym, f, m)
    self_t = inner_product(tu, tu, m) - inner_product(tsu, tsu, m)
    self_s = inner_product(su, su, m) - inner_product(ssu, ssu, m)
    cross = inner_product(tu, su, m) - inner_product(tsu, ssu, m)
    return self_t + PiScalar(2 * cross.coeff.re) + self_s

"""Exact form matrices on S_N = span{1, z, ..., z^N} and an exact PSD test.

Toeplitz operators with mixed-monomial symbols map monomials to monomials,
so the restriction of each quadratic form to S_N is computed without any
truncation error.  Positivity on every S_N is positivity on all of S.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

from .calculus import (
    AnalyticPoly,
    MixedSymbol,
    adjoint_symbol,
    inner_product,
    toeplitz_apply,
)
from .scalar import GaussianRational, PiScalar

__all__ = [
    "FormMatrix",
    "HermForm",
    "PSDVerdict",
    "QuasiZeroResult",
    "commutator_gram",
    "quasi_defect_matrix",
    "psd_test",
    "quasi_zero_test",
]


class FormMatrix:
    """Square matrix of PiScalar entries indexed by monomial degree.

    ``entries[j][k]`` is the form evaluated at the pair ``(z^k, z^j)`` so that
    the form at ``f = sum c_k z^k`` is ``sum conj(c_j) entries[j][k] c_k``.
    """

    def __init__(self, entries: Sequence[Sequence[PiScalar]]):
        rows = [list(r) for r in entries]
        if any(len(r) != len(rows) for r in rows):
            raise ValueError("form matrix must be square")
        self.entries = rows

    @property
    def dim(self) -> int:
        return len(self.entries)

    def __getitem__(self, jk):
        j, k = jk
        return self.entries[j][k]

    def __eq__(self, other):
        if isinstance(other, FormMatrix):
            return self.entries == other.entries
        return NotImplemented

    def coefficients(self) -> list[list[GaussianRational]]:
        """Entries with the common factor pi removed."""
        return [[e.coeff for e in row] for row in self.entries]

    def is_zero(self) -> bool:
        return not any(e for row in self.entries for e in row)

    def is_hermitian(self) -> bool:
        n = self.dim
        return all(
            self.entries[j][k] == self.entries[k][j].conj()
            for j in range(n)
            for k in range(j, n)
        )

    def evaluate(self, f: AnalyticPoly | Sequence) -> PiScalar:
        if isinstance(f, AnalyticPoly):
            if f and f.degree() >= self.dim:
                raise ValueError(f"polynomial degree {f.degree()} exceeds N = {self.dim - 1}")
            c = f.coeff_list(self.dim)
        else:
            c = [GaussianRational(0) + x for x in f]
        total = GaussianRational(0)
        for j, cj in enumerate(c):
            if not cj:
                continue
            row = self.entries[j]
            cjb = cj.conj()
            for k, ck in enumerate(c):
                if ck and row[k]:
                    total = total + cjb * row[k].coeff * ck
        return PiScalar(total)

    def to_dict(self) -> dict:
        return {
            "unit": "pi",
            "dim": self.dim,
            "entries": [[str(e.coeff) for e in row] for row in self.entries],
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, data: dict):
        if data.get("unit") != "pi":
            raise ValueError("matrix export must carry unit 'pi'")
        return cls([[PiScalar(GaussianRational.parse(s)) for s in row] for row in data["entries"]])

    def __str__(self):
        cells = [[str(e) for e in row] for row in self.entries]
        width = max((len(c) for row in cells for c in row), default=1)
        return "\n".join("  ".join(c.rjust(width) for c in row) for row in cells)


class HermForm(FormMatrix):
    """FormMatrix that is checked to be Hermitian on construction."""

    def __init__(self, entries):
        super().__init__(entries)
        if not self.is_hermitian():
            raise ValueError("matrix is not Hermitian")


@dataclass(frozen=True)
class PSDVerdict:
    psd: bool
    witness: AnalyticPoly | None = None
    witness_value: PiScalar | None = None

    @property
    def status(self) -> str:
        return "PSD" if self.psd else "NotPSD"

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "witness": None if self.witness is None else str(self.witness),
            "witness_value": None if self.witness_value is None else str(self.witness_value),
        }


def _monomial_images(phi: MixedSymbol, N: int, m: int):
    conj_phi = adjoint_symbol(phi)
    forward = [toeplitz_apply(phi, AnalyticPoly.monomial(k), m) for k in range(N + 1)]
    backward = [toeplitz_apply(conj_phi, AnalyticPoly.monomial(k), m) for k in range(N + 1)]
    return forward, backward


def commutator_gram(phi: MixedSymbol, m: int, N: int) -> HermForm:
    """``G[j][k] = <T z^k, T z^j> - <T* z^k, T* z^j>`` for ``j, k <= N``."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    fwd, bwd = _monomial_images(phi, N, m)
    rows = [
        [inner_product(fwd[k], fwd[j], m) - inner_product(bwd[k], bwd[j], m) for k in range(N + 1)]
        for j in range(N + 1)
    ]
    return HermForm(rows)


def quasi_defect_matrix(phi: MixedSymbol, m: int, N: int) -> FormMatrix:
    """``Q[j][k] = <(T* T^2 - T T* T) z^k, z^j>``; not Hermitian in general."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    conj_phi = adjoint_symbol(phi)
    rows = [[PiScalar(0)] * (N + 1) for _ in range(N + 1)]
    for k in range(N + 1):
        tf = toeplitz_apply(phi, AnalyticPoly.monomial(k), m)
        defect = toeplitz_apply(conj_phi, toeplitz_apply(phi, tf, m), m) - toeplitz_apply(
            phi, toeplitz_apply(conj_phi, tf, m), m
        )
        for j in range(N + 1):
            rows[j][k] = inner_product(defect, AnalyticPoly.monomial(j), m)
    return FormMatrix(rows)


def _witness(form: FormMatrix, vector: list[GaussianRational]) -> PSDVerdict:
    lead = next(c for c in vector if c)
    normalized = [c / lead for c in vector]
    poly = AnalyticPoly.from_coeffs(normalized)
    value = form.evaluate(poly)
    if not value < 0:
        raise AssertionError(f"witness {poly} does not certify negativity ({value})")
    return PSDVerdict(False, poly, value)


def psd_test(form: FormMatrix) -> PSDVerdict:
    """Decide ``c* G c >= 0`` for all ``c`` by symmetric pivoted elimination.

    Works on the pi-free coefficients.  At each step a negative diagonal
    entry, or an all-zero diagonal with a nonzero off-diagonal entry, yields
    a witness; otherwise the smallest-index positive pivot is eliminated.
    Witnesses are scaled so that their lowest-degree coefficient is 1.
    """
    if not form.is_hermitian():
        raise ValueError("psd_test needs a Hermitian matrix")
    n = form.dim
    a = form.coefficients()
    # basis[i] expresses the current i-th direction in original coordinates
    basis = [[GaussianRational(int(r == c)) for r in range(n)] for c in range(n)]
    remaining = list(range(n))
    zero = GaussianRational(0)

    while remaining:
        diag = {i: a[i][i].re for i in remaining}
        negative = [i for i in remaining if diag[i] < 0]
        if negative:
            return _witness(form, basis[negative[0]])
        positive = [i for i in remaining if diag[i] > 0]
        if not positive:
            for idx, i in enumerate(remaining):
                for j in remaining[idx + 1:]:
                    if a[i][j]:
                        lam = -a[i][j].conj()
                        vec = [bi + lam * bj for bi, bj in zip(basis[i], basis[j])]
                        return _witness(form, vec)
            return PSDVerdict(True)
        r = positive[0]
        pivot = a[r][r]
        remaining.remove(r)
        for j in remaining:
            alpha = a[r][j] / pivot
            if not alpha:
                continue
            basis[j] = [bj - alpha * br for bj, br in zip(basis[j], basis[r])]
        for i in remaining:
            a_ir = a[i][r]
            if not a_ir:
                continue
            for j in remaining:
                if a[r][j]:
                    a[i][j] = a[i][j] - a_ir * a[r][j] / pivot
        for j in remaining:
            a[r][j] = a[j][r] = zero
    return PSDVerdict(True)


@dataclass(frozen=True)
class QuasiZeroResult:
    zero: bool
    j: int | None = None
    k: int | None = None
    value: PiScalar | None = None

    def to_dict(self) -> dict:
        return {
            "status": "Zero" if self.zero else "NonZero",
            "j": self.j,
            "k": self.k,
            "value": None if self.value is None else str(self.value),
        }


def quasi_zero_test(q: FormMatrix) -> QuasiZeroResult:
    """Report the first nonzero entry of ``q`` in row-major order."""
    for j, row in enumerate(q.entries):
        for k, v in enumerate(row):
            if v:
                return QuasiZeroResult(False, j, k, v)
    return QuasiZeroResult(True)

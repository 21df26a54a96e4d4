"""Regression suite of worked examples with their published values.

Each check recomputes one quoted quantity and compares it verbatim with the
published value.  ``core`` marks the quantities listed in the acceptance
table; the rest are intermediate polynomials also quoted alongside them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .calculus import (
    AnalyticPoly,
    MixedSymbol,
    hyponormality_form,
    inner_product,
    quasinormality_defect,
    toeplitz_adjoint_apply,
    toeplitz_apply,
)
from .dsl import parse_poly, parse_symbol
from .scalar import PiScalar

M = 1


@dataclass(frozen=True)
class Check:
    example: str
    label: str
    expected: str
    compute: Callable[[MixedSymbol, AnalyticPoly], object]
    core: bool = True


@dataclass(frozen=True)
class CheckResult:
    example: str
    label: str
    expected: str
    computed: str
    ok: bool
    core: bool

    def to_dict(self) -> dict:
        return {
            "example": self.example,
            "label": self.label,
            "expected": self.expected,
            "computed": self.computed,
            "pass": self.ok,
            "core": self.core,
        }


def _t(phi, f):
    return toeplitz_apply(phi, f, M)


def _ts(phi, f):
    return toeplitz_adjoint_apply(phi, f, M)


def _tt(phi, f):
    return _t(phi, _t(phi, f))


def _tst(phi, f):
    return _ts(phi, _t(phi, f))


def _norm_t(phi, f):
    tf = _t(phi, f)
    return inner_product(tf, tf, M)


def _norm_ts(phi, f):
    tsf = _ts(phi, f)
    return inner_product(tsf, tsf, M)


def _form(phi, f):
    return hyponormality_form(phi, f, M)


def _defect(phi, f):
    return quasinormality_defect(phi, f, f, M)


def _tst_vs_ts(phi, f):
    return inner_product(_tst(phi, f), _ts(phi, f), M)


def _tt_vs_t(phi, f):
    return inner_product(_tt(phi, f), _t(phi, f), M)


def _hypo_block(name, tf, norm_t, norm_ts, form, tsf, tsf_core):
    checks = [Check(name, "T f", tf, _t), Check(name, "T* f", tsf, _ts, core=tsf_core)]
    checks += [
        Check(name, "<T*T f, f>", norm_t, _norm_t),
        Check(name, "<TT* f, f>", norm_ts, _norm_ts),
        Check(name, "<[T*,T] f, f>", form, _form),
    ]
    return checks


EXAMPLES: list[tuple[str, str, str, list[Check]]] = [
    (
        "hypo-1",
        "z*zb^3 + z^2*zb",
        "z - z^4",
        _hypo_block("hypo-1", "-116*z^2 - 7*z^5", "116016*pi", "337596*pi", "-221580*pi", "6 - 25*z^3 - 8*z^6", True),
    ),
    (
        "hypo-2",
        "4*z^3*zb + 6*z*zb^4",
        "z - z^4",
        _hypo_block(
            "hypo-2", "-2160*z + 20*z^3 - 32*z^6", "14501760*pi", "119111040*pi", "-104609280*pi",
            "-480*z^2 + 36*z^4 - 54*z^7", False,
        ),
    ),
    (
        "hypo-3",
        "4*z^3*zb + 6*z^2*zb^3",
        "z - z^4",
        _hypo_block(
            "hypo-3", "144 - 1240*z^3 - 32*z^6", "43293696*pi", "82753920*pi", "-39460224*pi",
            "-360*z^2 - 336*z^5", False,
        ),
    ),
    (
        "quasi-1",
        "4*zb^3*z^2 + 6*z^3*zb",
        "z - z^4",
        [
            Check("quasi-1", "T^2 f", "3840*z + 417600*z^2 + 576*z^4 - 60228*z^5 - 2880*z^8", _tt),
            Check("quasi-1", "T*T f", "2304 + 303300*z + 1920*z^3 + 49392*z^4 - 17280*z^7", _tst),
            Check("quasi-1", "<T*T f, T* f>", "0", _tst_vs_ts),
            Check("quasi-1", "<T^2 f, T f>", "5529600*pi", _tt_vs_t),
            Check("quasi-1", "quasinormality defect", "5529600*pi", _defect),
        ],
    ),
    (
        "quasi-2",
        "2*z^3 + 2*z^3*zb + zb^3 + 3*z*zb^3",
        "z",
        [
            Check("quasi-2", "T z", "2*z^4 + 10*z^3", _t),
            Check("quasi-2", "T* z", "z^4 + 15*z^3", _ts),
            Check("quasi-2", "T^2 z", "4*z^7 + 52*z^6 + 140*z^5 + 720*z^2 + 1920*z + 240", _tt),
            Check("quasi-2", "T*T z", "2*z^7 + 68*z^6 + 210*z^5 + 360*z^2 + 1440*z + 480", _tst, core=False),
            Check("quasi-2", "<T*T^2 z, z>", "0", _tt_vs_t, core=False),
            Check("quasi-2", "<TT*T z, z>", "0", _tst_vs_ts, core=False),
            Check("quasi-2", "<T*T z, z>", "2880*pi", _norm_t),
            Check("quasi-2", "<TT* z, z>", "5520*pi", _norm_ts),
            Check("quasi-2", "<[T*,T] z, z>", "-2640*pi", _form),
            Check("quasi-2", "quasinormality defect", "0", _defect),
        ],
    ),
]


def _matches(value, expected: str) -> bool:
    if isinstance(value, AnalyticPoly):
        return value == parse_poly(expected)
    return value == PiScalar.parse(expected)


def run_examples() -> list[CheckResult]:
    results = []
    for _, symbol_text, poly_text, checks in EXAMPLES:
        phi = parse_symbol(symbol_text)
        f = parse_poly(poly_text)
        for check in checks:
            value = check.compute(phi, f)
            results.append(
                CheckResult(check.example, check.label, check.expected, str(value), _matches(value, check.expected), check.core)
            )
    return results


def format_table(results: list[CheckResult]) -> str:
    headers = ("example", "quantity", "expected", "computed", "result")
    rows = [
        (r.example, r.label + ("" if r.core else " (intermediate)"), r.expected, r.computed, "PASS" if r.ok else "FAIL")
        for r in results
    ]
    widths = [max(len(h), *(len(row[i]) for row in rows)) for i, h in enumerate(headers)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(headers, widths))]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(c.ljust(w) for c, w in zip(row, widths)) for row in rows]
    by_example: dict[str, list[CheckResult]] = {}
    for r in results:
        by_example.setdefault(r.example, []).append(r)
    lines.append("")
    for ex, rs in by_example.items():
        core_bad = sum(not r.ok for r in rs if r.core)
        other_bad = sum(not r.ok for r in rs if not r.core)
        line = f"Example {ex}: {'FAIL' if core_bad or other_bad else 'PASS'}"
        if core_bad or other_bad:
            line += f" ({core_bad} headline and {other_bad} intermediate mismatches)"
        lines.append(line)
    return "\n".join(lines)

"""Isotropy classes of shear-invariant ODEs and their normal forms.

The 4-dimensional classes are

* ``FAMILY_A(k)``:  ``f0 = C1 y^k (1 - c y)^(-k-3)``, ``f1 = 0``;
* ``FAMILY_B(l, C)``: ``f1 = C2 y^l (1 - c y)^(-l-3)`` and
  ``f0 = C1 y^(2l+2) (1 - c y)^(-2l-5)`` (possibly zero), ``C = C1 / C2**2``.

``MULTISHEAR`` is ``f0 = K (1 - c y)^(-3)``, ``f1 = 0``, which is the
quartic after normalization.  Under ``(x, y) = (c1 X, c2 Y) / (1 - c' Y)``
the parameter ``c`` becomes ``c' + c2 c`` and the leading coefficients pick
up ``c1**2 c2**(k+2)`` (for ``f0``) and ``c1 c2**(l+2)`` (for ``f1``).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Optional, Tuple

from .errors import InsufficientTruncation, NotNormalizable
from .gauss import as_scalar, exact_sqrt
from .ode import PointMap, make_shear_ode, pushforward
from .poly import DEFAULT_TRUNCATION, TruncPoly, const, series_invert, var

__all__ = [
    "Label",
    "ClassificationReport",
    "classify",
    "closed_form",
    "recursion_witness",
    "normalize",
    "normal_form",
]


class Label(str, enum.Enum):
    QUADRIC = "QUADRIC"
    MULTISHEAR = "MULTISHEAR"
    FAMILY_A = "FAMILY_A"
    FAMILY_B = "FAMILY_B"
    GENERIC = "GENERIC"


ISOTROPY_CLAIM = {
    Label.QUADRIC: 10,
    Label.MULTISHEAR: 4,
    Label.FAMILY_A: 4,
    Label.FAMILY_B: 4,
    Label.GENERIC: "<=3",
}


@dataclass(frozen=True)
class ClassificationReport:
    label: Label
    certified_order: int
    k: Optional[int] = None
    ell: Optional[int] = None
    C: Optional[object] = None
    c: Optional[object] = None
    constants: Dict[str, object] = field(default_factory=dict)
    normalizer: Optional[PointMap] = None
    evidence: Dict[str, object] = field(default_factory=dict)

    @property
    def isotropy_dim_claim(self):
        return ISOTROPY_CLAIM[self.label]

    def to_dict(self) -> dict:
        from .gauss import scalar_str

        def s(v):
            return None if v is None else scalar_str(v)

        out = {
            "label": self.label.value,
            "k": self.k,
            "ell": self.ell,
            "C": s(self.C),
            "c": s(self.c),
            "constants": {k: s(v) for k, v in sorted(self.constants.items())},
            "isotropy_dim_claim": self.isotropy_dim_claim,
            "certified_order": self.certified_order,
            "normalizer": None,
            "evidence": dict(self.evidence),
        }
        if self.normalizer is not None:
            out["normalizer"] = {
                "kind": self.normalizer.kind,
                "params": [scalar_str(v) for v in self.normalizer.params],
            }
        return out


def closed_form(C1, c, k: int, N: int) -> TruncPoly:
    """``C1 y^k (1 - c y)^(-k-3)`` modulo ``y**(N+1)``."""
    if not C1:
        return TruncPoly({}, (), "y", N)
    base = series_invert(1 - var("y", N) * c, N) ** (k + 3)
    return (base * var("y") ** k).scale(C1).with_trunc(N)


def _effective(f: TruncPoly, N: int) -> int:
    return N if f.trunc is None else min(N, f.trunc)


def _match(f: TruncPoly, C1, c, k: int, N: int) -> bool:
    return (f.with_trunc(N) - closed_form(C1, c, k, N)).is_zero()


def _ratio_c(coeffs, k: int):
    """``c`` from the first two coefficients of ``C y^k (1-cy)^(-k-3)``."""
    return as_scalar(coeffs[k + 1] / (coeffs[k] * (k + 3)))


def classify(f0, f1, N: Optional[int] = None) -> ClassificationReport:
    """Decide the isotropy class of ``y'' = f0 (y-xp)^3 + f1 p (y-xp)^2``.

    Every coefficient known up to the effective truncation is checked
    against the closed form; ``certified_order`` is that truncation.
    """
    f0 = f0 if isinstance(f0, TruncPoly) else const(f0)
    f1 = f1 if isinstance(f1, TruncPoly) else const(f1)
    N = DEFAULT_TRUNCATION if N is None else N
    N = min(_effective(f0, N), _effective(f1, N))
    f0, f1 = f0.with_trunc(N), f1.with_trunc(N)
    b, cs = f0.coefficients(N), f1.coefficients(N)

    if f0.is_zero() and f1.is_zero():
        return ClassificationReport(Label.QUADRIC, N, evidence={"f0_zero": True, "f1_zero": True})

    lead = f0.order() if f1.is_zero() else f1.order()
    need = 2 * lead + 8
    if N < need:
        raise InsufficientTruncation(
            f"leading order {lead} needs truncation at least {need} to decide; got {N}"
        )

    if f1.is_zero():
        k = f0.order()
        c = _ratio_c(b, k)
        C1 = b[k]
        if not _match(f0, C1, c, k, N):
            return _generic(N, "f0 is not C1 y^k (1-cy)^(-k-3)")
        label = Label.MULTISHEAR if k == 0 else Label.FAMILY_A
        consts = {"C1": C1} if k else {"K": C1}
        report = ClassificationReport(label, N, k=k, c=c, constants=consts, evidence={"closed_form_f0": True})
        return _attach_normalizer(report)

    ell = f1.order()
    c = _ratio_c(cs, ell)
    C2 = cs[ell]
    if not _match(f1, C2, c, ell, N):
        return _generic(N, "f1 is not C2 y^l (1-cy)^(-l-3)")
    # (1-cy)^(-2l-5) is the family-A shape at exponent 2l+2
    k0 = 2 * ell + 2
    C1 = b[k0]
    if not _match(f0, C1, c, k0, N):
        return _generic(N, "f0 is not C1 y^(2l+2) (1-cy)^(-2l-5) with the same c")
    C = as_scalar(C1 / (C2 * C2))
    report = ClassificationReport(
        Label.FAMILY_B,
        N,
        ell=ell,
        C=C,
        c=c,
        constants={"C1": C1, "C2": C2},
        evidence={"closed_form_f1": True, "closed_form_f0": True},
    )
    return _attach_normalizer(report)


def _generic(N: int, reason: str) -> ClassificationReport:
    return ClassificationReport(Label.GENERIC, N, evidence={"excluded_through_order": N, "reason": reason})


def _scaling_pair(label: Label, k, constants) -> Optional[Tuple[object, object]]:
    """``(c1, c2)`` making the leading coefficient(s) equal to 1, or None."""
    if label is Label.FAMILY_B:
        return as_scalar(1 / constants["C2"]), Fraction(1)
    C1 = constants.get("C1", constants.get("K"))
    if k % 2:
        # c1^2 c2^(k+2) = 1/C1 with c2 = 1/C1 and c1 = C1^((k+1)/2)
        return as_scalar(C1 ** ((k + 1) // 2)), as_scalar(1 / C1)
    root = exact_sqrt(1 / C1)
    if root is None:
        return None
    return as_scalar(root), Fraction(1)


def _attach_normalizer(report: ClassificationReport) -> ClassificationReport:
    pair = _scaling_pair(report.label, report.k, report.constants)
    if pair is None:
        return report
    c1, c2 = pair
    pmap = PointMap.projective(as_scalar(-report.c * c2), c1, c2)
    return ClassificationReport(
        report.label,
        report.certified_order,
        report.k,
        report.ell,
        report.C,
        report.c,
        report.constants,
        pmap,
        report.evidence,
    )


def normal_form(report: ClassificationReport, N: Optional[int] = None) -> Tuple[TruncPoly, TruncPoly]:
    """The target pair: ``(y^k, 0)`` or ``(C y^(2l+2), y^l)``."""
    y = var("y")
    if report.label in (Label.FAMILY_A, Label.MULTISHEAR):
        return y ** report.k, const(0)
    if report.label is Label.FAMILY_B:
        return (y ** (2 * report.ell + 2)).scale(report.C), y ** report.ell
    raise NotNormalizable(f"label {report.label.value} has no normal form")


def normalize(report: ClassificationReport, f0, f1) -> Tuple[TruncPoly, TruncPoly]:
    """Push ``(f0, f1)`` forward by the report's normalizer."""
    if report.label not in (Label.MULTISHEAR, Label.FAMILY_A, Label.FAMILY_B):
        raise NotNormalizable(f"label {report.label.value} is not normalizable")
    if report.normalizer is None:
        raise NotNormalizable("the leading constant has no square root in Q(i)")
    f0 = f0 if isinstance(f0, TruncPoly) else const(f0)
    f1 = f1 if isinstance(f1, TruncPoly) else const(f1)
    N = report.certified_order
    ode = make_shear_ode(f0.with_trunc(N), f1.with_trunc(N))
    out = pushforward(ode, report.normalizer, N)
    return out.shear_data()


def recursion_witness(f0, f1, a, beta1, alpha3, N: Optional[int] = None) -> bool:
    """Whether both coefficient recursions of the isotropic ansatz hold up to order N::

        (a + (n+3) beta1) c_n + (n+2) alpha3 c_(n-1) = 0
        (2a + (n+4) beta1) b_n + (n+2) alpha3 b_(n-1) = 0
    """
    f0 = f0 if isinstance(f0, TruncPoly) else const(f0)
    f1 = f1 if isinstance(f1, TruncPoly) else const(f1)
    N = DEFAULT_TRUNCATION if N is None else N
    N = min(_effective(f0, N), _effective(f1, N))
    b, cs = f0.coefficients(N), f1.coefficients(N)
    for n in range(N + 1):
        cprev = cs[n - 1] if n else 0
        bprev = b[n - 1] if n else 0
        if (a + (n + 3) * beta1) * cs[n] + (n + 2) * alpha3 * cprev:
            return False
        if (2 * a + (n + 4) * beta1) * b[n] + (n + 2) * alpha3 * bprev:
            return False
    return True

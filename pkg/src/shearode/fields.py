"""Vector fields with polynomial / truncated-series components."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Tuple

from .poly import TruncPoly, const, var

__all__ = ["VectorField", "plane_field", "jet_field", "prolong", "lie_bracket", "PLANE", "JET", "SL2"]

PLANE = ("x", "y")
JET = ("x", "y", "p")
SL2 = ("alpha", "beta", "gamma", "delta")


def _poly(c) -> TruncPoly:
    return c if isinstance(c, TruncPoly) else const(c)


@dataclass(frozen=True)
class VectorField:
    """``sum(components[i] * d/d coords[i])``."""

    coords: Tuple[str, ...]
    components: Tuple[TruncPoly, ...]

    def __post_init__(self):
        comps = tuple(_poly(c) for c in self.components)
        if len(comps) != len(self.coords):
            raise ValueError("one component per coordinate is required")
        object.__setattr__(self, "coords", tuple(self.coords))
        object.__setattr__(self, "components", comps)

    def __getitem__(self, name: str) -> TruncPoly:
        return self.components[self.coords.index(name)]

    def apply(self, f: TruncPoly) -> TruncPoly:
        """Directional derivative ``V(f)``."""
        out = TruncPoly({}, (), f.series_var, None)
        for name, comp in zip(self.coords, self.components):
            if comp:
                out = out + comp * f.partial(name)
        return out

    def _check(self, other: "VectorField"):
        if self.coords != other.coords:
            raise ValueError(f"coordinate mismatch: {self.coords} vs {other.coords}")

    def __add__(self, other: "VectorField") -> "VectorField":
        self._check(other)
        return VectorField(self.coords, tuple(a + b for a, b in zip(self.components, other.components)))

    def __sub__(self, other: "VectorField") -> "VectorField":
        self._check(other)
        return VectorField(self.coords, tuple(a - b for a, b in zip(self.components, other.components)))

    def __neg__(self):
        return VectorField(self.coords, tuple(-a for a in self.components))

    def scale(self, c) -> "VectorField":
        if isinstance(c, TruncPoly):
            return VectorField(self.coords, tuple(a * c for a in self.components))
        return VectorField(self.coords, tuple(a.scale(c) for a in self.components))

    def __mul__(self, c):
        return self.scale(c)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def __eq__(self, other):
        if not isinstance(other, VectorField):
            return NotImplemented
        return self.coords == other.coords and (self - other).is_zero()

    __hash__ = None

    @property
    def trunc(self):
        known = [c.trunc for c in self.components if c.trunc is not None]
        return min(known) if known else None

    def restrict(self, coords: Sequence[str]) -> "VectorField":
        return VectorField(tuple(coords), tuple(self[c] for c in coords))

    def __str__(self):
        parts = []
        for name, comp in zip(self.coords, self.components):
            if comp:
                parts.append(f"({comp})*d_{name}")
        return " + ".join(parts) or "0"

    __repr__ = __str__


def plane_field(xi, eta) -> VectorField:
    """Point field ``xi d/dx + eta d/dy``; components must not involve ``p``."""
    v = VectorField(PLANE, (xi, eta))
    if any("p" in c.free_vars() for c in v.components):
        raise ValueError("a point symmetry cannot depend on p")
    return v


def jet_field(xi, eta, phi1) -> VectorField:
    return VectorField(JET, (xi, eta, phi1))


def prolong(v: VectorField) -> VectorField:
    """First prolongation: adds ``eta_x + p (eta_y - xi_x) - p**2 xi_y``."""
    xi, eta = v["x"], v["y"]
    p = var("p")
    phi1 = eta.partial("x") + p * (eta.partial("y") - xi.partial("x")) - p * p * xi.partial("y")
    return jet_field(xi, eta, phi1)


def lie_bracket(v: VectorField, w: VectorField) -> VectorField:
    """``[v, w] = v(w) - w(v)`` componentwise."""
    v._check(w)
    return VectorField(
        v.coords,
        tuple(v.apply(wc) - w.apply(vc) for vc, wc in zip(v.components, w.components)),
    )

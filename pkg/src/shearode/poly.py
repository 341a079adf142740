"""Multivariate polynomials over Q(i) with an optional truncation in one variable.

A :class:`TruncPoly` with ``trunc=N`` in its series variable ``y`` stands for
an element of ``Q(i)[vars][[y]]`` known modulo ``y**(N+1)``.  Exact
polynomials have ``trunc=None``.  Results of arithmetic carry the smallest
truncation of their operands, so precision loss is tracked automatically:
differentiating in the series variable lowers the truncation by one.

Exponent vectors are tuples aligned with ``variables``; variable order is
fixed by a module-level registry so that mixing operands only needs a
re-index, never a sort of the terms.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

from .errors import TruncationLoss, ZeroConstantTerm
from .gauss import GaussRational, as_scalar, scalar_str, to_gauss

__all__ = [
    "TruncPoly",
    "register_variable",
    "var",
    "const",
    "series",
    "series_invert",
    "substitute",
    "DEFAULT_TRUNCATION",
]

DEFAULT_TRUNCATION = 24

_REGISTRY: list = ["x", "y", "p", "alpha", "beta", "gamma", "delta", "c1v", "c2v"]
_INDEX: Dict[str, int] = {name: i for i, name in enumerate(_REGISTRY)}

Exps = Tuple[int, ...]


def register_variable(name: str) -> int:
    if name not in _INDEX:
        _INDEX[name] = len(_REGISTRY)
        _REGISTRY.append(name)
    return _INDEX[name]


def _ordered(names: Iterable[str]) -> Tuple[str, ...]:
    names = set(names)
    for n in names:
        register_variable(n)
    return tuple(sorted(names, key=_INDEX.__getitem__))


def _min_trunc(*truncs):
    known = [t for t in truncs if t is not None]
    return min(known) if known else None


def _lift(terms, src: Sequence[str], dst: Sequence[str]):
    if tuple(src) == tuple(dst):
        return terms
    pos = [dst.index(v) for v in src]
    width = len(dst)
    out = {}
    for e, c in terms.items():
        new = [0] * width
        for i, k in enumerate(e):
            new[pos[i]] = k
        out[tuple(new)] = c
    return out


def _mul_terms(t1, t2, sidx, N):
    out: dict = {}
    get = out.get
    if sidx is None or N is None:
        for e1, c1 in t1.items():
            for e2, c2 in t2.items():
                e = tuple([a + b for a, b in zip(e1, e2)])
                out[e] = get(e, 0) + c1 * c2
    else:
        for e1, c1 in t1.items():
            s1 = e1[sidx]
            if s1 > N:
                continue
            for e2, c2 in t2.items():
                if s1 + e2[sidx] > N:
                    continue
                e = tuple([a + b for a, b in zip(e1, e2)])
                out[e] = get(e, 0) + c1 * c2
    return {e: c for e, c in out.items() if c}


class TruncPoly:
    """Sparse polynomial / truncated series with exact Q(i) coefficients.

    Parameters
    ----------
    terms : mapping from exponent tuples to scalars
    variables : names matching the exponent positions
    series_var : the variable carrying the truncation (defaults to ``"y"``)
    trunc : highest known power of ``series_var``; ``None`` means exact
    """

    __slots__ = ("variables", "terms", "series_var", "trunc")

    def __init__(
        self,
        terms: Optional[Mapping[Exps, object]] = None,
        variables: Sequence[str] = (),
        series_var: Optional[str] = None,
        trunc: Optional[int] = None,
    ):
        variables = tuple(variables)
        ordered = _ordered(variables)
        raw = dict(terms or {})
        if ordered != variables:
            raw = _lift(raw, variables, ordered)
            variables = ordered
        if trunc is not None and series_var is None:
            series_var = "y"
        if series_var is not None:
            register_variable(series_var)
        if trunc is not None and trunc < -1:
            trunc = -1
        sidx = variables.index(series_var) if series_var in variables else None
        clean = {}
        for e, c in raw.items():
            if len(e) != len(variables):
                raise ValueError("exponent vector length does not match variables")
            if trunc is not None and sidx is not None and e[sidx] > trunc:
                continue
            if trunc is not None and trunc < 0:
                continue
            c = as_scalar(c)
            if c:
                clean[tuple(e)] = c
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "series_var", series_var)
        object.__setattr__(self, "trunc", trunc)

    def __setattr__(self, name, value):
        raise AttributeError("TruncPoly is immutable")

    @classmethod
    def _raw(cls, terms, variables, series_var, trunc):
        # trusted constructor: terms already clean and aligned
        obj = object.__new__(cls)
        object.__setattr__(obj, "variables", variables)
        object.__setattr__(obj, "terms", terms)
        object.__setattr__(obj, "series_var", series_var)
        object.__setattr__(obj, "trunc", trunc)
        return obj

    # ------------------------------------------------------------------ basics
    @property
    def sidx(self):
        sv = self.series_var
        return self.variables.index(sv) if sv in self.variables else None

    def _coerce(self, other) -> "TruncPoly":
        if isinstance(other, TruncPoly):
            return other
        c = as_scalar(other)
        return TruncPoly._raw({(): c} if c else {}, (), self.series_var, None)

    def _align(self, other: "TruncPoly"):
        sv = self.series_var or other.series_var
        if self.series_var and other.series_var and self.series_var != other.series_var:
            raise ValueError(
                f"series variables differ: {self.series_var!r} vs {other.series_var!r}"
            )
        if self.variables == other.variables:
            vs = self.variables
            t1, t2 = self.terms, other.terms
        else:
            vs = _ordered(self.variables + other.variables)
            t1 = _lift(self.terms, self.variables, vs)
            t2 = _lift(other.terms, other.variables, vs)
        return vs, t1, t2, sv, _min_trunc(self.trunc, other.trunc)

    def with_trunc(self, trunc: Optional[int]) -> "TruncPoly":
        """Truncate further (never raises precision)."""
        return TruncPoly(self.terms, self.variables, self.series_var or "y", _min_trunc(self.trunc, trunc))

    def exact(self) -> "TruncPoly":
        """Forget the truncation: treat the stored terms as an exact polynomial."""
        return TruncPoly._raw(dict(self.terms), self.variables, self.series_var, None)

    # -------------------------------------------------------------- arithmetic
    def __add__(self, other):
        if not isinstance(other, (TruncPoly, int, Fraction, GaussRational)):
            return NotImplemented
        other = self._coerce(other)
        vs, t1, t2, sv, N = self._align(other)
        out = dict(t1)
        for e, c in t2.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = as_scalar(v)
            else:
                out.pop(e, None)
        return TruncPoly(out, vs, sv, N)

    __radd__ = __add__

    def __neg__(self):
        return TruncPoly._raw({e: -c for e, c in self.terms.items()}, self.variables, self.series_var, self.trunc)

    def __sub__(self, other):
        if not isinstance(other, (TruncPoly, int, Fraction, GaussRational)):
            return NotImplemented
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "TruncPoly":
        c = as_scalar(c)
        if not c:
            return TruncPoly._raw({}, self.variables, self.series_var, self.trunc)
        out = {}
        for e, v in self.terms.items():
            out[e] = as_scalar(v * c)
        return TruncPoly._raw(out, self.variables, self.series_var, self.trunc)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GaussRational)):
            return self.scale(other)
        if not isinstance(other, TruncPoly):
            return NotImplemented
        vs, t1, t2, sv, N = self._align(other)
        sidx = vs.index(sv) if sv in vs else None
        out = _mul_terms(t1, t2, sidx, N)
        return TruncPoly._raw({e: as_scalar(c) for e, c in out.items()}, vs, sv, N)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, GaussRational)):
            return self.scale(1 / to_gauss(other))
        if isinstance(other, TruncPoly):
            N = _min_trunc(self.trunc, other.trunc)
            if N is None:
                N = DEFAULT_TRUNCATION
            return self * series_invert(other, N)
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            N = self.trunc if self.trunc is not None else DEFAULT_TRUNCATION
            return series_invert(self, N) ** (-n)
        result = TruncPoly._raw({(0,) * len(self.variables): Fraction(1)}, self.variables, self.series_var, self.trunc)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # ---------------------------------------------------------------- calculus
    def partial(self, name: str) -> "TruncPoly":
        """Formal partial derivative; differentiating in the series variable
        lowers the truncation by one."""
        trunc = self.trunc
        if name == self.series_var and trunc is not None:
            trunc -= 1
        if name not in self.variables:
            return TruncPoly._raw({}, self.variables, self.series_var, trunc)
        i = self.variables.index(name)
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                ne = e[:i] + (k - 1,) + e[i + 1 :]
                out[ne] = as_scalar(c * k)
        return TruncPoly(out, self.variables, self.series_var, trunc)

    def diff(self, name: str, times: int = 1) -> "TruncPoly":
        out = self
        for _ in range(times):
            out = out.partial(name)
        return out

    # -------------------------------------------------------------- inspection
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, (TruncPoly, int, Fraction, GaussRational)):
            return (self - other).is_zero()
        return NotImplemented

    __hash__ = None

    def free_vars(self) -> Tuple[str, ...]:
        used = set()
        for e in self.terms:
            for v, k in zip(self.variables, e):
                if k:
                    used.add(v)
        return _ordered(used)

    def degree(self, name: Optional[str] = None) -> int:
        """Degree in ``name`` (total degree when omitted); -1 for zero."""
        if not self.terms:
            return -1
        if name is None:
            return max(sum(e) for e in self.terms)
        if name not in self.variables:
            return 0
        i = self.variables.index(name)
        return max(e[i] for e in self.terms)

    def order(self, name: Optional[str] = None) -> Optional[int]:
        """Lowest exponent of ``name`` (series variable by default); None if zero."""
        name = name or self.series_var or "y"
        if not self.terms:
            return None
        if name not in self.variables:
            return 0
        i = self.variables.index(name)
        return min(e[i] for e in self.terms)

    def coeff(self, monomial: Mapping[str, int]):
        """Scalar coefficient of the monomial given as ``{var: exponent}``."""
        for v in monomial:
            if v not in self.variables and monomial[v]:
                return Fraction(0)
        e = tuple(monomial.get(v, 0) for v in self.variables)
        return self.terms.get(e, Fraction(0))

    def collect(self, name: str) -> Dict[int, "TruncPoly"]:
        """Split into ``{power: coefficient polynomial}`` with respect to ``name``."""
        if name not in self.variables:
            return {0: self} if self.terms else {}
        i = self.variables.index(name)
        rest = self.variables[:i] + self.variables[i + 1 :]
        buckets: Dict[int, dict] = {}
        for e, c in self.terms.items():
            buckets.setdefault(e[i], {})[e[:i] + e[i + 1 :]] = c
        trunc = self.trunc
        return {k: TruncPoly._raw(t, rest, self.series_var, trunc) for k, t in sorted(buckets.items())}

    def coefficients(self, n: Optional[int] = None) -> list:
        """Dense coefficient list of a univariate polynomial in the series variable."""
        sv = self.series_var or "y"
        extra = [v for v in self.free_vars() if v != sv]
        if extra:
            raise ValueError(f"not univariate in {sv!r}: also depends on {extra}")
        if n is None:
            n = self.trunc if self.trunc is not None else max(self.degree(sv), 0)
        out = [Fraction(0)] * (n + 1)
        i = self.variables.index(sv) if sv in self.variables else None
        for e, c in self.terms.items():
            k = e[i] if i is not None else 0
            if k <= n:
                out[k] = c
        return out

    def items(self):
        return self.terms.items()

    def __len__(self):
        return len(self.terms)

    # ------------------------------------------------------------- evaluation
    def evaluate(self, values: Mapping[str, object]):
        """Evaluate at a point.

        Exact scalars give an exact result; any float/complex value switches
        to complex floating point.  Every free variable must be bound.
        """
        free = self.free_vars()
        missing = [v for v in free if v not in values]
        if missing:
            raise ValueError(f"unbound variables {missing}")
        numeric = any(isinstance(values[v], (float, complex)) for v in free)
        if numeric:
            vals = [complex(values[v]) if v in values else 0j for v in self.variables]
            total = 0j
            for e, c in self.terms.items():
                term = complex(to_gauss(c))
                for x, k in zip(vals, e):
                    if k:
                        term *= x**k
                total += term
            return total
        vals = [to_gauss(values[v]) if v in free else None for v in self.variables]
        total = Fraction(0)
        for e, c in self.terms.items():
            term = c
            for x, k in zip(vals, e):
                if k:
                    term = term * x**k
            total = total + term
        return as_scalar(total)

    def substitute(self, bindings: Mapping[str, object], trunc: Optional[int] = None) -> "TruncPoly":
        return substitute(self, bindings, trunc)

    # --------------------------------------------------------------- printing
    def to_expr(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=lambda e: (sum(e), tuple(-k for k in e))):
            c = to_gauss(self.terms[e])
            mono = "*".join(
                v if k == 1 else f"{v}^{k}" for v, k in zip(self.variables, e) if k
            )
            if not mono:
                parts.append(scalar_str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{scalar_str(c)}*{mono}")
        text = parts[0]
        for part in parts[1:]:
            text += " - " + part[1:] if part.startswith("-") else " + " + part
        return text

    def __str__(self):
        return self.to_expr()

    def __repr__(self):
        tail = "" if self.trunc is None else f", trunc={self.trunc}"
        return f"TruncPoly({self.to_expr()!r}{tail})"


# ---------------------------------------------------------------- constructors
def var(name: str, trunc: Optional[int] = None, series_var: str = "y") -> TruncPoly:
    return TruncPoly({(1,): 1}, (name,), series_var, trunc)


def const(c, trunc: Optional[int] = None, series_var: str = "y") -> TruncPoly:
    return TruncPoly({(): c}, (), series_var, trunc)


def series(coeffs: Sequence, trunc: Optional[int] = None, name: str = "y") -> TruncPoly:
    """Univariate series ``sum(coeffs[n] * name**n)``."""
    return TruncPoly({(n,): c for n, c in enumerate(coeffs)}, (name,), name, trunc)


# ------------------------------------------------------------------ operations
def series_invert(p: TruncPoly, N: int) -> TruncPoly:
    """``q`` with ``p*q == 1 mod y**(N+1)`` for a unit ``p`` univariate in ``y``."""
    sv = p.series_var or "y"
    N = _min_trunc(N, p.trunc)
    a = p.coefficients(N)
    if not a[0]:
        raise ZeroConstantTerm("cannot invert a series with zero constant term")
    inv0 = 1 / to_gauss(a[0]) if isinstance(a[0], GaussRational) else 1 / a[0]
    q = [as_scalar(inv0)]
    for n in range(1, N + 1):
        s = 0
        for i in range(1, n + 1):
            if a[i]:
                s = s + a[i] * q[n - i]
        q.append(as_scalar(-s * inv0))
    return series(q, N, sv)


def substitute(p: TruncPoly, bindings: Mapping[str, object], trunc: Optional[int] = None) -> TruncPoly:
    """Compose ``p`` with ``{var: TruncPoly or scalar}`` modulo ``y**(trunc+1)``.

    Substituting into the series variable of a truncated ``p`` requires the
    binding to be divisible by that variable; otherwise the unknown tail would
    leak into low orders and :class:`TruncationLoss` is raised.
    """
    sv = p.series_var or "y"
    binds = {}
    for name, b in bindings.items():
        if not isinstance(b, TruncPoly):
            b = const(b, series_var=sv)
        binds[name] = b
    binds = {n: b for n, b in binds.items() if n in p.variables}
    if not binds:
        return p.with_trunc(trunc)

    N = _min_trunc(p.trunc, trunc, *(b.trunc for b in binds.values()))
    if p.trunc is not None and sv in binds:
        b = binds[sv]
        if b.terms and (b.order(sv) or 0) < 1:
            raise TruncationLoss(
                f"binding for series variable {sv!r} has terms of order 0; "
                "the truncated tail of the input would reach low orders"
            )

    unbound = tuple(v for v in p.variables if v not in binds)
    out_vars = _ordered(unbound + tuple(v for b in binds.values() for v in b.variables) + ((sv,) if N is not None else ()))
    sidx = out_vars.index(sv) if sv in out_vars else None

    def lift(b: TruncPoly):
        return _lift(b.terms, b.variables, out_vars)

    one = {(0,) * len(out_vars): Fraction(1)}
    cache: Dict[str, list] = {}

    def power(name, k):
        pows = cache.setdefault(name, [one])
        while len(pows) <= k:
            pows.append(_mul_terms(pows[-1], lift(binds[name]), sidx, N))
        return pows[k]

    # group by everything except the series variable so that a series in y is
    # composed once as a linear combination of cached powers
    s_bound = sv in binds
    s_pos = p.variables.index(sv) if (s_bound and sv in p.variables) else None
    groups: Dict[Exps, Dict[int, object]] = {}
    for e, c in p.terms.items():
        n = e[s_pos] if s_pos is not None else 0
        key = e[:s_pos] + (0,) + e[s_pos + 1 :] if s_pos is not None else e
        groups.setdefault(key, {})[n] = c

    total: dict = {}
    for key, coeffs in groups.items():
        acc: dict = {}
        for n, c in coeffs.items():
            src = power(sv, n) if s_pos is not None else one
            for e, v in src.items():
                acc[e] = acc.get(e, 0) + c * v
        acc = {e: v for e, v in acc.items() if v}
        factor = one
        for name, k in zip(p.variables, key):
            if not k:
                continue
            if name in binds:
                factor = _mul_terms(factor, power(name, k), sidx, N)
            else:
                mono = [0] * len(out_vars)
                mono[out_vars.index(name)] = k
                factor = _mul_terms(factor, {tuple(mono): Fraction(1)}, sidx, N)
        for e, v in _mul_terms(acc, factor, sidx, N).items():
            total[e] = total.get(e, 0) + v
    return TruncPoly(total, out_vars, sv, N)

"""Exact multivariate Laurent polynomials and truncated Q-series.

A :class:`LaurentPoly` lives over an ordered *signature* of variable names.
Exponents are integer tuples aligned with the signature; coefficients are
Python integers, or :class:`fractions.Fraction` when rational weights enter.
Values are immutable and hash structurally, so they can be used as memo keys.

Text form::

    a^2*z^-2 - 2*z^-2 + a^-2*z^-2

Terms are ordered by z-degree, then by the remaining variables in signature
order, all descending.  :func:`parse` reads the same grammar back.
"""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping

__all__ = [
    "LaurentPoly",
    "QSeries",
    "SignatureError",
    "ring",
    "parse",
    "specialize_UN",
    "render_half_q",
    "DEFAULT_SIGNATURE",
]

DEFAULT_SIGNATURE = ("a", "z")


class SignatureError(ValueError):
    """Operands live over different variable signatures."""


def _norm_coeff(c):
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, bool):
        return int(c)
    if isinstance(c, int):
        return c
    if isinstance(c, Rational):
        return _norm_coeff(Fraction(c.numerator, c.denominator))
    raise TypeError(f"unsupported coefficient type {type(c).__name__}")


class LaurentPoly:
    """Element of Z[x1^±, ..., xk^±] (or Q[...] with rational coefficients)."""

    __slots__ = ("signature", "_terms", "_hash")

    def __init__(self, terms: Mapping[tuple, object] | None = None, signature=DEFAULT_SIGNATURE):
        self.signature = tuple(signature)
        n = len(self.signature)
        clean = {}
        if terms:
            for mono, c in terms.items():
                mono = tuple(int(e) for e in mono)
                if len(mono) != n:
                    raise ValueError(f"monomial {mono} does not match signature {self.signature}")
                c = _norm_coeff(c)
                if c:
                    clean[mono] = clean.get(mono, 0) + c
                    if not clean[mono]:
                        del clean[mono]
        # canonical order: sorted monomials
        self._terms = dict(sorted(clean.items()))
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict, signature: tuple) -> "LaurentPoly":
        # terms already clean (no zeros, normalised coefficients)
        obj = cls.__new__(cls)
        obj.signature = signature
        obj._terms = dict(sorted(terms.items()))
        obj._hash = None
        return obj

    # -- constructors -------------------------------------------------------
    @classmethod
    def zero(cls, signature=DEFAULT_SIGNATURE):
        return cls._raw({}, tuple(signature))

    @classmethod
    def one(cls, signature=DEFAULT_SIGNATURE):
        return cls.constant(1, signature)

    @classmethod
    def constant(cls, c, signature=DEFAULT_SIGNATURE):
        signature = tuple(signature)
        c = _norm_coeff(c)
        return cls._raw({(0,) * len(signature): c} if c else {}, signature)

    @classmethod
    def monomial(cls, exponents: Mapping[str, int] | None = None, coeff=1, signature=DEFAULT_SIGNATURE):
        signature = tuple(signature)
        exponents = exponents or {}
        unknown = set(exponents) - set(signature)
        if unknown:
            raise SignatureError(f"variables {sorted(unknown)} not in signature {signature}")
        mono = tuple(int(exponents.get(v, 0)) for v in signature)
        coeff = _norm_coeff(coeff)
        return cls._raw({mono: coeff} if coeff else {}, signature)

    @classmethod
    def var(cls, name: str, power: int = 1, signature=DEFAULT_SIGNATURE):
        return cls.monomial({name: power}, 1, signature)

    # -- basic protocol -----------------------------------------------------
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self.signature == other.signature and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == LaurentPoly.constant(other, self.signature)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.signature, tuple(self._terms.items())))
        return self._hash

    def __repr__(self):
        return f"LaurentPoly({self.render()!r}, signature={self.signature})"

    def __str__(self):
        return self.render()

    # -- arithmetic ---------------------------------------------------------
    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            if other.signature != self.signature:
                raise SignatureError(f"signature mismatch: {self.signature} vs {other.signature}")
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentPoly.constant(other, self.signature)
        raise TypeError(f"cannot combine LaurentPoly with {type(other).__name__}")

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self._terms)
        for m, c in other._terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = _norm_coeff(v)
            else:
                out.pop(m, None)
        return LaurentPoly._raw(out, self.signature)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw({m: -c for m, c in self._terms.items()}, self.signature)

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = _norm_coeff(other)
            if not other:
                return LaurentPoly.zero(self.signature)
            return LaurentPoly._raw({m: _norm_coeff(c * other) for m, c in self._terms.items()}, self.signature)
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        out: dict = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = tuple(x + y for x, y in zip(m1, m2))
                v = out.get(m, 0) + c1 * c2
                if v:
                    out[m] = v
                else:
                    del out[m]
        return LaurentPoly._raw({m: _norm_coeff(c) for m, c in out.items()}, self.signature)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = LaurentPoly.one(self.signature)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def is_unit(self) -> bool:
        """True for ±(monomial) over Z, any nonzero monomial over Q."""
        if len(self._terms) != 1:
            return False
        (c,) = self._terms.values()
        return c in (1, -1) or isinstance(c, Fraction)

    def inverse(self) -> "LaurentPoly":
        if len(self._terms) != 1:
            raise ZeroDivisionError(f"{self.render()} is not a unit in the Laurent ring")
        ((m, c),) = self._terms.items()
        if c not in (1, -1) and not isinstance(c, Fraction):
            c = Fraction(1, c)
        else:
            c = Fraction(1, 1) / c
        return LaurentPoly._raw({tuple(-e for e in m): _norm_coeff(c)}, self.signature)

    # -- structure ----------------------------------------------------------
    def degree_range(self, name: str) -> tuple[int, int]:
        i = self.signature.index(name)
        exps = [m[i] for m in self._terms]
        if not exps:
            return (0, 0)
        return (min(exps), max(exps))

    def extend(self, signature: Iterable[str]) -> "LaurentPoly":
        """Embed into a larger signature (new variables get exponent 0)."""
        signature = tuple(signature)
        if signature == self.signature:
            return self
        missing = set(self.signature) - set(signature)
        if missing:
            raise SignatureError(f"cannot embed: {sorted(missing)} missing from {signature}")
        pos = [self.signature.index(v) if v in self.signature else None for v in signature]
        out = {tuple(m[p] if p is not None else 0 for p in pos): c for m, c in self._terms.items()}
        return LaurentPoly._raw(out, signature)

    def substitute_monomial(self, images: Mapping[str, Mapping[str, int]], signature=None) -> "LaurentPoly":
        """Apply a monomial change of variables, e.g. ``{'a': {'a': -1}, 'z': {'z': 1}}``.

        Each variable maps to a monomial (exponent dict) in the target signature;
        sign changes are handled by :meth:`scale_variable`.
        """
        signature = tuple(signature or self.signature)
        rows = []
        for v in self.signature:
            img = images.get(v, {v: 1})
            rows.append(tuple(int(img.get(w, 0)) for w in signature))
        out: dict = {}
        for m, c in self._terms.items():
            new = [0] * len(signature)
            for e, row in zip(m, rows):
                if e:
                    for j, r in enumerate(row):
                        new[j] += e * r
            key = tuple(new)
            v = out.get(key, 0) + c
            if v:
                out[key] = v
            else:
                del out[key]
        return LaurentPoly._raw(out, signature)

    def scale_variable(self, name: str, factor: int) -> "LaurentPoly":
        """Substitute ``name -> factor*name`` for an integer factor (typically -1)."""
        i = self.signature.index(name)
        return LaurentPoly._raw(
            {m: _norm_coeff(c * factor ** m[i]) if m[i] >= 0 else _norm_coeff(c * Fraction(1, factor ** -m[i]))
             for m, c in self._terms.items()},
            self.signature,
        )

    def coefficient(self, exponents: Mapping[str, int]):
        mono = tuple(int(exponents.get(v, 0)) for v in self.signature)
        return self._terms.get(mono, 0)

    # -- text ---------------------------------------------------------------
    def _sort_key(self, mono):
        sig = self.signature
        if "z" in sig:
            zi = sig.index("z")
            rest = tuple(mono[i] for i in range(len(sig)) if i != zi)
            return (mono[zi],) + rest
        return mono

    def render(self) -> str:
        if not self._terms:
            return "0"
        monos = sorted(self._terms, key=self._sort_key, reverse=True)
        parts = []
        for idx, m in enumerate(monos):
            c = self._terms[m]
            neg = c < 0
            mag = -c if neg else c
            factors = []
            for name, e in zip(self.signature, m):
                if e == 1:
                    factors.append(name)
                elif e:
                    factors.append(f"{name}^{e}")
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = f"{mag}*" + "*".join(factors)
            if idx == 0:
                parts.append(f"-{body}" if neg else body)
            else:
                parts.append(f" - {body}" if neg else f" + {body}")
        return "".join(parts)


_TERM_SPLIT = re.compile(r"\s*([+-])\s*")
_FACTOR = re.compile(r"^([A-Za-z_][A-Za-z_0-9]*)(?:\^(-?\d+))?$")
_NUMBER = re.compile(r"^(\d+)(?:/(\d+))?$")


def parse(text: str, signature=DEFAULT_SIGNATURE) -> LaurentPoly:
    """Parse the rendering grammar back into a polynomial."""
    signature = tuple(signature)
    s = text.strip()
    if not s:
        raise ValueError("empty polynomial text")
    if s == "0":
        return LaurentPoly.zero(signature)
    # tokenise into signed terms, keeping '^-' exponents intact
    tokens = []
    sign = 1
    buf = ""
    i = 0
    while i < len(s):
        ch = s[i]
        if ch in "+-" and not (i > 0 and s[i - 1] == "^"):
            if buf.strip():
                tokens.append((sign, buf.strip()))
                buf = ""
                sign = 1
            sign = sign * (-1 if ch == "-" else 1)
        else:
            buf += ch
        i += 1
    if buf.strip():
        tokens.append((sign, buf.strip()))
    terms: dict = {}
    for sgn, body in tokens:
        coeff = Fraction(1)
        mono = [0] * len(signature)
        for fac in body.split("*"):
            fac = fac.strip()
            num = _NUMBER.match(fac)
            if num:
                coeff *= Fraction(int(num.group(1)), int(num.group(2) or 1))
                continue
            m = _FACTOR.match(fac)
            if not m:
                raise ValueError(f"malformed factor {fac!r} in {text!r}")
            name, exp = m.group(1), int(m.group(2) or 1)
            if name not in signature:
                raise SignatureError(f"variable {name!r} not in signature {signature}")
            mono[signature.index(name)] += exp
        key = tuple(mono)
        terms[key] = terms.get(key, 0) + sgn * coeff
    return LaurentPoly(terms, signature)


def ring(*names: str):
    """Return the generators of Z[names^±] as polynomials, e.g. ``a, z = ring('a', 'z')``."""
    return tuple(LaurentPoly.var(n, 1, names) for n in names)


# ---------------------------------------------------------------------------
# U(N) specialisation
# ---------------------------------------------------------------------------

def _divide_by_t_minus_tinv(p: LaurentPoly) -> LaurentPoly | None:
    """Exact division by (t - t^-1) in Z[t^±]; None if it does not divide."""
    if p.is_zero():
        return p
    # multiply through by t: (t - t^-1) = t^-1 (t^2 - 1); divide by (t^2 - 1) via synthetic division
    coeffs = {m[0]: c for m, c in p.items()}
    lo, hi = min(coeffs), max(coeffs)
    # p = (t - 1/t) q  <=>  q_k = p_{k+1} + q_{k+2}, scanning downward from the top
    q = {}
    for k in range(hi - 1, lo - 1, -1):
        val = coeffs.get(k + 1, 0) + q.get(k + 2, 0)
        if val:
            q[k] = val
    # verify: coefficient constraints at the bottom must close
    recon = {}
    for k, c in q.items():
        recon[k + 1] = recon.get(k + 1, 0) + c
        recon[k - 1] = recon.get(k - 1, 0) - c
    recon = {k: v for k, v in recon.items() if v}
    if recon != {k: v for k, v in coeffs.items() if v}:
        return None
    return LaurentPoly({(k,): c for k, c in q.items()}, p.signature)


def specialize_UN(p: LaurentPoly, N: int, truncation: int | None = None) -> LaurentPoly:
    """Substitute a = q^(N/2), z = q^(1/2) - q^(-1/2).

    The result is returned as a Laurent polynomial in ``t = q^(1/2)`` (signature
    ``('t',)``); use :func:`render_half_q` for the q-form.  Negative powers of z
    are cleared by exact division by (t - t^-1).  When that division is not
    exact, ``truncation`` must be given and the quotient is expanded as a series
    in t^-1, keeping exponents >= -truncation.
    """
    if N < 1:
        raise ValueError("N must be a positive integer")
    extra = set(p.signature) - {"a", "z"}
    used_extra = [v for v in extra if any(m[p.signature.index(v)] for m, _ in p.items())]
    if used_extra:
        raise ValueError(f"specialize_UN expects a polynomial in a, z only (found {used_extra})")
    ai = p.signature.index("a") if "a" in p.signature else None
    zi = p.signature.index("z") if "z" in p.signature else None
    tsig = ("t",)
    zmin = min((m[zi] for m, _ in p.items()), default=0) if zi is not None else 0
    shift = max(0, -zmin)
    zpoly = LaurentPoly({(1,): 1, (-1,): -1}, tsig)
    zpows = {}
    total = LaurentPoly.zero(tsig)
    for m, c in p.items():
        ae = m[ai] if ai is not None else 0
        ze = (m[zi] if zi is not None else 0) + shift
        if ze not in zpows:
            zpows[ze] = zpoly ** ze
        total = total + zpows[ze] * LaurentPoly({(N * ae,): c}, tsig)
    for _ in range(shift):
        q = _divide_by_t_minus_tinv(total)
        if q is None:
            if truncation is None:
                raise ValueError("specialisation is not a Laurent polynomial; pass truncation to expand")
            # 1/(t - t^-1) = t^-1 * sum_j t^(-2j)
            series = LaurentPoly({(-1 - 2 * j,): 1 for j in range(truncation + 2)}, tsig)
            q = total * series
            q = LaurentPoly({m: c for m, c in q.items() if m[0] >= -truncation}, tsig)
        total = q
    return total


def render_half_q(p: LaurentPoly) -> str:
    """Render a polynomial in t = q^(1/2) using half-integer powers of q."""
    if p.is_zero():
        return "0"
    parts = []
    for idx, (m, c) in enumerate(sorted(p.items(), key=lambda kv: kv[0], reverse=True)):
        e = m[0]
        if e == 0:
            body = None
        elif e % 2 == 0:
            body = "q" if e == 2 else f"q^{e // 2}"
        else:
            body = f"q^({e}/2)"
        mag = abs(c)
        if body is None:
            text = str(mag)
        elif mag == 1:
            text = body
        else:
            text = f"{mag}*{body}"
        if idx == 0:
            parts.append(f"-{text}" if c < 0 else text)
        else:
            parts.append(f" - {text}" if c < 0 else f" + {text}")
    return "".join(parts)


# ---------------------------------------------------------------------------
# Truncated power series in Q over a coefficient algebra
# ---------------------------------------------------------------------------

class QSeries:
    """Truncated series sum_d c_d Q^d with d a tuple of non-negative integers.

    Coefficients may be any commutative-algebra values supporting ``+``, ``*``
    and ``==`` (``LaurentPoly`` or a collapsed brane skein).  ``one`` fixes the
    coefficient algebra's unit; only degrees with total order <= ``order`` are
    kept.
    """

    def __init__(self, coeffs: Mapping[tuple, object], order: int, one, nvars: int | None = None):
        if order < 0:
            raise ValueError("truncation order must be non-negative")
        self.order = int(order)
        self.one = one
        if nvars is None:
            nvars = len(next(iter(coeffs))) if coeffs else 1
        self.nvars = nvars
        clean = {}
        for d, c in coeffs.items():
            d = tuple(int(x) for x in d)
            if len(d) != nvars:
                raise ValueError(f"degree {d} has wrong arity (expected {nvars})")
            if any(x < 0 for x in d):
                raise ValueError(f"negative Q-degree {d}")
            if sum(d) > self.order:
                continue
            if c == 0 or _is_zero(c):
                continue
            clean[d] = clean[d] + c if d in clean else c
        self.coeffs = dict(sorted(clean.items()))

    @classmethod
    def unit(cls, order: int, one, nvars: int = 1) -> "QSeries":
        return cls({(0,) * nvars: one}, order, one, nvars)

    @property
    def constant(self):
        return self.coeffs.get((0,) * self.nvars, self.one * 0)

    def _check(self, other: "QSeries"):
        if self.nvars != other.nvars:
            raise ValueError("Q-degree arity mismatch")

    def __add__(self, other: "QSeries") -> "QSeries":
        self._check(other)
        out = dict(self.coeffs)
        for d, c in other.coeffs.items():
            out[d] = out[d] + c if d in out else c
        return QSeries(out, min(self.order, other.order), self.one, self.nvars)

    def __sub__(self, other: "QSeries") -> "QSeries":
        return self + other.scale(-1)

    def scale(self, k) -> "QSeries":
        return QSeries({d: c * k for d, c in self.coeffs.items()}, self.order, self.one, self.nvars)

    def __mul__(self, other):
        if not isinstance(other, QSeries):
            return QSeries({d: c * other for d, c in self.coeffs.items()}, self.order, self.one, self.nvars)
        self._check(other)
        order = min(self.order, other.order)
        out: dict = {}
        for d1, c1 in self.coeffs.items():
            s1 = sum(d1)
            for d2, c2 in other.coeffs.items():
                if s1 + sum(d2) > order:
                    continue
                d = tuple(x + y for x, y in zip(d1, d2))
                prod = c1 * c2
                out[d] = out[d] + prod if d in out else prod
        return QSeries(out, order, self.one, self.nvars)

    def invert(self) -> "QSeries":
        c0 = self.constant
        if c0 == self.one:
            c0_inv = self.one
        elif isinstance(c0, LaurentPoly) and c0.is_unit():
            c0_inv = c0.inverse()
        else:
            raise ZeroDivisionError("series constant term is not a unit")
        rest = QSeries({d: c * c0_inv for d, c in self.coeffs.items() if any(d)}, self.order, self.one, self.nvars)
        # (c0 (1 + r))^-1 = c0^-1 * sum_k (-r)^k ; r has no constant term so k <= order
        neg = rest.scale(-1)
        total = QSeries.unit(self.order, self.one, self.nvars)
        power = QSeries.unit(self.order, self.one, self.nvars)
        for _ in range(self.order):
            power = power * neg
            if not power.coeffs:
                break
            total = total + power
        return total * c0_inv

    def __truediv__(self, other: "QSeries") -> "QSeries":
        return self * other.invert()

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        return self.nvars == other.nvars and self.coeffs == other.coeffs

    def truncate(self, order: int) -> "QSeries":
        return QSeries(self.coeffs, min(order, self.order), self.one, self.nvars)

    def render(self, render_coeff=None) -> str:
        render_coeff = render_coeff or (lambda c: c.render() if hasattr(c, "render") else str(c))
        if not self.coeffs:
            return "0"
        parts = []
        for d, c in self.coeffs.items():
            text = render_coeff(c)
            if not any(d):
                parts.append(text)
                continue
            if self.nvars == 1:
                q = "Q" if d[0] == 1 else f"Q^{d[0]}"
            else:
                q = "Q^(" + ",".join(str(x) for x in d) + ")"
            parts.append(q if text == "1" else f"({text})*{q}")
        return " + ".join(parts)

    def __repr__(self):
        return f"QSeries({self.render()!r}, order={self.order})"


def _is_zero(c) -> bool:
    if hasattr(c, "is_zero"):
        return c.is_zero()
    return not c

"""Truncated Laurent series in q with exact rational coefficients.

A QSeries is a dense window of coefficients for t = q^(1/scale), covering
t-exponents lo..hi together with a trusted order N (t-units): coefficients at
exponents <= N are correct, everything above N is unknown.  Series flagged
`exact` are full Laurent polynomials: every coefficient outside the stored
window is zero, so they may be extended to any order for free.

All arithmetic is pure (no mutation) and tracks the trusted order explicitly:

  add:  N = min(Na, Nb)
  mul:  N = min(Na, Nb, Na + lo_b, Nb + lo_a)   (exact operands lift the caps)
  invert, lo = m:  N = Na - 2m
  mul by (1 + c t^e), e >= 0: keeps N;  e < 0: erodes N by |e| unless exact
  div by (1 + c t^e), e > 0: keeps N;   e < 0: raises N by |e|

Negative exponents are allowed but guarded: lo must stay above a configurable
bound (default 10*N plus slack) so runaway Laurent tails fail fast.
"""

from __future__ import annotations

from math import gcd

from .errors import (
    ExponentError,
    ScaleMismatchError,
    SingularSpecializationError,
    TruncationError,
)
from .rational import Rat, ZERO, rat, rat_str

LO_GUARD_FACTOR = 10
LO_GUARD_SLACK = 64


def _lo_bound(order: int) -> int:
    return -(LO_GUARD_FACTOR * max(abs(order), 1) + LO_GUARD_SLACK)


class QSeries:
    __slots__ = ("scale", "lo", "order", "coeffs", "exact")

    def __init__(self, scale: int, lo: int, order: int, coeffs, exact: bool = False):
        if scale < 1:
            raise ExponentError(f"scale must be >= 1, got {scale}")
        coeffs = [Rat(c) for c in coeffs]
        while coeffs and not coeffs[-1]:
            coeffs.pop()
        hi = lo + len(coeffs) - 1
        if exact:
            # exact series are fully known, so trust extends over the support
            order = max(order, hi)
        elif hi > order:
            del coeffs[max(order - lo + 1, 0):]
        while coeffs and not coeffs[-1]:
            coeffs.pop()
        start = 0
        while start < len(coeffs) and not coeffs[start]:
            start += 1
        if start:
            coeffs = coeffs[start:]
            lo += start
        if not coeffs:
            lo = order + 1  # canonical zero
        if lo < _lo_bound(order):
            raise ExponentError(
                f"lowest exponent {lo} below guard {_lo_bound(order)} (order {order})"
            )
        self.scale = scale
        self.lo = lo
        self.order = order
        self.coeffs = coeffs
        self.exact = exact

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, order, scale: int = 1) -> "QSeries":
        return cls(scale, 0, _to_t(order, scale), [], exact=True)

    @classmethod
    def constant(cls, c, order, scale: int = 1) -> "QSeries":
        return cls(scale, 0, _to_t(order, scale), [Rat(c)], exact=True)

    @classmethod
    def one(cls, order, scale: int = 1) -> "QSeries":
        return cls.constant(1, order, scale)

    @classmethod
    def monomial(cls, c, qexp, order, scale: int = 1) -> "QSeries":
        e = _to_t_exact(qexp, scale)
        return cls(scale, e, _to_t(order, scale), [Rat(c)], exact=True)

    @classmethod
    def from_terms(cls, terms, order, scale: int = 1, exact: bool = False) -> "QSeries":
        """Build from {q_exponent: coefficient} (exponents rational)."""
        n = _to_t(order, scale)
        items = {}
        for qe, c in dict(terms).items():
            items[_to_t_exact(qe, scale)] = Rat(c)
        if not items:
            return cls(scale, 0, n, [], exact=True)
        lo = min(items)
        hi = max(items)
        coeffs = [items.get(t, ZERO) for t in range(lo, hi + 1)]
        return cls(scale, lo, n, coeffs, exact=exact)

    # -- basic views -------------------------------------------------------

    @property
    def hi(self) -> int:
        return self.lo + len(self.coeffs) - 1

    @property
    def q_order(self) -> Rat:
        return Rat(self.order, self.scale)

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff_t(self, t: int) -> Rat:
        if t > self.order and not self.exact:
            raise TruncationError(f"t-exponent {t} beyond trusted order {self.order}")
        if self.lo <= t <= self.hi:
            return self.coeffs[t - self.lo]
        return ZERO

    def coeff(self, qexp) -> Rat:
        """Coefficient of q^qexp; exponents not on the scale grid are zero."""
        x = rat(qexp) * self.scale
        if x.denominator != 1:
            if x > self.order and not self.exact:
                raise TruncationError(f"exponent {qexp} beyond trusted order")
            return ZERO
        return self.coeff_t(int(x.numerator))

    def items(self):
        """Yield (q_exponent, coefficient) for stored nonzero terms."""
        for i, c in enumerate(self.coeffs):
            if c:
                yield Rat(self.lo + i, self.scale), c

    # -- arithmetic --------------------------------------------------------

    def _check_scale(self, other: "QSeries"):
        if self.scale != other.scale:
            raise ScaleMismatchError(f"scale {self.scale} vs {other.scale}")

    def __neg__(self) -> "QSeries":
        return QSeries(self.scale, self.lo, self.order, [-c for c in self.coeffs], self.exact)

    def __add__(self, other):
        if not isinstance(other, QSeries):
            return self + QSeries(self.scale, 0, self.order, [Rat(other)], exact=True)
        self._check_scale(other)
        a, b = self, other
        if a.exact and b.exact:
            n = max(a.order, b.order)
            exact = True
        elif a.exact:
            n, exact = b.order, False
        elif b.exact:
            n, exact = a.order, False
        else:
            n, exact = min(a.order, b.order), False
        if a.is_zero():
            return QSeries(a.scale, b.lo, n, b.coeffs, exact)
        if b.is_zero():
            return QSeries(a.scale, a.lo, n, a.coeffs, exact)
        lo = min(a.lo, b.lo)
        hi = min(max(a.hi, b.hi), n)
        out = [ZERO] * (hi - lo + 1)
        for src in (a, b):
            for i, c in enumerate(src.coeffs):
                t = src.lo + i
                if t > hi:
                    break
                out[t - lo] += c
        return QSeries(a.scale, lo, n, out, exact)

    def __radd__(self, other):
        return self.__add__(other)

    def __sub__(self, other):
        if isinstance(other, QSeries):
            return self + (-other)
        return self + (-Rat(other))

    def __mul__(self, other):
        if not isinstance(other, QSeries):
            return self.scalar_mul(other)
        self._check_scale(other)
        a, b = self, other
        if a.is_zero() or b.is_zero():
            if (a.is_zero() and a.exact) or (b.is_zero() and b.exact):
                return QSeries(a.scale, 0, max(a.order, b.order), [], exact=True)
            za, zb = (a, b) if a.is_zero() else (b, a)
            # za's tail starts above za.order, so the product is unknown
            # past za.order + zb.lo.
            if zb.exact:
                n = za.order + zb.lo
            else:
                n = min(za.order, zb.order, za.order + zb.lo, zb.order + za.lo)
            return QSeries(a.scale, 0, n, [], exact=False)
        if a.exact and b.exact:
            n, exact = a.order + b.order, True
        elif a.exact:
            n, exact = b.order + a.lo, False
        elif b.exact:
            n, exact = a.order + b.lo, False
        else:
            n = min(a.order, b.order, a.order + b.lo, b.order + a.lo)
            exact = False
        lo = a.lo + b.lo
        hi = min(a.hi + b.hi, n)
        if hi < lo:
            return QSeries(a.scale, 0, n, [], exact)
        out = [ZERO] * (hi - lo + 1)
        for i, ca in enumerate(a.coeffs):
            if not ca:
                continue
            base = a.lo + i + b.lo - lo
            if base >= len(out):
                break
            stop = min(len(b.coeffs), len(out) - base)
            for j in range(stop):
                cb = b.coeffs[j]
                if cb:
                    out[base + j] += ca * cb
        return QSeries(a.scale, lo, n, out, exact)

    def __rmul__(self, other):
        return self.__mul__(other)

    def scalar_mul(self, c) -> "QSeries":
        c = Rat(c)
        if not c:
            return QSeries(self.scale, 0, self.order, [], exact=True)
        return QSeries(self.scale, self.lo, self.order, [c * x for x in self.coeffs], self.exact)

    def shift_t(self, e: int) -> "QSeries":
        """Multiply by t^e (exact monomial shift)."""
        return QSeries(self.scale, self.lo + e, self.order + e, self.coeffs, self.exact)

    def shift(self, qexp) -> "QSeries":
        return self.shift_t(_to_t_exact(qexp, self.scale))

    def mul_binomial_t(self, c, e: int) -> "QSeries":
        """Multiply by (1 + c t^e) in O(len)."""
        c = Rat(c)
        if not c or (self.is_zero() and (self.exact or e >= 0)):
            return self
        if e >= 0:
            n = self.order if not self.exact else max(self.order, self.hi + e)
            lo = self.lo
            hi = min(self.hi + e, n)
            out = [ZERO] * (hi - lo + 1)
            for i, x in enumerate(self.coeffs):
                out[i] += x
                j = i + e
                if lo + j <= hi:
                    out[j] += c * x
            return QSeries(self.scale, lo, n, out, self.exact)
        m = -e
        if self.exact:
            n = self.order
        else:
            n = self.order - m
        lo = self.lo - m
        hi = min(self.hi, n)
        out = [ZERO] * (hi - lo + 1)
        for i, x in enumerate(self.coeffs):
            t = self.lo + i
            if t <= hi:
                out[t - lo] += x
            out[t - m - lo] += c * x
        return QSeries(self.scale, lo, n, out, self.exact)

    def div_binomial_t(self, c, e: int) -> "QSeries":
        """Divide by (1 + c t^e) in O(len); never erodes the trusted order."""
        c = Rat(c)
        if not c or self.is_zero():
            return self
        if e == 0:
            if c == -1:
                raise SingularSpecializationError("division by (1 + c) with c = -1")
            return self.scalar_mul(Rat(1) / (1 + c))
        if e < 0:
            # 1/(1 + c t^-m) = t^m / (c (t^m/c + 1)) with m = -e
            m = -e
            return self.shift_t(m).scalar_mul(Rat(1) / c).div_binomial_t(Rat(1) / c, m)
        n = self.order
        lo = self.lo
        if lo > n:
            return QSeries(self.scale, 0, n, [], False)
        out = [ZERO] * (n - lo + 1)
        for i, x in enumerate(self.coeffs):
            if lo + i <= n:
                out[i] = x
        for t in range(lo + e, n + 1):
            prev = out[t - e - lo]
            if prev:
                out[t - lo] -= c * prev
        return QSeries(self.scale, lo, n, out, False)

    def mul_poly_t(self, terms) -> "QSeries":
        """Multiply by a sparse Laurent polynomial given as [(coeff, t_exp)]."""
        acc = None
        for c, e in terms:
            if not c:
                continue
            part = self.shift_t(e).scalar_mul(c)
            acc = part if acc is None else acc + part
        if acc is None:
            return QSeries(self.scale, 0, self.order, [], self.exact)
        return acc

    def invert(self) -> "QSeries":
        """Reciprocal; trusted order drops to N - 2*lo."""
        if self.is_zero():
            raise SingularSpecializationError("cannot invert the zero series")
        m = self.lo
        u = self.coeffs
        rel = self.order - m
        n_out = self.order - 2 * m
        if len(u) == 1:
            return QSeries(self.scale, -m, n_out, [Rat(1) / u[0]], self.exact)
        inv0 = Rat(1) / u[0]
        v = [ZERO] * (rel + 1)
        v[0] = inv0
        for x in range(1, rel + 1):
            s = ZERO
            for y in range(1, min(x, len(u) - 1) + 1):
                if u[y]:
                    s += u[y] * v[x - y]
            v[x] = -s * inv0 if s else ZERO
        return QSeries(self.scale, -m, n_out, v, False)

    def truncate(self, order) -> "QSeries":
        return self.truncate_t(_to_t(order, self.scale))

    def truncate_t(self, n: int) -> "QSeries":
        """Restrict trust to order n (any n for exact series)."""
        if n > self.order and not self.exact:
            raise TruncationError(f"cannot raise trusted order {self.order} to {n}")
        exact = self.exact and n >= self.hi
        return QSeries(self.scale, self.lo, n, self.coeffs, exact)

    def drop_exact(self) -> "QSeries":
        return QSeries(self.scale, self.lo, self.order, self.coeffs, False)

    # -- exponent substitutions -------------------------------------------

    def substitute_power(self, m) -> "QSeries":
        """q -> q^m for rational m > 0; the scale adapts and is canonicalized."""
        m = rat(m)
        if m <= 0:
            raise ExponentError(f"substitute_power needs m > 0, got {m}")
        p, r = int(m.numerator), int(m.denominator)
        raw_scale = self.scale * r
        order = self.order * p
        g = gcd(raw_scale, abs(order))
        for i, c in enumerate(self.coeffs):
            if c:
                g = gcd(g, abs((self.lo + i) * p))
        g = max(g, 1)
        new_scale = raw_scale // g
        out = {(self.lo + i) * p // g: c for i, c in enumerate(self.coeffs) if c}
        if not out:
            return QSeries(new_scale, 0, order // g, [], self.exact)
        lo2, hi2 = min(out), max(out)
        return QSeries(
            new_scale, lo2, order // g,
            [out.get(t, ZERO) for t in range(lo2, hi2 + 1)], self.exact,
        )

    def rescale(self, new_scale: int) -> "QSeries":
        """Re-express on a finer grid; new_scale must be a multiple of scale."""
        if new_scale == self.scale:
            return self
        if new_scale % self.scale:
            raise ScaleMismatchError(f"cannot rescale {self.scale} -> {new_scale}")
        f = new_scale // self.scale
        out = [ZERO] * ((len(self.coeffs) - 1) * f + 1) if self.coeffs else []
        for i, c in enumerate(self.coeffs):
            out[i * f] = c
        return QSeries(new_scale, self.lo * f, self.order * f, out, self.exact)

    # -- comparisons -------------------------------------------------------

    def first_mismatch(self, other: "QSeries"):
        """First q-exponent where the two trusted windows disagree, or None."""
        a, b = common_scale(self, other)
        if a.exact and b.exact:
            n = max(a.hi, b.hi, a.lo, b.lo)
        else:
            n = min(x.order for x in (a, b) if not x.exact)
        lo = min(a.lo, b.lo, 0)
        for t in range(lo, n + 1):
            ca = a.coeffs[t - a.lo] if a.lo <= t <= a.hi else ZERO
            cb = b.coeffs[t - b.lo] if b.lo <= t <= b.hi else ZERO
            if ca != cb:
                return Rat(t, a.scale)
        return None

    def agrees(self, other: "QSeries") -> bool:
        return self.first_mismatch(other) is None

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        return (
            self.scale == other.scale
            and self.lo == other.lo
            and self.order == other.order
            and self.coeffs == other.coeffs
            and self.exact == other.exact
        )

    def __hash__(self):
        return hash((self.scale, self.lo, self.order, tuple(self.coeffs)))

    def __repr__(self):
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            e = Rat(self.lo + i, self.scale)
            if e == 0:
                parts.append(rat_str(c))
            else:
                cs = "" if c == 1 else ("-" if c == -1 else rat_str(c) + "*")
                es = rat_str(e) if e.denominator == 1 and e >= 0 else f"({rat_str(e)})"
                parts.append(f"{cs}q^{es}")
            if len(parts) >= 8 and i < len(self.coeffs) - 1:
                parts.append("...")
                break
        body = " + ".join(parts).replace("+ -", "- ") if parts else "0"
        tail = "" if self.exact else f" + O(q^{rat_str(Rat(self.order + 1, self.scale))})"
        return f"<{body}{tail}>"


def _to_t(order, scale: int) -> int:
    """q-unit order -> t-unit order (floor; conservative)."""
    if isinstance(order, int):
        return order * scale
    x = rat(order) * scale
    return int(x.numerator) // int(x.denominator)


def _to_t_exact(qexp, scale: int) -> int:
    x = rat(qexp) * scale
    if x.denominator != 1:
        raise ExponentError(f"exponent {qexp} not representable at scale {scale}")
    return int(x.numerator)


def common_scale(a: QSeries, b: QSeries):
    """Lift both series to the lcm of their scales."""
    if a.scale == b.scale:
        return a, b
    s = a.scale * b.scale // gcd(a.scale, b.scale)
    return a.rescale(s), b.rescale(s)


# spec-facing functional aliases
def add(a: QSeries, b: QSeries) -> QSeries:
    return a + b


def mul(a: QSeries, b: QSeries) -> QSeries:
    return a * b


def invert(a: QSeries) -> QSeries:
    return a.invert()


def substitute_power(a: QSeries, m) -> QSeries:
    return a.substitute_power(m)


def coeff(a: QSeries, qexp) -> Rat:
    return a.coeff(qexp)

"""Symbolic term language for pair entries and identity summands.

Expressions denote Laurent series in q depending on an outer index n, an
inner index j, and rational parameters (k, a, y, z, c, d, ...).  Exponents
are quadratic polynomials in (n, j) with rational coefficients; arguments of
Pochhammer symbols are monomials coeff * params^powers * q^exponent.  The
node set is deliberately small so that the syntactic substitutions needed by
the pair combinators (k -> kq, a -> aq, n -> n+delta, and the q -> 1/q dual)
stay exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .errors import (
    DualSubstitutionError,
    ExponentError,
    SingularSpecializationError,
    UnboundParameterError,
)
from .qkernel import QMono, poch, poch_inf, quad_poch_ratio, sqrt_pair_ratio
from .rational import Rat, ZERO, ONE, as_int, floor_div, rat
from .series import QSeries


@dataclass(frozen=True)
class SourceSpan:
    line: int
    column: int
    start: int
    end: int


@dataclass(frozen=True)
class LinForm:
    """c0 + cn*n + cj*j with rational coefficients."""

    c0: Rat = ZERO
    cn: Rat = ZERO
    cj: Rat = ZERO

    def eval(self, n, j) -> Rat:
        return rat(self.c0) + rat(self.cn) * n + rat(self.cj) * j

    def shift_n(self, delta: int) -> "LinForm":
        return LinForm(rat(self.c0) + rat(self.cn) * delta, self.cn, self.cj)

    def is_const(self) -> bool:
        return not self.cn and not self.cj


@dataclass(frozen=True)
class QuadPoly:
    """c0 + cn*n + cj*j + cnn*n^2 + cnj*n*j + cjj*j^2, all rational."""

    c0: Rat = ZERO
    cn: Rat = ZERO
    cj: Rat = ZERO
    cnn: Rat = ZERO
    cnj: Rat = ZERO
    cjj: Rat = ZERO

    def eval(self, n, j) -> Rat:
        return (rat(self.c0) + rat(self.cn) * n + rat(self.cj) * j
                + rat(self.cnn) * n * n + rat(self.cnj) * n * j + rat(self.cjj) * j * j)

    def __add__(self, other):
        o = quad(other)
        return QuadPoly(*(rat(a) + rat(b) for a, b in zip(self._tup(), o._tup())))

    def __neg__(self):
        return QuadPoly(*(-rat(a) for a in self._tup()))

    def scaled(self, c) -> "QuadPoly":
        c = rat(c)
        return QuadPoly(*(c * rat(a) for a in self._tup()))

    def shift_n(self, d: int) -> "QuadPoly":
        c0, cn, cj, cnn, cnj, cjj = (rat(x) for x in self._tup())
        return QuadPoly(c0 + cn * d + cnn * d * d, cn + 2 * cnn * d,
                        cj + cnj * d, cnn, cnj, cjj)

    def _tup(self):
        return (self.c0, self.cn, self.cj, self.cnn, self.cnj, self.cjj)

    def is_const(self) -> bool:
        return not any(rat(x) for x in self._tup()[1:])


def lin(c0=0, n=0, j=0) -> LinForm:
    return LinForm(rat(c0), rat(n), rat(j))


def quad(c0=0, n=0, j=0, nn=0, nj=0, jj=0) -> QuadPoly:
    if isinstance(c0, QuadPoly):
        return c0
    if isinstance(c0, LinForm):
        return QuadPoly(rat(c0.c0), rat(c0.cn), rat(c0.cj))
    return QuadPoly(rat(c0), rat(n), rat(j), rat(nn), rat(nj), rat(jj))


def lin_times_lin(a: LinForm, b: LinForm) -> QuadPoly:
    a0, an, aj = rat(a.c0), rat(a.cn), rat(a.cj)
    b0, bn, bj = rat(b.c0), rat(b.cn), rat(b.cj)
    return QuadPoly(a0 * b0, a0 * bn + an * b0, a0 * bj + aj * b0,
                    an * bn, an * bj + aj * bn, aj * bj)


N = lin(n=1)
J = lin(j=1)


@dataclass(frozen=True)
class Mon:
    """coeff * prod(params^powers) * q^qexp."""

    coeff: Rat
    powers: tuple = ()
    qexp: QuadPoly = QuadPoly()

    def value_coeff(self, bindings) -> Rat:
        v = rat(self.coeff)
        for p, e in self.powers:
            if p not in bindings:
                raise UnboundParameterError(f"parameter '{p}' is not bound")
            b = rat(bindings[p])
            if not b:
                if e < 0:
                    raise SingularSpecializationError(f"parameter '{p}' = 0 in a denominator")
                return ZERO
            v *= b ** e
        return v

    def qexp_at(self, n, j) -> Rat:
        return self.qexp.eval(n, j)

    def times(self, other: "Mon") -> "Mon":
        pw = dict(self.powers)
        for p, e in other.powers:
            pw[p] = pw.get(p, 0) + e
        pw = tuple(sorted((p, e) for p, e in pw.items() if e))
        return Mon(rat(self.coeff) * rat(other.coeff), pw, self.qexp + other.qexp)

    def param_names(self):
        return frozenset(p for p, _ in self.powers)


def mon(coeff=1, qexp=0, **powers) -> Mon:
    pw = tuple(sorted((p, int(e)) for p, e in powers.items() if e))
    return Mon(rat(coeff), pw, quad(qexp))


# --- nodes -----------------------------------------------------------------

@dataclass(frozen=True)
class Const:
    value: Rat
    span: Optional[SourceSpan] = None


@dataclass(frozen=True)
class MonNode:
    m: Mon
    span: Optional[SourceSpan] = None


@dataclass(frozen=True)
class PowLin:
    """base^exponent with a monomial base and an integer-valued linear exponent."""

    base: Mon
    exp: LinForm
    span: Optional[SourceSpan] = None


@dataclass(frozen=True)
class Poch:
    """(arg; q^step)_count."""

    arg: Mon
    step: Rat
    count: LinForm
    span: Optional[SourceSpan] = None


@dataclass(frozen=True)
class PochInf:
    arg: Mon
    step: Rat
    span: Optional[SourceSpan] = None


@dataclass(frozen=True)
class SqrtPairRatio:
    """(1 - P q^{2 idx}) / (1 - P): the conjugate surd pair for sqrt(P)."""

    idx: LinForm
    param: str = "k"
    span: Optional[SourceSpan] = None


@dataclass(frozen=True)
class QuadPochRatio:
    """(1 - q^idx + P q^{2 idx}) / P: collapsed quadratic conjugate pair."""

    idx: LinForm
    param: str = "k"
    span: Optional[SourceSpan] = None


@dataclass(frozen=True)
class Add:
    terms: tuple
    span: Optional[SourceSpan] = None


@dataclass(frozen=True)
class Mul:
    factors: tuple
    span: Optional[SourceSpan] = None


@dataclass(frozen=True)
class Div:
    num: object
    den: object
    span: Optional[SourceSpan] = None


@dataclass(frozen=True)
class Neg:
    x: object
    span: Optional[SourceSpan] = None


@dataclass(frozen=True)
class CaseSplit:
    """if guard == 0 then if_zero else otherwise."""

    guard: LinForm
    if_zero: object
    otherwise: object
    span: Optional[SourceSpan] = None


@dataclass(frozen=True)
class SumOver:
    """Finite inner sum: var from 0 to floor(upper)."""

    var: str
    upper: LinForm
    body: object
    span: Optional[SourceSpan] = None


def add_(*terms):
    return Add(tuple(terms))


def mul_(*factors):
    return Mul(tuple(factors))


def div_(a, b):
    return Div(a, b)


def neg_(a):
    return Neg(a)


def case0(if_zero, otherwise, guard=N):
    return CaseSplit(guard, if_zero, otherwise)


def cnum(v):
    return Const(rat(v))


ONE_NODE = Const(ONE)


# --- evaluation -------------------------------------------------------------

def evaluate(node, bindings, order, scale: int = 1, n: int = 0, j: int = 0) -> QSeries:
    """Evaluate at integer indices (n, j) to a QSeries trusted to `order`."""
    return _sub(node, bindings, _order_t(order, scale), scale, n, j)


def _order_t(order, scale: int) -> int:
    if isinstance(order, int):
        return order * scale
    x = rat(order) * scale
    return floor_div(x)


def _ev(node, b, order_t: int, scale: int, n: int, j: int) -> QSeries:
    if isinstance(node, Const):
        return QSeries(scale, 0, order_t, [node.value], exact=True)
    if isinstance(node, MonNode):
        c = node.m.value_coeff(b)
        if not c:
            return QSeries(scale, 0, order_t, [], exact=True)
        return QSeries(scale, _texp(node.m.qexp_at(n, j), scale, node), order_t, [c], exact=True)
    if isinstance(node, PowLin):
        e = as_int(node.exp.eval(n, j))
        c = node.base.value_coeff(b)
        if not c:
            if e > 0:
                return QSeries(scale, 0, order_t, [], exact=True)
            if e == 0:
                return QSeries(scale, 0, order_t, [ONE], exact=True)
            raise SingularSpecializationError("0 raised to a negative power")
        qe = node.base.qexp_at(n, j) * e
        return QSeries(scale, _texp(qe, scale, node), order_t, [c ** e], exact=True)
    if isinstance(node, Poch):
        cnt = as_int(node.count.eval(n, j))
        arg = QMono(node.arg.value_coeff(b), node.arg.qexp_at(n, j))
        return poch(arg, node.step, cnt, Rat(order_t, scale), scale)
    if isinstance(node, PochInf):
        arg = QMono(node.arg.value_coeff(b), node.arg.qexp_at(n, j))
        return poch_inf(arg, node.step, Rat(order_t, scale), scale)
    if isinstance(node, SqrtPairRatio):
        k = _bound(b, node.param)
        return sqrt_pair_ratio(k, as_int(node.idx.eval(n, j)), Rat(order_t, scale), scale)
    if isinstance(node, QuadPochRatio):
        k = _bound(b, node.param)
        return quad_poch_ratio(k, as_int(node.idx.eval(n, j)), Rat(order_t, scale), scale)
    if isinstance(node, Neg):
        return -_sub(node.x, b, order_t, scale, n, j)
    if isinstance(node, Add):
        acc = None
        for t in node.terms:
            s = _sub(t, b, order_t, scale, n, j)
            acc = s if acc is None else acc + s
        return acc if acc is not None else QSeries(scale, 0, order_t, [], exact=True)
    if isinstance(node, Mul):
        parts = [_sub(t, b, order_t, scale, n, j) for t in node.factors]
        # Exact factors first: folding a full Laurent polynomial into a
        # truncated factor erodes less trust than the reverse order.
        parts.sort(key=lambda s: not s.exact)
        acc = None
        for s in parts:
            acc = s if acc is None else acc * s
        return acc if acc is not None else QSeries(scale, 0, order_t, [ONE], exact=True)
    if isinstance(node, Div):
        return _ev_div(node, b, order_t, scale, n, j)
    if isinstance(node, CaseSplit):
        val = node.guard.eval(n, j)
        return _sub(node.if_zero if val == 0 else node.otherwise, b, order_t, scale, n, j)
    if isinstance(node, SumOver):
        hi = floor_div(node.upper.eval(n, j))
        acc = None
        for i in range(0, hi + 1):
            nn, jj = (i, j) if node.var == "n" else (n, i)
            s = _sub(node.body, b, order_t, scale, nn, jj)
            acc = s if acc is None else acc + s
        return acc if acc is not None else QSeries(scale, 0, order_t, [], exact=True)
    raise TypeError(f"not an expression node: {node!r}")


def _sub(node, b, order_t, scale, n, j):
    ft = as_factored(node, b, n, j)
    if ft is not None:
        return eval_factored(ft, order_t, scale)
    return _ev(node, b, order_t, scale, n, j)


def _ev_div(node: Div, b, order_t, scale, n, j):
    den = _sub(node.den, b, order_t, scale, n, j)
    if den.is_zero():
        raise SingularSpecializationError("division by a series that vanishes to working order")
    need = order_t + 2 * max(den.lo, 0)
    if need > den.order and not den.exact:
        den = _sub(node.den, b, need, scale, n, j)
    inv = den.invert()
    num = _sub(node.num, b, order_t, scale, n, j)
    if inv.lo < 0 and not num.exact:
        num = _sub(node.num, b, order_t - inv.lo, scale, n, j)
    if num.lo < 0 and not inv.exact and inv.order < order_t - num.lo:
        den2 = _sub(node.den, b, need - num.lo, scale, n, j)
        inv = den2.invert()
    return num * inv


def _bound(b, p):
    if p not in b:
        raise UnboundParameterError(f"parameter '{p}' is not bound")
    return rat(b[p])


def _texp(qe: Rat, scale: int, node) -> int:
    x = rat(qe) * scale
    if x.denominator != 1:
        raise ExponentError(f"exponent {qe} needs a finer scale than {scale} in {type(node).__name__}")
    return int(x.numerator)


# --- factored fast path ------------------------------------------------------

@dataclass
class FactoredTerm:
    """coeff * q^qexp * prod num /(prod den) * prod polys.

    num/den entries (c, e) stand for binomials (1 + c q^e) with e != 0;
    polys are short numerator polynomials [(c0, e0), (c1, e1), ...].
    """

    coeff: Rat
    qexp: Rat
    num: list
    den: list
    polys: list

    def times(self, other: "FactoredTerm") -> "FactoredTerm":
        return FactoredTerm(self.coeff * other.coeff, self.qexp + other.qexp,
                            self.num + other.num, self.den + other.den,
                            self.polys + other.polys)

    def inverted(self) -> Optional["FactoredTerm"]:
        if self.polys:
            return None
        if not self.coeff:
            raise SingularSpecializationError("division by zero term")
        return FactoredTerm(ONE / self.coeff, -self.qexp, self.den, self.num, [])


def _ft_const(c) -> FactoredTerm:
    return FactoredTerm(rat(c), ZERO, [], [], [])


def as_factored(node, b, n: int, j: int) -> Optional[FactoredTerm]:
    """Decompose into monomial * binomials / binomials if possible."""
    if isinstance(node, Const):
        return _ft_const(node.value)
    if isinstance(node, MonNode):
        return FactoredTerm(node.m.value_coeff(b), node.m.qexp_at(n, j), [], [], [])
    if isinstance(node, PowLin):
        e = as_int(node.exp.eval(n, j))
        c = node.base.value_coeff(b)
        if not c:
            if e > 0:
                return _ft_const(0)
            if e == 0:
                return _ft_const(1)
            raise SingularSpecializationError("0 raised to a negative power")
        return FactoredTerm(c ** e, node.base.qexp_at(n, j) * e, [], [], [])
    if isinstance(node, Poch):
        cnt = as_int(node.count.eval(n, j))
        c = node.arg.value_coeff(b)
        if not c:
            return _ft_const(1)
        e0 = node.arg.qexp_at(n, j)
        step = rat(node.step)
        ft = _ft_const(1)
        if cnt >= 0:
            exps, denom = [e0 + i * step for i in range(cnt)], False
        else:
            exps, denom = [e0 - i * step for i in range(1, -cnt + 1)], True
        for e in exps:
            if e == 0:
                f = 1 - c
                if denom:
                    if not f:
                        raise SingularSpecializationError("zero factor in a denominator")
                    ft.coeff /= f
                else:
                    ft.coeff *= f
            elif denom:
                ft.den.append((-c, e))
            else:
                ft.num.append((-c, e))
        return ft
    if isinstance(node, SqrtPairRatio):
        k = _bound(b, node.param)
        if k == 1:
            raise SingularSpecializationError("surd pair ratio singular at 1")
        i = as_int(node.idx.eval(n, j))
        if not k or i == 0:
            return _ft_const(1)
        return FactoredTerm(ONE / (1 - k), ZERO, [(-k, rat(2 * i))], [], [])
    if isinstance(node, QuadPochRatio):
        k = _bound(b, node.param)
        if not k:
            raise SingularSpecializationError("conjugate-pair ratio singular at 0")
        i = as_int(node.idx.eval(n, j))
        if i == 0:
            return _ft_const(1)
        return FactoredTerm(ONE / k, ZERO, [], [],
                            [[(ONE, ZERO), (-ONE, rat(i)), (k, rat(2 * i))]])
    if isinstance(node, Neg):
        ft = as_factored(node.x, b, n, j)
        if ft is not None:
            ft.coeff = -ft.coeff
        return ft
    if isinstance(node, Mul):
        acc = _ft_const(1)
        for f in node.factors:
            ft = as_factored(f, b, n, j)
            if ft is None:
                return None
            acc = acc.times(ft)
        return acc
    if isinstance(node, Div):
        fn = as_factored(node.num, b, n, j)
        fd = as_factored(node.den, b, n, j)
        if fn is None or fd is None:
            return None
        fdi = fd.inverted()
        if fdi is None:
            return None
        return fn.times(fdi)
    if isinstance(node, CaseSplit):
        val = node.guard.eval(n, j)
        return as_factored(node.if_zero if val == 0 else node.otherwise, b, n, j)
    return None


def eval_factored(ft: FactoredTerm, order_t: int, scale: int,
                  clip: bool = False) -> QSeries:
    """Exact windowed evaluation: no trusted-order erosion, ever.

    Binomials with negative exponents are rewritten as
    (1 + c q^-m) = c q^-m (1 + q^m / c), so the working window starts at
    the term's true support floor instead of diving and climbing back.
    With clip=True, intermediate growth past order_t is truncated; the
    result then carries trust order_t but stays cheap for deep terms.
    """
    if not ft.coeff:
        return QSeries(scale, 0, order_t, [], exact=True)
    coeff, qexp = ft.coeff, rat(ft.qexp)
    pos = []
    for c, e in ft.num:
        if not c:
            continue
        e = rat(e)
        if e < 0:
            coeff *= c
            qexp += e
            pos.append((ONE / c, -e))
        else:
            pos.append((c, e))
    dens = []
    for c, e in ft.den:
        if not c:
            continue
        e = rat(e)
        if e < 0:
            coeff /= c
            qexp -= e
            dens.append((ONE / c, -e))
        else:
            dens.append((c, e))
    f = QSeries(scale, _texp(qexp, scale, ft), order_t, [coeff], exact=True)
    late_polys = []
    for p in ft.polys:
        if any(rat(e) < 0 for _, e in p):
            f = f.mul_poly_t([(c, _texp(e, scale, ft)) for c, e in p])
        else:
            late_polys.append(p)
    if f.hi > order_t and (pos or late_polys or dens):
        f = f.truncate_t(order_t)
    for c, e in pos:
        f = f.mul_binomial_t(c, _texp(e, scale, ft))
        if clip and f.hi > order_t:
            f = f.truncate_t(order_t)
    for p in late_polys:
        f = f.mul_poly_t([(c, _texp(e, scale, ft)) for c, e in p])
        if clip and f.hi > order_t:
            f = f.truncate_t(order_t)
    for c, e in dens:
        f = f.div_binomial_t(c, _texp(e, scale, ft))
    if not f.exact and f.order > order_t:
        f = f.truncate_t(order_t)
    return f


def eval_factored_deep(ft: FactoredTerm, order_t: int, scale: int) -> QSeries:
    """Clipped eval_factored with the working order lifted over the term's own
    normalized support floor, so legitimately Laurent-deep terms clear the
    runaway-tail guard."""
    lo = rat(ft.qexp)
    for _, e in ft.num:
        e = rat(e)
        if e < 0:
            lo += e
    for _, e in ft.den:
        e = rat(e)
        if e < 0:
            lo -= e
    for p in ft.polys:
        lo += min(rat(e) for _, e in p)
    if lo < 0:
        order_t = max(order_t, -_texp(lo, scale, ft))
    return eval_factored(ft, order_t, scale, clip=True)


def factored_window(ft: FactoredTerm) -> tuple:
    """Exact support bounds (lo, hi) of the numerator part, in q-units."""
    lo = hi = rat(ft.qexp)
    for c, e in ft.num:
        e = rat(e)
        if e < 0:
            lo += e
        else:
            hi += e
    for p in ft.polys:
        exps = [rat(e) for _, e in p]
        lo += min(exps)
        hi += max(exps)
    return lo, hi


def factored_terms(node, b, n: int, j: int = 0) -> Optional[list]:
    """Decompose into a list of FactoredTerms, distributing sums over products.

    Extends as_factored across Add, Neg, Mul, Div and finite SumOver nodes so
    that multi-term sequences still admit exact denominator bookkeeping; None
    when some leaf resists factoring.
    """
    ft = as_factored(node, b, n, j)
    if ft is not None:
        return [ft]
    if isinstance(node, Add):
        out = []
        for t in node.terms:
            part = factored_terms(t, b, n, j)
            if part is None:
                return None
            out.extend(part)
        return out
    if isinstance(node, Neg):
        part = factored_terms(node.x, b, n, j)
        if part is None:
            return None
        for ft in part:
            ft.coeff = -ft.coeff
        return part
    if isinstance(node, Mul):
        acc = [_ft_const(1)]
        for f in node.factors:
            part = factored_terms(f, b, n, j)
            if part is None:
                return None
            acc = [x.times(y) for x in acc for y in part]
        return acc
    if isinstance(node, Div):
        nums = factored_terms(node.num, b, n, j)
        if nums is None:
            return None
        fd = as_factored(node.den, b, n, j)
        if fd is None:
            return None
        fdi = fd.inverted()
        if fdi is None:
            return None
        return [x.times(fdi) for x in nums]
    if isinstance(node, CaseSplit):
        val = node.guard.eval(n, j)
        return factored_terms(node.if_zero if val == 0 else node.otherwise, b, n, j)
    if isinstance(node, SumOver):
        hi = floor_div(node.upper.eval(n, j))
        out = []
        for i in range(0, hi + 1):
            nn, jj = (i, j) if node.var == "n" else (n, i)
            part = factored_terms(node.body, b, nn, jj)
            if part is None:
                return None
            out.extend(part)
        return out
    return None


# --- structural queries ------------------------------------------------------

def params_of(node) -> frozenset:
    out = set()

    def walk(x):
        if isinstance(x, (Const,)):
            return
        if isinstance(x, MonNode):
            out.update(x.m.param_names())
        elif isinstance(x, PowLin):
            out.update(x.base.param_names())
        elif isinstance(x, (Poch, PochInf)):
            out.update(x.arg.param_names())
        elif isinstance(x, (SqrtPairRatio, QuadPochRatio)):
            out.add(x.param)
        elif isinstance(x, Neg):
            walk(x.x)
        elif isinstance(x, Add):
            for t in x.terms:
                walk(t)
        elif isinstance(x, Mul):
            for t in x.factors:
                walk(t)
        elif isinstance(x, Div):
            walk(x.num)
            walk(x.den)
        elif isinstance(x, CaseSplit):
            walk(x.if_zero)
            walk(x.otherwise)
        elif isinstance(x, SumOver):
            walk(x.body)

    walk(node)
    return frozenset(out)


def singular_set(node):
    """Best-effort constraints (param, forbidden_value) read off denominators."""
    out = set()

    def walk(x, in_den):
        if isinstance(x, MonNode):
            if in_den:
                for p, e in x.m.powers:
                    if e > 0:
                        out.add((p, ZERO))
            for p, e in x.m.powers:
                if e < 0:
                    out.add((p, ZERO))
        elif isinstance(x, PowLin):
            for p, e in x.base.powers:
                if e < 0 or (e and (in_den or rat(x.exp.cn) < 0 or rat(x.exp.c0) < 0)):
                    out.add((p, ZERO))
        elif isinstance(x, (Poch, PochInf)):
            if in_den and x.arg.qexp.is_const() and rat(x.arg.qexp.c0) == 0:
                pw = [(p, e) for p, e in x.arg.powers]
                if len(pw) == 1 and abs(pw[0][1]) == 1:
                    p, e = pw[0]
                    val = ONE / rat(x.arg.coeff) if e == 1 else rat(x.arg.coeff)
                    out.add((p, val))
            for p, e in x.arg.powers:
                if e < 0:
                    out.add((p, ZERO))
        elif isinstance(x, SqrtPairRatio):
            out.add((x.param, ONE))
        elif isinstance(x, QuadPochRatio):
            out.add((x.param, ZERO))
        elif isinstance(x, Neg):
            walk(x.x, in_den)
        elif isinstance(x, Add):
            for t in x.terms:
                walk(t, in_den)
        elif isinstance(x, Mul):
            for t in x.factors:
                walk(t, in_den)
        elif isinstance(x, Div):
            walk(x.num, in_den)
            walk(x.den, True)
        elif isinstance(x, CaseSplit):
            walk(x.if_zero, in_den)
            walk(x.otherwise, in_den)
        elif isinstance(x, SumOver):
            walk(x.body, in_den)

    walk(node, False)
    return tuple(sorted(out, key=lambda c: (c[0], str(c[1]))))


# --- syntactic substitutions --------------------------------------------------

def _mon_times_q_pow(m: Mon, param: str) -> Mon:
    """param -> param * q inside a monomial."""
    p = dict(m.powers).get(param, 0)
    if not p:
        return m
    return Mon(m.coeff, m.powers, m.qexp + quad(p))


def subst_param_times_q(node, param: str):
    """Replace param := param * q throughout (exact, syntactic)."""
    f = lambda x: subst_param_times_q(x, param)
    if isinstance(node, Const):
        return node
    if isinstance(node, MonNode):
        return MonNode(_mon_times_q_pow(node.m, param), node.span)
    if isinstance(node, PowLin):
        return PowLin(_mon_times_q_pow(node.base, param), node.exp, node.span)
    if isinstance(node, Poch):
        return Poch(_mon_times_q_pow(node.arg, param), node.step, node.count, node.span)
    if isinstance(node, PochInf):
        return PochInf(_mon_times_q_pow(node.arg, param), node.step, node.span)
    if isinstance(node, SqrtPairRatio):
        if node.param != param:
            return node
        i = node.idx
        return Div(Poch(Mon(ONE, ((param, 1),), quad(1) + _lin_quad(i).scaled(2)), ONE, lin(1)),
                   Poch(Mon(ONE, ((param, 1),), quad(1)), ONE, lin(1)))
    if isinstance(node, QuadPochRatio):
        if node.param != param:
            return node
        i = node.idx
        return Div(Add((Const(ONE),
                        Neg(MonNode(Mon(ONE, (), _lin_quad(i)))),
                        MonNode(Mon(ONE, ((param, 1),), quad(1) + _lin_quad(i).scaled(2))))),
                   MonNode(Mon(ONE, ((param, 1),), quad(1))))
    if isinstance(node, Neg):
        return Neg(f(node.x), node.span)
    if isinstance(node, Add):
        return Add(tuple(f(t) for t in node.terms), node.span)
    if isinstance(node, Mul):
        return Mul(tuple(f(t) for t in node.factors), node.span)
    if isinstance(node, Div):
        return Div(f(node.num), f(node.den), node.span)
    if isinstance(node, CaseSplit):
        return CaseSplit(node.guard, f(node.if_zero), f(node.otherwise), node.span)
    if isinstance(node, SumOver):
        return SumOver(node.var, node.upper, f(node.body), node.span)
    raise TypeError(f"not an expression node: {node!r}")


def _lin_quad(l: LinForm) -> QuadPoly:
    return quad(l)


def shift_n(node, delta: int):
    """Replace n := n + delta throughout."""
    f = lambda x: shift_n(x, delta)
    if isinstance(node, Const):
        return node
    if isinstance(node, MonNode):
        return MonNode(Mon(node.m.coeff, node.m.powers, node.m.qexp.shift_n(delta)), node.span)
    if isinstance(node, PowLin):
        return PowLin(Mon(node.base.coeff, node.base.powers, node.base.qexp.shift_n(delta)),
                      node.exp.shift_n(delta), node.span)
    if isinstance(node, Poch):
        return Poch(Mon(node.arg.coeff, node.arg.powers, node.arg.qexp.shift_n(delta)),
                    node.step, node.count.shift_n(delta), node.span)
    if isinstance(node, PochInf):
        return PochInf(Mon(node.arg.coeff, node.arg.powers, node.arg.qexp.shift_n(delta)),
                       node.step, node.span)
    if isinstance(node, SqrtPairRatio):
        return SqrtPairRatio(node.idx.shift_n(delta), node.param, node.span)
    if isinstance(node, QuadPochRatio):
        return QuadPochRatio(node.idx.shift_n(delta), node.param, node.span)
    if isinstance(node, Neg):
        return Neg(f(node.x), node.span)
    if isinstance(node, Add):
        return Add(tuple(f(t) for t in node.terms), node.span)
    if isinstance(node, Mul):
        return Mul(tuple(f(t) for t in node.factors), node.span)
    if isinstance(node, Div):
        return Div(f(node.num), f(node.den), node.span)
    if isinstance(node, CaseSplit):
        return CaseSplit(node.guard.shift_n(delta), f(node.if_zero), f(node.otherwise), node.span)
    if isinstance(node, SumOver):
        return SumOver(node.var, node.upper.shift_n(delta), f(node.body), node.span)
    raise TypeError(f"not an expression node: {node!r}")


_DUAL_FLIP = ("a", "k")


def _flip_powers(powers, only=_DUAL_FLIP):
    return tuple(sorted((p, -e if p in only else e) for p, e in powers))


def _neg_powers(powers):
    return tuple(sorted((p, -e) for p, e in powers))


def dual_map(node):
    """Exact image under a -> 1/a, k -> 1/k, q -> 1/q."""
    f = dual_map
    if isinstance(node, Const):
        return node
    if isinstance(node, MonNode):
        return MonNode(Mon(node.m.coeff, _flip_powers(node.m.powers), -node.m.qexp), node.span)
    if isinstance(node, PowLin):
        return PowLin(Mon(node.base.coeff, _flip_powers(node.base.powers), -node.base.qexp),
                      node.exp, node.span)
    if isinstance(node, Poch):
        # (A; q^{-s})_m = (-A)^m q^{-s m(m-1)/2} (1/A; q^s)_m  with A the
        # dual image of the argument
        co, pw, qe = node.arg.coeff, node.arg.powers, node.arg.qexp
        if not rat(co):
            return Const(ONE)
        m = node.count
        s = rat(node.step)
        tri = lin_times_lin(m, LinForm(rat(m.c0) - 1, m.cn, m.cj)).scaled(-s / 2)
        return Mul((
            PowLin(Mon(-co, _flip_powers(pw), -qe), m),
            MonNode(Mon(ONE, (), tri)),
            Poch(Mon(ONE / rat(co), _neg_powers(_flip_powers(pw)), qe), node.step, m),
        ), node.span)
    if isinstance(node, PochInf):
        raise DualSubstitutionError("infinite products have no exact q -> 1/q image")
    if isinstance(node, SqrtPairRatio):
        i = node.idx
        return Mul((MonNode(Mon(ONE, (), _lin_quad(i).scaled(-2))),
                    SqrtPairRatio(i, node.param)), node.span)
    if isinstance(node, QuadPochRatio):
        i = node.idx
        iq = _lin_quad(i)
        return Mul((
            MonNode(Mon(ONE, (), iq.scaled(-2))),
            Add((Const(ONE),
                 Neg(MonNode(Mon(ONE, ((node.param, 1),), iq))),
                 MonNode(Mon(ONE, ((node.param, 1),), iq.scaled(2))))),
        ), node.span)
    if isinstance(node, Neg):
        return Neg(f(node.x), node.span)
    if isinstance(node, Add):
        return Add(tuple(f(t) for t in node.terms), node.span)
    if isinstance(node, Mul):
        return Mul(tuple(f(t) for t in node.factors), node.span)
    if isinstance(node, Div):
        return Div(f(node.num), f(node.den), node.span)
    if isinstance(node, CaseSplit):
        return CaseSplit(node.guard, f(node.if_zero), f(node.otherwise), node.span)
    if isinstance(node, SumOver):
        return SumOver(node.var, node.upper, f(node.body), node.span)
    raise TypeError(f"not an expression node: {node!r}")

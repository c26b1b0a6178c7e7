"""q-Pochhammer building blocks on top of QSeries.

Arguments to the symbols are monomials c*q^e (QMono) with exact rational c
and e; everything is expanded by O(len) binomial passes, so a finite product
(x;q^s)_m costs m passes and an infinite product costs order/s passes.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    ExponentError,
    FormalConvergenceError,
    NonConvergentError,
    SingularSpecializationError,
)
from .rational import Rat, rat
from .series import QSeries, _to_t, _to_t_exact


@dataclass(frozen=True)
class QMono:
    """A monomial argument c * q^e."""

    coeff: Rat
    qexp: Rat

    def __post_init__(self):
        object.__setattr__(self, "coeff", rat(self.coeff))
        object.__setattr__(self, "qexp", rat(self.qexp))


def qmono(x) -> QMono:
    if isinstance(x, QMono):
        return x
    if isinstance(x, tuple):
        return QMono(rat(x[0]), rat(x[1]))
    return QMono(rat(x), Rat(0))


def poch(x, step, count: int, order, scale: int = 1) -> QSeries:
    """(x; q^step)_count as a QSeries; negative count uses the standard
    extension (x;q)_{-m} = 1/((x q^{-m}; q)_m)."""
    x = qmono(x)
    step = rat(step)
    f = QSeries.one(order, scale)
    if count >= 0:
        exps = [x.qexp + i * step for i in range(count)]
        invert = False
    else:
        exps = [x.qexp - i * step for i in range(1, -count + 1)]
        invert = True
    if not x.coeff:
        return f
    for e in exps:
        t = _to_t_exact(e, scale)
        if invert:
            if t == 0 and x.coeff == 1:
                raise SingularSpecializationError("(x;q)_count hit a zero factor in a denominator")
            f = f.div_binomial_t(-x.coeff, t)
        else:
            f = f.mul_binomial_t(-x.coeff, t)
    return f


def poch_inf(x, step, order, scale: int = 1) -> QSeries:
    """(x; q^step)_inf truncated to order; needs step > 0 and qexp(x) >= 0."""
    x = qmono(x)
    step = rat(step)
    if step <= 0:
        raise FormalConvergenceError(f"infinite product needs positive step, got {step}")
    if not x.coeff:
        return QSeries.one(order, scale)
    if x.qexp < 0:
        raise FormalConvergenceError(f"infinite product argument {x} has negative q-order")
    n_t = _to_t(order, scale)
    f = QSeries.one(order, scale)
    i = 0
    while True:
        e = x.qexp + i * step
        t = _to_t_exact(e, scale)
        if t > n_t:
            break
        f = f.mul_binomial_t(-x.coeff, t)
        i += 1
    return f.truncate_t(n_t)


def jtp_product(x, order, scale: int = 1) -> QSeries:
    """(-q/x, -qx, q^2; q^2)_inf for x = c*q^e with -1 <= e <= 1, c != 0."""
    x = qmono(x)
    if not x.coeff:
        raise SingularSpecializationError("triple product needs a nonzero argument")
    if not (-1 <= x.qexp <= 1):
        raise FormalConvergenceError(f"triple product argument {x} outside q-order [-1, 1]")
    a = poch_inf(QMono(-x.coeff, 1 + x.qexp), 2, order, scale)
    b = poch_inf(QMono(-1 / x.coeff, 1 - x.qexp), 2, order, scale)
    c = poch_inf(QMono(Rat(1), 2), 2, order, scale)
    return a * b * c


def sqrt_pair_ratio(k, idx: int, order, scale: int = 1) -> QSeries:
    """(1 - k q^{2 idx}) / (1 - k) without introducing surds."""
    k = rat(k)
    if k == 1:
        raise SingularSpecializationError("(1 - k q^{2n})/(1 - k) is singular at k = 1")
    num = QSeries.from_terms({0: 1}, order, scale, exact=True)
    if k:
        num = num + QSeries.monomial(-k, 2 * idx, order, scale)
    return num.scalar_mul(Rat(1) / (1 - k))


def quad_poch_ratio(k, idx: int, order, scale: int = 1) -> QSeries:
    """(1 - q^idx + k q^{2 idx}) / k, the collapsed conjugate-pair ratio."""
    k = rat(k)
    if not k:
        raise SingularSpecializationError("conjugate-pair ratio is singular at k = 0")
    if idx == 0:
        return QSeries.one(order, scale)
    terms = {}
    for c, e in ((Rat(1), 0), (Rat(-1), idx), (k, 2 * idx)):
        terms[e] = terms.get(e, Rat(0)) + c
    return QSeries.from_terms(terms, order, scale, exact=True).scalar_mul(Rat(1) / k)


def hyper_sum(term, n_max=None, bindings=None, order=20, scale: int = 1,
              stop_window: int = 5, return_info: bool = False):
    """Sum term(n) for n >= 0.

    `term` is a callable n -> QSeries or an expression node (evaluated with
    `bindings`).  With n_max=None the sum runs adaptively: it stops once
    `stop_window` consecutive terms start beyond the target order, and raises
    NonConvergentError when the hard budget is exhausted first.
    """
    if not callable(term):
        from .expr import evaluate as _eval
        expr_node = term
        term = lambda n: _eval(expr_node, bindings or {}, order, scale, n=n)
    n_t = _to_t(order, scale)
    acc = QSeries(scale, 0, n_t, [], exact=False)
    budget = n_max if n_max is not None else 4 * max(n_t // scale, 1) + 64
    silent = 0
    n = 0
    last_used = 0
    while True:
        if n_max is not None and n > n_max:
            break
        if n > budget:
            raise NonConvergentError(
                f"sum did not stabilize within {budget} terms at order {order}")
        t = term(n)
        if t.is_zero() or t.lo > n_t:
            silent += 1
        else:
            silent = 0
            last_used = n
            acc = acc + t
        if n_max is None and silent >= stop_window:
            break
        n += 1
    if return_info:
        return acc, last_used
    return acc


def double_hyper_sum(term, n_max=None, j_max=None, bindings=None, order=20,
                     scale: int = 1, stop_window: int = 3,
                     return_info: bool = False):
    """Sum term(n, j) over the quarter lattice n, j >= 0.

    `term` is a callable (n, j) -> QSeries or an expression node in the two
    indices.  Cells are scanned by anti-diagonals n + j = m, so kernels with
    quadratic exponent growth terminate; with both caps given the rectangle
    is summed exactly, otherwise the scan stops once `stop_window` consecutive
    anti-diagonals contribute nothing below the target order and raises
    NonConvergentError when the hard budget is exhausted first.
    """
    if not callable(term):
        from .expr import evaluate as _eval
        expr_node = term
        term = lambda n, j: _eval(expr_node, bindings or {}, order, scale, n=n, j=j)
    n_t = _to_t(order, scale)
    acc = QSeries(scale, 0, n_t, [], exact=False)
    capped = n_max is not None and j_max is not None
    budget = n_max + j_max if capped else 4 * max(n_t // scale, 1) + 64
    silent = 0
    used_n = used_j = 0
    m = 0
    while True:
        if m > budget:
            if capped:
                break
            raise NonConvergentError(
                f"double sum did not stabilize within {budget} anti-diagonals at order {order}")
        live = False
        for j in range(m + 1):
            n = m - j
            if n_max is not None and n > n_max:
                continue
            if j_max is not None and j > j_max:
                continue
            t = term(n, j)
            if t.is_zero() or t.lo > n_t:
                continue
            live = True
            used_n = max(used_n, n)
            used_j = max(used_j, j)
            acc = acc + t
        if live:
            silent = 0
        elif not capped:
            silent += 1
            if silent >= stop_window:
                break
        m += 1
    if return_info:
        return acc, (used_n, used_j)
    return acc

"""The built-in identity catalog: sum-side builders paired with closed forms.

Each case records the left side as a single sum, a double sum, or a finite
transform instance, and the right side as an expression tree (products of
infinite pochhammers, sums of such, or the literal zero for the vanishing
cases).  `case_sides` expands both sides at one parameter binding so the
verification layer can compare trusted coefficients exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .errors import SingularSpecializationError
from .expr import (
    J, N, ONE_NODE, MonNode, Poch, PochInf, PowLin, QuadPochRatio,
    SqrtPairRatio, add_, case0, cnum, div_, eval_factored_deep, evaluate,
    factored_terms, lin, mon, mul_, quad,
)
from .pairs import Constraint, PairSpec
from .qkernel import double_hyper_sum, hyper_sum
from .rational import ONE, Rat, ZERO, rat
from .series import QSeries, _to_t
from .transforms import fbt1_sides

_H = Rat(1, 2)
_SP = SqrtPairRatio(N)
_QR = QuadPochRatio(N)
_PK = Poch(mon(1, k=1), ONE, N)
_PQ = Poch(mon(1, qexp=1), ONE, N)
_SGN_N = PowLin(mon(-1), N)
_SGN_J = PowLin(mon(-1), J)


def _m(qexp, **powers):
    return MonNode(mon(1, qexp=qexp, **powers))


def _pinf(coeff=1, qexp=0, step=1, **powers):
    return PochInf(mon(coeff, qexp=qexp, **powers), rat(step))


def _c(*pairs):
    return tuple(Constraint(p, rat(v)) for p, v in pairs)


_K1 = _c(("k", 1))
_K01 = _c(("k", 0), ("k", 1))


# --- left-side shapes ---------------------------------------------------------

@dataclass(frozen=True)
class SingleSum:
    """Sum of the body expression over n >= 0."""

    body: object


@dataclass(frozen=True)
class DoubleSum:
    """Sum of the body expression over the quarter lattice n, j >= 0."""

    body: object


@dataclass(frozen=True)
class FiniteTransform:
    """Both sides come from one finite-transform instance of a pair."""

    pair: PairSpec
    n_cap: int


@dataclass(frozen=True)
class IdentityCase:
    """One catalog equality between a sum and a closed form.

    sampled lists the parameters the verifier draws from its pool; fixed
    supplies the remaining binding entries; sample_sets, when nonempty,
    replaces pool sampling with explicit bindings.  rhs is None only for
    FiniteTransform cases, whose engine produces both sides itself.
    """

    case_id: str
    lhs: object
    rhs: object = None
    constraints: tuple = ()
    sampled: tuple = ("k",)
    fixed: tuple = ()
    sample_sets: tuple = ()
    default_order: int = 40
    scale: int = 1
    note: str = ""


# --- expansion ----------------------------------------------------------------

def _cell(body, b, o_t: int, s: int, n: int, j: int = 0) -> QSeries:
    """One summand as a series, preferring clipped factored evaluation."""
    parts = factored_terms(body, b, n, j)
    if parts is None:
        return evaluate(body, b, Rat(o_t, s), s, n=n, j=j)
    acc = QSeries(s, 0, o_t, [], exact=True)
    for p in parts:
        acc = acc + eval_factored_deep(p, o_t, s)
    return acc


def full_binding(case: IdentityCase, binding=None) -> dict:
    """The case's fixed values overlaid with the caller's, all rational."""
    b = dict(case.fixed)
    b.update(binding or {})
    return {p: rat(v) for p, v in b.items()}


def case_sides(case: IdentityCase, binding=None, order=None,
               n_max=None, j_max=None):
    """Expand both sides at one binding.

    Returns (lhs, rhs, terms_used) with both series trusted at least to
    `order` and terms_used = {"n": ..., "j": ...} recording how far the sums
    actually ran.  Bindings violating the case constraints raise
    SingularSpecializationError rather than returning wrong series.
    """
    order = case.default_order if order is None else order
    s = case.scale
    b = full_binding(case, binding)
    for c in case.constraints:
        if not c.ok(b):
            raise SingularSpecializationError(
                f"case {case.case_id} needs {c.param} != {c.value}")
    if isinstance(case.lhs, FiniteTransform):
        cap = case.lhs.n_cap if n_max is None else n_max
        sides = fbt1_sides(case.lhs.pair, b, N=cap, order=order)
        return sides.lhs, sides.rhs, {"n": cap, "j": None}
    o_t = _to_t(order, s)
    rhs = evaluate(case.rhs, b, order, s)
    body = case.lhs.body
    if isinstance(case.lhs, SingleSum):
        lhs, used = hyper_sum(lambda n: _cell(body, b, o_t, s, n),
                              n_max=n_max, order=order, scale=s,
                              return_info=True)
        return lhs, rhs, {"n": used, "j": None}
    lhs, (un, uj) = double_hyper_sum(
        lambda n, j: _cell(body, b, o_t, s, n, j),
        n_max=n_max, j_max=j_max, order=order, scale=s, return_info=True)
    return lhs, rhs, {"n": un, "j": uj}


# --- the cases ----------------------------------------------------------------

def _q12pairpr():
    body = div_(mul_(SqrtPairRatio(lin(n=2)), Poch(mon(1, k=1), ONE, lin(n=2)),
                     _m(quad(nn=2, n=-1))),
                Poch(mon(1, qexp=1), ONE, lin(n=2)))
    rhs = div_(_pinf(1, 2, 2, k=1), _pinf(1, 1, 2))
    return IdentityCase("q1/2pairpr", SingleSum(body), rhs, constraints=_K1,
                        note="half-shifted pair under the k-weighted limit")


def _q12pairpr2():
    body = div_(mul_(_SP, _PK, _SGN_N, _m(quad(nn=_H, n=-_H))), _PQ)
    return IdentityCase("q1/2pairpr2", SingleSum(body), cnum(0),
                        constraints=_K1, note="vanishing alternating sum")


def _q12pairpr3():
    body = div_(mul_(SqrtPairRatio(lin(n=2)), Poch(mon(-1, qexp=1), 2, N),
                     Poch(mon(1, k=1), ONE, lin(n=2)), _m(quad(nn=1, n=-1))),
                mul_(Poch(mon(-1, k=1, qexp=1), 2, N),
                     Poch(mon(1, qexp=1), ONE, lin(n=2))))
    rhs = div_(mul_(_pinf(1, 2, 2, k=1), _pinf(-1, 0, 2)),
               mul_(_pinf(-1, 1, 2, k=1), _pinf(1, 1, 2)))
    return IdentityCase("q1/2pairpr3", SingleSum(body), rhs, constraints=_K1,
                        note="half-shifted pair, second limiting transform")


def _half_shift_pair() -> PairSpec:
    """The pair at a = 1 whose beta carries the collapsed conjugate ratio."""
    alpha = case0(ONE_NODE, mul_(_SGN_N, _m(quad(nn=_H, n=-Rat(3, 2))),
                                 add_(ONE_NODE, _m(quad(n=3)))))
    beta = div_(mul_(_QR, _PK, PowLin(mon(-1, k=1), N),
                     _m(quad(nn=_H, n=-Rat(3, 2)))), _PQ)
    return PairSpec("q1/2pair", alpha, beta, a_value=mon(1), k_free=True,
                    constraints=_K01,
                    note="half-shifted pair behind the finite corollaries")


def _cor3eq1():
    return IdentityCase(
        "cor3eq1", FiniteTransform(_half_shift_pair(), 5), None,
        constraints=_K01, fixed=(("y", rat(2)), ("z", rat(7))),
        note="finite transform of the half-shifted pair, both sides as sums")


def _cor3eq2():
    body = div_(mul_(_SP, _QR, _PK, Poch(mon(1, qexp=1), 2, N),
                     PowLin(mon(1, k=1), N), _m(quad(nn=_H, n=-Rat(3, 2)))),
                mul_(_PQ, Poch(mon(1, k=2, qexp=1), 2, N)))
    rhs = mul_(add_(ONE_NODE, MonNode(mon(1, k=1))), _m(quad(-1)),
               div_(_pinf(1, 2, 2, k=2), _pinf(1, 1, 2, k=2)))
    return IdentityCase("cor3eq2", SingleSum(body), rhs, constraints=_K01,
                        note="literal reading, prefactor (1 + k)/q as printed")


def _cor3eq3():
    body = div_(mul_(_SP, _QR, _PK, PowLin(mon(-1, k=1), N),
                     _m(quad(nn=Rat(3, 2), n=-Rat(3, 2)))), _PQ)
    return IdentityCase("cor3eq3", SingleSum(body), cnum(0), constraints=_K01,
                        note="vanishing specialization of the finite transform")


def _cor3eq4():
    body = div_(mul_(_SP, _QR, _PK, Poch(mon(1, qexp=_H), ONE, N),
                     PowLin(mon(1, k=1), N), _m(quad(nn=1, n=-Rat(3, 2)))),
                mul_(Poch(mon(1, k=1, qexp=_H), ONE, N), _PQ))
    rhs = mul_(_m(quad(-_H)), div_(_pinf(1, 1, 1, k=1), _pinf(1, _H, 1, k=1)))
    return IdentityCase("cor3eq4", SingleSum(body), rhs, constraints=_K01,
                        default_order=30, scale=2,
                        note="square-root argument instance, scale 2")


def _6phi5():
    body = div_(
        mul_(SqrtPairRatio(N, "a"), Poch(mon(1, a=1), ONE, N),
             Poch(mon(1, b=1), ONE, N), Poch(mon(1, c=1), ONE, N),
             Poch(mon(1, d=1), ONE, N),
             PowLin(mon(1, a=1, b=-1, c=-1, d=-1, qexp=1), N)),
        mul_(_PQ, Poch(mon(1, a=1, b=-1, qexp=1), ONE, N),
             Poch(mon(1, a=1, c=-1, qexp=1), ONE, N),
             Poch(mon(1, a=1, d=-1, qexp=1), ONE, N)))
    rhs = div_(
        mul_(_pinf(1, 1, 1, a=1), _pinf(1, 1, 1, a=1, b=-1, c=-1),
             _pinf(1, 1, 1, a=1, b=-1, d=-1), _pinf(1, 1, 1, a=1, c=-1, d=-1)),
        mul_(_pinf(1, 1, 1, a=1, b=-1), _pinf(1, 1, 1, a=1, c=-1),
             _pinf(1, 1, 1, a=1, d=-1),
             _pinf(1, 1, 1, a=1, b=-1, c=-1, d=-1)))
    sets = (
        (("a", rat("1/2")), ("b", rat(3)), ("c", rat(5)), ("d", rat(7))),
        (("a", rat(2)), ("b", rat("1/3")), ("c", rat(-2)), ("d", rat(5))),
        (("a", rat("1/4")), ("b", rat(-3)), ("c", rat(2)), ("d", rat(-5))),
    )
    return IdentityCase("6phi5eq", SingleSum(body), rhs,
                        constraints=_c(("a", 1), ("b", 0), ("c", 0), ("d", 0)),
                        sampled=(), sample_sets=sets,
                        note="closed-form very-well-poised summation")


def _jtp():
    body = case0(ONE_NODE, mul_(_m(quad(nn=1)),
                                add_(PowLin(mon(1, x=1), N),
                                     PowLin(mon(1, x=-1), N))))
    rhs = mul_(_pinf(-1, 1, 2, x=-1), _pinf(-1, 1, 2, x=1), _pinf(1, 2, 2))
    return IdentityCase("JTP", SingleSum(body), rhs, constraints=_c(("x", 0)),
                        sampled=("x",),
                        note="bilateral theta sum folded over n and -n")


def _rr1():
    body = div_(_m(quad(nn=1)), _PQ)
    rhs = div_(ONE_NODE, mul_(_pinf(1, 1, 5), _pinf(1, 4, 5)))
    return IdentityCase("RR1", SingleSum(body), rhs, sampled=(),
                        note="classical mod 5 sum-product identity")


def _b12pairpr3():
    body = div_(
        mul_(SqrtPairRatio(lin(n=1, j=1)), add_(ONE_NODE, _m(quad(j=1))),
             _SGN_J, _PK, Poch(mon(1, k=1), ONE, lin(n=1, j=2)),
             _m(quad(nn=1, nj=2, jj=Rat(5, 2), j=-_H))),
        mul_(_PQ, Poch(mon(1, qexp=1), ONE, lin(n=1, j=2))))
    rhs = add_(div_(_pinf(1, 1, 1, k=1), mul_(_pinf(1, 1, 5), _pinf(1, 4, 5))),
               div_(_pinf(1, 1, 1, k=1), _pinf(1, 1, 1)))
    return IdentityCase("B1/2pairpr3", DoubleSum(body), rhs, constraints=_K1,
                        note="doubled theta weight keeps the j = 0 slice twice")


def _rseq(s_num, s_den, r_num, r_den):
    s, r = Rat(s_num, s_den), Rat(r_num, r_den)
    body = div_(
        mul_(SqrtPairRatio(lin(n=1, j=1)), add_(ONE_NODE, _m(quad(j=2 * r))),
             _SGN_J, _PK, Poch(mon(1, k=1), ONE, lin(n=1, j=2)),
             _m(quad(nn=1, nj=2, jj=s, j=-r))),
        mul_(_PQ, Poch(mon(1, qexp=1), ONE, lin(n=1, j=2))))
    rhs = add_(div_(mul_(_pinf(1, 1, 1, k=1), _pinf(1, s - r, 2 * s),
                         _pinf(1, s + r, 2 * s), _pinf(1, 2 * s, 2 * s)),
                    _pinf(1, 1, 1)),
               div_(_pinf(1, 1, 1, k=1), _pinf(1, 1, 1)))
    scale = 1 if (s - r).denominator == 1 else 2
    name = f"rseq({rat_pretty(s)},{rat_pretty(r)})"
    return IdentityCase(name, DoubleSum(body), rhs, constraints=_K1,
                        default_order=40 if scale == 1 else 30, scale=scale,
                        note="theta-weighted double sum at "
                             f"(s, r) = ({rat_pretty(s)}, {rat_pretty(r)})")


def rat_pretty(x: Rat) -> str:
    return str(x.numerator) if x.denominator == 1 else \
        f"{x.numerator}/{x.denominator}"


def _wpeq4b1prime():
    body = div_(
        mul_(SqrtPairRatio(lin(n=1, j=1)), Poch(mon(1, k=1, a=-1), ONE, N),
             Poch(mon(1, k=1), ONE, lin(n=1, j=2)),
             Poch(mon(1, qexp=quad(j=1), y=1), ONE, N),
             Poch(mon(1, qexp=quad(j=1), z=1), ONE, N),
             Poch(mon(1, a=1, y=-1, qexp=1), ONE, J),
             Poch(mon(1, a=1, z=-1, qexp=1), ONE, J),
             PowLin(mon(1, a=1, y=-1, z=-1, qexp=1), N), _m(quad(jj=1))),
        mul_(_PQ, Poch(mon(1, a=1, qexp=1), ONE, lin(n=1, j=2)),
             Poch(mon(1, k=1, y=-1, qexp=1), ONE, lin(n=1, j=1)),
             Poch(mon(1, k=1, z=-1, qexp=1), ONE, lin(n=1, j=1)),
             Poch(mon(1, qexp=1), ONE, J)))
    pref = div_(
        mul_(_pinf(1, 1, 1, k=1), _pinf(1, 1, 1, k=1, y=-1, z=-1),
             _pinf(1, 1, 1, a=1, y=-1), _pinf(1, 1, 1, a=1, z=-1)),
        mul_(_pinf(1, 1, 1, k=1, y=-1), _pinf(1, 1, 1, k=1, z=-1),
             _pinf(1, 1, 1, a=1), _pinf(1, 1, 1, a=1, y=-1, z=-1)))
    rhs = div_(pref, mul_(_pinf(1, 1, 5), _pinf(1, 4, 5)))
    return IdentityCase(
        "wpeq4B1prime", DoubleSum(body), rhs,
        constraints=_c(("k", 1), ("a", 0), ("y", 0), ("z", 0)),
        fixed=(("a", rat(1)), ("y", rat(2)), ("z", rat(3))),
        note="iterated kernel with shifted slot arguments; rational a, y, z "
             "keep the driver's q-order positive")


def _s111wpwbl():
    body = div_(mul_(_SP, _PK, _SGN_N, PowLin(mon(1, k=1), N),
                     _m(quad(nn=Rat(3, 2), n=-_H))), _PQ)
    return IdentityCase("S111WPWBL", SingleSum(body), _pinf(1, 1, 1, k=1),
                        constraints=_K1,
                        note="first multiparameter pair, first limit")


def _s111wptbl():
    body = div_(mul_(SqrtPairRatio(lin(n=2)), Poch(mon(-1, qexp=1), 2, N),
                     Poch(mon(1, k=1), 2, N), _SGN_N, PowLin(mon(1, k=1), N),
                     _m(quad(nn=2, n=-1))),
                mul_(Poch(mon(-1, k=1, qexp=1), 2, N),
                     Poch(mon(1, qexp=2), 2, N)))
    rhs = div_(_pinf(1, 2, 2, k=1), _pinf(-1, 1, 2, k=1))
    return IdentityCase("S111WPTBL", SingleSum(body), rhs, constraints=_K1,
                        note="first multiparameter pair, second limit")


def _s111wpssbl():
    body = div_(mul_(_SP, Poch(mon(-1), ONE, N), _PK, _SGN_N,
                     PowLin(mon(1, k=1), N), _m(quad(nn=1))),
                mul_(Poch(mon(-1, k=1, qexp=1), ONE, N), _PQ))
    rhs = div_(_pinf(1, 1, 1, k=1), _pinf(-1, 1, 1, k=1))
    return IdentityCase("S111WPSSBL", SingleSum(body), rhs, constraints=_K1,
                        note="first multiparameter pair, symmetric limit")


def _e111wpwbl():
    body = div_(mul_(_SP, Poch(mon(1, k=2), 2, N), _SGN_N, _m(quad(nn=1))),
                Poch(mon(1, qexp=2), 2, N))
    rhs = mul_(_pinf(1, 1, 1, k=1), _pinf(1, 1, 2))
    return IdentityCase("E111WPWBL", SingleSum(body), rhs, constraints=_K1,
                        note="even multiparameter pair, first limit")


def _e111wptbl():
    body = div_(mul_(SqrtPairRatio(lin(n=2)), Poch(mon(-1, qexp=1), 2, N),
                     Poch(mon(1, k=2), 4, N), _SGN_N, _m(quad(nn=1))),
                mul_(Poch(mon(-1, k=1, qexp=1), 2, N),
                     Poch(mon(1, qexp=4), 4, N)))
    rhs = div_(mul_(_pinf(1, 2, 2, k=1), _pinf(1, 1, 1)),
               mul_(_pinf(-1, 1, 2, k=1), _pinf(1, 4, 4)))
    return IdentityCase("E111WPTBL", SingleSum(body), rhs, constraints=_K1,
                        note="even multiparameter pair, second limit")


def _js111wpwbl():
    body = div_(mul_(SqrtPairRatio(lin(n=2)), Poch(mon(1, k=1), ONE, lin(n=2)),
                     _m(quad(nn=2, n=-1))),
                Poch(mon(1, qexp=1), ONE, lin(n=2)))
    rhs = div_(_pinf(1, 2, 2, k=1), _pinf(1, 1, 2))
    return IdentityCase("JS111WPWBL", SingleSum(body), rhs, constraints=_K1,
                        note="odd-even multiparameter pair, first limit; "
                             "same display as q1/2pairpr")


def _js111wptbl():
    body = div_(mul_(SqrtPairRatio(lin(n=2)), Poch(mon(-1, qexp=1), 2, N),
                     Poch(mon(1, k=1), ONE, lin(n=2)), _m(quad(nn=1, n=-1))),
                mul_(Poch(mon(-1, k=1, qexp=1), 2, N),
                     Poch(mon(1, qexp=1), ONE, lin(n=2))))
    rhs = div_(mul_(_pinf(1, 2, 2, k=1), _pinf(-1, 0, 2)),
               mul_(_pinf(-1, 1, 2, k=1), _pinf(1, 1, 2)))
    return IdentityCase("JS111WPTBL", SingleSum(body), rhs, constraints=_K1,
                        note="odd-even multiparameter pair, second limit; "
                             "same display as q1/2pairpr3")


def _wprr1():
    body = div_(
        mul_(SqrtPairRatio(lin(n=1, j=1)),
             _m(quad(nn=1, nj=3, jj=Rat(5, 2), j=-_H)), _SGN_J,
             PowLin(mon(1, k=1), J), _PK, Poch(mon(1, k=1), ONE, lin(n=1, j=1))),
        mul_(Poch(mon(1, qexp=1), ONE, J), _PQ))
    rhs = div_(_pinf(1, 1, 1, k=1), mul_(_pinf(1, 1, 5), _pinf(1, 4, 5)))
    return IdentityCase("WPRR1", DoubleSum(body), rhs, constraints=_K1,
                        note="k-deformed mod 5 identity; k = 0 gives RR1")


def _wpgg():
    body = div_(
        mul_(SqrtPairRatio(lin(n=2, j=2)), PowLin(mon(-1, k=1), J),
             _m(quad(nn=1, nj=4, jj=4, j=-1)),
             Poch(mon(-1, qexp=1), 2, lin(n=1, j=1)), Poch(mon(1, k=1), 2, N),
             Poch(mon(1, k=1), 2, lin(n=1, j=1))),
        mul_(Poch(mon(-1, k=1, qexp=1), 2, lin(n=1, j=1)),
             Poch(mon(1, qexp=2), 2, J), Poch(mon(1, qexp=2), 2, N)))
    rhs = div_(_pinf(1, 2, 2, k=1),
               mul_(_pinf(-1, 1, 2, k=1), _pinf(1, 1, 8), _pinf(1, 4, 8),
                    _pinf(1, 7, 8)))
    return IdentityCase("WPGG", DoubleSum(body), rhs, constraints=_K1,
                        note="k-deformed mod 8 identity")


def _mod7():
    body = div_(
        mul_(SqrtPairRatio(lin(n=2, j=2)), Poch(mon(1, k=1), 2, lin(n=1, j=2)),
             _SGN_N, PowLin(mon(1, k=1), N), _m(quad(nn=3, n=-1, nj=4, jj=2))),
        mul_(Poch(mon(1, qexp=2), 2, J), Poch(mon(-1, qexp=1), ONE, lin(j=2)),
             Poch(mon(1, qexp=2), 2, N)))
    rhs = div_(mul_(_pinf(1, 2, 2, k=1), _pinf(1, 3, 7), _pinf(1, 4, 7),
                    _pinf(1, 7, 7)), _pinf(1, 2, 2))
    return IdentityCase("mod7", DoubleSum(body), rhs, constraints=_K1,
                        note="k-deformed mod 7 identity")


def _mod8():
    body = div_(
        mul_(SqrtPairRatio(lin(n=2, j=2)), Poch(mon(1, k=1), 2, lin(n=1, j=2)),
             Poch(mon(1, k=1, qexp=1), 2, lin(n=1, j=1)),
             Poch(mon(1, qexp=1), 2, J), _SGN_J,
             _m(quad(nn=2, n=-1, nj=2, jj=1))),
        mul_(Poch(mon(1, qexp=2), 2, J), Poch(mon(1, qexp=1), 2, lin(n=1, j=1)),
             Poch(mon(1, k=1, qexp=1), 2, J), Poch(mon(1, qexp=2), 2, N)))
    rhs = div_(mul_(_pinf(1, 2, 2, k=1), _pinf(-1, 3, 8), _pinf(-1, 5, 8),
                    _pinf(1, 8, 8)), _pinf(1, 2, 2))
    return IdentityCase("mod8", DoubleSum(body), rhs, constraints=_K1,
                        note="k-deformed mod 8 companion identity")


def _mod9():
    body = div_(
        mul_(SqrtPairRatio(lin(n=3, j=3)), Poch(mon(1, k=1), 3, lin(n=1, j=2)),
             Poch(mon(1, qexp=1), ONE, lin(j=3)), _SGN_N,
             PowLin(mon(1, k=1), N),
             _m(quad(nn=Rat(9, 2), n=-Rat(3, 2), nj=6, jj=3))),
        mul_(Poch(mon(1, qexp=3), 3, N), Poch(mon(1, qexp=3), 3, lin(j=2)),
             Poch(mon(1, qexp=3), 3, J)))
    rhs = div_(mul_(_pinf(1, 3, 3, k=1), _pinf(1, 4, 9), _pinf(1, 5, 9),
                    _pinf(1, 9, 9)), _pinf(1, 3, 3))
    return IdentityCase("mod9", DoubleSum(body), rhs, constraints=_K1,
                        note="k-deformed mod 9 identity")


def _mod14():
    body = div_(
        mul_(SqrtPairRatio(lin(n=1, j=1)), Poch(mon(1, k=1), ONE, lin(n=1, j=2)),
             _SGN_N, PowLin(mon(1, k=1), N),
             _m(quad(nn=Rat(3, 2), n=-_H, nj=2, jj=1))),
        mul_(Poch(mon(1, qexp=1), 2, J), Poch(mon(1, qexp=1), ONE, J), _PQ))
    rhs = div_(mul_(_pinf(1, 1, 1, k=1), _pinf(1, 6, 14), _pinf(1, 8, 14),
                    _pinf(1, 14, 14)), _pinf(1, 1, 1))
    return IdentityCase("mod14", DoubleSum(body), rhs, constraints=_K1,
                        note="k-deformed mod 14 identity")


def _build():
    return (
        _q12pairpr(), _q12pairpr2(), _q12pairpr3(),
        _cor3eq1(), _cor3eq2(), _cor3eq3(), _cor3eq4(),
        _6phi5(), _jtp(), _rr1(),
        _b12pairpr3(),
        _rseq(5, 2, 1, 2), _rseq(3, 1, 1, 1), _rseq(2, 1, 1, 2),
        _wpeq4b1prime(),
        _s111wpwbl(), _s111wptbl(), _s111wpssbl(),
        _e111wpwbl(), _e111wptbl(),
        _js111wpwbl(), _js111wptbl(),
        _wprr1(), _wpgg(),
        _mod7(), _mod8(), _mod9(), _mod14(),
    )


_CASES = {c.case_id: c for c in _build()}


def identity_names():
    """All stable identity ids, sorted."""
    return tuple(sorted(_CASES))


def identity_case(case_id: str) -> IdentityCase:
    """Look up a catalog identity by its stable id."""
    if case_id not in _CASES:
        raise KeyError(f"unknown identity {case_id!r}")
    return _CASES[case_id]

"""The built-in pair catalog, keyed by stable public names."""

from __future__ import annotations

from dataclasses import replace

from .expr import (
    J, N, ONE_NODE, Poch, MonNode, PowLin, SqrtPairRatio, SumOver,
    add_, case0, cnum, div_, lin, mon, mul_, neg_, quad,
)
from .pairs import (
    Constraint, PairSpec, _auto_constraints, MULTIPARAM_FAMILIES,
    SUPPORTED_TRIPLES, multiparam_pair,
)
from .rational import ONE, Rat, ZERO, rat

_SIGN = PowLin(mon(-1), N)
_PQ = Poch(mon(1, qexp=1), ONE, N)
_PQ2 = Poch(mon(1, qexp=2), 2, N)
_PK = Poch(mon(1, k=1), ONE, N)
_PK2 = Poch(mon(1, k=2), 2, N)
_H = Rat(1, 2)


def _m(qexp, **powers):
    return MonNode(mon(1, qexp=qexp, **powers))


def _pair(name, alpha, beta, **kw):
    """Wrap both sequences in the implicit n = 0 case split and finish up."""
    alpha = case0(ONE_NODE, alpha)
    beta = case0(ONE_NODE, beta)
    kw.setdefault("constraints", _auto_constraints(alpha, beta))
    return PairSpec(name, alpha, beta, **kw)


def _e7prime():
    alpha = div_(mul_(_SIGN, add_(_m(quad(n=-1)), neg_(_m(quad(1, n=1))))),
                 Poch(mon(1, qexp=1), ONE, lin(1)))
    beta = mul_(_SIGN, _m(quad(n=-1)), div_(_PK2, _PQ2))
    return _pair("E7prime", alpha, beta, a_value=mon(1, qexp=1), k_free=True)


def _newwp(name="newwp"):
    alpha = add_(_m(quad(n=-_H)), _m(quad(n=_H)))
    beta = div_(mul_(_PK, Poch(mon(1, k=1, qexp=_H), ONE, N), _m(quad(n=-_H))),
                mul_(Poch(mon(1, qexp=_H), ONE, N), _PQ))
    return _pair(name, alpha, beta, a_value=mon(1), k_free=True, scale=2)


def _f4prime():
    alpha = div_(add_(_m(quad(n=-_H)), _m(quad(_H, n=_H))),
                 Poch(mon(-1, qexp=_H), ONE, lin(1)))
    beta = div_(mul_(_PK, Poch(mon(1, k=1, qexp=-_H), ONE, N), _m(quad(n=-_H))),
                mul_(Poch(mon(1, qexp=Rat(3, 2)), ONE, N), _PQ))
    return _pair("F4prime", alpha, beta, a_value=mon(1, qexp=1), k_free=True,
                 scale=2)


def _h3prime():
    alpha = add_(mul_(_SIGN, _m(quad(nn=-_H, n=-Rat(3, 2)))),
                 mul_(_SIGN, _m(quad(nn=-_H, n=Rat(3, 2)))))
    trinomial = add_(ONE_NODE, neg_(_m(quad(n=1), k=1)), _m(quad(n=2), k=1))
    beta = mul_(_SIGN, _m(quad(nn=-_H, n=-Rat(3, 2))), trinomial,
                div_(_PK, _PQ))
    return _pair("H3prime", alpha, beta, a_value=mon(1), k_free=True)


def _h4prime():
    alpha = add_(mul_(_SIGN, _m(quad(nn=-_H, n=-_H))),
                 mul_(_SIGN, _m(quad(nn=-_H, n=_H))))
    beta = mul_(_SIGN, _m(quad(nn=-_H, n=-_H)), div_(_PK, _PQ))
    return _pair("H4prime", alpha, beta, a_value=mon(1), k_free=True)


def _h5prime():
    alpha = add_(_m(quad(n=-1)), neg_(_m(quad(n=1))))
    trinomial = add_(ONE_NODE, MonNode(mon(-2, k=1, qexp=quad(n=1))),
                     _m(quad(n=2), k=1))
    beta = div_(mul_(_PK, _PK, trinomial, _m(quad(n=-1))),
                mul_(Poch(mon(1, k=1), ONE, lin(1)), _PQ, _PQ))
    return _pair("H5prime", alpha, beta, a_value=mon(1), k_free=True)


def _h6prime():
    return _pair("H6prime", cnum(0), div_(mul_(_PK, _PK), mul_(_PQ, _PQ)),
                 a_value=mon(1), k_free=True)


def _h7prime():
    alpha = mul_(cnum(2), _SIGN)
    beta = mul_(_SIGN, div_(_PK2, _PQ2))
    return _pair("H7prime", alpha, beta, a_value=mon(1), k_free=True)


def _h8prime():
    alpha = add_(mul_(_SIGN, _m(quad(n=-1))), mul_(_SIGN, _m(quad(n=1))))
    beta = mul_(_SIGN, _m(quad(n=-1)), add_(ONE_NODE, _m(quad(n=2), k=1)),
                div_(_PK2, mul_(Poch(mon(-1, k=1), ONE, lin(1)), _PQ2)))
    return _pair("H8prime", alpha, beta, a_value=mon(1), k_free=True)


def _h12prime():
    alpha = add_(_m(quad(n=-1)), neg_(_m(quad(1, n=1))))
    quadrinomial = add_(ONE_NODE, neg_(_m(quad(-1, n=1), k=1)),
                        neg_(_m(quad(n=1), k=1)), _m(quad(n=2), k=1))
    beta = div_(
        mul_(_PK, Poch(mon(1, k=1), ONE, lin(-1, n=1)), quadrinomial,
             _m(quad(n=-1))),
        mul_(_PQ, Poch(mon(1, qexp=2), ONE, N)))
    return _pair("H12prime", alpha, beta, a_value=mon(1, qexp=1), k_free=True)


def _h13prime():
    beta = div_(mul_(_PK, Poch(mon(1, k=1, qexp=-1), ONE, N)),
                mul_(_PQ, Poch(mon(1, qexp=2), ONE, N)))
    return _pair("H13prime", cnum(0), beta, a_value=mon(1, qexp=1),
                 k_free=True)


def _h17prime():
    alpha = add_(mul_(_SIGN, _m(quad(nn=_H, n=-_H))),
                 mul_(_SIGN, _m(quad(nn=_H, n=_H))))
    beta = mul_(_SIGN, _m(quad(nn=_H, n=-_H)), PowLin(mon(1, k=1), N),
                div_(_PK, _PQ))
    return _pair("H17prime", alpha, beta, a_value=mon(1), k_free=True)


def _wpab():
    # (1 - a q^{2n}) (a; q)_n / (1 - a) enters with the zero at a = 1
    # cancelled, keeping the a = 1 specialization in the domain.
    alpha = mul_(
        Poch(mon(1, qexp=quad(n=2), a=1), ONE, lin(1)),
        Poch(mon(1, a=1, qexp=1), ONE, lin(-1, n=1)),
        PowLin(mon(1, k=1, a=-1), N),
        div_(mul_(Poch(mon(1, c=1), ONE, N),
                  Poch(mon(1, d=1), ONE, N),
                  Poch(mon(1, a=2, k=-1, c=-1, d=-1, qexp=1), ONE, N)),
             mul_(_PQ, Poch(mon(1, a=1, c=-1, qexp=1), ONE, N),
                  Poch(mon(1, a=1, d=-1, qexp=1), ONE, N),
                  Poch(mon(1, k=1, c=1, d=1, a=-1), ONE, N))))
    beta = div_(
        mul_(Poch(mon(1, k=1, c=1, a=-1), ONE, N),
             Poch(mon(1, k=1, d=1, a=-1), ONE, N), _PK,
             Poch(mon(1, a=1, c=-1, d=-1, qexp=1), ONE, N)),
        mul_(Poch(mon(1, a=1, c=-1, qexp=1), ONE, N),
             Poch(mon(1, a=1, d=-1, qexp=1), ONE, N), _PQ,
             Poch(mon(1, k=1, c=1, d=1, a=-1), ONE, N)))
    guards = (lambda b: rat(b["k"]) * rat(b["c"]) * rat(b["d"]) != rat(b["a"]),
              lambda b: rat(b["k"]) != 0)
    return _pair("wpAB", alpha, beta, a_value=None, k_free=False,
                 k_polynomial=False, params=("c", "d"),
                 defaults=(("c", Rat(2)), ("d", Rat(3))), guards=guards)


def _wps():
    alpha = mul_(
        SqrtPairRatio(N, "a"),
        PowLin(mon(-1, a=1, c=-1, d=-1), N),
        _m(quad(nn=_H, n=_H)),
        div_(mul_(Poch(mon(1, a=1), ONE, N), Poch(mon(1, c=1), ONE, N),
                  Poch(mon(1, d=1), ONE, N)),
             mul_(Poch(mon(1, a=1, c=-1, qexp=1), ONE, N),
                  Poch(mon(1, a=1, d=-1, qexp=1), ONE, N), _PQ)))
    beta = div_(Poch(mon(1, a=1, c=-1, d=-1, qexp=1), ONE, N),
                mul_(Poch(mon(1, a=1, c=-1, qexp=1), ONE, N),
                     Poch(mon(1, a=1, d=-1, qexp=1), ONE, N), _PQ))
    return _pair("wpS", alpha, beta, a_value=None, k_value=ZERO, k_free=True,
                 params=("c", "d"), defaults=(("c", Rat(2)), ("d", Rat(3))))


def _h3primedual():
    alpha = add_(mul_(_SIGN, _m(quad(nn=_H, n=-Rat(3, 2)))),
                 mul_(_SIGN, _m(quad(nn=_H, n=Rat(3, 2)))))
    trinomial = add_(ONE_NODE, neg_(_m(quad(n=1))), _m(quad(n=2), k=1))
    beta = mul_(_SIGN, trinomial, PowLin(mon(1, k=1), lin(-1, n=1)),
                _m(quad(nn=_H, n=-Rat(3, 2))), div_(_PK, _PQ))
    p = _pair("H3primedual", alpha, beta, a_value=mon(1), k_free=True)
    return replace(p, constraints=p.constraints + (Constraint("k", ZERO),))


def _b1():
    alpha = add_(mul_(_SIGN, _m(quad(nn=Rat(3, 2), n=-_H))),
                 mul_(_SIGN, _m(quad(nn=Rat(3, 2), n=_H))))
    return _pair("B1", alpha, div_(ONE_NODE, _PQ), a_value=mon(1),
                 k_value=ZERO, k_free=True)


def _b2():
    alpha = add_(mul_(_SIGN, _m(quad(nn=Rat(3, 2), n=-Rat(3, 2)))),
                 mul_(_SIGN, _m(quad(nn=Rat(3, 2), n=Rat(3, 2)))))
    return _pair("B2", alpha, div_(_m(quad(n=1)), _PQ), a_value=mon(1),
                 k_value=ZERO, k_free=True)


def _h3():
    alpha = add_(mul_(_SIGN, _m(quad(nn=-_H, n=-Rat(3, 2)))),
                 mul_(_SIGN, _m(quad(nn=-_H, n=Rat(3, 2)))))
    beta = mul_(_SIGN, _m(quad(nn=-_H, n=-Rat(3, 2))), div_(ONE_NODE, _PQ))
    return _pair("H3", alpha, beta, a_value=mon(1), k_value=ZERO, k_free=True)


# (1 - a q^{2n}) (a; q)_n / (1 - a) with the removable zero at a = 1
# cancelled, so the a = 1 specialization stays in the domain.
_AWEIGHT = Poch(mon(1, a=1, qexp=quad(n=2)), ONE, lin(1))
_APOCH1 = Poch(mon(1, a=1, qexp=1), ONE, lin(-1, n=1))


def _s111():
    alpha = mul_(_SIGN, _m(quad(nn=_H, n=-_H)), _AWEIGHT,
                 div_(_APOCH1, _PQ))
    beta = mul_(_SIGN, PowLin(mon(1, k=1, a=-1), N), _m(quad(nn=_H, n=-_H)),
                div_(_PK, _PQ))
    return _pair("S111", alpha, beta, a_value=None, k_free=True)


def _e111():
    alpha = mul_(_SIGN, PowLin(mon(1, a=-1), N), _AWEIGHT,
                 add_(ONE_NODE, MonNode(mon(1, a=1))),
                 div_(Poch(mon(1, a=2, qexp=2), 2, lin(-1, n=1)), _PQ2))
    beta = mul_(_SIGN, PowLin(mon(1, a=-1), N), div_(_PK2, _PQ2))
    return _pair("E111", alpha, beta, a_value=None, k_free=True)


def _js111():
    alpha = mul_(_m(quad(n=-_H)), _AWEIGHT,
                 div_(mul_(_APOCH1,
                           Poch(mon(1, qexp=_H), ONE, N)),
                      mul_(_PQ, Poch(mon(1, a=1, qexp=_H), ONE, N))))
    beta = mul_(_m(quad(n=-_H)),
                div_(mul_(_PK, Poch(mon(1, k=1, a=-1, qexp=_H), ONE, N)),
                     mul_(_PQ, Poch(mon(1, a=1, qexp=_H), ONE, N))))
    return _pair("JS111", alpha, beta, a_value=None, k_free=True, scale=2)


def _s112():
    alpha = mul_(_SIGN, PowLin(mon(1, a=1), N), _m(quad(nn=Rat(3, 2), n=-_H)),
                 _AWEIGHT,
                 div_(_APOCH1, _PQ))
    body = div_(
        mul_(PowLin(mon(-1, k=1), J), _m(quad(jj=_H, j=-_H, nj=1)),
             Poch(mon(1, k=1, a=-1), ONE, lin(n=1, j=-1))),
        mul_(Poch(mon(1, qexp=1), ONE, J),
             Poch(mon(1, qexp=1), ONE, lin(n=1, j=-1))))
    beta = mul_(_PK, SumOver("j", lin(n=1), body))
    return _pair("S112", alpha, beta, a_value=None, k_free=True)


def _build():
    entries = [
        _e7prime(), _newwp(), _newwp("F3prime"), _f4prime(), _h3prime(),
        _h4prime(), _h5prime(), _h6prime(), _h7prime(), _h8prime(),
        _h12prime(), _h13prime(), _h17prime(), _wpab(), _wps(),
        _h3primedual(), _b1(), _b2(), _h3(), _s111(), _e111(), _js111(),
        _s112(),
    ]
    return {p.name: p for p in entries}


_CATALOG = _build()
_FAMILY_DEFAULTS = {"d": 1, "e": 1, "h": 1}


def catalog_names():
    """All stable catalog names, families listed once without arguments."""
    return tuple(sorted(_CATALOG)) + MULTIPARAM_FAMILIES


def catalog(name: str, **params) -> PairSpec:
    """Look up a pair by its stable name.

    Families SMBP/EMBP/JSMBP take integer slots d, e, h; wpAB and wpS accept
    rational parameter defaults c, d that samples and bindings inherit.
    """
    if name in MULTIPARAM_FAMILIES:
        slots = dict(_FAMILY_DEFAULTS)
        unknown = set(params) - set(slots)
        if unknown:
            raise KeyError(f"{name} takes slots d, e, h; got {sorted(unknown)}")
        slots.update({s: int(v) for s, v in params.items()})
        return multiparam_pair(name, slots["d"], slots["e"], slots["h"])
    if name not in _CATALOG:
        raise KeyError(f"unknown catalog pair {name!r}")
    pair = _CATALOG[name]
    if params:
        unknown = set(params) - set(pair.params)
        if unknown:
            raise KeyError(f"{name} has no parameters {sorted(unknown)}")
        d = dict(pair.defaults)
        d.update({p: rat(v) for p, v in params.items()})
        pair = replace(pair, defaults=tuple(sorted(d.items())))
    return pair

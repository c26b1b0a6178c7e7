"""Engines computing both sides of the summation transforms for a pair.

Four engines, each returning the two sides of one display as truncated
series over a single binding so callers can compare coefficients exactly:

  - fbt1_sides:          the finite form, sums running 0..N exactly;
  - bailey_lemma_sides:  the classical k = 0 limiting form;
  - wp_limit_sides:      the k-weighted limiting form (N -> infinity);
  - double_sum_sides:    the composed kernel re-associated as a double sum.

y and z may be rationals, QMono monomials, or the INFINITY token; the
engines substitute the stored limit forms of the kernels rather than
computing limits.  For the finite form the engine can also compute an
a-priori degree bound and raise the working order above it, turning
truncated agreement into a proof of the rational-function identity.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .errors import (
    FormalConvergenceError,
    SingularSpecializationError,
    UnboundParameterError,
)
from .expr import (
    FactoredTerm,
    _ft_const,
    eval_factored_deep,
    evaluate,
    factored_terms,
    factored_window,
)
from .pairs import PairSpec, _a_qmono, _admissible, _base_binding, wp_transform
from .qkernel import QMono, double_hyper_sum, hyper_sum, poch_inf
from .rational import ONE, Rat, ZERO, rat, rat_str
from .series import QSeries, _to_t


class _Infinity:
    """Token for a slot parameter sent to its limiting value."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "inf"


INFINITY = _Infinity()


@dataclass(frozen=True)
class TransformSides:
    """Both sides of a transform instance, trusted to the same order."""

    lhs: QSeries
    rhs: QSeries
    meta: dict = field(default_factory=dict)

    def first_mismatch(self):
        return self.lhs.first_mismatch(self.rhs)

    def agree(self) -> bool:
        return self.first_mismatch() is None


@dataclass
class _Slot:
    """One specialized kernel: base exponent, scale, slot a, k, y, z."""

    E: int
    s: int
    ca: Rat
    ea: Rat
    k: Rat
    y: object
    z: object

    def finite_yz(self):
        return [w for w in (self.y, self.z) if not isinstance(w, _Infinity)]

    def limit_tag(self) -> str:
        inf = [nm for nm, w in (("y", self.y), ("z", self.z))
               if isinstance(w, _Infinity)]
        return ",".join(inf) + "->inf" if inf else "finite"


def _qm(v, name: str):
    if isinstance(v, _Infinity):
        return v
    if not isinstance(v, QMono):
        v = QMono(rat(v), ZERO)
    if not v.coeff:
        raise SingularSpecializationError(f"{name} = 0 is outside the kernel domain")
    return v


def _slot(pair: PairSpec, bindings, need_k: bool, k_zero: bool = False):
    b = dict(bindings or {})
    y = _qm(b.pop("y", INFINITY), "y")
    z = _qm(b.pop("z", INFINITY), "z")
    b = _base_binding(pair, b)
    k = rat(b["k"]) if "k" in b else None
    if k is None:
        if k_zero:
            k = ZERO
            b["k"] = ZERO
        elif need_k:
            raise UnboundParameterError("parameter 'k' is not bound")
    if k_zero and k:
        raise ValueError("this engine is the k = 0 form; bind k = 0 or use wp_limit_sides")
    A = _a_qmono(pair, b)
    try:
        ok = _admissible(pair, b)
    except KeyError as exc:
        raise UnboundParameterError(f"parameter {exc} is not bound") from None
    if not ok:
        raise SingularSpecializationError(
            f"binding violates the constraints of pair {pair.name}")
    sl = _Slot(pair.modulus_exp, pair.scale, A.coeff, rat(A.qexp),
               k if k is not None else ZERO, y, z)
    return sl, b


def _check_growth(sl: _Slot):
    fin = sl.finite_yz()
    if len(fin) < 2:
        return
    mu = sl.E + sl.ea - rat(fin[0].qexp) - rat(fin[1].qexp)
    if mu <= 0:
        raise FormalConvergenceError(
            f"summand monomial has q-order {rat_str(mu)}; needs positive order to converge")


# --- kernel factor builders ---------------------------------------------------

def _ft_poch_q(ft: FactoredTerm, c, e0, E: int, count: int, den: bool = False):
    """Fold (c q^{e0}; q^E)_count into ft; den=True puts it in the denominator."""
    c = rat(c)
    if count <= 0 or not c:
        return
    e0 = rat(e0)
    for i in range(count):
        e = e0 + i * E
        if e == 0:
            s0 = 1 - c
            if den:
                if not s0:
                    raise SingularSpecializationError("zero kernel factor in a denominator")
                ft.coeff = ft.coeff / s0
            else:
                ft.coeff = ft.coeff * s0
        elif den:
            ft.den.append((-c, e))
        else:
            ft.num.append((-c, e))


def _ft_weight(ft: FactoredTerm, k: Rat, idx: int, E: int):
    """Fold the kernel weight (1 - k q^{2 idx E}) / (1 - k) into ft."""
    if k == 1:
        raise SingularSpecializationError("kernel weight singular at k = 1")
    if not k or idx == 0:
        return
    ft.coeff = ft.coeff / (1 - k)
    ft.num.append((-k, rat(2 * idx * E)))


def _ft_yz_mass(ft: FactoredTerm, sl: _Slot, r: int):
    """Fold (y, z; Q)_r (A Q / y z)^r into ft, using the stored limit forms."""
    E, ca, ea = sl.E, sl.ca, sl.ea
    fin = sl.finite_yz()
    if not fin:
        ft.coeff = ft.coeff * ca ** r
        ft.qexp = ft.qexp + r * ea + Rat(r * r * E)
        return
    if len(fin) == 1:
        w = fin[0]
        ft.coeff = ft.coeff * (-1) ** r * (ca / w.coeff) ** r
        ft.qexp = ft.qexp + r * (E + ea - rat(w.qexp)) + Rat(E * r * (r - 1), 2)
        _ft_poch_q(ft, w.coeff, w.qexp, E, r)
        return
    y, z = fin
    ft.coeff = ft.coeff * (ca / (y.coeff * z.coeff)) ** r
    ft.qexp = ft.qexp + r * (E + ea - rat(y.qexp) - rat(z.qexp))
    _ft_poch_q(ft, y.coeff, y.qexp, E, r)
    _ft_poch_q(ft, z.coeff, z.qexp, E, r)


def _ft_den_over_yz(ft: FactoredTerm, sl: _Slot, r: int, bc: Rat, be):
    """Fold (bc q^{be} Q / y, bc q^{be} Q / z; Q)_r into the denominator."""
    for w in (sl.y, sl.z):
        if isinstance(w, _Infinity):
            continue
        _ft_poch_q(ft, rat(bc) / w.coeff, sl.E + rat(be) - rat(w.qexp), sl.E, r,
                   den=True)


def _over(base_c, base_e, *ws):
    """Argument base q^{base_e} / prod(ws); None when dropped by a limit."""
    c, e = rat(base_c), rat(base_e)
    for w in ws:
        if isinstance(w, _Infinity):
            return None
        c = c / w.coeff
        e = e - rat(w.qexp)
    if not c:
        return None
    return QMono(c, e)


def _pref_args(sl: _Slot):
    """Infinite-product prefactor arguments (numerators, denominators).

    The k = 0 specialization drops the k-factors and leaves the classical
    prefactor, so one argument list serves both limiting engines.
    """
    E, ca, ea, k, y, z = sl.E, sl.ca, sl.ea, sl.k, sl.y, sl.z
    nums = [_over(k, E), _over(k, E, y, z), _over(ca, E + ea, y), _over(ca, E + ea, z)]
    dens = [_over(k, E, y), _over(k, E, z), _over(ca, E + ea), _over(ca, E + ea, y, z)]
    return [x for x in nums if x is not None], [x for x in dens if x is not None]


def _pref_maker(sl: _Slot):
    nums, dens = _pref_args(sl)

    def make(o_t: int) -> QSeries:
        f = QSeries(sl.s, 0, o_t, [ONE], exact=True)
        for x in nums:
            f = f * poch_inf(x, sl.E, Rat(o_t, sl.s), sl.s)
        for x in dens:
            f = f * poch_inf(x, sl.E, Rat(o_t, sl.s), sl.s).invert()
        return f

    return make


def _mul_to_order(fa, fb, order_t: int) -> QSeries:
    """Product of fa(order) and fb(order), trusted to at least order_t.

    Re-evaluates a factor at a higher working order when the partner's
    negative low exponent would otherwise erode the product's trust;
    iterated because a re-evaluation can reveal a lower window itself.
    """
    a, b = fa(order_t), fb(order_t)
    for _ in range(8):
        if not a.exact and order_t - b.lo > a.order:
            a = fa(order_t - b.lo)
        elif not b.exact and order_t - a.lo > b.order:
            b = fb(order_t - a.lo)
        else:
            break
    return a * b


def _binding_meta(b, sl: _Slot):
    out = {p: rat_str(v) for p, v in sorted(b.items())}
    for nm, w in (("y", sl.y), ("z", sl.z)):
        if isinstance(w, _Infinity):
            out[nm] = "inf"
        elif not w.qexp:
            out[nm] = rat_str(w.coeff)
        else:
            out[nm] = f"{rat_str(w.coeff)}*q^{rat_str(w.qexp)}"
    return out


# --- sequence access ----------------------------------------------------------

def _seq_fn(node, b, s: int, divisor: int = 1):
    """Sequence evaluator preferring clipped factored terms over tree eval.

    The factored route keeps working windows near the requested order even
    when the sequence's own support is wide (quadratic q-exponents), which
    the exactness-preserving generic evaluator would expand in full.
    """
    parts_cache = {}

    def fn(nn: int, o_t: int) -> QSeries:
        if nn % divisor:
            return QSeries(s, 0, o_t, [], exact=True)
        m = nn // divisor
        if m not in parts_cache:
            parts_cache[m] = factored_terms(node, b, m)
        parts = parts_cache[m]
        if parts is None:
            return evaluate(node, b, Rat(o_t, s), s, n=m)
        acc = QSeries(s, 0, o_t, [], exact=True)
        for p in parts:
            acc = acc + eval_factored_deep(p, o_t, s)
        return acc

    return fn


def _beta_fn(pair: PairSpec, b):
    """beta_n at a working order, via the closed form or the defining transform."""
    if pair.beta is not None:
        return _seq_fn(pair.beta, b, pair.scale)
    cache = {}

    def fn(nn: int, o_t: int) -> QSeries:
        tab = cache.get(o_t)
        if tab is None or len(tab) <= nn:
            count = max(nn + 1, 2 * len(tab) if tab else 8)
            tab = wp_transform(pair, b, count, Rat(o_t, pair.scale))
            cache[o_t] = tab
        return tab[nn]

    return fn


def _alpha_fn(pair: PairSpec, b):
    return _seq_fn(pair.alpha, b, pair.scale, divisor=pair.alpha_divisor)


# --- the two limiting engines -------------------------------------------------

def _limit_sides(pair: PairSpec, bindings, order, n_max, k_zero: bool,
                 engine: str) -> TransformSides:
    sl, b = _slot(pair, bindings, need_k=not k_zero, k_zero=k_zero)
    _check_growth(sl)
    s, E, k = sl.s, sl.E, sl.k
    order_t = _to_t(order, s)
    beta_at = _beta_fn(pair, b)
    alpha_at = _alpha_fn(pair, b)

    def lhs_term(nn: int) -> QSeries:
        ft = _ft_const(1)
        _ft_weight(ft, k, nn, E)
        _ft_yz_mass(ft, sl, nn)
        _ft_den_over_yz(ft, sl, nn, k, ZERO)
        if not ft.coeff:
            return QSeries(s, 0, order_t, [], exact=True)
        return _mul_to_order(lambda o: eval_factored_deep(ft, o, s),
                             lambda o: beta_at(nn, o), order_t)

    def rhs_term(nn: int) -> QSeries:
        ft = _ft_const(1)
        _ft_yz_mass(ft, sl, nn)
        _ft_den_over_yz(ft, sl, nn, sl.ca, sl.ea)
        if not ft.coeff:
            return QSeries(s, 0, order_t, [], exact=True)
        return _mul_to_order(lambda o: eval_factored_deep(ft, o, s),
                             lambda o: alpha_at(nn, o), order_t)

    lhs, lused = hyper_sum(lhs_term, n_max=n_max, order=Rat(order_t, s),
                           scale=s, return_info=True)

    def rhs_sum(o_t: int) -> QSeries:
        if o_t == order_t:
            return rsum
        return hyper_sum(rhs_term, n_max=n_max, order=Rat(o_t, s), scale=s)

    rsum, rused = hyper_sum(rhs_term, n_max=n_max, order=Rat(order_t, s),
                            scale=s, return_info=True)
    rhs = _mul_to_order(_pref_maker(sl), rhs_sum, order_t)
    shared_t = min(order_t, lhs.order, rhs.order)
    meta = {"engine": engine, "binding": _binding_meta(b, sl),
            "scale": s, "order_t": shared_t, "limit": sl.limit_tag(),
            "terms_used": {"lhs_n": lused, "rhs_n": rused}}
    return TransformSides(lhs.truncate_t(shared_t), rhs.truncate_t(shared_t), meta)


def bailey_lemma_sides(pair: PairSpec, bindings=None, order=20,
                       n_max=None) -> TransformSides:
    """Both sides of the classical k = 0 limiting transform at one binding.

    lhs = sum_n (y, z; Q)_n (A Q / yz)^n beta_n; rhs is the alpha sum with
    its infinite-product prefactor.  y and z default to the infinite limit;
    the pair must sit at k = 0 (a free k is bound to zero).
    """
    return _limit_sides(pair, bindings, order, n_max, k_zero=True,
                        engine="bailey_lemma")


def wp_limit_sides(pair: PairSpec, bindings=None, order=20,
                   n_max=None) -> TransformSides:
    """Both sides of the k-weighted limiting transform at one binding.

    lhs carries the weight (1 - k Q^{2n})/(1 - k) and the (Qk/y, Qk/z; Q)_n
    denominators; rhs is the alpha sum with the full product prefactor.
    At k = 0 the output matches bailey_lemma_sides coefficientwise.
    """
    return _limit_sides(pair, bindings, order, n_max, k_zero=False,
                        engine="wp_limit")


# --- the finite engine --------------------------------------------------------

def fbt1_sides(pair: PairSpec, bindings=None, N: int = 5, order=60,
               prove: bool = False) -> TransformSides:
    """Both sides of the finite transform, sums running n = 0..N exactly.

    Every summand is a Laurent monomial times binomial factors, so with
    prove=True the engine computes an a-priori degree bound for the
    denominator-cleared difference and raises the working order above it:
    truncated agreement then proves the rational-function identity.  The
    bound lands in meta["degree_bound"] (q-units) with the order actually
    used in meta["proof_order"].
    """
    if N < 0:
        raise ValueError("N must be a nonnegative integer")
    sl, b = _slot(pair, bindings, need_k=True)
    if not isinstance(sl.y, QMono) or not isinstance(sl.z, QMono):
        raise ValueError("the finite transform needs finite y and z bindings")
    if not sl.k:
        raise SingularSpecializationError("the finite transform kernel needs k != 0")
    E, s, ca, ea, k = sl.E, sl.s, sl.ca, sl.ea, sl.k
    yc, ye = sl.y.coeff, rat(sl.y.qexp)
    zc, ze = sl.z.coeff, rat(sl.z.qexp)
    order_t = _to_t(order, s)

    def shared_nums(ft, nn):
        _ft_poch_q(ft, yc, ye, E, nn)
        _ft_poch_q(ft, zc, ze, E, nn)
        _ft_poch_q(ft, k * ca / (yc * zc), (N + 1) * E + ea - ye - ze, E, nn)
        _ft_poch_q(ft, ONE, -N * E, E, nn)

    def lhs_kernel(nn):
        ft = _ft_const(1)
        _ft_weight(ft, k, nn, E)
        shared_nums(ft, nn)
        _ft_poch_q(ft, k / yc, E - ye, E, nn, den=True)
        _ft_poch_q(ft, k / zc, E - ze, E, nn, den=True)
        _ft_poch_q(ft, yc * zc / ca, ye + ze - N * E - ea, E, nn, den=True)
        _ft_poch_q(ft, k, (1 + N) * E, E, nn, den=True)
        ft.qexp = ft.qexp + rat(nn * E)
        return ft

    pref = _ft_const(1)
    _ft_poch_q(pref, k, E, E, N)
    _ft_poch_q(pref, k / (yc * zc), E - ye - ze, E, N)
    _ft_poch_q(pref, ca / yc, E + ea - ye, E, N)
    _ft_poch_q(pref, ca / zc, E + ea - ze, E, N)
    _ft_poch_q(pref, k / yc, E - ye, E, N, den=True)
    _ft_poch_q(pref, k / zc, E - ze, E, N, den=True)
    _ft_poch_q(pref, ca, E + ea, E, N, den=True)
    _ft_poch_q(pref, ca / (yc * zc), E + ea - ye - ze, E, N, den=True)

    def rhs_kernel(nn):
        ft = _ft_const(1)
        shared_nums(ft, nn)
        _ft_poch_q(ft, ca / yc, E + ea - ye, E, nn, den=True)
        _ft_poch_q(ft, ca / zc, E + ea - ze, E, nn, den=True)
        _ft_poch_q(ft, ca, (1 + N) * E + ea, E, nn, den=True)
        _ft_poch_q(ft, yc * zc / k, ye + ze - N * E, E, nn, den=True)
        ft.coeff = ft.coeff * (ca / k) ** nn
        ft.qexp = ft.qexp + nn * Rat(E) + nn * ea
        return ft

    d = pair.alpha_divisor

    def beta_parts(nn):
        if pair.beta is None:
            return None
        return factored_terms(pair.beta, b, nn)

    def alpha_parts(nn):
        if nn % d:
            return []
        return factored_terms(pair.alpha, b, nn // d)

    def side_terms(kernel, seq_parts):
        fts, funcs = [], []
        for nn in range(N + 1):
            kft = kernel(nn)
            if not kft.coeff:
                continue
            parts = seq_parts(nn)
            if parts is None:
                if prove:
                    raise ValueError(
                        "prove mode needs binomial-factorable alpha and beta")
                funcs.append(nn)
            else:
                fts.extend(kft.times(p) for p in parts if p.coeff)
        return fts, funcs

    lhs_fts, lhs_funcs = side_terms(lhs_kernel, beta_parts)
    rhs_fts, rhs_funcs = side_terms(rhs_kernel, alpha_parts)

    meta = {"engine": "fbt1", "binding": _binding_meta(b, sl), "N": N,
            "scale": s, "limit": "finite"}
    work_t = order_t
    if prove:
        full = lhs_fts + [pref.times(ft) for ft in rhs_fts]
        dens = Counter()
        for ft in full:
            dens |= Counter((c, rat(e)) for c, e in ft.den)
        slack = -sum(e for (_, e), m in dens.items() if e < 0 for _ in range(m))
        bound = ZERO
        for ft in full:
            comp = dens - Counter((c, rat(e)) for c, e in ft.den)
            hi = factored_window(ft)[1] + sum(
                e for (_, e), m in comp.items() if e > 0 for _ in range(m))
            bound = max(bound, hi)
        bound = bound + slack
        work_t = max(order_t, _to_t(bound, s) + 1)
        meta["degree_bound"] = bound
        meta["proof_order"] = Rat(work_t, s)

    def side_value(fts, funcs, kernel, seq_at):
        acc = QSeries(s, 0, work_t, [], exact=True)
        for ft in fts:
            acc = acc + eval_factored_deep(ft, work_t, s)
        for nn in funcs:
            kft = kernel(nn)
            acc = acc + _mul_to_order(lambda o: eval_factored_deep(kft, o, s),
                                      lambda o: seq_at(nn, o), work_t)
        return acc

    lhs = side_value(lhs_fts, lhs_funcs, lhs_kernel, _beta_fn(pair, b))
    rsum = side_value(rhs_fts, rhs_funcs, rhs_kernel, _alpha_fn(pair, b))

    def rhs_sum(o_t: int) -> QSeries:
        if o_t == work_t:
            return rsum
        fts, funcs = side_terms(rhs_kernel, alpha_parts)
        acc = QSeries(s, 0, o_t, [], exact=True)
        for ft in fts:
            acc = acc + eval_factored_deep(ft, o_t, s)
        for nn in funcs:
            kft = rhs_kernel(nn)
            acc = acc + _mul_to_order(lambda o: eval_factored_deep(kft, o, s),
                                      lambda o: _alpha_fn(pair, b)(nn, o), o_t)
        return acc

    rhs = _mul_to_order(lambda o: eval_factored_deep(pref, o, s), rhs_sum, work_t)
    shared_t = min(work_t, lhs.order, rhs.order)
    meta["order_t"] = shared_t
    meta["terms_used"] = {"lhs_n": N, "rhs_n": N}
    return TransformSides(lhs.truncate_t(shared_t), rhs.truncate_t(shared_t), meta)


# --- the double-sum engine ----------------------------------------------------

def double_sum_sides(alpha, bindings=None, order=20, n_max=None, j_max=None,
                     scale: int = 1, modulus_exp: int = 1) -> TransformSides:
    """Both sides of the composed kernel written as an explicit double sum.

    alpha is an expression tree in the index n (the weight sequence); the
    binding supplies a, k and optionally y, z (INFINITY accepted).  lhs sums
    the composed kernel against alpha_j over anti-diagonals n + j = m; rhs
    is the single alpha sum with the product prefactor.
    """
    pair = PairSpec("_double", alpha, None, scale=scale, modulus_exp=modulus_exp)
    sl, b = _slot(pair, bindings, need_k=True)
    _check_growth(sl)
    s, E, ca, ea, k = sl.s, sl.E, sl.ca, sl.ea, sl.k
    order_t = _to_t(order, s)
    alpha_at = _alpha_fn(pair, b)
    cache = {}

    def alpha_ser(jj: int, o_t: int) -> QSeries:
        key = (jj, o_t)
        if key not in cache:
            cache[key] = alpha_at(jj, o_t)
        return cache[key]

    def cell(nn: int, jj: int) -> QSeries:
        al = alpha_ser(jj, order_t)
        if al.exact and al.is_zero():
            return QSeries(s, 0, order_t, [], exact=True)
        ft = _ft_const(1)
        _ft_weight(ft, k, nn + jj, E)
        _ft_poch_q(ft, k / ca, -ea, E, nn)
        _ft_poch_q(ft, k, ZERO, E, nn + 2 * jj)
        _ft_yz_mass(ft, sl, nn + jj)
        _ft_poch_q(ft, ONE, E, E, nn, den=True)
        _ft_poch_q(ft, ca, E + ea, E, nn + 2 * jj, den=True)
        _ft_den_over_yz(ft, sl, nn + jj, k, ZERO)
        if not ft.coeff:
            return QSeries(s, 0, order_t, [], exact=True)
        return _mul_to_order(lambda o: eval_factored_deep(ft, o, s),
                             lambda o: alpha_ser(jj, o), order_t)

    lhs, (used_n, used_j) = double_hyper_sum(cell, n_max=n_max, j_max=j_max,
                                             order=Rat(order_t, s), scale=s,
                                             return_info=True)

    def rhs_term(nn: int) -> QSeries:
        ft = _ft_const(1)
        _ft_yz_mass(ft, sl, nn)
        _ft_den_over_yz(ft, sl, nn, ca, ea)
        if not ft.coeff:
            return QSeries(s, 0, order_t, [], exact=True)
        return _mul_to_order(lambda o: eval_factored_deep(ft, o, s),
                             lambda o: alpha_ser(nn, o), order_t)

    rsum, rused = hyper_sum(rhs_term, order=Rat(order_t, s), scale=s,
                            return_info=True)

    def rhs_sum(o_t: int) -> QSeries:
        if o_t == order_t:
            return rsum
        return hyper_sum(rhs_term, order=Rat(o_t, s), scale=s)

    rhs = _mul_to_order(_pref_maker(sl), rhs_sum, order_t)
    shared_t = min(order_t, lhs.order, rhs.order)
    meta = {"engine": "double_sum", "binding": _binding_meta(b, sl),
            "scale": s, "order_t": shared_t, "limit": sl.limit_tag(),
            "terms_used": {"n": used_n, "j": used_j, "rhs_n": rused}}
    return TransformSides(lhs.truncate_t(shared_t), rhs.truncate_t(shared_t), meta)

"""Pair records, the defining transform, verification, and pair maps."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, replace
from typing import Optional

from .errors import NonConvergentError, SingularSpecializationError
from .expr import (
    Add, CaseSplit, Const, Div, Mon, MonNode, Mul, Neg, Poch, PochInf, PowLin,
    QuadPochRatio, SqrtPairRatio, SumOver,
    J, N, ONE_NODE, add_, case0, cnum, div_, dual_map, evaluate, lin, mon,
    mul_, neg_, params_of, quad, shift_n, singular_set, subst_param_times_q,
)
from .qkernel import QMono
from .rational import ONE, Rat, ZERO, rat
from .report import FAIL, NONCONVERGENT, PASS, SINGULAR, Mismatch, VerificationReport
from .series import QSeries, _to_t

NODE_TYPES = (Const, MonNode, PowLin, Poch, PochInf, SqrtPairRatio,
              QuadPochRatio, Add, Mul, Div, Neg, CaseSplit, SumOver)


@dataclass(frozen=True)
class Constraint:
    """A forbidden parameter value; bindings violating it are inadmissible."""

    param: str
    value: Rat

    def ok(self, bindings) -> bool:
        if self.param not in bindings:
            return True
        return rat(bindings[self.param]) != rat(self.value)


@dataclass(frozen=True)
class PairSpec:
    """A pair of sequences (alpha_n, beta_n) tied together by the transform.

    alpha and beta are expression trees in the index n.  a_value fixes the
    pair parameter a (None leaves it a free binding); k_value pins k (zero
    for the ordinary pairs).  k_free records that alpha does not involve k.
    modulus_exp e runs the transform in base q^e with parameter slot a^e;
    alpha_divisor d marks alpha as supported on multiples of d, with the
    stored tree indexed by n/d.
    """

    name: str
    alpha: object
    beta: Optional[object]
    a_value: Optional[Mon] = None
    k_value: Optional[Rat] = None
    k_free: bool = False
    scale: int = 1
    modulus_exp: int = 1
    alpha_divisor: int = 1
    k_polynomial: bool = True
    params: tuple = ()
    defaults: tuple = ()
    constraints: tuple = ()
    guards: tuple = ()
    note: str = ""

    def renamed(self, name: str) -> "PairSpec":
        return replace(self, name=name)


def _as_node(c):
    if isinstance(c, NODE_TYPES):
        return c
    if isinstance(c, Mon):
        return MonNode(c)
    return Const(rat(c))


def _mon_inv(m: Mon) -> Mon:
    co = rat(m.coeff)
    if not co:
        raise SingularSpecializationError("cannot invert a zero monomial")
    return Mon(ONE / co, tuple(sorted((p, -e) for p, e in m.powers)), -m.qexp)


def _mon_shift(m: Mon, dq) -> Mon:
    return Mon(m.coeff, m.powers, m.qexp + quad(dq))


def _a_mon(pair: PairSpec) -> Mon:
    if pair.a_value is not None:
        return pair.a_value
    return Mon(ONE, (("a", 1),), quad())


def _auto_constraints(*nodes) -> tuple:
    found = set()
    for node in nodes:
        if node is not None:
            found.update(singular_set(node))
    return tuple(Constraint(p, rat(v))
                 for p, v in sorted(found, key=lambda c: (c[0], str(c[1]))))


def unit_beta_node(pair: PairSpec):
    """(k, k/a; q)_n / ((aq, q; q)_n): the transform of alpha_n = [n = 0]."""
    a = _a_mon(pair)
    k = mon(1, k=1)
    return div_(
        mul_(Poch(k, ONE, N), Poch(k.times(_mon_inv(a)), ONE, N)),
        mul_(Poch(_mon_shift(a, 1), ONE, N), Poch(mon(1, qexp=1), ONE, N)))


def unit_pair(a_value: Optional[Mon] = None, scale: int = 1) -> PairSpec:
    """The pair with alpha_n = [n = 0] and beta_n its transform."""
    p = PairSpec("unit", case0(ONE_NODE, cnum(0)), None, a_value=a_value,
                 k_free=True, scale=scale)
    return replace(p, beta=unit_beta_node(p))


# --- evaluation ---------------------------------------------------------------

def eval_alpha(pair: PairSpec, bindings, order, n: int, scale=None) -> QSeries:
    s = scale or pair.scale
    d = pair.alpha_divisor
    if n % d:
        return QSeries(s, 0, _to_t(order, s), [], exact=True)
    return evaluate(pair.alpha, bindings, order, s, n=n // d)


def eval_beta(pair: PairSpec, bindings, order, n: int, scale=None) -> QSeries:
    if pair.beta is None:
        raise ValueError(f"pair {pair.name} has no closed beta; use wp_transform")
    return evaluate(pair.beta, bindings, order, scale or pair.scale, n=n)


def alpha_table(pair: PairSpec, bindings, order, n_max: int, scale=None):
    return [eval_alpha(pair, bindings, order, n, scale) for n in range(n_max + 1)]


def beta_table(pair: PairSpec, bindings, order, n_max: int, scale=None):
    return [eval_beta(pair, bindings, order, n, scale) for n in range(n_max + 1)]


def _a_qmono(pair: PairSpec, bindings) -> QMono:
    e = pair.modulus_exp
    if pair.a_value is None:
        if "a" not in bindings:
            raise SingularSpecializationError(f"pair {pair.name} needs a bound")
        a = rat(bindings["a"])
        if not a:
            raise SingularSpecializationError("a = 0 leaves no transform kernel")
        return QMono(a ** e, ZERO)
    m = pair.a_value
    if not m.qexp.is_const():
        raise ValueError("a_value must be a constant monomial")
    co = m.value_coeff(bindings)
    if not co:
        raise SingularSpecializationError("a = 0 leaves no transform kernel")
    return QMono(co ** e, rat(m.qexp.c0) * e)


def wp_transform(alpha, bindings, n_max: int, order, scale=None, a_value=None):
    """Beta table B_0..B_{n_max} of the defining transform applied to alpha.

    B_n = sum_{j<=n} (k/a;q)_{n-j} (k;q)_{n+j} / ((q;q)_{n-j} (aq;q)_{n+j}) a_j,
    computed with incremental kernel updates (two binomial multiplications and
    two binomial divisions per step).  At k = 0 this is the classical
    transform.  alpha may be a PairSpec or a bare expression tree in n.
    """
    if isinstance(alpha, PairSpec):
        pair = alpha
    else:
        pair = PairSpec("_transform", alpha, None, a_value=a_value,
                        scale=scale or 1)
    s = scale or pair.scale
    order_t = _to_t(order, s)
    if pair.k_value is not None:
        k = rat(pair.k_value)
    else:
        if "k" not in bindings:
            raise SingularSpecializationError(f"pair {pair.name} needs k bound")
        k = rat(bindings["k"])
    A = _a_qmono(pair, bindings)
    ca = A.coeff
    e_t = pair.modulus_exp * s
    ea = rat(A.qexp) * s
    if ea.denominator != 1:
        raise ValueError(f"a exponent {A.qexp} needs a finer scale than {s}")
    ea_t = int(ea.numerator)

    alphas = [eval_alpha(pair, bindings, order, nn, s) for nn in range(n_max + 1)]
    slack = max(0, -min(al.lo for al in alphas))
    if k:
        for nn in range(1, n_max + 1):
            slack += max(0, ea_t - e_t * (nn - 1))
    work_t = order_t + slack
    if slack:
        alphas = [eval_alpha(pair, bindings, Rat(work_t, s), nn, s)
                  for nn in range(n_max + 1)]

    # A binomial factor with t-exponent 0 is the scalar (1 + c); scalar zeros
    # are tracked as a multiplicity so later divisions can cancel them
    # (the k = a specialization zeroes (k/a; q)_{n-j} for j < n only).
    def _mulbin(ser, z, c, e):
        if e == 0:
            s0 = ONE + c
            return (ser, z + 1) if not s0 else (ser.scalar_mul(s0), z)
        return ser.mul_binomial_t(c, e), z

    def _divbin(ser, z, c, e):
        if e == 0:
            s0 = ONE + c
            return (ser, z - 1) if not s0 else (ser.scalar_mul(ONE / s0), z)
        return ser.div_binomial_t(c, e), z

    kn0, z0 = QSeries(s, 0, work_t, [ONE]), 0
    betas = []
    for nn in range(n_max + 1):
        if nn:
            if k:
                kn0, z0 = _mulbin(kn0, z0, -k / ca, e_t * (nn - 1) - ea_t)
                kn0, z0 = _mulbin(kn0, z0, -k, e_t * (nn - 1))
            kn0, z0 = _divbin(kn0, z0, -ONE, e_t * nn)
            kn0, z0 = _divbin(kn0, z0, -ca, e_t * nn + ea_t)
        kern, zk = kn0, z0
        if zk < 0:
            raise SingularSpecializationError("transform kernel pole")
        acc = None
        if not zk and not alphas[0].is_zero():
            acc = kern * alphas[0]
        for jj in range(1, nn + 1):
            kern, zk = _mulbin(kern, zk, -ONE, e_t * (nn - jj + 1))
            if k:
                kern, zk = _mulbin(kern, zk, -k, e_t * (nn + jj - 1))
                kern, zk = _divbin(kern, zk, -k / ca, e_t * (nn - jj) - ea_t)
            kern, zk = _divbin(kern, zk, -ca, e_t * (nn + jj) + ea_t)
            if zk < 0:
                raise SingularSpecializationError("transform kernel pole")
            if not zk and not alphas[jj].is_zero():
                term = kern * alphas[jj]
                acc = term if acc is None else acc + term
        if acc is None:
            acc = QSeries(s, 0, order_t, [])
        betas.append(acc.truncate_t(order_t))
    return betas


# --- sampling and verification --------------------------------------------------

_K_POOL = (Rat(1, 3), Rat(2, 5), Rat(5, 7), Rat(-1, 2), Rat(3))
_A_POOL = (Rat(2), Rat(1, 3))
_A_EXTRA = (Rat(5, 2), Rat(-3, 4), Rat(7), Rat(3, 7), Rat(-5))


def _admissible(pair: PairSpec, b) -> bool:
    for c in pair.constraints:
        if not c.ok(b):
            return False
    for g in pair.guards:
        if not g(b):
            return False
    return True


def _base_binding(pair: PairSpec, overrides=None) -> dict:
    b = {p: rat(v) for p, v in pair.defaults}
    if pair.k_value is not None:
        b["k"] = rat(pair.k_value)
    if overrides:
        b.update({p: rat(v) for p, v in overrides.items()})
    return b


def sample_bindings(pair: PairSpec, seed: int = 7, count: int = 5,
                    overrides=None):
    """Deterministic admissible bindings: a seeded pool of distinct rationals
    on the primary axis (k, or a for the pinned-k pairs), crossed with the
    a-pool when a is free."""
    rng = random.Random(seed)
    base = _base_binding(pair, overrides)
    if pair.k_value is None and "k" not in (overrides or {}):
        primary, pool = "k", _K_POOL
        secondary = [{"a": v} for v in _A_POOL] if (
            pair.a_value is None and "a" not in (overrides or {})) else [{}]
    elif pair.a_value is None and "a" not in (overrides or {}):
        primary, pool = "a", _A_POOL + _A_EXTRA
        secondary = [{}]
    else:
        return [base] if _admissible(pair, base) else []
    out = []
    for sec in secondary:
        got, seen, queue, attempts = 0, set(), list(pool), 0
        while got < count:
            if queue:
                cand = queue.pop(0)
            else:
                attempts += 1
                if attempts > 1000:
                    raise ValueError(
                        f"cannot find {count} admissible {primary}-samples for {pair.name}")
                cand = Rat(rng.randint(-40, 40), rng.randint(1, 24))
            if not cand or cand in seen:
                continue
            b = dict(base)
            b.update(sec)
            b[primary] = cand
            if not _admissible(pair, b):
                continue
            seen.add(cand)
            out.append(b)
            got += 1
    return out


def _sample_grid(pair: PairSpec, k_samples, a_samples):
    base = _base_binding(pair)
    ks = [rat(x) for x in k_samples] if k_samples else [None]
    if pair.a_value is None:
        a_list = [rat(x) for x in a_samples] if a_samples else list(_A_POOL)
    else:
        a_list = [None]
    out = []
    for a in a_list:
        for kv in ks:
            b = dict(base)
            if a is not None:
                b["a"] = a
            if kv is not None and pair.k_value is None:
                b["k"] = kv
            if _admissible(pair, b):
                out.append(b)
    return out


def prove_sample_count(pair: PairSpec, n_max: int, order: int) -> int:
    """Sample count that pins the k-dependence identically (see verify_pair)."""
    if pair.k_polynomial:
        return 2 * n_max + 1
    return 4 * n_max + 3


def verify_pair(pair: PairSpec, k_samples=None, a_samples=None, n_max: int = 8,
                order=None, seed: int = 7, prove: bool = False, bindings=None,
                overrides=None, samples=None,
                measure_time: bool = False) -> VerificationReport:
    """Compare the transform's beta table against the stored beta.

    Every comparison is exact rational arithmetic through the requested
    order.  For fixed n and fixed q-exponent, both table entries are
    polynomials in k of degree at most 2n whenever beta involves k only
    polynomially (after its displayed cancellations), so agreement at
    2*n_max + 1 distinct k-values decides those coefficients identically
    in k.  When k enters denominators, clearing them leaves polynomials of
    degree at most 4n + 2 per q-coefficient (kernel numerator 2n + 1, beta
    numerator and cleared denominator at most n each), so prove=True
    requests 4*n_max + 3 samples for those pairs.  The k-sampling carries
    the proof content; `order` only widens the q-evidence window, so prove
    mode defaults it to n_max + 4 instead of 2*n_max + 4.
    """
    if order is None:
        order = (n_max if prove else 2 * n_max) + 4
    if pair.a_value is not None:
        for src in (bindings, overrides):
            if src and "a" in src:
                raise ValueError(f"pair {pair.name} fixes a; cannot override it")
        if a_samples:
            raise ValueError(f"pair {pair.name} fixes a; cannot sample it")
    t0 = time.perf_counter()
    if bindings is not None:
        drawn = [{p: rat(v) for p, v in bindings.items()}]
        if pair.k_value is not None:
            drawn[0].setdefault("k", rat(pair.k_value))
    elif k_samples is not None or a_samples is not None:
        drawn = _sample_grid(pair, k_samples, a_samples)
    else:
        if samples is not None:
            count = samples
        else:
            count = prove_sample_count(pair, n_max, order) if prove else 5
        drawn = sample_bindings(pair, seed=seed, count=count,
                                overrides=overrides)
    status, mismatch, used = PASS, None, []
    for b in drawn:
        used.append(dict(b))
        try:
            table = wp_transform(pair, b, n_max, order)
            for nn in range(n_max + 1):
                cat = eval_beta(pair, b, order, nn)
                exp = table[nn].first_mismatch(cat)
                if exp is not None:
                    status = FAIL
                    mismatch = Mismatch(exp, table[nn].coeff(exp), cat.coeff(exp))
                    break
        except SingularSpecializationError:
            status = SINGULAR
        except NonConvergentError:
            status = NONCONVERGENT
        if status != PASS:
            break
    ms = int(round((time.perf_counter() - t0) * 1000)) if measure_time else 0
    return VerificationReport(pair.name, status, int(order), pair.scale, used,
                              mismatch, {"n": n_max, "j": None}, ms)


# --- pair maps ------------------------------------------------------------------

def _require_plain(pair: PairSpec, op: str):
    if pair.beta is None:
        raise ValueError(f"{op} needs a closed-form beta, not a transform-defined one")
    if pair.modulus_exp != 1 or pair.alpha_divisor != 1:
        raise ValueError(f"{op} applies to plain pairs only")


def combinator_star(pair: PairSpec, name: Optional[str] = None) -> PairSpec:
    """Star lift: alpha*_n = (a q^n + q^{-n}) alpha_n for n >= 1.

    beta*_n = [(1 + a q^{2n}) beta_n(k) - (1-k)(1-k/a) beta_{n-1}(kq)] / q^n
              - a (k, k/a; q)_n / ((aq, q; q)_n),
    with alpha*_0 = beta*_0 = 1.  Requires a k-independent alpha.
    """
    _require_plain(pair, "combinator_star")
    if not pair.k_free:
        raise ValueError("combinator_star requires a k-independent alpha")
    if pair.k_value is not None:
        raise ValueError("combinator_star requires a free k")
    a = _a_mon(pair)
    ainv = _mon_inv(a)
    k = mon(1, k=1)
    alpha = case0(ONE_NODE, mul_(
        add_(MonNode(_mon_shift(a, quad(n=1))), MonNode(mon(1, qexp=quad(n=-1)))),
        pair.alpha))
    beta_kq = subst_param_times_q(pair.beta, "k")
    body = add_(
        mul_(MonNode(mon(1, qexp=quad(n=-1))),
             add_(mul_(add_(ONE_NODE, MonNode(_mon_shift(a, quad(n=2)))), pair.beta),
                  neg_(mul_(Poch(k, ONE, lin(1)),
                            Poch(k.times(ainv), ONE, lin(1)),
                            shift_n(beta_kq, -1))))),
        neg_(mul_(MonNode(a), unit_beta_node(pair))))
    beta = case0(ONE_NODE, body)
    return replace(pair, name=name or f"star({pair.name})", alpha=alpha,
                   beta=beta, note="")


def combinator_linear(p1: PairSpec, p2: PairSpec, c1, c2,
                      name: Optional[str] = None) -> PairSpec:
    """Linear combination with the unit-pair correction term.

    alpha_n = c1 alpha1_n + c2 alpha2_n for n >= 1 (alpha_0 = 1), and
    beta_n = c1 beta1_n + c2 beta2_n + (1 - c1 - c2)(k,k/a;q)_n/((aq,q;q)_n).
    c1, c2 may be rationals or n-free expression trees.
    """
    _require_plain(p1, "combinator_linear")
    _require_plain(p2, "combinator_linear")
    if p1.a_value != p2.a_value:
        raise ValueError("combinator_linear requires pairs with the same a")
    if p1.scale != p2.scale:
        raise ValueError("combinator_linear requires a common scale")
    c1n, c2n = _as_node(c1), _as_node(c2)
    alpha = case0(ONE_NODE, add_(mul_(c1n, p1.alpha), mul_(c2n, p2.alpha)))
    beta = case0(ONE_NODE, add_(
        mul_(c1n, p1.beta), mul_(c2n, p2.beta),
        mul_(add_(ONE_NODE, neg_(c1n), neg_(c2n)), unit_beta_node(p1))))
    k_free = (p1.k_free and p2.k_free
              and "k" not in params_of(c1n) | params_of(c2n))
    return replace(p1, name=name or f"linear({p1.name},{p2.name})",
                   alpha=alpha, beta=beta, k_free=k_free, note="")


def shift_pairs(pair: PairSpec):
    """Two ordinary pairs built from an ordinary pair taken at a -> aq.

    The star pair keeps beta*_n = beta_n(aq) and reweights alpha by partial
    fractions in (1 - aq^{2n+1}); the dagger pair carries extra q^n weights.
    Both are pairs relative to a (k = 0) and use alpha*_0 = beta*_0 = 1.
    """
    _require_plain(pair, "shift_pairs")
    if pair.k_value != ZERO:
        raise ValueError("shift_pairs consumes an ordinary (k = 0) pair")
    if pair.a_value is not None:
        raise ValueError("shift_pairs needs a free a to rebind a -> aq")
    al = subst_param_times_q(pair.alpha, "a")
    be = subst_param_times_q(pair.beta, "a")
    one_minus_aq = Poch(mon(1, qexp=1, a=1), ONE, lin(1))
    d_up = Poch(mon(1, qexp=quad(1, n=2), a=1), ONE, lin(1))
    d_dn = Poch(mon(1, qexp=quad(-1, n=2), a=1), ONE, lin(1))
    star_alpha = case0(ONE_NODE, mul_(one_minus_aq, add_(
        div_(al, d_up),
        neg_(mul_(MonNode(mon(1, qexp=quad(-1, n=2), a=1)),
                  div_(shift_n(al, -1), d_dn))))))
    dag_alpha = case0(ONE_NODE, mul_(one_minus_aq, add_(
        mul_(MonNode(mon(1, qexp=quad(n=1))), div_(al, d_up)),
        neg_(mul_(MonNode(mon(1, qexp=quad(-1, n=1))),
                  div_(shift_n(al, -1), d_dn))))))
    star = replace(pair, name=f"shift_star({pair.name})", alpha=star_alpha,
                   beta=be, note="")
    dagger = replace(pair, name=f"shift_dagger({pair.name})", alpha=dag_alpha,
                     beta=mul_(MonNode(mon(1, qexp=quad(n=1))), be), note="")
    return star, dagger


def _map_constraints(constraints, invert: bool) -> set:
    out = set()
    for c in constraints:
        v = rat(c.value)
        if invert:
            if v:
                out.add((c.param, ONE / v))
        else:
            out.add((c.param, v))
    return out


def dual_wp(pair: PairSpec, name: Optional[str] = None) -> PairSpec:
    """The pair evaluated at (1/a, 1/k, 1/q), with beta scaled by (k/aq)^{2n}."""
    _require_plain(pair, "dual_wp")
    if pair.k_value is not None:
        raise ValueError("dual_wp requires a free k")
    prefactor = PowLin(Mon(ONE, (("k", 1),), quad(-1)).times(_mon_inv(_a_mon(pair))),
                       lin(n=2))
    alpha = dual_map(pair.alpha)
    beta = mul_(prefactor, dual_map(pair.beta))
    a_value = None if pair.a_value is None else _mon_inv(pair.a_value)
    cons = _map_constraints(pair.constraints, invert=True)
    cons.update((c.param, c.value) for c in _auto_constraints(alpha, beta))
    constraints = tuple(Constraint(p, rat(v))
                        for p, v in sorted(cons, key=lambda c: (c[0], str(c[1]))))
    return replace(pair, name=name or f"dual({pair.name})", alpha=alpha,
                   beta=beta, a_value=a_value, constraints=constraints, note="")


def dual_classic(pair: PairSpec, name: Optional[str] = None) -> PairSpec:
    """Ordinary-pair dual: alpha*_n = a^n q^{n^2} alpha_n(1/a, 1/q) and
    beta*_n = a^{-n} q^{-n^2-n} beta_n(1/a, 1/q)."""
    _require_plain(pair, "dual_classic")
    if pair.k_value != ZERO:
        raise ValueError("dual_classic applies to ordinary (k = 0) pairs")
    a = _a_mon(pair)
    alpha = mul_(PowLin(a, lin(n=1)), MonNode(mon(1, qexp=quad(nn=1))),
                 dual_map(pair.alpha))
    beta = mul_(PowLin(_mon_inv(a), lin(n=1)),
                MonNode(mon(1, qexp=quad(n=-1, nn=-1))), dual_map(pair.beta))
    a_value = None if pair.a_value is None else _mon_inv(pair.a_value)
    return replace(pair, name=name or f"dual({pair.name})", alpha=alpha,
                   beta=beta, a_value=a_value, note="")


# --- multiparameter families ------------------------------------------------------

SUPPORTED_TRIPLES = ((1, 1, 1), (1, 1, 2), (1, 2, 1), (1, 2, 2),
                     (2, 1, 1), (2, 1, 2), (2, 1, 3), (3, 1, 1))
MULTIPARAM_FAMILIES = ("SMBP", "EMBP", "JSMBP")


def _mp_alpha(family: str, d: int, e: int, h: int):
    # Entries are indexed by m = n/d; exponents already carry the base q^e
    # slot substitution, so everything below is in plain q powers.  The
    # (1 - a q^{2dm}) (a; q^d)_m / (1 - a) block enters with the zero at
    # a = 1 cancelled, keeping the a = 1 specialization in the domain.
    weight = Poch(mon(1, a=1, qexp=quad(n=2 * d)), ONE, lin(1))
    if family == "SMBP":
        num = mul_(PowLin(mon(-1), N), PowLin(mon(1, a=1), lin(n=h - d)),
                   MonNode(mon(1, qexp=quad(n=-Rat(d, 2),
                                            nn=rat(d * (h - d)) + Rat(d, 2)))),
                   weight, Poch(mon(1, a=1, qexp=d), rat(d), lin(-1, n=1)))
        return case0(ONE_NODE, div_(num, Poch(mon(1, qexp=d), rat(d), N)))
    if family == "EMBP":
        num = mul_(PowLin(mon(-1), N), PowLin(mon(1, a=1), lin(n=h - d - 1)),
                   MonNode(mon(1, qexp=quad(nn=d * (h - d)))),
                   weight, add_(ONE_NODE, MonNode(mon(1, a=1))),
                   Poch(mon(1, a=2, qexp=2 * d), rat(2 * d), lin(-1, n=1)))
        return case0(ONE_NODE, div_(num, Poch(mon(1, qexp=2 * d), rat(2 * d), N)))
    if family == "JSMBP":
        num = mul_(PowLin(mon(1, a=1), lin(n=h - d)),
                   MonNode(mon(1, qexp=quad(n=-Rat(d, 2), nn=d * (h - d)))),
                   weight, Poch(mon(1, a=1, qexp=d), rat(d), lin(-1, n=1)),
                   Poch(mon(1, qexp=Rat(d, 2)), rat(d), N))
        return case0(ONE_NODE,
                     div_(num, mul_(Poch(mon(1, qexp=d), rat(d), N),
                                    Poch(mon(1, qexp=Rat(d, 2), a=1), rat(d), N))))
    raise ValueError(f"unknown family {family!r}")


def _mp_beta(family: str, d: int, e: int, h: int):
    shell = div_(
        mul_(Poch(mon(1, k=1), rat(e), N), Poch(mon(1, k=1, a=-e), rat(e), N)),
        mul_(Poch(mon(1, qexp=e), rat(e), N), Poch(mon(1, qexp=e, a=e), rat(e), N)))
    dj = lin(j=d)
    # Same cancelled encoding of (1 - a q^{2dr}) (a; q^d)_r / (1 - a) as in
    # the alpha entries, guarded so the r = 0 term stays the empty product.
    weight = Poch(mon(1, a=1, qexp=quad(j=2 * d)), ONE, lin(1))
    common_num = (Poch(mon(1, qexp=quad(n=-e)), rat(e), dj),
                  Poch(mon(1, k=1, qexp=quad(n=e)), rat(e), dj),
                  weight)
    common_den = (Poch(mon(1, a=e, qexp=quad(e, n=e)), rat(e), dj),
                  Poch(mon(1, k=-1, a=e, qexp=quad(e, n=-e)), rat(e), dj))
    if family == "SMBP":
        num = (Poch(mon(1, a=1, qexp=d), rat(d), lin(-1, j=1)),
               PowLin(mon(-1, a=h - d + e * d, k=-d), J),
               MonNode(mon(1, qexp=quad(j=Rat((2 * e - 1) * d, 2),
                                        jj=Rat((2 * h - 2 * d + 1) * d, 2)))))
        den = (Poch(mon(1, qexp=d), rat(d), J),)
    elif family == "EMBP":
        num = (add_(ONE_NODE, MonNode(mon(1, a=1))),
               Poch(mon(1, a=2, qexp=2 * d), rat(2 * d), lin(-1, j=1)),
               PowLin(mon(-1, a=h - d - 1 + e * d, k=-d), J),
               MonNode(mon(1, qexp=quad(j=e * d, jj=d * (h - d)))))
        den = (Poch(mon(1, qexp=2 * d), rat(2 * d), J),)
    elif family == "JSMBP":
        num = (Poch(mon(1, a=1, qexp=d), rat(d), lin(-1, j=1)),
               Poch(mon(1, qexp=Rat(d, 2)), rat(d), J),
               PowLin(mon(1, a=h - d + e * d, k=-d), J),
               MonNode(mon(1, qexp=quad(j=Rat((2 * e - 1) * d, 2),
                                        jj=d * (h - d)))))
        den = (Poch(mon(1, qexp=d), rat(d), J),
               Poch(mon(1, qexp=Rat(d, 2), a=1), rat(d), J))
    else:
        raise ValueError(f"unknown family {family!r}")
    body = CaseSplit(lin(j=1), ONE_NODE,
                     div_(mul_(*(num + common_num)), mul_(*(den + common_den))))
    return mul_(shell, SumOver("j", lin(n=Rat(1, d)), body))


def multiparam_pair(family: str, d: int, e: int, h: int) -> PairSpec:
    """A multiparameter pair at slots (a^e, k, q^e) with index support d | n."""
    if family not in MULTIPARAM_FAMILIES:
        raise ValueError(f"unknown multiparameter family {family!r}")
    if (d, e, h) not in SUPPORTED_TRIPLES:
        raise ValueError(f"unsupported triple (d, e, h) = {(d, e, h)}")
    scale = 2 if family == "JSMBP" and d % 2 else 1
    alpha = _mp_alpha(family, d, e, h)
    beta = _mp_beta(family, d, e, h)
    guards = (lambda b, _e=e: rat(b["k"]) != rat(b["a"]) ** _e,)
    return PairSpec(f"{family}({d},{e},{h})", alpha, beta, a_value=None,
                    k_free=True, scale=scale, modulus_exp=e, alpha_divisor=d,
                    k_polynomial=False,
                    constraints=_auto_constraints(alpha, beta), guards=guards,
                    note=f"multiparameter {family} pair at (d,e,h)=({d},{e},{h})")

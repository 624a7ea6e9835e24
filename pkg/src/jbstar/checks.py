"""
Randomized identity suite for the Jordan calculus of a model.

Every check draws its own seeded stream, evaluates one identity on
``samples`` random inputs and reports the largest scale-free residual.
Identities are evaluated through an :class:`Ops` pair (Jordan product,
involution); the U operators and triple products are derived from that
pair by the intrinsic formulas, so a corrupted involution propagates into
every check that depends on it.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from . import _linalg as la
from .algebra import (
    exponential,
    inverse,
    involution,
    jordan_product,
    q_operator,
    triple_from_product,
    triple_product,
    u_bilinear,
    u_bilinear_from_product,
    u_operator,
    u_operator_from_product,
)
from .models import build_model, random_element, random_selfadjoint, random_unitary
from .spectral import random_tripotent
from .tolerances import EPS_ID


@dataclass(frozen=True)
class CheckResult:
    name: str
    samples: int
    max_residual: float
    tol: float
    passed: bool

    def to_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class Ops:
    jordan: Callable
    star: Callable

    def U(self, a, x):
        return u_operator_from_product(self.jordan, a, x)

    def Uab(self, a, b, x):
        return u_bilinear_from_product(self.jordan, a, b, x)

    def triple(self, x, y, z):
        return triple_from_product(self.jordan, self.star, x, y, z)

    def power(self, a, k):
        p = a.model.one()
        for _ in range(k):
            p = self.jordan(a, p)
        return p


STANDARD_OPS = Ops(jordan_product, involution)


def corrupted_ops(kind):
    """Deliberately wrong operations, used as a negative control."""
    if kind == "involution":
        return Ops(jordan_product, lambda x: x.model.wrap(np.swapaxes(x.data, -1, -2).copy()))
    if kind == "jordan":
        return Ops(lambda a, b: a.model.wrap(a.data @ b.data), involution)
    raise ValueError(f"unknown fault {kind!r}")


def _n(x):
    return x.norm()


def _scale(*xs):
    return max(1e-300, float(np.prod([max(_n(x), 1e-300) for x in xs])))


def _el(m, rng, lo=0.5, hi=2.0):
    return random_element(m, rng, float(rng.uniform(lo, hi)))


def _sa(m, rng, lo=0.5, hi=2.0):
    return random_selfadjoint(m, rng, float(rng.uniform(lo, hi)))


def _un(m, rng):
    return random_unitary(m, rng, float(rng.uniform(0.1, 3.0)))


# ---- individual identities; each returns the residual of one sample -------------

def _jordan_identity(m, ops, rng):
    a, b = _el(m, rng), _el(m, rng)
    a2 = ops.jordan(a, a)
    r = ops.jordan(ops.jordan(a, b), a2) - ops.jordan(a, ops.jordan(b, a2))
    return _n(r) / _scale(a, a, a, b)


def _power_associativity(m, ops, rng):
    a = _el(m, rng, 0.5, 1.2)
    i, j = (int(k) for k in rng.integers(1, 7, size=2))
    r = ops.power(a, i + j) - ops.jordan(ops.power(a, i), ops.power(a, j))
    return _n(r) / max(1.0, _n(a) ** (i + j))


def _fundamental_identity(m, ops, rng):
    a, b, x = _el(m, rng), _el(m, rng), _el(m, rng)
    r = ops.U(ops.U(a, b), x) - ops.U(a, ops.U(b, ops.U(a, x)))
    return _n(r) / _scale(a, a, a, a, b, b, x)


def _generalized_fundamental_identity(m, ops, rng):
    k = int(rng.integers(1, 5))
    As = [_el(m, rng, 0.5, 1.5) for _ in range(k)]
    b, x = _el(m, rng), _el(m, rng)
    c = b
    for a in As:
        c = ops.U(a, c)
    lhs = ops.U(c, x)
    rhs = x
    for a in reversed(As):
        rhs = ops.U(a, rhs)
    rhs = ops.U(b, rhs)
    for a in As:
        rhs = ops.U(a, rhs)
    return _n(lhs - rhs) / _scale(*As, *As, *As, *As, b, b, x)


def _jb_star_axiom(m, ops, rng):
    a = _el(m, rng)
    return abs(_n(ops.U(a, ops.star(a))) - _n(a) ** 3) / _n(a) ** 3


def _jb_axioms(m, ops, rng):
    a, b = _sa(m, rng), _sa(m, rng)
    a2 = ops.jordan(a, a)
    r1 = abs(_n(a2) - _n(a) ** 2) / _n(a) ** 2
    r2 = max(0.0, _n(a2) - _n(a2 + ops.jordan(b, b))) / _n(a) ** 2
    return max(r1, r2)


def _non_expansive(m, ops, rng):
    a, b, c = _el(m, rng), _el(m, rng), _el(m, rng)
    s = _scale(a, b, c)
    return max(0.0, _n(ops.triple(a, b, c)) - s) / s


def _unitary_identities(m, ops, rng):
    u = _un(m, rng)
    us = ops.star(u)
    one = m.one()
    r1 = _n(ops.U(u, us) - u)
    r2 = _n(ops.U(u, ops.jordan(us, us)) - one)
    r3 = _n(ops.jordan(u, us) - one)
    return max(r1, r2, r3)


def _involution_u_chain(m, ops, rng):
    k = int(rng.integers(1, 4))
    As = [_el(m, rng, 0.5, 1.5) for _ in range(k)]
    a0 = _el(m, rng)
    lhs, rhs = a0, ops.star(a0)
    for a in As:
        lhs = ops.U(a, lhs)
        rhs = ops.U(ops.star(a), rhs)
    return _n(ops.star(lhs) - rhs) / _scale(*As, *As, a0)


def _exponential_law(m, ops, rng):
    a = _el(m, rng, 0.3, 1.5)
    s, t = rng.uniform(-1.0, 1.0, size=2)
    r = ops.jordan(exponential(a * s), exponential(a * t)) - exponential(a * (s + t))
    return _n(r) / np.exp((abs(s) + abs(t)) * _n(a))


def _inverse_identities(m, ops, rng):
    u = _un(m, rng)
    p = _sa(m, rng, 0.1, 0.8)
    a = u + u_operator(u, p) * 0.5       # u (1 + p/2) u-type perturbation, invertible
    ai = inverse(a)
    one = m.one()
    s = max(1.0, _n(a) * _n(ai))
    r1 = _n(ops.jordan(a, ai) - one) / s
    r2 = _n(ops.jordan(ops.jordan(a, a), ai) - a) / (s * _n(a))
    x = _el(m, rng)
    r3 = _n(ops.U(a, ops.U(ai, x)) - x) / (s * s * _n(x))
    return max(r1, r2, r3)


def _q_relation(m, ops, rng):
    a, b, x = _el(m, rng), _el(m, rng), _el(m, rng)
    # Q(a, b)(x) = {a, x, b} = U_{a,b}(x*)
    return _n(ops.triple(a, x, b) - ops.Uab(a, b, ops.star(x))) / _scale(a, b, x)


def _peirce(ops, e, k, x):
    q2 = ops.triple(e, ops.triple(e, x, e), e)
    if k == 2:
        return q2
    lx = ops.triple(e, e, x)
    if k == 1:
        return (lx - q2) * 2
    return x - lx * 2 + q2


def _peirce_sums(m, ops, rng):
    e = random_tripotent(m, rng, deficiency=int(rng.integers(0, 2))).e
    x = _el(m, rng)
    parts = [_peirce(ops, e, k, x) for k in (0, 1, 2)]
    r_sum = _n(parts[0] + parts[1] + parts[2] - x)
    r_idem = max(_n(_peirce(ops, e, k, p) - p) for k, p in zip((0, 1, 2), parts))
    r_contr = max(max(0.0, _n(p) - _n(x)) for p in parts)
    r_tri = _n(ops.triple(e, e, e) - e)
    return max(r_sum, r_idem, r_contr, r_tri) / _n(x)


def _peirce_arithmetic(m, ops, rng):
    # {E_i, E_j, E_k} lies in E_{i-j+k}, and is zero when i - j + k is not 0, 1 or 2
    e = random_tripotent(m, rng, deficiency=1).e
    i, j, k = (int(v) for v in rng.integers(0, 3, size=3))
    x, y, z = (_peirce(ops, e, idx, _el(m, rng)) for idx in (i, j, k))
    t = ops.triple(x, y, z)
    target = i - j + k
    s = max(1e-300, _scale(x, y, z))
    if target in (0, 1, 2):
        return _n(_peirce(ops, e, target, t) - t) / s
    return _n(t) / s


def _isotope_triple_coincidence(m, ops, rng):
    u = _un(m, rng)
    us = ops.star(u)

    def prod_u(x, y):
        return ops.Uab(x, y, us)

    def star_u(x):
        return ops.U(u, ops.star(x))

    x, y, z = _el(m, rng), _el(m, rng), _el(m, rng)
    t_u = triple_from_product(prod_u, star_u, x, y, z)
    return _n(t_u - ops.triple(x, y, z)) / _scale(x, y, z)


def _isotope_unit(m, ops, rng):
    u = _un(m, rng)
    c = u + u_operator(u, _sa(m, rng, 0.1, 0.8)) * 0.5
    ci = inverse(c)
    basis = m.basis()
    idx = rng.choice(len(basis), size=min(8, len(basis)), replace=False)
    r = 0.0
    for i in idx:
        x = basis[i]
        r = max(r, _n(ops.Uab(ci, x, c) - x))
    return r / max(1.0, _n(c) * _n(ci))


def _fast_formulas(m, ops, rng):
    a, b, x = _el(m, rng), _el(m, rng), _el(m, rng)
    s = _scale(a, b, x)
    r1 = _n(u_operator(a, x) - ops.U(a, x)) / _scale(a, a, x)
    r2 = _n(u_bilinear(a, b, x) - ops.Uab(a, b, x)) / s
    r3 = _n(triple_product(a, b, x) - ops.triple(a, b, x)) / s
    r4 = _n(q_operator(a, x) - ops.triple(a, x, a)) / _scale(a, a, x)
    return max(r1, r2, r3, r4)


CHECKS = {
    "jordan_identity": _jordan_identity,
    "power_associativity": _power_associativity,
    "fundamental_identity": _fundamental_identity,
    "generalized_fundamental_identity": _generalized_fundamental_identity,
    "jb_star_axiom": _jb_star_axiom,
    "jb_axioms": _jb_axioms,
    "non_expansive": _non_expansive,
    "unitary_identities": _unitary_identities,
    "involution_u_chain": _involution_u_chain,
    "exponential_law": _exponential_law,
    "inverse_identities": _inverse_identities,
    "q_relation": _q_relation,
    "peirce_sums": _peirce_sums,
    "peirce_arithmetic": _peirce_arithmetic,
    "isotope_triple_coincidence": _isotope_triple_coincidence,
    "isotope_unit": _isotope_unit,
    "fast_formulas": _fast_formulas,
}


def run_check(name, model, samples=200, seed=0, tol=EPS_ID, ops=STANDARD_OPS):
    if samples < 1:
        raise ValueError("samples must be at least 1")
    m = build_model(model)
    rng = np.random.default_rng([seed, list(CHECKS).index(name)])
    worst = 0.0
    for _ in range(samples):
        r = float(CHECKS[name](m, ops, rng))
        worst = max(worst, r) if np.isfinite(r) else float("inf")
    return CheckResult(name, samples, worst, tol, bool(worst <= tol))


def run_identity_suite(model, samples=200, seed=0, tol=EPS_ID, ops=STANDARD_OPS, names=None):
    """Run every check (or ``names``) and return the list of results in a fixed order."""
    if samples < 1:
        raise ValueError("samples must be at least 1")
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    names = list(CHECKS) if names is None else list(names)
    return [run_check(n, model, samples, seed, tol, ops) for n in names]

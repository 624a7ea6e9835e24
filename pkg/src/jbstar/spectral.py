"""
Triple spectrum and triple functional calculus.

In a matrix realization the subtriple generated by ``a`` is diagonalized by
the singular value decomposition ``a = U diag(s) V*``: the triple spectrum is
the set of nonzero singular values and, for ``f`` with ``f(0) = 0``,

    f_t(a) = U diag(f(s)) V*.

Odd powers ``a^[2n+1] = {a, a, a^[2n-1]}`` give an independent route for odd
polynomials and are exposed as :func:`odd_power`.
"""
from dataclasses import dataclass

import numpy as np

from . import _linalg as la
from .algebra import l_operator, q_operator, triple_product
from .errors import NotRegular, NotTripotent, SpectralDomainError, StructureViolation
from .models import ModelDescriptor, build_model
from .tolerances import EPS_ID, EPS_INV

_EPS = np.finfo(float).eps


def _zero_tol(a):
    return 8 * max(a.model.n, 1) * _EPS * max(a.norm(), 1e-300)


@dataclass(frozen=True)
class TripleSpectrum:
    per_point: tuple   # sorted nonzero singular values at each grid point
    values: np.ndarray  # union over the grid, duplicates merged

    def __contains__(self, t):
        return bool(np.any(np.isclose(self.values, t, rtol=1e-12, atol=1e-14)))


def triple_spectrum(a):
    s = la.singular_values(a.data)
    tol = _zero_tol(a)
    per = tuple(np.sort(row[row > tol]) for row in s)
    allv = np.sort(np.concatenate(per)) if per else np.array([])
    if allv.size:
        keep = np.concatenate([[True], np.diff(allv) > 1e-12 * allv[-1]])
        allv = allv[keep]
    return TripleSpectrum(per, allv)


def is_von_neumann_regular(a):
    """0 lies outside the triple spectrum.

    At each grid point the singular values must be either numerically zero
    or above ``EPS_INV``.  For circle models the number of nonzero singular
    values must also be the same at every grid point: a change of rank means
    some singular value runs continuously down to 0, so 0 is in the closure
    of the spectrum even though no single fiber shows it.
    """
    s = la.singular_values(a.data)
    tol = _zero_tol(a)
    nonzero = s > tol
    if np.any(nonzero & (s <= EPS_INV)):
        return False
    ranks = nonzero.sum(axis=-1)
    return bool(np.all(ranks == ranks[0]))


def _vectorized(f, t):
    with np.errstate(all="ignore"):
        try:
            out = np.asarray(f(t), dtype=complex)
            if out.shape != t.shape:
                raise ValueError
        except (TypeError, ValueError):
            out = np.array([complex(f(float(v))) for v in t], dtype=complex)
    return out


def triple_functional_calculus(f, a):
    """f_t(a) for a function f on [0, ||a||] with f(0) = 0."""
    with np.errstate(all="ignore"):
        try:
            f0 = complex(f(0.0))
        except (ZeroDivisionError, ValueError, OverflowError):
            f0 = complex("nan")
    if np.isfinite(f0) and abs(f0) > 1e-12:
        raise SpectralDomainError(f"f(0) = {f0} but the triple calculus needs f(0) = 0")
    U, s, Vh = np.linalg.svd(a.data)
    tol = _zero_tol(a)
    mask = s > tol
    fs = np.zeros(s.shape, dtype=complex)
    if mask.any():
        vals = _vectorized(f, s[mask])
        if not np.all(np.isfinite(vals)):
            bad = s[mask][~np.isfinite(vals)]
            raise SpectralDomainError(f"f is not finite at spectrum point(s) {bad[:3]}")
        fs[mask] = vals
    out = (U * fs[..., None, :]) @ Vh
    m = a.model
    if m.has_symmetric:
        asym = np.max(np.abs(out - np.swapaxes(out, -1, -2))[:, m._sym_mask], initial=0.0)
        if asym > 1e-8 * max(1.0, np.max(np.abs(out), initial=0.0)):
            raise StructureViolation(f"calculus output left the symmetric model (asymmetry {asym:.3g})")
    return m.wrap(m.project(out))


def odd_power(a, k):
    """a^[k] for odd k >= 1 via a^[2n+1] = {a, a, a^[2n-1]}."""
    if k < 1 or k % 2 == 0:
        raise ValueError("odd_power needs an odd exponent >= 1")
    p = a
    for _ in range((k - 1) // 2):
        p = triple_product(a, a, p)
    return p


def generalized_inverse(a):
    """a-dagger = a^[-1] = U diag(1/s) V*, defined for von Neumann regular a.

    In matrix form this is the conjugate transpose of the Moore-Penrose
    pseudo-inverse; for invertible a it equals (a^-1)*.
    """
    if not is_von_neumann_regular(a):
        raise NotRegular("0 belongs to the triple spectrum")
    return triple_functional_calculus(lambda t: 1.0 / t, a)


def triple_square(a):
    """a^[2] = U diag(s^2) V*."""
    return triple_functional_calculus(lambda t: t * t, a)


@dataclass(frozen=True)
class Tripotent:
    e: object

    def __post_init__(self):
        r = (triple_product(self.e, self.e, self.e) - self.e).norm()
        if r > EPS_ID * max(1.0, self.e.norm()):
            raise NotTripotent(f"{{e,e,e}} differs from e by {r:.3g}")


def as_tripotent(e):
    return e if isinstance(e, Tripotent) else Tripotent(e)


def range_tripotent(a):
    """r(a) = Q(a-dagger)(a^[2]); the partial isometry of the polar decomposition."""
    ad = generalized_inverse(a)
    return Tripotent(q_operator(ad, triple_square(a)))


def peirce_projection(e, k, x):
    """P_k(e)(x) for k in {0, 1, 2}.

    P_2 = Q(e)^2,  P_1 = 2(L(e,e) - Q(e)^2),  P_0 = Id - 2 L(e,e) + Q(e)^2.
    """
    e = as_tripotent(e).e
    if k not in (0, 1, 2):
        raise ValueError("Peirce index must be 0, 1 or 2")
    q2 = q_operator(e, q_operator(e, x))
    if k == 2:
        return q2
    lx = l_operator(e, e, x)
    if k == 1:
        return (lx - q2) * 2
    return x - lx * 2 + q2


def peirce2_product(e, x, y):
    """Jordan product of the Peirce-2 algebra of e: x o_e y = {x, e, y}."""
    return triple_product(x, e, y)


def is_positive_invertible_in_peirce2(a, e, tol=1e-8):
    """a is positive and invertible in the unital JB*-algebra E_2(e).

    Checks membership (P_2(e) a = a), self-adjointness ({e, a, e} = a),
    invertibility with inverse a-dagger (a o_e a-dagger = e and
    a^2 o_e a-dagger = a), and positivity of the spectrum.  The spectrum is
    read off through the identification x -> e* x of E_2(e) with the corner
    algebra e*e M e*e, where self-adjoint elements become Hermitian.
    """
    e = as_tripotent(e).e
    scale = max(1.0, a.norm())
    if (peirce_projection(e, 2, a) - a).norm() > tol * scale:
        return False
    if (q_operator(e, a) - a).norm() > tol * scale:
        return False
    ad = generalized_inverse(a)
    if (peirce2_product(e, a, ad) - e).norm() > tol * max(1.0, a.norm() * ad.norm()):
        return False
    a2 = peirce2_product(e, a, a)
    if (peirce2_product(e, a2, ad) - a).norm() > tol * max(1.0, scale ** 2 * ad.norm()):
        return False
    b = la.ct(e.data) @ a.data
    if np.max(np.abs(b - la.ct(b)), initial=0.0) > tol * scale:
        return False
    ev = np.linalg.eigvalsh(la.hermitian_part(b))
    rank = (la.singular_values(e.data) > 0.5).sum(axis=-1)
    positive = (ev > EPS_INV).sum(axis=-1)
    return bool(np.all(ev > -tol * scale) and np.all(positive == rank))


def range_identities_residual(a, x):
    """Residuals of Q(a)Q(a-dagger) = Q(a-dagger)Q(a) = P_2(r(a)) and L(a, a-dagger) = L(r, r) at x."""
    ad = generalized_inverse(a)
    r = range_tripotent(a).e
    p2 = peirce_projection(r, 2, x)
    s = max(1.0, x.norm())
    return max(
        (q_operator(a, q_operator(ad, x)) - p2).norm() / s,
        (q_operator(ad, q_operator(a, x)) - p2).norm() / s,
        (l_operator(a, ad, x) - l_operator(r, r, x)).norm() / s,
    )


# ---- random regular elements and tripotents -------------------------------------

def _companion_full(model):
    """Same layout with every symmetric block replaced by a full one."""
    def swap(d):
        if d.kind == "symmetric_matrix":
            return ModelDescriptor.full(d.n)
        if d.kind == "direct_sum":
            return ModelDescriptor.direct_sum(*(swap(p) for p in d.parts))
        if d.kind == "circle_function":
            return ModelDescriptor.circle(swap(d.fiber), d.N)
        return d
    return build_model(swap(model.descriptor))


def _random_with_singular_values(model, rng, values_for_block):
    from .models import random_unitary
    full = _companion_full(model)
    W = random_unitary(full, rng, scale=float(rng.uniform(0.5, 3.0))).data
    X = random_unitary(full, rng, scale=float(rng.uniform(0.5, 3.0))).data
    data = np.zeros(model.shape, dtype=complex)
    for b in model.blocks:
        sl = slice(b.offset, b.offset + b.size)
        s = values_for_block(b.size)
        w = W[:, sl, sl]
        if b.symmetric:
            data[:, sl, sl] = (w * s) @ np.swapaxes(w, -1, -2)
        else:
            data[:, sl, sl] = (w * s) @ la.ct(X[:, sl, sl])
    return model.wrap(model.project(data))


def random_regular(model, seed=None, deficiency=0, smin=0.2, smax=2.0):
    """Random von Neumann regular element.

    Each block gets ``deficiency`` zero singular values (at most size - 1)
    and the rest uniform in [smin, smax]; the singular values do not vary
    over the circle, so the rank is constant.
    """
    model = build_model(model)
    rng = np.random.default_rng(seed)

    def values(m):
        d = min(deficiency, m - 1)
        return np.concatenate([rng.uniform(smin, smax, m - d), np.zeros(d)])

    return _random_with_singular_values(model, rng, values)


def random_tripotent(model, seed=None, deficiency=1):
    model = build_model(model)
    rng = np.random.default_rng(seed)

    def values(m):
        d = min(deficiency, m)
        return np.concatenate([np.ones(m - d), np.zeros(d)])

    return Tripotent(_random_with_singular_values(model, rng, values))


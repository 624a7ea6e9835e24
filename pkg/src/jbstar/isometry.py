"""
Surjective isometries between (components of) unitary sets.

The structured form of an isometry between principal components is

    Delta(u) = p o U_{e^{ik_n}} ... U_{e^{ik_1}} Phi(u)
             + (1 - p) o (U_{e^{-ik_n}} ... U_{e^{-ik_1}} Phi(u))*

with self-adjoint prefactors k_j, a central projection p and a Jordan
*-isomorphism Phi.  Black-box isometries are plain callables on unitaries.
Their decomposition goes through one-parameter groups: for a unital
isometry Delta_0 and self-adjoint h, t -> Delta_0(exp(ith)) is again a
one-parameter unitary group exp(itk(h)), the map h -> k(h) is real-linear,
k(1) = 2p - 1, and Phi(h) = k(1) o k(h).

All routines work inside unitary isotopes as well: pass ``source_unit`` /
``target_unit`` (or isotope contexts) and products, involutions and
exponentials are taken there.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import _linalg as la
from .algebra import (
    expi,
    involution,
    isotope,
    jordan_product,
    u_operator,
    unitary_isotope,
)
from .errors import (
    ConnectedUnitarySet,
    DecompositionError,
    FamilyInvariantViolated,
    HypothesisFailed,
    NonConvergent,
    NotUnital,
)
from .models import (
    build_model,
    distance,
    element_from_json,
    element_to_json,
    random_element,
    random_selfadjoint,
    random_unitary,
)
from .tolerances import EPS_ID, EPS_STONE, FD_STEP
from .unitary import in_principal_component


def context(model, unit=None):
    """Isotope context for ``unit`` (the model itself when ``unit`` is None)."""
    model = build_model(model)
    return isotope(model.one()) if unit is None else unitary_isotope(unit)


def _rel(a, b):
    return (a - b).norm() / max(1.0, a.norm(), b.norm())


# ---- Jordan *-isomorphism checks ------------------------------------------------

def jordan_isomorphism_residual(phi, source_ctx, target_ctx, max_pairs=400, seed=0):
    """Largest residual of the Jordan *-isomorphism conditions for a real matrix.

    Checks complex linearity exactly on the matrix, unitality, and product and
    involution preservation on canonical basis elements (all pairs when there
    are at most ``max_pairs``, a seeded sample otherwise).
    """
    S, T = source_ctx.model, target_ctx.model
    ds, dt = S.complex_dim, T.complex_dim
    Js = np.block([[np.zeros((ds, ds)), -np.eye(ds)], [np.eye(ds), np.zeros((ds, ds))]])
    Jt = np.block([[np.zeros((dt, dt)), -np.eye(dt)], [np.eye(dt), np.zeros((dt, dt))]])
    scale = max(1.0, np.abs(phi).max())
    res = np.abs(phi @ Js - Jt @ phi).max() / scale

    def F(x):
        return S.apply_real(phi, x, T)

    res = max(res, _rel(F(source_ctx.unit), target_ctx.unit))
    basis = S.basis()
    images = [F(b) for b in basis]
    k = len(basis)
    pairs = [(i, j) for i in range(k) for j in range(i, k)]
    if len(pairs) > max_pairs:
        rng = np.random.default_rng(seed)
        pairs = [pairs[i] for i in rng.choice(len(pairs), max_pairs, replace=False)]
    for i, j in pairs:
        lhs = F(source_ctx.product(basis[i], basis[j]))
        res = max(res, _rel(lhs, target_ctx.product(images[i], images[j])))
    for b, fb in zip(basis, images):
        res = max(res, _rel(F(source_ctx.star(b)), target_ctx.star(fb)))
    return res


# ---- structured isometries -------------------------------------------------------

@dataclass
class StructuredIsometry:
    source: object
    target: object
    prefactors: tuple
    p: object
    phi: np.ndarray
    source_unit: object = None
    target_unit: object = None
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        self.source = build_model(self.source)
        self.target = build_model(self.target)
        self.prefactors = tuple(self.prefactors)
        self.phi = np.asarray(self.phi, dtype=float)
        if self.phi.shape != (self.target.real_dim, self.source.real_dim):
            raise DecompositionError(f"phi has shape {self.phi.shape}")
        self.source_ctx = context(self.source, self.source_unit)
        self.target_ctx = context(self.target, self.target_unit)
        if self.check:
            self.validate()

    def validate(self, tol=1e-8):
        T = self.target_ctx
        p = self.p
        if _rel(T.product(p, p), p) > tol or _rel(T.star(p), p) > tol:
            raise DecompositionError("p is not a projection")
        if not T.is_central(p, tol):
            raise DecompositionError("p is not central")
        for k in self.prefactors:
            if _rel(T.star(k), k) > tol:
                raise DecompositionError("prefactor is not self-adjoint")
        r = jordan_isomorphism_residual(self.phi, self.source_ctx, T)
        if r > 1e-6:
            raise DecompositionError(f"phi is not a Jordan *-isomorphism (residual {r:.3g})")

    def apply_phi(self, x):
        return self.source.apply_real(self.phi, x, self.target)

    def __call__(self, u):
        return apply_structured_isometry(self, u)

    def inverse(self):
        """Inverse of a prefactor-free isometry: p' = Phi^-1(p), Phi' = Phi^-1."""
        if self.prefactors or self.source_unit is not None or self.target_unit is not None:
            raise ValueError("inverse is only provided for prefactor-free isometries on M")
        inv = np.linalg.inv(self.phi)
        p = self.target.apply_real(inv, self.p, self.source)
        return StructuredIsometry(self.target, self.source, (), p, inv)

    def to_json(self):
        d = {
            "source": self.source.descriptor.to_dict(),
            "target": self.target.descriptor.to_dict(),
            "prefactors": [element_to_json(k) for k in self.prefactors],
            "p": element_to_json(self.p),
            "phi": self.phi.tolist(),
        }
        if self.source_unit is not None:
            d["source_unit"] = element_to_json(self.source_unit)
        if self.target_unit is not None:
            d["target_unit"] = element_to_json(self.target_unit)
        return d

    @classmethod
    def from_json(cls, d, check=True):
        src, tgt = build_model(d["source"]), build_model(d["target"])

        def el(x, m):
            return element_from_json(x, m.descriptor)

        return cls(
            src, tgt,
            tuple(el(k, tgt) for k in d.get("prefactors", [])),
            el(d["p"], tgt),
            np.asarray(d["phi"], dtype=float),
            el(d["source_unit"], src) if d.get("source_unit") else None,
            el(d["target_unit"], tgt) if d.get("target_unit") else None,
            check,
        )


def apply_structured_isometry(delta, u):
    T = delta.target_ctx
    x = delta.apply_phi(u)
    plus, minus = x, x
    for k in delta.prefactors:
        plus = T.U(T.expi(k), plus)
        minus = T.U(T.expi(-k), minus)
    return T.product(delta.p, plus) + T.product(T.unit - delta.p, T.star(minus))


def identity_isometry(model):
    m = build_model(model)
    return StructuredIsometry(m, m, (), m.one(), np.eye(m.real_dim))


# ---- generators of one-parameter groups ---------------------------------------------

@dataclass
class OneParameterFamily:
    sampler: Callable
    ts: tuple = tuple(np.linspace(-1.0, 1.0, 9))

    def __call__(self, t):
        return self.sampler(t)


def _derivative(fam, delta=FD_STEP):
    """Central difference at 0 with one Richardson step; also returns the correction size."""
    def D(d):
        return (fam(d) - fam(-d)) * (1.0 / (2 * d))
    coarse, fine = D(delta), D(delta / 2)
    return (fine * 4 - coarse) * (1.0 / 3), (fine - coarse).norm()


def stone_parameter(fam, tol=EPS_STONE, invariant_tol=1e-8):
    """Self-adjoint h with fam(t) = exp(ith), from a one-parameter family.

    The family must satisfy u(0) = 1 and U_{u(t)}(u(s)) = u(2t + s) on the
    sample grid.
    """
    u0 = fam(0.0)
    m = u0.model
    if _rel(u0, m.one()) > invariant_tol:
        raise FamilyInvariantViolated("u(0) is not the unit")
    ts = list(fam.ts)
    samples = {t: fam(t) for t in ts}
    for t in ts:
        for s in ts[::2]:
            if _rel(u_operator(samples[t], samples[s]), fam(2 * t + s)) > invariant_tol:
                raise FamilyInvariantViolated(f"U_u(t) u(s) != u(2t+s) at t={t:.3g}, s={s:.3g}")
    d, corr = _derivative(fam)
    h = d * -1j
    if corr > 1e-4 * max(1.0, h.norm()) ** 3:
        raise NonConvergent(f"difference quotients disagree by {corr:.3g}")
    h = m.wrap(la.hermitian_part(h.data))
    err = max(distance(samples[t], expi(h * t)) for t in ts)
    if err > tol:
        raise NonConvergent(f"exp(ith) misses the family by {err:.3g}")
    return h


def derive_k(delta0, h, source_ctx=None, target_ctx=None, ts=(-1.0, -0.5, 0.5, 1.0), tol=EPS_STONE):
    """Generator k(h) of t -> delta0(exp(ith)), which is exp(itk(h))."""
    S = context(h.model) if source_ctx is None else source_ctx
    if target_ctx is None:
        one_img = delta0(S.unit)
        T = context(one_img.model)
    else:
        T = target_ctx
        one_img = delta0(S.unit)
    if _rel(one_img, T.unit) > 10 * EPS_ID:
        raise NotUnital(f"delta(1) misses the unit by {_rel(one_img, T.unit):.3g}")

    def fam(t):
        return delta0(S.expi(h * t))

    d, corr = _derivative(fam)
    k = T.selfadjoint_part(d * -1j)
    if corr > 1e-4 * max(1.0, k.norm()) ** 3:
        raise NonConvergent(f"difference quotients disagree by {corr:.3g}")
    err = max(distance(fam(t), T.expi(k * t)) for t in ts)
    if err > tol * max(1.0, h.norm()):
        raise DecompositionError(f"exp(itk) misses delta(exp(ith)) by {err:.3g}")
    return k


def k_matrix(delta0, source, target=None):
    """Real matrix of h -> k(h) in self-adjoint coordinates."""
    source = build_model(source)
    target = source if target is None else build_model(target)
    S, T = context(source), context(target)
    cols = [target.selfadjoint_coords(derive_k(delta0, b, S, T)).real for b in source.selfadjoint_basis()]
    return np.array(cols).T


def _projection_from_symmetry(s, T, tol=1e-6):
    """p = (unit + s)/2, snapped to an exact projection of the isotope.

    Through x -> w* x (w the unit) the symmetry s becomes a Hermitian matrix
    with eigenvalues +-1; p is w times its spectral projection onto +1.
    """
    w = T.unit.data
    herm = la.hermitian_part(la.ct(w) @ s.data)
    q = la.hermitian_function(herm, lambda x: (x > 0).astype(float))
    m = s.model
    p = m.wrap(m.project(w @ q))
    gap = distance(p * 2 - T.unit, s)
    if gap > tol:
        raise DecompositionError(f"k(1) is not a symmetry (off by {gap:.3g})")
    return p


def decompose_unital_isometry(delta0, source, target=None, source_unit=None, target_unit=None,
                              verify=5, seed=0, linearity_pairs=8):
    """Central projection p and Jordan *-isomorphism Phi of a unital isometry.

    Returns ``(p, phi)`` with ``phi`` a real matrix over real coordinates.
    ``source_unit`` / ``target_unit`` select unitary isotopes M(w1), N(w2).
    """
    source = build_model(source)
    target = source if target is None else build_model(target)
    S, T = context(source, source_unit), context(target, target_unit)

    p = _projection_from_symmetry(derive_k(delta0, S.unit, S, T), T)
    s = p * 2 - T.unit
    if not T.is_central(s, 1e-7):
        raise DecompositionError("k(1) is not central")

    basis = S.selfadjoint_basis()
    ks = [derive_k(delta0, b, S, T) for b in basis]

    # linearity and isometry of h -> k(h) on a few basis pairs
    rng = np.random.default_rng(seed)
    n = len(basis)
    for _ in range(min(linearity_pairs, n * n)):
        i, j = rng.integers(n, size=2)
        kij = derive_k(delta0, basis[i] + basis[j], S, T)
        if _rel(kij, ks[i] + ks[j]) > 1e-6:
            raise DecompositionError("h -> k(h) is not additive")
        if abs(distance(ks[i], ks[j]) - distance(basis[i], basis[j])) > 1e-6:
            raise DecompositionError("h -> k(h) is not isometric")

    images = [T.product(s, k) for k in ks]
    B = np.array([source.coords(b) for b in basis]).T
    P = np.array([target.coords(x) for x in images]).T
    F = P @ np.linalg.inv(B)
    phi = np.block([[F.real, -F.imag], [F.imag, F.real]])

    r = jordan_isomorphism_residual(phi, S, T)
    if r > 1e-6:
        raise DecompositionError(f"recovered Phi is not a Jordan *-isomorphism (residual {r:.3g})")
    for _ in range(verify):
        h = S.selfadjoint_part(random_element(source, rng, scale=float(rng.uniform(0.2, 2.0))))
        e = S.expi(h)
        img = source.apply_real(phi, e, target)
        rebuilt = T.product(p, img) + T.product(T.unit - p, T.star(img))
        if distance(rebuilt, delta0(e)) > 1e-6:
            raise DecompositionError("p o Phi + (1-p) o Phi* does not reproduce delta")
    return p, phi


def decompose_isometry(delta, source, target=None, verify=5, seed=0):
    """Structured form of an isometry between principal components.

    delta(1) is factored as a certified U-chain in the target; its hs become
    the prefactors, and the remaining unital isometry is decomposed.
    """
    source = build_model(source)
    target = source if target is None else build_model(target)
    e = delta(source.one())
    verdict = in_principal_component(e)
    if not verdict:
        raise DecompositionError(f"delta(1) is not certified principal ({verdict.status})")
    ks = verdict.certificate.hs
    back = [expi(-k) for k in reversed(ks)]

    def delta0(u):
        x = delta(u)
        for a in back:
            x = u_operator(a, x)
        return x

    p, phi = decompose_unital_isometry(delta0, source, target, verify=verify, seed=seed)
    return StructuredIsometry(source, target, ks, p, phi)


def gauge_matrix(original, recovered):
    """Real matrix V with recovered.phi = V original.phi (prefactor-free isometries on M).

    Peeling the recovered prefactors R instead of the original ones C leaves
    the automorphism  p o U_R^-1 U_C + (1 - p) o U_{-R}^-1 U_{-C}  in front
    of Phi; it is the identity when both chains are empty.
    """
    m, p = original.target, original.p
    one_minus = m.one() - p

    def chain(ks, sign, x):
        for k in ks:
            x = u_operator(expi(k * sign), x)
        return x

    def unchain(ks, sign, x):
        for k in reversed(ks):
            x = u_operator(expi(k * -sign), x)
        return x

    def V(x):
        plus = unchain(recovered.prefactors, 1, chain(original.prefactors, 1, x))
        minus = unchain(recovered.prefactors, -1, chain(original.prefactors, -1, x))
        return jordan_product(p, plus) + jordan_product(one_minus, minus)

    return m.linear_map_matrix(V)


def general_decompose(delta, w1, verify=5, seed=0, target=None):
    """Decomposition of an isometry on the component of w1, in the isotopes M(w1), N(delta(w1))."""
    source = w1.model
    w2 = delta(w1)
    target = w2.model if target is None else build_model(target)
    p, phi = decompose_unital_isometry(delta, source, target, w1, w2, verify=verify, seed=seed)
    return StructuredIsometry(source, target, (), p, phi, w1, w2)


# ---- random structured isometries ----------------------------------------------------

def _random_orthogonal(rng, m):
    q, r = np.linalg.qr(rng.standard_normal((m, m)))
    return q * np.sign(np.diag(r))


def random_jordan_automorphism(model, seed=None):
    """Real matrix of a random Jordan *-automorphism.

    Composed from per-block unitary conjugations (real orthogonal on
    symmetric blocks), symmetries x -> s x s, transposes of full blocks and
    permutations of equal blocks.
    """
    model = build_model(model)
    rng = np.random.default_rng(seed)
    blocks = model.blocks
    conj, flips = [], []
    for b in blocks:
        if b.symmetric:
            V = _random_orthogonal(rng, b.size)
            S = _random_orthogonal(rng, b.size)
            conj.append(V @ (S * rng.choice([-1.0, 1.0], b.size)) @ S.T)
            flips.append(False)
        else:
            g = rng.standard_normal((b.size, b.size)) + 1j * rng.standard_normal((b.size, b.size))
            V = la.expi_hermitian(la.hermitian_part(g))
            s = _random_orthogonal(rng, b.size)
            conj.append(V @ (s * rng.choice([-1.0, 1.0], b.size)) @ s.T)
            flips.append(bool(rng.integers(2)))
    groups = {}
    for i, b in enumerate(blocks):
        groups.setdefault((b.size, b.symmetric), []).append(i)
    target_of = list(range(len(blocks)))
    for idx in groups.values():
        perm = rng.permutation(idx)
        for a, bb in zip(idx, perm):
            target_of[a] = int(bb)

    def f(x):
        out = np.zeros_like(x.data)
        for i, b in enumerate(blocks):
            src = slice(b.offset, b.offset + b.size)
            blk = x.data[:, src, src]
            if flips[i]:
                blk = np.swapaxes(blk, -1, -2)
            V = conj[i]
            blk = V @ blk @ la.ct(V)
            t = blocks[target_of[i]]
            dst = slice(t.offset, t.offset + t.size)
            out[:, dst, dst] = blk
        return model.wrap(model.project(out))

    return model.linear_map_matrix(f)


def random_central_projection(model, seed=None):
    model = build_model(model)
    rng = np.random.default_rng(seed)
    return model.block_projection(rng.integers(2, size=len(model.blocks)).astype(bool))


def random_structured_isometry(model, seed=None, max_prefactors=3, scale=1.0):
    model = build_model(model)
    rng = np.random.default_rng(seed)
    p = random_central_projection(model, rng)
    phi = random_jordan_automorphism(model, rng)
    n = int(rng.integers(0, max_prefactors + 1))
    ks = tuple(random_selfadjoint(model, rng, scale=float(rng.uniform(0.1, scale))) for _ in range(n))
    return StructuredIsometry(model, model, ks, p, phi)


# ---- inverted triple products ------------------------------------------------------

@dataclass
class InvertedTripleReport:
    distance: float
    K: float
    residual: float
    b1_max_residual: float
    b1_samples: int
    b2_candidates: int
    b2_members: int
    b2_min_ratio: float | None   # min ||U_v(w*) - w|| / ||w - v|| over members

    @property
    def b2_vacuous(self):
        return self.b2_members == 0

    @property
    def b2_holds(self):
        return self.b2_vacuous or self.b2_min_ratio >= self.K


def _batched_expi(model, rng, count, scales):
    raws = model._random_raw_batch(rng, "selfadjoint", count)
    nrm = la.block_norms(raws).max(axis=-1)
    raws = raws * (scales / np.maximum(nrm, 1e-300))[:, None, None, None]
    return model.project(la.expi_hermitian(raws))


def verify_inverted_triple_preservation(delta, u, v, b1_samples=20, b2_samples=10_000, band=1e-3, seed=0):
    """Check Delta(U_v(u*)) = U_{Delta(v)}(Delta(u)*) and the metric conditions behind it.

    Reflection isometry: ||U_v(x*) - U_v(y*)|| = ||x - y|| on random principal unitaries.
    Expansion bound: ||U_v(w*) - w|| >= K ||w - v|| with K = 2 - 2||u - v||, on
    rejection-sampled members of {w : ||u - w|| = ||U_v(u*) - w|| = ||u - v||}
    (equalities within ``band``).  Candidates are U_{e^{ig}}(v) for random g;
    v itself is always a member and is not counted.
    """
    d = distance(u, v)
    if d >= 0.5:
        raise HypothesisFailed(f"||u - v|| = {d:.4g} is not below 1/2")
    m = u.model
    K = 2 - 2 * d
    uvu = u_operator(v, involution(u))
    residual = distance(delta(uvu), u_operator(delta(v), involution(delta(u))))

    rng = np.random.default_rng(seed)
    b1 = 0.0
    for _ in range(b1_samples):
        x = random_unitary(m, rng, scale=float(rng.uniform(0.1, 3.0)))
        y = random_unitary(m, rng, scale=float(rng.uniform(0.1, 3.0)))
        lhs = distance(u_operator(v, involution(x)), u_operator(v, involution(y)))
        b1 = max(b1, abs(lhs - distance(x, y)))

    members, ratio = 0, None
    V, U0, W0 = v.data, u.data, uvu.data
    chunk = 2000
    done = 0
    while done < b2_samples:
        c = min(chunk, b2_samples - done)
        done += c
        a = _batched_expi(m, rng, c, rng.uniform(0.0, 2.0 * d + 1e-3, c))
        w = a @ V[None] @ a
        d1 = la.block_norms(w - U0[None]).max(axis=-1)
        d2 = la.block_norms(w - W0[None]).max(axis=-1)
        dv = la.block_norms(w - V[None]).max(axis=-1)
        ok = (np.abs(d1 - d) <= band) & (np.abs(d2 - d) <= band) & (dv > 1e-12)
        if ok.any():
            ws = w[ok]
            lhs = la.block_norms(V[None] @ la.ct(ws) @ V[None] - ws).max(axis=-1)
            q = float((lhs / dv[ok]).min())
            members += int(ok.sum())
            ratio = q if ratio is None else min(ratio, q)
    return InvertedTripleReport(d, K, residual, b1, b1_samples, b2_samples, members, ratio)


# ---- extendibility -----------------------------------------------------------------

def _check_isometric(T, model, samples, seed):
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        x = random_element(model, rng, scale=float(rng.uniform(0.2, 2.0)))
        y = model.apply_real(T, x)
        if abs(y.norm() - x.norm()) > 1e-9 * max(1.0, x.norm()):
            return False
    return True


def check_extendable(per_component, model=None, samples=10, seed=0, tol=EPS_ID):
    """True when all per-component linear extensions coincide.

    With ``model`` given, each matrix is first checked to be isometric on
    random elements.
    """
    Ts = [np.asarray(T, dtype=float) for T in per_component]
    if model is not None:
        m = build_model(model)
        for T in Ts:
            if not _check_isometric(T, m, samples, seed):
                raise HypothesisFailed("per-component map is not isometric")
    if len(Ts) <= 1:
        return True
    ref = Ts[0]
    scale = max(1.0, np.abs(ref).max())
    return all(np.abs(T - ref).max() <= tol * scale for T in Ts[1:])


def align_central_projection(T, T0, model, samples=10, seed=0, tol=1e-8):
    """Central p with T = T0 on M o p and T = -T0 on M o (1 - p).

    Requires T0 to be a Jordan *-isomorphism and U_{T0(u)} = U_{T(u)} on
    sampled principal unitaries.  p = T0^-1((1 + T(1)) / 2).
    """
    m = build_model(model)
    ctx = context(m)
    if jordan_isomorphism_residual(T0, ctx, ctx) > 1e-6:
        raise HypothesisFailed("T0 is not a Jordan *-isomorphism")
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        u = random_unitary(m, rng, scale=float(rng.uniform(0.1, 3.0)))
        x = random_element(m, rng)
        a, b = m.apply_real(T0, u), m.apply_real(T, u)
        if _rel(u_operator(a, x), u_operator(b, x)) > tol:
            raise HypothesisFailed("U_{T0(u)} and U_{T(u)} differ")
    s = m.apply_real(T, m.one())
    if _rel(jordan_product(s, s), m.one()) > tol or _rel(involution(s), s) > tol:
        raise HypothesisFailed("T(1) is not a symmetry")
    q1 = (m.one() + s) * 0.5
    p = m.from_real(np.linalg.solve(T0, m.to_real(q1)))
    one_minus = m.one() - p
    for b in m.basis():
        x, y = jordan_product(p, b), jordan_product(one_minus, b)
        if _rel(m.apply_real(T, x), m.apply_real(T0, x)) > 1e-7:
            raise DecompositionError("T and T0 disagree on M o p")
        if _rel(m.apply_real(T, y), -m.apply_real(T0, y)) > 1e-7:
            raise DecompositionError("T and -T0 disagree on M o (1 - p)")
    return p


def doubling_sequence(h, s, t, m):
    """u_l = exp(i(-s + l (s + t) / 2^m) h) for l = 0 .. 2^(m+1)."""
    step = (s + t) / 2 ** m
    return [expi(h * (-s + l * step)) for l in range(2 ** (m + 1) + 1)]


def inverted_product_residual(delta, pairs):
    """max ||Delta(U_u(v*)) - U_{Delta(u)}(Delta(v)*)|| over pairs."""
    worst = 0.0
    for u, v in pairs:
        lhs = delta(u_operator(u, involution(v)))
        rhs = u_operator(delta(u), involution(delta(v)))
        worst = max(worst, distance(lhs, rhs))
    return worst


# ---- a non-extendable isometry ---------------------------------------------------

@dataclass
class NonExtendableExample:
    """Delta = U_{u1} on the principal component and U_{u2} elsewhere."""

    model: object
    c: float
    u1: object
    u2: object
    T1: np.ndarray
    T2: np.ndarray
    witness: object
    witness_windings: tuple

    def delta(self, u):
        verdict = in_principal_component(u)
        if verdict.principal is None:
            raise DecompositionError(f"cannot place u in a component: {verdict.reason}")
        return u_operator(self.u1 if verdict.principal else self.u2, u)

    __call__ = delta

    def _vanishing_at_nodes(self, rng, scale):
        # self-adjoint element vanishing at lambda = 1 and lambda = -1
        g = random_selfadjoint(self.model, rng, scale)
        return self.model.wrap(g.data * np.sin(self.model.theta)[:, None, None] ** 2)

    def _winding_one(self):
        m = self.model
        theta = m.theta
        zeta = np.exp(1j * (theta + (np.pi - 2 * self.c) * (1 + np.cos(theta)) / 2))
        data = np.broadcast_to(np.eye(m.n, dtype=complex), m.shape).copy()
        o = m.blocks[0].offset
        data[:, o, o] = zeta
        return m.wrap(data)

    def sample_pairs(self, count, seed=0):
        """Pairs (x, y, same_component).

        Half the pairs share a component.  Cross pairs are x = U_a(x0) and
        y = U_a(z) with x0 = 1 and z = diag(-1, 1, ...) at lambda = -1 and
        e^{2ic} z = diag(-1, ...) at lambda = 1, so that both ||x - y|| and
        ||Delta x - Delta y|| are attained at grid points.
        """
        m = self.model
        rng = np.random.default_rng(seed)
        z0 = self._winding_one()
        out = []
        for i in range(count):
            kind = i % 4
            if kind == 0:
                x = random_unitary(m, rng, float(rng.uniform(0.2, 3.0)))
                y = random_unitary(m, rng, float(rng.uniform(0.2, 3.0)))
                out.append((x, y, True))
            elif kind == 1:
                a = expi(random_selfadjoint(m, rng, float(rng.uniform(0.2, 1.5))))
                b = expi(random_selfadjoint(m, rng, float(rng.uniform(0.2, 1.5))))
                out.append((u_operator(a, self.witness), u_operator(b, self.witness), True))
            else:
                a = expi(random_selfadjoint(m, rng, float(rng.uniform(0.2, 1.5))))
                x0 = expi(self._vanishing_at_nodes(rng, float(rng.uniform(0.1, 1.5))))
                z = u_operator(expi(self._vanishing_at_nodes(rng, float(rng.uniform(0.1, 1.0)))), z0)
                out.append((u_operator(a, x0), u_operator(a, z), False))
        return out

    def verify(self, pairs=200, seed=0):
        worst_iso, worst_cross = 0.0, 0.0
        for x, y, same in self.sample_pairs(pairs, seed):
            dxy = distance(x, y)
            worst_iso = max(worst_iso, abs(distance(self.delta(x), self.delta(y)) - dxy))
            if not same:
                worst_cross = max(worst_cross, abs(dxy - 2.0))
        return {
            "pairs": pairs,
            "max_isometry_defect": worst_iso,
            "max_cross_distance_defect": worst_cross,
            "extendable": check_extendable([self.T1, self.T2]),
        }


def build_nonextendable_example(model, c=0.7):
    """Glue two different U-operator isometries across unitary components.

    Needs a circle model, whose unitary set has a non-principal component
    (the witness has determinant winding 1 in its first block).
    """
    m = build_model(model)
    if not m.is_circle:
        raise ConnectedUnitarySet("the unitary group of a matrix model is connected")
    if abs(np.exp(2j * c) - 1) < 1e-6:
        raise ValueError("c must not be a multiple of pi: U_{e^{ic}} would be the identity")
    u1 = m.one()
    u2 = expi(m.one() * c)
    ex = NonExtendableExample(m, c, u1, u2, None, None, None, ())
    w = ex._winding_one()
    verdict = in_principal_component(w)
    if verdict.principal is not False:
        raise DecompositionError("witness is not certified non-principal")
    ex.witness, ex.witness_windings = w, verdict.windings
    ex.T1 = m.linear_map_matrix(lambda x: u_operator(u1, x))
    ex.T2 = m.linear_map_matrix(lambda x: u_operator(u2, x))
    return ex

"""
Unitaries: the logarithm step, U-chain factorizations, windings and
principal-component certificates.

A U-chain ``hs = [h_1, ..., h_n]`` (self-adjoint elements) encodes

    U_{exp(i h_n)} ... U_{exp(i h_1)} (base)

so ``h_1`` is applied first.  With ``base = 1`` every such product lies in
the principal component, and conversely every principal unitary has one.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _linalg as la
from .algebra import expi, involution, is_unitary, require_unitary, u_operator
from .errors import (
    DecompositionError,
    DistanceTooLarge,
    LogBranch,
    NotCircleModel,
    NotUnitary,
    PhaseJumpTooLarge,
    StructureViolation,
)
from .models import build_model, distance, element_from_json, element_to_json, random_selfadjoint
from .tolerances import EPS_BRANCH, EPS_MARGIN, EPS_REC, MAX_PHASE_JUMP

__all__ = [
    "UChainFactorization", "ComponentVerdict", "is_unitary", "factor_step", "factor_path",
    "evaluate_u_chain", "winding_number", "block_windings", "in_principal_component",
    "component_of_square", "adjoint_certificate", "square_action_certificate",
    "in_isotope_principal_component",
]


@dataclass(frozen=True)
class UChainFactorization:
    hs: tuple
    base: object = None
    unit: object = None   # isotope unit u when the chain lives in M(u)

    def __post_init__(self):
        object.__setattr__(self, "hs", tuple(self.hs))

    @property
    def model(self):
        for x in (self.base, self.unit, *self.hs):
            if x is not None:
                return x.model
        return None

    def context(self):
        from .algebra import unitary_isotope
        return None if self.unit is None else unitary_isotope(self.unit)

    def evaluate(self, model=None):
        ctx = self.context()
        if ctx is not None:
            return ctx.chain(self.hs, self.base)
        m = self.model if model is None else build_model(model)
        if m is None:
            raise ValueError("empty chain with no base: pass the model")
        x = m.one() if self.base is None else self.base
        for h in self.hs:
            a = expi(h)
            x = u_operator(a, x)
        return x

    def adjoint(self):
        """Chain for the involution of the value (negated hs, adjoint base)."""
        if self.unit is not None:
            raise ValueError("adjoint of isotope chains is not supported")
        base = None if self.base is None else involution(self.base)
        return UChainFactorization(tuple(-h for h in self.hs), base)

    def to_json(self, model=None):
        m = self.model if model is None else build_model(model)
        base = m.one() if self.base is None else self.base
        d = {"base": element_to_json(base), "hs": [element_to_json(h) for h in self.hs]}
        if self.unit is not None:
            d["unit"] = element_to_json(self.unit)
        return d

    @classmethod
    def from_json(cls, d):
        base = element_from_json(d["base"])
        hs = tuple(element_from_json(h, base.model.descriptor) for h in d.get("hs", []))
        unit = element_from_json(d["unit"], base.model.descriptor) if d.get("unit") else None
        return cls(hs, base, unit)


def evaluate_u_chain(f, model=None):
    return f.evaluate(model)


# ---- the logarithm step -------------------------------------------------------

def _log_step_raw(u, v):
    """h = u (-i Log(u* v)) as a raw array, with the branch diagnostics."""
    w = la.ct(u.data) @ v.data
    vals, z = la.normal_schur(w)
    gap = float(np.min(np.abs(vals + 1)))
    k = la.hermitian_part((z * np.angle(vals)[..., None, :]) @ la.ct(z))
    return u.data @ k, gap


def factor_step_raw(u, v):
    """Unprojected output of :func:`factor_step` (for structure diagnostics)."""
    return _log_step_raw(u, v)[0]


def factor_step(u, v):
    """Self-adjoint h of the isotope M(u) with exp_u(i h) = v.

    h = u (-i Log(u* v)) with the principal logarithm, so ``||h|| <= pi``.
    Needs ``||u - v|| < 2 - EPS_MARGIN``; the spectrum of u* v must then stay
    away from -1, which is also checked directly.
    """
    require_unitary(u, v)
    d = distance(u, v)
    if d >= 2 - EPS_MARGIN:
        raise DistanceTooLarge(f"||u - v|| = {d:.6g} is not below 2 - {EPS_MARGIN}")
    h, gap = _log_step_raw(u, v)
    if gap < EPS_BRANCH:
        raise LogBranch(f"spectrum of u*v within {gap:.3g} of -1")
    m = u.model
    if m.has_symmetric:
        asym = np.max(np.abs(h - np.swapaxes(h, -1, -2))[:, m._sym_mask], initial=0.0)
        if asym > 1e-9 * max(1.0, np.max(np.abs(h), initial=0.0)):
            raise StructureViolation(f"logarithm step left the symmetric model (asymmetry {asym:.3g})")
    return m.wrap(m.project(h))


def factor_path(path, ctx=None):
    """U-chain for the endpoint of a path of unitaries starting at the unit.

    Consecutive points must be closer than ``2 - EPS_MARGIN``.  After ``j``
    steps the endpoint is ``T_j(1)`` with ``T_j = U_{e^{ig_1}} ... U_{e^{ig_j}}``.
    The next point is pulled back by ``T_j^{-1}``, which is an isometry
    taking the previous point to the unit, factored against the unit, and
    the half logarithm becomes ``g_{j+1}``.  ``ctx`` (a unitary isotope) runs
    the same construction inside M(w).
    """
    path = list(path)
    if not path:
        raise ValueError("empty path")
    m = path[0].model
    if ctx is None:
        one = m.one()

        def U(a, x):
            return u_operator(a, x)

        E = expi
    else:
        one = ctx.unit
        U, E = ctx.U, ctx.expi
    for p in path:
        if not (is_unitary(p) if ctx is None else ctx.is_unitary(p)):
            raise NotUnitary("path contains a non-unitary element")
    if distance(path[0], one) > EPS_REC:
        raise ValueError("path must start at the unit")

    gs = []     # g_1 outermost
    for j in range(1, len(path)):
        d = distance(path[j - 1], path[j])
        if d >= 2 - EPS_MARGIN:
            raise DistanceTooLarge(f"step {j}: ||u_j - u_(j+1)|| = {d:.6g}")
        w = path[j]
        for g in gs:
            w = U(E(-g), w)
        gs.append(factor_step(one, w) * 0.5)
    chain = UChainFactorization(tuple(reversed(gs)), None, None if ctx is None else ctx.unit)
    err = distance(chain.evaluate(m), path[-1])
    if err > EPS_REC:
        raise DecompositionError(f"factorization misses the endpoint by {err:.3g}")
    return chain


# ---- windings -------------------------------------------------------------------

def _phase_increments(d):
    return np.angle(np.roll(d, -1) / d)


def block_windings(u):
    """Winding numbers of lambda -> det u_b(lambda) for each diagonal block b."""
    m = u.model
    if not m.is_circle:
        raise NotCircleModel("winding numbers need a circle-function model")
    require_unitary(u)
    out = []
    for b in m.blocks:
        sl = slice(b.offset, b.offset + b.size)
        det = np.linalg.det(u.data[:, sl, sl])
        inc = _phase_increments(det)
        jump = float(np.max(np.abs(inc)))
        if jump >= MAX_PHASE_JUMP:
            raise PhaseJumpTooLarge(f"phase of det jumps by {jump:.3f} between grid points")
        out.append(int(np.rint(inc.sum() / (2 * np.pi))))
    return tuple(out)


def winding_number(u):
    """Winding number of lambda -> det u(lambda) around 0."""
    return sum(block_windings(u))


# ---- principal component ------------------------------------------------------

@dataclass(frozen=True)
class ComponentVerdict:
    status: str                       # certified_true | certified_false | inconclusive
    windings: tuple | None = None
    certificate: UChainFactorization | None = None
    reason: str = ""
    error: float | None = field(default=None, compare=False)

    @property
    def principal(self):
        return {"certified_true": True, "certified_false": False}.get(self.status)

    def __bool__(self):
        return self.status == "certified_true"


def _log_chain(r, need):
    """K/2 with K = -i Log r pointwise, or None unless the spectrum gap at -1 exceeds ``need``."""
    vals, z = la.normal_schur(r.data)
    gap = float(np.min(np.abs(vals + 1)))
    if gap <= need:
        return None
    k = la.hermitian_part((z * np.angle(vals)[..., None, :]) @ la.ct(z))
    return r.model.wrap(r.model.project(0.5 * k))


def _nonzero(hs):
    return tuple(h for h in hs if h.norm() > 1e-15)


def in_principal_component(u, attempts=16, seed=0):
    """Membership of u in the principal component, with a certificate.

    Matrix models have a connected unitary group; u = exp(iK) with the
    principal logarithm and the certificate is ``[K/2]``.

    Circle models: a nonzero winding of some block determinant certifies
    non-membership.  Otherwise each block is divided by a continuous branch
    of (det)^(1/size), which is a central principal unitary, and the result
    r (possibly conjugated as U_q(r) by a few constant principal unitaries q)
    is searched for a grid-uniform gap in its spectrum at -1.  A gap makes
    the pointwise principal logarithm continuous and yields a certificate;
    failing that the verdict is inconclusive.
    """
    require_unitary(u)
    m = u.model
    if not m.is_circle:
        cert = UChainFactorization(_nonzero((_log_chain(u, -1.0),)), None)  # any gap will do
        err = distance(cert.evaluate(m), u)
        if err > EPS_REC:
            return ComponentVerdict("inconclusive", None, None, f"logarithm reconstruction error {err:.3g}", err)
        return ComponentVerdict("certified_true", None, cert, "unitary group of a matrix model is connected", err)

    try:
        ws = block_windings(u)
    except PhaseJumpTooLarge as exc:
        return ComponentVerdict("inconclusive", None, None, str(exc))
    if any(ws):
        return ComponentVerdict("certified_false", ws, None, f"nonzero determinant winding {ws}")

    # central phase normalization: h0 = psi_b / (2 size_b) on each block
    h0 = np.zeros(m.shape, dtype=complex)
    for b in m.blocks:
        sl = slice(b.offset, b.offset + b.size)
        det = np.linalg.det(u.data[:, sl, sl])
        psi = np.angle(det[0]) + np.concatenate([[0.0], np.cumsum(_phase_increments(det)[:-1])])
        idx = np.arange(b.offset, b.offset + b.size)
        h0[:, idx, idx] = (psi / (2 * b.size))[:, None]
    h0 = m.wrap(h0)
    a0 = expi(h0)
    u1 = u_operator(involution(a0), u)

    rng = np.random.default_rng(seed)
    fiber = build_model(m.fiber_descriptor)
    for attempt in range(attempts + 1):
        if attempt == 0:
            g, r = None, u1
        else:
            g = m.constant(random_selfadjoint(fiber, rng, scale=float(rng.uniform(0.3, 1.5))).data[0])
            r = u_operator(expi(g), u1)
        variation = float(np.max(la.block_norms(np.roll(r.data, -1, axis=0) - r.data)))
        half_k = _log_chain(r, max(EPS_BRANCH, variation))
        if half_k is None:
            continue
        hs = [half_k]
        if g is not None:
            hs.append(-g)
        hs.append(h0)
        cert = UChainFactorization(_nonzero(hs), None)
        err = distance(cert.evaluate(m), u)
        if err <= EPS_REC:
            return ComponentVerdict("certified_true", ws, cert, "winding zero and continuous logarithm found", err)
    return ComponentVerdict("inconclusive", ws, None, "winding zero but no certificate found")


def adjoint_certificate(cert):
    """Certificate of w* from one of w."""
    return cert.adjoint()


def square_action_certificate(w_cert, u_cert):
    """Certificate of U_w(u) from certificates of w (base 1) and u.

    If w = U_{a_m} ... U_{a_1}(1) then U_w = U_{a_m} ... U_{a_1} U_{a_1} ... U_{a_m},
    so the chain of u is followed by the hs of w reversed and then in order.
    """
    if w_cert.base is not None or w_cert.unit is not None or u_cert.unit is not None:
        raise ValueError("square_action_certificate needs plain chains with w based at 1")
    hs = tuple(u_cert.hs) + tuple(reversed(w_cert.hs)) + tuple(w_cert.hs)
    return UChainFactorization(hs, u_cert.base)


class SquareAction:
    """u -> U_v(u) on certified principal unitaries (component of v^2)."""

    def __init__(self, v):
        require_unitary(v)
        self.v = v
        self.v_winding = winding_number(v) if v.model.is_circle else None

    def __call__(self, u):
        if isinstance(u, UChainFactorization):
            if u.base is not None or u.unit is not None:
                raise ValueError("expected a certificate based at the unit")
            x = u.evaluate(self.v.model)
        else:
            verdict = in_principal_component(u)
            if not verdict:
                raise ValueError(f"input is not certified principal ({verdict.status})")
            x = u
        out = u_operator(self.v, x)
        if self.v_winding is not None:
            w = winding_number(out)
            if w != 2 * self.v_winding:
                raise DecompositionError(f"winding {w} differs from 2 * {self.v_winding}")
        return out


def component_of_square(v):
    return SquareAction(v)


def in_isotope_principal_component(x, u_cert):
    """Membership of x in the principal component of M(u), u = evaluate(u_cert).

    T = U_{e^{ih_n}} ... U_{e^{ih_1}} is a Jordan *-isomorphism from M onto
    M(u) with T(1) = u.  x is classified through y = T^-1(x) in M, and a
    certificate for y transports to the isotope chain with hs T(g_j).
    """
    if u_cert.base is not None or u_cert.unit is not None:
        raise ValueError("expected a certificate of u based at 1")
    m = x.model
    u = u_cert.evaluate(m)
    y = x
    for h in u_cert.hs[::-1]:
        y = u_operator(expi(-h), y)
    verdict = in_principal_component(y)
    if not verdict:
        return verdict

    def T(z):
        for h in u_cert.hs:
            z = u_operator(expi(h), z)
        return z

    cert = UChainFactorization(tuple(T(g) for g in verdict.certificate.hs), None, u)
    err = distance(cert.evaluate(m), x)
    if err > EPS_REC:
        return ComponentVerdict("inconclusive", verdict.windings, None, f"transport error {err:.3g}", err)
    return ComponentVerdict("certified_true", verdict.windings, cert, "transported from M", err)

"""
Jordan and triple operations on model elements.

The fast routines use the associative matrix formulas

    a o b = (ab + ba)/2,   U_a(x) = a x a,   {x,y,z} = (x y* z + z y* x)/2,

which agree with the intrinsic Jordan definitions in any matrix
realization.  The intrinsic versions, written only in terms of a Jordan
product and an involution, are kept below (``*_from_product``) and are used
to cross-check the fast ones and to compute inside isotopes.
"""
import numpy as np

from . import _linalg as la
from .errors import NotUnitary, SingularElement
from .models import same_model
from .tolerances import EPS_ID, EPS_INV


def _jp(a, b):
    return 0.5 * (a @ b + b @ a)


def jordan_product(a, b):
    m = same_model(a, b)
    return m.wrap(_jp(a.data, b.data))


def involution(a):
    return a.model.wrap(la.ct(a.data))


def operator_norm(a):
    return a.norm()


def u_operator(a, x):
    """U_a(x) = a x a."""
    m = same_model(a, x)
    return m.wrap(a.data @ x.data @ a.data)


def u_bilinear(a, b, x):
    """U_{a,b}(x) = (a x b + b x a)/2."""
    m = same_model(a, b, x)
    return m.wrap(0.5 * (a.data @ x.data @ b.data + b.data @ x.data @ a.data))


def triple_product(x, y, z):
    m = same_model(x, y, z)
    ys = la.ct(y.data)
    return m.wrap(0.5 * (x.data @ ys @ z.data + z.data @ ys @ x.data))


def q_operator(a, x):
    """Q(a)(x) = {a, x, a} = a x* a."""
    m = same_model(a, x)
    return m.wrap(a.data @ la.ct(x.data) @ a.data)


def l_operator(a, b, x):
    """L(a, b)(x) = {a, b, x}."""
    return triple_product(a, b, x)


def jordan_power(a, k):
    """a^k built by repeated Jordan multiplication (k >= 0)."""
    p = a.model.one()
    for _ in range(k):
        p = jordan_product(a, p)
    return p


def exponential(a):
    """exp(a).  Uses an eigendecomposition when a or i*a is Hermitian."""
    d = a.data
    m = a.model
    scale = max(1.0, a.norm())
    if np.max(np.abs(d + la.ct(d)), initial=0.0) <= 1e-14 * scale:
        out = la.expi_hermitian(-1j * d)
    elif np.max(np.abs(d - la.ct(d)), initial=0.0) <= 1e-14 * scale:
        out = la.hermitian_function(d, np.exp)
    else:
        out = la.expm(d)
    return m.wrap(m.project(out))


def expi(h):
    """exp(i h) for self-adjoint h; the result is unitary to machine precision."""
    return h.model.wrap(h.model.project(la.expi_hermitian(h.data)))


def inverse(a):
    sv = la.singular_values(a.data)
    if sv[..., -1].min() <= EPS_INV:
        raise SingularElement(f"minimum singular value {sv[..., -1].min():.3g} <= {EPS_INV}")
    return a.model.wrap(a.model.project(np.linalg.inv(a.data)))


def is_invertible(a):
    return la.singular_values(a.data)[..., -1].min() > EPS_INV


def is_selfadjoint(a, tol=EPS_ID):
    return np.max(np.abs(a.data - la.ct(a.data)), initial=0.0) <= tol * max(1.0, a.norm())


def selfadjoint_part(a):
    return a.model.wrap(la.hermitian_part(a.data))


def is_unitary(u, tol=EPS_ID):
    """u o u* = 1 and u^2 o u* = u, within ``tol`` in norm."""
    d = u.data
    one = np.eye(u.model.n)
    r1 = la.block_norms(_jp(d, la.ct(d)) - one).max()
    r2 = la.block_norms(_jp(d @ d, la.ct(d)) - d).max()
    return bool(max(r1, r2) <= tol)


def require_unitary(*us, tol=EPS_ID):
    for u in us:
        if not is_unitary(u, tol):
            raise NotUnitary("element is not unitary")


# ---- operator commutation and the centre -------------------------------------

def _commutator_residual(a, b, cs):
    # (a o c) o b - a o (c o b) for every c in cs, at every grid point
    A, B = a[None], b[None]
    C = cs[:, None] if cs.ndim == 3 else cs
    r = _jp(_jp(A, C), B) - _jp(A, _jp(C, B))
    return la.block_norms(r).max(initial=0.0)


def operator_commute(a, b, tol=EPS_ID):
    """True when (a o c) o b = a o (c o b) for every basis element c.

    Basis elements are supported at a single grid point, so the check
    reduces to the fiber basis at each grid point.
    """
    m = same_model(a, b)
    res = _commutator_residual(a.data, b.data, m.fiber_basis)
    return bool(res <= tol * max(a.norm() * b.norm(), 1e-300))


def is_central(a, tol=EPS_ID):
    """a operator-commutes with every basis element."""
    m = a.model
    B = m.fiber_basis
    A = a.data[None, None]
    C = B[:, None, None]          # (k, 1, 1, n, n)
    D = B[None, :, None]          # (1, k, 1, n, n)
    r = _jp(_jp(A, C), D) - _jp(A, _jp(C, D))
    return bool(la.block_norms(r).max(initial=0.0) <= tol * max(a.norm(), 1e-300))


# ---- intrinsic formulas (oracles) --------------------------------------------

def u_bilinear_from_product(prod, a, b, x):
    """U_{a,b}(x) = (a o x) o b + (b o x) o a - (a o b) o x."""
    return prod(prod(a, x), b) + prod(prod(b, x), a) - prod(prod(a, b), x)


def u_operator_from_product(prod, a, x):
    """U_a(x) = 2 (a o x) o a - a^2 o x."""
    return 2 * prod(prod(a, x), a) - prod(prod(a, a), x)


def triple_from_product(prod, star, x, y, z):
    """{x,y,z} = (x o y*) o z + (z o y*) o x - (x o z) o y*."""
    ys = star(y)
    return prod(prod(x, ys), z) + prod(prod(z, ys), x) - prod(prod(x, z), ys)


# ---- isotopes -----------------------------------------------------------------

class IsotopeContext:
    """The isotope M_(c) of a model for invertible c.

    Product ``x o_c y = U_{x,y}(c)``, quadratic operators
    ``U^(c)_a = U_a U_c`` and unit ``c^-1``.  When c is unitary the isotope
    is the unitary isotope M(u) with ``u = c^-1 = c*``: it carries the
    involution ``x -> U_u(x*)`` and is again a JB*-algebra.

    Use :func:`isotope` for M_(c) and :func:`unitary_isotope` for M(u).
    """

    def __init__(self, c):
        self.model = c.model
        self.c = c
        self.c_inv = inverse(c)
        self.unitary = is_unitary(c)
        self._sa_basis = None

    @property
    def unit(self):
        return self.c_inv

    @property
    def trivial(self):
        return self.c.allclose(self.model.one(), 1e-15)

    def product(self, x, y):
        return u_bilinear(x, y, self.c)

    def U(self, a, x):
        return u_operator(a, u_operator(self.c, x))

    def U_inverse(self, a, x):
        """(U^(c)_a)^-1 (x) = U_{c^-1} U_{a^-1} (x)."""
        return u_operator(self.c_inv, u_operator(inverse(a), x))

    def star(self, x):
        if not self.unitary:
            raise NotUnitary("the isotope of a non-unitary element carries no involution")
        return u_operator(self.c_inv, involution(x))

    def inverse(self, x):
        return u_operator(self.c_inv, inverse(x))

    def power(self, x, k):
        # x^(k) = c^-1 (c x)^k
        cx = self.c.data @ x.data
        return self.model.wrap(self.c_inv.data @ np.linalg.matrix_power(cx, k))

    def exp(self, x):
        # sum of x^(k)/k! = c^-1 exp(c x)
        # c x is generally outside the model (e.g. not symmetric), so work raw
        out = self.c_inv.data @ la.expm(self.c.data @ x.data)
        return self.model.wrap(self.model.project(out))

    def expi(self, h):
        """exp_u(i h) for h self-adjoint in M(u): u exp(i u* h).

        x -> u* x carries M(u) onto a Jordan *-subalgebra of the full matrix
        algebra, and maps self-adjoint elements to Hermitian matrices, so an
        eigendecomposition gives an exactly unitary result.
        """
        if not self.unitary:
            return self.exp(h * 1j)
        u = self.c_inv.data
        k = la.ct(u) @ h.data
        return self.model.wrap(self.model.project(u @ la.expi_hermitian(k)))

    def is_selfadjoint(self, h, tol=EPS_ID):
        return distance_rel(self.star(h), h) <= tol

    def selfadjoint_part(self, x):
        return (x + self.star(x)) * 0.5

    def is_unitary(self, x, tol=EPS_ID):
        """x o_u x^{*u} = u and (x o_u x) o_u x^{*u} = x."""
        xs = self.star(x)
        r1 = distance_rel(self.product(x, xs), self.unit)
        r2 = distance_rel(self.product(self.product(x, x), xs), x)
        return max(r1, r2) <= tol

    def is_central(self, x, tol=EPS_ID):
        if self.trivial:
            return is_central(x, tol)
        B = self.model.fiber_basis
        Cc = self.c.data[None, None]

        def prod(X, Y):
            return 0.5 * (X @ Cc @ Y + Y @ Cc @ X)

        X = x.data[None, None]
        C = B[:, None, None]
        D = B[None, :, None]
        r = prod(prod(X, C), D) - prod(X, prod(C, D))
        scale = max(x.norm(), 1e-300) * max(1.0, self.c.norm()) ** 2
        return bool(la.block_norms(r).max(initial=0.0) <= tol * scale)

    def selfadjoint_basis(self):
        """Real basis of the self-adjoint part of the isotope.

        For the trivial isotope this is the model's canonical basis; otherwise
        it is an orthonormal (in real coordinates) basis of the +1 eigenspace
        of the real-linear involution.
        """
        if self._sa_basis is None:
            m = self.model
            if self.trivial:
                self._sa_basis = m.selfadjoint_basis()
            else:
                S = m.linear_map_matrix(self.star)
                P = 0.5 * (np.eye(m.real_dim) + S)
                q, s, _ = np.linalg.svd(P)
                self._sa_basis = [m.from_real(q[:, j]) for j in range(m.complex_dim)]
        return self._sa_basis

    def chain(self, hs, base=None):
        """U^(c)_{exp(i h_n)} ... U^(c)_{exp(i h_1)} (base), base defaulting to the unit."""
        x = self.unit if base is None else base
        for h in hs:
            x = self.U(self.expi(h), x)
        return x


def distance_rel(a, b):
    return (a - b).norm() / max(1.0, a.norm(), b.norm())


def isotope(c):
    """M_(c): product U_{x,y}(c), unit c^-1."""
    return IsotopeContext(c)


def unitary_isotope(u):
    """M(u) = M_(u*): product U_{x,y}(u*), involution U_u(x*), unit u."""
    require_unitary(u)
    return IsotopeContext(involution(u))

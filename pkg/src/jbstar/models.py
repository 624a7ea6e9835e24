"""
Concrete finite-dimensional JB*-algebra models.

Every model is realized inside a full matrix algebra.  An element stores an
array ``data`` of shape ``(G, n, n)``: one ``n x n`` matrix per grid point,
with ``G = 1`` for plain matrix models and ``G = N`` for functions on the
unit circle sampled at ``exp(2 pi i k / N)``.

Model kinds
-----------
full_matrix(n)
    All complex ``n x n`` matrices.
symmetric_matrix(n)
    Complex matrices with ``a.T == a``.  Closed under the Jordan product and
    the involution but not under the associative product.
direct_sum(parts)
    Block-diagonal matrices, one block per part.  Parts are matrix models.
circle_function(fiber, N)
    Continuous maps from the circle into ``fiber``, sampled on ``N`` points.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _linalg as la
from .errors import InvalidDescriptor, ModelMismatch, StructureViolation
from .tolerances import EPS_SYM

KINDS = ("full_matrix", "symmetric_matrix", "circle_function", "direct_sum")
DEFAULT_GRID = 256


@dataclass(frozen=True)
class ModelDescriptor:
    kind: str
    n: int | None = None
    N: int | None = None
    parts: tuple = ()
    fiber: ModelDescriptor | None = None

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))
        k = self.kind
        if k not in KINDS:
            raise InvalidDescriptor(f"unknown model kind {k!r}")
        if k in ("full_matrix", "symmetric_matrix"):
            if not isinstance(self.n, (int, np.integer)) or isinstance(self.n, bool) or self.n < 1:
                raise InvalidDescriptor(f"{k} needs an integer n >= 1, got {self.n!r}")
            if self.N is not None or self.parts or self.fiber is not None:
                raise InvalidDescriptor(f"{k} takes only n")
            object.__setattr__(self, "n", int(self.n))
        elif k == "direct_sum":
            if not self.parts:
                raise InvalidDescriptor("direct_sum needs at least one part")
            for p in self.parts:
                if not isinstance(p, ModelDescriptor) or p.kind == "circle_function":
                    raise InvalidDescriptor("direct_sum parts must be matrix models")
            if self.N is not None or self.fiber is not None:
                raise InvalidDescriptor("direct_sum takes only parts")
            n = sum(p.dim for p in self.parts)
            if self.n is not None and self.n != n:
                raise InvalidDescriptor("direct_sum n disagrees with its parts")
            object.__setattr__(self, "n", None)
        else:
            if not isinstance(self.fiber, ModelDescriptor) or self.fiber.kind == "circle_function":
                raise InvalidDescriptor("circle_function needs a matrix-model fiber")
            N = DEFAULT_GRID if self.N is None else self.N
            if not isinstance(N, (int, np.integer)) or isinstance(N, bool) or N < 8 or N % 2:
                raise InvalidDescriptor(f"grid size must be an even integer >= 8, got {N!r}")
            if self.n is not None or self.parts:
                raise InvalidDescriptor("circle_function takes only fiber and N")
            object.__setattr__(self, "N", int(N))

    @property
    def dim(self):
        """Matrix size of the realization."""
        if self.kind == "direct_sum":
            return sum(p.dim for p in self.parts)
        if self.kind == "circle_function":
            return self.fiber.dim
        return self.n

    @classmethod
    def full(cls, n):
        return cls("full_matrix", n=n)

    @classmethod
    def symmetric(cls, n):
        return cls("symmetric_matrix", n=n)

    @classmethod
    def circle(cls, fiber, N=DEFAULT_GRID):
        return cls("circle_function", N=N, fiber=fiber)

    @classmethod
    def direct_sum(cls, *parts):
        return cls("direct_sum", parts=tuple(parts))

    def to_dict(self):
        if self.kind == "direct_sum":
            return {"kind": self.kind, "parts": [p.to_dict() for p in self.parts]}
        if self.kind == "circle_function":
            return {"kind": self.kind, "N": self.N, "fiber": self.fiber.to_dict()}
        return {"kind": self.kind, "n": self.n}

    @classmethod
    def from_dict(cls, d):
        if not isinstance(d, dict) or "kind" not in d:
            raise InvalidDescriptor(f"not a model descriptor: {d!r}")
        extra = set(d) - {"kind", "n", "N", "parts", "fiber"}
        if extra:
            raise InvalidDescriptor(f"unknown descriptor fields {sorted(extra)}")
        parts = tuple(cls.from_dict(p) for p in d.get("parts", ()))
        fiber = cls.from_dict(d["fiber"]) if d.get("fiber") is not None else None
        return cls(d["kind"], n=d.get("n"), N=d.get("N"), parts=parts, fiber=fiber)


@dataclass(frozen=True)
class Block:
    offset: int
    size: int
    symmetric: bool


def _blocks(desc, offset=0):
    if desc.kind == "direct_sum":
        out = []
        for p in desc.parts:
            out.extend(_blocks(p, offset))
            offset += p.dim
        return out
    return [Block(offset, desc.n, desc.kind == "symmetric_matrix")]


class Model:
    """A built model: block layout, grid, bases and coordinates."""

    def __init__(self, descriptor):
        self.descriptor = descriptor
        self.is_circle = descriptor.kind == "circle_function"
        fiber = descriptor.fiber if self.is_circle else descriptor
        self.fiber_descriptor = fiber
        self.n = fiber.dim
        self.grid_size = descriptor.N if self.is_circle else 1
        self.blocks = tuple(_blocks(fiber))
        self.theta = 2 * np.pi * np.arange(self.grid_size) / self.grid_size
        self.points = np.exp(1j * self.theta)

        n = self.n
        mask = np.zeros((n, n), dtype=bool)
        rows, cols, basis, sa_basis = [], [], [], []
        for b in self.blocks:
            o, m = b.offset, b.size
            mask[o:o + m, o:o + m] = True
            for i in range(m):
                for j in range(m):
                    if b.symmetric and j < i:
                        continue
                    e = np.zeros((n, n), dtype=complex)
                    e[o + i, o + j] = 1
                    if b.symmetric:
                        e[o + j, o + i] = 1
                    rows.append(o + i)
                    cols.append(o + j)
                    basis.append(e)
            for i in range(m):
                for j in range(i, m):
                    e = np.zeros((n, n), dtype=complex)
                    e[o + i, o + j] = e[o + j, o + i] = 1
                    sa_basis.append(e)
                    if i != j and not b.symmetric:
                        f = np.zeros((n, n), dtype=complex)
                        f[o + i, o + j], f[o + j, o + i] = 1j, -1j
                        sa_basis.append(f)
        self.mask = mask
        self._rows = np.array(rows)
        self._cols = np.array(cols)
        self.fiber_basis = np.array(basis)
        self.fiber_sa_basis = np.array(sa_basis)
        self.fiber_dim = len(basis)
        self.complex_dim = self.fiber_dim * self.grid_size
        self.real_dim = 2 * self.complex_dim
        sym = np.zeros((n, n), dtype=bool)
        for b in self.blocks:
            if b.symmetric:
                sym[b.offset:b.offset + b.size, b.offset:b.offset + b.size] = True
        self._sym_mask = sym
        self.has_symmetric = bool(sym.any())
        # matrix of fiber coordinates in the self-adjoint basis
        sa_coords = self.fiber_sa_basis[:, self._rows, self._cols]
        self._sa_to_std = sa_coords.T

    def __repr__(self):
        return f"Model({self.descriptor.to_dict()})"

    @property
    def shape(self):
        return (self.grid_size, self.n, self.n)

    # ---- element construction -------------------------------------------------
    def element(self, data, check=True):
        data = np.asarray(data, dtype=complex)
        if data.shape == (self.n, self.n):
            data = np.broadcast_to(data, self.shape)
        if data.shape != self.shape:
            raise StructureViolation(f"data shape {data.shape} does not match model shape {self.shape}")
        data = np.array(data)
        if check:
            scale = max(1.0, float(np.max(np.abs(data), initial=0.0)))
            off = np.max(np.abs(data[:, ~self.mask]), initial=0.0)
            if off > EPS_SYM * scale:
                raise StructureViolation(f"entries outside the block pattern (max {off:.3g})")
            if self.has_symmetric:
                asym = np.max(np.abs((data - np.swapaxes(data, -1, -2))[:, self._sym_mask]), initial=0.0)
                if asym > EPS_SYM * scale:
                    raise StructureViolation(f"symmetric block is not transpose-symmetric (max {asym:.3g})")
            data = self.project(data)
        return Element(self, data)

    def project(self, data):
        """Force the block pattern and blockwise symmetry on raw data."""
        data = np.where(self.mask, data, 0)
        if self.has_symmetric:
            data = np.where(self._sym_mask, 0.5 * (data + np.swapaxes(data, -1, -2)), data)
        return data

    def wrap(self, data):
        """Wrap already-structured data without checks (internal fast path)."""
        return Element(self, data)

    def one(self):
        return self.wrap(np.broadcast_to(np.eye(self.n, dtype=complex), self.shape).copy())

    def zero(self):
        return self.wrap(np.zeros(self.shape, dtype=complex))

    def scalar(self, c):
        return self.one() * c

    def constant(self, matrix):
        return self.element(np.broadcast_to(np.asarray(matrix, dtype=complex), self.shape))

    def from_function(self, f):
        """Sample ``f(lambda)`` (fiber-valued) on the grid points."""
        return self.element(np.array([np.asarray(f(z), dtype=complex).reshape(self.n, self.n) for z in self.points]))

    def central_scalar(self, values):
        """Element ``f(lambda) * 1`` from per-grid-point scalar values."""
        values = np.asarray(values, dtype=complex).reshape(self.grid_size, 1, 1)
        return self.wrap(values * np.eye(self.n))

    def block_projection(self, flags):
        """Central projection equal to 1 on the blocks where ``flags`` is true."""
        d = np.zeros(self.n)
        for b, f in zip(self.blocks, flags):
            if f:
                d[b.offset:b.offset + b.size] = 1
        return self.constant(np.diag(d))

    # ---- coordinates -----------------------------------------------------------
    def coords(self, x):
        """Complex coordinates (grid-major) in the canonical complex basis."""
        return x.data[:, self._rows, self._cols].reshape(-1)

    def from_coords(self, z):
        z = np.asarray(z, dtype=complex).reshape(self.grid_size, self.fiber_dim)
        data = np.zeros(self.shape, dtype=complex)
        # mirrored write first: it only survives where (j, i) is not itself
        # a representative entry, i.e. in the lower half of symmetric blocks
        data[:, self._cols, self._rows] = z
        data[:, self._rows, self._cols] = z
        return self.wrap(data)

    def to_real(self, x):
        z = self.coords(x)
        return np.concatenate([z.real, z.imag])

    def from_real(self, r):
        r = np.asarray(r, dtype=float)
        d = self.complex_dim
        return self.from_coords(r[:d] + 1j * r[d:])

    def basis(self):
        """Canonical complex basis, grid-major."""
        out = []
        for g in range(self.grid_size):
            for b in self.fiber_basis:
                data = np.zeros(self.shape, dtype=complex)
                data[g] = b
                out.append(self.wrap(data))
        return out

    def real_basis(self):
        """Basis matching the real coordinates: the complex basis, then i times it."""
        b = self.basis()
        return b + [x * 1j for x in b]

    def selfadjoint_basis(self):
        """Real basis of the self-adjoint part (also a complex basis of the model)."""
        out = []
        for g in range(self.grid_size):
            for b in self.fiber_sa_basis:
                data = np.zeros(self.shape, dtype=complex)
                data[g] = b
                out.append(self.wrap(data))
        return out

    def selfadjoint_coords(self, x):
        """Complex coefficients of ``x`` in :meth:`selfadjoint_basis`."""
        z = x.data[:, self._rows, self._cols]
        c = np.linalg.solve(self._sa_to_std, z.T).T
        return c.reshape(-1)

    def linear_map_matrix(self, f, target=None):
        """Real matrix of a real-linear map ``f`` from this model into ``target``."""
        target = self if target is None else target
        cols = [target.to_real(f(b)) for b in self.real_basis()]
        return np.array(cols).T

    def apply_real(self, matrix, x, target=None):
        target = self if target is None else target
        return target.from_real(matrix @ self.to_real(x))

    # ---- random generation -----------------------------------------------------
    def _fiber_gaussian(self, rng, kind, count):
        n = self.n
        out = np.zeros((count, n, n), dtype=complex)
        for b in self.blocks:
            o, m = b.offset, b.size
            if kind == "selfadjoint":
                if b.symmetric:
                    r = rng.standard_normal((count, m, m))
                    blk = 0.5 * (r + np.swapaxes(r, -1, -2))
                else:
                    r = rng.standard_normal((count, m, m)) + 1j * rng.standard_normal((count, m, m))
                    blk = la.hermitian_part(r)
            else:
                r = rng.standard_normal((count, m, m)) + 1j * rng.standard_normal((count, m, m))
                blk = 0.5 * (r + np.swapaxes(r, -1, -2)) if b.symmetric else r
            out[:, o:o + m, o:o + m] = blk
        return out

    def _random_raw(self, rng, kind, harmonics=2):
        return self._random_raw_batch(rng, kind, 1, harmonics)[0]

    def _random_raw_batch(self, rng, kind, count, harmonics=2):
        """``count`` raw samples, shape ``(count, G, n, n)``."""
        if not self.is_circle:
            return self._fiber_gaussian(rng, kind, count)[:, None]
        m = 2 * harmonics + 1
        coeffs = self._fiber_gaussian(rng, kind, count * m).reshape(count, m, self.n, self.n)
        data = np.repeat(coeffs[:, :1], self.grid_size, axis=1)
        for k in range(1, harmonics + 1):
            c = np.cos(k * self.theta)[None, :, None, None]
            s = np.sin(k * self.theta)[None, :, None, None]
            data = data + (c * coeffs[:, 2 * k - 1:2 * k] + s * coeffs[:, 2 * k:2 * k + 1]) / k
        return data


@lru_cache(maxsize=None)
def _build(descriptor):
    return Model(descriptor)


def build_model(d):
    """Build (or fetch the cached) model for a descriptor, dict or JSON string."""
    if isinstance(d, Model):
        return d
    if isinstance(d, str):
        d = json.loads(d)
    if isinstance(d, dict):
        d = ModelDescriptor.from_dict(d)
    if not isinstance(d, ModelDescriptor):
        raise InvalidDescriptor(f"cannot build a model from {type(d).__name__}")
    return _build(d)


class Element:
    """An element of a model.  Value type: ``data`` is never mutated in place."""

    __slots__ = ("model", "data")
    __array_ufunc__ = None

    def __init__(self, model, data):
        self.model = model
        self.data = data

    def __repr__(self):
        if self.model.grid_size == 1:
            return f"Element({self.model.descriptor.kind}, {np.array2string(self.data[0], precision=4)})"
        return f"Element({self.model.descriptor.kind}, grid={self.model.grid_size})"

    def _other(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        same_model(self, other)
        return other.data

    def __add__(self, other):
        o = self._other(other)
        return o if o is NotImplemented else self.model.wrap(self.data + o)

    def __sub__(self, other):
        o = self._other(other)
        return o if o is NotImplemented else self.model.wrap(self.data - o)

    def __neg__(self):
        return self.model.wrap(-self.data)

    def __mul__(self, c):
        if isinstance(c, Element) or not np.isscalar(c):
            return NotImplemented
        return self.model.wrap(self.data * c)

    __rmul__ = __mul__

    def __truediv__(self, c):
        if isinstance(c, Element) or not np.isscalar(c):
            return NotImplemented
        return self.model.wrap(self.data / c)

    def norm(self):
        return float(np.max(la.block_norms(self.data)))

    def allclose(self, other, tol=1e-9):
        return distance(self, other) <= tol

    def at(self, g=0):
        """Matrix at grid point ``g``."""
        return self.data[g].copy()


def same_model(*xs):
    m = xs[0].model
    for x in xs[1:]:
        if x.model is not m and x.model.descriptor != m.descriptor:
            raise ModelMismatch(f"elements live in different models: {m} vs {x.model}")
    return m


def distance(a, b):
    same_model(a, b)
    return float(np.max(la.block_norms(a.data - b.data)))


def _rng(seed):
    return np.random.default_rng(seed)


def _normalize(model, data, scale):
    nrm = float(np.max(la.block_norms(data)))
    if scale == 0 or nrm == 0:
        return model.zero()
    return model.wrap(model.project(data * (scale / nrm)))


def random_element(model, seed=None, scale=1.0):
    """Random element of norm ``scale`` (smooth in the circle variable)."""
    model = build_model(model)
    return _normalize(model, model._random_raw(_rng(seed), "general"), scale)


def random_selfadjoint(model, seed=None, scale=1.0):
    """Random self-adjoint element of norm ``scale``.

    Gaussian Hermitian blocks; in symmetric blocks the constraints
    ``a = a*`` and ``a = a.T`` force real symmetric matrices.  Circle
    models use a low-degree trigonometric polynomial so samples are smooth.
    """
    model = build_model(model)
    return _normalize(model, model._random_raw(_rng(seed), "selfadjoint"), scale)


def random_unitary(model, seed=None, scale=1.0):
    """``exp(i h)`` for a random self-adjoint ``h`` with ``||h|| = scale``."""
    model = build_model(model)
    h = random_selfadjoint(model, seed, scale)
    return model.wrap(model.project(la.expi_hermitian(h.data)))


# ---- serialization ------------------------------------------------------------

def element_to_json(x):
    data = np.stack([x.data.real, x.data.imag], axis=-1)
    return {"model": x.model.descriptor.to_dict(), "data": data.tolist()}


def element_from_json(d, model=None):
    if isinstance(d, str):
        d = json.loads(d)
    if not isinstance(d, dict) or "model" not in d or "data" not in d:
        raise StructureViolation("element JSON needs 'model' and 'data'")
    m = build_model(d["model"])
    if model is not None and build_model(model).descriptor != m.descriptor:
        raise ModelMismatch("element JSON names a different model")
    try:
        raw = np.asarray(d["data"], dtype=float)
    except (TypeError, ValueError) as exc:
        raise StructureViolation(f"malformed element data: {exc}") from None
    if raw.shape != m.shape + (2,):
        raise StructureViolation(f"data shape {raw.shape} does not match model shape {m.shape + (2,)}")
    if not np.all(np.isfinite(raw)):
        raise StructureViolation("element data must be finite")
    return m.element(raw[..., 0] + 1j * raw[..., 1])


def dumps(x):
    return json.dumps(element_to_json(x))


def loads(s, model=None):
    return element_from_json(json.loads(s), model)

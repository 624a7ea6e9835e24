# Batched dense helpers used across the package. Arrays have shape (..., n, n).
import numpy as np
import scipy.linalg as sla


def ct(x):
    return np.conj(np.swapaxes(x, -1, -2))


def hermitian_part(x):
    return 0.5 * (x + ct(x))


def singular_values(x):
    return np.linalg.svd(x, compute_uv=False)


def block_norms(x):
    """Largest singular value of every matrix in the batch."""
    n = x.shape[-1]
    if n == 0:
        return np.zeros(x.shape[:-2])
    if n == 1:
        return np.abs(x[..., 0, 0])
    if n == 2:
        # closed form on the rescaled matrix; only the small singular value
        # would suffer from cancellation
        scale = np.max(np.abs(x), axis=(-1, -2))
        x = x / np.where(scale > 0, scale, 1.0)[..., None, None]
        fro = np.sum(np.abs(x) ** 2, axis=(-1, -2))
        det = np.abs(x[..., 0, 0] * x[..., 1, 1] - x[..., 0, 1] * x[..., 1, 0])
        disc = np.sqrt(np.maximum(fro * fro - 4 * det * det, 0.0))
        return scale * np.sqrt(0.5 * (fro + disc))
    return singular_values(x)[..., 0]


def hermitian_function(h, f):
    w, v = np.linalg.eigh(hermitian_part(h))
    return (v * f(w)[..., None, :]) @ ct(v)


def expi_hermitian(h):
    return hermitian_function(h, lambda w: np.exp(1j * w))


def expm(a):
    return sla.expm(a)


def normal_schur(u):
    """Eigenvalues and a unitary eigenbasis of a batch of normal matrices.

    Uses the complex Schur form, whose triangular factor is diagonal for
    normal input, so the returned basis stays unitary even when eigenvalues
    cluster.
    """
    shape = u.shape
    flat = u.reshape(-1, shape[-2], shape[-1])
    vals = np.empty(flat.shape[:2], dtype=complex)
    vecs = np.empty(flat.shape, dtype=complex)
    for i, m in enumerate(flat):
        t, z = sla.schur(m, output="complex")
        vals[i] = np.diag(t)
        vecs[i] = z
    return vals.reshape(shape[:-1]), vecs.reshape(shape)


def normal_function(u, f):
    vals, z = normal_schur(u)
    return (z * f(vals)[..., None, :]) @ ct(z)

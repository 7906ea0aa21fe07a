"""Dense complex linear algebra for heterogeneous multi-qudit systems.

Sites are numbered left to right; site 0 is the leftmost (most significant)
tensor factor in the row-major flattening of state vectors and operators.
All functions are pure and never mutate their arguments.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import InvalidInputError

HERMITIAN_TOL = 1e-10
JACOBI_OFF_TOL = 1e-13
JACOBI_MAX_SWEEPS = 100


def as_dims(dims) -> tuple[int, ...]:
    """Validate a per-site dimension list (every entry >= 2)."""
    out = tuple(int(d) for d in dims)
    if not out or any(d < 2 for d in out):
        raise InvalidInputError(f"site dimensions must all be >= 2, got {list(dims)}")
    return out


def total_dim(dims) -> int:
    return math.prod(as_dims(dims))


def as_sites(sites, num_sites: int) -> tuple[int, ...]:
    """Normalize a duplicate-free site selection to a sorted tuple."""
    out = tuple(sorted(int(j) for j in sites))
    if any(j < 0 or j >= num_sites for j in out):
        raise InvalidInputError(
            f"site index out of range for {num_sites} sites: {list(sites)}")
    if len(set(out)) != len(out):
        raise InvalidInputError(f"duplicate site indices in {list(sites)}")
    return out


def _square(mat, expected: int | None = None) -> np.ndarray:
    a = np.asarray(mat, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InvalidInputError(f"expected a square matrix, got shape {a.shape}")
    if expected is not None and a.shape[0] != expected:
        raise InvalidInputError(
            f"matrix dimension {a.shape[0]} does not match the product "
            f"of the site dimensions ({expected})")
    return a


def is_hermitian(mat, tol: float = HERMITIAN_TOL) -> bool:
    a = np.asarray(mat)
    return bool(np.max(np.abs(a - a.conj().T)) <= tol)


def kron(a, b) -> np.ndarray:
    """Kronecker product with the left factor most significant."""
    return np.kron(np.asarray(a, dtype=np.complex128),
                   np.asarray(b, dtype=np.complex128))


def partial_trace(rho, dims, keep) -> np.ndarray:
    """Trace out every site not in ``keep``.

    Preserves the trace, and Hermiticity of Hermitian inputs.  ``keep`` may
    be empty (returns the 1x1 matrix ``[[Tr rho]]``) or the full site set
    (returns a copy).
    """
    dims = as_dims(dims)
    n = len(dims)
    keep = as_sites(keep, n)
    a = _square(rho, total_dim(dims))
    traced = tuple(j for j in range(n) if j not in keep)
    if not traced:
        return a.copy()
    perm = keep + traced
    dk = math.prod(dims[j] for j in keep) if keep else 1
    dt = math.prod(dims[j] for j in traced)
    t = a.reshape(dims + dims).transpose(perm + tuple(n + p for p in perm))
    return np.einsum("atbt->ab", t.reshape(dk, dt, dk, dt))


def reduced_of_pure(amplitudes, dims, keep) -> np.ndarray:
    """Reduced density matrix of a pure state on the ``keep`` sites.

    Equivalent to ``partial_trace(outer(psi), dims, keep)`` but never forms
    the full projector; cost is quadratic in the kept dimension only.
    """
    dims = as_dims(dims)
    n = len(dims)
    keep = as_sites(keep, n)
    v = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
    if v.size != total_dim(dims):
        raise InvalidInputError(
            f"amplitude vector length {v.size} does not match the product "
            f"of the site dimensions ({total_dim(dims)})")
    nrm = np.linalg.norm(v)
    if abs(nrm - 1.0) > 1e-9:
        raise InvalidInputError(f"state is not normalized: |norm-1| = {abs(nrm - 1.0):.3e}")
    traced = tuple(j for j in range(n) if j not in keep)
    dk = math.prod(dims[j] for j in keep) if keep else 1
    dt = math.prod(dims[j] for j in traced) if traced else 1
    m = v.reshape(dims).transpose(keep + traced).reshape(dk, dt)
    return m @ m.conj().T


def partial_transpose(rho, dims, subset) -> np.ndarray:
    """Transpose the indices of ``subset`` sites only (an involution)."""
    dims = as_dims(dims)
    n = len(dims)
    subset = as_sites(subset, n)
    a = _square(rho, total_dim(dims))
    axes = list(range(2 * n))
    for j in subset:
        axes[j], axes[n + j] = axes[n + j], axes[j]
    d = a.shape[0]
    return a.reshape(dims + dims).transpose(axes).reshape(d, d)


def trace_power(rho, q) -> float:
    """Tr(rho^q) by repeated matrix multiplication, for integer q >= 2.

    The input must be Hermitian; positive semidefiniteness is assumed, not
    checked (use the eigenvalue path for untrusted input).
    """
    if int(q) != q or q < 2:
        raise InvalidInputError(f"trace_power requires an integer q >= 2, got {q!r}")
    a = _square(rho)
    if not is_hermitian(a):
        raise InvalidInputError("trace_power requires a Hermitian matrix")
    return float(np.trace(np.linalg.matrix_power(a, int(q))).real)


def _off_norm(a: np.ndarray) -> float:
    # Frobenius norm of the off-diagonal part, computed directly: the
    # difference-of-squares shortcut cancels catastrophically near convergence.
    off = a.copy()
    np.fill_diagonal(off, 0.0)
    return float(np.linalg.norm(off))


def _jacobi(a: np.ndarray, want_vectors: bool):
    """Cyclic Jacobi diagonalization of a Hermitian matrix.

    Sweeps row pairs until the off-diagonal Frobenius norm drops below
    ``JACOBI_OFF_TOL`` or ``JACOBI_MAX_SWEEPS`` sweeps have run.
    """
    n = a.shape[0]
    a = 0.5 * (a + a.conj().T)  # remove roundoff asymmetry once up front
    v = np.eye(n, dtype=np.complex128) if want_vectors else None
    # elements below skip_tol cannot push the off-norm above the target
    skip_tol = JACOBI_OFF_TOL / (n * n)
    for _ in range(JACOBI_MAX_SWEEPS):
        if _off_norm(a) < JACOBI_OFF_TOL:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                b = a.item(p, q)
                ab = abs(b)
                if ab <= skip_tol:
                    continue
                u = b / ab
                theta = 0.5 * math.atan2(2.0 * ab, a.item(p, p).real - a.item(q, q).real)
                c, s = math.cos(theta), math.sin(theta)
                su, suc = s * u, s * u.conjugate()
                col_p = a[:, p].copy()
                col_q = a[:, q]
                a[:, p] = c * col_p + suc * col_q
                a[:, q] = -su * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :]
                a[p, :] = c * row_p + su * row_q
                a[q, :] = -suc * row_p + c * row_q
                a[p, q] = 0.0
                a[q, p] = 0.0
                if v is not None:
                    vp = v[:, p].copy()
                    vq = v[:, q]
                    v[:, p] = c * vp + suc * vq
                    v[:, q] = -su * vp + c * vq
    vals = a.diagonal().real.copy()
    order = np.argsort(vals, kind="stable")
    vals = vals[order]
    if v is not None:
        v = v[:, order]
    return vals, v


def hermitian_eigenvalues(h) -> np.ndarray:
    """Ascending real eigenvalues of a Hermitian matrix (Jacobi iteration)."""
    a = _square(h)
    if not is_hermitian(a):
        raise InvalidInputError("matrix is not Hermitian within tolerance")
    vals, _ = _jacobi(a.copy(), want_vectors=False)
    return vals


def hermitian_eigensystem(h) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and matching eigenvector columns."""
    a = _square(h)
    if not is_hermitian(a):
        raise InvalidInputError("matrix is not Hermitian within tolerance")
    return _jacobi(a.copy(), want_vectors=True)

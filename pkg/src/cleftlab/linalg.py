"""Exact dense linear algebra over small prime fields.

Matrices are numpy ``int64`` arrays whose entries are residues modulo ``p``.
Vectors are 1-d arrays; a basis of a subspace of ``F_p^n`` is stored as the
columns of an ``n x k`` array.  Pivoting is always the leftmost nonzero entry,
so every basis returned here is reproducible.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

PRIMES = (2, 3, 5, 7)


class DimensionError(ValueError):
    pass


@lru_cache(maxsize=None)
def inverse_table(p: int) -> np.ndarray:
    if p not in PRIMES:
        raise ValueError(f"unsupported field characteristic {p}")
    inv = np.zeros(p, dtype=np.int64)
    for a in range(1, p):
        inv[a] = pow(a, -1, p)
    return inv


def asmat(m, p: int) -> np.ndarray:
    a = np.array(m, dtype=np.int64)
    if a.ndim == 1:
        a = a.reshape(1, -1) if a.size else a.reshape(0, 0)
    return a % p


def columns(m, rows: int) -> np.ndarray:
    """``m`` as a ``rows x k`` integer matrix; an empty input gives ``k = 0``."""
    a = np.asarray(m, dtype=np.int64)
    if a.size == 0:
        return np.zeros((rows, 0), dtype=np.int64)
    return a.reshape(rows, -1)


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=np.int64)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def rref(m, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form. Returns the nonzero rows and pivot columns."""
    a = np.array(m, dtype=np.int64) % p
    if a.ndim != 2:
        raise DimensionError("rref expects a 2-d array")
    rows, cols = a.shape
    inv = inverse_table(p)
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        a[r] = (a[r] * inv[a[r, c]]) % p
        col = a[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            a[hit] = (a[hit] - np.outer(col[hit], a[r])) % p
        pivots.append(c)
        r += 1
    return a[:r], pivots


def rank(m, p: int) -> int:
    a = np.asarray(m)
    if a.size == 0:
        return 0
    return len(rref(a, p)[1])


def kernel(m, p: int) -> np.ndarray:
    """Basis of the right null space, as columns of a ``cols x k`` array."""
    a = np.asarray(m, dtype=np.int64)
    cols = a.shape[1]
    if a.shape[0] == 0:
        return identity(cols)
    r, pivots = rref(a, p)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = zeros(cols, len(free))
    for k, f in enumerate(free):
        basis[f, k] = 1
        for row, pc in enumerate(pivots):
            basis[pc, k] = (-r[row, f]) % p
    return basis


def solve(a, b, p: int) -> np.ndarray | None:
    """Some ``x`` with ``a @ x == b`` (mod p), or ``None`` if inconsistent.

    ``b`` may be a vector or a matrix of right-hand sides (then every column
    must be solvable).
    """
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    vec = b.ndim == 1
    if vec:
        b = b.reshape(-1, 1)
    if a.shape[0] != b.shape[0]:
        raise DimensionError(f"solve: {a.shape[0]} rows vs right-hand side of length {b.shape[0]}")
    n = a.shape[1]
    if a.shape[0] == 0:
        x = zeros(n, b.shape[1])
        return x[:, 0] if vec else x
    aug = np.concatenate([a % p, b % p], axis=1)
    r, pivots = rref(aug, p)
    if any(pc >= n for pc in pivots):
        return None
    x = zeros(n, b.shape[1])
    for row, pc in enumerate(pivots):
        x[pc] = r[row, n:]
    return x[:, 0] if vec else x


def inverse(a, p: int) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64)
    n = a.shape[0]
    if a.shape != (n, n):
        raise DimensionError("inverse of a non-square matrix")
    x = solve(a, identity(n), p)
    if x is None or rank(a, p) != n:
        raise np.linalg.LinAlgError("matrix is singular over F_p")
    return x


def column_space(m, p: int) -> np.ndarray:
    """Basis (columns) of the span of the columns of ``m``."""
    a = np.asarray(m, dtype=np.int64)
    if a.size == 0:
        return zeros(a.shape[0], 0)
    r, _ = rref(a.T, p)
    return r.T.copy()


def span(vectors, n: int, p: int) -> np.ndarray:
    """Echelon basis (columns) of the span of an iterable of length-``n`` vectors."""
    vs = [np.asarray(v, dtype=np.int64).reshape(-1) for v in vectors]
    if not vs:
        return zeros(n, 0)
    return column_space(np.stack(vs, axis=1), p)


def independent_columns(m, p: int) -> list[int]:
    """Indices of a maximal independent set of columns, chosen greedily left to right."""
    a = np.asarray(m, dtype=np.int64)
    if a.size == 0:
        return []
    return rref(a, p)[1]


def in_span(basis, v, p: int) -> bool:
    basis = np.asarray(basis, dtype=np.int64)
    if basis.shape[1] == 0:
        return not np.any(np.asarray(v) % p)
    return solve(basis, v, p) is not None


def quotient(ambient_dim: int, sub, p: int) -> tuple[np.ndarray, int]:
    """Projection ``F_p^n -> F_p^n / span(sub)``.

    The complement is spanned by the standard vectors at the non-pivot
    coordinates of the echelon form of ``sub``, so ``section(...)`` below is a
    right inverse of the projection.
    """
    proj, _, dim = quotient_with_section(ambient_dim, sub, p)
    return proj, dim


def quotient_with_section(ambient_dim: int, sub, p: int) -> tuple[np.ndarray, np.ndarray, int]:
    sub = columns(sub, ambient_dim)
    if sub.shape[1]:
        r, pivots = rref(sub.T, p)
        if len(pivots) != sub.shape[1]:
            raise DimensionError("quotient: subspace vectors are not independent")
    else:
        r, pivots = zeros(0, ambient_dim), []
    keep = [c for c in range(ambient_dim) if c not in set(pivots)]
    dim = len(keep)
    proj = zeros(dim, ambient_dim)
    for k, c in enumerate(keep):
        proj[k, c] = 1
    for row, pc in enumerate(pivots):
        proj[:, pc] = (-r[row, keep]) % p
    section = zeros(ambient_dim, dim)
    for k, c in enumerate(keep):
        section[c, k] = 1
    return proj, section, dim


def is_zero(m) -> bool:
    return not np.any(m)


def matpow(a, k: int, p: int) -> np.ndarray:
    result = identity(a.shape[0])
    base = np.asarray(a, dtype=np.int64) % p
    while k:
        if k & 1:
            result = (result @ base) % p
        base = (base @ base) % p
        k >>= 1
    return result


def block_diag(*blocks) -> np.ndarray:
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    out = zeros(rows, cols)
    r = c = 0
    for b in blocks:
        out[r:r + b.shape[0], c:c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return out


def intersect(a, b, p: int) -> np.ndarray:
    """Basis (columns) of ``span(a) ∩ span(b)``."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if a.shape[1] == 0 or b.shape[1] == 0:
        return zeros(a.shape[0], 0)
    k = kernel(np.concatenate([a, -b % p], axis=1), p)
    return column_space((a @ k[:a.shape[1]]) % p, p)

"""Exact linear algebra over the prime field F_p on int64 numpy arrays."""

from __future__ import annotations

import numpy as np


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def as_mod(a, p: int, shape=None) -> np.ndarray:
    arr = np.asarray(a, dtype=np.int64)
    if shape is not None:
        arr = arr.reshape(shape)
    return arr % p


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=np.int64)


def eye(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def mul(p: int, *mats) -> np.ndarray:
    """Product of the matrices left to right, reduced mod p after every step."""
    out = mats[0] % p
    for m in mats[1:]:
        out = (out @ m) % p
    return out


def rref(a, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and the pivot columns."""
    m = np.array(a, dtype=np.int64) % p
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(m[r:, c])
        if nz.size == 0:
            continue
        i = r + nz[0]
        if i != r:
            m[[r, i]] = m[[i, r]]
        m[r] = (m[r] * pow(int(m[r, c]), -1, p)) % p
        others = np.flatnonzero(m[:, c])
        others = others[others != r]
        if others.size:
            m[others] = (m[others] - np.outer(m[others, c], m[r])) % p
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a, p: int) -> int:
    a = np.asarray(a)
    if a.size == 0:
        return 0
    return len(rref(a, p)[1])


def nullspace(a, p: int) -> np.ndarray:
    """Columns forming a basis of {x : a x = 0}."""
    a = np.asarray(a, dtype=np.int64)
    cols = a.shape[1]
    if a.shape[0] == 0 or a.size == 0:
        return eye(cols)
    r, piv = rref(a, p)
    free = [c for c in range(cols) if c not in piv]
    basis = zeros(cols, len(free))
    for j, fc in enumerate(free):
        basis[fc, j] = 1
        for i, pc in enumerate(piv):
            basis[pc, j] = (-r[i, fc]) % p
    return basis


def column_basis(a, p: int) -> np.ndarray:
    """A subset of the columns of ``a`` forming a basis of its column space."""
    a = np.asarray(a, dtype=np.int64)
    if a.size == 0:
        return zeros(a.shape[0], 0)
    _, piv = rref(a, p)
    return a[:, piv] % p


def extend_basis(cols, ambient, p: int) -> np.ndarray:
    """Columns of ``ambient`` completing the independent ``cols`` to a basis of
    span(cols) + span(ambient)."""
    cols = np.asarray(cols, dtype=np.int64)
    ambient = np.asarray(ambient, dtype=np.int64)
    k = cols.shape[1]
    _, piv = rref(np.hstack([cols, ambient]), p)
    if piv[:k] != list(range(k)):
        raise ValueError("the given columns are not independent")
    return ambient[:, [c - k for c in piv[k:]]] % p


def inverse(a, p: int) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("only square matrices are invertible")
    r, piv = rref(np.hstack([a, eye(n)]), p)
    if piv[:n] != list(range(n)):
        raise ValueError("matrix is singular mod p")
    return r[:, n:]


def solve(a, b, p: int) -> np.ndarray | None:
    """Some x with a x = b (b may have several columns), or None."""
    a = np.asarray(a, dtype=np.int64) % p
    b = np.asarray(b, dtype=np.int64) % p
    vec = b.ndim == 1
    if vec:
        b = b[:, None]
    rows, cols = a.shape
    if rows == 0:
        x = zeros(cols, b.shape[1])
        return x[:, 0] if vec else x
    r, piv = rref(np.hstack([a, b]), p)
    if any(c >= cols for c in piv):
        return None
    x = zeros(cols, b.shape[1])
    for i, c in enumerate(piv):
        x[c] = r[i, cols:]
    return x[:, 0] if vec else x


def is_invertible(a, p: int) -> bool:
    a = np.asarray(a)
    return a.shape[0] == a.shape[1] and rank(a, p) == a.shape[0]

"""Bounded chain complexes over F_p as a small stable model.

Conventions (homological grading, d: C_n → C_{n-1}):

* (ΣX)_n = X_{n-1} with differential -d; Ω is the inverse shift, also
  with -d, so Σ and Ω are strictly inverse.
* cone(f)_n = X_{n-1} ⊕ Y_n with d(x, y) = (-dx, -fx + dy); incl(y) = (0, y),
  proj(x, y) = x.
* fiber(f) = Ω cone(f), so fiber(f)_n = X_n ⊕ Y_{n+1} with
  d(x, y) = (dx, fx - dy).
* a homotopy h: f ≃ g satisfies f - g = dh + hd.
* direct sums list the first summand first: (Y ⊕ Z)_n = Y_n ⊕ Z_n.

Over a field every complex strongly deformation retracts onto its homology,
which is how homology maps, homotopies and homotopy inverses are computed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import fp_linalg as la


class ChainError(ValueError):
    pass


class NotDistinguished(ChainError):
    pass


DEFAULT_PRIME = 3


def _zero(r: int, c: int) -> np.ndarray:
    return np.zeros((r, c), dtype=np.int64)


def _blocks(rows, cols, entries) -> np.ndarray:
    """Assemble a block matrix; ``entries[(i, j)]`` fills block row i, column j."""
    out = _zero(sum(rows), sum(cols))
    r0 = np.concatenate([[0], np.cumsum(rows)]).astype(int)
    c0 = np.concatenate([[0], np.cumsum(cols)]).astype(int)
    for (i, j), m in entries.items():
        m = np.asarray(m, dtype=np.int64)
        if m.shape != (rows[i], cols[j]):
            raise ChainError(f"block ({i}, {j}) has shape {m.shape}, expected "
                             f"{(rows[i], cols[j])}")
        out[r0[i]:r0[i + 1], c0[j]:c0[j + 1]] = m
    return out


# -- complexes and maps ------------------------------------------------------------


class FpChainComplex:
    """A bounded complex of F_p vector spaces in degrees lo..hi."""

    __slots__ = ("p", "lo", "dims", "_d", "_sdr")

    def __init__(self, p: int, lo: int, dims, diffs=None, check: bool = True):
        if not la.is_prime(p):
            raise ChainError(f"{p} is not prime")
        dims = [int(x) for x in dims]
        if not dims:
            dims = [0]
        if any(x < 0 for x in dims):
            raise ChainError("dimensions must be nonnegative")
        self.p, self.lo, self.dims = p, int(lo), tuple(dims)
        self._d = {}
        self._sdr = None
        for n, m in (diffs or {}).items():
            m = np.asarray(m, dtype=np.int64).reshape(self.dim(n - 1), self.dim(n)) % p
            if m.size and m.any():
                if not (self.lo < n <= self.hi):
                    raise ChainError(f"nonzero differential d_{n} outside the degree range")
                self._d[n] = m
        if check:
            for n in self.degrees():
                if la.mul(p, self.d(n - 1), self.d(n)).any():
                    raise ChainError(f"d_{n - 1} d_{n} != 0")

    @property
    def hi(self) -> int:
        return self.lo + len(self.dims) - 1

    def degrees(self) -> range:
        return range(self.lo, self.hi + 1)

    def dim(self, n: int) -> int:
        return self.dims[n - self.lo] if self.lo <= n <= self.hi else 0

    def d(self, n: int) -> np.ndarray:
        m = self._d.get(n)
        return m if m is not None else _zero(self.dim(n - 1), self.dim(n))

    def support(self) -> tuple[int, int] | None:
        nz = [n for n in self.degrees() if self.dim(n)]
        return (nz[0], nz[-1]) if nz else None

    def __eq__(self, other):
        if not isinstance(other, FpChainComplex) or self.p != other.p:
            return NotImplemented if not isinstance(other, FpChainComplex) else False
        lo, hi = min(self.lo, other.lo), max(self.hi, other.hi)
        return all(self.dim(n) == other.dim(n) and np.array_equal(self.d(n), other.d(n))
                   for n in range(lo, hi + 1))

    def __hash__(self):
        return hash((self.p, self.support()))

    def __repr__(self):
        body = ", ".join(f"{n}:{self.dim(n)}" for n in self.degrees())
        return f"FpChainComplex(p={self.p}, {{{body}}})"

    def total_dim(self) -> int:
        return sum(self.dims)


def span_degrees(*xs) -> range:
    lo = min(x.lo for x in xs)
    hi = max(x.hi for x in xs)
    return range(lo, hi + 1)


def zero_complex(p: int = DEFAULT_PRIME, lo: int = 0) -> FpChainComplex:
    return FpChainComplex(p, lo, [0])


def point(p: int = DEFAULT_PRIME, degree: int = 0, dim: int = 1) -> FpChainComplex:
    """F_p^dim concentrated in one degree."""
    return FpChainComplex(p, degree, [dim])


class FpChainMap:
    """A degree-preserving chain map; ``mats[n]`` has shape (cod.dim n, dom.dim n)."""

    __slots__ = ("dom", "cod", "_m")

    def __init__(self, dom: FpChainComplex, cod: FpChainComplex, mats=None,
                 check: bool = True):
        if dom.p != cod.p:
            raise ChainError("maps need a common prime")
        self.dom, self.cod = dom, cod
        self._m = {}
        p = dom.p
        for n, m in (mats or {}).items():
            if dom.dim(n) == 0 or cod.dim(n) == 0:
                continue
            m = np.asarray(m, dtype=np.int64).reshape(cod.dim(n), dom.dim(n)) % p
            if m.any():
                self._m[n] = m
        if check:
            for n in span_degrees(dom, cod):
                lhs = la.mul(p, cod.d(n), self.m(n))
                rhs = la.mul(p, self.m(n - 1), dom.d(n))
                if not np.array_equal(lhs, rhs):
                    raise ChainError(f"map does not commute with d in degree {n}")

    @property
    def p(self) -> int:
        return self.dom.p

    def m(self, n: int) -> np.ndarray:
        x = self._m.get(n)
        return x if x is not None else _zero(self.cod.dim(n), self.dom.dim(n))

    def degrees(self) -> range:
        return span_degrees(self.dom, self.cod)

    def __eq__(self, other):
        if not isinstance(other, FpChainMap):
            return NotImplemented
        return (self.dom == other.dom and self.cod == other.cod
                and all(np.array_equal(self.m(n), other.m(n)) for n in self.degrees()))

    __hash__ = None

    def __repr__(self):
        return f"FpChainMap({self.dom!r} -> {self.cod!r})"

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return add(self, scale(other, -1))

    def __neg__(self):
        return scale(self, -1)

    def __matmul__(self, other):
        return compose(self, other)

    def is_zero(self) -> bool:
        return not self._m


def identity_map(X: FpChainComplex) -> FpChainMap:
    return FpChainMap(X, X, {n: la.eye(X.dim(n)) for n in X.degrees()}, check=False)


def zero_map(X: FpChainComplex, Y: FpChainComplex) -> FpChainMap:
    return FpChainMap(X, Y, {}, check=False)


def _parallel(f: FpChainMap, g: FpChainMap):
    if f.dom != g.dom or f.cod != g.cod:
        raise ChainError("maps are not parallel")


def add(f: FpChainMap, g: FpChainMap) -> FpChainMap:
    _parallel(f, g)
    return FpChainMap(f.dom, f.cod, {n: f.m(n) + g.m(n) for n in f.degrees()}, check=False)


def scale(f: FpChainMap, c: int) -> FpChainMap:
    return FpChainMap(f.dom, f.cod, {n: c * f.m(n) for n in f.degrees()}, check=False)


def compose(g: FpChainMap, f: FpChainMap) -> FpChainMap:
    """g ∘ f."""
    if f.cod != g.dom:
        raise ChainError("maps are not composable")
    p = f.p
    return FpChainMap(f.dom, g.cod, {n: la.mul(p, g.m(n), f.m(n)) for n in f.dom.degrees()},
                      check=False)


# -- homotopies ---------------------------------------------------------------------


@dataclass
class Homotopy:
    """Degree +1 maps ``h[n]: X_n → Y_{n+1}`` with f - g = dh + hd."""

    dom: FpChainComplex
    cod: FpChainComplex
    h: dict

    def at(self, n: int) -> np.ndarray:
        x = self.h.get(n)
        return x if x is not None else _zero(self.cod.dim(n + 1), self.dom.dim(n))

    def boundary(self) -> FpChainMap:
        """The chain map dh + hd."""
        p, X, Y = self.dom.p, self.dom, self.cod
        mats = {n: (la.mul(p, Y.d(n + 1), self.at(n)) + la.mul(p, self.at(n - 1), X.d(n)))
                for n in X.degrees()}
        return FpChainMap(X, Y, mats, check=False)

    def scaled(self, c: int) -> "Homotopy":
        return Homotopy(self.dom, self.cod, {n: c * m % self.dom.p for n, m in self.h.items()})


def check_homotopy(f: FpChainMap, g: FpChainMap, H: Homotopy) -> bool:
    _parallel(f, g)
    return H.boundary() == f - g


def null_homotopic(f: FpChainMap) -> Homotopy | None:
    return are_homotopic(f, zero_map(f.dom, f.cod))


# -- deformation retraction onto homology ---------------------------------------------------


@dataclass
class Retraction:
    """ι: H → X, π: X → H and h: X_n → X_{n+1} with πι = 1 and
    1 - ιπ = dh + hd, where H is the homology with zero differential."""

    complex: FpChainComplex
    iota: dict
    pi: dict
    h: dict
    hdims: dict

    def homology_dim(self, n: int) -> int:
        return self.hdims.get(n, 0)


def retraction(X: FpChainComplex) -> Retraction:
    if X._sdr is not None:
        return X._sdr
    p = X.p
    degs = range(X.lo, X.hi + 2)
    Z, C = {}, {}
    for n in degs:
        Z[n] = la.nullspace(X.d(n), p) if X.dim(n) else _zero(0, 0)
        C[n] = la.extend_basis(Z[n], la.eye(X.dim(n)), p) if X.dim(n) else _zero(0, 0)
    iota, pi, h, hd = {}, {}, {}, {}
    for n in X.degrees():
        dn = X.dim(n)
        B = la.mul(p, X.d(n + 1), C[n + 1]) if C[n + 1].size else _zero(dn, 0)
        Hb = la.extend_basis(B, Z[n], p) if dn else _zero(0, 0)
        T = np.hstack([B, Hb, C[n]]) if dn else _zero(0, 0)
        Tinv = la.inverse(T, p)
        b, k = B.shape[1], Hb.shape[1]
        iota[n], pi[n] = Hb, Tinv[b:b + k]
        h[n] = la.mul(p, C[n + 1], Tinv[:b]) if b else _zero(X.dim(n + 1), dn)
        hd[n] = k
    X._sdr = Retraction(X, iota, pi, h, hd)
    return X._sdr


def homology_dims(X: FpChainComplex) -> dict[int, int]:
    return dict(retraction(X).hdims)


def homology_class(X: FpChainComplex, n: int, vec) -> np.ndarray:
    return la.mul(X.p, retraction(X).pi[n], np.asarray(vec, dtype=np.int64).reshape(-1, 1))


def homology_map(f: FpChainMap) -> dict[int, np.ndarray]:
    """H_n(f) in the bases fixed by :func:`retraction`."""
    rx, ry = retraction(f.dom), retraction(f.cod)
    p = f.p
    out = {}
    for n in f.degrees():
        hx, hy = rx.homology_dim(n), ry.homology_dim(n)
        if hx and hy:
            out[n] = la.mul(p, ry.pi[n], f.m(n), rx.iota[n])
        else:
            out[n] = _zero(hy, hx)
    return out


def is_quasi_isomorphism(f: FpChainMap) -> bool:
    return all(la.is_invertible(m, f.p) for m in homology_map(f).values())


def is_acyclic(X: FpChainComplex) -> bool:
    return not any(homology_dims(X).values())


def homology_lift(f: FpChainMap) -> FpChainMap:
    """ι_Y H(f) π_X: a chain map homotopic to f that factors through homology."""
    rx, ry = retraction(f.dom), retraction(f.cod)
    Hf = homology_map(f)
    mats = {}
    for n in f.degrees():
        if Hf[n].size:
            mats[n] = la.mul(f.p, ry.iota[n], Hf[n], rx.pi[n])
    return FpChainMap(f.dom, f.cod, mats, check=False)


def are_homotopic(f: FpChainMap, g: FpChainMap, method: str = "retraction"
                  ) -> Homotopy | None:
    """A homotopy f ≃ g, or None when none exists.

    ``retraction`` builds it from the deformation retractions of both ends;
    ``system`` solves dh + hd = f - g as one linear system.
    """
    _parallel(f, g)
    if method == "system":
        return _homotopy_by_system(f, g)
    if method != "retraction":
        raise ValueError("method must be 'retraction' or 'system'")
    phi = f - g
    if any(m.any() for m in homology_map(phi).values()):
        return None
    X, Y, p = f.dom, f.cod, f.p
    rx, ry = retraction(X), retraction(Y)
    h = {}
    for n in X.degrees():
        # φ = d(φ h_X + h_Y φ ι π) + (φ h_X + h_Y φ ι π) d when H(φ) = 0
        part = la.mul(p, phi.m(n + 1), rx.h[n])
        if rx.homology_dim(n):
            part = part + la.mul(p, ry.h[n] if n in ry.h else _zero(Y.dim(n + 1), Y.dim(n)),
                                 phi.m(n), rx.iota[n], rx.pi[n])
        h[n] = part % p
    H = Homotopy(X, Y, h)
    if not check_homotopy(f, g, H):
        raise AssertionError("constructed homotopy fails its defining equation")
    return H


def _homotopy_by_system(f: FpChainMap, g: FpChainMap) -> Homotopy | None:
    X, Y, p = f.dom, f.cod, f.p
    degs = list(X.degrees())
    offs, total = {}, 0
    for n in degs:
        offs[n] = total
        total += Y.dim(n + 1) * X.dim(n)
    rows, rhs = [], []
    phi = f - g
    for n in degs:
        block = _zero(Y.dim(n) * X.dim(n), total)
        if n in offs and Y.dim(n + 1) * X.dim(n):
            block[:, offs[n]:offs[n] + Y.dim(n + 1) * X.dim(n)] = np.kron(
                Y.d(n + 1), la.eye(X.dim(n)))
        if n - 1 in offs and Y.dim(n) * X.dim(n - 1):
            block[:, offs[n - 1]:offs[n - 1] + Y.dim(n) * X.dim(n - 1)] = np.kron(
                la.eye(Y.dim(n)), X.d(n).T)
        rows.append(block)
        rhs.append(phi.m(n).reshape(-1))
    A = np.vstack(rows) if rows else _zero(0, total)
    b = np.concatenate(rhs) if rhs else np.zeros(0, dtype=np.int64)
    x = la.solve(A, b, p)
    if x is None:
        return None
    H = Homotopy(X, Y, {n: x[offs[n]:offs[n] + Y.dim(n + 1) * X.dim(n)].reshape(
        Y.dim(n + 1), X.dim(n)) for n in degs})
    if not check_homotopy(f, g, H):
        raise AssertionError("linear solver returned a wrong homotopy")
    return H


def homotopy_inverse(f: FpChainMap) -> FpChainMap:
    """ψ with ψf ≃ 1 and fψ ≃ 1, for a quasi-isomorphism f."""
    rx, ry = retraction(f.dom), retraction(f.cod)
    Hf = homology_map(f)
    mats = {}
    for n in f.degrees():
        if not la.is_invertible(Hf[n], f.p):
            raise ChainError(f"not a quasi-isomorphism in degree {n}")
        if Hf[n].size:
            mats[n] = la.mul(f.p, rx.iota[n], la.inverse(Hf[n], f.p), ry.pi[n])
    return FpChainMap(f.cod, f.dom, mats, check=False)


# -- sums, shifts, cones ----------------------------------------------------------------


@dataclass
class DirectSum:
    complex: FpChainComplex
    in1: FpChainMap
    in2: FpChainMap
    pr1: FpChainMap
    pr2: FpChainMap


def direct_sum(X: FpChainComplex, Y: FpChainComplex) -> DirectSum:
    p = X.p
    degs = span_degrees(X, Y)
    S = FpChainComplex(p, degs.start, [X.dim(n) + Y.dim(n) for n in degs], {
        n: _blocks([X.dim(n - 1), Y.dim(n - 1)], [X.dim(n), Y.dim(n)],
                   {(0, 0): X.d(n), (1, 1): Y.d(n)}) for n in degs}, check=False)

    def piece(n, which, inject):
        sizes = [X.dim(n), Y.dim(n)]
        e = la.eye(sizes[which])
        if inject:
            return _blocks(sizes, [sizes[which]], {(which, 0): e})
        return _blocks([sizes[which]], sizes, {(0, which): e})

    return DirectSum(
        S,
        FpChainMap(X, S, {n: piece(n, 0, True) for n in degs}, check=False),
        FpChainMap(Y, S, {n: piece(n, 1, True) for n in degs}, check=False),
        FpChainMap(S, X, {n: piece(n, 0, False) for n in degs}, check=False),
        FpChainMap(S, Y, {n: piece(n, 1, False) for n in degs}, check=False),
    )


def pair_map(f: FpChainMap, g: FpChainMap) -> FpChainMap:
    """(f, g): X → Y ⊕ Z."""
    if f.dom != g.dom:
        raise ChainError("pair needs a common domain")
    S = direct_sum(f.cod, g.cod).complex
    return FpChainMap(f.dom, S, {n: np.vstack([f.m(n), g.m(n)]) for n in f.dom.degrees()},
                      check=False)


def copair_map(j: FpChainMap, k: FpChainMap) -> FpChainMap:
    """[j, k]: Y ⊕ Z → W."""
    if j.cod != k.cod:
        raise ChainError("copair needs a common codomain")
    S = direct_sum(j.dom, k.dom).complex
    return FpChainMap(S, j.cod, {n: np.hstack([j.m(n), k.m(n)]) for n in S.degrees()},
                      check=False)


def suspend(X: FpChainComplex) -> FpChainComplex:
    return FpChainComplex(X.p, X.lo + 1, X.dims,
                          {n + 1: -X.d(n) for n in X.degrees()}, check=False)


def loop(X: FpChainComplex) -> FpChainComplex:
    return FpChainComplex(X.p, X.lo - 1, X.dims,
                          {n - 1: -X.d(n) for n in X.degrees()}, check=False)


def suspend_map(f: FpChainMap) -> FpChainMap:
    return FpChainMap(suspend(f.dom), suspend(f.cod),
                      {n + 1: f.m(n) for n in f.degrees()}, check=False)


def loop_map(f: FpChainMap) -> FpChainMap:
    return FpChainMap(loop(f.dom), loop(f.cod), {n - 1: f.m(n) for n in f.degrees()},
                      check=False)


@dataclass
class MappingCone:
    """cone(f) with incl: Y → C, proj: C → ΣX and a homotopy incl∘f ≃ 0."""

    complex: FpChainComplex
    incl: FpChainMap
    proj: FpChainMap
    null_homotopy: Homotopy
    map: FpChainMap


def cone(f: FpChainMap) -> MappingCone:
    X, Y, p = f.dom, f.cod, f.p
    lo = min(X.lo + 1, Y.lo)
    hi = max(X.hi + 1, Y.hi)
    degs = range(lo, hi + 1)
    dims = [X.dim(n - 1) + Y.dim(n) for n in degs]
    diffs = {n: _blocks([X.dim(n - 2), Y.dim(n - 1)], [X.dim(n - 1), Y.dim(n)],
                        {(0, 0): -X.d(n - 1), (1, 0): -f.m(n - 1), (1, 1): Y.d(n)})
             for n in degs}
    C = FpChainComplex(p, lo, dims, diffs, check=False)
    SX = suspend(X)
    incl = FpChainMap(Y, C, {n: _blocks([X.dim(n - 1), Y.dim(n)], [Y.dim(n)],
                                        {(1, 0): la.eye(Y.dim(n))}) for n in degs},
                      check=False)
    proj = FpChainMap(C, SX, {n: _blocks([X.dim(n - 1)], [X.dim(n - 1), Y.dim(n)],
                                         {(0, 0): la.eye(X.dim(n - 1))}) for n in degs},
                      check=False)
    # h(x) = (-x, 0) lands in C_{n+1} = X_n ⊕ Y_{n+1}
    h = {n: _blocks([X.dim(n), Y.dim(n + 1)], [X.dim(n)], {(0, 0): -la.eye(X.dim(n))})
         for n in X.degrees()}
    H = Homotopy(X, C, {n: m % p for n, m in h.items()})
    return MappingCone(C, incl, proj, H, f)


@dataclass
class Fiber:
    """fiber(f) = Ω cone(f) with p: F → X and δ: Y → ΣF."""

    complex: FpChainComplex
    proj: FpChainMap
    delta: FpChainMap
    null_homotopy: Homotopy
    map: FpChainMap


def fiber(f: FpChainMap) -> Fiber:
    c = cone(f)
    F = loop(c.complex)
    proj = loop_map(c.proj)
    proj = FpChainMap(F, f.dom, {n: proj.m(n) for n in F.degrees()}, check=False)
    # ΣΩ C = C strictly, so the cone inclusion is δ: Y → ΣF
    delta = FpChainMap(f.cod, suspend(F), {n: c.incl.m(n) for n in c.complex.degrees()},
                       check=False)
    X, Y = f.dom, f.cod
    # f∘proj ≃ 0 via H(x, y) = y
    H = Homotopy(F, Y, {n: _blocks([Y.dim(n + 1)], [X.dim(n), Y.dim(n + 1)],
                                   {(0, 1): la.eye(Y.dim(n + 1))}) for n in F.degrees()})
    return Fiber(F, proj, delta, H, f)


def comparison_map(a: FpChainMap, b: FpChainMap, H: Homotopy,
                   mc: MappingCone | None = None) -> FpChainMap:
    """cone(a) → Z, (x', y) ↦ b y - H x', for b∘a = dH + Hd."""
    mc = mc or cone(a)
    X, Y, Z = a.dom, a.cod, b.cod
    p = a.p
    mats = {n: np.hstack([(-H.at(n - 1)) % p, b.m(n)]) for n in mc.complex.degrees()}
    return FpChainMap(mc.complex, Z, mats)


@dataclass
class Cylinder:
    """Mapping cylinder of f with i: X → Cyl, j: Y → Cyl, π: Cyl → Y and
    a homotopy i ≃ j∘f (i - jf = dh + hd)."""

    complex: FpChainComplex
    i: FpChainMap
    j: FpChainMap
    pi: FpChainMap
    homotopy: Homotopy


def cylinder(f: FpChainMap) -> Cylinder:
    X, Y, p = f.dom, f.cod, f.p
    lo = min(X.lo, Y.lo)
    hi = max(X.hi + 1, Y.hi)
    degs = range(lo, hi + 1)

    def sizes(n):
        return [X.dim(n), X.dim(n - 1), Y.dim(n)]

    diffs = {n: _blocks(sizes(n - 1), sizes(n), {
        (0, 0): X.d(n), (0, 1): la.eye(X.dim(n - 1)), (1, 1): -X.d(n - 1),
        (2, 1): -f.m(n - 1), (2, 2): Y.d(n)}) for n in degs}
    Cyl = FpChainComplex(p, lo, [sum(sizes(n)) for n in degs], diffs, check=False)
    i = FpChainMap(X, Cyl, {n: _blocks(sizes(n), [X.dim(n)], {(0, 0): la.eye(X.dim(n))})
                            for n in degs}, check=False)
    j = FpChainMap(Y, Cyl, {n: _blocks(sizes(n), [Y.dim(n)], {(2, 0): la.eye(Y.dim(n))})
                            for n in degs}, check=False)
    pi = FpChainMap(Cyl, Y, {n: _blocks([Y.dim(n)], sizes(n), {
        (0, 0): f.m(n), (0, 2): la.eye(Y.dim(n))}) for n in degs}, check=False)
    h = Homotopy(X, Cyl, {n: _blocks(sizes(n + 1), [X.dim(n)], {(1, 0): la.eye(X.dim(n))})
                          for n in X.degrees()})
    return Cylinder(Cyl, i, j, pi, h)


@dataclass
class Quotient:
    """B / im(m) with the quotient map q and a degreewise section s (q s = 1)."""

    complex: FpChainComplex
    q: FpChainMap
    section: dict


def quotient(m: FpChainMap) -> Quotient:
    """Cokernel of a chain map, computed degreewise from a complement of the image."""
    B, p = m.cod, m.p
    Q, V = {}, {}
    for n in B.degrees():
        im = la.column_basis(m.m(n), p) if B.dim(n) else _zero(0, 0)
        comp = la.extend_basis(im, la.eye(B.dim(n)), p) if B.dim(n) else _zero(0, 0)
        T = np.hstack([im, comp]) if B.dim(n) else _zero(0, 0)
        Tinv = la.inverse(T, p)
        Q[n] = Tinv[im.shape[1]:]
        V[n] = comp
    dims = [V[n].shape[1] for n in B.degrees()]
    diffs = {n: la.mul(p, Q[n - 1], B.d(n), V[n]) for n in B.degrees() if n - 1 in Q}
    W = FpChainComplex(p, B.lo, dims, diffs)
    q = FpChainMap(B, W, Q)
    return Quotient(W, q, V)


# -- squares ------------------------------------------------------------------------------


@dataclass
class StrictSquare:
    """x → y (f), x → z (g), y → w (j), z → w (k) with j f = k g."""

    f: FpChainMap
    g: FpChainMap
    j: FpChainMap
    k: FpChainMap

    def __post_init__(self):
        if self.f.dom != self.g.dom or self.j.dom != self.f.cod or self.k.dom != self.g.cod \
                or self.j.cod != self.k.cod:
            raise ChainError("square maps do not fit together")
        if compose(self.j, self.f) != compose(self.k, self.g):
            raise ChainError("square does not commute strictly")

    @property
    def x(self):
        return self.f.dom

    @property
    def y(self):
        return self.f.cod

    @property
    def z(self):
        return self.g.cod

    @property
    def w(self):
        return self.j.cod


def constant_square(X: FpChainComplex) -> StrictSquare:
    one = identity_map(X)
    return StrictSquare(one, one, one, one)


def strict_pushout(f: FpChainMap, g: FpChainMap) -> StrictSquare:
    """The degreewise pushout y ⊔_x z = coker((f, -g))."""
    ds = direct_sum(f.cod, g.cod)
    qt = quotient(pair_map(f, -g))
    return StrictSquare(f, g, compose(qt.q, ds.in1), compose(qt.q, ds.in2))


@dataclass
class HoPushout:
    """A homotopy pushout of a span y ← x → z.

    ``square`` is the strict pushout of cyl(f) ← x → z; ``jprime``: y → w
    and ``k``: z → w with a homotopy jprime∘f ≃ k∘g.
    """

    square: StrictSquare
    cylinder: Cylinder
    jprime: FpChainMap
    k: FpChainMap
    homotopy: Homotopy

    @property
    def w(self):
        return self.square.w


def hopushout(f: FpChainMap, g: FpChainMap) -> HoPushout:
    if f.dom != g.dom:
        raise ChainError("span maps need a common domain")
    cyl = cylinder(f)
    ds = direct_sum(cyl.complex, g.cod)
    qt = quotient(pair_map(cyl.i, -g))
    jc = compose(qt.q, ds.in1)
    k = compose(qt.q, ds.in2)
    sq = StrictSquare(cyl.i, g, jc, k)
    jprime = compose(jc, cyl.j)
    # i - jf = dh + hd in cyl, and Q∘i = k∘g in w
    p = f.p
    hW = {n: (-la.mul(p, qt.q.m(n + 1), ds.in1.m(n + 1), cyl.homotopy.at(n))) % p
          for n in f.dom.degrees()}
    H = Homotopy(f.dom, sq.w, hW)
    if not check_homotopy(compose(jprime, f), compose(k, g), H):
        raise AssertionError("homotopy pushout comparison homotopy is wrong")
    return HoPushout(sq, cyl, jprime, k, H)


def cocartesian_comparison(sq: StrictSquare) -> FpChainMap:
    """cone((f, -g)) → w given by [j, k] on y ⊕ z and zero on the x' part."""
    a = pair_map(sq.f, -sq.g)
    mc = cone(a)
    zero = Homotopy(sq.x, sq.w, {})
    return comparison_map(a, copair_map(sq.j, sq.k), zero, mc)


def cartesian_comparison(sq: StrictSquare) -> FpChainMap:
    """x → fiber([j, -k]), x ↦ ((f x, g x), 0)."""
    F = fiber(copair_map(sq.j, -sq.k))
    fg = pair_map(sq.f, sq.g)
    mats = {n: np.vstack([fg.m(n), _zero(sq.w.dim(n + 1), sq.x.dim(n))])
            for n in sq.x.degrees()}
    return FpChainMap(sq.x, F.complex, mats)


def is_bicartesian_side(sq: StrictSquare, side: str) -> bool:
    if side == "cocartesian":
        return is_quasi_isomorphism(cocartesian_comparison(sq))
    if side == "cartesian":
        return is_quasi_isomorphism(cartesian_comparison(sq))
    raise ValueError("side must be 'cartesian' or 'cocartesian'")


# -- triangles ------------------------------------------------------------------------------


@dataclass
class Triangle:
    """X →a Y →b Z →c ΣX, optionally with null-homotopies of the composites."""

    a: FpChainMap
    b: FpChainMap
    c: FpChainMap
    witnesses: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.a.cod != self.b.dom or self.b.cod != self.c.dom:
            raise ChainError("triangle maps are not composable")
        if self.c.cod != suspend(self.a.dom):
            raise ChainError("third map must land in ΣX")

    @property
    def X(self):
        return self.a.dom

    @property
    def Y(self):
        return self.a.cod

    @property
    def Z(self):
        return self.b.cod


def cone_triangle(f: FpChainMap) -> Triangle:
    mc = cone(f)
    return Triangle(f, mc.incl, mc.proj, {"ba": mc.null_homotopy})


def rotate(t: Triangle) -> Triangle:
    """Y → Z → ΣX → ΣY with third map -Σa."""
    return Triangle(t.b, t.c, -suspend_map(t.a))


def mv_triangle(f: FpChainMap, g: FpChainMap) -> Triangle:
    """x →(f, -g) y ⊕ z →[j, k] w →δ Σx for the homotopy pushout w."""
    hp = hopushout(f, g)
    a = pair_map(f, -g)
    b = copair_map(hp.jprime, hp.k)
    mc = cone(a)
    # b∘a = j'f - kg = dH + Hd with the pushout homotopy
    phi = comparison_map(a, b, hp.homotopy, mc)
    psi = homotopy_inverse(phi)
    delta = compose(mc.proj, psi)
    return Triangle(a, b, delta, {"ba": hp.homotopy, "comparison": phi})


def distinguished_witness(t: Triangle) -> FpChainMap | None:
    """A quasi-isomorphism φ: cone(a) → Z with φ∘incl = b and c∘φ ≃ proj, or None."""
    a, b, c = t.a, t.b, t.c
    p = a.p
    H0 = t.witnesses.get("ba") or null_homotopic(compose(b, a))
    if H0 is None or not check_homotopy(compose(b, a), zero_map(a.dom, b.cod), H0):
        return None
    if null_homotopic(compose(c, b)) is None:
        return None
    if null_homotopic(compose(suspend_map(a), c)) is None:
        return None
    mc = cone(a)
    phi0 = comparison_map(a, b, H0, mc)
    Hc, Hproj, Hphi0 = homology_map(c), homology_map(mc.proj), homology_map(phi0)
    SX, Z = mc.proj.cod, b.cod
    rs, rz = retraction(SX), retraction(Z)
    theta = {}
    for n in mc.complex.degrees():
        hs, hz, hc = rs.homology_dim(n), rz.homology_dim(n), Hproj[n].shape[1]
        target = (Hproj[n] - la.mul(p, Hc[n], Hphi0[n])) % p if hc else _zero(hs, 0)
        if hs * hz == 0:
            if target.any():
                return None
            continue
        # Hc Θ Hproj = target, solved for Θ (hz × hs), row-major vectorised
        A = np.kron(Hc[n], Hproj[n].T) % p
        sol = la.solve(A, target.reshape(-1), p)
        if sol is None:
            return None
        theta[n] = la.mul(p, rz.iota[n], sol.reshape(hz, hs), rs.pi[n])
    th = FpChainMap(SX, Z, theta, check=False)
    phi = phi0 + compose(th, mc.proj)
    if not is_quasi_isomorphism(phi):
        return None
    if are_homotopic(compose(c, phi), mc.proj) is None:
        raise AssertionError("comparison fails to commute with the projections")
    return phi


def is_distinguished(t: Triangle) -> bool:
    return distinguished_witness(t) is not None


@dataclass
class LesReport:
    """Rows (slot, dimension, rank in, rank out) of the long exact sequence."""

    rows: list
    failures: list

    @property
    def ok(self) -> bool:
        return not self.failures

    def table(self) -> str:
        lines = []
        for name, dim, rin, rout in self.rows:
            lines.append(f"{name}: dim={dim} rank_in={rin} rank_out={rout}")
        return "\n".join(lines)


def les_check(t: Triangle, require_distinguished: bool = True) -> LesReport:
    """Exactness of ... → H_n X → H_n Y → H_n Z → H_{n-1} X → ... by ranks."""
    if require_distinguished and not is_distinguished(t):
        raise NotDistinguished("long exact sequence requested for a non-distinguished triangle")
    p = t.a.p
    rx = retraction(t.X)
    Ha, Hb = homology_map(t.a), homology_map(t.b)
    rz = retraction(t.Z)
    degs = range(min(t.X.lo, t.Y.lo, t.Z.lo) - 1, max(t.X.hi + 1, t.Y.hi, t.Z.hi) + 1)

    def hA(n):
        return Ha.get(n, _zero(retraction(t.Y).homology_dim(n), rx.homology_dim(n)))

    def hB(n):
        return Hb.get(n, _zero(rz.homology_dim(n), retraction(t.Y).homology_dim(n)))

    def hC(n):
        # H_n(Z) → H_{n-1}(X): a cycle of ΣX is a cycle of X one degree down
        if rx.homology_dim(n - 1) and rz.homology_dim(n):
            return la.mul(p, rx.pi[n - 1], t.c.m(n), rz.iota[n])
        return _zero(rx.homology_dim(n - 1), rz.homology_dim(n))

    rows, fails = [], []
    ry = retraction(t.Y)
    for n in reversed(degs):
        for name, dim, into, out in (
                (f"H{n}(Y)", ry.homology_dim(n), hA(n), hB(n)),
                (f"H{n}(Z)", rz.homology_dim(n), hB(n), hC(n)),
                (f"H{n - 1}(X)", rx.homology_dim(n - 1), hC(n), hA(n - 1))):
            rin, rout = la.rank(into, p), la.rank(out, p)
            rows.append((name, dim, rin, rout))
            if into.size and out.size and la.mul(p, out, into).any():
                fails.append(f"{name}: composite through the slot is nonzero")
            elif rin + rout != dim:
                fails.append(f"{name}: image and kernel differ (ranks {rin}+{rout} != {dim})")
    return LesReport(rows, fails)


# -- the cofiber-cubed and fiber/cofiber sign checks ------------------------------------


@dataclass
class CofiberCubed:
    """cof³(f): C(i1) → C(i2) with comparisons π1: C(i1) → ΣX and
    π2: C(i2) → ΣY, where π2 carries a sign so that π2∘cof³ ≃ Σf∘π1."""

    cof3: FpChainMap
    pi1: FpChainMap
    pi2: FpChainMap
    suspended: FpChainMap


def cofiber_cubed(f: FpChainMap) -> CofiberCubed:
    c1 = cone(f)
    c2 = cone(c1.incl)
    c3 = cone(c2.incl)
    X, Y, p = f.dom, f.cod, f.p
    C1, C2 = c1.complex, c2.complex
    pi1 = FpChainMap(C2, suspend(X), {
        n: np.hstack([_zero(X.dim(n - 1), Y.dim(n - 1)), c1.proj.m(n)]) for n in C2.degrees()})
    # C(i2)_n = C(f)_{n-1} ⊕ C(i1)_n; the Y_{n-1} slot of C(i1)_n is c2.proj
    pi2 = FpChainMap(c3.complex, suspend(Y), {
        n: np.hstack([_zero(Y.dim(n - 1), C1.dim(n - 1)), -c2.proj.m(n) % p])
        for n in c3.complex.degrees()})
    return CofiberCubed(c3.incl, pi1, pi2, suspend_map(f))


def check_cofiber_cubed(f: FpChainMap) -> dict[str, bool]:
    cc = cofiber_cubed(f)
    natural = are_homotopic(compose(cc.pi2, cc.cof3), compose(cc.suspended, cc.pi1))
    return {
        "first_comparison_qiso": is_quasi_isomorphism(cc.pi1),
        "second_comparison_qiso": is_quasi_isomorphism(cc.pi2),
        "natural_up_to_homotopy": natural is not None,
    }


def connecting_maps(f: FpChainMap) -> tuple[FpChainMap, FpChainMap]:
    """(δ_fib, δ_cof), both Y → Σ fiber(f).

    δ_fib comes from the fiber construction; δ_cof is the third map of the
    cofiber sequence fiber(f) → X → Y, read through the comparison
    cone(p) → Y, (x', y, x) ↦ fx - y.
    """
    fb = fiber(f)
    mc = cone(fb.proj)
    phi = comparison_map(fb.proj, f, fb.null_homotopy, mc)
    delta_cof = compose(mc.proj, homotopy_inverse(phi))
    return fb.delta, delta_cof


# -- random instances --------------------------------------------------------------------


def random_complex(rng: np.random.Generator, p: int = DEFAULT_PRIME, lo: int = -3,
                   hi: int = 3, max_dim: int = 4) -> FpChainComplex:
    """Random dimensions in [0, max_dim]; each d_n is a random map into ker d_{n-1}."""
    dims = [int(rng.integers(0, max_dim + 1)) for _ in range(lo, hi + 1)]
    diffs = {}
    for i in range(1, len(dims)):
        n = lo + i
        below = diffs.get(n - 1, _zero(dims[i - 2] if i >= 2 else 0, dims[i - 1]))
        ker = la.nullspace(below, p) if dims[i - 1] else _zero(0, 0)
        if ker.shape[1] and dims[i]:
            diffs[n] = la.mul(p, ker, rng.integers(0, p, size=(ker.shape[1], dims[i])))
    return FpChainComplex(p, lo, dims, diffs)


def chain_map_space(X: FpChainComplex, Y: FpChainComplex) -> tuple[np.ndarray, dict]:
    """Basis (as columns) of all chain maps X → Y, flattened degree by degree."""
    p = X.p
    degs = list(span_degrees(X, Y))
    offs, total = {}, 0
    for n in degs:
        offs[n] = total
        total += Y.dim(n) * X.dim(n)
    rows = []
    for n in degs:
        block = _zero(Y.dim(n - 1) * X.dim(n), total)
        if Y.dim(n) * X.dim(n):
            block[:, offs[n]:offs[n] + Y.dim(n) * X.dim(n)] = np.kron(Y.d(n), la.eye(X.dim(n)))
        if n - 1 in offs and Y.dim(n - 1) * X.dim(n - 1):
            block[:, offs[n - 1]:offs[n - 1] + Y.dim(n - 1) * X.dim(n - 1)] -= np.kron(
                la.eye(Y.dim(n - 1)), X.d(n).T)
        rows.append(block)
    A = np.vstack(rows) % p if rows else _zero(0, total)
    basis = la.nullspace(A, p) if total else _zero(0, 0)
    return basis, offs


def random_chain_map(rng: np.random.Generator, X: FpChainComplex, Y: FpChainComplex
                     ) -> FpChainMap:
    p = X.p
    basis, offs = chain_map_space(X, Y)
    if basis.shape[1]:
        vec = la.mul(p, basis, rng.integers(0, p, size=(basis.shape[1], 1)))[:, 0]
    else:
        vec = np.zeros(basis.shape[0], dtype=np.int64)
    mats = {n: vec[o:o + Y.dim(n) * X.dim(n)].reshape(Y.dim(n), X.dim(n))
            for n, o in offs.items()}
    return FpChainMap(X, Y, mats)


def random_map(rng: np.random.Generator, p: int = DEFAULT_PRIME, lo: int = -3, hi: int = 3,
               max_dim: int = 4) -> FpChainMap:
    X = random_complex(rng, p, lo, hi, max_dim)
    Y = random_complex(rng, p, lo, hi, max_dim)
    return random_chain_map(rng, X, Y)


def random_span(rng: np.random.Generator, p: int = DEFAULT_PRIME, lo: int = -3, hi: int = 3,
                max_dim: int = 4) -> tuple[FpChainMap, FpChainMap]:
    X = random_complex(rng, p, lo, hi, max_dim)
    Y = random_complex(rng, p, lo, hi, max_dim)
    Z = random_complex(rng, p, lo, hi, max_dim)
    return random_chain_map(rng, X, Y), random_chain_map(rng, X, Z)

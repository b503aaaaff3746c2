"""Finite categories given by explicit composition tables.

Objects and morphisms are arbitrary hashable ids (strings in files, tuples for
the categories built by constructions). A :class:`FinCat` stores the full
composition table, so every categorical law can be checked by enumeration.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping

Id = Hashable

DEFAULT_SIZE_LIMIT = 100_000


class CategoryError(ValueError):
    """Base class for malformed categorical data."""


class StructuralError(CategoryError):
    """Dangling ids, missing table entries, ill-typed composites."""


class LawViolation(CategoryError):
    """A well-typed table that breaks an identity/associativity/functor law."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations[:5]))


class SizeGuardError(RuntimeError):
    """A construction would enumerate more items than the configured bound."""


def sort_key(x) -> str:
    return str(x)


def _identity_id(x):
    return f"1_{x}" if isinstance(x, str) else ("1", x)


class FinCat:
    """A finite category.

    ``comp[(g, f)]`` is ``g∘f`` and is defined exactly for ``tgt(f) == src(g)``.
    Construction only checks the table structurally; use
    :func:`validate_category` for the identity and associativity laws.
    """

    __slots__ = ("objects", "morphisms", "src", "tgt", "ident", "comp", "name",
                 "_hom", "_out", "_in", "_identities")

    def __init__(self, objects, morphisms, src, tgt, ident, comp, name=""):
        self.objects = tuple(objects)
        self.morphisms = tuple(morphisms)
        self.src = dict(src)
        self.tgt = dict(tgt)
        self.ident = dict(ident)
        self.comp = dict(comp)
        self.name = name
        self._check_structure()
        hom = {}
        out = {x: [] for x in self.objects}
        inn = {x: [] for x in self.objects}
        for m in self.morphisms:
            s, t = self.src[m], self.tgt[m]
            hom.setdefault((s, t), []).append(m)
            out[s].append(m)
            inn[t].append(m)
        self._hom = {k: tuple(v) for k, v in hom.items()}
        self._out = {k: tuple(v) for k, v in out.items()}
        self._in = {k: tuple(v) for k, v in inn.items()}
        self._identities = frozenset(self.ident.values())

    def _check_structure(self):
        objs = set(self.objects)
        if len(objs) != len(self.objects):
            raise StructuralError("duplicate object ids")
        mors = set(self.morphisms)
        if len(mors) != len(self.morphisms):
            raise StructuralError("duplicate morphism ids")
        for m in self.morphisms:
            if m not in self.src or m not in self.tgt:
                raise StructuralError(f"morphism {m!r} has no source/target")
            if self.src[m] not in objs or self.tgt[m] not in objs:
                raise StructuralError(f"morphism {m!r} has a dangling endpoint")
        for x in self.objects:
            i = self.ident.get(x)
            if i is None:
                raise StructuralError(f"object {x!r} has no identity")
            if i not in mors or self.src[i] != x or self.tgt[i] != x:
                raise StructuralError(f"identity of {x!r} is not an endomorphism of it")
        for f in self.morphisms:
            for g in self.morphisms:
                if self.tgt[f] != self.src[g]:
                    continue
                h = self.comp.get((g, f))
                if h is None:
                    raise StructuralError(f"composite {g!r}∘{f!r} is missing")
                if h not in mors:
                    raise StructuralError(f"composite {g!r}∘{f!r} = {h!r} is dangling")
                if self.src[h] != self.src[f] or self.tgt[h] != self.tgt[g]:
                    raise StructuralError(f"composite {g!r}∘{f!r} has wrong endpoints")
        for (g, f) in self.comp:
            if g not in mors or f not in mors or self.tgt[f] != self.src[g]:
                raise StructuralError(f"composite entry ({g!r}, {f!r}) is not composable")

    # -- queries -----------------------------------------------------------

    def hom(self, x, y) -> tuple:
        return self._hom.get((x, y), ())

    def out_of(self, x) -> tuple:
        return self._out[x]

    def into(self, x) -> tuple:
        return self._in[x]

    def compose(self, g, f):
        return self.comp[(g, f)]

    def chain(self, *ms):
        """Compose ``ms`` given in diagrammatic order: chain(f, g) = g∘f."""
        out = ms[0]
        for m in ms[1:]:
            out = self.comp[(m, out)]
        return out

    def is_identity(self, m) -> bool:
        return m in self._identities

    def nonidentity(self) -> list:
        return [m for m in self.morphisms if m not in self._identities]

    def has_object(self, x) -> bool:
        return x in self.ident

    def __len__(self):
        return len(self.objects)

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        return f"<FinCat{label}: {len(self.objects)} objects, {len(self.morphisms)} morphisms>"

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, FinCat):
            return NotImplemented
        return (set(self.objects) == set(other.objects)
                and set(self.morphisms) == set(other.morphisms)
                and self.src == other.src and self.tgt == other.tgt
                and self.ident == other.ident and self.comp == other.comp)

    def __hash__(self):
        return hash((frozenset(self.objects), frozenset(self.morphisms)))

    def initial_objects(self) -> list:
        return [x for x in self.objects
                if all(len(self.hom(x, y)) == 1 for y in self.objects)]

    def terminal_objects(self) -> list:
        return [x for x in self.objects
                if all(len(self.hom(y, x)) == 1 for y in self.objects)]

    def is_thin(self) -> bool:
        return all(len(v) <= 1 for v in self._hom.values())

    def components(self) -> list[list]:
        """Connected components of the underlying graph, in object order."""
        parent = {x: x for x in self.objects}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for m in self.morphisms:
            a, b = find(self.src[m]), find(self.tgt[m])
            if a != b:
                parent[a] = b
        groups: dict = {}
        for x in self.objects:
            groups.setdefault(find(x), []).append(x)
        return list(groups.values())

    def is_loop_free(self) -> bool:
        """No cycle of nonidentity morphisms, so the nerve is finite-dimensional."""
        succ = {x: set() for x in self.objects}
        for m in self.nonidentity():
            if self.src[m] == self.tgt[m]:
                return False
            succ[self.src[m]].add(self.tgt[m])
        state = {}
        for root in self.objects:
            if root in state:
                continue
            stack = [(root, iter(succ[root]))]
            state[root] = 1
            while stack:
                node, it = stack[-1]
                nxt = next(it, None)
                if nxt is None:
                    state[node] = 2
                    stack.pop()
                elif state.get(nxt) == 1:
                    return False
                elif nxt not in state:
                    state[nxt] = 1
                    stack.append((nxt, iter(succ[nxt])))
        return True


# -- building categories ---------------------------------------------------


def make_category(objects, morphisms: Mapping, compose: Mapping | None = None,
                  identities: Mapping | None = None, name: str = "",
                  check: bool = True) -> FinCat:
    """Build a category from nonidentity data.

    ``morphisms`` maps each nonidentity id to ``(src, tgt)``; ``compose`` maps
    ``(g, f)`` to ``g∘f`` for composable nonidentity pairs. Identities and all
    composites involving them are filled in. With ``check`` the laws are
    verified and :class:`LawViolation` is raised on failure.
    """
    objects = list(objects)
    compose = dict(compose or {})
    identities = dict(identities or {x: _identity_id(x) for x in objects})
    src, tgt = {}, {}
    for x in objects:
        if x not in identities:
            raise StructuralError(f"object {x!r} has no identity")
        i = identities[x]
        src[i] = tgt[i] = x
    mors = [identities[x] for x in objects]
    for m, (s, t) in morphisms.items():
        if m in src:
            raise StructuralError(f"morphism id {m!r} clashes with an identity")
        src[m], tgt[m] = s, t
        mors.append(m)
    idset = set(identities.values())
    comp = {}
    for f in mors:
        for g in mors:
            if tgt.get(f) != src.get(g):
                continue
            if g in idset:
                comp[(g, f)] = f
            elif f in idset:
                comp[(g, f)] = g
            elif (g, f) in compose:
                comp[(g, f)] = compose[(g, f)]
    for key in compose:
        if key not in comp:
            g, f = key
            if g not in src or f not in src:
                raise StructuralError(f"compose entry {key!r} uses unknown morphisms")
            raise StructuralError(f"compose entry {key!r} is not composable")
    cat = FinCat(objects, mors, src, tgt, identities, comp, name=name)
    if check:
        report = validate_category(cat)
        if not report.ok:
            raise LawViolation(report.violations)
    return cat


def poset_category(elements, relations=(), name: str = "", closure: bool = True) -> FinCat:
    """Category of a finite poset. ``relations`` are pairs ``(a, b)`` meaning a ≤ b.

    With ``closure`` (the default) the reflexive-transitive closure of the
    relations is taken, so a Hasse diagram suffices. Morphisms are the pairs
    ``(a, b)``; antisymmetry violations raise :class:`StructuralError`.
    """
    elements = list(elements)
    eset = set(elements)
    leq = {(a, a) for a in elements}
    for a, b in relations:
        if a not in eset or b not in eset:
            raise StructuralError(f"relation ({a!r}, {b!r}) uses unknown elements")
        leq.add((a, b))
    if closure:
        up = {a: {b for (x, b) in leq if x == a} for a in elements}
        for k in elements:
            for a in elements:
                if k in up[a]:
                    up[a] |= up[k]
        leq = {(a, b) for a in elements for b in up[a]}
    for a, b in leq:
        if a != b and (b, a) in leq:
            raise StructuralError(f"{a!r} and {b!r} are distinct but mutually ≤")
    order = {a: i for i, a in enumerate(elements)}
    mors = sorted(leq, key=lambda ab: (order[ab[0]], order[ab[1]]))
    src = {m: m[0] for m in mors}
    tgt = {m: m[1] for m in mors}
    ident = {a: (a, a) for a in elements}
    comp = {}
    for (a, b) in mors:
        for c in elements:
            if (b, c) in leq:
                comp[((b, c), (a, b))] = (a, c)
    return FinCat(elements, mors, src, tgt, ident, comp, name=name)


def is_poset_category(C: FinCat) -> bool:
    return C.is_thin() and all(
        not C.hom(y, x) for x in C.objects for y in C.objects
        if x != y and C.hom(x, y))


def leq(C: FinCat, a, b) -> bool:
    return bool(C.hom(a, b))


def terminal() -> FinCat:
    return poset_category(["*"], name="1")


def empty() -> FinCat:
    return poset_category([], name="0")


def discrete(objects) -> FinCat:
    return poset_category(list(objects), name="discrete")


def chain(n: int) -> FinCat:
    return poset_category(range(n), [(i, i + 1) for i in range(n - 1)], name=f"[{n}]")


def arrow() -> FinCat:
    """The category 2 = (0 → 1)."""
    return poset_category([0, 1], [(0, 1)], name="2")


def grid(rows: int, cols: int, name: str = "") -> FinCat:
    elems = [(i, j) for i in range(rows) for j in range(cols)]
    rel = [((i, j), (i + 1, j)) for i in range(rows - 1) for j in range(cols)]
    rel += [((i, j), (i, j + 1)) for i in range(rows) for j in range(cols - 1)]
    return poset_category(elems, rel, name=name or f"{rows}x{cols}")


def square() -> FinCat:
    """□ = 2 × 2 with objects (i, j)."""
    return grid(2, 2, name="square")


def boxbar() -> FinCat:
    """⊠ = 2 × 3 with objects (i, j)."""
    return grid(2, 3, name="boxbar")


def corner() -> FinCat:
    """⌜: □ without (1, 1)."""
    return full_subcategory(square(), [(0, 0), (0, 1), (1, 0)])[0]


def lrcorner() -> FinCat:
    """⌟: □ without (0, 0)."""
    return full_subcategory(square(), [(0, 1), (1, 0), (1, 1)])[0]


def parallel_pair() -> FinCat:
    """The free parallel pair x ⇉ y."""
    return make_category(["x", "y"], {"s": ("x", "y"), "t": ("x", "y")},
                         name="parallel_pair")


def monoid_category(elements, table: Mapping, unit, name: str = "") -> FinCat:
    """One-object category of a finite monoid; ``table[(g, f)] = g·f``."""
    mors = {m: ("*", "*") for m in elements if m != unit}
    comp = {(g, f): table[(g, f)] for g in elements for f in elements
            if g != unit and f != unit}
    return make_category(["*"], mors, comp, identities={"*": unit}, name=name)


def idempotent_monoid() -> FinCat:
    """The monoid {1, e} with e∘e = e."""
    return monoid_category(["1", "e"], {("e", "e"): "e"}, "1", name="idempotent")


def cyclic_group(n: int) -> FinCat:
    """Z/n as a one-object category; morphism k is rotation by k."""
    return monoid_category(list(range(n)),
                           {(a, b): (a + b) % n for a in range(n) for b in range(n)},
                           0, name=f"Z/{n}")


# -- validation ----------------------------------------------------------------


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_category(C) -> ValidationReport:
    """Check identity and associativity laws of a :class:`FinCat`.

    Also accepts a raw description (see :func:`category_from_description`),
    which is expanded first; structural problems raise :class:`StructuralError`.
    """
    if not isinstance(C, FinCat):
        C = category_from_description(C, check=False)
    report = ValidationReport()
    for m in C.morphisms:
        s, t = C.src[m], C.tgt[m]
        if C.comp[(m, C.ident[s])] != m:
            report.violations.append(f"right identity fails for {m!r}")
        if C.comp[(C.ident[t], m)] != m:
            report.violations.append(f"left identity fails for {m!r}")
    nonid = C.nonidentity()
    for f in nonid:
        for g in C.out_of(C.tgt[f]):
            if C.is_identity(g):
                continue
            gf = C.comp[(g, f)]
            for h in C.out_of(C.tgt[g]):
                if C.is_identity(h):
                    continue
                if C.comp[(h, gf)] != C.comp[(C.comp[(h, g)], f)]:
                    report.violations.append(
                        f"associativity fails for ({h!r}, {g!r}, {f!r})")
    return report


def category_from_description(raw: Mapping, check: bool = True, name: str = "") -> FinCat:
    """Expand a raw description into a :class:`FinCat`.

    Keys: ``objects`` (list), ``morphisms`` ({id: (src, tgt)}), ``compose``
    ({(g, f): h}) and optionally ``poset`` (list of cover pairs). With ``poset``
    present the category is the poset generated by the covers.
    """
    objects = list(raw.get("objects", ()))
    if raw.get("poset") is not None:
        if raw.get("morphisms"):
            raise StructuralError("a poset description cannot list morphisms too")
        return poset_category(objects, raw["poset"], name=name)
    return make_category(objects, dict(raw.get("morphisms", {})),
                         dict(raw.get("compose", {})), name=name, check=check)


# -- functors and natural transformations --------------------------------------


class FunctorData:
    """A functor between finite categories, given on objects and morphisms."""

    __slots__ = ("dom", "cod", "obj_map", "mor_map", "name")

    def __init__(self, dom: FinCat, cod: FinCat, obj_map: Mapping, mor_map: Mapping,
                 name: str = "", check: bool = True):
        self.dom, self.cod = dom, cod
        self.obj_map = dict(obj_map)
        self.mor_map = dict(mor_map)
        self.name = name
        if check:
            problems = functor_violations(self)
            if problems:
                raise LawViolation(problems)

    def __call__(self, x):
        return self.obj_map[x]

    def on(self, m):
        return self.mor_map[m]

    def __repr__(self):
        return f"<FunctorData {self.name or ''}: {self.dom!r} -> {self.cod!r}>"

    def __eq__(self, other):
        if not isinstance(other, FunctorData):
            return NotImplemented
        return (self.dom == other.dom and self.cod == other.cod
                and self.obj_map == other.obj_map and self.mor_map == other.mor_map)

    def __hash__(self):
        return hash(tuple(sorted(map(str, self.obj_map.items()))))


def functor_violations(F: FunctorData) -> list[str]:
    A, B = F.dom, F.cod
    out = []
    for x in A.objects:
        if x not in F.obj_map:
            raise StructuralError(f"object {x!r} is not mapped")
        if not B.has_object(F.obj_map[x]):
            raise StructuralError(f"object {x!r} maps to unknown {F.obj_map[x]!r}")
    for m in A.morphisms:
        if m not in F.mor_map:
            raise StructuralError(f"morphism {m!r} is not mapped")
        if F.mor_map[m] not in B.src:
            raise StructuralError(f"morphism {m!r} maps to unknown {F.mor_map[m]!r}")
    for m in A.morphisms:
        fm = F.mor_map[m]
        if B.src[fm] != F.obj_map[A.src[m]] or B.tgt[fm] != F.obj_map[A.tgt[m]]:
            out.append(f"{m!r} is sent to a morphism with wrong endpoints")
    for x in A.objects:
        if F.mor_map[A.ident[x]] != B.ident[F.obj_map[x]]:
            out.append(f"identity of {x!r} is not preserved")
    if out:
        return out
    for (g, f), h in A.comp.items():
        if B.comp[(F.mor_map[g], F.mor_map[f])] != F.mor_map[h]:
            out.append(f"composite {g!r}∘{f!r} is not preserved")
    return out


def functor_from_objects(dom: FinCat, cod: FinCat, obj_map: Mapping, name: str = "",
                         check: bool = True) -> FunctorData:
    """A functor into a thin category, determined by its object map."""
    mor_map = {}
    for m in dom.morphisms:
        hs = cod.hom(obj_map[dom.src[m]], obj_map[dom.tgt[m]])
        if len(hs) != 1:
            raise StructuralError(
                f"{m!r} has {len(hs)} candidate images; the object map does not determine a functor")
        mor_map[m] = hs[0]
    return FunctorData(dom, cod, obj_map, mor_map, name=name, check=check)


def identity_functor(C: FinCat) -> FunctorData:
    return FunctorData(C, C, {x: x for x in C.objects}, {m: m for m in C.morphisms},
                       name="id", check=False)


def compose_functors(G: FunctorData, F: FunctorData) -> FunctorData:
    """G∘F."""
    if F.cod != G.dom:
        raise StructuralError("functors are not composable")
    return FunctorData(F.dom, G.cod,
                       {x: G.obj_map[F.obj_map[x]] for x in F.dom.objects},
                       {m: G.mor_map[F.mor_map[m]] for m in F.dom.morphisms},
                       name=f"{G.name}{F.name}" if (G.name or F.name) else "",
                       check=False)


def constant_functor(A: FinCat, C: FinCat, c) -> FunctorData:
    i = C.ident[c]
    return FunctorData(A, C, {x: c for x in A.objects}, {m: i for m in A.morphisms},
                       name=f"const_{c}", check=False)


def object_functor(C: FinCat, c) -> FunctorData:
    """The functor 1 → C picking out ``c``."""
    return constant_functor(terminal(), C, c)


def to_terminal(A: FinCat, one: FinCat | None = None) -> FunctorData:
    one = one or terminal()
    (star,) = one.objects
    return constant_functor(A, one, star)


def all_functors(A: FinCat, B: FinCat, limit: int = DEFAULT_SIZE_LIMIT):
    """Enumerate every functor A → B by backtracking over object images."""
    objs = list(A.objects)
    nonid = A.nonidentity()
    count = 0
    for images in itertools.product(B.objects, repeat=len(objs)):
        omap = dict(zip(objs, images))
        choices = [B.hom(omap[A.src[m]], omap[A.tgt[m]]) for m in nonid]
        if any(not c for c in choices):
            continue
        for pick in itertools.product(*choices):
            mmap = {A.ident[x]: B.ident[omap[x]] for x in objs}
            mmap.update(zip(nonid, pick))
            F = FunctorData(A, B, omap, mmap, check=False)
            count += 1
            if count > limit:
                raise SizeGuardError(f"more than {limit} candidate functors")
            if not functor_violations(F):
                yield F


class NatTransData:
    """A natural transformation ``source ⇒ target`` between parallel functors."""

    __slots__ = ("source", "target", "components", "name")

    def __init__(self, source: FunctorData, target: FunctorData, components: Mapping,
                 name: str = "", check: bool = True):
        self.source, self.target = source, target
        self.components = dict(components)
        self.name = name
        if check:
            problems = naturality_violations(self)
            if problems:
                raise LawViolation(problems)

    def __getitem__(self, x):
        return self.components[x]

    def __eq__(self, other):
        if not isinstance(other, NatTransData):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and self.components == other.components)

    def __hash__(self):
        return hash(tuple(sorted(map(str, self.components.items()))))

    def __repr__(self):
        return f"<NatTransData {self.name or ''} with {len(self.components)} components>"


def naturality_violations(alpha: NatTransData) -> list[str]:
    F, G = alpha.source, alpha.target
    if F.dom != G.dom or F.cod != G.cod:
        raise StructuralError("source and target functors are not parallel")
    C = F.cod
    out = []
    for x in F.dom.objects:
        if x not in alpha.components:
            raise StructuralError(f"missing component at {x!r}")
        a = alpha.components[x]
        if a not in C.src:
            raise StructuralError(f"component at {x!r} is unknown morphism {a!r}")
        if C.src[a] != F(x) or C.tgt[a] != G(x):
            out.append(f"component at {x!r} has wrong endpoints")
    if out:
        return out
    for m in F.dom.nonidentity():
        s, t = F.dom.src[m], F.dom.tgt[m]
        if C.comp[(G.on(m), alpha[s])] != C.comp[(alpha[t], F.on(m))]:
            out.append(f"naturality square for {m!r} does not commute")
    return out


def identity_nat(F: FunctorData) -> NatTransData:
    return NatTransData(F, F, {x: F.cod.ident[F(x)] for x in F.dom.objects},
                        name="id", check=False)


def vcompose(beta: NatTransData, alpha: NatTransData) -> NatTransData:
    """β·α : F ⇒ H for α : F ⇒ G and β : G ⇒ H."""
    C = alpha.source.cod
    return NatTransData(alpha.source, beta.target,
                        {x: C.comp[(beta[x], alpha[x])] for x in alpha.source.dom.objects},
                        check=False)


def whisker_right(alpha: NatTransData, K: FunctorData) -> NatTransData:
    """αK : FK ⇒ GK for K into the domain of α."""
    return NatTransData(compose_functors(alpha.source, K), compose_functors(alpha.target, K),
                        {x: alpha[K(x)] for x in K.dom.objects}, check=False)


def whisker_left(H: FunctorData, alpha: NatTransData) -> NatTransData:
    """Hα : HF ⇒ HG for H out of the codomain of α."""
    return NatTransData(compose_functors(H, alpha.source), compose_functors(H, alpha.target),
                        {x: H.on(alpha[x]) for x in alpha.source.dom.objects}, check=False)


def is_natural_iso(alpha: NatTransData) -> bool:
    C = alpha.source.cod
    for x, a in alpha.components.items():
        s, t = C.src[a], C.tgt[a]
        if not any(C.is_identity(C.comp[(b, a)]) and C.is_identity(C.comp[(a, b)])
                   for b in C.hom(t, s)):
            return False
    return True


# -- squares and adjunctions ---------------------------------------------------


@dataclass(eq=False)
class SquareData:
    """A square of categories ``u∘p ⇒ v∘q`` with corners D → A, D → B, A → C, B → C."""

    p: FunctorData
    q: FunctorData
    u: FunctorData
    v: FunctorData
    alpha: NatTransData

    def __post_init__(self):
        if self.p.dom != self.q.dom or self.p.cod != self.u.dom \
                or self.q.cod != self.v.dom or self.u.cod != self.v.cod:
            raise StructuralError("square boundary functors do not fit together")
        if self.alpha.source.dom != self.p.dom or self.alpha.source.cod != self.u.cod:
            raise StructuralError("square 2-cell has the wrong shape")

    @property
    def D(self):
        return self.p.dom

    @property
    def A(self):
        return self.p.cod

    @property
    def B(self):
        return self.q.cod

    @property
    def C(self):
        return self.u.cod


def commutative_square(p, q, u, v) -> SquareData:
    """A strictly commuting square with identity 2-cell."""
    up = compose_functors(u, p)
    vq = compose_functors(v, q)
    if up.obj_map != vq.obj_map or up.mor_map != vq.mor_map:
        raise LawViolation(["square does not commute strictly"])
    return SquareData(p, q, u, v, identity_nat(up))


def paste_horizontal(left: SquareData, right: SquareData) -> SquareData:
    """Paste ``right`` to the right of ``left``; needs right.D = left.A, right.q = left.u."""
    if right.q != left.u:
        raise StructuralError("squares do not share the middle edge")
    p = compose_functors(right.p, left.p)
    v = compose_functors(right.v, left.v)
    first = whisker_right(right.alpha, left.p)
    second = whisker_left(right.v, left.alpha)
    alpha = NatTransData(compose_functors(right.u, p), compose_functors(v, left.q),
                         vcompose(second, first).components)
    return SquareData(p, left.q, right.u, v, alpha)


def paste_vertical(top: SquareData, bottom: SquareData) -> SquareData:
    """Paste ``bottom`` below ``top``; needs bottom.D = top.B, bottom.p = top.v."""
    if bottom.p != top.v:
        raise StructuralError("squares do not share the middle edge")
    q = compose_functors(bottom.q, top.q)
    u = compose_functors(bottom.u, top.u)
    first = whisker_left(bottom.u, top.alpha)
    second = whisker_right(bottom.alpha, top.q)
    alpha = NatTransData(compose_functors(u, top.p), compose_functors(bottom.v, q),
                         vcompose(second, first).components)
    return SquareData(top.p, q, u, bottom.v, alpha)


@dataclass(eq=False)
class AdjunctionData:
    """``left ⊣ right`` with unit 1 ⇒ right∘left and counit left∘right ⇒ 1."""

    left: FunctorData
    right: FunctorData
    unit: NatTransData
    counit: NatTransData


# -- products, opposites, subcategories ------------------------------------------


def full_subcategory(C: FinCat, objects: Iterable, name: str = ""):
    """Full subcategory on ``objects`` together with its inclusion functor."""
    keep = [x for x in C.objects if x in set(objects)]
    missing = set(objects) - set(C.objects)
    if missing:
        raise StructuralError(f"unknown objects {sorted(map(str, missing))}")
    ks = set(keep)
    mors = [m for m in C.morphisms if C.src[m] in ks and C.tgt[m] in ks]
    ms = set(mors)
    S = FinCat(keep, mors, {m: C.src[m] for m in mors}, {m: C.tgt[m] for m in mors},
               {x: C.ident[x] for x in keep},
               {k: h for k, h in C.comp.items() if k[0] in ms and k[1] in ms}, name=name)
    inc = FunctorData(S, C, {x: x for x in keep}, {m: m for m in mors}, name="incl",
                      check=False)
    return S, inc


def opposite(C: FinCat) -> FinCat:
    return FinCat(C.objects, C.morphisms, C.tgt, C.src, C.ident,
                  {(f, g): h for (g, f), h in C.comp.items()},
                  name=f"{C.name}^op" if C.name else "")


def opposite_functor(F: FunctorData, dom_op: FinCat | None = None,
                     cod_op: FinCat | None = None) -> FunctorData:
    return FunctorData(dom_op or opposite(F.dom), cod_op or opposite(F.cod),
                       F.obj_map, F.mor_map, check=False)


def product(A: FinCat, B: FinCat, name: str = ""):
    """A × B with objects (a, b) and morphisms (f, g); returns (A×B, pr_A, pr_B)."""
    objs = [(a, b) for a in A.objects for b in B.objects]
    mors = [(f, g) for f in A.morphisms for g in B.morphisms]
    src = {(f, g): (A.src[f], B.src[g]) for (f, g) in mors}
    tgt = {(f, g): (A.tgt[f], B.tgt[g]) for (f, g) in mors}
    ident = {(a, b): (A.ident[a], B.ident[b]) for (a, b) in objs}
    comp = {((f2, g2), (f1, g1)): (A.comp[(f2, f1)], B.comp[(g2, g1)])
            for (f2, f1) in A.comp for (g2, g1) in B.comp}
    P = FinCat(objs, mors, src, tgt, ident, comp, name=name)
    pa = FunctorData(P, A, {o: o[0] for o in objs}, {m: m[0] for m in mors},
                     name="pr1", check=False)
    pb = FunctorData(P, B, {o: o[1] for o in objs}, {m: m[1] for m in mors},
                     name="pr2", check=False)
    return P, pa, pb


def coproduct(A: FinCat, B: FinCat, name: str = ""):
    """A ⊔ B with ids tagged 0/1; returns (A⊔B, in_A, in_B)."""
    objs = [(0, a) for a in A.objects] + [(1, b) for b in B.objects]
    mors = [(0, m) for m in A.morphisms] + [(1, m) for m in B.morphisms]
    src = {(0, m): (0, A.src[m]) for m in A.morphisms}
    src.update({(1, m): (1, B.src[m]) for m in B.morphisms})
    tgt = {(0, m): (0, A.tgt[m]) for m in A.morphisms}
    tgt.update({(1, m): (1, B.tgt[m]) for m in B.morphisms})
    ident = {(0, a): (0, A.ident[a]) for a in A.objects}
    ident.update({(1, b): (1, B.ident[b]) for b in B.objects})
    comp = {((0, g), (0, f)): (0, h) for (g, f), h in A.comp.items()}
    comp.update({((1, g), (1, f)): (1, h) for (g, f), h in B.comp.items()})
    S = FinCat(objs, mors, src, tgt, ident, comp, name=name)
    ia = FunctorData(A, S, {a: (0, a) for a in A.objects}, {m: (0, m) for m in A.morphisms},
                     check=False)
    ib = FunctorData(B, S, {b: (1, b) for b in B.objects}, {m: (1, m) for m in B.morphisms},
                     check=False)
    return S, ia, ib


def coproduct_functor(F: FunctorData, G: FunctorData, dom=None, cod=None) -> FunctorData:
    """F ⊔ G : A ⊔ A' → B ⊔ B'."""
    dom = dom or coproduct(F.dom, G.dom)[0]
    cod = cod or coproduct(F.cod, G.cod)[0]
    omap = {(0, a): (0, F(a)) for a in F.dom.objects}
    omap.update({(1, a): (1, G(a)) for a in G.dom.objects})
    mmap = {(0, m): (0, F.on(m)) for m in F.dom.morphisms}
    mmap.update({(1, m): (1, G.on(m)) for m in G.dom.morphisms})
    return FunctorData(dom, cod, omap, mmap, check=False)


def is_isomorphism_witness(F: FunctorData) -> bool:
    """True when F is bijective on objects and morphisms (an isomorphism)."""
    return (not functor_violations(F)
            and len(set(F.obj_map.values())) == len(F.dom.objects) == len(F.cod.objects)
            and len(set(F.mor_map.values())) == len(F.dom.morphisms) == len(F.cod.morphisms))

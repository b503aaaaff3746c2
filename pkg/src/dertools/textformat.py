"""Block-structured text input format.

A file is a sequence of blocks. Each block opens with ``KIND NAME`` (plus,
for some kinds, a signature) and closes with ``end``. Inside a block,
``key: value`` lines set fields, and further lines (or comma separated items
on the same line) add items to the most recent key. ``#`` starts a comment.

    category C
    objects: a, b, c
    morphisms:
      f: a -> b
      g: b -> c
      h: a -> c
    compose:
      g f = h
    end

    category P
    poset: a < b, b < c        # cover relations; the closure is added
    end

    functor u: A -> C
    objects: 0 -> a
    morphisms: ...             # optional when C is thin
    end

    square S
    comma: u, v                # or p/q/u/v (+ alpha), collapse: D,
    end                        #    identity: u, pullback: u, v, final: f

    lattice L
    elements: 0, a, b, 1
    covers: 0 < a, 0 < b, a < 1, b < 1      # or  builtin: N5
    end

    diagram X on A in L
    values: a -> 0, b -> 1
    end

    complex X
    prime: 3
    lo: 0
    dims: 1 2
    d1: 1 1                    # rows separated by ';', entries mod p
    end

    map f: X -> Y
    m0: 1; 0
    end

    span S: f, g               # two maps out of a common complex
    chainsquare Q: f, g, j, k  # strict square x → y, x → z, y → w, z → w

Identity morphisms are implicit and named ``1_x``. Ids are plain tokens;
integer-looking object names stay strings.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

from . import chainstable as cs
from . import constructions as cons
from . import latticeder as ld
from .fincat import (
    CategoryError,
    FinCat,
    FunctorData,
    NatTransData,
    SquareData,
    category_from_description,
    compose_functors,
    functor_from_objects,
)


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        super().__init__(f"line {line}, column {column}: {message}" if line else message)
        self.message, self.line, self.column = message, line, column


BLOCK_KEYS = {
    "category": {"objects", "morphisms", "compose", "poset"},
    "functor": {"objects", "morphisms"},
    "square": {"comma", "p", "q", "u", "v", "alpha", "collapse", "identity", "pullback",
               "final"},
    "lattice": {"elements", "covers", "builtin"},
    "diagram": {"values"},
    "complex": {"prime", "lo", "dims"},
    "map": set(),
    "span": set(),
    "chainsquare": set(),
}
ONE_LINE = {"span", "chainsquare"}
NAME = r"[^\s:,;=<>#]+"


@dataclass
class Item:
    text: str
    line: int
    column: int


@dataclass
class Block:
    kind: str
    name: str
    header: str
    line: int
    fields: dict = field(default_factory=dict)

    def items(self, key) -> list[Item]:
        return self.fields.get(key, [])

    def scalar(self, key, default=None) -> Item | None:
        items = self.fields.get(key)
        if not items:
            return default
        if len(items) > 1:
            raise ParseError(f"{key} takes a single value", items[1].line, items[1].column)
        return items[0]


def _key_pattern(kind: str):
    keys = BLOCK_KEYS[kind]
    if kind == "complex":
        return re.compile(r"^(prime|lo|dims|d-?\d+)\s*:(.*)$")
    if kind == "map":
        return re.compile(r"^(m-?\d+)\s*:(.*)$")
    return re.compile(r"^(" + "|".join(sorted(keys)) + r")\s*:(.*)$") if keys else None


def _split_items(text: str, line: int, col0: int, kind: str, key: str) -> list[Item]:
    # complexes and maps hold matrices, which keep their commas-free layout
    if kind in ("complex", "map") or key in ("dims", "lo", "prime"):
        s = text.strip()
        return [Item(s, line, col0 + text.find(s) if s else col0)] if s else []
    out = []
    pos = 0
    for piece in text.split(","):
        s = piece.strip()
        if s:
            out.append(Item(s, line, col0 + pos + piece.find(s)))
        pos += len(piece) + 1
    return out


def split_blocks(source: str) -> list[Block]:
    blocks: list[Block] = []
    cur: Block | None = None
    key = None
    for ln, raw in enumerate(source.splitlines(), 1):
        body = raw.split("#", 1)[0].rstrip()
        stripped = body.strip()
        if not stripped:
            continue
        col = len(body) - len(body.lstrip()) + 1
        if cur is None:
            m = re.match(r"^(\w+)\s+(" + NAME + r")(.*)$", stripped)
            if not m or m.group(1) not in BLOCK_KEYS:
                raise ParseError(f"expected a block header, got {stripped!r}", ln, col)
            kind, name, rest = m.group(1), m.group(2), m.group(3).strip()
            blk = Block(kind, name, rest, ln)
            if kind in ONE_LINE:
                blocks.append(blk)
                continue
            cur, key = blk, None
            continue
        if stripped == "end":
            blocks.append(cur)
            cur, key = None, None
            continue
        pat = _key_pattern(cur.kind)
        m = pat.match(stripped) if pat else None
        if m:
            key = m.group(1)
            cur.fields.setdefault(key, [])
            value_col = col + stripped.index(":") + 1
            cur.fields[key] += _split_items(m.group(2), ln, value_col, cur.kind, key)
            continue
        if key is None:
            raise ParseError(f"unexpected line in {cur.kind} block: {stripped!r}", ln, col)
        if cur.kind in ("complex", "map"):
            prev = cur.fields[key]
            joined = (prev[-1].text + "; " if prev else "") + stripped
            cur.fields[key] = [Item(joined, prev[0].line if prev else ln,
                                    prev[0].column if prev else col)]
        else:
            cur.fields[key] += _split_items(stripped, ln, col, cur.kind, key)
    if cur is not None:
        raise ParseError(f"block {cur.kind} {cur.name} is missing 'end'", cur.line, 1)
    return blocks


# -- documents ----------------------------------------------------------------------


@dataclass
class Document:
    categories: dict = field(default_factory=dict)
    functors: dict = field(default_factory=dict)
    squares: dict = field(default_factory=dict)
    lattices: dict = field(default_factory=dict)
    diagrams: dict = field(default_factory=dict)
    complexes: dict = field(default_factory=dict)
    maps: dict = field(default_factory=dict)
    spans: dict = field(default_factory=dict)
    chainsquares: dict = field(default_factory=dict)
    raw_categories: dict = field(default_factory=dict)
    order: list = field(default_factory=list)

    def pick(self, table: str, name: str | None, what: str):
        entries = getattr(self, table)
        if name is None:
            if len(entries) != 1:
                raise ParseError(f"file defines {len(entries)} {what}s; name one explicitly")
            return next(iter(entries.values()))
        if name not in entries:
            raise ParseError(f"no {what} named {name!r}")
        return entries[name]


def _arrow(item: Item, sep: str = "->") -> tuple[str, str]:
    parts = [s.strip() for s in item.text.split(sep)]
    if len(parts) != 2 or not all(parts):
        raise ParseError(f"expected 'x {sep} y', got {item.text!r}", item.line, item.column)
    return parts[0], parts[1]


def raw_category(blk: Block) -> dict:
    for i in blk.items("objects"):
        if not re.fullmatch(NAME, i.text):
            raise ParseError(f"bad object name {i.text!r}", i.line, i.column)
    raw: dict = {"objects": [i.text for i in blk.items("objects")]}
    if blk.items("poset"):
        rels = [_arrow(i, "<") for i in blk.items("poset")]
        raw["poset"] = rels
        # elements mentioned only in relations are added in order of appearance
        for pair in rels:
            for x in pair:
                if x not in raw["objects"]:
                    raw["objects"].append(x)
        if blk.items("morphisms") or blk.items("compose"):
            i = (blk.items("morphisms") + blk.items("compose"))[0]
            raise ParseError("poset shorthand cannot be mixed with tables", i.line, i.column)
        return raw
    mors = {}
    for i in blk.items("morphisms"):
        m = re.match(r"^(" + NAME + r")\s*:\s*(" + NAME + r")\s*->\s*(" + NAME + r")$", i.text)
        if not m:
            raise ParseError(f"expected 'f: a -> b', got {i.text!r}", i.line, i.column)
        if m.group(1) in mors:
            raise ParseError(f"morphism {m.group(1)} declared twice", i.line, i.column)
        mors[m.group(1)] = (m.group(2), m.group(3))
    comp = {}
    for i in blk.items("compose"):
        m = re.match(r"^(" + NAME + r")\s+(" + NAME + r")\s*=\s*(" + NAME + r")$", i.text)
        if not m:
            raise ParseError(f"expected 'g f = h', got {i.text!r}", i.line, i.column)
        comp[(m.group(1), m.group(2))] = m.group(3)
    raw["morphisms"] = mors
    raw["compose"] = comp
    raw["_items"] = {"objects": blk.items("objects"), "line": blk.line}
    return raw


def _build_category(blk: Block, check: bool = True) -> FinCat:
    raw = raw_category(blk)
    raw.pop("_items", None)
    try:
        return category_from_description(raw, check=check, name=blk.name)
    except CategoryError as exc:
        raise ParseError(f"category {blk.name}: {exc}", blk.line, 1) from exc


def _sig(blk: Block) -> tuple[str, str]:
    m = re.match(r"^:\s*(" + NAME + r")\s*->\s*(" + NAME + r")$", blk.header)
    if not m:
        raise ParseError(f"{blk.kind} {blk.name} needs a signature ': A -> B'", blk.line, 1)
    return m.group(1), m.group(2)


def _lookup(table: dict, name: str, what: str, item: Item | None = None, line: int = 0):
    if name not in table:
        raise ParseError(f"unknown {what} {name!r}", item.line if item else line,
                         item.column if item else 1)
    return table[name]


def _build_functor(blk: Block, doc: Document) -> FunctorData:
    a, b = _sig(blk)
    A = _lookup(doc.categories, a, "category", line=blk.line)
    B = _lookup(doc.categories, b, "category", line=blk.line)
    omap = {}
    for i in blk.items("objects"):
        x, y = _arrow(i)
        if x not in A.objects or y not in B.objects:
            raise ParseError(f"object map {i.text!r} names unknown objects", i.line, i.column)
        omap[x] = y
    try:
        if not blk.items("morphisms"):
            return functor_from_objects(A, B, omap, name=blk.name)
        mmap = {}
        for i in blk.items("morphisms"):
            x, y = _arrow(i)
            mmap[x] = y
        for x in A.objects:
            if x in omap:
                mmap.setdefault(A.ident[x], B.ident[omap[x]])
        return FunctorData(A, B, omap, mmap, name=blk.name)
    except CategoryError as exc:
        raise ParseError(f"functor {blk.name}: {exc}", blk.line, 1) from exc
    except KeyError as exc:
        raise ParseError(f"functor {blk.name}: incomplete map at {exc}", blk.line, 1) from exc


def _build_square(blk: Block, doc: Document) -> SquareData:
    def fn(item):
        return _lookup(doc.functors, item.text, "functor", item)

    def names(key, n):
        items = blk.items(key)
        if len(items) != n:
            raise ParseError(f"{key} takes {n} name(s)", blk.line, 1)
        return items

    try:
        if blk.items("comma"):
            u, v = map(fn, names("comma", 2))
            return cons.comma(u, v).square()
        if blk.items("pullback"):
            u, v = map(fn, names("pullback", 2))
            return cons.pullback_square(u, v)
        if blk.items("collapse"):
            (d,) = names("collapse", 1)
            return cons.collapse_square(_lookup(doc.categories, d.text, "category", d))
        if blk.items("identity"):
            (u,) = names("identity", 1)
            return cons.identity_square(fn(u))
        if blk.items("final"):
            (f,) = names("final", 1)
            return cons.final_square(fn(f))
        p, q, u, v = (fn(names(k, 1)[0]) for k in ("p", "q", "u", "v"))
        up, vq = compose_functors(u, p), compose_functors(v, q)
        comps = {}
        for i in blk.items("alpha"):
            x, y = _arrow(i)
            comps[x] = y
        if not comps:
            comps = {d: up.cod.ident[up(d)] for d in p.dom.objects}
        return SquareData(p, q, u, v, NatTransData(up, vq, comps))
    except CategoryError as exc:
        raise ParseError(f"square {blk.name}: {exc}", blk.line, 1) from exc


BUILTIN_LATTICES = {
    "N5": ld.n5, "M3": ld.m3, "B1": lambda: ld.boolean_lattice(1),
    "B2": lambda: ld.boolean_lattice(2), "B3": lambda: ld.boolean_lattice(3),
    "B4": lambda: ld.boolean_lattice(4), "chain2": lambda: ld.chain_lattice(2),
    "chain3": lambda: ld.chain_lattice(3), "chain4": lambda: ld.chain_lattice(4),
}


def _build_lattice(blk: Block) -> ld.LatticePoset:
    b = blk.scalar("builtin")
    try:
        if b is not None:
            if b.text not in BUILTIN_LATTICES:
                raise ParseError(f"unknown builtin lattice {b.text!r}", b.line, b.column)
            return BUILTIN_LATTICES[b.text]()
        elems = [i.text for i in blk.items("elements")]
        covers = [_arrow(i, "<") for i in blk.items("covers")]
        return ld.LatticePoset.from_covers(elems, covers, name=blk.name)
    except ld.LatticeError as exc:
        raise ParseError(f"lattice {blk.name}: {exc}", blk.line, 1) from exc


def _build_diagram(blk: Block, doc: Document) -> ld.LatticeDiagram:
    m = re.match(r"^on\s+(" + NAME + r")\s+in\s+(" + NAME + r")$", blk.header)
    if not m:
        raise ParseError("diagram header must read 'diagram X on A in L'", blk.line, 1)
    A = _lookup(doc.categories, m.group(1), "category", line=blk.line)
    L = _lookup(doc.lattices, m.group(2), "lattice", line=blk.line)
    vals = {}
    for i in blk.items("values"):
        x, y = _arrow(i)
        vals[x] = y
    try:
        return ld.LatticeDiagram(A, L, vals)
    except (ld.LatticeError, CategoryError) as exc:
        raise ParseError(f"diagram {blk.name}: {exc}", blk.line, 1) from exc


def parse_matrix(item: Item, rows: int, cols: int, p: int) -> np.ndarray:
    """Row-major entries; rows separated by ';' (a flat list is also accepted)."""
    text = item.text.replace(";", " ")
    try:
        vals = [int(t) for t in text.split()]
    except ValueError as exc:
        raise ParseError(f"matrix entries must be integers: {item.text!r}", item.line,
                         item.column) from exc
    if len(vals) != rows * cols:
        raise ParseError(f"matrix needs {rows}x{cols} entries, got {len(vals)}",
                         item.line, item.column)
    return np.array(vals, dtype=np.int64).reshape(rows, cols) % p


def _build_complex(blk: Block, default_prime: int | None) -> cs.FpChainComplex:
    pi = blk.scalar("prime")
    p = int(pi.text) if pi is not None else default_prime
    if pi is not None and default_prime is not None and p != default_prime:
        raise ParseError(f"complex {blk.name} is over F_{p} but --prime is {default_prime}",
                         pi.line, pi.column)
    if p is None:
        p = cs.DEFAULT_PRIME
    lo_item = blk.scalar("lo")
    lo = int(lo_item.text) if lo_item is not None else 0
    dims_item = blk.scalar("dims")
    if dims_item is None:
        raise ParseError(f"complex {blk.name} needs dims", blk.line, 1)
    dims = [int(t) for t in dims_item.text.split()]
    X0 = cs.FpChainComplex(p, lo, dims)
    diffs = {}
    for key, items in blk.fields.items():
        if re.fullmatch(r"d-?\d+", key):
            n = int(key[1:])
            diffs[n] = parse_matrix(items[-1], X0.dim(n - 1), X0.dim(n), p)
    try:
        return cs.FpChainComplex(p, lo, dims, diffs)
    except cs.ChainError as exc:
        raise ParseError(f"complex {blk.name}: {exc}", blk.line, 1) from exc


def _build_map(blk: Block, doc: Document) -> cs.FpChainMap:
    a, b = _sig(blk)
    X = _lookup(doc.complexes, a, "complex", line=blk.line)
    Y = _lookup(doc.complexes, b, "complex", line=blk.line)
    mats = {}
    for key, items in blk.fields.items():
        n = int(key[1:])
        mats[n] = parse_matrix(items[-1], Y.dim(n), X.dim(n), X.p)
    try:
        return cs.FpChainMap(X, Y, mats)
    except cs.ChainError as exc:
        raise ParseError(f"map {blk.name}: {exc}", blk.line, 1) from exc


def _names_after_colon(blk: Block, n: int) -> list[str]:
    m = re.match(r"^:\s*(.*)$", blk.header)
    names = [s.strip() for s in m.group(1).split(",")] if m else []
    if len(names) != n or not all(names):
        raise ParseError(f"{blk.kind} {blk.name} needs {n} map names after ':'", blk.line, 1)
    return names


def parse_document(source: str, prime: int | None = None) -> Document:
    doc = Document()
    for blk in split_blocks(source):
        if blk.name in doc.order:
            raise ParseError(f"name {blk.name!r} defined twice", blk.line, 1)
        doc.order.append(blk.name)
        k = blk.kind
        if k == "category":
            doc.raw_categories[blk.name] = blk
            doc.categories[blk.name] = _build_category(blk)
        elif k == "functor":
            doc.functors[blk.name] = _build_functor(blk, doc)
        elif k == "square":
            doc.squares[blk.name] = _build_square(blk, doc)
        elif k == "lattice":
            doc.lattices[blk.name] = _build_lattice(blk)
        elif k == "diagram":
            doc.diagrams[blk.name] = _build_diagram(blk, doc)
        elif k == "complex":
            doc.complexes[blk.name] = _build_complex(blk, prime)
        elif k == "map":
            doc.maps[blk.name] = _build_map(blk, doc)
        elif k == "span":
            f, g = (_lookup(doc.maps, n, "map", line=blk.line)
                    for n in _names_after_colon(blk, 2))
            if f.dom != g.dom:
                raise ParseError(f"span {blk.name}: maps need a common domain", blk.line, 1)
            doc.spans[blk.name] = (f, g)
        elif k == "chainsquare":
            ms = [_lookup(doc.maps, n, "map", line=blk.line) for n in _names_after_colon(blk, 4)]
            try:
                doc.chainsquares[blk.name] = cs.StrictSquare(*ms)
            except cs.ChainError as exc:
                raise ParseError(f"chainsquare {blk.name}: {exc}", blk.line, 1) from exc
    return doc


def parse_categories_raw(source: str) -> dict:
    """Category blocks as raw descriptions, without checking the laws."""
    out = {}
    for blk in split_blocks(source):
        if blk.kind == "category":
            raw = raw_category(blk)
            raw.pop("_items", None)
            out[blk.name] = raw
    return out


# -- structured reports ------------------------------------------------------------------


REPORT_HEADER = "dertools-report 1"
_KEY = re.compile(r"^[A-Za-z0-9_.\-\[\]]+$")


def _escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace("\n", "\\n").replace("\r", "\\r").replace("\t", "\\t")


def _unescape(s: str) -> str:
    out, i = [], 0
    table = {"\\": "\\", "n": "\n", "r": "\r", "t": "\t"}
    while i < len(s):
        c = s[i]
        if c == "\\" and i + 1 < len(s) and s[i + 1] in table:
            out.append(table[s[i + 1]])
            i += 2
        elif c == "\\":
            raise ParseError(f"bad escape at offset {i}")
        else:
            out.append(c)
            i += 1
    return "".join(out)


@dataclass
class Report:
    """Ordered key/value pairs; keys are unique."""

    entries: list = field(default_factory=list)

    def add(self, key: str, value) -> "Report":
        if not _KEY.match(key):
            raise ValueError(f"bad report key {key!r}")
        if any(k == key for k, _ in self.entries):
            raise ValueError(f"duplicate report key {key!r}")
        self.entries.append((key, str(value)))
        return self

    def get(self, key: str, default=None):
        for k, v in self.entries:
            if k == key:
                return v
        return default

    def __getitem__(self, key):
        v = self.get(key)
        if v is None:
            raise KeyError(key)
        return v


def emit_report(r: Report) -> str:
    lines = [REPORT_HEADER] + [f"{k}: {_escape(v)}" for k, v in r.entries]
    return "\n".join(lines) + "\n"


def parse_report(text: str) -> Report:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or lines[0] != REPORT_HEADER:
        raise ParseError("missing report header", 1, 1)
    r = Report()
    for ln, line in enumerate(lines[1:], 2):
        key, sep, value = line.partition(": ")
        if not sep:
            if line.endswith(":"):
                key, value = line[:-1], ""
            else:
                raise ParseError("expected 'key: value'", ln, 1)
        try:
            r.add(key, _unescape(value))
        except ValueError as exc:
            raise ParseError(str(exc), ln, 1) from exc
    return r

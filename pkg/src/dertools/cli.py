"""Command-line front end: ``dertools <subcommand> FILE [options]``.

Exit codes: 0 pass / exact, 1 fail / not exact, 2 inconclusive,
3 usage error, 4 input or parse error, 5 size guard or budget exceeded.
Budgets may also be set with DERTOOLS_MAX_DIM, DERTOOLS_TIETZE_MOVES,
DERTOOLS_ZIGZAG_STEPS and DERTOOLS_SIZE_LIMIT; flags win over the environment.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field

from . import chainstable as cs
from . import latticeder as ld
from .constructions import comma
from .fincat import CategoryError, SizeGuardError, sort_key, validate_category
from .hoexact import EXACT, NOT_EXACT, check_homotopy_exact, check_homotopy_final
from .nerve import Budget, NerveTooLarge, homology, nerve_complex
from .textformat import (
    ParseError,
    Report,
    emit_report,
    parse_categories_raw,
    parse_document,
)

EXIT_PASS, EXIT_FAIL, EXIT_INCONCLUSIVE = 0, 1, 2
EXIT_USAGE, EXIT_INPUT, EXIT_BUDGET = 3, 4, 5

COMMANDS = ("check-category", "comma", "nerve-homology", "check-hoexact", "check-final",
            "kan-extend", "check-bc", "mv-triangle", "les", "check-square")
CHAIN_COMMANDS = {"mv-triangle", "les", "check-square"}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    subcommand: str
    inputs: list
    budget: Budget = field(default_factory=Budget)
    prime: int | None = None
    fmt: str = "text"
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.subcommand not in COMMANDS:
            raise UsageError(f"unknown subcommand {self.subcommand!r}")
        if self.prime is not None and (self.prime == 2 or not cs.la.is_prime(self.prime)):
            raise UsageError("--prime must be an odd prime")
        if self.fmt not in ("text", "report"):
            raise UsageError("--format must be 'text' or 'report'")


@dataclass
class RunResult:
    status: int
    report: Report
    text: str

    def render(self, fmt: str) -> str:
        return emit_report(self.report) if fmt == "report" else self.text


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _opt(cfg: RunConfig, key: str):
    return cfg.options.get(key)


# -- subcommands --------------------------------------------------------------------


def _check_category(cfg, source, r, out):
    raws = parse_categories_raw(source)
    if not raws:
        raise ParseError("file contains no category blocks")
    names = [_opt(cfg, "name")] if _opt(cfg, "name") else list(raws)
    status = EXIT_PASS
    for name in names:
        if name not in raws:
            raise ParseError(f"no category named {name!r}")
        try:
            rep = validate_category(raws[name])
        except CategoryError as exc:
            raise ParseError(f"category {name}: {exc}") from exc
        r.add(f"{name}.valid", str(rep.ok).lower())
        r.add(f"{name}.violations", len(rep.violations))
        for i, v in enumerate(rep.violations):
            r.add(f"{name}.violation[{i}]", v)
        out.append(f"{name}: " + ("valid" if rep.ok else f"{len(rep.violations)} violation(s)"))
        out.extend(f"  {v}" for v in rep.violations)
        if not rep.ok:
            status = EXIT_FAIL
    return status


def _comma(cfg, source, r, out):
    doc = parse_document(source)
    u = doc.pick("functors", _opt(cfg, "u"), "functor")
    v = doc.pick("functors", _opt(cfg, "v"), "functor")
    cm = comma(u, v, limit=cfg.budget.size_limit)
    C = cm.category
    r.add("objects", len(C.objects)).add("morphisms", len(C.morphisms))
    out.append(f"comma category: {len(C.objects)} objects, {len(C.morphisms)} morphisms")
    for i, o in enumerate(sorted(C.objects, key=sort_key)):
        r.add(f"object[{i}]", f"{o[0]} {o[1]} {o[2]}")
        out.append(f"  ({o[0]}, {o[1]}, {o[2]})")
    return EXIT_PASS


def _nerve_homology(cfg, source, r, out):
    doc = parse_document(source)
    C = doc.pick("categories", _opt(cfg, "category"), "category")
    md = _opt(cfg, "max_dim_explicit")
    try:
        X = nerve_complex(C, md if md is not None else (None if C.is_loop_free()
                                                         else cfg.budget.max_dim))
    except NerveTooLarge as exc:
        raise ParseError(str(exc)) from exc
    top = X.top if X.complete else X.top - 1
    reduced = bool(_opt(cfg, "reduced"))
    r.add("reduced", str(reduced).lower()).add("complete", str(X.complete).lower())
    r.add("top_degree", top)
    out.append(("reduced " if reduced else "") + f"homology of the nerve of {C.name or 'C'}")
    for n in range(0, top + 1):
        H = homology(X, n, reduced=reduced)
        r.add(f"H{n}.betti", H.betti)
        r.add(f"H{n}.torsion", " ".join(map(str, H.torsion)))
        out.append(f"H{n} = {H}")
    if not X.complete:
        out.append(f"(nerve truncated; degrees above {top} not computed)")
    if _opt(cfg, "dump"):
        out.append(X.dump())
    return EXIT_PASS


def _exactness(verdict, r, out, label):
    r.add("verdict", verdict.status)
    out.append(f"verdict: {verdict.status}")
    if verdict.status == NOT_EXACT:
        w = verdict.witnesses[verdict.witness]
        r.add("witness", " ".join(map(str, verdict.witness)) if isinstance(verdict.witness, tuple)
              else str(verdict.witness))
        r.add("witness.step", w.step)
        out.append(f"witness {label}: {verdict.witness} ({w.step}; {w.trace[-1]})")
    r.add("fibers_checked", len(verdict.witnesses))
    r.add("undecided", len(verdict.undecided))
    for u in verdict.undecided:
        out.append(f"undecided {label}: {u}")
    return {EXACT: EXIT_PASS, NOT_EXACT: EXIT_FAIL}.get(verdict.status, EXIT_INCONCLUSIVE)


def _check_hoexact(cfg, source, r, out):
    doc = parse_document(source)
    sq = doc.pick("squares", _opt(cfg, "square"), "square")
    return _exactness(check_homotopy_exact(sq, cfg.budget), r, out, "fiber")


def _check_final(cfg, source, r, out):
    doc = parse_document(source)
    f = doc.pick("functors", _opt(cfg, "functor"), "functor")
    v = check_homotopy_final(f, cfg.budget)
    status = _exactness(v, r, out, "object")
    out[0] = {EXACT: "verdict: final", NOT_EXACT: "verdict: not final"}.get(v.status, out[0])
    return status


def _format_diagram(X: ld.LatticeDiagram) -> str:
    return ", ".join(f"{k} -> {X[k]}" for k in sorted(X.shape.objects, key=sort_key))


def _kan_extend(cfg, source, r, out):
    doc = parse_document(source)
    u = doc.pick("functors", _opt(cfg, "functor"), "functor")
    X = doc.pick("diagrams", _opt(cfg, "diagram"), "diagram")
    direction = _opt(cfg, "direction") or "left"
    Y = ld.kan_extend(u, X, direction)
    r.add("direction", direction)
    for k in sorted(Y.shape.objects, key=sort_key):
        r.add(f"value[{k}]", Y[k])
    out.append(f"{direction} Kan extension: {_format_diagram(Y)}")
    return EXIT_PASS


def _check_bc(cfg, source, r, out):
    doc = parse_document(source)
    sq = doc.pick("squares", _opt(cfg, "square"), "square")
    L = doc.pick("lattices", _opt(cfg, "lattice"), "lattice")
    if _opt(cfg, "diagram"):
        diagrams = [doc.pick("diagrams", _opt(cfg, "diagram"), "diagram")]
    else:
        diagrams = ld.diagrams_from_rows(sq.A, L, ld.all_diagrams(sq.A, L))
    failures = []
    for X in diagrams:
        if not ld.beck_chevalley_holds(sq, L, X):
            failures.append(X)
    r.add("diagrams_checked", len(diagrams)).add("failures", len(failures))
    r.add("holds", str(not failures).lower())
    out.append(f"Beck-Chevalley {'holds' if not failures else 'fails'} "
               f"({len(diagrams)} diagram(s) checked)")
    if failures:
        lhs, rhs = ld.beck_chevalley_sides(sq, failures[0])
        out.append(f"  first failure: X = {_format_diagram(failures[0])}")
        out.append(f"  q_! p* X = {_format_diagram(lhs)}; v* u_! X = {_format_diagram(rhs)}")
        r.add("first_failure", _format_diagram(failures[0]))
    return EXIT_FAIL if failures else EXIT_PASS


def _matrix_text(m) -> str:
    return "; ".join(" ".join(str(int(v)) for v in row) for row in m) if m.size else "-"


def _describe_map(name: str, f: cs.FpChainMap, r: Report, out: list):
    for n in f.degrees():
        if f.dom.dim(n) and f.cod.dim(n):
            r.add(f"{name}.{n}", _matrix_text(f.m(n)))
            out.append(f"  {name}_{n} = [{_matrix_text(f.m(n))}]")


def _les_lines(rep: cs.LesReport, r: Report, out: list):
    out.append("long exact sequence (slot: dim, rank in, rank out):")
    for i, (name, dim, rin, rout) in enumerate(rep.rows):
        if dim or rin or rout:
            out.append(f"  {name}: {dim}, {rin}, {rout}")
            r.add("les." + name.replace("(", ".").rstrip(")"), f"{dim} {rin} {rout}")
    r.add("les.exact", str(rep.ok).lower())
    out.append(f"exact: {str(rep.ok).lower()}")
    for f in rep.failures:
        out.append(f"  {f}")


def _mv_triangle(cfg, source, r, out):
    doc = parse_document(source, prime=cfg.prime)
    f, g = doc.pick("spans", _opt(cfg, "span"), "span")
    t = cs.mv_triangle(f, g)
    out.append(f"x -> y+z -> w -> Σx over F_{f.p}")
    r.add("prime", f.p)
    for label, m in (("a", t.a), ("b", t.b), ("c", t.c)):
        _describe_map(label, m, r, out)
    dist = cs.is_distinguished(t)
    r.add("distinguished", str(dist).lower())
    out.append(f"distinguished: {str(dist).lower()}")
    rep = cs.les_check(t, require_distinguished=False)
    _les_lines(rep, r, out)
    return EXIT_PASS if dist and rep.ok else EXIT_FAIL


def _les(cfg, source, r, out):
    doc = parse_document(source, prime=cfg.prime)
    if _opt(cfg, "span"):
        t = cs.mv_triangle(*doc.pick("spans", _opt(cfg, "span"), "span"))
    else:
        t = cs.cone_triangle(doc.pick("maps", _opt(cfg, "map"), "map"))
    dist = cs.is_distinguished(t)
    r.add("distinguished", str(dist).lower())
    if not dist:
        out.append("triangle is not distinguished")
        return EXIT_FAIL
    rep = cs.les_check(t, require_distinguished=False)
    _les_lines(rep, r, out)
    return EXIT_PASS if rep.ok else EXIT_FAIL


def _check_square(cfg, source, r, out):
    doc = parse_document(source, prime=cfg.prime)
    sq = doc.pick("chainsquares", _opt(cfg, "square"), "chainsquare")
    co = cs.is_bicartesian_side(sq, "cocartesian")
    ca = cs.is_bicartesian_side(sq, "cartesian")
    r.add("cocartesian", str(co).lower()).add("cartesian", str(ca).lower())
    out.append(f"cocartesian: {str(co).lower()}")
    out.append(f"cartesian: {str(ca).lower()}")
    return EXIT_PASS if co and ca else EXIT_FAIL


HANDLERS = {
    "check-category": _check_category, "comma": _comma, "nerve-homology": _nerve_homology,
    "check-hoexact": _check_hoexact, "check-final": _check_final, "kan-extend": _kan_extend,
    "check-bc": _check_bc, "mv-triangle": _mv_triangle, "les": _les,
    "check-square": _check_square,
}


def run(cfg: RunConfig) -> RunResult:
    r = Report()
    r.add("command", cfg.subcommand)
    out: list[str] = []
    try:
        if len(cfg.inputs) != 1:
            raise UsageError("exactly one input file is expected")
        source = _read(cfg.inputs[0])
        status = HANDLERS[cfg.subcommand](cfg, source, r, out)
    except UsageError as exc:
        return _error(cfg, EXIT_USAGE, "usage", str(exc))
    except (ParseError, CategoryError, ld.LatticeError, cs.ChainError, OSError,
            UnicodeDecodeError) as exc:
        return _error(cfg, EXIT_INPUT, "input", str(exc))
    except SizeGuardError as exc:
        return _error(cfg, EXIT_BUDGET, "budget", str(exc))
    r.add("exit", status)
    return RunResult(status, r, "\n".join(out) + "\n")


def _error(cfg: RunConfig, code: int, kind: str, message: str) -> RunResult:
    r = Report()
    r.add("command", cfg.subcommand).add("error", kind).add("message", message)
    r.add("exit", code)
    return RunResult(code, r, f"error: {message}\n")


# -- argument parsing -------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dertools", description="Finite checks for derivator identities.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help_text, *opts):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("input", help="input file, or - for stdin")
        sp.add_argument("--format", choices=("text", "report"), default="text")
        sp.add_argument("--max-dim", type=int)
        sp.add_argument("--tietze-moves", type=int)
        sp.add_argument("--zigzag-steps", type=int)
        sp.add_argument("--size-limit", type=int)
        sp.add_argument("--prime", type=int)
        for o in opts:
            sp.add_argument(f"--{o}")
        return sp

    sp = add("check-category", "validate category tables", "name")
    sp = add("comma", "build a comma category", "u", "v")
    sp = add("nerve-homology", "integral homology of a nerve", "category")
    sp.add_argument("--reduced", action="store_true")
    sp.add_argument("--dump", action="store_true", help="print boundary matrices")
    add("check-hoexact", "decide homotopy exactness of a square", "square")
    add("check-final", "decide homotopy finality of a functor", "functor")
    sp = add("kan-extend", "Kan extension in a lattice", "functor", "diagram")
    sp.add_argument("--direction", choices=("left", "right"), default="left")
    add("check-bc", "Beck-Chevalley equality in a lattice", "square", "lattice", "diagram")
    add("mv-triangle", "Mayer-Vietoris triangle of a span", "span")
    add("les", "long exact homology sequence", "map", "span")
    add("check-square", "cartesian/cocartesian test of a strict square", "square")
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    try:
        budget = Budget.from_env(max_dim=ns.max_dim, tietze_moves=ns.tietze_moves,
                                 zigzag_steps=ns.zigzag_steps, size_limit=ns.size_limit)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"bad budget: {exc}") from exc
    skip = {"command", "input", "format", "max_dim", "tietze_moves", "zigzag_steps",
            "size_limit", "prime"}
    options = {k: v for k, v in vars(ns).items() if k not in skip}
    options["max_dim_explicit"] = ns.max_dim
    return RunConfig(ns.command, [ns.input], budget, ns.prime, ns.format, options)


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = config_from_args(ns)
    except UsageError as exc:
        print(f"dertools: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    result = run(cfg)
    stream = sys.stdout if result.status in (EXIT_PASS, EXIT_FAIL, EXIT_INCONCLUSIVE) \
        or cfg.fmt == "report" else sys.stderr
    stream.write(result.render(cfg.fmt))
    return result.status


if __name__ == "__main__":
    sys.exit(main())

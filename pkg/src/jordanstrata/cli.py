"""Command-line front end.

Exit codes: 0 success, 1 mathematical precondition failure (reported as a
single machine-readable line), 2 usage errors.  Output is deterministic:
identical invocations produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

from .fields import GF
from .jordan import JordanType, jordan_type_of_matrix
from .matrix import Matrix
from .modrep import (
    ModRepError,
    ModuleRep,
    NotFlat,
    PiPoint,
    jtype_at,
    linear_pi_point,
    omega_iterated,
    tensor_module,
    theta,
)
from .poly import Poly, PolyError
from .gallery import GALLERY, GalleryError, build_entry, gallery_names
from .homological import (
    HomologicalError,
    NotConstantRank,
    carlson_module,
    class_combination,
    degree_n_classes_on_trivial,
    ext1_basis,
    z_locus,
)
from .strata import (
    FamilyAnalysis,
    StrataError,
    InternalInconsistency,
    standard_family,
    strata,
)

MATH_ERRORS = (
    ModRepError,
    NotFlat,
    NotConstantRank,
    HomologicalError,
    StrataError,
    GalleryError,
    PolyError,
    InternalInconsistency,
    ValueError,
)


def _load_module(path: str) -> ModuleRep:
    return ModuleRep.loads(Path(path).read_text())


# -- probe point parsing -------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|(x\d+)|(\^)|(\+)|(-)|(\()|(\)))")


class _PolyParser:
    """Minimal grammar: integers, variables x0..x{r-1}, +, -, ^, juxtaposition."""

    def __init__(self, text: str, p: int, names: tuple[str, ...]):
        self.tokens = self._tokenize(text)
        self.pos = 0
        self.p = p
        self.names = names

    def _tokenize(self, text: str):
        out = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                if text[pos:].strip():
                    raise PolyError(f"cannot tokenise polynomial near {text[pos:]!r}")
                break
            out.append(m.group(0).strip())
            pos = m.end()
        return [t for t in out if t]

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self):
        t = self.peek()
        self.pos += 1
        return t

    def parse(self) -> Poly:
        out = self.expr()
        if self.peek() is not None:
            raise PolyError(f"unexpected token {self.peek()!r}")
        return out

    def expr(self) -> Poly:
        sign = 1
        t = self.peek()
        if t in ("+", "-"):
            self.take()
            sign = -1 if t == "-" else 1
        acc = self.term().scale(sign % self.p)
        while self.peek() in ("+", "-"):
            op = self.take()
            nxt = self.term()
            acc = acc + nxt if op == "+" else acc - nxt
        return acc

    def term(self) -> Poly:
        acc = self.factor()
        while True:
            t = self.peek()
            if t is None or t in ("+", "-", ")"):
                return acc
            acc = acc * self.factor()

    def factor(self) -> Poly:
        base = self.atom()
        if self.peek() == "^":
            self.take()
            e = self.take()
            if e is None or not e.isdigit():
                raise PolyError("exponent must be a nonnegative integer")
            return base.pow(int(e))
        return base

    def atom(self) -> Poly:
        t = self.take()
        if t is None:
            raise PolyError("unexpected end of polynomial")
        if t.isdigit():
            return Poly.const(self.p, self.names, int(t))
        if t.startswith("x"):
            idx = int(t[1:])
            if idx >= len(self.names):
                raise PolyError(f"variable {t} out of range; generators are x0..x{len(self.names)-1}")
            return Poly.variable(self.p, self.names, idx)
        if t == "(":
            inner = self.expr()
            if self.take() != ")":
                raise PolyError("unbalanced parentheses")
            return inner
        raise PolyError(f"unexpected token {t!r}")


def parse_point_poly(text: str, p: int, names: tuple[str, ...]) -> Poly:
    return _PolyParser(text, p, names).parse()


def _point_from_args(m: ModuleRep, args) -> PiPoint:
    field = GF(m.group.p, args.field_ext)
    if args.point_poly is not None:
        img = parse_point_poly(args.point_poly, m.group.p, m.group.generator_names)
        return PiPoint(m.group, field, image=img)
    coeffs = [int(c) for c in args.point.split(",")]
    return linear_pi_point(m.group, field, coeffs)


# -- report rendering ----------------------------------------------------------


def _emit(args, payload: dict, table_lines: list[str]):
    if args.format == "json":
        print(json.dumps(payload, sort_keys=True, separators=(",", ":")))
    else:
        for line in table_lines:
            print(line)


def _render_points(pts) -> str:
    return " ".join(fp.render() for fp in pts) if pts else "(none)"


# -- subcommands ------------------------------------------------------------------


def cmd_jtype(args) -> int:
    m = _load_module(args.module)
    pt = _point_from_args(m, args)
    t = jtype_at(m, pt)
    _emit(args, {"module": Path(args.module).stem, "type": str(t)}, [str(t)])
    return 0


def cmd_validate(args) -> int:
    m = _load_module(args.module)
    problems = m.validate()
    if problems:
        print(f"error:invalid-module:{problems[0]}")
        return 1
    print("ok")
    return 0


def cmd_strata(args) -> int:
    m = _load_module(args.module)
    fam = standard_family(m)
    rep = strata(
        m,
        fam,
        ext_degree=args.field_ext,
        use_symbolic=args.symbolic,
        module_name=Path(args.module).stem,
        jobs=args.jobs,
    )
    lines = [
        f"module {rep.module_name} (p={rep.p}, enumeration GF({rep.p}^{rep.ext_degree}))",
        f"generic type: {rep.generic_type}",
        "maximal ranks: " + " ".join(f"j={j}:{r}" for j, r in enumerate(rep.max_jranks, start=1)),
    ]
    for t, pts in sorted(rep.strata.items()):
        lines.append(f"stratum {t}: {_render_points(pts)}")
    for j in sorted(rep.gamma):
        lines.append(f"gamma[{j}]: {_render_points(rep.gamma[j])}")
    lines.append(f"constant Jordan type: {'yes' if rep.constant_jtype else 'no'}")
    _emit(args, rep.to_dict(), lines)
    return 0


def cmd_gamma(args) -> int:
    m = _load_module(args.module)
    fam = standard_family(m)
    an = FamilyAnalysis(m, fam, args.field_ext, args.symbolic)
    js = [args.j] if args.j is not None else list(range(1, m.group.p))
    payload = {"module": Path(args.module).stem, "gamma": {}}
    lines = []
    for j in js:
        pts = an.gamma_j_points(j)
        ideal = an.minor_ideal(j)
        payload["gamma"][str(j)] = {
            "points": [list(map(int, fp.label)) for fp in pts],
            "minor_ideal": None if ideal is None else [str(q) for q in ideal],
        }
        lines.append(f"gamma[{j}]: {_render_points(pts)}")
        if ideal is None:
            lines.append(f"  minor ideal: omitted (too large at this size)")
        else:
            lines.append(f"  minor ideal: " + ("; ".join(str(q) for q in ideal) if ideal else "(empty)"))
    if args.j is None:
        union = an.gamma_points()
        payload["union"] = [list(map(int, fp.label)) for fp in union]
        lines.append(f"gamma (union): {_render_points(union)}")
    _emit(args, payload, lines)
    return 0


def cmd_tensor(args) -> int:
    if args.type and args.type2:
        if not args.p:
            print("error:usage:--p is required with --type/--type2")
            return 2
        a = JordanType.parse(args.p, args.type)
        b = JordanType.parse(args.p, args.type2)
        t = a.tensor(b)
        _emit(args, {"type": str(t)}, [str(t)])
        return 0
    if not (args.module and args.module2):
        print("error:usage:need either --module/--module2 or --type/--type2")
        return 2
    m = _load_module(args.module)
    n = _load_module(args.module2)
    out = tensor_module(m, n)
    if args.out:
        Path(args.out).write_text(out.dumps() + "\n")
    _emit(
        args,
        {"dim": out.dim, "written": bool(args.out)},
        [f"tensor module dimension {out.dim}" + (f" written to {args.out}" if args.out else "")],
    )
    return 0


def cmd_omega(args) -> int:
    m = _load_module(args.module)
    n = -args.n if args.inverse else args.n
    out = omega_iterated(m, n)
    if args.out:
        Path(args.out).write_text(out.dumps() + "\n")
    _emit(
        args,
        {"dim": out.dim, "written": bool(args.out)},
        [f"heller shift dimension {out.dim}" + (f" written to {args.out}" if args.out else "")],
    )
    return 0


def cmd_ext1(args) -> int:
    m = _load_module(args.module)
    basis = ext1_basis(m)
    payload = {"module": Path(args.module).stem, "dimension": len(basis)}
    lines = [f"dim Ext^1(k, module) = {len(basis)}"]
    if args.verbose:
        payload["classes"] = [c.hom.to_lists() for c in basis]
        for i, c in enumerate(basis):
            lines.append(f"class {i}: hom {c.hom.to_lists()}")
    _emit(args, payload, lines)
    return 0


def cmd_carlson(args) -> int:
    from .modrep import additive_infinitesimal, elementary_abelian

    maker = elementary_abelian if args.hopf == "multiplicative" else additive_infinitesimal
    group = maker(args.p, 2)
    classes = degree_n_classes_on_trivial(group, 2 * args.n)
    coeffs = [int(c) for c in args.coeffs.split(",")]
    if len(coeffs) != len(classes):
        print(f"error:usage:expected {len(classes)} coefficients for degree {2*args.n}, got {len(coeffs)}")
        return 2
    z = class_combination(classes, coeffs)
    L = carlson_module(z)
    if args.out:
        Path(args.out).write_text(L.dumps() + "\n")
    fam = standard_family(L)
    rep = strata(L, fam, ext_degree=args.field_ext, with_ideals=False, module_name="carlson")
    lines = [f"carlson module dimension {L.dim}", f"generic type: {rep.generic_type}"]
    for t, pts in sorted(rep.strata.items()):
        lines.append(f"stratum {t}: {_render_points(pts)}")
    _emit(args, {"dim": L.dim, "report": rep.to_dict()}, lines)
    return 0


def cmd_zlocus(args) -> int:
    m = _load_module(args.module)
    basis = ext1_basis(m)
    coeffs = [int(c) for c in args.coeffs.split(",")]
    if len(coeffs) != len(basis):
        print(f"error:usage:expected {len(basis)} coefficients, got {len(coeffs)}")
        return 2
    z = class_combination(basis, coeffs)
    fam = standard_family(m)
    pts = z_locus(z, fam, ext_degree=args.field_ext)
    payload = {
        "module": Path(args.module).stem,
        "points": [list(map(int, fp.label)) for fp in pts],
    }
    _emit(args, payload, [f"zero locus: {_render_points(pts)}"])
    return 0


def cmd_gallery(args) -> int:
    if args.action == "list":
        lines = []
        for name in gallery_names():
            e = GALLERY[name]
            lines.append(f"{name:18s} {e.arguments:34s} {e.description}")
        _emit(
            args,
            {"entries": {n: {"arguments": GALLERY[n].arguments, "description": GALLERY[n].description} for n in gallery_names()}},
            lines,
        )
        return 0
    if not args.name:
        print("error:usage:gallery emit needs a preset name")
        return 2
    kwargs = {"p": args.p}
    if args.lam is not None:
        kwargs["lam"] = args.lam
    if args.subgroup is not None:
        kwargs["subgroup"] = args.subgroup
    if args.n is not None:
        kwargs["n"] = args.n
    if args.r is not None:
        kwargs["r"] = args.r
    m = build_entry(args.name, **kwargs)
    text = m.dumps() + "\n"
    if args.out:
        Path(args.out).write_text(text)
        _emit(args, {"dim": m.dim, "written": True}, [f"wrote {args.name} (dim {m.dim}) to {args.out}"])
    else:
        sys.stdout.write(text)
    return 0


# -- parser ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="jordan-strata",
        description="Exact local Jordan types, rank strata, and zero loci for modules over small group-algebra families.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp, fields=True):
        sp.add_argument("--format", choices=["table", "json"], default="table")
        if fields:
            sp.add_argument("--field-ext", type=int, default=1, metavar="M", help="enumerate points over GF(p^M)")
        sp.add_argument("--symbolic", action=argparse.BooleanOptionalAction, default=True,
                        help="certify maximal ranks at the generic point")
        sp.add_argument("--jobs", type=int, default=1, help="parallel point evaluation workers")

    sp = sub.add_parser("jtype", help="local Jordan type at one probe point")
    sp.add_argument("--module", required=True)
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--point", help="comma-separated linear coefficients")
    g.add_argument("--point-poly", help="polynomial image, e.g. 'x0 - x1^2'")
    common(sp)
    sp.set_defaults(func=cmd_jtype)

    sp = sub.add_parser("strata", help="full stratum report over the enumerated points")
    sp.add_argument("--module", required=True)
    common(sp)
    sp.set_defaults(func=cmd_strata)

    sp = sub.add_parser("gamma", help="non-maximal rank loci")
    sp.add_argument("--module", required=True)
    sp.add_argument("--j", type=int, default=None)
    common(sp)
    sp.set_defaults(func=cmd_gamma)

    sp = sub.add_parser("tensor", help="tensor product of modules or of Jordan types")
    sp.add_argument("--module")
    sp.add_argument("--module2")
    sp.add_argument("--type")
    sp.add_argument("--type2")
    sp.add_argument("--p", type=int)
    sp.add_argument("--out")
    common(sp)
    sp.set_defaults(func=cmd_tensor)

    sp = sub.add_parser("omega", help="Heller shift of a module")
    sp.add_argument("--module", required=True)
    sp.add_argument("--n", type=int, default=1)
    sp.add_argument("--inverse", action="store_true")
    sp.add_argument("--out")
    common(sp)
    sp.set_defaults(func=cmd_omega)

    sp = sub.add_parser("ext1", help="dimension and basis of degree-one classes with values in a module")
    sp.add_argument("--module", required=True)
    sp.add_argument("--verbose", action="store_true")
    common(sp)
    sp.set_defaults(func=cmd_ext1)

    sp = sub.add_parser("carlson", help="kernel module of an even-degree class on the trivial module")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--n", type=int, default=1, help="half the degree")
    sp.add_argument("--coeffs", required=True, help="coefficients in the stable-map basis")
    sp.add_argument("--hopf", choices=["additive", "multiplicative"], default="additive")
    sp.add_argument("--out")
    common(sp)
    sp.set_defaults(func=cmd_carlson)

    sp = sub.add_parser("zlocus", help="zero locus of a degree-one class with values in a module")
    sp.add_argument("--module", required=True)
    sp.add_argument("--coeffs", required=True)
    common(sp)
    sp.set_defaults(func=cmd_zlocus)

    sp = sub.add_parser("gallery", help="list or emit preset modules")
    sp.add_argument("action", choices=["list", "emit"])
    sp.add_argument("name", nargs="?")
    sp.add_argument("--p", type=int, default=5)
    sp.add_argument("--lam", type=int)
    sp.add_argument("--subgroup", type=int)
    sp.add_argument("--n", type=int)
    sp.add_argument("--r", type=int)
    sp.add_argument("--out")
    common(sp, fields=False)
    sp.set_defaults(func=cmd_gallery)

    sp = sub.add_parser("validate", help="check commutativity and nilpotence of a module file")
    sp.add_argument("--module", required=True)
    common(sp)
    sp.set_defaults(func=cmd_validate)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        print(f"error:missing-file:{exc.filename}")
        return 1
    except MATH_ERRORS as exc:
        kind = type(exc).__name__
        msg = str(exc).replace("\n", " ")
        print(f"error:{kind}:{msg}")
        return 1


if __name__ == "__main__":
    sys.exit(main())

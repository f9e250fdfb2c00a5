"""Command-line front end: polynomial parser, canonical JSON and text output."""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction
from typing import Sequence

from .cobordism import (
    ChernRootContext,
    GradeError,
    grothendieck_hook,
    grothendieck_one_row,
    hyperbolic_one_row,
    k_quadratic_det,
    new_universal_schur,
    new_universal_schur_closed,
    quadratic_universal_schur,
    quadratic_via_gf,
    segre_relative,
    segre_table,
    universal_schur,
)
from .fgl import fgl_make
from .gysin import FlagSpec, GysinError, dp_pushforward, symmetrizer_form, symmetrizer_gysin
from .ring import INTEGERS, RATIONALS, THEORIES, GeneratorSpec, GradedCoefficient, Ring, RingSpec
from .series import Poly
from .symfun import grothendieck_svt, root_names, schur
from .symmetrize import SymmetrizerError

MAX_EXPONENT = 255

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_BAD_INPUT = 2


class InputError(ValueError):
    """Malformed user input; reported with exit code 2."""


class PolySyntaxError(InputError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"syntax error at byte {offset}: {message}")
        self.offset = offset


class UnknownVariable(InputError):
    pass


class ExponentOverflow(InputError):
    pass


# ---------------------------------------------------------------------------
# polynomial expressions
#
# expr   := term (('+'|'-') term)*
# term   := factor ('*' factor)*
# factor := INT | VAR | factor '^' INT | '(' expr ')'

_TOKEN = re.compile(rb"\d+|[A-Za-z_][A-Za-z0-9_]*|[-+*^()]")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    data = text.encode("utf-8")
    out, pos = [], 0
    while pos < len(data):
        # work on bytes so offsets are byte offsets
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if pos == len(data):
            break
        rest = data[pos:]
        m = _TOKEN.match(rest)
        if not m:
            raise PolySyntaxError(f"unexpected character {rest[:1]!r}", pos)
        tok = m.group(0).decode("ascii")
        kind = "int" if tok[0].isdigit() else "var" if tok[0].isalpha() or tok[0] == "_" else tok
        out.append((kind, tok, pos))
        pos += len(m.group(0))
    out.append(("end", "", len(data)))
    return out


def _pmul(a: dict, b: dict) -> dict:
    out: dict = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = out.get(e, 0) + ca * cb
    return {e: c for e, c in out.items() if c}


def _padd(a: dict, b: dict, sign: int = 1) -> dict:
    out = dict(a)
    for e, c in b.items():
        out[e] = out.get(e, 0) + sign * c
    return {e: c for e, c in out.items() if c}


class _Parser:
    def __init__(self, text: str, variables: tuple[str, ...]):
        self.toks = _tokenize(text)
        self.i = 0
        self.variables = variables
        self.zero = (0,) * len(variables)

    def peek(self):
        return self.toks[self.i]

    def take(self, kind: str):
        tok = self.toks[self.i]
        if tok[0] != kind:
            what = "end of input" if tok[0] == "end" else repr(tok[1])
            raise PolySyntaxError(f"expected {kind}, found {what}", tok[2])
        self.i += 1
        return tok

    def parse(self) -> dict:
        out = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise PolySyntaxError(f"unexpected {tok[1]!r}", tok[2])
        return out

    def expr(self) -> dict:
        acc = self.term()
        while self.peek()[0] in ("+", "-"):
            sign = 1 if self.take(self.peek()[0])[0] == "+" else -1
            acc = _padd(acc, self.term(), sign)
        return acc

    def term(self) -> dict:
        acc = self.factor()
        while self.peek()[0] == "*":
            self.take("*")
            acc = _pmul(acc, self.factor())
        self._check(acc)
        return acc

    def factor(self) -> dict:
        kind, tok, pos = self.peek()
        if kind == "int":
            self.i += 1
            base = {self.zero: int(tok)} if int(tok) else {}
        elif kind == "var":
            self.i += 1
            if tok not in self.variables:
                allowed = ", ".join(self.variables) or "none"
                raise UnknownVariable(f"unknown variable {tok!r} at byte {pos} (allowed: {allowed})")
            e = [0] * len(self.variables)
            e[self.variables.index(tok)] = 1
            base = {tuple(e): 1}
        elif kind == "(":
            self.i += 1
            base = self.expr()
            self.take(")")
        else:
            what = "end of input" if kind == "end" else repr(tok)
            raise PolySyntaxError(f"expected a number, variable or '(', found {what}", pos)
        while self.peek()[0] == "^":
            self.take("^")
            _, etok, epos = self.take("int")
            k = int(etok)
            if k > MAX_EXPONENT:
                raise ExponentOverflow(f"exponent {k} at byte {epos} exceeds {MAX_EXPONENT}")
            base = self._power(base, k)
        return base

    def _power(self, base: dict, k: int) -> dict:
        out = {self.zero: 1}
        while k:
            if k & 1:
                out = self._check(_pmul(out, base))
            k >>= 1
            if k:
                base = self._check(_pmul(base, base))
        return out

    def _check(self, p: dict) -> dict:
        for e in p:
            if any(x > MAX_EXPONENT for x in e):
                raise ExponentOverflow(f"a variable exponent exceeds {MAX_EXPONENT}")
        return p


def parse_poly(text: str, variables: Sequence[str], ring: Ring, cap: int | None = None) -> Poly:
    """Parse an exact polynomial; ``cap`` defaults to its total degree.

    A cap below the degree is rejected rather than truncating silently.
    """
    variables = tuple(variables)
    terms = _Parser(text, variables).parse()
    degree = max((sum(e) for e in terms), default=0)
    if cap is None:
        cap = degree
    elif degree > cap:
        raise InputError(f"polynomial has degree {degree} above the cap {cap}")
    return Poly(ring, variables, cap, terms)


# ---------------------------------------------------------------------------
# canonical JSON


class JSONFormatError(InputError):
    pass


def _coeff_json(c: GradedCoefficient) -> list[dict]:
    names = c.ring.names
    order = sorted(range(len(names)), key=lambda i: names[i])
    rows = []
    for mono, v in c.terms.items():
        v = Fraction(v)
        key = [(names[i], mono[i]) for i in order if mono[i]]
        rows.append((key, {"mono": dict(key), "num": v.numerator, "den": v.denominator}))
    rows.sort(key=lambda r: r[0])
    return [r[1] for r in rows]


def poly_to_json(p: Poly) -> dict:
    return {
        "ring": {
            "base": p.ring.base,
            "generators": [{"name": g.name, "grade": g.grade} for g in p.ring.generators],
        },
        "variables": list(p.variables),
        "cap": p.cap,
        "terms": [{"exps": list(e), "coeff": _coeff_json(c)} for e, c in p.terms()],
    }


def dumps(obj) -> str:
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=True)


def render_json(p: Poly) -> str:
    return dumps(poly_to_json(p))


def _expect(cond: bool, message: str):
    if not cond:
        raise JSONFormatError(message)


def _is_int(x) -> bool:
    return type(x) is int


def poly_from_json(obj) -> Poly:
    """Inverse of poly_to_json; validates the schema strictly."""
    if isinstance(obj, str):
        try:
            obj = json.loads(obj)
        except json.JSONDecodeError as exc:
            raise JSONFormatError(f"invalid JSON: {exc}") from None
    _expect(isinstance(obj, dict) and set(obj) == {"ring", "variables", "cap", "terms"}, "top-level keys")
    ring_obj = obj["ring"]
    _expect(isinstance(ring_obj, dict) and set(ring_obj) == {"base", "generators"}, "ring keys")
    base = ring_obj["base"]
    _expect(base in (INTEGERS, RATIONALS), f"unknown base {base!r}")
    gens = []
    for g in ring_obj["generators"]:
        _expect(isinstance(g, dict) and set(g) == {"name", "grade"}, "generator keys")
        _expect(isinstance(g["name"], str) and _is_int(g["grade"]), "generator fields")
        gens.append(GeneratorSpec(g["name"], g["grade"]))
    try:
        ring = Ring(RingSpec(base, tuple(gens)))
    except ValueError as exc:
        raise JSONFormatError(str(exc)) from None
    variables = obj["variables"]
    _expect(isinstance(variables, list) and all(isinstance(v, str) for v in variables), "variables")
    cap = obj["cap"]
    _expect(_is_int(cap) and cap >= 0, "cap")
    terms = {}
    for t in obj["terms"]:
        _expect(isinstance(t, dict) and set(t) == {"exps", "coeff"}, "term keys")
        exps = t["exps"]
        _expect(
            isinstance(exps, list) and len(exps) == len(variables) and all(_is_int(e) and e >= 0 for e in exps),
            "term exponents",
        )
        _expect(sum(exps) <= cap, f"term {exps} above the cap")
        _expect(tuple(exps) not in terms, f"repeated term {exps}")
        coeff = {}
        for c in t["coeff"]:
            _expect(isinstance(c, dict) and set(c) == {"mono", "num", "den"}, "coefficient keys")
            _expect(_is_int(c["num"]) and _is_int(c["den"]) and c["den"] > 0, "coefficient value")
            mono = [0] * ring.ngens
            _expect(isinstance(c["mono"], dict), "coefficient monomial")
            for name, e in c["mono"].items():
                _expect(name in ring.names and _is_int(e) and e > 0, f"monomial entry {name}")
                mono[ring.index(name)] = e
            _expect(tuple(mono) not in coeff, "repeated coefficient monomial")
            coeff[tuple(mono)] = Fraction(c["num"], c["den"])
        try:
            terms[tuple(exps)] = GradedCoefficient(ring, coeff)
        except ValueError as exc:
            raise JSONFormatError(str(exc)) from None
    try:
        return Poly(ring, variables, cap, terms)
    except ValueError as exc:
        raise JSONFormatError(str(exc)) from None


# ---------------------------------------------------------------------------
# subcommands


def _index(text: str) -> tuple[int, ...]:
    text = text.strip()
    if not text:
        return ()
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise InputError(f"index {text!r} is not a comma-separated list of integers") from None


def _range(text: str) -> range:
    m = re.fullmatch(r"\s*(-?\d+)\s*:\s*(-?\d+)\s*", text)
    if not m:
        raise InputError(f"range {text!r} must look like LO:HI")
    lo, hi = int(m.group(1)), int(m.group(2))
    if hi < lo:
        raise InputError(f"empty range {text!r}")
    return range(lo, hi + 1)


def _emit(args, named: list[tuple[str, object]]) -> None:
    """Print (label, value) pairs; values are polynomials or plain JSON data."""
    if args.out == "json":
        if len(named) == 1 and isinstance(named[0][1], Poly):
            print(render_json(named[0][1]))
        else:
            print(dumps({k: poly_to_json(v) if isinstance(v, Poly) else v for k, v in named}))
    else:
        for k, v in named:
            print(f"{k} = {v}")


def cmd_fgl(args) -> int:
    law = fgl_make(args.theory, args.cap)
    d = law.derived()
    _emit(
        args,
        [
            ("F(u,v)", law.F),
            ("chi(u)", law.chi()),
            (f"[{args.n}](u)", law.n_series_u(args.n)),
            ("P(u)", d.P),
            ("log(u)", law.logarithm(extend=True)),
        ],
    )
    return EXIT_OK


def _roots(args) -> tuple[str, ...]:
    if args.nvars < 1:
        raise InputError("--nvars must be at least 1")
    return root_names(args.nvars, args.prefix)


def cmd_schur(args) -> int:
    roots = _roots(args)
    kind, cap, n = args.kind, args.cap, args.nvars
    if kind == "new":
        try:
            m = int(args.index)
        except ValueError:
            raise InputError("the new universal Schur function takes a single integer index") from None
        ctx = ChernRootContext(args.theory, cap, roots)
        out = new_universal_schur_closed(ctx, m) if args.route == "closed" else new_universal_schur(ctx, m)
    elif kind == "universal":
        out = universal_schur(ChernRootContext(args.theory, cap, roots), _index(args.index))
    elif kind == "quadratic":
        lam = _index(args.index)
        ctx = ChernRootContext(args.theory, cap, roots, "C")
        if args.route == "gf":
            out = quadratic_via_gf(ctx, lam)
        elif args.route == "kdet":
            if args.theory != "multiplicative":
                raise InputError("the determinantal route needs --theory multiplicative")
            out = k_quadratic_det(lam, n, cap, roots)
        else:
            out = quadratic_universal_schur(ctx, lam)
    elif kind == "classical":
        lam = _index(args.index)
        out = schur(lam, n, roots, cap)
    else:
        lam = _index(args.index)
        if args.route == "one-row":
            if len(lam) > 1:
                raise InputError("the one-row route takes a single integer index")
            ctx = ChernRootContext("multiplicative", cap, roots)
            a = lam[0] if lam else 0
            out = grothendieck_one_row(ctx, a)
        elif args.route == "hook":
            ctx = ChernRootContext("multiplicative", cap, roots)
            if len(lam) != 1:
                raise InputError("the hook route takes a single positive index")
            out = grothendieck_hook(ctx, lam[0])
        elif args.route == "hyperbolic":
            if len(lam) != 1:
                raise InputError("the hyperbolic one-row route takes a single index")
            out = hyperbolic_one_row(ChernRootContext("hyperbolic", cap, roots), lam[0])
        else:
            out = grothendieck_svt(lam, n, cap, roots)
    _emit(args, [(f"{kind}[{args.index}]", out)])
    return EXIT_OK


def _bundle(args, roots: tuple[str, ...]) -> ChernRootContext:
    kind = args.bundle
    if kind == "B":
        roots = root_names(len(roots) + 1, args.prefix)
    return ChernRootContext(args.theory, args.cap, roots, kind, args.twist)


def cmd_segre(args) -> int:
    roots = _roots(args)
    ctx = _bundle(args, roots)
    ms = _range(args.m)
    if args.kind == "plain":
        table = segre_table(ctx, ms)
    else:
        k = args.sub
        if not 0 <= k <= len(roots):
            raise InputError(f"--sub must lie in 0..{len(roots)}")
        ctxF = ChernRootContext(args.theory, args.cap, roots[:k], "A", None, ctx.variables[k:]) if k else None
        if ctx.kind != "A" and k:
            raise InputError("relative Segre classes take a plain bundle")
        table = segre_relative(ctx, ctxF, ms)
    if args.out == "json":
        print(dumps({"classes": [{"m": m, "value": poly_to_json(table[m])} for m in ms]}))
    else:
        for m in ms:
            print(f"S[{m}] = {table[m]}")
    return EXIT_OK


def _flag_context(args) -> tuple[FlagSpec, ChernRootContext]:
    try:
        q_seq = _index(args.q_seq)
        spec = FlagSpec(args.type, args.rank, q_seq)
    except GysinError as exc:
        raise InputError(str(exc)) from None
    if args.type == "A":
        ctx = ChernRootContext(args.theory, args.cap, root_names(spec.n, args.prefix))
    elif args.type == "C":
        ctx = ChernRootContext(args.theory, args.cap, root_names(spec.n, args.prefix), "C", args.twist)
    else:
        odd = args.rank % 2
        ctx = ChernRootContext(args.theory, args.cap, root_names(spec.n + odd, args.prefix), "B" if odd else "D", args.twist)
    return spec, ctx


def cmd_gysin(args) -> int:
    spec, ctx = _flag_context(args)
    if set(spec.fiber) & set(ctx.variables):
        raise InputError("fiber names clash with the base roots; choose another --prefix")
    f = parse_poly(args.poly, spec.fiber, ctx.ring)
    out = dp_pushforward(spec, f, ctx)
    named: list[tuple[str, object]] = [("extraction", out)]
    status = EXIT_OK
    try:
        symmetrizer_form(spec)
        defined = not (spec.type == "C" and ctx.twist)
    except GysinError:
        defined = False
    if defined and not args.no_symmetrizer:
        other = symmetrizer_gysin(spec, f, ctx)
        agree = other == out
        named += [("symmetrizer", other), ("agree", agree)]
        if not agree:
            status = EXIT_FAILED
            print("pushforward routes disagree: extraction vs symmetrizer", file=sys.stderr)
    if args.out == "json":
        print(dumps({k: poly_to_json(v) if isinstance(v, Poly) else v for k, v in named}))
    else:
        for k, v in named:
            print(f"{k} = {str(v).lower() if isinstance(v, bool) else v}")
    return status


def cmd_verify(args) -> int:
    from .suites import SUITES, run_suite

    if args.suite not in SUITES:
        raise InputError(f"unknown suite {args.suite!r}")
    results = run_suite(args.suite, args.cap, args.seed, args.jobs)
    failed = [r for r in results if not r.ok]
    if args.out == "json":
        rows = [{"name": r.name, "ok": r.ok, "detail": r.detail} for r in results]
        print(dumps({"suite": args.suite, "cap": args.cap, "results": rows, "passed": len(results) - len(failed), "failed": len(failed)}))
    else:
        for r in results:
            line = f"{'PASS' if r.ok else 'FAIL'} {r.name}"
            print(line + (f": {r.detail}" if r.detail and not r.ok else ""))
        print(f"{len(results) - len(failed)} passed, {len(failed)} failed")
    return EXIT_FAILED if failed else EXIT_OK


# ---------------------------------------------------------------------------
# argument handling


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_BAD_INPUT)


def build_parser() -> argparse.ArgumentParser:
    p = _ArgumentParser(prog="fglcalc", description="Exact formal-group-law calculus.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    def common(sp, cap=6):
        sp.add_argument("--theory", choices=THEORIES, default="additive")
        sp.add_argument("--cap", type=int, default=cap)
        sp.add_argument("--out", choices=("text", "json"), default="text")

    sp = sub.add_parser("fgl", help="print F, chi, [n], P and the logarithm")
    common(sp, 4)
    sp.add_argument("--n", type=int, default=2, help="n for the n-series")
    sp.set_defaults(run=cmd_fgl)

    sp = sub.add_parser("schur", help="Schur-type functions")
    common(sp)
    sp.add_argument("--kind", choices=("universal", "new", "quadratic", "classical", "grothendieck"), required=True)
    sp.add_argument("--index", default="", help="partition as comma list, or m for --kind new")
    sp.add_argument("--nvars", type=int, required=True)
    sp.add_argument("--prefix", default="x")
    sp.add_argument(
        "--route",
        choices=("default", "closed", "gf", "kdet", "one-row", "hook", "hyperbolic"),
        default="default",
        help="alternative computation route",
    )
    sp.set_defaults(run=cmd_schur)

    sp = sub.add_parser("segre", help="Segre classes")
    common(sp)
    sp.add_argument("--kind", choices=("plain", "relative"), default="plain")
    sp.add_argument("--nvars", type=int, required=True)
    sp.add_argument("--prefix", default="x")
    sp.add_argument("--bundle", choices=("A", "B", "C", "D"), default="A")
    sp.add_argument("--twist", default=None, help="name of the twisting root z")
    sp.add_argument("--m", default="-2:4", help="range LO:HI of Segre indices")
    sp.add_argument("--sub", type=int, default=0, help="relative: F spanned by the first k roots")
    sp.set_defaults(run=cmd_segre)

    sp = sub.add_parser("gysin", help="flag-bundle pushforward")
    common(sp)
    sp.add_argument("--type", choices=("A", "C", "BD"), required=True)
    sp.add_argument("--rank", type=int, required=True)
    sp.add_argument("--q-seq", required=True, help="comma list q_1 < ... < q_m")
    sp.add_argument("--poly", required=True, help="polynomial in y1..yq")
    sp.add_argument("--prefix", default="x")
    sp.add_argument("--twist", default=None)
    sp.add_argument("--no-symmetrizer", action="store_true")
    sp.set_defaults(run=cmd_gysin)

    sp = sub.add_parser("verify", help="run identity suites")
    sp.add_argument("--suite", default="all")
    sp.add_argument("--cap", type=int, default=6)
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--seed", type=int, default=20240611)
    sp.add_argument("--out", choices=("text", "json"), default="text")
    sp.set_defaults(run=cmd_verify)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "cap", 1) < 1:
        print("fglcalc: error: --cap must be at least 1", file=sys.stderr)
        return EXIT_BAD_INPUT
    if args.command == "verify" and args.jobs < 1:
        print("fglcalc: error: --jobs must be at least 1", file=sys.stderr)
        return EXIT_BAD_INPUT
    try:
        return args.run(args)
    except (GradeError, SymmetrizerError) as exc:
        # an identity the computation relies on did not hold
        print(f"fglcalc: verification failed: {exc}", file=sys.stderr)
        return EXIT_FAILED
    except ValueError as exc:
        # every domain error derives from ValueError
        print(f"fglcalc: error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())

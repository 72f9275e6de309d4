"""Command-line front end.

Exit codes: 0 success / property holds / not separated; 1 separated /
violation / verdict contrary to --expect; 2 input or usage error.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import suite
from .canon import STABILIZERS, classify_pair, nilpotent_jordan
from .errors import InputError, SamplingError
from .fuzz import fuzz_canon, fuzz_theorem
from .io import format_scalar, load_tuple, tuple_to_document
from .span import DEFAULT_SEED, generators_of_degree, in_span, product_basis
from .witnesses import catalog_json
from .words import SET_NAMES, builtin_set, eval_word, evaluate_set, separate, word

EXIT_OK, EXIT_FOUND, EXIT_INPUT = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise InputError(f"usage: {message}")


def _fmt(x) -> str:
    return str(format_scalar(x))


def _emit(args, text_lines, machine_obj):
    if args.format == "machine":
        print(json.dumps(machine_obj, sort_keys=True))
    else:
        for line in text_lines:
            print(line)


def _grid(m):
    return [[format_scalar(x) for x in r] for r in m.rows]


def _matrix_lines(m, indent="  "):
    return [indent + "[" + ", ".join(f"{_fmt(x):>5}" for x in r) + "]" for r in m.rows]


def _set_for(name: str, t):
    return builtin_set(name, t.d if name == "S2" else None)


# -- subcommands ---------------------------------------------------------------------

def cmd_eval(args) -> int:
    t = load_tuple(args.input)
    s = _set_for(args.set, t)
    values = evaluate_set(t, s)
    lines = [f"{str(w):<8} {_fmt(v)}" for w, v in zip(s.words, values)]
    _emit(args, lines, {"set": s.name, "values": [[str(w), _fmt(v)] for w, v in zip(s.words, values)]})
    return EXIT_OK


def cmd_separate(args) -> int:
    a, b = load_tuple(args.a), load_tuple(args.b)
    s = _set_for(args.set, a)
    w = separate(a, b, s)
    if w is None:
        _emit(args, ["not separated"], {"separated": False})
        return EXIT_OK
    va, vb = eval_word(a, w), eval_word(b, w)
    _emit(args, [f"{w}  ({_fmt(va)} vs {_fmt(vb)})"],
          {"separated": True, "word": str(w), "values": [_fmt(va), _fmt(vb)]})
    return EXIT_FOUND


def cmd_canon(args) -> int:
    a = load_tuple(args.input)
    if args.pair:
        b = load_tuple(args.pair)
        pc = classify_pair(a, b)
        tr = pc.transforms
        lines = [f"case {pc.case}", f"kept indices {list(tr.kept)}", f"swapped {tr.swapped}",
                 f"second-matrix types {list(pc.second_kinds)}", "g_a ="] + _matrix_lines(tr.g_a.g) + \
                ["g_b ="] + _matrix_lines(tr.g_b.g)
        for label, t in (("a", pc.a), ("b", pc.b)):
            for k, m in enumerate(t.mats, start=1):
                lines += [f"{label}{k} ="] + _matrix_lines(m)
        _emit(args, lines, {
            "case": pc.case, "kept": list(tr.kept), "swapped": tr.swapped,
            "second_kinds": list(pc.second_kinds),
            "g_a": _grid(tr.g_a.g), "g_b": _grid(tr.g_b.g),
            "a": tuple_to_document(pc.a) if pc.a.mats else None,
            "b": tuple_to_document(pc.b) if pc.b.mats else None,
        })
        return EXIT_OK
    g, tag = nilpotent_jordan(a.mats[0])
    lines = [f"matrix 1: {tag}", "g ="] + _matrix_lines(g.g)
    out = {"jordan": tag, "g": _grid(g.g)}
    if tag != "Zero" and a.d >= 2:
        res = STABILIZERS[tag][1](g.apply(a.mats[1]))
        total = g.then(res.g)
        lines += [f"matrix 2: {res.kind}", "normal form ="] + _matrix_lines(res.matrix) + \
                 ["total g ="] + _matrix_lines(total.g)
        out.update({"kind": res.kind, "matrix": _grid(res.matrix),
                    "total_g": _grid(total.g)})
    _emit(args, lines, out)
    return EXIT_OK


def cmd_verify(args) -> int:
    runners = {
        "witnesses": lambda: [suite.check_witnesses()],
        "indecomposable": lambda: [suite.check_indecomposable(args.seed),
                                   suite.check_min_generation(args.seed)],
        "canon": lambda: [suite.check_canon(args.seed, args.scale)],
        "all": lambda: suite.run_all(args.seed, args.scale),
    }
    results = runners[args.suite]()
    lines = []
    for r in results:
        lines.append(r.line())
        if args.verbose:
            lines += ["    " + d for d in r.details]
    _emit(args, lines, {"seed": args.seed, "checks": [r.to_dict() for r in results]})
    return EXIT_OK if all(r.passed for r in results) else EXIT_FOUND


def cmd_fuzz(args) -> int:
    if args.trials < 1:
        raise InputError("--trials must be >= 1")
    if args.kind == "theorem":
        rep = fuzz_theorem(args.trials, args.seed, args.family, repro_path=args.repro)
        lines = [f"{k}: {v.checked} checked, {v.s33_agreeing} S33-agreeing, {v.violations} violations"
                 for k, v in sorted(rep.families.items())]
        lines.append(f"total: {rep.checked} checked, {rep.violations} violations")
        for p in rep.violation_payloads[:5]:
            lines.append(f"VIOLATION family={p['family']} trial={p['trial']} word={p['word']}")
        _emit(args, lines, rep.to_dict())
        return EXIT_FOUND if rep.violations else EXIT_OK
    if args.family:
        raise InputError("--family applies to 'fuzz theorem' only")
    stabs = [args.stabilizer] if args.stabilizer else ["J1", "J2"]
    reps = [fuzz_canon(args.trials, args.seed, s) for s in stabs]
    lines = []
    for r in reps:
        lines.append(f"{r.stabilizer}: {r.trials} trials, failures {dict(r.failures) or 0}, "
                     f"tags {dict((k, r.tags[k]) for k in r.expected_tags)}")
        if r.missing_tags:
            lines.append(f"  tags never produced: {r.missing_tags}")
    _emit(args, lines, {"reports": [r.to_dict() for r in reps]})
    return EXIT_OK if all(not r.failures for r in reps) else EXIT_FOUND


def cmd_decomp(args) -> int:
    w = word(args.target)
    if w.max_letter > 3:
        raise InputError("decomposition is computed over P33, so letters must be 1..3")
    mdeg = w.multidegree(3)
    cands = product_basis(mdeg)
    if args.with_generators:
        cands += generators_of_degree(mdeg)
    dec = in_span(w, cands, args.samples, args.seed, d=3)
    lines = [f"target tr({w}), multidegree {mdeg}, {len(cands)} candidates, seed {dec.seed}, "
             f"{dec.samples_used} samples"]
    if dec.member:
        terms = [f"{_fmt(c)} * {p}" for c, p in zip(dec.coefficients, cands) if c]
        lines.append("in span: tr(%s) = %s" % (w, " + ".join(terms) or "0"))
        lines.append(f"validated on {dec.validated} fresh samples")
    else:
        lines.append("not in span (certified by samples " + ", ".join(dec.certificate) + ")")
    _emit(args, lines, {
        "target": str(w), "multidegree": list(mdeg), "member": dec.member, "seed": dec.seed,
        "samples_used": dec.samples_used, "candidates": [str(p) for p in cands],
        "coefficients": [_fmt(c) for c in dec.coefficients] if dec.member else None,
        "certificate": list(dec.certificate),
    })
    if args.expect is None:
        return EXIT_OK
    return EXIT_OK if dec.member == (args.expect == "member") else EXIT_FOUND


def cmd_catalog(args) -> int:
    text = catalog_json()
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return EXIT_OK


# -- parser -----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "machine"), default="text",
                        help="machine prints one JSON object")
    seeded = argparse.ArgumentParser(add_help=False)
    seeded.add_argument("--seed", type=int, default=DEFAULT_SEED, help=f"default {DEFAULT_SEED}")

    p = _Parser(prog="nilinv", description="Trace invariants of nilpotent 2x2 and 3x3 matrix tuples.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sets = list(SET_NAMES)

    e = sub.add_parser("eval", parents=[common], help="evaluate an invariant set on a tuple")
    e.add_argument("--set", required=True, choices=sets)
    e.add_argument("--input", required=True, metavar="FILE")
    e.set_defaults(func=cmd_eval)

    s = sub.add_parser("separate", parents=[common], help="first word of a set separating two tuples")
    s.add_argument("--set", required=True, choices=sets)
    s.add_argument("a", metavar="A.json")
    s.add_argument("b", metavar="B.json")
    s.set_defaults(func=cmd_separate)

    c = sub.add_parser("canon", parents=[common], help="Jordan/stabilizer reduction or pair case")
    c.add_argument("--input", required=True, metavar="FILE")
    c.add_argument("--pair", metavar="B.json", help="classify the pair (input, B)")
    c.set_defaults(func=cmd_canon)

    v = sub.add_parser("verify", parents=[common, seeded], help="run a verification suite")
    v.add_argument("suite", choices=("witnesses", "canon", "indecomposable", "all"))
    v.add_argument("--scale", type=float, default=1.0, help="multiplier for fuzz trial counts")
    v.add_argument("-v", "--verbose", action="store_true")
    v.set_defaults(func=cmd_verify)

    f = sub.add_parser("fuzz", parents=[common, seeded], help="property fuzzing")
    f.add_argument("kind", choices=("theorem", "canon"))
    f.add_argument("--trials", type=int, default=1000)
    f.add_argument("--family", help="Conjugate, StrictUpper, Independent, Template or Template:<id>")
    f.add_argument("--stabilizer", choices=("J1", "J2"), help="canon only; default both")
    f.add_argument("--repro", metavar="FILE", help="write violating pairs here")
    f.set_defaults(func=cmd_fuzz)

    d = sub.add_parser("decomp", parents=[common, seeded], help="span membership of a trace word")
    d.add_argument("--target", required=True, metavar="WORD", help='digit string, e.g. "112212"')
    d.add_argument("--samples", type=int, default=None)
    d.add_argument("--with-generators", action="store_true",
                   help="also allow single generators of the same multidegree")
    d.add_argument("--expect", choices=("member", "nonmember"))
    d.set_defaults(func=cmd_decomp)

    k = sub.add_parser("catalog", help="export the witness catalog as JSON")
    k.add_argument("--output", metavar="FILE")
    k.set_defaults(func=cmd_catalog, format="text")
    return p


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SamplingError as exc:
        print(f"sampling error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()

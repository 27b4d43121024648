"""Command line front end.

Exit codes: 0 success, 2 usage error, 3 domain error, 4 acceptance failure.
Errors are reported on stderr as a JSON record ``{"error": code, "message": ...}``.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

from . import acceptance
from .algebra import Element, haar
from .errors import ParseError, QSU2Error
from .graded import TraceKind, build_seq, dixmier, htilde_phi, residue_half
from .ktheory import Tk, Ttk, evaluate_htilde, generator_relation_check, mapping_cone_pairing
from .oracle import (
    TruncationSpec,
    haar_num,
    htilde_phi_num,
    oracle_tolerance,
    relation_check_num,
    residue_num,
    table_check,
)
from .parsing import parse_element
from .qfield import QRat, eval_at
from .spectral_flow import make_modular_unitary, modular_terms, partial_iso, semifinite_terms

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_ACCEPTANCE = 0, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def k_range(text: str) -> list[int]:
    """"5" -> [5]; "1..12" -> [1, ..., 12]; "1,3,5" -> [1, 3, 5]."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..", 1)
            lo, hi = int(lo), int(hi)
            if hi < lo:
                raise argparse.ArgumentTypeError(f"empty range {part!r}")
            out.extend(range(lo, hi + 1))
        else:
            out.append(int(part))
    return out


def _k_range_arg(text):
    try:
        return k_range(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad k range {text!r}") from None


def qrat_json(x: QRat) -> dict:
    return {"text": x.canonical_text(), "pretty": x.pretty(), **x.to_record()}


def _numeric(x: QRat, q0):
    return None if q0 is None else eval_at(x, q0)


class Emitter:
    """Streams rows in the chosen format, one row at a time."""

    def __init__(self, fmt: str, columns: list[str], out=None):
        self.fmt = fmt
        self.columns = columns
        self.out = out or sys.stdout
        self._csv = None
        if fmt == "csv":
            self._csv = csv.writer(self.out, lineterminator="\n")
            self._csv.writerow(columns)

    def row(self, values: dict):
        if self.fmt == "json":
            rec = {k: (qrat_json(v) if isinstance(v, QRat) else v) for k, v in values.items()}
            self.out.write(json.dumps(rec, sort_keys=False) + "\n")
        elif self.fmt == "csv":
            self._csv.writerow([_cell(values.get(c)) for c in self.columns])
        else:
            self.out.write("  ".join(f"{c}={_cell(values.get(c))}" for c in self.columns) + "\n")
        self.out.flush()


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, QRat):
        return v.pretty()
    if isinstance(v, float):
        return repr(v)
    return str(v)


# subcommands


def cmd_haar(args):
    x = parse_element(args.element)
    h = haar(x)
    em = Emitter(args.format, ["element", "haar", "numeric"])
    em.row({"element": x.pretty(), "haar": h, "numeric": _numeric(h, args.q)})


def cmd_mul(args):
    x, y = parse_element(args.left), parse_element(args.right)
    p = x * y
    em = Emitter(args.format, ["left", "right", "product", "reduced"])
    em.row({"left": x.pretty(), "right": y.pretty(), "product": p.pretty(),
            "reduced": p.reduced().pretty()})


def _family(gen: str) -> str:
    return {"T": "T", "Ttilde": "Ttilde", "Tt": "Ttilde"}[gen]


def cmd_pair(args):
    cols = ["generator", "k", "path", "eta", "kernel", "total", "numeric"]
    em = Emitter(args.format, cols)
    fam = _family(args.gen)
    for k in args.k:
        v = partial_iso(fam, k)
        terms = modular_terms(make_modular_unitary(v)) if args.modular else semifinite_terms(v)
        total = terms.total
        row = {"generator": ("u_" if args.modular else "") + fam, "k": k,
               "path": terms.path, "eta": terms.eta, "kernel": terms.kernel,
               "total": total, "numeric": _numeric(total, args.q)}
        if args.format == "json":
            row = {"generator": row["generator"], "k": k,
                   "term": {"path": qrat_json(terms.path), "eta": qrat_json(terms.eta),
                            "kernel": qrat_json(terms.kernel)},
                   "total": total, "numeric_at_q": row["numeric"], "q": args.q}
        em.row(row)


def cmd_residue(args):
    x = parse_element(args.element)
    kind = TraceKind.parse(args.kind)
    seq = build_seq(x, kind)
    r = residue_half(seq)
    em = Emitter(args.format, ["element", "kind", "residue", "numeric"])
    row = {"element": x.pretty(), "kind": kind.value, "residue": r, "numeric": _numeric(r, args.q)}
    if args.format == "json" and args.show_seq:
        row["sequence"] = seq.to_json()
    em.row(row)


def cmd_dixmier(args):
    x = parse_element(args.element)
    kind = TraceKind.parse(args.kind)
    d = dixmier(x, kind)
    em = Emitter(args.format, ["element", "kind", "dixmier", "numeric"])
    em.row({"element": x.pretty(), "kind": kind.value, "dixmier": d, "numeric": _numeric(d, args.q)})


def cmd_ktheory(args):
    if args.relation:
        em = Emitter(args.format, ["k", "relation_holds"])
        for k in args.k:
            em.row({"k": k, "relation_holds": generator_relation_check(k)})
        return 0
    em = Emitter(args.format, ["generator", "k", "class", "htilde_value", "numeric"])
    make = Tk if _family(args.gen) == "T" else Ttk
    for k in args.k:
        pr = mapping_cone_pairing(make(k, adjoint=args.adjoint))
        val = evaluate_htilde(pr)
        em.row({"generator": str(make(k, args.adjoint)), "k": k, "class": pr.text(),
                "htilde_value": val, "numeric": _numeric(val, args.q)})
    return 0


def cmd_oracle(args):
    t = TruncationSpec(args.trunc_k, args.trunc_n, args.q if args.q is not None else 0.5)
    tol = oracle_tolerance(1e-8)
    reports = []
    if args.check in ("relations", "all"):
        reports += [r.to_json() for r in relation_check_num(t)]
    if args.check in ("table", "all"):
        for m in acceptance.monomials_up_to(2, 1):
            reports.append(table_check(m, t).to_json())
    if args.check in ("haar", "all") or args.element:
        elems = [parse_element(args.element)] if args.element else \
            [Element.of(m) for m in acceptance.monomials_up_to(2, 1)]
        for x in elems:
            err = abs(haar_num(x, t) - eval_at(haar(x), t.q0))
            reports.append({"check": f"haar {x.pretty()}", "residual": err,
                            "tolerance": tol, "pass": err <= tol})
            if args.element:
                for m in range(-3, 4):
                    err = abs(htilde_phi_num(x, m, t) - eval_at(htilde_phi(x, m), t.q0))
                    reports.append({"check": f"htilde {x.pretty()} m={m}", "residual": err,
                                    "tolerance": tol, "pass": err <= tol})
    if args.check in ("residue", "all"):
        x = parse_element(args.element) if args.element else parse_element("one")
        for kind in TraceKind:
            est = residue_num(x, kind, t)
            err = abs(est.value - eval_at(residue_half(build_seq(x, kind)), t.q0))
            reports.append({"check": f"residue {x.pretty()} {kind.value}", "residual": err,
                            "tolerance": 1e-3, "pass": err <= 1e-3,
                            "extrapolation_error": est.error, "converged": est.converged})
    for rep in reports:
        sys.stdout.write(json.dumps(rep) + "\n")
    return EXIT_OK if all(r["pass"] for r in reports) else EXIT_ACCEPTANCE


def cmd_suite(args):
    trunc = TruncationSpec(args.trunc_k, args.trunc_n, args.q if args.q is not None else 0.5)
    results = acceptance.run_all(quick=args.quick, trunc=trunc, stream=sys.stdout)
    ok = all(r.passed for r in results)
    print(f"{sum(r.passed for r in results)}/{len(results)} criteria passed")
    return EXIT_OK if ok else EXIT_ACCEPTANCE


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qsu2", description="Exact index computations on quantum SU(2).")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, q_default=None):
        sp.add_argument("--format", choices=["text", "json", "csv"], default="text")
        sp.add_argument("--q", type=float, default=q_default,
                        help="also evaluate numerically at this q in (0, 1)")

    s = sub.add_parser("haar", help="Haar state of an element")
    s.add_argument("--element", required=True)
    common(s)
    s.set_defaults(func=cmd_haar)

    s = sub.add_parser("mul", help="multiply two elements")
    s.add_argument("left")
    s.add_argument("right")
    common(s)
    s.set_defaults(func=cmd_mul)

    s = sub.add_parser("pair", help="spectral-flow pairings for generator families")
    mode = s.add_mutually_exclusive_group()
    mode.add_argument("--semifinite", action="store_true", default=True)
    mode.add_argument("--modular", action="store_true")
    s.add_argument("--gen", choices=["T", "Ttilde", "Tt"], required=True)
    s.add_argument("--k", type=_k_range_arg, required=True)
    common(s)
    s.set_defaults(func=cmd_pair)

    for name, func, helptext in (("residue", cmd_residue, "zeta residue at r = 1/2"),
                                 ("dixmier", cmd_dixmier, "Dixmier trace value")):
        s = sub.add_parser(name, help=helptext)
        s.add_argument("--element", required=True)
        s.add_argument("--kind", default="HD", type=str, choices=["HD", "Htilde", "hd", "htilde"])
        if name == "residue":
            s.add_argument("--show-seq", action="store_true", help="include the sequence (json)")
        common(s)
        s.set_defaults(func=func)

    s = sub.add_parser("ktheory", help="K_0(F)-valued pairing tables")
    s.add_argument("--gen", choices=["T", "Ttilde", "Tt"], default="T")
    s.add_argument("--k", type=_k_range_arg, required=True)
    s.add_argument("--adjoint", action="store_true")
    s.add_argument("--relation", action="store_true", help="check the generator relation instead")
    common(s)
    s.set_defaults(func=cmd_ktheory)

    def trunc(sp):
        sp.add_argument("--q", type=float, default=None)
        sp.add_argument("--trunc-k", type=int, default=40)
        sp.add_argument("--trunc-n", type=int, default=6)

    s = sub.add_parser("oracle", help="numeric cross-checks (JSON report)")
    s.add_argument("--check", choices=["relations", "table", "haar", "residue", "all"], default="all")
    s.add_argument("--element")
    trunc(s)
    s.set_defaults(func=cmd_oracle)

    s = sub.add_parser("suite", help="run the acceptance criteria")
    s.add_argument("--quick", action="store_true", help="symbolic criteria only")
    trunc(s)
    s.set_defaults(func=cmd_suite)
    return p


def _fail(code: str, message: str, status: int) -> int:
    sys.stderr.write(json.dumps({"error": code, "message": message}) + "\n")
    return status


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        q = getattr(args, "q", None)
        if q is not None and not 0 < q < 1:
            raise UsageError(f"--q must lie in (0, 1), got {q}")
        status = args.func(args)
        return EXIT_OK if status is None else status
    except UsageError as exc:
        return _fail("cli.usage", str(exc), EXIT_USAGE)
    except ParseError as exc:
        return _fail(exc.code, str(exc), EXIT_USAGE)
    except QSU2Error as exc:
        return _fail(exc.code, str(exc), EXIT_DOMAIN)
    except ValueError as exc:
        return _fail("qsu2.domain", str(exc), EXIT_DOMAIN)


if __name__ == "__main__":
    sys.exit(main())

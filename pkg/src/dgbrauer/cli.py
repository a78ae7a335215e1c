"""Command-line surface.

Exit codes: 0 success or true verdict, 1 a checked property is false
(the report names it), 2 invalid input or usage.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys

from . import io
from .brauer import azumaya_report, derivation_dims
from .classification import CASES, ClassificationError, classify_dg_field, make_template
from .constructions import BaseMismatch, NotFree, agr_decompose, end_over, mu_map, tensor_over
from .dg import dg_structure_report, homology
from .graded import PreconditionError, ValidationError, Verdict, WindowError, structure_report
from .scalars import Field

DEFAULT_WINDOW = (-8, 8)

log = logging.getLogger("dgbrauer")


class Usage(Exception):
    pass


class Outcome:
    """Report lines plus a JSON payload and the exit code."""

    def __init__(self, code: int = 0):
        self.code = code
        self.lines: list[str] = []
        self.payload: dict = {}

    def line(self, text: str):
        self.lines.append(text)


def _window(text: str | None):
    if text is None:
        return DEFAULT_WINDOW
    try:
        a, b = text.split(":")
        return int(a), int(b)
    except ValueError:
        raise Usage(f"window must look like a:b, got {text!r}") from None


def _verdict_text(v: Verdict) -> str:
    val = {True: "yes", False: "no", None: "undecided"}[v.value]
    return f"{val} ({v.method})"


def _dg(path):
    return io.build_dg(io.load(path))


def _over(path, base_path):
    base = _dg(base_path) if base_path else None
    return io.build_over(io.load(path), base)


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------


def cmd_validate(args) -> Outcome:
    doc = io.load(args.file)
    out = Outcome()
    if doc.is_module:
        M = io.build_module(doc)
        out.line(f"valid module: {len(M.gens)} generators over {M.base.algebra.name or M.base.field.label}")
        out.payload = {"valid": True, "kind": "module", "generators": len(M.gens)}
        return out
    Ad = io.build_dg(doc)
    A = Ad.algebra
    out.line(f"valid: {A.name or args.file}")
    out.line(f"field: {A.field.label}")
    out.line(f"core dimension: {len(A.names)}")
    out.line(f"unit degree: {A.unit_degree if A.periodic else 'none'}")
    out.line(f"differential: {'zero' if Ad.is_zero() else 'nonzero'}")
    out.payload = {
        "valid": True,
        "field": A.field.label,
        "core_dimension": len(A.names),
        "unit_degree": A.unit_degree,
        "zero_differential": Ad.is_zero(),
    }
    if "over" in doc.data:
        X = io.build_over(doc)
        out.line(f"free over base: rank {X.rank}")
        out.payload["rank_over_base"] = X.rank
    return out


def cmd_classify(args) -> Outcome:
    Ad = _dg(args.file)
    try:
        rep = classify_dg_field(Ad)
    except PreconditionError as e:
        out = Outcome(1)
        out.line(f"not classifiable: {e}")
        out.payload = {"classified": False, "reason": str(e)}
        return out
    except ClassificationError as e:
        out = Outcome(1)
        out.line(f"classification failed: {e}")
        out.payload = {"classified": False, "reason": str(e)}
        return out
    out = Outcome()
    out.line(rep.summary())
    for note in rep.notes:
        out.line(f"note: {note}")
    out.payload = rep.to_json()
    return out


def cmd_homology(args) -> Outcome:
    Ad = _dg(args.file)
    window = _window(args.window)
    rep = homology(Ad, window)
    out = Outcome()
    out.line(f"window: {window[0]}:{window[1]}")
    for n, row in rep.per_degree.items():
        out.line(f"H_{n} = {row['homology']} (cycles {row['cycles']}, boundaries {row['boundaries']})")
    out.line(f"acyclic: {'yes' if rep.acyclic else 'no'}")
    out.payload = rep.to_json()
    if args.figure:
        from .plotting import plot_homology

        plot_homology(rep, args.figure, title=Ad.algebra.name or "homology")
    return out


def cmd_structure(args) -> Outcome:
    Ad = _dg(args.file)
    A = Ad.algebra
    sr = structure_report(A)
    dr = dg_structure_report(Ad)
    out = Outcome()
    out.line(f"graded-commutative: {'yes' if sr['graded_commutative'] else 'no'}")
    out.line(f"commutative: {'yes' if sr['commutative'] else 'no'}")
    for key in ("graded_division", "graded_field", "graded_simple"):
        out.line(f"{key.replace('_', '-')}: {_verdict_text(sr[key])}")
    for key in ("dg_division", "dg_simple", "oracle"):
        out.line(f"{key.replace('_', '-')}: {_verdict_text(dr[key])}")
    out.line(f"dichotomy: {dr['dichotomy']}")
    out.payload = {
        "graded": {k: (v.to_json() if isinstance(v, Verdict) else (repr(v) if v is not None and not isinstance(v, bool) else v)) for k, v in sr.items()},
        "dg": {
            "dg_division": dr["dg_division"].to_json(),
            "dg_simple": dr["dg_simple"].to_json(),
            "oracle": dr["oracle"].to_json(),
            "oracle_agrees": dr["oracle_agrees"],
            "dichotomy": dr["dichotomy"],
        },
    }
    return out


def cmd_tensor(args) -> Outcome:
    K = _dg(args.base)
    X = io.build_over(io.load(args.left), K)
    Y = io.build_over(io.load(args.right), K)
    T = tensor_over(X, Y)
    ref = os.path.relpath(os.path.abspath(args.base), os.path.dirname(os.path.abspath(args.output)))
    doc = io.document_from_over(T, ref)
    with open(args.output, "w", encoding="utf-8") as fh:
        fh.write(io.emit(doc))
    out = Outcome()
    out.line(f"wrote {args.output}: rank {T.rank} over the base, core dimension {len(T.A.names)}")
    out.payload = {"output": args.output, "rank": T.rank, "core_dimension": len(T.A.names)}
    return out


def cmd_agr(args) -> Outcome:
    Ad = _dg(args.file)
    try:
        dec = agr_decompose(Ad)
    except PreconditionError as e:
        out = Outcome(1)
        out.line(f"precondition false: {e}")
        out.payload = {"decomposed": False, "reason": str(e)}
        return out
    out = Outcome(0 if dec.verified else 1)
    out.line(f"y = {dec.y!r}")
    out.line(f"y^2 = {dec.y_squared!r}")
    twist = {b: v for b, v in dec.D.items() if v}
    out.line("D = " + (", ".join(f"{b} -> {v!r}" for b, v in twist.items()) if twist else "0"))
    for k, ok in dec.checks.items():
        out.line(f"check {k}: {'ok' if ok else 'FAILED'}")
    out.payload = {
        "decomposed": True,
        "y": repr(dec.y),
        "y_squared": repr(dec.y_squared),
        "D": {b: repr(v) for b, v in twist.items()},
        "checks": dict(dec.checks),
        "verified": dec.verified,
    }
    return out


def cmd_azumaya(args) -> Outcome:
    X = _over(args.file, args.base)
    rep = azumaya_report(X)
    out = Outcome(0 if rep.kind_II.value else 1)
    out.line(rep.mu_message)
    out.line(f"faithfully projective: {_verdict_text(rep.faithfully_projective)}")
    out.line(f"graded central: {_verdict_text(rep.graded_central)}")
    out.line(f"graded separable: {_verdict_text(rep.graded_separable)}")
    out.line(f"second kind: {_verdict_text(rep.kind_II)}")
    out.line(f"first kind: {_verdict_text(rep.kind_I)}")
    out.payload = rep.to_json()
    return out


def cmd_mu(args) -> Outcome:
    X = _over(args.file, args.base)
    mu = mu_map(X)
    out = Outcome(0 if mu.is_iso else 1)
    out.line(mu.message())
    for n, row in sorted(mu.ranks.items()):
        out.line(f"degree {n}: rank {row['rank']} (source {row['source']}, target {row['target']})")
    out.line(f"dg-map: {'yes' if mu.is_dg_map else 'no'}")
    out.payload = {
        "mu": mu.message(),
        "iso": mu.is_iso,
        "dg_map": mu.is_dg_map,
        "ranks": {str(k): v for k, v in sorted(mu.ranks.items())},
    }
    if args.figure:
        from .plotting import plot_mu_ranks

        plot_mu_ranks(mu.ranks, args.figure)
    return out


def cmd_end(args) -> Outcome:
    doc = io.load(args.file)
    if not doc.is_module:
        raise io.DocumentError("$.kind", "expected a module document (kind: module)")
    M = io.build_module(doc)
    E = end_over(M)
    out = Outcome()
    out.line(f"End: rank {E.rank} over the base, core dimension {len(E.A.names)}")
    out.payload = {"rank": E.rank, "core_dimension": len(E.A.names)}
    if args.output:
        if "base" in doc.data:
            base_abs = os.path.join(os.path.dirname(os.path.abspath(args.file)), doc.data["base"])
            ref = os.path.relpath(base_abs, os.path.dirname(os.path.abspath(args.output)))
            text = io.emit(io.document_from_over(E, ref))
        else:
            text = io.emit(io.document_from_dg(E.carrier, E.name))
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
        out.line(f"wrote {args.output}")
    return out


def cmd_template(args) -> Outcome:
    try:
        F = Field.from_label(args.field)
        Ad = make_template(args.case, F, args.tdeg)
    except ValueError as e:
        raise Usage(str(e)) from None
    text = io.emit(io.document_from_dg(Ad))
    with open(args.output, "w", encoding="utf-8") as fh:
        fh.write(text)
    out = Outcome()
    out.line(f"wrote {args.output}: {Ad.algebra.name}")
    out.payload = {"output": args.output, "case": args.case, "field": F.label, "t_degree": args.tdeg}
    return out


def cmd_derivations(args) -> Outcome:
    X = _over(args.file, args.base)
    window = _window(args.window) if args.window else None
    dims = derivation_dims(X, window)
    out = Outcome(0 if dims["all_inner"] else 1)
    for k in sorted(dims["all_derivations"]):
        out.line(f"degree {k}: {dims['all_derivations'][k]} derivations, {dims['inner_derivations'][k]} inner")
    out.line("all derivations inner" if dims["all_inner"] else "outer derivations exist")
    out.payload = {
        "all_derivations": {str(k): v for k, v in sorted(dims["all_derivations"].items())},
        "inner_derivations": {str(k): v for k, v in sorted(dims["inner_derivations"].items())},
        "all_inner": dims["all_inner"],
        "window": list(window) if window else "period" if X.A.periodic else "degree span",
    }
    if args.figure:
        from .plotting import plot_derivations

        plot_derivations(dims, args.figure)
    return out


# --------------------------------------------------------------------------
# parser and dispatch
# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dgbrauer", description="Exact toolkit for dg-division algebras and dg-Azumaya algebras.")
    p.add_argument("--json", action="store_true", help="print the report as canonical JSON")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    def add(name, func, help_text, file=True, base=False, figure=False):
        s = sub.add_parser(name, help=help_text)
        if file:
            s.add_argument("file")
        if base:
            s.add_argument("--base", required=True, help="presentation of the base dg-algebra")
        if figure:
            s.add_argument("--figure", metavar="PATH", help="also render a per-degree bar chart")
        s.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
        s.set_defaults(func=func)
        return s

    add("validate", cmd_validate, "check a presentation (and its differential)")
    add("classify", cmd_classify, "assign a dg-field to one of the seven cases")
    add("homology", cmd_homology, "per-degree cycles, boundaries and homology", figure=True).add_argument(
        "--window", help="degree window a:b (default -8:8)"
    )
    add("structure", cmd_structure, "graded and dg structure verdicts")
    t = add("tensor", cmd_tensor, "tensor product of two algebras over a base", file=False, base=True)
    t.add_argument("left")
    t.add_argument("right")
    t.add_argument("-o", "--output", required=True)
    add("agr", cmd_agr, "decompose an acyclic dg-division algebra")
    add("azumaya", cmd_azumaya, "graded and dg Azumaya verdicts", base=True)
    add("mu", cmd_mu, "rank table of the canonical map to the endomorphism algebra", base=True, figure=True)
    add("end", cmd_end, "endomorphism dg-algebra of a free dg-module").add_argument("-o", "--output")
    t = add("template", cmd_template, "write a template dg-field", file=False)
    t.add_argument("case", choices=CASES)
    t.add_argument("--field", required=True, help="Q or Fp:p")
    t.add_argument("--tdeg", type=int, default=None, help="degree of T where the case allows a choice")
    t.add_argument("-o", "--output", required=True)
    add("derivations", cmd_derivations, "derivation and inner-derivation dimensions", base=True, figure=True).add_argument(
        "--window", help="degree window a:b for non-periodic algebras"
    )
    return p


def _join_windows(argv):
    # "--window -4:4" would be taken for an option; bind the value explicitly
    out, it = [], iter(argv)
    for a in it:
        if a == "--window":
            nxt = next(it, None)
            out.append(a if nxt is None else f"--window={nxt}")
        else:
            out.append(a)
    return out


def main(argv=None) -> int:
    argv = _join_windows(list(sys.argv[1:] if argv is None else argv))
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        outcome = args.func(args)
    except (io.DocumentError, ValidationError, WindowError, NotFree, BaseMismatch, Usage) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except PreconditionError as e:
        print(f"precondition false: {e}", file=sys.stderr)
        return 1
    if getattr(args, "json", False):
        sys.stdout.write(io.emit(outcome.payload))
    else:
        for ln in outcome.lines:
            print(ln)
    return outcome.code


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

Exit codes: 0 for success or a true verdict, 1 for a well-formed negative
verdict, 2 for malformed input.  With ``--json`` each subcommand writes one
compact JSON document to standard output (``sweep`` writes one JSON line per
job followed by a summary line).
"""

from __future__ import annotations

import argparse
import io
import json
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from contextlib import redirect_stderr, redirect_stdout

from vucert.errors import HypothesisError, InputError, VucertError
from vucert.manifolds import (
    Case,
    GluingMatrix,
    Word,
    abelianization_image,
    build_presentation,
    certificate_words,
    enumerate_gluings,
    normalize_gluing,
    npc_check,
)
from vucert.proof_engine import (
    BlockPattern,
    Outcome,
    check_forcing,
    enumerate_edge_patterns,
    enumerate_loop_patterns,
)
from vucert.rep_checker import analyze_word, parse_representation, verify_relations

LOOP_NOTE = "valid under the loop certificate hypotheses (det B = -1, b != 0, a - d >= 2)"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _dump(obj) -> str:
    return json.dumps(obj, separators=(",", ":"))


def _matrix(args) -> GluingMatrix:
    return GluingMatrix.parse(args.matrix, args.case)


def _emit(args, text: str, payload: dict):
    print(_dump(payload) if args.json else text)


def cmd_npc(args) -> int:
    b = _matrix(args)
    verdict = npc_check(b)
    _emit(args, "NPC" if verdict else "not NPC",
          {"case": b.case.value, "matrix": list(b.entries), "npc": verdict})
    return 0 if verdict else 1


def cmd_certificate(args) -> int:
    b = _matrix(args)
    moves: tuple = ()
    if args.normalize:
        try:
            norm = normalize_gluing(b)
        except HypothesisError as exc:
            return _refuse(args, b, str(exc))
        b, moves = norm.matrix, norm.moves
    try:
        words = certificate_words(b)
    except HypothesisError as exc:
        return _refuse(args, b, str(exc))
    payload = {"case": b.case.value, "matrix": list(b.entries), "moves": list(moves),
               "words": [str(w) for w in words]}
    if b.case is Case.LOOP:
        payload["note"] = LOOP_NOTE
    _emit(args, "\n".join(str(w) for w in words), payload)
    return 0


def _refuse(args, b, reason) -> int:
    _emit(args, f"no certificate: {reason}",
          {"case": b.case.value, "matrix": list(b.entries), "words": [], "refused": reason})
    return 1


def _presentation(args):
    b = _matrix(args)
    if b.case is Case.LOOP and args.genus2 is not None:
        raise InputError("--genus2 applies to the edge case only")
    return build_presentation(b.case, args.genus, b, args.genus2)


def cmd_presentation(args) -> int:
    p = _presentation(args)
    lines = ["generators: " + " ".join(p.generators)]
    lines += [f"({lab}) {w}" for lab, w in zip(p.labels, p.relators)]
    _emit(args, "\n".join(lines), {
        "case": p.case.value, "genus": p.genus, "genus2": p.genus2,
        "generators": list(p.generators),
        "relators": [{"label": lab, "word": str(w)} for lab, w in zip(p.labels, p.relators)],
    })
    return 0


def _group_str(free_rank, torsion) -> str:
    parts = [f"Z^{free_rank}"] if free_rank else []
    parts += [f"Z/{t}" for t in torsion]
    return " + ".join(parts) if parts else "0"


def cmd_h1(args) -> int:
    p = _presentation(args)
    w = Word.parse(args.word) if args.word is not None else Word()
    group, img, torsion = abelianization_image(p, w)
    text = [f"H1 = {_group_str(group.free_rank, group.torsion_divisors)}"]
    payload = {"free_rank": group.free_rank, "torsion_divisors": list(group.torsion_divisors)}
    if args.word is not None:
        text.append(f"image of {w}: ({', '.join(map(str, img))}) "
                    + ("torsion" if torsion else "not torsion"))
        payload.update({"word": str(w), "image": list(img), "torsion": torsion})
    _emit(args, "\n".join(text), payload)
    return 0 if torsion else 1


def cmd_force(args) -> int:
    b = _matrix(args)
    pattern = BlockPattern.parse(args.pattern, args.case)
    verdict = check_forcing(b, pattern)
    lines = [verdict.outcome.value] + [f"forced: {t}" for t in verdict.forced_targets]
    if args.trace:
        lines += [f"  {step}" for step in verdict.trace]
    _emit(args, "\n".join(lines), verdict.to_json())
    return 0 if verdict.outcome is Outcome.FORCED_VU else 1


def _sweep_job(job):
    entries, case, dims = job
    b = GluingMatrix(*entries, case)
    pattern = BlockPattern(case, dims)
    try:
        v = check_forcing(b, pattern)
        return {"matrix": list(entries), "pattern": str(pattern), "outcome": v.outcome.value,
                "oracle_confirmed": v.oracle_confirmed}
    except VucertError as exc:
        return {"matrix": list(entries), "pattern": str(pattern), "outcome": "Error",
                "oracle_confirmed": False, "error": str(exc)}


def sweep_jobs(case, bound, max_k, max_dim, max_entry, b_max):
    case = Case.parse(case)
    mats = []
    for g in enumerate_gluings(bound, case):
        if b_max is not None and not 1 <= g.b <= b_max:
            continue
        if case is Case.LOOP and (g.det != -1 or g.a - g.d < 2):
            continue
        if case is Case.EDGE and not g.is_edge_normalized():
            continue
        mats.append(g)
    if case is Case.LOOP:
        pats = enumerate_loop_patterns(max_k, max_dim)
    else:
        pats = enumerate_edge_patterns(max_k, max_k, max_entry)
    for g in mats:
        for p in pats:
            yield (g.entries, case.value, p.dims)


def cmd_sweep(args) -> int:
    if args.bound < 0 or args.max_k < 1:
        raise InputError("--bound must be >= 0 and --max-k >= 1")
    jobs = sweep_jobs(args.case, args.bound, args.max_k, args.max_dim, args.max_entry, args.b_max)
    counts: dict = {}
    total = 0
    if args.jobs > 1:
        pool = ProcessPoolExecutor(max_workers=args.jobs)
        results = pool.map(_sweep_job, jobs, chunksize=16)
    else:
        pool = None
        results = map(_sweep_job, jobs)
    try:
        for res in results:  # map preserves enumeration order
            total += 1
            counts[res["outcome"]] = counts.get(res["outcome"], 0) + 1
            print(_dump(res), flush=False)
    finally:
        if pool is not None:
            pool.shutdown()
    bad = counts.get("Error", 0) + counts.get(Outcome.NOT_FORCED.value, 0)
    print(_dump({"summary": True, "case": Case.parse(args.case).value, "jobs": total,
                 "counts": dict(sorted(counts.items()))}))
    return 0 if bad == 0 else 1


def _load_rep(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    return parse_representation(text)


def cmd_verify_rep(args) -> int:
    rep = _load_rep(args.file)
    report = verify_relations(rep)
    if report.passed:
        text = "pass"
    else:
        text = "\n".join(f"fail ({f.label}) {f.relator}" for f in report.failures)
    _emit(args, text, {"pass": report.passed,
                       "failures": [{"label": f.label, "relator": str(f.relator),
                                     "residue": f.residue.to_strings()}
                                    for f in report.failures]})
    return 0 if report.passed else 1


def cmd_vu_word(args) -> int:
    rep = _load_rep(args.file)
    report = analyze_word(rep, Word.parse(args.word))
    if report.verdict:
        text = f"VU (witness order {report.witness_order})"
    else:
        text = "not VU"
    _emit(args, text, report.to_json())
    return 0 if report.verdict else 1


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="vucert", description="Exact certificates for virtually unipotent "
                     "elements in one-edge and one-loop graph-manifold groups.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, matrix=True):
        p.add_argument("--json", action="store_true", help="emit one JSON document")
        if matrix:
            p.add_argument("--case", required=True, choices=["loop", "edge"])
            p.add_argument("--matrix", required=True, help="gluing matrix as a,b,c,d")

    p = sub.add_parser("npc", help="decide the NPC criterion")
    common(p)
    p.set_defaults(func=cmd_npc)

    p = sub.add_parser("certificate", help="print certificate words")
    common(p)
    p.add_argument("--normalize", action="store_true",
                   help="normalize the matrix first (edge: inversion and sign moves)")
    p.set_defaults(func=cmd_certificate)

    for name, func, helptext in (("presentation", cmd_presentation, "print the presentation"),
                                 ("h1", cmd_h1, "first homology and the image of a word")):
        p = sub.add_parser(name, help=helptext)
        common(p)
        p.add_argument("--genus", type=int, required=True)
        p.add_argument("--genus2", type=int)
        if name == "h1":
            p.add_argument("--word", help="word such as f^2*z")
        p.set_defaults(func=func)

    p = sub.add_parser("force", help="run a forcing argument with oracle confirmation")
    common(p)
    p.add_argument("--pattern", required=True, help="block pattern such as 1,1;1,1")
    p.add_argument("--trace", action="store_true", help="print the proof trace (text mode)")
    p.set_defaults(func=cmd_force)

    p = sub.add_parser("sweep", help="run forcing checks over an enumeration grid")
    p.add_argument("--case", required=True, choices=["loop", "edge"])
    p.add_argument("--bound", type=int, required=True, help="entry bound for B")
    p.add_argument("--b-max", type=int, default=None, help="restrict b to [1, b-max]")
    p.add_argument("--max-k", type=int, default=2, help="max k (and l for edge)")
    p.add_argument("--max-dim", type=int, default=4, help="loop: max total dimension")
    p.add_argument("--max-entry", type=int, default=2, help="edge: max pattern entry")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.set_defaults(func=cmd_sweep, json=True)

    p = sub.add_parser("verify-rep", help="check a representation file against its relations")
    p.add_argument("file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify_rep)

    p = sub.add_parser("vu-word", help="virtual-unipotence verdict for a word")
    p.add_argument("file")
    p.add_argument("--word", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_vu_word)
    return parser


def _glue_negative_values(argv):
    # argparse reads "-1,2,0,1" as an option; rewrite it as "--matrix=-1,2,0,1"
    out = []
    i = 0
    while i < len(argv):
        if argv[i] == "--matrix" and i + 1 < len(argv) and re.match(r"^-\d", argv[i + 1]):
            out.append(f"--matrix={argv[i + 1]}")
            i += 2
            continue
        out.append(argv[i])
        i += 1
    return out


def main(argv=None) -> int:
    argv = _glue_negative_values(list(sys.argv[1:] if argv is None else argv))
    want_json = "--json" in argv
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except (UsageError, InputError, OverflowError) as exc:
        msg = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
        if want_json:
            print(_dump({"error": msg}))
        print(f"vucert: error: {msg}", file=sys.stderr)
        return 2


def run(argv) -> tuple[int, str]:
    """Run the CLI in-process; returns ``(exit code, captured stdout)``."""
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main(argv)
    return code, out.getvalue()


if __name__ == "__main__":
    sys.exit(main())

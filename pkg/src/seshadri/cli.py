"""``seshadri`` command line.

Exit codes: 0 success, 1 mathematical inconsistency or oracle failure,
2 unreadable, unparseable or invalid input.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Optional, Sequence, TextIO

from .engine import Status, evaluate, explain
from .model import AVSpec, validate
from .schema import SchemaError, load_instance, result_to_dict

EXIT_OK = 0
EXIT_INCONSISTENT = 1
EXIT_INPUT = 2


class InputError(Exception):
    """The file could not be turned into an instance."""


def _load(path: str | Path) -> AVSpec:
    try:
        return load_instance(path)
    except OSError as exc:
        raise InputError(f"{path}: cannot read: {exc.strerror or exc}") from exc
    except UnicodeDecodeError as exc:
        raise InputError(f"{path}: not UTF-8 ({exc.reason} at byte {exc.start})") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: parse error: {exc.msg}") from exc
    except SchemaError as exc:
        raise InputError(f"{path}: schema error at {exc}") from exc


def _diagnostics_text(path: str, problems) -> str:
    return "\n".join(f"{path}: invalid: {p}" for p in problems)


def cmd_validate(path: str, out: TextIO) -> int:
    try:
        spec = _load(path)
    except InputError as exc:
        print(exc, file=sys.stderr)
        return EXIT_INPUT
    problems = validate(spec)
    if problems:
        print(_diagnostics_text(path, problems), file=out)
        return EXIT_INCONSISTENT
    print(f"{path}: valid ({spec.id}, dim {spec.dim}, L^{spec.dim} = {spec.degree})", file=out)
    return EXIT_OK


def _text_report(path: str, result) -> str:
    d = result_to_dict(result)
    lines = [f"{path}: {result.spec_id}: {d['status']}"]
    if result.status is Status.EXACT:
        lines.append(f"  value = {d['value']} (≈ {d['value_decimal']['decimal']}, approximate)")
    elif result.status is Status.BOUNDS:
        lines.append(f"  lo = {result.lo} (≈ {d['lo']['decimal']}, approximate)")
        lines.append(f"  hi = {result.hi} (≈ {d['hi']['decimal']}, approximate)")
    if d["candidate_set"] is not None:
        lines.append("  candidate set = {" + ", ".join(d["candidate_set"]) + "}")
    if d["below_threshold"] is not None:
        lines.append(f"  below (L^n)^(1/n)/n: {'yes' if d['below_threshold'] else 'no'}")
    lines.extend(f"  inconsistency: {x}" for x in result.diagnostics)
    lines.extend(f"  blocked: {x}" for x in result.blocked)
    return "\n".join(lines)


def _evaluate_file(path: str):
    spec = _load(path)
    problems = validate(spec)
    if problems:
        return spec, problems, None
    return spec, [], evaluate(spec, check=False)


def cmd_compute(path: str, fmt: str, out: TextIO) -> int:
    try:
        _, problems, result = _evaluate_file(path)
    except InputError as exc:
        print(exc, file=sys.stderr)
        return EXIT_INPUT
    if problems:
        print(_diagnostics_text(path, problems), file=sys.stderr)
        return EXIT_INCONSISTENT
    if fmt == "json":
        out.write(json.dumps(result_to_dict(result), indent=2, ensure_ascii=False) + "\n")
    else:
        print(_text_report(path, result), file=out)
    return EXIT_INCONSISTENT if result.is_inconsistent else EXIT_OK


def cmd_explain(path: str, out: TextIO) -> int:
    try:
        _, problems, result = _evaluate_file(path)
    except InputError as exc:
        print(exc, file=sys.stderr)
        return EXIT_INPUT
    if problems:
        print(_diagnostics_text(path, problems), file=sys.stderr)
        return EXIT_INCONSISTENT
    print(explain(result), file=out)
    return EXIT_INCONSISTENT if result.is_inconsistent else EXIT_OK


def _batch_one(path: str) -> dict:
    """Worker for ``batch``; returns a plain dict so it pickles."""
    try:
        _, problems, result = _evaluate_file(path)
    except InputError as exc:
        return {"file": path, "outcome": "error", "error": str(exc)}
    if problems:
        return {"file": path, "outcome": "invalid", "diagnostics": [str(p) for p in problems]}
    return {
        "file": path,
        "outcome": result.status.value,
        "result": result_to_dict(result),
        "text": _text_report(path, result),
    }


OUTCOMES = ("exact", "bounds", "inconsistent", "invalid", "error")


def cmd_batch(directory: str, fmt: str, out: TextIO, out_dir: Optional[str] = None, jobs: int = 1) -> int:
    root = Path(directory)
    if not root.is_dir():
        print(f"{directory}: not a directory", file=sys.stderr)
        return EXIT_INPUT
    files = sorted(str(p) for p in root.glob("*.json"))
    if jobs > 1 and len(files) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            entries = list(pool.map(_batch_one, files))
    else:
        entries = [_batch_one(f) for f in files]

    counts = Counter(e["outcome"] for e in entries)
    summary = {k: counts.get(k, 0) for k in OUTCOMES}
    summary["total"] = len(entries)

    if out_dir is not None:
        dest = Path(out_dir)
        dest.mkdir(parents=True, exist_ok=True)
        for e in entries:
            if "result" in e:
                name = Path(e["file"]).stem + (".result.json" if fmt == "json" else ".result.txt")
                body = json.dumps(e["result"], indent=2, ensure_ascii=False) if fmt == "json" else e["text"]
                (dest / name).write_text(body + "\n", encoding="utf-8")

    if fmt == "json":
        doc = {
            "results": [{k: v for k, v in e.items() if k != "text"} for e in entries],
            "summary": summary,
        }
        out.write(json.dumps(doc, indent=2, ensure_ascii=False) + "\n")
    else:
        for e in entries:
            if e["outcome"] == "error":
                print(e["error"], file=out)
            elif e["outcome"] == "invalid":
                print(_diagnostics_text(e["file"], e["diagnostics"]), file=out)
            else:
                print(e["text"], file=out)
        print("summary: " + ", ".join(f"{k} {summary[k]}" for k in OUTCOMES) + f" (of {len(entries)} files)", file=out)

    if summary["inconsistent"]:
        return EXIT_INCONSISTENT
    if summary["invalid"] or summary["error"]:
        return EXIT_INPUT
    return EXIT_OK


def cmd_selfcheck(iterations: int, seed: int, out: TextIO) -> int:
    from . import oracle

    stats: Counter = Counter()
    for i in range(iterations):
        s = seed + i
        try:
            a, b = oracle.random_radical_pair(random.Random(s))
            fc = oracle.float_check(a, b, 50)
            if not fc.agree:
                raise oracle.OracleFailure(f"radical comparison: {a} vs {b}: {fc}")
            stats["ties" if fc.tie else "float_agree"] += 1

            inst = oracle.random_instance(s)
            res = oracle.permuted_evaluate(inst.spec, s)
            stats[f"confluent_{res.status.value}"] += 1
            if inst.planted:
                stats["planted_inconsistent" if res.is_inconsistent else "planted_missed"] += 1

            world = oracle.attested_instance(s)
            check = oracle.exhaustive_min_check(world.spec)
            if not check.passed:
                raise oracle.OracleFailure(f"descent oracle on {world.spec.id}: {check}")
            stats["descent_vacuous" if check.expected == "n/a" else "descent_checked"] += 1
        except oracle.OracleFailure as exc:
            print(f"selfcheck FAILED at seed {s}: {exc}", file=out)
            print(f"reproduce with: seshadri selfcheck --iters 1 --seed {s}", file=out)
            return EXIT_INCONSISTENT
    detail = ", ".join(f"{k} {v}" for k, v in sorted(stats.items()))
    print(f"selfcheck passed: {iterations} iterations from seed {seed}" + (f" ({detail})" if detail else ""), file=out)
    return EXIT_OK


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="seshadri", description="Certified Seshadri constants of abelian varieties.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check an instance file")
    p.add_argument("file")

    p = sub.add_parser("compute", help="evaluate an instance")
    p.add_argument("file")
    p.add_argument("--format", choices=("json", "text"), default="text")

    p = sub.add_parser("explain", help="evaluate and print the proof tree")
    p.add_argument("file")

    p = sub.add_parser("batch", help="evaluate every *.json file in a directory")
    p.add_argument("dir")
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.add_argument("--out", help="also write one result file per instance here")
    p.add_argument("--jobs", type=_positive_int, default=1)

    p = sub.add_parser("selfcheck", help="run the oracle suite on generated instances")
    p.add_argument("--iters", type=_positive_int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    out = sys.stdout
    if args.command == "validate":
        return cmd_validate(args.file, out)
    if args.command == "compute":
        return cmd_compute(args.file, args.format, out)
    if args.command == "explain":
        return cmd_explain(args.file, out)
    if args.command == "batch":
        return cmd_batch(args.dir, args.format, out, args.out, args.jobs)
    return cmd_selfcheck(args.iters, args.seed, out)


if __name__ == "__main__":
    sys.exit(main())

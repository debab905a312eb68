"""affembed command-line entry point."""

from __future__ import annotations

import argparse
import json
import os
import sys

from .tasks import Options, run_text


def build_parser():
    p = argparse.ArgumentParser(
        prog="affembed",
        description="Embed, normalize and trace affine curve subalgebras with certificates.")
    p.add_argument("input", nargs="?", help="problem file (default: standard input)")
    p.add_argument("--input", dest="input_opt", metavar="FILE", help="problem file")
    out = p.add_mutually_exclusive_group()
    out.add_argument("--json", action="store_true", help="print the JSON run report")
    out.add_argument("--trace", action="store_true", help="print the step-by-step narrative")
    p.add_argument("--bound", type=int, help="override the filtration bound N")
    p.add_argument("--seed", type=int, help="specialization seed")
    p.add_argument("--retries", type=int, help="specialization retry budget")
    p.add_argument("--monomial-limit", type=int, metavar="M",
                   help="largest number of generator monomials per filtration basis "
                        "(default 20000)")
    p.add_argument("--no-timing", action="store_true",
                   help="omit timing from JSON output (byte-identical reruns)")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    path = args.input_opt or args.input
    if path in (None, "-"):
        text, base = sys.stdin.read(), os.getcwd()
    else:
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except (OSError, UnicodeDecodeError) as exc:
            print(f"affembed: cannot read {path}: {exc}", file=sys.stderr)
            return 2
        base = os.path.dirname(os.path.abspath(path))
    opts = Options(bound=args.bound, seed=args.seed, retries=args.retries,
                   limit=args.monomial_limit, base_dir=base)
    report = run_text(text, opts)
    if args.json:
        print(json.dumps(report.to_json(include_timing=not args.no_timing), indent=2))
    else:
        for line in report.trace:
            print(line)
        print(f"status: {report.status}", file=sys.stderr)
    return report.exit_code


if __name__ == "__main__":
    raise SystemExit(main())

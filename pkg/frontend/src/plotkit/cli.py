"""Command-line entry point: render a figure from a JSON spec file or flags."""

from __future__ import annotations

import argparse
import json
import sys

from .figures import FigureKind, FigureSpec, PlotkitError, render

EXIT_OK = 0
EXIT_RUN_ERROR = 1
EXIT_USAGE = 2


def _spec_from_file(path: str) -> FigureSpec:
    try:
        with open(path, encoding="utf-8") as f:
            raw = json.load(f)
    except (OSError, json.JSONDecodeError) as exc:
        raise PlotkitError(f"cannot load spec {path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise PlotkitError(f"{path}: spec must be a JSON object")
    unknown = set(raw) - {"kind", "inputs", "out", "labels"}
    if unknown:
        raise PlotkitError(f"{path}: unknown spec field(s) {', '.join(sorted(unknown))}")
    return FigureSpec(
        kind=raw.get("kind", ""),
        inputs=list(raw.get("inputs", [])),
        out=str(raw.get("out", "")),
        labels=dict(raw.get("labels", {})),
    )


def cli_main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="plotkit",
        description="Render figures from slewsim telemetry, profile and sweep CSVs.",
    )
    parser.add_argument("--spec", help="JSON figure spec (kind, inputs, out, labels)")
    parser.add_argument("--kind", choices=[k.value for k in FigureKind])
    parser.add_argument("--input", action="append", default=[],
                        help="input CSV path (repeatable)")
    parser.add_argument("--out", help="output image path")
    parser.add_argument("--label", action="append", default=[], metavar="KEY=TEXT",
                        help="axis/title label override (repeatable)")
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else EXIT_OK

    try:
        if args.spec:
            spec = _spec_from_file(args.spec)
        else:
            if not args.kind or not args.input or not args.out:
                print("error: either --spec or all of --kind/--input/--out are required",
                      file=sys.stderr)
                return EXIT_USAGE
            labels = {}
            for item in args.label:
                key, sep, text = item.partition("=")
                if not sep:
                    print(f"error: --label expects KEY=TEXT, got {item!r}", file=sys.stderr)
                    return EXIT_USAGE
                labels[key] = text
            spec = FigureSpec(kind=args.kind, inputs=args.input, out=args.out, labels=labels)
        render(spec)
    except (PlotkitError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUN_ERROR
    print(f"wrote {spec.out}")
    return EXIT_OK


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()

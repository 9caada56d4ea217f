"""Command-line front end.

Wires the whole pipeline: read text (plus sidecar annotations when given,
shallow analysis otherwise), write the requested output, and optionally
compare it against a golden file.  Exit codes: 0 success, 1 usage error,
2 input parse/integrity error, 3 golden-check mismatch.
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile
from pathlib import Path

from .annotations import IntegrityError, SidecarError
from .config import Config, parse_config_file
from .emit import render_markup, render_tobi
from .pipeline import run_pipeline

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_MISMATCH = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="prosomark",
        description="Compile plain text into expressive speech-command markup "
                    "and symbolic prosodic annotation.")
    parser.add_argument("input", help="input text file")
    parser.add_argument("--sidecar", metavar="PATH",
                        help="clause-level annotation sidecar")
    parser.add_argument("--emit", choices=["markup", "tobi", "both", "groups"],
                        default=None, help="output kind (default: markup)")
    parser.add_argument("--config", metavar="PATH", help="flat key=value config file")
    parser.add_argument("--check", metavar="PATH",
                        help="compare output against a golden file")
    parser.add_argument("--title", choices=["auto", "force", "off"], default=None,
                        help="title detection mode")
    parser.add_argument("--out", metavar="PATH", default=None,
                        help="output file (default: stdout)")
    return parser


def golden_check(produced: str, golden: str) -> str:
    """Byte comparison; on mismatch, a positional report with a token diff."""
    if produced == golden:
        return ""
    p_lines = produced.splitlines()
    g_lines = golden.splitlines()
    for ln, (p, g) in enumerate(zip(p_lines, g_lines), start=1):
        if p == g:
            continue
        col = next((i for i, (a, b) in enumerate(zip(p, g), start=1) if a != b),
                   min(len(p), len(g)) + 1)
        p_toks = p.split()
        g_toks = g.split()
        tok = next(((a, b) for a, b in zip(p_toks, g_toks) if a != b),
                   (p_toks[-1] if p_toks else "", g_toks[-1] if g_toks else ""))
        return (f"mismatch at line {ln}, column {col}\n"
                f"expected: {tok[1]!r}\n"
                f"actual:   {tok[0]!r}\n"
                f"expected line: {g}\n"
                f"actual line:   {p}")
    if len(p_lines) != len(g_lines):
        return (f"mismatch: produced {len(p_lines)} lines, "
                f"golden has {len(g_lines)}")
    return "mismatch: texts differ in trailing whitespace"


def _write_output(text: str, out_path: str | None):
    if out_path is None:
        sys.stdout.write(text)
        return
    # never leave a partial file behind: write to a sibling then rename
    directory = os.path.dirname(os.path.abspath(out_path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".prosomark-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, out_path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def run(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code or 0
        return EXIT_OK if code == 0 else EXIT_USAGE

    try:
        cfg = parse_config_file(args.config) if args.config else Config()
    except (OSError, ValueError) as exc:
        print(f"prosomark: config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.emit:
        cfg.emit_mode = args.emit
    if args.title:
        cfg.title_mode = args.title

    try:
        cfg.load_lexica()
    except OSError as exc:
        print(f"prosomark: {exc}", file=sys.stderr)
        return EXIT_USAGE

    try:
        text = Path(args.input).read_text(encoding="utf-8")
    except OSError as exc:
        print(f"prosomark: cannot read input: {exc}", file=sys.stderr)
        return EXIT_USAGE

    sidecar_text = None
    if args.sidecar:
        try:
            sidecar_text = Path(args.sidecar).read_text(encoding="utf-8")
        except OSError as exc:
            print(f"prosomark: cannot read sidecar: {exc}", file=sys.stderr)
            return EXIT_USAGE

    try:
        result = run_pipeline(text, sidecar_text, cfg)
    except (SidecarError, IntegrityError) as exc:
        print(f"prosomark: {exc}", file=sys.stderr)
        return EXIT_INPUT

    for d in result.diagnostics:
        print(f"prosomark: note: {d}", file=sys.stderr)

    if cfg.emit_mode == "markup":
        output = render_markup(result.doc, result.script)
    elif cfg.emit_mode == "tobi":
        output = render_tobi(result.doc, result.script)
    elif cfg.emit_mode == "both":
        output = (render_markup(result.doc, result.script) + "\n"
                  + render_tobi(result.doc, result.script))
    else:
        output = result.groups_text()

    _write_output(output, args.out)

    if args.check:
        try:
            golden = Path(args.check).read_text(encoding="utf-8")
        except OSError as exc:
            print(f"prosomark: cannot read golden file: {exc}", file=sys.stderr)
            return EXIT_USAGE
        report = golden_check(output, golden)
        if report:
            print(report, file=sys.stderr)
            return EXIT_MISMATCH
    return EXIT_OK


def main() -> None:
    sys.exit(run(sys.argv[1:]))

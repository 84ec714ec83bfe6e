"""imgprov: trace which platform a downloaded photo passed through.

Every subcommand writes one JSON document to stdout and diagnostics to
stderr. Exit codes: 0 success, 1 analysis-level failure (no match, not a
JPEG, nothing found), 2 usage error, 3 I/O, config or transport error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import __version__
from .config import ConfigError, load_config
from .fbid import VerifierFailure, candidate_fbids, recover_fbid
from .flickr_time import (Anchor, AnchorIndex, CorruptIndex, NoAnchors,
                          estimate_upload_date, load_index, plan_crawl, save_index)
from .jpeg_meta import MalformedJpeg, parse_jpeg
from .naming import classify_filename
from .netprobe import (EXISTS_PUBLIC, NOT_FOUND, PRIVATE, Politeness, UrllibTransport,
                       facebook_photo_url, fbid_verifier, flickr_photo_url, probe)
from .provenance import classify_platform, extract_signals
from .upload_diff import diff

log = logging.getLogger("imgprov")

EXIT_OK, EXIT_ANALYSIS, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


class _Failure(Exception):
    def __init__(self, code: int, message: str, document: dict | None = None):
        super().__init__(message)
        self.code = code
        self.document = document


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise _Failure(EXIT_USAGE, f"{self.prog}: error: {message}")


def _positive_int(text: str) -> int:
    if not text.isascii() or not text.isdigit() or int(text) < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return int(text)


def _non_negative_int(text: str) -> int:
    if not text.isascii() or not text.isdigit():
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text!r}")
    return int(text)


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="imgprov", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"imgprov {__version__}")
    parser.add_argument("--config", help="config JSON (default: $IMGPROV_CONFIG)")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging to stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    p = sub.add_parser("analyze", help="fingerprint one downloaded JPEG")
    p.add_argument("file")
    p.add_argument("--index", help="Flickr anchor index for date estimation")
    p.add_argument("-k", type=_positive_int, default=50)

    p = sub.add_parser("parse-name", help="parse a filename against platform conventions")
    p.add_argument("name")

    p = sub.add_parser("recover-fbid", help="list or verify fbid candidates for yy")
    p.add_argument("yy", type=_non_negative_int)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--verify", action="store_true", help="probe facebook.com for each candidate")
    mode.add_argument("--offline", action="store_true", help="list candidates only (default)")

    p = sub.add_parser("estimate-date", help="estimate a Flickr upload date from its photo ID")
    p.add_argument("photo_id", type=_positive_int)
    p.add_argument("--index", required=True)
    p.add_argument("-k", type=_positive_int, default=50)

    p = sub.add_parser("crawl", help="probe Flickr IDs around a center and grow the index")
    p.add_argument("center", type=_positive_int)
    p.add_argument("--window", type=_non_negative_int, required=True)
    p.add_argument("--stride", type=_positive_int, default=1)
    p.add_argument("--direction", choices=("both", "up", "down"), default="both")
    p.add_argument("--index", required=True)
    p.add_argument("--dry-run", action="store_true")

    p = sub.add_parser("diff", help="compare a file before and after upload")
    p.add_argument("before")
    p.add_argument("after")

    p = sub.add_parser("config", help="configuration utilities")
    p.add_argument("action", choices=("dump",))
    return parser


def _read_jpeg(path: str):
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise _Failure(EXIT_IO, f"cannot read {path}: {exc.strerror or exc}") from None
    try:
        return parse_jpeg(data)
    except MalformedJpeg as exc:
        raise _Failure(EXIT_ANALYSIS, f"{path}: not analyzable: {exc}") from None


def _load_index(path: str, missing_ok: bool = False) -> AnchorIndex:
    if missing_ok and not os.path.exists(path):
        return AnchorIndex()
    try:
        return load_index(path)
    except CorruptIndex as exc:
        raise _Failure(EXIT_IO, f"corrupt index: {exc}") from None
    except OSError as exc:
        raise _Failure(EXIT_IO, f"cannot read index {path}: {exc.strerror or exc}") from None


def cmd_analyze(args, cfg, transport):
    meta = _read_jpeg(args.file)
    names = classify_filename(os.path.basename(args.file))
    signals = extract_signals(meta, names, cfg)
    verdict = classify_platform(signals, cfg)
    doc = {
        "command": "analyze",
        "input": args.file,
        "jpeg": meta.to_dict(),
        "names": names.to_dict(),
        "signals": signals.to_dict(),
        "verdict": verdict.to_dict(),
        "fbid_candidates": None,
        "date_estimate": None,
    }
    if names.facebook is not None and names.facebook.yy is not None:
        cset = candidate_fbids(int(names.facebook.yy))
        doc["fbid_candidates"] = cset.to_dict(facebook_photo_url)
    if args.index and names.flickr:
        index = _load_index(args.index)
        try:
            est = estimate_upload_date(int(names.flickr[0].photo_id), index, args.k)
            doc["date_estimate"] = est.to_dict()
        except NoAnchors as exc:
            log.warning("no date estimate: %s", exc)
    return EXIT_OK, doc


def cmd_parse_name(args, cfg, transport):
    if "/" in args.name or "\\" in args.name:
        raise _Failure(EXIT_USAGE, "parse-name expects a bare filename")
    verdict = classify_filename(args.name)
    doc = {"command": "parse-name", **verdict.to_dict()}
    return (EXIT_ANALYSIS if verdict.generic_unchanged else EXIT_OK), doc


def cmd_recover_fbid(args, cfg, transport):
    cset = candidate_fbids(args.yy)
    doc = {"command": "recover-fbid", "mode": "verify" if args.verify else "offline",
           **cset.to_dict(facebook_photo_url), "recovery": None}
    if not args.verify:
        return EXIT_OK, doc
    verifier = fbid_verifier(transport or UrllibTransport(), Politeness.from_config(cfg), cfg)
    try:
        rec = recover_fbid(args.yy, verifier)
    except VerifierFailure as exc:
        doc["recovery"] = {"fbid": None, "factor": None, "probes": exc.probes,
                           "exhausted": False, "failed_at_k": exc.last_k}
        raise _Failure(EXIT_IO, str(exc), doc) from None
    doc["recovery"] = {"fbid": rec.fbid, "factor": rec.factor, "probes": rec.probes,
                       "exhausted": rec.exhausted, "failed_at_k": None}
    if rec.fbid is not None:
        doc["recovery"]["url"] = facebook_photo_url(rec.fbid)
    return (EXIT_ANALYSIS if rec.exhausted else EXIT_OK), doc


def cmd_estimate_date(args, cfg, transport):
    index = _load_index(args.index)
    try:
        est = estimate_upload_date(args.photo_id, index, args.k)
    except NoAnchors as exc:
        raise _Failure(EXIT_ANALYSIS, str(exc)) from None
    return EXIT_OK, {"command": "estimate-date", "k": args.k, **est.to_dict()}


def cmd_crawl(args, cfg, transport):
    index = _load_index(args.index, missing_ok=True)
    plan = plan_crawl(args.center, args.window, args.stride, index, args.direction)
    doc = {"command": "crawl", "center": args.center, "window": args.window,
           "stride": args.stride, "direction": args.direction, "dry_run": args.dry_run,
           "planned": plan, "count": len(plan), "result": None}
    if args.dry_run:
        return EXIT_OK, doc

    pol = Politeness.from_config(cfg)
    transport = transport or UrllibTransport()
    found, errors, undated = [], [], []
    try:
        for pid in plan:
            res = probe(transport, flickr_photo_url(pid), pol, cfg)
            if res.status == EXISTS_PUBLIC and res.upload_date is not None:
                found.append(Anchor(pid, "public", date=res.upload_date))
            elif res.status == EXISTS_PUBLIC:
                undated.append(pid)
            elif res.status in (PRIVATE, NOT_FOUND):
                found.append(Anchor(pid, res.status))
            else:
                errors.append(pid)
    except KeyboardInterrupt:
        log.warning("interrupted; saving %d results", len(found))
    conflicts = index.ingest(found)
    try:
        save_index(index, args.index)
    except OSError as exc:
        raise _Failure(EXIT_IO, f"cannot write index {args.index}: {exc}") from None
    doc["result"] = {
        "added": len(found) - len(conflicts),
        "conflicts": [{"id": c.incoming.photo_id, "resolution": c.resolution} for c in conflicts],
        "transport_errors": errors,
        "undated": undated,
        "index_size": len(index),
    }
    return (EXIT_IO if errors and not found else EXIT_OK), doc


def cmd_diff(args, cfg, transport):
    before = _read_jpeg(args.before)
    after = _read_jpeg(args.after)
    report = diff(before, after, before_name=os.path.basename(args.before),
                  after_name=os.path.basename(args.after))
    return EXIT_OK, {"command": "diff", "before": args.before, "after": args.after,
                     **report.to_dict()}


def cmd_config(args, cfg, transport):
    return EXIT_OK, {"command": "config", "config": cfg}


COMMANDS = {
    "analyze": cmd_analyze,
    "parse-name": cmd_parse_name,
    "recover-fbid": cmd_recover_fbid,
    "estimate-date": cmd_estimate_date,
    "crawl": cmd_crawl,
    "diff": cmd_diff,
    "config": cmd_config,
}


def render(doc: dict) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=True, allow_nan=False) + "\n"


def main(argv=None, *, transport=None, stdout=None, stderr=None) -> int:
    """Run one subcommand; `transport` replaces live HTTP when given."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except _Failure as exc:
        print(exc, file=stderr)
        return exc.code
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)

    handler = logging.StreamHandler(stderr)
    handler.setFormatter(logging.Formatter("imgprov: %(levelname)s: %(message)s"))
    log.addHandler(handler)
    log.setLevel(logging.DEBUG if args.verbose else logging.WARNING)
    try:
        try:
            cfg = load_config(args.config)
        except ConfigError as exc:
            raise _Failure(EXIT_IO, f"bad config: {exc}") from None
        except OSError as exc:
            raise _Failure(EXIT_IO, f"cannot read config: {exc}") from None
        code, doc = COMMANDS[args.command](args, cfg, transport)
    except _Failure as exc:
        print(f"imgprov: {exc}", file=stderr)
        if exc.document is not None:
            stdout.write(render(exc.document))
        return exc.code
    finally:
        log.removeHandler(handler)
    stdout.write(render(doc))
    return code


if __name__ == "__main__":
    sys.exit(main())

"""Command line interface.

Subcommands: ingest, query, delete, list, eval, serve. The data directory
and admin token fall back to the FRAMEFINDER_DATA_DIR and
FRAMEFINDER_ADMIN_TOKEN environment variables.
"""

from __future__ import annotations

import argparse
import os
import secrets
import sys
from pathlib import Path

from .catalog import Catalog
from .errors import FrameFinderError
from .retrieval import DEFAULT_KS, FEATURE_KINDS, WeightProfile
from .service import Engine, EngineConfig

DATA_DIR_ENV = "FRAMEFINDER_DATA_DIR"
ADMIN_TOKEN_ENV = "FRAMEFINDER_ADMIN_TOKEN"


def _data_dir(args) -> str:
    return args.data_dir or os.environ.get(DATA_DIR_ENV) or "framefinder-data"


def _engine(args) -> Engine:
    return Engine(Catalog(_data_dir(args)), EngineConfig())


def _weights(args) -> WeightProfile | None:
    if getattr(args, "weights", None) is None:
        return None
    return WeightProfile(tuple(args.weights))


def cmd_ingest(args) -> int:
    engine = _engine(args)
    report = engine.ingest_dir(args.name, args.frame_dir)
    print(
        f"video {report.v_id}: {report.frames_in} frames in, "
        f"{report.key_frames_kept} key frames kept"
    )
    return 0


def cmd_query(args) -> int:
    engine = _engine(args)
    hits = engine.search(
        Path(args.image).read_bytes(),
        k=args.k,
        weights=_weights(args),
        exhaustive=args.exhaustive,
    )
    feature_cols = "  ".join(f"{kind:>11}" for kind in FEATURE_KINDS)
    print(f"{'rank':>4}  {'frame':>6}  {'video':>6}  {'combined':>9}  {feature_cols}")
    for rank, h in enumerate(hits, start=1):
        feats = "  ".join(f"{h.per_feature[kind]:11.4f}" for kind in FEATURE_KINDS)
        print(f"{rank:>4}  {h.frame_id:>6}  {h.video_id:>6}  {h.combined:9.4f}  {feats}")
    return 0


def cmd_delete(args) -> int:
    engine = _engine(args)
    engine.catalog.delete_video(args.v_id)
    print(f"deleted video {args.v_id}")
    return 0


def cmd_list(args) -> int:
    engine = _engine(args)
    videos = engine.catalog.list_videos()
    if not videos:
        print("catalog is empty")
        return 0
    for v in videos:
        print(f"{v.v_id:>6}  {len(v.keyframe_ids):>4} key frames  {v.ingested_at}  {v.v_name}")
    return 0


def cmd_eval(args) -> int:
    engine = _engine(args)
    queries = []
    for line_no, line in enumerate(Path(args.labels_file).read_text().splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) < 2:
            print(f"error: labels line {line_no} needs a path and at least one id", file=sys.stderr)
            return 2
        queries.append((Path(tokens[0]).read_bytes(), {int(t) for t in tokens[1:]}))
    ks = tuple(int(k) for k in args.ks.split(","))
    report = engine.evaluate(queries, ks=ks, weights=_weights(args))
    print(report.to_text(), end="")
    if args.csv:
        Path(args.csv).write_text(report.to_csv())
        print(f"csv written to {args.csv}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .http_api import create_app

    token = args.admin_token or os.environ.get(ADMIN_TOKEN_ENV)
    if not token:
        token = secrets.token_hex(16)
        print(f"generated admin token: {token}")
    host, _, port = args.addr.partition(":")
    engine = _engine(args)
    app = create_app(engine, admin_token=token, ui_dir=args.ui_dir)
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8000), log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="framefinder", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--data-dir", default=None, help=f"catalog directory (env {DATA_DIR_ENV})")

    p = sub.add_parser("ingest", help="ingest a directory of ordered frame files as one video")
    p.add_argument("name")
    p.add_argument("frame_dir")
    add_common(p)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("query", help="query by example image")
    p.add_argument("image")
    p.add_argument("--k", type=int, default=20)
    p.add_argument("--weights", type=float, nargs=len(FEATURE_KINDS), metavar="W",
                   help=f"feature weights in order: {' '.join(FEATURE_KINDS)}")
    p.add_argument("--exhaustive", action="store_true", help="skip the range-index prefilter")
    add_common(p)
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("delete", help="delete a video and its key frames")
    p.add_argument("v_id", type=int)
    add_common(p)
    p.set_defaults(func=cmd_delete)

    p = sub.add_parser("list", help="list stored videos")
    add_common(p)
    p.set_defaults(func=cmd_list)

    p = sub.add_parser("eval", help="precision report from a labels file")
    p.add_argument("labels_file", help="one query per line: image path then relevant frame ids")
    p.add_argument("--ks", default=",".join(str(k) for k in DEFAULT_KS))
    p.add_argument("--weights", type=float, nargs=len(FEATURE_KINDS), metavar="W")
    p.add_argument("--csv", default=None, help="also write the report as CSV to this path")
    add_common(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--addr", default="127.0.0.1:8000")
    p.add_argument("--admin-token", default=None, help=f"shared admin secret (env {ADMIN_TOKEN_ENV})")
    p.add_argument("--ui-dir", default=None, help="serve a built web UI from this directory")
    add_common(p)
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FrameFinderError as e:
        print(f"error: {type(e).__name__.removesuffix('Error')}: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

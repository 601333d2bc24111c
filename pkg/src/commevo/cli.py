"""Command-line pipeline: slice, detect, track, chains, bench, score."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional, Sequence

from . import asur, bench, chains, communities, events, ged, palla, temporal
from ._util import write_text

log = logging.getLogger("commevo")

EXIT_OK = 0
EXIT_DATA = 1
EXIT_CONFIG = 2


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    input: Optional[str] = None
    groups: Optional[str] = None
    mode: str = "disjoint"
    window: float = 1.0
    step: Optional[float] = None
    origin: Optional[float] = None
    detector: str = "lpa"
    k: int = 3
    min_size: int = 3
    method: str = "ged"
    alpha: float = 0.5
    beta: float = 0.5
    kappa: float = 0.5
    importance: str = "uniform"
    seed: int = 0
    out: str = "out"
    json: bool = False
    lenient: bool = False
    delimiter: str = "comma"

    def validate(self) -> None:
        if self.method == "palla" and self.detector != "cpm":
            raise ConfigError("method palla requires --detector cpm (with the same --k)")
        if self.detector == "import" and not self.groups:
            raise ConfigError("--detector import needs --groups")
        if self.detector not in ("lpa", "cpm", "import"):
            raise ConfigError(f"unknown detector {self.detector!r}")
        if self.method not in ("ged", "asur", "palla"):
            raise ConfigError(f"unknown method {self.method!r}")
        if self.min_size < 2:
            raise ConfigError("--min-size must be at least 2")
        try:
            self.policy()
            self.ged_params()
            asur.AsurParams(self.kappa)
            if self.detector == "cpm":
                palla.PallaParams(self.k)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    def policy(self) -> temporal.SlicingPolicy:
        return temporal.SlicingPolicy(self.mode, self.window, self.step, self.origin)

    def ged_params(self) -> ged.GedParams:
        measure = "in_group_degree" if self.importance == "degree" else self.importance
        return ged.GedParams(self.alpha, self.beta, importance_measure=measure)

    @property
    def sep(self) -> str:
        return "\t" if self.delimiter == "tab" else ","


def _emit(out: Path, name: str, text: str) -> Path:
    path = out / name
    write_text(path, text)
    return path


def _write_config(out: Path, command: str, payload: dict) -> None:
    text = json.dumps({"command": command, **payload}, indent=2, sort_keys=True) + "\n"
    _emit(out, "config.json", text)


def _load_network(cfg: RunConfig) -> temporal.TemporalSocialNetwork:
    edges = temporal.ingest_edges(cfg.input, lenient=cfg.lenient)
    tsn = temporal.slice_edges(edges, cfg.policy())
    print(f"slice: {len(edges)} edges -> {tsn.m} snapshots")
    return tsn


def _groupings(cfg: RunConfig, tsn) -> list:
    if cfg.detector == "import":
        gs = communities.import_groupings(cfg.groups, tsn)
    else:
        gs = communities.detect_all(tsn, cfg.detector, k=cfg.k, min_size=cfg.min_size, seed=cfg.seed)
    print(f"detect ({cfg.detector}): {sum(len(g) for g in gs)} communities over {len(gs)} timeframes")
    return gs


def track(tsn, groupings, cfg: RunConfig) -> list:
    if cfg.method == "ged":
        return ged.run_ged(groupings, tsn, cfg.ged_params())
    if cfg.method == "asur":
        return asur.run_asur(groupings, asur.AsurParams(cfg.kappa), tsn.m)
    return palla.run_palla_all(tsn, groupings, palla.PallaParams(cfg.k))


def run_pipeline(cfg: RunConfig) -> dict:
    """slice -> detect/import -> track -> chains; returns the paths written."""
    cfg.validate()
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    tsn = _load_network(cfg)
    groupings = _groupings(cfg, tsn)
    evs = track(tsn, groupings, cfg)
    print(f"track ({cfg.method}): {len(evs)} events")
    lineage = chains.build_lineage(evs, groupings)
    chs = chains.extract_chains(lineage)
    print(f"chains: {len(chs)}")

    written = {
        "snapshots": _emit(out, "snapshots.tsv", temporal.format_snapshot_summary(tsn)),
        "groupings": _emit(out, "groupings.txt", communities.format_groupings(groupings)),
        "events": _emit(out, "events.tsv", events.format_events(evs)),
        "chains": _emit(out, "chains.csv" if cfg.sep == "," else "chains.tsv",
                        chains.export_chain_table(chs, tsn.m, cfg.sep)),
    }
    if cfg.json:
        written["groupings_json"] = _emit(out, "groupings.json", communities.groupings_to_json(groupings))
        written["events_json"] = _emit(out, "events.json", events.events_to_json(evs))
        written["chains_json"] = _emit(out, "chains.json", chains.chains_to_json(chs))
        written["snapshots_json"] = _emit(out, "snapshots.json", _snapshots_json(tsn))
    _write_config(out, "track", asdict(cfg))
    return written


def _snapshots_json(tsn) -> str:
    rows = [
        {"index": s.index, "t_start": s.interval[0], "t_end": s.interval[1], "nodes": len(s.nodes), "edges": len(s.edges)}
        for s in tsn
    ]
    return json.dumps(rows, indent=2) + "\n"


# -- argument parsing ----------------------------------------------------------------


def _add_slice_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", required=True, help="edge file: src dst t [weight]")
    p.add_argument("--mode", choices=temporal.SLICING_MODES, default="disjoint")
    p.add_argument("--window", type=float, default=1.0)
    p.add_argument("--step", type=float, default=None)
    p.add_argument("--origin", type=float, default=None, help="start of the first window (default: first timestamp)")
    p.add_argument("--lenient", action="store_true", help="skip malformed edge lines instead of failing")


def _add_detect_args(p: argparse.ArgumentParser, with_import: bool) -> None:
    choices = ("lpa", "cpm", "import") if with_import else ("lpa", "cpm")
    p.add_argument("--detector", choices=choices, default="lpa")
    p.add_argument("--groups", default=None, help="grouping file for --detector import")
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--min-size", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", default="out")
    p.add_argument("--json", action="store_true", help="also write JSON mirrors of every table")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="commevo", description="Community evolution tracking.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("slice", help="cut an edge file into snapshots")
    _add_slice_args(p)
    _add_common(p)

    p = sub.add_parser("detect", help="detect communities in every snapshot")
    _add_slice_args(p)
    _add_detect_args(p, with_import=False)
    _add_common(p)

    p = sub.add_parser("track", help="full pipeline: slice, detect or import, match, chains")
    _add_slice_args(p)
    _add_detect_args(p, with_import=True)
    p.add_argument("--method", choices=("ged", "asur", "palla"), default="ged")
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--beta", type=float, default=0.5)
    p.add_argument("--kappa", type=float, default=0.5)
    p.add_argument("--importance", choices=("uniform", "degree"), default="uniform")
    p.add_argument("--delimiter", choices=("comma", "tab"), default="comma")
    _add_common(p)

    p = sub.add_parser("chains", help="evolution chains from an event table")
    p.add_argument("--events", required=True)
    p.add_argument("--groups", required=True)
    p.add_argument("--frames", type=int, default=None, help="number of timeframes (default: from the grouping file)")
    p.add_argument("--delimiter", choices=("comma", "tab"), default="comma")
    _add_common(p)

    p = sub.add_parser("bench", help="generate a planted-event scenario")
    p.add_argument("--script", default=None, help="event script (default: built-in seven-event script)")
    p.add_argument("--p-in", type=float, default=1.0)
    p.add_argument("--p-out", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--min-size", type=int, default=3)
    _add_common(p)

    p = sub.add_parser("score", help="precision/recall of observed events against planted ones")
    p.add_argument("--expected", required=True)
    p.add_argument("--observed", required=True)
    p.add_argument("--truth-groups", default=None)
    p.add_argument("--observed-groups", default=None)
    _add_common(p)
    return parser


def _cmd_slice(args) -> int:
    cfg = RunConfig(input=args.input, mode=args.mode, window=args.window, step=args.step, origin=args.origin,
                    lenient=args.lenient, out=args.out)
    cfg.validate()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    tsn = _load_network(cfg)
    _emit(out, "snapshots.tsv", temporal.format_snapshot_summary(tsn))
    if args.json:
        _emit(out, "snapshots.json", _snapshots_json(tsn))
    _write_config(out, "slice", vars(args))
    return EXIT_OK


def _cmd_detect(args) -> int:
    cfg = RunConfig(input=args.input, mode=args.mode, window=args.window, step=args.step, origin=args.origin,
                    lenient=args.lenient, detector=args.detector, k=args.k, min_size=args.min_size,
                    seed=args.seed, out=args.out)
    cfg.validate()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    tsn = _load_network(cfg)
    gs = _groupings(cfg, tsn)
    _emit(out, "groupings.txt", communities.format_groupings(gs))
    if args.json:
        _emit(out, "groupings.json", communities.groupings_to_json(gs))
    _write_config(out, "detect", vars(args))
    return EXIT_OK


def _cmd_track(args) -> int:
    fields = {k: v for k, v in vars(args).items() if k in RunConfig.__dataclass_fields__}
    run_pipeline(RunConfig(**fields))
    return EXIT_OK


def _cmd_chains(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    gs = communities.read_groupings(args.groups, args.frames)
    evs = events.read_events(args.events)
    chs = chains.extract_chains(chains.build_lineage(evs, gs))
    sep = "\t" if args.delimiter == "tab" else ","
    _emit(out, "chains.csv" if sep == "," else "chains.tsv", chains.export_chain_table(chs, len(gs), sep))
    if args.json:
        _emit(out, "chains.json", chains.chains_to_json(chs))
    print(f"chains: {len(chs)}")
    _write_config(out, "chains", vars(args))
    return EXIT_OK


def _cmd_bench(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    script = bench.parse_script(args.script) if args.script else bench.parse_script(bench.SEVEN_EVENTS_SCRIPT)
    sc = bench.generate_scenario(script, args.p_in, args.p_out, args.seed, min_size=args.min_size)
    _emit(out, "edges.txt", temporal.format_edges(sc.edges))
    _emit(out, "groups.txt", communities.format_groupings(sc.truth_groupings))
    _emit(out, "expected_events.tsv", events.format_events(sc.expected_for("ged")))
    _emit(out, "expected_events_asur.tsv", events.format_events(sc.expected_for("asur")))
    _emit(out, "snapshots.tsv", temporal.format_snapshot_summary(sc.tsn))
    if args.json:
        _emit(out, "expected_events.json", events.events_to_json(sc.expected_for("ged")))
        _emit(out, "groups.json", communities.groupings_to_json(sc.truth_groupings))
    print(f"bench: {sc.tsn.m} frames, {len(sc.edges)} edges, {len(sc.expected_events)} planted events")
    _write_config(out, "bench", vars(args))
    return EXIT_OK


def _cmd_score(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    expected = events.read_events(args.expected)
    observed = events.read_events(args.observed)
    truth = communities.read_groupings(args.truth_groups) if args.truth_groups else None
    obs_g = communities.read_groupings(args.observed_groups) if args.observed_groups else None
    report = bench.score_recovery(expected, observed, truth, obs_g)
    text = report.format()
    _emit(out, "score.tsv", text)
    if args.json:
        _emit(out, "score.json", json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n")
    sys.stdout.write(text)
    _write_config(out, "score", vars(args))
    return EXIT_OK


COMMANDS = {
    "slice": _cmd_slice,
    "detect": _cmd_detect,
    "track": _cmd_track,
    "chains": _cmd_chains,
    "bench": _cmd_bench,
    "score": _cmd_score,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ValueError, KeyError, IndexError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())

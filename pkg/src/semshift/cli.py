"""Command-line pipeline over store directories.

Subcommands: detect, rank, compare, graph, tune, eval, synth, validate.
Exit codes: 0 success, 1 usage error, 2 data error.  Outputs are UTF-8 with
LF line endings and byte-identical across identical invocations.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, fields
from pathlib import Path

from . import evaluation, ranking
from .configs import DEFAULT_T_CS, LanguagePreset, preset_for
from .detection import classify_words, reports_to_json, reports_to_tsv
from .graphs import emit
from .pipeline import compare_word_pair, pair_spatiotemporal, word_temporal, word_tree
from .store import DataError, load_store, save_store
from .synthetic import build_benchmark


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


@dataclass
class RunConfig:
    """Resolved run parameters: preset defaults, then config file, then flags."""

    language: str = "en"
    t0_sc: float | None = None
    t1_sc: float | None = None
    t_sc_detect: float | None = None
    t_cs: float = DEFAULT_T_CS
    k: int | None = None
    t0_low: int | None = None
    t1_low: int | None = None
    metric: str = "neighbor_based"
    strategy: str = "time_dependent"
    min_neighbor_tokens: int = 5

    def resolved_preset(self) -> LanguagePreset:
        base = preset_for(self.language)
        return LanguagePreset(
            language=self.language,
            t0_sc=self.t0_sc if self.t0_sc is not None else base.t0_sc,
            t1_sc=self.t1_sc if self.t1_sc is not None else base.t1_sc,
            k=self.k if self.k is not None else base.k,
            t0_low=self.t0_low if self.t0_low is not None else base.t0_low,
            t1_low=self.t1_low if self.t1_low is not None else base.t1_low,
        )

    def detection_config(self, ranking_mode: bool = False):
        cfg = self.resolved_preset().detection_config(
            metric=self.metric, strategy=self.strategy, ranking=ranking_mode)
        if self.t_sc_detect is not None:
            from dataclasses import replace
            cfg = replace(cfg, t_sc=self.t_sc_detect)
        return cfg


def _load_run_config(args) -> RunConfig:
    cfg = RunConfig()
    config_path = getattr(args, "config", None)
    if config_path:
        try:
            payload = json.loads(Path(config_path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise DataError(f"malformed config file: {exc}") from exc
        known = {f.name for f in fields(RunConfig)}
        unknown = set(payload) - known
        if unknown:
            raise DataError(f"unknown config keys: {', '.join(sorted(unknown))}")
        for key, value in payload.items():
            setattr(cfg, key, value)
    # flags override the config file
    for name in ("language", "t0_sc", "t1_sc", "t_sc_detect", "t_cs", "k",
                 "t0_low", "t1_low", "metric", "strategy", "min_neighbor_tokens"):
        value = getattr(args, name, None)
        if value is not None:
            setattr(cfg, name, value)
    return cfg


def _threads(args) -> int:
    if getattr(args, "threads", None) is not None:
        return max(1, args.threads)
    env = os.environ.get("SEMSHIFT_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise DataError(f"bad SEMSHIFT_THREADS value {env!r}") from None
    return 1


def _write(path: str | None, data: bytes):
    if path is None or path == "-":
        sys.stdout.buffer.write(data)
    else:
        Path(path).write_bytes(data)


def _common_flags(p: argparse.ArgumentParser):
    p.add_argument("--config", help="JSON RunConfig file; flags take precedence")
    p.add_argument("--lang", dest="language", choices=["en", "de", "la", "sv"],
                   help="language preset")
    p.add_argument("--t0-sc", dest="t0_sc", type=float)
    p.add_argument("--t1-sc", dest="t1_sc", type=float)
    p.add_argument("--t-sc-detect", dest="t_sc_detect", type=float)
    p.add_argument("--t-cs", dest="t_cs", type=float)
    p.add_argument("--k", type=int)
    p.add_argument("--t0-low", dest="t0_low", type=int)
    p.add_argument("--t1-low", dest="t1_low", type=int)
    p.add_argument("--metric", choices=["neighbor_based", "centroid_cosine",
                                        "centroid_euclidean"])
    p.add_argument("--strategy", choices=["time_dependent", "time_independent"])
    p.add_argument("--min-neighbor-tokens", dest="min_neighbor_tokens", type=int)
    p.add_argument("--threads", type=int, help="worker threads "
                   "(SEMSHIFT_THREADS as fallback); outputs do not depend on it")


def _read_words(args, *stores) -> list[str]:
    if getattr(args, "words", None):
        text = Path(args.words).read_text(encoding="utf-8")
        words = [w.strip() for w in text.splitlines() if w.strip()]
        if not words:
            raise DataError(f"no words in {args.words}")
        return words
    shared = set(stores[0].words())
    for s in stores[1:]:
        shared &= set(s.words())
    return sorted(shared)


def _cmd_detect(args) -> int:
    cfg = _load_run_config(args).detection_config()
    store_t0 = load_store(args.store_t0)
    store_t1 = load_store(args.store_t1)
    words = _read_words(args, store_t0, store_t1)
    reports = classify_words(words, store_t0, store_t1, cfg, threads=_threads(args))
    _write(args.out, reports_to_tsv(reports).encode("utf-8"))
    if args.json:
        _write(args.json, reports_to_json(reports).encode("utf-8"))
    return 0


def _cmd_rank(args) -> int:
    cfg = _load_run_config(args).detection_config(ranking_mode=True)
    store_t0 = load_store(args.store_t0)
    store_t1 = load_store(args.store_t1)
    words = _read_words(args, store_t0, store_t1)
    scores = ranking.rank_words(words, store_t0, store_t1, cfg,
                                threads=_threads(args))
    _write(args.out, ranking.ranking_tsv(scores).encode("utf-8"))
    return 0


def _cmd_compare(args) -> int:
    run = _load_run_config(args)
    cfg = run.detection_config()
    l1_t0, l1_t1 = load_store(args.l1_t0), load_store(args.l1_t1)
    l2_t0, l2_t1 = load_store(args.l2_t0), load_store(args.l2_t1)
    pairs = []
    for line in Path(args.pairs).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line:
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise DataError(f"bad pair line {line!r}: want word1<TAB>word2")
        pairs.append((parts[0], parts[1]))
    if not pairs:
        raise DataError(f"no pairs in {args.pairs}")
    results = [
        compare_word_pair(w1, w2, l1_t0, l1_t1, l2_t0, l2_t1, cfg, t_cs=run.t_cs)
        for w1, w2 in pairs
    ]
    payload = json.dumps([r.to_dict() for r in results],
                         ensure_ascii=False, indent=2) + "\n"
    _write(args.out, payload.encode("utf-8"))
    return 0


def _cmd_graph(args) -> int:
    run = _load_run_config(args)
    cfg = run.detection_config()
    if args.mode == "tree":
        graph = word_tree(load_store(args.store_t0), args.word, cfg)
    elif args.mode == "temporal":
        if args.store_t1 is None:
            raise _UsageError("--store-t1 is required for temporal graphs")
        graph = word_temporal(load_store(args.store_t0), load_store(args.store_t1),
                              args.word, cfg)
    else:
        for flag in ("store_t1", "l2_store_t0", "l2_store_t1", "word2"):
            if getattr(args, flag) is None:
                raise _UsageError(f"--{flag.replace('_', '-')} is required "
                                  "for spatiotemporal graphs")
        graph = pair_spatiotemporal(
            args.word, args.word2,
            load_store(args.store_t0), load_store(args.store_t1),
            load_store(args.l2_store_t0), load_store(args.l2_store_t1),
            cfg, t_cs=run.t_cs)
    _write(args.out, emit(graph, args.format))
    return 0


def _parse_grid(text: str | None, default):
    if text is None:
        return default
    try:
        lo, hi = (float(x) for x in text.split(":"))
    except ValueError:
        raise DataError(f"bad grid {text!r}: want LO:HI") from None
    grid = evaluation.default_grid(lo, hi)
    if not grid:
        raise DataError(f"empty grid {text!r}")
    return grid


def _cmd_tune(args) -> int:
    run = _load_run_config(args)
    devset = evaluation.load_devset(args.devset)
    fixed = {}
    for key in ("t0_low", "t1_low", "k"):
        value = getattr(args, key, None)
        if value is None:
            value = getattr(run, key)
        if value is not None:
            fixed[key] = value
    result = evaluation.tune(
        devset,
        grid_t0=_parse_grid(args.t0_grid, evaluation.GRID_T0),
        grid_t1=_parse_grid(args.t1_grid, evaluation.GRID_T1),
        fixed=fixed)
    _write(args.out, result.to_json_bytes())
    return 0


def _read_tsv_map(path: str, cast):
    out = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.rstrip("\n")
        if not line:
            continue
        parts = line.split("\t")
        if len(parts) < 2:
            raise DataError(f"bad TSV line {line!r} in {path}")
        out[parts[0]] = cast(parts[1])
    if not out:
        raise DataError(f"empty TSV {path}")
    return out


def _cmd_eval(args) -> int:
    _load_run_config(args)  # validates --config when given; no fields apply here
    if args.mode == "binary":
        pred = _read_tsv_map(args.pred, lambda s: int(s))
        gold = _read_tsv_map(args.gold, lambda s: int(s))
        print(f"accuracy\t{evaluation.accuracy(pred, gold):.6f}")
    else:
        pred = _read_tsv_map(args.pred, float)
        gold = _read_tsv_map(args.gold, float)
        if set(pred) != set(gold):
            raise DataError("prediction and gold word sets differ")
        words = sorted(gold)
        rho = evaluation.spearman([pred[w] for w in words], [gold[w] for w in words])
        print(f"spearman\t{rho:.6f}")
    return 0


def _cmd_synth(args) -> int:
    _load_run_config(args)
    store_t0, store_t1, gold = build_benchmark(args.seed)
    out = Path(args.out)
    save_store(store_t0, out / "t0")
    save_store(store_t1, out / "t1")
    lines = "".join(f"{w}\t{label}\n" for w, label in sorted(gold.items()))
    (out / "gold.tsv").write_text(lines, encoding="utf-8")
    (out / "targets.txt").write_text(
        "".join(w + "\n" for w in sorted(gold)), encoding="utf-8")
    print(f"wrote benchmark stores, gold labels and target list under {out}")
    return 0


def _cmd_validate(args) -> int:
    _load_run_config(args)
    for path in args.stores:
        store = load_store(path)  # raises DataError on any format violation
        print(f"ok\t{path}\t{len(store)} words\tdim {store.dim}")
    return 0


def _build_parser() -> _Parser:
    parser = _Parser(prog="semshift", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("detect", help="binary change detection per word")
    p.add_argument("--store-t0", required=True)
    p.add_argument("--store-t1", required=True)
    p.add_argument("--words", help="file with one target word per line "
                   "(default: words present in both stores)")
    p.add_argument("--out", required=True, help="TSV output path or -")
    p.add_argument("--json", help="optional JSON report path")
    _common_flags(p)
    p.set_defaults(func=_cmd_detect)

    p = sub.add_parser("rank", help="graded change scores per word")
    p.add_argument("--store-t0", required=True)
    p.add_argument("--store-t1", required=True)
    p.add_argument("--words")
    p.add_argument("--out", required=True)
    _common_flags(p)
    p.set_defaults(func=_cmd_rank)

    p = sub.add_parser("compare", help="cross-lingual consistency of changes")
    p.add_argument("--l1-t0", required=True)
    p.add_argument("--l1-t1", required=True)
    p.add_argument("--l2-t0", required=True)
    p.add_argument("--l2-t1", required=True)
    p.add_argument("--pairs", required=True, help="TSV of word_l1<TAB>word_l2")
    p.add_argument("--out", required=True)
    _common_flags(p)
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("graph", help="emit a semantic graph as JSON or DOT")
    p.add_argument("--mode", choices=["tree", "temporal", "spatiotemporal"],
                   required=True)
    p.add_argument("--store-t0", required=True)
    p.add_argument("--store-t1")
    p.add_argument("--l2-store-t0")
    p.add_argument("--l2-store-t1")
    p.add_argument("--word", required=True)
    p.add_argument("--word2", help="second language's word (spatiotemporal)")
    p.add_argument("--format", choices=["json", "dot"], default="json")
    p.add_argument("--out", required=True)
    _common_flags(p)
    p.set_defaults(func=_cmd_graph)

    p = sub.add_parser("tune", help="grid search the two merge thresholds")
    p.add_argument("--devset", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--config")
    p.add_argument("--t0-grid", dest="t0_grid", help="LO:HI exclusive, step 0.01")
    p.add_argument("--t1-grid", dest="t1_grid")
    p.add_argument("--t0-low", dest="t0_low", type=int)
    p.add_argument("--t1-low", dest="t1_low", type=int)
    p.add_argument("--k", type=int)
    p.set_defaults(func=_cmd_tune)

    p = sub.add_parser("eval", help="score predictions against gold labels")
    p.add_argument("--pred", required=True)
    p.add_argument("--gold", required=True)
    p.add_argument("--mode", choices=["binary", "graded"], default="binary")
    p.add_argument("--config")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("synth", help="generate deterministic benchmark stores")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--config")
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("validate", help="check store directories")
    p.add_argument("stores", nargs="+")
    p.add_argument("--config")
    p.set_defaults(func=_cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (DataError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

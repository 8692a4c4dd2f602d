"""Command-line interface.

Subcommands cover the full pipeline: ingest, tag, index, alias, retrieve
(bm25 | ql | prf-rocchio | prf-rm3 | pointwise | entity-hop), train, eval,
synth. Every run writes a manifest (resolved flags, input digests, tool
version - no timestamps) sufficient to reproduce it; identical args and
inputs produce byte-identical outputs.

Exit codes: 0 success, 1 usage error, 2 data error, 3 remote-encoder error.
Config can also come from a key=value file via --config; explicit flags win.
The only environment override is ENTITYHOP_ENDPOINT for the remote encoder.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from pathlib import Path

from . import __version__
from .chains import ChainCaps, write_chain_sets
from .corpus import (
    heuristic_tag_mentions,
    ingest_corpus,
    load_questions,
    write_corpus,
)
from .encoder import LEXICAL_DIM, EncoderConfig, make_encoder
from .errors import DataError, RemoteEncoderError
from .evaluation import (
    evaluate,
    format_report_markdown,
    report_rows,
    split_by_hop_class,
    write_report_csv,
    write_report_json,
)
from .index import (
    Bm25Params,
    DirichletParams,
    build_index,
    load_index,
    save_index,
)
from .linker import (
    build_alias_table,
    build_exclusion_set,
    load_alias_table,
    load_links,
    save_alias_table,
)
from .pipeline import (
    HOP_INITIAL_K,
    POINTWISE_INITIAL_K,
    bm25_rankings,
    build_question_chains,
    entity_hop_rankings,
    pointwise_rankings,
    ql_rankings,
    rm3_rankings,
    rocchio_rankings,
)
from .prf import Rm3Params, RocchioParams
from .reranker import (
    TrainConfig,
    build_chain_dataset,
    build_pointwise_dataset,
    load_model,
    save_model,
    train,
    write_train_log,
)
from .synth import SynthConfig, generate, write_bundle

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_REMOTE = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse default exits 2; usage errors are 1 here
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _sha256(path: str | Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            h.update(block)
    return h.hexdigest()


def _write_manifest(out_path: Path, subcommand: str, args: argparse.Namespace, inputs: list[str]):
    resolved = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "config")}
    manifest = {
        "tool": "entityhop",
        "version": __version__,
        "subcommand": subcommand,
        "config": resolved,
        "inputs": {name: _sha256(name) for name in inputs if name and Path(name).exists()},
    }
    path = Path(str(out_path) + ".manifest.json")
    path.write_text(json.dumps(manifest, indent=1, sort_keys=True) + "\n", encoding="utf-8")


def _load_config_file(path: str) -> dict[str, str]:
    out: dict[str, str] = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise DataError(f"{path} line {lineno}: expected key=value")
        key, _, value = line.partition("=")
        out[key.strip().replace("-", "_")] = value.strip()
    return out


def _apply_config_file(parser: argparse.ArgumentParser, argv: list[str]) -> list[str]:
    """Fold --config file values in as parser defaults; explicit flags win."""
    probe = _Parser(add_help=False)
    probe.add_argument("--config")
    known, _ = probe.parse_known_args(argv)
    if known.config:
        values = _load_config_file(known.config)
        valid = {a.dest for a in parser._actions}
        unknown = set(values) - valid
        if unknown:
            raise DataError(f"unknown config keys: {sorted(unknown)}")
        typed = {}
        for key, raw in values.items():
            action = next(a for a in parser._actions if a.dest == key)
            typed[key] = action.type(raw) if action.type else raw
        parser.set_defaults(**typed)
    return argv


def _expansion_sink(args) -> dict | None:
    return {} if getattr(args, "dump_expansions", None) else None


def _write_expansions(expansions: dict | None, args) -> None:
    if expansions is None:
        return
    with Path(args.dump_expansions).open("w", encoding="utf-8") as fh:
        for qid, wq in expansions.items():
            row = {"qid": qid, "weights": {t: wq[t] for t in sorted(wq)}}
            fh.write(json.dumps(row, separators=(",", ":")) + "\n")


def _rankings_to_file(rankings: dict, path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        for qid in rankings:
            obj = {
                "qid": qid,
                "ranking": [{"id": pid, "score": score} for pid, score in rankings[qid]],
            }
            fh.write(json.dumps(obj, separators=(",", ":")) + "\n")


def _load_rankings(path: str | Path) -> dict:
    out = {}
    with Path(path).open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line:
                continue
            try:
                obj = json.loads(line)
                out[obj["qid"]] = [(r["id"], float(r["score"])) for r in obj["ranking"]]
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise DataError(f"{path} line {lineno}: {exc!r}") from exc
    return out


def cmd_ingest(args) -> int:
    corpus = ingest_corpus(args.corpus)
    write_corpus(corpus, args.out)
    _write_manifest(Path(args.out), "ingest", args, [args.corpus])
    print(f"ingested {len(corpus)} passages -> {args.out}")
    return EXIT_OK


def cmd_tag(args) -> int:
    corpus = ingest_corpus(args.corpus)
    tagged = []
    changed = 0
    for p in corpus:
        if p.mentions and not args.force:
            tagged.append(p)
            continue
        tagged.append(heuristic_tag_mentions(p))
        changed += 1
    from .corpus import corpus_from_passages

    write_corpus(corpus_from_passages(tagged), args.out)
    _write_manifest(Path(args.out), "tag", args, [args.corpus])
    print(f"tagged {changed} passages -> {args.out}")
    return EXIT_OK


def cmd_index(args) -> int:
    corpus = ingest_corpus(args.corpus)
    index = build_index(corpus)
    save_index(index, args.out)
    _write_manifest(Path(args.out), "index", args, [args.corpus])
    print(f"indexed {index.doc_count} passages, {len(index.postings)} terms -> {args.out}")
    return EXIT_OK


def cmd_alias(args) -> int:
    corpus = ingest_corpus(args.corpus)
    links = load_links(args.links) if args.links else []
    exclude: frozenset[str] = frozenset()
    if args.exclude_from:
        if not args.index:
            raise DataError("--exclude-from requires --index (run `entityhop index` first)")
        index = load_index(args.index)
        questions = load_questions(args.exclude_from)
        exclude = build_exclusion_set(index, questions, top_n=args.top_n)
    table = build_alias_table(corpus, links, exclude=exclude, include_titles=not args.no_titles)
    save_alias_table(table, args.out)
    _write_manifest(
        Path(args.out), "alias", args,
        [args.corpus, args.links or "", args.exclude_from or "", args.index or ""],
    )
    print(
        f"alias table: {len(table)} surfaces, {len(exclude)} excluded ids, "
        f"{table.skipped_dangling} dangling links skipped -> {args.out}"
    )
    return EXIT_OK


def _check_model_kind(path: str, meta: dict, expected: str) -> None:
    if meta.get("kind") != expected:
        raise DataError(
            f"{path}: model kind {meta.get('kind')!r} does not fit this mode; "
            f"train one with `entityhop train --mode {expected}`"
        )


def _encoder_from_args(args, index):
    endpoint = os.environ.get("ENTITYHOP_ENDPOINT", "") or getattr(args, "endpoint", "")
    if args.encoder == "remote" and not endpoint:
        raise DataError("remote encoder needs --endpoint or ENTITYHOP_ENDPOINT")
    config = EncoderConfig(provider=args.encoder, dim=0 if args.encoder == "remote" else LEXICAL_DIM,
                           endpoint=endpoint)
    return make_encoder(config, index)


def cmd_retrieve(args) -> int:
    index = load_index(args.index)
    questions = load_questions(args.questions)
    mode = args.mode
    if mode == "bm25":
        rankings = bm25_rankings(index, questions, args.k, Bm25Params(args.k1, args.b))
    elif mode == "ql":
        rankings = ql_rankings(index, questions, args.k, DirichletParams(args.mu))
    elif mode == "prf-rocchio":
        params = RocchioParams(args.alpha, args.beta, args.fb_docs, args.fb_terms)
        expansions = _expansion_sink(args)
        rankings = rocchio_rankings(
            index, questions, args.k, params, args.first_pass_k, expansions=expansions
        )
        _write_expansions(expansions, args)
    elif mode == "prf-rm3":
        params = Rm3Params(args.lam, args.fb_docs, args.fb_terms, args.mu)
        expansions = _expansion_sink(args)
        rankings = rm3_rankings(
            index, questions, args.k, params, args.first_pass_k, expansions=expansions
        )
        _write_expansions(expansions, args)
    elif mode in ("pointwise", "entity-hop"):
        if not args.model:
            raise DataError(f"mode {mode} requires --model (run `entityhop train` first)")
        corpus = ingest_corpus(args.corpus) if args.corpus else None
        if corpus is None:
            raise DataError(f"mode {mode} requires --corpus")
        params, meta = load_model(args.model)
        encoder = _encoder_from_args(args, index)
        initial_k = args.initial_k or (POINTWISE_INITIAL_K if mode == "pointwise" else HOP_INITIAL_K)
        if mode == "pointwise":
            _check_model_kind(args.model, meta, "pointwise")
            rankings = pointwise_rankings(params, encoder, index, corpus, questions, args.k, initial_k)
        else:
            if not args.alias:
                raise DataError("mode entity-hop requires --alias (run `entityhop alias` first)")
            table = load_alias_table(args.alias)
            caps = ChainCaps(args.cap_per_mention, args.max_chains)
            chain_sets = build_question_chains(index, corpus, table, questions, initial_k, caps)
            entity_only = args.ablation == "entity-only"
            _check_model_kind(args.model, meta, "entity-only" if entity_only else "chain")
            rankings = entity_hop_rankings(
                params, encoder, corpus, questions, chain_sets, args.k, entity_only
            )
    else:  # pragma: no cover - argparse choices guard this
        raise DataError(f"unknown mode {mode}")
    _rankings_to_file(rankings, args.out)
    _write_manifest(
        Path(args.out), "retrieve", args,
        [args.index, args.questions, args.corpus or "", args.model or "", args.alias or ""],
    )
    print(f"{mode}: wrote rankings for {len(rankings)} questions -> {args.out}")
    return EXIT_OK


def cmd_train(args) -> int:
    index = load_index(args.index)
    corpus = ingest_corpus(args.corpus)
    questions = load_questions(args.questions)
    encoder = _encoder_from_args(args, index)
    config = TrainConfig(
        learning_rate=args.lr,
        epochs=args.epochs,
        batch_size=args.batch_size,
        neg_per_pos=args.neg_per_pos,
        seed=args.seed,
        optimizer=args.optimizer,
    )
    if args.mode == "pointwise":
        initial_k = args.initial_k or POINTWISE_INITIAL_K
        initial = bm25_rankings(index, questions, initial_k)
        samples = build_pointwise_dataset(questions, initial, corpus, encoder)
    else:
        if not args.alias:
            raise DataError("chain training requires --alias")
        table = load_alias_table(args.alias)
        initial_k = args.initial_k or HOP_INITIAL_K
        caps = ChainCaps(args.cap_per_mention, args.max_chains)
        chain_sets = build_question_chains(index, corpus, table, questions, initial_k, caps)
        if args.dump_chains:
            by_qid = {q.qid: q for q in questions}
            write_chain_sets(
                [(cs, by_qid[qid]) for qid, cs in chain_sets.items()], args.dump_chains
            )
        samples = build_chain_dataset(
            questions, chain_sets, corpus, encoder, entity_only=(args.mode == "entity-only")
        )
    params, losses = train(samples, config, hidden=args.hidden)
    fingerprint = f"{args.encoder}/{encoder.dim}"
    save_model(params, args.out, kind=args.mode, encoder_fingerprint=fingerprint)
    write_train_log(losses, args.log)
    _write_manifest(
        Path(args.out), "train", args,
        [args.index, args.corpus, args.questions, args.alias or ""],
    )
    print(f"trained {args.mode} model: final loss {losses[-1]:.4f} -> {args.out}")
    return EXIT_OK


def cmd_eval(args) -> int:
    questions = load_questions(args.questions)
    named = []
    for spec in args.run:
        name, _, path = spec.partition("=")
        if not path:
            raise DataError(f"--run expects NAME=rankings.jsonl, got {spec!r}")
        named.append((name, evaluate(_load_rankings(path), questions)))
    rows = report_rows(named, include_reference=args.reference)
    if args.hop_split:
        if not args.corpus:
            raise DataError("--hop-split requires --corpus")
        corpus = ingest_corpus(args.corpus)
        slices = split_by_hop_class(questions, corpus)
        for name, _ in named:
            path = dict(spec.partition("=")[::2] for spec in args.run)[name]
            rankings = _load_rankings(path)
            for hop_class, qs in slices.items():
                if not qs:
                    continue
                res = evaluate(rankings, qs)
                row = {"system": f"{name}[{hop_class}]", "scale": "desk"}
                row.update({f"acc@{k}": res.acc[k] for k in sorted(res.acc)})
                row["map"] = res.map
                rows.append(row)
    out_prefix = Path(args.out_prefix)
    write_report_csv(rows, out_prefix.with_suffix(".csv"))
    write_report_json(rows, out_prefix.with_suffix(".json"))
    if args.markdown:
        out_prefix.with_suffix(".md").write_text(format_report_markdown(rows), encoding="utf-8")
    _write_manifest(
        out_prefix.with_suffix(".json"), "eval", args,
        [args.questions, args.corpus or ""] + [s.partition("=")[2] for s in args.run],
    )
    for row in rows:
        print(
            f"{row['system']:>28} ({row['scale']}): "
            + " ".join(f"{k}={row[k]:.3f}" for k in row if k.startswith(("acc@", "map")))
        )
    return EXIT_OK


def cmd_synth(args) -> int:
    config = SynthConfig(
        n_entities=args.entities,
        n_distractors=args.distractors,
        n_questions=args.questions,
        vocab_size=args.vocab_size,
        overlap=args.overlap,
        single_hop_fraction=args.single_hop_fraction,
        seed=args.seed,
        passage_len=args.passage_len,
        question_len=args.question_len,
        mentions_per_passage=args.mentions_per_passage,
    )
    bundle = generate(config)
    paths = write_bundle(bundle, args.out_dir)
    _write_manifest(Path(args.out_dir) / "run", "synth", args, [])
    print(
        f"bundle: {len(bundle.passages)} passages, {len(bundle.links)} links, "
        f"{len(bundle.questions)} questions -> {args.out_dir}"
    )
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="entityhop", description=__doc__)
    parser.add_argument("--version", action="version", version=f"entityhop {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True, metavar="SUBCOMMAND")

    def common(p):
        p.add_argument("--config", help="key=value config file; explicit flags win (default: none)")
        p.add_argument(
            "--threads", type=int, default=1,
            help="max worker threads; current pipelines are single-threaded "
            "for determinism (default: 1)",
        )

    p = sub.add_parser("ingest", help="validate and normalize a corpus JSONL file")
    p.add_argument("--corpus", required=True, help="input corpus JSONL")
    p.add_argument("--out", required=True, help="normalized corpus JSONL")
    common(p)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("tag", help="add heuristic capitalization-run mentions")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)
    p.add_argument(
        "--force", action="store_true",
        help="re-tag passages that already carry mentions (default: only untagged)",
    )
    common(p)
    p.set_defaults(func=cmd_tag)

    p = sub.add_parser("index", help="build the binary inverted index")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True, help="index file (versioned binary)")
    common(p)
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("alias", help="build the alias table from links and titles")
    p.add_argument("--corpus", required=True)
    p.add_argument("--links", help="links JSONL (default: none, titles only)")
    p.add_argument("--out", required=True, help="alias table JSON")
    p.add_argument(
        "--exclude-from",
        help="questions JSONL whose BM25 top-n targets are excluded (default: no exclusion)",
    )
    p.add_argument("--index", help="index file, required with --exclude-from")
    p.add_argument("--top-n", type=int, default=40, help="exclusion depth (default: 40)")
    p.add_argument(
        "--no-titles", action="store_true", help="do not map passage titles to themselves"
    )
    common(p)
    p.set_defaults(func=cmd_alias)

    p = sub.add_parser("retrieve", help="rank passages per question in any mode")
    p.add_argument(
        "--mode", required=True,
        choices=["bm25", "ql", "prf-rocchio", "prf-rm3", "pointwise", "entity-hop"],
    )
    p.add_argument("--index", required=True)
    p.add_argument("--questions", required=True)
    p.add_argument("--out", required=True, help="rankings JSONL")
    p.add_argument("--k", type=int, default=100, help="output ranking depth (default: 100)")
    p.add_argument("--k1", type=float, default=1.2, help="BM25 k1 (default: 1.2)")
    p.add_argument("--b", type=float, default=0.75, help="BM25 b (default: 0.75)")
    p.add_argument("--mu", type=float, default=1500.0, help="Dirichlet mu (default: 1500)")
    p.add_argument("--alpha", type=float, default=1.0, help="Rocchio alpha (default: 1.0)")
    p.add_argument("--beta", type=float, default=0.75, help="Rocchio beta (default: 0.75)")
    p.add_argument("--fb-docs", type=int, default=10, help="feedback docs (default: 10)")
    p.add_argument("--fb-terms", type=int, default=10, help="feedback terms (default: 10)")
    p.add_argument(
        "--lam", type=float, default=0.5,
        help="RM3 weight of the original query model (default: 0.5)",
    )
    p.add_argument(
        "--first-pass-k", type=int, default=100,
        help="first-pass depth for PRF modes (default: 100)",
    )
    p.add_argument(
        "--dump-expansions", default="",
        help="also write PRF expanded queries as JSONL {qid, weights} (default: off)",
    )
    p.add_argument("--corpus", help="corpus JSONL (pointwise and entity-hop modes)")
    p.add_argument("--model", help="trained model JSON (pointwise and entity-hop modes)")
    p.add_argument("--alias", help="alias table JSON (entity-hop mode)")
    p.add_argument(
        "--initial-k", type=int, default=0,
        help="initial retrieval depth; 0 = per-mode default (25 entity-hop, 200 pointwise)",
    )
    p.add_argument(
        "--ablation", choices=["none", "entity-only"], default="none",
        help="entity-hop ablation head (default: none)",
    )
    p.add_argument(
        "--cap-per-mention", type=int, default=8,
        help="max link candidates per mention (default: 8)",
    )
    p.add_argument(
        "--max-chains", type=int, default=4096, help="max chains per question (default: 4096)"
    )
    p.add_argument(
        "--encoder", choices=["lexical", "remote"], default="lexical",
        help="representation provider (default: lexical)",
    )
    p.add_argument("--endpoint", default="", help="remote encoder host:port (default: none)")
    common(p)
    p.set_defaults(func=cmd_retrieve)

    p = sub.add_parser("train", help="train a re-ranker head")
    p.add_argument(
        "--mode", choices=["chain", "entity-only", "pointwise"], default="chain",
        help="which head to train (default: chain)",
    )
    p.add_argument("--index", required=True)
    p.add_argument("--corpus", required=True)
    p.add_argument("--questions", required=True)
    p.add_argument("--alias", help="alias table JSON (chain and entity-only modes)")
    p.add_argument("--out", required=True, help="model JSON")
    p.add_argument("--log", default="train_log.csv", help="epoch loss CSV (default: train_log.csv)")
    p.add_argument("--epochs", type=int, default=200, help="training epochs (default: 200)")
    p.add_argument("--lr", type=float, default=1e-2, help="learning rate (default: 0.01)")
    p.add_argument("--batch-size", type=int, default=32, help="mini-batch size (default: 32)")
    p.add_argument(
        "--neg-per-pos", type=int, default=10,
        help="negatives kept per positive per question; 0 = all (default: 10)",
    )
    p.add_argument("--seed", type=int, default=13, help="RNG seed (default: 13)")
    p.add_argument("--hidden", type=int, default=32, help="hidden width (default: 32)")
    p.add_argument(
        "--optimizer", choices=["adam", "sgd"], default="adam",
        help="update rule (default: adam)",
    )
    p.add_argument("--initial-k", type=int, default=0,
                   help="initial retrieval depth; 0 = per-mode default")
    p.add_argument("--dump-chains", default="",
                   help="also write labeled chains as JSONL for inspection (default: off)")
    p.add_argument("--cap-per-mention", type=int, default=8,
                   help="max link candidates per mention (default: 8)")
    p.add_argument("--max-chains", type=int, default=4096,
                   help="max chains per question (default: 4096)")
    p.add_argument("--encoder", choices=["lexical", "remote"], default="lexical",
                   help="representation provider (default: lexical)")
    p.add_argument("--endpoint", default="", help="remote encoder host:port (default: none)")
    common(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", help="score ranking files and emit a comparison report")
    p.add_argument("--questions", required=True)
    p.add_argument(
        "--run", action="append", required=True, metavar="NAME=FILE",
        help="system name and rankings JSONL; repeatable",
    )
    p.add_argument("--out-prefix", required=True, help="report path prefix (.csv/.json/.md)")
    p.add_argument("--markdown", action="store_true", help="also emit a Markdown table")
    p.add_argument(
        "--reference", action="store_true",
        help="append published full-scale reference rows (not desk-reproducible)",
    )
    p.add_argument(
        "--hop-split", action="store_true",
        help="also break metrics out by single-hop vs multi-hop classification",
    )
    p.add_argument("--corpus", help="corpus JSONL, required with --hop-split")
    common(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("synth", help="generate a synthetic bridge-entity bundle")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--entities", type=int, default=200, help="entity passages (default: 200)")
    p.add_argument("--distractors", type=int, default=100, help="distractor passages (default: 100)")
    p.add_argument("--questions", type=int, default=50, help="questions (default: 50)")
    p.add_argument("--vocab-size", type=int, default=150, help="filler vocabulary (default: 150)")
    p.add_argument(
        "--overlap", type=float, default=0.3,
        help="fraction of question terms shared with the answer passage (default: 0.3)",
    )
    p.add_argument(
        "--single-hop-fraction", type=float, default=0.0,
        help="fraction of single-hop questions (default: 0.0)",
    )
    p.add_argument("--seed", type=int, default=1, help="generator seed (default: 1)")
    p.add_argument("--passage-len", type=int, default=30, help="filler tokens per passage (default: 30)")
    p.add_argument("--question-len", type=int, default=12, help="content tokens per question (default: 12)")
    p.add_argument(
        "--mentions-per-passage", type=int, default=3,
        help="entity mentions per entity passage (default: 3)",
    )
    common(p)
    p.set_defaults(func=cmd_synth)

    return parser


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        # apply --config defaults to the matched subparser before the real parse
        if argv and not argv[0].startswith("-"):
            sub_actions = next(
                a for a in parser._actions if isinstance(a, argparse._SubParsersAction)
            )
            sub = sub_actions.choices.get(argv[0])
            if sub is not None:
                _apply_config_file(sub, argv[1:])
        args = parser.parse_args(argv)
        return args.func(args)
    except RemoteEncoderError as exc:
        print(f"entityhop: remote encoder error: {exc}", file=sys.stderr)
        return EXIT_REMOTE
    except DataError as exc:
        print(f"entityhop: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (KeyError, FileNotFoundError) as exc:
        print(f"entityhop: data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())

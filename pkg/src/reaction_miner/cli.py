"""Single-entry CLI exposing the full pipeline as subcommands."""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from reaction_miner import (
    combolearn, coocgraph, corpus, emoclass, evalharness, patterns,
    pipeline, report, sarcasm, textproc,
)
from reaction_miner.emotions import CANONICAL_ORDER
from reaction_miner.errors import ConfigError, ReactionMinerError

log = logging.getLogger("reaction_miner")


def _thread_cap(args) -> int:
    if getattr(args, "threads", None):
        return args.threads
    return int(os.environ.get("REACTION_MINER_THREADS", "0")) or os.cpu_count() or 1


def _load_token_records(path, lang=None, lexicon=None):
    """Tokenized records from a comments (5-col), posts (3-col) or labeled
    (6-col) file, detected by column count."""
    lex = textproc.load_lexicon(lexicon) if lexicon else None
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            head = line.split("\t", 5)
            if len(head) == 6:  # labeled
                rid, _, _, rec_lang, label, text = head
                emo = corpus.parse_emotion(label)
            else:
                parts = line.split("\t", 4)
                if len(parts) == 5:  # comments
                    rid, _, _, rec_lang, text = parts
                else:  # posts
                    rid, rec_lang, text = line.split("\t", 2)
                emo = None
            if lang and rec_lang != lang:
                continue
            toks = pipeline.tokenize_text(text, rec_lang, lex, rid)
            out.append((rid, toks, emo))
    return out


def _load_annotated(path):
    """`comment_id<TAB>lang<TAB>sarcastic(0|1)<TAB>text` records."""
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            cid, lang, flag, text = line.split("\t", 3)
            out.append((cid, lang, int(flag), text))
    return out


# --------------------------------------------------------------------------
# Subcommand handlers
# --------------------------------------------------------------------------

def cmd_ingest(args):
    comments = corpus.load_comments(args.comments, args.lang)
    reactions = corpus.load_reactions(args.reactions)
    labeled = corpus.overlap_join(comments.records, reactions.records)
    corpus.save_labeled(labeled, args.out)
    dist = corpus.distribution(labeled)
    text = corpus.format_distribution(dist)
    sys.stdout.write(text)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(text)
        report.render_distribution({args.lang or "all": dist},
                                   report.figure_path(args.report))
    log.info("ingest: %d comments, %d reactions, %d labeled, %d malformed",
             len(comments.records), len(reactions.records), len(labeled),
             comments.malformed + reactions.malformed)
    return 0


def cmd_synth(args):
    cfg = corpus.SynthConfig(
        comments_per_emotion=args.comments_per_emotion,
        sarcasm_rate=args.sarcasm_rate,
        lang=args.lang,
    )
    posts, labeled, sarcastic_ids = corpus.synth_corpus(cfg, args.seed)
    outdir = Path(args.out_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    corpus.save_posts(posts, outdir / "posts.tsv")
    corpus.save_comments([lc.comment for lc in labeled], outdir / "comments.tsv")
    corpus.save_reactions(corpus.reactions_for(labeled), outdir / "reactions.tsv")
    corpus.save_labeled(labeled, outdir / "labeled.tsv")
    with open(outdir / "sarcastic_ids.txt", "w", encoding="utf-8") as fh:
        for cid in sorted(sarcastic_ids):
            fh.write(cid + "\n")
    with open(outdir / "annotated.tsv", "w", encoding="utf-8") as fh:
        for lc in labeled:
            flag = 1 if lc.comment.id in sarcastic_ids else 0
            fh.write(f"{lc.comment.id}\t{lc.comment.lang}\t{flag}\t{lc.comment.text}\n")
    with open(outdir / "annotations.tsv", "w", encoding="utf-8") as fh:
        for lc in labeled:
            flag = 1 if lc.comment.id in sarcastic_ids else 0
            votes = ",".join([str(flag)] * 3)
            fh.write(f"{lc.comment.id}\t{lc.comment.lang}\t{votes}\t{lc.comment.text}\n")
    log.info("synth: %d posts, %d comments, %d sarcastic",
             len(posts), len(labeled), len(sarcastic_ids))
    return 0


def cmd_build_lexicon(args):
    texts = []
    for path in args.input:
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.rstrip("\n")
                if not line:
                    continue
                texts.append(textproc.normalize(line.split("\t")[-1]))
    lex = textproc.build_zh_lexicon(texts, args.threshold)
    textproc.save_lexicon(lex, args.out)
    log.info("build-lexicon: %d entries", len(lex))
    return 0


def cmd_build_graph(args):
    records = []
    for path in args.input:
        records.extend(_load_token_records(path, args.lang, args.lexicon))
    graph = coocgraph.build_graph(toks for _, toks, _ in records)
    coocgraph.save_graph(graph, args.out)
    log.info("build-graph: %d nodes, %d edges", len(graph.nodes), len(graph.edges))
    return 0


def cmd_reduce_graph(args):
    subj = coocgraph.load_graph(args.subjective)
    obj = coocgraph.load_graph(args.objective)
    reduced = coocgraph.reduce_graph(subj, obj, args.dominance)
    coocgraph.save_graph(reduced, args.out)
    log.info("reduce-graph: removed %d of %d nodes",
             len(reduced.removed), len(subj.nodes))
    return 0


def cmd_extract_patterns(args):
    reduced = coocgraph.load_graph(args.graph, reduced=True)
    records = _load_token_records(args.labeled, args.lang, args.lexicon)
    params = patterns.MiningParams(args.min_freq, args.min_fillers)
    pats, stats = patterns.extract_patterns(
        reduced, ((toks, emo) for _, toks, emo in records if emo is not None),
        params)
    model = patterns.build_model(pats, stats)
    patterns.save_model(model, args.out)
    log.info("extract-patterns: %d patterns", len(model))
    return 0


def cmd_classify(args):
    model = patterns.load_model(args.model)
    records = _load_token_records(args.input, args.lang, args.lexicon)
    with open(args.out, "w", encoding="utf-8") as fh:
        for rid, toks, _ in records:
            sc = emoclass.classify(toks, model)
            fh.write(emoclass.format_scores(rid, sc) + "\n")
    log.info("classify: %d records", len(records))
    return 0


def cmd_sarcasm(args):
    model = patterns.load_model(args.model)
    if args.thresholds:
        thresholds = sarcasm.load_thresholds(args.thresholds, args.profile)
    else:
        thresholds = sarcasm.DEFAULT_PROFILES[args.profile]
    records = _load_token_records(args.input, args.lang, args.lexicon)
    n_sarcastic = 0
    with open(args.out, "w", encoding="utf-8") as fh:
        for rid, toks, _ in records:
            sc = emoclass.classify(toks, model)
            if sc.nosignal:
                fh.write(f"{rid}\t0\tNA\tNA\tNA\t0\tNoSignal\n")
                continue
            verdict = sarcasm.label_sarcasm(sc, thresholds)
            n_sarcastic += verdict.sarcastic
            fh.write(sarcasm.format_verdict(rid, verdict) + "\n")
    log.info("sarcasm: %d of %d records labeled sarcastic",
             n_sarcastic, len(records))
    return 0


def cmd_learn_combos(args):
    model = patterns.load_model(args.model)
    annotated = _load_annotated(args.annotated)
    lex = textproc.load_lexicon(args.lexicon) if args.lexicon else None
    budget = min(args.n, len(model))
    dataset, scores = [], []
    for cid, lang, flag, text in annotated:
        toks = pipeline.tokenize_text(text, lang, lex, cid)
        dataset.append((combolearn.build_matrix(toks, model, budget), bool(flag)))
        scores.append(emoclass.classify(toks, model))
    config = combolearn.LearnerConfig(
        epochs=args.epochs, lr=args.lr, arch=args.arch)
    trace = combolearn.train(dataset, config, args.seed)
    hist = combolearn.combo_histogram(dataset, trace, scores)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(combolearn.format_histogram(hist))
    report.render_combo_histogram(hist, report.figure_path(args.out))
    if hist.counts[combolearn.RATE_THRESHOLDS[-1]]:
        selected = combolearn.select_combos(hist, args.k)
        log.info("learn-combos: selected %s",
                 ", ".join(sorted(f"{a.value}-{b.value}" for a, b in selected)))
    else:
        log.warning("learn-combos: no pair reached the %.0f%% rate threshold",
                    100 * combolearn.RATE_THRESHOLDS[-1])
    return 0


def cmd_evaluate(args):
    annotations = evalharness.load_annotations(args.annotations)
    pred = pipeline.read_predictions(args.pred)
    levels = [args.level] if args.level else [1, 2, 3]
    reports = {}
    for level in levels:
        if level > annotations.n_annotators:
            continue
        truth = evalharness.agree_labels(annotations, level)
        covered = {i: pred.get(i, 0) for i in truth.labels}
        reports[level] = evalharness.metrics(covered, truth)
    text = evalharness.format_metrics(reports)
    sys.stdout.write(text)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        report.render_metrics(reports, report.figure_path(args.out))
    return 0


def cmd_baseline(args):
    train = [(pipeline.tokenize_text(text, lang, None, cid).tokens, flag)
             for cid, lang, flag, text in _load_annotated(args.train)]
    model = evalharness.nb_train(train, args.features)
    test = _load_annotated(args.test)
    pred, gold = {}, {}
    for cid, lang, flag, text in test:
        pred[cid] = evalharness.nb_predict(
            model, pipeline.tokenize_text(text, lang, None, cid).tokens)
        gold[cid] = flag
    truth = evalharness.AgreeGroundTruth(1, gold)
    rep = evalharness.metrics(pred, truth)
    text = evalharness.format_metrics({1: rep})
    sys.stdout.write(text)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        report.render_metrics({1: rep}, report.figure_path(args.out))
    return 0


def cmd_tune_thresholds(args):
    model = patterns.load_model(args.model)
    annotations = evalharness.load_annotations(args.annotations)
    import configparser

    parser = configparser.ConfigParser()
    if not parser.read(args.grid, encoding="utf-8"):
        raise ConfigError(f"cannot read grid config {args.grid}")
    section = parser["grid"] if "grid" in parser else parser[parser.sections()[0]]
    grid = {
        key: [float(v) for v in section[key].split(",")]
        for key in ("x1", "x2", "y1", "y2")
    }
    best = evalharness.grid_search_thresholds(model, annotations, grid)
    sys.stdout.write(
        f"x1\t{best.x1}\nx2\t{best.x2}\ny1\t{best.y1}\ny2\t{best.y2}\n")
    if args.out:
        sarcasm.save_thresholds({args.profile: best}, args.out)
    return 0


def cmd_pipeline(args):
    cfg = pipeline.load_pipeline_config(args.config)
    if args.seed is not None:
        cfg.seed = args.seed
    try:
        executed = pipeline.run_pipeline(cfg, no_build=args.no_build)
    except pipeline.StageError as exc:
        log.error("%s", exc)
        return exc.exit_code
    log.info("pipeline: executed stages %s", ", ".join(executed) or "(none)")
    return 0


# --------------------------------------------------------------------------
# Parser
# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="reaction-miner",
        description="Emotion pattern mining and sarcasm detection for "
                    "reaction-labeled short texts.")
    ap.add_argument("-v", "--verbose", action="store_true",
                    help="debug logging (default: info)")
    ap.add_argument("--threads", type=int, default=None,
                    help="worker cap (fallback: REACTION_MINER_THREADS)")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, help):
        p = sub.add_parser(name, help=help)
        p.set_defaults(fn=fn)
        return p

    p = add("synth", cmd_synth, "generate a deterministic synthetic corpus")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--comments-per-emotion", type=int, default=200)
    p.add_argument("--sarcasm-rate", type=float, default=0.0)
    p.add_argument("--lang", default="en", choices=corpus.SUPPORTED_LANGS)
    p.add_argument("--out-dir", required=True)

    p = add("ingest", cmd_ingest, "join comments with reactions into labels")
    p.add_argument("--comments", required=True)
    p.add_argument("--reactions", required=True)
    p.add_argument("--lang", default=None, choices=corpus.SUPPORTED_LANGS)
    p.add_argument("--out", required=True, help="labeled comments file")
    p.add_argument("--report", default=None,
                   help="distribution report file (figure written alongside)")

    p = add("build-lexicon", cmd_build_lexicon,
            "build the Chinese segmentation lexicon")
    p.add_argument("--input", nargs="+", required=True,
                   help="comment/post files (text field last)")
    p.add_argument("--threshold", type=int, default=5)
    p.add_argument("--out", required=True)

    p = add("build-graph", cmd_build_graph, "build a co-occurrence graph")
    p.add_argument("--input", nargs="+", required=True)
    p.add_argument("--lang", default=None, choices=corpus.SUPPORTED_LANGS)
    p.add_argument("--lexicon", default=None)
    p.add_argument("--out", required=True)

    p = add("reduce-graph", cmd_reduce_graph,
            "remove objectively dominant terms from the subjective graph")
    p.add_argument("--subjective", required=True)
    p.add_argument("--objective", required=True)
    p.add_argument("--dominance", type=float, default=0.5)
    p.add_argument("--out", required=True)

    p = add("extract-patterns", cmd_extract_patterns,
            "mine wildcard patterns and build the emotion model")
    p.add_argument("--graph", required=True, help="reduced graph file")
    p.add_argument("--labeled", required=True)
    p.add_argument("--lang", default=None, choices=corpus.SUPPORTED_LANGS)
    p.add_argument("--lexicon", default=None)
    p.add_argument("--min-freq", type=int, default=10)
    p.add_argument("--min-fillers", type=int, default=3)
    p.add_argument("--out", required=True)

    p = add("classify", cmd_classify, "score comments against the model")
    p.add_argument("--model", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--lang", default=None, choices=corpus.SUPPORTED_LANGS)
    p.add_argument("--lexicon", default=None)
    p.add_argument("--out", required=True)

    p = add("sarcasm", cmd_sarcasm, "label sarcasm for classified comments")
    p.add_argument("--model", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--thresholds", default=None, help="threshold config file")
    p.add_argument("--profile", default="en")
    p.add_argument("--lang", default=None, choices=corpus.SUPPORTED_LANGS)
    p.add_argument("--lexicon", default=None)
    p.add_argument("--out", required=True)

    p = add("learn-combos", cmd_learn_combos,
            "discover sarcasm-indicative emotion combinations")
    p.add_argument("--model", required=True)
    p.add_argument("--annotated", required=True,
                   help="comment_id/lang/sarcastic/text file")
    p.add_argument("--n", type=int, default=100, help="pattern budget per emotion")
    p.add_argument("--epochs", type=int, default=50)
    p.add_argument("--lr", type=float, default=0.1)
    p.add_argument("--arch", default="cnn", choices=("cnn", "logreg"))
    p.add_argument("--k", type=int, default=2, help="combos to select")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--lexicon", default=None)
    p.add_argument("--out", required=True)

    p = add("evaluate", cmd_evaluate, "score predictions against annotations")
    p.add_argument("--pred", required=True)
    p.add_argument("--annotations", required=True)
    p.add_argument("--level", type=int, default=None, choices=(1, 2, 3))
    p.add_argument("--out", default=None)

    p = add("baseline", cmd_baseline, "Naive Bayes baseline (BOW or TF-IDF)")
    p.add_argument("--features", required=True, choices=("bow", "tfidf"))
    p.add_argument("--train", required=True)
    p.add_argument("--test", required=True)
    p.add_argument("--out", default=None)

    p = add("tune-thresholds", cmd_tune_thresholds,
            "grid-search sarcasm thresholds against Agree-2 truth")
    p.add_argument("--model", required=True)
    p.add_argument("--annotations", required=True)
    p.add_argument("--grid", required=True, help="grid config file")
    p.add_argument("--profile", default="en")
    p.add_argument("--out", default=None)

    p = add("pipeline", cmd_pipeline, "run all stages from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--no-build", action="store_true",
                   help="fail instead of rebuilding stale stages")

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    os.environ.setdefault("REACTION_MINER_THREADS", str(_thread_cap(args)))
    try:
        return args.fn(args)
    except (ReactionMinerError, OSError) as exc:
        log.error("%s", exc)
        return 2


if __name__ == "__main__":
    sys.exit(main())

"""Staged pipeline orchestration: ingest -> (zh lexicon) -> graphs ->
reduce -> patterns -> classify -> sarcasm -> evaluate.

Stages are skipped when every output file is newer than every input file
(modification-time staleness rule). Each stage has a unique nonzero exit
code used by the CLI on failure.
"""

from __future__ import annotations

import configparser
import logging
import os
import time
from dataclasses import dataclass, field
from pathlib import Path

from reaction_miner import coocgraph, corpus, emoclass, evalharness, patterns, report, sarcasm, textproc
from reaction_miner.errors import ConfigError, ReactionMinerError

log = logging.getLogger(__name__)


@dataclass
class PipelineConfig:
    lang: str = "en"
    workdir: Path = Path(".")
    seed: int = 0
    comments: Path | None = None
    reactions: Path | None = None
    posts: Path | None = None
    annotations: Path | None = None
    lexicon_threshold: int = 5
    dominance: float = 0.5
    min_pattern_freq: int = 10
    min_fillers: int = 3
    thresholds_file: Path | None = None
    profile: str | None = None
    overrides: dict = field(default_factory=dict)

    def artifact(self, name: str) -> Path:
        return Path(self.workdir) / name


def load_pipeline_config(path) -> PipelineConfig:
    parser = configparser.ConfigParser()
    if not parser.read(path, encoding="utf-8"):
        raise ConfigError(f"cannot read pipeline config {path}")
    cfg = PipelineConfig()
    base = Path(path).resolve().parent
    if "pipeline" in parser:
        sec = parser["pipeline"]
        cfg.lang = sec.get("lang", cfg.lang)
        if cfg.lang not in corpus.SUPPORTED_LANGS:
            raise ConfigError(f"unsupported language {cfg.lang!r}")
        cfg.workdir = base / sec.get("workdir", ".")
        cfg.seed = sec.getint("seed", cfg.seed)
        for key in ("comments", "reactions", "posts", "annotations"):
            if key in sec:
                setattr(cfg, key, base / sec[key])
    if "lexicon" in parser:
        cfg.lexicon_threshold = parser["lexicon"].getint("threshold", 5)
    if "graph" in parser:
        cfg.dominance = parser["graph"].getfloat("dominance", 0.5)
    if "mining" in parser:
        sec = parser["mining"]
        cfg.min_pattern_freq = sec.getint("min_pattern_freq", 10)
        cfg.min_fillers = sec.getint("min_fillers", 3)
    if "sarcasm" in parser:
        sec = parser["sarcasm"]
        if "thresholds" in sec:
            cfg.thresholds_file = base / sec["thresholds"]
        cfg.profile = sec.get("profile", None)
    return cfg


def tokenize_text(text: str, lang: str, lexicon=None, source_id: str = ""):
    """Shared normalize-then-tokenize path for both languages."""
    normalized = textproc.normalize(text)
    if lang == "zh":
        if lexicon is None:
            raise ConfigError("Chinese tokenization requires a lexicon")
        return textproc.segment_zh(normalized, lexicon, source_id)
    return textproc.tokenize_en(normalized, source_id)


class StageError(ReactionMinerError):
    def __init__(self, stage: str, exit_code: int, cause: Exception):
        super().__init__(f"stage {stage} failed: {cause}")
        self.stage = stage
        self.exit_code = exit_code
        self.cause = cause


def _fresh(inputs, outputs) -> bool:
    """True when every output exists and is no older than every input."""
    outs = [Path(p) for p in outputs]
    ins = [Path(p) for p in inputs if p is not None]
    if not outs or not all(p.exists() for p in outs):
        return False
    if not ins:
        return True
    newest_in = max(p.stat().st_mtime for p in ins)
    oldest_out = min(p.stat().st_mtime for p in outs)
    return oldest_out >= newest_in


def run_pipeline(cfg: PipelineConfig, no_build: bool = False) -> list[str]:
    """Run all stages in order; returns the names of the stages executed.

    Raises StageError (carrying a stage-unique exit code) on failure.
    """
    for key in ("comments", "reactions", "posts"):
        path = getattr(cfg, key)
        if path is None or not Path(path).exists():
            raise StageError("validate", 9,
                             ConfigError(f"missing input file for {key!r}: {path}"))
    os.makedirs(cfg.workdir, exist_ok=True)

    labeled_path = cfg.artifact("labeled.tsv")
    dist_path = cfg.artifact("distribution.tsv")
    lexicon_path = cfg.artifact("lexicon.tsv")
    subj_path = cfg.artifact("subjective.graph")
    obj_path = cfg.artifact("objective.graph")
    reduced_path = cfg.artifact("reduced.graph")
    model_path = cfg.artifact("model.tsv")
    scores_path = cfg.artifact("scores.tsv")
    sarcasm_path = cfg.artifact("sarcasm.tsv")
    metrics_path = cfg.artifact("metrics.tsv")

    zh = cfg.lang == "zh"
    lexicon_inputs = [cfg.comments, cfg.posts]
    executed: list[str] = []

    def stage(name, code, inputs, outputs, fn):
        if _fresh(inputs, outputs):
            log.info("stage %-16s skipped (outputs up to date)", name)
            return
        if no_build:
            raise StageError(name, code,
                             ConfigError("stale outputs and --no-build given"))
        t0 = time.perf_counter()
        try:
            counts = fn()
        except StageError:
            raise
        except Exception as exc:
            raise StageError(name, code, exc) from exc
        executed.append(name)
        log.info("stage %-16s done in %.2fs (%s)", name,
                 time.perf_counter() - t0, counts or "no counts")

    def do_ingest():
        comments = corpus.load_comments(cfg.comments, cfg.lang).records
        reactions = corpus.load_reactions(cfg.reactions).records
        labeled = corpus.overlap_join(comments, reactions)
        corpus.save_labeled(labeled, labeled_path)
        dist = corpus.distribution(labeled)
        with open(dist_path, "w", encoding="utf-8") as fh:
            fh.write(corpus.format_distribution(dist))
        report.render_distribution({cfg.lang: dist}, report.figure_path(dist_path))
        return f"{len(comments)} comments, {len(labeled)} labeled"

    stage("ingest", 10, [cfg.comments, cfg.reactions],
          [labeled_path, dist_path], do_ingest)

    if zh:
        def do_lexicon():
            texts = [textproc.normalize(c.text)
                     for c in corpus.load_comments(cfg.comments, cfg.lang).records]
            texts += [textproc.normalize(p.text)
                      for p in corpus.load_posts(cfg.posts).records]
            lex = textproc.build_zh_lexicon(texts, cfg.lexicon_threshold)
            textproc.save_lexicon(lex, lexicon_path)
            return f"{len(lex)} lexicon entries"

        stage("lexicon", 11, lexicon_inputs, [lexicon_path], do_lexicon)

    def _lexicon():
        return textproc.load_lexicon(lexicon_path) if zh else None

    def do_graphs():
        lex = _lexicon()
        labeled = corpus.load_labeled(labeled_path)
        subj = coocgraph.build_graph(
            tokenize_text(lc.comment.text, cfg.lang, lex, lc.comment.id)
            for lc in labeled)
        posts = corpus.load_posts(cfg.posts).records
        obj = coocgraph.build_graph(
            tokenize_text(p.text, cfg.lang, lex, p.id) for p in posts)
        coocgraph.save_graph(subj, subj_path)
        coocgraph.save_graph(obj, obj_path)
        return f"{len(subj.nodes)} subjective / {len(obj.nodes)} objective nodes"

    stage("graphs", 12,
          [labeled_path, cfg.posts] + ([lexicon_path] if zh else []),
          [subj_path, obj_path], do_graphs)

    def do_reduce():
        subj = coocgraph.load_graph(subj_path)
        obj = coocgraph.load_graph(obj_path)
        reduced = coocgraph.reduce_graph(subj, obj, cfg.dominance)
        coocgraph.save_graph(reduced, reduced_path)
        return f"{len(reduced.removed)} nodes removed, {len(reduced.nodes)} kept"

    stage("reduce", 13, [subj_path, obj_path], [reduced_path], do_reduce)

    def do_patterns():
        lex = _lexicon()
        reduced = coocgraph.load_graph(reduced_path, reduced=True)
        labeled = corpus.load_labeled(labeled_path)
        params = patterns.MiningParams(cfg.min_pattern_freq, cfg.min_fillers)
        pats, stats = patterns.extract_patterns(
            reduced,
            ((tokenize_text(lc.comment.text, cfg.lang, lex, lc.comment.id),
              lc.label) for lc in labeled),
            params)
        model = patterns.build_model(pats, stats)
        patterns.save_model(model, model_path)
        return f"{len(model)} patterns"

    stage("patterns", 14,
          [reduced_path, labeled_path] + ([lexicon_path] if zh else []),
          [model_path], do_patterns)

    def do_classify():
        lex = _lexicon()
        model = patterns.load_model(model_path)
        labeled = corpus.load_labeled(labeled_path)
        with open(scores_path, "w", encoding="utf-8") as fh:
            for lc in labeled:
                sc = emoclass.classify(
                    tokenize_text(lc.comment.text, cfg.lang, lex, lc.comment.id),
                    model)
                fh.write(emoclass.format_scores(lc.comment.id, sc) + "\n")
        return f"{len(labeled)} comments scored"

    stage("classify", 15,
          [model_path, labeled_path] + ([lexicon_path] if zh else []),
          [scores_path], do_classify)

    def do_sarcasm():
        profile = cfg.profile or cfg.lang
        if cfg.thresholds_file:
            thresholds = sarcasm.load_thresholds(cfg.thresholds_file, profile)
        else:
            thresholds = sarcasm.DEFAULT_PROFILES[profile]
        n = 0
        with open(scores_path, encoding="utf-8") as src, \
                open(sarcasm_path, "w", encoding="utf-8") as dst:
            for line in src:
                fields = line.rstrip("\n").split("\t")
                cid, nosignal = fields[0], fields[-1] == "1"
                if nosignal:
                    dst.write(f"{cid}\t0\tNA\tNA\tNA\t0\tNoSignal\n")
                    continue
                vec = {}
                for i in range(5):
                    emo = fields[1 + 2 * i]
                    vec[emo] = float(fields[2 + 2 * i])
                sc = emoclass.scores_from_vector(
                    [vec[e.value] for e in emoclass.CANONICAL_ORDER])
                verdict = sarcasm.label_sarcasm(sc, thresholds)
                dst.write(sarcasm.format_verdict(cid, verdict) + "\n")
                n += 1
        return f"{n} comments labeled"

    stage("sarcasm", 16,
          [scores_path] + ([cfg.thresholds_file] if cfg.thresholds_file else []),
          [sarcasm_path], do_sarcasm)

    if cfg.annotations:
        def do_evaluate():
            annotations = evalharness.load_annotations(cfg.annotations)
            pred = read_predictions(sarcasm_path)
            reports = {}
            for level in (1, 2, 3):
                if level > annotations.n_annotators:
                    break
                truth = evalharness.agree_labels(annotations, level)
                covered = {i: pred.get(i, 0) for i in truth.labels}
                reports[level] = evalharness.metrics(covered, truth)
            with open(metrics_path, "w", encoding="utf-8") as fh:
                fh.write(evalharness.format_metrics(reports))
            report.render_metrics(reports, report.figure_path(metrics_path))
            return f"{len(reports)} agreement levels"

        stage("evaluate", 17, [sarcasm_path, cfg.annotations],
              [metrics_path], do_evaluate)

    return executed


def read_predictions(path) -> dict[str, int]:
    """Read sarcasm predictions from a 2-column `id<TAB>0|1` file or from
    the 7-column sarcasm stage output."""
    pred = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            fields = line.rstrip("\n").split("\t")
            if len(fields) >= 7:
                pred[fields[0]] = int(fields[5])
            elif len(fields) >= 2:
                pred[fields[0]] = int(fields[1])
    return pred

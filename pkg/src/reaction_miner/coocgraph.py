"""Directed word co-occurrence graphs and subjective-graph reduction.

Edge direction follows textual order; only adjacent tokens (window 1)
co-occur. Reduction drops nodes whose relative frequency in the objective
(news) graph dominates their relative frequency in the subjective
(comments) graph; punctuation Symbol nodes are exempt.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from reaction_miner.textproc import is_symbol


@dataclass
class CoocGraph:
    nodes: dict[str, int] = field(default_factory=dict)
    edges: dict[tuple[str, str], int] = field(default_factory=dict)

    @property
    def total_node_freq(self) -> int:
        return sum(self.nodes.values())


@dataclass
class ReducedGraph(CoocGraph):
    removed: set[str] = field(default_factory=set)


def build_graph(seqs) -> CoocGraph:
    """Count token occurrences (nodes) and adjacent pairs (directed edges)."""
    nodes: dict[str, int] = {}
    edges: dict[tuple[str, str], int] = {}
    for seq in seqs:
        toks = seq.tokens
        for t in toks:
            nodes[t] = nodes.get(t, 0) + 1
        for pair in zip(toks, toks[1:]):
            edges[pair] = edges.get(pair, 0) + 1
    return CoocGraph(nodes, edges)


def merge_graphs(a: CoocGraph, b: CoocGraph) -> CoocGraph:
    nodes = dict(a.nodes)
    for k, v in b.nodes.items():
        nodes[k] = nodes.get(k, 0) + v
    edges = dict(a.edges)
    for k, v in b.edges.items():
        edges[k] = edges.get(k, 0) + v
    return CoocGraph(nodes, edges)


def reduce_graph(subjective: CoocGraph, objective: CoocGraph,
                 dominance: float = 0.5) -> ReducedGraph:
    """Remove subjective-graph words dominant in the objective graph.

    A Word node w is removed iff rel_obj(w) >= dominance * rel_subj(w),
    where rel is node frequency over the graph's total node frequency.
    Symbol nodes are never removed. Edges touching removed nodes drop.
    """
    if not 0.0 < dominance <= 1.0:
        raise ValueError("dominance must lie in (0, 1]")
    subj_total = subjective.total_node_freq
    obj_total = objective.total_node_freq
    removed: set[str] = set()
    if subj_total:
        for word, freq in subjective.nodes.items():
            if is_symbol(word):
                continue
            obj_freq = objective.nodes.get(word, 0)
            if not obj_freq or not obj_total:
                continue
            rel_subj = freq / subj_total
            rel_obj = obj_freq / obj_total
            if rel_obj >= dominance * rel_subj:
                removed.add(word)
    nodes = {w: f for w, f in subjective.nodes.items() if w not in removed}
    edges = {
        (a, b): f
        for (a, b), f in subjective.edges.items()
        if a not in removed and b not in removed
    }
    return ReducedGraph(nodes, edges, removed)


def save_graph(graph: CoocGraph, path) -> None:
    """`#nodes N #edges M` header, then n/e lines, deterministic order."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"#nodes {len(graph.nodes)} #edges {len(graph.edges)}\n")
        for surface, freq in sorted(graph.nodes.items(), key=lambda kv: (-kv[1], kv[0])):
            fh.write(f"n\t{surface}\t{freq}\n")
        for (a, b), freq in sorted(graph.edges.items(), key=lambda kv: (-kv[1], kv[0])):
            fh.write(f"e\t{a}\t{b}\t{freq}\n")


def load_graph(path, reduced: bool = False) -> CoocGraph:
    nodes: dict[str, int] = {}
    edges: dict[tuple[str, str], int] = {}
    with open(path, encoding="utf-8") as fh:
        header = fh.readline()
        if not header.startswith("#nodes"):
            raise ValueError(f"{path}: missing graph header")
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if parts[0] == "n":
                nodes[parts[1]] = int(parts[2])
            elif parts[0] == "e":
                edges[(parts[1], parts[2])] = int(parts[3])
    if reduced:
        return ReducedGraph(nodes, edges, set())
    return CoocGraph(nodes, edges)

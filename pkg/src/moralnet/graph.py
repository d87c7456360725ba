"""Retweet graph construction, k-core extraction, and homophily scores.

The graph is undirected: a retweet from u of v contributes weight 1 to
the accumulated edge {u, v}. Only users that carry a moral label become
nodes, self-retweets are dropped, and a node exists only through at
least one kept edge.

Per node, homophily is the fraction of incident edge weight that
connects to a neighbour with the same label. Per label, it is the
unweighted mean of that fraction over the nodes carrying the label.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping
from xml.etree import ElementTree

import numpy as np

from ._kernels import edge_weight_sums, k_core_mask
from .errors import DataError
from .lexicon import BASIC_FOUNDATIONS, Foundation
from .textprep import TweetRecord

_FOUNDATION_CODE = {f: i for i, f in enumerate(BASIC_FOUNDATIONS)}


def _edge_key(a: str, b: str) -> tuple[str, str]:
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class RetweetNetwork:
    """Undirected weighted graph over morally labelled users.

    ``labels`` maps every node to its foundation; ``edges`` maps
    lexicographically ordered node pairs to accumulated integer weights.
    Every node is an endpoint of at least one edge.
    """

    labels: Mapping[str, Foundation]
    edges: Mapping[tuple[str, str], int]

    def __post_init__(self) -> None:
        for (a, b), w in self.edges.items():
            if a == b:
                raise DataError(f"self-loop on node {a!r}")
            if a > b:
                raise DataError(f"edge key ({a!r}, {b!r}) is not ordered")
            if w < 1:
                raise DataError(f"edge ({a!r}, {b!r}) has weight {w}")
            if a not in self.labels or b not in self.labels:
                raise DataError(f"edge ({a!r}, {b!r}) touches an unlabelled node")
        touched = {n for pair in self.edges for n in pair}
        isolated = set(self.labels) - touched
        if isolated:
            name = sorted(isolated)[0]
            raise DataError(f"node {name!r} has no incident edges")

    @property
    def num_nodes(self) -> int:
        return len(self.labels)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def node_ids(self) -> tuple[str, ...]:
        return tuple(sorted(self.labels))

    @classmethod
    def from_edges(
        cls,
        edges: Iterable[tuple[str, str, int]],
        labels: Mapping[str, Foundation],
    ) -> "RetweetNetwork":
        """Accumulate an edge list; endpoints must appear in ``labels``."""
        acc: dict[tuple[str, str], int] = {}
        for a, b, w in edges:
            if a == b:
                raise DataError(f"self-loop on node {a!r}")
            if a not in labels or b not in labels:
                raise DataError(f"edge ({a!r}, {b!r}) touches an unlabelled node")
            key = _edge_key(a, b)
            acc[key] = acc.get(key, 0) + int(w)
        kept = {n for pair in acc for n in pair}
        return cls(
            labels={u: labels[u] for u in sorted(kept)},
            edges=dict(sorted(acc.items())),
        )


def build_network(
    records: Iterable[TweetRecord],
    user_labels: Mapping[str, Foundation],
) -> RetweetNetwork:
    """Accumulate the retweet graph restricted to labelled users.

    Records that are not retweets, self-retweets, and retweets where
    either side lacks a label are skipped.
    """
    acc: dict[tuple[str, str], int] = {}
    for rec in records:
        if not rec.is_retweet:
            continue
        u = rec.user_id
        v = rec.retweet_of_user_id
        assert v is not None
        if u == v:
            continue
        if u not in user_labels or v not in user_labels:
            continue
        key = _edge_key(u, v)
        acc[key] = acc.get(key, 0) + 1
    kept = {n for pair in acc for n in pair}
    return RetweetNetwork(
        labels={u: user_labels[u] for u in sorted(kept)},
        edges=dict(sorted(acc.items())),
    )


def _encode(
    net: RetweetNetwork,
) -> tuple[list[str], np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Map the network onto index arrays in canonical node order."""
    nodes = sorted(net.labels)
    index = {u: i for i, u in enumerate(nodes)}
    pairs = sorted(net.edges.items())
    src = np.array([index[a] for (a, _), _ in pairs], dtype=np.int64)
    dst = np.array([index[b] for (_, b), _ in pairs], dtype=np.int64)
    weight = np.array([w for _, w in pairs], dtype=np.int64)
    codes = np.array([_FOUNDATION_CODE[net.labels[u]] for u in nodes], dtype=np.int64)
    return nodes, src, dst, weight, codes


def k_core(net: RetweetNetwork, k: int) -> RetweetNetwork:
    """Largest subgraph where every node keeps degree >= k.

    Degree counts distinct neighbours, not edge weight. The result can
    be empty.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    nodes, src, dst, _, _ = _encode(net)
    alive = k_core_mask(src, dst, len(nodes), k)
    kept = {nodes[i] for i in range(len(nodes)) if alive[i]}
    edges = {
        pair: w
        for pair, w in net.edges.items()
        if pair[0] in kept and pair[1] in kept
    }
    return RetweetNetwork(
        labels={u: net.labels[u] for u in sorted(kept)},
        edges=dict(sorted(edges.items())),
    )


def node_homophily(net: RetweetNetwork, node_id: str) -> float:
    """Fraction of the node's incident edge weight going to same-label
    neighbours."""
    if node_id not in net.labels:
        raise DataError(f"unknown node {node_id!r}")
    label = net.labels[node_id]
    same = 0
    total = 0
    for (a, b), w in net.edges.items():
        if a == node_id:
            other = b
        elif b == node_id:
            other = a
        else:
            continue
        total += w
        if net.labels[other] is label:
            same += w
    return same / total


@dataclass(frozen=True)
class HomophilyReport:
    """Per-node and per-label homophily of one network."""

    node_scores: Mapping[str, float]
    label_scores: Mapping[Foundation, float | None]
    label_counts: Mapping[Foundation, int]

    def rows(self) -> Iterator[tuple[str, object, int]]:
        for f in BASIC_FOUNDATIONS:
            score = self.label_scores[f]
            yield f.value, ("" if score is None else score), self.label_counts[f]


def network_homophily(net: RetweetNetwork) -> HomophilyReport:
    """Score every node, then average per label.

    A label with no nodes in the network gets a ``None`` score.
    """
    nodes, src, dst, weight, codes = _encode(net)
    if nodes:
        same, total = edge_weight_sums(src, dst, weight, codes, len(nodes))
        h = same / total
    else:
        h = np.zeros(0, dtype=np.float64)
    node_scores = {u: float(h[i]) for i, u in enumerate(nodes)}
    label_scores: dict[Foundation, float | None] = {}
    label_counts: dict[Foundation, int] = {}
    for f in BASIC_FOUNDATIONS:
        mask = codes == _FOUNDATION_CODE[f]
        count = int(np.count_nonzero(mask))
        label_counts[f] = count
        label_scores[f] = float(np.sum(h[mask]) / count) if count else None
    return HomophilyReport(
        node_scores=node_scores,
        label_scores=label_scores,
        label_counts=label_counts,
    )


# ------------------------------------------------------------- edge rows

EDGE_HEADER = ("src", "dst", "weight", "src_label", "dst_label")


def edge_rows(net: RetweetNetwork) -> Iterator[tuple[str, str, int, str, str]]:
    """Edge list rows in canonical order, labels spelled out per side."""
    for (a, b), w in sorted(net.edges.items()):
        yield a, b, w, net.labels[a].value, net.labels[b].value


def network_from_edge_rows(
    rows: Iterable[tuple[str, str, str, str, str]],
) -> RetweetNetwork:
    """Rebuild a network from rows shaped like ``edge_rows`` output."""
    labels: dict[str, Foundation] = {}
    edges: list[tuple[str, str, int]] = []
    for n, row in enumerate(rows, start=1):
        if len(row) != 5:
            raise DataError(f"edge row {n}: expected 5 fields, got {len(row)}")
        a, b, w_raw, la_raw, lb_raw = row
        try:
            w = int(w_raw)
        except ValueError:
            raise DataError(f"edge row {n}: bad weight {w_raw!r}") from None
        for node, raw in ((a, la_raw), (b, lb_raw)):
            try:
                label = Foundation(raw)
            except ValueError:
                raise DataError(f"edge row {n}: unknown label {raw!r}") from None
            if labels.setdefault(node, label) is not label:
                raise DataError(f"edge row {n}: conflicting labels for {node!r}")
        edges.append((a, b, w))
    return RetweetNetwork.from_edges(edges, labels)


# ----------------------------------------------------------------- export

def to_gexf(net: RetweetNetwork) -> str:
    """Serialize for graph tools; node labels ride along as an attribute."""
    root = ElementTree.Element(
        "gexf", xmlns="http://www.gexf.net/1.2draft", version="1.2"
    )
    graph = ElementTree.SubElement(
        root, "graph", defaultedgetype="undirected", mode="static"
    )
    attrs = ElementTree.SubElement(graph, "attributes")
    attrs.set("class", "node")
    ElementTree.SubElement(
        attrs, "attribute", id="0", title="foundation", type="string"
    )
    nodes_el = ElementTree.SubElement(graph, "nodes")
    for u in sorted(net.labels):
        node_el = ElementTree.SubElement(nodes_el, "node", id=u, label=u)
        values = ElementTree.SubElement(node_el, "attvalues")
        ElementTree.SubElement(
            values, "attvalue", **{"for": "0", "value": net.labels[u].value}
        )
    edges_el = ElementTree.SubElement(graph, "edges")
    for i, ((a, b), w) in enumerate(sorted(net.edges.items())):
        ElementTree.SubElement(
            edges_el, "edge", id=str(i), source=a, target=b, weight=str(w)
        )
    ElementTree.indent(root)
    return ElementTree.tostring(root, encoding="unicode", xml_declaration=True) + "\n"

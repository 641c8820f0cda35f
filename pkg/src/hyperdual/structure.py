"""Ribbon-graph expansion, alternation, intersection graphs and join decomposition."""

from __future__ import annotations

from dataclasses import dataclass, field

import networkx as nx

from .core import (
    HEAD,
    TAIL,
    ArrowPresentation,
    FlagStructure,
    arrows_from_flags,
    classify,
    count_summary,
    edge_flags,
    flags_from_arrows,
    labelled,
    restrict,
)
from .duality import full_dual
from .polynomial import join_presentations, partial_dual_polynomial


class NotABouquet(ValueError):
    pass


class NotPrimeConnected(ValueError):
    pass


@dataclass(frozen=True)
class RibbonExpansion:
    """Hypervertices plus one central vertex per hyperedge, one edge per arrow.

    Hypervertex nodes are ``("v", i)`` for curve ``i`` of the presentation and
    central vertices are ``("c", edge_id)``.  ``rings[i]`` lists the arrows
    ``(edge_id, index)`` around hypervertex ``i`` in cyclic order.
    """

    presentation: ArrowPresentation
    nodes: tuple
    edges: tuple
    rings: tuple
    ribbon_graph: FlagStructure = field(repr=False)

    def graph(self):
        g = nx.MultiGraph()
        g.add_nodes_from(self.nodes)
        for arrow, u, w in self.edges:
            g.add_edge(u, w, key=arrow)
        return g


def _ribbon_graph(fs):
    """Ribbon graph of ``fs``: each hyperedge disc shrinks to a central vertex.

    Every arrow ``e_i`` becomes a band with old-side flags ``t, h`` and
    central-side flags ``t', h'``; the central vertex boundary runs from
    ``h'_i`` to ``t'_{i+1}``.
    """
    n = fs.flag_count
    alpha = list(fs.alpha) + [0] * n
    beta = [0] * (2 * n)
    gamma = list(fs.gamma) + [0] * n
    labels = [None] * (2 * n)
    for e, fl in edge_flags(fs).items():
        deg = len(fl) // 2
        for i in range(deg):
            t, h = fl[2 * i], fl[2 * i + 1]
            tp, hp = t + n, h + n
            beta[t], beta[tp] = tp, t
            beta[h], beta[hp] = hp, h
            gamma[tp], gamma[hp] = hp, tp
            nxt = fl[(2 * i + 2) % len(fl)] + n
            alpha[hp], alpha[nxt] = nxt, hp
            band = f"{e}_{i + 1}"
            labels[t], labels[h] = (band, 1, TAIL), (band, 1, HEAD)
            labels[hp], labels[tp] = (band, 2, TAIL), (band, 2, HEAD)
    return FlagStructure(alpha, beta, gamma, fs.isolated, tuple(labels))


def _expand(ap, fs):
    degrees = ap.degrees()
    nodes = tuple(("v", i) for i in range(len(ap.curves))) + tuple(("c", e) for e in degrees)
    edges = tuple(
        (occ.arrow, ("c", occ.edge), ("v", i)) for i, curve in enumerate(ap.curves) for occ in curve
    )
    rings = tuple(tuple(occ.arrow for occ in curve) for curve in ap.curves)
    return RibbonExpansion(ap, nodes, edges, rings, _ribbon_graph(fs))


def ribbon_expansion(fs: FlagStructure) -> RibbonExpansion:
    fs = labelled(fs)
    return _expand(arrows_from_flags(fs), fs)


def components_excluding_vertex(re: RibbonExpansion, v: int) -> list:
    """Label each position of ``v``'s ring by the component of its central vertex in R(H) - v."""
    if not 0 <= v < len(re.rings):
        raise KeyError(f"unknown hypervertex {v}")
    g = re.graph()
    g.remove_node(("v", v))
    comp = {}
    for c, nodes in enumerate(sorted(nx.connected_components(g), key=min)):
        for node in nodes:
            comp[node] = c
    return [comp["c", edge] for edge, _ in re.rings[v]]


def _alternating_positions(labels):
    """Positions (p1, p2, p3, p4) with labels C, C', C, C' in cyclic order, or None."""
    n = len(labels)
    distinct = sorted(set(labels))
    for i, a in enumerate(distinct):
        for b in distinct[i + 1 :]:
            pos = [p for p in range(n) if labels[p] in (a, b)]
            # cyclic runs of the two-letter word; >= 4 runs means a..b..a..b
            runs = [p for j, p in enumerate(pos) if labels[p] != labels[pos[j - 1]]]
            if len(runs) >= 4:
                return tuple(runs[:4])
    return None


def alternating_quadruple(fs: FlagStructure, v: int, expansion: RibbonExpansion | None = None):
    """Four arrows alternating at hypervertex ``v``, or ``None``.

    ``v`` indexes the curves of ``arrows_from_flags(fs)``.
    """
    re = expansion or ribbon_expansion(fs)
    labels = components_excluding_vertex(re, v)
    hit = _alternating_positions(labels)
    if hit is None:
        return None
    return tuple(re.rings[v][p] for p in hit)


@dataclass(frozen=True)
class IntersectionGraph:
    vertices: tuple
    edges: tuple

    def to_networkx(self):
        g = nx.Graph()
        g.add_nodes_from(self.vertices)
        g.add_edges_from(self.edges)
        return g

    def is_bipartite(self):
        return nx.is_bipartite(self.to_networkx())

    def to_dot(self):
        lines = ["graph I {"]
        lines += [f"  {v};" for v in self.vertices]
        lines += [f"  {a} -- {b};" for a, b in self.edges]
        lines.append("}")
        return "\n".join(lines) + "\n"


def _bouquet_ring(fs):
    fs = labelled(fs)
    ap = arrows_from_flags(fs)
    if len(ap.curves) != 1:
        raise NotABouquet(f"expected exactly one hypervertex, found {len(ap.curves)}")
    return ap.curves[0]


def intersection_graph(fs: FlagStructure) -> IntersectionGraph:
    """Hyperedges of a bouquet, adjacent when their arrows interleave around the vertex."""
    ring = _bouquet_ring(fs)
    word = [occ.edge for occ in ring]
    names = sorted(set(word))
    adj = []
    for i, a in enumerate(names):
        for b in names[i + 1 :]:
            if _alternating_positions([x for x in word if x in (a, b)]) is not None:
                adj.append((a, b))
    return IntersectionGraph(tuple(names), tuple(adj))


def constant_term_criterion(fs: FlagStructure) -> bool:
    """Bouquet test: intersection graph bipartite and every single hyperedge plane."""
    fs = labelled(fs)
    ig = intersection_graph(fs)
    return ig.is_bipartite() and all(count_summary(restrict(fs, {e})).epsilon == 0 for e in ig.vertices)


# ---------------------------------------------------------------------------
# One-vertex-join decomposition
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class JoinNode:
    """``left`` joined to ``right`` at the arcs following arrows ``left_anchor`` and ``right_anchor``."""

    left: object
    right: object
    left_anchor: tuple
    right_anchor: tuple


def _find_split(ap: ArrowPresentation):
    re = _expand(ap, flags_from_arrows(ap))
    for ci, curve in enumerate(ap.curves):
        n = len(curve)
        if n < 2:
            continue
        labels = components_excluding_vertex(re, ci)
        for start in range(n):
            for length in range(1, n):
                inside = {labels[(start + j) % n] for j in range(length)}
                outside = {labels[(start + j) % n] for j in range(length, n)}
                if inside.isdisjoint(outside):
                    return ci, start, length, inside, re
    return None


def _split(ap: ArrowPresentation):
    found = _find_split(ap)
    if found is None:
        return None
    ci, start, length, _, re = found
    curve = ap.curves[ci]
    n = len(curve)
    inner = tuple(curve[(start + j) % n] for j in range(length))
    outer = tuple(curve[(start + j) % n] for j in range(length, n))
    g = re.graph()
    g.remove_node(("v", ci))
    near = set()
    for occ in inner:
        near |= nx.node_connected_component(g, ("c", occ.edge))

    left, right = [inner], [outer]
    for i, other in enumerate(ap.curves):
        if i != ci:
            (left if ("v", i) in near else right).append(other)
    return (
        ArrowPresentation(tuple(left)),
        ArrowPresentation(tuple(right)),
        inner[-1].arrow,
        outer[-1].arrow,
    )


def _require_connected(fs):
    s = count_summary(fs)
    if s.k != 1:
        raise NotPrimeConnected("join decomposition needs a connected hypermap")
    return s


def decomposition_tree(fs: FlagStructure):
    """Binary tree of :class:`JoinNode` whose leaves are prime factors (as presentations)."""
    fs = labelled(fs)
    _require_connected(fs)

    def build(ap):
        parts = _split(ap)
        if parts is None:
            return ap
        left, right, la, ra = parts
        return JoinNode(build(left), build(right), la, ra)

    return build(arrows_from_flags(fs))


def _locate(ap, arrow):
    for c, curve in enumerate(ap.curves):
        for p, occ in enumerate(curve):
            if occ.arrow == arrow:
                return c, p
    raise KeyError(arrow)


def rejoin(tree) -> ArrowPresentation:
    """Inverse of :func:`decomposition_tree`."""
    if isinstance(tree, ArrowPresentation):
        return tree
    left, right = rejoin(tree.left), rejoin(tree.right)
    return join_presentations(left, _locate(left, tree.left_anchor), right, _locate(right, tree.right_anchor))


def join_decompose(fs: FlagStructure) -> list:
    """Prime factors of a connected hypermap; a single-element list means prime."""

    def leaves(t):
        if isinstance(t, ArrowPresentation):
            return [flags_from_arrows(t)]
        return leaves(t.left) + leaves(t.right)

    return leaves(decomposition_tree(fs))


def is_prime(fs: FlagStructure) -> bool:
    fs = labelled(fs)
    _require_connected(fs)
    return _split(arrows_from_flags(fs)) is None


def constant_poly_criterion(fs: FlagStructure) -> bool:
    """For prime connected input: plane with exactly one hyperedge."""
    if not is_prime(fs):
        raise NotPrimeConnected("hypermap is not prime")
    s = count_summary(fs)
    return s.k == 1 and s.epsilon == 0 and s.e == 1


def hypertree_duality_check(fs: FlagStructure) -> tuple:
    """``(plane bouquet?, full dual is a hypertree?)``; the two must agree."""
    c = classify(fs)
    lhs = c.is_plane and c.is_bouquet
    rhs = classify(full_dual(fs)).is_hypertree
    return lhs, rhs


def plane_bouquet_polynomial_ok(fs: FlagStructure) -> bool:
    """When ``fs`` is a plane bouquet its polynomial must be the constant ``2**e``."""
    c = classify(fs)
    if not (c.is_plane and c.is_bouquet):
        return True
    return partial_dual_polynomial(fs) == 2 ** count_summary(fs).e

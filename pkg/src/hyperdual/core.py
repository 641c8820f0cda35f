"""Ribbon hypermaps: arrow presentations, the flag model, counts and canonical forms.

A hypermap is stored as a set of ``2d`` flags (the two endpoints of each common
line segment) carrying three fixed-point-free involutions:

* ``alpha`` joins endpoints connected by a free boundary arc of a hypervertex,
* ``beta`` joins endpoints connected by a free boundary arc of a hyperedge,
* ``gamma`` joins the two endpoints of a common line segment.

Hypervertices, hyperedges and hyperfaces are the orbits of ``<alpha, gamma>``,
``<beta, gamma>`` and ``<alpha, beta>``.  Hypervertices meeting no hyperedge
carry no flags and are kept in the ``isolated`` counter.

Arrow presentations are the text-facing form; see :func:`parse_arrow_presentation`.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

TAIL = "tail"
HEAD = "head"

_EDGE_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")
_OCC_RE = re.compile(r"([A-Za-z][A-Za-z0-9_]*)\.([0-9]+)(.?)\Z", re.S)


class HmapError(ValueError):
    """Malformed hmap text or an invalid arrow presentation."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)


# ---------------------------------------------------------------------------
# Arrow presentations
# ---------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class Occurrence:
    """One arrow ``edge.index`` on a vertex curve, traversed along (+) or against (-) it."""

    edge: str
    index: int
    sign: str = "+"

    def __post_init__(self):
        if self.sign not in ("+", "-"):
            raise HmapError(f"unknown sign token {self.sign!r}")
        if not isinstance(self.index, int) or self.index < 1:
            raise HmapError(f"arrow index must be a positive integer, got {self.index!r}")
        if not _EDGE_RE.match(self.edge):
            raise HmapError(f"invalid edge id {self.edge!r}")

    @property
    def arrow(self):
        return (self.edge, self.index)

    def flipped(self):
        return Occurrence(self.edge, self.index, "-" if self.sign == "+" else "+")

    def __str__(self):
        return f"{self.edge}.{self.index}{self.sign}"


@dataclass(frozen=True)
class ArrowPresentation:
    """Closed curves (hypervertices) carrying labelled arrows (hyperedge incidences).

    Each curve is a cyclic tuple of :class:`Occurrence`; an empty curve is an
    isolated hypervertex.  Use :func:`canonical_form` on the flag structure to
    compare two presentations; field equality is only literal equality.
    """

    curves: tuple = ()
    name: str | None = None

    def __post_init__(self):
        curves = tuple(tuple(c) for c in self.curves)
        object.__setattr__(self, "curves", curves)
        seen = set()
        indices = {}
        for curve in curves:
            for occ in curve:
                if not isinstance(occ, Occurrence):
                    raise HmapError(f"curve entries must be Occurrence, got {occ!r}")
                if occ.arrow in seen:
                    raise HmapError(f"duplicate arrow occurrence {occ.edge}.{occ.index}")
                seen.add(occ.arrow)
                indices.setdefault(occ.edge, set()).add(occ.index)
        for edge, idx in indices.items():
            missing = sorted(set(range(1, max(idx) + 1)) - idx)
            if missing:
                raise HmapError(
                    f"index gap for edge {edge}: missing "
                    + ", ".join(f"{edge}.{i}" for i in missing)
                )

    def degrees(self):
        """Map edge id -> degree."""
        out = {}
        for curve in self.curves:
            for occ in curve:
                out[occ.edge] = max(out.get(occ.edge, 0), occ.index)
        return dict(sorted(out.items()))

    @property
    def edges(self):
        return sorted(self.degrees())

    def normalized(self):
        """Rotate each curve to start at its least occurrence and sort the curves.

        Curves are ordered by their smallest arrow; isolated vertices go last.
        Curve orientation is left alone.
        """
        rotated = []
        for curve in self.curves:
            if curve:
                i = min(range(len(curve)), key=lambda j: (curve[j].edge, curve[j].index, curve[j].sign))
                curve = curve[i:] + curve[:i]
            rotated.append(curve)
        rotated.sort(key=lambda c: (0, min(o.arrow for o in c)) if c else (1, ("", 0)))
        return ArrowPresentation(tuple(rotated), self.name)


def parse_arrow_presentation(text: str) -> ArrowPresentation:
    """Parse an hmap document.

    >>> ap = parse_arrow_presentation("vertex: a.1+ b.1+ a.2+ b.2+")
    >>> ap.degrees()
    {'a': 2, 'b': 2}
    """
    name = None
    curves = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        key, sep, rest = line.partition(":")
        key = key.strip()
        if not sep:
            raise HmapError("expected 'name:' or 'vertex:'", lineno, 1)
        rest_col = len(key) + 2
        if key == "name":
            if name is not None:
                raise HmapError("duplicate name line", lineno, 1)
            name = rest.strip()
            if not _EDGE_RE.match(name):
                raise HmapError(f"invalid name {name!r}", lineno, rest_col)
            continue
        if key != "vertex":
            raise HmapError(f"unknown directive {key!r}", lineno, 1)
        curve = []
        for m in re.finditer(r"\S+", rest):
            col = line.index(":") + 2 + m.start()
            curve.append(_parse_occurrence(m.group(), lineno, col))
        curves.append(curve)
    try:
        return ArrowPresentation(tuple(curves), name)
    except HmapError as exc:
        raise HmapError(str(exc)) from None


def _parse_occurrence(token, lineno, col):
    m = _OCC_RE.match(token)
    if not m:
        if "." not in token:
            raise HmapError(f"malformed arrow {token!r}, expected <edge>.<index><sign>", lineno, col)
        raise HmapError(f"malformed arrow {token!r}", lineno, col)
    edge, index, sign = m.groups()
    if sign == "−":
        raise HmapError(f"unicode minus in {token!r}; use ASCII '-'", lineno, col)
    if sign not in ("+", "-"):
        raise HmapError(f"unknown sign token {sign!r} in {token!r}", lineno, col)
    if int(index) < 1:
        raise HmapError(f"arrow index must be >= 1 in {token!r}", lineno, col)
    return Occurrence(edge, int(index), sign)


def serialize_arrow_presentation(ap: ArrowPresentation, normalize: bool = True) -> str:
    if normalize:
        ap = ap.normalized()
    lines = []
    if ap.name:
        lines.append(f"name: {ap.name}")
    for curve in ap.curves:
        body = " ".join(str(o) for o in curve)
        lines.append(f"vertex: {body}" if body else "vertex:")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Flag structures
# ---------------------------------------------------------------------------


def _check_involution(p, n, name):
    if len(p) != n:
        raise ValueError(f"{name} has length {len(p)}, expected {n}")
    for x, y in enumerate(p):
        if not 0 <= y < n or y == x or p[y] != x:
            raise ValueError(f"{name} is not a fixed-point-free involution at flag {x}")


@dataclass(frozen=True)
class FlagStructure:
    """Three fixed-point-free involutions on ``range(2d)`` plus isolated vertices.

    ``labels[x]`` is ``(edge_id, index, end)`` with ``end`` in ``{"tail", "head"}``;
    it may be ``None`` for unlabelled structures (see :func:`labelled`).
    """

    alpha: tuple
    beta: tuple
    gamma: tuple
    isolated: int = 0
    labels: tuple | None = None

    def __post_init__(self):
        for attr in ("alpha", "beta", "gamma"):
            object.__setattr__(self, attr, tuple(getattr(self, attr)))
        n = len(self.alpha)
        if n % 2:
            raise ValueError("flag count must be even")
        for attr in ("alpha", "beta", "gamma"):
            _check_involution(getattr(self, attr), n, attr)
        if self.isolated < 0:
            raise ValueError("isolated must be non-negative")
        if self.labels is not None:
            labels = tuple(tuple(lab) for lab in self.labels)
            object.__setattr__(self, "labels", labels)
            _check_labels(self)

    @property
    def flag_count(self):
        return len(self.alpha)

    @property
    def perms(self):
        return (self.alpha, self.beta, self.gamma)

    def to_json(self):
        def pairs(p):
            return [[x, y] for x, y in enumerate(p) if x < y]

        out = {
            "flags": self.flag_count,
            "alpha": pairs(self.alpha),
            "beta": pairs(self.beta),
            "gamma": pairs(self.gamma),
            "isolated": self.isolated,
        }
        if self.labels is not None:
            out["labels"] = {str(x): list(lab) for x, lab in enumerate(self.labels)}
        return out

    @classmethod
    def from_json(cls, data):
        n = data["flags"]

        def perm(pairs):
            p = [-1] * n
            for x, y in pairs:
                p[x], p[y] = y, x
            return p

        labels = None
        if "labels" in data:
            labels = tuple(
                (lab[0], int(lab[1]), lab[2]) for _, lab in sorted(data["labels"].items(), key=lambda kv: int(kv[0]))
            )
        return cls(perm(data["alpha"]), perm(data["beta"]), perm(data["gamma"]), data.get("isolated", 0), labels)

    def dumps(self):
        return json.dumps(self.to_json(), sort_keys=True)


def _check_labels(fs):
    labels = fs.labels
    if len(labels) != fs.flag_count:
        raise ValueError("labels must cover every flag")
    where = {}
    for x, (edge, index, end) in enumerate(labels):
        if end not in (TAIL, HEAD) or (edge, index, end) in where:
            raise ValueError(f"bad or duplicate label at flag {x}")
        where[edge, index, end] = x
    degrees = {}
    for edge, index, _ in labels:
        degrees[edge] = max(degrees.get(edge, 0), index)
    for (edge, index, end), x in where.items():
        if end == TAIL:
            h = where.get((edge, index, HEAD))
            if h is None or fs.gamma[x] != h:
                raise ValueError(f"gamma does not join {edge}.{index} tail and head")
        else:
            nxt = where.get((edge, index % degrees[edge] + 1, TAIL))
            if nxt is None or fs.beta[x] != nxt:
                raise ValueError(f"beta does not join head of {edge}.{index} to the next tail")


def orbits(n: int, *perms: Sequence[int]) -> tuple[int, list[int]]:
    """Number of orbits of the group generated by ``perms`` on ``range(n)``, and a flag -> orbit map."""
    comp = [-1] * n
    count = 0
    for s in range(n):
        if comp[s] >= 0:
            continue
        comp[s] = count
        stack = [s]
        while stack:
            x = stack.pop()
            for p in perms:
                y = p[x]
                if comp[y] < 0:
                    comp[y] = count
                    stack.append(y)
        count += 1
    return count, comp


def _edge_name(i):
    letters = "abcdefghijklmnopqrstuvwxyz"
    return letters[i] if i < 26 else f"e{i}"


def derive_labels(fs: FlagStructure) -> tuple:
    """Label flags by walking each ``<beta, gamma>`` orbit from its smallest flag.

    Hyperedges are named a, b, c, ... in order of their smallest flag.
    """
    n = fs.flag_count
    labels = [None] * n
    count = 0
    for s in range(n):
        if labels[s] is not None:
            continue
        edge = _edge_name(count)
        count += 1
        x, i = s, 1
        while True:
            h = fs.gamma[x]
            labels[x] = (edge, i, TAIL)
            labels[h] = (edge, i, HEAD)
            x = fs.beta[h]
            i += 1
            if x == s:
                break
    return tuple(labels)


def labelled(fs: FlagStructure) -> FlagStructure:
    """Return ``fs`` itself if it carries labels, else a copy with derived labels."""
    if fs.labels is not None:
        return fs
    return FlagStructure(fs.alpha, fs.beta, fs.gamma, fs.isolated, derive_labels(fs))


def edge_flags(fs: FlagStructure) -> dict:
    """Map edge id -> flags ``[t1, h1, t2, h2, ...]`` in arrow order."""
    labels = fs.labels if fs.labels is not None else derive_labels(fs)
    out = {}
    for x, (edge, index, end) in enumerate(labels):
        out.setdefault(edge, []).append((index, end == HEAD, x))
    return {e: [x for *_, x in sorted(v)] for e, v in sorted(out.items())}


def edge_ids(fs: FlagStructure) -> list:
    return list(edge_flags(fs))


def flags_from_arrows(ap: ArrowPresentation) -> FlagStructure:
    """Build the flag structure of an arrow presentation.

    Flags are numbered in curve order; each occurrence contributes its two
    endpoints in traversal order (tail first for ``+``).
    """
    labels = []
    alpha = []
    isolated = 0
    for curve in ap.curves:
        if not curve:
            isolated += 1
            continue
        base = len(labels)
        for occ in curve:
            ends = (TAIL, HEAD) if occ.sign == "+" else (HEAD, TAIL)
            for end in ends:
                labels.append((occ.edge, occ.index, end))
        m = 2 * len(curve)
        # second endpoint of occurrence j meets first endpoint of occurrence j+1
        local = [0] * m
        for j in range(len(curve)):
            a, b = 2 * j + 1, (2 * j + 2) % m
            local[a], local[b] = b, a
        alpha.extend(base + y for y in local)
    where = {lab: x for x, lab in enumerate(labels)}
    degrees = ap.degrees()
    beta = [0] * len(labels)
    gamma = [0] * len(labels)
    for x, (edge, index, end) in enumerate(labels):
        if end == TAIL:
            gamma[x] = where[edge, index, HEAD]
            prev = (index - 2) % degrees[edge] + 1
            beta[x] = where[edge, prev, HEAD]
        else:
            gamma[x] = where[edge, index, TAIL]
            beta[x] = where[edge, index % degrees[edge] + 1, TAIL]
    return FlagStructure(alpha, beta, gamma, isolated, tuple(labels))


def arrows_from_flags(fs: FlagStructure, name: str | None = None) -> ArrowPresentation:
    """Trace the ``<alpha, gamma>`` orbits into curves.

    Each curve starts at its smallest flag and alternates gamma and alpha steps.
    """
    if fs.labels is None:
        raise ValueError("flag structure carries no labels; use labelled(fs) first")
    n = fs.flag_count
    seen = [False] * n
    curves = []
    for s in range(n):
        if seen[s]:
            continue
        curve = []
        x = s
        while not seen[x]:
            y = fs.gamma[x]
            seen[x] = seen[y] = True
            edge, index, end = fs.labels[x]
            curve.append(Occurrence(edge, index, "+" if end == TAIL else "-"))
            x = fs.alpha[y]
        curves.append(tuple(curve))
    curves.extend(() for _ in range(fs.isolated))
    return ArrowPresentation(tuple(curves), name)


# ---------------------------------------------------------------------------
# Counts and classification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CountSummary:
    v: int
    e: int
    f: int
    d: int
    k: int
    chi: int
    epsilon: int
    orientable: bool

    def render(self):
        return (
            f"v={self.v} e={self.e} f={self.f} d={self.d} k={self.k} "
            f"chi={self.chi} epsilon={self.epsilon} orientable={'yes' if self.orientable else 'no'}"
        )

    def to_json(self):
        return dict(vars(self))


def is_orientable(fs: FlagStructure) -> bool:
    """Whether the flag graph (all three matchings) is bipartite."""
    n = fs.flag_count
    color = [-1] * n
    for s in range(n):
        if color[s] >= 0:
            continue
        color[s] = 0
        stack = [s]
        while stack:
            x = stack.pop()
            for p in fs.perms:
                y = p[x]
                if color[y] < 0:
                    color[y] = 1 - color[x]
                    stack.append(y)
                elif color[y] == color[x]:
                    return False
    return True


def count_summary(fs: FlagStructure) -> CountSummary:
    n = fs.flag_count
    a, b, g = fs.perms
    v = orbits(n, a, g)[0] + fs.isolated
    e = orbits(n, b, g)[0]
    f = orbits(n, a, b)[0] + fs.isolated
    k = orbits(n, a, b, g)[0] + fs.isolated
    d = n // 2
    chi = v + e + f - d
    return CountSummary(v, e, f, d, k, chi, 2 * k - chi, is_orientable(fs))


def euler_genus(fs: FlagStructure) -> int:
    return count_summary(fs).epsilon


@dataclass(frozen=True)
class Classification:
    is_plane: bool
    is_bouquet: bool
    is_hypertree: bool
    is_hyper_quasi_tree: bool


def classify(fs: FlagStructure) -> Classification:
    c = count_summary(fs)
    return Classification(
        is_plane=c.k == 1 and c.epsilon == 0,
        is_bouquet=c.v == 1,
        is_hypertree=c.f == 1 and c.epsilon == 0,
        is_hyper_quasi_tree=c.f == 1,
    )


# ---------------------------------------------------------------------------
# Sub-hypermaps
# ---------------------------------------------------------------------------


def restrict(fs: FlagStructure, edges: Iterable[str]) -> FlagStructure:
    """Keep only the hyperedges in ``edges``; every hypervertex survives.

    A curve that loses all of its arrows becomes an isolated vertex.
    """
    fs = labelled(fs)
    flags = edge_flags(fs)
    keep_edges = set(edges)
    unknown = keep_edges - set(flags)
    if unknown:
        raise KeyError(f"unknown hyperedge id(s): {', '.join(sorted(unknown))}")
    n = fs.flag_count
    kept = [fs.labels[x][0] in keep_edges for x in range(n)]
    new_id = {}
    for x in range(n):
        if kept[x]:
            new_id[x] = len(new_id)
    a, b, g = fs.perms
    alpha = [0] * len(new_id)
    for x, nx in new_id.items():
        y = a[x]
        while not kept[y]:
            y = a[g[y]]
        alpha[nx] = new_id[y]
    beta = [new_id[b[x]] for x in new_id]
    gamma = [new_id[g[x]] for x in new_id]
    labels = tuple(fs.labels[x] for x in new_id)
    # vertex curves with no surviving arrow
    _, vcomp = orbits(n, a, g)
    alive = {vcomp[x] for x in new_id}
    dropped = len(set(vcomp)) - len(alive)
    return FlagStructure(alpha, beta, gamma, fs.isolated + dropped, labels)


# ---------------------------------------------------------------------------
# Isomorphism
# ---------------------------------------------------------------------------


def _component_code(perms, start, n):
    order = [-1] * n
    order[start] = 0
    queue = [start]
    i = 0
    while i < len(queue):
        x = queue[i]
        i += 1
        for p in perms:
            y = p[x]
            if order[y] < 0:
                order[y] = len(queue)
                queue.append(y)
    return tuple(order[p[x]] for x in queue for p in perms)


def canonical_form(fs: FlagStructure) -> bytes:
    """Relabelling-invariant encoding; equal iff the hypermaps are isomorphic.

    Each connected component is encoded by breadth-first relabelling from every
    start flag (generators in the order alpha, beta, gamma), keeping the least
    code.  Component codes are sorted, and the isolated-vertex count appended.
    """
    n = fs.flag_count
    ncomp, comp = orbits(n, *fs.perms)
    members = [[] for _ in range(ncomp)]
    for x in range(n):
        members[comp[x]].append(x)
    codes = sorted(min(_component_code(fs.perms, s, n) for s in group) for group in members)
    body = ";".join(",".join(map(str, c)) for c in codes)
    return f"{body}|{fs.isolated}".encode("ascii")


def is_isomorphic(fs1: FlagStructure, fs2: FlagStructure) -> bool:
    return canonical_form(fs1) == canonical_form(fs2)


def load_hmap(path) -> FlagStructure:
    with open(path, encoding="utf-8") as fh:
        return flags_from_arrows(parse_arrow_presentation(fh.read()))


def parse_hmap(text: str) -> FlagStructure:
    """Shorthand: parse hmap text straight to a flag structure."""
    return flags_from_arrows(parse_arrow_presentation(text))

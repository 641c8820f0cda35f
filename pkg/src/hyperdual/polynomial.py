"""The partial-dual genus polynomial, plus disjoint union and one-vertex join.

Two engines compute the same polynomial:

* :func:`poly_direct` builds every partial dual and reads off its Euler genus;
* :func:`poly_subset_formula` never builds a dual and instead combines the
  genus and component counts of the sub-hypermaps ``A`` and ``E - A``.
"""

from __future__ import annotations

import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor

from .core import (
    ArrowPresentation,
    FlagStructure,
    Occurrence,
    arrows_from_flags,
    count_summary,
    edge_flags,
    flags_from_arrows,
    labelled,
    restrict,
)
from .duality import partial_dual

MAX_EDGES = 62


class TooManyHyperedges(ValueError):
    pass


class GenusPolynomial:
    """Sparse polynomial in ``z`` with positive integer coefficients."""

    __slots__ = ("_coeffs",)

    def __init__(self, coefficients=None):
        coeffs = {}
        for exp, mult in dict(coefficients or {}).items():
            exp, mult = int(exp), int(mult)
            if exp < 0 or mult < 0:
                raise ValueError("exponents and coefficients must be non-negative")
            if mult:
                coeffs[exp] = coeffs.get(exp, 0) + mult
        self._coeffs = dict(sorted(coeffs.items()))

    @property
    def coefficients(self):
        return dict(self._coeffs)

    def __eq__(self, other):
        if isinstance(other, int):
            other = GenusPolynomial({0: other})
        if not isinstance(other, GenusPolynomial):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self):
        return hash(tuple(self._coeffs.items()))

    def __mul__(self, other):
        out = Counter()
        for a, x in self._coeffs.items():
            for b, y in other._coeffs.items():
                out[a + b] += x * y
        return GenusPolynomial(out)

    def __call__(self, x):
        return poly_eval(self, x)

    def __repr__(self):
        return f"GenusPolynomial({self._coeffs!r})"

    def __str__(self):
        if not self._coeffs:
            return "0"
        terms = []
        for exp, mult in self._coeffs.items():
            if exp == 0:
                terms.append(str(mult))
            else:
                z = "z" if exp == 1 else f"z^{exp}"
                terms.append(z if mult == 1 else f"{mult}*{z}")
        return " + ".join(terms)

    def to_json(self):
        return {str(k): v for k, v in self._coeffs.items()}

    @property
    def exponents(self):
        return list(self._coeffs)


def poly_eval(p: GenusPolynomial, x: int) -> int:
    return sum(mult * x**exp for exp, mult in p.coefficients.items())


def poly_degree(p: GenusPolynomial):
    """Largest exponent, or ``None`` for the zero polynomial."""
    exps = p.exponents
    return max(exps) if exps else None


def constant_term(p: GenusPolynomial) -> int:
    return p.coefficients.get(0, 0)


def _gray(i):
    return i ^ (i >> 1)


def _subset(edges, mask):
    return [e for j, e in enumerate(edges) if mask >> j & 1]


def _guard(fs):
    fs = labelled(fs)
    edges = list(edge_flags(fs))
    if len(edges) > MAX_EDGES:
        raise TooManyHyperedges(f"{len(edges)} hyperedges exceeds the limit of {MAX_EDGES}")
    return fs, edges


def _direct_range(args):
    fs, edges, lo, hi = args
    out = Counter()
    for i in range(lo, hi):
        out[count_summary(partial_dual(fs, _subset(edges, _gray(i)))).epsilon] += 1
    return out


def _formula_range(args):
    fs, edges, lo, hi = args
    whole = count_summary(fs)
    full = (1 << len(edges)) - 1
    cache = {}

    def sub(mask):
        if mask not in cache:
            s = count_summary(restrict(fs, _subset(edges, mask)))
            cache[mask] = (s.epsilon, s.k)
        return cache[mask]

    out = Counter()
    for i in range(lo, hi):
        mask = _gray(i)
        ea, ka = sub(mask)
        ec, kc = sub(full ^ mask)
        out[ea + ec + 2 * (whole.k - ka - kc) + 2 * whole.v] += 1
    return out


def _run(worker, fs, edges, jobs):
    total = 1 << len(edges)
    if jobs is None:
        jobs = int(os.environ.get("HYPERDUAL_JOBS", "1"))
    if jobs <= 1 or total < 64:
        return GenusPolynomial(worker((fs, edges, 0, total)))
    # split the Gray-code sequence into contiguous blocks (high-order bits of the counter)
    chunks = min(jobs * 4, total)
    bounds = [total * c // chunks for c in range(chunks + 1)]
    tasks = [(fs, edges, bounds[c], bounds[c + 1]) for c in range(chunks)]
    merged = Counter()
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        for part in pool.map(worker, tasks):
            merged.update(part)
    return GenusPolynomial(merged)


def poly_direct(fs: FlagStructure, jobs: int | None = 1) -> GenusPolynomial:
    """Sum ``z ** eps(H^A)`` over all hyperedge subsets by building each dual."""
    fs, edges = _guard(fs)
    return _run(_direct_range, fs, edges, jobs)


def poly_subset_formula(fs: FlagStructure, jobs: int | None = 1) -> GenusPolynomial:
    """Same polynomial as :func:`poly_direct` without constructing any dual.

    ``eps(H^A) = eps(A) + eps(A^c) + 2(k(H) - k(A) - k(A^c)) + 2 v(H)``; the
    sub-hypermap genus and component counts are cached per subset mask.
    """
    fs, edges = _guard(fs)
    return _run(_formula_range, fs, edges, jobs)


def partial_dual_polynomial(fs: FlagStructure, method: str = "formula", jobs: int | None = 1) -> GenusPolynomial:
    if method == "formula":
        return poly_subset_formula(fs, jobs)
    if method == "direct":
        return poly_direct(fs, jobs)
    raise ValueError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# Combining hypermaps
# ---------------------------------------------------------------------------


def _rename_apart(ap1: ArrowPresentation, ap2: ArrowPresentation) -> ArrowPresentation:
    """Rename edges of ``ap2`` that clash with ``ap1`` by suffixing ``_2``, ``_3``, ..."""
    taken = set(ap1.degrees())
    mapping = {}
    for e in ap2.edges:
        new = e
        k = 2
        while new in taken:
            new = f"{e}_{k}"
            k += 1
        mapping[e] = new
        taken.add(new)
    curves = tuple(tuple(Occurrence(mapping[o.edge], o.index, o.sign) for o in c) for c in ap2.curves)
    return ArrowPresentation(curves, ap2.name)


def _as_presentation(fs):
    if isinstance(fs, ArrowPresentation):
        return fs
    return arrows_from_flags(labelled(fs)).normalized()


def disjoint_union(fs1: FlagStructure, fs2: FlagStructure) -> FlagStructure:
    ap1 = _as_presentation(fs1)
    ap2 = _rename_apart(ap1, _as_presentation(fs2))
    return flags_from_arrows(ArrowPresentation(ap1.curves + ap2.curves))


def gaps(fs) -> list:
    """All gap addresses ``(curve, position)`` of the normalized presentation.

    Position ``p`` names the free vertex arc that follows occurrence ``p``; an
    isolated vertex has the single gap ``(curve, 0)``.
    """
    ap = _as_presentation(fs)
    return [(c, p) for c, curve in enumerate(ap.curves) for p in range(max(len(curve), 1))]


def _open_at(curve, pos):
    if not curve:
        if pos != 0:
            raise ValueError("an isolated vertex has only gap 0")
        return ()
    if not 0 <= pos < len(curve):
        raise ValueError(f"gap position {pos} not on a curve with {len(curve)} arrows")
    return curve[pos + 1 :] + curve[: pos + 1]


def join_presentations(ap1, gap1, ap2, gap2, flip=False) -> ArrowPresentation:
    """One-vertex join on presentations, with gaps addressed in the given curve order."""
    ap2 = _rename_apart(ap1, ap2)
    (c1, p1), (c2, p2) = gap1, gap2
    if not 0 <= c1 < len(ap1.curves) or not 0 <= c2 < len(ap2.curves):
        raise ValueError("gap curve index out of range")
    first = _open_at(ap1.curves[c1], p1)
    second = _open_at(ap2.curves[c2], p2)
    if flip:
        second = tuple(o.flipped() for o in reversed(second))
    joined = first + second
    curves = ap1.curves[:c1] + (joined,) + ap1.curves[c1 + 1 :]
    curves += ap2.curves[:c2] + ap2.curves[c2 + 1 :]
    return ArrowPresentation(curves, ap1.name)


def one_vertex_join(fs1, gap1, fs2, gap2, flip: bool = False) -> FlagStructure:
    """Paste a vertex of ``fs1`` to a vertex of ``fs2`` along the chosen free arcs.

    Gaps are ``(curve, position)`` pairs as listed by :func:`gaps`; with ``flip``
    the second curve is glued in reversed.
    """
    ap1, ap2 = _as_presentation(fs1), _as_presentation(fs2)
    if not any(ap1.curves) and not any(ap2.curves):
        raise ValueError("both operands are edgeless")
    return flags_from_arrows(join_presentations(ap1, gap1, ap2, gap2, flip))

"""Partial duality with respect to a set of hyperedges.

The working implementation swaps the beta and gamma pairings on the flags of
the chosen hyperedges.  :func:`retrace_partial_dual` redoes the construction on
arrow presentations by redrawing arrows and tracing the new closed curves; the
two are kept in agreement by the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .core import (
    HEAD,
    TAIL,
    ArrowPresentation,
    FlagStructure,
    Occurrence,
    count_summary,
    edge_flags,
    labelled,
    restrict,
)


def _check_subset(flags, A):
    A = set(A)
    unknown = A - set(flags)
    if unknown:
        raise KeyError(f"unknown hyperedge id(s): {', '.join(sorted(unknown))}")
    return A


def partial_dual(fs: FlagStructure, A: Iterable[str]) -> FlagStructure:
    """Return the partial dual of ``fs`` with respect to the hyperedges ``A``.

    The new arrow ``e_i`` runs from the old head of ``e_i`` to the old tail of
    ``e_{i+1}``, so the old tails and heads trade roles along each dualised edge.
    """
    fs = labelled(fs)
    flags = edge_flags(fs)
    A = _check_subset(flags, A)
    beta = list(fs.beta)
    gamma = list(fs.gamma)
    labels = list(fs.labels)
    for e in A:
        fl = flags[e]
        deg = len(fl) // 2
        for x in fl:
            beta[x], gamma[x] = fs.gamma[x], fs.beta[x]
        for i in range(deg):
            head = fl[2 * i + 1]
            next_tail = fl[(2 * i + 2) % len(fl)]
            labels[head] = (e, i + 1, TAIL)
            labels[next_tail] = (e, i + 1, HEAD)
    return FlagStructure(fs.alpha, beta, gamma, fs.isolated, tuple(labels))


def full_dual(fs: FlagStructure) -> FlagStructure:
    return partial_dual(fs, edge_flags(fs))


def retrace_partial_dual(ap: ArrowPresentation, A: Iterable[str]) -> ArrowPresentation:
    """Partial dual computed by redrawing arrows on the vertex curves.

    For ``e`` in ``A`` the arrows of ``e`` are erased and a new arrow ``e_i`` is
    drawn from the head of old ``e_i`` to the tail of old ``e_{i+1}``.  The new
    closed curves are then traced through the surviving curve arcs.
    """
    degrees = ap.degrees()
    A = _check_subset(degrees, A)

    # endpoints are (edge, index, end); arc[p] is the point across a free vertex arc
    arc = {}
    order = []
    for curve in ap.curves:
        pts = []
        for occ in curve:
            ends = (TAIL, HEAD) if occ.sign == "+" else (HEAD, TAIL)
            pts.extend((occ.edge, occ.index, end) for end in ends)
        for j in range(1, len(pts), 2):
            p, q = pts[j], pts[(j + 1) % len(pts)]
            arc[p], arc[q] = q, p
        order.extend(pts)

    # seg[p] = (other endpoint, arrow label, whether p is the arrow's tail)
    seg = {}
    for e, deg in degrees.items():
        for i in range(1, deg + 1):
            if e in A:
                tail, head = (e, i, HEAD), (e, i % deg + 1, TAIL)
            else:
                tail, head = (e, i, TAIL), (e, i, HEAD)
            seg[tail] = (head, (e, i), True)
            seg[head] = (tail, (e, i), False)

    seen = set()
    curves = []
    for start in order:
        if start in seen:
            continue
        curve = []
        p = start
        while p not in seen:
            q, (e, i), forward = seg[p]
            seen.add(p)
            seen.add(q)
            curve.append(Occurrence(e, i, "+" if forward else "-"))
            p = arc[q]
        curves.append(tuple(curve))
    curves.extend(c for c in ap.curves if not c)
    return ArrowPresentation(tuple(curves), ap.name)


def predicted_chi(fs: FlagStructure, A: Iterable[str]) -> int:
    """Euler characteristic of the partial dual from the two sub-hypermaps."""
    fs = labelled(fs)
    flags = edge_flags(fs)
    A = _check_subset(flags, A)
    Ac = set(flags) - A
    v = count_summary(fs).v
    return count_summary(restrict(fs, A)).chi + count_summary(restrict(fs, Ac)).chi - 2 * v


def predicted_epsilon(fs: FlagStructure, A: Iterable[str]) -> int:
    """Euler genus of the partial dual from the two sub-hypermaps."""
    fs = labelled(fs)
    flags = edge_flags(fs)
    A = _check_subset(flags, A)
    Ac = set(flags) - A
    whole = count_summary(fs)
    sa = count_summary(restrict(fs, A))
    sc = count_summary(restrict(fs, Ac))
    return sa.epsilon + sc.epsilon + 2 * (whole.k - sa.k - sc.k) + 2 * whole.v


@dataclass(frozen=True)
class DualityReport:
    subset: frozenset
    chi_actual: int
    chi_predicted: int
    epsilon_actual: int
    epsilon_predicted: int
    jump_bound_ok: bool

    @property
    def ok(self):
        return (
            self.chi_actual == self.chi_predicted
            and self.epsilon_actual == self.epsilon_predicted
            and self.jump_bound_ok
        )


def duality_report(fs: FlagStructure, A: Iterable[str]) -> DualityReport:
    """Compare the dual's chi and epsilon with the predicted values.

    ``jump_bound_ok`` checks ``|eps(H) - eps(H^A)| <= 2 * (d(A) - |A|)``, which
    for a single hyperedge is the usual ``2(d(e) - 1)`` bound.
    """
    fs = labelled(fs)
    flags = edge_flags(fs)
    A = frozenset(_check_subset(flags, A))
    dual = count_summary(partial_dual(fs, A))
    eps = count_summary(fs).epsilon
    slack = sum(len(flags[e]) // 2 - 1 for e in A)
    return DualityReport(
        subset=A,
        chi_actual=dual.chi,
        chi_predicted=predicted_chi(fs, A),
        epsilon_actual=dual.epsilon,
        epsilon_predicted=predicted_epsilon(fs, A),
        jump_bound_ok=abs(eps - dual.epsilon) <= 2 * slack,
    )


def genus_jump_check(fs: FlagStructure, e: str) -> DualityReport:
    return duality_report(fs, {e})

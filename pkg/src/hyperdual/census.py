"""Exhaustive enumeration of small hypermaps and theorem suites run over them."""

from __future__ import annotations

import itertools
import json
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator

from .core import (
    FlagStructure,
    CountSummary,
    arrows_from_flags,
    canonical_form,
    classify,
    count_summary,
    derive_labels,
    edge_flags,
    flags_from_arrows,
    labelled,
    orbits,
    restrict,
    serialize_arrow_presentation,
)
from .duality import full_dual, partial_dual, retrace_partial_dual
from .polynomial import (
    GenusPolynomial,
    constant_term,
    disjoint_union,
    gaps,
    one_vertex_join,
    poly_degree,
    poly_direct,
    poly_eval,
    poly_subset_formula,
)
from .structure import (
    alternating_quadruple,
    constant_term_criterion,
    decomposition_tree,
    is_prime,
    join_decompose,
    rejoin,
    ribbon_expansion,
)

SOFT_MAX_FLAGS = 12
MAX_EXTRA_ISOLATED = 2


class CensusError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------


def perfect_matchings(points: list) -> Iterator[dict]:
    """All perfect matchings of ``points`` as dicts point -> partner."""
    if not points:
        yield {}
        return
    first, rest = points[0], points[1:]
    for i, other in enumerate(rest):
        for m in perfect_matchings(rest[:i] + rest[i + 1 :]):
            m[first], m[other] = other, first
            yield m


def matching_count(n_points: int) -> int:
    """(n-1)!! for even n."""
    out = 1
    for k in range(n_points - 1, 0, -2):
        out *= k
    return out


def _partitions(n, largest=None):
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for part in range(min(n, largest), 0, -1):
        for rest in _partitions(n - part, part):
            yield (part,) + rest


def _standard_alpha(vertex_degrees):
    """alpha that, with gamma = (0 1)(2 3)..., makes one cycle per vertex of the given degree."""
    alpha = []
    base = 0
    for deg in vertex_degrees:
        m = 2 * deg
        local = [0] * m
        for j in range(deg):
            a, b = 2 * j + 1, (2 * j + 2) % m
            local[a], local[b] = b, a
        alpha.extend(base + y for y in local)
        base += m
    return alpha


def _candidates(n, method, bouquets_only):
    gamma = [x ^ 1 for x in range(n)]
    points = list(range(n))
    if method == "vertex-partition":
        d = n // 2
        parts = [(d,)] if bouquets_only else list(_partitions(d))
        alphas = [_standard_alpha(p) for p in parts]
    elif method == "brute":
        alphas = ([m[x] for x in points] for m in perfect_matchings(points))
    else:
        raise CensusError(f"unknown enumeration method {method!r}")
    for alpha in alphas:
        if method == "brute" and bouquets_only and orbits(n, alpha, gamma)[0] != 1:
            continue
        for m in perfect_matchings(points):
            yield alpha, [m[x] for x in points], gamma


def enumerate_hypermaps(
    max_flags: int,
    connected_only: bool = True,
    orientable_only: bool = False,
    *,
    bouquets_only: bool = False,
    method: str = "vertex-partition",
    include_edgeless: bool = False,
    force: bool = False,
) -> Iterator[FlagStructure]:
    """Yield one labelled representative per isomorphism class, by increasing flag count.

    gamma is fixed to ``(0 1)(2 3)...``.  With ``method="vertex-partition"``
    alpha is also fixed to one standard matching per multiset of vertex degrees,
    which reaches every class; ``method="brute"`` runs over all alpha instead.
    beta runs over all perfect matchings in both cases.

    With ``connected_only=False`` every class is also offered with up to two
    extra isolated vertices, and ``include_edgeless`` adds the edgeless maps.
    """
    if max_flags % 2:
        raise CensusError("max_flags must be even")
    if max_flags > SOFT_MAX_FLAGS and not force:
        raise CensusError(f"max_flags > {SOFT_MAX_FLAGS} needs force=True")
    extra = range(1) if connected_only else range(MAX_EXTRA_ISOLATED + 1)
    if include_edgeless:
        for iso in range(1, (1 if connected_only else MAX_EXTRA_ISOLATED + 1) + 1):
            yield FlagStructure((), (), (), iso, ())
    for n in range(2, max_flags + 1, 2):
        seen = set()
        for alpha, beta, gamma in _candidates(n, method, bouquets_only):
            fs = FlagStructure(alpha, beta, gamma)
            if connected_only and orbits(n, alpha, beta, gamma)[0] != 1:
                continue
            if bouquets_only and orbits(n, alpha, gamma)[0] != 1:
                continue
            key = canonical_form(fs)
            if key in seen:
                continue
            seen.add(key)
            s = count_summary(fs)
            if orientable_only and not s.orientable:
                continue
            labels = derive_labels(fs)
            for iso in extra:
                yield FlagStructure(alpha, beta, gamma, iso, labels)


@dataclass(frozen=True)
class CensusRecord:
    canonical_form: bytes
    counts: CountSummary
    polynomial: GenusPolynomial | None = None


def census_records(max_flags, connected_only=True, orientable_only=False, with_polynomial=False, **kw):
    out = []
    for fs in enumerate_hypermaps(max_flags, connected_only, orientable_only, **kw):
        poly = poly_subset_formula(fs) if with_polynomial else None
        out.append(CensusRecord(canonical_form(fs), count_summary(fs), poly))
    return out


# ---------------------------------------------------------------------------
# Property suites
# ---------------------------------------------------------------------------


def _subsets(edges):
    for r in range(len(edges) + 1):
        for combo in itertools.combinations(edges, r):
            yield frozenset(combo)


def _fmt(subset):
    return "{" + ",".join(sorted(subset)) + "}"


def check_duality_formulas(fs, dual=partial_dual):
    fs = labelled(fs)
    edges = list(edge_flags(fs))
    s = count_summary(fs)
    key = canonical_form(fs)
    for A in _subsets(edges):
        Ac = set(edges) - A
        D = dual(fs, A)
        sd = count_summary(D)
        sa = count_summary(restrict(fs, A))
        sc = count_summary(restrict(fs, Ac))
        tag = _fmt(A)
        yield "chi", tag, sa.chi + sc.chi - 2 * s.v, sd.chi
        eps = sa.epsilon + sc.epsilon + 2 * (s.k - sa.k - sc.k) + 2 * s.v
        yield "epsilon", tag, eps, sd.epsilon
        if s.v == 1:
            yield "epsilon-bouquet", tag, sa.epsilon + sc.epsilon, sd.epsilon
        yield "e-preserved", tag, s.e, sd.e
        yield "d-preserved", tag, s.d, sd.d
        yield "k-preserved", tag, s.k, sd.k
        yield "v-dual=f(A)", tag, sa.f, sd.v
        yield "f-dual=f(Ac)", tag, sc.f, sd.f
        yield "orientability", tag, s.orientable, sd.orientable
        yield "involution", tag, key, canonical_form(dual(D, A))
    for e, fl in edge_flags(fs).items():
        jump = abs(s.epsilon - count_summary(dual(fs, {e})).epsilon)
        yield "jump-bound", _fmt({e}), True, jump <= 2 * (len(fl) // 2 - 1)


def check_oracle_agreement(fs, dual=partial_dual):
    fs = labelled(fs)
    yield "engines", "", poly_direct(fs), poly_subset_formula(fs)
    ap = arrows_from_flags(fs)
    for A in _subsets(list(edge_flags(fs))):
        yield "retrace", _fmt(A), canonical_form(flags_from_arrows(retrace_partial_dual(ap, A))), canonical_form(
            dual(fs, A)
        )


def check_polynomial_laws(fs, dual=partial_dual):
    fs = labelled(fs)
    s = count_summary(fs)
    p = poly_subset_formula(fs)
    yield "sum=2^e", "", 2**s.e, poly_eval(p, 1)
    yield "degree<=d-e", str(poly_degree(p)), True, poly_degree(p) <= s.d - s.e
    yield "positive-coefficients", "", True, all(c > 0 for c in p.coefficients.values())
    for A in _subsets(list(edge_flags(fs))):
        yield "dual-invariance", _fmt(A), p, poly_subset_formula(dual(fs, A))


def check_bouquet_constant_term(fs, dual=partial_dual):
    fs = labelled(fs)
    if count_summary(fs).v != 1:
        return
    p = poly_subset_formula(fs)
    yield "constant-term", str(p), constant_term(p) != 0, constant_term_criterion(fs)


def check_prime_constant(fs, dual=partial_dual):
    fs = labelled(fs)
    s = count_summary(fs)
    if s.k != 1 or s.d == 0:
        return
    p = poly_subset_formula(fs)
    tree = decomposition_tree(fs)
    yield "rejoin", "", canonical_form(fs), canonical_form(flags_from_arrows(rejoin(tree)))
    product = GenusPolynomial({0: 1})
    for factor in join_decompose(fs):
        product = product * poly_subset_formula(factor)
    yield "factor-product", "", p, product
    if not is_prime(fs):
        return
    constant = p.exponents == [0]
    yield "constant<=>plane-single-edge", str(p), constant, s.epsilon == 0 and s.e == 1
    if constant:
        yield "constant=2", str(p), 2, constant_term(p)


def check_hypertree_duality(fs, dual=partial_dual):
    fs = labelled(fs)
    s = count_summary(fs)
    if s.k != 1:
        return
    c = classify(fs)
    lhs = c.is_plane and c.is_bouquet
    yield "plane-bouquet<=>dual-hypertree", "", lhs, classify(full_dual(fs)).is_hypertree
    if lhs or c.is_hypertree:
        yield "poly=2^e", "", GenusPolynomial({0: 2**s.e}), poly_subset_formula(fs)


def check_alternation_lemma(fs, dual=partial_dual):
    fs = labelled(fs)
    s = count_summary(fs)
    re = ribbon_expansion(fs)
    for v in range(len(re.rings)):
        witness = alternating_quadruple(fs, v, re)
        if witness is not None:
            tag = " ".join(f"{e}.{i}" for e, i in witness)
            yield "alternation=>positive-genus", f"v{v}: {tag}", True, s.epsilon > 0


def check_ribbon_expansion(fs, dual=partial_dual):
    import networkx as nx

    fs = labelled(fs)
    s = count_summary(fs)
    re = ribbon_expansion(fs)
    yield "nodes=v+e", "", s.v + s.e, len(re.nodes)
    yield "edges=d", "", s.d, len(re.edges)
    yield "components=k", "", s.k, nx.number_connected_components(re.graph())
    yield "epsilon(R(H))=epsilon(H)", "", s.epsilon, count_summary(re.ribbon_graph).epsilon


SUITES = {
    "duality-formulas": check_duality_formulas,
    "oracle-agreement": check_oracle_agreement,
    "polynomial-laws": check_polynomial_laws,
    "bouquet-constant-term": check_bouquet_constant_term,
    "prime-constant": check_prime_constant,
    "hypertree-duality": check_hypertree_duality,
    "alternation-lemma": check_alternation_lemma,
    "ribbon-expansion": check_ribbon_expansion,
}
SUITE_NAMES = list(SUITES) + ["multiplicativity"]


@dataclass(frozen=True)
class Failure:
    suite: str
    check: str
    canonical_form: str
    hmap: str
    detail: str
    expected: str
    actual: str

    def to_json(self):
        return dict(vars(self))


@dataclass
class VerificationReport:
    suite: str
    instances: int = 0
    checks: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self):
        return not self.failures

    def to_json(self):
        return {
            "suite": self.suite,
            "instances": self.instances,
            "checks": self.checks,
            "failures": [f.to_json() for f in self.failures],
        }

    def dumps(self):
        return json.dumps(self.to_json(), indent=2, sort_keys=True)


def _hmap_text(fs):
    return serialize_arrow_presentation(arrows_from_flags(labelled(fs))).strip().replace("\n", " / ")


def run_checks(suite: str, fs: FlagStructure, dual: Callable = partial_dual) -> tuple[int, list]:
    """Run one suite on one instance; returns (number of checks, failures)."""
    fs = labelled(fs)
    key = canonical_form(fs).decode()
    failures = []
    n = 0
    for check, detail, expected, actual in SUITES[suite](fs, dual):
        n += 1
        if expected != actual:
            failures.append(Failure(suite, check, key, _hmap_text(fs), detail, str(expected), str(actual)))
    return n, failures


def _run_one(args):
    suite, fs = args
    return run_checks(suite, fs)


def verify_multiplicativity(instances: Iterable[FlagStructure], pairs: int = 100, seed: int = 0, max_flags: int = 6):
    """Join and union of sampled pairs against the product of their polynomials.

    Every gap on the first curve of each operand is tried, with and without flip.
    """
    pool = [labelled(fs) for fs in instances if 0 < fs.flag_count <= max_flags]
    report = VerificationReport("multiplicativity")
    if not pool:
        return report
    rng = random.Random(seed)
    all_pairs = [(i, j) for i in range(len(pool)) for j in range(len(pool))]
    chosen = sorted(rng.sample(all_pairs, min(pairs, len(all_pairs))))
    for i, j in chosen:
        h1, h2 = pool[i], pool[j]
        expected = poly_subset_formula(h1) * poly_subset_formula(h2)
        report.instances += 1
        trials = [("union", poly_subset_formula(disjoint_union(h1, h2)))]
        for g1 in [g for g in gaps(h1) if g[0] == 0]:
            for g2 in [g for g in gaps(h2) if g[0] == 0]:
                for flip in (False, True):
                    joined = one_vertex_join(h1, g1, h2, g2, flip)
                    trials.append((f"join {g1} {g2} flip={flip}", poly_direct(joined)))
        for detail, got in trials:
            report.checks += 1
            if got != expected:
                report.failures.append(
                    Failure(
                        "multiplicativity",
                        "product",
                        canonical_form(h1).decode() + " * " + canonical_form(h2).decode(),
                        _hmap_text(h1) + " * " + _hmap_text(h2),
                        detail,
                        str(expected),
                        str(got),
                    )
                )
    return report


def verify_properties(
    census: Iterable[FlagStructure],
    suite: str = "all",
    jobs: int = 1,
    dual: Callable = partial_dual,
    pairs: int = 100,
) -> VerificationReport:
    """Run a named suite (or ``"all"``) over every instance.

    Failures are sorted, so the report does not depend on ``jobs``.
    ``dual`` replaces the partial-dual implementation (serial runs only).
    """
    instances = list(census)
    names = SUITE_NAMES if suite == "all" else [suite]
    for name in names:
        if name not in SUITE_NAMES:
            raise CensusError(f"unknown suite {name!r}; choose from all, {', '.join(SUITE_NAMES)}")
    if dual is not partial_dual and jobs > 1:
        raise CensusError("a replacement dual needs jobs=1")
    report = VerificationReport(suite, instances=len(instances))
    for name in names:
        if name == "multiplicativity":
            sub = verify_multiplicativity(instances, pairs=pairs)
            report.checks += sub.checks
            report.failures.extend(sub.failures)
            continue
        if jobs > 1:
            with ProcessPoolExecutor(max_workers=jobs) as ex:
                results = list(ex.map(_run_one, [(name, fs) for fs in instances], chunksize=8))
        else:
            results = [run_checks(name, fs, dual) for fs in instances]
        for n, fails in results:
            report.checks += n
            report.failures.extend(fails)
    report.failures.sort(key=lambda f: (f.suite, f.check, f.canonical_form, f.detail))
    return report

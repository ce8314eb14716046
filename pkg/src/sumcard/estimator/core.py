"""Expected cardinality, variance and q-error bounds over a summary.

Every answer ``tau`` of ``mu(q)`` on the summarisation graph contributes

    sum_{P in B_tau} F(tau, P) * sum_{P' in B_tau, P <= P'} K(P, P') * C(tau, P')

where the inner sum is the (integer) number of expansions of ``tau`` whose
atom coincidences are exactly those of ``P`` and ``F`` is the probability
that one such expansion lies in a random represented graph.
"""

from __future__ import annotations

import math
from collections import Counter
from collections.abc import Iterator, Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from ..errors import (AnswerCapExceeded, BoundInapplicable, FastPathNotApplicable, GeneralPathIntractable,
                      MappingError, SumcardError, VarianceIntractable)
from ..query import Atom, Query, Var, evaluate
from ..summary import Summary, check_consistent
from .partitions import DEFAULT_ATOM_CAP, Partition, PartitionBase, mobius, partition_base

Number = Union[Fraction, float]

GENERAL = "general"
UNIFICATION_FREE = "unification-free"
VARIANCE_CLAMP = 1e-6


@dataclass
class Estimate:
    expectation: Number
    answers_over_H: int
    path: str
    variance: Number | None = None
    variance_raw: Number | None = None
    bounds: dict = field(default_factory=dict)

    @property
    def std(self) -> float | None:
        return None if self.variance is None else math.sqrt(self.variance)


def falling(n: int, k: int) -> int:
    """Falling factorial n (n-1) ... (n-k+1)."""
    return math.perm(n, k)


def mu_query(q: Query, s: Summary) -> Query:
    missing = q.ress - s.mu.keys()
    if missing:
        names = ", ".join(sorted(s.dictionary.lookup(r) for r in missing))
        raise MappingError(f"query resources outside dom(mu): {names}")
    return q.map_resources(s.mu)


def summary_answers(q: Query, s: Summary, answer_cap: int | None = None) -> Iterator[dict]:
    """Answers of ``mu(q)`` on H, aborting once more than ``answer_cap`` are seen."""
    for i, tau in enumerate(evaluate(mu_query(q, s), s.graph), start=1):
        if answer_cap is not None and i > answer_cap:
            raise AnswerCapExceeded(f"more than {answer_cap} answers of mu(q) on the summary")
        yield tau


def unifiable(a: Atom, b: Atom) -> bool:
    """Whether some substitution makes the two atoms identical."""
    parent: dict = {}

    def find(t):
        while t in parent:
            t = parent[t]
        return t

    for x, y in zip(a, b):
        rx, ry = find(x), find(y)
        if rx == ry:
            continue
        if isinstance(rx, Var):
            parent[rx] = ry
        elif isinstance(ry, Var):
            parent[ry] = rx
        else:
            return False
    return True


def is_unification_free(q: Query, s: Summary) -> bool:
    """True iff no two distinct atoms of q have unifiable images under mu.

    Atoms whose images coincide count as unifiable.
    """
    images = mu_query(q, s).atoms
    if len(images) != len(q):
        return False
    return not any(unifiable(images[i], images[j])
                   for i in range(len(images)) for j in range(i + 1, len(images)))


# -- per-answer coefficients -------------------------------------------------

def _images(q: Query, tau: Mapping[Var, int], mu: Mapping[int, int]) -> list[tuple[int, int, int]]:
    """``tau(mu(a))`` for every atom ``a`` of q, in atom order."""
    return [tuple(tau[t] if isinstance(t, Var) else mu[t] for t in a) for a in q.atoms]


def is_satisfied(p: Partition, tau: Mapping[Var, int], mu: Mapping[int, int]) -> bool:
    for x, r in p.unifier.items():
        if isinstance(r, Var):
            if tau[x] != tau[r]:
                return False
        elif tau[x] != mu[r]:
            return False
    return True


def satisfied_partitions(base: PartitionBase, tau: Mapping[Var, int], s: Summary) -> list[Partition]:
    """B_tau by direct filtering of the whole base."""
    return [p for p in base if is_satisfied(p, tau, s.mu)]


def _satisfied_grouped(base: PartitionBase, tau, s: Summary, h_labels) -> list[Partition]:
    # only partitions whose blocks are homogeneous in tau(mu(atom)) can be satisfied
    return [p for p in base.coarsenings(base.finest, within=h_labels) if is_satisfied(p, tau, s.mu)]


def coeff_C(tau: Mapping[Var, int], p: Partition, s: Summary) -> int:
    out = 1
    for x in p.vrng:
        out *= s.bucket_size[tau[x]]
    return out


def factor_F(tau: Mapping[Var, int], p: Partition, s: Summary, q: Query | None = None,
             exact: bool = True, images=None) -> Number:
    """Probability that one expansion matching ``p`` lies in a random world."""
    if images is None:
        mu_query(q, s)
        images = _images(q, tau, s.mu)
    counts = Counter(images[block[0]] for block in p.blocks)
    value: Number = Fraction(1) if exact else 1.0
    for h, n in counts.items():
        w = s.weights[h]
        if n > w:
            return Fraction(0) if exact else 0.0
        if exact:
            value *= Fraction(falling(w, n), falling(s.size(h), n))
        else:
            value *= falling(w, n) / falling(s.size(h), n)
    return value


# -- expectation -------------------------------------------------------------

def _general_contribution(base: PartitionBase, tau, s: Summary, q: Query, exact: bool,
                          kappa_method: str) -> Number:
    images = _images(q, tau, s.mu)
    label_of: dict = {}
    h_labels = [label_of.setdefault(h, len(label_of)) for h in images]
    b_tau = _satisfied_grouped(base, tau, s, h_labels)
    in_b_tau = {p.labels for p in b_tau}
    c_cache: dict = {}
    total: Number = Fraction(0) if exact else 0.0
    for p in b_tau:
        f = factor_F(tau, p, s, exact=exact, images=images)
        if not f:
            continue
        inner = 0
        for p2 in base.coarsenings(p, within=h_labels):
            if p2.labels not in in_b_tau:
                continue
            c = c_cache.get(p2.labels)
            if c is None:
                c = c_cache[p2.labels] = coeff_C(tau, p2, s)
            k = mobius(p, p2) if kappa_method == "closed" else base.kappa(p, p2)
            inner += k * c
        if inner < 0:
            raise SumcardError(f"negative expansion count {inner} for answer {tau}")
        total += f * inner
    return total


def _fast_contribution(tau, s: Summary, q: Query, exact: bool) -> Number:
    num = 1
    den = 1
    for x in q.vars:
        num *= s.bucket_size[tau[x]]
    for h in _images(q, tau, s.mu):
        num *= s.weights[h]
        den *= s.size(h)
    return Fraction(num, den) if exact else num / den


def expectation_fast(q: Query, s: Summary, exact: bool = True, answer_cap: int | None = None,
                     check: bool = True) -> Estimate:
    """Closed product formula, valid only for unification-free queries."""
    if check and not is_unification_free(q, s):
        raise FastPathNotApplicable("query is mu-unifiable; use the general formula")
    check_consistent(s)
    total: Number = Fraction(0) if exact else 0.0
    n = 0
    for tau in summary_answers(q, s, answer_cap):
        n += 1
        total += _fast_contribution(tau, s, q, exact)
    return Estimate(total, n, UNIFICATION_FREE)


def expectation_general(q: Query, s: Summary, exact: bool = True, atom_cap: int = DEFAULT_ATOM_CAP,
                        answer_cap: int | None = None, kappa_method: str = "closed",
                        base: PartitionBase | None = None) -> Estimate:
    check_consistent(s)
    mu_query(q, s)
    if base is None:
        base = partition_base(q, atom_cap)
    total: Number = Fraction(0) if exact else 0.0
    n = 0
    for tau in summary_answers(q, s, answer_cap):
        n += 1
        total += _general_contribution(base, tau, s, q, exact, kappa_method)
    return Estimate(total, n, GENERAL)


def expectation(q: Query, s: Summary, exact: bool = True, atom_cap: int = DEFAULT_ATOM_CAP,
                answer_cap: int | None = None, kappa_method: str = "closed",
                force_general: bool = False) -> Estimate:
    """Expected cardinality of ``q`` over the graphs ``s`` represents.

    Unification-free queries take the product formula; everything else the
    partition-base formula.  ``exact`` selects Fraction or float arithmetic.
    """
    check_consistent(s)
    if not force_general and is_unification_free(q, s):
        return expectation_fast(q, s, exact, answer_cap, check=False)
    return expectation_general(q, s, exact, atom_cap, answer_cap, kappa_method)


def doubled(q: Query) -> Query:
    """``q`` together with a copy whose variables are renamed apart."""
    return q.union(q.renamed_apart())


def variance_of(q: Query, s: Summary, e: Number, exact: bool = True, atom_cap: int = DEFAULT_ATOM_CAP,
                answer_cap: int | None = None, kappa_method: str = "closed") -> tuple[Number, Number]:
    """Variance given the already computed expectation; returns (clamped, raw)."""
    try:
        e2 = expectation(doubled(q), s, exact, atom_cap, answer_cap, kappa_method).expectation
    except GeneralPathIntractable as exc:
        raise VarianceIntractable(f"variance intractable: {exc}") from None
    raw = e2 - e * e
    if raw >= 0:
        return raw, raw
    if not exact and raw >= -VARIANCE_CLAMP * max(e * e, 1.0):
        return 0.0, raw
    raise SumcardError(f"negative variance {raw}")


def variance(q: Query, s: Summary, exact: bool = True, atom_cap: int = DEFAULT_ATOM_CAP,
             answer_cap: int | None = None, kappa_method: str = "closed") -> Number:
    e = expectation(q, s, exact, atom_cap, answer_cap, kappa_method).expectation
    return variance_of(q, s, e, exact, atom_cap, answer_cap, kappa_method)[0]


def bound_from_moments(e: Number, var: Number, eps) -> Number:
    """Chebyshev bound on P(q-error >= eps) given the expectation and variance.

    For eps strictly above the expectation only the upper tail can reach
    eps, which drops the eps factor from the numerator.  At eps equal to
    the expectation a world with at most one answer already has q-error
    eps, so the two-sided form is used there.
    """
    if not eps > 1:
        raise ValueError("eps must be greater than 1")
    if e < 1:
        raise BoundInapplicable("the q-error bound needs an expectation of at least 1")
    if isinstance(e, Fraction) and isinstance(var, Fraction):
        eps = Fraction(eps)
        one = Fraction(1)
    else:
        e, var, eps = float(e), float(var), float(eps)
        one = 1.0
    scale = one if eps > e else eps * eps
    value = var * scale / ((eps - 1) ** 2 * e * e)
    return min(one, value)


def qerror_bound(q: Query, s: Summary, eps, exact: bool = True, atom_cap: int = DEFAULT_ATOM_CAP,
                 answer_cap: int | None = None) -> Number:
    e = expectation(q, s, exact, atom_cap, answer_cap).expectation
    if e < 1:
        raise BoundInapplicable("the q-error bound needs an expectation of at least 1")
    var = variance_of(q, s, e, exact, atom_cap, answer_cap)[0]
    return bound_from_moments(e, var, eps)


def estimate(q: Query, s: Summary, *, with_variance: bool = False, bounds=(), exact: bool = False,
             atom_cap: int = DEFAULT_ATOM_CAP, answer_cap: int | None = None) -> Estimate:
    """One-stop estimate: expectation, optionally variance and q-error bounds.

    Bounds that do not apply (expectation below 1) are recorded as ``None``.
    """
    est = expectation(q, s, exact, atom_cap, answer_cap)
    if with_variance or bounds:
        est.variance, est.variance_raw = variance_of(q, s, est.expectation, exact, atom_cap, answer_cap)
    for eps in bounds:
        try:
            est.bounds[eps] = bound_from_moments(est.expectation, est.variance, eps)
        except BoundInapplicable:
            est.bounds[eps] = None
    return est

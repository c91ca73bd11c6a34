"""Depth calculus for knowledge bases of thresholded generalizations.

A generalization ``antecedent => consequent @ k`` asserts that exceptional
cases (antecedent true, consequent false) are at least k orders rarer than
the antecedent itself; ``@ inf`` asserts exceptions are impossible. A
knowledge base is an ordered list of such rules; compiling it produces a
chain of *exception sets*

    chain[0] = true
    chain[d] = union over rules i of exception(i),
               taken over those i whose antecedent entails chain[d - k_i]
               (chain[d'] counts as true for d' <= 0)

so chain[d] collects the exceptional cases that are still "live" at rarity
order d. The chain is entailment-decreasing and reaches, after a bounded
number of steps, a depth D past which it no longer changes (up to
equivalence). The *depth* of a proposition rho is the largest d with
rho entailing chain[d], or infinity when rho entails the stable set
chain[D]; it measures how rare rho is forced to be, in orders of a small
exception probability.

Queries reduce to a depth gap: the knowledge base supports
``gamma => zeta @ j`` exactly when

    depth(gamma & ~zeta) >= depth(gamma) + j

with the usual extended arithmetic (a sum involving infinity is infinity,
and infinity >= infinity holds). Consistency is the statement that the
true proposition has depth 0; an inconsistent knowledge base gives every
proposition depth infinity, so it supports every query.

Depths and thresholds are plain ints with ``math.inf`` standing in for
infinity, which makes the extended comparisons native Python.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

from .logic import Proposition, Signature, SignatureError

INFINITY = math.inf

Depth = Union[int, float]


def is_valid_threshold(k) -> bool:
    return k == INFINITY or (isinstance(k, int) and k >= 1)


def depth_text(d: Depth) -> str:
    return "inf" if d == INFINITY else str(int(d))


class StabilizationError(RuntimeError):
    """The exception chain failed to stabilize within its guaranteed bound.

    This cannot happen for a well-formed knowledge base; seeing it means a
    bug in the chain construction, not bad input.
    """


@dataclass(frozen=True)
class Generalization:
    """One rule: exceptions to (antecedent so consequent) at order >= threshold."""

    antecedent: Proposition
    consequent: Proposition
    threshold: Depth

    def __post_init__(self):
        if self.antecedent.signature != self.consequent.signature:
            raise SignatureError("rule sides have different signatures")
        if not is_valid_threshold(self.threshold):
            raise ValueError(
                f"threshold must be an integer >= 1 or infinity, got {self.threshold!r}"
            )

    @property
    def signature(self) -> Signature:
        return self.antecedent.signature

    def exception(self) -> Proposition:
        """The exceptional case this rule constrains: antecedent & ~consequent."""
        return self.antecedent & ~self.consequent

    def text(self) -> str:
        return (
            f"{self.antecedent.text()} => {self.consequent.text()}"
            f" @ {depth_text(self.threshold)}"
        )

    def __str__(self):
        return self.text()


@dataclass(frozen=True)
class KnowledgeBase:
    """An ordered list of generalizations over one signature.

    Order is preserved for reporting and duplicates are allowed; neither
    affects the compiled semantics.
    """

    signature: Signature
    rules: tuple[Generalization, ...]

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))
        for rule in self.rules:
            if rule.signature != self.signature:
                raise SignatureError("rule signature differs from knowledge base")

    @property
    def size(self) -> int:
        return len(self.rules)

    def finite_thresholds(self) -> list[int]:
        return [r.threshold for r in self.rules if r.threshold != INFINITY]


@dataclass(frozen=True)
class DepthProfile:
    """Compiled form of a knowledge base: the exception chain up to its fixpoint.

    chain[d] is the order-d exception set for 0 <= d <= fixpoint, and
    fired[d] holds the indices of the rules contributing to chain[d]
    (fired[0] is empty). window is the stabilization stride: the chain is
    stable once it stops shrinking over `window` consecutive steps, and
    every depth beyond fixpoint has chain value equivalent to
    chain[fixpoint].
    """

    kb: KnowledgeBase
    chain: tuple[Proposition, ...]
    fired: tuple[tuple[int, ...], ...]
    fixpoint: int
    window: int

    @property
    def limit(self) -> Proposition:
        """The stable exception set; propositions entailing it have depth infinity."""
        return self.chain[self.fixpoint]

    def depth_of(self, rho: Proposition) -> Depth:
        """Largest d with rho entailing chain[d]; infinity past the fixpoint."""
        if rho.signature != self.kb.signature:
            raise SignatureError("proposition signature differs from knowledge base")
        if rho.entails(self.limit):
            return INFINITY
        for d in range(self.fixpoint - 1, -1, -1):
            if rho.entails(self.chain[d]):
                return d
        raise StabilizationError("chain[0] is not the true proposition")

    def degree_of_rarity(self, rho: Proposition) -> Depth:
        """Alias of depth_of: how rare rho is forced to be."""
        return self.depth_of(rho)

    def is_consistent(self) -> bool:
        """True iff the true proposition has depth 0 (the only alternative
        is depth infinity, which makes every query succeed vacuously)."""
        return not self.limit.is_true

    def entails_in_probability(self, query: Generalization) -> bool:
        """Decide whether the knowledge base supports the query rule."""
        if query.signature != self.kb.signature:
            raise SignatureError("query signature differs from knowledge base")
        d_exception = self.depth_of(query.exception())
        d_antecedent = self.depth_of(query.antecedent)
        return d_exception >= d_antecedent + query.threshold

    def max_entailed_threshold(
        self, gamma: Proposition, zeta: Proposition
    ) -> Optional[Depth]:
        """Largest j with gamma => zeta @ j supported; None when no j >= 1 is.

        Infinity means every finite threshold (and @ inf) is supported.
        """
        d_exception = self.depth_of(gamma & ~zeta)
        if d_exception == INFINITY:
            return INFINITY
        # A finite exception depth forces the antecedent depth finite too,
        # since gamma & ~zeta entails gamma.
        gap = int(d_exception - self.depth_of(gamma))
        return gap if gap >= 1 else None


def compile_kb(kb: KnowledgeBase) -> DepthProfile:
    """Build the exception chain of kb and locate its fixpoint.

    The chain is extended one depth at a time; rule i contributes its
    exception set at depth d when its antecedent entails chain[d - k_i],
    where nonpositive indices mean the true proposition. An infinite
    threshold makes d - k_i nonpositive at every d, so @ inf rules
    contribute everywhere and their exceptions stay in the stable set.
    Stabilization is detected by the first D >= 0 with chain[D] entailing
    chain[D + window]; the profile keeps the chain only up to D.
    """
    sig = kb.signature
    true = Proposition.true(sig)
    finite = kb.finite_thresholds()
    window = max([1] + finite)
    exceptions = [rule.exception() for rule in kb.rules]
    chain: list[Proposition] = [true]
    fired: list[tuple[int, ...]] = [()]
    # The chain provably stabilizes within (m + 1) * window steps, so the
    # fixpoint test succeeds by depth (m + 1) * window + window.
    cap = (kb.size + 1) * window + window
    d = 0
    while True:
        d += 1
        if d > cap:
            raise StabilizationError(
                f"exception chain not stable after {cap} steps; this is a bug"
            )
        mask = 0
        fired_here = []
        for i, rule in enumerate(kb.rules):
            back = d - rule.threshold  # -inf for @ inf rules: never reaches 0
            reference = true if back <= 0 else chain[int(back)]
            if rule.antecedent.entails(reference):
                mask |= exceptions[i].mask
                fired_here.append(i)
        chain.append(Proposition(sig, mask))
        fired.append(tuple(fired_here))
        candidate = d - window
        if candidate >= 0 and chain[candidate].entails(chain[d]):
            return DepthProfile(
                kb=kb,
                chain=tuple(chain[: candidate + 1]),
                fired=tuple(fired[: candidate + 1]),
                fixpoint=candidate,
                window=window,
            )

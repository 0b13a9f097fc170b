"""Multisets of solution mappings and the four algebra operators over them."""
from __future__ import annotations

from collections import defaultdict
from typing import Iterable, Iterator, Mapping

from .rdf import EMPTY_MAPPING, SolutionMapping, Variable, compatible, merge


class SolutionMultiset(Mapping[SolutionMapping, int]):
    """An immutable pair of an underlying set and a positive cardinality function.

    Equality means equal underlying sets with equal cardinalities; iteration
    order carries no meaning.
    """

    __slots__ = ("_card",)

    def __init__(self, cardinalities: Mapping[SolutionMapping, int] | Iterable[tuple[SolutionMapping, int]] = ()):
        card = dict(cardinalities)
        for mu, n in card.items():
            if not isinstance(mu, SolutionMapping):
                raise TypeError(f"not a solution mapping: {mu!r}")
            if not isinstance(n, int) or n < 1:
                raise ValueError(f"cardinality of {mu!r} must be a positive integer, got {n!r}")
        self._card = card

    @classmethod
    def of(cls, mappings: Iterable[SolutionMapping]) -> "SolutionMultiset":
        """Multiset over a set of mappings with the constant-1 cardinality function."""
        return cls({mu: 1 for mu in mappings})

    @classmethod
    def from_bag(cls, mappings: Iterable[SolutionMapping]) -> "SolutionMultiset":
        counts: dict[SolutionMapping, int] = defaultdict(int)
        for mu in mappings:
            counts[mu] += 1
        return cls(counts)

    def __getitem__(self, mu: SolutionMapping) -> int:
        return self._card[mu]

    def __iter__(self) -> Iterator[SolutionMapping]:
        return iter(self._card)

    def __len__(self) -> int:
        return len(self._card)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, SolutionMultiset):
            return self._card == other._card
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self._card.items()))

    @property
    def underlying(self) -> frozenset[SolutionMapping]:
        return frozenset(self._card)

    def total(self) -> int:
        return sum(self._card.values())

    def restrict_compatible(self, mu: SolutionMapping) -> "SolutionMultiset":
        """Keep the members compatible with ``mu``, cardinalities unchanged."""
        return SolutionMultiset({m: n for m, n in self._card.items() if compatible(m, mu)})

    def sorted_items(self) -> list[tuple[SolutionMapping, int]]:
        return sorted(self._card.items(), key=lambda item: item[0].sort_key())

    def __repr__(self) -> str:
        inner = ", ".join(f"{mu!r}:{n}" for mu, n in self.sorted_items())
        return f"SolutionMultiset({{{inner}}})"


EMPTY = SolutionMultiset()
UNIT = SolutionMultiset({EMPTY_MAPPING: 1})


def ms_union(m1: SolutionMultiset, m2: SolutionMultiset) -> SolutionMultiset:
    card = dict(m1.items())
    for mu, n in m2.items():
        card[mu] = card.get(mu, 0) + n
    return SolutionMultiset(card)


def ms_join(m1: SolutionMultiset, m2: SolutionMultiset) -> SolutionMultiset:
    card: dict[SolutionMapping, int] = defaultdict(int)
    for mu1, n1 in m1.items():
        for mu2, n2 in m2.items():
            if compatible(mu1, mu2):
                card[merge(mu1, mu2)] += n1 * n2
    return SolutionMultiset(card)


def ms_minus(m1: SolutionMultiset, m2: SolutionMultiset) -> SolutionMultiset:
    return SolutionMultiset(
        {mu1: n1 for mu1, n1 in m1.items() if not any(compatible(mu1, mu2) for mu2 in m2)}
    )


def ms_project(variables: Iterable[Variable], m: SolutionMultiset) -> SolutionMultiset:
    keep = frozenset(variables)
    card: dict[SolutionMapping, int] = defaultdict(int)
    for mu, n in m.items():
        card[mu.restrict(keep)] += n
    return SolutionMultiset(card)

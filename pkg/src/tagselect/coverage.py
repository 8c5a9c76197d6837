"""Coverage objectives.

Three quantities drive the solvers:

* independent coverage — size of the union of the selected tags' coverage
  sets, sentiment-blind;
* dependent coverage — values count when covered from both sentiment sides
  where both sides exist in the vocabulary (one-sided values count from
  their only side);
* the labeled-graph objective theta — a minimization proxy for dependent
  coverage built on dummy-augmented tag vectors, where an edge label is the
  set of values on which two augmented vectors differ.

Coverage sets live as int bitmasks over the m-value universe, so unions and
differences are word-parallel.
"""

from __future__ import annotations

from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Mapping

from .model import Instance, Sentiment, Tag, union_mask


def bits(mask: int) -> frozenset[int]:
    """Set of bit positions set in ``mask``."""
    out = set()
    y = 0
    while mask:
        if mask & 1:
            out.add(y)
        mask >>= 1
        y += 1
    return frozenset(out)


def cov_ic(selection: Iterable[Tag]) -> int:
    """Number of attribute values covered by any selected tag."""
    return union_mask(selection).bit_count()


def cov_dc(selection: Iterable[Tag], instance: Instance) -> int:
    """Dependent coverage of a selection.

    Three disjoint contributions: values covered by both a selected positive
    and a selected negative; values of the selected positives that no
    negative tag in the whole vocabulary covers; and symmetrically for the
    selected negatives.  The last two subtract vocabulary-wide unions, not
    selected unions, so a one-sided value counts as soon as its only side is
    picked.
    """
    pos_sel = 0
    neg_sel = 0
    for t in selection:
        if t.is_positive:
            pos_sel |= t.mask
        else:
            neg_sel |= t.mask
    both = pos_sel & neg_sel
    pos_only = pos_sel & ~instance.neg_cover_mask
    neg_only = neg_sel & ~instance.pos_cover_mask
    return both.bit_count() + pos_only.bit_count() + neg_only.bit_count()


@dataclass(frozen=True)
class EdgeLabel:
    """Attribute values on which two augmented tag vectors differ."""

    differing: frozenset[int]

    def __len__(self) -> int:
        return len(self.differing)


@dataclass(frozen=True)
class DCGraph:
    """Dummy-augmented tag-vector representation for the DC solvers.

    Augmentation grafts each side's uncontested values onto the other side:
    every real positive vector gains the negative-only values, every real
    negative vector gains the positive-only values, and two synthetic tags
    (one per side, relevance 0, outside the budget) carry exactly those
    grafted values.  After this, "covered from both sides" reduces to
    agreement between a positive and a negative vector.
    """

    m: int
    only_pos: frozenset[int]
    only_neg: frozenset[int]
    dummy_pos: Tag
    dummy_neg: Tag
    aug_masks: Mapping[int, int]

    def aug_mask(self, tag: Tag) -> int:
        try:
            return self.aug_masks[tag.id]
        except KeyError:
            raise KeyError(f"tag {tag.id} ({tag.label!r}) is not a member of this graph")

    def aug_coverage(self, tag: Tag) -> frozenset[int]:
        return bits(self.aug_mask(tag))


def build_dc_graph(instance: Instance) -> DCGraph:
    """Compute the augmented vectors and dummy tags for an instance."""
    only_pos_mask = instance.pos_cover_mask & ~instance.neg_cover_mask
    only_neg_mask = instance.neg_cover_mask & ~instance.pos_cover_mask
    n = instance.n
    dummy_pos = Tag(
        id=n,
        label="dummy positive",
        sentiment=Sentiment.POSITIVE,
        relevance=0.0,
        coverage=bits(only_neg_mask),
    )
    dummy_neg = Tag(
        id=n + 1,
        label="dummy negative",
        sentiment=Sentiment.NEGATIVE,
        relevance=0.0,
        coverage=bits(only_pos_mask),
    )
    aug = {}
    for t in instance.tags:
        aug[t.id] = t.mask | (only_neg_mask if t.is_positive else only_pos_mask)
    aug[dummy_pos.id] = only_neg_mask
    aug[dummy_neg.id] = only_pos_mask
    return DCGraph(
        m=instance.m,
        only_pos=bits(only_pos_mask),
        only_neg=bits(only_neg_mask),
        dummy_pos=dummy_pos,
        dummy_neg=dummy_neg,
        aug_masks=MappingProxyType(aug),
    )


def edge_label(graph: DCGraph, t1: Tag, t2: Tag) -> EdgeLabel:
    """Symmetric difference of two augmented vectors.

    Its size is the Hamming distance between the vectors; the label of a
    self-edge is empty.
    """
    return EdgeLabel(differing=bits(graph.aug_mask(t1) ^ graph.aug_mask(t2)))


def theta_dc(graph: DCGraph, selection: Iterable[Tag]) -> int:
    """Labeled-graph objective: union of cross-edge labels minus union of
    intra-edge labels, over the selected tags' augmented vectors.

    A sentiment side with no selected tag is represented by its dummy, so
    the objective stays defined for one-sided and empty selections (the
    empty selection scores the two dummies' mutual label).  Dummies never
    join a side that has real members and never form intra edges.
    """
    pos: list[int] = []
    neg: list[int] = []
    for t in selection:
        if t.id == graph.dummy_pos.id or t.id == graph.dummy_neg.id:
            raise ValueError("dummy tags cannot appear in a selection")
        (pos if t.is_positive else neg).append(graph.aug_mask(t))
    cross_pos = pos if pos else [graph.aug_mask(graph.dummy_pos)]
    cross_neg = neg if neg else [graph.aug_mask(graph.dummy_neg)]

    cross = 0
    for a in cross_pos:
        for b in cross_neg:
            cross |= a ^ b
    intra = 0
    for side in (pos, neg):
        for i in range(len(side)):
            for j in range(i + 1, len(side)):
                intra |= side[i] ^ side[j]
    return (cross & ~intra).bit_count()

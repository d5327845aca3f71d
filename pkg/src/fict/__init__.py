"""Corpus filtering and linguistic-generalization evaluation toolkit.

Filters dependency-annotated corpora for targeted syntactic constructions,
trains or ingests sentence scorers, and measures minimal-pair generalization
(accuracy, accuracy deltas, probability deltas) with their statistics.
"""

__version__ = "0.1.0"

from .treequery import KERNEL as MATCH_KERNEL  # noqa: F401

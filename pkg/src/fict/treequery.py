"""Declarative dependency-tree patterns and their matcher.

A pattern is a small tree of named nodes.  Each node carries token
constraints (UPOS, incoming relation, surface form, lemma, morphological
features); each edge requires a head -> dependent arc, optionally limited to
a relation set, or a bounded-depth descendant chain.  Linear-order
constraints between bound nodes are checked after structural binding.

Relation matching is subtype-aware by default: a pattern relation ``nmod``
also matches ``nmod:poss``; write an exact match when the subtype matters.
Surface-form word lists are matched case-insensitively, lemma lists
case-sensitively.

Text notation (one pattern per string; clauses separated by ``;``)::

    V:VERB >nsubj N1:NOUN >nmod N2:NOUN >case P:ADP

    clause  = chain | order
    chain   = node (edge node)*         edge attaches to the previous node
    edge    = '>' rels?                 direct dependent
            | '>>' depth? rels?         descendant within depth (default 3)
    rels    = rel ('|' rel)* '!'?       trailing '!' = exact, no subtypes
    node    = NAME                      back-reference to a declared node
            | NAME ':' upos ('[' attr (',' attr)* ']')?
    upos    = '*' | TAG ('|' TAG)*
    attr    = 'form@' LIST | 'form=' w ('|' w)*
            | 'lemma@' LIST | 'lemma=' w ('|' w)*
            | 'deprel=' rels
            | Key '=' Value             morphological feature requirement
    order   = NAME '.' NAME             left immediately precedes right
            | NAME '..' NAME            left anywhere before right

Named word lists (``form@reflexives``) are resolved against a mapping passed
to the parser.
"""

import os
import re
from dataclasses import dataclass
from typing import Iterable, Mapping

from ._compile import CompiledPattern, SentenceIndex
from .conllu import Sentence

if os.environ.get("FICT_PURE_MATCH"):
    from . import _matchpure as _kernel
else:
    try:
        from . import _matchcore as _kernel  # type: ignore[no-redef]
    except ImportError:
        from . import _matchpure as _kernel  # type: ignore[no-redef]

KERNEL = _kernel.KERNEL

DESCENDANT_DEPTH_DEFAULT = 3


class PatternError(ValueError):
    """Invalid pattern structure or unparseable pattern text."""


@dataclass(frozen=True, slots=True)
class NodePredicate:
    """Conjunction of token constraints; at least one must be set."""

    upos_in: frozenset[str] | None = None
    deprel_in: frozenset[str] | None = None
    deprel_exact: bool = False
    form_in: frozenset[str] | None = None
    lemma_in: frozenset[str] | None = None
    feats_require: frozenset[str] | None = None

    def __post_init__(self):
        values = (self.upos_in, self.deprel_in, self.form_in,
                  self.lemma_in, self.feats_require)
        if all(v is None for v in values):
            raise PatternError("node predicate needs at least one constraint")
        for v in values:
            if v is not None and not v:
                raise PatternError("constraint sets must be non-empty")
        if self.form_in is not None:
            object.__setattr__(
                self, "form_in", frozenset(w.casefold() for w in self.form_in)
            )


@dataclass(frozen=True, slots=True)
class PatternEdge:
    parent: str
    child: str
    rels: frozenset[str] | None = None  # None: any relation
    rel_exact: bool = False
    max_depth: int = 1

    def __post_init__(self):
        if self.max_depth < 1:
            raise PatternError("edge depth must be >= 1")
        if self.rels is not None and not self.rels:
            raise PatternError("edge relation set must be non-empty")


@dataclass(frozen=True, slots=True)
class OrderConstraint:
    left: str
    right: str
    adjacent: bool = False


class TreePattern:
    """Validated pattern: named predicates plus a connected edge tree."""

    def __init__(
        self,
        nodes: Mapping[str, NodePredicate],
        edges: Iterable[PatternEdge] = (),
        order: Iterable[OrderConstraint] = (),
    ):
        self.nodes: dict[str, NodePredicate] = dict(nodes)
        self.edges: tuple[PatternEdge, ...] = tuple(edges)
        self.order: tuple[OrderConstraint, ...] = tuple(order)
        self._validate()
        self._compiled: CompiledPattern | None = None

    MAX_NODES = 16  # compiled-kernel binding buffer size

    def _validate(self):
        if not self.nodes:
            raise PatternError("pattern declares no nodes")
        if len(self.nodes) > self.MAX_NODES:
            raise PatternError(f"patterns are limited to {self.MAX_NODES} nodes")
        incoming: dict[str, int] = {name: 0 for name in self.nodes}
        for edge in self.edges:
            for endpoint in (edge.parent, edge.child):
                if endpoint not in self.nodes:
                    raise PatternError(f"edge references undeclared node {endpoint!r}")
            incoming[edge.child] += 1
        roots = [name for name, deg in incoming.items() if deg == 0]
        if any(deg > 1 for deg in incoming.values()) or len(roots) != 1:
            raise PatternError("edges must form a tree with a single root")
        reached = {roots[0]}
        frontier = [roots[0]]
        while frontier:
            parent = frontier.pop()
            for edge in self.edges:
                if edge.parent == parent and edge.child not in reached:
                    reached.add(edge.child)
                    frontier.append(edge.child)
        if reached != set(self.nodes):
            raise PatternError("pattern nodes are not connected")
        for oc in self.order:
            if oc.left not in self.nodes or oc.right not in self.nodes:
                raise PatternError("order constraint references undeclared node")
            if oc.left == oc.right:
                raise PatternError("order constraint must relate two distinct nodes")

    def compiled(self) -> CompiledPattern:
        if self._compiled is None:
            self._compiled = CompiledPattern(self)
        return self._compiled

    def __repr__(self):
        return f"TreePattern(nodes={list(self.nodes)}, edges={len(self.edges)})"


def _bindings(pattern: TreePattern, raw: list[tuple[int, ...]]) -> list[dict[str, int]]:
    cpat = pattern.compiled()
    decl = list(pattern.nodes)
    perm = cpat.decl_perm
    raw.sort(key=lambda row: tuple(row[s] for s in perm))
    return [
        {name: row[perm[i]] for i, name in enumerate(decl)}
        for row in raw
    ]


def match(sentence: Sentence, pattern: TreePattern) -> list[dict[str, int]]:
    """Every injective assignment of tokens to pattern nodes.

    Bindings map node name -> token id, ordered lexicographically by the
    bound ids in node declaration order.
    """
    raw = _kernel.find_matches(SentenceIndex(sentence), pattern.compiled(), 0)
    return _bindings(pattern, raw)


def has_match(sentence: Sentence, pattern: TreePattern) -> bool:
    """True iff the pattern matches; stops at the first binding."""
    return bool(_kernel.find_matches(SentenceIndex(sentence), pattern.compiled(), 1))


def match_index(sidx: SentenceIndex, pattern: TreePattern, first_only: bool = False):
    """Kernel access for callers that reuse one SentenceIndex across patterns."""
    return _kernel.find_matches(sidx, pattern.compiled(), 1 if first_only else 0)


_NODE_RE = re.compile(r"^([A-Za-z_]\w*)(?::([^\[\]]+))?(?:\[(.*)\])?$")
_EDGE_RE = re.compile(r"^>(>)?(\d+)?([A-Za-z_:|]+)?(!)?$")


def _parse_rels(text: str) -> tuple[frozenset[str], bool]:
    exact = text.endswith("!")
    if exact:
        text = text[:-1]
    rels = frozenset(r for r in text.split("|") if r)
    if not rels:
        raise PatternError(f"empty relation set in {text!r}")
    return rels, exact


def _resolve_list(name: str, wordlists: Mapping[str, Iterable[str]] | None) -> frozenset[str]:
    if wordlists is None or name not in wordlists:
        raise PatternError(f"pattern references unknown word list {name!r}")
    values = frozenset(wordlists[name])
    if not values:
        raise PatternError(f"word list {name!r} is empty")
    return values


def _parse_node(token: str, wordlists) -> tuple[str, NodePredicate | None]:
    m = _NODE_RE.match(token)
    if not m:
        raise PatternError(f"cannot parse node {token!r}")
    name, upos_spec, attr_spec = m.groups()
    if upos_spec is None and attr_spec is None:
        return name, None  # back-reference

    upos_in = None
    if upos_spec and upos_spec != "*":
        upos_in = frozenset(upos_spec.split("|"))

    form_in = lemma_in = feats = deprel_in = None
    deprel_exact = False
    if attr_spec:
        for attr in attr_spec.split(","):
            attr = attr.strip()
            if attr.startswith("form@"):
                form_in = _resolve_list(attr[5:], wordlists)
            elif attr.startswith("form="):
                form_in = frozenset(attr[5:].split("|"))
            elif attr.startswith("lemma@"):
                lemma_in = _resolve_list(attr[6:], wordlists)
            elif attr.startswith("lemma="):
                lemma_in = frozenset(attr[6:].split("|"))
            elif attr.startswith("deprel="):
                deprel_in, deprel_exact = _parse_rels(attr[7:])
            elif "=" in attr:
                feats = (feats or frozenset()) | {attr}
            else:
                raise PatternError(f"cannot parse attribute {attr!r}")

    pred = NodePredicate(
        upos_in=upos_in,
        deprel_in=deprel_in,
        deprel_exact=deprel_exact,
        form_in=form_in,
        lemma_in=lemma_in,
        feats_require=feats,
    )
    return name, pred


def parse_pattern(
    text: str,
    wordlists: Mapping[str, Iterable[str]] | None = None,
) -> TreePattern:
    """Parse the textual pattern notation (grammar in the module docstring)."""
    nodes: dict[str, NodePredicate] = {}
    edges: list[PatternEdge] = []
    order: list[OrderConstraint] = []

    for clause in text.split(";"):
        tokens = clause.split()
        if not tokens:
            continue
        if len(tokens) == 3 and tokens[1] in (".", ".."):
            left, op, right = tokens
            for name in (left, right):
                if name not in nodes:
                    raise PatternError(f"order clause references undeclared node {name!r}")
            order.append(OrderConstraint(left, right, adjacent=(op == ".")))
            continue

        prev: str | None = None
        pending_edge: tuple[frozenset[str] | None, bool, int] | None = None
        for tok in tokens:
            em = _EDGE_RE.match(tok)
            if em and tok.startswith(">"):
                if prev is None or pending_edge is not None:
                    raise PatternError(f"misplaced edge {tok!r} in {clause.strip()!r}")
                desc, depth_s, rels_s, exact_s = em.groups()
                rels, exact = (None, False)
                if rels_s:
                    rels, exact = _parse_rels(rels_s + ("!" if exact_s else ""))
                depth = 1
                if desc:
                    depth = int(depth_s) if depth_s else DESCENDANT_DEPTH_DEFAULT
                elif depth_s:
                    raise PatternError(f"depth only applies to '>>' ({tok!r})")
                pending_edge = (rels, exact, depth)
                continue

            name, pred = _parse_node(tok, wordlists)
            if pred is not None:
                if name in nodes:
                    raise PatternError(f"node {name!r} declared twice")
                nodes[name] = pred
            elif name not in nodes:
                raise PatternError(f"reference to undeclared node {name!r}")
            if pending_edge is not None:
                rels, exact, depth = pending_edge
                edges.append(PatternEdge(prev, name, rels, exact, depth))
                pending_edge = None
            prev = name
        if pending_edge is not None:
            raise PatternError(f"dangling edge at end of clause {clause.strip()!r}")

    return TreePattern(nodes, edges, order)

"""Independent brute-force oracle for the tree matcher, plus random inputs.

The oracle enumerates candidate token assignments per pattern node straight
off the Token objects (no interning, no child index, no shared code with the
kernels) and checks injectivity, every node predicate, every edge, and every
order constraint explicitly.
"""

import itertools
import random

from fict.conllu import Sentence, Token
from fict.treequery import NodePredicate, OrderConstraint, PatternEdge, TreePattern

UPOS_TAGS = ["NOUN", "VERB", "ADJ"]
DEPRELS = ["arel", "arel:x", "brel", "crel"]
FORMS = ["wa", "Wa", "wb", "wc", "WD"]
LEMMAS = ["la", "lb", "lc"]
FEATS = ["F=1", "F=2", "G=1"]


def pred_matches(pred: NodePredicate, tok: Token) -> bool:
    if pred.upos_in is not None and tok.upos not in pred.upos_in:
        return False
    if pred.form_in is not None and tok.form.casefold() not in pred.form_in:
        return False
    if pred.lemma_in is not None and tok.lemma not in pred.lemma_in:
        return False
    if pred.deprel_in is not None:
        if pred.deprel_exact:
            if tok.deprel not in pred.deprel_in:
                return False
        elif not any(
            tok.deprel == r or tok.deprel.startswith(r + ":") for r in pred.deprel_in
        ):
            return False
    if pred.feats_require is not None and not pred.feats_require <= tok.feats:
        return False
    return True


def edge_matches(edge: PatternEdge, parent: Token, child: Token, by_id) -> bool:
    cur = child
    for _ in range(edge.max_depth):
        if cur.head == 0:
            return False
        if cur.head == parent.id:
            break
        cur = by_id[cur.head]
    else:
        return False
    if edge.rels is None:
        return True
    if edge.rel_exact:
        return child.deprel in edge.rels
    return any(child.deprel == r or child.deprel.startswith(r + ":") for r in edge.rels)


def oracle_match(sentence: Sentence, pattern: TreePattern) -> list[dict[str, int]]:
    by_id = {t.id: t for t in sentence.tokens}
    names = list(pattern.nodes)
    candidates = [
        [t for t in sentence.tokens if pred_matches(pattern.nodes[name], t)]
        for name in names
    ]
    out = []
    for combo in itertools.product(*candidates):
        ids = [t.id for t in combo]
        if len(set(ids)) != len(ids):
            continue
        bound = dict(zip(names, combo))
        if not all(
            edge_matches(e, bound[e.parent], bound[e.child], by_id)
            for e in pattern.edges
        ):
            continue
        ok = True
        for oc in pattern.order:
            li, ri = bound[oc.left].id, bound[oc.right].id
            if oc.adjacent:
                ok = li + 1 == ri
            else:
                ok = li < ri
            if not ok:
                break
        if ok:
            out.append({name: tok.id for name, tok in bound.items()})
    out.sort(key=lambda b: tuple(b[name] for name in names))
    return out


def random_sentence(rng: random.Random, max_tokens: int = 8) -> Sentence:
    n = rng.randint(1, max_tokens)
    order = list(range(1, n + 1))
    rng.shuffle(order)
    heads = {order[0]: 0}
    for i in range(1, n):
        heads[order[i]] = rng.choice(order[:i])
    tokens = []
    for tid in range(1, n + 1):
        form = rng.choice(FORMS)
        tokens.append(
            Token(
                id=tid,
                form=form,
                lemma=rng.choice(LEMMAS),
                upos=rng.choice(UPOS_TAGS),
                xpos="_",
                feats=frozenset(rng.sample(FEATS, rng.randint(0, 2))),
                head=heads[tid],
                deprel="root" if heads[tid] == 0 else rng.choice(DEPRELS),
            )
        )
    raw = tuple(
        f"{t.id}\t{t.form}\t{t.lemma}\t{t.upos}\t_\t"
        f"{'|'.join(sorted(t.feats)) or '_'}\t{t.head}\t{t.deprel}\t_\t_"
        for t in tokens
    )
    return Sentence(tokens=tuple(tokens), raw_lines=raw)


def _random_predicate(rng: random.Random) -> NodePredicate:
    kinds = rng.sample(
        ["upos", "deprel", "form", "lemma", "feats"], rng.randint(1, 3)
    )
    kwargs = {}
    if "upos" in kinds:
        kwargs["upos_in"] = frozenset(rng.sample(UPOS_TAGS, rng.randint(1, 2)))
    if "deprel" in kinds:
        kwargs["deprel_in"] = frozenset(rng.sample(DEPRELS, rng.randint(1, 2)))
        kwargs["deprel_exact"] = rng.random() < 0.3
    if "form" in kinds:
        kwargs["form_in"] = frozenset(rng.sample(FORMS, rng.randint(1, 2)))
    if "lemma" in kinds:
        kwargs["lemma_in"] = frozenset(rng.sample(LEMMAS, rng.randint(1, 2)))
    if "feats" in kinds:
        kwargs["feats_require"] = frozenset(rng.sample(FEATS, 1))
    return NodePredicate(**kwargs)


def random_pattern(rng: random.Random, max_nodes: int = 4) -> TreePattern:
    k = rng.randint(1, max_nodes)
    names = [f"n{i}" for i in range(k)]
    nodes = {name: _random_predicate(rng) for name in names}
    edges = []
    for i in range(1, k):
        rels = None
        if rng.random() < 0.7:
            rels = frozenset(rng.sample(DEPRELS, rng.randint(1, 2)))
        edges.append(
            PatternEdge(
                parent=names[rng.randint(0, i - 1)],
                child=names[i],
                rels=rels,
                rel_exact=rng.random() < 0.2,
                max_depth=rng.choice([1, 1, 1, 2, 3]),
            )
        )
    order = []
    if k >= 2 and rng.random() < 0.3:
        left, right = rng.sample(names, 2)
        order.append(OrderConstraint(left, right, adjacent=rng.random() < 0.5))
    return TreePattern(nodes, edges, order)

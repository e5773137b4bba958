"""Non-planar rooted trees and forests with the subforest coproduct.

Trees are kept in canonical form: children are sorted by their bracket
encoding, so two trees are equal exactly when their encodings are.

Bracket syntax: ``[]`` is the single vertex, ``[X Y ...]`` grafts the trees
X, Y, ... under a new root, whitespace separates the trees of a forest and
``1`` is the empty forest.
"""
from __future__ import annotations

from collections import Counter
from functools import lru_cache
from itertools import product
from typing import Callable, Iterable, Iterator, TypeVar

__all__ = [
    "ParseError",
    "RootedTree",
    "RootedForest",
    "TensorSum",
    "UNIT",
    "graft",
    "parse_forest",
    "render_forest",
    "coproduct",
    "reduced_coproduct",
    "fold",
    "trees_of_degree",
    "forests_of_degree",
    "ladder",
    "render_tensor",
]

T = TypeVar("T")


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class RootedTree:
    __slots__ = ("children", "encoding", "degree", "depth")

    def __init__(self, children: Iterable[RootedTree] = ()):
        kids = tuple(sorted(children, key=lambda t: t.encoding))
        self.children = kids
        self.encoding = "[" + "".join(k.encoding for k in kids) + "]"
        self.degree = 1 + sum(k.degree for k in kids)
        # edge count on the longest root-to-leaf path
        self.depth = 1 + max(k.depth for k in kids) if kids else 0

    def __eq__(self, other) -> bool:
        return isinstance(other, RootedTree) and self.encoding == other.encoding

    def __hash__(self) -> int:
        return hash(self.encoding)

    def __lt__(self, other: RootedTree) -> bool:
        return self.encoding < other.encoding

    def __repr__(self) -> str:
        return f"RootedTree({self.encoding!r})"

    def subtree_sizes(self) -> list[int]:
        """|T_v| for every vertex v (size of the full subtree below v)."""
        out = [self.degree]
        for k in self.children:
            out.extend(k.subtree_sizes())
        return out


class RootedForest:
    """Commutative monomial of trees; the empty forest is the unit."""

    __slots__ = ("trees", "_key")

    def __init__(self, trees: Iterable[RootedTree] = ()):
        self.trees = tuple(sorted(trees, key=lambda t: t.encoding))
        self._key = " ".join(t.encoding for t in self.trees)

    @classmethod
    def of(cls, *trees: RootedTree) -> RootedForest:
        return cls(trees)

    @property
    def degree(self) -> int:
        return sum(t.degree for t in self.trees)

    @property
    def depth(self) -> int:
        return max((t.depth for t in self.trees), default=0)

    def is_unit(self) -> bool:
        return not self.trees

    def __mul__(self, other: RootedForest) -> RootedForest:
        return RootedForest(self.trees + other.trees)

    def __len__(self) -> int:
        return len(self.trees)

    def __iter__(self) -> Iterator[RootedTree]:
        return iter(self.trees)

    def __eq__(self, other) -> bool:
        return isinstance(other, RootedForest) and self._key == other._key

    def __hash__(self) -> int:
        return hash(("forest", self._key))

    def __lt__(self, other: RootedForest) -> bool:
        return (self.degree, self._key) < (other.degree, other._key)

    def __str__(self) -> str:
        return self._key or "1"

    def __repr__(self) -> str:
        return f"RootedForest({str(self)!r})"


UNIT = RootedForest()

#: F ⊗ G -> integer multiplicity
TensorSum = Counter


def graft(forest: RootedForest | Iterable[RootedTree]) -> RootedTree:
    """B+: a new root with the trees of ``forest`` as its child subtrees."""
    return RootedTree(forest)


def ladder(n: int) -> RootedTree:
    t = RootedTree()
    for _ in range(n - 1):
        t = RootedTree([t])
    return t


# --- parsing ---------------------------------------------------------------


def parse_forest(text: str) -> RootedForest:
    s = text.strip()
    if s == "1":
        return UNIT
    if not s:
        raise ParseError("empty input (use '1' for the unit forest)", 0)
    trees: list[RootedTree] = []
    n = len(text)
    i = 0
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch != "[":
            raise ParseError(f"unexpected {ch!r}", i)
        tree, i = _parse_tree(text, i)
        trees.append(tree)
    return RootedForest(trees)


def _parse_tree(text: str, i: int) -> tuple[RootedTree, int]:
    # iterative to avoid recursion limits on deep ladders
    stack: list[list[RootedTree]] = []
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "[":
            stack.append([])
        elif ch == "]":
            if not stack:
                raise ParseError("unbalanced ']'", i)
            node = RootedTree(stack.pop())
            if not stack:
                return node, i + 1
            stack[-1].append(node)
        elif not ch.isspace():
            raise ParseError(f"unexpected {ch!r}", i)
        i += 1
    raise ParseError("unclosed '['", n)


def render_forest(forest: RootedForest | RootedTree) -> str:
    if isinstance(forest, RootedTree):
        return forest.encoding
    return str(forest)


# --- enumeration -------------------------------------------------------------


@lru_cache(maxsize=None)
def forests_of_degree(n: int) -> tuple[RootedForest, ...]:
    """All forests with exactly n vertices, sorted canonically."""
    if n == 0:
        return (UNIT,)
    out: set[RootedForest] = set()
    # multisets of trees: pick the largest tree first to avoid duplicates
    def build(remaining: int, max_key: tuple[int, str] | None, acc: tuple[RootedTree, ...]):
        if remaining == 0:
            out.add(RootedForest(acc))
            return
        for size in range(remaining, 0, -1):
            for t in trees_of_degree(size):
                key = (t.degree, t.encoding)
                if max_key is not None and key > max_key:
                    continue
                build(remaining - size, key, acc + (t,))

    build(n, None, ())
    return tuple(sorted(out))


@lru_cache(maxsize=None)
def trees_of_degree(n: int) -> tuple[RootedTree, ...]:
    if n < 1:
        return ()
    return tuple(sorted({graft(f) for f in forests_of_degree(n - 1)}))


# --- coproduct -----------------------------------------------------------------


@lru_cache(maxsize=None)
def _cuts(tree: RootedTree) -> tuple[tuple[tuple[RootedTree, ...], RootedTree | None], ...]:
    """All (pruned subtrees, trunk) pairs over antichains of ``tree``.

    Each vertex is either the root of a pruned full subtree or kept; a kept
    vertex passes the choice to its children. Trunk ``None`` means nothing kept.
    """
    out = [((tree,), None)]
    child_options = [_cuts(c) for c in tree.children]
    for combo in product(*child_options):
        pruned: list[RootedTree] = []
        kept: list[RootedTree] = []
        for sub_pruned, sub_trunk in combo:
            pruned.extend(sub_pruned)
            if sub_trunk is not None:
                kept.append(sub_trunk)
        out.append((tuple(pruned), RootedTree(kept)))
    return tuple(out)


@lru_cache(maxsize=None)
def _tree_coproduct(tree: RootedTree) -> TensorSum:
    out: TensorSum = Counter()
    for pruned, trunk in _cuts(tree):
        right = UNIT if trunk is None else RootedForest((trunk,))
        out[(RootedForest(pruned), right)] += 1
    return out


def coproduct(forest: RootedForest) -> TensorSum:
    """Sum of F ⊗ (T/F) over subforests, extended multiplicatively."""
    out: TensorSum = Counter({(UNIT, UNIT): 1})
    for tree in forest:
        nxt: TensorSum = Counter()
        for (l1, r1), c1 in out.items():
            for (l2, r2), c2 in _tree_coproduct(tree).items():
                nxt[(l1 * l2, r1 * r2)] += c1 * c2
        out = nxt
    return out


def reduced_coproduct(forest: RootedForest) -> TensorSum:
    if forest.is_unit():
        raise ValueError("reduced coproduct is defined on non-unit forests only")
    out = coproduct(forest)
    out[(forest, UNIT)] -= 1
    out[(UNIT, forest)] -= 1
    return Counter({k: v for k, v in out.items() if v})


def render_tensor(ts: TensorSum) -> str:
    """Deterministic text for a tensor sum, e.g. ``[[]]⊗1 + 1⊗[[]] + []⊗[]``."""
    items = [(k, v) for k, v in ts.items() if v]
    if not items:
        return "0"
    def key(kv):
        left, right = kv[0]
        group = 0 if right.is_unit() else 1 if left.is_unit() else 2
        return (group, left.degree, str(left), str(right))

    items.sort(key=key)
    parts = []
    for i, ((left, right), c) in enumerate(items):
        body = f"{left}⊗{right}"
        if abs(c) != 1:
            body = f"{abs(c)}*{body}"
        if i == 0:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f" + {body}" if c > 0 else f" - {body}")
    return "".join(parts)


# --- operated-algebra fold ---------------------------------------------------------


def fold(forest: RootedForest | RootedTree, unit: T, mul: Callable[[T, T], T],
         op: Callable[[T], T]) -> T:
    """The operated-semigroup morphism: 1 -> unit, products -> mul, B+ -> op."""
    if isinstance(forest, RootedTree):
        return op(fold(RootedForest(forest.children), unit, mul, op))
    acc = unit
    for tree in forest:
        acc = mul(acc, fold(tree, unit, mul, op))
    return acc

"""Words, ordered full trees, exhaustive enumeration and tree samplers.

Tree nodes are addressed by words: tuples of letters in {1..arity}, the
empty tuple being the root.  Trees themselves are stored as flat arrays in
preorder (= lexicographic order of the words), which keeps child access and
traversals O(1) per step even for trees with 10^5+ nodes; the word of a node
is computed on demand.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

Word = tuple[int, ...]

ROOT: Word = ()

#: safety bound for exhaustive enumeration
DEFAULT_EXHAUSTIVE_BOUND = 8


def lca(u: Word, v: Word) -> Word:
    """Longest common prefix of two words."""
    k = 0
    for a, b in zip(u, v):
        if a != b:
            break
        k += 1
    return u[:k]


def is_valid_tree(nodes, arity: int) -> bool:
    """Check the four invariants of a full ordered tree given as a word set:
    root present, prefix-closed, left-sibling-closed, every node with 0 or
    `arity` children."""
    nodeset = {tuple(w) for w in nodes}
    if ROOT not in nodeset:
        return False
    for w in nodeset:
        for letter in w:
            if not 1 <= letter <= arity:
                return False
        if w and w[:-1] not in nodeset:
            return False
        if w and w[-1] > 1 and w[:-1] + (w[-1] - 1,) not in nodeset:
            return False
    for w in nodeset:
        nchildren = sum(1 for i in range(1, arity + 1) if w + (i,) in nodeset)
        if nchildren not in (0, arity):
            return False
    return True


class OrderedTree:
    """Full ordered tree of fixed arity, nodes indexed 0..n-1 in preorder.

    ``offspring[i]`` is 0 (leaf) or ``arity``; ``parent[i]`` / ``letter[i]``
    give the parent index and the child letter (root: parent -1, letter 0).
    """

    __slots__ = ("arity", "offspring", "parent", "letter", "_child_start")

    def __init__(self, arity: int, offspring):
        self.arity = arity
        self.offspring = list(offspring)
        n = len(self.offspring)
        parent = [-1] * n
        letter = [0] * n
        child_start = [0] * n
        stack: list[list[int]] = []  # [node, next letter]
        for i, c in enumerate(self.offspring):
            if c not in (0, arity):
                raise ValueError(f"offspring count {c} invalid for arity {arity}")
            if i > 0:
                if not stack:
                    raise ValueError("offspring sequence ends early")
                top = stack[-1]
                parent[i] = top[0]
                letter[i] = top[1]
                if top[1] == 1:
                    child_start[top[0]] = i
                top[1] += 1
                if top[1] > arity:
                    stack.pop()
            if c:
                stack.append([i, 1])
        if stack:
            raise ValueError("offspring sequence is incomplete")
        self.parent = parent
        self.letter = letter
        self._child_start = child_start

    # -- basic structure ---------------------------------------------------

    def __len__(self) -> int:
        return len(self.offspring)

    @property
    def n_internal(self) -> int:
        return sum(1 for c in self.offspring if c)

    @property
    def n_leaves(self) -> int:
        return len(self) - self.n_internal

    def is_internal(self, i: int) -> bool:
        return self.offspring[i] != 0

    def children(self, i: int) -> tuple[int, ...]:
        """Child indices of node i in letter order.

        Children of a node are NOT contiguous in preorder; walk subtree
        boundaries from the first child.
        """
        if not self.offspring[i]:
            return ()
        out = []
        j = self._child_start[i]
        for _ in range(self.arity):
            out.append(j)
            j = self.subtree_end(j)
        return tuple(out)

    def child(self, i: int, letter: int) -> int:
        return self.children(i)[letter - 1]

    def subtree_end(self, i: int) -> int:
        """Index one past the last node of the subtree rooted at i."""
        depth = 1
        j = i
        while depth:
            depth += self.offspring[j] - 1
            j += 1
        return j

    def depth(self, i: int) -> int:
        d = 0
        while i > 0:
            i = self.parent[i]
            d += 1
        return d

    def word(self, i: int) -> Word:
        rev = []
        while i > 0:
            rev.append(self.letter[i])
            i = self.parent[i]
        return tuple(reversed(rev))

    def words(self) -> list[Word]:
        out: list[Word] = [()] * len(self)
        for i in range(1, len(self)):
            out[i] = out[self.parent[i]] + (self.letter[i],)
        return out

    def index_of(self, w: Word) -> int:
        i = 0
        for letter in w:
            if not self.offspring[i]:
                raise KeyError(w)
            i = self.child(i, letter)
        return i

    def internal_indices(self) -> list[int]:
        return [i for i, c in enumerate(self.offspring) if c]

    def internal_words(self) -> list[Word]:
        ws = self.words()
        return [ws[i] for i in self.internal_indices()]

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_internal_words(cls, arity: int, internal) -> "OrderedTree":
        internal_set = {tuple(w) for w in internal}
        for w in internal_set:
            if w and w[:-1] not in internal_set:
                raise ValueError(f"internal set not closed under parent: {w}")
        return cls(arity, offspring_from_internal_words(arity, internal_set))

    @classmethod
    def single_leaf(cls, arity: int) -> "OrderedTree":
        return cls(arity, [0])

    # -- equality / serialization -----------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, OrderedTree)
            and self.arity == other.arity
            and self.offspring == other.offspring
        )

    def __hash__(self) -> int:
        return hash((self.arity, tuple(self.offspring)))

    def __repr__(self) -> str:
        return f"OrderedTree(arity={self.arity}, n={len(self)})"

    def to_parens(self) -> str:
        """Balanced-parenthesis encoding: internal node = '(' children ')',
        leaf = empty string; letters implicit by position."""
        parts: list[str] = []
        pending: list[int] = []
        for c in self.offspring:
            if c:
                parts.append("(")
                pending.append(self.arity)
            else:
                parts.append("o")
                while pending and pending[-1] == 1:
                    parts.append(")")
                    pending.pop()
                if pending:
                    pending[-1] -= 1
        return "".join(parts)

    @classmethod
    def from_parens(cls, arity: int, s: str) -> "OrderedTree":
        offspring = []
        for ch in s:
            if ch == "(":
                offspring.append(arity)
            elif ch == "o":
                offspring.append(0)
            elif ch != ")":
                raise ValueError(f"bad character {ch!r}")
        return cls(arity, offspring)

    def to_json_dict(self) -> dict:
        return {
            "arity": self.arity,
            "internal": ["".join(map(str, w)) for w in self.internal_words()],
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "OrderedTree":
        internal = [tuple(int(ch) for ch in s) for s in d["internal"]]
        return cls.from_internal_words(d["arity"], internal)


@dataclass
class IncreasingTree:
    """Internal-node skeleton of a full tree plus insertion ranks.

    ``skeleton`` lists the internal-node words in insertion order, so
    label(skeleton[k]) = k+1 and labels increase along branches.
    """

    arity: int
    skeleton: list[Word] = field(default_factory=list)

    @property
    def labels(self) -> dict[Word, int]:
        return {w: k + 1 for k, w in enumerate(self.skeleton)}

    def shape(self) -> OrderedTree:
        return OrderedTree.from_internal_words(self.arity, self.skeleton)

    def depths(self) -> list[int]:
        return [len(w) for w in self.skeleton]


# ---------------------------------------------------------------------------
# structure helpers


def internal_nodes_lex(t: OrderedTree) -> list[Word]:
    """Internal-node words in lexicographic (= preorder) order."""
    return t.internal_words()


def height_process(t: OrderedTree) -> list[int]:
    """Depths of the internal nodes taken in lexicographic order."""
    depths = [0] * len(t)
    for i in range(1, len(t)):
        depths[i] = depths[t.parent[i]] + 1
    return [depths[i] for i in t.internal_indices()]


def tree_distance(u: Word, v: Word) -> int:
    """Graph distance between two nodes of a tree, as words."""
    w = lca(u, v)
    return (len(u) - len(w)) + (len(v) - len(w))


def offspring_from_internal_words(arity: int, internal) -> list[int]:
    """Preorder offspring sequence of the full tree whose internal-node set
    is given (iterative; handles 10^5+ nodes without recursion limits)."""
    internal_set = {tuple(w) for w in internal}
    if not internal_set:
        return [0]
    offspring: list[int] = []
    stack: list[Word] = [ROOT]
    while stack:
        w = stack.pop()
        if w in internal_set:
            offspring.append(arity)
            for i in range(arity, 0, -1):
                stack.append(w + (i,))
        else:
            offspring.append(0)
    return offspring


# ---------------------------------------------------------------------------
# enumeration


def enumerate_trees(arity: int, n_internal: int, bound: int = DEFAULT_EXHAUSTIVE_BOUND):
    """All full trees of the given arity with exactly n_internal internal
    nodes, each exactly once (lexicographic on offspring sequences)."""
    if n_internal > bound:
        raise ValueError(f"n_internal={n_internal} exceeds exhaustive bound {bound}")

    def seqs(n: int):
        # offspring sequences of a single tree with n internal nodes
        if n == 0:
            yield (0,)
            return
        for parts in _compositions(n - 1, arity):
            subtrees = [list(seqs(p)) for p in parts]
            yield from _products(subtrees, (arity,))

    return [OrderedTree(arity, s) for s in seqs(n_internal)]


def _compositions(total: int, k: int):
    if k == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, k - 1):
            yield (first,) + rest


def _products(choice_lists, prefix):
    if not choice_lists:
        yield prefix
        return
    for head in choice_lists[0]:
        yield from _products(choice_lists[1:], prefix + head)


# ---------------------------------------------------------------------------
# samplers
#
# All samplers take a numpy Generator.  The documented seed -> stream mapping
# is np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed))) with
# per-replica substreams seeded by SeedSequence((seed, replica_index)).


def rng_from_seed(seed: int, replica: int | None = None) -> np.random.Generator:
    entropy = seed if replica is None else (seed, replica)
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))


def sample_offspring_sequence(arity: int, n_internal: int, rng) -> np.ndarray:
    """Preorder offspring counts of a uniform full tree with ``n_internal``
    internal nodes, via the cycle lemma.

    The Lukasiewicz step multiset (n_internal steps of +(arity-1), the rest
    -1) is shuffled and the unique rotation starting after the first minimum
    of the partial sums is an excursion, giving exact uniformity.
    """
    n_nodes = arity * n_internal + 1
    steps = np.full(n_nodes, -1, dtype=np.int64)
    steps[:n_internal] = arity - 1
    rng.shuffle(steps)
    walk = np.cumsum(steps)
    m = int(np.argmin(walk))
    steps = np.roll(steps, -(m + 1))
    return steps + 1


def sample_uniform_tree(arity: int, n_internal: int, rng) -> OrderedTree:
    """Exactly uniform full tree with the given number of internal nodes."""
    return OrderedTree(arity, sample_offspring_sequence(arity, n_internal, rng))


def sample_increasing_tree(arity: int, K: int, rng) -> IncreasingTree:
    """Leaf-growth tree: start from a single leaf and K-1 times replace a
    uniformly chosen leaf by an internal node with ``arity`` children.

    The unlabeled shape follows the growth distribution (weight proportional
    to the number of increasing labelings).
    """
    if K < 1:
        raise ValueError("K must be >= 1")
    skeleton: list[Word] = [ROOT]
    leaves: list[Word] = [ROOT + (i,) for i in range(1, arity + 1)]
    for _ in range(K - 1):
        j = int(rng.integers(len(leaves)))
        u = leaves[j]
        leaves[j] = leaves[-1]
        leaves.pop()
        skeleton.append(u)
        leaves.extend(u + (i,) for i in range(1, arity + 1))
    return IncreasingTree(arity, skeleton)


class CapExceeded(RuntimeError):
    """Raised when a random generation step exceeds its node cap."""


def sample_gw_tree(arity: int, rng, cap: int = 10**6) -> OrderedTree:
    """Unconditioned critical Galton-Watson tree: offspring 0 with
    probability (arity-1)/arity, ``arity`` with probability 1/arity.

    Raises CapExceeded when the node count passes ``cap`` (critical GW trees
    have infinite expected size)."""
    offspring: list[int] = []
    open_slots = 1
    while open_slots:
        if len(offspring) >= cap:
            raise CapExceeded(f"GW tree exceeded cap of {cap} nodes")
        if rng.random() < 1.0 / arity:
            offspring.append(arity)
            open_slots += arity - 1
        else:
            offspring.append(0)
            open_slots -= 1
    return OrderedTree(arity, offspring)

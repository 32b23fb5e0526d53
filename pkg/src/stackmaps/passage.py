"""Passage counts on words and the face-type evolution automata.

``gamma`` counts how many blocks a word over {1,2,3} completes: the first
block ends at the first occurrence of the letter 1, and each later block
ends as soon as it has collected all three letters.  Folding the face-type
evolution rules along a word gives the same number, which is the graph
distance to the root vertex of the triangulation vertex encoded by the word.

For the binary alphabet (quadrangulations) two inequivalent counts coexist:
the type-automaton distance ``quad_root_distance`` (consistent with BFS on
the constructed maps, used by default everywhere) and the block count
``gamma_prime_literal`` over W_{1,2} = {12,21}*{11,22}{1,2} (kept for
comparison; its renewal rate is 1/5 rather than 1/3).
"""

from __future__ import annotations

from dataclasses import dataclass

from .trees import Word, lca

FULL_MASK = 0b111


# ---------------------------------------------------------------------------
# ternary words


def tau_decomposition(word: Word) -> list[int]:
    """Positions tau_1=0 < tau_2 < ... where blocks of the word close.

    tau_2 is the position of the first letter 1; afterwards a block closes
    at the first position where all of 1,2,3 have appeared since the
    previous boundary.  Only boundaries <= len(word) are returned.
    """
    taus = [0]
    seen = 0
    waiting_for_one = True
    for pos, letter in enumerate(word, start=1):
        if waiting_for_one:
            if letter == 1:
                taus.append(pos)
                waiting_for_one = False
        else:
            seen |= 1 << (letter - 1)
            if seen == FULL_MASK:
                taus.append(pos)
                seen = 0
    return taus


def gamma(word: Word) -> int:
    """Number of closed blocks of the word (the boundary at 0 included)."""
    return len(tau_decomposition(word))


@dataclass
class GammaState:
    """Streaming automaton computing gamma letter by letter in O(1) space."""

    count: int = 1
    seen: int = 0
    waiting_for_one: bool = True

    def push(self, letter: int) -> int:
        if self.waiting_for_one:
            if letter == 1:
                self.count += 1
                self.waiting_for_one = False
        else:
            self.seen |= 1 << (letter - 1)
            if self.seen == FULL_MASK:
                self.count += 1
                self.seen = 0
        return self.count

    def copy(self) -> "GammaState":
        return GammaState(self.count, self.seen, self.waiting_for_one)


def gamma_pair(u: Word, v: Word) -> int:
    """Sum of the block counts of the suffixes of u and v past their last
    common ancestor.  Defined only when neither word is a prefix of the
    other (ancestor pairs have no two-sided decomposition)."""
    w = lca(u, v)
    if len(w) == len(u) or len(w) == len(v):
        raise ValueError("gamma_pair requires that neither word is an ancestor of the other")
    return gamma(u[len(w):]) + gamma(v[len(w):])


TriFaceType = tuple[int, int, int]


def tri_type(word: Word) -> TriFaceType:
    """Distances to the root vertex of the three corners of the face
    reached by the word, folding the evolution rules from (0, 1, 1):
    letter l replaces corner l by a new vertex at distance 1 + min."""
    i, j, k = 0, 1, 1
    for letter in word:
        g = 1 + min(i, j, k)
        if letter == 1:
            i = g
        elif letter == 2:
            j = g
        elif letter == 3:
            k = g
        else:
            raise ValueError(f"letter {letter} not in {{1,2,3}}")
    return (i, j, k)


def tri_root_distance(word: Word) -> int:
    """Distance to the root vertex of the triangulation vertex inserted in
    the face reached by the word; equals gamma(word)."""
    return 1 + min(tri_type(word))


# ---------------------------------------------------------------------------
# binary words (quadrangulations)

QuadFaceType = tuple[int, int, int, int]


def quad_type(word: Word) -> QuadFaceType:
    """Distances to the root vertex of the four corners (in construction
    order) of the face reached by the word; folds the rules
    (a,b,c,d) -> (b, 1+b∧d, d, a) / (b, 1+b∧d, d, c) from (1, 2, 1, 0)."""
    a, b, c, d = 1, 2, 1, 0
    for letter in word:
        x = 1 + min(b, d)
        if letter == 1:
            a, b, c, d = b, x, d, a
        elif letter == 2:
            a, b, c, d = b, x, d, c
        else:
            raise ValueError(f"letter {letter} not in {{1,2}}")
    return (a, b, c, d)


def quad_root_distance(word: Word) -> int:
    """Distance to the root vertex of the quadrangulation vertex inserted
    in the face reached by the word (diagonal ends are the 2nd and 4th
    corners)."""
    t = quad_type(word)
    return 1 + min(t[1], t[3])


def gamma_prime_literal(word: Word) -> int:
    """Block count over W_{1,2} = {12,21}* {11,22} {1,2}: maximal run of
    alternating pairs, one doubled pair, one closing letter.  A leftover
    suffix counts as one extra partial block unless it is a clean run of
    alternating pairs (possibly empty)."""
    n = len(word)
    count = 1  # boundary at position 0
    pos = 0
    while True:
        j = pos
        while j + 1 < n and word[j] != word[j + 1]:
            j += 2
        if j + 2 >= n:  # no room for doubled pair + closing letter
            break
        pos = j + 3
        count += 1
    rest = word[pos:]
    clean = len(rest) % 2 == 0 and all(
        rest[i] != rest[i + 1] for i in range(0, len(rest), 2)
    )
    return count + (0 if clean else 1)


def gamma_prime_pair(u: Word, v: Word, literal: bool = False) -> int:
    """Pair version of the binary passage count through the lca; uses the
    type-automaton distance unless ``literal`` selects the block count."""
    f = gamma_prime_literal if literal else quad_root_distance
    w = lca(u, v)
    if len(w) == len(u) or len(w) == len(v):
        raise ValueError(
            "gamma_prime_pair requires that neither word is an ancestor of the other"
        )
    return f(u[len(w):]) + f(v[len(w):])

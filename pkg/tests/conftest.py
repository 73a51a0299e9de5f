import itertools
from collections import deque

import pytest
from sympy.combinatorics import Permutation

from coxhecke.coxeter import CoxeterSystem


A2 = [[1, 3], [3, 1]]
B2 = [[1, 4], [4, 1]]
A3 = [[1, 3, 2], [3, 1, 3], [2, 3, 1]]
A1A1 = [[1, 2], [2, 1]]
DIHEDRAL_INF = [[1, 0], [0, 1]]
# s=0, t=1, u=2 with m_st = 3, m_su = m_tu = ∞
TRIANGLE = [[1, 3, 0], [3, 1, 0], [0, 0, 1]]
A2A1 = [[1, 3, 2], [3, 1, 2], [2, 2, 1]]
AFFINE_A2 = [[1, 3, 3], [3, 1, 3], [3, 3, 1]]
AFFINE_C2 = [[1, 4, 2], [4, 1, 4], [2, 4, 1]]
AFFINE_G2 = [[1, 6, 2], [6, 1, 3], [2, 3, 1]]
# s, t with m = ∞ and u commuting with both
FREE_PAIR_TIMES_A1 = [[1, 0, 2], [0, 1, 2], [2, 2, 1]]


class PermOracle:
    """Cayley-graph model of a finite Coxeter group in a permutation representation."""

    def __init__(self, gens: list[Permutation]):
        self.gens = gens
        size = gens[0].size
        identity = Permutation(list(range(size)))
        self.lengths = {identity: 0}
        queue = deque([identity])
        while queue:
            p = queue.popleft()
            for g in gens:
                q = p * g
                if q not in self.lengths:
                    self.lengths[q] = self.lengths[p] + 1
                    queue.append(q)
        self.identity = identity

    def perm(self, word) -> Permutation:
        p = self.identity
        for s in word:
            p = p * self.gens[s]
        return p

    def length(self, word) -> int:
        return self.lengths[self.perm(word)]

    def order(self) -> int:
        return len(self.lengths)

    def shortlex_word(self, word) -> tuple[int, ...]:
        """Least word of minimal length spelling the same element, by brute force."""
        target = self.perm(word)
        n = self.lengths[target]
        for cand in itertools.product(range(len(self.gens)), repeat=n):
            if self.perm(cand) == target:
                return tuple(cand)
        raise AssertionError("unreachable")


def type_a_oracle(rank: int) -> PermOracle:
    return PermOracle([Permutation(i, i + 1, size=rank + 1) for i in range(rank)])


def b2_oracle() -> PermOracle:
    # points 0,1,2,3 stand for +1,+2,-1,-2
    return PermOracle([Permutation(0, 2, size=4), Permutation([[0, 1], [2, 3]], size=4)])


@pytest.fixture
def a2():
    return CoxeterSystem(A2)


@pytest.fixture
def b2():
    return CoxeterSystem(B2)


@pytest.fixture
def a3():
    return CoxeterSystem(A3)


@pytest.fixture
def a1a1():
    return CoxeterSystem(A1A1)


@pytest.fixture
def dihedral_inf():
    return CoxeterSystem(DIHEDRAL_INF)


@pytest.fixture
def triangle():
    return CoxeterSystem(TRIANGLE)


@pytest.fixture
def a2a1():
    return CoxeterSystem(A2A1)


FINITE_CASES = [
    ("A2", A2, lambda: type_a_oracle(2)),
    ("B2", B2, b2_oracle),
    ("A3", A3, lambda: type_a_oracle(3)),
]

SWEEP_SYSTEMS = {
    "A2": A2,
    "B2": B2,
    "A3": A3,
    "dihedral_inf": DIHEDRAL_INF,
    "triangle": TRIANGLE,
}


def irreducible_subsets(sys: CoxeterSystem):
    """Non-empty subsets of S with a connected diagram."""
    for k in range(1, sys.rank + 1):
        for J in itertools.combinations(range(sys.rank), k):
            if sys.is_irreducible(J):
                yield J

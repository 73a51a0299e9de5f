"""
Coxeter systems and the word problem.

Elements are kept in ShortLex normal form: the lexicographically least
reduced word under ascending generator index. Normal forms come from
closing a reduced word under braid moves (Matsumoto), so every reduced
expression of an element is available alongside its canonical word.
"""

import hashlib
import json
import threading
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional, Sequence

import networkx as nx
import numpy as np

from coxhecke.config import settings, logger, resolve_cap
from coxhecke.diagrams import INFINITY, SubsetType, diagram, identify
from coxhecke.errors import (
    AsymmetricError,
    BadDiagonalError,
    BadOrderError,
    IndexOutOfRangeError,
    MatrixShapeError,
    NotSphericalError,
    ResourceLimitError,
)

Word = tuple[int, ...]
GeneratorSet = tuple[int, ...]


class Side(str, Enum):
    LEFT = "left"
    RIGHT = "right"
    DOUBLE = "double"


# ── Matrix ───────────────────────────────────────────────

def validate_matrix(rows: Sequence[Sequence[int]]) -> None:
    """Raise unless `rows` is a Coxeter matrix (0 encodes infinity)."""
    n = len(rows)
    if n == 0 or any(len(r) != n for r in rows):
        raise MatrixShapeError("Coxeter matrix must be square with rank >= 1")
    for r in rows:
        for v in r:
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)):
                raise MatrixShapeError(f"Coxeter matrix entries must be integers, got {v!r}")

    arr = np.asarray(rows, dtype=np.int64)

    bad_diag = np.flatnonzero(np.diag(arr) != 1)
    if bad_diag.size:
        i = int(bad_diag[0])
        raise BadDiagonalError(i, int(arr[i, i]))

    asym = np.argwhere(arr != arr.T)
    if asym.size:
        i, j = (int(x) for x in asym[0])
        raise AsymmetricError(i, j, int(arr[i, j]), int(arr[j, i]))

    off = ~np.eye(n, dtype=bool)
    bad = np.argwhere(off & (arr != INFINITY) & (arr < 2))
    if bad.size:
        i, j = (int(x) for x in bad[0])
        raise BadOrderError(i, j, int(arr[i, j]))


@dataclass(frozen=True)
class CoxeterMatrix:
    rows: tuple[tuple[int, ...], ...]

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "CoxeterMatrix":
        validate_matrix(rows)
        return cls(tuple(tuple(int(v) for v in r) for r in rows))

    @property
    def rank(self) -> int:
        return len(self.rows)

    def m(self, i: int, j: int) -> int:
        return self.rows[i][j]

    def content_hash(self) -> str:
        payload = json.dumps([list(r) for r in self.rows], separators=(",", ":"))
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()


# ── Elements ─────────────────────────────────────────────

@dataclass(frozen=True, order=True)
class Element:
    """Group element in normal form. Ordering is ShortLex."""

    length: int = field(init=False, repr=False)
    word: Word

    def __post_init__(self):
        object.__setattr__(self, "length", len(self.word))

    @property
    def is_identity(self) -> bool:
        return not self.word

    def to_json(self) -> list[int]:
        return list(self.word)


IDENTITY = Element(())


def sort_elements(elements: Iterable[Element]) -> list[Element]:
    return sorted(set(elements))


# ── System ───────────────────────────────────────────────

class CoxeterSystem:

    def __init__(
        self,
        matrix: CoxeterMatrix | Sequence[Sequence[int]],
        names: Optional[Sequence[str]] = None,
        cache_cap: Optional[int] = None,
    ):
        if not isinstance(matrix, CoxeterMatrix):
            matrix = CoxeterMatrix.from_rows(matrix)
        self.matrix = matrix
        self.rank = matrix.rank
        self.names = tuple(names) if names else tuple(f"s{i}" for i in range(self.rank))
        if len(self.names) != self.rank:
            raise MatrixShapeError(
                f"{len(self.names)} generator names given for rank {self.rank}"
            )
        self.cache_cap = resolve_cap(cache_cap, settings.NORMAL_FORM_CACHE_CAP)

        self._lock = threading.RLock()
        self._closure: dict[Word, frozenset[Word]] = {}
        self._canon: dict[Word, Word] = {}
        self._right: dict[tuple[Word, int], Element] = {}
        self._left: dict[tuple[Word, int], Element] = {}
        self._normal: dict[Word, Element] = {}
        self._types: dict[GeneratorSet, tuple] = {}

        self._classes = self._generator_classes()
        self._class_of = {s: c for c, members in enumerate(self._classes) for s in members}
        logger.info(
            f"Coxeter system ready: rank={self.rank}, "
            f"generator classes={len(self._classes)}"
        )

    def __repr__(self) -> str:
        return f"CoxeterSystem(rank={self.rank}, rows={self.matrix.rows})"

    @property
    def identity(self) -> Element:
        return IDENTITY

    @property
    def generators(self) -> GeneratorSet:
        return tuple(range(self.rank))

    def m(self, s: int, t: int) -> int:
        return self.matrix.rows[s][t]

    def _check_index(self, s: int) -> None:
        if not isinstance(s, (int, np.integer)) or not 0 <= s < self.rank:
            raise IndexOutOfRangeError(s, self.rank)

    def subset(self, J: Iterable[int]) -> GeneratorSet:
        """Validated, ascending generator set."""
        members = tuple(sorted(set(int(s) for s in J)))
        for s in members:
            self._check_index(s)
        return members

    def generator(self, s: int) -> Element:
        self._check_index(s)
        return Element((s,))

    # ── Generator conjugacy classes ──────────────────────

    def _generator_classes(self) -> tuple[GeneratorSet, ...]:
        g = nx.Graph()
        g.add_nodes_from(range(self.rank))
        for s in range(self.rank):
            for t in range(s + 1, self.rank):
                m = self.m(s, t)
                if m != INFINITY and m % 2 == 1:
                    g.add_edge(s, t)
        comps = [tuple(sorted(c)) for c in nx.connected_components(g)]
        return tuple(sorted(comps))

    @property
    def generator_classes(self) -> tuple[GeneratorSet, ...]:
        return self._classes

    @property
    def num_classes(self) -> int:
        return len(self._classes)

    def class_of(self, s: int) -> int:
        self._check_index(s)
        return self._class_of[s]

    # ── Word problem ─────────────────────────────────────

    def _braid_closure(self, word: Word) -> frozenset[Word]:
        """All words reachable from a reduced word by braid moves."""
        seen = {word}
        queue = deque([word])
        n = len(word)
        while queue:
            w = queue.popleft()
            for i in range(n - 1):
                a, b = w[i], w[i + 1]
                if a == b:
                    continue
                m = self.m(a, b)
                if m == INFINITY or i + m > n:
                    continue
                if all(w[i + k] == (a if k % 2 == 0 else b) for k in range(m)):
                    swapped = tuple(b if k % 2 == 0 else a for k in range(m))
                    nw = w[:i] + swapped + w[i + m:]
                    if nw not in seen:
                        seen.add(nw)
                        queue.append(nw)
        return frozenset(seen)

    def _canonical(self, reduced: Word) -> Element:
        """Normal form of a word already known to be reduced."""
        canon = self._canon.get(reduced)
        if canon is not None:
            return Element(canon)
        with self._lock:
            closure = self._braid_closure(reduced)
            canon = min(closure)
            self._closure[canon] = closure
            for w in closure:
                self._canon[w] = canon
            self._enforce_cap()
        return Element(canon)

    @property
    def memo_size(self) -> int:
        """Entries held across the normal-form and multiplication memos."""
        return len(self._canon) + len(self._normal) + len(self._right) + len(self._left)

    def _enforce_cap(self) -> None:
        if self.cache_cap and self.memo_size > self.cache_cap:
            logger.debug(f"Normal-form cache exceeded {self.cache_cap} entries, clearing")
            self.clear_cache()

    def clear_cache(self) -> None:
        with self._lock:
            self._closure.clear()
            self._canon.clear()
            self._right.clear()
            self._left.clear()
            self._normal.clear()

    def reduced_words(self, w: Element) -> frozenset[Word]:
        """Every reduced expression of w."""
        closure = self._closure.get(w.word)
        if closure is None:
            self._canonical(w.word)
            closure = self._closure.get(w.word)
            if closure is None:
                # cache was cleared under us
                closure = self._braid_closure(w.word)
        return closure

    def right_multiply_generator(self, w: Element, s: int) -> Element:
        key = (w.word, s)
        hit = self._right.get(key)
        if hit is not None:
            return hit
        self._check_index(s)
        words = self.reduced_words(w)
        shorter = next((x for x in sorted(words) if x and x[-1] == s), None)
        if shorter is not None:
            result = self._canonical(shorter[:-1])
        else:
            result = self._canonical(w.word + (s,))
        self._right[key] = result
        self._enforce_cap()
        return result

    def left_multiply_generator(self, s: int, w: Element) -> Element:
        key = (w.word, s)
        hit = self._left.get(key)
        if hit is not None:
            return hit
        self._check_index(s)
        words = self.reduced_words(w)
        shorter = next((x for x in sorted(words) if x and x[0] == s), None)
        if shorter is not None:
            result = self._canonical(shorter[1:])
        else:
            result = self._canonical((s,) + w.word)
        self._left[key] = result
        self._enforce_cap()
        return result

    def normalize(self, word: Sequence[int]) -> Element:
        """ShortLex-least reduced word of the element spelled by `word`."""
        word = tuple(int(s) for s in word)
        hit = self._normal.get(word)
        if hit is not None:
            return hit
        for s in word:
            self._check_index(s)
        w = IDENTITY
        for s in word:
            w = self.right_multiply_generator(w, s)
        self._normal[word] = w
        self._enforce_cap()
        return w

    def multiply(self, u: Element, v: Element) -> Element:
        w = u
        for s in v.word:
            w = self.right_multiply_generator(w, s)
        return w

    def inverse(self, u: Element) -> Element:
        return self._canonical(tuple(reversed(u.word)))

    def conjugate(self, s: int, w: Element) -> Element:
        """s·w·s"""
        return self.left_multiply_generator(s, self.right_multiply_generator(w, s))

    def conjugate_by(self, x: Element, w: Element) -> Element:
        """x·w·x⁻¹"""
        return self.multiply(self.multiply(x, w), self.inverse(x))

    # ── Descents and support ─────────────────────────────

    def descents(self, w: Element, side: Side = Side.LEFT) -> GeneratorSet:
        if w.is_identity:
            return ()
        words = self.reduced_words(w)
        if Side(side) == Side.LEFT:
            return tuple(sorted({x[0] for x in words}))
        if Side(side) == Side.RIGHT:
            return tuple(sorted({x[-1] for x in words}))
        raise ValueError("descents takes side left or right")

    def is_descent(self, s: int, w: Element, side: Side = Side.LEFT) -> bool:
        return s in self.descents(w, side)

    def support(self, w: Element) -> GeneratorSet:
        return tuple(sorted(set(w.word)))

    # ── Parabolic cosets ─────────────────────────────────

    def min_coset_rep(self, J: Iterable[int], w: Element, side: Side = Side.LEFT) -> Element:
        """Minimal element of W_J·w (left), w·W_J (right) or W_J·w·W_J (double)."""
        J = set(self.subset(J))
        side = Side(side)
        while True:
            moved = False
            if side in (Side.LEFT, Side.DOUBLE):
                hit = [s for s in self.descents(w, Side.LEFT) if s in J]
                if hit:
                    w = self.left_multiply_generator(hit[0], w)
                    moved = True
            if side in (Side.RIGHT, Side.DOUBLE):
                hit = [s for s in self.descents(w, Side.RIGHT) if s in J]
                if hit:
                    w = self.right_multiply_generator(w, hit[0])
                    moved = True
            if not moved:
                return w

    def coset_factorization(
        self, J: Iterable[int], w: Element, side: Side = Side.LEFT
    ) -> tuple[Element, Element]:
        """(y, x) with y ∈ W_J and x minimal; w = y·x (left) or w = x·y (right)."""
        side = Side(side)
        if side == Side.DOUBLE:
            raise ValueError("coset_factorization takes side left or right")
        x = self.min_coset_rep(J, w, side)
        if side == Side.LEFT:
            y = self.multiply(w, self.inverse(x))
        else:
            y = self.multiply(self.inverse(x), w)
        return y, x

    # ── Subsets ──────────────────────────────────────────

    def irreducible_components(self, J: Iterable[int]) -> list[GeneratorSet]:
        J = self.subset(J)
        if not J:
            return []
        g = diagram(self.matrix.rows, J)
        comps = [tuple(sorted(J[i] for i in c)) for c in nx.connected_components(g)]
        return sorted(comps)

    def perp(self, J: Iterable[int]) -> GeneratorSet:
        J = self.subset(J)
        return tuple(
            s for s in range(self.rank)
            if s not in J and all(self.m(s, j) == 2 for j in J)
        )

    def classify_subset(self, J: Iterable[int]) -> list[tuple[GeneratorSet, SubsetType, str]]:
        """(component, type, diagram label) per irreducible component."""
        J = self.subset(J)
        hit = self._types.get(J)
        if hit is not None:
            return list(hit)
        out = []
        for comp in self.irreducible_components(J):
            kind, label = identify(diagram(self.matrix.rows, comp))
            out.append((comp, kind, label))
        self._types[J] = tuple(out)
        return out

    def subset_type(self, J: Iterable[int]) -> SubsetType:
        parts = self.classify_subset(J)
        if all(kind == SubsetType.SPHERICAL for _, kind, _ in parts):
            return SubsetType.SPHERICAL
        if len(parts) > 1:
            return SubsetType.REDUCIBLE
        return parts[0][1]

    def is_spherical(self, J: Iterable[int]) -> bool:
        return self.subset_type(J) == SubsetType.SPHERICAL

    def is_irreducible(self, J: Iterable[int]) -> bool:
        return len(self.irreducible_components(J)) <= 1

    # ── Special elements ─────────────────────────────────

    def longest_element(self, J: Iterable[int]) -> Element:
        J = self.subset(J)
        if not self.is_spherical(J):
            raise NotSphericalError(f"W_J is infinite for J={list(J)}")
        w = IDENTITY
        while True:
            right = set(self.descents(w, Side.RIGHT))
            ascent = next((s for s in J if s not in right), None)
            if ascent is None:
                return w
            w = self.right_multiply_generator(w, ascent)

    def k_of(self, J: Iterable[int], w: Element) -> GeneratorSet:
        """{s ∈ J : w·s·w⁻¹ ∈ J}"""
        J = self.subset(J)
        w_inv = self.inverse(w)
        out = []
        for s in J:
            x = self.multiply(self.right_multiply_generator(w, s), w_inv)
            if x.length == 1 and x.word[0] in J:
                out.append(s)
        return tuple(out)

    def extend_with_infinite_generator(self, J: Iterable[int]) -> "CoxeterSystem":
        """Add s_{J,∞} commuting with J and free against S∖J."""
        J = set(self.subset(J))
        rows = [list(r) + [2 if i in J else INFINITY] for i, r in enumerate(self.matrix.rows)]
        rows.append([2 if i in J else INFINITY for i in range(self.rank)] + [1])
        return CoxeterSystem(rows, names=self.names + ("s_inf",), cache_cap=self.cache_cap)

    def lift(self, extended: "CoxeterSystem", w: Element) -> Element:
        """w ↦ w·s_{J,∞} inside the extended system."""
        return extended.right_multiply_generator(extended.normalize(w.word), self.rank)

    # ── Enumeration ──────────────────────────────────────

    def _grow(
        self, gens: GeneratorSet, radius: int, budget: int, phase: str
    ) -> list[Element]:
        layer = {IDENTITY}
        found = [IDENTITY]
        for length in range(1, radius + 1):
            nxt = set()
            for w in layer:
                for s in gens:
                    u = self.right_multiply_generator(w, s)
                    if u.length == length:
                        nxt.add(u)
            if not nxt:
                break
            found.extend(nxt)
            if len(found) > budget:
                raise ResourceLimitError(phase, budget, f"radius {radius}")
            layer = nxt
        return sorted(found)

    def ball(self, radius: int, budget: Optional[int] = None) -> list[Element]:
        """All elements of length <= radius, ShortLex order."""
        budget = resolve_cap(budget, settings.NODE_BUDGET)
        return self._grow(self.generators, radius, budget, "ball")

    def parabolic_ball(
        self, J: Iterable[int], radius: int, budget: Optional[int] = None
    ) -> list[Element]:
        budget = resolve_cap(budget, settings.NODE_BUDGET)
        return self._grow(self.subset(J), radius, budget, "parabolic_ball")

    def parabolic_elements(self, J: Iterable[int], budget: Optional[int] = None) -> list[Element]:
        """All of W_J; J must be spherical."""
        w0 = self.longest_element(J)
        return self.parabolic_ball(J, w0.length, budget)

    def double_coset_ball(
        self,
        J: Iterable[int],
        w: Element,
        max_length: int,
        budget: Optional[int] = None,
    ) -> list[Element]:
        """Elements of W_J·w·W_J with length <= max_length."""
        J = self.subset(J)
        budget = resolve_cap(budget, settings.NODE_BUDGET)
        start = self.min_coset_rep(J, w, Side.DOUBLE)
        if start.length > max_length:
            return []
        seen = {start}
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for s in J:
                for v in (self.left_multiply_generator(s, u), self.right_multiply_generator(u, s)):
                    if v.length <= max_length and v not in seen:
                        seen.add(v)
                        if len(seen) > budget:
                            raise ResourceLimitError("double_coset", budget)
                        queue.append(v)
        return sorted(seen)

    # ── Display ──────────────────────────────────────────

    def format_word(self, w: Element) -> str:
        if w.is_identity:
            return "e"
        return " ".join(self.names[s] for s in w.word)

    # ── Cache transfer ───────────────────────────────────

    def export_closures(self) -> list[list[list[int]]]:
        """Closures as [canonical, other reduced words...], sorted."""
        with self._lock:
            items = sorted(self._closure.items())
        return [[list(canon)] + [list(x) for x in sorted(words) if x != canon] for canon, words in items]

    def import_closures(self, entries: list[list[list[int]]]) -> int:
        """Load closures; malformed entries raise ValueError, nothing is kept."""
        staged: dict[Word, frozenset[Word]] = {}
        for entry in entries:
            if not entry:
                raise ValueError("empty cache entry")
            words = [tuple(int(s) for s in x) for x in entry]
            canon = words[0]
            if any(len(x) != len(canon) for x in words):
                raise ValueError("cache entry mixes lengths")
            if any(not 0 <= s < self.rank for x in words for s in x):
                raise ValueError("cache entry has out-of-range generator")
            if min(words) != canon:
                raise ValueError("cache entry canonical word is not least")
            closure = self._braid_closure(canon)
            if frozenset(words) != closure:
                raise ValueError(f"cache entry {list(canon)} is not a braid-move closure")
            # a braid class is reduced iff none of its words has a repeated letter
            if any(x[i] == x[i + 1] for x in closure for i in range(len(x) - 1)):
                raise ValueError(f"cache entry {list(canon)} is not reduced")
            staged[canon] = closure
        with self._lock:
            for canon, words in staged.items():
                self._closure[canon] = words
                for w in words:
                    self._canon[w] = canon
            self._enforce_cap()
        return len(staged)

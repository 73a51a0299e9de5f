"""
Partial conjugation by a parabolic subgroup W_J.

Orbits, cyclic shifts, reduction to minimal and maximal length, strong
conjugation, finiteness certificates and the decomposition of W into
pieces W_J·(v·W_{K_v}).

All searches expand frontiers in ShortLex order with generators ascending,
so every report is reproducible.
"""

from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional

from coxhecke.config import settings, logger, resolve_cap
from coxhecke.coxeter import (
    CoxeterSystem,
    Element,
    GeneratorSet,
    IDENTITY,
    Side,
    SubsetType,
)
from coxhecke.errors import (
    InvariantViolationError,
    LengthMismatchError,
    NotSphericalError,
    ResourceLimitError,
)


# ── Types ────────────────────────────────────────────────

@dataclass(frozen=True, order=True)
class ShiftArrow:
    """source --s--> target with target = s·source·δ(s), ℓ(target) <= ℓ(source)."""

    source: Element
    target: Element
    generator: int

    def to_json(self) -> dict:
        return {
            "source": self.source.to_json(),
            "target": self.target.to_json(),
            "generator": self.generator,
        }


@dataclass(frozen=True)
class Twist:
    """A diagram automorphism δ of J."""

    mapping: tuple[tuple[int, int], ...]

    @classmethod
    def of(cls, sys: CoxeterSystem, J: Iterable[int], mapping: dict[int, int]) -> "Twist":
        J = sys.subset(J)
        if sorted(mapping) != list(J) or sorted(mapping.values()) != list(J):
            raise ValueError(f"Twist must permute J={list(J)}")
        for a in J:
            for b in J:
                if sys.m(mapping[a], mapping[b]) != sys.m(a, b):
                    raise ValueError(
                        f"Twist does not preserve m({a},{b}) = {sys.m(a, b)}"
                    )
        return cls(tuple(sorted(mapping.items())))

    def __call__(self, s: int) -> int:
        return dict(self.mapping).get(s, s)


class Verdict(str, Enum):
    FINITE = "finite"
    INFINITE = "infinite"


class CertificateKind(str, Enum):
    SPHERICAL_J = "SphericalJ"
    IN_PERP = "InPerp"
    AFFINE_TRANSLATION = "AffineTranslation"
    CONSTANT_LENGTH_CLOSURE = "ConstantLengthClosure"
    LENGTH_CHANGE_WITNESS = "LengthChangeWitness"


@dataclass(frozen=True)
class Certificate:
    kind: CertificateKind
    component: GeneratorSet = ()
    w1: Optional[Element] = None
    w2: Optional[Element] = None
    witness: Optional[Element] = None

    def to_json(self) -> dict:
        out = {"kind": self.kind.value, "component": list(self.component)}
        for name in ("w1", "w2", "witness"):
            value = getattr(self, name)
            if value is not None:
                out[name] = value.to_json()
        return out


@dataclass(frozen=True)
class PartialClassReport:
    J: GeneratorSet
    seed: Element
    verdict: Verdict
    certificate: Certificate
    component_certificates: tuple[Certificate, ...] = ()
    orbit: Optional[tuple[Element, ...]] = None
    max_elements: tuple[Element, ...] = ()
    min_elements: tuple[Element, ...] = ()

    @property
    def is_finite(self) -> bool:
        return self.verdict == Verdict.FINITE

    @property
    def representative(self) -> Optional[Element]:
        """ShortLex-least element of maximal length."""
        return self.max_elements[0] if self.max_elements else None

    def to_json(self) -> dict:
        return {
            "J": list(self.J),
            "seed": self.seed.to_json(),
            "verdict": self.verdict.value,
            "certificate": self.certificate.to_json(),
            "component_certificates": [c.to_json() for c in self.component_certificates],
            "orbit": [w.to_json() for w in self.orbit] if self.orbit is not None else None,
            "max": [w.to_json() for w in self.max_elements],
            "min": [w.to_json() for w in self.min_elements],
        }


@dataclass(frozen=True)
class UPlusResult:
    elements: tuple[Element, ...]
    saturated: bool
    cap: int


class Infinite:
    """Marker returned when a class has no maximal elements."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Infinite"


INFINITE = Infinite()


@dataclass(frozen=True)
class MaxChain:
    """Arrows u_{i+1} -> u_i read upward from the seed to `top`."""

    arrows: tuple[ShiftArrow, ...]
    top: Element


class StrongMode(str, Enum):
    MIN = "min"
    MAX = "max"


@dataclass(frozen=True)
class StrongMove:
    source: Element
    target: Element
    conjugator: Element


@dataclass(frozen=True)
class DecompositionPiece:
    v: Element
    K: GeneratorSet
    twisted_classes: Optional[tuple[tuple[Element, ...], ...]] = None
    members: tuple[Element, ...] = ()

    @property
    def class_representatives(self) -> tuple[Element, ...]:
        return tuple(c[0] for c in self.twisted_classes or ())


@dataclass(frozen=True)
class Decomposition:
    J: GeneratorSet
    radius: int
    pieces: tuple[DecompositionPiece, ...]
    disjoint: bool
    covered: bool
    overlaps: tuple[Element, ...] = ()
    uncovered: tuple[Element, ...] = ()


# ── Shifts ───────────────────────────────────────────────

def twisted_conjugate(
    sys: CoxeterSystem, s: int, w: Element, twist: Optional[Twist] = None
) -> Element:
    """s·w·δ(s)"""
    t = twist(s) if twist else s
    return sys.left_multiply_generator(s, sys.right_multiply_generator(w, t))


def shift_neighbors(
    sys: CoxeterSystem,
    J: Iterable[int],
    w: Element,
    twist: Optional[Twist] = None,
) -> list[ShiftArrow]:
    """Non-increasing shifts of w, self-loops dropped."""
    out = []
    for s in sys.subset(J):
        target = twisted_conjugate(sys, s, w, twist)
        if target != w and target.length <= w.length:
            out.append(ShiftArrow(w, target, s))
    return out


def _shift_class_search(
    sys: CoxeterSystem,
    J: GeneratorSet,
    w: Element,
    twist: Optional[Twist],
    budget: int,
) -> tuple[list[Element], dict[Element, tuple[Element, int]]]:
    """The ≈_J class of w in BFS order, with parent pointers."""
    parents: dict[Element, tuple[Element, int]] = {}
    order = [w]
    seen = {w}
    layer = [w]
    while layer:
        nxt = []
        for x in layer:
            for arrow in shift_neighbors(sys, J, x, twist):
                y = arrow.target
                if y.length == x.length and y not in seen:
                    seen.add(y)
                    parents[y] = (x, arrow.generator)
                    nxt.append(y)
                    if len(seen) > budget:
                        raise ResourceLimitError("cyclic_shift_class", budget)
        layer = sorted(nxt)
        order.extend(layer)
    return order, parents


def _path_to(
    start: Element, end: Element, parents: dict[Element, tuple[Element, int]]
) -> list[ShiftArrow]:
    path = []
    x = end
    while x != start:
        prev, s = parents[x]
        path.append(ShiftArrow(prev, x, s))
        x = prev
    return list(reversed(path))


def cyclic_shift_class(
    sys: CoxeterSystem,
    J: Iterable[int],
    w: Element,
    twist: Optional[Twist] = None,
    budget: Optional[int] = None,
) -> list[Element]:
    budget = resolve_cap(budget, settings.NODE_BUDGET)
    order, _ = _shift_class_search(sys, sys.subset(J), w, twist, budget)
    return sorted(order)


def shift_graph(
    sys: CoxeterSystem, J: Iterable[int], elements: Iterable[Element]
) -> list[ShiftArrow]:
    """All shift arrows between members of a finite set."""
    pool = set(elements)
    arrows = []
    for w in sorted(pool):
        arrows.extend(a for a in shift_neighbors(sys, J, w) if a.target in pool)
    return arrows


# ── Orbits ───────────────────────────────────────────────

def orbit(
    sys: CoxeterSystem,
    J: Iterable[int],
    w: Element,
    budget: Optional[int] = None,
    phase: str = "orbit",
    max_length: Optional[int] = None,
) -> list[Element]:
    """W_J-conjugacy orbit of w, optionally cut at `max_length`."""
    J = sys.subset(J)
    budget = resolve_cap(budget, settings.NODE_BUDGET)
    seen = {w}
    layer = [w]
    while layer:
        nxt = []
        for x in layer:
            for s in J:
                y = sys.conjugate(s, x)
                if y in seen or (max_length is not None and y.length > max_length):
                    continue
                seen.add(y)
                nxt.append(y)
                if len(seen) > budget:
                    raise ResourceLimitError(phase, budget, f"seed {list(w.word)}")
        layer = sorted(nxt)
    return sorted(seen)


def _constant_length_closure(
    sys: CoxeterSystem, J: GeneratorSet, w: Element, budget: int
) -> tuple[bool, Optional[Element]]:
    """(True, None) if the orbit closes at ℓ(w), else (False, witness)."""
    seen = {w}
    layer = [w]
    while layer:
        nxt = []
        for x in layer:
            for s in J:
                y = sys.conjugate(s, x)
                if y.length != w.length:
                    return False, y
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
                    if len(seen) > budget:
                        raise ResourceLimitError("certificate", budget, f"seed {list(w.word)}")
        layer = sorted(nxt)
    return True, None


def _component_certificate(
    sys: CoxeterSystem, Ji: GeneratorSet, w: Element, budget: int
) -> Certificate:
    """Finiteness certificate for one non-spherical irreducible component."""
    chain = reduce_to_min(sys, Ji, w, budget=budget)
    low = chain[-1].target if chain else w
    P = sys.perp(Ji)
    allowed = set(Ji) | set(P)

    if set(low.word) <= allowed:
        # low = w2·w1 with w2 ∈ W_{Ji}, w1 ∈ W_{Ji^⊥}; the two factors commute
        w2, w1 = sys.coset_factorization(Ji, low, Side.LEFT)
        if w2.is_identity:
            return Certificate(CertificateKind.IN_PERP, Ji, w1=w1)
        closed, witness = _constant_length_closure(sys, Ji, w2, budget)
        if not closed:
            return Certificate(
                CertificateKind.LENGTH_CHANGE_WITNESS, Ji,
                witness=sys.multiply(witness, w1),
            )
        if w1.is_identity:
            return Certificate(CertificateKind.CONSTANT_LENGTH_CLOSURE, Ji)
        return Certificate(CertificateKind.AFFINE_TRANSLATION, Ji, w1=w1, w2=w2)

    closed, witness = _constant_length_closure(sys, Ji, low, budget)
    if not closed:
        return Certificate(CertificateKind.LENGTH_CHANGE_WITNESS, Ji, witness=witness)
    return Certificate(CertificateKind.CONSTANT_LENGTH_CLOSURE, Ji)


def decide_finite(
    sys: CoxeterSystem,
    J: Iterable[int],
    w: Element,
    budget: Optional[int] = None,
) -> PartialClassReport:
    """
    Decide whether the W_J-orbit of w is finite.

    W_J is the direct product of its irreducible factors and the factors'
    actions commute, so the orbit is finite iff it is finite under every
    non-spherical factor. Each such factor is settled by a constant-length
    closure search from a minimal-length conjugate.
    """
    J = sys.subset(J)
    budget = resolve_cap(budget, settings.NODE_BUDGET)

    certs = []
    for comp, kind, label in sys.classify_subset(J):
        if kind == SubsetType.SPHERICAL:
            continue
        cert = _component_certificate(sys, comp, w, budget)
        logger.debug(f"Component {list(comp)} ({label}) of J: {cert.kind.value}")
        if cert.kind == CertificateKind.LENGTH_CHANGE_WITNESS:
            return PartialClassReport(
                J=J, seed=w, verdict=Verdict.INFINITE, certificate=cert,
                component_certificates=tuple(certs + [cert]),
            )
        certs.append(cert)

    certificate = certs[0] if certs else Certificate(CertificateKind.SPHERICAL_J, J)
    members = orbit(sys, J, w, budget, phase="orbit")
    top = max(x.length for x in members)
    bottom = min(x.length for x in members)
    return PartialClassReport(
        J=J,
        seed=w,
        verdict=Verdict.FINITE,
        certificate=certificate,
        component_certificates=tuple(certs),
        orbit=tuple(members),
        max_elements=tuple(x for x in members if x.length == top),
        min_elements=tuple(x for x in members if x.length == bottom),
    )


# ── U⁺ ───────────────────────────────────────────────────

def default_u_plus_cap(sys: CoxeterSystem, J: Iterable[int], w: Element) -> int:
    """Cap that separates finite from infinite classes for irreducible J."""
    J = sys.subset(J)
    if sys.is_spherical(J):
        return w.length + 2 * sys.longest_element(J).length
    return w.length + 2


def u_plus(
    sys: CoxeterSystem,
    J: Iterable[int],
    w: Element,
    length_cap: Optional[int] = None,
    budget: Optional[int] = None,
) -> UPlusResult:
    """Elements of length <= cap that shift down to w."""
    J = sys.subset(J)
    cap = default_u_plus_cap(sys, J, w) if length_cap is None else length_cap
    budget = resolve_cap(budget, settings.NODE_BUDGET)
    if w.length > cap:
        return UPlusResult((), False, cap)

    seen = {w}
    layer = [w]
    saturated = True
    while layer:
        nxt = []
        for y in layer:
            for s in J:
                x = sys.conjugate(s, y)
                if x == y or x.length < y.length:
                    continue
                if x.length > cap:
                    saturated = False
                    continue
                if x not in seen:
                    seen.add(x)
                    nxt.append(x)
                    if len(seen) > budget:
                        raise ResourceLimitError("u_plus", budget)
        layer = sorted(nxt)
    return UPlusResult(tuple(sorted(seen)), saturated, cap)


# ── Reductions ───────────────────────────────────────────

def reduce_to_min(
    sys: CoxeterSystem,
    J: Iterable[int],
    w: Element,
    twist: Optional[Twist] = None,
    budget: Optional[int] = None,
) -> list[ShiftArrow]:
    """Shift chain from w to a minimal-length element of its (twisted) class."""
    J = sys.subset(J)
    budget = resolve_cap(budget, settings.NODE_BUDGET)
    chain: list[ShiftArrow] = []
    current = w
    while True:
        order, parents = _shift_class_search(sys, J, current, twist, budget)
        step = None
        for x in sorted(order):
            drop = next(
                (a for a in shift_neighbors(sys, J, x, twist) if a.target.length < x.length),
                None,
            )
            if drop is not None:
                step = (x, drop)
                break
        if step is None:
            return chain
        x, drop = step
        chain.extend(_path_to(current, x, parents))
        chain.append(drop)
        current = drop.target


def reduce_to_max(
    sys: CoxeterSystem,
    J: Iterable[int],
    w: Element,
    budget: Optional[int] = None,
) -> MaxChain | Infinite:
    """Ascending-or-equal conjugations from w up to a maximal element."""
    J = sys.subset(J)
    budget = resolve_cap(budget, settings.NODE_BUDGET)
    report = decide_finite(sys, J, w, budget)
    if not report.is_finite:
        return INFINITE
    top_length = report.max_elements[0].length

    parents: dict[Element, tuple[Element, int]] = {}
    seen = {w}
    layer = [w]
    found = w if w.length == top_length else None
    while layer and found is None:
        nxt = []
        for x in layer:
            for s in J:
                y = sys.conjugate(s, x)
                if y.length < x.length or y in seen:
                    continue
                seen.add(y)
                parents[y] = (x, s)
                nxt.append(y)
        layer = sorted(nxt)
        found = next((y for y in layer if y.length == top_length), None)

    if found is None:
        raise InvariantViolationError(
            f"No ascending chain from {list(w.word)} reaches length {top_length}"
        )
    arrows = []
    x = found
    while x != w:
        prev, s = parents[x]
        arrows.append(ShiftArrow(x, prev, s))
        x = prev
    return MaxChain(tuple(reversed(arrows)), found)


# ── Strong conjugation ───────────────────────────────────

def is_strong_move(
    sys: CoxeterSystem, x: Element, w: Element, target: Element, mode: StrongMode
) -> bool:
    if target.length != w.length:
        return False
    xw = sys.multiply(x, w).length
    wx_inv = sys.multiply(w, sys.inverse(x)).length
    if mode == StrongMode.MIN:
        want = x.length + w.length
    else:
        want = w.length - x.length
    return xw == want or wx_inv == want


def strongly_conjugate(
    sys: CoxeterSystem,
    J: Iterable[int],
    u: Element,
    v: Element,
    mode: StrongMode = StrongMode.MIN,
    search_cap: Optional[int] = None,
    budget: Optional[int] = None,
) -> Optional[list[StrongMove]]:
    """Sequence of elementary strong (min) or ∽ (max) moves from u to v, or None."""
    J = sys.subset(J)
    mode = StrongMode(mode)
    if u.length != v.length:
        raise LengthMismatchError(f"ℓ(u)={u.length} differs from ℓ(v)={v.length}")
    if u == v:
        return []
    if search_cap is None:
        search_cap = (
            sys.longest_element(J).length if sys.is_spherical(J) else settings.SEARCH_CAP
        )
    budget = resolve_cap(budget, settings.NODE_BUDGET)
    conjugators = [x for x in sys.parabolic_ball(J, search_cap, budget) if not x.is_identity]

    parents: dict[Element, tuple[Element, Element]] = {}
    seen = {u}
    layer = [u]
    while layer:
        nxt = []
        for w in layer:
            for x in conjugators:
                y = sys.conjugate_by(x, w)
                if y in seen or not is_strong_move(sys, x, w, y, mode):
                    continue
                seen.add(y)
                parents[y] = (w, x)
                if len(seen) > budget:
                    raise ResourceLimitError("strongly_conjugate", budget)
                if y == v:
                    moves = []
                    z = y
                    while z != u:
                        prev, x_ = parents[z]
                        moves.append(StrongMove(prev, z, x_))
                        z = prev
                    return list(reversed(moves))
                nxt.append(y)
        layer = sorted(nxt)
    return None


def strong_components(
    sys: CoxeterSystem,
    J: Iterable[int],
    elements: Iterable[Element],
    mode: StrongMode = StrongMode.MAX,
    search_cap: Optional[int] = None,
) -> list[tuple[Element, ...]]:
    """Partition equal-length elements into strong-conjugation components."""
    remaining = sorted(set(elements))
    parts = []
    while remaining:
        head = remaining[0]
        part = [head] + [
            y for y in remaining[1:]
            if strongly_conjugate(sys, J, head, y, mode, search_cap) is not None
        ]
        parts.append(tuple(part))
        remaining = [y for y in remaining if y not in part]
    return parts


# ── Decomposition into pieces W_J·(v·W_K) ───────────────

def k_v(sys: CoxeterSystem, J: Iterable[int], v: Element) -> GeneratorSet:
    """Largest K ⊆ J with v·K·v⁻¹ = K."""
    K = set(sys.subset(J))
    while True:
        keep = set(sys.k_of(tuple(K), v)) if K else set()
        if keep == K:
            return tuple(sorted(K))
        K = keep


def twisted_classes(
    sys: CoxeterSystem, v: Element, K: Iterable[int], budget: Optional[int] = None
) -> list[tuple[Element, ...]]:
    """Orbits of x ↦ (v⁻¹·s·v)·x·s on W_K, K spherical and stable under v."""
    K = sys.subset(K)
    v_inv = sys.inverse(v)
    sigma = {}
    for s in K:
        image = sys.multiply(sys.multiply(v_inv, sys.generator(s)), v)
        if image.length != 1 or image.word[0] not in K:
            raise ValueError(f"v does not normalise K={list(K)}")
        sigma[s] = image.word[0]

    remaining = set(sys.parabolic_elements(K, budget))
    classes = []
    while remaining:
        start = min(remaining)
        seen = {start}
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for s in K:
                y = sys.left_multiply_generator(sigma[s], sys.right_multiply_generator(x, s))
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        classes.append(tuple(sorted(seen)))
        remaining -= seen
    return sorted(classes)


def partial_decomposition(
    sys: CoxeterSystem,
    J: Iterable[int],
    radius: int,
    budget: Optional[int] = None,
) -> Decomposition:
    """
    Sort the ball of `radius` into pieces W_J·(v·W_{K_v}), v ∈ ^JW.

    u belongs to piece v when some W_J-conjugate y of u lies in v·W_{K_v},
    i.e. stripping right descents in K_v from y leaves v. Conjugates are
    searched up to radius + 2ℓ(w0(J)) for spherical J (the whole orbit),
    radius + 2 otherwise.
    """
    J = sys.subset(J)
    budget = resolve_cap(budget, settings.NODE_BUDGET)
    spherical = sys.is_spherical(J)
    margin = 2 * sys.longest_element(J).length if spherical else 2
    reach = radius + margin

    candidates = [
        v for v in sys.ball(reach, budget)
        if not set(sys.descents(v, Side.LEFT)) & set(J)
    ]
    K_of_v = {v: k_v(sys, J, v) for v in candidates}

    assignment: dict[Element, set[Element]] = {}
    for u in sys.ball(radius, budget):
        hits = set()
        for y in orbit(sys, J, u, budget, phase="decompose", max_length=reach):
            for v in candidates:
                if v.length > y.length:
                    break
                if sys.min_coset_rep(K_of_v[v], y, Side.RIGHT) == v:
                    hits.add(v)
        assignment[u] = hits

    used = {v for hits in assignment.values() for v in hits}
    listed = sorted({v for v in candidates if v.length <= radius} | used)
    pieces = []
    for v in listed:
        K = K_of_v[v]
        classes = None
        if sys.is_spherical(K):
            classes = tuple(twisted_classes(sys, v, K, budget))
        members = tuple(sorted(u for u, hits in assignment.items() if v in hits))
        pieces.append(DecompositionPiece(v, K, classes, members))

    overlaps = tuple(sorted(u for u, hits in assignment.items() if len(hits) > 1))
    uncovered = tuple(sorted(u for u, hits in assignment.items() if not hits))
    logger.info(
        f"Decomposition J={list(J)} radius={radius}: {len(pieces)} pieces, "
        f"{len(overlaps)} overlaps, {len(uncovered)} uncovered"
    )
    return Decomposition(
        J=J,
        radius=radius,
        pieces=tuple(pieces),
        disjoint=not overlaps,
        covered=not uncovered,
        overlaps=overlaps,
        uncovered=uncovered,
    )


def twisted_class_size_check(
    sys: CoxeterSystem,
    J: Iterable[int],
    piece: DecompositionPiece,
    C: Iterable[Element],
    budget: Optional[int] = None,
) -> bool:
    """|W_J·vC| == |W_J| / |W_K| · |C|"""
    J = sys.subset(J)
    if not sys.is_spherical(J):
        raise NotSphericalError(f"W_J is infinite for J={list(J)}")
    C = set(C)
    W_J = sys.parabolic_elements(J, budget)
    W_K = sys.parabolic_elements(piece.K, budget)
    images = set()
    for c in C:
        vc = sys.multiply(piece.v, c)
        for x in W_J:
            images.add(sys.conjugate_by(x, vc))
    expected = len(W_J) // len(W_K) * len(C)
    return len(images) == expected

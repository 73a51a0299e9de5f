"""
Class polynomials.

Min variant (finite W): T_w ≡ Σ_O f_{w,O}·T_{w_O} modulo commutators,
driven by cyclic-shift reductions:

    f_{sws} = b_s·f_w + a_s·f_{sw}      when ℓ(sws) = ℓ(w) + 2.

Max variant (finite W_J-classes): the same identity solved downward,

    f_u = b_s⁻¹·(f_{sus} − a_s·f_{su}),

anchored at the maximal elements and constant on ∽_J-classes.
"""

from dataclasses import dataclass
from typing import Iterable, Optional

import networkx as nx

from coxhecke.config import settings, logger, resolve_cap
from coxhecke.conjugacy import (
    PartialClassReport,
    StrongMode,
    is_strong_move,
    orbit,
    reduce_to_min,
)
from coxhecke.coxeter import CoxeterSystem, Element, GeneratorSet
from coxhecke.errors import (
    InconsistentRecursionError,
    NotFiniteError,
    NotIrreducibleError,
)
from coxhecke.hecke import parameters
from coxhecke.params import ParamPoly


@dataclass(frozen=True)
class ClassPolyTable:
    J: GeneratorSet
    class_rep: Element
    orbit: tuple[Element, ...]
    entries: tuple[tuple[Element, ParamPoly], ...]
    variant: str = "max"

    def value(self, w: Element) -> ParamPoly:
        for u, f in self.entries:
            if u == w:
                return f
        return ParamPoly.zero()

    def as_dict(self) -> dict[Element, ParamPoly]:
        return dict(self.entries)

    def to_json(self, num_classes: int) -> dict:
        return {
            "class_rep": self.class_rep.to_json(),
            "variant": self.variant,
            "entries": [
                {"word": w.to_json(), "poly": f.to_json(num_classes), "text": str(f)}
                for w, f in self.entries
            ],
        }


# ── Min variant ──────────────────────────────────────────

def min_class_table(sys: CoxeterSystem) -> list[tuple[Element, ...]]:
    """Conjugacy classes of a finite W, sorted by ShortLex-least minimal element."""
    if not sys.is_spherical(sys.generators):
        raise NotFiniteError("Conjugacy classes are only tabulated for finite W")
    elements = sys.parabolic_elements(sys.generators)
    remaining = set(elements)
    classes = []
    while remaining:
        w = min(remaining)
        members = tuple(orbit(sys, sys.generators, w))
        classes.append(members)
        remaining -= set(members)

    def rep(members):
        low = min(x.length for x in members)
        return min(x for x in members if x.length == low)

    return sorted(classes, key=rep)


class _MinRecursion:

    def __init__(self, sys: CoxeterSystem):
        self.sys = sys
        self.classes = min_class_table(sys)
        self.class_id = {w: i for i, members in enumerate(self.classes) for w in members}
        self.min_length = [min(x.length for x in members) for members in self.classes]
        self.memo: dict[Element, dict[int, ParamPoly]] = {}

    def __call__(self, w: Element) -> dict[int, ParamPoly]:
        hit = self.memo.get(w)
        if hit is not None:
            return hit
        cid = self.class_id[w]
        if w.length == self.min_length[cid]:
            result = {cid: ParamPoly.one()}
        else:
            chain = reduce_to_min(self.sys, self.sys.generators, w)
            drop = next(a for a in chain if a.target.length < a.source.length)
            s, y = drop.generator, drop.target
            a, b = parameters(self.sys, s)
            f_y = self(y)
            f_sy = self(self.sys.left_multiply_generator(s, y))
            result = {}
            for c in set(f_y) | set(f_sy):
                value = b * f_y.get(c, ParamPoly.zero()) + a * f_sy.get(c, ParamPoly.zero())
                if value:
                    result[c] = value
        self.memo[w] = result
        return result


def class_poly_min(sys: CoxeterSystem, w: Element) -> dict[int, ParamPoly]:
    """Class id -> f_{w,O}; ids index min_class_table(sys)."""
    return dict(sorted(_MinRecursion(sys)(w).items()))


def class_poly_min_all(sys: CoxeterSystem) -> dict[Element, dict[int, ParamPoly]]:
    rec = _MinRecursion(sys)
    return {w: dict(sorted(rec(w).items())) for w in sys.parabolic_elements(sys.generators)}


# ── Max variant ──────────────────────────────────────────

def _backsim_components(
    sys: CoxeterSystem,
    level: list[Element],
    conjugators: list[Element],
) -> list[tuple[Element, ...]]:
    """Classes of the equivalence generated by elementary ∽_J moves."""
    pool = set(level)
    g = nx.Graph()
    g.add_nodes_from(level)
    for u in level:
        for x in conjugators:
            y = sys.conjugate_by(x, u)
            if y != u and y in pool and is_strong_move(sys, x, u, y, StrongMode.MAX):
                g.add_edge(u, y)
    return sorted(tuple(sorted(c)) for c in nx.connected_components(g))


def class_poly_max(
    sys: CoxeterSystem,
    J: Iterable[int],
    O: PartialClassReport,
    search_cap: Optional[int] = None,
    budget: Optional[int] = None,
) -> ClassPolyTable:
    """
    f^max_{·,O} for a finite W_J-class O of an irreducible J.

    Works on R = {u ∈ W_J·w̄·W_J : ℓ(u) <= ℓ(O^max)}; values above that
    length vanish. Levels are processed top-down; within a level every
    admissible (u, s) of a ∽_J-class must give the same value.
    """
    J = sys.subset(J)
    if J != O.J:
        raise ValueError(f"Report was computed for J={list(O.J)}, not {list(J)}")
    if not O.is_finite:
        raise NotFiniteError(f"Class of {list(O.seed.word)} under J={list(J)} is infinite")
    if not sys.is_irreducible(J):
        raise NotIrreducibleError(f"J={list(J)} has {len(sys.irreducible_components(J))} components")
    budget = resolve_cap(budget, settings.NODE_BUDGET)
    if search_cap is None:
        search_cap = sys.longest_element(J).length if sys.is_spherical(J) else settings.SEARCH_CAP

    rep = O.representative
    top = rep.length
    at_top = set(O.max_elements)
    region = sys.double_coset_ball(J, rep, top, budget)
    region_set = set(region)
    conjugators = [x for x in sys.parabolic_ball(J, search_cap, budget) if not x.is_identity]

    values: dict[Element, ParamPoly] = {}

    def f(u: Element) -> ParamPoly:
        if u.length > top:
            return ParamPoly.zero()
        if u not in region_set:
            raise InconsistentRecursionError(f"{list(u.word)} left the double coset")
        return values[u]

    for length in range(top, -1, -1):
        level = [u for u in region if u.length == length]
        for comp in _backsim_components(sys, level, conjugators):
            candidates = []
            for u in comp:
                for s in J:
                    sus = sys.conjugate(s, u)
                    if sus.length != u.length + 2:
                        continue
                    a, b = parameters(sys, s)
                    su = sys.left_multiply_generator(s, u)
                    value = b.monomial_inverse() * (f(sus) - a * f(su))
                    candidates.append((u, s, value))

            if any(u in at_top for u in comp):
                if candidates:
                    raise InconsistentRecursionError(
                        f"Maximal element {list(comp[0].word)} admits an ascent"
                    )
                value = ParamPoly.one()
            elif not candidates:
                # maximal in another class
                value = ParamPoly.zero()
            else:
                value = candidates[0][2]
                for u, s, other in candidates[1:]:
                    if other != value:
                        raise InconsistentRecursionError(
                            f"f^max disagrees at {list(u.word)} via s={s}: "
                            f"{other} != {value}"
                        )
            for u in comp:
                values[u] = value

    entries = tuple((u, values[u]) for u in region if values[u])
    logger.info(
        f"f^max table for class of {list(rep.word)} under J={list(J)}: "
        f"{len(region)} elements scanned, {len(entries)} nonzero"
    )
    return ClassPolyTable(
        J=J,
        class_rep=rep,
        orbit=tuple(O.orbit),
        entries=entries,
        variant="max",
    )

"""
Basis of the centralizer of a parabolic subalgebra H_J.

For each finite W_J-class O,

    z_O = Σ_w b_w⁻¹·f^max_{w,O}·T_{w⁻¹}

commutes with every T_s, s ∈ J. Membership is checked two ways: the
coefficient conditions along shift arrows, and exact commutators.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Optional

from coxhecke.class_poly import ClassPolyTable, class_poly_max
from coxhecke.config import settings, logger, resolve_cap
from coxhecke.conjugacy import PartialClassReport, decide_finite
from coxhecke.coxeter import CoxeterSystem, Element, GeneratorSet
from coxhecke.errors import InvariantViolationError, NotIrreducibleError
from coxhecke.hecke import (
    HeckeElement,
    b_of,
    commutator,
    parameters,
    t_basis,
)
from coxhecke.params import ParamPoly


@dataclass(frozen=True)
class CentralizerBasisElement:
    class_rep: Element
    orbit: tuple[Element, ...]
    element: HeckeElement
    table: ClassPolyTable

    def to_json(self, num_classes: int) -> dict:
        return {
            "class_rep": self.class_rep.to_json(),
            "orbit": [w.to_json() for w in self.orbit],
            "z": self.element.to_json(num_classes),
        }


@dataclass(frozen=True)
class Violation:
    condition: str
    w: Element
    s: int
    lhs: ParamPoly
    rhs: ParamPoly

    def __str__(self):
        return f"({self.condition}) at {list(self.w.word)}, s={self.s}: {self.lhs} != {self.rhs}"


@dataclass(frozen=True)
class BasisEnumeration:
    J: GeneratorSet
    length_cap: int
    elements: tuple[CentralizerBasisElement, ...]
    complete: bool
    note: str


def build_z(
    sys: CoxeterSystem,
    J: Iterable[int],
    O: PartialClassReport,
    table: Optional[ClassPolyTable] = None,
) -> CentralizerBasisElement:
    J = sys.subset(J)
    table = table or class_poly_max(sys, J, O)
    coeffs = {}
    for w, f in table.entries:
        coeffs[sys.inverse(w)] = b_of(sys, w).monomial_inverse() * f
    z = HeckeElement(coeffs)
    return CentralizerBasisElement(table.class_rep, tuple(O.orbit), z, table)


def leading_support(h: HeckeElement) -> tuple[Element, ...]:
    support = h.support()
    if not support:
        return ()
    top = max(w.length for w in support)
    return tuple(w for w in support if w.length == top)


# ── Verification ─────────────────────────────────────────

def check_membership_coeffs(
    sys: CoxeterSystem, J: Iterable[int], h: HeckeElement
) -> list[Violation]:
    """
    Coefficient test for h ∈ Z(H_J):
      (i)  x_w = x_{sws} when ℓ(sws) = ℓ(w);
      (ii) x_{sws} = b_s·x_w − a_s·x_{sw} when ℓ(sws) = ℓ(w) − 2.
    Every equation touching the support of h is checked.
    """
    J = sys.subset(J)
    x = h.coefficient
    to_check = set()
    for v in h.support():
        for s in J:
            to_check.add((v, s))
            to_check.add((sys.conjugate(s, v), s))
            to_check.add((sys.left_multiply_generator(s, v), s))

    violations = []
    for w, s in sorted(to_check):
        w2 = sys.conjugate(s, w)
        if w2 == w:
            continue
        if w2.length == w.length:
            if x(w) != x(w2):
                violations.append(Violation("i", w, s, x(w), x(w2)))
        elif w2.length == w.length - 2:
            a, b = parameters(sys, s)
            rhs = b * x(w) - a * x(sys.left_multiply_generator(s, w))
            if x(w2) != rhs:
                violations.append(Violation("ii", w, s, x(w2), rhs))
    return violations


def check_commutation(
    sys: CoxeterSystem, J: Iterable[int], h: HeckeElement
) -> Optional[int]:
    """First s ∈ J with T_s·h != h·T_s, or None."""
    for s in sys.subset(J):
        if commutator(sys, t_basis(sys, sys.generator(s)), h):
            return s
    return None


def verify(sys: CoxeterSystem, J: Iterable[int], h: HeckeElement) -> tuple[bool, bool]:
    coeffs_ok = not check_membership_coeffs(sys, J, h)
    commutes = check_commutation(sys, J, h) is None
    return coeffs_ok, commutes


# ── Enumeration ──────────────────────────────────────────

def finite_classes(
    sys: CoxeterSystem,
    J: Iterable[int],
    length_cap: int,
    budget: Optional[int] = None,
) -> list[PartialClassReport]:
    """Finite W_J-classes meeting the ball of radius length_cap, one report each."""
    J = sys.subset(J)
    covered: set[Element] = set()
    reports = []
    for w in sys.ball(length_cap, budget):
        if w in covered:
            continue
        report = decide_finite(sys, J, w, budget)
        if report.is_finite:
            covered.update(report.orbit)
            reports.append(report)
    return reports


def enumerate_basis(
    sys: CoxeterSystem,
    J: Iterable[int],
    length_cap: Optional[int] = None,
    threads: Optional[int] = None,
    budget: Optional[int] = None,
) -> BasisEnumeration:
    J = sys.subset(J)
    if not sys.is_irreducible(J):
        raise NotIrreducibleError(f"J={list(J)} is reducible")
    length_cap = resolve_cap(length_cap, settings.LENGTH_CAP)
    threads = resolve_cap(threads, settings.THREADS)

    reports = finite_classes(sys, J, length_cap, budget)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            elements = list(pool.map(lambda r: build_z(sys, J, r), reports))
    else:
        elements = [build_z(sys, J, r) for r in reports]

    seen: set[Element] = set()
    for z in elements:
        lead = set(leading_support(z.element))
        if lead & seen:
            raise InvariantViolationError(
                f"Leading terms of class {list(z.class_rep.word)} overlap another class"
            )
        seen |= lead

    complete = sys.is_spherical(sys.generators) and (
        length_cap >= sys.longest_element(sys.generators).length
    )
    note = (
        "all finite classes" if complete
        else f"classes complete up to length {length_cap}"
    )
    logger.info(f"Centralizer basis for J={list(J)}: {len(elements)} elements ({note})")
    return BasisEnumeration(J, length_cap, tuple(elements), complete, note)

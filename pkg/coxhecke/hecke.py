"""
Generic Hecke algebra H(W, S, (a, b)).

T_s·T_w = a_s·T_w + b_s·T_{sw} when s is a left descent of w, else T_{sw}.
Parameters are attached to conjugacy classes of generators.
"""

from typing import Any, Iterable, Mapping, Optional

from coxhecke.coxeter import CoxeterSystem, Element
from coxhecke.params import ParamPoly


class HeckeElement:
    """Immutable finite sum Σ x_w T_w with no zero coefficients."""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Optional[Mapping[Element, ParamPoly]] = None):
        clean = {}
        for w, x in (coeffs or {}).items():
            if not isinstance(x, ParamPoly):
                x = ParamPoly.constant(x)
            if x:
                clean[w] = x
        self._coeffs = dict(sorted(clean.items()))

    @classmethod
    def zero(cls) -> "HeckeElement":
        return cls()

    def items(self) -> list[tuple[Element, ParamPoly]]:
        return list(self._coeffs.items())

    def support(self) -> list[Element]:
        return list(self._coeffs)

    def coefficient(self, w: Element) -> ParamPoly:
        return self._coeffs.get(w, ParamPoly.zero())

    def __len__(self):
        return len(self._coeffs)

    def __bool__(self):
        return bool(self._coeffs)

    def __eq__(self, other):
        if not isinstance(other, HeckeElement):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self):
        return hash(tuple(self._coeffs.items()))

    def __add__(self, other: "HeckeElement") -> "HeckeElement":
        out = dict(self._coeffs)
        for w, x in other._coeffs.items():
            out[w] = out[w] + x if w in out else x
        return HeckeElement(out)

    def __neg__(self) -> "HeckeElement":
        return HeckeElement({w: -x for w, x in self._coeffs.items()})

    def __sub__(self, other: "HeckeElement") -> "HeckeElement":
        return self + (-other)

    def scale(self, c: ParamPoly | int) -> "HeckeElement":
        return HeckeElement({w: x * c for w, x in self._coeffs.items()})

    def __repr__(self) -> str:
        body = " + ".join(f"({x})T{list(w.word)}" for w, x in self._coeffs.items())
        return f"HeckeElement({body or '0'})"

    def to_json(self, num_classes: int) -> list[dict]:
        return [
            {"word": w.to_json(), "coeff": x.to_json(num_classes)}
            for w, x in self._coeffs.items()
        ]

    @classmethod
    def from_json(cls, sys: CoxeterSystem, data: Iterable[Mapping[str, Any]]) -> "HeckeElement":
        out: dict[Element, ParamPoly] = {}
        for term in data:
            w = sys.normalize(term["word"])
            x = ParamPoly.from_json(term["coeff"])
            out[w] = out[w] + x if w in out else x
        return cls(out)


def parameters(sys: CoxeterSystem, s: int) -> tuple[ParamPoly, ParamPoly]:
    c = sys.class_of(s)
    return ParamPoly.a(c), ParamPoly.b(c)


def t_basis(sys: CoxeterSystem, w: Element) -> HeckeElement:
    return HeckeElement({w: ParamPoly.one()})


def left_mul_gen(sys: CoxeterSystem, s: int, h: HeckeElement) -> HeckeElement:
    a, b = parameters(sys, s)
    out: dict[Element, ParamPoly] = {}

    def put(w, x):
        out[w] = out[w] + x if w in out else x

    for w, x in h.items():
        sw = sys.left_multiply_generator(s, w)
        if sw.length < w.length:
            put(w, a * x)
            put(sw, b * x)
        else:
            put(sw, x)
    return HeckeElement(out)


def right_mul_gen(sys: CoxeterSystem, h: HeckeElement, s: int) -> HeckeElement:
    a, b = parameters(sys, s)
    out: dict[Element, ParamPoly] = {}

    def put(w, x):
        out[w] = out[w] + x if w in out else x

    for w, x in h.items():
        ws = sys.right_multiply_generator(w, s)
        if ws.length < w.length:
            put(w, a * x)
            put(ws, b * x)
        else:
            put(ws, x)
    return HeckeElement(out)


def mul(sys: CoxeterSystem, g: HeckeElement, h: HeckeElement) -> HeckeElement:
    """g·h, applying T_w = T_{s1}···T_{sk} to h letter by letter from the right."""
    total = HeckeElement.zero()
    for w, x in g.items():
        acc = h
        for s in reversed(w.word):
            acc = left_mul_gen(sys, s, acc)
        total = total + acc.scale(x)
    return total


def commutator(sys: CoxeterSystem, g: HeckeElement, h: HeckeElement) -> HeckeElement:
    return mul(sys, g, h) - mul(sys, h, g)


def b_of(sys: CoxeterSystem, w: Element) -> ParamPoly:
    """b_w = b_{s1}···b_{sk} over a reduced word."""
    out = ParamPoly.one()
    for s in w.word:
        out = out * ParamPoly.b(sys.class_of(s))
    return out


def specialize(
    sys: CoxeterSystem,
    h: HeckeElement,
    assignment: Mapping[int, tuple[Any, Any]],
) -> dict[Element, Any]:
    """Coefficientwise evaluation; zero images are dropped."""
    missing = [c for c in range(sys.num_classes) if c not in assignment]
    if missing:
        raise ValueError(f"Specialization missing generator classes {missing}")
    out = {}
    for w, x in h.items():
        value = x.evaluate(assignment)
        if value != 0:
            out[w] = value
    return out


def group_algebra_mul(
    sys: CoxeterSystem, f: Mapping[Element, Any], g: Mapping[Element, Any]
) -> dict[Element, Any]:
    """Product in the group ring, for checking specialisations at a = 0, b = 1."""
    out: dict[Element, Any] = {}
    for u, x in f.items():
        for v, y in g.items():
            w = sys.multiply(u, v)
            out[w] = out.get(w, 0) + x * y
    return {w: c for w, c in sorted(out.items()) if c != 0}

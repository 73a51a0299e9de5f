"""
Exact elements of the parameter ring ℤ[a_c, b_c^{±1}].

One (a, b) pair per conjugacy class c of generators. A monomial is an
exponent vector (a0, b0, a1, b1, ...) with trailing zeros trimmed;
a-exponents are non-negative, b-exponents may be negative.
"""

from typing import Any, Mapping, Optional

import sympy

from coxhecke.errors import NonInvertibleBError

Exponents = tuple[int, ...]


def _trim(exps) -> Exponents:
    exps = list(exps)
    while exps and exps[-1] == 0:
        exps.pop()
    return tuple(exps)


def _add_exps(x: Exponents, y: Exponents) -> Exponents:
    n = max(len(x), len(y))
    return _trim(
        (x[i] if i < len(x) else 0) + (y[i] if i < len(y) else 0) for i in range(n)
    )


def _order_key(exps: Exponents):
    return (sum(exps), exps)


class ParamPoly:
    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Optional[Mapping[Exponents, int]] = None):
        clean: dict[Exponents, int] = {}
        for exps, coeff in (terms or {}).items():
            exps = _trim(int(e) for e in exps)
            if any(e < 0 for e in exps[0::2]):
                raise ValueError(f"Negative a-exponent in monomial {exps}")
            clean[exps] = clean.get(exps, 0) + int(coeff)
        self._terms = {e: c for e, c in sorted(clean.items(), key=lambda t: _order_key(t[0])) if c}
        self._hash = None

    # ── Constructors ─────────────────────────────────────

    @classmethod
    def zero(cls) -> "ParamPoly":
        return cls()

    @classmethod
    def one(cls) -> "ParamPoly":
        return cls({(): 1})

    @classmethod
    def constant(cls, c: int) -> "ParamPoly":
        return cls({(): c})

    @classmethod
    def a(cls, c: int, power: int = 1) -> "ParamPoly":
        exps = [0] * (2 * c + 2)
        exps[2 * c] = power
        return cls({tuple(exps): 1})

    @classmethod
    def b(cls, c: int, power: int = 1) -> "ParamPoly":
        exps = [0] * (2 * c + 2)
        exps[2 * c + 1] = power
        return cls({tuple(exps): 1})

    @classmethod
    def _coerce(cls, other: Any) -> Optional["ParamPoly"]:
        if isinstance(other, ParamPoly):
            return other
        if isinstance(other, int) and not isinstance(other, bool):
            return cls.constant(other)
        return None

    # ── Views ────────────────────────────────────────────

    @property
    def terms(self) -> list[tuple[Exponents, int]]:
        return list(self._terms.items())

    def coefficient(self, exps: Exponents) -> int:
        return self._terms.get(_trim(exps), 0)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    # ── Arithmetic ───────────────────────────────────────

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return ParamPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return ParamPoly({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out: dict[Exponents, int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = _add_exps(e1, e2)
                out[e] = out.get(e, 0) + c1 * c2
        return ParamPoly(out)

    __rmul__ = __mul__

    def monomial_inverse(self) -> "ParamPoly":
        """Inverse of a unit ±b-monomial."""
        if not self.is_monomial():
            raise NonInvertibleBError(f"{self} is not a monomial")
        (exps, coeff), = self._terms.items()
        if coeff not in (1, -1) or any(exps[0::2]):
            raise NonInvertibleBError(f"{self} is not a unit of the parameter ring")
        return ParamPoly({tuple(-e for e in exps): coeff})

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    # ── Evaluation ───────────────────────────────────────

    def evaluate(self, assignment: Mapping[int, tuple[Any, Any]]) -> Any:
        """Substitute (alpha, beta) per class. Integer beta must be ±1 where inverted."""
        total = 0
        for exps, coeff in self._terms.items():
            value = coeff
            for i, e in enumerate(exps):
                if e == 0:
                    continue
                c = i // 2
                if c not in assignment:
                    raise ValueError(f"Assignment has no value for class {c}")
                alpha, beta = assignment[c]
                if i % 2 == 0:
                    value = value * alpha ** e
                    continue
                if e < 0:
                    if beta == 0:
                        raise NonInvertibleBError(f"b{c} specialised to 0")
                    if isinstance(beta, int) and beta not in (1, -1):
                        raise NonInvertibleBError(
                            f"b{c} = {beta} is not a unit in the integers"
                        )
                    if isinstance(beta, int):
                        value = value * beta ** (-e)
                        continue
                value = value * beta ** e
            total = total + value
        return total

    def as_expr(self) -> sympy.Expr:
        expr = sympy.Integer(0)
        for exps, coeff in self._terms.items():
            term = sympy.Integer(coeff)
            for i, e in enumerate(exps):
                if e:
                    name = f"{'a' if i % 2 == 0 else 'b'}{i // 2}"
                    term *= sympy.Symbol(name) ** e
            expr += term
        return expr

    # ── Rendering ────────────────────────────────────────

    @staticmethod
    def _monomial_str(exps: Exponents) -> str:
        parts = []
        for i, e in enumerate(exps):
            if e == 0:
                continue
            name = f"{'a' if i % 2 == 0 else 'b'}{i // 2}"
            parts.append(name if e == 1 else f"{name}^{e}")
        return "*".join(parts)

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        out = []
        for k, (exps, coeff) in enumerate(self._terms.items()):
            mono = self._monomial_str(exps)
            mag = abs(coeff)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            if k == 0:
                out.append(f"-{body}" if coeff < 0 else body)
            else:
                out.append(f"{'-' if coeff < 0 else '+'} {body}")
        return " ".join(out)

    def __repr__(self) -> str:
        return f"ParamPoly({self})"

    def to_json(self, num_classes: int) -> list:
        width = 2 * num_classes
        return [
            [list(exps) + [0] * (width - len(exps)), coeff]
            for exps, coeff in self._terms.items()
        ]

    @classmethod
    def from_json(cls, data: list) -> "ParamPoly":
        return cls({tuple(exps): int(coeff) for exps, coeff in data})

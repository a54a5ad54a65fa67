"""Sparse-dict multivariate polynomials with coefficients in Q(sqrt3, i)."""

from __future__ import annotations

from fractions import Fraction

from .field import ZERO, FieldElement, field_eval


class MultiPoly:
    """Polynomial in an ordered tuple of named variables.

    ``terms`` maps exponent tuples (one entry per variable) to nonzero
    :class:`FieldElement` coefficients.  Binary operations between
    polynomials over different variable tuples first merge the variable
    lists (left operand order first).
    """

    __slots__ = ("variables", "terms")

    def __init__(self, variables, terms=None):
        self.variables = tuple(variables)
        n = len(self.variables)
        clean = {}
        for exps, coeff in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != n:
                raise ValueError(f"exponent vector {exps} does not match {n} variables")
            coeff = FieldElement.coerce(coeff)
            if coeff:
                clean[exps] = clean.get(exps, ZERO) + coeff
                if not clean[exps]:
                    del clean[exps]
        self.terms = clean

    # -- constructors --------------------------------------------------
    @classmethod
    def constant(cls, value, variables=()):
        return cls(variables, {(0,) * len(tuple(variables)): value})

    @classmethod
    def var(cls, name, variables=None):
        variables = tuple(variables) if variables is not None else (name,)
        exps = tuple(1 if v == name else 0 for v in variables)
        if name not in variables:
            raise ValueError(f"{name!r} not among {variables}")
        return cls(variables, {exps: 1})

    @classmethod
    def symbols(cls, names):
        names = tuple(names.split()) if isinstance(names, str) else tuple(names)
        return tuple(cls.var(n, names) for n in names)

    # -- variable bookkeeping ------------------------------------------
    def with_variables(self, variables) -> "MultiPoly":
        variables = tuple(variables)
        missing = [v for v in self.variables if v not in variables]
        if missing and any(
            exps[self.variables.index(v)] for exps in self.terms for v in missing
        ):
            raise ValueError(f"cannot drop variables {missing} that occur")
        idx = [self.variables.index(v) if v in self.variables else None for v in variables]
        new_terms = {}
        for exps, c in self.terms.items():
            new_terms[tuple(exps[i] if i is not None else 0 for i in idx)] = c
        out = MultiPoly.__new__(MultiPoly)
        out.variables = variables
        out.terms = new_terms
        return out

    def _align(self, other):
        if not isinstance(other, MultiPoly):
            other = MultiPoly.constant(FieldElement.coerce(other), self.variables)
            return self, other
        if other.variables == self.variables:
            return self, other
        merged = self.variables + tuple(v for v in other.variables if v not in self.variables)
        return self.with_variables(merged), other.with_variables(merged)

    # -- arithmetic ----------------------------------------------------
    def __add__(self, other):
        try:
            p, q = self._align(other)
        except TypeError:
            return NotImplemented
        terms = dict(p.terms)
        for e, c in q.terms.items():
            s = terms.get(e, ZERO) + c
            if s:
                terms[e] = s
            else:
                terms.pop(e, None)
        return _make(p.variables, terms)

    __radd__ = __add__

    def __neg__(self):
        return _make(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        try:
            p, q = self._align(other)
        except TypeError:
            return NotImplemented
        return p + (-q)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            try:
                c = FieldElement.coerce(other)
            except TypeError:
                return NotImplemented
            if not c:
                return _make(self.variables, {})
            return _make(self.variables, {e: v * c for e, v in self.terms.items()})
        p, q = self._align(other)
        terms = {}
        for e1, c1 in p.terms.items():
            for e2, c2 in q.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                s = terms.get(e, ZERO) + c1 * c2
                if s:
                    terms[e] = s
                else:
                    terms.pop(e, None)
        return _make(p.variables, terms)

    __rmul__ = __mul__

    def __truediv__(self, other):
        c = FieldElement.coerce(other)
        return self * c.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result = MultiPoly.constant(1, self.variables)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            try:
                other = MultiPoly.constant(FieldElement.coerce(other), self.variables)
            except TypeError:
                return NotImplemented
        p, q = self._align(other)
        return p.terms == q.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    # -- calculus and evaluation ---------------------------------------
    def diff(self, name: str) -> "MultiPoly":
        if name not in self.variables:
            return _make(self.variables, {})
        k = self.variables.index(name)
        terms = {}
        for e, c in self.terms.items():
            if e[k]:
                ne = e[:k] + (e[k] - 1,) + e[k + 1:]
                terms[ne] = c * e[k]
        return _make(self.variables, terms)

    def subs(self, mapping) -> "MultiPoly":
        """Substitute polynomials (or scalars) for variables."""
        result = MultiPoly((), {})
        for e, c in self.terms.items():
            term = MultiPoly.constant(c, ())
            for v, k in zip(self.variables, e):
                if not k:
                    continue
                if v in mapping:
                    val = mapping[v]
                    if not isinstance(val, MultiPoly):
                        val = MultiPoly.constant(val, ())
                    term = term * val ** k
                else:
                    term = term * MultiPoly.var(v) ** k
            result = result + term
        keep = tuple(v for v in self.variables if v not in mapping)
        extra = tuple(v for v in result.variables if v not in keep)
        return result.with_variables(keep + extra)

    def evaluate(self, values) -> complex:
        """Numeric value with ``values`` mapping every occurring variable."""
        total = 0j
        for e, c in self.terms.items():
            term = field_eval(c)
            for v, k in zip(self.variables, e):
                if k:
                    term *= complex(values[v]) ** k
            total += term
        return total

    def degree(self, name=None) -> int:
        if not self.terms:
            return -1
        if name is None:
            return max(sum(e) for e in self.terms)
        if name not in self.variables:
            return 0
        k = self.variables.index(name)
        return max(e[k] for e in self.terms)

    def coeff(self, name: str, power: int) -> "MultiPoly":
        """Coefficient of ``name**power`` as a polynomial in the other variables."""
        if name not in self.variables:
            return self if power == 0 else _make(self.variables, {})
        k = self.variables.index(name)
        rest = self.variables[:k] + self.variables[k + 1:]
        terms = {}
        for e, c in self.terms.items():
            if e[k] == power:
                terms[e[:k] + e[k + 1:]] = c
        return _make(rest, terms)

    def constant_value(self) -> FieldElement:
        """The value of a constant polynomial."""
        if any(any(e) for e in self.terms):
            raise ValueError("polynomial is not constant")
        return self.terms.get((0,) * len(self.variables), ZERO)

    def is_constant(self) -> bool:
        return not any(any(e) for e in self.terms)

    # -- display ---------------------------------------------------------
    def __repr__(self):
        return f"MultiPoly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        pieces = []
        for e in sorted(self.terms, key=lambda x: (-sum(x), tuple(-i for i in x))):
            c = self.terms[e]
            mono = "*".join(
                v if k == 1 else f"{v}^{k}" for v, k in zip(self.variables, e) if k
            )
            cs = str(c)
            if not mono:
                pieces.append(cs)
            elif c == 1:
                pieces.append(mono)
            elif c == -1:
                pieces.append("-" + mono)
            elif c.is_rational() or " " not in cs:
                pieces.append(f"{cs}*{mono}")
            else:
                pieces.append(f"({cs})*{mono}")
        out = pieces[0]
        for p in pieces[1:]:
            out += (" - " + p[1:]) if p.startswith("-") else (" + " + p)
        return out


def _make(variables, terms):
    out = MultiPoly.__new__(MultiPoly)
    out.variables = variables
    out.terms = terms
    return out


def as_poly(x, variables=()) -> MultiPoly:
    if isinstance(x, MultiPoly):
        return x
    return MultiPoly.constant(FieldElement.coerce(x), variables)


def rational_const(num, den=1) -> FieldElement:
    return FieldElement(Fraction(num, den))

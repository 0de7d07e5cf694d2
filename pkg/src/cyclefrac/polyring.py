"""Sparse multivariate polynomials with arbitrary-precision integer coefficients.

Variables are :class:`VarId` values: a short family name plus zero to two
non-negative integer subscripts (``a[0,1]``, ``w[3]``, ``x1``, ``lambda``).
A :class:`Monomial` is a canonically sorted tuple of ``(VarId, exponent)``
pairs and a :class:`Polynomial` maps monomials to nonzero integers.

Everything here is immutable after construction and safe to share.
"""
from __future__ import annotations

import re
from collections.abc import Callable, Iterable, Mapping
from typing import NamedTuple, Union

__all__ = [
    "DEFAULT_PRIME",
    "Monomial",
    "Polynomial",
    "UnmappedVariableError",
    "VarId",
    "coefficient_of",
    "const",
    "eval_mod",
    "parse_polynomial",
    "parse_var",
    "qbracket",
    "substitute",
    "var",
]

#: 2**61 - 1, a Mersenne prime used for randomized modular checks.
DEFAULT_PRIME = (1 << 61) - 1


class UnmappedVariableError(KeyError):
    """A substitution or evaluation met a variable it has no value for."""

    def __init__(self, v: VarId):
        super().__init__(v)
        self.var = v

    def __str__(self) -> str:
        return f"no value for variable {self.var}"


class VarId(NamedTuple):
    """One indeterminate, ordered lexicographically by (family, subscripts)."""

    family: str
    subscripts: tuple[int, ...] = ()

    def __str__(self) -> str:
        if not self.subscripts:
            return self.family
        return f"{self.family}[{','.join(map(str, self.subscripts))}]"


_VAR_RE = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)(?:\[\s*(\d+(?:\s*,\s*\d+)*)\s*\])?")


def parse_var(text: str) -> VarId:
    m = _VAR_RE.fullmatch(text.strip())
    if not m:
        raise ValueError(f"malformed variable name: {text!r}")
    subs = tuple(int(s) for s in m.group(2).split(",")) if m.group(2) else ()
    if len(subs) > 2:
        raise ValueError(f"at most two subscripts allowed: {text!r}")
    return VarId(m.group(1), subs)


class Monomial(tuple):
    """Canonical power product: sorted ``(VarId, exponent)`` pairs, exponents > 0."""

    __slots__ = ()

    def __new__(cls, pairs: Iterable[tuple[VarId, int]] = ()):
        acc: dict[VarId, int] = {}
        for v, e in pairs:
            if e < 0:
                raise ValueError(f"negative exponent for {v}")
            acc[v] = acc.get(v, 0) + e
        return tuple.__new__(cls, sorted((v, e) for v, e in acc.items() if e))

    @classmethod
    def _trusted(cls, pairs) -> Monomial:
        return tuple.__new__(cls, pairs)

    def __mul__(self, other: Monomial) -> Monomial:  # type: ignore[override]
        if not self:
            return other
        if not other:
            return self
        out = []
        i = j = 0
        a, b = self, other
        while i < len(a) and j < len(b):
            va, vb = a[i][0], b[j][0]
            if va == vb:
                out.append((va, a[i][1] + b[j][1]))
                i += 1
                j += 1
            elif va < vb:
                out.append(a[i])
                i += 1
            else:
                out.append(b[j])
                j += 1
        out.extend(a[i:])
        out.extend(b[j:])
        return Monomial._trusted(tuple(out))

    def __pow__(self, k: int) -> Monomial:
        if k < 0:
            raise ValueError("negative power of a monomial")
        if k == 0:
            return UNIT
        return Monomial._trusted(tuple((v, e * k) for v, e in self))

    @property
    def degree(self) -> int:
        return sum(e for _, e in self)

    def exponent(self, v: VarId) -> int:
        for w, e in self:
            if w == v:
                return e
        return 0

    def variables(self) -> tuple[VarId, ...]:
        return tuple(v for v, _ in self)

    def sort_key(self):
        return (self.degree, tuple(self))

    def __str__(self) -> str:
        if not self:
            return "1"
        return "*".join(str(v) if e == 1 else f"{v}^{e}" for v, e in self)

    def __repr__(self) -> str:
        return f"Monomial({str(self)!r})"


UNIT = Monomial._trusted(())

Scalar = Union[int, "Polynomial"]


class Polynomial:
    """Immutable sparse polynomial over the integers.

    ``Polynomial({Monomial(...): 3})`` or, more conveniently, build from
    :func:`var` and :func:`const` with ``+``, ``-``, ``*`` and ``**``.
    Plain ``int`` operands are coerced, so ``2 * var("x") - 1`` works.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, int] | None = None):
        if terms:
            self._terms = {m: c for m, c in terms.items() if c}
        else:
            self._terms = {}
        self._hash = None

    @classmethod
    def _wrap(cls, terms: dict[Monomial, int]) -> Polynomial:
        p = cls.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    @staticmethod
    def coerce(x: Scalar) -> Polynomial:
        if isinstance(x, Polynomial):
            return x
        if isinstance(x, int):
            return Polynomial._wrap({UNIT: x} if x else {})
        return NotImplemented  # type: ignore[return-value]

    @property
    def terms(self) -> Mapping[Monomial, int]:
        return self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and UNIT in self._terms)

    def constant_term(self) -> int:
        return self._terms.get(UNIT, 0)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = Polynomial.coerce(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __add__(self, other: Scalar) -> Polynomial:
        other = Polynomial.coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if len(other._terms) > len(self._terms):
            big, small = other._terms, self._terms
        else:
            big, small = self._terms, other._terms
        out = dict(big)
        for m, c in small.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Polynomial._wrap(out)

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        return Polynomial._wrap({m: -c for m, c in self._terms.items()})

    def __sub__(self, other: Scalar) -> Polynomial:
        other = Polynomial.coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Scalar) -> Polynomial:
        return (-self) + other

    def __mul__(self, other: Scalar) -> Polynomial:
        if isinstance(other, int):
            if not other:
                return ZERO
            return Polynomial._wrap({m: c * other for m, c in self._terms.items()})
        if not isinstance(other, Polynomial):
            return NotImplemented
        a, b = self._terms, other._terms
        if len(a) < len(b):
            a, b = b, a
        out: dict[Monomial, int] = {}
        get = out.get
        for mb, cb in b.items():
            for ma, ca in a.items():
                m = ma * mb
                out[m] = get(m, 0) + ca * cb
        return Polynomial._wrap({m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> Polynomial:
        if k < 0:
            raise ValueError("negative power of a polynomial")
        if len(self._terms) == 1:
            ((m, c),) = self._terms.items()
            return Polynomial._wrap({m**k: c**k})
        result, base = ONE, self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def variables(self) -> frozenset[VarId]:
        return frozenset(v for m in self._terms for v, _ in m)

    def degree(self) -> int:
        return max((m.degree for m in self._terms), default=-1)

    def sorted_terms(self) -> list[tuple[Monomial, int]]:
        return sorted(self._terms.items(), key=lambda mc: mc[0].sort_key())

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for k, (m, c) in enumerate(self.sorted_terms()):
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if not m:
                body = str(mag)
            elif mag == 1:
                body = str(m)
            else:
                body = f"{mag}*{m}"
            if k == 0:
                parts.append(body if sign == "+" else "-" + body)
            else:
                parts.append(f" {sign} {body}")
        return "".join(parts)

    def __repr__(self) -> str:
        return f"Polynomial({str(self)!r})"

    # convenience wrappers around the module-level operations
    def substitute(self, mapping, *, keep_unmapped: bool = False) -> Polynomial:
        return substitute(self, mapping, keep_unmapped=keep_unmapped)

    def eval_mod(self, assignment, prime: int = DEFAULT_PRIME) -> int:
        return eval_mod(self, assignment, prime)

    def coefficient(self, m: Monomial) -> int:
        return self._terms.get(m, 0)


ZERO = Polynomial._wrap({})
ONE = Polynomial._wrap({UNIT: 1})


def const(c: int) -> Polynomial:
    return Polynomial.coerce(int(c))


def var(family: str | VarId, *subscripts: int) -> Polynomial:
    """The polynomial consisting of a single variable."""
    v = family if isinstance(family, VarId) else VarId(family, tuple(subscripts))
    return Polynomial._wrap({Monomial._trusted(((v, 1),)): 1})


def coefficient_of(p: Polynomial, m: Monomial) -> int:
    return Polynomial.coerce(p).coefficient(m)


def _lookup(mapping, v: VarId):
    if callable(mapping) and not isinstance(mapping, Mapping):
        return mapping(v)
    return mapping[v]


def substitute(
    p: Polynomial,
    mapping: Mapping[VarId, Scalar] | Callable[[VarId], Scalar],
    *,
    keep_unmapped: bool = False,
) -> Polynomial:
    """Ring homomorphism sending each variable to ``mapping[v]``.

    ``mapping`` may be a dict or a callable; a callable may raise ``KeyError``
    for variables it does not handle. Unmapped variables raise
    :class:`UnmappedVariableError` unless ``keep_unmapped`` is set, in which
    case they are left in place.
    """
    p = Polynomial.coerce(p)
    images: dict[VarId, Polynomial] = {}
    powers: dict[tuple[VarId, int], Polynomial] = {}

    def image(v: VarId) -> Polynomial:
        if v not in images:
            try:
                images[v] = Polynomial.coerce(_lookup(mapping, v))
            except KeyError:
                if not keep_unmapped:
                    raise UnmappedVariableError(v) from None
                images[v] = var(v)
        return images[v]

    def power(v: VarId, e: int) -> Polynomial:
        key = (v, e)
        if key not in powers:
            powers[key] = image(v) ** e
        return powers[key]

    total = ZERO
    acc: dict[Monomial, int] = {}
    for m, c in p.terms.items():
        term = Polynomial._wrap({UNIT: c})
        for v, e in m:
            term = term * power(v, e)
            if not term:
                break
        if len(term) == 1:
            ((mm, cc),) = term.terms.items()
            acc[mm] = acc.get(mm, 0) + cc
        else:
            total = total + term
    return total + Polynomial({m: c for m, c in acc.items() if c})


def eval_mod(
    p: Polynomial,
    assignment: Mapping[VarId, int] | Callable[[VarId], int],
    prime: int = DEFAULT_PRIME,
) -> int:
    """Value of ``p`` in Z/prime under ``assignment``, as an int in [0, prime)."""
    p = Polynomial.coerce(p)
    values: dict[VarId, int] = {}
    total = 0
    for m, c in p.terms.items():
        t = c % prime
        for v, e in m:
            if v not in values:
                try:
                    values[v] = int(_lookup(assignment, v)) % prime
                except KeyError:
                    raise UnmappedVariableError(v) from None
            t = t * pow(values[v], e, prime) % prime
        total += t
    return total % prime


def qbracket(n: int, p: Scalar, q: Scalar) -> Polynomial:
    """The homogeneous sum ``[n]_{p,q} = sum_{i<n} p^i q^(n-1-i)``."""
    if n < 0:
        raise ValueError("q-bracket index must be non-negative")
    p, q = Polynomial.coerce(p), Polynomial.coerce(q)
    total = ZERO
    for i in range(n):
        total = total + p**i * q ** (n - 1 - i)
    return total


_TERM_RE = re.compile(r"\s*([+-])?\s*([^+-]+)")


def parse_polynomial(text: str) -> Polynomial:
    """Inverse of ``str(Polynomial)`` for the canonical text form.

    Accepts ``"3*a[0,1]*b[1,0] - 2*x1^2 + 1"``; bracketed subscripts may
    contain commas but no signs.
    """
    s = text.strip()
    if s == "0":
        return ZERO
    total = ZERO
    pos = 0
    first = True
    while pos < len(s):
        m = _TERM_RE.match(s, pos)
        if not m or (not first and not m.group(1)):
            raise ValueError(f"malformed polynomial text at {s[pos:]!r}")
        first = False
        sign = -1 if m.group(1) == "-" else 1
        coef = sign
        pairs = []
        for factor in m.group(2).strip().split("*"):
            factor = factor.strip()
            if not factor:
                raise ValueError(f"empty factor in {text!r}")
            if factor.isdigit():
                coef *= int(factor)
                continue
            base, _, exp = factor.partition("^")
            pairs.append((parse_var(base), int(exp) if exp else 1))
        total = total + Polynomial({Monomial(pairs): coef})
        pos = m.end()
    return total

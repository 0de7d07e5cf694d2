"""Truncated power series in t and expansion of S-, T- and J-type continued fractions.

Series coefficients may be :class:`~cyclefrac.polyring.Polynomial` values or
plain ints; when ``modulus`` is set the coefficients are ints reduced mod it.
Continued fractions are always written with the minus signs of the
canonical forms

    S:  1 / (1 - a1 t / (1 - a2 t / ...))
    T:  1 / (1 - d1 t - a1 t / (1 - d2 t - a2 t / ...))
    J:  1 / (1 - g0 t - b1 t^2 / (1 - g1 t - b2 t^2 / ...))

so a display with "1 + e0 t" corresponds to a generator value ``-e0``.
"""
from __future__ import annotations

from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass, field
from typing import Any

__all__ = [
    "FractionSpec",
    "GeneratorDomainError",
    "TruncatedSeries",
    "contract_even",
    "expand",
    "series_add",
    "series_mul",
    "series_reciprocal",
]


class GeneratorDomainError(LookupError):
    """A continued-fraction generator was asked for a level it does not define."""


def _is_zero(c) -> bool:
    return c == 0


@dataclass(frozen=True)
class TruncatedSeries:
    """c_0 + c_1 t + ... + c_N t^N, with everything beyond t^N discarded."""

    coeffs: tuple[Any, ...]
    modulus: int | None = None

    def __post_init__(self):
        coeffs = tuple(self.coeffs)
        if not coeffs:
            raise ValueError("a truncated series needs at least the t^0 coefficient")
        if self.modulus is not None:
            coeffs = tuple(int(c) % self.modulus for c in coeffs)
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def constant(cls, c, order: int, modulus: int | None = None) -> TruncatedSeries:
        return cls((c,) + (0,) * order, modulus)

    @classmethod
    def one(cls, order: int, modulus: int | None = None) -> TruncatedSeries:
        return cls.constant(1, order, modulus)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, k: int):
        return self.coeffs[k]

    def __len__(self) -> int:
        return len(self.coeffs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (
            self.modulus == other.modulus
            and len(self.coeffs) == len(other.coeffs)
            and all(a == b for a, b in zip(self.coeffs, other.coeffs))
        )

    def __hash__(self) -> int:
        return hash((self.coeffs, self.modulus))

    def _check(self, other: TruncatedSeries) -> None:
        if self.order != other.order:
            raise ValueError(f"order mismatch: {self.order} vs {other.order}")
        if self.modulus != other.modulus:
            raise ValueError("modulus mismatch")

    def truncate(self, order: int) -> TruncatedSeries:
        if order > self.order:
            raise ValueError(f"cannot extend a series of order {self.order} to {order}")
        return TruncatedSeries(self.coeffs[: order + 1], self.modulus)

    def map(self, fn: Callable[[Any], Any], modulus: int | None = None) -> TruncatedSeries:
        return TruncatedSeries(tuple(fn(c) for c in self.coeffs), modulus)

    def __add__(self, other: TruncatedSeries) -> TruncatedSeries:
        return series_add(self, other)

    def __sub__(self, other: TruncatedSeries) -> TruncatedSeries:
        return series_add(self, -other)

    def __neg__(self) -> TruncatedSeries:
        return TruncatedSeries(tuple(-c for c in self.coeffs), self.modulus)

    def __mul__(self, other: TruncatedSeries) -> TruncatedSeries:
        return series_mul(self, other)

    def scale(self, c) -> TruncatedSeries:
        return TruncatedSeries(tuple(c * x for x in self.coeffs), self.modulus)

    def shift(self, k: int = 1) -> TruncatedSeries:
        """Multiply by t^k, keeping the order."""
        n = len(self.coeffs)
        return TruncatedSeries((0,) * min(k, n) + self.coeffs[: max(n - k, 0)], self.modulus)

    def reciprocal(self) -> TruncatedSeries:
        return series_reciprocal(self)

    def to_text(self) -> str:
        return "; ".join(str(c) for c in self.coeffs)

    def __str__(self) -> str:
        return self.to_text()


def series_add(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    a._check(b)
    return TruncatedSeries(tuple(x + y for x, y in zip(a.coeffs, b.coeffs)), a.modulus)


def series_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    a._check(b)
    n = len(a.coeffs)
    out = []
    for k in range(n):
        acc = 0
        for i in range(k + 1):
            x, y = a.coeffs[i], b.coeffs[k - i]
            if _is_zero(x) or _is_zero(y):
                continue
            acc = acc + x * y
        out.append(acc)
    return TruncatedSeries(tuple(out), a.modulus)


def series_reciprocal(a: TruncatedSeries) -> TruncatedSeries:
    """1/a for a series with constant term exactly 1."""
    if a.coeffs[0] != 1:
        raise ValueError(f"reciprocal needs constant term 1, got {a.coeffs[0]}")
    n = len(a.coeffs)
    inv = [1]
    for k in range(1, n):
        acc = 0
        for i in range(1, k + 1):
            x = a.coeffs[i]
            if _is_zero(x) or _is_zero(inv[k - i]):
                continue
            acc = acc + x * inv[k - i]
        inv.append(-acc)
    return TruncatedSeries(tuple(inv), a.modulus)


Generator = Callable[[int], Any]


def _as_generator(g, first_level: int, name: str) -> Generator | None:
    if g is None:
        return None
    if callable(g):
        return g
    if isinstance(g, Mapping):
        table = dict(g)
    elif isinstance(g, Sequence):
        table = {first_level + k: v for k, v in enumerate(g)}
    else:
        raise TypeError(f"generator {name} must be callable, mapping or sequence")

    def lookup(level: int):
        try:
            return table[level]
        except KeyError:
            raise GeneratorDomainError(f"{name} is undefined at level {level}") from None

    return lookup


@dataclass(frozen=True)
class FractionSpec:
    """A continued fraction given by level-indexed coefficient generators.

    S uses ``alpha`` (levels >= 1); T uses ``alpha`` and ``delta`` (>= 1);
    J uses ``gamma`` (>= 0) and ``beta`` (>= 1).  Generators are callables
    of the level; sequences are accepted and read from the first level on.
    """

    kind: str
    alpha: Any = None
    delta: Any = None
    gamma: Any = None
    beta: Any = None
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if self.kind not in ("S", "T", "J"):
            raise ValueError(f"unknown continued fraction kind {self.kind!r}")
        needed = {"S": ("alpha",), "T": ("alpha", "delta"), "J": ("gamma", "beta")}[self.kind]
        for attr in ("alpha", "delta", "gamma", "beta"):
            g = getattr(self, attr)
            if attr in needed and g is None:
                raise ValueError(f"{self.kind}-fraction needs a {attr} generator")
            if attr not in needed and g is not None:
                raise ValueError(f"{self.kind}-fraction takes no {attr} generator")
            first = 0 if attr == "gamma" else 1
            object.__setattr__(self, attr, _as_generator(g, first, attr))

    def map(self, fn: Callable[[Any], Any]) -> FractionSpec:
        """Apply ``fn`` to every generator value (e.g. a specialization)."""

        def wrap(g):
            return None if g is None else (lambda k: fn(g(k)))

        return FractionSpec(
            self.kind, wrap(self.alpha), wrap(self.delta), wrap(self.gamma),
            wrap(self.beta), name=self.name,
        )


def _call(g: Generator, level: int, name: str):
    try:
        return g(level)
    except GeneratorDomainError:
        raise
    except (IndexError, KeyError) as exc:
        raise GeneratorDomainError(f"{name} is undefined at level {level}") from exc


def expand(spec: FractionSpec, order: int, *, depth: int | None = None,
           modulus: int | None = None) -> TruncatedSeries:
    """Power series of ``spec`` through t^order, evaluated bottom-up.

    ``depth`` is the number of levels kept (default ``order + 1``); the tail
    below the deepest level is the constant 1.  Each level is only carried
    to the precision that can still reach t^order, so generators are
    consulted only where they matter.
    """
    if order < 0:
        raise ValueError("order must be non-negative")
    depth = order + 1 if depth is None else depth
    if spec.kind == "J":
        return _expand_j(spec, order, depth, modulus)
    return _expand_st(spec, order, depth, modulus)


def _pad(s: TruncatedSeries, order: int) -> TruncatedSeries:
    return TruncatedSeries(s.coeffs + (0,) * (order - s.order), s.modulus)


def _expand_st(spec: FractionSpec, order: int, depth: int, modulus) -> TruncatedSeries:
    # level k (1-based) is needed to precision order - k + 1
    tail = None
    for k in range(depth, 0, -1):
        prec = order - k + 1
        if prec < 0:
            continue
        denom = [1] + [0] * prec
        if prec >= 1:
            a = _call(spec.alpha, k, "alpha")
            inner = tail.coeffs if tail is not None else (1,)
            for i in range(min(len(inner), prec)):
                if not _is_zero(inner[i]):
                    denom[i + 1] = denom[i + 1] - a * inner[i]
            if spec.kind == "T":
                d = _call(spec.delta, k, "delta")
                denom[1] = denom[1] - d
        tail = series_reciprocal(TruncatedSeries(tuple(denom), modulus))
    if tail is None:
        return TruncatedSeries.one(order, modulus)
    return _pad(tail, order)


def _expand_j(spec: FractionSpec, order: int, depth: int, modulus) -> TruncatedSeries:
    # level k (0-based) is needed to precision order - 2k
    tail = None
    for k in range(depth - 1, -1, -1):
        prec = order - 2 * k
        if prec < 0:
            continue
        denom = [1] + [0] * prec
        if prec >= 1:
            denom[1] = denom[1] - _call(spec.gamma, k, "gamma")
        if prec >= 2 and k + 1 < depth:
            b = _call(spec.beta, k + 1, "beta")
            inner = tail.coeffs if tail is not None else (1,)
            for i in range(min(len(inner), prec - 1)):
                if not _is_zero(inner[i]):
                    denom[i + 2] = denom[i + 2] - b * inner[i]
        elif prec >= 2:
            # deepest kept level: the tail below it is the constant 1
            denom[2] = denom[2] - _call(spec.beta, k + 1, "beta")
        tail = series_reciprocal(TruncatedSeries(tuple(denom), modulus))
    if tail is None:
        return TruncatedSeries.one(order, modulus)
    return _pad(tail, order)


def contract_even(tspec: FractionSpec) -> FractionSpec:
    """J-fraction equal to a T-fraction whose delta vanishes from level 2 on.

    gamma_0 = delta_1 + alpha_1, gamma_n = alpha_2n + alpha_2n+1,
    beta_n = alpha_2n-1 * alpha_2n.  The delta condition is checked lazily
    for every level the resulting generators touch.
    """
    if tspec.kind != "T":
        raise ValueError("even contraction applies to T-fractions")
    alpha, delta = tspec.alpha, tspec.delta

    def require_zero_delta(*levels: int) -> None:
        for k in levels:
            if k >= 2 and not _is_zero(delta(k)):
                raise ValueError(f"even contraction needs delta_{k} = 0")

    def gamma(n: int):
        if n == 0:
            require_zero_delta(2)
            return delta(1) + alpha(1)
        require_zero_delta(2 * n, 2 * n + 1)
        return alpha(2 * n) + alpha(2 * n + 1)

    def beta(n: int):
        require_zero_delta(2 * n - 1, 2 * n)
        return alpha(2 * n - 1) * alpha(2 * n)

    return FractionSpec("J", gamma=gamma, beta=beta, name=tspec.name + "~even")

"""Permutations, D-permutations and cycle-alternating permutations, and their
weighted generating polynomials.

Two enumeration paths share one membership rule:

* :func:`enumerate_family` is a backtracking generator of
  :class:`~cyclefrac.permstat.Permutation` values in lexicographic order;
* :func:`family_array` builds the same members breadth-first as a numpy
  array, which is what the generating-polynomial code consumes.

Every weight used here is a product over indices of a factor that depends
only on the index's cycle class, record class, position parity and its
crossing/nesting pair, times ``lambda^cyc``.  Each index is therefore
packed into one small integer code; a family collapses to its distinct
(sorted code row, cyc) pairs with multiplicities, and every scheme is
evaluated on that reduced table.
"""
from __future__ import annotations

import functools
import itertools
import os
import re
from collections.abc import Callable, Iterator, Mapping
from dataclasses import dataclass, field

import numpy as np

from . import permstat
from .cfkit import TruncatedSeries
from .permstat import CycleClass, IndexRefined, Permutation, RecordClass
from .polyring import (
    DEFAULT_PRIME,
    ONE,
    UNIT,
    Monomial,
    Polynomial,
    VarId,
    eval_mod,
    substitute,
    var,
)

__all__ = [
    "CapExceededError",
    "DEFAULT_CAPS",
    "Family",
    "LAMBDA",
    "SCHEMES",
    "SPECIALIZATIONS",
    "WeightScheme",
    "all_ones_except_lambda",
    "enumerate_family",
    "family_array",
    "family_count",
    "generating_polynomial",
    "generating_value_mod",
    "series_of_family",
    "series_mod",
    "specialize",
    "weight",
]

KINDS = ("perm", "dperm", "cyclealt")
DEFAULT_CAPS = {"perm": 9, "dperm": 12, "cyclealt": 12}
CAP_ENV = "CYCLEFRAC_MAX_N"

LAMBDA = VarId("lambda")


class CapExceededError(ValueError):
    """A family size is above the configured desk-scale cap."""


def size_cap(kind: str, max_n: int | None = None) -> int:
    """Largest permutation length allowed for ``kind``.

    An explicit ``max_n`` wins, then the ``CYCLEFRAC_MAX_N`` environment
    variable, then the built-in default.
    """
    if max_n is not None:
        return max_n
    env = os.environ.get(CAP_ENV)
    if env:
        try:
            return int(env)
        except ValueError:
            raise ValueError(f"{CAP_ENV} must be an integer, got {env!r}") from None
    return DEFAULT_CAPS[kind]


_FAMILY_RE = re.compile(r"\s*(perm|dperm|cyclealt)\s*\(\s*(\d+)\s*\)\s*")


@dataclass(frozen=True)
class Family:
    """``perm(n)``, ``dperm(2n)`` or ``cyclealt(2n)``; ``size`` is the length."""

    kind: str
    size: int

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown family {self.kind!r}; expected one of {', '.join(KINDS)}")
        if self.size < 0:
            raise ValueError("family size must be non-negative")
        if self.kind != "perm" and self.size % 2:
            raise ValueError(f"{self.kind} sizes are even, got {self.size}")

    @classmethod
    def parse(cls, text: str) -> Family:
        m = _FAMILY_RE.fullmatch(text)
        if not m:
            raise ValueError(f"malformed family tag {text!r}; expected e.g. dperm(6)")
        return cls(m.group(1), int(m.group(2)))

    @classmethod
    def at_order(cls, kind: str, n: int) -> Family:
        """The family whose polynomial is the t^n coefficient of its series."""
        return cls(kind, n if kind == "perm" else 2 * n)

    def check_cap(self, max_n: int | None = None) -> None:
        cap = size_cap(self.kind, max_n)
        if self.size > cap:
            raise CapExceededError(
                f"{self} exceeds the size cap {cap}; raise it with --max-n or {CAP_ENV}"
            )

    def contains(self, p: Permutation) -> bool:
        if p.n != self.size:
            return False
        if self.kind == "dperm":
            return permstat.is_dperm(p)
        if self.kind == "cyclealt":
            return permstat.is_cycle_alternating(p)
        return True

    def __str__(self) -> str:
        return f"{self.kind}({self.size})"


# Membership is decided position by position.  For cycle-alternating
# permutations, whether value i was already placed tells whether
# sigma^-1(i) < i, and then sigma(i) must fall on the same side so that i
# is a peak or a valley.
def _allowed(kind: str, i: int, v: int, i_used: bool) -> bool:
    if kind == "dperm":
        return v >= i if i % 2 else v <= i
    if kind == "cyclealt":
        return v < i if i_used else v > i
    return True


def enumerate_family(family: Family, max_n: int | None = None) -> Iterator[Permutation]:
    """Yield every member exactly once, in lexicographic order."""
    family.check_cap(max_n)
    n, kind = family.size, family.kind
    if kind == "perm":
        for w in itertools.permutations(range(1, n + 1)):
            yield Permutation(w)
        return
    word: list[int] = []
    used = [False] * (n + 2)

    def extend(i: int) -> Iterator[Permutation]:
        if i > n:
            yield Permutation(tuple(word))
            return
        for v in range(1, n + 1):
            if used[v] or not _allowed(kind, i, v, used[i]):
                continue
            used[v] = True
            word.append(v)
            yield from extend(i + 1)
            word.pop()
            used[v] = False

    yield from extend(1)


@functools.lru_cache(maxsize=8)
def _family_array(kind: str, n: int) -> np.ndarray:
    rows = np.zeros((1, 0), dtype=np.int8)
    used = np.zeros((1, n + 1), dtype=bool)
    for i in range(1, n + 1):
        new_rows, new_used = [], []
        for v in range(1, n + 1):
            ok = ~used[:, v]
            if kind == "dperm":
                if not _allowed(kind, i, v, False):
                    continue
            elif kind == "cyclealt":
                if v == i:
                    continue
                ok &= used[:, i] if v < i else ~used[:, i]
            idx = np.nonzero(ok)[0]
            if idx.size == 0:
                continue
            r = np.empty((idx.size, i), dtype=np.int8)
            r[:, :-1] = rows[idx]
            r[:, -1] = v
            u = used[idx]
            u[:, v] = True
            new_rows.append(r)
            new_used.append(u)
        if not new_rows:
            return np.zeros((0, n), dtype=np.int8)
        rows = np.concatenate(new_rows)
        used = np.concatenate(new_used)
    order = np.lexsort(rows.T[::-1]) if n else np.arange(len(rows))
    rows = rows[order]
    rows.setflags(write=False)
    return rows


def family_array(family: Family, max_n: int | None = None) -> np.ndarray:
    """All members as a read-only ``(count, size)`` int8 array, rows sorted."""
    family.check_cap(max_n)
    if family.size > 127:
        raise ValueError("family_array stores values as int8")
    return _family_array(family.kind, family.size)


def family_count(family: Family, max_n: int | None = None) -> int:
    return int(family_array(family, max_n).shape[0])


# ---------------------------------------------------------------------------
# Index codes

_CCLASSES = list(CycleClass)
_RCLASSES = list(RecordClass)
_CC = {c: k for k, c in enumerate(_CCLASSES)}
_RC = {r: k for k, r in enumerate(_RCLASSES)}
_CHUNK = 1 << 18


def _radix(n: int) -> int:
    return max(n, 1)


def encode_index(cclass: CycleClass, rclass: RecordClass, i: int, pair: tuple[int, int],
                 n: int) -> int:
    r = _radix(n)
    return (((_CC[cclass] * len(_RCLASSES) + _RC[rclass]) * 2 + i % 2) * r + pair[0]) * r + pair[1]


def decode_index(code: int, n: int) -> tuple[CycleClass, RecordClass, int, IndexRefined]:
    """Inverse of :func:`encode_index`; the position is 1 (odd) or 2 (even)."""
    r = _radix(n)
    code, second = divmod(code, r)
    code, first = divmod(code, r)
    code, odd = divmod(code, 2)
    cc, rc = divmod(code, len(_RCLASSES))
    cclass = _CCLASSES[cc]
    if cclass in (CycleClass.CVAL, CycleClass.CDRISE):
        refined = IndexRefined(first, second, 0, 0, 0)
    elif cclass in (CycleClass.CPEAK, CycleClass.CDFALL):
        refined = IndexRefined(0, 0, first, second, 0)
    else:
        refined = IndexRefined(0, 0, 0, 0, first)
    return cclass, _RCLASSES[rc], 1 if odd else 2, refined


def _crossing_pair(cclass: CycleClass, refined: IndexRefined) -> tuple[int, int]:
    if cclass in (CycleClass.CVAL, CycleClass.CDRISE):
        return refined.ucross, refined.unest
    if cclass in (CycleClass.CPEAK, CycleClass.CDFALL):
        return refined.lcross, refined.lnest
    return refined.psnest, 0


def index_codes(p: Permutation) -> tuple[list[int], int]:
    """Per-index codes and cycle count of one permutation (reference path)."""
    codes = [
        encode_index(c, r, i, _crossing_pair(c, ref), p.n)
        for i, c, r, ref in permstat._index_data(p)
    ]
    return codes, permstat.cycle_count(p)


def _codes_chunk(P: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    M, n = P.shape
    S = P - np.int8(1)
    pos = np.arange(n, dtype=np.int8)
    pre = np.empty_like(S)
    pre[np.arange(M)[:, None], S] = pos
    r = _radix(n)

    cc = np.full((M, n), _CC[CycleClass.FIX], dtype=np.int32)
    cc[(pre < pos) & (S < pos)] = _CC[CycleClass.CPEAK]
    cc[(pre > pos) & (S > pos)] = _CC[CycleClass.CVAL]
    cc[(pre < pos) & (S > pos)] = _CC[CycleClass.CDRISE]
    cc[(pre > pos) & (S < pos)] = _CC[CycleClass.CDFALL]

    prefix_max = np.maximum.accumulate(S, axis=1)
    rec = np.ones((M, n), dtype=bool)
    rec[:, 1:] = S[:, 1:] > prefix_max[:, :-1]
    suffix_min = np.minimum.accumulate(S[:, ::-1], axis=1)[:, ::-1]
    arec = np.ones((M, n), dtype=bool)
    arec[:, :-1] = S[:, :-1] < suffix_min[:, 1:]
    rc = np.where(rec & arec, _RC[RecordClass.RAR],
                  np.where(rec, _RC[RecordClass.EREC],
                           np.where(arec, _RC[RecordClass.EAREC], _RC[RecordClass.NRAR])))

    first = np.zeros((M, n), dtype=np.int32)
    second = np.zeros((M, n), dtype=np.int32)
    for j in range(n):
        sj = S[:, j:j + 1]
        left, right = S[:, :j], S[:, j + 1:]
        exc = sj[:, 0] > j
        fix = sj[:, 0] == j
        above = left > j
        uc = (above & (left < sj)).sum(1, dtype=np.int8)
        un = (left > sj).sum(1, dtype=np.int8)
        lc = ((right < j) & (right > sj)).sum(1, dtype=np.int8)
        ln = (right < sj).sum(1, dtype=np.int8)
        ps = above.sum(1, dtype=np.int8)
        first[:, j] = np.where(exc, uc, np.where(fix, ps, lc))
        second[:, j] = np.where(exc, un, np.where(fix, 0, ln))

    odd = ((pos + 1) % 2).astype(np.int32)
    codes = (((cc * len(_RCLASSES) + rc) * 2 + odd) * r + first) * r + second

    # a position is the cycle minimum iff no iterate of sigma goes below it
    cur = S.copy()
    is_min = cur >= pos
    for _ in range(n - 2):
        cur = np.take_along_axis(S, cur, axis=1)
        is_min &= cur >= pos
    return codes, is_min.sum(1)


def _group_rows(key: np.ndarray, counts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Distinct rows of ``key`` with the summed ``counts`` of their copies."""
    key = np.ascontiguousarray(key)
    if len(key) == 0:
        return key, counts
    view = key.view(np.dtype((np.void, key.itemsize * key.shape[1]))).ravel()
    order = np.argsort(view, kind="stable")
    sorted_view = view[order]
    starts = np.flatnonzero(np.r_[True, sorted_view[1:] != sorted_view[:-1]])
    return key[order[starts]], np.add.reduceat(counts[order], starts)


@dataclass(frozen=True, eq=False)
class ReducedTable:
    """A family collapsed to distinct (sorted index codes, cyc) rows."""

    size: int
    codes: np.ndarray
    cycles: np.ndarray
    counts: np.ndarray

    @property
    def total(self) -> int:
        return int(self.counts.sum())


@functools.lru_cache(maxsize=16)
def _reduced(kind: str, n: int) -> ReducedTable:
    P = _family_array(kind, n)
    keys, counts = [], []
    for start in range(0, max(len(P), 1), _CHUNK):
        chunk = P[start:start + _CHUNK]
        if n == 0:
            codes, cyc = np.zeros((len(chunk), 0), np.int32), np.zeros(len(chunk), np.int32)
        else:
            codes, cyc = _codes_chunk(chunk)
        codes.sort(axis=1)
        key, cnt = _group_rows(np.concatenate([codes, cyc[:, None].astype(np.int32)], axis=1),
                               np.ones(len(chunk), dtype=np.int64))
        keys.append(key)
        counts.append(cnt)
    key, cnt = _group_rows(np.concatenate(keys), np.concatenate(counts))
    return ReducedTable(n, key[:, :-1], key[:, -1], cnt)


def reduced_table(family: Family, max_n: int | None = None) -> ReducedTable:
    family.check_cap(max_n)
    return _reduced(family.kind, family.size)


# ---------------------------------------------------------------------------
# Weight schemes


@dataclass(frozen=True)
class WeightScheme:
    """A weight ``lambda^cyc * prod_i factor(i)`` described as data.

    ``powers`` sends a per-index statistic to a plain variable raised to it;
    ``indexed`` sends an indicator statistic to ``family[l, l']`` (arity 2)
    or ``family[l]`` (arity 1), where (l, l') is the index's crossing and
    nesting count, or its psnest for a fixed point; an index carrying any
    statistic in ``forbidden`` gives weight zero.
    """

    name: str
    family: str
    powers: tuple[tuple[str, str], ...] = ()
    indexed: tuple[tuple[str, str, int], ...] = ()
    forbidden: frozenset[str] = frozenset()
    description: str = field(default="", compare=False)

    def index_factor(self, cclass: CycleClass, rclass: RecordClass, i: int,
                     refined: IndexRefined) -> Monomial | None:
        """Monomial contributed by one index, or None if it zeroes the weight."""
        stats = permstat.local_stats(cclass, rclass, i, refined)
        if any(stats.get(s) for s in self.forbidden):
            return None
        pairs = [(VarId(name), stats[stat]) for stat, name in self.powers if stats.get(stat)]
        if self.indexed:
            first, second = _crossing_pair(cclass, refined)
            for stat, fam, arity in self.indexed:
                if stats.get(stat):
                    subs = (first, second) if arity == 2 else (first,)
                    pairs.append((VarId(fam, subs), 1))
        return Monomial(pairs)

    def variable_names(self) -> list[str]:
        """Families used by the scheme, without subscripts, plus lambda."""
        names = [name for _, name in self.powers] + [fam for _, fam, _ in self.indexed]
        return list(dict.fromkeys(names)) + [LAMBDA.family]

    def variables(self, size: int) -> list[VarId]:
        """Declared universe for permutations of length ``size``.

        A crossing or nesting count at length n is below n, so indexed
        families only need l + l' <= n - 1.
        """
        out = [VarId(name) for _, name in self.powers]
        for _, fam, arity in self.indexed:
            for total in range(max(size, 1)):
                if arity == 1:
                    out.append(VarId(fam, (total,)))
                else:
                    out.extend(VarId(fam, (k, total - k)) for k in range(total + 1))
        out.append(LAMBDA)
        return list(dict.fromkeys(out))


_PQ_REFINED = (
    ("ucrosscval", "pp1"), ("ucrosscdrise", "pp2"),
    ("lcrosscpeak", "pm1"), ("lcrosscdfall", "pm2"),
    ("unestcval", "qp1"), ("unestcdrise", "qp2"),
    ("lnestcpeak", "qm1"), ("lnestcdfall", "qm2"),
)
_RECORD_CATEGORIES = (
    ("eareccpeak", "x1"), ("eareccdfall", "x2"),
    ("ereccval", "y1"), ("ereccdrise", "y2"),
    ("nrcpeak", "u1"), ("nrcdfall", "u2"),
    ("nrcval", "v1"), ("nrcdrise", "v2"),
)
_MASTER_ABCD = (("cval", "a", 2), ("cpeak", "b", 2), ("cdfall", "c", 2), ("cdrise", "d", 2))
_DPERM_FIXED = (
    ("evennrfix", "we"), ("oddnrfix", "wo"), ("evenrar", "ze"), ("oddrar", "zo"),
)
_CA_CATEGORIES = (
    ("eareccpeakeven", "xe"), ("ereccvaleven", "ye"), ("nrcpeakeven", "ue"), ("nrcvaleven", "ve"),
    ("eareccpeakodd", "xo"), ("ereccvalodd", "yo"), ("nrcpeakodd", "uo"), ("nrcvalodd", "vo"),
)
_CA_REFINED = (
    ("lcrosscpeakeven", "pm1"), ("lcrosscpeakodd", "pm2"),
    ("ucrosscvalodd", "pp1"), ("ucrosscvaleven", "pp2"),
    ("lnestcpeakeven", "qm1"), ("lnestcpeakodd", "qm2"),
    ("unestcvalodd", "qp1"), ("unestcvaleven", "qp2"),
)
_NOT_ALTERNATING = frozenset({"fix", "cdrise", "cdfall"})

SCHEMES: dict[str, WeightScheme] = {
    s.name: s
    for s in (
        WeightScheme("master-perm", "perm", indexed=_MASTER_ABCD + (("fix", "e", 1),),
                     description="a[ucross,unest] on valleys, b/c/d likewise, e[psnest] on fixed points"),
        WeightScheme("big-perm-pq", "perm",
                     powers=_RECORD_CATEGORIES + _PQ_REFINED + (("psnest", "s"),),
                     indexed=(("fix", "w", 1),),
                     description="record categories with p,q crossing/nesting weights"),
        WeightScheme("simple-perm", "perm", powers=_RECORD_CATEGORIES,
                     indexed=(("fix", "w", 1),),
                     description="record categories; fixed points weighted w[psnest]"),
        WeightScheme("master-dperm", "dperm",
                     indexed=_MASTER_ABCD + (("evenfix", "e", 1), ("oddfix", "f", 1)),
                     description="as master-perm, with e on even and f on odd fixed points"),
        WeightScheme("pq-dperm", "dperm",
                     powers=_RECORD_CATEGORIES + _DPERM_FIXED + _PQ_REFINED
                     + (("epsnest", "se"), ("opsnest", "so")),
                     description="record categories, fixed points by parity, p,q weights"),
        WeightScheme("simple-dperm", "dperm", powers=_RECORD_CATEGORIES + _DPERM_FIXED,
                     description="record categories, fixed points by parity"),
        WeightScheme("xy-dperm", "dperm", powers=(("arec", "x"), ("erec", "y")),
                     description="x^arec y^erec"),
        WeightScheme("master-cyclealt", "cyclealt", indexed=_MASTER_ABCD[:2],
                     forbidden=_NOT_ALTERNATING,
                     description="master-perm with c = d = e = 0"),
        WeightScheme("evenodd-cyclealt-pq", "cyclealt", powers=_CA_CATEGORIES + _CA_REFINED,
                     forbidden=_NOT_ALTERNATING,
                     description="peak/valley record categories and p,q weights split by parity"),
        WeightScheme("simple-cyclealt", "cyclealt", powers=_CA_CATEGORIES,
                     forbidden=_NOT_ALTERNATING,
                     description="peak/valley record categories split by parity"),
    )
}


def get_scheme(scheme: str | WeightScheme) -> WeightScheme:
    if isinstance(scheme, WeightScheme):
        return scheme
    try:
        return SCHEMES[scheme]
    except KeyError:
        raise ValueError(
            f"unknown scheme {scheme!r}; available: {', '.join(SCHEMES)}"
        ) from None


def weight(p: Permutation, scheme: str | WeightScheme) -> Polynomial:
    """Weight of one permutation, computed straight from permstat."""
    scheme = get_scheme(scheme)
    m = Monomial(((LAMBDA, permstat.cycle_count(p)),))
    for i, c, r, ref in permstat._index_data(p):
        f = scheme.index_factor(c, r, i, ref)
        if f is None:
            return Polynomial()
        m = m * f
    return Polynomial({m: 1})


@dataclass(frozen=True)
class _Projection:
    """A family's reduced table seen through one scheme.

    ``factors[k]`` is the monomial of factor id k; rows list factor ids.
    Members of weight zero are already dropped.
    """

    factors: tuple[Monomial, ...]
    rows: tuple[tuple[int, ...], ...]
    cycles: tuple[int, ...]
    counts: tuple[int, ...]


@functools.lru_cache(maxsize=64)
def _project(scheme: WeightScheme, kind: str, n: int) -> _Projection:
    table = _reduced(kind, n)
    distinct = np.unique(table.codes)
    ids: dict[Monomial, int] = {}
    code_to_id = np.empty(len(distinct), dtype=np.int32)
    for k, code in enumerate(distinct.tolist()):
        f = scheme.index_factor(*decode_index(code, n))
        code_to_id[k] = -1 if f is None else ids.setdefault(f, len(ids))
    mapped = code_to_id[np.searchsorted(distinct, table.codes)]
    alive = (mapped >= 0).all(axis=1)
    mapped = np.sort(mapped[alive], axis=1)
    key, counts = _group_rows(
        np.concatenate([mapped, table.cycles[alive, None]], axis=1), table.counts[alive]
    )
    return _Projection(
        tuple(ids),
        tuple(map(tuple, key[:, :-1].tolist())),
        tuple(key[:, -1].tolist()),
        tuple(counts.tolist()),
    )


def _lambda_image(lam) -> Polynomial | None:
    """None keeps lambda symbolic."""
    if lam is None or (isinstance(lam, str) and lam == "symbolic"):
        return None
    return Polynomial.coerce(lam)


def generating_polynomial(family: Family, scheme: str | WeightScheme, *,
                          lam=None, max_n: int | None = None) -> Polynomial:
    """Sum of the scheme's weights over ``family``.

    ``lam`` substitutes a value for lambda; by default it stays symbolic.
    """
    scheme = get_scheme(scheme)
    family.check_cap(max_n)
    proj = _project(scheme, family.kind, family.size)
    lam_value = _lambda_image(lam)
    lam_int = (lam_value.constant_term()
               if lam_value is not None and lam_value.is_constant() else None)
    acc: dict[Monomial, int] = {}
    symbolic_lambda: list[tuple[Monomial, int, int]] = []
    for row, cyc, count in zip(proj.rows, proj.cycles, proj.counts):
        m = UNIT
        for k in row:
            m = m * proj.factors[k]
        if lam_value is None:
            if cyc:
                m = m * Monomial._trusted(((LAMBDA, cyc),))
            acc[m] = acc.get(m, 0) + count
        elif lam_int is not None:
            acc[m] = acc.get(m, 0) + count * lam_int**cyc
        else:
            symbolic_lambda.append((m, cyc, count))
    total = Polynomial({m: c for m, c in acc.items() if c})
    for m, cyc, count in symbolic_lambda:
        total = total + Polynomial({m: count}) * lam_value**cyc
    return total


def generating_value_mod(family: Family, scheme: str | WeightScheme,
                         assignment: Mapping[VarId, int] | Callable[[VarId], int], *,
                         prime: int = DEFAULT_PRIME, max_n: int | None = None) -> int:
    """The generating polynomial evaluated mod ``prime`` without building it.

    ``assignment`` must cover lambda and every scheme variable that occurs.
    """
    scheme = get_scheme(scheme)
    family.check_cap(max_n)
    proj = _project(scheme, family.kind, family.size)
    lam = int(_lookup(assignment, LAMBDA)) % prime
    values = [eval_mod(Polynomial({f: 1}), assignment, prime) for f in proj.factors]
    lam_powers = [pow(lam, c, prime) for c in range(family.size + 1)]
    total = 0
    for row, cyc, count in zip(proj.rows, proj.cycles, proj.counts):
        v = count * lam_powers[cyc]
        for k in row:
            v = v * values[k] % prime
        total += v
    return total % prime


def _lookup(assignment, v: VarId):
    if callable(assignment) and not isinstance(assignment, Mapping):
        return assignment(v)
    return assignment[v]


def series_of_family(kind: str, scheme: str | WeightScheme, order: int, *, lam=None,
                     substitution=None, max_n: int | None = None) -> TruncatedSeries:
    """sum_n P_n t^n through t^order, with P_n summed over the size-n (or 2n) family.

    ``substitution`` (mapping or callable on variables) is applied after
    lambda; variables it does not cover are kept.
    """
    coeffs = []
    for n in range(order + 1):
        poly = generating_polynomial(Family.at_order(kind, n), scheme, lam=lam, max_n=max_n)
        if substitution is not None:
            poly = substitute(poly, substitution, keep_unmapped=True)
        coeffs.append(poly)
    return TruncatedSeries(tuple(coeffs))


def series_mod(kind: str, scheme: str | WeightScheme, order: int,
               assignment: Mapping[VarId, int] | Callable[[VarId], int], *,
               prime: int = DEFAULT_PRIME, max_n: int | None = None) -> TruncatedSeries:
    """:func:`series_of_family` evaluated mod ``prime``, order by order."""
    return TruncatedSeries(
        tuple(
            generating_value_mod(Family.at_order(kind, n), scheme, assignment,
                                 prime=prime, max_n=max_n)
            for n in range(order + 1)
        ),
        modulus=prime,
    )


# ---------------------------------------------------------------------------
# Specializations between schemes, as variable maps.


def _by_nest(cross: str, nest: str, plain: str, nested: str) -> Callable[[int, int], Polynomial]:
    def image(l: int, l2: int) -> Polynomial:
        return var(cross) ** l * var(nest) ** l2 * var(plain if l2 == 0 else nested)
    return image


_ABCD_PQ = {
    "a": _by_nest("pp1", "qp1", "y1", "v1"),
    "b": _by_nest("pm1", "qm1", "x1", "u1"),
    "c": _by_nest("pm2", "qm2", "x2", "u2"),
    "d": _by_nest("pp2", "qp2", "y2", "v2"),
}


def master_to_pq_perm(v: VarId) -> Polynomial:
    """Master permutation variables in terms of the p,q scheme."""
    if v.family in _ABCD_PQ:
        return _ABCD_PQ[v.family](*v.subscripts)
    if v.family == "e":
        (l,) = v.subscripts
        return var("s") ** l * var("w", l)
    if v == LAMBDA:
        return var(LAMBDA)
    raise KeyError(v)


def master_to_pq_dperm(v: VarId) -> Polynomial:
    """Master D-permutation variables in terms of the p,q scheme."""
    if v.family in _ABCD_PQ:
        return _ABCD_PQ[v.family](*v.subscripts)
    if v.family in ("e", "f"):
        (k,) = v.subscripts
        side = "e" if v.family == "e" else "o"
        if k == 0:
            return var("z" + side)
        return var("s" + side) ** k * var("w" + side)
    if v == LAMBDA:
        return var(LAMBDA)
    raise KeyError(v)


def master_to_pq_cyclealt(v: VarId) -> Polynomial:
    """Master cycle-alternating variables in terms of the even/odd p,q scheme.

    The parity of l + l' determines the parity of the index position.
    """
    if v.family not in ("a", "b"):
        if v == LAMBDA:
            return var(LAMBDA)
        raise KeyError(v)
    l, l2 = v.subscripts
    even = (l + l2) % 2 == 0
    if v.family == "a":
        cross, nest, plain, nested = ("pp1", "qp1", "yo", "vo") if even else ("pp2", "qp2", "ye", "ve")
    else:
        cross, nest, plain, nested = ("pm1", "qm1", "xe", "ue") if even else ("pm2", "qm2", "xo", "uo")
    return _by_nest(cross, nest, plain, nested)(l, l2)


def _ones(names: tuple[str, ...]) -> Callable[[VarId], Polynomial]:
    def image(v: VarId) -> Polynomial:
        if v.family in names and not v.subscripts:
            return ONE
        raise KeyError(v)
    return image


PQ_TO_ONE = _ones(("pp1", "pp2", "pm1", "pm2", "qp1", "qp2", "qm1", "qm2", "s", "se", "so"))


def simple_dperm_to_xy(v: VarId) -> Polynomial:
    if v.family in ("x1", "x2", "ze", "zo"):
        return var("x")
    if v.family in ("y1", "y2"):
        return var("y")
    if v.family in ("u1", "u2", "v1", "v2", "we", "wo"):
        return ONE
    raise KeyError(v)


def master_to_cyclealt(v: VarId) -> Polynomial:
    """c = d = e = 0 restricts master-perm to cycle-alternating permutations."""
    if v.family in ("c", "d", "e"):
        return Polynomial()
    raise KeyError(v)


SPECIALIZATIONS: dict[str, tuple[str, str, Callable[[VarId], Polynomial]]] = {
    "master-perm>big-perm-pq": ("master-perm", "big-perm-pq", master_to_pq_perm),
    "master-dperm>pq-dperm": ("master-dperm", "pq-dperm", master_to_pq_dperm),
    "master-cyclealt>evenodd-cyclealt-pq": ("master-cyclealt", "evenodd-cyclealt-pq",
                                            master_to_pq_cyclealt),
    "big-perm-pq>simple-perm": ("big-perm-pq", "simple-perm", PQ_TO_ONE),
    "pq-dperm>simple-dperm": ("pq-dperm", "simple-dperm", PQ_TO_ONE),
    "evenodd-cyclealt-pq>simple-cyclealt": ("evenodd-cyclealt-pq", "simple-cyclealt", PQ_TO_ONE),
    "simple-dperm>xy-dperm": ("simple-dperm", "xy-dperm", simple_dperm_to_xy),
    "master-perm>master-cyclealt": ("master-perm", "master-cyclealt", master_to_cyclealt),
}


def specialize(poly: Polynomial, name: str) -> Polynomial:
    """Apply a named specialization; variables it does not touch are kept."""
    _, _, mapping = SPECIALIZATIONS[name]
    return substitute(poly, mapping, keep_unmapped=True)


def all_ones_except_lambda(v: VarId) -> Polynomial:
    if v == LAMBDA:
        raise KeyError(v)
    return ONE

"""Registry of continued-fraction identities and per-permutation facts, and
the machinery that checks them.

A series identity pairs a family/scheme/lambda generating function with a
continued fraction whose coefficients are written out below as explicit
polynomials in the same scheme's variables.  It is checked either
symbolically (exact polynomial equality of every t^k coefficient) or
modularly (both sides evaluated mod a 61-bit prime at pseudo-random
points derived from a seed).  Predicate identities run a check over
every member of a family.
"""
from __future__ import annotations

import hashlib
import time
from collections.abc import Callable
from dataclasses import asdict, dataclass, field

from . import permstat
from .cfkit import FractionSpec, TruncatedSeries, expand
from .families import LAMBDA, Family, enumerate_family, series_mod, series_of_family
from .polyring import DEFAULT_PRIME, ONE, Polynomial, VarId, eval_mod, qbracket, var

__all__ = [
    "IDENTITIES",
    "IdentityCase",
    "UnknownIdentityError",
    "VerifyReport",
    "cf_side",
    "enum_side",
    "modular_assignment",
    "sign_insertion",
    "verify",
]


class UnknownIdentityError(KeyError):
    def __str__(self) -> str:
        return f"unknown identity {self.args[0]!r}; available: {', '.join(IDENTITIES)}"


# ---------------------------------------------------------------------------
# Coefficient building blocks


def _diag(fam: str, n: int, signed: bool) -> Polynomial:
    """sum_{l < n} (+-1)^l fam[l, n-1-l]."""
    total = Polynomial()
    for l in range(n):
        term = var(fam, l, n - 1 - l)
        total = total + (-term if signed and l % 2 else term)
    return total


def _pq_term(p: str, q: str, plain: str, nested: str, m: int, *, p_sign: int = -1) -> Polynomial:
    """(p_sign * p)^m * plain + q [m]_{-p,q} * nested."""
    pv, qv = var(p), var(q)
    return (p_sign * pv) ** m * var(plain) + qv * qbracket(m, -pv, qv) * var(nested)


def _master_perm_j(signed: bool) -> FractionSpec:
    sign = -1 if signed else 1

    def gamma(n: int) -> Polynomial:
        return _diag("c", n, signed) + _diag("d", n, signed) + sign * var("e", n)

    def beta(n: int) -> Polynomial:
        return sign * _diag("a", n, signed) * _diag("b", n, signed)

    return FractionSpec("J", gamma=gamma, beta=beta)


def _pq_perm_j() -> FractionSpec:
    def gamma(n: int) -> Polynomial:
        if n == 0:
            return -var("w", 0)
        return (_pq_term("pm2", "qm2", "x2", "u2", n - 1)
                + _pq_term("pp2", "qp2", "y2", "v2", n - 1)
                - var("s") ** n * var("w", n))

    def beta(n: int) -> Polynomial:
        return -(_pq_term("pm1", "qm1", "x1", "u1", n - 1)
                 * _pq_term("pp1", "qp1", "y1", "v1", n - 1))

    return FractionSpec("J", gamma=gamma, beta=beta)


def _simple_perm_j() -> FractionSpec:
    x1, x2, y1, y2, u1, u2, v1, v2 = (var(s) for s in ("x1", "x2", "y1", "y2", "u1", "u2", "v1", "v2"))

    def gamma(n: int) -> Polynomial:
        if n == 0:
            return -var("w", 0)
        if n % 2:
            return x2 + y2 - var("w", n)
        return -x2 + u2 - y2 + v2 - var("w", n)

    def beta(n: int) -> Polynomial:
        return -x1 * y1 if n % 2 else -(x1 - u1) * (y1 - v1)

    return FractionSpec("J", gamma=gamma, beta=beta)


def _master_cyclealt_s() -> FractionSpec:
    return FractionSpec("S", alpha=lambda n: -_diag("a", n, True) * _diag("b", n, True))


def _pq_cyclealt_s() -> FractionSpec:
    def alpha(n: int) -> Polynomial:
        if n % 2:
            m = n - 1
            return -(_pq_term("pm1", "qm1", "xe", "ue", m, p_sign=1)
                     * _pq_term("pp1", "qp1", "yo", "vo", m, p_sign=1))
        m = n - 1
        return -(_pq_term("pm2", "qm2", "xo", "uo", m)
                 * _pq_term("pp2", "qp2", "ye", "ve", m))

    return FractionSpec("S", alpha=alpha)


def _simple_cyclealt_s() -> FractionSpec:
    xe, yo, xo, uo, ye, ve = (var(s) for s in ("xe", "yo", "xo", "uo", "ye", "ve"))
    return FractionSpec("S", alpha=lambda n: -xe * yo if n % 2 else -(xo - uo) * (ye - ve))


def _zero_beyond_first(value: Polynomial) -> Callable[[int], Polynomial]:
    return lambda n: value if n == 1 else Polynomial()


def _master_dperm_t(signed: bool) -> FractionSpec:
    sign = -1 if signed else 1

    def alpha(n: int) -> Polynomial:
        k = (n + 1) // 2
        if n % 2:
            return sign * _diag("a", k, signed) * _diag("b", k, signed)
        return ((sign * var("e", k) + _diag("c", k, signed))
                * (sign * var("f", k) + _diag("d", k, signed)))

    return FractionSpec("T", alpha=alpha, delta=_zero_beyond_first(var("e", 0) * var("f", 0)))


def _pq_dperm_t() -> FractionSpec:
    def alpha(n: int) -> Polynomial:
        k = (n + 1) // 2
        if n % 2:
            return -(_pq_term("pm1", "qm1", "x1", "u1", k - 1)
                     * _pq_term("pp1", "qp1", "y1", "v1", k - 1))
        return ((_pq_term("pm2", "qm2", "x2", "u2", k - 1) - var("se") ** k * var("we"))
                * (_pq_term("pp2", "qp2", "y2", "v2", k - 1) - var("so") ** k * var("wo")))

    return FractionSpec("T", alpha=alpha, delta=_zero_beyond_first(var("ze") * var("zo")))


def _simple_dperm_t() -> FractionSpec:
    x1, x2, y1, y2, u1, u2, v1, v2, we, wo = (
        var(s) for s in ("x1", "x2", "y1", "y2", "u1", "u2", "v1", "v2", "we", "wo")
    )

    def alpha(n: int) -> Polynomial:
        k = (n + 1) // 2
        if n % 2:
            return -x1 * y1 if k % 2 else -(x1 - u1) * (y1 - v1)
        return (x2 - we) * (y2 - wo) if k % 2 else (x2 - u2 + we) * (y2 - v2 + wo)

    return FractionSpec("T", alpha=alpha, delta=_zero_beyond_first(var("ze") * var("zo")))


def xy_dperm_t() -> FractionSpec:
    """T-fraction of sum_n P_n(x, y, -1) t^n before contraction."""
    x, y = var("x"), var("y")

    def alpha(n: int) -> Polynomial:
        k = (n + 1) // 2
        if n % 2:
            return -x * y if k % 2 else -(x - 1) * (y - 1)
        return (x - 1) * (y - 1) if k % 2 else x * y

    return FractionSpec("T", alpha=alpha, delta=_zero_beyond_first(x * x))


def _xy_dperm_j() -> FractionSpec:
    x, y = var("x"), var("y")
    return FractionSpec(
        "J",
        gamma=lambda n: x * (x - y) if n == 0 else Polynomial(),
        beta=lambda n: -x * y * (x - 1) * (y - 1),
    )


def sign_insertion(v: VarId) -> Polynomial:
    """Variable map turning a lambda = 1 master fraction into lambda = -1.

    One factor -1 per fixed point, per cycle peak and per crossing:
    a, c, d pick up (-1)^l, b picks up -(-1)^l, e and f flip sign.
    """
    if v.family in ("a", "c", "d", "b"):
        l = v.subscripts[0]
        sign = -1 if l % 2 else 1
        if v.family == "b":
            sign = -sign
        return sign * var(v)
    if v.family in ("e", "f"):
        return -var(v)
    raise KeyError(v)


# ---------------------------------------------------------------------------
# Registry


@dataclass(frozen=True)
class IdentityCase:
    id: str
    title: str
    kind: str  # "series" or "predicate"
    family: str
    scheme: str | None = None
    lam: int | None = None
    fraction: Callable[[], FractionSpec] | None = field(default=None, compare=False)
    predicate: Callable[[permstat.Permutation], bool] | None = field(default=None, compare=False)
    symbolic_order: int = 0
    modular_order: int = 0
    predicate_size: int = 0

    @property
    def default_mode(self) -> str:
        return "predicate" if self.kind == "predicate" else "symbolic"

    def default_order(self, mode: str) -> int:
        if mode == "predicate":
            return self.predicate_size
        return self.symbolic_order if mode == "symbolic" else self.modular_order


def _series(id_: str, title: str, family: str, scheme: str, lam: int,
            fraction: Callable[[], FractionSpec], symbolic: int, modular: int) -> IdentityCase:
    return IdentityCase(id_, title, "series", family, scheme, lam, fraction,
                        symbolic_order=symbolic, modular_order=modular)


def _predicate(id_: str, title: str, family: str, check, size: int) -> IdentityCase:
    return IdentityCase(id_, title, "predicate", family, predicate=check, predicate_size=size)


IDENTITIES: dict[str, IdentityCase] = {
    c.id: c
    for c in (
        _series("PERM-J-MASTER-L1", "master J-fraction for permutations, lambda = 1",
                "perm", "master-perm", 1, lambda: _master_perm_j(False), 5, 7),
        _series("PERM-J-MASTER-LM1", "master J-fraction for permutations, lambda = -1",
                "perm", "master-perm", -1, lambda: _master_perm_j(True), 5, 7),
        _series("PERM-J-PQ-LM1", "p,q J-fraction for permutations, lambda = -1",
                "perm", "big-perm-pq", -1, _pq_perm_j, 5, 7),
        _series("PERM-J-SIMPLE-LM1", "simple J-fraction for permutations, lambda = -1",
                "perm", "simple-perm", -1, _simple_perm_j, 7, 8),
        _series("CA-S-MASTER-LM1", "master S-fraction for cycle-alternating permutations",
                "cyclealt", "master-cyclealt", -1, _master_cyclealt_s, 4, 6),
        _series("CA-S-PQ-LM1", "p,q S-fraction for cycle-alternating permutations",
                "cyclealt", "evenodd-cyclealt-pq", -1, _pq_cyclealt_s, 4, 6),
        _series("CA-S-SIMPLE-LM1", "simple S-fraction for cycle-alternating permutations",
                "cyclealt", "simple-cyclealt", -1, _simple_cyclealt_s, 4, 6),
        _series("DP-T-MASTER-L1", "master T-fraction for D-permutations, lambda = 1",
                "dperm", "master-dperm", 1, lambda: _master_dperm_t(False), 4, 5),
        _series("DP-T-MASTER-LM1", "master T-fraction for D-permutations, lambda = -1",
                "dperm", "master-dperm", -1, lambda: _master_dperm_t(True), 4, 5),
        _series("DP-T-PQ-LM1", "p,q T-fraction for D-permutations, lambda = -1",
                "dperm", "pq-dperm", -1, _pq_dperm_t, 4, 5),
        _series("DP-T-SIMPLE-LM1", "simple T-fraction for D-permutations, lambda = -1",
                "dperm", "simple-dperm", -1, _simple_dperm_t, 4, 5),
        _series("DP-J-XY-LM1", "J-fraction for x^arec y^erec over D-permutations, lambda = -1",
                "dperm", "xy-dperm", -1, _xy_dperm_j, 6, 6),
        _predicate("LEMMA-1-1", "cyc = fix + cpeak + ucross + lcross mod 2 (and with cval)",
                   "perm", permstat.check_lemma_1_1, 8),
        _predicate("INV-FORMULA", "inv = cval + cdrise + cdfall + ucross + lcross"
                   " + 2 (unest + lnest + psnest)", "perm", permstat.check_inv_formula, 8),
        _predicate("LEMMA-4-2", "crossing + nesting parity at peaks and valleys of"
                   " cycle-alternating permutations", "cyclealt", permstat.check_lemma_4_2, 10),
    )
}


def get_identity(identity: str | IdentityCase) -> IdentityCase:
    if isinstance(identity, IdentityCase):
        return identity
    try:
        return IDENTITIES[identity]
    except KeyError:
        raise UnknownIdentityError(identity) from None


def _series_case(identity) -> IdentityCase:
    case = get_identity(identity)
    if case.kind != "series":
        raise ValueError(f"{case.id} is a per-permutation check, not a series identity")
    return case


def cf_side(identity: str | IdentityCase, order: int) -> TruncatedSeries:
    """Continued-fraction side expanded through t^order."""
    return expand(_series_case(identity).fraction(), order)


def enum_side(identity: str | IdentityCase, order: int, *, max_n: int | None = None) -> TruncatedSeries:
    """Enumeration side through t^order, with lambda set to the identity's value."""
    case = _series_case(identity)
    return series_of_family(case.family, case.scheme, order, lam=case.lam, max_n=max_n)


def modular_assignment(seed: int, trial: int, prime: int = DEFAULT_PRIME) -> Callable[[VarId], int]:
    """Deterministic pseudo-random residues, one per (seed, trial, variable)."""
    def value(v: VarId) -> int:
        digest = hashlib.sha256(f"{seed}:{trial}:{v}".encode()).digest()
        return int.from_bytes(digest[:16], "big") % prime
    return value


# ---------------------------------------------------------------------------
# Reports


@dataclass
class VerifyReport:
    id: str
    mode: str
    orders: list[int]
    passed: list[bool]
    witness: dict | None = None
    millis: int = 0
    checked: int = 0
    seed: int | None = None
    trials: int | None = None

    @property
    def ok(self) -> bool:
        return bool(self.passed) and all(self.passed)

    @property
    def status(self) -> str:
        return "pass" if self.ok else "fail"

    def to_json(self) -> dict:
        out = asdict(self)
        out["status"] = self.status
        # exact integers travel as decimal strings
        out["checked"] = str(self.checked)
        return out

    def summary(self) -> str:
        span = f"{self.orders[0]}..{self.orders[-1]}" if self.orders else "-"
        line = (f"{self.id:<18} {self.mode:<9} {span:<7} {self.status:<4} "
                f"{self.millis:>7} ms  checked={self.checked}")
        if self.witness:
            line += f"  witness={self.witness}"
        return line


def _term_difference(lhs: Polynomial, rhs: Polynomial) -> tuple[str, str]:
    only_l = Polynomial({m: c for m, c in lhs.terms.items() if rhs.terms.get(m) != c})
    only_r = Polynomial({m: c for m, c in rhs.terms.items() if lhs.terms.get(m) != c})
    return str(only_l), str(only_r)


def _verify_symbolic(case: IdentityCase, order: int, max_n) -> VerifyReport:
    lhs = enum_side(case, order, max_n=max_n)
    rhs = cf_side(case, order)
    passed = [lhs[k] == rhs[k] for k in range(order + 1)]
    report = VerifyReport(case.id, "symbolic", list(range(order + 1)), passed, checked=order + 1)
    if not all(passed):
        k = passed.index(False)
        only_l, only_r = _term_difference(Polynomial.coerce(lhs[k]), Polynomial.coerce(rhs[k]))
        report.witness = {
            "order": k,
            "enumeration": str(lhs[k]),
            "fraction": str(rhs[k]),
            "only_in_enumeration": only_l,
            "only_in_fraction": only_r,
        }
    return report


def _verify_modular(case: IdentityCase, order: int, seed: int, trials: int, max_n,
                    prime: int) -> VerifyReport:
    passed = [True] * (order + 1)
    witness = None
    spec = case.fraction()
    for trial in range(trials):
        base = modular_assignment(seed, trial, prime)
        lam = case.lam % prime

        def assignment(v: VarId, base=base, lam=lam) -> int:
            return lam if v == LAMBDA else base(v)

        lhs = series_mod(case.family, case.scheme, order, assignment, prime=prime, max_n=max_n)
        rhs = expand(spec.map(lambda poly: eval_mod(poly, assignment, prime)), order,
                     modulus=prime)
        for k in range(order + 1):
            if lhs[k] != rhs[k]:
                passed[k] = False
                if witness is None:
                    witness = {"order": k, "trial": trial,
                               "enumeration": str(lhs[k]), "fraction": str(rhs[k])}
    return VerifyReport(case.id, "modular", list(range(order + 1)), passed, witness,
                        checked=(order + 1) * trials, seed=seed, trials=trials)


def _verify_predicate(case: IdentityCase, size: int, max_n) -> VerifyReport:
    step = 2 if case.family != "perm" else 1
    sizes = list(range(step, size + 1, step))
    passed, checked, witness = [], 0, None
    for n in sizes:
        ok = True
        for p in enumerate_family(Family(case.family, n), max_n):
            checked += 1
            if not case.predicate(p):
                ok = False
                witness = {"size": n, "permutation": str(p)}
                break
        passed.append(ok)
        if not ok:
            break
    return VerifyReport(case.id, "predicate", sizes[:len(passed)], passed, witness,
                        checked=checked)


def verify(identity: str | IdentityCase, order: int | None = None, mode: str | None = None,
           seed: int = 0, trials: int = 3, *, max_n: int | None = None,
           prime: int = DEFAULT_PRIME) -> VerifyReport:
    """Check one registered identity.

    ``order`` is the largest t-power for series identities and the largest
    permutation length for predicates; it defaults to the registered value
    for the mode.  Modes: symbolic, modular, predicate.
    """
    case = get_identity(identity)
    mode = mode or case.default_mode
    if (mode == "predicate") != (case.kind == "predicate"):
        raise ValueError(f"mode {mode!r} does not apply to {case.id}")
    if mode not in ("symbolic", "modular", "predicate"):
        raise ValueError(f"unknown mode {mode!r}")
    if order is None:
        order = case.default_order(mode)
    start = time.perf_counter()
    if mode == "symbolic":
        report = _verify_symbolic(case, order, max_n)
    elif mode == "modular":
        report = _verify_modular(case, order, seed, trials, max_n, prime)
    else:
        report = _verify_predicate(case, order, max_n)
    report.millis = int((time.perf_counter() - start) * 1000)
    return report


def all_ones_series(identity: str | IdentityCase, order: int) -> tuple[TruncatedSeries, TruncatedSeries]:
    """Both sides with every variable except lambda set to 1."""
    case = _series_case(identity)
    ones = lambda v: ONE  # noqa: E731
    lhs = series_of_family(case.family, case.scheme, order, lam=case.lam)
    lhs = lhs.map(lambda p: Polynomial.coerce(p).substitute(ones).constant_term())
    spec = case.fraction().map(lambda p: Polynomial.coerce(p).substitute(ones).constant_term())
    return lhs, expand(spec, order)

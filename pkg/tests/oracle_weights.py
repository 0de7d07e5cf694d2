"""Generating polynomials assembled from the oracle statistics.

Only the polynomial ring comes from the package; every statistic is
recomputed by the definition scans in :mod:`oracles`.
"""
from __future__ import annotations

from cyclefrac.polyring import Polynomial, var

import oracles as O

_PAIR = {"cval": ("a", 0, 1), "cpeak": ("b", 2, 3), "cdfall": ("c", 2, 3), "cdrise": ("d", 0, 1)}


def master_perm_weight(w) -> Polynomial:
    m = var("lambda") ** O.cycles_of(w)
    for i in range(1, len(w) + 1):
        cls = O.cycle_class(w, i)
        counts = O.quadruplet_counts(w, i)
        if cls == "fix":
            m = m * var("e", counts[4])
        else:
            fam, first, second = _PAIR[cls]
            m = m * var(fam, counts[first], counts[second])
    return m


def xy_dperm_weight(w) -> Polynomial:
    n = len(w)
    arec = sum(1 for i in range(1, n + 1) if O.is_antirecord(w, i))
    erec = sum(1 for i in range(1, n + 1) if O.is_record(w, i) and not O.is_antirecord(w, i))
    return var("x") ** arec * var("y") ** erec * var("lambda") ** O.cycles_of(w)


def simple_cyclealt_weight(w) -> Polynomial:
    m = var("lambda") ** O.cycles_of(w)
    for i in range(1, len(w) + 1):
        parity = "e" if i % 2 == 0 else "o"
        cls = O.cycle_class(w, i)
        rec, arec = O.is_record(w, i), O.is_antirecord(w, i)
        if cls == "cpeak":
            m = m * var(("x" if arec else "u") + parity)
        elif cls == "cval":
            m = m * var(("y" if rec else "v") + parity)
        else:
            raise ValueError(f"{w} is not cycle-alternating")
    return m


WEIGHTS = {
    "master-perm": master_perm_weight,
    "xy-dperm": xy_dperm_weight,
    "simple-cyclealt": simple_cyclealt_weight,
}


def oracle_polynomial(kind: str, scheme: str, n: int) -> Polynomial:
    total = Polynomial()
    for w in O.filter_family(kind, n):
        total = total + WEIGHTS[scheme](w)
    return total

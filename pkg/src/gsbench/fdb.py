"""Exact Faa di Bruno engine.

Derivatives of a composition h(psi(x)) at a point are expanded over multi-
indices (k_1, ..., k_j) with sum(l * k_l) = j.  Multinomials and the l!-power
denominators are exact big integers; jets carry either exact rationals or
signed log-magnitude entries, and the two pipelines never mix inside a single
summation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence, Union

from .errors import PreconditionError
from .logdomain import LogReal, signed_log_sum

JetValue = Union[Fraction, LogReal]

_LIST_CAP = 80  # partition counts explode beyond this; stream instead


@dataclass(frozen=True)
class PartitionMultiIndex:
    """(k_1, ..., k_j) with sum(l k_l) = j; k = sum(k_l)."""

    j: int
    k_vec: tuple

    @property
    def k(self) -> int:
        return sum(self.k_vec)

    def __post_init__(self) -> None:
        if sum((l + 1) * kl for l, kl in enumerate(self.k_vec)) != self.j:
            raise PreconditionError("multi-index does not sum to j")

    def multinomial(self) -> int:
        """j! / (k_1! ... k_j!) as an exact integer."""
        m = math.factorial(self.j)
        for kl in self.k_vec:
            if kl:
                m //= math.factorial(kl)
        return m

    def denominator_power(self) -> int:
        """prod_l (l!)^(k_l) as an exact integer."""
        p = 1
        for l, kl in enumerate(self.k_vec, start=1):
            if kl:
                p *= math.factorial(l) ** kl
        return p


def iter_partition_multi_indices(j: int) -> Iterator[PartitionMultiIndex]:
    """Stream the multi-indices for order j in lexicographic k_vec order."""
    if j <= 0:
        return

    def rec(remaining: int, largest: int, counts: dict):
        if remaining == 0:
            k_vec = tuple(counts.get(l, 0) for l in range(1, j + 1))
            yield k_vec
            return
        for part in range(min(largest, remaining), 0, -1):
            counts[part] = counts.get(part, 0) + 1
            yield from rec(remaining - part, part, counts)
            counts[part] -= 1
            if counts[part] == 0:
                del counts[part]

    vecs = sorted(rec(j, j, {}))
    for v in vecs:
        yield PartitionMultiIndex(j, v)


def _iter_support_partitions(j: int, support: Sequence[int]) -> Iterator[PartitionMultiIndex]:
    """Multi-indices for order j whose parts all lie in ``support`` (the
    orders where the inner jet is nonzero); equivalent to filtering the full
    enumeration but without visiting dead branches."""
    supp = sorted(set(support), reverse=True)

    def rec(remaining: int, idx: int, counts: dict):
        if remaining == 0:
            yield tuple(counts.get(l, 0) for l in range(1, j + 1))
            return
        for i in range(idx, len(supp)):
            part = supp[i]
            if part > remaining:
                continue
            counts[part] = counts.get(part, 0) + 1
            yield from rec(remaining - part, i, counts)
            counts[part] -= 1
            if counts[part] == 0:
                del counts[part]

    for v in sorted(rec(j, 0, {})):
        yield PartitionMultiIndex(j, v)


def enumerate_partitions(j: int) -> list:
    """All multi-indices for order j; count equals the partition number p(j)."""
    if j == 0:
        return []  # empty by convention
    if j < 0:
        raise PreconditionError("order must be nonnegative")
    if j > _LIST_CAP:
        raise PreconditionError(
            f"j={j} exceeds the materialization cap {_LIST_CAP}; "
            "use iter_partition_multi_indices")
    return list(iter_partition_multi_indices(j))


def partition_count(j: int) -> int:
    """p(j) by Euler's pentagonal-number recurrence (independent oracle)."""
    p = [1] + [0] * j
    for n in range(1, j + 1):
        total, k = 0, 1
        while True:
            g1 = k * (3 * k - 1) // 2
            g2 = k * (3 * k + 1) // 2
            if g1 > n and g2 > n:
                break
            sign = -1 if k % 2 == 0 else 1
            if g1 <= n:
                total += sign * p[n - g1]
            if g2 <= n:
                total += sign * p[n - g2]
            k += 1
        p[n] = total
    return p[j]


# ---------------------------------------------------------------------------
# Jets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Jet:
    """Finite derivative array f^(0..J) at a base point.

    kind "exact" stores Fractions; kind "log" stores LogReal entries.  The
    representation is uniform across entries.
    """

    base_point: Union[float, Fraction]
    values: tuple
    kind: str

    def __post_init__(self) -> None:
        if self.kind not in ("exact", "log"):
            raise PreconditionError(f"unknown jet kind {self.kind!r}")
        want = Fraction if self.kind == "exact" else LogReal
        if not all(isinstance(v, want) for v in self.values):
            raise PreconditionError(f"jet entries must all be {want.__name__}")

    @property
    def order(self) -> int:
        return len(self.values) - 1

    @staticmethod
    def from_rationals(base_point, values) -> "Jet":
        return Jet(Fraction(base_point), tuple(Fraction(v) for v in values), "exact")

    @staticmethod
    def from_floats(base_point: float, values: Sequence[float]) -> "Jet":
        return Jet(float(base_point),
                   tuple(LogReal.from_float(v) for v in values), "log")

    @staticmethod
    def from_logreals(base_point: float, values: Sequence[LogReal]) -> "Jet":
        return Jet(float(base_point), tuple(values), "log")

    def to_exact(self) -> "Jet":
        if self.kind == "exact":
            return self
        raise PreconditionError("cannot promote a log jet to exact")

    def to_log(self) -> "Jet":
        if self.kind == "log":
            return self
        return Jet(float(self.base_point),
                   tuple(LogReal.from_float(float(v)) for v in self.values), "log")

    def entry_float(self, i: int) -> float:
        v = self.values[i]
        return float(v) if self.kind == "exact" else v.to_float()

    def entry_is_zero(self, i: int) -> bool:
        v = self.values[i]
        return v == 0 if self.kind == "exact" else v.is_zero()


def _check_orders(h_jet: Jet, psi_jet: Jet, j: int) -> None:
    if h_jet.order < j or psi_jet.order < j:
        raise PreconditionError(
            f"order mismatch: need order >= {j}, got h:{h_jet.order} "
            f"psi:{psi_jet.order}")
    if h_jet.kind != psi_jet.kind:
        raise PreconditionError("mixed jet representations are not summed")


def faa_di_bruno(h_jet: Jet, psi_jet: Jet, j: int) -> JetValue:
    """(h o psi)^(j) at psi_jet's base point.

    Exact rationals in, exact rational out; log-magnitude jets are summed with
    the deterministic two-pass signed accumulation.
    """
    if j == 0:
        return h_jet.values[0]
    _check_orders(h_jet, psi_jet, j)
    support = [l for l in range(1, j + 1) if not psi_jet.entry_is_zero(l)]
    if h_jet.kind == "exact":
        total = Fraction(0)
        for mi in _iter_support_partitions(j, support):
            k = mi.k
            hk = h_jet.values[k]
            if hk == 0:
                continue
            prod = Fraction(mi.multinomial(), mi.denominator_power()) * hk
            skip = False
            for l, kl in enumerate(mi.k_vec, start=1):
                if kl:
                    pl = psi_jet.values[l]
                    if pl == 0:
                        skip = True
                        break
                    prod *= pl ** kl
            if not skip:
                total += prod
        return total
    terms = []
    for mi in _iter_support_partitions(j, support):
        k = mi.k
        hk = h_jet.values[k]
        if hk.is_zero():
            continue
        sign = hk.sign
        log_abs = hk.log_abs + math.log(mi.multinomial()) - math.log(mi.denominator_power())
        dead = False
        for l, kl in enumerate(mi.k_vec, start=1):
            if kl:
                pl = psi_jet.values[l]
                if pl.is_zero():
                    dead = True
                    break
                if pl.sign < 0 and kl % 2 == 1:
                    sign = -sign
                log_abs += kl * pl.log_abs
        if not dead:
            terms.append(LogReal.from_log(sign, log_abs))
    return signed_log_sum(terms)


def single_jet_compose(h_jet: Jet, psi_jet: Jet, n: int) -> JetValue:
    """Shortcut for a jet concentrated at one order:

        (h o psi)^(n) = h^(n)(psi(x0)) * (psi'(x0))^n

    valid when h^(k)(psi(x0)) = 0 for every k != n."""
    _check_orders(h_jet, psi_jet, n)
    offending = [k for k in range(h_jet.order + 1)
                 if k != n and not h_jet.entry_is_zero(k)]
    if offending:
        raise PreconditionError(
            f"h jet must vanish except at order {n}; nonzero at {offending}")
    hn = h_jet.values[n]
    p1 = psi_jet.values[1]
    if h_jet.kind == "exact":
        return hn * p1 ** n
    return hn * p1.pow_int(n)


def compose_jet(h_jet: Jet, psi_jet: Jet, J: int) -> Jet:
    """Jet of h o psi at psi_jet's base point, orders 0..J."""
    if h_jet.order < J or psi_jet.order < J:
        raise PreconditionError(f"jets must have order >= {J}")
    values = [h_jet.values[0]]
    for j in range(1, J + 1):
        values.append(faa_di_bruno(h_jet, psi_jet, j))
    return Jet(psi_jet.base_point, tuple(values), h_jet.kind)


# ---------------------------------------------------------------------------
# Summation identities
# ---------------------------------------------------------------------------

def identity_two_power(j: int) -> int:
    """sum over multi-indices of k!/(k_1!...k_j!) equals 2^(j-1), exactly."""
    if not 1 <= j <= 30:
        raise PreconditionError("identity checked for 1 <= j <= 30")
    total = 0
    for mi in iter_partition_multi_indices(j):
        t = math.factorial(mi.k)
        for kl in mi.k_vec:
            if kl:
                t //= math.factorial(kl)
        total += t
    expected = 2 ** (j - 1)
    if total != expected:
        raise AssertionError(f"two-power identity failed at j={j}: {total} != {expected}")
    return total


def identity_lah(j: int) -> int:
    """sum over multi-indices of j!/(k_1!...k_j!) equals the Lah-number sum
    sum_k C(j-1, k-1) j!/k!; both sides computed exactly and compared."""
    if not 1 <= j <= 30:
        raise PreconditionError("identity checked for 1 <= j <= 30")
    lhs = sum(mi.multinomial() for mi in iter_partition_multi_indices(j))
    rhs = sum(math.comb(j - 1, k - 1) * math.factorial(j) // math.factorial(k)
              for k in range(1, j + 1))
    if lhs != rhs:
        raise AssertionError(f"Lah identity failed at j={j}: {lhs} != {rhs}")
    return lhs

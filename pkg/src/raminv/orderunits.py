"""The unit group (O/NO)* for O = Z[theta], theta = (1 + sqrt(-n))/2.

Everything here is brute force over the N^2 residues s*theta + t; for
N = 72 that is 5184 elements, which is cheap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field


@dataclass(frozen=True)
class OrderElem:
    """s*theta + t with theta^2 - theta + (1+n)/4 = 0."""

    s: int
    t: int
    n: int

    @property
    def C(self) -> int:
        return (1 + self.n) // 4

    def norm(self) -> int:
        # t^2 - B s t + C s^2 with B = -1
        return self.t * self.t + self.s * self.t + self.C * self.s * self.s

    def mul(self, other: OrderElem, N: int) -> OrderElem:
        # theta^2 = theta - C
        s1, t1, s2, t2 = self.s, self.t, other.s, other.t
        ss = s1 * s2
        return OrderElem((s1 * t2 + t1 * s2 + ss) % N, (t1 * t2 - self.C * ss) % N, self.n)

    def reduce(self, N: int) -> OrderElem:
        return OrderElem(self.s % N, self.t % N, self.n)

    def __str__(self):
        return f"{self.s}t+{self.t}"


def parse_elem(text: str, n: int) -> OrderElem:
    """Parse '5t+7', '5θ+7', '3theta+8', '7', '-t+1'."""
    s = text.replace(" ", "").replace("theta", "t").replace("θ", "t")
    if "t" not in s:
        return OrderElem(0, int(s), n)
    head, _, tail = s.partition("t")
    if head in ("", "+"):
        sv = 1
    elif head == "-":
        sv = -1
    else:
        sv = int(head)
    tv = int(tail) if tail else 0
    return OrderElem(sv, tv, n)


def is_unit(x: OrderElem, N: int) -> bool:
    return math.gcd(x.norm(), N) == 1


def elem_pow(x: OrderElem, k: int, N: int) -> OrderElem:
    result = OrderElem(0, 1, x.n)
    base = x.reduce(N)
    while k:
        if k & 1:
            result = result.mul(base, N)
        base = base.mul(base, N)
        k >>= 1
    return result


def element_order(x: OrderElem, N: int) -> int:
    if not is_unit(x, N):
        raise ValueError(f"{x} is not a unit modulo {N}")
    one = OrderElem(0, 1 % N, x.n)
    y = x.reduce(N)
    k = 1
    while y != one:
        y = y.mul(x, N)
        k += 1
    return k


def units(N: int, n: int) -> list[OrderElem]:
    return [OrderElem(s, t, n) for s in range(N) for t in range(N) if is_unit(OrderElem(s, t, n), N)]


def crt_lift(x9: OrderElem, x8: OrderElem) -> OrderElem:
    """Combine residues mod 9 and mod 8 into the residue mod 72."""

    def crt(r9, r8):
        # 72 = 9*8; 8*8 = 64 = 1 mod 9, 9*1 = 9 = 1 mod 8
        return (r9 * 64 + r8 * 9) % 72

    return OrderElem(crt(x9.s, x8.s), crt(x9.t, x8.t), x9.n)


def closure(gens: list[OrderElem], N: int) -> set[OrderElem]:
    """Subgroup generated by gens, by worklist saturation."""
    one = OrderElem(0, 1 % N, gens[0].n if gens else 0)
    seen = {one}
    work = [one]
    gens = [g.reduce(N) for g in gens]
    while work:
        x = work.pop()
        for g in gens:
            y = x.mul(g, N)
            if y not in seen:
                seen.add(y)
                work.append(y)
    return seen


def invariant_factors(N: int, n: int) -> list[int]:
    """Invariant factors d1 | d2 | ... of the abelian group (O/NO)*.

    Read off from the counts #{x : x^k = 1}: for each prime p the p-part is
    determined by the numbers of elements killed by p^j.
    """
    us = units(N, n)
    order = len(us)
    result_parts: dict[int, list[int]] = {}
    for p in _prime_factors(order):
        # r_j = log_p #{x : x^(p^j) = 1}; the number of cyclic factors of
        # order >= p^j is r_j - r_{j-1}
        exps = []
        j = 0
        prev = 0
        while True:
            j += 1
            cnt = sum(1 for x in us if elem_pow(x, p**j, N) == OrderElem(0, 1 % N, n))
            r = round(math.log(cnt, p))
            exps.append(r - prev)
            if cnt == p ** _valuation(order, p):
                break
            prev = r
        # exps[j-1] = number of factors with order >= p^j
        counts = []
        for j in range(len(exps)):
            ge = exps[j]
            ge_next = exps[j + 1] if j + 1 < len(exps) else 0
            counts.extend([p ** (j + 1)] * (ge - ge_next))
        result_parts[p] = sorted(counts, reverse=True)
    # assemble invariant factors from the largest down
    k = max((len(v) for v in result_parts.values()), default=0)
    factors = []
    for i in range(k):
        f = 1
        for v in result_parts.values():
            if i < len(v):
                f *= v[i]
        factors.append(f)
    return sorted(factors)


def _valuation(m: int, p: int) -> int:
    v = 0
    while m % p == 0:
        m //= p
        v += 1
    return v


def _prime_factors(m: int) -> list[int]:
    out = []
    p = 2
    while p * p <= m:
        if m % p == 0:
            out.append(p)
            while m % p == 0:
                m //= p
        p += 1
    if m > 1:
        out.append(m)
    return out


def primary_decomposition(factors: list[int]) -> list[int]:
    """Elementary divisors (prime powers) of the group with the given invariant factors."""
    out = []
    for f in factors:
        for p in _prime_factors(f):
            out.append(p ** _valuation(f, p))
    return sorted(out)


def iso_label(factors: list[int]) -> str:
    return " x ".join(f"Z/{f}" for f in sorted(factors, reverse=True))


def same_group(a: list[int], b: list[int]) -> bool:
    return primary_decomposition([x for x in a if x > 1]) == primary_decomposition([x for x in b if x > 1])


@dataclass
class UnitGroupDescription:
    N: int
    n: int
    generators: list[OrderElem]
    orders: list[int]
    iso_type: list[int] = field(default_factory=list)
    group_order: int = 0

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "n": self.n,
            "group_order": self.group_order,
            "generators": [str(g) for g in self.generators],
            "orders": self.orders,
            "invariant_factors": self.iso_type,
            "iso_type": iso_label(self.iso_type),
        }


def search_generators(N: int, n: int) -> list[OrderElem]:
    """Greedy search: take an element of maximal order, discard the subgroup
    generated so far, repeat until the whole group is covered."""
    us = units(N, n)
    gens: list[OrderElem] = []
    covered = {OrderElem(0, 1 % N, n)}
    covered_order = 1
    orders = {x: element_order(x, N) for x in us}
    ranked = sorted(us, key=lambda x: (-orders[x], x.s, x.t))
    while covered_order < len(us):
        best = None
        for x in ranked:
            if x in covered:
                continue
            # pick an element whose cyclic subgroup meets the covered part trivially
            cyc = closure([x], N)
            if len(cyc & covered) == 1:
                best = x
                break
        if best is None:
            # no independent element left; fall back to the largest uncovered
            best = next(x for x in ranked if x not in covered)
        gens.append(best)
        covered = closure(gens, N)
        covered_order = len(covered)
    return gens


def group_structure(N: int, n: int) -> UnitGroupDescription:
    """Generators, orders and invariant factors of (O/NO)*.

    For N = 72 the generators are found separately modulo 9 and 8 and lifted
    by CRT, mirroring the decomposition (O/72O)* = (O/9O)* x (O/8O)*.
    """
    if N == 72:
        g9 = search_generators(9, n)
        g8 = search_generators(8, n)
        one9 = OrderElem(0, 1, n)
        one8 = OrderElem(0, 1, n)
        gens = [crt_lift(g, one8) for g in g9] + [crt_lift(one9, g) for g in g8]
    else:
        gens = search_generators(N, n)
    us = units(N, n)
    return UnitGroupDescription(
        N=N,
        n=n,
        generators=gens,
        orders=[element_order(g, N) for g in gens],
        iso_type=invariant_factors(N, n),
        group_order=len(us),
    )


def table_generators(n: int) -> list[OrderElem]:
    """The five generators 5t+7, 6t+7, 7t+7, 4t+7, 4t+1 of (O/72O)* for n = 19 mod 24."""
    if n % 24 != 19:
        raise ValueError("these generators are stated for n = 19 mod 24")
    return [OrderElem(s, t, n) for s, t in ((5, 7), (6, 7), (7, 7), (4, 7), (4, 1))]


TABLE_GENERATOR_ORDERS = (24, 3, 12, 2, 2)


def check_printed_structure(factors: list[int], printed: list[list[int]]) -> list[bool]:
    """Which of the printed decompositions describe the same group as `factors`."""
    return [same_group(factors, p) for p in printed]

"""Partition and multipartition combinatorics.

Partitions are plain tuples of weakly decreasing positive integers; the empty
partition is ``()``.  Colored partitions are tuples of (size, color) pairs in
canonical order: sizes weakly decreasing, and colors weakly decreasing within
a run of equal sizes.  Everything here is a pure function over these values.

Covers enumeration, ell-cores via the abacus (first-column beta-numbers on
ell runners), class-regular sets, block labels, the CUT/INFL/RED/Sort
operators, p-adic splittings, and the digit-constrained sets Psi^{p,r}_a.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product as _cartesian
from typing import Iterable, Iterator

Partition = tuple  # tuple[int, ...], weakly decreasing, positive entries
ColoredPartition = tuple  # tuple[tuple[int, int], ...] in canonical order


def partition(parts: Iterable[int]) -> Partition:
    """Validate and canonicalize an iterable of parts into a Partition."""
    t = tuple(sorted((int(p) for p in parts), reverse=True))
    if t and t[-1] < 1:
        raise ValueError(f"parts must be positive, got {t}")
    return t


def size(lam: Partition) -> int:
    return sum(lam)


def mult(lam: Partition, k: int) -> int:
    """m_k(lam): the number of parts equal to k."""
    return sum(1 for p in lam if p == k)


def mults(lam: Partition) -> dict[int, int]:
    out: dict[int, int] = {}
    for p in lam:
        out[p] = out.get(p, 0) + 1
    return out


def _gen_partitions(n: int, largest: int) -> Iterator[Partition]:
    if n == 0:
        yield ()
        return
    for k in range(min(n, largest), 0, -1):
        for rest in _gen_partitions(n - k, k):
            yield (k,) + rest


@lru_cache(maxsize=None)
def enum_partitions(n: int) -> tuple[Partition, ...]:
    """All partitions of n in descending lexicographic order."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return tuple(_gen_partitions(n, n))


@lru_cache(maxsize=None)
def partition_count(n: int) -> int:
    return u_count(1, n)


@lru_cache(maxsize=None)
def enum_class_regular(n: int, ell: int) -> tuple[Partition, ...]:
    """CRP_ell(n): partitions of n with no part divisible by ell."""
    if ell < 2:
        raise ValueError("ell must be >= 2")
    return tuple(lam for lam in enum_partitions(n) if all(p % ell for p in lam))


@lru_cache(maxsize=None)
def u_count(m: int, n: int) -> int:
    """u(m, n) = |Par_m(n)|, the number of m-multipartitions of n.

    Computed by exact integer dynamic programming on the generating function
    prod_k (1 - q^k)^(-m).  Note u(0,0) = 1 and u(0,n) = 0 for n >= 1.
    """
    if m < 0 or n < 0:
        raise ValueError("u_count needs nonnegative arguments")
    dp = [1] + [0] * n
    for _ in range(m):
        for k in range(1, n + 1):
            for t in range(k, n + 1):
                dp[t] += dp[t - k]
    return dp[n]


def multipartitions(m: int, n: int) -> Iterator[tuple[Partition, ...]]:
    """All m-tuples of partitions with total size n."""
    if m == 0:
        if n == 0:
            yield ()
        return
    for k in range(n + 1):
        for lam in enum_partitions(k):
            for rest in multipartitions(m - 1, n - k):
                yield (lam,) + rest


# ---------------------------------------------------------------------------
# abacus: beta-numbers, cores, blocks
# ---------------------------------------------------------------------------


def _beta_numbers(lam: Partition) -> list[int]:
    # first-column hook lengths: strictly decreasing nonnegative integers
    L = len(lam)
    return [lam[i] + (L - 1 - i) for i in range(L)]


def _from_beta(beta: list[int]) -> Partition:
    beta = sorted(beta, reverse=True)
    L = len(beta)
    return tuple(p for p in (beta[i] - (L - 1 - i) for i in range(L)) if p > 0)


def ell_core(lam: Partition, ell: int) -> Partition:
    """The ell-core: push all beads down their runners on an ell-runner abacus.

    Order-independence of rim-hook removal is structural in this encoding.
    """
    if ell < 2:
        raise ValueError("ell must be >= 2")
    runners: list[int] = [0] * ell
    for b in _beta_numbers(lam):
        runners[b % ell] += 1
    beta = [r + ell * pos for r in range(ell) for pos in range(runners[r])]
    return _from_beta(beta)


def is_ell_core(lam: Partition, ell: int) -> bool:
    return ell_core(lam, ell) == lam


def has_rim_hook(lam: Partition, ell: int) -> bool:
    """True iff lam has a removable rim ell-hook (a bead can slide down)."""
    beta = set(_beta_numbers(lam))
    return any(b >= ell and (b - ell) not in beta for b in beta)


@dataclass(frozen=True)
class BlockLabel:
    """A block (rho, d): an ell-core rho and weight d with |rho| + ell*d = n."""

    core: Partition
    weight: int
    ell: int

    def __post_init__(self):
        if not is_ell_core(self.core, self.ell):
            raise ValueError(f"{self.core} is not a {self.ell}-core")
        if self.weight < 0:
            raise ValueError("weight must be nonnegative")

    @property
    def n(self) -> int:
        return size(self.core) + self.ell * self.weight

    def to_json(self) -> dict:
        return {"core": list(self.core), "weight": self.weight, "ell": self.ell}


@lru_cache(maxsize=None)
def blocks(n: int, ell: int) -> tuple[BlockLabel, ...]:
    """Bl_ell(n): all (rho, d) with rho an ell-core and |rho| + ell*d = n."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    out = []
    for d in range(n // ell + 1):
        for rho in enum_partitions(n - ell * d):
            if is_ell_core(rho, ell):
                out.append(BlockLabel(rho, d, ell))
    return tuple(out)


def block_of(lam: Partition, ell: int) -> BlockLabel:
    rho = ell_core(lam, ell)
    return BlockLabel(rho, (size(lam) - size(rho)) // ell, ell)


def residue_content(b: BlockLabel, p: int) -> dict[int, int]:
    """The residue multiset beta_{rho,d}: contents of rho's boxes mod p,
    plus d copies of every residue."""
    if b.ell != p:
        raise ValueError("residue modulus must match the block's ell")
    out = {r: b.weight for r in range(p)}
    for i, row in enumerate(b.core, start=1):
        for j in range(1, row + 1):
            out[(j - i) % p] += 1
    return out


# ---------------------------------------------------------------------------
# the CUT / INFL / RED / Sort operators and p-adic splittings
# ---------------------------------------------------------------------------


def cut(lam: Partition, d: int) -> Partition:
    """Delete every part divisible by d."""
    if d < 1:
        raise ValueError("d must be positive")
    return tuple(p for p in lam if p % d)


def infl(lam: Partition, d: int) -> Partition:
    """Multiply every part by d (length preserved)."""
    if d < 1:
        raise ValueError("d must be positive")
    return tuple(p * d for p in lam)


def red(lam: Partition, ell: int) -> Partition:
    """Floor-divide every part multiplicity by ell."""
    if ell < 2:
        raise ValueError("ell must be >= 2")
    out = []
    for k, m in sorted(mults(lam).items(), reverse=True):
        out.extend([k] * (m // ell))
    return tuple(out)


def sort_merge(seq: Iterable[Partition]) -> Partition:
    """Concatenate part multisets and re-sort into a single partition."""
    out: list[int] = []
    for lam in seq:
        out.extend(lam)
    return tuple(sorted(out, reverse=True))


def p_adic_split(n: int, p: int) -> tuple[int, int]:
    """Write n = a * p^v with p not dividing a; returns (a, v)."""
    if n < 1:
        raise ValueError("n must be positive")
    if p < 2:
        raise ValueError("p must be >= 2")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return n, v


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def prime_divisors(n: int) -> tuple[int, ...]:
    """PRS(n): the set of prime divisors of n (empty for n = 1)."""
    if n < 1:
        raise ValueError("n must be positive")
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return tuple(out)


@lru_cache(maxsize=None)
def psi_set(p: int, r: int, a: int) -> tuple[Partition, ...]:
    """Psi^{p,r}_a: partitions of a into parts p^h with 0 <= h < r,
    subject to the base-p digit inequalities of its definition.

    Writing a = sum a_i p^i with 0 <= a_j < p for j < r-1 and a_{r-1} free,
    a candidate nu must satisfy, for every 0 <= k < r,
    sum_{h>=k} a_h p^{h-k} >= sum_{h>=k} m_{p^h}(nu) p^{h-k}, with equality
    at k = 0.  (Given the k=0 equality the inequalities are automatic, which
    recovers the characterization as all of CRP_{p^r}(a) with parts in p^N.)
    """
    if not is_prime(p):
        raise ValueError(f"p must be prime, got {p}")
    if r < 1 or a < 1:
        raise ValueError("need r >= 1 and a >= 1")
    digits = []
    rest = a
    for _ in range(r - 1):
        digits.append(rest % p)
        rest //= p
    digits.append(rest)  # top digit unbounded

    powers = [p**h for h in range(r)]
    out = []
    for counts in _digit_counts(a, powers):
        ok = all(
            sum(digits[h] * p ** (h - k) for h in range(k, r))
            >= sum(counts[h] * p ** (h - k) for h in range(k, r))
            for k in range(r)
        )
        if ok and sum(c * q for c, q in zip(counts, powers)) == a:
            lam = []
            for h in range(r - 1, -1, -1):
                lam.extend([powers[h]] * counts[h])
            out.append(tuple(lam))
    out.sort(reverse=True)
    return tuple(out)


def _digit_counts(a: int, powers: list[int]) -> Iterator[tuple[int, ...]]:
    # all ways to write a as sum counts[h] * powers[h]
    if len(powers) == 1:
        if a % powers[0] == 0:
            yield (a // powers[0],)
        return
    top = powers[-1]
    for c in range(a // top + 1):
        for rest in _digit_counts(a - c * top, powers[:-1]):
            yield rest + (c,)


# ---------------------------------------------------------------------------
# colored partitions
# ---------------------------------------------------------------------------


def colored_partition(pairs: Iterable[tuple[int, int]]) -> ColoredPartition:
    """Canonicalize (size, color) pairs: sizes descending, colors descending
    within equal sizes."""
    return tuple(sorted(((int(s), int(c)) for s, c in pairs), key=lambda t: (-t[0], -t[1])))


def shape(cp: ColoredPartition) -> Partition:
    return tuple(s for s, _ in cp)


def merge_colored(a: ColoredPartition, b: ColoredPartition) -> ColoredPartition:
    return tuple(sorted(a + b, key=lambda t: (-t[0], -t[1])))


def colorings(lam: Partition, colors: int) -> tuple[ColoredPartition, ...]:
    """All canonical colorings of lam, in descending lexicographic order on
    the color vector."""
    if colors < 1:
        raise ValueError("need at least one color")
    out: list[ColoredPartition] = []

    def assign(i: int, prev_size: int, prev_color: int, acc: tuple):
        if i == len(lam):
            out.append(acc)
            return
        s = lam[i]
        top = prev_color if s == prev_size else colors - 1
        for c in range(top, -1, -1):
            assign(i + 1, s, c, acc + ((s, c),))

    assign(0, 0, -1, ())
    return tuple(out)


@lru_cache(maxsize=None)
def enum_colored(d: int, colors: int) -> tuple[ColoredPartition, ...]:
    """Omega_d: all colored partitions of d, partitions in descending
    lexicographic order and color vectors descending within each partition.

    |enum_colored(d, c)| = u_count(c, d).
    """
    if d < 0:
        raise ValueError("d must be nonnegative")
    out: list[ColoredPartition] = []
    for lam in enum_partitions(d):
        out.extend(colorings(lam, colors))
    return tuple(out)


def group_by_size(cp: ColoredPartition) -> dict[int, tuple[int, ...]]:
    """Colors of the parts of each size, in the canonical (descending) order."""
    out: dict[int, list[int]] = {}
    for s, c in cp:
        out.setdefault(s, []).append(c)
    return {s: tuple(cs) for s, cs in out.items()}


def refinements_by_parts(lam: Partition) -> Iterator[tuple[Partition, ...]]:
    """One partition of each part of lam (the per-part refinement choices)."""
    return _cartesian(*(enum_partitions(p) for p in lam))

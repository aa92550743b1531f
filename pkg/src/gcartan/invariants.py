"""Closed-form graded Cartan invariants and the multiset identities that
support them.

Covers the ungraded block invariants I_{p,r} and r_ell, their graded
refinements I^v_{p,r} and r^v_{p,r}, the product invariant Q_ell, the
conjectured right-hand multisets, and independent verifiers for every
identity tying them together.  Verifiers always build both sides by direct
enumeration, sharing nothing beyond the partition primitives.

Boundary convention, used throughout and forced by the proven identities
(e.g. the Bessenrodt-Hill multiset identity at ell=3, n=3): the multiset
attached to a weight-d block includes the boundary term s=0, contributing
u(ell-2, d) unit invariants.  With it every multiset has cardinality equal
to the matrix dimension u(ell-1, d) and the n=0 degenerate cases hold as
stated; without it the proven identities themselves fail.
"""

from __future__ import annotations

import math
import time
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterator

from . import partitions as pt
from . import snf as snf_mod
from .gram import cartan_graded, gram_det, gram_field_invariants
from .qcartan import exponent_N, type_a
from .qlaurent import ONE, LaurentPoly, QProduct, quantum_int


# ---------------------------------------------------------------------------
# closed-form invariants
# ---------------------------------------------------------------------------


def hill_invariant(p: int, r: int, lam: pt.Partition) -> int:
    """I_{p,r}(lam): the power of p with
    log_p = sum over n not in p^r Z of ((r - nu_p(n)) m_n + sum_t floor(m_n / p^t))."""
    if not pt.is_prime(p):
        raise ValueError(f"p must be prime, got {p}")
    if r < 1:
        raise ValueError("r must be >= 1")
    ell = p**r
    e = 0
    for n, m in pt.mults(lam).items():
        if n % ell == 0:
            continue
        e += (r - pt.p_adic_split(n, p)[1]) * m
        t = p
        while t <= m:
            e += m // t
            t *= p
    return p**e


def _graded_hill_factors(p: int, r: int, lam: pt.Partition) -> tuple[tuple[int, int], ...]:
    # the bracket parameters (n, s) with I^v = prod [n]_s
    ell = p**r
    out = []
    for n, m in sorted(pt.mults(lam).items()):
        if n % ell == 0:
            continue
        nun = pt.p_adic_split(n, p)[1]
        for k in range(1, m + 1):
            ak, nuk = pt.p_adic_split(k, p)
            out.append((p ** (r + nuk - nun), ak * p**nun))
    return tuple(out)


def graded_hill(p: int, r: int, lam: pt.Partition) -> LaurentPoly:
    """I^v_{p,r}(lam) = prod over n not in p^r Z, 1 <= k <= m_n(lam) of
    [p^{r + nu_p(k) - nu_p(n)}]_{a_p(k) p^{nu_p(n)}}.  At v=1 this is I_{p,r}."""
    if not pt.is_prime(p):
        raise ValueError(f"p must be prime, got {p}")
    if r < 1:
        raise ValueError("r must be >= 1")
    out = ONE
    for n, s in _graded_hill_factors(p, r, lam):
        out = out * quantum_int(n, s)
    return out


def kor_invariant(ell: int, lam: pt.Partition) -> int:
    """r_ell(lam) = prod over k not in ell*Z of
    (ell/gcd(ell,k))^floor(m_k/ell) * floor(m_k/ell)!_{PRS(ell/gcd(ell,k))}."""
    if ell < 2:
        raise ValueError("ell must be >= 2")
    out = 1
    for k, m in pt.mults(lam).items():
        if k % ell == 0:
            continue
        f = m // ell
        if f:
            base = ell // math.gcd(ell, k)
            out *= base**f
            for q in pt.prime_divisors(base):
                # Legendre's formula for nu_q(f!)
                t = q
                while t <= f:
                    out *= q ** (f // t)
                    t *= q
    return out


def graded_kor(p: int, r: int, lam: pt.Partition) -> LaurentPoly:
    """r^v_{p,r}(lam) = prod over k not in ell*Z, 1 <= t <= floor(m_k/ell) of
    [p^{r - nu_p(k) + nu_p(t)}]_{a_p(t) p^{nu_p(k)}} with ell = p^r.

    The k-product is restricted to k not divisible by ell (on class-regular
    partitions, the only ones the conjecture quantifies over, there are no
    such parts anyway); with this reading the identity
    r^v_{p,r} = I^v_{p,r} o RED_ell holds for every partition.
    """
    if not pt.is_prime(p):
        raise ValueError(f"p must be prime, got {p}")
    if r < 1:
        raise ValueError("r must be >= 1")
    ell = p**r
    out = ONE
    for k, m in sorted(pt.mults(lam).items()):
        if k % ell == 0:
            continue
        nuk = pt.p_adic_split(k, p)[1]
        for t in range(1, m // ell + 1):
            at, nut = pt.p_adic_split(t, p)
            out = out * quantum_int(p ** (r - nuk + nut), at * p**nuk)
    return out


def asy_Q(ell: int, lam: pt.Partition) -> LaurentPoly:
    """Q_ell(lam) = prod over n not in ell*Z, 1 <= k <= m_n(lam) of
    [ell^{1 + nu_ell(k)}]_{a_ell(k)}."""
    if ell < 2:
        raise ValueError("ell must be >= 2")
    out = ONE
    for n, m in sorted(pt.mults(lam).items()):
        if n % ell == 0:
            continue
        for k in range(1, m + 1):
            ak, nuk = pt.p_adic_split(k, ell)
            out = out * quantum_int(ell ** (1 + nuk), ak)
    return out


def composite_hill(ell: int, lam: pt.Partition) -> int:
    """I_ell(lam) = prod over prime divisors p of ell of I_{p, nu_p(ell)}(lam)."""
    out = 1
    for p in pt.prime_divisors(ell):
        out *= hill_invariant(p, pt.p_adic_split(ell, p)[1], lam)
    return out


@dataclass(frozen=True)
class GradedInvariant:
    """A computed invariant with its provenance, for structured output."""

    value: object  # LaurentPoly or int
    provenance: str  # Hill | GradedHill | KOR | GradedKOR | ASY
    params: tuple
    source: pt.Partition

    def to_json(self) -> dict:
        v = self.value.to_json() if isinstance(self.value, LaurentPoly) else str(self.value)
        return {
            "value": v,
            "provenance": self.provenance,
            "params": list(self.params),
            "partition": list(self.source),
        }


# ---------------------------------------------------------------------------
# right-hand multisets (with the s=0 boundary term)
# ---------------------------------------------------------------------------


def _weighted_partitions(ell: int, d: int) -> Iterator[tuple[pt.Partition, int]]:
    """(lam, multiplicity u(ell-2, d-s)) over 0 <= s <= d, lam in Par(s)."""
    for s in range(d + 1):
        mult = pt.u_count(ell - 2, d - s)
        if mult:
            for lam in pt.enum_partitions(s):
                yield lam, mult


def graded_hill_values(p: int, r: int, d: int) -> list[LaurentPoly]:
    """The conjectured diagonal entries for C^v_{p^r, d}, with multiplicity."""
    ell = p**r
    out = []
    for lam, mult in _weighted_partitions(ell, d):
        out.extend([graded_hill(p, r, lam)] * mult)
    return out


def hill_values(p: int, r: int, d: int) -> list[int]:
    ell = p**r
    out = []
    for lam, mult in _weighted_partitions(ell, d):
        out.extend([hill_invariant(p, r, lam)] * mult)
    return out


def bracket_product_values(ell: int, d: int) -> list[LaurentPoly]:
    """The theorem-backed field-ring diagonal: prod_i [ell]_i^{m_i(lam)}."""
    out = []
    for lam, mult in _weighted_partitions(ell, d):
        v = ONE
        for i, m in pt.mults(lam).items():
            v = v * quantum_int(ell, i) ** m
        out.extend([v] * mult)
    return out


def rhs_multiset(kind: str, p: int, r: int, d: int) -> snf_mod.InvariantMultiset:
    """The conjectured invariant multiset in canonical form.

    Cardinality equals the matrix dimension u(p^r - 1, d); the s=0 boundary
    contributes u(p^r - 2, d) unit invariants.
    """
    if kind == "Hill":
        return snf_mod.InvariantMultiset.integers(hill_values(p, r, d))
    if kind == "GradedHill":
        return snf_mod.InvariantMultiset.polys(graded_hill_values(p, r, d), snf_mod.RING_ZLAURENT)
    raise ValueError(f"unknown multiset kind {kind!r}")


# ---------------------------------------------------------------------------
# identity verifiers
# ---------------------------------------------------------------------------


def _first_diff(a: Counter, b: Counter):
    for k in sorted(set(a) | set(b), key=repr):
        if a[k] != b[k]:
            return k, a[k], b[k]
    return None


def verify_conjcheck(p: int, r: int, dmax: int, explain: bool = False):
    """prod_s [ell]_s^{N_{ell,d,s}} = prod_{s,lam} I^v_{p,r}(lam)^{u(ell-2,d-s)}
    for every d <= dmax, compared exactly via canonical cyclotomic factorization
    (direct expansion is infeasible at the required exponents)."""
    ell = p**r
    for d in range(dmax + 1):
        lhs = QProduct()
        for s in range(1, d + 1):
            lhs.mul_bracket(ell, s, exponent_N(ell - 1, d, s))
        rhs = QProduct()
        for lam, mult in _weighted_partitions(ell, d):
            for n, s in _graded_hill_factors(p, r, lam):
                rhs.mul_bracket(n, s, mult)
        if lhs != rhs:
            return (False, ("d", d, lhs.key(), rhs.key())) if explain else False
    return (True, None) if explain else True


def verify_tsaigo(p: int, r: int, d: int, u: int, explain: bool = False):
    """The valuation multiset identity: over lam in Par(d), parts n not
    divisible by p^r and 1 <= k <= m_n(lam) with a_p(k) = u, the multisets
    {nu_p(n)} and {nu_p(k) % r} coincide.

    Parts divisible by p^r are excluded: the proposition's proof factors
    through the CUT_{p^r} multiset (which removes them), and the identity is
    false without the exclusion.
    """
    if not pt.is_prime(p):
        raise ValueError("p must be prime")
    if u < 1 or u % p == 0:
        raise ValueError("u must be a positive integer not divisible by p")
    ell = p**r
    left: Counter = Counter()
    right: Counter = Counter()
    for lam in pt.enum_partitions(d):
        for n, m in pt.mults(lam).items():
            if n % ell == 0:
                continue
            nun = pt.p_adic_split(n, p)[1]
            for k in range(1, m + 1):
                ak, nuk = pt.p_adic_split(k, p)
                if ak == u:
                    left[nun] += 1
                    right[nuk % r] += 1
    ok = left == right
    return (ok, None if ok else _first_diff(left, right)) if explain else ok


def verify_saigo2(ell: int, n: int, explain: bool = False):
    """CUT images over all blocks match RED images of class-regular partitions."""
    left: Counter = Counter()
    right: Counter = Counter()
    for b in pt.blocks(n, ell):
        for lam, mult in _weighted_partitions(ell, b.weight):
            left[pt.cut(lam, ell)] += mult
    for lam in pt.enum_class_regular(n, ell):
        right[pt.red(lam, ell)] += 1
    ok = left == right
    return (ok, None if ok else _first_diff(left, right)) if explain else ok


def verify_bhmulti(ell: int, n: int, explain: bool = False):
    """Bessenrodt-Hill: {r_ell(lam) : lam class-regular} equals the blockwise
    composite Hill multiset."""
    left: Counter = Counter()
    right: Counter = Counter()
    for lam in pt.enum_class_regular(n, ell):
        left[kor_invariant(ell, lam)] += 1
    for b in pt.blocks(n, ell):
        for lam, mult in _weighted_partitions(ell, b.weight):
            right[composite_hill(ell, lam)] += mult
    ok = left == right
    return (ok, None if ok else _first_diff(left, right)) if explain else ok


def verify_conjequiv(p: int, r: int, n: int, explain: bool = False):
    """The graded multiset identity: blockwise I^v values equal
    {r^v_{p,r}(lam) : lam class-regular}, as exact Laurent polynomials."""
    ell = p**r
    left: Counter = Counter()
    right: Counter = Counter()
    for b in pt.blocks(n, ell):
        for lam, mult in _weighted_partitions(ell, b.weight):
            left[graded_hill(p, r, lam)] += mult
    for lam in pt.enum_class_regular(n, ell):
        right[graded_kor(p, r, lam)] += 1
    ok = left == right
    return (ok, None if ok else _first_diff(left, right)) if explain else ok


# ---------------------------------------------------------------------------
# decomposition of the CUT multiset into inflated Psi blocks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BunkaitoComponent:
    weight: int  # e, with multiplicity p(e)
    pairs: tuple  # ((d_j, a_j), ...) with distinct p'-parts d_j
    multiplicity: int


@dataclass(frozen=True)
class BunkaitoReport:
    p: int
    r: int
    d: int
    components: tuple[BunkaitoComponent, ...]
    total: int
    verified: bool

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "r": self.r,
            "d": self.d,
            "components": [
                {"e": c.weight, "pairs": [list(x) for x in c.pairs], "mult": c.multiplicity}
                for c in self.components
            ],
            "total": self.total,
            "verified": self.verified,
        }


def _types(m: int, p: int, min_d: int = 1) -> Iterator[tuple[tuple[int, int], ...]]:
    # sets of (d_j, a_j) with distinct p-coprime d_j >= min_d and sum d_j a_j = m
    if m == 0:
        yield ()
        return
    for dj in range(min_d, m + 1):
        if dj % p == 0:
            continue
        for aj in range(1, m // dj + 1):
            for rest in _types(m - dj * aj, p, dj + 1):
                yield ((dj, aj),) + rest


def bunkaito_decompose(p: int, r: int, d: int) -> BunkaitoReport:
    """Decompose S^{p,r}_d = {CUT_{p^r}(lam) != empty : lam in Par(d)} as a
    disjoint union of Sort(prod_j INFL_{d_j}(Psi^{p,r}_{a_j})) blocks and
    verify the multiset equality against the direct construction."""
    if d < 1:
        raise ValueError("d must be positive")
    ell = p**r
    direct: Counter = Counter()
    for lam in pt.enum_partitions(d):
        c = pt.cut(lam, ell)
        if c:
            direct[c] += 1

    components = []
    rebuilt: Counter = Counter()
    e = 0
    while d - ell * e >= 1:
        m = d - ell * e
        mult = pt.partition_count(e)
        for pairs in _types(m, p):
            components.append(BunkaitoComponent(e, pairs, mult))
            # expand Sort(prod INFL_{d_j}(Psi_{a_j})), checking disjoint support
            batch = [()]
            seen_values: set[int] = set()
            for dj, aj in pairs:
                block = [pt.infl(x, dj) for x in pt.psi_set(p, r, aj)]
                vals = {v for lamb in block for v in lamb}
                if vals & seen_values:
                    raise AssertionError("inflated Psi blocks are not part-disjoint")
                seen_values |= vals
                batch = [pt.sort_merge((acc, b)) for acc in batch for b in block]
            for lam in batch:
                rebuilt[lam] += mult
        e += 1

    return BunkaitoReport(
        p, r, d, tuple(components), sum(direct.values()), rebuilt == direct
    )


# ---------------------------------------------------------------------------
# the layered conjecture report
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LayerResult:
    name: str
    status: str  # VERIFIED | CONSISTENT | INCONCLUSIVE | FAILED
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"name": self.name, "status": self.status, **self.details}


@dataclass(frozen=True)
class ConjectureReport:
    p: int
    r: int
    d: int
    layers: tuple[LayerResult, ...]
    elapsed_ms: int

    def layer(self, name: str) -> LayerResult:
        for lay in self.layers:
            if lay.name == name:
                return lay
        raise KeyError(name)

    @property
    def ok(self) -> bool:
        return all(lay.status != "FAILED" for lay in self.layers)

    def to_json(self) -> dict:
        return {
            "conjecture": "graded-invariant-factors",
            "params": {"p": self.p, "r": self.r, "d": self.d, "ell": self.p**self.r},
            "layers": [lay.to_json() for lay in self.layers],
            "elapsed_ms": self.elapsed_ms,
        }


def conjecture_report(p: int, r: int, d: int, budget: int = 5000, workers: int = 1) -> ConjectureReport:
    """Run the layered verification of the graded invariant-factor conjecture
    for C^v_{p^r, d}.

    Layer 1 (theorem): the determinant of the Gram matrix equals the product
    of the conjectured invariants.  Layer 2: invariant factors over
    Q[v,v^-1]; its bracket-product sub-check is theorem-backed, the
    I^v-multiset check is the conjecture's field-ring shadow.  Layer 3:
    invariant factors at v=1 against the ungraded multiset (a theorem when
    r <= p).  Layer 4: heuristic diagonalization over Z[v,v^-1]; Success with
    a matching multiset verifies the conjecture at this size, anything else
    is inconclusive by design.
    """
    start = time.monotonic()
    ell = p**r
    gm = cartan_graded(ell, d, workers=workers)
    graded_rhs = graded_hill_values(p, r, d)
    layers = []

    det = gram_det(type_a(ell), d, workers=workers)
    prod = ONE
    for val in graded_rhs:
        prod = prod * val
    layers.append(
        LayerResult(
            "determinant",
            "VERIFIED" if det == prod else "FAILED",
            {"theorem": True},
        )
    )

    snf_c = gram_field_invariants(type_a(ell), d, workers=workers)
    theorem_ok = snf_mod.multiset_equal_up_to_units(
        snf_c, snf_mod.snf_of_diagonal(bracket_product_values(ell, d))
    )
    conj_ok = snf_mod.multiset_equal_up_to_units(
        snf_c, snf_mod.snf_of_diagonal(graded_rhs)
    )
    if not theorem_ok:
        status = "FAILED"
    else:
        status = "VERIFIED" if conj_ok else "FAILED"
    layers.append(
        LayerResult(
            "field-invariants",
            status,
            {"theorem_subcheck": theorem_ok, "conjecture_check": conj_ok},
        )
    )

    snf_z = snf_mod.snf_int(gm.at_one())
    int_ok = snf_z.elements == snf_mod.snf_int_diagonal(hill_values(p, r, d)).elements
    layers.append(
        LayerResult(
            "integer-invariants",
            "VERIFIED" if int_ok else "FAILED",
            {"theorem": r <= p, "conjectural": r > p},
        )
    )

    diag = snf_mod.try_diagonalize_zlaurent(gm.entries, budget=budget)
    if diag.success:
        target = snf_mod.InvariantMultiset.polys(graded_rhs, snf_mod.RING_ZLAURENT)
        if snf_mod.multiset_equal_up_to_units(diag.diagonal, target):
            status = "VERIFIED"
            extra = {"multiset_match": True}
        else:
            # a different diagonal representative is no refutation: the ring
            # is not a PID, so the diagonal form is not canonical
            status = "CONSISTENT"
            extra = {"multiset_match": False, "note": "diagonal found but not the conjectured representative"}
    elif theorem_ok and conj_ok and int_ok:
        # the heuristic proved nothing either way; the complete-ring
        # necessary conditions all hold, so the conjecture stands consistent
        status = "CONSISTENT"
        extra = {"note": "reduction budget exhausted; field and v=1 invariants agree"}
    else:
        status = "INCONCLUSIVE"
        extra = {"note": "greedy reduction exhausted its budget"}
    layers.append(LayerResult("integral-diagonalization", status, {"steps": diag.steps, **extra}))

    elapsed = int((time.monotonic() - start) * 1000)
    return ConjectureReport(p, r, d, tuple(layers), elapsed)

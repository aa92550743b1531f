import random

import pytest

from gcartan.gram import cartan_graded, gram_matrix
from gcartan.linalg import int_det, laurent_det
from gcartan.qcartan import DynkinDiagram
from gcartan.qlaurent import ONE, ZERO, LaurentPoly, divide_exact, normalize_unit, quantum_int
from gcartan.snf import (
    RING_QLAURENT,
    RING_ZINT,
    RING_ZLAURENT,
    InvariantMultiset,
    canonical_poly,
    det_ideal_gcds,
    multiset_equal_up_to_units,
    snf_int,
    snf_int_certified,
    snf_int_diagonal,
    snf_laurent_field,
    snf_of_diagonal,
    try_diagonalize_zlaurent,
)


def random_int_matrix(rng, n, lo=-6, hi=6):
    return [[rng.randint(lo, hi) for _ in range(n)] for _ in range(n)]


def random_laurent_matrix(rng, n):
    def poly():
        return LaurentPoly(
            {rng.randint(-2, 2): rng.randint(-3, 3) for _ in range(rng.randint(0, 3))}
        )

    return [[poly() for _ in range(n)] for _ in range(n)]


class TestSnfInt:
    def test_examples(self):
        assert snf_int([[1, 0], [0, 1]]).elements == (1, 1)
        assert snf_int([[3, 4], [4, 8]]).elements == (1, 8)
        assert snf_int([[2, 0], [0, 6]]).elements == (2, 6)

    def test_chain_and_product(self):
        rng = random.Random(11)
        for _ in range(80):
            n = rng.randint(1, 5)
            m = random_int_matrix(rng, n)
            inv = snf_int(m).elements
            for a, b in zip(inv, inv[1:]):
                if a == 0:
                    assert b == 0
                else:
                    assert b % a == 0
            prod = 1
            for x in inv:
                prod *= x
            assert prod == abs(int_det(m))

    def test_diagonal_shortcut(self):
        rng = random.Random(5)
        for _ in range(60):
            vals = [rng.randint(0, 40) for _ in range(rng.randint(1, 6))]
            n = len(vals)
            full = snf_int([[vals[i] if i == j else 0 for j in range(n)] for i in range(n)])
            assert snf_int_diagonal(vals).elements == full.elements

    def test_certified_matches_general(self):
        rng = random.Random(13)
        for _ in range(60):
            n = rng.randint(1, 5)
            while True:
                m = random_int_matrix(rng, n)
                d = int_det(m)
                if d:
                    break
            assert snf_int_certified(m, abs(d)).elements == snf_int(m).elements

    def test_certified_rejects_wrong_det(self):
        with pytest.raises(AssertionError):
            snf_int_certified([[2, 0], [0, 2]], 8)


class TestSnfLaurentField:
    def test_one_by_one(self):
        ms = snf_laurent_field([[quantum_int(2)]])
        assert ms.elements == (LaurentPoly({2: 1, 0: 1}),)

    def test_diagonal_chain(self):
        f = quantum_int(2)
        g = quantum_int(2) * quantum_int(3)
        ms = snf_laurent_field([[f, ZERO], [ZERO, g]])
        assert multiset_equal_up_to_units(ms, InvariantMultiset.polys([f, g], RING_QLAURENT))

    def test_c22(self):
        # gcd of the entries of C^v_{2,2} is 1, so its field invariants are
        # {1, [2]^2 [2]_2}
        c = gram_matrix(DynkinDiagram("A", 1), 2).entries
        ms = snf_laurent_field(c)
        want = [ONE, quantum_int(2) ** 2 * quantum_int(2, 2)]
        assert multiset_equal_up_to_units(ms, InvariantMultiset.polys(want, RING_QLAURENT))

    def test_product_matches_det_up_to_unit(self):
        rng = random.Random(23)
        done = 0
        while done < 25:
            n = rng.randint(1, 4)
            m = random_laurent_matrix(rng, n)
            d = laurent_det(m)
            if d.is_zero:
                continue
            done += 1
            inv = snf_laurent_field(m).elements
            prod = ONE
            for x in inv:
                prod = prod * x
            lhs = normalize_unit(prod)[1]
            rhs = canonical_poly(d, primitive=True)
            g = canonical_poly(lhs, primitive=True)
            assert g == rhs

    def test_divisibility_chain(self):
        from gcartan.snf import _poly_gcd

        rng = random.Random(29)
        for _ in range(25):
            n = rng.randint(2, 4)
            m = random_laurent_matrix(rng, n)
            inv = snf_laurent_field(m).elements
            for a, b in zip(inv, inv[1:]):
                if a.is_zero:
                    assert b.is_zero
                elif not b.is_zero:
                    # a | b over Q[v,v^-1] iff gcd(a, b) is a up to units
                    assert _poly_gcd(a, b) == canonical_poly(a, primitive=True)

    def test_snf_of_diagonal_reorders(self):
        vals = [quantum_int(3), ONE, quantum_int(2)]
        ms = snf_of_diagonal(vals)
        assert ms.elements[0] == ONE  # gcd is 1


class TestTryDiagonalize:
    def test_already_diagonal(self):
        m = [[quantum_int(2), ZERO], [ZERO, quantum_int(4)]]
        res = try_diagonalize_zlaurent(m)
        assert res.success
        assert multiset_equal_up_to_units(
            res.diagonal, InvariantMultiset.polys([quantum_int(2), quantum_int(4)], RING_ZLAURENT)
        )

    def test_one_by_one(self):
        res = try_diagonalize_zlaurent([[quantum_int(2)]])
        assert res.success and res.diagonal.elements == (LaurentPoly({2: 1, 0: 1}),)

    def test_c22_reduces_to_conjectured_invariants(self):
        c = gram_matrix(DynkinDiagram("A", 1), 2).entries
        res = try_diagonalize_zlaurent(c)
        assert res.success
        want = InvariantMultiset.polys([ONE, quantum_int(2) * quantum_int(4)], RING_ZLAURENT)
        assert multiset_equal_up_to_units(res.diagonal, want)

    def test_budget_exhaustion_is_inconclusive(self):
        c = cartan_graded(3, 2).entries
        res = try_diagonalize_zlaurent(c, budget=1)
        assert res.status == "inconclusive" and res.diagonal is None

    def test_sanity_checks_run_on_success(self):
        rng = random.Random(31)
        for _ in range(10):
            n = rng.randint(1, 3)
            m = random_laurent_matrix(rng, n)
            # symmetrize to look like a Gram matrix; success is not required,
            # but any success must pass the automatic cross-checks
            for i in range(n):
                for j in range(i + 1, n):
                    m[j][i] = m[i][j]
            try_diagonalize_zlaurent(m, budget=2000)


class TestDetIdealGcds:
    def test_identity(self):
        eye = [[ONE, ZERO], [ZERO, ONE]]
        assert det_ideal_gcds(eye) == [ONE, ONE]

    def test_one_by_one(self):
        assert det_ideal_gcds([[quantum_int(2)]]) == [LaurentPoly({2: 1, 0: 1})]

    def test_ratios_reproduce_field_invariants(self):
        rng = random.Random(37)
        done = 0
        while done < 15:
            m = random_laurent_matrix(rng, 3)
            if laurent_det(m).is_zero:
                continue
            done += 1
            gcds = det_ideal_gcds(m)
            inv = snf_laurent_field(m).elements
            prev = ONE
            for k in range(3):
                expect = canonical_poly(prev * inv[k], primitive=True)
                assert gcds[k] == expect
                prev = prev * inv[k]

    def test_size_guard(self):
        eye = [[ONE if i == j else ZERO for j in range(12)] for i in range(12)]
        with pytest.raises(ValueError):
            det_ideal_gcds(eye)


class TestMultisets:
    def test_equal_up_to_units(self):
        a = InvariantMultiset.polys([quantum_int(2)], RING_QLAURENT)
        b = InvariantMultiset.polys([LaurentPoly({2: 1, 0: 1})], RING_QLAURENT)
        assert multiset_equal_up_to_units(a, b)
        c = InvariantMultiset.polys([quantum_int(3)], RING_QLAURENT)
        assert not multiset_equal_up_to_units(a, c)
        f = quantum_int(5)
        g = quantum_int(2, 2)
        x = InvariantMultiset.polys([f * LaurentPoly({3: -1}), g], RING_ZLAURENT)
        y = InvariantMultiset.polys([f, g], RING_ZLAURENT)
        assert multiset_equal_up_to_units(x, y)

    def test_ring_mismatch(self):
        a = InvariantMultiset.integers([1, 2])
        b = InvariantMultiset.polys([ONE], RING_QLAURENT)
        with pytest.raises(ValueError):
            multiset_equal_up_to_units(a, b)

    def test_json(self):
        a = InvariantMultiset.integers([2, 1])
        assert a.to_json() == {"ring": RING_ZINT, "elements": ["1", "2"]}
        b = InvariantMultiset.polys([quantum_int(2)], RING_ZLAURENT)
        assert b.to_json()["ring"] == RING_ZLAURENT

import pytest

from gcartan import partitions as pt
from gcartan.invariants import (
    BunkaitoComponent,
    GradedInvariant,
    asy_Q,
    bracket_product_values,
    bunkaito_decompose,
    composite_hill,
    conjecture_report,
    graded_hill,
    graded_hill_values,
    graded_kor,
    hill_invariant,
    hill_values,
    kor_invariant,
    rhs_multiset,
    verify_bhmulti,
    verify_conjcheck,
    verify_conjequiv,
    verify_saigo2,
    verify_tsaigo,
)
from gcartan.qcartan import exponent_N
from gcartan.qlaurent import ONE, quantum_int


class TestHill:
    def test_examples(self):
        assert hill_invariant(2, 1, (1,)) == 2
        assert hill_invariant(5, 3, ()) == 1
        assert hill_invariant(2, 2, (2,)) == 2

    def test_prime_required(self):
        with pytest.raises(ValueError):
            hill_invariant(4, 1, (1,))

    def test_graded_examples(self):
        assert graded_hill(2, 1, (1,)) == quantum_int(2)
        assert graded_hill(3, 2, ()) == ONE
        assert graded_hill(2, 2, (2,)) == quantum_int(2, 2)
        assert graded_hill(2, 1, (1, 1)) == quantum_int(2) * quantum_int(4)

    def test_graded_specializes_to_ungraded(self):
        for p in (2, 3, 5):
            for r in (1, 2, 3):
                for n in range(0, 11):
                    for lam in pt.enum_partitions(n):
                        assert graded_hill(p, r, lam).at_one() == hill_invariant(p, r, lam)

    def test_cut_invariance(self):
        # I^v is blind to parts divisible by p^r
        for p, r in ((2, 1), (2, 2), (3, 1)):
            ell = p**r
            for n in range(0, 9):
                for lam in pt.enum_partitions(n):
                    assert graded_hill(p, r, lam) == graded_hill(p, r, pt.cut(lam, ell))

    def test_r1_equals_asy(self):
        for p in (2, 3, 5):
            for n in range(0, 11):
                for lam in pt.enum_partitions(n):
                    assert graded_hill(p, 1, lam) == asy_Q(p, lam)

    def test_composite(self):
        lam = (3, 2, 1, 1)
        assert composite_hill(6, lam) == hill_invariant(2, 1, lam) * hill_invariant(3, 1, lam)


class TestKor:
    def test_examples(self):
        assert kor_invariant(2, (1, 1)) == 2
        assert kor_invariant(7, (3, 2, 1)) == 1
        assert kor_invariant(6, (1,) * 12) == 72

    def test_graded_examples(self):
        assert graded_kor(2, 1, (1, 1)) == quantum_int(2)
        assert graded_kor(3, 1, (2, 2)) == ONE
        # the paper's own reduction identity r^v = I^v o RED forces this value
        assert graded_kor(2, 1, (2, 2)) == ONE

    def test_graded_specializes_to_kor(self):
        for p, r in ((2, 1), (3, 1), (2, 2), (5, 1)):
            ell = p**r
            for n in range(0, 11):
                for lam in pt.enum_partitions(n):
                    assert graded_kor(p, r, lam).at_one() == kor_invariant(ell, lam)

    def test_red_identity_both_ways(self):
        for p, r in ((2, 1), (2, 2), (3, 1)):
            ell = p**r
            for n in range(0, 10):
                for lam in pt.enum_partitions(n):
                    assert graded_kor(p, r, lam) == graded_hill(p, r, pt.red(lam, ell))


class TestAsy:
    def test_examples(self):
        assert asy_Q(2, (1,)) == quantum_int(2)
        assert asy_Q(7, ()) == ONE
        assert asy_Q(3, (1, 1, 1)) == quantum_int(3) * quantum_int(3, 2) * quantum_int(9)

    def test_composite_ell_is_allowed(self):
        assert asy_Q(6, (1, 1)) == quantum_int(6) * quantum_int(6, 2)


class TestMultisets:
    def test_rhs_examples(self):
        ms = rhs_multiset("GradedHill", 2, 1, 1)
        assert len(ms) == 1
        ms0 = rhs_multiset("GradedHill", 3, 1, 0)
        assert len(ms0) == 1  # the 0x0... weight-0 block is 1-dimensional
        assert rhs_multiset("Hill", 2, 1, 2).elements == (1, 8)

    def test_cardinality_matches_dimension(self):
        # |multiset| = u(ell-1, d): necessary for any equivalence claim
        for p, r in ((2, 1), (3, 1), (2, 2)):
            ell = p**r
            for d in range(0, 7):
                assert len(graded_hill_values(p, r, d)) == pt.u_count(ell - 1, d)
                assert len(hill_values(p, r, d)) == pt.u_count(ell - 1, d)
                assert len(bracket_product_values(ell, d)) == pt.u_count(ell - 1, d)

    def test_graded_values_specialize(self):
        for d in range(0, 5):
            g = sorted(x.at_one() for x in graded_hill_values(2, 2, d))
            assert g == sorted(hill_values(2, 2, d))


class TestIdentityVerifiers:
    def test_conjcheck(self):
        assert verify_conjcheck(2, 1, 4)
        assert verify_conjcheck(5, 1, 0)
        assert verify_conjcheck(2, 2, 5) and verify_conjcheck(3, 1, 5)

    def test_conjcheck_matches_direct_expansion(self):
        for p, r, d in ((2, 1, 3), (3, 1, 3), (2, 2, 3)):
            ell = p**r
            lhs = ONE
            for s in range(1, d + 1):
                lhs = lhs * quantum_int(ell, s) ** exponent_N(ell - 1, d, s)
            rhs = ONE
            for val in graded_hill_values(p, r, d):
                rhs = rhs * val
            assert lhs == rhs

    def test_tsaigo(self):
        assert verify_tsaigo(2, 1, 3, 1)
        assert verify_tsaigo(2, 1, 4, 7)  # u > d: both sides empty
        assert verify_tsaigo(3, 2, 8, 1)
        with pytest.raises(ValueError):
            verify_tsaigo(2, 1, 3, 2)

    def test_saigo2(self):
        assert verify_saigo2(2, 2)
        assert verify_saigo2(3, 0)
        assert verify_saigo2(3, 6)

    def test_bhmulti(self):
        assert verify_bhmulti(2, 4)
        assert verify_bhmulti(5, 1)
        assert verify_bhmulti(6, 5)  # composite ell with PRS = {2, 3}

    def test_conjequiv(self):
        assert verify_conjequiv(2, 1, 4)
        assert verify_conjequiv(3, 1, 0)
        assert verify_conjequiv(2, 2, 6)

    def test_explain_mode(self):
        ok, diff = verify_saigo2(3, 5, explain=True)
        assert ok and diff is None


class TestBunkaito:
    def test_small(self):
        # S^{2,1}_2 = {CUT_2(lam) != () : lam in Par(2)} = {(1,1)}
        rep = bunkaito_decompose(2, 1, 2)
        assert rep.verified and rep.total == 1
        assert rep.components == (BunkaitoComponent(0, ((1, 2),), 1),)

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            bunkaito_decompose(2, 1, 0)

    def test_medium(self):
        assert bunkaito_decompose(2, 2, 6).verified
        assert bunkaito_decompose(3, 1, 5).verified

    def test_json(self):
        j = bunkaito_decompose(2, 1, 3).to_json()
        assert j["verified"] is True and j["components"]


class TestConjectureReport:
    def test_trivial_case_all_verified(self):
        rep = conjecture_report(2, 1, 1)
        assert [lay.status for lay in rep.layers] == ["VERIFIED"] * 4

    def test_weight_zero(self):
        rep = conjecture_report(3, 1, 0)
        assert rep.ok

    def test_layer_names_and_json(self):
        rep = conjecture_report(2, 1, 2)
        names = [lay.name for lay in rep.layers]
        assert names == [
            "determinant",
            "field-invariants",
            "integer-invariants",
            "integral-diagonalization",
        ]
        j = rep.to_json()
        assert j["params"]["ell"] == 2 and len(j["layers"]) == 4
        assert "elapsed_ms" in j

    def test_statuses_at_least_consistent(self):
        rep = conjecture_report(3, 1, 2)
        assert rep.layer("determinant").status == "VERIFIED"
        for lay in rep.layers[1:]:
            assert lay.status in ("VERIFIED", "CONSISTENT", "INCONCLUSIVE")


def test_graded_invariant_record():
    g = GradedInvariant(quantum_int(2), "GradedHill", (2, 1), (1,))
    j = g.to_json()
    assert j["provenance"] == "GradedHill" and j["partition"] == [1]

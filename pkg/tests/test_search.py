import random

import pytest

from agorad.aggregators import (
    FOUR_OPS,
    is_closed,
    is_dictatorial,
    is_locally_monomorphic,
    is_uniformly_nondictatorial,
    restriction_class,
    serialize_aggregator,
)
from agorad.domain import two_element_subsets
from agorad.errors import CapacityError
from agorad.fixtures import fixture_domain
from agorad.search import (
    BUDGET_EXCEEDED,
    EXHAUSTED,
    FOUND,
    SearchBudget,
    all_binary_aggregators,
    bruteforce_binary,
    bruteforce_ternary_nontrivial,
    find_binary_nondictatorial,
    find_component_nonprojection,
    find_majority,
    find_minority,
    find_uniform,
    fold_diamond_cover,
)

from helpers import random_boolean_domain, random_domain


def check_item4(d, agg):
    for j in range(1, d.issue_count + 1):
        comp = agg.component(j)
        for x in d.projection(j):
            for y in d.projection(j):
                a = comp.apply((x, y, y))
                if a != comp.apply((y, x, y)) or a != comp.apply((y, y, x)):
                    return False
    return True


def check_four_ops_everywhere(d, agg):
    return all(
        restriction_class(agg.component(j), pair).tag in FOUR_OPS
        for j in range(1, d.issue_count + 1)
        for pair in two_element_subsets(d, j)
    )


class TestFindBinary:
    def test_w_exhausted(self, w):
        assert find_binary_nondictatorial(w).status == EXHAUSTED

    def test_product_found_and_verified(self, yz_product):
        outcome = find_binary_nondictatorial(yz_product)
        assert outcome.status == FOUND
        assert is_closed(yz_product, outcome.witness).ok
        assert is_dictatorial(yz_product, outcome.witness) is None

    def test_example2_found_both_routes(self, example2):
        graph_route = find_binary_nondictatorial(example2)
        direct = find_binary_nondictatorial(example2, direct=True)
        assert graph_route.status == FOUND
        assert direct.status == FOUND
        assert is_closed(example2, direct.witness).ok

    def test_route_agreement_on_fixtures(
        self, w, example2, example3, wxw, y_horn, z_affine, yz_product
    ):
        for d in (w, example2, example3, wxw, y_horn, z_affine, yz_product):
            graph_route = find_binary_nondictatorial(d)
            direct = find_binary_nondictatorial(d, direct=True)
            assert graph_route.status == direct.status

    def test_route_agreement_randomized(self):
        rng = random.Random(31415)
        for _ in range(40):
            d = random_domain(rng)
            assert (
                find_binary_nondictatorial(d).status
                == find_binary_nondictatorial(d, direct=True).status
            )


class TestFindMajority:
    def test_example2_found_with_all_verifications(self, example2):
        outcome = find_majority(example2)
        assert outcome.status == FOUND
        witness = outcome.witness
        assert is_closed(example2, witness).ok
        assert is_dictatorial(example2, witness) is None
        assert is_locally_monomorphic(example2, witness)
        for j in range(1, 4):
            for pair in two_element_subsets(example2, j):
                assert restriction_class(witness.component(j), pair).tag == "MAJ"

    def test_full_boolean_product_forced_candidate(self):
        d = fixture_domain("full-boolean-3")
        outcome = find_majority(d)
        assert outcome.status == FOUND
        assert outcome.stats.nodes == 0  # every cell forced by the law

    def test_w_exhausted(self, w):
        assert find_majority(w).status == EXHAUSTED


class TestFindMinority:
    def test_example3_found_with_all_verifications(self, example3):
        outcome = find_minority(example3)
        assert outcome.status == FOUND
        witness = outcome.witness
        assert is_closed(example3, witness).ok
        assert is_dictatorial(example3, witness) is None
        assert is_locally_monomorphic(example3, witness)
        for j in range(1, 4):
            for pair in two_element_subsets(example3, j):
                assert restriction_class(witness.component(j), pair).tag == "XOR3"

    def test_affine_fixture_found(self, z_affine):
        assert find_minority(z_affine).status == FOUND

    def test_w_exhausted(self, w):
        assert find_minority(w).status == EXHAUSTED


class TestFindUniform:
    def test_product_found(self, yz_product):
        outcome = find_uniform(yz_product)
        assert outcome.status == FOUND
        assert check_item4(yz_product, outcome.witness)
        assert check_four_ops_everywhere(yz_product, outcome.witness)
        assert is_uniformly_nondictatorial(yz_product, outcome.witness).ok

    def test_wxw_exhausted(self, wxw):
        assert find_uniform(wxw).status == EXHAUSTED

    def test_example3_found(self, example3):
        outcome = find_uniform(example3)
        assert outcome.status == FOUND
        assert check_item4(example3, outcome.witness)

    def test_full_product_found(self):
        d = fixture_domain("full-boolean-2")
        assert find_uniform(d).status == FOUND


class TestFindComponent:
    def test_yz_y_side(self, yz_product):
        outcome = find_component_nonprojection(yz_product, 1, (0, 1))
        assert outcome.status == FOUND
        tag = restriction_class(outcome.witness.component(1), (0, 1)).tag
        assert tag in FOUR_OPS
        assert is_closed(yz_product, outcome.witness).ok

    def test_yz_z_side(self, yz_product):
        outcome = find_component_nonprojection(yz_product, 4, (0, 1))
        assert outcome.status == FOUND
        tag = restriction_class(outcome.witness.component(4), (0, 1)).tag
        assert tag in FOUR_OPS

    def test_wxw_exhausted_everywhere(self, wxw):
        assert find_component_nonprojection(wxw, 1, (0, 1)).status == EXHAUSTED

    def test_bad_pair_rejected(self, w):
        with pytest.raises(ValueError):
            find_component_nonprojection(w, 1, (0, 0))
        with pytest.raises(ValueError):
            find_component_nonprojection(w, 1, (0, 7))


class TestFoldDiamondCover:
    def test_product_composite_verified(self, yz_product):
        outcome = fold_diamond_cover(yz_product)
        assert outcome.status == FOUND
        assert is_uniformly_nondictatorial(yz_product, outcome.witness).ok
        assert check_four_ops_everywhere(yz_product, outcome.witness)

    def test_minority_domain(self, example3):
        outcome = fold_diamond_cover(example3)
        assert outcome.status == FOUND
        assert check_four_ops_everywhere(example3, outcome.witness)

    def test_w_exhausted(self, w):
        assert fold_diamond_cover(w).status == EXHAUSTED


class TestBruteForceOracles:
    def test_w_binary_and_ternary_exhausted(self, w):
        assert bruteforce_binary(w).status == EXHAUSTED
        assert bruteforce_ternary_nontrivial(w).status == EXHAUSTED

    def test_wxw_aggregators_have_product_projection_form(self, wxw):
        aggs = all_binary_aggregators(wxw)
        assert len(aggs) == 4
        for agg in aggs:
            first = {is_dictatorial_on_block(agg, j) for j in (1, 2, 3)}
            second = {is_dictatorial_on_block(agg, j) for j in (4, 5, 6)}
            assert len(first) == 1 and len(second) == 1
            assert first <= {1, 2} and second <= {1, 2}

    def test_ternary_capacity_guard(self, wxw):
        with pytest.raises(CapacityError):
            bruteforce_ternary_nontrivial(wxw)

    def test_found_witnesses_replayed_by_oracle(self, example2, example3):
        for d in (example2, example3):
            assert bruteforce_binary(d).status == FOUND


def is_dictatorial_on_block(agg, j):
    comp = agg.component(j)
    if comp.table == (0, 0, 1, 1):
        return 1
    if comp.table == (0, 1, 0, 1):
        return 2
    return None


class TestTernaryOracleMatchesDisjunction:
    def test_randomized_equivalence(self):
        rng = random.Random(271828)
        for _ in range(40):
            d = random_boolean_domain(rng)
            disjunction = (
                find_binary_nondictatorial(d).status == FOUND
                or find_majority(d).status == FOUND
                or find_minority(d).status == FOUND
            )
            oracle = bruteforce_ternary_nontrivial(d).status == FOUND
            assert disjunction == oracle


class TestUniformRouteAgreement:
    def test_fixture_statuses(
        self, w, example2, example3, wxw, y_horn, z_affine, yz_product
    ):
        for d in (w, example2, example3, wxw, y_horn, z_affine, yz_product):
            assert find_uniform(d).status == fold_diamond_cover(d).status

    def test_randomized_statuses(self):
        rng = random.Random(161803)
        for _ in range(25):
            d = random_domain(rng)
            u = find_uniform(d)
            f = fold_diamond_cover(d)
            assert u.status == f.status
            if u.status == FOUND:
                assert check_item4(d, u.witness)
                assert check_item4(d, f.witness)
                assert check_four_ops_everywhere(d, u.witness)
                assert check_four_ops_everywhere(d, f.witness)


class TestUniformSurvivesProducts:
    def test_product_of_uniform_fixtures(self, y_horn, z_affine, yz_product):
        assert find_uniform(y_horn).status == FOUND
        assert find_uniform(z_affine).status == FOUND
        assert find_uniform(yz_product).status == FOUND


class TestBudgets:
    def test_tiny_node_budget_yields_budget_exceeded(self, yz_product):
        budget = SearchBudget(max_nodes=1, max_millis=30_000)
        assert find_uniform(yz_product, budget).status == BUDGET_EXCEEDED

    def test_invalid_budget_rejected(self):
        with pytest.raises(ValueError):
            SearchBudget(max_nodes=0)


class TestDeterminism:
    def test_repeated_searches_identical(self, example2, yz_product):
        for d, run in (
            (example2, find_majority),
            (yz_product, find_uniform),
            (yz_product, fold_diamond_cover),
        ):
            first = run(d)
            second = run(d)
            assert first.status == second.status
            assert serialize_aggregator(d, first.witness) == serialize_aggregator(
                d, second.witness
            )

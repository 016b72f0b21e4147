import random
from collections import Counter
from fractions import Fraction

import pytest

from nbrw import (
    ExactValue,
    PreconditionError,
    average_growth_rate,
    build_graph,
    check_cycle_condition,
    check_suspended_path_condition,
    complete_bipartite_graph,
    complete_graph,
    dart_transitions,
    find_improving_cycle,
    geometric_mean,
    growth_verdict,
    k4_minus_edge,
    path_growth_function,
    suspended_path_decomposition,
)

from _corpus import random_nb_irreducible


def exact(n, num=1, den=1):
    return ExactValue.from_integer(n) ** Fraction(num, den)


def cycle_is_valid(g, darts):
    for i, e in enumerate(darts):
        assert darts[(i + 1) % len(darts)] in dart_transitions(g, e)


def cycle_balance(g, darts, lam):
    product = ExactValue.one()
    for e in darts:
        product = product * ExactValue.from_integer(g.out_degree(e))
    return product / (lam ** len(darts))


def test_lambda_k4e(k4e):
    lam_exact, lam_float = average_growth_rate(k4e)
    assert lam_exact == exact(2, 3, 5)
    assert abs(lam_float - 2**0.6) <= 1e-14


def test_lambda_regular():
    for n in (4, 5, 7):
        lam_exact, _ = average_growth_rate(complete_graph(n))
        assert lam_exact == ExactValue.from_integer(n - 2)


def test_lambda_biregular_23():
    lam_exact, _ = average_growth_rate(complete_bipartite_graph(2, 3))
    assert lam_exact == exact(2, 1, 2)


def test_decomposition_k4e(k4e):
    paths = suspended_path_decomposition(k4e)
    shapes = Counter((p.length, p.g_value) for p in paths)
    assert shapes[(1, exact(2))] == 2
    assert shapes[(2, exact(2, 1, 2))] == 4
    assert sum(p.length for p in paths) == k4e.dart_count
    assert paths[0].darts == (0,)


def test_decomposition_k4(k4):
    paths = suspended_path_decomposition(k4)
    assert len(paths) == 12
    assert all(p.length == 1 and p.g_value == exact(2) for p in paths)


def test_decomposition_w523(w523):
    paths = suspended_path_decomposition(w523)
    shapes = Counter(p.length for p in paths)
    assert shapes == {2: 10, 3: 10}
    assert all(p.g_value == exact(2, 1, 2) for p in paths)
    spokes = [p for p in paths if p.length == 3]
    assert {(p.in_degree, p.out_degree) for p in spokes} == {(4, 2), (2, 4)}


def test_decomposition_is_partition_on_corpus():
    rng = random.Random(707)
    for _ in range(60):
        g = random_nb_irreducible(rng)
        paths = suspended_path_decomposition(g)
        all_darts = [d for p in paths for d in p.darts]
        assert sorted(all_darts) == list(range(g.dart_count))


def test_reverse_symmetry_on_corpus():
    rng = random.Random(808)
    for _ in range(60):
        g = random_nb_irreducible(rng)
        by_first = {}
        for p in suspended_path_decomposition(g):
            by_first[p.darts[0]] = p
        for p in by_first.values():
            reverse_first = int(g.dart_reverse[p.darts[-1]])
            rev = by_first[reverse_first]
            assert rev.g_value == p.g_value
            assert rev.length == p.length
            assert tuple(int(g.dart_reverse[d]) for d in reversed(rev.darts)) == p.darts


def test_weighted_geometric_mean_of_g_is_lambda_on_corpus():
    rng = random.Random(909)
    for _ in range(60):
        g = random_nb_irreducible(rng)
        lam_exact, _ = average_growth_rate(g)
        product = ExactValue.one()
        for p in suspended_path_decomposition(g):
            product = product * (p.g_value ** Fraction(p.length, g.dart_count))
        assert product == lam_exact


def test_path_condition_k4e(k4e):
    verdict = check_suspended_path_condition(k4e)
    assert not verdict.holds
    assert verdict.witness_path.darts == (0,)
    assert verdict.witness_path.g_value == exact(2)
    assert verdict.witness_path.g_value != verdict.lambda_exact


def test_path_condition_k4_and_w523(k4, w523):
    assert check_suspended_path_condition(k4).holds
    assert check_suspended_path_condition(w523).holds


def test_cycle_condition_k4e(k4e):
    verdict = check_cycle_condition(k4e)
    assert not verdict.holds
    cycle = verdict.witness_cycle
    cycle_is_valid(k4e, cycle)
    assert not cycle_balance(k4e, cycle, verdict.lambda_exact).is_one()


def test_cycle_condition_biregular_holds():
    for a, b in ((2, 3), (3, 4), (2, 5)):
        verdict = check_cycle_condition(complete_bipartite_graph(a, b))
        assert verdict.holds
        assert verdict.potential is not None


def test_cycle_condition_triangle_free_3regular():
    assert check_cycle_condition(complete_bipartite_graph(3, 3)).holds


def test_potential_certificate_relation(k4):
    verdict = check_cycle_condition(k4)
    assert verdict.holds
    phi = verdict.potential
    lam = verdict.lambda_exact
    for e in range(k4.dart_count):
        for f in dart_transitions(k4, e):
            # outdeg(e) / lam == phi(e) / phi(f), multiplicatively and exactly
            lhs = ExactValue.from_integer(k4.out_degree(e)) / lam
            assert lhs == phi[e] / phi[f]


def test_checkers_agree_on_corpus():
    rng = random.Random(1111)
    for _ in range(80):
        g = random_nb_irreducible(rng)
        a = check_suspended_path_condition(g)
        b = check_cycle_condition(g)
        assert a.holds == b.holds
        if not b.holds:
            cycle_is_valid(g, b.witness_cycle)
            assert not cycle_balance(g, b.witness_cycle, b.lambda_exact).is_one()


def test_verdict_k4e(k4e):
    v = growth_verdict(k4e)
    assert v.status == "strict"
    assert abs(v.gap - 0.005663) <= 2e-4
    assert not v.path_condition.holds and not v.cycle_condition.holds


def test_verdict_equal_cases(k4, w523):
    for g, lam in ((k4, exact(2)), (w523, exact(2, 1, 2))):
        v = growth_verdict(g)
        assert v.status == "equal"
        assert v.lambda_exact == lam
        assert abs(v.gap) <= 1e-8


def test_verdict_numeric_consistency_on_corpus():
    rng = random.Random(1212)
    for _ in range(40):
        g = random_nb_irreducible(rng)
        v = growth_verdict(g)
        if v.equal:
            assert abs(v.gap) <= 1e-8
        else:
            assert v.gap >= 1e-6


def test_requires_irreducibility():
    c5 = build_graph(5, [(i, (i + 1) % 5) for i in range(5)])
    for fn in (suspended_path_decomposition, check_suspended_path_condition, check_cycle_condition, growth_verdict):
        with pytest.raises(PreconditionError):
            fn(c5)


def test_verdict_json_shapes(k4e, k4):
    strict = growth_verdict(k4e).to_json()
    assert strict["verdict"] == "strict"
    assert strict["suspended_path_condition"]["witness"]["type"] == "path"
    assert strict["cycle_condition"]["witness"]["type"] == "cycle"
    assert strict["lambda"]["exact"] == [[2, 3, 5]]
    equal = growth_verdict(k4).to_json()
    assert equal["verdict"] == "equal"
    assert equal["suspended_path_condition"]["witness"] is None
    assert equal["cycle_condition"]["witness"]["type"] == "potential"


# --- improving cycle ----------------------------------------------------------


def test_improving_cycle_k4e(k4e):
    f = path_growth_function(k4e)
    lam_exact, _ = average_growth_rate(k4e)
    cycle = find_improving_cycle(k4e, f)
    cycle_is_valid(k4e, cycle)
    mean = geometric_mean([f[d] for d in cycle])
    # a strictly below-average path exists, so the cycle is strictly above
    assert mean > lam_exact
    assert mean == exact(2, 2, 3)


def test_improving_cycle_constant_function(k4):
    f = [ExactValue.from_integer(2)] * k4.dart_count
    cycle = find_improving_cycle(k4, f)
    cycle_is_valid(k4, cycle)
    assert geometric_mean([f[d] for d in cycle]) == ExactValue.from_integer(2)


def test_improving_cycle_w523(w523):
    f = path_growth_function(w523)
    cycle = find_improving_cycle(w523, f)
    cycle_is_valid(w523, cycle)
    assert geometric_mean([f[d] for d in cycle]) == exact(2, 1, 2)


def test_improving_cycle_on_corpus():
    rng = random.Random(1313)
    for _ in range(40):
        g = random_nb_irreducible(rng, max_vertices=8)
        f = path_growth_function(g)
        global_mean = geometric_mean(f)
        cycle = find_improving_cycle(g, f)
        cycle_is_valid(g, cycle)
        mean = geometric_mean([f[d] for d in cycle])
        assert mean >= global_mean
        if any(p.g_value < global_mean for p in suspended_path_decomposition(g)):
            assert mean > global_mean


def test_improving_cycle_balloon_anchor():
    # a cycle hanging on a degree-3 vertex: removing it strands a chain
    g = build_graph(
        6,
        [
            (0, 1), (1, 2), (2, 0),      # balloon-ish triangle at 0
            (0, 3),                      # bridge chain
            (3, 4), (4, 5), (5, 3),      # triangle at 3
        ],
    )
    f = path_growth_function(g)
    cycle = find_improving_cycle(g, f)
    cycle_is_valid(g, cycle)
    assert geometric_mean([f[d] for d in cycle]) >= geometric_mean(f)


def enumerate_simple_cycle_means(g, f):
    """All simple cycles of the transition digraph, by DFS from each
    minimal dart; independent oracle for the max-mean search."""
    best = None
    n = g.dart_count

    def extend(start, dart, path_set, product, length):
        nonlocal best
        for nxt in dart_transitions(g, dart):
            if nxt == start:
                mean = (product * f[dart]) ** Fraction(1, length)
                if best is None or mean > best:
                    best = mean
            elif nxt > start and nxt not in path_set:
                extend(start, nxt, path_set | {nxt}, product * f[dart], length + 1)

    for start in range(n):
        extend(start, start, {start}, ExactValue.one(), 1)
    return best


def test_max_mean_cycle_matches_enumeration():
    from nbrw.conditions import _max_mean_cycle

    rng = random.Random(2323)
    for _ in range(12):
        g = random_nb_irreducible(rng, max_vertices=4, degree_range=(2, 4))
        f = path_growth_function(g)
        cycle = _max_mean_cycle(g, f)
        cycle_is_valid(g, cycle)
        karp_mean = geometric_mean([f[d] for d in cycle])
        brute_mean = enumerate_simple_cycle_means(g, f)
        assert karp_mean == brute_mean


def test_improving_cycle_random_path_functions():
    # arbitrary reversal-symmetric, path-constant values, not just the
    # growth function: the mean bound must still hold exactly
    rng = random.Random(2424)
    for _ in range(25):
        g = random_nb_irreducible(rng, max_vertices=8)
        paths = suspended_path_decomposition(g)
        by_lead = {p.darts[0]: p for p in paths}
        values = [None] * g.dart_count
        for p in paths:
            if values[p.darts[0]] is not None:
                continue
            v = exact(rng.choice([2, 3, 4, 5, 7, 9]), 1, rng.choice([1, 2, 3]))
            reverse_lead = int(g.dart_reverse[p.darts[-1]])
            for d in p.darts + by_lead[reverse_lead].darts:
                values[d] = v
        global_mean = geometric_mean(values)
        cycle = find_improving_cycle(g, values)
        cycle_is_valid(g, cycle)
        mean = geometric_mean([values[d] for d in cycle])
        assert mean >= global_mean
        if any(geometric_mean([values[d] for d in p.darts]) < global_mean for p in paths):
            assert mean > global_mean


def test_improving_cycle_validates_input(k4e):
    f = path_growth_function(k4e)
    with pytest.raises(ValueError):
        find_improving_cycle(k4e, f[:-1])
    broken = list(f)
    broken[0] = exact(7)  # breaks reversal symmetry and path constancy
    with pytest.raises(ValueError):
        find_improving_cycle(k4e, broken)

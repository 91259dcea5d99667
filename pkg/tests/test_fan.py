import itertools
import json
import math
import random
from fractions import Fraction

import pytest

from conftest import SIGMAS_1, sigma
from oracles import cramer, in_cone, in_cone_interior_simplicial
from toricflip.catalog import PRISM_V, one_based, orthant_fan, prism_fan
from toricflip.fan import (Fan, InvalidFanError, added_walls, is_complete, is_simplicial,
                           simplicial_subdivisions, triangulations_of_cone, validate)

SQUARE = Fan([(1, 1, 1), (1, -1, 1), (-1, -1, 1), (-1, 1, 1)], [(0, 1, 2, 3)])


def codes(f):
    return {v.code for v in validate(f).violations}


def as_sets(fans):
    return {frozenset(f.max_cones) for f in fans}


def listed_sets():
    return {frozenset(tuple(sorted(c)) for c in one_based(SIGMAS_1[i])) for i in SIGMAS_1}


class TestValidate:
    def test_prism_valid(self, prism):
        assert validate(prism).valid

    def test_duplicated_cone(self, prism):
        f = Fan(prism.rays, list(prism.max_cones) + [prism.max_cones[0]])
        assert "redundant" in codes(f)

    def test_overlapping_cones(self):
        f = Fan([(1, 0), (1, 1), (0, 1)], [(0, 1), (0, 2)])
        assert "improper-intersection" in codes(f)

    def test_non_primitive_and_zero_rays(self):
        assert "non-primitive" in codes(Fan([(2, 0), (0, 1)], [(0, 1)]))
        assert "zero-ray" in codes(Fan([(0, 0), (0, 1)], [(0, 1)]))

    def test_lower_dimensional_cone(self):
        f = Fan([(1, 0, 0), (0, 1, 0)], [(0, 1)])
        assert "not-full-dimensional" in codes(f)

    def test_non_extremal_generator(self):
        f = Fan([(1, 0), (1, 1), (0, 1)], [(0, 1, 2)])
        assert "non-extremal" in codes(f)

    def test_unused_ray(self):
        f = Fan([(1, 0), (0, 1), (-1, -1)], [(0, 1)])
        assert "unused-ray" in codes(f)

    def test_invalid_fan_rejected_by_predicates(self):
        f = Fan([(1, 0), (1, 1), (0, 1)], [(0, 1), (0, 2)])
        with pytest.raises(InvalidFanError):
            is_complete(f)


class TestFlags:
    def test_prism_complete_not_simplicial(self, prism):
        assert is_complete(prism)
        assert not is_simplicial(prism)

    def test_single_quadrant_incomplete(self):
        assert not is_complete(Fan([(1, 0), (0, 1)], [(0, 1)]))

    @pytest.mark.parametrize("i", range(1, 9))
    def test_sigmas_complete_simplicial(self, i):
        f = sigma(i)
        assert f.valid and is_complete(f) and is_simplicial(f)

    def test_orthants(self):
        f = orthant_fan(2)
        assert is_simplicial(f) and is_complete(f)
        assert is_complete(orthant_fan(3))


def _brute_triangulations(f, idx, samples=300, seed=0):
    """All families of full-rank simplices on the cone's rays that cover the
    cone and overlap only on boundaries, judged on random sample points."""
    n = f.dim
    rng = random.Random(seed)
    rays = [f.rays[i] for i in idx]
    cands = [T for T in itertools.combinations(idx, n)
             if cramer([[f.rays[i][k] for i in T] for k in range(n)], [0] * n) is not None]
    pts = []
    for _ in range(samples):
        w = [rng.randint(1, 50) for _ in rays]
        pts.append([sum(wi * r[k] for wi, r in zip(w, rays)) for k in range(n)])
    good = set()
    for k in range(1, len(cands) + 1):
        for fam in itertools.combinations(cands, k):
            ok = True
            for p in pts:
                inside = [in_cone_interior_simplicial(p, [f.rays[i] for i in T]) for T in fam]
                if sum(1 for x in inside if x is True) > 1:
                    ok = False
                    break
                if not any(x is not False for x in inside):
                    ok = False
                    break
            if ok:
                good.add(frozenset(fam))
    return good


class TestTriangulations:
    def test_prism_quadrangle(self, prism):
        k = prism.max_cones.index(tuple(i - 1 for i in (1, 2, 4, 6)))
        tris = triangulations_of_cone(prism, k)
        expect = {frozenset(one_based([(1, 2, 4), (1, 2, 6)])), frozenset(one_based([(1, 4, 6), (2, 4, 6)]))}
        assert {frozenset(t) for t in tris} == expect

    def test_simplicial_cone(self, prism):
        k = prism.max_cones.index((1, 3, 4))
        assert triangulations_of_cone(prism, k) == [[(1, 3, 4)]]

    def test_square_matches_brute_force(self):
        tris = triangulations_of_cone(SQUARE, 0)
        assert len(tris) == 2
        assert {frozenset(t) for t in tris} == _brute_triangulations(SQUARE, SQUARE.max_cones[0])

    def test_pentagon_matches_brute_force(self):
        # cone over a pentagon: Catalan(3) = 5 triangulations
        pent = Fan([(2, 0, 1), (1, 2, 1), (-1, 2, 1), (-2, 0, 1), (0, -2, 1)], [range(5)])
        tris = triangulations_of_cone(pent, 0)
        assert len(tris) == 5
        assert {frozenset(t) for t in tris} == _brute_triangulations(pent, pent.max_cones[0])

    def test_out_of_range(self, prism):
        with pytest.raises(IndexError):
            triangulations_of_cone(prism, 99)

    def test_soundness_by_sampling(self, prism):
        rng = random.Random(11)
        for k, c in enumerate(prism.max_cones):
            for tri in triangulations_of_cone(prism, k):
                for _ in range(1000):
                    w = [rng.randint(0, 30) for _ in c]
                    p = [sum(wi * prism.rays[i][j] for wi, i in zip(w, c)) for j in range(3)]
                    states = [in_cone_interior_simplicial(p, [prism.rays[i] for i in T]) for T in tri]
                    assert any(s is not False for s in states)
                    assert sum(1 for s in states if s is True) <= 1


class TestSubdivisions:
    def test_prism_has_the_eight(self, prism):
        subs = simplicial_subdivisions(prism)
        assert len(subs) == 8
        assert as_sets(subs) == listed_sets()

    def test_simplicial_input(self):
        f = sigma(1)
        assert simplicial_subdivisions(f) == [f]

    def test_partially_triangulated_prism(self, prism):
        cones = [c for c in one_based([(2, 4, 5), (1, 3, 6), (2, 3, 5, 6)])]
        cones += one_based([(1, 2, 4), (1, 2, 6), (1, 3, 4), (3, 4, 5)])
        f = Fan.from_matrix(PRISM_V, cones)
        assert f.valid and f.complete
        assert len(simplicial_subdivisions(f)) == 2

    def test_count_is_product(self, prism):
        counts = [len(triangulations_of_cone(prism, k)) for k in range(len(prism.max_cones))]
        assert len(simplicial_subdivisions(prism)) == math.prod(counts)

    def test_subdivisions_are_sqm_candidates(self, prism):
        for s in simplicial_subdivisions(prism):
            assert s.rays == prism.rays
            assert is_simplicial(s) and is_complete(s)


class TestWalls:
    def test_prism_to_sigma1(self, prism):
        assert len(added_walls(prism, sigma(1)).added_walls) == 3

    def test_identity(self, prism):
        assert added_walls(prism, prism).added_walls == []

    def test_prism_to_sigma7(self, prism):
        rep = added_walls(prism, sigma(7))
        assert len(rep.added_walls) == 3
        assert all(len(w) == 2 for w in rep.added_walls)

    def test_ray_mismatch(self, prism):
        other = Fan([(2, 1, 0)] + list(prism.rays[1:]), prism.max_cones)
        with pytest.raises(ValueError):
            added_walls(prism, other)


def test_random_points_land_in_some_cone():
    rng = random.Random(5)
    fans = [prism_fan()] + [sigma(i) for i in SIGMAS_1] + [orthant_fan(3)]
    for f in fans:
        for _ in range(150):
            x = [Fraction(rng.randint(-40, 40), rng.randint(1, 9)) for _ in range(f.dim)]
            assert any(in_cone(x, [f.rays[i] for i in c]) for c in f.max_cones)


def test_json_round_trip(prism):
    data = json.loads(json.dumps(prism.to_json()))
    assert Fan.from_json(data) == prism
    with pytest.raises(ValueError):
        Fan.from_json({"dim": 4, "rays": data["rays"], "max_cones": data["max_cones"]})

"""
Tests for Frobenius invariants

Hilbert-Kunz functions, F-splitting numbers, relative Hilbert-Kunz,
tight-closure evidence, the splitting prime probe and sequence limits on
the rings in corpus/.
"""

import random
from fractions import Fraction
from pathlib import Path

import pytest

from frobkit.errors import (
    ChainExhausted,
    HypothesisViolation,
    NotFPure,
    NotGorenstein,
    NotHypersurface,
    NotZeroDimensional,
    UnitIdeal,
)
from frobkit.ideals import RingPresentation, bracket_power, ideal_sum
from frobkit.invariants import (
    IN_CLOSURE_LIKELY,
    IN_IDEAL,
    NOT_IN_CLOSURE,
    SOP,
    ChainLink,
    fedder_hypersurface_oracle,
    find_sop,
    fsig_function_chain,
    fsig_function_gorenstein,
    fsig_hk_sequence,
    fsig_ideals_gorenstein,
    fsig_sequence,
    half_frobenius_sequence,
    hk_function,
    hk_of_fsig_ideal_sequence,
    hk_sequence,
    is_f_pure,
    is_m_primary,
    relative_hk,
    relative_hk_ratio,
    sequence_limit,
    splitting_prime_probe,
    tc_membership,
)
from frobkit.polynomial import PolyRing
from frobkit.ringfile import parse_ring_file
from frobkit.tables import hk_estimate

CORPUS = Path(__file__).resolve().parent.parent / "corpus"


def load(name):
    """Ring file from corpus/ and its presentation"""
    rf = parse_ring_file(CORPUS / f"{name}.ring")
    return rf, rf.presentation()


class TestHilbertKunz:
    """Test Hilbert-Kunz functions"""

    def test_regular_one_variable(self):
        """F_2[x]: l(R/m^[q]) = q"""
        _, R = load("regular_p2_d1")
        assert hk_function(R, R.m, 3).lengths() == [1, 2, 4, 8]

    def test_regular_two_variables(self):
        """F_3[x,y]: l(R/m^[q]) = q^2 and every normalized value is 1"""
        _, R = load("regular_p3_d2")
        table = hk_function(R, R.m, 3)
        assert table.lengths() == [1, 9, 81, 729]
        assert set(table.normalized()) == {Fraction(1)}

    def test_regular_three_variables(self):
        """F_5[x,y,z]: l(R/m^[q]) = q^3"""
        _, R = load("regular_p5_d3")
        assert hk_function(R, R.m, 2).lengths() == [1, 125, 15625]

    def test_a1_quadric(self):
        """xy = z^2 in characteristic 3 starts 1, 13, 121"""
        _, R = load("a1_p3")
        assert hk_function(R, R.m, 2).lengths() == [1, 13, 121]

    @pytest.mark.slow
    def test_a1_quadric_limit(self):
        """The A1 Hilbert-Kunz multiplicity estimate is 3/2 within its bound"""
        _, R = load("a1_p3")
        table = hk_function(R, R.m, 3)
        assert table.lengths() == [1, 13, 121, 1093]
        estimate = hk_estimate(table)
        assert abs(estimate.value - 1.5) <= estimate.error_bound + 0.01

    def test_node(self):
        """F_2[x,y]/(xy): l(R/m^[q]) = 2q - 1"""
        _, R = load("node_p2")
        assert hk_function(R, R.m, 3).lengths() == [1, 3, 7, 15]

    def test_artinian(self):
        """F_3[x]/(x^2): the length is constant 2 after e = 0"""
        _, R = load("nonreduced_p3")
        assert hk_function(R, R.m, 3).lengths() == [1, 2, 2, 2]

    def test_parameter_ideal(self):
        """l(R/(x,y)^[q]) = 2 q^2 on the A1 quadric"""
        _, R = load("a1_p3")
        x, y, _ = R.ambient.gens()
        assert hk_function(R, R.ideal([x, y]), 2).lengths() == [2, 18, 162]

    @pytest.mark.parametrize("threads", [2, 4])
    def test_threads_do_not_change_rows(self, threads):
        """Parallel rows equal sequential rows"""
        _, R = load("a1_p3")
        assert hk_function(R, R.m, 2, threads).lengths() == hk_function(R, R.m, 2, 1).lengths()

    def test_unit_ideal(self):
        """The unit ideal is refused"""
        _, R = load("regular_p3_d2")
        with pytest.raises(UnitIdeal):
            hk_function(R, R.unit_ideal(), 2)

    def test_not_m_primary(self):
        """An ideal that is not m-primary is refused"""
        _, R = load("regular_p3_d2")
        x, _ = R.ambient.gens()
        with pytest.raises(NotZeroDimensional):
            hk_function(R, R.ideal([x]), 2)

    def test_emax_positive(self):
        """e_max must be at least 1"""
        _, R = load("regular_p2_d1")
        with pytest.raises(ValueError):
            hk_function(R, R.m, 0)


class TestSystemOfParameters:
    """Test the system-of-parameters search"""

    def test_prefers_variables(self):
        """A variable subset is returned when one works"""
        _, R = load("a1_p3")
        x, y, _ = R.ambient.gens()
        assert find_sop(R).elements == (x, y)

    def test_random_search(self):
        """The node needs a random linear form and the search is seeded"""
        _, R = load("node_p2")
        sop = find_sop(R, seed=0)
        assert len(sop) == 1
        assert sop.elements[0].total_degree() == 1
        assert find_sop(R, seed=0) == sop

    def test_artinian(self):
        """A zero-dimensional ring has the empty system of parameters"""
        _, R = load("nonreduced_p3")
        assert find_sop(R).elements == ()

    @pytest.mark.parametrize("seed", range(5))
    def test_quadratic_forms_are_homogeneous(self, seed):
        """Over F_2 every line is a component of xy(x+y) = 0, so the search needs x^2 + xy + y^2"""
        ring = PolyRing.create(2, ["x", "y"])
        x, y = ring.gens()
        R = RingPresentation(ring, [x * y * (x + y)])
        sop = find_sop(R, seed=seed)
        assert sop.elements == (x ** 2 + x * y + y ** 2,)
        J = R.ideal(sop.elements)
        assert is_m_primary(J)
        assert ideal_sum(J, bracket_power(R.m, 4)).colength() == J.colength()

    def test_zero_dimensional_but_not_m_primary(self):
        """x^2 + y meets xy(x+y) = 0 at (1, 1) as well as at the origin, so it is refused"""
        ring = PolyRing.create(2, ["x", "y"])
        x, y = ring.gens()
        R = RingPresentation(ring, [x * y * (x + y)])
        J = R.ideal([x ** 2 + y])
        assert J.colength() == 5
        assert not is_m_primary(J)
        with pytest.raises(HypothesisViolation):
            fsig_function_gorenstein(R, SOP((x ** 2 + y,)), 1)


class TestFSignature:
    """Test F-splitting numbers"""

    def test_regular(self):
        """A regular ring has a_e = q^d and socle generator 1"""
        _, R = load("regular_p2_d1")
        table = fsig_function_gorenstein(R, find_sop(R), 3)
        assert table.lengths() == [1, 2, 4, 8]
        assert table.diagnostics["socle_generator"] == "1"

    def test_regular_three_variables(self):
        """F_5[x,y,z] has a_e = q^3"""
        _, R = load("regular_p5_d3")
        assert fsig_function_gorenstein(R, find_sop(R), 2).lengths() == [1, 125, 15625]

    def test_a1_quadric(self):
        """xy = z^2 has a_e = 1, 5, 41 and socle generator z"""
        rf, R = load("a1_p3")
        table = fsig_function_gorenstein(R, rf.system_of_parameters(R), 2)
        assert table.lengths() == [1, 5, 41]
        assert table.diagnostics["socle_generator"] == "z"
        assert set(table.ideals) == {0, 1, 2}

    @pytest.mark.slow
    def test_a1_quadric_limit(self):
        """The A1 F-signature estimate is 1/2 within its bound"""
        rf, R = load("a1_p3")
        table = fsig_function_gorenstein(R, rf.system_of_parameters(R), 3)
        assert table.lengths() == [1, 5, 41, 365]
        estimate = hk_estimate(table)
        assert abs(estimate.value - 0.5) <= estimate.error_bound + 0.01

    def test_node(self):
        """The node is F-pure with a_e = 1, so its F-signature is 0"""
        _, R = load("node_p2")
        table = fsig_function_gorenstein(R, find_sop(R), 3)
        assert table.lengths() == [1, 1, 1, 1]
        assert hk_estimate(table).eta == 0

    def test_nonreduced(self):
        """F_3[x]/(x^2) has a_e = 0 for e >= 1"""
        _, R = load("nonreduced_p3")
        table = fsig_function_gorenstein(R, find_sop(R), 3)
        assert table.lengths() == [1, 0, 0, 0]

    def test_is_f_pure(self):
        """F-purity is a_1 >= 1"""
        _, a1 = load("a1_p3")
        _, nonreduced = load("nonreduced_p3")
        assert is_f_pure(a1, find_sop(a1))
        assert not is_f_pure(nonreduced, find_sop(nonreduced))

    def test_not_gorenstein(self):
        """Three coordinate axes have a parameter ideal with a two-dimensional socle"""
        ring = PolyRing.create(2, ["x", "y", "z"])
        x, y, z = ring.gens()
        R = RingPresentation(ring, [x * y, x * z, y * z])
        with pytest.raises(NotGorenstein) as info:
            fsig_function_gorenstein(R, SOP((x + y + z,)), 1)
        assert info.value.socle_dimension == 2

    def test_wrong_sop_length(self):
        """A system of parameters of the wrong size is refused"""
        _, R = load("a1_p3")
        x, _, _ = R.ambient.gens()
        with pytest.raises(HypothesisViolation):
            fsig_function_gorenstein(R, SOP((x,)), 1)

    def test_sop_not_m_primary(self):
        """Elements that do not cut out the origin are refused"""
        _, R = load("a1_p3")
        x, _, z = R.ambient.gens()
        with pytest.raises(HypothesisViolation):
            fsig_function_gorenstein(R, SOP((x, z)), 1)

    def test_fsig_ideals(self):
        """The F-signature ideals descend and have colength a_e"""
        rf, R = load("a1_p3")
        ideals = fsig_ideals_gorenstein(R, rf.system_of_parameters(R), 2)
        assert [I.colength() for I in ideals] == [1, 5, 41]
        assert ideals[0] == R.m


class TestChain:
    """Test t-stabilized F-splitting numbers along a chain"""

    def test_matches_gorenstein(self):
        """The parameter-power chain agrees with the single socle colon"""
        rf, R = load("a1_p3")
        chain = rf.chain(R, "J", 4)
        table = fsig_function_chain(R, chain, 2)
        assert table.lengths() == [1, 5, 41]
        assert all(r.t == 2 for r in table.rows)

    def test_socles_computed_when_missing(self):
        """Chain members without a socle line get one computed"""
        _, R = load("a1_p3")
        x, y, _ = R.ambient.gens()
        chain = [ChainLink(t, R.ideal([x ** t, y ** t])) for t in (1, 2, 3)]
        assert fsig_function_chain(R, chain, 1).lengths() == [1, 5]

    def test_exhausted(self):
        """A one-member chain cannot stabilize and returns the partial table"""
        rf, R = load("a1_p3")
        with pytest.raises(ChainExhausted) as info:
            fsig_function_chain(R, rf.chain(R, "J", 1), 1)
        partial = info.value.partial
        assert partial.lengths() == [1, 5]
        assert partial.diagnostics["unstabilized_e"] == [0, 1]

    def test_not_descending(self):
        """An ascending chain is refused"""
        _, R = load("a1_p3")
        x, y, _ = R.ambient.gens()
        chain = [ChainLink(1, R.ideal([x ** 2, y ** 2])), ChainLink(2, R.ideal([x, y]))]
        with pytest.raises(HypothesisViolation):
            fsig_function_chain(R, chain, 1)

    def test_wrong_socle(self):
        """A socle element that is not annihilated by m is refused"""
        _, R = load("a1_p3")
        x, y, _ = R.ambient.gens()
        chain = [ChainLink(1, R.ideal([x, y]), R.ambient.one())]
        with pytest.raises(HypothesisViolation):
            fsig_function_chain(R, chain, 1)


class TestFedder:
    """Test the hypersurface oracle"""

    def test_agrees_on_a1(self):
        """Fedder's colon formula reproduces a_e on the A1 quadric"""
        _, R = load("a1_p3")
        assert fedder_hypersurface_oracle(R, 2).lengths() == [1, 5, 41]

    def test_agrees_on_node(self):
        """Fedder's colon formula reproduces a_e on the node"""
        _, R = load("node_p2")
        assert fedder_hypersurface_oracle(R, 3).lengths() == [1, 1, 1, 1]

    def test_non_reduced_double_point(self):
        """f = x^2 over F_2 is not F-pure: a_e = 0 for e >= 1"""
        ring = PolyRing.create(2, ["x"])
        x = ring.gen("x")
        R = RingPresentation(ring, [x ** 2])
        assert fedder_hypersurface_oracle(R, 3).lengths() == [1, 0, 0, 0]

    def test_requires_hypersurface(self):
        """A polynomial ring has no single defining equation"""
        _, R = load("regular_p3_d2")
        with pytest.raises(NotHypersurface):
            fedder_hypersurface_oracle(R, 1)


class TestRelativeHilbertKunz:
    """Test relative Hilbert-Kunz differences"""

    def test_regular_unit_element(self):
        """With I = m and x = 1 the difference is l(R/m^[q]) = q^d"""
        _, R = load("regular_p3_d2")
        table = relative_hk(R, R.m, R.ambient.one(), 2)
        assert table.lengths() == [1, 9, 81]

    def test_socle_element_gives_fsig(self):
        """On A1, relative HK of (x, y) at z is the F-splitting number"""
        rf, R = load("a1_p3")
        table = relative_hk(R, rf.ideal(R, "x, y"), rf.element(R, "delta"), 2)
        assert table.lengths() == [1, 5, 41]
        assert set(table.ideals) == {0, 1, 2}

    def test_cusp_identity(self):
        """y is integral over (x) on the cusp: the rows drop to 0 after e = 0"""
        rf, R = load("cusp_p3")
        x, _ = R.ambient.gens()
        table = relative_hk(R, R.ideal([x]), rf.element(R, "socle"), 3)
        assert table.lengths() == [1, 0, 0, 0]
        values = table.normalized()
        assert all(a >= b for a, b in zip(values, values[1:]))
        assert hk_estimate(table).eta == 0

    def test_ratio(self):
        """(l(R/I^[q]) - l(R/m^[q])) / l(m/I) is 1 in a regular ring"""
        rf, R = load("regular_p3_d2")
        table = relative_hk_ratio(R, rf.ideal(R, "I"), R.m, 2)
        assert table.scale == 1
        assert table.lengths() == [1, 9, 81]
        assert set(table.normalized()) == {Fraction(1)}

    def test_ratio_needs_containment(self):
        """I must lie inside J"""
        rf, R = load("regular_p3_d2")
        with pytest.raises(HypothesisViolation):
            relative_hk_ratio(R, R.m, rf.ideal(R, "I"), 1)

    def test_not_m_primary(self):
        """I must be m-primary"""
        _, R = load("regular_p3_d2")
        x, y = R.ambient.gens()
        with pytest.raises(NotZeroDimensional):
            relative_hk(R, R.ideal([x]), y, 1)


class TestTightClosure:
    """Test tight-closure evidence"""

    def test_in_ideal(self):
        """An element of I is reported as such without computing a table"""
        rf, R = load("regular_p3_d2")
        verdict = tc_membership(R, rf.ideal(R, "I"), rf.element(R, "y"), 2)
        assert verdict.status == IN_IDEAL
        assert verdict.table is None

    def test_regular_not_in_closure(self):
        """Regular rings are weakly F-regular: x is not in (x^2, y)*"""
        rf, R = load("regular_p3_d2")
        verdict = tc_membership(R, rf.ideal(R, "I"), rf.element(R, "f"), 2)
        assert verdict.status == NOT_IN_CLOSURE
        assert verdict.table.lengths() == [1, 9, 81]

    def test_a1_not_in_closure(self):
        """The A1 quadric is F-regular: z is not in (x, y)*"""
        rf, R = load("a1_p3")
        verdict = tc_membership(R, rf.ideal(R, "x, y"), rf.element(R, "delta"), 2)
        assert verdict.status == NOT_IN_CLOSURE

    def test_nilpotent_in_closure(self):
        """A nilpotent lies in the tight closure of the zero ideal"""
        rf, R = load("nonreduced_p3")
        verdict = tc_membership(R, rf.ideal(R, "zero"), rf.element(R, "nil"), 3)
        assert verdict.status == IN_CLOSURE_LIKELY
        assert verdict.flags["multiplier_stabilized"]
        assert verdict.table.lengths() == [1, 0, 0, 0]
        x = R.ambient.gen("x")
        assert verdict.multiplier == R.ideal([x])


class TestSplittingPrime:
    """Test the splitting prime probe"""

    def test_strongly_f_regular(self):
        """A1 has splitting prime 0 and splitting dimension 2"""
        rf, R = load("a1_p3")
        result = splitting_prime_probe(R, fsig_ideals_gorenstein(R, rf.system_of_parameters(R), 2))
        assert result.stabilized
        assert result.n_est == 2
        assert result.ideal.is_zero()
        assert result.intersection_colengths == [1, 5, 41]
        assert result.table.diagnostics["growth_n"] == 2

    def test_node(self):
        """The node's F-signature ideals are all m, so the splitting prime is m"""
        _, R = load("node_p2")
        result = splitting_prime_probe(R, fsig_ideals_gorenstein(R, find_sop(R), 2))
        assert result.stabilized
        assert result.n_est == 0
        assert result.ideal == R.m

    def test_node_times_line(self):
        """xy = 0 in three variables: the z^q generators drop out, leaving (x, y) of dimension 1"""
        rf, R = load("node_line_p2")
        x, y, z = R.ambient.gens()
        ideals = fsig_ideals_gorenstein(R, rf.system_of_parameters(R), 2)
        assert ideals[2] == R.ideal([x, y, z ** 4])
        result = splitting_prime_probe(R, ideals)
        assert result.intersection_colengths == [1, 2, 4]
        assert result.stabilized
        assert result.ideal == R.ideal([x, y])
        assert result.n_est == 1
        assert result.ideal.krull_dimension() == result.n_est
        assert result.table.diagnostics["growth_n"] == 1
        assert result.rf_estimate.eta == 1

    def test_unstabilized_uses_growth(self):
        """When the shared generators keep changing, n comes from the growth of a_e"""
        _, R = load("regular_p3_d2")
        x, y = R.ambient.gens()
        ideals = [R.m, R.ideal([x, y ** 3]), R.ideal([x, y ** 9]), R.ideal([x ** 3, y ** 27])]
        result = splitting_prime_probe(R, ideals)
        assert not result.stabilized
        assert result.n_est == 2

    def test_not_f_pure(self):
        """a_1 = 0 means there is no splitting prime"""
        _, R = load("nonreduced_p3")
        with pytest.raises(NotFPure):
            splitting_prime_probe(R, fsig_ideals_gorenstein(R, find_sop(R), 2))

    def test_too_few_ideals(self):
        """At least three F-signature ideals are needed"""
        rf, R = load("a1_p3")
        with pytest.raises(HypothesisViolation):
            splitting_prime_probe(R, fsig_ideals_gorenstein(R, rf.system_of_parameters(R), 1))


class TestSequenceLimit:
    """Test the generic ideal-sequence limit"""

    def test_hk_sequence(self):
        """Frobenius powers of m reproduce the Hilbert-Kunz table"""
        _, R = load("node_p2")
        result = sequence_limit(R, hk_sequence(R.m, 3))
        assert result.table.lengths() == [1, 3, 7, 15]
        assert result.estimate.eta == 2

    def test_half_frobenius(self):
        """I_e = (x^(3^floor(e/2))) has limit 0 while its intersections shrink to 0"""
        rf, R = load("half_frobenius_p3")
        result = sequence_limit(R, rf.sequence(R, "half", 5))
        assert result.table.lengths() == [1, 1, 3, 3, 9, 9]
        assert result.estimate.eta == 0
        assert result.intersection_colengths == [1, 1, 3, 3, 9, 9]
        assert result.intersection.colength() == 9
        assert result.stable_part.is_zero()
        assert result.stable_part_is_zero

    def test_frobenius_powers_have_zero_stable_part(self):
        """The intersections of m^[q] share no generator, so the stable part is 0"""
        _, R = load("regular_p3_d2")
        result = sequence_limit(R, hk_sequence(R.m, 3))
        assert result.intersection_colengths == [1, 9, 81, 729]
        assert result.estimate.eta == 1
        assert result.stable_part_is_zero

    def test_constant_sequence_keeps_its_ideal(self):
        """A sequence that never moves is its own stable part"""
        _, R = load("node_p2")
        result = sequence_limit(R, [R.m] * 3)
        assert result.stable_part == R.m
        assert not result.stable_part_is_zero

    def test_fsig_sequence_of_node_times_line(self):
        """The F-signature ideals (x, y, z^q) leave the nonzero stable part (x, y)"""
        rf, R = load("node_line_p2")
        x, y, _ = R.ambient.gens()
        result = sequence_limit(R, fsig_sequence(R, rf.system_of_parameters(R), 2), d_override=1)
        assert result.table.lengths() == [1, 2, 4]
        assert result.stable_part == R.ideal([x, y])
        assert not result.stable_part_is_zero

    def test_builtin_half_frobenius(self):
        """The built-in half-Frobenius sequence matches the ring file family"""
        rf, R = load("half_frobenius_p3")
        built_in = half_frobenius_sequence(R.m, 5)
        assert built_in == rf.sequence(R, "half", 5)

    def test_fsig_hk_sequence(self):
        """The first t+1 members are the F-signature ideals, then Frobenius powers of I_t"""
        rf, R = load("a1_p3")
        seq = fsig_hk_sequence(R, rf.system_of_parameters(R), 1, 2)
        assert [I.colength() for I in seq[:2]] == [1, 5]
        assert seq[2] == bracket_power(seq[1], 1)

    def test_requires_frobenius_power_inside(self):
        """Every I_e must contain m^[q]"""
        _, R = load("regular_p2_d1")
        x = R.ambient.gen("x")
        with pytest.raises(HypothesisViolation):
            sequence_limit(R, [R.m, R.ideal([x ** 4]), R.ideal([x ** 8])])

    def test_hk_of_fsig_ideal(self):
        """In a regular ring the fsig ideal I_t is m^[p^t] and the rows normalize to 1"""
        _, R = load("regular_p3_d2")
        ideals = fsig_ideals_gorenstein(R, find_sop(R), 1)
        table = hk_of_fsig_ideal_sequence(R, ideals[1], 1, 1)
        assert [r.e for r in table.rows] == [1, 2]
        assert table.lengths() == [9, 81]
        assert set(table.normalized()) == {Fraction(1)}


def random_instance(R, rng):
    """An m-primary ideal (pure powers plus a random element) and a random x"""
    ring = R.ambient
    gens = [v ** rng.randint(1, 3) for v in ring.gens()]

    def element():
        terms = {}
        for _ in range(3):
            exps = tuple(rng.randrange(3) for _ in range(ring.nvars))
            terms[exps] = rng.randrange(R.p)
        f = ring.from_dict(terms)
        return f if not f.is_zero() else ring.gen(rng.randrange(ring.nvars))

    return R.ideal(gens + [element()]), element()


def plane_p2():
    return RingPresentation(PolyRing.create(2, ["x", "y"]))


COLON_RINGS = {
    "plane_p2": plane_p2,
    "node_p2": lambda: load("node_p2")[1],
    "cusp_p3": lambda: load("cusp_p3")[1],
}


class TestColonIdentity:
    """Test l(R/I^[q]) - l(R/(I,x)^[q]) = l(R/(I^[q]:x^q)) on random instances"""

    @pytest.mark.parametrize("seed", range(17))
    @pytest.mark.parametrize("name", sorted(COLON_RINGS))
    def test_random_instances(self, name, seed):
        """relative_hk checks the identity itself and raises on any mismatch"""
        R = COLON_RINGS[name]()
        I, x = random_instance(R, random.Random(seed))
        table = relative_hk(R, I, x, 2)
        assert len(table) == 3
        assert all(length >= 0 for length in table.lengths())

    @pytest.mark.slow
    @pytest.mark.parametrize("seed", range(5))
    def test_random_instances_a1(self, seed):
        """The identity on the A1 quadric"""
        _, R = load("a1_p3")
        I, x = random_instance(R, random.Random(seed))
        assert len(relative_hk(R, I, x, 2)) == 3


class TestInequalities:
    """Test the bounds F-splitting numbers satisfy"""

    @pytest.mark.parametrize("name", ["a1_p3", "node_p2", "cusp_p3", "regular_p3_d2"])
    def test_fsig_below_hk(self, name):
        """a_e <= l(R/m^[q]) and m^[q] lies inside I_e"""
        rf, R = load(name)
        sop = rf.system_of_parameters(R) or find_sop(R)
        try:
            fsig = fsig_function_gorenstein(R, sop, 2)
        except NotGorenstein:
            pytest.skip(f"{name} is not Gorenstein")
        hk = hk_function(R, R.m, 2)
        for a, b in zip(fsig.lengths(), hk.lengths()):
            assert a <= b
        for e in (1, 2):
            assert bracket_power(R.m, e).issubset(fsig.ideals[e])

    @pytest.mark.parametrize("name", ["a1_p3", "node_p2", "regular_p3_d2"])
    def test_colon_inside_fsig_ideal(self, name):
        """(I^[q] : x^q) lies inside I_e whenever x is not in I"""
        rf, R = load(name)
        sop = rf.system_of_parameters(R) or find_sop(R)
        I_e = fsig_ideals_gorenstein(R, sop, 2)
        cases = [(R.m, R.ambient.one())]
        if name == "a1_p3":
            x, y, z = R.ambient.gens()
            cases.append((R.ideal([x ** 2, y, z]), x))
        for I, element in cases:
            table = relative_hk(R, I, element, 2)
            for e in (1, 2):
                assert table.ideals[e].issubset(I_e[e])
                assert table.ideals[e].colength() >= I_e[e].colength()

    @pytest.mark.parametrize("name", ["a1_p3", "node_p2", "cusp_p3", "regular_p3_d2"])
    def test_estimates_in_range(self, name):
        """The F-signature estimate lies in [0, 1] and e_HK(m) is at least 1 up to the error bound"""
        rf, R = load(name)
        sop = rf.system_of_parameters(R) or find_sop(R)
        s = hk_estimate(fsig_function_gorenstein(R, sop, 2))
        hk = hk_estimate(hk_function(R, R.m, 2))
        assert 0 <= s.eta <= 1
        assert hk.eta >= 1 - Fraction(hk.error_bound)


class TestIndependence:
    """Test that F-splitting numbers do not depend on auxiliary choices"""

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_sop_choice_a1(self, seed):
        """A random linear system of parameters gives the same a_1 as (x, y)"""
        _, R = load("a1_p3")
        x, y, _ = R.ambient.gens()
        variables = fsig_function_gorenstein(R, SOP((x, y)), 1)
        random_sop = find_sop(R, seed=seed, prefer_variables=False)
        assert fsig_function_gorenstein(R, random_sop, 1).lengths() == variables.lengths()

    def test_sop_choice_node(self):
        """Different seeds on the node give identical rows"""
        _, R = load("node_p2")
        first = fsig_function_gorenstein(R, find_sop(R, seed=0), 3)
        second = fsig_function_gorenstein(R, find_sop(R, seed=7), 3)
        assert first.lengths() == second.lengths() == [1, 1, 1, 1]

    def test_socle_generator_choice(self):
        """Replacing delta by u*delta + j keeps every colon colength"""
        from frobkit.ideals import ideal_colon

        _, R = load("a1_p3")
        x, y, z = R.ambient.gens()
        J = R.ideal([x, y])
        for delta in (z, 2 * z, 2 * z + x, z + x * y + y):
            lengths = [
                ideal_colon(bracket_power(J, e), delta.frobenius(e)).colength()
                for e in (0, 1, 2)
            ]
            assert lengths == [1, 5, 41]


class TestEnvelope:
    """Test the empirical convergence envelope on corpus tables"""

    @pytest.mark.parametrize("name,kind,e_max", [
        ("regular_p2_d1", "hk", 3),
        ("node_p2", "hk", 3),
        ("node_p2", "fsig", 3),
        ("cusp_p3", "hk", 3),
        ("a1_p3", "hk", 2),
        ("a1_p3", "fsig", 2),
    ])
    def test_bounded_by_first_step(self, name, kind, e_max):
        """|normalized_(e+1) - normalized_e| * p^e stays within 10x its e = 1 value"""
        rf, R = load(name)
        if kind == "hk":
            table = hk_function(R, R.m, e_max)
        else:
            sop = rf.system_of_parameters(R) or find_sop(R)
            table = fsig_function_gorenstein(R, sop, e_max)
        envelope = table.envelope()
        assert max(envelope[1:]) <= 10 * envelope[1]


class TestRegularExactness:
    """Test that polynomial rings give exact rows and exact estimates"""

    GRID = [(p, d) for p in (2, 3, 5) for d in (1, 2, 3)]

    @pytest.mark.parametrize("p,d", GRID)
    def test_rows_are_powers_of_q(self, p, d):
        """hk and fsig rows are q^d, both estimates are 1 with error bound 0"""
        R = RingPresentation(PolyRing.create(p, ["x", "y", "z"][:d]))
        e_max = 2 if (p, d) == (5, 3) else 3
        expected = [p ** (e * d) for e in range(e_max + 1)]
        hk = hk_function(R, R.m, e_max)
        fsig = fsig_function_gorenstein(R, find_sop(R), e_max)
        assert hk.lengths() == expected
        assert fsig.lengths() == expected
        for table in (hk, fsig):
            estimate = hk_estimate(table)
            assert estimate.eta == 1
            assert estimate.error_bound == 0

import pytest

from kleinring.catalog import (
    ExceptionalPoint,
    FamilyBase,
    FamilyId,
    FreeId,
    SumId,
    TubeId,
    atom,
    build,
    make_free,
    translate_family,
    tube_lattice,
)
from kleinring.cohomology import (
    CheckResult,
    CheckStatus,
    check_differentials,
    check_duality,
    check_kill,
    check_resolutions,
    check_shift,
    cohomology_H,
    compare,
    expected,
    expected_homology,
    expected_homology_bar,
    fingerprint,
    full_coboundary,
    hom_coboundary,
    homology_bar,
    homology_H,
    slot_count,
    tate,
    tate_via_full_resolution,
    tensor_boundary,
)
from kleinring.config import EngineConfig
from kleinring.dvr import ModuleInvariant, TruncatedDVR
from kleinring.errors import UnknownFamily
from kleinring.lattice import TypedLattice
from kleinring.ring import TYPES, CharacterType

k = ModuleInvariant.elementary


@pytest.mark.parametrize("n,count", [(0, 1), (3, 4), (-1, 1), (-4, 4)])
def test_slot_count(n: int, count: int):
    assert slot_count(n) == count


class TestComplexes:
    @pytest.mark.parametrize("n", range(-4, 4))
    def test_full_coboundary_squares_to_zero(self, lattice_A: TypedLattice, ring: TruncatedDVR, n: int):
        product = ring.matmul(full_coboundary(lattice_A, n - 1), full_coboundary(lattice_A, n))
        assert ring.is_zero(product)

    @pytest.mark.parametrize("n", range(0, 4))
    def test_shapes(self, lattice_A: TypedLattice, n: int):
        assert hom_coboundary(lattice_A, n).shape == (4 * (n + 1), 4 * (n + 2))
        assert tensor_boundary(lattice_A, n + 1).shape == (4 * (n + 2), 4 * (n + 1))

    def test_negative_degrees_rejected(self, lattice_A: TypedLattice):
        with pytest.raises(ValueError):
            hom_coboundary(lattice_A, -1)
        with pytest.raises(ValueError):
            tensor_boundary(lattice_A, -1)

    @pytest.mark.parametrize("n", range(-3, 4))
    def test_check_differentials(self, lattice_A: TypedLattice, n: int):
        assert check_differentials(lattice_A, n).status is CheckStatus.PASS


class TestTate:
    @pytest.mark.parametrize(
        "n,group",
        [
            (0, ModuleInvariant(0, (2,))),
            (-1, ModuleInvariant()),
            (1, ModuleInvariant()),
            (2, k(2)),
            (-2, k(2)),
        ],
    )
    def test_R_pp(self, lattice_R_pp: TypedLattice, n: int, group: ModuleInvariant):
        assert tate(lattice_R_pp, n) == group

    @pytest.mark.parametrize("n,group", [(0, k(0)), (-1, k(1)), (1, k(1)), (2, k(1))])
    def test_R_00(self, lattice_R_00: TypedLattice, n: int, group: ModuleInvariant):
        assert tate(lattice_R_00, n) == group

    def test_A_degree_zero(self, lattice_A: TypedLattice):
        assert tate(lattice_A, 0) == k(1)

    def test_free_is_acyclic(self, ring: TruncatedDVR):
        free = make_free(1, ring)
        assert all(tate(free, n).is_zero for n in range(-3, 4))

    @pytest.mark.parametrize("p", [2, 3])
    @pytest.mark.parametrize("base", list(FamilyBase))
    @pytest.mark.parametrize("shift", [-1, 0, 1])
    def test_families(self, p: int, base: FamilyBase, shift: int):
        config = EngineConfig(p=p)
        family = FamilyId(base, shift)
        lattice = translate_family(family, config)
        for n in range(-3, 4):
            assert tate(lattice, n) == expected(family, n)

    @pytest.mark.parametrize(
        "tube",
        [
            TubeId(ExceptionalPoint.ONE, 1, 1),
            TubeId(ExceptionalPoint.ONE, 1, 2),
            TubeId(ExceptionalPoint.ZERO, 2, 1),
            TubeId(ExceptionalPoint.INFINITY, 3, 2),
            TubeId((1, 1, 1), 1),
            TubeId((1, 1, 1), 2),
        ],
    )
    def test_tubes(self, tube: TubeId, config: EngineConfig):
        lattice = tube_lattice(tube, config)
        groups = [tate(lattice, n) for n in range(-3, 4)]
        assert all(group.is_elementary for group in groups)
        assert groups == [expected(tube, n) for n in range(-3, 4)]

    @pytest.mark.parametrize("n", range(-3, 4))
    def test_complete_resolution_agrees(self, lattice_A: TypedLattice, n: int):
        assert tate_via_full_resolution(lattice_A, n) == tate(lattice_A, n)

    @pytest.mark.parametrize("n", range(1, 4))
    def test_positive_degrees_are_cohomology(self, lattice_A: TypedLattice, n: int):
        assert tate(lattice_A, n) == cohomology_H(lattice_A, n)

    def test_additive(self, config: EngineConfig):
        description = SumId((FamilyId(FamilyBase.A), FamilyId(FamilyBase.R_0P, 1), FreeId(1)))
        lattice = build(description, config)
        for n in range(-2, 3):
            assert tate(lattice, n) == expected(description, n)


class TestHomology:
    @pytest.mark.parametrize("base", list(FamilyBase))
    @pytest.mark.parametrize("n", range(0, 5))
    def test_bases(self, config: EngineConfig, base: FamilyBase, n: int):
        lattice = translate_family(FamilyId(base), config)
        assert homology_H(lattice, n) == expected_homology(base, n)

    def test_degree_zero(self, lattice_R_pp: TypedLattice, lattice_R_00: TypedLattice):
        assert homology_H(lattice_R_pp, 0) == ModuleInvariant(1)
        assert homology_H(lattice_R_00, 0) == k(1)
        assert homology_H(lattice_R_00, -1).is_zero

    @pytest.mark.parametrize("t", TYPES)
    @pytest.mark.parametrize("n", range(0, 5))
    def test_one_variable(self, ring: TruncatedDVR, t: CharacterType, n: int):
        lattice = atom(t, ring)
        assert homology_bar(lattice, n, "x") == expected_homology_bar(t.x_is_p, n)
        assert homology_bar(lattice, n, "y") == expected_homology_bar(t.y_is_p, n)

    def test_unknown_variable(self, lattice_A: TypedLattice):
        with pytest.raises(ValueError):
            homology_bar(lattice_A, 0, "z")


class TestClosedForms:
    @pytest.mark.parametrize(
        "description,n,group",
        [
            (FamilyId(FamilyBase.A), 3, k(4)),
            (FamilyId(FamilyBase.A, 2), 0, k(2)),
            (FamilyId(FamilyBase.R_PP, 1), 1, ModuleInvariant(0, (2,))),
            (FamilyId(FamilyBase.R_P0), -3, k(2)),
            (TubeId((1, 0, 1, 1), 2), 5, k(6)),
            (TubeId(ExceptionalPoint.ONE, 4, 1), 1, k(2)),
            (TubeId(ExceptionalPoint.ONE, 3, 1), 2, k(2)),
            (TubeId(ExceptionalPoint.ONE, 3, 1), 1, k(1)),
            (FreeId(3), 0, ModuleInvariant()),
        ],
    )
    def test_expected(self, description, n: int, group: ModuleInvariant):
        assert expected(description, n) == group

    def test_unknown(self):
        with pytest.raises(UnknownFamily):
            expected("A", 0)  # type: ignore[arg-type]

    def test_homology_of_A(self):
        assert expected_homology(FamilyBase.A, 0) == ModuleInvariant(1, (1,))
        assert expected_homology(FamilyBase.A, 2) == k(3)


class TestChecks:
    def test_compare(self):
        assert compare("same", k(1), k(1)).status is CheckStatus.PASS
        result = compare("different", k(1), k(2), "note")
        assert result.failed
        assert result.to_dict() == {
            "name": "different",
            "status": "fail",
            "expected": "k",
            "computed": "k^2",
            "note": "note",
        }

    def test_discrepancy_is_not_failure(self):
        assert not CheckResult("table", CheckStatus.DISCREPANCY).failed

    @pytest.mark.parametrize("n", range(-2, 3))
    def test_lattice_checks(self, lattice_A: TypedLattice, n: int):
        for check in (check_shift, check_duality, check_kill, check_resolutions):
            assert check(lattice_A, n).status is CheckStatus.PASS

    def test_kill_degree_zero(self, lattice_R_pp: TypedLattice):
        assert check_kill(lattice_R_pp, 0).status is CheckStatus.PASS

    @pytest.mark.parametrize("shift", [-3, -1, 1, 2])
    def test_kill_translated_R_pp(self, config: EngineConfig, shift: int):
        lattice = translate_family(FamilyId(FamilyBase.R_PP, shift), config)
        assert tate(lattice, shift) == ModuleInvariant(0, (2,))
        result = check_kill(lattice, shift)
        assert result.status is CheckStatus.PASS
        assert result.expected == "exponents ≤ 2"

    def test_kill_without_pp(self, lattice_R_00: TypedLattice):
        result = check_kill(lattice_R_00, 0)
        assert result.status is CheckStatus.PASS
        assert result.expected == "exponents ≤ 1"


def test_fingerprint(lattice_A: TypedLattice, config: EngineConfig, ring: TruncatedDVR):
    again = translate_family(FamilyId(FamilyBase.A), config)
    assert fingerprint(lattice_A) == fingerprint(again)
    assert fingerprint(lattice_A) != fingerprint(atom(CharacterType.PP, ring))
    assert len(fingerprint(lattice_A).groups) == 9

import numpy as np
import pytest

from kleinring.catalog import (
    CACHE_SIZE,
    ExceptionalPoint,
    FamilyBase,
    FamilyId,
    FreeId,
    SumId,
    TubeId,
    build,
    check_homogeneous_point,
    companion,
    compare_rank,
    default_homogeneous_points,
    displayed_rank,
    exceptional_rep,
    exceptional_tube,
    expected_exceptional_rank,
    format_poly,
    homogeneous_rep,
    homogeneous_tube,
    translate_family,
    tube_lattice,
    tube_sequence,
)
from kleinring.cohomology import fingerprint
from kleinring.config import EngineConfig
from kleinring.errors import InvalidTube, NotHomogeneousPoint, TranslateBoundExceeded
from kleinring.lattice import tau, tau_inverse
from kleinring.quiver import VectorRank, charpoly_mod, is_indecomposable, validate
from kleinring.ring import CharacterType

ONE, ZERO, INFINITY = ExceptionalPoint.ONE, ExceptionalPoint.ZERO, ExceptionalPoint.INFINITY


class TestIdentifiers:
    @pytest.mark.parametrize(
        "description,label",
        [
            (FamilyId(FamilyBase.A), "A"),
            (FamilyId(FamilyBase.R_PP, -2), "R[pp]^-2"),
            (TubeId((1, 1, 1), 2), "tube(f=t^2+t+1,n=2)"),
            (TubeId(INFINITY, 3, 2), "etube(l=inf,i=2,n=3)"),
            (FreeId(2), "free(2)"),
            (SumId((FamilyId(FamilyBase.A, 1), FreeId(1))), "sum(A^1,free(1))"),
        ],
    )
    def test_label(self, description, label: str):
        assert description.label == label

    def test_character(self):
        assert FamilyBase.A.character is None
        assert FamilyBase.R_0P.character is CharacterType.ZP
        assert FamilyBase.of(CharacterType.P0) is FamilyBase.R_P0

    @pytest.mark.parametrize(
        "point,layer,branch",
        [
            ((1, 1, 1), 0, None),
            (ONE, 1, None),
            (ONE, 1, 3),
            ((1, 1, 1), 1, 1),
        ],
    )
    def test_invalid_tube(self, point, layer: int, branch):
        with pytest.raises(InvalidTube):
            TubeId(point, layer, branch)

    def test_degree(self):
        assert TubeId((1, 0, 1, 1), 1).degree == 3
        assert TubeId(ZERO, 4, 1).degree == 1


@pytest.mark.parametrize(
    "coefficients,text",
    [
        ((1, 0, 1, 1), "t^3+t+1"),
        ((1, 2), "t+2"),
        ((2, 0), "2t"),
        ((1, 0, 0), "t^2"),
    ],
)
def test_format_poly(coefficients, text: str):
    assert format_poly(coefficients) == text


class TestRankTable:
    @pytest.mark.parametrize(
        "family,rank",
        [
            (FamilyId(FamilyBase.A), VectorRank(1, 1, 1, 1, 1)),
            (FamilyId(FamilyBase.A, 2), VectorRank(3, 2, 2, 2, 2)),
            (FamilyId(FamilyBase.A, -1), VectorRank(3, 2, 2, 2, 2)),
            (FamilyId(FamilyBase.R_PP), VectorRank(1, 1, 0, 0, 0)),
            (FamilyId(FamilyBase.R_P0), VectorRank(1, 0, 1, 0, 0)),
            (FamilyId(FamilyBase.R_00), VectorRank(1, 0, 0, 0, 1)),
        ],
    )
    def test_displayed(self, family: FamilyId, rank: VectorRank):
        assert displayed_rank(family) == rank

    @pytest.mark.parametrize("base", list(FamilyBase))
    def test_bases_match(self, base: FamilyBase, config: EngineConfig):
        assert compare_rank(FamilyId(base), config).matches

    def test_bound(self):
        with pytest.raises(TranslateBoundExceeded):
            translate_family(FamilyId(FamilyBase.A, 2), EngineConfig(translate_bound=1))

    def test_label(self, config: EngineConfig):
        assert translate_family(FamilyId(FamilyBase.R_00, 1), config).label == "R[00]^1"

    @pytest.mark.parametrize("base", [b for b in FamilyBase if b is not FamilyBase.A])
    def test_syzygy_rank(self, base: FamilyBase, config: EngineConfig):
        first = translate_family(FamilyId(base, 1), config)
        second = translate_family(FamilyId(base, 2), config)
        assert (first.rank, second.rank) == (3, 5)


class TestHomogeneousPoints:
    @pytest.mark.parametrize(
        "coefficients,p",
        [((1, 1, 1), 2), ((1, 0, 1, 1), 2), ((1, 1), 3), ((1, 0, 1), 3), ((1, 3), 5)],
    )
    def test_valid(self, coefficients, p: int):
        check_homogeneous_point(coefficients, p)

    @pytest.mark.parametrize(
        "coefficients,p,error",
        [
            ((1, 0), 2, NotHomogeneousPoint),
            ((1, 1), 2, NotHomogeneousPoint),
            ((1, 2), 3, NotHomogeneousPoint),
            ((1, 0, 1), 2, InvalidTube),
            ((2, 1), 3, InvalidTube),
            ((1,), 3, InvalidTube),
            ((1, 0, 0, 1), 2, InvalidTube),
        ],
    )
    def test_invalid(self, coefficients, p: int, error):
        with pytest.raises(error):
            check_homogeneous_point(coefficients, p)

    @pytest.mark.parametrize("p", [2, 3, 5, 7])
    def test_defaults(self, p: int):
        points = default_homogeneous_points(p)
        assert len(points) == 2
        for point in points:
            check_homogeneous_point(point, p)

    def test_companion(self):
        f = companion((1, 0, 1, 1), 2)
        assert [int(c) % 2 for c in charpoly_mod(f, 2).all_coeffs()] == [1, 0, 1, 1]


class TestTubes:
    @pytest.mark.parametrize(
        "coefficients,layer,p,rank",
        [
            ((1, 1, 1), 1, 2, VectorRank(4, 2, 2, 2, 2)),
            ((1, 1, 1), 2, 2, VectorRank(8, 4, 4, 4, 4)),
            ((1, 1), 2, 3, VectorRank(4, 2, 2, 2, 2)),
        ],
    )
    def test_homogeneous_rank(self, coefficients, layer: int, p: int, rank: VectorRank):
        rep = homogeneous_rep(coefficients, layer, p)
        assert rep.rank == rank
        assert validate(rep).ok

    def test_homogeneous_indecomposable(self, config: EngineConfig):
        assert is_indecomposable(homogeneous_rep((1, 1, 1), 2, 2), config)

    @pytest.mark.parametrize(
        "point,branch,layer,rank",
        [
            (ONE, 1, 1, VectorRank(1, 1, 1, 0, 0)),
            (ONE, 2, 1, VectorRank(1, 0, 0, 1, 1)),
            (ZERO, 1, 1, VectorRank(1, 1, 0, 0, 1)),
            (INFINITY, 1, 1, VectorRank(1, 1, 0, 1, 0)),
            (ONE, 1, 2, VectorRank(2, 1, 1, 1, 1)),
            (ONE, 1, 3, VectorRank(3, 2, 2, 1, 1)),
            (ZERO, 2, 3, VectorRank(3, 1, 2, 2, 1)),
        ],
    )
    def test_exceptional_rank(self, point, branch: int, layer: int, rank: VectorRank):
        assert expected_exceptional_rank(point, branch, layer) == rank

    @pytest.mark.parametrize("point", list(ExceptionalPoint))
    @pytest.mark.parametrize("branch", [1, 2])
    @pytest.mark.parametrize("layer", [1, 2, 3, 4])
    def test_exceptional_rep(self, point, branch: int, layer: int, config: EngineConfig):
        rep = exceptional_rep(point, branch, layer, config)
        assert rep.rank == expected_exceptional_rank(point, branch, layer)
        assert validate(rep).ok
        assert is_indecomposable(rep, config)

    def test_tube_lattice_is_regular(self, config: EngineConfig):
        lattice = tube_lattice(TubeId(ONE, 3, 2), config)
        assert lattice.vector_rank.is_regular
        assert lattice.label == "etube(l=1,i=2,n=3)"

    @pytest.mark.parametrize(
        "coefficients,layer,p,rank",
        [
            ((1, 3), 1, 5, VectorRank(2, 1, 1, 1, 1)),
            ((1, 1, 1), 2, 2, VectorRank(8, 4, 4, 4, 4)),
        ],
    )
    def test_homogeneous_tube(self, coefficients, layer: int, p: int, rank: VectorRank):
        config = EngineConfig(p=p)
        lattice = homogeneous_tube(coefficients, layer, config)
        assert lattice.vector_rank == rank
        assert lattice is tube_lattice(TubeId(coefficients, layer), config)

    def test_homogeneous_tube_is_translate_fixed(self):
        lattice = homogeneous_tube((1, 3), 1, EngineConfig(p=5))
        assert fingerprint(tau(lattice)) == fingerprint(lattice)

    def test_exceptional_tube(self, config: EngineConfig):
        assert exceptional_tube(ONE, 2, 3, config).vector_rank == VectorRank(3, 1, 1, 2, 2)
        lattice = exceptional_tube(ZERO, 1, 2, config)
        assert lattice.vector_rank == VectorRank(2, 1, 1, 1, 1)
        assert fingerprint(lattice) != fingerprint(homogeneous_tube((1, 1, 1), 1, config))

    def test_translate_swaps_branches(self, config: EngineConfig):
        mouth = exceptional_tube(ONE, 1, 1, config)
        assert tau(mouth).vector_rank == VectorRank(1, 0, 0, 1, 1)
        third = exceptional_tube(ONE, 2, 3, config)
        assert fingerprint(tau_inverse(tau(third))) == fingerprint(third)


class TestSequences:
    @pytest.mark.parametrize(
        "tube",
        [
            TubeId(ONE, 2, 1),
            TubeId(ZERO, 3, 2),
            TubeId(INFINITY, 2, 2),
            TubeId((1, 1, 1), 2),
        ],
    )
    def test_exact(self, tube: TubeId, config: EngineConfig):
        seq = tube_sequence(tube, config)
        assert seq.violations() == []
        assert seq.sub.vector_rank + seq.quotient.vector_rank == seq.middle.vector_rank

    def test_mouth_has_no_sequence(self, config: EngineConfig):
        with pytest.raises(InvalidTube):
            tube_sequence(TubeId(ONE, 1, 1), config)


class TestBuild:
    def test_sum(self, config: EngineConfig):
        lattice = build(SumId((FamilyId(FamilyBase.A), FreeId(1))), config)
        assert lattice.vector_rank == VectorRank(2, 2, 2, 2, 2)
        assert lattice.label == "sum(A,free(1))"

    def test_cached(self, config: EngineConfig):
        tube = TubeId((1, 1, 1), 1)
        assert build(tube, config) is build(tube, config)

    @pytest.mark.parametrize("builder", [build, translate_family, tube_lattice])
    def test_cache_is_bounded(self, builder):
        assert builder.cache_info().maxsize == CACHE_SIZE

    def test_free(self, config: EngineConfig):
        lattice = build(FreeId(3), config)
        assert lattice.free_rank == 3
        assert not np.any(lattice.reduction)

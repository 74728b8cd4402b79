import numpy as np
import pytest

from kleinring.catalog import ExceptionalPoint, TubeId, tube_lattice, tube_sequence
from kleinring.cocycles import (
    Cochain,
    coboundary_witness,
    hat_xi,
    hull_slot,
    is_cocycle,
    les_check,
    m_slot,
    omega_exact_check,
    reading,
    slot_type,
    verify_class_iso,
    xi,
)
from kleinring.cohomology import CheckStatus, full_coboundary, tate
from kleinring.config import EngineConfig
from kleinring.errors import ElementNotInSlot, NotExact, NotRegular
from kleinring.lattice import ShortExactSeq, TypedLattice, split_sequence, type_columns
from kleinring.ring import CharacterType

ONE, ZERO, INFINITY = ExceptionalPoint.ONE, ExceptionalPoint.ZERO, ExceptionalPoint.INFINITY


@pytest.mark.parametrize(
    "tube,n,t",
    [
        (TubeId(ONE, 1, 1), 2, CharacterType.PP),
        (TubeId(ONE, 1, 1), 1, CharacterType.ZP),
        (TubeId(ZERO, 2, 2), -3, CharacterType.ZP),
        (TubeId(INFINITY, 1, 2), 3, CharacterType.P0),
        (TubeId(INFINITY, 1, 2), -2, CharacterType.PP),
        (TubeId((1, 1, 1), 1), -1, CharacterType.ZP),
    ],
)
def test_slot_type(tube: TubeId, n: int, t: CharacterType):
    assert slot_type(tube, n) is t


class TestCocycles:
    def test_slot_of_non_regular(self, lattice_A: TypedLattice, mouth: TubeId):
        with pytest.raises(NotRegular):
            m_slot(lattice_A, mouth, 2)

    def test_slot_dimensions(self, mouth_lattice: TypedLattice, mouth: TubeId):
        assert m_slot(mouth_lattice, mouth, 2).shape[0] == 1
        assert m_slot(mouth_lattice, mouth, 1).shape[0] == 0

    def test_xi(self, mouth_lattice: TypedLattice, mouth: TubeId):
        (a,) = m_slot(mouth_lattice, mouth, 2)
        cochain = xi(mouth_lattice, mouth, a, 2)
        assert cochain.values.shape == (3, 2)
        assert is_cocycle(cochain)
        assert coboundary_witness(cochain) is None

    def test_p_times_xi_is_a_coboundary(self, mouth_lattice: TypedLattice, mouth: TubeId):
        ring = mouth_lattice.ring
        (a,) = m_slot(mouth_lattice, mouth, 2)
        cochain = xi(mouth_lattice, mouth, ring.array(ring.p * a), 2)
        witness = coboundary_witness(cochain)
        assert witness is not None
        assert witness.degree == 1
        image = ring.matmul(witness.vector.reshape(1, -1), full_coboundary(mouth_lattice, 1))
        assert np.array_equal(image[0], cochain.vector)

    def test_hat_xi(self, mouth_lattice: TypedLattice, mouth: TubeId):
        (a,) = hull_slot(mouth_lattice, mouth, -2)
        assert a.tolist() == [1, 0]
        cochain = hat_xi(mouth_lattice, mouth, a, -2)
        assert cochain.values.shape == (2, 2)
        assert is_cocycle(cochain)
        assert coboundary_witness(cochain) is None
        assert reading(cochain.vector, mouth_lattice, mouth, -2).tolist() == [[1]]

    def test_hat_xi_outside_hull_slot(self, mouth_lattice: TypedLattice, mouth: TubeId):
        with pytest.raises(ElementNotInSlot):
            hat_xi(mouth_lattice, mouth, mouth_lattice.ring.array([0, 1]), -2)
        with pytest.raises(ElementNotInSlot):
            hat_xi(mouth_lattice, mouth, mouth_lattice.ring.array([1, 0, 0]), -2)

    @pytest.mark.parametrize(
        "tube", [TubeId(ONE, 1, 1), TubeId(ONE, 1, 2), TubeId((1, 1, 1), 1), TubeId(INFINITY, 1, 1)]
    )
    @pytest.mark.parametrize("n", [-1, -2, -3])
    def test_hat_xi_is_not_a_coboundary(self, tube: TubeId, n: int, config: EngineConfig):
        lattice = tube_lattice(tube, config)
        basis = hull_slot(lattice, tube, n)
        columns = type_columns(lattice.types)[slot_type(tube, n)]
        assert basis.shape[0] == tate(lattice, n).length
        for a in basis:
            cochain = hat_xi(lattice, tube, a, n)
            assert is_cocycle(cochain)
            assert coboundary_witness(cochain) is None
            assert reading(cochain.vector, lattice, tube, n)[0].tolist() == a[columns].tolist()

    def test_eigen_element_in_negative_degree_is_a_coboundary(self, config: EngineConfig):
        tube = TubeId(ONE, 1, 2)
        lattice = tube_lattice(tube, config)
        (a,) = m_slot(lattice, tube, -1)
        values = lattice.ring.zeros(1, lattice.rank)
        values[0] = a
        assert coboundary_witness(Cochain(lattice, -1, values)) is not None

    def test_element_not_in_slot(self, mouth_lattice: TypedLattice, mouth: TubeId):
        with pytest.raises(ElementNotInSlot):
            xi(mouth_lattice, mouth, mouth_lattice.ring.array([1, 0]), 2)

    def test_degree_sign(self, mouth_lattice: TypedLattice, mouth: TubeId):
        a = mouth_lattice.ring.zeros(1, 2)[0]
        with pytest.raises(ValueError):
            xi(mouth_lattice, mouth, a, 0)
        with pytest.raises(ValueError):
            hat_xi(mouth_lattice, mouth, a, 1)

    def test_from_vector(self, mouth_lattice: TypedLattice):
        cochain = Cochain.from_vector(mouth_lattice, -3, np.arange(6))
        assert cochain.values.shape == (3, 2)
        assert cochain.vector.tolist() == list(range(6))


class TestClassIsomorphism:
    @pytest.mark.parametrize(
        "tube",
        [
            TubeId(ONE, 1, 1),
            TubeId(ONE, 1, 2),
            TubeId(ONE, 2, 2),
            TubeId(ZERO, 2, 1),
            TubeId(INFINITY, 1, 1),
            TubeId(INFINITY, 2, 2),
            TubeId((1, 1, 1), 1),
        ],
    )
    @pytest.mark.parametrize("n", [-3, -2, -1, 1, 2, 3])
    def test_exceptional_and_homogeneous(self, tube: TubeId, n: int, config: EngineConfig):
        lattice = tube_lattice(tube, config)
        result = verify_class_iso(lattice, tube, n, config)
        assert result.status is CheckStatus.PASS, result

    def test_degree_zero_rejected(self, mouth_lattice: TypedLattice, mouth: TubeId, config: EngineConfig):
        with pytest.raises(ValueError):
            verify_class_iso(mouth_lattice, mouth, 0, config)

    def test_sampled(self, config3: EngineConfig):
        tube = TubeId((1, 0, 1), 2)
        lattice = tube_lattice(tube, config3)
        result = verify_class_iso(lattice, tube, 2, config3)
        assert result.status is CheckStatus.PASS
        assert "sampled" in result.note


class TestSequences:
    @pytest.mark.parametrize(
        "tube",
        [TubeId(ONE, 2, 1), TubeId(ONE, 3, 2), TubeId(INFINITY, 2, 1), TubeId((1, 1, 1), 2)],
    )
    @pytest.mark.parametrize("n", [-2, -1, 1, 2])
    def test_les(self, tube: TubeId, n: int, config: EngineConfig):
        result = les_check(tube_sequence(tube, config), n)
        assert result.status is CheckStatus.PASS, result

    @pytest.mark.parametrize("tube", [TubeId(ONE, 2, 1), TubeId(ZERO, 3, 1), TubeId((1, 1, 1), 2)])
    def test_omega_exact(self, tube: TubeId, config: EngineConfig):
        results = omega_exact_check(tube_sequence(tube, config))
        assert [r.name.split()[0] for r in results] == ["generators", "horseshoe", "syzygy", "cosyzygy"]
        assert not any(r.failed for r in results), results

    def test_non_regular(self, lattice_A: TypedLattice, lattice_R_pp: TypedLattice):
        with pytest.raises(NotRegular):
            les_check(split_sequence(lattice_R_pp, lattice_A), 1)

    def test_not_exact(self, config: EngineConfig):
        seq = tube_sequence(TubeId(ONE, 2, 1), config)
        broken = ShortExactSeq(
            seq.sub, seq.middle, seq.quotient, seq.inclusion, seq.middle.ring.array(0 * seq.projection)
        )
        with pytest.raises(NotExact):
            les_check(broken, 1)
        with pytest.raises(NotExact):
            omega_exact_check(broken)

import numpy as np
import pytest

from kleinring.dvr import TruncatedDVR
from kleinring.ring import (
    AElem,
    CharacterType,
    KElem,
    act,
    embed,
    regular_action,
    regular_embedding,
    type_values,
)


@pytest.fixture(scope="module")
def ring5() -> TruncatedDVR:
    return TruncatedDVR(5)


class TestCharacterType:
    @pytest.mark.parametrize(
        "t,alpha,beta,z",
        [
            (CharacterType.PP, 5, 5, 5),
            (CharacterType.P0, 5, 0, 0),
            (CharacterType.ZP, 0, 5, 0),
            (CharacterType.ZZ, 0, 0, 0),
        ],
    )
    def test_values(self, t: CharacterType, alpha: int, beta: int, z: int):
        assert (t.alpha(5), t.beta(5), t.z_value(5)) == (alpha, beta, z)

    def test_type_values(self):
        xs, ys, zs = type_values([CharacterType.P0, CharacterType.ZP], 3)
        assert (xs, ys, zs) == ([3, 0], [0, 3], [0, 0])


class TestKElem:
    def test_relations(self, ring5: TruncatedDVR):
        x, y = KElem.x(ring5), KElem.y(ring5)
        assert x * x == x.scale(5)
        assert y * y == y.scale(5)
        assert x * y == KElem(0, 0, 0, 1, ring5)
        assert (x * y) * x == KElem(0, 0, 0, 5, ring5)

    @pytest.mark.parametrize(
        "a,b",
        [
            ((1, 2, 3, 4), (4, 3, 2, 1)),
            ((0, 1, 1, 0), (7, 0, 5, 2)),
            ((3, 0, 0, 9), (0, 0, 1, 1)),
        ],
    )
    def test_embedding_is_multiplicative(self, ring5: TruncatedDVR, a, b):
        first, second = KElem(*a, ring5), KElem(*b, ring5)
        assert embed(first * second) == embed(first) * embed(second)
        assert embed(first + second) == embed(first) + embed(second)

    def test_embed(self, ring5: TruncatedDVR):
        assert embed(KElem.x(ring5) * KElem.y(ring5)).values == (25, 0, 0, 0)
        assert embed(KElem.x(ring5)).values == (5, 5, 0, 0)
        assert embed(KElem.y(ring5)).values == (5, 0, 5, 0)

    def test_to_A(self, ring5: TruncatedDVR):
        xy = KElem(0, 0, 0, 1, ring5)
        assert xy.to_A() == AElem(0, 0, 0, 5, ring5)
        assert embed(xy) == embed(xy.to_A())


class TestAElem:
    def test_z(self, ring5: TruncatedDVR):
        z = AElem.z(ring5)
        assert z * z == AElem(0, 0, 0, 5, ring5)
        assert embed(z).values == (5, 0, 0, 0)

    def test_embedding_is_multiplicative(self, ring5: TruncatedDVR):
        a, b = AElem(1, 2, 0, 3, ring5), AElem(0, 1, 4, 2, ring5)
        assert embed(a * b) == embed(a) * embed(b)

    def test_to_K(self, ring5: TruncatedDVR):
        assert AElem(1, 0, 0, 10, ring5).to_K() == KElem(1, 0, 0, 2, ring5)
        assert not AElem.z(ring5).in_K()
        with pytest.raises(ValueError):
            AElem.z(ring5).to_K()


def test_act(ring5: TruncatedDVR):
    x = embed(KElem.x(ring5))
    v = act(x, [1, 1, 1], [CharacterType.PP, CharacterType.ZP, CharacterType.P0])
    assert v.tolist() == [5, 0, 5]


@pytest.mark.parametrize("p", [2, 3, 5])
def test_regular_action_matches_embedding(p: int):
    ring = TruncatedDVR(p)
    x, y = regular_action(ring)
    embedding = regular_embedding(ring)
    x_scale = np.array([p, p, 0, 0])
    y_scale = np.array([p, 0, p, 0])
    assert np.array_equal(ring.matmul(x, embedding), ring.array(embedding * x_scale))
    assert np.array_equal(ring.matmul(y, embedding), ring.array(embedding * y_scale))

import pytest

from kleinring.catalog import ExceptionalPoint, FamilyBase, FamilyId, FreeId, SumId, TubeId
from kleinring.errors import ParseError, SemanticError
from kleinring.notation import parse_spec


@pytest.mark.parametrize(
    "text,p,description",
    [
        ("A", 2, FamilyId(FamilyBase.A)),
        ("A^-2", 2, FamilyId(FamilyBase.A, -2)),
        ("R[0p]^3", 3, FamilyId(FamilyBase.R_0P, 3)),
        (" R[ pp ] ", 2, FamilyId(FamilyBase.R_PP)),
        ("free(2)", 5, FreeId(2)),
        ("sum(A, R[00]^1)", 2, SumId((FamilyId(FamilyBase.A), FamilyId(FamilyBase.R_00, 1)))),
        ("sum(sum(A),free(0))", 2, SumId((SumId((FamilyId(FamilyBase.A),)), FreeId(0)))),
        ("tube(f=t^2+t+1,n=2)", 2, TubeId((1, 1, 1), 2)),
        ("tube(f=t^3+t+1, n=1)", 2, TubeId((1, 0, 1, 1), 1)),
        ("tube(f=t+2,n=1)", 5, TubeId((1, 2), 1)),
        ("tube(f=t-3,n=1)", 7, TubeId((1, 4), 1)),
        ("tube(f=t^2+1,n=3)", 3, TubeId((1, 0, 1), 3)),
        ("tube(f=1+t^2,n=1)", 3, TubeId((1, 0, 1), 1)),
        ("etube(l=inf,i=2,n=3)", 2, TubeId(ExceptionalPoint.INFINITY, 3, 2)),
        ("etube(l=∞,i=1,n=1)", 3, TubeId(ExceptionalPoint.INFINITY, 1, 1)),
        ("etube(l=0,i=1,n=4)", 2, TubeId(ExceptionalPoint.ZERO, 4, 1)),
        ("etube(l=1,i=2,n=1)", 2, TubeId(ExceptionalPoint.ONE, 1, 2)),
    ],
)
def test_parse(text: str, p: int, description):
    assert parse_spec(text, p) == description


@pytest.mark.parametrize(
    "text,position",
    [
        ("B", 0),
        ("", 0),
        ("A^", 2),
        ("R[px]", 2),
        ("A B", 2),
        ("sum(A", 5),
        ("free(x)", 5),
        ("etube(l=2,i=1,n=1)", 8),
        ("tube(f=,n=1)", 7),
        ("tube(f=t^,n=1)", 9),
    ],
)
def test_parse_error(text: str, position: int):
    with pytest.raises(ParseError) as e:
        parse_spec(text, 2)
    assert e.value.position == position
    assert f"at position {position}" in str(e.value)


@pytest.mark.parametrize(
    "text,p",
    [
        ("tube(f=t^2+1,n=1)", 2),
        ("tube(f=t-1,n=1)", 3),
        ("tube(f=t,n=1)", 5),
        ("tube(f=2t+1,n=1)", 5),
        ("tube(f=t^2+t+1,n=0)", 2),
        ("etube(l=0,i=3,n=1)", 2),
        ("etube(l=0,i=1,n=0)", 2),
        ("free(-1)", 2),
    ],
)
def test_semantic_error(text: str, p: int):
    with pytest.raises(SemanticError):
        parse_spec(text, p)


def test_labels_parse_back():
    for description in (
        FamilyId(FamilyBase.R_P0, -3),
        TubeId((1, 1, 1), 4),
        TubeId(ExceptionalPoint.ZERO, 2, 2),
        SumId((FreeId(1), FamilyId(FamilyBase.A, 1))),
    ):
        assert parse_spec(description.label, 2) == description

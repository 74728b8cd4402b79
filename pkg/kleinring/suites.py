"""
Verification suites run by `kleinring verify`.

Each suite builds its corpus from the catalog, computes invariants and
returns a list of `CheckResult`s in a deterministic order.
"""

import logging
from collections.abc import Iterable
from typing import Callable

import numpy as np

from kleinring.catalog import (
    Description,
    ExceptionalPoint,
    FamilyBase,
    FamilyId,
    TubeId,
    compare_rank,
    default_homogeneous_points,
    translate_family,
    tube_lattice,
    tube_sequence,
)
from kleinring.cocycles import les_check, omega_exact_check, verify_class_iso
from kleinring.cohomology import (
    CheckResult,
    CheckStatus,
    check_differentials,
    check_duality,
    check_kill,
    check_resolutions,
    check_shift,
    compare,
    expected,
    expected_homology,
    expected_homology_bar,
    homology_bar,
    homology_H,
    tate,
)
from kleinring.config import EngineConfig
from kleinring.dvr import ModuleInvariant
from kleinring.errors import ConfigurationError
from kleinring.lattice import (
    TypedLattice,
    direct_sum,
    realize,
    rep_of,
    syzygy,
    tau,
    tau_inverse,
)
from kleinring.quiver import VectorRank, find_isomorphism, random_rep

logger = logging.getLogger(__name__)

Suite = Callable[[EngineConfig], list[CheckResult]]

FAMILY_REACH = 3
HOMOGENEOUS_LAYERS = 4
EXCEPTIONAL_LAYERS = 5
SEQUENCE_LAYERS = 4
ROUND_TRIPS = 200
ADDITIVITY_PAIRS = 50


# Corpus.


def family_ids(config: EngineConfig) -> list[FamilyId]:
    reach = min(FAMILY_REACH, config.translate_bound)
    return [FamilyId(base, k) for base in FamilyBase for k in range(-reach, reach + 1)]


def tube_ids(
    config: EngineConfig,
    homogeneous_layers: int = HOMOGENEOUS_LAYERS,
    exceptional_layers: int = EXCEPTIONAL_LAYERS,
) -> list[TubeId]:
    ids = [
        TubeId(point, m)
        for point in default_homogeneous_points(config.p)
        for m in range(1, homogeneous_layers + 1)
    ]
    ids += [
        TubeId(point, m, branch)
        for point in ExceptionalPoint
        for branch in (1, 2)
        for m in range(1, exceptional_layers + 1)
    ]
    return ids


def corpus(config: EngineConfig) -> list[tuple[Description, TypedLattice]]:
    """Every named indecomposable the suites look at."""
    lattices: list[tuple[Description, TypedLattice]] = [
        (family, translate_family(family, config)) for family in family_ids(config)
    ]
    lattices += [(tube, tube_lattice(tube, config)) for tube in tube_ids(config)]
    return lattices


def _degrees(config: EngineConfig, low: int, high: int) -> range:
    return range(max(low, config.window[0]), min(high, config.window[1]) + 1)


def _row(groups: Iterable[ModuleInvariant]) -> str:
    return ", ".join(str(g) for g in groups)


def _aggregate(name: str, results: list[CheckResult]) -> CheckResult:
    """Fold per-degree checks on one lattice into a single result."""
    failures = [r for r in results if r.failed]
    if not failures:
        return CheckResult(name, CheckStatus.PASS, note=f"{len(results)} degrees")
    first = failures[0]
    return CheckResult(
        name,
        CheckStatus.FAIL,
        first.expected,
        first.computed,
        f"{len(failures)} of {len(results)} degrees fail, first: {first.name}",
    )


# Suites.


def preprojective_suite(config: EngineConfig) -> list[CheckResult]:
    """Tate groups of the translates of `A` and `R_αβ`, and homology of the bases."""
    results = []
    degrees = list(config.degrees)
    for family in family_ids(config):
        lattice = translate_family(family, config)
        want = [expected(family, n) for n in degrees]
        got = [tate(lattice, n) for n in degrees]
        results.append(compare(f"tate {family.label}", _row(want), _row(got)))
    homology_degrees = range(0, 7)
    for base in FamilyBase:
        lattice = translate_family(FamilyId(base), config)
        want = [expected_homology(base, n) for n in homology_degrees]
        got = [homology_H(lattice, n) for n in homology_degrees]
        results.append(compare(f"homology {base.value}", _row(want), _row(got)))
        character = base.character
        if character is None:
            continue
        for variable, eigen_is_p in (("x", character.x_is_p), ("y", character.y_is_p)):
            want = [expected_homology_bar(eigen_is_p, n) for n in homology_degrees]
            got = [homology_bar(lattice, n, variable) for n in homology_degrees]
            results.append(
                compare(f"one-variable homology {base.value} in {variable}", _row(want), _row(got))
            )
    return results


def _swap(branch: int) -> int:
    return 3 - branch


def tubes_suite(config: EngineConfig) -> list[CheckResult]:
    """
    Tate groups along tubes. Branch labels at exceptional points are a
    convention, so the suite accepts either labeling, provided one labeling
    fits every exceptional tube in every degree.
    """
    results = []
    degrees = list(config.degrees)
    computed: dict[TubeId, list[ModuleInvariant]] = {}
    for tube in tube_ids(config):
        groups = [tate(tube_lattice(tube, config), n) for n in degrees]
        if not tube.is_exceptional:
            want = [expected(tube, n) for n in degrees]
            results.append(compare(f"tate {tube.label}", _row(want), _row(groups)))
        else:
            computed[tube] = groups

    def relabeled(tube: TubeId, swap: bool) -> TubeId:
        assert tube.branch is not None
        return TubeId(tube.point, tube.layer, _swap(tube.branch) if swap else tube.branch)

    def fits(swap: bool) -> bool:
        return all(
            groups == [expected(relabeled(tube, swap), n) for n in degrees]
            for tube, groups in computed.items()
        )

    swap = not fits(False) and fits(True)
    convention = "branches swapped" if swap else "branches as built"
    for tube, groups in computed.items():
        want = [expected(relabeled(tube, swap), n) for n in degrees]
        results.append(compare(f"tate {tube.label}", _row(want), _row(groups), convention))
    consistent = fits(swap)
    results.append(
        CheckResult(
            "exceptional branch convention",
            CheckStatus.PASS if consistent else CheckStatus.FAIL,
            "one labeling for all tubes",
            convention if consistent else "no labeling fits",
        )
    )
    return results


def _cocycle_suite(config: EngineConfig, degrees: range) -> list[CheckResult]:
    results = []
    for tube in tube_ids(config):
        lattice = tube_lattice(tube, config)
        checks = [verify_class_iso(lattice, tube, n, config) for n in degrees if n]
        results.append(_aggregate(f"cocycle classes {tube.label}", checks))
    return results


def cocycles_suite(config: EngineConfig) -> list[CheckResult]:
    """Classes of `ξ_a` in positive degrees."""
    return _cocycle_suite(config, range(1, 5))


def dual_cocycles_suite(config: EngineConfig) -> list[CheckResult]:
    """Classes of `ξ̂_a` in negative degrees."""
    return _cocycle_suite(config, range(-4, 0))


def annihilation_suite(config: EngineConfig) -> list[CheckResult]:
    return [
        _aggregate(
            f"annihilation {lattice.label}",
            [check_kill(lattice, n) for n in config.degrees],
        )
        for _, lattice in corpus(config)
    ]


def degree_zero_suite(config: EngineConfig) -> list[CheckResult]:
    """`Ĥ⁰(M) ≅ k^{d_pp}` for every indecomposable other than `R_pp`."""
    return [
        compare(
            f"degree zero {lattice.label}",
            ModuleInvariant.elementary(lattice.vector_rank.d_pp),
            tate(lattice, 0),
        )
        for name, lattice in corpus(config)
        if name != FamilyId(FamilyBase.R_PP)
    ]


def dualities_suite(config: EngineConfig) -> list[CheckResult]:
    degrees = _degrees(config, -5, 5)
    return [
        _aggregate(f"duality {lattice.label}", [check_duality(lattice, n) for n in degrees])
        for _, lattice in corpus(config)
    ]


def _translate_power(lattice: TypedLattice, power: int) -> TypedLattice:
    for _ in range(abs(power)):
        lattice = tau(lattice) if power > 0 else tau_inverse(lattice)
    return lattice


def shift_suite(config: EngineConfig) -> list[CheckResult]:
    """Dimension shifting by τ in both directions, and down to degree 0 on small tubes."""
    degrees = _degrees(config, -5, 5)
    results = [
        _aggregate(f"shift {lattice.label}", [check_shift(lattice, n) for n in degrees])
        for _, lattice in corpus(config)
    ]
    for tube in tube_ids(config, homogeneous_layers=1, exceptional_layers=2):
        lattice = tube_lattice(tube, config)
        checks = [
            compare(
                f"degree zero shift {tube.label} n={n}",
                tate(lattice, n),
                tate(_translate_power(lattice, -n), 0),
            )
            for n in range(-2, 3)
        ]
        results.append(_aggregate(f"degree zero shift {tube.label}", checks))
    return results


def _series_report(name: str, families: list[FamilyId], config: EngineConfig) -> CheckResult:
    comparisons = [compare_rank(family, config) for family in families]
    differing = [c for c in comparisons if not c.matches]
    if not differing:
        return CheckResult(name, CheckStatus.PASS, "table", "table", "built ranks agree with the table")
    return CheckResult(
        name,
        CheckStatus.DISCREPANCY,
        "; ".join(f"{c.family.label} {c.displayed}" for c in differing),
        "; ".join(f"{c.family.label} {c.oracle}" for c in differing),
        "the displayed rank table is not reproduced as printed; built ranks are authoritative",
    )


def _syzygy_rank(rank: VectorRank) -> VectorRank:
    d = rank.d_bullet
    return VectorRank(d, *(d - a for a in rank.arms))


def ranks_suite(config: EngineConfig) -> list[CheckResult]:
    """Vector ranks of translates against the rank table, and of syzygies of regular lattices."""
    families = [f for f in family_ids(config) if f.k]
    results = [
        _series_report("A-series", [f for f in families if f.base is FamilyBase.A], config),
        _series_report("R-series", [f for f in families if f.base is not FamilyBase.A], config),
    ]
    ranks = [translate_family(f, config).vector_rank for f in family_ids(config)]
    duplicates = sorted({str(r) for r in ranks if ranks.count(r) > 1})
    results.append(
        CheckResult(
            "vector ranks distinguish translates",
            CheckStatus.FAIL if duplicates else CheckStatus.PASS,
            "pairwise distinct",
            ", ".join(duplicates) or "pairwise distinct",
        )
    )
    for tube in tube_ids(config):
        lattice = tube_lattice(tube, config)
        results.append(
            compare(
                f"syzygy rank {tube.label}",
                _syzygy_rank(lattice.vector_rank),
                syzygy(lattice).vector_rank,
            )
        )
    return results


def tubes_les_suite(config: EngineConfig) -> list[CheckResult]:
    """Exactness of syzygies and of Tate cohomology along `0 → T_1 → T_m → T_{m-1} → 0`."""
    results = []
    degrees = _degrees(config, -3, 3)
    for tube in tube_ids(config, SEQUENCE_LAYERS, SEQUENCE_LAYERS):
        if tube.layer < 2:
            continue
        seq = tube_sequence(tube, config)
        results.extend(omega_exact_check(seq))
        results.append(
            _aggregate(f"long exact sequence {tube.label}", [les_check(seq, n) for n in degrees])
        )
    return results


def structure_suite(config: EngineConfig) -> list[CheckResult]:
    """Round trips through lattices, differentials, resolutions and additivity."""
    rng = np.random.default_rng(config.seed)
    ring = config.dvr
    misses = 0
    for _ in range(ROUND_TRIPS):
        rep = random_rep(rng, config.p)
        if find_isomorphism(rep_of(realize(rep, ring)), rep, config) is None:
            misses += 1
    results = [
        CheckResult(
            "representation round trip",
            CheckStatus.FAIL if misses else CheckStatus.PASS,
            f"{ROUND_TRIPS} isomorphic",
            f"{ROUND_TRIPS - misses} isomorphic",
        )
    ]
    lattices = corpus(config)
    for _, lattice in lattices:
        checks = [check_differentials(lattice, n) for n in config.degrees]
        checks += [check_resolutions(lattice, n) for n in config.degrees]
        results.append(_aggregate(f"complexes {lattice.label}", checks))
    families = [lattice for name, lattice in lattices if isinstance(name, FamilyId)]
    failures = []
    for _ in range(ADDITIVITY_PAIRS):
        first, second = (families[int(i)] for i in rng.integers(0, len(families), size=2))
        n = int(rng.integers(config.window[0], config.window[1] + 1))
        total = tate(direct_sum(first, second), n)
        if total != tate(first, n) + tate(second, n):
            failures.append(f"{first.label} + {second.label} n={n}")
    results.append(
        CheckResult(
            "additivity under direct sums",
            CheckStatus.FAIL if failures else CheckStatus.PASS,
            f"{ADDITIVITY_PAIRS} additive pairs",
            ", ".join(failures) or f"{ADDITIVITY_PAIRS} additive pairs",
        )
    )
    return results


SUITES: dict[str, Suite] = {
    "preprojective": preprojective_suite,
    "tubes": tubes_suite,
    "cocycles": cocycles_suite,
    "dual-cocycles": dual_cocycles_suite,
    "annihilation": annihilation_suite,
    "degree-zero": degree_zero_suite,
    "dualities": dualities_suite,
    "shift": shift_suite,
    "ranks": ranks_suite,
    "tubes-les": tubes_les_suite,
    "structure": structure_suite,
}

ALIASES: dict[str, str] = {
    "thm2.5": "preprojective",
    "thm2.6": "tubes",
    "thm3.3": "cocycles",
    "thm3.4": "dual-cocycles",
    "prop2.2": "annihilation",
    "prop2.3": "degree-zero",
}

SUITE_NAMES: tuple[str, ...] = (*SUITES, *ALIASES, "all")


def run_suite(name: str, config: EngineConfig = EngineConfig()) -> list[CheckResult]:
    """
    Run a suite by name, or every suite for `all`.

    :raises ConfigurationError: The suite name is unknown.
    """
    if name == "all":
        names = list(SUITES)
    elif name in SUITES or name in ALIASES:
        names = [ALIASES.get(name, name)]
    else:
        raise ConfigurationError(f"unknown suite {name!r}")
    results = []
    for suite in names:
        logger.info("running suite %s at p=%d", suite, config.p)
        found = SUITES[suite](config)
        failed = sum(1 for r in found if r.failed)
        logger.info("suite %s: %d checks, %d failed", suite, len(found), failed)
        results.extend(found)
    return results


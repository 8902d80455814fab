"""Optimal closed-form volume bounds and their extremal pairs.

For an epsilon-lc weak log del Pezzo surface the anti-canonical volume is
at most ``max(9, m + 4 + 4/m)`` with ``m = floor(2/epsilon)``; requiring
the minimal resolution to have Picard rank at least 3 or at least 4
lowers the bound to ``m + 3 + 4/m`` respectively
``max(m + 2 + 4/m, q + 5/2 + 9/(4q - 2))`` with
``q = floor((3 + epsilon)/(2 epsilon))``.  Every bound is attained, and
each result records the extremal pairs as descriptors that instantiate to
actual log pairs whose volume reproduces the value exactly.

Floors are taken on exact rationals; float rounding would get boundary
values such as ``epsilon = 2/5`` wrong.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import blowup
from ._rational import fmt, floor_frac
from .blowup import BlowupConfig, LogPair, ProjectivePlaneConfig, make_config
from .discrepancy import EpsilonLike, as_epsilon

P2 = "P2"
FN_PAIR = "FnPair"
PCN = "PCn"
BLOWUP_EXAMPLE = "BlowupExample"

DISTINCT_FIBERS = "distinct_fibers"
SAME_FIBER = "same_fiber"


def floor_two_over(eps: EpsilonLike) -> int:
    """Exact ``floor(2/epsilon)``; always at least 2."""
    return floor_frac(2 / as_epsilon(eps))


def floor_shared_fiber_index(eps: EpsilonLike) -> int:
    """Exact ``floor((3 + epsilon)/(2 epsilon))``; always at least 2."""
    e = as_epsilon(eps)
    return floor_frac((3 + e) / (2 * e))


@dataclass(frozen=True)
class ExtremalDescriptor:
    """A pair attaining a bound, in instantiable form.

    ``kind`` is one of ``P2``, ``FnPair`` (a weighted negative section on a
    Hirzebruch surface), ``PCn`` (the cone over a rational normal curve,
    represented by the same weighted-section pair, its minimal resolution),
    or ``BlowupExample`` with a fiber pattern and a boundary recipe of
    ``(component, coefficient)`` entries, the components being ``section``
    or ``shared_fiber``.
    """

    kind: str
    n: int | None = None
    k: int | None = None
    fiber_pattern: str | None = None
    boundary: tuple[tuple[str, Fraction], ...] = ()

    def to_json(self) -> dict:
        data: dict = {"kind": self.kind}
        if self.n is not None:
            data["n"] = self.n
        if self.k is not None:
            data["k"] = self.k
        if self.fiber_pattern is not None:
            data["fiber_pattern"] = self.fiber_pattern
        if self.boundary:
            data["boundary"] = [[name, fmt(c)] for name, c in self.boundary]
        return data


def instantiate(desc: ExtremalDescriptor) -> LogPair:
    """Build the log pair a descriptor stands for.

    The cone descriptor instantiates as its minimal resolution pair, which
    has the same volume; singular surfaces are not modelled directly.
    """
    if desc.kind == P2:
        return LogPair(ProjectivePlaneConfig())
    if desc.kind in (FN_PAIR, PCN):
        n = desc.n
        cfg = BlowupConfig(n)
        weight = 1 - Fraction(2, n)
        return blowup.log_pair(cfg, [(blowup.section_curve(cfg), weight)])
    if desc.kind == BLOWUP_EXAMPLE:
        n, k = desc.n, desc.k
        if desc.fiber_pattern == SAME_FIBER:
            cfg = make_config(n, ["fresh", ("same_fiber", 1)])
        else:
            cfg = make_config(n, ["fresh"] * k)
        comps = []
        for name, coeff in desc.boundary:
            if name == "section":
                comps.append((blowup.section_curve(cfg), coeff))
            elif name == "shared_fiber":
                comps.append((blowup.fiber_through(cfg, 1), coeff))
            else:
                raise ValueError(f"unknown boundary recipe entry {name!r}")
        return blowup.log_pair(cfg, comps)
    raise ValueError(f"unknown descriptor kind {desc.kind!r}")


@dataclass(frozen=True)
class BoundResult:
    value: Fraction
    branch_values: tuple[tuple[str, Fraction], ...]
    extremals: tuple[ExtremalDescriptor, ...]

    def branch(self, label: str) -> Fraction:
        for name, value in self.branch_values:
            if name == label:
                return value
        raise KeyError(label)

    def to_json(self) -> dict:
        return {
            "value": fmt(self.value),
            "branches": [[name, fmt(v)] for name, v in self.branch_values],
            "extremals": [e.to_json() for e in self.extremals],
        }


def main_bound(eps: EpsilonLike) -> BoundResult:
    """Optimal volume bound ``max(9, m + 4 + 4/m)`` with ``m = floor(2/eps)``.

    The plane attains the bound exactly for ``eps > 2/5``; for
    ``eps <= 1/2`` the weighted-section Hirzebruch pair of index ``m`` and
    the cone it contracts to attain it.  On ``2/5 < eps <= 1/2`` both
    families do.  (When ``m = 2`` the Hirzebruch branch equals 8, attained
    by the index-0 and index-1 surfaces with empty boundary, but 9 wins.)
    The same value is optimal if nef-and-big is strengthened to ample, and
    under a Picard-rank-one restriction.
    """
    e = as_epsilon(eps)
    m = floor_two_over(e)
    hirz = m + 4 + Fraction(4, m)
    value = max(Fraction(9), hirz)
    extremals: list[ExtremalDescriptor] = []
    if e > Fraction(2, 5):
        extremals.append(ExtremalDescriptor(P2))
    if e <= Fraction(1, 2):
        extremals.append(ExtremalDescriptor(FN_PAIR, n=m))
        extremals.append(ExtremalDescriptor(PCN, n=m))
    return BoundResult(
        value,
        (("projective_plane", Fraction(9)), ("hirzebruch", hirz)),
        tuple(extremals),
    )


def rho3_bound(eps: EpsilonLike) -> BoundResult:
    """Optimal bound ``m + 3 + 4/m`` when the minimal resolution has
    Picard rank at least 3; attained by one blown-up point off the section
    with boundary ``(1 - 2/m)`` times the section's strict transform."""
    e = as_epsilon(eps)
    m = floor_two_over(e)
    value = m + 3 + Fraction(4, m)
    desc = ExtremalDescriptor(
        BLOWUP_EXAMPLE,
        n=m,
        k=1,
        fiber_pattern=DISTINCT_FIBERS,
        boundary=(("section", 1 - Fraction(2, m)),),
    )
    return BoundResult(value, (("one_point_blowup", value),), (desc,))


def rho4_bound(eps: EpsilonLike) -> BoundResult:
    """Optimal bound for Picard rank at least 4: the larger of
    ``m + 2 + 4/m`` (two points on distinct fibers) and
    ``q + 5/2 + 9/(4q - 2)`` (two points on one fiber), with
    ``q = floor((3 + eps)/(2 eps))``.  Neither branch dominates for all
    epsilon; at ``eps = 3/5`` the shared-fiber branch wins."""
    e = as_epsilon(eps)
    m = floor_two_over(e)
    q = floor_shared_fiber_index(e)
    branch_a = m + 2 + Fraction(4, m)
    branch_b = q + Fraction(5, 2) + Fraction(9, 4 * q - 2)
    value = max(branch_a, branch_b)
    extremals: list[ExtremalDescriptor] = []
    if branch_a == value:
        extremals.append(
            ExtremalDescriptor(
                BLOWUP_EXAMPLE,
                n=m,
                k=2,
                fiber_pattern=DISTINCT_FIBERS,
                boundary=(("section", 1 - Fraction(2, m)),),
            )
        )
    if branch_b == value:
        extremals.append(
            ExtremalDescriptor(
                BLOWUP_EXAMPLE,
                n=q,
                k=2,
                fiber_pattern=SAME_FIBER,
                boundary=(
                    ("section", Fraction(2 * q - 4, 2 * q - 1)),
                    ("shared_fiber", Fraction(q - 2, 2 * q - 1)),
                ),
            )
        )
    return BoundResult(
        value,
        ((DISTINCT_FIBERS, branch_a), (SAME_FIBER, branch_b)),
        tuple(extremals),
    )


def general_blowup_bound(n: int, k: int) -> Fraction:
    """Volume bound ``n + 4 + 4/n - k`` (or ``8 - k`` for ``n = 0, 1``) for
    any effective boundary on the blow-up of k points off the section on
    distinct fibers.  Non-positive values mean no boundary works at all."""
    if n < 0 or k < 0:
        raise ValueError("n and k must be non-negative")
    if n >= 2:
        return n + 4 + Fraction(4, n) - k
    return Fraction(8 - k)


def max_points(n: int) -> int:
    """Largest k for which the bound above stays positive."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n >= 4:
        return n + 4
    if n >= 2:
        return n + 5
    return 7

"""Discrepancies and bounded-depth epsilon-lc certification.

A pair ``(X, Delta)`` is epsilon-lc when every divisor over ``X`` has
discrepancy at least ``-1 + epsilon``.  Deciding this from tracked
combinatorial data alone is impossible in general, so the check below
certifies a fragment: boundary coefficients, the discrepancy of each
configured blow-up, and the discrepancies obtained by blowing up pairwise
intersection points of boundary components, iterated to a configurable
depth.  When every check passes *and* the tracked components form a simple
normal crossing pattern (multiplicities at most one, at most two branches
through any checked point, pairwise meeting numbers at most one), deeper
blow-ups can only increase the discrepancy, so the verdict is a genuine
certificate.  Otherwise the honest answer is inconclusive.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from ._rational import fmt, rat, RationalLike
from .blowup import (
    BlowupConfig,
    LogPair,
    ProjectivePlaneConfig,
    TrackedCurve,
    component_class,
    component_mult,
)
from .lattice import pair


@dataclass(frozen=True)
class Epsilon:
    """A log-canonicity level, a rational in (0, 1]."""

    value: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "value", rat(self.value))
        if not 0 < self.value <= 1:
            raise ValueError(f"epsilon must lie in (0, 1], got {self.value}")


EpsilonLike = Epsilon | Fraction | int | str


def as_epsilon(eps: EpsilonLike) -> Fraction:
    if isinstance(eps, Epsilon):
        return eps.value
    return Epsilon(rat(eps)).value


class LCVerdict(enum.Enum):
    EPSILON_LC = "epsilon-lc"
    VIOLATED = "violated"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class DiscrepancyReport:
    entries: tuple[tuple[str, Fraction], ...]
    verdict: LCVerdict
    violated_label: str | None = None

    def to_json(self) -> dict:
        data: dict = {
            "entries": [
                {"label": label, "discrepancy": fmt(value)}
                for label, value in self.entries
            ],
            "verdict": self.verdict.value,
        }
        if self.violated_label is not None:
            data["violated"] = self.violated_label
        return data


class NotContractibleError(ValueError):
    """Raised when asked to contract a curve of non-negative square."""


def contraction_crepant_coefficient(
    k_dot_e: RationalLike, e_sq: RationalLike, boundary_dot_e: RationalLike = 0
) -> Fraction:
    """Coefficient ``c`` making ``K + c*E + boundary`` trivial against ``E``.

    For the negative section of a Hirzebruch surface with empty boundary
    this is ``1 - 2/n``, the weight under which the pair contracts
    crepantly to the cone over a rational normal curve.  A negative result
    means the curve could only appear with negative weight, i.e. blowing it
    down has positive discrepancy.
    """
    e_sq = rat(e_sq)
    if e_sq >= 0:
        raise NotContractibleError(f"curve of square {e_sq} is not contractible")
    return (rat(k_dot_e) + rat(boundary_dot_e)) / (-e_sq)


def blowup_discrepancy(p: LogPair, at: int | None = None) -> Fraction:
    """Discrepancy ``1 - mult(Delta)`` of the blow-up at a marked point.

    ``at`` is the id of a configured point; ``None`` means a generic fresh
    point, which lies on no boundary component.
    """
    if at is None:
        return Fraction(1)
    total = Fraction(0)
    for entry in p.boundary:
        total += entry.coeff * component_mult(p.config, entry.component, at)
    return 1 - total


def _snc_pattern(p: LogPair) -> bool:
    comps = [(e.component, component_class(p.config, e.component)) for e in p.boundary]
    for comp, _ in comps:
        if isinstance(comp, TrackedCurve) and any(m not in (0, 1) for m in comp.mults):
            return False
    if isinstance(p.config, BlowupConfig):
        for pid in range(1, p.config.k + 1):
            branches = sum(
                1 for comp, _ in comps if component_mult(p.config, comp, pid) > 0
            )
            if branches > 2:
                return False
    for i in range(len(comps)):
        for j in range(i + 1, len(comps)):
            meet = pair(comps[i][1], comps[j][1])
            if meet not in (0, 1):
                return False
    return True


def epsilon_lc_check(p: LogPair, eps: EpsilonLike, depth: int = 2) -> DiscrepancyReport:
    """Check the epsilon-lc condition on the tracked resolution data.

    Entries, in order: the boundary components themselves (a component of
    coefficient ``c`` is a divisor on the surface with discrepancy ``-c``),
    the blow-up of every configured point, the blow-up of every pairwise
    intersection of boundary components, and then the corner blow-ups those
    seed, iterated to ``depth`` levels.  The verdict is ``VIOLATED`` at the
    first entry below ``-1 + eps``; ``EPSILON_LC`` needs every entry to
    pass and the simple-normal-crossing pattern to hold, which is what
    guarantees deeper blow-ups cannot do worse; anything else is
    ``INCONCLUSIVE``.
    """
    if depth < 0:
        raise ValueError("depth must be non-negative")
    eps = as_epsilon(eps)
    threshold = Fraction(-1) + eps
    labels = p.labels()
    entries: list[tuple[str, Fraction]] = []

    for label, entry in zip(labels, p.boundary):
        entries.append((label, -entry.coeff))

    # corner states: (coefficient pair, label); blowing one up yields an
    # exceptional of coefficient x + y - 1 crossing each original branch
    corners: list[tuple[Fraction, Fraction, str]] = []

    if isinstance(p.config, BlowupConfig):
        for pid in range(1, p.config.k + 1):
            total = Fraction(0)
            branch_coeffs = []
            for label, entry in zip(labels, p.boundary):
                m = component_mult(p.config, entry.component, pid)
                total += entry.coeff * m
                if m > 0:
                    branch_coeffs.append(entry.coeff)
            entries.append((f"blowup(p{pid})", 1 - total))
            new_coeff = total - 1
            for c in branch_coeffs:
                corners.append((new_coeff, c, f"p{pid}"))

    classes = [component_class(p.config, e.component) for e in p.boundary]
    for i in range(len(p.boundary)):
        for j in range(i + 1, len(p.boundary)):
            if pair(classes[i], classes[j]) > 0:
                x = p.boundary[i].coeff
                y = p.boundary[j].coeff
                label = f"meet({labels[i]},{labels[j]})"
                entries.append((label, 1 - x - y))
                corners.append((x, y, label))

    level = 2
    current = corners
    while level <= depth and current:
        nxt: list[tuple[Fraction, Fraction, str]] = []
        seen: set[tuple[Fraction, Fraction, str]] = set()
        for x, y, label in current:
            g = x + y - 1
            for other in (x, y):
                state = (min(g, other), max(g, other), label)
                if state in seen:
                    continue
                seen.add(state)
                entries.append((f"{label}@depth{level}", 1 - g - other))
                nxt.append((g, other, label))
        current = nxt
        level += 1

    for label, value in entries:
        if value < threshold:
            return DiscrepancyReport(tuple(entries), LCVerdict.VIOLATED, label)
    if _snc_pattern(p):
        return DiscrepancyReport(tuple(entries), LCVerdict.EPSILON_LC)
    return DiscrepancyReport(tuple(entries), LCVerdict.INCONCLUSIVE)

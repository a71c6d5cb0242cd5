"""Leray spectral sequence of the Borel fibration X -> X_G -> B_G, G = Z/2.

With trivial action on H*(X) the E2 page is ``Z2[t] (x) H*(X)``.  Every
differential considered here is ``H*(B_G)``-linear and determined by where
the fiber generators transgress, so a page is stored per fiber degree ``l``
with two column classes: columns ``k < r`` (nothing comes in, only the kernel
survives) and columns ``k >= r`` (kernel modulo image).  The matrices do not
depend on ``k``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .algebra import (
    Monomial,
    Poly,
    TruncatedAlgebra,
    add,
    basis_of_degree,
    hilbert_series,
    poly,
)
from .gf2 import GF2Matrix, GF2Vector, ImageNotInKernel, image_basis, kernel_basis, subquotient_dim

CASE_LABELS = ("i", "ii", "iii")
PARAM_NAMES = ("n", "m")


class CaseInadmissible(ValueError):
    pass


class InternalDSquared(RuntimeError):
    """An image is not contained in a kernel; d∘d ≠ 0 somewhere."""


class VanishingViolated(RuntimeError):
    pass


class NotACocycle(RuntimeError):
    pass


class CollapseNotVerified(ValueError):
    pass


@dataclass(frozen=True)
class BorelSetup:
    fiber: TruncatedAlgebra

    @property
    def top_degree(self) -> int:
        return self.fiber.top_degree

    @property
    def window(self) -> int:
        """Totals are inspected through twice the top fiber degree."""
        return 2 * self.top_degree


@dataclass(frozen=True)
class DifferentialCase:
    """Fiber generator ``i`` transgresses to ``t**page (x) 1`` iff ``targets[i]``."""

    page: int
    targets: tuple[bool, ...]
    label: str

    def __post_init__(self) -> None:
        if self.page < 2:
            raise ValueError("differential page must be >= 2")
        if not any(self.targets):
            raise ValueError("at least one generator must have a nonzero differential")

    def describe(self, fiber: TruncatedAlgebra) -> str:
        parts = []
        for name, hit in zip(fiber.names, self.targets):
            image = f"t^{self.page} (x) 1" if hit else "0"
            parts.append(f"d_{self.page}(1 (x) {name}) = {image}")
        return "; ".join(parts)


@dataclass(frozen=True)
class PageColumn:
    l: int
    dim_low: tuple[int, ...]
    dim_high: int
    kernel: tuple[GF2Vector, ...]
    image: tuple[GF2Vector, ...]

    @property
    def page(self) -> int:
        return len(self.dim_low)


@dataclass(frozen=True)
class EInfinityTable:
    top_degree: int
    entries: tuple[tuple[tuple[int, int, int], ...], ...]
    totals: tuple[int, ...]

    def alternating_sum(self) -> int:
        return sum(c if p % 2 == 0 else -c for p, c in enumerate(self.totals))


def enumerate_cases(setup: BorelSetup) -> list[DifferentialCase]:
    """The nonzero transgression patterns, labelled as in the classification."""
    fiber = setup.fiber
    degs = set(fiber.degrees)
    if len(degs) != 1 or len(fiber.generators) not in (1, 2):
        raise ValueError("fiber must have one or two generators of a common degree")
    page = degs.pop() + 1
    if len(fiber.generators) == 1:
        return [DifferentialCase(page, (True,), "i")]
    patterns = [(True, False), (False, True), (True, True)]
    return [DifferentialCase(page, p, label) for p, label in zip(patterns, CASE_LABELS)]


def leibniz_differential(case: DifferentialCase, mono: Monomial) -> tuple[tuple[int, Monomial], ...]:
    """``d(1 (x) mono)`` as a sum of ``(t-power, fiber monomial)`` terms.

    ``d(prod g_i**e_i) = sum_i e_i d(g_i) g_i**(e_i - 1) prod_{j != i} g_j**e_j``
    with coefficients mod 2.
    """
    terms = []
    for i, (e, hit) in enumerate(zip(mono, case.targets)):
        if hit and e & 1:
            lowered = list(mono)
            lowered[i] -= 1
            terms.append(tuple(lowered))
    return tuple((case.page, m) for m in poly(terms))


def apply_differential(
    case: DifferentialCase, element: Sequence[tuple[int, Monomial]]
) -> tuple[tuple[int, Monomial], ...]:
    acc: set[tuple[int, Monomial]] = set()
    for tpow, mono in element:
        for dt, m in leibniz_differential(case, mono):
            acc ^= {(tpow + dt, m)}
    return tuple(sorted(acc))


def differential_of(case: DifferentialCase, u: Poly) -> Poly:
    """Fiber part of ``d(1 (x) u)``; the base factor is always ``t**page``."""
    return poly(m for mono in u for _, m in leibniz_differential(case, mono))


def relation_consistency(case: DifferentialCase, setup: BorelSetup) -> tuple[bool, str]:
    """Check ``d(g**trunc) = 0`` for every transgressing generator ``g``.

    ``d(g**k) = k t^r (x) g**(k-1)``, which vanishes iff ``k`` is even.
    """
    problems = []
    for i, (g, hit) in enumerate(zip(setup.fiber.generators, case.targets)):
        if hit and g.trunc % 2:
            param = PARAM_NAMES[i] if i < len(PARAM_NAMES) else g.name
            problems.append(
                f"{param} even: {g.name}^{g.trunc} = 0 but "
                f"d({g.name}^{g.trunc}) = t^{case.page} (x) {g.name}^{g.trunc - 1} != 0"
            )
    if problems:
        return False, "; ".join(problems)
    return True, "admissible"


def differential_matrix(setup: BorelSetup, case: DifferentialCase, l: int) -> GF2Matrix:
    """Matrix of ``d_r: H^l -> H^(l-r+1)`` in the monomial bases."""
    source = basis_of_degree(setup.fiber, l)
    target = basis_of_degree(setup.fiber, l - case.page + 1)
    index = {m: i for i, m in enumerate(target)}
    rows = [0] * len(target)
    hits = [i for i, hit in enumerate(case.targets) if hit]
    for j, mono in enumerate(source):
        # inlined leibniz_differential: one term per odd exponent of a transgressing generator
        for i in hits:
            if mono[i] & 1:
                rows[index[mono[:i] + (mono[i] - 1,) + mono[i + 1 :]]] ^= 1 << j
    return GF2Matrix(tuple(rows), len(source))


def _check_lower_pages_vanish(setup: BorelSetup, case: DifferentialCase) -> None:
    # d_s for 2 <= s < r: H^l -> H^(l-s+1); degree parity makes one side zero.
    for s in range(2, case.page):
        for l in range(setup.top_degree + 1):
            if basis_of_degree(setup.fiber, l) and basis_of_degree(setup.fiber, l - s + 1):
                raise CaseInadmissible(
                    f"d_{s} cannot be forced to vanish: E_2 is nonzero in fiber degrees {l - s + 1} and {l}"
                )


def compute_pages(setup: BorelSetup, case: DifferentialCase) -> list[PageColumn]:
    """The ``E_(r+1)`` page, one column record per fiber degree ``0..D``."""
    ok, reason = relation_consistency(case, setup)
    if not ok:
        raise CaseInadmissible(reason)
    _check_lower_pages_vanish(setup, case)
    shift = case.page - 1
    top = setup.top_degree
    matrices = [differential_matrix(setup, case, l) for l in range(top + 1)]
    columns = []
    for l in range(top + 1):
        kernel = kernel_basis(matrices[l])
        image = image_basis(matrices[l + shift]) if l + shift <= top else []
        try:
            high = subquotient_dim(kernel, image)
        except ImageNotInKernel as exc:
            raise InternalDSquared(f"fiber degree {l}: {exc}") from exc
        columns.append(
            PageColumn(
                l=l,
                dim_low=(len(kernel),) * case.page,
                dim_high=high,
                kernel=tuple(kernel),
                image=tuple(image),
            )
        )
    return columns


def verify_collapse(page: Sequence[PageColumn]) -> bool:
    """True iff every column ``k >= r`` is zero on the ``E_(r+1)`` page.

    Later differentials ``d_s`` (``s > r``) then land in columns ``>= s > r``
    and vanish, so ``E_(r+1) = E_inf``.
    """
    return all(col.dim_high == 0 for col in page)


def _dim_at(page: Sequence[PageColumn], k: int, l: int) -> int:
    if l < 0 or l >= len(page):
        return 0
    col = page[l]
    return col.dim_low[k] if k < col.page else col.dim_high


def totalize(page: Sequence[PageColumn], setup: BorelSetup) -> EInfinityTable:
    """``H^p(X_G) = sum over k + l = p of E_inf^(k,l)`` for ``p = 0..2D``."""
    if not verify_collapse(page):
        raise CollapseNotVerified("columns k >= r survive; E_(r+1) is not E_inf")
    top = setup.top_degree
    entries = []
    totals = []
    low_columns = page[0].page if page else 0
    for p in range(setup.window + 1):
        row = []
        # collapse verified: columns k >= r are zero
        for k in range(min(p + 1, low_columns)):
            dim = _dim_at(page, k, p - k)
            if dim:
                row.append((k, p - k, dim))
        entries.append(tuple(row))
        totals.append(sum(d for _, _, d in row))
    leaks = [p for p, c in enumerate(totals) if p > top and c]
    if leaks:
        raise VanishingViolated(f"H^p(X_G) nonzero above the fiber top degree {top} at p = {leaks}")
    return EInfinityTable(top, tuple(entries), tuple(totals))


def permanent_cocycles(setup: BorelSetup, case: DifferentialCase) -> list[tuple[str, Poly]]:
    """Fiber classes that survive to ``E_inf^(0,*)`` and name the orbit-space generators.

    A transgressing generator contributes its square, a silent one itself;
    when several generators transgress their sum is a cocycle too.
    """
    fiber = setup.fiber
    found = []
    hits = []
    for g, hit in zip(fiber.generators, case.targets):
        gen = fiber.gen(g.name)
        if hit:
            found.append((f"{g.name}^2", fiber.mono(**{g.name: 2})))
            hits.append(g.name)
        else:
            found.append((g.name, gen))
    if len(hits) > 1:
        found.append(("+".join(hits), add(*(fiber.gen(h) for h in hits))))
    for label, u in found:
        if differential_of(case, u):
            raise NotACocycle(f"d_{case.page}({label}) != 0")
    return found


def coindex(page: Sequence[PageColumn]) -> int:
    """Largest ``k`` with ``E_inf^(k,0) != 0``: the last nonzero power of the Whitney class."""
    if not page:
        raise CollapseNotVerified("empty page")
    bottom = page[0]
    if bottom.dim_high:
        raise CollapseNotVerified("t^k survives for every k; the sequence has no nonzero differential")
    return max(k for k, d in enumerate(bottom.dim_low) if d)


def degenerate_case_contradiction(setup: BorelSetup) -> int:
    """Smallest ``p > D`` with ``H^p(X_G) != 0`` if every differential vanished.

    Nonzero cohomology above the top fiber degree is impossible for a free
    action, so some differential must be nonzero.
    """
    fiber_series = hilbert_series(setup.fiber)
    top = setup.top_degree
    for p in range(top + 1, setup.window + 2):
        # E_2 total degree p: column k carries H^(p-k)(X)
        if sum(fiber_series[p - k] for k in range(p + 1)):
            return p
    raise AssertionError("Z2[t] (x) H*(X) cannot vanish in high degrees")

"""Orbit-space presentations and the end-to-end verification pipeline.

For a free involution on X ~ RP^n x RP^m or CP^n x CP^m (and the single
projective spaces), the orbit space cohomology is one of a short list of
truncated algebras, one per admissible transgression pattern.  This module
instantiates those presentations and checks them degree by degree against
the E_inf page computed in :mod:`orbitcoh.spectral`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator

from .algebra import (
    BadDegree,
    BadParams,
    RewriteRule,
    SpaceKind,
    TruncatedAlgebra,
    add,
    build_space_algebra,
    euler_characteristic,
    find_obstruction_class,
    format_poly,
    format_presentation,
    hilbert_series,
    involutive_automorphism_candidates,
    kunneth_product,
    nilpotency_order,
    power,
)
from .spectral import (
    BorelSetup,
    CaseInadmissible,
    DifferentialCase,
    coindex,
    compute_pages,
    degenerate_case_contradiction,
    enumerate_cases,
    permanent_cocycles,
    relation_consistency,
    totalize,
    verify_collapse,
)

ALL_PARAMS: tuple[tuple[int, int, int], ...] = tuple(itertools.product((0, 1), repeat=3))


class NoFreeAction(ValueError):
    pass


@dataclass(frozen=True)
class SpaceSpec:
    kind: SpaceKind
    n: int
    m: int | None = None

    def __post_init__(self) -> None:
        kind = SpaceKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if kind.is_product != (self.m is not None):
            raise BadParams(f"{kind.value}: m must be given exactly for product kinds")
        if self.n < 1 or (self.m is not None and self.m < 1):
            raise BadParams("n and m must be >= 1")
        if self.m is not None and self.n > self.m:
            n, m = self.m, self.n
            object.__setattr__(self, "n", n)
            object.__setattr__(self, "m", m)

    @property
    def algebra(self) -> TruncatedAlgebra:
        return build_space_algebra(self.kind, self.n, self.m)

    @property
    def is_complex(self) -> bool:
        return self.kind in (SpaceKind.COMPLEX, SpaceKind.COMPLEX_SINGLE)

    def __str__(self) -> str:
        p = "CP" if self.is_complex else "RP"
        if self.m is None:
            return f"{p}^{self.n}"
        return f"{p}^{self.n} x {p}^{self.m}"

    def sort_key(self) -> tuple[int, int, int]:
        return (list(SpaceKind).index(self.kind), self.n, self.m or 0)


def free_action_admissible(space: SpaceSpec) -> tuple[bool, str]:
    """Floyd's formula with empty fixed set: chi(X) = 2 chi(X/G) must be even."""
    chi = euler_characteristic(space.algebra)
    if chi % 2:
        return False, f"chi(X) = {chi} is odd, so chi(X) = 2 chi(X/G) is impossible"
    return True, f"chi(X) = {chi} is even"


def candidate_presentation(
    space: SpaceSpec, case: DifferentialCase, params: tuple[int, int, int] = (0, 0, 0)
) -> TruncatedAlgebra:
    """The orbit-space algebra predicted for ``case``.

    ``x`` is the Whitney class (degree 1, with ``x**(coindex+1) = 0``),
    transgressing generators contribute their squares and silent ones
    themselves; in case iii the sum ``a + b`` lifts to ``w`` with
    ``w**2 = alpha x**e w + beta y + gamma z``.
    """
    ok, reason = free_action_admissible(space)
    if not ok:
        raise CaseInadmissible(reason)
    setup = BorelSetup(space.algebra)
    ok, reason = relation_consistency(case, setup)
    if not ok:
        raise CaseInadmissible(reason)
    d = space.kind.generator_degree
    x = ("x", 1, d + 1)
    n, m = space.n, space.m
    if m is None:
        return TruncatedAlgebra.of(x, ("y", 2 * d, (n + 1) // 2))
    if case.label == "i":
        return TruncatedAlgebra.of(x, ("y", 2 * d, (n + 1) // 2), ("z", d, m + 1))
    if case.label == "ii":
        return TruncatedAlgebra.of(x, ("y", d, n + 1), ("z", 2 * d, (m + 1) // 2))
    alpha, beta, gamma = params
    rule = RewriteRule("w", "x", "y", "z", x_power=d, alpha=alpha, beta=beta, gamma=gamma)
    return TruncatedAlgebra.of(
        x, ("y", 2 * d, (n + 1) // 2), ("z", 2 * d, (m + 1) // 2), ("w", d, 2), rewrite=rule
    )


@dataclass
class CaseReport:
    label: str
    admissible: bool
    reason: str
    differential: str = ""
    e_infinity_totals: tuple[int, ...] = ()
    presentation: str = ""
    presentation_series: tuple[int, ...] = ()
    match: bool = False
    params_agree: bool = True
    collapsed: bool = False
    chi_quotient: int | None = None
    chi_ok: bool = False
    coindex: int | None = None
    coindex_ok: bool = False
    cocycles: tuple[str, ...] = ()
    error: str | None = None

    @property
    def passed(self) -> bool:
        if not self.admissible:
            return True
        return (
            self.error is None
            and self.match
            and self.params_agree
            and self.collapsed
            and self.chi_ok
            and self.coindex_ok
        )


def verify_case(space: SpaceSpec, case: DifferentialCase) -> CaseReport:
    """Run the spectral sequence for one case and compare with its presentation.

    Spectral-sequence errors propagate.
    """
    setup = BorelSetup(space.algebra)
    ok, reason = relation_consistency(case, setup)
    report = CaseReport(case.label, ok, reason, differential=case.describe(setup.fiber))
    if not ok:
        return report
    page = compute_pages(setup, case)
    report.collapsed = verify_collapse(page)
    table = totalize(page, setup)
    window = setup.window
    report.e_infinity_totals = table.totals
    series = [hilbert_series(candidate_presentation(space, case, p), window).coeffs for p in _params_for(case)]
    report.presentation = format_presentation(candidate_presentation(space, case), symbolic=True)
    report.presentation_series = series[0]
    report.params_agree = all(s == series[0] for s in series)
    report.match = all(s == table.totals for s in series)
    chi_x = euler_characteristic(setup.fiber)
    report.chi_quotient = table.alternating_sum()
    report.chi_ok = 2 * report.chi_quotient == chi_x
    report.coindex = coindex(page)
    report.coindex_ok = report.coindex == space.kind.generator_degree
    report.cocycles = tuple(label for label, _ in permanent_cocycles(setup, case))
    return report


def _params_for(case: DifferentialCase) -> tuple[tuple[int, int, int], ...]:
    return ALL_PARAMS if case.label == "iii" else ((0, 0, 0),)


@dataclass
class InducedActionSummary:
    candidates: int
    trivial_forced: bool
    orders: dict[str, int] = field(default_factory=dict)
    unresolved: list[str] = field(default_factory=list)
    note: str = ""


def induced_action_analysis(space: SpaceSpec) -> InducedActionSummary:
    """Which involutions of H*(X) survive the order test and the c T*(c) test.

    Any nontrivial candidate left over is reported; the verification then
    proceeds under the assumption that the action on cohomology is trivial.
    """
    alg = space.algebra
    if len(alg.generators) == 1:
        return InducedActionSummary(candidates=1, trivial_forced=True, note="one generator: T* = id")
    a, b = alg.gen("a"), alg.gen("b")
    orders = {
        "a": nilpotency_order(alg, a),
        "b": nilpotency_order(alg, b),
        "a+b": nilpotency_order(alg, add(a, b)),
    }
    cands = involutive_automorphism_candidates(alg)
    unresolved = []
    for images in cands[1:]:
        desc = f"a -> {format_poly(alg, images[0])}, b -> {format_poly(alg, images[1])}"
        try:
            witness = find_obstruction_class(alg, images)
        except BadDegree as exc:
            unresolved.append(f"{desc} ({exc})")
            continue
        if witness is None:
            unresolved.append(f"{desc} (c T*(c) = 0 for every middle-degree c)")
    summary = InducedActionSummary(
        candidates=len(cands), trivial_forced=not unresolved, orders=orders, unresolved=unresolved
    )
    if unresolved:
        summary.note = (
            "order test and fixed-point obstruction do not exclude a nontrivial T*; "
            "trivial action on cohomology is assumed"
        )
    else:
        summary.note = "T* = id forced"
    return summary


@dataclass
class VerificationReport:
    space: SpaceSpec
    admissible: bool
    admissible_reason: str
    chi_x: int
    cases: list[CaseReport]
    chi_quotient: int | None
    coindex: int | None
    induced_action: InducedActionSummary | None
    degenerate_witness: int
    passed: bool


def verify_space(space: SpaceSpec) -> VerificationReport:
    """Every admissible case, verified; failures are recorded rather than raised."""
    setup = BorelSetup(space.algebra)
    chi_x = euler_characteristic(setup.fiber)
    admissible, why = free_action_admissible(space)
    cases: list[CaseReport] = []
    for case in enumerate_cases(setup):
        if not admissible:
            ok, reason = relation_consistency(case, setup)
            cases.append(CaseReport(case.label, False, reason if not ok else why))
            continue
        try:
            cases.append(verify_case(space, case))
        except Exception as exc:  # recorded, not raised
            ok, reason = relation_consistency(case, setup)
            cases.append(CaseReport(case.label, True, reason, error=f"{type(exc).__name__}: {exc}"))
    live = [c for c in cases if c.admissible]
    chis = {c.chi_quotient for c in live}
    coindices = {c.coindex for c in live}
    induced = induced_action_analysis(space) if admissible else None
    passed = all(c.passed for c in cases) and (not admissible or bool(live))
    return VerificationReport(
        space=space,
        admissible=admissible,
        admissible_reason=why,
        chi_x=chi_x,
        cases=cases,
        chi_quotient=chis.pop() if len(chis) == 1 else None,
        coindex=coindices.pop() if len(coindices) == 1 else None,
        induced_action=induced,
        degenerate_witness=degenerate_case_contradiction(setup),
        passed=passed,
    )


def lens_space_algebra(n: int) -> TruncatedAlgebra:
    """H*(L^n(4,1); Z2) for odd n."""
    if n < 1 or n % 2 == 0:
        raise BadParams("lens space dimension must be odd")
    return TruncatedAlgebra.of(("x", 1, 2), ("y", 2, (n + 1) // 2))


@dataclass(frozen=True)
class KnownAnswer:
    label: str
    space: SpaceSpec
    case_label: str
    series: tuple[int, ...]


def known_answer_examples(max_n: int = 25, max_m: int = 25) -> list[KnownAnswer]:
    """Orbit spaces known independently of the spectral sequence.

    L^n(4,1) x RP^m and RP^2 x CP^m come from explicit involutions; the
    two n = m = 1 values are the known answers for S^1 x S^1 and S^2 x S^2.
    """
    out = []
    for n in range(1, max_n + 1, 2):
        for m in range(1, max_m + 1):
            rp = TruncatedAlgebra.of(("z", 1, m + 1))
            alg = kunneth_product(lens_space_algebra(n), rp)
            space = SpaceSpec(SpaceKind.REAL, n, m)
            label = "i" if n <= m else "ii"
            out.append(KnownAnswer(f"L^{n}(4,1) x RP^{m}", space, label, hilbert_series(alg).coeffs))
    for m in range(1, max_m + 1):
        alg = kunneth_product(TruncatedAlgebra.of(("x", 1, 3)), TruncatedAlgebra.of(("z", 2, m + 1)))
        out.append(KnownAnswer(f"RP^2 x CP^{m}", SpaceSpec(SpaceKind.COMPLEX, 1, m), "i", hilbert_series(alg).coeffs))
    for label in ("i", "ii", "iii"):
        out.append(KnownAnswer("S^1 x S^1", SpaceSpec(SpaceKind.REAL, 1, 1), label, (1, 2, 1)))
        out.append(KnownAnswer("S^2 x S^2", SpaceSpec(SpaceKind.COMPLEX, 1, 1), label, (1, 1, 2, 1, 1)))
    return out


@dataclass
class CoindexCertificate:
    space: SpaceSpec
    coindex: int
    bound: int
    checks: list[tuple[str, bool]]

    @property
    def valid(self) -> bool:
        return bool(self.checks) and all(ok for _, ok in self.checks)

    def statement(self) -> str:
        return (
            f"ind(X) <= co-ind(X) = {self.coindex}; "
            f"no Z2-equivariant map S^k -> X for k >= {self.bound}"
        )


def coindex_certificate(space: SpaceSpec) -> CoindexCertificate:
    """Co-index from the spectral sequence, cross-checked in every presentation.

    In each admissible presentation (all rewrite parameters) the Whitney class
    ``x`` must satisfy ``x**c != 0`` and ``x**(c+1) == 0``.
    """
    ok, why = free_action_admissible(space)
    if not ok:
        raise NoFreeAction(why)
    setup = BorelSetup(space.algebra)
    values = set()
    checks = []
    for case in enumerate_cases(setup):
        if not relation_consistency(case, setup)[0]:
            continue
        c = coindex(compute_pages(setup, case))
        values.add(c)
        for params in _params_for(case):
            alg = candidate_presentation(space, case, params)
            x = alg.gen("x")
            holds = bool(power(alg, x, c)) and not power(alg, x, c + 1)
            tag = f"case {case.label}" + (f" (alpha, beta, gamma) = {params}" if case.label == "iii" else "")
            checks.append((f"{tag}: x^{c} != 0, x^{c + 1} = 0", holds))
    if len(values) != 1:
        raise RuntimeError(f"co-index differs between cases: {sorted(values)}")
    c = values.pop()
    return CoindexCertificate(space, c, c + 1, checks)


def map_nonexistence_bound(space: SpaceSpec) -> int:
    """Smallest k such that no equivariant map S^k -> X exists (antipodal S^k)."""
    return coindex_certificate(space).bound


def sweep_spaces(max_n: int, max_m: int, kinds: tuple[SpaceKind, ...] = tuple(SpaceKind)) -> Iterator[SpaceSpec]:
    """All spaces with ``1 <= n <= max_n`` and ``n <= m <= max_m`` in report order."""
    for kind in kinds:
        if kind.is_product:
            for n in range(1, max_n + 1):
                for m in range(n, max_m + 1):
                    yield SpaceSpec(kind, n, m)
        else:
            for n in range(1, max_n + 1):
                yield SpaceSpec(kind, n)

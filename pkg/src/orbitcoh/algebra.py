"""Truncated graded-commutative algebras over GF(2).

An algebra is a list of generators ``g`` with a degree and a truncation
exponent (``g**trunc == 0``), optionally with one quadratic rewrite rule
``w**2 = alpha*x**e*w + beta*y + gamma*z``.  Elements are formal sums of
monomials with coefficients in GF(2), kept as sorted tuples of exponent
vectors so that equality is structural.
"""

from __future__ import annotations

import enum
import functools
import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

Monomial = tuple[int, ...]
Poly = tuple[Monomial, ...]


class BadParams(ValueError):
    pass


class NameClash(ValueError):
    pass


class NotApplicable(ValueError):
    pass


class BadDegree(ValueError):
    pass


class SpaceKind(str, enum.Enum):
    REAL = "real"
    COMPLEX = "complex"
    REAL_SINGLE = "real-single"
    COMPLEX_SINGLE = "complex-single"

    @property
    def is_product(self) -> bool:
        return self in (SpaceKind.REAL, SpaceKind.COMPLEX)

    @property
    def generator_degree(self) -> int:
        return 1 if self in (SpaceKind.REAL, SpaceKind.REAL_SINGLE) else 2


@dataclass(frozen=True)
class GeneratorSpec:
    name: str
    degree: int
    trunc: int

    def __post_init__(self) -> None:
        if self.degree < 1:
            raise BadParams(f"generator {self.name}: degree must be >= 1")
        if self.trunc < 1:
            raise BadParams(f"generator {self.name}: truncation must be >= 1")


@dataclass(frozen=True)
class RewriteRule:
    """``target**2 = alpha*x**x_power*target + beta*y + gamma*z``."""

    target: str
    x: str
    y: str
    z: str
    x_power: int = 1
    alpha: int = 0
    beta: int = 0
    gamma: int = 0

    def __post_init__(self) -> None:
        for c in (self.alpha, self.beta, self.gamma):
            if c not in (0, 1):
                raise BadParams("rewrite coefficients must be 0 or 1")
        if self.target in (self.x, self.y, self.z):
            raise BadParams("rewrite target must not appear on the right-hand side")

    @property
    def params(self) -> tuple[int, int, int]:
        return self.alpha, self.beta, self.gamma


@dataclass(frozen=True)
class TruncatedAlgebra:
    generators: tuple[GeneratorSpec, ...]
    rewrite: RewriteRule | None = None
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        names = self.names
        if len(set(names)) != len(names):
            raise NameClash(f"duplicate generator names in {names}")
        rule = self.rewrite
        if rule is None:
            return
        for name in (rule.target, rule.x, rule.y, rule.z):
            if name not in names:
                raise BadParams(f"rewrite rule mentions unknown generator {name!r}")
        w = self.spec(rule.target)
        if w.trunc != 2:
            raise BadParams("rewrite target must have truncation 2 (its square is rewritten)")
        lhs = 2 * w.degree
        rhs = {
            "alpha": rule.x_power * self.spec(rule.x).degree + w.degree,
            "beta": self.spec(rule.y).degree,
            "gamma": self.spec(rule.z).degree,
        }
        for coeff, deg in rhs.items():
            if getattr(rule, coeff) and deg != lhs:
                raise BadParams(f"rewrite term {coeff} has degree {deg}, expected {lhs}")

    @classmethod
    def of(cls, *gens: tuple[str, int, int], rewrite: RewriteRule | None = None) -> TruncatedAlgebra:
        return cls(tuple(GeneratorSpec(*g) for g in gens), rewrite)

    @cached_property
    def names(self) -> tuple[str, ...]:
        return tuple(g.name for g in self.generators)

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(g.degree for g in self.generators)

    @cached_property
    def truncs(self) -> tuple[int, ...]:
        return tuple(g.trunc for g in self.generators)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(name) from None

    def spec(self, name: str) -> GeneratorSpec:
        return self.generators[self.index(name)]

    @property
    def top_degree(self) -> int:
        return sum(g.degree * (g.trunc - 1) for g in self.generators)

    def degree(self, mono: Monomial) -> int:
        return sum(e * d for e, d in zip(mono, self.degrees))

    def one(self) -> Poly:
        return normalize(self, (0,) * len(self.generators))

    def gen(self, name: str) -> Poly:
        exps = [0] * len(self.generators)
        exps[self.index(name)] = 1
        return normalize(self, tuple(exps))

    def mono(self, **exps: int) -> Poly:
        vec = [0] * len(self.generators)
        for name, e in exps.items():
            vec[self.index(name)] = e
        return normalize(self, tuple(vec))


@functools.lru_cache(maxsize=None)
def build_space_algebra(kind: SpaceKind | str, n: int, m: int | None = None) -> TruncatedAlgebra:
    """Cohomology model of RP^n x RP^m, CP^n x CP^m, RP^n or CP^n.

    Product factors are normalized so that ``n <= m``.
    """
    kind = SpaceKind(kind)
    if kind.is_product and m is None:
        raise BadParams(f"{kind.value} needs both n and m")
    if not kind.is_product and m is not None:
        raise BadParams(f"{kind.value} takes n only")
    if n < 1 or (m is not None and m < 1):
        raise BadParams("n and m must be >= 1")
    d = kind.generator_degree
    if m is None:
        return TruncatedAlgebra.of(("a", d, n + 1))
    n, m = min(n, m), max(n, m)
    return TruncatedAlgebra.of(("a", d, n + 1), ("b", d, m + 1))


def poly(terms: Iterable[Monomial]) -> Poly:
    """Canonical mod-2 sum: repeated monomials cancel in pairs."""
    acc: set[Monomial] = set()
    for t in terms:
        acc ^= {t}
    return tuple(sorted(acc))


def add(*elements: Poly) -> Poly:
    return poly(itertools.chain.from_iterable(elements))


def normalize(alg: TruncatedAlgebra, exps: Monomial) -> Poly:
    """Reduce an arbitrary exponent vector to a sum of basis monomials."""
    cache = alg._cache.setdefault("normalize", {})
    hit = cache.get(exps)
    if hit is not None:
        return hit
    rule = alg.rewrite
    w = alg.index(rule.target) if rule else -1
    result: Poly = ()
    if all(e < t for i, (e, t) in enumerate(zip(exps, alg.truncs)) if i != w):
        if w < 0 or exps[w] < 2:
            result = (exps,)
        else:
            base = list(exps)
            base[w] -= 2
            terms = []
            if rule.alpha:
                t = base.copy()
                t[alg.index(rule.x)] += rule.x_power
                t[w] += 1
                terms.append(t)
            if rule.beta:
                t = base.copy()
                t[alg.index(rule.y)] += 1
                terms.append(t)
            if rule.gamma:
                t = base.copy()
                t[alg.index(rule.z)] += 1
                terms.append(t)
            result = add(*(normalize(alg, tuple(t)) for t in terms))
    cache[exps] = result
    return result


def multiply(alg: TruncatedAlgebra, u: Poly, v: Poly) -> Poly:
    acc: list[Monomial] = []
    for p in u:
        for q in v:
            acc.extend(normalize(alg, tuple(i + j for i, j in zip(p, q))))
    return poly(acc)


def power(alg: TruncatedAlgebra, u: Poly, k: int) -> Poly:
    if k < 0:
        raise ValueError("negative power")
    result = alg.one()
    base = u
    while k:
        if k & 1:
            result = multiply(alg, result, base)
            if not result:
                break
        k >>= 1
        if k:
            base = multiply(alg, base, base)
    return result


def poly_degree(alg: TruncatedAlgebra, u: Poly) -> int | None:
    """Common degree of the terms of ``u``; None if inhomogeneous or zero."""
    degs = {alg.degree(m) for m in u}
    return degs.pop() if len(degs) == 1 else None


def basis_of_degree(alg: TruncatedAlgebra, l: int) -> tuple[Monomial, ...]:
    """Basis monomials of degree ``l`` in lexicographic exponent order."""
    table = alg._cache.get("basis")
    if table is None:
        caps = list(alg.truncs)
        if alg.rewrite is not None:
            caps[alg.index(alg.rewrite.target)] = 2
        buckets: dict[int, list[Monomial]] = {}
        # itertools.product yields exponent vectors in lexicographic order
        for mono in itertools.product(*(range(c) for c in caps)):
            buckets.setdefault(alg.degree(mono), []).append(mono)
        table = alg._cache["basis"] = {d: tuple(ms) for d, ms in buckets.items()}
    return table.get(l, ())


@dataclass(frozen=True)
class HilbertSeries:
    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        if any(c < 0 for c in self.coeffs):
            raise ValueError("negative dimension")

    def __mul__(self, other: HilbertSeries) -> HilbertSeries:
        if not self.coeffs or not other.coeffs:
            return HilbertSeries(())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        right = [(j, b) for j, b in enumerate(other.coeffs) if b]
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in right:
                    out[i + j] += a * b
        return HilbertSeries(tuple(out))

    def window(self, maxdeg: int) -> HilbertSeries:
        """Coefficients for degrees ``0..maxdeg``, zero-padded or cut."""
        c = self.coeffs[: maxdeg + 1]
        return HilbertSeries(c + (0,) * (maxdeg + 1 - len(c)))

    def alternating_sum(self) -> int:
        return sum(c if i % 2 == 0 else -c for i, c in enumerate(self.coeffs))

    def __getitem__(self, degree: int) -> int:
        return self.coeffs[degree] if 0 <= degree < len(self.coeffs) else 0


def hilbert_series(alg: TruncatedAlgebra, maxdeg: int | None = None) -> HilbertSeries:
    """Graded dimensions as a product of truncated geometric series.

    A rewrite target contributes ``1 + q**deg`` since its square is
    eliminated.
    """
    series = alg._cache.get("series")
    if series is None:
        series = alg._cache["series"] = _full_series(alg)
    return series.window(alg.top_degree if maxdeg is None else maxdeg)


def _full_series(alg: TruncatedAlgebra) -> HilbertSeries:
    series = HilbertSeries((1,))
    rule = alg.rewrite
    for g in alg.generators:
        trunc = 2 if rule is not None and g.name == rule.target else g.trunc
        factor = [0] * (g.degree * (trunc - 1) + 1)
        for e in range(trunc):
            factor[e * g.degree] = 1
        series = series * HilbertSeries(tuple(factor))
    return series


def kunneth_product(a1: TruncatedAlgebra, a2: TruncatedAlgebra) -> TruncatedAlgebra:
    clash = set(a1.names) & set(a2.names)
    if clash:
        raise NameClash(f"shared generator names {sorted(clash)}")
    if a1.rewrite is not None and a2.rewrite is not None:
        raise BadParams("at most one factor may carry a rewrite rule")
    return TruncatedAlgebra(a1.generators + a2.generators, a1.rewrite or a2.rewrite)


def euler_characteristic(alg: TruncatedAlgebra) -> int:
    return hilbert_series(alg).alternating_sum()


def nilpotency_order(alg: TruncatedAlgebra, u: Poly) -> int:
    """Smallest ``k >= 1`` with ``u**k == 0``."""
    d = poly_degree(alg, u)
    if not u:
        return 1
    if d is None or d < 1:
        raise BadDegree("nilpotency order needs a homogeneous element of positive degree")
    # u**k lives in degree k*d, so it vanishes once k*d exceeds the top degree
    lo, hi = 1, alg.top_degree // d + 1
    while lo < hi:
        mid = (lo + hi) // 2
        if power(alg, u, mid):
            lo = mid + 1
        else:
            hi = mid
    return lo


GeneratorImages = tuple[Poly, ...]


def apply_substitution(alg: TruncatedAlgebra, images: GeneratorImages, u: Poly) -> Poly:
    """Extend a generator substitution multiplicatively and additively to ``u``."""
    acc: list[Monomial] = []
    for mono in u:
        term = alg.one()
        for img, e in zip(images, mono):
            term = multiply(alg, term, power(alg, img, e))
        acc.extend(term)
    return poly(acc)


def involutive_automorphism_candidates(alg: TruncatedAlgebra) -> list[GeneratorImages]:
    """Linear involutions of the generator span compatible with truncations.

    Candidates are invertible substitutions ``a, b -> span{a, b}`` such that
    each image still satisfies its generator's truncation relation and the
    substitution squares to the identity.  The identity comes first.
    """
    if len(alg.generators) != 2 or alg.rewrite is not None:
        raise NotApplicable("automorphism enumeration needs a two-generator product algebra")
    g, h = alg.generators
    if g.degree != h.degree:
        raise NotApplicable("generators have different degrees")
    a, b = alg.gen(g.name), alg.gen(h.name)
    span = [a, b, add(a, b)]
    identity = (a, b)
    out = []
    for ta, tb in itertools.permutations(span, 2):
        images = (ta, tb)
        if not truncation_relations_hold(alg, images):
            continue
        if tuple(apply_substitution(alg, images, x) for x in images) != identity:
            continue
        out.append(images)
    out.sort(key=lambda im: im != identity)
    return out


def _check_middle_degree(alg: TruncatedAlgebra) -> int:
    top = alg.top_degree
    if top % 2:
        raise BadDegree(f"top degree {top} is odd; no middle-degree class exists")
    if hilbert_series(alg)[top] != 1:
        raise BadDegree("top-degree component is not one-dimensional")
    return top // 2


def fixed_point_obstruction(alg: TruncatedAlgebra, images: GeneratorImages, c: Poly) -> bool:
    """True iff ``c * T(c) != 0`` for a middle-degree class ``c``.

    A True result means the involution inducing ``T`` must have a fixed point.
    """
    half = _check_middle_degree(alg)
    if poly_degree(alg, c) != half:
        raise BadDegree(f"c must be homogeneous of degree {half}")
    return bool(multiply(alg, c, apply_substitution(alg, images, c)))


def find_obstruction_class(alg: TruncatedAlgebra, images: GeneratorImages) -> Poly | None:
    """A middle-degree ``c`` with ``c * T(c) != 0``, or None if none exists.

    ``q(c) = c * T(c)`` is additive in ``c``: the cross terms ``c*T(c')`` and
    ``c'*T(c) = T(c*T(c'))`` are equal because ``T`` fixes the one-dimensional
    top class.  So scanning the monomial basis is exhaustive.
    """
    half = _check_middle_degree(alg)
    for mono in basis_of_degree(alg, half):
        c = (mono,)
        if fixed_point_obstruction(alg, images, c):
            return c
    return None


def format_monomial(alg: TruncatedAlgebra, mono: Monomial) -> str:
    parts = []
    for name, e in zip(alg.names, mono):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "".join(parts) or "1"


def format_poly(alg: TruncatedAlgebra, u: Poly) -> str:
    if not u:
        return "0"
    return " + ".join(format_monomial(alg, m) for m in u)


def format_presentation(alg: TruncatedAlgebra, symbolic: bool = False) -> str:
    """Render as ``Z2[x,y]/<x^2, y^3>``; truncation 1 means the generator is zero.

    With ``symbolic`` the rewrite rule is shown with letters for its
    coefficients instead of their values.
    """
    rule = alg.rewrite
    relations = []
    for g in alg.generators:
        if rule is not None and g.name == rule.target:
            xp = rule.x if rule.x_power == 1 else f"{rule.x}^{rule.x_power}"
            terms = [(rule.alpha, "alpha ", f"{xp}{g.name}"), (rule.beta, "beta ", rule.y), (rule.gamma, "gamma ", rule.z)]
            if symbolic:
                rhs = [coef + t for _, coef, t in terms]
            else:
                rhs = [t for on, _, t in terms if on]
            relations.append(f"{g.name}^2" + "".join(f" + {t}" for t in rhs))
        elif g.trunc == 1:
            relations.append(g.name)
        else:
            relations.append(f"{g.name}^{g.trunc}")
    degs = ", ".join(f"deg {g.name} = {g.degree}" for g in alg.generators)
    return f"Z2[{','.join(alg.names)}]/<{', '.join(relations)}> ({degs})"


def truncation_relations_hold(alg: TruncatedAlgebra, images: Sequence[Poly]) -> bool:
    return not any(power(alg, img, g.trunc) for img, g in zip(images, alg.generators))

"""Finite abelian groups in invariant-factor form.

A group is a chain of elementary divisors d1 | d2 | ... (each > 1); an
element is its exponent vector modulo the chain.  Groups arise here in two
ways: from an explicit integer relation matrix (Smith normal form), or from
a "black box" (a finite list of elements with a multiplication rule), in
which case discrete logarithms are tabulated during construction.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import gcd, prod

from .matrices import smith_normal_form, vec_mat


@dataclass(frozen=True)
class FiniteAbelianGroup:
    divisors: tuple[int, ...]

    def __post_init__(self):
        for a, b in zip(self.divisors, self.divisors[1:]):
            if b % a != 0:
                raise ValueError("divisors must form a chain d1 | d2 | ...")
        if any(d < 2 for d in self.divisors):
            raise ValueError("divisors must all exceed 1")

    @property
    def order(self) -> int:
        return prod(self.divisors)

    @property
    def rank(self) -> int:
        return len(self.divisors)

    def identity(self) -> tuple[int, ...]:
        return (0,) * len(self.divisors)

    def reduce(self, vec) -> tuple[int, ...]:
        return tuple(x % d for x, d in zip(vec, self.divisors))

    def add(self, x, y) -> tuple[int, ...]:
        return tuple((a + b) % d for a, b, d in zip(x, y, self.divisors))

    def neg(self, x) -> tuple[int, ...]:
        return tuple((-a) % d for a, d in zip(x, self.divisors))

    def sub(self, x, y) -> tuple[int, ...]:
        return tuple((a - b) % d for a, b, d in zip(x, y, self.divisors))

    def scale(self, k: int, x) -> tuple[int, ...]:
        return tuple((k * a) % d for a, d in zip(x, self.divisors))

    def element_order(self, x) -> int:
        order = 1
        for a, d in zip(x, self.divisors):
            g = d // gcd(a, d)
            order = order * g // gcd(order, g)
        return order

    def elements(self):
        return itertools.product(*(range(d) for d in self.divisors))

    def describe(self) -> str:
        if not self.divisors:
            return "trivial"
        return " + ".join(f"Z/{d}" for d in self.divisors)


@dataclass(frozen=True)
class QuotientPresentation:
    """Z^n modulo the row span of a relation matrix, in chain coordinates."""

    group: FiniteAbelianGroup
    _v: tuple[tuple[int, ...], ...]
    _v_inv: tuple[tuple[int, ...], ...]
    _kept: tuple[int, ...]

    def project(self, vec) -> tuple[int, ...]:
        """Chain coordinates of a Z^n vector."""
        w = vec_mat(list(vec), [list(r) for r in self._v])
        return tuple(w[j] % d for j, d in zip(self._kept, self.group.divisors))

    def generator_lift(self, k: int) -> list[int]:
        """A Z^n vector projecting to the k-th chain generator."""
        return list(self._v_inv[self._kept[k]])


def quotient_by_relations(n_gens: int, relation_rows) -> QuotientPresentation:
    """Structure of Z^n_gens / <relation rows>.  The quotient must be finite."""
    rows = [list(r) for r in relation_rows]
    if not rows:
        rows = [[0] * n_gens]
    snf = smith_normal_form(rows)
    diag = snf.diagonal + [0] * (n_gens - len(snf.diagonal))
    if any(d == 0 for d in diag):
        raise ValueError("relation matrix does not present a finite group")
    kept = tuple(j for j, d in enumerate(diag) if d > 1)
    group = FiniteAbelianGroup(tuple(diag[j] for j in kept))
    return QuotientPresentation(
        group=group,
        _v=tuple(tuple(r) for r in snf.v),
        _v_inv=tuple(tuple(r) for r in snf.v_inv),
        _kept=kept,
    )


@dataclass(frozen=True)
class StructuredGroup:
    """Abelian structure of a black-box group, with tabulated discrete logs."""

    group: FiniteAbelianGroup
    _logs: dict
    _generators: tuple

    def log(self, key) -> tuple[int, ...]:
        return self._logs[key]

    def has(self, key) -> bool:
        return key in self._logs

    @property
    def generators(self) -> tuple:
        """Elements realizing the chain generators."""
        return self._generators


def structure_from_elements(elements, op, identity, key=lambda x: x) -> StructuredGroup:
    """Compute the structure of the finite abelian group formed by `elements`.

    Greedy closure: each new generator x contributes one relation
    t*x = (combination of earlier generators) with t minimal.  The relation
    rows are triangular with diagonal product equal to the group order, so
    they span the full relation lattice and Smith reduction of them yields
    the invariant factors together with a discrete log for every element.
    """
    closure: dict = {key(identity): (identity, [])}
    gens: list = []
    relations: list[list[int]] = []
    for x in elements:
        if key(x) in closure:
            continue
        prev = len(gens)
        gens.append(x)
        old_items = list(closure.values())
        powers = []
        power = x
        t = 1
        while key(power) not in closure:
            powers.append(power)
            power = op(power, x)
            t += 1
        tail = closure[key(power)][1]
        relations.append([-c for c in tail] + [0] * (prev - len(tail)) + [t])
        for j, pw in enumerate(powers, start=1):
            for elem, vec in old_items:
                combined = op(pw, elem)
                closure[key(combined)] = (combined, vec + [0] * (prev - len(vec)) + [j])
    n = len(gens)
    rows = [r + [0] * (n - len(r)) for r in relations]
    pres = quotient_by_relations(n, rows)
    logs = {k: pres.project(vec + [0] * (n - len(vec))) for k, (_, vec) in closure.items()}
    order = pres.group.order

    def power_of(base, exponent):
        exponent %= order
        result = identity
        acc = base
        while exponent:
            if exponent & 1:
                result = op(result, acc)
            acc = op(acc, acc)
            exponent >>= 1
        return result

    generators = []
    for k in range(pres.group.rank):
        lift = pres.generator_lift(k)
        elem = identity
        for g, e in zip(gens, lift):
            elem = op(elem, power_of(g, e))
        generators.append(elem)
    return StructuredGroup(group=pres.group, _logs=logs, _generators=tuple(generators))

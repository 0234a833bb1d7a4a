"""Even integer lattices and their discriminant quadratic forms.

A lattice is a symmetric integer Gram matrix.  For a nondegenerate even
lattice L the finite group A = L^dual / L carries a quadratic form with
values in Q/2Z; isometries of L act on A, and two isometries of a pair of
glued lattices lift to the overlattice exactly when they induce the same
map on A.  Everything is exact: q-values are reduced Fractions in [0, 2),
bilinear values in [0, 1).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

from .abelian import FiniteAbelianGroup
from .errors import (
    DegenerateLattice,
    IncompatibleForms,
    InvalidInput,
    NotAnIsometry,
    OddLattice,
)
from .matrices import det, fraction_inverse, mat_mul, mat_vec, smith_normal_form


@dataclass(frozen=True)
class IntegerLattice:
    gram: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.gram)
        if any(len(row) != n for row in self.gram):
            raise InvalidInput("Gram matrix must be square")
        for i in range(n):
            for j in range(n):
                if self.gram[i][j] != self.gram[j][i]:
                    raise InvalidInput("Gram matrix must be symmetric")

    @classmethod
    def from_rows(cls, rows) -> "IntegerLattice":
        return cls(tuple(tuple(int(x) for x in row) for row in rows))

    @property
    def rank(self) -> int:
        return len(self.gram)

    @property
    def is_even(self) -> bool:
        return all(self.gram[i][i] % 2 == 0 for i in range(self.rank))

    def determinant(self) -> int:
        return det([list(r) for r in self.gram])

    def negated(self) -> "IntegerLattice":
        return IntegerLattice.from_rows([[-x for x in row] for row in self.gram])

    def is_isometry(self, f) -> bool:
        g = [list(r) for r in self.gram]
        ft = [list(col) for col in zip(*f)]
        return mat_mul(mat_mul(ft, g), [list(r) for r in f]) == g


def _mod2(x: Fraction) -> Fraction:
    return x - 2 * (x / 2).__floor__()


def _mod1(x: Fraction) -> Fraction:
    return x - x.__floor__()


@dataclass(frozen=True)
class DiscriminantForm:
    """The finite quadratic form (A, q) of a nondegenerate even lattice."""

    lattice: IntegerLattice
    group: FiniteAbelianGroup
    # dual-vector representatives of the chain generators, as Fraction tuples
    generator_vectors: tuple[tuple[Fraction, ...], ...]
    _u: tuple[tuple[int, ...], ...]
    _divisor_pattern: tuple[int, ...]
    _kept: tuple[int, ...]

    def dual_vector(self, element) -> tuple[Fraction, ...]:
        n = self.lattice.rank
        acc = [Fraction(0)] * n
        for e, vec in zip(element, self.generator_vectors):
            for i in range(n):
                acc[i] += e * vec[i]
        return tuple(acc)

    def log_dual_vector(self, vec) -> tuple[int, ...]:
        """Chain coordinates of a dual vector (must lie in L^dual)."""
        g = [list(r) for r in self.lattice.gram]
        x = mat_vec(g, list(vec))
        if any(c.denominator != 1 for c in x):
            raise InvalidInput("vector is not in the dual lattice")
        w = mat_vec([list(r) for r in self._u], [int(c) for c in x])
        return tuple(
            w[j] % self._divisor_pattern[j] for j in self._kept
        )

    def q(self, element) -> Fraction:
        vec = self.dual_vector(element)
        g = [list(r) for r in self.lattice.gram]
        value = sum(
            vec[i] * g[i][j] * vec[j] for i in range(len(vec)) for j in range(len(vec))
        )
        return _mod2(value)

    def bilinear(self, e1, e2) -> Fraction:
        v1 = self.dual_vector(e1)
        v2 = self.dual_vector(e2)
        g = [list(r) for r in self.lattice.gram]
        value = sum(
            v1[i] * g[i][j] * v2[j] for i in range(len(v1)) for j in range(len(v1))
        )
        return _mod1(value)

    def q_values(self) -> dict:
        return {elem: self.q(elem) for elem in self.group.elements()}


def discriminant_form(lattice: IntegerLattice) -> DiscriminantForm:
    if not lattice.is_even:
        raise OddLattice("lattice has an odd diagonal entry")
    determinant = lattice.determinant()
    if determinant == 0:
        raise DegenerateLattice("lattice is degenerate")
    g = [list(r) for r in lattice.gram]
    snf = smith_normal_form(g)
    diag = snf.diagonal
    kept = tuple(j for j, dj in enumerate(diag) if dj > 1)
    group = FiniteAbelianGroup(tuple(diag[j] for j in kept))
    g_inv = fraction_inverse(g)
    gens = []
    for j in kept:
        col = [snf.u_inv[i][j] for i in range(lattice.rank)]
        vec = tuple(
            sum(g_inv[i][k] * col[k] for k in range(lattice.rank))
            for i in range(lattice.rank)
        )
        gens.append(vec)
    return DiscriminantForm(
        lattice=lattice,
        group=group,
        generator_vectors=tuple(gens),
        _u=tuple(tuple(r) for r in snf.u),
        _divisor_pattern=tuple(diag),
        _kept=kept,
    )


@dataclass(frozen=True)
class DiscFormIsometry:
    """An automorphism of a discriminant form, as a matrix on chain generators."""

    form: DiscriminantForm
    matrix: tuple[tuple[int, ...], ...]  # column j = image of generator j

    def apply(self, element) -> tuple[int, ...]:
        group = self.form.group
        acc = group.identity()
        for j, e in enumerate(element):
            col = tuple(self.matrix[i][j] for i in range(group.rank))
            acc = group.add(acc, group.scale(e, col))
        return acc

    def compose(self, other: "DiscFormIsometry") -> "DiscFormIsometry":
        group = self.form.group
        cols = [self.apply(tuple(other.matrix[i][j] for i in range(group.rank)))
                for j in range(group.rank)]
        matrix = tuple(tuple(cols[j][i] for j in range(group.rank)) for i in range(group.rank))
        return DiscFormIsometry(self.form, matrix)

    def equals(self, other: "DiscFormIsometry") -> bool:
        group = self.form.group
        for j in range(group.rank):
            a = tuple(self.matrix[i][j] % group.divisors[i] for i in range(group.rank))
            b = tuple(other.matrix[i][j] % group.divisors[i] for i in range(group.rank))
            if a != b:
                return False
        return True

    def is_identity(self) -> bool:
        return self.equals(identity_disc_map(self.form))

    def inverse(self) -> "DiscFormIsometry":
        # finite order: the inverse is the last power before reaching the identity
        identity = identity_disc_map(self.form)
        prev, power = identity, self
        while not power.equals(identity):
            prev, power = power, power.compose(self)
        return prev


def identity_disc_map(form: DiscriminantForm) -> DiscFormIsometry:
    rank = form.group.rank
    return DiscFormIsometry(
        form, tuple(tuple(int(i == j) for j in range(rank)) for i in range(rank))
    )


def induced_disc_map(lattice_or_form, f) -> DiscFormIsometry:
    """The action of a lattice isometry f on the discriminant form."""
    form = (
        lattice_or_form
        if isinstance(lattice_or_form, DiscriminantForm)
        else discriminant_form(lattice_or_form)
    )
    lattice = form.lattice
    if not lattice.is_isometry(f):
        raise NotAnIsometry("matrix does not preserve the Gram matrix")
    rank = form.group.rank
    cols = []
    for j in range(rank):
        vec = form.generator_vectors[j]
        image = tuple(
            sum(Fraction(f[i][k]) * vec[k] for k in range(lattice.rank))
            for i in range(lattice.rank)
        )
        cols.append(form.log_dual_vector(image))
    matrix = tuple(tuple(cols[j][i] for j in range(rank)) for i in range(rank))
    iso = DiscFormIsometry(form, matrix)
    for j in range(rank):
        gen = tuple(int(i == j) for i in range(rank))
        if form.q(iso.apply(gen)) != form.q(gen):
            raise NotAnIsometry("induced map does not preserve q")
    return iso


@dataclass(frozen=True)
class FormIdentification:
    """A group isomorphism source -> target negating the quadratic form."""

    source: DiscriminantForm
    target: DiscriminantForm
    matrix: tuple[tuple[int, ...], ...]  # column j = image of source generator j

    def apply(self, element) -> tuple[int, ...]:
        group = self.target.group
        acc = group.identity()
        for j, e in enumerate(element):
            col = tuple(self.matrix[i][j] for i in range(group.rank))
            acc = group.add(acc, group.scale(e, col))
        return acc


def check_identification(ident: FormIdentification):
    """Raise IncompatibleForms unless ident is an isomorphism with
    q_target(ident(x)) = -q_source(x)."""
    src, tgt = ident.source, ident.target
    if src.group.order != tgt.group.order:
        raise IncompatibleForms("discriminant groups have different orders")
    images = set()
    for elem in src.group.elements():
        images.add(ident.apply(elem))
    if len(images) != src.group.order:
        raise IncompatibleForms("identification is not a bijection")
    for j in range(src.group.rank):
        gen = tuple(int(i == j) for i in range(src.group.rank))
        if _mod2(tgt.q(ident.apply(gen)) + src.q(gen)) != 0:
            raise IncompatibleForms("identification does not negate q on a generator")
        for k in range(j + 1, src.group.rank):
            gen2 = tuple(int(i == k) for i in range(src.group.rank))
            if _mod1(tgt.bilinear(ident.apply(gen), ident.apply(gen2))
                     + src.bilinear(gen, gen2)) != 0:
                raise IncompatibleForms("identification does not negate the pairing")


def form_negating_identifications(source: DiscriminantForm, target: DiscriminantForm):
    """All isomorphisms (A_source, -q) = (A_target, q), by direct enumeration.

    Intended for the small groups arising from toy gluings.
    """
    if source.group.divisors != target.group.divisors:
        return []
    rank = source.group.rank
    candidates = []
    for j in range(rank):
        order = source.group.divisors[j]
        candidates.append(
            [e for e in target.group.elements()
             if target.group.element_order(e) == order]
        )
    found = []
    for cols in itertools.product(*candidates):
        matrix = tuple(tuple(cols[j][i] for j in range(rank)) for i in range(rank))
        ident = FormIdentification(source=source, target=target, matrix=matrix)
        try:
            check_identification(ident)
        except IncompatibleForms:
            continue
        found.append(ident)
    return found


def glue_check(
    f_n: DiscFormIsometry, f_t: DiscFormIsometry, ident: FormIdentification
) -> bool:
    """Do two isometries glue to the overlattice determined by ident?

    True iff the induced maps agree through the identification, i.e.
    f_n(ident(x)) = ident(f_t(x)) for all x.
    """
    if ident.source is not f_t.form and ident.source != f_t.form:
        raise InvalidInput("identification source must be the form acted on by f_t")
    check_identification(ident)
    rank = f_t.form.group.rank
    for j in range(rank):
        gen = tuple(int(i == j) for i in range(rank))
        if f_n.apply(ident.apply(gen)) != ident.apply(f_t.apply(gen)):
            return False
    return True


# ----- overlattice machinery (exact oracle for the gluing criterion) -----


def glued_overlattice_basis(
    lat_n: IntegerLattice,
    lat_t: IntegerLattice,
    form_n: DiscriminantForm,
    form_t: DiscriminantForm,
    ident: FormIdentification,
) -> list[list[Fraction]]:
    """Basis of the overlattice of N + T glued along ident, as rational rows."""
    n, m = lat_n.rank, lat_t.rank
    rows = []
    for i in range(n + m):
        rows.append([Fraction(int(i == j)) for j in range(n + m)])
    for j in range(form_t.group.rank):
        gen = tuple(int(i == j) for i in range(form_t.group.rank))
        vec_t = form_t.dual_vector(gen)
        vec_n = form_n.dual_vector(ident.apply(gen))
        rows.append(list(vec_n) + list(vec_t))
    # integer HNF after clearing denominators
    denom = 1
    for row in rows:
        for x in row:
            denom = denom * x.denominator // gcd(denom, x.denominator)
    int_rows = [[int(x * denom) for x in row] for row in rows]
    basis = _row_basis(int_rows)
    return [[Fraction(x, denom) for x in row] for row in basis]


def _row_basis(rows: list[list[int]]) -> list[list[int]]:
    """A Z-basis of the row span (row echelon over Z)."""
    rows = [list(r) for r in rows if any(r)]
    if not rows:
        return []
    cols = len(rows[0])
    basis = []
    col = 0
    while col < cols and rows:
        with_pivot = [r for r in rows if r[col] != 0]
        if not with_pivot:
            col += 1
            continue
        while True:
            with_pivot.sort(key=lambda r: abs(r[col]))
            pivot = with_pivot[0]
            reduced = False
            for r in with_pivot[1:]:
                q = r[col] // pivot[col]
                for k in range(cols):
                    r[k] -= q * pivot[k]
                if r[col] != 0:
                    reduced = True
            with_pivot = [r for r in with_pivot if r[col] != 0]
            if not reduced and len(with_pivot) == 1:
                break
        basis.append(pivot if pivot[col] > 0 else [-x for x in pivot])
        rows = [r for r in rows if r is not pivot and any(r)]
        col += 1
    return basis


def lifts_to_overlattice(f_n_matrix, f_t_matrix, overlattice_basis) -> bool:
    """Does f_n + f_t preserve the glued overlattice?  Exact lift test."""
    n = len(f_n_matrix)
    m = len(f_t_matrix)
    block = [[Fraction(0)] * (n + m) for _ in range(n + m)]
    for i in range(n):
        for j in range(n):
            block[i][j] = Fraction(f_n_matrix[i][j])
    for i in range(m):
        for j in range(m):
            block[n + i][n + j] = Fraction(f_t_matrix[i][j])
    basis_inv = fraction_inverse([list(r) for r in overlattice_basis])
    for row in overlattice_basis:
        image = [sum(block[i][k] * row[k] for k in range(n + m)) for i in range(n + m)]
        coords = [
            sum(image[k] * basis_inv[k][j] for k in range(n + m)) for j in range(n + m)
        ]
        if any(c.denominator != 1 for c in coords):
            return False
    return True


# ----- isometry enumeration for definite lattices (toy scale) -----


def short_vectors(lattice: IntegerLattice, value: int) -> list[tuple[int, ...]]:
    """All vectors v with v^T G v = value, for a positive definite lattice."""
    g = lattice.gram
    n = lattice.rank
    if n == 1:
        out = []
        if value % g[0][0] == 0:
            s = value // g[0][0]
            r = isqrt(s)
            if r * r == s:
                out = [(-r,), (r,)] if r else [(0,)]
        return out
    if n != 2:
        raise InvalidInput("short vector search implemented for rank <= 2")
    a, b, c = g[0][0], g[0][1], g[1][1]
    disc = a * c - b * b
    if disc <= 0 or a <= 0:
        raise InvalidInput("lattice must be positive definite")
    out = []
    ybound = isqrt(a * value // disc)
    for y in range(-ybound, ybound + 1):
        # a x^2 + 2 b x y + c y^2 = value
        delta = (b * y) ** 2 - a * (c * y * y - value)
        if delta < 0:
            continue
        r = isqrt(delta)
        if r * r != delta:
            continue
        for sign in (1, -1):
            num = -b * y + sign * r
            if num % a == 0:
                out.append((num // a, y))
    return sorted(set(out))


def isometry_group(lattice: IntegerLattice) -> list[list[list[int]]]:
    """All isometries of a definite lattice of rank <= 2, by vector matching."""
    gram = lattice.gram
    work = lattice
    if gram and gram[0][0] < 0:
        work = lattice.negated()
    g = work.gram
    n = work.rank
    if n == 1:
        return [[[1]], [[-1]]]
    images0 = short_vectors(work, g[0][0])
    images1 = short_vectors(work, g[1][1])
    result = []
    for v0 in images0:
        for v1 in images1:
            pairing = sum(v0[i] * g[i][j] * v1[j] for i in range(2) for j in range(2))
            if pairing != g[0][1]:
                continue
            f = [[v0[0], v1[0]], [v0[1], v1[1]]]
            if abs(det(f)) == 1:
                result.append(f)
    return result

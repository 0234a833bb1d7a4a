import random

from k3cm.matrices import (
    det,
    fraction_inverse,
    hnf_pair_basis,
    identity_matrix,
    kernel_basis,
    mat_mul,
    mat_vec,
    smith_normal_form,
    solve_integer,
)


def random_matrix(rng, m, n, bound=20):
    return [[rng.randrange(-bound, bound + 1) for _ in range(n)] for _ in range(m)]


def check_snf(mat):
    snf = smith_normal_form(mat)
    m, n = len(mat), len(mat[0])
    assert mat_mul(mat_mul(snf.u, mat), snf.v) == snf.d
    assert mat_mul(snf.u, snf.u_inv) == identity_matrix(m)
    assert mat_mul(snf.v, snf.v_inv) == identity_matrix(n)
    diag = snf.diagonal
    for i in range(m):
        for j in range(n):
            if i != j:
                assert snf.d[i][j] == 0
    nonzero = [x for x in diag if x != 0]
    for a, b in zip(nonzero, nonzero[1:]):
        assert b % a == 0
    # zeros only at the end
    seen_zero = False
    for x in diag:
        if x == 0:
            seen_zero = True
        else:
            assert not seen_zero
    return diag


def test_snf_examples():
    assert check_snf([[8, 0], [0, 8]]) == [8, 8]
    assert check_snf([[2, 1], [1, 2]]) == [1, 3]
    assert check_snf([[0, 1], [1, 0]]) == [1, 1]


def test_snf_random_shapes():
    rng = random.Random(5)
    for _ in range(150):
        m = rng.randrange(1, 6)
        n = rng.randrange(1, 6)
        check_snf(random_matrix(rng, m, n))


def test_snf_determinant_invariant():
    rng = random.Random(9)
    for _ in range(100):
        n = rng.randrange(1, 5)
        mat = random_matrix(rng, n, n)
        diag = check_snf(mat)
        prod = 1
        for x in diag:
            prod *= x
        assert prod == abs(det(mat))


def test_det():
    assert det([[2, 1], [1, 2]]) == 3
    assert det([[1, 2], [2, 4]]) == 0
    assert det([[0, 1], [1, 0]]) == -1


def test_fraction_inverse():
    rng = random.Random(1)
    for _ in range(50):
        n = rng.randrange(1, 5)
        mat = random_matrix(rng, n, n, bound=9)
        if det(mat) == 0:
            continue
        inv = fraction_inverse(mat)
        prod = mat_mul(mat, inv)
        assert prod == identity_matrix(n)


def test_hnf_pair_basis():
    assert hnf_pair_basis([(3, 1), (-5, -1)]) == (2, 1, 1)
    assert hnf_pair_basis([(2, 0), (0, 2)]) == (2, 0, 2)
    assert hnf_pair_basis([(4, 0), (0, 0)]) is None
    rng = random.Random(13)
    for _ in range(200):
        rows = [(rng.randrange(-30, 31), rng.randrange(-30, 31)) for _ in range(4)]
        basis = hnf_pair_basis(rows)
        if basis is None:
            continue
        a, b, c = basis
        assert a > 0 and c > 0 and 0 <= b < a
        # every original row lies in the span of (a, 0), (b, c)
        for x, y in rows:
            assert y % c == 0
            assert (x - (y // c) * b) % a == 0


def test_solve_integer():
    assert solve_integer([[2, 0], [0, 3]], [4, 9]) == [2, 3]
    assert solve_integer([[2]], [3]) is None
    rng = random.Random(21)
    for _ in range(100):
        m = rng.randrange(1, 4)
        n = rng.randrange(1, 4)
        mat = random_matrix(rng, m, n, bound=8)
        x = [rng.randrange(-5, 6) for _ in range(n)]
        rhs = mat_vec(mat, x)
        sol = solve_integer(mat, rhs)
        assert sol is not None
        assert mat_vec(mat, sol) == rhs


def test_kernel_basis():
    basis = kernel_basis([[1, 2, 3]])
    assert len(basis) == 2
    for vec in basis:
        assert vec[0] + 2 * vec[1] + 3 * vec[2] == 0
    assert kernel_basis([[2, 0], [0, 3]]) == []

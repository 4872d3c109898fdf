"""Truth tables as arbitrary-precision ints, one bit per input pattern.

Bit ``p`` of a table holds the function value on the pattern whose variable
``i`` equals bit ``i`` of ``p``.  Tables over ``n`` variables occupy
``2**n`` bits.  Cubes are ``(pos, neg)`` variable masks: ``pos`` bit ``i``
means the cube contains ``x_i``, ``neg`` bit ``i`` means ``~x_i``.
"""

from __future__ import annotations

Cube = tuple[int, int]

_PROJ_CACHE: dict[tuple[int, int], int] = {}


def table_mask(num_vars: int) -> int:
    return (1 << (1 << num_vars)) - 1


def var_projection(i: int, num_vars: int) -> int:
    """Truth table of the bare variable ``x_i`` over ``num_vars`` inputs."""
    key = (i, num_vars)
    cached = _PROJ_CACHE.get(key)
    if cached is not None:
        return cached
    half = 1 << i  # run length of equal bits
    unit = ((1 << half) - 1) << half
    tt = 0
    period = 1 << (i + 1)
    for start in range(0, 1 << num_vars, period):
        tt |= unit << start
    _PROJ_CACHE[key] = tt
    return tt


def cofactor0(f: int, i: int, num_vars: int) -> int:
    """Restrict ``x_i = 0``, replicated so the result ignores ``x_i``."""
    v = var_projection(i, num_vars)
    low = f & ~v & table_mask(num_vars)
    return low | (low << (1 << i))


def cofactor1(f: int, i: int, num_vars: int) -> int:
    v = var_projection(i, num_vars)
    high = f & v
    return high | (high >> (1 << i))


def flip_var(f: int, i: int, num_vars: int) -> int:
    """Truth table of ``f`` with input ``x_i`` complemented."""
    v = var_projection(i, num_vars)
    s = 1 << i
    return ((f & v) >> s) | ((f & ~v & table_mask(num_vars)) << s)


def swap_adjacent_vars(f: int, i: int, num_vars: int) -> int:
    """Exchange the roles of ``x_i`` and ``x_{i+1}``."""
    s = 1 << i
    v_i = var_projection(i, num_vars)
    v_j = var_projection(i + 1, num_vars)
    keep = f & ((v_i & v_j) | (~v_i & ~v_j & table_mask(num_vars)))
    up = (f & (v_i & ~v_j)) << s    # x_i=1, x_j=0  ->  x_i=0, x_j=1
    down = (f & (~v_i & v_j)) >> s
    return keep | up | down


def permute_vars(f: int, perm: tuple[int, ...], num_vars: int) -> int:
    """Table of ``g(x) = f(x_{perm[0]}, ..., x_{perm[n-1]})``.

    Input ``i`` of the result reads original input ``perm[i]``; ``perm``
    must be a permutation of ``range(num_vars)``.
    """
    cur = list(perm)
    # selection sort with adjacent swaps mirrored onto the table
    for target in range(num_vars):
        pos = cur.index(target)
        while pos > target:
            f = swap_adjacent_vars(f, pos - 1, num_vars)
            cur[pos - 1], cur[pos] = cur[pos], cur[pos - 1]
            pos -= 1
    return f


def depends_on(f: int, i: int, num_vars: int) -> bool:
    return cofactor0(f, i, num_vars) != cofactor1(f, i, num_vars)


def support(f: int, num_vars: int) -> list[int]:
    return [i for i in range(num_vars) if depends_on(f, i, num_vars)]


def cube_table(cube: Cube, num_vars: int) -> int:
    pos, neg = cube
    tt = table_mask(num_vars)
    for i in range(num_vars):
        if (pos >> i) & 1:
            tt &= var_projection(i, num_vars)
        if (neg >> i) & 1:
            tt &= ~var_projection(i, num_vars)
    return tt & table_mask(num_vars)


def cover_table(cubes: list[Cube], num_vars: int) -> int:
    tt = 0
    for c in cubes:
        tt |= cube_table(c, num_vars)
    return tt


def isop(lower: int, upper: int, num_vars: int) -> list[Cube]:
    """Irredundant sum-of-products cover with onset between the two bounds.

    Returns cubes whose union ``g`` satisfies ``lower <= g <= upper`` as
    sets; the interval-based recursion keeps every cube prime and no cube
    redundant.  ``lower`` must imply ``upper``.
    """
    mask = table_mask(num_vars)
    if lower & ~upper & mask:
        raise ValueError("lower bound exceeds upper bound")

    def rec(l: int, u: int, i: int) -> tuple[list[Cube], int]:
        if l == 0:
            return [], 0
        if u == mask:
            return [(0, 0)], mask
        while not depends_on(l, i, num_vars) and not depends_on(u, i, num_vars):
            i += 1
        l0 = cofactor0(l, i, num_vars)
        l1 = cofactor1(l, i, num_vars)
        u0 = cofactor0(u, i, num_vars)
        u1 = cofactor1(u, i, num_vars)
        c_neg, f_neg = rec(l0 & ~u1 & mask, u0, i + 1)
        c_pos, f_pos = rec(l1 & ~u0 & mask, u1, i + 1)
        l_rest = (l0 & ~f_neg & mask) | (l1 & ~f_pos & mask)
        c_rest, f_rest = rec(l_rest, u0 & u1, i + 1)
        v = var_projection(i, num_vars)
        f = (f_neg & ~v & mask) | (f_pos & v) | f_rest
        cubes = ([(p, n | (1 << i)) for p, n in c_neg]
                 + [(p | (1 << i), n) for p, n in c_pos]
                 + c_rest)
        return cubes, f

    cubes, f = rec(lower & mask, upper & mask, 0)
    assert lower & ~f & mask == 0 and f & ~upper & mask == 0
    return cubes

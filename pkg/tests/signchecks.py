"""Exhaustive checks of the multi-index sign identities.

Each check enumerates every admissible configuration of pairwise disjoint
multi-indices drawn from 1..n and returns (cases, failures).  Sequence
statements run over all orderings; statements about increasing multi-indices
run over all label assignments of the indices.
"""
from __future__ import annotations

from itertools import combinations, combinations_with_replacement, permutations, product

from grassmann.multiindex import (MultiIndex, epsilon, epsilon_concat, indices_to_bits,
                                  pairs, pairs_bits, xi, zeta)

from oracles import count_pairs, perm_parity

NMAX = 6

_eps_cache: dict = {}


def eps(seq) -> int:
    seq = tuple(seq)
    v = _eps_cache.get(seq)
    if v is None:
        v = _eps_cache[seq] = epsilon(seq)
    return v


def sequences(n: int):
    for k in range(n + 1):
        for sub in combinations(range(1, n + 1), k):
            yield from permutations(sub)


def disjoint_sequences(n: int, m: int):
    """All m-tuples of pairwise disjoint sequences (empty parts allowed)."""
    for s in sequences(n):
        for cuts in combinations_with_replacement(range(len(s) + 1), m - 1):
            bounds = (0,) + cuts + (len(s),)
            yield tuple(s[bounds[t]:bounds[t + 1]] for t in range(m))


def disjoint_increasing(n: int, m: int):
    """All m-tuples of pairwise disjoint increasing multi-indices."""
    for labels in product(range(m + 1), repeat=n):
        parts = [[] for _ in range(m)]
        for idx, lab in enumerate(labels, start=1):
            if lab:
                parts[lab - 1].append(idx)
        yield tuple(tuple(p) for p in parts)


def _sign(k: int) -> int:
    return -1 if k & 1 else 1


def _bits(r) -> int:
    return indices_to_bits(r)


# ---------------------------------------------------------------------------
# definitions against the oracles

def check_epsilon_oracle(n=NMAX):
    cases = fails = 0
    for s in sequences(n):
        cases += 1
        fails += eps(s) != perm_parity(s)
    for k in range(6):
        for s in product(range(1, 5), repeat=k):
            cases += 1
            fails += epsilon(s) != perm_parity(s)
    return cases, fails


def check_pairs_oracle(n=NMAX):
    cases = fails = 0
    for r, s in disjoint_sequences(n, 2):
        cases += 1
        fails += pairs(r, s) != count_pairs(r, s)
    for i, j in disjoint_increasing(n, 2):
        cases += 1
        fails += pairs_bits(_bits(i), _bits(j)) != count_pairs(i, j)
    return cases, fails


# ---------------------------------------------------------------------------
# pairs identities

def check_pairs_props(n=NMAX):
    cases = fails = 0
    for r, s, t in disjoint_sequences(n, 3):
        cases += 1
        rs = r + s
        ok = len(rs) == len(r) + len(s)
        if rs:
            ok &= MultiIndex.of(rs, n).norm() == sum(r) + sum(s)
        ok &= pairs(rs, t) == pairs(r, t) + pairs(s, t)
        ok &= pairs(r, s + t) == pairs(r, s) + pairs(r, t)
        ok &= pairs(tuple(sorted(r)), s) == pairs(r, s) == pairs(r, tuple(sorted(s)))
        fails += not ok
    return cases, fails


# ---------------------------------------------------------------------------
# epsilon identities

def check_adjacent_swap(n=NMAX):
    cases = fails = 0
    for m in (2, 3):
        for parts in disjoint_sequences(n, m):
            whole = sum(parts, ())
            for a in range(m - 1):
                cases += 1
                sw = list(parts)
                sw[a], sw[a + 1] = sw[a + 1], sw[a]
                want = _sign(len(parts[a]) * len(parts[a + 1])) * eps(sum(sw, ()))
                fails += eps(whole) != want
    return cases, fails


def check_sort_one_factor(n=NMAX):
    cases = fails = 0
    for m in (1, 2, 3):
        for parts in disjoint_sequences(n, m):
            whole = sum(parts, ())
            for a in range(m):
                cases += 1
                so = list(parts)
                so[a] = tuple(sorted(so[a]))
                fails += eps(whole) != eps(parts[a]) * eps(sum(so, ()))
    return cases, fails


def check_concat_pairs(n=NMAX):
    cases = fails = 0
    for i, j in disjoint_increasing(n, 2):
        cases += 1
        want = _sign(pairs(i, j))
        fails += not (epsilon_concat(_bits(i), _bits(j)) == eps(i + j) == want)
    return cases, fails


def check_sorted_blocks(n=NMAX):
    """Sorted blocks of up to three increasing parts each."""
    cases = fails = 0
    for parts in disjoint_increasing(n, 6):
        I, J = parts[:3], parts[3:]
        cases += 1
        lhs = epsilon_concat(_bits(sum(I, ())), _bits(sum(J, ())))
        rhs = 1
        for ia in I:
            for jb in J:
                rhs *= epsilon_concat(_bits(ia), _bits(jb))
        fails += lhs != rhs
    return cases, fails


def check_pairwise_product(n=NMAX):
    cases = fails = 0
    # m <= 3 with increasing factors
    for m in (1, 2, 3):
        for parts in disjoint_increasing(n, m):
            cases += 1
            rhs = 1
            for a in range(m):
                for b in range(a + 1, m):
                    rhs *= eps(parts[a] + parts[b])
            fails += eps(sum(parts, ())) != rhs
    # even m allows arbitrary sequences (m = 2 is a tautology, so use m = 4)
    for parts in disjoint_sequences(n, 4):
        cases += 1
        rhs = 1
        for a in range(4):
            for b in range(a + 1, 4):
                rhs *= eps(parts[a] + parts[b])
        fails += eps(sum(parts, ())) != rhs
    return cases, fails


def check_sorted_pair_with_l(n=NMAX):
    cases = fails = 0
    for i, j, k, l in disjoint_increasing(n, 4):
        cases += 1
        lhs = eps(tuple(sorted(i + j)) + l) * eps(tuple(sorted(i + k)) + l)
        fails += lhs != eps(tuple(sorted(j + k)) + l)
    return cases, fails


def check_ijk_ijl(n=NMAX):
    cases = fails = 0
    for i, j, k, l in disjoint_increasing(n, 4):
        cases += 1
        lhs = eps(i + j + k) * eps(i + j + l)
        fails += lhs != eps(tuple(sorted(i + j)) + tuple(sorted(k + l)))
    return cases, fails


def check_four_factor(n=NMAX):
    cases = fails = 0
    for a, b, c, d, e in disjoint_sequences(n, 5):
        cases += 1
        lhs = eps(a + c + d) * eps(a + c + e) * eps(b + c + d) * eps(b + c + e)
        fails += lhs != _sign(pairs(a + b, d + e))
    return cases, fails


# ---------------------------------------------------------------------------
# zeta / xi

def check_complement_sign(nmax=10):
    cases = fails = 0
    for q in range(nmax + 1):
        for b in range(1 << q):
            i = MultiIndex(b, q)
            val = epsilon_concat(i, i.complement())
            cases += 1
            fails += val != zeta(i.grade()) * xi(i)
            # the value does not depend on the ambient used for the complement
            for n in range(q + 1, nmax + 1):
                j = MultiIndex(b, n)
                cases += 1
                fails += epsilon_concat(j, j.complement()) != val
    return cases, fails


def check_zeta_xi(n=NMAX):
    cases = fails = 0
    for k in range(64):
        cases += 2
        fails += zeta(k + 1) != _sign(k + 1) * zeta(k)
        fails += zeta(k) != (1, -1, -1, 1)[k % 4]
    for r in sequences(n):
        cases += 1
        fails += xi(r) != _sign(sum(1 for x in r if x % 2))
    for r, s in disjoint_sequences(n, 2):
        cases += 1
        fails += xi(r + s) != xi(r) * xi(s)
    return cases, fails


ALL_CHECKS = {
    "epsilon matches bubble-sort parity": check_epsilon_oracle,
    "pairs matches direct count": check_pairs_oracle,
    "pairs: length, norm, additivity, sorting": check_pairs_props,
    "epsilon: adjacent block swap": check_adjacent_swap,
    "epsilon: sorting one factor": check_sort_one_factor,
    "epsilon of ij is (-1)^pairs": check_concat_pairs,
    "epsilon of sorted blocks": check_sorted_blocks,
    "epsilon as product over pairs": check_pairwise_product,
    "epsilon: sorted pairs with l": check_sorted_pair_with_l,
    "epsilon: ijk times ijl": check_ijk_ijl,
    "epsilon: four-factor identity": check_four_factor,
    "complement sign zeta*xi, ambient independent": check_complement_sign,
    "zeta recursion and pattern, xi parity and multiplicativity": check_zeta_xi,
}

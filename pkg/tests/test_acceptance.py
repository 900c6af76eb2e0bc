"""Acceptance suite: one test per criterion, each with its runtime budget.

Run under pytest for a PASS/FAIL summary section, or directly as a script.
"""
if __name__ == "__main__":
    # hand over to pytest before anything is imported, so assertions get rewritten
    import sys

    import pytest

    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))

import itertools
import json
import sys
import time
from pathlib import Path

import jsonschema
import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from grassmann import (Blade, Multivector, contract_left, contract_right, inner, lstar, meet,
                       regressive, rstar)
from grassmann.fock import (annihilation, closed_as_multivector, creation, supercommutator_closed,
                            supercommutator_direct)
from grassmann.geometry import cos_complement_angle
from grassmann.grades import cartan_residual, is_simple, plucker_residuals
from grassmann.multivector import contract_blades_det, leibniz_rhs
from grassmann.outermorphism import Outermorphism
from grassmann.spaces import (SubspaceBasis, carve_minimal, classify_carving,
                              classify_factorization, factorize_maximal, inner_space, outer_space)

import signchecks
from conftest import rand_blade, rand_mv, sparse_cols
from test_cli import GOLDEN, MV_SCHEMA, run
from test_geometry import contraction_characterisation_errors

E = Multivector.basis
GOLD_TOL = 1e-12


class Budget:
    def __init__(self, seconds):
        self.seconds = seconds

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start
        if exc[0] is None:
            assert self.elapsed < self.seconds, f"took {self.elapsed:.1f}s, budget {self.seconds}s"


def near(A, B, tol=GOLD_TOL):
    return (A - B).norm() <= tol


def gauge_ratio(got, ref):
    c = sum(np.conj(ref.terms[b]) * v for b, v in got.terms.items() if b in ref.terms)
    c /= ref.norm2()
    assert near(got, c * ref, 1e-12)
    return c


def spans_match(S: SubspaceBasis, vectors) -> bool:
    W = SubspaceBasis.span(np.column_stack(vectors))
    return S.dim == W.dim and W.residual(S.columns) < 1e-9 and S.residual(W.columns) < 1e-9


# ---------------------------------------------------------------------------

@pytest.mark.criterion(1, "worked-example golden suite")
def test_criterion_1_golden_examples():
    with Budget(5):
        # contractions with complex coefficients
        n = 5
        M = 3 * E(n, (2, 5)) + (2 + 1j) * E(n, (3, 4))
        assert near(contract_left(M, E(n, (1, 2, 4, 5))), -3 * E(n, (1, 4)))
        N = E(n, (4,)) + 1j * E(n, (3, 4, 5))
        assert near(contract_right(N, E(n, (3, 4))), 1j * E(n, (5,)))
        # contractions of blades, direct and by determinants
        i, j, k = np.eye(3)
        A = Blade.from_vectors([i - j, i - 2 * k])
        B = Blade.from_vectors([2 * i + k, j + k, i + j + 3 * k])
        v = Blade.from_vectors([i - j])
        for X, want in ((v, 3 * E(3, (1, 3)) + 3 * E(3, (2, 3))),
                        (A, 6 * E(3, (1,)) + 6 * E(3, (2,)) + 3 * E(3, (3,)))):
            assert near(contract_left(X.mv, B.mv), want)
            assert near(contract_blades_det(X, B), want)
        # star table
        n = 4
        e = lambda *idx: E(n, idx)
        for idx, right, left in (((1,), e(2, 3, 4), -e(2, 3, 4)),
                                 ((2,), -e(1, 3, 4), e(1, 3, 4)),
                                 ((1, 2), e(3, 4), e(3, 4)),
                                 ((2, 3, 4), -e(1), e(1))):
            assert rstar(e(*idx)) == right and lstar(e(*idx)) == left
        # regressive products and meet
        assert regressive(e(1, 4), e(1, 2, 3)) == e(1)
        s3 = np.sqrt(3)
        A = (e(1, 2) + s3 * e(1, 4) - e(2, 3) + s3 * e(3, 4)) / (2 * np.sqrt(2))
        assert abs(regressive(A, e(1, 2)).scalar_part() - np.sqrt(6) / 4) < GOLD_TOL
        A = e(1) ^ (e(2) + e(4)) ^ (e(3) + e(4))
        assert near(regressive(A, e(1, 2, 3)), e(1) ^ (e(3) - e(2)))
        assert near(meet((e(1) + e(4)) ^ (e(2) + 2 * e(4)), e(1, 2), e(1, 2, 4)), -2 * e(1) + e(2))
        # outermorphism
        T = Outermorphism(np.array([[0, 1, -1], [2, 1, 0], [1, 0, 2]]))
        assert abs(T.volume_factor() - 3) < GOLD_TOL
        e3 = lambda *idx: E(3, idx)
        want = 2 * e3(2, 3) - e3(1, 3) + (-e3(3) - e3(2) + 2 * e3(1)) / 3
        assert near(T.inverse_apply(e3(2) + 3 * e3(1, 3)), want)
        # inner and outer spaces
        n = 5
        M611 = E(n, (1, 3, 4)) - E(n, (1, 4, 5)) + E(n, (3, 4, 5)) + E(n, (1, 2, 3, 5))
        I5 = np.eye(n)
        assert spans_match(inner_space(M611), [I5[0] - I5[2], I5[2] + I5[4]])
        assert outer_space(M611).dim == n
        n = 6
        M612 = E(n, (1, 2, 3)) + 2 * E(n, (1, 4, 5)) - E(n, (1, 4, 6))
        I6 = np.eye(n)
        assert spans_match(inner_space(M612), [I6[0]])
        assert spans_match(outer_space(M612).complement(), [I6[4] + 2 * I6[5]])
        # optimal factorization and carving, up to the blade gauge
        e5 = lambda *idx: E(5, idx)
        f = factorize_maximal(M611)
        c = gauge_ratio(f.B.mv, (e5(1) - e5(3)) ^ (e5(3) + e5(5)))
        assert near(c * f.N, e5(4) + (e5(2, 3) - e5(1, 2) - e5(2, 5)) / 3)
        assert all(f.flags.values())
        e6 = lambda *idx: E(6, idx)
        cv = carve_minimal(M612)
        c = gauge_ratio(cv.B.mv, e6(1, 2, 3, 4) ^ (e6(6) - 2 * e6(5)))
        assert near(c * cv.N, (e6(4, 6) - 2 * e6(4, 5)) / 5 - e6(2, 3))
        assert all(cv.flags.values())
        # Plücker relation, p = 2, n = 4
        rng = np.random.default_rng(7)
        lam = {ij: rng.normal() for ij in itertools.combinations(range(1, 5), 2)}
        H = Multivector(4, {(1 << a - 1) | (1 << b - 1): x for (a, b), x in lam.items()})
        rel = abs(lam[1, 2] * lam[3, 4] - lam[1, 3] * lam[2, 4] + lam[1, 4] * lam[2, 3])
        assert abs(max(r for _, _, r in plucker_residuals(H)) - rel) < GOLD_TOL
        # creation, annihilation and supercommutators
        e4 = lambda *idx: E(4, idx)
        assert annihilation((1, 4), 4)(e4(1, 2, 4)) == -e4(2)
        assert annihilation((1, 4), 4)(e4(1, 2, 3)).is_zero()
        assert creation((1, 4), 4)(e4(2)) == -e4(1, 2, 4)
        assert creation((1, 4), 4)(e4(1)).is_zero()
        e7 = lambda *idx: E(7, idx)
        assert supercommutator_direct((1,), (2,), e7(2, 3)).is_zero()
        assert supercommutator_direct((2, 3, 4, 7), (1, 3, 6), e7(1, 3, 5, 6)) == e7(2, 3, 4, 5, 7)
        assert supercommutator_direct((1, 2, 3, 6), (1, 3, 4, 6, 7), e7(4, 5, 7)) == -e7(2, 5)
        assert closed_as_multivector((2, 3, 4, 7), (1, 3, 6), (1, 3, 5, 6), 7) == e7(2, 3, 4, 5, 7)
        assert closed_as_multivector((1, 2, 3, 6), (1, 3, 4, 6, 7), (4, 5, 7), 7) == -e7(2, 5)


@pytest.mark.criterion(2, "contraction adjoint oracle")
def test_criterion_2_adjoint_oracle():
    with Budget(60):
        n = 4
        basis = [Multivector(n, {b: 1}) for b in range(1 << n)]
        for L, M, N in itertools.product(basis, repeat=3):
            assert inner(L, contract_left(M, N)) == inner(M ^ L, N)
            assert inner(L, contract_right(N, M)) == inner(L ^ M, N)
        rng = np.random.default_rng(2)
        n = 8
        for _ in range(10_000):
            L, M, N = (rand_mv(rng, n, int(rng.integers(1, 6)), True) for _ in range(3))
            scale = 1 + L.norm() * M.norm() * N.norm()
            assert abs(inner(L, contract_left(M, N)) - inner(M ^ L, N)) <= 1e-9 * scale
            assert abs(inner(L, contract_right(N, M)) - inner(L ^ M, N)) <= 1e-9 * scale


@pytest.mark.criterion(3, "generalized Leibniz rule")
def test_criterion_3_leibniz():
    with Budget(30):
        rng = np.random.default_rng(3)
        for _ in range(500):
            n = int(rng.integers(1, 9))
            p = int(rng.integers(0, min(n, 4) + 1))
            B = rand_blade(rng, n, p, True)
            M, N = rand_mv(rng, n, 5, True), rand_mv(rng, n, 5, True)
            want = contract_left(B.mv, M ^ N)
            scale = max(1.0, B.norm() * M.norm() * N.norm())
            assert (leibniz_rhs(B, M, N) - want).norm() <= 1e-9 * scale


@pytest.mark.criterion(4, "supercommutator closed form")
def test_criterion_4_supercommutator():
    with Budget(30):
        n = 5
        for i, j, k in itertools.product(range(1 << n), repeat=3):
            assert supercommutator_direct(i, j, Multivector(n, {k: 1})) == \
                closed_as_multivector(i, j, k, n)
        rng = np.random.default_rng(4)
        n = 10
        for _ in range(10_000):
            i, j, k = (int(x) for x in rng.integers(0, 1 << n, size=3))
            direct = supercommutator_direct(i, j, Multivector(n, {k: 1}))
            s, b = supercommutator_closed(i, j, k, n)
            if s == 0:
                assert direct.is_zero()
            else:
                assert direct.terms == {b: s}


@pytest.mark.criterion(5, "regressive norm and contraction geometry")
def test_criterion_5_blade_geometry():
    with Budget(60):
        rng = np.random.default_rng(5)
        for _ in range(1000):
            n = int(rng.integers(1, 7))
            p, q = (int(x) for x in rng.integers(1, n + 1, size=2))
            A, B = rand_blade(rng, n, p), rand_blade(rng, n, q)
            lhs = regressive(A.mv, B.mv).norm()
            rhs = A.norm() * B.norm() * cos_complement_angle(A, B)
            assert abs(lhs - rhs) <= 1e-8 * max(1.0, A.norm() * B.norm())
            assert contraction_characterisation_errors(A, B) == []


@pytest.mark.criterion(6, "simplicity cross-validation")
def test_criterion_6_simplicity():
    with Budget(120):
        rng = np.random.default_rng(6)
        disagreements = 0
        verdicts = set()
        for t in range(1000):
            n = int(rng.integers(2, 8))
            p = int(rng.integers(1, min(n, 4) + 1))
            if t % 2 == 0:
                H = rand_blade(rng, n, p, True).mv
            else:
                H = Multivector.zero(n)
                for _ in range(int(rng.integers(2, 4))):
                    H = H + rand_blade(rng, n, p, True).mv
            if H.is_zero():
                continue
            a = is_simple(H)
            b = all(r <= 1e-9 * H.norm2() for _, _, r in plucker_residuals(H))
            c = cartan_residual(H) <= 1e-9
            disagreements += not (a == b == c)
            verdicts.add(a)
        assert disagreements == 0
        assert verdicts == {True, False}


@pytest.mark.criterion(7, "factorization and carving round trip")
def test_criterion_7_factorize_carve():
    with Budget(120):
        rng = np.random.default_rng(8)
        for t in range(1000):
            n = int(rng.integers(1, 9))
            cplx = bool(rng.integers(2))
            M = rand_mv(rng, n, int(rng.integers(1, 7)), cplx)
            if t % 2:
                k = int(rng.integers(1, n + 1))
                M = Blade.from_vectors(sparse_cols(rng, n, k, cplx), n).mv ^ M
            if M.is_zero():
                continue
            f, c = factorize_maximal(M), carve_minimal(M)
            assert ((f.B.mv ^ f.N) - M).norm() <= 1e-8 * M.norm()
            assert (contract_left(c.N, c.B.mv) - M).norm() <= 1e-8 * M.norm()
            assert f.kind == "maximal-orthogonal-optimal"
            assert c.kind == "minimal-internal-optimal"
            flags = classify_factorization(M, f.B, f.N)
            assert all(flags[x] for x in ("maximal", "orthogonal", "optimal"))
            flags = classify_carving(M, c.B, c.N)
            assert all(flags[x] for x in ("minimal", "internal", "optimal"))


@pytest.mark.criterion(8, "sign combinatorics, exhaustive n <= 6")
def test_criterion_8_sign_combinatorics():
    with Budget(30):
        total = 0
        for name, check in signchecks.ALL_CHECKS.items():
            cases, fails = check()
            assert cases > 0 and fails == 0, name
            total += cases
        assert total > 100_000


@pytest.mark.criterion(9, "CLI conformance")
def test_criterion_9_cli():
    with Budget(5):
        for argv, want in GOLDEN:
            assert run(*argv) == (0, want, ""), argv
        for argv in (["eval", "-n", "5", "--complex", "--json", "(3*e25 + (2+1i)*e34) << e1245"],
                     ["eval", "-n", "3", "--json", "0"]):
            code, out, _ = run(*argv)
            assert code == 0
            jsonschema.validate(json.loads(out), MV_SCHEMA)
        code, out, _ = run("spaces", "-n", "5", "e134 - e145 + e345 + e1235")
        assert code == 0 and out.startswith("isp dim 2\n") and "osp dim 5\n" in out
        for sub in ("factorize", "carve"):
            code, out, _ = run(sub, "-n", "6", "e123 + 2*e145 - e146")
            assert code == 0 and "optimal=yes" in out
        code, out, _ = run("angles", "-n", "4", "e1", "e12")
        assert code == 0 and out.startswith("principal cosines: 1\n")
        for bad in ("e9", "e1 +", "(e1", "e1 $ e2", "nope(e1)", "rstar(e1, e2)"):
            code, _, err = run("eval", "-n", "4", bad)
            assert code == 2 and err.startswith("parse error")
        code, _, err = run("eval", "-n", "4", "e1 * e2")
        assert code == 1 and err.startswith("evaluation error")

"""Shared fixtures: worked-example systems, exact hand decompositions, and
a planted-pencil generator for the property suites."""

from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from descriptor_solve import Pencil, WeierstrassDecomposition

FIXTURES_DIR = Path(__file__).resolve().parents[1] / "fixtures"


# ---------------------------------------------------------------------------
# 2x2 worked example (consistent / perturbed initial conditions)

F2 = np.array([[1.0, 1.0], [1.0, 1.0]])
G2 = np.array([[0.2, -0.4], [-0.4, 0.0]])
Y0_CONSISTENT = np.array([2.0, 3.0])
Y0_PERTURBED = np.array([2.00001, 2.99999])

#: Hand-derived transform pair: P2 F2 Q2 = diag(1, 0), P2 G2 Q2 = diag(-4/25, 1).
P2_EXACT = np.array([[2 / 25, 3 / 25], [1.0, -1.0]])
Q2_EXACT = np.array([[2.0, 1.0], [3.0, -1.0]])
EIG_2X2 = -4 / 25

#: Distance from the perturbed start vector to span{(2, 3)}: sqrt(13)/260000.
PERTURBED_DISTANCE = np.sqrt(13.0) / 260000.0
PERTURBED_COEFF = 12.99999 / 13.0


# ---------------------------------------------------------------------------
# 5x5 worked example (non-consistent all-ones initial condition)

F5 = np.array(
    [
        [0, 0, -1, 0, 1],
        [0, -1, -1, 1, 1],
        [-1, -1, 1, 1, 0],
        [0, 1, 2, 0, -2],
        [0, 0, 0, 0, 0],
    ],
    dtype=float,
)
G5 = (
    np.array(
        [
            [-5, 0, 8, 5, -3],
            [-11, -1, 14, 11, -8],
            [-2, -2, 2, 2, 0],
            [11, 2, -14, -11, 8],
            [-5, 0, 10, 5, -5],
        ],
        dtype=float,
    )
    / 5.0
)

#: True finite eigenvectors: eigenvalue 0, then 2/5 twice.  The kernel vector
#: of F and its chain companion complete the basis (see fixtures/FIXTURES.md).
V5_EIG0 = np.array([1.0, 0.0, 0.0, 1.0, 0.0])
V5_EIG04_A = np.array([1.0, 2.0, 0.0, 1.0, 0.0])
V5_EIG04_B = np.array([-1.5, -2.5, -0.25, 0.0, 1.0])
W5_KER = np.array([1.0, 0.0, 1.0, 0.0, 1.0])
W5_CHAIN = np.array([-1.0, 1.0, 0.0, 0.0, 0.0])

TRUE_BASIS_5 = np.column_stack([V5_EIG0, V5_EIG04_A, V5_EIG04_B])
Q5_EXACT = np.column_stack([V5_EIG0, V5_EIG04_A, V5_EIG04_B, W5_KER, W5_CHAIN])
J5_EXACT = np.diag([0.0, 0.4, 0.4])
N5_EXACT = np.array([[0.0, 1.0], [0.0, 0.0]])

#: Ascending coefficients of det(sF - G) = -s(5s - 2)^2 / 25.
CHARPOLY_5 = np.array([0.0, -4 / 25, 4 / 5, -1.0, 0.0, 0.0])

#: Projection of all-ones onto the true consistent subspace, and its distance.
YHAT0_5 = np.array([26 / 35, 1.0, -3 / 35, 44 / 35, 12 / 35])
DIST_5 = np.sqrt(2135.0) / 35.0
TRUE_COEFF_5 = np.array([23 / 70, 13 / 14, 12 / 35])

#: The printed (source-text) basis; spans a different subspace than the true
#: one but remains a valid matrix-level least-squares exercise.
PRINTED_BASIS_5 = np.array(
    [
        [1.0, 0.0, 0.0],
        [0.0, 1.0, 1.0],
        [0.0, 0.0, 0.0],
        [1.0, 0.0, 1.0],
        [0.0, 0.0, 1.0],
    ]
)


@pytest.fixture(scope="session")
def pencil2() -> Pencil:
    return Pencil(F2, G2)


@pytest.fixture(scope="session")
def pencil5() -> Pencil:
    return Pencil(F5, G5)


@pytest.fixture(scope="session")
def exact_decomp2(pencil2) -> WeierstrassDecomposition:
    return WeierstrassDecomposition(
        P=P2_EXACT,
        Q=Q2_EXACT,
        finite_block=np.array([[EIG_2X2]]),
        nilpotent_block=np.array([[0.0]]),
        n_finite=1,
        n_infinite=1,
        index=1,
        pencil=pencil2,
    )


@pytest.fixture(scope="session")
def exact_decomp5(pencil5) -> WeierstrassDecomposition:
    # P follows from the column relations: F maps the finite basis onto the
    # leading columns of P^{-1}, G maps the infinite basis onto the trailing ones.
    p_inverse = np.column_stack(
        [F5 @ V5_EIG0, F5 @ V5_EIG04_A, F5 @ V5_EIG04_B, G5 @ W5_KER, G5 @ W5_CHAIN]
    )
    return WeierstrassDecomposition(
        P=np.linalg.inv(p_inverse),
        Q=Q5_EXACT,
        finite_block=J5_EXACT,
        nilpotent_block=N5_EXACT,
        n_finite=3,
        n_infinite=2,
        index=2,
        pencil=pencil5,
    )


# ---------------------------------------------------------------------------
# planted pencils with known structure


def random_well_conditioned(rng: np.random.Generator, m: int) -> np.ndarray:
    """Orthogonal x diagonal x orthogonal, condition number at most 4."""
    u, _ = np.linalg.qr(rng.standard_normal((m, m)))
    v, _ = np.linalg.qr(rng.standard_normal((m, m)))
    return u @ np.diag(rng.uniform(0.5, 2.0, m)) @ v


def shift_block(sizes: list[int]) -> np.ndarray:
    """Block-diagonal nilpotent matrix with the given Jordan block sizes."""
    q = sum(sizes)
    N = np.zeros((q, q))
    start = 0
    for size in sizes:
        for j in range(size - 1):
            N[start + j, start + j + 1] = 1.0
        start += size
    return N


def make_planted(rng: np.random.Generator, m: int, p: int, block_sizes: list[int] | None = None):
    """Pencil with planted Weierstrass structure.

    Returns a dict with the system matrices, the planted transforms, the
    planted blocks, and the resulting nilpotency index.  Eigenvalues are
    kept non-defective (diagonal finite block with possible repeats) so
    spectrum comparisons are well-posed.
    """
    q = m - p
    if block_sizes is None:
        block_sizes = []
        left = q
        while left > 0:
            size = int(rng.integers(1, left + 1))
            block_sizes.append(size)
            left -= size
    assert sum(block_sizes) == q
    # Eigenvalue multiplicities are capped at 2: the characteristic-polynomial
    # root scatter grows like eps**(1/multiplicity), and the default root
    # clustering is sized for doubles.
    diag: list[float] = []
    while len(diag) < p:
        value = float(rng.uniform(-2.0, 2.0))
        mult = int(rng.integers(1, 3)) if p - len(diag) >= 2 else 1
        diag.extend([value] * mult)
    J = np.diag(np.array(diag[:p]))
    N = shift_block(block_sizes)
    P = random_well_conditioned(rng, m)
    Q = random_well_conditioned(rng, m)
    D_f = np.zeros((m, m))
    D_f[:p, :p] = np.eye(p)
    D_f[p:, p:] = N
    D_g = np.zeros((m, m))
    D_g[:p, :p] = J
    D_g[p:, p:] = np.eye(q)
    # F = P^{-1} D_f Q^{-1}, G = P^{-1} D_g Q^{-1}
    F = np.linalg.solve(P, np.linalg.solve(Q.T, D_f.T).T)
    G = np.linalg.solve(P, np.linalg.solve(Q.T, D_g.T).T)
    return {
        "F": F,
        "G": G,
        "P": P,
        "Q": Q,
        "J": J,
        "N": N,
        "p": p,
        "q": q,
        "index": max(block_sizes, default=0),
        "block_sizes": block_sizes,
    }


def planted_decomposition(data) -> WeierstrassDecomposition:
    return WeierstrassDecomposition(
        P=data["P"],
        Q=data["Q"],
        finite_block=data["J"],
        nilpotent_block=data["N"],
        n_finite=data["p"],
        n_infinite=data["q"],
        index=data["index"],
        pencil=Pencil(data["F"], data["G"]),
    )


def projector_of(basis: np.ndarray) -> np.ndarray:
    """Orthogonal projector onto a column span, via QR (test-side oracle)."""
    if basis.shape[1] == 0:
        return np.zeros((basis.shape[0], basis.shape[0]))
    u, _ = np.linalg.qr(basis)
    return u @ u.conj().T


def assert_eigenvalue_multisets_match(a, b, cluster_tol=1e-6, mean_tol=1e-7):
    """Compare two eigenvalue multisets after clustering.

    Multiple roots recovered through polynomial coefficients scatter like
    noise**(1/multiplicity), so raw sorted comparison is ill-posed; cluster
    the union and compare per-cluster counts and means instead.
    """
    a = np.asarray(a, dtype=complex).ravel()
    b = np.asarray(b, dtype=complex).ravel()
    assert len(a) == len(b)
    points = np.concatenate([a, b])
    n = len(points)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(points[i] - points[j]) <= cluster_tol:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[ri] = rj
    clusters: dict[int, list[int]] = {}
    for i in range(n):
        clusters.setdefault(find(i), []).append(i)
    for members in clusters.values():
        side_a = [i for i in members if i < len(a)]
        side_b = [i - len(a) for i in members if i >= len(a)]
        assert len(side_a) == len(side_b), (a, b)
        gap = abs(np.mean(a[side_a]) - np.mean(b[side_b]))
        assert gap <= mean_tol, (a, b, gap)


# ---------------------------------------------------------------------------
# acceptance reporting


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    entries = []
    for status in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(status, []):
            if getattr(report, "when", "call") != "call":
                continue
            if "test_acceptance" in report.nodeid:
                entries.append((report.nodeid.split("::")[-1], status == "passed"))
    if entries:
        terminalreporter.write_sep("=", "acceptance criteria")
        for name, ok in entries:
            terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {name}")

"""Brute-force verification independent of the period pipeline.

Nothing here touches Gaussian periods, period polynomials or closed forms:
eigenvalues come from additive character sums over the field tables, or from a
dense symmetric eigensolver on the adjacency matrix.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from gpspectra.finite_field import Field

DEFAULT_TOL = 1e-6
JACOBI_MAX_DIM = 4096
JACOBI_OFF_TOL = 1e-10


@dataclass
class OracleReport:
    max_abs_deviation: float
    matched: bool
    unmatched_entries: list[tuple[complex, complex, float]] = field(default_factory=list)
    method: str = "character_sums"

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "matched": self.matched,
            "max_abs_deviation": self.max_abs_deviation,
            "unmatched": [
                {"expected": [e.real, e.imag], "nearest": [f.real, f.imag], "distance": d}
                for e, f, d in self.unmatched_entries
            ],
        }


def character_sum_eigenvalues(field: Field, k: int) -> np.ndarray:
    """lambda_gamma = sum_{y in R_k} exp(2 pi i Tr(gamma y) / p) for every gamma.

    Entry i of the result belongs to the field element with index i.
    """
    q, p = field.q, field.p
    if (q - 1) % k:
        raise ValueError(f"k={k} must divide q-1={q - 1}")
    n = (q - 1) // k
    zeta = np.exp(2j * np.pi * np.arange(p) / p)
    out = np.empty(q, dtype=complex)
    out[0] = n
    exp_t = np.asarray(field.exp_table, dtype=np.int64)
    tr = np.asarray(field.trace_table, dtype=np.int64)
    ylogs = k * np.arange(n, dtype=np.int64)
    gammas = np.arange(1, q, dtype=np.int64)
    glogs = np.asarray(field.log_table, dtype=np.int64)[gammas]
    chunk = max(1, 2_000_000 // n)
    for s in range(0, q - 1, chunk):
        gl = glogs[s : s + chunk]
        traces = tr[exp_t[(gl[:, None] + ylogs[None, :]) % (q - 1)]]
        rows = gl.shape[0]
        flat = traces + p * np.arange(rows, dtype=np.int64)[:, None]
        counts = np.bincount(flat.ravel(), minlength=rows * p).reshape(rows, p)
        out[gammas[s : s + chunk]] = counts @ zeta
    return out


def _round_robin(N: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """N-1 rounds of N/2 disjoint index pairs covering every pair once."""
    idx = list(range(N))
    rounds = []
    for _ in range(N - 1):
        a = np.array(idx[: N // 2])
        b = np.array(idx[N // 2 :][::-1])
        rounds.append((np.minimum(a, b), np.maximum(a, b)))
        idx = [idx[0], idx[-1]] + idx[1:-1]
    return rounds


def jacobi_eigenvalues(matrix: np.ndarray, tol: float = JACOBI_OFF_TOL, max_sweeps: int = 60) -> np.ndarray:
    """Cyclic Jacobi with a round-robin ordering, so each round applies N/2
    disjoint rotations at once."""
    A = np.array(matrix, dtype=np.float64)
    n = A.shape[0]
    if n == 0:
        return np.empty(0)
    N = n + (n % 2)
    if N != n:
        B = np.zeros((N, N))
        B[:n, :n] = A
        A = B
    rounds = _round_robin(N)
    for _ in range(max_sweeps):
        D = np.diag(A).copy()
        np.fill_diagonal(A, 0.0)
        off = float(np.linalg.norm(A))
        np.fill_diagonal(A, D)
        if off < tol:
            break
        for P, Q in rounds:
            apq = A[P, Q]
            live = np.abs(apq) > 1e-300
            if not live.any():
                continue
            P, Q, apq = P[live], Q[live], apq[live]
            app, aqq = A[P, P], A[Q, Q]
            theta = (aqq - app) / (2.0 * apq)
            t = np.sign(theta) / (np.abs(theta) + np.hypot(theta, 1.0))
            t[theta == 0] = 1.0
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c
            # A symmetric: J^T A J = J^T (J^T A)^T, so only row updates are needed
            for _ in range(2):
                rowP, rowQ = A[P, :], A[Q, :]
                A[P, :] = c[:, None] * rowP - s[:, None] * rowQ
                A[Q, :] = s[:, None] * rowP + c[:, None] * rowQ
                A = np.ascontiguousarray(A.T)
            A[P, Q] = 0.0
            A[Q, P] = 0.0
    else:
        raise ArithmeticError("Jacobi iteration did not converge")
    return np.sort(np.diag(A)[:n])


def dense_eigen_symmetric(matrix: np.ndarray, method: str = "jacobi") -> np.ndarray:
    """Sorted eigenvalues of a symmetric 0/1 matrix.

    ``method="jacobi"`` is the self-contained solver; ``"lapack"`` uses
    numpy's eigvalsh for bulk runs.
    """
    M = np.asarray(matrix)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError("square matrix expected")
    if M.shape[0] > JACOBI_MAX_DIM:
        raise ValueError(f"dimension {M.shape[0]} exceeds the oracle cap {JACOBI_MAX_DIM}")
    if not np.array_equal(M, M.T):
        raise ValueError("matrix is not symmetric; use character sums for directed graphs")
    if method == "jacobi":
        return jacobi_eigenvalues(M)
    if method == "lapack":
        return np.sort(np.linalg.eigvalsh(M.astype(np.float64)))
    raise ValueError(f"unknown method {method!r}")


def compare_spectra(exact, oracle: np.ndarray, tol: float = DEFAULT_TOL, method: str = "character_sums") -> OracleReport:
    """Greedy nearest-match multiset comparison.

    ``exact`` is a Spectrum (anything yielding (value, mult) with an
    ``embedded()`` method) or a plain sequence of numbers.
    """
    if hasattr(exact, "embedded"):
        expected = exact.embedded()
    else:
        vals, counts = np.unique(np.asarray(exact, dtype=complex), return_counts=True)
        expected = list(zip(vals.tolist(), counts.tolist()))
    found = np.asarray(oracle, dtype=complex).ravel()
    total = sum(m for _, m in expected)
    if total != found.size:
        raise ValueError(f"multiset sizes differ: {total} vs {found.size}")
    free = np.ones(found.size, dtype=bool)
    worst = 0.0
    bad: list[tuple[complex, complex, float]] = []
    for z, mult in expected:
        cand = np.flatnonzero(free)
        dist = np.abs(found[cand] - z)
        take = np.argsort(dist, kind="stable")[:mult]
        free[cand[take]] = False
        worst = max(worst, float(dist[take].max()))
        for j in take[dist[take] > tol]:
            bad.append((complex(z), complex(found[cand[j]]), float(dist[j])))
    return OracleReport(max_abs_deviation=worst, matched=not bad, unmatched_entries=bad[:20], method=method)

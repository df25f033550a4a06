"""Generalized Paley graphs Gamma(k, q), their sum graphs and complements."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import TextIO

import numpy as np

from gpspectra.finite_field import Field, build_field

VARIANTS = ("standard", "sum", "complement")
DEFAULT_MATRIX_CAP = 4096


@dataclass(frozen=True, eq=False)
class GPGraph:
    """Gamma(k, q) = Cay(F_q, R_k) with R_k the k-th powers.

    ``k`` is already reduced to ``gcd(k_input, q - 1)``.
    """

    field: Field
    k_input: int
    k: int
    variant: str = "standard"

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def m(self) -> int:
        return self.field.m

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def n(self) -> int:
        """Size of the connection set R_k, the degree of Gamma(k, q)."""
        return (self.q - 1) // self.k

    @property
    def degree(self) -> int:
        if self.variant == "complement":
            return self.q - 1 - self.n
        return self.n

    @cached_property
    def connection_set(self) -> np.ndarray:
        """R_k = C_0 as a sorted index array."""
        return np.sort(self.field.coset(0, self.k))

    @cached_property
    def _in_r(self) -> np.ndarray:
        mask = np.zeros(self.q, dtype=bool)
        mask[self.connection_set] = True
        return mask

    def neighbor_mask(self) -> np.ndarray:
        """Boolean mask of the out-neighbours of vertex 0 (standard/complement)."""
        if self.variant == "sum":
            raise ValueError("the sum graph is not a Cayley graph; use adjacency_matrix")
        if self.variant == "complement":
            mask = ~self._in_r
            mask[0] = False
            return mask
        return self._in_r.copy()

    def is_undirected(self) -> bool:
        return is_undirected(self)

    def is_connected(self) -> bool:
        return is_connected(self)


def build_gp(p: int, m: int, k: int, variant: str = "standard", field: Field | None = None) -> GPGraph:
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}")
    if k < 1:
        raise ValueError("k must be positive")
    if field is None:
        field = build_field(p, m)
    elif (field.p, field.m) != (p, m):
        raise ValueError("field does not match (p, m)")
    kk = math.gcd(k, field.q - 1)
    return GPGraph(field=field, k_input=k, k=kk, variant=variant)


def is_undirected(g: GPGraph) -> bool:
    """q even, or q odd and k | (q-1)/2 (equivalently -1 is a k-th power)."""
    if g.variant == "sum":
        return True
    q = g.q
    return q % 2 == 0 or ((q - 1) // 2) % g.k == 0


def is_connected(g: GPGraph) -> bool:
    """True iff n = (q-1)/k divides no p^a - 1 with 1 <= a < m.

    Applies to the standard variant; the complement of a GP-graph is connected
    unless it is edgeless or the graph itself is complete-multipartite-like,
    so for complements we fall back on BFS.
    """
    if g.variant == "standard":
        n = g.n
        return all((g.p**a - 1) % n for a in range(1, g.m))
    if g.variant == "complement":
        return _bfs_levels(g)[1] == g.q
    # Gamma^+ edges u~v iff u+v in R_k; its connectivity is not used downstream
    A = adjacency_matrix(g)
    seen = np.zeros(g.q, dtype=bool)
    seen[0] = True
    frontier = seen.copy()
    while frontier.any():
        nxt = A[frontier].any(axis=0) & ~seen
        seen |= nxt
        frontier = nxt
    return bool(seen.all())


def adjacency_matrix(g: GPGraph, cap: int = DEFAULT_MATRIX_CAP) -> np.ndarray:
    """Dense q x q 0/1 matrix, row u column v set iff u -> v is an edge."""
    q = g.q
    if q > cap:
        raise ValueError(f"q={q} exceeds the adjacency matrix cap {cap}")
    F = g.field
    d = F.digits
    pw = F.powers
    p = F.p
    if g.variant == "complement":
        member = ~g._in_r
    else:
        member = g._in_r
    A = np.empty((q, q), dtype=bool)
    step = max(1, 2_000_000 // (q * F.m))
    for s in range(0, q, step):
        rows = d[s : s + step]
        if g.variant == "sum":
            comb = (rows[:, None, :] + d[None, :, :]) % p
        else:
            comb = (d[None, :, :] - rows[:, None, :]) % p  # v - u
        A[s : s + step] = member[comb @ pw]
    if g.variant == "complement":
        np.fill_diagonal(A, False)
    return A.astype(np.int8)


def _bfs_levels(g: GPGraph) -> tuple[int, int]:
    """BFS from vertex 0 on the Cayley graph; returns (eccentricity, reached).

    Multiplication by a k-th power fixes 0 and the connection set, so every
    BFS layer is a union of cyclotomic cosets and one representative per coset
    is enough to expand.
    """
    F = g.field
    k = g.k
    sd = F.digits[np.flatnonzero(g.neighbor_mask())]
    reached = np.zeros(k, dtype=bool)
    frontier = [0]  # one element per newly reached coset (or 0 itself)
    ecc = 0
    chunk = max(1, 4_000_000 // max(1, sd.shape[0] * F.m))
    while True:
        new = np.zeros(k, dtype=bool)
        for s in range(0, len(frontier), chunk):
            part = F.digits[np.asarray(frontier[s : s + chunk])]
            cand = (((part[:, None, :] + sd[None, :, :]) % F.p) @ F.powers).ravel()
            cand = cand[cand != 0]
            new[F.log_table[cand] % k] = True
        new &= ~reached
        if not new.any():
            break
        reached |= new
        frontier = [int(F.exp_table[i]) for i in np.flatnonzero(new)]
        ecc += 1
    return ecc, 1 + int(reached.sum()) * g.n


def diameter_waring(g: GPGraph) -> int | None:
    """Eccentricity of 0 (= diameter by vertex transitivity), None if disconnected.

    For the standard variant this is the Waring number g(k, q).
    """
    if g.variant != "standard":
        raise ValueError("diameter_waring needs the standard variant")
    ecc, reached = _bfs_levels(g)
    return ecc if reached == g.q else None


def all_pairs_diameter(A: np.ndarray) -> int | None:
    """Diameter by BFS from every vertex of a dense adjacency matrix (small q)."""
    q = A.shape[0]
    B = A.astype(bool)
    best = 0
    for s in range(q):
        seen = np.zeros(q, dtype=bool)
        seen[s] = True
        frontier = seen.copy()
        dist = 0
        while True:
            nxt = B[frontier].any(axis=0) & ~seen
            if not nxt.any():
                break
            seen |= nxt
            frontier = nxt
            dist += 1
        if not seen.all():
            return None
        best = max(best, dist)
    return best


def write_edge_list(g: GPGraph, out: TextIO, cap: int = DEFAULT_MATRIX_CAP) -> int:
    """Write one "u v" line per directed edge (each undirected edge once).

    Returns the number of lines written.
    """
    A = adjacency_matrix(g, cap)
    if is_undirected(g):
        A = np.triu(A)
    us, vs = np.nonzero(A)
    for u, v in zip(us.tolist(), vs.tolist()):
        out.write(f"{u} {v}\n")
    return len(us)

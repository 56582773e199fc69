"""
Vertex enumeration of bounded H-polytopes ``{x : A x <= 1}`` by the
double-description method.

The polytope is homogenized to the pointed cone
``{(t, x) : t - a_i . x >= 0, t >= 0}`` whose extreme rays with ``t > 0``
are the vertices. Constraints are inserted one at a time; adjacency of a
positive and a negative ray is decided by the combinatorial test on their
common zero sets.
"""

from __future__ import annotations

import numpy as np
from scipy.spatial import HalfspaceIntersection, cKDTree

from .errors import SizeError

MAX_DIM = 12
MAX_ROWS = 64


def _initial_rows(B, tol):
    chosen = []
    basis = np.zeros((0, B.shape[1]))
    for i, row in enumerate(B):
        trial = np.vstack([basis, row])
        if np.linalg.matrix_rank(trial, tol=tol) > basis.shape[0]:
            basis = trial
            chosen.append(i)
            if len(chosen) == B.shape[1]:
                break
    return chosen


def _normalize(R):
    return R / np.abs(R).max(axis=1, keepdims=True)


def _clusters(X, tol):
    """Label points so that points closer than ``tol`` (max norm) share a label."""
    label = np.arange(len(X))
    pairs = cKDTree(X).query_pairs(tol, p=np.inf, output_type="ndarray")
    if len(pairs) == 0:
        return label
    def find(i):
        while label[i] != i:
            label[i] = label[label[i]]
            i = label[i]
        return i
    for i, j in pairs:
        ri, rj = find(i), find(j)
        if ri != rj:
            label[max(ri, rj)] = min(ri, rj)
    return np.array([find(i) for i in range(len(X))])


def _merge(R, Z, tol):
    """Collapse rays closer than ``tol``; their zero sets are united.

    Rounding can split a degenerate vertex into several nearly equal rays,
    which would then wrongly veto adjacencies in the combinatorial test.
    """
    label = _clusters(R, tol)
    heads = np.flatnonzero(label == np.arange(len(R)))
    if len(heads) == len(R):
        return R, Z
    Zm = np.zeros((len(heads), Z.shape[1]), dtype=bool)
    index = {h: k for k, h in enumerate(heads)}
    for i, l in enumerate(label):
        Zm[index[l]] |= Z[i]
    return R[heads], Zm


def double_description(B, tol=1e-10, merge_tol=1e-7):
    """Extreme rays of the pointed cone ``{y : B y >= 0}``.

    Returns ``(rays, zero)`` where ``zero[k, i]`` records whether row ``i``
    of ``B`` is tight at ray ``k``.
    """
    B = np.asarray(B, dtype=float)
    m, D = B.shape
    init = _initial_rows(B, 1e-9)
    if len(init) < D:
        raise ValueError("cone is not pointed (constraint matrix rank deficient)")
    R = _normalize(np.linalg.inv(B[init]).T)
    order = init + [i for i in range(m) if i not in init]
    done = list(init)
    Z = np.abs(R @ B[done].T) <= tol

    for i in order[D:]:
        s = R @ B[i]
        pos, neg, zer = s > tol, s < -tol, np.abs(s) <= tol
        if not neg.any():
            Z = np.hstack([Z, zer[:, None]])
            done.append(i)
            continue
        new_rays, new_z = [], []
        P, N = np.flatnonzero(pos), np.flatnonzero(neg)
        Zp, Zn = Z[P], Z[N]
        for a, zp in zip(P, Zp):
            common = Zn & zp  # (len(N), len(done))
            counts = common.sum(axis=1)
            for b_idx in np.flatnonzero(counts >= D - 2):
                c = common[b_idx]
                b = N[b_idx]
                # adjacent iff no third ray is tight on every row of c
                covers = Z[:, c].all(axis=1)
                covers[a] = covers[b] = False
                if covers.any():
                    continue
                r = s[a] * R[b] - s[b] * R[a]
                new_rays.append(r)
                new_z.append(c)
        keep = ~neg
        R_new = R[keep]
        Z_new = Z[keep]
        if new_rays:
            R_new = np.vstack([R_new, _normalize(np.array(new_rays))])
            Z_new = np.vstack([Z_new, np.array(new_z)])
        R = R_new
        zcol = np.abs(R @ B[i]) <= tol
        Z = np.hstack([Z_new, zcol[:, None]])
        R, Z = _merge(R, Z, merge_tol)
        done.append(i)
    # rows of Z follow the insertion order; map back to original row indices
    zero = np.zeros((R.shape[0], m), dtype=bool)
    zero[:, done] = Z
    return R, zero


def _dedup(V, tol):
    """Merge points closer than ``tol`` (max norm); lexicographically sorted output."""
    label = _clusters(V, tol)
    V = V[label == np.arange(len(V))]
    return V[np.lexsort(V.T[::-1])] + 0.0


def vertex_enumerate_rows(A, tol=1e-9, max_dim=MAX_DIM, max_rows=MAX_ROWS):
    """Vertices of the bounded polytope ``{x : A x <= 1}``.

    Duplicated rows are removed first; output vertices are deduplicated and
    sorted lexicographically so results are deterministic.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    m, d = A.shape
    # drop repeated rows, keeping values and order untouched
    first = [i for i in range(m) if not any(np.abs(A[i] - A[j]).max() <= 1e-12 for j in range(i))]
    A = A[first]
    if d > max_dim or A.shape[0] > max_rows:
        raise SizeError(f"vertex enumeration limited to dim <= {max_dim} and rows <= {max_rows} "
                        f"(got dim {d}, {A.shape[0]} rows)")
    V = _dd_vertices(A, tol)
    if _ambiguous(A, V) or not _certified(A, V):
        # rounding can split a degenerate vertex into a cluster that floating
        # point DD resolves inconsistently; qhull merges such clusters
        V = _qhull_vertices(A)
    return V


def _dd_vertices(A, tol):
    d = A.shape[1]
    B = np.vstack([np.hstack([np.ones((A.shape[0], 1)), -A]),
                   np.hstack([[1.0], np.zeros(d)])])
    R, _ = double_description(B, tol)
    t = R[:, 0]
    if (np.abs(t) <= 1e-12).any():
        raise ValueError("polytope is unbounded")
    V = R[:, 1:] / t[:, None]
    # validate: feasibility and d tight constraints
    slack = 1.0 - V @ A.T
    scale = max(1.0, np.abs(V).max())
    ok = (slack >= -tol * scale).all(axis=1) & ((np.abs(slack) <= tol * scale).sum(axis=1) >= d)
    V = V[ok]
    return _dedup(V, 1e-8 * scale) if V.size else V


def _qhull_vertices(A):
    hs = HalfspaceIntersection(np.hstack([A, -np.ones((len(A), 1))]), np.zeros(A.shape[1]))
    V = hs.intersections
    return _dedup(V, 1e-8 * max(1.0, np.abs(V).max()))


def _ambiguous(A, V):
    """Whether some slack is neither clearly zero nor clearly positive.

    Such slacks come from degenerate vertices perturbed by rounding, where
    the tight/non-tight decisions of floating point DD are unreliable.
    """
    if V.size == 0:
        return True
    scale = max(1.0, np.abs(V).max())
    s = np.abs(1.0 - V @ A.T)
    return bool(((s > 1e-12 * scale) & (s < 1e-6 * scale)).any())


def _certified(A, V):
    """Edge-walk completeness check of a vertex list of ``{A x <= 1}``.

    From every simple vertex (exactly ``d`` tight rows) each of its ``d``
    edges is followed to its other endpoint, which must be in ``V``. The
    vertex graph is connected, so for simple polytopes this proves that no
    vertex is missing. Degenerate vertices are skipped; exact degeneracies
    are handled reliably by the combinatorial test of the enumeration.
    """
    if V.size == 0:
        return False
    d = A.shape[1]
    scale = max(1.0, np.abs(V).max())
    tree = cKDTree(V)
    slack = 1.0 - V @ A.T
    if (slack < -1e-7 * scale).any():
        return False
    for v, s in zip(V, slack):
        tight = np.flatnonzero(np.abs(s) <= 1e-9 * scale)
        if len(tight) != d:
            continue
        try:
            D = -np.linalg.inv(A[tight])  # column k leaves facet k
        except np.linalg.LinAlgError:
            return False
        rates = A @ D  # (m, d)
        move = rates > 1e-12
        move[tight] = False
        if not move.any(axis=0).all():
            return False  # unbounded edge
        with np.errstate(divide="ignore"):
            steps = np.where(move, s[:, None] / np.where(move, rates, 1.0), np.inf).min(axis=0)
        dist, _ = tree.query(v + (D * steps).T)
        if (dist > 1e-7 * scale).any():
            return False
    return True

"""Numerical Laplacian eigenvalues on a cross section.

Two discretizations are available:

``"fd"``
    5-point finite differences on a rasterized node mask. Dirichlet nodes
    on or outside the boundary are deleted. Neumann uses ghost-node
    reflection, written in its symmetric form: link weights equal to the
    dual-edge length inside the cell union and lumped node masses equal
    to the dual-cell area. On grid-aligned boundaries this reproduces the
    reflected stencil exactly. Curved or slanted boundaries are
    staircased, which limits convergence to first order.
``"fem"``
    Linear finite elements on a boundary-conforming structured mesh
    (rectangles, equilateral triangles, regular polygons, discs). Second
    order in the mesh size for both boundary conditions.
"""
import math

import numpy as np
import scipy.linalg
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from . import geometry
from .errors import DomainError, ResolutionError
from .spectrum import BC, ModeSpectrum

__all__ = [
    "fd_operator", "fd_eigenvalues", "mesh", "fem_matrices", "fem_eigenvalues",
    "eigenvalues", "spectrum_numerical", "cluster_levels",
]

_DENSE_MAX = 1500


def _grid(cs, h):
    xmin, ymin, xmax, ymax = geometry.bounding_box(cs)
    nx = int(math.ceil((xmax - xmin) / h - 1e-9))
    ny = int(math.ceil((ymax - ymin) / h - 1e-9))
    xs = xmin + h * np.arange(nx + 1)
    ys = ymin + h * np.arange(ny + 1)
    return np.meshgrid(xs, ys, indexing="ij")


def fd_operator(cs, grid_h, bc):
    """Assemble the symmetric finite-difference operator.

    Returns ``(C, n_unknowns)`` where ``C`` is a sparse symmetric matrix
    whose eigenvalues approximate ``lambda^2``.
    """
    bc = BC(bc)
    X, Y = _grid(cs, grid_h)
    h2 = grid_h * grid_h
    if bc is BC.DIRICHLET:
        mask = geometry.contains(cs, X, Y, strict=True)
        idx = -np.ones(mask.shape, dtype=np.int64)
        idx[mask] = np.arange(mask.sum())
        n = int(mask.sum())
        rows, cols = [], []
        for di, dj in ((1, 0), (0, 1)):
            a = idx[: idx.shape[0] - di, : idx.shape[1] - dj]
            b = idx[di:, dj:]
            both = (a >= 0) & (b >= 0)
            rows.append(a[both])
            cols.append(b[both])
        r = np.concatenate(rows)
        c = np.concatenate(cols)
        off = sp.coo_matrix((-np.ones(r.size), (r, c)), shape=(n, n))
        C = (4.0 * sp.identity(n) + off + off.T) / h2
        return C.tocsr(), n

    inside = geometry.contains(cs, X, Y, strict=False)
    cells = inside[:-1, :-1] & inside[1:, :-1] & inside[:-1, 1:] & inside[1:, 1:]
    ncell = np.zeros(inside.shape)
    for di in (0, 1):
        for dj in (0, 1):
            ncell[di: di + cells.shape[0], dj: dj + cells.shape[1]] += cells
    nodes = ncell > 0
    idx = -np.ones(nodes.shape, dtype=np.int64)
    idx[nodes] = np.arange(nodes.sum())
    n = int(nodes.sum())
    pad = np.zeros((cells.shape[0] + 2, cells.shape[1] + 2))
    pad[1:-1, 1:-1] = cells
    # horizontal link (i,j)-(i+1,j) borders cells (i,j-1) and (i,j)
    wx = 0.5 * (pad[1:-1, :-1] + pad[1:-1, 1:])
    # vertical link (i,j)-(i,j+1) borders cells (i-1,j) and (i,j)
    wy = 0.5 * (pad[:-1, 1:-1] + pad[1:, 1:-1])
    rows, cols, vals = [], [], []
    for w, a, b in ((wx, idx[:-1, :], idx[1:, :]), (wy, idx[:, :-1], idx[:, 1:])):
        sel = w > 0
        rows.append(a[sel])
        cols.append(b[sel])
        vals.append(w[sel])
    r = np.concatenate(rows)
    c = np.concatenate(cols)
    v = np.concatenate(vals)
    off = sp.coo_matrix((-v, (r, c)), shape=(n, n))
    diag = np.bincount(r, v, n) + np.bincount(c, v, n)
    S = (sp.diags(diag) + off + off.T) / h2
    mass = 0.25 * ncell[nodes]
    winv = sp.diags(1.0 / np.sqrt(mass))
    C = (winv @ S @ winv).tocsr()
    return C, n


def _check_symmetric(C):
    asym = abs(C - C.T).max() if sp.issparse(C) else np.abs(C - C.T).max()
    scale_ = abs(C).max()
    if asym > 1e-12 * scale_:
        raise AssertionError(f"assembled operator is not symmetric (|C - C^T| = {asym:g})")


def _smallest(A, k, M=None, shift=0.0):
    """``k`` smallest eigenvalues of the symmetric pencil (A, M)."""
    n = A.shape[0]
    if n <= _DENSE_MAX or k >= n - 1:
        a = A.toarray() if sp.issparse(A) else A
        m = None if M is None else (M.toarray() if sp.issparse(M) else M)
        return scipy.linalg.eigh(a, m, eigvals_only=True, subset_by_index=[0, k - 1])
    vals = spla.eigsh(A.tocsc(), k=k, M=None if M is None else M.tocsc(),
                      sigma=shift, which="LM", return_eigenvectors=False)
    return np.sort(vals)


def _drop_zero_mode(vals, count):
    if vals.size < 2:
        raise ResolutionError("too few Neumann eigenvalues to separate the zero mode")
    threshold = 1e-8 * vals[1]
    zero = np.abs(vals) < threshold
    if zero.sum() != 1:
        raise ResolutionError(
            f"expected one Neumann zero mode, found {int(zero.sum())}; "
            "the discretized domain is disconnected at this resolution")
    return vals[~zero][:count]


def _check_size(n, count, what):
    if n < 10 * count:
        raise ResolutionError(
            f"{what}: {n} unknowns for {count} eigenvalues; refine grid_h "
            "(at least 10 unknowns per eigenvalue)")


def _shift(cs):
    xmin, ymin, xmax, ymax = geometry.bounding_box(cs)
    return -1.0 / max(xmax - xmin, ymax - ymin) ** 2


def fd_eigenvalues(cs, grid_h, count, bc):
    """``count`` smallest ``lambda^2`` from the rasterized 5-point scheme."""
    bc = BC(bc)
    C, n = fd_operator(cs, grid_h, bc)
    _check_size(n, count, "finite-difference mask")
    _check_symmetric(C)
    extra = 1 if bc is BC.NEUMANN else 0
    vals = _smallest(C, count + extra, shift=_shift(cs))
    return _drop_zero_mode(vals, count) if extra else vals


# -- finite elements ---------------------------------------------------------

def _ring_mesh(sectors, rings, position):
    """Fan mesh: center node plus ``sectors * k`` nodes on ring ``k``."""
    offsets = [0, 1]
    for k in range(1, rings + 1):
        offsets.append(offsets[-1] + sectors * k)
    pts = [(0.0, 0.0)]
    for k in range(1, rings + 1):
        for j in range(sectors * k):
            pts.append(position(k, j))

    def node(k, j):
        if k == 0:
            return 0
        return offsets[k] + j % (sectors * k)

    tris = []
    for k in range(1, rings + 1):
        for s in range(sectors):
            for t in range(k):
                c = node(k - 1, s * (k - 1) + t)
                tris.append((c, node(k, s * k + t), node(k, s * k + t + 1)))
                if t < k - 1:
                    tris.append((c, node(k, s * k + t + 1), node(k - 1, s * (k - 1) + t + 1)))
    boundary = np.zeros(len(pts), dtype=bool)
    boundary[offsets[rings]:] = True
    return np.asarray(pts), np.asarray(tris), boundary


def mesh(cs, grid_h):
    """Boundary-conforming triangle mesh ``(nodes, triangles, on_boundary)``."""
    if isinstance(cs, geometry.EquilateralTriangle):
        n = max(1, int(round(cs.a / grid_h)))
        ij = [(i, j) for j in range(n + 1) for i in range(n + 1 - j)]
        index = {p: k for k, p in enumerate(ij)}
        ij_arr = np.asarray(ij, dtype=float)
        step = cs.a / n
        pts = np.column_stack((step * (ij_arr[:, 0] + 0.5 * ij_arr[:, 1]),
                               step * 0.5 * math.sqrt(3.0) * ij_arr[:, 1]))
        tris = []
        for (i, j) in ij:
            if i + j < n:
                tris.append((index[i, j], index[i + 1, j], index[i, j + 1]))
            if i + j < n - 1:
                tris.append((index[i + 1, j], index[i + 1, j + 1], index[i, j + 1]))
        boundary = np.array([i == 0 or j == 0 or i + j == n for i, j in ij])
        return pts, np.asarray(tris), boundary
    if isinstance(cs, geometry.Rectangle):
        nx = max(1, int(round(cs.w / grid_h)))
        ny = max(1, int(round(cs.h / grid_h)))
        I, J = np.meshgrid(np.arange(nx + 1), np.arange(ny + 1), indexing="ij")
        pts = np.column_stack((I.ravel() * cs.w / nx, J.ravel() * cs.h / ny))
        k = I * (ny + 1) + J
        a, b = k[:-1, :-1].ravel(), k[1:, :-1].ravel()
        c, d = k[1:, 1:].ravel(), k[:-1, 1:].ravel()
        tris = np.concatenate((np.column_stack((a, b, c)), np.column_stack((a, c, d))))
        boundary = ((I == 0) | (I == nx) | (J == 0) | (J == ny)).ravel()
        return pts, tris, boundary
    if isinstance(cs, geometry.RegularPolygon):
        rings = max(1, int(round(cs.Rc / grid_h)))
        V = geometry.regular_polygon_vertices(cs.N, cs.Rc)

        def position(k, j):
            s, t = divmod(j, k)
            frac = k / rings
            p = (1.0 - t / k) * V[s] + (t / k) * V[(s + 1) % cs.N]
            return tuple(frac * p)

        return _ring_mesh(cs.N, rings, position)
    if isinstance(cs, geometry.Circle):
        rings = max(1, int(round(cs.R / grid_h)))

        def position(k, j):
            theta = 2.0 * math.pi * j / (6 * k)
            r = cs.R * k / rings
            return (r * math.cos(theta), r * math.sin(theta))

        return _ring_mesh(6, rings, position)
    raise DomainError(f"no structured mesh for {cs!r}; use method='fd'")


def fem_matrices(pts, tris):
    """Sparse P1 stiffness and consistent mass matrices."""
    p0, p1, p2 = pts[tris[:, 0]], pts[tris[:, 1]], pts[tris[:, 2]]
    det = (p1[:, 0] - p0[:, 0]) * (p2[:, 1] - p0[:, 1]) - \
          (p2[:, 0] - p0[:, 0]) * (p1[:, 1] - p0[:, 1])
    area = 0.5 * np.abs(det)
    b = np.column_stack((p1[:, 1] - p2[:, 1], p2[:, 1] - p0[:, 1], p0[:, 1] - p1[:, 1])) / det[:, None]
    c = np.column_stack((p2[:, 0] - p1[:, 0], p0[:, 0] - p2[:, 0], p1[:, 0] - p0[:, 0])) / det[:, None]
    kloc = area[:, None, None] * (b[:, :, None] * b[:, None, :] + c[:, :, None] * c[:, None, :])
    mref = (np.ones((3, 3)) + np.eye(3)) / 12.0
    mloc = area[:, None, None] * mref[None, :, :]
    rows = np.repeat(tris, 3, axis=1).ravel()
    cols = np.tile(tris, (1, 3)).ravel()
    n = len(pts)
    K = sp.coo_matrix((kloc.ravel(), (rows, cols)), shape=(n, n)).tocsr()
    M = sp.coo_matrix((mloc.ravel(), (rows, cols)), shape=(n, n)).tocsr()
    return K, M


def fem_eigenvalues(cs, grid_h, count, bc):
    """``count`` smallest ``lambda^2`` from P1 finite elements."""
    bc = BC(bc)
    pts, tris, boundary = mesh(cs, grid_h)
    K, M = fem_matrices(pts, tris)
    if bc is BC.DIRICHLET:
        keep = np.flatnonzero(~boundary)
        K = K[keep][:, keep]
        M = M[keep][:, keep]
    n = K.shape[0]
    _check_size(n, count, "finite-element mesh")
    _check_symmetric(K)
    _check_symmetric(M)
    extra = 1 if bc is BC.NEUMANN else 0
    vals = _smallest(K, count + extra, M, shift=_shift(cs))
    return _drop_zero_mode(vals, count) if extra else vals


def eigenvalues(cs, grid_h, count, bc, method="fd"):
    """Dispatch to :func:`fd_eigenvalues` or :func:`fem_eigenvalues`."""
    if method == "fd":
        return fd_eigenvalues(cs, grid_h, count, bc)
    if method == "fem":
        return fem_eigenvalues(cs, grid_h, count, bc)
    raise ValueError(f"unknown method {method!r}")


def cluster_levels(values, rtol=1e-8):
    """Group sorted eigenvalues that agree to ``rtol`` into (level, multiplicity)."""
    values = np.sort(np.asarray(values, dtype=float))
    if values.size == 0:
        return values, np.empty(0, dtype=np.int64)
    new = np.ones(values.size, dtype=bool)
    new[1:] = np.diff(values) > rtol * np.abs(values[1:])
    starts = np.flatnonzero(new)
    mult = np.diff(np.append(starts, values.size))
    return values[starts], mult


def spectrum_numerical(cs, grid_h, count, method="fd", cluster_rtol=1e-8):
    """Numerical spectrum with the ``count`` lowest eigenvalues per BC.

    Numerically degenerate eigenvalues (relative spread below
    ``cluster_rtol``) are merged into one level with multiplicity.
    """
    l2, mult, bcs = [], [], []
    for tag in (BC.DIRICHLET, BC.NEUMANN):
        levels, m = cluster_levels(eigenvalues(cs, grid_h, count, tag, method), cluster_rtol)
        l2.append(levels)
        mult.append(m)
        bcs.extend([tag] * levels.size)
    return ModeSpectrum.from_levels(np.concatenate(l2), np.concatenate(mult), bcs,
                                    source="numerical")

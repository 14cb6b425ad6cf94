"""Pure NumPy implementation of the hot kernels.

Mirrors the API of the compiled extension ``_ckernels`` and is selected
automatically when that extension is unavailable (or forced with
``FIRECLUSTER_BACKEND=python``).

Kernels:

* ``geodesic_pairs`` / ``geodesic_one_to_many`` -- inverse geodesic distance
  on the WGS84 ellipsoid (Vincenty iteration), with an opt-in spherical
  haversine mode.
* ``connected_components`` -- partition of points into components of the
  graph joining pairs at geodesic distance <= adj_dist, using a grid index
  sized so that scanning the 8 neighbouring cells is exhaustive.
* ``nearest_labeled`` -- assign each unlabeled point in a mixed component
  the label of its geodesically nearest labelled point.
"""

from __future__ import annotations

import numpy as np

BACKEND_NAME = "python"

WGS84_A = 6378137.0
WGS84_F = 1.0 / 298.257223563
WGS84_B = WGS84_A * (1.0 - WGS84_F)

# mean Earth radius, used only by the spherical fast mode
SPHERE_RADIUS = 6371008.8

# Lower bound on metres per degree of latitude anywhere on the ellipsoid.
# Grid cells at least this "tall" guarantee that two points within adj_dist
# never sit more than one cell apart in either axis.
_MIN_M_PER_DEG_LAT = 110_500.0
# Minimum meridian radius of curvature, a*(1 - e^2); bounds how far poleward
# a short geodesic can wander past its endpoints.
_MIN_MERIDIAN_RADIUS = WGS84_A * (1.0 - WGS84_F * (2.0 - WGS84_F))

_VINCENTY_TOL = 1e-12
_VINCENTY_MAX_ITER = 200

_CELL_OFFSETS = [(dy, dx) for dy in (-1, 0, 1) for dx in (-1, 0, 1)]


def _as_f8(a):
    return np.ascontiguousarray(a, dtype=np.float64)


def _vincenty_flat(lon1, lat1, lon2, lat2):
    """Vincenty inverse solution, element-wise over flat f8 arrays (metres)."""
    L = np.radians(lon2 - lon1)
    L = np.mod(L + np.pi, 2.0 * np.pi) - np.pi

    u1 = np.arctan((1.0 - WGS84_F) * np.tan(np.radians(lat1)))
    u2 = np.arctan((1.0 - WGS84_F) * np.tan(np.radians(lat2)))
    sin_u1, cos_u1 = np.sin(u1), np.cos(u1)
    sin_u2, cos_u2 = np.sin(u2), np.cos(u2)

    n = L.size
    lam = L.copy()
    sigma = np.zeros(n)
    sin_sigma = np.zeros(n)
    cos_sigma = np.ones(n)
    cos_sq_alpha = np.ones(n)
    cos_2sm = np.zeros(n)

    # iterate per-lane until that lane's lambda update falls below tolerance
    active = np.arange(n)
    for _ in range(_VINCENTY_MAX_ITER):
        if active.size == 0:
            break
        a = active
        sl = np.sin(lam[a])
        cl = np.cos(lam[a])
        t1 = cos_u2[a] * sl
        t2 = cos_u1[a] * sin_u2[a] - sin_u1[a] * cos_u2[a] * cl
        ss = np.sqrt(t1 * t1 + t2 * t2)
        cs = sin_u1[a] * sin_u2[a] + cos_u1[a] * cos_u2[a] * cl
        sg = np.arctan2(ss, cs)
        with np.errstate(divide="ignore", invalid="ignore"):
            sin_alpha = np.where(ss == 0.0, 0.0, cos_u1[a] * cos_u2[a] * sl / ss)
            csa = 1.0 - sin_alpha * sin_alpha
            c2sm = np.where(csa == 0.0, 0.0, cs - 2.0 * sin_u1[a] * sin_u2[a] / csa)
        C = WGS84_F / 16.0 * csa * (4.0 + WGS84_F * (4.0 - 3.0 * csa))
        lam_new = L[a] + (1.0 - C) * WGS84_F * sin_alpha * (
            sg + C * ss * (c2sm + C * cs * (-1.0 + 2.0 * c2sm * c2sm))
        )
        sin_sigma[a] = ss
        cos_sigma[a] = cs
        sigma[a] = sg
        cos_sq_alpha[a] = csa
        cos_2sm[a] = c2sm
        delta = np.abs(lam_new - lam[a])
        lam[a] = lam_new
        # coincident points yield delta == 0 and drop out immediately;
        # only near-antipodal pairs can exhaust the iteration budget
        active = a[delta > _VINCENTY_TOL]

    u_sq = cos_sq_alpha * (WGS84_A * WGS84_A - WGS84_B * WGS84_B) / (WGS84_B * WGS84_B)
    A = 1.0 + u_sq / 16384.0 * (4096.0 + u_sq * (-768.0 + u_sq * (320.0 - 175.0 * u_sq)))
    B = u_sq / 1024.0 * (256.0 + u_sq * (-128.0 + u_sq * (74.0 - 47.0 * u_sq)))
    d_sigma = B * sin_sigma * (
        cos_2sm
        + B / 4.0 * (
            cos_sigma * (-1.0 + 2.0 * cos_2sm * cos_2sm)
            - B / 6.0 * cos_2sm * (-3.0 + 4.0 * sin_sigma * sin_sigma) * (-3.0 + 4.0 * cos_2sm * cos_2sm)
        )
    )
    return WGS84_B * A * (sigma - d_sigma)


def _haversine_flat(lon1, lat1, lon2, lat2):
    phi1 = np.radians(lat1)
    phi2 = np.radians(lat2)
    d_phi = phi2 - phi1
    d_lam = np.radians(lon2 - lon1)
    h = np.sin(d_phi / 2.0) ** 2 + np.cos(phi1) * np.cos(phi2) * np.sin(d_lam / 2.0) ** 2
    return 2.0 * SPHERE_RADIUS * np.arcsin(np.minimum(1.0, np.sqrt(h)))


def _dist_flat(lon1, lat1, lon2, lat2, method):
    if method == "ellipsoid":
        return _vincenty_flat(lon1, lat1, lon2, lat2)
    if method == "haversine":
        return _haversine_flat(lon1, lat1, lon2, lat2)
    raise ValueError(f"unknown distance method {method!r}")


def geodesic_pairs(lon1, lat1, lon2, lat2, method="ellipsoid"):
    """Element-wise distance in metres between broadcast coordinate arrays."""
    lon1, lat1, lon2, lat2 = np.broadcast_arrays(
        np.asarray(lon1, dtype=np.float64),
        np.asarray(lat1, dtype=np.float64),
        np.asarray(lon2, dtype=np.float64),
        np.asarray(lat2, dtype=np.float64),
    )
    shape = lon1.shape
    out = _dist_flat(lon1.ravel(), lat1.ravel(), lon2.ravel(), lat2.ravel(), method)
    return out.reshape(shape)


def geodesic_one_to_many(lon, lat, lons, lats, method="ellipsoid"):
    """Distances in metres from one point to each point of an array."""
    lons = _as_f8(lons)
    lats = _as_f8(lats)
    return _dist_flat(np.full_like(lons, float(lon)), np.full_like(lats, float(lat)), lons, lats, method)


def _find(parent, x):
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def _grid_cells(lon, lat, adj_dist):
    """Integer cell coordinates such that any pair within adj_dist differs by
    at most one cell per axis."""
    cell_lat_deg = adj_dist / _MIN_M_PER_DEG_LAT
    margin_deg = np.degrees(adj_dist / (2.0 * _MIN_MERIDIAN_RADIUS))
    ref_lat = min(float(np.abs(lat).max()) + margin_deg, 89.99)
    cos_ref = max(np.cos(np.radians(ref_lat)), 1e-6)
    cell_lon_deg = min(cell_lat_deg / cos_ref, 361.0)
    ix = np.floor(lon / cell_lon_deg).astype(np.int64)
    iy = np.floor(lat / cell_lat_deg).astype(np.int64)
    return ix, iy


def connected_components(lon, lat, adj_dist, method="ellipsoid"):
    """Connected components of the <= adj_dist geodesic threshold graph.

    Returns int64 component ids numbered 0..k-1 in order of first
    appearance along the input arrays (the partition itself is unique and
    independent of input order). Exact duplicate coordinates (repeat
    detections of one satellite cell) are collapsed before the search.
    """
    lon = _as_f8(lon)
    lat = _as_f8(lat)
    if adj_dist <= 0:
        raise ValueError("adj_dist must be positive")
    n = lon.size
    if n == 0:
        return np.empty(0, dtype=np.int64)

    packed = lon + 1j * lat
    uniq, inverse = np.unique(packed, return_inverse=True)
    if uniq.size < n:
        comp_u = _components_nodup(
            np.ascontiguousarray(uniq.real), np.ascontiguousarray(uniq.imag), adj_dist, method
        )
        return _renumber_first_seen(comp_u[inverse])
    return _renumber_first_seen(_components_nodup(lon, lat, adj_dist, method))


def _renumber_first_seen(comp):
    """Renumber group ids (any ints) by first appearance in array order."""
    vals, first_idx = np.unique(comp, return_index=True)
    rank = np.empty(vals.size, dtype=np.int64)
    rank[np.argsort(first_idx, kind="stable")] = np.arange(vals.size)
    return rank[np.searchsorted(vals, comp)]


def _components_nodup(lon, lat, adj_dist, method):
    n = lon.size
    ix, iy = _grid_cells(lon, lat, adj_dist)
    ix -= ix.min()
    iy -= iy.min()
    span = int(ix.max()) + 2  # pad so +-1 column offsets never alias occupied cells
    key = iy * span + ix
    order = np.argsort(key, kind="stable")
    skey = key[order]

    parent = np.arange(n, dtype=np.int64)
    for dy, dx in _CELL_OFFSETS:
        qk = key + (dy * span + dx)
        lo = np.searchsorted(skey, qk, side="left")
        hi = np.searchsorted(skey, qk, side="right")
        lens = hi - lo
        mask = lens > 0
        if not mask.any():
            continue
        src = np.flatnonzero(mask)
        m_lens = lens[src]
        total = int(m_lens.sum())
        # expand [lo, hi) ranges into a flat candidate index vector
        starts = lo[src]
        within = np.arange(total) - np.repeat(np.cumsum(m_lens) - m_lens, m_lens)
        j_idx = order[np.repeat(starts, m_lens) + within]
        i_idx = np.repeat(src, m_lens)
        keep = j_idx < i_idx  # each unordered pair visited exactly once
        i_idx = i_idx[keep]
        j_idx = j_idx[keep]
        if i_idx.size == 0:
            continue
        d = _dist_flat(lon[i_idx], lat[i_idx], lon[j_idx], lat[j_idx], method)
        near = d <= adj_dist
        for i, j in zip(i_idx[near].tolist(), j_idx[near].tolist()):
            ri = _find(parent, i)
            rj = _find(parent, j)
            if ri != rj:
                if ri < rj:
                    parent[rj] = ri
                else:
                    parent[ri] = rj

    roots = np.empty(n, dtype=np.int64)
    for i in range(n):
        roots[i] = _find(parent, i)
    return _renumber_first_seen(roots)


def nearest_labeled(lon, lat, comp, labels, tie_eps=1e-9, method="ellipsoid"):
    """Resolve unlabeled points against labelled ones in the same component.

    ``labels`` uses 0 for unlabeled. Each unlabeled point whose component
    contains at least one labelled point receives the label of the nearest
    labelled point (ties within ``tie_eps`` metres go to the smallest
    label). Points in all-unlabeled components stay 0. Labelled points are
    never modified. Returns a new array.
    """
    lon = _as_f8(lon)
    lat = _as_f8(lat)
    comp = np.ascontiguousarray(comp, dtype=np.int64)
    out = np.array(labels, dtype=np.int64, copy=True)

    unlabeled = np.flatnonzero(out == 0)
    labelled = np.flatnonzero(out > 0)
    if unlabeled.size == 0 or labelled.size == 0:
        return out

    # duplicate labelled coordinates are equidistant from everything, so
    # collapsing each coordinate to its smallest label preserves the
    # min-distance / min-label-tie outcome exactly
    lab_lon, lab_lat, lab_comp, lab_val = _dedup_labelled(
        lon[labelled], lat[labelled], comp[labelled], out[labelled]
    )

    for i in unlabeled:
        cand = lab_comp == comp[i]
        if not cand.any():
            continue
        d = _dist_flat(
            np.full(int(cand.sum()), lon[i]),
            np.full(int(cand.sum()), lat[i]),
            lab_lon[cand],
            lab_lat[cand],
            method,
        )
        d_min = d.min()
        out[i] = lab_val[cand][d <= d_min + tie_eps].min()
    return out


def _dedup_labelled(lon, lat, comp, labels):
    """One entry per labelled coordinate, keeping the smallest label."""
    order = np.lexsort((labels, lat, lon))
    lon = lon[order]
    lat = lat[order]
    first = np.ones(lon.size, dtype=bool)
    first[1:] = (lon[1:] != lon[:-1]) | (lat[1:] != lat[:-1])
    return lon[first], lat[first], comp[order][first], labels[order][first]

# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: WGS84 geodesic distance, threshold connected
components, and nearest-labelled assignment.

Same API as ``firecluster.kernels.pykernels``; preferred at import when the
extension has been built.
"""

from libc.math cimport M_PI, asin, atan, atan2, cos, fabs, floor, fmod, sin, sqrt, tan

import numpy as np

cimport numpy as cnp

cnp.import_array()

cdef double WGS84_A = 6378137.0
cdef double WGS84_F = 1.0 / 298.257223563
cdef double WGS84_B = WGS84_A * (1.0 - WGS84_F)
cdef double SPHERE_RADIUS = 6371008.8
cdef double DEG = M_PI / 180.0

cdef double _MIN_M_PER_DEG_LAT = 110500.0
cdef double _MIN_MERIDIAN_RADIUS = WGS84_A * (1.0 - WGS84_F * (2.0 - WGS84_F))

cdef double _VINCENTY_TOL = 1e-12
cdef int _VINCENTY_MAX_ITER = 200

BACKEND_NAME = "compiled"


cdef inline double _wrap_pi(double x) noexcept nogil:
    x = fmod(x + M_PI, 2.0 * M_PI)
    if x < 0.0:
        x += 2.0 * M_PI
    return x - M_PI


cdef double _vincenty(double lon1, double lat1, double lon2, double lat2) noexcept nogil:
    cdef double L = _wrap_pi((lon2 - lon1) * DEG)
    cdef double u1 = atan((1.0 - WGS84_F) * tan(lat1 * DEG))
    cdef double u2 = atan((1.0 - WGS84_F) * tan(lat2 * DEG))
    cdef double sin_u1 = sin(u1), cos_u1 = cos(u1)
    cdef double sin_u2 = sin(u2), cos_u2 = cos(u2)

    cdef double lam = L
    cdef double sigma = 0.0, sin_sigma = 0.0, cos_sigma = 1.0
    cdef double cos_sq_alpha = 1.0, cos_2sm = 0.0
    cdef double sl, cl, t1, t2, sin_alpha, C, lam_new, delta
    cdef int i

    for i in range(_VINCENTY_MAX_ITER):
        sl = sin(lam)
        cl = cos(lam)
        t1 = cos_u2 * sl
        t2 = cos_u1 * sin_u2 - sin_u1 * cos_u2 * cl
        sin_sigma = sqrt(t1 * t1 + t2 * t2)
        cos_sigma = sin_u1 * sin_u2 + cos_u1 * cos_u2 * cl
        sigma = atan2(sin_sigma, cos_sigma)
        if sin_sigma == 0.0:
            sin_alpha = 0.0
        else:
            sin_alpha = cos_u1 * cos_u2 * sl / sin_sigma
        cos_sq_alpha = 1.0 - sin_alpha * sin_alpha
        if cos_sq_alpha == 0.0:
            cos_2sm = 0.0
        else:
            cos_2sm = cos_sigma - 2.0 * sin_u1 * sin_u2 / cos_sq_alpha
        C = WGS84_F / 16.0 * cos_sq_alpha * (4.0 + WGS84_F * (4.0 - 3.0 * cos_sq_alpha))
        lam_new = L + (1.0 - C) * WGS84_F * sin_alpha * (
            sigma + C * sin_sigma * (cos_2sm + C * cos_sigma * (-1.0 + 2.0 * cos_2sm * cos_2sm))
        )
        delta = fabs(lam_new - lam)
        lam = lam_new
        # coincident points give delta == 0 immediately; only near-antipodal
        # pairs can exhaust the budget (we then use the last iterate)
        if delta <= _VINCENTY_TOL:
            break

    cdef double u_sq = cos_sq_alpha * (WGS84_A * WGS84_A - WGS84_B * WGS84_B) / (WGS84_B * WGS84_B)
    cdef double A = 1.0 + u_sq / 16384.0 * (4096.0 + u_sq * (-768.0 + u_sq * (320.0 - 175.0 * u_sq)))
    cdef double B = u_sq / 1024.0 * (256.0 + u_sq * (-128.0 + u_sq * (74.0 - 47.0 * u_sq)))
    cdef double d_sigma = B * sin_sigma * (
        cos_2sm
        + B / 4.0 * (
            cos_sigma * (-1.0 + 2.0 * cos_2sm * cos_2sm)
            - B / 6.0 * cos_2sm * (-3.0 + 4.0 * sin_sigma * sin_sigma) * (-3.0 + 4.0 * cos_2sm * cos_2sm)
        )
    )
    return WGS84_B * A * (sigma - d_sigma)


cdef double _haversine(double lon1, double lat1, double lon2, double lat2) noexcept nogil:
    cdef double phi1 = lat1 * DEG
    cdef double phi2 = lat2 * DEG
    cdef double sp = sin((phi2 - phi1) / 2.0)
    cdef double sl = sin((lon2 - lon1) * DEG / 2.0)
    cdef double h = sp * sp + cos(phi1) * cos(phi2) * sl * sl
    h = sqrt(h)
    if h > 1.0:
        h = 1.0
    return 2.0 * SPHERE_RADIUS * asin(h)


cdef inline double _dist(double lon1, double lat1, double lon2, double lat2, bint sphere) noexcept nogil:
    if sphere:
        return _haversine(lon1, lat1, lon2, lat2)
    return _vincenty(lon1, lat1, lon2, lat2)


cdef bint _method_is_sphere(str method) except? 0:
    if method == "ellipsoid":
        return 0
    if method == "haversine":
        return 1
    raise ValueError(f"unknown distance method {method!r}")


def geodesic_pairs(lon1, lat1, lon2, lat2, str method="ellipsoid"):
    """Element-wise distance in metres between broadcast coordinate arrays."""
    cdef bint sphere = _method_is_sphere(method)
    a1, b1, a2, b2 = np.broadcast_arrays(
        np.asarray(lon1, dtype=np.float64),
        np.asarray(lat1, dtype=np.float64),
        np.asarray(lon2, dtype=np.float64),
        np.asarray(lat2, dtype=np.float64),
    )
    shape = a1.shape
    cdef double[::1] x1 = np.ascontiguousarray(a1.ravel())
    cdef double[::1] y1 = np.ascontiguousarray(b1.ravel())
    cdef double[::1] x2 = np.ascontiguousarray(a2.ravel())
    cdef double[::1] y2 = np.ascontiguousarray(b2.ravel())
    cdef Py_ssize_t n = x1.shape[0]
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    cdef Py_ssize_t i
    with nogil:
        for i in range(n):
            o[i] = _dist(x1[i], y1[i], x2[i], y2[i], sphere)
    return out.reshape(shape)


def geodesic_one_to_many(double lon, double lat, lons, lats, str method="ellipsoid"):
    """Distances in metres from one point to each point of an array."""
    cdef bint sphere = _method_is_sphere(method)
    cdef double[::1] xs = np.ascontiguousarray(lons, dtype=np.float64)
    cdef double[::1] ys = np.ascontiguousarray(lats, dtype=np.float64)
    cdef Py_ssize_t n = xs.shape[0]
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    cdef Py_ssize_t i
    with nogil:
        for i in range(n):
            o[i] = _dist(lon, lat, xs[i], ys[i], sphere)
    return out


cdef inline Py_ssize_t _lower_bound(cnp.int64_t[::1] arr, cnp.int64_t v) noexcept nogil:
    cdef Py_ssize_t lo = 0, hi = arr.shape[0], mid
    while lo < hi:
        mid = (lo + hi) // 2
        if arr[mid] < v:
            lo = mid + 1
        else:
            hi = mid
    return lo


cdef inline Py_ssize_t _upper_bound(cnp.int64_t[::1] arr, cnp.int64_t v) noexcept nogil:
    cdef Py_ssize_t lo = 0, hi = arr.shape[0], mid
    while lo < hi:
        mid = (lo + hi) // 2
        if arr[mid] <= v:
            lo = mid + 1
        else:
            hi = mid
    return lo


cdef inline cnp.int64_t _find(cnp.int64_t[::1] parent, cnp.int64_t x) noexcept nogil:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def _renumber_first_seen(comp):
    vals, first_idx = np.unique(comp, return_index=True)
    rank = np.empty(vals.size, dtype=np.int64)
    rank[np.argsort(first_idx, kind="stable")] = np.arange(vals.size)
    return rank[np.searchsorted(vals, comp)]


def connected_components(lon, lat, double adj_dist, str method="ellipsoid"):
    """Connected components of the <= adj_dist geodesic threshold graph.

    Returns int64 component ids numbered 0..k-1 in order of first
    appearance along the input arrays. Exact duplicate coordinates
    (repeat detections of one satellite cell) are collapsed before the
    search.
    """
    if adj_dist <= 0:
        raise ValueError("adj_dist must be positive")
    lon_arr = np.ascontiguousarray(lon, dtype=np.float64)
    lat_arr = np.ascontiguousarray(lat, dtype=np.float64)
    if lon_arr.size == 0:
        return np.empty(0, dtype=np.int64)
    packed = lon_arr + 1j * lat_arr
    uniq, inverse = np.unique(packed, return_inverse=True)
    if uniq.size < lon_arr.size:
        roots = _component_roots(
            np.ascontiguousarray(uniq.real), np.ascontiguousarray(uniq.imag), adj_dist, method
        )
        return _renumber_first_seen(roots[inverse])
    return _renumber_first_seen(_component_roots(lon_arr, lat_arr, adj_dist, method))


def _component_roots(lon, lat, double adj_dist, str method):
    cdef bint sphere = _method_is_sphere(method)
    cdef double[::1] x = lon
    cdef double[::1] y = lat
    cdef Py_ssize_t n = x.shape[0]

    # grid cells sized so that neighbours within adj_dist are at most one
    # cell apart per axis (see pykernels._grid_cells for the bounds)
    cdef double cell_lat_deg = adj_dist / _MIN_M_PER_DEG_LAT
    cdef double abs_lat_max = 0.0
    cdef Py_ssize_t i, j, pos
    for i in range(n):
        if fabs(y[i]) > abs_lat_max:
            abs_lat_max = fabs(y[i])
    cdef double margin_deg = (adj_dist / (2.0 * _MIN_MERIDIAN_RADIUS)) / DEG
    cdef double ref_lat = abs_lat_max + margin_deg
    if ref_lat > 89.99:
        ref_lat = 89.99
    cdef double cos_ref = cos(ref_lat * DEG)
    if cos_ref < 1e-6:
        cos_ref = 1e-6
    cdef double cell_lon_deg = cell_lat_deg / cos_ref
    if cell_lon_deg > 361.0:
        cell_lon_deg = 361.0

    ix_arr = np.empty(n, dtype=np.int64)
    iy_arr = np.empty(n, dtype=np.int64)
    cdef cnp.int64_t[::1] ix = ix_arr
    cdef cnp.int64_t[::1] iy = iy_arr
    cdef cnp.int64_t ix_min = 0, iy_min = 0, ix_max = 0
    with nogil:
        for i in range(n):
            ix[i] = <cnp.int64_t> floor(x[i] / cell_lon_deg)
            iy[i] = <cnp.int64_t> floor(y[i] / cell_lat_deg)
            if i == 0:
                ix_min = ix[0]
                iy_min = iy[0]
            else:
                if ix[i] < ix_min:
                    ix_min = ix[i]
                if iy[i] < iy_min:
                    iy_min = iy[i]
        for i in range(n):
            ix[i] -= ix_min
            iy[i] -= iy_min
            if ix[i] > ix_max:
                ix_max = ix[i]

    cdef cnp.int64_t span = ix_max + 2  # pad: +-1 column offsets never alias occupied cells
    key_arr = np.empty(n, dtype=np.int64)
    cdef cnp.int64_t[::1] key = key_arr
    for i in range(n):
        key[i] = iy[i] * span + ix[i]
    order_arr = np.argsort(key_arr, kind="stable")
    cdef cnp.int64_t[::1] order = order_arr
    skey_arr = key_arr[order_arr]
    cdef cnp.int64_t[::1] skey = skey_arr

    parent_arr = np.arange(n, dtype=np.int64)
    cdef cnp.int64_t[::1] parent = parent_arr
    cdef cnp.int64_t dy, dx, q, ri, rj
    cdef Py_ssize_t lo, hi
    cdef double d

    with nogil:
        for i in range(n):
            for dy in range(-1, 2):
                for dx in range(-1, 2):
                    q = key[i] + dy * span + dx
                    lo = _lower_bound(skey, q)
                    hi = _upper_bound(skey, q)
                    for pos in range(lo, hi):
                        j = order[pos]
                        if j >= i:
                            continue
                        d = _dist(x[i], y[i], x[j], y[j], sphere)
                        if d <= adj_dist:
                            ri = _find(parent, i)
                            rj = _find(parent, j)
                            if ri != rj:
                                if ri < rj:
                                    parent[rj] = ri
                                else:
                                    parent[ri] = rj

    roots_arr = np.empty(n, dtype=np.int64)
    cdef cnp.int64_t[::1] roots = roots_arr
    with nogil:
        for i in range(n):
            roots[i] = _find(parent, i)
    return roots_arr


def nearest_labeled(lon, lat, comp, labels, double tie_eps=1e-9, str method="ellipsoid"):
    """Resolve unlabeled points against labelled ones in the same component.

    ``labels`` uses 0 for unlabeled; ties within ``tie_eps`` metres go to
    the smallest label. Returns a new array; labelled points are never
    modified and fresh assignments never cascade.
    """
    cdef bint sphere = _method_is_sphere(method)
    lon_arr = np.ascontiguousarray(lon, dtype=np.float64)
    lat_arr = np.ascontiguousarray(lat, dtype=np.float64)
    comp_arr = np.ascontiguousarray(comp, dtype=np.int64)
    out_arr = np.array(labels, dtype=np.int64, copy=True)
    cdef double[::1] x = lon_arr
    cdef double[::1] y = lat_arr
    cdef cnp.int64_t[::1] c = comp_arr
    cdef cnp.int64_t[::1] out = out_arr
    cdef Py_ssize_t n = x.shape[0]

    labelled = np.flatnonzero(out_arr > 0)
    if labelled.size == 0:
        return out_arr

    # duplicate labelled coordinates are equidistant from everything, so
    # collapsing each coordinate to its smallest label preserves the
    # min-distance / min-label-tie outcome exactly
    lab_lon0 = lon_arr[labelled]
    lab_lat0 = lat_arr[labelled]
    lab_val0 = out_arr[labelled]
    order = np.lexsort((lab_val0, lab_lat0, lab_lon0))
    lab_lon0 = lab_lon0[order]
    lab_lat0 = lab_lat0[order]
    first = np.ones(lab_lon0.size, dtype=bool)
    first[1:] = (lab_lon0[1:] != lab_lon0[:-1]) | (lab_lat0[1:] != lab_lat0[:-1])

    cdef double[::1] lab_x = np.ascontiguousarray(lab_lon0[first])
    cdef double[::1] lab_y = np.ascontiguousarray(lab_lat0[first])
    cdef cnp.int64_t[::1] lab_c = np.ascontiguousarray(comp_arr[labelled][order][first])
    cdef cnp.int64_t[::1] lab_v = np.ascontiguousarray(lab_val0[order][first])
    cdef Py_ssize_t n_lab = lab_x.shape[0]

    dist_buf_arr = np.empty(n_lab, dtype=np.float64)
    cdef double[::1] dist_buf = dist_buf_arr
    cdef Py_ssize_t i, k
    cdef cnp.int64_t best
    cdef double d, d_min

    with nogil:
        for i in range(n):
            if out[i] != 0:
                continue
            d_min = -1.0
            for k in range(n_lab):
                if lab_c[k] != c[i]:
                    dist_buf[k] = -1.0
                    continue
                d = _dist(x[i], y[i], lab_x[k], lab_y[k], sphere)
                dist_buf[k] = d
                if d_min < 0.0 or d < d_min:
                    d_min = d
            if d_min < 0.0:
                continue
            best = 0
            for k in range(n_lab):
                d = dist_buf[k]
                if d >= 0.0 and d <= d_min + tie_eps:
                    if best == 0 or lab_v[k] < best:
                        best = lab_v[k]
            out[i] = best
    return out_arr

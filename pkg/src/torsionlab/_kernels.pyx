# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled grid kernels for the five-point Poisson solver.

Every routine works on full nodal arrays of shape ``(nx + 1, ny + 1)``. The
interior of row ``i`` (``1 <= i <= nx - 1``) is ``1 <= j <= jmax[i]``; every
other entry is a boundary or exterior node and is never written. Loops run in
a fixed order so results are reproducible bit for bit.
"""

cdef inline Py_ssize_t _rows(double[:, ::1] a) nogil:
    return a.shape[0] - 1


def matvec(double[:, ::1] u, double[:, ::1] out, double cx, double cy,
           Py_ssize_t[::1] jmax):
    """``out = A u`` on interior nodes, ``A`` the negative five-point Laplacian."""
    cdef Py_ssize_t i, j, nx = _rows(u)
    cdef double c = 2.0 * (cx + cy)
    with nogil:
        for i in range(1, nx):
            for j in range(1, jmax[i] + 1):
                out[i, j] = (c * u[i, j] - cx * (u[i - 1, j] + u[i + 1, j])
                             - cy * (u[i, j - 1] + u[i, j + 1]))


def residual(double[:, ::1] u, double[:, ::1] f, double[:, ::1] r, double cx,
             double cy, Py_ssize_t[::1] jmax):
    """``r = f - A u`` on interior nodes."""
    cdef Py_ssize_t i, j, nx = _rows(u)
    cdef double c = 2.0 * (cx + cy)
    with nogil:
        for i in range(1, nx):
            for j in range(1, jmax[i] + 1):
                r[i, j] = f[i, j] - (c * u[i, j] - cx * (u[i - 1, j] + u[i + 1, j])
                                     - cy * (u[i, j - 1] + u[i, j + 1]))


def smooth(double[:, ::1] u, double[:, ::1] f, double cx, double cy,
           Py_ssize_t[::1] jmax, int sweeps, bint reverse):
    """Red-black Gauss-Seidel; ``reverse`` visits black before red."""
    cdef Py_ssize_t i, j, j0, nx = _rows(u)
    cdef int s, pass_, color
    cdef double inv = 1.0 / (2.0 * (cx + cy))
    with nogil:
        for s in range(sweeps):
            for pass_ in range(2):
                color = (1 - pass_) if reverse else pass_
                for i in range(1, nx):
                    j0 = 1 + ((i + 1 + color) % 2)
                    for j in range(j0, jmax[i] + 1, 2):
                        u[i, j] = (f[i, j] + cx * (u[i - 1, j] + u[i + 1, j])
                                   + cy * (u[i, j - 1] + u[i, j + 1])) * inv


def restrict(double[:, ::1] rf, double[:, ::1] rc, Py_ssize_t[::1] jmax_c):
    """Full-weighting restriction onto coarse interior nodes."""
    cdef Py_ssize_t I, J, i, j, nxc = _rows(rc)
    with nogil:
        for I in range(1, nxc):
            i = 2 * I
            for J in range(1, jmax_c[I] + 1):
                j = 2 * J
                rc[I, J] = (4.0 * rf[i, j]
                            + 2.0 * (rf[i - 1, j] + rf[i + 1, j] + rf[i, j - 1] + rf[i, j + 1])
                            + rf[i - 1, j - 1] + rf[i - 1, j + 1]
                            + rf[i + 1, j - 1] + rf[i + 1, j + 1]) * 0.0625


def prolong_add(double[:, ::1] ec, double[:, ::1] uf, Py_ssize_t[::1] jmax_f):
    """Add the bilinear interpolant of ``ec`` to fine interior nodes."""
    cdef Py_ssize_t i, j, I, J, nx = _rows(uf)
    cdef double v
    with nogil:
        for i in range(1, nx):
            I = i // 2
            for j in range(1, jmax_f[i] + 1):
                J = j // 2
                if i % 2 == 0:
                    if j % 2 == 0:
                        v = ec[I, J]
                    else:
                        v = 0.5 * (ec[I, J] + ec[I, J + 1])
                else:
                    if j % 2 == 0:
                        v = 0.5 * (ec[I, J] + ec[I + 1, J])
                    else:
                        v = 0.25 * (ec[I, J] + ec[I + 1, J] + ec[I, J + 1] + ec[I + 1, J + 1])
                uf[i, j] += v


def dot(double[:, ::1] a, double[:, ::1] b, Py_ssize_t[::1] jmax):
    """Interior inner product, accumulated row by row in index order."""
    cdef Py_ssize_t i, j, nx = _rows(a)
    cdef double total = 0.0, row
    with nogil:
        for i in range(1, nx):
            row = 0.0
            for j in range(1, jmax[i] + 1):
                row += a[i, j] * b[i, j]
            total += row
    return total
